use birational_core::verify::Part;
use birational_core::{BigRational, Complex64, Permutation, VarIndex};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "birat", version, about = "Birational maps on Schubert cells of GL(r)")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Worker threads for sweeps; 0 or unset uses one per core.
    #[arg(long, env = "BIRAT_THREADS", global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// A single JSON document.
    #[value(alias = "json")]
    Structured,
    Tex,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The forward images u[a,b] as rational functions of the n[a,b].
    Map(PermArgs),
    /// The inverse map n[a,b] in terms of the u[a,b].
    Inverse(PermArgs),
    /// The decomposition u = R_L + R_1 + R_2 of one image.
    Split(PermVarArgs),
    /// Superdiagonal, diagonal and block determinants of the UDL factorization of wu.
    Udl(PermArgs),
    /// The Jacobian in the square order and its determinant.
    Jacobian(PermArgs),
    /// The invertible block of wu attached to one free variable.
    Ksystem(PermVarArgs),
    /// Exponents and parities of the transformed character.
    Exponents(ExponentArgs),
    /// Bounds on the preimage of the box [-M, M]^d.
    Bounds(BoundsArgs),
    /// Run the verification batteries over Weyl elements of one rank.
    Verify(VerifyArgs),
    /// Jacquet integrals.
    #[command(subcommand)]
    Jacquet(JacquetCommand),
    /// The Bessel kernel after the change of variables.
    Bessel(BesselArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Map(_) => "map",
            Command::Inverse(_) => "inverse",
            Command::Split(_) => "split",
            Command::Udl(_) => "udl",
            Command::Jacobian(_) => "jacobian",
            Command::Ksystem(_) => "ksystem",
            Command::Exponents(_) => "exponents",
            Command::Bounds(_) => "bounds",
            Command::Verify(_) => "verify",
            Command::Jacquet(JacquetCommand::Gl2(_)) => "jacquet gl2",
            Command::Jacquet(JacquetCommand::Gl3Check(_)) => "jacquet gl3-check",
            Command::Jacquet(JacquetCommand::Integrand(_)) => "jacquet integrand",
            Command::Bessel(_) => "bessel",
        }
    }
}

#[derive(Debug, Args)]
pub struct PermArgs {
    /// Weyl element in one-line notation, e.g. 3,2,1.
    #[arg(long, value_parser = parse_perm)]
    pub perm: Permutation,
}

#[derive(Debug, Args)]
pub struct PermVarArgs {
    #[arg(long, value_parser = parse_perm)]
    pub perm: Permutation,
    /// Free variable as a,b.
    #[arg(long = "var", value_parser = parse_var)]
    pub var: VarIndex,
}

#[derive(Debug, Args)]
pub struct ExponentArgs {
    #[arg(long, value_parser = parse_perm)]
    pub perm: Permutation,
    /// Comma-separated complex λ; omitted for symbolic output only.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex_list)]
    pub lambda: Option<ComplexList>,
    /// Comma-separated δ in {0,1}; defaults to zeros.
    #[arg(long, value_parser = parse_parity_list)]
    pub delta: Option<ParityList>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_parser = parse_perm)]
    pub perm: Permutation,
    /// Half-width of the box, as p/q.
    #[arg(long = "M", default_value = "1", value_parser = parse_rational)]
    pub m: BigRational,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Rank.
    #[arg(long)]
    pub r: usize,
    /// Check this many seeded random elements instead of all of them.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated parts (i, ii, iii, iv, v, identities, bounds) or `all`.
    #[arg(long, default_value = "all", value_parser = parse_parts)]
    pub parts: PartList,
    /// Random points per numeric round trip.
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Samples per containment check.
    #[arg(long, default_value_t = 10_000)]
    pub containment_samples: usize,
    /// Include every element's report in structured output.
    #[arg(long)]
    pub details: bool,
}

#[derive(Debug, Subcommand)]
pub enum JacquetCommand {
    /// The GL(2) integral ∫ e(x)(1+x²)^(-μ) dx.
    Gl2(Gl2Args),
    /// Change of variables for the longest element of GL(3).
    Gl3Check(Gl3Args),
    /// The integrand τ(wu) in the coordinates n.
    Integrand(IntegrandArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Ibp,
}

#[derive(Debug, Args)]
pub struct Gl2Args {
    /// Complex parameter, e.g. 0.25 or 1+0.5i.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub mu: Complex64,
    #[arg(long, value_enum, default_value_t = Method::Direct)]
    pub method: Method,
    /// Regularization depth for the ibp method.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = 1e-13)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-11)]
    pub rel_tol: f64,
    /// Point past which the asymptotic tail is used.
    #[arg(long, default_value_t = 20.0)]
    pub radius: f64,
}

#[derive(Debug, Args)]
pub struct Gl3Args {
    #[arg(long, allow_hyphen_values = true, default_value = "0.4,0.5i,-0.4", value_parser = parse_complex_list)]
    pub lambda: ComplexList,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Largest accepted relative gap between the two sides.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct IntegrandArgs {
    #[arg(long, value_parser = parse_perm)]
    pub perm: Permutation,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex_list)]
    pub lambda: ComplexList,
    #[arg(long, value_parser = parse_parity_list)]
    pub delta: Option<ParityList>,
}

#[derive(Debug, Args)]
pub struct BesselArgs {
    #[arg(long, value_parser = parse_perm)]
    pub perm: Permutation,
    /// Comma-separated ν, one per free variable; defaults to 1/2 each.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex_list)]
    pub nu: Option<ComplexList>,
    /// Comma-separated signs ζ, one more than the free variables; defaults to +1.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex_list)]
    pub zeta: Option<ComplexList>,
}

// clap treats a `Vec<T>` field as repeated occurrences, hence the wrappers.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexList(pub Vec<Complex64>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityList(pub Vec<u8>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartList(pub Vec<Part>);

fn parse_perm(s: &str) -> Result<Permutation, String> {
    Permutation::parse(s).map_err(|e| e.to_string())
}

fn parse_var(s: &str) -> Result<VarIndex, String> {
    s.parse().map_err(|e: birational_core::Error| e.to_string())
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.trim().parse().map_err(|_| format!("`{s}` is not a rational p/q"))
}

fn parse_parts(s: &str) -> Result<PartList, String> {
    Part::parse_list(s).map(PartList).map_err(|e| e.to_string())
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("`{s}` is not a complex number a+bi");
    let num = |x: &str| -> Result<f64, String> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse().map_err(|_| bad()),
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return t.parse().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // the sign that starts the imaginary part, skipping exponent signs
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => Ok(Complex64::new(body[..i].parse().map_err(|_| bad())?, num(&body[i..])?)),
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

fn parse_complex_list(s: &str) -> Result<ComplexList, String> {
    s.split(',')
        .map(parse_complex)
        .collect::<Result<_, _>>()
        .map(ComplexList)
}

fn parse_parity_list(s: &str) -> Result<ParityList, String> {
    s.split(',')
        .map(|x| match x.trim() {
            "0" => Ok(0),
            "1" => Ok(1),
            other => Err(format!("parity must be 0 or 1, got `{other}`")),
        })
        .collect::<Result<_, _>>()
        .map(ParityList)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("0.25").unwrap(), c(0.25, 0.0));
        assert_eq!(parse_complex("-0.5").unwrap(), c(-0.5, 0.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("1-2.5i").unwrap(), c(1.0, -2.5));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("3i").unwrap(), c(0.0, 3.0));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex(" 2 - i ").unwrap(), c(2.0, -1.0));
        assert!(parse_complex("1+2j").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_parity_list("0,1,1").unwrap().0, vec![0, 1, 1]);
        assert!(parse_parity_list("2").is_err());
        assert_eq!(parse_complex_list("1,0,-1").unwrap().0.len(), 3);
        assert_eq!(parse_rational("3/6").unwrap(), BigRational::new(1.into(), 2.into()));
    }
}
