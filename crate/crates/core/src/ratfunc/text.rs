//! Canonical text rendering and parsing.
//!
//! Variables render as `n[a,b]` and `u[a,b]`, terms from the largest monomial
//! down, factors joined by `*`, powers with `^`. A rational function renders
//! as `num/den` with either side parenthesized unless it is a single factor.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{Monomial, Poly, RatFunc, Var};
use crate::error::{Error, Result};
use crate::weyl::{VarIndex, MAX_RANK};

fn render_monomial(m: &Monomial, sep: &str, var: impl Fn(Var) -> String, pow: impl Fn(u32) -> String) -> String {
    m.factors()
        .iter()
        .map(|&(v, e)| {
            if e == 1 {
                var(v)
            } else {
                format!("{}{}", var(v), pow(e))
            }
        })
        .collect::<Vec<_>>()
        .join(sep)
}

fn render_with(p: &Poly, sep: &str, var: impl Fn(Var) -> String + Copy, pow: impl Fn(u32) -> String + Copy) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        if m.is_one() {
            out.push_str(&mag.to_string());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.to_string());
                out.push_str(sep);
            }
            out.push_str(&render_monomial(m, sep, var, pow));
        }
    }
    out
}

pub fn render_poly(p: &Poly) -> String {
    render_with(p, "*", |v| v.to_string(), |e| format!("^{e}"))
}

fn tex_var(v: Var) -> String {
    match v {
        Var::N(i) => format!("n_{{{},{}}}", i.a(), i.b()),
        Var::U(i) => format!("u_{{{},{}}}", i.a(), i.b()),
    }
}

pub fn render_poly_tex(p: &Poly) -> String {
    render_with(p, " ", tex_var, |e| format!("^{{{e}}}"))
}

/// Whether `p` renders as a single factor (an integer or one variable power).
fn is_atomic(p: &Poly) -> bool {
    match p.as_term() {
        None => p.is_zero(),
        Some((m, c)) => (m.is_one() && !c.is_negative()) || (c.is_one() && m.factors().len() == 1),
    }
}

pub fn render(f: &RatFunc) -> String {
    let num = render_poly(f.num());
    if f.den().is_one() {
        return num;
    }
    let num = if f.num().len() > 1 { format!("({num})") } else { num };
    let den = render_poly(f.den());
    let den = if is_atomic(f.den()) { den } else { format!("({den})") };
    format!("{num}/{den}")
}

pub fn render_tex(f: &RatFunc) -> String {
    if f.den().is_one() {
        return render_poly_tex(f.num());
    }
    format!("\\frac{{{}}}{{{}}}", render_poly_tex(f.num()), render_poly_tex(f.den()))
}

/// Parses the canonical format (and any expression built from integers,
/// variables, `+ - * / ^` and parentheses).
pub fn parse(text: &str) -> Result<RatFunc> {
    let mut p = Parser {
        s: text.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = acc.checked_div(&d).map_err(|_| Error::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let e = self.integer()?;
            let e: i32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            let at = self.pos;
            return base.pow(if neg { -e } else { e }).map_err(|_| Error::Parse {
                pos: at,
                msg: "negative power of zero".into(),
            });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let digits = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("nonempty digit string"))
    }

    fn index(&mut self) -> Result<usize> {
        let at = self.pos;
        let v = self.integer()?;
        let v: usize = v.try_into().map_err(|_| self.err("index too large"))?;
        if v == 0 || v > MAX_RANK {
            return Err(Error::Parse {
                pos: at,
                msg: format!("index {v} outside 1..={MAX_RANK}"),
            });
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c @ (b'n' | b'u')) => {
                self.pos += 1;
                self.expect(b'[')?;
                let a = self.index()?;
                self.expect(b',')?;
                let b = self.index()?;
                self.expect(b']')?;
                let i = VarIndex::new(a, b);
                Ok(RatFunc::var(if c == b'n' { Var::N(i) } else { Var::U(i) }))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(RatFunc::from_poly(Poly::constant(v)))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(a: usize, b: usize) -> RatFunc {
        RatFunc::n(a, b)
    }

    #[test]
    fn canonical_rendering() {
        let f = (&n(1, 3) * &(&n(1, 2) + &n(2, 3))) / n(2, 3);
        assert_eq!(f.to_string(), "(n[1,2]*n[1,3] + n[1,3]*n[2,3])/n[2,3]");
        assert_eq!((-(&n(1, 2) * &n(1, 3))).to_string(), "-n[1,2]*n[1,3]");
        let g = RatFunc::one() / (&n(1, 2) * &n(1, 3));
        assert_eq!(g.to_string(), "1/(n[1,2]*n[1,3])");
        assert_eq!(RatFunc::zero().to_string(), "0");
        let h = &(&n(2, 3) * &n(2, 3)).scale(&crate::ratfunc::rat(3, 1)) - &RatFunc::integer(2);
        assert_eq!(h.to_string(), "3*n[2,3]^2 - 2");
        assert_eq!(render_tex(&f), "\\frac{n_{1,2} n_{1,3} + n_{1,3} n_{2,3}}{n_{2,3}}");
    }

    #[test]
    fn parse_round_trip() {
        for text in [
            "(n[1,2]*n[1,3] + n[1,3]*n[2,3])/n[2,3]",
            "-n[1,2]*n[1,3]",
            "1/(n[1,2]*n[1,3])",
            "u[1,2]*u[2,3]^2/u[1,3] - u[2,3]",
            "7/3",
            "3*n[2,3]^2 - 2",
        ] {
            let f = parse(text).unwrap();
            let again = parse(&f.to_string()).unwrap();
            assert_eq!(f, again, "{text}");
            assert_eq!(f.to_string(), again.to_string());
        }
        assert_eq!(parse("n[1,2]^-1").unwrap(), RatFunc::one() / n(1, 2));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse("n[1,2"), Err(Error::Parse { .. })));
        assert!(matches!(parse("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(parse("x"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse("n[0,2]"), Err(Error::Parse { .. })));
        assert!(matches!(parse("1 2"), Err(Error::Parse { .. })));
    }
}
