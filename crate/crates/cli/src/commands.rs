use std::fmt::Write as _;

use birational_core::biratmap::{
    domain_bounds, exponents, forward_map, inverse_map, jacobian, k_system, udl_decompose,
};
use birational_core::jacquet::{
    bessel_kernel, gl2_continued, gl2_direct, gl2_reference, gl3_change_of_variables_check, gl3_default_params,
    transformed_integrand, BumpSpec, Estimate, IBPScheme, IntegrandDescriptor, QuadratureParams,
};
use birational_core::ratfunc::render_tex;
use birational_core::verify::{verify_sweep, SweepConfig};
use birational_core::{Complex64, Permutation, RatFunc, RatMatrix, Result};
use serde_json::{json, Value};

use crate::args::*;
use crate::output::{align, complex_json, complex_text, Header, Output};

pub fn run(command: &Command, header: &mut Header) -> Result<Output> {
    match command {
        Command::Map(a) => map(&a.perm, header),
        Command::Inverse(a) => inverse(&a.perm, header),
        Command::Split(a) => split(a, header),
        Command::Udl(a) => udl(&a.perm, header),
        Command::Jacobian(a) => jacobian_cmd(&a.perm, header),
        Command::Ksystem(a) => ksystem(a, header),
        Command::Exponents(a) => exponents_cmd(a, header),
        Command::Bounds(a) => bounds(a, header),
        Command::Verify(a) => verify(a, header),
        Command::Jacquet(JacquetCommand::Gl2(a)) => gl2(a, header),
        Command::Jacquet(JacquetCommand::Gl3Check(a)) => gl3(a, header),
        Command::Jacquet(JacquetCommand::Integrand(a)) => integrand(a, header),
        Command::Bessel(a) => bessel(a, header),
    }
}

fn strings<'a>(items: impl Iterator<Item = &'a RatFunc>) -> Vec<String> {
    items.map(ToString::to_string).collect()
}

fn matrix_json(m: &RatMatrix) -> Value {
    let rows: Vec<Vec<String>> = (0..m.nrows()).map(|i| strings(m.row(i).iter())).collect();
    json!(rows)
}

fn matrix_tex(m: &RatMatrix) -> String {
    let rows: Vec<String> = (0..m.nrows())
        .map(|i| m.row(i).iter().map(render_tex).collect::<Vec<_>>().join(" & "))
        .collect();
    format!("\\begin{{pmatrix}} {} \\end{{pmatrix}}", rows.join(" \\\\ "))
}

fn var_tex(letter: &str, a: impl std::fmt::Display, b: impl std::fmt::Display) -> String {
    format!("{letter}_{{{a},{b}}}")
}

/// `key = value` lines, a JSON object of the same pairs and an align block.
fn equations(letter: &str, rows: Vec<(birational_core::VarIndex, &RatFunc)>) -> Output {
    let mut text = String::new();
    let mut obj = serde_json::Map::new();
    let mut tex = Vec::new();
    for (v, f) in rows {
        let _ = writeln!(text, "{letter}[{v}] = {f}");
        obj.insert(v.to_string(), Value::String(f.to_string()));
        tex.push((var_tex(letter, v.a(), v.b()), render_tex(f)));
    }
    Output::new(text, Value::Object(obj)).with_tex(align(&tex))
}

fn map(w: &Permutation, h: &mut Header) -> Result<Output> {
    h.set("perm", w);
    let fm = forward_map(w);
    Ok(equations("u", fm.images().collect()))
}

fn inverse(w: &Permutation, h: &mut Header) -> Result<Output> {
    h.set("perm", w);
    let inv = inverse_map(w)?;
    Ok(equations("n", inv.iter().collect()))
}

fn split(a: &PermVarArgs, h: &mut Header) -> Result<Output> {
    h.set("perm", &a.perm);
    h.set("var", a.var);
    let fm = forward_map(&a.perm);
    let (rl, r1, r2) = fm.split(a.var)?;
    let u = fm.image(a.var).expect("split succeeded on a free variable");
    let text = format!("u[{}] = {u}\nR_L = {rl}\nR_1 = {r1}\nR_2 = {r2}\n", a.var);
    let json = json!({ "u": u.to_string(), "R_L": rl.to_string(), "R_1": r1.to_string(), "R_2": r2.to_string() });
    let tex = align(&[
        (var_tex("u", a.var.a(), a.var.b()), render_tex(u)),
        ("R_L".into(), render_tex(&rl)),
        ("R_1".into(), render_tex(&r1)),
        ("R_2".into(), render_tex(&r2)),
    ]);
    Ok(Output::new(text, json).with_tex(tex))
}

fn udl(w: &Permutation, h: &mut Header) -> Result<Output> {
    h.set("perm", w);
    let d = udl_decompose(&forward_map(w))?;
    let mut text = String::new();
    let mut tex = Vec::new();
    for (i, x) in d.superdiag.iter().enumerate() {
        let _ = writeln!(text, "x[{},{}] = {x}", i + 1, i + 2);
        tex.push((var_tex("x", i + 1, i + 2), render_tex(x)));
    }
    for (i, b) in d.diag.iter().enumerate() {
        let _ = writeln!(text, "b[{},{}] = {b}", i + 1, i + 1);
        tex.push((var_tex("b", i + 1, i + 1), render_tex(b)));
    }
    for (i, t) in d.t_dets.iter().enumerate() {
        let _ = writeln!(text, "det T_{i} = {t}");
        tex.push((format!("\\det T_{{{i}}}"), render_tex(t)));
    }
    for (i, f) in d.f_dets.iter().enumerate().skip(1) {
        let _ = writeln!(text, "det F_{i} = {f}");
        tex.push((format!("\\det F_{{{i}}}"), render_tex(f)));
    }
    let json = json!({
        "superdiag": strings(d.superdiag.iter()),
        "diag": strings(d.diag.iter()),
        "t_dets": strings(d.t_dets.iter()),
        "f_dets": strings(d.f_dets.iter().skip(1)),
    });
    Ok(Output::new(text, json).with_tex(align(&tex)))
}

fn jacobian_cmd(w: &Permutation, h: &mut Header) -> Result<Output> {
    h.set("perm", w);
    let j = jacobian(&forward_map(w))?;
    let upper = j.is_upper_triangular();
    let matches = j.det == j.predicted;
    let order: Vec<String> = j.order.iter().map(ToString::to_string).collect();
    let text = format!(
        "order: {}\n{}det = {}\npredicted = {}\nt_w = {}\nupper triangular: {upper}\ndet matches: {matches}\n",
        order.join(" "),
        j.matrix,
        j.det,
        j.predicted,
        j.t_w
    );
    let json = json!({
        "order": order,
        "matrix": matrix_json(&j.matrix),
        "det": j.det.to_string(),
        "predicted": j.predicted.to_string(),
        "t_w": j.t_w,
        "upper_triangular": upper,
        "det_matches": matches,
    });
    let tex = format!(
        "\\[ J = {} \\]\n{}",
        matrix_tex(&j.matrix),
        align(&[("\\det J".into(), render_tex(&j.det))])
    );
    Ok(Output::new(text, json).with_tex(tex).passed(upper && matches))
}

fn ksystem(a: &PermVarArgs, h: &mut Header) -> Result<Output> {
    h.set("perm", &a.perm);
    h.set("var", a.var);
    let k = k_system(&forward_map(&a.perm), a.var)?;
    let predicted = k.shape.predicted_det();
    let matches = k.det_k == predicted;
    let list = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    let det_set: Vec<String> = k.shape.k_det_set.iter().map(ToString::to_string).collect();
    let text = format!(
        "columns: {}\nrows: {}\ndet kappa = {}\nK =\n{}K (symbolic) =\n{}det K = {}\npredicted = {predicted}\ndet matches: {matches}\n",
        list(&k.shape.k_col),
        list(&k.shape.rows),
        k.shape.kappa_det,
        k.k,
        k.k_symbolic,
        k.det_k
    );
    let json = json!({
        "columns": k.shape.k_col,
        "rows": k.shape.rows,
        "kappa": k.shape.kappa,
        "kappa_det": k.shape.kappa_det,
        "det_set": det_set,
        "k": matrix_json(&k.k),
        "k_symbolic": matrix_json(&k.k_symbolic),
        "det_k": k.det_k.to_string(),
        "predicted": predicted.to_string(),
        "det_matches": matches,
    });
    let tex = format!(
        "\\[ K = {} \\]\n{}",
        matrix_tex(&k.k_symbolic),
        align(&[("\\det K".into(), render_tex(&k.det_k))])
    );
    Ok(Output::new(text, json).with_tex(tex).passed(matches))
}

/// The shortest form that parses back to the same value.
fn complex_short(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn complex_list_text(v: &[Complex64]) -> String {
    v.iter().map(|z| complex_short(*z)).collect::<Vec<_>>().join(",")
}

fn resolve_delta(delta: &Option<ParityList>, r: usize) -> Vec<u8> {
    delta.as_ref().map(|d| d.0.clone()).unwrap_or_else(|| vec![0; r])
}

fn exponents_cmd(a: &ExponentArgs, h: &mut Header) -> Result<Output> {
    let r = a.perm.rank();
    h.set("perm", &a.perm);
    let delta = resolve_delta(&a.delta, r);
    if let Some(l) = &a.lambda {
        h.set("lambda", complex_list_text(&l.0));
    }
    h.set(
        "delta",
        delta.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
    );
    let data = exponents(&a.perm);
    let mut text = String::new();
    let mut entries = Vec::new();
    for e in &data.entries {
        let _ = writeln!(
            text,
            "n[{}]: |n|^({}) sgn(n)^({})  [character {}, measure {}]",
            e.alpha, e.total, e.sign, e.character, e.measure
        );
        entries.push(json!({
            "alpha": e.alpha.to_string(),
            "measure": e.measure,
            "character": e.character.to_string(),
            "total": e.total.to_string(),
            "sign": e.sign.to_string(),
        }));
    }
    for (i, f) in data.diag.iter().enumerate() {
        let _ = writeln!(text, "|b[{},{}]|^({f})", i + 1, i + 1);
    }
    let _ = writeln!(text, "global sign parity: {}", data.global_sign);
    let mut json = json!({
        "entries": entries,
        "diag": data.diag.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "global_sign": data.global_sign.to_string(),
    });
    if let Some(l) = &a.lambda {
        let inst = data.instantiate(&l.0, &delta)?;
        let mut values = Vec::new();
        for (alpha, exp, parity) in &inst.entries {
            let _ = writeln!(text, "n[{alpha}]: exponent {} parity {parity}", complex_text(*exp));
            values.push(json!({ "alpha": alpha.to_string(), "exponent": complex_json(*exp), "parity": parity }));
        }
        let _ = writeln!(text, "global sign: {}", inst.global_sign);
        json["instantiated"] = json!({ "entries": values, "global_sign": inst.global_sign });
    }
    Ok(Output::new(text, json))
}

fn bounds(a: &BoundsArgs, h: &mut Header) -> Result<Output> {
    h.set("perm", &a.perm);
    h.set("M", &a.m);
    let b = domain_bounds(&forward_map(&a.perm), &a.m)?;
    let violations = b.structural_violations();
    let mut text = String::new();
    let mut entries = Vec::new();
    let mut tex = Vec::new();
    for (j, e) in b.entries.iter().enumerate() {
        let _ = writeln!(
            text,
            "beta_{} = n[{}]: t = {}, du/dn = {}, f = {}, h = {}",
            j + 1,
            e.beta,
            e.t,
            e.derivative,
            e.f,
            e.h
        );
        entries.push(json!({
            "beta": e.beta.to_string(),
            "t": e.t,
            "derivative": e.derivative.to_string(),
            "f": e.f.to_string(),
            "h": e.h.to_string(),
        }));
        tex.push((format!("h_{{{}}}", j + 1), render_tex(&e.h)));
    }
    for v in &violations {
        let _ = writeln!(text, "violation: {v}");
    }
    let json = json!({ "entries": entries, "violations": violations });
    Ok(Output::new(text, json)
        .with_tex(align(&tex))
        .passed(violations.is_empty()))
}

fn verify(a: &VerifyArgs, h: &mut Header) -> Result<Output> {
    let parts = &a.parts.0;
    let mut config = match a.sample {
        Some(count) => SweepConfig::sample(a.r, count, a.seed, parts),
        None => SweepConfig::exhaustive(a.r, parts),
    };
    config.options.seed = a.seed;
    config.options.points = a.points;
    config.options.containment_samples = a.containment_samples;
    h.set("r", a.r);
    h.set("mode", config.mode.to_string());
    h.set("seed", a.seed);
    h.set(
        "parts",
        parts.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
    );
    h.set("points", a.points);
    h.set("containment_samples", a.containment_samples);
    h.set("M", &config.options.m);
    let report = verify_sweep(&config)?;
    let mut json = serde_json::to_value(&report).expect("serializable");
    if !a.details {
        json.as_object_mut().expect("object").remove("reports");
    }
    Ok(Output::new(report.summary(), json).passed(report.all_passed()))
}

fn estimate_json(e: &Estimate) -> Value {
    json!({
        "value": complex_json(e.value),
        "error": e.error,
        "evaluations": e.evaluations,
        "converged": e.converged,
    })
}

fn gl2(a: &Gl2Args, h: &mut Header) -> Result<Output> {
    let q = QuadratureParams {
        abs_tol: a.abs_tol,
        rel_tol: a.rel_tol,
        radius: a.radius,
        ..QuadratureParams::default()
    };
    h.set("mu", complex_short(a.mu));
    let est = match a.method {
        Method::Direct => {
            h.set("method", "direct");
            gl2_direct(a.mu, &q)?
        }
        Method::Ibp => {
            let bump = BumpSpec::default();
            h.set("method", "ibp");
            h.set("k", a.k);
            h.set("bump", format!("{},{}", bump.inner, bump.outer));
            gl2_continued(a.mu, &IBPScheme::new(a.k)?, &bump, &q)?
        }
    };
    h.set("abs_tol", format!("{:e}", q.abs_tol));
    h.set("rel_tol", format!("{:e}", q.rel_tol));
    h.set("radius", q.radius);
    let reference = gl2_reference(a.mu);
    let rel = (est.value - reference).norm() / reference.norm();
    let text = format!(
        "value = {}\nerror = {:.3e}\nevaluations = {}\nconverged = {}\nclosed form = {}\nrelative difference = {rel:.3e}\n",
        complex_text(est.value),
        est.error,
        est.evaluations,
        est.converged,
        complex_text(reference)
    );
    let mut json = estimate_json(&est);
    json["closed_form"] = complex_json(reference);
    json["relative_difference"] = json!(rel);
    Ok(Output::new(text, json).passed(est.converged))
}

fn gl3(a: &Gl3Args, h: &mut Header) -> Result<Output> {
    let q = gl3_default_params();
    h.set("perm", Permutation::longest(3));
    h.set("lambda", complex_list_text(&a.lambda.0));
    h.set("delta", "0,0,0");
    h.set("M", 1);
    h.set("seed", a.seed);
    h.set("tol", a.tol);
    h.set("abs_tol", format!("{:e}", q.abs_tol));
    h.set("rel_tol", format!("{:e}", q.rel_tol));
    let rep = gl3_change_of_variables_check(&a.lambda.0, &q, a.seed)?;
    let passed = rep.passed(a.tol);
    let mut text = format!(
        "tau factorization: {}/{} points exact, max numeric error {:.3e}\n",
        rep.tau.points - rep.tau.failures.len(),
        rep.tau.points,
        rep.tau.max_numeric_error
    );
    for f in &rep.tau.failures {
        let _ = writeln!(text, "  failure: {f}");
    }
    let _ = writeln!(text, "lh = {:.12e} (error {:.3e})", rep.lh.value.re, rep.lh.error);
    let _ = writeln!(text, "rh = {:.12e} (error {:.3e})", rep.rh.value.re, rep.rh.error);
    let _ = writeln!(text, "relative difference = {:.3e}", rep.relative_error);
    let _ = writeln!(text, "{}", if passed { "pass" } else { "fail" });
    let json = json!({
        "tau": {
            "points": rep.tau.points,
            "failures": rep.tau.failures,
            "max_numeric_error": rep.tau.max_numeric_error,
        },
        "lh": estimate_json(&rep.lh),
        "rh": estimate_json(&rep.rh),
        "relative_difference": rep.relative_error,
    });
    Ok(Output::new(text, json).passed(passed))
}

fn descriptor_json(d: &IntegrandDescriptor) -> Value {
    let factors: Vec<Value> = d
        .factors
        .iter()
        .map(|f| {
            json!({
                "alpha": f.alpha.to_string(),
                "phase": complex_json(f.phase),
                "exponent": complex_json(f.exponent),
                "exponent_form": f.exponent_form.as_ref().map(ToString::to_string),
                "parity": f.parity,
            })
        })
        .collect();
    let poly = d
        .poly_phase
        .as_ref()
        .map(|p| json!({ "coefficient": complex_json(p.coefficient), "f": p.f.to_string() }));
    json!({
        "perm": d.perm.to_string(),
        "kind": format!("{:?}", d.kind).to_lowercase(),
        "factors": factors,
        "poly_phase": poly,
        "global_sign": d.global_sign,
    })
}

fn integrand(a: &IntegrandArgs, h: &mut Header) -> Result<Output> {
    let delta = resolve_delta(&a.delta, a.perm.rank());
    h.set("perm", &a.perm);
    h.set("lambda", complex_list_text(&a.lambda.0));
    h.set(
        "delta",
        delta.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
    );
    let d = transformed_integrand(&a.perm, &a.lambda.0, &delta)?;
    Ok(Output::new(d.to_string(), descriptor_json(&d)))
}

fn bessel(a: &BesselArgs, h: &mut Header) -> Result<Output> {
    let dims = a.perm.free_indices().len();
    let nu =
        a.nu.as_ref()
            .map(|v| v.0.clone())
            .unwrap_or_else(|| vec![Complex64::new(0.5, 0.0); dims]);
    let zeta = a
        .zeta
        .as_ref()
        .map(|v| v.0.clone())
        .unwrap_or_else(|| vec![Complex64::new(1.0, 0.0); dims + 1]);
    h.set("perm", &a.perm);
    h.set("nu", complex_list_text(&nu));
    h.set("zeta", complex_list_text(&zeta));
    let d = bessel_kernel(&a.perm, &nu, &zeta)?;
    let mut json = descriptor_json(&d);
    let mut text = d.to_string();
    if let Some(p) = &d.poly_phase {
        let monomial = p.f.as_signed_monomial().is_some();
        let _ = writeln!(text, "monomial phase: {monomial}");
        json["monomial_phase"] = json!(monomial);
    }
    Ok(Output::new(text, json))
}
