//! One function per subcommand. Each returns a JSON result and its text rendering.

use buchsbaum_core::homological::{BettiTable, CohomologyTable};
use buchsbaum_core::omega::{self, BuchsbaumVerdict, OmegaResolution};
use buchsbaum_core::qpres;
use buchsbaum_core::scheme::Subscheme;
use buchsbaum_core::section::hyperplane_section_ideal;
use buchsbaum_core::surfaces::{self, LiftingOutcome, Shape};
use buchsbaum_core::{Error, Result};
use serde_json::{json, Value};

use crate::input::{format_ideal, IdealFile};

pub struct Options {
    pub window: (i32, i32),
    pub seed: u64,
    pub trials: u32,
    pub expand: bool,
    pub q: Option<usize>,
}

pub struct Output {
    pub json: Value,
    pub text: String,
}

pub fn betti_json(b: &BettiTable) -> Value {
    json!(b.entries().iter().map(|&(i, j, v)| json!([i, j, v])).collect::<Vec<_>>())
}

fn table_json(t: &CohomologyTable) -> Value {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| {
            let inside = match (r.bottom_degree, r.top_degree) {
                _ if r.vanishes => true,
                (Some(lo), Some(hi)) => t.window.0 <= lo && hi <= t.window.1,
                _ => false,
            };
            json!({
                "i": r.i,
                "vanishes": r.vanishes,
                "finite_length": r.finite_length,
                "killed_by_maximal_ideal": r.killed_by_maximal_ideal,
                "bottom_degree": r.bottom_degree,
                "top_degree": r.top_degree,
                "window_limited": !inside,
            })
        })
        .collect();
    json!({
        "window": [t.window.0, t.window.1],
        "entries": t.entries.iter().map(|&(i, d, h)| json!([i, d, h])).collect::<Vec<_>>(),
        "rows": rows,
    })
}

fn table_text(t: &CohomologyTable) -> String {
    let mut s = String::from("  i \\ t");
    for d in t.window.0..=t.window.1 {
        s.push_str(&format!("{d:>5}"));
    }
    s.push('\n');
    for r in &t.rows {
        s.push_str(&format!("  {:<5}", r.i));
        for d in t.window.0..=t.window.1 {
            let h = t.get(r.i, d);
            if h == 0 {
                s.push_str(&format!("{:>5}", "."));
            } else {
                s.push_str(&format!("{h:>5}"));
            }
        }
        if !r.vanishes && !r.finite_length {
            s.push_str("   (infinite length)");
        }
        s.push('\n');
    }
    s
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn scheme(file: &IdealFile) -> Result<Subscheme> {
    Subscheme::new(file.ring, &file.gens)
}

fn omega_json(or: &OmegaResolution) -> Value {
    serde_json::to_value(or).expect("serializable")
}

fn omega_text(or: &OmegaResolution) -> String {
    let mut levels: Vec<String> = Vec::new();
    for (i, f) in or.free.iter().enumerate() {
        let mut parts: Vec<String> = Vec::new();
        let mut sorted = f.clone();
        sorted.sort();
        let mut k = 0;
        while k < sorted.len() {
            let d = sorted[k];
            let cnt = sorted[k..].iter().take_while(|&&x| x == d).count();
            let base = surfaces::omega_label(0, d);
            parts.push(if cnt > 1 { format!("{base}^{cnt}") } else { base });
            k += cnt;
        }
        if i == 0 {
            for &(p, e, s) in &or.omega {
                let base = surfaces::omega_label(p, e);
                parts.push(if s > 1 { format!("({base})^{s}") } else { base });
            }
        }
        levels.push(if parts.is_empty() { "0".into() } else { parts.join(" ⊕ ") });
    }
    levels.reverse();
    format!("0 -> {} -> J_X -> 0", levels.join(" -> "))
}

fn verdict_json(v: &BuchsbaumVerdict, trials: u32) -> Value {
    match v {
        BuchsbaumVerdict::ArithmeticallyBuchsbaum => json!({"value": true, "certified": true}),
        BuchsbaumVerdict::NotArithmeticallyBuchsbaum { reason } => {
            json!({"value": false, "certified": true, "reason": reason})
        }
        BuchsbaumVerdict::NotArithmeticallyBuchsbaumProbabilistic { error_bound, .. } => {
            json!({"value": false, "certified": false, "trials": trials, "error_bound": error_bound})
        }
    }
}

pub fn betti(file: &IdealFile, _o: &Options) -> Result<Output> {
    let x = scheme(file)?;
    let bi = x.ideal.resolution().betti();
    let ba = x.coordinate_ring.resolution().betti();
    let json = json!({
        "ideal": betti_json(&bi),
        "quotient": betti_json(&ba),
        "regularity": bi.regularity(),
        "projective_dimension": ba.projective_dimension(),
        "saturated": x.is_saturated(),
    });
    let text = format!(
        "Betti table of R/I\n{}\nregularity of I: {}\nsaturated: {}\n",
        ba.render(),
        bi.regularity().map_or("-".into(), |r| r.to_string()),
        yes(x.is_saturated())
    );
    Ok(Output { json, text })
}

pub fn cohomology(file: &IdealFile, o: &Options) -> Result<Output> {
    let x = scheme(file)?;
    let t = x.cohomology().table(o.window);
    let json = json!({"module": "R/I", "saturated": x.is_saturated(), "table": table_json(&t)});
    let text = format!("dim [H^i_m(R/I)]_t\n{}saturated: {}\n", table_text(&t), yes(x.is_saturated()));
    Ok(Output { json, text })
}

pub fn check(file: &IdealFile, o: &Options) -> Result<Output> {
    let x = scheme(file)?;
    let lc = x.cohomology();
    let dim_a = x.dim_a();
    let depth = (0..=dim_a).find(|&i| !lc.vanishes(i));
    let e = if dim_a >= 1 { x.index_of_speciality().ok() } else { None };
    let acm = x.is_acm();
    let saturated = x.is_saturated();
    let reg = x.regularity();
    let c = x.codim();
    let mut quasi = None;
    let mut arith = Value::Null;
    let mut arith_value = None;
    if saturated && dim_a >= 1 {
        quasi = Some((1..dim_a).all(|i| lc.killed_by_maximal_ideal(i)));
        if acm {
            arith_value = Some(true);
            arith = json!({"value": true, "certified": true, "reason": "arithmetically Cohen-Macaulay"});
        } else if (2..=x.n()).contains(&c) {
            let rep = omega::arith_buchsbaum_test(&x, o.trials, o.seed)?;
            arith_value = Some(rep.is_buchsbaum());
            arith = verdict_json(&rep.verdict, o.trials);
        }
    }
    let equidim_cm = if saturated && x.ring.nvars == 5 && dim_a == 3 {
        Some(surfaces::surface_presentation(&x, o.window)?.flags.equidim_cm)
    } else {
        None
    };
    // aCM => arithmetically Buchsbaum => quasi-Buchsbaum.
    if let (Some(a), Some(q)) = (arith_value, quasi) {
        if (acm && !a) || (a && !q) {
            return Err(Error::Invariant(format!("inconsistent verdicts: aCM {acm}, aB {a}, qB {q}")));
        }
    }
    let json = json!({
        "saturated": saturated,
        "dim": x.dim_x(),
        "codim": c,
        "depth": depth,
        "regularity": reg,
        "index_of_speciality": e,
        "acm": acm,
        "quasi_buchsbaum": quasi,
        "arith_buchsbaum": arith,
        "equidim_cm": equidim_cm,
    });
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    let arith_text = match arith_value {
        None => "-".to_string(),
        Some(true) => "yes".to_string(),
        Some(false) if arith["certified"] == json!(true) => "no".to_string(),
        Some(false) => format!("no (probabilistic, {} trials)", o.trials),
    };
    let text = format!(
        "saturated: {}\ndim: {}\ndepth: {}\nreg: {}\ne(X): {}\naCM: {}\nquasi-B: {}\narith-B: {}\nequidim-CM: {}\n",
        yes(saturated),
        opt(x.dim_x().map(|d| d.to_string())),
        opt(depth.map(|d| d.to_string())),
        opt(reg.map(|d| d.to_string())),
        opt(e.map(|d| d.to_string())),
        yes(acm),
        opt(quasi.map(|q| yes(q).to_string())),
        arith_text,
        opt(equidim_cm.map(|q| yes(q).to_string())),
    );
    check_expectations(file, &json)?;
    Ok(Output { json, text })
}

/// Compare `expect <field> <value>` lines of the input with the report.
fn check_expectations(file: &IdealFile, report: &Value) -> Result<()> {
    for (k, want) in &file.expect {
        let key = k.replace('-', "_");
        let Some(v) = report.get(&key) else { continue };
        let v = v.get("value").unwrap_or(v);
        let got = match v {
            Value::Bool(b) => yes(*b).to_string(),
            Value::Null => "-".into(),
            other => other.to_string(),
        };
        if &got != want {
            return Err(Error::Invariant(format!("expected {k} = {want}, got {got}")));
        }
    }
    Ok(())
}

pub fn omega_cmd(file: &IdealFile, o: &Options) -> Result<Output> {
    let x = scheme(file)?;
    let or = omega::omega_resolution(&x, o.trials, o.seed)?;
    if let Some(why) = omega::omega_exactness_failure(&or) {
        return Err(Error::Invariant(format!("Omega-resolution is not exact: {why}")));
    }
    let mut json = json!({"resolution": omega_json(&or), "trials": o.trials});
    let mut text = format!("{}\n", omega_text(&or));
    if o.expand {
        let cone = omega::mapping_cone_expand(&or)?;
        let direct = x.ideal.resolution().betti();
        let min = cone.minimal.clone().expect("module maps present");
        if min != direct {
            return Err(Error::Invariant("minimalized cone differs from the Betti table of I".into()));
        }
        let tail = omega::check_tor_tail(&or, &x.coordinate_ring.resolution().betti());
        if !tail.matches {
            return Err(Error::Invariant("Tor tail differs from the prediction".into()));
        }
        let e = x.index_of_speciality()?;
        let shift = omega::shift_bounds_check(&or, e);
        let reg = omega::regularity_bounds_check(&x)?;
        json["cone"] = json!({
            "raw": betti_json(&cone.raw),
            "minimal": betti_json(&min),
            "cancellations": cone.cancellations.iter().map(|&(k, d, r)| json!([k, d, r])).collect::<Vec<_>>(),
        });
        json["tor_tail"] = betti_json(&tail.predicted);
        json["shift_bounds"] = serde_json::to_value(&shift).expect("serializable");
        json["regularity_bounds"] = serde_json::to_value(&reg).expect("serializable");
        text.push_str(&format!("raw cone (resolution of I)\n{}\n", cone.raw.render()));
        text.push_str(&format!("minimalized\n{}\n", min.render()));
        text.push_str(&format!("Tor tail matches: {}\n", yes(tail.matches)));
        text.push_str(&format!("shift bounds hold: {}\n", yes(shift.holds())));
        text.push_str(&format!(
            "regularity: {} <= {} <= {}{}\n",
            reg.check.lower,
            reg.check.value,
            reg.check.upper,
            if reg.acm { " (aCM, informational)" } else { "" }
        ));
    }
    Ok(Output { json, text })
}

pub fn weak_omega(file: &IdealFile, o: &Options) -> Result<Output> {
    let x = scheme(file)?;
    let w = omega::weak_omega_resolution(&x, o.trials, o.seed)?;
    let json = json!({"resolution": serde_json::to_value(&w).expect("serializable"), "v": w.v(), "s": w.s()});
    let mut text = String::new();
    for (i, (f, om)) in w.free.iter().zip(&w.omega).enumerate() {
        let mut parts: Vec<String> = f.iter().map(|&d| surfaces::omega_label(0, d)).collect();
        parts.extend(om.iter().map(|&(p, e, s)| format!("({})^{s}", surfaces::omega_label(p, e))));
        text.push_str(&format!("L_{}: {}\n", i + 1, if parts.is_empty() { "0".into() } else { parts.join(" ⊕ ") }));
    }
    text.push_str(&format!("v = {}, s = {}\n", w.v(), w.s()));
    Ok(Output { json, text })
}

pub fn qpres_cmd(file: &IdealFile, o: &Options) -> Result<Output> {
    let x = scheme(file)?;
    let q = o.q.unwrap_or_else(|| x.codim().saturating_sub(1).max(1));
    let qp = qpres::q_presentation(&x.ideal, q)?;
    let dist = qpres::verify_distribution(&qp, o.window)?;
    if !dist.passed() {
        return Err(Error::Invariant(format!("cohomology is not distributed as required: {dist:?}")));
    }
    let min = qpres::is_minimal_qpres(&qp)?;
    let e_betti = qp.e.resolution().betti();
    let p_betti = qp.p.resolution().betti();
    let json = json!({
        "q": q,
        "trivial": qp.is_trivial(),
        "minimal": min.minimal,
        "e_generators": qp.e.minimal().generators().sorted_degrees(),
        "e_betti": betti_json(&e_betti),
        "p_betti": betti_json(&p_betti),
        "added_degrees": qp.added_degrees,
        "distribution_checked": [o.window.0, o.window.1],
    });
    let text = format!(
        "{q}-presentation 0 -> P -> E -> I -> 0 (minimal: {})\nE:\n{}\nP:\n{}\n",
        yes(min.minimal),
        e_betti.render(),
        if qp.is_trivial() { "0".into() } else { p_betti.render() }
    );
    Ok(Output { json, text })
}

pub fn hyperplane(file: &IdealFile, o: &Options) -> Result<Output> {
    let x = scheme(file)?;
    let (h, gens) = hyperplane_section_ideal(x.ring, &x.gens, o.seed)?;
    let names: Vec<String> = file.names[..h.target.nvars].to_vec();
    let y = Subscheme::new(h.target, &gens)?;
    let mut json = json!({
        "coefficients": h.coefficients,
        "generators": gens.iter().map(|g| g.fmt_with(&names)).collect::<Vec<_>>(),
        "betti": betti_json(&y.ideal.resolution().betti()),
    });
    let mut text = format!(
        "{} = {}\n{}",
        file.names[x.ring.nvars - 1],
        h.substitution.fmt_with(&names),
        format_ideal(h.target, &names, &gens, None)
    );
    let c = x.codim();
    if (2..x.n()).contains(&c) && x.is_saturated() {
        let rep = omega::arith_buchsbaum_test(&x, o.trials, o.seed)?;
        if let Some(or) = rep.resolution {
            let symbolic = omega::hyperplane_transform(&or)?;
            let actual = omega::omega_resolution(&y, o.trials, o.seed)?;
            let check = omega::compare_transform(&symbolic, &actual);
            if !check.passed() {
                return Err(Error::Invariant(format!("hyperplane transform does not match the section: {check:?}")));
            }
            json["transform"] = json!({
                "symbolic": omega_json(&symbolic),
                "actual": omega_json(&actual.normalized()),
                "cancelled": check.cancelled,
            });
            text.push_str(&format!("symbolic: {}\nminimal:  {}\n", omega_text(&symbolic), omega_text(&actual)));
        }
    }
    Ok(Output { json, text })
}

pub fn construct(shape_src: &str, o: &Options) -> Result<Output> {
    let shape: Shape = serde_json::from_str(shape_src)
        .map_err(|e| Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() })?;
    let c = surfaces::construct_from_shape(&shape, o.seed)?;
    let names = c.ring.var_names();
    let json = json!({
        "generators": c.gens.iter().map(|g| g.fmt_with(&names)).collect::<Vec<_>>(),
        "seed_used": c.seed,
        "attempts": c.attempts,
        "twist": c.twist,
        "nvars": c.ring.nvars,
    });
    let text = format_ideal(c.ring, &names, &c.gens, None);
    Ok(Output { json, text })
}

pub fn surface_lift(file: &IdealFile, o: &Options) -> Result<Output> {
    let x = scheme(file)?;
    let sp = surfaces::surface_presentation(&x, o.window)?;
    if !sp.placement_holds {
        return Err(Error::Invariant("cohomology of E_1, E_2 is not placed as required".into()));
    }
    let w = omega::weak_omega_resolution(&x, o.trials, o.seed)?;
    let lift = surfaces::lifting_test(&w)?;
    let ab = omega::arith_buchsbaum_test(&x, o.trials, o.seed)?;
    let certified = !matches!(ab.verdict, BuchsbaumVerdict::NotArithmeticallyBuchsbaumProbabilistic { .. });
    if certified && ab.is_buchsbaum() != lift.is_buchsbaum() {
        return Err(Error::Invariant("lifting test disagrees with the decomposition test".into()));
    }
    let (verdict, obstruction) = match &lift.outcome {
        LiftingOutcome::Lifted { .. } => ("arithmetically Buchsbaum".to_string(), Vec::new()),
        LiftingOutcome::Obstructed { zero_components } => {
            ("not arithmetically Buchsbaum".to_string(), zero_components.clone())
        }
    };
    let json = json!({
        "flags": serde_json::to_value(&sp.flags).expect("serializable"),
        "weak_resolution": serde_json::to_value(&w).expect("serializable"),
        "hom_dim": lift.hom_dim,
        "liftable": lift.is_buchsbaum(),
        "obstruction": obstruction,
        "decomposition_verdict": verdict_json(&ab.verdict, o.trials),
    });
    let text = if obstruction.is_empty() {
        format!("{verdict}: φ lifts through the free cover of E_1\n")
    } else {
        format!("{verdict}: obstruction {}\n", obstruction.join(", "))
    };
    Ok(Output { json, text })
}
