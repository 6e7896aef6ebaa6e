use std::collections::BTreeMap;
use std::fmt::Write as _;

use gcrossed::cohomology::{cocycle_witness, pairing};
use gcrossed::io::{self, complex_pair, ElementFile};
use gcrossed::modular::{algebra_scalars, categorical_verlinde};
use gcrossed::verlinde::any_genus_oracle;
use gcrossed::*;
use serde::Deserialize;
use serde_json::json;

use crate::inputs::{self, required};
use crate::report::{complex, real, residual, write_out};
use crate::{Common, Failure};

const MAX_TUPLE: usize = 12;
const MAX_GENUS: usize = 3;

type Out = Result<String, Failure>;

fn summary(a: &CrossedAlgebra64, text: &mut String) {
    let _ = writeln!(
        text,
        "group order {}, {} characters, algebra dimension {}",
        a.group().order(),
        a.base().dim(),
        a.dim()
    );
    for g in 0..a.group().order() {
        let s = a.sector(g);
        let names: Vec<&str> = s.iter().map(|&c| a.base().labels()[c].as_str()).collect();
        let _ = writeln!(text, "  component {}: {} [{}]", a.group().label(g), s.len(), names.join(", "));
    }
}

fn axiom_table(report: &AxiomReport, text: &mut String) {
    let _ = writeln!(text, "{:<26} {:<6} residual", "axiom", "holds");
    for c in &report.checks {
        let _ = writeln!(text, "{:<26} {:<6} {}", c.name, if c.passed { "yes" } else { "no" }, residual(c.residual));
        if let (false, Some(w)) = (c.passed, &c.witness) {
            let _ = writeln!(text, "  witness: {w}");
        }
    }
}

fn report_json(report: &AxiomReport) -> serde_json::Value {
    json!({
        "all_passed": report.all_passed(),
        "checks": report.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "residual": if c.residual < 1e-12 { 0.0 } else { c.residual },
            "witness": c.witness,
        })).collect::<Vec<_>>(),
    })
}

pub fn verify(c: &Common) -> Out {
    let a = inputs::algebra(c)?;
    let report = verify_crossed_axioms(&a, c.tol);
    let mut text = String::new();
    summary(&a, &mut text);
    axiom_table(&report, &mut text);
    write_out(c.out.as_deref(), &report_json(&report), &mut text)?;
    if report.all_passed() {
        text.push_str("all axioms hold\n");
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::domain(format!("axioms fail: {}", report.failed().join(", "))))
    }
}

pub fn construct(c: &Common) -> Out {
    let g = inputs::group(required(&c.group, "group")?)?;
    let b = inputs::base(required(&c.base, "base")?, c)?;
    let act = inputs::action(c.action.as_deref(), &g, &b)?;
    let arg = match c.cocycle.as_slice() {
        [one] => one,
        [] => return Err(Failure::input("--cocycle is required")),
        _ => return Err(Failure::input("construct takes one --cocycle")),
    };
    let phi = inputs::cocycle(arg, &g, &b)?;
    let a = construct_extension(&g, &b, &act, &phi, c.tol)?;
    let report = verify_crossed_axioms(&a, c.tol);
    if !report.all_passed() {
        return Err(Failure::domain(format!("constructed algebra fails {}", report.failed().join(", "))));
    }
    let mut text = String::new();
    summary(&a, &mut text);
    text.push_str("all axioms hold\n");
    let file = io::algebra_to_file(&a)?;
    match c.out.as_deref() {
        Some(p) => write_out(Some(p), &file, &mut text)?,
        None => {
            let v = io::round_json(serde_json::to_value(&file).map_err(gcrossed::Error::from)?);
            text.push_str(&serde_json::to_string_pretty(&v).map_err(gcrossed::Error::from)?);
            text.push('\n');
        }
    }
    Ok(text)
}

pub fn verlinde(c: &Common) -> Out {
    let a = inputs::algebra(c)?;
    let (pairs, elems) = inputs::instance(required(&c.instance, "instance")?, &a)?;
    if elems.len() > MAX_TUPLE || pairs.len() > MAX_GENUS {
        return Err(Failure::input(format!(
            "instances are limited to {MAX_TUPLE} insertions and genus {MAX_GENUS}"
        )));
    }
    let table = TwistedCharacterTable::new(&a);
    let formula = verlinde_any_genus(&a, &table, &pairs, &elems)?;
    let oracle = any_genus_oracle(&a, &pairs, &elems)?;
    let diff = (formula - oracle).norm();
    let mut text = String::new();
    let _ = writeln!(text, "genus {}, {} insertions", pairs.len(), elems.len());
    let _ = writeln!(text, "formula = {}", complex(formula));
    let _ = writeln!(text, "oracle  = {}", complex(oracle));
    let _ = writeln!(text, "diff    = {}", residual(diff));
    let out = json!({
        "genus": pairs.len(),
        "insertions": elems.len(),
        "formula": complex_pair(formula),
        "oracle": complex_pair(oracle),
        "diff": if diff < 1e-12 { 0.0 } else { diff },
    });
    write_out(c.out.as_deref(), &out, &mut text)?;
    if diff > 1e-8 * (1.0 + oracle.norm()) {
        print!("{text}");
        return Err(Failure::domain("formula and oracle disagree"));
    }
    Ok(text)
}

#[derive(Deserialize)]
struct BasisFile {
    basis: Vec<ElementFile>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

pub fn fuse(c: &Common) -> Out {
    let a = inputs::algebra(c)?;
    let (basis, labels): (Vec<AlgebraElement64>, Vec<String>) = match c.instance.as_deref() {
        Some(path) => {
            let f: BasisFile = io::read_json(path)?;
            let b = f.basis.iter().map(|e| io::element_from_file(&a, e)).collect::<Result<Vec<_>>>()?;
            let l = f.labels.unwrap_or_else(|| (0..b.len()).map(|i| format!("b{i}")).collect());
            if l.len() != b.len() {
                return Err(Failure::input("one label per basis element"));
            }
            (b, l)
        }
        None => {
            let mut b = Vec::new();
            let mut l = Vec::new();
            for &(g, chi) in a.basis() {
                let e = a.basis_element(g, chi)?;
                let n = a.inner(&e, &e)?.re.sqrt();
                b.push(e.scale((1.0 / n).into()));
                l.push(format!("E[{},{}]", a.group().label(g), a.base().labels()[chi]));
            }
            (b, l)
        }
    };
    let table = fusion_coefficients(&a, &basis, c.tol.sqrt())?;
    let mut text = String::new();
    let mut entries = Vec::new();
    for (i, row) in table.n.iter().enumerate() {
        for (j, col) in row.iter().enumerate() {
            for (k, v) in col.iter().enumerate() {
                if v.norm() > 1e-9 {
                    let _ = writeln!(text, "{} * {} -> {}: {}", labels[i], labels[j], labels[k], complex(*v));
                    entries.push(json!([i, j, k, complex_pair(*v)]));
                }
            }
        }
    }
    let _ = writeln!(text, "nonnegative integral: {}", if table.integral { "yes" } else { "no" });
    let out = json!({ "labels": labels, "entries": entries, "integral": table.integral });
    write_out(c.out.as_deref(), &out, &mut text)?;
    Ok(text)
}

fn separation_json(s: &Separation<f64>) -> serde_json::Value {
    match s {
        Separation::Pairing { g, h, chi, first, second } => json!({
            "kind": "pairing", "g": g, "h": h, "chi": chi,
            "first": complex_pair(*first), "second": complex_pair(*second),
        }),
        Separation::NoCoboundary => json!({ "kind": "no_coboundary" }),
    }
}

fn verdict_text(g: &FiniteGroup, b: &FrobeniusBase64, v: &Cohomologous<f64>, text: &mut String) -> serde_json::Value {
    match v {
        Cohomologous::Yes(theta) => {
            text.push_str("cohomologous: yes\n");
            json!({ "verdict": "yes", "theta": io::cochain_to_file(theta) })
        }
        Cohomologous::No(s) => {
            text.push_str("cohomologous: no\n");
            if let Separation::Pairing { g: x, h: y, chi, first, second } = s {
                let _ = writeln!(
                    text,
                    "  pairing at ({}, {}) on {}: {} vs {}",
                    g.label(*x),
                    g.label(*y),
                    b.labels()[*chi],
                    complex(*first),
                    complex(*second)
                );
            } else {
                text.push_str("  no trivializing cochain over roots of unity\n");
            }
            json!({ "verdict": "no", "witness": separation_json(s) })
        }
        Cohomologous::Unknown(why) => {
            let _ = writeln!(text, "cohomologous: unknown ({why})");
            json!({ "verdict": "unknown", "reason": why })
        }
    }
}

pub fn cohomology(c: &Common) -> Out {
    let g = inputs::group(required(&c.group, "group")?)?;
    let b = inputs::base(required(&c.base, "base")?, c)?;
    let act = inputs::action(c.action.as_deref(), &g, &b)?;
    let mut text = String::new();
    let out = match c.cocycle.as_slice() {
        [one] => {
            let phi = inputs::cocycle(one, &g, &b)?;
            if phi.degree() != 2 {
                return Err(Failure::input("expected a 2-cochain"));
            }
            let witness = cocycle_witness(&g, &act, &phi, c.tol);
            match witness {
                None => text.push_str("cocycle: yes\n"),
                Some([x, y, z]) => {
                    let _ = writeln!(text, "cocycle: no (fails at {}, {}, {})", g.label(x), g.label(y), g.label(z));
                }
            }
            let normalized = phi.is_normalized(c.tol);
            let unitary = phi.is_unitary(c.tol);
            let _ = writeln!(text, "normalized: {}", if normalized { "yes" } else { "no" });
            let _ = writeln!(text, "unitary: {}", if unitary { "yes" } else { "no" });
            let mut pairings = Vec::new();
            if witness.is_none() {
                for x in 0..g.order() {
                    for y in x + 1..g.order() {
                        for chi in 0..b.dim() {
                            if let Some(p) = pairing(&g, &act, &phi, x, y, chi) {
                                if (p - 1.0).norm() > 1e-6 {
                                    let _ = writeln!(
                                        text,
                                        "  pairing ({}, {}) on {} = {}",
                                        g.label(x),
                                        g.label(y),
                                        b.labels()[chi],
                                        complex(p)
                                    );
                                    pairings.push(json!([x, y, chi, complex_pair(p)]));
                                }
                            }
                        }
                    }
                }
                if pairings.is_empty() {
                    text.push_str("  all commutator pairings trivial\n");
                }
            }
            json!({
                "cocycle": witness.is_none(),
                "witness": witness,
                "normalized": normalized,
                "unitary": unitary,
                "nontrivial_pairings": pairings,
            })
        }
        [first, second] => {
            let p1 = inputs::cocycle(first, &g, &b)?;
            let p2 = inputs::cocycle(second, &g, &b)?;
            let v = cohomologous(&g, &act, &p1, &p2, SolveOptions { budget: 8, tol: c.tol })?;
            verdict_text(&g, &b, &v, &mut text)
        }
        _ => return Err(Failure::input("give one or two --cocycle values")),
    };
    write_out(c.out.as_deref(), &out, &mut text)?;
    Ok(text)
}

pub fn classify(c: &Common) -> Out {
    let a = inputs::algebra(c)?;
    let (phi, theta) = extract_cocycle(&a, c.tol)?;
    let mut text = String::new();
    summary(&a, &mut text);
    let g = a.group();
    let b = a.base();
    let mut count = 0;
    for x in 0..g.order() {
        for y in x + 1..g.order() {
            for chi in 0..b.dim() {
                if let Some(p) = pairing(g, a.action(), &phi, x, y, chi) {
                    if (p - 1.0).norm() > 1e-6 {
                        count += 1;
                        let _ = writeln!(text, "  pairing ({}, {}) on {} = {}", g.label(x), g.label(y), b.labels()[chi], complex(p));
                    }
                }
            }
        }
    }
    let _ = writeln!(text, "extracted cocycle: {count} nontrivial commutator pairings");
    let mut out = json!({ "phi": io::cochain_to_file(&phi), "theta": io::cochain_to_file(&theta) });
    match c.cocycle.as_slice() {
        [] => {}
        [r] => {
            let reference = inputs::cocycle(r, g, b)?;
            let v = cohomologous(g, a.action(), &phi, &reference, SolveOptions { budget: 8, tol: c.tol })?;
            out["comparison"] = verdict_text(g, b, &v, &mut text);
        }
        _ => return Err(Failure::input("classify takes at most one reference --cocycle")),
    }
    write_out(c.out.as_deref(), &out, &mut text)?;
    Ok(text)
}

pub fn smatrix(c: &Common) -> Out {
    let a = inputs::algebra(c)?;
    let sectors = inputs::sectors(required(&c.instance, "instance")?, &a)?;
    let table = TwistedCharacterTable::new(&a);
    let mut text = String::new();
    let mut data = BTreeMap::new();
    let mut files = Vec::new();
    let mut all_unitary = true;
    for inp in &sectors.inputs {
        let s = crossed_s_matrix(&a, &table, inp, c.tol)?;
        let check = s_unitarity_check(&s, 1e-8);
        all_unitary &= check.passed;
        let _ = writeln!(text, "S^{} (dim B = {})", a.group().label(s.sector), real(s.dim_b));
        for (label, row) in s.labels.iter().zip(&s.matrix) {
            let cells: Vec<String> = row.iter().map(|&z| complex(z)).collect();
            let _ = writeln!(text, "  {label:<8} {}", cells.join("  "));
        }
        let _ = writeln!(text, "  unitarity: {} (residual {})", if check.passed { "yes" } else { "no" }, residual(check.residual));
        let mut f = serde_json::to_value(io::s_matrix_to_file(&s)).map_err(gcrossed::Error::from)?;
        f["unitary"] = json!(check.passed);
        files.push(f);
        data.insert(s.sector, s);
    }
    let scal = algebra_scalars(&a, &table);
    let mut results = Vec::new();
    for q in &sectors.queries {
        let v = categorical_verlinde(a.group(), a.action(), &data, sectors.sign.as_ref(), &scal, q, 1e-8)?;
        let elems = q
            .objects
            .iter()
            .map(|&(m, row)| {
                let inp = sectors.inputs.iter().find(|s| s.sector == m).ok_or(Error::MissingSector(m))?;
                Ok((m, inp.rows[row].element.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let oracle = if sectors.sign.is_none() { Some(any_genus_oracle(&a, &q.pairs, &elems)?) } else { None };
        let names: Vec<String> = q.objects.iter().map(|&(m, r)| data[&m].labels[r].clone()).collect();
        let _ = write!(
            text,
            "handles {:?}, objects [{}]: {} ({})",
            q.pairs,
            names.join(" "),
            complex(v.value),
            if v.integral { "integral" } else { "not integral" }
        );
        match oracle {
            Some(o) => {
                let _ = writeln!(text, ", oracle {}", complex(o));
            }
            None => text.push('\n'),
        }
        results.push(json!({
            "pairs": q.pairs,
            "objects": q.objects,
            "value": complex_pair(v.value),
            "integral": v.integral,
            "oracle": oracle.map(complex_pair),
        }));
    }
    let out = json!({ "sectors": files, "queries": results });
    write_out(c.out.as_deref(), &out, &mut text)?;
    if !all_unitary {
        print!("{text}");
        return Err(Failure::domain("unitarity relation fails"));
    }
    Ok(text)
}
