//! The ten acceptance criteria, one verdict line each. Runs as a plain
//! binary so the verdicts are always printed; any failure exits nonzero.

use std::time::Instant;

use qsc_cli::{build_report, RunConfig};
use qsc_core::connections::{metricity_defects, torsion};
use qsc_core::curvature::{d_tensor, r_theta, ricci, structure_relations, CurvatureBundle};
use qsc_core::geometry::{complex_hyperbolic, conformal_nonkahler, flat_complex, fubini_study};
use qsc_core::invariants::{
    degeneracy_probe, h_tensors, hol_projective_from, hybrid_defect, identity_suite, weyl_projective_from,
    Classification, IdentityResult, SuiteConfig,
};
use qsc_core::{DiffConfig, DiffScheme, GeneratorField, ManifoldSpec, Point, Residual};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn kahler_catalog() -> Vec<ManifoldSpec> {
    vec![
        flat_complex(2).unwrap(),
        fubini_study(2).unwrap(),
        complex_hyperbolic(2).unwrap(),
    ]
}

fn all_generators(n: usize) -> Vec<GeneratorField> {
    ["zero", "const", "linear_j", "grad:cubic", "random_poly:3"]
        .iter()
        .map(|s| GeneratorField::parse(s, n).unwrap())
        .collect()
}

fn three_generators() -> Vec<GeneratorField> {
    vec![
        GeneratorField::linear_j(4),
        GeneratorField::random_poly(4, 3),
        GeneratorField::random_poly(4, 7),
    ]
}

/// Largest relative residual among `ids`, over results that actually ran.
fn worst(results: &[IdentityResult], ids: &[&str]) -> Result<f64, String> {
    let mut seen = false;
    let mut w: f64 = 0.0;
    for r in results.iter().filter(|r| ids.contains(&r.id.as_str())) {
        seen = true;
        w = w.max(r.relative);
    }
    if seen {
        Ok(w)
    } else {
        Err(format!("none of {ids:?} were evaluated"))
    }
}

fn below(label: &str, value: f64, tol: f64) -> Result<String, String> {
    let line = format!("{label} = {value:.3e} (< {tol:e})");
    if value < tol {
        Ok(line)
    } else {
        Err(line)
    }
}

fn exact(label: &str, got: f64, want: f64) -> Result<(), String> {
    if (got - want).abs() < 1e-12 {
        Ok(())
    } else {
        Err(format!("{label} = {got}, expected {want}"))
    }
}

fn criterion_1() -> Verdict {
    let m = flat_complex(2).unwrap();
    let gens = [GeneratorField::zero(4), GeneratorField::linear_j(4)];
    let out =
        identity_suite(&m, &m.sample_points(10, 42), &gens, &SuiteConfig::default()).map_err(|e| e.to_string())?;
    let core: Vec<&IdentityResult> = out
        .results
        .iter()
        .filter(|r| r.classification == Classification::Core)
        .collect();
    let worst_core = core.iter().map(|r| r.relative).fold(0.0, f64::max);
    if let Some(r) = core.iter().find(|r| !r.pass || r.relative >= 1e-9) {
        return Err(format!(
            "{} at point {} relative {:.3e}",
            r.id, r.point_index, r.relative
        ));
    }

    let pi = GeneratorField::linear_j(4);
    let cfg = DiffConfig::default();
    let p = Point::new(vec![1.0, 0.0, 0.0, 0.0]);
    let err = |e: qsc_core::Error| e.to_string();
    exact(
        "D1(dx1,dy1)",
        d_tensor(1, &m, &p, &pi, &cfg).map_err(err)?.get(&[0, 1]),
        2.0,
    )?;
    exact(
        "D2(dx1,dy1)",
        d_tensor(2, &m, &p, &pi, &cfg).map_err(err)?.get(&[0, 1]),
        2.0,
    )?;
    exact(
        "D3(dx1,dy1)",
        d_tensor(3, &m, &p, &pi, &cfg).map_err(err)?.get(&[0, 1]),
        1.0,
    )?;
    let t = torsion(&m, &p, &pi).map_err(err)?;
    for i in 0..4 {
        exact(
            "T(dx1,dy1) component",
            t.get(&[i, 0, 1]),
            if i == 1 { 1.0 } else { 0.0 },
        )?;
    }
    let r1 = r_theta(1, &m, &p, &pi, &cfg).map_err(err)?;
    for i in 0..4 {
        exact(
            "R1(dx1,dy1)dx1 component",
            r1.get(&[i, 0, 1, 0]),
            if i == 1 { -2.0 } else { 0.0 },
        )?;
    }
    exact("Ric1(dx1,dx1)", ricci(&r1).map_err(err)?.get(&[0, 0]), 2.0)?;
    let h = h_tensors(&CurvatureBundle::new(&m, &p, &pi, &cfg).map_err(err)?);
    exact("|H1|", h[1].norm_max(), 0.0)?;
    exact("|H4|", h[4].norm_max(), 0.0)?;
    Ok(format!(
        "{} core rows, worst relative {worst_core:.3e} (< 1e-9); 7 hand values exact",
        core.len()
    ))
}

fn criterion_2() -> Verdict {
    let cfg = DiffConfig::default();
    let gens = three_generators();
    let mut w: f64 = 0.0;
    for m in [fubini_study(2).unwrap(), complex_hyperbolic(2).unwrap()] {
        for p in m.sample_points(20, 42) {
            let hs: Vec<[qsc_core::Tensor; 6]> = gens
                .iter()
                .map(|g| CurvatureBundle::new(&m, &p, g, &cfg).map(|b| h_tensors(&b)))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            for theta in 0..6 {
                for i in 0..hs.len() {
                    for j in i + 1..hs.len() {
                        w = w.max(Residual::between(&hs[i][theta], &hs[j][theta], &[]).relative());
                    }
                }
            }
        }
    }
    below(
        "max relative H difference over 2 manifolds x 20 points x 6 kinds x 3 pairs",
        w,
        1e-6,
    )
}

fn space_form_suite(points: usize) -> Result<Vec<IdentityResult>, String> {
    let mut all = Vec::new();
    for m in [fubini_study(2).unwrap(), complex_hyperbolic(2).unwrap()] {
        let out = identity_suite(
            &m,
            &m.sample_points(points, 42),
            &three_generators(),
            &SuiteConfig::default(),
        )
        .map_err(|e| e.to_string())?;
        all.extend(out.results);
    }
    Ok(all)
}

fn criterion_3() -> Verdict {
    let results = space_form_suite(10)?;
    let h4w = worst(&results, &["I-H4W"])?;
    let h1h3 = worst(&results, &["I-H1H3"])?;
    let mut direct: f64 = 0.0;
    for m in [fubini_study(2).unwrap(), complex_hyperbolic(2).unwrap()] {
        for p in m.sample_points(10, 42) {
            let b = CurvatureBundle::new(&m, &p, &GeneratorField::random_poly(4, 7), &DiffConfig::default())
                .map_err(|e| e.to_string())?;
            let w = weyl_projective_from(&b.r_g, &b.ric_g).map_err(|e| e.to_string())?;
            let h = h_tensors(&b);
            direct = direct
                .max(Residual::between(&h[4], &w, &[]).relative())
                .max(Residual::between(&h[1], &h[3], &[]).relative());
        }
    }
    below(
        "worst of H4 = W and H1 = H3 (suite and direct)",
        h4w.max(h1h3).max(direct),
        1e-6,
    )
}

fn criterion_4() -> Verdict {
    let mut detail = Vec::new();
    let mut ok = true;
    let mut results = space_form_suite(10)?;
    let m = flat_complex(2).unwrap();
    results.extend(
        identity_suite(
            &m,
            &m.sample_points(10, 42),
            &three_generators(),
            &SuiteConfig::default(),
        )
        .map_err(|e| e.to_string())?
        .results,
    );
    for id in [
        "I-LIN1", "I-LIN2", "I-2H1H2", "I-PCOMB1", "I-PCOMB2", "I-PCOMB3", "I-H0PW",
    ] {
        let w = worst(&results, &[id])?;
        ok &= w < 1e-6;
        detail.push(format!("{id} {w:.1e}"));
    }
    let line = format!("{} (each < 1e-6, n = 4)", detail.join(", "));
    if ok {
        Ok(line)
    } else {
        Err(line)
    }
}

fn criterion_5() -> Verdict {
    let mut w: f64 = 0.0;
    for m in [fubini_study(2).unwrap(), complex_hyperbolic(2).unwrap()] {
        for p in m.sample_points(20, 42) {
            let b = CurvatureBundle::new(&m, &p, &GeneratorField::zero(4), &DiffConfig::default())
                .map_err(|e| e.to_string())?;
            let pg = hol_projective_from(&b.r_g, &b.ric_g, &b.a);
            w = w.max(pg.norm_max() / b.r_g.norm_max());
        }
    }
    below("max |P|/|R|", w, 1e-6)
}

fn criterion_6() -> Verdict {
    let cfg = DiffConfig::default();
    let m = conformal_nonkahler();
    let mut smallest = f64::INFINITY;
    for p in m.sample_points(10, 42) {
        let d = metricity_defects(&m, &p, &GeneratorField::linear_j(4), &cfg).map_err(|e| e.to_string())?;
        smallest = smallest.min(d.nabla_g_a.max_residual).min(d.nabla1_f.max_residual);
    }
    if smallest <= 1e-3 {
        return Err(format!("non-Kähler defect only {smallest:.3e} (needs > 1e-3)"));
    }
    let out = identity_suite(
        &m,
        &m.sample_points(3, 42),
        &[GeneratorField::linear_j(4)],
        &SuiteConfig::default(),
    )
    .map_err(|e| e.to_string())?;
    let flagged = out
        .results
        .iter()
        .filter(|r| r.id == "I-METRICITY")
        .all(|r| r.classification == Classification::ExpectedFail && r.pass && r.relative >= 1e-6);
    if !flagged {
        return Err("I-METRICITY not reported as a satisfied expected failure".into());
    }
    let mut kahler: f64 = 0.0;
    for m in kahler_catalog() {
        for p in m.sample_points(10, 42) {
            for g in all_generators(4) {
                let d = metricity_defects(&m, &p, &g, &cfg).map_err(|e| e.to_string())?;
                kahler = kahler.max(d.nabla_g_a.max_residual).max(d.nabla1_f.max_residual);
            }
        }
    }
    let tail = below("Kähler max", kahler, 1e-7)?;
    Ok(format!("non-Kähler min {smallest:.3e} (> 1e-3, expected-fail); {tail}"))
}

fn criterion_7() -> Verdict {
    let mut w: f64 = 0.0;
    for m in kahler_catalog() {
        let out = identity_suite(
            &m,
            &m.sample_points(10, 42),
            &all_generators(4),
            &SuiteConfig::default(),
        )
        .map_err(|e| e.to_string())?;
        w = w.max(worst(&out.results, &["I-R1COMM"])?);
    }
    below(
        "R1 closed form vs commutator curvature, 3 manifolds x 5 generators",
        w,
        1e-7,
    )
}

fn criterion_8() -> Verdict {
    let m = flat_complex(2).unwrap();
    let pi = GeneratorField::linear_j(4);
    let cfg = DiffConfig::default();
    let mut d1: f64 = 0.0;
    let mut hypothesis: f64 = 0.0;
    let mut relations: f64 = 0.0;
    for p in m.sample_points(10, 42) {
        let b = CurvatureBundle::new(&m, &p, &pi, &cfg).map_err(|e| e.to_string())?;
        hypothesis = hypothesis.max(hybrid_defect("nabla pi", &b.nabla_pi, &b.a, 1e-10).defect);
        d1 = d1.max(hybrid_defect("D1", &b.d_theta[1], &b.a, 1e-10).defect);
        let rel = structure_relations(&b.r_theta[1], &b.g, &b.a).map_err(|e| e.to_string())?;
        relations = relations.max(rel.lowered_triple().relative());
    }
    if hypothesis >= 1e-10 {
        return Err(format!("linear_j gradient not hybrid: {hypothesis:.3e}"));
    }
    let a = below("D1 hybrid defect", d1, 1e-10)?;
    let b = below("R1 pair relations", relations, 1e-9)?;
    let mut probe_points = Vec::new();
    let mut probe_gens = all_generators(4);
    probe_gens.push(GeneratorField::random_poly(4, 7));
    for m in kahler_catalog() {
        probe_points.extend(m.sample_points(20, 42));
    }
    let probe = degeneracy_probe(&probe_points, &probe_gens, m.structure()).map_err(|e| e.to_string())?;
    if !probe.violations.is_empty() {
        return Err(format!("{a}; {b}; degeneracy violations {:?}", probe.violations));
    }
    Ok(format!(
        "{a}; {b}; probe: {} hybrid pi x pi of {} samples, none with |pi| >= 1e-5",
        probe.hybrid_hits, probe.samples
    ))
}

fn criterion_9() -> Verdict {
    let m = fubini_study(2).unwrap();
    let fd = DiffConfig::new(DiffScheme::Fd4, 1e-3, false).map_err(|e| e.to_string())?;
    let pi = GeneratorField::random_poly(4, 3);
    let mut w: f64 = 0.0;
    for p in m.sample_points(20, 42) {
        let a = CurvatureBundle::new(&m, &p, &pi, &DiffConfig::default()).map_err(|e| e.to_string())?;
        let b = CurvatureBundle::new(&m, &p, &pi, &fd).map_err(|e| e.to_string())?;
        w = w.max(Residual::between(&a.r_g, &b.r_g, &[]).relative());
        for t in 0..6 {
            w = w.max(Residual::between(&a.r_theta[t], &b.r_theta[t], &[]).relative());
        }
    }
    below("fd4 (h = 1e-3) vs analytic, R^g and R^0..R^5", w, 1e-5)
}

fn criterion_10() -> Verdict {
    let cfg = RunConfig {
        manifold: "fs".into(),
        generators: vec!["linear_j".into(), "random_poly:3".into()],
        num_points: 5,
        seed: 7,
        ..RunConfig::default()
    };
    let render = || -> Result<String, String> {
        let mut r = build_report(&cfg).map_err(|e| e.to_string())?;
        r.timestamp = 0;
        Ok(r.to_json())
    };
    let (a, b) = (render()?, render()?);
    if a != b {
        return Err("reports differ".into());
    }
    let changed = build_report(&RunConfig { seed: 8, ..cfg.clone() }).map_err(|e| e.to_string())?;
    let mut changed = changed;
    changed.timestamp = 0;
    if changed.to_json() == a {
        return Err("a different seed produced the same report".into());
    }
    Ok(format!(
        "two runs byte-identical ({} bytes, timestamp zeroed); a new seed changes the report",
        a.len()
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("flat baseline", criterion_1),
        ("generator independence", criterion_2),
        ("H4 = W and H1 = H3", criterion_3),
        ("linear identities", criterion_4),
        ("projective flatness", criterion_5),
        ("Kähler contrapositive", criterion_6),
        ("commutator oracle", criterion_7),
        ("hybridity cascade", criterion_8),
        ("dual-path differentiation", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = run();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {}/10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
