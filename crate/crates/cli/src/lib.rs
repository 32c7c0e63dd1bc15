//! Command implementations behind the `qsc-lab` binary.

pub mod config;
pub mod report;

use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use qsc_core::connections::torsion;
use qsc_core::curvature::CurvatureBundle;
use qsc_core::geometry::{GENERATOR_NAMES, MANIFOLD_NAMES};
use qsc_core::invariants::{h_tensor, hol_projective_from, identity_suite, weyl_projective_from, IDENTITIES};
use qsc_core::{GeneratorField, ManifoldSpec, Point, Tensor, TensorField, Variance};

pub use config::RunConfig;
pub use report::{Report, Summary, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] qsc_core::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_IDENTITY_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

pub const MANIFOLD_DESCRIPTIONS: [(&str, &str); 4] = [
    ("flat", "C^k with the Euclidean metric; curvature vanishes"),
    ("fs", "Fubini-Study chart of CP^k, potential ln(1 + |z|^2)"),
    (
        "hyperbolic",
        "ball model of complex hyperbolic space, potential -ln(1 - |z|^2)",
    ),
    (
        "conformal-nonkahler",
        "e^(2 x1) times the Euclidean metric; Hermitian but not Kähler",
    ),
];

pub const GENERATOR_DESCRIPTIONS: [(&str, &str); 5] = [
    ("zero", "pi = 0"),
    ("const[:c1/c2/...]", "constant components, default 1, -0.5, 0.25, ..."),
    ("linear_j", "pi = sum of x_a dy_a - y_a dx_a"),
    (
        "grad[:x1sq|cubic]",
        "differential of x1^2 + y1^2 or of x1^2 y1 + x1 y1^2",
    ),
    (
        "random_poly[:seed]",
        "seeded quadratic polynomial components in [-1, 1]",
    ),
];

pub const TENSOR_NAMES: &[&str] = &[
    "g", "F", "A", "pi", "torsion", "d0", "d1", "d2", "d3", "d4", "rg", "r0", "r1", "r2", "r3", "r4", "r5", "ric_g",
    "ric0", "ric1", "ric2", "ric3", "ric4", "ric5", "prime_r3", "prime_r4", "w", "p", "h0", "h1", "h2", "h3", "h4",
    "h5",
];

pub fn parse_generators(specs: &[String], n: usize) -> Result<Vec<GeneratorField>, CliError> {
    specs
        .iter()
        .map(|s| GeneratorField::parse(s, n).map_err(CliError::from))
        .collect()
}

/// Runs the suite and assembles the report; does not write anything.
pub fn build_report(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let m = ManifoldSpec::by_name(&cfg.manifold, cfg.k)?;
    let generators = parse_generators(&cfg.generators, m.dim())?;
    let points = m.sample_points(cfg.num_points, cfg.seed);
    let outcome = identity_suite(&m, &points, &generators, &cfg.suite_config()?)?;
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    Ok(Report {
        version: SCHEMA_VERSION.to_string(),
        timestamp,
        config_echo: cfg.clone(),
        manifold: report::ManifoldInfo::of(&m),
        points: points.iter().map(|p| p.coords().to_vec()).collect(),
        summary: Summary::of(&outcome.results),
        results: outcome.results.iter().map(Into::into).collect(),
        notes: outcome.notes,
    })
}

/// `verify`: writes the JSON report (when an output path is set) and the
/// table, and returns the exit code for identity outcomes.
pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = build_report(cfg)?;
    if let Some(path) = &cfg.output {
        std::fs::write(path, report.to_json()).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    let _ = write!(out, "{}", report.table());
    Ok(if report.summary.success(cfg.audit_soft) {
        EXIT_OK
    } else {
        EXIT_IDENTITY_FAILURE
    })
}

/// Parameters of the `tensor` subcommand.
#[derive(Debug, Clone)]
pub struct TensorRequest {
    pub what: String,
    pub manifold: String,
    /// Defaults to half the point's length.
    pub k: Option<usize>,
    pub generator: String,
    pub point: String,
    pub diff: String,
    pub threshold: f64,
}

pub fn parse_point(s: &str) -> Result<Vec<f64>, CliError> {
    let coords = s
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| CliError::Config(format!("malformed point '{s}': bad coordinate '{c}'")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if coords.is_empty() || coords.len() % 2 != 0 {
        return Err(CliError::Config(format!(
            "malformed point '{s}': expected an even number of coordinates"
        )));
    }
    Ok(coords)
}

pub fn tensor_value(req: &TensorRequest) -> Result<(ManifoldSpec, Tensor), CliError> {
    let coords = parse_point(&req.point)?;
    let k = req.k.unwrap_or(coords.len() / 2);
    let m = ManifoldSpec::by_name(&req.manifold, k)?;
    if coords.len() != m.dim() {
        return Err(CliError::Config(format!(
            "point has {} coordinates but the chart has dimension {}",
            coords.len(),
            m.dim()
        )));
    }
    let p = Point::new(coords);
    let pi = GeneratorField::parse(&req.generator, m.dim())?;
    let cfg = RunConfig {
        diff: req.diff.clone(),
        ..RunConfig::default()
    }
    .diff_config()?;
    let what = req.what.as_str();
    let simple = match what {
        "g" => Some(m.metric(&p)?),
        "F" | "f" => Some(m.kahler_form(&p)?),
        "A" | "a" => {
            m.metric(&p)?;
            Some(m.structure().clone())
        }
        "pi" => Some(pi.value(&p)?),
        "torsion" => Some(torsion(&m, &p, &pi)?),
        _ => None,
    };
    if let Some(t) = simple {
        return Ok((m, t));
    }
    let b = CurvatureBundle::new(&m, &p, &pi, &cfg)?;
    let indexed = |prefix: &str, max: usize| {
        what.strip_prefix(prefix)
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&i| i <= max && what.len() == prefix.len() + 1)
    };
    let t = match what {
        "rg" => b.r_g.clone(),
        "ric_g" => b.ric_g.clone(),
        "prime_r3" => b.prime_r3.clone(),
        "prime_r4" => b.prime_r4.clone(),
        "d4" => b.d4.clone(),
        "w" => weyl_projective_from(&b.r_g, &b.ric_g)?,
        "p" => hol_projective_from(&b.r_g, &b.ric_g, &b.a),
        _ => {
            if let Some(i) = indexed("ric", 5) {
                b.ric_theta[i].clone()
            } else if let Some(i) = indexed("d", 3) {
                b.d_theta[i].clone()
            } else if let Some(i) = indexed("r", 5) {
                b.r_theta[i].clone()
            } else if let Some(i) = indexed("h", 5) {
                h_tensor(i, &b)
            } else {
                return Err(CliError::Config(format!(
                    "unknown tensor '{what}' (valid: {})",
                    TENSOR_NAMES.join(", ")
                )));
            }
        }
    };
    Ok((m, t))
}

/// Renders nonzero components as `name[(up; down)] = value` lines.
pub fn render_components(name: &str, m: &ManifoldSpec, t: &Tensor, threshold: f64) -> String {
    let sig = t.signature();
    let ups = sig.slots().iter().filter(|v| **v == Variance::Up).count();
    let mut out = String::new();
    let entries = t.nonzero(threshold);
    for (idx, v) in &entries {
        let labels: Vec<String> = idx.iter().map(|&i| m.chart.coordinate_label(i)).collect();
        let inner = if ups > 0 && ups < labels.len() {
            format!("{}; {}", labels[..ups].join(","), labels[ups..].join(","))
        } else {
            labels.join(",")
        };
        out.push_str(&format!("{name}({inner}) = {v}\n"));
    }
    if entries.is_empty() {
        out.push_str(&format!(
            "{name}: all {} components below {threshold:e}\n",
            t.data().len()
        ));
    }
    out
}

pub fn cmd_tensor(req: &TensorRequest, out: &mut dyn Write) -> Result<(), CliError> {
    let (m, t) = tensor_value(req)?;
    let _ = write!(out, "{}", render_components(&req.what, &m, &t, req.threshold));
    Ok(())
}

pub fn cmd_list(what: Option<&str>, out: &mut dyn Write) -> Result<(), CliError> {
    let sections: Vec<&str> = match what {
        None => vec!["manifolds", "generators", "identities"],
        Some(s @ ("manifolds" | "generators" | "identities")) => vec![s],
        Some(other) => {
            return Err(CliError::Config(format!(
                "unknown catalog '{other}' (valid: manifolds, generators, identities)"
            )))
        }
    };
    debug_assert_eq!(MANIFOLD_NAMES.len(), MANIFOLD_DESCRIPTIONS.len());
    debug_assert_eq!(GENERATOR_NAMES.len(), GENERATOR_DESCRIPTIONS.len());
    for s in sections {
        let _ = writeln!(out, "{s}:");
        match s {
            "manifolds" => {
                for (name, d) in MANIFOLD_DESCRIPTIONS {
                    let _ = writeln!(out, "  {name:<22} {d}");
                }
            }
            "generators" => {
                for (name, d) in GENERATOR_DESCRIPTIONS {
                    let _ = writeln!(out, "  {name:<22} {d}");
                }
            }
            _ => {
                for i in IDENTITIES {
                    let _ = writeln!(out, "  {:<14} {:<13} {}", i.id, i.class.as_str(), i.description);
                }
            }
        }
    }
    Ok(())
}
