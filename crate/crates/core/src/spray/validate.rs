use std::fmt;

use crate::error::{Error, Result};
use crate::spray::SteinerLikeRep;

/// Relative tolerance for the volume identity.
pub const VOLUME_IDENTITY_TOL: f64 = 1e-9;
/// Slack allowed when checking monotonicity and nonnegativity of samples.
pub const SAMPLE_SLACK: f64 = 1e-12;

/// Outcome of a single invariant check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst-case sample location, if the check is sampled.
    pub worst_eps: Option<f64>,
    /// Worst-case violation measure (0 when passing exactly).
    pub worst_value: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub name: String,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generator {}", self.name)?;
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "  {verdict} {:<22} worst={:.3e}", c.name, c.worst_value)?;
            if let Some(e) = c.worst_eps {
                write!(f, " at eps={e:.6e}")?;
            }
            if !c.detail.is_empty() {
                write!(f, " ({})", c.detail)?;
            }
            writeln!(f)?;
        }
        write!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Samples on `(0, g]`: geometric towards zero plus uniform, always
/// including `g` itself and both sides of every breakpoint.
fn sample_points(rep: &SteinerLikeRep, n: usize) -> Vec<f64> {
    let g = rep.inradius;
    let mut pts: Vec<f64> = Vec::with_capacity(2 * n + 8);
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        pts.push(g * 1e-6f64.powf(1.0 - t));
        pts.push(g * (i + 1) as f64 / n as f64);
    }
    for f in &rep.kappa {
        if let crate::spray::rep::CoefficientFn::Piecewise(p) = f {
            for b in p.breakpoints() {
                pts.push(b);
                pts.push(b * (1.0 - 1e-9));
                pts.push((b * (1.0 + 1e-9)).min(g));
            }
        }
    }
    pts.retain(|x| *x > 0.0 && *x <= g);
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup();
    pts
}

/// Checks every invariant of a Steiner-like representation by sampling.
pub fn validate_rep(rep: &SteinerLikeRep, sample_count: usize) -> Result<ValidationReport> {
    if sample_count < 2 {
        return Err(Error::InvalidArgument("sample_count must be >= 2".into()));
    }
    let d = rep.ambient_dim;
    let g = rep.inradius;
    let pts = sample_points(rep, sample_count);

    let mut values = Vec::with_capacity(pts.len());
    let mut max_kappa = 0.0f64;
    let mut max_kappa_at = g;
    for &x in &pts {
        for k in 0..=d {
            let v = rep.kappa_at(k, x)?;
            if v.abs() > max_kappa {
                max_kappa = v.abs();
                max_kappa_at = x;
            }
        }
        values.push(rep.tube(x)?);
    }
    let mut checks = Vec::new();

    checks.push(CheckResult {
        name: "finite",
        passed: true,
        worst_eps: None,
        worst_value: 0.0,
        detail: format!("{} samples", pts.len()),
    });

    checks.push(CheckResult {
        name: "bounded",
        passed: max_kappa < 1e12,
        worst_eps: Some(max_kappa_at),
        worst_value: max_kappa,
        detail: "max |kappa_k| over samples".into(),
    });

    // extension: evaluation just above g returns the constants
    let mut ext_worst = 0.0f64;
    for k in 0..=d {
        let at = rep.kappa[k].eval(g).ok_or_else(|| Error::InvalidRep("coefficient undefined at g".into()))??;
        ext_worst = ext_worst.max((at - rep.kappa_const[k]).abs());
        ext_worst = ext_worst.max((rep.kappa_at(k, 2.0 * g)? - rep.kappa_const[k]).abs());
    }
    checks.push(CheckResult {
        name: "extension",
        passed: ext_worst == 0.0,
        worst_eps: Some(g),
        worst_value: ext_worst,
        detail: String::new(),
    });

    let from_constants = rep.volume_from_constants();
    let vol_rel = (from_constants - rep.volume).abs() / rep.volume.abs().max(f64::MIN_POSITIVE);
    checks.push(CheckResult {
        name: "volume_identity",
        passed: vol_rel <= VOLUME_IDENTITY_TOL,
        worst_eps: None,
        worst_value: vol_rel,
        detail: format!("sum kappa_k(G) g^(d-k) = {from_constants:.12e}, volume = {:.12e}", rep.volume),
    });

    let scale = rep.volume.abs().max(1.0);
    let (mut neg_worst, mut neg_at) = (0.0f64, None);
    for (x, v) in pts.iter().zip(&values) {
        if -v > neg_worst {
            neg_worst = -v;
            neg_at = Some(*x);
        }
    }
    checks.push(CheckResult {
        name: "nonnegative",
        passed: neg_worst <= SAMPLE_SLACK * scale,
        worst_eps: neg_at,
        worst_value: neg_worst,
        detail: String::new(),
    });

    let (mut dec_worst, mut dec_at) = (0.0f64, None);
    for w in pts.windows(2).zip(values.windows(2)) {
        let drop = w.1[0] - w.1[1];
        if drop > dec_worst {
            dec_worst = drop;
            dec_at = Some(w.0[1]);
        }
    }
    checks.push(CheckResult {
        name: "nondecreasing",
        passed: dec_worst <= 1e-10 * scale,
        worst_eps: dec_at,
        worst_value: dec_worst,
        detail: String::new(),
    });

    // vanishing at zero: the smallest sample should be tiny relative to the
    // volume and the sequence should be shrinking towards it
    let v_small = values[0];
    let v_mid = rep.tube(g * 1e-3)?;
    let vanishes = v_small.abs() <= 1e-4 * scale && v_small.abs() <= v_mid.abs() + SAMPLE_SLACK;
    checks.push(CheckResult {
        name: "vanishes_at_zero",
        passed: vanishes,
        worst_eps: Some(pts[0]),
        worst_value: v_small.abs(),
        detail: String::new(),
    });

    let left_limit = rep.tube(g * (1.0 - 1e-12))?;
    let branch = (left_limit - rep.tube(g)?).abs() / scale;
    let sat = (rep.tube(g)? - rep.volume).abs() / scale;
    checks.push(CheckResult {
        name: "continuity_at_g",
        passed: branch <= 1e-9 && sat <= VOLUME_IDENTITY_TOL,
        worst_eps: Some(g),
        worst_value: branch.max(sat),
        detail: String::new(),
    });

    let mono_ok = if rep.monophase {
        let mut ok = rep.kappa_const[d] == 0.0;
        for &x in &pts {
            for k in 0..=d {
                ok &= rep.kappa_at(k, x)? == rep.kappa_const[k];
            }
        }
        ok
    } else {
        true
    };
    checks.push(CheckResult {
        name: "monophase_consistent",
        passed: mono_ok,
        worst_eps: None,
        worst_value: 0.0,
        detail: format!("monophase = {}", rep.monophase),
    });

    Ok(ValidationReport { name: rep.name.clone(), checks })
}
