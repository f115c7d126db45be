use rayon::prelude::*;
use spraytube::formula::TailEnvelope;
use spraytube::oracle::direct_tube;
use spraytube::scaling::roots::ROOT_RESIDUAL_TOL;
use spraytube::spray::validate_rep;
use spraytube::tubular::INTEGER_GUARD;
use spraytube::{complex_dimensions, zeta_eval, Complex64, Lattice, Screen, TubeFormula, TubularZetaContext, Window};

use crate::config::Config;
use crate::output::{num, Table};

/// How a command ended, mapped to the process exit code.
#[derive(Debug)]
pub enum Failure {
    /// A comparison or validation verdict was negative (exit 1).
    Verdict(String),
    /// Bad or inconsistent input (exit 2).
    Config(String),
    /// A numerical routine refused or failed (exit 3).
    Numerical(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Verdict(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Verdict(m) | Failure::Config(m) | Failure::Numerical(m) => m,
        }
    }
}

fn numerical(e: spraytube::Error) -> Failure {
    Failure::Numerical(e.to_string())
}

/// The rendered main output plus an optional verdict.
pub struct Output {
    pub text: String,
    pub verdict: Option<Failure>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, verdict: None }
    }
}

fn lattice_note(lattice: &Lattice) -> String {
    match lattice {
        Lattice::Lattice(s) => {
            format!("lattice: yes; base={} exponents={:?} period={}", num(s.base), s.exponents, num(s.period))
        }
        Lattice::Nonlattice => "lattice: no".into(),
    }
}

pub fn dims(cfg: &Config, sha: &str) -> Result<Output, Failure> {
    let sys = cfg.system().map_err(Failure::Config)?;
    let mut window = Window::for_system(&sys, cfg.im_max());
    let explicit = cfg.job.window.as_ref();
    let re_given = explicit.is_some_and(|w| w.re_min.is_some() || w.re_max.is_some());
    if let Some(w) = explicit {
        window = Window::new(w.re_min.unwrap_or(window.re_min), w.re_max.unwrap_or(window.re_max), window.im_max)
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    let set = complex_dimensions(&sys, &window).map_err(numerical)?;

    let mut t =
        Table::new("dims", sha, &["re", "im", "residue_re", "residue_im", "kind", "lattice_line_index", "residual"]);
    t.note(format!("dimension: {}", num(sys.dimension())));
    t.note(lattice_note(&set.lattice));
    t.note(format!("window: re in [{}, {}], |im| <= {}", num(window.re_min), num(window.re_max), num(window.im_max)));
    t.note(format!("root residual tolerance: {ROOT_RESIDUAL_TOL:e}"));
    if let (Some(c), Some(n)) = (set.contour_count, set.newton_count) {
        t.note(format!("argument principle count: {c}; located: {n}"));
    }
    t.note("integer rows are poles of the generator factor and carry no scaling residue");

    let mut scaling = set.scaling.clone();
    scaling.sort_by(|a, b| b.omega.re.total_cmp(&a.omega.re).then(a.omega.im.total_cmp(&b.omega.im)));
    for d in &scaling {
        let res = d.residue.unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        t.row(vec![
            num(d.omega.re),
            num(d.omega.im),
            num(res.re),
            num(res.im),
            if d.simple { "scaling" } else { "scaling_nonsimple" }.into(),
            d.line.map(|l| l.to_string()).unwrap_or_default(),
            num(d.residual),
        ]);
    }
    for k in 0..=sys.ambient_dim() {
        let kf = k as f64;
        if re_given && !(kf >= window.re_min && kf <= window.re_max) {
            continue;
        }
        t.row(vec![num(kf), num(0.0), String::new(), String::new(), "integer".into(), String::new(), String::new()]);
    }
    Ok(Output::ok(t.render()))
}

struct TubeRow {
    eps: f64,
    formula: f64,
    bound: f64,
    heuristic: bool,
    saturated: bool,
    oracle: f64,
    screen: Option<(f64, f64, f64)>,
}

impl TubeRow {
    fn abs_err(&self) -> f64 {
        (self.formula - self.oracle).abs()
    }

    fn rel_err(&self) -> f64 {
        self.abs_err() / self.oracle.abs()
    }
}

fn formula_for(cfg: &Config) -> Result<(TubeFormula, Vec<f64>), Failure> {
    let spray = cfg.spray().map_err(Failure::Config)?;
    if spray.system().is_none() {
        return Err(Failure::Config("the tube formula needs a self-similar `system` spray".into()));
    }
    let g_min = spray.generators().iter().map(|g| g.inradius).fold(f64::INFINITY, f64::min);
    let grid = cfg
        .job
        .eps
        .as_ref()
        .ok_or_else(|| Failure::Config("config: `job.eps` is required".into()))?
        .resolve(g_min)
        .map_err(Failure::Config)?;
    let f = TubeFormula::new(TubularZetaContext::new(spray), cfg.truncation()).map_err(numerical)?;
    Ok((f, grid))
}

fn tube_rows(cfg: &Config, f: &TubeFormula, grid: &[f64]) -> Result<Vec<TubeRow>, Failure> {
    let screen = match &cfg.job.screen {
        Some(s) => Some(
            match s.height {
                Some(h) => Screen::new(s.sigma, h),
                None => Screen::at(s.sigma),
            }
            .map_err(|e| Failure::Config(e.to_string()))?,
        ),
        None => None,
    };
    let quad_tol = cfg.quad_tol();
    let spray = f.context().spray();
    grid.par_iter()
        .map(|&eps| {
            let v = f.tube(eps)?;
            let oracle = direct_tube(spray, eps)?;
            let screened = match &screen {
                Some(sc) if !v.saturated => {
                    let st = f.tube_with_error(eps, sc, quad_tol)?;
                    Some((st.value, st.error_term.quad_bound, st.error_term.tail_bound))
                }
                _ => None,
            };
            Ok(TubeRow {
                eps,
                formula: v.value,
                bound: v.trunc_bound,
                heuristic: v.heuristic_bound,
                saturated: v.saturated,
                oracle,
                screen: screened,
            })
        })
        .collect::<spraytube::Result<Vec<_>>>()
        .map_err(numerical)
}

fn tube_table(cfg: &Config, sha: &str, command: &str, f: &TubeFormula, rows: &[TubeRow]) -> Table {
    let screened = cfg.job.screen.is_some();
    let mut header = vec!["epsilon", "v_formula", "trunc_bound", "v_oracle", "abs_err", "rel_err", "branch"];
    if screened {
        header.extend(["v_screen", "screen_quad_bound", "screen_tail_bound"]);
    }
    let mut t = Table::new(command, sha, &header);
    t.note(lattice_note(f.lattice()));
    let tr = f.truncation();
    t.note(format!(
        "truncation: lattice_n={} nonlattice_height={}; kept {} scaling terms, dropped {}",
        tr.lattice_n,
        num(tr.nonlattice_height),
        f.scaling_terms().len(),
        f.dropped_terms()
    ));
    match f.envelope() {
        TailEnvelope::Lattice { .. } => t.note("trunc_bound: rigorous per-line envelope"),
        TailEnvelope::Heuristic { amplitude, density, .. } => {
            t.note(format!("trunc_bound: heuristic envelope, amplitude={} density={}", num(*amplitude), num(*density)))
        }
    }
    let worst = rows.iter().map(|r| r.bound).fold(0.0, f64::max);
    t.note(format!("max trunc_bound: {}", num(worst)));
    t.note(format!("tolerances: integer_guard={INTEGER_GUARD:e} root_residual={ROOT_RESIDUAL_TOL:e}"));
    if let Some(s) = &cfg.job.screen {
        t.note(format!(
            "screen: sigma={} quad_tol={:e}; saturated rows have no screen value",
            num(s.sigma),
            cfg.quad_tol()
        ));
    }
    if rows.iter().any(|r| r.saturated) {
        t.note("branch=saturated: eps at or above the inradius, value is the total volume");
    }
    for r in rows {
        let branch = if r.saturated {
            "saturated"
        } else if f.context().spray().is_monophase() {
            "monophase"
        } else {
            "exact"
        };
        let mut cells = vec![
            num(r.eps),
            num(r.formula),
            num(r.bound),
            num(r.oracle),
            num(r.abs_err()),
            num(r.rel_err()),
            branch.into(),
        ];
        if screened {
            match r.screen {
                Some((v, q, tail)) => cells.extend([num(v), num(q), num(tail)]),
                None => cells.extend([String::new(), String::new(), String::new()]),
            }
        }
        t.row(cells);
    }
    t
}

pub fn tube(cfg: &Config, sha: &str) -> Result<Output, Failure> {
    let (f, grid) = formula_for(cfg)?;
    let rows = tube_rows(cfg, &f, &grid)?;
    Ok(Output::ok(tube_table(cfg, sha, "tube", &f, &rows).render()))
}

/// Rows and a summary; the table goes to `--out` when given.
pub fn compare(cfg: &Config, sha: &str) -> Result<(Output, String), Failure> {
    let (f, grid) = formula_for(cfg)?;
    let rows = tube_rows(cfg, &f, &grid)?;
    let table = tube_table(cfg, sha, "compare", &f, &rows).render();
    let tol = cfg.rel_tol();
    let worst = rows.iter().max_by(|a, b| a.rel_err().total_cmp(&b.rel_err())).expect("grid is nonempty");
    let failed: Vec<&TubeRow> = rows.iter().filter(|r| !(r.rel_err() <= tol)).collect();

    let mut s = String::new();
    s.push_str(&format!("config_sha256: {sha}\n"));
    s.push_str(&format!("points: {}  rel_tol: {tol:e}\n", rows.len()));
    s.push_str(&format!(
        "worst eps: {}  abs_err: {}  rel_err: {}  trunc_bound: {}\n",
        num(worst.eps),
        num(worst.abs_err()),
        num(worst.rel_err()),
        num(worst.bound)
    ));
    if rows.iter().any(|r| r.heuristic) {
        s.push_str("bound: heuristic (nonlattice envelope)\n");
    }
    let mut heads_vanish = true;
    if f.context().spray().is_monophase() {
        let d = f.context().dim();
        let mut max_e: f64 = 0.0;
        for r in rows.iter().filter(|r| !r.saturated) {
            for k in 0..=d {
                max_e = max_e.max(f.coeff_e_k(k, r.eps).map_err(numerical)?.abs());
            }
        }
        heads_vanish = max_e == 0.0;
        s.push_str(&format!("monophase: head coefficients max |e_k| = {}\n", num(max_e)));
    }
    let beyond_bound: Vec<&TubeRow> =
        rows.iter().filter(|r| !(r.abs_err() <= r.bound + BOUND_SLACK * r.oracle.abs())).collect();
    s.push_str(&format!(
        "bound: {} ({} of {} points within trunc_bound)\n",
        if beyond_bound.is_empty() { "satisfied" } else { "violated" },
        rows.len() - beyond_bound.len(),
        rows.len()
    ));
    let cause = if !beyond_bound.is_empty() {
        Some("bound violated")
    } else if !heads_vanish {
        Some("head coefficients")
    } else if let Some(w) = failed.iter().max_by(|a, b| a.rel_err().total_cmp(&b.rel_err())) {
        // within the bound but over tolerance: the bound itself is too loose
        Some(if w.bound > tol * w.oracle.abs() { "truncation" } else { "unexplained" })
    } else {
        None
    };
    let verdict = match cause {
        None => {
            s.push_str("verdict: PASS\n");
            None
        }
        Some(cause) => {
            s.push_str(&format!("verdict: FAIL ({} of {} points over tolerance)\n", failed.len(), rows.len()));
            s.push_str(&format!("attribution: {cause}\n"));
            Some(Failure::Verdict(format!("compare failed: attribution {cause}")))
        }
    };
    Ok((Output { text: table, verdict }, s))
}

pub fn validate_generator(cfg: &Config) -> Result<Output, Failure> {
    let configs = cfg.generator_configs();
    if configs.is_empty() {
        return Err(Failure::Config("config: a `generator` is required".into()));
    }
    let mut text = String::new();
    let mut failed = Vec::new();
    for g in &configs {
        let rep = g.build(false).map_err(Failure::Config)?;
        let report = validate_rep(&rep, cfg.samples()).map_err(numerical)?;
        text.push_str(&report.to_string());
        if !text.ends_with('\n') {
            text.push('\n');
        }
        if !report.passed() {
            failed.push(report.name.clone());
        }
    }
    text.push_str(if failed.is_empty() { "verdict: PASS\n" } else { "verdict: FAIL\n" });
    let verdict = (!failed.is_empty()).then(|| Failure::Verdict(format!("validation failed: {}", failed.join(", "))));
    Ok(Output { text, verdict })
}

pub fn apollonian(cfg: &Config, sha: &str) -> Result<Output, Failure> {
    let packing =
        cfg.packing().map_err(|m| if m.starts_with("config:") { Failure::Config(m) } else { Failure::Numerical(m) })?;
    let mut t = Table::new("apollonian", sha, &["index", "curvature", "radius", "normalized_radius", "form_residual"]);
    let seed = packing.seed();
    t.note(format!(
        "seed: [{}]; min_radius={}",
        seed.iter().map(|a| num(*a)).collect::<Vec<_>>().join(" "),
        num(packing.min_radius())
    ));
    t.note(format!(
        "circles: {}; quadruples: {}; max |F|: {}",
        packing.radii().len(),
        packing.quadruple_count(),
        num(packing.max_form_residual())
    ));
    let r_enc = packing.enclosing_radius();
    t.note(format!(
        "enclosing radius: {}; disk area: {}; saturation pi R^2: {}",
        num(r_enc),
        num(packing.disk_area()),
        num(std::f64::consts::PI * r_enc * r_enc)
    ));
    let r_max = packing.largest_radius().unwrap_or(f64::NAN);
    for (i, (r, form)) in packing.radii().iter().zip(packing.form_residuals()).enumerate() {
        t.row(vec![i.to_string(), num(1.0 / r), num(*r), num(r / r_max), num(*form)]);
    }
    Ok(Output::ok(t.render()))
}

/// Rounding allowance, relative to the oracle, when checking `abs_err <= trunc_bound`.
const BOUND_SLACK: f64 = 1e-12;

const SERIES_REL_TOL: f64 = 1e-12;

pub fn zeta(cfg: &Config, sha: &str) -> Result<Output, Failure> {
    if cfg.job.s.is_empty() {
        return Err(Failure::Config("config: `job.s` lists no points".into()));
    }
    let string = cfg.string().map_err(Failure::Config)?;
    let mut t = Table::new("zeta", sha, &["s_re", "s_im", "zeta_re", "zeta_im", "method", "remainder_bound"]);
    if let Some(sys) = string.system() {
        t.note(format!("dimension: {}", num(sys.dimension())));
    }
    t.note(format!("series relative tolerance: {SERIES_REL_TOL:e}"));
    let rows = cfg
        .job
        .s
        .par_iter()
        .map(|&[re, im]| {
            let s = Complex64::new(re, im);
            if let Some(sys) = string.system() {
                return zeta_eval(sys, s).map(|z| (s, z, "closed", 0.0));
            }
            if let Some(z) = string.zeta_closed(s) {
                return Ok((s, z, "closed", 0.0));
            }
            spraytube::scaling::zeta_series_bounded(&string, s, SERIES_REL_TOL)
                .map(|v| (s, v.value, "series", v.remainder_bound))
        })
        .collect::<spraytube::Result<Vec<_>>>()
        .map_err(numerical)?;
    for (s, z, method, rem) in rows {
        t.row(vec![num(s.re), num(s.im), num(z.re), num(z.im), method.into(), num(rem)]);
    }
    Ok(Output::ok(t.render()))
}
