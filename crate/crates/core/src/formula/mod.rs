//! Assembled tube formulas: the residue sum over the complex dimensions of a
//! self-similar spray, its monophase specialization, and the screen error
//! term.

pub mod quad;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{real_pow, CompensatedSum, ComplexSum};
use crate::scaling::roots::lifts_within;
use crate::scaling::{
    complex_dimensions, lattice_classify, lattice_lines, residue_at, strip_lower_bound, zeta_eval, Lattice, Window,
};
use crate::spray::SelfSimilarSystem;
use crate::tubular::{TubularZetaContext, INTEGER_GUARD};

pub use quad::{adaptive_simpson, QuadResult};

pub const DEFAULT_LATTICE_N: usize = 10_000;
pub const DEFAULT_NONLATTICE_HEIGHT: f64 = 100.0;
pub const DEFAULT_SCREEN_HEIGHT: f64 = 1e3;
/// Minimum distance between a screen and any pole real part or integer.
pub const SCREEN_MARGIN: f64 = 1e-3;
/// Allowed `|Im|` of the symmetric partial sum relative to its real part.
pub const REAL_SUM_TOL: f64 = 1e-10;
/// Scaling terms with smaller coefficients are dropped.
pub const DROP_THRESHOLD: f64 = 1e-300;

/// How far the sum over scaling dimensions is carried.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    /// Lattice case: lifts with `|Im omega| <= (N + 1/2) p` on every line.
    pub lattice_n: usize,
    /// Nonlattice case: roots with `|Im omega| <= T`.
    pub nonlattice_height: f64,
}

impl Default for TruncationSpec {
    fn default() -> Self {
        TruncationSpec { lattice_n: DEFAULT_LATTICE_N, nonlattice_height: DEFAULT_NONLATTICE_HEIGHT }
    }
}

impl TruncationSpec {
    pub fn lattice(n: usize) -> Self {
        TruncationSpec { lattice_n: n, ..Default::default() }
    }
}

/// Constant vertical screen `Re s = abscissa`, integrated up to `|Im s| <= height`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Screen {
    pub abscissa: f64,
    pub height: f64,
}

impl Screen {
    pub fn new(abscissa: f64, height: f64) -> Result<Self> {
        if !(abscissa.is_finite() && height > 0.0 && height.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "screen needs a finite abscissa and positive height, got {abscissa}, {height}"
            )));
        }
        Ok(Screen { abscissa, height })
    }

    pub fn at(abscissa: f64) -> Result<Self> {
        Self::new(abscissa, DEFAULT_SCREEN_HEIGHT)
    }
}

/// A tube value with the bound on the omitted scaling terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeValue {
    pub value: f64,
    pub trunc_bound: f64,
    /// `eps` was at or above the inradius: every tile is full.
    pub saturated: bool,
    /// The bound is a fitted envelope rather than a proof.
    pub heuristic_bound: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingTerm {
    pub omega: Complex64,
    pub residue: Complex64,
    pub coeff: Complex64,
    pub line: Option<usize>,
    pub lift: Option<i64>,
}

/// Envelope `|c_omega| <= A / |Im omega|^2` used for the truncation bound.
#[derive(Debug, Clone, PartialEq)]
pub enum TailEnvelope {
    /// Rigorous: one amplitude per line.
    Lattice { period: f64, height: f64, lines: Vec<(f64, f64)> },
    /// Fitted to the located roots.
    Heuristic { amplitude: f64, density: f64, re_range: (f64, f64), height: f64 },
}

/// Error term of a screen integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorTerm {
    pub value: f64,
    /// Sum of local quadrature error estimates on `|t| <= T`.
    pub quad_error: f64,
    /// Bound on the part of the integral with `|t| > T`.
    pub tail_bound: f64,
    pub quad_bound: f64,
    /// Whether the `zeta_L` bound behind `tail_bound` is rigorous.
    pub rigorous_tail: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenedTube {
    pub value: f64,
    /// Residue terms right of the screen plus the constant term.
    pub visible: f64,
    pub error_term: ErrorTerm,
    pub trunc_bound: f64,
}

/// The fractal tube formula of a self-similar spray.
#[derive(Debug, Clone)]
pub struct TubeFormula {
    ctx: TubularZetaContext,
    system: SelfSimilarSystem,
    trunc: TruncationSpec,
    lattice: Lattice,
    scaling_terms: Vec<ScalingTerm>,
    integer_coeffs: Vec<f64>,
    dropped: usize,
    envelope: TailEnvelope,
    pole_real_parts: Vec<f64>,
    g_min: f64,
    g_max: f64,
}

impl TubeFormula {
    pub fn new(ctx: TubularZetaContext, trunc: TruncationSpec) -> Result<Self> {
        let system = ctx
            .spray()
            .system()
            .cloned()
            .ok_or_else(|| Error::InvalidArgument("the tube formula needs a self-similar string".into()))?;
        let d = ctx.dim();
        let lattice = lattice_classify(&system);
        let mut terms = Vec::new();
        let mut pole_real_parts = Vec::new();
        let envelope = match &lattice {
            Lattice::Lattice(structure) => {
                let p = structure.period;
                let height = (trunc.lattice_n as f64 + 0.5) * p;
                let mut env_lines = Vec::new();
                for line in lattice_lines(&system, structure)? {
                    check_collision(line.base, d)?;
                    let residue = line.residue.ok_or(Error::NotSimple { omega: line.base, derivative: 0.0 })?;
                    pole_real_parts.push(line.base.re);
                    env_lines.push((line.base.re, envelope_amplitude(&ctx, residue.norm(), line.base.re)));
                    for n in lifts_within(line.base.im, p, height) {
                        let omega = Complex64::new(line.base.re, line.base.im + n as f64 * p);
                        terms.push(ScalingTerm {
                            omega,
                            residue,
                            coeff: scaling_coeff(&ctx, omega, residue),
                            line: Some(line.index),
                            lift: Some(n),
                        });
                    }
                }
                TailEnvelope::Lattice { period: p, height, lines: env_lines }
            }
            Lattice::Nonlattice => {
                let height = trunc.nonlattice_height;
                let window = Window::for_system(&system, height);
                let dims = complex_dimensions(&system, &window)?;
                let mut amplitude = 0.0f64;
                for dim in &dims.scaling {
                    check_collision(dim.omega, d)?;
                    let residue = dim
                        .residue
                        .ok_or(Error::NotSimple { omega: dim.omega, derivative: system.phi_prime(dim.omega).norm() })?;
                    let coeff = scaling_coeff(&ctx, dim.omega, residue);
                    if dim.omega.im.abs() >= 1.0 {
                        amplitude = amplitude.max(coeff.norm() * dim.omega.im.powi(2));
                    }
                    pole_real_parts.push(dim.omega.re);
                    terms.push(ScalingTerm { omega: dim.omega, residue, coeff, line: None, lift: None });
                }
                TailEnvelope::Heuristic {
                    amplitude,
                    density: terms.len() as f64 / (2.0 * height),
                    re_range: (window.re_min, window.re_max),
                    height,
                }
            }
        };
        let before = terms.len();
        terms.retain(|t| t.coeff.norm() >= DROP_THRESHOLD);
        let dropped = before - terms.len();

        let mut integer_coeffs = Vec::with_capacity(d + 1);
        for k in 0..=d {
            let zl = ctx.zeta_l_integer(k)?;
            integer_coeffs.push(ctx.kappa_const(k) * zl);
        }
        pole_real_parts.sort_by(|a, b| a.total_cmp(b));
        pole_real_parts.dedup();
        let gens = ctx.spray().generators();
        let g_min = gens.iter().map(|r| r.inradius).fold(f64::INFINITY, f64::min);
        let g_max = ctx.spray().max_inradius();
        Ok(TubeFormula {
            ctx,
            system,
            trunc,
            lattice,
            scaling_terms: terms,
            integer_coeffs,
            dropped,
            envelope,
            pole_real_parts,
            g_min,
            g_max,
        })
    }

    pub fn context(&self) -> &TubularZetaContext {
        &self.ctx
    }

    pub fn system(&self) -> &SelfSimilarSystem {
        &self.system
    }

    pub fn truncation(&self) -> TruncationSpec {
        self.trunc
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn scaling_terms(&self) -> &[ScalingTerm] {
        &self.scaling_terms
    }

    /// `c_k = kappa_k(G) zeta_L(k)` for `k = 0..=d`.
    pub fn integer_coeffs(&self) -> &[f64] {
        &self.integer_coeffs
    }

    pub fn dropped_terms(&self) -> usize {
        self.dropped
    }

    pub fn envelope(&self) -> &TailEnvelope {
        &self.envelope
    }

    /// Distinct real parts of the scaling dimensions in use.
    pub fn pole_real_parts(&self) -> &[f64] {
        &self.pole_real_parts
    }

    /// Smallest generator inradius: the formula holds for `eps` below it.
    pub fn inradius(&self) -> f64 {
        self.g_min
    }

    /// `lambda(G) zeta_L(d)`.
    pub fn constant(&self) -> Result<f64> {
        Ok(self.ctx.generator_volume() * self.ctx.zeta_l_integer(self.ctx.dim())?)
    }

    /// Value for `eps >= g`: all tiles full.
    pub fn saturated_value(&self) -> Result<f64> {
        self.constant()
    }

    /// `c_omega = res zeta_L(omega) / (d - omega) * M_omega` at a located pole.
    pub fn coeff_c_omega(&self, omega: Complex64) -> Result<Complex64> {
        check_collision(omega, self.ctx.dim())?;
        let residue = residue_at(&self.system, omega)?;
        Ok(scaling_coeff(&self.ctx, omega, residue))
    }

    /// `c_k = kappa_k(G) zeta_L(k)`.
    pub fn coeff_c_k(&self, k: usize) -> Result<f64> {
        if k > self.ctx.dim() {
            return Err(Error::InvalidArgument(format!("k = {k} exceeds d = {}", self.ctx.dim())));
        }
        let zl = zeta_eval(&self.system, Complex64::new(k as f64, 0.0))?;
        Ok(self.ctx.kappa_const(k) * zl.re)
    }

    /// `e_k(eps) = sum_{j <= J(eps)} l_j^k f_k(eps / l_j)`.
    pub fn coeff_e_k(&self, k: usize, eps: f64) -> Result<f64> {
        self.ctx.e_k(k, eps)
    }

    /// Bound on the omitted scaling terms at `eps`.
    pub fn trunc_bound(&self, eps: f64) -> (f64, bool) {
        let d = self.ctx.dim() as f64;
        match &self.envelope {
            TailEnvelope::Lattice { period, height, lines } => {
                let x = height / period;
                let shape = 2.0 / (period * period) * (1.0 / (x * x) + 1.0 / x);
                let b: f64 = lines.iter().map(|&(re, a)| a * eps.powf(d - re) * shape).sum();
                (b, false)
            }
            TailEnvelope::Heuristic { amplitude, density, re_range, height } => {
                let scale = eps.powf(d - re_range.0).max(eps.powf(d - re_range.1));
                (2.0 * density * amplitude * scale / height, true)
            }
        }
    }

    fn check_eps(&self, eps: f64) -> Result<()> {
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
        }
        if eps >= self.g_min {
            return Err(Error::EpsOutOfRange { eps, g: self.g_min });
        }
        Ok(())
    }

    /// Residue sum `sum_omega c_omega eps^{d-omega} + sum_k (c_k + e_k) eps^{d-k}`
    /// over the truncated set of scaling dimensions.
    pub fn exact_tube(&self, eps: f64) -> Result<TubeValue> {
        self.check_eps(eps)?;
        self.assemble(eps, true)
    }

    /// The same sum without the `e_k` terms; only for monophase generators,
    /// where it agrees with [`Self::exact_tube`] bit for bit.
    pub fn monophase_tube(&self, eps: f64) -> Result<TubeValue> {
        if !self.ctx.spray().is_monophase() {
            return Err(Error::NotMonophase);
        }
        self.check_eps(eps)?;
        self.assemble(eps, false)
    }

    /// Dispatches to the saturated value, the monophase path or the general
    /// formula.
    pub fn tube(&self, eps: f64) -> Result<TubeValue> {
        if eps >= self.g_max {
            return Ok(TubeValue {
                value: self.saturated_value()?,
                trunc_bound: 0.0,
                saturated: true,
                heuristic_bound: false,
            });
        }
        if self.ctx.spray().is_monophase() {
            self.monophase_tube(eps)
        } else {
            self.exact_tube(eps)
        }
    }

    fn head_coeff(&self, k: usize, eps: f64, with_head: bool) -> Result<f64> {
        if with_head {
            self.ctx.e_k(k, eps)
        } else {
            Ok(0.0)
        }
    }

    fn assemble(&self, eps: f64, with_head: bool) -> Result<TubeValue> {
        let d = self.ctx.dim();
        let mut acc = ComplexSum::new();
        for t in &self.scaling_terms {
            acc.add(t.coeff * real_pow(eps, Complex64::new(d as f64, 0.0) - t.omega));
        }
        for k in 0..=d {
            let e = self.head_coeff(k, eps, with_head)?;
            acc.add(Complex64::new((self.integer_coeffs[k] + e) * eps.powi((d - k) as i32), 0.0));
        }
        let v = acc.value();
        if v.im.abs() > REAL_SUM_TOL * v.re.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::NonRealSum { imag: v.im, real: v.re });
        }
        let (trunc_bound, heuristic_bound) = self.trunc_bound(eps);
        Ok(TubeValue { value: v.re, trunc_bound, saturated: false, heuristic_bound })
    }

    fn check_screen(&self, screen: &Screen) -> Result<()> {
        let sigma = screen.abscissa;
        if sigma >= self.system.dimension() {
            return Err(Error::ScreenPlacement { sigma });
        }
        for k in 0..=self.ctx.dim() {
            if (sigma - k as f64).abs() < SCREEN_MARGIN {
                return Err(Error::ScreenThroughPole { sigma, pole_re: k as f64 });
            }
        }
        if let Some(&re) = self.pole_real_parts.iter().find(|&&re| (sigma - re).abs() < SCREEN_MARGIN) {
            return Err(Error::ScreenThroughPole { sigma, pole_re: re });
        }
        Ok(())
    }

    /// Upper bound for `|zeta_L(sigma + it)|`, with a flag telling whether
    /// it is rigorous.
    fn zeta_bound(&self, sigma: f64, height: f64) -> Result<(f64, bool)> {
        let ratios = self.system.ratios();
        let lipschitz: f64 = ratios.iter().map(|r| r.powf(sigma) * -r.ln()).sum();
        let dist = |t: f64| (Complex64::new(1.0, 0.0) - self.system.phi(Complex64::new(sigma, t))).norm();
        match &self.lattice {
            Lattice::Lattice(s) => {
                // phi(sigma + it) is p-periodic in t
                let m = 8192usize;
                let h = s.period / m as f64;
                let min = (0..=m).map(|i| dist(i as f64 * h)).fold(f64::INFINITY, f64::min);
                let lower = min - lipschitz * h / 2.0;
                if lower <= 0.0 {
                    return Err(Error::ScreenThroughPole { sigma, pole_re: sigma });
                }
                Ok((1.0 / lower, true))
            }
            Lattice::Nonlattice => {
                let h = 0.01;
                let min = (0..=5000).map(|i| dist(height + i as f64 * h)).fold(f64::INFINITY, f64::min);
                Ok((2.0 / min, false))
            }
        }
    }

    /// `R(eps) = (1/2 pi i) \int_{sigma - iT}^{sigma + iT} zeta_T[tail](eps, s) ds`
    /// by adaptive Simpson on `[0, T]` using conjugate symmetry, plus a bound
    /// on the part beyond `T`.
    pub fn screen_error_term(&self, eps: f64, screen: &Screen, quad_tol: f64) -> Result<ErrorTerm> {
        self.check_eps(eps)?;
        self.check_screen(screen)?;
        let sigma = screen.abscissa;
        let height = screen.height;
        let ctx = &self.ctx;
        let integrand = |t: f64| -> f64 {
            match ctx.zeta_tail(eps, Complex64::new(sigma, t)) {
                Ok(z) => z.re / PI,
                Err(_) => f64::NAN,
            }
        };

        let mut gap = f64::INFINITY;
        for re in self.pole_real_parts.iter().copied().chain((0..=ctx.dim()).map(|k| k as f64)) {
            gap = gap.min((sigma - re).abs());
        }
        let oscillation = 2.0 * PI / (8.0 * ((self.g_min / eps).ln().abs() + 1.0));
        let mut width = 0.5f64.min(oscillation).min(gap.max(0.01));
        if let Lattice::Lattice(s) = &self.lattice {
            width = width.min(s.period / 16.0);
        }
        let chunks = (height / width).ceil().max(1.0) as usize;
        let step = height / chunks as f64;
        let mut value = CompensatedSum::new();
        let mut quad_error = 0.0;
        for i in 0..chunks {
            let a = i as f64 * step;
            let b = if i + 1 == chunks { height } else { a + step };
            let r = adaptive_simpson(&integrand, a, b, quad_tol * (b - a) / height)?;
            value.add(r.value);
            quad_error += r.error;
        }

        let (zmax, rigorous_tail) = self.zeta_bound(sigma, height)?;
        let d = ctx.dim();
        let mut b = 0.0;
        for rep in ctx.spray().generators() {
            for k in 0..d {
                b += rep.inradius.powf(sigma - k as f64) * (d - k) as f64 * rep.kappa_const[k].abs();
            }
        }
        let tail_bound = eps.powf(d as f64 - sigma) * zmax * b / (PI * height);
        Ok(ErrorTerm {
            value: value.value(),
            quad_error,
            tail_bound,
            quad_bound: quad_error + tail_bound,
            rigorous_tail,
        })
    }

    /// Residue terms right of the screen plus the constant term and the
    /// screen error term.
    pub fn tube_with_error(&self, eps: f64, screen: &Screen, quad_tol: f64) -> Result<ScreenedTube> {
        let sigma = screen.abscissa;
        if !self.ctx.spray().is_monophase() && sigma >= 0.0 {
            return Err(Error::ScreenPlacement { sigma });
        }
        self.check_eps(eps)?;
        self.check_screen(screen)?;
        let visible = self.visible_terms(eps, sigma)?;
        let error_term = self.screen_error_term(eps, screen, quad_tol)?;
        Ok(ScreenedTube {
            value: visible + error_term.value,
            visible,
            error_term,
            trunc_bound: self.trunc_bound(eps).0,
        })
    }

    /// Terms of the truncated residue sum that lie right of `sigma`,
    /// including all `e_k` terms and `c_d`.
    pub fn visible_terms(&self, eps: f64, sigma: f64) -> Result<f64> {
        let d = self.ctx.dim();
        let mut acc = ComplexSum::new();
        for t in self.scaling_terms.iter().filter(|t| t.omega.re > sigma) {
            acc.add(t.coeff * real_pow(eps, Complex64::new(d as f64, 0.0) - t.omega));
        }
        for k in 0..=d {
            let c = if (k as f64) > sigma { self.integer_coeffs[k] } else { 0.0 };
            let e = self.ctx.e_k(k, eps)?;
            acc.add(Complex64::new((c + e) * eps.powi((d - k) as i32), 0.0));
        }
        Ok(acc.value().re)
    }

    /// Terms of the truncated residue sum strictly left of `sigma` (the
    /// full-plane value of the screen error term, up to truncation).
    pub fn hidden_terms(&self, eps: f64, sigma: f64) -> f64 {
        let d = self.ctx.dim();
        let mut acc = ComplexSum::new();
        for t in self.scaling_terms.iter().filter(|t| t.omega.re < sigma) {
            acc.add(t.coeff * real_pow(eps, Complex64::new(d as f64, 0.0) - t.omega));
        }
        for k in 0..=d {
            if (k as f64) < sigma {
                acc.add(Complex64::new(self.integer_coeffs[k] * eps.powi((d - k) as i32), 0.0));
            }
        }
        acc.value().re
    }
}

fn check_collision(omega: Complex64, d: usize) -> Result<()> {
    for k in 0..=d {
        if (omega - Complex64::new(k as f64, 0.0)).norm() < INTEGER_GUARD {
            return Err(Error::ScalingIntegerCollision { omega, k });
        }
    }
    Ok(())
}

fn scaling_coeff(ctx: &TubularZetaContext, omega: Complex64, residue: Complex64) -> Complex64 {
    residue / (ctx.dim() as f64 - omega) * ctx.tail_moment(omega)
}

/// `A = |res| sum_G sum_{k<d} g^{Re - k} (d-k) |kappa_k(G)|`.
fn envelope_amplitude(ctx: &TubularZetaContext, residue_norm: f64, re: f64) -> f64 {
    let d = ctx.dim();
    let mut a = 0.0;
    for rep in ctx.spray().generators() {
        for k in 0..d {
            a += rep.inradius.powf(re - k as f64) * (d - k) as f64 * rep.kappa_const[k].abs();
        }
    }
    residue_norm * a
}

/// Lower edge of the pole strip, re-exported for screen placement.
pub fn pole_strip_lower(system: &SelfSimilarSystem) -> f64 {
    strip_lower_bound(system)
}
