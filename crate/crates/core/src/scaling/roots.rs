use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scaling::lattice::{lattice_classify, Lattice, LatticeStructure};
use crate::spray::SelfSimilarSystem;

/// `|phi'(omega)|` at or below this marks a pole as not simple.
pub const SIMPLE_TOL: f64 = 1e-8;
/// Required root residual `|1 - phi(omega)|`.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-10;
/// Roots closer than this are the same root.
pub const ROOT_SEPARATION: f64 = 1e-8;
/// Expansion of the window used for counting, so that roots on its edge
/// (such as `D` itself) are strictly inside the contour.
pub const COUNT_BOX_MARGIN: f64 = 1e-3;
/// Tolerance for deciding that `s` is a pole in [`residue_at`].
pub const POLE_CHECK_TOL: f64 = 1e-8;

const MAX_PANELS: usize = 1 << 17;
const CHUNK_HEIGHT: f64 = 1.0;
const CHUNK_WIDTH: f64 = 2.0;

/// Rectangle `re_min <= Re s <= re_max`, `|Im s| <= im_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_max: f64) -> Result<Self> {
        if !(re_min.is_finite() && re_max.is_finite() && im_max.is_finite()) {
            return Err(Error::InvalidArgument("window bounds must be finite".into()));
        }
        if re_min > re_max || im_max < 0.0 {
            return Err(Error::InvalidArgument(format!("empty window [{re_min}, {re_max}] x [-{im_max}, {im_max}]")));
        }
        Ok(Window { re_min, re_max, im_max })
    }

    /// The pole strip of `system` up to height `im_max`.
    pub fn for_system(system: &SelfSimilarSystem, im_max: f64) -> Self {
        Window { re_min: strip_lower_bound(system), re_max: system.dimension(), im_max }
    }

    /// Membership with a small slack on the real bounds.
    pub fn contains(&self, s: Complex64) -> bool {
        let slack = 1e-9 * (1.0 + s.re.abs());
        s.re >= self.re_min - slack && s.re <= self.re_max + slack && s.im.abs() <= self.im_max * (1.0 + 1e-12)
    }
}

/// One scaling complex dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingDim {
    pub omega: Complex64,
    /// Residue of `zeta_L`; `None` when the pole is not simple.
    pub residue: Option<Complex64>,
    pub simple: bool,
    pub multiplicity: usize,
    /// Lattice line and lift index `n` in `omega = base + i n p`.
    pub line: Option<usize>,
    pub lift: Option<i64>,
    pub residual: f64,
}

/// Line `base + i n p` of lattice poles.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeLine {
    pub index: usize,
    pub base: Complex64,
    pub residue: Option<Complex64>,
    pub simple: bool,
    pub multiplicity: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexDimensionSet {
    pub scaling: Vec<ScalingDim>,
    pub integer_dims: Vec<usize>,
    pub window: Window,
    pub lattice: Lattice,
    pub lines: Vec<LatticeLine>,
    /// Argument-principle count over the expanded window (nonlattice).
    pub contour_count: Option<usize>,
    /// Roots located by Newton over the expanded window (nonlattice).
    pub newton_count: Option<usize>,
}

impl ComplexDimensionSet {
    pub fn all_simple(&self) -> bool {
        self.scaling.iter().all(|d| d.simple)
    }

    pub fn real_scaling_dims(&self) -> impl Iterator<Item = &ScalingDim> {
        self.scaling.iter().filter(|d| d.omega.im == 0.0)
    }
}

/// `m r_N^s = 1 + sum of the others` at the lower edge of the pole strip,
/// where `m` counts the smallest ratio.
pub fn strip_lower_bound(system: &SelfSimilarSystem) -> f64 {
    let ratios = system.ratios();
    let rmin = *ratios.last().unwrap();
    let m = ratios.iter().filter(|&&r| r == rmin).count() as f64;
    let others: Vec<f64> = ratios.iter().copied().filter(|&r| r != rmin).collect();
    let d = system.dimension();
    if others.is_empty() {
        return d;
    }
    let h = |x: f64| m * rmin.powf(x) - 1.0 - others.iter().map(|r| r.powf(x)).sum::<f64>();
    let mut hi = d;
    let mut lo = d - 1.0;
    let mut step = 1.0;
    while h(lo) <= 0.0 {
        hi = lo;
        step *= 2.0;
        lo -= step;
        if lo < -1e6 {
            return lo;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + lo.abs()) {
            break;
        }
    }
    lo
}

/// Residue of `zeta_L = 1/(1 - phi)` at a simple pole: `-1/phi'(omega)`.
pub fn residue_at(system: &SelfSimilarSystem, omega: Complex64) -> Result<Complex64> {
    let phi = system.phi(omega);
    let residual = (Complex64::new(1.0, 0.0) - phi).norm();
    if residual > POLE_CHECK_TOL * phi.norm().max(1.0) {
        return Err(Error::NotAPole { s: omega, residual });
    }
    let dphi = system.phi_prime(omega);
    if dphi.norm() <= SIMPLE_TOL {
        return Err(Error::NotSimple { omega, derivative: dphi.norm() });
    }
    Ok(-dphi.inv())
}

/// Residue at a lattice pole: `1 / (log(1/r) sum_n k_n r^{k_n omega})`.
pub fn residue_lattice(structure: &LatticeStructure, omega: Complex64) -> Complex64 {
    let log_inv = -structure.base.ln();
    let z = crate::numeric::real_pow(structure.base, omega);
    let sum: Complex64 = structure.exponents.iter().map(|&k| z.powu(k) * k as f64).sum();
    (sum * log_inv).inv()
}

/// Complex dimensions of `system` inside `window`.
pub fn complex_dimensions(system: &SelfSimilarSystem, window: &Window) -> Result<ComplexDimensionSet> {
    let lattice = lattice_classify(system);
    let integer_dims: Vec<usize> = (0..=system.ambient_dim()).collect();
    match &lattice {
        Lattice::Lattice(structure) => {
            let lines = lattice_lines(system, structure)?;
            let mut scaling = Vec::new();
            for line in &lines {
                if !window.contains(Complex64::new(line.base.re, 0.0)) {
                    continue;
                }
                for n in lifts_within(line.base.im, structure.period, window.im_max) {
                    scaling.push(lift(line, structure.period, n));
                }
            }
            Ok(ComplexDimensionSet {
                scaling,
                integer_dims,
                window: *window,
                lattice,
                lines,
                contour_count: None,
                newton_count: None,
            })
        }
        Lattice::Nonlattice => {
            let search = nonlattice_roots(system, window)?;
            let scaling = search
                .roots
                .into_iter()
                .filter(|(w, _)| window.contains(*w))
                .map(|(omega, mult)| scaling_dim(system, omega, mult))
                .collect();
            Ok(ComplexDimensionSet {
                scaling,
                integer_dims,
                window: *window,
                lattice,
                lines: Vec::new(),
                contour_count: Some(search.contour_count),
                newton_count: Some(search.newton_count),
            })
        }
    }
}

fn scaling_dim(system: &SelfSimilarSystem, omega: Complex64, multiplicity: usize) -> ScalingDim {
    let residual = (Complex64::new(1.0, 0.0) - system.phi(omega)).norm();
    let dphi = system.phi_prime(omega);
    let simple = multiplicity == 1 && dphi.norm() > SIMPLE_TOL;
    ScalingDim { omega, residue: simple.then(|| -dphi.inv()), simple, multiplicity, line: None, lift: None, residual }
}

/// Lift indices `n` with `|base_im + n p| <= height`.
pub fn lifts_within(base_im: f64, period: f64, height: f64) -> std::ops::RangeInclusive<i64> {
    let h = height * (1.0 + 1e-12);
    let lo = ((-h - base_im) / period).ceil() as i64;
    let hi = ((h - base_im) / period).floor() as i64;
    lo..=hi
}

/// The pole `base + i n p` of `line`.
pub fn lift(line: &LatticeLine, period: f64, n: i64) -> ScalingDim {
    ScalingDim {
        omega: Complex64::new(line.base.re, line.base.im + n as f64 * period),
        residue: line.residue,
        simple: line.simple,
        multiplicity: line.multiplicity,
        line: Some(line.index),
        lift: Some(n),
        residual: line.residual,
    }
}

/// Roots of `1 - sum_n z^{k_n}` mapped to the fundamental lines
/// `Im omega in [-p/2, p/2)`, ordered by decreasing real part.
pub fn lattice_lines(system: &SelfSimilarSystem, structure: &LatticeStructure) -> Result<Vec<LatticeLine>> {
    let degree = structure.degree() as usize;
    let mut coeffs = vec![0.0f64; degree + 1]; // coeffs[j] multiplies z^j in sum - 1
    coeffs[0] = -1.0;
    for &k in &structure.exponents {
        coeffs[k as usize] += 1.0;
    }
    let roots = polynomial_roots(&coeffs)?;
    let log_r = structure.base.ln();
    let period = structure.period;

    let mut lines: Vec<LatticeLine> = Vec::with_capacity(roots.len());
    for (z, mult) in roots {
        let mut re = z.norm().ln() / log_r;
        let mut im = if z.im == 0.0 && z.re > 0.0 { 0.0 } else { z.arg() / log_r };
        // fold into [-p/2, p/2)
        if im >= period / 2.0 {
            im -= period;
        }
        if z.im == 0.0 && z.re > 0.0 {
            // the real pole; use the Moran root directly when it is this one
            if (re - system.dimension()).abs() <= 1e-9 {
                re = system.dimension();
            }
            im = 0.0;
        }
        let omega = Complex64::new(re, im);
        // residue and simplicity from z to avoid cancellation in r^omega
        let sum: Complex64 = structure.exponents.iter().map(|&k| z.powu(k) * k as f64).sum();
        let dphi = sum * log_r;
        let simple = mult == 1 && dphi.norm() > SIMPLE_TOL;
        let residual = (Complex64::new(1.0, 0.0) - system.phi(omega)).norm();
        lines.push(LatticeLine {
            index: 0,
            base: omega,
            residue: simple.then(|| (sum * -log_r).inv()),
            simple,
            multiplicity: mult,
            residual,
        });
    }
    lines.sort_by(|a, b| b.base.re.total_cmp(&a.base.re).then(a.base.im.total_cmp(&b.base.im)));
    for (i, l) in lines.iter_mut().enumerate() {
        l.index = i;
    }
    Ok(lines)
}

/// Distinct roots (with multiplicities) of `sum_j coeffs[j] z^j`, conjugation
/// closed. `coeffs[0]` must be nonzero.
fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<(Complex64, usize)>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    if n == 0 || lead == 0.0 {
        return Err(Error::InvalidSystem("degenerate lattice polynomial".into()));
    }
    let raw: Vec<Complex64> = if n == 1 {
        vec![Complex64::new(-coeffs[0] / lead, 0.0)]
    } else {
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            m[(i, n - 1)] = -coeffs[i] / lead;
        }
        m.complex_eigenvalues().iter().copied().collect()
    };
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    let mut polished: Vec<Complex64> = Vec::with_capacity(n);
    for z0 in raw {
        let mut z = z0;
        for _ in 0..60 {
            let (p, dp) = eval(z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            z -= step;
            if step.norm() <= 1e-16 * z.norm() {
                break;
            }
        }
        // keep the unpolished value if Newton wandered (multiple roots)
        if eval(z).0.norm() > eval(z0).0.norm() {
            z = z0;
        }
        if z.im.abs() <= 1e-13 * z.norm() {
            z.im = 0.0;
        }
        polished.push(z);
    }
    // cluster into distinct roots
    let mut distinct: Vec<(Complex64, usize)> = Vec::new();
    for z in polished {
        match distinct.iter_mut().find(|(w, _)| (*w - z).norm() <= 1e-7 * w.norm().max(1e-300)) {
            Some(entry) => entry.1 += 1,
            None => distinct.push((z, 1)),
        }
    }
    // enforce exact conjugate pairs
    let upper: Vec<(Complex64, usize)> = distinct.iter().copied().filter(|(z, _)| z.im > 0.0).collect();
    let real: Vec<(Complex64, usize)> = distinct.iter().copied().filter(|(z, _)| z.im == 0.0).collect();
    let lower_count = distinct.iter().filter(|(z, _)| z.im < 0.0).count();
    if lower_count != upper.len() {
        return Ok(distinct);
    }
    let mut out = real;
    for (z, m) in upper {
        out.push((z, m));
        out.push((z.conj(), m));
    }
    Ok(out)
}

struct RootSearch {
    roots: Vec<(Complex64, usize)>,
    contour_count: usize,
    newton_count: usize,
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Rect {
    fn contains(&self, s: Complex64) -> bool {
        s.re >= self.x0 && s.re <= self.x1 && s.im >= self.y0 && s.im <= self.y1
    }
}

struct Locator<'a> {
    system: &'a SelfSimilarSystem,
}

impl Locator<'_> {
    fn f(&self, s: Complex64) -> Complex64 {
        Complex64::new(1.0, 0.0) - self.system.phi(s)
    }

    fn log_deriv(&self, s: Complex64) -> Complex64 {
        -self.system.phi_prime(s) / self.f(s)
    }

    /// Newton-step length `|f/f'|`, a proxy for the distance to the
    /// nearest root.
    fn clearance_at(&self, s: Complex64) -> f64 {
        let d = self.system.phi_prime(s);
        if d.norm() == 0.0 {
            return f64::INFINITY;
        }
        (self.f(s) / d).norm()
    }

    fn segment_clearance(&self, a: Complex64, b: Complex64, spacing: f64) -> f64 {
        let n = (((b - a).norm() / spacing).ceil() as usize).clamp(8, 20_000);
        (0..=n).map(|i| self.clearance_at(a + (b - a) * (i as f64 / n as f64))).fold(f64::INFINITY, f64::min)
    }

    /// `(1/2 pi i) \oint f'/f` around `rect` by the trapezoid rule with
    /// panel doubling until the value settles near an integer.
    fn winding(&self, rect: &Rect) -> Result<usize> {
        let corners = [
            Complex64::new(rect.x0, rect.y0),
            Complex64::new(rect.x1, rect.y0),
            Complex64::new(rect.x1, rect.y1),
            Complex64::new(rect.x0, rect.y1),
        ];
        let edges: Vec<(Complex64, Complex64)> = (0..4).map(|i| (corners[i], corners[(i + 1) % 4])).collect();
        // trapezoid sums per edge, refined by adding midpoints
        let mut n = 16usize;
        let mut sums: Vec<Complex64> = edges
            .iter()
            .map(|&(a, b)| {
                let h = (b - a) / n as f64;
                let mut acc = (self.log_deriv(a) + self.log_deriv(b)) * 0.5;
                for i in 1..n {
                    acc += self.log_deriv(a + h * i as f64);
                }
                acc * h
            })
            .collect();
        let total = |sums: &[Complex64]| -> f64 {
            let t: Complex64 = sums.iter().sum();
            (t / Complex64::new(0.0, 2.0 * std::f64::consts::PI)).re
        };
        let mut prev = total(&sums);
        while n < MAX_PANELS {
            for (k, &(a, b)) in edges.iter().enumerate() {
                let h = (b - a) / (2 * n) as f64;
                let mut mid = Complex64::new(0.0, 0.0);
                for i in 0..n {
                    mid += self.log_deriv(a + h * (2 * i + 1) as f64);
                }
                sums[k] = sums[k] * 0.5 + mid * h;
            }
            n *= 2;
            let cur = total(&sums);
            let nearest = cur.round();
            if (cur - prev).abs() < 0.05 && (cur - nearest).abs() < 0.25 && n >= 64 {
                if nearest < 0.0 {
                    return Err(Error::NonConvergent(format!("negative winding number {cur}")));
                }
                return Ok(nearest as usize);
            }
            prev = cur;
        }
        Err(Error::NonConvergent(format!(
            "winding number did not settle on [{}, {}] x [{}, {}]",
            rect.x0, rect.x1, rect.y0, rect.y1
        )))
    }

    fn newton(&self, start: Complex64) -> Option<Complex64> {
        let mut s = start;
        for _ in 0..100 {
            let d = self.system.phi_prime(s);
            if d.norm() == 0.0 || !d.is_finite() {
                return None;
            }
            let step = self.f(s) / d;
            s += step;
            if !s.is_finite() {
                return None;
            }
            if step.norm() <= 1e-15 * s.norm().max(1.0) {
                break;
            }
        }
        (self.f(s).norm() <= ROOT_RESIDUAL_TOL).then_some(s)
    }

    /// A split coordinate in `(lo, hi)` whose line keeps clear of roots.
    fn split(&self, lo: f64, hi: f64, other: (f64, f64), vertical: bool) -> f64 {
        let span = hi - lo;
        let spacing = span * 0.02;
        let line = |t: f64| {
            if vertical {
                (Complex64::new(t, other.0), Complex64::new(t, other.1))
            } else {
                (Complex64::new(other.0, t), Complex64::new(other.1, t))
            }
        };
        let mut best = (0.5 * (lo + hi), -1.0);
        for frac in [0.5, 0.45, 0.55, 0.4, 0.6, 0.35, 0.65, 0.3, 0.7] {
            let t = lo + frac * span;
            let (a, b) = line(t);
            let c = self.segment_clearance(a, b, spacing);
            if c >= spacing {
                return t;
            }
            if c > best.1 {
                best = (t, c);
            }
        }
        best.0
    }

    fn search(&self, rect: Rect, count: usize, depth: usize, out: &mut Vec<(Complex64, usize)>) -> Result<()> {
        if count == 0 {
            return Ok(());
        }
        let w = rect.x1 - rect.x0;
        let h = rect.y1 - rect.y0;
        let center = Complex64::new(0.5 * (rect.x0 + rect.x1), 0.5 * (rect.y0 + rect.y1));
        if count == 1 {
            if let Some(root) = self.newton(center) {
                if rect.contains(root) {
                    out.push((root, 1));
                    return Ok(());
                }
            }
        }
        if w.max(h) < 1e-7 {
            // a cluster that no longer separates: report as one multiple root
            let root = self.newton(center).unwrap_or(center);
            out.push((root, count));
            return Ok(());
        }
        if depth > 80 {
            return Err(Error::BoxCountMismatch { expected: count as i64, found: 0 });
        }
        let (a, b) = if w >= h {
            let t = self.split(rect.x0, rect.x1, (rect.y0, rect.y1), true);
            (Rect { x1: t, ..rect }, Rect { x0: t, ..rect })
        } else {
            let t = self.split(rect.y0, rect.y1, (rect.x0, rect.x1), false);
            (Rect { y1: t, ..rect }, Rect { y0: t, ..rect })
        };
        let ca = self.winding(&a)?;
        let cb = self.winding(&b)?;
        if ca + cb != count {
            return Err(Error::BoxCountMismatch { expected: count as i64, found: (ca + cb) as i64 });
        }
        self.search(a, ca, depth + 1, out)?;
        self.search(b, cb, depth + 1, out)
    }

    /// Grid lines between `lo` and `hi` into at most `max_step` wide chunks,
    /// nudged away from roots.
    fn chunk_lines(&self, lo: f64, hi: f64, max_step: f64, other: (f64, f64), vertical: bool, odd: bool) -> Vec<f64> {
        let mut n = ((hi - lo) / max_step).ceil().max(1.0) as usize;
        if odd && n.is_multiple_of(2) {
            n += 1;
        }
        let step = (hi - lo) / n as f64;
        let mut lines = vec![lo];
        for i in 1..n {
            let nominal = lo + step * i as f64;
            lines.push(self.split(nominal - 0.25 * step, nominal + 0.25 * step, other, vertical));
        }
        lines.push(hi);
        lines
    }
}

fn nonlattice_roots(system: &SelfSimilarSystem, window: &Window) -> Result<RootSearch> {
    let loc = Locator { system };
    // outer contour: expand by the margin, pushing further out if an edge
    // passes too close to a root
    let mut margin = COUNT_BOX_MARGIN;
    let mut outer = Rect {
        x0: window.re_min - margin,
        x1: window.re_max + margin,
        y0: -window.im_max - margin,
        y1: window.im_max + margin,
    };
    for _ in 0..16 {
        outer = Rect {
            x0: window.re_min - margin,
            x1: window.re_max + margin,
            y0: -window.im_max - margin,
            y1: window.im_max + margin,
        };
        let spacing = COUNT_BOX_MARGIN * 0.25;
        let c = [
            Complex64::new(outer.x0, outer.y0),
            Complex64::new(outer.x1, outer.y0),
            Complex64::new(outer.x1, outer.y1),
            Complex64::new(outer.x0, outer.y1),
        ];
        let clear = (0..4).map(|i| loc.segment_clearance(c[i], c[(i + 1) % 4], spacing)).fold(f64::INFINITY, f64::min);
        if clear >= spacing {
            break;
        }
        margin *= 1.37;
    }

    let xs = loc.chunk_lines(outer.x0, outer.x1, CHUNK_WIDTH, (outer.y0, outer.y1), true, false);
    let ys = loc.chunk_lines(outer.y0, outer.y1, CHUNK_HEIGHT, (outer.x0, outer.x1), false, true);
    let mut roots = Vec::new();
    let mut contour_count = 0usize;
    for xw in xs.windows(2) {
        for yw in ys.windows(2) {
            let rect = Rect { x0: xw[0], x1: xw[1], y0: yw[0], y1: yw[1] };
            let count = loc.winding(&rect)?;
            contour_count += count;
            loc.search(rect, count, 0, &mut roots)?;
        }
    }
    // merge duplicates
    let mut merged: Vec<(Complex64, usize)> = Vec::with_capacity(roots.len());
    for (z, m) in roots {
        match merged.iter_mut().find(|(w, _)| (*w - z).norm() <= ROOT_SEPARATION) {
            Some(e) => e.1 += m,
            None => merged.push((z, m)),
        }
    }
    let newton_count: usize = merged.iter().map(|e| e.1).sum();
    if newton_count != contour_count {
        return Err(Error::BoxCountMismatch { expected: contour_count as i64, found: newton_count as i64 });
    }
    let mut roots = symmetrize(system, merged);
    roots.sort_by(|a, b| a.0.im.total_cmp(&b.0.im).then(b.0.re.total_cmp(&a.0.re)));
    Ok(RootSearch { roots, contour_count, newton_count })
}

/// Snaps real roots onto the axis and replaces lower-half roots by exact
/// conjugates of their upper-half partners.
fn symmetrize(system: &SelfSimilarSystem, roots: Vec<(Complex64, usize)>) -> Vec<(Complex64, usize)> {
    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (z, m) in roots {
        if z.im.abs() <= 1e-9 {
            let x = if (z.re - system.dimension()).abs() <= 1e-8 { system.dimension() } else { z.re };
            real.push((Complex64::new(x, 0.0), m));
        } else if z.im > 0.0 {
            upper.push((z, m));
        } else {
            lower.push((z, m));
        }
    }
    let paired = lower.len() == upper.len()
        && upper.iter().all(|(z, _)| lower.iter().any(|(w, _)| (z.conj() - *w).norm() <= 1e-7));
    if !paired {
        real.extend(upper);
        real.extend(lower);
        return real;
    }
    for (z, m) in upper {
        real.push((z, m));
        real.push((z.conj(), m));
    }
    real
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cantor_carpet_lines() {
        let sys = SelfSimilarSystem::new(vec![1.0 / 3.0; 4], 2).unwrap();
        let p = 2.0 * PI / 3f64.ln();
        let w = Window::new(-10.0, 10.0, 2.0 * p).unwrap();
        let dims = complex_dimensions(&sys, &w).unwrap();
        assert_eq!(dims.scaling.len(), 5);
        for d in &dims.scaling {
            assert_eq!(d.omega.re, sys.dimension());
            let n = d.lift.unwrap() as f64;
            assert!((d.omega.im - n * p).abs() < 1e-12);
            assert!((d.residue.unwrap() - Complex64::new(1.0 / 3f64.ln(), 0.0)).norm() < 1e-12);
        }
        assert_eq!(dims.integer_dims, vec![0, 1, 2]);
    }

    #[test]
    fn halves_have_unit_line() {
        let sys = SelfSimilarSystem::new(vec![0.5, 0.5], 2).unwrap();
        let p = 2.0 * PI / 2f64.ln();
        let dims = complex_dimensions(&sys, &Window::new(-5.0, 5.0, 3.0 * p).unwrap()).unwrap();
        assert_eq!(dims.scaling.len(), 7);
        for d in &dims.scaling {
            assert!((d.omega.re - 1.0).abs() < 1e-15);
            assert!(d.residual < 1e-12);
        }
    }

    #[test]
    fn multi_line_lattice_roots_are_roots() {
        let sys = SelfSimilarSystem::new(vec![0.5, 0.25, 0.125], 2).unwrap();
        let s = lattice_classify(&sys);
        let lines = lattice_lines(&sys, s.structure().unwrap()).unwrap();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0].base.im, 0.0);
        assert!((lines[0].base.re - sys.dimension()).abs() < 1e-12);
        for l in &lines {
            assert!(l.residual < 1e-12, "{l:?}");
            let general = residue_at(&sys, l.base).unwrap();
            let lat = residue_lattice(s.structure().unwrap(), l.base);
            assert!((general - lat).norm() < 1e-12 * lat.norm());
            assert!((general - l.residue.unwrap()).norm() < 1e-12 * lat.norm());
        }
    }

    #[test]
    fn residue_guards() {
        let sys = SelfSimilarSystem::new(vec![1.0 / 3.0; 4], 2).unwrap();
        assert!(matches!(residue_at(&sys, Complex64::new(0.5, 0.0)), Err(Error::NotAPole { .. })));
        let w = Complex64::new(sys.dimension(), 2.0 * PI / 3f64.ln());
        assert!((residue_at(&sys, w.conj()).unwrap() - residue_at(&sys, w).unwrap().conj()).norm() < 1e-15);
    }

    #[test]
    fn nonlattice_small_window() {
        let sys = SelfSimilarSystem::new(vec![0.5, 1.0 / 3.0], 1).unwrap();
        let w = Window::new(0.0, sys.dimension(), 10.0).unwrap();
        let dims = complex_dimensions(&sys, &w).unwrap();
        assert_eq!(dims.contour_count, dims.newton_count);
        let real: Vec<_> = dims.real_scaling_dims().collect();
        assert_eq!(real.len(), 1);
        assert_eq!(real[0].omega.re, sys.dimension());
        for d in &dims.scaling {
            assert!(d.residual <= ROOT_RESIDUAL_TOL);
            assert!(dims.scaling.iter().any(|e| e.omega == d.omega.conj()));
        }
    }

    #[test]
    fn strip_bound_is_below_every_root() {
        let sys = SelfSimilarSystem::new(vec![0.5, 1.0 / 3.0], 1).unwrap();
        let lo = strip_lower_bound(&sys);
        assert!(lo < sys.dimension());
        let dims = complex_dimensions(&sys, &Window::new(lo - 1.0, sys.dimension(), 20.0).unwrap()).unwrap();
        for d in &dims.scaling {
            assert!(d.omega.re >= lo - 1e-9);
        }
        let carpet = SelfSimilarSystem::new(vec![1.0 / 3.0; 4], 2).unwrap();
        assert_eq!(strip_lower_bound(&carpet), carpet.dimension());
    }
}
