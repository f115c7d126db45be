use crate::spray::SelfSimilarSystem;

/// Unique real root `D` of `sum_n r_n^D = 1`.
pub fn moran_dimension(system: &SelfSimilarSystem) -> f64 {
    system.dimension()
}

/// Bisection to a narrow bracket, then Newton on the strictly decreasing
/// `phi(x) = sum r_n^x`.
pub(crate) fn moran_root(ratios: &[f64]) -> f64 {
    let phi = |x: f64| ratios.iter().map(|r| r.powf(x)).sum::<f64>();
    let dphi = |x: f64| ratios.iter().map(|r| r.powf(x) * r.ln()).sum::<f64>();

    // phi(0) = N >= 2 > 1
    let mut lo = 0.0;
    let mut hi = 1.0;
    while phi(hi) > 1.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..50 {
        let f = phi(x) - 1.0;
        if f == 0.0 {
            break;
        }
        let step = f / dphi(x);
        let next = x - step;
        if !(next > lo - 1e-6 && next < hi + 1e-6) {
            break;
        }
        x = next;
        if step.abs() <= 1e-17 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn cantor_carpet_dimension_is_log3_4() {
        let d = moran_root(&[1.0 / 3.0; 4]);
        assert!((d - 1.2618595071429148).abs() < 1e-15);
        assert!((d - 4f64.ln() / 3f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn two_halves_give_one() {
        assert_eq!(moran_root(&[0.5, 0.5]), 1.0);
    }

    #[test]
    fn two_three_system_against_bisection() {
        let d = moran_root(&[0.5, 1.0 / 3.0]);
        let oracle = bisect(|x| 2f64.powf(-x) + 3f64.powf(-x) - 1.0, 0.0, 2.0);
        assert!((d - oracle).abs() < 1e-14, "{d} vs {oracle}");
        assert!((d - 0.7878849110).abs() < 1e-9);
        let phi = 0.5f64.powf(d) + (1.0f64 / 3.0).powf(d);
        assert!((phi - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn large_dimension_bracket_expands() {
        // 1000 maps of ratio 0.9 -> D = ln 1000 / ln(1/0.9) ~ 65.6
        let d = moran_root(&[0.9; 1000]);
        assert!((d - 1000f64.ln() / (1.0f64 / 0.9).ln()).abs() < 1e-10);
    }
}
