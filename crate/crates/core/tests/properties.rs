mod common;

use approx::assert_relative_eq;
use proptest::prelude::*;
use spraytube::scaling::residue_lattice;
use spraytube::spray::validate_rep;
use spraytube::tubular::{
    generator_residue_head, generator_residue_tail, zeta_g_direct, zeta_g_head, zeta_g_tail, Pole,
};
use spraytube::{
    builtin, contour_residue, cutoff_index, lattice_classify, moran_dimension, residue_at, zeta_eval, BuiltinName,
    Complex64, SelfSimilarSystem, TruncationSpec, TubeFormula,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn any_builtin() -> impl Strategy<Value = BuiltinName> {
    prop::sample::select(BuiltinName::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaled_copy_is_homogeneous(name in any_builtin(), x in 1e-4f64..1.0, scale in 0.01f64..1.0) {
        let rep = builtin(name, 1.0).unwrap();
        let eps = x * rep.inradius;
        let lhs = rep.tube_scaled(scale, scale * eps).unwrap();
        let rhs = scale.powi(rep.ambient_dim as i32) * rep.tube(eps).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-300), "{lhs} vs {rhs}");
    }

    #[test]
    fn scaled_copy_branches_meet(name in any_builtin(), scale in 0.01f64..1.0) {
        let rep = builtin(name, 1.0).unwrap();
        let at = scale * rep.inradius;
        let full = scale.powi(rep.ambient_dim as i32) * rep.volume;
        let left = rep.tube_scaled(scale, at).unwrap();
        prop_assert!((left - full).abs() <= 1e-12 * full);
        prop_assert_eq!(rep.tube_scaled(scale, at * 1.5).unwrap(), full);
    }

    #[test]
    fn cutoff_index_matches_linear_scan(a in 1e-4f64..1.2, b in 1e-4f64..1.2) {
        let spray = common::cantor_carpet();
        let g = spray.generator().inradius;
        let (lo, hi) = (a.min(b) * g, a.max(b) * g);
        let j_lo = cutoff_index(spray.string(), g, lo).unwrap();
        let j_hi = cutoff_index(spray.string(), g, hi).unwrap();
        prop_assert!(j_lo >= j_hi);
        let scan: u128 = spray
            .string()
            .scales()
            .entries()
            .iter()
            .filter(|(l, _)| *l > lo / g)
            .map(|(_, n)| *n)
            .sum();
        prop_assert_eq!(j_lo, scan);
    }

    // The tubular zeta function against its defining series, right of D.
    #[test]
    fn head_plus_tail_matches_series(x in 0.01f64..1.5, re in 2.3f64..4.0, im in -20.0f64..20.0) {
        let spray = common::cantor_carpet();
        let ctx = common::ctx(&spray);
        let eps = x * spray.generator().inradius;
        let s = c(re, im);
        let split = ctx.zeta_head(eps, s).unwrap() + ctx.zeta_tail(eps, s).unwrap();
        let series = ctx.zeta_t_series(eps, s, 1e-14).unwrap();
        let tol = 1e-12 * split.norm() + series.remainder_bound;
        prop_assert!((split - series.value).norm() <= tol, "{split} vs {}", series.value);
    }

    #[test]
    fn tail_factorizes(x in 0.01f64..1.5, re in -3.0f64..4.0, im in -30.0f64..30.0) {
        prop_assume!(im.abs() > 1e-3);
        let spray = common::gasket();
        let ctx = common::ctx(&spray);
        let rep = spray.generator();
        let eps = x * rep.inradius;
        let s = c(re, im);
        let lhs = ctx.zeta_tail(eps, s).unwrap();
        let rhs = zeta_g_tail(rep, eps, s).unwrap() * zeta_eval(spray.system().unwrap(), s).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
    }

    // A one-tile spray: head + tail reproduces the definition of the generator zeta.
    #[test]
    fn generator_zeta_matches_its_definition(name in any_builtin(), x in 0.01f64..1.3, re in -2.0f64..3.0, im in 0.01f64..15.0) {
        let rep = builtin(name, 1.0).unwrap();
        let eps = x * rep.inradius;
        let s = c(re, im);
        let split = zeta_g_head(&rep, eps, s).unwrap() + zeta_g_tail(&rep, eps, s).unwrap();
        let direct = zeta_g_direct(&rep, eps, s).unwrap();
        prop_assert!((split - direct).norm() <= 1e-10 * direct.norm().max(1e-300), "{split} vs {direct}");
    }

    #[test]
    fn generator_residues_rebuild_the_volume(name in any_builtin(), x in 1e-3f64..1.0) {
        let rep = builtin(name, 1.0).unwrap();
        let eps = x * rep.inradius;
        let mut total = rep.volume;
        for k in 0..=rep.ambient_dim {
            total += generator_residue_head(&rep, eps, k).unwrap() + generator_residue_tail(&rep, eps, k);
        }
        let v = rep.tube(eps).unwrap();
        prop_assert!((total - v).abs() <= 1e-10 * v.max(1.0));
    }
}

#[test]
fn builtins_satisfy_volume_identity_and_continuity() {
    for name in BuiltinName::ALL {
        let rep = builtin(name, 1.0).unwrap();
        assert_relative_eq!(rep.volume_from_constants(), rep.volume, max_relative = 1e-12);
        let g = rep.inradius;
        let left = rep.tube(g * (1.0 - 1e-13)).unwrap();
        assert!((left - rep.volume).abs() <= 1e-9, "{name}: {left} vs {}", rep.volume);
        let report = validate_rep(&rep, 400).unwrap();
        assert!(report.passed(), "{report}");
    }
}

#[test]
fn generator_residues_match_contours() {
    for name in BuiltinName::ALL {
        let rep = builtin(name, 1.0).unwrap();
        for x in [0.05, 0.4, 0.9] {
            let eps = x * rep.inradius;
            for k in 0..=rep.ambient_dim {
                let pole = c(k as f64, 0.0);
                let head = contour_residue(|s| zeta_g_head(&rep, eps, s).unwrap(), pole, 0.25, 64, None).unwrap();
                let tail = contour_residue(|s| zeta_g_tail(&rep, eps, s).unwrap(), pole, 0.25, 64, None).unwrap();
                let head_exact = generator_residue_head(&rep, eps, k).unwrap();
                let tail_exact = generator_residue_tail(&rep, eps, k);
                assert!((head - head_exact).norm() <= 1e-8 * head_exact.abs().max(1.0), "{name} k={k}");
                assert!((tail - tail_exact).norm() <= 1e-8 * tail_exact.abs().max(1.0), "{name} k={k}");
            }
        }
    }
}

#[test]
fn tubular_residues_match_contours_on_random_poles() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for (label, spray) in common::lattice_tilings() {
        let sys = spray.system().unwrap().clone();
        let structure = lattice_classify(&sys).structure().unwrap().clone();
        let ctx = common::ctx(&spray);
        let g = spray.generator().inradius;
        let d_dim = sys.dimension();
        for _ in 0..6 {
            let n: i64 = rng.gen_range(-3..=3);
            let omega = c(d_dim, n as f64 * structure.period);
            let eps = rng.gen_range(0.02..0.98) * g;
            let residue = residue_at(&sys, omega).unwrap();
            let exact = ctx.residue_tail_at(eps, Pole::Scaling { omega, residue }).unwrap();
            let radius = 0.2f64.min(0.4 * (d_dim - d_dim.round()).abs().max(0.05));
            let numeric = contour_residue(|s| ctx.zeta_t(eps, s).unwrap(), omega, radius, 64, None).unwrap();
            assert!((numeric - exact).norm() <= 1e-8 * exact.norm(), "{label} n={n}: {numeric} vs {exact}");
            let conj =
                ctx.residue_tail_at(eps, Pole::Scaling { omega: omega.conj(), residue: residue.conj() }).unwrap();
            assert!((conj - exact.conj()).norm() <= 1e-14 * exact.norm());
        }
    }
}

#[test]
fn residue_paths_agree_on_lattice_lines() {
    for (label, spray) in common::lattice_tilings() {
        let sys = spray.system().unwrap();
        let structure = lattice_classify(sys).structure().unwrap().clone();
        for n in -10..=10 {
            let omega = c(sys.dimension(), n as f64 * structure.period);
            let general = residue_at(sys, omega).unwrap();
            let lattice = residue_lattice(&structure, omega);
            assert!((general - lattice).norm() <= 1e-12 * lattice.norm(), "{label} n={n}");
        }
    }
}

#[test]
fn moran_root_is_the_only_real_pole() {
    for ratios in [vec![1.0 / 3.0; 4], vec![0.5, 1.0 / 3.0], vec![0.6, 0.3, 0.05], vec![0.5; 3]] {
        let sys = SelfSimilarSystem::new(ratios, 2).unwrap();
        let d = moran_dimension(&sys);
        assert!((sys.phi_real(d) - 1.0).abs() <= 1e-14);
        let xs: Vec<f64> = (1..=3000).map(|i| i as f64 * 3.0 / 3000.0).collect();
        let changes = xs
            .windows(2)
            .filter(|w| (sys.phi_real(w[0]) - 1.0).signum() != (sys.phi_real(w[1]) - 1.0).signum())
            .count();
        assert_eq!(changes, 1);
    }
}

#[test]
fn scaling_coefficients_decay_like_inverse_square() {
    let spray = common::cantor_carpet();
    let f = TubeFormula::new(common::ctx(&spray), TruncationSpec::lattice(100)).unwrap();
    let mut pts = Vec::new();
    let mut envelope: f64 = 0.0;
    for t in f.scaling_terms().iter().filter(|t| t.lift.unwrap() >= 1) {
        let n = t.lift.unwrap() as f64;
        pts.push((n.ln(), t.coeff.norm().ln()));
        envelope = envelope.max(t.coeff.norm() * n * n);
    }
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / m, sy / m);
    let slope =
        pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope + 2.0).abs() <= 0.1, "slope {slope}");
    // |c| n^2 stays bounded: the last lifts sit at the envelope, not above it
    let tail_max = f
        .scaling_terms()
        .iter()
        .filter(|t| t.lift.unwrap() >= 50)
        .map(|t| {
            let n = t.lift.unwrap() as f64;
            t.coeff.norm() * n * n
        })
        .fold(0.0, f64::max);
    assert!(tail_max <= envelope);
}

#[test]
fn conjugate_coefficients_are_conjugate() {
    let spray = common::gasket();
    let f = TubeFormula::new(common::ctx(&spray), TruncationSpec::lattice(20)).unwrap();
    for t in f.scaling_terms() {
        let mirror = f.coeff_c_omega(t.omega.conj()).unwrap();
        assert!((mirror - t.coeff.conj()).norm() <= 1e-12 * t.coeff.norm());
    }
}
