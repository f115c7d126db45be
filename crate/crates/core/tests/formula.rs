mod common;

use spraytube::formula::Screen;
use spraytube::numeric::log_space;
use spraytube::oracle::{direct_tube, direct_tube_split};
use spraytube::{Complex64, Error, TruncationSpec, TubeFormula};

fn formula(spray: &spraytube::FractalSpray, n: usize) -> TubeFormula {
    TubeFormula::new(common::ctx(spray), TruncationSpec::lattice(n)).unwrap()
}

#[test]
fn exact_tube_within_truncation_bound_on_lattice_tilings() {
    for (label, spray) in common::lattice_tilings() {
        let f = formula(&spray, 10_000);
        let g = spray.generator().inradius;
        for eps in log_space(g * 1e-4, g * 0.999, 40) {
            let v = f.exact_tube(eps).unwrap();
            let o = direct_tube(&spray, eps).unwrap();
            assert!(
                (v.value - o).abs() <= v.trunc_bound + 1e-12 * o,
                "{label} eps={eps}: {} vs {o}, bound {}",
                v.value,
                v.trunc_bound
            );
            assert!(!v.heuristic_bound);
        }
    }
}

#[test]
fn sierpinski_carpet_at_a_third_of_the_inradius() {
    let spray = common::sierpinski_carpet();
    let f = formula(&spray, 10_000);
    let eps = spray.generator().inradius / 3.0;
    let v = f.exact_tube(eps).unwrap();
    let o = direct_tube(&spray, eps).unwrap();
    assert!((v.value - o).abs() <= v.trunc_bound + 1e-12);
}

#[test]
fn monophase_path_is_bit_identical() {
    for spray in [common::gasket(), common::sierpinski_carpet(), common::cantor_string()] {
        let f = formula(&spray, 2000);
        let g = spray.generator().inradius;
        for eps in log_space(g * 1e-3, g * 0.99, 25) {
            let a = f.exact_tube(eps).unwrap();
            let b = f.monophase_tube(eps).unwrap();
            assert_eq!(a.value.to_bits(), b.value.to_bits());
            for k in 0..=spray.ambient_dim() {
                assert_eq!(f.coeff_e_k(k, eps).unwrap(), 0.0);
            }
        }
    }
}

#[test]
fn gasket_at_half_inradius() {
    let spray = common::gasket();
    let f = formula(&spray, 10_000);
    let rep = spray.generator();
    let eps = rep.inradius / 2.0;
    let expect = rep.tube(eps).unwrap() + rep.volume * (4.0 - 1.0);
    let v = f.monophase_tube(eps).unwrap();
    assert!((v.value - expect).abs() <= v.trunc_bound + 1e-12);
    assert!((expect - 0.40595).abs() < 5e-5);
}

#[test]
fn non_monophase_is_rejected_on_the_fast_path() {
    let spray = common::cantor_carpet();
    let f = formula(&spray, 10);
    assert_eq!(f.monophase_tube(0.01).unwrap_err(), Error::NotMonophase);
}

#[test]
fn eps_at_inradius_is_out_of_range_but_saturates_in_dispatch() {
    let spray = common::cantor_carpet();
    let f = formula(&spray, 10);
    let g = spray.generator().inradius;
    assert!(matches!(f.exact_tube(g), Err(Error::EpsOutOfRange { .. })));
    let sat = f.tube(2.0 * g).unwrap();
    assert!(sat.saturated);
    assert_eq!(sat.value, f.constant().unwrap());
    assert_eq!(sat.value, direct_tube(&spray, 2.0 * g).unwrap());
}

#[test]
fn integer_coefficients() {
    let gasket = formula(&common::gasket(), 10);
    let c = gasket.integer_coeffs();
    assert!((c[0] - 1.5 * 3f64.sqrt()).abs() < 1e-12);
    assert!((c[1] + 3.0).abs() < 1e-12);
    assert_eq!(c[2], 0.0);
    let carpet = formula(&common::cantor_carpet(), 10);
    assert_eq!(carpet.coeff_c_k(0).unwrap(), 0.0);
    let string = formula(&common::cantor_string(), 10);
    assert!((string.coeff_c_k(0).unwrap() - 2.0 / (1.0 - 2.0)).abs() < 1e-15);
}

#[test]
fn cantor_carpet_head_coefficient() {
    let spray = common::cantor_carpet();
    let f = formula(&spray, 10);
    let g = spray.generator().inradius;
    for x in [0.34, 0.5, 0.7] {
        assert!((f.coeff_e_k(2, x * g).unwrap() + 4.0 / 9.0).abs() < 1e-15);
    }
    assert_eq!(f.coeff_e_k(2, 1.2 * g).unwrap(), 0.0);
}

// The head terms rebuild V_head; the rest rebuilds V_tail.
#[test]
fn volume_split_matches_direct_sums() {
    let spray = common::cantor_carpet();
    let f = formula(&spray, 10_000);
    let g = spray.generator().inradius;
    let d = 2;
    for eps in log_space(g * 1e-3, g * 0.99, 20) {
        let split = direct_tube_split(&spray, eps).unwrap();
        let head: f64 = (0..=d).map(|k| eps.powi((d - k) as i32) * f.coeff_e_k(k, eps).unwrap()).sum();
        assert!((head - split.head).abs() <= 1e-13 * split.total());
        let v = f.exact_tube(eps).unwrap();
        let tail = v.value - head;
        assert!((tail - split.tail).abs() <= v.trunc_bound + 1e-12 * split.total());
    }
}

#[test]
fn coefficient_at_dimension_matches_closed_form() {
    let spray = common::cantor_carpet();
    let f = formula(&spray, 10);
    let d = 4f64.ln() / 3f64.ln();
    let g = 2f64.sqrt() / 6.0;
    let k1 = 2f64.sqrt() / 3.0;
    let expect = (1.0 / 3f64.ln()) * g.powf(d - 1.0) * k1 / ((d - 1.0) * (2.0 - d));
    let got = f.coeff_c_omega(Complex64::new(d, 0.0)).unwrap();
    assert!((got.re - expect).abs() <= 1e-12 * expect && got.im.abs() < 1e-15);
}

#[test]
fn nonlattice_formula_uses_a_heuristic_bound() {
    let spray = common::two_three();
    let f = TubeFormula::new(common::ctx(&spray), TruncationSpec { lattice_n: 10, nonlattice_height: 100.0 }).unwrap();
    let g = spray.generator().inradius;
    for eps in [g * 1e-3, g * 0.05, g * 0.3] {
        let v = f.exact_tube(eps).unwrap();
        let o = direct_tube(&spray, eps).unwrap();
        assert!(v.heuristic_bound);
        assert!((v.value - o).abs() <= v.trunc_bound, "{eps}");
    }
}

#[test]
fn screen_validation() {
    let gasket = formula(&common::gasket(), 100);
    let carpet = formula(&common::cantor_carpet(), 100);
    let d = 3f64.ln() / 2f64.ln();
    let eps = 0.01;
    let place = |sigma: f64| Screen::at(sigma).unwrap();
    assert!(matches!(gasket.screen_error_term(eps, &place(d + 0.1), 1e-8), Err(Error::ScreenPlacement { .. })));
    assert!(matches!(gasket.screen_error_term(eps, &place(1.0005), 1e-8), Err(Error::ScreenThroughPole { .. })));
    assert!(matches!(carpet.tube_with_error(eps, &place(0.5), 1e-8), Err(Error::ScreenPlacement { .. })));
    assert!(carpet.tube_with_error(eps, &place(-0.5), 1e-8).is_ok());
    assert!(Screen::new(0.5, -1.0).is_err());
}

#[test]
fn screen_left_of_everything_leaves_nothing_hidden() {
    let spray = common::gasket();
    let f = formula(&spray, 10_000);
    let g = spray.generator().inradius;
    let eps = 0.2 * g;
    let exact = f.exact_tube(eps).unwrap();
    let mut last = f64::INFINITY;
    for height in [50.0, 200.0, 1000.0] {
        let st = f.tube_with_error(eps, &Screen::new(-0.5, height).unwrap(), 1e-11).unwrap();
        assert_eq!(f.hidden_terms(eps, -0.5), 0.0);
        assert!((st.value - exact.value).abs() <= st.error_term.quad_bound + exact.trunc_bound);
        assert!(st.error_term.tail_bound < last);
        last = st.error_term.tail_bound;
    }
}

#[test]
fn non_monophase_screen_reconstruction() {
    let spray = common::cantor_carpet();
    let f = formula(&spray, 10_000);
    let g = spray.generator().inradius;
    for eps in [0.01 * g, 0.3 * g, 0.8 * g] {
        let exact = f.exact_tube(eps).unwrap();
        let st = f.tube_with_error(eps, &Screen::at(-0.5).unwrap(), 1e-10).unwrap();
        assert!((st.value - exact.value).abs() <= st.error_term.quad_bound + exact.trunc_bound + 1e-12);
    }
}
