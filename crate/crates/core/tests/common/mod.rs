#![allow(dead_code)]

use spraytube::{builtin, BuiltinName, FractalSpray, FractalString, SelfSimilarSystem, TubularZetaContext};

pub const FLOOR: f64 = 1e-6;

pub fn spray(ratios: Vec<f64>, d: usize, gen: BuiltinName, size: f64) -> FractalSpray {
    let sys = SelfSimilarSystem::new(ratios, d).unwrap();
    let string = FractalString::self_similar(sys, FLOOR).unwrap();
    FractalSpray::new(string, builtin(gen, size).unwrap()).unwrap()
}

pub fn cantor_carpet() -> FractalSpray {
    spray(vec![1.0 / 3.0; 4], 2, BuiltinName::CantorCarpetGen, 1.0)
}

pub fn gasket() -> FractalSpray {
    spray(vec![0.5; 3], 2, BuiltinName::SierpinskiGasketGen, 1.0)
}

pub fn sierpinski_carpet() -> FractalSpray {
    spray(vec![1.0 / 3.0; 8], 2, BuiltinName::SierpinskiCarpetGen, 1.0)
}

pub fn cantor_string() -> FractalSpray {
    spray(vec![1.0 / 3.0; 2], 1, BuiltinName::Interval, 1.0)
}

pub fn two_three() -> FractalSpray {
    spray(vec![0.5, 1.0 / 3.0], 1, BuiltinName::Interval, 1.0)
}

/// Every lattice tiling used in the checks, with a label.
pub fn lattice_tilings() -> Vec<(&'static str, FractalSpray)> {
    vec![
        ("cantor_carpet", cantor_carpet()),
        ("gasket", gasket()),
        ("sierpinski_carpet", sierpinski_carpet()),
        ("cantor_string", cantor_string()),
    ]
}

pub fn ctx(spray: &FractalSpray) -> TubularZetaContext {
    TubularZetaContext::new(spray.clone())
}
