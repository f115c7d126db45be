//! Fixtures shared by the benchmarks.

use spraytube::{
    builtin, BuiltinName, FractalSpray, FractalString, SelfSimilarSystem, TruncationSpec, TubeFormula,
    TubularZetaContext,
};

const FLOOR: f64 = 1e-6;

pub fn spray(ratios: Vec<f64>, d: usize, gen: BuiltinName) -> FractalSpray {
    let sys = SelfSimilarSystem::new(ratios, d).expect("valid system");
    let string = FractalString::self_similar(sys, FLOOR).expect("materializable");
    FractalSpray::new(string, builtin(gen, 1.0).expect("builtin")).expect("consistent spray")
}

pub fn cantor_carpet() -> FractalSpray {
    spray(vec![1.0 / 3.0; 4], 2, BuiltinName::CantorCarpetGen)
}

pub fn gasket() -> FractalSpray {
    spray(vec![0.5; 3], 2, BuiltinName::SierpinskiGasketGen)
}

pub fn formula(spray: &FractalSpray, lattice_n: usize) -> TubeFormula {
    TubeFormula::new(TubularZetaContext::new(spray.clone()), TruncationSpec::lattice(lattice_n)).expect("formula")
}
