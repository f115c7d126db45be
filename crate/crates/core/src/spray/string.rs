use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::oracle::enumerate::enumerate_scales;
use crate::spray::SelfSimilarSystem;

/// Compressed scale sequence: distinct value -> multiplicity, in descending
/// order of value.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleMultiset {
    entries: Vec<(f64, u128)>,
    levels: Vec<Vec<(f64, u128)>>,
    complete_levels: usize,
    floor: f64,
}

impl ScaleMultiset {
    pub(crate) fn from_parts(
        entries: Vec<(f64, u128)>,
        levels: Vec<Vec<(f64, u128)>>,
        complete_levels: usize,
        floor: f64,
    ) -> Self {
        ScaleMultiset { entries, levels, complete_levels, floor }
    }

    /// Multiset of an explicit (already sorted) list, with no level structure.
    pub fn from_sorted(values: &[f64]) -> Self {
        let mut entries: Vec<(f64, u128)> = Vec::new();
        for &v in values {
            match entries.last_mut() {
                Some(last) if last.0 == v => last.1 += 1,
                _ => entries.push((v, 1)),
            }
        }
        let floor = values.last().copied().unwrap_or(1.0);
        ScaleMultiset { entries, levels: Vec::new(), complete_levels: 0, floor }
    }

    pub fn entries(&self) -> &[(f64, u128)] {
        &self.entries
    }

    /// Per-level multisets (self-similar sources only).
    pub fn levels(&self) -> &[Vec<(f64, u128)>] {
        &self.levels
    }

    /// Number of leading levels that were not truncated by the floor.
    pub fn complete_levels(&self) -> usize {
        self.complete_levels
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn total_count(&self) -> u128 {
        self.entries.iter().map(|e| e.1).sum()
    }
}

/// Where a fractal string's scales come from.
#[derive(Debug, Clone, PartialEq)]
pub enum StringSource {
    /// A finite, explicitly listed string.
    Explicit,
    /// Word products of a self-similar system.
    SelfSimilar(SelfSimilarSystem),
    /// Normalized radii of an Apollonian packing.
    Apollonian {
        curvatures: [f64; 4],
        min_radius: f64,
        /// `sum_j l_j^2` over the whole (infinite) packing, from the
        /// enclosing-disk area identity.
        zeta_at_two: f64,
    },
}

/// Nonincreasing sequence of positive scales with `l_1 = 1`, materialized
/// down to some floor.
#[derive(Debug, Clone, PartialEq)]
pub struct FractalString {
    source: StringSource,
    scales: ScaleMultiset,
    /// Every scale strictly above this value is present in `scales`.
    complete_above: f64,
}

impl FractalString {
    /// A finite string given by its scales.
    pub fn explicit(scales: Vec<f64>) -> Result<Self> {
        check_normalized_nonincreasing(&scales)?;
        Ok(FractalString {
            source: StringSource::Explicit,
            scales: ScaleMultiset::from_sorted(&scales),
            complete_above: 0.0,
        })
    }

    /// The string of word products of `system`, materialized for scales above
    /// `floor`.
    pub fn self_similar(system: SelfSimilarSystem, floor: f64) -> Result<Self> {
        let scales = enumerate_scales(&system, floor)?;
        Ok(FractalString { source: StringSource::SelfSimilar(system), scales, complete_above: floor })
    }

    pub(crate) fn apollonian(
        curvatures: [f64; 4],
        min_radius: f64,
        normalized: Vec<f64>,
        zeta_at_two: f64,
        complete_above: f64,
    ) -> Result<Self> {
        check_normalized_nonincreasing(&normalized)?;
        Ok(FractalString {
            source: StringSource::Apollonian { curvatures, min_radius, zeta_at_two },
            scales: ScaleMultiset::from_sorted(&normalized),
            complete_above,
        })
    }

    pub fn source(&self) -> &StringSource {
        &self.source
    }

    pub fn system(&self) -> Option<&SelfSimilarSystem> {
        match &self.source {
            StringSource::SelfSimilar(s) => Some(s),
            _ => None,
        }
    }

    /// Ambient dimension implied by the source, if any.
    pub fn dim(&self) -> Option<usize> {
        match &self.source {
            StringSource::SelfSimilar(s) => Some(s.ambient_dim()),
            StringSource::Apollonian { .. } => Some(2),
            StringSource::Explicit => None,
        }
    }

    pub fn scales(&self) -> &ScaleMultiset {
        &self.scales
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.source, StringSource::Explicit)
    }

    /// Scale entries `(l, count)` of tiles with inradius `l * g > eps`, i.e.
    /// the tiles not yet fully covered by the inner eps-neighbourhood.
    pub fn unsaturated(&self, g: f64, eps: f64) -> Result<Vec<(f64, u128)>> {
        let x = eps / g;
        if x >= 1.0 {
            return Ok(if 1.0 * g > eps { vec![(1.0, 1)] } else { Vec::new() });
        }
        let probe = x * (1.0 - 1e-12);
        let source: std::borrow::Cow<'_, ScaleMultiset> = if probe >= self.complete_above {
            std::borrow::Cow::Borrowed(&self.scales)
        } else {
            match &self.source {
                StringSource::SelfSimilar(sys) => {
                    std::borrow::Cow::Owned(enumerate_scales(sys, probe.max(f64::MIN_POSITIVE))?)
                }
                _ => return Err(Error::UnmaterializableString { floor: x }),
            }
        };
        Ok(source.entries().iter().take_while(|(l, _)| *l > probe).filter(|(l, _)| l * g > eps).copied().collect())
    }

    /// Closed-form `zeta_L(s)` where one exists: self-similar strings
    /// everywhere off the poles, finite strings everywhere, Apollonian strings
    /// at `s = 2` only.
    pub fn zeta_closed(&self, s: Complex64) -> Option<Complex64> {
        match &self.source {
            StringSource::SelfSimilar(sys) => Some(Complex64::new(1.0, 0.0) / (1.0 - sys.phi(s))),
            StringSource::Explicit => {
                Some(self.scales.entries().iter().map(|(l, c)| crate::numeric::real_pow(*l, s) * *c as f64).sum())
            }
            StringSource::Apollonian { zeta_at_two, .. } => {
                if s == Complex64::new(2.0, 0.0) {
                    Some(Complex64::new(*zeta_at_two, 0.0))
                } else {
                    None
                }
            }
        }
    }
}

fn check_normalized_nonincreasing(scales: &[f64]) -> Result<()> {
    let first = *scales.first().ok_or_else(|| Error::InvalidString("string has no scales".into()))?;
    if (first - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidString(format!("first scale must be normalized to 1, got {first}")));
    }
    for w in scales.windows(2) {
        if !(w[1] > 0.0 && w[1].is_finite()) {
            return Err(Error::InvalidString(format!("non-positive scale {}", w[1])));
        }
        if w[1] > w[0] {
            return Err(Error::InvalidString(format!("scales must be nonincreasing: {} follows {}", w[1], w[0])));
        }
    }
    Ok(())
}

/// `J(eps)`: number of tiles with `l_j g > eps`; zero once `eps >= g`.
pub fn cutoff_index(string: &FractalString, g: f64, eps: f64) -> Result<u128> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if eps >= g {
        return Ok(0);
    }
    Ok(string.unsaturated(g, eps)?.iter().map(|e| e.1).sum())
}
