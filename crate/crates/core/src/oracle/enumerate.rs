use crate::error::{Error, Result};
use crate::spray::{ScaleMultiset, SelfSimilarSystem};

/// Default cap on distinct scale values kept in one multiset.
pub const DEFAULT_DISTINCT_LIMIT: usize = 2_000_000;

/// Relative tolerance under which two products count as the same scale.
pub const MERGE_REL_TOL: f64 = 1e-12;

/// All word products `r_w > floor` with exact multiplicities, built level by
/// level. The empty word (scale 1) is always present.
pub fn enumerate_scales(system: &SelfSimilarSystem, floor: f64) -> Result<ScaleMultiset> {
    enumerate_scales_bounded(system, floor, DEFAULT_DISTINCT_LIMIT)
}

pub fn enumerate_scales_bounded(system: &SelfSimilarSystem, floor: f64, limit: usize) -> Result<ScaleMultiset> {
    if !(floor > 0.0) {
        return Err(Error::InvalidArgument(format!("enumeration floor must be positive, got {floor}")));
    }
    let ratios = system.ratios();
    let mut levels: Vec<Vec<(f64, u128)>> = vec![vec![(1.0, 1)]];
    let mut complete_levels = 1;
    let mut still_complete = true;
    let mut total_distinct = 1usize;
    loop {
        let prev = levels.last().unwrap();
        let mut next: Vec<(f64, u128)> = Vec::with_capacity(prev.len() * ratios.len());
        let mut pruned = false;
        for &(v, c) in prev {
            for &r in ratios {
                let p = v * r;
                if p > floor {
                    next.push((p, c));
                } else {
                    pruned = true;
                }
            }
        }
        if next.is_empty() {
            break;
        }
        let next = merge_sorted(next).ok_or(Error::Explosion { limit })?;
        total_distinct += next.len();
        if total_distinct > limit {
            return Err(Error::Explosion { limit });
        }
        if still_complete && !pruned {
            complete_levels += 1;
        } else {
            still_complete = false;
        }
        levels.push(next);
    }
    let all: Vec<(f64, u128)> = levels.iter().flatten().copied().collect();
    let entries = merge_sorted(all).ok_or(Error::Explosion { limit })?;
    Ok(ScaleMultiset::from_parts(entries, levels, complete_levels, floor))
}

/// Sorts descending and merges values equal to within `MERGE_REL_TOL`.
/// Returns `None` on count overflow.
pub(crate) fn merge_sorted(mut items: Vec<(f64, u128)>) -> Option<Vec<(f64, u128)>> {
    items.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut out: Vec<(f64, u128)> = Vec::with_capacity(items.len());
    for (v, c) in items {
        match out.last_mut() {
            Some(last) if (last.0 - v).abs() <= MERGE_REL_TOL * last.0 => {
                last.1 = last.1.checked_add(c)?;
            }
            _ => out.push((v, c)),
        }
    }
    Some(out)
}

/// Next word level with real-valued multiplicities, merged like
/// [`merge_sorted`]. Real weights cannot overflow however deep the series
/// is carried.
pub(crate) fn next_level_weighted(level: &[(f64, f64)], ratios: &[f64]) -> Vec<(f64, f64)> {
    let mut items: Vec<(f64, f64)> = Vec::with_capacity(level.len() * ratios.len());
    for &(l, w) in level {
        for &r in ratios {
            items.push((l * r, w));
        }
    }
    items.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(items.len());
    for (v, w) in items {
        match out.last_mut() {
            Some(last) if (last.0 - v).abs() <= MERGE_REL_TOL * last.0 => last.1 += w,
            _ => out.push((v, w)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn carpet() -> SelfSimilarSystem {
        SelfSimilarSystem::new(vec![1.0 / 3.0; 4], 2).unwrap()
    }

    #[test]
    fn cantor_carpet_to_one_tenth() {
        let ms = enumerate_scales(&carpet(), 0.1).unwrap();
        let e = ms.entries();
        assert_eq!(e.len(), 3);
        assert_eq!(e[0], (1.0, 1));
        assert!((e[1].0 - 1.0 / 3.0).abs() < 1e-16 && e[1].1 == 4);
        assert!((e[2].0 - 1.0 / 9.0).abs() < 1e-16 && e[2].1 == 16);
    }

    // Brute-force word enumeration: every word over {0,1} up to length 4.
    #[test]
    fn two_three_system_matches_word_enumeration() {
        let sys = SelfSimilarSystem::new(vec![0.5, 1.0 / 3.0], 1).unwrap();
        let floor = 1.0 / 7.0;
        let ms = enumerate_scales(&sys, floor).unwrap();

        let mut brute: BTreeMap<u64, (f64, u128)> = BTreeMap::new();
        for len in 0..=4u32 {
            for w in 0..(1u32 << len) {
                let mut p = 1.0;
                for i in 0..len {
                    p *= if (w >> i) & 1 == 0 { 0.5 } else { 1.0 / 3.0 };
                }
                if p > floor || len == 0 {
                    let key = (p * 1e9).round() as u64;
                    brute.entry(key).or_insert((p, 0)).1 += 1;
                }
            }
        }
        let brute: Vec<(f64, u128)> = brute.values().rev().copied().collect();
        assert_eq!(ms.entries().len(), brute.len());
        for (a, b) in ms.entries().iter().zip(&brute) {
            assert!((a.0 - b.0).abs() < 1e-15);
            assert_eq!(a.1, b.1);
        }
        // {1:1, 1/2:1, 1/3:1, 1/4:1, 1/6:2}
        let counts: Vec<u128> = ms.entries().iter().map(|e| e.1).collect();
        assert_eq!(counts, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn floor_at_or_above_one_keeps_only_the_empty_word() {
        let ms = enumerate_scales(&carpet(), 1.0).unwrap();
        assert_eq!(ms.entries(), &[(1.0, 1)]);
        let ms = enumerate_scales(&carpet(), 3.0).unwrap();
        assert_eq!(ms.entries(), &[(1.0, 1)]);
    }

    #[test]
    fn level_totals_are_powers_of_phi() {
        let sys = SelfSimilarSystem::new(vec![0.5, 0.3, 0.2], 2).unwrap();
        let ms = enumerate_scales(&sys, 1e-4).unwrap();
        for (m, level) in ms.levels().iter().enumerate().take(ms.complete_levels()) {
            for s in [0.0, 2.0] {
                let total: f64 = level.iter().map(|(v, c)| *c as f64 * v.powf(s)).sum();
                let expect = sys.phi_real(s).powi(m as i32);
                assert!((total - expect).abs() <= 1e-12 * expect, "level {m}, s={s}");
            }
        }
        assert!(ms.complete_levels() >= 5);
    }

    #[test]
    fn distinct_limit_triggers_explosion() {
        let sys = SelfSimilarSystem::new(vec![0.5, 1.0 / 3.0, 0.2], 2).unwrap();
        let r = enumerate_scales_bounded(&sys, 1e-9, 50);
        assert_eq!(r.unwrap_err(), Error::Explosion { limit: 50 });
    }
}
