//! Batch evaluation over rectangular (p, a) grids with deterministic output
//! order. Instances are independent, so the sweep is data-parallel; the
//! `parallel` feature switches the iterator to rayon, and `evaluate_seq`
//! keeps the sequential path callable for comparison regardless.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::{hilbert_genus, HilbertGenusReport};
use crate::normeq::NormCache;
use crate::quadfield::accepted_p;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub p_min: u64,
    pub p_max: u64,
    pub a_min: u64,
    pub a_max: u64,
    pub strict_lemma43: bool,
}

/// One output record of a grid sweep, ordered by (p, a); a whole rejected p
/// produces a single record with a = None.
#[derive(Debug, Clone)]
pub enum GridRecord {
    Instance(Box<HilbertGenusReport>),
    Skipped { p: u64, a: Option<u64>, reason: String },
}

impl GridRecord {
    pub fn sort_key(&self) -> (u64, u64) {
        match self {
            GridRecord::Instance(rep) => (rep.profile.p, rep.profile.a),
            GridRecord::Skipped { p, a, .. } => (*p, a.unwrap_or(0)),
        }
    }

    pub fn report(&self) -> Option<&HilbertGenusReport> {
        match self {
            GridRecord::Instance(rep) => Some(rep),
            GridRecord::Skipped { .. } => None,
        }
    }
}

/// Accepted field parameters within [p_min, p_max].
pub fn accepted_primes(p_min: u64, p_max: u64) -> Vec<u64> {
    (p_min..=p_max).filter(|&p| accepted_p(p)).collect()
}

fn evaluate_pair(p: u64, a: u64, cache: &NormCache) -> Result<GridRecord> {
    match crate::fieldcase::resolve(p, a) {
        Ok(profile) => Ok(GridRecord::Instance(Box::new(hilbert_genus(&profile, cache)?))),
        Err(e @ (Error::InvalidA { .. } | Error::NotSquarefree(_))) => Ok(GridRecord::Skipped {
            p,
            a: Some(a),
            reason: e.to_string(),
        }),
        Err(other) => Err(other),
    }
}

fn pair_list(spec: &GridSpec) -> (Vec<GridRecord>, Vec<(u64, u64)>) {
    let mut skips = Vec::new();
    let mut pairs = Vec::new();
    for p in spec.p_min..=spec.p_max {
        if !accepted_p(p) {
            skips.push(GridRecord::Skipped {
                p,
                a: None,
                reason: Error::InvalidP(p).to_string(),
            });
            continue;
        }
        for a in spec.a_min..=spec.a_max {
            pairs.push((p, a));
        }
    }
    (skips, pairs)
}

/// Sweep the grid; parallel when the `parallel` feature is enabled.
pub fn evaluate(spec: &GridSpec) -> Result<Vec<GridRecord>> {
    let (skips, pairs) = pair_list(spec);
    let cache = NormCache::new(spec.strict_lemma43);

    #[cfg(feature = "parallel")]
    let computed: Result<Vec<GridRecord>> = pairs
        .par_iter()
        .map(|&(p, a)| evaluate_pair(p, a, &cache))
        .collect();

    #[cfg(not(feature = "parallel"))]
    let computed: Result<Vec<GridRecord>> = pairs
        .iter()
        .map(|&(p, a)| evaluate_pair(p, a, &cache))
        .collect();

    let mut records = computed?;
    records.extend(skips);
    records.sort_by_key(|r| r.sort_key());
    Ok(records)
}

/// The same sweep on a plain sequential iterator, for benchmarking against
/// the parallel path and as the fallback semantics reference.
pub fn evaluate_seq(spec: &GridSpec) -> Result<Vec<GridRecord>> {
    let (skips, pairs) = pair_list(spec);
    let cache = NormCache::new(spec.strict_lemma43);
    let mut records = pairs
        .iter()
        .map(|&(p, a)| evaluate_pair(p, a, &cache))
        .collect::<Result<Vec<GridRecord>>>()?;
    records.extend(skips);
    records.sort_by_key(|r| r.sort_key());
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree() {
        let spec = GridSpec {
            p_min: 2,
            p_max: 17,
            a_min: 1,
            a_max: 30,
            strict_lemma43: false,
        };
        let par = evaluate(&spec).unwrap();
        let seq = evaluate_seq(&spec).unwrap();
        assert_eq!(par.len(), seq.len());
        for (x, y) in par.iter().zip(&seq) {
            assert_eq!(x.sort_key(), y.sort_key());
            match (x, y) {
                (GridRecord::Instance(a), GridRecord::Instance(b)) => {
                    assert_eq!(a.rank, b.rank);
                    let da: Vec<String> = a.hilbert_generators.iter().map(|g| g.display()).collect();
                    let db: Vec<String> = b.hilbert_generators.iter().map(|g| g.display()).collect();
                    assert_eq!(da, db);
                }
                (GridRecord::Skipped { reason: ra, .. }, GridRecord::Skipped { reason: rb, .. }) => {
                    assert_eq!(ra, rb);
                }
                _ => panic!("record kinds diverge"),
            }
        }
    }

    #[test]
    fn skip_records_for_invalid_inputs() {
        let spec = GridSpec {
            p_min: 3,
            p_max: 5,
            a_min: 1,
            a_max: 20,
            strict_lemma43: false,
        };
        let records = evaluate(&spec).unwrap();
        // p = 3 and p = 4 are rejected wholesale
        assert!(matches!(
            &records[0],
            GridRecord::Skipped { p: 3, a: None, .. }
        ));
        assert!(matches!(
            &records[1],
            GridRecord::Skipped { p: 4, a: None, .. }
        ));
        let valid_a: Vec<u64> = records[2..]
            .iter()
            .filter_map(|r| r.report().map(|rep| rep.profile.a))
            .collect();
        assert_eq!(valid_a, vec![1, 2, 3, 6, 7, 11, 13, 14, 17, 19]);
        let skipped_a: Vec<u64> = records[2..]
            .iter()
            .filter_map(|r| match r {
                GridRecord::Skipped { a: Some(a), .. } => Some(*a),
                _ => None,
            })
            .collect();
        assert_eq!(skipped_a, vec![4, 5, 8, 9, 10, 12, 15, 16, 18, 20]);
    }

    #[test]
    fn empty_intersection_is_ok() {
        let spec = GridSpec {
            p_min: 5,
            p_max: 4,
            a_min: 1,
            a_max: 0,
            strict_lemma43: false,
        };
        assert!(evaluate(&spec).unwrap().is_empty());
    }
}
