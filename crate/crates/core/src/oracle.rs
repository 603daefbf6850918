//! Brute-force validation over the whole affine group of `Z_n[ε]`.
//!
//! Every translation `ta+ε·tb` and every invertible linear part `va+ε·vb` is
//! tried against the counterpoint conditions literally: images of `D[ε]` are
//! enumerated point by point and intersections are counted by applying the
//! map to every point of `K[ε]`. Nothing here goes through the counting kernel
//! or the parametric family.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::dichotomy::{induced_quasipolarity, Dichotomy};
use crate::error::{Error, Result};
use crate::symmetry::{admitted_successors, intersection_cardinality_direct, SuccessorSet};
use crate::zmod::{DualAffineMap, DualNumber};

pub const ORACLE_LIMIT: u32 = 16;

#[derive(Clone, Debug)]
pub struct OracleResult {
    pub cantus: u32,
    pub interval: u32,
    pub maximum: u64,
    pub maximizers: Vec<DualAffineMap>,
    /// Distinct successor sets among the maximizers.
    pub successor_sets: BTreeSet<Vec<DualNumber>>,
    pub union: Vec<DualNumber>,
}

fn maps_to(g: DualAffineMap, k: &Dichotomy, xi: DualNumber) -> bool {
    let target = (xi.cantus(), xi.interval());
    k.modulus().elements().any(|c| {
        k.modulus()
            .elements()
            .filter(|&d| !k.contains(d))
            .any(|d| g.apply_raw(c, d) == target)
    })
}

/// Maximal symmetries of `0 + ε·k` over the full group.
pub fn oracle_symmetries(k: &Dichotomy, interval: u32) -> Result<OracleResult> {
    oracle_symmetries_at(k, 0, interval)
}

/// Maximal symmetries of `x + ε·k` over the full group, commuting with the
/// quasipolarity induced at the cantus `x`.
pub fn oracle_symmetries_at(k: &Dichotomy, cantus: u32, interval: u32) -> Result<OracleResult> {
    let m = k.modulus();
    let n = m.get();
    if n > ORACLE_LIMIT {
        return Err(Error::ModulusTooLarge { n, limit: ORACLE_LIMIT });
    }
    if interval >= n || !k.contains(interval) {
        return Err(Error::NotConsonant { interval });
    }
    let cantus = cantus % n;
    let q = induced_quasipolarity(k.polarity()?, cantus);
    let xi = DualNumber::new(cantus as u64, interval as u64, m);

    let mut maximum = 0;
    let mut maximizers = Vec::new();
    for ta in 0..n {
        for tb in 0..n {
            for va in m.units() {
                for vb in 0..n {
                    let g = DualAffineMap::new(ta as u64, tb as u64, va as u64, vb as u64, m);
                    if g.compose(q)? != q.compose(g)? || !maps_to(g, k, xi) {
                        continue;
                    }
                    let count = intersection_cardinality_direct(g, k);
                    if count > maximum || maximizers.is_empty() {
                        maximum = count;
                        maximizers.clear();
                    }
                    if count == maximum {
                        maximizers.push(g);
                    }
                }
            }
        }
    }
    if maximizers.is_empty() {
        return Err(Error::EmptyCandidates(format!("no admissible symmetry for {xi}")));
    }
    let successor_sets: BTreeSet<Vec<DualNumber>> = maximizers.iter().map(|&g| admitted_successors(g, k)).collect();
    let union: BTreeSet<DualNumber> = successor_sets.iter().flatten().copied().collect();
    Ok(OracleResult {
        cantus,
        interval,
        maximum,
        maximizers,
        successor_sets,
        union: union.into_iter().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleComparison {
    pub interval: u32,
    pub family_maximum: u64,
    pub oracle_maximum: u64,
    pub same_maximum: bool,
    pub same_successor_sets: bool,
    pub same_union: bool,
    pub oracle_maximizers: usize,
    /// Oracle maximizers not of the form `e^(ε·t)(u+ε·u·v)`.
    pub outside_family: usize,
    /// Oracle maximizers of the family form missing from the family search.
    pub missed_by_family: Vec<String>,
}

impl OracleComparison {
    pub fn matches(&self) -> bool {
        self.same_maximum && self.same_successor_sets && self.same_union && self.missed_by_family.is_empty()
    }
}

/// Compares the full-group result against a family search for the same
/// interval. Successor sets are compared as a collection of sets: maximizers
/// with a cantus translation reproduce a family member's set.
pub fn compare(oracle: &OracleResult, family: &SuccessorSet, k: &Dichotomy) -> OracleComparison {
    let family_sets: BTreeSet<Vec<DualNumber>> = family.symmetries.iter().map(|g| family.successors_of(g, k)).collect();
    let family_maps: BTreeSet<DualAffineMap> = family.symmetries.iter().map(|g| g.map()).collect();
    let in_family = |g: &DualAffineMap| g.parts().0 == 0;
    let missed_by_family = oracle
        .maximizers
        .iter()
        .filter(|g| in_family(g) && !family_maps.contains(g))
        .map(|g| g.to_string())
        .collect();
    OracleComparison {
        interval: oracle.interval,
        family_maximum: family.cardinality,
        oracle_maximum: oracle.maximum,
        same_maximum: family.cardinality == oracle.maximum,
        same_successor_sets: family_sets == oracle.successor_sets,
        same_union: family.successors == oracle.union,
        oracle_maximizers: oracle.maximizers.len(),
        outside_family: oracle.maximizers.iter().filter(|g| !in_family(g)).count(),
        missed_by_family,
    }
}
