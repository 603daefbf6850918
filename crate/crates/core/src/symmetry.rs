//! Counterpoint symmetries `e^(ε·t)(u+ε·u·v)` of a strong dichotomy and their
//! admitted successors.
//!
//! The search runs over the parametric family, filtering by the two
//! admissibility conditions (the consonant interval lies in the image of the
//! dissonances; the map commutes with the induced quasipolarity) and keeping
//! every candidate of maximal `|g(K[ε]) ∩ K[ε]|`. Counting goes through a
//! per-unit correlation table so a full `Z_512` sweep stays fast.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::dichotomy::{induced_quasipolarity, Dichotomy};
use crate::error::{Error, Result};
use crate::zmod::{DualAffineMap, DualNumber, Modulus};

/// `g = e^(ε·t)(u + ε·u·v)` with `u` a unit. `v` ranges over all of `Z_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CounterpointSymmetry {
    modulus: Modulus,
    t: u32,
    u: u32,
    v: u32,
}

impl CounterpointSymmetry {
    pub fn new(t: u32, u: u32, v: u32, modulus: Modulus) -> Result<Self> {
        let n = modulus.get();
        let (t, u, v) = (t % n, u % n, v % n);
        if !modulus.is_unit(u) {
            return Err(Error::NotInvertible { value: u, modulus: n });
        }
        Ok(CounterpointSymmetry { modulus, t, u, v })
    }

    pub(crate) fn new_unchecked(t: u32, u: u32, v: u32, modulus: Modulus) -> Self {
        debug_assert!(modulus.is_unit(u));
        CounterpointSymmetry { modulus, t, u, v }
    }

    pub fn identity(modulus: Modulus) -> Self {
        CounterpointSymmetry {
            modulus,
            t: 0,
            u: 1,
            v: 0,
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn u(&self) -> u32 {
        self.u
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    /// The dual component `u·v` of the linear part.
    pub fn dual_component(&self) -> u32 {
        self.modulus.mul(self.u, self.v)
    }

    /// The map on `Z_n[ε]` as seen at cantus `0`.
    pub fn map(&self) -> DualAffineMap {
        self.at_cantus(0)
    }

    /// The same parameters acting around cantus `x`:
    /// `e^((1−u)x + ε·t)(u + ε·u·v)`, which fixes the fiber over `x`.
    pub fn at_cantus(&self, x: u32) -> DualAffineMap {
        let m = self.modulus;
        let ta = m.mul(m.sub(1, self.u), x % m.get());
        DualAffineMap::new(ta as u64, self.t as u64, self.u as u64, self.dual_component() as u64, m)
    }
}

impl PartialOrd for CounterpointSymmetry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CounterpointSymmetry {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.modulus, self.t, self.u, self.v).cmp(&(other.modulus, other.t, other.u, other.v))
    }
}

impl fmt::Display for CounterpointSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.map().fmt(f)
    }
}

impl Serialize for CounterpointSymmetry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `|g(K[ε]) ∩ K[ε]| = Σ_c |{d ∈ K : t + u·v·c + u·d ∈ K}|`, summed directly.
pub fn intersection_cardinality(g: &CounterpointSymmetry, k: &Dichotomy) -> u64 {
    let m = g.modulus;
    let w = g.dual_component();
    m.elements()
        .map(|c| {
            let base = m.add(g.t, m.mul(w, c));
            k.members()
                .iter()
                .filter(|&&d| k.contains(m.add(base, m.mul(g.u, d))))
                .count() as u64
        })
        .sum()
}

/// Counts `g(K[ε]) ∩ K[ε]` by applying `g` to every point `c + ε·d` of `K[ε]`.
pub fn intersection_cardinality_direct(g: DualAffineMap, k: &Dichotomy) -> u64 {
    let mut count = 0;
    for c in k.modulus().elements() {
        for &d in k.members() {
            let (_, b) = g.apply_raw(c, d);
            if k.contains(b) {
                count += 1;
            }
        }
    }
    count
}

/// The admitted successors `g(K[ε]) ∩ K[ε]`, sorted.
pub fn admitted_successors(g: DualAffineMap, k: &Dichotomy) -> Vec<DualNumber> {
    let m = k.modulus();
    let mut out = Vec::with_capacity(m.get() as usize * k.members().len() / 2);
    for c in m.elements() {
        for &d in k.members() {
            let (a, b) = g.apply_raw(c, d);
            if k.contains(b) {
                out.push(DualNumber::new(a as u64, b as u64, m));
            }
        }
    }
    out.sort_unstable();
    out
}

struct UnitTable {
    /// `C_u(s) = |{d ∈ K : u·d + s ∈ K}|`.
    correlation: Vec<u32>,
    /// For each divisor `h` of `n`, sums of `C_u` over the cosets `r + ⟨h⟩`.
    coset_sums: Vec<Vec<u64>>,
    /// `h · max(sums)` per divisor: the best count any `t` reaches.
    coset_max: Vec<u64>,
}

/// Precomputed counting tables for one dichotomy, built lazily per unit.
pub struct CountingKernel<'a> {
    dichotomy: &'a Dichotomy,
    divisors: Vec<u32>,
    divisor_slot: Vec<usize>,
    tables: Vec<OnceLock<UnitTable>>,
}

impl<'a> CountingKernel<'a> {
    pub fn new(dichotomy: &'a Dichotomy) -> Self {
        let n = dichotomy.modulus().get();
        let divisors: Vec<u32> = (1..=n).filter(|h| n.is_multiple_of(*h)).collect();
        let mut divisor_slot = vec![usize::MAX; n as usize + 1];
        for (i, &h) in divisors.iter().enumerate() {
            divisor_slot[h as usize] = i;
        }
        CountingKernel {
            dichotomy,
            divisors,
            divisor_slot,
            tables: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn dichotomy(&self) -> &'a Dichotomy {
        self.dichotomy
    }

    fn table(&self, u: u32) -> &UnitTable {
        self.tables[u as usize].get_or_init(|| {
            let k = self.dichotomy;
            let m = k.modulus();
            let n = m.get() as usize;
            let mut correlation = vec![0u32; n];
            for &d in k.members() {
                let ud = m.mul(u, d);
                for &y in k.members() {
                    correlation[m.sub(y, ud) as usize] += 1;
                }
            }
            let coset_sums = self
                .divisors
                .iter()
                .map(|&h| {
                    let mut sums = vec![0u64; h as usize];
                    for (s, &c) in correlation.iter().enumerate() {
                        sums[s % h as usize] += c as u64;
                    }
                    sums
                })
                .collect::<Vec<Vec<u64>>>();
            let coset_max = self
                .divisors
                .iter()
                .zip(&coset_sums)
                .map(|(&h, sums)| h as u64 * sums.iter().copied().max().unwrap_or(0))
                .collect();
            UnitTable {
                correlation,
                coset_sums,
                coset_max,
            }
        })
    }

    /// `C_u(s)`.
    pub fn correlation(&self, u: u32, s: u32) -> u32 {
        self.table(u).correlation[s as usize]
    }

    /// Coset sums for the subgroup generated by `w = u·v`; the count of
    /// `(t, u, v)` is then `h · sums[t mod h]` with `h = gcd(w, n)`.
    fn coset_row(&self, u: u32, w: u32) -> (u32, &[u64]) {
        let n = self.dichotomy.modulus().get();
        let h = w.gcd(&n);
        let h = if h == 0 { n } else { h };
        (h, &self.table(u).coset_sums[self.divisor_slot[h as usize]])
    }

    /// Upper bound of the count over all translations for `(u, v)`.
    fn row_bound(&self, u: u32, w: u32) -> u64 {
        let n = self.dichotomy.modulus().get();
        let h = w.gcd(&n);
        let h = if h == 0 { n } else { h };
        self.table(u).coset_max[self.divisor_slot[h as usize]]
    }

    pub fn count(&self, g: &CounterpointSymmetry) -> u64 {
        let (h, sums) = self.coset_row(g.u, g.dual_component());
        h as u64 * sums[(g.t % h) as usize]
    }
}

/// Maximal symmetries for a consonant interval together with their admitted
/// successors.
///
/// `cardinality` is the maximal `|g(K[ε]) ∩ K[ε]|`; `successors` is the union
/// of `g(K[ε]) ∩ K[ε]` over every listed `g`, and coincides with a single
/// maximizer's set when the maximizer is unique.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuccessorSet {
    #[serde(skip)]
    pub modulus: Modulus,
    /// Cantus firmus of the counterpoint interval (0 unless transposed).
    #[serde(skip)]
    pub cantus: u32,
    pub interval: u32,
    pub symmetries: Vec<CounterpointSymmetry>,
    pub cardinality: u64,
    #[serde(skip)]
    pub successors: Vec<DualNumber>,
}

impl SuccessorSet {
    /// The map of a listed symmetry, placed at this set's cantus.
    pub fn map_of(&self, g: &CounterpointSymmetry) -> DualAffineMap {
        g.at_cantus(self.cantus)
    }

    /// Successors of a single listed symmetry.
    pub fn successors_of(&self, g: &CounterpointSymmetry, k: &Dichotomy) -> Vec<DualNumber> {
        admitted_successors(self.map_of(g), k)
    }

    pub(crate) fn build(
        k: &Dichotomy,
        cantus: u32,
        interval: u32,
        symmetries: Vec<CounterpointSymmetry>,
        cardinality: u64,
    ) -> Self {
        let mut successors: Vec<DualNumber> = symmetries
            .iter()
            .flat_map(|g| admitted_successors(g.at_cantus(cantus), k))
            .collect();
        successors.sort_unstable();
        successors.dedup();
        SuccessorSet {
            modulus: k.modulus(),
            cantus,
            interval,
            symmetries,
            cardinality,
            successors,
        }
    }
}

/// Condition (1): `ξ ∈ g(D[ε])`, tested as `g⁻¹(ξ) ∈ D[ε]`.
pub fn deforms_into_dissonance(g: DualAffineMap, xi: DualNumber, k: &Dichotomy) -> bool {
    match g.invert() {
        Ok(gi) => {
            let (_, b) = gi.apply_raw(xi.cantus(), xi.interval());
            !k.contains(b)
        }
        Err(_) => false,
    }
}

/// Condition (2): `g ∘ q = q ∘ g` as maps.
pub fn commutes_with(g: DualAffineMap, q: DualAffineMap) -> bool {
    g.compose(q).ok() == q.compose(g).ok()
}

/// Counterpoint symmetries of `0 + ε·k`.
pub fn counterpoint_symmetries(k: &Dichotomy, interval: u32) -> Result<SuccessorSet> {
    symmetries_at(&CountingKernel::new(k), 0, interval)
}

/// Counterpoint symmetries of `x + ε·k`, searching the family transported to
/// the fiber over `x` (see [`CounterpointSymmetry::at_cantus`]).
pub fn symmetries_at(kernel: &CountingKernel<'_>, cantus: u32, interval: u32) -> Result<SuccessorSet> {
    let k = kernel.dichotomy();
    let m = k.modulus();
    let n = m.get();
    if interval >= n || !k.contains(interval) {
        return Err(Error::NotConsonant { interval });
    }
    let cantus = cantus % n;
    let q = induced_quasipolarity(k.polarity()?, cantus);
    let xi = DualNumber::new(cantus as u64, interval as u64, m);

    let per_unit: Vec<(u64, Vec<CounterpointSymmetry>)> = m
        .units()
        .into_par_iter()
        .map(|u| {
            let mut best = 0u64;
            let mut found = Vec::new();
            let mut rows: Vec<(u64, u32)> = (0..n).map(|v| (kernel.row_bound(u, m.mul(u, v)), v)).collect();
            rows.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
            for (bound, v) in rows {
                if bound < best {
                    break;
                }
                let (h, sums) = kernel.coset_row(u, m.mul(u, v));
                for t in 0..n {
                    let count = h as u64 * sums[(t % h) as usize];
                    if count < best {
                        continue;
                    }
                    let g = CounterpointSymmetry::new_unchecked(t, u, v, m);
                    let map = g.at_cantus(cantus);
                    if !commutes_with(map, q) || !deforms_into_dissonance(map, xi, k) {
                        continue;
                    }
                    if count > best || found.is_empty() {
                        best = count;
                        found.clear();
                    }
                    found.push(g);
                }
            }
            (best, found)
        })
        .collect();

    let best = per_unit
        .iter()
        .filter(|(_, f)| !f.is_empty())
        .map(|(b, _)| *b)
        .max()
        .ok_or_else(|| Error::EmptyCandidates(format!("no admissible symmetry for {xi}")))?;
    let mut symmetries: Vec<_> = per_unit
        .into_iter()
        .filter(|(b, _)| *b == best)
        .flat_map(|(_, f)| f)
        .collect();
    symmetries.sort();
    Ok(SuccessorSet::build(k, cantus, interval, symmetries, best))
}

/// Moves successors computed at cantus `0` to cantus `x`.
pub fn transpose_successors(x: u32, successors: &[DualNumber]) -> Vec<DualNumber> {
    let mut out: Vec<DualNumber> = successors
        .iter()
        .map(|s| {
            let m = s.modulus();
            DualNumber::new(m.add(s.cantus(), x % m.get()) as u64, s.interval() as u64, m)
        })
        .collect();
    out.sort_unstable();
    out
}

/// Candidates surviving conditions (1) and (2) at cantus 0, in canonical order.
pub fn admissible_family(k: &Dichotomy, interval: u32) -> Result<Vec<CounterpointSymmetry>> {
    let m = k.modulus();
    let q = induced_quasipolarity(k.polarity()?, 0);
    let xi = DualNumber::new(0, interval as u64, m);
    let mut out = Vec::new();
    for t in m.elements() {
        for &u in &m.units() {
            for v in m.elements() {
                let g = CounterpointSymmetry::new_unchecked(t, u, v, m);
                if commutes_with(g.map(), q) && deforms_into_dissonance(g.map(), xi, k) {
                    out.push(g);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dichotomy::{preset, u0};
    use crate::zmod::AffineMap;

    fn z(n: u32) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn x6() -> Dichotomy {
        preset("X6").unwrap().unwrap()
    }

    fn sym(t: u32, u: u32, dual: u32, m: Modulus) -> CounterpointSymmetry {
        // parametrized by the dual component u·v as printed in tables
        let v = m.mul(m.inverse(u).unwrap(), dual);
        CounterpointSymmetry::new(t, u, v, m).unwrap()
    }

    #[test]
    fn counting_examples() {
        let g = CounterpointSymmetry::new(3, 1, 3, z(6)).unwrap();
        assert_eq!(intersection_cardinality(&g, &x6()), 15);
        let g = CounterpointSymmetry::new(10, 15, 0, z(16)).unwrap();
        assert_eq!(intersection_cardinality(&g, &u0()), 112);
        assert_eq!(
            intersection_cardinality(&CounterpointSymmetry::identity(z(16)), &u0()),
            128
        );
    }

    #[test]
    fn kernel_matches_direct_enumeration_exhaustively() {
        let mut cases = vec![x6(), u0(), preset("X12").unwrap().unwrap()];
        cases.push(Dichotomy::new(z(8), [0, 1, 2, 4]).unwrap());
        cases.push(Dichotomy::new(z(10), [0, 1, 3, 4, 7]).unwrap());
        for k in cases {
            let m = k.modulus();
            let kernel = CountingKernel::new(&k);
            for t in m.elements() {
                for u in m.units() {
                    for v in m.elements() {
                        let g = CounterpointSymmetry::new(t, u, v, m).unwrap();
                        let direct = intersection_cardinality_direct(g.map(), &k);
                        assert_eq!(intersection_cardinality(&g, &k), direct);
                        assert_eq!(kernel.count(&g), direct, "{g} on {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn commutation_congruence_agrees_with_composition() {
        // t(1−w) ≡ r(1−u) mod n  ⟺  g ∘ q₀ = q₀ ∘ g
        let mut cases = vec![
            x6(),
            u0(),
            preset("X12").unwrap().unwrap(),
            preset("U1").unwrap().unwrap(),
        ];
        cases.push(Dichotomy::new(z(10), [0, 1, 3, 4, 7]).unwrap());
        for k in cases {
            let Ok(p) = k.polarity() else { continue };
            let m = k.modulus();
            let (r, w) = (p.translation(), p.linear());
            let q = induced_quasipolarity(p, 0);
            for t in m.elements() {
                for u in m.units() {
                    for v in m.elements() {
                        let g = CounterpointSymmetry::new(t, u, v, m).unwrap();
                        let congruence = m.mul(t, m.sub(1, w)) == m.mul(r, m.sub(1, u));
                        assert_eq!(commutes_with(g.map(), q), congruence, "{g} in {m}");
                    }
                }
            }
        }
    }

    #[test]
    fn z6_example() {
        let s = counterpoint_symmetries(&x6(), 2).unwrap();
        assert_eq!(s.symmetries, vec![CounterpointSymmetry::new(3, 1, 3, z(6)).unwrap()]);
        assert_eq!(s.cardinality, 15);
        assert_eq!(s.successors.len(), 15);
        assert_eq!(s.symmetries[0].to_string(), "e^(e.3).(1+e.3)");
    }

    #[test]
    fn u0_level_zero_rows() {
        let m = z(16);
        let s = counterpoint_symmetries(&u0(), 0).unwrap();
        assert_eq!(s.symmetries, vec![sym(5, 3, 0, m), sym(6, 13, 0, m), sym(11, 15, 0, m)]);
        assert_eq!(s.cardinality, 96);
        let s = counterpoint_symmetries(&u0(), 4).unwrap();
        assert_eq!(s.symmetries, vec![sym(0, 7, 0, m)]);
        assert_eq!(s.cardinality, 112);
        assert_eq!(s.symmetries[0].to_string(), "7");
        let s = counterpoint_symmetries(&u0(), 6).unwrap();
        assert_eq!(s.symmetries[0].to_string(), "e^(e.3).13");
    }

    #[test]
    fn search_errors() {
        assert!(matches!(
            counterpoint_symmetries(&u0(), 2),
            Err(Error::NotConsonant { interval: 2 })
        ));
        assert!(matches!(
            counterpoint_symmetries(&u0(), 99),
            Err(Error::NotConsonant { .. })
        ));
        let weak = Dichotomy::new(z(6), [0, 1, 2]).unwrap();
        assert!(matches!(counterpoint_symmetries(&weak, 0), Err(Error::NotStrong(2))));
    }

    #[test]
    fn search_matches_naive_filter_then_maximize() {
        for k in [x6(), u0(), preset("X12").unwrap().unwrap()] {
            for &interval in k.members() {
                let family = admissible_family(&k, interval).unwrap();
                let best = family.iter().map(|g| intersection_cardinality(g, &k)).max().unwrap();
                let expected: Vec<_> = family
                    .into_iter()
                    .filter(|g| intersection_cardinality(g, &k) == best)
                    .collect();
                let s = counterpoint_symmetries(&k, interval).unwrap();
                assert_eq!(s.cardinality, best);
                assert_eq!(s.symmetries, expected);
            }
        }
    }

    #[test]
    fn identity_never_admissible_and_successors_are_consonant() {
        for k in [x6(), u0(), preset("X12").unwrap().unwrap()] {
            let m = k.modulus();
            for &interval in k.members() {
                let xi = DualNumber::new(0, interval as u64, m);
                assert!(!deforms_into_dissonance(DualAffineMap::identity(m), xi, &k));
                let s = counterpoint_symmetries(&k, interval).unwrap();
                assert!(!s.symmetries.is_empty());
                for g in &s.symmetries {
                    let gi = g.map().invert().unwrap();
                    for succ in s.successors_of(g, &k) {
                        assert!(k.contains(succ.interval()));
                        assert!(k.contains(gi.apply(succ).unwrap().interval()));
                    }
                }
            }
        }
    }

    #[test]
    fn transpose_examples() {
        let s = counterpoint_symmetries(&x6(), 2).unwrap();
        assert_eq!(transpose_successors(0, &s.successors), s.successors);
        let moved = transpose_successors(1, &s.successors);
        assert_eq!(moved.len(), 15);
        for x in 0..6 {
            assert_eq!(transpose_successors(x, &s.successors).len(), 15);
        }
        let mut back: Vec<_> = moved.iter().map(|d| d.cantus()).collect();
        back.sort();
        let mut orig: Vec<_> = s.successors.iter().map(|d| (d.cantus() + 1) % 6).collect();
        orig.sort();
        assert_eq!(back, orig);
    }

    #[test]
    fn search_at_cantus_is_transposition() {
        for k in [x6(), u0()] {
            let kernel = CountingKernel::new(&k);
            for &interval in k.members() {
                let base = symmetries_at(&kernel, 0, interval).unwrap();
                for x in k.modulus().elements() {
                    let at = symmetries_at(&kernel, x, interval).unwrap();
                    assert_eq!(at.cardinality, base.cardinality);
                    assert_eq!(at.successors, transpose_successors(x, &base.successors));
                }
            }
        }
    }

    #[test]
    fn polarity_map_is_not_a_counterpoint_symmetry_argument() {
        // the induced quasipolarity itself sends K[ε] to D[ε]
        let k = u0();
        let q = induced_quasipolarity(AffineMap::new(8, 1, z(16)), 0);
        assert_eq!(intersection_cardinality_direct(q, &k), 0);
    }
}
