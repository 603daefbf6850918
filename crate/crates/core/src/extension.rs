//! Extended counterpoint symmetries across scale embeddings `x ↦ a·x`, the
//! doubling tower over `U_0 ⊂ Z_16`, and chained extension through it.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dichotomy::{check_embedding, induced_quasipolarity, Dichotomy, PolarityReport};
use crate::error::{Error, Result};
use crate::symmetry::{
    admitted_successors, commutes_with, counterpoint_symmetries, deforms_into_dissonance, CounterpointSymmetry,
    CountingKernel, SuccessorSet,
};
use crate::zmod::{AffineMap, DualNumber, Modulus};

/// How `a ∘ g₁ = g₂ ∘ a` constrains the lift `g₂` of `g₁`.
///
/// All modes force `t₂ = a·t₁` and `u₂ ≡ u₁ (mod n)`. They differ on the dual
/// component `u₂·v₂` of the linear part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LinkageMode {
    /// The embedding scales the interval coordinate: `u₂·v₂ ≡ a·u₁·v₁ (mod a·n)`.
    #[default]
    Interval,
    /// Agreement on the zero-cantus fiber only; `v₂` is free.
    Fiber,
    /// Agreement as maps of `Z_n[ε]` with `a` scaling both coordinates:
    /// `u₂·v₂ ≡ u₁·v₁ (mod n)`.
    Full,
}

impl FromStr for LinkageMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interval" => Ok(LinkageMode::Interval),
            "fiber" => Ok(LinkageMode::Fiber),
            "full" => Ok(LinkageMode::Full),
            _ => Err(Error::Parse(format!("unknown linkage mode {s:?}"))),
        }
    }
}

impl fmt::Display for LinkageMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LinkageMode::Interval => "interval",
            LinkageMode::Fiber => "fiber",
            LinkageMode::Full => "full",
        })
    }
}

/// A validated embedding of strong dichotomies `x ↦ a·x`.
#[derive(Clone, Debug)]
pub struct Embedding {
    factor: u32,
    source: Dichotomy,
    target: Dichotomy,
    source_polarity: AffineMap,
    target_polarity: AffineMap,
}

impl Embedding {
    pub fn new(factor: u32, source: Dichotomy, target: Dichotomy) -> Result<Self> {
        let report = check_embedding(factor, &source, &target)?;
        if !report.valid() {
            return Err(Error::InvalidEmbedding(format!(
                "{factor}·({source}) in {} (contains: {}, commutes: {})",
                target.modulus(),
                report.contains,
                report.commutes
            )));
        }
        Ok(Embedding {
            factor,
            source,
            target,
            source_polarity: report.source_polarity,
            target_polarity: report.target_polarity,
        })
    }

    pub fn factor(&self) -> u32 {
        self.factor
    }

    pub fn source(&self) -> &Dichotomy {
        &self.source
    }

    pub fn target(&self) -> &Dichotomy {
        &self.target
    }

    pub fn source_polarity(&self) -> AffineMap {
        self.source_polarity
    }

    pub fn target_polarity(&self) -> AffineMap {
        self.target_polarity
    }
}

/// Whether `child` is a lift of `parent` across factor `a` under `mode`.
pub fn is_linked(parent: &CounterpointSymmetry, child: &CounterpointSymmetry, a: u32, mode: LinkageMode) -> bool {
    let small = parent.modulus();
    let big = child.modulus();
    let n = small.get();
    if big.get() != a * n {
        return false;
    }
    let t_ok = child.t() == big.mul(a, parent.t());
    let u_ok = child.u() % n == parent.u();
    let dual_ok = match mode {
        LinkageMode::Interval => child.dual_component() == big.mul(a, parent.dual_component()),
        LinkageMode::Fiber => true,
        LinkageMode::Full => child.dual_component() % n == parent.dual_component(),
    };
    t_ok && u_ok && dual_ok
}

/// All lifts of `g1` to `Z_{a·n}` allowed by the linkage constraints.
pub fn candidate_extensions(
    g1: &CounterpointSymmetry,
    embedding: &Embedding,
    mode: LinkageMode,
) -> Vec<CounterpointSymmetry> {
    let a = embedding.factor;
    let n = g1.modulus().get();
    let big = embedding.target.modulus();
    let t2 = big.mul(a, g1.t());
    let mut out = Vec::new();
    for j in 0..a {
        let u2 = g1.u() + j * n;
        if !big.is_unit(u2) {
            continue;
        }
        for v2 in big.elements() {
            let g2 = CounterpointSymmetry::new_unchecked(t2, u2, v2, big);
            if is_linked(g1, &g2, a, mode) {
                out.push(g2);
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtensionStep {
    pub factor: u32,
    pub source_modulus: Modulus,
    pub target_modulus: Modulus,
    pub mode: LinkageMode,
    /// The consonant interval `y` in the source world.
    pub source_interval: u32,
    pub parents: Vec<CounterpointSymmetry>,
    pub candidates: usize,
    /// Linked candidates rejected by the target-world admissibility
    /// conditions; nonempty means the lift is not automatically admissible.
    pub filtered: Vec<CounterpointSymmetry>,
    pub extended: SuccessorSet,
    #[serde(skip)]
    pub source: Dichotomy,
    #[serde(skip)]
    pub target: Dichotomy,
}

/// Extended counterpoint symmetries of `ε·a·y` with respect to `embedding`.
pub fn extended_symmetries(
    parents: &[CounterpointSymmetry],
    embedding: &Embedding,
    y: u32,
    mode: LinkageMode,
) -> Result<ExtensionStep> {
    let source = &embedding.source;
    let target = &embedding.target;
    if y >= source.modulus().get() || !source.contains(y) {
        return Err(Error::NotConsonant { interval: y });
    }
    let big = target.modulus();
    let ay = big.mul(embedding.factor, y);
    let pool: BTreeSet<CounterpointSymmetry> = parents
        .iter()
        .flat_map(|g1| candidate_extensions(g1, embedding, mode))
        .collect();
    if pool.is_empty() {
        return Err(Error::EmptyCandidates(format!(
            "no lift of {} parent(s) into {big}",
            parents.len()
        )));
    }
    let q = induced_quasipolarity(embedding.target_polarity, 0);
    let xi = DualNumber::new(0, ay as u64, big);
    let kernel = CountingKernel::new(target);
    let mut filtered = Vec::new();
    let mut best = 0;
    let mut winners: Vec<CounterpointSymmetry> = Vec::new();
    for g in &pool {
        let map = g.map();
        if !commutes_with(map, q) || !deforms_into_dissonance(map, xi, target) {
            filtered.push(*g);
            continue;
        }
        let count = kernel.count(g);
        if count > best || winners.is_empty() {
            best = count;
            winners.clear();
        }
        if count == best {
            winners.push(*g);
        }
    }
    if winners.is_empty() {
        return Err(Error::EmptyCandidates(format!(
            "all {} lifts into {big} fail admissibility",
            pool.len()
        )));
    }
    let extended = SuccessorSet::build(target, 0, ay, winners, best);
    Ok(ExtensionStep {
        factor: embedding.factor,
        source_modulus: source.modulus(),
        target_modulus: big,
        mode,
        source_interval: y,
        parents: parents.to_vec(),
        candidates: pool.len(),
        filtered,
        extended,
        source: source.clone(),
        target: target.clone(),
    })
}

/// `U_{i+1} = 2·U_i ∪ (2·V_i + 1)` with `V_i = {0, …, |U_i|−1}`.
pub fn double(level: &Dichotomy) -> Dichotomy {
    let n = level.modulus().get();
    let big = Modulus::new(2 * n).expect("doubled modulus");
    let evens = level.members().iter().map(|&x| 2 * x);
    let odds = (0..level.members().len() as u32).map(|v| 2 * v + 1);
    Dichotomy::new(big, evens.chain(odds)).expect("doubling preserves half cardinality")
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub levels: Vec<Dichotomy>,
    pub reports: Vec<PolarityReport>,
}

impl Tower {
    pub fn base(&self) -> &Dichotomy {
        &self.levels[0]
    }

    pub fn top(&self) -> &Dichotomy {
        self.levels.last().expect("tower has a base")
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }
}

/// Builds `depth` doubling levels over `base`, checking that each level is
/// strong with polarity `e^(n/2)·1` and that each doubling is an embedding.
pub fn doubling_tower(base: &Dichotomy, depth: usize) -> Result<Tower> {
    let mut levels = vec![base.clone()];
    for _ in 0..depth {
        let next = double(levels.last().expect("nonempty"));
        levels.push(next);
    }
    let mut reports = Vec::with_capacity(levels.len());
    for (i, level) in levels.iter().enumerate() {
        let report = level.find_quasipolarities();
        let m = level.modulus();
        let half = AffineMap::new(m.get() as u64 / 2, 1, m);
        if report.polarity != Some(half) {
            return Err(Error::Tower {
                level: i,
                reason: format!(
                    "expected unique polarity {half}, found {} quasipolarities",
                    report.quasipolarities.len()
                ),
            });
        }
        if i > 0 {
            let r = check_embedding(2, &levels[i - 1], level)?;
            if !r.valid() || !r.translation_scales {
                return Err(Error::Tower {
                    level: i,
                    reason: "doubling is not an embedding of dichotomies".into(),
                });
            }
        }
        reports.push(report);
    }
    Ok(Tower { levels, reports })
}

#[derive(Clone, Debug, Serialize)]
pub struct Chain {
    pub interval: u32,
    pub base: SuccessorSet,
    pub steps: Vec<ExtensionStep>,
}

impl Chain {
    /// The last extended set, or the base if nothing was extended.
    pub fn last(&self) -> &SuccessorSet {
        self.steps.last().map(|s| &s.extended).unwrap_or(&self.base)
    }
}

/// Successive extension: level 0 by plain search, then every doubling step
/// pooled over the previous level's full maximizer set.
pub fn chain_extend(tower: &Tower, k: u32, mode: LinkageMode) -> Result<Chain> {
    let base = counterpoint_symmetries(tower.base(), k)?;
    let mut steps: Vec<ExtensionStep> = Vec::with_capacity(tower.depth());
    let mut y = k;
    for pair in tower.levels.windows(2) {
        let parents = steps.last().map(|s| &s.extended).unwrap_or(&base).symmetries.clone();
        let embedding = Embedding::new(2, pair[0].clone(), pair[1].clone())?;
        let step = extended_symmetries(&parents, &embedding, y, mode)?;
        y = step.extended.interval;
        steps.push(step);
    }
    Ok(Chain {
        interval: k,
        base,
        steps,
    })
}

/// One embedding straight from the base to the top of the tower.
pub fn direct_extend(tower: &Tower, k: u32, mode: LinkageMode) -> Result<Chain> {
    let base = counterpoint_symmetries(tower.base(), k)?;
    let mut steps = Vec::new();
    if tower.depth() > 0 {
        let a = tower.top().modulus().get() / tower.base().modulus().get();
        let embedding = Embedding::new(a, tower.base().clone(), tower.top().clone())?;
        steps.push(extended_symmetries(&base.symmetries, &embedding, k, mode)?);
    }
    Ok(Chain {
        interval: k,
        base,
        steps,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationViolation {
    pub parent: String,
    pub extended: String,
    /// Successor interval at cantus 0 of the parent, scaled by `a`.
    pub missing_interval: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    /// `a·(successors of g₁) ⊆ successors of g₂` on the zero-cantus fiber,
    /// for every extended `g₂` and every parent `g₁` it lifts.
    pub holds: bool,
    pub violations: Vec<PreservationViolation>,
    /// The same inclusion on all of `Z_n[ε]` with `a` acting as
    /// `c+ε·d ↦ a·c+ε·a·d`.
    pub holds_everywhere: bool,
}

/// Checks that extended symmetries keep (the image of) the parents'
/// admitted successors.
pub fn preservation_check(step: &ExtensionStep) -> PreservationReport {
    let a = step.factor;
    let big = step.target_modulus;
    let mut violations = Vec::new();
    let mut holds_everywhere = true;
    for g2 in &step.extended.symmetries {
        let s2: BTreeSet<DualNumber> = admitted_successors(g2.map(), &step.target).into_iter().collect();
        for g1 in step.parents.iter().filter(|g1| is_linked(g1, g2, a, step.mode)) {
            let s1 = admitted_successors(g1.map(), &step.source);
            for s in &s1 {
                let image = DualNumber::new(big.mul(a, s.cantus()) as u64, big.mul(a, s.interval()) as u64, big);
                if !s2.contains(&image) {
                    holds_everywhere = false;
                    if s.cantus() == 0 {
                        violations.push(PreservationViolation {
                            parent: g1.to_string(),
                            extended: g2.to_string(),
                            missing_interval: image.interval(),
                        });
                    }
                }
            }
        }
    }
    PreservationReport {
        holds: violations.is_empty(),
        violations,
        holds_everywhere,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dichotomy::{preset, u0};

    fn z(n: u32) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn example_embedding() -> Embedding {
        Embedding::new(2, preset("X6").unwrap().unwrap(), preset("X12").unwrap().unwrap()).unwrap()
    }

    fn g(t: u32, u: u32, v: u32, n: u32) -> CounterpointSymmetry {
        CounterpointSymmetry::new(t, u, v, z(n)).unwrap()
    }

    #[test]
    fn candidate_shapes() {
        let e = example_embedding();
        let g1 = g(3, 1, 3, 6);
        let fiber = candidate_extensions(&g1, &e, LinkageMode::Fiber);
        assert_eq!(fiber.len(), 24);
        assert!(fiber.iter().all(|c| c.t() == 6 && (c.u() == 1 || c.u() == 7)));
        let interval = candidate_extensions(&g1, &e, LinkageMode::Interval);
        assert_eq!(interval, vec![g(6, 1, 6, 12), g(6, 7, 6, 12)]);
        let full = candidate_extensions(&g1, &e, LinkageMode::Full);
        assert!(full.iter().all(|c| c.dual_component() % 6 == 3));
        assert_eq!(full.len(), 4);

        let same = Embedding::new(1, u0(), u0()).unwrap();
        let g1 = g(5, 3, 0, 16);
        let c = candidate_extensions(&g1, &same, LinkageMode::Fiber);
        assert_eq!(c.len(), 16);
        assert!(c.iter().all(|x| x.t() == 5 && x.u() == 3));

        let up = Embedding::new(2, u0(), preset("U1").unwrap().unwrap()).unwrap();
        let c = candidate_extensions(&g(10, 1, 0, 16), &up, LinkageMode::Interval);
        let us: BTreeSet<u32> = c.iter().map(|x| x.u()).collect();
        assert_eq!(us, BTreeSet::from([1, 17]));
    }

    #[test]
    fn example_extension() {
        let e = example_embedding();
        let step = extended_symmetries(&[g(3, 1, 3, 6)], &e, 2, LinkageMode::Interval).unwrap();
        assert_eq!(step.extended.symmetries, vec![g(6, 1, 6, 12), g(6, 7, 6, 12)]);
        assert_eq!(step.extended.cardinality, 48);
        assert_eq!(step.extended.interval, 4);
        let names: Vec<String> = step.extended.symmetries.iter().map(|s| s.to_string()).collect();
        assert_eq!(names, ["e^(e.6).(1+e.6)", "e^(e.6).(7+e.6)"]);
        assert!(step.filtered.is_empty());
        assert!(preservation_check(&step).holds);
    }

    #[test]
    fn fiber_linkage_admits_a_larger_lift() {
        // without the dual-component constraint e^(ε·6)·7 wins with 60
        let step = extended_symmetries(&[g(3, 1, 3, 6)], &example_embedding(), 2, LinkageMode::Fiber).unwrap();
        assert_eq!(step.extended.symmetries, vec![g(6, 7, 0, 12)]);
        assert_eq!(step.extended.cardinality, 60);
    }

    #[test]
    fn identity_embedding_restricts_to_parent_classes() {
        let k = u0();
        let e = Embedding::new(1, k.clone(), k.clone()).unwrap();
        for &y in k.members() {
            let base = counterpoint_symmetries(&k, y).unwrap();
            let step = extended_symmetries(&base.symmetries, &e, y, LinkageMode::Fiber).unwrap();
            assert_eq!(step.extended.cardinality, base.cardinality);
            assert_eq!(step.extended.symmetries, base.symmetries);
            assert!(preservation_check(&step).holds);
            assert!(preservation_check(&step).holds_everywhere);
        }
    }

    #[test]
    fn linkage_agrees_on_zero_cantus_fiber() {
        let e = example_embedding();
        for mode in [LinkageMode::Interval, LinkageMode::Fiber, LinkageMode::Full] {
            let g1 = g(3, 1, 3, 6);
            for g2 in candidate_extensions(&g1, &e, mode) {
                for d in 0..6 {
                    let (_, b1) = g1.map().apply_raw(0, d);
                    let (c2, b2) = g2.map().apply_raw(0, 2 * d);
                    assert_eq!((c2, b2), (0, (2 * b1) % 12), "{mode} {g2}");
                }
            }
        }
    }

    #[test]
    fn full_linkage_is_map_equality() {
        let e = example_embedding();
        let g1 = g(3, 1, 3, 6);
        for g2 in candidate_extensions(&g1, &e, LinkageMode::Fiber) {
            let agrees = (0..6).all(|c| {
                (0..6).all(|d| {
                    let (a1, b1) = g1.map().apply_raw(c, d);
                    g2.map().apply_raw(2 * c, 2 * d) == ((2 * a1) % 12, (2 * b1) % 12)
                })
            });
            assert_eq!(agrees, is_linked(&g1, &g2, 2, LinkageMode::Full), "{g2}");
        }
    }

    #[test]
    fn interval_linkage_is_interval_scaling() {
        // ε-parts agree when a scales only the interval and the cantus keeps
        // its residue; cantus parts agree mod n.
        let e = example_embedding();
        let g1 = g(3, 1, 3, 6);
        for g2 in candidate_extensions(&g1, &e, LinkageMode::Fiber) {
            let agrees = (0..6).all(|c| {
                (0..6).all(|d| {
                    let (a1, b1) = g1.map().apply_raw(c, d);
                    let (a2, b2) = g2.map().apply_raw(c, 2 * d);
                    a2 % 6 == a1 && b2 == (2 * b1) % 12
                })
            });
            assert_eq!(agrees, is_linked(&g1, &g2, 2, LinkageMode::Interval), "{g2}");
        }
    }

    #[test]
    fn doubling_rule() {
        let u1 = double(&u0());
        assert_eq!(u1.modulus().get(), 32);
        assert_eq!(u1.members(), &[0, 1, 2, 3, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 20]);
        let t = doubling_tower(&u0(), 1).unwrap();
        assert_eq!(t.reports[1].polarity, Some(AffineMap::new(16, 1, z(32))));
        let t = doubling_tower(&u0(), 0).unwrap();
        assert_eq!(t.levels.len(), 1);
        assert_eq!(t.reports[0].polarity, Some(AffineMap::new(8, 1, z(16))));
    }

    #[test]
    fn tower_levels_are_translated_complements() {
        let t = doubling_tower(&u0(), 3).unwrap();
        for level in &t.levels {
            let m = level.modulus();
            let mut shifted: Vec<u32> = level.members().iter().map(|&x| m.add(x, m.get() / 2)).collect();
            shifted.sort();
            assert_eq!(shifted, level.complement().members());
        }
    }

    #[test]
    fn tower_rejects_non_strong_base() {
        let weak = Dichotomy::new(z(6), [0, 1, 2]).unwrap();
        assert!(matches!(doubling_tower(&weak, 1), Err(Error::Tower { level: 0, .. })));
    }

    #[test]
    fn short_chain_interval_four() {
        let t = doubling_tower(&u0(), 2).unwrap();
        let c = chain_extend(&t, 4, LinkageMode::Interval).unwrap();
        assert_eq!(c.base.cardinality, 112);
        assert_eq!(c.steps[0].extended.cardinality, 352);
        assert_eq!(c.steps[0].extended.symmetries, vec![g(0, 7, 0, 32), g(0, 23, 0, 32)]);
        assert_eq!(c.steps[1].extended.cardinality, 1216);
        for s in &c.steps {
            assert!(preservation_check(s).holds);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let e = example_embedding();
        assert!(matches!(
            extended_symmetries(&[g(3, 1, 3, 6)], &e, 1, LinkageMode::Interval),
            Err(Error::NotConsonant { interval: 1 })
        ));
        assert!(matches!(
            extended_symmetries(&[], &e, 2, LinkageMode::Interval),
            Err(Error::EmptyCandidates(_))
        ));
        assert!(Embedding::new(2, u0(), preset("X12").unwrap().unwrap()).is_err());
        assert_eq!("fiber".parse::<LinkageMode>().unwrap(), LinkageMode::Fiber);
        assert!("other".parse::<LinkageMode>().is_err());
    }
}
