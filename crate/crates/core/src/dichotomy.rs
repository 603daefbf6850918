//! Dichotomies of `Z_2k`, their quasipolarities, and embeddings between them.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::zmod::{AffineMap, DualAffineMap, Modulus};

/// A half-cardinality subset `S ⊂ Z_n`, written `(S/∁S)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dichotomy {
    modulus: Modulus,
    members: Vec<u32>,
    mask: Vec<bool>,
}

impl Dichotomy {
    /// Members may come in any order; they must be distinct residues in
    /// `[0, n)` and number exactly `n/2`.
    pub fn new(modulus: Modulus, members: impl IntoIterator<Item = u32>) -> Result<Self> {
        let n = modulus.get();
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidDichotomy(format!("modulus {n} is odd")));
        }
        let mut mask = vec![false; n as usize];
        let mut sorted = Vec::with_capacity(n as usize / 2);
        for x in members {
            if x >= n {
                return Err(Error::InvalidDichotomy(format!("{x} is not reduced modulo {n}")));
            }
            if std::mem::replace(&mut mask[x as usize], true) {
                return Err(Error::InvalidDichotomy(format!("{x} listed twice")));
            }
            sorted.push(x);
        }
        if sorted.len() != n as usize / 2 {
            return Err(Error::InvalidDichotomy(format!(
                "expected {} members in Z_{n}, got {}",
                n / 2,
                sorted.len()
            )));
        }
        sorted.sort_unstable();
        Ok(Dichotomy {
            modulus,
            members: sorted,
            mask,
        })
    }

    /// Parses `0,1,3,4` or one of the named presets (`X6`, `X12`, `U0`..`U8`).
    pub fn parse(modulus: Modulus, text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(d) = preset(text)? {
            if d.modulus != modulus {
                return Err(Error::InvalidDichotomy(format!(
                    "preset {text} lives in {}, not {modulus}",
                    d.modulus
                )));
            }
            return Ok(d);
        }
        let members = text
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad residue {:?} in dichotomy", s.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Dichotomy::new(modulus, members)
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    /// Membership bitmask indexed by residue.
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.mask[x as usize]
    }

    pub fn complement(&self) -> Dichotomy {
        let members: Vec<u32> = self.modulus.elements().filter(|&x| !self.contains(x)).collect();
        let mask = self.mask.iter().map(|b| !b).collect();
        Dichotomy {
            modulus: self.modulus,
            members,
            mask,
        }
    }

    /// Whether `p` maps this set onto its complement.
    pub fn is_quasipolarity(&self, p: AffineMap) -> bool {
        // p is a bijection and |S| = |∁S|, so p(S) ⊆ ∁S suffices.
        p.modulus() == self.modulus && self.members.iter().all(|&x| !self.contains(p.apply_raw(x)))
    }

    /// Scans all `n·φ(n)` affine symmetries of `Z_n`.
    pub fn find_quasipolarities(&self) -> PolarityReport {
        let m = self.modulus;
        let mut found: Vec<AffineMap> = m
            .units()
            .into_par_iter()
            .flat_map_iter(|v| {
                m.elements()
                    .map(move |u| AffineMap::new(u as u64, v as u64, m))
                    .filter(|&p| self.is_quasipolarity(p))
                    .collect::<Vec<_>>()
            })
            .collect();
        found.sort();
        PolarityReport::from_quasipolarities(found)
    }

    /// The unique quasipolarity, or [`Error::NotStrong`].
    pub fn polarity(&self) -> Result<AffineMap> {
        let report = self.find_quasipolarities();
        report.polarity.ok_or(Error::NotStrong(report.quasipolarities.len()))
    }

    /// `a·S = {a·x}` read inside `Z_{a·n}`.
    pub fn scaled_members(&self, a: u32) -> Vec<u32> {
        self.members.iter().map(|&x| x * a).collect()
    }
}

impl fmt::Display for Dichotomy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Named dichotomies used throughout: `X6`, `X12`, and the doubling tower
/// `U0 ⊂ Z_16`, `U1 ⊂ Z_32`, ..., `U8 ⊂ Z_4096`.
pub fn preset(name: &str) -> Result<Option<Dichotomy>> {
    let z = |n| Modulus::new(n).expect("preset modulus");
    let d = match name {
        "X6" => Dichotomy::new(z(6), [0, 2, 3])?,
        "X12" => Dichotomy::new(z(12), [0, 1, 4, 5, 6, 9])?,
        _ => match name.strip_prefix('U').and_then(|i| i.parse::<usize>().ok()) {
            Some(level) if level <= 8 => {
                let mut d = u0();
                for _ in 0..level {
                    d = crate::extension::double(&d);
                }
                d
            }
            _ => return Ok(None),
        },
    };
    Ok(Some(d))
}

/// `U_0 = {0,1,3,4,5,6,7,10} ⊂ Z_16`.
pub fn u0() -> Dichotomy {
    Dichotomy::new(Modulus::new(16).expect("16"), [0, 1, 3, 4, 5, 6, 7, 10]).expect("U0 is a dichotomy")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolarityReport {
    #[serde(serialize_with = "crate::report::ser_display_vec")]
    pub quasipolarities: Vec<AffineMap>,
    pub strong: bool,
    #[serde(serialize_with = "crate::report::ser_display_opt")]
    pub polarity: Option<AffineMap>,
}

impl PolarityReport {
    fn from_quasipolarities(quasipolarities: Vec<AffineMap>) -> Self {
        let strong = quasipolarities.len() == 1;
        let polarity = if strong { Some(quasipolarities[0]) } else { None };
        PolarityReport {
            quasipolarities,
            strong,
            polarity,
        }
    }
}

/// The quasipolarity `q_x[ε] = e^((1−w)x + ε·r)·w` induced on `Z_n[ε]` by
/// `p = e^r·w`. It fixes the cantus `x` and acts on the interval by `p`.
pub fn induced_quasipolarity(p: AffineMap, x: u32) -> DualAffineMap {
    let m = p.modulus();
    let (r, w) = (p.translation(), p.linear());
    let ta = m.mul(m.sub(1, w), x % m.get());
    DualAffineMap::new(ta as u64, r as u64, w as u64, 0, m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub factor: u32,
    /// `a·S_n ⊆ S_an`.
    pub contains: bool,
    /// `p_an(a·x) = a·p_n(x)` for every `x ∈ Z_n`.
    pub commutes: bool,
    /// `a·r₁ = r₂` for the translation parts of the polarities.
    pub translation_scales: bool,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub source_polarity: AffineMap,
    #[serde(serialize_with = "crate::report::ser_display")]
    pub target_polarity: AffineMap,
}

impl EmbeddingReport {
    pub fn valid(&self) -> bool {
        self.contains && self.commutes
    }
}

/// Validates `x ↦ a·x` as an embedding of strong dichotomies
/// `(S_n) ↪ (S_an)`.
pub fn check_embedding(a: u32, source: &Dichotomy, target: &Dichotomy) -> Result<EmbeddingReport> {
    let n = source.modulus.get();
    if a == 0 || target.modulus.get() as u64 != a as u64 * n as u64 {
        return Err(Error::InvalidEmbedding(format!(
            "factor {a} does not carry Z_{n} onto {}",
            target.modulus
        )));
    }
    let p_n = source.polarity()?;
    let p_an = target.polarity()?;
    let big = target.modulus;
    let contains = source.members.iter().all(|&x| target.contains(x * a));
    let commutes = (0..n).all(|x| p_an.apply_raw(x * a) == big.mul(a, p_n.apply_raw(x)));
    let translation_scales = big.mul(a, p_n.translation()) == p_an.translation();
    Ok(EmbeddingReport {
        factor: a,
        contains,
        commutes,
        translation_scales,
        source_polarity: p_n,
        target_polarity: p_an,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn validation() {
        assert!(Dichotomy::new(z(6), [0, 1]).is_err());
        assert!(Dichotomy::new(z(6), [0, 1, 1]).is_err());
        assert!(Dichotomy::new(z(6), [0, 1, 6]).is_err());
        assert!(Dichotomy::new(z(7), [0, 1, 2]).is_err());
        let d = Dichotomy::new(z(6), [3, 0, 2]).unwrap();
        assert_eq!(d.members(), &[0, 2, 3]);
        assert_eq!(d.to_string(), "0,2,3");
    }

    #[test]
    fn parse_and_presets() {
        assert_eq!(Dichotomy::parse(z(16), "0, 1,3,4,5,6,7,10").unwrap(), u0());
        assert_eq!(Dichotomy::parse(z(16), "U0").unwrap(), u0());
        assert!(Dichotomy::parse(z(12), "U0").is_err());
        assert!(matches!(Dichotomy::parse(z(6), "0,x,2"), Err(Error::Parse(_))));
        let u5 = Dichotomy::parse(z(512), "U5").unwrap();
        assert_eq!(u5.members().len(), 256);
    }

    #[test]
    fn complement_examples() {
        let d = Dichotomy::new(z(6), [0, 2, 3]).unwrap();
        assert_eq!(d.complement().members(), &[1, 4, 5]);
        assert_eq!(u0().complement().members(), &[2, 8, 9, 11, 12, 13, 14, 15]);
        assert_eq!(u0().complement().complement(), u0());
    }

    #[test]
    fn quasipolarity_examples() {
        let r = u0().find_quasipolarities();
        assert!(r.strong);
        assert_eq!(r.quasipolarities, vec![AffineMap::new(8, 1, z(16))]);
        assert_eq!(r.polarity, Some(AffineMap::new(8, 1, z(16))));

        let r = Dichotomy::new(z(6), [0, 2, 3]).unwrap().find_quasipolarities();
        assert_eq!(r.quasipolarities, vec![AffineMap::new(1, 5, z(6))]);
        assert!(r.strong);

        let d = Dichotomy::new(z(6), [0, 1, 2]).unwrap();
        let r = d.find_quasipolarities();
        assert_eq!(
            r.quasipolarities,
            vec![AffineMap::new(3, 1, z(6)), AffineMap::new(5, 5, z(6))]
        );
        assert!(!r.strong);
        assert_eq!(r.polarity, None);
        assert!(matches!(d.polarity(), Err(Error::NotStrong(2))));
    }

    #[test]
    fn reported_quasipolarities_swap_pointwise() {
        for n in [4u32, 6, 8, 10] {
            let m = z(n);
            // every half-size subset containing 0
            for bits in 0u32..(1 << n) {
                if bits & 1 == 0 || bits.count_ones() != n / 2 {
                    continue;
                }
                let d = Dichotomy::new(m, (0..n).filter(|i| bits >> i & 1 == 1)).unwrap();
                let comp = d.complement();
                for p in d.find_quasipolarities().quasipolarities {
                    let mut img: Vec<u32> = d.members().iter().map(|&x| p.apply_raw(x)).collect();
                    img.sort();
                    assert_eq!(img, comp.members());
                }
            }
        }
    }

    #[test]
    fn induced_quasipolarity_examples() {
        let q = induced_quasipolarity(AffineMap::new(8, 1, z(16)), 0);
        assert_eq!(q, DualAffineMap::new(0, 8, 1, 0, z(16)));
        let q = induced_quasipolarity(AffineMap::new(1, 5, z(6)), 0);
        assert_eq!(q, DualAffineMap::new(0, 1, 5, 0, z(6)));
        let p = AffineMap::new(1, 5, z(6));
        let q = induced_quasipolarity(p, 2);
        assert_eq!(q, DualAffineMap::new(4, 1, 5, 0, z(6)));
        for b in 0..6 {
            assert_eq!(q.apply_raw(2, b), (2, p.apply_raw(b)));
        }
    }

    #[test]
    fn induced_quasipolarity_fixes_cantus_and_swaps_fiber() {
        let mut cases = vec![(u0(), 16u32), (Dichotomy::new(z(6), [0, 2, 3]).unwrap(), 6)];
        cases.push((preset("X12").unwrap().unwrap(), 12));
        cases.push((preset("U1").unwrap().unwrap(), 32));
        for (d, n) in cases {
            let p = d.polarity().unwrap();
            for x in 0..n {
                let q = induced_quasipolarity(p, x);
                for b in 0..n {
                    let (c, e) = q.apply_raw(x, b);
                    assert_eq!(c, x);
                    assert_eq!(d.contains(b), !d.contains(e));
                }
            }
        }
    }

    #[test]
    fn embedding_examples() {
        let x6 = Dichotomy::new(z(6), [0, 2, 3]).unwrap();
        let x12 = Dichotomy::new(z(12), [0, 1, 4, 5, 6, 9]).unwrap();
        let r = check_embedding(2, &x6, &x12).unwrap();
        assert!(r.valid() && r.translation_scales);
        let u1 = preset("U1").unwrap().unwrap();
        assert!(check_embedding(2, &u0(), &u1).unwrap().valid());
        for d in [x6.clone(), x12.clone(), u0(), u1.clone()] {
            let r = check_embedding(1, &d, &d).unwrap();
            assert!(r.valid() && r.translation_scales);
        }
        assert!(check_embedding(3, &x6, &x12).is_err());
        let weak = Dichotomy::new(z(6), [0, 1, 2]).unwrap();
        assert!(matches!(check_embedding(1, &weak, &weak), Err(Error::NotStrong(2))));
        // X6 does not sit inside U-levels of the wrong shape
        let bad = Dichotomy::new(z(12), [0, 1, 2, 3, 4, 5]);
        if let Ok(bad) = bad {
            assert!(check_embedding(2, &x6, &bad).map(|r| !r.valid()).unwrap_or(true));
        }
    }
}
