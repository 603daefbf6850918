//! Arithmetic in `Z_n`, the dual numbers `Z_n[ε]`, and their affine groups.
//!
//! Every value carries its modulus and is stored fully reduced. Binary
//! operations between values of different moduli fail with
//! [`Error::ModulusMismatch`].

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A ring `Z_n` with `n >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Modulus(u32);

impl Modulus {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidModulus(n));
        }
        Ok(Modulus(n))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn reduce(self, x: u64) -> u32 {
        (x % self.0 as u64) as u32
    }

    /// Reduces a signed integer into `[0, n)`.
    #[inline]
    pub fn reduce_signed(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, x: u32, y: u32) -> u32 {
        self.reduce(x as u64 + y as u64)
    }

    #[inline]
    pub fn sub(self, x: u32, y: u32) -> u32 {
        self.reduce(x as u64 + self.0 as u64 - (y % self.0) as u64)
    }

    #[inline]
    pub fn mul(self, x: u32, y: u32) -> u32 {
        self.reduce(x as u64 * y as u64)
    }

    #[inline]
    pub fn neg(self, x: u32) -> u32 {
        self.sub(0, x)
    }

    pub fn is_unit(self, x: u32) -> bool {
        (x % self.0).gcd(&self.0) == 1
    }

    /// Multiplicative inverse, if `x` is a unit.
    pub fn inverse(self, x: u32) -> Option<u32> {
        let n = self.0 as i64;
        let egcd = (x as i64 % n).extended_gcd(&n);
        if egcd.gcd != 1 {
            return None;
        }
        Some(self.reduce_signed(egcd.x))
    }

    /// The units of `Z_n` in increasing order.
    pub fn units(self) -> Vec<u32> {
        (1..self.0).filter(|&x| self.is_unit(x)).collect()
    }

    pub fn elements(self) -> std::ops::Range<u32> {
        0..self.0
    }

    fn check(self, other: Modulus) -> Result<()> {
        if self != other {
            return Err(Error::ModulusMismatch {
                left: self.0,
                right: other.0,
            });
        }
        Ok(())
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_{}", self.0)
    }
}

/// An element of `Z_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u32,
    modulus: Modulus,
}

impl Residue {
    pub fn new(value: u64, modulus: Modulus) -> Self {
        Residue {
            value: modulus.reduce(value),
            modulus,
        }
    }

    pub fn from_signed(value: i64, modulus: Modulus) -> Self {
        Residue {
            value: modulus.reduce_signed(value),
            modulus,
        }
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// A dual number `a + ε·b` with `ε² = 0`.
///
/// In counterpoint terms `a` is the cantus firmus and `b` the interval up to
/// the discantus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualNumber {
    modulus: Modulus,
    a: u32,
    b: u32,
}

impl DualNumber {
    pub fn new(a: u64, b: u64, modulus: Modulus) -> Self {
        DualNumber {
            modulus,
            a: modulus.reduce(a),
            b: modulus.reduce(b),
        }
    }

    pub fn cantus(self) -> u32 {
        self.a
    }

    pub fn interval(self) -> u32 {
        self.b
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    pub fn pair(self) -> [u32; 2] {
        [self.a, self.b]
    }
}

impl fmt::Display for DualNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+e.{}", self.a, self.b)
    }
}

/// `(a+εb)(c+εd) = ac + ε(ad+bc)`.
pub fn dual_mul(x: DualNumber, y: DualNumber) -> Result<DualNumber> {
    x.modulus.check(y.modulus)?;
    let m = x.modulus;
    Ok(DualNumber {
        modulus: m,
        a: m.mul(x.a, y.a),
        b: m.add(m.mul(x.a, y.b), m.mul(x.b, y.a)),
    })
}

pub fn dual_add(x: DualNumber, y: DualNumber) -> Result<DualNumber> {
    x.modulus.check(y.modulus)?;
    let m = x.modulus;
    Ok(DualNumber {
        modulus: m,
        a: m.add(x.a, y.a),
        b: m.add(x.b, y.b),
    })
}

/// The affine map `e^u·v : x ↦ v·x + u` on `Z_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    modulus: Modulus,
    u: u32,
    v: u32,
}

impl AffineMap {
    pub fn new(translation: u64, linear: u64, modulus: Modulus) -> Self {
        AffineMap {
            modulus,
            u: modulus.reduce(translation),
            v: modulus.reduce(linear),
        }
    }

    pub fn identity(modulus: Modulus) -> Self {
        AffineMap::new(0, 1, modulus)
    }

    pub fn translation(self) -> u32 {
        self.u
    }

    pub fn linear(self) -> u32 {
        self.v
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    /// A symmetry is an affine map with invertible linear part.
    pub fn is_symmetry(self) -> bool {
        self.modulus.is_unit(self.v)
    }

    #[inline]
    pub fn apply_raw(self, x: u32) -> u32 {
        self.modulus.add(self.modulus.mul(self.v, x), self.u)
    }

    pub fn apply(self, x: Residue) -> Result<Residue> {
        self.modulus.check(x.modulus)?;
        Ok(Residue {
            value: self.apply_raw(x.value),
            modulus: self.modulus,
        })
    }

    /// `self ∘ other`.
    pub fn compose(self, other: AffineMap) -> Result<AffineMap> {
        self.modulus.check(other.modulus)?;
        let m = self.modulus;
        Ok(AffineMap {
            modulus: m,
            u: m.add(m.mul(self.v, other.u), self.u),
            v: m.mul(self.v, other.v),
        })
    }

    pub fn invert(self) -> Result<AffineMap> {
        let m = self.modulus;
        let vi = m.inverse(self.v).ok_or(Error::NotInvertible {
            value: self.v,
            modulus: m.get(),
        })?;
        Ok(AffineMap {
            modulus: m,
            u: m.neg(m.mul(vi, self.u)),
            v: vi,
        })
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.u != 0 {
            write!(f, "e^({}).", self.u)?;
        }
        write!(f, "{}", self.v)
    }
}

/// The affine map `e^(ta+ε·tb)·(va+ε·vb)` on `Z_n[ε]`:
/// `c+εd ↦ (va+ε·vb)(c+εd) + (ta+ε·tb)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DualAffineMap {
    modulus: Modulus,
    ta: u32,
    tb: u32,
    va: u32,
    vb: u32,
}

impl DualAffineMap {
    pub fn new(ta: u64, tb: u64, va: u64, vb: u64, modulus: Modulus) -> Self {
        DualAffineMap {
            modulus,
            ta: modulus.reduce(ta),
            tb: modulus.reduce(tb),
            va: modulus.reduce(va),
            vb: modulus.reduce(vb),
        }
    }

    pub fn identity(modulus: Modulus) -> Self {
        DualAffineMap::new(0, 0, 1, 0, modulus)
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    /// `(ta, tb, va, vb)`, also the canonical ordering key.
    pub fn parts(self) -> (u32, u32, u32, u32) {
        (self.ta, self.tb, self.va, self.vb)
    }

    pub fn is_invertible(self) -> bool {
        self.modulus.is_unit(self.va)
    }

    #[inline]
    pub fn apply_raw(self, c: u32, d: u32) -> (u32, u32) {
        let m = self.modulus;
        let a = m.add(m.mul(self.va, c), self.ta);
        let b = m.reduce(self.tb as u64 + self.vb as u64 * c as u64 + self.va as u64 * d as u64);
        (a, b)
    }

    pub fn apply(self, x: DualNumber) -> Result<DualNumber> {
        self.modulus.check(x.modulus)?;
        let prod = dual_mul(self.linear_part(), x)?;
        dual_add(prod, self.translation_part())
    }

    pub fn translation_part(self) -> DualNumber {
        DualNumber {
            modulus: self.modulus,
            a: self.ta,
            b: self.tb,
        }
    }

    pub fn linear_part(self) -> DualNumber {
        DualNumber {
            modulus: self.modulus,
            a: self.va,
            b: self.vb,
        }
    }

    /// `self ∘ other`.
    pub fn compose(self, other: DualAffineMap) -> Result<DualAffineMap> {
        self.modulus.check(other.modulus)?;
        let lin = dual_mul(self.linear_part(), other.linear_part())?;
        let trans = dual_add(
            dual_mul(self.linear_part(), other.translation_part())?,
            self.translation_part(),
        )?;
        Ok(DualAffineMap {
            modulus: self.modulus,
            ta: trans.a,
            tb: trans.b,
            va: lin.a,
            vb: lin.b,
        })
    }

    pub fn invert(self) -> Result<DualAffineMap> {
        let m = self.modulus;
        let ia = m.inverse(self.va).ok_or(Error::NotInvertible {
            value: self.va,
            modulus: m.get(),
        })?;
        // (va+ε·vb)⁻¹ = va⁻¹ − ε·vb·va⁻²
        let lin_inv = DualNumber {
            modulus: m,
            a: ia,
            b: m.neg(m.mul(self.vb, m.mul(ia, ia))),
        };
        let shifted = dual_mul(lin_inv, self.translation_part())?;
        Ok(DualAffineMap {
            modulus: m,
            ta: m.neg(shifted.a),
            tb: m.neg(shifted.b),
            va: lin_inv.a,
            vb: lin_inv.b,
        })
    }
}

fn fmt_dual_part(f: &mut fmt::Formatter<'_>, a: u32, b: u32) -> fmt::Result {
    match (a, b) {
        (a, 0) => write!(f, "{a}"),
        (0, b) => write!(f, "e.{b}"),
        (a, b) => write!(f, "{a}+e.{b}"),
    }
}

impl fmt::Display for DualAffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ta != 0 || self.tb != 0 {
            f.write_str("e^(")?;
            fmt_dual_part(f, self.ta, self.tb)?;
            f.write_str(").")?;
        }
        if self.vb != 0 {
            f.write_str("(")?;
            fmt_dual_part(f, self.va, self.vb)?;
            f.write_str(")")
        } else {
            write!(f, "{}", self.va)
        }
    }
}
