//! Continuous counterpoint on the circle of intervals, in exact rationals.
//!
//! Points of `S¹` are fractions of an octave in `[0, 1)`. Consonances are
//! `K = [0, 1/2)`, dissonances `D = [1/2, 1)`. The group `R/Z ⋉ Z_2` acts by
//! rotation `d ↦ d + t` or reflection `d ↦ t − d`; on the torus it acts
//! fiberwise, so every intersection on the torus is the full cantus circle
//! times an intersection of arcs in the interval fiber.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

fn half() -> Rational {
    Rational::new(1, 2)
}

fn quarter() -> Rational {
    Rational::new(1, 4)
}

/// Reduces into `[0, 1)`.
fn wrap(x: Rational) -> Rational {
    x - x.floor()
}

fn rational_string(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `3/8`, `1`, or a terminating decimal such as `0.375`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 15 {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: i64 = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let value = Rational::new(digits, 10i64.pow(frac.len() as u32));
    Ok(if neg { -value } else { value })
}

/// A point of the interval circle, as a fraction of the octave in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CirclePoint(Rational);

impl CirclePoint {
    pub fn new(position: Rational) -> Self {
        CirclePoint(wrap(position))
    }

    pub fn from_fraction(num: i64, den: i64) -> Self {
        CirclePoint::new(Rational::new(num, den))
    }

    /// `semitones / 12` of an octave, accepted only on the quarter-tone grid
    /// (multiples of 1/24 octave).
    pub fn from_semitones(semitones: Rational) -> Result<Self> {
        let octave = semitones / Rational::from_integer(12);
        if !(octave * Rational::from_integer(24)).is_integer() {
            return Err(Error::InvalidPoint(format!(
                "{} semitones is not a multiple of a quarter tone",
                rational_string(&semitones)
            )));
        }
        Ok(CirclePoint::new(octave))
    }

    pub fn position(self) -> Rational {
        self.0
    }
}

impl FromStr for CirclePoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s).map(CirclePoint::new)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational_string(&self.0))
    }
}

impl Serialize for CirclePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A linear piece of an [`ArcSet`] inside `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Segment {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

impl Segment {
    fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    fn contains(&self, p: Rational) -> bool {
        let above = p > self.lo || (p == self.lo && self.lo_closed);
        let below = p < self.hi || (p == self.hi && self.hi_closed);
        above && below
    }

    fn intersect(&self, other: &Segment) -> Segment {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo, self.lo_closed),
            Ordering::Less => (other.lo, other.lo_closed),
            Ordering::Equal => (self.lo, self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi, self.hi_closed),
            Ordering::Greater => (other.hi, other.hi_closed),
            Ordering::Equal => (self.hi, self.hi_closed && other.hi_closed),
        };
        Segment {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }
}

/// Places an interval `⟨lo, hi⟩` of length at most 1, given on the real line,
/// onto the circle, splitting it at `0` if it wraps.
fn place(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool, out: &mut Vec<Segment>) {
    let shift = lo.floor();
    let (lo, hi) = (lo - shift, hi - shift);
    if hi <= Rational::one() {
        out.push(Segment {
            lo,
            hi,
            lo_closed,
            hi_closed,
        });
    } else {
        out.push(Segment {
            lo,
            hi: Rational::one(),
            lo_closed,
            hi_closed: false,
        });
        out.push(Segment {
            lo: Rational::zero(),
            hi: hi - Rational::one(),
            lo_closed: true,
            hi_closed,
        });
    }
}

/// A circle arc from `start` counterclockwise to `end`.
///
/// `start == end` denotes a single point when both ends are closed and the
/// whole circle otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arc {
    pub start: CirclePoint,
    pub end: CirclePoint,
    pub start_closed: bool,
    pub end_closed: bool,
}

impl Arc {
    pub fn new(start: CirclePoint, end: CirclePoint, start_closed: bool, end_closed: bool) -> Self {
        Arc {
            start,
            end,
            start_closed,
            end_closed,
        }
    }

    pub fn is_point(&self) -> bool {
        self.start == self.end && self.start_closed && self.end_closed
    }

    pub fn length(&self) -> Rational {
        if self.is_point() {
            return Rational::zero();
        }
        let l = wrap(self.end.0 - self.start.0);
        if l.is_zero() {
            Rational::one()
        } else {
            l
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.start);
        }
        write!(
            f,
            "{}{},{}{}",
            if self.start_closed { '[' } else { '(' },
            self.start,
            if self.end.0.is_zero() && !self.end_closed && !self.start.0.is_zero() {
                "1".to_string()
            } else {
                self.end.to_string()
            },
            if self.end_closed { ']' } else { ')' }
        )
    }
}

/// A finite union of disjoint circle arcs with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ArcSet {
    segments: Vec<Segment>,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet::default()
    }

    pub fn full() -> Self {
        ArcSet::from_interval(Rational::zero(), Rational::one(), true, false)
    }

    /// Consonances `[0, 1/2)`.
    pub fn consonances() -> Self {
        ArcSet::from_interval(Rational::zero(), half(), true, false)
    }

    /// Dissonances `[1/2, 1)`.
    pub fn dissonances() -> Self {
        ArcSet::consonances().complement()
    }

    /// The image on the circle of the real interval from `lo` to `hi`
    /// (`hi − lo ≤ 1`).
    pub fn from_interval(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Self {
        assert!(hi - lo <= Rational::one(), "interval longer than the circle");
        let mut segs = Vec::new();
        place(lo, hi, lo_closed, hi_closed, &mut segs);
        ArcSet::normalize(segs)
    }

    pub fn from_arcs(arcs: &[Arc]) -> Self {
        let mut segs = Vec::new();
        for a in arcs {
            let lo = a.start.0;
            place(lo, lo + a.length(), a.start_closed, a.end_closed, &mut segs);
        }
        ArcSet::normalize(segs)
    }

    pub fn point(p: CirclePoint) -> Self {
        ArcSet::from_interval(p.0, p.0, true, true)
    }

    fn normalize(raw: Vec<Segment>) -> Self {
        let mut segs: Vec<Segment> = Vec::with_capacity(raw.len() + 1);
        for mut s in raw {
            if s.hi == Rational::one() && s.hi_closed {
                // the point 1 is the point 0
                s.hi_closed = false;
                segs.push(Segment {
                    lo: Rational::zero(),
                    hi: Rational::zero(),
                    lo_closed: true,
                    hi_closed: true,
                });
            }
            if s.lo == Rational::one() {
                continue;
            }
            segs.push(s);
        }
        segs.retain(|s| !s.is_empty());
        segs.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut merged: Vec<Segment> = Vec::with_capacity(segs.len());
        for s in segs {
            if let Some(last) = merged.last_mut() {
                let touches = s.lo < last.hi || (s.lo == last.hi && (last.hi_closed || s.lo_closed));
                if touches {
                    match s.hi.cmp(&last.hi) {
                        Ordering::Greater => {
                            last.hi = s.hi;
                            last.hi_closed = s.hi_closed;
                        }
                        Ordering::Equal => last.hi_closed |= s.hi_closed,
                        Ordering::Less => {}
                    }
                    if s.lo == last.lo {
                        last.lo_closed |= s.lo_closed;
                    }
                    continue;
                }
            }
            merged.push(s);
        }
        ArcSet { segments: merged }
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn contains(&self, p: CirclePoint) -> bool {
        self.segments.iter().any(|s| s.contains(p.0))
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        let mut raw = self.segments.clone();
        raw.extend_from_slice(&other.segments);
        ArcSet::normalize(raw)
    }

    pub fn intersect(&self, other: &ArcSet) -> ArcSet {
        let mut raw = Vec::new();
        for a in &self.segments {
            for b in &other.segments {
                let s = a.intersect(b);
                if !s.is_empty() {
                    raw.push(s);
                }
            }
        }
        ArcSet::normalize(raw)
    }

    pub fn complement(&self) -> ArcSet {
        let mut raw = Vec::new();
        let (mut at, mut closed) = (Rational::zero(), true);
        for s in &self.segments {
            raw.push(Segment {
                lo: at,
                hi: s.lo,
                lo_closed: closed,
                hi_closed: !s.lo_closed,
            });
            at = s.hi;
            closed = !s.hi_closed;
        }
        raw.push(Segment {
            lo: at,
            hi: Rational::one(),
            lo_closed: closed,
            hi_closed: false,
        });
        ArcSet::normalize(raw)
    }

    pub fn difference(&self, other: &ArcSet) -> ArcSet {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &ArcSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Total length; boundary points do not contribute.
    pub fn measure(&self) -> Rational {
        self.segments.iter().map(|s| s.hi - s.lo).sum()
    }

    /// Connected components on the circle.
    pub fn components(&self) -> usize {
        let n = self.segments.len();
        if n >= 2 && self.wraps() {
            n - 1
        } else {
            n
        }
    }

    fn wraps(&self) -> bool {
        match (self.segments.first(), self.segments.last()) {
            (Some(first), Some(last)) => first.lo.is_zero() && first.lo_closed && last.hi == Rational::one(),
            _ => false,
        }
    }

    /// The canonical arcs, in order of their start points on `[0, 1)`, with
    /// an arc through `0` listed last.
    pub fn arcs(&self) -> Vec<Arc> {
        let to_arc = |s: &Segment| Arc {
            start: CirclePoint::new(s.lo),
            end: CirclePoint::new(s.hi),
            start_closed: s.lo_closed,
            end_closed: s.hi_closed,
        };
        let segs = &self.segments;
        if segs.len() >= 2 && self.wraps() {
            let (first, last) = (segs[0], segs[segs.len() - 1]);
            let mut arcs: Vec<Arc> = segs[1..segs.len() - 1].iter().map(to_arc).collect();
            arcs.push(Arc {
                start: CirclePoint::new(last.lo),
                end: CirclePoint::new(first.hi),
                start_closed: last.lo_closed,
                end_closed: first.hi_closed,
            });
            arcs
        } else {
            segs.iter().map(to_arc).collect()
        }
    }
}

impl fmt::Display for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self.arcs().iter().map(Arc::to_string).collect();
        f.write_str(&parts.join("∪"))
    }
}

impl Serialize for ArcSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.arcs())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// `v = +1`, rotation.
    Rotation,
    /// `v = −1`, reflection.
    Reflection,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Rotation => 1,
            Orientation::Reflection => -1,
        }
    }
}

/// `e^t·v` with `v = ±1`: `d ↦ v·d + t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CircleSymmetry {
    pub t: CirclePoint,
    pub v: Orientation,
}

impl CircleSymmetry {
    pub fn new(t: Rational, v: Orientation) -> Self {
        CircleSymmetry {
            t: CirclePoint::new(t),
            v,
        }
    }

    pub fn identity() -> Self {
        CircleSymmetry::new(Rational::zero(), Orientation::Rotation)
    }

    /// The polarity `e^(1/2)·1` of the consonance dichotomy.
    pub fn polarity() -> Self {
        CircleSymmetry::new(half(), Orientation::Rotation)
    }

    pub fn apply_point(&self, p: CirclePoint) -> CirclePoint {
        CirclePoint::new(Rational::from_integer(self.v.sign()) * p.0 + self.t.0)
    }

    pub fn inverse(&self) -> CircleSymmetry {
        match self.v {
            Orientation::Rotation => CircleSymmetry::new(-self.t.0, Orientation::Rotation),
            Orientation::Reflection => *self,
        }
    }
}

impl fmt::Display for CircleSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.t.0.is_zero() {
            write!(f, "e^({}).", self.t)?;
        }
        f.write_str(match self.v {
            Orientation::Rotation => "1",
            Orientation::Reflection => "(-1)",
        })
    }
}

impl Serialize for CircleSymmetry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Image of an arc set under `g`. Reflections swap the closure flags of each
/// arc's ends.
pub fn arc_apply(g: &CircleSymmetry, set: &ArcSet) -> ArcSet {
    let t = g.t.0;
    let mut raw = Vec::with_capacity(set.segments.len() + 1);
    for s in &set.segments {
        match g.v {
            Orientation::Rotation => place(s.lo + t, s.hi + t, s.lo_closed, s.hi_closed, &mut raw),
            Orientation::Reflection => place(t - s.hi, t - s.lo, s.hi_closed, s.lo_closed, &mut raw),
        }
    }
    ArcSet::normalize(raw)
}

pub fn arc_intersect(a: &ArcSet, b: &ArcSet) -> ArcSet {
    a.intersect(b)
}

pub fn arc_measure(a: &ArcSet) -> Rational {
    a.measure()
}

pub fn arc_components(a: &ArcSet) -> usize {
    a.components()
}

fn check_consonant(k: CirclePoint) -> Result<()> {
    if k.0 >= half() {
        return Err(Error::InvalidPoint(format!(
            "{k} is not a consonance (must lie in [0,1/2))"
        )));
    }
    Ok(())
}

/// Parameters `t` for which `e^t·v` sends some dissonance onto `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibleRegion {
    pub k: CirclePoint,
    /// `v = +1`: `t ∈ (k, k+1/2]`.
    pub rotation: ArcSet,
    /// `v = −1`: `t ∈ [k−1/2, k)`.
    pub reflection: ArcSet,
}

impl AdmissibleRegion {
    pub fn for_orientation(&self, v: Orientation) -> &ArcSet {
        match v {
            Orientation::Rotation => &self.rotation,
            Orientation::Reflection => &self.reflection,
        }
    }

    pub fn contains(&self, g: &CircleSymmetry) -> bool {
        self.for_orientation(g.v).contains(g.t)
    }
}

pub fn admissible_region(k: CirclePoint) -> Result<AdmissibleRegion> {
    check_consonant(k)?;
    let k0 = k.0;
    Ok(AdmissibleRegion {
        k,
        rotation: ArcSet::from_interval(k0, k0 + half(), false, true),
        reflection: ArcSet::from_interval(k0 - half(), k0, true, false),
    })
}

/// `(0, k) ∈ g(D[ε])`, decided pointwise: `g⁻¹(k) ∈ D`.
pub fn is_admissible(g: &CircleSymmetry, k: CirclePoint) -> bool {
    g.inverse().apply_point(k).0 >= half()
}

/// Fiber measure of `g(K) ∩ K`; the torus measure is the same number since the
/// cantus circle contributes a factor of 1.
pub fn intersection_measure(g: &CircleSymmetry) -> Rational {
    fiber_intersection(g).measure()
}

/// `g(K) ∩ K` in the interval fiber.
pub fn fiber_intersection(g: &CircleSymmetry) -> ArcSet {
    let k = ArcSet::consonances();
    arc_apply(g, &k).intersect(&k)
}

/// First Betti number of `g(K[ε]) ∩ K[ε] = S¹ × (g(K) ∩ K)`: one circle per
/// fiber component.
pub fn h1_rank(g: &CircleSymmetry) -> usize {
    fiber_intersection(g).components()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Maximizers {
    pub k: CirclePoint,
    #[serde(serialize_with = "ser_rational")]
    pub measure: Rational,
    pub symmetries: Vec<CircleSymmetry>,
}

fn ser_rational<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(x))
}

/// Parameters `t` where an end of `e^t·v(K)` meets an end of `K`; between
/// consecutive ones the intersection measure is linear in `t`.
fn breakpoints(v: Orientation) -> Vec<Rational> {
    let ends = [Rational::zero(), half()];
    let sign = Rational::from_integer(v.sign());
    let mut out: Vec<Rational> = ends
        .iter()
        .flat_map(|&e| ends.iter().map(move |&e2| wrap(e2 - sign * e)))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Attained maxima of [`intersection_measure`] over the admissible
/// symmetries of `k`.
///
/// The objective is continuous and piecewise linear in `t`, so on the
/// closure of each admissible cell its supremum sits at a cell end. Only
/// ends that are themselves admissible are attained; the result is an error
/// if some supremum is approached but never reached or if a whole cell of
/// maximizers exists.
pub fn maximizers(k: CirclePoint) -> Result<Maximizers> {
    let region = admissible_region(k)?;
    let mut attained: Vec<(Rational, CircleSymmetry)> = Vec::new();
    let mut supremum = Rational::zero();
    let mut plateau: Option<(Rational, CircleSymmetry)> = None;
    for v in [Orientation::Reflection, Orientation::Rotation] {
        let allowed = region.for_orientation(v);
        let mut cuts = breakpoints(v);
        for seg in &allowed.segments {
            cuts.push(seg.lo);
            cuts.push(wrap(seg.hi));
        }
        cuts.sort();
        cuts.dedup();
        let mut ends = cuts.clone();
        ends.push(Rational::one());
        for w in ends.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let mid = CirclePoint::new((lo + hi) / 2);
            if !allowed.contains(mid) {
                continue;
            }
            let f_lo = intersection_measure(&CircleSymmetry::new(lo, v));
            let f_hi = intersection_measure(&CircleSymmetry::new(hi, v));
            supremum = supremum.max(f_lo).max(f_hi);
            if f_lo == f_hi && intersection_measure(&CircleSymmetry::new(mid.0, v)) == f_lo {
                plateau = Some((f_lo, CircleSymmetry::new(mid.0, v)));
            }
        }
        for &t in &cuts {
            let g = CircleSymmetry::new(t, v);
            if allowed.contains(g.t) {
                let f = intersection_measure(&g);
                supremum = supremum.max(f);
                attained.push((f, g));
            }
        }
    }
    let best = attained
        .iter()
        .map(|(f, _)| *f)
        .max()
        .ok_or_else(|| Error::InvalidPoint(format!("no admissible symmetry for {k}")))?;
    if best < supremum {
        return Err(Error::InvalidPoint(format!(
            "measure supremum {} is not attained at {k}",
            rational_string(&supremum)
        )));
    }
    if let Some((f, g)) = plateau {
        if f == best {
            return Err(Error::InvalidPoint(format!("maximizers form a continuum through {g}")));
        }
    }
    let mut symmetries: Vec<CircleSymmetry> = attained
        .into_iter()
        .filter(|(f, _)| *f == best)
        .map(|(_, g)| g)
        .collect();
    symmetries.sort();
    symmetries.dedup();
    Ok(Maximizers {
        k,
        measure: best,
        symmetries,
    })
}

/// Union of `g(K) ∩ K` over every maximizer `g` of `k`.
pub fn continuous_successors(k: CirclePoint) -> Result<ArcSet> {
    let m = maximizers(k)?;
    Ok(m.symmetries
        .iter()
        .map(fiber_intersection)
        .fold(ArcSet::empty(), |acc, s| acc.union(&s)))
}

/// Admissible symmetries of `k` at the breakpoints, at the middle of every
/// admissible cell, and on a regular grid of `samples` parameters.
pub fn admissible_samples(k: CirclePoint, samples: i64) -> Result<Vec<CircleSymmetry>> {
    let region = admissible_region(k)?;
    let mut out = Vec::new();
    for v in [Orientation::Reflection, Orientation::Rotation] {
        let allowed = region.for_orientation(v);
        let mut ts: Vec<Rational> = breakpoints(v);
        for seg in &allowed.segments {
            ts.extend([seg.lo, seg.hi, (seg.lo + seg.hi) / 2]);
        }
        ts.extend((0..samples).map(|i| Rational::new(i, samples)));
        for t in ts {
            let g = CircleSymmetry::new(t, v);
            if allowed.contains(g.t) {
                out.push(g);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: &'static str,
    pub holds: bool,
    /// Grid points where the claim fails.
    pub failures: Vec<CirclePoint>,
}

/// Checks the qualitative features of the measure-maximizing continuous
/// counterpoint over a grid of consonances.
///
/// The fourth entry is a computable stand-in for "the discantus cannot move
/// continuously": no consonance is ever its own admitted successor.
pub fn verify_claims(grid: &[CirclePoint]) -> Result<Vec<Claim>> {
    let minor_third = CirclePoint::new(quarter());
    let consonances = ArcSet::consonances();
    let mut claims = [
        ("no culs-de-sac", Vec::new()),
        ("only the minor third reaches every other consonance", Vec::new()),
        ("smaller than the minor third move up, larger move down", Vec::new()),
        ("no consonance is its own successor", Vec::new()),
    ];
    for &k in grid {
        let succ = continuous_successors(k)?;
        if succ.is_empty() {
            claims[0].1.push(k);
        }
        let others = consonances.difference(&ArcSet::point(k));
        if others.is_subset(&succ) != (k == minor_third) {
            claims[1].1.push(k);
        }
        let expected_side = match k.0.cmp(&quarter()) {
            Ordering::Less => Some(ArcSet::from_interval(k.0, half(), false, false)),
            Ordering::Greater => Some(ArcSet::from_interval(Rational::zero(), k.0, true, false)),
            Ordering::Equal => None,
        };
        if let Some(side) = expected_side {
            if !succ.is_subset(&side) {
                claims[2].1.push(k);
            }
        }
        if succ.contains(k) {
            claims[3].1.push(k);
        }
    }
    Ok(claims
        .into_iter()
        .map(|(name, failures)| Claim {
            name,
            holds: failures.is_empty(),
            failures,
        })
        .collect())
}

/// `j/den` for `j` in `0..count`.
pub fn grid(den: i64, count: i64) -> Vec<CirclePoint> {
    (0..count).map(|j| CirclePoint::from_fraction(j, den)).collect()
}
