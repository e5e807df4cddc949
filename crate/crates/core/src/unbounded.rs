//! Representations of the linearly oriented quiver with possibly infinite
//! support, handled through their barcodes.
//!
//! A [`SymbolicBarcode`] holds finitely many bars with integer or infinite
//! endpoints plus any number of periodic "dust" sets, each point of which is a
//! length-zero bar. `K'` (one-dimensional everywhere, zero maps) is dust of
//! period 1; `K_ℤ` is the single bar `(−∞, +∞)`.
//!
//! The ideal generated by `{0, K'}` consists of representations whose bars
//! are all bounded. [`check_derivation`] replays a certificate of constructions
//! inside that ideal and rejects any step whose claimed result has an
//! unbounded bar, so no accepted certificate ever reaches `K_ℤ`.
//!
//! The windowed checks at the end test the lemmas behind those rules on finite
//! windows with all arrows pointing right.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::barcode::{base_change_with_iso, decompose, random_barcode, Barcode, Interval};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::quiver::{
    extension, hom_basis, interval_rep, random_extension, tensor, Dir, Morphism, QuiverError, QuiverWindow,
    Representation,
};
use crate::report::Report;

/// Longest stretch of integers scanned when comparing periodic data.
pub const MAX_SCAN: i64 = 1 << 20;
/// Finite dust with at most this many points is expanded into point bars.
const EXPAND_LIMIT: i64 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnboundedError {
    #[error("malformed interval ({a}, {b})")]
    Malformed { a: Bound, b: Bound },
    #[error("dust period must be positive")]
    ZeroPeriod,
    #[error("periodic data too large to compare (scan of {0} points)")]
    ScanTooLong(i128),
    #[error("orientation must point right everywhere, got {0}")]
    NotLinear(String),
    #[error("bar {0} touches the window edge")]
    TouchesEdge(Interval),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// An integer or one of the two infinities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Bound {
    pub fn finite(self) -> Option<i64> {
        match self {
            Bound::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Bound::Finite(_))
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::NegInf => f.write_str("-inf"),
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::PosInf => f.write_str("+inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(v) => serializer.serialize_i64(*v),
            Bound::NegInf => serializer.serialize_str("-inf"),
            Bound::PosInf => serializer.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Ok(Bound::Finite(v)),
            Raw::Str(s) => match s.as_str() {
                "-inf" => Ok(Bound::NegInf),
                "+inf" | "inf" => Ok(Bound::PosInf),
                other => Err(serde::de::Error::custom(format!("bad bound {other:?}"))),
            },
        }
    }
}

/// A bar `[a, b]` whose endpoints may be infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtendedInterval {
    a: Bound,
    b: Bound,
}

impl ExtendedInterval {
    pub fn new(a: Bound, b: Bound) -> Result<Self, UnboundedError> {
        if a == Bound::PosInf || b == Bound::NegInf || a > b {
            return Err(UnboundedError::Malformed { a, b });
        }
        Ok(ExtendedInterval { a, b })
    }

    pub fn finite(a: i64, b: i64) -> Result<Self, UnboundedError> {
        Self::new(Bound::Finite(a), Bound::Finite(b))
    }

    /// `(−∞, +∞)`.
    pub fn everything() -> Self {
        ExtendedInterval {
            a: Bound::NegInf,
            b: Bound::PosInf,
        }
    }

    pub fn a(&self) -> Bound {
        self.a
    }

    pub fn b(&self) -> Bound {
        self.b
    }

    pub fn is_bounded(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }

    pub fn is_point(&self) -> bool {
        self.a.is_finite() && self.a == self.b
    }

    pub fn contains_point(&self, x: i64) -> bool {
        self.a <= Bound::Finite(x) && Bound::Finite(x) <= self.b
    }

    pub fn contains(&self, other: &ExtendedInterval) -> bool {
        self.a <= other.a && other.b <= self.b
    }

    pub fn intersect(&self, other: &ExtendedInterval) -> Option<ExtendedInterval> {
        let (a, b) = (self.a.max(other.a), self.b.min(other.b));
        (a <= b).then_some(ExtendedInterval { a, b })
    }
}

impl From<Interval> for ExtendedInterval {
    fn from(i: Interval) -> Self {
        ExtendedInterval {
            a: Bound::Finite(i.a),
            b: Bound::Finite(i.b),
        }
    }
}

impl fmt::Display for ExtendedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// The points `x ≡ offset (mod period)` with `lo ≤ x ≤ hi`, one length-zero bar each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dust {
    pub offset: i64,
    pub period: u64,
    #[serde(default = "neg_inf")]
    pub lo: Bound,
    #[serde(default = "pos_inf")]
    pub hi: Bound,
}

fn neg_inf() -> Bound {
    Bound::NegInf
}

fn pos_inf() -> Bound {
    Bound::PosInf
}

impl Dust {
    pub fn new(offset: i64, period: u64, lo: Bound, hi: Bound) -> Result<Self, UnboundedError> {
        if period == 0 {
            return Err(UnboundedError::ZeroPeriod);
        }
        Ok(Dust { offset, period, lo, hi })
    }

    /// Every integer.
    pub fn everywhere() -> Self {
        Dust {
            offset: 0,
            period: 1,
            lo: Bound::NegInf,
            hi: Bound::PosInf,
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= Bound::Finite(x)
            && Bound::Finite(x) <= self.hi
            && (x as i128 - self.offset as i128).rem_euclid(self.period as i128) == 0
    }

    fn first_at_or_after(&self, x: i64) -> i64 {
        let p = self.period as i128;
        let r = (self.offset as i128 - x as i128).rem_euclid(p);
        (x as i128 + r) as i64
    }

    fn last_at_or_before(&self, x: i64) -> i64 {
        let p = self.period as i128;
        let r = (x as i128 - self.offset as i128).rem_euclid(p);
        (x as i128 - r) as i64
    }

    /// Reduced offset and finite ends moved onto members; `None` when empty.
    pub fn canonical(&self) -> Option<Dust> {
        let offset = self.offset.rem_euclid(self.period as i64);
        let lo = match self.lo {
            Bound::Finite(v) => Bound::Finite(self.first_at_or_after(v)),
            b => b,
        };
        let hi = match self.hi {
            Bound::Finite(v) => Bound::Finite(self.last_at_or_before(v)),
            b => b,
        };
        if lo > hi || lo == Bound::PosInf || hi == Bound::NegInf {
            return None;
        }
        Some(Dust {
            offset,
            period: self.period,
            lo,
            hi,
        })
    }

    /// Dust restricted to a bar.
    pub fn restrict(&self, bar: &ExtendedInterval) -> Option<Dust> {
        Dust {
            lo: self.lo.max(bar.a),
            hi: self.hi.min(bar.b),
            ..*self
        }
        .canonical()
    }

    /// Common points of two dust sets, by the Chinese remainder theorem.
    pub fn intersect(&self, other: &Dust) -> Option<Dust> {
        let (p, q) = (self.period as i128, other.period as i128);
        let g = p.gcd(&q);
        let diff = other.offset as i128 - self.offset as i128;
        if diff.rem_euclid(g) != 0 {
            return None;
        }
        let l = p / g * q;
        // x = self.offset + p·k with p·k ≡ diff (mod q).
        let (pg, qg) = (p / g, q / g);
        let k = if qg == 1 { 0 } else { (diff / g).rem_euclid(qg) * mod_inverse(pg.rem_euclid(qg), qg) % qg };
        let x = (self.offset as i128 + p * k).rem_euclid(l);
        Dust {
            offset: x as i64,
            period: l as u64,
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        }
        .canonical()
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

fn mod_inverse(a: i128, m: i128) -> i128 {
    let e = a.extended_gcd(&m);
    e.x.rem_euclid(m)
}

/// Finitely many extended bars plus periodic dust.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolicBarcode {
    bars: BTreeMap<ExtendedInterval, usize>,
    dust: Vec<Dust>,
}

#[derive(Serialize, Deserialize)]
struct SymbolicBarJson {
    a: Bound,
    b: Bound,
    mult: usize,
}

#[derive(Serialize, Deserialize)]
struct SymbolicJson {
    #[serde(default)]
    bars: Vec<SymbolicBarJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    dust: Vec<Dust>,
}

impl Serialize for SymbolicBarcode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SymbolicJson {
            bars: self
                .bars
                .iter()
                .map(|(i, m)| SymbolicBarJson { a: i.a, b: i.b, mult: *m })
                .collect(),
            dust: self.dust.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymbolicBarcode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = SymbolicJson::deserialize(deserializer)?;
        let mut out = SymbolicBarcode::zero();
        for bar in raw.bars {
            let i = ExtendedInterval::new(bar.a, bar.b).map_err(serde::de::Error::custom)?;
            out.insert(i, bar.mult);
        }
        for d in raw.dust {
            let d = Dust::new(d.offset, d.period, d.lo, d.hi).map_err(serde::de::Error::custom)?;
            out.push_dust(d);
        }
        Ok(out)
    }
}

impl SymbolicBarcode {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `K'`: a length-zero bar at every integer.
    pub fn k_prime() -> Self {
        SymbolicBarcode {
            bars: BTreeMap::new(),
            dust: vec![Dust::everywhere()],
        }
    }

    /// `K_ℤ`.
    pub fn k_z() -> Self {
        Self::from_bars([(ExtendedInterval::everything(), 1)])
    }

    pub fn from_bars(bars: impl IntoIterator<Item = (ExtendedInterval, usize)>) -> Self {
        let mut out = Self::zero();
        for (i, m) in bars {
            out.insert(i, m);
        }
        out
    }

    pub fn from_barcode(b: &Barcode) -> Self {
        Self::from_bars(b.iter().map(|(i, m)| (i.into(), m)))
    }

    pub fn insert(&mut self, bar: ExtendedInterval, mult: usize) {
        if mult > 0 {
            *self.bars.entry(bar).or_insert(0) += mult;
        }
    }

    pub fn push_dust(&mut self, d: Dust) {
        self.dust.push(d);
    }

    pub fn bars(&self) -> impl Iterator<Item = (ExtendedInterval, usize)> + '_ {
        self.bars.iter().map(|(i, m)| (*i, *m))
    }

    pub fn dust(&self) -> &[Dust] {
        &self.dust
    }

    /// Every bar has finite endpoints; dust bars have length zero and always do.
    pub fn is_bounded(&self) -> bool {
        self.bars.keys().all(ExtendedInterval::is_bounded)
    }

    /// Drops empty dust, expands small finite dust into point bars, sorts.
    pub fn canonical(&self) -> Self {
        let mut out = SymbolicBarcode {
            bars: self.bars.clone(),
            dust: Vec::new(),
        };
        for d in self.dust.iter().filter_map(Dust::canonical) {
            match (d.lo, d.hi) {
                (Bound::Finite(lo), Bound::Finite(hi)) if (hi - lo) / d.period as i64 <= EXPAND_LIMIT => {
                    let mut x = lo;
                    while x <= hi {
                        out.insert(ExtendedInterval::finite(x, x).expect("point"), 1);
                        x += d.period as i64;
                    }
                }
                _ => out.dust.push(d),
            }
        }
        out.dust.sort();
        out
    }

    /// Dimension of the stalk at `x`.
    pub fn dim_at(&self, x: i64) -> usize {
        let bars: usize = self.bars.iter().filter(|(i, _)| i.contains_point(x)).map(|(_, m)| m).sum();
        bars + self.dust.iter().filter(|d| d.contains(x)).count()
    }

    /// Number of length-zero bars at `x`.
    pub fn point_multiplicity(&self, x: i64) -> usize {
        let bar = ExtendedInterval {
            a: Bound::Finite(x),
            b: Bound::Finite(x),
        };
        self.bars.get(&bar).copied().unwrap_or(0) + self.dust.iter().filter(|d| d.contains(x)).count()
    }

    fn endpoints(&self) -> impl Iterator<Item = i64> + '_ {
        let bars = self.bars.keys().flat_map(|i| [i.a.finite(), i.b.finite()]);
        let dust = self.dust.iter().flat_map(|d| [d.lo.finite(), d.hi.finite(), Some(d.offset)]);
        bars.chain(dust).flatten()
    }

    fn periods(&self) -> impl Iterator<Item = u64> + '_ {
        self.dust.iter().map(|d| d.period)
    }

    /// A range of integers outside of which every listed barcode's
    /// point data repeats with a common period.
    fn scan_range(parts: &[&SymbolicBarcode]) -> Result<(i64, i64), UnboundedError> {
        let mut lcm: i128 = 1;
        let (mut lo, mut hi) = (0i64, 0i64);
        let mut any = false;
        for p in parts {
            for period in p.periods() {
                lcm = lcm.lcm(&(period as i128));
                if lcm > MAX_SCAN as i128 {
                    return Err(UnboundedError::ScanTooLong(lcm));
                }
            }
            for e in p.endpoints() {
                if any {
                    lo = lo.min(e);
                    hi = hi.max(e);
                } else {
                    (lo, hi, any) = (e, e, true);
                }
            }
        }
        let (start, end) = (lo as i128 - lcm, hi as i128 + lcm);
        if end - start > MAX_SCAN as i128 {
            return Err(UnboundedError::ScanTooLong(end - start));
        }
        Ok((start as i64, end as i64))
    }

    /// Same bars with the same multiplicities, dust compared pointwise.
    pub fn equivalent(&self, other: &SymbolicBarcode) -> Result<bool, UnboundedError> {
        let (x, y) = (self.canonical(), other.canonical());
        let long = |s: &SymbolicBarcode| -> BTreeMap<ExtendedInterval, usize> {
            s.bars.iter().filter(|(i, _)| !i.is_point()).map(|(i, m)| (*i, *m)).collect()
        };
        if long(&x) != long(&y) {
            return Ok(false);
        }
        let (lo, hi) = Self::scan_range(&[&x, &y])?;
        Ok((lo..=hi).all(|v| x.point_multiplicity(v) == y.point_multiplicity(v)))
    }

    /// Stalk dimensions agree everywhere.
    pub fn same_dims(&self, other: &SymbolicBarcode) -> Result<bool, UnboundedError> {
        let (lo, hi) = Self::scan_range(&[self, other])?;
        Ok((lo..=hi).all(|v| self.dim_at(v) == other.dim_at(v)))
    }
}

/// Barcode of the tensor product: bars intersect pairwise, dust is restricted
/// to bars, and dust meets dust by the Chinese remainder theorem.
pub fn symbolic_tensor(x: &SymbolicBarcode, y: &SymbolicBarcode) -> SymbolicBarcode {
    let mut out = SymbolicBarcode::zero();
    for (i, m) in x.bars() {
        for (j, n) in y.bars() {
            if let Some(k) = i.intersect(&j) {
                out.insert(k, m * n);
            }
        }
    }
    for (bars, dust) in [(x, y), (y, x)] {
        for (i, m) in bars.bars() {
            for d in dust.dust() {
                if let Some(r) = d.restrict(&i) {
                    for _ in 0..m {
                        out.push_dust(r);
                    }
                }
            }
        }
    }
    for d in x.dust() {
        for e in y.dust() {
            if let Some(r) = d.intersect(e) {
                out.push_dust(r);
            }
        }
    }
    out.canonical()
}

/// `dim Hom(K_I, K_J)` for the linear orientation: 1 iff `J.a ≤ I.a ≤ J.b ≤ I.b`.
pub fn hom_dim_linear(i: &ExtendedInterval, j: &ExtendedInterval) -> usize {
    usize::from(j.a <= i.a && i.a <= j.b && j.b <= i.b)
}

/// `dim Hom(K_I, K_J)` by solving the commuting-square system on a linear window
/// wide enough that finite endpoints are interior and infinite ones clip to the edges.
pub fn hom_dim_brute_force<F: Field>(i: &ExtendedInterval, j: &ExtendedInterval) -> Result<usize, UnboundedError> {
    let finite: Vec<i64> = [i.a, i.b, j.a, j.b].iter().filter_map(|b| b.finite()).collect();
    let lo = finite.iter().min().copied().unwrap_or(0) - 1;
    let hi = finite.iter().max().copied().unwrap_or(0) + 1;
    let window = QuiverWindow::linear(lo, hi)?;
    let clip = |b: Bound| match b {
        Bound::NegInf => lo,
        Bound::Finite(v) => v,
        Bound::PosInf => hi,
    };
    let ki: Representation<F> = interval_rep(&window, &window.set(clip(i.a)..=clip(i.b))?);
    let kj: Representation<F> = interval_rep(&window, &window.set(clip(j.a)..=clip(j.b))?);
    Ok(hom_basis(&ki, &kj)?.len())
}

fn require_linear(window: &QuiverWindow) -> Result<(), UnboundedError> {
    if window.orientation().iter().any(|d| *d != Dir::R) {
        return Err(UnboundedError::NotLinear(window.word()));
    }
    Ok(())
}

/// Outcome of [`mono_containment_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContainmentVerdict {
    pub mono: bool,
    pub epi: bool,
    /// For a mono, source bar ↦ containing target bar; for an epi, target bar ↦
    /// containing source bar.
    pub assignments: Vec<(Interval, Interval)>,
    pub failures: Vec<String>,
}

impl ContainmentVerdict {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn containment(inner: &Barcode, outer: &Barcode, what: &str, verdict: &mut ContainmentVerdict) {
    for (bar, _) in inner.iter() {
        match outer.iter().map(|(j, _)| j).find(|j| j.contains_interval(&bar)) {
            Some(j) => verdict.assignments.push((bar, j)),
            None => verdict.failures.push(format!("{what} bar {bar} lies in no bar of the other side")),
        }
    }
}

/// For a mono every source bar lies in a target bar; for an epi every target
/// bar lies in a source bar. Vacuous when `f` is neither.
pub fn mono_containment_check<F: Field>(f: &Morphism<F>) -> Result<ContainmentVerdict, UnboundedError> {
    require_linear(f.source().window())?;
    let mut verdict = ContainmentVerdict {
        mono: f.is_mono(),
        epi: f.is_epi(),
        ..Default::default()
    };
    let (src, tgt) = (decompose(f.source()), decompose(f.target()));
    if verdict.mono {
        containment(&src, &tgt, "source", &mut verdict);
    }
    if verdict.epi {
        containment(&tgt, &src, "target", &mut verdict);
    }
    Ok(verdict)
}

/// `V` (for a mono) or `W` (for an epi) is a direct summand of `V ⊗ W`,
/// checked as a sub-multiset of barcodes. `None` when `f` is neither.
pub fn direct_summand_of_tensor_check<F: Field>(f: &Morphism<F>) -> Result<Option<bool>, UnboundedError> {
    require_linear(f.source().window())?;
    let (v, w) = (f.source(), f.target());
    let product = decompose(&tensor(v, w)?);
    let mut result = None;
    if f.is_mono() {
        result = Some(product.contains_submultiset(&decompose(v)));
    }
    if f.is_epi() {
        result = Some(result.unwrap_or(true) && product.contains_submultiset(&decompose(w)));
    }
    Ok(result)
}

/// Windowed stand-in for boundedness: no bar reaches either window edge.
pub fn is_interior(window: &QuiverWindow, b: &Barcode) -> bool {
    b.iter().all(|(i, _)| window.lo() < i.a && i.b < window.hi())
}

/// Extensions of interior-barcode representations stay interior: checks the
/// given gluing (if any) and `trials` random ones.
pub fn bounded_extension_check<F: Field, R: Rng + ?Sized>(
    v1: &Representation<F>,
    v2: &Representation<F>,
    eps: Option<&[Matrix<F>]>,
    trials: usize,
    rng: &mut R,
) -> Result<Report, UnboundedError> {
    let window = v1.window();
    require_linear(window)?;
    for v in [v1, v2] {
        if let Some((bar, _)) = decompose(v).iter().find(|(i, _)| i.a == window.lo() || i.b == window.hi()) {
            return Err(UnboundedError::TouchesEdge(bar));
        }
    }
    let mut report = Report::new("bounded extension");
    let mut check = |middle: &Representation<F>, what: String| {
        let b = decompose(middle);
        report.check(is_interior(window, &b), || format!("{what}: middle barcode {b:?} reaches an edge"));
    };
    if let Some(eps) = eps {
        check(&extension(v1, v2, eps)?.middle, "given gluing".into());
    }
    for t in 0..trials {
        check(&random_extension(v1, v2, rng)?.middle, format!("trial {t}"));
    }
    Ok(report)
}

/// A random representation on a linear window whose bars avoid both edges.
pub fn random_interior_rep<F: Field, R: Rng + ?Sized>(window: &QuiverWindow, rng: &mut R) -> Representation<F> {
    if window.size() < 3 {
        return Representation::zero(window);
    }
    let inner = QuiverWindow::linear(window.lo() + 1, window.hi() - 1).expect("inner window");
    let b = random_barcode(&inner, 3, 2, rng);
    let v = crate::barcode::assemble(window, &b).expect("bars inside window");
    base_change_with_iso(&v, rng).0
}

/// A random mono or epi on a linear window: the inclusion or projection of a
/// random extension, conjugated by random isomorphisms on both ends.
pub fn random_mono_or_epi<F: Field, R: Rng + ?Sized>(
    window: &QuiverWindow,
    want_mono: bool,
    rng: &mut R,
) -> Result<Morphism<F>, UnboundedError> {
    let gen = |rng: &mut R| {
        let b = random_barcode(window, 3, 2, rng);
        crate::barcode::assemble::<F>(window, &b).expect("bars inside window")
    };
    let (v1, v2) = (gen(rng), gen(rng));
    let ext = random_extension(&v1, &v2, rng)?;
    let f = if want_mono { ext.inclusion } else { ext.projection };
    let (_, pre) = base_change_with_iso(f.source(), rng);
    let (_, post) = base_change_with_iso(f.target(), rng);
    let pre_inverse = Morphism::new(
        pre.target().clone(),
        pre.source().clone(),
        pre.components().iter().map(|c| c.inverse().expect("iso")).collect(),
    )?;
    Ok(pre_inverse.then(&f)?.then(&post)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertOp {
    Tensor,
    Ext,
    Ker,
    Coker,
}

/// One construction. `args` index seeds first, then earlier steps:
/// seed `k` is index `k`, step `i` is index `seeds.len() + i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertStep {
    pub op: CertOp,
    pub args: Vec<usize>,
    pub claim: SymbolicBarcode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor: Option<SymbolicBarcode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationCertificate {
    pub seeds: Vec<SymbolicBarcode>,
    pub steps: Vec<CertStep>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("step {step} cites {arg}, which is not earlier")]
    ForwardReference { step: usize, arg: usize },
    #[error("seed {seed} is not one of the allowed generators")]
    SeedNotAllowed { seed: usize },
    #[error("step {step}: {op:?} takes {expected} argument(s), got {found}")]
    Arity { step: usize, op: CertOp, expected: usize, found: usize },
    #[error("step {step}: tensor needs a factor")]
    MissingFactor { step: usize },
    #[error(transparent)]
    Symbolic(#[from] UnboundedError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Accepted { steps: usize },
    Rejected { step: usize, reason: String },
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted { .. })
    }
}

/// The generators `{0, K'}`.
pub fn default_seeds() -> Vec<SymbolicBarcode> {
    vec![SymbolicBarcode::zero(), SymbolicBarcode::k_prime()]
}

fn covered(x: i64, by: &SymbolicBarcode) -> bool {
    by.dim_at(x) > 0
}

/// Bars of `claim` each inside some bar of `outer`, dust points inside its
/// support, and stalks no larger.
fn contained_in(claim: &SymbolicBarcode, outer: &SymbolicBarcode) -> Result<Option<String>, UnboundedError> {
    for (bar, _) in claim.bars() {
        if bar.is_point() {
            continue;
        }
        if !outer.bars().any(|(o, _)| o.contains(&bar)) {
            return Ok(Some(format!("bar {bar} is not contained in any input bar")));
        }
    }
    let (lo, hi) = SymbolicBarcode::scan_range(&[claim, outer])?;
    for x in lo..=hi {
        if claim.point_multiplicity(x) > 0 && !covered(x, outer) {
            return Ok(Some(format!("length-zero bar at {x} lies outside the input")));
        }
        if claim.dim_at(x) > outer.dim_at(x) {
            return Ok(Some(format!("stalk at {x} is larger than the input's")));
        }
    }
    Ok(None)
}

/// Replays `cert` against the generators `allowed`.
///
/// Rules: a tensor claim must be the symbolic tensor of its argument and
/// factor; an extension claim must be bounded with stalks adding up; a kernel
/// (cokernel) claim must have every bar inside a bar of the source (target).
/// Every claim must be bounded. The first violation rejects the certificate.
pub fn check_derivation(cert: &DerivationCertificate, allowed: &[SymbolicBarcode]) -> Result<Verdict, CertificateError> {
    for (k, seed) in cert.seeds.iter().enumerate() {
        let mut ok = false;
        for a in allowed {
            if seed.equivalent(a)? {
                ok = true;
                break;
            }
        }
        if !ok || !seed.is_bounded() {
            return Err(CertificateError::SeedNotAllowed { seed: k });
        }
    }
    let mut objects: Vec<SymbolicBarcode> = cert.seeds.clone();
    for (i, step) in cert.steps.iter().enumerate() {
        let here = cert.seeds.len() + i;
        for &arg in &step.args {
            if arg >= here {
                return Err(CertificateError::ForwardReference { step: i, arg });
            }
        }
        let expected = if step.op == CertOp::Tensor { 1 } else { 2 };
        if step.args.len() != expected {
            return Err(CertificateError::Arity {
                step: i,
                op: step.op,
                expected,
                found: step.args.len(),
            });
        }
        let reject = |reason: String| Ok(Verdict::Rejected { step: i, reason });
        let claim = &step.claim;
        if !claim.is_bounded() {
            let bar = claim.bars().find(|(b, _)| !b.is_bounded()).map(|(b, _)| b).expect("unbounded bar");
            return reject(format!("claims the unbounded bar {bar}"));
        }
        let arg = |k: usize| &objects[step.args[k]];
        let problem = match step.op {
            CertOp::Tensor => {
                let factor = step.factor.as_ref().ok_or(CertificateError::MissingFactor { step: i })?;
                let product = symbolic_tensor(arg(0), factor);
                match claim.equivalent(&product) {
                    Ok(true) => None,
                    Ok(false) => Some("claim is not the tensor product".to_string()),
                    Err(e) => Some(e.to_string()),
                }
            }
            CertOp::Ext => {
                let mut sum = arg(0).clone();
                for (b, m) in arg(1).bars() {
                    sum.insert(b, m);
                }
                for d in arg(1).dust() {
                    sum.push_dust(*d);
                }
                match claim.same_dims(&sum) {
                    Ok(true) => None,
                    Ok(false) => Some("stalk dimensions do not add up".to_string()),
                    Err(e) => Some(e.to_string()),
                }
            }
            CertOp::Ker => contained_in(claim, arg(0)).unwrap_or_else(|e| Some(e.to_string())),
            CertOp::Coker => contained_in(claim, arg(1)).unwrap_or_else(|e| Some(e.to_string())),
        };
        if let Some(reason) = problem {
            return reject(reason);
        }
        objects.push(claim.clone());
    }
    Ok(Verdict::Accepted {
        steps: cert.steps.len(),
    })
}

/// A ten-step certificate that stays bounded throughout.
pub fn sample_bounded_certificate() -> DerivationCertificate {
    let fin = |a, b| ExtendedInterval::finite(a, b).expect("bar");
    let bars = |bs: &[(i64, i64, usize)]| SymbolicBarcode::from_bars(bs.iter().map(|&(a, b, m)| (fin(a, b), m)));
    let points = |a: i64, b: i64| bars(&(a..=b).map(|x| (x, x, 1)).collect::<Vec<_>>());
    let ray = SymbolicBarcode::from_bars([(ExtendedInterval::new(Bound::Finite(0), Bound::PosInf).expect("ray"), 1)]);
    let mut even = SymbolicBarcode::zero();
    even.push_dust(Dust::new(0, 2, Bound::NegInf, Bound::PosInf).expect("dust"));
    let step = |op, args: Vec<usize>, claim, factor| CertStep { op, args, claim, factor };
    DerivationCertificate {
        seeds: default_seeds(),
        steps: vec![
            // 2: K' ⊗ K_[0,3]
            step(CertOp::Tensor, vec![1], points(0, 3), Some(bars(&[(0, 3, 1)]))),
            // 3: K' ⊗ K_{[0,∞)} is dust on the ray
            step(CertOp::Tensor, vec![1], {
                let mut s = SymbolicBarcode::zero();
                s.push_dust(Dust::new(0, 1, Bound::Finite(0), Bound::PosInf).expect("dust"));
                s
            }, Some(ray)),
            // 4: (dust on ray) ⊗ even dust
            step(CertOp::Tensor, vec![3], {
                let mut s = SymbolicBarcode::zero();
                s.push_dust(Dust::new(0, 2, Bound::Finite(0), Bound::PosInf).expect("dust"));
                s
            }, Some(even)),
            // 5: glue two point sets into bars
            step(CertOp::Ext, vec![2, 2], bars(&[(0, 1, 1), (2, 3, 1), (0, 0, 1), (1, 3, 1)]), None),
            // 6: extension again
            step(CertOp::Ext, vec![5, 2], bars(&[(0, 3, 3)]), None),
            // 7: kernel out of 6
            step(CertOp::Ker, vec![6, 6], bars(&[(1, 3, 2)]), None),
            // 8: cokernel into 6
            step(CertOp::Coker, vec![5, 6], bars(&[(0, 2, 1)]), None),
            // 9: tensor with K_ℤ changes nothing
            step(CertOp::Tensor, vec![8], bars(&[(0, 2, 1)]), Some(SymbolicBarcode::k_z())),
            // 10: extension with the zero object
            step(CertOp::Ext, vec![9, 0], bars(&[(0, 2, 1)]), None),
            // 11: kernel of a map out of the periodic dust
            step(CertOp::Ker, vec![4, 4], {
                let mut s = SymbolicBarcode::zero();
                s.push_dust(Dust::new(4, 4, Bound::Finite(0), Bound::PosInf).expect("dust"));
                s
            }, None),
        ],
    }
}

/// Certificates that each claim an unbounded bar at some step; all must be rejected.
pub fn adversarial_certificates() -> Vec<DerivationCertificate> {
    let inf = |a: Bound, b: Bound| ExtendedInterval::new(a, b).expect("bar");
    let unbounded = [
        inf(Bound::NegInf, Bound::PosInf),
        inf(Bound::Finite(0), Bound::PosInf),
        inf(Bound::NegInf, Bound::Finite(0)),
        inf(Bound::Finite(-5), Bound::PosInf),
        inf(Bound::NegInf, Bound::Finite(7)),
    ];
    let good = sample_bounded_certificate();
    let mut out = Vec::new();
    for bar in unbounded {
        let claim = SymbolicBarcode::from_bars([(bar, 1)]);
        let mut with_points = claim.clone();
        with_points.push_dust(Dust::everywhere());
        // Tensor of K' with the unbounded factor, claimed as the factor itself.
        out.push(DerivationCertificate {
            seeds: default_seeds(),
            steps: vec![CertStep {
                op: CertOp::Tensor,
                args: vec![1],
                claim: claim.clone(),
                factor: Some(claim.clone()),
            }],
        });
        // Extension of K' with itself claimed to be unbounded (stalks even match K' ⊕ the bar's shadow).
        out.push(DerivationCertificate {
            seeds: default_seeds(),
            steps: vec![CertStep {
                op: CertOp::Ext,
                args: vec![1, 1],
                claim: with_points,
                factor: None,
            }],
        });
        // Kernel and cokernel claims at the end of an otherwise valid derivation.
        for op in [CertOp::Ker, CertOp::Coker] {
            let mut cert = good.clone();
            let last = cert.seeds.len() + cert.steps.len() - 1;
            cert.steps.push(CertStep {
                op,
                args: vec![last, last],
                claim: claim.clone(),
                factor: None,
            });
            out.push(cert);
        }
    }
    // K_ℤ reached by tensoring K_ℤ with itself, after valid steps.
    let mut cert = good;
    cert.steps.push(CertStep {
        op: CertOp::Tensor,
        args: vec![0],
        claim: SymbolicBarcode::k_z(),
        factor: Some(SymbolicBarcode::k_z()),
    });
    out.push(cert);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf2, Gf5};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fin(a: i64, b: i64) -> ExtendedInterval {
        ExtendedInterval::finite(a, b).unwrap()
    }

    #[test]
    fn boundedness_examples() {
        assert!(SymbolicBarcode::k_prime().is_bounded());
        assert!(!SymbolicBarcode::k_z().is_bounded());
        let ray = ExtendedInterval::new(Bound::Finite(3), Bound::PosInf).unwrap();
        assert!(!SymbolicBarcode::from_bars([(fin(0, 5), 1), (ray, 1)]).is_bounded());
        assert!(ExtendedInterval::new(Bound::PosInf, Bound::PosInf).is_err());
        assert!(ExtendedInterval::finite(2, 1).is_err());
    }

    #[test]
    fn tensor_examples() {
        let dust = SymbolicBarcode::k_prime();
        assert!(symbolic_tensor(&SymbolicBarcode::k_z(), &dust).equivalent(&dust).unwrap());
        let a = SymbolicBarcode::from_bars([(fin(0, 5), 1)]);
        let b = SymbolicBarcode::from_bars([(fin(3, 9), 1)]);
        assert_eq!(symbolic_tensor(&a, &b), SymbolicBarcode::from_bars([(fin(3, 5), 1)]));
        // Dust meets dust: evens ∩ multiples of three = multiples of six.
        let mut evens = SymbolicBarcode::zero();
        evens.push_dust(Dust::new(0, 2, Bound::NegInf, Bound::PosInf).unwrap());
        let mut threes = SymbolicBarcode::zero();
        threes.push_dust(Dust::new(3, 3, Bound::NegInf, Bound::PosInf).unwrap());
        let mut sixes = SymbolicBarcode::zero();
        sixes.push_dust(Dust::new(-6, 6, Bound::NegInf, Bound::PosInf).unwrap());
        assert!(symbolic_tensor(&evens, &threes).equivalent(&sixes).unwrap());
        let mut odds = SymbolicBarcode::zero();
        odds.push_dust(Dust::new(1, 2, Bound::NegInf, Bound::PosInf).unwrap());
        assert!(symbolic_tensor(&evens, &odds).equivalent(&SymbolicBarcode::zero()).unwrap());
    }

    #[test]
    fn crt_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let mk = |rng: &mut ChaCha8Rng| {
                let lo = if rng.gen_bool(0.5) { Bound::Finite(rng.gen_range(-30..10)) } else { Bound::NegInf };
                let hi = if rng.gen_bool(0.5) { Bound::Finite(rng.gen_range(-10..30)) } else { Bound::PosInf };
                Dust::new(rng.gen_range(-20..20), rng.gen_range(1..9), lo, hi).unwrap()
            };
            let (d, e) = (mk(&mut rng), mk(&mut rng));
            let meet = d.intersect(&e);
            for x in -200..200 {
                let expected = d.contains(x) && e.contains(x);
                assert_eq!(meet.is_some_and(|m| m.contains(x)), expected, "{d:?} {e:?} at {x}");
            }
        }
    }

    fn random_symbolic(rng: &mut ChaCha8Rng, bounded: bool) -> SymbolicBarcode {
        let mut s = SymbolicBarcode::zero();
        for _ in 0..rng.gen_range(0..4) {
            let a = rng.gen_range(-10..10);
            let b = a + rng.gen_range(0..6);
            let (mut lo, mut hi) = (Bound::Finite(a), Bound::Finite(b));
            if !bounded && rng.gen_bool(0.3) {
                lo = Bound::NegInf;
            }
            if !bounded && rng.gen_bool(0.3) {
                hi = Bound::PosInf;
            }
            s.insert(ExtendedInterval::new(lo, hi).unwrap(), rng.gen_range(1..3));
        }
        if rng.gen_bool(0.4) {
            s.push_dust(Dust::new(rng.gen_range(0..5), rng.gen_range(1..5), Bound::NegInf, Bound::PosInf).unwrap());
        }
        s
    }

    #[test]
    fn bounded_tensor_anything_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..500 {
            let x = random_symbolic(&mut rng, true);
            let y = random_symbolic(&mut rng, false);
            assert!(symbolic_tensor(&x, &y).is_bounded());
            assert!(symbolic_tensor(&x, &y).equivalent(&symbolic_tensor(&y, &x)).unwrap());
        }
    }

    #[test]
    fn hom_formula_examples() {
        assert_eq!(hom_dim_linear(&fin(1, 3), &fin(0, 2)), 1);
        assert_eq!(hom_dim_linear(&fin(0, 2), &fin(1, 3)), 0);
        assert_eq!(hom_dim_linear(&fin(2, 4), &fin(2, 4)), 1);
        assert_eq!(hom_dim_brute_force::<Gf5>(&fin(1, 3), &fin(0, 2)).unwrap(), 1);
        assert_eq!(hom_dim_brute_force::<Gf5>(&fin(0, 2), &fin(1, 3)).unwrap(), 0);
    }

    #[test]
    fn hom_formula_matches_brute_force_with_infinite_ends() {
        let bounds: Vec<Bound> = [Bound::NegInf, Bound::PosInf].into_iter().chain((0..4).map(Bound::Finite)).collect();
        let intervals: Vec<ExtendedInterval> = bounds
            .iter()
            .flat_map(|&a| bounds.iter().filter_map(move |&b| ExtendedInterval::new(a, b).ok()))
            .collect();
        for i in &intervals {
            for j in &intervals {
                assert_eq!(hom_dim_linear(i, j), hom_dim_brute_force::<Gf2>(i, j).unwrap(), "{i} → {j}");
            }
        }
    }

    #[test]
    fn containment_examples() {
        let q = QuiverWindow::linear(-1, 3).unwrap();
        let v: Representation<Gf5> = interval_rep(&q, &q.set(0..=1).unwrap());
        let w: Representation<Gf5> = interval_rep(&q, &q.set(-1..=1).unwrap());
        let f = Morphism::new(v.clone(), w.clone(), (0..5).map(|k| {
            let (r, c) = (w.dims()[k], v.dims()[k]);
            if r == 1 && c == 1 { Matrix::identity(1) } else { Matrix::zeros(r, c) }
        }).collect()).unwrap();
        let verdict = mono_containment_check(&f).unwrap();
        assert!(verdict.mono && verdict.holds());
        assert_eq!(verdict.assignments, vec![(Interval::new(0, 1).unwrap(), Interval::new(-1, 1).unwrap())]);
        assert_eq!(direct_summand_of_tensor_check(&f).unwrap(), Some(true));
        assert_eq!(decompose(&tensor(&v, &w).unwrap()), decompose(&v));

        let id = Morphism::identity(&v);
        assert!(mono_containment_check(&id).unwrap().holds());
        assert_eq!(direct_summand_of_tensor_check(&id).unwrap(), Some(true));

        // Nothing maps K_[0,1] into K_[2,3].
        let u = crate::barcode::assemble::<Gf5>(&q, &Barcode::from_bars([(Interval::new(2, 3).unwrap(), 1)])).unwrap();
        assert!(hom_basis(&v, &u).unwrap().is_empty());
        let z = Morphism::zero(&v, &u).unwrap();
        let verdict = mono_containment_check(&z).unwrap();
        assert!(!verdict.mono && verdict.holds());
    }

    #[test]
    fn epi_containment_runs_target_into_source() {
        // K_[0,2] → K_[0,1] is onto; the source bar is not inside the target bar.
        let q = QuiverWindow::linear(0, 3).unwrap();
        let v: Representation<Gf2> = interval_rep(&q, &q.set(0..=2).unwrap());
        let w: Representation<Gf2> = interval_rep(&q, &q.set(0..=1).unwrap());
        let f = hom_basis(&v, &w).unwrap().pop().unwrap();
        assert!(f.is_epi() && !f.is_mono());
        let verdict = mono_containment_check(&f).unwrap();
        assert!(verdict.holds());
        assert_eq!(verdict.assignments, vec![(Interval::new(0, 1).unwrap(), Interval::new(0, 2).unwrap())]);
        assert_eq!(direct_summand_of_tensor_check(&f).unwrap(), Some(true));
    }

    #[test]
    fn random_monos_and_epis() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for t in 0..80 {
            let q = QuiverWindow::linear(0, rng.gen_range(1..8)).unwrap();
            let f = random_mono_or_epi::<Gf5, _>(&q, t % 2 == 0, &mut rng).unwrap();
            assert!(if t % 2 == 0 { f.is_mono() } else { f.is_epi() });
            let verdict = mono_containment_check(&f).unwrap();
            assert!(verdict.holds(), "{:?}", verdict.failures);
            assert_eq!(direct_summand_of_tensor_check(&f).unwrap(), Some(true));
        }
        assert!(mono_containment_check(&Morphism::identity(&Representation::<Gf2>::unit(&QuiverWindow::parse(0, 1, "L").unwrap()))).is_err());
    }

    #[test]
    fn bounded_extension_examples() {
        let q = QuiverWindow::linear(-1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let v1: Representation<Gf5> = interval_rep(&q, &q.set([1]).unwrap());
        let v2: Representation<Gf5> = interval_rep(&q, &q.set([0]).unwrap());
        let zero = crate::quiver::zero_gluing(&v1, &v2);
        assert!(bounded_extension_check(&v1, &v2, Some(&zero), 0, &mut rng).unwrap().passed());
        let mut eps = zero.clone();
        eps[1] = Matrix::identity(1);
        let ext = extension(&v1, &v2, &eps).unwrap();
        assert_eq!(decompose(&ext.middle), Barcode::from_bars([(Interval::new(0, 1).unwrap(), 1)]));
        assert!(bounded_extension_check(&v1, &v2, Some(&eps), 20, &mut rng).unwrap().passed());
        let edge: Representation<Gf5> = interval_rep(&q, &q.set([2]).unwrap());
        assert!(bounded_extension_check(&v1, &edge, None, 1, &mut rng).is_err());
    }

    #[test]
    fn certificate_rules() {
        let cert = sample_bounded_certificate();
        assert_eq!(cert.steps.len(), 10);
        assert_eq!(check_derivation(&cert, &default_seeds()).unwrap(), Verdict::Accepted { steps: 10 });
        let corpus = adversarial_certificates();
        assert!(corpus.len() >= 20);
        for c in &corpus {
            assert!(matches!(check_derivation(c, &default_seeds()).unwrap(), Verdict::Rejected { .. }));
        }
        let mut bad = cert.clone();
        bad.steps[0].args = vec![5];
        assert!(matches!(check_derivation(&bad, &default_seeds()), Err(CertificateError::ForwardReference { .. })));
        let mut bad = cert.clone();
        bad.seeds.push(SymbolicBarcode::from_bars([(fin(0, 0), 1)]));
        assert!(matches!(check_derivation(&bad, &default_seeds()), Err(CertificateError::SeedNotAllowed { seed: 2 })));
        let mut bad = cert;
        bad.steps[3].claim = SymbolicBarcode::from_bars([(fin(0, 3), 1)]);
        assert_eq!(
            check_derivation(&bad, &default_seeds()).unwrap(),
            Verdict::Rejected { step: 3, reason: "stalk dimensions do not add up".into() }
        );
    }

    #[test]
    fn certificate_json_roundtrip() {
        let cert = sample_bounded_certificate();
        let s = serde_json::to_string(&cert).unwrap();
        assert_eq!(serde_json::from_str::<DerivationCertificate>(&s).unwrap(), cert);
        let kz: SymbolicBarcode = serde_json::from_str(r#"{"bars":[{"a":"-inf","b":"+inf","mult":1}]}"#).unwrap();
        assert_eq!(kz, SymbolicBarcode::k_z());
        assert!(serde_json::from_str::<SymbolicBarcode>(r#"{"bars":[{"a":"+inf","b":0,"mult":1}]}"#).is_err());
    }
}
