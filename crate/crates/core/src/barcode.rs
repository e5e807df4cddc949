//! Interval decomposition of windowed representations.
//!
//! For a sub-window `[a, b]` the rank invariant `r(a, b)` is the rank of the
//! canonical map from the limit of the restricted representation to its
//! colimit. On an interval-decomposable representation this counts the bars
//! containing `[a, b]`, so bar multiplicities follow by inclusion–exclusion:
//!
//! ```text
//! m([a, b]) = r(a, b) − r(a−1, b) − r(a, b+1) + r(a−1, b+1)
//! ```
//!
//! with terms outside the window taken as zero.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::Field;
use crate::linalg::Matrix;
use crate::quiver::{direct_sum, interval_rep, Morphism, QuiverError, QuiverWindow, Representation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarcodeError {
    #[error("range [{a}, {b}] is not inside the window [{lo}, {hi}]")]
    OutOfWindow { a: i64, b: i64, lo: i64, hi: i64 },
    #[error("bar [{a}, {b}] is malformed")]
    Malformed { a: i64, b: i64 },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// The closed integer interval `[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub a: i64,
    pub b: i64,
}

impl Interval {
    pub fn new(a: i64, b: i64) -> Result<Self, BarcodeError> {
        if a > b {
            return Err(BarcodeError::Malformed { a, b });
        }
        Ok(Interval { a, b })
    }

    pub fn contains(&self, v: i64) -> bool {
        self.a <= v && v <= self.b
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.a <= other.a && other.b <= self.b
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (a, b) = (self.a.max(other.a), self.b.min(other.b));
        (a <= b).then_some(Interval { a, b })
    }

    pub fn len(&self) -> usize {
        (self.b - self.a) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// A multiset of intervals with positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Barcode {
    bars: BTreeMap<Interval, usize>,
}

#[derive(Serialize, Deserialize)]
struct BarJson {
    a: i64,
    b: i64,
    mult: usize,
}

#[derive(Serialize, Deserialize)]
struct BarcodeJson {
    bars: Vec<BarJson>,
}

impl Serialize for Barcode {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        BarcodeJson {
            bars: self.iter().map(|(i, m)| BarJson { a: i.a, b: i.b, mult: m }).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Barcode {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let json = BarcodeJson::deserialize(deserializer)?;
        let mut out = Barcode::new();
        for bar in json.bars {
            let interval = Interval::new(bar.a, bar.b).map_err(serde::de::Error::custom)?;
            out.insert(interval, bar.mult);
        }
        Ok(out)
    }
}

impl Barcode {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bars(bars: impl IntoIterator<Item = (Interval, usize)>) -> Self {
        let mut out = Self::new();
        for (i, m) in bars {
            out.insert(i, m);
        }
        out
    }

    /// Adds `mult` copies of `bar`; zero multiplicities are dropped.
    pub fn insert(&mut self, bar: Interval, mult: usize) {
        if mult > 0 {
            *self.bars.entry(bar).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, bar: &Interval) -> usize {
        self.bars.get(bar).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Interval, usize)> + '_ {
        self.bars.iter().map(|(i, m)| (*i, *m))
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Number of bars counted with multiplicity.
    pub fn count(&self) -> usize {
        self.bars.values().sum()
    }

    /// Dimension vector of the assembled representation on `window`.
    pub fn dims_on(&self, window: &QuiverWindow) -> Vec<usize> {
        window
            .vertices()
            .map(|v| self.iter().filter(|(i, _)| i.contains(v)).map(|(_, m)| m).sum())
            .collect()
    }

    /// Whether every bar of `other` occurs here at least as often.
    pub fn contains_submultiset(&self, other: &Barcode) -> bool {
        other.iter().all(|(i, m)| self.multiplicity(&i) >= m)
    }

    /// The barcode of the tensor product: pairwise intersections, multiplicities multiplied.
    pub fn tensor(&self, other: &Barcode) -> Barcode {
        let mut out = Barcode::new();
        for (i, m) in self.iter() {
            for (j, n) in other.iter() {
                if let Some(k) = i.intersect(&j) {
                    out.insert(k, m * n);
                }
            }
        }
        out
    }

    /// Every bar lies inside `[lo, hi]`.
    pub fn fits(&self, window: &QuiverWindow) -> bool {
        self.bars.keys().all(|i| window.lo() <= i.a && i.b <= window.hi())
    }
}

fn check_range(window: &QuiverWindow, a: i64, b: i64) -> Result<(), BarcodeError> {
    if a > b || a < window.lo() || b > window.hi() {
        return Err(BarcodeError::OutOfWindow {
            a,
            b,
            lo: window.lo(),
            hi: window.hi(),
        });
    }
    Ok(())
}

/// Limit basis and colimit quotient for `v` restricted to local vertices `i0..=i1`.
struct LimitColimit<F> {
    offsets: Vec<usize>,
    /// Columns are compatible families.
    limit: Matrix<F>,
    /// Quotient map from the direct sum of the stalks onto the colimit.
    colimit: Matrix<F>,
}

fn limit_colimit<F: Field>(v: &Representation<F>, i0: usize, i1: usize) -> LimitColimit<F> {
    let window = v.window();
    let dims = v.dims();
    let mut offsets = vec![0; i1 - i0 + 2];
    for k in i0..=i1 {
        offsets[k - i0 + 1] = offsets[k - i0] + dims[k];
    }
    let total = offsets[i1 - i0 + 1];
    let block = |k: usize| offsets[k - i0];

    // One block row per arrow: x_t − V_α x_s = 0.
    let constraint_rows: usize = (i0..i1).map(|k| dims[window.arrow_ends(k).1]).sum();
    let mut constraints = Matrix::zeros(constraint_rows, total);
    // One block column per arrow: ι_s(x) − ι_t(V_α x).
    let relation_cols: usize = (i0..i1).map(|k| dims[window.arrow_ends(k).0]).sum();
    let mut relations = Matrix::zeros(total, relation_cols);

    let (mut row, mut col) = (0, 0);
    for k in i0..i1 {
        let (s, t) = window.arrow_ends(k);
        let map = v.map(k);
        let neg = map.scale(&F::one().neg());
        constraints.set_block(row, block(t), &Matrix::identity(dims[t]));
        constraints.set_block(row, block(s), &neg);
        relations.set_block(block(s), col, &Matrix::identity(dims[s]));
        relations.set_block(block(t), col, &neg);
        row += dims[t];
        col += dims[s];
    }
    LimitColimit {
        offsets,
        limit: constraints.kernel_basis(),
        colimit: relations.cokernel_projection(),
    }
}

impl<F: Field> LimitColimit<F> {
    /// The composite `limit → V_k → colimit` through the stalk at local offset `k`.
    fn through(&self, k: usize) -> Matrix<F> {
        let (start, end) = (self.offsets[k], self.offsets[k + 1]);
        let proj = self.colimit.block(0, start, self.colimit.rows(), end - start);
        let comp = self.limit.block(start, 0, end - start, self.limit.cols());
        proj.mul(&comp)
    }
}

/// Rank of the canonical limit-to-colimit map of `v` restricted to `[a, b]`.
pub fn rank_invariant<F: Field>(v: &Representation<F>, a: i64, b: i64) -> Result<usize, BarcodeError> {
    let window = v.window();
    check_range(window, a, b)?;
    let (i0, i1) = (window.index(a), window.index(b));
    if v.dims()[i0..=i1].contains(&0) {
        return Ok(0);
    }
    Ok(limit_colimit(v, i0, i1).through(0).rank())
}

/// The canonical map computed through each stalk of `[a, b]` in turn.
///
/// All entries agree when the map is well defined; exposed for property tests.
pub fn canonical_map_components<F: Field>(v: &Representation<F>, a: i64, b: i64) -> Result<Vec<Matrix<F>>, BarcodeError> {
    let window = v.window();
    check_range(window, a, b)?;
    let (i0, i1) = (window.index(a), window.index(b));
    let lc = limit_colimit(v, i0, i1);
    Ok((0..=i1 - i0).map(|k| lc.through(k)).collect())
}

/// `r(a, b)` for a fixed `a` and every `b ≥ a`, sweeping rightwards.
///
/// Keeps the limit of the restriction to `[a, b]` as a basis with its maps to
/// `V_a` and `V_b`, and the colimit as a quotient with maps from `V_a` and
/// `V_b`. A rightward arrow pushes the colimit out and carries the limit
/// along; a leftward arrow pulls the limit back and carries the colimit along.
fn rank_sweep<F: Field>(v: &Representation<F>, i0: usize) -> Vec<usize> {
    let window = v.window();
    let dims = v.dims();
    let n = window.size();
    let mut out = vec![0; n];
    let d0 = dims[i0];
    if d0 == 0 {
        return out;
    }
    let minus_one = F::one().neg();
    let (mut lam, mut mu) = (Matrix::identity(d0), Matrix::identity(d0));
    let (mut phi, mut psi) = (Matrix::identity(d0), Matrix::identity(d0));
    out[i0] = d0;
    for b in i0..n - 1 {
        let d1 = dims[b + 1];
        if d1 == 0 {
            break;
        }
        let m = v.map(b);
        if window.arrow_ends(b).0 == b {
            mu = m.mul(&mu);
            let c = psi.rows();
            let q = psi.vstack(&m.scale(&minus_one)).cokernel_projection();
            phi = q.block(0, 0, q.rows(), c).mul(&phi);
            psi = q.block(0, c, q.rows(), d1);
        } else {
            psi = psi.mul(m);
            let l = mu.cols();
            let k = mu.hstack(&m.scale(&minus_one)).kernel_basis();
            lam = lam.mul(&k.block(0, 0, l, k.cols()));
            mu = k.block(l, 0, d1, k.cols());
        }
        out[b + 1] = phi.mul(&lam).rank();
    }
    out
}

/// The barcode of `v`.
///
/// Panics if inclusion–exclusion produces a negative multiplicity, which can
/// only happen through an implementation bug.
pub fn decompose<F: Field>(v: &Representation<F>) -> Barcode {
    let window = v.window();
    let n = window.size();
    let r: Vec<Vec<usize>> = (0..n).map(|i| rank_sweep(v, i)).collect();
    let get = |i: isize, j: usize| -> i64 {
        if i < 0 || j >= n {
            0
        } else {
            r[i as usize][j] as i64
        }
    };
    let mut out = Barcode::new();
    for i in 0..n {
        for j in i..n {
            let m = get(i as isize, j) - get(i as isize - 1, j) - get(i as isize, j + 1) + get(i as isize - 1, j + 1);
            assert!(m >= 0, "negative multiplicity {m} for [{i}, {j}]: rank invariant is inconsistent");
            let bar = Interval {
                a: window.lo() + i as i64,
                b: window.lo() + j as i64,
            };
            out.insert(bar, m as usize);
        }
    }
    out
}

/// Direct sum of interval representations, one per bar copy.
pub fn assemble<F: Field>(window: &QuiverWindow, barcode: &Barcode) -> Result<Representation<F>, BarcodeError> {
    let mut out = Representation::zero(window);
    for (bar, mult) in barcode.iter() {
        check_range(window, bar.a, bar.b)?;
        let piece = interval_rep(window, &window.set(bar.a..=bar.b)?);
        for _ in 0..mult {
            out = direct_sum(&out, &piece)?;
        }
    }
    Ok(out)
}

/// Conjugates every arrow map by the given invertible matrices, one per vertex.
/// Returns the new representation and the isomorphism from `v` onto it.
pub fn conjugate<F: Field>(
    v: &Representation<F>,
    changes: &[Matrix<F>],
) -> Result<(Representation<F>, Morphism<F>), QuiverError> {
    let window = v.window();
    if changes.len() != window.size() {
        return Err(QuiverError::LengthMismatch {
            expected: window.size(),
            found: changes.len(),
        });
    }
    let inverses = changes.iter().map(Matrix::inverse).collect::<Result<Vec<_>, _>>()?;
    let maps = (0..window.num_arrows())
        .map(|i| {
            let (s, t) = window.arrow_ends(i);
            changes[t].mul(v.map(i)).mul(&inverses[s])
        })
        .collect();
    let w = Representation::new(window.clone(), v.dims().to_vec(), maps)?;
    let iso = Morphism::new(v.clone(), w.clone(), changes.to_vec())?;
    Ok((w, iso))
}

/// A random isomorphic copy of `v` together with the isomorphism.
pub fn base_change_with_iso<F: Field, R: Rng + ?Sized>(
    v: &Representation<F>,
    rng: &mut R,
) -> (Representation<F>, Morphism<F>) {
    let changes: Vec<Matrix<F>> = v.dims().iter().map(|&d| Matrix::random_invertible(d, rng)).collect();
    conjugate(v, &changes).expect("invertible base change")
}

/// A random isomorphic copy of `v`.
pub fn base_change<F: Field, R: Rng + ?Sized>(v: &Representation<F>, rng: &mut R) -> Representation<F> {
    base_change_with_iso(v, rng).0
}

/// Isomorphism test via barcode equality.
pub fn is_isomorphic<F: Field>(v: &Representation<F>, w: &Representation<F>) -> bool {
    v.window() == w.window() && v.dims() == w.dims() && decompose(v) == decompose(w)
}

/// A random barcode on `window` with at most `max_bars` distinct bars of
/// multiplicity at most `max_mult`.
pub fn random_barcode<R: Rng + ?Sized>(window: &QuiverWindow, max_bars: usize, max_mult: usize, rng: &mut R) -> Barcode {
    let mut out = Barcode::new();
    let nbars = rng.gen_range(0..=max_bars);
    for _ in 0..nbars {
        let a = rng.gen_range(window.lo()..=window.hi());
        let b = rng.gen_range(a..=window.hi());
        out.insert(Interval { a, b }, rng.gen_range(1..=max_mult.max(1)));
    }
    out
}

/// One line per bar copy: offset spaces, start label, dashes, end label.
pub fn render_ascii(window: &QuiverWindow, barcode: &Barcode) -> String {
    let mut out = String::new();
    for (bar, mult) in barcode.iter() {
        let line = if bar.a == bar.b {
            format!("{}{}", " ".repeat((bar.a - window.lo()) as usize), bar.a)
        } else {
            format!(
                "{}{}{}{}",
                " ".repeat((bar.a - window.lo()) as usize),
                bar.a,
                "─".repeat((bar.b - bar.a) as usize),
                bar.b
            )
        };
        for _ in 0..mult {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}
