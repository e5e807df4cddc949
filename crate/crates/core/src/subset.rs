//! Bitsets over a contiguous range of integer vertices.

use std::fmt;

use thiserror::Error;

/// Largest universe a [`VertexSet`] can index.
pub const MAX_UNIVERSE: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubsetError {
    #[error("universe [{lo}, {hi}] is empty or larger than {MAX_UNIVERSE} vertices")]
    BadUniverse { lo: i64, hi: i64 },
    #[error("vertex {v} outside universe [{lo}, {hi}]")]
    OutOfRange { v: i64, lo: i64, hi: i64 },
    #[error("universe mismatch: [{0}, {1}] vs [{2}, {3}]")]
    UniverseMismatch(i64, i64, i64, i64),
}

/// The vertex range `{lo, …, hi}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Universe {
    lo: i64,
    hi: i64,
}

impl Universe {
    pub fn new(lo: i64, hi: i64) -> Result<Self, SubsetError> {
        if hi < lo || (hi - lo) as usize >= MAX_UNIVERSE {
            return Err(SubsetError::BadUniverse { lo, hi });
        }
        Ok(Universe { lo, hi })
    }

    pub fn lo(self) -> i64 {
        self.lo
    }

    pub fn hi(self) -> i64 {
        self.hi
    }

    pub fn len(self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, v: i64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn vertices(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    fn full_mask(self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }
}

/// A subset of a [`Universe`]; used both for vertex sets of a quiver window and
/// for elements of the Boolean algebra of subsets.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: Universe,
    bits: u64,
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.universe, self.bits.count_ones(), self.bits).cmp(&(other.universe, other.bits.count_ones(), other.bits))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl VertexSet {
    pub fn empty(universe: Universe) -> Self {
        VertexSet { universe, bits: 0 }
    }

    pub fn full(universe: Universe) -> Self {
        VertexSet {
            universe,
            bits: universe.full_mask(),
        }
    }

    pub fn from_vertices(universe: Universe, vs: impl IntoIterator<Item = i64>) -> Result<Self, SubsetError> {
        let mut s = Self::empty(universe);
        for v in vs {
            s.insert(v)?;
        }
        Ok(s)
    }

    /// The contiguous range `[a, b]`; empty when `a > b`.
    pub fn range(universe: Universe, a: i64, b: i64) -> Result<Self, SubsetError> {
        Self::from_vertices(universe, a..=b)
    }

    /// Subset whose bit `i` marks vertex `lo + i`.
    pub fn from_bits(universe: Universe, bits: u64) -> Result<Self, SubsetError> {
        if bits & !universe.full_mask() != 0 {
            return Err(SubsetError::OutOfRange {
                v: universe.lo + (63 - bits.leading_zeros() as i64),
                lo: universe.lo,
                hi: universe.hi,
            });
        }
        Ok(VertexSet { universe, bits })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn insert(&mut self, v: i64) -> Result<(), SubsetError> {
        if !self.universe.contains(v) {
            return Err(SubsetError::OutOfRange {
                v,
                lo: self.universe.lo,
                hi: self.universe.hi,
            });
        }
        self.bits |= 1 << (v - self.universe.lo);
        Ok(())
    }

    pub fn contains(&self, v: i64) -> bool {
        self.universe.contains(v) && self.bits >> (v - self.universe.lo) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == self.universe.full_mask()
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        let lo = self.universe.lo;
        (0..self.universe.len()).filter(move |i| self.bits >> i & 1 == 1).map(move |i| lo + i as i64)
    }

    fn check(&self, other: &Self) -> Result<(), SubsetError> {
        if self.universe != other.universe {
            return Err(SubsetError::UniverseMismatch(
                self.universe.lo,
                self.universe.hi,
                other.universe.lo,
                other.universe.hi,
            ));
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self, SubsetError> {
        self.check(other)?;
        Ok(VertexSet {
            universe: self.universe,
            bits: self.bits | other.bits,
        })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, SubsetError> {
        self.check(other)?;
        Ok(VertexSet {
            universe: self.universe,
            bits: self.bits & other.bits,
        })
    }

    pub fn difference(&self, other: &Self) -> Result<Self, SubsetError> {
        self.check(other)?;
        Ok(VertexSet {
            universe: self.universe,
            bits: self.bits & !other.bits,
        })
    }

    pub fn symmetric_difference(&self, other: &Self) -> Result<Self, SubsetError> {
        self.check(other)?;
        Ok(VertexSet {
            universe: self.universe,
            bits: self.bits ^ other.bits,
        })
    }

    pub fn complement(&self) -> Self {
        VertexSet {
            universe: self.universe,
            bits: !self.bits & self.universe.full_mask(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.universe == other.universe && self.bits & !other.bits == 0
    }

    /// Maximal runs of consecutive members, as inclusive `(start, end)` pairs.
    pub fn components(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = Vec::new();
        for v in self.iter() {
            match out.last_mut() {
                Some((_, end)) if *end + 1 == v => *end = v,
                _ => out.push((v, v)),
            }
        }
        out
    }

    /// Every subset of the universe, in bit order. Only sensible for tiny universes.
    pub fn all_subsets(universe: Universe) -> impl Iterator<Item = VertexSet> {
        assert!(universe.len() <= 24, "refusing to enumerate 2^{} subsets", universe.len());
        (0..1u64 << universe.len()).map(move |bits| VertexSet { universe, bits })
    }
}
