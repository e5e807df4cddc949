//! The Boolean algebra of subsets of a finite universe, its Boolean-ring
//! structure, and its prime ideals.
//!
//! As a ring, addition is symmetric difference and multiplication is
//! intersection. An ideal of the algebra is a nonempty family closed under
//! joins and under taking subsets; it is prime when it is proper and contains a
//! factor of every meet it contains. On a finite universe the primes are exactly
//! the point ideals `P_a = {x : a ∉ x}`.

use std::collections::BTreeSet;

use serde::ser::{Serialize, SerializeSeq, Serializer};
use thiserror::Error;

use crate::subset::{SubsetError, Universe, VertexSet};

/// Largest universe for exhaustive prime enumeration.
pub const EXHAUSTIVE_MAX: usize = 4;
/// Largest universe for which point ideals are materialized as explicit families.
pub const MATERIALIZE_MAX: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BooleanError {
    #[error("universe of {len} points is too large for {what} (max {max})")]
    TooLarge { what: &'static str, len: usize, max: usize },
    #[error("point {a} is outside the universe")]
    PointOutside { a: i64 },
    #[error(transparent)]
    Subset(#[from] SubsetError),
}

pub fn join(x: &VertexSet, y: &VertexSet) -> Result<VertexSet, BooleanError> {
    Ok(x.union(y)?)
}

pub fn meet(x: &VertexSet, y: &VertexSet) -> Result<VertexSet, BooleanError> {
    Ok(x.intersection(y)?)
}

pub fn complement(x: &VertexSet) -> VertexSet {
    x.complement()
}

/// `(x ∧ y') ∨ (x' ∧ y)`, i.e. symmetric difference.
pub fn ring_add(x: &VertexSet, y: &VertexSet) -> Result<VertexSet, BooleanError> {
    let left = meet(x, &complement(y))?;
    let right = meet(&complement(x), y)?;
    join(&left, &right)
}

pub fn ring_mul(x: &VertexSet, y: &VertexSet) -> Result<VertexSet, BooleanError> {
    meet(x, y)
}

/// Coordinates in `∏ ℤ/2`, one per universe point in increasing order.
pub fn to_indicator(x: &VertexSet) -> Vec<u8> {
    x.universe().vertices().map(|v| u8::from(x.contains(v))).collect()
}

pub fn from_indicator(universe: Universe, bits: &[u8]) -> Result<VertexSet, BooleanError> {
    let members = universe
        .vertices()
        .zip(bits)
        .filter(|(_, &b)| b % 2 == 1)
        .map(|(v, _)| v);
    Ok(VertexSet::from_vertices(universe, members)?)
}

/// An explicit family of subsets of a universe.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdealFamily {
    universe: Universe,
    members: BTreeSet<VertexSet>,
}

impl Serialize for IdealFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.members.len()))?;
        for m in &self.members {
            seq.serialize_element(&m.iter().collect::<Vec<_>>())?;
        }
        seq.end()
    }
}

impl IdealFamily {
    pub fn new(universe: Universe, members: impl IntoIterator<Item = VertexSet>) -> Result<Self, BooleanError> {
        let mut set = BTreeSet::new();
        for m in members {
            if m.universe() != universe {
                let other = m.universe();
                return Err(SubsetError::UniverseMismatch(universe.lo(), universe.hi(), other.lo(), other.hi()).into());
            }
            set.insert(m);
        }
        Ok(IdealFamily { universe, members: set })
    }

    /// Families given as lists of vertex lists.
    pub fn from_lists(universe: Universe, lists: &[&[i64]]) -> Result<Self, BooleanError> {
        let members = lists
            .iter()
            .map(|l| VertexSet::from_vertices(universe, l.iter().copied()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(universe, members)
    }

    /// The whole power set.
    pub fn power_set(universe: Universe) -> Result<Self, BooleanError> {
        if universe.len() > MATERIALIZE_MAX {
            return Err(BooleanError::TooLarge {
                what: "materializing a power set",
                len: universe.len(),
                max: MATERIALIZE_MAX,
            });
        }
        Ok(IdealFamily {
            universe,
            members: VertexSet::all_subsets(universe).collect(),
        })
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    pub fn members(&self) -> &BTreeSet<VertexSet> {
        &self.members
    }

    pub fn contains(&self, x: &VertexSet) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Nonempty, closed under joins and under subsets.
    pub fn is_ideal(&self) -> bool {
        if self.members.is_empty() {
            return false;
        }
        // Downward closure reduces to: removing any single point stays inside.
        let down = self.members.iter().all(|x| {
            x.iter().all(|v| {
                let mut bits = x.bits();
                bits &= !(1u64 << (v - self.universe.lo()));
                VertexSet::from_bits(self.universe, bits).is_ok_and(|y| self.members.contains(&y))
            })
        });
        down && self
            .members
            .iter()
            .all(|x| self.members.iter().all(|y| x.union(y).is_ok_and(|z| self.members.contains(&z))))
    }

    pub fn is_proper(&self) -> bool {
        !self.members.contains(&VertexSet::full(self.universe))
    }

    /// Proper ideal such that `x ∧ y ∈ J` forces `x ∈ J` or `y ∈ J`.
    pub fn is_prime_ideal(&self) -> bool {
        if !self.is_ideal() || !self.is_proper() {
            return false;
        }
        let all: Vec<VertexSet> = VertexSet::all_subsets(self.universe).collect();
        all.iter().all(|x| {
            self.contains(x)
                || all
                    .iter()
                    .all(|y| self.contains(y) || !self.contains(&x.intersection(y).expect("same universe")))
        })
    }

    /// Proper ideal with nothing strictly between it and the whole algebra.
    ///
    /// Adjoining any `x ∉ J` generates `{y : y ⊆ j ∨ x, j ∈ J}`, which is the
    /// whole algebra exactly when `j ∨ x` is the top element for some `j`.
    pub fn is_maximal(&self) -> bool {
        if !self.is_ideal() || !self.is_proper() {
            return false;
        }
        let top = VertexSet::full(self.universe);
        VertexSet::all_subsets(self.universe)
            .filter(|x| !self.contains(x))
            .all(|x| self.members.iter().any(|j| j.union(&x).is_ok_and(|u| u == top)))
    }
}

/// The point ideal `P_a`, evaluated lazily.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimePoint {
    universe: Universe,
    a: i64,
}

impl PrimePoint {
    pub fn new(universe: Universe, a: i64) -> Result<Self, BooleanError> {
        if !universe.contains(a) {
            return Err(BooleanError::PointOutside { a });
        }
        Ok(PrimePoint { universe, a })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// `x ∈ P_a` iff `a ∉ x`.
    pub fn contains(&self, x: &VertexSet) -> bool {
        x.universe() == self.universe && !x.contains(self.a)
    }

    pub fn to_family(&self) -> Result<IdealFamily, BooleanError> {
        if self.universe.len() > MATERIALIZE_MAX {
            return Err(BooleanError::TooLarge {
                what: "materializing a point ideal",
                len: self.universe.len(),
                max: MATERIALIZE_MAX,
            });
        }
        IdealFamily::new(
            self.universe,
            VertexSet::all_subsets(self.universe).filter(|x| !x.contains(self.a)),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrimeEnumeration {
    /// Scan every family of subsets; ground truth for tiny universes.
    Exhaustive,
    /// Construct the point ideals directly.
    Principal,
}

/// All prime ideals of the subset algebra of `universe`, sorted.
pub fn enumerate_primes(universe: Universe, mode: PrimeEnumeration) -> Result<Vec<IdealFamily>, BooleanError> {
    let mut out = match mode {
        PrimeEnumeration::Principal => universe
            .vertices()
            .map(|a| PrimePoint::new(universe, a)?.to_family())
            .collect::<Result<Vec<_>, _>>()?,
        PrimeEnumeration::Exhaustive => {
            if universe.len() > EXHAUSTIVE_MAX {
                return Err(BooleanError::TooLarge {
                    what: "exhaustive prime enumeration",
                    len: universe.len(),
                    max: EXHAUSTIVE_MAX,
                });
            }
            all_families(universe).filter(IdealFamily::is_prime_ideal).collect()
        }
    };
    out.sort();
    Ok(out)
}

/// Every family of subsets of a universe of at most [`EXHAUSTIVE_MAX`] points.
pub fn all_families(universe: Universe) -> impl Iterator<Item = IdealFamily> {
    assert!(universe.len() <= EXHAUSTIVE_MAX);
    let subsets: Vec<VertexSet> = VertexSet::all_subsets(universe).collect();
    let count = 1u64 << subsets.len();
    (0..count).map(move |mask| IdealFamily {
        universe,
        members: subsets
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, s)| *s)
            .collect(),
    })
}
