//! Windowed type-A quivers and their representations.
//!
//! A [`QuiverWindow`] is the full subquiver on `{lo, …, hi}` of a type-A quiver;
//! arrow `i` joins vertices `lo + i` and `lo + i + 1`. Representations carry one
//! matrix per arrow, of shape `dims[target] × dims[source]`. Everything here is
//! pointwise: direct sums are block diagonal, tensor products are Kronecker
//! products, kernels and cokernels are computed vertex by vertex and the arrow
//! maps are induced by exact solves.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::field::Field;
use crate::linalg::{LinalgError, Matrix};
use crate::subset::{SubsetError, Universe, VertexSet};

pub type IntervalSet = VertexSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("representations live on different windows")]
    WindowMismatch,
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("arrow {arrow}: map has shape {found:?}, expected {expected:?}")]
    ShapeMismatch {
        arrow: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("vertex {vertex}: component has shape {found:?}, expected {expected:?}")]
    ComponentShape {
        vertex: i64,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("square at arrow {arrow} does not commute")]
    NonCommuting { arrow: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Subset(#[from] SubsetError),
}

/// Direction of the arrow between `i` and `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    /// `i → i + 1`
    R,
    /// `i + 1 → i`
    L,
}

impl Dir {
    pub fn symbol(self) -> char {
        match self {
            Dir::R => 'R',
            Dir::L => 'L',
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuiverWindow {
    universe: Universe,
    orientation: Vec<Dir>,
}

impl fmt::Debug for QuiverWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] {}", self.lo(), self.hi(), self.word())
    }
}

impl QuiverWindow {
    pub fn new(lo: i64, hi: i64, orientation: Vec<Dir>) -> Result<Self, QuiverError> {
        let universe = Universe::new(lo, hi).map_err(|e| QuiverError::InvalidWindow(e.to_string()))?;
        if orientation.len() as i64 != hi - lo {
            return Err(QuiverError::InvalidWindow(format!(
                "orientation has {} symbols, window [{lo}, {hi}] needs {}",
                orientation.len(),
                hi - lo
            )));
        }
        Ok(QuiverWindow { universe, orientation })
    }

    /// Parses an orientation word over `{R, L}`.
    pub fn parse(lo: i64, hi: i64, word: &str) -> Result<Self, QuiverError> {
        let orientation = word
            .chars()
            .map(|c| match c {
                'R' | 'r' => Ok(Dir::R),
                'L' | 'l' => Ok(Dir::L),
                other => Err(QuiverError::InvalidWindow(format!("bad orientation symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(lo, hi, orientation)
    }

    /// All arrows pointing right.
    pub fn linear(lo: i64, hi: i64) -> Result<Self, QuiverError> {
        Self::new(lo, hi, vec![Dir::R; (hi - lo).max(0) as usize])
    }

    pub fn random<R: Rng + ?Sized>(lo: i64, hi: i64, rng: &mut R) -> Result<Self, QuiverError> {
        let n = (hi - lo).max(0) as usize;
        Self::new(lo, hi, (0..n).map(|_| if rng.gen_bool(0.5) { Dir::R } else { Dir::L }).collect())
    }

    /// Every orientation of the window `[lo, hi]`.
    pub fn all_orientations(lo: i64, hi: i64) -> impl Iterator<Item = QuiverWindow> {
        let n = (hi - lo).max(0) as u32;
        (0..1u64 << n).map(move |code| {
            let orientation = (0..n).map(|i| if code >> i & 1 == 0 { Dir::R } else { Dir::L }).collect();
            QuiverWindow::new(lo, hi, orientation).expect("valid window")
        })
    }

    pub fn lo(&self) -> i64 {
        self.universe.lo()
    }

    pub fn hi(&self) -> i64 {
        self.universe.hi()
    }

    pub fn universe(&self) -> Universe {
        self.universe
    }

    /// Number of vertices.
    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.orientation.len()
    }

    pub fn orientation(&self) -> &[Dir] {
        &self.orientation
    }

    pub fn word(&self) -> String {
        self.orientation.iter().map(|d| d.symbol()).collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = i64> {
        self.universe.vertices()
    }

    pub fn contains(&self, v: i64) -> bool {
        self.universe.contains(v)
    }

    /// Local (0-based) index of a vertex.
    pub fn index(&self, v: i64) -> usize {
        debug_assert!(self.contains(v));
        (v - self.lo()) as usize
    }

    /// `(source, target)` of arrow `i` as local indices.
    pub fn arrow_ends(&self, i: usize) -> (usize, usize) {
        match self.orientation[i] {
            Dir::R => (i, i + 1),
            Dir::L => (i + 1, i),
        }
    }

    /// Length of the longest directed path, i.e. the longest run of equal symbols.
    pub fn max_path_length(&self) -> usize {
        let mut best = 0;
        let mut run = 0;
        for (i, d) in self.orientation.iter().enumerate() {
            run = if i > 0 && self.orientation[i - 1] == *d { run + 1 } else { 1 };
            best = best.max(run);
        }
        best
    }

    /// No arrow leaves `v`.
    pub fn is_sink(&self, v: i64) -> bool {
        let i = self.index(v);
        let left_in = i == 0 || self.orientation[i - 1] == Dir::R;
        let right_in = i == self.num_arrows() || self.orientation[i] == Dir::L;
        left_in && right_in
    }

    /// No arrow enters `v`.
    pub fn is_source(&self, v: i64) -> bool {
        let i = self.index(v);
        let left_out = i == 0 || self.orientation[i - 1] == Dir::L;
        let right_out = i == self.num_arrows() || self.orientation[i] == Dir::R;
        left_out && right_out
    }

    pub fn sinks(&self) -> Vec<i64> {
        self.vertices().filter(|&v| self.is_sink(v)).collect()
    }

    pub fn sources(&self) -> Vec<i64> {
        self.vertices().filter(|&v| self.is_source(v)).collect()
    }

    pub fn full_set(&self) -> IntervalSet {
        VertexSet::full(self.universe)
    }

    pub fn empty_set(&self) -> IntervalSet {
        VertexSet::empty(self.universe)
    }

    pub fn set(&self, vs: impl IntoIterator<Item = i64>) -> Result<IntervalSet, QuiverError> {
        Ok(VertexSet::from_vertices(self.universe, vs)?)
    }
}

/// A pointwise finite-dimensional representation on a window.
#[derive(Clone, PartialEq, Eq)]
pub struct Representation<F> {
    window: QuiverWindow,
    dims: Vec<usize>,
    maps: Vec<Matrix<F>>,
}

impl<F: fmt::Debug> fmt::Debug for Representation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("window", &self.window)
            .field("dims", &self.dims)
            .field("maps", &self.maps)
            .finish()
    }
}

fn same_window(a: &QuiverWindow, b: &QuiverWindow) -> Result<(), QuiverError> {
    if a == b {
        Ok(())
    } else {
        Err(QuiverError::WindowMismatch)
    }
}

impl<F: Field> Representation<F> {
    pub fn new(window: QuiverWindow, dims: Vec<usize>, maps: Vec<Matrix<F>>) -> Result<Self, QuiverError> {
        if dims.len() != window.size() {
            return Err(QuiverError::LengthMismatch {
                expected: window.size(),
                found: dims.len(),
            });
        }
        if maps.len() != window.num_arrows() {
            return Err(QuiverError::LengthMismatch {
                expected: window.num_arrows(),
                found: maps.len(),
            });
        }
        for (i, m) in maps.iter().enumerate() {
            let (s, t) = window.arrow_ends(i);
            if m.shape() != (dims[t], dims[s]) {
                return Err(QuiverError::ShapeMismatch {
                    arrow: i,
                    expected: (dims[t], dims[s]),
                    found: m.shape(),
                });
            }
        }
        Ok(Representation { window, dims, maps })
    }

    pub fn zero(window: &QuiverWindow) -> Self {
        Self::with_zero_maps(window, vec![0; window.size()])
    }

    /// The tensor unit: dimension 1 everywhere, identity maps.
    pub fn unit(window: &QuiverWindow) -> Self {
        interval_rep(window, &window.full_set())
    }

    /// Dimension 1 everywhere with all arrow maps zero: the direct sum of every
    /// simple representation.
    pub fn all_simples(window: &QuiverWindow) -> Self {
        Self::with_zero_maps(window, vec![1; window.size()])
    }

    pub fn with_zero_maps(window: &QuiverWindow, dims: Vec<usize>) -> Self {
        let maps = (0..window.num_arrows())
            .map(|i| {
                let (s, t) = window.arrow_ends(i);
                Matrix::zeros(dims[t], dims[s])
            })
            .collect();
        Representation {
            window: window.clone(),
            dims,
            maps,
        }
    }

    /// Random dimensions in `0..=max_dim` and random arrow maps.
    pub fn random<R: Rng + ?Sized>(window: &QuiverWindow, max_dim: usize, rng: &mut R) -> Self {
        let dims = (0..window.size()).map(|_| rng.gen_range(0..=max_dim)).collect();
        Self::random_with_dims(window, dims, rng)
    }

    pub fn random_with_dims<R: Rng + ?Sized>(window: &QuiverWindow, dims: Vec<usize>, rng: &mut R) -> Self {
        let maps = (0..window.num_arrows())
            .map(|i| {
                let (s, t) = window.arrow_ends(i);
                Matrix::random(dims[t], dims[s], rng)
            })
            .collect();
        Representation {
            window: window.clone(),
            dims,
            maps,
        }
    }

    /// Random representation whose support is exactly `support`.
    pub fn random_with_support<R: Rng + ?Sized>(window: &QuiverWindow, support: &IntervalSet, max_dim: usize, rng: &mut R) -> Self {
        let dims = window
            .vertices()
            .map(|v| if support.contains(v) { rng.gen_range(1..=max_dim.max(1)) } else { 0 })
            .collect();
        Self::random_with_dims(window, dims, rng)
    }

    pub fn window(&self) -> &QuiverWindow {
        &self.window
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension at a (global) vertex.
    pub fn dim(&self, v: i64) -> usize {
        self.dims[self.window.index(v)]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn maps(&self) -> &[Matrix<F>] {
        &self.maps
    }

    pub fn map(&self, arrow: usize) -> &Matrix<F> {
        &self.maps[arrow]
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }
}

/// `K_S`: dimension 1 on `s`, identity on arrows inside `s`, zero elsewhere.
/// Disconnected `s` gives the direct sum over its components.
pub fn interval_rep<F: Field>(window: &QuiverWindow, s: &IntervalSet) -> Representation<F> {
    assert_eq!(s.universe(), window.universe(), "vertex set from another window");
    let dims: Vec<usize> = window.vertices().map(|v| usize::from(s.contains(v))).collect();
    let maps = (0..window.num_arrows())
        .map(|i| {
            let (src, tgt) = window.arrow_ends(i);
            if dims[src] == 1 && dims[tgt] == 1 {
                Matrix::identity(1)
            } else {
                Matrix::zeros(dims[tgt], dims[src])
            }
        })
        .collect();
    Representation {
        window: window.clone(),
        dims,
        maps,
    }
}

pub fn direct_sum<F: Field>(v: &Representation<F>, w: &Representation<F>) -> Result<Representation<F>, QuiverError> {
    same_window(&v.window, &w.window)?;
    Ok(Representation {
        window: v.window.clone(),
        dims: v.dims.iter().zip(&w.dims).map(|(a, b)| a + b).collect(),
        maps: v.maps.iter().zip(&w.maps).map(|(a, b)| a.block_diag(b)).collect(),
    })
}

/// Direct sum of any number of representations on `window`.
pub fn direct_sum_all<'a, F: Field>(
    window: &QuiverWindow,
    parts: impl IntoIterator<Item = &'a Representation<F>>,
) -> Result<Representation<F>, QuiverError> {
    parts
        .into_iter()
        .try_fold(Representation::zero(window), |acc, p| direct_sum(&acc, p))
}

/// Pointwise tensor product: dimensions multiply, arrow maps are Kronecker products.
pub fn tensor<F: Field>(v: &Representation<F>, w: &Representation<F>) -> Result<Representation<F>, QuiverError> {
    same_window(&v.window, &w.window)?;
    Ok(Representation {
        window: v.window.clone(),
        dims: v.dims.iter().zip(&w.dims).map(|(a, b)| a * b).collect(),
        maps: v.maps.iter().zip(&w.maps).map(|(a, b)| a.kron(b)).collect(),
    })
}

pub fn support<F: Field>(v: &Representation<F>) -> IntervalSet {
    let vs = v.window.vertices().filter(|&x| v.dim(x) > 0);
    VertexSet::from_vertices(v.window.universe(), vs).expect("vertices of own window")
}

/// A morphism of representations: one matrix per vertex making every square commute.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism<F> {
    source: Representation<F>,
    target: Representation<F>,
    components: Vec<Matrix<F>>,
}

impl<F: fmt::Debug> fmt::Debug for Morphism<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Morphism")
            .field("source_dims", &self.source.dims)
            .field("target_dims", &self.target.dims)
            .field("components", &self.components)
            .finish()
    }
}

impl<F: Field> Morphism<F> {
    /// Validates shapes and checks `f_t · V_α = W_α · f_s` exactly for every arrow.
    pub fn new(source: Representation<F>, target: Representation<F>, components: Vec<Matrix<F>>) -> Result<Self, QuiverError> {
        same_window(&source.window, &target.window)?;
        let window = &source.window;
        if components.len() != window.size() {
            return Err(QuiverError::LengthMismatch {
                expected: window.size(),
                found: components.len(),
            });
        }
        for (a, c) in components.iter().enumerate() {
            let expected = (target.dims[a], source.dims[a]);
            if c.shape() != expected {
                return Err(QuiverError::ComponentShape {
                    vertex: window.lo() + a as i64,
                    expected,
                    found: c.shape(),
                });
            }
        }
        let f = Morphism {
            source,
            target,
            components,
        };
        if let Some(arrow) = f.first_noncommuting_square() {
            return Err(QuiverError::NonCommuting { arrow });
        }
        Ok(f)
    }

    fn first_noncommuting_square(&self) -> Option<usize> {
        let window = &self.source.window;
        (0..window.num_arrows()).find(|&i| {
            let (s, t) = window.arrow_ends(i);
            let lhs = self.components[t].mul(&self.source.maps[i]);
            let rhs = self.target.maps[i].mul(&self.components[s]);
            lhs != rhs
        })
    }

    pub fn identity(v: &Representation<F>) -> Self {
        Morphism {
            source: v.clone(),
            target: v.clone(),
            components: v.dims.iter().map(|&d| Matrix::identity(d)).collect(),
        }
    }

    pub fn zero(v: &Representation<F>, w: &Representation<F>) -> Result<Self, QuiverError> {
        same_window(&v.window, &w.window)?;
        Ok(Morphism {
            source: v.clone(),
            target: w.clone(),
            components: v.dims.iter().zip(&w.dims).map(|(&a, &b)| Matrix::zeros(b, a)).collect(),
        })
    }

    pub fn source(&self) -> &Representation<F> {
        &self.source
    }

    pub fn target(&self) -> &Representation<F> {
        &self.target
    }

    pub fn components(&self) -> &[Matrix<F>] {
        &self.components
    }

    pub fn component(&self, v: i64) -> &Matrix<F> {
        &self.components[self.source.window.index(v)]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism<F>) -> Result<Morphism<F>, QuiverError> {
        if self.target != other.source {
            return Err(QuiverError::Precondition("composition: target and source differ".into()));
        }
        Ok(Morphism {
            source: self.source.clone(),
            target: other.target.clone(),
            components: other.components.iter().zip(&self.components).map(|(g, f)| g.mul(f)).collect(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    /// Pointwise injective.
    pub fn is_mono(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.cols())
    }

    /// Pointwise surjective.
    pub fn is_epi(&self) -> bool {
        self.components.iter().all(|c| c.rank() == c.rows())
    }

    /// The kernel object and its inclusion.
    pub fn kernel(&self) -> Result<(Representation<F>, Morphism<F>), QuiverError> {
        let window = &self.source.window;
        let bases: Vec<Matrix<F>> = self.components.iter().map(Matrix::kernel_basis).collect();
        let dims: Vec<usize> = bases.iter().map(Matrix::cols).collect();
        let mut maps = Vec::with_capacity(window.num_arrows());
        for i in 0..window.num_arrows() {
            let (s, t) = window.arrow_ends(i);
            // K_t · M = V_α · K_s
            let image = self.source.maps[i].mul(&bases[s]);
            maps.push(bases[t].solve(&image)?);
        }
        let ker = Representation::new(window.clone(), dims, maps)?;
        let inclusion = Morphism::new(ker.clone(), self.source.clone(), bases)?;
        Ok((ker, inclusion))
    }

    /// The cokernel object and the projection onto it.
    pub fn cokernel(&self) -> Result<(Representation<F>, Morphism<F>), QuiverError> {
        let window = &self.source.window;
        let projections: Vec<Matrix<F>> = self.components.iter().map(Matrix::cokernel_projection).collect();
        let dims: Vec<usize> = projections.iter().map(Matrix::rows).collect();
        let mut maps = Vec::with_capacity(window.num_arrows());
        for i in 0..window.num_arrows() {
            let (s, t) = window.arrow_ends(i);
            // N · q_s = q_t · W_α, solved through the transpose.
            let rhs = projections[t].mul(&self.target.maps[i]).transpose();
            maps.push(projections[s].transpose().solve(&rhs)?.transpose());
        }
        let coker = Representation::new(window.clone(), dims, maps)?;
        let projection = Morphism::new(self.target.clone(), coker.clone(), projections)?;
        Ok((coker, projection))
    }
}

/// Basis of `Hom(v, w)`, from the null space of the commuting-square system.
pub fn hom_basis<F: Field>(v: &Representation<F>, w: &Representation<F>) -> Result<Vec<Morphism<F>>, QuiverError> {
    same_window(&v.window, &w.window)?;
    let window = &v.window;
    let n = window.size();
    // Unknown f_a is w.dims[a] × v.dims[a], row-major, at offset[a].
    let mut offset = vec![0; n + 1];
    for a in 0..n {
        offset[a + 1] = offset[a] + w.dims[a] * v.dims[a];
    }
    let unknowns = offset[n];
    let mut rows: Vec<Vec<F>> = Vec::new();
    for i in 0..window.num_arrows() {
        let (s, t) = window.arrow_ends(i);
        let (va, wa) = (&v.maps[i], &w.maps[i]);
        // (f_t V_α − W_α f_s)[r][c] = 0 for r < w.dims[t], c < v.dims[s].
        for r in 0..w.dims[t] {
            for c in 0..v.dims[s] {
                let mut row = vec![F::zero(); unknowns];
                for k in 0..v.dims[t] {
                    let idx = offset[t] + r * v.dims[t] + k;
                    row[idx] = row[idx].add(&va[(k, c)]);
                }
                for k in 0..w.dims[s] {
                    let idx = offset[s] + k * v.dims[s] + c;
                    row[idx] = row[idx].sub(&wa[(r, k)]);
                }
                rows.push(row);
            }
        }
    }
    let system = if rows.is_empty() {
        Matrix::zeros(0, unknowns)
    } else {
        Matrix::from_rows(rows)
    };
    let kernel = system.kernel_basis();
    let mut out = Vec::with_capacity(kernel.cols());
    for k in 0..kernel.cols() {
        let components = (0..n)
            .map(|a| {
                let data = (offset[a]..offset[a + 1]).map(|idx| kernel[(idx, k)].clone()).collect();
                Matrix::from_vec(w.dims[a], v.dims[a], data)
            })
            .collect();
        out.push(Morphism {
            source: v.clone(),
            target: w.clone(),
            components,
        });
    }
    Ok(out)
}

/// A random element of `Hom(v, w)`.
pub fn random_morphism<F: Field, R: Rng + ?Sized>(
    v: &Representation<F>,
    w: &Representation<F>,
    rng: &mut R,
) -> Result<Morphism<F>, QuiverError> {
    let basis = hom_basis(v, w)?;
    let mut f = Morphism::zero(v, w)?;
    for b in &basis {
        let c = F::random(rng);
        if c.is_zero() {
            continue;
        }
        for (acc, comp) in f.components.iter_mut().zip(&b.components) {
            *acc = acc.try_add(&comp.scale(&c))?;
        }
    }
    Ok(f)
}

/// A short exact sequence `0 → sub → middle → quotient → 0`.
#[derive(Clone)]
pub struct Extension<F> {
    pub middle: Representation<F>,
    pub inclusion: Morphism<F>,
    pub projection: Morphism<F>,
}

impl<F: fmt::Debug> fmt::Debug for Extension<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Extension").field("middle", &self.middle).finish_non_exhaustive()
    }
}

/// Builds the middle term with arrow maps `[[v1_α, eps_α], [0, v2_α]]`.
///
/// `eps[α]` has shape `dims_v1[t(α)] × dims_v2[s(α)]`. Quiver representations
/// have no relations, so every choice of `eps` gives a representation.
pub fn extension<F: Field>(
    v1: &Representation<F>,
    v2: &Representation<F>,
    eps: &[Matrix<F>],
) -> Result<Extension<F>, QuiverError> {
    same_window(&v1.window, &v2.window)?;
    let window = &v1.window;
    if eps.len() != window.num_arrows() {
        return Err(QuiverError::LengthMismatch {
            expected: window.num_arrows(),
            found: eps.len(),
        });
    }
    let dims: Vec<usize> = v1.dims.iter().zip(&v2.dims).map(|(a, b)| a + b).collect();
    let mut maps = Vec::with_capacity(window.num_arrows());
    for (i, e) in eps.iter().enumerate() {
        let (s, t) = window.arrow_ends(i);
        let expected = (v1.dims[t], v2.dims[s]);
        if e.shape() != expected {
            return Err(QuiverError::ShapeMismatch {
                arrow: i,
                expected,
                found: e.shape(),
            });
        }
        let mut m = v1.maps[i].block_diag(&v2.maps[i]);
        m.set_block(0, v1.dims[s], e);
        maps.push(m);
    }
    let middle = Representation::new(window.clone(), dims, maps)?;
    let inclusion_components = (0..window.size())
        .map(|a| Matrix::identity(v1.dims[a]).vstack(&Matrix::zeros(v2.dims[a], v1.dims[a])))
        .collect();
    let projection_components = (0..window.size())
        .map(|a| Matrix::zeros(v2.dims[a], v1.dims[a]).hstack(&Matrix::identity(v2.dims[a])))
        .collect();
    let inclusion = Morphism::new(v1.clone(), middle.clone(), inclusion_components)?;
    let projection = Morphism::new(middle.clone(), v2.clone(), projection_components)?;
    Ok(Extension {
        middle,
        inclusion,
        projection,
    })
}

/// Zero gluing data for [`extension`]: the split extension.
pub fn zero_gluing<F: Field>(v1: &Representation<F>, v2: &Representation<F>) -> Vec<Matrix<F>> {
    (0..v1.window.num_arrows())
        .map(|i| {
            let (s, t) = v1.window.arrow_ends(i);
            Matrix::zeros(v1.dims[t], v2.dims[s])
        })
        .collect()
}

pub fn random_gluing<F: Field, R: Rng + ?Sized>(v1: &Representation<F>, v2: &Representation<F>, rng: &mut R) -> Vec<Matrix<F>> {
    (0..v1.window.num_arrows())
        .map(|i| {
            let (s, t) = v1.window.arrow_ends(i);
            Matrix::random(v1.dims[t], v2.dims[s], rng)
        })
        .collect()
}

/// Extension with random gluing data.
pub fn random_extension<F: Field, R: Rng + ?Sized>(
    v1: &Representation<F>,
    v2: &Representation<F>,
    rng: &mut R,
) -> Result<Extension<F>, QuiverError> {
    let eps = random_gluing(v1, v2, rng);
    extension(v1, v2, &eps)
}

/// Endomorphism of `x` with nullity exactly one at every vertex.
///
/// `x` must have all arrow maps zero and positive dimension everywhere, so any
/// choice of components commutes; the kernel is then the direct sum of all simples.
pub fn kernel_rank_one<F: Field>(x: &Representation<F>) -> Result<Morphism<F>, QuiverError> {
    if x.dims.contains(&0) {
        return Err(QuiverError::Precondition("kernel_rank_one needs full support".into()));
    }
    if x.maps.iter().any(|m| !m.is_zero()) {
        return Err(QuiverError::Precondition("kernel_rank_one needs all arrow maps zero".into()));
    }
    let components = x
        .dims
        .iter()
        .map(|&d| {
            let mut m = Matrix::identity(d);
            m[(0, 0)] = F::zero();
            m
        })
        .collect();
    Morphism::new(x.clone(), x.clone(), components)
}

/// Where a pointwise exactness check failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("exactness fails at vertex {vertex}: {what}")]
pub struct ExactnessFailure {
    pub vertex: i64,
    pub what: &'static str,
}

/// Checks `0 → sub → middle → quotient → 0` is exact at every vertex by rank arithmetic.
pub fn check_short_exact<F: Field>(inclusion: &Morphism<F>, projection: &Morphism<F>) -> Result<(), ExactnessFailure> {
    let window = inclusion.source.window.clone();
    for (a, v) in window.vertices().enumerate() {
        let i = &inclusion.components[a];
        let p = &projection.components[a];
        let fail = |what| Err(ExactnessFailure { vertex: v, what });
        if inclusion.target.dims[a] != projection.source.dims[a] {
            return fail("middle terms differ");
        }
        if i.rank() != i.cols() {
            return fail("inclusion not injective");
        }
        if p.rank() != p.rows() {
            return fail("projection not surjective");
        }
        if !p.mul(i).is_zero() {
            return fail("composite not zero");
        }
        if i.cols() + p.rows() != i.rows() {
            return fail("dimensions do not add up");
        }
    }
    Ok(())
}

/// Checks exactness of `0 → Ker f → V → W → Coker f → 0` pointwise by rank arithmetic.
pub fn check_kernel_cokernel_exact<F: Field>(
    f: &Morphism<F>,
    inclusion: &Morphism<F>,
    projection: &Morphism<F>,
) -> Result<(), ExactnessFailure> {
    let window = f.source.window.clone();
    for (a, v) in window.vertices().enumerate() {
        let fa = &f.components[a];
        let ia = &inclusion.components[a];
        let qa = &projection.components[a];
        let r = fa.rank();
        let fail = |what| Err(ExactnessFailure { vertex: v, what });
        if ia.rank() != ia.cols() {
            return fail("kernel inclusion not injective");
        }
        if !fa.mul(ia).is_zero() {
            return fail("f does not vanish on kernel");
        }
        if ia.cols() != fa.cols() - r {
            return fail("kernel dimension differs from nullity");
        }
        if !qa.mul(fa).is_zero() {
            return fail("projection does not vanish on image");
        }
        if qa.rank() != qa.rows() {
            return fail("cokernel projection not surjective");
        }
        if qa.rows() != fa.rows() - r {
            return fail("cokernel dimension differs from corank");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Gf2, Gf5, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(lo: i64, hi: i64, word: &str) -> QuiverWindow {
        QuiverWindow::parse(lo, hi, word).unwrap()
    }

    #[test]
    fn window_structure() {
        let q = w(0, 4, "RRLL");
        assert_eq!(q.max_path_length(), 2);
        assert_eq!(q.sinks(), vec![2]);
        assert_eq!(q.sources(), vec![0, 4]);
        let q = w(0, 2, "RL");
        assert_eq!(q.sinks(), vec![1]);
        assert_eq!(q.sources(), vec![0, 2]);
        assert!(QuiverWindow::parse(0, 2, "R").is_err());
        assert!(QuiverWindow::parse(0, 2, "RX").is_err());
        assert_eq!(w(3, 3, "").max_path_length(), 0);
        assert_eq!(QuiverWindow::all_orientations(0, 3).count(), 8);
    }

    #[test]
    fn interval_rep_examples() {
        let q = w(0, 2, "RR");
        let z: Representation<Gf2> = interval_rep(&q, &q.empty_set());
        assert!(z.is_zero());
        let full: Representation<Gf2> = interval_rep(&q, &q.full_set());
        assert_eq!(full.dims(), &[1, 1, 1]);
        assert!(full.maps().iter().all(|m| *m == Matrix::identity(1)));
        let split: Representation<Gf2> = interval_rep(&q, &q.set([0, 2]).unwrap());
        assert_eq!(split.dims(), &[1, 0, 1]);
        assert_eq!(split.map(0).shape(), (0, 1));
        assert_eq!(split.map(1).shape(), (1, 0));
    }

    #[test]
    fn direct_sum_dims_add() {
        let q = w(0, 2, "RL");
        let a: Representation<Gf5> = interval_rep(&q, &q.set([0, 1]).unwrap());
        let b = interval_rep(&q, &q.set([1, 2]).unwrap());
        assert_eq!(direct_sum(&a, &b).unwrap().dims(), &[1, 2, 1]);
        assert_eq!(direct_sum(&a, &Representation::zero(&q)).unwrap(), a);
        let other = Representation::<Gf5>::zero(&w(0, 2, "RR"));
        assert_eq!(direct_sum(&a, &other), Err(QuiverError::WindowMismatch));
    }

    #[test]
    fn tensor_of_intervals_is_intersection() {
        let q = w(0, 5, "RLLRR");
        let b = q.set([0, 1, 2, 4]).unwrap();
        let d = q.set([1, 2, 3, 4, 5]).unwrap();
        let kb: Representation<Gf2> = interval_rep(&q, &b);
        let kd = interval_rep(&q, &d);
        assert_eq!(tensor(&kb, &kd).unwrap(), interval_rep(&q, &b.intersection(&d).unwrap()));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = Representation::<Gf5>::random(&q, 3, &mut rng);
        assert_eq!(tensor(&v, &Representation::unit(&q)).unwrap(), v);
    }

    #[test]
    fn support_behaviour() {
        let q = w(0, 3, "RLR");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let v = Representation::<Gf2>::random(&q, 2, &mut rng);
            let u = Representation::<Gf2>::random(&q, 2, &mut rng);
            let (sv, su) = (support(&v), support(&u));
            assert_eq!(support(&tensor(&v, &u).unwrap()), sv.intersection(&su).unwrap());
            assert_eq!(support(&direct_sum(&v, &u).unwrap()), sv.union(&su).unwrap());
        }
        let s = q.set([1, 2]).unwrap();
        assert_eq!(support(&interval_rep::<Gf2>(&q, &s)), s);
    }

    #[test]
    fn kernel_and_cokernel_of_identity_and_zero() {
        let q = w(0, 3, "RRL");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = Representation::<Rational>::random(&q, 2, &mut rng);
        let u = Representation::<Rational>::random(&q, 2, &mut rng);
        let id = Morphism::identity(&v);
        assert!(id.kernel().unwrap().0.is_zero());
        assert!(id.cokernel().unwrap().0.is_zero());
        let z = Morphism::zero(&v, &u).unwrap();
        assert_eq!(z.kernel().unwrap().0.dims(), v.dims());
        assert_eq!(z.cokernel().unwrap().0.dims(), u.dims());
    }

    #[test]
    fn random_morphisms_are_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..60 {
            let q = QuiverWindow::random(0, rng.gen_range(0..5), &mut rng).unwrap();
            let v = Representation::<Gf5>::random(&q, 2, &mut rng);
            let u = Representation::<Gf5>::random(&q, 2, &mut rng);
            let f = random_morphism(&v, &u, &mut rng).unwrap();
            let (k, i) = f.kernel().unwrap();
            let (c, p) = f.cokernel().unwrap();
            check_kernel_cokernel_exact(&f, &i, &p).unwrap();
            assert!(i.is_mono());
            assert!(p.is_epi());
            for (a, x) in q.vertices().enumerate() {
                assert_eq!(c.dim(x), u.dims()[a] - f.components()[a].rank());
                assert_eq!(k.dim(x), v.dims()[a] - f.components()[a].rank());
            }
        }
    }

    #[test]
    fn corrupting_a_component_is_detected() {
        let q = w(0, 3, "RLR");
        let k: Representation<Gf5> = interval_rep(&q, &q.full_set());
        for a in 0..q.size() {
            let mut comps: Vec<Matrix<Gf5>> = Morphism::identity(&k).components().to_vec();
            comps[a][(0, 0)] = Gf5::new(2);
            assert!(matches!(Morphism::new(k.clone(), k.clone(), comps), Err(QuiverError::NonCommuting { .. })));
        }
    }

    #[test]
    fn extension_examples() {
        let q = w(0, 1, "R");
        let v1: Representation<Gf2> = interval_rep(&q, &q.set([1]).unwrap());
        let v2 = interval_rep(&q, &q.set([0]).unwrap());
        let split = extension(&v1, &v2, &zero_gluing(&v1, &v2)).unwrap();
        assert_eq!(split.middle, direct_sum(&v1, &v2).unwrap());
        let glued = extension(&v1, &v2, &[Matrix::identity(1)]).unwrap();
        assert_eq!(glued.middle.dims(), &[1, 1]);
        assert_eq!(*glued.middle.map(0), Matrix::identity(1));
        check_short_exact(&glued.inclusion, &glued.projection).unwrap();
        assert!(extension(&v1, &v2, &[Matrix::identity(2)]).is_err());
    }

    #[test]
    fn kernel_rank_one_examples() {
        let q = w(0, 2, "LR");
        let ones = Representation::<Gf5>::all_simples(&q);
        assert!(kernel_rank_one(&ones).unwrap().is_zero());
        let twos = Representation::<Gf5>::with_zero_maps(&q, vec![2, 2, 2]);
        let f = kernel_rank_one(&twos).unwrap();
        assert!(f.components().iter().all(|c| c.rank() == 1));
        assert_eq!(f.kernel().unwrap().0, ones);
        assert!(kernel_rank_one(&Representation::<Gf5>::unit(&q)).is_err());
        assert!(kernel_rank_one(&Representation::<Gf5>::with_zero_maps(&q, vec![1, 0, 1])).is_err());
    }

    #[test]
    fn mono_epi_examples() {
        let q = w(0, 2, "RR");
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let v = Representation::<Gf2>::random_with_dims(&q, vec![1, 2, 1], &mut rng);
        let id = Morphism::identity(&v);
        assert!(id.is_mono() && id.is_epi());
        assert!(!Morphism::zero(&v, &v).unwrap().is_mono());
        let f = random_morphism(&v, &v, &mut rng).unwrap();
        assert!(f.kernel().unwrap().1.is_mono());
    }
}
