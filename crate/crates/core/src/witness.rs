//! Machine-checked membership chains for the support argument.
//!
//! Given `v` with proper support in a prime tensor ideal `M`, assuming
//! `K_{supp(v)ᶜ} ∈ M` lets one derive `K_window ∈ M` using only the closure
//! axioms (extensions, kernels, tensoring with anything, primality). The chain
//! built here records every deduction together with the data needed to
//! re-check it: gluing matrices for extensions, morphism components for
//! kernels, tensor factors, and the other factor of a prime split.
//!
//! Turning points of the window (sinks and sources, window ends included)
//! alternate. They are labelled consecutively, with label 0 on the leftmost
//! interior sink, so sinks carry even labels and sources odd ones.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::barcode::is_isomorphic;
use crate::boolean::{BooleanError, IdealFamily, MATERIALIZE_MAX};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::quiver::{
    check_kernel_cokernel_exact, check_short_exact, extension, interval_rep, kernel_rank_one, support, tensor,
    zero_gluing, IntervalSet, Morphism, QuiverError, QuiverWindow, Representation,
};
use crate::subset::{SubsetError, Universe, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WitnessError {
    #[error("window [{0}, {0}] has no arrows, so no sink/source labelling")]
    NoArrows(i64),
    #[error("representation has full support; nothing to refute")]
    FullSupport,
    #[error("representation lives on a different window")]
    WindowMismatch,
    #[error("step {index} ({label}) fails: {reason}")]
    StepFailed { index: usize, label: String, reason: String },
    #[error("branch {branch} ends at a representation other than K_window")]
    WrongConclusion { branch: String },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Subset(#[from] SubsetError),
    #[error(transparent)]
    Boolean(#[from] BooleanError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Sink,
    Source,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Label {
    pub vertex: i64,
    pub index: i64,
    pub role: Role,
}

/// Alternating sinks `t_{2k}` and sources `s_{2k+1}`, in increasing vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SinkSourceLabeling {
    #[serde(skip)]
    window: QuiverWindow,
    labels: Vec<Label>,
}

/// Which side of the prime split a branch follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    B,
    D,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::B => "B",
            Side::D => "D",
        })
    }
}

impl Side {
    /// Residue mod 4 of the sinks whose basins form this side's starting set.
    fn kept(self) -> i64 {
        match self {
            Side::B => 0,
            Side::D => 2,
        }
    }

    /// Residue of the sinks left out at the end (the set `E`).
    fn excluded(self) -> i64 {
        (self.kept() + 2) % 4
    }
}

/// Labels turning points, with `t_0` the leftmost interior sink, or the
/// leftmost sink when the orientation is a single run.
pub fn sinks_and_sources(w: &QuiverWindow) -> Result<SinkSourceLabeling, WitnessError> {
    if w.num_arrows() == 0 {
        return Err(WitnessError::NoArrows(w.lo()));
    }
    let turning: Vec<(i64, Role)> = w
        .vertices()
        .filter_map(|v| {
            if w.is_sink(v) {
                Some((v, Role::Sink))
            } else if w.is_source(v) {
                Some((v, Role::Source))
            } else {
                None
            }
        })
        .collect();
    let interior = |v: i64| v != w.lo() && v != w.hi();
    let j0 = turning
        .iter()
        .position(|&(v, r)| r == Role::Sink && interior(v))
        .or_else(|| turning.iter().position(|&(_, r)| r == Role::Sink))
        .expect("a window with arrows has a sink");
    let labels = turning
        .iter()
        .enumerate()
        .map(|(j, &(vertex, role))| Label {
            vertex,
            index: j as i64 - j0 as i64,
            role,
        })
        .collect();
    Ok(SinkSourceLabeling {
        window: w.clone(),
        labels,
    })
}

impl SinkSourceLabeling {
    pub fn window(&self) -> &QuiverWindow {
        &self.window
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn t0(&self) -> i64 {
        self.labels.iter().find(|l| l.index == 0).expect("t_0 exists").vertex
    }

    pub fn sources(&self) -> impl Iterator<Item = i64> + '_ {
        self.labels.iter().filter(|l| l.role == Role::Source).map(|l| l.vertex)
    }

    /// Sinks whose label is congruent to `residue` mod 4.
    pub fn sinks_mod4(&self, residue: i64) -> impl Iterator<Item = i64> + '_ {
        self.labels
            .iter()
            .filter(move |l| l.role == Role::Sink && l.index.rem_euclid(4) == residue)
            .map(|l| l.vertex)
    }

    /// Nearest turning points on either side of sink `t`, or `t` itself at a window end.
    fn basin(&self, t: i64) -> (i64, i64) {
        let j = self.labels.iter().position(|l| l.vertex == t).expect("labelled sink");
        let left = if j > 0 { self.labels[j - 1].vertex } else { t };
        let right = self.labels.get(j + 1).map_or(t, |l| l.vertex);
        (left, right)
    }
}

/// Starting sets `(B, D, C)`: each of `B` and `D` is every source together with
/// the spans between the sources flanking alternate sinks; `C` is the set of
/// sources, which is `B ∩ D`.
pub fn bdc_sets(lab: &SinkSourceLabeling) -> Result<(IntervalSet, IntervalSet, IntervalSet), WitnessError> {
    let w = &lab.window;
    let c = w.set(lab.sources())?;
    let side = |s: Side| -> Result<IntervalSet, WitnessError> {
        let mut out = c;
        for t in lab.sinks_mod4(s.kept()) {
            let (l, r) = lab.basin(t);
            out = out.union(&w.set(l..=r)?)?;
        }
        Ok(out)
    };
    Ok((side(Side::B)?, side(Side::D)?, c))
}

/// The sinks excluded from a side's final set.
pub fn excluded_sinks(lab: &SinkSourceLabeling, side: Side) -> Result<IntervalSet, WitnessError> {
    Ok(lab.window.set(lab.sinks_mod4(side.excluded()))?)
}

/// A saturation run: the fixpoint and the points added at each growth step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Saturation {
    pub result: IntervalSet,
    pub layers: Vec<IntervalSet>,
}

impl Saturation {
    /// Growth steps plus the final pass that finds nothing to add.
    pub fn iterations(&self) -> usize {
        self.layers.len() + 1
    }
}

fn saturate(start: &IntervalSet, lab: &SinkSourceLabeling, side: Side, rightward: bool) -> Result<Saturation, WitnessError> {
    let w = &lab.window;
    let mut current = *start;
    let mut layers = Vec::new();
    // Each excluded sink's basin is filled from the source on one side,
    // one vertex per step, stopping short of the sink.
    let walks: Vec<(i64, i64)> = lab
        .sinks_mod4(side.excluded())
        .map(|t| {
            let (l, r) = lab.basin(t);
            if rightward {
                (l, t)
            } else {
                (r, t)
            }
        })
        .filter(|&(s, t)| s != t)
        .collect();
    loop {
        let mut added = w.empty_set();
        for &(s, t) in &walks {
            let step = if rightward { 1 } else { -1 };
            let mut x = s + step;
            while x != t && current.contains(x) {
                x += step;
            }
            if x != t && current.contains(x - step) && !w.is_sink(x) {
                added.insert(x)?;
            }
        }
        if added.is_empty() {
            break;
        }
        current = current.union(&added)?;
        layers.push(added);
    }
    Ok(Saturation { result: current, layers })
}

/// Grows a side's set toward each excluded sink from its left source.
pub fn saturate_right(b: &IntervalSet, lab: &SinkSourceLabeling, side: Side) -> Result<Saturation, WitnessError> {
    saturate(b, lab, side, true)
}

/// Grows toward each excluded sink from its right source.
pub fn saturate_left(b: &IntervalSet, lab: &SinkSourceLabeling, side: Side) -> Result<Saturation, WitnessError> {
    saturate(b, lab, side, false)
}

/// Why an object belongs to the ideal. Indices refer to earlier steps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification<F> {
    /// Assumed.
    Seed,
    /// `object = member ⊗ factor` for an arbitrary `factor`.
    TensorAbsorb { member: usize, factor: Representation<F> },
    /// `object` is the middle term of `0 → sub → object → quotient → 0` built from `eps`.
    Extension { sub: usize, quotient: usize, eps: Vec<Matrix<F>> },
    /// `object = ker f` for `f : source → target`.
    KernelOf { source: usize, target: usize, components: Vec<Matrix<F>> },
    /// `object = coker f` for `f : source → target`.
    CokernelOf { source: usize, target: usize, components: Vec<Matrix<F>> },
    /// `object` has the same barcode as `member`.
    IsoReplace { member: usize },
    /// `object ⊗ other ≅ product`; primality puts `object` or `other` in the
    /// ideal, and this branch takes `object`.
    PrimeBranch { product: usize, other: Representation<F> },
}

impl<F> Justification<F> {
    pub fn tag(&self) -> &'static str {
        match self {
            Justification::Seed => "seed",
            Justification::TensorAbsorb { .. } => "tensor_absorb",
            Justification::Extension { .. } => "extension",
            Justification::KernelOf { .. } => "kernel_of",
            Justification::CokernelOf { .. } => "cokernel_of",
            Justification::IsoReplace { .. } => "iso_replace",
            Justification::PrimeBranch { .. } => "prime_branch",
        }
    }

    pub fn refs(&self) -> Vec<usize> {
        match self {
            Justification::Seed => vec![],
            Justification::TensorAbsorb { member, .. } | Justification::IsoReplace { member } => vec![*member],
            Justification::Extension { sub, quotient, .. } => vec![*sub, *quotient],
            Justification::KernelOf { source, target, .. } | Justification::CokernelOf { source, target, .. } => {
                vec![*source, *target]
            }
            Justification::PrimeBranch { product, .. } => vec![*product],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessStep<F> {
    pub label: String,
    pub object: Representation<F>,
    pub justification: Justification<F>,
}

/// One side of the prime split. Step `k` has global index `trunk.len() + k`
/// and may cite trunk steps or earlier steps of the same branch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch<F> {
    pub side: Side,
    pub steps: Vec<WitnessStep<F>>,
    pub right: Saturation,
    pub left: Saturation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessChain<F> {
    pub window: QuiverWindow,
    pub labeling: SinkSourceLabeling,
    pub trunk: Vec<WitnessStep<F>>,
    pub branches: Vec<Branch<F>>,
}

struct Builder<'a, F> {
    trunk: &'a [WitnessStep<F>],
    steps: Vec<WitnessStep<F>>,
}

impl<F: Field> Builder<'_, F> {
    fn object(&self, i: usize) -> &Representation<F> {
        if i < self.trunk.len() {
            &self.trunk[i].object
        } else {
            &self.steps[i - self.trunk.len()].object
        }
    }

    fn push(&mut self, label: impl Into<String>, object: Representation<F>, justification: Justification<F>) -> usize {
        self.steps.push(WitnessStep {
            label: label.into(),
            object,
            justification,
        });
        self.trunk.len() + self.steps.len() - 1
    }

    /// `K_added` by absorption into `K'`, then the extension by it.
    fn grow(&mut self, all_simples: usize, prev: usize, added: &IntervalSet, label: &str) -> Result<usize, WitnessError> {
        let window = self.object(prev).window().clone();
        let k_added: Representation<F> = interval_rep(&window, added);
        let absorbed = tensor(self.object(all_simples), &k_added)?;
        let sub = self.push(
            format!("K_{{{label} added}}"),
            absorbed,
            Justification::TensorAbsorb {
                member: all_simples,
                factor: k_added,
            },
        );
        let eps = gluing_into(self.object(sub), self.object(prev), added);
        let ext = extension(self.object(sub), self.object(prev), &eps)?;
        Ok(self.push(
            format!("K_{{{label}}}"),
            ext.middle,
            Justification::Extension { sub, quotient: prev, eps },
        ))
    }
}

/// Gluing that makes `K_old`-extended-by-`K_added` an interval representation:
/// a `1` on every arrow from an old vertex into an added one.
fn gluing_into<F: Field>(sub: &Representation<F>, quotient: &Representation<F>, added: &IntervalSet) -> Vec<Matrix<F>> {
    let window = sub.window();
    let mut eps = zero_gluing(sub, quotient);
    for (i, e) in eps.iter_mut().enumerate() {
        let (s, t) = window.arrow_ends(i);
        let (sv, tv) = (window.lo() + s as i64, window.lo() + t as i64);
        if added.contains(tv) && quotient.dims()[s] > 0 && e.shape() == (1, 1) && !added.contains(sv) {
            e[(0, 0)] = F::one();
        }
    }
    eps
}

/// Builds and verifies the full chain for `v`.
pub fn full_witness<F: Field>(v: &Representation<F>) -> Result<WitnessChain<F>, WitnessError> {
    let window = v.window().clone();
    let supp = support(v);
    if supp.is_full() {
        return Err(WitnessError::FullSupport);
    }
    let labeling = sinks_and_sources(&window)?;
    let (b, d, c) = bdc_sets(&labeling)?;
    let all_simples = Representation::<F>::all_simples(&window);

    let mut trunk: Vec<WitnessStep<F>> = Vec::new();
    let push = |trunk: &mut Vec<WitnessStep<F>>, label: &str, object, justification| {
        trunk.push(WitnessStep {
            label: label.to_string(),
            object,
            justification,
        });
        trunk.len() - 1
    };
    let seed_v = push(&mut trunk, "V", v.clone(), Justification::Seed);
    let seed_c = push(&mut trunk, "K_{supp(V)^c}", interval_rep(&window, &supp.complement()), Justification::Seed);
    let eps = zero_gluing(&trunk[seed_v].object, &trunk[seed_c].object);
    let sum = extension(&trunk[seed_v].object, &trunk[seed_c].object, &eps)?;
    let sum = push(
        &mut trunk,
        "V ⊕ K_{supp(V)^c}",
        sum.middle,
        Justification::Extension {
            sub: seed_v,
            quotient: seed_c,
            eps,
        },
    );
    let absorbed = tensor(&trunk[sum].object, &all_simples)?;
    let absorbed = push(
        &mut trunk,
        "(V ⊕ K_{supp(V)^c}) ⊗ K'",
        absorbed,
        Justification::TensorAbsorb {
            member: sum,
            factor: all_simples.clone(),
        },
    );
    let f = kernel_rank_one(&trunk[absorbed].object)?;
    let (ker, _) = f.kernel()?;
    let mut k_prime = push(
        &mut trunk,
        "K'",
        ker,
        Justification::KernelOf {
            source: absorbed,
            target: absorbed,
            components: f.components().to_vec(),
        },
    );
    if trunk[k_prime].object != all_simples {
        k_prime = push(&mut trunk, "K'", all_simples.clone(), Justification::IsoReplace { member: k_prime });
    }
    let k_c: Representation<F> = interval_rep(&window, &c);
    let absorbed_c = tensor(&trunk[k_prime].object, &k_c)?;
    let k_c_step = push(
        &mut trunk,
        "K_C",
        absorbed_c,
        Justification::TensorAbsorb {
            member: k_prime,
            factor: k_c,
        },
    );

    let mut branches = Vec::new();
    for (side, start, other) in [(Side::B, b, d), (Side::D, d, b)] {
        let mut builder = Builder {
            trunk: &trunk,
            steps: Vec::new(),
        };
        let mut cur = builder.push(
            format!("K_{side}"),
            interval_rep(&window, &start),
            Justification::PrimeBranch {
                product: k_c_step,
                other: interval_rep(&window, &other),
            },
        );
        let right = saturate_right(&start, &labeling, side)?;
        for (l, layer) in right.layers.iter().enumerate() {
            cur = builder.grow(k_prime, cur, layer, &format!("{side}_{}", l + 1))?;
        }
        let left = saturate_left(&right.result, &labeling, side)?;
        for (l, layer) in left.layers.iter().enumerate() {
            cur = builder.grow(k_prime, cur, layer, &format!("{side}'_{}", l + 1))?;
        }
        let e = excluded_sinks(&labeling, side)?;
        if !e.is_empty() {
            cur = builder.grow(k_prime, cur, &e, "window")?;
        }
        let _ = cur;
        let steps = builder.steps;
        branches.push(Branch {
            side,
            steps,
            right,
            left,
        });
    }

    let chain = WitnessChain {
        window,
        labeling,
        trunk,
        branches,
    };
    verify_chain(&chain)?;
    Ok(chain)
}

fn check_justification<F: Field>(
    object: &Representation<F>,
    justification: &Justification<F>,
    earlier: &dyn Fn(usize) -> Option<Representation<F>>,
) -> Result<(), String> {
    let get = |i: usize| earlier(i).ok_or_else(|| format!("reference to step {i} is not earlier in the chain"));
    let same = |a: &Representation<F>, b: &Representation<F>| a == b || is_isomorphic(a, b);
    match justification {
        Justification::Seed => Ok(()),
        Justification::TensorAbsorb { member, factor } => {
            let product = tensor(&get(*member)?, factor).map_err(|e| e.to_string())?;
            same(&product, object).then_some(()).ok_or("object is not member ⊗ factor".into())
        }
        Justification::Extension { sub, quotient, eps } => {
            let ext = extension(&get(*sub)?, &get(*quotient)?, eps).map_err(|e| e.to_string())?;
            check_short_exact(&ext.inclusion, &ext.projection).map_err(|e| e.to_string())?;
            (ext.middle == *object).then_some(()).ok_or("object is not the middle term".into())
        }
        Justification::KernelOf { source, target, components } | Justification::CokernelOf { source, target, components } => {
            let f = Morphism::new(get(*source)?, get(*target)?, components.clone()).map_err(|e| e.to_string())?;
            let (ker, inc) = f.kernel().map_err(|e| e.to_string())?;
            let (coker, proj) = f.cokernel().map_err(|e| e.to_string())?;
            check_kernel_cokernel_exact(&f, &inc, &proj).map_err(|e| e.to_string())?;
            let expected = if matches!(justification, Justification::KernelOf { .. }) { ker } else { coker };
            same(&expected, object).then_some(()).ok_or("object does not match".into())
        }
        Justification::IsoReplace { member } => {
            same(&get(*member)?, object).then_some(()).ok_or("barcodes differ".into())
        }
        Justification::PrimeBranch { product, other } => {
            let p = tensor(object, other).map_err(|e| e.to_string())?;
            same(&p, &get(*product)?).then_some(()).ok_or("object ⊗ other is not the product".into())
        }
    }
}

/// Re-checks every step and that each branch ends at `K_window`.
pub fn verify_chain<F: Field>(chain: &WitnessChain<F>) -> Result<(), WitnessError> {
    let trunk_len = chain.trunk.len();
    let fail = |index: usize, step: &WitnessStep<F>, reason: String| WitnessError::StepFailed {
        index,
        label: step.label.clone(),
        reason,
    };
    for (i, step) in chain.trunk.iter().enumerate() {
        if step.object.window() != &chain.window {
            return Err(fail(i, step, "wrong window".into()));
        }
        let earlier = |j: usize| (j < i).then(|| chain.trunk[j].object.clone());
        check_justification(&step.object, &step.justification, &earlier).map_err(|r| fail(i, step, r))?;
    }
    let unit = Representation::<F>::unit(&chain.window);
    for branch in &chain.branches {
        for (k, step) in branch.steps.iter().enumerate() {
            let i = trunk_len + k;
            if step.object.window() != &chain.window {
                return Err(fail(i, step, "wrong window".into()));
            }
            let earlier = |j: usize| {
                if j < trunk_len {
                    Some(chain.trunk[j].object.clone())
                } else if j < i {
                    Some(branch.steps[j - trunk_len].object.clone())
                } else {
                    None
                }
            };
            check_justification(&step.object, &step.justification, &earlier).map_err(|r| fail(i, step, r))?;
        }
        if branch.steps.last().map(|s| &s.object) != Some(&unit) {
            return Err(WitnessError::WrongConclusion {
                branch: branch.side.to_string(),
            });
        }
    }
    Ok(())
}

impl<F: Field> WitnessChain<F> {
    pub fn len(&self) -> usize {
        self.trunk.len() + self.branches.iter().map(|b| b.steps.len()).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Largest saturation iteration count over both branches and directions.
    pub fn max_iterations(&self) -> usize {
        self.branches
            .iter()
            .flat_map(|b| [b.right.iterations(), b.left.iterations()])
            .max()
            .unwrap_or(0)
    }

    pub fn summary(&self) -> ChainSummary {
        let step = |index: usize, branch: Option<Side>, s: &WitnessStep<F>| {
            let sequence = match &s.justification {
                Justification::Extension { sub, quotient, .. } => {
                    let dims = |j: usize| {
                        if j < self.trunk.len() {
                            self.trunk[j].object.dims().to_vec()
                        } else {
                            let b = self.branches.iter().find(|b| Some(b.side) == branch).expect("branch");
                            b.steps[j - self.trunk.len()].object.dims().to_vec()
                        }
                    };
                    Some(ExactSequenceDims {
                        sub: dims(*sub),
                        middle: s.object.dims().to_vec(),
                        quotient: dims(*quotient),
                    })
                }
                _ => None,
            };
            StepSummary {
                index,
                branch: branch.map(|b| b.to_string()),
                label: s.label.clone(),
                op: s.justification.tag(),
                refs: s.justification.refs(),
                dims: s.object.dims().to_vec(),
                support: support(&s.object).iter().collect(),
                sequence,
            }
        };
        let mut steps: Vec<StepSummary> = self.trunk.iter().enumerate().map(|(i, s)| step(i, None, s)).collect();
        let mut saturation = BTreeMap::new();
        for b in &self.branches {
            steps.extend(b.steps.iter().enumerate().map(|(k, s)| step(self.trunk.len() + k, Some(b.side), s)));
            saturation.insert(
                b.side.to_string(),
                SaturationSummary {
                    right_iterations: b.right.iterations(),
                    left_iterations: b.left.iterations(),
                    right_fixpoint: b.right.result.iter().collect(),
                    left_fixpoint: b.left.result.iter().collect(),
                },
            );
        }
        ChainSummary {
            window: self.window.word(),
            lo: self.window.lo(),
            hi: self.window.hi(),
            max_path_length: self.window.max_path_length(),
            labeling: self.labeling.labels.clone(),
            saturation,
            steps,
            verified: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainSummary {
    pub window: String,
    pub lo: i64,
    pub hi: i64,
    pub max_path_length: usize,
    pub labeling: Vec<Label>,
    pub saturation: BTreeMap<String, SaturationSummary>,
    pub steps: Vec<StepSummary>,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturationSummary {
    pub right_iterations: usize,
    pub left_iterations: usize,
    pub right_fixpoint: Vec<i64>,
    pub left_fixpoint: Vec<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepSummary {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
    pub label: String,
    pub op: &'static str,
    pub refs: Vec<usize>,
    pub dims: Vec<usize>,
    pub support: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<ExactSequenceDims>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactSequenceDims {
    pub sub: Vec<usize>,
    pub middle: Vec<usize>,
    pub quotient: Vec<usize>,
}

/// Smallest join-closed, downward-closed family containing `seeds`: every
/// subset of their union.
pub fn support_ideal_closure(universe: Universe, seeds: &[VertexSet]) -> Result<IdealFamily, WitnessError> {
    let mut top = VertexSet::empty(universe);
    for s in seeds {
        top = top.union(s)?;
    }
    if top.len() > MATERIALIZE_MAX {
        return Err(BooleanError::TooLarge {
            what: "materializing a support ideal",
            len: top.len(),
            max: MATERIALIZE_MAX,
        }
        .into());
    }
    // Enumerate submasks of the union.
    let mut members = Vec::with_capacity(1 << top.len());
    let mut sub = top.bits();
    loop {
        members.push(VertexSet::from_bits(universe, sub)?);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & top.bits();
    }
    Ok(IdealFamily::new(universe, members)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::all_families;
    use crate::field::{Gf2, Gf5, Rational};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(lo: i64, hi: i64, word: &str) -> QuiverWindow {
        QuiverWindow::parse(lo, hi, word).unwrap()
    }

    fn verts(s: &IntervalSet) -> Vec<i64> {
        s.iter().collect()
    }

    fn alternating(n: usize) -> QuiverWindow {
        let word: String = (0..n).map(|i| if i % 2 == 0 { 'R' } else { 'L' }).collect();
        w(0, n as i64, &word)
    }

    #[test]
    fn labeling_examples() {
        let lab = sinks_and_sources(&w(0, 2, "RL")).unwrap();
        assert_eq!(lab.t0(), 1);
        assert_eq!(lab.sources().collect::<Vec<_>>(), vec![0, 2]);
        let lab = sinks_and_sources(&w(0, 4, "RRLL")).unwrap();
        assert_eq!(lab.t0(), 2);
        assert_eq!(lab.sources().collect::<Vec<_>>(), vec![0, 4]);
        let lab = sinks_and_sources(&alternating(8)).unwrap();
        for l in lab.labels() {
            assert_eq!(l.role == Role::Sink, l.vertex % 2 == 1);
            assert_eq!(l.index, l.vertex - 1);
        }
        // Single run: the sink sits at the window end.
        assert_eq!(sinks_and_sources(&w(0, 3, "LLL")).unwrap().t0(), 0);
        assert!(sinks_and_sources(&w(0, 0, "")).is_err());
    }

    #[test]
    fn labels_alternate_and_increase() {
        for n in 1..=9 {
            for q in QuiverWindow::all_orientations(0, n) {
                let lab = sinks_and_sources(&q).unwrap();
                for pair in lab.labels().windows(2) {
                    assert!(pair[0].vertex < pair[1].vertex);
                    assert_eq!(pair[0].index + 1, pair[1].index);
                    assert_ne!(pair[0].role, pair[1].role);
                }
                for l in lab.labels() {
                    assert_eq!(l.role == Role::Sink, l.index % 2 == 0);
                    match l.role {
                        Role::Sink => assert!(q.is_sink(l.vertex)),
                        Role::Source => assert!(q.is_source(l.vertex)),
                    }
                }
            }
        }
    }

    #[test]
    fn bdc_on_alternating_window() {
        let q = alternating(12);
        let (b, d, c) = bdc_sets(&sinks_and_sources(&q).unwrap()).unwrap();
        assert_eq!(verts(&b), vec![0, 1, 2, 4, 5, 6, 8, 9, 10, 12]);
        assert_eq!(verts(&d), vec![0, 2, 3, 4, 6, 7, 8, 10, 11, 12]);
        assert_eq!(verts(&c), vec![0, 2, 4, 6, 8, 10, 12]);
        assert_eq!(b.intersection(&d).unwrap(), c);
        let (kb, kd): (Representation<Gf2>, Representation<Gf2>) = (interval_rep(&q, &b), interval_rep(&q, &d));
        assert_eq!(tensor(&kb, &kd).unwrap(), interval_rep(&q, &c));
    }

    #[test]
    fn bdc_invariants_all_orientations() {
        for n in 1..=8 {
            for q in QuiverWindow::all_orientations(0, n) {
                let lab = sinks_and_sources(&q).unwrap();
                let (b, d, c) = bdc_sets(&lab).unwrap();
                assert_eq!(b.intersection(&d).unwrap(), c);
                for s in lab.sources() {
                    assert!(b.union(&d).unwrap().contains(s));
                }
            }
        }
    }

    #[test]
    fn saturation_examples() {
        // Alternating: nothing to add, one pass.
        let q = alternating(12);
        let lab = sinks_and_sources(&q).unwrap();
        let (b, _, _) = bdc_sets(&lab).unwrap();
        let right = saturate_right(&b, &lab, Side::B).unwrap();
        assert!(right.layers.is_empty());
        assert_eq!(right.iterations(), 1);
        assert_eq!(right.result, b);

        // RRLL-periodic: one growth step on each side.
        let q = w(0, 16, "RRLLRRLLRRLLRRLL");
        let lab = sinks_and_sources(&q).unwrap();
        let (b, _, _) = bdc_sets(&lab).unwrap();
        let right = saturate_right(&b, &lab, Side::B).unwrap();
        let left = saturate_left(&right.result, &lab, Side::B).unwrap();
        let e = excluded_sinks(&lab, Side::B).unwrap();
        for t in e.iter() {
            if t > q.lo() {
                assert!(right.result.contains(t - 1));
            }
            if t < q.hi() {
                assert!(left.result.contains(t + 1));
            }
        }
        assert_eq!(left.result, e.complement());
        assert!(right.iterations() <= q.max_path_length());
        assert!(left.iterations() <= q.max_path_length());
    }

    #[test]
    fn saturation_reaches_complement_of_excluded_sinks() {
        for n in 1..=10 {
            for q in QuiverWindow::all_orientations(0, n) {
                let lab = sinks_and_sources(&q).unwrap();
                let (b, d, _) = bdc_sets(&lab).unwrap();
                for (side, start) in [(Side::B, b), (Side::D, d)] {
                    let right = saturate_right(&start, &lab, side).unwrap();
                    let left = saturate_left(&right.result, &lab, side).unwrap();
                    assert!(right.iterations() <= q.max_path_length(), "{}", q.word());
                    assert!(left.iterations() <= q.max_path_length(), "{}", q.word());
                    assert_eq!(left.result, excluded_sinks(&lab, side).unwrap().complement(), "{}", q.word());
                    // Already saturated input: no growth.
                    assert!(saturate_right(&right.result, &lab, side).unwrap().layers.is_empty());
                }
            }
        }
    }

    #[test]
    fn witness_on_alternating_window() {
        let q = alternating(12);
        let v: Representation<Gf5> = interval_rep(&q, &q.set(0..=5).unwrap());
        let chain = full_witness(&v).unwrap();
        assert_eq!(chain.branches.len(), 2);
        let unit = Representation::unit(&q);
        for b in &chain.branches {
            assert_eq!(b.steps.last().unwrap().object, unit);
        }
        verify_chain(&chain).unwrap();
    }

    #[test]
    fn witness_for_zero_and_full_support() {
        let q = w(0, 4, "RLLR");
        let chain = full_witness(&Representation::<Gf2>::zero(&q)).unwrap();
        assert_eq!(chain.trunk[1].object, Representation::unit(&q));
        assert!(matches!(full_witness(&Representation::<Gf2>::unit(&q)), Err(WitnessError::FullSupport)));
    }

    #[test]
    fn witness_length_is_linear_for_period_four() {
        let q = w(0, 15, "RRLLRRLLRRLLRRL");
        let v: Representation<Rational> = interval_rep(&q, &q.set([3, 4]).unwrap());
        let chain = full_witness(&v).unwrap();
        assert!(chain.len() <= 4 * q.size() + 16, "{}", chain.len());
        assert!(chain.max_iterations() <= q.max_path_length());
    }

    #[test]
    fn tampered_chains_are_rejected() {
        let q = w(0, 5, "RRLRL");
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = Representation::<Gf5>::random_with_support(&q, &q.set([1, 2]).unwrap(), 2, &mut rng);
        let chain = full_witness(&v).unwrap();

        let mut bad = chain.clone();
        let last = bad.branches[0].steps.len() - 1;
        if let Justification::Extension { eps, .. } = &mut bad.branches[0].steps[last].justification {
            for e in eps.iter_mut() {
                if e.shape() == (1, 1) {
                    e[(0, 0)] = Gf5::zero();
                }
            }
        }
        assert!(verify_chain(&bad).is_err());

        let mut bad = chain.clone();
        bad.trunk[2].justification = Justification::IsoReplace { member: 5 };
        assert!(verify_chain(&bad).is_err());

        let mut bad = chain;
        bad.branches[1].steps[0].justification = Justification::PrimeBranch {
            product: 0,
            other: Representation::unit(&q),
        };
        assert!(verify_chain(&bad).is_err());
    }

    #[test]
    fn random_witnesses() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..40 {
            let hi = rng.gen_range(1..=9);
            let q = QuiverWindow::random(0, hi, &mut rng).unwrap();
            let mut supp = VertexSet::from_bits(q.universe(), rng.gen::<u64>() & q.full_set().bits()).unwrap();
            if supp.is_full() {
                supp = supp.difference(&q.set([rng.gen_range(0..=hi)]).unwrap()).unwrap();
            }
            let v = Representation::<Gf2>::random_with_support(&q, &supp, 2, &mut rng);
            let chain = full_witness(&v).unwrap();
            assert!(chain.max_iterations() <= q.max_path_length());
        }
    }

    #[test]
    fn closure_examples() {
        let u = Universe::new(0, 2).unwrap();
        let s = |vs: &[i64]| VertexSet::from_vertices(u, vs.iter().copied()).unwrap();
        assert_eq!(
            support_ideal_closure(u, &[s(&[0])]).unwrap(),
            IdealFamily::from_lists(u, &[&[], &[0]]).unwrap()
        );
        assert_eq!(
            support_ideal_closure(u, &[s(&[0]), s(&[1])]).unwrap(),
            IdealFamily::from_lists(u, &[&[], &[0], &[1], &[0, 1]]).unwrap()
        );
        let once = support_ideal_closure(u, &[s(&[0, 2])]).unwrap();
        let members: Vec<_> = once.members().iter().copied().collect();
        assert_eq!(support_ideal_closure(u, &members).unwrap(), once);
    }

    #[test]
    fn closure_is_minimal_ideal() {
        for n in 1..=3 {
            let u = Universe::new(0, n - 1).unwrap();
            let ideals: Vec<IdealFamily> = all_families(u).filter(IdealFamily::is_ideal).collect();
            let subsets: Vec<VertexSet> = VertexSet::all_subsets(u).collect();
            for mask in 0u32..(1 << subsets.len()) {
                let seeds: Vec<VertexSet> =
                    subsets.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| *s).collect();
                let closure = support_ideal_closure(u, &seeds).unwrap();
                assert!(closure.is_ideal());
                let minimal = ideals
                    .iter()
                    .filter(|j| seeds.iter().all(|s| j.contains(s)))
                    .min_by_key(|j| j.len())
                    .unwrap();
                assert_eq!(&closure, minimal);
            }
        }
    }
}
