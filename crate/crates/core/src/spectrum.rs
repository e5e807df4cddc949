//! The spectrum of prime tensor ideals on a finite window, matched against the
//! prime spectrum of the subset algebra.
//!
//! Points are the vanishing ideals `M_a = {V : V_a = 0}`, one per vertex. `φ`
//! sends `M_a` to the family of supports of its members, which is the point
//! ideal `P_a`; `ψ` goes back. Closed sets are `Z(S) = {M : S ∩ M = ∅}`.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::boolean::{BooleanError, IdealFamily, PrimePoint};
use crate::field::Field;
use crate::quiver::{
    direct_sum, interval_rep, random_extension, random_morphism, support, tensor, QuiverError, QuiverWindow,
    Representation,
};
use crate::report::Report;
use crate::subset::{SubsetError, VertexSet};

/// Largest window for the exhaustive closed-set computations.
pub const EXHAUSTIVE_WINDOW_MAX: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectrumError {
    #[error("representation lives on window [{found_lo}, {found_hi}], expected [{lo}, {hi}]")]
    WindowMismatch { lo: i64, hi: i64, found_lo: i64, found_hi: i64 },
    #[error("vertex {a} is outside the window")]
    PointOutside { a: i64 },
    #[error("window of {len} vertices is too large (max {max})")]
    TooLarge { len: usize, max: usize },
    #[error(transparent)]
    Boolean(#[from] BooleanError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Subset(#[from] SubsetError),
}

/// The prime tensor ideal `M_a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointIdeal {
    window: QuiverWindow,
    a: i64,
}

impl PointIdeal {
    pub fn new(window: &QuiverWindow, a: i64) -> Result<Self, SpectrumError> {
        if !window.contains(a) {
            return Err(SpectrumError::PointOutside { a });
        }
        Ok(PointIdeal {
            window: window.clone(),
            a,
        })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn window(&self) -> &QuiverWindow {
        &self.window
    }
}

fn same_window(expected: &QuiverWindow, found: &QuiverWindow) -> Result<(), SpectrumError> {
    if expected != found {
        return Err(SpectrumError::WindowMismatch {
            lo: expected.lo(),
            hi: expected.hi(),
            found_lo: found.lo(),
            found_hi: found.hi(),
        });
    }
    Ok(())
}

/// `v ∈ M_a` iff the stalk at `a` vanishes.
pub fn membership<F: Field>(v: &Representation<F>, m: &PointIdeal) -> Result<bool, SpectrumError> {
    same_window(&m.window, v.window())?;
    Ok(v.dim(m.a) == 0)
}

/// `φ(M_a)` as a lazily evaluated point ideal.
pub fn phi_point(m: &PointIdeal) -> PrimePoint {
    PrimePoint::new(m.window.universe(), m.a).expect("point lies in its window")
}

/// `φ(M_a) = {supp V : V ∈ M_a}`, materialized.
///
/// Every subset of the window is the support of its interval representation, so
/// the family is all subsets omitting `a`.
pub fn phi(m: &PointIdeal) -> Result<IdealFamily, SpectrumError> {
    Ok(phi_point(m).to_family()?)
}

/// `ψ(P_a) = {V : supp V ∈ P_a} = M_a`.
pub fn psi(q: &PrimePoint, window: &QuiverWindow) -> Result<PointIdeal, SpectrumError> {
    if q.universe() != window.universe() {
        return Err(SpectrumError::PointOutside { a: q.a() });
    }
    PointIdeal::new(window, q.a())
}

/// The finite spectrum: one point per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpcFiniteModel {
    window: QuiverWindow,
    points: Vec<PointIdeal>,
}

impl SpcFiniteModel {
    pub fn new(window: &QuiverWindow) -> Self {
        let points = window
            .vertices()
            .map(|a| PointIdeal {
                window: window.clone(),
                a,
            })
            .collect();
        SpcFiniteModel {
            window: window.clone(),
            points,
        }
    }

    pub fn window(&self) -> &QuiverWindow {
        &self.window
    }

    pub fn points(&self) -> &[PointIdeal] {
        &self.points
    }

    pub fn all_points(&self) -> VertexSet {
        self.window.full_set()
    }

    pub fn no_points(&self) -> VertexSet {
        self.window.empty_set()
    }
}

/// `Z(S)`, as the set of vertices `a` whose `M_a` meets no member of `S`.
pub fn zariski_closed<F: Field>(s: &[Representation<F>], model: &SpcFiniteModel) -> Result<VertexSet, SpectrumError> {
    let mut out = model.no_points();
    for m in &model.points {
        let mut avoided = true;
        for v in s {
            if membership(v, m)? {
                avoided = false;
                break;
            }
        }
        if avoided {
            out.insert(m.a)?;
        }
    }
    Ok(out)
}

/// Checks `⋂ Z(S_j) = Z(⋃ S_j)` and `Z(S₁) ∪ Z(S₂) = Z({V₁ ⊕ V₂ : Vᵢ ∈ Sᵢ})` on random families.
pub fn closed_set_axioms_check<F: Field, R: Rng + ?Sized>(
    model: &SpcFiniteModel,
    trials: usize,
    rng: &mut R,
) -> Result<Report, SpectrumError> {
    let window = &model.window;
    let mut report = Report::new("closed-set axioms");
    let empty: Vec<Representation<F>> = Vec::new();
    report.check(zariski_closed(&empty, model)? == model.all_points(), || "Z(∅) is not everything".into());
    let zero = [Representation::<F>::zero(window)];
    report.check(zariski_closed(&zero, model)?.is_empty(), || "Z({0}) is not empty".into());

    let family = |rng: &mut R| -> Vec<Representation<F>> {
        let n = rng.gen_range(0..=3);
        (0..n).map(|_| Representation::random(window, 2, rng)).collect()
    };
    for t in 0..trials {
        let families: Vec<Vec<Representation<F>>> = (0..rng.gen_range(1..=3)).map(|_| family(rng)).collect();
        let mut meet = model.all_points();
        for f in &families {
            meet = meet.intersection(&zariski_closed(f, model)?)?;
        }
        let union: Vec<Representation<F>> = families.iter().flatten().cloned().collect();
        let z_union = zariski_closed(&union, model)?;
        report.check(meet == z_union, || format!("trial {t}: intersection identity fails"));

        let (s1, s2) = (family(rng), family(rng));
        let lhs = zariski_closed(&s1, model)?.union(&zariski_closed(&s2, model)?)?;
        let mut sums = Vec::new();
        for v1 in &s1 {
            for v2 in &s2 {
                sums.push(direct_sum(v1, v2)?);
            }
        }
        let rhs = zariski_closed(&sums, model)?;
        report.check(lhs == rhs, || format!("trial {t}: union identity fails"));
    }
    Ok(report)
}

/// `Z({v})ᶜ = Z({K_{window ∖ supp v}})`.
pub fn clopen_check<F: Field>(v: &Representation<F>, model: &SpcFiniteModel) -> Result<bool, SpectrumError> {
    same_window(&model.window, v.window())?;
    let closed = zariski_closed(std::slice::from_ref(v), model)?;
    let other: Representation<F> = interval_rep(&model.window, &support(v).complement());
    let complement = zariski_closed(&[other], model)?;
    Ok(closed.complement() == complement)
}

/// Disjoint basic open sets `(U, V)` with `a ∈ U`, `b ∈ V`, each given by a
/// generating subset `X`: the open set is `Z({K_X})`, whose complement is
/// `Z({K_{window∖X}})`.
pub fn separating_pair<F: Field>(
    model: &SpcFiniteModel,
    a: i64,
    b: i64,
) -> Result<Option<(VertexSet, VertexSet)>, SpectrumError> {
    let window = &model.window;
    let candidates: Vec<VertexSet> = if window.size() <= EXHAUSTIVE_WINDOW_MAX {
        VertexSet::all_subsets(window.universe()).collect()
    } else {
        window.vertices().map(|v| window.set([v])).collect::<Result<_, _>>()?
    };
    for x in candidates {
        let k: Representation<F> = interval_rep(window, &x);
        if !clopen_check(&k, model)? {
            continue;
        }
        let open = zariski_closed(std::slice::from_ref(&k), model)?;
        let other = open.complement();
        if open.contains(a) && other.contains(b) {
            return Ok(Some((open, other)));
        }
    }
    Ok(None)
}

/// Every pair of distinct points is separated by a clopen set and its complement.
pub fn hausdorff_check<F: Field>(model: &SpcFiniteModel) -> Result<bool, SpectrumError> {
    for a in model.window.vertices() {
        for b in model.window.vertices().filter(|&b| b != a) {
            match separating_pair::<F>(model, a, b)? {
                Some((u, v)) if u.intersection(&v)?.is_empty() => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

/// `D_y = {Q : y ∉ Q}` on the Boolean side, as the set of indices `a` of `P_a`.
pub fn basic_open(model: &SpcFiniteModel, y: &VertexSet) -> Result<VertexSet, SpectrumError> {
    let mut out = model.no_points();
    for a in model.window.vertices() {
        let q = PrimePoint::new(model.window.universe(), a)?;
        if !q.contains(y) {
            out.insert(a)?;
        }
    }
    Ok(out)
}

/// Checks that `ψ` carries Boolean closed sets onto Zariski closed sets.
///
/// For every basic generator `W = K_X` the preimage `ψ⁻¹(Z({W}))` is computed
/// directly and compared against `(D_{window∖X})ᶜ`; the two families of basic
/// closed sets must then coincide.
pub fn homeomorphism_check<F: Field>(model: &SpcFiniteModel) -> Result<bool, SpectrumError> {
    let window = &model.window;
    if window.size() > EXHAUSTIVE_WINDOW_MAX {
        return Err(SpectrumError::TooLarge {
            len: window.size(),
            max: EXHAUSTIVE_WINDOW_MAX,
        });
    }
    let universe = window.universe();
    let mut zariski = std::collections::BTreeSet::new();
    let mut boolean = std::collections::BTreeSet::new();
    for x in VertexSet::all_subsets(universe) {
        let w: Representation<F> = interval_rep(window, &x);
        let z = zariski_closed(std::slice::from_ref(&w), model)?;
        let mut preimage = model.no_points();
        for a in window.vertices() {
            let m = psi(&PrimePoint::new(universe, a)?, window)?;
            if z.contains(m.a()) {
                preimage.insert(a)?;
            }
        }
        let formula = basic_open(model, &support(&w).complement())?.complement();
        if preimage != formula {
            return Ok(false);
        }
        zariski.insert(z);
        // Boolean closed set V(y) = {Q : y ∈ Q} for the generator y = x.
        boolean.insert(basic_open(model, &x)?.complement());
    }
    let phi_psi_identity = model.points.iter().all(|m| psi(&phi_point(m), window).is_ok_and(|back| &back == m));
    Ok(phi_psi_identity && zariski == boolean)
}

/// Spot-checks that `M_a` is a prime tensor ideal on sampled data: closed under
/// kernels, cokernels, extensions and tensoring with anything, and prime.
pub fn point_ideal_axioms_check<F: Field, R: Rng + ?Sized>(
    m: &PointIdeal,
    trials: usize,
    rng: &mut R,
) -> Result<Report, SpectrumError> {
    let window = &m.window;
    let mut report = Report::new(format!("prime tensor ideal M_{}", m.a));
    let in_ideal = |rng: &mut R| -> Result<Representation<F>, SpectrumError> {
        let mut supp = VertexSet::from_bits(window.universe(), rng.gen::<u64>() & window.full_set().bits())?;
        supp = supp.difference(&window.set([m.a])?)?;
        Ok(Representation::random_with_support(window, &supp, 2, rng))
    };
    for t in 0..trials {
        let (v, w) = (in_ideal(rng)?, in_ideal(rng)?);
        let f = random_morphism(&v, &w, rng)?;
        let (ker, _) = f.kernel()?;
        let (coker, _) = f.cokernel()?;
        report.check(membership(&ker, m)?, || format!("trial {t}: kernel escapes"));
        report.check(membership(&coker, m)?, || format!("trial {t}: cokernel escapes"));
        let ext = random_extension(&v, &w, rng)?;
        report.check(membership(&ext.middle, m)?, || format!("trial {t}: extension escapes"));
        let any = Representation::<F>::random(window, 2, rng);
        report.check(membership(&tensor(&v, &any)?, m)?, || format!("trial {t}: tensor absorption fails"));
        let (x, y) = (Representation::<F>::random(window, 2, rng), Representation::<F>::random(window, 2, rng));
        let prime = !membership(&tensor(&x, &y)?, m)? || membership(&x, m)? || membership(&y, m)?;
        report.check(prime, || format!("trial {t}: primality fails"));
    }
    Ok(report)
}

/// JSON summary used by the command-line `spectrum` subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumSummary {
    pub window: WindowSummary,
    pub points: Vec<PointSummary>,
    /// Every basic closed set `Z({K_X})`, as sorted vertex lists, deduplicated.
    pub closed_sets: Vec<Vec<i64>>,
    pub hausdorff: bool,
    pub homeomorphism: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WindowSummary {
    pub lo: i64,
    pub hi: i64,
    pub orientation: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointSummary {
    pub vertex: i64,
    pub phi: IdealFamily,
}

pub fn summarize<F: Field>(window: &QuiverWindow) -> Result<SpectrumSummary, SpectrumError> {
    if window.size() > EXHAUSTIVE_WINDOW_MAX {
        return Err(SpectrumError::TooLarge {
            len: window.size(),
            max: EXHAUSTIVE_WINDOW_MAX,
        });
    }
    let model = SpcFiniteModel::new(window);
    let points = model
        .points
        .iter()
        .map(|m| Ok(PointSummary { vertex: m.a, phi: phi(m)? }))
        .collect::<Result<Vec<_>, SpectrumError>>()?;
    let mut closed = std::collections::BTreeSet::new();
    for x in VertexSet::all_subsets(window.universe()) {
        let k: Representation<F> = interval_rep(window, &x);
        closed.insert(zariski_closed(&[k], &model)?);
    }
    Ok(SpectrumSummary {
        window: WindowSummary {
            lo: window.lo(),
            hi: window.hi(),
            orientation: window.word(),
        },
        points,
        closed_sets: closed.iter().map(|z| z.iter().collect()).collect(),
        hausdorff: hausdorff_check::<F>(&model)?,
        homeomorphism: homeomorphism_check::<F>(&model)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{enumerate_primes, PrimeEnumeration};
    use crate::field::{Gf2, Gf5, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(lo: i64, hi: i64, word: &str) -> QuiverWindow {
        QuiverWindow::parse(lo, hi, word).unwrap()
    }

    #[test]
    fn membership_examples() {
        let q = w(0, 2, "RL");
        let zero = Representation::<Gf2>::zero(&q);
        for a in 0..=2 {
            assert!(membership(&zero, &PointIdeal::new(&q, a).unwrap()).unwrap());
        }
        let k1: Representation<Gf2> = interval_rep(&q, &q.set([1]).unwrap());
        assert!(!membership(&k1, &PointIdeal::new(&q, 1).unwrap()).unwrap());
        assert!(membership(&k1, &PointIdeal::new(&q, 0).unwrap()).unwrap());
        let other = Representation::<Gf2>::zero(&w(0, 2, "RR"));
        assert!(membership(&other, &PointIdeal::new(&q, 0).unwrap()).is_err());
        assert!(PointIdeal::new(&q, 3).is_err());
    }

    #[test]
    fn membership_depends_only_on_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..500 {
            let q = QuiverWindow::random(0, rng.gen_range(0..7), &mut rng).unwrap();
            let v = Representation::<Gf5>::random(&q, 2, &mut rng);
            let k: Representation<Gf5> = interval_rep(&q, &support(&v));
            for a in q.vertices() {
                let m = PointIdeal::new(&q, a).unwrap();
                let q_point = phi_point(&m);
                assert_eq!(membership(&v, &m).unwrap(), membership(&k, &m).unwrap());
                let back = psi(&q_point, &q).unwrap();
                assert_eq!(membership(&v, &back).unwrap(), q_point.contains(&support(&v)));
            }
        }
    }

    #[test]
    fn phi_and_psi_are_inverse_bijections() {
        for n in 1..=4 {
            let q = QuiverWindow::linear(0, n - 1).unwrap();
            let model = SpcFiniteModel::new(&q);
            let mut images: Vec<IdealFamily> = model.points().iter().map(|m| phi(m).unwrap()).collect();
            for (m, p) in model.points().iter().zip(&images) {
                assert!(p.is_prime_ideal());
                assert_eq!(*p, PrimePoint::new(q.universe(), m.a()).unwrap().to_family().unwrap());
                assert_eq!(&psi(&phi_point(m), &q).unwrap(), m);
            }
            images.sort();
            assert_eq!(images, enumerate_primes(q.universe(), PrimeEnumeration::Exhaustive).unwrap());
        }
        let q = w(3, 3, "");
        let p = phi(&PointIdeal::new(&q, 3).unwrap()).unwrap();
        assert_eq!(p, IdealFamily::from_lists(q.universe(), &[&[]]).unwrap());
    }

    #[test]
    fn zariski_examples() {
        let q = w(0, 2, "RR");
        let model = SpcFiniteModel::new(&q);
        assert_eq!(zariski_closed::<Gf2>(&[], &model).unwrap(), q.full_set());
        let k1: Representation<Gf2> = interval_rep(&q, &q.set([1]).unwrap());
        assert_eq!(zariski_closed(std::slice::from_ref(&k1), &model).unwrap(), q.set([1]).unwrap());
        let sample = vec![k1, Representation::unit(&q), Representation::zero(&q)];
        assert!(zariski_closed(&sample, &model).unwrap().is_empty());
    }

    #[test]
    fn closed_set_axioms_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for word in ["RLR", "LLRR", ""] {
            let hi = word.len() as i64;
            let model = SpcFiniteModel::new(&w(0, hi, word));
            let report = closed_set_axioms_check::<Gf5, _>(&model, 30, &mut rng).unwrap();
            assert!(report.passed(), "{:?}", report.failures);
        }
    }

    #[test]
    fn clopen_examples() {
        let q = w(0, 3, "RLL");
        let model = SpcFiniteModel::new(&q);
        assert!(clopen_check(&Representation::<Gf2>::zero(&q), &model).unwrap());
        assert!(clopen_check(&Representation::<Gf2>::unit(&q), &model).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let v = Representation::<Rational>::random(&q, 2, &mut rng);
            assert!(clopen_check(&v, &model).unwrap());
        }
    }

    #[test]
    fn hausdorff_examples() {
        assert!(hausdorff_check::<Gf2>(&SpcFiniteModel::new(&w(0, 0, ""))).unwrap());
        let model = SpcFiniteModel::new(&w(0, 1, "R"));
        let (u, v) = separating_pair::<Gf2>(&model, 0, 1).unwrap().unwrap();
        assert!(u.contains(0) && v.contains(1) && u.intersection(&v).unwrap().is_empty());
        for n in 1..=8 {
            let mut rng = ChaCha8Rng::seed_from_u64(n);
            let q = QuiverWindow::random(0, n as i64 - 1, &mut rng).unwrap();
            assert!(hausdorff_check::<Gf2>(&SpcFiniteModel::new(&q)).unwrap());
        }
    }

    #[test]
    fn homeomorphism_examples() {
        assert!(homeomorphism_check::<Gf2>(&SpcFiniteModel::new(&w(0, 0, ""))).unwrap());
        assert!(homeomorphism_check::<Gf2>(&SpcFiniteModel::new(&w(0, 2, "RL"))).unwrap());
        assert!(homeomorphism_check::<Gf5>(&SpcFiniteModel::new(&w(-2, 5, "RRLRLLR"))).unwrap());
        assert!(homeomorphism_check::<Gf2>(&SpcFiniteModel::new(&QuiverWindow::linear(0, 8).unwrap())).is_err());
    }

    #[test]
    fn point_ideals_satisfy_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let q = w(0, 3, "RLR");
        for a in 0..=3 {
            let m = PointIdeal::new(&q, a).unwrap();
            let report = point_ideal_axioms_check::<Gf5, _>(&m, 20, &mut rng).unwrap();
            assert!(report.passed(), "{:?}", report.failures);
        }
    }

    #[test]
    fn summary_lists_every_basic_closed_set() {
        let s = summarize::<Gf2>(&w(0, 2, "RL")).unwrap();
        assert_eq!(s.points.len(), 3);
        // Discrete topology on three points.
        assert_eq!(s.closed_sets.len(), 8);
        assert!(s.hausdorff && s.homeomorphism);
    }
}
