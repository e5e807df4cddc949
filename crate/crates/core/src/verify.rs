//! Randomized and exhaustive property suites.
//!
//! Every suite draws from its own ChaCha stream derived from one seed, so a
//! report depends only on the seed and the sizes requested.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::barcode::{assemble, base_change, decompose, random_barcode};
use crate::boolean::{all_families, enumerate_primes, PrimeEnumeration, PrimePoint};
use crate::field::{Field, FieldKind, Gf2, Gf5, Rational};
use crate::quiver::{
    check_kernel_cokernel_exact, check_short_exact, interval_rep, random_extension, random_morphism, support,
    QuiverWindow, Representation,
};
use crate::report::Report;
use crate::spectrum::{
    clopen_check, closed_set_axioms_check, hausdorff_check, homeomorphism_check, membership, phi, phi_point,
    point_ideal_axioms_check, psi, PointIdeal, SpcFiniteModel,
};
use crate::subset::{Universe, VertexSet};
use crate::unbounded::{
    adversarial_certificates, bounded_extension_check, check_derivation, default_seeds,
    direct_summand_of_tensor_check, hom_dim_brute_force, hom_dim_linear, mono_containment_check,
    random_interior_rep, random_mono_or_epi, sample_bounded_certificate, Bound, ExtendedInterval,
};
use crate::witness::full_witness;

/// Sizes for a full run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteSizes {
    /// Planted barcodes, morphisms per field, witness instances, generated maps.
    pub trials: usize,
    /// Largest window for the exhaustive suites (at most 8).
    pub exhaustive_window: usize,
    /// Random representations per window in the correspondence suite.
    pub samples_per_window: usize,
}

impl SuiteSizes {
    pub fn from_trials(trials: usize) -> Self {
        SuiteSizes {
            trials,
            exhaustive_window: 8,
            samples_per_window: trials.clamp(1, 200),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub sizes: SuiteSizes,
    pub passed: bool,
    pub suites: Vec<Report>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = (&str, &str)> {
        self.suites
            .iter()
            .flat_map(|s| s.failures.iter().map(move |f| (s.name.as_str(), f.as_str())))
    }
}

/// An independent stream for suite number `stream`.
pub fn suite_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn field_for(t: usize) -> FieldKind {
    FieldKind::ALL[t % FieldKind::ALL.len()]
}

fn random_window<R: Rng + ?Sized>(min: usize, max: usize, rng: &mut R) -> QuiverWindow {
    let size = rng.gen_range(min..=max) as i64;
    let lo = rng.gen_range(-3..=3);
    QuiverWindow::random(lo, lo + size - 1, rng).expect("window")
}

fn planted<F: Field, R: Rng + ?Sized>(window: &QuiverWindow, t: usize, report: &mut Report, rng: &mut R) {
    let b = random_barcode(window, 5, 3, rng);
    let v: Representation<F> = base_change(&assemble(window, &b).expect("planted bars fit"), rng);
    let found = decompose(&v);
    report.check(found == b, || format!("trial {t} over {} on {}: planted {b:?}, found {found:?}", F::NAME, window.word()));
}

/// `decompose(base_change(assemble(B))) = B` for random planted barcodes,
/// cycling through the three fields.
pub fn barcode_roundtrip<R: Rng + ?Sized>(trials: usize, max_window: usize, rng: &mut R) -> Report {
    let mut report = Report::new("barcode roundtrip");
    for t in 0..trials {
        let window = random_window(1, max_window, rng);
        match field_for(t) {
            FieldKind::Gf2 => planted::<Gf2, _>(&window, t, &mut report, rng),
            FieldKind::Gf5 => planted::<Gf5, _>(&window, t, &mut report, rng),
            FieldKind::Rational => planted::<Rational, _>(&window, t, &mut report, rng),
        }
    }
    report
}

fn exactness_field<F: Field, R: Rng + ?Sized>(trials: usize, report: &mut Report, rng: &mut R) {
    for t in 0..trials {
        let window = random_window(1, 6, rng);
        let v = Representation::<F>::random(&window, 3, rng);
        let w = Representation::<F>::random(&window, 3, rng);
        let f = random_morphism(&v, &w, rng).expect("same window");
        let (_, inclusion) = f.kernel().expect("kernel");
        let (_, projection) = f.cokernel().expect("cokernel");
        let result = check_kernel_cokernel_exact(&f, &inclusion, &projection);
        report.check(result.is_ok(), || format!("{} trial {t}: {result:?}", F::NAME));
        let ext = random_extension(&v, &w, rng).expect("same window");
        let result = check_short_exact(&ext.inclusion, &ext.projection);
        report.check(result.is_ok(), || format!("{} trial {t}: extension {result:?}", F::NAME));
    }
}

/// Kernels and cokernels of random morphisms fit into exact sequences, in every field.
pub fn exactness<R: Rng + ?Sized>(trials_per_field: usize, rng: &mut R) -> Report {
    let mut report = Report::new("exactness");
    exactness_field::<Gf2, _>(trials_per_field, &mut report, rng);
    exactness_field::<Gf5, _>(trials_per_field, &mut report, rng);
    exactness_field::<Rational, _>(trials_per_field, &mut report, rng);
    report
}

/// Exhaustive prime ideals of small power sets: exactly the principal ones, all maximal.
pub fn boolean_ground_truth() -> Report {
    let mut report = Report::new("boolean primes");
    let u3 = Universe::new(0, 2).expect("universe");
    report.check(all_families(u3).count() == 256, || "expected 256 families over three points".into());
    for n in 1..=4i64 {
        let u = Universe::new(0, n - 1).expect("universe");
        let exhaustive = enumerate_primes(u, PrimeEnumeration::Exhaustive).expect("small");
        let principal = enumerate_primes(u, PrimeEnumeration::Principal).expect("small");
        report.check(exhaustive.len() == n as usize, || format!("{n} points: {} primes", exhaustive.len()));
        report.check(exhaustive == principal, || format!("{n} points: enumeration modes disagree"));
        for p in &exhaustive {
            report.check(p.is_maximal(), || format!("{n} points: a prime is not maximal"));
            let principal_form = u
                .vertices()
                .any(|a| PrimePoint::new(u, a).and_then(|q| q.to_family()).is_ok_and(|f| &f == p));
            report.check(principal_form, || format!("{n} points: a prime omits no single point"));
        }
    }
    report
}

fn correspondence_window<F: Field, R: Rng + ?Sized>(
    window: &QuiverWindow,
    samples: usize,
    report: &mut Report,
    rng: &mut R,
) {
    let u = window.universe();
    for a in window.vertices() {
        let m = PointIdeal::new(window, a).expect("point");
        let q = PrimePoint::new(u, a).expect("point");
        report.check(psi(&phi_point(&m), window).is_ok_and(|back| back == m), || format!("{}: ψφ(M_{a}) ≠ M_{a}", window.word()));
        let round = psi(&q, window).map(|m| phi(&m));
        report.check(
            matches!(round, Ok(Ok(ref f)) if Ok(f) == q.to_family().as_ref()),
            || format!("{}: φψ(P_{a}) ≠ P_{a}", window.word()),
        );
    }
    for s in 0..samples {
        let v = Representation::<F>::random(window, 2, rng);
        let supp = support(&v);
        for a in window.vertices() {
            let m = psi(&PrimePoint::new(u, a).expect("point"), window).expect("point");
            let lhs = membership(&v, &m).expect("same window");
            let rhs = PrimePoint::new(u, a).expect("point").contains(&supp);
            report.check(lhs == rhs, || format!("{} sample {s}: membership at {a} disagrees", window.word()));
        }
    }
}

/// `φ` and `ψ` are inverse, and membership matches the Boolean side, on every
/// orientation of every window up to `max_window` vertices.
pub fn correspondence<R: Rng + ?Sized>(max_window: usize, samples: usize, rng: &mut R) -> Report {
    let mut report = Report::new("correspondence");
    let mut k = 0;
    for size in 1..=max_window as i64 {
        for window in QuiverWindow::all_orientations(0, size - 1) {
            match field_for(k) {
                FieldKind::Gf2 => correspondence_window::<Gf2, _>(&window, samples, &mut report, rng),
                FieldKind::Gf5 => correspondence_window::<Gf5, _>(&window, samples, &mut report, rng),
                FieldKind::Rational => correspondence_window::<Rational, _>(&window, samples, &mut report, rng),
            }
            k += 1;
        }
    }
    report
}

/// Closure and primality spot checks for every `M_a` on `windows` random windows.
pub fn prime_ideal_axioms<R: Rng + ?Sized>(windows: usize, trials: usize, rng: &mut R) -> Report {
    let mut report = Report::new("point ideal axioms");
    for k in 0..windows {
        let window = random_window(1, 6, rng);
        for a in window.vertices() {
            let m = PointIdeal::new(&window, a).expect("point");
            let sub = match field_for(k) {
                FieldKind::Gf2 => point_ideal_axioms_check::<Gf2, _>(&m, trials, rng),
                FieldKind::Gf5 => point_ideal_axioms_check::<Gf5, _>(&m, trials, rng),
                FieldKind::Rational => point_ideal_axioms_check::<Rational, _>(&m, trials, rng),
            };
            match sub {
                Ok(sub) => report.merge(sub),
                Err(e) => report.check(false, || format!("{}: {e}", window.word())),
            }
        }
    }
    report
}

fn topology_window<F: Field, R: Rng + ?Sized>(window: &QuiverWindow, report: &mut Report, rng: &mut R) {
    let model = SpcFiniteModel::new(window);
    let word = window.word();
    match closed_set_axioms_check::<F, _>(&model, 3, rng) {
        Ok(sub) => report.merge(sub),
        Err(e) => report.check(false, || format!("{word}: {e}")),
    }
    for x in VertexSet::all_subsets(window.universe()) {
        let v: Representation<F> = interval_rep(window, &x);
        report.check(clopen_check(&v, &model).unwrap_or(false), || format!("{word}: clopen formula fails for {x:?}"));
    }
    let v = Representation::<F>::random(window, 2, rng);
    report.check(clopen_check(&v, &model).unwrap_or(false), || format!("{word}: clopen formula fails for a random object"));
    report.check(hausdorff_check::<F>(&model).unwrap_or(false), || format!("{word}: two points cannot be separated"));
    report.check(homeomorphism_check::<F>(&model).unwrap_or(false), || format!("{word}: closed sets do not correspond"));
}

/// Closed-set identities, the clopen complement formula, Hausdorff separation and
/// the closed-set bijection on every orientation up to `max_window` vertices.
pub fn topology<R: Rng + ?Sized>(max_window: usize, rng: &mut R) -> Report {
    let mut report = Report::new("topology");
    let mut k = 0;
    for size in 1..=max_window as i64 {
        for window in QuiverWindow::all_orientations(0, size - 1) {
            match field_for(k) {
                FieldKind::Gf2 => topology_window::<Gf2, _>(&window, &mut report, rng),
                FieldKind::Gf5 => topology_window::<Gf5, _>(&window, &mut report, rng),
                FieldKind::Rational => topology_window::<Rational, _>(&window, &mut report, rng),
            }
            k += 1;
        }
    }
    report
}

fn witness_instance<F: Field, R: Rng + ?Sized>(window: &QuiverWindow, t: usize, report: &mut Report, rng: &mut R) {
    let full = window.full_set();
    let mut supp = VertexSet::from_bits(window.universe(), rng.gen::<u64>() & full.bits()).expect("bits in range");
    if supp == full {
        let drop = rng.gen_range(window.lo()..=window.hi());
        supp = supp.difference(&window.set([drop]).expect("vertex")).expect("same universe");
    }
    let v = Representation::<F>::random_with_support(window, &supp, 2, rng);
    match full_witness(&v) {
        Ok(chain) => {
            let bound = window.max_path_length();
            report.check(chain.max_iterations() <= bound, || {
                format!("trial {t} on {}: {} saturation iterations exceed {bound}", window.word(), chain.max_iterations())
            });
        }
        Err(e) => report.check(false, || format!("trial {t} on {} over {}: {e}", window.word(), F::NAME)),
    }
}

/// Witness chains for random proper-support objects on windows of 2 to `max_window` vertices.
pub fn witness_chains<R: Rng + ?Sized>(trials: usize, max_window: usize, rng: &mut R) -> Report {
    let mut report = Report::new("witness chains");
    for t in 0..trials {
        let window = random_window(2, max_window, rng);
        match field_for(t) {
            FieldKind::Gf2 => witness_instance::<Gf2, _>(&window, t, &mut report, rng),
            FieldKind::Gf5 => witness_instance::<Gf5, _>(&window, t, &mut report, rng),
            FieldKind::Rational => witness_instance::<Rational, _>(&window, t, &mut report, rng),
        }
    }
    report
}

/// The Hom formula for linear orientation against direct computation: every
/// pair of bars on windows up to `max_window` vertices, then every pair of
/// extended bars with endpoints in `{−∞, 0, …, max_window − 1, +∞}`.
pub fn hom_formula(max_window: usize) -> Report {
    let mut report = Report::new("hom formula");
    for size in 1..=max_window as i64 {
        let window = QuiverWindow::linear(0, size - 1).expect("window");
        let bars: Vec<(i64, i64)> = (0..size).flat_map(|a| (a..size).map(move |b| (a, b))).collect();
        for &(ia, ib) in &bars {
            let ki: Representation<Gf2> = interval_rep(&window, &window.set(ia..=ib).expect("bar"));
            for &(ja, jb) in &bars {
                let kj: Representation<Gf2> = interval_rep(&window, &window.set(ja..=jb).expect("bar"));
                let direct = crate::quiver::hom_basis(&ki, &kj).expect("same window").len();
                let i = ExtendedInterval::finite(ia, ib).expect("bar");
                let j = ExtendedInterval::finite(ja, jb).expect("bar");
                report.check(direct == hom_dim_linear(&i, &j), || format!("Hom([{ia},{ib}], [{ja},{jb}]) = {direct} on size {size}"));
            }
        }
    }
    let ends: Vec<Bound> = std::iter::once(Bound::NegInf)
        .chain((0..max_window as i64).map(Bound::Finite))
        .chain(std::iter::once(Bound::PosInf))
        .collect();
    let bars: Vec<ExtendedInterval> = ends
        .iter()
        .flat_map(|&a| ends.iter().filter_map(move |&b| ExtendedInterval::new(a, b).ok()))
        .collect();
    for i in &bars {
        for j in &bars {
            let direct = hom_dim_brute_force::<Gf5>(i, j);
            report.check(direct.as_ref().is_ok_and(|&d| d == hom_dim_linear(i, j)), || format!("Hom({i}, {j}): {direct:?}"));
        }
    }
    report
}

fn linear_window<R: Rng + ?Sized>(rng: &mut R) -> QuiverWindow {
    let lo = rng.gen_range(-3..=3);
    QuiverWindow::linear(lo, lo + rng.gen_range(0..=7)).expect("window")
}

fn mono_epi_field<F: Field, R: Rng + ?Sized>(t: usize, containment: &mut Report, summand: &mut Report, rng: &mut R) {
    let window = linear_window(rng);
    let want_mono = t.is_multiple_of(2);
    let what = if want_mono { "mono" } else { "epi" };
    let f = match random_mono_or_epi::<F, _>(&window, want_mono, rng) {
        Ok(f) => f,
        Err(e) => return containment.check(false, || format!("trial {t}: {e}")),
    };
    let kind_ok = if want_mono { f.is_mono() } else { f.is_epi() };
    containment.check(kind_ok, || format!("trial {t}: generator did not produce a {what}"));
    match mono_containment_check(&f) {
        Ok(v) => containment.check(v.holds(), || format!("trial {t} ({what}, {}): {:?}", F::NAME, v.failures)),
        Err(e) => containment.check(false, || format!("trial {t}: {e}")),
    }
    let s = direct_summand_of_tensor_check(&f);
    summand.check(matches!(s, Ok(Some(true))), || format!("trial {t} ({what}, {}): {s:?}", F::NAME));
}

/// Bar containment along monos and epis, and the summand-of-tensor property,
/// for `trials` generated maps each.
pub fn mono_epi<R: Rng + ?Sized>(trials: usize, rng: &mut R) -> (Report, Report) {
    let mut containment = Report::new("mono/epi containment");
    let mut summand = Report::new("summand of tensor");
    for t in 0..trials {
        match field_for(t / 2) {
            FieldKind::Gf2 => mono_epi_field::<Gf2, _>(t, &mut containment, &mut summand, rng),
            FieldKind::Gf5 => mono_epi_field::<Gf5, _>(t, &mut containment, &mut summand, rng),
            FieldKind::Rational => mono_epi_field::<Rational, _>(t, &mut containment, &mut summand, rng),
        }
    }
    (containment, summand)
}

fn bounded_extension_field<F: Field, R: Rng + ?Sized>(t: usize, report: &mut Report, rng: &mut R) {
    let lo = rng.gen_range(-3..=3);
    let window = QuiverWindow::linear(lo, lo + rng.gen_range(2..=7)).expect("window");
    let v1 = random_interior_rep::<F, _>(&window, rng);
    let v2 = random_interior_rep::<F, _>(&window, rng);
    match bounded_extension_check(&v1, &v2, None, 1, rng) {
        Ok(sub) => report.merge(Report {
            name: format!("trial {t}"),
            ..sub
        }),
        Err(e) => report.check(false, || format!("trial {t}: {e}")),
    }
}

/// Extensions of objects with interior bars have interior bars.
pub fn bounded_extensions<R: Rng + ?Sized>(trials: usize, rng: &mut R) -> Report {
    let mut report = Report::new("bounded extension");
    for t in 0..trials {
        match field_for(t) {
            FieldKind::Gf2 => bounded_extension_field::<Gf2, _>(t, &mut report, rng),
            FieldKind::Gf5 => bounded_extension_field::<Gf5, _>(t, &mut report, rng),
            FieldKind::Rational => bounded_extension_field::<Rational, _>(t, &mut report, rng),
        }
    }
    report
}

/// The sample derivation is accepted and every adversarial one is rejected.
pub fn certificates() -> Report {
    let mut report = Report::new("certificates");
    let seeds = default_seeds();
    let good = check_derivation(&sample_bounded_certificate(), &seeds);
    report.check(matches!(good, Ok(ref v) if v.is_accepted()), || format!("bounded derivation: {good:?}"));
    let corpus = adversarial_certificates();
    report.check(corpus.len() >= 20, || format!("adversarial corpus has only {} certificates", corpus.len()));
    for (k, cert) in corpus.iter().enumerate() {
        let verdict = check_derivation(cert, &seeds);
        report.check(matches!(verdict, Ok(ref v) if !v.is_accepted()), || format!("adversarial certificate {k}: {verdict:?}"));
    }
    report
}

/// Every suite, each on its own stream of `seed`.
pub fn run_all(seed: u64, sizes: SuiteSizes) -> VerifyReport {
    let n = sizes.trials;
    let w = sizes.exhaustive_window.min(crate::spectrum::EXHAUSTIVE_WINDOW_MAX);
    let (containment, summand) = mono_epi(n, &mut suite_rng(seed, 7));
    let suites = vec![
        barcode_roundtrip(n, 12, &mut suite_rng(seed, 1)),
        exactness(n, &mut suite_rng(seed, 2)),
        boolean_ground_truth(),
        correspondence(w, sizes.samples_per_window, &mut suite_rng(seed, 3)),
        prime_ideal_axioms(3, n, &mut suite_rng(seed, 4)),
        topology(w, &mut suite_rng(seed, 5)),
        witness_chains(n, 16, &mut suite_rng(seed, 6)),
        hom_formula(w),
        containment,
        summand,
        bounded_extensions(n, &mut suite_rng(seed, 8)),
        certificates(),
    ];
    VerifyReport {
        seed,
        sizes,
        passed: suites.iter().all(Report::passed),
        suites,
    }
}
