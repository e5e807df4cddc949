use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zigzag_spc::barcode::{assemble, base_change, decompose, random_barcode, rank_invariant};
use zigzag_spc::boolean::{ring_add, ring_mul, IdealFamily};
use zigzag_spc::io::RepresentationJson;
use zigzag_spc::quiver::{direct_sum, extension, interval_rep, random_gluing, random_morphism, support, tensor};
use zigzag_spc::spectrum::{membership, PointIdeal};
use zigzag_spc::unbounded::{
    check_derivation, default_seeds, symbolic_tensor, Bound, CertOp, CertStep, DerivationCertificate, Dust,
    ExtendedInterval, SymbolicBarcode, Verdict,
};
use zigzag_spc::witness::{saturate_left, saturate_right, sinks_and_sources, bdc_sets, support_ideal_closure, Side};
use zigzag_spc::{Barcode, Field, Gf2, Gf5, Matrix, Morphism, QuiverError, QuiverWindow, Rational, Representation, Universe, VertexSet};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn window(seed: u64, max: i64) -> QuiverWindow {
    let mut r = rng(seed ^ 0x5eed);
    let lo = r.gen_range(-4..=4);
    QuiverWindow::random(lo, lo + r.gen_range(0..max), &mut r).unwrap()
}

fn linalg_laws<F: Field>(seed: u64) {
    let mut r = rng(seed);
    let (rows, cols) = (r.gen_range(0..6), r.gen_range(0..6));
    let rank = r.gen_range(0..=rows.min(cols));
    let m = Matrix::<F>::random_with_rank(rows, cols, rank, &mut r);
    assert_eq!(m.rank(), rank);
    let k = m.kernel_basis();
    assert_eq!(k.cols(), cols - rank);
    assert_eq!(k.rank(), k.cols());
    assert!(m.mul(&k).is_zero());
    let q = m.cokernel_projection();
    assert!(q.mul(&m).is_zero());
    assert_eq!(q.rank(), q.rows());
    assert_eq!(q.rows(), rows - rank);
    let b = Matrix::<F>::random(rows, r.gen_range(1..3), &mut r);
    if let Ok(x) = m.solve(&b) {
        assert_eq!(m.mul(&x), b);
    }
    let x = Matrix::<F>::random(cols, 2, &mut r);
    let consistent = m.mul(&x);
    assert_eq!(m.mul(&m.solve(&consistent).unwrap()), consistent);
}

fn quiver_laws<F: Field>(seed: u64) {
    let mut r = rng(seed);
    let w = window(seed, 6);
    let v = Representation::<F>::random(&w, 2, &mut r);
    let u = Representation::<F>::random(&w, 2, &mut r);
    let (sv, su) = (support(&v), support(&u));
    assert_eq!(support(&tensor(&v, &u).unwrap()), sv.intersection(&su).unwrap());
    assert_eq!(support(&direct_sum(&v, &u).unwrap()), sv.union(&su).unwrap());
    assert_eq!(decompose(&tensor(&v, &u).unwrap()), decompose(&tensor(&u, &v).unwrap()));
    let ext = extension(&v, &u, &random_gluing(&v, &u, &mut r)).unwrap();
    assert!(ext.inclusion.is_mono() && ext.projection.is_epi());
    assert!(ext.inclusion.then(&ext.projection).unwrap().is_zero());
    let f = random_morphism(&v, &u, &mut r).unwrap();
    let (k, i) = f.kernel().unwrap();
    let (c, p) = f.cokernel().unwrap();
    for (a, x) in w.vertices().enumerate() {
        let rank = f.component(x).rank();
        assert_eq!(k.dims()[a] + rank, v.dims()[a]);
        assert_eq!(c.dims()[a] + rank, u.dims()[a]);
    }
    assert!(i.then(&f).unwrap().is_zero() && f.then(&p).unwrap().is_zero());
}

/// Identity on `K_window^d` in a random basis: every arrow map is invertible, so
/// changing any one component entry breaks a commuting square.
fn corruption_detected<F: Field>(seed: u64) {
    let mut r = rng(seed);
    let lo = r.gen_range(-3..3);
    let w = QuiverWindow::random(lo, lo + r.gen_range(1..6), &mut r).unwrap();
    let d = r.gen_range(1..4);
    let planted = Barcode::from_bars([(zigzag_spc::Interval::new(w.lo(), w.hi()).unwrap(), d)]);
    let v: Representation<F> = base_change(&assemble(&w, &planted).unwrap(), &mut r);
    let id = Morphism::identity(&v);
    let mut comps = id.components().to_vec();
    let vertex = r.gen_range(0..comps.len());
    let (i, j) = (r.gen_range(0..d), r.gen_range(0..d));
    comps[vertex][(i, j)] = comps[vertex][(i, j)].add(&F::one());
    let result = Morphism::new(v.clone(), v, comps);
    assert!(matches!(result, Err(QuiverError::NonCommuting { .. })), "{result:?}");
}

fn barcode_laws<F: Field>(seed: u64) {
    let mut r = rng(seed);
    let w = window(seed, 8);
    let b1 = random_barcode(&w, 4, 3, &mut r);
    let v: Representation<F> = base_change(&assemble(&w, &b1).unwrap(), &mut r);
    assert_eq!(decompose(&v), b1);
    for x in w.vertices() {
        let through: usize = b1.iter().filter(|(i, _)| i.contains(x)).map(|(_, m)| m).sum();
        assert_eq!(through, v.dims()[w.index(x)]);
    }
    for a in w.lo()..=w.hi() {
        for b in a..=w.hi() {
            let here = rank_invariant(&v, a, b).unwrap();
            if a > w.lo() {
                assert!(here >= rank_invariant(&v, a - 1, b).unwrap());
            }
            if b < w.hi() {
                assert!(here >= rank_invariant(&v, a, b + 1).unwrap());
            }
        }
    }
    let b2 = random_barcode(&w, 3, 2, &mut r);
    let u: Representation<F> = base_change(&assemble(&w, &b2).unwrap(), &mut r);
    assert_eq!(decompose(&tensor(&v, &u).unwrap()), b1.tensor(&b2));
}

fn witness_ideal_laws(seed: u64) {
    let mut r = rng(seed);
    let n = r.gen_range(1..=4);
    let u = Universe::new(0, n - 1).unwrap();
    let seeds: Vec<VertexSet> = (0..r.gen_range(0..3))
        .map(|_| VertexSet::from_bits(u, r.gen_range(0..1u64 << n)).unwrap())
        .collect();
    let closure = support_ideal_closure(u, &seeds).unwrap();
    assert!(closure.is_ideal());
    for s in &seeds {
        assert!(closure.contains(s));
    }
    // Every ideal containing the seeds contains the closure.
    let all: Vec<VertexSet> = VertexSet::all_subsets(u).collect();
    for mask in 0..1u64 << all.len() {
        let family = IdealFamily::new(u, all.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, s)| *s)).unwrap();
        if family.is_ideal() && seeds.iter().all(|s| family.contains(s)) {
            assert!(closure.members().iter().all(|s| family.contains(s)));
        }
    }
}

fn symbolic(seed: u64, bounded: bool) -> SymbolicBarcode {
    let mut r = rng(seed);
    let mut s = SymbolicBarcode::zero();
    for _ in 0..r.gen_range(0..4) {
        let a = r.gen_range(-8..8);
        let b = a + r.gen_range(0..5);
        let lo = if !bounded && r.gen_bool(0.3) { Bound::NegInf } else { Bound::Finite(a) };
        let hi = if !bounded && r.gen_bool(0.3) { Bound::PosInf } else { Bound::Finite(b) };
        s.insert(ExtendedInterval::new(lo, hi).unwrap(), r.gen_range(1..3));
    }
    if r.gen_bool(0.5) {
        let lo = if r.gen_bool(0.5) { Bound::NegInf } else { Bound::Finite(r.gen_range(-8..0)) };
        s.push_dust(Dust::new(r.gen_range(-5..5), r.gen_range(1..4), lo, Bound::PosInf).unwrap());
    }
    s
}

/// Random certificates built from the default seeds and arbitrary claims.
fn random_certificate(seed: u64) -> DerivationCertificate {
    let mut r = rng(seed);
    let mut steps = Vec::new();
    for i in 0..r.gen_range(1..6) {
        let available = 2 + i;
        let op = [CertOp::Tensor, CertOp::Ext, CertOp::Ker, CertOp::Coker][r.gen_range(0..4)];
        let arity = if op == CertOp::Tensor { 1 } else { 2 };
        let args = (0..arity).map(|_| r.gen_range(0..available)).collect();
        let claim = symbolic(r.gen(), r.gen_bool(0.5));
        let factor = (op == CertOp::Tensor).then(|| symbolic(r.gen(), false));
        steps.push(CertStep { op, args, claim, factor });
    }
    DerivationCertificate { seeds: default_seeds(), steps }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn matrices_over_every_field(seed in any::<u64>()) {
        linalg_laws::<Gf2>(seed);
        linalg_laws::<Gf5>(seed);
        linalg_laws::<Rational>(seed);
    }

    #[test]
    fn supports_tensors_kernels(seed in any::<u64>()) {
        quiver_laws::<Gf2>(seed);
        quiver_laws::<Gf5>(seed);
        quiver_laws::<Rational>(seed);
    }

    #[test]
    fn corrupted_morphisms_are_rejected(seed in any::<u64>()) {
        corruption_detected::<Gf2>(seed);
        corruption_detected::<Gf5>(seed);
        corruption_detected::<Rational>(seed);
    }

    #[test]
    fn planted_barcodes(seed in any::<u64>()) {
        barcode_laws::<Gf2>(seed);
        barcode_laws::<Gf5>(seed);
        barcode_laws::<Rational>(seed);
    }

    #[test]
    fn boolean_ring_laws(n in 1i64..=10, x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
        let u = Universe::new(0, n - 1).unwrap();
        let mask = (1u64 << n) - 1;
        let [x, y, z] = [x, y, z].map(|b| VertexSet::from_bits(u, b & mask).unwrap());
        prop_assert_eq!(ring_mul(&x, &x).unwrap(), x);
        prop_assert!(ring_add(&x, &x).unwrap().is_empty());
        let lhs = ring_mul(&x, &ring_add(&y, &z).unwrap()).unwrap();
        let rhs = ring_add(&ring_mul(&x, &y).unwrap(), &ring_mul(&x, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let l = ring_add(&ring_add(&x, &y).unwrap(), &z).unwrap();
        let r = ring_add(&x, &ring_add(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn membership_depends_only_on_support(seed in any::<u64>()) {
        let mut r = rng(seed);
        let w = window(seed, 8);
        let v = Representation::<Gf5>::random(&w, 2, &mut r);
        let k: Representation<Gf5> = interval_rep(&w, &support(&v));
        for a in w.vertices() {
            let m = PointIdeal::new(&w, a).unwrap();
            prop_assert_eq!(membership(&v, &m).unwrap(), membership(&k, &m).unwrap());
        }
    }

    #[test]
    fn support_closures_are_minimal(seed in any::<u64>()) {
        witness_ideal_laws(seed);
    }

    #[test]
    fn bounded_is_preserved_by_tensor(x in any::<u64>(), y in any::<u64>()) {
        let (b, any) = (symbolic(x, true), symbolic(y, false));
        prop_assert!(symbolic_tensor(&b, &any).is_bounded());
        prop_assert!(symbolic_tensor(&any, &b).is_bounded());
    }

    #[test]
    fn accepted_certificates_stay_bounded(seed in any::<u64>()) {
        let cert = random_certificate(seed);
        if let Ok(Verdict::Accepted { .. }) = check_derivation(&cert, &default_seeds()) {
            prop_assert!(cert.steps.iter().all(|s| s.claim.is_bounded()));
            prop_assert!(!cert.steps.last().unwrap().claim.equivalent(&SymbolicBarcode::k_z()).unwrap());
        }
    }

    #[test]
    fn representation_json_roundtrip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let w = window(seed, 6);
        let v = Representation::<Rational>::random(&w, 3, &mut r);
        let text = RepresentationJson::from_rep(&v).to_canonical_string();
        prop_assert_eq!(RepresentationJson::parse(&text).unwrap().to_rep::<Rational>().unwrap(), v);
    }
}

#[test]
fn saturation_terminates_on_every_short_word() {
    for size in 2..=12i64 {
        for w in QuiverWindow::all_orientations(0, size - 1) {
            let lab = sinks_and_sources(&w).unwrap();
            let (b, d, _) = bdc_sets(&lab).unwrap();
            for (set, side) in [(b, Side::B), (d, Side::D)] {
                for sat in [saturate_right(&set, &lab, side).unwrap(), saturate_left(&set, &lab, side).unwrap()] {
                    assert!(sat.iterations() <= w.max_path_length(), "{} {side:?}", w.word());
                }
            }
        }
    }
}
