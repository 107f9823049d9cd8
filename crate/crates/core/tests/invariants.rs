//! Property tests: each case draws a seed and builds its inputs with the shared generators.

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use valform::canonical::{canonical_compare, canonicalize, jordan_invariants, present, Comparison};
use valform::classify_odd::{isomorphic_odd, symbol};
use valform::hensel::{solve_quadratic, sqrt_one_plus, Branch};
use valform::isometry::{congruent_mod_v2, lift_isometry, lift_tolerance};
use valform::jordan::{jordan_decompose, verify_decomposition};
use valform::lattice::GramLattice;
use valform::rank2::{arf_invariant, in_s, normalize_rank2, Rank2Form};
use valform::valuation::Val;
use valform::{RingConfig, RingElem};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn backend(i: usize) -> RingConfig {
    common::backends()[i % 4]
}

fn char2(i: usize) -> RingConfig {
    [RingConfig::two_adic(30).unwrap(), RingConfig::ramified2(30).unwrap()][i % 2]
}

fn nonzero<R: Rng>(rng: &mut R, cfg: RingConfig) -> RingElem {
    loop {
        let x = common::small(rng, cfg);
        if !x.is_zero_at_prec() {
            return x;
        }
    }
}

fn rank2_with_arf<R: Rng>(rng: &mut R, cfg: RingConfig) -> Rank2Form {
    loop {
        let (va, vb) = (rng.gen_range(1..=3), rng.gen_range(1..=4));
        let a = common::at_least(rng, cfg, Val::Fin(va));
        let b = common::at_least(rng, cfg, Val::Fin(vb));
        let Ok(f) = Rank2Form::new(a, b) else { continue };
        if arf_invariant(&f).is_ok() {
            return f;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn valuation_is_multiplicative_and_ultrametric(seed: u64, b in 0usize..4) {
        let cfg = backend(b);
        let mut r = rng(seed);
        let (x, y) = (nonzero(&mut r, cfg), nonzero(&mut r, cfg));
        let (vx, vy) = (x.valuation().unwrap(), y.valuation().unwrap());
        prop_assert_eq!((&x * &y).valuation().unwrap(), vx + vy);
        let s = &x + &y;
        prop_assert!(s.val_ge(vx.min(vy)).unwrap());
        if vx != vy {
            prop_assert_eq!(s.valuation().unwrap(), vx.min(vy));
        }
    }

    #[test]
    fn jordan_splitting_verifies(seed: u64, b in 0usize..4, n in 1usize..=4) {
        let cfg = backend(b);
        let m = common::lattice(&mut rng(seed), cfg, n);
        let d = jordan_decompose(&m).unwrap();
        prop_assert!(verify_decomposition(&m, &d).is_ok());
        prop_assert_eq!(d.ranks().iter().sum::<usize>(), n);
    }

    #[test]
    fn jordan_invariants_survive_basis_change(seed: u64, b in 0usize..3, n in 1usize..=3) {
        let cfg = backend(b);
        let mut r = rng(seed);
        let m = common::lattice(&mut r, cfg, n);
        let t = common::unimodular(&mut r, cfg, n);
        let moved = m.change_basis(&t).unwrap();
        prop_assert_eq!(jordan_invariants(&m).unwrap(), jordan_invariants(&moved).unwrap());
    }

    #[test]
    fn odd_symbol_survives_basis_change(seed: u64, n in 1usize..=4) {
        let cfg = RingConfig::padic(3, 24).unwrap();
        let mut r = rng(seed);
        let m = common::lattice(&mut r, cfg, n);
        let moved = m.change_basis(&common::unimodular(&mut r, cfg, n)).unwrap();
        prop_assert_eq!(symbol(&m).unwrap(), symbol(&moved).unwrap());
    }

    #[test]
    fn witt_cancellation_holds(seed: u64, p in prop::sample::select(vec![3u64, 5, 7])) {
        let cfg = RingConfig::padic(p, 24).unwrap();
        let mut r = rng(seed);
        let (n, ln) = (r.gen_range(1..=2), r.gen_range(1..=2));
        let m = common::lattice(&mut r, cfg, n);
        let other = common::lattice(&mut r, cfg, n);
        let l = common::lattice(&mut r, cfg, ln);
        let small = isomorphic_odd(&m, &other).unwrap();
        let big = isomorphic_odd(&m.direct_sum(&l).unwrap(), &other.direct_sum(&l).unwrap()).unwrap();
        prop_assert_eq!(small, big);
    }

    #[test]
    fn arf_class_survives_basis_change(seed: u64, b in 0usize..2) {
        let cfg = char2(b);
        let mut r = rng(seed);
        let f = rank2_with_arf(&mut r, cfg);
        let t = common::unimodular(&mut r, cfg, 2);
        let g = normalize_rank2(&f.lattice().change_basis(&t).unwrap()).unwrap();
        let ((af, _), (ag, _)) = (arf_invariant(&f).unwrap(), arf_invariant(&g).unwrap());
        prop_assert!(af.same_class(&ag).unwrap());
        prop_assert!(af.fine_equal(&ag).unwrap().unwrap_or(true));
    }

    #[test]
    fn s_is_a_subgroup(seed: u64, b in 0usize..2) {
        let cfg = char2(b);
        let mut r = rng(seed);
        let min_t = Val::Fin(cfg.v2().coords().unwrap()[0] / 2 + 1);
        let mut elem = || {
            let t = common::at_least(&mut r, cfg, min_t);
            &t.square() + &t.mul_i64(2)
        };
        let (x, y) = (elem(), elem());
        prop_assert!(in_s(&x).unwrap());
        prop_assert!(in_s(&(&x - &y)).unwrap());
        prop_assert!(in_s(&(&x + &y)).unwrap());
    }

    #[test]
    fn approximate_isometries_lift(seed: u64, b in 0usize..4, n in 1usize..=3) {
        let cfg = backend(b);
        let mut r = rng(seed);
        let m = common::lattice(&mut r, cfg, n);
        let t = common::unimodular(&mut r, cfg, n);
        let target = m.change_basis(&t).unwrap();
        let tol = lift_tolerance(&m).unwrap();
        let mut phi = t.clone();
        for i in 0..n {
            for j in 0..n {
                phi[(i, j)] = &phi[(i, j)] + &common::at_least(&mut r, cfg, tol + cfg.min_positive());
            }
        }
        let psi = lift_isometry(&target, &m, &phi).unwrap();
        prop_assert!(m.gram().congruence(&psi).approx_eq(target.gram()));
        prop_assert!(congruent_mod_v2(&psi, &phi).unwrap());
    }

    #[test]
    fn canonical_comparison_is_irreflexive(seed: u64, b in 0usize..3, n in 1usize..=3) {
        let cfg = backend(b);
        let m = common::lattice(&mut rng(seed), cfg, n);
        let p = present(&m).unwrap();
        prop_assert!(p.check(&m).is_ok());
        prop_assert_eq!(canonical_compare(&p, &p).unwrap(), Comparison::Equal);
    }

    #[test]
    fn canonicalization_is_idempotent(seed: u64, b in 0usize..2, n in 1usize..=3) {
        let cfg = char2(b);
        let mut r = rng(seed);
        let entries: Vec<i64> = (0..n).map(|_| [1i64, 3, 5, 7, 2, 6, 10, 14][r.gen_range(0..8)]).collect();
        let m = GramLattice::diagonal_i64(cfg, &entries).unwrap();
        let c = canonicalize(&m).unwrap();
        prop_assert!(c.presentation.check(&m).is_ok());
        let again = canonicalize(&c.presentation.lattice().unwrap()).unwrap();
        prop_assert!(again.transcript.is_empty());
        prop_assert_eq!(again.presentation.to_string(), c.presentation.to_string());
    }

    #[test]
    fn hensel_roots_back_substitute(seed: u64, b in 0usize..4) {
        let cfg = backend(b);
        let mut r = rng(seed);
        let v2 = cfg.v2();
        let one = RingElem::one(cfg);
        let y = loop {
            let y = common::at_least(&mut r, cfg, v2.times(2) + cfg.min_positive());
            if !y.is_zero_at_prec() {
                break y;
            }
        };
        let z = sqrt_one_plus(&y).unwrap();
        prop_assert!((&one + &z).square().approx_eq(&(&one + &y)));
        prop_assert_eq!(z.valuation().unwrap(), y.valuation().unwrap() - v2);

        let vals = common::block_valuations(cfg);
        let vb = vals[r.gen_range(0..vals.len())];
        let bb = &RingElem::sigma(cfg, vb).unwrap() * &common::unit(&mut r, cfg);
        let a = common::small(&mut r, cfg);
        let c = &RingElem::sigma(cfg, vb.times(2) + cfg.min_positive()).unwrap() * &common::unit(&mut r, cfg);
        let t = solve_quadratic(&a, &bb, &c, Branch::Small).unwrap();
        prop_assert!((&(&(&a * &t.square()) + &(&bb * &t)) + &c).is_zero_at_prec());
        prop_assert_eq!(t.valuation().unwrap(), c.valuation().unwrap() - bb.valuation().unwrap());
    }
}
