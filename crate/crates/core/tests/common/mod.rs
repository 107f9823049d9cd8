//! Random lattices, elements and basis changes shared by the property suites.
#![allow(dead_code)]

use rand::Rng;
use valform::lattice::GramLattice;
use valform::matrix::Matrix;
use valform::valuation::{RingKind, Val};
use valform::{RingConfig, RingElem};

pub fn backends() -> Vec<RingConfig> {
    vec![
        RingConfig::padic(3, 24).unwrap(),
        RingConfig::two_adic(24).unwrap(),
        RingConfig::ramified2(24).unwrap(),
        RingConfig::laurent2(3, 6, 256).unwrap(),
    ]
}

/// Valuations used for Jordan components.
pub fn block_valuations(cfg: RingConfig) -> Vec<Val> {
    match cfg.kind {
        RingKind::Laurent2 { .. } => vec![Val::Pair(0, 0), Val::Pair(0, 1), Val::Pair(0, 2), Val::Pair(1, 0), Val::Pair(1, 1)],
        _ => (0..4).map(Val::Fin).collect(),
    }
}

/// Small integral element, possibly zero.
pub fn small<R: Rng>(rng: &mut R, cfg: RingConfig) -> RingElem {
    match cfg.kind {
        RingKind::Padic { p } => RingElem::from_i64(cfg, rng.gen_range(-(p.pow(4) as i64)..=p.pow(4) as i64)),
        RingKind::TwoAdic => RingElem::from_i64(cfg, rng.gen_range(-64..=64)),
        RingKind::Ramified2 => RingElem::from_pair(cfg, &rng.gen_range(-16i64..=16).into(), &rng.gen_range(-16i64..=16).into()).unwrap(),
        RingKind::Laurent2 { q } => {
            let terms: Vec<(i64, i64, i64)> = (0..3).map(|_| (rng.gen_range(0..2), rng.gen_range(0..4), rng.gen_range(0..q as i64))).collect();
            RingElem::from_terms(cfg, &terms).unwrap()
        }
    }
}

pub fn unit<R: Rng>(rng: &mut R, cfg: RingConfig) -> RingElem {
    loop {
        let x = small(rng, cfg);
        if !x.is_zero_at_prec() && x.valuation().unwrap().is_zero() {
            return x;
        }
    }
}

/// Element of valuation at least `v`.
pub fn at_least<R: Rng>(rng: &mut R, cfg: RingConfig, v: Val) -> RingElem {
    &RingElem::sigma(cfg, v).unwrap() * &small(rng, cfg)
}

/// Random matrix in `GL_n(R)`: unit lower triangular times upper triangular with unit diagonal.
pub fn unimodular<R: Rng>(rng: &mut R, cfg: RingConfig, n: usize) -> Matrix {
    let mut l = Matrix::identity(cfg, n);
    let mut u = Matrix::identity(cfg, n);
    for i in 0..n {
        u[(i, i)] = unit(rng, cfg);
        for j in 0..i {
            l[(i, j)] = small(rng, cfg);
            u[(j, i)] = small(rng, cfg);
        }
    }
    l.mul(&u)
}

/// Block-diagonal Gram with random components, in a random basis.
pub fn lattice<R: Rng>(rng: &mut R, cfg: RingConfig, n: usize) -> GramLattice {
    let vals = block_valuations(cfg);
    let mut d = Matrix::zeros(cfg, n, n);
    let mut i = 0;
    while i < n {
        let v = vals[rng.gen_range(0..vals.len())];
        let s = RingElem::sigma(cfg, v).unwrap();
        if !cfg.two_is_unit() && i + 1 < n && rng.gen_bool(0.4) {
            // Even unimodular plane [[2a, 1], [1, 2b]] style, scaled.
            let (a, b) = (at_least(rng, cfg, Val::Fin(1)), at_least(rng, cfg, Val::Fin(1)));
            d[(i, i)] = &s * &a;
            d[(i + 1, i + 1)] = &s * &b;
            d[(i, i + 1)] = s.clone();
            d[(i + 1, i)] = s;
            i += 2;
        } else {
            d[(i, i)] = &s * &unit(rng, cfg);
            i += 1;
        }
    }
    let t = unimodular(rng, cfg, n);
    GramLattice::new(d.congruence(&t)).unwrap()
}
