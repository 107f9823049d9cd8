//! Reflections, factorization of automorphisms, and lifting approximate isometries.

use crate::error::{domain, indeterminate, Error, Result};
use crate::hensel::{solve_quadratic, sqrt_one_plus, Branch};
use crate::jordan::jordan_diagonalized;
use crate::lattice::GramLattice;
use crate::matrix::{bilinear, Matrix};
use crate::valuation::{RingConfig, RingElem, Val, ValInfo};

fn unit_vec(cfg: RingConfig, n: usize, k: usize) -> Vec<RingElem> {
    (0..n).map(|i| if i == k { RingElem::one(cfg) } else { RingElem::zero(cfg) }).collect()
}

fn scale_vec(a: &RingElem, x: &[RingElem]) -> Vec<RingElem> {
    x.iter().map(|xi| a * xi).collect()
}

fn add_vec(x: &[RingElem], y: &[RingElem]) -> Vec<RingElem> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn sub_vec(x: &[RingElem], y: &[RingElem]) -> Vec<RingElem> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

/// `I + coef * v (v^t G)`, the rank-one update shared by all reflections.
fn rank_one_update(g: &Matrix, base: Matrix, coef: &RingElem, v: &[RingElem]) -> Matrix {
    let n = g.rows();
    let cfg = g.config();
    let vg: Vec<RingElem> = (0..n)
        .map(|j| (0..n).fold(RingElem::zero(cfg), |acc, i| &acc + &(&v[i] * &g[(i, j)])))
        .collect();
    let mut r = base;
    for i in 0..n {
        let ci = coef * &v[i];
        for j in 0..n {
            r[(i, j)] = &r[(i, j)] + &(&ci * &vg[j]);
        }
    }
    r
}

/// Involution of the summand on the coordinates `active` (identity elsewhere)
/// taking `x` to `y`; `g` must be block diagonal with respect to `active`.
fn involution_taking(g: &Matrix, x: &[RingElem], y: &[RingElem], active: &[usize]) -> Result<Matrix> {
    let cfg = g.config();
    let n = g.rows();
    let half = RingElem::from_i64(cfg, 2).inverse()?;
    let u = scale_vec(&half, &add_vec(x, y));
    let w = scale_vec(&half, &sub_vec(x, y));
    let (uu, ww) = (bilinear(g, &u, &u), bilinear(g, &w, &w));
    let use_w = match (ww.val_info(), uu.val_info()) {
        (ValInfo::Exact(a), ValInfo::Exact(b)) => a <= b,
        (ValInfo::Exact(_), ValInfo::AtLeast(_)) => true,
        (ValInfo::AtLeast(_), ValInfo::Exact(_)) => false,
        _ => return Err(indeterminate("both (x+y)/2 and (x-y)/2 have norm zero at precision")),
    };
    let two = RingElem::from_i64(cfg, 2);
    if use_w {
        // z -> z - 2 (z, w)/w^2 w: fixes u, negates w.
        let coef = -two.checked_div(&ww)?;
        Ok(rank_one_update(g, Matrix::identity(cfg, n), &coef, &w))
    } else {
        // z -> -z + 2 (z, u)/u^2 u on the summand: fixes u, negates its complement.
        let mut base = Matrix::identity(cfg, n);
        for &k in active {
            base[(k, k)] = -RingElem::one(cfg);
        }
        let coef = two.checked_div(&uu)?;
        Ok(rank_one_update(g, base, &coef, &u))
    }
}

/// Form-preserving involution `r` with `r(x) = y`, for `x^2 = y^2` of minimal
/// norm valuation, 2 a unit.
pub fn reflection_taking(m: &GramLattice, x: &[RingElem], y: &[RingElem]) -> Result<Matrix> {
    let cfg = m.ring();
    if !cfg.two_is_unit() {
        return Err(domain("reflections need 2 to be a unit"));
    }
    let n = m.rank();
    if x.len() != n || y.len() != n {
        return Err(domain("vectors have the wrong length"));
    }
    let g = m.gram();
    let (xx, yy) = (bilinear(g, x, x), bilinear(g, y, y));
    if !xx.approx_eq(&yy) {
        return Err(domain("x^2 != y^2"));
    }
    if xx.valuation()? != m.lattice_valuation()? {
        return Err(domain("x^2 does not have minimal valuation"));
    }
    let all: Vec<usize> = (0..n).collect();
    involution_taking(g, x, y, &all)
}

fn check_isometry(m: &GramLattice, f: &Matrix) -> Result<()> {
    if f.rows() != m.rank() || !f.is_square() {
        return Err(domain("map has the wrong shape"));
    }
    if !m.gram().congruence(f).approx_eq(m.gram()) {
        return Err(domain("map does not preserve the form"));
    }
    if !f.det().is_unit()? {
        return Err(domain("map is not invertible over R"));
    }
    Ok(())
}

/// At most `rank(M)` involutions whose ordered product is `f`.
///
/// Works along an orthogonal basis of increasing norm valuation: each step sends
/// the image of the next basis vector back to it inside its complement.
pub fn decompose_automorphism(m: &GramLattice, f: &Matrix) -> Result<Vec<Matrix>> {
    let cfg = m.ring();
    if !cfg.two_is_unit() {
        return Err(domain("reflections need 2 to be a unit"));
    }
    check_isometry(m, f)?;
    let n = m.rank();
    let d = jordan_diagonalized(m)?;
    let b = &d.transition;
    let b_inv = b.inverse()?;
    let gb = m.gram().congruence(b);
    let mut g = b_inv.mul(f).mul(b);
    let mut out = Vec::new();
    for k in 0..n {
        let gk = g.column(k);
        let ek = unit_vec(cfg, n, k);
        if gk.iter().zip(&ek).all(|(a, e)| a.approx_eq(e)) {
            continue;
        }
        let active: Vec<usize> = (k..n).collect();
        let r = involution_taking(&gb, &gk, &ek, &active)?;
        g = r.mul(&g);
        out.push(b.mul(&r).mul(&b_inv));
    }
    if !g.approx_eq(&Matrix::identity(cfg, n)) {
        return Err(indeterminate("residual map is not the identity at precision"));
    }
    Ok(out)
}

/// Ordered product of matrices (identity for an empty list).
pub fn product(cfg: RingConfig, n: usize, ms: &[Matrix]) -> Matrix {
    ms.iter().fold(Matrix::identity(cfg, n), |acc, r| acc.mul(r))
}

fn expect_gt(x: &RingElem, g: Val, what: &str) -> Result<()> {
    if x.val_gt(g)? {
        Ok(())
    } else {
        Err(domain(format!("{what} has valuation {} but should exceed {g}", x.val_lower())))
    }
}

/// Tolerance `v(M_t) + 2 v(2)` for the approximate isometry condition.
pub fn lift_tolerance(m: &GramLattice) -> Result<Val> {
    let d = crate::jordan::jordan_decompose(m)?;
    let top = d.top_valuation().unwrap_or(m.ring().zero_val());
    Ok(top + m.ring().v2().times(2))
}

/// Exact isometry `psi: M -> N` near an approximate one.
///
/// `phi` has the images of M's basis vectors as columns, in N's coordinates, and
/// must preserve the form modulo `I_{v(M_t) + 2 v(2)}`. The result satisfies
/// `psi^t G_N psi = G_M` at working precision and `psi = phi` modulo `I_{v(2)}`.
pub fn lift_isometry(m: &GramLattice, n: &GramLattice, phi: &Matrix) -> Result<Matrix> {
    m.check_same_ring(n)?;
    let cfg = m.ring();
    let r = m.rank();
    if n.rank() != r || phi.rows() != r || phi.cols() != r {
        return Err(domain("ranks and map shape must agree"));
    }
    if r == 0 {
        return Ok(Matrix::zeros(cfg, 0, 0));
    }
    let v2 = cfg.v2();
    let gn = n.gram();
    let d = jordan_diagonalized(m)?;
    let tol = d.top_valuation().expect("nonzero rank") + v2.times(2);
    let err = gn.congruence(phi).sub(m.gram());
    for x in err.entries() {
        match x.val_gt(tol) {
            Ok(true) => {}
            Ok(false) => {
                return Err(Error::NotApproximatelyIsometric(format!(
                    "form error of valuation {} is not beyond {tol}",
                    x.val_lower()
                )))
            }
            Err(e) => return Err(e),
        }
    }
    if !phi.det().is_unit()? {
        return Err(domain("phi is not invertible over R"));
    }

    let t = &d.transition;
    let gm = m.gram().congruence(t);
    let phi_t = phi.mul(t);
    let mut img: Vec<Vec<RingElem>> = (0..r).map(|j| phi_t.column(j)).collect();
    let one = RingElem::one(cfg);
    let two = RingElem::from_i64(cfg, 2);
    let two_v2 = v2.times(2);
    let mut start = 0;
    let pieces: Vec<usize> = d.blocks.iter().flat_map(|b| b.pieces.iter().copied()).collect();
    for size in pieces {
        let j = start;
        start += size;
        if size == 1 {
            let xx = &gm[(j, j)];
            let fx = img[j].clone();
            // The form error lies beyond v(xx), so v(fxx) = v(xx).
            let fxx = bilinear(gn, &fx, &fx).with_valuation_at_least(xx.valuation()?)?;
            let y = &xx.checked_div(&fxx)? - &one;
            let c = &one + &sqrt_one_plus(&y)?;
            let px = scale_vec(&c, &fx);
            if !bilinear(gn, &px, &px).approx_eq(xx) {
                return Err(indeterminate("rescaled image does not reach the target norm"));
            }
            for k in start..r {
                let a = bilinear(gn, &img[k], &px).with_valuation_at_least(xx.valuation()?)?.checked_div(xx)?;
                expect_gt(&a, two_v2, "complement coefficient")?;
                img[k] = sub_vec(&img[k], &scale_vec(&a, &px));
            }
            img[j] = px;
        } else {
            let k1 = j + 1;
            let (xx, yy, xy) = (&gm[(j, j)], &gm[(k1, k1)], &gm[(j, k1)]);
            let (fx, fy) = (img[j].clone(), img[k1].clone());
            let (fxx, fyy, fxy) = (bilinear(gn, &fx, &fx), bilinear(gn, &fy, &fy), bilinear(gn, &fx, &fy));
            let delta = &(xx * yy) - &xy.square();
            let delta_phi = &(&fxx * &fyy) - &fxy.square();
            let ratio = (xx * &delta_phi).checked_div(&delta)?;
            let tt = solve_quadratic(&fxx, &(&two * &fxy), &(&fyy - yy), Branch::Small)?;
            expect_gt(&tt, v2, "t")?;
            let a2 = &fyy - &(&tt.square() * &ratio);
            let b2 = &(&two * &fxy) + &(&(&two * &tt) * &ratio);
            let c2 = &fxx - &ratio;
            let s = solve_quadratic(&a2, &b2, &c2, Branch::Small)?;
            expect_gt(&s, v2, "s")?;
            let den = &(&(&(&one + &(&s * &tt)) * &fxy) + &(&s * &fyy)) + &(&tt * &fxx);
            let c = xy.checked_div(&den)?;
            expect_gt(&(&c - &one), v2, "c - 1")?;
            let px = scale_vec(&c, &add_vec(&fx, &scale_vec(&s, &fy)));
            let py = add_vec(&fy, &scale_vec(&tt, &fx));
            let ok = bilinear(gn, &px, &px).approx_eq(xx)
                && bilinear(gn, &py, &py).approx_eq(yy)
                && bilinear(gn, &px, &py).approx_eq(xy);
            if !ok {
                return Err(indeterminate("rank-2 correction does not reach the target Gram"));
            }
            for k in start..r {
                let (bx, by) = (bilinear(gn, &img[k], &px), bilinear(gn, &img[k], &py));
                let ax = (&(yy * &bx) - &(xy * &by)).checked_div(&delta)?;
                let ay = (&(xx * &by) - &(xy * &bx)).checked_div(&delta)?;
                expect_gt(&ax, two_v2, "complement coefficient")?;
                expect_gt(&ay, two_v2, "complement coefficient")?;
                img[k] = sub_vec(&sub_vec(&img[k], &scale_vec(&ax, &px)), &scale_vec(&ay, &py));
            }
            img[j] = px;
            img[k1] = py;
        }
    }
    let psi_t = Matrix::from_columns(cfg, r, &img);
    let psi = psi_t.mul(&t.inverse()?);
    if !gn.congruence(&psi).approx_eq(m.gram()) {
        return Err(indeterminate("lifted map is not an isometry at working precision"));
    }
    Ok(psi)
}

/// `psi - phi` has every entry in `I_{v(2)}`.
pub fn congruent_mod_v2(psi: &Matrix, phi: &Matrix) -> Result<bool> {
    let v2 = psi.config().v2();
    psi.sub(phi).entries_val_gt(v2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(cfg: RingConfig, v: &[i64]) -> Vec<RingElem> {
        v.iter().map(|&k| RingElem::from_i64(cfg, k)).collect()
    }

    #[test]
    fn swap_reflection() {
        let c = RingConfig::padic(3, 20).unwrap();
        let m = GramLattice::diagonal_i64(c, &[1, 1]).unwrap();
        let r = reflection_taking(&m, &ints(c, &[1, 0]), &ints(c, &[0, 1])).unwrap();
        assert!(r.approx_eq(&Matrix::from_i64(c, &[vec![0, 1], vec![1, 0]])));
        let fix = reflection_taking(&m, &ints(c, &[1, 0]), &ints(c, &[1, 0])).unwrap();
        assert!(fix.approx_eq(&Matrix::from_i64(c, &[vec![1, 0], vec![0, -1]])));
    }

    #[test]
    fn factor_swap_and_identity() {
        let c = RingConfig::padic(3, 20).unwrap();
        let m = GramLattice::diagonal_i64(c, &[1, 1]).unwrap();
        assert!(decompose_automorphism(&m, &Matrix::identity(c, 2)).unwrap().is_empty());
        let swap = Matrix::from_i64(c, &[vec![0, 1], vec![1, 0]]);
        let rs = decompose_automorphism(&m, &swap).unwrap();
        assert_eq!(rs.len(), 1);
        assert!(product(c, 2, &rs).approx_eq(&swap));
    }

    #[test]
    fn lift_three_adic() {
        let c = RingConfig::padic(3, 30).unwrap();
        let m = GramLattice::diagonal_i64(c, &[1, 1]).unwrap();
        let phi = Matrix::from_i64(c, &[vec![1, 3], vec![0, 1]]);
        let psi = lift_isometry(&m, &m, &phi).unwrap();
        assert!(m.gram().congruence(&psi).approx_eq(m.gram()));
        assert!(congruent_mod_v2(&psi, &phi).unwrap());
    }

    #[test]
    fn lift_rank_two_piece() {
        let c = RingConfig::two_adic(40).unwrap();
        let m = GramLattice::from_i64(c, &[vec![2, 1], vec![1, 2]]).unwrap();
        let t = Matrix::from_i64(c, &[vec![1, 1], vec![0, 1]]);
        let n = m.change_basis(&t).unwrap();
        // phi: M -> N is T^{-1}, perturbed by 8.
        let phi = t.inverse().unwrap().sub(&Matrix::from_i64(c, &[vec![8, 0], vec![8, -8]]));
        let psi = lift_isometry(&m, &n, &phi).unwrap();
        assert!(n.gram().congruence(&psi).approx_eq(m.gram()));
        assert!(congruent_mod_v2(&psi, &phi).unwrap());
    }

    #[test]
    fn lift_rejects_far_maps() {
        let c = RingConfig::padic(3, 20).unwrap();
        let m = GramLattice::diagonal_i64(c, &[1, 1]).unwrap();
        let phi = Matrix::from_i64(c, &[vec![1, 1], vec![0, 1]]);
        assert!(matches!(lift_isometry(&m, &m, &phi), Err(Error::NotApproximatelyIsometric(_))));
    }
}
