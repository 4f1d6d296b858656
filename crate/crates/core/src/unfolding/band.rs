use std::collections::VecDeque;

use serde_json::json;

use super::{hollowing_unitary, rotate_tail, Unfolding, HOLLOW_TOL};
use crate::error::{Error, Result};
use crate::linalg::{max_abs, orthonormal_complement, CMatrix};
use crate::ratfun::C64;
use crate::tolerance::{float_eps, rank_tol};

/// Largest entry outside the block-tridiagonal envelope of `blocks`.
pub fn block_bandwidth_defect(a: &CMatrix, blocks: &[usize]) -> f64 {
    let owner: Vec<usize> = blocks.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat_n(b, k)).collect();
    if owner.len() != a.nrows() {
        return f64::INFINITY;
    }
    let mut worst: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if owner[i].abs_diff(owner[j]) > 1 {
                worst = worst.max(a[(i, j)].norm());
            }
        }
    }
    worst
}

/// Block-tridiagonal form by repeated singular value decompositions.
///
/// Starting from the reduced block, the coupling C between the current block
/// and the untouched tail is factored as UΣV*; rotating the tail by V leaves
/// the coupling in rank(C) columns, which become the next block. When the next
/// block is as large as the current one its basis is V_rU_r*, so the coupling
/// is the positive semidefinite (CC*)^{1/2}. Afterwards every diagonal block of
/// zero trace is hollowed by a rotation inside that block.
pub fn compress_band(u: &Unfolding) -> Result<Unfolding> {
    if !u.is_hermitian() {
        return Err(Error::NotHermitian(u.hermitian_defect()));
    }
    let mut a = u.cmatrix();
    let n = a.nrows();
    let s = u.s();
    let scale = 1f64.max(max_abs(&a));
    let mut blocks = vec![s];
    let (mut start, mut k) = (0, s);
    while start + k < n {
        let t0 = start + k;
        let m = n - t0;
        let c = a.view((start, t0), (k, m)).into_owned();
        let svd = c.svd(true, true);
        let sv = &svd.singular_values;
        let r = sv.iter().filter(|&&x| x > rank_tol() * scale).count();
        if r == 0 {
            blocks.push(m);
            break;
        }
        let v_t = svd.v_t.as_ref().expect("requested V");
        let v_r = v_t.rows(0, r).adjoint();
        let lead = if r == k {
            let u_r = svd.u.as_ref().expect("requested U").columns(0, r).into_owned();
            &v_r * u_r.adjoint()
        } else {
            v_r
        };
        let mut w = CMatrix::zeros(m, m);
        w.view_mut((0, 0), (m, r)).copy_from(&lead);
        w.view_mut((0, r), (m, m - r)).copy_from(&orthonormal_complement(&lead));
        a = rotate_tail(&a, t0, &w);
        blocks.push(r);
        start = t0;
        k = r;
    }
    let mut o = s;
    for &b in &blocks[1..] {
        let d = a.view((o, o), (b, b)).into_owned();
        let diag = (0..b).map(|i| d[(i, i)].norm()).fold(0.0, f64::max);
        let trace: C64 = d.trace();
        if diag > HOLLOW_TOL && trace.norm() <= HOLLOW_TOL {
            a = rotate_tail(&a, o, &hollowing_unitary(&d));
        }
        o += b;
    }
    // Entries outside the envelope are rounding residue of the rotations.
    let owner: Vec<usize> = blocks.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat_n(b, k)).collect();
    let residue = block_bandwidth_defect(&a, &blocks);
    for i in 0..n {
        for j in 0..n {
            if owner[i].abs_diff(owner[j]) > 1 {
                a[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    let mut next = u.derive(a, "compress_band", json!({"blocks": blocks, "discarded": residue}))?;
    next.blocks = blocks;
    u.ensure_invariant(next)
}

/// Diagonal ±1 conjugation of the tail making as many off-diagonal entries
/// nonnegative as a spanning-tree start plus greedy single flips achieves.
pub fn sign_cleanup(u: &Unfolding) -> Result<Unfolding> {
    let a = u.cmatrix();
    let n = a.nrows();
    let scale = 1f64.max(max_abs(&a));
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            defect = defect.max(a[(i, j)].im.abs()).max((a[(i, j)].re - a[(j, i)].re).abs());
        }
    }
    if defect > float_eps() * scale {
        return Err(Error::NotRealSymmetric(defect));
    }
    let re = |i: usize, j: usize| a[(i, j)].re;
    let edge = |i: usize, j: usize| i != j && re(i, j).abs() > 1e-12 * scale;
    let s = u.s();
    let mut sign = vec![0i8; n];
    let mut queue = VecDeque::new();
    for (i, x) in sign.iter_mut().enumerate().take(s) {
        *x = 1;
        queue.push_back(i);
    }
    while let Some(p) = queue.pop_front() {
        for j in 0..n {
            if sign[j] == 0 && edge(p, j) {
                sign[j] = if re(p, j) * f64::from(sign[p]) >= 0.0 { 1 } else { -1 };
                queue.push_back(j);
            }
        }
    }
    for x in sign.iter_mut() {
        if *x == 0 {
            *x = 1;
        }
    }
    loop {
        let mut flipped = false;
        for j in s..n {
            let gain: i64 = (0..n)
                .filter(|&i| edge(i, j))
                .map(|i| if re(i, j) * f64::from(sign[i] * sign[j]) < 0.0 { 1 } else { -1 })
                .sum();
            if gain > 0 {
                sign[j] = -sign[j];
                flipped = true;
            }
        }
        if !flipped {
            break;
        }
    }
    let out = CMatrix::from_fn(n, n, |i, j| a[(i, j)] * f64::from(sign[i] * sign[j]));
    let mut next = u.derive(out, "sign_cleanup", json!({"signs": sign}))?;
    next.blocks = u.blocks.clone();
    u.ensure_invariant(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use crate::unfolding::unfold_hermitian;
    use crate::ratfun::{ExactRational as Q, Polynomial, RationalFunction, Scalar};
    use crate::ratmat::RatMatrix;

    fn cm(n: usize, f: impl Fn(usize, usize) -> f64) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| c64(f(i, j)))
    }

    #[test]
    fn tridiagonal_input_keeps_bandwidth() {
        let a = cm(4, |i, j| if i.abs_diff(j) == 1 { 1.0 + i.min(j) as f64 } else { 0.0 });
        let u = Unfolding::new(a, 1, Vec::new()).unwrap();
        let c = compress_band(&u).unwrap();
        assert_eq!(c.blocks(), &[1, 1, 1, 1]);
        assert_eq!(block_bandwidth_defect(&c.cmatrix(), c.blocks()), 0.0);
        let diff: f64 = (c.cmatrix() - u.cmatrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn compresses_star_of_poles() {
        // Two coupled vertices with six simple poles.
        let poles = [-3, -2, -1, 1, 2, 4];
        let mut entries = vec![RationalFunction::<Q>::zero(); 4];
        for (k, &p) in poles.iter().enumerate() {
            let den = Polynomial::linear(&Q::from_i64(p));
            let v = [1 + k as i64 % 2, 1, 1, 2 - k as i64 % 2];
            for (e, c) in entries.iter_mut().zip(v) {
                *e = &*e + &RationalFunction::new(Polynomial::constant(Q::from_i64(c)), den.clone()).unwrap();
            }
        }
        let r = RatMatrix::new(2, 2, entries).unwrap();
        let u = unfold_hermitian(&r).unwrap();
        let c = compress_band(&u).unwrap();
        assert!(c.blocks().iter().all(|&b| b <= 2));
        assert_eq!(c.blocks().iter().sum::<usize>(), c.size());
        assert!(block_bandwidth_defect(&c.cmatrix(), c.blocks()) == 0.0);
        assert!(c.round_trip_gap(&r).unwrap() <= 1e-9);
    }

    #[test]
    fn signs_of_trees_become_nonnegative() {
        let edges = [(0, 1, -2.0), (1, 2, 3.0), (1, 3, -1.0), (3, 4, -0.5), (2, 5, -4.0)];
        let mut a = CMatrix::zeros(6, 6);
        for &(i, j, w) in &edges {
            a[(i, j)] = c64(w);
            a[(j, i)] = c64(w);
        }
        let u = Unfolding::new(a, 1, Vec::new()).unwrap();
        let c = sign_cleanup(&u).unwrap();
        assert!(c.cmatrix().iter().all(|z| z.re >= 0.0));
        let nonneg = Unfolding::new(cm(3, |i, j| if i != j { 1.0 } else { 0.0 }), 1, Vec::new()).unwrap();
        assert_eq!(sign_cleanup(&nonneg).unwrap().cmatrix(), nonneg.cmatrix());
    }
}
