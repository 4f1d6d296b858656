//! Polynomial roots with multiplicities.
//!
//! Roots come from companion-matrix eigenvalues followed by Newton polishing.
//! Exact polynomials are first split into squarefree factors, so their
//! multiplicities are exact and every root handed to the eigensolver is simple.
//! Float polynomials are clustered: roots closer than δ are identified.

use nalgebra::{DMatrix, Schur};

use super::poly::Polynomial;
use super::scalar::{Scalar, C64};
use crate::error::{Error, Result};
use crate::tolerance::float_delta;

/// A distinct root and its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootCluster {
    pub value: C64,
    pub multiplicity: usize,
}

/// All roots of the polynomial with ascending coefficients `coeffs`, repeated by multiplicity.
pub fn roots_c64(coeffs: &[C64]) -> Vec<C64> {
    let mut c: Vec<C64> = coeffs.to_vec();
    while c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let zeros = c.iter().take_while(|z| z.norm() == 0.0).count();
    let c = &c[zeros..];
    let mut out = vec![C64::new(0.0, 0.0); zeros];
    if c.len() <= 1 {
        return out;
    }
    let n = c.len() - 1;
    let lead = c[n];
    let monic: Vec<C64> = c.iter().map(|z| z / lead).collect();
    // Rescale λ = s·μ so the coefficients of the companion are of unit size.
    let s = (0..n)
        .map(|k| monic[k].norm().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let comp = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -monic[i] / s.powi((n - i) as i32)
        } else if i == j + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let eig = Schur::try_new(comp, f64::EPSILON, 100_000)
        .and_then(|schur| schur.eigenvalues())
        .expect("companion Schur iteration converges");
    let raw: Vec<C64> = eig.iter().map(|mu| mu * s).collect();
    // Newton is only trusted on isolated roots; members of a tight group keep
    // their eigenvalue estimates, whose mean is well conditioned.
    for (i, z) in raw.iter().enumerate() {
        let isolated = raw
            .iter()
            .enumerate()
            .all(|(j, w)| i == j || (z - w).norm() > 1e-3 * 1f64.max(z.norm()));
        out.push(if isolated { polish(c, *z) } else { *z });
    }
    out
}

fn eval_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Newton iterations that are kept only while they reduce the residual.
pub fn polish(coeffs: &[C64], mut z: C64) -> C64 {
    let (mut p, mut dp) = eval_with_derivative(coeffs, z);
    for _ in 0..8 {
        if p.norm() == 0.0 || dp.norm() == 0.0 {
            break;
        }
        let cand = z - p / dp;
        let (pc, dpc) = eval_with_derivative(coeffs, cand);
        if pc.norm() >= p.norm() {
            break;
        }
        z = cand;
        p = pc;
        dp = dpc;
    }
    z
}

/// Groups roots closer than `delta·max(1, |r|)`.
///
/// Fails with [`Error::IllConditionedRoots`] when two resulting clusters are
/// within ten times that radius, since then the identification is not stable.
pub fn cluster_roots(roots: &[C64], delta: f64) -> Result<Vec<RootCluster>> {
    let n = roots.len();
    let radius = |a: C64, b: C64| delta * 1f64.max(a.norm()).max(b.norm());
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() <= radius(roots[i], roots[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, C64, usize)> = Vec::new();
    for (i, &root) in roots.iter().enumerate().take(n) {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += root;
                g.2 += 1;
            }
            None => groups.push((r, root, 1)),
        }
    }
    let clusters: Vec<RootCluster> = groups
        .into_iter()
        .map(|(_, sum, m)| RootCluster { value: sum / m as f64, multiplicity: m })
        .collect();
    for (i, a) in clusters.iter().enumerate() {
        for b in &clusters[i + 1..] {
            let d = (a.value - b.value).norm();
            if d <= 10.0 * radius(a.value, b.value) {
                return Err(Error::IllConditionedRoots {
                    a: a.value.to_string(),
                    b: b.value.to_string(),
                    distance: d,
                });
            }
        }
    }
    Ok(sort_clusters(clusters))
}

fn sort_clusters(mut c: Vec<RootCluster>) -> Vec<RootCluster> {
    c.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    c
}

/// Squarefree factorization f = ∏ gᵢ^i (Yun). Returns `(gᵢ, i)` for nonconstant gᵢ.
pub fn squarefree<T: Scalar>(f: &Polynomial<T>) -> Vec<(Polynomial<T>, usize)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = f.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).unwrap().0;
    let c = df.div_rem(&a0).unwrap().0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        let a = b.gcd(&d);
        let nb = b.div_rem(&a).unwrap().0;
        let nc = d.div_rem(&a).unwrap().0;
        d = &nc - &nb.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        b = nb;
        i += 1;
    }
    out
}

/// Distinct roots with multiplicities.
pub fn polynomial_roots<T: Scalar>(p: &Polynomial<T>) -> Result<Vec<RootCluster>> {
    if T::EXACT {
        let mut out = Vec::new();
        for (g, m) in squarefree(p) {
            let gc = g.to_c64();
            for z in roots_c64(&gc) {
                out.push(RootCluster { value: exact_newton(&g, z), multiplicity: m });
            }
        }
        Ok(sort_clusters(out))
    } else {
        let c = p.to_c64();
        let mut clusters = cluster_roots(&roots_c64(&c), float_delta())?;
        for cl in clusters.iter_mut().filter(|cl| cl.multiplicity > 1) {
            // A root of multiplicity m is a simple root of the (m-1)-th derivative.
            let mut d = p.clone();
            for _ in 1..cl.multiplicity {
                d = d.derivative();
            }
            let refined = polish(&d.to_c64(), cl.value);
            if (refined - cl.value).norm() <= float_delta() * 1f64.max(cl.value.norm()) {
                cl.value = refined;
            }
        }
        Ok(clusters)
    }
}

/// Two Newton steps evaluated exactly at the dyadic point `z`, for a simple root of `g`.
fn exact_newton<T: Scalar>(g: &Polynomial<T>, mut z: C64) -> C64 {
    let dg = g.derivative();
    for _ in 0..2 {
        let zt = T::from_c64(z);
        let d = dg.eval(&zt);
        if d.is_zero() {
            break;
        }
        let step = g.eval(&zt).div_ref(&d).to_c64();
        if !step.is_finite() {
            break;
        }
        z -= step;
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::scalar::{ExactRational, FloatComplex};

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn exact_multiplicities() {
        // (λ-1)²(λ+2)³(λ²+1)
        let x = |a: i64| Polynomial::<ExactRational>::linear(&ExactRational::from_i64(a));
        let q = Polynomial::new(vec![ExactRational::from_i64(1), ExactRational::zero(), ExactRational::one()]);
        let f = &(&x(1).pow(2) * &x(-2).pow(3)) * &q;
        let r = polynomial_roots(&f).unwrap();
        assert_eq!(r.len(), 4);
        assert!(close(r[0].value, C64::new(-2.0, 0.0), 1e-14) && r[0].multiplicity == 3);
        assert!(close(r[1].value, C64::new(0.0, -1.0), 1e-14) && r[1].multiplicity == 1);
        assert!(close(r[2].value, C64::new(0.0, 1.0), 1e-14) && r[2].multiplicity == 1);
        assert!(close(r[3].value, C64::new(1.0, 0.0), 1e-14) && r[3].multiplicity == 2);
    }

    #[test]
    fn float_double_root_clusters() {
        let roots = [C64::new(3.0, 0.0), C64::new(3.0, 0.0), C64::new(-1.0, 0.0)];
        let p = Polynomial::<FloatComplex>::from_roots(&roots.map(FloatComplex));
        let r = polynomial_roots(&p).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[1].multiplicity, 2);
        assert!(close(r[1].value, C64::new(3.0, 0.0), 1e-9));
    }

    #[test]
    fn near_collision_is_reported() {
        let r = [C64::new(1.0, 0.0), C64::new(1.0 + 3e-6, 0.0)];
        assert!(matches!(cluster_roots(&r, 1e-6), Err(Error::IllConditionedRoots { .. })));
    }

    #[test]
    fn zero_roots_are_exact() {
        let r = roots_c64(&[C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert_eq!(r, vec![C64::new(0.0, 0.0); 2]);
    }
}
