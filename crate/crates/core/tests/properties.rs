//! Invariants of each module as property tests.

mod common;

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use proptest::prelude::*;
use specred::graphs::{
    cycle, distance_partition, hypercube, is_equitable, path, Equitability, VertexPartition,
};
use specred::io::{emit, parse};
use specred::linalg::{eigenvalues, hermitian_eigen, max_abs};
use specred::quantumwalk::{evolve, pst_check, walk_equivalence_check};
use specred::ratfun::pfd_scalar;
use specred::ratmat::pfd_matrix;
use specred::reduction::{char_poly, cospectral_check, reduce_via_formula2};
use specred::unfolding::{hollow, unfold_general, unfold_hermitian};
use specred::{
    reduce, CMatrix, ExactRational as Q, FloatComplex, LabeledMatrix, Matrix, Polynomial, RatMatrix, RationalFunction,
    Scalar, C64,
};

use common::{leading, random_exact, random_graph, random_hermitian, rng};

fn small_q() -> impl Strategy<Value = Q> {
    (-5i64..=5, 1i64..=4).prop_map(|(p, q)| Q::from_ratio(p, q))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Polynomial<Q>> {
    prop::collection::vec(small_q(), 1..=max_deg + 1).prop_map(Polynomial::new)
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Polynomial<Q>> {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn rational() -> impl Strategy<Value = RationalFunction<Q>> {
    (poly(3), nonzero_poly(3)).prop_map(|(n, d)| RationalFunction::new(n, d).expect("nonzero denominator"))
}

/// Proper rational functions with integer poles at mutual distance ≥ 1,
/// possibly repeated, plus a constant.
fn pfd_input() -> impl Strategy<Value = RationalFunction<Q>> {
    (prop::collection::vec(-6i64..=6, 1..=5), poly(0), poly(4)).prop_map(|(roots, head, num)| {
        let den = Polynomial::from_roots(&roots.iter().map(|&r| Q::from_i64(r)).collect::<Vec<_>>());
        let proper = RationalFunction::new(num.div_rem(&den).unwrap().1, den).expect("monic denominator");
        &proper + &RationalFunction::from_poly(head)
    })
}

fn sample_off_poles(r: &RationalFunction<Q>, seed: u64) -> Vec<C64> {
    use rand::Rng;
    let poles: Vec<C64> = r.poles().map(|p| p.iter().map(|c| c.value).collect()).unwrap_or_default();
    let mut g = rng(seed);
    let mut out = Vec::new();
    while out.len() < 10 {
        let z = C64::new(g.random_range(-100.0..100.0), g.random_range(-1.0..1.0));
        if poles.iter().all(|p| (z - p).norm() >= 0.5) {
            out.push(z);
        }
    }
    out
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / 1f64.max(b.norm())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn pfd_resums_to_input(r in pfd_input(), seed in any::<u64>()) {
        let p = pfd_scalar(&r).unwrap();
        for z in sample_off_poles(&r, seed) {
            prop_assert!(rel(p.eval(z), r.eval_c64(z)) <= 1e-9);
        }
        prop_assert_eq!(p.to_rational(), r.cast::<FloatComplex>());
    }

    #[test]
    fn rational_functions_form_a_field(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in rational(), b in rational(), x in -20i64..=20) {
        let x = Q::from_ratio(2 * x + 1, 2);
        if let (Ok(ea), Ok(eb)) = (a.eval(&x), b.eval(&x)) {
            prop_assert_eq!((&a + &b).eval(&x).unwrap(), ea.add_ref(&eb));
            prop_assert_eq!((&a * &b).eval(&x).unwrap(), ea.mul_ref(&eb));
        }
    }

    #[test]
    fn inverse_is_an_involution(entries in prop::collection::vec(nonzero_poly(1), 9)) {
        let m = RatMatrix::new(3, 3, entries.into_iter().map(RationalFunction::from_poly).collect()).unwrap();
        prop_assume!(!m.det().unwrap().is_zero());
        prop_assert_eq!(m.inverse().unwrap().inverse().unwrap(), m);
    }

    #[test]
    fn matrix_pfd_reconstructs(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = random_exact(&mut g, 5);
        let r = reduce(&a, &leading(2)).unwrap();
        let pfd = pfd_matrix(&r).unwrap();
        let f = r.cast::<FloatComplex>();
        for z in [C64::new(31.5, 0.0), C64::new(-27.25, 3.0), C64::new(0.5, 40.0)] {
            let gap = max_abs(&(pfd.eval(z) - f.eval_c64(z)));
            prop_assert!(gap <= 1e-9 * 1f64.max(max_abs(&f.eval_c64(z))));
        }
    }

    #[test]
    fn hermitian_reductions_have_real_simple_psd_poles(seed in any::<u64>(), n in 3usize..=7) {
        let mut g = rng(seed);
        let a = random_hermitian(&mut g, n, 0);
        let pfd = pfd_matrix(&reduce(&a, &leading(2)).unwrap()).unwrap();
        for t in &pfd.terms {
            prop_assert_eq!(t.order, 1);
            prop_assert!(t.pole.im.abs() <= 1e-8);
            let (vals, _) = hermitian_eigen(&((&t.coeff + t.coeff.adjoint()) * C64::new(0.5, 0.0)));
            prop_assert!(vals[0] >= -1e-8);
        }
    }

    #[test]
    fn inverse_resolvent_formula_equals_reduce(seed in any::<u64>(), k in 1usize..=3) {
        let mut g = rng(seed);
        let a = random_exact(&mut g, 5);
        let s = leading(k);
        prop_assert_eq!(reduce_via_formula2(&a, &s).unwrap(), reduce(&a, &s).unwrap());
    }

    #[test]
    fn constant_part_is_the_leading_block(seed in any::<u64>(), k in 1usize..=4) {
        let mut g = rng(seed);
        let a = random_exact(&mut g, 6);
        let idx: Vec<usize> = (0..k).collect();
        prop_assert_eq!(reduce(&a, &leading(k)).unwrap().constant_part().unwrap(), a.matrix().submatrix(&idx, &idx));
    }

    #[test]
    fn cospectral_vertices_match_deletion_oracle(seed in any::<u64>(), n in 3usize..=7) {
        let mut g = rng(seed);
        let a = random_graph(&mut g, n, 0.5);
        let deleted = |v: usize| {
            let rest: Vec<usize> = (0..n).filter(|&i| i != v).collect();
            char_poly(&a.matrix().submatrix(&rest, &rest))
        };
        for u in 0..n {
            for v in u + 1..n {
                let got = cospectral_check(&a, &a.labels()[u], &a.labels()[v]).unwrap();
                prop_assert_eq!(got, deleted(u) == deleted(v));
            }
        }
    }

    #[test]
    fn equitable_iff_row_sums_constant(seed in any::<u64>(), n in 2usize..=7, classes in 1usize..=4) {
        use rand::Rng;
        let mut g = rng(seed);
        let a = random_graph(&mut g, n, 0.5);
        let classes = classes.min(n);
        let mut owner: Vec<usize> = (0..n).map(|i| if i < classes { i } else { g.random_range(0..classes) }).collect();
        owner.rotate_left(g.random_range(0..n));
        let parts: Vec<Vec<String>> =
            (0..classes).map(|c| (0..n).filter(|&i| owner[i] == c).map(|i| a.labels()[i].clone()).collect()).collect();
        let pi = VertexPartition::new(parts).unwrap();
        // AP from scratch: row i counts neighbors of i in each class.
        let ap: Vec<Vec<Q>> = (0..n)
            .map(|i| (0..classes).map(|c| (0..n).filter(|&j| owner[j] == c).fold(Q::zero(), |s, j| s + a.matrix()[(i, j)].clone())).collect())
            .collect();
        let constant = (0..n).all(|i| (0..n).all(|j| owner[i] != owner[j] || ap[i] == ap[j]));
        match is_equitable(&a, &pi).unwrap() {
            Equitability::Equitable(d) => {
                prop_assert!(constant);
                for i in 0..n {
                    for c in 0..classes {
                        prop_assert_eq!(&ap[i][c], &d[(owner[i], c)]);
                    }
                }
            }
            Equitability::NotEquitable(_) => prop_assert!(!constant),
        }
    }

    #[test]
    fn hypercube_distance_partitions(n in 1usize..=5, v in any::<prop::sample::Index>()) {
        let q = hypercube::<Q>(n);
        let start = q.labels()[v.index(q.size())].clone();
        let pi = distance_partition(&q, &start).unwrap();
        let d = is_equitable(&q, &pi).unwrap().divisor().cloned().expect("equitable");
        for i in 0..=n {
            for j in 0..=n {
                let want = if j == i + 1 { n - i } else if i == j + 1 { i } else { 0 };
                prop_assert_eq!(d[(i, j)].clone(), Q::from_i64(want as i64));
            }
        }
    }

    #[test]
    fn exact_unfolding_round_trips(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = random_exact(&mut g, 5);
        let r = reduce(&a, &leading(2)).unwrap();
        prop_assert!(unfold_general(&r).unwrap().round_trip_gap(&r).unwrap() <= 1e-6);
    }

    #[test]
    fn hollowing_keeps_spectrum(seed in any::<u64>(), n in 3usize..=8) {
        let mut g = rng(seed);
        let a = random_hermitian(&mut g, n, 2);
        let u = unfold_hermitian(&reduce(&a, &leading(2)).unwrap()).unwrap();
        prop_assert!(u.hermitian_defect() <= 1e-9 * 1f64.max(max_abs(&u.cmatrix())));
        let h = hollow(&u).unwrap();
        prop_assert!(h.max_diagonal() <= 1e-10);
        let m = u.cmatrix();
        let tail_trace: C64 = (2..u.size()).map(|i| m[(i, i)]).sum();
        let mut before: Vec<f64> = u.eigenvalues().iter().map(|z| z.re).collect();
        if h.size() > u.size() {
            before.push(-tail_trace.re);
        }
        let mut after: Vec<f64> = h.eigenvalues().iter().map(|z| z.re).collect();
        before.sort_by(f64::total_cmp);
        after.sort_by(f64::total_cmp);
        prop_assert_eq!(before.len(), after.len());
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() <= 1e-8 * 1f64.max(x.abs()));
        }
    }

    #[test]
    fn walks_are_unitary_groups(seed in any::<u64>(), n in 1usize..=16, s in -10.0f64..10.0, t in -10.0f64..10.0) {
        let mut g = rng(seed);
        let a = random_hermitian(&mut g, n, 0);
        let u = evolve(&a, t).unwrap();
        prop_assert!((u.adjoint() * &u - CMatrix::identity(n, n)).norm() <= 1e-10 * n as f64);
        let us = evolve(&a, s).unwrap();
        prop_assert!(max_abs(&(us * u - evolve(&a, s + t).unwrap())) <= 1e-9);
    }

    #[test]
    fn tail_similarity_preserves_restricted_walks(seed in any::<u64>(), n in 3usize..=8) {
        use rand::Rng;
        let mut g = rng(seed);
        let a = random_hermitian(&mut g, n, 0);
        let m = n - 2;
        let z = CMatrix::from_fn(m, m, |_, _| C64::new(g.random_range(-1.0..1.0), g.random_range(-1.0..1.0)));
        let q = z.qr().q();
        let mut w = CMatrix::identity(n, n);
        w.view_mut((2, 2), (m, m)).copy_from(&q);
        let b = w.adjoint() * a.to_cmatrix() * &w;
        let b = LabeledMatrix::new(a.labels().to_vec(), Matrix::<FloatComplex>::from_cmatrix(&b)).unwrap();
        let times: Vec<f64> = (0..20).map(|k| 0.37 * k as f64).collect();
        prop_assert!(walk_equivalence_check(&a, &leading(2), &b, &leading(2), &times, 1e-9).unwrap());
    }

    #[test]
    fn pst_is_symmetric(which in 0usize..6, u in any::<prop::sample::Index>(), v in any::<prop::sample::Index>(), tau in prop::sample::select(vec![FRAC_PI_2, PI / SQRT_2, PI, 1.234])) {
        let graphs = [path::<Q>(2), path::<Q>(3), hypercube::<Q>(2), hypercube::<Q>(3), cycle::<Q>(4), cycle::<Q>(6)];
        let a = &graphs[which];
        let (u, v) = (u.index(a.size()), v.index(a.size()));
        prop_assume!(u != v);
        let (lu, lv) = (&a.labels()[u], &a.labels()[v]);
        let forward = pst_check(a, lu, lv, tau, 1e-8).unwrap();
        let back = pst_check(a, lv, lu, tau, 1e-8).unwrap();
        prop_assert_eq!(forward.is_certified(), back.is_certified());
        if let (Some(f), Some(b)) = (forward.certificate(), back.certificate()) {
            prop_assert!((f.gamma - b.gamma).norm() <= 1e-9);
        }
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>()) {
        let mut g = rng(seed);
        let a = random_exact(&mut g, 4);
        let text = emit(&a);
        prop_assert_eq!(&parse::<LabeledMatrix<Q>>(&text).unwrap(), &a);
        prop_assert_eq!(&emit(&parse::<LabeledMatrix<Q>>(&text).unwrap()), &text);
        let r = reduce(&a, &leading(2)).unwrap();
        let rt = emit(&r);
        prop_assert_eq!(&parse::<RatMatrix<Q>>(&rt).unwrap(), &r);
        let h = random_hermitian(&mut g, 4, 0);
        let ht = emit(&h);
        prop_assert_eq!(&emit(&parse::<LabeledMatrix<FloatComplex>>(&ht).unwrap()), &ht);
    }
}

#[test]
fn pst_symmetry_is_exercised() {
    // The property above must see certified pairs, not only failures.
    let p3 = path::<Q>(3);
    assert!(pst_check(&p3, "1", "3", PI / SQRT_2, 1e-8).unwrap().is_certified());
    assert!(pst_check(&hypercube::<Q>(3), "000", "111", FRAC_PI_2, 1e-8).unwrap().is_certified());
    let c6 = cycle::<Q>(6);
    let spectrum = eigenvalues(&c6.to_cmatrix());
    assert_eq!(spectrum.len(), 6);
}
