//! Randomised invariants of the public API.

use opradius::bounds::{evaluate, BoundId, BoundKind, Inputs, Params, Target};
use opradius::matcore::{matrix_to_json, parse_matrix_json, spectral_norm, svd};
use opradius::radii::{euclidean_radius, numerical_radius, w_objective};
use opradius::transforms::{aluthge_t, cartesian, offdiag_block, polar};
use opradius::{c64, CMatrix};
use proptest::prelude::*;

const TOL: f64 = 1e-9;

fn matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n * n)
        .prop_map(move |v| CMatrix::from_fn(n, |i, j| c64(v[i * n + j].0, v[i * n + j].1)))
}

fn any_matrix() -> impl Strategy<Value = CMatrix> {
    (1usize..=4).prop_flat_map(matrix)
}

/// Products of an `n x k` and a `k x n` factor, `k < n`.
fn low_rank() -> impl Strategy<Value = CMatrix> {
    (2usize..=4).prop_flat_map(|n| (Just(n), 1..n)).prop_flat_map(|(n, k)| {
        let entries = prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n * k);
        (Just(n), Just(k), entries.clone(), entries).prop_map(|(n, k, a, b)| {
            let left =
                CMatrix::from_fn(n, |i, j| if j < k { c64(a[i * k + j].0, a[i * k + j].1) } else { c64(0.0, 0.0) });
            let right =
                CMatrix::from_fn(n, |i, j| if i < k { c64(b[i * n + j].0, b[i * n + j].1) } else { c64(0.0, 0.0) });
            &left * &right
        })
    })
}

fn pair() -> impl Strategy<Value = (CMatrix, CMatrix)> {
    (1usize..=3).prop_flat_map(|n| (matrix(n), matrix(n)))
}

fn radius(t: &CMatrix) -> (f64, f64) {
    let e = numerical_radius(t, TOL * spectral_norm(t).max(1.0)).unwrap();
    (e.lower, e.upper)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn w_lies_between_half_norm_and_norm(t in any_matrix()) {
        let (lo, hi) = radius(&t);
        let norm = spectral_norm(&t);
        let slack = 1e-12 * norm.max(1.0);
        prop_assert!(lo <= hi);
        prop_assert!(hi - lo <= TOL * norm.max(1.0) + slack);
        prop_assert!(0.5 * norm <= hi + slack);
        prop_assert!(lo <= norm + slack);
    }

    #[test]
    fn witness_attains_the_lower_end(t in any_matrix()) {
        let e = numerical_radius(&t, TOL).unwrap();
        let x = e.witness.to_vector();
        prop_assert!((x.norm() - 1.0).abs() < 1e-12);
        prop_assert!((w_objective(&t, &x) - e.lower).abs() <= 1e-10 * spectral_norm(&t).max(1.0));
    }

    #[test]
    fn w_is_unitarily_invariant_and_self_adjoint(t in any_matrix(), phases in prop::collection::vec(0.0..6.3f64, 4), rot in 0.0..6.3f64) {
        let n = t.n();
        let d = CMatrix::diag(&phases[..n].iter().map(|p| c64(p.cos(), p.sin())).collect::<Vec<_>>());
        let conj = &(&d * &t) * &d.adjoint();
        let (lo, hi) = radius(&t);
        let slack = 2.0 * TOL * spectral_norm(&t).max(1.0);
        for other in [conj, t.adjoint(), t.scale(c64(rot.cos(), rot.sin()))] {
            let (l2, h2) = radius(&other);
            prop_assert!(l2 <= hi + slack && lo <= h2 + slack);
        }
    }

    #[test]
    fn w_is_bounded_by_the_cartesian_parts(t in any_matrix()) {
        // max(||Re T||, ||Im T||) <= w(T) <= ||Re T|| + ||Im T||
        let (re, im) = cartesian(&t);
        let (a, b) = (spectral_norm(&re), spectral_norm(&im));
        let (lo, hi) = radius(&t);
        let slack = 1e-12 * spectral_norm(&t).max(1.0);
        prop_assert!(a.max(b) <= hi + slack);
        prop_assert!(lo <= a + b + slack);
    }

    #[test]
    fn svd_and_polar_reconstruct(t in prop_oneof![any_matrix(), low_rank()]) {
        let n = t.n();
        let s = svd(&t).unwrap();
        let scale = spectral_norm(&t).max(1.0);
        let back = &(&s.w * &CMatrix::diag_real(&s.sigma)) * &s.v.adjoint();
        prop_assert!(back.max_abs_diff(&t) <= 1e-13 * scale);
        prop_assert!((&s.w.adjoint() * &s.w).max_abs_diff(&CMatrix::identity(n)) <= 1e-13);
        prop_assert!(s.sigma.windows(2).all(|p| p[0] >= p[1]));

        let parts = polar(&t).unwrap();
        prop_assert!((&parts.u * &parts.p).max_abs_diff(&t) <= 1e-13 * scale);
        // U is a partial isometry: U U* U = U
        let u = &parts.u;
        prop_assert!((&(u * &u.adjoint()) * u).max_abs_diff(u) <= 1e-13);
    }

    #[test]
    fn aluthge_keeps_traces_and_does_not_raise_w(t in prop_oneof![any_matrix(), low_rank()], s in 0.0..=1.0f64) {
        let a = aluthge_t(&t, s).unwrap();
        let scale = spectral_norm(&t).max(1.0);
        for k in 1..=t.n() as u32 {
            let gap = (a.pow(k).trace() - t.pow(k).trace()).norm();
            prop_assert!(gap <= 1e-10 * scale.powi(k as i32), "k = {k}: {gap}");
        }
        let (lo_a, _) = radius(&a);
        let (_, hi_t) = radius(&t);
        prop_assert!(lo_a <= hi_t + 1e-8 * scale);
    }

    #[test]
    fn offdiag_radius_is_swap_invariant((x, y) in pair()) {
        let (l1, h1) = radius(&offdiag_block(&x, &y).unwrap());
        let (l2, h2) = radius(&offdiag_block(&y, &x).unwrap());
        let slack = 2.0 * TOL * spectral_norm(&x).max(spectral_norm(&y)).max(1.0);
        prop_assert!(l1 <= h2 + slack && l2 <= h1 + slack);
    }

    #[test]
    fn matrix_json_round_trips(t in any_matrix()) {
        prop_assert_eq!(parse_matrix_json(&matrix_to_json(&t)).unwrap(), t);
    }

    #[test]
    fn single_matrix_bounds_are_sound(t in prop_oneof![any_matrix(), low_rank()], s in 0.0..=1.0f64, r in 1.0..=2.0f64) {
        let (lo, hi) = radius(&t);
        let params = Params { t: s, r };
        let allowance = 1e-7 * t.frobenius_norm().max(1.0);
        for &id in BoundId::ALL.iter().filter(|id| id.signature().is_single()) {
            let b = evaluate(id, Inputs::Single(&t), &params).unwrap();
            prop_assert_eq!(b.target, Target::W);
            let a = allowance + b.uncertainty();
            if matches!(b.kind, BoundKind::Lower | BoundKind::TwoSided) {
                prop_assert!(b.value <= hi + a, "{id}: {} > {hi}", b.value);
            }
            let upper = match b.kind {
                BoundKind::Upper => Some(b.value),
                BoundKind::TwoSided => b.upper,
                BoundKind::Lower => None,
            };
            if let Some(u) = upper {
                prop_assert!(lo <= u + a, "{id}: {u} < {lo}");
            }
        }
    }
}

proptest! {
    // each w_e enclosure costs milliseconds; keep the case count low
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn euclidean_radius_is_symmetric_and_sandwiched((b, c) in pair()) {
        let scale = spectral_norm(&b).max(spectral_norm(&c)).max(1.0);
        let tol = 1e-8 * scale;
        let e1 = euclidean_radius(&b, &c, tol).unwrap();
        let e2 = euclidean_radius(&c, &b, tol).unwrap();
        prop_assert!(e1.lower <= e2.upper + tol && e2.lower <= e1.upper + tol);
        let (wb, wc) = (radius(&b), radius(&c));
        prop_assert!(wb.0.max(wc.0) <= e1.upper + tol);
        prop_assert!(e1.lower <= wb.1.hypot(wc.1) + tol);
    }

    #[test]
    fn pair_bounds_are_sound((b, c) in pair(), r in 1.0..=2.0f64) {
        let scale = spectral_norm(&b).max(spectral_norm(&c)).max(1.0);
        let e = euclidean_radius(&b, &c, 1e-9 * scale).unwrap();
        let xy = radius(&offdiag_block(&b, &c).unwrap());
        let params = Params { t: 0.5, r };
        let allowance = 1e-7 * b.frobenius_norm().hypot(c.frobenius_norm()).max(1.0);
        for &id in BoundId::ALL.iter().filter(|id| !id.signature().is_single()) {
            let res = match evaluate(id, Inputs::Pair(&b, &c), &params) {
                Ok(res) => res,
                Err(opradius::Error::NotApplicable { .. }) => continue,
                Err(err) => return Err(TestCaseError::fail(format!("{id}: {err}"))),
            };
            let (lo, hi) = match res.target {
                Target::We => (e.lower, e.upper),
                Target::WOffdiag => xy,
                Target::W => unreachable!("pair ids target w_e or the block radius"),
            };
            let a = allowance + res.uncertainty();
            match res.kind {
                BoundKind::Lower => prop_assert!(res.value <= hi + a, "{id}"),
                BoundKind::Upper => prop_assert!(lo <= res.value + a, "{id}"),
                BoundKind::TwoSided => prop_assert!(res.value <= hi + a && lo <= res.upper.unwrap() + a, "{id}"),
            }
        }
    }

    #[test]
    fn digests_identify_inputs(t in any_matrix()) {
        let p = Params::default();
        let a = evaluate(BoundId::WLowerTh214, Inputs::Single(&t), &p).unwrap();
        let b = evaluate(BoundId::WLowerTh214, Inputs::Single(&t), &p).unwrap();
        prop_assert_eq!(&a.inputs_digest, &b.inputs_digest);
        let nudged = &t + &CMatrix::identity(t.n()).scale_real(1e-3);
        let c = evaluate(BoundId::WLowerTh214, Inputs::Single(&nudged), &p).unwrap();
        prop_assert_ne!(a.inputs_digest, c.inputs_digest);
    }
}
