//! Brute-force lower estimates of `w(T)` and `w_e(B, C)` from random unit
//! vectors, independent of the certified sweeps.
//!
//! Any sample that makes it into the running top ten is pushed uphill by a
//! fixed-point ascent: with `z = ⟨Tx, x⟩`, the top eigenvector `x'` of
//! `Re(e^{-i arg z} T)` satisfies `|⟨Tx', x'⟩| >= λ_max >= |z|`. The
//! Euclidean variant uses `Re(b̄B + c̄C)` in the same way. Since the first
//! `k` draws do not depend on the sample count, the estimate is monotone in
//! `samples` for a fixed seed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matcore::{top_eigenpair, CMatrix};
use crate::transforms::cartesian;

const KEEP: usize = 10;
const ASCENT_STEPS: usize = 60;

fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<Complex64> {
    let v = DVector::from_fn(n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// Hermitian parts of a list of matrices, shared by every ascent step.
struct Parts {
    re: Vec<DMatrix<Complex64>>,
    im: Vec<DMatrix<Complex64>>,
}

impl Parts {
    fn new(ms: &[&CMatrix]) -> Self {
        let (re, im) = ms
            .iter()
            .map(|m| {
                let (r, i) = cartesian(m);
                (r.into_dmatrix(), i.into_dmatrix())
            })
            .unzip();
        Self { re, im }
    }

    /// `Σ Re(conj(z_k) M_k) = Σ (Re z_k Re M_k + Im z_k Im M_k)`.
    fn direction(&self, z: &[Complex64]) -> DMatrix<Complex64> {
        let n = self.re[0].nrows();
        let mut h = DMatrix::zeros(n, n);
        for (k, zk) in z.iter().enumerate() {
            h += &self.re[k] * Complex64::new(zk.re, 0.0);
            h += &self.im[k] * Complex64::new(zk.im, 0.0);
        }
        h
    }
}

fn objective(ms: &[&CMatrix], x: &DVector<Complex64>) -> (f64, Vec<Complex64>) {
    let z: Vec<Complex64> = ms.iter().map(|m| m.quadratic_form(x)).collect();
    (z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt(), z)
}

fn ascend(ms: &[&CMatrix], parts: &Parts, x: DVector<Complex64>) -> f64 {
    let (mut value, mut z) = objective(ms, &x);
    for _ in 0..ASCENT_STEPS {
        if value == 0.0 {
            break;
        }
        let Ok((_, next)) = top_eigenpair(&parts.direction(&z)) else { break };
        let (v, zn) = objective(ms, &next);
        if v <= value * (1.0 + 1e-15) {
            value = value.max(v);
            break;
        }
        value = v;
        z = zn;
    }
    value
}

fn sample_max(ms: &[&CMatrix], samples: usize, seed: u64) -> f64 {
    let n = ms[0].n();
    let parts = Parts::new(ms);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // ascended values, descending
    let mut top: Vec<f64> = Vec::with_capacity(KEEP + 1);
    for _ in 0..samples.max(1) {
        let x = unit_vector(&mut rng, n);
        let (raw, _) = objective(ms, &x);
        if top.len() == KEEP && raw <= top[KEEP - 1] {
            continue;
        }
        let v = ascend(ms, &parts, x);
        let pos = top.partition_point(|&t| t >= v);
        top.insert(pos, v);
        top.truncate(KEEP);
    }
    top[0]
}

/// Largest `|⟨Tx, x⟩|` found from `samples` random unit vectors plus ascent.
pub fn w_oracle(t: &CMatrix, samples: usize, seed: u64) -> f64 {
    sample_max(&[t], samples, seed)
}

/// Largest `sqrt(|⟨Bx, x⟩|² + |⟨Cx, x⟩|²)` found the same way.
///
/// # Panics
/// If `B` and `C` differ in dimension.
pub fn we_oracle(b: &CMatrix, c: &CMatrix, samples: usize, seed: u64) -> f64 {
    assert_eq!(b.n(), c.n(), "we_oracle needs equal dimensions");
    sample_max(&[b, c], samples, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift() -> CMatrix {
        CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap()
    }

    #[test]
    fn identity() {
        for seed in [0, 7, 123] {
            assert!((w_oracle(&CMatrix::identity(4), 50, seed) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_reaches_one_half() {
        let v = w_oracle(&shift(), 10_000, 1);
        assert!((0.499..=0.5 + 1e-15).contains(&v), "{v}");
    }

    #[test]
    fn monotone_in_samples() {
        let t = CMatrix::from_fn(4, |i, j| Complex64::new((i * 3 + j) as f64 % 5.0 - 2.0, (i as f64 - j as f64) * 0.3));
        let few = w_oracle(&t, 100, 9);
        let many = w_oracle(&t, 10_000, 9);
        assert!(many >= few);
    }

    #[test]
    fn euclidean_cases() {
        let i = CMatrix::identity(3);
        assert!((we_oracle(&i, &i, 100, 3) - 2f64.sqrt()).abs() < 1e-9);
        let z = CMatrix::zeros(3);
        assert_eq!(we_oracle(&z, &z, 100, 3), 0.0);
    }

    #[test]
    fn zero_samples_still_draws_one() {
        assert!((w_oracle(&CMatrix::identity(2), 0, 0) - 1.0).abs() < 1e-12);
    }
}
