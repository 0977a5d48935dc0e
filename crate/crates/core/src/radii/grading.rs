//! Detection of a diagonal circle symmetry `D(θ) T D(θ)* = e^{iθ} T`.
//!
//! With `D(θ) = diag(e^{i k_j θ})` the symmetry holds exactly when every
//! nonzero entry `T_ij` has `k_i - k_j = 1`. Weighted shifts and their
//! products are the typical case; their numerical ranges are disks about 0.
//! Entries at roundoff level are dropped first, and the Frobenius norm of
//! what was dropped is reported so callers can widen their enclosures.

use std::collections::VecDeque;

use num_complex::Complex64;

use crate::matcore::CMatrix;

/// Entries below this fraction of the Frobenius norm count as zero.
const DROP: f64 = 1e-14;

pub(crate) struct Graded {
    pub cores: Vec<CMatrix>,
    /// Frobenius norm of the dropped part of each matrix.
    pub dropped: Vec<f64>,
}

/// Common grading of all matrices, if one exists after dropping roundoff.
pub(crate) fn common_grading(ms: &[&CMatrix]) -> Option<Graded> {
    let n = ms[0].n();
    let mut cores = Vec::with_capacity(ms.len());
    let mut dropped = Vec::with_capacity(ms.len());
    let mut edges = vec![Vec::new(); n];
    for m in ms {
        let cut = DROP * m.frobenius_norm();
        let mut lost = 0.0;
        let core = CMatrix::from_fn(n, |i, j| {
            let z = m.get(i, j);
            if z.norm() <= cut {
                lost += z.norm_sqr();
                Complex64::new(0.0, 0.0)
            } else {
                if i == j {
                    return z;
                }
                edges[i].push((j, -1i64));
                edges[j].push((i, 1i64));
                z
            }
        });
        if (0..n).any(|i| core.get(i, i) != Complex64::new(0.0, 0.0)) {
            return None;
        }
        cores.push(core);
        dropped.push(lost.sqrt());
    }

    let mut level: Vec<Option<i64>> = vec![None; n];
    for root in 0..n {
        if level[root].is_some() {
            continue;
        }
        level[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let ki = level[i].expect("queued nodes are levelled");
            for &(j, step) in &edges[i] {
                match level[j] {
                    None => {
                        level[j] = Some(ki + step);
                        queue.push_back(j);
                    }
                    Some(kj) if kj != ki + step => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(Graded { cores, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::c64;

    fn shift3() -> CMatrix {
        CMatrix::from_fn(3, |i, j| if j == i + 1 { c64(1.0 + i as f64, 0.5) } else { c64(0.0, 0.0) })
    }

    #[test]
    fn shifts_and_their_squares_are_graded() {
        let s = shift3();
        assert!(common_grading(&[&s]).is_some());
        let sq = &s * &s;
        assert!(common_grading(&[&sq]).is_some());
        assert!(common_grading(&[&s, &s.scale(c64(0.0, 2.0))]).is_some());
    }

    #[test]
    fn generic_matrices_are_not() {
        assert!(common_grading(&[&CMatrix::identity(2)]).is_none());
        let s = shift3();
        let t = &s + &s.adjoint();
        assert!(common_grading(&[&t]).is_none());
        // cycle 0 -> 1 -> 2 -> 0 cannot be levelled
        let c = CMatrix::from_fn(3, |i, j| if j == (i + 1) % 3 { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        assert!(common_grading(&[&c]).is_none());
    }

    #[test]
    fn roundoff_is_dropped_and_reported() {
        let mut s = shift3();
        s = &s + &CMatrix::from_fn(3, |i, j| if i == j { c64(1e-17, 0.0) } else { c64(0.0, 0.0) });
        let g = common_grading(&[&s]).unwrap();
        assert!(g.dropped[0] > 0.0 && g.dropped[0] < 1e-16);
    }

    #[test]
    fn zero_matrix_is_graded() {
        assert!(common_grading(&[&CMatrix::zeros(2)]).is_some());
    }
}
