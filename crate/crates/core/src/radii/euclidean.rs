//! `w_e(B, C)` as the maximum over the unit sphere of `R^4` of
//! `h(u) = λ_max(u₁ Re B + u₂ Im B + u₃ Re C + u₄ Im C)`.
//!
//! For unit `u`, `h(u) = max_x ⟨u, v(x)⟩` with
//! `v(x) = (Re⟨Bx,x⟩, Im⟨Bx,x⟩, Re⟨Cx,x⟩, Im⟨Cx,x⟩)`, so its maximum over
//! directions is `max_x |v(x)| = w_e(B, C)`. Equivalently it is the maximum
//! of `w(λB + μC)` over unit `(λ, μ) ∈ C²`.
//!
//! Directions are parametrised by the facets of the cube `[-1, 1]^D`, each
//! facet split dyadically into boxes. Every box is a union of Kuhn
//! simplices; on the cone over one simplex, `h` lies below the linear
//! function `⟨a, ·⟩` that interpolates it at the corners, hence
//! `h(u) <= |Π_cone(a)|` there.
//!
//! When `B` and `C` share a diagonal circle symmetry, `h` is constant on the
//! orbits `(λ, μ) ↦ e^{iθ}(λ, μ)`; fixing `λ` real drops the `Im B`
//! generator and the search runs on the 2-sphere instead.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use nalgebra::{DMatrix, DVector, SVector};
use num_complex::Complex64;

use super::grading::common_grading;
use super::{check_tolerance, Enclosure, Witness};
use crate::error::{Error, Result};
use crate::matcore::{top_eigenpair, CMatrix, UNIT_ROUNDOFF};
use crate::transforms::cartesian;

const MAX_EVALUATIONS: usize = 400_000;
/// Facet coordinates are integers scaled by `2^DEPTH`.
const DEPTH: u32 = 40;
const ONE: i64 = 1 << DEPTH;

#[derive(Clone)]
struct Cell<const D: usize> {
    axis: usize,
    sign: i64,
    /// Lower corner; the entry at `axis` is unused.
    lo: [i64; D],
    size: i64,
    bound: f64,
}

impl<const D: usize> PartialEq for Cell<D> {
    fn eq(&self, other: &Self) -> bool {
        self.bound.total_cmp(&other.bound) == Ordering::Equal
    }
}
impl<const D: usize> Eq for Cell<D> {}
impl<const D: usize> PartialOrd for Cell<D> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const D: usize> Ord for Cell<D> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound)
    }
}

impl<const D: usize> Cell<D> {
    /// Free axes in increasing order.
    fn free(&self) -> impl Iterator<Item = usize> + '_ {
        (0..D).filter(move |&k| k != self.axis)
    }

    /// Corner selected by the bits of `mask`, one bit per free axis.
    fn corner(&self, mask: usize) -> [i64; D] {
        let mut p = self.lo;
        p[self.axis] = self.sign * ONE;
        for (bit, k) in self.free().enumerate() {
            if mask >> bit & 1 == 1 {
                p[k] += self.size;
            }
        }
        p
    }

    /// Smallest Euclidean norm over the box, in facet units.
    fn min_norm(&self) -> f64 {
        let mut sq = 1.0;
        for k in self.free() {
            let (a, b) = (self.lo[k], self.lo[k] + self.size);
            if a > 0 {
                sq += to_unit(a).powi(2);
            } else if b < 0 {
                sq += to_unit(b).powi(2);
            }
        }
        sq.sqrt()
    }

    fn children(&self) -> Vec<Cell<D>> {
        let half = self.size / 2;
        (0..1usize << (D - 1))
            .map(|mask| {
                let mut lo = self.lo;
                for (bit, k) in self.free().enumerate() {
                    if mask >> bit & 1 == 1 {
                        lo[k] += half;
                    }
                }
                Cell { axis: self.axis, sign: self.sign, lo, size: half, bound: f64::INFINITY }
            })
            .collect()
    }
}

fn to_unit(c: i64) -> f64 {
    c as f64 / ONE as f64
}

fn point_vec<const D: usize>(p: &[i64; D]) -> SVector<f64, D> {
    SVector::from_fn(|k, _| to_unit(p[k]))
}

/// Corner-mask chains of the Kuhn simplices of a `(D-1)`-box.
fn kuhn_chains(dim: usize) -> Vec<Vec<usize>> {
    fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
        if items.len() <= 1 {
            return vec![items.to_vec()];
        }
        let mut out = Vec::new();
        for (i, &x) in items.iter().enumerate() {
            let mut rest = items.to_vec();
            rest.remove(i);
            for mut p in permutations(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }
    let bits: Vec<usize> = (0..dim).collect();
    permutations(&bits)
        .into_iter()
        .map(|order| {
            let mut mask = 0;
            let mut chain = vec![0];
            for bit in order {
                mask |= 1 << bit;
                chain.push(mask);
            }
            chain
        })
        .collect()
}

/// `max_{u ∈ cone(P) ∩ S^{D-1}} ⟨a, u⟩` when positive, else 0.
fn cone_max<const D: usize>(a: &SVector<f64, D>, gens: &[SVector<f64, D>]) -> f64 {
    let mut best = 0.0f64;
    for mask in 1u32..(1 << gens.len()) {
        let idx: Vec<usize> = (0..gens.len()).filter(|k| mask >> k & 1 == 1).collect();
        let k = idx.len();
        let gram = DMatrix::from_fn(k, k, |i, j| gens[idx[i]].dot(&gens[idx[j]]));
        let rhs = DVector::from_fn(k, |i, _| gens[idx[i]].dot(a));
        let Some(coef) = gram.lu().solve(&rhs) else { continue };
        if coef.iter().all(|&c| c >= 0.0) {
            let sq = coef.dot(&rhs);
            if sq > 0.0 {
                best = best.max(sq.sqrt());
            }
        }
    }
    best
}

struct Search<'a, const D: usize> {
    b: &'a CMatrix,
    c: &'a CMatrix,
    gens: [DMatrix<Complex64>; D],
    /// Places the search coordinates into `(Re λ̄, Im λ̄, Re μ̄, Im μ̄)` order.
    embed: fn(&SVector<f64, D>) -> [f64; 4],
    chains: Vec<Vec<usize>>,
    cache: HashMap<[i64; D], f64>,
    evaluations: usize,
    best: f64,
    witness_value: f64,
    witness_angles: [f64; 2],
    witness_vector: Option<DVector<Complex64>>,
    tie_slack: f64,
}

impl<const D: usize> Search<'_, D> {
    fn h(&mut self, p: &[i64; D]) -> Result<f64> {
        if let Some(&v) = self.cache.get(p) {
            return Ok(v);
        }
        self.evaluations += 1;
        if self.evaluations > MAX_EVALUATIONS {
            return Err(Error::ConvergenceFailure("euclidean radius search"));
        }
        let u = point_vec(p);
        let mut h = &self.gens[0] * Complex64::new(u[0], 0.0);
        for k in 1..D {
            h += &self.gens[k] * Complex64::new(u[k], 0.0);
        }
        let (lam, x) = top_eigenpair(&h)?;
        let value = self.b.quadratic_form(&x).norm().hypot(self.c.quadratic_form(&x).norm());
        self.record(value, (self.embed)(&u), x);
        self.cache.insert(*p, lam);
        Ok(lam)
    }

    fn record(&mut self, value: f64, u: [f64; 4], x: DVector<Complex64>) {
        // λ = u₁ - i u₂ multiplies B, μ = u₃ - i u₄ multiplies C
        let alpha = u[0].hypot(u[1]);
        let beta = u[2].hypot(u[3]);
        let s = beta.atan2(alpha);
        let phi = if alpha > 0.0 && beta > 0.0 {
            ((-u[3]).atan2(u[2]) - (-u[1]).atan2(u[0])).rem_euclid(std::f64::consts::TAU)
        } else {
            0.0
        };
        let angles = [s, phi];
        self.best = self.best.max(value);
        let stale = self.witness_vector.is_none() || self.witness_value < self.best - self.tie_slack;
        let earlier =
            value >= self.best - self.tie_slack && angles.partial_cmp(&self.witness_angles) == Some(Ordering::Less);
        if stale || earlier {
            self.witness_value = value;
            self.witness_angles = angles;
            self.witness_vector = Some(x);
        }
    }

    fn bound(&mut self, cell: &Cell<D>) -> Result<f64> {
        let count = 1usize << (D - 1);
        let mut corners = Vec::with_capacity(count);
        let mut values = Vec::with_capacity(count);
        for mask in 0..count {
            let p = cell.corner(mask);
            values.push(self.h(&p)?);
            corners.push(point_vec(&p));
        }
        let crude = values.iter().copied().fold(0.0f64, f64::max) / cell.min_norm();

        let mut simplicial = 0.0f64;
        for chain in &self.chains {
            let m = DMatrix::<f64>::from_fn(D, D, |i, j| corners[chain[i]][j]);
            let rhs = DVector::<f64>::from_fn(D, |i, _| values[chain[i]]);
            match m.lu().solve(&rhs) {
                Some(a) if a.iter().all(|v| v.is_finite()) => {
                    let a = SVector::<f64, D>::from_fn(|k, _| a[k]);
                    let gens: Vec<_> = chain.iter().map(|&k| corners[k]).collect();
                    simplicial = simplicial.max(cone_max(&a, &gens));
                }
                _ => return Ok(crude),
            }
        }
        Ok(crude.min(simplicial))
    }

    fn run(mut self, tol: f64, slack: f64) -> Result<Enclosure> {
        let mut heap = BinaryHeap::new();
        for axis in 0..D {
            for sign in [1i64, -1] {
                let mut cell = Cell { axis, sign, lo: [-ONE; D], size: 2 * ONE, bound: 0.0 };
                cell.bound = self.bound(&cell)?;
                heap.push(cell);
            }
        }

        let upper = loop {
            let top = heap.peek().map_or(f64::NEG_INFINITY, |c| c.bound);
            let upper = top.max(self.best) + slack;
            if upper - self.best <= tol {
                break upper;
            }
            let cell = heap.pop().expect("non-empty while bound exceeds lower");
            if cell.size < 2 {
                return Err(Error::ConvergenceFailure("euclidean radius search (depth)"));
            }
            for mut child in cell.children() {
                child.bound = self.bound(&child)?;
                if child.bound > self.best {
                    heap.push(child);
                }
            }
        };

        let x = self.witness_vector.take().expect("at least one evaluation");
        Ok(Enclosure {
            lower: self.best,
            upper,
            tol_requested: tol,
            evaluations: self.evaluations,
            witness: Witness::from_vector(&x, self.witness_angles.to_vec()),
        })
    }
}

/// Certified enclosure of `w_e(B, C)` with `upper - lower <= tol`.
pub fn euclidean_radius(b: &CMatrix, c: &CMatrix, tol: f64) -> Result<Enclosure> {
    if b.n() != c.n() {
        return Err(Error::DimensionMismatch { left: b.n(), right: c.n() });
    }
    check_tolerance(tol)?;
    let scale = b.frobenius_norm().hypot(c.frobenius_norm());
    let slack = 64.0 * b.n() as f64 * UNIT_ROUNDOFF * scale;
    let tie_slack = 1e-12 * scale;

    if let Some(graded) = common_grading(&[b, c]) {
        let dropped = graded.dropped[0].hypot(graded.dropped[1]);
        if dropped < 0.25 * tol {
            let (rb, _) = cartesian(&graded.cores[0]);
            let (rc, ic) = cartesian(&graded.cores[1]);
            let search = Search::<3> {
                b,
                c,
                gens: [rb.into_dmatrix(), rc.into_dmatrix(), ic.into_dmatrix()],
                embed: |u| [u[0], 0.0, u[1], u[2]],
                chains: kuhn_chains(2),
                cache: HashMap::new(),
                evaluations: 0,
                best: 0.0,
                witness_value: 0.0,
                witness_angles: [f64::INFINITY; 2],
                witness_vector: None,
                tie_slack,
            };
            return search.run(tol, slack + dropped);
        }
    }

    let (rb, ib) = cartesian(b);
    let (rc, ic) = cartesian(c);
    let search = Search::<4> {
        b,
        c,
        gens: [rb.into_dmatrix(), ib.into_dmatrix(), rc.into_dmatrix(), ic.into_dmatrix()],
        embed: |u| [u[0], u[1], u[2], u[3]],
        chains: kuhn_chains(3),
        cache: HashMap::new(),
        evaluations: 0,
        best: 0.0,
        witness_value: 0.0,
        witness_angles: [f64::INFINITY; 2],
        witness_vector: None,
        tie_slack,
    };
    search.run(tol, slack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::c64;
    use crate::radii::we_oracle;

    #[test]
    fn equal_identities_give_sqrt_two() {
        let i = CMatrix::identity(1);
        let e = euclidean_radius(&i, &i, 1e-10).unwrap();
        assert!(e.contains(2f64.sqrt(), 1e-14), "{e:?}");
    }

    #[test]
    fn degenerate_pair_reduces_to_w() {
        let e = euclidean_radius(&CMatrix::identity(2), &CMatrix::zeros(2), 1e-10).unwrap();
        assert!(e.contains(1.0, 1e-14), "{e:?}");
    }

    #[test]
    fn zero_pair() {
        let z = CMatrix::zeros(2);
        let e = euclidean_radius(&z, &z, 1e-10).unwrap();
        assert_eq!(e.lower, 0.0);
        assert!(e.upper <= 1e-10);
    }

    #[test]
    fn errors() {
        let i = CMatrix::identity(2);
        assert!(matches!(euclidean_radius(&i, &CMatrix::identity(3), 1e-6), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(euclidean_radius(&i, &i, -1.0), Err(Error::InvalidTolerance(_))));
    }

    #[test]
    fn commuting_diagonals() {
        // the joint range of two diagonal matrices is the convex hull of
        // (b_k, c_k), so the farthest point is a vertex here
        let b = CMatrix::diag(&[c64(1.0, 0.0), c64(0.0, 2.0)]);
        let c = CMatrix::diag(&[c64(0.0, 3.0), c64(1.0, 0.0)]);
        let e = euclidean_radius(&b, &c, 1e-9).unwrap();
        assert!(e.contains(10f64.sqrt(), 1e-12), "{e:?}");
    }

    #[test]
    fn kuhn_chain_counts() {
        assert_eq!(kuhn_chains(2).len(), 2);
        assert_eq!(kuhn_chains(3).len(), 6);
        assert!(kuhn_chains(3).iter().all(|c| c.len() == 4 && c[3] == 7));
    }

    #[test]
    fn graded_pair_matches_oracle() {
        let b = CMatrix::from_fn(3, |i, j| if j == i + 1 { c64(1.0, 0.3 * i as f64) } else { c64(0.0, 0.0) });
        let c = CMatrix::from_fn(3, |i, j| if j == i + 1 { c64(-0.5 * i as f64, 0.7) } else { c64(0.0, 0.0) });
        let e = euclidean_radius(&b, &c, 1e-8).unwrap();
        let o = we_oracle(&b, &c, 5_000, 2);
        assert!(o <= e.upper + 1e-12 && o >= e.lower - 1e-7, "{e:?} {o}");
        let x = e.witness.to_vector();
        assert!((super::super::we_objective(&b, &c, &x) - e.lower).abs() < 1e-12);
    }
}
