//! `w(T) = max_θ λ_max(Re(e^{iθ} T))` with a tangent-polygon certificate.
//!
//! `g(θ) = λ_max(Re(e^{iθ} T))` is the support function of the numerical
//! range `W(T)` in direction `e^{-iθ}`, so `W(T)` lies in every half-plane
//! `Re(e^{iθ} z) <= g(θ)`. Between two sampled angles the range is confined
//! to the wedge cut out by the two supporting lines, and `g` on the arc is
//! bounded by the wedge vertex. A cell whose vertex bound does not exceed
//! the best attained `|⟨Tx, x⟩|` can be discarded.
//!
//! The wedge bound is only first-order accurate, which is hopeless when the
//! boundary of `W(T)` is round near its farthest point (a disk, for any
//! weighted shift). Each sample therefore also carries a bound from
//! eigenvalue perturbation. Write `H(a + δ) = cos δ H(a) + sin δ H'(a)` in
//! the eigenbasis `v, u_j` of `H(a)`, with `p = ⟨H'v, v⟩` and
//! `b_j = ⟨H'v, u_j⟩`. The Schur complement of the `v` entry shows that
//! `g(a + δ)` is at most the largest root `Λ` of
//!
//! `Λ = cos δ g + sin δ p + sin²δ Σ_j |b_j|² / (Λ - cos δ λ_j - sin δ ‖T‖)`,
//!
//! which matches `g` to second order. Over a whole arc `0 <= δ <= d` the sum
//! is frozen at its largest value `c`, and `g cos δ + p sin δ + c sin²δ` is
//! bounded by its quadratic Taylor part plus a cubic remainder; the
//! smallest `Λ` passing that test is found by bisection.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{PI, TAU};
use std::rc::Rc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::grading::common_grading;
use super::{check_tolerance, Enclosure, Witness};
use crate::error::{Error, Result};
use crate::matcore::{eigh_unsorted, spectral_norm, top_eigenpair, CMatrix, UNIT_ROUNDOFF};
use crate::transforms::cartesian;

const INITIAL_ANGLES: usize = 16;
const MAX_EVALUATIONS: usize = 100_000;
const MIN_GAP: f64 = 1e-13;
const BISECTIONS: usize = 60;

struct Sample {
    theta: f64,
    g: f64,
    /// `g'(θ)`.
    slope: f64,
    /// `(λ_j, |b_j|²)` for the rest of the spectrum.
    others: Vec<(f64, f64)>,
}

impl Sample {
    /// Upper bound for `g(θ + σδ)` over `0 <= δ <= d`, `σ = ±1`, `d <= π/2`.
    fn reach(&self, sigma: f64, d: f64, norm: f64) -> f64 {
        let p = sigma * self.slope;
        let (sd, cd) = d.sin_cos();
        // crude: every Λ above g cos δ + p sin δ + sin δ · 2‖T‖ works
        let angle = p.atan2(self.g);
        let first = if (0.0..=d).contains(&angle) { self.g.hypot(p) } else { self.g.max(self.g * cd + p * sd) };
        let mut hi = first + 2.0 * sd * norm;

        let pole = self.others.iter().map(|&(lam, _)| lam.max(cd * lam)).fold(f64::NEG_INFINITY, f64::max) + sd * norm;
        let arc_peak = |c: f64| {
            let a2 = c - 0.5 * self.g;
            let quad = |x: f64| self.g + p * x + a2 * x * x;
            let mut peak = quad(0.0).max(quad(d));
            if a2 < 0.0 {
                let x = -p / (2.0 * a2);
                if (0.0..=d).contains(&x) {
                    peak = peak.max(quad(x));
                }
            }
            peak + (self.g.abs() + p.abs() + 4.0 * c) * d * d * d / 6.0
        };
        let coupling =
            |lam: f64| -> f64 { self.others.iter().map(|&(l, b2)| b2 / (lam - l.max(cd * l) - sd * norm)).sum() };
        let passes = |lam: f64| lam > pole && arc_peak(coupling(lam)) <= lam;

        if !passes(hi) {
            return hi;
        }
        let mut lo = if pole.is_finite() { pole } else { arc_peak(0.0).min(hi) };
        if passes(lo) {
            return lo;
        }
        for _ in 0..BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if passes(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

struct Cell {
    a: Rc<Sample>,
    b: Rc<Sample>,
    bound: f64,
    split: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.bound.total_cmp(&other.bound) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound)
    }
}

struct Sweep<'a> {
    t: &'a CMatrix,
    re: DMatrix<Complex64>,
    im: DMatrix<Complex64>,
    lipschitz: f64,
    norm: f64,
    evaluations: usize,
    best: f64,
    witness_value: f64,
    best_theta: f64,
    best_vector: Option<DVector<Complex64>>,
    tie_slack: f64,
}

impl Sweep<'_> {
    fn evaluate(&mut self, theta: f64) -> Result<Sample> {
        self.evaluations += 1;
        if self.evaluations > MAX_EVALUATIONS {
            return Err(Error::ConvergenceFailure("numerical radius sweep"));
        }
        let (c, s) = (theta.cos(), theta.sin());
        let h = &self.re * Complex64::new(c, 0.0) - &self.im * Complex64::new(s, 0.0);
        let dh = &self.re * Complex64::new(-s, 0.0) - &self.im * Complex64::new(c, 0.0);
        let (values, vectors) = eigh_unsorted(&h)?;
        let top = values.imax();
        let g = values[top];
        let x = vectors.column(top).into_owned();
        // H' in the eigenbasis, column of the top vector
        let column = vectors.adjoint() * (&dh * &x);
        let slope = column[top].re;
        let others = (0..values.len()).filter(|&j| j != top).map(|j| (values[j], column[j].norm_sqr())).collect();
        let value = self.t.quadratic_form(&x).norm();
        let angle = theta.rem_euclid(TAU);
        self.best = self.best.max(value);
        let witness_stale = self.best_vector.is_none() || self.witness_value < self.best - self.tie_slack;
        let earlier_tie = value >= self.best - self.tie_slack && angle < self.best_theta;
        if witness_stale || earlier_tie {
            self.witness_value = value;
            self.best_theta = angle;
            self.best_vector = Some(x);
        }
        Ok(Sample { theta, g, slope, others })
    }

    fn cell(&self, a: Rc<Sample>, b: Rc<Sample>) -> Cell {
        let (wedge, split) = vertex_bound(&a, &b, self.lipschitz);
        let half = 0.5 * (b.theta - a.theta);
        let local = a.reach(1.0, half, self.norm).max(b.reach(-1.0, half, self.norm));
        Cell { a, b, bound: wedge.min(local), split }
    }
}

/// Upper bound for `g` on `[a.theta, b.theta]` and the angle at which to
/// split the arc next.
fn vertex_bound(a: &Sample, b: &Sample, lipschitz: f64) -> (f64, f64) {
    let gap = b.theta - a.theta;
    let mid = 0.5 * (a.theta + b.theta);
    if gap < MIN_GAP {
        return (a.g.max(b.g) + lipschitz * gap, mid);
    }
    // Re(e^{iθ} v) = cos θ · v_x - sin θ · v_y
    let (ca, sa) = (a.theta.cos(), a.theta.sin());
    let (cb, sb) = (b.theta.cos(), b.theta.sin());
    let det = sa * cb - ca * sb;
    let vx = (-a.g * sb + b.g * sa) / det;
    let vy = (ca * b.g - cb * a.g) / det;
    let radius = vx.hypot(vy);
    // Re(e^{iθ} v) = |v| cos(θ + arg v), maximal at θ* = -arg v
    let peak = (-vy.atan2(vx) - a.theta).rem_euclid(TAU) + a.theta;
    if peak <= b.theta {
        let split = if peak > a.theta + 0.1 * gap && peak < b.theta - 0.1 * gap { peak } else { mid };
        (radius.max(a.g).max(b.g), split)
    } else {
        (a.g.max(b.g), mid)
    }
}

/// Certified enclosure of `w(T)` with `upper - lower <= tol`.
pub fn numerical_radius(t: &CMatrix, tol: f64) -> Result<Enclosure> {
    check_tolerance(tol)?;
    if let Some(e) = disk_shortcut(t, tol)? {
        return Ok(e);
    }
    let (re, im) = cartesian(t);
    let scale = t.frobenius_norm();
    let n = t.n() as f64;
    let mut sweep = Sweep {
        t,
        re: re.into_dmatrix(),
        im: im.into_dmatrix(),
        lipschitz: scale,
        norm: spectral_norm(t),
        evaluations: 0,
        best: 0.0,
        witness_value: 0.0,
        best_theta: 0.0,
        best_vector: None,
        tie_slack: 1e-12 * scale,
    };
    // eigenvalue and vertex roundoff
    let slack = 32.0 * n * UNIT_ROUNDOFF * scale;

    let mut samples = Vec::with_capacity(INITIAL_ANGLES + 1);
    for k in 0..INITIAL_ANGLES {
        samples.push(Rc::new(sweep.evaluate(TAU * k as f64 / INITIAL_ANGLES as f64)?));
    }
    let first = &samples[0];
    samples.push(Rc::new(Sample { theta: TAU, g: first.g, slope: first.slope, others: first.others.clone() }));

    let mut heap = BinaryHeap::new();
    let mut iter = samples.into_iter();
    let mut prev = iter.next().expect("initial grid");
    for s in iter {
        heap.push(sweep.cell(prev, s.clone()));
        prev = s;
    }
    debug_assert!(TAU / INITIAL_ANGLES as f64 <= PI);

    let upper = loop {
        let top = heap.peek().map_or(f64::NEG_INFINITY, |c| c.bound);
        let upper = top.max(sweep.best) + slack;
        if upper - sweep.best <= tol {
            break upper;
        }
        let cell = heap.pop().expect("non-empty while bound exceeds lower");
        let m = Rc::new(sweep.evaluate(cell.split)?);
        for child in [sweep.cell(cell.a, m.clone()), sweep.cell(m, cell.b)] {
            if child.bound > sweep.best {
                heap.push(child);
            }
        }
    };

    let x = sweep.best_vector.take().expect("at least one evaluation");
    Ok(Enclosure {
        lower: sweep.best,
        upper,
        tol_requested: tol,
        evaluations: sweep.evaluations,
        witness: Witness::from_vector(&x, vec![sweep.best_theta]),
    })
}

/// A graded `T` has `W(T)` a disk about 0, so `w(T) = λ_max(Re T)`.
fn disk_shortcut(t: &CMatrix, tol: f64) -> Result<Option<Enclosure>> {
    let Some(graded) = common_grading(&[t]) else { return Ok(None) };
    let (re, _) = cartesian(&graded.cores[0]);
    let (g, x) = top_eigenpair(re.as_dmatrix())?;
    let slack = 32.0 * t.n() as f64 * UNIT_ROUNDOFF * t.frobenius_norm();
    let lower = t.quadratic_form(&x).norm();
    let upper = g.max(lower) + graded.dropped[0] + slack;
    if upper - lower > tol {
        return Ok(None);
    }
    Ok(Some(Enclosure {
        lower,
        upper,
        tol_requested: tol,
        evaluations: 1,
        witness: Witness::from_vector(&x, vec![0.0]),
    }))
}
