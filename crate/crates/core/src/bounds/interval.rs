//! A point estimate carried together with an enclosing interval.
//!
//! Bound formulas are written once over [`Val`]; the `mid` field follows the
//! arithmetic on enclosure midpoints while `[lo, hi]` follows interval
//! arithmetic, so the result knows both its value and how far the inputs'
//! uncertainty could move it.

use std::ops::{Add, Mul, Sub};

use crate::radii::Enclosure;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Val {
    pub mid: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Val {
    pub fn exact(x: f64) -> Self {
        Self { mid: x, lo: x, hi: x }
    }

    pub fn enclosure(e: &Enclosure) -> Self {
        Self { mid: e.midpoint(), lo: e.lower, hi: e.upper }
    }

    pub fn uncertainty(self) -> f64 {
        (self.hi - self.mid).max(self.mid - self.lo).max(0.0)
    }

    pub fn sq(self) -> Self {
        let (a, b) = (self.lo * self.lo, self.hi * self.hi);
        let lo = if self.lo <= 0.0 && self.hi >= 0.0 { 0.0 } else { a.min(b) };
        Self { mid: self.mid * self.mid, lo, hi: a.max(b) }
    }

    /// Square root, clamping roundoff-negative arguments to zero.
    pub fn sqrt(self) -> Self {
        Self { mid: self.mid.max(0.0).sqrt(), lo: self.lo.max(0.0).sqrt(), hi: self.hi.max(0.0).sqrt() }
    }

    /// `x^p` for `x >= 0`, `p > 0`.
    pub fn powf(self, p: f64) -> Self {
        let f = |x: f64| x.max(0.0).powf(p);
        Self { mid: f(self.mid), lo: f(self.lo), hi: f(self.hi) }
    }

    pub fn abs(self) -> Self {
        let lo = if self.lo <= 0.0 && self.hi >= 0.0 { 0.0 } else { self.lo.abs().min(self.hi.abs()) };
        Self { mid: self.mid.abs(), lo, hi: self.lo.abs().max(self.hi.abs()) }
    }

    pub fn max(self, o: Self) -> Self {
        Self { mid: self.mid.max(o.mid), lo: self.lo.max(o.lo), hi: self.hi.max(o.hi) }
    }

    pub fn min(self, o: Self) -> Self {
        Self { mid: self.mid.min(o.mid), lo: self.lo.min(o.lo), hi: self.hi.min(o.hi) }
    }
}

impl Add for Val {
    type Output = Val;
    fn add(self, o: Val) -> Val {
        Val { mid: self.mid + o.mid, lo: self.lo + o.lo, hi: self.hi + o.hi }
    }
}

impl Sub for Val {
    type Output = Val;
    fn sub(self, o: Val) -> Val {
        Val { mid: self.mid - o.mid, lo: self.lo - o.hi, hi: self.hi - o.lo }
    }
}

impl Mul<f64> for Val {
    type Output = Val;
    fn mul(self, c: f64) -> Val {
        let (a, b) = (self.lo * c, self.hi * c);
        Val { mid: self.mid * c, lo: a.min(b), hi: a.max(b) }
    }
}

impl Mul for Val {
    type Output = Val;
    fn mul(self, o: Val) -> Val {
        let p = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        Val {
            mid: self.mid * o.mid,
            lo: p.iter().copied().fold(f64::INFINITY, f64::min),
            hi: p.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

impl From<f64> for Val {
    fn from(x: f64) -> Self {
        Val::exact(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Val {
        Val { mid: 0.5 * (lo + hi), lo, hi }
    }

    #[test]
    fn arithmetic_encloses() {
        let a = iv(1.0, 2.0);
        let b = iv(-1.0, 0.5);
        let s = a - b;
        assert_eq!((s.lo, s.hi), (0.5, 3.0));
        let p = a * b;
        assert_eq!((p.lo, p.hi), (-2.0, 1.0));
        assert_eq!(b.abs().lo, 0.0);
        assert_eq!(b.sq().lo, 0.0);
        assert_eq!(b.sq().hi, 1.0);
        assert!((a.sqrt().hi - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn exact_values_have_no_uncertainty() {
        let v = (Val::exact(3.0).sq() - Val::exact(1.0)).sqrt() * 0.5;
        assert_eq!(v.uncertainty(), 0.0);
        assert!((v.mid - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(iv(1.0, 3.0).uncertainty(), 1.0);
    }
}
