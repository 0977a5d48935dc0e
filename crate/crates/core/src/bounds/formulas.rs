use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::interval::Val;
use super::{BoundId, Evaluator, Params};
use crate::error::{Error, Result};
use crate::matcore::{psd_power, segment_power_integral, spectral_norm, CMatrix};
use crate::transforms::{aluthge_from_polar, cartesian, polar};

/// Number of angles tried by the `θ`-family bounds.
pub(crate) const THETA_GRID: usize = 64;

/// Relative tolerance for the segment integrals.
const QUADRATURE_TOLERANCE: f64 = 1e-12;

/// Relative normality threshold for the normal-pair bound.
const NORMALITY_TOLERANCE: f64 = 1e-10;

#[derive(Default)]
pub(super) struct Out {
    pub breakdown: BTreeMap<String, f64>,
}

impl Out {
    fn put(&mut self, name: &str, v: impl Into<Val>) {
        self.breakdown.insert(name.to_string(), v.into().mid);
    }
}

type Sides = (Val, Option<Val>);

fn norm(m: &CMatrix) -> Val {
    Val::exact(spectral_norm(m))
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Norms of the Cartesian parts shared by the single-matrix bounds.
struct Parts {
    t: Val,
    re: Val,
    im: Val,
    /// `||T*T + TT*||`
    n: Val,
    /// `||Re T + Im T||`, `||Re T - Im T||`
    sum: Val,
    diff: Val,
}

impl Parts {
    fn new(t: &CMatrix) -> Self {
        let (r, i) = cartesian(t);
        let ts = t.adjoint();
        Parts {
            t: norm(t),
            re: norm(&r),
            im: norm(&i),
            n: norm(&(&ts * t + t * &ts)),
            sum: norm(&(&r + &i)),
            diff: norm(&(&r - &i)),
        }
    }
}

/// `||∫₀¹ (tA + (1-t)B)^r dt||` with the quadrature tolerance folded in.
fn segment_norm(a: &CMatrix, b: &CMatrix, r: f64) -> Result<Val> {
    let scale = spectral_norm(a).max(spectral_norm(b)).max(1.0).powf(r);
    let tol = QUADRATURE_TOLERANCE * scale;
    let v = spectral_norm(&segment_power_integral(a, b, r, tol)?);
    Ok(Val { mid: v, lo: (v - tol).max(0.0), hi: v + tol })
}

/// `||(A^r + B^r)/2||` for PSD `A`, `B`.
fn endpoint_norm(a: &CMatrix, b: &CMatrix, r: f64) -> Result<Val> {
    Ok(norm(&(&psd_power(a, r)? + &psd_power(b, r)?).scale_real(0.5)))
}

pub(super) fn single(ev: &Evaluator, id: BoundId, t: &CMatrix, params: &Params, out: &mut Out) -> Result<Sides> {
    use BoundId::*;
    let p = Parts::new(t);
    let quarter_n = p.n * 0.25;
    Ok(match id {
        WLowerCor25 => {
            let (r2, i2) = (p.re.sq(), p.im.sq());
            out.put("alpha", (r2 - quarter_n).abs());
            out.put("beta", (i2 - quarter_n).abs());
            out.put("gamma", r2.max(quarter_n));
            out.put("delta", i2.max(quarter_n));
            (((p.n * 0.125) + (r2 + i2) * 0.25 + (r2 - i2).abs() * 0.5).sqrt(), None)
        }
        WLowerCor27 => {
            let (s2, d2) = (p.sum.sq(), p.diff.sq());
            out.put("gamma", (s2 * 0.5 - quarter_n).abs());
            out.put("delta", (d2 * 0.5 - quarter_n).abs());
            out.put("xi", (s2 * 0.5).max(quarter_n));
            out.put("eta", (d2 * 0.5).max(quarter_n));
            ((p.n * 0.125 + (s2 + d2) * 0.125 + (s2 - d2).abs() * 0.25).sqrt(), None)
        }
        WTwosided29i => {
            let (r2, i2) = (p.re.sq(), p.im.sq());
            let alpha = (r2 - i2).abs() * 0.5;
            let beta = (r2 + i2) * 0.5;
            out.put("alpha", alpha);
            out.put("beta", beta);
            ((quarter_n + alpha).sqrt(), Some((quarter_n + beta).sqrt()))
        }
        WTwosided29ii => {
            let (s2, d2) = (p.sum.sq(), p.diff.sq());
            let gamma = (s2 - d2).abs() * 0.25;
            let delta = (s2 + d2) * 0.25;
            out.put("gamma", gamma);
            out.put("delta", delta);
            ((quarter_n + gamma).sqrt(), Some((quarter_n + delta).sqrt()))
        }
        WUpperCor313 => {
            let r = params.r;
            let ts = t.adjoint();
            let (a, b) = (&ts * t, t * &ts);
            let integral = segment_norm(&a, &b, r)?;
            let endpoint = endpoint_norm(&a, &b, r)?;
            out.put("integral_norm", integral);
            out.put("w_squared_bound", integral.powf(1.0 / r));
            out.put("endpoint_w_squared_bound", endpoint.powf(1.0 / r));
            (integral.powf(0.5 / r), None)
        }
        WLowerTh214 => {
            let half = p.t * 0.5;
            out.put("r1", (p.re - half).abs());
            out.put("r2", (p.im - half).abs());
            out.put("q1", p.re.max(half));
            out.put("q2", p.im.max(half));
            (p.t * 0.25 + (p.re + p.im) * 0.25 + (p.re - p.im).abs() * 0.5, None)
        }
        WLowerLaa2129 => ((quarter_n + (p.re.sq() - p.im.sq()).abs() * 0.5).sqrt(), None),
        WLowerPsk123 => ((quarter_n + (p.sum.sq() - p.diff.sq()).abs() * 0.25).sqrt(), None),
        WLowerHks => {
            let half = p.t * 0.5;
            (half + (p.re - half).abs() * 0.25 + (p.im - half).abs() * 0.25, None)
        }
        WLowerLaa2121 => (p.t * 0.5 + (p.re - p.im).abs() * 0.5, None),
        WSandwichEqv => (p.t * 0.5, Some(p.t)),
        WUpperAluthgeT => {
            let s = params.t;
            let parts = polar(t)?;
            let tilde = aluthge_from_polar(&parts, s)?;
            let pt = &parts.abs_power(2.0 * (1.0 - s)) + &parts.abs_power(2.0 * s);
            let pn = norm(&pt);
            let w_tilde = ev.wv(&tilde)?;
            let w_mixed = ev.wv(&(&tilde * &pt + &pt * &tilde))?;
            out.put("P_t", pn);
            out.put("w_aluthge", w_tilde);
            out.put("w_mixed", w_mixed);
            out.put("relaxation", pn * 0.25 + w_tilde * 0.5);
            ((pn.sq() * (1.0 / 16.0) + w_tilde.sq() * 0.25 + w_mixed * 0.125).sqrt(), None)
        }
        WUpperAluthgeHalf => {
            let parts = polar(t)?;
            let tilde = aluthge_from_polar(&parts, 0.5)?;
            let abs = parts.abs_power(1.0);
            let w_tilde = ev.wv(&tilde)?;
            let w_mixed = ev.wv(&(&tilde * &abs + &abs * &tilde))?;
            out.put("w_aluthge", w_tilde);
            out.put("w_mixed", w_mixed);
            out.put("relaxation", p.t * 0.5 + w_tilde * 0.5);
            ((p.t.sq() * 0.25 + w_tilde.sq() * 0.25 + w_mixed * 0.25).sqrt(), None)
        }
        WUpperQt => {
            let s = params.t;
            let parts = polar(t)?;
            let q = &parts.abs_adjoint_power(2.0 * (1.0 - s)) + &parts.abs_power(2.0 * s);
            let qn = norm(&q);
            let w_mixed = ev.wv(&(t * &q + &q * t))?;
            let w_t = ev.wv(t)?;
            out.put("Q_t", qn);
            out.put("w_mixed", w_mixed);
            out.put("w_T", w_t);
            // the chain this bound is solved from, evaluated at w(T)
            out.put("predicate_rhs", (qn.sq() * (1.0 / 16.0) + w_t.sq() * 0.25 + w_mixed * 0.125).sqrt());
            out.put("relaxation", qn * 0.25 + w_t * 0.5);
            out.put("norm_bound", qn * 0.5);
            ((qn.sq() * (1.0 / 12.0) + w_mixed * (1.0 / 6.0)).sqrt(), None)
        }
        _ => unreachable!("{id} is not a single-matrix bound"),
    })
}

fn is_normal(m: &CMatrix) -> bool {
    let n = spectral_norm(m);
    let ms = m.adjoint();
    spectral_norm(&(m * &ms - &ms * m)) <= NORMALITY_TOLERANCE * n * n
}

/// Largest value of `f(θ)` over the grid, and the angle attaining it.
fn theta_max(mut f: impl FnMut(f64) -> Result<Val>) -> Result<(Val, f64)> {
    let mut best: Option<(Val, f64)> = None;
    for k in 0..THETA_GRID {
        let theta = 2.0 * PI * k as f64 / THETA_GRID as f64;
        let v = f(theta)?;
        best = Some(match best {
            None => (v, theta),
            Some((b, bt)) => (b.max(v), if v.mid > b.mid { theta } else { bt }),
        });
    }
    Ok(best.expect("grid is nonempty"))
}

pub(super) fn pair(
    ev: &Evaluator,
    id: BoundId,
    b: &CMatrix,
    c: &CMatrix,
    params: &Params,
    out: &mut Out,
) -> Result<Sides> {
    use BoundId::*;
    let (bs, cs) = (b.adjoint(), c.adjoint());
    Ok(match id {
        WeLower21i => {
            let (wb, wc) = (ev.wv(b)?, ev.wv(c)?);
            out.put("w_B", wb);
            out.put("w_C", wc);
            (wb.max(wc), None)
        }
        WeLower21ii => {
            let (v, theta) = theta_max(|th| ev.wv(&(b + &c.scale(cis(th)))))?;
            out.put("theta_star", theta);
            out.put("w_combination", v);
            (v * (1.0 / SQRT_2), None)
        }
        WeLower21iii => {
            let (wb, wc) = (ev.wv(b)?, ev.wv(c)?);
            let gap = (wb.sq() - wc.sq()).abs() * 0.5;
            let (b2, c2) = (b * b, c * c);
            let (v, theta) = theta_max(|th| ev.wv(&(&b2 + &c2.scale(cis(th)))))?;
            out.put("theta_star", theta);
            out.put("w_combination", v);
            out.put("w_B", wb);
            out.put("w_C", wc);
            ((v * 0.5 + gap).sqrt(), None)
        }
        WeLower21iv => {
            let v = ev.wv(&(b * c + c * b))?;
            out.put("w_anticommutator", v);
            ((v * 0.5).sqrt(), None)
        }
        WeLowerTh22 => {
            let (wb2, wc2) = (ev.wv(b)?.sq(), ev.wv(c)?.sq());
            let half = ev.wv(&(b * b + c * c))? * 0.5;
            out.put("t1", wb2.max(half));
            out.put("t2", wc2.max(half));
            out.put("m1", (wb2 - half).abs());
            out.put("m2", (wc2 - half).abs());
            ((half * 0.5 + (wb2 + wc2) * 0.25 + (wb2 - wc2).abs() * 0.5).sqrt(), None)
        }
        WeLowerDragomir => ((ev.wv(&(b * b + c * c))? * 0.5).sqrt(), None),
        WeLowerNormal => {
            for (name, m) in [("B", b), ("C", c)] {
                if !is_normal(m) {
                    return Err(Error::NotApplicable {
                        id: id.name().to_string(),
                        reason: format!("{name} is not normal"),
                    });
                }
            }
            let (nb2, nc2) = (norm(b).sq(), norm(c).sq());
            let half = norm(&(b * b + c * c)) * 0.5;
            out.put("s1", nb2.max(half));
            out.put("s2", nc2.max(half));
            out.put("p1", (nb2 - half).abs());
            out.put("p2", (nc2 - half).abs());
            ((half * 0.5 + (nb2 + nc2) * 0.25 + (nb2 - nc2).abs() * 0.5).sqrt(), None)
        }
        WeUpperTh28 => {
            let t = params.t;
            let u = 1.0 - t;
            let gram = norm(&(&(&bs * b).scale_real(t * t) + &(&cs * c).scale_real(u * u))).sqrt();
            let (bu, ct) = (b.scale_real(u), c.scale_real(t));
            let wp = ev.wv(&(&bu + &ct))?;
            let wm = ev.wv(&(&bu - &ct))?;
            out.put("gram_term", gram);
            out.put("w_plus", wp);
            out.put("w_minus", wm);
            (gram + (wp.sq() + wm.sq()).sqrt() * (1.0 / SQRT_2), None)
        }
        WeUpperEq5 => {
            let gram = norm(&(&bs * b + &cs * c)).sqrt();
            let wp = ev.wv(&(b + c))?;
            let wm = ev.wv(&(b - c))?;
            out.put("gram_term", gram * 0.5);
            out.put("w_plus", wp);
            out.put("w_minus", wm);
            (gram * 0.5 + (wp.sq() + wm.sq()).sqrt() * (0.5 / SQRT_2), None)
        }
        WeUpperIntegralR => {
            let r = params.r;
            let s1 = &bs * b + &cs * c;
            let s2 = b * &bs + c * &cs;
            let integral = segment_norm(&s1, &s2, r)?;
            let endpoint = endpoint_norm(&s1, &s2, r)?;
            out.put("integral_norm", integral);
            out.put("endpoint_norm", endpoint);
            out.put("endpoint_bound", endpoint.powf(0.5 / r));
            (integral.powf(0.5 / r), None)
        }
        WeSandwichEqn1 => {
            let g = norm(&(&bs * b + &cs * c));
            ((g * 0.125).sqrt(), Some(g.sqrt()))
        }
        _ => unreachable!("{id} is not a pair bound"),
    })
}

pub(super) fn offdiag(ev: &Evaluator, id: BoundId, x: &CMatrix, y: &CMatrix, out: &mut Out) -> Result<Sides> {
    use BoundId::*;
    let (xs, ys) = (x.adjoint(), y.adjoint());
    let m = norm(&(&xs * x + y * &ys)).max(norm(&(x * &xs + &ys * y)));
    // a, b as half norms; the squared forms use a², b²
    let a = norm(&(x + &ys)) * 0.5;
    let b = norm(&(x - &ys)) * 0.5;
    let (one_m_i, one_p_i) = (Complex64::new(1.0, -1.0), Complex64::new(1.0, 1.0));
    let c_sq = || norm(&(&x.scale(one_m_i) + &ys.scale(one_p_i))).sq() * 0.25;
    let d_sq = || norm(&(&x.scale(one_p_i) + &ys.scale(one_m_i))).sq() * 0.25;
    Ok(match id {
        OffdiagLower31i => {
            let big = norm(x).max(norm(y));
            out.put("a", a);
            out.put("b", b);
            (big * 0.25 + (a + b) * 0.25 + (a - b).abs() * 0.5, None)
        }
        OffdiagLower31ii => {
            let (a2, b2) = (a.sq(), b.sq());
            out.put("M", m);
            out.put("a_sq", a2);
            out.put("b_sq", b2);
            ((m * 0.125 + (a2 + b2) * 0.25 + (a2 - b2).abs() * 0.5).sqrt(), None)
        }
        OffdiagLower31iii => {
            let (c, d) = (c_sq(), d_sq());
            // with the sign pattern (1+i)X - (1-i)Y* the second norm equals
            // the first, giving a weaker but still valid bound
            let printed = (m * 0.125 + c * 0.25).sqrt();
            out.put("M", m);
            out.put("c", c);
            out.put("d", d);
            out.put("same_sign_variant", printed);
            ((m * 0.125 + (c + d) * 0.125 + (c - d).abs() * 0.25).sqrt(), None)
        }
        OffdiagUpper31iv => {
            out.put("M", m);
            ((m * 0.25 + (a.sq() + b.sq()) * 0.5).sqrt(), None)
        }
        OffdiagUpper31v => {
            let (c, d) = (c_sq(), d_sq());
            out.put("M", m);
            out.put("c", c);
            out.put("d", d);
            ((m * 0.25 + (c + d) * 0.25).sqrt(), None)
        }
        OffdiagUpperPsk => {
            let s = &xs * x + y * &ys;
            let pm = x * &xs + &ys * y;
            let (yx, xy) = (y * x, x * y);
            let (sn, pn) = (norm(&s), norm(&pm));
            let beta = sn.sq() * (1.0 / 16.0) + ev.wv(&yx)?.sq() * 0.25 + ev.wv(&(&yx * &s + &s * &yx))? * 0.125;
            let gamma = pn.sq() * (1.0 / 16.0) + ev.wv(&xy)?.sq() * 0.25 + ev.wv(&(&xy * &pm + &pm * &xy))? * 0.125;
            out.put("S", sn);
            out.put("P", pn);
            out.put("beta", beta);
            out.put("gamma", gamma);
            (beta.min(gamma).powf(0.25), None)
        }
        OffdiagLowerPko27 => (norm(x).max(norm(y)) * 0.5 + (a - b).abs() * 0.5, None),
        OffdiagLowerPko212 => ((m * 0.25 + (a.sq() - b.sq()).abs() * 0.5).sqrt(), None),
        _ => unreachable!("{id} is not an off-diagonal bound"),
    })
}
