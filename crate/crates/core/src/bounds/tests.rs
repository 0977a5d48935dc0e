use super::*;
use crate::matcore::{c64, spectral_norm};
use crate::radii::{w_oracle, we_oracle};

fn shift() -> CMatrix {
    CMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap()
}

fn one() -> CMatrix {
    CMatrix::identity(1)
}

fn value(id: BoundId, inputs: Inputs<'_>) -> f64 {
    evaluate(id, inputs, &Params::default()).unwrap().value
}

fn sample(n: usize, k: usize) -> CMatrix {
    // deterministic, dense, non-normal
    CMatrix::from_fn(n, |i, j| {
        let a = ((i * 7 + j * 3 + k * 5) % 11) as f64 - 5.0;
        let b = ((i * 2 + j * 5 + k * 3) % 7) as f64 - 3.0;
        c64(a / 3.0, b / 4.0)
    })
}

#[test]
fn shift_tight_cases() {
    let t = shift();
    for id in [BoundId::WLowerTh214, BoundId::WLowerCor25, BoundId::WUpperAluthgeHalf] {
        assert!((value(id, Inputs::Single(&t)) - 0.5).abs() < 1e-12, "{id}");
    }
    let r = evaluate(BoundId::WLowerTh214, Inputs::Single(&t), &Params::default()).unwrap();
    for key in ["q1", "q2"] {
        assert!((r.breakdown[key] - 0.5).abs() < 1e-15);
    }
    for key in ["r1", "r2"] {
        assert!(r.breakdown[key].abs() < 1e-15);
    }
}

#[test]
fn cor313_on_the_shift() {
    let params = Params { r: 2.0, ..Params::default() };
    let r = evaluate(BoundId::WUpperCor313, Inputs::Single(&shift()), &params).unwrap();
    let third = 1.0f64 / 3.0;
    assert!((r.breakdown["w_squared_bound"] - third.sqrt()).abs() < 1e-10);
    assert!((r.value - third.powf(0.25)).abs() < 1e-10);
    // endpoint form: ((T*T)^2 + (TT*)^2)/2 = I/2
    assert!((r.breakdown["endpoint_w_squared_bound"] - 0.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn scalar_offdiag_cases() {
    let x = one();
    for id in [BoundId::OffdiagLower31i, BoundId::OffdiagUpperPsk, BoundId::OffdiagLower31ii] {
        assert!((value(id, Inputs::Pair(&x, &x)) - 1.0).abs() < 1e-12, "{id}");
    }
}

#[test]
fn corrected_sign_in_the_rotated_forms() {
    // X = [1], Y = [-i]: the block [[0,1],[-i,0]] has w = 1
    let x = one();
    let y = CMatrix::from_rows(&[vec![c64(0.0, -1.0)]]).unwrap();
    let upper = value(BoundId::OffdiagUpper31v, Inputs::Pair(&x, &y));
    assert!(upper >= 1.0 - 1e-12, "{upper}");
    let lower = evaluate(BoundId::OffdiagLower31iii, Inputs::Pair(&x, &y), &Params::default()).unwrap();
    assert!(lower.value <= 1.0 + 1e-12);
    assert!(lower.breakdown["same_sign_variant"] <= lower.value + 1e-15);
}

#[test]
fn identity_pair() {
    let i = CMatrix::identity(3);
    assert!((value(BoundId::WeLowerTh22, Inputs::Pair(&i, &i)) - 1.0).abs() < 1e-12);
    assert!((value(BoundId::WeLowerDragomir, Inputs::Pair(&i, &i)) - 1.0).abs() < 1e-12);
    // B = C = I is normal, and the normal-pair bound gives 1 as well
    assert!((value(BoundId::WeLowerNormal, Inputs::Pair(&i, &i)) - 1.0).abs() < 1e-12);
    // the θ = 0 combination reaches √2
    let r = evaluate(BoundId::WeLower21ii, Inputs::Pair(&i, &i), &Params::default()).unwrap();
    assert!((r.value - 2f64.sqrt()).abs() < 1e-9);
    assert_eq!(r.breakdown["theta_star"], 0.0);
}

#[test]
fn identity_is_tight_for_th214_chain() {
    let i = CMatrix::identity(2);
    for id in [BoundId::WLowerTh214, BoundId::WLowerLaa2121] {
        assert!((value(id, Inputs::Single(&i)) - 1.0).abs() < 1e-12, "{id}");
    }
    // the weaker baseline drops the |q1 - q2| term
    assert!((value(BoundId::WLowerHks, Inputs::Single(&i)) - 0.75).abs() < 1e-12);
}

#[test]
fn errors() {
    let t = shift();
    assert!(matches!(
        evaluate(BoundId::WeLower21i, Inputs::Single(&t), &Params::default()),
        Err(Error::WrongInputShape { .. })
    ));
    assert!(matches!(
        evaluate(BoundId::WLowerTh214, Inputs::Pair(&t, &t), &Params::default()),
        Err(Error::WrongInputShape { .. })
    ));
    assert!(matches!(
        evaluate(BoundId::WUpperQt, Inputs::Single(&t), &Params { t: 1.5, r: 1.5 }),
        Err(Error::ParameterOutOfRange { name: "t", .. })
    ));
    assert!(matches!(
        evaluate(BoundId::WUpperCor313, Inputs::Single(&t), &Params { t: 0.5, r: 0.5 }),
        Err(Error::ParameterOutOfRange { name: "r", .. })
    ));
    // r is not read by this id, so an out-of-range r is fine
    assert!(evaluate(BoundId::WLowerTh214, Inputs::Single(&t), &Params { t: 0.5, r: 9.0 }).is_ok());
    assert!(matches!(
        evaluate(BoundId::WeLowerNormal, Inputs::Pair(&t, &t), &Params::default()),
        Err(Error::NotApplicable { .. })
    ));
    assert!(matches!(
        evaluate(BoundId::WeLower21i, Inputs::Pair(&t, &CMatrix::identity(3)), &Params::default()),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn every_id_is_sound_against_sampling() {
    // Sampling gives values below the true radius; every upper bound must
    // clear them, and every lower bound must stay below a far upper bound.
    let params = Params { t: 0.3, r: 1.7 };
    for k in 0..3 {
        let (b, c) = (sample(3, k), sample(3, k + 5));
        let w_b = w_oracle(&b, 4000, k as u64);
        let we = we_oracle(&b, &c, 4000, k as u64);
        let block = crate::transforms::offdiag_block(&b, &c).unwrap();
        let w_block = w_oracle(&block, 4000, k as u64);
        for &id in BoundId::ALL {
            let (inputs, oracle, cap) = match id.target() {
                Target::W => (Inputs::Single(&b), w_b, spectral_norm(&b)),
                Target::We => (Inputs::Pair(&b, &c), we, spectral_norm(&b).hypot(spectral_norm(&c))),
                Target::WOffdiag => (Inputs::Pair(&b, &c), w_block, spectral_norm(&block)),
            };
            let r = match evaluate(id, inputs, &params) {
                Err(Error::NotApplicable { .. }) => continue,
                other => other.unwrap(),
            };
            assert!(r.value.is_finite() && r.value >= 0.0, "{id}");
            if let Some(u) = r.upper_side() {
                assert!(u >= oracle - 1e-9, "{id}: {u} < {oracle}");
            }
            if let Some(l) = r.lower_side() {
                assert!(l <= cap + 1e-9, "{id}: {l} > {cap}");
            }
        }
    }
}

#[test]
fn breakdowns_name_their_intermediates() {
    let t = sample(3, 1);
    let c = sample(3, 4);
    let d = CMatrix::diag(&[c64(1.0, 2.0), c64(-0.5, 0.0), c64(0.0, 1.0)]);
    let cases: &[(BoundId, Inputs<'_>, &[&str])] = &[
        (BoundId::WeLowerTh22, Inputs::Pair(&t, &c), &["t1", "t2", "m1", "m2"]),
        (BoundId::WeLowerNormal, Inputs::Pair(&d, &d), &["s1", "s2", "p1", "p2"]),
        (BoundId::WLowerCor25, Inputs::Single(&t), &["alpha", "beta", "gamma", "delta"]),
        (BoundId::WLowerCor27, Inputs::Single(&t), &["gamma", "delta", "xi", "eta"]),
        (BoundId::WLowerTh214, Inputs::Single(&t), &["q1", "q2", "r1", "r2"]),
        (BoundId::OffdiagUpperPsk, Inputs::Pair(&t, &c), &["S", "P", "beta", "gamma"]),
        (BoundId::WUpperAluthgeT, Inputs::Single(&t), &["P_t", "relaxation"]),
        (BoundId::WUpperQt, Inputs::Single(&t), &["Q_t", "predicate_rhs"]),
        (BoundId::WeLower21ii, Inputs::Pair(&t, &c), &["theta_star"]),
        (BoundId::WeLower21iii, Inputs::Pair(&t, &c), &["theta_star"]),
        (BoundId::WTwosided29i, Inputs::Single(&t), &["alpha", "beta", "upper"]),
    ];
    for (id, inputs, keys) in cases {
        let r = evaluate(*id, *inputs, &Params::default()).unwrap();
        for key in keys.iter().chain(&["w_uncertainty"]) {
            assert!(r.breakdown.contains_key(*key), "{id} lacks {key}");
        }
    }
}

#[test]
fn uncertainty_is_tracked() {
    let t = sample(4, 2);
    let r = evaluate(BoundId::WUpperAluthgeHalf, Inputs::Single(&t), &Params::default()).unwrap();
    let u = r.uncertainty();
    assert!(u > 0.0 && u < 1e-8 * t.frobenius_norm(), "{u}");
    // norms only: nothing to propagate
    let r = evaluate(BoundId::WLowerTh214, Inputs::Single(&t), &Params::default()).unwrap();
    assert_eq!(r.uncertainty(), 0.0);
}

#[test]
fn digest_tracks_inputs_and_read_parameters() {
    let t = shift();
    let p = Params::default();
    let d = inputs_digest(Inputs::Single(&t), BoundId::WLowerTh214, &p);
    assert_eq!(d.len(), 64);
    assert_eq!(d, inputs_digest(Inputs::Single(&t), BoundId::WLowerTh214, &Params { t: 0.9, r: 1.1 }));
    assert_ne!(d, inputs_digest(Inputs::Single(&t.adjoint()), BoundId::WLowerTh214, &p));
    let q = inputs_digest(Inputs::Single(&t), BoundId::WUpperQt, &p);
    assert_ne!(q, inputs_digest(Inputs::Single(&t), BoundId::WUpperQt, &Params { t: 0.9, r: 1.5 }));
}

#[test]
fn evaluator_memoises() {
    let ev = Evaluator::new();
    let t = sample(3, 0);
    let a = ev.w(&t).unwrap();
    let b = ev.w(&t).unwrap();
    assert_eq!(a, b);
    assert_eq!(ev.cache.borrow().len(), 1);
}

#[test]
fn results_serialise() {
    let t = shift();
    let r = evaluate(BoundId::WSandwichEqv, Inputs::Single(&t), &Params::default()).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains("\"id\":\"w_sandwich_eqv\""));
    assert!(json.contains("\"kind\":\"twosided\""));
    let back: BoundResult = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
}

#[test]
fn quarter_root_and_endpoints_of_t() {
    let t = sample(3, 3);
    for s in [0.0, 1.0] {
        let params = Params { t: s, r: 1.5 };
        for id in [BoundId::WUpperAluthgeT, BoundId::WUpperQt] {
            let r = evaluate(id, Inputs::Single(&t), &params).unwrap();
            assert!(r.value >= w_oracle(&t, 2000, 1) - 1e-9, "{id} t={s}");
        }
    }
}
