use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::ensemble::{trial_inputs, EnsembleSpec, TrialInputs};
use super::equality::{pair_checks, single_checks};
use super::inequalities::{cauchy_schwarz_gap, hermite_hadamard_gaps, jensen_gap, operator_hermite_hadamard_gaps};
use super::{
    Property, PropertySelection, RefInterval, SlackQuantiles, Summary, TrialRecord, VerificationReport, Violation,
};
use crate::bounds::{BoundId, BoundKind, BoundResult, Evaluator, Inputs, Params, Target};
use crate::error::{Error, Result};
use crate::matcore::spectral_norm;
use crate::radii::{euclidean_radius, Enclosure};
use crate::transforms::{aluthge_t, offdiag_block};

/// Soundness allowance, relative to the target's scale.
pub const SOUNDNESS_EPSILON: f64 = 1e-7;
/// Arithmetic slop added to every gate, relative to scale.
pub const SLOP: f64 = 1e-10;
/// Relative tolerance of the Euclidean reference enclosure.
const WE_REFERENCE_TOLERANCE: f64 = 1e-9;

/// Stronger ≥ weaker among lower bounds.
const LOWER_REFINEMENTS: &[(BoundId, BoundId)] = &[
    (BoundId::WeLowerTh22, BoundId::WeLowerDragomir),
    (BoundId::WLowerCor25, BoundId::WLowerLaa2129),
    (BoundId::WLowerCor27, BoundId::WLowerPsk123),
    (BoundId::WLowerTh214, BoundId::WLowerHks),
    (BoundId::WLowerTh214, BoundId::WLowerLaa2121),
    (BoundId::OffdiagLower31i, BoundId::OffdiagLowerPko27),
    (BoundId::OffdiagLower31ii, BoundId::OffdiagLowerPko212),
];

/// Upper bounds that must not exceed their own `relaxation` entry.
const UPPER_REFINEMENTS: &[BoundId] = &[BoundId::WUpperAluthgeT, BoundId::WUpperAluthgeHalf];

struct Trial<'a> {
    record: TrialRecord,
    ev: Evaluator,
    inputs: &'a TrialInputs,
    scale_w: f64,
    scale_pair: f64,
}

impl Trial<'_> {
    /// Records `excess` as a violation above `allowance`, as a warning when
    /// positive but within it.
    fn gate(&mut self, property: String, excess: f64, allowance: f64) {
        if !excess.is_finite() {
            self.record.violations.push(Violation { property, magnitude: f64::INFINITY });
        } else if excess > allowance {
            self.record.violations.push(Violation { property, magnitude: excess });
        } else if excess > 0.0 {
            self.record.warnings.push(Violation { property, magnitude: excess });
        }
    }

    fn error(&mut self, context: &str, e: Error) {
        self.record.errors.push(format!("{context}: {e}"));
    }

    fn bound(&self, id: BoundId) -> Option<&BoundResult> {
        self.record.bounds.iter().find(|b| b.id == id)
    }

    fn scale(&self, target: Target) -> f64 {
        match target {
            Target::W => self.scale_w,
            Target::We | Target::WOffdiag => self.scale_pair,
        }
    }
}

fn interval(e: &Enclosure) -> RefInterval {
    RefInterval { lower: e.lower, upper: e.upper }
}

fn needs_bounds(props: &PropertySelection) -> bool {
    [Property::Soundness, Property::Refinement, Property::IntegralPower, Property::IntegralChain, Property::QtPredicate]
        .iter()
        .any(|p| props.contains(*p))
}

fn run_trial(spec_index: usize, spec: &EnsembleSpec, index: usize, props: &PropertySelection) -> TrialRecord {
    let mut record = TrialRecord { ensemble: spec.label(), spec_index, trial: index, ..TrialRecord::default() };
    let inputs = match trial_inputs(spec, index) {
        Ok(i) => i,
        Err(e) => {
            record.errors.push(format!("inputs: {e}"));
            return record;
        }
    };
    record.params = Params { t: inputs.param_t, r: inputs.param_r };
    let mut trial = Trial {
        record,
        ev: Evaluator::new(),
        scale_w: inputs.t.frobenius_norm(),
        scale_pair: inputs.t.frobenius_norm().hypot(inputs.c.frobenius_norm()),
        inputs: &inputs,
    };
    run_properties(&mut trial, props);
    trial.record
}

fn run_properties(tr: &mut Trial<'_>, props: &PropertySelection) {
    let (t, c) = (&tr.inputs.t, &tr.inputs.c);
    let w = match tr.ev.w(t) {
        Ok(e) => e,
        Err(e) => return tr.error("w reference", e),
    };
    tr.record.references.w = Some(interval(&w));

    let block = offdiag_block(t, c).expect("trial matrices share a dimension");
    let w_off = match tr.ev.w(&block) {
        Ok(e) => Some(e),
        Err(e) => {
            tr.error("w_offdiag reference", e);
            None
        }
    };
    tr.record.references.w_offdiag = w_off.as_ref().map(interval);

    let wants_we =
        [Property::Soundness, Property::IntegralPower, Property::EqualityConditions].iter().any(|p| props.contains(*p));
    let we = if wants_we {
        let tol = WE_REFERENCE_TOLERANCE * tr.scale_pair.max(f64::MIN_POSITIVE);
        match euclidean_radius(t, c, tol) {
            Ok(e) => Some(e),
            Err(e) => {
                tr.error("w_e reference", e);
                None
            }
        }
    } else {
        None
    };
    tr.record.references.we = we.as_ref().map(interval);

    if needs_bounds(props) {
        let params = tr.record.params;
        for &id in BoundId::ALL {
            let input = if id.signature().is_single() { Inputs::Single(t) } else { Inputs::Pair(t, c) };
            match tr.ev.evaluate(id, input, &params) {
                Ok(r) => tr.record.bounds.push(r),
                Err(Error::NotApplicable { .. }) => {}
                Err(e) => tr.error(id.name(), e),
            }
        }
    }

    let refs = tr.record.references.clone();
    let reference = |target: Target| match target {
        Target::W => refs.w,
        Target::We => refs.we,
        Target::WOffdiag => refs.w_offdiag,
    };

    // soundness and slack
    let results = tr.record.bounds.clone();
    for r in &results {
        let Some(rf) = reference(r.target) else { continue };
        let scale = tr.scale(r.target);
        let allowance = SOUNDNESS_EPSILON * scale + r.uncertainty() + SLOP * scale;
        let mid = 0.5 * (rf.lower + rf.upper);
        let slack = match r.kind {
            BoundKind::Upper => r.value - mid,
            BoundKind::Lower | BoundKind::TwoSided => mid - r.value,
        };
        tr.record.slack.insert(r.id.name().to_string(), slack);
        if props.contains(Property::Soundness) {
            if let Some(l) = r.lower_side() {
                tr.gate(format!("soundness:{}", r.id), l - rf.upper, allowance);
            }
            if let Some(u) = r.upper_side() {
                tr.gate(format!("soundness:{}", r.id), rf.lower - u, allowance);
            }
        }
    }

    if props.contains(Property::Refinement) {
        for &(strong, weak) in LOWER_REFINEMENTS {
            if let (Some(s), Some(wk)) = (tr.bound(strong), tr.bound(weak)) {
                let scale = tr.scale(s.target);
                let allowance = SLOP * scale + s.uncertainty() + wk.uncertainty();
                let excess = wk.value - s.value;
                tr.gate(format!("refinement:{strong}>={weak}"), excess, allowance);
            }
        }
        for &id in UPPER_REFINEMENTS {
            if let Some(b) = tr.bound(id) {
                let excess = b.value - b.breakdown["relaxation"];
                let allowance = SLOP * tr.scale_w + 2.0 * b.uncertainty();
                tr.gate(format!("refinement:{id}<=relaxation"), excess, allowance);
            }
        }
    }

    if props.contains(Property::QtPredicate) {
        if let Some(b) = tr.bound(BoundId::WUpperQt) {
            let allowance = SOUNDNESS_EPSILON * tr.scale_w + 2.0 * b.uncertainty();
            let (rhs, relax, norm) =
                (b.breakdown["predicate_rhs"], b.breakdown["relaxation"], b.breakdown["norm_bound"]);
            let excess = [w.lower - rhs, rhs - relax, relax - norm];
            for (k, e) in excess.into_iter().enumerate() {
                tr.gate(format!("qt_chain:step_{}", k + 1), e, allowance);
            }
        }
    }

    if props.contains(Property::IntegralChain) {
        if let Some(b) = tr.bound(BoundId::WUpperCor313) {
            let allowance = SOUNDNESS_EPSILON * tr.scale_w.powi(2).max(1.0) + 2.0 * b.uncertainty();
            let (bound, endpoint) = (b.breakdown["w_squared_bound"], b.breakdown["endpoint_w_squared_bound"]);
            tr.gate("integral_chain:w_squared".into(), w.lower * w.lower - bound, allowance);
            tr.gate("integral_chain:endpoint".into(), bound - endpoint, allowance);
        }
    }

    if props.contains(Property::IntegralPower) {
        if let (Some(b), Some(we)) = (tr.bound(BoundId::WeUpperIntegralR), &we) {
            let r = tr.record.params.r;
            let allowance = SOUNDNESS_EPSILON * tr.scale_pair.powf(2.0 * r).max(1.0) + 2.0 * b.uncertainty();
            let (integral, endpoint) = (b.breakdown["integral_norm"], b.breakdown["endpoint_norm"]);
            tr.gate("integral_power:lower".into(), we.lower.powf(2.0 * r) - integral, allowance);
            tr.gate("integral_power:upper".into(), integral - endpoint, allowance);
        }
    }

    if props.contains(Property::ProductChain) {
        if let Some(off) = &w_off {
            match tr.ev.w(&(t * c)) {
                Ok(wxy) => {
                    let allowance = SOUNDNESS_EPSILON * tr.scale_pair.powi(2).max(1.0);
                    tr.gate("product_chain".into(), wxy.lower - off.upper * off.upper, allowance);
                }
                Err(e) => tr.error("product_chain", e),
            }
        }
    }

    if props.contains(Property::Homogeneity) {
        homogeneity(tr);
    }
    if props.contains(Property::Transforms) {
        transforms(tr, &w, w_off.as_ref());
    }
    if props.contains(Property::CauchySchwarz) {
        let allowance = SLOP * spectral_norm(t).powi(2).max(1.0);
        match cauchy_schwarz_gap(t, &tr.inputs.x, &tr.inputs.y, tr.inputs.alpha) {
            Ok(g) => tr.gate("cauchy_schwarz".into(), g, allowance),
            Err(e) => tr.error("cauchy_schwarz", e),
        }
    }
    let r = tr.record.params.r;
    let gram = &t.adjoint() * t;
    let gram_scale = spectral_norm(&gram).powf(r).max(1.0);
    if props.contains(Property::Jensen) {
        match jensen_gap(&gram, &tr.inputs.x, r) {
            Ok(g) => tr.gate("jensen".into(), g, SLOP * gram_scale),
            Err(e) => tr.error("jensen", e),
        }
    }
    if props.contains(Property::HermiteHadamard) {
        let cogram = t * &t.adjoint();
        let (a, b) = (spectral_norm(t).powi(2), spectral_norm(c).powi(2));
        let scale = a.max(b).powf(r).max(1.0);
        match hermite_hadamard_gaps(a, b, r) {
            Ok((lo, hi)) => {
                tr.gate("hermite_hadamard:left".into(), lo, SLOP * scale);
                tr.gate("hermite_hadamard:right".into(), hi, SLOP * scale);
            }
            Err(e) => tr.error("hermite_hadamard", e),
        }
        match operator_hermite_hadamard_gaps(&gram, &cogram, r) {
            Ok((lo, hi)) => {
                tr.gate("hermite_hadamard:operator_left".into(), lo, SLOP * gram_scale);
                tr.gate("hermite_hadamard:operator_right".into(), hi, SLOP * gram_scale);
            }
            Err(e) => tr.error("hermite_hadamard", e),
        }
    }

    if props.contains(Property::EqualityConditions) {
        let mut checks = match single_checks(&tr.ev, t) {
            Ok(v) => v,
            Err(e) => {
                tr.error("equality", e);
                Vec::new()
            }
        };
        if let Some(we) = &we {
            match pair_checks(&tr.ev, t, c, we) {
                Ok(v) => checks.extend(v),
                Err(e) => tr.error("equality", e),
            }
        }
        for ch in &checks {
            if ch.contradicts_claim() {
                let magnitude = ch.residuals.values().copied().fold(0.0, f64::max);
                tr.record.violations.push(Violation { property: format!("equality:{}", ch.id), magnitude });
            }
        }
        tr.record.equality = checks;
    }
}

fn homogeneity(tr: &mut Trial<'_>) {
    let c = tr.inputs.scalar;
    let t = &tr.inputs.t;
    let allowance = SLOP * c.norm() * tr.scale_w.max(1.0);
    // w itself is absolutely homogeneous; the bounds read Re T and Im T,
    // which only scale along with T for real factors
    match (tr.ev.w(t), tr.ev.w(&t.scale(c))) {
        (Ok(a), Ok(b)) => {
            let excess = (b.midpoint() - c.norm() * a.midpoint()).abs() - b.half_width() - c.norm() * a.half_width();
            tr.gate("homogeneity:w".into(), excess, allowance);
        }
        (Err(e), _) | (_, Err(e)) => tr.error("homogeneity", e),
    }
    let scaled = t.scale_real(c.norm());
    let params = tr.record.params;
    for id in [BoundId::WLowerTh214, BoundId::WSandwichEqv] {
        let base = tr.ev.evaluate(id, Inputs::Single(t), &params);
        let other = tr.ev.evaluate(id, Inputs::Single(&scaled), &params);
        match (base, other) {
            (Ok(a), Ok(b)) => {
                let excess = (b.value - c.norm() * a.value).abs() - b.uncertainty() - c.norm() * a.uncertainty();
                tr.gate(format!("homogeneity:{id}"), excess, allowance);
            }
            (Err(e), _) | (_, Err(e)) => tr.error("homogeneity", e),
        }
    }
}

fn transforms(tr: &mut Trial<'_>, w: &Enclosure, w_off: Option<&Enclosure>) {
    let (t, c) = (&tr.inputs.t, &tr.inputs.c);
    let s = tr.record.params.t;
    let eps = SOUNDNESS_EPSILON * tr.scale_w;
    let tilde = match aluthge_t(t, s) {
        Ok(m) => m,
        Err(e) => return tr.error("aluthge", e),
    };
    match tr.ev.w(&tilde) {
        Ok(wt) => tr.gate("transforms:aluthge_radius".into(), wt.lower - w.upper, eps),
        Err(e) => tr.error("aluthge", e),
    }
    // same characteristic polynomial, compared through the power traces
    let norm = spectral_norm(t).max(f64::MIN_POSITIVE);
    let n = t.n();
    let mut worst: f64 = 0.0;
    for k in 1..=n as u32 {
        let d = (t.pow(k).trace() - tilde.pow(k).trace()).norm() / norm.powi(k as i32);
        worst = worst.max(d);
    }
    tr.gate("transforms:aluthge_spectrum".into(), worst, 1e-8 * n as f64);
    if let Some(off) = w_off {
        let swapped = offdiag_block(c, t).expect("trial matrices share a dimension");
        match tr.ev.w(&swapped) {
            Ok(ws) => {
                let excess = (ws.midpoint() - off.midpoint()).abs() - ws.half_width() - off.half_width();
                tr.gate("transforms:offdiag_swap".into(), excess, SOUNDNESS_EPSILON * tr.scale_pair);
            }
            Err(e) => tr.error("offdiag_swap", e),
        }
    }
}

fn quantiles(mut v: Vec<f64>) -> SlackQuantiles {
    v.sort_by(f64::total_cmp);
    let at = |p: f64| v[((v.len() - 1) as f64 * p).round() as usize];
    SlackQuantiles { count: v.len(), min: at(0.0), q25: at(0.25), median: at(0.5), q75: at(0.75), max: at(1.0) }
}

fn summarize(records: &[TrialRecord], spec_errors: Vec<String>) -> Summary {
    let mut slack: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut by_property: BTreeMap<String, usize> = BTreeMap::new();
    let mut summary = Summary { trials: records.len(), spec_errors, ..Summary::default() };
    for rec in records {
        summary.bound_evaluations += rec.bounds.len();
        summary.violation_count += rec.violations.len();
        summary.warning_count += rec.warnings.len();
        summary.error_count += rec.errors.len();
        summary.converse_counterexamples += rec.equality.iter().filter(|c| c.converse_counterexample()).count();
        for v in &rec.violations {
            *by_property.entry(v.property.clone()).or_default() += 1;
        }
        for b in &rec.bounds {
            let Some(s) = rec.slack.get(b.id.name()) else { continue };
            let refs = &rec.references;
            let rf = match b.target {
                Target::W => refs.w,
                Target::We => refs.we,
                Target::WOffdiag => refs.w_offdiag,
            };
            let mid = rf.map(|r| 0.5 * (r.lower + r.upper)).unwrap_or(0.0);
            slack.entry(b.id.name().to_string()).or_default().push(if mid > 0.0 { s / mid } else { *s });
        }
    }
    summary.violations_by_property = by_property;
    summary.relative_slack = slack.into_iter().map(|(k, v)| (k, quantiles(v))).collect();
    summary
}

/// Runs every selected property on every trial of every spec, in the
/// current rayon pool. Never aborts: invalid specs and failed evaluations
/// are reported in the summary.
pub fn run_campaign(specs: &[EnsembleSpec], props: &PropertySelection) -> VerificationReport {
    let start = Instant::now();
    if props.is_empty() {
        return VerificationReport { wall_time_seconds: Some(start.elapsed().as_secs_f64()), ..Default::default() };
    }
    let mut spec_errors = Vec::new();
    let mut jobs = Vec::new();
    for (k, spec) in specs.iter().enumerate() {
        match spec.validate() {
            Ok(()) => jobs.extend((0..spec.trials).map(|i| (k, i))),
            Err(e) => spec_errors.push(format!("{}: {e}", spec.label())),
        }
    }
    let mut records: Vec<TrialRecord> = jobs.par_iter().map(|&(k, i)| run_trial(k, &specs[k], i, props)).collect();
    records.sort_by_key(|r| (r.spec_index, r.trial));
    let summary = summarize(&records, spec_errors);
    VerificationReport { records, summary, wall_time_seconds: Some(start.elapsed().as_secs_f64()) }
}

/// [`run_campaign`] in a dedicated pool of `threads` workers.
pub fn run_campaign_with_threads(
    specs: &[EnsembleSpec],
    props: &PropertySelection,
    threads: usize,
) -> Result<VerificationReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidSpec(format!("worker pool: {e}")))?;
    Ok(pool.install(|| run_campaign(specs, props)))
}
