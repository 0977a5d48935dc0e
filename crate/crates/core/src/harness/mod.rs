//! Random ensembles, the property-verification campaign, equality-case
//! predicates and report output.
//!
//! Each trial draws its own inputs from a ChaCha stream keyed by the spec
//! seed and the trial index, and runs on one worker; records are sorted
//! before aggregation, so a report depends only on its specs and property
//! selection, never on the worker count.

mod campaign;
mod ensemble;
mod equality;
mod inequalities;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use campaign::{run_campaign, run_campaign_with_threads, SLOP, SOUNDNESS_EPSILON};
pub use ensemble::{
    default_campaign, default_campaign_sized, generate, generate_pairs, trial_inputs, EnsembleKind, EnsembleSpec,
    TrialInputs,
};
pub use equality::{check_equality_conditions, Claim, EqualityCheck, EqualityInput, EQUALITY_TOLERANCE};
pub use inequalities::{cauchy_schwarz_gap, hermite_hadamard_gaps, jensen_gap, operator_hermite_hadamard_gaps};
pub use report::{emit_report, parse_csv_rows, parse_report, report_to_string, CsvRow, ReportFormat};

use crate::bounds::{BoundResult, Params};
use crate::error::{Error, Result};

/// A checkable family of inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// Every registered bound against the certified reference radius.
    Soundness,
    /// Stronger-than orderings between bounds.
    Refinement,
    /// `w(XY) <= w²([[0, X], [Y, 0]])`.
    ProductChain,
    /// `w_e^{2r} <= ||∫(...)^r|| <= ½||(B*B+C*C)^r + (BB*+CC*)^r||`.
    IntegralPower,
    /// `w² <= ||∫(tT*T + (1-t)TT*)^r||^{1/r} <= ||((T*T)^r + (TT*)^r)/2||^{1/r}`.
    IntegralChain,
    /// The implicit inequality behind `w_upper_qt` and its relaxations.
    QtPredicate,
    /// Degree-one homogeneity of the norm-only lower bounds.
    Homogeneity,
    /// Aluthge transforms keep the spectrum and do not raise `w`;
    /// swapping the off-diagonal blocks keeps `w`.
    Transforms,
    /// `|⟨Ax, y⟩|² <= ⟨|A|^{2α}x, x⟩⟨|A*|^{2(1-α)}y, y⟩`.
    CauchySchwarz,
    /// `f(⟨Hx, x⟩) <= ⟨f(H)x, x⟩` for convex `f`.
    Jensen,
    /// Scalar and operator Hermite–Hadamard chains.
    HermiteHadamard,
    /// Equality-case predicates against what is claimed about them.
    EqualityConditions,
}

impl Property {
    pub const ALL: &'static [Property] = &[
        Property::Soundness,
        Property::Refinement,
        Property::ProductChain,
        Property::IntegralPower,
        Property::IntegralChain,
        Property::QtPredicate,
        Property::Homogeneity,
        Property::Transforms,
        Property::CauchySchwarz,
        Property::Jensen,
        Property::HermiteHadamard,
        Property::EqualityConditions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Soundness => "soundness",
            Property::Refinement => "refinement",
            Property::ProductChain => "product_chain",
            Property::IntegralPower => "integral_power",
            Property::IntegralChain => "integral_chain",
            Property::QtPredicate => "qt_predicate",
            Property::Homogeneity => "homogeneity",
            Property::Transforms => "transforms",
            Property::CauchySchwarz => "cauchy_schwarz",
            Property::Jensen => "jensen",
            Property::HermiteHadamard => "hermite_hadamard",
            Property::EqualityConditions => "equality_conditions",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown property `{s}`")))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PropertySelection(BTreeSet<Property>);

impl PropertySelection {
    pub fn all() -> Self {
        Self(Property::ALL.iter().copied().collect())
    }

    pub fn none() -> Self {
        Self::default()
    }

    pub fn only(props: &[Property]) -> Self {
        Self(props.iter().copied().collect())
    }

    pub fn contains(&self, p: Property) -> bool {
        self.0.contains(&p)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for PropertySelection {
    type Err = Error;

    /// `all`, or a comma-separated list of property names.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "all" {
            return Ok(Self::all());
        }
        s.split(',').filter(|p| !p.trim().is_empty()).map(|p| p.trim().parse()).collect::<Result<_>>().map(Self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefInterval {
    pub lower: f64,
    pub upper: f64,
}

/// Certified reference enclosures of one trial.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct References {
    pub w: Option<RefInterval>,
    pub we: Option<RefInterval>,
    pub w_offdiag: Option<RefInterval>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub property: String,
    pub magnitude: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// `kind/n=dim`.
    pub ensemble: String,
    pub spec_index: usize,
    pub trial: usize,
    pub params: Params,
    pub references: References,
    pub bounds: Vec<BoundResult>,
    /// Distance from the reference midpoint, positive when the bound is
    /// on the correct side.
    pub slack: BTreeMap<String, f64>,
    pub equality: Vec<EqualityCheck>,
    pub violations: Vec<Violation>,
    /// Positive excesses that stayed within the uncertainty gate.
    pub warnings: Vec<Violation>,
    pub errors: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SlackQuantiles {
    pub count: usize,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    pub bound_evaluations: usize,
    pub violation_count: usize,
    pub warning_count: usize,
    pub error_count: usize,
    pub violations_by_property: BTreeMap<String, usize>,
    /// Trials where the weaker baseline's equality consequent holds but
    /// its premise does not.
    pub converse_counterexamples: usize,
    /// Slack divided by the reference midpoint, per bound id.
    pub relative_slack: BTreeMap<String, SlackQuantiles>,
    pub spec_errors: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
    /// Not serialised, so reports stay byte-stable across runs.
    #[serde(skip)]
    pub wall_time_seconds: Option<f64>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.summary.violation_count == 0 && self.summary.error_count == 0 && self.summary.spec_errors.is_empty()
    }
}
