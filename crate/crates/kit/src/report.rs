//! The machine-readable result of a run.

use picard_core::lattice::{FirstCheck, NamedDecomposition, ReasonCode, SaturationReport, Verdict};
use picard_core::pointcount::TauProvenance;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProvenanceData {
    UserOverride,
    TrivialCap,
    Counting { per_prime: Vec<(u64, u32)>, refined: bool },
}

impl From<&TauProvenance> for ProvenanceData {
    fn from(t: &TauProvenance) -> Self {
        match t {
            TauProvenance::UserOverride => ProvenanceData::UserOverride,
            TauProvenance::TrivialCap => ProvenanceData::TrivialCap,
            TauProvenance::Counting { per_prime, refined } => ProvenanceData::Counting { per_prime: per_prime.clone(), refined: *refined },
        }
    }
}

/// Why a run ended where it did.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasonKind {
    /// The wall-clock budget ran out.
    Time,
    /// Every search finished and the rank stayed below `tau`.
    NonSharpTauSuspected,
    /// Only classes of rational curves are searched for.
    CurveClassesInsufficient,
    /// A search stopped on its step budget.
    SearchInconclusive,
    /// Some `Lambda_p` could not be ruled out.
    LambdaPTooLarge,
    /// Step IV found the discriminant group too long.
    NeedsMoreDivisors,
    /// Step IV confirmed saturation.
    Saturated,
    /// A user divisor was rejected.
    DivisorRejected,
    /// Intersection numbers could not all be decided.
    AmbiguousIntersections,
    /// The field of definition grew past the degree cap.
    FieldDegreeCap,
    /// The lattice contradicts the upper bound.
    Inconsistent,
    /// A del Pezzo cover forces a rank the current lattice does not reach.
    DelPezzoBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportReason {
    pub code: ReasonKind,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorSummary {
    pub label: String,
    pub kind: String,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane_curve: Option<String>,
    /// Minimal polynomial of the field of definition.
    pub field: String,
    /// Whether the class enters the Gram matrix.
    pub used: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ambiguity {
    /// Pairs whose intersection number is not determined by the computation.
    pub pairs: Vec<(String, String)>,
    /// Number of admissible Gram matrices, when they were enumerated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternatives: Option<usize>,
    /// Classes left out so that every remaining entry is exact.
    pub dropped: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedPart {
    pub lattice: String,
    pub scale: i64,
}

pub fn named_parts(d: &NamedDecomposition) -> Vec<NamedPart> {
    d.parts.iter().map(|(l, s)| NamedPart { lattice: l.to_string(), scale: *s }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeData {
    pub p: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<Vec<u64>>>,
    pub classes: usize,
    pub capped: bool,
    pub survivors: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationData {
    pub verdict: String,
    pub first_check: String,
    pub primes: Vec<PrimeData>,
    pub reasons: Vec<(String, String)>,
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Saturated => "saturated",
        Verdict::NeedsMoreDivisors => "needs_more_divisors",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn code_name(c: ReasonCode) -> &'static str {
    match c {
        ReasonCode::SquarefreeDeterminant => "squarefree_determinant",
        ReasonCode::LongDiscriminantGroup => "long_discriminant_group",
        ReasonCode::AllPrimesFiltered => "all_primes_filtered",
        ReasonCode::SurvivingClasses => "surviving_classes",
        ReasonCode::EnumerationCap => "enumeration_cap",
        ReasonCode::PrimeTooLarge => "prime_too_large",
    }
}

impl From<&SaturationReport> for SaturationData {
    fn from(r: &SaturationReport) -> Self {
        SaturationData {
            verdict: verdict_name(r.verdict).into(),
            first_check: match r.first_check {
                FirstCheck::Saturated => "saturated",
                FirstCheck::NeedsMoreDivisors => "needs_more_divisors",
                FirstCheck::Undecided => "undecided",
            }
            .into(),
            primes: r
                .primes
                .iter()
                .map(|p| PrimeData {
                    p: p.p.to_string(),
                    kernel: p.lambda.as_ref().map(|l| l.kernel.clone()),
                    classes: p.lambda.as_ref().map_or(0, |l| l.classes.len()),
                    capped: p.lambda.as_ref().is_some_and(|l| l.capped),
                    survivors: p.survivors.clone(),
                })
                .collect(),
            reasons: r.reasons.iter().map(|x| (code_name(x.code).to_string(), x.text.clone())).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    /// Gram matrix of a basis of the lattice spanned by the used divisors.
    pub gram_matrix: Vec<Vec<i64>>,
    pub verdict: bool,
    pub rank: usize,
    /// Determinant of `gram_matrix`, exact.
    pub det: String,
    pub tau: u32,
    pub tau_provenance: ProvenanceData,
    pub divisors: Vec<DivisorSummary>,
    /// Intersection matrix of the used divisors, in the order of `divisors` with `used`.
    pub generator_gram: Vec<Vec<i64>>,
    /// Basis vectors as integer combinations of the used divisors.
    pub basis: Vec<Vec<i64>>,
    pub ambiguities: Vec<Ambiguity>,
    pub reasons: Vec<ReportReason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named_decomposition: Option<Vec<NamedPart>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturation: Option<SaturationData>,
    /// Rank lower bound certified by a del Pezzo cover.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_lower_bound: Option<u32>,
    /// Set when the run stopped on the time budget and can be resumed.
    pub resumable: bool,
}

impl Report {
    pub fn has_reason(&self, code: ReasonKind) -> bool {
        self.reasons.iter().any(|r| r.code == code)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }
}
