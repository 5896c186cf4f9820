use num_traits::ToPrimitive;
use serconv::{MembershipStatus, Rational, Verdict};
use serde::{Deserialize, Serialize};

/// JSON form of an analysis. Field names and types are a stable contract;
/// optional fields are left out rather than written as `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisDocument {
    pub expr_text: String,
    /// Present only for members.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<Degree>,
    /// Present for members and for the zero constant.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub leading_coefficient: Option<LeadingCoefficient>,
    pub membership: String,
    pub classification: String,
    /// Present when the domain search found a window.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_defined: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_sign_stable: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub coeff_sign: Option<i8>,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Degree {
    pub num: i64,
    pub den: i64,
}

impl Degree {
    pub fn from_rational(r: &Rational) -> Option<Self> {
        Some(Degree { num: r.numer().to_i64()?, den: r.denom().to_i64()? })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeadingCoefficient {
    pub decimal: f64,
    /// Exact radical form, e.g. `2*3^(1/2)`.
    pub exact: String,
}

impl AnalysisDocument {
    pub fn new(text: &str, status: &MembershipStatus, verdict: &Verdict) -> Self {
        AnalysisDocument {
            expr_text: text.to_string(),
            degree: None,
            leading_coefficient: None,
            membership: status.to_string(),
            classification: verdict.as_str().to_string(),
            n_defined: None,
            n_sign_stable: None,
            coeff_sign: None,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}
