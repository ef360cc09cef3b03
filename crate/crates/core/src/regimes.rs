//! Theoretical regime classification.
//!
//! Three one-sided conditions on (n, moments):
//!
//! * impossibility (Fano): below the information threshold every estimator
//!   errs with probability at least 1/2;
//! * maximum-likelihood recoverability: two conditions under which the
//!   (NP-hard) MLE recovers the planted labels exactly;
//! * SDP recoverability: three conditions (plus the precondition
//!   p(1+q) <= 1) under which the semidefinite relaxation recovers exactly.
//!
//! The conditions are evaluated exactly as stated, with both sides recorded,
//! so a report can always be re-checked by recomputation. The regimes are
//! deliberately not a partition: a parameter point may satisfy none of them
//! (the theory is silent there) or in principle more than one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::GaussianMoments;

/// Constants appearing in the recovery guarantees. The MLE theorem requires
/// its c0 > 25/2; all others must merely be positive. Larger constants widen
/// the nominal "recoverable" region while weakening the probability bound
/// 1 - (c0+c1)/n (MLE) or 1 - (2c0+c1+c2)/n (SDP), which can be vacuous for
/// small n; the bounds are reported raw, without clamping to [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub mle_c0: f64,
    pub mle_c1: f64,
    pub sdp_c0: f64,
    pub sdp_c1: f64,
    pub sdp_c2: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            mle_c0: 13.0,
            mle_c1: 500.0,
            sdp_c0: 1.0,
            sdp_c1: 500.0,
            sdp_c2: 500.0,
        }
    }
}

/// One evaluated inequality. `holds` is always exactly `lhs <= rhs` or
/// `lhs >= rhs` depending on the condition's direction; the direction is
/// documented per field on the check structs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionEval {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl ConditionEval {
    fn le(lhs: f64, rhs: f64) -> Self {
        ConditionEval {
            lhs,
            rhs,
            holds: lhs <= rhs,
        }
    }

    fn ge(lhs: f64, rhs: f64) -> Self {
        ConditionEval {
            lhs,
            rhs,
            holds: lhs >= rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    Fails,
    /// The theorem's hypotheses do not cover this input (impossibility needs
    /// n >= 10).
    NotApplicable,
    /// SDP only: p(1+q) > 1, so the theorem says nothing either way.
    PreconditionViolated,
}

impl Verdict {
    fn from_bool(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::NotApplicable => "not-applicable",
            Verdict::PreconditionViolated => "precondition-violated",
        };
        f.write_str(s)
    }
}

/// Fano impossibility: -p log q <= 3 log 2 / (10 n).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ImpossibleCheck {
    pub condition: ConditionEval,
    pub verdict: Verdict,
}

/// MLE recoverability. `signal_condition` is
/// p^2(1-q)^2 >= 3375 log(n)/n + 75 log(2 c0/25)/n and `variance_condition`
/// is 32 p^-2 (1-q)^-2 (p'(1+q') - p^2(1+q^2)) <= c1/n^2.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MleCheck {
    pub signal_condition: ConditionEval,
    pub variance_condition: ConditionEval,
    pub verdict: Verdict,
    /// 1 - (c0+c1)/n, the guaranteed success probability when the verdict
    /// holds. Reported raw; negative values mean the guarantee is vacuous at
    /// this n.
    pub success_bound: f64,
}

/// SDP recoverability. `c0_condition` is
/// p^2(1-q)^2 >= 512 log(n)/n - log(c0)/n; `d_condition` and `a_condition`
/// are the degree- and adjacency-concentration budgets (<= c1 and <= c2).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SdpCheck {
    /// p(1+q) <= 1. When this fails the theorem is silent and `verdict` is
    /// PreconditionViolated, but the three condition evaluations are still
    /// recorded for inspection.
    pub precondition: ConditionEval,
    pub c0_condition: ConditionEval,
    pub d_condition: ConditionEval,
    pub a_condition: ConditionEval,
    pub verdict: Verdict,
    /// 1 - (2 c0 + c1 + c2)/n, raw (see MleCheck::success_bound).
    pub success_bound: f64,
}

/// All three checks for one parameter point.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RegimeReport {
    pub n: usize,
    pub moments: GaussianMoments,
    pub constants: Constants,
    pub impossible: ImpossibleCheck,
    pub mle_recoverable: MleCheck,
    pub sdp_recoverable: SdpCheck,
    pub precondition_ok: bool,
}

impl RegimeReport {
    /// Short label for CLI/CSV output: the names of the regimes whose
    /// conditions hold, or "indeterminate" when none do.
    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if self.impossible.verdict == Verdict::Holds {
            parts.push("impossible");
        }
        if self.mle_recoverable.verdict == Verdict::Holds {
            parts.push("mle-recoverable");
        }
        if self.sdp_recoverable.verdict == Verdict::Holds {
            parts.push("sdp-recoverable");
        }
        if parts.is_empty() {
            "indeterminate".to_owned()
        } else {
            parts.join("+")
        }
    }
}

fn validate_moments(m: &GaussianMoments) -> Result<()> {
    for (name, v) in [
        ("p", m.p),
        ("p_prime", m.p_prime),
        ("q", m.q),
        ("q_prime", m.q_prime),
        ("r", m.r),
        ("s0", m.s0),
        ("s1", m.s1),
    ] {
        if !v.is_finite() || v < 0.0 || v > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "moment {name} must lie in [0, 1], got {v}"
            )));
        }
    }
    Ok(())
}

fn validate_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {v}"
        )));
    }
    Ok(())
}

/// Impossibility threshold. Verdict true means no estimator (efficient or
/// not) can beat coin-flipping on this model. q = 1 gives lhs 0, so
/// indistinguishable clusters are always impossible; q = 0 gives lhs
/// +infinity. Only valid for n >= 10; smaller n reports NotApplicable with
/// the comparison still recorded.
pub fn check_impossible(n: usize, moments: &GaussianMoments) -> Result<ImpossibleCheck> {
    validate_moments(moments)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    let mut lhs = -(moments.p * moments.q.ln());
    if lhs == 0.0 {
        lhs = 0.0; // normalize -0.0 for clean serialization
    }
    let rhs = 3.0 * std::f64::consts::LN_2 / (10.0 * n as f64);
    let condition = ConditionEval::le(lhs, rhs);
    let verdict = if n < 10 {
        Verdict::NotApplicable
    } else {
        Verdict::from_bool(condition.holds)
    };
    Ok(ImpossibleCheck { condition, verdict })
}

/// MLE recoverability conditions. Requires c0 > 25/2 (the guarantee's proof
/// needs log(2 c0/25) > 0) and c1 > 0.
pub fn check_mle(n: usize, moments: &GaussianMoments, c0: f64, c1: f64) -> Result<MleCheck> {
    validate_moments(moments)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    if !(c0 > 12.5) || !c0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "MLE constant c0 must exceed 25/2, got {c0}"
        )));
    }
    validate_positive("c1", c1)?;
    let nf = n as f64;
    let p = moments.p;
    let q = moments.q;
    let sep = p * p * (1.0 - q) * (1.0 - q);
    let signal_condition = ConditionEval::ge(
        sep,
        3375.0 * nf.ln() / nf + 75.0 * (2.0 * c0 / 25.0).ln() / nf,
    );
    let excess = moments.p_prime * (1.0 + moments.q_prime) - p * p * (1.0 + q * q);
    let variance_condition = ConditionEval::le(32.0 * excess / sep, c1 / (nf * nf));
    let verdict = Verdict::from_bool(signal_condition.holds && variance_condition.holds);
    Ok(MleCheck {
        signal_condition,
        variance_condition,
        verdict,
        success_bound: 1.0 - (c0 + c1) / nf,
    })
}

/// SDP recoverability conditions. The degree-concentration budget is
/// evaluated exactly as stated, as the sum of its three printed lines; its
/// first line grows like n^2 for fixed moments, so large n fails it, and the
/// raw numbers are surfaced rather than reinterpreted.
pub fn check_sdp(
    n: usize,
    moments: &GaussianMoments,
    c0: f64,
    c1: f64,
    c2: f64,
) -> Result<SdpCheck> {
    validate_moments(moments)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n must be positive".into()));
    }
    validate_positive("c0", c0)?;
    validate_positive("c1", c1)?;
    validate_positive("c2", c2)?;
    let nf = n as f64;
    let p = moments.p;
    let q = moments.q;
    let precondition = ConditionEval::le(p * (1.0 + q), 1.0);

    let sep = p * p * (1.0 - q) * (1.0 - q);
    let c0_condition = ConditionEval::ge(sep, 512.0 * nf.ln() / nf - c0.ln() / nf);

    // Degree-concentration budget, the sum of three lines:
    //   4n (4n r inv (1 - s0 - 2 s1) - 1)
    // + 32n (2 (1-q)^-1 - 2 p' inv + r inv (3 - s0 - 2 s1))
    // + 64 (2 r inv - p' inv - (1-q)^-2)
    // with inv = p^-2 (1-q)^-2.
    let inv = 1.0 / sep;
    let r = moments.r;
    let s0 = moments.s0;
    let s1 = moments.s1;
    let pp = moments.p_prime;
    let line1 = 4.0 * nf * (4.0 * nf * r * inv * (1.0 - s0 - 2.0 * s1) - 1.0);
    let line2 = 32.0
        * nf
        * (2.0 / (1.0 - q) - 2.0 * pp * inv + r * inv * (3.0 - s0 - 2.0 * s1));
    let line3 = 64.0 * (2.0 * r * inv - pp * inv - 1.0 / ((1.0 - q) * (1.0 - q)));
    let d_condition = ConditionEval::le(line1 + line2 + line3, c1);

    let a_condition = ConditionEval::le(
        32.0 * nf / ((1.0 - q) * (1.0 - q))
            * (pp * (1.0 + moments.q_prime) / (p * p) - (1.0 + q * q)),
        c2,
    );

    let verdict = if !precondition.holds {
        Verdict::PreconditionViolated
    } else {
        Verdict::from_bool(c0_condition.holds && d_condition.holds && a_condition.holds)
    };
    Ok(SdpCheck {
        precondition,
        c0_condition,
        d_condition,
        a_condition,
        verdict,
        success_bound: 1.0 - (2.0 * c0 + c1 + c2) / nf,
    })
}

/// Evaluate all three regimes at one parameter point.
pub fn classify(n: usize, moments: &GaussianMoments, constants: &Constants) -> Result<RegimeReport> {
    let impossible = check_impossible(n, moments)?;
    let mle_recoverable = check_mle(n, moments, constants.mle_c0, constants.mle_c1)?;
    let sdp_recoverable = check_sdp(
        n,
        moments,
        constants.sdp_c0,
        constants.sdp_c1,
        constants.sdp_c2,
    )?;
    Ok(RegimeReport {
        n,
        moments: *moments,
        constants: *constants,
        impossible,
        precondition_ok: sdp_recoverable.precondition.holds,
        mle_recoverable,
        sdp_recoverable,
    })
}
