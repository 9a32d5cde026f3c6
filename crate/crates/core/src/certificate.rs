//! Serializable certificates and their search-free verification.
//!
//! Every certificate carries the operator document it was computed for, so
//! it can be checked in isolation. Verification recompiles the operator and
//! re-executes arithmetic only; it holds a [`crate::guard::SearchLock`] so any
//! accidental call into a search path panics.

use serde::{Deserialize, Serialize};

use crate::bounds::BoundReport;
use crate::guard::forbid_search;
use crate::operators::{Operator, OperatorDoc};
use crate::relations::{ClassifyVerdict, GreedyResult, IndependenceReport, NoTorsionReport, Syzygy, TorsionCertificate};
use crate::structure::{RatFuncVec, Representation};
use crate::witness::{Infeasibility, VisitSchedule, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Syzygy { operator: OperatorDoc, syzygy: Syzygy },
    Independence { operator: OperatorDoc, report: IndependenceReport },
    Greedy { operator: OperatorDoc, result: GreedyResult },
    Torsion { operator: OperatorDoc, certificate: TorsionCertificate },
    NoTorsion { operator: OperatorDoc, report: NoTorsionReport },
    Classify { operator: OperatorDoc, verdict: ClassifyVerdict },
    Representation {
        operator: OperatorDoc,
        representation: Representation,
        j_image: RatFuncVec,
        independence: IndependenceReport,
    },
    Bound { operator: OperatorDoc, report: BoundReport },
    Witness { operator: OperatorDoc, witness: Witness },
    Infeasible { operator: OperatorDoc, certificate: Infeasibility },
    Schedule { operator: OperatorDoc, schedule: VisitSchedule },
}

/// A failed check, naming the first identity that does not hold.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind} certificate rejected: {reason}")]
pub struct VerificationFailure {
    pub kind: &'static str,
    pub reason: String,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Syzygy { .. } => "syzygy",
            Certificate::Independence { .. } => "independence",
            Certificate::Greedy { .. } => "greedy",
            Certificate::Torsion { .. } => "torsion",
            Certificate::NoTorsion { .. } => "no_torsion",
            Certificate::Classify { .. } => "classify",
            Certificate::Representation { .. } => "representation",
            Certificate::Bound { .. } => "bound",
            Certificate::Witness { .. } => "witness",
            Certificate::Infeasible { .. } => "infeasible",
            Certificate::Schedule { .. } => "schedule",
        }
    }

    pub fn operator(&self) -> &OperatorDoc {
        match self {
            Certificate::Syzygy { operator, .. }
            | Certificate::Independence { operator, .. }
            | Certificate::Greedy { operator, .. }
            | Certificate::Torsion { operator, .. }
            | Certificate::NoTorsion { operator, .. }
            | Certificate::Classify { operator, .. }
            | Certificate::Representation { operator, .. }
            | Certificate::Bound { operator, .. }
            | Certificate::Witness { operator, .. }
            | Certificate::Infeasible { operator, .. }
            | Certificate::Schedule { operator, .. } => operator,
        }
    }

    /// Re-check every identity the certificate asserts.
    pub fn verify(&self) -> Result<(), VerificationFailure> {
        let _lock = forbid_search();
        let fail = |reason: String| VerificationFailure { kind: self.kind(), reason };
        let op = Operator::from_doc(self.operator().clone()).map_err(|e| fail(format!("operator: {e}")))?;
        let outcome = match self {
            Certificate::Syzygy { syzygy, .. } => syzygy.check(&op),
            Certificate::Independence { report, .. } => report.check(&op),
            Certificate::Greedy { result, .. } => result.check(&op),
            Certificate::Torsion { certificate, .. } => certificate.check(&op),
            Certificate::NoTorsion { report, .. } => report.check(&op),
            Certificate::Classify { verdict, .. } => verdict.check(&op),
            Certificate::Representation { representation, j_image, independence, .. } => {
                check_representation(&op, representation, j_image, independence)
            }
            Certificate::Bound { report, .. } => report.check(&op),
            Certificate::Witness { witness, .. } => witness.check(&op),
            Certificate::Infeasible { certificate, .. } => certificate.check(&op),
            Certificate::Schedule { schedule, .. } => schedule.check(&op),
        };
        outcome.map_err(fail)
    }
}

fn check_representation(
    op: &Operator,
    rep: &Representation,
    j_image: &RatFuncVec,
    independence: &IndependenceReport,
) -> Result<(), String> {
    if independence.generators != rep.basis {
        return Err("independence report does not cover the representation basis".into());
    }
    independence.check(op)?;
    rep.check(op)?;
    let used = rep.p.iter().chain(std::iter::once(&rep.q)).filter_map(crate::Poly::deg).max().unwrap_or(0);
    if used > independence.degree_cap {
        return Err("representation degree exceeds the certified independence cap".into());
    }
    if rep.j_image() != *j_image {
        return Err("J-image does not equal (p_a / q)".into());
    }
    Ok(())
}

/// `true` iff `cert` passes [`Certificate::verify`].
pub fn verify_certificate(cert: &Certificate) -> bool {
    cert.verify().is_ok()
}
