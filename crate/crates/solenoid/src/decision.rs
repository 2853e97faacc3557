use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

/// Transcript of one local (per-prime) membership check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalTranscript {
    pub p: String,
    pub precision_exponent: u32,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A denominator prime lies outside the allowed support.
    DenominatorOutsideSupport { prime: String },
    /// Integrality-only fast path.
    Integrality { ok: bool, detail: String },
    /// Per-prime local check transcripts.
    LocalChecks { transcripts: Vec<LocalTranscript> },
    /// Closed-form membership for the classified two-dimensional cases.
    ClosedForm { case: String, ok: bool, detail: String },
    /// Bounded search: for each m, the least k with A^k T A^-m integral (if any).
    OracleWitnesses { witnesses: Vec<(u32, Option<u32>)> },
    /// Free-form explanation (inconclusive reasons, singularity, etc).
    Note { detail: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: Verdict,
    pub certificate: Certificate,
}

impl Decision {
    pub fn yes(certificate: Certificate) -> Self {
        Decision {
            verdict: Verdict::Yes,
            certificate,
        }
    }
    pub fn no(certificate: Certificate) -> Self {
        Decision {
            verdict: Verdict::No,
            certificate,
        }
    }
    pub fn inconclusive(detail: impl Into<String>) -> Self {
        Decision {
            verdict: Verdict::Inconclusive,
            certificate: Certificate::Note {
                detail: detail.into(),
            },
        }
    }
    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }
    pub fn is_no(&self) -> bool {
        self.verdict == Verdict::No
    }
}
