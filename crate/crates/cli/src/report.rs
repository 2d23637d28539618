//! Version 1 of the JSON report. The published schema lives in
//! `schema/report.v1.json`.

use relfocus::correlation::MincorFamily;
use relfocus::decomposition::{AlphaStep, AlphaTrace, Status};
use relfocus::{Partition, Scheme};
use serde::Serialize;

pub const SCHEMA_VERSION: &str = "v1";

/// A partition as arrays of attribute names, blocks in canonical order.
pub type Blocks = Vec<Vec<String>>;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub input: InputInfo,
    pub status: Verdict,
    pub elapsed_ms: u64,
    #[serde(flatten)]
    pub body: Body,
}

#[derive(Debug, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
    pub attributes: Vec<String>,
    pub tuples: usize,
    pub duplicates_removed: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Verified,
    Unverified,
}

impl From<Status> for Verdict {
    fn from(s: Status) -> Self {
        match s {
            Status::Verified => Verdict::Verified,
            Status::Unverified => Verdict::Unverified,
        }
    }
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Body {
    Factorize(FactorizeBody),
    Mincors(MincorBody),
    AlphaTrace(TraceBody),
    Check(CheckBody),
    Oracle(OracleBody),
}

#[derive(Debug, Serialize)]
pub struct FactorizeBody {
    pub focus: Blocks,
    pub independent: bool,
    pub factors: Vec<FactorInfo>,
    pub cells: Cells,
    pub trace: TraceSummary,
}

#[derive(Debug, Serialize)]
pub struct FactorInfo {
    pub attributes: Vec<String>,
    pub tuples: usize,
    /// File name inside the output directory, when one was requested.
    pub file: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct Cells {
    pub flat: usize,
    pub factorized: usize,
}

#[derive(Debug, Serialize)]
pub struct TraceSummary {
    /// ⊥ followed by every α output, the last one repeated once it is fixed.
    pub chain: Vec<Blocks>,
    pub iterations: usize,
    pub productive_steps: usize,
    pub truncated: bool,
}

impl TraceSummary {
    pub fn new(scheme: &Scheme, trace: &AlphaTrace) -> Self {
        let mut chain = vec![scheme.partition_names(&trace.steps()[0].input)];
        chain.extend(trace.steps().iter().map(|s| scheme.partition_names(&s.output)));
        TraceSummary {
            chain,
            iterations: trace.iterations(),
            productive_steps: trace.productive_steps(),
            truncated: trace.truncated(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct MincorEntry {
    pub blocks: Blocks,
    /// `|π_∪sel(r)|`.
    pub joint: usize,
    /// Product of the projection sizes of the selected blocks.
    pub product: u128,
}

#[derive(Debug, Serialize)]
pub struct MincorBody {
    pub partition: Blocks,
    pub mincors: Vec<MincorEntry>,
    pub singletons: Blocks,
    pub truncated: bool,
}

impl MincorBody {
    pub fn new(scheme: &Scheme, fam: &MincorFamily) -> Self {
        let x = fam.ground();
        let mincors = (0..fam.mincors().len())
            .map(|i| MincorEntry {
                blocks: fam
                    .mincor_blocks(i)
                    .into_iter()
                    .map(|b| scheme.block_names(b))
                    .collect(),
                joint: fam.evidence()[i].joint,
                product: fam.evidence()[i].product,
            })
            .collect();
        MincorBody {
            partition: scheme.partition_names(x),
            mincors,
            singletons: fam
                .singletons()
                .iter()
                .map(|&b| scheme.block_names(&x.blocks()[b]))
                .collect(),
            truncated: fam.truncated(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TraceStep {
    pub input: Blocks,
    pub mincors: Vec<MincorEntry>,
    pub singletons: Blocks,
    pub output: Blocks,
}

impl TraceStep {
    pub fn new(scheme: &Scheme, step: &AlphaStep) -> Self {
        let m = MincorBody::new(scheme, &step.family);
        TraceStep {
            input: m.partition,
            mincors: m.mincors,
            singletons: m.singletons,
            output: scheme.partition_names(&step.output),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct TraceBody {
    pub steps: Vec<TraceStep>,
    pub focus: Blocks,
    pub iterations: usize,
    pub productive_steps: usize,
}

#[derive(Debug, Serialize)]
pub struct CheckBody {
    pub partition: Blocks,
    pub independent: bool,
    pub block_sizes: Vec<usize>,
    /// `None` when the product overflows.
    pub product: Option<usize>,
    pub paranoid: bool,
}

#[derive(Debug, Serialize)]
pub struct OracleBody {
    pub focus: Blocks,
    pub attribute_mincors: Vec<Vec<String>>,
}

pub fn blocks(scheme: &Scheme, p: &Partition) -> Blocks {
    scheme.partition_names(p)
}
