//! Request/response bodies for the HTTP service, shared by the service and
//! the client so the wire format is defined once.

use serde::{Deserialize, Serialize};

use crate::corpus::{DatasetSplit, PaperBundle, PersonaSpec, ReviewRecord};
use crate::integrator::TrainingExample;
use crate::orchestrator::{FinalOutput, SessionTrace};
use crate::report::{EvalRecord, EvaluationReport, ResampleEvalReport};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HealthResponse {
    pub status: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PersonasResponse {
    pub personas: Vec<PersonaSpec>,
}

/// A per-record failure in a batch job; batch jobs continue past failures
/// and report them in this ledger.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordFailure {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateRequest {
    pub papers: Vec<PaperBundle>,
    pub generator_id: String,
    /// Persona ids to instantiate; absent means all nine canonical personas.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub personas: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateResponse {
    pub reviews: Vec<ReviewRecord>,
    pub failures: Vec<RecordFailure>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectRequest {
    pub paper: PaperBundle,
    pub review: ReviewRecord,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectResponse {
    pub final_output: FinalOutput,
    pub trace: SessionTrace,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectBatchRequest {
    pub papers: Vec<PaperBundle>,
    pub reviews: Vec<ReviewRecord>,
}

/// Outcome per review, in input order. Exactly one of `result` / `error` is
/// set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectOutcome {
    pub review_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<DetectResponse>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectBatchResponse {
    pub outcomes: Vec<DetectOutcome>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionRequest {
    pub reviews: Vec<ReviewRecord>,
    pub train_paper_ids: Vec<String>,
    pub test_paper_ids: Vec<String>,
    pub train_generators: Vec<String>,
    pub test_generator: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PartitionResponse {
    pub split: DatasetSplit,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExportStage1Request {
    pub reviews: Vec<ReviewRecord>,
    pub papers: Vec<PaperBundle>,
    pub traces: Vec<SessionTrace>,
}

/// Batch jobs continue past per-record failures and report them here.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainingSetResponse {
    pub examples: Vec<TrainingExample>,
    pub failures: Vec<RecordFailure>,
}

/// Stage-2 build: the pseudo pool is reconstructed server-side from the
/// reviews' detection traces (verdict + integrate input), then filtered for
/// persona consistency and concatenated with the gold examples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilterPseudoRequest {
    pub reviews: Vec<ReviewRecord>,
    pub papers: Vec<PaperBundle>,
    pub traces: Vec<SessionTrace>,
    pub gold: Vec<TrainingExample>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvaluateRequest {
    pub records: Vec<EvalRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvaluateResponse {
    pub report: EvaluationReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResampleEvalRequest {
    pub records: Vec<EvalRecord>,
    pub proportions: Vec<f64>,
    pub n_resamples: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subset_size: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResampleEvalResponse {
    pub report: ResampleEvalReport,
}
