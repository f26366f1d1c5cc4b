//! HTTP service over the detection runtime: generation, detection, dataset
//! partitioning, training export, pseudo-label filtering, and evaluation,
//! all as JSON endpoints. Backends are configured once at startup.

use std::collections::HashMap;
use std::sync::Arc;

use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::stream::{self, StreamExt};

use revaudit_core::api::*;
use revaudit_core::config::{BackendSet, RunConfig};
use revaudit_core::corpus::{canonical_personas, partition, PaperBundle};
use revaudit_core::integrator::{build_pseudo_pool, build_stage2, export_stage1};
use revaudit_core::orchestrator::DetectionConfig;
use revaudit_core::persona::generate_review;
use revaudit_core::report::{evaluate, resample_eval};
use revaudit_core::toolkit::ToolTrace;

pub struct AppState {
    /// Absent when the service runs purely for the compute endpoints.
    pub backends: Option<BackendSet>,
    pub detection: DetectionConfig,
    pub parallelism: usize,
}

impl AppState {
    pub fn from_config(config: &RunConfig, backends: Option<BackendSet>) -> Arc<Self> {
        Arc::new(AppState {
            backends,
            detection: config.detection(),
            parallelism: config.run.parallelism,
        })
    }

    fn backends(&self) -> Result<&BackendSet, ApiError> {
        self.backends.as_ref().ok_or_else(|| {
            ApiError::unavailable("no LLM backends configured on this server")
        })
    }
}

struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl ToString) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, message: message.to_string() }
    }

    fn unavailable(message: impl ToString) -> Self {
        ApiError { status: StatusCode::SERVICE_UNAVAILABLE, message: message.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorBody { error: self.message })).into_response()
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/v1/personas", get(personas))
        .route("/v1/generate", post(generate))
        .route("/v1/detect", post(detect))
        .route("/v1/detect-batch", post(detect_batch))
        .route("/v1/partition", post(partition_handler))
        .route("/v1/export-stage1", post(export_stage1_handler))
        .route("/v1/filter-pseudo", post(filter_pseudo))
        .route("/v1/evaluate", post(evaluate_handler))
        .route("/v1/resample-eval", post(resample_eval_handler))
        .with_state(state)
}

/// Binds and serves until the listener closes.
pub async fn serve(state: Arc<AppState>, listener: tokio::net::TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router(state)).await
}

async fn health() -> Json<HealthResponse> {
    Json(HealthResponse { status: "ok".to_string() })
}

async fn personas() -> Json<PersonasResponse> {
    Json(PersonasResponse { personas: canonical_personas() })
}

async fn generate(
    State(state): State<Arc<AppState>>,
    Json(request): Json<GenerateRequest>,
) -> Result<Json<GenerateResponse>, ApiError> {
    let backends = state.backends()?;
    let generator = backends.get(revaudit_core::backend::BackendRole::Generator).clone();
    let all = canonical_personas();
    let selected: Vec<_> = match &request.personas {
        None => all,
        Some(ids) if ids.iter().any(|i| i == "all") => all,
        Some(ids) => {
            let mut chosen = Vec::new();
            for id in ids {
                let persona = all
                    .iter()
                    .find(|p| &p.persona_id == id)
                    .ok_or_else(|| ApiError::bad_request(format!("unknown persona `{id}`")))?;
                chosen.push(persona.clone());
            }
            chosen
        }
    };

    // Generation order is papers outer, personas inner; scripted runs are
    // serialized by effective_parallelism so the order is reproducible.
    let parallelism = backends.effective_parallelism(state.parallelism);
    let mut jobs = Vec::with_capacity(request.papers.len() * selected.len());
    for paper in &request.papers {
        for persona in &selected {
            jobs.push((paper.clone(), persona.clone()));
        }
    }
    let results: Vec<_> = stream::iter(jobs)
        .map(|(paper, persona)| {
            let generator = generator.clone();
            let generator_id = request.generator_id.clone();
            async move {
                let id = format!("{}::{}", paper.paper_id, persona.persona_id);
                (id, generate_review(&generator, &paper, &persona, &generator_id).await)
            }
        })
        .buffered(parallelism.max(1))
        .collect()
        .await;

    let mut reviews = Vec::new();
    let mut failures = Vec::new();
    for (id, outcome) in results {
        match outcome {
            Ok(review) => reviews.push(review),
            Err(e) => failures.push(RecordFailure { id, error: e.to_string() }),
        }
    }
    Ok(Json(GenerateResponse { reviews, failures }))
}

async fn detect(
    State(state): State<Arc<AppState>>,
    Json(request): Json<DetectRequest>,
) -> Result<Json<DetectResponse>, ApiError> {
    let backends = state.backends()?;
    let session_backends = backends.session_backends();
    match revaudit_core::orchestrator::run_detection(
        &session_backends,
        &request.paper,
        &request.review,
        &state.detection,
    )
    .await
    {
        Ok((final_output, session)) => {
            Ok(Json(DetectResponse { final_output, trace: session.trace() }))
        }
        Err(failure) => Err(ApiError::bad_request(failure.to_string())),
    }
}

async fn detect_batch(
    State(state): State<Arc<AppState>>,
    Json(request): Json<DetectBatchRequest>,
) -> Result<Json<DetectBatchResponse>, ApiError> {
    let backends = state.backends()?;
    let papers: HashMap<String, PaperBundle> =
        request.papers.iter().map(|p| (p.paper_id.clone(), p.clone())).collect();
    let parallelism = backends.effective_parallelism(state.parallelism);
    let session_backends = backends.session_backends();
    let detection = state.detection;

    let outcomes: Vec<DetectOutcome> = stream::iter(request.reviews)
        .map(|review| {
            let session_backends = session_backends.clone();
            let paper = papers.get(&review.paper_id).cloned();
            async move {
                let review_id = review.review_id.clone();
                let Some(paper) = paper else {
                    return DetectOutcome {
                        review_id,
                        result: None,
                        error: Some(format!("paper `{}` not in request", review.paper_id)),
                    };
                };
                match revaudit_core::orchestrator::run_detection(
                    &session_backends,
                    &paper,
                    &review,
                    &detection,
                )
                .await
                {
                    Ok((final_output, session)) => DetectOutcome {
                        review_id,
                        result: Some(DetectResponse { final_output, trace: session.trace() }),
                        error: None,
                    },
                    Err(failure) => DetectOutcome {
                        review_id,
                        result: None,
                        error: Some(failure.to_string()),
                    },
                }
            }
        })
        .buffered(parallelism.max(1))
        .collect()
        .await;
    Ok(Json(DetectBatchResponse { outcomes }))
}

async fn partition_handler(
    Json(request): Json<PartitionRequest>,
) -> Result<Json<PartitionResponse>, ApiError> {
    let split = partition(
        &request.reviews,
        &request.train_paper_ids.iter().cloned().collect(),
        &request.test_paper_ids.iter().cloned().collect(),
        &request.train_generators.iter().cloned().collect(),
        &request.test_generator,
    )
    .map_err(ApiError::bad_request)?;
    Ok(Json(PartitionResponse { split }))
}

fn trace_maps(
    traces: &[revaudit_core::orchestrator::SessionTrace],
) -> (
    HashMap<String, Vec<ToolTrace>>,
    HashMap<String, revaudit_core::integrator::IntegrateVerdict>,
) {
    let mut histories = HashMap::new();
    let mut verdicts = HashMap::new();
    for trace in traces {
        histories.insert(trace.review_id.clone(), trace.history.clone());
        if let Some(verdict) = &trace.integrate_result {
            verdicts.insert(trace.review_id.clone(), verdict.clone());
        }
    }
    (histories, verdicts)
}

async fn export_stage1_handler(
    Json(request): Json<ExportStage1Request>,
) -> Result<Json<TrainingSetResponse>, ApiError> {
    let (histories, _) = trace_maps(&request.traces);
    let papers: HashMap<String, PaperBundle> =
        request.papers.iter().map(|p| (p.paper_id.clone(), p.clone())).collect();
    // Per-record continue-on-error: one review per export call so a bad
    // record lands in the failure ledger instead of aborting the batch.
    let mut examples = Vec::new();
    let mut failures = Vec::new();
    for review in &request.reviews {
        match export_stage1(std::slice::from_ref(review), &histories, &papers) {
            Ok(mut exported) => examples.append(&mut exported),
            Err(e) => failures.push(RecordFailure {
                id: review.review_id.clone(),
                error: e.to_string(),
            }),
        }
    }
    Ok(Json(TrainingSetResponse { examples, failures }))
}

async fn filter_pseudo(
    Json(request): Json<FilterPseudoRequest>,
) -> Result<Json<TrainingSetResponse>, ApiError> {
    let (histories, verdicts) = trace_maps(&request.traces);
    let papers: HashMap<String, PaperBundle> =
        request.papers.iter().map(|p| (p.paper_id.clone(), p.clone())).collect();
    let mut pool = Vec::new();
    let mut failures = Vec::new();
    for review in &request.reviews {
        match build_pseudo_pool(std::slice::from_ref(review), &histories, &papers, &verdicts) {
            Ok(mut one) => pool.append(&mut one),
            Err(e) => failures.push(RecordFailure {
                id: review.review_id.clone(),
                error: e.to_string(),
            }),
        }
    }
    let mut examples = request.gold.clone();
    for sample in &pool {
        match build_stage2(std::slice::from_ref(sample), &[]) {
            Ok(mut kept) => examples.append(&mut kept),
            Err(e) => failures.push(RecordFailure {
                id: sample.review.review_id.clone(),
                error: e.to_string(),
            }),
        }
    }
    Ok(Json(TrainingSetResponse { examples, failures }))
}

async fn evaluate_handler(
    Json(request): Json<EvaluateRequest>,
) -> Result<Json<EvaluateResponse>, ApiError> {
    let report =
        evaluate(&request.records, &canonical_personas()).map_err(ApiError::bad_request)?;
    Ok(Json(EvaluateResponse { report }))
}

async fn resample_eval_handler(
    Json(request): Json<ResampleEvalRequest>,
) -> Result<Json<ResampleEvalResponse>, ApiError> {
    let report = resample_eval(
        &request.records,
        &request.proportions,
        request.n_resamples,
        request.seed,
        request.subset_size,
    )
    .map_err(ApiError::bad_request)?;
    Ok(Json(ResampleEvalResponse { report }))
}
