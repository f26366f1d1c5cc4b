//! The per-review agent loop: directive parsing (tool call vs final JSON),
//! quota ledger enforcement, the exactly-once integrate rule with bounded
//! regeneration, and final-output validation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{role_defaults, BackendHandle, BackendRole, ChatMessage};
use crate::corpus::{DefectLabel, PaperBundle, ReviewRecord};
use crate::integrator::{
    assemble_integrate_input, run_integrate, IntegrateVerdict, IntegratorError,
};
use crate::jsonx;
use crate::prompts;
use crate::toolkit::{
    run_tool, RetrievalHandle, ToolAction, ToolInvocation, ToolTrace, ToolkitError,
};

/// Default tool-call budget per review.
pub const DEFAULT_BUDGET: u32 = 8;

/// Default cap on orchestrator regenerations (premature final output,
/// invalid final JSON, unparseable directives), mirroring the per-tool-call
/// retry bound.
pub const DEFAULT_REGEN_CAP: u32 = 4;

/// Combined cap on verify + correct debits.
pub const FACTUAL_VERIFICATION_CAP: u32 = 4;

#[derive(Debug, Error)]
pub enum DirectiveError {
    #[error("response combines a tool call and a final JSON output")]
    MixedMode,
    #[error("response contains multiple tool calls")]
    MultipleToolCalls,
    #[error("tool call is missing required parameter `{0}`")]
    MissingParameter(&'static str),
    #[error("tool call has invalid action `{0}`")]
    InvalidAction(String),
    #[error("response is neither a tool call nor a final JSON output")]
    Unrecognized,
}

#[derive(Debug, Error)]
pub enum FinalOutputError {
    #[error("final output is not a JSON object")]
    NotJson,
    #[error("final output field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("rule violated: {0}")]
    Rule(String),
}

/// The 8-point tool-call budget. Every call costs one point; one point stays
/// reserved for integrate; verify + correct together may take at most four.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuotaLedger {
    pub total: u32,
    pub debits: Vec<ToolAction>,
}

impl QuotaLedger {
    pub fn new(total: u32) -> Self {
        QuotaLedger { total, debits: Vec::new() }
    }

    pub fn spent(&self) -> u32 {
        self.debits.len() as u32
    }

    pub fn remaining(&self) -> u32 {
        self.total.saturating_sub(self.spent())
    }

    pub fn factual_verification_spent(&self) -> u32 {
        self.debits
            .iter()
            .filter(|a| matches!(a, ToolAction::Verify | ToolAction::Correct))
            .count() as u32
    }

    fn record(&mut self, action: ToolAction) {
        debug_assert!(self.spent() < self.total, "ledger over-debit");
        self.debits.push(action);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotaDecision {
    Admit,
    Reject(String),
}

/// Admission control for one proposed call. Rejection is a value, not a
/// failure: the orchestrator is told and may re-plan.
pub fn check_quota(
    ledger: &QuotaLedger,
    action: ToolAction,
    integrate_done: bool,
) -> QuotaDecision {
    if integrate_done {
        return QuotaDecision::Reject(
            "integrate already completed; no further tool calls permitted".into(),
        );
    }
    if ledger.spent() >= ledger.total {
        return QuotaDecision::Reject(format!("quota exhausted ({} points spent)", ledger.spent()));
    }
    if action != ToolAction::Integrate && ledger.remaining() <= 1 {
        return QuotaDecision::Reject(
            "reserved point: the last quota point is reserved for integrate".into(),
        );
    }
    if matches!(action, ToolAction::Verify | ToolAction::Correct)
        && ledger.factual_verification_spent() >= FACTUAL_VERIFICATION_CAP
    {
        return QuotaDecision::Reject(format!(
            "factual-verification cap: verify/correct limited to {FACTUAL_VERIFICATION_CAP} points"
        ));
    }
    QuotaDecision::Admit
}

/// One orchestrator turn: either a tool call or the final JSON, never both.
#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    ModeA(ToolInvocation),
    ModeB(String),
}

fn object_params(value: &serde_json::Value) -> Option<&serde_json::Map<String, serde_json::Value>> {
    let obj = value.as_object()?;
    if obj.contains_key("action") {
        return Some(obj);
    }
    for wrapper in ["parameters", "arguments"] {
        if let Some(inner) = obj.get(wrapper).and_then(|v| v.as_object()) {
            if inner.contains_key("action") {
                return Some(inner);
            }
        }
    }
    None
}

fn string_param(
    params: &serde_json::Map<String, serde_json::Value>,
    key: &'static str,
) -> Result<String, DirectiveError> {
    match params.get(key).and_then(|v| v.as_str()) {
        Some(s) if !s.trim().is_empty() => Ok(s.to_string()),
        _ => Err(DirectiveError::MissingParameter(key)),
    }
}

/// Splits a raw orchestrator response into mode A (tool call with the four
/// required parameters) or mode B (final JSON). A response carrying both is
/// a parse error.
pub fn parse_directive(raw: &str) -> Result<Directive, DirectiveError> {
    let cleaned = jsonx::strip_fences(raw);
    let mut tool_calls: Vec<serde_json::Value> = Vec::new();
    let mut finals: Vec<String> = Vec::new();
    for text in jsonx::all_objects(&cleaned) {
        let Ok(value) = serde_json::from_str::<serde_json::Value>(text) else {
            continue;
        };
        let is_final = value.get("classification").is_some();
        let is_tool = object_params(&value).is_some();
        if is_final && is_tool {
            return Err(DirectiveError::MixedMode);
        }
        if is_final {
            finals.push(text.to_string());
        } else if is_tool {
            tool_calls.push(value);
        }
    }
    match (tool_calls.len(), finals.len()) {
        (0, 0) => Err(DirectiveError::Unrecognized),
        (0, _) => Ok(Directive::ModeB(finals.remove(0))),
        (1, 0) => {
            let params = object_params(&tool_calls[0]).expect("classified as tool call");
            let action_text = string_param(params, "action")?;
            let action = ToolAction::parse(&action_text)
                .ok_or(DirectiveError::InvalidAction(action_text))?;
            Ok(Directive::ModeA(ToolInvocation {
                action,
                content: string_param(params, "content")?,
                paper_context: string_param(params, "paper_context")?,
                analysis: string_param(params, "analysis")?,
            }))
        }
        (1, _) => Err(DirectiveError::MixedMode),
        (_, 0) => Err(DirectiveError::MultipleToolCalls),
        (_, _) => Err(DirectiveError::MixedMode),
    }
}

/// The composed user-facing result, in the fixed final-output JSON shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FinalOutput {
    pub classification: u8,
    pub defect_classification_certainty: CertaintyBlock,
    pub defect_severity_level: SeverityBlock,
    pub result: DefectFindings,
    pub tool_call_summary: Vec<ToolCallSummary>,
    pub final_conclusion: String,
    pub valid_academic_suggestions: String,
    pub review_optimization_suggestions: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertaintyBlock {
    pub score: f64,
    pub explain: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeverityBlock {
    pub score: u8,
    pub explain: String,
}

/// Per-defect findings; the six keys are always present, in the prompt's
/// fixed priority order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectFindings {
    pub unprofessional: Finding,
    pub bias: Finding,
    pub information_error: Finding,
    pub careless: Finding,
    pub no_evidence: Finding,
    pub lack_constructive: Finding,
}

impl DefectFindings {
    pub fn get(&self, label: DefectLabel) -> Option<&Finding> {
        match label {
            DefectLabel::Unprofessional => Some(&self.unprofessional),
            DefectLabel::Bias => Some(&self.bias),
            DefectLabel::InformationError => Some(&self.information_error),
            DefectLabel::Careless => Some(&self.careless),
            DefectLabel::NoEvidence => Some(&self.no_evidence),
            DefectLabel::LackConstructive => Some(&self.lack_constructive),
            DefectLabel::NoDeficient => None,
        }
    }

    pub fn labeled_set(&self) -> std::collections::BTreeSet<DefectLabel> {
        DefectLabel::DEFECTS
            .into_iter()
            .filter(|d| self.get(*d).map(|f| f.label).unwrap_or(false))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Finding {
    pub label: bool,
    pub explain: String,
    pub evidence_trace: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolCallSummary {
    pub action: ToolAction,
    pub call_purpose: String,
    pub core_output: String,
    pub quota_consumed: u32,
}

fn rule(text: &str) -> FinalOutputError {
    FinalOutputError::Rule(text.to_string())
}

/// Parses and validates a mode-B final JSON against the integrate verdict.
/// Violation messages quote the violated rule so regeneration notices can
/// relay it verbatim.
pub fn validate_final_output(
    json: &str,
    verdict: &IntegrateVerdict,
) -> Result<FinalOutput, FinalOutputError> {
    let text = jsonx::extract_object(json).ok_or(FinalOutputError::NotJson)?;
    let mut deserializer = serde_json::Deserializer::from_str(&text);
    let output: FinalOutput = serde_path_to_error::deserialize(&mut deserializer)
        .map_err(|e| FinalOutputError::Schema {
            field: e.path().to_string(),
            message: e.inner().to_string(),
        })?;

    if output.classification > 1 {
        return Err(rule("classification must be 0 or 1"));
    }
    let expected = u8::from(verdict.is_defective());
    if output.classification != expected {
        return Err(rule(
            "classification must equal the integrate verdict: 1 iff is_defective is true, 0 iff is_defective is false",
        ));
    }

    let certainty = output.defect_classification_certainty.score;
    if !(0.0..=1.0).contains(&certainty) {
        return Err(rule("defect_classification_certainty.score must be within 0.0-1.0"));
    }
    if (certainty * 10.0 - (certainty * 10.0).round()).abs() > 1e-9 {
        return Err(rule("defect_classification_certainty.score must have 1 decimal place"));
    }
    if output.classification == 1 && certainty < 0.5 {
        return Err(rule(
            "defect_classification_certainty.score must be 0.5-1.0 when is_defective is true",
        ));
    }
    if output.classification == 0 && certainty > 0.5 {
        return Err(rule(
            "defect_classification_certainty.score must be 0.0-0.5 when is_defective is false",
        ));
    }

    let severity = output.defect_severity_level.score;
    if severity > 5 {
        return Err(rule("defect_severity_level.score must be within 0-5"));
    }
    if output.classification == 0 && severity != 0 {
        return Err(rule("defect_severity_level.score must be 0 if is_defective is false"));
    }

    if output.classification == 0 {
        if output.final_conclusion != DefectLabel::NoDeficient.as_str() {
            return Err(rule("final_conclusion must be \"no_deficient\" when classification is 0"));
        }
        return Ok(output);
    }

    let mut conclusion = Vec::new();
    for token in output.final_conclusion.split(',') {
        let token = token.trim();
        if token.is_empty() {
            continue;
        }
        let label = DefectLabel::parse(token).filter(|l| *l != DefectLabel::NoDeficient);
        match label {
            Some(l) => {
                if conclusion.contains(&l) {
                    return Err(rule("final_conclusion must list distinct defect types"));
                }
                conclusion.push(l);
            }
            None => {
                return Err(rule(
                    "final_conclusion must be a comma-separated list of defect type names",
                ))
            }
        }
    }
    if conclusion.is_empty() {
        return Err(rule(
            "final_conclusion must list the matched defect types when classification is 1",
        ));
    }
    let conclusion_set: std::collections::BTreeSet<DefectLabel> =
        conclusion.iter().copied().collect();
    if conclusion_set != output.result.labeled_set() {
        return Err(rule(
            "final_conclusion must contain exactly the defect types labeled true in result",
        ));
    }
    Ok(output)
}

/// Orchestrator-visible paper context: the abstract only, never the main
/// text, references, appendix summary, or figure descriptions.
pub fn visible_context(paper: &PaperBundle) -> String {
    if paper.abstract_text.is_empty() {
        tracing::warn!(paper_id = %paper.paper_id, "paper has an empty abstract");
    }
    paper.abstract_text.clone()
}

/// Backends one detection session talks to.
#[derive(Clone)]
pub struct SessionBackends {
    pub orchestrator: BackendHandle,
    pub tool: BackendHandle,
    pub integrator: BackendHandle,
    pub retrieval: RetrievalHandle,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DetectionConfig {
    pub budget: u32,
    pub regen_cap: u32,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        DetectionConfig { budget: DEFAULT_BUDGET, regen_cap: DEFAULT_REGEN_CAP }
    }
}

/// Per-review agent state.
#[derive(Debug, Clone)]
pub struct DetectionSession {
    pub review: ReviewRecord,
    pub paper: PaperBundle,
    pub history: Vec<ToolTrace>,
    pub ledger: QuotaLedger,
    pub integrate_done: bool,
    pub integrate_result: Option<IntegrateVerdict>,
    pub regeneration_count: u32,
}

impl DetectionSession {
    fn new(review: ReviewRecord, paper: PaperBundle, budget: u32) -> Self {
        DetectionSession {
            review,
            paper,
            history: Vec::new(),
            ledger: QuotaLedger::new(budget),
            integrate_done: false,
            integrate_result: None,
            regeneration_count: 0,
        }
    }

    pub fn trace(&self) -> SessionTrace {
        SessionTrace {
            review_id: self.review.review_id.clone(),
            paper_id: self.paper.paper_id.clone(),
            history: self.history.clone(),
            ledger: self.ledger.clone(),
            integrate_done: self.integrate_done,
            integrate_result: self.integrate_result.clone(),
            regeneration_count: self.regeneration_count,
        }
    }
}

/// The persisted view of a session: everything except the full paper/review
/// bodies, which live in the corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionTrace {
    pub review_id: String,
    pub paper_id: String,
    pub history: Vec<ToolTrace>,
    pub ledger: QuotaLedger,
    pub integrate_done: bool,
    pub integrate_result: Option<IntegrateVerdict>,
    pub regeneration_count: u32,
}

#[derive(Debug, Error)]
pub enum FailureKind {
    #[error("regeneration cap exceeded ({cap} allowed)")]
    RegenerationCapExceeded { cap: u32 },
    #[error("rejected tool calls exceeded the limit of {limit}")]
    ExcessiveRejectedCalls { limit: u32 },
    #[error("orchestrator backend: {0}")]
    Backend(#[from] crate::backend::BackendError),
    #[error("tool failure: {0}")]
    Tool(#[from] ToolkitError),
    #[error("integrate failure: {0}")]
    Integrator(#[from] IntegratorError),
}

/// A failed session, returned with the partial state for inspection.
#[derive(Debug, Error)]
#[error("detection failed for review `{}`: {kind}", session.review.review_id)]
pub struct DetectionFailure {
    pub session: Box<DetectionSession>,
    pub kind: FailureKind,
}

fn initial_user_message(review: &ReviewRecord, paper: &PaperBundle) -> String {
    let mut msg = format!("Review to audit:\n{}\n\n", review.content);
    if let Some(s) = &review.scores {
        msg.push_str(&format!(
            "Review scores: Rating {}, Soundness {}, Presentation {}, Contribution {}\n\n",
            s.rating, s.soundness, s.presentation, s.contribution
        ));
    }
    msg.push_str(&format!("Paper abstract:\n{}", visible_context(paper)));
    msg
}

/// Runs the full agent loop for one review. On success the returned
/// [`FinalOutput`] satisfies every final-output invariant against the
/// integrate verdict; on failure the partial session is returned for
/// inspection.
pub async fn run_detection(
    backends: &SessionBackends,
    paper: &PaperBundle,
    review: &ReviewRecord,
    config: &DetectionConfig,
) -> Result<(FinalOutput, DetectionSession), DetectionFailure> {
    let mut session = DetectionSession::new(review.clone(), paper.clone(), config.budget);
    let mut request = role_defaults(BackendRole::Orchestrator);
    request.system_prompt = prompts::ORCHESTRATOR_SYSTEM.to_string();
    request.messages.push(ChatMessage::user(initial_user_message(review, paper)));

    // Rejected calls never debit quota, so they need their own bound to
    // guarantee termination against adversarial orchestrators.
    let rejected_limit = config.budget;
    let mut rejected_calls = 0u32;

    macro_rules! fail {
        ($session:expr, $kind:expr) => {
            return Err(DetectionFailure { session: Box::new($session), kind: $kind.into() })
        };
    }

    loop {
        let response = match backends.orchestrator.complete(&request).await {
            Ok(r) => r,
            Err(e) => fail!(session, e),
        };
        request.messages.push(ChatMessage::assistant(response.content.clone()));

        // A rejection at the cap fails the session without another
        // re-prompt, so the count never exceeds the cap.
        let regenerate = |session: &mut DetectionSession,
                              request: &mut crate::backend::ChatRequest,
                              notice: String|
         -> Result<(), FailureKind> {
            if session.regeneration_count >= config.regen_cap {
                return Err(FailureKind::RegenerationCapExceeded { cap: config.regen_cap });
            }
            session.regeneration_count += 1;
            request.messages.push(ChatMessage::tool(notice));
            Ok(())
        };

        match parse_directive(&response.content) {
            Err(err) => {
                if let Err(kind) =
                    regenerate(&mut session, &mut request, format!("output rejected: {err}"))
                {
                    fail!(session, kind);
                }
            }
            Ok(Directive::ModeA(invocation)) => {
                match check_quota(&session.ledger, invocation.action, session.integrate_done) {
                    QuotaDecision::Reject(reason) => {
                        if rejected_calls >= rejected_limit {
                            fail!(
                                session,
                                FailureKind::ExcessiveRejectedCalls { limit: rejected_limit }
                            );
                        }
                        rejected_calls += 1;
                        request.messages.push(ChatMessage::tool(format!("call rejected: {reason}")));
                    }
                    QuotaDecision::Admit => {
                        if invocation.action == ToolAction::Integrate {
                            let pre_analysis =
                                format!("{}\n{}", invocation.content, invocation.analysis);
                            let assembled = assemble_integrate_input(
                                paper,
                                review,
                                &session.history,
                                &pre_analysis,
                            );
                            let run = match run_integrate(
                                &backends.integrator,
                                &assembled,
                                session.integrate_done,
                            )
                            .await
                            {
                                Ok(run) => run,
                                Err(e) => fail!(session, e),
                            };
                            session.ledger.record(ToolAction::Integrate);
                            session.history.push(ToolTrace {
                                action: ToolAction::Integrate,
                                invocation,
                                raw_output: run.raw_output,
                                parsed_output: None,
                                quota_debit: 1,
                                repair_attempts: run.repair_attempts,
                            });
                            session.integrate_done = true;
                            let feedback = format!(
                                "malice_defense_tool (action: integrate) returned:\n{}",
                                run.verdict.to_canonical_json()
                            );
                            session.integrate_result = Some(run.verdict);
                            request.messages.push(ChatMessage::tool(feedback));
                        } else {
                            let trace = match run_tool(
                                &backends.tool,
                                &backends.retrieval,
                                invocation.action,
                                paper,
                                &invocation,
                            )
                            .await
                            {
                                Ok(trace) => trace,
                                Err(e) => fail!(session, e),
                            };
                            session.ledger.record(trace.action);
                            let output_json = trace
                                .parsed_output
                                .as_ref()
                                .map(|o| o.to_canonical_json())
                                .unwrap_or_else(|| trace.raw_output.clone());
                            request.messages.push(ChatMessage::tool(format!(
                                "malice_defense_tool (action: {}) returned:\n{output_json}",
                                trace.action
                            )));
                            session.history.push(trace);
                        }
                    }
                }
            }
            Ok(Directive::ModeB(final_json)) => {
                if !session.integrate_done {
                    let notice = "output rejected: final JSON before the integrate call; \
                        you must call the tool with action: integrate as the final tool call \
                        before any final JSON output"
                        .to_string();
                    if let Err(kind) = regenerate(&mut session, &mut request, notice) {
                        fail!(session, kind);
                    }
                    continue;
                }
                let verdict =
                    session.integrate_result.as_ref().expect("verdict present after integrate");
                match validate_final_output(&final_json, verdict) {
                    Ok(output) => return Ok((output, session)),
                    Err(err) => {
                        if let Err(kind) = regenerate(
                            &mut session,
                            &mut request,
                            format!("output rejected: {err}"),
                        ) {
                            fail!(session, kind);
                        }
                    }
                }
            }
        }
    }
}
