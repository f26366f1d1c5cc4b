//! The four analysis tools (verify, correct, complete, transform): prompt
//! assembly with per-tool paper scoping, the external-retrieval gate, output
//! schema validation, and bounded JSON repair.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{role_defaults, BackendHandle, BackendRole, ChatMessage, ChatRequest};
use crate::corpus::PaperBundle;
use crate::jsonx;
use crate::prompts;

/// Parse repairs allowed per tool call, on top of the initial attempt.
pub const MAX_TOOL_REPAIRS: u32 = 4;

/// One-line reminder appended when a response fails JSON extraction.
pub const JSON_REPAIR_REMINDER: &str =
    "Your previous response was not a valid JSON object. Output only the JSON object.";

#[derive(Debug, Error)]
pub enum ToolkitError {
    #[error("integrate is not an analysis tool")]
    IntegrateNotAnalysisTool,
    #[error("invalid tool invocation: {0}")]
    InvalidInvocation(String),
    #[error("no JSON object found in tool output")]
    NoJsonObject,
    #[error("schema violation in field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("tool {action} failed after {attempts} attempts; last error: {last_error}")]
    Unrecoverable {
        action: ToolAction,
        attempts: u32,
        last_error: String,
    },
    #[error(transparent)]
    Backend(#[from] crate::backend::BackendError),
}

/// The five actions exposed by the tool interface. The first four are the
/// analysis tools; integrate is the classification step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ToolAction {
    Verify,
    Correct,
    Complete,
    Transform,
    Integrate,
}

impl ToolAction {
    pub const ANALYSIS: [ToolAction; 4] = [
        ToolAction::Verify,
        ToolAction::Correct,
        ToolAction::Complete,
        ToolAction::Transform,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ToolAction::Verify => "verify",
            ToolAction::Correct => "correct",
            ToolAction::Complete => "complete",
            ToolAction::Transform => "transform",
            ToolAction::Integrate => "integrate",
        }
    }

    pub fn parse(s: &str) -> Option<ToolAction> {
        match s {
            "verify" => Some(ToolAction::Verify),
            "correct" => Some(ToolAction::Correct),
            "complete" => Some(ToolAction::Complete),
            "transform" => Some(ToolAction::Transform),
            "integrate" => Some(ToolAction::Integrate),
            _ => None,
        }
    }
}

impl std::fmt::Display for ToolAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The four required parameters of every tool call. `analysis` carries the
/// literal "N/A" when no prior analysis exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInvocation {
    pub action: ToolAction,
    pub content: String,
    pub paper_context: String,
    pub analysis: String,
}

impl ToolInvocation {
    pub fn validate(&self) -> Result<(), ToolkitError> {
        for (name, value) in [
            ("content", &self.content),
            ("paper_context", &self.paper_context),
            ("analysis", &self.analysis),
        ] {
            if value.trim().is_empty() {
                return Err(ToolkitError::InvalidInvocation(format!(
                    "required parameter `{name}` is empty"
                )));
            }
        }
        Ok(())
    }
}

/// Paper components a tool may see, in prompt concatenation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaperComponent {
    Abstract,
    MainText,
    References,
    AppendixSummary,
    FigureDescriptions,
}

impl PaperComponent {
    pub const ALL: [PaperComponent; 5] = [
        PaperComponent::Abstract,
        PaperComponent::MainText,
        PaperComponent::References,
        PaperComponent::AppendixSummary,
        PaperComponent::FigureDescriptions,
    ];

    fn heading(self) -> &'static str {
        match self {
            PaperComponent::Abstract => "[Abstract]",
            PaperComponent::MainText => "[Main text]",
            PaperComponent::References => "[References]",
            PaperComponent::AppendixSummary => "[Appendix summary]",
            PaperComponent::FigureDescriptions => "[Figure descriptions]",
        }
    }

    fn marker(self) -> &'static str {
        match self {
            PaperComponent::Abstract => "[missing: abstract]",
            PaperComponent::MainText => "[missing: main_text]",
            PaperComponent::References => "[missing: references]",
            PaperComponent::AppendixSummary => "[missing: appendix_summary]",
            PaperComponent::FigureDescriptions => "[missing: figure_descriptions]",
        }
    }
}

/// The slice of paper content visible to one tool call.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperSlice {
    pub included: BTreeSet<PaperComponent>,
}

/// Per-tool paper scope: verify and complete see everything; correct and
/// transform see the abstract and receive evidence segments through the
/// invocation fields.
pub fn tool_scope(action: ToolAction) -> Result<PaperSlice, ToolkitError> {
    let included: BTreeSet<PaperComponent> = match action {
        ToolAction::Verify | ToolAction::Complete => PaperComponent::ALL.into_iter().collect(),
        ToolAction::Correct | ToolAction::Transform => {
            BTreeSet::from([PaperComponent::Abstract])
        }
        ToolAction::Integrate => return Err(ToolkitError::IntegrateNotAnalysisTool),
    };
    Ok(PaperSlice { included })
}

/// External literature retrieval is enabled for verify and complete only.
pub fn retrieval_allowed(action: ToolAction) -> bool {
    matches!(action, ToolAction::Verify | ToolAction::Complete)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiteratureHit {
    pub title: String,
    pub snippet: String,
}

/// Abstract literature lookup used by retrieval-enabled tools. Live
/// implementations may target scholarly-search HTTP APIs; the default stub
/// returns nothing so offline runs never touch the network.
pub trait LiteratureLookup: Send + Sync {
    fn search(&self, query: &str) -> Vec<LiteratureHit>;
}

pub type RetrievalHandle = Arc<dyn LiteratureLookup>;

/// Stub lookup with no results.
pub struct NoRetrieval;

impl LiteratureLookup for NoRetrieval {
    fn search(&self, _query: &str) -> Vec<LiteratureHit> {
        Vec::new()
    }
}

pub fn no_retrieval() -> RetrievalHandle {
    Arc::new(NoRetrieval)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Confidence {
    High,
    Medium,
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyDefectType {
    FactualError,
    NoEvidence,
    CarelessOmission,
    NoDefect,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationDetail {
    pub claim: String,
    pub defect_type: VerifyDefectType,
    pub evidence: String,
    pub confidence: Confidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyOutput {
    pub has_factual_error: bool,
    pub factual_error_count: u32,
    pub has_no_evidence_claim: bool,
    pub no_evidence_claim_count: u32,
    pub has_careless_omission: bool,
    pub careless_omission_count: u32,
    pub verification_details: Vec<VerificationDetail>,
}

impl VerifyOutput {
    pub fn validate(&self) -> Result<(), ToolkitError> {
        let groups = [
            ("factual_error", VerifyDefectType::FactualError, self.has_factual_error, self.factual_error_count),
            ("no_evidence_claim", VerifyDefectType::NoEvidence, self.has_no_evidence_claim, self.no_evidence_claim_count),
            ("careless_omission", VerifyDefectType::CarelessOmission, self.has_careless_omission, self.careless_omission_count),
        ];
        for (name, detail_type, has, count) in groups {
            if has != (count > 0) {
                return Err(ToolkitError::Schema {
                    field: format!("has_{name}"),
                    message: format!("has_{name}={has} inconsistent with {name}_count={count}"),
                });
            }
            let detailed = self
                .verification_details
                .iter()
                .filter(|d| d.defect_type == detail_type)
                .count() as u32;
            if count != detailed {
                return Err(ToolkitError::Schema {
                    field: format!("{name}_count"),
                    message: format!(
                        "{name}_count={count} but {detailed} verification_details entries have that defect_type"
                    ),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectErrorType {
    ComprehensionError,
    FactualDataError,
    OmissionError,
    LogicError,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrectErrorEntry {
    pub error_content: String,
    pub error_type: CorrectErrorType,
    pub error_root_cause: String,
    pub is_unprofessional_error: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrectOutput {
    pub error_list: Vec<CorrectErrorEntry>,
    pub has_unprofessional_error: bool,
    pub unprofessional_error_count: u32,
    pub confidence: Confidence,
}

impl CorrectOutput {
    pub fn validate(&self) -> Result<(), ToolkitError> {
        for (i, entry) in self.error_list.iter().enumerate() {
            if entry.is_unprofessional_error
                && entry.error_type != CorrectErrorType::ComprehensionError
            {
                return Err(ToolkitError::Schema {
                    field: format!("error_list[{i}].is_unprofessional_error"),
                    message: "only comprehension_error entries may be flagged unprofessional"
                        .into(),
                });
            }
        }
        let flagged = self.error_list.iter().filter(|e| e.is_unprofessional_error).count() as u32;
        if self.unprofessional_error_count != flagged {
            return Err(ToolkitError::Schema {
                field: "unprofessional_error_count".into(),
                message: format!(
                    "unprofessional_error_count={} but {flagged} entries are flagged",
                    self.unprofessional_error_count
                ),
            });
        }
        if self.has_unprofessional_error != (self.unprofessional_error_count > 0) {
            return Err(ToolkitError::Schema {
                field: "has_unprofessional_error".into(),
                message: format!(
                    "has_unprofessional_error={} inconsistent with unprofessional_error_count={}",
                    self.has_unprofessional_error, self.unprofessional_error_count
                ),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompleteOutput {
    pub has_actionable_suggestion: bool,
    pub actionable_suggestion_count: u32,
    pub is_lack_constructive: bool,
    pub judgment_evidence: String,
    pub confidence: Confidence,
}

impl CompleteOutput {
    pub fn validate(&self) -> Result<(), ToolkitError> {
        if self.has_actionable_suggestion != (self.actionable_suggestion_count > 0) {
            return Err(ToolkitError::Schema {
                field: "has_actionable_suggestion".into(),
                message: format!(
                    "has_actionable_suggestion={} inconsistent with actionable_suggestion_count={}",
                    self.has_actionable_suggestion, self.actionable_suggestion_count
                ),
            });
        }
        if self.has_actionable_suggestion && self.is_lack_constructive {
            return Err(ToolkitError::Schema {
                field: "is_lack_constructive".into(),
                message: "a review with actionable suggestions cannot lack constructiveness"
                    .into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasType {
    SubjectiveBias,
    EmotionalAttack,
    MaliciousNegation,
    HostileDerogation,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransformOutput {
    /// Canonical name; `has_bias_or_invalid_content` is accepted on input.
    #[serde(alias = "has_bias_or_invalid_content")]
    pub has_bias_invalid_content: bool,
    pub bias_type: BiasType,
    pub has_valid_academic_concern: bool,
    pub judgment_evidence: String,
    pub confidence: Confidence,
}

impl TransformOutput {
    pub fn validate(&self) -> Result<(), ToolkitError> {
        if self.has_bias_invalid_content == (self.bias_type == BiasType::None) {
            return Err(ToolkitError::Schema {
                field: "bias_type".into(),
                message: format!(
                    "has_bias_invalid_content={} inconsistent with bias_type={:?}",
                    self.has_bias_invalid_content, self.bias_type
                ),
            });
        }
        Ok(())
    }
}

/// A validated analysis-tool output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum ToolOutput {
    Verify(VerifyOutput),
    Correct(CorrectOutput),
    Complete(CompleteOutput),
    Transform(TransformOutput),
}

impl ToolOutput {
    pub fn action(&self) -> ToolAction {
        match self {
            ToolOutput::Verify(_) => ToolAction::Verify,
            ToolOutput::Correct(_) => ToolAction::Correct,
            ToolOutput::Complete(_) => ToolAction::Complete,
            ToolOutput::Transform(_) => ToolAction::Transform,
        }
    }

    pub fn validate(&self) -> Result<(), ToolkitError> {
        match self {
            ToolOutput::Verify(o) => o.validate(),
            ToolOutput::Correct(o) => o.validate(),
            ToolOutput::Complete(o) => o.validate(),
            ToolOutput::Transform(o) => o.validate(),
        }
    }

    /// Canonical JSON serialization of the bare tool object (no wrapper).
    pub fn to_canonical_json(&self) -> String {
        match self {
            ToolOutput::Verify(o) => serde_json::to_string(o),
            ToolOutput::Correct(o) => serde_json::to_string(o),
            ToolOutput::Complete(o) => serde_json::to_string(o),
            ToolOutput::Transform(o) => serde_json::to_string(o),
        }
        .expect("tool output serializes")
    }
}

/// One tool invocation: inputs, raw and validated output, quota debit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolTrace {
    pub action: ToolAction,
    pub invocation: ToolInvocation,
    pub raw_output: String,
    /// Absent for integrate traces; the verdict lives on the session.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parsed_output: Option<ToolOutput>,
    /// Always 1: every call costs one quota point regardless of action.
    pub quota_debit: u32,
    pub repair_attempts: u32,
}

fn typed_parse<T>(json: &str) -> Result<T, ToolkitError>
where
    T: serde::de::DeserializeOwned,
{
    let mut deserializer = serde_json::Deserializer::from_str(json);
    serde_path_to_error::deserialize(&mut deserializer).map_err(|e| ToolkitError::Schema {
        field: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Extracts the first balanced JSON object from `raw` (after stripping code
/// fences) and validates it against the action's schema and invariants.
pub fn parse_tool_output(action: ToolAction, raw: &str) -> Result<ToolOutput, ToolkitError> {
    if action == ToolAction::Integrate {
        return Err(ToolkitError::IntegrateNotAnalysisTool);
    }
    let json = jsonx::extract_object(raw).ok_or(ToolkitError::NoJsonObject)?;
    let output = match action {
        ToolAction::Verify => ToolOutput::Verify(typed_parse(&json)?),
        ToolAction::Correct => ToolOutput::Correct(typed_parse(&json)?),
        ToolAction::Complete => ToolOutput::Complete(typed_parse(&json)?),
        ToolAction::Transform => ToolOutput::Transform(typed_parse(&json)?),
        ToolAction::Integrate => unreachable!(),
    };
    output.validate()?;
    Ok(output)
}

fn slice_blocks(paper: &PaperBundle, slice: &PaperSlice) -> String {
    let mut out = String::new();
    for component in PaperComponent::ALL {
        if !slice.included.contains(&component) {
            continue;
        }
        let text = match component {
            PaperComponent::Abstract => paper.abstract_text.clone(),
            PaperComponent::MainText => paper.main_text.clone(),
            PaperComponent::References => paper.references.clone(),
            PaperComponent::AppendixSummary => paper.appendix_summary.clone(),
            PaperComponent::FigureDescriptions => paper.figure_descriptions.join("\n"),
        };
        out.push_str(component.heading());
        out.push('\n');
        if text.is_empty() {
            out.push_str(component.marker());
        } else {
            out.push_str(&text);
        }
        out.push_str("\n\n");
    }
    out
}

/// Everything `_read_paper_tool` can surface, formatted like the scope
/// blocks. Used for the single free secondary request a tool may make.
fn read_paper_payload(paper: &PaperBundle) -> String {
    let all = PaperSlice { included: PaperComponent::ALL.into_iter().collect() };
    format!("_read_paper_tool result:\n\n{}", slice_blocks(paper, &all))
}

/// Builds the full chat request for one analysis-tool call: the tool's
/// system prompt plus a user message embedding the invocation fields and the
/// scoped paper slice in fixed component order.
pub fn build_tool_prompt(
    action: ToolAction,
    paper: &PaperBundle,
    invocation: &ToolInvocation,
    paper_title: &str,
) -> Result<ChatRequest, ToolkitError> {
    invocation.validate()?;
    let system = match action {
        ToolAction::Verify => prompts::VERIFY_SYSTEM.replace("{paper_title}", paper_title),
        ToolAction::Correct => prompts::CORRECT_SYSTEM.to_string(),
        ToolAction::Complete => prompts::COMPLETE_SYSTEM.to_string(),
        ToolAction::Transform => prompts::TRANSFORM_SYSTEM.to_string(),
        ToolAction::Integrate => return Err(ToolkitError::IntegrateNotAnalysisTool),
    };
    let slice = tool_scope(action)?;
    let mut user = format!(
        "Content to analyze:\n{}\n\nPaper context (from orchestrator):\n{}\n\nPrior analysis:\n{}\n\n",
        invocation.content, invocation.paper_context, invocation.analysis
    );
    user.push_str(&slice_blocks(paper, &slice));

    let mut request = role_defaults(BackendRole::Tool);
    request.system_prompt = system;
    request.messages.push(ChatMessage::user(user.trim_end().to_string()));
    Ok(request)
}

fn retrieval_block(hits: &[LiteratureHit]) -> Option<String> {
    if hits.is_empty() {
        return None;
    }
    let mut block = String::from("Retrieved literature:\n");
    for hit in hits {
        block.push_str(&format!("- {}: {}\n", hit.title, hit.snippet));
    }
    Some(block)
}

/// Runs one analysis tool: builds the prompt, queries external retrieval
/// when the action permits it, and re-issues the request on parse failure up
/// to [`MAX_TOOL_REPAIRS`] additional times. A single `_read_paper_tool`
/// follow-up is honored per call without costing quota or a repair.
pub async fn run_tool(
    backend: &BackendHandle,
    retrieval: &RetrievalHandle,
    action: ToolAction,
    paper: &PaperBundle,
    invocation: &ToolInvocation,
) -> Result<ToolTrace, ToolkitError> {
    let mut request = build_tool_prompt(action, paper, invocation, &paper.title)?;
    if retrieval_allowed(action) {
        if let Some(block) = retrieval_block(&retrieval.search(&invocation.content)) {
            let user = request.messages.last_mut().expect("prompt has a user message");
            user.content.push_str("\n\n");
            user.content.push_str(block.trim_end());
        }
    }

    let mut repair_attempts = 0u32;
    let mut read_paper_used = false;
    loop {
        let response = backend.complete(&request).await?;
        match parse_tool_output(action, &response.content) {
            Ok(parsed) => {
                return Ok(ToolTrace {
                    action,
                    invocation: invocation.clone(),
                    raw_output: response.content,
                    parsed_output: Some(parsed),
                    quota_debit: 1,
                    repair_attempts,
                });
            }
            Err(parse_err) => {
                if !read_paper_used && response.content.contains("_read_paper_tool") {
                    read_paper_used = true;
                    request.messages.push(ChatMessage::assistant(response.content));
                    request.messages.push(ChatMessage::tool(read_paper_payload(paper)));
                    continue;
                }
                if repair_attempts >= MAX_TOOL_REPAIRS {
                    return Err(ToolkitError::Unrecoverable {
                        action,
                        attempts: repair_attempts + 1,
                        last_error: parse_err.to_string(),
                    });
                }
                repair_attempts += 1;
                request.messages.push(ChatMessage::assistant(response.content));
                request.messages.push(ChatMessage::user(JSON_REPAIR_REMINDER));
            }
        }
    }
}
