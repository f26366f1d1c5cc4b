//! The integration step: assembles the integrate input from paper, review,
//! and analysis traces; validates the integrator's verdict; exports Stage-1
//! training pairs; and applies the Stage-2 persona-consistency filter.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{role_defaults, BackendHandle, BackendRole, ChatMessage, ChatRequest};
use crate::corpus::{canonical_persona, DefectLabel, PaperBundle, PersonaKind, PersonaSpec, ReviewRecord};
use crate::jsonx;
use crate::prompts;
use crate::toolkit::{ToolTrace, JSON_REPAIR_REMINDER, MAX_TOOL_REPAIRS};

#[derive(Debug, Error)]
pub enum IntegratorError {
    #[error("no JSON object found in integrate output")]
    NoJsonObject,
    #[error("integrate verdict field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("unknown defect token `{0}` in defect_type")]
    UnknownDefect(String),
    #[error("verdict alignment violation: {0}")]
    Alignment(String),
    #[error("integrate already ran for this session")]
    AlreadyIntegrated,
    #[error("integrate failed after {attempts} attempts; last error: {last_error}")]
    Unrecoverable { attempts: u32, last_error: String },
    #[error("review `{0}` has no gold annotation")]
    MissingGold(String),
    #[error("review `{0}` has no gold quality score")]
    MissingGoldQuality(String),
    #[error("review `{review_id}` has inconsistent gold: z={z} with quality score {q}")]
    InconsistentGold { review_id: String, z: u8, q: u8 },
    #[error("review `{0}` has no trace history")]
    MissingTraces(String),
    #[error("paper `{0}` not found for training export")]
    MissingPaper(String),
    #[error("pseudo review `{0}` carries no persona tag")]
    MissingPersonaTag(String),
    #[error("persona `{0}` is not a canonical persona")]
    UnknownPersona(String),
    #[error(transparent)]
    Backend(#[from] crate::backend::BackendError),
}

/// Gold-export defect ordering: descending training-set class frequency,
/// ties broken alphabetically.
pub const GOLD_PROMINENCE_ORDER: [DefectLabel; 6] = [
    DefectLabel::InformationError,
    DefectLabel::NoEvidence,
    DefectLabel::Unprofessional,
    DefectLabel::Bias,
    DefectLabel::LackConstructive,
    DefectLabel::Careless,
];

/// The integrator's verdict: binary decision, aligned quality score, and the
/// defect list in the integrator's prominence order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "VerdictWire", into = "VerdictWire")]
pub struct IntegrateVerdict {
    is_defective: bool,
    quality_score: u8,
    defect_types: Vec<DefectLabel>,
}

impl IntegrateVerdict {
    pub fn new(
        is_defective: bool,
        quality_score: u8,
        defect_types: Vec<DefectLabel>,
    ) -> Result<Self, IntegratorError> {
        let v = IntegrateVerdict { is_defective, quality_score, defect_types };
        v.validate()?;
        Ok(v)
    }

    fn validate(&self) -> Result<(), IntegratorError> {
        if self.is_defective {
            if !(1..=3).contains(&self.quality_score) {
                return Err(IntegratorError::Alignment(format!(
                    "is_defective=true requires quality_score in 1..=3, got {}",
                    self.quality_score
                )));
            }
            if self.defect_types.is_empty() {
                return Err(IntegratorError::Alignment(
                    "is_defective=true requires a non-empty defect list".into(),
                ));
            }
            if self.defect_types.contains(&DefectLabel::NoDeficient) {
                return Err(IntegratorError::Alignment(
                    "no_deficient cannot appear in a defective verdict".into(),
                ));
            }
            let mut seen = std::collections::BTreeSet::new();
            for d in &self.defect_types {
                if !seen.insert(*d) {
                    return Err(IntegratorError::Alignment(format!(
                        "duplicate defect `{d}` in verdict"
                    )));
                }
            }
        } else {
            if !(4..=5).contains(&self.quality_score) {
                return Err(IntegratorError::Alignment(format!(
                    "is_defective=false requires quality_score in 4..=5, got {}",
                    self.quality_score
                )));
            }
            if self.defect_types != [DefectLabel::NoDeficient] {
                return Err(IntegratorError::Alignment(
                    "is_defective=false requires defect_type to be exactly no_deficient".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn is_defective(&self) -> bool {
        self.is_defective
    }

    pub fn quality_score(&self) -> u8 {
        self.quality_score
    }

    /// Defect list in the integrator's prominence order.
    pub fn defect_types(&self) -> &[DefectLabel] {
        &self.defect_types
    }

    /// The predicted defect subset; empty for non-defective verdicts.
    pub fn defect_set(&self) -> std::collections::BTreeSet<DefectLabel> {
        if self.is_defective {
            self.defect_types.iter().copied().collect()
        } else {
            std::collections::BTreeSet::new()
        }
    }

    /// Canonical serialization, with the string-encoded boolean and the
    /// comma-separated defect list.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerdictWire {
    is_defective: BoolOrString,
    quality_score: u8,
    defect_type: String,
}

/// The verdict schema quotes the boolean ("true / false"), so both
/// encodings are accepted on input; the string form is emitted.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum BoolOrString {
    Bool(bool),
    Text(String),
}

impl TryFrom<VerdictWire> for IntegrateVerdict {
    type Error = IntegratorError;

    fn try_from(w: VerdictWire) -> Result<Self, Self::Error> {
        let is_defective = match w.is_defective {
            BoolOrString::Bool(b) => b,
            BoolOrString::Text(s) => match s.trim() {
                "true" => true,
                "false" => false,
                other => {
                    return Err(IntegratorError::Schema {
                        field: "is_defective".into(),
                        message: format!("expected true/false, got `{other}`"),
                    })
                }
            },
        };
        let mut defect_types = Vec::new();
        for token in w.defect_type.split(',') {
            let token = token.trim();
            if token.is_empty() {
                continue;
            }
            let label = DefectLabel::parse(token)
                .ok_or_else(|| IntegratorError::UnknownDefect(token.to_string()))?;
            if !defect_types.contains(&label) {
                defect_types.push(label);
            }
        }
        IntegrateVerdict::new(is_defective, w.quality_score, defect_types)
    }
}

impl From<IntegrateVerdict> for VerdictWire {
    fn from(v: IntegrateVerdict) -> Self {
        VerdictWire {
            is_defective: BoolOrString::Text(v.is_defective.to_string()),
            quality_score: v.quality_score,
            defect_type: v
                .defect_types
                .iter()
                .map(|d| d.as_str())
                .collect::<Vec<_>>()
                .join(", "),
        }
    }
}

/// Parses `{is_defective, quality_score, defect_type}` from raw model
/// output, enforcing the verdict alignment invariants.
pub fn parse_integrate_verdict(raw: &str) -> Result<IntegrateVerdict, IntegratorError> {
    let json = jsonx::extract_object(raw).ok_or(IntegratorError::NoJsonObject)?;
    let mut deserializer = serde_json::Deserializer::from_str(&json);
    let verdict: IntegrateVerdict = serde_path_to_error::deserialize(&mut deserializer)
        .map_err(|e| {
            // Alignment errors raised inside try_from arrive as serde custom
            // messages; keep the original wording.
            IntegratorError::Schema { field: e.path().to_string(), message: e.inner().to_string() }
        })?;
    Ok(verdict)
}

const NO_PRIOR_ANALYSES: &str = "no prior analyses";

/// Assembles the integrate request: the integrator system prompt plus a user
/// message concatenating, in fixed order, the four paper components, the
/// review, every trace's action and output JSON, and the pre-analysis.
pub fn assemble_integrate_input(
    paper: &PaperBundle,
    review: &ReviewRecord,
    history: &[ToolTrace],
    pre_analysis: &str,
) -> ChatRequest {
    let mut user = String::new();
    user.push_str(&format!("Paper main text:\n{}\n\n", paper.main_text));
    user.push_str(&format!("Paper references:\n{}\n\n", paper.references));
    user.push_str(&format!("Paper appendix summary:\n{}\n\n", paper.appendix_summary));
    user.push_str(&format!(
        "Paper figure descriptions:\n{}\n\n",
        paper.figure_descriptions.join("\n")
    ));
    user.push_str(&format!("Review:\n{}\n\n", review.content));
    if history.is_empty() {
        user.push_str(NO_PRIOR_ANALYSES);
        user.push_str("\n\n");
    } else {
        for trace in history {
            let output = match &trace.parsed_output {
                Some(parsed) => parsed.to_canonical_json(),
                None => trace.raw_output.clone(),
            };
            user.push_str(&format!("action: {}\n{}\n\n", trace.action, output));
        }
    }
    user.push_str(&format!("Pre-analysis:\n{pre_analysis}"));

    let mut request = role_defaults(BackendRole::Integrator);
    request.system_prompt = prompts::INTEGRATE_SYSTEM.to_string();
    request.messages.push(ChatMessage::user(user));
    request
}

/// Result of one logical integrate invocation.
#[derive(Debug, Clone)]
pub struct IntegrateRun {
    pub verdict: IntegrateVerdict,
    pub raw_output: String,
    pub repair_attempts: u32,
}

/// Runs the integrate call once. `already_done` is the session's
/// exactly-once flag: a second call is a contract error. Parse failures are
/// re-prompted up to the shared per-call repair bound.
pub async fn run_integrate(
    backend: &BackendHandle,
    assembled: &ChatRequest,
    already_done: bool,
) -> Result<IntegrateRun, IntegratorError> {
    if already_done {
        return Err(IntegratorError::AlreadyIntegrated);
    }
    let mut request = assembled.clone();
    let mut repair_attempts = 0u32;
    loop {
        let response = backend.complete(&request).await?;
        match parse_integrate_verdict(&response.content) {
            Ok(verdict) => {
                return Ok(IntegrateRun {
                    verdict,
                    raw_output: response.content,
                    repair_attempts,
                })
            }
            Err(err) => {
                if repair_attempts >= MAX_TOOL_REPAIRS {
                    return Err(IntegratorError::Unrecoverable {
                        attempts: repair_attempts + 1,
                        last_error: err.to_string(),
                    });
                }
                repair_attempts += 1;
                request.messages.push(ChatMessage::assistant(response.content));
                request.messages.push(ChatMessage::user(JSON_REPAIR_REMINDER));
            }
        }
    }
}

/// Stage-2 consistency: a deficient persona's verdict must contain the
/// persona's target defect; a competent persona's verdict must be
/// non-defective.
pub fn persona_consistent(verdict: &IntegrateVerdict, persona: &PersonaSpec) -> bool {
    match persona.kind {
        PersonaKind::Competent => !verdict.is_defective(),
        PersonaKind::Deficient => match persona.target_defect {
            Some(target) => verdict.is_defective() && verdict.defect_types().contains(&target),
            None => false,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrainingSource {
    Gold,
    Pseudo,
}

/// One supervised-fine-tuning pair: the full integrate input text and the
/// verdict-shaped target JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingExample {
    pub input_text: String,
    pub target_json: String,
    pub source: TrainingSource,
}

/// Splits a stored session history into the analysis traces and the
/// pre-analysis carried by the integrate invocation, if present.
fn split_history(history: &[ToolTrace]) -> (Vec<&ToolTrace>, String) {
    let analysis: Vec<&ToolTrace> = history
        .iter()
        .filter(|t| t.action != crate::toolkit::ToolAction::Integrate)
        .collect();
    let pre_analysis = history
        .iter()
        .find(|t| t.action == crate::toolkit::ToolAction::Integrate)
        .map(|t| format!("{}\n{}", t.invocation.content, t.invocation.analysis))
        .unwrap_or_else(|| "N/A".to_string());
    (analysis, pre_analysis)
}

fn gold_target(review: &ReviewRecord) -> Result<String, IntegratorError> {
    let gold = review
        .gold
        .as_ref()
        .ok_or_else(|| IntegratorError::MissingGold(review.review_id.clone()))?;
    let q = gold
        .quality_score()
        .ok_or_else(|| IntegratorError::MissingGoldQuality(review.review_id.clone()))?;
    let z = gold.z();
    // Inconsistent gold is surfaced, never silently fixed.
    let aligned = if z == 1 { (1..=3).contains(&q) } else { (4..=5).contains(&q) };
    if !aligned {
        return Err(IntegratorError::InconsistentGold {
            review_id: review.review_id.clone(),
            z,
            q,
        });
    }
    let defects = if z == 0 {
        vec![DefectLabel::NoDeficient]
    } else {
        let set = gold.defect_set();
        GOLD_PROMINENCE_ORDER.into_iter().filter(|d| set.contains(d)).collect()
    };
    let verdict = IntegrateVerdict::new(z == 1, q, defects)?;
    Ok(verdict.to_canonical_json())
}

/// Exports one Stage-1 training example per gold-annotated review. The input
/// text is the same assembly the live integrate call would receive.
pub fn export_stage1(
    gold_split: &[ReviewRecord],
    traces: &HashMap<String, Vec<ToolTrace>>,
    papers: &HashMap<String, PaperBundle>,
) -> Result<Vec<TrainingExample>, IntegratorError> {
    let mut out = Vec::with_capacity(gold_split.len());
    for review in gold_split {
        let history = traces
            .get(&review.review_id)
            .ok_or_else(|| IntegratorError::MissingTraces(review.review_id.clone()))?;
        let paper = papers
            .get(&review.paper_id)
            .ok_or_else(|| IntegratorError::MissingPaper(review.paper_id.clone()))?;
        let (analysis, pre_analysis) = split_history(history);
        let analysis: Vec<ToolTrace> = analysis.into_iter().cloned().collect();
        let request = assemble_integrate_input(paper, review, &analysis, &pre_analysis);
        out.push(TrainingExample {
            input_text: request.messages[0].content.clone(),
            target_json: gold_target(review)?,
            source: TrainingSource::Gold,
        });
    }
    Ok(out)
}

/// A pseudo-labeled candidate for Stage 2: the review, the Stage-1 verdict,
/// and the integrate input it was produced from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PseudoLabeled {
    pub review: ReviewRecord,
    pub verdict: IntegrateVerdict,
    pub input_text: String,
}

/// Pairs each review with the verdict and integrate input recorded in its
/// detection trace, forming the pseudo-label pool for Stage 2.
pub fn build_pseudo_pool(
    reviews: &[ReviewRecord],
    traces: &HashMap<String, Vec<ToolTrace>>,
    papers: &HashMap<String, PaperBundle>,
    verdicts: &HashMap<String, IntegrateVerdict>,
) -> Result<Vec<PseudoLabeled>, IntegratorError> {
    let mut out = Vec::with_capacity(reviews.len());
    for review in reviews {
        let history = traces
            .get(&review.review_id)
            .ok_or_else(|| IntegratorError::MissingTraces(review.review_id.clone()))?;
        let verdict = verdicts
            .get(&review.review_id)
            .ok_or_else(|| IntegratorError::MissingTraces(review.review_id.clone()))?
            .clone();
        let paper = papers
            .get(&review.paper_id)
            .ok_or_else(|| IntegratorError::MissingPaper(review.paper_id.clone()))?;
        let (analysis, pre_analysis) = split_history(history);
        let analysis: Vec<ToolTrace> = analysis.into_iter().cloned().collect();
        let request = assemble_integrate_input(paper, review, &analysis, &pre_analysis);
        out.push(PseudoLabeled {
            review: review.clone(),
            verdict,
            input_text: request.messages[0].content.clone(),
        });
    }
    Ok(out)
}

/// Builds the Stage-2 training set: gold examples plus exactly the
/// persona-consistent pseudo-labeled pairs.
pub fn build_stage2(
    pseudo_pool: &[PseudoLabeled],
    gold_examples: &[TrainingExample],
) -> Result<Vec<TrainingExample>, IntegratorError> {
    let mut out: Vec<TrainingExample> = gold_examples.to_vec();
    for sample in pseudo_pool {
        let persona_id = sample
            .review
            .persona_id
            .as_deref()
            .ok_or_else(|| IntegratorError::MissingPersonaTag(sample.review.review_id.clone()))?;
        let persona = canonical_persona(persona_id)
            .ok_or_else(|| IntegratorError::UnknownPersona(persona_id.to_string()))?;
        if persona_consistent(&sample.verdict, &persona) {
            out.push(TrainingExample {
                input_text: sample.input_text.clone(),
                target_json: sample.verdict.to_canonical_json(),
                source: TrainingSource::Pseudo,
            });
        }
    }
    Ok(out)
}

/// Serializes training examples as line-delimited JSON.
pub fn write_training_examples(examples: &[TrainingExample]) -> String {
    let mut out = String::new();
    for ex in examples {
        out.push_str(&serde_json::to_string(ex).expect("example serializes"));
        out.push('\n');
    }
    out
}
