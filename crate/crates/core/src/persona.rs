//! Persona-conditioned review generation: prompt assembly from the reviewer
//! system prompt, persona description, and paper content, plus validation of
//! the generated review JSON.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backend::{role_defaults, BackendHandle, BackendRole, ChatMessage, ChatRequest};
use crate::corpus::{PaperBundle, PersonaSpec, ReviewRecord, ReviewScores};
use crate::jsonx;
use crate::prompts;
use crate::toolkit::{JSON_REPAIR_REMINDER, MAX_TOOL_REPAIRS};

#[derive(Debug, Error)]
pub enum PersonaError {
    #[error("no JSON object found in generated review")]
    NoJsonObject,
    #[error("generated review field `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("generated review is missing the {0} section")]
    MissingSection(&'static str),
    #[error("generated review score out of range: {0}")]
    ScoreRange(String),
    #[error("review generation failed after {attempts} attempts; last error: {last_error}")]
    Unrecoverable { attempts: u32, last_error: String },
    #[error(transparent)]
    Backend(#[from] crate::backend::BackendError),
}

/// A structurally complete generated review: sectioned content plus the four
/// per-axis scores.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratedReview {
    pub content: String,
    pub scores: ReviewScores,
}

const REQUIRED_SECTIONS: [&str; 4] = ["summary", "strengths", "weaknesses", "questions"];

impl GeneratedReview {
    pub fn validate(&self) -> Result<(), PersonaError> {
        if self.content.trim().is_empty() {
            return Err(PersonaError::Schema {
                field: "content".into(),
                message: "content must be non-empty".into(),
            });
        }
        let lowered = self.content.to_lowercase();
        for section in REQUIRED_SECTIONS {
            if !lowered.contains(section) {
                return Err(PersonaError::MissingSection(match section {
                    "summary" => "Summary",
                    "strengths" => "Strengths",
                    "weaknesses" => "Weaknesses",
                    _ => "Questions",
                }));
            }
        }
        let checks = [
            ("Rating", self.scores.rating, 1u8, 10u8),
            ("Soundness", self.scores.soundness, 1, 4),
            ("Presentation", self.scores.presentation, 1, 4),
            ("Contribution", self.scores.contribution, 1, 4),
        ];
        for (name, value, lo, hi) in checks {
            if value < lo || value > hi {
                return Err(PersonaError::ScoreRange(format!("{name} {value} outside {lo}..={hi}")));
            }
        }
        Ok(())
    }
}

fn paper_content_block(paper: &PaperBundle) -> String {
    let mut block = String::new();
    block.push_str(&paper.abstract_text);
    for part in [&paper.main_text, &paper.references, &paper.appendix_summary] {
        if !part.is_empty() {
            block.push_str("\n\n");
            block.push_str(part);
        }
    }
    if !paper.figure_descriptions.is_empty() {
        block.push_str("\n\n");
        block.push_str(&paper.figure_descriptions.join("\n"));
    }
    block
}

/// Builds the generation request: the reviewer system prompt plus the user
/// template with the paper content and persona description substituted.
pub fn assemble_review_prompt(paper: &PaperBundle, persona: &PersonaSpec) -> ChatRequest {
    let user = prompts::GENERATOR_USER_TEMPLATE
        .replace("[Paper Content]", &paper_content_block(paper))
        .replace("[Persona Descriptions]", &persona.description);
    let mut request = role_defaults(BackendRole::Generator);
    request.system_prompt = prompts::GENERATOR_SYSTEM.to_string();
    request.messages.push(ChatMessage::user(user));
    request
}

/// Extracts and validates the `{content, scores}` object from raw output.
pub fn parse_generated_review(raw: &str) -> Result<GeneratedReview, PersonaError> {
    let json = jsonx::extract_object(raw).ok_or(PersonaError::NoJsonObject)?;
    let mut deserializer = serde_json::Deserializer::from_str(&json);
    let review: GeneratedReview = serde_path_to_error::deserialize(&mut deserializer)
        .map_err(|e| PersonaError::Schema {
            field: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    review.validate()?;
    Ok(review)
}

/// Deterministic review id for a (paper, generator, persona) triple.
pub fn review_id_for(paper_id: &str, generator_id: &str, persona_id: &str) -> String {
    format!("{paper_id}__{generator_id}__{persona_id}")
}

/// Generates one review under the given persona, re-prompting on parse
/// failure up to the shared per-call repair bound. The persona id is stored
/// as the weak tag; gold labels stay absent.
pub async fn generate_review(
    backend: &BackendHandle,
    paper: &PaperBundle,
    persona: &PersonaSpec,
    generator_id: &str,
) -> Result<ReviewRecord, PersonaError> {
    let mut request = assemble_review_prompt(paper, persona);
    let mut attempts = 0u32;
    loop {
        let response = backend.complete(&request).await?;
        match parse_generated_review(&response.content) {
            Ok(generated) => {
                return Ok(ReviewRecord {
                    review_id: review_id_for(&paper.paper_id, generator_id, &persona.persona_id),
                    paper_id: paper.paper_id.clone(),
                    generator_id: generator_id.to_string(),
                    persona_id: Some(persona.persona_id.clone()),
                    content: generated.content,
                    scores: Some(generated.scores),
                    gold: None,
                });
            }
            Err(err) => {
                if attempts >= MAX_TOOL_REPAIRS {
                    return Err(PersonaError::Unrecoverable {
                        attempts: attempts + 1,
                        last_error: err.to_string(),
                    });
                }
                attempts += 1;
                request.messages.push(ChatMessage::assistant(response.content));
                request.messages.push(ChatMessage::user(JSON_REPAIR_REMINDER));
            }
        }
    }
}
