//! Shared fixture builders for integration and acceptance tests.

use revaudit_core::corpus::{DefectLabel, PaperBundle, ReviewRecord, ReviewScores};
use revaudit_core::integrator::IntegrateVerdict;
use revaudit_core::toolkit::ToolAction;

pub fn paper(id: &str) -> PaperBundle {
    PaperBundle {
        paper_id: id.to_string(),
        title: format!("Title of {id}"),
        abstract_text: format!("Abstract of {id}: a method is proposed and evaluated."),
        main_text: format!("Main text of {id}. SENTINEL-MAIN-{id}. Sections and experiments."),
        references: "[1] A reference.".to_string(),
        appendix_summary: "Appendix: extra experiments.".to_string(),
        figure_descriptions: vec!["Figure 1: a diagram.".to_string()],
    }
}

pub fn review(id: &str, paper_id: &str) -> ReviewRecord {
    ReviewRecord {
        review_id: id.to_string(),
        paper_id: paper_id.to_string(),
        generator_id: "gen-a".to_string(),
        persona_id: Some("bias".to_string()),
        content: "Summary: ok. Strengths: clear. Weaknesses: the runtime is slightly longer \
                  than baselines, making it unsuitable for deployment. Questions: none."
            .to_string(),
        scores: Some(ReviewScores { rating: 4, soundness: 2, presentation: 3, contribution: 2 }),
        gold: None,
    }
}

/// A mode-A orchestrator directive for the given action.
pub fn tool_call(action: ToolAction) -> String {
    serde_json::json!({
        "tool_name": "malice_defense_tool",
        "action": action.as_str(),
        "content": "segment under analysis",
        "paper_context": "relevant abstract slice",
        "analysis": "N/A"
    })
    .to_string()
}

/// A schema-valid tool output for the tool backend script.
pub fn tool_output_json(action: ToolAction) -> String {
    match action {
        ToolAction::Verify => serde_json::json!({
            "has_factual_error": false,
            "factual_error_count": 0,
            "has_no_evidence_claim": true,
            "no_evidence_claim_count": 1,
            "has_careless_omission": false,
            "careless_omission_count": 0,
            "verification_details": [{
                "claim": "runtime is slightly longer than baselines",
                "defect_type": "no_evidence",
                "evidence": "[Abstract] no runtime comparison is reported",
                "confidence": "medium"
            }]
        })
        .to_string(),
        ToolAction::Correct => serde_json::json!({
            "error_list": [],
            "has_unprofessional_error": false,
            "unprofessional_error_count": 0,
            "confidence": "high"
        })
        .to_string(),
        ToolAction::Complete => serde_json::json!({
            "has_actionable_suggestion": false,
            "actionable_suggestion_count": 0,
            "is_lack_constructive": true,
            "judgment_evidence": "criticism without any modification suggestions",
            "confidence": "high"
        })
        .to_string(),
        ToolAction::Transform => serde_json::json!({
            "has_bias_invalid_content": true,
            "bias_type": "subjective_bias",
            "has_valid_academic_concern": true,
            "judgment_evidence": "overemphasizes a minor runtime flaw",
            "confidence": "high"
        })
        .to_string(),
        ToolAction::Integrate => panic!("integrate output comes from the integrator script"),
    }
}

pub fn verdict_json(defective: bool, labels: &[DefectLabel]) -> String {
    if defective {
        let list = labels.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(", ");
        format!(r#"{{"is_defective":"true","quality_score":2,"defect_type":"{list}"}}"#)
    } else {
        r#"{"is_defective":"false","quality_score":5,"defect_type":"no_deficient"}"#.to_string()
    }
}

/// A mode-B final JSON consistent with the given verdict.
pub fn final_output_json(verdict: &IntegrateVerdict) -> String {
    let defective = verdict.is_defective();
    let labels: Vec<DefectLabel> = if defective { verdict.defect_types().to_vec() } else { vec![] };
    let finding = |on: bool| {
        serde_json::json!({
            "label": on,
            "explain": "quote + verification reason + real tool result",
            "evidence_trace": "malice_defense_tool + action + core output flag"
        })
    };
    let conclusion = if defective {
        labels.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(", ")
    } else {
        "no_deficient".to_string()
    };
    serde_json::json!({
        "classification": u8::from(defective),
        "defect_classification_certainty": {
            "score": if defective { 0.9 } else { 0.1 },
            "explain": "tool results agree with the integrate verdict"
        },
        "defect_severity_level": {
            "score": if defective { 3 } else { 0 },
            "explain": "severity grounded in verified defects"
        },
        "result": {
            "unprofessional": finding(labels.contains(&DefectLabel::Unprofessional)),
            "bias": finding(labels.contains(&DefectLabel::Bias)),
            "information_error": finding(labels.contains(&DefectLabel::InformationError)),
            "careless": finding(labels.contains(&DefectLabel::Careless)),
            "no_evidence": finding(labels.contains(&DefectLabel::NoEvidence)),
            "lack_constructive": finding(labels.contains(&DefectLabel::LackConstructive))
        },
        "tool_call_summary": [{
            "action": "integrate",
            "call_purpose": "final classification",
            "core_output": "verdict received",
            "quota_consumed": 1
        }],
        "final_conclusion": conclusion,
        "valid_academic_suggestions": "none beyond the verified concerns",
        "review_optimization_suggestions": if defective {
            "ground the runtime claim in measured data"
        } else {
            "No optimization needed, the review is compliant and high-quality"
        }
    })
    .to_string()
}
