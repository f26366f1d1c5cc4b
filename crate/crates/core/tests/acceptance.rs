//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! 1. Enforcement over >=1000 randomized adversarial scripted orchestrators.
//! 2. Schema suite: valid fixtures accepted, single-field mutants rejected.
//! 3. Metric computations match brute-force oracles on random instances.
//! 4. Published-value identities (F1 from P/R, degenerate Jaccard/G-Mean).
//! 5. Partition identity on the 50x4x9 synthetic corpus.
//! 6. Persona-consistency filter matches the exhaustive truth table.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use common::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revaudit_core::backend::ScriptedBackend;
use revaudit_core::corpus::{
    canonical_personas, partition, DefectLabel, PersonaKind, ReviewRecord,
};
use revaudit_core::integrator::{
    parse_integrate_verdict, persona_consistent, IntegrateVerdict,
};
use revaudit_core::metrics::{
    binary_metrics, f1_from_precision_recall, multilabel_metrics, robustness_metrics,
    separability, DefectSet,
};
use revaudit_core::orchestrator::{
    run_detection, validate_final_output, DetectionConfig, SessionBackends,
};
use revaudit_core::toolkit::{no_retrieval, parse_tool_output, ToolAction};

// ---------------------------------------------------------------------------
// Criterion 1: enforcement suite
// ---------------------------------------------------------------------------

const BUDGET: u32 = 8;
const REGEN_CAP: u32 = 4;
const REJECTED_LIMIT: u32 = 8;
const FACTUAL_CAP: u32 = 4;

/// Independent admission oracle, written from the quota rules directly.
fn oracle_admit(spent: u32, vc: u32, integrate_done: bool, action: ToolAction) -> bool {
    if integrate_done || spent >= BUDGET {
        return false;
    }
    if action != ToolAction::Integrate && BUDGET - spent <= 1 {
        return false;
    }
    if matches!(action, ToolAction::Verify | ToolAction::Correct) && vc >= FACTUAL_CAP {
        return false;
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Expected {
    Success,
    RegenCapFailure,
    RejectedLimitFailure,
}

struct AdversarialPlan {
    orchestrator: Vec<String>,
    tool: Vec<String>,
    integrator: Vec<String>,
    expected: Expected,
    expected_spent: u32,
    expected_history: usize,
    expected_regen: u32,
    expected_integrate: bool,
    event_mix: BTreeMap<&'static str, usize>,
}

fn random_verdict(rng: &mut ChaCha8Rng) -> IntegrateVerdict {
    if rng.gen_bool(0.4) {
        IntegrateVerdict::new(false, if rng.gen_bool(0.5) { 4 } else { 5 }, vec![DefectLabel::NoDeficient])
            .unwrap()
    } else {
        let mut labels: Vec<DefectLabel> = DefectLabel::DEFECTS
            .into_iter()
            .filter(|_| rng.gen_bool(0.4))
            .collect();
        if labels.is_empty() {
            labels.push(DefectLabel::Bias);
        }
        labels.shuffle(rng);
        IntegrateVerdict::new(true, rng.gen_range(1..=3), labels).unwrap()
    }
}

fn invalid_final_json(verdict: &IntegrateVerdict) -> String {
    let mut value: serde_json::Value =
        serde_json::from_str(&final_output_json(verdict)).unwrap();
    // Certainty lands in the wrong band for the classification.
    value["defect_classification_certainty"]["score"] =
        serde_json::json!(if verdict.is_defective() { 0.2 } else { 0.8 });
    value.to_string()
}

fn mixed_mode_response(verdict: &IntegrateVerdict) -> String {
    format!("{}\n{}", tool_call(ToolAction::Verify), final_output_json(verdict))
}

fn build_plan(rng: &mut ChaCha8Rng) -> AdversarialPlan {
    let verdict = random_verdict(rng);
    let verdict_text = if verdict.is_defective() {
        verdict_json(true, verdict.defect_types())
    } else {
        verdict_json(false, &[])
    };

    let mut plan = AdversarialPlan {
        orchestrator: Vec::new(),
        tool: Vec::new(),
        integrator: Vec::new(),
        expected: Expected::Success,
        expected_spent: 0,
        expected_history: 0,
        expected_regen: 0,
        expected_integrate: false,
        event_mix: BTreeMap::new(),
    };

    let mut spent = 0u32;
    let mut vc = 0u32;
    let mut regen = 0u32;
    let mut rejected = 0u32;
    let mut integrate_done = false;

    let note = |plan: &mut AdversarialPlan, kind: &'static str| {
        *plan.event_mix.entry(kind).or_insert(0) += 1;
    };

    // A regeneration-class event (premature B, mixed mode, garbage, missing
    // parameter). Returns true when the session terminates in failure.
    macro_rules! regen_event {
        ($plan:expr, $entry:expr, $kind:expr) => {{
            note($plan, $kind);
            $plan.orchestrator.push($entry);
            if regen >= REGEN_CAP {
                $plan.expected = Expected::RegenCapFailure;
                true
            } else {
                regen += 1;
                false
            }
        }};
    }

    // A rejected tool call. Returns true when the session terminates.
    macro_rules! rejected_event {
        ($plan:expr, $entry:expr, $kind:expr) => {{
            note($plan, $kind);
            $plan.orchestrator.push($entry);
            if rejected >= REJECTED_LIMIT {
                $plan.expected = Expected::RejectedLimitFailure;
                true
            } else {
                rejected += 1;
                false
            }
        }};
    }

    let max_events = rng.gen_range(3..28);
    let mut terminated = false;
    for _ in 0..max_events {
        if integrate_done {
            match rng.gen_range(0..4) {
                0 => {
                    // Tool call after integrate: always rejected.
                    let action = *[
                        ToolAction::Verify,
                        ToolAction::Correct,
                        ToolAction::Complete,
                        ToolAction::Transform,
                        ToolAction::Integrate,
                    ]
                    .choose(rng)
                    .unwrap();
                    if rejected_event!(&mut plan, tool_call(action), "post_integrate_call") {
                        terminated = true;
                        break;
                    }
                }
                1 => {
                    if regen_event!(&mut plan, invalid_final_json(&verdict), "invalid_final") {
                        terminated = true;
                        break;
                    }
                }
                2 => {
                    if regen_event!(&mut plan, "no directive here".to_string(), "garbage") {
                        terminated = true;
                        break;
                    }
                }
                _ => {
                    note(&mut plan, "valid_final");
                    plan.orchestrator.push(final_output_json(&verdict));
                    plan.expected = Expected::Success;
                    terminated = true;
                    break;
                }
            }
        } else {
            match rng.gen_range(0..8) {
                0 | 1 => {
                    // Analysis tool call, admitted or rejected per the rules.
                    let action = *ToolAction::ANALYSIS.choose(rng).unwrap();
                    if oracle_admit(spent, vc, integrate_done, action) {
                        note(&mut plan, "admitted_call");
                        plan.orchestrator.push(tool_call(action));
                        plan.tool.push(tool_output_json(action));
                        spent += 1;
                        if matches!(action, ToolAction::Verify | ToolAction::Correct) {
                            vc += 1;
                        }
                        plan.expected_history += 1;
                    } else if rejected_event!(&mut plan, tool_call(action), "over_budget_call") {
                        terminated = true;
                        break;
                    }
                }
                2 => {
                    // Deliberate cap violation: force enough verify calls
                    // first is not needed; just attempt verify when capped,
                    // otherwise this behaves as a normal call.
                    let action =
                        if rng.gen_bool(0.5) { ToolAction::Verify } else { ToolAction::Correct };
                    if oracle_admit(spent, vc, integrate_done, action) {
                        note(&mut plan, "admitted_call");
                        plan.orchestrator.push(tool_call(action));
                        plan.tool.push(tool_output_json(action));
                        spent += 1;
                        vc += 1;
                        plan.expected_history += 1;
                    } else if rejected_event!(&mut plan, tool_call(action), "cap_violation") {
                        terminated = true;
                        break;
                    }
                }
                3 => {
                    if regen_event!(
                        &mut plan,
                        final_output_json(&verdict),
                        "premature_mode_b"
                    ) {
                        terminated = true;
                        break;
                    }
                }
                4 => {
                    if regen_event!(&mut plan, mixed_mode_response(&verdict), "mixed_mode") {
                        terminated = true;
                        break;
                    }
                }
                5 => {
                    if regen_event!(&mut plan, "free-form musing, no JSON".to_string(), "garbage")
                    {
                        terminated = true;
                        break;
                    }
                }
                6 => {
                    let missing =
                        r#"{"action":"verify","content":"c","analysis":"N/A"}"#.to_string();
                    if regen_event!(&mut plan, missing, "missing_parameter") {
                        terminated = true;
                        break;
                    }
                }
                _ => {
                    // Integrate: admissible whenever it has not run yet.
                    assert!(oracle_admit(spent, vc, integrate_done, ToolAction::Integrate));
                    note(&mut plan, "integrate_call");
                    plan.orchestrator.push(tool_call(ToolAction::Integrate));
                    plan.integrator.push(verdict_text.clone());
                    spent += 1;
                    plan.expected_history += 1;
                    integrate_done = true;
                }
            }
        }
    }

    if !terminated {
        // Close the session cleanly: integrate (always admissible here) then
        // the valid final JSON.
        if !integrate_done {
            plan.orchestrator.push(tool_call(ToolAction::Integrate));
            plan.integrator.push(verdict_text.clone());
            spent += 1;
            plan.expected_history += 1;
            integrate_done = true;
        }
        plan.orchestrator.push(final_output_json(&verdict));
        plan.expected = Expected::Success;
    }

    plan.expected_spent = spent;
    plan.expected_regen = regen;
    plan.expected_integrate = integrate_done;
    plan
}

#[tokio::test]
async fn acceptance_1_enforcement_suite() {
    let started = Instant::now();
    let config = DetectionConfig { budget: BUDGET, regen_cap: REGEN_CAP };
    let paper = paper("p-accept");
    let review = review("r-accept", "p-accept");

    let mut aggregate_mix: BTreeMap<&'static str, usize> = BTreeMap::new();
    let n_sessions = 1000;
    for i in 0..n_sessions {
        let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0000 + i);
        let plan = build_plan(&mut rng);
        for (kind, count) in &plan.event_mix {
            *aggregate_mix.entry(kind).or_insert(0) += count;
        }

        let backends = SessionBackends {
            orchestrator: ScriptedBackend::handle(plan.orchestrator.clone()),
            tool: ScriptedBackend::handle(plan.tool.clone()),
            integrator: ScriptedBackend::handle(plan.integrator.clone()),
            retrieval: no_retrieval(),
        };
        let outcome = run_detection(&backends, &paper, &review, &config).await;

        let session = match &outcome {
            Ok((_, session)) => session,
            Err(failure) => &failure.session,
        };

        // Safety invariants, success or failure.
        let integrate_count = session
            .history
            .iter()
            .filter(|t| t.action == ToolAction::Integrate)
            .count();
        assert!(integrate_count <= 1, "session {i}: more than one integrate");
        assert!(session.ledger.spent() <= BUDGET, "session {i}: quota overrun");
        assert!(session.history.len() <= BUDGET as usize, "session {i}: history overrun");
        assert!(session.regeneration_count <= REGEN_CAP, "session {i}: regen overrun");

        // Replay every recorded debit through the independent rule oracle.
        let mut vc = 0u32;
        let mut done = false;
        for (spent, action) in session.ledger.debits.iter().enumerate() {
            assert!(
                oracle_admit(spent as u32, vc, done, *action),
                "session {i}: inadmissible debit {action} after {spent} debits"
            );
            if matches!(action, ToolAction::Verify | ToolAction::Correct) {
                vc += 1;
            }
            if *action == ToolAction::Integrate {
                done = true;
            }
        }

        // Outcome and bookkeeping must match the simulation exactly.
        assert_eq!(session.ledger.spent(), plan.expected_spent, "session {i}: spent");
        assert_eq!(session.history.len(), plan.expected_history, "session {i}: history");
        assert_eq!(session.regeneration_count, plan.expected_regen, "session {i}: regen");
        assert_eq!(session.integrate_done, plan.expected_integrate, "session {i}: integrate");
        match plan.expected {
            Expected::Success => {
                let (output, session) = outcome.as_ref().expect("plan expected success");
                assert!(session.integrate_done);
                assert_eq!(integrate_count, 1, "session {i}: exactly one integrate");
                assert_eq!(
                    session.history.last().unwrap().action,
                    ToolAction::Integrate,
                    "session {i}: integrate must be the last history entry"
                );
                let verdict = session.integrate_result.as_ref().unwrap();
                assert_eq!(output.classification, u8::from(verdict.is_defective()));
            }
            Expected::RegenCapFailure => {
                let failure = outcome.as_ref().expect_err("plan expected regen failure");
                assert!(
                    matches!(
                        failure.kind,
                        revaudit_core::orchestrator::FailureKind::RegenerationCapExceeded { .. }
                    ),
                    "session {i}: wrong failure kind: {}",
                    failure.kind
                );
            }
            Expected::RejectedLimitFailure => {
                let failure = outcome.as_ref().expect_err("plan expected rejection failure");
                assert!(
                    matches!(
                        failure.kind,
                        revaudit_core::orchestrator::FailureKind::ExcessiveRejectedCalls { .. }
                    ),
                    "session {i}: wrong failure kind: {}",
                    failure.kind
                );
            }
        }
    }

    // The adversarial mix must actually exercise every event family.
    for kind in [
        "premature_mode_b",
        "mixed_mode",
        "over_budget_call",
        "cap_violation",
        "garbage",
        "missing_parameter",
        "invalid_final",
        "post_integrate_call",
    ] {
        assert!(
            aggregate_mix.get(kind).copied().unwrap_or(0) > 0,
            "adversarial mix never produced {kind}"
        );
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "enforcement suite took {elapsed:?}");
    println!(
        "ACCEPTANCE 1 (enforcement suite, {n_sessions} adversarial sessions, {:?}): PASS",
        elapsed
    );
}

// ---------------------------------------------------------------------------
// Criterion 2: schema suite
// ---------------------------------------------------------------------------

type Mutant = (String, serde_json::Value);

fn json_type(v: &serde_json::Value) -> &'static str {
    match v {
        serde_json::Value::Null => "null",
        serde_json::Value::Bool(_) => "bool",
        serde_json::Value::Number(_) => "number",
        serde_json::Value::String(_) => "string",
        serde_json::Value::Array(_) => "array",
        serde_json::Value::Object(_) => "object",
    }
}

fn node_paths(value: &serde_json::Value, prefix: Vec<String>, out: &mut Vec<Vec<String>>) {
    match value {
        serde_json::Value::Object(map) => {
            for (key, child) in map {
                let mut path = prefix.clone();
                path.push(key.clone());
                out.push(path.clone());
                node_paths(child, path, out);
            }
        }
        serde_json::Value::Array(items) => {
            for (idx, child) in items.iter().enumerate() {
                let mut path = prefix.clone();
                path.push(idx.to_string());
                node_paths(child, path, out);
            }
        }
        _ => {}
    }
}

fn get_path<'a>(value: &'a serde_json::Value, path: &[String]) -> &'a serde_json::Value {
    let mut cur = value;
    for seg in path {
        cur = match cur {
            serde_json::Value::Object(map) => &map[seg],
            serde_json::Value::Array(items) => &items[seg.parse::<usize>().unwrap()],
            _ => unreachable!(),
        };
    }
    cur
}

fn set_path(value: &mut serde_json::Value, path: &[String], new_value: serde_json::Value) {
    let mut cur = value;
    for (i, seg) in path.iter().enumerate() {
        let last = i == path.len() - 1;
        match cur {
            serde_json::Value::Object(map) => {
                if last {
                    map.insert(seg.clone(), new_value);
                    return;
                }
                cur = map.get_mut(seg).unwrap();
            }
            serde_json::Value::Array(items) => {
                let idx = seg.parse::<usize>().unwrap();
                if last {
                    items[idx] = new_value;
                    return;
                }
                cur = &mut items[idx];
            }
            _ => unreachable!(),
        }
    }
}

fn remove_path(value: &mut serde_json::Value, path: &[String]) -> bool {
    let (last, parent_path) = path.split_last().unwrap();
    let mut cur = value;
    for seg in parent_path {
        cur = match cur {
            serde_json::Value::Object(map) => map.get_mut(seg).unwrap(),
            serde_json::Value::Array(items) => &mut items[seg.parse::<usize>().unwrap()],
            _ => unreachable!(),
        };
    }
    match cur {
        serde_json::Value::Object(map) => {
            map.remove(last);
            true
        }
        // Array-element removal can stay schema-valid; skip it.
        serde_json::Value::Array(_) => false,
        _ => unreachable!(),
    }
}

/// Single-field mutants guaranteed invalid by construction: required-key
/// removal, JSON-type corruption, and unknown-key insertion (all fields are
/// required and every schema rejects unknown keys). `polymorphic` names
/// fields that legitimately accept more than one JSON type; type corruption
/// is skipped for them.
fn generic_mutants(fixture: &serde_json::Value, polymorphic: &[&str]) -> Vec<Mutant> {
    let mut out = Vec::new();
    let mut paths = Vec::new();
    node_paths(fixture, Vec::new(), &mut paths);
    let replacements = [
        serde_json::json!(null),
        serde_json::json!(-7),
        serde_json::json!("zzz_bogus_value"),
        serde_json::json!([1]),
        serde_json::json!({"zzz": 1}),
        serde_json::json!(true),
    ];
    for path in &paths {
        let original_type = json_type(get_path(fixture, path));
        let mut removed = fixture.clone();
        if remove_path(&mut removed, path) {
            out.push((format!("remove {}", path.join(".")), removed));
        }
        let is_polymorphic =
            path.last().map(|leaf| polymorphic.contains(&leaf.as_str())).unwrap_or(false);
        for repl in &replacements {
            if is_polymorphic && matches!(repl, serde_json::Value::Bool(_)) {
                continue;
            }
            if json_type(repl) != original_type {
                let mut mutated = fixture.clone();
                set_path(&mut mutated, path, repl.clone());
                out.push((
                    format!("set {} = {repl}", path.join(".")),
                    mutated,
                ));
            }
        }
    }
    // Unknown key in every object node, including the root.
    let mut object_paths: Vec<Vec<String>> = vec![Vec::new()];
    for path in &paths {
        if json_type(get_path(fixture, path)) == "object" {
            object_paths.push(path.clone());
        }
    }
    for path in object_paths {
        let mut mutated = fixture.clone();
        let target = if path.is_empty() {
            &mut mutated
        } else {
            let mut cur = &mut mutated;
            for seg in &path {
                cur = match cur {
                    serde_json::Value::Object(map) => map.get_mut(seg).unwrap(),
                    serde_json::Value::Array(items) => &mut items[seg.parse::<usize>().unwrap()],
                    _ => unreachable!(),
                };
            }
            cur
        };
        target
            .as_object_mut()
            .unwrap()
            .insert("zzz_unknown_key".to_string(), serde_json::json!(1));
        out.push((format!("unknown key at {}", path.join(".")), mutated));
    }
    out
}

fn curated(fixture: &serde_json::Value, edits: &[(&[&str], serde_json::Value)]) -> Vec<Mutant> {
    edits
        .iter()
        .map(|(path, value)| {
            let mut mutated = fixture.clone();
            let segs: Vec<String> = path.iter().map(|s| s.to_string()).collect();
            set_path(&mut mutated, &segs, value.clone());
            (format!("set {} = {value}", path.join(".")), mutated)
        })
        .collect()
}

fn verify_fixture() -> serde_json::Value {
    serde_json::json!({
        "has_factual_error": true,
        "factual_error_count": 2,
        "has_no_evidence_claim": true,
        "no_evidence_claim_count": 1,
        "has_careless_omission": false,
        "careless_omission_count": 0,
        "verification_details": [
            {"claim": "c1", "defect_type": "factual_error", "evidence": "[Abstract] e1", "confidence": "high"},
            {"claim": "c2", "defect_type": "factual_error", "evidence": "[Section 3] e2", "confidence": "medium"},
            {"claim": "c3", "defect_type": "no_evidence", "evidence": "e3", "confidence": "low"},
            {"claim": "c4", "defect_type": "no_defect", "evidence": "e4", "confidence": "high"}
        ]
    })
}

fn correct_fixture() -> serde_json::Value {
    serde_json::json!({
        "error_list": [
            {"error_content": "e1", "error_type": "comprehension_error",
             "error_root_cause": "r1", "is_unprofessional_error": true},
            {"error_content": "e2", "error_type": "factual_data_error",
             "error_root_cause": "r2", "is_unprofessional_error": false},
            {"error_content": "e3", "error_type": "logic_error",
             "error_root_cause": "r3", "is_unprofessional_error": false}
        ],
        "has_unprofessional_error": true,
        "unprofessional_error_count": 1,
        "confidence": "high"
    })
}

fn complete_fixtures() -> Vec<serde_json::Value> {
    vec![
        serde_json::json!({
            "has_actionable_suggestion": true,
            "actionable_suggestion_count": 2,
            "is_lack_constructive": false,
            "judgment_evidence": "two concrete fixes offered",
            "confidence": "high"
        }),
        serde_json::json!({
            "has_actionable_suggestion": false,
            "actionable_suggestion_count": 0,
            "is_lack_constructive": true,
            "judgment_evidence": "criticism only, no suggestions",
            "confidence": "medium"
        }),
    ]
}

fn transform_fixtures() -> Vec<serde_json::Value> {
    vec![
        serde_json::json!({
            "has_bias_invalid_content": true,
            "bias_type": "hostile_derogation",
            "has_valid_academic_concern": false,
            "judgment_evidence": "trivial repackaging quote",
            "confidence": "high"
        }),
        serde_json::json!({
            "has_bias_invalid_content": false,
            "bias_type": "none",
            "has_valid_academic_concern": true,
            "judgment_evidence": "No bias/invalid content found",
            "confidence": "medium"
        }),
    ]
}

fn verdict_fixtures() -> Vec<serde_json::Value> {
    vec![
        serde_json::json!({"is_defective": "true", "quality_score": 2,
                           "defect_type": "bias, information_error"}),
        serde_json::json!({"is_defective": "false", "quality_score": 5,
                           "defect_type": "no_deficient"}),
        serde_json::json!({"is_defective": true, "quality_score": 1,
                           "defect_type": "careless"}),
    ]
}

#[test]
fn acceptance_2_schema_suite() {
    let started = Instant::now();
    let mut per_schema: BTreeMap<&'static str, (usize, usize)> = BTreeMap::new();

    let mut run_schema = |name: &'static str,
                          fixtures: Vec<serde_json::Value>,
                          curated_sets: Vec<Vec<Mutant>>,
                          polymorphic: &[&str],
                          accepts: &dyn Fn(&str) -> bool| {
        let mut mutants = 0usize;
        for fixture in &fixtures {
            assert!(
                accepts(&fixture.to_string()),
                "{name}: valid fixture rejected: {fixture}"
            );
        }
        for (fixture, curated_list) in fixtures.iter().zip(
            curated_sets.into_iter().chain(std::iter::repeat(Vec::new())),
        ) {
            for (desc, mutant) in generic_mutants(fixture, polymorphic)
                .into_iter()
                .chain(curated_list)
            {
                assert!(
                    !accepts(&mutant.to_string()),
                    "{name}: mutant accepted: {desc}"
                );
                mutants += 1;
            }
        }
        per_schema.insert(name, (fixtures.len(), mutants));
        assert!(mutants >= 50, "{name}: only {mutants} mutants generated");
    };

    run_schema(
        "verify",
        vec![verify_fixture()],
        vec![curated(
            &verify_fixture(),
            &[
                (&["factual_error_count"], serde_json::json!(3)),
                (&["factual_error_count"], serde_json::json!(1)),
                (&["factual_error_count"], serde_json::json!(0)),
                (&["no_evidence_claim_count"], serde_json::json!(2)),
                (&["careless_omission_count"], serde_json::json!(1)),
                (&["has_factual_error"], serde_json::json!(false)),
                (&["has_no_evidence_claim"], serde_json::json!(false)),
                (&["has_careless_omission"], serde_json::json!(true)),
                (&["verification_details", "0", "defect_type"], serde_json::json!("zzz")),
                (&["verification_details", "0", "defect_type"], serde_json::json!("no_defect")),
                (&["verification_details", "2", "defect_type"], serde_json::json!("factual_error")),
                (&["verification_details", "1", "confidence"], serde_json::json!("High")),
                (&["verification_details", "1", "confidence"], serde_json::json!("certain")),
                (&["factual_error_count"], serde_json::json!(2.5)),
                (&["factual_error_count"], serde_json::json!(4294967296u64 * 4)),
            ],
        )],
        &[],
        &|raw| parse_tool_output(ToolAction::Verify, raw).is_ok(),
    );

    run_schema(
        "correct",
        vec![correct_fixture()],
        vec![curated(
            &correct_fixture(),
            &[
                (&["unprofessional_error_count"], serde_json::json!(2)),
                (&["unprofessional_error_count"], serde_json::json!(0)),
                (&["has_unprofessional_error"], serde_json::json!(false)),
                (&["error_list", "0", "is_unprofessional_error"], serde_json::json!(false)),
                (&["error_list", "1", "is_unprofessional_error"], serde_json::json!(true)),
                (&["error_list", "2", "is_unprofessional_error"], serde_json::json!(true)),
                (&["error_list", "0", "error_type"], serde_json::json!("zzz")),
                (&["error_list", "1", "error_type"], serde_json::json!("Factual_Data_Error")),
                (&["confidence"], serde_json::json!("very high")),
                (&["confidence"], serde_json::json!("HIGH")),
                (&["unprofessional_error_count"], serde_json::json!(1.5)),
            ],
        )],
        &[],
        &|raw| parse_tool_output(ToolAction::Correct, raw).is_ok(),
    );

    let complete = complete_fixtures();
    run_schema(
        "complete",
        complete.clone(),
        vec![
            curated(
                &complete[0],
                &[
                    (&["actionable_suggestion_count"], serde_json::json!(0)),
                    (&["has_actionable_suggestion"], serde_json::json!(false)),
                    (&["is_lack_constructive"], serde_json::json!(true)),
                    (&["confidence"], serde_json::json!("certain")),
                    (&["confidence"], serde_json::json!("High")),
                    (&["actionable_suggestion_count"], serde_json::json!(1.5)),
                ],
            ),
            curated(
                &complete[1],
                &[
                    (&["actionable_suggestion_count"], serde_json::json!(3)),
                    (&["has_actionable_suggestion"], serde_json::json!(true)),
                    (&["confidence"], serde_json::json!("")),
                ],
            ),
        ],
        &[],
        &|raw| parse_tool_output(ToolAction::Complete, raw).is_ok(),
    );

    let transform = transform_fixtures();
    run_schema(
        "transform",
        transform.clone(),
        vec![
            curated(
                &transform[0],
                &[
                    (&["bias_type"], serde_json::json!("none")),
                    (&["bias_type"], serde_json::json!("zzz")),
                    (&["bias_type"], serde_json::json!("Hostile_Derogation")),
                    (&["has_bias_invalid_content"], serde_json::json!(false)),
                    (&["confidence"], serde_json::json!("certain")),
                ],
            ),
            curated(
                &transform[1],
                &[
                    (&["bias_type"], serde_json::json!("subjective_bias")),
                    (&["has_bias_invalid_content"], serde_json::json!(true)),
                ],
            ),
        ],
        &[],
        &|raw| parse_tool_output(ToolAction::Transform, raw).is_ok(),
    );

    let verdicts = verdict_fixtures();
    run_schema(
        "integrate_verdict",
        verdicts.clone(),
        vec![
            curated(
                &verdicts[0],
                &[
                    (&["is_defective"], serde_json::json!("yes")),
                    (&["quality_score"], serde_json::json!(0)),
                    (&["quality_score"], serde_json::json!(4)),
                    (&["quality_score"], serde_json::json!(6)),
                    (&["defect_type"], serde_json::json!("")),
                    (&["defect_type"], serde_json::json!("no_deficient")),
                    (&["defect_type"], serde_json::json!("bias, zzz_bogus")),
                ],
            ),
            curated(
                &verdicts[1],
                &[
                    (&["quality_score"], serde_json::json!(3)),
                    (&["defect_type"], serde_json::json!("bias")),
                    (&["defect_type"], serde_json::json!("no_deficient, bias")),
                    (&["is_defective"], serde_json::json!("False")),
                ],
            ),
            curated(&verdicts[2], &[(&["quality_score"], serde_json::json!(5))]),
        ],
        &["is_defective"],
        &|raw| parse_integrate_verdict(raw).is_ok(),
    );

    // Final output is validated against its matching integrate verdict.
    let defective = IntegrateVerdict::new(
        true,
        2,
        vec![DefectLabel::Bias, DefectLabel::NoEvidence],
    )
    .unwrap();
    let clean = IntegrateVerdict::new(false, 5, vec![DefectLabel::NoDeficient]).unwrap();
    let final_defective: serde_json::Value =
        serde_json::from_str(&final_output_json(&defective)).unwrap();
    let final_clean: serde_json::Value =
        serde_json::from_str(&final_output_json(&clean)).unwrap();

    {
        let name = "final_output";
        let mut mutants = 0usize;
        for (fixture, verdict) in [(&final_defective, &defective), (&final_clean, &clean)] {
            assert!(
                validate_final_output(&fixture.to_string(), verdict).is_ok(),
                "{name}: valid fixture rejected"
            );
            let mut all = generic_mutants(fixture, &[]);
            if verdict.is_defective() {
                all.extend(curated(
                    fixture,
                    &[
                        (&["classification"], serde_json::json!(0)),
                        (&["classification"], serde_json::json!(2)),
                        (&["defect_classification_certainty", "score"], serde_json::json!(0.3)),
                        (&["defect_classification_certainty", "score"], serde_json::json!(0.55)),
                        (&["defect_classification_certainty", "score"], serde_json::json!(1.5)),
                        (&["defect_severity_level", "score"], serde_json::json!(6)),
                        (&["final_conclusion"], serde_json::json!("bias")),
                        (&["final_conclusion"], serde_json::json!("bias, zzz")),
                        (&["final_conclusion"], serde_json::json!("bias, bias, no_evidence")),
                        (&["final_conclusion"], serde_json::json!("no_deficient")),
                        (&["result", "bias", "label"], serde_json::json!(false)),
                        (&["result", "careless", "label"], serde_json::json!(true)),
                        (&["tool_call_summary", "0", "action"], serde_json::json!("zzz")),
                    ],
                ));
            } else {
                all.extend(curated(
                    fixture,
                    &[
                        (&["classification"], serde_json::json!(1)),
                        (&["defect_classification_certainty", "score"], serde_json::json!(0.8)),
                        (&["defect_severity_level", "score"], serde_json::json!(2)),
                        (&["final_conclusion"], serde_json::json!("bias")),
                        (&["final_conclusion"], serde_json::json!("")),
                    ],
                ));
            }
            for (desc, mutant) in all {
                assert!(
                    validate_final_output(&mutant.to_string(), verdict).is_err(),
                    "{name}: mutant accepted: {desc}"
                );
                mutants += 1;
            }
        }
        per_schema.insert(name, (2, mutants));
        assert!(mutants >= 50, "{name}: only {mutants} mutants generated");
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "schema suite took {elapsed:?}");
    let summary: Vec<String> = per_schema
        .iter()
        .map(|(name, (fixtures, mutants))| format!("{name}: {fixtures} fixtures/{mutants} mutants"))
        .collect();
    println!(
        "ACCEPTANCE 2 (schema suite, {}; {elapsed:?}): PASS",
        summary.join(", ")
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: metric oracle equivalence
// ---------------------------------------------------------------------------

const TOL: f64 = 1e-12;

fn oracle_binary(pred: &[u8], gold: &[u8]) -> (f64, f64, f64, f64) {
    let n = pred.len() as f64;
    let mut tp = 0.0;
    let mut fp = 0.0;
    let mut tn = 0.0;
    let mut fn_count = 0.0;
    for i in 0..pred.len() {
        match (pred[i], gold[i]) {
            (1, 1) => tp += 1.0,
            (1, 0) => fp += 1.0,
            (0, 0) => tn += 1.0,
            _ => fn_count += 1.0,
        }
    }
    let acc = (tp + tn) / n;
    let p = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
    let r = if tp + fn_count > 0.0 { tp / (tp + fn_count) } else { 0.0 };
    let f1 = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
    (acc, p, r, f1)
}

fn oracle_multilabel(pred: &[DefectSet], gold: &[DefectSet]) -> (f64, f64, f64, f64) {
    let n = pred.len() as f64;
    let mut jaccard = 0.0;
    for i in 0..pred.len() {
        let inter = pred[i].intersection(&gold[i]).count() as f64;
        let union = pred[i].union(&gold[i]).count() as f64;
        jaccard += if union == 0.0 { 1.0 } else { inter / union };
    }
    jaccard /= n;

    let mut micro_tp = 0.0;
    let mut micro_fp = 0.0;
    let mut micro_fn = 0.0;
    let mut f1s = Vec::new();
    let mut weights = Vec::new();
    for label in DefectLabel::DEFECTS {
        let mut tp = 0.0;
        let mut fp = 0.0;
        let mut fn_count = 0.0;
        for i in 0..pred.len() {
            let p = pred[i].contains(&label);
            let g = gold[i].contains(&label);
            if p && g {
                tp += 1.0;
            } else if p {
                fp += 1.0;
            } else if g {
                fn_count += 1.0;
            }
        }
        micro_tp += tp;
        micro_fp += fp;
        micro_fn += fn_count;
        let prec = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
        let rec = if tp + fn_count > 0.0 { tp / (tp + fn_count) } else { 0.0 };
        f1s.push(if prec + rec > 0.0 { 2.0 * prec * rec / (prec + rec) } else { 0.0 });
        weights.push(tp + fn_count);
    }
    let micro_p = if micro_tp + micro_fp > 0.0 { micro_tp / (micro_tp + micro_fp) } else { 0.0 };
    let micro_r = if micro_tp + micro_fn > 0.0 { micro_tp / (micro_tp + micro_fn) } else { 0.0 };
    let micro = if micro_p + micro_r > 0.0 {
        2.0 * micro_p * micro_r / (micro_p + micro_r)
    } else {
        0.0
    };
    let macro_f1 = f1s.iter().sum::<f64>() / 6.0;
    let wsum: f64 = weights.iter().sum();
    let weighted = if wsum == 0.0 {
        0.0
    } else {
        f1s.iter().zip(&weights).map(|(f, w)| f * w).sum::<f64>() / wsum
    };
    (jaccard, micro, macro_f1, weighted)
}

fn oracle_robustness(pred: &[u8], gold: &[u8]) -> (f64, f64, f64) {
    let mut tp = 0.0f64;
    let mut fp = 0.0;
    let mut tn = 0.0;
    let mut fn_count = 0.0;
    for i in 0..pred.len() {
        match (pred[i], gold[i]) {
            (1, 1) => tp += 1.0,
            (1, 0) => fp += 1.0,
            (0, 0) => tn += 1.0,
            _ => fn_count += 1.0,
        }
    }
    let tpr = if tp + fn_count > 0.0 { tp / (tp + fn_count) } else { 0.0 };
    let tnr = if tn + fp > 0.0 { tn / (tn + fp) } else { 0.0 };
    let denom = ((tp + fp) * (tp + fn_count) * (tn + fp) * (tn + fn_count)).sqrt();
    let mcc = if denom == 0.0 { 0.0 } else { (tp * tn - fp * fn_count) / denom };
    ((tpr + tnr) / 2.0, (tpr * tnr).sqrt(), mcc)
}

#[test]
fn acceptance_3_metric_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E5);
    let instances = 200;

    for case in 0..instances {
        let n = rng.gen_range(1..120);
        let pred: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let gold: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        let m = binary_metrics(&pred, &gold).unwrap();
        let (acc, p, r, f1) = oracle_binary(&pred, &gold);
        assert!((m.accuracy - acc).abs() < TOL, "binary acc case {case}");
        assert!((m.precision - p).abs() < TOL, "binary precision case {case}");
        assert!((m.recall - r).abs() < TOL, "binary recall case {case}");
        assert!((m.f1 - f1).abs() < TOL, "binary f1 case {case}");

        let rob = robustness_metrics(&pred, &gold).unwrap();
        let (bacc, gmean, mcc) = oracle_robustness(&pred, &gold);
        assert!((rob.balanced_accuracy - bacc).abs() < TOL, "bacc case {case}");
        assert!((rob.g_mean - gmean).abs() < TOL, "gmean case {case}");
        assert!((rob.mcc - mcc).abs() < TOL, "mcc case {case}");
    }

    for case in 0..instances {
        let n = rng.gen_range(1..80);
        let rand_set = |rng: &mut ChaCha8Rng| -> DefectSet {
            DefectLabel::DEFECTS.into_iter().filter(|_| rng.gen_bool(0.3)).collect()
        };
        let pred: Vec<DefectSet> = (0..n).map(|_| rand_set(&mut rng)).collect();
        let gold: Vec<DefectSet> = (0..n).map(|_| rand_set(&mut rng)).collect();
        let m = multilabel_metrics(&pred, &gold).unwrap();
        let (jaccard, micro, macro_f1, weighted) = oracle_multilabel(&pred, &gold);
        assert!((m.jaccard - jaccard).abs() < TOL, "jaccard case {case}");
        assert!((m.micro_f1 - micro).abs() < TOL, "micro case {case}");
        assert!((m.macro_f1 - macro_f1).abs() < TOL, "macro case {case}");
        assert!((m.weighted_f1 - weighted).abs() < TOL, "weighted case {case}");
    }

    let personas = canonical_personas();
    for case in 0..instances {
        let mut preds_by_persona: BTreeMap<String, Vec<u8>> = BTreeMap::new();
        for persona in &personas {
            let n = rng.gen_range(1..30);
            preds_by_persona.insert(
                persona.persona_id.clone(),
                (0..n).map(|_| rng.gen_range(0..2)).collect(),
            );
        }
        let report = separability(&preds_by_persona, &personas).unwrap();
        // Oracle: explicit pooled means.
        let mut low = Vec::new();
        let mut high = Vec::new();
        for persona in &personas {
            let preds = &preds_by_persona[&persona.persona_id];
            match persona.kind {
                PersonaKind::Deficient => low.extend_from_slice(preds),
                PersonaKind::Competent => high.extend_from_slice(preds),
            }
        }
        let mean = |v: &[u8]| v.iter().map(|&x| x as f64).sum::<f64>() / v.len() as f64;
        assert!((report.r_deficient_pool - mean(&low)).abs() < TOL, "delta RL case {case}");
        assert!((report.r_competent_pool - mean(&high)).abs() < TOL, "delta RH case {case}");
        assert!((report.delta - (mean(&low) - mean(&high))).abs() < TOL, "delta case {case}");
    }

    println!("ACCEPTANCE 3 (metric oracle equivalence, {instances} instances per family): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 4: published-value identities
// ---------------------------------------------------------------------------

#[test]
fn acceptance_4_published_value_identities() {
    // Binary detection rows: (precision %, recall %, published F1).
    let table1_rows: [(f64, f64, f64); 14] = [
        (73.08, 39.05, 0.5090),
        (33.08, 69.52, 0.4483),
        (88.08, 52.86, 0.6607),
        (87.31, 24.76, 0.3858),
        (74.23, 45.71, 0.5658),
        (68.85, 51.90, 0.5919),
        (73.46, 61.43, 0.6691),
        (46.92, 73.81, 0.5737),
        (43.08, 57.14, 0.4912),
        (69.23, 95.24, 0.8018),
        (72.31, 66.19, 0.6911),
        (74.62, 61.90, 0.6767),
        (71.15, 82.38, 0.7636),
        (91.54, 74.76, 0.8230),
    ];
    for (i, (p_pct, r_pct, published)) in table1_rows.iter().enumerate() {
        let f1 = f1_from_precision_recall(p_pct / 100.0, r_pct / 100.0);
        assert!(
            (f1 - published).abs() < 5e-4,
            "row {i}: 2PR/(P+R) = {f1} vs published {published}"
        );
    }
    // Degenerate all-negative rows report F1 = 0 under the 0-convention.
    assert_eq!(f1_from_precision_recall(0.0, 0.0), 0.0);

    // Always-empty multi-label prediction over a pool with 68.9% empty gold.
    let total = 1000usize;
    let empty_gold = 689usize;
    let pred: Vec<DefectSet> = vec![DefectSet::new(); total];
    let gold: Vec<DefectSet> = (0..total)
        .map(|i| {
            if i < empty_gold {
                DefectSet::new()
            } else {
                DefectSet::from([DefectLabel::InformationError])
            }
        })
        .collect();
    let m = multilabel_metrics(&pred, &gold).unwrap();
    assert!((m.jaccard - 0.689).abs() <= 1e-3, "degenerate jaccard = {}", m.jaccard);
    assert_eq!(m.micro_f1, 0.0, "degenerate micro F1");

    // An all-negative binary predictor collapses G-Mean to 0.
    let gold: Vec<u8> = (0..100).map(|i| u8::from(i % 3 == 0)).collect();
    let pred = vec![0u8; 100];
    let rob = robustness_metrics(&pred, &gold).unwrap();
    assert_eq!(rob.g_mean, 0.0);
    assert_eq!(rob.mcc, 0.0);

    println!("ACCEPTANCE 4 (published-value identities, {} rows): PASS", table1_rows.len());
}

// ---------------------------------------------------------------------------
// Criterion 5: partition identity
// ---------------------------------------------------------------------------

#[test]
fn acceptance_5_partition_identity() {
    let personas = canonical_personas();
    let generators = ["gen-a", "gen-b", "gen-c", "gen-d"];
    let mut reviews: Vec<ReviewRecord> = Vec::with_capacity(50 * 4 * 9);
    for paper_idx in 0..50 {
        for generator in generators {
            for persona in &personas {
                reviews.push(ReviewRecord {
                    review_id: format!("p{paper_idx}-{generator}-{}", persona.persona_id),
                    paper_id: format!("p{paper_idx}"),
                    generator_id: generator.to_string(),
                    persona_id: Some(persona.persona_id.clone()),
                    content: "Summary Strengths Weaknesses Questions".into(),
                    scores: None,
                    gold: None,
                });
            }
        }
    }
    assert_eq!(reviews.len(), 1800);

    let train_papers: BTreeSet<String> = (0..40).map(|i| format!("p{i}")).collect();
    let test_papers: BTreeSet<String> = (40..50).map(|i| format!("p{i}")).collect();
    let train_generators: BTreeSet<String> =
        ["gen-a", "gen-b", "gen-c"].iter().map(|s| s.to_string()).collect();
    let split =
        partition(&reviews, &train_papers, &test_papers, &train_generators, "gen-d").unwrap();

    assert_eq!(split.train.len(), 1080, "train pool");
    assert_eq!(split.test.len(), 90, "test pool");
    assert_eq!(split.held_aside.len(), 630, "held-aside pool");

    // Split invariants: disjoint, exhaustive, no paper or generator leakage.
    let train_ids: BTreeSet<&String> = split.train.iter().map(|r| &r.review_id).collect();
    let test_ids: BTreeSet<&String> = split.test.iter().map(|r| &r.review_id).collect();
    assert!(train_ids.is_disjoint(&test_ids));
    assert!(split.test.iter().all(|r| r.generator_id == "gen-d"));
    let train_paper_set: BTreeSet<&String> = split.train.iter().map(|r| &r.paper_id).collect();
    let test_paper_set: BTreeSet<&String> = split.test.iter().map(|r| &r.paper_id).collect();
    assert!(train_paper_set.is_disjoint(&test_paper_set));
    assert!(!split.train.iter().any(|r| r.generator_id == "gen-d"));

    println!("ACCEPTANCE 5 (partition identity 1080/90/630): PASS");
}

// ---------------------------------------------------------------------------
// Criterion 6: filter correctness
// ---------------------------------------------------------------------------

#[test]
fn acceptance_6_filter_truth_table() {
    let personas = canonical_personas();
    let mut checked = 0usize;
    for mask in 0u8..64 {
        let subset: Vec<DefectLabel> = DefectLabel::DEFECTS
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, d)| *d)
            .collect();
        let verdict = if subset.is_empty() {
            IntegrateVerdict::new(false, 4, vec![DefectLabel::NoDeficient]).unwrap()
        } else {
            IntegrateVerdict::new(true, 3, subset.clone()).unwrap()
        };
        for persona in &personas {
            // Truth table recomputed from first principles.
            let expected = match persona.kind {
                PersonaKind::Competent => subset.is_empty(),
                PersonaKind::Deficient => {
                    subset.contains(persona.target_defect.as_ref().unwrap())
                }
            };
            assert_eq!(
                persona_consistent(&verdict, persona),
                expected,
                "mask {mask:#08b} persona {}",
                persona.persona_id
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 64 * 9);
    println!("ACCEPTANCE 6 (filter truth table, {checked} cases): PASS");
}
