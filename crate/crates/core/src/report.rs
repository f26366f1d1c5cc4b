//! Evaluation report assembly: pairs detector outputs with gold labels and
//! persona tags, runs every applicable metric family, and renders reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{DefectLabel, LabelVector, PersonaSpec};
use crate::metrics::{
    self, BinaryMetrics, DefectSet, MetricsError, MultilabelMetrics, RobustnessMetrics,
    SeparabilityReport,
};

/// One evaluated review: the detector's prediction plus whatever supervision
/// is available (gold labels, persona weak tag).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalRecord {
    pub review_id: String,
    pub pred_deficient: u8,
    #[serde(default)]
    pub pred_labels: Vec<DefectLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold: Option<LabelVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub persona_id: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalCounts {
    pub records: usize,
    pub with_gold: usize,
    pub with_persona: usize,
}

/// All metric families computed from one evaluation run. A family is absent
/// when its inputs are (no gold labels, or an empty persona pool).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub counts: EvalCounts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binary: Option<BinaryMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub multilabel: Option<MultilabelMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub robustness: Option<RobustnessMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separability: Option<SeparabilityReport>,
}

fn pred_set(record: &EvalRecord) -> DefectSet {
    record.pred_labels.iter().copied().collect()
}

/// Runs binary, multi-label, and robustness metrics over the gold-annotated
/// records, and persona separability over the persona-tagged records.
pub fn evaluate(
    records: &[EvalRecord],
    personas: &[PersonaSpec],
) -> Result<EvaluationReport, MetricsError> {
    let golded: Vec<&EvalRecord> = records.iter().filter(|r| r.gold.is_some()).collect();
    let counts = EvalCounts {
        records: records.len(),
        with_gold: golded.len(),
        with_persona: records.iter().filter(|r| r.persona_id.is_some()).count(),
    };

    let (binary, multilabel, robustness) = if golded.is_empty() {
        (None, None, None)
    } else {
        let pred: Vec<u8> = golded.iter().map(|r| r.pred_deficient).collect();
        let gold: Vec<u8> = golded.iter().map(|r| r.gold.as_ref().unwrap().z()).collect();
        let pred_sets: Vec<DefectSet> = golded.iter().map(|r| pred_set(r)).collect();
        let gold_sets: Vec<DefectSet> =
            golded.iter().map(|r| r.gold.as_ref().unwrap().defect_set()).collect();
        (
            Some(metrics::binary_metrics(&pred, &gold)?),
            Some(metrics::multilabel_metrics(&pred_sets, &gold_sets)?),
            Some(metrics::robustness_metrics(&pred, &gold)?),
        )
    };

    let mut by_persona: BTreeMap<String, Vec<u8>> = BTreeMap::new();
    for record in records {
        if let Some(persona_id) = &record.persona_id {
            by_persona.entry(persona_id.clone()).or_default().push(record.pred_deficient);
        }
    }
    let separability = if by_persona.is_empty() {
        None
    } else {
        match metrics::separability(&by_persona, personas) {
            Ok(report) => Some(report),
            Err(MetricsError::EmptyPool(_)) => None,
            Err(e) => return Err(e),
        }
    };

    Ok(EvaluationReport { counts, binary, multilabel, robustness, separability })
}

/// Flattens a report into a metric map, the unit [`metrics::aggregate_runs`]
/// averages over.
pub fn flatten(report: &EvaluationReport) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    if let Some(b) = &report.binary {
        out.insert("binary.accuracy".into(), b.accuracy);
        out.insert("binary.precision".into(), b.precision);
        out.insert("binary.recall".into(), b.recall);
        out.insert("binary.f1".into(), b.f1);
    }
    if let Some(m) = &report.multilabel {
        out.insert("multilabel.jaccard".into(), m.jaccard);
        out.insert("multilabel.micro_f1".into(), m.micro_f1);
        out.insert("multilabel.macro_f1".into(), m.macro_f1);
        out.insert("multilabel.weighted_f1".into(), m.weighted_f1);
    }
    if let Some(r) = &report.robustness {
        out.insert("robustness.balanced_accuracy".into(), r.balanced_accuracy);
        out.insert("robustness.g_mean".into(), r.g_mean);
        out.insert("robustness.mcc".into(), r.mcc);
    }
    if let Some(s) = &report.separability {
        out.insert("separability.r_deficient_pool".into(), s.r_deficient_pool);
        out.insert("separability.r_competent_pool".into(), s.r_competent_pool);
        out.insert("separability.delta".into(), s.delta);
    }
    out
}

/// One proportion of the class-imbalance grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProportionGrid {
    pub proportion: f64,
    pub subset_size: usize,
    pub deficient_per_subset: usize,
    pub with_replacement: bool,
    pub cells: Vec<RobustnessMetrics>,
    pub mean: RobustnessMetrics,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResampleEvalReport {
    pub n_resamples: usize,
    pub seed: u64,
    pub grid: Vec<ProportionGrid>,
}

/// Robustness metrics over seeded resamples at each target deficient
/// proportion, averaged per proportion. Only gold-annotated records
/// participate.
pub fn resample_eval(
    records: &[EvalRecord],
    proportions: &[f64],
    n_resamples: usize,
    seed: u64,
    subset_size: Option<usize>,
) -> Result<ResampleEvalReport, MetricsError> {
    let golded: Vec<&EvalRecord> = records.iter().filter(|r| r.gold.is_some()).collect();
    if golded.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let pred: Vec<u8> = golded.iter().map(|r| r.pred_deficient).collect();
    let gold: Vec<u8> = golded.iter().map(|r| r.gold.as_ref().unwrap().z()).collect();

    let mut grid = Vec::with_capacity(proportions.len());
    for (i, &proportion) in proportions.iter().enumerate() {
        // Offset the seed per proportion so grids stay independent yet
        // reproducible.
        let plan = metrics::resample_at_proportion(
            &gold,
            proportion,
            n_resamples,
            seed.wrapping_add(i as u64),
            subset_size,
        )?;
        let mut cells = Vec::with_capacity(plan.subsets.len());
        for subset in &plan.subsets {
            let sub_pred: Vec<u8> = subset.iter().map(|&idx| pred[idx]).collect();
            let sub_gold: Vec<u8> = subset.iter().map(|&idx| gold[idx]).collect();
            cells.push(metrics::robustness_metrics(&sub_pred, &sub_gold)?);
        }
        let n = cells.len().max(1) as f64;
        let mean = RobustnessMetrics {
            balanced_accuracy: cells.iter().map(|c| c.balanced_accuracy).sum::<f64>() / n,
            g_mean: cells.iter().map(|c| c.g_mean).sum::<f64>() / n,
            mcc: cells.iter().map(|c| c.mcc).sum::<f64>() / n,
        };
        grid.push(ProportionGrid {
            proportion,
            subset_size: plan.subset_size,
            deficient_per_subset: plan.deficient_per_subset,
            with_replacement: plan.with_replacement,
            cells,
            mean,
        });
    }
    Ok(ResampleEvalReport { n_resamples, seed, grid })
}

fn pct(v: f64) -> String {
    format!("{:.2}%", v * 100.0)
}

/// Plain-text rendering of an evaluation report, mirroring the layout of the
/// standard result tables.
pub fn render_tables(report: &EvaluationReport) -> String {
    let mut out = String::new();
    if let Some(b) = &report.binary {
        out.push_str("Binary deficiency detection\n");
        out.push_str(&format!(
            "  {:<10} {:<11} {:<10} {:<8}\n",
            "Acc", "Precision", "Recall", "F1"
        ));
        out.push_str(&format!(
            "  {:<10} {:<11} {:<10} {:<8.4}\n\n",
            pct(b.accuracy),
            pct(b.precision),
            pct(b.recall),
            b.f1
        ));
    }
    if let Some(m) = &report.multilabel {
        out.push_str("Fine-grained multi-label classification\n");
        out.push_str(&format!(
            "  {:<9} {:<9} {:<9} {:<12}\n",
            "Jaccard", "Micro F1", "Macro F1", "Weighted F1"
        ));
        out.push_str(&format!(
            "  {:<9.4} {:<9.4} {:<9.4} {:<12.4}\n\n",
            m.jaccard, m.micro_f1, m.macro_f1, m.weighted_f1
        ));
    }
    if let Some(s) = &report.separability {
        out.push_str("Persona separability\n");
        out.push_str(&format!("  {:<8} {:<8} {:<8}\n", "R_L", "R_H", "Delta"));
        out.push_str(&format!(
            "  {:<8.3} {:<8.3} {:<8.3}\n\n",
            s.r_deficient_pool, s.r_competent_pool, s.delta
        ));
    }
    if let Some(r) = &report.robustness {
        out.push_str("Robustness\n");
        out.push_str(&format!("  {:<7} {:<7} {:<7}\n", "B.Acc", "G-Mean", "MCC"));
        out.push_str(&format!(
            "  {:<7.3} {:<7.3} {:<7.3}\n",
            r.balanced_accuracy, r.g_mean, r.mcc
        ));
    }
    out
}

/// Plain-text rendering of the class-imbalance grid.
pub fn render_resample_table(report: &ResampleEvalReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "Robustness under varying deficient proportions ({} resamples each)\n",
        report.n_resamples
    ));
    out.push_str(&format!(
        "  {:<11} {:<7} {:<7} {:<7}\n",
        "Proportion", "B.Acc", "G-Mean", "MCC"
    ));
    for grid in &report.grid {
        out.push_str(&format!(
            "  {:<11} {:<7.3} {:<7.3} {:<7.3}\n",
            format!("{:.0}%", grid.proportion * 100.0),
            grid.mean.balanced_accuracy,
            grid.mean.g_mean,
            grid.mean.mcc
        ));
    }
    out
}
