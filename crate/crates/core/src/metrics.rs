//! Evaluation computations: binary detection metrics, multi-label metrics
//! with the empty-set Jaccard convention, persona-separability, and
//! class-imbalance robustness metrics with seeded resampling.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{DefectLabel, PersonaKind, PersonaSpec};

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("prediction and gold lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("metric input is empty")]
    EmptyInput,
    #[error("binary labels must be 0 or 1, found {0}")]
    NotBinary(u8),
    #[error("label {0} is outside the six defect categories")]
    LabelOutsideCategories(DefectLabel),
    #[error("persona `{0}` is not resolvable to competent/deficient")]
    UnknownPersona(String),
    #[error("the {0} persona pool is empty")]
    EmptyPool(&'static str),
    #[error("resampling requires both classes present")]
    SingleClass,
    #[error("resample proportion must be in (0, 1), got {0}")]
    BadProportion(f64),
    #[error("run reports have mismatched key sets (`{0}` not shared)")]
    KeySetMismatch(String),
}

/// Binary confusion counts with positive class = deficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub true_pos: u64,
    pub false_pos: u64,
    pub true_neg: u64,
    pub false_neg: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }
}

fn check_binary(pred: &[u8], gold: &[u8]) -> Result<(), MetricsError> {
    if pred.len() != gold.len() {
        return Err(MetricsError::LengthMismatch(pred.len(), gold.len()));
    }
    if pred.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    for &v in pred.iter().chain(gold) {
        if v > 1 {
            return Err(MetricsError::NotBinary(v));
        }
    }
    Ok(())
}

/// Tallies binary confusion counts (positive class = deficient).
pub fn confusion(pred: &[u8], gold: &[u8]) -> Result<ConfusionCounts, MetricsError> {
    check_binary(pred, gold)?;
    let mut counts = ConfusionCounts { true_pos: 0, false_pos: 0, true_neg: 0, false_neg: 0 };
    for (&p, &g) in pred.iter().zip(gold) {
        match (p, g) {
            (1, 1) => counts.true_pos += 1,
            (1, 0) => counts.false_pos += 1,
            (0, 0) => counts.true_neg += 1,
            _ => counts.false_neg += 1,
        }
    }
    Ok(counts)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// F1 from precision and recall, 0 when both are 0.
pub fn f1_from_precision_recall(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryMetrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Standard binary detection metrics. Precision and recall are 0 when their
/// denominators are 0.
pub fn binary_metrics(pred: &[u8], gold: &[u8]) -> Result<BinaryMetrics, MetricsError> {
    let c = confusion(pred, gold)?;
    let precision = ratio(c.true_pos, c.true_pos + c.false_pos);
    let recall = ratio(c.true_pos, c.true_pos + c.false_neg);
    Ok(BinaryMetrics {
        accuracy: ratio(c.true_pos + c.true_neg, c.total()),
        precision,
        recall,
        f1: f1_from_precision_recall(precision, recall),
    })
}

pub type DefectSet = BTreeSet<DefectLabel>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MultilabelMetrics {
    pub jaccard: f64,
    pub micro_f1: f64,
    pub macro_f1: f64,
    pub weighted_f1: f64,
}

fn check_sets(sets: &[DefectSet]) -> Result<(), MetricsError> {
    for set in sets {
        if set.contains(&DefectLabel::NoDeficient) {
            return Err(MetricsError::LabelOutsideCategories(DefectLabel::NoDeficient));
        }
    }
    Ok(())
}

/// Multi-label metrics over the six defect categories; the non-deficient
/// label is encoded as the empty set. Jaccard uses the empty-vs-empty = 1
/// convention; per-category F1 values that are undefined count as 0.
pub fn multilabel_metrics(
    pred_sets: &[DefectSet],
    gold_sets: &[DefectSet],
) -> Result<MultilabelMetrics, MetricsError> {
    if pred_sets.len() != gold_sets.len() {
        return Err(MetricsError::LengthMismatch(pred_sets.len(), gold_sets.len()));
    }
    if pred_sets.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    check_sets(pred_sets)?;
    check_sets(gold_sets)?;

    let mut jaccard_sum = 0.0;
    for (pred, gold) in pred_sets.iter().zip(gold_sets) {
        let union = pred.union(gold).count();
        jaccard_sum += if union == 0 {
            1.0
        } else {
            pred.intersection(gold).count() as f64 / union as f64
        };
    }
    let jaccard = jaccard_sum / pred_sets.len() as f64;

    let mut micro_tp = 0u64;
    let mut micro_fp = 0u64;
    let mut micro_fn = 0u64;
    let mut per_label_f1 = Vec::with_capacity(6);
    let mut supports = Vec::with_capacity(6);
    for label in DefectLabel::DEFECTS {
        let mut tp = 0u64;
        let mut fp = 0u64;
        let mut fn_count = 0u64;
        for (pred, gold) in pred_sets.iter().zip(gold_sets) {
            match (pred.contains(&label), gold.contains(&label)) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_count += 1,
                (false, false) => {}
            }
        }
        micro_tp += tp;
        micro_fp += fp;
        micro_fn += fn_count;
        let p = ratio(tp, tp + fp);
        let r = ratio(tp, tp + fn_count);
        per_label_f1.push(f1_from_precision_recall(p, r));
        supports.push((tp + fn_count) as f64);
    }
    let micro_p = ratio(micro_tp, micro_tp + micro_fp);
    let micro_r = ratio(micro_tp, micro_tp + micro_fn);
    let micro_f1 = f1_from_precision_recall(micro_p, micro_r);
    let macro_f1 = per_label_f1.iter().sum::<f64>() / per_label_f1.len() as f64;
    let total_support: f64 = supports.iter().sum();
    let weighted_f1 = if total_support == 0.0 {
        0.0
    } else {
        per_label_f1.iter().zip(&supports).map(|(f1, s)| f1 * s).sum::<f64>() / total_support
    };
    Ok(MultilabelMetrics { jaccard, micro_f1, macro_f1, weighted_f1 })
}

/// Persona-separability: gap in predicted-deficient rates between the
/// deficient-persona and competent-persona review pools.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityReport {
    pub r_deficient_pool: f64,
    pub r_competent_pool: f64,
    pub delta: f64,
}

pub fn separability(
    preds_by_persona: &BTreeMap<String, Vec<u8>>,
    personas: &[PersonaSpec],
) -> Result<SeparabilityReport, MetricsError> {
    let mut deficient_preds: Vec<u8> = Vec::new();
    let mut competent_preds: Vec<u8> = Vec::new();
    for (persona_id, preds) in preds_by_persona {
        let persona = personas
            .iter()
            .find(|p| &p.persona_id == persona_id)
            .ok_or_else(|| MetricsError::UnknownPersona(persona_id.clone()))?;
        for &v in preds {
            if v > 1 {
                return Err(MetricsError::NotBinary(v));
            }
        }
        match persona.kind {
            PersonaKind::Deficient => deficient_preds.extend_from_slice(preds),
            PersonaKind::Competent => competent_preds.extend_from_slice(preds),
        }
    }
    if deficient_preds.is_empty() {
        return Err(MetricsError::EmptyPool("deficient"));
    }
    if competent_preds.is_empty() {
        return Err(MetricsError::EmptyPool("competent"));
    }
    let mean = |v: &[u8]| v.iter().map(|&x| x as f64).sum::<f64>() / v.len() as f64;
    let r_deficient_pool = mean(&deficient_preds);
    let r_competent_pool = mean(&competent_preds);
    Ok(SeparabilityReport {
        r_deficient_pool,
        r_competent_pool,
        delta: r_deficient_pool - r_competent_pool,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustnessMetrics {
    pub balanced_accuracy: f64,
    pub g_mean: f64,
    pub mcc: f64,
}

/// Class-imbalance robustness metrics. TPR/TNR are 0 when their denominators
/// are 0; MCC is 0 when its denominator is 0.
pub fn robustness_metrics(pred: &[u8], gold: &[u8]) -> Result<RobustnessMetrics, MetricsError> {
    let c = confusion(pred, gold)?;
    let tpr = ratio(c.true_pos, c.true_pos + c.false_neg);
    let tnr = ratio(c.true_neg, c.true_neg + c.false_pos);
    let (tp, fp, tn, fn_count) =
        (c.true_pos as f64, c.false_pos as f64, c.true_neg as f64, c.false_neg as f64);
    let denom =
        ((tp + fp) * (tp + fn_count) * (tn + fp) * (tn + fn_count)).sqrt();
    let mcc = if denom == 0.0 { 0.0 } else { (tp * tn - fp * fn_count) / denom };
    Ok(RobustnessMetrics {
        balanced_accuracy: (tpr + tnr) / 2.0,
        g_mean: (tpr * tnr).sqrt(),
        mcc,
    })
}

/// Index subsets drawn at a target deficient proportion; `with_replacement`
/// flags pools too small to sample without replacement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResamplePlan {
    pub subsets: Vec<Vec<usize>>,
    pub subset_size: usize,
    pub deficient_per_subset: usize,
    pub with_replacement: bool,
}

fn largest_achievable(n_deficient: usize, n_clean: usize, proportion: f64) -> usize {
    let n = n_deficient + n_clean;
    for size in (1..=n).rev() {
        let k = (size as f64 * proportion).round() as usize;
        if k >= 1 && k <= n_deficient && size - k >= 1 && size - k <= n_clean {
            return size;
        }
    }
    2.min(n)
}

/// Draws `n_resamples` index subsets whose deficient share equals
/// `proportion` (rounded to the nearest achievable count), sampling without
/// replacement within each class when the pools suffice. Fully determined by
/// `seed`. Subset size defaults to the largest achievable at the target
/// proportion.
pub fn resample_at_proportion(
    gold: &[u8],
    proportion: f64,
    n_resamples: usize,
    seed: u64,
    subset_size: Option<usize>,
) -> Result<ResamplePlan, MetricsError> {
    if gold.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    if !(proportion > 0.0 && proportion < 1.0) {
        return Err(MetricsError::BadProportion(proportion));
    }
    for &v in gold {
        if v > 1 {
            return Err(MetricsError::NotBinary(v));
        }
    }
    let deficient: Vec<usize> = gold.iter().enumerate().filter(|(_, &z)| z == 1).map(|(i, _)| i).collect();
    let clean: Vec<usize> = gold.iter().enumerate().filter(|(_, &z)| z == 0).map(|(i, _)| i).collect();
    if deficient.is_empty() || clean.is_empty() {
        return Err(MetricsError::SingleClass);
    }

    let size = subset_size.unwrap_or_else(|| largest_achievable(deficient.len(), clean.len(), proportion));
    let k = ((size as f64 * proportion).round() as usize).clamp(1, size.saturating_sub(1).max(1));
    let with_replacement = k > deficient.len() || size - k > clean.len();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut subsets = Vec::with_capacity(n_resamples);
    for _ in 0..n_resamples {
        let mut subset = Vec::with_capacity(size);
        subset.extend(draw(&deficient, k, &mut rng));
        subset.extend(draw(&clean, size - k, &mut rng));
        subset.sort_unstable();
        subsets.push(subset);
    }
    Ok(ResamplePlan { subsets, subset_size: size, deficient_per_subset: k, with_replacement })
}

fn draw(pool: &[usize], count: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if count <= pool.len() {
        let mut shuffled = pool.to_vec();
        shuffled.shuffle(rng);
        shuffled.truncate(count);
        shuffled
    } else {
        (0..count).map(|_| pool[rng.gen_range(0..pool.len())]).collect()
    }
}

/// Arithmetic mean per key over runs with identical key sets.
pub fn aggregate_runs(
    run_reports: &[BTreeMap<String, f64>],
) -> Result<BTreeMap<String, f64>, MetricsError> {
    if run_reports.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let keys: BTreeSet<&String> = run_reports[0].keys().collect();
    for report in &run_reports[1..] {
        let these: BTreeSet<&String> = report.keys().collect();
        if these != keys {
            let diff = keys
                .symmetric_difference(&these)
                .next()
                .map(|s| s.to_string())
                .unwrap_or_default();
            return Err(MetricsError::KeySetMismatch(diff));
        }
    }
    let mut out = BTreeMap::new();
    for key in keys {
        let sum: f64 = run_reports.iter().map(|r| r[key]).sum();
        out.insert(key.clone(), sum / run_reports.len() as f64);
    }
    Ok(out)
}
