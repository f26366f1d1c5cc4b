//! Data model for papers, reviews, labels, and personas, plus corpus
//! ingestion (line-delimited JSON) and dataset partitioning.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::prompts;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("io error reading corpus: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed record at line {line}: {message}")]
    MalformedLine { line: usize, message: String },
    #[error("duplicate {kind} id `{id}` at line {line}")]
    DuplicateId {
        kind: &'static str,
        id: String,
        line: usize,
    },
    #[error("{0}")]
    Invariant(String),
    #[error("label vector has {0} elements, expected 7")]
    WrongVectorLength(usize),
    #[error("train and test paper-id sets overlap (e.g. `{0}`)")]
    OverlappingPaperSets(String),
    #[error("test generator `{0}` is listed among the train generators")]
    TestGeneratorInTrain(String),
}

/// The seven-member label space: the non-deficient label plus the six
/// defect categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DefectLabel {
    NoDeficient,
    InformationError,
    LackConstructive,
    Careless,
    Unprofessional,
    Bias,
    NoEvidence,
}

impl DefectLabel {
    pub const ALL: [DefectLabel; 7] = [
        DefectLabel::NoDeficient,
        DefectLabel::InformationError,
        DefectLabel::LackConstructive,
        DefectLabel::Careless,
        DefectLabel::Unprofessional,
        DefectLabel::Bias,
        DefectLabel::NoEvidence,
    ];

    /// The six defect categories, excluding the non-deficient label.
    pub const DEFECTS: [DefectLabel; 6] = [
        DefectLabel::InformationError,
        DefectLabel::LackConstructive,
        DefectLabel::Careless,
        DefectLabel::Unprofessional,
        DefectLabel::Bias,
        DefectLabel::NoEvidence,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DefectLabel::NoDeficient => "no_deficient",
            DefectLabel::InformationError => "information_error",
            DefectLabel::LackConstructive => "lack_constructive",
            DefectLabel::Careless => "careless",
            DefectLabel::Unprofessional => "unprofessional",
            DefectLabel::Bias => "bias",
            DefectLabel::NoEvidence => "no_evidence",
        }
    }

    pub fn parse(s: &str) -> Option<DefectLabel> {
        DefectLabel::ALL.into_iter().find(|l| l.as_str() == s)
    }

    /// Position in the 7-element multi-label vector (no_deficient = 0).
    pub fn index(self) -> usize {
        match self {
            DefectLabel::NoDeficient => 0,
            DefectLabel::InformationError => 1,
            DefectLabel::LackConstructive => 2,
            DefectLabel::Careless => 3,
            DefectLabel::Unprofessional => 4,
            DefectLabel::Bias => 5,
            DefectLabel::NoEvidence => 6,
        }
    }
}

impl fmt::Display for DefectLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Returns 1 iff any defect position (1..=6) of the 7-element vector is set.
pub fn binary_from_multilabel(y: &[bool]) -> Result<u8, CorpusError> {
    if y.len() != 7 {
        return Err(CorpusError::WrongVectorLength(y.len()));
    }
    Ok(u8::from(y[1..].iter().any(|&b| b)))
}

/// Gold annotation: binary deficiency flag, label set, optional quality score.
///
/// An absent gold annotation is `Option::<LabelVector>::None` on the records
/// that carry it; an all-zero vector is not representable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GoldWire", into = "GoldWire")]
pub struct LabelVector {
    z: u8,
    y: [bool; 7],
    q: Option<u8>,
}

impl LabelVector {
    /// Builds a vector from the set labels, enforcing the z/y invariants.
    pub fn new(labels: &[DefectLabel], quality_score: Option<u8>) -> Result<Self, CorpusError> {
        let mut y = [false; 7];
        for l in labels {
            y[l.index()] = true;
        }
        let z = binary_from_multilabel(&y)?;
        if z == 1 && y[0] {
            return Err(CorpusError::Invariant(
                "no_deficient cannot co-occur with defect labels".into(),
            ));
        }
        if z == 0 && !y[0] {
            return Err(CorpusError::Invariant(
                "gold labels must set either no_deficient or at least one defect".into(),
            ));
        }
        if let Some(q) = quality_score {
            if !(1..=5).contains(&q) {
                return Err(CorpusError::Invariant(format!(
                    "quality score {q} outside 1..=5"
                )));
            }
        }
        Ok(LabelVector {
            z,
            y,
            q: quality_score,
        })
    }

    pub fn deficient(&self) -> bool {
        self.z == 1
    }

    pub fn z(&self) -> u8 {
        self.z
    }

    pub fn vector(&self) -> &[bool; 7] {
        &self.y
    }

    pub fn quality_score(&self) -> Option<u8> {
        self.q
    }

    /// The set labels, in canonical vector order.
    pub fn labels(&self) -> Vec<DefectLabel> {
        DefectLabel::ALL
            .into_iter()
            .filter(|l| self.y[l.index()])
            .collect()
    }

    /// The defect subset (excluding no_deficient), in canonical vector order.
    pub fn defect_set(&self) -> BTreeSet<DefectLabel> {
        DefectLabel::DEFECTS
            .into_iter()
            .filter(|l| self.y[l.index()])
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct GoldWire {
    z: u8,
    labels: Vec<DefectLabel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quality_score: Option<u8>,
}

impl TryFrom<GoldWire> for LabelVector {
    type Error = CorpusError;

    fn try_from(w: GoldWire) -> Result<Self, Self::Error> {
        let v = LabelVector::new(&w.labels, w.quality_score)?;
        if v.z != w.z {
            return Err(CorpusError::Invariant(format!(
                "gold z={} inconsistent with labels {:?}",
                w.z,
                w.labels.iter().map(|l| l.as_str()).collect::<Vec<_>>()
            )));
        }
        Ok(v)
    }
}

impl From<LabelVector> for GoldWire {
    fn from(v: LabelVector) -> Self {
        GoldWire {
            z: v.z,
            labels: v.labels(),
            quality_score: v.q,
        }
    }
}

/// The four-component paper representation plus abstract.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperBundle {
    pub paper_id: String,
    pub title: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub main_text: String,
    pub references: String,
    pub appendix_summary: String,
    pub figure_descriptions: Vec<String>,
}

impl PaperBundle {
    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.paper_id.is_empty() {
            return Err(CorpusError::Invariant("paper_id must be non-empty".into()));
        }
        if self.abstract_text.is_empty() || self.main_text.is_empty() {
            return Err(CorpusError::Invariant(format!(
                "paper `{}`: abstract and main_text must be non-empty",
                self.paper_id
            )));
        }
        Ok(())
    }
}

/// Per-review score block; key names match the review-generation schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReviewScores {
    #[serde(rename = "Rating")]
    pub rating: u8,
    #[serde(rename = "Soundness")]
    pub soundness: u8,
    #[serde(rename = "Presentation")]
    pub presentation: u8,
    #[serde(rename = "Contribution")]
    pub contribution: u8,
}

impl ReviewScores {
    pub fn validate(&self, review_id: &str) -> Result<(), CorpusError> {
        let checks = [
            ("Rating", self.rating, 1u8, 10u8),
            ("Soundness", self.soundness, 1, 4),
            ("Presentation", self.presentation, 1, 4),
            ("Contribution", self.contribution, 1, 4),
        ];
        for (name, value, lo, hi) in checks {
            if value < lo || value > hi {
                return Err(CorpusError::Invariant(format!(
                    "review `{review_id}`: {name} {value} outside {lo}..={hi}"
                )));
            }
        }
        Ok(())
    }
}

/// A peer review with generator/persona provenance and optional gold labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewRecord {
    pub review_id: String,
    pub paper_id: String,
    pub generator_id: String,
    /// The weak tag: the persona the review was generated under, if known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub persona_id: Option<String>,
    pub content: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scores: Option<ReviewScores>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gold: Option<LabelVector>,
}

impl ReviewRecord {
    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.review_id.is_empty() {
            return Err(CorpusError::Invariant("review_id must be non-empty".into()));
        }
        if self.paper_id.is_empty() || self.generator_id.is_empty() {
            return Err(CorpusError::Invariant(format!(
                "review `{}`: paper_id and generator_id must be non-empty",
                self.review_id
            )));
        }
        if let Some(scores) = &self.scores {
            scores.validate(&self.review_id)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PersonaKind {
    Competent,
    Deficient,
}

/// A reviewer persona: a behavioral system-prompt injection, competent or
/// deficient (one deficient persona per defect category).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PersonaSpec {
    pub persona_id: String,
    pub kind: PersonaKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_defect: Option<DefectLabel>,
    pub description: String,
}

/// The nine canonical personas: three competent, six deficient (one per
/// defect category). Deficient ids equal their target defect name.
pub fn canonical_personas() -> Vec<PersonaSpec> {
    let deficient = [
        (DefectLabel::InformationError, prompts::PERSONA_INFORMATION_ERROR),
        (DefectLabel::LackConstructive, prompts::PERSONA_LACK_OF_CONSTRUCTIVENESS),
        (DefectLabel::Careless, prompts::PERSONA_CARELESS_UNSERIOUS),
        (DefectLabel::Unprofessional, prompts::PERSONA_UNPROFESSIONAL_HOSTILE),
        (DefectLabel::Bias, prompts::PERSONA_BIAS_ORIENTED),
        (DefectLabel::NoEvidence, prompts::PERSONA_UNSUBSTANTIATED_CLAIMS),
    ];
    // Each competent persona pairs the two positive behavioral descriptions
    // that counter one group of defect categories.
    let competent = [
        (
            "accurate_information",
            [prompts::PERSONA_ACCURATE_INFORMATION, prompts::PERSONA_WELL_SUBSTANTIATED],
        ),
        (
            "constructive_rigorous",
            [prompts::PERSONA_HIGHLY_CONSTRUCTIVE, prompts::PERSONA_RIGOROUS_METICULOUS],
        ),
        (
            "professional_impartial",
            [prompts::PERSONA_PROFESSIONAL_COURTEOUS, prompts::PERSONA_OBJECTIVE_IMPARTIAL],
        ),
    ];

    let mut out: Vec<PersonaSpec> = competent
        .into_iter()
        .map(|(id, descs)| PersonaSpec {
            persona_id: id.to_string(),
            kind: PersonaKind::Competent,
            target_defect: None,
            description: format!("{}\n\n{}", descs[0], descs[1]),
        })
        .collect();
    out.extend(deficient.into_iter().map(|(defect, desc)| PersonaSpec {
        persona_id: defect.as_str().to_string(),
        kind: PersonaKind::Deficient,
        target_defect: Some(defect),
        description: desc.to_string(),
    }));
    out
}

/// Looks up a canonical persona by id.
pub fn canonical_persona(persona_id: &str) -> Option<PersonaSpec> {
    canonical_personas()
        .into_iter()
        .find(|p| p.persona_id == persona_id)
}

/// Train/test/held-aside pools, disjoint by review id and jointly exhaustive.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub train: Vec<ReviewRecord>,
    pub test: Vec<ReviewRecord>,
    pub held_aside: Vec<ReviewRecord>,
}

/// Splits reviews into train (train papers x train generators), test (test
/// papers x the single test generator), and held-aside (everything else).
pub fn partition(
    reviews: &[ReviewRecord],
    train_paper_ids: &BTreeSet<String>,
    test_paper_ids: &BTreeSet<String>,
    train_generators: &BTreeSet<String>,
    test_generator: &str,
) -> Result<DatasetSplit, CorpusError> {
    if let Some(shared) = train_paper_ids.intersection(test_paper_ids).next() {
        return Err(CorpusError::OverlappingPaperSets(shared.clone()));
    }
    if train_generators.contains(test_generator) {
        return Err(CorpusError::TestGeneratorInTrain(test_generator.to_string()));
    }
    let mut split = DatasetSplit::default();
    for review in reviews {
        if train_paper_ids.contains(&review.paper_id)
            && train_generators.contains(&review.generator_id)
        {
            split.train.push(review.clone());
        } else if test_paper_ids.contains(&review.paper_id)
            && review.generator_id == test_generator
        {
            split.test.push(review.clone());
        } else {
            split.held_aside.push(review.clone());
        }
    }
    Ok(split)
}

/// One line of a corpus file, tagged by record type.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "record_type", rename_all = "lowercase")]
pub enum CorpusRecord {
    Paper(PaperBundle),
    Review(ReviewRecord),
}

/// Loads a line-delimited JSON corpus, preserving input order. Each record
/// is invariant-checked; ids must be unique within their record type.
pub fn load_corpus(path: &Path) -> Result<(Vec<PaperBundle>, Vec<ReviewRecord>), CorpusError> {
    let data = std::fs::read_to_string(path)?;
    parse_corpus(&data)
}

/// Parses corpus text (see [`load_corpus`]); blank lines are ignored.
pub fn parse_corpus(data: &str) -> Result<(Vec<PaperBundle>, Vec<ReviewRecord>), CorpusError> {
    let mut papers: Vec<PaperBundle> = Vec::new();
    let mut reviews: Vec<ReviewRecord> = Vec::new();
    let mut paper_ids = BTreeSet::new();
    let mut review_ids = BTreeSet::new();
    for (idx, line) in data.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let record: CorpusRecord =
            serde_json::from_str(line).map_err(|e| CorpusError::MalformedLine {
                line: line_no,
                message: e.to_string(),
            })?;
        match record {
            CorpusRecord::Paper(p) => {
                p.validate()?;
                if !paper_ids.insert(p.paper_id.clone()) {
                    return Err(CorpusError::DuplicateId {
                        kind: "paper",
                        id: p.paper_id,
                        line: line_no,
                    });
                }
                papers.push(p);
            }
            CorpusRecord::Review(r) => {
                r.validate()?;
                if !review_ids.insert(r.review_id.clone()) {
                    return Err(CorpusError::DuplicateId {
                        kind: "review",
                        id: r.review_id,
                        line: line_no,
                    });
                }
                reviews.push(r);
            }
        }
    }
    Ok((papers, reviews))
}

/// Serializes papers then reviews as line-delimited JSON (the inverse of
/// [`parse_corpus`] up to record order across the two types).
pub fn write_corpus(papers: &[PaperBundle], reviews: &[ReviewRecord]) -> String {
    let mut out = String::new();
    for p in papers {
        out.push_str(
            &serde_json::to_string(&CorpusRecord::Paper(p.clone())).expect("paper serializes"),
        );
        out.push('\n');
    }
    for r in reviews {
        out.push_str(
            &serde_json::to_string(&CorpusRecord::Review(r.clone())).expect("review serializes"),
        );
        out.push('\n');
    }
    out
}
