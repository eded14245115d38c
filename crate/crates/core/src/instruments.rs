//! Questionnaire instruments: SUS, the 16-item PSSUQ, NASA-TLX (weighted and
//! raw), the Workload Profile, and the pre-questionnaire participant record.
//!
//! Each instrument keeps its native scale: SUS items 1-5, PSSUQ items 1-7
//! (lower is better), TLX and WP ratings 0-100.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstrumentError {
    #[error("{instrument} item {item}: value {value} outside {min}..={max}")]
    Range {
        instrument: &'static str,
        item: usize,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("{instrument} expects {expected} items, got {actual}")]
    ItemCount {
        instrument: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("PSSUQ subscale {0} has no answered items")]
    AllNotApplicable(PssuqSubscale),
    #[error("pairwise comparison {0} vs {1} is missing")]
    MissingPair(TlxFactor, TlxFactor),
    #[error("pairwise comparison {0} vs {1} appears more than once")]
    DuplicatePair(TlxFactor, TlxFactor),
    #[error("pairwise comparison must name two different factors, got {0} twice")]
    TieChoice(TlxFactor),
    #[error("unknown TLX factor code {0:?}")]
    UnknownFactor(String),
    #[error("TLX pairwise choices were not recorded")]
    MissingChoices,
}

fn check_range(
    instrument: &'static str,
    item: usize,
    value: f64,
    min: f64,
    max: f64,
) -> Result<(), InstrumentError> {
    if value.is_finite() && (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(InstrumentError::Range {
            instrument,
            item,
            value,
            min,
            max,
        })
    }
}

/// A 1-5 Likert answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Likert(u8);

impl Likert {
    pub fn new(value: u8) -> Result<Self, InstrumentError> {
        check_range("Likert", 1, value as f64, 1.0, 5.0)?;
        Ok(Likert(value))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for Likert {
    type Error = InstrumentError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Likert::new(value)
    }
}

impl From<Likert> for u8 {
    fn from(value: Likert) -> Self {
        value.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    UndergraduateStudent,
    MasterStudent,
    PhdStudent,
    Postdoc,
    AcademicStaff,
    IndustryPractitioner,
    Other,
}

impl Role {
    pub const ALL: [Role; 7] = [
        Role::UndergraduateStudent,
        Role::MasterStudent,
        Role::PhdStudent,
        Role::Postdoc,
        Role::AcademicStaff,
        Role::IndustryPractitioner,
        Role::Other,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Role::UndergraduateStudent => "undergraduate-student",
            Role::MasterStudent => "master-student",
            Role::PhdStudent => "phd-student",
            Role::Postdoc => "postdoc",
            Role::AcademicStaff => "academic-staff",
            Role::IndustryPractitioner => "industry-practitioner",
            Role::Other => "other",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        Role::ALL.into_iter().find(|r| r.code() == code.trim())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParticipationMode {
    Voluntary,
    Mandatory,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Motivation {
    pub enjoyment: Likert,
    pub curiosity: Likert,
    pub value: Likert,
}

/// Pre-questionnaire answers of one participant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParticipantRecord {
    pub participant_id: String,
    pub group_label: String,
    pub current_role: Role,
    pub formal_training: Vec<String>,
    pub competencies: BTreeMap<String, Likert>,
    pub motivation: Motivation,
    pub participation_mode: ParticipationMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct SusResponse {
    items: [u8; 10],
}

impl SusResponse {
    pub fn new(items: &[u8]) -> Result<Self, InstrumentError> {
        let items: [u8; 10] = items.try_into().map_err(|_| InstrumentError::ItemCount {
            instrument: "SUS",
            expected: 10,
            actual: items.len(),
        })?;
        for (i, &v) in items.iter().enumerate() {
            check_range("SUS", i + 1, v as f64, 1.0, 5.0)?;
        }
        Ok(SusResponse { items })
    }

    pub fn items(&self) -> &[u8; 10] {
        &self.items
    }

    /// Per-item contributions on a common 0-4 positive scale: `item - 1`
    /// for odd items, `5 - item` for even items.
    pub fn contributions(&self) -> [f64; 10] {
        std::array::from_fn(|i| {
            let v = self.items[i] as f64;
            if i % 2 == 0 {
                v - 1.0
            } else {
                5.0 - v
            }
        })
    }
}

impl TryFrom<Vec<u8>> for SusResponse {
    type Error = InstrumentError;

    fn try_from(value: Vec<u8>) -> Result<Self, Self::Error> {
        SusResponse::new(&value)
    }
}

impl From<SusResponse> for Vec<u8> {
    fn from(value: SusResponse) -> Self {
        value.items.to_vec()
    }
}

/// SUS score in [0, 100].
pub fn score_sus(response: &SusResponse) -> f64 {
    response.contributions().iter().sum::<f64>() * 2.5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PssuqSubscale {
    Overall,
    SysUse,
    InfoQual,
    InterQual,
}

impl PssuqSubscale {
    pub const ALL: [PssuqSubscale; 4] = [
        PssuqSubscale::Overall,
        PssuqSubscale::SysUse,
        PssuqSubscale::InfoQual,
        PssuqSubscale::InterQual,
    ];

    /// Zero-based item indices of the subscale.
    pub fn items(self) -> std::ops::Range<usize> {
        match self {
            PssuqSubscale::Overall => 0..16,
            PssuqSubscale::SysUse => 0..6,
            PssuqSubscale::InfoQual => 6..12,
            PssuqSubscale::InterQual => 12..15,
        }
    }
}

impl fmt::Display for PssuqSubscale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PssuqSubscale::Overall => "OVERALL",
            PssuqSubscale::SysUse => "SYSUSE",
            PssuqSubscale::InfoQual => "INFOQUAL",
            PssuqSubscale::InterQual => "INTERQUAL",
        })
    }
}

/// Sixteen PSSUQ answers (`None` = not applicable) and the optional
/// per-item comments, which are carried through verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PssuqRaw", into = "PssuqRaw")]
pub struct PssuqResponse {
    items: [Option<u8>; 16],
    comments: [Option<String>; 16],
}

#[derive(Serialize, Deserialize)]
struct PssuqRaw {
    items: Vec<Option<u8>>,
    comments: Vec<Option<String>>,
}

impl PssuqResponse {
    pub fn new(items: &[Option<u8>], comments: Vec<Option<String>>) -> Result<Self, InstrumentError> {
        let items: [Option<u8>; 16] = items.try_into().map_err(|_| InstrumentError::ItemCount {
            instrument: "PSSUQ",
            expected: 16,
            actual: items.len(),
        })?;
        for (i, v) in items.iter().enumerate() {
            if let Some(v) = v {
                check_range("PSSUQ", i + 1, *v as f64, 1.0, 7.0)?;
            }
        }
        let actual = comments.len();
        let comments: [Option<String>; 16] =
            comments.try_into().map_err(|_| InstrumentError::ItemCount {
                instrument: "PSSUQ comments",
                expected: 16,
                actual,
            })?;
        Ok(PssuqResponse { items, comments })
    }

    pub fn items(&self) -> &[Option<u8>; 16] {
        &self.items
    }

    pub fn comments(&self) -> &[Option<String>; 16] {
        &self.comments
    }

    pub fn not_applicable_count(&self) -> usize {
        self.items.iter().filter(|i| i.is_none()).count()
    }
}

impl TryFrom<PssuqRaw> for PssuqResponse {
    type Error = InstrumentError;

    fn try_from(raw: PssuqRaw) -> Result<Self, Self::Error> {
        PssuqResponse::new(&raw.items, raw.comments)
    }
}

impl From<PssuqResponse> for PssuqRaw {
    fn from(r: PssuqResponse) -> Self {
        PssuqRaw {
            items: r.items.to_vec(),
            comments: r.comments.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PssuqScores {
    pub overall: f64,
    pub sysuse: f64,
    pub infoqual: f64,
    pub interqual: f64,
    pub not_applicable: usize,
}

impl PssuqScores {
    pub fn get(&self, subscale: PssuqSubscale) -> f64 {
        match subscale {
            PssuqSubscale::Overall => self.overall,
            PssuqSubscale::SysUse => self.sysuse,
            PssuqSubscale::InfoQual => self.infoqual,
            PssuqSubscale::InterQual => self.interqual,
        }
    }
}

/// Mean of the answered items of one subscale.
pub fn score_pssuq_subscale(
    response: &PssuqResponse,
    subscale: PssuqSubscale,
) -> Result<f64, InstrumentError> {
    let answered: Vec<f64> = response.items[subscale.items()]
        .iter()
        .flatten()
        .map(|&v| v as f64)
        .collect();
    if answered.is_empty() {
        Err(InstrumentError::AllNotApplicable(subscale))
    } else {
        Ok(answered.iter().sum::<f64>() / answered.len() as f64)
    }
}

/// Means of the answered items per subscale; not-applicable items are left
/// out of the means.
pub fn score_pssuq(response: &PssuqResponse) -> Result<PssuqScores, InstrumentError> {
    Ok(PssuqScores {
        overall: score_pssuq_subscale(response, PssuqSubscale::Overall)?,
        sysuse: score_pssuq_subscale(response, PssuqSubscale::SysUse)?,
        infoqual: score_pssuq_subscale(response, PssuqSubscale::InfoQual)?,
        interqual: score_pssuq_subscale(response, PssuqSubscale::InterQual)?,
        not_applicable: response.not_applicable_count(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TlxFactor {
    MentalDemand,
    PhysicalDemand,
    TemporalDemand,
    Performance,
    Effort,
    Frustration,
}

impl TlxFactor {
    pub const ALL: [TlxFactor; 6] = [
        TlxFactor::MentalDemand,
        TlxFactor::PhysicalDemand,
        TlxFactor::TemporalDemand,
        TlxFactor::Performance,
        TlxFactor::Effort,
        TlxFactor::Frustration,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn code(self) -> &'static str {
        match self {
            TlxFactor::MentalDemand => "MD",
            TlxFactor::PhysicalDemand => "PD",
            TlxFactor::TemporalDemand => "TD",
            TlxFactor::Performance => "OP",
            TlxFactor::Effort => "EF",
            TlxFactor::Frustration => "FR",
        }
    }

    pub fn from_code(code: &str) -> Result<Self, InstrumentError> {
        TlxFactor::ALL
            .into_iter()
            .find(|f| f.code().eq_ignore_ascii_case(code.trim()))
            .ok_or_else(|| InstrumentError::UnknownFactor(code.to_owned()))
    }

    /// The 15 unordered factor pairs in a fixed order.
    pub fn pairs() -> impl Iterator<Item = (TlxFactor, TlxFactor)> {
        (0..6).flat_map(|i| (i + 1..6).map(move |j| (TlxFactor::ALL[i], TlxFactor::ALL[j])))
    }
}

impl fmt::Display for TlxFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One paired comparison: the factor judged to contribute more to workload.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairwiseChoice {
    pub winner: TlxFactor,
    pub loser: TlxFactor,
}

impl PairwiseChoice {
    pub fn new(winner: TlxFactor, loser: TlxFactor) -> Self {
        PairwiseChoice { winner, loser }
    }

    /// Parses the `responses.csv` encoding `WINNER>LOSER`, e.g. `MD>PD`.
    pub fn parse(text: &str) -> Result<Self, InstrumentError> {
        let (w, l) = text
            .split_once('>')
            .ok_or_else(|| InstrumentError::UnknownFactor(text.to_owned()))?;
        Ok(PairwiseChoice::new(TlxFactor::from_code(w)?, TlxFactor::from_code(l)?))
    }

    fn unordered(&self) -> (TlxFactor, TlxFactor) {
        (self.winner.min(self.loser), self.winner.max(self.loser))
    }
}

impl fmt::Display for PairwiseChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", self.winner, self.loser)
    }
}

/// Number of times each factor won its paired comparison, indexed like
/// [`TlxFactor::ALL`]. Every valid set of choices sums to 15.
pub fn tlx_weights(choices: &[PairwiseChoice]) -> Result<[u8; 6], InstrumentError> {
    let mut seen = [[false; 6]; 6];
    let mut weights = [0u8; 6];
    for choice in choices {
        if choice.winner == choice.loser {
            return Err(InstrumentError::TieChoice(choice.winner));
        }
        let (a, b) = choice.unordered();
        if std::mem::replace(&mut seen[a.index()][b.index()], true) {
            return Err(InstrumentError::DuplicatePair(a, b));
        }
        weights[choice.winner.index()] += 1;
    }
    if let Some((a, b)) = TlxFactor::pairs().find(|(a, b)| !seen[a.index()][b.index()]) {
        return Err(InstrumentError::MissingPair(a, b));
    }
    Ok(weights)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TlxRaw", into = "TlxRaw")]
pub struct TlxResponse {
    ratings: [f64; 6],
    choices: Option<Vec<PairwiseChoice>>,
}

#[derive(Serialize, Deserialize)]
struct TlxRaw {
    ratings: Vec<f64>,
    choices: Option<Vec<PairwiseChoice>>,
}

impl TlxResponse {
    /// Ratings are indexed like [`TlxFactor::ALL`]. Choices are optional so
    /// that Raw TLX can be scored on its own; when present they are
    /// validated eagerly.
    pub fn new(ratings: &[f64], choices: Option<Vec<PairwiseChoice>>) -> Result<Self, InstrumentError> {
        let ratings: [f64; 6] = ratings.try_into().map_err(|_| InstrumentError::ItemCount {
            instrument: "NASA-TLX",
            expected: 6,
            actual: ratings.len(),
        })?;
        for (i, &v) in ratings.iter().enumerate() {
            check_range("NASA-TLX", i + 1, v, 0.0, 100.0)?;
        }
        if let Some(c) = &choices {
            tlx_weights(c)?;
        }
        Ok(TlxResponse { ratings, choices })
    }

    pub fn ratings(&self) -> &[f64; 6] {
        &self.ratings
    }

    pub fn choices(&self) -> Option<&[PairwiseChoice]> {
        self.choices.as_deref()
    }
}

impl TryFrom<TlxRaw> for TlxResponse {
    type Error = InstrumentError;

    fn try_from(raw: TlxRaw) -> Result<Self, Self::Error> {
        TlxResponse::new(&raw.ratings, raw.choices)
    }
}

impl From<TlxResponse> for TlxRaw {
    fn from(r: TlxResponse) -> Self {
        TlxRaw {
            ratings: r.ratings.to_vec(),
            choices: r.choices,
        }
    }
}

/// Weighted TLX: `(1/15) * sum(rating_i * weight_i)`.
pub fn score_tlx(response: &TlxResponse) -> Result<f64, InstrumentError> {
    let choices = response.choices().ok_or(InstrumentError::MissingChoices)?;
    let weights = tlx_weights(choices)?;
    Ok(response
        .ratings
        .iter()
        .zip(weights)
        .map(|(d, w)| d * w as f64)
        .sum::<f64>()
        / 15.0)
}

/// Raw TLX: the unweighted mean of the six ratings.
pub fn score_raw_tlx(response: &TlxResponse) -> f64 {
    response.ratings.iter().sum::<f64>() / 6.0
}

/// Labels of the eight Workload Profile dimensions. Presentation only.
pub const WP_DIMENSIONS: [&str; 8] = [
    "perceptual/central processing",
    "response selection and execution",
    "spatial processing",
    "verbal processing",
    "visual input",
    "auditory input",
    "manual output",
    "speech output",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct WpResponse {
    ratings: [f64; 8],
}

impl WpResponse {
    pub fn new(ratings: &[f64]) -> Result<Self, InstrumentError> {
        let ratings: [f64; 8] = ratings.try_into().map_err(|_| InstrumentError::ItemCount {
            instrument: "WP",
            expected: 8,
            actual: ratings.len(),
        })?;
        for (i, &v) in ratings.iter().enumerate() {
            check_range("WP", i + 1, v, 0.0, 100.0)?;
        }
        Ok(WpResponse { ratings })
    }

    pub fn ratings(&self) -> &[f64; 8] {
        &self.ratings
    }
}

impl TryFrom<Vec<f64>> for WpResponse {
    type Error = InstrumentError;

    fn try_from(value: Vec<f64>) -> Result<Self, Self::Error> {
        WpResponse::new(&value)
    }
}

impl From<WpResponse> for Vec<f64> {
    fn from(value: WpResponse) -> Self {
        value.ratings.to_vec()
    }
}

/// Workload Profile: `(1/8) * sum(rating_i)`.
pub fn score_wp(response: &WpResponse) -> f64 {
    response.ratings.iter().sum::<f64>() / 8.0
}

/// All questionnaire answers of one participant. An instrument left
/// entirely blank is `None`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct InstrumentResponse {
    pub sus: Option<SusResponse>,
    pub pssuq: Option<PssuqResponse>,
    pub tlx: Option<TlxResponse>,
    pub wp: Option<WpResponse>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InstrumentScores {
    pub sus: Option<f64>,
    pub pssuq: Option<PssuqScores>,
    pub tlx: Option<f64>,
    pub raw_tlx: Option<f64>,
    pub wp: Option<f64>,
}

pub fn score_all(response: &InstrumentResponse) -> Result<InstrumentScores, InstrumentError> {
    Ok(InstrumentScores {
        sus: response.sus.as_ref().map(score_sus),
        pssuq: response.pssuq.as_ref().map(score_pssuq).transpose()?,
        tlx: response
            .tlx
            .as_ref()
            .filter(|t| t.choices.is_some())
            .map(score_tlx)
            .transpose()?,
        raw_tlx: response.tlx.as_ref().map(score_raw_tlx),
        wp: response.wp.as_ref().map(score_wp),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use TlxFactor::*;

    /// Every pair decided in favour of the factor listed first in `order`.
    fn choices_by_rank(order: [TlxFactor; 6]) -> Vec<PairwiseChoice> {
        TlxFactor::pairs()
            .map(|(a, b)| {
                let ra = order.iter().position(|f| *f == a).unwrap();
                let rb = order.iter().position(|f| *f == b).unwrap();
                if ra < rb {
                    PairwiseChoice::new(a, b)
                } else {
                    PairwiseChoice::new(b, a)
                }
            })
            .collect()
    }

    #[test]
    fn sus_examples() {
        assert_eq!(score_sus(&SusResponse::new(&[3; 10]).unwrap()), 50.0);
        assert_eq!(
            score_sus(&SusResponse::new(&[5, 1, 5, 1, 5, 1, 5, 1, 5, 1]).unwrap()),
            100.0
        );
        assert_eq!(
            score_sus(&SusResponse::new(&[1, 5, 1, 5, 1, 5, 1, 5, 1, 5]).unwrap()),
            0.0
        );
        // (3+3)*5 contributions = 30, times 2.5.
        assert_eq!(
            score_sus(&SusResponse::new(&[4, 2, 4, 2, 4, 2, 4, 2, 4, 2]).unwrap()),
            75.0
        );
    }

    #[test]
    fn sus_validation() {
        assert!(matches!(
            SusResponse::new(&[3; 9]),
            Err(InstrumentError::ItemCount { actual: 9, .. })
        ));
        assert!(matches!(
            SusResponse::new(&[3, 3, 3, 6, 3, 3, 3, 3, 3, 3]),
            Err(InstrumentError::Range { item: 4, .. })
        ));
        assert!(SusResponse::new(&[0; 10]).is_err());
    }

    #[test]
    fn pssuq_examples() {
        let best = PssuqResponse::new(&[Some(1); 16], vec![None; 16]).unwrap();
        let s = score_pssuq(&best).unwrap();
        assert_eq!((s.overall, s.sysuse, s.infoqual, s.interqual), (1.0, 1.0, 1.0, 1.0));
        let worst = PssuqResponse::new(&[Some(7); 16], vec![None; 16]).unwrap();
        let s = score_pssuq(&worst).unwrap();
        assert_eq!((s.overall, s.sysuse, s.infoqual, s.interqual), (7.0, 7.0, 7.0, 7.0));

        let mut items = [Some(2); 16];
        items[6..12].fill(Some(4));
        items[12..15].fill(Some(6));
        items[15] = Some(4);
        let s = score_pssuq(&PssuqResponse::new(&items, vec![None; 16]).unwrap()).unwrap();
        assert_eq!(s.sysuse, 2.0);
        assert_eq!(s.infoqual, 4.0);
        assert_eq!(s.interqual, 6.0);
        // (6*2 + 6*4 + 3*6 + 4) / 16 = 58 / 16
        assert_eq!(s.overall, 3.625);
    }

    #[test]
    fn pssuq_not_applicable() {
        let mut items = [Some(3); 16];
        items[0] = None;
        items[1] = Some(5);
        let s = score_pssuq(&PssuqResponse::new(&items, vec![None; 16]).unwrap()).unwrap();
        assert_eq!(s.not_applicable, 1);
        assert_eq!(s.sysuse, (5.0 + 4.0 * 3.0) / 5.0);

        let mut items = [Some(3); 16];
        items[12..15].fill(None);
        let r = PssuqResponse::new(&items, vec![None; 16]).unwrap();
        assert_eq!(
            score_pssuq(&r),
            Err(InstrumentError::AllNotApplicable(PssuqSubscale::InterQual))
        );
        assert!(PssuqResponse::new(&[Some(8); 16], vec![None; 16]).is_err());
        assert!(PssuqResponse::new(&[Some(1); 16], vec![None; 15]).is_err());
    }

    #[test]
    fn tlx_weights_from_dominance_order() {
        let choices = choices_by_rank([MentalDemand, PhysicalDemand, TemporalDemand, Performance, Effort, Frustration]);
        assert_eq!(tlx_weights(&choices).unwrap(), [5, 4, 3, 2, 1, 0]);
        let choices = choices_by_rank([Effort, Frustration, MentalDemand, PhysicalDemand, TemporalDemand, Performance]);
        let w = tlx_weights(&choices).unwrap();
        assert_eq!(w[Effort.index()], 5);
        assert_eq!(w.iter().map(|&x| x as u32).sum::<u32>(), 15);
    }

    #[test]
    fn tlx_weights_hand_tally() {
        let tally = |text: &str| {
            let choices: Vec<_> = text
                .split_whitespace()
                .map(|c| PairwiseChoice::parse(c).unwrap())
                .collect();
            tlx_weights(&choices).unwrap()
        };
        let strict = "MD>PD MD>TD MD>OP MD>EF MD>FR PD>TD PD>OP PD>EF PD>FR \
                      TD>OP TD>EF TD>FR OP>EF OP>FR EF>FR";
        assert_eq!(tally(strict), [5, 4, 3, 2, 1, 0]);
        let mixed = "MD>PD MD>TD OP>MD MD>EF MD>FR PD>TD PD>OP PD>EF PD>FR \
                     TD>OP TD>EF TD>FR EF>OP OP>FR FR>EF";
        assert_eq!(tally(mixed), [4, 4, 3, 2, 1, 1]);
    }

    #[test]
    fn tlx_weight_errors() {
        let mut choices = choices_by_rank(TlxFactor::ALL);
        let dropped = choices.pop().unwrap();
        assert_eq!(
            tlx_weights(&choices),
            Err(InstrumentError::MissingPair(dropped.winner.min(dropped.loser), dropped.winner.max(dropped.loser)))
        );
        choices.push(choices[0]);
        assert!(matches!(tlx_weights(&choices), Err(InstrumentError::DuplicatePair(..))));
        let mut choices = choices_by_rank(TlxFactor::ALL);
        choices[3] = PairwiseChoice::new(Effort, Effort);
        assert_eq!(tlx_weights(&choices), Err(InstrumentError::TieChoice(Effort)));
        assert!(PairwiseChoice::parse("MD>XX").is_err());
        assert!(PairwiseChoice::parse("MD").is_err());
    }

    #[test]
    fn tlx_scores() {
        let choices = choices_by_rank(TlxFactor::ALL);
        let r = TlxResponse::new(&[0.0; 6], Some(choices.clone())).unwrap();
        assert_eq!(score_tlx(&r).unwrap(), 0.0);
        let r = TlxResponse::new(&[100.0; 6], Some(choices.clone())).unwrap();
        assert_eq!(score_tlx(&r).unwrap(), 100.0);
        let r = TlxResponse::new(&[50.0, 60.0, 40.0, 30.0, 70.0, 20.0], Some(choices)).unwrap();
        // 250 + 240 + 120 + 60 + 70 + 0 = 740
        assert!((score_tlx(&r).unwrap() - 740.0 / 15.0).abs() < 1e-12);
        assert_eq!(score_raw_tlx(&r), 45.0);
        let raw_only = TlxResponse::new(&[10.0; 6], None).unwrap();
        assert_eq!(score_tlx(&raw_only), Err(InstrumentError::MissingChoices));
        assert_eq!(score_raw_tlx(&raw_only), 10.0);
        assert!(TlxResponse::new(&[101.0; 6], None).is_err());
        assert!(TlxResponse::new(&[f64::NAN; 6], None).is_err());
    }

    #[test]
    fn wp_scores() {
        assert_eq!(score_wp(&WpResponse::new(&[0.0; 8]).unwrap()), 0.0);
        assert_eq!(score_wp(&WpResponse::new(&[100.0; 8]).unwrap()), 100.0);
        let r = WpResponse::new(&[10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0]).unwrap();
        assert_eq!(score_wp(&r), 45.0);
        assert!(WpResponse::new(&[-1.0; 8]).is_err());
        assert!(WpResponse::new(&[1.0; 7]).is_err());
    }

    #[test]
    fn likert_and_role_codes() {
        assert!(Likert::new(0).is_err());
        assert!(Likert::new(6).is_err());
        assert_eq!(Likert::new(3).unwrap().get(), 3);
        for role in Role::ALL {
            assert_eq!(Role::from_code(role.code()), Some(role));
        }
        let json = serde_json::to_string(&Role::PhdStudent).unwrap();
        assert_eq!(json, "\"phd-student\"");
    }

    #[test]
    fn serde_revalidates() {
        assert!(serde_json::from_str::<SusResponse>("[3,3,3,3,3,3,3,3,3,9]").is_err());
        let r = SusResponse::new(&[3; 10]).unwrap();
        let back: SusResponse = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
