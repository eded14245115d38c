//! Seeded synthetic studies for demos, power checks and tests.
//!
//! Every participant draws standard-normal latents for usability, workload,
//! perceived performance, accuracy and speed. Groups after the first shift
//! the latent behind each metric by the requested effect (in latent standard
//! deviations); instrument answers, task outcomes and submissions are noisy
//! functions of the latents.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::config::Metric;
use super::PipelineError;
use crate::compare::CompletionStatus;
use crate::instruments::{
    InstrumentResponse, Likert, Motivation, PairwiseChoice, ParticipantRecord, ParticipationMode,
    PssuqResponse, Role, SusResponse, TlxFactor, TlxResponse, WpResponse,
};
use crate::rdf::{Graph, Literal, Term, Triple};
use crate::study::{fixture_graphs, fixture_tasks, NS};
use crate::study::{GroupSpec, Participant, StudyDataset, TaskId, TaskResult, TaskSpec, FORMAT_VERSION, SUBMISSIONS_DIR};

/// Largest accepted absolute effect.
pub const MAX_EFFECT: f64 = 10.0;
const TIME_LIMIT: f64 = 1800.0;
const TOOLS: [&str; 4] = ["mapping-editor", "visual-pipeline", "rule-language", "notebook"];
const COMPETENCIES: [&str; 4] = ["rdf", "sparql", "ontologies", "programming"];

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub groups: usize,
    pub participants_per_group: usize,
    pub effects: BTreeMap<Metric, f64>,
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(groups: usize, participants_per_group: usize, seed: u64) -> Self {
        SynthSpec {
            groups,
            participants_per_group,
            effects: BTreeMap::new(),
            seed,
        }
    }

    pub fn with_effect(mut self, metric: Metric, d: f64) -> Self {
        self.effects.insert(metric, d);
        self
    }

    fn validate(&self) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::InvalidSynthSpec(m));
        if !(1..=26).contains(&self.groups) {
            return bad(format!("group count must be 1 to 26, got {}", self.groups));
        }
        if self.participants_per_group < 2 {
            return bad(format!(
                "need at least 2 participants per group, got {}",
                self.participants_per_group
            ));
        }
        for (m, d) in &self.effects {
            if !d.is_finite() || d.abs() > MAX_EFFECT {
                return Err(PipelineError::InvalidEffectSize(format!("effect for {m} must be finite with magnitude at most {MAX_EFFECT}, got {d}")));
            }
        }
        Ok(())
    }

    fn effect(&self, m: Metric) -> f64 {
        self.effects.get(&m).copied().unwrap_or(0.0)
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn likert5(rng: &mut ChaCha8Rng, centre: f64) -> u8 {
    (centre + 0.8 * normal(rng)).round().clamp(1.0, 5.0) as u8
}

fn sus(rng: &mut ChaCha8Rng, z: f64) -> SusResponse {
    let items: Vec<u8> = (0..10)
        .map(|i| {
            let agree = 3.0 + 0.9 * z + 0.6 * normal(rng);
            // Even-numbered items are negatively worded.
            let v = if i % 2 == 0 { agree } else { 6.0 - agree };
            v.round().clamp(1.0, 5.0) as u8
        })
        .collect();
    SusResponse::new(&items).expect("items clamped to range")
}

fn pssuq(rng: &mut ChaCha8Rng, overall: f64, sub: [f64; 3]) -> PssuqResponse {
    // Lower PSSUQ answers mean higher satisfaction.
    let mut items: Vec<Option<u8>> = (0..16)
        .map(|i| {
            let z = match i {
                0..=5 => sub[0],
                6..=11 => sub[1],
                12..=14 => sub[2],
                _ => overall,
            };
            Some((3.0 - z + 0.7 * normal(rng)).round().clamp(1.0, 7.0) as u8)
        })
        .collect();
    for range in [0..6, 6..12, 12..15] {
        for i in range.clone() {
            let answered = items[range.clone()].iter().filter(|v| v.is_some()).count();
            if answered > 1 && rng.random_bool(0.03) {
                items[i] = None;
            }
        }
    }
    PssuqResponse::new(&items, vec![None; 16]).expect("items clamped to range")
}

fn tlx(rng: &mut ChaCha8Rng, z: f64) -> TlxResponse {
    let ratings: Vec<f64> = (0..6)
        .map(|_| (50.0 + 12.0 * z + 4.0 * normal(rng)).round().clamp(0.0, 100.0))
        .collect();
    let choices = TlxFactor::pairs()
        .map(|(a, b)| if rng.random_bool(0.5) { PairwiseChoice::new(a, b) } else { PairwiseChoice::new(b, a) })
        .collect();
    TlxResponse::new(&ratings, Some(choices)).expect("ratings clamped to range")
}

fn wp(rng: &mut ChaCha8Rng, z: f64) -> WpResponse {
    let ratings: Vec<f64> = (0..8)
        .map(|_| (40.0 + 12.0 * z + 4.0 * normal(rng)).round().clamp(0.0, 100.0))
        .collect();
    WpResponse::new(&ratings).expect("ratings clamped to range")
}

fn record(rng: &mut ChaCha8Rng, id: String, group: &str) -> ParticipantRecord {
    let mut likert = |c: f64| Likert::new(likert5(rng, c)).expect("clamped");
    let competencies = COMPETENCIES.iter().map(|c| (c.to_string(), likert(3.0))).collect();
    let motivation = Motivation {
        enjoyment: likert(3.5),
        curiosity: likert(4.0),
        value: likert(3.5),
    };
    let role = *Role::ALL[..6].choose(rng).expect("non-empty");
    let formal_training = if rng.random_bool(0.5) {
        vec!["semantic web course".to_string()]
    } else {
        Vec::new()
    };
    let participation_mode = if rng.random_bool(0.8) {
        ParticipationMode::Voluntary
    } else {
        ParticipationMode::Mandatory
    };
    ParticipantRecord {
        participant_id: id,
        group_label: group.to_string(),
        current_role: role,
        formal_training,
        competencies,
        motivation,
        participation_mode,
    }
}

/// Drops expected triples with probability `miss` and adds spurious ones at
/// rate `spurious` per expected triple.
fn submission(rng: &mut ChaCha8Rng, expected: &Graph, miss: f64, spurious: f64, tag: &str) -> Graph {
    let mut out: Graph = expected.iter().filter(|_| !rng.random_bool(miss)).cloned().collect();
    let subjects: Vec<&Term> = expected.iter().map(Triple::subject).collect();
    let extra = (0..expected.len()).filter(|_| rng.random_bool(spurious)).count();
    let predicate = Term::iri(format!("{NS}note")).expect("valid IRI");
    for k in 0..extra {
        let s = (*subjects.choose(rng).expect("fixture graphs are non-empty")).clone();
        let o = Term::Literal(Literal::simple(format!("{tag} extra {k}")));
        out.insert(Triple::new(s, predicate.clone(), o).expect("IRI subject"));
    }
    out
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Builds a synthetic study. The same spec always yields the same dataset.
pub fn synth_study(spec: &SynthSpec) -> Result<StudyDataset, PipelineError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let graphs = fixture_graphs();
    let tasks: Vec<TaskSpec> = fixture_tasks()
        .into_iter()
        .map(|(id, description)| TaskSpec {
            id,
            description: description.to_string(),
            expected_graph_path: format!("expected/{id}.nt"),
            expected_graph: graphs[&id].clone(),
        })
        .collect();
    let groups: Vec<GroupSpec> = (0..spec.groups)
        .map(|g| GroupSpec {
            label: char::from(b'A' + g as u8).to_string(),
            tool: TOOLS[g % TOOLS.len()].to_string(),
            task_overrides: Vec::new(),
        })
        .collect();

    let d = |m| spec.effect(m);
    let mut participants = Vec::new();
    for (g, group) in groups.iter().enumerate() {
        let on = if g == 0 { 0.0 } else { 1.0 };
        for _ in 0..spec.participants_per_group {
            let id = format!("P{:03}", participants.len() + 1);
            let usability = normal(&mut rng) + on * d(Metric::Sus);
            let satisfaction = normal(&mut rng) + on * d(Metric::PssuqOverall);
            let sub = [Metric::PssuqSysuse, Metric::PssuqInfoqual, Metric::PssuqInterqual]
                .map(|m| satisfaction + 0.5 * normal(&mut rng) + on * d(m));
            let workload = normal(&mut rng) + on * (d(Metric::Tlx) + d(Metric::RawTlx));
            let performance = normal(&mut rng) + on * d(Metric::Wp);
            let accuracy = normal(&mut rng) + on * d(Metric::FMeasure);
            let soundness = accuracy + on * d(Metric::Precision);
            let coverage = accuracy + on * d(Metric::Recall);
            let speed = normal(&mut rng) + on * d(Metric::ExecutionTime);

            let instruments = InstrumentResponse {
                sus: Some(sus(&mut rng, usability)),
                pssuq: Some(pssuq(&mut rng, satisfaction, sub)),
                tlx: Some(tlx(&mut rng, workload)),
                wp: Some(wp(&mut rng, performance)),
            };
            let mut results = BTreeMap::new();
            for task in TaskId::ALL {
                let u: f64 = rng.random();
                let status = if u < 0.02 {
                    CompletionStatus::DidNotStart
                } else if u < 0.06 {
                    CompletionStatus::DidNotFinish
                } else {
                    CompletionStatus::Completed
                };
                // Unfinished attempts are abandoned after somewhat longer
                // than a completion would have taken.
                let effort = 300.0 + 60.0 * speed + 30.0 * normal(&mut rng);
                let time = match status {
                    CompletionStatus::DidNotStart => None,
                    CompletionStatus::DidNotFinish => Some((1.3 * effort).round().clamp(30.0, TIME_LIMIT)),
                    CompletionStatus::Completed => Some(effort.round().clamp(30.0, TIME_LIMIT)),
                };
                let (submission_path, graph) = if status == CompletionStatus::DidNotStart {
                    (None, None)
                } else {
                    let miss = 0.6 * logistic(-2.0 - coverage);
                    let spurious = 0.6 * logistic(-2.0 - soundness);
                    let graph = submission(&mut rng, &graphs[&task], miss, spurious, &format!("{id} {task}"));
                    (Some(format!("{SUBMISSIONS_DIR}/{id}/{task}.nt")), Some(graph))
                };
                results.insert(
                    task,
                    TaskResult {
                        status,
                        execution_time_seconds: time,
                        submission_path,
                        submission: graph,
                    },
                );
            }
            participants.push(Participant {
                record: record(&mut rng, id, &group.label),
                instruments,
                tasks: results,
                help_count: Some(rng.random_range(0..3)),
            });
        }
    }

    Ok(StudyDataset {
        format_version: FORMAT_VERSION,
        study_id: format!("synthetic-{}x{}-seed{}", spec.groups, spec.participants_per_group, spec.seed),
        timing_method: "screen recording, first to last interaction".into(),
        time_limit_seconds: Some(TIME_LIMIT),
        variant_note: None,
        naming_policy: Some("IRIs built from lowercase first-last names, percent-encoded".into()),
        missing_submissions_as_did_not_start: false,
        groups,
        tasks,
        participants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        let spec = SynthSpec::new(3, 4, 7).with_effect(Metric::Tlx, 1.0);
        let a = synth_study(&spec).unwrap();
        assert_eq!(a, synth_study(&spec).unwrap());
        assert_eq!(a.participants.len(), 12);
        assert_eq!(a.group_labels(), ["A", "B", "C"]);
        assert_ne!(a, synth_study(&SynthSpec { seed: 8, ..spec }).unwrap());
    }

    #[test]
    fn rejects_bad_specs() {
        for spec in [
            SynthSpec::new(0, 5, 1),
            SynthSpec::new(2, 1, 1),
        ] {
            assert!(matches!(synth_study(&spec), Err(PipelineError::InvalidSynthSpec(_))));
        }
        for d in [f64::NAN, 50.0] {
            let spec = SynthSpec::new(2, 5, 1).with_effect(Metric::Sus, d);
            assert!(matches!(synth_study(&spec), Err(PipelineError::InvalidEffectSize(_))));
        }
    }
}
