//! `responses.csv`: one row per participant.
//!
//! Columns (all cells trimmed; a blank cell means "not recorded"):
//!
//! | column | content |
//! |---|---|
//! | `participant_id`, `group` | opaque id, declared group label |
//! | `role` | `undergraduate-student`, `master-student`, `phd-student`, `postdoc`, `academic-staff`, `industry-practitioner`, `other` |
//! | `training` | `;`-separated list |
//! | `competency_<name>` | 1-5, one column per technology |
//! | `motivation_enjoyment`, `motivation_curiosity`, `motivation_value` | 1-5 |
//! | `participation` | `voluntary` or `mandatory` |
//! | `sus_q1`..`sus_q10` | 1-5 |
//! | `pssuq_q1`..`pssuq_q16`, `pssuq_c1`..`pssuq_c16` | 1-7 or `NA`; comments |
//! | `tlx_mental` .. `tlx_frustration` | 0-100 |
//! | `tlx_pair_1`..`tlx_pair_15` | `WINNER>LOSER` factor codes, or the winner code of the k-th pair |
//! | `wp_d1`..`wp_d8` | 0-100 |
//! | `t1_status`..`t5_status`, `t1_time`..`t5_time` | `C`/`DNF`/`DNS`, seconds |
//! | `t1_file`..`t5_file` (optional) | submission path relative to the study root |
//! | `help_count` (optional) | facilitator interventions |
//!
//! An instrument whose cells are all blank is treated as not administered;
//! a partially filled instrument is an error.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim, WriterBuilder};

use super::{StudyDataset, StudyError, TaskId, SUBMISSIONS_DIR};
use crate::compare::CompletionStatus;
use crate::instruments::{
    InstrumentResponse, Likert, Motivation, PairwiseChoice, ParticipantRecord, ParticipationMode,
    PssuqResponse, Role, SusResponse, TlxFactor, TlxResponse, WpResponse,
};

pub(super) const TLX_COLUMNS: [&str; 6] = [
    "tlx_mental",
    "tlx_physical",
    "tlx_temporal",
    "tlx_performance",
    "tlx_effort",
    "tlx_frustration",
];
const COMPETENCY_PREFIX: &str = "competency_";

pub(super) struct TaskEntry {
    pub status: CompletionStatus,
    pub time: Option<f64>,
    pub file: Option<String>,
}

pub(super) struct ResponseRow {
    pub record: ParticipantRecord,
    pub instruments: InstrumentResponse,
    pub tasks: BTreeMap<TaskId, TaskEntry>,
    pub help_count: Option<u32>,
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

struct Row<'a> {
    path: &'a Path,
    index: &'a HashMap<String, usize>,
    record: &'a StringRecord,
    line: u64,
}

impl Row<'_> {
    fn get(&self, column: &str) -> Option<&str> {
        let i = *self.index.get(column)?;
        self.record.get(i).filter(|v| !v.is_empty())
    }

    fn err(&self, column: &str, message: impl std::fmt::Display) -> StudyError {
        StudyError::schema(self.path, column, format!("line {}: {message}", self.line))
    }

    fn required(&self, column: &str) -> Result<&str, StudyError> {
        self.get(column).ok_or_else(|| self.err(column, "value is required"))
    }

    fn number<T: std::str::FromStr>(&self, column: &str, value: &str) -> Result<T, StudyError> {
        value.parse().map_err(|_| self.err(column, format!("{value:?} is not a valid number")))
    }

    fn likert(&self, column: &str) -> Result<Likert, StudyError> {
        let v: u8 = self.number(column, self.required(column)?)?;
        Likert::new(v).map_err(|e| self.err(column, e))
    }

    /// Cells of an instrument block: `None` when all are blank.
    fn block(&self, columns: &[String]) -> Result<Option<Vec<&str>>, StudyError> {
        let cells: Vec<Option<&str>> = columns.iter().map(|c| self.get(c)).collect();
        if cells.iter().all(Option::is_none) {
            return Ok(None);
        }
        match columns.iter().zip(&cells).find(|(_, v)| v.is_none()) {
            Some((c, _)) => Err(self.err(c, "instrument is partially filled")),
            None => Ok(Some(cells.into_iter().flatten().collect())),
        }
    }
}

fn parse_record(row: &Row, groups: &[&str], competencies: &[String]) -> Result<ParticipantRecord, StudyError> {
    let participant_id = row.required("participant_id")?.to_string();
    if participant_id.contains(['/', '\\']) || participant_id.starts_with('.') {
        return Err(row.err("participant_id", "must be usable as a directory name"));
    }
    let group_label = row.required("group")?.to_string();
    if !groups.contains(&group_label.as_str()) {
        return Err(row.err("group", format!("undeclared group {group_label:?}")));
    }
    let role_text = row.required("role")?;
    let current_role = Role::from_code(role_text).ok_or_else(|| row.err("role", format!("unknown role {role_text:?}")))?;
    let formal_training = row
        .get("training")
        .map(|t| t.split(';').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
        .unwrap_or_default();
    let mut comp = BTreeMap::new();
    for column in competencies {
        if row.get(column).is_some() {
            comp.insert(column[COMPETENCY_PREFIX.len()..].to_string(), row.likert(column)?);
        }
    }
    let motivation = Motivation {
        enjoyment: row.likert("motivation_enjoyment")?,
        curiosity: row.likert("motivation_curiosity")?,
        value: row.likert("motivation_value")?,
    };
    let participation_mode = match row.required("participation")?.to_ascii_lowercase().as_str() {
        "voluntary" => ParticipationMode::Voluntary,
        "mandatory" => ParticipationMode::Mandatory,
        other => return Err(row.err("participation", format!("expected voluntary or mandatory, got {other:?}"))),
    };
    Ok(ParticipantRecord {
        participant_id,
        group_label,
        current_role,
        formal_training,
        competencies: comp,
        motivation,
        participation_mode,
    })
}

fn parse_instruments(row: &Row) -> Result<InstrumentResponse, StudyError> {
    let sus_cols = numbered("sus_q", 10);
    let sus = match row.block(&sus_cols)? {
        None => None,
        Some(cells) => {
            let mut items = Vec::with_capacity(10);
            for (c, v) in sus_cols.iter().zip(cells) {
                items.push(row.number::<u8>(c, v)?);
            }
            Some(SusResponse::new(&items).map_err(|e| row.err("sus", e))?)
        }
    };

    let pssuq_cols = numbered("pssuq_q", 16);
    let comment_cols = numbered("pssuq_c", 16);
    let comments: Vec<Option<String>> = comment_cols.iter().map(|c| row.get(c).map(String::from)).collect();
    let pssuq = match row.block(&pssuq_cols)? {
        None => {
            if let Some(i) = comments.iter().position(Option::is_some) {
                return Err(row.err(&comment_cols[i], "comment given but PSSUQ not answered"));
            }
            None
        }
        Some(cells) => {
            let mut items = Vec::with_capacity(16);
            for (c, v) in pssuq_cols.iter().zip(cells) {
                items.push(if v.eq_ignore_ascii_case("NA") { None } else { Some(row.number::<u8>(c, v)?) });
            }
            Some(PssuqResponse::new(&items, comments).map_err(|e| row.err("pssuq", e))?)
        }
    };

    let tlx_cols: Vec<String> = TLX_COLUMNS.iter().map(|s| s.to_string()).collect();
    let pair_cols = numbered("tlx_pair_", 15);
    let pairs = row.block(&pair_cols)?;
    let tlx = match row.block(&tlx_cols)? {
        None => {
            if pairs.is_some() {
                return Err(row.err("tlx_pair_1", "pairwise choices given without ratings"));
            }
            None
        }
        Some(cells) => {
            let mut ratings = Vec::with_capacity(6);
            for (c, v) in tlx_cols.iter().zip(cells) {
                ratings.push(row.number::<f64>(c, v)?);
            }
            let choices = match pairs {
                None => None,
                Some(cells) => {
                    let mut out = Vec::with_capacity(15);
                    for ((c, v), (a, b)) in pair_cols.iter().zip(cells).zip(TlxFactor::pairs()) {
                        out.push(parse_pair(v, a, b).map_err(|m| row.err(c, m))?);
                    }
                    Some(out)
                }
            };
            Some(TlxResponse::new(&ratings, choices).map_err(|e| row.err("tlx", e))?)
        }
    };

    let wp_cols = numbered("wp_d", 8);
    let wp = match row.block(&wp_cols)? {
        None => None,
        Some(cells) => {
            let mut ratings = Vec::with_capacity(8);
            for (c, v) in wp_cols.iter().zip(cells) {
                ratings.push(row.number::<f64>(c, v)?);
            }
            Some(WpResponse::new(&ratings).map_err(|e| row.err("wp", e))?)
        }
    };
    Ok(InstrumentResponse { sus, pssuq, tlx, wp })
}

/// `WINNER>LOSER`, or a bare winner code naming one factor of the column's
/// own pair `(a, b)`.
fn parse_pair(cell: &str, a: TlxFactor, b: TlxFactor) -> Result<PairwiseChoice, String> {
    if cell.contains('>') {
        return PairwiseChoice::parse(cell).map_err(|e| e.to_string());
    }
    let winner = TlxFactor::from_code(cell).map_err(|e| e.to_string())?;
    match winner {
        w if w == a => Ok(PairwiseChoice::new(a, b)),
        w if w == b => Ok(PairwiseChoice::new(b, a)),
        w => Err(format!("{w} is not part of the pair {a}/{b}")),
    }
}

fn parse_tasks(row: &Row) -> Result<BTreeMap<TaskId, TaskEntry>, StudyError> {
    let mut out = BTreeMap::new();
    for task in TaskId::ALL {
        let p = task.column_prefix();
        let status_col = format!("{p}_status");
        let time_col = format!("{p}_time");
        let code = row.required(&status_col)?;
        let status = CompletionStatus::from_code(code)
            .ok_or_else(|| row.err(&status_col, format!("expected C, DNF or DNS, got {code:?}")))?;
        let time = match row.get(&time_col) {
            None => None,
            Some(v) => {
                let t: f64 = row.number(&time_col, v)?;
                if !t.is_finite() || t < 0.0 {
                    return Err(row.err(&time_col, "time must be a non-negative number of seconds"));
                }
                Some(t)
            }
        };
        match (status, time) {
            (CompletionStatus::Completed, None) => {
                return Err(row.err(&time_col, "a completed task needs its execution time"))
            }
            (CompletionStatus::DidNotStart, Some(_)) => {
                return Err(row.err(&time_col, "a task that was not started has no execution time"))
            }
            _ => {}
        }
        out.insert(
            task,
            TaskEntry {
                status,
                time,
                file: row.get(&format!("{p}_file")).map(String::from),
            },
        );
    }
    Ok(out)
}

pub(super) fn read_responses(path: &Path, text: &str, groups: &[&str]) -> Result<Vec<ResponseRow>, StudyError> {
    let mut reader = ReaderBuilder::new().trim(Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| StudyError::schema(path, "(header)", e))?.clone();
    let mut index = HashMap::new();
    for (i, h) in headers.iter().enumerate() {
        if index.insert(h.to_string(), i).is_some() {
            return Err(StudyError::schema(path, h, "duplicate column"));
        }
    }
    for required in ["participant_id", "group"] {
        if !index.contains_key(required) {
            return Err(StudyError::schema(path, required, "column is missing"));
        }
    }
    let mut competencies: Vec<String> = headers
        .iter()
        .filter(|h| h.starts_with(COMPETENCY_PREFIX) && h.len() > COMPETENCY_PREFIX.len())
        .map(String::from)
        .collect();
    competencies.sort();

    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for result in reader.records() {
        let record = result.map_err(|e| StudyError::schema(path, "(row)", e))?;
        let row = Row {
            path,
            index: &index,
            record: &record,
            line: record.position().map_or(0, |p| p.line()),
        };
        let participant = parse_record(&row, groups, &competencies)?;
        if !seen.insert(participant.participant_id.clone()) {
            return Err(row.err("participant_id", format!("duplicate participant {:?}", participant.participant_id)));
        }
        let help_count = match row.get("help_count") {
            None => None,
            Some(v) => Some(row.number::<u32>("help_count", v)?),
        };
        rows.push(ResponseRow {
            record: participant,
            instruments: parse_instruments(&row)?,
            tasks: parse_tasks(&row)?,
            help_count,
        });
    }
    Ok(rows)
}

fn default_path(participant: &str, task: TaskId, path: &str) -> bool {
    ["nt", "ttl"]
        .iter()
        .any(|ext| path == format!("{SUBMISSIONS_DIR}/{participant}/{task}.{ext}"))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders the participants of `ds` in the column layout read above.
pub(super) fn write_responses(ds: &StudyDataset) -> String {
    let competencies: BTreeSet<&str> = ds
        .participants
        .iter()
        .flat_map(|p| p.record.competencies.keys().map(String::as_str))
        .collect();
    let explicit_files = ds.participants.iter().any(|p| {
        p.tasks.iter().any(|(t, r)| {
            r.submission_path.as_deref().is_some_and(|path| !default_path(p.id(), *t, path))
        })
    });
    let help = ds.participants.iter().any(|p| p.help_count.is_some());

    let mut header: Vec<String> = ["participant_id", "group", "role", "training"].map(String::from).to_vec();
    header.extend(competencies.iter().map(|c| format!("{COMPETENCY_PREFIX}{c}")));
    header.extend(["motivation_enjoyment", "motivation_curiosity", "motivation_value", "participation"].map(String::from));
    header.extend(numbered("sus_q", 10));
    header.extend(numbered("pssuq_q", 16));
    header.extend(numbered("pssuq_c", 16));
    header.extend(TLX_COLUMNS.map(String::from));
    header.extend(numbered("tlx_pair_", 15));
    header.extend(numbered("wp_d", 8));
    for t in TaskId::ALL {
        header.push(format!("{}_status", t.column_prefix()));
        header.push(format!("{}_time", t.column_prefix()));
    }
    if explicit_files {
        header.extend(TaskId::ALL.map(|t| format!("{}_file", t.column_prefix())));
    }
    if help {
        header.push("help_count".into());
    }

    let mut w = WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    for p in &ds.participants {
        let r = &p.record;
        let mut row: Vec<String> = vec![
            r.participant_id.clone(),
            r.group_label.clone(),
            r.current_role.code().to_string(),
            r.formal_training.join(";"),
        ];
        row.extend(competencies.iter().map(|c| opt(r.competencies.get(*c).map(|l| l.get()))));
        row.extend([r.motivation.enjoyment, r.motivation.curiosity, r.motivation.value].map(|l| l.get().to_string()));
        row.push(
            match r.participation_mode {
                ParticipationMode::Voluntary => "voluntary",
                ParticipationMode::Mandatory => "mandatory",
            }
            .into(),
        );
        let ins = &p.instruments;
        match &ins.sus {
            Some(s) => row.extend(s.items().iter().map(u8::to_string)),
            None => row.extend(std::iter::repeat_n(String::new(), 10)),
        }
        match &ins.pssuq {
            Some(q) => {
                row.extend(q.items().iter().map(|v| v.map_or("NA".to_string(), |x| x.to_string())));
                row.extend(q.comments().iter().map(|c| c.clone().unwrap_or_default()));
            }
            None => row.extend(std::iter::repeat_n(String::new(), 32)),
        }
        match &ins.tlx {
            Some(t) => {
                row.extend(t.ratings().iter().map(f64::to_string));
                match t.choices() {
                    Some(c) => row.extend(c.iter().map(PairwiseChoice::to_string)),
                    None => row.extend(std::iter::repeat_n(String::new(), 15)),
                }
            }
            None => row.extend(std::iter::repeat_n(String::new(), 21)),
        }
        match &ins.wp {
            Some(wp) => row.extend(wp.ratings().iter().map(f64::to_string)),
            None => row.extend(std::iter::repeat_n(String::new(), 8)),
        }
        for t in TaskId::ALL {
            let res = &p.tasks[&t];
            row.push(res.status.code().to_string());
            row.push(opt(res.execution_time_seconds));
        }
        if explicit_files {
            row.extend(TaskId::ALL.map(|t| p.tasks[&t].submission_path.clone().unwrap_or_default()));
        }
        if help {
            row.push(opt(p.help_count));
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_cells() {
        use TlxFactor::*;
        assert_eq!(parse_pair("PD", MentalDemand, PhysicalDemand), Ok(PairwiseChoice::new(PhysicalDemand, MentalDemand)));
        assert_eq!(parse_pair("md>pd", MentalDemand, PhysicalDemand), Ok(PairwiseChoice::new(MentalDemand, PhysicalDemand)));
        assert!(parse_pair("FR", MentalDemand, PhysicalDemand).is_err());
        assert!(parse_pair("XX", MentalDemand, PhysicalDemand).is_err());
    }
}
