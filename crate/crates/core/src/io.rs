//! JSON task-set documents and file helpers.
//!
//! ```json
//! {"name": "demo", "tasks": [{"c": "1/4", "d": "1", "t": "4096"}]}
//! ```
//!
//! Values are strings holding an integer, a fraction `p/q` or a decimal
//! literal; decimals convert exactly. Task ids follow document order.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::generate::DvpInstance;
use crate::rational::Rational;
use crate::task::{Task, TaskSet};

#[derive(Debug, Deserialize)]
struct RawDocument {
    #[serde(default)]
    name: Option<String>,
    tasks: Vec<RawTask>,
}

#[derive(Debug, Deserialize)]
struct RawTask {
    c: Value,
    d: Value,
    t: Value,
}

#[derive(Serialize)]
struct TaskSetDocument<'a> {
    name: &'a str,
    tasks: Vec<TaskEntry<'a>>,
}

#[derive(Serialize)]
struct TaskEntry<'a> {
    c: &'a Rational,
    d: &'a Rational,
    t: &'a Rational,
}

fn field(value: &Value, index: usize, name: &str) -> Result<Rational> {
    match value {
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::Parse(format!("tasks[{index}].{name}: invalid rational {s:?}"))),
        other => Err(Error::Parse(format!(
            "tasks[{index}].{name}: expected a string such as \"3/4\" or \"0.25\", found {other}"
        ))),
    }
}

/// Parses and validates a task-set document.
pub fn parse_taskset(bytes: &[u8]) -> Result<TaskSet> {
    let ts = parse_taskset_unchecked(bytes)?;
    let violations = ts.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidTaskSet(violations));
    }
    Ok(ts)
}

/// Parses a task-set document without enforcing the model assumptions.
pub fn parse_taskset_unchecked(bytes: &[u8]) -> Result<TaskSet> {
    let raw: RawDocument =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    let tasks = raw
        .tasks
        .iter()
        .enumerate()
        .map(|(i, t)| {
            Ok(Task::new(
                i,
                field(&t.c, i, "c")?,
                field(&t.d, i, "d")?,
                field(&t.t, i, "t")?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TaskSet::new(raw.name.unwrap_or_default(), tasks))
}

/// Canonical pretty JSON, newline terminated. Tasks are written in id order
/// so that parsing the output reproduces the same ids.
pub fn serialize_taskset(ts: &TaskSet) -> String {
    let mut tasks: Vec<&Task> = ts.iter().collect();
    tasks.sort_by_key(|t| t.id);
    let doc = TaskSetDocument {
        name: &ts.name,
        tasks: tasks
            .into_iter()
            .map(|t| TaskEntry {
                c: &t.c,
                d: &t.d,
                t: &t.t,
            })
            .collect(),
    };
    to_pretty(&doc)
}

pub fn parse_dvp(bytes: &[u8]) -> Result<DvpInstance> {
    let dvp: DvpInstance =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
    dvp.validate()?;
    Ok(dvp)
}

pub fn serialize_dvp(dvp: &DvpInstance) -> String {
    to_pretty(dvp)
}

pub fn to_pretty<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory serialization");
    s.push('\n');
    s
}

pub fn read_taskset(path: &Path) -> Result<TaskSet> {
    let bytes = std::fs::read(path)?;
    parse_taskset(&bytes)
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so readers never observe a partially written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
