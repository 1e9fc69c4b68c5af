use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One report entry. `millis` is wall time and is only written out when
/// timings are requested, so that reports stay byte-identical across runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    pub suite: String,
    pub item: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl Line {
    pub fn new(suite: &str, item: impl Into<String>, witness: Option<String>) -> Self {
        Line {
            suite: suite.to_string(),
            item: item.into(),
            status: if witness.is_none() { Status::Pass } else { Status::Fail },
            witness,
            millis: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Run `f` and record its verdict and duration.
pub fn timed(suite: &str, item: impl Into<String>, f: impl FnOnce() -> Option<String>) -> Line {
    let start = Instant::now();
    let witness = f();
    let mut line = Line::new(suite, item, witness);
    line.millis = Some(start.elapsed().as_millis() as u64);
    line
}

/// JSON lines, one entry per line.
pub fn render(lines: &[Line], timings: bool) -> String {
    let mut out = String::new();
    for l in lines {
        let mut l = l.clone();
        if !timings {
            l.millis = None;
        }
        out.push_str(&serde_json::to_string(&l).expect("report lines serialize"));
        out.push('\n');
    }
    out
}

pub fn all_passed(lines: &[Line]) -> bool {
    lines.iter().all(Line::passed)
}
