use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    /// A mathematical negative: empty system, a failed verification, a
    /// golden mismatch.
    Negative,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Negative => 1,
            Status::Error => 2,
        }
    }
}

/// Output of one command: human-readable lines plus structured data.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub task: String,
    pub status: Status,
    pub data: Map<String, Value>,
    pub witnesses: Map<String, Value>,
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(task: &str) -> Self {
        Report {
            task: task.to_string(),
            status: Status::Ok,
            data: Map::new(),
            witnesses: Map::new(),
            lines: Vec::new(),
        }
    }

    pub fn error(task: &str, messages: Vec<String>) -> Self {
        let mut r = Report::new(task);
        r.status = Status::Error;
        r.data.insert("errors".into(), Value::from(messages.clone()));
        r.lines = messages.into_iter().map(|m| format!("error: {m}")).collect();
        r
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn data(&mut self, key: &str, v: impl Serialize) {
        self.data.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    pub fn witness(&mut self, key: &str, v: impl Serialize) {
        self.witnesses.insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    /// Marks a negative outcome without overriding an error.
    pub fn negative(&mut self) {
        if self.status == Status::Ok {
            self.status = Status::Negative;
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("serializable");
            s.push('\n');
            s
        } else {
            let mut s = self.lines.join("\n");
            s.push('\n');
            s
        }
    }
}
