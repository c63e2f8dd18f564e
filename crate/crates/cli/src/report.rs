use std::fmt::Write as _;
use std::time::Instant;

use mtafrac::mta::{Bounds, MultiTapeAutomaton, Verdict3};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Serialize)]
pub struct Stage {
    pub name: String,
    pub millis: f64,
}

#[derive(Debug, Serialize)]
pub struct NamedVerdict {
    pub query: String,
    /// `yes`, `no` or `unknown`.
    pub verdict: String,
    #[serde(flatten)]
    pub detail: Value,
}

#[derive(Debug, Serialize)]
pub struct Artifact {
    pub kind: String,
    pub path: String,
}

/// Everything a command did, in order. Only `millis` varies between runs
/// with the same inputs and flags.
#[derive(Debug, Default, Serialize)]
pub struct PipelineReport {
    pub command: String,
    pub stages: Vec<Stage>,
    pub verdicts: Vec<NamedVerdict>,
    pub artifacts: Vec<Artifact>,
    pub bounds: Option<Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density_trend: Option<Vec<Value>>,
}

pub fn bounds_json(b: &Bounds) -> Value {
    json!({
        "max_prefix_len": b.max_prefix_len,
        "max_ext_len": b.max_ext_len,
        "overhang_cap": b.overhang_cap,
        "max_beliefs": b.max_beliefs,
    })
}

impl PipelineReport {
    pub fn new(command: &str) -> Self {
        PipelineReport {
            command: command.to_string(),
            ..Default::default()
        }
    }

    /// Runs `f` as a named, timed stage.
    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.stages.push(Stage {
            name: name.to_string(),
            millis: t.elapsed().as_secs_f64() * 1e3,
        });
        out
    }

    pub fn verdict(
        &mut self,
        query: impl Into<String>,
        m: Option<&MultiTapeAutomaton>,
        v: &Verdict3,
    ) {
        let mut detail = mtafrac::io::verdict_json(m, v);
        let verdict = detail["verdict"].as_str().unwrap_or_default().to_string();
        if let Some(o) = detail.as_object_mut() {
            o.remove("verdict");
        }
        self.push_verdict(query, &verdict, detail);
    }

    pub fn push_verdict(&mut self, query: impl Into<String>, verdict: &str, detail: Value) {
        self.verdicts.push(NamedVerdict {
            query: query.into(),
            verdict: verdict.to_string(),
            detail,
        });
    }

    pub fn artifact(&mut self, kind: &str, path: &std::path::Path) {
        self.artifacts.push(Artifact {
            kind: kind.to_string(),
            path: path.display().to_string(),
        });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "== {}", self.command);
        for st in &self.stages {
            let _ = writeln!(s, "stage {:<12} {:>10.1} ms", st.name, st.millis);
        }
        for v in &self.verdicts {
            let _ = writeln!(s, "{}: {}", v.query, v.verdict);
            if let Some(w) = v.detail.get("witness").filter(|w| !w.is_null()) {
                let _ = writeln!(s, "  witness: {}", describe_witness(w));
            }
            if let Some(n) = v.detail.get("note").and_then(Value::as_str) {
                let _ = writeln!(s, "  note: {n}");
            }
            if let Some(b) = v.detail.get("bounds") {
                let _ = writeln!(s, "  bounds: {}", describe_bounds(b));
            }
        }
        if let Some(t) = &self.density_trend {
            let _ = writeln!(s, "density trend (advisory):");
            let _ = writeln!(
                s,
                "  {:>3} {:>10} {:>10} {:>8}",
                "k", "boxes", "density", "dim"
            );
            if t.is_empty() {
                let _ = writeln!(s, "  (depth 1 already exceeds the box limit)");
            }
            for row in t {
                let dim = row["dim_estimate"]
                    .as_f64()
                    .map_or("-".to_string(), |d| format!("{d:.4}"));
                let _ = writeln!(
                    s,
                    "  {:>3} {:>10} {:>10.6} {:>8}",
                    row["depth"],
                    row["count"],
                    row["density"].as_f64().unwrap_or(f64::NAN),
                    dim
                );
            }
        }
        for a in &self.artifacts {
            let _ = writeln!(s, "wrote {} {}", a.kind, a.path);
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }

    /// Exit status of the last verdict: 0 yes, 1 no, 3 unknown.
    pub fn exit_code(&self) -> u8 {
        match self.verdicts.last().map(|v| v.verdict.as_str()) {
            Some("yes") | None => 0,
            Some("no") => 1,
            _ => 3,
        }
    }
}

fn describe_witness(w: &Value) -> String {
    let kind = w["kind"].as_str().unwrap_or("?");
    let field = |k: &str| {
        w.get(k)
            .map(|v| v.as_str().map_or(v.to_string(), str::to_string))
    };
    match kind {
        "dead-prefix" => format!("dead prefix {}", field("prefix").unwrap_or_default()),
        "dead-extension" => format!(
            "dead extension {} (prefix {})",
            field("extension").unwrap_or_default(),
            field("prefix").unwrap_or_default()
        ),
        "universal-prefix" => format!(
            "universal prefix {} (certificate {}, {} beliefs)",
            field("prefix").unwrap_or_default(),
            field("digest").unwrap_or_default(),
            field("beliefs").unwrap_or_default()
        ),
        "certificate" => format!(
            "closed belief family {} ({} beliefs)",
            field("digest").unwrap_or_default(),
            field("beliefs").unwrap_or_default()
        ),
        "prefix-pcp-solution" => format!(
            "prefix-PCP solution {} / {} with common word {}",
            field("upper").unwrap_or_default(),
            field("lower").unwrap_or_default(),
            field("common_word").unwrap_or_default()
        ),
        "run" => format!(
            "accepting lasso, stem {} cycle {}",
            field("stem").unwrap_or_default(),
            field("cycle").unwrap_or_default()
        ),
        "exhausted-quotient-graph" => format!(
            "no accepting lasso (input digest {})",
            field("digest").unwrap_or_default()
        ),
        _ => w.to_string(),
    }
}

fn describe_bounds(b: &Value) -> String {
    format!(
        "prefix ≤ {}, extension ≤ {}, overhang ≤ {}, beliefs ≤ {}",
        b["max_prefix_len"], b["max_ext_len"], b["overhang_cap"], b["max_beliefs"]
    )
}
