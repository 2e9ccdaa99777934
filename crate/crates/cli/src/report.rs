use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Bounded,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Bounded => "bounded",
        }
    }
}

/// Outcome of one command before it is wrapped into a report.
pub struct Outcome {
    pub result: Value,
    pub text: String,
    pub verdict: Verdict,
    pub exit: i32,
}

impl Outcome {
    pub fn pass(result: Value, text: String) -> Self {
        Outcome {
            result,
            text,
            verdict: Verdict::Pass,
            exit: 0,
        }
    }
}

/// `sha256` over the command, its parameters and the bytes of every input.
pub fn inputs_digest(command: &str, params: &Value, files: &[(String, Vec<u8>)]) -> String {
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0]);
    h.update(params.to_string().as_bytes());
    for (name, bytes) in files {
        h.update([0]);
        h.update(name.as_bytes());
        h.update([0]);
        h.update(bytes);
    }
    format!("{:x}", h.finalize())
}

pub fn report(
    command: &str,
    params: Value,
    digest: String,
    outcome: &Outcome,
    timing_ms: u128,
) -> Value {
    json!({
        "command": command,
        "params": params,
        "inputs_digest": digest,
        "result": outcome.result,
        "verdict": outcome.verdict.as_str(),
        "timing_ms": timing_ms,
    })
}
