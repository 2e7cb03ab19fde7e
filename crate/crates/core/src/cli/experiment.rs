//! Scripted experiments: a JSON file listing steps, each an argument vector
//! for one subcommand, optionally with expected result fields.

use std::fs;
use std::thread;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::commands::Outcome;
use super::spec::SpecContext;
use super::{report_for, CliError, ExperimentArgs, GlobalOpts};

const SUBCOMMANDS: [&str; 8] = [
    "group", "fn", "simulate", "reduce", "degree", "dtree", "costproxy", "harddist",
];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Overrides `--seed` for every step that does not set its own.
    #[serde(default)]
    pub seed: Option<u64>,
    /// Where the combined report goes when `--out` is not given.
    #[serde(default)]
    pub out: Option<String>,
    pub steps: Vec<ExperimentStep>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentStep {
    #[serde(default)]
    pub name: Option<String>,
    pub args: Vec<String>,
    /// Fields the step's result must contain (objects match recursively).
    #[serde(default)]
    pub expect: Option<Value>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.steps.is_empty() {
            return Err(CliError::Usage("experiment has no steps".into()));
        }
        for (i, s) in self.steps.iter().enumerate() {
            let head = s.args.first().map(String::as_str).unwrap_or("");
            if !SUBCOMMANDS.contains(&head) {
                return Err(CliError::Usage(format!("step {} uses unknown subcommand {head:?}", i + 1)));
            }
        }
        Ok(())
    }
}

fn has_flag(args: &[String], flag: &str) -> bool {
    args.iter().any(|a| a == flag || a.starts_with(&format!("{flag}=")))
}

/// Argument vector for a step, inheriting seed and solver flags.
fn step_argv(step: &ExperimentStep, seed: u64, g: &GlobalOpts) -> Vec<String> {
    let mut argv = vec!["symlab".to_string()];
    argv.extend(step.args.iter().cloned());
    if !has_flag(&step.args, "--seed") {
        argv.extend(["--seed".into(), seed.to_string()]);
    }
    let pinned = has_flag(&step.args, "--exact") || has_flag(&step.args, "--float");
    if g.exact && !pinned {
        argv.push("--exact".into());
    }
    if g.float && !pinned {
        argv.push("--float".into());
    }
    if let (Some(cap), false) = (g.cap, has_flag(&step.args, "--cap")) {
        argv.extend(["--cap".into(), cap.to_string()]);
    }
    argv
}

/// `expected ⊆ actual`, recursively through objects.
pub fn matches(expected: &Value, actual: &Value) -> bool {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => e.iter().all(|(k, v)| a.get(k).is_some_and(|av| matches(v, av))),
        _ => expected == actual,
    }
}

fn run_step(step: &ExperimentStep, argv: Vec<String>) -> Value {
    let shown: Vec<String> = argv[1..].to_vec();
    match report_for(argv) {
        Ok(report) => {
            let ok = report.failure.is_none()
                && step.expect.as_ref().is_none_or(|e| matches(e, &report.result));
            json!({ "name": step.name, "args": shown, "ok": ok, "report": report.to_json() })
        }
        Err(e) => json!({
            "name": step.name,
            "args": shown,
            "ok": false,
            "error": { "name": e.name(), "message": e.to_string() },
        }),
    }
}

pub fn run(a: &ExperimentArgs, g: &GlobalOpts, ctx: &mut SpecContext) -> Result<Outcome, CliError> {
    let path = a.spec.display().to_string();
    let bytes = fs::read(&a.spec).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    ctx.files.push((path.clone(), bytes.clone()));
    let spec: ExperimentSpec =
        serde_json::from_slice(&bytes).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    spec.validate()?;
    let seed = spec.seed.unwrap_or(g.seed);
    let argvs: Vec<Vec<String>> = spec.steps.iter().map(|s| step_argv(s, seed, g)).collect();

    let steps: Vec<Value> = if a.parallel {
        thread::scope(|scope| {
            let handles: Vec<_> = spec
                .steps
                .iter()
                .zip(argvs.iter().cloned())
                .map(|(s, argv)| scope.spawn(move || run_step(s, argv)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("step thread panicked")).collect()
        })
    } else {
        spec.steps.iter().zip(argvs).map(|(s, argv)| run_step(s, argv)).collect()
    };

    let passed = steps.iter().filter(|s| s["ok"] == json!(true)).count();
    let failed = steps.len() - passed;
    let failure = (failed > 0).then(|| CliError::Domain {
        name: "ExperimentFailed",
        message: format!("{failed} of {} steps failed", steps.len()),
    });
    let v = json!({
        "spec": path,
        "seed": seed,
        "out": spec.out,
        "passed": passed,
        "failed": failed,
        "steps": steps,
    });
    Ok(("experiment".into(), v, failure))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_matching() {
        let actual = json!({"a": 1, "b": {"c": true, "d": "x"}});
        assert!(matches(&json!({"b": {"c": true}}), &actual));
        assert!(!matches(&json!({"b": {"c": false}}), &actual));
        assert!(!matches(&json!({"z": 1}), &actual));
    }
}
