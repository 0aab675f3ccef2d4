use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::One;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::back_forth::{bf_run, make_fibred_sample, s0_experiment, FibredGraph};
use crate::decomposition::{linear_isometry_group, linf_decomposition, DEFAULT_VERTEX_LIMIT};
use crate::exact_geometry::{Rational, Vector};
use crate::random_graphs::{
    bernoulli_subgraph, bj_audit, edge_agreement_probability, read_graph, sample_typical_points, unit_graph, write_graph, Typicality,
};
use crate::rng::derive_seed;
use crate::step_isometry::{verify_step_isometry, StepCheck};

use super::{read_file, CliError, Command, ExperimentConfig, Format};

/// A finished run: the report text plus the audit verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub text: String,
    pub audits_passed: bool,
    /// Human-readable notes for standard error.
    pub diagnostics: Vec<String>,
}

impl RunOutput {
    fn json(config: &ExperimentConfig, mut body: Value, audits_passed: bool) -> Self {
        body["config"] = config_value(config);
        let mut text = serde_json::to_string_pretty(&body).expect("report serialises");
        text.push('\n');
        RunOutput { text, audits_passed, diagnostics: Vec::new() }
    }
}

fn config_value(config: &ExperimentConfig) -> Value {
    serde_json::to_value(config).expect("config serialises")
}

fn csv_header(config: &ExperimentConfig) -> String {
    format!("# rado-lab {}\n", serde_json::to_string(&config_value(config)).expect("config serialises"))
}

#[derive(Deserialize)]
struct MapFile {
    pairs: Vec<(Vector, Vector)>,
}

/// Dispatches to the owning module. Output depends only on the config.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput, CliError> {
    match &config.command {
        Command::Decompose { ball } => {
            let dec = linf_decomposition(&ball.ball)?;
            let order = if ball.ball.vertices().len() <= DEFAULT_VERTEX_LIMIT {
                Some(linear_isometry_group(&ball.ball, DEFAULT_VERTEX_LIMIT)?.len())
            } else {
                None
            };
            let body = json!({
                "d_inf": dec.linf_dim(),
                "linf_directions": dec.directions(),
                "u_basis": dec.u_basis,
                "isometry_group_order": order,
            });
            Ok(RunOutput::json(config, body, true))
        }
        Command::CheckStepIsometry { ball, map } => {
            let text = read_file(map)?;
            let file: MapFile = serde_json::from_str(&text).map_err(|e| CliError::Input { path: map.clone(), message: e.to_string() })?;
            let check = verify_step_isometry(&ball.ball, &file.pairs)?;
            let mut body = json!({ "pairs": file.pairs.len(), "check": check });
            let mut diagnostics = Vec::new();
            if let StepCheck::Violation { i, j, domain_floor, image_floor } = check {
                let (xi, yi) = &file.pairs[i];
                let (xj, yj) = &file.pairs[j];
                body["counterexample"] = json!({ "x_i": xi, "x_j": xj, "y_i": yi, "y_j": yj });
                diagnostics.push(format!(
                    "not a step-isometry: floor ||{xi} - {xj}|| = {domain_floor} but floor ||{yi} - {yj}|| = {image_floor}"
                ));
            }
            let mut out = RunOutput::json(config, body, check.holds());
            out.diagnostics = diagnostics;
            Ok(out)
        }
        Command::SampleGraph { ball, n, window, p, seed } => {
            let dec = linf_decomposition(&ball.ball)?;
            let typicality = Typicality::for_decomposition(&dec);
            let sample = sample_typical_points(&ball.ball, &dec, window, *n, *seed, typicality)?;
            let audit = sample.audit(&dec);
            let g = bernoulli_subgraph(&unit_graph(&sample), *p, derive_seed(*seed, 1))?;
            let diagnostics = audit.as_ref().err().map(|e| vec![format!("sample audit failed: {e}")]).unwrap_or_default();
            Ok(RunOutput { text: write_graph(&g, Some(config_value(config))), audits_passed: audit.is_ok(), diagnostics })
        }
        Command::BjAudit { graph, k_max } => {
            let text = read_file(graph)?;
            let g = read_graph(&text).map_err(|e| CliError::Input { path: graph.clone(), message: e.to_string() })?;
            let report = bj_audit(&g, *k_max)?;
            let ok = report.one_sided_violations == 0;
            match config.format {
                Format::Json => Ok(RunOutput::json(config, json!({ "report": report }), ok)),
                Format::Csv => {
                    let mut text = csv_header(config);
                    text.push_str("k,pairs,satisfied,fraction\n");
                    for row in &report.rows {
                        let _ = writeln!(text, "{},{},{},{:.6}", row.k, row.pairs, row.satisfied, row.fraction);
                    }
                    let _ = writeln!(text, "# one_sided_violations {}", report.one_sided_violations);
                    let _ = writeln!(text, "# unreachable_pairs {}", report.unreachable_pairs);
                    let _ = writeln!(text, "# overall_fraction {:.6}", report.overall_fraction());
                    Ok(RunOutput { text, audits_passed: ok, diagnostics: Vec::new() })
                }
            }
        }
        Command::Agreement { p, trials, seed } => {
            let est = edge_agreement_probability(*p, *trials, *seed)?;
            let q = p.value();
            let target = &q * &q + (Rational::one() - &q) * (Rational::one() - &q);
            Ok(RunOutput::json(config, json!({ "estimate": est, "target": target.to_string() }), true))
        }
        Command::BfRun { ball, n_u, fibre_n, p, budget, seed, window } => {
            let sample = Arc::new(make_fibred_sample(&ball.ball, *n_u, *fibre_n, window, derive_seed(*seed, 0))?);
            let g = FibredGraph::new(sample.clone(), *p, derive_seed(*seed, 1));
            let g2 = FibredGraph::new(sample, *p, derive_seed(*seed, 2));
            let report = bf_run(&g, &g2, *budget, *seed)?;
            let ok = report.audits_passed;
            Ok(RunOutput::json(config, json!({ "report": report }), ok))
        }
        Command::S0Experiment { params, trials, seed } => {
            let report = s0_experiment(params, *trials, *seed)?;
            let ok = report.audits_passed;
            match config.format {
                Format::Json => Ok(RunOutput::json(config, json!({ "report": report }), ok)),
                Format::Csv => {
                    let mut text = csv_header(config);
                    text.push_str("trial,agreed,bf_completed\n");
                    for t in &report.trials {
                        let done = t.bf_completed.map(|b| b.to_string()).unwrap_or_default();
                        let _ = writeln!(text, "{},{},{}", t.trial, t.agreed, done);
                    }
                    let _ = writeln!(text, "# agreement_rate {:.6}", report.agreement_rate);
                    let _ = writeln!(text, "# conditional_rate {:.6}", report.conditional_rate);
                    let _ = writeln!(text, "# audits_passed {}", report.audits_passed);
                    Ok(RunOutput { text, audits_passed: ok, diagnostics: Vec::new() })
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_config;

    fn run_args(args: &[&str]) -> RunOutput {
        let mut v = vec!["rado-lab"];
        v.extend_from_slice(args);
        run(&parse_config(v).unwrap()).unwrap()
    }

    #[test]
    fn decompose_prism() {
        let out = run_args(&["decompose", "builtin:hexagonal_prism"]);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["d_inf"], 1);
        assert_eq!(v["isometry_group_order"], 24);
        assert_eq!(v["config"]["command"]["ball"]["source"], "builtin:hexagonal_prism");
        assert_eq!(out.text, run_args(&["decompose", "--ball", "builtin:hexagonal_prism"]).text);
    }

    #[test]
    fn agreement_target_is_exact() {
        let out = run_args(&["agreement", "--p", "3/10", "--trials", "1000"]);
        let v: Value = serde_json::from_str(&out.text).unwrap();
        assert_eq!(v["target"], "29/50");
    }
}
