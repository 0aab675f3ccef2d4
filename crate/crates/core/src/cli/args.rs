use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::back_forth::{FibredWindow, S0Params};
use crate::exact_geometry::Rational;

use super::{parse_ball, parse_prob, parse_rat, CliError, Command, ExperimentConfig, Format};

/// Exact experiments on polytopal normed spaces and their random geometric graphs.
#[derive(Debug, Parser)]
#[command(name = "rado-lab", version)]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report format; csv is available for bj-audit and s0-experiment.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// l_inf-decomposition, extreme directions and isometry group order of a ball.
    Decompose {
        /// `builtin:<name>` or a ball JSON file.
        #[arg(long = "ball", value_name = "BALL", required_unless_present = "ball_pos")]
        ball: Option<String>,
        #[arg(value_name = "BALL", conflicts_with = "ball")]
        ball_pos: Option<String>,
    },
    /// Checks that a list of point pairs preserves floor distances.
    CheckStepIsometry {
        ball: String,
        /// JSON file `{"pairs": [[x, y], ...]}`.
        map: PathBuf,
    },
    /// Samples typical points and writes the graph `G_p` as JSON.
    SampleGraph {
        #[arg(long)]
        ball: String,
        #[arg(long)]
        n: usize,
        /// Half-width `R` of the cube window `[-R, R]^d`.
        #[arg(long)]
        window: String,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Hop distance against norm distance on a graph file.
    BjAudit {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long = "kmax", default_value_t = 4)]
        k_max: u32,
    },
    /// Estimates the probability that two independent coins agree.
    Agreement {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Back-and-forth game between two independent graphs on one fibred sample.
    BfRun {
        /// Ball of the `U` factor.
        #[arg(long)]
        ball: String,
        #[arg(long = "nu")]
        n_u: usize,
        #[arg(long = "fibre")]
        fibre_n: usize,
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 50)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Gadget agreement and conditional back-and-forth completion.
    S0Experiment {
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Ball of the `U` factor.
        #[arg(long, default_value = "builtin:hexagon")]
        ball: String,
        #[arg(long = "nu", default_value_t = 60)]
        n_u: usize,
        #[arg(long = "fibre", default_value_t = 200)]
        fibre_n: usize,
        #[arg(long, default_value_t = 50)]
        budget: usize,
        #[command(flatten)]
        window: WindowArgs,
    },
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    /// Half-width of the `U` window.
    #[arg(long, default_value = "8")]
    pub u_radius: String,
    /// Length of each fibre window; defaults to `1/nu`.
    #[arg(long)]
    pub fibre_length: Option<String>,
    /// Centre every fibre window at 0 instead of staggering them.
    #[arg(long)]
    pub no_stagger: bool,
}

impl WindowArgs {
    fn resolve(&self, n_u: usize) -> Result<FibredWindow, CliError> {
        if n_u == 0 {
            return Err(CliError::Usage("--nu must be at least 1".into()));
        }
        let fibre_length = match &self.fibre_length {
            Some(v) => parse_rat("fibre-length", v)?,
            None => Rational::new(1.into(), n_u.into()),
        };
        Ok(FibredWindow { u_radius: parse_rat("u-radius", &self.u_radius)?, fibre_length, stagger: !self.no_stagger })
    }
}

impl Cli {
    pub fn into_config(self) -> Result<ExperimentConfig, CliError> {
        let csv_ok = matches!(self.command, CommandArgs::BjAudit { .. } | CommandArgs::S0Experiment { .. });
        let format = self.format.unwrap_or(if csv_ok { Format::Csv } else { Format::Json });
        if format == Format::Csv && !csv_ok {
            return Err(CliError::Usage("--format csv is only available for bj-audit and s0-experiment".into()));
        }
        let command = match self.command {
            CommandArgs::Decompose { ball, ball_pos } => {
                let source = ball.or(ball_pos).expect("clap requires one ball");
                Command::Decompose { ball: parse_ball(&source)? }
            }
            CommandArgs::CheckStepIsometry { ball, map } => Command::CheckStepIsometry { ball: parse_ball(&ball)?, map },
            CommandArgs::SampleGraph { ball, n, window, p, seed } => {
                Command::SampleGraph { ball: parse_ball(&ball)?, n, window: parse_rat("window", &window)?, p: parse_prob("p", &p)?, seed }
            }
            CommandArgs::BjAudit { graph, k_max } => Command::BjAudit { graph, k_max },
            CommandArgs::Agreement { p, trials, seed } => Command::Agreement { p: parse_prob("p", &p)?, trials, seed },
            CommandArgs::BfRun { ball, n_u, fibre_n, p, budget, seed, window } => Command::BfRun {
                ball: parse_ball(&ball)?,
                n_u,
                fibre_n,
                p: parse_prob("p", &p)?,
                budget,
                seed,
                window: window.resolve(n_u)?,
            },
            CommandArgs::S0Experiment { p, trials, seed, ball, n_u, fibre_n, budget, window } => {
                let u_ball = parse_ball(&ball)?.ball.to_spec();
                let window = window.resolve(n_u)?;
                let params = S0Params { u_ball, n_u, fibre_n, window, p: parse_prob("p", &p)?, budget };
                Command::S0Experiment { params, trials, seed }
            }
        };
        Ok(ExperimentConfig { command, out: self.out, format })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_config;
    use crate::exact_geometry::int;

    #[test]
    fn default_window_follows_nu() {
        let w = WindowArgs { u_radius: "8".into(), fibre_length: None, no_stagger: false };
        assert_eq!(w.resolve(60).unwrap().fibre_length, Rational::new(1.into(), 60.into()));
        assert_eq!(w.resolve(60).unwrap().u_radius, int(8));
        assert!(w.resolve(0).is_err());
    }

    #[test]
    fn csv_only_where_supported() {
        assert!(matches!(parse_config(["rado-lab", "decompose", "builtin:square", "--format", "csv"]), Err(CliError::Usage(_))));
        let c = parse_config(["rado-lab", "bj-audit", "--graph", "g.json"]).unwrap();
        assert_eq!(c.format, Format::Csv);
    }
}
