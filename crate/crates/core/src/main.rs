use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use beltex::belief::AnyMass;
use beltex::decision::{DecisionFunction, DecisionRule};
use beltex::fusion::{fuse_observation, read_scores_csv, MassModelParams};
use beltex::harness::{self, layout, RunConfig};
use beltex::io::{read_json, write_json};
use beltex::lattice::{Algebra, SpecificityWindow};
use beltex::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Belief-function decision with reject on textured imagettes")]
struct Cli {
    /// JSON run configuration; defaults are used for missing fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgebraArg {
    Power,
    Hyper,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the synthetic imagettes (PGM) and their manifest.
    Gen,
    /// Extract texture features from the generated imagettes.
    Features,
    /// Fit the built-in scorer and the mass model on the training features.
    Fit,
    /// Score the test features with the fitted scorer.
    Score,
    /// Fuse pairwise scores into mass functions.
    Fuse {
        /// Score CSV (`obs_id,i,j,f`); defaults to the test scores.
        #[arg(long)]
        scores: Option<PathBuf>,
        /// Mass-model parameters JSON; defaults to the fitted ones.
        #[arg(long)]
        params: Option<PathBuf>,
        /// Fuse only in this algebra and write one mass document per
        /// observation to `--output` instead of the pipeline's masses file.
        #[arg(long, value_enum, requires = "output")]
        algebra: Option<AlgebraArg>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Apply a decision rule.
    Decide {
        /// A single mass document to decide on; by default every fused test
        /// imagette is decided.
        #[arg(long)]
        mass: Option<PathBuf>,
        /// pignistic, max-bel-reject, weighted-power, two-step,
        /// hyper-weighted or cardinality4.
        #[arg(long, value_parser = parse_name::<DecisionRule>)]
        rule: Option<DecisionRule>,
        #[arg(long)]
        r: Option<f64>,
        /// Specificity window as `min,max`.
        #[arg(long, value_parser = parse_window)]
        window: Option<SpecificityWindow>,
        /// credibility, plausibility or pignistic.
        #[arg(long, value_parser = parse_name::<DecisionFunction>)]
        decision_function: Option<DecisionFunction>,
    },
    /// Tally the confusion tables from the fused masses.
    Report,
    /// Count D^Θ elements per DSm cardinality.
    LatticeStats {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run every stage.
    Pipeline,
}

fn parse_window(s: &str) -> std::result::Result<SpecificityWindow, String> {
    let (a, b) = s.split_once(',').ok_or("expected `min,max`")?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| e.to_string());
    SpecificityWindow::new(parse(a)?, parse(b)?).map_err(|e| e.to_string())
}

/// Parses a kebab-case or lowercase name the same way the config file does.
fn parse_name<T: serde::de::DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg: RunConfig = match &cli.config {
        Some(p) => read_json(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    let mut cfg = load_config(&cli)?;
    let out = cli.out_dir.as_path();
    match cli.command {
        Command::Gen => {
            cfg.validate()?;
            std::fs::create_dir_all(out)?;
            let data = harness::stage_gen(&cfg, out)?;
            println!("{} training and {} test imagettes", data.train.len(), data.test.len());
        }
        Command::Features => {
            cfg.validate()?;
            harness::stage_features(&cfg, out)?;
        }
        Command::Fit => {
            cfg.validate()?;
            harness::stage_fit(&cfg, out)?;
        }
        Command::Score => harness::stage_score(out)?,
        Command::Fuse {
            scores,
            params,
            algebra,
            output,
        } => match (algebra, output) {
            (Some(a), Some(output)) => fuse_to_file(&cfg, out, scores.as_deref(), params.as_deref(), a, &output)?,
            _ => {
                harness::stage_fuse(&cfg, out, scores.as_deref(), params.as_deref())?;
            }
        },
        Command::Decide {
            mass,
            rule,
            r,
            window,
            decision_function,
        } => {
            if let Some(rule) = rule {
                cfg.rule = rule;
            }
            if let Some(r) = r {
                cfg.r = r;
            }
            if window.is_some() {
                cfg.window = window;
            }
            if let Some(f) = decision_function {
                cfg.decision_function = f;
            }
            match mass {
                Some(p) => decide_one(&cfg, &p)?,
                None => {
                    harness::stage_decide(&cfg, out)?;
                }
            }
        }
        Command::Report => {
            let (exp, summary) = harness::stage_report(&cfg, out)?;
            for r in &exp.reports {
                println!("{}", r.to_text());
            }
            println!("agreement rate {:.4}", summary.agreement_rate.0);
        }
        Command::LatticeStats { n, output } => {
            let path = harness::resolve(out, output.as_deref(), &format!("lattice_stats_{n}.csv"));
            if output.is_none() {
                std::fs::create_dir_all(out)?;
            }
            let hist = harness::write_lattice_stats(n, &path)?;
            println!("{} elements", hist.iter().sum::<usize>());
        }
        Command::Pipeline => {
            let (exp, summary) = harness::run_pipeline(&cfg, out)?;
            for r in &exp.reports {
                println!("{}", r.to_text());
            }
            println!("agreement rate {:.4}", summary.agreement_rate.0);
        }
    }
    Ok(())
}

fn fuse_to_file(
    cfg: &RunConfig,
    out: &Path,
    scores: Option<&Path>,
    params: Option<&Path>,
    algebra: AlgebraArg,
    output: &Path,
) -> Result<()> {
    let frame = cfg.frame()?;
    let params: MassModelParams = read_json(&harness::resolve(out, params, layout::PARAMS))?;
    let scores = read_scores_csv(&harness::resolve(out, scores, layout::SCORES_TEST), &frame)?;
    let algebra = match algebra {
        AlgebraArg::Power => Algebra::Power,
        AlgebraArg::Hyper => Algebra::Hyper,
    };
    let docs = scores
        .iter()
        .map(|(id, s)| Ok((id.clone(), fuse_observation(s, &params, algebra)?.to_doc())))
        .collect::<Result<std::collections::BTreeMap<_, _>>>()?;
    write_json(output, &docs)
}

fn decide_one(cfg: &RunConfig, path: &Path) -> Result<()> {
    let dc = cfg.decision_config();
    dc.validate()?;
    let report = match harness::read_mass(path)? {
        AnyMass::Power(m) => {
            let hyper = if cfg.rule.needs_hyper() { Some(m.embed()?) } else { None };
            cfg.rule.apply(Some(&m), hyper.as_ref(), &dc)?
        }
        AnyMass::Hyper(m) => {
            if cfg.rule.needs_power() {
                return Err(Error::InvalidDecisionConfig(format!(
                    "rule {} needs a power-set mass",
                    cfg.rule.as_str()
                )));
            }
            cfg.rule.apply(None, Some(&m), &dc)?
        }
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
