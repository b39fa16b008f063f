mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use kelly_core::dominance::{dominance_matrix, Relation};
use kelly_core::gambling::{Embedding, Fairness, FairnessClass};
use kelly_core::io::{self, MarketFile};
use kelly_core::logopt::KKT_TOL;
use kelly_core::sufficiency::{Counterexample, DEFAULT_SAMPLES};
use kelly_core::{
    action_regret, characterization_crosscheck, classify_fairness, cover_gap, distribution_regret, dutch_book,
    embed_ideal, empirical_distribution, injectivity_test, is_kelly_market, kl_divergence, minimax_regret,
    proportionality_test, prune_with, solve, wealth_trajectory, Distribution, Error, Market, Odds,
    Portfolio, PortfolioConstraints, PruneOptions, Result, Uniqueness,
};

use crate::report::{num, nums, render, strings, Format, Report};

#[derive(Parser)]
#[command(name = "kelly", version, about = "Log-optimal portfolios and regret on finite markets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Growth-optimal portfolio for a distribution
    Solve {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        dist: DistSource,
        /// Linear constraints on the weights
        #[arg(long)]
        constraints: Option<PathBuf>,
    },
    /// Regret of acting on q when p holds, next to D(p||q)
    Regret {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        dist: DistSource,
        /// Distribution acted upon
        #[arg(long)]
        q: PathBuf,
        /// Also report the regret of this fixed portfolio under p
        #[arg(long)]
        portfolio: Option<Vector>,
    },
    /// Pairwise dominance among assets and the pruned market
    Dominance {
        #[command(flatten)]
        common: Common,
    },
    /// Remove dominated assets
    Prune {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        dist: OptionalDist,
        /// Also remove assets that are dominated but not strictly
        #[arg(long)]
        weak: bool,
    },
    /// Write every asset as a portfolio of ideal gambling assets
    Embed {
        #[command(flatten)]
        common: Common,
    },
    /// Classify odds as fair, superfair or subfair
    Fairness {
        /// Market whose embedding supplies the odds
        #[arg(long, required_unless_present = "odds", conflicts_with = "odds")]
        market: Option<PathBuf>,
        /// Odds given directly, comma separated
        #[arg(long)]
        odds: Option<Vector>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Minimax regret over a family of distributions
    Minimax {
        #[command(flatten)]
        common: Common,
        /// One distribution per row
        #[arg(long)]
        family: PathBuf,
    },
    /// Test whether regret is proportional to information divergence
    Sufficiency {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Wealth trajectories of constant rebalanced portfolios
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Outcome labels or indices
        #[arg(long)]
        sequence: PathBuf,
        /// Portfolio as `w1,w2,…` or `label=w1,w2,…`; repeatable
        #[arg(long = "portfolio")]
        portfolios: Vec<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Market CSV: `outcome,<asset_1>,…[,prob]`
    #[arg(long)]
    market: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Tolerance for the `certified` flags (stationarity residual or duality gap)
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
#[group(multiple = false)]
struct DistSource {
    /// Probabilities file, a single row or column
    #[arg(long)]
    dist: Option<PathBuf>,
    /// Probabilities given inline, comma separated
    #[arg(long, value_parser = parse_probs)]
    p: Option<Vector>,
    /// Uniform distribution over outcomes
    #[arg(long)]
    uniform: bool,
    /// Empirical distribution of an outcome sequence file
    #[arg(long)]
    sequence: Option<PathBuf>,
}

#[derive(Args)]
#[group(multiple = false)]
struct OptionalDist {
    #[arg(long)]
    dist: Option<PathBuf>,
    #[arg(long)]
    uniform: bool,
}

/// Comma-separated numbers given on the command line.
#[derive(Debug, Clone)]
struct Vector(Vec<f64>);

impl std::str::FromStr for Vector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_vector(s).map(Vector)
    }
}

fn parse_vector(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect()
}

/// Inline probabilities are checked like a distribution file, so a bad
/// vector is a usage error rather than a domain error.
fn parse_probs(s: &str) -> std::result::Result<Vector, String> {
    let v = parse_vector(s)?;
    Distribution::normalized(v.clone(), io::FILE_SUM_TOL).map_err(|e| e.to_string())?;
    Ok(Vector(v))
}

impl DistSource {
    /// The selected distribution, falling back to the market's `prob` column.
    fn resolve(&self, file: &MarketFile) -> Result<Distribution> {
        let m = file.market.outcomes();
        let d = if let Some(path) = &self.dist {
            io::read_distribution(path)?
        } else if let Some(v) = &self.p {
            Distribution::normalized(v.0.clone(), io::FILE_SUM_TOL)?
        } else if self.uniform {
            Distribution::uniform(m)
        } else if let Some(path) = &self.sequence {
            let seq = io::read_sequence(path, file.market.outcome_names())?;
            empirical_distribution(&seq, m)?
        } else if let Some(p) = &file.probs {
            p.clone()
        } else {
            return Err(Error::InvalidDistribution(
                "no distribution: pass --dist, --p, --uniform or --sequence, or add a prob column".into(),
            ));
        };
        check_len(&d, m)?;
        Ok(d)
    }
}

fn check_len(d: &Distribution, m: usize) -> Result<()> {
    if d.len() != m {
        return Err(Error::DimensionMismatch {
            what: "distribution",
            expected: m,
            found: d.len(),
        });
    }
    Ok(())
}

fn uniqueness(u: Uniqueness) -> &'static str {
    match u {
        Uniqueness::Unique => "unique",
        Uniqueness::NonUnique => "non-unique",
        Uniqueness::Unknown => "unknown",
    }
}

fn fairness_report(odds: &Odds, f: Fairness) -> Report {
    let class = match f.class {
        FairnessClass::Fair => "fair",
        FairnessClass::Superfair => "superfair",
        FairnessClass::Subfair => "subfair",
    };
    let book: Value = match dutch_book(odds) {
        Some(d) => Report::new()
            .nums("portfolio", d.portfolio.weights())
            .num("guarantee", d.guarantee)
            .into(),
        None => Value::Null,
    };
    Report::new()
        .nums("odds", odds.values())
        .num("inverse_sum", f.inverse_sum)
        .put("class", class)
        .put("dutch_book", book)
}

fn embedding_weights(market: &Market, e: &Embedding) -> Value {
    let mut r = Report::new();
    for (name, w) in market.asset_names().iter().zip(&e.weights) {
        r = r.nums(name, w.weights());
    }
    r.into()
}

fn counterexample(c: &Counterexample) -> Value {
    Report::new()
        .nums("p", c.p.probs())
        .nums("q", c.q.probs())
        .num("regret", c.regret)
        .num("divergence", c.divergence)
        .put("scaled_divergence", c.scaled_divergence.map(num).unwrap_or(Value::Null))
        .into()
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Solve { common, dist, constraints } => {
            let file = io::read_market(&common.market)?;
            let p = dist.resolve(&file)?;
            let market = &file.market;
            let c = match &constraints {
                Some(path) => Some(PortfolioConstraints::new(
                    market.assets(),
                    io::read_constraints(path, market.assets())?,
                )?),
                None => None,
            };
            let r = solve(market, &p, c.as_ref())?;
            let tol = common.tol.unwrap_or(KKT_TOL);
            let out = Report::new()
                .put("assets", strings(market.asset_names()))
                .nums("portfolio", r.portfolio.weights())
                .num("growth_nats", r.growth.value())
                .num("doubling_rate_bits", r.growth.bits())
                .num("kkt_residual", r.kkt_residual)
                .put("certified", r.kkt_residual <= tol)
                .put("iterations", r.iterations)
                .put("optimizer", uniqueness(r.unique))
                .put("constrained", c.is_some());
            Ok(render(&out.into(), common.format))
        }
        Command::Regret { common, dist, q, portfolio } => {
            let file = io::read_market(&common.market)?;
            let p = dist.resolve(&file)?;
            let q = io::read_distribution(&q)?;
            check_len(&q, file.market.outcomes())?;
            let market = &file.market;
            let regret = distribution_regret(market, &p, &q)?;
            let divergence = kl_divergence(&p, &q)?;
            let gap = match cover_gap(market, &p, &q) {
                Ok(g) => num(g),
                Err(Error::IndeterminateGap) => Value::String("indeterminate".into()),
                Err(e) => return Err(e),
            };
            let mut out = Report::new()
                .num("regret", regret.value())
                .num("divergence", divergence.value())
                .put("cover_gap", gap);
            if let Some(b) = portfolio {
                let b = Portfolio::normalized(b.0, io::FILE_SUM_TOL)?;
                out = out.num("action_regret", action_regret(market, &p, &b)?.value());
            }
            Ok(render(&out.into(), common.format))
        }
        Command::Dominance { common } => {
            let file = io::read_market(&common.market)?;
            let market = &file.market;
            let names = market.asset_names();
            let matrix: Vec<Value> = dominance_matrix(market)
                .iter()
                .map(|row| {
                    Value::Array(
                        row.iter()
                            .map(|r| {
                                Value::String(
                                    match r {
                                        Relation::StrictlyDominates => "strict",
                                        Relation::Dominates => "weak",
                                        Relation::None => "-",
                                    }
                                    .into(),
                                )
                            })
                            .collect(),
                    )
                })
                .collect();
            let pruned = prune_with(market, PruneOptions::default())?;
            let label = |idx: &[usize]| strings(&idx.iter().map(|&i| names[i].clone()).collect::<Vec<_>>());
            let out = Report::new()
                .put("assets", strings(names))
                .put("matrix", Value::Array(matrix))
                .put("strictly_dominated", label(&pruned.removed))
                .put("weakly_dominated", label(&pruned.weakly_dominated))
                .put("kept", label(&pruned.kept));
            Ok(render(&out.into(), common.format))
        }
        Command::Prune { common, dist, weak } => {
            let file = io::read_market(&common.market)?;
            let market = &file.market;
            let names = market.asset_names();
            let pruned = prune_with(market, PruneOptions { remove_weak: weak })?;
            let label = |idx: &[usize]| strings(&idx.iter().map(|&i| names[i].clone()).collect::<Vec<_>>());
            let rows: Vec<Value> = (0..pruned.market.outcomes()).map(|j| nums(&pruned.market.row(j))).collect();
            let mut out = Report::new()
                .put("kept", label(&pruned.kept))
                .put("removed", label(&pruned.removed))
                .put("weakly_dominated", label(&pruned.weakly_dominated))
                .put("market", Value::Array(rows));
            let p = match (&dist.dist, dist.uniform) {
                (Some(path), _) => Some(io::read_distribution(path)?),
                (None, true) => Some(Distribution::uniform(market.outcomes())),
                (None, false) => file.probs.clone(),
            };
            if let Some(p) = p {
                check_len(&p, market.outcomes())?;
                out = out
                    .num("growth_before", solve(market, &p, None)?.growth.value())
                    .num("growth_after", solve(&pruned.market, &p, None)?.growth.value());
            }
            Ok(render(&out.into(), common.format))
        }
        Command::Embed { common } => {
            let file = io::read_market(&common.market)?;
            let market = &file.market;
            let e = embed_ideal(market)?;
            let f = classify_fairness(&e.odds);
            let kelly: Value = is_kelly_market(market)?.map(|o| nums(o.values())).unwrap_or(Value::Null);
            let out = fairness_report(&e.odds, f)
                .put("weights", embedding_weights(market, &e))
                .put("kelly_odds", kelly);
            Ok(render(&out.into(), common.format))
        }
        Command::Fairness { market, odds, format } => {
            let odds = match (odds, market) {
                (Some(o), _) => Odds::new(o.0)?,
                (None, Some(path)) => embed_ideal(&io::read_market(&path)?.market)?.odds,
                (None, None) => unreachable!("clap requires one of --odds and --market"),
            };
            let f = classify_fairness(&odds);
            Ok(render(&fairness_report(&odds, f).into(), format))
        }
        Command::Minimax { common, family } => {
            let file = io::read_market(&common.market)?;
            let family = io::read_family(&family)?;
            for p in &family {
                check_len(p, file.market.outcomes())?;
            }
            let r = minimax_regret(&file.market, &family)?;
            let tol = common.tol.unwrap_or(1e-6);
            let out = Report::new()
                .num("value", r.value)
                .nums("robust_portfolio", r.robust_portfolio.weights())
                .nums("worst_mixture", &r.worst_mixture)
                .nums("barycenter", r.barycenter.probs())
                .num("duality_gap", r.duality_gap)
                .put("certified", r.duality_gap <= tol);
            Ok(render(&out.into(), common.format))
        }
        Command::Sufficiency { common, samples } => {
            let file = io::read_market(&common.market)?;
            let (market, _) = file.market.dedup_outcomes();
            let v = proportionality_test(&market, samples, common.seed)?;
            let inj = injectivity_test(&market, samples, common.seed)?;
            let kelly = is_kelly_market(&market)?;
            let agree = if v.degenerate {
                Value::Null
            } else {
                Value::Bool(characterization_crosscheck(&market, common.seed)?.agree)
            };
            let witness: Value = match &inj.witness {
                Some((p, q, r)) => Report::new().nums("p", p.probs()).nums("q", q.probs()).num("regret", *r).into(),
                None => Value::Null,
            };
            let out = Report::new()
                .put("proportional", v.proportional)
                .put("degenerate", v.degenerate)
                .put("constant_c", v.constant_c.map(num).unwrap_or(Value::Null))
                .put("samples_tested", v.samples_tested)
                .put("counterexample", v.counterexample.as_ref().map(counterexample).unwrap_or(Value::Null))
                .put("kelly_market", kelly.is_some())
                .put("kelly_odds", kelly.map(|o| nums(o.values())).unwrap_or(Value::Null))
                .put("crosscheck_agree", agree)
                .put("injective", inj.injective)
                .put("injectivity_witness", witness)
                .put("distinct_outcomes", inj.distinct_outcomes)
                .put("equivalence_applies", inj.equivalence_applies);
            Ok(render(&out.into(), common.format))
        }
        Command::Simulate { common, sequence, portfolios } => simulate(&common, &sequence, &portfolios),
    }
}

fn simulate(common: &Common, sequence: &Path, specs: &[String]) -> Result<String> {
    let file = io::read_market(&common.market)?;
    let market = &file.market;
    let seq = io::read_sequence(sequence, market.outcome_names())?;
    let mut labelled: Vec<(String, Portfolio)> = Vec::new();
    for (n, spec) in specs.iter().enumerate() {
        let (label, weights) = match spec.split_once('=') {
            Some((l, w)) => (l.trim().to_owned(), w),
            None => (format!("b{}", n + 1), spec.as_str()),
        };
        let w = parse_vector(weights).map_err(Error::InvalidPortfolio)?;
        labelled.push((label, Portfolio::normalized(w, io::FILE_SUM_TOL)?));
    }
    if labelled.is_empty() {
        labelled.push(("uniform".into(), Portfolio::uniform(market.assets())));
        if !seq.is_empty() {
            let p = empirical_distribution(&seq, market.outcomes())?;
            labelled.push(("log_optimal".into(), solve(market, &p, None)?.portfolio));
        }
    }
    let mut rows = Vec::new();
    for (label, b) in &labelled {
        let path = wealth_trajectory(market, b, &seq)?;
        rows.push((0usize, label.clone(), 1.0));
        rows.extend(path.into_iter().enumerate().map(|(i, w)| (i + 1, label.clone(), w)));
    }
    Ok(match common.format {
        Format::Json => {
            let v = Value::Array(
                rows.iter()
                    .map(|(s, l, w)| Report::new().put("step", *s).put("portfolio", l.clone()).num("wealth", *w).into())
                    .collect(),
            );
            render(&v, Format::Json)
        }
        Format::Csv | Format::Text => {
            let mut out = String::from("step,portfolio,wealth\n");
            for (s, l, w) in rows {
                out.push_str(&format!("{s},{l},{w}\n"));
            }
            out
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
