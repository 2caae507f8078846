//! The `scoredyn` command line.
//!
//! Every subcommand prints a single `ok key=value ...` line on success. Usage
//! errors exit with status 2, data and IO errors with status 1.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use scoredyn_core::estimate::{
    balance_null_distribution, correlation_function, events_per_game_distribution, fit_balance, fit_tempo,
    interarrival_distribution, lead_scoring_function, points_fraction_distribution, DEFAULT_MIN_STATE_COUNT,
};
use scoredyn_core::ingest::{validate_corpus, SportRegistry};
use scoredyn_core::predict::{build_chain, expected_remaining_events, forecast, EvalConfig, TieMode};
use scoredyn_core::simulate::{
    empirical_lead_variance, BalanceKind, ModelSpec, SpreadAccumulator, TempoKind, MIN_CURVE_GAMES,
};
use scoredyn_core::synth::{generate_league, generate_restoring_league, GroundTruth, LeagueSpec};
use scoredyn_core::types::reference_rate;
use scoredyn_core::{GameLog, SportConfig, SportId};

use crate::artifact::{read_sport_config, ModelArtifact, TruthSidecar};
use crate::curves::{write_auc, write_spread, write_table};
use crate::formats::{parse_event_file, write_events, EventFormat};
use crate::io::{write_atomic, write_json};
use crate::parallel;

#[derive(Debug, Parser)]
#[command(name = "scoredyn", version, about = "Tempo and balance models of within-game scoring")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse an event file and print corpus counts.
    Validate(ValidateArgs),
    /// Fit tempo and balance models for one sport.
    Fit(FitArgs),
    /// Simulate games from a fitted model.
    Simulate(SimulateArgs),
    /// Forecast the outcome from a lead at a clock second.
    Predict(PredictArgs),
    /// Out-of-sample outcome predictability by event index.
    Eval(EvalArgs),
    /// Generate a synthetic league with known parameters.
    Synth(SynthArgs),
    /// Export every curve for one corpus.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Event file (CSV or JSONL).
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Input format; defaults to the file extension.
    #[arg(long, value_enum)]
    pub format: Option<EventFormat>,
    /// Extra sport configuration files (JSON), for custom sports.
    #[arg(long = "sport-config", value_name = "PATH")]
    pub sport_configs: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Write the full report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitOptions {
    /// Centered moving-average width for the tempo profile (odd).
    #[arg(long, default_value_t = 1)]
    pub window: usize,
    /// Minimum pooled observations for a lead state to enter the line fit.
    #[arg(long, default_value_t = DEFAULT_MIN_STATE_COUNT)]
    pub min_count: u64,
    /// Lead truncation; defaults to the sport's.
    #[arg(long)]
    pub lmax: Option<u32>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub sport: SportId,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub fit: FitOptions,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Bernoulli,
    Markov,
}

impl Kind {
    fn tempo(self) -> TempoKind {
        match self {
            Kind::Bernoulli => TempoKind::Bernoulli,
            Kind::Markov => TempoKind::Markov,
        }
    }

    fn balance(self) -> BalanceKind {
        match self {
            Kind::Bernoulli => BalanceKind::Bernoulli,
            Kind::Markov => BalanceKind::Markov,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kind::Bernoulli => "bernoulli",
            Kind::Markov => "markov",
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum, default_value_t = Kind::Bernoulli)]
    pub tempo: Kind,
    #[arg(long, value_enum, default_value_t = Kind::Markov)]
    pub balance: Kind,
    #[arg(long, default_value_t = 10_000)]
    pub games: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Output format; defaults to the file extension.
    #[arg(long, value_enum)]
    pub format: Option<EventFormat>,
    /// Also write the lead-spread curve against `--against`.
    #[arg(long, requires = "against")]
    pub curves: Option<PathBuf>,
    /// Observed corpus for the empirical side of `--curves`.
    #[arg(long, requires = "curves")]
    pub against: Option<PathBuf>,
    #[arg(long, default_value_t = 60)]
    pub sample_every: u32,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Lead of team r (negative when b leads).
    #[arg(long, allow_hyphen_values = true)]
    pub lead: i64,
    /// Clock second.
    #[arg(long)]
    pub t: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ties {
    Exclude,
    HalfCredit,
}

#[derive(Debug, Args)]
pub struct EvalOptions {
    #[arg(long, default_value_t = 20)]
    pub splits: usize,
    #[arg(long, value_enum, default_value_t = Ties::Exclude)]
    pub ties: Ties,
    /// Report at most this many event indices.
    #[arg(long)]
    pub max_event_index: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Directory holding `model.json` and `games.csv` or `games.jsonl`.
    #[arg(long, conflicts_with_all = ["input", "sport"], required_unless_present = "input")]
    pub model_dir: Option<PathBuf>,
    /// Event file, instead of `--model-dir`.
    #[arg(long = "in", value_name = "PATH", requires = "sport")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub sport: Option<SportId>,
    #[arg(long, value_enum)]
    pub format: Option<EventFormat>,
    #[arg(long = "sport-config", value_name = "PATH")]
    pub sport_configs: Vec<PathBuf>,
    #[command(flatten)]
    pub eval: EvalOptions,
    #[arg(long, default_value_t = DEFAULT_MIN_STATE_COUNT)]
    pub min_count: u64,
    #[arg(long)]
    pub lmax: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// AUC table; defaults to `auc.csv` in the model directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub sport: SportId,
    #[arg(long = "sport-config", value_name = "PATH")]
    pub sport_configs: Vec<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub teams: usize,
    #[arg(long, default_value_t = 1_000)]
    pub games: usize,
    /// Log-scale spread of team skills.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Two teams with this skill ratio instead of a random league.
    #[arg(long, conflicts_with_all = ["teams", "sigma"])]
    pub ratio: Option<f64>,
    /// Events per second; defaults to the sport's reference tempo.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Lead-dependent winners with `Pr(r) = 1/2 + slope * L` instead of skills.
    #[arg(long, allow_hyphen_values = true)]
    pub restoring_slope: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<EventFormat>,
    /// Ground-truth sidecar; defaults to `<out>.truth.json`.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub sport: SportId,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub fit: FitOptions,
    #[command(flatten)]
    pub eval: EvalOptions,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Simulated games per model combination.
    #[arg(long, default_value_t = 10_000)]
    pub sim_games: usize,
    /// Simulated games for the balance null.
    #[arg(long, default_value_t = 10_000)]
    pub null_sims: usize,
    #[arg(long, default_value_t = 60)]
    pub sample_every: u32,
    /// Largest correlation lag.
    #[arg(long, default_value_t = 10)]
    pub lags: usize,
    /// Histogram bins for balance fractions.
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
}

/// Parses `argv` and runs; returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli.command) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// Runs one subcommand and returns its summary line.
pub fn execute(command: &Command) -> Result<String> {
    match command {
        Command::Validate(a) => validate(a),
        Command::Fit(a) => fit(a),
        Command::Simulate(a) => simulate(a),
        Command::Predict(a) => predict(a),
        Command::Eval(a) => eval(a),
        Command::Synth(a) => synth(a),
        Command::Report(a) => report(a),
    }
}

struct Summary(String);

impl Summary {
    fn new(cmd: &str) -> Self {
        Summary(format!("ok cmd={cmd}"))
    }

    fn kv(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        let _ = write!(self.0, " {key}={value}");
        self
    }

    fn path(self, key: &str, p: &Path) -> Self {
        self.kv(key, p.display())
    }
}

fn registry(configs: &[PathBuf]) -> Result<SportRegistry> {
    let mut reg = SportRegistry::builtin();
    for path in configs {
        reg.register(read_sport_config(path)?);
    }
    Ok(reg)
}

fn sport_config(reg: &SportRegistry, sport: &SportId, lmax: Option<u32>) -> Result<SportConfig> {
    let cfg = reg
        .get(sport)
        .with_context(|| format!("unknown sport {sport} (pass --sport-config for custom sports)"))?
        .clone();
    Ok(match lmax {
        Some(l) => cfg.with_lead_truncation(l)?,
        None => cfg,
    })
}

fn load(path: &Path, format: Option<EventFormat>, reg: &SportRegistry) -> Result<Vec<GameLog>> {
    Ok(parse_event_file(path, format, reg)?)
}

/// Games of `sport` only; errors if there are none.
fn load_sport(input: &InputArgs, sport: &SportConfig, reg: &SportRegistry) -> Result<Vec<GameLog>> {
    let games: Vec<GameLog> = load(&input.input, input.format, reg)?
        .into_iter()
        .filter(|g| &g.sport == sport.sport())
        .collect();
    ensure!(!games.is_empty(), "{}: no {} games", input.input.display(), sport.sport());
    Ok(games)
}

fn event_count(games: &[GameLog]) -> usize {
    games.iter().map(|g| g.events.len()).sum()
}

fn validate(a: &ValidateArgs) -> Result<String> {
    let reg = registry(&a.input.sport_configs)?;
    let games = load(&a.input.input, a.input.format, &reg)?;
    let report = validate_corpus(&games, &reg);
    if let Some(out) = &a.out {
        write_json(out, &report)?;
    }
    let mut s = Summary::new("validate")
        .kv("games", report.games)
        .kv("events", report.events)
        .kv("mean_events_per_game", report.mean_events_per_game)
        .kv("sports", report.per_sport.len())
        .kv("failures", report.failures.len());
    if let Some(out) = &a.out {
        s = s.path("out", out);
    }
    Ok(s.0)
}

fn fit_model(games: &[GameLog], sport: &SportConfig, opts: &FitOptions) -> Result<ModelArtifact> {
    let tempo = fit_tempo(games, sport, opts.window)?;
    let balance = fit_balance(games, sport, opts.min_count)?;
    Ok(ModelArtifact::new(sport.clone(), games.len(), event_count(games), tempo, balance))
}

fn fit(a: &FitArgs) -> Result<String> {
    let reg = registry(&a.input.sport_configs)?;
    let sport = sport_config(&reg, &a.sport, a.fit.lmax)?;
    let games = load_sport(&a.input, &sport, &reg)?;
    let model = fit_model(&games, &sport, &a.fit)?;
    write_json(&a.out, &model)?;
    let mut s = Summary::new("fit")
        .kv("sport", sport.sport())
        .kv("games", model.games)
        .kv("events", model.events)
        .kv("lambda_hat", model.tempo.lambda_hat)
        .kv("lambda_std_err", model.tempo.lambda_std_err);
    if let Some(fit) = &model.balance.phi_fit {
        s = s.kv("phi_slope", fit.slope).kv("phi_slope_std_err", fit.slope_std_err);
    }
    Ok(s.path("out", &a.out).0)
}

fn model_spec(model: &ModelArtifact, tempo: Kind, balance: Kind, seed: u64) -> Result<ModelSpec> {
    Ok(ModelSpec::new(
        tempo.tempo(),
        balance.balance(),
        model.tempo.clone(),
        model.balance.clone(),
        model.sport.clone(),
        seed,
    )?)
}

fn spread_of(games: &[GameLog], sport: &SportConfig, every: u32) -> Result<Vec<scoredyn_core::simulate::LeadSpread>> {
    let mut acc = SpreadAccumulator::new(sport.regulation_length(), every)?;
    games.iter().for_each(|g| acc.add_game(g));
    Ok(acc.finish())
}

fn simulate(a: &SimulateArgs) -> Result<String> {
    let model = ModelArtifact::read(&a.model)?;
    let format = EventFormat::resolve(a.format, &a.out)?;
    let spec = model_spec(&model, a.tempo, a.balance, a.seed)?;
    if a.curves.is_some() {
        ensure!(a.games >= MIN_CURVE_GAMES, "--curves needs at least {MIN_CURVE_GAMES} games");
    }
    let games = parallel::simulate_corpus(&spec, a.games)?;
    write_atomic(&a.out, |w| write_events(w, &games, format))?;
    let mut s = Summary::new("simulate")
        .kv("sport", model.sport.sport())
        .kv("tempo", a.tempo.name())
        .kv("balance", a.balance.name())
        .kv("games", games.len())
        .kv("events", event_count(&games))
        .kv("seed", a.seed)
        .path("out", &a.out);
    if let (Some(curves), Some(against)) = (&a.curves, &a.against) {
        let mut reg = SportRegistry::builtin();
        reg.register(model.sport.clone());
        let observed: Vec<GameLog> = load(against, None, &reg)?
            .into_iter()
            .filter(|g| &g.sport == model.sport.sport())
            .collect();
        let empirical = empirical_lead_variance(&observed, &model.sport, a.sample_every)?;
        let simulated = spread_of(&games, &model.sport, a.sample_every)?;
        write_atomic(curves, |w| write_spread(w, &empirical, &simulated))?;
        s = s.path("curves", curves);
    }
    Ok(s.0)
}

fn predict(a: &PredictArgs) -> Result<String> {
    let model = ModelArtifact::read(&a.model)?;
    let lmax = model.balance.phi.lmax().max(model.balance.point_values.max_value());
    let chain = build_chain(&model.balance.phi, &model.balance.point_values, lmax)?;
    let bound = lmax as i64;
    ensure!((-bound..=bound).contains(&a.lead), "lead {} outside [-{lmax}, {lmax}]", a.lead);
    let f = forecast(&chain, a.lead, a.t, &model.tempo.profile)?;
    let n = expected_remaining_events(&model.tempo.profile, a.t)?;
    Ok(Summary::new("predict")
        .kv("sport", model.sport.sport())
        .kv("lead", a.lead)
        .kv("t", a.t)
        .kv("expected_events", n)
        .kv("p_win_r", f.p_win_r)
        .kv("p_tie", f.p_tie)
        .kv("p_win_b", f.p_win_b)
        .0)
}

fn eval_config(opts: &EvalOptions, min_count: u64, lmax: Option<u32>, seed: u64) -> EvalConfig {
    EvalConfig {
        splits: opts.splits,
        seed,
        min_count,
        tie_mode: match opts.ties {
            Ties::Exclude => TieMode::Exclude,
            Ties::HalfCredit => TieMode::HalfCredit,
        },
        max_event_index: opts.max_event_index,
        lmax,
        ..EvalConfig::default()
    }
}

/// The corpus inside a model directory.
fn model_dir_corpus(dir: &Path) -> Result<PathBuf> {
    ["games.csv", "games.jsonl"]
        .iter()
        .map(|name| dir.join(name))
        .find(|p| p.is_file())
        .with_context(|| format!("{}: no games.csv or games.jsonl", dir.display()))
}

fn eval(a: &EvalArgs) -> Result<String> {
    let mut reg = registry(&a.sport_configs)?;
    let (sport, corpus, out) = match (&a.model_dir, &a.input, &a.sport) {
        (Some(dir), _, _) => {
            let model = ModelArtifact::read(&dir.join("model.json"))?;
            reg.register(model.sport.clone());
            (model.sport, model_dir_corpus(dir)?, a.out.clone().unwrap_or_else(|| dir.join("auc.csv")))
        }
        (None, Some(input), Some(sport)) => {
            let out = a.out.clone().context("--out is required with --in")?;
            (sport_config(&reg, sport, None)?, input.clone(), out)
        }
        _ => bail!("pass --model-dir, or --in with --sport"),
    };
    let games: Vec<GameLog> = load(&corpus, a.format, &reg)?
        .into_iter()
        .filter(|g| &g.sport == sport.sport())
        .collect();
    let cfg = eval_config(&a.eval, a.min_count, a.lmax, a.seed);
    let result = parallel::evaluate_predictability(&games, &sport, &cfg)?;
    write_atomic(&out, |w| write_auc(w, &result))?;
    Ok(Summary::new("eval")
        .kv("sport", sport.sport())
        .kv("games", games.len())
        .kv("splits", result.splits)
        .kv("event_indices", result.rows.len())
        .kv("final_auc_chain", result.final_event.auc_chain)
        .kv("final_auc_leader", result.final_event.auc_leader)
        .path("out", &out)
        .0)
}

fn synth(a: &SynthArgs) -> Result<String> {
    let reg = registry(&a.sport_configs)?;
    let sport = sport_config(&reg, &a.sport, None)?;
    let format = EventFormat::resolve(a.format, &a.out)?;
    let lambda = match a.lambda {
        Some(l) => l,
        None => reference_rate(sport.sport()).with_context(|| format!("--lambda is required for {}", sport.sport()))?,
    };
    let league = match a.ratio {
        Some(ratio) => LeagueSpec::two_team(&sport, ratio, a.games, lambda, a.seed),
        None => LeagueSpec::random_league_at(&sport, a.teams, a.games, a.sigma, lambda, a.seed)?,
    };
    let games = match a.restoring_slope {
        Some(slope) => generate_restoring_league(&league, slope)?,
        None => generate_league(&league)?,
    };
    let truth_path = a.truth.clone().unwrap_or_else(|| {
        let mut name = a.out.file_name().unwrap_or_default().to_owned();
        name.push(".truth.json");
        a.out.with_file_name(name)
    });
    write_atomic(&a.out, |w| write_events(w, &games, format))?;
    let truth = GroundTruth {
        league,
        restoring_slope: a.restoring_slope,
    };
    write_json(&truth_path, &TruthSidecar::new(truth))?;
    Ok(Summary::new("synth")
        .kv("sport", sport.sport())
        .kv("games", games.len())
        .kv("events", event_count(&games))
        .kv("seed", a.seed)
        .path("out", &a.out)
        .path("truth", &truth_path)
        .0)
}

/// `bins` equal-width bins over `[0, 1]`, as frequencies.
fn histogram(samples: &[f64], bins: usize) -> Vec<f64> {
    let mut h = vec![0.0; bins];
    for &c in samples {
        h[((c * bins as f64) as usize).min(bins - 1)] += 1.0;
    }
    let n = samples.len().max(1) as f64;
    h.iter_mut().for_each(|x| *x /= n);
    h
}

fn report(a: &ReportArgs) -> Result<String> {
    ensure!(a.bins > 0, "--bins must be positive");
    let reg = registry(&a.input.sport_configs)?;
    let sport = sport_config(&reg, &a.sport, a.fit.lmax)?;
    let games = load_sport(&a.input, &sport, &reg)?;
    let dir = &a.out_dir;
    let mut written = Vec::new();
    let mut table = |name: &str, header: &[&str], rows: Vec<Vec<String>>| -> Result<()> {
        write_atomic(&dir.join(name), |w| write_table(w, header, rows))?;
        written.push(name.to_owned());
        Ok(())
    };

    let epg = events_per_game_distribution(&games, &sport)?;
    table(
        "events_per_game.csv",
        &["events", "empirical", "poisson"],
        epg.empirical
            .iter()
            .zip(&epg.reference)
            .enumerate()
            .map(|(n, (e, r))| vec![n.to_string(), e.to_string(), r.to_string()])
            .collect(),
    )?;

    let gaps = interarrival_distribution(&games, &sport)?;
    table(
        "interarrival.csv",
        &["gap", "empirical_ccdf", "geometric_ccdf"],
        gaps.empirical_ccdf()
            .into_iter()
            .map(|(g, c)| vec![g.to_string(), c.to_string(), gaps.reference_ccdf(g).to_string()])
            .collect(),
    )?;

    let corr = correlation_function(&games, a.lags)?;
    table(
        "correlation.csv",
        &["lag", "c", "pairs"],
        corr.values
            .iter()
            .zip(&corr.pairs)
            .enumerate()
            .map(|(i, (c, p))| vec![(i + 1).to_string(), c.map(|c| c.to_string()).unwrap_or_default(), p.to_string()])
            .collect(),
    )?;

    let model = fit_model(&games, &sport, &a.fit)?;
    table(
        "tempo_profile.csv",
        &["t", "profile"],
        model
            .tempo
            .profile
            .iter()
            .enumerate()
            .map(|(t, p)| vec![t.to_string(), p.to_string()])
            .collect(),
    )?;

    let null = balance_null_distribution(&games, a.null_sims, a.seed)?;
    let fractions = points_fraction_distribution(&games);
    let (he, hp, hn) = (
        histogram(&fractions.events, a.bins),
        histogram(&fractions.points, a.bins),
        histogram(&null.samples, a.bins),
    );
    table(
        "balance.csv",
        &["bin_lo", "bin_hi", "events_empirical", "points_empirical", "events_null"],
        (0..a.bins)
            .map(|i| {
                vec![
                    (i as f64 / a.bins as f64).to_string(),
                    ((i + 1) as f64 / a.bins as f64).to_string(),
                    he[i].to_string(),
                    hp[i].to_string(),
                    hn[i].to_string(),
                ]
            })
            .collect(),
    )?;

    let scoring = lead_scoring_function(&games, sport.lead_truncation(), a.fit.min_count)?;
    table(
        "lead_scoring.csv",
        &["lead", "phi", "count"],
        scoring
            .phi
            .iter()
            .map(|(l, p)| vec![l.to_string(), p.to_string(), scoring.phi.count_at(l).to_string()])
            .collect(),
    )?;

    let empirical = empirical_lead_variance(&games, &sport, a.sample_every)?;
    for tempo in [Kind::Bernoulli, Kind::Markov] {
        for balance in [Kind::Bernoulli, Kind::Markov] {
            let spec = model_spec(&model, tempo, balance, a.seed)?;
            let curve = parallel::lead_variance_curve(&spec, a.sim_games, a.sample_every)?;
            let name = format!("lead_spread_{}_{}.csv", tempo.name(), balance.name());
            write_atomic(&dir.join(&name), |w| write_spread(w, &empirical, &curve))?;
            written.push(name);
        }
    }

    let cfg = eval_config(&a.eval, a.fit.min_count, a.fit.lmax, a.seed);
    let auc = parallel::evaluate_predictability(&games, &sport, &cfg)?;
    write_atomic(&dir.join("auc.csv"), |w| write_auc(w, &auc))?;
    written.push("auc.csv".into());

    write_json(&dir.join("model.json"), &model)?;
    write_json(&dir.join("corpus.json"), &validate_corpus(&games, &reg))?;
    written.extend(["model.json".into(), "corpus.json".into()]);

    Ok(Summary::new("report")
        .kv("sport", sport.sport())
        .kv("games", games.len())
        .kv("events", model.events)
        .kv("lambda_hat", model.tempo.lambda_hat)
        .kv("files", written.len())
        .path("out_dir", dir)
        .0)
}
