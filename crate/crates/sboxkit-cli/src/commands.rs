//! The `sboxkit` subcommands.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use sboxkit::metrics::{self, CcModel, CcStatistic, MetricOptions, SnrVariant};
use sboxkit::search::{
    AssemblyOrder, OrderingPolicy, SearchConfig, SearchMode, Thresholds, ToDirection,
};

use crate::error::{CliError, CliResult};
use crate::formats::{self, SBoxFile, SBoxFormat};
use crate::parallel;
use crate::report::{self, ReportDocument};
use crate::{fixtures, verify};

#[derive(Parser, Debug)]
#[command(
    name = "sboxkit",
    version,
    about = "S-box security metrics and coordinate-function search"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate every security metric of an S-box.
    Eval(EvalArgs),
    /// Generate improved S-boxes from a bijective initial box.
    Gen(GenArgs),
    /// Compare metric columns across several boxes.
    Compare(CompareArgs),
    /// Re-derive calibrations and run the oracle equivalence sweeps.
    Verify(VerifyArgs),
    /// List or export the bundled reference boxes.
    Fixtures(FixturesArgs),
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Fixture name or path to an S-box file.
    pub input: String,
    /// Input format: decimal, hex or json (detected when omitted).
    #[arg(long)]
    pub format: Option<String>,
    /// Write the JSON document here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of rows for the human table
    /// (B,NL,AD,CI,R,DU,AC,SIGMA,AI,FP,OFP,SNR,TO,K).
    #[arg(long)]
    pub metrics: Option<String>,
    /// Override the inferred output bit width.
    #[arg(long)]
    pub out_bits: Option<usize>,
    /// Confusion-coefficient model: single-bit, hw-squared,
    /// hw-squared-normalized.
    #[arg(long, default_value = "hw-squared")]
    pub cc_model: String,
    /// Reported kappa statistic: min, mean, max, variance.
    #[arg(long, default_value = "variance")]
    pub cc_statistic: String,
    /// SNR Walsh variant: sign or zero-one.
    #[arg(long, default_value = "sign")]
    pub snr_variant: String,
    /// Print the human table instead of JSON.
    #[arg(long)]
    pub human: bool,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// Fixture name or path of the bijective initial box.
    pub init: String,
    /// Search mode: exhaustive, sample or genetic.
    #[arg(long, default_value = "exhaustive")]
    pub mode: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Candidate budget for sample mode and cap for genetic mode.
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Directory receiving one file per accepted box plus the summary.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Input format of the initial box file.
    #[arg(long)]
    pub format: Option<String>,
    /// Mask ordering policy: canonical or best-of-orderings.
    #[arg(long, default_value = "canonical")]
    pub ordering: String,
    /// Assembly convention: msb-first or lsb-first.
    #[arg(long, default_value = "msb-first")]
    pub assembly: String,
    /// Transparency-order filter direction: le or ge.
    #[arg(long, default_value = "le")]
    pub to_direction: String,
    #[arg(long, default_value = "hw-squared")]
    pub cc_model: String,
    #[arg(long, default_value = "variance")]
    pub cc_statistic: String,
    /// Additionally require a strict SNR improvement for acceptance.
    #[arg(long)]
    pub require_snr: bool,
    /// Additionally require a strict kappa improvement for acceptance.
    #[arg(long)]
    pub require_cc: bool,
    #[arg(long, default_value_t = 64)]
    pub population: usize,
    #[arg(long, default_value_t = 100)]
    pub generations: usize,
    #[arg(long, default_value_t = 4)]
    pub tournament: usize,
    #[arg(long, default_value_t = 0.1)]
    pub mutation_rate: f64,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Fixture names or file paths (two or more, equal input width).
    pub boxes: Vec<String>,
    #[arg(long)]
    pub format: Option<String>,
    /// Directory of generated boxes contributing min/avg/max columns.
    #[arg(long)]
    pub dir: Option<PathBuf>,
    #[arg(long, default_value = "hw-squared")]
    pub cc_model: String,
    #[arg(long, default_value = "variance")]
    pub cc_statistic: String,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Scope: all, calibration, fixtures or oracles.
    #[arg(long, default_value = "all")]
    pub scope: String,
    #[arg(long, default_value_t = 0x5b0c)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct FixturesArgs {
    /// Export every fixture into this directory (decimal and json).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_cc_model(s: &str) -> CliResult<CcModel> {
    match s {
        "single-bit" => Ok(CcModel::SingleBit),
        "hw-squared" => Ok(CcModel::HwSquared),
        "hw-squared-normalized" => Ok(CcModel::HwSquaredNormalized),
        other => Err(CliError::Usage(format!("unknown cc model '{other}'"))),
    }
}

fn parse_cc_statistic(s: &str) -> CliResult<CcStatistic> {
    match s {
        "min" => Ok(CcStatistic::Min),
        "mean" => Ok(CcStatistic::Mean),
        "max" => Ok(CcStatistic::Max),
        "variance" => Ok(CcStatistic::Variance),
        other => Err(CliError::Usage(format!("unknown cc statistic '{other}'"))),
    }
}

fn parse_snr_variant(s: &str) -> CliResult<SnrVariant> {
    match s {
        "sign" | "sign-transform" => Ok(SnrVariant::SignTransform),
        "zero-one" => Ok(SnrVariant::ZeroOne),
        other => Err(CliError::Usage(format!("unknown snr variant '{other}'"))),
    }
}

/// Resolves a fixture name or a file path into a loaded S-box.
pub fn resolve_input(
    input: &str,
    format: Option<&str>,
    out_bits: Option<usize>,
) -> CliResult<SBoxFile> {
    if let Some(f) = fixtures::by_name(input) {
        for note in &f.notes {
            eprintln!("note[{}]: {note}", f.name);
        }
        return Ok(SBoxFile {
            path: None,
            format: SBoxFormat::Decimal,
            table: f.table.clone(),
            provenance: f.provenance.to_string(),
            notes: f.notes.clone(),
        });
    }
    let format = format.map(SBoxFormat::from_flag).transpose()?;
    formats::load_file(Path::new(input), format, out_bits)
}

fn now_unix() -> Option<u64> {
    SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
}

fn metric_options(cc_model: &str, cc_statistic: &str, snr_variant: &str) -> CliResult<MetricOptions> {
    Ok(MetricOptions {
        snr_variant: parse_snr_variant(snr_variant)?,
        cc_model: parse_cc_model(cc_model)?,
        cc_statistic: parse_cc_statistic(cc_statistic)?,
    })
}

fn evaluate_document(
    name: &str,
    file: &SBoxFile,
    opts: &MetricOptions,
    seed: Option<u64>,
) -> CliResult<ReportDocument> {
    if file.table.input_bits() == file.table.output_bits() && !file.table.is_bijective() {
        eprintln!("warning: {} has duplicate entries; bijectivity expected for n = m", name);
    }
    let report = metrics::full_report(&file.table, opts).map_err(|e| match e {
        sboxkit::Error::NotSquare { .. } | sboxkit::Error::UnsupportedSize { .. } => {
            CliError::Precondition(e.to_string())
        }
        other => CliError::Precondition(other.to_string()),
    })?;
    Ok(report::document(name, &file.table, &report, seed, now_unix()))
}

pub fn cmd_eval(args: &EvalArgs) -> CliResult<()> {
    let opts = metric_options(&args.cc_model, &args.cc_statistic, &args.snr_variant)?;
    let file = resolve_input(&args.input, args.format.as_deref(), args.out_bits)?;
    let doc = evaluate_document(&args.input, &file, &opts, None)?;
    let json = serde_json::to_string_pretty(&doc).expect("serializable");
    if let Some(out) = &args.out {
        std::fs::write(out, format!("{json}\n"))?;
    }
    if args.human {
        let rows = selected_rows(args.metrics.as_deref())?;
        print!("{}", report::human_table(std::slice::from_ref(&doc), &rows));
    } else if args.out.is_none() {
        println!("{json}");
    }
    Ok(())
}

fn selected_rows(metrics_flag: Option<&str>) -> CliResult<Vec<&'static str>> {
    let Some(list) = metrics_flag else {
        return Ok(report::ROW_ORDER.to_vec());
    };
    let mut rows = Vec::new();
    for item in list.split(',') {
        let item = item.trim().to_ascii_uppercase();
        let known = report::ROW_ORDER.iter().find(|r| **r == item);
        match known {
            Some(r) => rows.push(*r),
            None => return Err(CliError::Usage(format!("unknown metric row '{item}'"))),
        }
    }
    Ok(rows)
}

fn search_config(args: &GenArgs) -> CliResult<SearchConfig> {
    let mode = match args.mode.as_str() {
        "exhaustive" => SearchMode::Exhaustive,
        "sample" | "random-sample" => SearchMode::RandomSample,
        "genetic" => SearchMode::Genetic,
        other => return Err(CliError::Usage(format!("unknown mode '{other}'"))),
    };
    let ordering_policy = match args.ordering.as_str() {
        "canonical" => OrderingPolicy::Canonical,
        "best-of-orderings" | "best" => OrderingPolicy::BestOfOrderings,
        other => return Err(CliError::Usage(format!("unknown ordering policy '{other}'"))),
    };
    let assembly_order = match args.assembly.as_str() {
        "msb-first" | "msb" => AssemblyOrder::MsbFirst,
        "lsb-first" | "lsb" => AssemblyOrder::LsbFirst,
        other => return Err(CliError::Usage(format!("unknown assembly order '{other}'"))),
    };
    let to_direction = match args.to_direction.as_str() {
        "le" | "less-or-equal" => ToDirection::LessOrEqual,
        "ge" | "greater-or-equal" => ToDirection::GreaterOrEqual,
        other => return Err(CliError::Usage(format!("unknown to-direction '{other}'"))),
    };
    Ok(SearchConfig {
        mode,
        seed: args.seed,
        max_candidates: args.budget,
        population_size: args.population,
        generations: args.generations,
        tournament_size: args.tournament,
        mutation_rate: args.mutation_rate,
        ordering_policy,
        assembly_order,
        to_direction,
        thresholds: Thresholds {
            require_to: true,
            require_snr: args.require_snr,
            require_cc: args.require_cc,
        },
        metric_opts: metric_options(&args.cc_model, &args.cc_statistic, "sign")?,
    })
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<()> {
    let file = resolve_input(&args.init, args.format.as_deref(), None)?;
    if !file.table.is_bijective() {
        return Err(CliError::Precondition(format!(
            "initial box '{}' is not bijective",
            args.init
        )));
    }
    let config = search_config(args)?;
    let result = parallel::run_search(&file.table, &config, args.workers).map_err(|e| match e {
        CliError::Precondition(msg) if msg.contains("unsupported") => CliError::Precondition(msg),
        other => other,
    })?;

    let doc = report::search_document(&args.init, &file.table, &result);
    eprintln!("#T_total  {}", result.tally.total);
    eprintln!("#T_bij    {}", result.tally.bijective);
    eprintln!("#T_FP     {}", result.tally.fp_zero);
    eprintln!("#T_OFF    {}", result.tally.ofp_zero);
    eprintln!("#T_SNR    {}", result.tally.snr_better);
    eprintln!("#T_TO     {}", result.tally.to_better);
    eprintln!("#T_K      {}", result.tally.cc_better);
    eprintln!("#T_better {}", result.tally.all_better);

    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        for (i, accepted) in result.accepted.iter().enumerate() {
            let masks: Vec<String> =
                accepted.candidate.masks().iter().map(|m| m.to_string()).collect();
            let path = dir.join(format!("sbox-{i:04}.txt"));
            let mut body = format!("# accepted candidate masks: {}\n", masks.join(","));
            body.push_str(&formats::serialize(&accepted.table, SBoxFormat::Decimal));
            std::fs::write(path, body)?;
        }
        let summary = serde_json::to_string_pretty(&doc).expect("serializable");
        std::fs::write(dir.join("summary.json"), format!("{summary}\n"))?;
        eprintln!("wrote {} accepted boxes to {}", result.accepted.len(), dir.display());
    }
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    Ok(())
}

pub fn cmd_compare(args: &CompareArgs) -> CliResult<()> {
    let opts = metric_options(&args.cc_model, &args.cc_statistic, "sign")?;
    let mut docs = Vec::new();
    for name in &args.boxes {
        let file = resolve_input(name, args.format.as_deref(), None)?;
        docs.push(evaluate_document(name, &file, &opts, None)?);
    }
    let mut dir_docs = Vec::new();
    if let Some(dir) = &args.dir {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt" || x == "json"))
            .collect();
        paths.sort();
        for path in paths {
            // Directories may hold non-box files (search summaries);
            // skip whatever does not parse as a table.
            let Ok(file) = formats::load_file(&path, None, None) else {
                eprintln!("note: skipping {} (not an S-box file)", path.display());
                continue;
            };
            let name =
                path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            dir_docs.push(evaluate_document(&name, &file, &opts, None)?);
        }
    }
    if docs.len() + dir_docs.len() < 2 {
        return Err(CliError::Usage("compare needs at least two boxes".into()));
    }
    let n0 = docs.first().or(dir_docs.first()).map(|d| d.n).unwrap_or(0);
    if docs.iter().chain(&dir_docs).any(|d| d.n != n0) {
        return Err(CliError::Precondition("boxes have mixed input widths".into()));
    }

    print!("{}", report::human_table(&docs, &report::ROW_ORDER));
    if !dir_docs.is_empty() {
        println!();
        println!("directory summary over {} boxes:", dir_docs.len());
        print!("{}", report::summary_table(&dir_docs, &report::ROW_ORDER));
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<()> {
    let checks = match args.scope.as_str() {
        "all" => verify::run_all(args.seed),
        "calibration" => {
            let mut c = verify::snr_calibration();
            c.extend(verify::kappa_calibration());
            c
        }
        "fixtures" => verify::fixture_calibration(),
        "oracles" => {
            let mut c = Vec::new();
            for n in 3..=5 {
                c.extend(verify::oracle_sweep(n, 20, args.seed ^ n as u64));
            }
            c.extend(verify::oracle_sweep(6, 5, args.seed ^ 6));
            c
        }
        other => return Err(CliError::Usage(format!("unknown scope '{other}'"))),
    };
    let mut failed = 0;
    for c in &checks {
        let badge = if c.passed { "PASS" } else { "FAIL" };
        println!("[{badge}] {}: {}", c.name, c.detail);
        if !c.passed {
            failed += 1;
        }
    }
    println!("{} checks, {} failed", checks.len(), failed);
    if failed > 0 {
        return Err(CliError::Verification(format!("{failed} verification checks failed")));
    }
    Ok(())
}

pub fn cmd_fixtures(args: &FixturesArgs) -> CliResult<()> {
    for f in fixtures::all() {
        println!(
            "{:<20} {}x{}  {}",
            f.name,
            f.table.input_bits(),
            f.table.output_bits(),
            f.provenance
        );
        for note in &f.notes {
            println!("{:<20}   note: {note}", "");
        }
    }
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        for f in fixtures::all() {
            std::fs::write(
                dir.join(format!("{}.txt", f.name)),
                formats::serialize(&f.table, SBoxFormat::Decimal),
            )?;
            std::fs::write(
                dir.join(format!("{}.json", f.name)),
                formats::serialize(&f.table, SBoxFormat::Json),
            )?;
        }
        println!("exported {} fixtures to {}", fixtures::all().len(), dir.display());
    }
    Ok(())
}

pub fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Fixtures(args) => cmd_fixtures(args),
    }
}
