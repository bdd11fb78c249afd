//! Command-line front end: classification, exact counting, sampling,
//! asymptotics, and the verification suite, with json/csv/plain output.

use std::io;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use permpat::asymptotics::asymptotic_params;
use permpat::families::{Family, FamilyKind};
use permpat::limits::{exact_expectation_e, limit_law, scaling_exponent, LimitLaw};
use permpat::perm::{occurrences, Perm};
use permpat::verify::acceptance::{run_acceptance, AcceptanceConfig};
use permpat::verify::{
    exact_distribution_with_budget, simulate_with, SimulateOptions, DEFAULT_BUDGET,
};

/// Stream id separating CLI sampling from the simulation substreams.
const SAMPLE_STREAM: u64 = 0xC11;

#[derive(Parser)]
#[command(name = "permpat", version, about = "Pattern-avoiding permutation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a forbidden set: family, canonical set, symmetry applied
    Normalize {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Number of members at size n
    Cardinality {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// List every member at size n
    Enumerate {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Refuse to list families with more members than this
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Draw uniform members
    Sample {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        seed: u64,
        /// How many members to draw
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        replicates: u64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Occurrences of a pattern inside one member
    Count {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, value_parser = parse_perm)]
        sigma: Perm,
        #[arg(long, value_parser = parse_perm)]
        perm: Perm,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Leading mean and variance coefficients of a pattern count
    Theory {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, value_parser = parse_perm)]
        sigma: Perm,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Limit law of a normalized pattern count
    Law {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, value_parser = parse_perm)]
        sigma: Perm,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Exact expectation of a pattern count at finite n
    #[command(group(ArgGroup::new("target").required(true).args(["grid", "sigma"])))]
    Expect {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Grid-code exponents i,j,p (needs the binomial-grid family)
        #[arg(long, value_parser = parse_grid)]
        grid: Option<GridSpec>,
        /// Average the exact distribution of this pattern's count
        #[arg(long, value_parser = parse_perm)]
        sigma: Option<Perm>,
        /// Enumeration bound for --sigma
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Monte Carlo moments of a pattern count
    Simulate {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        #[arg(long, value_parser = parse_perm)]
        sigma: Perm,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        replicates: u64,
        #[arg(long)]
        seed: u64,
        /// Worker threads; the report is identical for every value
        #[arg(long)]
        workers: Option<usize>,
        /// Include the normalized histogram of observed counts
        #[arg(long)]
        histogram: bool,
        /// Report the measured wall clock instead of 0
        #[arg(long)]
        timing: bool,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Run the acceptance criteria; nonzero exit if any fail
    Verify {
        #[arg(long)]
        seed: u64,
        /// Worker threads; results are identical for every value
        #[arg(long)]
        workers: Option<usize>,
        /// Comma-separated criterion indices to run (default all)
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..=11))]
        criteria: Option<Vec<u32>>,
        /// Report measured per-criterion seconds instead of 0
        #[arg(long)]
        timing: bool,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
}

#[derive(Clone, Debug)]
struct GridSpec {
    i: u32,
    j: u32,
    p: u32,
}

fn parse_family(text: &str) -> Result<Family, String> {
    let t = text.trim();
    if let Ok(kind) = t.to_ascii_uppercase().parse::<FamilyKind>() {
        return match kind {
            FamilyKind::Trivial => Family::normalize(&[pattern("123"), pattern("321")]),
            _ => Family::from_kind(kind),
        }
        .map_err(|e| e.to_string());
    }
    let patterns = t
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Perm>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Family::normalize(&patterns).map_err(|e| e.to_string())
}

fn parse_perm(text: &str) -> Result<Perm, String> {
    text.parse::<Perm>().map_err(|e| e.to_string())
}

fn parse_grid(text: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err("expected three comma-separated integers i,j,p".to_string());
    }
    let mut nums = [0u32; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part.parse::<u32>().map_err(|e| e.to_string())?;
    }
    if nums[0] == 0 || nums[1] == 0 {
        return Err("grid exponents i and j must be at least 1".to_string());
    }
    Ok(GridSpec {
        i: nums[0],
        j: nums[1],
        p: nums[2],
    })
}

fn pattern(s: &str) -> Perm {
    s.parse().expect("fixed pattern")
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Normalize { family, format } => normalize_cmd(&family, format),
        Command::Cardinality { family, n, format } => cardinality_cmd(&family, n, format),
        Command::Enumerate {
            family,
            n,
            budget,
            format,
        } => enumerate_cmd(&family, n, budget, format),
        Command::Sample {
            family,
            n,
            seed,
            replicates,
            format,
        } => sample_cmd(&family, n, seed, replicates, format),
        Command::Count {
            family,
            sigma,
            perm,
            format,
        } => count_cmd(&family, &sigma, &perm, format),
        Command::Theory {
            family,
            sigma,
            format,
        } => theory_cmd(&family, &sigma, format),
        Command::Law {
            family,
            sigma,
            format,
        } => law_cmd(&family, &sigma, format),
        Command::Expect {
            family,
            n,
            grid,
            sigma,
            budget,
            format,
        } => expect_cmd(&family, n, grid, sigma, budget, format),
        Command::Simulate {
            family,
            sigma,
            n,
            replicates,
            seed,
            workers,
            histogram,
            timing,
            format,
        } => simulate_cmd(
            &family, &sigma, n, replicates, seed, workers, histogram, timing, format,
        ),
        Command::Verify {
            seed,
            workers,
            criteria,
            timing,
            format,
        } => verify_cmd(seed, workers, criteria, timing, format),
    }
}

fn with_pool<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, String> {
    match workers {
        None => Ok(f()),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| e.to_string())
            .map(|pool| pool.install(f)),
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct FamilyInfo {
    family: &'static str,
    forbidden: String,
    canonical_set: String,
    symmetry: String,
}

fn family_info(family: &Family) -> FamilyInfo {
    let canonical = family.kind().canonical_set();
    let canonical_set = if canonical.is_empty() {
        "-".to_string()
    } else {
        canonical
            .iter()
            .map(|p| p.compact().unwrap_or_else(|| p.to_string()))
            .collect::<Vec<_>>()
            .join(",")
    };
    FamilyInfo {
        family: family.name(),
        forbidden: family.set_label(),
        canonical_set,
        symmetry: family.symmetry().to_string(),
    }
}

fn perm_label(p: &Perm) -> String {
    p.compact().unwrap_or_else(|| p.to_string())
}

fn emit_json<T: Serialize>(value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    println!("{text}");
    Ok(())
}

fn csv_out() -> csv::Writer<io::Stdout> {
    csv::Writer::from_writer(io::stdout())
}

fn finish_csv(mut writer: csv::Writer<io::Stdout>) -> Result<(), String> {
    writer.flush().map_err(|e| e.to_string())
}

fn normalize_cmd(family: &Family, format: Format) -> Result<ExitCode, String> {
    let info = family_info(family);
    match format {
        Format::Plain => {
            println!("family {}", info.family);
            println!("forbidden {}", info.forbidden);
            println!("canonical {}", info.canonical_set);
            println!("symmetry {}", info.symmetry);
        }
        Format::Json => emit_json(&info)?,
        Format::Csv => {
            let mut w = csv_out();
            w.write_record(["family", "forbidden", "canonical", "symmetry"])
                .map_err(|e| e.to_string())?;
            w.write_record([
                info.family,
                &info.forbidden,
                &info.canonical_set,
                &info.symmetry,
            ])
            .map_err(|e| e.to_string())?;
            finish_csv(w)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cardinality_cmd(family: &Family, n: u64, format: Format) -> Result<ExitCode, String> {
    let count = family.cardinality(n).map_err(|e| e.to_string())?;
    match format {
        Format::Plain => println!("{count}"),
        Format::Json => emit_json(&json!({
            "family": family_info(family),
            "n": n,
            "cardinality": count.to_string(),
        }))?,
        Format::Csv => {
            let mut w = csv_out();
            w.write_record(["family", "n", "cardinality"])
                .map_err(|e| e.to_string())?;
            w.write_record([family.name(), &n.to_string(), &count.to_string()])
                .map_err(|e| e.to_string())?;
            finish_csv(w)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn guard_budget(family: &Family, n: u64, budget: u64) -> Result<(), String> {
    let count = family.cardinality(n).map_err(|e| e.to_string())?;
    if count > num_bigint::BigUint::from(budget) {
        return Err(format!(
            "family has {count} members at n = {n}, above the budget of {budget}"
        ));
    }
    Ok(())
}

fn enumerate_cmd(family: &Family, n: u64, budget: u64, format: Format) -> Result<ExitCode, String> {
    guard_budget(family, n, budget)?;
    let members = family.enumerate(n).map_err(|e| e.to_string())?;
    match format {
        Format::Plain => {
            for p in members {
                println!("{p}");
            }
        }
        Format::Json => {
            let rows: Vec<Vec<u32>> = members.map(|p| p.values().to_vec()).collect();
            emit_json(&json!({
                "family": family_info(family),
                "n": n,
                "members": rows,
            }))?;
        }
        Format::Csv => {
            let mut w = csv_out();
            w.write_record(["member"]).map_err(|e| e.to_string())?;
            for p in members {
                w.write_record([p.to_string()]).map_err(|e| e.to_string())?;
            }
            finish_csv(w)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn sample_cmd(
    family: &Family,
    n: u64,
    seed: u64,
    replicates: u64,
    format: Format,
) -> Result<ExitCode, String> {
    let sampler = family.sampler(n).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(SAMPLE_STREAM);
    let members: Vec<Perm> = (0..replicates).map(|_| sampler.sample(&mut rng)).collect();
    match format {
        Format::Plain => {
            for p in &members {
                println!("{p}");
            }
        }
        Format::Json => {
            let rows: Vec<&[u32]> = members.iter().map(|p| p.values()).collect();
            emit_json(&json!({
                "family": family_info(family),
                "n": n,
                "seed": seed,
                "replicates": replicates,
                "members": rows,
            }))?;
        }
        Format::Csv => {
            let mut w = csv_out();
            w.write_record(["member"]).map_err(|e| e.to_string())?;
            for p in &members {
                w.write_record([p.to_string()]).map_err(|e| e.to_string())?;
            }
            finish_csv(w)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn count_cmd(family: &Family, sigma: &Perm, perm: &Perm, format: Format) -> Result<ExitCode, String> {
    let count = match family.encode(perm) {
        Ok(code) => family.fast_count(sigma, &code).map_err(|e| e.to_string())?,
        Err(permpat::families::FamilyError::NoCodedForm(_)) => {
            if !family.is_member(perm) {
                return Err(format!("{perm} is not a member of {}", family.name()));
            }
            occurrences(sigma, perm)
        }
        Err(other) => return Err(other.to_string()),
    };
    match format {
        Format::Plain => println!("{count}"),
        Format::Json => emit_json(&json!({
            "family": family_info(family),
            "sigma": perm_label(sigma),
            "perm": perm.to_string(),
            "count": count.to_string(),
        }))?,
        Format::Csv => {
            let mut w = csv_out();
            w.write_record(["family", "sigma", "perm", "count"])
                .map_err(|e| e.to_string())?;
            w.write_record([
                family.name(),
                &perm_label(sigma),
                &perm.to_string(),
                &count.to_string(),
            ])
            .map_err(|e| e.to_string())?;
            finish_csv(w)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn theory_cmd(family: &Family, sigma: &Perm, format: Format) -> Result<ExitCode, String> {
    let params = asymptotic_params(family, sigma).map_err(|e| e.to_string())?;
    match format {
        Format::Plain => {
            println!("family {}", params.family);
            println!("sigma {}", params.sigma);
            println!("meanCoeff {}", params.mean_coeff);
            println!("meanExponent {}", params.mean_exponent);
            println!("varCoeff {}", params.var_coeff);
            println!("varExponent {}", params.var_exponent);
            println!("degenerate {}", params.degenerate);
        }
        Format::Json => emit_json(&json!({
            "family": family_info(family),
            "params": params,
        }))?,
        Format::Csv => {
            let mut w = csv_out();
            w.write_record([
                "family",
                "sigma",
                "meanCoeff",
                "meanExponent",
                "varCoeff",
                "varExponent",
                "degenerate",
            ])
            .map_err(|e| e.to_string())?;
            w.write_record([
                params.family.as_str(),
                params.sigma.as_str(),
                &params.mean_coeff.to_string(),
                &params.mean_exponent.to_string(),
                &params.var_coeff.to_string(),
                &params.var_exponent.to_string(),
                &params.degenerate.to_string(),
            ])
            .map_err(|e| e.to_string())?;
            finish_csv(w)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn scaling_label(law: &LimitLaw) -> String {
    match (scaling_exponent(law), law) {
        (Some(e), _) => format!("n^{e}"),
        (None, LimitLaw::Excursion(exc)) => {
            let lambda = match exc {
                permpat::limits::ExcursionLaw::Single132 { lambda, .. } => *lambda,
                permpat::limits::ExcursionLaw::Single321 { lambda, .. } => *lambda,
            };
            format!("n^({lambda}/2)")
        }
        (None, _) => "-".to_string(),
    }
}

fn law_cmd(family: &Family, sigma: &Perm, format: Format) -> Result<ExitCode, String> {
    let law = limit_law(family, sigma).map_err(|e| e.to_string())?;
    let scaling = scaling_label(&law);
    match format {
        Format::Plain => {
            let value = serde_json::to_value(&law).map_err(|e| e.to_string())?;
            let object = value.as_object().expect("laws serialize as objects");
            for (key, entry) in object {
                println!("{key} {}", plain_value(entry));
            }
            println!("scaling {scaling}");
        }
        Format::Json => emit_json(&json!({
            "family": family_info(family),
            "sigma": perm_label(sigma),
            "law": law,
            "scalingExponent": scaling_exponent(&law),
            "scaling": scaling,
        }))?,
        Format::Csv => {
            let detail = serde_json::to_string(&law).map_err(|e| e.to_string())?;
            let mut w = csv_out();
            w.write_record(["family", "sigma", "law", "scaling"])
                .map_err(|e| e.to_string())?;
            w.write_record([family.name(), &perm_label(sigma), &detail, &scaling])
                .map_err(|e| e.to_string())?;
            finish_csv(w)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn plain_value(value: &serde_json::Value) -> String {
    match value {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => items
            .iter()
            .map(plain_value)
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    }
}

fn expect_cmd(
    family: &Family,
    n: u64,
    grid: Option<GridSpec>,
    sigma: Option<Perm>,
    budget: u64,
    format: Format,
) -> Result<ExitCode, String> {
    let (target, value): (String, BigRational) = if let Some(grid) = grid {
        if family.kind() != FamilyKind::PairE {
            return Err(format!(
                "grid expectations are defined for the binomial-grid family, not {}",
                family.name()
            ));
        }
        (
            format!("grid {},{},{}", grid.i, grid.j, grid.p),
            exact_expectation_e(grid.i, grid.j, grid.p, n),
        )
    } else {
        let sigma = sigma.expect("clap enforces exactly one of grid and sigma");
        let dist = exact_distribution_with_budget(family, &sigma, n, budget)
            .map_err(|e| e.to_string())?;
        (format!("sigma {}", perm_label(&sigma)), dist.mean())
    };
    match format {
        Format::Plain => println!("{value}"),
        Format::Json => emit_json(&json!({
            "family": family_info(family),
            "n": n,
            "target": target,
            "numerator": value.numer().to_string(),
            "denominator": value.denom().to_string(),
            "value": value.to_f64(),
        }))?,
        Format::Csv => {
            let mut w = csv_out();
            w.write_record(["family", "n", "target", "numerator", "denominator", "value"])
                .map_err(|e| e.to_string())?;
            w.write_record([
                family.name(),
                &n.to_string(),
                &target,
                &value.numer().to_string(),
                &value.denom().to_string(),
                &value.to_f64().map_or_else(String::new, |v| v.to_string()),
            ])
            .map_err(|e| e.to_string())?;
            finish_csv(w)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn opt_label(value: Option<f64>) -> String {
    value.map_or_else(|| "-".to_string(), |v| v.to_string())
}

#[allow(clippy::too_many_arguments)]
fn simulate_cmd(
    family: &Family,
    sigma: &Perm,
    n: u64,
    replicates: u64,
    seed: u64,
    workers: Option<usize>,
    histogram: bool,
    timing: bool,
    format: Format,
) -> Result<ExitCode, String> {
    let opts = SimulateOptions { histogram };
    let mut report = with_pool(workers, || {
        simulate_with(family, sigma, n, replicates, seed, opts)
    })?
    .map_err(|e| e.to_string())?;
    if !timing {
        report.wall_clock = 0.0;
    }
    match format {
        Format::Plain => {
            println!("family {}", report.family);
            println!("sigma {}", report.sigma);
            println!("n {}", report.n);
            println!("replicates {}", report.replicates);
            println!("seed {}", report.seed);
            println!("empiricalMean {}", report.empirical_mean);
            println!("empiricalVariance {}", report.empirical_variance);
            println!("standardizedSkewness {}", report.standardized_skewness);
            println!(
                "standardizedExcessKurtosis {}",
                report.standardized_excess_kurtosis
            );
            println!("theoreticalMean {}", opt_label(report.theoretical_mean));
            println!(
                "theoreticalVariance {}",
                opt_label(report.theoretical_variance)
            );
            println!("wallClock {}", report.wall_clock);
            if let Some(hist) = &report.normalized_histogram {
                println!("histogram value probability");
                for (value, probability) in hist {
                    println!("{value} {probability}");
                }
            }
        }
        Format::Json => emit_json(&report)?,
        Format::Csv => {
            let mut w = csv_out();
            if let Some(hist) = &report.normalized_histogram {
                w.write_record(["value", "probability"])
                    .map_err(|e| e.to_string())?;
                for (value, probability) in hist {
                    w.write_record([value.to_string(), probability.to_string()])
                        .map_err(|e| e.to_string())?;
                }
            } else {
                w.write_record([
                    "family",
                    "sigma",
                    "n",
                    "replicates",
                    "seed",
                    "empiricalMean",
                    "empiricalVariance",
                    "standardizedSkewness",
                    "standardizedExcessKurtosis",
                    "theoreticalMean",
                    "theoreticalVariance",
                    "wallClock",
                ])
                .map_err(|e| e.to_string())?;
                w.write_record([
                    report.family.clone(),
                    report.sigma.clone(),
                    report.n.to_string(),
                    report.replicates.to_string(),
                    report.seed.to_string(),
                    report.empirical_mean.to_string(),
                    report.empirical_variance.to_string(),
                    report.standardized_skewness.to_string(),
                    report.standardized_excess_kurtosis.to_string(),
                    report.theoretical_mean.map_or_else(String::new, |v| v.to_string()),
                    report
                        .theoretical_variance
                        .map_or_else(String::new, |v| v.to_string()),
                    report.wall_clock.to_string(),
                ])
                .map_err(|e| e.to_string())?;
            }
            finish_csv(w)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(
    seed: u64,
    workers: Option<usize>,
    criteria: Option<Vec<u32>>,
    timing: bool,
    format: Format,
) -> Result<ExitCode, String> {
    let config = AcceptanceConfig { criteria, seed };
    let mut summary = with_pool(workers, || run_acceptance(&config))?;
    if !timing {
        for result in &mut summary.results {
            result.seconds = 0.0;
        }
    }
    match format {
        Format::Plain => {
            for result in &summary.results {
                println!("{}", result.line());
            }
            println!(
                "summary {} passed, {} failed",
                summary.results.len() - summary.failures as usize,
                summary.failures
            );
        }
        Format::Json => emit_json(&summary)?,
        Format::Csv => {
            let mut w = csv_out();
            w.write_record(["index", "name", "passed", "seconds", "detail"])
                .map_err(|e| e.to_string())?;
            for r in &summary.results {
                w.write_record([
                    r.index.to_string(),
                    r.name.to_string(),
                    r.passed.to_string(),
                    format!("{:.1}", r.seconds),
                    r.detail.clone(),
                ])
                .map_err(|e| e.to_string())?;
            }
            finish_csv(w)?;
        }
    }
    if summary.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
