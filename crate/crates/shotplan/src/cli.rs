//! Command-line surface. All subcommands are thin wrappers over library
//! calls so the same paths are reachable programmatically.
//!
//! Exit codes: 0 ok, 1 invalid input, 2 validation failure, 3 timeout.

use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crate::baseline::{
    binary_cover, family_to_schedule, qot_family, random_pauli_scheme, random_required_shots,
    random_upper_bound,
};
use crate::bounds::{
    hoeffding_samples, multiset_existence_bound, reference_partition_band,
    reference_partition_size, simple_set_lower_bound,
};
use crate::error::{Error, Result};
use crate::exact::{clique_lower_bound, exact_min_shots_with_limit, ExactOutcome};
use crate::io::{read_observable_file, read_schedule, write_schedule, Provenance};
use crate::metrics::{qot_avg_ratio, qot_worst_ratio, schedule_quality, ScheduleQuality};
use crate::pauli::{enumerate_weight_k, parse_pauli, PauliString, Relation, WeightMode};
use crate::schedule::{
    build_multiset, greedy_partition, multiset_lower_bound, multiset_lower_bound_sqrt,
    uniform_requests, AccuracySpec, MeasurementRequest, ObservableEntry, Schedule,
};
use crate::sweep::{rows_to_csv, sweep_fig3, sweep_fig_s1, sweep_fig_s2, SweepRow, CSV_HEADER};
use crate::verify::validate_schedule;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 1;
pub const EXIT_VALIDATION_FAILURE: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;

#[derive(Parser)]
#[command(
    name = "shotplan",
    version,
    about = "Partition multisets of Pauli observables into measurement shots"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a measurement multiset and partition it into shots.
    Partition(PartitionArgs),
    /// Generate a baseline shot family as a schedule file.
    Baseline(BaselineArgs),
    /// Validate a schedule file; exit 0 iff it is valid.
    Verify(VerifyArgs),
    /// Print quality metrics of a schedule file as a one-row CSV.
    Metrics(MetricsArgs),
    /// Emit figure-reproduction CSV data.
    Sweep(SweepArgs),
    /// Print the closed-form bounds for a problem size.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct PartitionArgs {
    /// Observable file (one observable per line; `#` comments, `* w`
    /// multiplicity overrides).
    #[arg(long, conflicts_with = "generate")]
    input: Option<PathBuf>,
    /// Generate the observable set instead: `n=4,k=2[,mode=exactly|up_to]`
    /// (default mode excludes weights below k, matching the convention of
    /// ignoring one-qubit strings in the two-local problem).
    #[arg(long)]
    generate: Option<String>,
    /// Per-observable absolute error target.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Total failure probability, split evenly over the observables.
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Portion of the full repetition count placed in the multiset; the
    /// partition is repeated to make up the rest.
    #[arg(long, default_value_t = 0.02)]
    fraction: f64,
    /// Uniform repetition count per observable, bypassing the accuracy
    /// parameters.
    #[arg(long, conflicts_with_all = ["epsilon", "delta", "fraction"])]
    repetitions: Option<usize>,
    /// Compatibility relation: `qwc` or `commute`.
    #[arg(long, default_value = "qwc")]
    relation: String,
    /// Shuffle seed for the greedy pass.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run the exact minimum-shot solver (small instances).
    #[arg(long)]
    exact: bool,
    /// Time budget for the exact solver.
    #[arg(long, default_value_t = 60_000)]
    budget_ms: u64,
    /// Copy-count guard for the exact solver.
    #[arg(long, default_value_t = crate::exact::EXACT_MAX_COPIES)]
    max_copies: usize,
    /// Write the schedule file here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BaselineArgs {
    #[command(subcommand)]
    kind: BaselineKind,
}

#[derive(Subcommand)]
enum BaselineKind {
    /// The overlapping-tomography family: 6·log2(n)+3 shots covering every
    /// two-qubit Pauli string.
    Qot {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// ceil(log2 n) binary rows separating every qubit pair (0 -> Z, 1 -> X).
    BinaryCover {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Independent uniform random Pauli bases.
    Random {
        #[arg(long)]
        n: usize,
        /// Number of shots.
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Attach the weight-k observable set (coverage becomes the
        /// multiplicities; uncovered observables are dropped).
        #[arg(long)]
        attach_weight: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Schedule file to validate.
    #[arg(long)]
    schedule: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    /// Schedule file to evaluate.
    #[arg(long)]
    schedule: PathBuf,
    /// How many times the schedule is repeated.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// One of fig3, figS1, figS2, figS3.
    #[arg(long)]
    name: String,
    /// Comma-separated system sizes (defaults depend on the sweep).
    #[arg(long)]
    n: Option<String>,
    /// Number of seeds (0..seeds-1) per measured cell.
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    /// Largest repetition count (figS1 only).
    #[arg(long, default_value_t = 100)]
    reps_max: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
}

/// Parse arguments from the environment and run; returns the process exit
/// code.
pub fn run_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_INVALID_INPUT
            } else {
                EXIT_OK // --help / --version
            };
            let _ = err.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::InvalidSchedule(_) => EXIT_VALIDATION_FAILURE,
                _ => EXIT_INVALID_INPUT,
            }
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Partition(args) => cmd_partition(args),
        Command::Baseline(args) => cmd_baseline(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Bounds(args) => cmd_bounds(args),
    }
}

fn parse_generate(text: &str) -> Result<(usize, usize, WeightMode)> {
    let mut n = None;
    let mut k = None;
    let mut mode = WeightMode::Exactly;
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value in generate spec: {part:?}")))?;
        match key.trim() {
            "n" => n = Some(value.trim().parse().map_err(|_| {
                Error::Parse(format!("bad n in generate spec: {value:?}"))
            })?),
            "k" => k = Some(value.trim().parse().map_err(|_| {
                Error::Parse(format!("bad k in generate spec: {value:?}"))
            })?),
            "mode" => mode = value.trim().parse()?,
            other => {
                return Err(Error::Parse(format!(
                    "unknown generate key {other:?} (expected n, k, mode)"
                )))
            }
        }
    }
    let n = n.ok_or_else(|| Error::Parse("generate spec needs n=<qubits>".into()))?;
    let k = k.ok_or_else(|| Error::Parse("generate spec needs k=<weight>".into()))?;
    Ok((n, k, mode))
}

fn load_entries(args: &PartitionArgs) -> Result<Vec<ObservableEntry>> {
    match (&args.input, &args.generate) {
        (Some(path), None) => read_observable_file(path),
        (None, Some(spec)) => {
            let (n, k, mode) = parse_generate(spec)?;
            Ok(enumerate_weight_k(n, k, mode)?
                .into_iter()
                .map(ObservableEntry::plain)
                .collect())
        }
        _ => Err(Error::InvalidArgument(
            "exactly one of --input and --generate is required".into(),
        )),
    }
}

fn print_summary(
    schedule: &Schedule,
    requests: &[MeasurementRequest],
    relation: Relation,
) -> Result<ScheduleQuality> {
    let w_max = requests.iter().map(|r| r.multiplicity).max().unwrap_or(0);
    println!("observables: {}", requests.len());
    println!(
        "copies: {}",
        requests.iter().map(|r| r.multiplicity).sum::<usize>()
    );
    println!("shots: {}", schedule.shot_count());
    // Weighted-clique bound on the multiset and the max(d1, w) chain from
    // the simple-set bound; skipped for very large instances.
    if requests.len() <= 30_000 {
        let clique = clique_lower_bound(requests, relation)?;
        let simple: Vec<MeasurementRequest> = requests
            .iter()
            .map(|r| MeasurementRequest {
                observable: r.observable.clone(),
                multiplicity: 1,
            })
            .collect();
        let d1 = clique_lower_bound(&simple, relation)?;
        println!("lower bound (weighted clique): {clique}");
        println!(
            "lower bound max(d1, w) = max({d1}, {w_max}) = {}  [sqrt(w*d1) = {:.3}]",
            multiset_lower_bound(d1, w_max),
            multiset_lower_bound_sqrt(d1, w_max)
        );
    }
    let quality = schedule_quality(schedule, requests, 1)?;
    println!(
        "shots/repetition: {:.4}{}",
        quality.shots_per_repetition,
        if quality.uniform_multiplicity {
            ""
        } else {
            " (per minimum multiplicity)"
        }
    );
    println!("avg SD ratio: {:.6}", quality.avg_sd_ratio);
    println!("worst SD ratio: {:.6}", quality.worst_sd_ratio);
    Ok(quality)
}

fn cmd_partition(args: PartitionArgs) -> Result<i32> {
    let relation: Relation = args.relation.parse()?;
    let entries = load_entries(&args)?;
    let (requests, provenance) = match args.repetitions {
        Some(w) => {
            if w == 0 {
                return Err(Error::InvalidArgument("repetitions must be >= 1".into()));
            }
            let observables: Vec<PauliString> =
                entries.iter().map(|e| e.observable.clone()).collect();
            let requests = uniform_requests(&observables, w);
            let provenance = Provenance {
                generator: "greedy".into(),
                epsilon: None,
                delta: None,
                fraction: None,
                multiplicities: Vec::new(),
                observables: Vec::new(),
            };
            (requests, provenance)
        }
        None => {
            let spec = AccuracySpec::new(args.epsilon, args.delta, args.fraction)?;
            let requests = build_multiset(&entries, &spec)?;
            let provenance = Provenance {
                generator: "greedy".into(),
                epsilon: Some(args.epsilon),
                delta: Some(args.delta),
                fraction: Some(args.fraction),
                multiplicities: Vec::new(),
                observables: Vec::new(),
            };
            (requests, provenance)
        }
    };

    let (schedule, provenance, timed_out) = if args.exact {
        let outcome = exact_min_shots_with_limit(
            &requests,
            relation,
            Duration::from_millis(args.budget_ms),
            args.max_copies,
        )?;
        match outcome {
            ExactOutcome::Optimal(schedule) => {
                println!("exact minimum found");
                (
                    schedule,
                    Provenance {
                        generator: "exact".into(),
                        ..provenance
                    },
                    false,
                )
            }
            ExactOutcome::TimedOut {
                lower_bound,
                incumbent,
            } => {
                println!(
                    "exact search timed out; proven lower bound {lower_bound}, best incumbent {}",
                    incumbent.shot_count()
                );
                (
                    incumbent,
                    Provenance {
                        generator: "exact-incumbent".into(),
                        ..provenance
                    },
                    true,
                )
            }
        }
    } else {
        (
            greedy_partition(&requests, relation, args.seed)?,
            provenance,
            false,
        )
    };

    print_summary(&schedule, &requests, relation)?;
    if let Some(path) = &args.out {
        write_schedule(path, &schedule, &requests, &provenance)?;
        println!("wrote {}", path.display());
    }
    Ok(if timed_out { EXIT_TIMEOUT } else { EXIT_OK })
}

fn baseline_provenance(generator: &str) -> Provenance {
    Provenance {
        generator: generator.into(),
        epsilon: None,
        delta: None,
        fraction: None,
        multiplicities: Vec::new(),
        observables: Vec::new(),
    }
}

fn write_family(
    out: Option<&PathBuf>,
    bases: &[PauliString],
    observables: &[PauliString],
    generator: &str,
    seed: u64,
) -> Result<()> {
    let (mut schedule, requests) = family_to_schedule(bases, observables, Relation::QubitWise)?;
    schedule.seed = seed;
    println!("shots: {}", schedule.shot_count());
    println!("observables served: {}", requests.len());
    if let Some(path) = out {
        write_schedule(path, &schedule, &requests, &baseline_provenance(generator))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_baseline(args: BaselineArgs) -> Result<i32> {
    match args.kind {
        BaselineKind::Qot { n, out } => {
            let family = qot_family(n)?;
            let observables = enumerate_weight_k(n, 2, WeightMode::Exactly)?;
            write_family(out.as_ref(), &family.shots, &observables, "qot", 0)?;
        }
        BaselineKind::BinaryCover { n, out } => {
            let cover = binary_cover(n)?;
            for r in 0..cover.rows.len() {
                println!("{}", cover.row_string(r));
            }
            // Serve the pair-separating observables Z_i X_j; uncovered
            // orientations are dropped by construction.
            let mut observables = Vec::new();
            for i in 1..=n {
                for j in 1..=n {
                    if i != j {
                        observables.push(parse_pauli(&format!("Z{i} X{j} @ n={n}"))?);
                    }
                }
            }
            write_family(out.as_ref(), &cover.shots(), &observables, "binary-cover", 0)?;
        }
        BaselineKind::Random {
            n,
            d,
            seed,
            attach_weight,
            out,
        } => {
            let bases = random_pauli_scheme(n, d, seed)?;
            let observables = match attach_weight {
                Some(k) => enumerate_weight_k(n, k, WeightMode::Exactly)?,
                None => Vec::new(),
            };
            write_family(out.as_ref(), &bases, &observables, "random", seed)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let (schedule, requests, provenance) = read_schedule(&args.schedule)?;
    let report = validate_schedule(&schedule, &requests, schedule.relation);
    print!("{report}");
    if report.is_valid() {
        println!(
            "schedule: {} shots, {} observables, generator {}",
            schedule.shot_count(),
            requests.len(),
            provenance.generator
        );
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VALIDATION_FAILURE)
    }
}

fn cmd_metrics(args: MetricsArgs) -> Result<i32> {
    let (schedule, requests, provenance) = read_schedule(&args.schedule)?;
    let quality = schedule_quality(&schedule, &requests, args.repeats)?;
    let method: &'static str = match provenance.generator.as_str() {
        "qot" => "qot",
        "binary-cover" => "binary-cover",
        "random" => "random",
        "exact" => "exact",
        "exact-incumbent" => "exact-incumbent",
        "greedy-reference" => "greedy-reference",
        _ => "greedy",
    };
    let row = SweepRow {
        n: schedule.n,
        method,
        seed: Some(schedule.seed),
        repetitions: Some(requests.iter().map(|r| r.multiplicity).min().unwrap_or(0)),
        shots: Some(schedule.shot_count()),
        shots_per_repetition: Some(quality.shots_per_repetition),
        avg_ratio: Some(quality.avg_sd_ratio),
        worst_ratio: Some(quality.worst_sd_ratio),
        ..SweepRow::default()
    };
    println!("{CSV_HEADER}");
    println!("{}", row.to_csv());
    Ok(EXIT_OK)
}

fn parse_ns(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad n value {part:?}")))
        })
        .collect()
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let rows = match args.name.as_str() {
        "fig3" => {
            let ns = match &args.n {
                Some(text) => parse_ns(text)?,
                None => vec![8, 12, 16, 24, 32, 48, 64],
            };
            sweep_fig3(&ns, args.seeds)?
        }
        "figS1" => {
            let ns = match &args.n {
                Some(text) => parse_ns(text)?,
                None => vec![4],
            };
            if ns.len() != 1 {
                return Err(Error::InvalidArgument(
                    "figS1 sweeps a single system size".into(),
                ));
            }
            sweep_fig_s1(ns[0], args.reps_max, args.seeds)?
        }
        "figS2" | "figS3" => {
            let ns = match &args.n {
                Some(text) => parse_ns(text)?,
                None => vec![4, 8, 16, 32, 64],
            };
            sweep_fig_s2(&ns, args.seeds)?
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown sweep {other:?} (expected fig3, figS1, figS2, figS3)"
            )))
        }
    };
    let csv = rows_to_csv(&rows);
    match &args.out {
        Some(path) => {
            std::fs::write(path, csv)?;
            println!("wrote {}", path.display());
        }
        None => print!("{csv}"),
    }
    Ok(EXIT_OK)
}

fn cmd_bounds(args: BoundsArgs) -> Result<i32> {
    let BoundsArgs {
        n,
        k,
        epsilon,
        delta,
    } = args;
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "weight k={k} out of range 1..={n}"
        )));
    }
    let m = enumerate_weight_k(n, k, WeightMode::Exactly)?.len();
    let spec = AccuracySpec::new(epsilon, delta, 1.0)?;
    let w = crate::schedule::required_repetitions(&spec, m)?;
    println!("n = {n}, k = {k}, epsilon = {epsilon}, delta = {delta}");
    println!("weight-{k} observables (m): {m}");
    println!("repetitions per observable (Hoeffding, delta/m): {w}");
    println!(
        "  consistency: hoeffding_samples(eps, delta/m, range 2) = {}",
        hoeffding_samples(epsilon, delta / m as f64, 2.0)?
    );
    if n >= 2 {
        println!(
            "simple-set lower bound ceil(log2 n): {}",
            simple_set_lower_bound(n)?
        );
        let (lo, hi) = reference_partition_band(n)?;
        println!(
            "reference partition 6*ceil(log3 n)+3: {}  [band {:.3} .. {:.3}]",
            reference_partition_size(n)?,
            lo,
            hi
        );
        println!(
            "multiset lower bound max(log2 n, w): {}  [sqrt(w*d1) = {:.3}]",
            multiset_lower_bound(simple_set_lower_bound(n)?, w),
            multiset_lower_bound_sqrt(simple_set_lower_bound(n)?, w)
        );
    }
    if n >= 3 {
        println!(
            "multiset existence bound 2(3^k a + 3^2k k) ln n (a = 1): {:.1}",
            multiset_existence_bound(k as u32, 1.0, n)?
        );
    }
    let p = 3f64.powi(-(k as i32));
    println!(
        "random shots for w repetitions of everything (Lemma): {}",
        random_required_shots(p, w as f64, m.max(2))?
    );
    let rb = random_upper_bound(k as u32, m, epsilon, delta)?;
    println!(
        "random-measurement upper bound 8*3^(k-1) ln(2m/delta)/eps^2: {}  [prior 68*3^k form: {:.0}]",
        rb.shots, rb.prior_exact
    );
    if n >= 4 && n.is_power_of_two() {
        println!(
            "QOT normalized SD ratios: avg {:.6}, worst {:.6}",
            qot_avg_ratio(n)?,
            qot_worst_ratio(n)?
        );
    }
    Ok(EXIT_OK)
}
