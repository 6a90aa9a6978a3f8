//! `qaoa-lab`: batch runner for QAOA simulation, symmetry certification,
//! parameter transfer scans and RQAOA.
//!
//! Exit codes: 0 success, 1 usage error, 2 infeasible configuration,
//! 3 numerical certification failure.

mod parse;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qaoa_lab::analytic::{random_guess_closed_form, random_guess_reference, transfer_error_closed_form};
use qaoa_lab::maxcut::{approximation_ratio, brute_force_extremes, index_from_spins};
use qaoa_lab::rqaoa::rqaoa_run;
use qaoa_lab::simulator::QaoaSimulator;
use qaoa_lab::symmetry::{canonicalize_to_u, domain_tag, enumerate_orbit, transforms_for, verify_symmetry_with};
use qaoa_lab::transfer::{
    receiver_optimum, scan_degrees, write_csv, DonorSelector, Method, OptimizerConfig, ReceiverModel, ScanPlan,
};
use qaoa_lab::{classify_symmetry, fixtures, Execution, IsingInstance, ParameterSet, SymmetryKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "qaoa-lab", version, about = "QAOA landscapes, symmetries and parameter transfer")]
struct Cli {
    /// Worker threads (overrides QAOA_LAB_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run every kernel on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expectation value and approximation ratio at given angles.
    Simulate {
        #[command(flatten)]
        graph: GraphArgs,
        /// Per-layer angles `g1,b1,g2,b2,...`; a `pi` suffix means units of pi.
        #[arg(long, allow_hyphen_values = true, value_parser = parse::params)]
        params: ParameterSet,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Multistart optimization of the angles.
    Optimize {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Extra start point, `g1,b1,...`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse::params)]
        start: Option<ParameterSet>,
        #[command(flatten)]
        opt: OptArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Numerically certifies the landscape symmetries of an instance.
    SymmetryCheck {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lists the symmetry orbit of a parameter set and its canonical member.
    Orbit {
        /// Per-layer angles `g1,b1,g2,b2,...`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse::params, required_unless_present = "fixture")]
        params: Option<ParameterSet>,
        /// Named fixture (`tree3-p2`); its first set is used.
        #[arg(long, conflicts_with = "params")]
        fixture: Option<String>,
        /// EWS or OWS.
        #[arg(long)]
        class: SymmetryKind,
        /// Print angles in radians instead of units of pi.
        #[arg(long)]
        radians: bool,
    },
    /// Degree scan of the transferability error; writes the scan CSV or JSON.
    TransferScan(ScanArgs),
    /// Closed-form transferability error on triangle-free regular receivers.
    Analytic {
        #[arg(long, default_value_t = 2)]
        d_min: usize,
        #[arg(long)]
        d_max: usize,
        /// Donor degrees, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        d_prime: Vec<usize>,
        /// Fraction of edges in the receiver's maximum cut.
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Recursive QAOA with a JSON-lines step log.
    Rqaoa {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Solve by brute force once this many vertices remain.
        #[arg(long, default_value_t = 3)]
        stop_at: usize,
        /// Step log path (JSON lines).
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        opt: OptArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// K5, K3,3, C6, P4, Q3, edge, tree:d:p, reg:n:d[:seed[:weights]],
    /// er:n:q[:seed], ba:n:m[:seed], ws:n:k:rewire[:seed], or a file path.
    #[arg(long)]
    graph: String,
    /// Local fields `h_0,h_1,...` added to the instance.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
    fields: Option<Vec<f64>>,
}

#[derive(Args, Clone)]
struct OptArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::Gradient)]
    method: MethodArg,
    #[arg(long, default_value_t = 500)]
    max_steps: usize,
    /// Uniform random starts added to the eight cell centers.
    #[arg(long, default_value_t = 0)]
    random_starts: usize,
    /// Seed of the random starts.
    #[arg(long, default_value_t = 0)]
    opt_seed: u64,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Regular)]
    model: ModelArg,
    /// Watts-Strogatz rewiring probability (required for `--model ws`).
    #[arg(long)]
    rewire: Option<f64>,
    #[arg(long)]
    n: usize,
    /// Receiver degrees (average degree for random models), comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<usize>,
    /// Donor tree degrees, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    donor_degrees: Vec<usize>,
    /// Donor orbit members: U1, U2, nonU, set1..set8.
    #[arg(long, default_value = "U1", value_delimiter = ',')]
    donors: Vec<DonorSelector>,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value_t = 10)]
    instances: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// unit, pm1, or a comma-separated list of values.
    #[arg(long, default_value = "unit", value_parser = parse::weights)]
    weights: qaoa_lab::graph::WeightScheme,
    #[command(flatten)]
    opt: OptArgs,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Gradient,
    Coordinate,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Regular,
    Er,
    Ba,
    Ws,
}

enum Failure {
    Usage(String),
    Infeasible(String),
    Certification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Infeasible(_) => 2,
            Failure::Certification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Infeasible(m) | Failure::Certification(m) => m,
        }
    }
}

impl From<qaoa_lab::Error> for Failure {
    fn from(e: qaoa_lab::Error) -> Self {
        use qaoa_lab::Error as E;
        let msg = e.to_string();
        match e {
            E::Infeasible(_)
            | E::TooManyQubits { .. }
            | E::TooLargeForBruteForce { .. }
            | E::DegenerateExtremes(_)
            | E::UnsupportedClass(_)
            | E::NotRepresentable
            | E::EmptyEdgeSet => Failure::Infeasible(msg),
            E::InvariantViolation(_) | E::ChainMismatch { .. } => Failure::Certification(msg),
            _ => Failure::Usage(msg),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<parse::GraphError> for Failure {
    fn from(e: parse::GraphError) -> Self {
        match e {
            parse::GraphError::Usage(m) => Failure::Usage(m),
            parse::GraphError::Library(e) => e.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn load_graph(args: &GraphArgs) -> Result<IsingInstance, Failure> {
    let g = parse::graph(&args.graph)?;
    Ok(match &args.fields {
        Some(h) => g.with_fields(h.clone())?,
        None => g,
    })
}

fn optimizer(opt: &OptArgs, exec: Execution) -> OptimizerConfig {
    OptimizerConfig {
        method: match opt.method {
            MethodArg::Gradient => Method::GradientAscent,
            MethodArg::Coordinate => Method::CoordinateSearch,
        },
        max_steps: opt.max_steps,
        random_starts: opt.random_starts,
        seed: opt.opt_seed,
        execution: exec,
        ..OptimizerConfig::default()
    }
}

/// Quotes a CSV field when it contains a delimiter or a quote.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn joined(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(";")
}

fn json_line(out: &mut impl Write, value: &serde_json::Value) -> io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("JSON values serialize"))
}

fn simulate(graph: &GraphArgs, params: &ParameterSet, format: Format, exec: Execution) -> Outcome {
    let g = load_graph(graph)?;
    let sim = QaoaSimulator::with_options(&g, qaoa_lab::simulator::DEFAULT_QUBIT_CAP, exec)?;
    let ext = brute_force_extremes(&g)?;
    let value = sim.expectation(params);
    let ratio = approximation_ratio(value, &ext)?;
    let guess = random_guess_reference(ratio, &ext)?;
    let class = classify_symmetry(&g).kind;
    let mut out = io::stdout().lock();
    match format {
        Format::Csv => {
            writeln!(out, "graph,n,class,p,expectation,c_max,c_min,ratio,random_guess_ref")?;
            writeln!(
                out,
                "{},{},{class},{},{value},{},{},{ratio},{guess}",
                csv_field(&g.name()),
                g.n(),
                params.p(),
                ext.c_max,
                ext.c_min
            )?;
        }
        Format::Json => json_line(
            &mut out,
            &json!({
                "graph": g.name(), "n": g.n(), "class": class, "params": params,
                "expectation": value, "c_max": ext.c_max, "c_min": ext.c_min,
                "ratio": ratio, "random_guess_ref": guess,
            }),
        )?,
    }
    Ok(())
}

fn optimize(graph: &GraphArgs, p: usize, start: Option<&ParameterSet>, opt: &OptArgs, format: Format, exec: Execution) -> Outcome {
    let g = load_graph(graph)?;
    let cfg = optimizer(opt, exec);
    let warm: Vec<ParameterSet> = start.into_iter().cloned().collect();
    let best = receiver_optimum(&g, p, &cfg, &warm)?;
    let ext = brute_force_extremes(&g)?;
    let ratio = approximation_ratio(best.value, &ext)?;
    let guess = random_guess_reference(ratio, &ext)?;
    let class = classify_symmetry(&g).kind;
    let canonical = if class.has_shift_symmetry() {
        canonicalize_to_u(&best.params, class).ok()
    } else {
        None
    };
    let (canon_params, canon_domain) = match &canonical {
        Some(c) => (c.params.clone(), c.domain.to_string()),
        None => (best.params.clone(), domain_tag(&best.params).to_string()),
    };
    let mut out = io::stdout().lock();
    match format {
        Format::Csv => {
            writeln!(out, "graph,n,class,p,value,ratio,random_guess_ref,converged,params,canonical_domain,canonical_params")?;
            writeln!(
                out,
                "{},{},{class},{p},{},{ratio},{guess},{},{},{canon_domain},{}",
                csv_field(&g.name()),
                g.n(),
                best.value,
                best.converged,
                joined(&best.params.to_interleaved()),
                joined(&canon_params.to_interleaved()),
            )?;
        }
        Format::Json => json_line(
            &mut out,
            &json!({
                "graph": g.name(), "n": g.n(), "class": class, "p": p,
                "value": best.value, "ratio": ratio, "random_guess_ref": guess,
                "converged": best.converged, "iterations": best.iterations,
                "params": best.params, "canonical_domain": canon_domain, "canonical_params": canon_params,
            }),
        )?,
    }
    Ok(())
}

fn symmetry_check(graph: &GraphArgs, p: usize, trials: usize, tol: f64, seed: u64, exec: Execution) -> Outcome {
    if p == 0 || trials == 0 {
        return Err(Failure::Usage("--p and --trials must be at least 1".into()));
    }
    let g = load_graph(graph)?;
    let class = classify_symmetry(&g).kind;
    let sim = QaoaSimulator::with_options(&g, qaoa_lab::simulator::DEFAULT_QUBIT_CAP, exec)?;
    let transforms = transforms_for(class, p, g.is_maxcut());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut checks, mut worst_cost, mut worst_dist) = (0usize, 0.0f64, 0.0f64);
    let mut violations: Vec<String> = Vec::new();
    for _ in 0..trials {
        let g: Vec<f64> = (0..p).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
        let b: Vec<f64> = (0..p).map(|_| rng.random_range(-std::f64::consts::FRAC_PI_4..std::f64::consts::FRAC_PI_4)).collect();
        let x = ParameterSet::new(g, b)?;
        for &t in &transforms {
            let r = verify_symmetry_with(&sim, &x, t, tol)?;
            checks += 1;
            worst_cost = worst_cost.max(r.cost_gap);
            worst_dist = worst_dist.max(r.distribution_gap.unwrap_or(0.0));
            if !r.passed && violations.len() < 10 {
                violations.push(format!("{t} at {:?}: cost gap {:e}", x.to_interleaved(), r.cost_gap));
            }
        }
    }
    let names: Vec<String> = transforms.iter().map(|t| t.to_string()).collect();
    println!("instance {} ({} vertices, class {class})", g.name(), g.n());
    println!("transforms: {}", names.join(" "));
    println!("checks {checks}, max cost gap {worst_cost:e}, max distribution gap {worst_dist:e}");
    if violations.is_empty() {
        println!("{class} certified at {tol:e}");
        Ok(())
    } else {
        for v in &violations {
            println!("violation: {v}");
        }
        Err(Failure::Certification(format!("{class} symmetry violated at {tol:e}")))
    }
}

fn pi_units(x: f64) -> f64 {
    (x / std::f64::consts::PI * 1e12).round() / 1e12
}

fn orbit(params: Option<&ParameterSet>, fixture: Option<&str>, class: SymmetryKind, radians: bool) -> Outcome {
    let base = match (params, fixture) {
        (Some(x), _) => x.clone(),
        (None, Some(name)) => fixtures::by_name(name)
            .ok_or_else(|| Failure::Usage(format!("unknown fixture {name:?}; known: {}", fixtures::NAMES.join(", "))))?
            .swap_remove(0),
        (None, None) => return Err(Failure::Usage("--params or --fixture is required".into())),
    };
    let orbit = enumerate_orbit(&base, class)?;
    let p = base.p();
    let fmt = |x: &ParameterSet| -> String {
        x.to_interleaved()
            .iter()
            .map(|&v| if radians { v.to_string() } else { pi_units(v).to_string() })
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut out = io::stdout().lock();
    let unit = if radians { "" } else { "_pi" };
    let cols: Vec<String> = (1..=p).map(|i| format!("gamma_{i}{unit},beta_{i}{unit}")).collect();
    writeln!(out, "member,domain,{}", cols.join(","))?;
    for (i, m) in orbit.members.iter().enumerate() {
        writeln!(out, "{},{},{}", i + 1, domain_tag(m), fmt(m))?;
    }
    match canonicalize_to_u(&base, class) {
        Ok(c) => writeln!(out, "canonical,{},{}", c.domain, fmt(&c.params))?,
        Err(e) => eprintln!("no canonical member: {e}"),
    }
    if orbit.degenerate {
        eprintln!("orbit has {} distinct members of {}", orbit.members.len(), orbit.expected_size);
    }
    Ok(())
}

fn open_output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn transfer_scan(args: &ScanArgs, exec: Execution) -> Outcome {
    let model = match args.model {
        ModelArg::Regular => ReceiverModel::Regular,
        ModelArg::Er => ReceiverModel::ErdosRenyi,
        ModelArg::Ba => ReceiverModel::BarabasiAlbert,
        ModelArg::Ws => ReceiverModel::WattsStrogatz {
            rewire: args
                .rewire
                .ok_or_else(|| Failure::Usage("--model ws needs --rewire".into()))?,
        },
    };
    let plan = ScanPlan {
        model,
        n: args.n,
        degrees: args.degrees.clone(),
        weights: args.weights.clone(),
        instances: args.instances,
        seed: args.seed,
        donor_degrees: args.donor_degrees.clone(),
        donors: args.donors.clone(),
        p: args.p,
        optimizer: optimizer(&args.opt, Execution::Sequential),
        execution: exec,
    };
    let result = scan_degrees(&plan)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    if result.rows.is_empty() {
        return Err(Failure::Infeasible("no feasible scan point".into()));
    }
    let mut out = open_output(args.out.as_ref())?;
    match args.format {
        Format::Csv => write_csv(&result.rows, &mut out)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &result).map_err(|e| Failure::Usage(e.to_string()))?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn analytic(d_min: usize, d_max: usize, d_primes: &[usize], k: f64, format: Format) -> Outcome {
    if d_primes.is_empty() || d_min > d_max {
        return Err(Failure::Usage("need --d-prime values and --d-min <= --d-max".into()));
    }
    let mut rows = Vec::new();
    for &dp in d_primes {
        for d in d_min.max(2)..=d_max {
            let delta = transfer_error_closed_form(d, dp, k)?;
            rows.push((d, dp, delta, random_guess_closed_form(d, k)));
        }
    }
    let mut out = io::stdout().lock();
    match format {
        Format::Csv => {
            writeln!(out, "d,d_prime,k,delta,random_guess_ref")?;
            for (d, dp, delta, guess) in rows {
                writeln!(out, "{d},{dp},{k},{delta},{guess}")?;
            }
        }
        Format::Json => {
            let items: Vec<_> = rows
                .into_iter()
                .map(|(d, dp, delta, guess)| json!({"d": d, "d_prime": dp, "k": k, "delta": delta, "random_guess_ref": guess}))
                .collect();
            json_line(&mut out, &serde_json::Value::Array(items))?;
        }
    }
    Ok(())
}

fn rqaoa(graph: &GraphArgs, p: usize, stop_at: usize, log: Option<&PathBuf>, opt: &OptArgs, format: Format, exec: Execution) -> Outcome {
    let g = load_graph(graph)?;
    let cfg = optimizer(opt, exec);
    let res = rqaoa_run(&g, p, &cfg, stop_at)?;
    let ext = brute_force_extremes(&g)?;
    if let Some(path) = log {
        let mut f = BufWriter::new(File::create(path)?);
        res.write_log_jsonl(&mut f)?;
        f.flush()?;
    }
    let bits: String = res.assignment.iter().map(|&x| if x == 1 { '0' } else { '1' }).collect();
    let classes: Vec<String> = res.classes.iter().map(|c| c.to_string()).collect();
    let ratio = approximation_ratio(res.cost, &ext)?;
    let mut out = io::stdout().lock();
    match format {
        Format::Csv => {
            writeln!(out, "graph,n,p,cost,c_max,ratio,assignment,index,steps,classes")?;
            writeln!(
                out,
                "{},{},{p},{},{},{ratio},{bits},{},{},{}",
                csv_field(&g.name()),
                g.n(),
                res.cost,
                ext.c_max,
                index_from_spins(&res.assignment),
                res.steps.len(),
                classes.join(";")
            )?;
        }
        Format::Json => json_line(
            &mut out,
            &json!({
                "graph": g.name(), "n": g.n(), "p": p, "cost": res.cost, "c_max": ext.c_max,
                "ratio": ratio, "assignment": res.assignment, "index": index_from_spins(&res.assignment),
                "classes": res.classes, "log": res.log,
            }),
        )?,
    }
    Ok(())
}

fn configure_threads(flag: Option<usize>) -> Result<(), Failure> {
    let threads = match flag {
        Some(t) => Some(t),
        None => match std::env::var("QAOA_LAB_THREADS") {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| Failure::Usage(format!("QAOA_LAB_THREADS={v:?} is not a thread count")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(t) = threads {
        if t == 0 {
            return Err(Failure::Usage("thread count must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    configure_threads(cli.threads)?;
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Simulate { graph, params, format } => simulate(graph, params, *format, exec),
        Command::Optimize {
            graph,
            p,
            start,
            opt,
            format,
        } => optimize(graph, *p, start.as_ref(), opt, *format, exec),
        Command::SymmetryCheck {
            graph,
            p,
            trials,
            tol,
            seed,
        } => symmetry_check(graph, *p, *trials, *tol, *seed, exec),
        Command::Orbit {
            params,
            fixture,
            class,
            radians,
        } => orbit(params.as_ref(), fixture.as_deref(), *class, *radians),
        Command::TransferScan(args) => transfer_scan(args, exec),
        Command::Analytic {
            d_min,
            d_max,
            d_prime,
            k,
            format,
        } => analytic(*d_min, *d_max, d_prime, *k, *format),
        Command::Rqaoa {
            graph,
            p,
            stop_at,
            log,
            opt,
            format,
        } => rqaoa(graph, *p, *stop_at, log.as_ref(), opt, *format, exec),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
