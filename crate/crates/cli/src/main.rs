use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use rayon::prelude::*;
use serde_json::json;

use khovanov::corpus;
use khovanov::homology::{homology, to_graded, HomologyTable};
use khovanov::oracle::{cube_homology, MAX_CROSSINGS};
use khovanov::planar::{order_crossings, parse_pd, Diagram, OrderStrategy};
use khovanov::ring::{Integers, PrimeField, Rationals, Ring};
use khovanov::scan::{divide_and_conquer, scan_with_progress, ScanOptions, ScanStats};
use khovanov::verify::{check_r1, check_r2, check_r3};
use khovanov::Error;

#[derive(Parser)]
#[command(name = "kh", version, about = "Khovanov homology of links by scanning tangle complexes")]
struct Cli {
    /// Worker threads for independent jobs; defaults to available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology by scanning the diagram one crossing at a time.
    Compute(ComputeArgs),
    /// Homology from the full cube of resolutions (small diagrams only).
    Oracle(OracleArgs),
    /// Reidemeister checks on tangle complexes.
    Verify(VerifyArgs),
    /// Sizes and timings for the given and greedy crossing orders.
    Bench(BenchArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// PD code inline: `PD[X[1,5,2,4],...]` or the JSON form.
    #[arg(long)]
    pd: Option<String>,
    /// File holding a PD code; `-` reads standard input.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Torus link `p,q`: closure of (σ₁⋯σ_{q−1})^p on q strands.
    #[arg(long)]
    torus: Option<String>,
    /// Closure of a braid word such as `1,-2,1,-2`.
    #[arg(long, allow_hyphen_values = true)]
    braid: Option<String>,
    /// Knot from the bundled table, e.g. `8_19`.
    #[arg(long)]
    knot: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingName {
    Z,
    Q,
    Fp,
}

#[derive(Args)]
struct RingArgs {
    #[arg(long, value_enum, default_value = "z")]
    ring: RingName,
    /// Characteristic for `--ring fp`.
    #[arg(long, default_value_t = 2)]
    p: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// Grid with rows r and columns j = q − 2r.
    Table,
    /// One line per group.
    List,
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Given,
    Greedy,
}

impl From<Order> for OrderStrategy {
    fn from(o: Order) -> Self {
        match o {
            Order::Given => OrderStrategy::Given,
            Order::Greedy => OrderStrategy::Greedy,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    ring: RingArgs,
    #[arg(long, value_enum, default_value = "greedy")]
    order: Order,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Same as `--format json`.
    #[arg(long)]
    json: bool,
    /// Write the simplified complex after every crossing into this directory.
    #[arg(long)]
    dump_stages: Option<PathBuf>,
    /// Print scan statistics to standard error.
    #[arg(long)]
    stats: bool,
    /// Check d∘d = 0, degrees and the Euler characteristic after every step.
    #[arg(long)]
    check_every_step: bool,
    /// Reject gluings that are not realizable in the plane.
    #[arg(long)]
    require_planar: bool,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 3600)]
    timeout: u64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    ring: RingArgs,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = MAX_CROSSINGS)]
    max_crossings: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Print a JSON report.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    ring: RingArgs,
    /// Also compute by halves: comma-separated crossing indices of the left half.
    #[arg(long)]
    split: Option<String>,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 3600)]
    timeout: u64,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } | Error::EdgeMultiplicity { .. } | Error::Orientation(_) | Error::InvalidInput(_) => 2,
            Error::TooLarge(_) | Error::Timeout(_) => 3,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: 2, message }
}

type CliResult<T> = Result<T, Failure>;

/// Runs `$body` with `$r` bound to the chosen ring.
macro_rules! with_ring {
    ($args:expr, |$r:ident| $body:expr) => {
        match $args.ring {
            RingName::Z => {
                let $r = Integers;
                $body
            }
            RingName::Q => {
                let $r = Rationals;
                $body
            }
            RingName::Fp => {
                let $r = PrimeField::new($args.p).ok_or_else(|| usage(format!("{} is not a prime", $args.p)))?;
                $body
            }
        }
    };
}

fn int_list(s: &str) -> CliResult<Vec<i64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| usage(format!("expected an integer, got {t:?}"))))
        .collect()
}

fn read_diagram(input: &Input) -> CliResult<Diagram> {
    if let Some(pd) = &input.pd {
        return Ok(parse_pd(pd)?);
    }
    if let Some(path) = &input.file {
        let text = if path == Path::new("-") {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
            s
        } else {
            fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
        };
        return Ok(parse_pd(&text)?);
    }
    if let Some(t) = &input.torus {
        let v = int_list(t)?;
        let [p, q] = v[..] else { return Err(usage("--torus takes p,q".into())) };
        if p < 0 || q < 1 {
            return Err(usage("--torus needs p ≥ 0 and q ≥ 1".into()));
        }
        return Ok(Diagram::torus(q as usize, p as usize)?);
    }
    if let Some(b) = &input.braid {
        let word: Vec<i32> = int_list(b)?.into_iter().map(|g| g as i32).collect();
        let strands = word.iter().map(|g| g.unsigned_abs() as usize).max().unwrap_or(0) + 1;
        return Ok(Diagram::from_braid(strands, &word)?);
    }
    if let Some(name) = &input.knot {
        return corpus::knot(name).map(|k| k.diagram).ok_or_else(|| usage(format!("no knot named {name} in the table")));
    }
    Err(usage("no input given".into()))
}

fn render(h: &HomologyTable, format: Format, json: bool) -> String {
    match if json { Format::Json } else { format } {
        Format::Table => h.to_grid(),
        Format::List => h.to_list(),
        Format::Tsv => h.to_tsv(),
        Format::Json => serde_json::to_string_pretty(&h.to_json()).expect("json") + "\n",
    }
}

fn print_stats(stats: &ScanStats, elapsed: Duration, objects: usize) {
    eprintln!("peak objects:  {}", stats.peak_objects);
    eprintln!("final objects: {objects}");
    eprintln!("max width:     {}", stats.max_width);
    eprintln!("deloops:       {}", stats.deloops);
    eprintln!("eliminations:  {}", stats.eliminations);
    eprintln!("object profile: {:?}", stats.object_profile);
    eprintln!("time:          {:.3}s", elapsed.as_secs_f64());
}

fn compute<R: Ring>(ring: &R, args: &ComputeArgs, d: &Diagram) -> CliResult<String> {
    let order = order_crossings(d.crossings(), args.order.into());
    let opts = ScanOptions {
        require_planar: args.require_planar,
        check_every_step: args.check_every_step,
        time_limit: Some(Duration::from_secs(args.timeout)),
    };
    if let Some(dir) = &args.dump_stages {
        fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
    }
    let start = Instant::now();
    let mut dump_error = None;
    let result = scan_with_progress(ring, d, &order, &opts, &mut |p, t| {
        info!("crossing {}/{}: {} objects", p.crossings_done, p.crossings_total, p.objects);
        if let Some(dir) = &args.dump_stages {
            let path = dir.join(format!("stage_{:03}.json", p.crossings_done));
            let body = json!({
                "crossings_done": p.crossings_done,
                "boundary": t.boundary,
                "complex": t.complex.to_json(),
            });
            if let Err(e) = fs::write(&path, serde_json::to_string_pretty(&body).expect("json")) {
                dump_error.get_or_insert(format!("{}: {e}", path.display()));
            }
        }
    })?;
    if let Some(e) = dump_error {
        return Err(Failure { code: 1, message: e });
    }
    let h = homology(&to_graded(&result.complex)?);
    if args.stats {
        print_stats(&result.stats, start.elapsed(), result.complex.object_count());
    }
    Ok(render(&h, args.format, args.json))
}

fn oracle<R: Ring>(ring: &R, args: &OracleArgs, d: &Diagram) -> CliResult<String> {
    if d.crossing_count() > args.max_crossings {
        return Err(Failure {
            code: 3,
            message: format!("{} crossings exceeds --max-crossings {}", d.crossing_count(), args.max_crossings),
        });
    }
    Ok(render(&cube_homology(ring, d)?, args.format, args.json))
}

fn verify(args: &VerifyArgs) -> CliResult<(String, bool)> {
    let checks: [fn() -> khovanov::Result<khovanov::verify::CheckReport>; 3] = [check_r1, check_r2, check_r3];
    let reports = checks.par_iter().map(|f| f()).collect::<Result<Vec<_>, _>>()?;
    let passed = reports.iter().all(|r| r.passed());
    let out = if args.json {
        let v = json!({ "passed": passed, "checks": reports });
        serde_json::to_string_pretty(&v).expect("json") + "\n"
    } else {
        reports.iter().map(|r| r.to_string()).collect()
    };
    Ok((out, passed))
}

fn bench<R: Ring>(ring: &R, args: &BenchArgs, d: &Diagram) -> CliResult<String> {
    let opts = ScanOptions { time_limit: Some(Duration::from_secs(args.timeout)), ..Default::default() };
    let runs = [Order::Given, Order::Greedy]
        .par_iter()
        .map(|&o| {
            let order = order_crossings(d.crossings(), o.into());
            let start = Instant::now();
            let r = scan_with_progress(ring, d, &order, &opts, &mut |_, _| {})?;
            Ok::<_, Error>((o, order.width_profile.clone(), r.stats, r.complex.object_count(), start.elapsed()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = d.crossing_count();
    let naive = if n < 64 { json!(1u64 << n) } else { json!(format!("2^{n}")) };
    let mut report = json!({ "crossings": n, "naive_cube_objects": naive });
    for (o, widths, stats, objects, elapsed) in &runs {
        let name = match o {
            Order::Given => "given",
            Order::Greedy => "greedy",
        };
        report[name] = json!({
            "peak_objects": stats.peak_objects,
            "final_objects": objects,
            "deloops": stats.deloops,
            "eliminations": stats.eliminations,
            "max_width": stats.max_width,
            "width_profile": widths,
            "object_profile": stats.object_profile,
            "seconds": elapsed.as_secs_f64(),
        });
    }
    if let Some(split) = &args.split {
        let left: Vec<usize> = int_list(split)?.into_iter().map(|i| i as usize).collect();
        let start = Instant::now();
        let (_, s) = divide_and_conquer(ring, d, &left, &opts)?;
        report["split"] = json!({
            "left": left,
            "left_objects": s.left_objects,
            "right_objects": s.right_objects,
            "tensor_objects": s.tensor_objects,
            "final_objects": s.final_objects,
            "seconds": start.elapsed().as_secs_f64(),
        });
    }
    if args.json {
        return Ok(serde_json::to_string_pretty(&report).expect("json") + "\n");
    }
    let mut s = format!("crossings: {n}, naive cube: {} objects\n", report["naive_cube_objects"]);
    for name in ["given", "greedy"] {
        let r = &report[name];
        s.push_str(&format!(
            "{name:>7}: peak {} objects, final {}, width {}, {} deloops, {} eliminations, {:.3}s\n",
            r["peak_objects"], r["final_objects"], r["max_width"], r["deloops"], r["eliminations"],
            r["seconds"].as_f64().unwrap_or(0.0)
        ));
    }
    if let Some(r) = report.get("split") {
        s.push_str(&format!(
            "  split: halves {} and {} objects, tensor {} objects, final {}, {:.3}s\n",
            r["left_objects"], r["right_objects"], r["tensor_objects"], r["final_objects"],
            r["seconds"].as_f64().unwrap_or(0.0)
        ));
    }
    Ok(s)
}

fn run(cli: &Cli) -> CliResult<bool> {
    match &cli.command {
        Command::Compute(args) => {
            let d = read_diagram(&args.input)?;
            print!("{}", with_ring!(args.ring, |r| compute(&r, args, &d)?));
        }
        Command::Oracle(args) => {
            let d = read_diagram(&args.input)?;
            print!("{}", with_ring!(args.ring, |r| oracle(&r, args, &d)?));
        }
        Command::Verify(args) => {
            let (out, passed) = verify(args)?;
            print!("{out}");
            return Ok(passed);
        }
        Command::Bench(args) => {
            let d = read_diagram(&args.input)?;
            print!("{}", with_ring!(args.ring, |r| bench(&r, args, &d)?));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("KH_LOG")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("kh: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("kh: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
