//! `kzp`: runs the verification suites and writes a JSON report.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kzp_core::curvature::{block_dims, curvature_suite, kernels_suite, ks_suite, oracle_suite, orthogonality_suite, BlockDims};
use kzp_core::phyper::{canonical_tuples, CheckMode, Certify, Family, FamilyBatch, Master};
use kzp_core::report::{Check, Status, Tally};
use kzp_core::satake::{build_t, z_ring};
use kzp_core::suites::{guard, relations_suite, satake_suite, solutions_suite};
use kzp_core::{seeded_rng, KzpError, PrimeField, Rationals, SeededRng};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "kzp", version, about = "KZ systems at κ = ±2 in characteristic p: solutions, Satake maps and p-curvature audits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Vanishing, relations and spans of the solution families; `--dump-poly` exports them
    Solutions,
    /// Every family solves its KZ system, entries ≤ g+2
    VerifyKz,
    /// T(z), T̄(z), T̃(z): p-map, proportionality, primitive kernels; `--dump-poly` exports T(z)
    Satake,
    /// Shapovalov orthogonality of N^ℓ and N̄^m
    Ortho,
    /// p-curvature: closed form, good basis, kernels on V and ∧²V
    Curvature,
    /// Kernel audits on ∧³V and the V_{1,3} measurement
    Kernels,
    /// Kodaira–Spencer identification and ∧³W kernels
    Ks,
    /// Every suite above
    All,
}

#[derive(Args, Debug)]
struct Opts {
    /// genus; n = 2g+1 points
    #[arg(long, global = true, default_value_t = 2)]
    g: usize,
    /// odd prime, or a comma-separated list swept independently
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [7u64])]
    p: Vec<u64>,
    /// exterior degree (default depends on the command)
    #[arg(long, global = true)]
    r: Option<usize>,
    /// restrict to the families at κ = 2 or κ = −2
    #[arg(long, global = true, allow_negative_numbers = true)]
    kappa: Option<i64>,
    /// auto, symbolic, point or probabilistic
    #[arg(long, global = true, default_value = "auto")]
    mode: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// evaluation points for the pointwise audits
    #[arg(long, global = true, default_value_t = 5)]
    points: usize,
    /// write the JSON report here
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// write polynomials in text form here
    #[arg(long, global = true)]
    dump_poly: Option<PathBuf>,
}

struct Config {
    command: Command,
    g: usize,
    primes: Vec<PrimeField>,
    r: Option<usize>,
    kappa: Option<i64>,
    cert: Certify,
    seed: u64,
    points: usize,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<KzpError> for Failure {
    fn from(e: KzpError) -> Self {
        match e {
            KzpError::InvalidParameters(_) | KzpError::NotOddPrime(_) | KzpError::ModulusTooLarge(_) | KzpError::Parse(_) => Failure::Usage(e.to_string()),
            e => Failure::Runtime(e.to_string()),
        }
    }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Solutions => "solutions",
        Command::VerifyKz => "verify-kz",
        Command::Satake => "satake",
        Command::Ortho => "ortho",
        Command::Curvature => "curvature",
        Command::Kernels => "kernels",
        Command::Ks => "ks",
        Command::All => "all",
    }
}

fn validate(cli: &Cli) -> Result<Config, Failure> {
    let o = &cli.opts;
    if !(1..=6).contains(&o.g) {
        return Err(Failure::Usage(format!("--g must be in 1..=6, got {}", o.g)));
    }
    if let Some(r) = o.r {
        if r == 0 || r > o.g {
            return Err(Failure::Usage(format!("--r must satisfy 1 ≤ r ≤ g, got r={r}, g={}", o.g)));
        }
    }
    if let Some(k) = o.kappa {
        if k != 2 && k != -2 {
            return Err(Failure::Usage(format!("--kappa must be 2 or -2, got {k}")));
        }
    }
    if o.points == 0 {
        return Err(Failure::Usage("--points must be positive".into()));
    }
    let mode = CheckMode::parse(&o.mode)?;
    let primes = o.p.iter().map(|&p| PrimeField::new(p)).collect::<Result<Vec<_>, _>>()?;
    Ok(Config {
        command: cli.command,
        g: o.g,
        primes,
        r: o.r,
        kappa: o.kappa,
        cert: Certify { mode, ..Certify::default() },
        seed: o.seed,
        points: o.points,
    })
}

struct Run {
    checks: Vec<Check>,
    blocks: Vec<serde_json::Value>,
    dump: String,
}

fn push_blocks(run: &mut Run, p: PrimeField, r: usize, res: kzp_core::Result<Vec<BlockDims>>) {
    match res {
        Ok(b) => run.blocks.push(json!({ "p": p.p(), "r": r, "blocks": b })),
        Err(e) => run.blocks.push(json!({ "p": p.p(), "r": r, "error": e.to_string() })),
    }
}

fn dump_solutions(cfg: &Config, p: PrimeField, out: &mut String) -> kzp_core::Result<()> {
    let g = cfg.g;
    let rs: Vec<usize> = cfg.r.map(|r| vec![r]).unwrap_or_else(|| vec![1]);
    for family in Family::ALL.into_iter().filter(|f| cfg.kappa.is_none_or(|k| k == f.kappa())) {
        for &r in &rs {
            let tuples = canonical_tuples(family, r, g as u32 + 2);
            let batch = match Master::new(family, g, p, r).and_then(|m| FamilyBatch::new(m, &tuples)) {
                Ok(b) => b,
                Err(e) => {
                    let _ = writeln!(out, "# family={family} g={g} p={} r={r} kappa={}: {e}", p.p(), family.kappa());
                    continue;
                }
            };
            for (k, ell) in tuples.iter().enumerate() {
                let _ = writeln!(out, "# family={family} g={g} p={} r={r} ell={ell:?} kappa={}", p.p(), family.kappa());
                let cost = batch.symbolic_cost(k);
                if !cfg.cert.symbolic_ok(cost) {
                    let _ = writeln!(out, "# skipped: estimated cost {cost:.3e} over budget");
                    continue;
                }
                let one = FamilyBatch { master: batch.master, plans: vec![batch.plans[k].clone()] };
                let v = one.build_symbolic().pop().expect("one tuple");
                for (i, c) in v.coords.iter().enumerate() {
                    let _ = writeln!(out, "[{i}] {}", c.to_text());
                }
            }
        }
    }
    Ok(())
}

fn dump_t(g: usize, r: usize, out: &mut String) -> kzp_core::Result<()> {
    let (pr, z) = z_ring(Rationals, 2 * g + 1);
    let t = build_t(&pr, &z, g, r)?;
    let _ = writeln!(out, "# T(z) over Q, g={g} r={r}, rows N_I, columns M_A, sorted {r}-subsets");
    for i in 0..t.rows() {
        for j in 0..t.cols() {
            let e = t.get(i, j);
            if !e.is_zero() {
                let _ = writeln!(out, "[{i},{j}] {}", e.to_text());
            }
        }
    }
    Ok(())
}

fn run_one(cfg: &Config, cmd: Command, p: PrimeField, rng: &mut SeededRng, run: &mut Run) -> Result<(), Failure> {
    let g = cfg.g;
    let c = &mut run.checks;
    let tag = |what: &str| format!("{what} (g={g}, p={})", p.p());
    match cmd {
        Command::Solutions => {
            c.extend(guard("relations", &tag("relations"), relations_suite(g, p, &cfg.cert, rng))?);
        }
        Command::VerifyKz => {
            let rs: Vec<usize> = cfg.r.map(|r| vec![r]).unwrap_or_else(|| (1..=g).collect());
            c.extend(guard("solutions", &tag("KZ solutions"), solutions_suite(g, p, &rs, cfg.kappa, g as u32 + 2, &cfg.cert, rng))?);
        }
        Command::Satake => {
            let r = cfg.r.unwrap_or(g.min(2));
            c.extend(satake_suite(g, p, r, &cfg.cert, cfg.points, rng)?);
        }
        Command::Ortho => {
            let rs: Vec<usize> = cfg.r.map(|r| vec![r]).unwrap_or_else(|| (1..=g.min(2)).collect());
            for r in rs {
                c.extend(guard("orthogonality", &tag("orthogonality"), orthogonality_suite(g, p, r, &cfg.cert, rng))?);
            }
        }
        Command::Curvature => {
            if g == 2 && p.p() <= 11 {
                c.extend(guard("p-curvature oracle", &tag("closed formula vs ∇^p"), oracle_suite(g, p, cfg.points.min(3), rng))?);
            }
            c.extend(guard("p-curvature", &tag("p-curvature"), curvature_suite(g, p, cfg.points, rng))?);
            let r = cfg.r.unwrap_or(g.min(2));
            push_blocks(run, p, r, block_dims(g, p, r, rng));
        }
        Command::Kernels => {
            c.extend(guard("kernel audit", &tag("kernel audit"), kernels_suite(g, p, cfg.points, rng))?);
            let r = cfg.r.unwrap_or(g.min(3));
            push_blocks(run, p, r, block_dims(g, p, r, rng));
        }
        Command::Ks => {
            c.extend(guard("kodaira-spencer", &tag("Kodaira–Spencer"), ks_suite(g, p, g.max(2), cfg.points, rng))?);
        }
        Command::All => {
            for sub in [
                Command::VerifyKz,
                Command::Solutions,
                Command::Satake,
                Command::Ortho,
                Command::Curvature,
                Command::Kernels,
                Command::Ks,
            ] {
                run_one(cfg, sub, p, rng, run)?;
            }
        }
    }
    Ok(())
}

fn execute(cfg: &Config) -> Result<Run, Failure> {
    let mut rng = seeded_rng(cfg.seed);
    let mut run = Run { checks: Vec::new(), blocks: Vec::new(), dump: String::new() };
    for &p in &cfg.primes {
        run_one(cfg, cfg.command, p, &mut rng, &mut run)?;
        match cfg.command {
            Command::Solutions => dump_solutions(cfg, p, &mut run.dump)?,
            Command::Satake if p == cfg.primes[0] => dump_t(cfg.g, cfg.r.unwrap_or(cfg.g.min(2)), &mut run.dump)?,
            _ => {}
        }
    }
    Ok(run)
}

fn report(cfg: &Config, run: &Run) -> serde_json::Value {
    let tally = Tally::of(&run.checks);
    let mut v = json!({
        "command": command_name(cfg.command),
        "config": {
            "g": cfg.g,
            "p": cfg.primes.iter().map(|p| p.p()).collect::<Vec<_>>(),
            "r": cfg.r,
            "kappa": cfg.kappa,
            "mode": cfg.cert.mode,
            "seed": cfg.seed,
            "points": cfg.points,
        },
        "checks": run.checks,
        "tally": tally,
        "status": if tally.fail == 0 { "pass" } else { "fail" },
    });
    if !run.blocks.is_empty() {
        v["per_block_dims"] = json!(run.blocks);
    }
    v
}

fn label(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Exceptional => "exceptional",
        Status::Measured => "measured",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cfg = match validate(&cli) {
        Ok(c) => c,
        Err(Failure::Usage(m)) | Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
    };
    let run = match execute(&cfg) {
        Ok(r) => r,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(2);
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            return ExitCode::from(1);
        }
    };
    for c in &run.checks {
        println!("{:>11}  [{}] {}: {}", label(c.status), c.group, c.name, c.detail);
    }
    for b in &run.blocks {
        println!("{:>11}  {b}", "blocks");
    }
    let rep = report(&cfg, &run);
    let t = Tally::of(&run.checks);
    println!("{} pass, {} fail, {} exceptional, {} measured", t.pass, t.fail, t.exceptional, t.measured);
    if let Some(path) = &cli.opts.json {
        let text = serde_json::to_string_pretty(&rep).expect("report serializes") + "\n";
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if let Some(path) = &cli.opts.dump_poly {
        if let Err(e) = std::fs::write(path, &run.dump) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if t.fail == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
