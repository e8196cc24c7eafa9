use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use sphkernel::expr::parse_type;
use sphkernel::hecke::{adjoint_apply, build_delta, DeltaName, FlatHecke, OpOptions};
use sphkernel::oracle::count::{count_d, count_phi, hecke_matrix_row, set_cap};
use sphkernel::oracle::{matrix, HermitianLattice, LocalRing};
use sphkernel::phi::{phi_natural_value, phi_span_solve, PhiTable};
use sphkernel::typ::ZeroCount;
use sphkernel::verify::{run_all, run_suite, Params, Suite};
use sphkernel::{parse_expr, render, straighten, Error, StrKind};

/// Exact spherical-function calculus on unitary lattices.
#[derive(Parser)]
#[command(name = "sphkernel", version)]
struct Cli {
    /// key=value file; keys mirror the long flags (cap, seed, rank-max, p, samples)
    #[arg(long, global = true, env = "SPHKERNEL_CONFIG")]
    config: Option<PathBuf>,
    /// Maximum number of sublattices an oracle census may enumerate.
    #[arg(long, global = true, env = "SPHKERNEL_CAP")]
    cap: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a named verification suite, or `all`.
    Verify(VerifyArgs),
    /// Normal form of an expression.
    Straighten {
        #[arg(long, default_value = "natural")]
        kind: String,
        expr: String,
    },
    /// Translation operators and their adjoint action.
    Op {
        #[command(subcommand)]
        cmd: OpCmd,
    },
    /// Values of the distinguished functions.
    Phi {
        #[command(subcommand)]
        cmd: PhiCmd,
    },
    /// Brute-force lattice counts at a numeric prime.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
    /// Intersection identity on the building.
    Rz {
        #[command(subcommand)]
        cmd: RzCmd,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    rank_max: Option<usize>,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<i64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    entry_max: Option<i32>,
    /// Write the JSON report here (`-` for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OpCmd {
    /// str(Δ x) for an operator such as gl:1, phi, flat:2, half_flat:1, pm:+.
    Apply {
        op: String,
        expr: String,
        #[arg(long, default_value = "natural")]
        kind: String,
        #[arg(long)]
        truncation: Option<i32>,
    },
    /// (S f)(g) = <f, str(Δ δ_g)> on the derived window.
    Adjoint {
        op: String,
        expr: String,
        #[arg(long, default_value = "natural")]
        kind: String,
    },
}

#[derive(Subcommand)]
enum PhiCmd {
    /// φ_e(f) as a polynomial in q.
    Value { e: String, f: String },
    /// Coordinates of a flat expression in the φ basis.
    Solve {
        expr: String,
        #[arg(long)]
        zeros_at_most: Option<usize>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Type of O^r under the integer Gram matrix given as rows "a,b;c,d".
    Typ {
        gram: String,
        #[arg(long, default_value_t = 3)]
        p: i64,
    },
    /// d_e(f) and the weighted count φ_e(f).
    Count {
        e: String,
        f: String,
        #[arg(long, default_value_t = 3)]
        p: i64,
    },
    /// Row of the GL Hecke operator T_i at type b.
    Hecke {
        i: usize,
        b: String,
        #[arg(long, default_value_t = 3)]
        p: i64,
    },
}

#[derive(Subcommand)]
enum RzCmd {
    Verify {
        #[arg(long)]
        rank_max: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<i64>>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

type CliResult = Result<bool, String>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_config(path: &PathBuf) -> Result<HashMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut out = HashMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("{}:{}: expected key=value", path.display(), n + 1))?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

fn from_config<T: std::str::FromStr>(cfg: &HashMap<String, String>, key: &str) -> Result<Option<T>, String> {
    cfg.get(key)
        .map(|v| v.parse::<T>().map_err(|_| format!("bad value for {key}: {v:?}")))
        .transpose()
}

fn err(e: Error) -> String {
    e.to_string()
}

fn run(cli: Cli) -> CliResult {
    let cfg = match &cli.config {
        Some(p) => read_config(p)?,
        None => HashMap::new(),
    };
    if let Some(c) = cli.cap.or(from_config(&cfg, "cap")?) {
        set_cap(c);
    }
    match cli.cmd {
        Cmd::Verify(a) => {
            let params = params(&cfg, a.rank_max, a.p, a.seed, a.samples, a.entry_max)?;
            verify(&a.suite, &params, a.json.as_ref())
        }
        Cmd::Rz { cmd: RzCmd::Verify { rank_max, p, samples, seed, json } } => {
            let params = params(&cfg, rank_max, p, seed, samples, None)?;
            verify("rznabla", &params, json.as_ref())
        }
        Cmd::Straighten { kind, expr } => {
            let kind: StrKind = kind.parse().map_err(err)?;
            let x = parse_expr(&expr).map_err(err)?;
            println!("{}", render(&straighten(&x, kind)));
            Ok(true)
        }
        Cmd::Op { cmd } => op(cmd),
        Cmd::Phi { cmd } => phi(cmd),
        Cmd::Oracle { cmd } => oracle(cmd),
    }
}

fn params(
    cfg: &HashMap<String, String>,
    rank_max: Option<usize>,
    p: Option<Vec<i64>>,
    seed: Option<u64>,
    samples: Option<usize>,
    entry_max: Option<i32>,
) -> Result<Params, String> {
    let primes = match p {
        Some(p) => Some(p),
        None => cfg
            .get("p")
            .map(|v| v.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad prime {x:?}"))).collect())
            .transpose()?,
    };
    if let Some(bad) = primes.iter().flatten().find(|&&p| p < 3 || (2..p).any(|d| d * d <= p && p % d == 0)) {
        return Err(format!("{bad} is not an odd prime"));
    }
    Ok(Params {
        rank_max: rank_max.or(from_config(cfg, "rank-max")?),
        primes,
        seed: seed.or(from_config(cfg, "seed")?).unwrap_or(1),
        samples: samples.or(from_config(cfg, "samples")?),
        entry_max: entry_max.or(from_config(cfg, "entry-max")?),
    })
}

fn verify(suite: &str, params: &Params, json_out: Option<&PathBuf>) -> CliResult {
    let start = Instant::now();
    let (value, passed) = if suite == "all" {
        let agg = run_all(params);
        for s in &agg.suites {
            println!("{:<13} {} ({} cases, {} failures)", s.suite, if s.passed() { "PASS" } else { "FAIL" }, s.cases, s.failures.len());
        }
        (serde_json::to_value(&agg), agg.passed)
    } else {
        let s: Suite = suite.parse().map_err(|_| {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            format!("unknown suite {suite:?}; expected all or one of {}", names.join(", "))
        })?;
        let rep = run_suite(s, params);
        println!("{:<13} {} ({} cases, {} failures)", rep.suite, if rep.passed() { "PASS" } else { "FAIL" }, rep.cases, rep.failures.len());
        println!("  {}", rep.statement);
        for f in rep.failures.iter().take(10) {
            println!("  {}: expected {} got {} [{}]", f.case, f.expected, f.actual, f.source);
        }
        (serde_json::to_value(&rep), rep.passed())
    };
    eprintln!("wall time {:.2}s", start.elapsed().as_secs_f64());
    let value = value.map_err(|e| e.to_string())?;
    if let Some(path) = json_out {
        let text = serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?;
        if path.as_os_str() == "-" {
            println!("{text}");
        } else {
            std::fs::write(path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
        }
    }
    Ok(passed)
}

fn op(cmd: OpCmd) -> CliResult {
    match cmd {
        OpCmd::Apply { op, expr, kind, truncation } => {
            let name: DeltaName = op.parse().map_err(err)?;
            let kind: StrKind = kind.parse().map_err(err)?;
            let x = parse_expr(&expr).map_err(err)?;
            let d = build_delta(&name, x.rank(), truncation, OpOptions::default()).map_err(err)?;
            println!("{}", render(&straighten(&d.apply(&x).map_err(err)?, kind)));
        }
        OpCmd::Adjoint { op, expr, kind } => {
            let name: DeltaName = op.parse().map_err(err)?;
            let kind: StrKind = kind.parse().map_err(err)?;
            let x = parse_expr(&expr).map_err(err)?;
            let d = build_delta(&name, x.rank(), None, FlatHecke::default().opts).map_err(err)?;
            println!("{}", render(&adjoint_apply(&d, kind, &x, None).map_err(err)?));
        }
    }
    Ok(true)
}

fn phi(cmd: PhiCmd) -> CliResult {
    match cmd {
        PhiCmd::Value { e, f } => {
            let e = parse_type(&e).map_err(err)?;
            let f = parse_type(&f).map_err(err)?;
            println!("{}", phi_natural_value(&e, &f).map_err(err)?);
        }
        PhiCmd::Solve { expr, zeros_at_most } => {
            let x = parse_expr(&expr).map_err(err)?;
            let top = x.support().map(|e| e.sum()).max().unwrap_or(0);
            let table = PhiTable::build(x.rank(), top);
            let constraint = zeros_at_most.map_or(ZeroCount::Any, ZeroCount::AtMost);
            let coords = phi_span_solve(&x, constraint, &table).map_err(err)?;
            let out: Vec<_> = coords.iter().map(|(e, c)| json!({ "phi": e.0, "coeff": c.to_string() })).collect();
            println!("{}", serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?);
        }
    }
    Ok(true)
}

fn oracle(cmd: OracleCmd) -> CliResult {
    match cmd {
        OracleCmd::Typ { gram, p } => {
            let rows: Vec<Vec<i64>> = gram
                .split(';')
                .map(|r| r.split(',').map(|x| x.trim().parse::<i64>().map_err(|_| format!("bad entry {x:?}"))).collect())
                .collect::<Result<_, _>>()?;
            let ring = LocalRing::new(p, 24).map_err(err)?;
            let g: matrix::Mat = rows.iter().map(|r| r.iter().map(|&x| ring.int(x)).collect()).collect();
            let lat = HermitianLattice::standard(ring, g, 0).map_err(err)?;
            println!("{}", lat.typ().map_err(err)?);
        }
        OracleCmd::Count { e, f, p } => {
            let e = parse_type(&e).map_err(err)?;
            let f = parse_type(&f).map_err(err)?;
            let d = count_d(&e, &f, p).map_err(err)?;
            let w = count_phi(&e, &f, p).map_err(err)?;
            println!("{}", json!({ "d": d.to_string(), "phi": w.to_string() }));
        }
        OracleCmd::Hecke { i, b, p } => {
            let b = parse_type(&b).map_err(err)?;
            let row = hecke_matrix_row(i, &b, p).map_err(err)?;
            let out: Vec<_> = row.iter().map(|(a, n)| json!({ "type": a.0, "count": n.to_string() })).collect();
            println!("{}", serde_json::to_string(&out).map_err(|e| e.to_string())?);
        }
    }
    Ok(true)
}
