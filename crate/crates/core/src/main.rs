use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use normdesign::arith::is_representable;
use normdesign::design::{
    self, default_j_max, is_t_design, quadrature_average, strength_profile, DesignReport,
};
use normdesign::harmonic::{in_span, Part};
use normdesign::shells::ShellCache;
use normdesign::theta::{
    basis_theta_series, hecke_verify, rat_to_string, shell_sum, theta_series, HeckeIdentity,
    ThetaSeries,
};
use normdesign::{enumerate_shell, BivarPoly, Error, Ring, Shell};

const EXAMPLE_P: &str = "2*x^2+3462*x*y+1729*y^2";
const EXAMPLE_Q: &str = "2*x^6+6*x^5*y-15*x^4*y^2-40*x^3*y^3-15*x^2*y^4+6*x*y^5+2*y^6";
const EXAMPLE_Q_SUM: i64 = -4_818_834_696;
const DEFAULT_PAIRS: [(u64, u64); 6] = [(2, 3), (3, 5), (4, 7), (5, 11), (8, 9), (7, 13)];

#[derive(Parser)]
#[command(
    name = "normdesign",
    version,
    about = "Norm-form shells of class-number-one imaginary quadratic rings as ellipsoidal designs"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Shell cache file (JSON lines). Overrides NORMDESIGN_CACHE.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Worker threads for `sweep`.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum PartArg {
    Real,
    Imag,
}

#[derive(Subcommand)]
enum Command {
    /// List the points of norm r.
    Shell { d: i64, r: u64 },
    /// Classify the degrees j at which the shell of norm r is a design.
    Verify {
        d: i64,
        r: u64,
        /// Test for a t-design and scan up to t.
        #[arg(long, conflicts_with = "jmax")]
        t: Option<u32>,
        /// Scan bound (default min(2u_D + 1, 13)).
        #[arg(long)]
        jmax: Option<u32>,
    },
    /// Theta coefficients of a basis polynomial or of an arbitrary polynomial.
    Theta {
        d: i64,
        #[arg(long, required_unless_present = "poly", conflicts_with = "poly")]
        j: Option<u32>,
        #[arg(long)]
        poly: Option<String>,
        #[arg(long, value_enum, default_value_t = PartArg::Real)]
        part: PartArg,
        #[arg(long)]
        rmax: u64,
        /// Divide by the number of units.
        #[arg(long)]
        normalized: bool,
    },
    /// Check multiplicativity, the prime-power recursion and the congruence.
    Hecke {
        d: i64,
        /// Degree (default u_D).
        #[arg(long)]
        j: Option<u32>,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        alpha: u32,
        /// Coprime pair R1,R2 for the multiplicativity check (repeatable).
        #[arg(long = "pair", value_parser = parse_pair)]
        pairs: Vec<(u64, u64)>,
    },
    /// Weighted line-integral average of a polynomial over C_D(r).
    Quadrature {
        d: i64,
        r: u64,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 256)]
        nodes: usize,
    },
    /// Classify every nonempty shell r <= rmax for all nine rings.
    Sweep {
        #[arg(long)]
        rmax: u64,
        #[arg(long, default_value_t = 13)]
        jmax: u32,
    },
    /// Walk through the D = 3, r = 691 example.
    ReproduceExample,
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected R1,R2 but got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(a)?, parse(b)?))
}

enum CliError {
    Usage(String),
    Io(io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn ring(d: i64) -> CliResult<Ring> {
    Ok(Ring::new(d)?)
}

fn parse_poly(src: &str) -> CliResult<BivarPoly> {
    src.parse().map_err(|e| match e {
        Error::Parse { pos, msg } => CliError::Usage(format!(
            "cannot parse polynomial: {msg}\n  {src}\n  {:>w$}",
            "^",
            w = pos + 1
        )),
        other => other.into(),
    })
}

fn cache_path(flag: &Option<PathBuf>) -> Option<PathBuf> {
    if let Some(p) = flag {
        return Some(p.clone());
    }
    if let Some(p) = std::env::var_os("NORMDESIGN_CACHE") {
        return Some(PathBuf::from(p));
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("normdesign").join("shells.jsonl"))
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(&cli, &mut out);
    let emit = || -> io::Result<()> {
        match &cli.output {
            Some(path) => fs::write(path, &out),
            None => io::stdout().lock().write_all(out.as_bytes()),
        }
    };
    match result {
        Ok(passed) => {
            if let Err(e) = emit() {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Returns whether every verification passed.
fn run(cli: &Cli, out: &mut String) -> CliResult<bool> {
    match &cli.command {
        Command::Shell { d, r } => cmd_shell(cli, ring(*d)?, *r, out),
        Command::Verify { d, r, t, jmax } => cmd_verify(cli.format, ring(*d)?, *r, *t, *jmax, out),
        Command::Theta {
            d,
            j,
            poly,
            part,
            rmax,
            normalized,
        } => cmd_theta(
            cli.format,
            ring(*d)?,
            *j,
            poly.as_deref(),
            *part,
            *rmax,
            *normalized,
            out,
        ),
        Command::Hecke {
            d,
            j,
            p,
            alpha,
            pairs,
        } => {
            let g = ring(*d)?;
            let pairs = if pairs.is_empty() {
                DEFAULT_PAIRS.to_vec()
            } else {
                pairs.clone()
            };
            let report = hecke_verify(g, j.unwrap_or(g.unit_count()), *p, *alpha, &pairs)?;
            match cli.format {
                Format::Json => out.push_str(&to_json_text(&report.to_json())),
                Format::Csv => {
                    out.push_str("identity,inputs,left,right,pass\n");
                    for c in &report.checks {
                        let inputs: Vec<String> = c.inputs.iter().map(u64::to_string).collect();
                        out.push_str(&format!(
                            "{:?},{},{},{},{}\n",
                            c.identity,
                            inputs.join(" "),
                            rat_to_string(&c.left),
                            rat_to_string(&c.right),
                            c.pass
                        ));
                    }
                }
                Format::Table => {
                    out.push_str(&format!("D={} j={}\n", report.ring, report.j));
                    for c in &report.checks {
                        let relation = match c.identity {
                            HeckeIdentity::Congruence => format!("≡ {} (mod {})", c.right, p),
                            _ => format!("= {}", c.right),
                        };
                        out.push_str(&format!(
                            "{:<5} {:<14} {:?}: {} {}\n",
                            if c.pass { "ok" } else { "FAIL" },
                            format!("{:?}", c.identity),
                            c.inputs,
                            c.left,
                            relation
                        ));
                    }
                }
            }
            Ok(report.all_pass())
        }
        Command::Quadrature { d, r, poly, nodes } => {
            let g = ring(*d)?;
            let p = parse_poly(poly)?;
            let quad = quadrature_average(g, *r, &p, *nodes)?;
            let shell = enumerate_shell(g, *r);
            let shell_avg = (!shell.is_empty()).then(|| {
                let n = BigInt::from(shell.len());
                shell_sum(g, &p, *r) / n
            });
            match cli.format {
                Format::Json => out.push_str(&to_json_text(&json!({
                    "D": g.d(), "r": r, "poly": p.to_string(), "nodes": nodes,
                    "quadrature": quad,
                    "shell_average": shell_avg.as_ref().map(rat_to_string),
                }))),
                Format::Csv => out.push_str(&format!(
                    "D,r,poly,nodes,quadrature,shell_average\n{},{},{},{},{:e},{}\n",
                    g,
                    r,
                    p,
                    nodes,
                    quad,
                    shell_avg.as_ref().map(rat_to_string).unwrap_or_default()
                )),
                Format::Table => {
                    out.push_str(&format!(
                        "quadrature average ({nodes} nodes): {quad:.15e}\n"
                    ));
                    match shell_avg {
                        Some(a) => out
                            .push_str(&format!("shell average over {} points: {a}\n", shell.len())),
                        None => out.push_str("shell is empty\n"),
                    }
                }
            }
            Ok(true)
        }
        Command::Sweep { rmax, jmax } => {
            let s = design::sweep(*rmax, *jmax, cli.jobs)?;
            match cli.format {
                Format::Json => out.push_str(&to_json_text(&s.to_json())),
                Format::Csv => {
                    out.push_str("D,r,vanishing,failing,theorem_main_ok\n");
                    for rep in &s.reports {
                        out.push_str(&csv_report_row(rep));
                    }
                }
                Format::Table => {
                    for g in Ring::all() {
                        let reps: Vec<&DesignReport> =
                            s.reports.iter().filter(|r| r.ring == g).collect();
                        let ok = reps.iter().filter(|r| r.theorem_main_ok).count();
                        out.push_str(&format!(
                            "D={:<4} T = {:<10} shells={:<5} ok={:<5}{}\n",
                            g.d(),
                            design::claimed_t(g),
                            reps.len(),
                            ok,
                            if ok == reps.len() { "" } else { "  MISMATCH" }
                        ));
                    }
                    out.push_str(&format!(
                        "{} shells, rmax={}, jmax={}: {}\n",
                        s.reports.len(),
                        s.r_max,
                        s.j_max,
                        if s.all_ok() {
                            "all consistent"
                        } else {
                            "FAILURES"
                        }
                    ));
                }
            }
            Ok(s.all_ok())
        }
        Command::ReproduceExample => reproduce_example(cli.format, out),
    }
}

fn cmd_shell(cli: &Cli, g: Ring, r: u64, out: &mut String) -> CliResult<bool> {
    let shell = match cache_path(&cli.cache) {
        Some(path) => {
            let (mut cache, warnings) = ShellCache::load(&path)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            let shell = cache.get_or_enumerate(g, r).clone();
            if let Err(e) = cache.save() {
                eprintln!("warning: cannot write cache {}: {e}", path.display());
            }
            shell
        }
        None => enumerate_shell(g, r),
    };
    write_shell(cli.format, &shell, out);
    Ok(true)
}

fn write_shell(format: Format, shell: &Shell, out: &mut String) {
    match format {
        Format::Json => {
            out.push_str(&shell.to_json_line());
            out.push('\n');
        }
        Format::Csv => {
            out.push_str("x,y\n");
            for (x, y) in shell.points() {
                out.push_str(&format!("{x},{y}\n"));
            }
        }
        Format::Table => {
            let g = shell.ring();
            if shell.is_empty() {
                out.push_str(&format!(
                    "D={} r={}: empty shell ({} is not representable by the norm form)\n",
                    g,
                    shell.r(),
                    shell.r()
                ));
                return;
            }
            out.push_str(&format!(
                "D={} r={}: {} points\n",
                g,
                shell.r(),
                shell.len()
            ));
            for (x, y) in shell.points() {
                out.push_str(&format!("({x}, {y})\n"));
            }
        }
    }
}

fn csv_report_row(rep: &DesignReport) -> String {
    let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    format!(
        "{},{},{},{},{}\n",
        rep.ring,
        rep.r,
        join(&rep.vanishing),
        join(&rep.failing_degrees()),
        rep.theorem_main_ok
    )
}

fn cmd_verify(
    format: Format,
    g: Ring,
    r: u64,
    t: Option<u32>,
    jmax: Option<u32>,
    out: &mut String,
) -> CliResult<bool> {
    if r > 0 && !is_representable(g, r) {
        return Err(CliError::Usage(format!(
            "the shell of norm {r} is empty for D = {g}: some prime that stays inert in O_D \
             divides {r} to an odd power, so there is no design to verify"
        )));
    }
    let j_max = t.or(jmax).unwrap_or_else(|| default_j_max(g));
    let report = strength_profile(g, r, j_max)?;
    let t_design = t.map(|t| is_t_design(g, r, t)).transpose()?;
    match format {
        Format::Json => {
            let mut v = report.to_json();
            if let Some(b) = t_design {
                v["t_design"] = json!(b);
            }
            out.push_str(&to_json_text(&v));
        }
        Format::Csv => {
            out.push_str("D,r,vanishing,failing,theorem_main_ok\n");
            out.push_str(&csv_report_row(&report));
        }
        Format::Table => {
            let shell_len = enumerate_shell(g, r).len();
            out.push_str(&format!(
                "D={} r={} |shell|={} jmax={} claimed T = {}\n",
                g,
                r,
                shell_len,
                j_max,
                design::claimed_t(g)
            ));
            out.push_str(&format!("vanishing: {:?}\n", report.vanishing));
            out.push_str(&format!("failing:   {:?}\n", report.failing_degrees()));
            for f in &report.failing {
                out.push_str(&format!("  j={}: witness {}\n", f.j, f.witness));
            }
            out.push_str(&format!("strength (consecutive): {}\n", report.strength()));
            if let (Some(t), Some(b)) = (t, t_design) {
                out.push_str(&format!("{}-design: {}\n", t, if b { "yes" } else { "no" }));
            }
            out.push_str(&format!(
                "failing set matches multiples of {}: {}\n",
                g.unit_count(),
                report.theorem_main_ok
            ));
        }
    }
    Ok(report.theorem_main_ok)
}

#[allow(clippy::too_many_arguments)]
fn cmd_theta(
    format: Format,
    g: Ring,
    j: Option<u32>,
    poly: Option<&str>,
    part: PartArg,
    rmax: u64,
    normalized: bool,
    out: &mut String,
) -> CliResult<bool> {
    let mut series: ThetaSeries = match (j, poly) {
        (Some(j), None) => {
            let part = match part {
                PartArg::Real => Part::Real,
                PartArg::Imag => Part::Imag,
            };
            basis_theta_series(g, j, part, rmax)?
        }
        (None, Some(src)) => theta_series(g, &parse_poly(src)?, rmax)?,
        _ => return Err(CliError::Usage("give exactly one of --j and --poly".into())),
    };
    if normalized {
        let u = BigRational::from_integer(g.unit_count().into());
        for c in &mut series.coeffs {
            *c = &*c / &u;
        }
    }
    match format {
        Format::Json => out.push_str(&to_json_text(&series.to_json())),
        Format::Csv | Format::Table => {
            let sep = if format == Format::Csv { "," } else { "\t" };
            out.push_str(&format!("r{sep}coefficient\n"));
            for (r, c) in series.coeffs.iter().enumerate() {
                if format == Format::Csv {
                    out.push_str(&format!("{r}{sep}{}\n", rat_to_string(c)));
                } else {
                    out.push_str(&format!("{r}{sep}{c}\n"));
                }
            }
        }
    }
    Ok(true)
}

fn reproduce_example(format: Format, out: &mut String) -> CliResult<bool> {
    let g = Ring::new(3)?;
    let r = 691;
    let expected: [(i64, i64); 12] = [
        (11, 19),
        (-11, -19),
        (19, 11),
        (-19, -11),
        (11, -30),
        (-11, 30),
        (30, -19),
        (-30, 19),
        (30, -11),
        (-30, 11),
        (19, -30),
        (-19, 30),
    ];
    let shell = enumerate_shell(g, r);
    let mut want = expected.to_vec();
    want.sort();
    let points_ok = shell.points() == want.as_slice();

    let p = parse_poly(EXAMPLE_P)?;
    let q = parse_poly(EXAMPLE_Q)?;
    let p_span = in_span(g, 2, &p)?;
    let q_span = in_span(g, 6, &q)?;
    let p_sum = shell_sum(g, &p, r);
    let q_sum = shell_sum(g, &q, r);
    let five = is_t_design(g, r, 5)?;
    let six = is_t_design(g, r, 6)?;

    let checks = [
        ("shell has the 12 listed points", points_ok),
        ("P lies in H_{3,2}", p_span.is_some()),
        ("sum of P over the shell is 0", p_sum.is_zero()),
        ("Q lies in H_{3,6}", q_span.is_some()),
        (
            "sum of Q over the shell is -4818834696",
            q_sum == BigRational::from_integer(EXAMPLE_Q_SUM.into()),
        ),
        ("shell is a 5-design", five),
        ("shell is not a 6-design", !six),
    ];
    let all = checks.iter().all(|c| c.1);
    let span_str = |s: &Option<(BigRational, BigRational)>| {
        s.as_ref()
            .map(|(a, b)| format!("{a}*R + {b}*I/sqrt(D)"))
            .unwrap_or_else(|| "not in span".into())
    };

    match format {
        Format::Json => {
            let v = json!({
                "D": 3, "r": r,
                "points": shell.points().iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>(),
                "P": {"poly": p.to_string(), "span": span_str(&p_span), "sum": rat_to_string(&p_sum)},
                "Q": {"poly": q.to_string(), "span": span_str(&q_span), "sum": rat_to_string(&q_sum)},
                "checks": checks.iter().map(|(n, ok)| json!({"check": n, "pass": ok})).collect::<Vec<_>>(),
                "all_pass": all,
            });
            out.push_str(&to_json_text(&v));
        }
        Format::Csv | Format::Table => {
            out.push_str(&format!(
                "Shell of norm {r} in Z[(1+sqrt(-3))/2], {} points:\n",
                shell.len()
            ));
            for (x, y) in shell.points() {
                out.push_str(&format!("  ({x}, {y})\n"));
            }
            out.push_str(&format!(
                "P = {p}\n  = {}\n  sum over shell = {p_sum}\n",
                span_str(&p_span)
            ));
            out.push_str(&format!(
                "Q = {q}\n  = {}\n  sum over shell = {q_sum}\n",
                span_str(&q_span)
            ));
            for (name, ok) in &checks {
                out.push_str(&format!("[{}] {name}\n", if *ok { "ok" } else { "FAIL" }));
            }
        }
    }
    Ok(all)
}
