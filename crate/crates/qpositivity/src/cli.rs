//! Command-line driver: kernel evaluation, Gram matrix certification,
//! inequality sweeps, transform verification, density dumps.
//!
//! Output is JSON lines or CSV with every number printed at 17 significant
//! digits; with `--no-timestamp` a run is a pure function of (arguments,
//! seed) and byte-identical across invocations. Exit code 0 iff every
//! check in the run passed.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::certify::{
    self, Axis, IneqId, MarginReport, SweepGrid, Variant, ALL_INEQS,
};
use crate::error::{Error, Result};
use crate::gram::{build_gram, psd_check, GramSpec};
use crate::oracle::{
    reconstruct_density, verify_euler_transform, verify_phi11_transform,
    verify_ramanujan_integral, DensityFamily, QuadratureSpec, Scheme, TransformCheck,
};
use crate::qkernel::{
    phi11, q_gamma, qpoch_fin, qpoch_inf, ramanujan_aq, theta4_product, theta4_series,
    theta4_vtau, QBase, QComplex, TruncationPolicy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qpositivity", version, about = "q-series positivity verification toolkit")]
pub struct Cli {
    /// Output format for all records.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub output: OutputFormat,

    /// Seed for randomized sweeps; fully determines the draws.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Tolerance override (gram: PSD rel_tol, oracle: rel_err threshold).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Suppress timestamp/wall-clock fields for byte-identical reruns.
    #[arg(long, global = true)]
    pub no_timestamp: bool,

    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Evaluate one special function at a point.
    Eval(EvalArgs),
    /// Build a Gram matrix from a JSON spec file and certify PSD.
    Gram(GramArgs),
    /// Evaluate one inequality over a grid or random draws.
    Certify(CertifyArgs),
    /// Random sweeps of every inequality.
    SweepAll(SweepAllArgs),
    /// Verify an integral transform or dump a density.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// qpoch-inf | qpoch-fin | aq | phi11 | theta4 | theta4-product | qgamma
    pub function: String,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub a_im: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b_im: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub z: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub z_im: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub x_im: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub v_im: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub tau_re: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub tau_im: Option<f64>,
    /// Finite q-Pochhammer order.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1e-16)]
    pub tail_tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_terms: usize,
}

#[derive(Debug, Args)]
pub struct GramArgs {
    /// JSON spec file: {"theorem": "...", "params": [...], "points": [...]}.
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    pub rel_tol: Option<f64>,
    /// Also emit the matrix entries as [re, im] pairs, row-major.
    #[arg(long)]
    pub dump_matrix: bool,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// Inequality id, e.g. 2.3, 2.8, 2.13a, 2.15, 2.20, 2.28.
    pub ineq: String,
    /// Number of random in-domain draws (alternative to explicit axes).
    #[arg(long)]
    pub random: Option<usize>,
    /// Exponent convention for 2.15/2.16/2.17.
    #[arg(long, default_value = "derived")]
    pub variant: String,
    /// Axis ranges as lo:hi:count (or a single value); required axes are
    /// the inequality's parameters.
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub zx: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub zy: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepAllArgs {
    /// Random draws per inequality.
    #[arg(long, default_value_t = 200)]
    pub random: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// euler | phi11 | ramanujan | density
    pub transform: String,
    #[arg(long, allow_negative_numbers = true)]
    pub z: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub z_im: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c_im: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub k: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub m_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub m_im: f64,
    /// Integration cutoff; 0 selects the certified automatic value.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub cutoff: f64,
    /// Quadrature points per unit length.
    #[arg(long, default_value_t = 64)]
    pub nodes: usize,
    /// gauss-legendre | trapezoid
    #[arg(long, default_value = "gauss-legendre")]
    pub scheme: String,
    /// Number of random in-domain draws instead of a single point.
    #[arg(long)]
    pub random: Option<usize>,
    /// Density family for the density dump: euler | phi11 | gauss.
    #[arg(long)]
    pub family: Option<String>,
    /// Density abscissas as lo:hi:count.
    #[arg(long, allow_hyphen_values = true)]
    pub alphas: Option<String>,
}

/// 17-significant-digit float formatting, round-trip safe.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn req<T: Copy>(name: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("missing required argument --{name}")))
}

fn parse_range(s: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Error::InvalidParameter(format!("range '{s}' is not lo:hi:count or a value"));
    match parts.len() {
        1 => {
            let v: f64 = parts[0].parse().map_err(|_| bad())?;
            Ok((v, v, 1))
        }
        3 => {
            let lo: f64 = parts[0].parse().map_err(|_| bad())?;
            let hi: f64 = parts[1].parse().map_err(|_| bad())?;
            let count: usize = parts[2].parse().map_err(|_| bad())?;
            if count == 0 {
                return Err(bad());
            }
            Ok((lo, hi, count))
        }
        _ => Err(bad()),
    }
}

fn json_inputs(inputs: &[(String, f64)]) -> String {
    let mut s = String::from("{");
    for (i, (k, v)) in inputs.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "\"{k}\":{}", num(*v));
    }
    s.push('}');
    s
}

fn margin_json(r: &MarginReport) -> String {
    format!(
        "{{\"ineq_id\":\"{}\",\"inputs\":{},\"lhs\":{},\"rhs\":{},\"margin\":{},\"ratio\":{},\"pass\":{}}}",
        r.inequality_id,
        json_inputs(&r.inputs),
        num(r.lhs),
        num(r.rhs),
        num(r.margin),
        num(r.ratio),
        r.pass
    )
}

fn margin_csv_header(r: &MarginReport) -> String {
    let mut s = String::from("ineq_id");
    for (k, _) in &r.inputs {
        let _ = write!(s, ",{k}");
    }
    s.push_str(",lhs,rhs,margin,ratio,pass");
    s
}

fn margin_csv_row(r: &MarginReport) -> String {
    let mut s = r.inequality_id.clone();
    for (_, v) in &r.inputs {
        let _ = write!(s, ",{}", num(*v));
    }
    let _ = write!(
        s,
        ",{},{},{},{},{}",
        num(r.lhs),
        num(r.rhs),
        num(r.margin),
        num(r.ratio),
        r.pass
    );
    s
}

struct TransformRecord {
    transform: &'static str,
    inputs: Vec<(String, f64)>,
    check: TransformCheck,
    pass: bool,
}

fn transform_json(r: &TransformRecord) -> String {
    format!(
        "{{\"transform\":\"{}\",\"inputs\":{},\"lhs_re\":{},\"lhs_im\":{},\"rhs_re\":{},\"rhs_im\":{},\"rel_err\":{},\"density_min\":{},\"pass\":{}}}",
        r.transform,
        json_inputs(&r.inputs),
        num(r.check.lhs.re),
        num(r.check.lhs.im),
        num(r.check.rhs.re),
        num(r.check.rhs.im),
        num(r.check.rel_err),
        num(r.check.density_min),
        r.pass
    )
}

fn transform_csv_header(r: &TransformRecord) -> String {
    let mut s = String::from("transform");
    for (k, _) in &r.inputs {
        let _ = write!(s, ",{k}");
    }
    s.push_str(",lhs_re,lhs_im,rhs_re,rhs_im,rel_err,density_min,pass");
    s
}

fn transform_csv_row(r: &TransformRecord) -> String {
    let mut s = r.transform.to_string();
    for (_, v) in &r.inputs {
        let _ = write!(s, ",{}", num(*v));
    }
    let _ = write!(
        s,
        ",{},{},{},{},{},{},{}",
        num(r.check.lhs.re),
        num(r.check.lhs.im),
        num(r.check.rhs.re),
        num(r.check.rhs.im),
        num(r.check.rel_err),
        num(r.check.density_min),
        r.pass
    );
    s
}

fn print_summary(
    cli: &Cli,
    total: usize,
    pass: usize,
    worst: Option<&MarginReport>,
    started: Instant,
) {
    let fail = total - pass;
    match cli.output {
        OutputFormat::Json => {
            let mut s = format!("{{\"summary\":{{\"total\":{total},\"pass\":{pass},\"fail\":{fail}");
            if let Some(w) = worst {
                let _ = write!(
                    s,
                    ",\"worst_margin\":{},\"worst_ineq\":\"{}\",\"worst_inputs\":{}",
                    num(w.margin),
                    w.inequality_id,
                    json_inputs(&w.inputs)
                );
            }
            let _ = write!(s, ",\"tool_version\":\"{}\"", env!("CARGO_PKG_VERSION"));
            if !cli.no_timestamp {
                let ts = std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map(|d| d.as_secs_f64())
                    .unwrap_or(0.0);
                let _ = write!(
                    s,
                    ",\"elapsed_ms\":{},\"timestamp\":{}",
                    num(started.elapsed().as_secs_f64() * 1e3),
                    num(ts)
                );
            }
            s.push_str("}}");
            println!("{s}");
        }
        OutputFormat::Csv => {
            let mut s = format!("# summary total={total} pass={pass} fail={fail}");
            if let Some(w) = worst {
                let _ = write!(s, " worst_margin={} worst_ineq={}", num(w.margin), w.inequality_id);
            }
            let _ = write!(s, " tool_version={}", env!("CARGO_PKG_VERSION"));
            if !cli.no_timestamp {
                let _ = write!(
                    s,
                    " elapsed_ms={}",
                    num(started.elapsed().as_secs_f64() * 1e3)
                );
            }
            println!("{s}");
        }
    }
}

fn policy(args: &EvalArgs) -> Result<TruncationPolicy> {
    TruncationPolicy::new(args.tail_tol, args.max_terms)
}

fn run_eval(cli: &Cli, args: &EvalArgs) -> Result<bool> {
    let pol = policy(args)?;
    let c = QComplex::new;
    let (value, terms_used, tail_bound) = match args.function.as_str() {
        "qpoch-inf" => {
            let a = c(req("a", args.a)?, args.a_im);
            let q = QBase::new(req("q", args.q)?)?;
            let r = qpoch_inf(a, q, &pol)?;
            (r.value, r.terms_used, r.tail_bound)
        }
        "qpoch-fin" => {
            let a = c(req("a", args.a)?, args.a_im);
            let q = QBase::new(req("q", args.q)?)?;
            let n = req("n", args.n)?;
            (qpoch_fin(a, q, n)?, n, 0.0)
        }
        "aq" => {
            let z = c(req("z", args.z)?, args.z_im);
            let q = QBase::new(req("q", args.q)?)?;
            let r = ramanujan_aq(z, q, &pol)?;
            (r.value, r.terms_used, r.tail_bound)
        }
        "phi11" => {
            let a = c(req("a", args.a)?, args.a_im);
            let b = c(req("b", args.b)?, args.b_im);
            let z = c(req("z", args.z)?, args.z_im);
            let q = QBase::new(req("q", args.q)?)?;
            let r = phi11(a, b, q, z, &pol)?;
            (r.value, r.terms_used, r.tail_bound)
        }
        "theta4" => {
            if let Some(tau_im) = args.tau_im {
                let v = c(req("v", args.v)?, args.v_im);
                let r = theta4_vtau(v, c(args.tau_re, tau_im), &pol)?;
                (r.value, r.terms_used, r.tail_bound)
            } else {
                let z = c(req("z", args.z)?, args.z_im);
                let q = QBase::new(req("q", args.q)?)?;
                let r = theta4_series(z, q, &pol)?;
                (r.value, r.terms_used, r.tail_bound)
            }
        }
        "theta4-product" => {
            let z = c(req("z", args.z)?, args.z_im);
            let q = QBase::new(req("q", args.q)?)?;
            let r = theta4_product(z, q, &pol)?;
            (r.value, r.terms_used, r.tail_bound)
        }
        "qgamma" => {
            let x = c(req("x", args.x)?, args.x_im);
            let q = QBase::new(req("q", args.q)?)?;
            let r = q_gamma(x, q, &pol)?;
            (r.value, r.terms_used, r.tail_bound)
        }
        other => {
            return Err(Error::InvalidParameter(format!("unknown function '{other}'")));
        }
    };
    match cli.output {
        OutputFormat::Json => println!(
            "{{\"function\":\"{}\",\"value_re\":{},\"value_im\":{},\"terms_used\":{},\"tail_bound\":{}}}",
            args.function,
            num(value.re),
            num(value.im),
            terms_used,
            num(tail_bound)
        ),
        OutputFormat::Csv => {
            println!("function,value_re,value_im,terms_used,tail_bound");
            println!(
                "{},{},{},{},{}",
                args.function,
                num(value.re),
                num(value.im),
                terms_used,
                num(tail_bound)
            );
        }
    }
    Ok(true)
}

fn run_gram(cli: &Cli, args: &GramArgs) -> Result<bool> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", args.spec.display())))?;
    let spec: GramSpec = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidParameter(format!("invalid spec file: {e}")))?;
    let m = build_gram(&spec)?;
    let rel_tol = args.rel_tol.or(cli.tol).unwrap_or(1e-10);
    let v = psd_check(&m, rel_tol)?;
    match cli.output {
        OutputFormat::Json => {
            println!(
                "{{\"is_psd\":{},\"dim\":{},\"min_eigenvalue\":{},\"tolerance_used\":{},\"scale\":{}}}",
                v.is_psd,
                m.dim(),
                num(v.min_eigenvalue),
                num(v.tolerance_used),
                num(v.scale)
            );
            if args.dump_matrix {
                let mut s = String::from("{\"matrix\":[");
                for j in 0..m.dim() {
                    for k in 0..m.dim() {
                        if j + k > 0 {
                            s.push(',');
                        }
                        let e = m.get(j, k);
                        let _ = write!(s, "[{},{}]", num(e.re), num(e.im));
                    }
                }
                s.push_str("]}");
                println!("{s}");
            }
        }
        OutputFormat::Csv => {
            println!("is_psd,dim,min_eigenvalue,tolerance_used,scale");
            println!(
                "{},{},{},{},{}",
                v.is_psd,
                m.dim(),
                num(v.min_eigenvalue),
                num(v.tolerance_used),
                num(v.scale)
            );
            if args.dump_matrix {
                println!("row,col,re,im");
                for j in 0..m.dim() {
                    for k in 0..m.dim() {
                        let e = m.get(j, k);
                        println!("{j},{k},{},{}", num(e.re), num(e.im));
                    }
                }
            }
        }
    }
    Ok(v.is_psd)
}

fn certify_grid(args: &CertifyArgs, id: IneqId) -> Result<SweepGrid> {
    let mut axes = Vec::new();
    let pairs: [(&str, &Option<String>); 12] = [
        ("y", &args.y),
        ("q", &args.q),
        ("x", &args.x),
        ("u", &args.u),
        ("v", &args.v),
        ("a", &args.a),
        ("b", &args.b),
        ("c", &args.c),
        ("z", &args.z),
        ("k", &args.k),
        ("zx", &args.zx),
        ("zy", &args.zy),
    ];
    for (name, opt) in pairs {
        if let Some(s) = opt {
            let (lo, hi, count) = parse_range(s)?;
            axes.push(Axis { name: name.into(), lo, hi, count });
        }
    }
    if axes.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "no grid given: pass --random N or axis ranges for {}",
            certify::param_names(id).join(", ")
        )));
    }
    Ok(SweepGrid::Grid(axes))
}

fn emit_margin_stream(cli: &Cli, reports: &[MarginReport], started: Instant) -> bool {
    let mut pass = 0usize;
    let mut worst: Option<&MarginReport> = None;
    match cli.output {
        OutputFormat::Json => {
            for r in reports {
                println!("{}", margin_json(r));
            }
        }
        OutputFormat::Csv => {
            if let Some(first) = reports.first() {
                println!("{}", margin_csv_header(first));
            }
            for r in reports {
                println!("{}", margin_csv_row(r));
            }
        }
    }
    for r in reports {
        if r.pass {
            pass += 1;
        }
        if worst.map_or(true, |w| r.margin < w.margin) {
            worst = Some(r);
        }
    }
    print_summary(cli, reports.len(), pass, worst, started);
    pass == reports.len()
}

fn run_certify(cli: &Cli, args: &CertifyArgs) -> Result<bool> {
    let started = Instant::now();
    let id = IneqId::from_str(&args.ineq)?;
    let variant = Variant::from_str(&args.variant)?;
    let grid = match args.random {
        Some(draws) => SweepGrid::Random { draws, seed: cli.seed },
        None => certify_grid(args, id)?,
    };
    let reports = certify::sweep(id, &grid, variant)?;
    Ok(emit_margin_stream(cli, &reports, started))
}

fn run_sweep_all(cli: &Cli, args: &SweepAllArgs) -> Result<bool> {
    let started = Instant::now();
    let mut reports = Vec::new();
    for (i, id) in ALL_INEQS.iter().enumerate() {
        let grid = SweepGrid::Random {
            draws: args.random,
            seed: cli.seed.wrapping_add(i as u64),
        };
        reports.extend(certify::sweep(*id, &grid, Variant::DerivedForm)?);
    }
    Ok(emit_margin_stream(cli, &reports, started))
}

fn oracle_scheme(s: &str) -> Result<Scheme> {
    match s {
        "gauss-legendre" => Ok(Scheme::GaussLegendreComposite),
        "trapezoid" => Ok(Scheme::Trapezoid),
        other => Err(Error::InvalidParameter(format!("unknown scheme '{other}'"))),
    }
}

fn run_oracle(cli: &Cli, args: &OracleArgs) -> Result<bool> {
    let started = Instant::now();
    let quad = QuadratureSpec {
        cutoff: args.cutoff,
        nodes: args.nodes,
        scheme: oracle_scheme(&args.scheme)?,
    };
    let threshold = cli.tol.unwrap_or(1e-8);
    let c = QComplex::new;

    if args.transform == "density" {
        let family = match req("family", args.family.as_deref())? {
            "euler" => DensityFamily::Euler {
                z: req("z", args.z)?,
                q: req("q", args.q)?,
            },
            "phi11" => DensityFamily::Phi11 {
                a: req("a", args.a)?,
                b: req("b", args.b)?,
                z: req("z", args.z)?,
                q: req("q", args.q)?,
            },
            "gauss" => DensityFamily::Gauss {
                c: req("c", args.c)?,
                k: req("k", args.k)?,
                m: args.m_re,
            },
            other => {
                return Err(Error::InvalidParameter(format!("unknown family '{other}'")));
            }
        };
        let (lo, hi, count) = parse_range(req("alphas", args.alphas.as_deref())?)?;
        let alphas = Axis { name: "alpha".into(), lo, hi, count }.values();
        let dens = reconstruct_density(&family, &alphas)?;
        if cli.output == OutputFormat::Csv {
            println!("alpha,density");
        }
        for (a, d) in alphas.iter().zip(&dens) {
            match cli.output {
                OutputFormat::Json => {
                    println!("{{\"alpha\":{},\"density\":{}}}", num(*a), num(*d))
                }
                OutputFormat::Csv => println!("{},{}", num(*a), num(*d)),
            }
        }
        return Ok(true);
    }

    let mut records: Vec<TransformRecord> = Vec::new();
    let mut run_one = |inputs: Vec<(String, f64)>| -> Result<()> {
        let check = match args.transform.as_str() {
            "euler" => {
                let get = |n: &str| inputs.iter().find(|(k, _)| k == n).unwrap().1;
                verify_euler_transform(c(get("z_re"), get("z_im")), get("q"), get("x"), &quad)?
            }
            "phi11" => {
                let get = |n: &str| inputs.iter().find(|(k, _)| k == n).unwrap().1;
                verify_phi11_transform(get("a"), get("b"), get("z"), get("q"), get("x"), &quad)?
            }
            "ramanujan" => {
                let get = |n: &str| inputs.iter().find(|(k, _)| k == n).unwrap().1;
                verify_ramanujan_integral(
                    c(get("c_re"), get("c_im")),
                    get("k"),
                    c(get("m_re"), get("m_im")),
                    &quad,
                )?
            }
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown transform '{other}'"
                )));
            }
        };
        let pass = check.rel_err <= threshold;
        records.push(TransformRecord {
            transform: match args.transform.as_str() {
                "euler" => "euler",
                "phi11" => "phi11",
                _ => "ramanujan",
            },
            inputs,
            check,
            pass,
        });
        Ok(())
    };

    if let Some(draws) = args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        for _ in 0..draws {
            let inputs = match args.transform.as_str() {
                "euler" => vec![
                    ("z_re".into(), rng.gen_range(1e-3..=0.6)),
                    ("z_im".into(), 0.0),
                    ("q".into(), rng.gen_range(0.1..=0.6)),
                    ("x".into(), rng.gen_range(-std::f64::consts::PI..=std::f64::consts::PI)),
                ],
                "phi11" => vec![
                    ("a".into(), rng.gen_range(-0.9..=0.9)),
                    ("b".into(), rng.gen_range(1e-3..=0.6)),
                    ("z".into(), rng.gen_range(1e-3..=0.6)),
                    ("q".into(), rng.gen_range(0.1..=0.6)),
                    ("x".into(), rng.gen_range(-std::f64::consts::PI..=std::f64::consts::PI)),
                ],
                "ramanujan" => vec![
                    ("c_re".into(), rng.gen_range(-0.6..=0.6)),
                    ("c_im".into(), rng.gen_range(-0.6..=0.6)),
                    ("k".into(), rng.gen_range(0.2..=1.5)),
                    ("m_re".into(), rng.gen_range(-1.0..=1.0)),
                    ("m_im".into(), rng.gen_range(-1.0..=1.0)),
                ],
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown transform '{other}'"
                    )));
                }
            };
            run_one(inputs)?;
        }
    } else {
        let inputs = match args.transform.as_str() {
            "euler" => vec![
                ("z_re".into(), req("z", args.z)?),
                ("z_im".into(), args.z_im),
                ("q".into(), req("q", args.q)?),
                ("x".into(), req("x", args.x)?),
            ],
            "phi11" => vec![
                ("a".into(), req("a", args.a)?),
                ("b".into(), req("b", args.b)?),
                ("z".into(), req("z", args.z)?),
                ("q".into(), req("q", args.q)?),
                ("x".into(), req("x", args.x)?),
            ],
            _ => vec![
                ("c_re".into(), req("c", args.c)?),
                ("c_im".into(), args.c_im),
                ("k".into(), req("k", args.k)?),
                ("m_re".into(), args.m_re),
                ("m_im".into(), args.m_im),
            ],
        };
        run_one(inputs)?;
    }

    match cli.output {
        OutputFormat::Json => {
            for r in &records {
                println!("{}", transform_json(r));
            }
        }
        OutputFormat::Csv => {
            if let Some(first) = records.first() {
                println!("{}", transform_csv_header(first));
            }
            for r in &records {
                println!("{}", transform_csv_row(r));
            }
        }
    }
    let pass = records.iter().filter(|r| r.pass).count();
    print_summary(cli, records.len(), pass, None, started);
    Ok(pass == records.len())
}

/// Executes the parsed command; returns whether every check passed.
pub fn run(cli: &Cli) -> Result<bool> {
    match &cli.cmd {
        Cmd::Eval(args) => run_eval(cli, args),
        Cmd::Gram(args) => run_gram(cli, args),
        Cmd::Certify(args) => run_certify(cli, args),
        Cmd::SweepAll(args) => run_sweep_all(cli, args),
        Cmd::Oracle(args) => run_oracle(cli, args),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0.3:3:20").unwrap(), (0.3, 3.0, 20));
        assert_eq!(parse_range("-2:2:41").unwrap(), (-2.0, 2.0, 41));
        assert_eq!(parse_range("0.5").unwrap(), (0.5, 0.5, 1));
        assert!(parse_range("1:2").is_err());
        assert!(parse_range("a:b:c").is_err());
        assert!(parse_range("1:2:0").is_err());
    }

    #[test]
    fn number_format_has_17_significant_digits() {
        let s = num(0.28878809508660242);
        assert_eq!(s.parse::<f64>().unwrap(), 0.28878809508660242);
        assert_eq!(s.len(), "2.8878809508660242e-1".len());
        assert_eq!(num(1.0), "1.0000000000000000e0");
        let x = 0.1234567890123456789;
        let round_trip: f64 = num(x).parse().unwrap();
        assert_eq!(round_trip, x);
    }

    #[test]
    fn cli_parses_spec_examples() {
        use clap::Parser;
        let c = Cli::try_parse_from([
            "qpositivity", "certify", "2.8", "--u", "0.3:3:20", "--v", "-2:2:41",
        ])
        .unwrap();
        matches!(c.cmd, Cmd::Certify(_));
        let c = Cli::try_parse_from([
            "qpositivity", "--seed", "7", "--no-timestamp", "certify", "2.3", "--random", "1000",
        ])
        .unwrap();
        assert_eq!(c.seed, 7);
        assert!(c.no_timestamp);
        let c = Cli::try_parse_from(["qpositivity", "eval", "qpoch-inf", "--a", "0.5", "--q", "0.5"])
            .unwrap();
        matches!(c.cmd, Cmd::Eval(_));
    }
}
