use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use poisson_green::coulomb::{
    coulomb_g_quadrature, coulomb_g_series, CoulombParams, QuadratureOptions, DEFAULT_SERIES_TERMS,
};
use poisson_green::hydrogen::{fock_chi, psi_momentum, psi_via_ynlm, relative_phase, BoundStateIndex, MomentumPoint};
use poisson_green::kernels::{
    g2_closed, g2_expansion, g2_terms, g3_closed, g3_expansion, g4_closed, g4_expansion, g4_expansion_collapsed,
    RadialPair, Scale2D,
};
use poisson_green::report::{exit_code, render, Format, OutputRecord};
use poisson_green::verify::{self, SuiteReport};
use poisson_green::{Error, Result};

const EXIT_INVARIANT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "greenfn", version, about = "Evaluate and cross-check Poisson and Coulomb Green functions")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: FormatArg,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Record elapsed wall-clock time in the metadata (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Text,
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed form and truncated expansion of the free Green function.
    Eval(EvalArgs),
    /// Expansion error against truncation order.
    Converge(ConvergeArgs),
    /// Run an invariant suite; exits with 3 if any check fails.
    Verify(VerifyArgs),
    /// Hydrogen momentum-space wave function.
    Hydrogen(HydrogenArgs),
    /// Coulomb Green function G(p, p'; E).
    Coulomb(CoulombArgs),
}

#[derive(Args, Debug, Clone)]
struct PairArgs {
    /// Dimension: 2, 3 or 4.
    #[arg(long)]
    dim: usize,
    /// First point, comma-separated Cartesian components.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    p: Components,
    /// Second point.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    q: Components,
    /// Length scale of the 2D logarithm.
    #[arg(long = "L", default_value_t = 1.0)]
    length: f64,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    pair: PairArgs,
    /// Truncation order.
    #[arg(long, default_value_t = 40)]
    order: usize,
    /// In 4D, sum each shell through the addition theorem.
    #[arg(long)]
    collapsed: bool,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[command(flatten)]
    pair: PairArgs,
    #[arg(long, default_value_t = 0)]
    min_order: usize,
    #[arg(long, default_value_t = 40)]
    max_order: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    Orthonormality,
    Addition,
    Flux,
    HydrogenNorm,
    CoulombResidue,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    suite: SuiteArg,
    /// Largest principal index (4D harmonics, hydrogen states, addition theorem).
    #[arg(long)]
    nmax: Option<usize>,
    /// Largest ℓ of the 3D Gram matrix.
    #[arg(long, default_value_t = 6)]
    lmax: usize,
    /// Circle/sphere radii of the flux suite.
    #[arg(long, value_delimiter = ',', default_values_t = [1e-6, 1e-4, 1e-2, 1.0])]
    eps: Vec<f64>,
    /// Trapezoid nodes of the 2D flux integral.
    #[arg(long, default_value_t = 16)]
    nodes: usize,
    /// Random point pairs (addition, coulomb-residue).
    #[arg(long, default_value_t = 10)]
    pairs: usize,
    #[arg(long, default_value_t = 20240601)]
    seed: u64,
    /// Bound-state levels of the residue suite.
    #[arg(long, value_delimiter = ',', default_values_t = [1u32, 2])]
    n: Vec<u32>,
    #[arg(long, default_value_t = 1)]
    z: u32,
    #[arg(long, default_value_t = verify::HYDROGEN_RADIAL_NODES)]
    radial_nodes: usize,
}

#[derive(Args, Debug)]
struct HydrogenArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    l: u32,
    #[arg(long, allow_hyphen_values = true)]
    m: i32,
    /// Momentum, comma-separated Cartesian components (atomic units).
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    p: Components,
    #[arg(long, default_value_t = 1)]
    z: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum MethodArg {
    Quadrature,
    Series,
    Both,
}

#[derive(Args, Debug)]
struct CoulombArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    p: Components,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_vector)]
    q: Components,
    /// Energy E < 0 (atomic units).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "nu", required_unless_present = "nu")]
    energy: Option<f64>,
    /// ν = Z m / √(-2 m E), instead of --energy.
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long, default_value_t = 1)]
    z: u32,
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    #[arg(long, value_enum, default_value = "both")]
    method: MethodArg,
    /// Terms of the series method.
    #[arg(long, default_value_t = DEFAULT_SERIES_TERMS)]
    terms: usize,
    /// Taylor terms subtracted by the quadrature method (default ceil(ν) + 2).
    #[arg(long)]
    subtract: Option<usize>,
    /// Interval budget of the adaptive quadrature.
    #[arg(long, default_value_t = QuadratureOptions::default().max_intervals)]
    max_intervals: usize,
}

/// Comma-separated Cartesian components.
#[derive(Debug, Clone)]
struct Components(Vec<f64>);

impl std::ops::Deref for Components {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

fn parse_vector(s: &str) -> std::result::Result<Components, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad component {t:?}: {e}")))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(Components)
}

fn fixed<const N: usize>(v: &[f64], what: &str) -> Result<[f64; N]> {
    v.try_into()
        .map_err(|_| Error::Domain(format!("{what} needs {N} components, got {}", v.len())))
}

/// What a command produced: records, plus whether an invariant failed.
struct Outcome {
    records: Vec<OutputRecord>,
    invariant_failed: bool,
}

impl Outcome {
    fn ok(records: Vec<OutputRecord>) -> Self {
        Outcome { records, invariant_failed: false }
    }
}

fn pair_inputs(rec: OutputRecord, pair: &PairArgs) -> OutputRecord {
    let rec = rec.input("dim", pair.dim).input_vector("p", &pair.p).input_vector("q", &pair.q);
    if pair.dim == 2 {
        rec.input_real("L", pair.length)
    } else {
        rec
    }
}

struct Evaluation {
    closed: f64,
    expansion: f64,
    tail_bound: f64,
    extra: Vec<(&'static str, f64)>,
}

fn evaluate(pair: &PairArgs, order: usize, collapsed: bool) -> Result<Evaluation> {
    match pair.dim {
        2 => {
            let (a, b) = (fixed::<2>(&pair.p, "--p")?, fixed::<2>(&pair.q, "--q")?);
            let scale = Scale2D::new(pair.length)?;
            let terms = g2_terms(a, b, scale, order)?;
            let e = g2_expansion(a, b, scale, order)?;
            Ok(Evaluation {
                closed: g2_closed(a, b, scale)?,
                expansion: e.value,
                tail_bound: e.tail_bound,
                extra: vec![("monopole", terms.monopole), ("angular", terms.angular)],
            })
        }
        3 => {
            let (a, b) = (fixed::<3>(&pair.p, "--p")?, fixed::<3>(&pair.q, "--q")?);
            let e = g3_expansion(a, b, order)?;
            Ok(Evaluation { closed: g3_closed(a, b)?, expansion: e.value, tail_bound: e.tail_bound, extra: vec![] })
        }
        4 => {
            let (a, b) = (fixed::<4>(&pair.p, "--p")?, fixed::<4>(&pair.q, "--q")?);
            let e = if collapsed { g4_expansion_collapsed(a, b, order)? } else { g4_expansion(a, b, order)? };
            Ok(Evaluation { closed: g4_closed(a, b)?, expansion: e.value, tail_bound: e.tail_bound, extra: vec![] })
        }
        d => Err(Error::Domain(format!("dimension must be 2, 3 or 4, got {d}"))),
    }
}

fn radius_ratio(pair: &PairArgs) -> Result<f64> {
    let r = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(RadialPair::new(r(&pair.p), r(&pair.q))?.ratio)
}

fn cmd_eval(args: &EvalArgs) -> Result<Outcome> {
    let ev = evaluate(&args.pair, args.order, args.collapsed)?;
    let mut rec = pair_inputs(OutputRecord::new("eval"), &args.pair)
        .input("order", args.order)
        .output("closed", ev.closed)
        .output("expansion", ev.expansion)
        .output("tail_bound", ev.tail_bound)
        .output("difference", ev.expansion - ev.closed);
    for (k, v) in ev.extra {
        rec = rec.output(k, v);
    }
    let rec = rec.meta("order", args.order).meta_real("radius_ratio", radius_ratio(&args.pair)?);
    let rec = if args.pair.dim == 4 { rec.meta("collapsed", args.collapsed) } else { rec };
    let within = (ev.expansion - ev.closed).abs() <= ev.tail_bound;
    Ok(Outcome { records: vec![rec.meta("within_tail_bound", within)], invariant_failed: false })
}

fn cmd_converge(args: &ConvergeArgs) -> Result<Outcome> {
    if args.min_order > args.max_order {
        return Err(Error::Domain("min-order exceeds max-order".into()));
    }
    let ratio = radius_ratio(&args.pair)?;
    let mut records = Vec::new();
    for order in args.min_order..=args.max_order {
        let ev = evaluate(&args.pair, order, false)?;
        let rec = pair_inputs(OutputRecord::new("converge"), &args.pair)
            .input("order", order)
            .output("expansion", ev.expansion)
            .output("error", (ev.expansion - ev.closed).abs())
            .output("tail_bound", ev.tail_bound)
            .meta_real("closed", ev.closed)
            .meta_real("radius_ratio", ratio);
        records.push(rec);
    }
    Ok(Outcome::ok(records))
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    let report: SuiteReport = match args.suite {
        SuiteArg::Orthonormality => verify::orthonormality(args.lmax, args.nmax.unwrap_or(5))?,
        SuiteArg::Addition => verify::addition(args.nmax.unwrap_or(8), args.pairs.max(1), args.seed)?,
        SuiteArg::Flux => verify::flux(&args.eps, args.nodes)?,
        SuiteArg::HydrogenNorm => {
            let nmax = args.nmax.unwrap_or(5);
            let nmax = u32::try_from(nmax).map_err(|_| Error::Domain("nmax too large".into()))?;
            verify::hydrogen_norm(nmax, args.z, args.radial_nodes, args.seed)?
        }
        SuiteArg::CoulombResidue => verify::coulomb_residue(&args.n, args.pairs, args.z, args.seed)?,
    };
    let failed = !report.passed();
    let records = report
        .records()
        .into_iter()
        .map(|r| r.meta("seed", args.seed))
        .collect();
    Ok(Outcome { records, invariant_failed: failed })
}

fn cmd_hydrogen(args: &HydrogenArgs) -> Result<Outcome> {
    let idx = BoundStateIndex::new(args.n, args.l, args.m)?;
    let p = MomentumPoint::new(fixed::<3>(&args.p, "--p")?)?;
    let psi = psi_momentum(idx, &p, args.z)?;
    let mut rec = OutputRecord::new("hydrogen")
        .input("n", args.n)
        .input("l", args.l)
        .input("m", args.m)
        .input_vector("p", &args.p)
        .input("Z", args.z)
        .output("psi_re", psi.re)
        .output("psi_im", psi.im)
        .output("chi", fock_chi(p.magnitude, args.n, args.z));
    let mut invariant_failed = false;
    if args.z == 1 {
        let via = psi_via_ynlm(idx, &p, 1)?;
        let phase = relative_phase(idx);
        let mismatch = (via - psi * phase).norm();
        invariant_failed = mismatch > verify::REPRESENTATION_TOL * psi.norm().max(1.0);
        rec = rec
            .output("via_ynlm_re", via.re)
            .output("via_ynlm_im", via.im)
            .output("relative_phase", phase)
            .output("representation_mismatch", mismatch);
    }
    Ok(Outcome { records: vec![rec.meta("units", "atomic")], invariant_failed })
}

fn cmd_coulomb(args: &CoulombArgs) -> Result<Outcome> {
    let p = fixed::<3>(&args.p, "--p")?;
    let q = fixed::<3>(&args.q, "--q")?;
    let params = match (args.energy, args.nu) {
        (Some(e), _) => CoulombParams::new(e, args.z, args.mass)?,
        (None, Some(nu)) => CoulombParams::from_nu(nu, args.z, args.mass)?,
        (None, None) => return Err(Error::Domain("give --energy or --nu".into())),
    };
    let mut rec = OutputRecord::new("coulomb")
        .input_vector("p", &p)
        .input_vector("q", &q)
        .input_real("energy", params.energy())
        .input("Z", args.z)
        .input_real("mass", args.mass)
        .output("nu", params.nu())
        .output("X", params.x());
    let mut invariant_failed = false;
    let quad = if args.method != MethodArg::Series {
        let opts = QuadratureOptions { subtraction_order: args.subtract, max_intervals: args.max_intervals, ..Default::default() };
        Some(coulomb_g_quadrature(&p, &q, &params, opts)?)
    } else {
        None
    };
    let series = if args.method != MethodArg::Quadrature { Some(coulomb_g_series(&p, &q, &params, args.terms)?) } else { None };
    for r in quad.iter().chain(series.iter()) {
        let name = r.method.name();
        rec = rec
            .output(&format!("value_{name}"), r.value)
            .output(&format!("est_error_{name}"), r.est_error)
            .meta(&format!("terms_or_nodes_{name}"), r.terms_or_nodes);
    }
    if let (Some(a), Some(b)) = (quad, series) {
        let diff = (a.value - b.value).abs();
        let agree = diff <= a.est_error + b.est_error;
        invariant_failed = !agree;
        rec = rec.output("difference", diff).meta("methods_agree", agree);
    }
    Ok(Outcome { records: vec![rec.meta("green_function_of", "H - E")], invariant_failed })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Eval(_) => "eval",
        Command::Converge(_) => "converge",
        Command::Verify(_) => "verify",
        Command::Hydrogen(_) => "hydrogen",
        Command::Coulomb(_) => "coulomb",
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let result = match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Hydrogen(a) => cmd_hydrogen(a),
        Command::Coulomb(a) => cmd_coulomb(a),
    };
    let (mut records, code) = match result {
        Ok(outcome) => {
            let code = if outcome.invariant_failed { EXIT_INVARIANT } else { 0 };
            (outcome.records, code)
        }
        Err(err) => {
            eprintln!("greenfn: {err}");
            (vec![OutputRecord::failed(command_name(&cli.command), &err)], exit_code(&err) as u8)
        }
    };
    if cli.timing {
        let elapsed = start.elapsed().as_secs_f64();
        for r in &mut records {
            r.metadata.insert("elapsed_seconds".into(), poisson_green::report::real(elapsed));
        }
    }
    if let Err(e) = emit(&render(&records, cli.format.into()), &cli.out) {
        eprintln!("greenfn: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
