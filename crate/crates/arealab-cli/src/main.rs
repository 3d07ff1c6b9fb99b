//! Experiment runner: every library module as a subcommand, emitting
//! deterministic CSV tables with `#`-prefixed metadata lines.
//!
//! Exit codes: 0 success, 1 computation-level failure (e.g. required
//! convergence not reached, failed verification), 2 usage errors.

use anyhow::{anyhow, Context};
use arealab::catalog::parse_descriptor;
use arealab::geocze::{geocze_area, geocze_sum, LadderParams};
use arealab::grid::GridField;
use arealab::lantern::{lantern_limit, LanternPath, PathKind};
use arealab::mollify::{default_window_panels, integral_mean, l1_norm, DEFAULT_WINDOW_ORDER};
use arealab::quasilinear::{interpolate_quasilinear, sup_distance};
use arealab::steiner::{equality_flatness_residual, steiner_gap_quasilinear};
use arealab::tonelli::{
    default_fd_step, essential_derivative_gap, singular_mass_x, tonelli_lower_bound, v_t,
    DefectedFn1D, GapParams, VariationParams,
};
use arealab::verify::run_suite;
use arealab::{Regularity, ScalarField, Subdivision};
use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "arealab", version, about = "Surface-area experiments over rectangles")]
struct Cli {
    /// Worker threads for data-parallel sums (1 keeps runs fully serial).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    /// Write CSV here instead of standard output.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Surface-area refinement ladder for a field.
    Area(AreaArgs),
    /// Inscribed-cylinder polyhedron areas along a refinement path.
    Lantern(LanternArgs),
    /// Sectional variations, Tonelli variation and the gradient integral.
    Tonelli(TonelliArgs),
    /// Integral-mean experiments: uniform/L1 convergence and areas.
    Mollify(MollifyArgs),
    /// Midpoint-inequality gaps for a pair of fields.
    Steiner(SteinerArgs),
    /// One-variable generalized variation and essential derivative gap.
    Onevar(OnevarArgs),
    /// Run the named verification suite (or all of them).
    Verify(VerifyArgs),
}

#[derive(Args)]
struct AreaArgs {
    /// Field descriptor, e.g. plane(1,2,0), cantor(exact), grid(path.txt).
    #[arg(long)]
    field: String,
    #[arg(long, default_value_t = 8)]
    levels: u32,
    #[arg(long, default_value_t = 256)]
    panels: usize,
    #[arg(long, default_value_t = 8)]
    order: usize,
    /// Relative convergence tolerance between successive levels.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Restrict the field to the centered half-size sub-square first.
    #[arg(long)]
    subsquare: bool,
    /// Exit with status 1 unless the ladder converges.
    #[arg(long)]
    require_converged: bool,
}

#[derive(Args)]
struct LanternArgs {
    /// One of: diagonal, n-first, m-first, parabolic.
    #[arg(long)]
    path: String,
    #[arg(long, default_value_t = 9)]
    steps: u32,
    /// Coefficient for the parabolic path.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

#[derive(Args)]
struct TonelliArgs {
    #[arg(long)]
    field: String,
    /// Dyadic depth of the sectional partitions.
    #[arg(long, default_value_t = 12)]
    levels: u32,
    #[arg(long, default_value_t = 16)]
    panels: usize,
    #[arg(long, default_value_t = 8)]
    order: usize,
    /// Finite-difference step for the gradient integral ("auto" picks by
    /// regularity: 1e-5 for C1 fields, 1e-9 for rougher ones).
    #[arg(long, default_value = "auto")]
    fd: String,
    /// Also report the x-variation measure decomposition on the full domain.
    #[arg(long)]
    singular: bool,
}

#[derive(Args)]
struct MollifyArgs {
    #[arg(long)]
    field: String,
    /// Comma-separated radii, e.g. 0.1,0.05,0.025.
    #[arg(long, default_value = "0.1,0.05,0.025,0.0125")]
    h: String,
    /// Window quadrature panels per axis (0 = pick by regularity).
    #[arg(long, default_value_t = 0)]
    panels: usize,
    #[arg(long, default_value_t = DEFAULT_WINDOW_ORDER)]
    order: usize,
    /// Precompute f_h on a (2^k+1)² grid for the ladder (0 = direct).
    #[arg(long, default_value_t = 0)]
    grid: u32,
    /// Ladder depth for the area estimates.
    #[arg(long, default_value_t = 6)]
    levels: u32,
}

#[derive(Args)]
struct SteinerArgs {
    #[arg(long)]
    f1: String,
    #[arg(long)]
    f2: String,
    /// Dyadic subdivision levels for the per-level gaps.
    #[arg(long, default_value_t = 8)]
    levels: u32,
    #[arg(long, default_value_t = 16)]
    panels: usize,
    #[arg(long, default_value_t = 8)]
    order: usize,
    /// Interpolation level for the quasi-linear gap.
    #[arg(long, default_value_t = 5)]
    k: u32,
}

#[derive(Args)]
struct OnevarArgs {
    /// One of: x, parabola, step, cantor.
    #[arg(long, default_value = "cantor")]
    base: String,
    /// Number of seeded single-point alterations.
    #[arg(long, default_value_t = 5)]
    defects: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 14)]
    levels: u32,
    #[arg(long, default_value_t = 16)]
    panels: usize,
    #[arg(long, default_value_t = 8)]
    order: usize,
    #[arg(long, default_value_t = 1e-9)]
    fd: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name or "all".
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(2);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("error: failed to configure thread pool: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            // anything that smells like bad user input is a usage error
            ExitCode::from(if e.downcast_ref::<arealab::Error>().is_some() {
                2
            } else {
                1
            })
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let (csv, code) = match &cli.command {
        Command::Area(args) => cmd_area(args)?,
        Command::Lantern(args) => cmd_lantern(args)?,
        Command::Tonelli(args) => cmd_tonelli(args)?,
        Command::Mollify(args) => cmd_mollify(args)?,
        Command::Steiner(args) => cmd_steiner(args)?,
        Command::Onevar(args) => cmd_onevar(args)?,
        Command::Verify(args) => cmd_verify(args)?,
    };
    match &cli.out {
        Some(path) => std::fs::write(path, csv).with_context(|| format!("writing {path:?}"))?,
        None => print!("{csv}"),
    }
    Ok(code)
}

/// Resolve a descriptor, allowing `grid(path)` to load a grid file.
fn load_field(desc: &str) -> anyhow::Result<ScalarField> {
    let trimmed = desc.trim();
    if let Some(path) = trimmed
        .strip_prefix("grid(")
        .and_then(|rest| rest.strip_suffix(')'))
    {
        let text = std::fs::read_to_string(path.trim()).map_err(|e| {
            arealab::Error::InvalidInput(format!("cannot read grid file `{}`: {e}", path.trim()))
        })?;
        return Ok(GridField::parse(&text)?.to_field());
    }
    Ok(parse_descriptor(trimmed)?)
}

fn cmd_area(args: &AreaArgs) -> anyhow::Result<(String, ExitCode)> {
    let mut field = load_field(&args.field)?;
    if args.subsquare {
        field = field.restrict(field.domain().centered_subsquare())?;
    }
    let params = LadderParams {
        max_level: args.levels,
        panels: args.panels,
        order: args.order,
        rel_tol: args.tol,
    };
    let ladder = geocze_area(&field, &params)?;
    let mut out = String::new();
    writeln!(
        out,
        "# field={} levels={} panels={} order={} tol={}",
        field.name(),
        args.levels,
        args.panels,
        args.order,
        args.tol
    )?;
    out.push_str(&ladder.to_csv());
    let verdict = if ladder.converged {
        "CONVERGED"
    } else {
        "NOT_CONVERGED"
    };
    writeln!(out, "# verdict={verdict} estimate={}", ladder.estimate)?;
    let code = if args.require_converged && !ladder.converged {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    };
    Ok((out, code))
}

fn cmd_lantern(args: &LanternArgs) -> anyhow::Result<(String, ExitCode)> {
    let kind = match args.path.as_str() {
        "diagonal" => PathKind::Diagonal,
        "n-first" => PathKind::NFirst,
        "m-first" => PathKind::MFirst,
        "parabolic" => PathKind::Parabolic(args.c),
        other => return Err(anyhow!(arealab::Error::InvalidInput(format!(
            "unknown path `{other}` (expected diagonal, n-first, m-first or parabolic)"
        )))),
    };
    let report = lantern_limit(&LanternPath::new(kind, args.steps)?)?;
    let mut out = format!("# path={} steps={} c={}\n", args.path, args.steps, args.c);
    out.push_str(&report.to_csv());
    Ok((out, ExitCode::SUCCESS))
}

fn cmd_tonelli(args: &TonelliArgs) -> anyhow::Result<(String, ExitCode)> {
    let field = load_field(&args.field)?;
    let fd = match args.fd.as_str() {
        "auto" => default_fd_step(&field),
        s => s
            .parse::<f64>()
            .map_err(|_| arealab::Error::InvalidParam(format!("bad fd step `{s}`")))?,
    };
    let params = VariationParams {
        levels: args.levels,
        panels: args.panels,
        order: args.order,
    };
    let report = v_t(&field, &params)?;
    let mut out = String::new();
    writeln!(
        out,
        "# field={} levels={} panels={} order={} fd={fd:e}",
        field.name(),
        args.levels,
        args.panels,
        args.order
    )?;
    out.push_str(&report.to_csv());
    writeln!(out, "# v_t={} divergent={}", report.v_t, report.divergent)?;
    let lb = tonelli_lower_bound(&field, args.panels, args.order, fd)?;
    writeln!(out, "# lower_bound={lb}")?;
    if args.singular {
        let rect = field.domain().to_rect();
        let m = singular_mass_x(&field, &rect, args.levels, args.panels, args.order, fd)?;
        writeln!(
            out,
            "# w_x={} ac_part={} singular_mass={}",
            m.sectional, m.ac_part, m.value
        )?;
    }
    Ok((out, ExitCode::SUCCESS))
}

fn cmd_mollify(args: &MollifyArgs) -> anyhow::Result<(String, ExitCode)> {
    let field = load_field(&args.field)?;
    let radii: Vec<f64> = args
        .h
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .map_err(|_| arealab::Error::InvalidParam(format!("bad radius `{tok}`")))
        })
        .collect::<Result<_, _>>()?;
    let panels = if args.panels == 0 {
        default_window_panels(&field)
    } else {
        args.panels
    };
    let inner = field.domain().centered_subsquare();
    let ladder_params = LadderParams::default().with_max_level(args.levels);
    let base_area = geocze_area(&field, &LadderParams::default().with_max_level(args.levels.max(8)))?;
    let base_l1 = l1_norm(&field, &field.domain().to_rect(), 16, args.order)?;

    let mode = if args.grid == 0 {
        "direct".to_string()
    } else {
        format!("grid(k={})", args.grid)
    };
    let mut out = String::new();
    writeln!(
        out,
        "# field={} panels={panels} order={} mode={mode} area_f={} l1_f={base_l1}",
        field.name(),
        args.order,
        base_area.estimate
    )?;
    out.push_str("h,sup_dist,l1_fh,area_fh\n");
    for &h in &radii {
        let m = integral_mean(&field, h, panels, args.order)?;
        let fh: ScalarField = if args.grid == 0 {
            m.to_field()
        } else {
            m.to_grid_field(args.grid)?.to_field()
        };
        let sup = sup_distance(&fh.restrict(inner)?, &field, 128)?;
        let l1 = l1_norm(&fh, &m.domain().to_rect(), 8, args.order)?;
        let area = geocze_area(&fh.restrict(inner)?, &ladder_params)?;
        writeln!(out, "{h},{sup},{l1},{}", area.estimate)?;
    }
    Ok((out, ExitCode::SUCCESS))
}

fn cmd_steiner(args: &SteinerArgs) -> anyhow::Result<(String, ExitCode)> {
    let f1 = load_field(&args.f1)?;
    let f2 = load_field(&args.f2)?;
    let mid = ScalarField::midpoint(&f1, &f2)?;
    let mut out = String::new();
    writeln!(out, "# f1={} f2={}", f1.name(), f2.name())?;
    out.push_str("level,g1,g2,gmid,gap\n");
    for level in 0..=args.levels {
        let d = Subdivision::dyadic(&f1.domain(), level);
        let g1 = geocze_sum(&f1, &d, args.panels, args.order)?;
        let g2 = geocze_sum(&f2, &d, args.panels, args.order)?;
        let gm = geocze_sum(&mid, &d, args.panels, args.order)?;
        writeln!(out, "{level},{g1},{g2},{gm},{}", 0.5 * (g1 + g2) - gm)?;
    }
    let p1 = interpolate_quasilinear(&f1, args.k)?;
    let p2 = interpolate_quasilinear(&f2, args.k)?;
    writeln!(out, "# ql_gap={}", steiner_gap_quasilinear(&p1, &p2)?)?;
    if f1.regularity() == Regularity::C1 && f2.regularity() == Regularity::C1 {
        let r = equality_flatness_residual(&f1, &f2, 64, 1e-5)?;
        writeln!(out, "# flatness_residual={r}")?;
    }
    Ok((out, ExitCode::SUCCESS))
}

fn cmd_onevar(args: &OnevarArgs) -> anyhow::Result<(String, ExitCode)> {
    use arealab::catalog::cantor_exact;
    let base: Box<dyn Fn(f64) -> f64 + Send + Sync> = match args.base.as_str() {
        "x" => Box::new(|x| x),
        "parabola" => Box::new(|x: f64| x * (1.0 - x)),
        "step" => Box::new(|x: f64| if x < 0.5 { 0.0 } else { 1.0 }),
        "cantor" => Box::new(cantor_exact),
        other => {
            return Err(anyhow!(arealab::Error::InvalidInput(format!(
                "unknown base `{other}` (expected x, parabola, step or cantor)"
            ))))
        }
    };
    // cheap deterministic defect generator (splitmix-style)
    let mut state = args.seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut next = move || {
        state ^= state >> 30;
        state = state.wrapping_mul(0xbf58476d1ce4e5b9);
        state ^= state >> 27;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let defects: Vec<(f64, f64)> = (0..args.defects)
        .map(|_| (0.001 + 0.998 * next(), 20.0 * next() - 10.0))
        .collect();
    let f = DefectedFn1D::new(base, defects)?;
    let params = GapParams {
        levels: args.levels,
        panels: args.panels,
        order: args.order,
        fd_step: args.fd,
    };
    let report = essential_derivative_gap(&f, &params)?;
    let mut out = String::new();
    writeln!(
        out,
        "# base={} defects={} seed={} levels={} fd={:e}",
        args.base, args.defects, args.seed, args.levels, args.fd
    )?;
    out.push_str("quantity,value\n");
    writeln!(out, "generalized_variation,{}", report.variation)?;
    writeln!(out, "derivative_l1,{}", report.derivative_l1)?;
    writeln!(out, "essential_gap,{}", report.gap)?;
    Ok((out, ExitCode::SUCCESS))
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<(String, ExitCode)> {
    let outcomes = run_suite(&args.suite, args.seed)?;
    let mut out = String::new();
    writeln!(out, "# suite={} seed={}", args.suite, args.seed)?;
    let mut failed = 0usize;
    for o in &outcomes {
        writeln!(
            out,
            "{} {} — {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        )?;
        if !o.passed {
            failed += 1;
        }
    }
    writeln!(
        out,
        "# summary: {}/{} checks passed",
        outcomes.len() - failed,
        outcomes.len()
    )?;
    let code = if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    };
    Ok((out, code))
}
