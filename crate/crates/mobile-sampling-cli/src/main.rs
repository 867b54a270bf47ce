//! Batch front-end for the mobile-sampling library.
//!
//! Every subcommand except `selftest` reads one TOML experiment
//! configuration, runs a single seeded computation, prints a `key = value`
//! report to stdout, and (with `--out`) writes the same report plus CSV
//! tables stamped with the seed and a hash of the raw config bytes. Runs are
//! bit-reproducible: same binary, config, and seed give byte-identical
//! output at any `--threads` setting.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mobile_sampling::bandlimited::{BandlimitedFunction, SliceFunction};
use mobile_sampling::certify::{
    certify, sampling_ratio, sinc_lattice_example, spectrum_label, surface_label, Verdict,
};
use mobile_sampling::config::{BudgetsConfig, ExperimentConfig};
use mobile_sampling::convex::ConvexBody;
use mobile_sampling::crofton::{crofton_area, LineCount};
use mobile_sampling::error::Error;
use mobile_sampling::geometry::{certification_constant, Window};
use mobile_sampling::nodal::{jensen_bound_check, ronkin_bound_check};
use mobile_sampling::quadrature::SphereQuadrature;
use mobile_sampling::random::{sample_direction, stream};
use mobile_sampling::remez::{
    log_integral_bound_check, minimal_passing_constant, remez_check, sublevel_decay_check,
    sublevel_measure, IntervalUnion, DEFAULT_REMEZ_CONSTANT,
};
use mobile_sampling::report::{
    certification_text, config_hash, format_float, key_value_block, ratio_text, sinc_lattice_text,
    Csv,
};
use mobile_sampling::surface::{check_phi0_floor, FloorStatus, SurfaceSet};

type Result<T> = std::result::Result<T, Error>;

#[derive(Parser)]
#[command(
    name = "mobile-sampling",
    version,
    about = "Certification and diagnostics for mobile sampling surfaces",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Experiment configuration (TOML); required by everything but `selftest`.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for the text report and CSV tables (created if missing).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Overrides the seed from the configuration file.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Worker threads. Chunked reductions make the output identical at any
    /// setting; the default avoids oversubscribing batch machines.
    #[arg(long, global = true, default_value_t = 1, value_name = "N")]
    threads: usize,

    /// Multiplies the Monte Carlo budgets (lines, centers, corpus, samples).
    #[arg(long, global = true, default_value_t = 1.0, value_name = "FACTOR")]
    budget_scale: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Mean width of the configured spectrum body, with a refinement bound.
    MeanWidth,
    /// Lower surface density of the configured surface over a radius grid.
    Density,
    /// Small-ball regularity profile with the phi(0) >= 1 floor check.
    PhiProfile,
    /// Density-versus-threshold certification; exits 2 unless CERTIFIED.
    Certify,
    /// Line-integral estimate of the surface area inside a ball.
    Crofton,
    /// Nodal-average bound check for a synthesized band-limited function.
    Ronkin,
    /// Zero-count bound checks along random slices of one function.
    Jensen,
    /// Sup recovery, sublevel decay, and log-integral checks on a slice.
    Remez,
    /// Windowed norm ratios over a corpus of synthesized functions.
    SamplingRatio,
    /// Worked example: half-spaced axis hyperplanes against the unit cube.
    #[command(alias = "section5")]
    SincLattice,
    /// Fast closed-form self-checks; needs no configuration file.
    Selftest,
}

impl Command {
    /// Base name for files written under `--out`.
    fn slug(&self) -> &'static str {
        match self {
            Command::MeanWidth => "mean-width",
            Command::Density => "density",
            Command::PhiProfile => "phi-profile",
            Command::Certify => "certify",
            Command::Crofton => "crofton",
            Command::Ronkin => "ronkin",
            Command::Jensen => "jensen",
            Command::Remez => "remez",
            Command::SamplingRatio => "sampling-ratio",
            Command::SincLattice => "sinc-lattice",
            Command::Selftest => "selftest",
        }
    }
}

/// Everything a subcommand needs: the parsed config, the effective seed,
/// scaled budgets, the config-byte hash, and output plumbing.
struct Context {
    config: ExperimentConfig,
    seed: u64,
    budgets: BudgetsConfig,
    hash: String,
    out: Option<PathBuf>,
    base_dir: PathBuf,
    slug: &'static str,
}

impl Context {
    fn stamp(&self) -> Vec<(&'static str, String)> {
        vec![("seed", self.seed.to_string()), ("config", self.hash.clone())]
    }

    fn surface(&self) -> Result<SurfaceSet> {
        self.config.build_surface(&self.base_dir)
    }

    fn spectrum(&self) -> Result<ConvexBody> {
        self.config.build_spectrum()
    }

    /// Evaluation window: `params.window_lo/hi` when given, otherwise the
    /// centered cube of half-side `budgets.window_half`.
    fn window(&self, dim: usize) -> Result<Window> {
        match (&self.config.params.window_lo, &self.config.params.window_hi) {
            (Some(lo), Some(hi)) => Window::new(lo.clone(), hi.clone()),
            (None, None) => Window::centered_cube(dim, self.budgets.window_half),
            _ => Err(Error::Config(
                "window_lo and window_hi must be given together".into(),
            )),
        }
    }

    fn csv(&self, columns: &[&str]) -> Csv {
        Csv::new(columns, self.seed, &self.hash)
    }

    fn write_out(&self, file_name: &str, contents: &str) -> Result<()> {
        if let Some(dir) = &self.out {
            std::fs::create_dir_all(dir)
                .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
            let path = dir.join(file_name);
            std::fs::write(&path, contents)
                .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
        }
        Ok(())
    }

    /// Prints the report and mirrors it to `<slug>.txt` under `--out`.
    fn emit_report(&self, text: &str) -> Result<()> {
        print!("{text}");
        self.write_out(&format!("{}.txt", self.slug), text)
    }

    /// Writes `<name>.csv` under `--out`; a no-op without `--out`.
    fn emit_csv(&self, name: &str, csv: &Csv) -> Result<()> {
        self.write_out(&format!("{name}.csv"), &csv.render())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return match kind {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if cli.threads == 0 {
        return Err(Error::InvalidParameter("--threads must be at least 1".into()));
    }
    if !(cli.budget_scale > 0.0) || !cli.budget_scale.is_finite() {
        return Err(Error::InvalidParameter(
            "--budget-scale must be positive and finite".into(),
        ));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| Error::InvalidParameter(format!("cannot size the thread pool: {e}")))?;

    if matches!(cli.command, Command::Selftest) {
        return selftest(cli.out.as_deref());
    }

    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("this subcommand needs --config <PATH>".into()))?;
    let raw = std::fs::read(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let hash = config_hash(&raw);
    let text = String::from_utf8(raw)
        .map_err(|_| Error::Config(format!("{} is not UTF-8", path.display())))?;
    let config = ExperimentConfig::from_toml(&text)?;
    let ctx = Context {
        seed: cli.seed.unwrap_or(config.seed),
        budgets: config.budgets.clone().scaled(cli.budget_scale),
        hash,
        out: cli.out.clone(),
        base_dir: path.parent().unwrap_or(Path::new(".")).to_path_buf(),
        slug: cli.command.slug(),
        config,
    };

    match cli.command {
        Command::MeanWidth => mean_width_cmd(&ctx),
        Command::Density => density_cmd(&ctx),
        Command::PhiProfile => phi_profile_cmd(&ctx),
        Command::Certify => certify_cmd(&ctx),
        Command::Crofton => crofton_cmd(&ctx),
        Command::Ronkin => ronkin_cmd(&ctx),
        Command::Jensen => jensen_cmd(&ctx),
        Command::Remez => remez_cmd(&ctx),
        Command::SamplingRatio => sampling_ratio_cmd(&ctx),
        Command::SincLattice => sinc_lattice_cmd(&ctx),
        Command::Selftest => unreachable!("handled before config loading"),
    }
}

fn quadrature_cap(dim: usize) -> usize {
    match dim {
        2 => 1024,
        3 => 64,
        _ => 8,
    }
}

fn mean_width_cmd(ctx: &Context) -> Result<ExitCode> {
    let spectrum = ctx.spectrum()?;
    let dim = spectrum.dim();
    let base_level = if ctx.budgets.quadrature_level == 0 {
        SphereQuadrature::default_for(dim)?.level()
    } else {
        ctx.budgets.quadrature_level
    };
    let coarse = spectrum.mean_width(&SphereQuadrature::build(dim, base_level)?)?;
    let refined_level = (2 * base_level).min(quadrature_cap(dim)).max(base_level);
    let width = spectrum.mean_width(&SphereQuadrature::build(dim, refined_level)?)?;
    let uncertainty = (width - coarse).abs() + 1e-9;

    let mut pairs = ctx.stamp();
    pairs.push(("spectrum", spectrum_label(&spectrum)));
    pairs.push(("dimension", dim.to_string()));
    pairs.push(("quadrature_level", refined_level.to_string()));
    pairs.push(("mean_width", format_float(width)));
    pairs.push(("uncertainty", format_float(uncertainty)));
    ctx.emit_report(&key_value_block(&pairs))?;
    Ok(ExitCode::SUCCESS)
}

fn density_cmd(ctx: &Context) -> Result<ExitCode> {
    let surface = ctx.surface()?;
    let window = Window::centered_cube(surface.dim(), ctx.budgets.window_half)?;
    let report = surface.surface_density(
        &ctx.budgets.density_radii,
        &window,
        ctx.budgets.density_centers,
        ctx.seed,
    )?;

    let mut pairs = ctx.stamp();
    pairs.push(("surface", surface_label(&surface)));
    pairs.push(("density", format_float(report.density)));
    pairs.push(("uncertainty", format_float(report.uncertainty)));
    pairs.push(("centers_per_radius", report.budget.to_string()));
    pairs.push(("note", report.note.clone()));
    ctx.emit_report(&key_value_block(&pairs))?;

    let mut csv = ctx.csv(&["radius", "value"]);
    for (r, v) in report.radii.iter().zip(&report.values) {
        csv.push_floats(&[*r, *v]);
    }
    ctx.emit_csv("density", &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn phi_profile_cmd(ctx: &Context) -> Result<ExitCode> {
    let surface = ctx.surface()?;
    let window = Window::centered_cube(surface.dim(), ctx.budgets.window_half)?;
    let profile = surface.regularity_profile(
        &ctx.budgets.profile_radii,
        &window,
        ctx.budgets.profile_centers,
        ctx.seed,
    )?;
    let positive = surface.has_positive_measure(&window)?;
    let check = check_phi0_floor(&profile, positive);
    let floor = match check.status {
        FloorStatus::Pass => "pass".to_string(),
        FloorStatus::Fail => "fail".to_string(),
        FloorStatus::Skipped => "skipped (no positive-measure hypothesis)".to_string(),
    };

    let mut pairs = ctx.stamp();
    pairs.push(("surface", surface_label(&surface)));
    pairs.push(("phi0", format_float(profile.phi0)));
    pairs.push(("floor_check", floor));
    pairs.push(("floor_tolerance", format_float(check.tolerance)));
    pairs.push(("centers_per_radius", profile.budget.to_string()));
    ctx.emit_report(&key_value_block(&pairs))?;

    let mut csv = ctx.csv(&["radius", "phi"]);
    for (r, v) in profile.radii.iter().zip(&profile.values) {
        csv.push_floats(&[*r, *v]);
    }
    ctx.emit_csv("phi-profile", &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn certify_cmd(ctx: &Context) -> Result<ExitCode> {
    let surface = ctx.surface()?;
    let spectrum = ctx.spectrum()?;
    let report = certify(&surface, &spectrum, &ctx.budgets.certify_budgets(), ctx.seed)?;

    let mut text = key_value_block(&ctx.stamp());
    text.push_str(&certification_text(&report));
    ctx.emit_report(&text)?;
    Ok(if report.verdict == Verdict::Certified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn crofton_cmd(ctx: &Context) -> Result<ExitCode> {
    let surface = ctx.surface()?;
    let dim = surface.dim();
    let radius = ctx.config.params.radius.unwrap_or(1.0);
    // Dimension errors cannot occur inside the counter (the line sampler
    // matches the surface dimension); any residual failure means the line
    // lies inside the surface, which the estimator already discards.
    let estimate = crofton_area(
        |line| {
            surface
                .line_intersection_count(line, radius)
                .unwrap_or(LineCount::Infinite)
        },
        dim,
        radius,
        ctx.budgets.lines,
        ctx.seed,
    )?;

    let mut pairs = ctx.stamp();
    pairs.push(("surface", surface_label(&surface)));
    pairs.push(("radius", format_float(radius)));
    pairs.push(("area", format_float(estimate.value)));
    pairs.push(("stderr", format_float(estimate.stderr)));
    pairs.push(("lines", estimate.lines.to_string()));
    pairs.push(("discarded", estimate.discarded.to_string()));
    if estimate.discard_warning {
        pairs.push((
            "note",
            "more than 0.1% of lines lie inside the surface; the estimate is unreliable".into(),
        ));
    }
    ctx.emit_report(&key_value_block(&pairs))?;
    Ok(ExitCode::SUCCESS)
}

fn ronkin_cmd(ctx: &Context) -> Result<ExitCode> {
    let spectrum = ctx.spectrum()?;
    let terms = ctx.config.params.terms.unwrap_or(12);
    let big_r = ctx.config.params.big_r.unwrap_or(10.0);
    let f = BandlimitedFunction::synthesize(&spectrum, terms, true, true, ctx.seed)?;
    let check = ronkin_bound_check(&f, big_r, ctx.budgets.lines, ctx.budgets.samples, ctx.seed)?;

    let mut pairs = ctx.stamp();
    pairs.push(("spectrum", spectrum_label(&spectrum)));
    pairs.push(("terms", terms.to_string()));
    pairs.push(("radius", format_float(big_r)));
    pairs.push(("nodal_average", format_float(check.lhs)));
    pairs.push(("bound_constant", format_float(check.rhs_constant)));
    pairs.push(("log_term", format_float(check.log_term.value)));
    pairs.push(("bound_total", format_float(check.rhs)));
    pairs.push(("combined_stderr", format_float(check.combined_stderr)));
    pairs.push(("lines", check.ronkin.lines.to_string()));
    pairs.push(("pass", check.pass.to_string()));
    ctx.emit_report(&key_value_block(&pairs))?;

    let mut csv = ctx.csv(&["radius", "area", "stderr"]);
    for ((r, a), s) in check
        .ronkin
        .radii
        .iter()
        .zip(&check.ronkin.areas)
        .zip(&check.ronkin.area_stderrs)
    {
        csv.push_floats(&[*r, *a, *s]);
    }
    ctx.emit_csv("ronkin", &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn jensen_cmd(ctx: &Context) -> Result<ExitCode> {
    let spectrum = ctx.spectrum()?;
    let dim = spectrum.dim();
    let terms = ctx.config.params.terms.unwrap_or(12);
    let radius = ctx.config.params.radius.unwrap_or(5.0);
    let trials = ctx.budgets.corpus;
    // Anchoring keeps |f(0)| bounded away from zero, so every slice through
    // the origin has a well-defined center term.
    let f = BandlimitedFunction::synthesize(&spectrum, terms, true, true, ctx.seed)?;

    let mut violations = 0u64;
    let mut zero_total = 0u64;
    let mut csv = ctx.csv(&["index", "zero_count", "lhs", "rhs"]);
    for i in 0..trials {
        let mut rng = stream(ctx.seed, 0x4a00 + i as u64);
        let theta = sample_direction(dim, &mut rng);
        let report = jensen_bound_check(&f, &vec![0.0; dim], &theta, radius)?;
        if !report.pass {
            violations += 1;
        }
        zero_total += report.zero_count;
        csv.push(vec![
            i.to_string(),
            report.zero_count.to_string(),
            format_float(report.lhs),
            format_float(report.rhs),
        ]);
    }

    let mut pairs = ctx.stamp();
    pairs.push(("spectrum", spectrum_label(&spectrum)));
    pairs.push(("terms", terms.to_string()));
    pairs.push(("radius", format_float(radius)));
    pairs.push(("slices", trials.to_string()));
    pairs.push(("violations", violations.to_string()));
    if trials > 0 {
        pairs.push(("mean_zero_count", format_float(zero_total as f64 / trials as f64)));
    }
    ctx.emit_report(&key_value_block(&pairs))?;
    ctx.emit_csv("jensen", &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn remez_cmd(ctx: &Context) -> Result<ExitCode> {
    let spectrum = ctx.spectrum()?;
    let dim = spectrum.dim();
    let terms = ctx.config.params.terms.unwrap_or(12);
    let big_r = ctx.config.params.big_r.unwrap_or(4.0);
    let constant = ctx.config.params.constant.unwrap_or(DEFAULT_REMEZ_CONSTANT);
    let f = BandlimitedFunction::synthesize(&spectrum, terms, true, true, ctx.seed)?;
    let mut rng = stream(ctx.seed, 0x7e00);
    let theta = sample_direction(dim, &mut rng);
    let g = f.slice(&vec![0.0; dim], &theta)?;

    let f_set = IntervalUnion::new(vec![(0.2 * big_r, 0.3 * big_r)])?;
    let recovery = remez_check(&g, big_r, &f_set, constant)?;
    let minimal = minimal_passing_constant(&g, big_r, &f_set)?;
    let decay = sublevel_decay_check(&g, big_r, constant)?;
    let log_bound = log_integral_bound_check(&g, big_r, constant)?;

    let mut pairs = ctx.stamp();
    pairs.push(("spectrum", spectrum_label(&spectrum)));
    pairs.push(("terms", terms.to_string()));
    pairs.push(("radius", format_float(big_r)));
    pairs.push(("constant", format_float(constant)));
    pairs.push(("spectral_radius", format_float(recovery.sigma)));
    pairs.push(("sup_all", format_float(recovery.sup_all)));
    pairs.push(("sup_on_f", format_float(recovery.sup_on_f)));
    pairs.push(("set_measure", format_float(recovery.set_measure)));
    pairs.push(("recovery_pass", recovery.pass.to_string()));
    pairs.push(("final_form_pass", recovery.variant_pass.to_string()));
    pairs.push((
        "minimal_constant",
        minimal.map_or_else(|| "none".to_string(), format_float),
    ));
    pairs.push(("decay_pass", decay.pass.to_string()));
    if let Some(slope) = decay.fitted_exponent {
        pairs.push(("decay_fitted_exponent", format_float(slope)));
    }
    pairs.push(("log_integral", format_float(log_bound.integral)));
    pairs.push(("log_integral_direct", format_float(log_bound.integral_direct)));
    pairs.push(("log_integral_bound", format_float(log_bound.bound)));
    pairs.push(("log_integral_pass", log_bound.pass.to_string()));
    ctx.emit_report(&key_value_block(&pairs))?;

    let mut csv = ctx.csv(&["epsilon", "measure", "bound"]);
    for ((e, m), b) in decay.epsilons.iter().zip(&decay.measures).zip(&decay.bounds) {
        csv.push_floats(&[*e, *m, *b]);
    }
    ctx.emit_csv("sublevel", &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn sampling_ratio_cmd(ctx: &Context) -> Result<ExitCode> {
    let surface = ctx.surface()?;
    let spectrum = ctx.spectrum()?;
    let p = ctx
        .config
        .params
        .p
        .map(|v| v.value())
        .unwrap_or(f64::INFINITY);
    let window = ctx.window(surface.dim())?;
    let report = sampling_ratio(&surface, &spectrum, p, &window, ctx.budgets.corpus, ctx.seed)?;

    let mut text = key_value_block(&ctx.stamp());
    text.push_str(&ratio_text(&report));
    ctx.emit_report(&text)?;

    let mut csv = ctx.csv(&["index", "ratio"]);
    for (i, r) in report.ratios.iter().enumerate() {
        csv.push(vec![i.to_string(), format_float(*r)]);
    }
    ctx.emit_csv("ratios", &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn sinc_lattice_cmd(ctx: &Context) -> Result<ExitCode> {
    let report = sinc_lattice_example(ctx.config.dimension, ctx.seed)?;
    let mut text = key_value_block(&ctx.stamp());
    text.push_str(&sinc_lattice_text(&report));
    ctx.emit_report(&text)?;
    Ok(ExitCode::SUCCESS)
}

/// Closed-form checks that exercise each module in well under a second.
/// Prints one `ok`/`FAILED` line per check; exits 0 only if all pass.
fn selftest(out: Option<&Path>) -> Result<ExitCode> {
    let mut lines: Vec<String> = Vec::new();
    let mut all_ok = true;
    let mut check = |name: &str, passed: bool, detail: String, lines: &mut Vec<String>| {
        if passed {
            lines.push(format!("ok {name} ({detail})"));
        } else {
            lines.push(format!("FAILED {name}: {detail}"));
        }
        all_ok &= passed;
    };

    let a2 = certification_constant(2)?;
    check(
        "dimensional_constant",
        (a2 - 0.75 * std::f64::consts::PI).abs() < 1e-12,
        format!("A_2 = {a2}"),
        &mut lines,
    );

    let ball = ConvexBody::ball(3, 1.5)?;
    let w_ball = ball.mean_width(&SphereQuadrature::default_for(3)?)?;
    check(
        "ball_mean_width",
        (w_ball - 3.0).abs() < 1e-8,
        format!("W = {w_ball}, expected 2r = 3"),
        &mut lines,
    );

    let cube = ConvexBody::cube(3, 1.0)?;
    let w_cube = cube.mean_width(&SphereQuadrature::default_for(3)?)?;
    check(
        "cube_mean_width",
        (w_cube - 3.0).abs() < 1e-5,
        format!("W = {w_cube}, expected 3"),
        &mut lines,
    );

    let g = SliceFunction::cosine(1.0);
    let eps = (std::f64::consts::PI / 12.0).sin();
    let m = sublevel_measure(&g, 1.0, eps)?;
    check(
        "cosine_sublevel",
        (m - 1.0 / 6.0).abs() < 1e-9,
        format!("measure = {m}, expected 1/6"),
        &mut lines,
    );

    let f_set = IntervalUnion::new(vec![(0.0, 0.9)])?;
    let rec = remez_check(&g, 1.0, &f_set, 1.0)?;
    check(
        "recovery_trivial_set",
        rec.pass && (rec.sup_on_f - 1.0).abs() < 1e-9,
        format!("sup_on_f = {}, pass = {}", rec.sup_on_f, rec.pass),
        &mut lines,
    );

    let li = log_integral_bound_check(&g, 1.0, DEFAULT_REMEZ_CONSTANT)?;
    let ln2 = std::f64::consts::LN_2;
    check(
        "cosine_log_integral",
        (li.integral_direct - ln2).abs() < 0.02 * ln2 && li.pass,
        format!("integral = {}, expected log 2 = {ln2}", li.integral_direct),
        &mut lines,
    );

    let wave = BandlimitedFunction::real_cosine(ConvexBody::ball(2, 1.0)?, vec![1.0, 0.0])?;
    let jensen = jensen_bound_check(&wave, &[0.0, 0.0], &[1.0, 0.0], 2.0)?;
    check(
        "cosine_zero_count",
        jensen.zero_count == 8 && jensen.pass,
        format!("zeros = {}, pass = {}", jensen.zero_count, jensen.pass),
        &mut lines,
    );

    let circle = SurfaceSet::sphere_shell(vec![0.0, 0.0], 1.0)?;
    let est = crofton_area(
        |line| circle.line_intersection_count(line, 2.0).unwrap_or(LineCount::Infinite),
        2,
        2.0,
        4096,
        7,
    )?;
    let tau = std::f64::consts::TAU;
    check(
        "circle_line_integral",
        (est.value - tau).abs() < 0.5 && est.discarded == 0,
        format!("area = {} +- {}, expected 2 pi = {tau}", est.value, est.stderr),
        &mut lines,
    );

    let good = "version = \"1\"\nseed = 1\ndimension = 2\n\n[spectrum]\nkind = \"ball\"\nradius = 1.0\n";
    let parsed = ExperimentConfig::from_toml(good).and_then(|c| c.build_spectrum());
    let bad = good.replacen("version = \"1\"", "version = \"0\"", 1);
    let rejected = ExperimentConfig::from_toml(&bad);
    check(
        "config_schema",
        parsed.is_ok() && rejected.is_err(),
        format!("valid parse ok = {}, stale version rejected = {}", parsed.is_ok(), rejected.is_err()),
        &mut lines,
    );

    let mut text = lines.join("\n");
    text.push('\n');
    text.push_str(&format!("checks = {}\n", lines.len()));
    text.push_str(&format!("selftest = {}\n", if all_ok { "pass" } else { "fail" }));
    print!("{text}");
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
        std::fs::write(dir.join("selftest.txt"), &text)
            .map_err(|e| Error::Config(format!("cannot write selftest.txt: {e}")))?;
    }
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
