mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use regluing::engine::{
    closed_form_example, init_poly, init_rat, poly_states, rat_states, run_poly, run_rat,
};
use regluing::render::{julia_samples, overlay_curves, palette, render_julia, render_phi_image, Image, Viewport};
use regluing::report::{json_num, Param, RegluingReport, Status};
use regluing::{Exec, ExtComplex, QuadMap, RatParam};

use config::{parse_num, Alpha0Source, Num, RenderKind, RunConfig};

/// `println!` that ignores a closed stdout.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

const EXAMPLE_TOL: f64 = 1e-9;
const EXAMPLE_STAGES: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exit {
    Ok = 0,
    Mismatch = 1,
    Invalid = 2,
    Diverged = 3,
    Unfinished = 4,
    Io = 5,
}

/// A failed command: exit code and message for stderr.
struct Failure(Exit, String);

type Outcome = Result<Exit, Failure>;

fn invalid(msg: impl ToString) -> Failure {
    Failure(Exit::Invalid, msg.to_string())
}

fn io(msg: impl ToString) -> Failure {
    Failure(Exit::Io, msg.to_string())
}

#[derive(Parser)]
#[command(name = "regluing", version, about = "Holomorphic regluing of quadratic maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reglue z^2 - 6 along [-sqrt 3, sqrt 3] and compare with the closed form.
    Example(Common),
    /// Reglue a quadratic polynomial z^2 + c.
    RegluePoly {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        path: PathArgs,
    },
    /// Reglue a rational map (a z^2 - b) / (z^2 - 1).
    ReglueRat {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        path: PathArgs,
    },
    /// Write a PPM picture: the Julia set, Phi_n of Julia samples, or the cut curves.
    Render {
        kind: Option<RenderKind>,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        path: PathArgs,
        #[command(flatten)]
        view: ViewArgs,
    },
    /// Check a regluing path for admissibility and write it out.
    CheckPath {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        path: PathArgs,
        /// Forward-orbit horizon of the admissibility check.
        #[arg(long)]
        horizon: Option<usize>,
    },
}

#[derive(Args, Clone, Default)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_stages: Option<usize>,
    #[arg(long)]
    orbit_len: Option<usize>,
    /// Number of probes on |z| = 5 for the Phi_n convergence estimate.
    #[arg(long)]
    probes: Option<usize>,
    #[arg(long, hide = true)]
    convention: Option<String>,
}

#[derive(Args, Clone, Default)]
struct MapArgs {
    /// Polynomial parameter, `re` or `re,im`.
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    c: Option<Num>,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    a: Option<Num>,
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    b: Option<Num>,
}

#[derive(Args, Clone, Default)]
struct PathArgs {
    /// Regluing path in the curve text format.
    #[arg(long, conflicts_with_all = ["segment", "rays"])]
    alpha0_file: Option<PathBuf>,
    /// Symmetric segment [-e, e] given by its endpoint e.
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true, conflicts_with = "rays")]
    segment: Option<Num>,
    /// Samples per half of the segment.
    #[arg(long, default_value_t = 16)]
    segment_samples: usize,
    /// Two external angles in turns, `t1,t2`.
    #[arg(long, value_parser = parse_num)]
    rays: Option<Num>,
    /// Potential the rays are traced down from.
    #[arg(long, default_value_t = 10.0)]
    rho: f64,
}

#[derive(Args, Clone, Default)]
struct ViewArgs {
    #[arg(long, value_parser = parse_num, allow_hyphen_values = true)]
    center: Option<Num>,
    #[arg(long)]
    half_width: Option<f64>,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Stage shown by phi and cuts renders.
    #[arg(long)]
    stage: Option<usize>,
    /// Julia samples pushed through Phi_n.
    #[arg(long)]
    samples: Option<usize>,
}

impl Common {
    fn flags(&self) -> RunConfig {
        RunConfig {
            out: self.out.clone(),
            tol: self.tol,
            max_stages: self.max_stages,
            orbit_len: self.orbit_len,
            probes: self.probes,
            convention: self.convention.clone(),
            ..Default::default()
        }
    }
}

/// Defaults, then the config file, then flags.
fn resolve(defaults: RunConfig, common: &Common, extra: RunConfig) -> Result<RunConfig, Failure> {
    let file = match &common.config {
        Some(path) => RunConfig::load(path).map_err(invalid)?,
        None => RunConfig::default(),
    };
    let cfg = defaults.overridden_by(&file).overridden_by(&common.flags()).overridden_by(&extra);
    cfg.validate().map_err(invalid)?;
    Ok(cfg)
}

fn extra_flags(map: &MapArgs, path: &PathArgs) -> RunConfig {
    let alpha0 = if let Some(p) = &path.alpha0_file {
        Some(Alpha0Source::File { path: p.clone() })
    } else if let Some(e) = path.segment {
        Some(Alpha0Source::Segment {
            endpoint: e,
            samples: path.segment_samples,
        })
    } else {
        path.rays.map(|r| {
            let t = r.to_complex();
            Alpha0Source::Rays {
                angles: [t.re, t.im],
                rho: path.rho,
            }
        })
    };
    RunConfig {
        c: map.c,
        a: map.a,
        b: map.b,
        alpha0,
        ..Default::default()
    }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, Failure> {
    std::fs::create_dir_all(dir).map_err(|e| io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Writes the report into the output directory, or prints it.
fn emit_report(cfg: &RunConfig, report: &RegluingReport) -> Result<(), Failure> {
    let json = report.to_json_with(&[("config", cfg.to_json())]);
    match &cfg.out {
        Some(dir) => {
            let path = write_file(dir, "report.json", json.as_bytes())?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            use std::io::Write as _;
            let _ = std::io::stdout().lock().write_all(json.as_bytes());
        }
    }
    Ok(())
}

fn rat_param(cfg: &RunConfig) -> Result<RatParam, Failure> {
    let (a, b) = match (cfg.a, cfg.b) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(invalid("rational runs need both a and b")),
    };
    RatParam::new(ExtComplex::Finite(a.to_complex()), ExtComplex::Finite(b.to_complex())).map_err(invalid)
}

fn status_exit(status: Status) -> Exit {
    match status {
        Status::Converged => Exit::Ok,
        Status::Diverged => Exit::Diverged,
        Status::Ambiguous | Status::BudgetExhausted => Exit::Unfinished,
    }
}

fn summarize(report: &RegluingReport) {
    eprintln!("status: {}", report.status.as_str());
    if let Some((stage, msg)) = &report.failure {
        eprintln!("stopped at stage {stage}: {msg}");
    }
}

fn example_defaults() -> RunConfig {
    RunConfig {
        c: Some(Num::Real(-6.0)),
        alpha0: Some(Alpha0Source::Segment {
            endpoint: Num::Real(3f64.sqrt()),
            samples: 16,
        }),
        tol: Some(1e-10),
        max_stages: Some(40),
        ..Default::default()
    }
}

fn cmd_example(common: &Common) -> Outcome {
    let cfg = resolve(example_defaults(), common, RunConfig::default())?;
    let (c, alpha0) = (cfg.poly_param().map_err(invalid)?, cfg.alpha0().map_err(invalid)?);
    let report = run_poly(c, alpha0, &cfg.engine().map_err(invalid)?).map_err(invalid)?;
    say!("{:>3}  {:>24}  {:>24}  {:>10}", "n", "c_n", "closed form", "error");
    let mut worst = 0.0f64;
    for (n, c_n) in report.poly_params().into_iter().enumerate() {
        let expected = closed_form_example(n as u32);
        let err = match (c_n.finite(), expected.finite()) {
            (Some(x), Some(y)) => (x - y).norm(),
            _ => f64::INFINITY,
        };
        if (1..=EXAMPLE_STAGES).contains(&n) {
            worst = worst.max(err);
        }
        let show = |z: ExtComplex| z.finite().map_or("inf".to_string(), |z| format!("{:.17}", z.re));
        say!("{n:>3}  {:>24}  {:>24}  {err:>10.3e}", show(c_n), show(expected));
    }
    summarize(&report);
    if cfg.out.is_some() {
        emit_report(&cfg, &report)?;
    }
    let limit_ok = match (report.status, report.limit) {
        (Status::Converged, Some(Param::Poly(z))) => {
            let err = z.finite().map_or(f64::INFINITY, |z| (z + 2.0).norm());
            say!("limit error |c_inf + 2| = {}", json_num(err));
            err < EXAMPLE_TOL
        }
        (Status::Converged, _) => false,
        (Status::Ambiguous, _) => return Ok(Exit::Invalid),
        (Status::Diverged, _) => false,
        (Status::BudgetExhausted, _) => {
            say!("budget exhausted before convergence; limit not checked");
            true
        }
    };
    if worst < EXAMPLE_TOL && limit_ok {
        say!("example reproduced (max error {worst:.3e})");
        Ok(Exit::Ok)
    } else {
        say!("example MISMATCH (max error {worst:.3e})");
        Ok(Exit::Mismatch)
    }
}

fn cmd_reglue(common: &Common, extra: RunConfig, rational: bool) -> Outcome {
    let cfg = resolve(RunConfig::default(), common, extra)?;
    let engine = cfg.engine().map_err(invalid)?;
    let alpha0 = cfg.alpha0().map_err(invalid)?;
    let report = if rational {
        run_rat(rat_param(&cfg)?, alpha0, &engine)
    } else {
        run_poly(cfg.poly_param().map_err(invalid)?, alpha0, &engine)
    }
    .map_err(invalid)?;
    summarize(&report);
    emit_report(&cfg, &report)?;
    Ok(status_exit(report.status))
}

fn viewport(cfg: &RunConfig) -> Result<Viewport, Failure> {
    Viewport::new(
        cfg.center.map_or(Complex64::new(0.0, 0.0), Num::to_complex),
        cfg.half_width.unwrap_or(4.0),
        cfg.width.unwrap_or(800),
        cfg.height.unwrap_or(600),
    )
    .map_err(invalid)
}

fn cmd_render(kind: Option<RenderKind>, common: &Common, extra: RunConfig) -> Outcome {
    let cfg = resolve(RunConfig::default(), common, extra)?;
    let kind = cfg.render.or(kind).unwrap_or(RenderKind::Julia);
    let view = viewport(&cfg)?;
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
    let exec = Exec::default();
    let stage = cfg.stage.unwrap_or(8);
    let rational = cfg.c.is_none() && cfg.a.is_some();
    match kind {
        RenderKind::Julia => {
            let map = if rational {
                QuadMap::Rat(rat_param(&cfg)?)
            } else {
                QuadMap::Poly(cfg.poly_param().map_err(invalid)?)
            };
            let img = render_julia(&map, &view, cfg.max_iter.unwrap_or(256), exec);
            let path = write_file(&out, "julia.ppm", &img.to_ppm())?;
            eprintln!("wrote {}", path.display());
        }
        RenderKind::Phi => {
            let c = cfg.poly_param().map_err(invalid)?;
            let states = poly_states(c, cfg.alpha0().map_err(invalid)?, stage, &cfg.engine().map_err(invalid)?)
                .map_err(invalid)?;
            let tower = &states.last().ok_or_else(|| invalid("phi renders need stage >= 1"))?.tower;
            let samples = julia_samples(c, cfg.samples.unwrap_or(4000), 40);
            let r = render_phi_image(tower, stage, &samples, &view, exec);
            let path = write_file(&out, &format!("phi_n{stage}.ppm"), &r.image.to_ppm())?;
            let side = format!(
                "{{\"stage\": {stage}, \"samples\": {}, \"plotted\": {}, \"skipped\": {}, \"off_view\": {}}}\n",
                samples.len(),
                r.plotted,
                r.skipped,
                r.off_view
            );
            write_file(&out, &format!("phi_n{stage}.json"), side.as_bytes())?;
            eprintln!(
                "wrote {} ({} plotted, {} skipped on cut curves, {} off view)",
                path.display(),
                r.plotted,
                r.skipped,
                r.off_view
            );
        }
        RenderKind::Cuts => {
            let engine = cfg.engine().map_err(invalid)?;
            let alpha0 = cfg.alpha0().map_err(invalid)?;
            let cuts = if rational {
                let states = rat_states(rat_param(&cfg)?, alpha0, stage, &engine).map_err(invalid)?;
                states.last().and_then(|s| s.cut_set().cloned())
            } else {
                let states =
                    poly_states(cfg.poly_param().map_err(invalid)?, alpha0, stage, &engine).map_err(invalid)?;
                states.last().and_then(|s| s.cut_set().cloned())
            };
            let cuts = cuts.ok_or_else(|| invalid(format!("cut set of stage {stage} was not materialized")))?;
            let img = overlay_curves(&Image::new(view.width, view.height), &view, &cuts, palette(stage * 16));
            let path = write_file(&out, &format!("cuts_n{stage}.ppm"), &img.to_ppm())?;
            eprintln!("wrote {} ({} curves)", path.display(), cuts.len());
        }
    }
    Ok(Exit::Ok)
}

fn cmd_check_path(common: &Common, extra: RunConfig, horizon: Option<usize>) -> Outcome {
    let mut cfg = resolve(RunConfig::default(), common, extra)?;
    cfg.horizon = horizon.or(cfg.horizon);
    let engine = cfg.engine().map_err(invalid)?;
    let alpha0 = cfg.alpha0().map_err(invalid)?;
    if cfg.c.is_none() && cfg.a.is_some() {
        init_rat(rat_param(&cfg)?, alpha0.clone(), &engine).map_err(invalid)?;
    } else {
        init_poly(cfg.poly_param().map_err(invalid)?, alpha0.clone(), &engine).map_err(invalid)?;
    }
    say!(
        "admissible: {} points, endpoint {}, horizon {}",
        alpha0.len(),
        regluing::report::json_point(alpha0.endpoint()),
        engine.horizon
    );
    if let Some(dir) = &cfg.out {
        let path = write_file(dir, "alpha0.txt", alpha0.to_text().as_bytes())?;
        eprintln!("wrote {}", path.display());
    }
    Ok(Exit::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Example(common) => cmd_example(common),
        Command::RegluePoly { common, map, path } => cmd_reglue(common, extra_flags(map, path), false),
        Command::ReglueRat { common, map, path } => cmd_reglue(common, extra_flags(map, path), true),
        Command::Render {
            kind,
            common,
            map,
            path,
            view,
        } => {
            let mut extra = extra_flags(map, path);
            extra.center = view.center;
            extra.half_width = view.half_width;
            extra.width = view.width;
            extra.height = view.height;
            extra.max_iter = view.max_iter;
            extra.stage = view.stage;
            extra.samples = view.samples;
            cmd_render(*kind, common, extra)
        }
        Command::CheckPath {
            common,
            map,
            path,
            horizon,
        } => cmd_check_path(common, extra_flags(map, path), *horizon),
    };
    let code = match outcome {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    };
    ExitCode::from(code as u8)
}
