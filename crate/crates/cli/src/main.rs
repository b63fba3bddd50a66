use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use specpoly::polyakov::{
    auto_tgrid, corner_fp_closed_pi2, corner_fp_numeric, corner_integral_samples,
    fd_derivative_check, rect_fd_derivative, variation_assemble, write_corner_samples,
    AssemblyConvention, CornerEvaluation,
};
use specpoly::rect_eta::{maximize_rect, rect_det_eta, write_rect_curve, RectConvention};
use specpoly::regdet::{
    heat_invariants, log_spaced, zeta_prime_zero, zeta_prime_zero_auto, DetScheme,
};
use specpoly::spectra::{rectangle_spectrum, sector_spectrum, weyl_check, SectorGeometry};
use specpoly::{Error, EULER_GAMMA_F64};

const EXIT_DOMAIN: u8 = 1;
const EXIT_QUALITY: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "specpoly",
    version,
    about = "Spectral determinants of sectors and rectangles"
)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "SPECPOLY_THREADS")]
    threads: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// ζ′(0) and det of the Dirichlet Laplacian on a circular sector.
    SectorDet(SectorDetArgs),
    /// Rectangle determinant: spectral pipeline against the eta closed forms.
    RectDet(RectDetArgs),
    /// Finite part of one weighted corner integral.
    Corner(CornerArgs),
    /// Assembled angular derivative of −log det.
    PolyakovAssemble(AssembleArgs),
    /// Finite-difference check of the angular derivative.
    PolyakovCheck(CheckArgs),
    /// Aspect ratio maximizing the rectangle determinant.
    RectMax(RectMaxArgs),
    /// Quick consistency checks.
    Selftest,
}

#[derive(Args, Debug, Serialize)]
struct AngleArg {
    /// Opening angle (radians unless --degrees).
    #[arg(long)]
    angle: f64,
    /// Interpret --angle in degrees.
    #[arg(long)]
    degrees: bool,
}

impl AngleArg {
    fn radians(&self) -> f64 {
        if self.degrees {
            self.angle.to_radians()
        } else {
            self.angle
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct SectorDetArgs {
    #[command(flatten)]
    angle: AngleArg,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    /// Spectral cutoff Λ.
    #[arg(long, default_value_t = 4e4)]
    cutoff: f64,
    /// Lower end of the Mellin window (default 25/Λ).
    #[arg(long)]
    t_min: Option<f64>,
    /// Force the Weyl tail correction on or off.
    #[arg(long)]
    tail_correction: Option<bool>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum RectConventionArg {
    Paper,
    Corrected,
    Adjudicated,
}

impl From<RectConventionArg> for RectConvention {
    fn from(c: RectConventionArg) -> Self {
        match c {
            RectConventionArg::Paper => RectConvention::Paper,
            RectConventionArg::Corrected => RectConvention::Corrected,
            RectConventionArg::Adjudicated => RectConvention::Adjudicated,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct RectDetArgs {
    /// Aspect ratio; sides L and 1/L.
    #[arg(long = "L", visible_alias = "l", default_value_t = 1.0)]
    l: f64,
    #[arg(long, default_value_t = 1e6)]
    cutoff: f64,
    #[arg(long, value_enum, default_value_t = RectConventionArg::Adjudicated)]
    convention: RectConventionArg,
    /// Skip the spectral pipeline and report only the closed forms.
    #[arg(long)]
    closed_form_only: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum CornerMethodArg {
    Closed,
    Numeric,
}

#[derive(Args, Debug, Serialize)]
struct CornerArgs {
    #[command(flatten)]
    angle: AngleArg,
    #[arg(long, allow_hyphen_values = true)]
    w0: f64,
    #[arg(long, allow_hyphen_values = true)]
    wlog: f64,
    #[arg(long, value_enum, default_value_t = CornerMethodArg::Numeric)]
    method: CornerMethodArg,
    /// Corner patch radius R.
    #[arg(long = "R", visible_alias = "radius", default_value_t = 1.0)]
    radius: f64,
    /// Fitting grid as `lo:hi:n` (log-spaced) or a comma-separated list.
    #[arg(long)]
    tgrid: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum ConventionArg {
    PaperFactor3,
    LocalWeight,
    Complete,
}

impl From<ConventionArg> for AssemblyConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::PaperFactor3 => AssemblyConvention::PaperFactor3,
            ConventionArg::LocalWeight => AssemblyConvention::LocalWeight,
            ConventionArg::Complete => AssemblyConvention::Complete,
        }
    }
}

#[derive(Args, Debug, Serialize)]
struct AssembleArgs {
    #[command(flatten)]
    angle: AngleArg,
    #[arg(long, value_enum, default_value_t = ConventionArg::PaperFactor3)]
    convention: ConventionArg,
    /// Evaluate right-angle corners numerically as well.
    #[arg(long)]
    numeric_only: bool,
}

#[derive(Args, Debug, Serialize)]
struct CheckArgs {
    /// Opening angle for the sector check (radians unless --degrees).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    angle: f64,
    #[arg(long)]
    degrees: bool,
    #[arg(long, default_value_t = 0.04)]
    h: f64,
    #[arg(long, default_value_t = 5)]
    stencil: usize,
    #[arg(long, default_value_t = 1e5)]
    cutoff: f64,
    #[arg(long, value_enum, default_value_t = ConventionArg::PaperFactor3)]
    convention: ConventionArg,
    /// Check d/dL at this aspect ratio through the eta closed form instead.
    #[arg(long = "rect-L")]
    rect_l: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
struct RectMaxArgs {
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

enum Output {
    Json(Value),
    Csv(Vec<u8>),
    Text(String),
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Serialize(_) => EXIT_DOMAIN,
            ref e if e.is_domain() => EXIT_DOMAIN,
            _ => EXIT_QUALITY,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn domain_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_DOMAIN,
        message: message.into(),
    }
}

type Outcome = Result<Output, Failure>;

fn envelope(cli: &Cli, result: Value) -> Value {
    json!({
        "specpoly_version": env!("CARGO_PKG_VERSION"),
        "format": cli.format,
        "params": &cli.command,
        "result": result,
    })
}

fn to_value<S: Serialize>(s: &S) -> Result<Value, Failure> {
    serde_json::to_value(s).map_err(|e| Failure::from(Error::from(e)))
}

fn csv_buffer(f: impl FnOnce(&mut Vec<u8>) -> specpoly::Result<()>) -> Outcome {
    let mut buf = Vec::new();
    f(&mut buf)?;
    Ok(Output::Csv(buf))
}

fn parse_tgrid(spec: &str) -> Result<Vec<f64>, Failure> {
    let bad = || {
        domain_failure(format!(
            "cannot parse t-grid `{spec}`; use lo:hi:n or a comma list"
        ))
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !(lo > 0.0 && hi > lo) || n < 2 {
            return Err(bad());
        }
        Ok(log_spaced(lo, hi, n))
    } else {
        spec.split(',')
            .map(|s| s.trim().parse().map_err(|_| bad()))
            .collect()
    }
}

fn sector_det(cli: &Cli, a: &SectorDetArgs) -> Outcome {
    let geom = SectorGeometry::new(a.angle.radians(), a.radius)?;
    // Computed at unit radius and rescaled, so log r keeps its normalization.
    let table = sector_spectrum(
        &SectorGeometry::unit(geom.angle)?,
        a.cutoff * a.radius * a.radius,
    )?;
    if cli.format == Format::Csv {
        let dilated = table.dilated(a.radius)?;
        return csv_buffer(|b| dilated.write_csv(b));
    }
    let scheme = DetScheme {
        t_min: a.t_min,
        tail_correction: a.tail_correction,
        ..DetScheme::default()
    };
    let unit = zeta_prime_zero_auto(&table, &scheme)?;
    let res = specpoly::regdet::scale_logdet(&unit, a.radius)?;
    let weyl = weyl_check(&table)?;
    match cli.format {
        Format::Text => Ok(Output::Text(format!(
            "angle {}\nradius {}\ncutoff {}\neigenvalues {}\nzeta(0) {:.12}\nzeta'(0) {:.12}\nlog det {:.12}\ndet {:.12}\nerror estimate {:.3e}\nfitted a2 {}\n",
            geom.angle,
            a.radius,
            a.cutoff,
            res.eigenvalue_count,
            res.zeta0,
            res.zeta_prime0,
            res.logdet,
            res.det,
            res.error_estimate,
            res.fitted_a2.map_or("-".into(), |v| format!("{v:.9}")),
        ))),
        _ => Ok(Output::Json(json!({
            "determinant": to_value(&res)?,
            "weyl_relative_deviation": weyl,
        }))),
    }
}

fn rect_det(cli: &Cli, a: &RectDetArgs) -> Outcome {
    let eta = rect_det_eta(a.l, a.convention.into())?;
    let paper = rect_det_eta(a.l, RectConvention::Paper)?.f_value;
    let corrected = rect_det_eta(a.l, RectConvention::Corrected)?.f_value;
    if a.closed_form_only {
        return match cli.format {
            Format::Csv => csv_buffer(|b| write_rect_curve(&[a.l], b)),
            Format::Text => Ok(Output::Text(format!(
                "L {}\nf paper {:.12}\nf corrected {:.12}\ndet paper {:.12}\ndet corrected {:.12}\n",
                a.l, paper, corrected, eta.det_paper, eta.det_corrected
            ))),
            Format::Json => Ok(Output::Json(json!({ "eta": to_value(&eta)? }))),
        };
    }
    let table = rectangle_spectrum(a.l, a.cutoff)?;
    if cli.format == Format::Csv {
        return csv_buffer(|b| table.write_csv(b));
    }
    let res = zeta_prime_zero(
        &table,
        &heat_invariants(&table.domain),
        &DetScheme::default(),
    )?;
    let dp = (res.zeta_prime0 - paper).abs();
    let dc = (res.zeta_prime0 - corrected).abs();
    let matched = match (dp < 1e-3, dc < 1e-3) {
        (true, false) => "paper",
        (false, true) => "corrected",
        (true, true) => "both",
        (false, false) => "neither",
    };
    match cli.format {
        Format::Text => Ok(Output::Text(format!(
            "L {}\ncutoff {}\npipeline zeta'(0) {:.12}\nf paper {:.12}\nf corrected {:.12}\nmatches {}\n",
            a.l, a.cutoff, res.zeta_prime0, paper, corrected, matched
        ))),
        _ => Ok(Output::Json(json!({
            "determinant": to_value(&res)?,
            "eta": to_value(&eta)?,
            "f_paper": paper,
            "f_corrected": corrected,
            "distance_paper": dp,
            "distance_corrected": dc,
            "matches": matched,
        }))),
    }
}

fn corner(cli: &Cli, a: &CornerArgs) -> Outcome {
    let theta = a.angle.radians();
    let grid = a.tgrid.as_deref().map(parse_tgrid).transpose()?;
    if cli.format == Format::Csv {
        let g = grid.unwrap_or_else(|| auto_tgrid(theta, a.radius));
        let samples = corner_integral_samples(theta, a.w0, a.wlog, a.radius, &g)?;
        return csv_buffer(|b| write_corner_samples(&samples, b));
    }
    let c = match a.method {
        CornerMethodArg::Closed => {
            if (theta - std::f64::consts::FRAC_PI_2).abs() > 1e-6 {
                return Err(domain_failure(format!(
                    "closed form exists only at angle π/2, got {theta}"
                )));
            }
            corner_fp_closed_pi2(a.w0, a.wlog)?
        }
        CornerMethodArg::Numeric => {
            corner_fp_numeric(theta, a.w0, a.wlog, a.radius, grid.as_deref())?
        }
    };
    match cli.format {
        Format::Text => Ok(Output::Text(format!(
            "angle {}\nw0 {}\nwlog {}\nfp {:.12}\nuncertainty {:.3e}\n",
            c.angle, c.w0, c.wlog, c.fp, c.uncertainty
        ))),
        _ => Ok(Output::Json(to_value(&c)?)),
    }
}

fn assemble(cli: &Cli, a: &AssembleArgs) -> Outcome {
    let evaluation = if a.numeric_only {
        CornerEvaluation::NumericOnly
    } else {
        CornerEvaluation::Auto
    };
    let r = variation_assemble(a.angle.radians(), a.convention.into(), evaluation)?;
    match cli.format {
        Format::Text => Ok(Output::Text(format!(
            "angle {}\nconvention {}\nsmooth {:.12}\nnormal derivative {:.12}\narc corner {:.12}\nvertex {:.12}\ntotal {:.12}\n",
            r.alpha, r.assembly_convention, r.smooth_term, r.normal_derivative_term, r.arc_corner.fp, r.vertex.fp, r.total
        ))),
        Format::Csv => Err(domain_failure("polyakov-assemble has no CSV output")),
        Format::Json => Ok(Output::Json(to_value(&r)?)),
    }
}

fn check(cli: &Cli, a: &CheckArgs) -> Outcome {
    if let Some(l) = a.rect_l {
        let d = rect_fd_derivative(l, a.h, a.stencil, RectConvention::Adjudicated)?;
        return match cli.format {
            Format::Text => Ok(Output::Text(format!("L {l}\nd/dL f {d:.12e}\n"))),
            _ => Ok(Output::Json(json!({ "l": l, "derivative": d }))),
        };
    }
    let alpha = if a.degrees {
        a.angle.to_radians()
    } else {
        a.angle
    };
    let r = fd_derivative_check(alpha, a.h, a.stencil, a.cutoff, a.convention.into())?;
    if r.under_resolved {
        eprintln!(
            "warning: stencil under-resolved (propagated error {:.3e} for h = {})",
            r.fd_error_estimate, r.h
        );
    }
    match cli.format {
        Format::Text => Ok(Output::Text(format!(
            "angle {}\nh {}\nstencil {}\nfd {:.12}\nfd error {:.3e}\nassembled ({}) {:.12}\ndiscrepancy {:.3e}\n",
            r.alpha, r.h, r.stencil, r.fd_value, r.fd_error_estimate, r.assembly_convention, r.assembled_value, r.discrepancy
        ))),
        Format::Csv => csv_buffer(|b| {
            let mut w = io::BufWriter::new(b);
            writeln!(w, "parameter,minus_logdet,error_estimate")?;
            for p in &r.points {
                writeln!(w, "{:.17e},{:.17e},{:.17e}", p.parameter, p.minus_logdet, p.error_estimate)?;
            }
            w.flush()?;
            Ok(())
        }),
        Format::Json => Ok(Output::Json(to_value(&r)?)),
    }
}

fn rect_max(cli: &Cli, a: &RectMaxArgs) -> Outcome {
    let r = maximize_rect(a.tol)?;
    match cli.format {
        Format::Text => Ok(Output::Text(format!(
            "L_star {:.9}\ndet {:.12}\nf {:.12}\niterations {}\nmonotone {}\n",
            r.l_star, r.det_star, r.f_star, r.iterations, r.monotone_path
        ))),
        Format::Csv => {
            let ls: Vec<f64> = (0..=90).map(|i| 1.0 + 0.1 * f64::from(i)).collect();
            csv_buffer(|b| write_rect_curve(&ls, b))
        }
        Format::Json => Ok(Output::Json(to_value(&r)?)),
    }
}

fn selftest(cli: &Cli) -> Outcome {
    use std::f64::consts::PI;
    let mut checks: Vec<(String, bool, f64)> = Vec::new();
    let mut push = |name: &str, dev: f64, tol: f64| checks.push((name.to_string(), dev < tol, dev));

    let c = corner_fp_closed_pi2(4.0 / PI, 4.0 / PI)?;
    push(
        "closed corner at pi/2",
        (c.fp + (1.0 + EULER_GAMMA_F64) / (4.0 * PI)).abs(),
        1e-14,
    );
    let n = corner_fp_numeric(PI / 2.0, 4.0 / PI, 4.0 / PI, 1.0, None)?;
    push("numeric corner at pi/2", (n.fp - c.fp).abs(), 1e-4);
    push(
        "eta critical identity",
        specpoly::rect_eta::eta_critical_identity::<f64>()?,
        1e-8,
    );
    let m = maximize_rect(1e-6_f64)?;
    push("square maximizes", (m.l_star - 1.0).abs(), 1e-6);
    let table = sector_spectrum(&SectorGeometry::unit(PI / 2.0)?, 1e4)?;
    let det = zeta_prime_zero_auto(&table, &DetScheme::default())?;
    push(
        "quarter-disk fitted a2",
        (det.fitted_a2.unwrap_or(f64::NAN) - 11.0 / 48.0).abs(),
        2e-3,
    );

    let failed = checks.iter().filter(|c| !c.1).count();
    let out = match cli.format {
        Format::Text | Format::Csv => {
            let mut s = String::new();
            for (name, ok, dev) in &checks {
                s.push_str(&format!(
                    "{} {name} (deviation {dev:.3e})\n",
                    if *ok { "PASS" } else { "FAIL" }
                ));
            }
            Output::Text(s)
        }
        Format::Json => Output::Json(json!({
            "checks": checks.iter().map(|(n, ok, d)| json!({"name": n, "pass": ok, "deviation": d})).collect::<Vec<_>>(),
        })),
    };
    if failed > 0 {
        emit(cli, out).ok();
        return Err(Failure {
            code: EXIT_QUALITY,
            message: format!("{failed} self-test check(s) failed"),
        });
    }
    Ok(out)
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::SectorDet(a) => sector_det(cli, a),
        Command::RectDet(a) => rect_det(cli, a),
        Command::Corner(a) => corner(cli, a),
        Command::PolyakovAssemble(a) => assemble(cli, a),
        Command::PolyakovCheck(a) => check(cli, a),
        Command::RectMax(a) => rect_max(cli, a),
        Command::Selftest => selftest(cli),
    }
}

fn emit(cli: &Cli, out: Output) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match &cli.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match out {
        Output::Json(v) => {
            serde_json::to_writer_pretty(&mut sink, &envelope(cli, v))?;
            writeln!(sink)?;
        }
        Output::Csv(bytes) => sink.write_all(&bytes)?,
        Output::Text(s) => sink.write_all(s.as_bytes())?,
    }
    sink.flush()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_DOMAIN);
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(out) => match emit(&cli, out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_DOMAIN)
            }
        },
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
