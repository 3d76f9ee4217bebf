//! `apmeas` — measures on the line: norms, almost-period scans,
//! classification, convolution, van Hove averaging, gallery generators,
//! cut-and-project combs and desk-scale diffraction.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use apmeas_cli::acceptance;
use apmeas_cli::config::{with_config, RunConfig};
use apmeas_cli::parse;
use apmeas_core::constructions::{
    cps_comb, fibonacci_scheme, gallery, CutAndProjectScheme, GalleryParams,
};
use apmeas_core::convolution::{convolve_mm, eberlein, product_convergence_defect, VanHoveSequence};
use apmeas_core::diffraction::{autocorrelation, peak_split, spectrum_with_peaks, Taper};
use apmeas_core::json::{fmt_f64, from_json, to_json};
use apmeas_core::norms::{
    canonical_family, norm_k_compact, norm_u, norm_via_family, operator_norm, NormReport,
};
use apmeas_core::periods::{classify, norm_period_scan, ClassifyOptions};
use apmeas_core::{Error, Measure, Result, TestFunction, Window};

#[derive(Parser)]
#[command(
    name = "apmeas",
    about = "numerical toolkit for translation-bounded measures on the real line",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a measure norm on a window
    Norm(NormArgs),
    /// Scan for epsilon-almost periods, emitting CSV and a report
    Scan(ScanArgs),
    /// Classify almost periodicity (report only)
    Classify(ScanArgs),
    /// Convolve two measures
    Convolve(ConvolveArgs),
    /// Product-topology convergence study of a gallery family
    Converge(ConvergeArgs),
    /// Finite-stage van Hove averaged (Eberlein) convolution
    Eberlein(EberleinArgs),
    /// Autocorrelation, Fourier transform and peak extraction
    Diffract(DiffractArgs),
    /// Emit a gallery measure
    Gallery(GalleryArgs),
    /// Build a cut-and-project Dirac comb
    Cps(CpsArgs),
    /// Run the acceptance suite
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct NormArgs {
    /// Measure JSON file
    #[arg(long)]
    measure: PathBuf,
    /// Norming window "lo,hi" (closed K for --method compact)
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    /// Computation method
    #[arg(long, value_enum, default_value_t = MethodArg::Sliding)]
    method: MethodArg,
    /// Canonical family depth for family/operator methods
    #[arg(long, default_value_t = 6)]
    depth: u32,
    /// Output JSON path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Sliding,
    Family,
    Operator,
    Compact,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    measure: PathBuf,
    /// Norming window "lo,hi"
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    /// Comma-separated epsilon list
    #[arg(long, allow_hyphen_values = true)]
    eps: String,
    /// Scan window "lo,hi"
    #[arg(long, allow_hyphen_values = true)]
    scan: String,
    /// Scan grid step
    #[arg(long)]
    step: f64,
    /// Canonical family depth for the equi-Bohr cross-check
    #[arg(long, default_value_t = 5)]
    depth: u32,
    /// Sample step for the smoothed orbits (default: step / 8)
    #[arg(long)]
    sample_step: Option<f64>,
    /// Relative-density threshold as a fraction of the scan length
    #[arg(long, default_value_t = 0.25)]
    threshold_frac: f64,
    /// CSV output path (stdout when omitted, scan subcommand only)
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Report JSON path
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ConvolveArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Stage family, e.g. "gallery:ex1"
    #[arg(long)]
    seq: String,
    /// Limit measure, e.g. "gallery:leb01"
    #[arg(long)]
    limit: String,
    /// Test function, e.g. "hat:0,1,2"
    #[arg(long)]
    g: String,
    /// Stage range "1..64"
    #[arg(long)]
    n: String,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct EberleinArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Averaging stage: A_n = (-n, n)
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DiffractArgs {
    #[arg(long)]
    measure: PathBuf,
    /// Averaging window length |A_n| (A_n = (-w/2, w/2))
    #[arg(long)]
    window: f64,
    /// Largest frequency
    #[arg(long)]
    fmax: f64,
    /// Frequency grid step
    #[arg(long)]
    fstep: f64,
    #[arg(long, value_enum, default_value_t = TaperArg::Triangular)]
    taper: TaperArg,
    /// Peak detection threshold
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaperArg {
    None,
    Triangular,
}

#[derive(Args)]
struct GalleryArgs {
    /// One of: ex1, leb01, triangle, cantor, scaledcantor, dirac_comb
    #[arg(long)]
    name: String,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    spacing: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    offset: Option<f64>,
    #[arg(long)]
    weight: Option<f64>,
    /// Realization window "lo,hi" (dirac_comb)
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CpsArgs {
    /// Scheme name ("fibonacci") or "custom" with --b1/--b2/--wint
    #[arg(long, default_value = "fibonacci")]
    scheme: String,
    #[arg(long, allow_hyphen_values = true)]
    b1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    wint: Option<String>,
    /// Weight function on the internal line, e.g. "tent:-1,0,0.618"
    #[arg(long, allow_hyphen_values = true)]
    h: String,
    /// Physical window "lo,hi"
    #[arg(long, allow_hyphen_values = true)]
    window: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SelftestArgs {
    /// Run only criteria whose id matches (e.g. 3)
    #[arg(long)]
    only: Option<u32>,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("APMEAS_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let edge = matches!(
                e,
                Error::EdgeContamination
                    | Error::TruncationTooSmall
                    | Error::ScanExceedsTruncation
                    | Error::WindowOutsideTruncation
                    | Error::SupportOutsideTruncation
                    | Error::EmptyScanRange
                    | Error::VanHoveIndex(_)
            );
            if edge {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn read_measure(path: &PathBuf) -> Result<Measure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::BadParams(format!("cannot read {}: {e}", path.display())))?;
    from_json(&text)
}

/// Measure artifacts carry the config echo as a leading key; the canonical
/// parser ignores unknown keys, so the document stays a valid measure.
fn write_measure(path: &PathBuf, config: &RunConfig, m: &Measure) -> Result<()> {
    let measure = to_json(m);
    let config_json = serde_json::to_string(config).expect("config serializes");
    let body = format!("{{\"config\":{},{}", config_json, &measure[1..]);
    fs::write(path, body)
        .map_err(|e| Error::BadParams(format!("cannot write {}: {e}", path.display())))
}

fn write_out(path: &Option<PathBuf>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body)
            .map_err(|e| Error::BadParams(format!("cannot write {}: {e}", p.display()))),
        None => {
            if body.ends_with('\n') {
                print!("{body}");
            } else {
                println!("{body}");
            }
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Norm(a) => cmd_norm(a),
        Command::Scan(a) => cmd_scan(a, true),
        Command::Classify(a) => cmd_scan(a, false),
        Command::Convolve(a) => cmd_convolve(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Eberlein(a) => cmd_eberlein(a),
        Command::Diffract(a) => cmd_diffract(a),
        Command::Gallery(a) => cmd_gallery(a),
        Command::Cps(a) => cmd_cps(a),
        Command::Selftest(a) => cmd_selftest(a),
    }
}

fn cmd_norm(a: NormArgs) -> Result<ExitCode> {
    let m = read_measure(&a.measure)?;
    let w = parse::window(&a.window)?;
    let report: NormReport = match a.method {
        MethodArg::Sliding => norm_u(&m, &w)?,
        MethodArg::Family => {
            let fam = canonical_family(&w, a.depth);
            norm_via_family(&m, &w, &fam)?
        }
        MethodArg::Operator => {
            let fam: Vec<TestFunction> = canonical_family(&w, a.depth)
                .iter()
                .map(|g| g.reflect())
                .collect();
            operator_norm(&m, &w, &fam)?
        }
        MethodArg::Compact => {
            let fam = dominating_family(w.lo, w.hi);
            norm_k_compact(&m, w.lo, w.hi, &fam)?
        }
    };
    let method = match a.method {
        MethodArg::Sliding => "sliding",
        MethodArg::Family => "family",
        MethodArg::Operator => "operator",
        MethodArg::Compact => "compact",
    };
    let config = RunConfig::new("norm")
        .arg("measure", a.measure.display())
        .arg("window", &a.window)
        .arg("method", method)
        .arg("depth", a.depth);
    write_out(&a.out, &with_config(&config, "norm", &report))?;
    Ok(ExitCode::SUCCESS)
}

/// Shrinking trapezoids above the indicator of [lo, hi].
fn dominating_family(lo: f64, hi: f64) -> Vec<TestFunction> {
    let len = hi - lo;
    [0.2, 0.1, 0.05, 0.025]
        .iter()
        .map(|frac| {
            let d = frac * len;
            TestFunction::trapezoid(lo - d, lo, hi, hi + d, 1.0).unwrap()
        })
        .collect()
}

fn cmd_scan(a: ScanArgs, with_csv: bool) -> Result<ExitCode> {
    let m = read_measure(&a.measure)?;
    let u = parse::window(&a.window)?;
    let eps = parse::float_list(&a.eps)?;
    let scan = parse::window(&a.scan)?;
    let opts = ClassifyOptions {
        family_depth: a.depth,
        threshold_frac: a.threshold_frac,
        refine: 8,
    };

    if with_csv {
        let data = norm_period_scan(&m, &u, &scan, a.step)?;
        let mut csv = String::from("t,norm");
        for e in &eps {
            csv.push_str(&format!(",is_period_{e}"));
        }
        csv.push('\n');
        for (t, v) in &data {
            csv.push_str(&fmt_f64(*t));
            csv.push(',');
            csv.push_str(&fmt_f64(*v));
            for e in &eps {
                csv.push_str(if v <= e { ",1" } else { ",0" });
            }
            csv.push('\n');
        }
        write_out(&a.csv, &csv)?;
    }

    let report = classify(&m, &u, &eps, &scan, a.step, &opts)?;
    let config = RunConfig::new(if with_csv { "scan" } else { "classify" })
        .arg("measure", a.measure.display())
        .arg("window", &a.window)
        .arg("eps", &a.eps)
        .arg("scan", &a.scan)
        .arg("step", a.step)
        .arg("depth", a.depth)
        .arg("threshold-frac", a.threshold_frac);
    let body = with_config(&config, "classification", &report);
    if with_csv {
        if a.report.is_some() {
            write_out(&a.report, &body)?;
        }
    } else {
        write_out(&a.report, &body)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_convolve(a: ConvolveArgs) -> Result<ExitCode> {
    let x = read_measure(&a.a)?;
    let y = read_measure(&a.b)?;
    let out = convolve_mm(&x, &y)?;
    let config = RunConfig::new("convolve")
        .arg("a", a.a.display())
        .arg("b", a.b.display())
        .arg("out", a.out.display());
    write_measure(&a.out, &config, &out)?;
    // norm transfer note: ||mu * nu||_U <= ||mu||_{U'} |nu|(R)
    let finite = if y.truncation.is_none() { &y } else { &x };
    let hull = finite.data_hull().unwrap_or((0.0, 0.0));
    let mass = finite
        .total_variation()
        .mass(&Window::new(hull.0 - 1.0, hull.1 + 1.0)?)
        .unwrap_or(0.0);
    println!(
        "wrote {}; convolver support [{}, {}], total variation {}",
        a.out.display(),
        fmt_f64(hull.0),
        fmt_f64(hull.1),
        fmt_f64(mass)
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_converge(a: ConvergeArgs) -> Result<ExitCode> {
    let family = parse::gallery_family(&a.seq)?;
    let limit = parse::gallery_fixed(&a.limit)?;
    let g = parse::test_function(&a.g)?;
    let (n0, n1) = parse::int_range(&a.n)?;
    let mut csv = String::from("n,defect\n");
    for n in n0..=n1 {
        let stage = family(n)?;
        let d = product_convergence_defect(&stage, &limit, &g)?;
        csv.push_str(&format!("{n},{}\n", fmt_f64(d)));
    }
    write_out(&a.csv, &csv)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_eberlein(a: EberleinArgs) -> Result<ExitCode> {
    let x = read_measure(&a.a)?;
    let y = read_measure(&a.b)?;
    let vh = VanHoveSequence::linear(a.n.max(1));
    let out = eberlein(&x, &y, &vh, a.n)?;
    let config = RunConfig::new("eberlein")
        .arg("a", a.a.display())
        .arg("b", a.b.display())
        .arg("n", a.n)
        .arg("out", a.out.display());
    write_measure(&a.out, &config, &out.measure)?;
    #[derive(serde::Serialize)]
    struct Meta {
        n: usize,
        radius: f64,
        boundary_ratio: f64,
        convergence_note: &'static str,
    }
    let meta = Meta {
        n: out.n,
        radius: out.radius,
        boundary_ratio: out.boundary_ratio,
        convergence_note:
            "single finite stage; existence of the limit is evidenced by comparing stages, not certified",
    };
    println!("{}", with_config(&config, "eberlein", &meta));
    Ok(ExitCode::SUCCESS)
}

fn cmd_diffract(a: DiffractArgs) -> Result<ExitCode> {
    let m = read_measure(&a.measure)?;
    let half = a.window / 2.0;
    if half <= 0.0 {
        return Err(Error::BadParams("window must be positive".into()));
    }
    let vh = VanHoveSequence::new(vec![half])?;
    let gamma = autocorrelation(&m, &vh, 1)?;
    let taper = match a.taper {
        TaperArg::None => Taper::None,
        TaperArg::Triangular => Taper::Triangular,
    };
    let count = (a.fmax / a.fstep).round() as usize + 1;
    let spec = spectrum_with_peaks(&gamma, 0.0, a.fstep, count, taper, a.window, a.threshold)?;

    let mut csv = String::from("freq,intensity\n");
    for (i, v) in spec.intensities.iter().enumerate() {
        csv.push_str(&fmt_f64(spec.freq_at(i)));
        csv.push(',');
        csv.push_str(&fmt_f64(*v));
        csv.push('\n');
    }
    write_out(&a.csv, &csv)?;

    let (_, floor, fraction) = peak_split(&spec, a.threshold);
    #[derive(serde::Serialize)]
    struct PeakReport<'a> {
        window_length: f64,
        taper: &'a Taper,
        threshold: f64,
        peaks: &'a [apmeas_core::diffraction::Peak],
        pp_mass_fraction: f64,
        continuous_floor: f64,
    }
    let config = RunConfig::new("diffract")
        .arg("measure", a.measure.display())
        .arg("window", a.window)
        .arg("fmax", a.fmax)
        .arg("fstep", a.fstep)
        .arg("threshold", a.threshold);
    let body = with_config(
        &config,
        "diffraction",
        &PeakReport {
            window_length: spec.window_length,
            taper: &spec.taper,
            threshold: a.threshold,
            peaks: &spec.peaks,
            pp_mass_fraction: fraction,
            continuous_floor: floor,
        },
    );
    if a.report.is_some() {
        write_out(&a.report, &body)?;
    } else if a.csv.is_some() {
        println!("{body}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gallery(a: GalleryArgs) -> Result<ExitCode> {
    let window = match &a.window {
        Some(w) => Some(parse::window(w)?),
        None => None,
    };
    let params = GalleryParams {
        n: a.n,
        depth: a.depth,
        spacing: a.spacing,
        offset: a.offset,
        weight: a.weight,
        window,
    };
    let m = gallery(&a.name, &params)?;
    let config = RunConfig::new("gallery")
        .arg("name", &a.name)
        .arg_opt("n", a.n)
        .arg_opt("depth", a.depth)
        .arg_opt("spacing", a.spacing)
        .arg_opt("offset", a.offset)
        .arg_opt("weight", a.weight)
        .arg_opt("window", a.window.as_deref())
        .arg("out", a.out.display());
    write_measure(&a.out, &config, &m)?;
    println!(
        "wrote {} ({} atoms, ac {}, sc atoms {})",
        a.out.display(),
        m.pp.atoms().len(),
        m.ac.as_ref().map_or(0, |d| d.samples.len()),
        m.sc.atoms().len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_cps(a: CpsArgs) -> Result<ExitCode> {
    let scheme = match a.scheme.as_str() {
        "fibonacci" => fibonacci_scheme(),
        "custom" => {
            let b1 = parse::float_list(&a.b1.ok_or_else(|| Error::BadParams("--b1 required".into()))?)?;
            let b2 = parse::float_list(&a.b2.ok_or_else(|| Error::BadParams("--b2 required".into()))?)?;
            let wint = parse::float_list(&a.wint.ok_or_else(|| Error::BadParams("--wint required".into()))?)?;
            if b1.len() != 2 || b2.len() != 2 || wint.len() != 2 {
                return Err(Error::BadParams("basis vectors and wint need two entries".into()));
            }
            CutAndProjectScheme::new([b1[0], b1[1]], [b2[0], b2[1]], (wint[0], wint[1]))?
        }
        other => return Err(Error::BadParams(format!("unknown scheme: {other}"))),
    };
    let h = parse::test_function(&a.h)?;
    let w = parse::window(&a.window)?;
    let comb = cps_comb(&scheme, &h, &w)?;
    let config = RunConfig::new("cps")
        .arg("scheme", &a.scheme)
        .arg("h", &a.h)
        .arg("window", &a.window)
        .arg("out", a.out.display());
    write_measure(&a.out, &config, &comb)?;
    println!(
        "wrote {} ({} atoms in ({}, {}))",
        a.out.display(),
        comb.pp.atoms().len(),
        w.lo,
        w.hi
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_selftest(a: SelftestArgs) -> Result<ExitCode> {
    let results = match a.only {
        None => acceptance::run_all(),
        Some(id) => {
            let all = [
                acceptance::criterion_01 as fn() -> acceptance::CriterionResult,
                acceptance::criterion_02,
                acceptance::criterion_03,
                acceptance::criterion_04,
                acceptance::criterion_05,
                acceptance::criterion_06,
                acceptance::criterion_07,
                acceptance::criterion_08,
                acceptance::criterion_09,
                acceptance::criterion_10,
                acceptance::criterion_11,
            ];
            if id == 0 || id as usize > all.len() {
                return Err(Error::BadParams(format!("no criterion {id}")));
            }
            vec![all[id as usize - 1]()]
        }
    };
    let mut all_pass = true;
    for r in &results {
        println!("{}", r.line());
        all_pass &= r.pass;
    }
    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
