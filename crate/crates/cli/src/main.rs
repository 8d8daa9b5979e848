//! `renorm`: command-line front end for the renormalization toolkit.
//!
//! Every subcommand prints CSV or a plain text report to stdout, or to the
//! file named by `--out`.  File-producing runs also write a JSON manifest to
//! `<out>.manifest.json` recording the command line, configuration,
//! precision, wall time, and the SHA-256 digest of each emitted file.
//! Exit codes: 0 on success, 1 on a domain error (message on stderr),
//! 2 on a usage error.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use renorm_core::cardioid::{cardioid_point, scaling_report};
use renorm_core::hp::{fmt17, fmt17_f64, surd_to_float};
use renorm_core::powertriple::TriplesContext;
use renorm_core::rotnum::{
    branch_at, periodic_point, prime_renorm, BranchSymbol, RenormWord, RotationNumber,
};
use renorm_core::surd::Surd;
use renorm_core::tiling::{
    build_tiling, close_return, close_return_oracle, dominant_points_extended, CloseReturn,
    TilingBudget,
};
use renorm_core::{Error, Result};
use renorm_fractal::orbit::{convergent_times, siegel_orbit};
use renorm_fractal::zoom::zoom_sequence;
use renorm_fractal::{area_estimate, render, ImageGrid, RenderMode, Window};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Output precision for exact quantities that are printed as decimals.
const PRINT_PREC: u32 = 128;

#[derive(Parser)]
#[command(
    name = "renorm",
    version,
    about = "Sector renormalization of rotation numbers: exact combinatorics, \
             cardioid scaling reports, and escape-time experiments"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Mandelbrot,
    Julia,
}

#[derive(Subcommand)]
enum Cmd {
    /// Orbit of an angle under the two-branch renormalization map
    Renorm {
        /// Starting angle: p/q, surd:p,q,r,D, or a decimal
        #[arg(long, allow_hyphen_values = true)]
        theta: String,
        /// Maximum number of map applications
        #[arg(long, default_value_t = 64)]
        steps: usize,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact eigen-data of the periodic angle selected by a branch word
    FixedPoint {
        /// Branch word over {L, R}, e.g. LR or LRR
        #[arg(long)]
        word: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One level of the renormalization tiling over a window
    Tiling {
        #[arg(long)]
        word: String,
        /// Tiling level n (level n-1 is the level-n picture rescaled by t)
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        level: i64,
        /// Left window edge (exact); defaults to -v at level -2
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<String>,
        /// Right window edge (exact); defaults to w at level -2
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dominant preimages of 0 in increasing generation order
    Dominant {
        #[arg(long)]
        word: String,
        /// How many dominant points to enumerate
        #[arg(long, default_value_t = 12)]
        count: usize,
        /// Half-width of the symmetric window [-edge, edge] (exact)
        #[arg(long, allow_hyphen_values = true)]
        edge: Option<String>,
        /// Cap on enumerated classes while seeding
        #[arg(long, default_value_t = 200_000)]
        max_classes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Translation carrying a dominant interval onto an earlier pair
    CloseReturn {
        #[arg(long)]
        word: String,
        /// Index i of the interval [b_i, b_{i+1}]
        #[arg(long)]
        index: usize,
        /// How many dominant points to enumerate first
        #[arg(long)]
        count: Option<usize>,
        /// Half-width of the symmetric window [-edge, edge] (exact)
        #[arg(long)]
        edge: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pull an angle back toward the periodic point and report contraction
    /// ratios on the angle and on the cardioid
    Scaling {
        #[arg(long)]
        word: String,
        /// Starting angle: p/q, surd:p,q,r,D, or a decimal
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Escape-time image of the Mandelbrot set or a Julia set
    Render {
        #[arg(long, value_enum, default_value_t = ModeArg::Mandelbrot)]
        mode: ModeArg,
        /// Julia parameter as re,im (julia mode only)
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        /// Window centre as re,im
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        center: String,
        #[arg(long, default_value_t = 4.0)]
        width: f64,
        /// Square image side in pixels
        #[arg(long, default_value_t = 512)]
        px: usize,
        #[arg(long, default_value_t = 256)]
        max_iter: u32,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Image file (.ppm or .png); digest is recorded in the manifest
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Geometric zoom sequence with per-frame boundary statistics
    Zoom {
        /// Zoom on the satellite parameter c(theta_star) of this word, with
        /// the word's parameter scaling rate as the zoom factor
        #[arg(long)]
        word: Option<String>,
        /// Julia parameter as re,im (default is the Mandelbrot set)
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        /// Zoom centre as re,im (required without --word)
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        /// Width-division factor per frame (required without --word)
        #[arg(long)]
        factor: Option<f64>,
        #[arg(long, default_value_t = 0.08)]
        width: f64,
        #[arg(long, default_value_t = 3)]
        frames: usize,
        #[arg(long, default_value_t = 192)]
        px: usize,
        /// Iteration budget of frame 0; later frames scale it up
        #[arg(long, default_value_t = 8000)]
        base_iter: u32,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Frame k is written to <stem>-k.<ext>
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Critical orbit inside the Siegel disk of the word's periodic angle
    Siegel {
        #[arg(long)]
        word: String,
        /// Number of orbit points
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Working precision in bits
        #[arg(long, default_value_t = 128)]
        prec: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pixel-counting area of a filled Julia set
    Area {
        /// Use the satellite parameter c(theta_star) of this word
        #[arg(long)]
        word: Option<String>,
        /// Julia parameter as re,im
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[arg(long, default_value_t = 1024)]
        px: usize,
        #[arg(long, default_value_t = 2000)]
        max_iter: u32,
        /// Window width around 0 (must cover the disk |z| <= 2)
        #[arg(long, default_value_t = 4.5)]
        width: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closest-return times and contraction ratios of the Siegel critical
    /// orbit (empirical self-similarity probe)
    SelfSim {
        #[arg(long)]
        word: String,
        /// Number of closest returns to report
        #[arg(long, default_value_t = 6)]
        returns: usize,
        /// Working precision in bits
        #[arg(long, default_value_t = 128)]
        prec: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    let report = RunReport::new();
    match cli.cmd {
        Cmd::Renorm { theta, steps, out } => cmd_renorm(report, theta, steps, out),
        Cmd::FixedPoint { word, out } => cmd_fixed_point(report, word, out),
        Cmd::Tiling {
            word,
            level,
            lo,
            hi,
            out,
        } => cmd_tiling(report, word, level, lo, hi, out),
        Cmd::Dominant {
            word,
            count,
            edge,
            max_classes,
            out,
        } => cmd_dominant(report, word, count, edge, max_classes, out),
        Cmd::CloseReturn {
            word,
            index,
            count,
            edge,
            out,
        } => cmd_close_return(report, word, index, count, edge, out),
        Cmd::Scaling {
            word,
            start,
            steps,
            out,
        } => cmd_scaling(report, word, start, steps, out),
        Cmd::Render {
            mode,
            c,
            center,
            width,
            px,
            max_iter,
            threads,
            out,
        } => cmd_render(report, mode, c, center, width, px, max_iter, threads, out),
        Cmd::Zoom {
            word,
            c,
            center,
            factor,
            width,
            frames,
            px,
            base_iter,
            threads,
            out,
        } => cmd_zoom(
            report, word, c, center, factor, width, frames, px, base_iter, threads, out,
        ),
        Cmd::Siegel {
            word,
            count,
            prec,
            out,
        } => cmd_siegel(report, word, count, prec, out),
        Cmd::Area {
            word,
            c,
            px,
            max_iter,
            width,
            out,
        } => cmd_area(report, word, c, px, max_iter, width, out),
        Cmd::SelfSim {
            word,
            returns,
            prec,
            out,
        } => cmd_self_sim(report, word, returns, prec, out),
    }
}

// ---------------------------------------------------------------------------
// Run manifest

#[derive(Serialize)]
struct OutputRecord {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest {
    command: Vec<String>,
    config: BTreeMap<String, String>,
    precision_bits: u32,
    wall_time_seconds: f64,
    outputs: Vec<OutputRecord>,
}

struct RunReport {
    started: Instant,
    config: BTreeMap<String, String>,
    precision_bits: u32,
    outputs: Vec<OutputRecord>,
}

impl RunReport {
    fn new() -> RunReport {
        RunReport {
            started: Instant::now(),
            config: BTreeMap::new(),
            precision_bits: 53,
            outputs: Vec::new(),
        }
    }

    fn set(&mut self, key: &str, value: impl Display) {
        self.config.insert(key.to_string(), value.to_string());
    }

    fn write_file(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        fs::write(path, bytes)
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?;
        let sha = hex::encode(Sha256::digest(bytes));
        println!("wrote {} sha256 {sha}", path.display());
        self.outputs.push(OutputRecord {
            path: path.display().to_string(),
            sha256: sha,
        });
        Ok(())
    }

    /// Text payload to `--out` when given, else to stdout.
    fn emit_text(&mut self, out: Option<&Path>, text: &str) -> Result<()> {
        match out {
            Some(p) => self.write_file(p, text.as_bytes()),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    /// Write `<out>.manifest.json` next to the primary output.
    fn finish(self, out: Option<&Path>) -> Result<()> {
        let Some(out) = out else { return Ok(()) };
        let manifest = RunManifest {
            command: std::env::args().collect(),
            config: self.config,
            precision_bits: self.precision_bits,
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
            outputs: self.outputs,
        };
        let body = serde_json::to_string_pretty(&manifest)
            .map_err(|e| Error::Domain(format!("manifest serialization failed: {e}")))?;
        let path = manifest_path(out);
        fs::write(&path, format!("{body}\n"))
            .map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))?;
        Ok(())
    }
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".manifest.json");
    PathBuf::from(s)
}

// ---------------------------------------------------------------------------
// Argument parsing helpers

fn parse_decimal_rational(s: &str) -> Result<BigRational> {
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(Error::Domain(format!("cannot parse number `{s}`")));
    }
    let joined = format!(
        "{}{}",
        if int_part.is_empty() { "0" } else { int_part },
        frac_part
    );
    let n: BigInt = joined
        .parse()
        .map_err(|e| Error::Domain(format!("bad decimal `{s}`: {e}")))?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    Ok(BigRational::new(n * BigInt::from(sign), den))
}

/// Exact value in the field Q(sqrt(d)): `p/q`, `surd:p,q,r,D`, or a decimal.
/// Unlike rotation-number parsing this does not wrap modulo 1, so window
/// edges may be negative or exceed 1.
fn parse_exact(s: &str, d: u64) -> Result<Surd> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("surd:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::Domain(format!(
                "surd literal needs p,q,r,D — got `{rest}`"
            )));
        }
        let num = |t: &str, what: &str| -> Result<BigInt> {
            t.trim()
                .parse()
                .map_err(|e| Error::Domain(format!("bad surd {what}: {e}")))
        };
        let p = num(parts[0], "p")?;
        let q = num(parts[1], "q")?;
        let r = num(parts[2], "r")?;
        let dd: u64 = parts[3]
            .trim()
            .parse()
            .map_err(|e| Error::Domain(format!("bad surd D: {e}")))?;
        if r.is_zero() {
            return Err(Error::Domain("surd r must be nonzero".into()));
        }
        if q.is_zero() {
            return Ok(Surd::new(p, q, r, d));
        }
        if dd != d {
            return Err(Error::MixedField(dd, d));
        }
        return Ok(Surd::new(p, q, r, d));
    }
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a
            .trim()
            .parse()
            .map_err(|e| Error::Domain(format!("bad numerator: {e}")))?;
        let m: BigInt = b
            .trim()
            .parse()
            .map_err(|e| Error::Domain(format!("bad denominator: {e}")))?;
        if m.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        return Ok(Surd::new(n, BigInt::from(0), m, d));
    }
    Ok(Surd::from_rational(&parse_decimal_rational(s)?, d))
}

/// `re,im` pair of floats; a bare `re` means imaginary part zero.
fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let bad = |t: &str| Error::Domain(format!("bad coordinate `{t}` in `{s}`"));
    match s.split_once(',') {
        Some((a, b)) => Ok((
            a.trim().parse().map_err(|_| bad(a))?,
            b.trim().parse().map_err(|_| bad(b))?,
        )),
        None => Ok((s.trim().parse().map_err(|_| bad(s))?, 0.0)),
    }
}

fn context_for(word: &str) -> Result<TriplesContext> {
    Ok(TriplesContext::new(periodic_point(&RenormWord::parse(
        word,
    )?)?))
}

fn dec(x: &Surd) -> String {
    fmt17(&surd_to_float(x, PRINT_PREC))
}

fn image_bytes(grid: &ImageGrid, path: &Path) -> Result<Vec<u8>> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("ppm") => Ok(grid.ppm_bytes()),
        Some("png") => grid.png_bytes(),
        _ => Err(Error::Domain(format!(
            "image output `{}` must end in .ppm or .png",
            path.display()
        ))),
    }
}

// ---------------------------------------------------------------------------
// Subcommands

fn cmd_renorm(
    mut report: RunReport,
    theta: String,
    steps: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    report.set("theta", &theta);
    report.set("steps", steps);
    report.precision_bits = PRINT_PREC;
    let mut cur = RotationNumber::parse(&theta)?;
    let mut csv = String::from("step,theta,branch\n");
    for step in 0..=steps {
        let val = fmt17(&cur.to_float(PRINT_PREC));
        if cur.is_zero() {
            csv.push_str(&format!("{step},{val},\n"));
            break;
        }
        let branch = match branch_at(&cur)? {
            BranchSymbol::L => 'L',
            BranchSymbol::R => 'R',
        };
        csv.push_str(&format!("{step},{val},{branch}\n"));
        if step == steps {
            break;
        }
        cur = prime_renorm(&cur)?;
    }
    report.emit_text(out.as_deref(), &csv)?;
    report.finish(out.as_deref())
}

fn cmd_fixed_point(mut report: RunReport, word: String, out: Option<PathBuf>) -> Result<()> {
    report.set("word", &word);
    report.precision_bits = PRINT_PREC;
    let e = periodic_point(&RenormWord::parse(&word)?)?;
    let mut s = String::new();
    s.push_str(&format!("word {}\n", e.word));
    s.push_str(&format!("period {}\n", e.word.len()));
    s.push_str(&format!("matrix {}\n", e.matrix));
    s.push_str(&format!("det {}\n", e.matrix.det()));
    s.push_str(&format!("trace {}\n", e.matrix.trace()));
    s.push_str(&format!("discriminant {}\n", e.disc));
    s.push_str(&format!("theta_star {} = {}\n", e.theta_star, dec(&e.theta_star)));
    s.push_str(&format!("t {} = {}\n", e.t, dec(&e.t)));
    s.push_str(&format!(
        "lambda_star {} = {}\n",
        e.lambda_star,
        dec(&e.lambda_star)
    ));
    report.emit_text(out.as_deref(), &s)?;
    report.finish(out.as_deref())
}

fn cmd_tiling(
    mut report: RunReport,
    word: String,
    level: i64,
    lo: Option<String>,
    hi: Option<String>,
    out: Option<PathBuf>,
) -> Result<()> {
    report.set("word", &word);
    report.set("level", level);
    report.precision_bits = PRINT_PREC;
    let ctx = context_for(&word)?;
    let d = ctx.disc();
    // Default to the window [-v_{-2}, w_{-2}] that frames the base tiles of
    // level -2 exactly; deeper levels then show the rescaling structure.
    let lo = match &lo {
        Some(s) => parse_exact(s, d)?,
        None => -&ctx.v_at(-2),
    };
    let hi = match &hi {
        Some(s) => parse_exact(s, d)?,
        None => ctx.w_at(-2),
    };
    report.set("lo", &lo);
    report.set("hi", &hi);
    let tiling = build_tiling(&ctx, level, (&lo, &hi), &TilingBudget::default())?;
    let mut csv = String::from("index,kind,left,right,landing_n,landing_a,landing_b\n");
    for t in &tiling.tiles {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            t.index,
            t.kind,
            dec(&t.left),
            dec(&t.right),
            t.landing.n,
            t.landing.a,
            t.landing.b
        ));
    }
    report.emit_text(out.as_deref(), &csv)?;
    eprintln!("{} tiles, kinds {}", tiling.tiles.len(), tiling.kinds_string());
    report.finish(out.as_deref())
}

fn symmetric_window(edge: &Option<String>, d: u64) -> Result<(Surd, Surd)> {
    let edge = match edge {
        Some(s) => parse_exact(s, d)?,
        // Just inside [-1, 1]: the classes with |b_P| = 1 sit exactly on the
        // unit edges and whether they count as dominant would depend on the
        // window's closedness, so keep them out by default.
        None => Surd::new(9, 0, 10, d),
    };
    if edge.signum() <= 0 {
        return Err(Error::Domain("edge must be positive".into()));
    }
    Ok((-&edge, edge))
}

fn cmd_dominant(
    mut report: RunReport,
    word: String,
    count: usize,
    edge: Option<String>,
    max_classes: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    report.set("word", &word);
    report.set("count", count);
    report.set("max_classes", max_classes);
    report.precision_bits = PRINT_PREC;
    let ctx = context_for(&word)?;
    let (lo, hi) = symmetric_window(&edge, ctx.disc())?;
    report.set("edge", &hi);
    let doms = dominant_points_extended(&ctx, count, (&lo, &hi), max_classes)?;
    let mut csv = String::from("index,n,a,b,iota,position\n");
    for p in &doms.points {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.index,
            p.generation.n,
            p.generation.a,
            p.generation.b,
            dec(&p.iota),
            dec(&p.position)
        ));
    }
    report.emit_text(out.as_deref(), &csv)?;
    if let Some(k) = doms.k {
        eprintln!("shift k = {k}");
    }
    report.finish(out.as_deref())
}

fn cmd_close_return(
    mut report: RunReport,
    word: String,
    index: usize,
    count: Option<usize>,
    edge: Option<String>,
    out: Option<PathBuf>,
) -> Result<()> {
    report.set("word", &word);
    report.set("index", index);
    report.precision_bits = PRINT_PREC;
    let ctx = context_for(&word)?;
    let (lo, hi) = symmetric_window(&edge, ctx.disc())?;
    // The oracle bounds its search by the generation of point index + 2.
    let count = count.unwrap_or_else(|| (index + 3).max(12));
    if count < index + 3 {
        return Err(Error::Domain(format!(
            "index {index} needs at least {} dominant points, got --count {count}",
            index + 3
        )));
    }
    report.set("count", count);
    let doms = dominant_points_extended(&ctx, count, (&lo, &hi), 200_000)?;
    let constructive = close_return(&ctx, &doms.points, index)?;
    let oracle = close_return_oracle(&ctx, &doms.points, index)?;
    let mut csv = String::from("source,index,n,m,q_n,q_a,q_b\n");
    let row = |source: &str, cr: &CloseReturn| {
        format!(
            "{source},{index},{},{},{},{},{}\n",
            cr.n, cr.m, cr.q.n, cr.q.a, cr.q.b
        )
    };
    csv.push_str(&row("constructive", &constructive));
    for cr in &oracle {
        csv.push_str(&row("oracle", cr));
    }
    report.emit_text(out.as_deref(), &csv)?;
    report.finish(out.as_deref())
}

fn cmd_scaling(
    mut report: RunReport,
    word: String,
    start: String,
    steps: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    report.set("word", &word);
    report.set("start", &start);
    report.set("steps", steps);
    let w = RenormWord::parse(&word)?;
    let r0 = RotationNumber::parse(&start)?;
    let rep = scaling_report(&w, &r0, steps)?;
    report.precision_bits = rep.precision;
    report.emit_text(out.as_deref(), &rep.to_csv())?;
    match (rep.final_angle_ratio(), rep.final_param_ratio()) {
        (Some(a), Some(p)) => eprintln!(
            "final angle ratio {}, parameter ratio {}",
            fmt17_f64(a),
            fmt17_f64(p)
        ),
        _ => eprintln!("ratios undefined (exact fixed point reached)"),
    }
    if rep.truncated {
        eprintln!(
            "stopped after {} rows: errors reached the rounding floor",
            rep.rows.len()
        );
    }
    report.finish(out.as_deref())
}

#[allow(clippy::too_many_arguments)]
fn cmd_render(
    mut report: RunReport,
    mode: ModeArg,
    c: Option<String>,
    center: String,
    width: f64,
    px: usize,
    max_iter: u32,
    threads: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    let mode = match mode {
        ModeArg::Mandelbrot => {
            report.set("mode", "mandelbrot");
            RenderMode::Mandelbrot
        }
        ModeArg::Julia => {
            let c = parse_pair(
                c.as_deref()
                    .ok_or_else(|| Error::Domain("julia mode needs --c re,im".into()))?,
            )?;
            report.set("mode", "julia");
            report.set("c", format!("{},{}", fmt17_f64(c.0), fmt17_f64(c.1)));
            RenderMode::Julia { c }
        }
    };
    let center = parse_pair(&center)?;
    report.set("center", format!("{},{}", center.0, center.1));
    report.set("width", width);
    report.set("px", px);
    report.set("max_iter", max_iter);
    report.set("threads", threads);
    let grid = render(mode, Window::new(center.0, center.1, width), (px, px), max_iter, threads)?;
    println!("grid {}x{} digest {}", grid.px_width, grid.px_height, grid.digest());
    println!("escaped {} of {}", grid.escaped_count(), px * px);
    if let Some(path) = &out {
        let bytes = image_bytes(&grid, path)?;
        report.write_file(path, &bytes)?;
    }
    report.finish(out.as_deref())
}

#[allow(clippy::too_many_arguments)]
fn cmd_zoom(
    mut report: RunReport,
    word: Option<String>,
    c: Option<String>,
    center: Option<String>,
    factor: Option<f64>,
    width: f64,
    frames: usize,
    px: usize,
    base_iter: u32,
    threads: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    let (mode, center, factor) = if let Some(ws) = &word {
        if c.is_some() || center.is_some() || factor.is_some() {
            return Err(Error::Domain(
                "--word picks the centre and factor itself; drop --c/--center/--factor".into(),
            ));
        }
        let e = periodic_point(&RenormWord::parse(ws)?)?;
        let cp = cardioid_point(
            &RotationNumber::from_surd(e.theta_star.clone()),
            PRINT_PREC,
        );
        report.set("word", ws);
        (
            RenderMode::Mandelbrot,
            cp.c.to_f64(),
            surd_to_float(&e.lambda_star, 64).to_f64(),
        )
    } else {
        let center = parse_pair(center.as_deref().ok_or_else(|| {
            Error::Domain("zoom needs --center and --factor (or --word)".into())
        })?)?;
        let factor = factor.ok_or_else(|| {
            Error::Domain("zoom needs --center and --factor (or --word)".into())
        })?;
        let mode = match &c {
            Some(s) => RenderMode::Julia { c: parse_pair(s)? },
            None => RenderMode::Mandelbrot,
        };
        (mode, center, factor)
    };
    report.set("center", format!("{},{}", fmt17_f64(center.0), fmt17_f64(center.1)));
    report.set("factor", fmt17_f64(factor));
    report.set("width", width);
    report.set("frames", frames);
    report.set("px", px);
    report.set("base_iter", base_iter);
    report.set("threads", threads);
    let seq = zoom_sequence(mode, center, width, factor, frames, px, base_iter, threads)?;
    let mut csv = String::from("frame,width,max_iter,boundary_fraction,digest\n");
    for f in &seq {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            f.index,
            fmt17_f64(f.grid.window.width),
            f.max_iter,
            fmt17_f64(f.boundary_fraction),
            f.grid.digest()
        ));
    }
    print!("{csv}");
    if let Some(path) = &out {
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "frame".into());
        let ext = path
            .extension()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "ppm".into());
        for f in &seq {
            let frame_path = path.with_file_name(format!("{stem}-{}.{ext}", f.index));
            let bytes = image_bytes(&f.grid, &frame_path)?;
            report.write_file(&frame_path, &bytes)?;
        }
    }
    report.finish(out.as_deref())
}

fn cmd_siegel(
    mut report: RunReport,
    word: String,
    count: usize,
    prec: u32,
    out: Option<PathBuf>,
) -> Result<()> {
    report.set("word", &word);
    report.set("count", count);
    let orbit = siegel_orbit(&RenormWord::parse(&word)?, count, prec)?;
    report.precision_bits = orbit.precision;
    let mut csv = String::from("k,re,im\n");
    for (k, (re, im)) in orbit.points.iter().enumerate() {
        csv.push_str(&format!("{k},{},{}\n", fmt17_f64(*re), fmt17_f64(*im)));
    }
    report.emit_text(out.as_deref(), &csv)?;
    eprintln!(
        "max magnitude {}, min distance to centre {}, winding {}",
        fmt17_f64(orbit.max_magnitude()),
        fmt17_f64(orbit.min_distance_to_fixed_point()),
        fmt17_f64(orbit.winding_estimate())
    );
    report.finish(out.as_deref())
}

fn cmd_area(
    mut report: RunReport,
    word: Option<String>,
    c: Option<String>,
    px: usize,
    max_iter: u32,
    width: f64,
    out: Option<PathBuf>,
) -> Result<()> {
    let c = match (&word, &c) {
        (Some(w), None) => {
            report.set("word", w);
            let e = periodic_point(&RenormWord::parse(w)?)?;
            cardioid_point(&RotationNumber::from_surd(e.theta_star.clone()), PRINT_PREC)
                .c
                .to_f64()
        }
        (None, Some(s)) => parse_pair(s)?,
        _ => {
            return Err(Error::Domain(
                "area needs exactly one of --word or --c".into(),
            ))
        }
    };
    report.set("c", format!("{},{}", fmt17_f64(c.0), fmt17_f64(c.1)));
    report.set("px", px);
    report.set("max_iter", max_iter);
    report.set("width", width);
    let est = area_estimate(c, px, max_iter, Window::new(0.0, 0.0, width))?;
    let csv = format!(
        "resolution,max_iter,bounded_cells,interior_cells,pixel_area,lower,upper,estimate\n\
         {},{},{},{},{},{},{},{}\n",
        px,
        max_iter,
        est.bounded_cells,
        est.interior_cells,
        fmt17_f64(est.pixel_area),
        fmt17_f64(est.lower),
        fmt17_f64(est.upper),
        fmt17_f64(est.estimate)
    );
    report.emit_text(out.as_deref(), &csv)?;
    report.finish(out.as_deref())
}

fn cmd_self_sim(
    mut report: RunReport,
    word: String,
    returns: usize,
    prec: u32,
    out: Option<PathBuf>,
) -> Result<()> {
    if returns == 0 {
        return Err(Error::Domain("need at least one return".into()));
    }
    report.set("word", &word);
    report.set("returns", returns);
    let w = RenormWord::parse(&word)?;
    let e = periodic_point(&w)?;
    // Return times are the denominators of the angle's continued-fraction
    // convergents, so an orbit a little past twice the last one is enough.
    let times = convergent_times(&e.theta_star, returns)?;
    let budget = *times.last().expect("returns > 0") as usize * 2 + 2;
    let orbit = siegel_orbit(&w, budget, prec)?;
    report.precision_bits = orbit.precision;
    let found = orbit.closest_returns();
    if found.len() < returns {
        return Err(Error::Domain(format!(
            "only {} closest returns within {budget} orbit points",
            found.len()
        )));
    }
    let mut csv = String::from("k,time,distance,ratio\n");
    let mut prev: Option<f64> = None;
    for (k, (time, dist)) in found.iter().take(returns).enumerate() {
        let ratio = prev.map(|p| fmt17_f64(p / dist)).unwrap_or_default();
        csv.push_str(&format!("{k},{time},{},{ratio}\n", fmt17_f64(*dist)));
        prev = Some(*dist);
    }
    report.emit_text(out.as_deref(), &csv)?;
    report.finish(out.as_deref())
}
