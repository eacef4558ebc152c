//! Command-line front end: measure files in, CSV or JSON out.
//!
//! Measure files are JSON objects
//! `{"type": "atomic" | "nu" | "continuous", "atoms": [{"x": .., "w": ..}], "density": {"xs": [..], "pdf": [..]}}`.
//! Floats are written with 17 significant digits so outputs are reproducible
//! byte for byte.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::oracle::{ks_distance, rmt_sample};
use crate::support::{linear_grid, n_breakpoints};
use crate::{
    convolve_power, merge_threshold, n_curve, support, validate_measure, Atom, Error, MeasureModel,
    MeasureSpec, Result, SamplingOptions,
};

#[derive(Debug, Parser)]
#[command(
    name = "freeconv",
    version,
    about = "Free additive convolution powers of atomic measures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nevanlinna data (a, ρ) of F_μ
    Rho(Common),
    /// Density and atoms of μ^⊞t
    Density {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: f64,
        /// Density samples per component of V_t^+
        #[arg(long, default_value_t = 512)]
        points: usize,
    },
    /// Atoms of μ^⊞t
    Atoms {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: f64,
    },
    /// Support components of μ^⊞t
    Support {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: f64,
    },
    /// Component count n(t) on a linear grid, with refined breakpoints
    Ncurve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long, default_value_t = 64)]
        t_steps: usize,
    },
    /// Merge threshold t0 beyond which the support is one interval
    Merge(Common),
    /// KS distance between μ^⊞t and a random-matrix sample, t an integer
    OracleCompare {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 400)]
        dim: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 512)]
        points: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Measure file
    #[arg(long)]
    pub measure: PathBuf,
    /// Atoms used to discretize a continuous measure
    #[arg(long, default_value_t = 200)]
    pub n_atoms: usize,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Atomic,
    Nu,
    Continuous,
}

#[derive(Debug, Serialize, Deserialize)]
struct AtomEntry {
    x: f64,
    w: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct DensityEntry {
    xs: Vec<f64>,
    pdf: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MeasureFile {
    #[serde(rename = "type")]
    kind: Kind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    atoms: Vec<AtomEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    density: Option<DensityEntry>,
}

pub fn parse_measure(text: &str, origin: &str) -> Result<MeasureSpec> {
    let file: MeasureFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: origin.to_string(),
        msg: e.to_string(),
    })?;
    let atoms = || {
        file.atoms
            .iter()
            .map(|a| Atom::new(a.x, a.w))
            .collect::<Vec<_>>()
    };
    Ok(match file.kind {
        Kind::Atomic => MeasureSpec::Atomic(atoms()),
        Kind::Nu => MeasureSpec::Nu(atoms()),
        Kind::Continuous => {
            let d = file.density.ok_or_else(|| Error::Parse {
                path: origin.to_string(),
                msg: "continuous measure needs a \"density\" object".into(),
            })?;
            MeasureSpec::Continuous {
                xs: d.xs,
                pdf: d.pdf,
            }
        }
    })
}

pub fn parse_measure_file(path: &Path) -> Result<MeasureSpec> {
    parse_measure(&std::fs::read_to_string(path)?, &path.display().to_string())
}

/// Serializes a measure spec in the input file format.
pub fn measure_to_json(spec: &MeasureSpec) -> String {
    let entries = |atoms: &[Atom]| {
        atoms
            .iter()
            .map(|a| AtomEntry {
                x: a.position,
                w: a.mass,
            })
            .collect()
    };
    let file = match spec {
        MeasureSpec::Atomic(a) => MeasureFile {
            kind: Kind::Atomic,
            atoms: entries(a),
            density: None,
        },
        MeasureSpec::Nu(a) => MeasureFile {
            kind: Kind::Nu,
            atoms: entries(a),
            density: None,
        },
        MeasureSpec::Continuous { xs, pdf } => MeasureFile {
            kind: Kind::Continuous,
            atoms: Vec::new(),
            density: Some(DensityEntry {
                xs: xs.clone(),
                pdf: pdf.clone(),
            }),
        },
    };
    serde_json::to_string_pretty(&file).expect("measure serializes") + "\n"
}

pub fn load_model(path: &Path, n_atoms: usize) -> Result<MeasureModel> {
    Ok(MeasureModel::from_validated(validate_measure(
        &parse_measure_file(path)?,
        n_atoms,
    )?))
}

/// Full-precision float for CSV cells.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Rounds to 12 significant digits for human-readable summaries.
fn short(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}")
        .parse()
        .expect("round trip of formatted float")
}

fn csv_block(out: &mut String, header: &str, rows: impl IntoIterator<Item = String>) {
    if !out.is_empty() {
        out.push('\n');
    }
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
}

fn check_t_gt1(t: f64) -> Result<()> {
    if t > 1.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::BadT(t))
    }
}

/// Renders the output of one command.
pub fn execute(command: &Command) -> Result<(String, Option<PathBuf>)> {
    let (common, text) = match command {
        Command::Rho(c) => {
            let m = load_model(&c.measure, c.n_atoms)?;
            let rho = m.rep.rho.atoms();
            let text = match c.format {
                Format::Csv => {
                    let mut s = String::new();
                    csv_block(&mut s, "a", [num(m.rep.a)]);
                    csv_block(
                        &mut s,
                        "position,mass",
                        rho.iter()
                            .map(|a| format!("{},{}", num(a.position), num(a.mass))),
                    );
                    s
                }
                Format::Json => json_text(&json!({
                    "a": m.rep.a,
                    "rho": rho.iter().map(|a| json!({"position": a.position, "mass": a.mass})).collect::<Vec<_>>(),
                })),
            };
            (c, text)
        }
        Command::Density {
            common: c,
            t,
            points,
        } => {
            let m = load_model(&c.measure, c.n_atoms)?;
            let opts = SamplingOptions {
                points_per_component: *points,
                ..SamplingOptions::default()
            };
            let res = convolve_power(&m, *t, &opts)?;
            let text = match c.format {
                Format::Csv => {
                    let mut s = String::new();
                    csv_block(
                        &mut s,
                        "u,pdf",
                        res.density
                            .iter()
                            .map(|d| format!("{},{}", num(d.u), num(d.pdf))),
                    );
                    csv_block(
                        &mut s,
                        "position,mass",
                        res.atoms
                            .iter()
                            .map(|a| format!("{},{}", num(a.position), num(a.mass))),
                    );
                    s
                }
                Format::Json => json_text(&json!({
                    "t": t,
                    "density": res.density.iter().map(|d| json!({"u": d.u, "pdf": d.pdf})).collect::<Vec<_>>(),
                    "atoms": res.atoms.iter().map(|a| json!({"position": a.position, "mass": a.mass})).collect::<Vec<_>>(),
                    "total_mass": res.total_mass(),
                })),
            };
            (c, text)
        }
        Command::Atoms { common: c, t } => {
            check_t_gt1(*t)?;
            let m = load_model(&c.measure, c.n_atoms)?;
            let atoms = crate::atoms_of_power(&m.mu, *t)?;
            let text = match c.format {
                Format::Csv => {
                    let mut s = String::new();
                    csv_block(
                        &mut s,
                        "position,mass",
                        atoms
                            .iter()
                            .map(|a| format!("{},{}", num(a.position), num(a.mass))),
                    );
                    s
                }
                Format::Json => json_text(&json!({
                    "t": t,
                    "atoms": atoms.iter().map(|a| json!({"position": a.position, "mass": a.mass})).collect::<Vec<_>>(),
                })),
            };
            (c, text)
        }
        Command::Support { common: c, t } => {
            let m = load_model(&c.measure, c.n_atoms)?;
            let rep = support(&m, *t)?;
            let text = match c.format {
                Format::Csv => {
                    let mut s = String::new();
                    csv_block(
                        &mut s,
                        "lo,hi,kind",
                        rep.components
                            .iter()
                            .map(|k| format!("{},{},{}", num(k.lo), num(k.hi), k.kind.as_str())),
                    );
                    s
                }
                Format::Json => json_text(&json!({
                    "t": t,
                    "n": rep.n,
                    "components": rep.components.iter()
                        .map(|k| json!({"lo": k.lo, "hi": k.hi, "kind": k.kind.as_str()}))
                        .collect::<Vec<_>>(),
                })),
            };
            (c, text)
        }
        Command::Ncurve {
            common: c,
            t_min,
            t_max,
            t_steps,
        } => {
            check_t_gt1(*t_min)?;
            if !(t_max >= t_min && t_max.is_finite()) || *t_steps == 0 {
                return Err(Error::InvalidParameter(format!(
                    "need t_min <= t_max and t_steps >= 1, got {t_min}, {t_max}, {t_steps}"
                )));
            }
            let m = load_model(&c.measure, c.n_atoms)?;
            let curve = n_curve(&m, &linear_grid(*t_min, *t_max, *t_steps))?;
            let breaks = n_breakpoints(&m, *t_min, *t_max, *t_steps)?;
            let text = match c.format {
                Format::Csv => {
                    let mut s = String::new();
                    csv_block(
                        &mut s,
                        "t,n",
                        curve.iter().map(|(t, n)| format!("{},{n}", num(*t))),
                    );
                    csv_block(
                        &mut s,
                        "t_break,n_before,n_after",
                        breaks
                            .iter()
                            .map(|b| format!("{},{},{}", num(b.t), b.before, b.after)),
                    );
                    s
                }
                Format::Json => json_text(&json!({
                    "curve": curve.iter().map(|(t, n)| json!({"t": t, "n": n})).collect::<Vec<_>>(),
                    "breakpoints": breaks.iter()
                        .map(|b| json!({"t": b.t, "n_before": b.before, "n_after": b.after}))
                        .collect::<Vec<_>>(),
                })),
            };
            (c, text)
        }
        Command::Merge(c) => {
            let m = load_model(&c.measure, c.n_atoms)?;
            let mt = merge_threshold(&m)?;
            let text = match c.format {
                Format::Csv => format!("m={:?} t0={:?}\n", short(mt.m_inf), short(mt.t0)),
                Format::Json => json_text(&json!({"m_inf": finite_or_null(mt.m_inf), "t0": mt.t0})),
            };
            (c, text)
        }
        Command::OracleCompare {
            common: c,
            t,
            dim,
            trials,
            seed,
            points,
        } => {
            if !(*t >= 2.0 && t.fract() == 0.0 && *t <= u32::MAX as f64) {
                return Err(Error::InvalidParameter(format!(
                    "oracle-compare needs an integer t >= 2, got {t}"
                )));
            }
            let m = load_model(&c.measure, c.n_atoms)?;
            let opts = SamplingOptions {
                points_per_component: *points,
                ..SamplingOptions::default()
            };
            let engine = convolve_power(&m, *t, &opts)?;
            let emp = rmt_sample(&m.mu, *t as usize, *dim, *trials, *seed)?;
            let ks = ks_distance(&emp, |u| engine.cdf(u));
            let text = match c.format {
                Format::Csv => format!("ks={:?}\n", short(ks)),
                Format::Json => json_text(&json!({"ks": ks, "samples": emp.count()})),
            };
            (c, text)
        }
    };
    Ok((text, common.out.clone()))
}

fn finite_or_null(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        serde_json::Value::Null
    }
}

fn json_text(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes") + "\n"
}

/// Writes through a temporary file in the target directory, then renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 2,
        _ => 1,
    }
}

/// Parses `args`, runs the command and returns the process exit code:
/// 0 on success, 1 for usage or validation errors, 2 for I/O errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = execute(&cli.command).and_then(|(text, out)| match out {
        Some(path) => write_atomic(&path, &text),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("freeconv: {e}");
            exit_code(&e)
        }
    }
}
