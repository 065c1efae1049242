//! `key = value` run configuration.
//!
//! Blank lines and `#` comments are ignored; every key may appear once.
//! [`RunConfig::to_text`] prints every key in canonical order, so a file
//! written in that form survives a parse/print round trip byte for byte
//! (comments aside).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::solver::SolverConfig;
use crate::spectral::GridSpec;
use crate::verification::ManufacturedSolution;

const KEYS: &[&str] = &[
    "M",
    "L1",
    "L2",
    "gamma",
    "gamma1",
    "gamma2",
    "drift_x",
    "drift_y",
    "dt",
    "T",
    "rel_tol",
    "max_iter",
    "initial",
    "diagnostics",
    "output_dir",
    "snapshot_every",
    "dts",
    "Ns",
    "N_ref",
    "ms_amplitude",
    "ms_decay",
    "ms_mode",
];

const REQUIRED: &[&str] = &["M", "dt", "T", "initial"];

/// Initial condition selector.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialSpec {
    Zero,
    Smooth,
    Borderline,
    /// `u*(0)` of the configured manufactured solution.
    Manufactured,
    Mode {
        k1: usize,
        k2: usize,
        amplitude: f64,
    },
    /// A snapshot file, resampled to the run's resolution.
    File(PathBuf),
}

impl InitialSpec {
    fn parse(s: &str) -> std::result::Result<Self, String> {
        match s {
            "zero" => Ok(Self::Zero),
            "smooth" => Ok(Self::Smooth),
            "borderline" => Ok(Self::Borderline),
            "manufactured" => Ok(Self::Manufactured),
            _ => {
                if let Some(rest) = s.strip_prefix("mode:") {
                    let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
                    if parts.len() != 3 {
                        return Err(format!("expected mode:k1,k2,amplitude, got `{s}`"));
                    }
                    Ok(Self::Mode {
                        k1: parse_num(parts[0])?,
                        k2: parse_num(parts[1])?,
                        amplitude: parse_num(parts[2])?,
                    })
                } else if let Some(path) = s.strip_prefix("file:") {
                    if path.is_empty() {
                        return Err("empty snapshot path".into());
                    }
                    Ok(Self::File(PathBuf::from(path)))
                } else {
                    Err(format!(
                        "unknown initial condition `{s}` (zero, smooth, borderline, manufactured, mode:k1,k2,a, file:path)"
                    ))
                }
            }
        }
    }

    fn render(&self) -> String {
        match self {
            Self::Zero => "zero".into(),
            Self::Smooth => "smooth".into(),
            Self::Borderline => "borderline".into(),
            Self::Manufactured => "manufactured".into(),
            Self::Mode { k1, k2, amplitude } => format!("mode:{k1},{k2},{amplitude:?}"),
            Self::File(p) => format!("file:{}", p.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub modes: usize,
    pub lx: f64,
    pub ly: f64,
    pub params: ModelParams,
    pub dt: f64,
    pub t_end: f64,
    pub solver: SolverConfig,
    pub initial: InitialSpec,
    pub diagnostics: bool,
    pub output_dir: PathBuf,
    pub snapshot_every: usize,
    pub dts: Vec<f64>,
    pub ns: Vec<usize>,
    pub n_ref: usize,
    pub manufactured: ManufacturedSolution,
}

fn parse_num<T: std::str::FromStr>(s: &str) -> std::result::Result<T, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("cannot parse `{}` as a number", s.trim()))
}

fn parse_list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, String> {
    s.split(',').map(parse_num).collect()
}

fn render_list<T: std::fmt::Debug>(v: &[T]) -> String {
    v.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected true or false, got `{s}`")),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: HashMap<&str, (usize, &str)> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
                line,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Parse {
                    line,
                    message: format!("unknown key `{key}`"),
                });
            }
            if value.is_empty() {
                return Err(Error::Parse {
                    line,
                    message: format!("missing value for `{key}`"),
                });
            }
            if let Some((first, _)) = entries.insert(key, (line, value)) {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate key `{key}` (first set on line {first})"),
                });
            }
        }

        let missing: Vec<&str> = REQUIRED
            .iter()
            .copied()
            .filter(|k| !entries.contains_key(k))
            .collect();
        if !missing.is_empty() {
            return Err(Error::Config(format!(
                "missing required keys: {}",
                missing.join(", ")
            )));
        }

        let line_of = |key: &str| entries.get(key).map_or(0, |e| e.0);
        let get = |key: &str| entries.get(key).copied();
        fn field<T>(
            entry: Option<(usize, &str)>,
            default: T,
            parse: impl Fn(&str) -> std::result::Result<T, String>,
        ) -> Result<T> {
            match entry {
                None => Ok(default),
                Some((line, v)) => parse(v).map_err(|message| Error::Parse { line, message }),
            }
        }
        let sem = |key: &str, message: String| Error::Parse {
            line: line_of(key),
            message,
        };

        let modes: usize = field(get("M"), 0, parse_num)?;
        let lx: f64 = field(get("L1"), PI, parse_num)?;
        let ly: f64 = field(get("L2"), PI, parse_num)?;
        let gamma: f64 = field(get("gamma"), 1.0, parse_num)?;
        let gamma1: f64 = field(get("gamma1"), 0.0, parse_num)?;
        let gamma2: f64 = field(get("gamma2"), 1.0, parse_num)?;
        let drift_x: f64 = field(get("drift_x"), 1.0, parse_num)?;
        let drift_y: f64 = field(get("drift_y"), 1.0, parse_num)?;
        let dt: f64 = field(get("dt"), 0.0, parse_num)?;
        let t_end: f64 = field(get("T"), 0.0, parse_num)?;
        let rel_tol: f64 = field(get("rel_tol"), 1e-10, parse_num)?;
        let max_iter: usize = field(get("max_iter"), 500, parse_num)?;
        let initial = field(get("initial"), InitialSpec::Zero, InitialSpec::parse)?;
        let diagnostics = field(get("diagnostics"), true, parse_bool)?;
        let output_dir = field(get("output_dir"), PathBuf::from("out"), |s| {
            Ok(PathBuf::from(s))
        })?;
        let snapshot_every: Option<usize> =
            field(get("snapshot_every"), None, |s| parse_num(s).map(Some))?;
        let dts: Vec<f64> = field(
            get("dts"),
            vec![1.0 / 40.0, 1.0 / 80.0, 1.0 / 160.0, 1.0 / 320.0],
            parse_list,
        )?;
        let ns: Vec<usize> = field(get("Ns"), vec![4, 8, 16, 32], parse_list)?;
        let n_ref: usize = field(get("N_ref"), 64, parse_num)?;
        let ms_default = ManufacturedSolution::default();
        let amplitude: f64 = field(get("ms_amplitude"), ms_default.amplitude, parse_num)?;
        let decay: f64 = field(get("ms_decay"), ms_default.decay, parse_num)?;
        let ms_mode: Vec<usize> = field(get("ms_mode"), vec![1, 1], parse_list)?;

        // Semantic checks.
        GridSpec::new(modes, lx, ly).map_err(|e| {
            let key = if modes == 0 {
                "M"
            } else if !(lx > 0.0) {
                "L1"
            } else {
                "L2"
            };
            sem(key, e.to_string())
        })?;
        let params = ModelParams::new(gamma, gamma1, gamma2, [drift_x, drift_y]).map_err(|e| {
            let key = if !(gamma > 0.0) { "gamma" } else { "gamma2" };
            sem(key, e.to_string())
        })?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(sem("dt", format!("dt must be positive, got {dt}")));
        }
        if !(t_end.is_finite() && t_end >= 0.0) {
            return Err(sem("T", format!("T must be non-negative, got {t_end}")));
        }
        let steps = (t_end / dt).round();
        if (steps * dt - t_end).abs() > 1e-12 * t_end.max(1.0) {
            return Err(sem(
                "T",
                format!("T = {t_end} is not a whole number of steps of dt = {dt}"),
            ));
        }
        if !(rel_tol.is_finite() && rel_tol > 0.0) {
            return Err(sem(
                "rel_tol",
                format!("rel_tol must be positive, got {rel_tol}"),
            ));
        }
        if max_iter == 0 {
            return Err(sem("max_iter", "max_iter must be at least 1".into()));
        }
        if diagnostics {
            if gamma2 <= 0.0 {
                return Err(sem(
                    "gamma2",
                    "diagnostics need c0 = gamma1^2/(3*gamma2) + 1, which requires gamma2 > 0"
                        .into(),
                ));
            }
            let limit = params.dt_limit()?;
            if dt >= limit {
                return Err(sem(
                    "dt",
                    format!(
                        "dt >= 4*gamma/c0^2 = {limit}; the discrete L2 bound needs a smaller step"
                    ),
                ));
            }
        }
        if let Some(0) = snapshot_every {
            return Err(sem(
                "snapshot_every",
                "snapshot_every must be at least 1".into(),
            ));
        }
        let snapshot_every = snapshot_every.unwrap_or(((steps as usize) / 10).max(1));
        if dts.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(sem("dts", "all step sizes must be positive".into()));
        }
        if ns.iter().any(|&n| n == 0) || n_ref == 0 {
            return Err(sem("Ns", "resolutions must be at least 1".into()));
        }
        if ms_mode.len() != 2 || ms_mode.contains(&0) {
            return Err(sem(
                "ms_mode",
                "ms_mode must be two positive integers k1, k2".into(),
            ));
        }
        if let InitialSpec::Mode { k1, k2, .. } = initial {
            if k1 == 0 || k2 == 0 || k1 > modes || k2 > modes {
                return Err(sem(
                    "initial",
                    format!("mode ({k1}, {k2}) outside 1..={modes}"),
                ));
            }
        }

        Ok(Self {
            modes,
            lx,
            ly,
            params,
            dt,
            t_end,
            solver: SolverConfig { rel_tol, max_iter },
            initial,
            diagnostics,
            output_dir,
            snapshot_every,
            dts,
            ns,
            n_ref,
            manufactured: ManufacturedSolution {
                amplitude,
                decay,
                mode: (ms_mode[0], ms_mode[1]),
            },
        })
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.modes, self.lx, self.ly)
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Canonical text: every key, in a fixed order, one per line.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let ms = &self.manufactured;
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("M", self.modes.to_string());
        put("L1", format!("{:?}", self.lx));
        put("L2", format!("{:?}", self.ly));
        put("gamma", format!("{:?}", p.gamma));
        put("gamma1", format!("{:?}", p.gamma1));
        put("gamma2", format!("{:?}", p.gamma2));
        put("drift_x", format!("{:?}", p.drift[0]));
        put("drift_y", format!("{:?}", p.drift[1]));
        put("dt", format!("{:?}", self.dt));
        put("T", format!("{:?}", self.t_end));
        put("rel_tol", format!("{:?}", self.solver.rel_tol));
        put("max_iter", self.solver.max_iter.to_string());
        put("initial", self.initial.render());
        put("diagnostics", self.diagnostics.to_string());
        put("output_dir", self.output_dir.display().to_string());
        put("snapshot_every", self.snapshot_every.to_string());
        put("dts", render_list(&self.dts));
        put("Ns", render_list(&self.ns));
        put("N_ref", self.n_ref.to_string());
        put("ms_amplitude", format!("{:?}", ms.amplitude));
        put("ms_decay", format!("{:?}", ms.decay));
        put("ms_mode", format!("{}, {}", ms.mode.0, ms.mode.1));
        s
    }
}

/// Free-function form of [`RunConfig::parse`].
pub fn parse_config(text: &str) -> Result<RunConfig> {
    RunConfig::parse(text)
}
