//! Sweep configuration documents.
//!
//! A configuration is a TOML document:
//!
//! ```toml
//! command = "sweep-snr"
//! regimes = ["pa-theorem1", "no-csit"]
//! output = "fig2.csv"          # optional
//!
//! [fixed]
//! sigma = 0.5
//! length = 300
//!
//! [[axis]]
//! name = "snr_db"
//! start = 0
//! stop = 30
//! step = 1                     # or: values = [0, 5, 10]
//!
//! [mc]                         # optional
//! samples = 100000
//! seed = 7
//! batch = 4096
//! ```
//!
//! Unknown keys, duplicate bindings and non-increasing axes are rejected with
//! the line they occur on.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;
use toml::Spanned;

pub const DEFAULT_MC_SAMPLES: u64 = 100_000;
pub const DEFAULT_MC_BATCH: u64 = 4096;
pub const DEFAULT_SEED: u64 = 0x5_eed0_ffb1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(text: &str, span: Option<Range<usize>>, message: impl Into<String>) -> Self {
        Self {
            line: span.map(|s| line_of(text, s.start)),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn line_of(text: &str, offset: usize) -> usize {
    text.as_bytes()[..offset.min(text.len())]
        .iter()
        .filter(|&&b| b == b'\n')
        .count()
        + 1
}

macro_rules! named_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn name(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!(
                        "unknown {} `{s}` (expected one of: {})",
                        stringify!($name).to_lowercase(),
                        [$($text),+].join(", ")
                    )),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

named_enum!(Command {
    SweepSnr => "sweep-snr",
    SweepLength => "sweep-length",
    SweepSpeed => "sweep-speed",
    SweepRate => "sweep-rate",
    ErrorVsLength => "error-vs-length",
    ErrorVsSpeed => "error-vs-speed",
    Point => "point",
});

named_enum!(Regime {
    PaTheorem1 => "pa-theorem1",
    PaTheorem2 => "pa-theorem2",
    PaNumeric => "pa-numeric",
    NoCsit => "no-csit",
    Genie => "genie",
    MonteCarlo => "monte-carlo",
});

named_enum!(
    /// Physical units: dB, channel uses, npcu, metres, m/s, seconds, Hz.
    Param {
        SnrDb => "snr_db",
        Sigma => "sigma",
        Length => "length",
        Rate => "rate",
        AntennaSeparation => "d_a",
        AntennaSeparationWavelengths => "d_a_wavelengths",
        Speed => "v",
        Delay => "delta",
        Carrier => "f_c",
    }
);

impl Command {
    /// Axis that a sweep of this kind must include.
    pub fn required_axis(self) -> Option<Param> {
        match self {
            Self::SweepSnr => Some(Param::SnrDb),
            Self::SweepLength | Self::ErrorVsLength => Some(Param::Length),
            Self::SweepSpeed | Self::ErrorVsSpeed => Some(Param::Speed),
            Self::SweepRate => Some(Param::Rate),
            Self::Point => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSettings {
    pub samples: u64,
    pub seed: Option<u64>,
    pub batch: u64,
}

impl Default for McSettings {
    fn default() -> Self {
        Self {
            samples: DEFAULT_MC_SAMPLES,
            seed: None,
            batch: DEFAULT_MC_BATCH,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub command: Command,
    /// Outermost first.
    pub axes: Vec<Axis>,
    pub fixed: BTreeMap<Param, f64>,
    pub regimes: Vec<Regime>,
    pub output_path: Option<PathBuf>,
    pub mc: Option<McSettings>,
}

impl SweepSpec {
    pub fn is_fixed_rate(&self) -> bool {
        self.binds(Param::Rate)
    }

    pub fn binds(&self, p: Param) -> bool {
        self.fixed.contains_key(&p) || self.axes.iter().any(|a| a.param == p)
    }

    pub fn grid_size(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Doc {
    command: Spanned<String>,
    regimes: Spanned<Vec<Spanned<String>>>,
    output: Option<String>,
    #[serde(default)]
    fixed: BTreeMap<String, Spanned<f64>>,
    #[serde(default, rename = "axis")]
    axes: Vec<Spanned<AxisDoc>>,
    mc: Option<McDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisDoc {
    name: Spanned<String>,
    values: Option<Spanned<Vec<f64>>>,
    start: Option<f64>,
    stop: Option<f64>,
    step: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct McDoc {
    samples: Option<u64>,
    seed: Option<u64>,
    batch: Option<u64>,
}

/// Inclusive arithmetic range; each value is `start + i·step`.
fn expand_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, String> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err("range bounds must be finite".into());
    }
    if step <= 0.0 {
        return Err("range step must be positive".into());
    }
    if stop < start {
        return Err("range stop lies below start".into());
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if n > 1_000_000 {
        return Err(format!("range has {n} values; at most 1000000 allowed"));
    }
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}

pub fn parse_config(text: &str) -> Result<SweepSpec, ConfigError> {
    let doc: Doc = toml::from_str(text).map_err(|e| ConfigError::at(text, e.span(), e.message().trim()))?;
    let err = |span: Range<usize>, msg: String| ConfigError::at(text, Some(span), msg);

    let command = Command::from_str(doc.command.get_ref()).map_err(|m| err(doc.command.span(), m))?;

    let mut regimes = Vec::new();
    for r in doc.regimes.get_ref() {
        let regime = Regime::from_str(r.get_ref()).map_err(|m| err(r.span(), m))?;
        if regimes.contains(&regime) {
            return Err(err(r.span(), format!("regime `{regime}` listed twice")));
        }
        regimes.push(regime);
    }
    if regimes.is_empty() {
        return Err(err(doc.regimes.span(), "regimes list is empty".into()));
    }

    let mut bound: BTreeMap<Param, Range<usize>> = BTreeMap::new();
    let mut axes = Vec::new();
    for a in &doc.axes {
        let ax = a.get_ref();
        let param = Param::from_str(ax.name.get_ref()).map_err(|m| err(ax.name.span(), m))?;
        if bound.insert(param, ax.name.span()).is_some() {
            return Err(err(ax.name.span(), format!("duplicate axis `{param}`")));
        }
        let values_span = ax.values.as_ref().map_or(a.span(), |v| v.span());
        let values = match (&ax.values, ax.start, ax.stop, ax.step) {
            (Some(v), None, None, None) => v.get_ref().clone(),
            (None, Some(start), Some(stop), Some(step)) => {
                expand_range(start, stop, step).map_err(|m| err(a.span(), m))?
            }
            _ => {
                return Err(err(
                    a.span(),
                    format!("axis `{param}` needs either `values` or all of `start`, `stop`, `step`"),
                ))
            }
        };
        if values.is_empty() {
            return Err(err(values_span.clone(), format!("axis `{param}` has no values")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(err(
                values_span.clone(),
                format!("axis `{param}` has a non-finite value"),
            ));
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(err(
                values_span,
                format!("axis `{param}` values must be strictly increasing"),
            ));
        }
        axes.push(Axis { param, values });
    }

    let mut fixed = BTreeMap::new();
    for (key, value) in &doc.fixed {
        let param = Param::from_str(key).map_err(|m| err(value.span(), m))?;
        if bound.insert(param, value.span()).is_some() {
            return Err(err(
                value.span(),
                format!("`{param}` is bound both as an axis and as a fixed value"),
            ));
        }
        if !value.get_ref().is_finite() {
            return Err(err(value.span(), format!("`{param}` must be finite")));
        }
        fixed.insert(param, *value.get_ref());
    }

    let whole = 0..0;
    let missing = |what: &str| ConfigError {
        line: None,
        message: format!("missing required parameter {what}"),
    };
    for p in [Param::SnrDb, Param::Length] {
        if !bound.contains_key(&p) {
            return Err(missing(&format!("`{p}`")));
        }
    }
    let geometry = [
        Param::AntennaSeparation,
        Param::AntennaSeparationWavelengths,
        Param::Speed,
        Param::Delay,
        Param::Carrier,
    ];
    let has = |p: &Param| bound.contains_key(p);
    if has(&Param::Sigma) {
        if let Some(p) = geometry.iter().find(|p| has(p)) {
            return Err(err(bound[p].clone(), format!("`{p}` conflicts with a direct `sigma`")));
        }
    } else {
        let separations = [Param::AntennaSeparation, Param::AntennaSeparationWavelengths];
        match separations.iter().filter(|p| has(p)).count() {
            0 => return Err(missing("`sigma` or an antenna separation (`d_a` or `d_a_wavelengths`)")),
            1 => {}
            _ => {
                return Err(err(
                    bound[&Param::AntennaSeparationWavelengths].clone(),
                    "`d_a` and `d_a_wavelengths` are mutually exclusive".into(),
                ))
            }
        }
        for p in [Param::Speed, Param::Delay, Param::Carrier] {
            if !has(&p) {
                return Err(missing(&format!("`{p}` (geometry-based correlation)")));
            }
        }
    }

    match command {
        Command::SweepRate => {}
        Command::Point => {
            if !axes.is_empty() {
                return Err(err(doc.axes[0].span(), "`point` takes no axes".into()));
            }
        }
        _ => {
            if let Some(span) = bound.get(&Param::Rate) {
                return Err(err(
                    span.clone(),
                    format!("`rate` is only valid for sweep-rate and point, not {command}"),
                ));
            }
        }
    }
    if let Some(p) = command.required_axis() {
        if !axes.iter().any(|a| a.param == p) {
            let span = bound.get(&p).cloned().unwrap_or(whole);
            let line = if span.is_empty() {
                None
            } else {
                Some(line_of(text, span.start))
            };
            return Err(ConfigError {
                line,
                message: format!("command {command} requires a `{p}` axis"),
            });
        }
    }
    let fixed_rate = bound.contains_key(&Param::Rate);
    if fixed_rate && regimes.contains(&Regime::Genie) {
        let r = doc
            .regimes
            .get_ref()
            .iter()
            .find(|r| r.get_ref() == "genie")
            .expect("listed");
        return Err(err(
            r.span(),
            "regime `genie` sets its own rate and cannot run at a fixed rate".into(),
        ));
    }
    if let Some(ax) = axes.iter().find(|a| a.param == Param::Length) {
        if ax.values.iter().any(|&v| v < 1.0 || v.fract() != 0.0) {
            return Err(err(
                bound[&Param::Length].clone(),
                "`length` values must be positive integers".into(),
            ));
        }
    }
    if let Some(&l) = fixed.get(&Param::Length) {
        if l < 1.0 || l.fract() != 0.0 {
            return Err(err(
                bound[&Param::Length].clone(),
                "`length` must be a positive integer".into(),
            ));
        }
    }

    let mc = match doc.mc {
        None => None,
        Some(m) => {
            let d = McSettings::default();
            let s = McSettings {
                samples: m.samples.unwrap_or(d.samples),
                seed: m.seed,
                batch: m.batch.unwrap_or(d.batch),
            };
            if s.samples == 0 || s.batch == 0 {
                return Err(ConfigError {
                    line: None,
                    message: "mc samples and batch must be positive".into(),
                });
            }
            Some(s)
        }
    };

    Ok(SweepSpec {
        command,
        axes,
        fixed,
        regimes,
        output_path: doc.output.map(PathBuf::from),
        mc,
    })
}
