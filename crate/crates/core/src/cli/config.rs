//! Run configuration files.
//!
//! The format is line oriented. `[section]` headers open one of the four
//! sections `model`, `grid`, `units` and `run`; every other non-blank line
//! is `key = value`. `#` starts a comment. Complex values are written
//! `a+bi`, `a-bi`, `bi` or `a` (spaces inside the literal are ignored).
//! Unknown sections, unknown keys, repeated keys and keys that do not apply
//! to the chosen family are errors.
//!
//! ```text
//! [model]
//! family = morse_general
//! V1 = 25
//! V2 = 50
//! alpha = 1
//!
//! [grid]
//! x_min = -3
//! x_max = 30
//! n_points = 4000
//!
//! [run]
//! mode = self_consistent
//! n_max = 6
//! ```
//!
//! Model keys per family:
//!
//! | family             | keys                                   |
//! |--------------------|----------------------------------------|
//! | `morse_general`    | `V1`, `V2`, `alpha` or `lambda`, `q`, `alpha` |
//! | `morse_non_pt`     | `D`, `P` or `A`, `B`, `C`              |
//! | `morse_pt1`        | `V1`, `V2`                             |
//! | `morse_pt2`        | `omega`, `D`, `alpha`                  |
//! | `poschl_teller`    | `V0`, `q`, `alpha` (complex `V0`, `q`) |
//! | `poschl_teller_pt` | `V0`, `q`, `alpha` (real)              |
//!
//! `[grid]` takes `x_min`, `x_max`, `n_points`; when absent the family's
//! default domain is used. `[units]` takes `hbar`, `mass`, `e_sq`.
//!
//! `[run]` keys: `mode` (`paper_literal` or `self_consistent`), `l`,
//! `l_max`, `n_max`, `include_inadmissible`, `tol_abs`, `tol_imag`, and for
//! scans `param1`, `start1`, `step1`, `count1` and the same with suffix 2.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::Error;
use crate::grid::Grid;
use crate::hierarchy::Mode;
use crate::numeric::ScanAxis;
use crate::potential::{Family, PotentialModel, UnitSystem};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("[{section}] {key}: {message}")]
    Value {
        section: String,
        key: String,
        message: String,
    },
    #[error("[{section}] unknown key {key}")]
    UnknownKey { section: String, key: String },
    #[error("[{section}] missing key {key}")]
    MissingKey { section: String, key: String },
    #[error(transparent)]
    Model(#[from] Error),
}

type Section = BTreeMap<String, (usize, String)>;

const SECTIONS: [&str; 4] = ["model", "grid", "units", "run"];

fn parse_sections(text: &str) -> Result<BTreeMap<String, Section>, ConfigError> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest.strip_suffix(']').ok_or_else(|| ConfigError::Syntax {
                line: line_no,
                message: format!("malformed section header {line:?}"),
            })?;
            let name = name.trim();
            if !SECTIONS.contains(&name) {
                return Err(ConfigError::Syntax {
                    line: line_no,
                    message: format!("unknown section [{name}]"),
                });
            }
            if sections.contains_key(name) {
                return Err(ConfigError::Syntax {
                    line: line_no,
                    message: format!("section [{name}] appears twice"),
                });
            }
            sections.insert(name.to_string(), Section::new());
            current = Some(name.to_string());
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: line_no,
            message: format!("expected key = value, got {line:?}"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: "empty key or value".into(),
            });
        }
        let section = current.as_ref().ok_or_else(|| ConfigError::Syntax {
            line: line_no,
            message: "key outside of any section".into(),
        })?;
        let entries = sections.get_mut(section).unwrap();
        if entries
            .insert(key.to_string(), (line_no, value.to_string()))
            .is_some()
        {
            return Err(ConfigError::Syntax {
                line: line_no,
                message: format!("key {key} repeated in [{section}]"),
            });
        }
    }
    Ok(sections)
}

/// Typed access to one section, tracking which keys were consumed.
struct Reader {
    name: &'static str,
    entries: Section,
}

impl Reader {
    fn new(name: &'static str, sections: &mut BTreeMap<String, Section>) -> Self {
        Self {
            name,
            entries: sections.remove(name).unwrap_or_default(),
        }
    }

    fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn has(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn value_error(&self, key: &str, message: String) -> ConfigError {
        ConfigError::Value {
            section: self.name.into(),
            key: key.into(),
            message,
        }
    }

    fn take_raw(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key).map(|(_, v)| v)
    }

    fn parsed<T>(
        &mut self,
        key: &str,
        parse: impl Fn(&str) -> Option<T>,
        what: &str,
    ) -> Result<Option<T>, ConfigError> {
        match self.take_raw(key) {
            None => Ok(None),
            Some(v) => parse(&v)
                .map(Some)
                .ok_or_else(|| self.value_error(key, format!("expected {what}, got {v:?}"))),
        }
    }

    fn real(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.parsed(
            key,
            |s| s.parse::<f64>().ok().filter(|v| v.is_finite()),
            "a finite real number",
        )
    }

    fn complex(&mut self, key: &str) -> Result<Option<Complex64>, ConfigError> {
        self.parsed(key, parse_complex, "a complex literal such as 1-2i")
    }

    fn count(&mut self, key: &str) -> Result<Option<u32>, ConfigError> {
        self.parsed(key, |s| s.parse::<u32>().ok(), "a non-negative integer")
    }

    fn flag(&mut self, key: &str) -> Result<Option<bool>, ConfigError> {
        self.parsed(key, |s| s.parse::<bool>().ok(), "true or false")
    }

    fn require<T>(&self, key: &str, v: Option<T>) -> Result<T, ConfigError> {
        v.ok_or_else(|| ConfigError::MissingKey {
            section: self.name.into(),
            key: key.into(),
        })
    }

    fn req_real(&mut self, key: &str) -> Result<f64, ConfigError> {
        let v = self.real(key)?;
        self.require(key, v)
    }

    fn req_complex(&mut self, key: &str) -> Result<Complex64, ConfigError> {
        let v = self.complex(key)?;
        self.require(key, v)
    }

    /// Fails on any key that was not consumed.
    fn finish(self) -> Result<(), ConfigError> {
        match self.entries.into_keys().next() {
            Some(key) => Err(ConfigError::UnknownKey {
                section: self.name.into(),
                key,
            }),
            None => Ok(()),
        }
    }
}

pub fn parse_complex(s: &str) -> Option<Complex64> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    compact
        .parse::<Complex64>()
        .ok()
        .filter(|z| z.re.is_finite() && z.im.is_finite())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub axis1: ScanAxis,
    pub axis2: ScanAxis,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub mode: Mode,
    /// Hierarchy member for `wavefunction`.
    pub l: u32,
    pub l_max: u32,
    pub n_max: u32,
    pub include_inadmissible: bool,
    pub tol_abs: f64,
    pub tol_imag: f64,
    pub scan: Option<ScanSpec>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            mode: Mode::PaperLiteral,
            l: 0,
            l_max: 0,
            n_max: 4,
            include_inadmissible: false,
            tol_abs: 1e-3,
            tol_imag: 1e-8,
            scan: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: PotentialModel,
    pub grid: Grid,
    pub units: UnitSystem,
    pub run: RunOptions,
}

pub fn parse_mode(s: &str) -> Option<Mode> {
    match s {
        "paper_literal" | "paper-literal" => Some(Mode::PaperLiteral),
        "self_consistent" | "self-consistent" => Some(Mode::SelfConsistent),
        _ => None,
    }
}

fn parse_model(r: &mut Reader, units: &UnitSystem) -> Result<PotentialModel, ConfigError> {
    let family_name = r
        .take_raw("family")
        .ok_or_else(|| ConfigError::MissingKey {
            section: "model".into(),
            key: "family".into(),
        })?;
    let family = Family::from_name(&family_name)
        .ok_or_else(|| r.value_error("family", format!("unknown family {family_name:?}")))?;
    let model = match family {
        Family::MorseGeneral => {
            let alpha = r.req_real("alpha")?;
            if r.has("lambda") || r.has("q") {
                let lambda = r.req_complex("lambda")?;
                let q = r.req_complex("q")?;
                PotentialModel::morse_general_from_lambda(lambda, q, alpha, units)?
            } else {
                PotentialModel::morse_general(r.req_complex("V1")?, r.req_complex("V2")?, alpha)?
            }
        }
        Family::MorseNonPt => {
            if r.has("A") || r.has("B") || r.has("C") {
                PotentialModel::morse_non_pt_from_abc(
                    r.req_real("A")?,
                    r.req_real("B")?,
                    r.req_real("C")?,
                )?
            } else {
                PotentialModel::morse_non_pt(r.req_real("D")?, r.req_real("P")?)?
            }
        }
        Family::MorsePt1 => PotentialModel::morse_pt1(r.req_complex("V1")?, r.req_complex("V2")?)?,
        Family::MorsePt2 => {
            PotentialModel::morse_pt2(r.req_real("omega")?, r.req_real("D")?, r.req_real("alpha")?)?
        }
        Family::PoschlTeller => PotentialModel::poschl_teller(
            r.req_complex("V0")?,
            r.req_complex("q")?,
            r.req_real("alpha")?,
        )?,
        Family::PoschlTellerPt => PotentialModel::poschl_teller_pt(
            r.req_real("V0")?,
            r.req_real("q")?,
            r.req_real("alpha")?,
        )?,
    };
    Ok(model)
}

fn parse_axis(r: &mut Reader, suffix: u8) -> Result<Option<ScanAxis>, ConfigError> {
    let keys = ["param", "start", "step", "count"].map(|k| format!("{k}{suffix}"));
    if !keys.iter().any(|k| r.has(k)) {
        return Ok(None);
    }
    let name = r.take_raw(&keys[0]);
    let name = r.require(&keys[0], name)?;
    let start = r.req_real(&keys[1])?;
    let step = r.req_real(&keys[2])?;
    let count = r.count(&keys[3])?;
    let count = r.require(&keys[3], count)?;
    if count == 0 {
        return Err(r.value_error(&keys[3], "a scan axis needs at least one value".into()));
    }
    Ok(Some(ScanAxis::linear(name, start, step, count as usize)))
}

fn parse_run(r: &mut Reader) -> Result<RunOptions, ConfigError> {
    let mut opts = RunOptions::default();
    if let Some(m) = r.parsed("mode", parse_mode, "paper_literal or self_consistent")? {
        opts.mode = m;
    }
    if let Some(v) = r.count("l")? {
        opts.l = v;
    }
    if let Some(v) = r.count("l_max")? {
        opts.l_max = v;
    }
    if let Some(v) = r.count("n_max")? {
        opts.n_max = v;
    }
    if let Some(v) = r.flag("include_inadmissible")? {
        opts.include_inadmissible = v;
    }
    for (key, slot) in [
        ("tol_abs", &mut opts.tol_abs),
        ("tol_imag", &mut opts.tol_imag),
    ] {
        if let Some(v) = r.real(key)? {
            if v <= 0.0 {
                return Err(r.value_error(key, format!("must be positive, got {v}")));
            }
            *slot = v;
        }
    }
    let a1 = parse_axis(r, 1)?;
    let a2 = parse_axis(r, 2)?;
    opts.scan = match (a1, a2) {
        (Some(axis1), Some(axis2)) => Some(ScanSpec { axis1, axis2 }),
        (None, None) => None,
        _ => {
            return Err(r.value_error("param1", "scans need both param1 and param2 axes".into()));
        }
    };
    Ok(opts)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut sections = parse_sections(text)?;

        let mut units_r = Reader::new("units", &mut sections);
        let defaults = UnitSystem::default();
        let hbar = units_r.real("hbar")?.unwrap_or(defaults.hbar());
        let mass = units_r.real("mass")?.unwrap_or(defaults.mass());
        let e_sq = units_r.real("e_sq")?.unwrap_or(defaults.e_sq());
        units_r.finish()?;
        let units = UnitSystem::new(hbar, mass, e_sq)?;

        let mut model_r = Reader::new("model", &mut sections);
        if model_r.is_empty() {
            return Err(ConfigError::MissingKey {
                section: "model".into(),
                key: "family".into(),
            });
        }
        let model = parse_model(&mut model_r, &units)?;
        model_r.finish()?;

        let mut grid_r = Reader::new("grid", &mut sections);
        let grid = if grid_r.is_empty() {
            model.default_grid()
        } else {
            let x_min = grid_r.req_real("x_min")?;
            let x_max = grid_r.req_real("x_max")?;
            let n = grid_r.count("n_points")?;
            let n = grid_r.require("n_points", n)?;
            Grid::new(x_min, x_max, n as usize)?
        };
        grid_r.finish()?;

        let mut run_r = Reader::new("run", &mut sections);
        let run = parse_run(&mut run_r)?;
        run_r.finish()?;

        Ok(Self {
            model,
            grid,
            units,
            run,
        })
    }
}
