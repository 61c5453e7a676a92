//! Declarative scenario files and the parallel sweep runner.
//!
//! A scenario file is a list of `key = value` lines; `#` starts a comment.
//! A batch file holds only `include = <path>` lines, resolved relative to
//! the batch file.
//!
//! ```text
//! name = fig2a
//! family = L
//! g = 5
//! deformation = multi-indexed
//! type_i = 1
//! type_ii = 2
//! n_max = 20
//! expect_max_err = 9.7e-4
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::deform::{build_krein_adler, build_multi_indexed, DeformedSystem};
use crate::error::{Error, Result};
use crate::exact::{Precision, Rational};
use crate::swkb::{swkb_integral_with, SwkbOptions, DEFAULT_TOL};
use crate::systems::{parse_rational, validate_deformation, Family, SystemSpec};

/// Largest accepted `n_max`.
pub const MAX_N: usize = 200;
/// Largest accepted seed or deletion index.
pub const MAX_INDEX: usize = 60;
/// Largest accepted index-set size.
pub const MAX_SET: usize = 8;
/// Relative tolerance on `expect_max_err` when none is given.
pub const DEFAULT_MAX_ERR_REL_TOL: f64 = 0.15;

#[derive(Debug, Clone, PartialEq)]
pub enum Deformation {
    None,
    MultiIndexed { type_i: Vec<usize>, type_ii: Vec<usize> },
    KreinAdler { d: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Positive,
}

impl Sign {
    fn name(self) -> &'static str {
        match self {
            Sign::Negative => "negative",
            Sign::Positive => "positive",
        }
    }
}

/// Acceptance thresholds attached to a scenario.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Expectations {
    /// Target for `max |err|`.
    pub max_err: Option<f64>,
    /// Relative tolerance on `max_err`.
    pub max_err_rel_tol: Option<f64>,
    /// Every `|err|` must lie below this.
    pub err_below: Option<f64>,
    /// Required sign of `I - n pi` on every row.
    pub sign: Option<Sign>,
}

impl Expectations {
    pub fn is_empty(&self) -> bool {
        *self == Expectations::default()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub family: Family,
    pub g: Option<Rational>,
    pub h: Option<Rational>,
    pub deformation: Deformation,
    pub n_min: usize,
    pub n_max: usize,
    pub output: Option<PathBuf>,
    pub tol: f64,
    pub precision: Precision,
    pub expect: Expectations,
}

/// Contents of one scenario file.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioFile {
    Single(Box<Scenario>),
    Batch(Vec<String>),
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_family(s: &str) -> Option<Family> {
    match s.to_ascii_lowercase().as_str() {
        "h" | "hermite" | "harmonic" => Some(Family::H),
        "l" | "laguerre" | "radial" => Some(Family::L),
        "j" | "jacobi" | "poschl-teller" => Some(Family::J),
        _ => None,
    }
}

pub fn parse_precision(s: &str) -> Option<Precision> {
    match s.to_ascii_lowercase().as_str() {
        "double" => Some(Precision::Double),
        "dd" | "double-double" => Some(Precision::DoubleDouble),
        "auto" => Some(Precision::Auto),
        _ => None,
    }
}

fn precision_name(p: Precision) -> &'static str {
    match p {
        Precision::Double => "double",
        Precision::DoubleDouble => "dd",
        Precision::Auto => "auto",
    }
}

fn parse_index(line: usize, key: &str, v: &str) -> Result<usize> {
    let n: usize = v.parse().map_err(|_| perr(line, format!("{key}: expected an integer, got {v:?}")))?;
    if n > MAX_INDEX {
        return Err(perr(line, format!("{key}: {n} exceeds {MAX_INDEX}")));
    }
    Ok(n)
}

fn parse_set(line: usize, key: &str, v: &str) -> Result<Vec<usize>> {
    let v = v.trim().trim_start_matches('{').trim_end_matches('}').trim();
    if v.is_empty() {
        return Ok(Vec::new());
    }
    let set = v
        .split(',')
        .map(|t| parse_index(line, key, t.trim()))
        .collect::<Result<Vec<_>>>()?;
    if set.len() > MAX_SET {
        return Err(perr(line, format!("{key}: at most {MAX_SET} indices")));
    }
    Ok(set)
}

fn parse_positive(line: usize, key: &str, v: &str) -> Result<f64> {
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(perr(line, format!("{key}: expected a positive number, got {v:?}"))),
    }
}

/// Parses the text of a scenario or batch file.
pub fn parse(text: &str) -> Result<ScenarioFile> {
    let mut seen = BTreeSet::new();
    let mut includes = Vec::new();
    let mut name = None;
    let mut family = None;
    let (mut g, mut h) = (None, None);
    let mut kind: Option<String> = None;
    let (mut type_i, mut type_ii, mut d) = (None, None, None);
    let (mut n_min, mut n_max) = (None, None);
    let mut output = None;
    let mut tol = None;
    let mut precision = None;
    let mut expect = Expectations::default();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| perr(line, format!("expected `key = value`, got {content:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        if key == "include" {
            if value.is_empty() {
                return Err(perr(line, "include: empty path"));
            }
            includes.push(value.to_string());
            continue;
        }
        if !seen.insert(key.to_string()) {
            return Err(perr(line, format!("duplicate key {key:?}")));
        }
        match key {
            "name" => {
                if value.is_empty() || value.chars().any(|c| c.is_control()) {
                    return Err(perr(line, "name: must be non-empty printable text"));
                }
                name = Some(value.to_string());
            }
            "family" => {
                family = Some(parse_family(value).ok_or_else(|| perr(line, format!("unknown family {value:?}")))?)
            }
            "g" | "h" => {
                let r = parse_rational(value).ok_or_else(|| perr(line, format!("{key}: bad rational {value:?}")))?;
                if key == "g" {
                    g = Some(r);
                } else {
                    h = Some(r);
                }
            }
            "deformation" => kind = Some(value.to_ascii_lowercase()),
            "type_i" => type_i = Some(parse_set(line, key, value)?),
            "type_ii" => type_ii = Some(parse_set(line, key, value)?),
            "d" => d = Some(parse_index(line, key, value)?),
            "n_min" | "n_max" => {
                let n: usize = value
                    .parse()
                    .map_err(|_| perr(line, format!("{key}: expected an integer, got {value:?}")))?;
                if n > MAX_N {
                    return Err(perr(line, format!("{key}: {n} exceeds {MAX_N}")));
                }
                if key == "n_min" {
                    n_min = Some(n);
                } else {
                    n_max = Some(n);
                }
            }
            "output" => {
                if value.is_empty() {
                    return Err(perr(line, "output: empty path"));
                }
                output = Some(PathBuf::from(value));
            }
            "tol" => tol = Some(parse_positive(line, key, value)?),
            "precision" => {
                precision =
                    Some(parse_precision(value).ok_or_else(|| perr(line, format!("unknown precision {value:?}")))?)
            }
            "expect_max_err" => expect.max_err = Some(parse_positive(line, key, value)?),
            "expect_max_err_rel_tol" => expect.max_err_rel_tol = Some(parse_positive(line, key, value)?),
            "expect_err_below" => expect.err_below = Some(parse_positive(line, key, value)?),
            "expect_sign" => {
                expect.sign = Some(match value {
                    "negative" => Sign::Negative,
                    "positive" => Sign::Positive,
                    _ => return Err(perr(line, format!("expect_sign: expected negative|positive, got {value:?}"))),
                })
            }
            _ => return Err(perr(line, format!("unknown key {key:?}"))),
        }
    }

    if !includes.is_empty() {
        if !seen.is_empty() {
            return Err(perr(last_line, "a batch file may only contain include lines"));
        }
        return Ok(ScenarioFile::Batch(includes));
    }

    let end = last_line.max(1);
    let name = name.ok_or_else(|| perr(end, "missing key `name`"))?;
    let family = family.ok_or_else(|| perr(end, "missing key `family`"))?;
    let deformation = match kind.as_deref().unwrap_or("none") {
        "none" | "identity" => {
            if type_i.is_some() || type_ii.is_some() || d.is_some() {
                return Err(perr(end, "index keys given without a deformation"));
            }
            Deformation::None
        }
        "multi-indexed" => {
            if d.is_some() {
                return Err(perr(end, "`d` belongs to krein-adler"));
            }
            Deformation::MultiIndexed {
                type_i: type_i.unwrap_or_default(),
                type_ii: type_ii.unwrap_or_default(),
            }
        }
        "krein-adler" => {
            if type_i.is_some() || type_ii.is_some() {
                return Err(perr(end, "type_i/type_ii belong to multi-indexed"));
            }
            Deformation::KreinAdler {
                d: d.ok_or_else(|| perr(end, "krein-adler needs `d`"))?,
            }
        }
        other => return Err(perr(end, format!("unknown deformation {other:?}"))),
    };
    let n_min = n_min.unwrap_or(1);
    let n_max = n_max.unwrap_or(20);
    if n_min > n_max {
        return Err(perr(end, format!("n_min = {n_min} exceeds n_max = {n_max}")));
    }
    Ok(ScenarioFile::Single(Box::new(Scenario {
        name,
        family,
        g,
        h,
        deformation,
        n_min,
        n_max,
        output,
        tol: tol.unwrap_or(DEFAULT_TOL),
        precision: precision.unwrap_or_default(),
        expect,
    })))
}

/// Parses text that must hold a single scenario.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    match parse(text)? {
        ScenarioFile::Single(s) => Ok(*s),
        ScenarioFile::Batch(_) => Err(perr(1, "expected a scenario, found a batch file")),
    }
}

/// Loads a scenario or batch file, following includes.
pub fn load(path: &Path) -> Result<Vec<Scenario>> {
    let mut stack = Vec::new();
    let mut out = Vec::new();
    load_into(path, &mut stack, &mut out)?;
    Ok(out)
}

fn load_into(path: &Path, stack: &mut Vec<PathBuf>, out: &mut Vec<Scenario>) -> Result<()> {
    let canonical = path.canonicalize().map_err(|e| Error::io(path, e))?;
    if stack.contains(&canonical) {
        return Err(perr(0, format!("include cycle through {}", path.display())));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match parse(&text)? {
        ScenarioFile::Single(s) => out.push(*s),
        ScenarioFile::Batch(includes) => {
            stack.push(canonical);
            let base = path.parent().unwrap_or(Path::new("."));
            for inc in includes {
                load_into(&base.join(inc), stack, out)?;
            }
            stack.pop();
        }
    }
    Ok(())
}

impl Scenario {
    pub fn new(name: &str, family: Family, deformation: Deformation) -> Self {
        Scenario {
            name: name.to_string(),
            family,
            g: None,
            h: None,
            deformation,
            n_min: 1,
            n_max: 20,
            output: None,
            tol: DEFAULT_TOL,
            precision: Precision::Auto,
            expect: Expectations::default(),
        }
    }

    pub fn system(&self) -> Result<SystemSpec> {
        let missing = |k: &str| Error::InvalidParameters(vec![format!("family {} needs `{k}`", self.family)]);
        match self.family {
            Family::H => {
                if self.g.is_some() || self.h.is_some() {
                    return Err(Error::InvalidParameters(vec!["family H takes no couplings".into()]));
                }
                Ok(SystemSpec::harmonic())
            }
            Family::L => {
                if self.h.is_some() {
                    return Err(Error::InvalidParameters(vec!["family L takes no `h`".into()]));
                }
                SystemSpec::radial(self.g.clone().ok_or_else(|| missing("g"))?)
            }
            Family::J => SystemSpec::poschl_teller(
                self.g.clone().ok_or_else(|| missing("g"))?,
                self.h.clone().ok_or_else(|| missing("h"))?,
            ),
        }
    }

    /// Checks parameters and index sets without building any Wronskian.
    pub fn validate(&self) -> Result<()> {
        let spec = self.system()?;
        match &self.deformation {
            Deformation::None => Ok(()),
            Deformation::MultiIndexed { type_i, type_ii } => validate_deformation(&spec, type_i, type_ii)
                .map_err(|v| Error::InvalidParameters(v.into_iter().map(|v| v.0).collect())),
            Deformation::KreinAdler { d: 0 } => Err(Error::InvalidParameters(vec!["krein-adler needs d >= 1".into()])),
            Deformation::KreinAdler { .. } => Ok(()),
        }
    }

    pub fn build(&self) -> Result<DeformedSystem> {
        self.validate()?;
        let spec = self.system()?;
        let sys = match &self.deformation {
            Deformation::None => DeformedSystem::identity(&spec),
            Deformation::MultiIndexed { type_i, type_ii } => build_multi_indexed(&spec, type_i, type_ii)?,
            Deformation::KreinAdler { d } => build_krein_adler(&spec, *d)?,
        };
        Ok(sys.with_precision(self.precision))
    }

    /// Canonical text form; `parse` of the result gives back `self`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let list = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        let _ = writeln!(s, "name = {}", self.name);
        let _ = writeln!(s, "family = {}", self.family);
        if let Some(g) = &self.g {
            let _ = writeln!(s, "g = {g}");
        }
        if let Some(h) = &self.h {
            let _ = writeln!(s, "h = {h}");
        }
        match &self.deformation {
            Deformation::None => {
                let _ = writeln!(s, "deformation = none");
            }
            Deformation::MultiIndexed { type_i, type_ii } => {
                let _ = writeln!(s, "deformation = multi-indexed");
                let _ = writeln!(s, "type_i = {}", list(type_i));
                let _ = writeln!(s, "type_ii = {}", list(type_ii));
            }
            Deformation::KreinAdler { d } => {
                let _ = writeln!(s, "deformation = krein-adler");
                let _ = writeln!(s, "d = {d}");
            }
        }
        let _ = writeln!(s, "n_min = {}", self.n_min);
        let _ = writeln!(s, "n_max = {}", self.n_max);
        if let Some(o) = &self.output {
            let _ = writeln!(s, "output = {}", o.display());
        }
        let _ = writeln!(s, "tol = {:e}", self.tol);
        let _ = writeln!(s, "precision = {}", precision_name(self.precision));
        let e = &self.expect;
        if let Some(v) = e.max_err {
            let _ = writeln!(s, "expect_max_err = {v:e}");
        }
        if let Some(v) = e.max_err_rel_tol {
            let _ = writeln!(s, "expect_max_err_rel_tol = {v:e}");
        }
        if let Some(v) = e.err_below {
            let _ = writeln!(s, "expect_err_below = {v:e}");
        }
        if let Some(v) = e.sign {
            let _ = writeln!(s, "expect_sign = {}", v.name());
        }
        s
    }
}

/// Overrides applied on top of a scenario.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub n_max: Option<usize>,
    pub tol: Option<f64>,
    pub precision: Option<Precision>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub breve_n: usize,
    pub i_over_pi: f64,
    pub err: f64,
    pub interval_count: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub scenario: Scenario,
    pub rows: Vec<ResultRow>,
    /// Levels whose integral failed, with the error message.
    pub failures: Vec<(usize, String)>,
    pub checks: Vec<Check>,
}

impl ScenarioRun {
    /// `(max |err|, n at the maximum)`; ties go to the lowest `n`.
    pub fn max_abs_err(&self) -> Option<(f64, usize)> {
        self.rows.iter().fold(None, |best, r| match best {
            Some((e, _)) if r.err.abs() <= e => best,
            _ => Some((r.err.abs(), r.n)),
        })
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn summary(&self) -> String {
        let (m, at) = self.max_abs_err().unwrap_or((0.0, 0));
        format!(
            "{}: n = {}..{}, max |err| = {:.4e} at n = {}, {} failed levels, {}",
            self.scenario.name,
            self.scenario.n_min,
            self.scenario.n_max,
            m,
            at,
            self.failures.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        )
    }

    /// CSV with the fixed columns, optionally followed by the rescaled error
    /// `sgn(err) 2^{log10 |err|}`.
    pub fn to_csv(&self, rescaled: bool) -> String {
        let mut s = String::from("n,breve_n,I_over_pi,err,interval_count");
        if rescaled {
            s.push_str(",err_rescaled");
        }
        s.push('\n');
        for r in &self.rows {
            let _ = write!(
                s,
                "{},{},{:.16e},{:.16e},{}",
                r.n, r.breve_n, r.i_over_pi, r.err, r.interval_count
            );
            if rescaled {
                let _ = write!(s, ",{:.16e}", rescale_err(r.err));
            }
            s.push('\n');
        }
        s
    }
}

/// `sgn(err) 2^{log10 |err|}`, and 0 for `err = 0`.
pub fn rescale_err(err: f64) -> f64 {
    if err == 0.0 {
        0.0
    } else {
        err.signum() * 2f64.powf(err.abs().log10())
    }
}

fn evaluate_checks(s: &Scenario, rows: &[ResultRow], failures: &[(usize, String)]) -> Vec<Check> {
    let mut checks = Vec::new();
    if !failures.is_empty() {
        checks.push(Check {
            name: "all levels evaluated".into(),
            passed: false,
            detail: format!("{} levels failed, first at n = {}", failures.len(), failures[0].0),
        });
    }
    let max = rows.iter().map(|r| r.err.abs()).fold(0.0, f64::max);
    if let Some(target) = s.expect.max_err {
        let tol = s.expect.max_err_rel_tol.unwrap_or(DEFAULT_MAX_ERR_REL_TOL);
        let rel = (max - target).abs() / target;
        checks.push(Check {
            name: "max |err|".into(),
            passed: rel <= tol,
            detail: format!("{max:.4e} vs target {target:.2e} (relative {rel:.3}, tolerance {tol})"),
        });
    }
    if let Some(bound) = s.expect.err_below {
        checks.push(Check {
            name: "|err| bound".into(),
            passed: max < bound,
            detail: format!("max |err| {max:.4e} vs bound {bound:.2e}"),
        });
    }
    if let Some(sign) = s.expect.sign {
        let bad: Vec<usize> = rows
            .iter()
            .filter(|r| r.n > 0)
            .filter(|r| match sign {
                Sign::Negative => r.err >= 0.0,
                Sign::Positive => r.err <= 0.0,
            })
            .map(|r| r.n)
            .collect();
        checks.push(Check {
            name: format!("sign {}", sign.name()),
            passed: bad.is_empty(),
            detail: if bad.is_empty() {
                "all rows".into()
            } else {
                format!("violated at n = {bad:?}")
            },
        });
    }
    checks
}

/// Evaluates every level of the scenario in parallel. Per-level failures
/// are collected instead of aborting the sweep.
pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<ScenarioRun> {
    let mut s = s.clone();
    if let Some(n) = opts.n_max {
        s.n_max = n;
        s.n_min = s.n_min.min(n);
    }
    if let Some(t) = opts.tol {
        s.tol = t;
    }
    if let Some(p) = opts.precision {
        s.precision = p;
    }
    let sys = s.build()?;
    let swkb = SwkbOptions {
        tol: s.tol,
        ..Default::default()
    };
    let results: Vec<(usize, std::result::Result<ResultRow, String>)> = (s.n_min..=s.n_max)
        .into_par_iter()
        .map(|n| {
            let t0 = Instant::now();
            let r = swkb_integral_with(&sys, n, &swkb)
                .map(|r| ResultRow {
                    n,
                    breve_n: r.breve_n,
                    i_over_pi: r.integral / std::f64::consts::PI,
                    err: r.err,
                    interval_count: r.intervals.len(),
                    wall_time: t0.elapsed(),
                })
                .map_err(|e| e.to_string());
            (n, r)
        })
        .collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (n, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => failures.push((n, e)),
        }
    }
    let checks = evaluate_checks(&s, &rows, &failures);
    Ok(ScenarioRun {
        scenario: s,
        rows,
        failures,
        checks,
    })
}
