//! Built-in scenarios for the six published figures and their datasets.

use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::deform::{build_krein_adler, IntegrandForm};
use crate::error::{Error, Result};
use crate::exact::{int, Rational};
use crate::scenario::{run_scenario, Deformation, Expectations, RunOptions, Scenario, ScenarioRun, Sign};
use crate::swkb::swkb_integral;
use crate::systems::{breve, Family, SystemSpec};

/// Build identifier recorded in manifests.
pub const BUILD_DESCRIBE: &str = env!("SWKB_GIT_DESCRIBE");

/// Sweep range note written to every manifest.
pub const RANGE_NOTE: &str = "n-range is an assumption: n = 1..20, extended to 1..35 for \
Krein-Adler deletions at d >= 15 and for every panel of fig4";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
    ];
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = FigureId::ALL.iter().position(|x| x == self).unwrap() + 1;
        write!(f, "fig{n}")
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .iter()
            .copied()
            .find(|id| id.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidParameters(vec![format!("unknown figure {s:?}; expected fig1..fig6")]))
    }
}

fn panel(
    name: &str,
    family: Family,
    g: Option<i64>,
    h: Option<i64>,
    deformation: Deformation,
    n_max: usize,
    expect: Expectations,
) -> Scenario {
    let mut s = Scenario::new(name, family, deformation);
    s.g = g.map(int);
    s.h = h.map(int);
    s.n_max = n_max;
    s.output = Some(PathBuf::from(format!("{name}.csv")));
    s.expect = expect;
    s
}

fn target(max_err: f64) -> Expectations {
    Expectations {
        max_err: Some(max_err),
        ..Default::default()
    }
}

fn mi(type_i: &[usize], type_ii: &[usize]) -> Deformation {
    Deformation::MultiIndexed {
        type_i: type_i.to_vec(),
        type_ii: type_ii.to_vec(),
    }
}

fn ka(d: usize) -> Deformation {
    Deformation::KreinAdler { d }
}

/// Sweep length for a deletion at `d`.
pub fn ka_n_max(d: usize) -> usize {
    if d >= 15 {
        35
    } else {
        20
    }
}

/// Panels of a figure as scenarios, with the target values as targets.
/// `fig3` has no sweep panels.
pub fn figure_scenarios(id: FigureId) -> Vec<Scenario> {
    use Family::{H, J, L};
    let below = |b: f64| Expectations {
        err_below: Some(b),
        ..Default::default()
    };
    let with_sign = |mut e: Expectations, s: Sign| {
        e.sign = Some(s);
        e
    };
    match id {
        FigureId::Fig1 => vec![
            panel("fig1a", L, Some(3), None, mi(&[], &[1]), 20, below(1e-2)),
            panel("fig1b", L, Some(10), None, mi(&[], &[1]), 20, below(1e-2)),
        ],
        FigureId::Fig2 => vec![
            panel("fig2a", L, Some(5), None, mi(&[1], &[2]), 20, with_sign(target(9.7e-4), Sign::Negative)),
            panel("fig2b", L, Some(5), None, mi(&[1, 2], &[2, 3]), 20, with_sign(target(4.7e-3), Sign::Negative)),
            panel("fig2c", J, Some(5), Some(6), mi(&[1], &[2]), 20, with_sign(target(1.3e-3), Sign::Positive)),
            panel("fig2d", J, Some(5), Some(6), mi(&[1, 2], &[2, 3]), 20, with_sign(target(2.2e-3), Sign::Positive)),
        ],
        FigureId::Fig3 => Vec::new(),
        FigureId::Fig4 => vec![
            panel("fig4a", H, None, None, ka(3), 35, target(2.7e-1)),
            panel("fig4b", H, None, None, ka(15), 35, target(5.6e-2)),
            panel("fig4c", H, None, None, ka(24), 35, target(3.6e-2)),
        ],
        FigureId::Fig5 => vec![
            panel("fig5a", L, Some(3), None, ka(3), ka_n_max(3), target(3.4e-1)),
            panel("fig5b", L, Some(30), None, ka(3), ka_n_max(3), target(2.8e-1)),
            panel("fig5c", L, Some(3), None, ka(15), ka_n_max(15), target(6.5e-2)),
        ],
        FigureId::Fig6 => vec![
            panel("fig6a", J, Some(3), Some(4), ka(3), ka_n_max(3), target(4.2e-1)),
            panel("fig6b", J, Some(30), Some(40), ka(3), ka_n_max(3), target(2.9e-1)),
            panel("fig6c", J, Some(3), Some(4), ka(15), ka_n_max(15), target(8.1e-2)),
        ],
    }
}

/// Samples of `W^2(xi)` for the Hermite deletion of levels 4 and 5,
/// together with the energy line `E = 2 breve(1)`.
#[derive(Debug, Clone)]
pub struct Fig3Data {
    pub samples: Vec<(f64, f64)>,
    pub energy: f64,
    pub intervals: Vec<(f64, f64)>,
}

pub const FIG3_D: usize = 4;

pub fn fig3_data(points: usize, half_width: f64) -> Result<Fig3Data> {
    let sys = build_krein_adler(&SystemSpec::harmonic(), FIG3_D)?;
    let w2 = sys.logderiv_sq(IntegrandForm::XiSquared)?;
    let points = points.max(2);
    let samples = (0..points)
        .map(|k| {
            let xi = -half_width + 2.0 * half_width * k as f64 / (points - 1) as f64;
            (xi, w2.eval(xi))
        })
        .collect();
    let r = swkb_integral(&sys, 1)?;
    Ok(Fig3Data {
        samples,
        energy: 2.0 * breve(1, FIG3_D) as f64,
        intervals: r.intervals.intervals,
    })
}

#[derive(Debug)]
pub struct FigureOutput {
    pub id: FigureId,
    pub runs: Vec<ScenarioRun>,
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
    pub passed: bool,
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn fmt_rational(r: &Option<Rational>) -> String {
    r.as_ref().map_or_else(|| "-".to_string(), ToString::to_string)
}

/// Runs every panel of `id`, writes one CSV per panel and `manifest.txt`
/// into `out_dir/<id>/`.
pub fn reproduce_figure(id: FigureId, out_dir: &Path, opts: &RunOptions) -> Result<FigureOutput> {
    let dir = out_dir.join(id.to_string());
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut manifest = String::new();
    let _ = writeln!(manifest, "figure: {id}");
    let _ = writeln!(manifest, "build: {BUILD_DESCRIBE}");
    let _ = writeln!(manifest, "{RANGE_NOTE}");
    let mut files = Vec::new();
    let mut runs = Vec::new();
    let mut passed = true;

    if id == FigureId::Fig3 {
        let data = fig3_data(1601, 4.0)?;
        let mut csv = String::from("xi,w2,E\n");
        for (xi, w2) in &data.samples {
            let _ = writeln!(csv, "{xi:.16e},{w2:.16e},{:.16e}", data.energy);
        }
        let path = dir.join("fig3_w2.csv");
        write(&path, &csv)?;
        files.push(path);
        let _ = writeln!(manifest, "\n[fig3]");
        let _ = writeln!(manifest, "system: H, krein-adler D={{{},{}}}", FIG3_D, FIG3_D + 1);
        let _ = writeln!(manifest, "energy line: E = 2 * breve(1) = {}", data.energy);
        let _ = writeln!(manifest, "turning intervals at n = 1: {:?}", data.intervals);
        let ok = data.intervals.len() >= 2;
        passed &= ok;
        let _ = writeln!(
            manifest,
            "check: more than one set of turning points: {}",
            if ok { "PASS" } else { "FAIL" }
        );
    }

    for s in figure_scenarios(id) {
        let run = run_scenario(&s, opts)?;
        let file = s.output.clone().unwrap_or_else(|| PathBuf::from(format!("{}.csv", s.name)));
        let path = dir.join(file);
        write(&path, &run.to_csv(true))?;
        files.push(path.clone());
        let sc = &run.scenario;
        let (max, at) = run.max_abs_err().unwrap_or((0.0, 0));
        let _ = writeln!(manifest, "\n[{}]", sc.name);
        let _ = writeln!(manifest, "family: {}  g: {}  h: {}", sc.family, fmt_rational(&sc.g), fmt_rational(&sc.h));
        let _ = writeln!(manifest, "deformation: {:?}", sc.deformation);
        let _ = writeln!(manifest, "n: {}..{}", sc.n_min, sc.n_max);
        let _ = writeln!(manifest, "csv: {}", path.file_name().unwrap_or_default().to_string_lossy());
        let _ = writeln!(manifest, "max |err|: {max:.4e} at n = {at}");
        if let Some(t) = sc.expect.max_err {
            let _ = writeln!(manifest, "target value: {t:.2e} (relative deviation {:.3})", (max - t).abs() / t);
        }
        for (n, e) in &run.failures {
            let _ = writeln!(manifest, "failed level n = {n}: {e}");
        }
        for c in &run.checks {
            let _ = writeln!(
                manifest,
                "check: {}: {} ({})",
                c.name,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail
            );
        }
        passed &= run.passed();
        runs.push(run);
    }

    if id == FigureId::Fig1 && runs.len() == 2 {
        let a = runs[0].max_abs_err().map_or(0.0, |m| m.0);
        let b = runs[1].max_abs_err().map_or(0.0, |m| m.0);
        let ok = b < a;
        passed &= ok;
        let _ = writeln!(
            manifest,
            "\ncheck: error decreases with g: {} ({b:.4e} < {a:.4e})",
            if ok { "PASS" } else { "FAIL" }
        );
    }

    let manifest_path = dir.join("manifest.txt");
    write(&manifest_path, &manifest)?;
    Ok(FigureOutput {
        id,
        runs,
        files,
        manifest: manifest_path,
        passed,
    })
}
