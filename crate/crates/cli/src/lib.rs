//! Command implementations behind the `maass` binary.
//!
//! Every command returns a [`Report`]: rendered text plus a verdict. The
//! binary maps verdicts to exit codes 0 (pass), 1 (mathematical failure) and
//! 2 (usage, I/O or parse error).

use std::fmt::Write as _;
use std::path::Path;

use maass::bessel;
use maass::qform::{self, QFormError};
use maass::rayclass;
use maass::sklift::{self, maass::Failure, SkliftError, VerifyMode};
use maass::FourierTable;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Csv,
    Json,
}

/// Rendered output and verdict of one command.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub passed: bool,
    pub text: String,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

/// Errors that abort a command before a verdict exists.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Math(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Math(_) => EXIT_FAIL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Math(m) => write!(f, "check failed: {m}"),
        }
    }
}

fn qform_error(e: QFormError) -> CliError {
    match e {
        QFormError::InvalidDiscriminant(_) | QFormError::ZeroParameter { .. } => CliError::Usage(e.to_string()),
        other => CliError::Math(other.to_string()),
    }
}

fn sklift_error(e: SkliftError) -> CliError {
    match e {
        SkliftError::JacobiInconsistent { .. } => CliError::Math(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

/// Parses `1,2,5..8,-3` style lists; ranges are inclusive.
pub fn parse_list_i64(s: &str) -> Result<Vec<i64>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(format!("empty item in list `{s}`"));
        }
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: i64 = lo.trim().parse().map_err(|_| format!("invalid range start in `{part}`"))?;
            let hi: i64 = hi.trim().parse().map_err(|_| format!("invalid range end in `{part}`"))?;
            if lo > hi {
                return Err(format!("empty range `{part}`"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| format!("invalid integer `{part}`"))?);
        }
    }
    Ok(out)
}

pub fn parse_list_u64(s: &str) -> Result<Vec<u64>, String> {
    parse_list_i64(s)?
        .into_iter()
        .map(|v| if v >= 1 { Ok(v as u64) } else { Err(format!("expected a positive integer, got {v}")) })
        .collect()
}

// ---------------------------------------------------------------- classes

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassesMode {
    Both,
    FormulaOnly,
    EnumerateOnly,
}

pub fn cmd_classes(d: i64, m: u64, l: u64, n: u64, mode: ClassesMode, format: Format) -> Result<Report, CliError> {
    let formula = match mode {
        ClassesMode::EnumerateOnly => None,
        _ => Some(qform::count_classes_formula(d, m, l, n).map_err(qform_error)?),
    };
    let classes = match mode {
        ClassesMode::FormulaOnly => None,
        _ => Some(qform::enumerate_classes(d, m, l, n).map_err(qform_error)?),
    };
    let enumerated = classes.as_ref().map(|c| c.len());
    let passed = match (&formula, enumerated) {
        (Some(f), Some(e)) => *f == BigInt::from(e),
        _ => true,
    };
    let reps: Vec<String> = classes
        .map(|c| c.representatives.iter().map(|t| t.to_string()).collect())
        .unwrap_or_default();

    let text = match format {
        Format::Human => {
            let mut s = format!("d={d} M={m} L={l} N={n}\n");
            if let Some(f) = &formula {
                let _ = writeln!(s, "formula count: {f}");
            }
            if let Some(e) = enumerated {
                let _ = writeln!(s, "enumerated: {e}");
                for r in &reps {
                    let _ = writeln!(s, "  {r}");
                }
            }
            let _ = writeln!(s, "{}", if passed { "PASS" } else { "FAIL: formula and enumeration differ" });
            s
        }
        Format::Csv => {
            let mut s = String::from("d,M,L,N,formula,enumerated,pass\n");
            let _ = writeln!(
                s,
                "{d},{m},{l},{n},{},{},{passed}",
                formula.as_ref().map(|f| f.to_string()).unwrap_or_default(),
                enumerated.map(|e| e.to_string()).unwrap_or_default()
            );
            s
        }
        Format::Json => {
            let v = serde_json::json!({
                "d": d, "M": m, "L": l, "N": n,
                "formula": formula.as_ref().map(|f| f.to_string()),
                "enumerated": enumerated,
                "representatives": reps,
                "pass": passed,
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
    };
    Ok(Report { passed, text })
}

// ---------------------------------------------------------------- sweep

/// Grid of `(d, M, L, N)` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSpec {
    pub ds: Vec<i64>,
    pub ms: Vec<u64>,
    pub ls: Vec<u64>,
    pub ns: Vec<u64>,
}

impl SweepSpec {
    pub fn new(ds: Vec<i64>, ms: Vec<u64>, ls: Vec<u64>, ns: Vec<u64>) -> Result<Self, CliError> {
        for (name, empty) in [("d", ds.is_empty()), ("M", ms.is_empty()), ("L", ls.is_empty()), ("N", ns.is_empty())] {
            if empty {
                return Err(CliError::Usage(format!("{name} list is empty")));
            }
        }
        for &d in &ds {
            if d >= 0 || !maass::arith::is_fundamental_discriminant(&BigInt::from(d)) {
                return Err(CliError::Usage(format!("{d} is not a negative fundamental discriminant")));
            }
        }
        if ms.iter().chain(&ls).chain(&ns).any(|&v| v == 0) {
            return Err(CliError::Usage("M, L and N must be positive".into()));
        }
        Ok(Self { ds, ms, ls, ns })
    }

    /// The grid used for acceptance: ten discriminants, `M <= 3`, `L <= 2`, `N <= 12`.
    pub fn acceptance() -> Self {
        Self {
            ds: vec![-3, -4, -7, -8, -11, -15, -19, -20, -23, -24],
            ms: vec![1, 2, 3],
            ls: vec![1, 2],
            ns: (1..=12).collect(),
        }
    }

    pub fn points(&self) -> Vec<(i64, u64, u64, u64)> {
        let mut out = Vec::new();
        for &d in &self.ds {
            for &m in &self.ms {
                for &l in &self.ls {
                    for &n in &self.ns {
                        out.push((d, m, l, n));
                    }
                }
            }
        }
        out
    }
}

/// Class-count formula used by a sweep; swappable so tests can inject faults.
pub type CountFormula = fn(i64, u64, u64, u64) -> qform::Result<BigInt>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointResult {
    pub d: i64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "L")]
    pub l: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub formula: Option<String>,
    pub enumerated: Option<usize>,
    pub h1: Option<usize>,
    pub ray_class: Option<String>,
    /// `H_1 = H`
    pub h1_is_h: Option<bool>,
    /// `(dM^2/p) = -1` for all `p | N`
    pub kronecker: bool,
    /// `|H(dM^2N^2, L; Gamma^0(1))| = |H(dM^2, L; Gamma^0(N))|`
    pub cardinality_match: Option<bool>,
    pub pass: bool,
    pub error: Option<String>,
}

fn run_point(d: i64, m: u64, l: u64, n: u64, formula: CountFormula) -> PointResult {
    let mut r = PointResult {
        d,
        m,
        l,
        n,
        formula: None,
        enumerated: None,
        h1: None,
        ray_class: None,
        h1_is_h: None,
        kronecker: qform::is_phi_surjective(d, m, n),
        cardinality_match: None,
        pass: false,
        error: None,
    };
    let outcome = (|| -> qform::Result<bool> {
        let f = formula(d, m, l, n)?;
        r.formula = Some(f.to_string());
        let full = qform::enumerate_classes(d, m, l, n)?;
        r.enumerated = Some(full.len());
        // includes the h(dN^2) oracle
        let ray = rayclass::raycl_size(d, m * n)?;
        r.ray_class = Some(ray.to_string());
        let h1 = qform::h1_classes(d, m, l, n)?;
        r.h1 = Some(h1.len());
        let h1_is_h = h1.len() == full.len();
        r.h1_is_h = Some(h1_is_h);
        let top = qform::enumerate_classes(d, m * n, l, 1)?;
        let card = top.len() == full.len();
        r.cardinality_match = Some(card);
        Ok(f == BigInt::from(full.len())
            && BigInt::from(h1.len()) == ray
            && h1_is_h == r.kronecker
            && card == r.kronecker)
    })();
    match outcome {
        Ok(p) => r.pass = p,
        Err(e) => r.error = Some(e.to_string()),
    }
    r
}

pub fn run_sweep(spec: &SweepSpec) -> Vec<PointResult> {
    run_sweep_with(spec, qform::count_classes_formula)
}

/// Runs every grid point in parallel; results keep grid order.
pub fn run_sweep_with(spec: &SweepSpec, formula: CountFormula) -> Vec<PointResult> {
    spec.points()
        .into_par_iter()
        .map(|(d, m, l, n)| run_point(d, m, l, n, formula))
        .collect()
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

pub fn render_sweep(results: &[PointResult], format: Format) -> Report {
    let passed = results.iter().all(|r| r.pass);
    let failures = results.iter().filter(|r| !r.pass).count();
    let text = match format {
        Format::Human => {
            let mut s = format!(
                "{:>5} {:>2} {:>2} {:>3} {:>8} {:>8} {:>6} {:>6} {:>6} {:>6} {:>6}  verdict\n",
                "d", "M", "L", "N", "formula", "enum", "H1", "Cl", "H1=H", "kron", "card"
            );
            for r in results {
                let _ = writeln!(
                    s,
                    "{:>5} {:>2} {:>2} {:>3} {:>8} {:>8} {:>6} {:>6} {:>6} {:>6} {:>6}  {}",
                    r.d,
                    r.m,
                    r.l,
                    r.n,
                    opt(&r.formula),
                    opt(&r.enumerated),
                    opt(&r.h1),
                    opt(&r.ray_class),
                    opt(&r.h1_is_h),
                    r.kronecker,
                    opt(&r.cardinality_match),
                    match (&r.error, r.pass) {
                        (Some(e), _) => format!("ERROR {e}"),
                        (None, true) => "ok".into(),
                        (None, false) => "FAIL".into(),
                    }
                );
            }
            let _ = writeln!(s, "{} points, {} failed", results.len(), failures);
            s
        }
        Format::Csv => {
            let mut s = String::from("d,M,L,N,formula,enumerated,h1,ray_class,h1_is_h,kronecker,cardinality_match,pass,error\n");
            for r in results {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.d,
                    r.m,
                    r.l,
                    r.n,
                    r.formula.clone().unwrap_or_default(),
                    r.enumerated.map(|v| v.to_string()).unwrap_or_default(),
                    r.h1.map(|v| v.to_string()).unwrap_or_default(),
                    r.ray_class.clone().unwrap_or_default(),
                    r.h1_is_h.map(|v| v.to_string()).unwrap_or_default(),
                    r.kronecker,
                    r.cardinality_match.map(|v| v.to_string()).unwrap_or_default(),
                    r.pass,
                    r.error.as_deref().unwrap_or("").replace(',', ";")
                );
            }
            s
        }
        Format::Json => {
            let v = serde_json::json!({ "points": results, "failed": failures, "pass": passed });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
    };
    Report { passed, text }
}

pub fn cmd_sweep(spec: &SweepSpec, format: Format) -> Report {
    render_sweep(&run_sweep(spec), format)
}

// ---------------------------------------------------------------- bessel

pub fn cmd_bessel_identity(lm_max: u64, n2s: &[u64], format: Format) -> Result<Report, CliError> {
    if lm_max == 0 || n2s.is_empty() || n2s.contains(&0) {
        return Err(CliError::Usage("need --lm-max >= 1 and a non-empty list of positive N2".into()));
    }
    let mut grid = Vec::new();
    for &n2 in n2s {
        for l in 1..=lm_max {
            for m in 1..=lm_max / l {
                grid.push((l, m, n2));
            }
        }
    }
    let results: Vec<bool> = grid
        .par_iter()
        .map(|&(l, m, n2)| bessel::maass_identity_check(l, m, n2))
        .collect();
    let failed: Vec<(u64, u64, u64)> = grid
        .iter()
        .zip(&results)
        .filter(|(_, ok)| !**ok)
        .map(|(g, _)| *g)
        .collect();
    let passed = failed.is_empty();
    let text = match format {
        Format::Human => {
            let mut s = format!("checked {} (L, M, N2) triples with LM <= {lm_max}, {} failed\n", grid.len(), failed.len());
            for (l, m, n2) in &failed {
                let _ = writeln!(s, "  FAIL L={l} M={m} N2={n2}");
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("L,M,N2,pass\n");
            for ((l, m, n2), ok) in grid.iter().zip(&results) {
                let _ = writeln!(s, "{l},{m},{n2},{ok}");
            }
            s
        }
        Format::Json => {
            let fails: Vec<_> = failed.iter().map(|(l, m, n2)| serde_json::json!({"L": l, "M": m, "N2": n2})).collect();
            let v = serde_json::json!({ "checked": grid.len(), "failures": fails, "pass": passed });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
    };
    Ok(Report { passed, text })
}

// ---------------------------------------------------------------- chi10 / verify-maass

pub fn cmd_chi10(bound: u64, out: &Path) -> Result<Report, CliError> {
    let table = sklift::igusa_chi10(bound).map_err(sklift_error)?;
    std::fs::write(out, table.to_sfc()).map_err(|e| CliError::Usage(format!("{}: {e}", out.display())))?;
    Ok(Report {
        passed: true,
        text: format!("wrote {} coefficients (bound {bound}) to {}\n", table.len(), out.display()),
    })
}

pub fn load_table(path: &Path) -> Result<FourierTable, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    FourierTable::from_sfc(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn failure_json(f: &Failure) -> serde_json::Value {
    serde_json::json!({
        "T": f.t.to_string(),
        "lhs": format!("{}/{}", f.lhs.numer(), f.lhs.denom()),
        "rhs": format!("{}/{}", f.rhs.numer(), f.rhs.denom()),
    })
}

pub fn cmd_verify_maass(table: &FourierTable, level_n: bool, format: Format) -> Result<Report, CliError> {
    let mode = if level_n { VerifyMode::LevelN } else { VerifyMode::Classical };
    let report = sklift::verify_table(table, mode).map_err(sklift_error)?;
    let passed = report.passed();
    let mode_name = if level_n { "level-N" } else { "classical" };
    let text = match format {
        Format::Human => {
            let mut s = format!(
                "{mode_name} Maass relations, k={} N1={} N2={} bound={}\nchecked {} skipped {} failed {}\n",
                table.weight(),
                table.n1(),
                table.n2(),
                table.bound(),
                report.checked,
                report.skipped,
                report.failures.len()
            );
            if let Some(f) = report.first_failure() {
                let _ = writeln!(s, "first failing T: {} (lhs {}, rhs {})", f.t, f.lhs, f.rhs);
            }
            if let Some(e) = &report.jacobi_error {
                let _ = writeln!(s, "Jacobi dependence violated: {e}");
            }
            let _ = writeln!(s, "{}", if passed { "PASS" } else { "FAIL" });
            s
        }
        Format::Csv => {
            let mut s = String::from("mode,checked,skipped,failed,first_failure,jacobi_error,pass\n");
            let _ = writeln!(
                s,
                "{mode_name},{},{},{},\"{}\",\"{}\",{passed}",
                report.checked,
                report.skipped,
                report.failures.len(),
                report.first_failure().map(|f| f.t.to_string()).unwrap_or_default(),
                report.jacobi_error.clone().unwrap_or_default()
            );
            s
        }
        Format::Json => {
            let v = serde_json::json!({
                "mode": mode_name,
                "checked": report.checked,
                "skipped": report.skipped,
                "failed": report.failures.len(),
                "first_failure": report.first_failure().map(failure_json),
                "jacobi_error": report.jacobi_error,
                "pass": passed,
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
    };
    Ok(Report { passed, text })
}
