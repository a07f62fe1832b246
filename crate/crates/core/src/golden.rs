//! Golden-value corpus: one CSV per physics area, every row produced by an
//! oracle, a closed form or a known limit, never typed in by hand.
//!
//! Header schema of every file: `case_id,provenance,tolerance,` followed by
//! the input columns and then the expected-output columns listed in
//! [`CorpusFile::inputs`] and [`CorpusFile::outputs`]. Numbers use
//! [`sig17`] so regeneration is byte-identical.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use crate::coulomb::coulomb_fg;
use crate::error::{Error, Result};
use crate::format::sig17;
use crate::oracle::{self, PiecewisePotential};
use crate::phases::{self, Band, LoopPath};
use crate::scattering1d::{solve_barrier, solve_step, ScatteringProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Oracle,
    ClosedForm,
    Limit,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Oracle => "oracle",
            Self::ClosedForm => "closed-form",
            Self::Limit => "limit",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Self::Oracle),
            "closed-form" => Ok(Self::ClosedForm),
            "limit" => Ok(Self::Limit),
            other => Err(Error::Domain(format!("unknown provenance '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenRecord {
    pub case_id: String,
    pub provenance: Provenance,
    /// Relative tolerance for outputs; absolute for SQUID currents and when
    /// the expected value is 0.
    pub tolerance: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusFile {
    pub name: &'static str,
    pub inputs: &'static [&'static str],
    pub outputs: &'static [&'static str],
    pub records: Vec<GoldenRecord>,
}

impl CorpusFile {
    pub fn header(&self) -> String {
        let mut cols = vec!["case_id", "provenance", "tolerance"];
        cols.extend(self.inputs);
        cols.extend(self.outputs);
        cols.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header();
        s.push('\n');
        for r in &self.records {
            s.push_str(&r.case_id);
            s.push(',');
            s.push_str(r.provenance.as_str());
            s.push(',');
            s.push_str(&sig17(r.tolerance));
            for v in &r.values {
                s.push(',');
                s.push_str(&sig17(*v));
            }
            s.push('\n');
        }
        s
    }
}

/// Radical inverse of `i` in `base`; a deterministic low-discrepancy sample.
pub fn halton(mut i: u64, base: u64) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// `(eta, L, rho)` box sample used by the Coulomb corpus and acceptance
/// runs: `eta` uniform on `[0, 30]`, `L` uniform on `0..=20`, `rho`
/// log-uniform on `[0.01, 200]`.
pub fn coulomb_box_point(i: u64) -> (f64, u32, f64) {
    let eta = 30.0 * halton(i, 2);
    let l = ((21.0 * halton(i, 3)) as u32).min(20);
    let rho = 0.01 * (200.0f64 / 0.01).powf(halton(i, 5));
    (eta, l, rho)
}

const BARRIER_IN: &[&str] = &["mass", "hbar", "energy", "v0", "width"];
const BARRIER_OUT: &[&str] = &["transmission", "ln_transmission"];
const COULOMB_IN: &[&str] = &["eta", "l", "rho"];
const COULOMB_OUT: &[&str] = &["f", "fp", "g", "gp", "wronskian"];
const STEP_IN: &[&str] = &["mass", "hbar", "energy", "v0"];
const STEP_OUT: &[&str] = &["r_re", "r_im", "q_region2"];
const BERRY_IN: &[&str] = &["theta", "n_points"];
const BERRY_OUT: &[&str] = &["gamma_plus"];
const SQUID_IN: &[&str] = &["ic", "flux_over_phi0"];
const SQUID_OUT: &[&str] = &["ic_squid"];

fn barrier_corpus() -> Result<CorpusFile> {
    let mut records = Vec::new();
    for (ia, &a) in [0.5, 1.0, 2.0, 5.0].iter().enumerate() {
        for ie in 1..=9 {
            let e = ie as f64 / 10.0;
            let tm = oracle::transfer_matrix_transmission(&PiecewisePotential::barrier(1.0, a)?, e, 1.0, 1.0)?;
            records.push(GoldenRecord {
                case_id: format!("barrier-{ia}-{ie}"),
                provenance: Provenance::Oracle,
                tolerance: 1e-10,
                values: vec![1.0, 1.0, e, 1.0, a, tm.transmission, tm.ln_transmission],
            });
        }
    }
    Ok(CorpusFile { name: "barrier.csv", inputs: BARRIER_IN, outputs: BARRIER_OUT, records })
}

fn coulomb_corpus() -> Result<CorpusFile> {
    let mut records = Vec::new();
    for i in 1..=50u64 {
        let (eta, l, rho) = coulomb_box_point(i);
        let s = oracle::radial_coulomb_integrate(eta, l, rho, rho, 1)?[0];
        records.push(GoldenRecord {
            case_id: format!("coulomb-{i}"),
            provenance: Provenance::Oracle,
            tolerance: 1e-8,
            values: vec![eta, l as f64, rho, s.f, s.fp, s.g, s.gp, s.wronskian()],
        });
    }
    Ok(CorpusFile { name: "coulomb.csv", inputs: COULOMB_IN, outputs: COULOMB_OUT, records })
}

fn step_corpus() -> Result<CorpusFile> {
    let mut records = Vec::new();
    for (i, &(m, e, v0)) in [(1.0f64, 0.5f64, 1.0f64), (2.0, 0.1, 1.0), (0.5, 0.9, 1.0), (1.0, 3.0, 7.0), (4.0, 0.01, 0.02)]
        .iter()
        .enumerate()
    {
        // r = (k - i kappa)/(k + i kappa) evaluated directly, Q_II = E - V0
        let k = (2.0 * m * e).sqrt();
        let kappa = (2.0 * m * (v0 - e)).sqrt();
        let d = k * k + kappa * kappa;
        records.push(GoldenRecord {
            case_id: format!("step-{i}"),
            provenance: Provenance::ClosedForm,
            tolerance: 1e-14,
            values: vec![m, 1.0, e, v0, (k * k - kappa * kappa) / d, -2.0 * k * kappa / d, e - v0],
        });
    }
    Ok(CorpusFile { name: "step.csv", inputs: STEP_IN, outputs: STEP_OUT, records })
}

fn berry_corpus() -> CorpusFile {
    let records = [1.0, 2.0, 3.0, 4.0]
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            let theta = j * PI / 6.0;
            GoldenRecord {
                case_id: format!("berry-{i}"),
                provenance: Provenance::Limit,
                tolerance: 1e-3,
                values: vec![theta, 2000.0, -PI * (1.0 - theta.cos())],
            }
        })
        .collect();
    CorpusFile { name: "berry.csv", inputs: BERRY_IN, outputs: BERRY_OUT, records }
}

fn squid_corpus() -> CorpusFile {
    let records = (0..=20)
        .map(|i| {
            let f = i as f64 / 10.0;
            GoldenRecord {
                case_id: format!("squid-{i}"),
                provenance: Provenance::Oracle,
                tolerance: 1e-12,
                values: vec![1.0, f, phases::squid_critical_current_brute(1.0, f, 1.0, 4001)],
            }
        })
        .collect();
    CorpusFile { name: "squid.csv", inputs: SQUID_IN, outputs: SQUID_OUT, records }
}

/// Builds the whole corpus in memory; fails without side effects if any
/// oracle fails.
pub fn generate_corpus() -> Result<Vec<CorpusFile>> {
    Ok(vec![barrier_corpus()?, berry_corpus(), coulomb_corpus()?, squid_corpus(), step_corpus()?])
}

/// Regenerates the corpus into `dir`. Every file is staged under a
/// temporary name first and renamed only once all have been written.
pub fn regenerate_goldens(dir: &Path) -> Result<Vec<String>> {
    let corpus = generate_corpus()?;
    let io = |e: std::io::Error| Error::Domain(format!("corpus write failed: {e}"));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut staged = Vec::new();
    for f in &corpus {
        let tmp = dir.join(format!(".{}.tmp", f.name));
        if let Err(e) = std::fs::write(&tmp, f.to_csv()) {
            for (t, _) in &staged {
                let _ = std::fs::remove_file(t);
            }
            return Err(io(e));
        }
        staged.push((tmp, dir.join(f.name)));
    }
    for (tmp, dst) in &staged {
        std::fs::rename(tmp, dst).map_err(io)?;
    }
    Ok(corpus.iter().map(|f| f.name.to_string()).collect())
}

/// Names of corpus files in `dir` whose contents differ from a fresh
/// regeneration (missing files count as differing).
pub fn corpus_diff(dir: &Path) -> Result<Vec<String>> {
    Ok(generate_corpus()?
        .into_iter()
        .filter(|f| std::fs::read_to_string(dir.join(f.name)).ok().as_deref() != Some(f.to_csv().as_str()))
        .map(|f| f.name.to_string())
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedRecord {
    pub case_id: String,
    pub provenance: Provenance,
    pub tolerance: f64,
    pub columns: BTreeMap<String, f64>,
}

impl ParsedRecord {
    pub fn get(&self, col: &str) -> Result<f64> {
        self.columns
            .get(col)
            .copied()
            .ok_or_else(|| Error::Domain(format!("{}: missing column '{col}'", self.case_id)))
    }
}

pub fn parse_corpus_csv(text: &str) -> Result<Vec<ParsedRecord>> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines
        .next()
        .ok_or_else(|| Error::Domain("empty corpus file".into()))?
        .split(',')
        .collect();
    if header.len() < 3 || header[..3] != ["case_id", "provenance", "tolerance"] {
        return Err(Error::Domain("corpus header must start with case_id,provenance,tolerance".into()));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Domain(format!("bad number '{s}'")));
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != header.len() {
                return Err(Error::Domain(format!("row has {} cells, header {}", cells.len(), header.len())));
            }
            let mut columns = BTreeMap::new();
            for (h, c) in header[3..].iter().zip(&cells[3..]) {
                columns.insert(h.to_string(), num(c)?);
            }
            Ok(ParsedRecord {
                case_id: cells[0].to_string(),
                provenance: Provenance::parse(cells[1])?,
                tolerance: num(cells[2])?,
                columns,
            })
        })
        .collect()
}

/// Outcome of recomputing one golden row with the primary code path.
#[derive(Debug, Clone, PartialEq)]
pub struct GoldenCheck {
    pub file: String,
    pub case_id: String,
    pub column: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl GoldenCheck {
    /// Pass test at tolerance `tol`: relative, except absolute for zero
    /// expectations and for SQUID currents, which vanish at half-integer flux.
    pub fn within(&self, tol: f64) -> bool {
        let scale = if self.expected == 0.0 || self.file == "squid.csv" { 1.0 } else { self.expected.abs() };
        (self.actual - self.expected).abs() <= tol * scale
    }
}

fn check(file: &str, r: &ParsedRecord, col: &str, actual: f64, out: &mut Vec<GoldenCheck>) -> Result<()> {
    let mut c = GoldenCheck {
        file: file.into(),
        case_id: r.case_id.clone(),
        column: col.into(),
        expected: r.get(col)?,
        actual,
        tolerance: r.tolerance,
        passed: false,
    };
    c.passed = c.within(r.tolerance);
    out.push(c);
    Ok(())
}

/// Recomputes every golden row in `dir` with the library's primary
/// (non-oracle) implementations.
pub fn verify_corpus(dir: &Path) -> Result<Vec<GoldenCheck>> {
    let read = |name: &str| -> Result<Vec<ParsedRecord>> {
        let text = std::fs::read_to_string(dir.join(name))
            .map_err(|e| Error::Domain(format!("cannot read {name}: {e}")))?;
        parse_corpus_csv(&text)
    };
    let mut out = Vec::new();
    for r in read("barrier.csv")? {
        let p = ScatteringProblem::barrier(r.get("mass")?, r.get("hbar")?, r.get("energy")?, r.get("v0")?, r.get("width")?)?;
        let s = solve_barrier(&p)?;
        check("barrier.csv", &r, "transmission", s.transmission(), &mut out)?;
        check("barrier.csv", &r, "ln_transmission", s.ln_transmission(), &mut out)?;
    }
    for r in read("coulomb.csv")? {
        let c = coulomb_fg(r.get("eta")?, r.get("rho")?, r.get("l")? as u32)?;
        for (col, v) in [("f", c.f), ("fp", c.fp), ("g", c.g), ("gp", c.gp), ("wronskian", c.wronskian())] {
            check("coulomb.csv", &r, col, v, &mut out)?;
        }
    }
    for r in read("step.csv")? {
        let s = solve_step(&ScatteringProblem::step(r.get("mass")?, r.get("hbar")?, r.get("energy")?, r.get("v0")?)?)?;
        check("step.csv", &r, "r_re", s.r.re, &mut out)?;
        check("step.csv", &r, "r_im", s.r.im, &mut out)?;
        let q = -(s.problem.v0 - s.problem.energy);
        check("step.csv", &r, "q_region2", q, &mut out)?;
    }
    for r in read("berry.csv")? {
        let p = LoopPath::latitude(r.get("theta")?, r.get("n_points")? as usize)?;
        let g = phases::berry_phase_discrete(&p, Band::Plus)?;
        let expected = r.get("gamma_plus")?;
        // compare modulo 2 pi
        let d = g - expected;
        check("berry.csv", &r, "gamma_plus", expected + d - 2.0 * PI * (d / (2.0 * PI)).round(), &mut out)?;
    }
    for r in read("squid.csv")? {
        let v = phases::squid_critical_current(r.get("ic")?, r.get("flux_over_phi0")?, 1.0);
        check("squid.csv", &r, "ic_squid", v, &mut out)?;
    }
    Ok(out)
}
