//! Experiment configuration: one JSON document naming the problems to build,
//! the solvers to run and the iteration settings.
//!
//! ```json
//! {
//!   "families": [
//!     { "kind": "error_table" },
//!     { "kind": "c1", "m": 40, "n": 20, "a": 0.5, "alpha": 1.0 },
//!     { "kind": "c2", "m": 40, "n": 20, "dw": 1e-8, "up": 0.5, "cRange": [0, 1e-14] },
//!     { "kind": "set_p" },
//!     { "kind": "explicit", "id": "tiny", "a": [[1, 0], [0, 1]], "b": [1, 2], "c": [0, 0] },
//!     { "kind": "file", "path": "problems/p1.txt" }
//!   ],
//!   "solvers": ["CG", "CGLSI", "CGLSEPS", "MINRES", "QR", "QREPS", "SM", "AUG"],
//!   "eps": 7.105427357601002e-15,
//!   "tol": 1e-30,
//!   "maxIterations": 10000,
//!   "stagnationWindow": 2000,
//!   "seed": 7,
//!   "output": "records.csv"
//! }
//! ```

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use qls_core::iterative::{IterationControl, STAGNATION_WINDOW};
use qls_core::problems::{
    assemble_problem, derive_seed, generate_problem_set_p, nearest_power_of_two, orthogonal_factor,
    read_problem, sigma_c1, sigma_c2, uniform_vector,
};
use qls_core::{DenseMatrix, QlsProblem, UNIT_ROUNDOFF};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::table::{table_problems, TABLE_KINDS};

/// Default regularization weight `2⁻⁴⁷`.
pub const DEFAULT_EPS: f64 = 7.105_427_357_601_002e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SolverKind {
    Cg,
    Cglsi,
    Cglseps,
    Minres,
    Qr,
    Qreps,
    Sm,
    Aug,
}

impl SolverKind {
    pub const ALL: [SolverKind; 8] = [
        SolverKind::Cg,
        SolverKind::Cglsi,
        SolverKind::Cglseps,
        SolverKind::Minres,
        SolverKind::Qr,
        SolverKind::Qreps,
        SolverKind::Sm,
        SolverKind::Aug,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Cg => "CG",
            SolverKind::Cglsi => "CGLSI",
            SolverKind::Cglseps => "CGLSEPS",
            SolverKind::Minres => "MINRES",
            SolverKind::Qr => "QR",
            SolverKind::Qreps => "QREPS",
            SolverKind::Sm => "SM",
            SolverKind::Aug => "AUG",
        }
    }

    pub fn is_iterative(self) -> bool {
        matches!(
            self,
            SolverKind::Cg | SolverKind::Cglsi | SolverKind::Cglseps | SolverKind::Minres
        )
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let upper = s.trim().to_ascii_uppercase();
        SolverKind::ALL
            .into_iter()
            .find(|k| k.name() == upper || (upper == "CGLSε" && *k == SolverKind::Cglseps))
            .ok_or_else(|| format!("unknown solver '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    #[serde(rename_all = "camelCase")]
    C1 {
        m: usize,
        n: usize,
        a: f64,
        #[serde(default)]
        alpha: Option<f64>,
        #[serde(default)]
        c_range: Option<[f64; 2]>,
        #[serde(default = "default_u_kind")]
        u_kind: u32,
        #[serde(default = "default_v_kind")]
        v_kind: u32,
        #[serde(default)]
        id: Option<String>,
    },
    #[serde(rename_all = "camelCase")]
    C2 {
        m: usize,
        n: usize,
        dw: f64,
        up: f64,
        #[serde(default)]
        alpha: Option<f64>,
        #[serde(default)]
        c_range: Option<[f64; 2]>,
        #[serde(default = "default_u_kind")]
        u_kind: u32,
        #[serde(default = "default_v_kind")]
        v_kind: u32,
        #[serde(default)]
        id: Option<String>,
    },
    SetP {},
    #[serde(rename_all = "camelCase")]
    ErrorTable {
        #[serde(default)]
        u_kind: Option<u32>,
        #[serde(default)]
        v_kind: Option<u32>,
    },
    Explicit {
        id: String,
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        c: Vec<f64>,
        #[serde(default)]
        x: Option<Vec<f64>>,
    },
    File {
        path: PathBuf,
        #[serde(default)]
        id: Option<String>,
    },
}

fn default_u_kind() -> u32 {
    TABLE_KINDS.0
}

fn default_v_kind() -> u32 {
    TABLE_KINDS.1
}

fn default_eps() -> f64 {
    DEFAULT_EPS
}

fn default_tol() -> f64 {
    1e2 * UNIT_ROUNDOFF
}

fn default_solvers() -> Vec<SolverKind> {
    SolverKind::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentConfig {
    pub families: Vec<Family>,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<SolverKind>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// `None` means `10·n` per problem.
    #[serde(default)]
    pub max_iterations: Option<usize>,
    #[serde(default)]
    pub stagnation_window: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Directory that relative `file` paths resolve against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

/// A generated or loaded problem with its record identifier.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedProblem {
    pub id: String,
    pub problem: QlsProblem,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let msg = msg.rsplit_once(" at line ").map_or(msg.as_str(), |(m, _)| m).to_owned();
            BenchError::config(format!("{}:{}", e.line(), e.column()), msg)
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        let mut cfg = Self::from_json(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty() {
            return Err(BenchError::config("families", "at least one family is required"));
        }
        if self.solvers.is_empty() {
            return Err(BenchError::config("solvers", "at least one solver is required"));
        }
        if !(self.eps > 0.0 && self.eps.is_finite()) {
            return Err(BenchError::config("eps", format!("must be positive, got {}", self.eps)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(BenchError::config("tol", format!("must be positive, got {}", self.tol)));
        }
        if self.max_iterations == Some(0) {
            return Err(BenchError::config("maxIterations", "must be at least 1"));
        }
        if self.stagnation_window == Some(0) {
            return Err(BenchError::config("stagnationWindow", "must be at least 1"));
        }
        for (j, fam) in self.families.iter().enumerate() {
            let at = |field: &str| format!("families[{j}].{field}");
            match fam {
                Family::C1 { m, n, a, alpha, c_range, .. } => {
                    check_dims(*m, *n, &at("m"))?;
                    if !(*a > 0.0 && a.is_finite()) {
                        return Err(BenchError::config(at("a"), format!("must be positive, got {a}")));
                    }
                    check_c_spec(*alpha, *c_range, &at("alpha"))?;
                }
                Family::C2 { m, n, dw, up, alpha, c_range, .. } => {
                    check_dims(*m, *n, &at("m"))?;
                    if !(*dw > 0.0 && dw < up && up.is_finite()) {
                        return Err(BenchError::config(at("dw"), format!("need 0 < dw < up, got dw={dw}, up={up}")));
                    }
                    check_c_spec(*alpha, *c_range, &at("alpha"))?;
                }
                Family::Explicit { id, a, .. } => {
                    if id.is_empty() {
                        return Err(BenchError::config(at("id"), "must not be empty"));
                    }
                    if a.is_empty() || a[0].is_empty() {
                        return Err(BenchError::config(at("a"), "matrix must be at least 1x1"));
                    }
                }
                Family::SetP {} | Family::ErrorTable { .. } | Family::File { .. } => {}
            }
        }
        Ok(())
    }

    pub fn eps_rounded(&self) -> f64 {
        nearest_power_of_two(self.eps).map(|(e, _)| e).unwrap_or(DEFAULT_EPS)
    }

    /// Iteration control for a problem with `n` unknowns.
    pub fn control(&self) -> IterationControl {
        let mut ctrl = IterationControl::default()
            .with_tol(self.tol)
            .with_stagnation_window(self.stagnation_window.unwrap_or(STAGNATION_WINDOW));
        if let Some(it) = self.max_iterations {
            ctrl = ctrl.with_max_iterations(it);
        }
        ctrl
    }

    /// Builds every problem named by the families, in order.
    pub fn build_problems(&self) -> Result<Vec<NamedProblem>> {
        let mut out = Vec::new();
        for (j, fam) in self.families.iter().enumerate() {
            let at = |field: &str| format!("families[{j}].{field}");
            match fam {
                Family::C1 { m, n, a, alpha, c_range, u_kind, v_kind, id } => {
                    let sigma = sigma_c1(*n, *a)?;
                    let desc = format!("C1-a={a:e}");
                    let p = synthetic(j, *m, &sigma, (*alpha, *c_range), (*u_kind, *v_kind), self.seed, &desc)
                        .map_err(|e| BenchError::config(at("m"), e.to_string()))?;
                    out.push(NamedProblem {
                        id: id.clone().unwrap_or_else(|| format!("F{j:02}-{desc}")),
                        problem: p,
                    });
                }
                Family::C2 { m, n, dw, up, alpha, c_range, u_kind, v_kind, id } => {
                    let sigma = sigma_c2(*n, *dw, *up)?;
                    let desc = format!("C2-up={up:e}-dw={dw:e}");
                    let p = synthetic(j, *m, &sigma, (*alpha, *c_range), (*u_kind, *v_kind), self.seed, &desc)
                        .map_err(|e| BenchError::config(at("m"), e.to_string()))?;
                    out.push(NamedProblem {
                        id: id.clone().unwrap_or_else(|| format!("F{j:02}-{desc}")),
                        problem: p,
                    });
                }
                Family::SetP {} => {
                    for (i, p) in generate_problem_set_p(self.seed).into_iter().enumerate() {
                        out.push(NamedProblem {
                            id: format!("P{i:02}"),
                            problem: p,
                        });
                    }
                }
                Family::ErrorTable { u_kind, v_kind } => {
                    let kinds = (u_kind.unwrap_or(TABLE_KINDS.0), v_kind.unwrap_or(TABLE_KINDS.1));
                    out.extend(table_problems(self.seed, kinds)?);
                }
                Family::Explicit { id, a, b, c, x } => {
                    let mat = DenseMatrix::from_rows(a).map_err(|e| BenchError::config(at("a"), e.to_string()))?;
                    let p = QlsProblem::new(mat, b.clone(), c.clone(), x.clone(), id.clone())
                        .map_err(|e| BenchError::config(at("b"), e.to_string()))?;
                    out.push(NamedProblem {
                        id: id.clone(),
                        problem: p,
                    });
                }
                Family::File { path, id } => {
                    let full = match &self.base_dir {
                        Some(dir) if path.is_relative() => dir.join(path),
                        _ => path.clone(),
                    };
                    let text = std::fs::read_to_string(&full).map_err(|e| BenchError::io(&full, e))?;
                    let p = read_problem(&text).map_err(|e| BenchError::config(at("path"), e.to_string()))?;
                    let stem = full
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| format!("file{j:02}"));
                    out.push(NamedProblem {
                        id: id.clone().unwrap_or(stem),
                        problem: p,
                    });
                }
            }
        }
        if out.is_empty() {
            return Err(BenchError::EmptyInput);
        }
        let mut seen = HashSet::new();
        for p in &out {
            if !seen.insert(p.id.as_str()) {
                return Err(BenchError::config("families", format!("duplicate problem id '{}'", p.id)));
            }
        }
        Ok(out)
    }
}

fn check_dims(m: usize, n: usize, at: &str) -> Result<()> {
    if n == 0 || m < n {
        return Err(BenchError::config(at, format!("need m >= n >= 1, got m={m}, n={n}")));
    }
    Ok(())
}

fn check_c_spec(alpha: Option<f64>, range: Option<[f64; 2]>, at: &str) -> Result<()> {
    match (alpha, range) {
        (Some(a), None) if a.is_finite() => Ok(()),
        (None, Some([g, z])) if g.is_finite() && z.is_finite() => Ok(()),
        (Some(_), Some(_)) => Err(BenchError::config(at, "give either alpha or cRange, not both")),
        (None, None) => Err(BenchError::config(at, "one of alpha or cRange is required")),
        _ => Err(BenchError::config(at, "c scale must be finite")),
    }
}

/// `c = α·rand(n)` or `c = γ + (ζ − γ)·rand(n)`, with streams derived from
/// the family index.
fn synthetic(
    j: usize,
    m: usize,
    sigma: &[f64],
    (alpha, range): (Option<f64>, Option<[f64; 2]>),
    (ku, kv): (u32, u32),
    seed: u64,
    desc: &str,
) -> qls_core::Result<QlsProblem> {
    let n = sigma.len();
    let s = derive_seed(seed, 1000 + j as u64);
    let (lo, hi) = match (alpha, range) {
        (Some(a), _) => (0.0, a),
        (None, Some([g, z])) => (g, z),
        (None, None) => (0.0, 0.0),
    };
    let c: Vec<f64> = uniform_vector(n, derive_seed(s, 2))
        .into_iter()
        .map(|t| lo + (hi - lo) * t)
        .collect();
    let u = orthogonal_factor(m, ku, s);
    let v = orthogonal_factor(n, kv, derive_seed(s, 1));
    let label = format!("{desc}-U{ku}-V{kv}-c[{lo:e},{hi:e}]-seed={seed}");
    assemble_problem(&u, sigma, &v, &c, label)
}
