//! JSON experiment configurations.
//!
//! Complex numbers are `[re, im]` pairs (a bare number is read as real),
//! matrices are row-major nested arrays, and step functions are lists of
//! `{"duration": d, "value": [...]}` segments.

use qfwalk::fock::StepFunction;
use qfwalk::linalg::{c, herm_defect, CMat, CVec, C64};
use qfwalk::sample;
use qfwalk::verify::DEFAULT_SEED;
use qfwalk::walk::WalkModel;
use serde_json::{Map, Value};
use std::fmt;
use std::path::PathBuf;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_CUTOFF: usize = 24;
pub const DEFAULT_N_LIST: [usize; 5] = [16, 64, 256, 1024, 4096];
pub const DEFAULT_HORIZON: f64 = 1.0;

/// A configuration problem, tagged with the offending field.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(field: &str, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "field \"{}\": {}", self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

type Parsed<T> = Result<T, ConfigError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Verify,
    Converge,
    Dilate,
    Uniqueness,
}

impl Mode {
    fn parse(s: &str) -> Option<Self> {
        match s {
            "verify" => Some(Mode::Verify),
            "converge" => Some(Mode::Converge),
            "dilate" => Some(Mode::Dilate),
            "uniqueness" => Some(Mode::Uniqueness),
            _ => None,
        }
    }
}

/// Test data `(f, g, u, v)` for matrix elements `⟨u ε(f), · v ε(g)⟩`.
#[derive(Clone, Debug)]
pub struct TestData {
    pub f: StepFunction,
    pub g: StepFunction,
    pub u: CVec,
    pub v: CVec,
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub mode: Option<Mode>,
    /// Preset name, if the model came from one.
    pub preset: Option<String>,
    pub model: WalkModel,
    pub n_list: Vec<usize>,
    pub horizon: f64,
    pub test: TestData,
    pub tol: f64,
    pub cutoff: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Step lengths `τ = T/n`.
    pub fn taus(&self) -> Vec<f64> {
        self.n_list.iter().map(|&n| self.horizon / n as f64).collect()
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        parse_config("{}").expect("empty configuration is valid")
    }
}

fn complex(v: &Value, field: &str) -> Parsed<C64> {
    match v {
        Value::Number(n) => Ok(c(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(a) if a.len() == 2 => match (a[0].as_f64(), a[1].as_f64()) {
            (Some(re), Some(im)) => Ok(c(re, im)),
            _ => Err(ConfigError::new(field, "complex entries must be [re, im] with numeric parts")),
        },
        _ => Err(ConfigError::new(field, "complex entries must be [re, im] pairs")),
    }
}

fn vector(v: &Value, field: &str) -> Parsed<CVec> {
    let a = v.as_array().ok_or_else(|| ConfigError::new(field, "expected an array of complex numbers"))?;
    let entries = a.iter().map(|x| complex(x, field)).collect::<Parsed<Vec<_>>>()?;
    Ok(CVec::from_vec(entries))
}

fn matrix(v: &Value, field: &str) -> Parsed<CMat> {
    let rows = v.as_array().ok_or_else(|| ConfigError::new(field, "expected a row-major array of rows"))?;
    if rows.is_empty() {
        return Err(ConfigError::new(field, "matrix has no rows"));
    }
    let parsed = rows.iter().map(|r| vector(r, field)).collect::<Parsed<Vec<_>>>()?;
    let ncols = parsed[0].len();
    if ncols == 0 || parsed.iter().any(|r| r.len() != ncols) {
        return Err(ConfigError::new(field, "rows must be non-empty and of equal length"));
    }
    Ok(CMat::from_fn(parsed.len(), ncols, |i, j| parsed[i][j]))
}

fn number(obj: &Map<String, Value>, key: &str, field: &str, default: f64) -> Parsed<f64> {
    match obj.get(key) {
        None => Ok(default),
        Some(v) => v.as_f64().ok_or_else(|| ConfigError::new(field, "expected a number")),
    }
}

fn hermitian(obj: &Map<String, Value>, key: &str, tol: f64) -> Parsed<CMat> {
    let v = obj.get(key).ok_or_else(|| ConfigError::new(key, "missing from an explicit model"))?;
    let m = matrix(v, key)?;
    if !m.is_square() {
        return Err(ConfigError::new(key, format!("must be square, got {}x{}", m.nrows(), m.ncols())));
    }
    let d = herm_defect(&m);
    if d > tol {
        return Err(ConfigError::new(key, format!("must be self-adjoint (defect {d:e})")));
    }
    Ok(m)
}

fn model(v: Option<&Value>, tol: f64) -> Parsed<(Option<String>, WalkModel)> {
    let empty = Map::new();
    let obj = match v {
        None => &empty,
        Some(Value::Object(o)) => o,
        Some(_) => return Err(ConfigError::new("model", "expected an object")),
    };
    let explicit = ["rho", "H_S", "H_P", "H_I"].iter().any(|k| obj.contains_key(*k));
    if explicit {
        let rho = hermitian(obj, "rho", tol)?;
        let h_s = hermitian(obj, "H_S", tol)?;
        let h_p = hermitian(obj, "H_P", tol)?;
        let h_i = hermitian(obj, "H_I", tol)?;
        let (p, dh) = (rho.nrows(), h_s.nrows());
        if h_p.nrows() != p {
            return Err(ConfigError::new("H_P", format!("must be {p}x{p} to match rho")));
        }
        if h_i.nrows() != p * dh {
            return Err(ConfigError::new("H_I", format!("must be {0}x{0} on particle ⊗ system", p * dh)));
        }
        let m = WalkModel::new(rho, h_s, h_p, h_i, tol).map_err(|e| ConfigError::new("model", e.to_string()))?;
        return Ok((None, m));
    }
    let preset = match obj.get("preset") {
        None => "thermal_qubit",
        Some(p) => p.as_str().ok_or_else(|| ConfigError::new("model.preset", "expected a string"))?,
    };
    match preset {
        "thermal_qubit" => {
            let gamma0 = number(obj, "gamma0", "model.gamma0", 0.8)?;
            let dim = number(obj, "systemDim", "model.systemDim", 2.0)?;
            if dim < 1.0 || dim.fract() != 0.0 {
                return Err(ConfigError::new("model.systemDim", "must be a positive integer"));
            }
            let coupling = number(obj, "coupling", "model.coupling", 1.0)?;
            let omega_s = number(obj, "omegaS", "model.omegaS", 1.0)?;
            let omega_p = number(obj, "omegaP", "model.omegaP", 1.0)?;
            let m = WalkModel::thermal_qubit(gamma0, dim as usize, coupling, omega_s, omega_p)
                .map_err(|e| ConfigError::new("model.gamma0", e.to_string()))?;
            Ok((Some(preset.to_string()), m))
        }
        other => Err(ConfigError::new("model.preset", format!("unknown preset \"{other}\""))),
    }
}

fn step_function(v: &Value, field: &str, dim: usize) -> Parsed<StepFunction> {
    let segs = v.as_array().ok_or_else(|| ConfigError::new(field, "expected a list of segments"))?;
    let mut out = Vec::with_capacity(segs.len());
    for s in segs {
        let d = s.get("duration").and_then(Value::as_f64).ok_or_else(|| ConfigError::new(field, "segment needs a numeric \"duration\""))?;
        let x = vector(s.get("value").ok_or_else(|| ConfigError::new(field, "segment needs a \"value\""))?, field)?;
        if x.len() != dim {
            return Err(ConfigError::new(field, format!("values must have length {dim} (dimension of the noise space)")));
        }
        out.push((d, x));
    }
    StepFunction::new(dim, out).map_err(|e| ConfigError::new(field, e.to_string()))
}

/// Two-segment test functions on `[0, T)` and unit vectors drawn from `seed`.
pub fn default_test_data(dim_noise: usize, dim_h: usize, horizon: f64, seed: u64) -> TestData {
    let mut rng = sample::seeded(seed);
    let two = |rng: &mut _| {
        let a = sample::complex_vector(rng, dim_noise) * c(0.5, 0.0);
        let b = sample::complex_vector(rng, dim_noise) * c(0.5, 0.0);
        StepFunction::new(dim_noise, vec![(horizon / 2.0, a), (horizon / 2.0, b)]).expect("positive durations")
    };
    let f = two(&mut rng);
    let g = two(&mut rng);
    let u = sample::complex_vector(&mut rng, dim_h).normalize();
    let v = sample::complex_vector(&mut rng, dim_h).normalize();
    TestData { f, g, u, v }
}

/// Parse and validate a configuration document, applying defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ConfigError::new("", format!("malformed JSON: {e}")))?;
    let obj = doc.as_object().ok_or_else(|| ConfigError::new("", "configuration must be a JSON object"))?;
    const KNOWN: [&str; 9] = ["mode", "model", "grid", "test", "tol", "cutoff", "seed", "output", "comment"];
    if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(ConfigError::new(k, "unknown field"));
    }

    let mode = match obj.get("mode") {
        None => None,
        Some(v) => Some(v.as_str().and_then(Mode::parse).ok_or_else(|| {
            ConfigError::new("mode", "must be one of verify, converge, dilate, uniqueness")
        })?),
    };
    let tol = number(obj, "tol", "tol", DEFAULT_TOL)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(ConfigError::new("tol", "must be positive"));
    }
    let cutoff = match obj.get("cutoff") {
        None => DEFAULT_CUTOFF,
        Some(v) => v.as_u64().filter(|&n| n > 0).ok_or_else(|| ConfigError::new("cutoff", "must be a positive integer"))? as usize,
    };
    let seed = match obj.get("seed") {
        None => DEFAULT_SEED,
        Some(v) => v.as_u64().ok_or_else(|| ConfigError::new("seed", "must be a non-negative integer"))?,
    };
    let output = match obj.get("output") {
        None => None,
        Some(v) => Some(PathBuf::from(v.as_str().ok_or_else(|| ConfigError::new("output", "expected a path string"))?)),
    };
    let (preset, model) = model(obj.get("model"), tol)?;

    let empty = Map::new();
    let grid = match obj.get("grid") {
        None => &empty,
        Some(Value::Object(o)) => o,
        Some(_) => return Err(ConfigError::new("grid", "expected an object")),
    };
    let horizon = number(grid, "T", "grid.T", DEFAULT_HORIZON)?;
    if horizon.is_nan() || horizon <= 0.0 {
        return Err(ConfigError::new("grid.T", "must be positive"));
    }
    let n_list = match grid.get("nList") {
        None => DEFAULT_N_LIST.to_vec(),
        Some(v) => {
            let a = v.as_array().ok_or_else(|| ConfigError::new("grid.nList", "expected an array of step counts"))?;
            a.iter()
                .map(|x| x.as_u64().filter(|&n| n > 0).map(|n| n as usize))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| ConfigError::new("grid.nList", "step counts must be positive integers"))?
        }
    };
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ConfigError::new("grid.nList", "must be non-empty and strictly increasing"));
    }

    let dim_noise = model.dim_p * model.dim_p - 1;
    let dim_h = model.dim_h;
    let defaults = default_test_data(dim_noise, dim_h, horizon, seed);
    let test = match obj.get("test") {
        None => defaults,
        Some(Value::Object(t)) => {
            let f = t.get("f").map(|v| step_function(v, "test.f", dim_noise)).transpose()?.unwrap_or(defaults.f);
            let g = t.get("g").map(|v| step_function(v, "test.g", dim_noise)).transpose()?.unwrap_or(defaults.g);
            let u = t.get("u").map(|v| vector(v, "test.u")).transpose()?.unwrap_or(defaults.u);
            let v = t.get("v").map(|v| vector(v, "test.v")).transpose()?.unwrap_or(defaults.v);
            if u.len() != dim_h {
                return Err(ConfigError::new("test.u", format!("must have length {dim_h} (system dimension)")));
            }
            if v.len() != dim_h {
                return Err(ConfigError::new("test.v", format!("must have length {dim_h} (system dimension)")));
            }
            TestData { f, g, u, v }
        }
        Some(_) => return Err(ConfigError::new("test", "expected an object")),
    };
    Ok(ExperimentConfig { mode, preset, model, n_list, horizon, test, tol, cutoff, seed, output })
}
