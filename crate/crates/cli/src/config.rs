//! Resolved command configurations. A JSON config file supplies defaults;
//! command-line flags override individual fields. A file may hold one block
//! per command (`{"norm": {...}, "compop-diagnose": {...}}`) or the fields
//! of a single command at top level.

use crate::expr::{parse_complex, parse_polynomial};
use plurinorm::compops::{DIAGNOSTIC_RADII, SHARPNESS_RADII};
use plurinorm::identities::Budgets;
use plurinorm::{CPoint, Error, Exhaustion, HoloMap, ModelDomain, Polynomial};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const DEFAULT_SEED: u64 = 7;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormConfig {
    pub domain: String,
    pub exhaustion: String,
    pub pole: Option<String>,
    pub f: Option<String>,
    pub p: f64,
    pub alpha: f64,
    pub budget: String,
    pub levels: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self {
            domain: "disk".into(),
            exhaustion: "log".into(),
            pole: None,
            f: None,
            p: 2.0,
            alpha: -1.0,
            budget: "default".into(),
            levels: 20,
            tol: 1e-7,
            seed: default_seed(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CountingConfig {
    pub domain: String,
    pub exhaustion: String,
    pub pole: Option<String>,
    #[serde(rename = "F")]
    pub map: Option<String>,
    /// `radial a..b` (with `w_count` points) or `list w1; w2; ...`.
    pub w_grid: String,
    pub w_count: usize,
    pub alpha: f64,
    pub r_grid: Vec<f64>,
    pub budget: String,
    pub format: String,
    pub seed: u64,
}

impl Default for CountingConfig {
    fn default() -> Self {
        Self {
            domain: "disk".into(),
            exhaustion: "log".into(),
            pole: None,
            map: None,
            w_grid: "radial 0.1..0.9".into(),
            w_count: 9,
            alpha: -1.0,
            r_grid: vec![0.0],
            budget: "default".into(),
            format: "csv".into(),
            seed: default_seed(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub name: String,
    pub budget: String,
    pub tol: f64,
    pub format: String,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { name: "all".into(), budget: "default".into(), tol: 1e-3, format: "table".into(), seed: default_seed() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnoseConfig {
    pub domain: String,
    pub exhaustion: String,
    pub pole: Option<String>,
    #[serde(rename = "F")]
    pub map: Option<String>,
    pub alpha: f64,
    pub beta: f64,
    pub radii: Vec<f64>,
    /// Level grid of a deficiency profile; empty runs the boundedness diagnostic.
    pub r_grid: Vec<f64>,
    pub rays: usize,
    pub budget: String,
    pub seed: u64,
}

impl Default for DiagnoseConfig {
    fn default() -> Self {
        Self {
            domain: "disk".into(),
            exhaustion: "log".into(),
            pole: None,
            map: None,
            alpha: -1.0,
            beta: -1.0,
            radii: DIAGNOSTIC_RADII.to_vec(),
            r_grid: vec![],
            rays: 8,
            budget: "default".into(),
            seed: default_seed(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub beta: f64,
    pub radii: Vec<f64>,
    pub diagnostic_radii: Vec<f64>,
    pub budget: String,
    pub format: String,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            beta: 0.0,
            radii: SHARPNESS_RADII.to_vec(),
            diagnostic_radii: DIAGNOSTIC_RADII.to_vec(),
            budget: "default".into(),
            format: "csv".into(),
            seed: default_seed(),
        }
    }
}

/// Reads the block of `command` from a config file (the whole object when
/// it has no such key).
pub fn load_section(path: Option<&std::path::Path>, command: &str) -> Result<Value, String> {
    let Some(path) = path else {
        return Ok(Value::Object(Map::new()));
    };
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| format!("config {} is not valid JSON: {e}", path.display()))?;
    let Value::Object(mut m) = v else {
        return Err(format!("config {} must hold a JSON object", path.display()));
    };
    match m.remove(command) {
        Some(Value::Object(b)) => Ok(Value::Object(b)),
        Some(_) => Err(format!("config block `{command}` must be an object")),
        None => Ok(Value::Object(m)),
    }
}

/// Overlays the flags that were given onto the config block and
/// deserializes the result, naming the offending field on failure.
pub fn resolve<T: DeserializeOwned>(mut base: Value, flags: Value) -> Result<T, String> {
    if let (Value::Object(b), Value::Object(f)) = (&mut base, flags) {
        for (k, v) in f {
            if !v.is_null() {
                b.insert(k, v);
            }
        }
    }
    match serde_json::from_value::<T>(base.clone()) {
        Ok(t) => Ok(t),
        Err(e) => {
            if let Value::Object(m) = &base {
                for (k, v) in m {
                    let single = Value::Object(Map::from_iter([(k.clone(), v.clone())]));
                    if let Err(e) = serde_json::from_value::<T>(single) {
                        return Err(format!("config field `{k}`: {e}"));
                    }
                }
            }
            Err(format!("config: {e}"))
        }
    }
}

/// Hex SHA-256 of the command name and its resolved config.
pub fn config_hash<C: Serialize>(command: &str, config: &C) -> String {
    let body = serde_json::to_string(config).expect("configs serialise");
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update(b"\n");
    h.update(body.as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn domain(name: &str) -> Result<ModelDomain, String> {
    match name {
        "disk" => Ok(ModelDomain::UnitDisk),
        "ball" => Ok(ModelDomain::UnitBall2),
        "bidisk" => Ok(ModelDomain::Bidisk),
        _ => Err(format!("field `domain`: unknown domain `{name}` (disk, ball, bidisk)")),
    }
}

pub fn point(src: &str, dim: usize) -> Result<CPoint, String> {
    let coords: Vec<_> = src
        .split(',')
        .map(|s| parse_complex(s.trim()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    if coords.len() != dim {
        return Err(format!("point `{src}` needs {dim} coordinates"));
    }
    CPoint::from_slice(&coords).map_err(|e| e.to_string())
}

pub fn exhaustion(d: ModelDomain, name: &str, pole: Option<&str>) -> Result<Exhaustion, String> {
    let e = match (name, d) {
        ("log", ModelDomain::Bidisk) | ("log-max", ModelDomain::Bidisk) => Ok(Exhaustion::log_max_abs()),
        ("log", _) => Ok(Exhaustion::log_abs(d)),
        ("smooth-square", ModelDomain::UnitBall2) => Ok(Exhaustion::smooth_square()),
        ("green", _) => {
            let p = point(pole.ok_or("field `pole`: the Green exhaustion needs a pole")?, d.dim())?;
            Exhaustion::green_pole(d, p)
        }
        _ => return Err(format!("field `exhaustion`: `{name}` is not available on the {d}")),
    };
    e.map_err(|e: Error| format!("field `exhaustion`: {e}"))
}

pub fn polynomial(field: &str, src: Option<&str>, d: ModelDomain) -> Result<Polynomial, String> {
    let src = src.ok_or_else(|| format!("field `{field}` is required"))?;
    if src.trim() == "identity" {
        if d != ModelDomain::UnitDisk {
            return Err(format!("field `{field}`: `identity` maps the unit disk to itself"));
        }
        return Ok(Polynomial::var(1, 0));
    }
    parse_polynomial(src, d.dim()).map_err(|e| format!("field `{field}`: {e}"))
}

pub fn disk_map(src: Option<&str>, d: ModelDomain) -> Result<HoloMap, Error> {
    let p = polynomial("F", src, d).map_err(Error::Expression)?;
    HoloMap::to_disk(p, d)
}

pub fn budgets(name: &str) -> Result<Budgets, String> {
    match name {
        "default" => Ok(Budgets::default()),
        "low" => Ok(Budgets::low()),
        "doubled" => Ok(Budgets::default().doubled()),
        _ => Err(format!("field `budget`: unknown budget `{name}` (default, low, doubled)")),
    }
}

pub fn w_grid(grid: &str, count: usize) -> Result<Vec<plurinorm::C64>, String> {
    let grid = grid.trim();
    if let Some(rest) = grid.strip_prefix("radial") {
        let (a, b) = rest
            .trim()
            .split_once("..")
            .ok_or_else(|| format!("field `w_grid`: expected `radial a..b`, got `{grid}`"))?;
        let a: f64 = a.trim().parse().map_err(|_| format!("field `w_grid`: bad number `{a}`"))?;
        let b: f64 = b.trim().parse().map_err(|_| format!("field `w_grid`: bad number `{b}`"))?;
        if count == 0 {
            return Err("field `w_count` must be positive".into());
        }
        if count == 1 {
            return Ok(vec![plurinorm::C64::new(a, 0.0)]);
        }
        return Ok((0..count)
            .map(|k| plurinorm::C64::new(a + (b - a) * k as f64 / (count - 1) as f64, 0.0))
            .collect());
    }
    if let Some(rest) = grid.strip_prefix("list") {
        return rest
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_complex(s.trim()).map_err(|e| format!("field `w_grid`: {e}")))
            .collect();
    }
    Err(format!("field `w_grid`: expected `radial a..b` or `list w1; w2`, got `{grid}`"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flags_override_file() {
        let c: NormConfig = resolve(json!({"p": 4.0, "alpha": 0.5}), json!({"alpha": 1.0, "f": null})).unwrap();
        assert_eq!((c.p, c.alpha), (4.0, 1.0));
        let e = resolve::<NormConfig>(json!({"p": "two"}), json!({})).unwrap_err();
        assert!(e.contains("`p`"), "{e}");
        let e = resolve::<NormConfig>(json!({"bogus": 1}), json!({})).unwrap_err();
        assert!(e.contains("bogus"), "{e}");
    }

    #[test]
    fn hash_is_stable() {
        let a = config_hash("norm", &NormConfig::default());
        assert_eq!(a, config_hash("norm", &NormConfig::default()));
        assert_ne!(a, config_hash("counting", &NormConfig::default()));
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn grids() {
        let g = w_grid("radial 0.1..0.9", 5).unwrap();
        assert_eq!(g.len(), 5);
        assert!((g[4].re - 0.9).abs() < 1e-15);
        let g = w_grid("list 0.5; 0.1+0.2i", 0).unwrap();
        assert_eq!(g[1], plurinorm::C64::new(0.1, 0.2));
        assert!(w_grid("grid", 3).is_err());
    }
}
