//! Run configuration: defaults, a plain-text key-value file, and flag
//! overrides, in that order of precedence (flags win).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

/// Everything a verification campaign needs to be reproducible.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub cyclic_n: u64,
    pub line_half_extent: f64,
    pub line_points: usize,
    pub battery: usize,
    pub seed: u64,
    pub c: f64,
    pub shift: usize,
    pub tol_cyclic: f64,
    pub tol_line: f64,
    pub tol_affine: f64,
    pub tol_exact: f64,
    pub out: PathBuf,
    pub csv_out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cyclic_n: 64,
            line_half_extent: 16.0,
            line_points: 1024,
            battery: 100,
            seed: 1003,
            c: 2.0,
            shift: 0,
            tol_cyclic: 1e-10,
            tol_line: 1e-6,
            tol_affine: 1e-2,
            tol_exact: 1e-8,
            out: PathBuf::from("report.json"),
            csv_out: None,
        }
    }
}

impl RunConfig {
    /// Parse a `key = value` file (with `#` comments) over the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut pairs = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {} is not `key = value`: {line}", lineno + 1);
            };
            pairs.insert(key.trim().to_string(), value.trim().to_string());
        }
        for (key, value) in pairs {
            cfg.set(&key, &value)
                .with_context(|| format!("config key {key}"))?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "cyclic_n" => self.cyclic_n = value.parse()?,
            "line_half_extent" => self.line_half_extent = value.parse()?,
            "line_points" => self.line_points = value.parse()?,
            "battery" => self.battery = value.parse()?,
            "seed" => self.seed = value.parse()?,
            "c" => self.c = value.parse()?,
            "shift" => self.shift = value.parse()?,
            "tol_cyclic" => self.tol_cyclic = value.parse()?,
            "tol_line" => self.tol_line = value.parse()?,
            "tol_affine" => self.tol_affine = value.parse()?,
            "tol_exact" => self.tol_exact = value.parse()?,
            "out" => self.out = PathBuf::from(value),
            "csv_out" => self.csv_out = Some(PathBuf::from(value)),
            other => bail!("unknown config key {other}"),
        }
        Ok(())
    }

    /// Invariants every campaign relies on. The slicing constant may drop
    /// below 2 (down to > 1) but that forfeits the dyadic norm bounds, so
    /// it warns.
    pub fn validate(&self) -> Result<()> {
        for (name, tol) in [
            ("tol_cyclic", self.tol_cyclic),
            ("tol_line", self.tol_line),
            ("tol_affine", self.tol_affine),
            ("tol_exact", self.tol_exact),
        ] {
            if !tol.is_finite() || tol <= 0.0 {
                bail!("{name} must be positive, got {tol}");
            }
        }
        if !self.line_half_extent.is_finite() || self.line_half_extent <= 0.0 || self.line_points == 0 {
            bail!("line grid extents must be positive");
        }
        if self.cyclic_n == 0 {
            bail!("cyclic order must be positive");
        }
        if !self.c.is_finite() || self.c <= 1.0 {
            bail!("the slicing constant must satisfy c > 1, got {}", self.c);
        }
        if self.c < 2.0 {
            eprintln!(
                "warning: c = {} is below 2; the dyadic norm bounds 2^(1-k) of the \
                 slicing construction are certified for c >= 2 only",
                self.c
            );
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "cyclic_n": self.cyclic_n,
            "line_half_extent": self.line_half_extent,
            "line_points": self.line_points,
            "battery": self.battery,
            "seed": self.seed,
            "c": self.c,
            "shift": self.shift,
            "tol_cyclic": self.tol_cyclic,
            "tol_line": self.tol_line,
            "tol_affine": self.tol_affine,
            "tol_exact": self.tol_exact,
        })
    }
}
