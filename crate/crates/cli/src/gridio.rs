//! CSV interchange for grid functions.
//!
//! Format: a header comment naming the grid, a column header, then one
//! row per grid point with chart coordinates and the complex sample:
//!
//! ```text
//! # grid: cyclic n=8
//! index,re,im
//! 0,1.0000000000000000e0,0.0000000000000000e0
//! ...
//! # grid: realline half_extent=16 n=1024
//! x,re,im
//! ...
//! # grid: affine b_half=32 nb=64 log2_a0=-4 dlog2_a=0.125 na=64
//! b,log2_a,re,im
//! ```

use std::path::Path;

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use wavegroup_core::report::format_float;
use wavegroup_core::{GridFunction, GridKind, GroupPoint, HaarGrid};

pub fn write_grid_function(path: &Path, f: &GridFunction) -> Result<()> {
    let mut out = String::new();
    match *f.grid().kind() {
        GridKind::Cyclic { n } => {
            out.push_str(&format!("# grid: cyclic n={n}\n"));
            out.push_str("index,re,im\n");
            for (p, v) in f.grid().points().iter().zip(f.values()) {
                let GroupPoint::Cyclic(i) = p else { unreachable!() };
                out.push_str(&format!("{i},{},{}\n", format_float(v.re), format_float(v.im)));
            }
        }
        GridKind::RealLine { half_extent, len } => {
            out.push_str(&format!("# grid: realline half_extent={half_extent} n={len}\n"));
            out.push_str("x,re,im\n");
            for (p, v) in f.grid().points().iter().zip(f.values()) {
                let GroupPoint::Real(x) = p else { unreachable!() };
                out.push_str(&format!(
                    "{},{},{}\n",
                    format_float(*x),
                    format_float(v.re),
                    format_float(v.im)
                ));
            }
        }
        GridKind::Affine {
            b_half,
            nb,
            log2_a0,
            dlog2_a,
            na,
        } => {
            out.push_str(&format!(
                "# grid: affine b_half={b_half} nb={nb} log2_a0={log2_a0} dlog2_a={dlog2_a} na={na}\n"
            ));
            out.push_str("b,log2_a,re,im\n");
            for (p, v) in f.grid().points().iter().zip(f.values()) {
                let GroupPoint::Affine { b, a } = p else { unreachable!() };
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    format_float(*b),
                    format_float(a.log2()),
                    format_float(v.re),
                    format_float(v.im)
                ));
            }
        }
    }
    std::fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_grid_function(path: &Path) -> Result<GridFunction> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines.next().context("empty grid function file")?;
    let spec = header
        .strip_prefix("# grid: ")
        .with_context(|| format!("missing `# grid:` header in {}", path.display()))?;
    let mut kind_words = spec.split_whitespace();
    let kind = kind_words.next().context("empty grid header")?;
    let mut params = std::collections::BTreeMap::new();
    for word in kind_words {
        let Some((k, v)) = word.split_once('=') else {
            bail!("malformed grid parameter {word}");
        };
        params.insert(k.to_string(), v.to_string());
    }
    let get = |key: &str| -> Result<f64> {
        params
            .get(key)
            .with_context(|| format!("grid header misses {key}"))?
            .parse::<f64>()
            .with_context(|| format!("grid parameter {key}"))
    };
    let grid = match kind {
        "cyclic" => HaarGrid::cyclic(get("n")? as u64),
        "realline" => HaarGrid::real_line(get("half_extent")?, get("n")? as usize),
        "affine" => HaarGrid::affine(
            get("b_half")?,
            get("nb")? as usize,
            get("log2_a0")?,
            get("dlog2_a")?,
            get("na")? as usize,
        ),
        other => bail!("unknown grid kind {other}"),
    };
    let _column_header = lines.next().context("missing column header")?;
    let coord_cols = match *grid.kind() {
        GridKind::Affine { .. } => 2,
        _ => 1,
    };
    let mut values = Vec::with_capacity(grid.len());
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != coord_cols + 2 {
            bail!(
                "row {} has {} fields, expected {}",
                lineno + 3,
                fields.len(),
                coord_cols + 2
            );
        }
        let re: f64 = fields[coord_cols].trim().parse()?;
        let im: f64 = fields[coord_cols + 1].trim().parse()?;
        values.push(Complex64::new(re, im));
    }
    Ok(GridFunction::new(grid, values)?)
}
