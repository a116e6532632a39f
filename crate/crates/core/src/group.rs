//! Concrete group models with left Haar quadrature.
//!
//! Three groups are realized: the real line under addition, the cyclic
//! group Z_N under counting measure, and the `ax+b` affine group of the
//! line. Points are stored in chart coordinates, grids carry left-Haar
//! quadrature weights, and grid functions are complex sample vectors over
//! a grid. Everything downstream (Fourier transforms, operator fields,
//! wavelet quadrature) is built on these.
//!
//! Conventions fixed here and echoed in every report:
//! * affine chart `(b, a)`, `a > 0`, acting on the line by `x -> a x + b`,
//!   composition `(b1,a1)(b2,a2) = (b1 + a1 b2, a1 a2)`;
//! * affine left Haar measure `da db / a^2`, so the modular function is
//!   `Delta(b, a) = 1/a` (pinned operationally by the right-translation
//!   quadrature identity, see tests);
//! * continuum grids are uniform in `b`/`x` and logarithmic in `a`.
//!
//! The real-line grid is treated as a periodized window: translations wrap
//! around. Affine translations genuinely move mass off the chart, so they
//! resample with bilinear interpolation and report the lost fraction.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Relative quadrature tolerance expected of continuum grids.
pub const GRID_TOL_CONTINUUM: f64 = 1e-3;
/// Tolerance for the exact (cyclic) model.
pub const GRID_TOL_CYCLIC: f64 = 1e-12;

/// A point of one of the three group models, in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupPoint {
    /// `x` on the real line.
    Real(f64),
    /// Residue in `0..n` of the cyclic group.
    Cyclic(u64),
    /// Affine `(b, a)` with `a > 0`.
    Affine { b: f64, a: f64 },
}

impl GroupPoint {
    pub fn affine(b: f64, a: f64) -> Result<Self> {
        if a > 0.0 && a.is_finite() && b.is_finite() {
            Ok(GroupPoint::Affine { b, a })
        } else {
            Err(CoreError::Domain(format!(
                "affine point needs finite b and a > 0, got (b, a) = ({b}, {a})"
            )))
        }
    }
}

/// Group law, inverse, identity and modular function of a model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupModel {
    RealLine,
    Cyclic(u64),
    Affine,
}

impl GroupModel {
    pub fn identity(&self) -> GroupPoint {
        match self {
            GroupModel::RealLine => GroupPoint::Real(0.0),
            GroupModel::Cyclic(_) => GroupPoint::Cyclic(0),
            GroupModel::Affine => GroupPoint::Affine { b: 0.0, a: 1.0 },
        }
    }

    /// Check that `p` lies in this model's chart.
    pub fn check(&self, p: &GroupPoint) -> Result<()> {
        match (self, p) {
            (GroupModel::RealLine, GroupPoint::Real(x)) if x.is_finite() => Ok(()),
            (GroupModel::Cyclic(n), GroupPoint::Cyclic(r)) if r < n => Ok(()),
            (GroupModel::Affine, GroupPoint::Affine { b, a })
                if *a > 0.0 && a.is_finite() && b.is_finite() =>
            {
                Ok(())
            }
            _ => Err(CoreError::Domain(format!(
                "point {p:?} is not valid for model {self:?}"
            ))),
        }
    }

    /// Group composition `g * h`.
    pub fn multiply(&self, g: &GroupPoint, h: &GroupPoint) -> Result<GroupPoint> {
        self.check(g)?;
        self.check(h)?;
        Ok(match (self, g, h) {
            (GroupModel::RealLine, GroupPoint::Real(x), GroupPoint::Real(y)) => {
                GroupPoint::Real(x + y)
            }
            (GroupModel::Cyclic(n), GroupPoint::Cyclic(x), GroupPoint::Cyclic(y)) => {
                GroupPoint::Cyclic((x + y) % n)
            }
            (
                GroupModel::Affine,
                GroupPoint::Affine { b: b1, a: a1 },
                GroupPoint::Affine { b: b2, a: a2 },
            ) => GroupPoint::Affine {
                b: b1 + a1 * b2,
                a: a1 * a2,
            },
            _ => unreachable!("check() guarantees matching variants"),
        })
    }

    pub fn inverse(&self, g: &GroupPoint) -> Result<GroupPoint> {
        self.check(g)?;
        Ok(match (self, g) {
            (GroupModel::RealLine, GroupPoint::Real(x)) => GroupPoint::Real(-x),
            (GroupModel::Cyclic(n), GroupPoint::Cyclic(x)) => {
                GroupPoint::Cyclic(if *x == 0 { 0 } else { n - x })
            }
            (GroupModel::Affine, GroupPoint::Affine { b, a }) => GroupPoint::Affine {
                b: -b / a,
                a: 1.0 / a,
            },
            _ => unreachable!(),
        })
    }

    /// Modular function `Delta(g)`, normalized so that
    /// `integral of f(x g) d mu(x) = Delta(g)^{-1} * integral of f d mu`.
    pub fn modular(&self, g: &GroupPoint) -> Result<f64> {
        self.check(g)?;
        Ok(match (self, g) {
            (GroupModel::Affine, GroupPoint::Affine { a, .. }) => 1.0 / a,
            _ => 1.0,
        })
    }

    pub fn is_unimodular(&self) -> bool {
        !matches!(self, GroupModel::Affine)
    }
}

/// Geometry of a quadrature grid; determines points and weights.
#[derive(Debug, Clone, PartialEq)]
pub enum GridKind {
    Cyclic {
        n: u64,
    },
    /// Uniform periodized window `[-half_extent, half_extent)`, `len` cells.
    RealLine {
        half_extent: f64,
        len: usize,
    },
    /// Product grid: `b` uniform on `[-b_half, b_half)` (`nb` cells),
    /// `log2 a` uniform starting at `log2_a0` with step `dlog2_a` (`na` cells).
    Affine {
        b_half: f64,
        nb: usize,
        log2_a0: f64,
        dlog2_a: f64,
        na: usize,
    },
}

/// Quadrature grid for left Haar measure on one of the group models.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarGrid {
    kind: GridKind,
    points: Vec<GroupPoint>,
    weights: Vec<f64>,
}

impl HaarGrid {
    /// Counting-measure grid on Z_n.
    pub fn cyclic(n: u64) -> Arc<Self> {
        let points = (0..n).map(GroupPoint::Cyclic).collect();
        let weights = vec![1.0; n as usize];
        Arc::new(HaarGrid {
            kind: GridKind::Cyclic { n },
            points,
            weights,
        })
    }

    /// Uniform grid `x_j = -L + j * dx`, `dx = 2L/len`, Lebesgue weights.
    pub fn real_line(half_extent: f64, len: usize) -> Arc<Self> {
        assert!(half_extent > 0.0 && len > 0);
        let dx = 2.0 * half_extent / len as f64;
        let points = (0..len)
            .map(|j| GroupPoint::Real(-half_extent + j as f64 * dx))
            .collect();
        let weights = vec![dx; len];
        Arc::new(HaarGrid {
            kind: GridKind::RealLine { half_extent, len },
            points,
            weights,
        })
    }

    /// Affine product grid with left-Haar weights `db * dln(a) / a`.
    ///
    /// Point order is a-major: index `p = i * nb + j` holds `(b_j, a_i)`.
    pub fn affine(b_half: f64, nb: usize, log2_a0: f64, dlog2_a: f64, na: usize) -> Arc<Self> {
        assert!(b_half > 0.0 && nb > 0 && na > 0 && dlog2_a > 0.0);
        let db = 2.0 * b_half / nb as f64;
        let dln_a = dlog2_a * std::f64::consts::LN_2;
        let mut points = Vec::with_capacity(na * nb);
        let mut weights = Vec::with_capacity(na * nb);
        for i in 0..na {
            let a = (log2_a0 + i as f64 * dlog2_a).exp2();
            let w = db * dln_a / a;
            for j in 0..nb {
                let b = -b_half + j as f64 * db;
                points.push(GroupPoint::Affine { b, a });
                weights.push(w);
            }
        }
        Arc::new(HaarGrid {
            kind: GridKind::Affine {
                b_half,
                nb,
                log2_a0,
                dlog2_a,
                na,
            },
            points,
            weights,
        })
    }

    pub fn kind(&self) -> &GridKind {
        &self.kind
    }

    pub fn model(&self) -> GroupModel {
        match self.kind {
            GridKind::Cyclic { n } => GroupModel::Cyclic(n),
            GridKind::RealLine { .. } => GroupModel::RealLine,
            GridKind::Affine { .. } => GroupModel::Affine,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[GroupPoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn point(&self, idx: usize) -> GroupPoint {
        self.points[idx]
    }

    pub fn weight(&self, idx: usize) -> f64 {
        self.weights[idx]
    }

    /// Grid step(s) in chart coordinates: `dx`, `1` for cyclic, `(db, dlog2 a)`.
    pub fn steps(&self) -> (f64, f64) {
        match self.kind {
            GridKind::Cyclic { .. } => (1.0, 0.0),
            GridKind::RealLine { half_extent, len } => (2.0 * half_extent / len as f64, 0.0),
            GridKind::Affine {
                b_half,
                nb,
                dlog2_a,
                ..
            } => (2.0 * b_half / nb as f64, dlog2_a),
        }
    }

    fn compatible(&self, other: &HaarGrid) -> bool {
        self.kind == other.kind
    }
}

/// Complex-valued samples over a [`HaarGrid`]; the discretized L^2(G) element.
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: Arc<HaarGrid>,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Arc<HaarGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(CoreError::Contract(format!(
                "value vector has {} entries for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: Arc<HaarGrid>) -> Self {
        let n = grid.len();
        GridFunction {
            grid,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_fn(grid: Arc<HaarGrid>, mut f: impl FnMut(&GroupPoint) -> Complex64) -> Self {
        let values = grid.points().iter().map(&mut f).collect();
        GridFunction { grid, values }
    }

    /// Dirac mass at grid index `idx` (value 1 in the sample, so the cyclic
    /// delta has unit norm under counting weights).
    pub fn delta(grid: Arc<HaarGrid>, idx: usize) -> Self {
        let mut f = GridFunction::zeros(grid);
        f.values[idx] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn grid(&self) -> &Arc<HaarGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn same_grid(&self, other: &GridFunction) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid.compatible(&other.grid) {
            Ok(())
        } else {
            Err(CoreError::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid.kind(),
                other.grid.kind()
            )))
        }
    }

    /// Haar quadrature of the samples: `sum w * f`.
    pub fn integral(&self) -> Complex64 {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(v, w)| v * w)
            .sum()
    }

    /// `||f||^2 = sum w |f|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(v, w)| w * v.norm_sqr())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `<f, g> = sum w f conj(g)`, linear in the first argument.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        self.same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .zip(self.grid.weights())
            .map(|((f, g), w)| w * f * g.conj())
            .sum())
    }

    pub fn scaled(&self, c: Complex64) -> GridFunction {
        GridFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_grid(other)?;
        Ok(GridFunction {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| x + y)
                .collect(),
        })
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.same_grid(other)?;
        Ok(GridFunction {
            grid: Arc::clone(&self.grid),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| x - y)
                .collect(),
        })
    }
}

/// Haar quadrature of a grid function.
pub fn haar_integral(f: &GridFunction) -> Complex64 {
    f.integral()
}

/// A translated grid function plus the norm fraction lost to the chart
/// boundary. Only the affine model leaks; periodized models report 0.
#[derive(Debug, Clone)]
pub struct Translated {
    pub f: GridFunction,
    pub leakage: f64,
}

impl Translated {
    /// True when more mass left the grid than the given threshold allows.
    pub fn is_leaky(&self, threshold: f64) -> bool {
        self.leakage > threshold
    }
}

/// Left regular action `(lambda(g) f)(x) = f(g^{-1} x)`.
///
/// Cyclic translations are exact rotations. Real-line translations act on
/// the periodized window (fractional shifts use circular linear
/// interpolation). Affine translations resample with bilinear interpolation
/// in `(b, log a)` and zero-fill outside the chart; left translation is
/// unitary for left Haar weights up to those resampling effects.
pub fn left_translate(g: &GroupPoint, f: &GridFunction) -> Result<Translated> {
    let grid = Arc::clone(f.grid());
    let model = grid.model();
    model.check(g)?;
    let g_inv = model.inverse(g)?;
    let values = match (grid.kind(), g) {
        (GridKind::Cyclic { n }, GroupPoint::Cyclic(s)) => {
            let n = *n as usize;
            let s = *s as usize;
            // f(g^{-1} x) = f(x - s mod n)
            (0..n)
                .map(|x| f.values()[(x + n - s) % n])
                .collect::<Vec<_>>()
        }
        (GridKind::RealLine { half_extent, len }, GroupPoint::Real(s)) => {
            let n = *len;
            let dx = 2.0 * half_extent / n as f64;
            let shift = s / dx;
            let base = shift.round();
            if (shift - base).abs() < 1e-9 {
                let k = (base.rem_euclid(n as f64)) as usize % n;
                (0..n)
                    .map(|x| f.values()[(x + n - k) % n])
                    .collect::<Vec<_>>()
            } else {
                let k0 = shift.floor();
                let t = shift - k0;
                let k0 = (k0.rem_euclid(n as f64)) as usize % n;
                (0..n)
                    .map(|x| {
                        let lo = f.values()[(x + 2 * n - k0) % n];
                        let hi = f.values()[(x + 2 * n - k0 - 1) % n];
                        lo * (1.0 - t) + hi * t
                    })
                    .collect::<Vec<_>>()
            }
        }
        (GridKind::Affine { .. }, GroupPoint::Affine { .. }) => {
            let mut values = Vec::with_capacity(grid.len());
            for target in grid.points() {
                let src = model.multiply(&g_inv, target)?;
                values.push(sample_affine(f, &src));
            }
            values
        }
        _ => unreachable!("model.check() above"),
    };
    let out = GridFunction::new(grid, values)?;
    let before = f.norm_sq();
    let leakage = if before > 0.0 {
        ((before - out.norm_sq()) / before).max(0.0)
    } else {
        0.0
    };
    Ok(Translated { f: out, leakage })
}

/// Right action `(rho(g) f)(x) = f(x g)`; used to probe the modular
/// function by quadrature.
pub fn right_translate(g: &GroupPoint, f: &GridFunction) -> Result<Translated> {
    let grid = Arc::clone(f.grid());
    let model = grid.model();
    model.check(g)?;
    let values = match (grid.kind(), g) {
        (GridKind::Cyclic { n }, GroupPoint::Cyclic(s)) => {
            let n = *n as usize;
            let s = *s as usize;
            (0..n).map(|x| f.values()[(x + s) % n]).collect::<Vec<_>>()
        }
        (GridKind::RealLine { .. }, GroupPoint::Real(_)) => {
            return left_translate(g, f).map(|t| Translated {
                f: t.f,
                leakage: t.leakage,
            });
        }
        (GridKind::Affine { .. }, GroupPoint::Affine { .. }) => {
            let mut values = Vec::with_capacity(grid.len());
            for target in grid.points() {
                let src = model.multiply(target, g)?;
                values.push(sample_affine(f, &src));
            }
            values
        }
        _ => unreachable!(),
    };
    let out = GridFunction::new(grid, values)?;
    let before = f.norm_sq();
    let leakage = if before > 0.0 {
        ((before - out.norm_sq()) / before).max(0.0)
    } else {
        0.0
    };
    Ok(Translated { f: out, leakage })
}

/// Bilinear sample of an affine grid function at an off-grid point,
/// zero outside the chart window.
fn sample_affine(f: &GridFunction, at: &GroupPoint) -> Complex64 {
    let GridKind::Affine {
        b_half,
        nb,
        log2_a0,
        dlog2_a,
        na,
    } = f.grid().kind()
    else {
        unreachable!()
    };
    let GroupPoint::Affine { b, a } = at else {
        unreachable!()
    };
    let db = 2.0 * b_half / *nb as f64;
    let u = (b + b_half) / db;
    let v = (a.log2() - log2_a0) / dlog2_a;
    let zero = Complex64::new(0.0, 0.0);
    if !(u.is_finite() && v.is_finite()) {
        return zero;
    }
    let (iu, tu) = (u.floor(), u - u.floor());
    let (iv, tv) = (v.floor(), v - v.floor());
    let mut acc = zero;
    for (du, wu) in [(0i64, 1.0 - tu), (1, tu)] {
        for (dv, wv) in [(0i64, 1.0 - tv), (1, tv)] {
            let j = iu as i64 + du;
            let i = iv as i64 + dv;
            if j >= 0 && (j as usize) < *nb && i >= 0 && (i as usize) < *na && wu * wv != 0.0 {
                acc += f.values()[i as usize * nb + j as usize] * (wu * wv);
            }
        }
    }
    acc
}

/// Group convolution `(f * g)(x) = integral f(y) g(y^{-1} x) d mu(y)`
/// by direct quadrature over the grid.
pub fn convolve(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.same_grid(g)?;
    let grid = Arc::clone(f.grid());
    let model = grid.model();
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    match grid.kind() {
        GridKind::Cyclic { n } => {
            let n = *n as usize;
            for (x, out) in values.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for y in 0..n {
                    acc += f.values()[y] * g.values()[(x + n - y) % n];
                }
                *out = acc;
            }
        }
        GridKind::RealLine { len, half_extent } => {
            let n = *len;
            if n % 2 != 0 {
                return Err(CoreError::Contract(
                    "real-line convolution needs an even grid".into(),
                ));
            }
            let dx = 2.0 * half_extent / n as f64;
            // Point difference x_m - x_j sits at sample index m - j + n/2:
            // the window starts at -L, so the torus identity is index n/2.
            for (x, out) in values.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for y in 0..n {
                    acc += f.values()[y] * g.values()[(x + n + n / 2 - y) % n];
                }
                *out = acc * dx;
            }
        }
        GridKind::Affine { .. } => {
            // O(|grid|^2) with interpolation; intended for modest grids.
            for (xi, x) in grid.points().iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (yi, y) in grid.points().iter().enumerate() {
                    let y_inv = model.inverse(y)?;
                    let arg = model.multiply(&y_inv, x)?;
                    acc += f.values()[yi] * sample_affine(g, &arg) * grid.weight(yi);
                }
                values[xi] = acc;
            }
        }
    }
    GridFunction::new(grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Smooth bump supported well inside the affine window.
    fn affine_bump(grid: &Arc<HaarGrid>, b0: f64, log2_a_c: f64, sb: f64, sa: f64) -> GridFunction {
        GridFunction::from_fn(Arc::clone(grid), |p| {
            let GroupPoint::Affine { b, a } = p else {
                unreachable!()
            };
            let la = a.log2();
            c((-((b - b0) / sb).powi(2) - ((la - log2_a_c) / sa).powi(2)).exp())
        })
    }

    #[test]
    fn cyclic_multiplication_wraps() {
        let m = GroupModel::Cyclic(5);
        let p = m
            .multiply(&GroupPoint::Cyclic(3), &GroupPoint::Cyclic(4))
            .unwrap();
        assert_eq!(p, GroupPoint::Cyclic(2));
    }

    #[test]
    fn affine_composition_matches_map_composition() {
        let m = GroupModel::Affine;
        let g = GroupPoint::Affine { b: 1.0, a: 2.0 };
        let h = GroupPoint::Affine { b: 3.0, a: 1.0 };
        let gh = m.multiply(&g, &h).unwrap();
        assert_eq!(gh, GroupPoint::Affine { b: 7.0, a: 2.0 });
    }

    #[test]
    fn identity_is_neutral() {
        for m in [GroupModel::RealLine, GroupModel::Cyclic(7), GroupModel::Affine] {
            let e = m.identity();
            let g = match m {
                GroupModel::RealLine => GroupPoint::Real(1.25),
                GroupModel::Cyclic(_) => GroupPoint::Cyclic(3),
                GroupModel::Affine => GroupPoint::Affine { b: -0.5, a: 3.0 },
            };
            assert_eq!(m.multiply(&g, &e).unwrap(), g);
            assert_eq!(m.multiply(&e, &g).unwrap(), g);
        }
    }

    #[test]
    fn affine_rejects_nonpositive_scale() {
        assert!(GroupPoint::affine(0.0, 0.0).is_err());
        assert!(GroupModel::Affine
            .multiply(
                &GroupPoint::Affine { b: 0.0, a: -1.0 },
                &GroupPoint::Affine { b: 0.0, a: 1.0 }
            )
            .is_err());
    }

    #[test]
    fn associativity_on_sampled_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = GroupModel::Affine;
        for _ in 0..200 {
            let g = GroupPoint::Affine {
                b: rng.gen_range(-2.0..2.0),
                a: rng.gen_range(0.25..4.0),
            };
            let h = GroupPoint::Affine {
                b: rng.gen_range(-2.0..2.0),
                a: rng.gen_range(0.25..4.0),
            };
            let k = GroupPoint::Affine {
                b: rng.gen_range(-2.0..2.0),
                a: rng.gen_range(0.25..4.0),
            };
            let lhs = m.multiply(&m.multiply(&g, &h).unwrap(), &k).unwrap();
            let rhs = m.multiply(&g, &m.multiply(&h, &k).unwrap()).unwrap();
            let (GroupPoint::Affine { b: b1, a: a1 }, GroupPoint::Affine { b: b2, a: a2 }) =
                (lhs, rhs)
            else {
                unreachable!()
            };
            assert!((b1 - b2).abs() < 1e-12 && (a1 - a2).abs() < 1e-12);
        }
        let mc = GroupModel::Cyclic(12);
        for _ in 0..200 {
            let g = GroupPoint::Cyclic(rng.gen_range(0..12));
            let h = GroupPoint::Cyclic(rng.gen_range(0..12));
            let k = GroupPoint::Cyclic(rng.gen_range(0..12));
            let lhs = mc.multiply(&mc.multiply(&g, &h).unwrap(), &k).unwrap();
            let rhs = mc.multiply(&g, &mc.multiply(&h, &k).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn modular_function_is_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = GroupModel::Affine;
        for _ in 0..1000 {
            let g = GroupPoint::Affine {
                b: rng.gen_range(-2.0..2.0),
                a: rng.gen_range(0.1..10.0),
            };
            let h = GroupPoint::Affine {
                b: rng.gen_range(-2.0..2.0),
                a: rng.gen_range(0.1..10.0),
            };
            let gh = m.multiply(&g, &h).unwrap();
            let lhs = m.modular(&gh).unwrap();
            let rhs = m.modular(&g).unwrap() * m.modular(&h).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn discrete_and_abelian_models_are_unimodular() {
        assert_eq!(
            GroupModel::Cyclic(9).modular(&GroupPoint::Cyclic(4)).unwrap(),
            1.0
        );
        assert_eq!(
            GroupModel::RealLine.modular(&GroupPoint::Real(2.5)).unwrap(),
            1.0
        );
        assert!(!GroupModel::Affine.is_unimodular());
    }

    #[test]
    fn haar_integral_counting_measure() {
        let grid = HaarGrid::cyclic(17);
        let f = GridFunction::from_fn(grid, |_| c(1.0));
        assert!((f.integral().re - 17.0).abs() < 1e-12);
    }

    #[test]
    fn haar_integral_gaussian() {
        let grid = HaarGrid::real_line(20.0, 4096);
        let f = GridFunction::from_fn(grid, |p| {
            let GroupPoint::Real(x) = p else { unreachable!() };
            c((-x * x).exp())
        });
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((f.integral().re - sqrt_pi).abs() / sqrt_pi < 1e-6);
    }

    /// The right-translation identity pins the Delta convention: with left
    /// Haar `da db / a^2` the affine modular function must be `1/a`, so
    /// `Delta((0, 2)) = 1/2`, not 2.
    #[test]
    fn modular_convention_fixed_by_right_translation_quadrature() {
        let grid = HaarGrid::affine(40.0, 128, -4.0, 8.0 / 128.0, 128);
        let f = affine_bump(&grid, 0.0, 0.0, 4.0, 0.6);
        let g = GroupPoint::Affine { b: 0.3, a: 2.0 };
        let shifted = right_translate(&g, &f).unwrap();
        assert!(shifted.leakage < 1e-6, "leakage {}", shifted.leakage);
        let lhs = shifted.f.integral().re;
        let base = f.integral().re;
        let delta = GroupModel::Affine.modular(&g).unwrap();
        assert!((delta - 0.5).abs() < 1e-15);
        let rel = (lhs - base / delta).abs() / base.abs();
        assert!(rel < 1e-3, "right-translation defect {rel}");
        // The opposite convention (Delta = a) fails by a factor ~4.
        let wrong = (lhs - base * delta).abs() / base.abs();
        assert!(wrong > 0.5);
    }

    #[test]
    fn left_invariance_of_affine_quadrature() {
        let grid = HaarGrid::affine(40.0, 128, -4.0, 8.0 / 128.0, 128);
        let f = affine_bump(&grid, 1.0, 0.25, 4.0, 0.6);
        let g = GroupPoint::Affine { b: -1.5, a: 1.4 };
        let shifted = left_translate(&g, &f).unwrap();
        let rel = (shifted.f.integral().re - f.integral().re).abs() / f.integral().re.abs();
        assert!(rel < 1e-3, "left-invariance defect {rel}");

        // Refinement oracle: halving the steps must shrink the defect.
        let fine = HaarGrid::affine(40.0, 256, -4.0, 8.0 / 256.0, 256);
        let ff = affine_bump(&fine, 1.0, 0.25, 4.0, 0.6);
        let shifted_f = left_translate(&g, &ff).unwrap();
        let rel_f = (shifted_f.f.integral().re - ff.integral().re).abs() / ff.integral().re.abs();
        assert!(rel_f < rel, "no improvement under refinement: {rel_f} vs {rel}");
    }

    #[test]
    fn cyclic_translate_moves_delta() {
        let grid = HaarGrid::cyclic(8);
        let delta0 = GridFunction::delta(Arc::clone(&grid), 0);
        let t = left_translate(&GroupPoint::Cyclic(1), &delta0).unwrap();
        assert_eq!(t.f.values()[1], c(1.0));
        assert_eq!(t.leakage, 0.0);
    }

    #[test]
    fn translate_by_identity_is_identity() {
        let grid = HaarGrid::real_line(10.0, 64);
        let f = GridFunction::from_fn(grid, |p| {
            let GroupPoint::Real(x) = p else { unreachable!() };
            c((-x * x / 4.0).exp())
        });
        let t = left_translate(&GroupPoint::Real(0.0), &f).unwrap();
        for (a, b) in t.f.values().iter().zip(f.values()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn affine_left_translation_is_isometric_on_interior_bumps() {
        let grid = HaarGrid::affine(40.0, 320, -4.0, 8.0 / 320.0, 320);
        let f = affine_bump(&grid, 0.0, 0.0, 5.0, 0.7);
        for g in [
            GroupPoint::Affine { b: 2.0, a: 1.0 },
            GroupPoint::Affine { b: -1.0, a: 1.6 },
            GroupPoint::Affine { b: 0.5, a: 0.7 },
        ] {
            let t = left_translate(&g, &f).unwrap();
            let rel = (t.f.norm_sq() - f.norm_sq()).abs() / f.norm_sq();
            assert!(rel < 1e-3, "isometry defect {rel} at {g:?}");
        }
    }

    #[test]
    fn leakage_is_reported_not_truncated_silently() {
        let grid = HaarGrid::affine(8.0, 32, -2.0, 4.0 / 32.0, 32);
        let f = affine_bump(&grid, 0.0, 0.0, 2.0, 0.5);
        // Huge shift pushes most of the bump outside the b-window.
        let t = left_translate(&GroupPoint::Affine { b: 14.0, a: 1.0 }, &f).unwrap();
        assert!(t.is_leaky(GRID_TOL_CONTINUUM));
        assert!(t.leakage > 0.5);
    }

    #[test]
    fn convolution_with_cyclic_delta_is_identity() {
        let grid = HaarGrid::cyclic(16);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = GridFunction::from_fn(Arc::clone(&grid), |_| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let delta0 = GridFunction::delta(grid, 0);
        let conv = convolve(&f, &delta0).unwrap();
        for (a, b) in conv.values().iter().zip(f.values()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let f = GridFunction::zeros(HaarGrid::cyclic(8));
        let g = GridFunction::zeros(HaarGrid::cyclic(9));
        assert!(f.inner(&g).is_err());
    }
}
