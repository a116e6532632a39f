//! Direct quadrature wavelet analysis and synthesis.
//!
//! `analyze` computes `V_eta phi (x) = <phi, pi(x) eta>` point by point on
//! the group grid, with no transform-side shortcuts; it is the ground
//! truth against which Plancherel-side predictions are tested. `synthesize`
//! is its exact quadrature adjoint (same resampling weights, transposed),
//! so the adjoint identity holds to rounding.
//!
//! Two representation models are provided: the left regular representation
//! of any group model on its own grid, and the quasi-regular action of the
//! affine group on the line, `pi(b, a) f(t) = a^{-1/2} f((t - b)/a)`.
//!
//! The Calderon functional `integral |eta_hat(omega)|^2 / |omega| domega`
//! is evaluated on a symmetric logarithmic cell decomposition of the
//! frequency axis with samples at the logarithmic mean of each cell; that
//! rule is exact for profiles that are constant or linear in `omega` on
//! each cell, which covers both calibration profiles used in practice.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::group::{left_translate, GridFunction, GridKind, GroupPoint, HaarGrid};
use crate::opfield::{FieldEntry, HsMatrix, OperatorField, SigmaLabel};
use crate::plancherel::PlancherelModel;

/// Which unitary representation the engine quadratures.
#[derive(Debug, Clone)]
pub enum RepresentationModel {
    /// Left translation on L^2 of the group's own grid.
    LeftRegular(Arc<HaarGrid>),
    /// The affine group acting on L^2 of a periodized line grid by
    /// translations and dilations.
    AffineQuasiRegular {
        line: Arc<HaarGrid>,
        group: Arc<HaarGrid>,
    },
}

impl RepresentationModel {
    /// The grid carrying the representation space.
    pub fn carrier(&self) -> &Arc<HaarGrid> {
        match self {
            RepresentationModel::LeftRegular(g) => g,
            RepresentationModel::AffineQuasiRegular { line, .. } => line,
        }
    }

    /// The group grid on which wavelet coefficients live.
    pub fn coefficient_grid(&self) -> &Arc<HaarGrid> {
        match self {
            RepresentationModel::LeftRegular(g) => g,
            RepresentationModel::AffineQuasiRegular { group, .. } => group,
        }
    }

    fn check_carrier(&self, f: &GridFunction) -> Result<()> {
        if f.grid().kind() == self.carrier().kind() {
            Ok(())
        } else {
            Err(CoreError::GridMismatch(format!(
                "function lives on {:?}, representation carrier is {:?}",
                f.grid().kind(),
                self.carrier().kind()
            )))
        }
    }

    /// `pi(x) f` for a single group element.
    pub fn apply(&self, x: &GroupPoint, f: &GridFunction) -> Result<GridFunction> {
        self.check_carrier(f)?;
        match self {
            RepresentationModel::LeftRegular(_) => Ok(left_translate(x, f)?.f),
            RepresentationModel::AffineQuasiRegular { line, .. } => {
                let GroupPoint::Affine { b, a } = *x else {
                    return Err(CoreError::Domain(format!(
                        "quasi-regular representation needs affine points, got {x:?}"
                    )));
                };
                let scale = 1.0 / a.sqrt();
                let values = line
                    .points()
                    .iter()
                    .map(|p| {
                        let GroupPoint::Real(t) = p else { unreachable!() };
                        sample_line(f, (t - b) / a) * scale
                    })
                    .collect();
                GridFunction::new(Arc::clone(line), values)
            }
        }
    }
}

/// Linear interpolation of a line grid function: partial tent weights at
/// the window edges, zero outside (the same convention as the affine
/// resampler, so adjoints match exactly).
fn sample_line(f: &GridFunction, t: f64) -> Complex64 {
    let GridKind::RealLine { half_extent, len } = *f.grid().kind() else {
        unreachable!()
    };
    let dx = 2.0 * half_extent / len as f64;
    let u = (t + half_extent) / dx;
    let mut acc = Complex64::new(0.0, 0.0);
    if !u.is_finite() {
        return acc;
    }
    let i = u.floor();
    let s = u - i;
    let i = i as i64;
    for (j, w) in [(i, 1.0 - s), (i + 1, s)] {
        if w != 0.0 && j >= 0 && (j as usize) < len {
            acc += f.values()[j as usize] * w;
        }
    }
    acc
}

/// `V_eta phi (x) = <phi, pi(x) eta>` on every group grid point.
pub fn analyze(
    eta: &GridFunction,
    phi: &GridFunction,
    rep: &RepresentationModel,
) -> Result<GridFunction> {
    rep.check_carrier(eta)?;
    rep.check_carrier(phi)?;
    match rep {
        RepresentationModel::LeftRegular(grid) => match grid.kind() {
            GridKind::Cyclic { n } => {
                let n = *n as usize;
                let mut values = vec![Complex64::new(0.0, 0.0); n];
                for (x, out) in values.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for y in 0..n {
                        // (lambda(x) eta)(y) = eta(y - x mod n)
                        acc += phi.values()[y] * eta.values()[(y + n - x) % n].conj();
                    }
                    *out = acc;
                }
                GridFunction::new(Arc::clone(grid), values)
            }
            GridKind::RealLine { half_extent, len } => {
                let n = *len;
                if n % 2 != 0 {
                    return Err(CoreError::Contract(
                        "real-line analysis needs an even grid".into(),
                    ));
                }
                let dx = 2.0 * half_extent / n as f64;
                let mut values = vec![Complex64::new(0.0, 0.0); n];
                // (lambda(x_m) eta) sampled at y is eta at the torus point
                // x_y - x_m, which sits at index y - m + n/2.
                for (x, out) in values.iter_mut().enumerate() {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for y in 0..n {
                        acc += phi.values()[y] * eta.values()[(y + n + n / 2 - x) % n].conj();
                    }
                    *out = acc * dx;
                }
                GridFunction::new(Arc::clone(grid), values)
            }
            GridKind::Affine { .. } => analyze_affine_regular(eta, phi, grid),
        },
        RepresentationModel::AffineQuasiRegular { line, group } => {
            analyze_quasi_regular(eta, phi, line, group)
        }
    }
}

/// Fused affine-regular analysis: for each x, inner product of `phi`
/// against the bilinear resample of `eta` at `x^{-1} y`.
fn analyze_affine_regular(
    eta: &GridFunction,
    phi: &GridFunction,
    grid: &Arc<HaarGrid>,
) -> Result<GridFunction> {
    let GridKind::Affine {
        b_half,
        nb,
        log2_a0,
        dlog2_a,
        na,
    } = *grid.kind()
    else {
        unreachable!()
    };
    let db = 2.0 * b_half / nb as f64;
    let mut values = vec![Complex64::new(0.0, 0.0); na * nb];
    let weights = grid.weights();
    let ev = eta.values();
    let pv = phi.values();
    for ix in 0..na {
        let log2_ax = log2_a0 + ix as f64 * dlog2_a;
        let ax = log2_ax.exp2();
        let inv_ax = 1.0 / ax;
        for jx in 0..nb {
            let bx = -b_half + jx as f64 * db;
            let mut acc = Complex64::new(0.0, 0.0);
            for iy in 0..na {
                // a-coordinate of x^{-1} y is a_y / a_x; its grid position
                // is (iy - ix) - log2_a0 / dlog2_a.
                let v = (iy as f64 - ix as f64) - log2_a0 / dlog2_a;
                if !v.is_finite() {
                    continue;
                }
                let iv = v.floor();
                let tv = v - iv;
                let iv = iv as i64;
                let rows = [(iv, 1.0 - tv), (iv + 1, tv)];
                if rows
                    .iter()
                    .all(|(r, w)| *w == 0.0 || *r < 0 || *r as usize >= na)
                {
                    continue;
                }
                // b-coordinate: (b_y - b_x)/a_x; index u moves by 1/ax per j.
                let mut u = (-b_half - bx) * inv_ax / db + b_half / db;
                let du = inv_ax;
                let w_row = weights[iy * nb];
                for jy in 0..nb {
                    let phi_v = pv[iy * nb + jy];
                    if phi_v != Complex64::new(0.0, 0.0) && u.is_finite() {
                        let ju = u.floor();
                        let tu = u - ju;
                        let ju = ju as i64;
                        let mut s = Complex64::new(0.0, 0.0);
                        for (r, wv) in rows {
                            if wv == 0.0 || r < 0 || r as usize >= na {
                                continue;
                            }
                            let base = r as usize * nb;
                            for (jj, wu) in [(ju, 1.0 - tu), (ju + 1, tu)] {
                                if wu != 0.0 && jj >= 0 && (jj as usize) < nb {
                                    s += ev[base + jj as usize] * (wu * wv);
                                }
                            }
                        }
                        acc += phi_v * s.conj() * w_row;
                    }
                    u += du;
                }
            }
            values[ix * nb + jx] = acc;
        }
    }
    GridFunction::new(Arc::clone(grid), values)
}

fn analyze_quasi_regular(
    eta: &GridFunction,
    phi: &GridFunction,
    line: &Arc<HaarGrid>,
    group: &Arc<HaarGrid>,
) -> Result<GridFunction> {
    let GridKind::RealLine { half_extent, len } = *line.kind() else {
        unreachable!()
    };
    let GridKind::Affine {
        b_half,
        nb,
        log2_a0,
        dlog2_a,
        na,
    } = *group.kind()
    else {
        unreachable!()
    };
    let dx = 2.0 * half_extent / len as f64;
    let db = 2.0 * b_half / nb as f64;
    let ev = eta.values();
    let pv = phi.values();
    let mut values = vec![Complex64::new(0.0, 0.0); na * nb];
    for i in 0..na {
        let a = (log2_a0 + i as f64 * dlog2_a).exp2();
        let scale = 1.0 / a.sqrt();
        let inv_a = 1.0 / a;
        for j in 0..nb {
            let b = -b_half + j as f64 * db;
            // u(t) = ((t - b)/a + L)/dx moves by dx/(a dx) = 1/a per step.
            let mut u = ((-half_extent - b) * inv_a + half_extent) / dx;
            let du = inv_a;
            let mut acc = Complex64::new(0.0, 0.0);
            for p in pv.iter().take(len) {
                if *p != Complex64::new(0.0, 0.0) && u.is_finite() {
                    let iu = u.floor();
                    let tu = u - iu;
                    let iu = iu as i64;
                    let mut s = Complex64::new(0.0, 0.0);
                    for (jj, wu) in [(iu, 1.0 - tu), (iu + 1, tu)] {
                        if wu != 0.0 && jj >= 0 && (jj as usize) < len {
                            s += ev[jj as usize] * wu;
                        }
                    }
                    acc += p * s.conj() * scale;
                }
                u += du;
            }
            values[i * nb + j] = acc * dx;
        }
    }
    GridFunction::new(Arc::clone(group), values)
}

/// Adjoint of [`analyze`] in the second argument:
/// `synthesize(F, eta)(y) = sum_x w_x F(x) (pi(x) eta)(y)`, accumulated
/// with the same resampling weights so that
/// `<analyze(eta, phi), F>_G = <phi, synthesize(F, eta)>` to rounding.
pub fn synthesize(
    coeffs: &GridFunction,
    eta: &GridFunction,
    rep: &RepresentationModel,
) -> Result<GridFunction> {
    rep.check_carrier(eta)?;
    if coeffs.grid().kind() != rep.coefficient_grid().kind() {
        return Err(CoreError::GridMismatch(
            "coefficients do not live on the representation's group grid".into(),
        ));
    }
    let mut out = GridFunction::zeros(Arc::clone(rep.carrier()));
    for (xi, x) in coeffs.grid().points().iter().enumerate() {
        let c = coeffs.values()[xi] * coeffs.grid().weight(xi);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        let shifted = rep.apply(x, eta)?;
        for (o, v) in out.values_mut().iter_mut().zip(shifted.values()) {
            *o += c * v;
        }
    }
    Ok(out)
}

/// Result of an isometry battery: worst relative defect and how many
/// zero-norm members were skipped.
#[derive(Debug, Clone, Copy)]
pub struct IsometryDefect {
    pub defect: f64,
    pub skipped: usize,
}

/// `max over battery of | ||V_eta phi||^2 - ||phi||^2 | / ||phi||^2`.
pub fn isometry_defect(
    eta: &GridFunction,
    rep: &RepresentationModel,
    battery: &[GridFunction],
) -> Result<IsometryDefect> {
    if battery.is_empty() {
        return Err(CoreError::Contract("empty isometry battery".into()));
    }
    let mut worst = 0.0f64;
    let mut skipped = 0;
    for phi in battery {
        let n2 = phi.norm_sq();
        if n2 == 0.0 {
            skipped += 1;
            continue;
        }
        let coeffs = analyze(eta, phi, rep)?;
        let defect = (coeffs.norm_sq() - n2).abs() / n2;
        worst = worst.max(defect);
    }
    if skipped == battery.len() {
        return Err(CoreError::Contract(
            "every battery member had zero norm".into(),
        ));
    }
    Ok(IsometryDefect {
        defect: worst,
        skipped,
    })
}

// --- Calderon functional ------------------------------------------------

/// Symmetric logarithmic cell decomposition of the frequency axis with
/// log-mean sample points; the quadrature rule for `|eta_hat|^2 / |omega|`.
#[derive(Debug, Clone)]
pub struct SpectralCells {
    pub log2_omega0: f64,
    pub dlog2: f64,
    pub len: usize,
    /// Log-mean sample point of each positive cell, ascending.
    samples: Vec<f64>,
    /// `ln(upper/lower)` per cell (constant on a log grid).
    ln_ratio: f64,
}

impl SpectralCells {
    pub fn new(log2_omega0: f64, dlog2: f64, len: usize) -> Self {
        assert!(dlog2 > 0.0 && len > 0);
        let ln_ratio = dlog2 * std::f64::consts::LN_2;
        let samples = (0..len)
            .map(|k| {
                let lo = (log2_omega0 + k as f64 * dlog2).exp2();
                let hi = (log2_omega0 + (k + 1) as f64 * dlog2).exp2();
                (hi - lo) / (hi / lo).ln()
            })
            .collect();
        SpectralCells {
            log2_omega0,
            dlog2,
            len,
            samples,
            ln_ratio,
        }
    }

    /// Default cells: boundaries at `2^{-12} .. 2^{6}` in eighths of an
    /// octave, so dyadic windows like `[1, 2]` align with cell boundaries.
    pub fn reference() -> Self {
        SpectralCells::new(-12.0, 0.125, 144)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Lower boundary of cell `k`.
    pub fn lower(&self, k: usize) -> f64 {
        (self.log2_omega0 + k as f64 * self.dlog2).exp2()
    }
}

/// Verdict of the Calderon quadrature.
#[derive(Debug, Clone, Copy)]
pub struct CalderonResult {
    /// Quadrature value of `integral |eta_hat|^2 / |omega| d omega` over
    /// the covered cells.
    pub value: f64,
    /// Spectral mass found at the innermost (near-zero) cells; when it
    /// exceeds the domain threshold the vector is not in dom(C).
    pub origin_mass: f64,
    pub in_domain: bool,
}

/// Domain threshold: relative spectral magnitude at the innermost cells
/// above which the `1/omega` integral is declared divergent.
pub const CALDERON_ORIGIN_THRESHOLD: f64 = 1e-4;

/// Calderon functional from spectral samples `eta_hat(+omega_k)`,
/// `eta_hat(-omega_k)` given at the cells' log-mean points.
pub fn calderon_from_spectrum(
    cells: &SpectralCells,
    plus: &[Complex64],
    minus: &[Complex64],
) -> Result<CalderonResult> {
    if plus.len() != cells.len || minus.len() != cells.len {
        return Err(CoreError::Contract(format!(
            "spectral sample count {} vs {} cells",
            plus.len().min(minus.len()),
            cells.len
        )));
    }
    let mut value = 0.0;
    let mut peak: f64 = 0.0;
    for (p, m) in plus.iter().zip(minus) {
        peak = peak.max(p.norm_sqr()).max(m.norm_sqr());
        value += (p.norm_sqr() + m.norm_sqr()) * cells.ln_ratio;
    }
    let inner = plus[0].norm_sqr().max(minus[0].norm_sqr());
    let inner2 = if cells.len > 1 {
        plus[1].norm_sqr().max(minus[1].norm_sqr())
    } else {
        inner
    };
    let origin_mass = inner.max(inner2);
    let in_domain = peak == 0.0 || origin_mass <= CALDERON_ORIGIN_THRESHOLD * peak;
    Ok(CalderonResult {
        value,
        origin_mass,
        in_domain,
    })
}

/// Spectral samples of a line grid function at the cells' log-mean points,
/// by direct quadrature `eta_hat(omega) = sum dx eta(x) e^{-i omega x}`.
///
/// The quadrature transform of a sampled function is `2 pi / dx`-periodic,
/// so samples beyond the grid's Nyquist frequency would only repeat
/// low-frequency content as aliases; cells past Nyquist are returned as
/// zero.
pub fn line_spectrum(eta: &GridFunction, cells: &SpectralCells) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let GridKind::RealLine { half_extent, len } = *eta.grid().kind() else {
        return Err(CoreError::Contract(
            "spectral samples need a line grid function".into(),
        ));
    };
    let dx = 2.0 * half_extent / len as f64;
    let nyquist = std::f64::consts::PI / dx;
    let transform = |omega: f64| -> Complex64 {
        if omega.abs() > nyquist {
            return Complex64::new(0.0, 0.0);
        }
        eta.grid()
            .points()
            .iter()
            .zip(eta.values())
            .map(|(p, v)| {
                let GroupPoint::Real(x) = p else { unreachable!() };
                v * Complex64::from_polar(dx, -omega * x)
            })
            .sum()
    };
    let plus: Vec<Complex64> = cells.samples().iter().map(|w| transform(*w)).collect();
    let minus: Vec<Complex64> = cells.samples().iter().map(|w| transform(-*w)).collect();
    Ok((plus, minus))
}

/// Calderon constant of `eta` (given on the line grid) for the affine
/// quasi-regular representation.
pub fn calderon_constant(eta: &GridFunction, cells: &SpectralCells) -> Result<CalderonResult> {
    let (plus, minus) = line_spectrum(eta, cells)?;
    calderon_from_spectrum(cells, &plus, &minus)
}

// --- Plancherel-side helpers for the quasi-regular representation -------

/// Weighted half-line coordinates of the `+/-` spectrum of a line grid
/// function with respect to an affine Plancherel model's dual grid:
/// `u_q = sqrt(d omega_q) eta_hat(+/- omega_q)`.
pub fn half_line_coordinates(
    f: &GridFunction,
    pm: &PlancherelModel,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let dual = pm
        .affine_dual()
        .ok_or_else(|| CoreError::Contract("needs an affine Plancherel model".into()))?;
    let GridKind::RealLine { half_extent, len } = *f.grid().kind() else {
        return Err(CoreError::Contract(
            "half-line coordinates need a line grid function".into(),
        ));
    };
    let dx = 2.0 * half_extent / len as f64;
    let transform = |omega: f64| -> Complex64 {
        f.grid()
            .points()
            .iter()
            .zip(f.values())
            .map(|(p, v)| {
                let GroupPoint::Real(x) = p else { unreachable!() };
                v * Complex64::from_polar(dx, -omega * x)
            })
            .sum()
    };
    let plus = dual
        .omegas()
        .iter()
        .zip(dual.dweights())
        .map(|(w, dw)| transform(*w) * dw.sqrt())
        .collect();
    let minus = dual
        .omegas()
        .iter()
        .zip(dual.dweights())
        .map(|(w, dw)| transform(-*w) * dw.sqrt())
        .collect();
    Ok((plus, minus))
}

/// The rank-one operator field `phi (x) C eta` of the quasi-regular pair
/// `(eta, phi)`, expressed on an affine Plancherel model's dual grid. Its
/// pointwise inversion reproduces `analyze(eta, phi)`.
pub fn quasi_regular_rank_one_field(
    pm: &PlancherelModel,
    eta: &GridFunction,
    phi: &GridFunction,
) -> Result<OperatorField> {
    let dual = pm
        .affine_dual()
        .ok_or_else(|| CoreError::Contract("needs an affine Plancherel model".into()))?;
    let (eta_p, eta_m) = half_line_coordinates(eta, pm)?;
    let (phi_p, phi_m) = half_line_coordinates(phi, pm)?;
    let c = dual.duflo();
    let weight_of = |sign: f64, v: &[Complex64]| -> Vec<Complex64> {
        let _ = sign;
        v.iter().zip(c.diag()).map(|(z, d)| z * *d).collect()
    };
    let c_eta_p = weight_of(1.0, &eta_p);
    let c_eta_m = weight_of(-1.0, &eta_m);
    let entries = vec![
        FieldEntry {
            label: SigmaLabel::AffinePlus,
            matrix: HsMatrix::rank_one(&phi_p, &c_eta_p),
            duflo: pm.duflo(&SigmaLabel::AffinePlus)?,
            weight: pm.nu(&SigmaLabel::AffinePlus)?,
        },
        FieldEntry {
            label: SigmaLabel::AffineMinus,
            matrix: HsMatrix::rank_one(&phi_m, &c_eta_m),
            duflo: pm.duflo(&SigmaLabel::AffineMinus)?,
            weight: pm.nu(&SigmaLabel::AffineMinus)?,
        },
    ];
    OperatorField::new(entries)
}
