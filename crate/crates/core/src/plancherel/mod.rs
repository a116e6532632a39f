//! Per-model Plancherel transforms and pointwise inversion.
//!
//! The Plancherel transform sends `f` on the group to the operator field
//! `sigma -> [sigma(f) C_sigma^{-1}]` over the dual grid; with the model's
//! Plancherel weights it is unitary up to quadrature error. Its adjoint
//! realizes both the global inverse and the pointwise trace formula
//! `a(x) = sum_sigma nu_sigma tr([A(sigma) C_sigma^{-1}] sigma(x)^*)`.
//!
//! Dual grids and conventions per model:
//!
//! * `Cyclic(N)`: characters `chi_k(x) = e^{-2 pi i k x / N}`, weight
//!   `nu = 1/N` each, `C = 1`. The transform is the plain DFT.
//! * `RealLine`: characters `omega(x) = e^{-i omega x}` on the DFT
//!   frequencies of the periodized window, weight `nu = d omega / (2 pi)`
//!   per point, `C = 1`.
//! * `Affine`: two discrete-series atoms `pi_+`, `pi_-` realized on
//!   logarithmic half-line frequency grids with Duflo-Moore diagonal
//!   `C(omega) = |omega|^{-1/2}` and calibrated atom weights `nu_+`,
//!   `nu_-` (analytically `1/(2 pi)` under these conventions; the stored
//!   values are fixed once by a least-squares unitarity calibration and
//!   echoed in reports).

mod affine;

pub use affine::{AffineDualSpec, AffineGridSpec};

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::group::{GridFunction, GridKind, GroupModel, GroupPoint, HaarGrid};
use crate::opfield::{
    apply_duflo, trace_norm, DufloMooreOperator, DufloPower, DufloSide, FieldEntry, HsMatrix,
    OperatorField, SigmaLabel,
};

/// A group model together with its dual grid, Plancherel weights and
/// Duflo-Moore diagonals.
#[derive(Debug, Clone)]
pub struct PlancherelModel {
    grid: Arc<HaarGrid>,
    dual: DualModel,
}

#[derive(Debug, Clone)]
enum DualModel {
    Cyclic {
        n: u64,
        /// n-th roots of unity, `roots[r] = e^{-2 pi i r / n}`.
        roots: Vec<Complex64>,
    },
    RealLine {
        omegas: Vec<f64>,
        /// `1/(n dx) = d omega / (2 pi)`, the weight of each dual point.
        nu: f64,
        len: usize,
        roots: Vec<Complex64>,
    },
    Affine(affine::AffineDual),
}

impl PlancherelModel {
    /// DFT model on Z_n with counting measure.
    pub fn cyclic(n: u64) -> Self {
        let grid = HaarGrid::cyclic(n);
        let roots = roots_of_unity(n as usize);
        PlancherelModel {
            grid,
            dual: DualModel::Cyclic { n, roots },
        }
    }

    /// Periodized real line; dual grid = DFT frequencies `pi k / L`.
    pub fn real_line(half_extent: f64, len: usize) -> Self {
        let grid = HaarGrid::real_line(half_extent, len);
        let n = len as i64;
        let domega = std::f64::consts::PI / half_extent;
        let omegas: Vec<f64> = (-n / 2..(n + 1) / 2).map(|k| k as f64 * domega).collect();
        let dx = 2.0 * half_extent / len as f64;
        let nu = 1.0 / (len as f64 * dx);
        let roots = roots_of_unity(len);
        PlancherelModel {
            grid,
            dual: DualModel::RealLine {
                omegas,
                nu,
                len,
                roots,
            },
        }
    }

    /// Affine model with atom weights calibrated by the unitarity battery.
    pub fn affine(gspec: &AffineGridSpec, dspec: &AffineDualSpec) -> Result<Self> {
        let grid = gspec.grid();
        let dual = affine::AffineDual::calibrated(&grid, dspec)?;
        Ok(PlancherelModel {
            grid,
            dual: DualModel::Affine(dual),
        })
    }

    /// Affine model with explicitly pinned atom weights.
    pub fn affine_with_weights(
        gspec: &AffineGridSpec,
        dspec: &AffineDualSpec,
        nu_plus: f64,
        nu_minus: f64,
    ) -> Result<Self> {
        let grid = gspec.grid();
        let dual = affine::AffineDual::with_weights(&grid, dspec, nu_plus, nu_minus)?;
        Ok(PlancherelModel {
            grid,
            dual: DualModel::Affine(dual),
        })
    }

    pub fn group_grid(&self) -> &Arc<HaarGrid> {
        &self.grid
    }

    pub fn model(&self) -> GroupModel {
        self.grid.model()
    }

    pub fn is_unimodular(&self) -> bool {
        self.model().is_unimodular()
    }

    pub fn labels(&self) -> Vec<SigmaLabel> {
        match &self.dual {
            DualModel::Cyclic { n, .. } => (0..*n).map(SigmaLabel::Character).collect(),
            DualModel::RealLine { omegas, .. } => {
                omegas.iter().map(|w| SigmaLabel::Frequency(*w)).collect()
            }
            DualModel::Affine(_) => vec![SigmaLabel::AffinePlus, SigmaLabel::AffineMinus],
        }
    }

    /// Realization dimension of the sigma labelled `label`.
    pub fn dim(&self, label: &SigmaLabel) -> Result<usize> {
        self.check_label(label)?;
        Ok(match &self.dual {
            DualModel::Cyclic { .. } | DualModel::RealLine { .. } => 1,
            DualModel::Affine(d) => d.len(),
        })
    }

    /// Plancherel weight of one dual point.
    pub fn nu(&self, label: &SigmaLabel) -> Result<f64> {
        self.check_label(label)?;
        Ok(match (&self.dual, label) {
            (DualModel::Cyclic { n, .. }, _) => 1.0 / *n as f64,
            (DualModel::RealLine { nu, .. }, _) => *nu,
            (DualModel::Affine(d), SigmaLabel::AffinePlus) => d.nu_plus,
            (DualModel::Affine(d), SigmaLabel::AffineMinus) => d.nu_minus,
            _ => unreachable!(),
        })
    }

    /// Duflo-Moore diagonal at `label`; identically 1 for unimodular models.
    pub fn duflo(&self, label: &SigmaLabel) -> Result<DufloMooreOperator> {
        self.check_label(label)?;
        Ok(match &self.dual {
            DualModel::Cyclic { .. } | DualModel::RealLine { .. } => DufloMooreOperator::identity(1),
            DualModel::Affine(d) => d.duflo(),
        })
    }

    /// The affine dual's frequency half-grid (both atoms share its geometry).
    pub fn affine_dual(&self) -> Option<&affine::AffineDual> {
        match &self.dual {
            DualModel::Affine(d) => Some(d),
            _ => None,
        }
    }

    fn check_label(&self, label: &SigmaLabel) -> Result<()> {
        let ok = match (&self.dual, label) {
            (DualModel::Cyclic { n, .. }, SigmaLabel::Character(k)) => k < n,
            (DualModel::RealLine { omegas, .. }, SigmaLabel::Frequency(w)) => {
                omegas.iter().any(|o| o.total_cmp(w).is_eq())
            }
            (DualModel::Affine(_), SigmaLabel::AffinePlus | SigmaLabel::AffineMinus) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(CoreError::Contract(format!(
                "label {label} does not belong to this dual grid"
            )))
        }
    }

    fn check_grid(&self, f: &GridFunction) -> Result<()> {
        if f.grid().kind() == self.grid.kind() {
            Ok(())
        } else {
            Err(CoreError::GridMismatch(format!(
                "function on {:?}, model on {:?}",
                f.grid().kind(),
                self.grid.kind()
            )))
        }
    }

    /// Operator-valued Fourier transform `sigma(f)` by weak quadrature of
    /// `integral f(x) sigma(x) d mu(x)`. Satisfies
    /// `||sigma(f)||_inf <= ||f||_1` up to rounding.
    pub fn fourier_l1(&self, f: &GridFunction, label: &SigmaLabel) -> Result<HsMatrix> {
        self.check_grid(f)?;
        self.check_label(label)?;
        match (&self.dual, label) {
            (DualModel::Cyclic { n, roots }, SigmaLabel::Character(k)) => {
                let n = *n as usize;
                let k = *k as usize;
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, v) in f.values().iter().enumerate() {
                    acc += v * roots[(k * x) % n];
                }
                Ok(scalar(acc))
            }
            (DualModel::RealLine { omegas, len, roots, .. }, SigmaLabel::Frequency(w)) => {
                let idx = omegas
                    .iter()
                    .position(|o| o.total_cmp(w).is_eq())
                    .expect("label checked");
                let k = idx as i64 - (*len as i64) / 2;
                Ok(scalar(real_line_coeff(f, k, *len, roots)))
            }
            (DualModel::Affine(d), _) => Ok(d.sigma_of_f(f, sign_of(label))),
            _ => unreachable!(),
        }
    }

    /// Representation matrix `sigma(x)` in the realization used by this
    /// model (1x1 phases for the abelian/cyclic duals, a sparse
    /// shift-and-phase matrix in weighted half-line coordinates for the
    /// affine atoms).
    pub fn rep_matrix(&self, label: &SigmaLabel, x: &GroupPoint) -> Result<HsMatrix> {
        self.check_label(label)?;
        self.model().check(x)?;
        match (&self.dual, label, x) {
            (DualModel::Cyclic { n, roots }, SigmaLabel::Character(k), GroupPoint::Cyclic(x)) => {
                Ok(scalar(roots[((k * x) % n) as usize]))
            }
            (DualModel::RealLine { .. }, SigmaLabel::Frequency(w), GroupPoint::Real(x)) => {
                Ok(scalar(Complex64::from_polar(1.0, -w * x)))
            }
            (DualModel::Affine(d), _, GroupPoint::Affine { b, a }) => {
                Ok(d.rep_matrix(sign_of(label), *b, *a))
            }
            _ => unreachable!(),
        }
    }

    /// Plancherel transform: the field `[sigma(f) C_sigma^{-1}]`.
    pub fn forward(&self, f: &GridFunction) -> Result<OperatorField> {
        self.check_grid(f)?;
        let mut entries = Vec::new();
        for label in self.labels() {
            let sigma_f = self.fourier_l1(f, &label)?;
            let duflo = self.duflo(&label)?;
            let matrix = apply_duflo(&duflo, &sigma_f, DufloSide::RightOfMatrix, DufloPower::MinusOne)?;
            entries.push(FieldEntry {
                label,
                matrix,
                duflo,
                weight: self.nu(&label)?,
            });
        }
        OperatorField::new(entries)
    }

    /// Inverse Plancherel transform as the quadrature adjoint of
    /// [`forward`](Self::forward):
    /// `f(x) = sum_sigma nu_sigma <A(sigma) C^{-1}, sigma(x)>_HS`.
    pub fn inverse(&self, field: &OperatorField) -> Result<GridFunction> {
        self.check_field(field)?;
        match &self.dual {
            DualModel::Cyclic { n, roots } => {
                let n = *n as usize;
                let mut values = vec![Complex64::new(0.0, 0.0); n];
                for e in field.entries() {
                    let SigmaLabel::Character(k) = e.label else {
                        unreachable!("checked")
                    };
                    let a = e.matrix.get(0, 0) * e.weight;
                    for (x, v) in values.iter_mut().enumerate() {
                        // conj(chi_k(x)) = e^{+2 pi i k x / n}
                        *v += a * roots[(k as usize * x) % n].conj();
                    }
                }
                GridFunction::new(Arc::clone(&self.grid), values)
            }
            DualModel::RealLine { omegas, nu, len, roots } => {
                let n = *len;
                let mut values = vec![Complex64::new(0.0, 0.0); n];
                for e in field.entries() {
                    let SigmaLabel::Frequency(w) = e.label else {
                        unreachable!()
                    };
                    let idx = omegas
                        .iter()
                        .position(|o| o.total_cmp(&w).is_eq())
                        .expect("checked");
                    let k = idx as i64 - (n as i64) / 2;
                    let a = e.matrix.get(0, 0) * *nu;
                    // e^{+i omega_k x_j} = (-1)^k e^{+2 pi i k j / n}
                    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    for (j, v) in values.iter_mut().enumerate() {
                        let r = roots[(k.rem_euclid(n as i64) as usize * j) % n].conj();
                        *v += a * r * sign;
                    }
                }
                GridFunction::new(Arc::clone(&self.grid), values)
            }
            DualModel::Affine(d) => {
                let plus = field
                    .get(&SigmaLabel::AffinePlus)
                    .ok_or_else(|| CoreError::Contract("field misses pi_plus".into()))?;
                let minus = field
                    .get(&SigmaLabel::AffineMinus)
                    .ok_or_else(|| CoreError::Contract("field misses pi_minus".into()))?;
                let values = d.inverse_values(
                    &plus.matrix,
                    plus.weight,
                    &minus.matrix,
                    minus.weight,
                )?;
                GridFunction::new(Arc::clone(&self.grid), values)
            }
        }
    }

    /// Grid surrogate of the trace-class hypothesis of the pointwise
    /// inversion formula: `sum_sigma nu_sigma tr |[A(sigma) C^{-1}]|`,
    /// with the trace norm computed from singular values. Errors if some
    /// `C^{-1}` is not representable.
    pub fn inversion_trace_bound(&self, field: &OperatorField) -> Result<f64> {
        self.check_field(field)?;
        let mut acc = 0.0;
        for e in field.entries() {
            let scaled = apply_duflo(&e.duflo, &e.matrix, DufloSide::RightOfMatrix, DufloPower::MinusOne)
                .map_err(|err| match err {
                    CoreError::InverseNotRepresentable { index, entry } => {
                        CoreError::HypothesisViolated(format!(
                            "Duflo inverse not representable at {} (diagonal index {index} = {entry:e})",
                            e.label
                        ))
                    }
                    other => other,
                })?;
            acc += e.weight * trace_norm(&scaled);
        }
        if acc.is_finite() {
            Ok(acc)
        } else {
            Err(CoreError::HypothesisViolated(
                "trace-norm sum is not finite on this grid".into(),
            ))
        }
    }

    /// Pointwise inversion `a(x) = sum_sigma nu tr([A C^{-1}] sigma(x)^*)`,
    /// guarded by the trace-class surrogate.
    pub fn pointwise_inversion(&self, field: &OperatorField, x: &GroupPoint) -> Result<Complex64> {
        self.inversion_trace_bound(field)?;
        self.pointwise_inversion_unchecked(field, x)
    }

    /// The trace formula without re-running the hypothesis check; used by
    /// bulk evaluations that check once up front.
    pub fn pointwise_inversion_unchecked(
        &self,
        field: &OperatorField,
        x: &GroupPoint,
    ) -> Result<Complex64> {
        self.check_field(field)?;
        self.model().check(x)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for e in field.entries() {
            let scaled = apply_duflo(&e.duflo, &e.matrix, DufloSide::RightOfMatrix, DufloPower::MinusOne)?;
            let rep = self.rep_matrix(&e.label, x)?;
            acc += scaled.hs_inner(&rep)? * e.weight;
        }
        Ok(acc)
    }

    /// Wrap per-label matrices into an [`OperatorField`] carrying this
    /// model's Duflo diagonals and weights.
    pub fn field_from(
        &self,
        mut builder: impl FnMut(&SigmaLabel, usize) -> HsMatrix,
    ) -> Result<OperatorField> {
        let mut entries = Vec::new();
        for label in self.labels() {
            let dim = self.dim(&label)?;
            let matrix = builder(&label, dim);
            if matrix.rows() != dim || matrix.cols() != dim {
                return Err(CoreError::Contract(format!(
                    "matrix at {label} must be {dim}x{dim}"
                )));
            }
            entries.push(FieldEntry {
                label,
                matrix,
                duflo: self.duflo(&label)?,
                weight: self.nu(&label)?,
            });
        }
        OperatorField::new(entries)
    }

    /// Relative Parseval defect `| ||Pf||^2 - ||f||^2 | / ||f||^2`.
    pub fn parseval_defect(&self, f: &GridFunction) -> Result<f64> {
        let n2 = f.norm_sq();
        if n2 == 0.0 {
            return Err(CoreError::Contract("zero function in Parseval check".into()));
        }
        let field = self.forward(f)?;
        let fn2 = crate::opfield::field_norm(&field)?.powi(2);
        Ok((fn2 - n2).abs() / n2)
    }

    fn check_field(&self, field: &OperatorField) -> Result<()> {
        let labels = self.labels();
        if field.len() != labels.len() {
            return Err(CoreError::GridMismatch(format!(
                "field has {} entries, dual grid has {}",
                field.len(),
                labels.len()
            )));
        }
        for label in &labels {
            let e = field
                .get(label)
                .ok_or_else(|| CoreError::GridMismatch(format!("field misses {label}")))?;
            let dim = self.dim(label)?;
            if e.matrix.rows() != dim || e.matrix.cols() != dim {
                return Err(CoreError::GridMismatch(format!(
                    "entry at {label} is {}x{}, expected {dim}x{dim}",
                    e.matrix.rows(),
                    e.matrix.cols()
                )));
            }
        }
        Ok(())
    }

    /// Convention strings echoed into reports.
    pub fn conventions(&self) -> Vec<(String, String)> {
        let mut out = vec![
            (
                "fourier_kernel".to_string(),
                "sigma(f) = integral f(x) sigma(x) dmu(x); real-line characters e^{-i omega x}"
                    .to_string(),
            ),
            (
                "modular_function".to_string(),
                "affine Delta(b, a) = 1/a for left Haar da db / a^2".to_string(),
            ),
        ];
        match &self.dual {
            DualModel::Cyclic { n, .. } => {
                out.push(("plancherel_weight".to_string(), format!("nu = 1/{n} per character")));
            }
            DualModel::RealLine { nu, .. } => {
                out.push((
                    "plancherel_weight".to_string(),
                    format!("nu = d omega / (2 pi) = {nu:e} per frequency"),
                ));
            }
            DualModel::Affine(d) => {
                out.push((
                    "plancherel_weight".to_string(),
                    format!(
                        "calibrated atom weights nu_plus = {:e}, nu_minus = {:e} (analytic 1/(2 pi) = {:e})",
                        d.nu_plus,
                        d.nu_minus,
                        1.0 / std::f64::consts::TAU
                    ),
                ));
                out.push((
                    "duflo_normalization".to_string(),
                    "C(omega) = |omega|^{-1/2} on the half-line grids; fixed up to the constant absorbed into nu".to_string(),
                ));
            }
        }
        out
    }
}

fn sign_of(label: &SigmaLabel) -> affine::AtomSign {
    match label {
        SigmaLabel::AffinePlus => affine::AtomSign::Plus,
        SigmaLabel::AffineMinus => affine::AtomSign::Minus,
        _ => unreachable!("caller checked the label"),
    }
}

fn scalar(z: Complex64) -> HsMatrix {
    let mut m = HsMatrix::zeros(1, 1);
    m.set(0, 0, z);
    m
}

fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|r| Complex64::from_polar(1.0, -std::f64::consts::TAU * r as f64 / n as f64))
        .collect()
}

/// `sum_j dx f(x_j) e^{-i omega_k x_j}` using
/// `e^{-i omega_k x_j} = (-1)^k e^{-2 pi i k j / n}` on the periodized grid.
fn real_line_coeff(f: &GridFunction, k: i64, n: usize, roots: &[Complex64]) -> Complex64 {
    let GridKind::RealLine { half_extent, len } = *f.grid().kind() else {
        unreachable!()
    };
    let dx = 2.0 * half_extent / len as f64;
    let kk = k.rem_euclid(n as i64) as usize;
    let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let sum: Complex64 = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| v * roots[(kk * j) % n])
        .sum();
    sum * dx * sign
}
