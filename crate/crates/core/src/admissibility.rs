//! Admissibility criteria for subrepresentations of the regular
//! representation.
//!
//! The central operational test: a vector `g` is admissible when the
//! per-sigma multipliers `M_sigma = [g_hat(sigma)^* C_sigma]` act
//! isometrically by right multiplication on Hilbert-Schmidt space, i.e.
//! `M_sigma M_sigma^* = Id`. On a finite dual grid almost-everywhere
//! conditions become all-grid-point conditions over the sigmas with
//! positive Plancherel weight. A criterion can be scoped to a left
//! invariant subspace by a field of orthogonal projections, in which case
//! the isometry is required on the projected block only.
//!
//! For unimodular models the finite-measure criterion applies: a subspace
//! with projection field `(P_sigma)` admits an admissible vector exactly
//! when the multiplicity-weighted dual measure
//! `nu_H = sum nu_sigma rank(P_sigma)` is finite, and then every
//! admissible vector has squared norm `nu_H`. On a fixed grid the sum is
//! always finite; finiteness is operationalized as stability of `nu_H`
//! under grid refinement and extension, which is what the no-go evidence
//! for the full regular representation of the line makes quantitative:
//! the required norm grows linearly with the dual window and no
//! fixed-norm family of admissible vectors exists.

use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::group::{GridFunction, GroupModel};
use crate::opfield::{
    apply_duflo, operator_norm_bound, DufloPower, DufloSide, FieldEntry, HsMatrix, OperatorField,
    SigmaLabel,
};
use crate::plancherel::PlancherelModel;

/// Default tolerance on isometry defects of exact-side certificates.
pub const DEFAULT_CRITERION_TOL: f64 = 1e-8;

/// Per-sigma orthogonal projections with Plancherel weights; the
/// transform-side picture of a left invariant subspace.
#[derive(Debug, Clone)]
pub struct ProjectionField {
    entries: Vec<(SigmaLabel, HsMatrix, f64)>,
}

impl ProjectionField {
    /// Validates idempotency and selfadjointness of each block.
    pub fn new(entries: Vec<(SigmaLabel, HsMatrix, f64)>) -> Result<Self> {
        for (label, p, _) in &entries {
            let dev_sa = p.sub(&p.adjoint())?.hs_norm();
            let dev_idem = p.mul(p)?.sub(p)?.hs_norm();
            if dev_sa > 1e-10 || dev_idem > 1e-10 {
                return Err(CoreError::Contract(format!(
                    "block at {label} is not an orthogonal projection \
                     (selfadjoint defect {dev_sa:e}, idempotent defect {dev_idem:e})"
                )));
            }
        }
        Ok(ProjectionField { entries })
    }

    /// The identity field: the whole regular representation.
    pub fn full(pm: &PlancherelModel) -> Result<Self> {
        let mut entries = Vec::new();
        for label in pm.labels() {
            let dim = pm.dim(&label)?;
            entries.push((label, HsMatrix::identity(dim), pm.nu(&label)?));
        }
        Ok(ProjectionField { entries })
    }

    pub fn entries(&self) -> &[(SigmaLabel, HsMatrix, f64)] {
        &self.entries
    }

    pub fn get(&self, label: &SigmaLabel) -> Option<&HsMatrix> {
        self.entries
            .iter()
            .find(|(l, _, _)| format!("{l}") == format!("{label}"))
            .map(|(_, p, _)| p)
    }

    /// `nu_H`: the multiplicity-weighted dual measure of the subspace.
    pub fn nu_total(&self) -> f64 {
        self.entries
            .iter()
            .map(|(_, p, nu)| nu * p.trace().re.round())
            .sum()
    }
}

/// Verdict of an admissibility check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Admissible,
    NotAdmissible,
    HypothesisViolated,
}

/// Values backing the verdict for one sigma.
#[derive(Debug, Clone, Serialize)]
pub struct SigmaCriterion {
    pub label: String,
    pub nu: f64,
    /// `||M_sigma||_inf`.
    pub multiplier_norm: f64,
    /// Max entrywise deviation of `M M^*` from the (scoped) identity.
    pub isometry_defect: f64,
    /// Directions with no multiplier mass at all (diagonal of `M M^*`
    /// below tolerance); nonzero counts indicate grid truncation.
    pub dead_directions: usize,
}

/// Structured verdict emitted by the admissibility checkers.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub verdict: Verdict,
    pub criterion: String,
    pub tolerance: f64,
    /// `sup_sigma ||M_sigma||_inf` where applicable.
    pub sup_multiplier_norm: Option<f64>,
    pub max_isometry_defect: Option<f64>,
    /// `nu_H` for subspace criteria.
    pub nu_total: Option<f64>,
    /// Predicted squared norm of an admissible vector (`= nu_H` in the
    /// unimodular case).
    pub predicted_norm_sq: Option<f64>,
    pub per_sigma: Vec<SigmaCriterion>,
    pub conventions: Vec<(String, String)>,
    pub notes: Vec<String>,
}

impl AdmissibilityReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization")
    }
}

/// The multipliers `M_sigma = [g_hat(sigma)^* C_sigma]` of a transformed
/// vector. Entries that fail to be representable are reported as a
/// hypothesis violation.
pub fn multipliers(g_hat: &OperatorField) -> Result<Vec<(SigmaLabel, HsMatrix)>> {
    let mut out = Vec::with_capacity(g_hat.len());
    for e in g_hat.entries() {
        let m = apply_duflo(
            &e.duflo,
            &e.matrix.adjoint(),
            DufloSide::RightOfMatrix,
            DufloPower::One,
        )?;
        if m.data().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CoreError::HypothesisViolated(format!(
                "multiplier at {} is not representable in finite arithmetic",
                e.label
            )));
        }
        out.push((e.label, m));
    }
    Ok(out)
}

/// The sufficient multiplier criterion: `g` (given by its transform) is
/// admissible for the subspace scoped by `scope` (the full representation
/// when `None`) iff every scoped `M_sigma M_sigma^*` is the scoped
/// identity within `tol`.
pub fn multiplier_criterion(
    g_hat: &OperatorField,
    pm: &PlancherelModel,
    scope: Option<&ProjectionField>,
    tol: f64,
) -> Result<AdmissibilityReport> {
    let mults = match multipliers(g_hat) {
        Ok(m) => m,
        Err(CoreError::HypothesisViolated(msg)) => {
            return Ok(AdmissibilityReport {
                verdict: Verdict::HypothesisViolated,
                criterion: "multiplier".into(),
                tolerance: tol,
                sup_multiplier_norm: None,
                max_isometry_defect: None,
                nu_total: None,
                predicted_norm_sq: None,
                per_sigma: Vec::new(),
                conventions: pm.conventions(),
                notes: vec![msg],
            });
        }
        Err(other) => return Err(other),
    };
    let mut per_sigma = Vec::new();
    let mut sup_norm = 0.0f64;
    let mut max_defect = 0.0f64;
    let mut notes = Vec::new();
    for (label, m) in &mults {
        let nu = pm.nu(label)?;
        if nu <= 0.0 {
            continue;
        }
        let gram = m.mul(&m.adjoint())?;
        let (defect, dead) = match scope.and_then(|s| s.get(label)) {
            Some(p) => {
                // Scoped test: P (M M*) P = P within tol.
                let scoped = p.mul(&gram)?.mul(p)?;
                let defect = scoped.sub(p)?.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
                (defect, 0)
            }
            None => {
                let dead = (0..gram.rows())
                    .filter(|q| gram.get(*q, *q).re.abs() < tol)
                    .count();
                (gram.max_dev_from_identity(), dead)
            }
        };
        let mnorm = operator_norm_bound(m);
        sup_norm = sup_norm.max(mnorm);
        max_defect = max_defect.max(defect);
        if dead > 0 {
            notes.push(format!(
                "{dead} direction(s) at {label} carry no multiplier mass (dual-grid truncation)"
            ));
        }
        per_sigma.push(SigmaCriterion {
            label: label.to_string(),
            nu,
            multiplier_norm: mnorm,
            isometry_defect: defect,
            dead_directions: dead,
        });
    }
    let verdict = if max_defect < tol {
        Verdict::Admissible
    } else {
        Verdict::NotAdmissible
    };
    Ok(AdmissibilityReport {
        verdict,
        criterion: if scope.is_some() {
            "multiplier (scoped)".into()
        } else {
            "multiplier".into()
        },
        tolerance: tol,
        sup_multiplier_norm: Some(sup_norm),
        max_isometry_defect: Some(max_defect),
        nu_total: scope.map(|s| s.nu_total()),
        predicted_norm_sq: None,
        per_sigma,
        conventions: pm.conventions(),
        notes,
    })
}

/// Transform-side wavelet analysis: `(V_g f)^(sigma) = f_hat(sigma) M_sigma`.
pub fn wavelet_transform_hat(
    f_hat: &OperatorField,
    g_hat: &OperatorField,
    pm: &PlancherelModel,
) -> Result<OperatorField> {
    let mults = multipliers(g_hat)?;
    let mut entries = Vec::with_capacity(f_hat.len());
    for e in f_hat.entries() {
        let m = mults
            .iter()
            .find(|(l, _)| l.to_string() == e.label.to_string())
            .map(|(_, m)| m)
            .ok_or_else(|| {
                CoreError::Contract(format!("multiplier field misses {}", e.label))
            })?;
        entries.push(FieldEntry {
            label: e.label,
            matrix: e.matrix.mul(m)?,
            duflo: e.duflo.clone(),
            weight: e.weight,
        });
    }
    let _ = pm;
    OperatorField::new(entries)
}

/// The finite-measure criterion for unimodular models: `nu_H` and the
/// predicted admissible-vector norm.
pub fn unimodular_subspace_criterion(
    p: &ProjectionField,
    pm: &PlancherelModel,
    tol: f64,
) -> Result<AdmissibilityReport> {
    if !pm.is_unimodular() {
        return Err(CoreError::Contract(
            "the finite-measure criterion applies to unimodular models only".into(),
        ));
    }
    let nu_total = p.nu_total();
    let per_sigma = p
        .entries()
        .iter()
        .map(|(label, proj, nu)| SigmaCriterion {
            label: label.to_string(),
            nu: *nu,
            multiplier_norm: 1.0,
            isometry_defect: 0.0,
            dead_directions: proj.rows() - proj.trace().re.round() as usize,
        })
        .collect();
    Ok(AdmissibilityReport {
        verdict: Verdict::Admissible,
        criterion: "finite dual measure (unimodular)".into(),
        tolerance: tol,
        sup_multiplier_norm: None,
        max_isometry_defect: None,
        nu_total: Some(nu_total),
        predicted_norm_sq: Some(nu_total),
        per_sigma,
        conventions: pm.conventions(),
        notes: vec![
            "finiteness on a fixed grid is automatic; it counts as finite only when \
             nu_H is stable under grid refinement and extension"
                .into(),
        ],
    })
}

/// The admissible vector realizing a unimodular subspace criterion: the
/// inverse transform of the projection field itself (then `V_g = P`).
pub fn admissible_vector_for_subspace(
    p: &ProjectionField,
    pm: &PlancherelModel,
) -> Result<GridFunction> {
    let field = pm.field_from(|label, dim| {
        p.get(label)
            .cloned()
            .unwrap_or_else(|| HsMatrix::zeros(dim, dim))
    })?;
    pm.inverse(&field)
}

/// A frequency window as a union of half-open intervals `[lo, hi)`.
#[derive(Debug, Clone, Default)]
pub struct FrequencyWindow {
    pub intervals: Vec<(f64, f64)>,
}

impl FrequencyWindow {
    pub fn new(intervals: Vec<(f64, f64)>) -> Self {
        FrequencyWindow { intervals }
    }

    pub fn symmetric(w: f64) -> Self {
        FrequencyWindow {
            intervals: vec![(-w, w)],
        }
    }

    pub fn contains(&self, omega: f64) -> bool {
        self.intervals.iter().any(|(lo, hi)| *lo <= omega && omega < *hi)
    }

    /// Lebesgue measure of the window.
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(lo, hi)| (hi - lo).max(0.0)).sum()
    }
}

/// Projection field of a band-limited subspace of the line model.
pub fn band_projection(window: &FrequencyWindow, pm: &PlancherelModel) -> Result<ProjectionField> {
    if pm.model() != GroupModel::RealLine {
        return Err(CoreError::Contract(
            "band projections live on the real-line model".into(),
        ));
    }
    let mut entries = Vec::new();
    for label in pm.labels() {
        let SigmaLabel::Frequency(w) = label else {
            unreachable!()
        };
        let inside = window.contains(w);
        let p = if inside {
            HsMatrix::identity(1)
        } else {
            HsMatrix::zeros(1, 1)
        };
        entries.push((label, p, pm.nu(&label)?));
    }
    ProjectionField::new(entries)
}

/// Band-limited admissible vector for the subspace of functions with
/// spectrum in `window`: the inverse transform of the window indicator.
/// Returns the vector with its criterion report.
pub fn bandlimited_admissible_vector(
    window: &FrequencyWindow,
    pm: &PlancherelModel,
) -> Result<(GridFunction, AdmissibilityReport)> {
    let p = band_projection(window, pm)?;
    if p.nu_total() == 0.0 {
        return Err(CoreError::Precondition(
            "the window contains no dual grid cell: degenerate subspace".into(),
        ));
    }
    let g = admissible_vector_for_subspace(&p, pm)?;
    let mut report = unimodular_subspace_criterion(&p, pm, DEFAULT_CRITERION_TOL)?;
    report.criterion = "band-limited subspace".into();
    report.notes.push(format!(
        "window measure {:e}, nu_H = measure/(2 pi) when cells align",
        window.measure()
    ));
    Ok((g, report))
}

/// `P g` on the transform side: compress each `g_hat(sigma)` by the
/// subspace projection from the right and invert. For `f` in the
/// subspace, `V_{Pg} f = V_g f`.
pub fn project_admissible(
    g: &GridFunction,
    p: &ProjectionField,
    pm: &PlancherelModel,
) -> Result<GridFunction> {
    let g_hat = pm.forward(g)?;
    let mut entries = Vec::with_capacity(g_hat.len());
    for e in g_hat.entries() {
        let proj = p
            .get(&e.label)
            .cloned()
            .unwrap_or_else(|| HsMatrix::zeros(e.matrix.rows(), e.matrix.cols()));
        entries.push(FieldEntry {
            label: e.label,
            matrix: e.matrix.mul(&proj)?,
            duflo: e.duflo.clone(),
            weight: e.weight,
        });
    }
    pm.inverse(&OperatorField::new(entries)?)
}

/// One row of the no-go growth study.
#[derive(Debug, Clone, Serialize)]
pub struct NoGoRow {
    pub dual_extent: f64,
    /// `nu` measure of the half-open dual window `[-W, W)`: the squared
    /// norm every admissible vector for that subspace must have.
    pub required_norm_sq: f64,
    /// Quadrature norm of the constructed window vector (oracle).
    pub measured_norm_sq: f64,
}

/// Evidence that the full regular representation of a nondiscrete
/// unimodular model has no admissible vector: the required norm grows
/// without bound along the dual window family.
#[derive(Debug, Clone, Serialize)]
pub struct NoGoReport {
    pub rows: Vec<NoGoRow>,
    pub strictly_increasing: bool,
    pub doubling_ratios: Vec<f64>,
    /// Set when the growth is monotone: no fixed-norm family of
    /// admissible vectors exists for the full regular representation.
    pub no_fixed_norm_family: bool,
    pub notes: Vec<String>,
}

impl NoGoReport {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialization")
    }
}

/// Growth of the required admissible-vector norm with the dual extent,
/// on the real-line model. Errors on discrete or nonunimodular models.
pub fn no_go_evidence(pm: &PlancherelModel, dual_extents: &[f64]) -> Result<NoGoReport> {
    match pm.model() {
        GroupModel::RealLine => {}
        GroupModel::Cyclic(_) => {
            return Err(CoreError::Contract(
                "no-go evidence needs a nondiscrete model; discrete groups admit \
                 admissible vectors for the full regular representation"
                    .into(),
            ));
        }
        GroupModel::Affine => {
            return Err(CoreError::Contract(
                "no-go evidence applies to unimodular models only".into(),
            ));
        }
    }
    if dual_extents.is_empty() {
        return Err(CoreError::Contract("empty dual extent family".into()));
    }
    let mut rows = Vec::new();
    for w in dual_extents {
        let window = FrequencyWindow::symmetric(*w);
        let p = band_projection(&window, pm)?;
        let required = p.nu_total();
        let g = admissible_vector_for_subspace(&p, pm)?;
        rows.push(NoGoRow {
            dual_extent: *w,
            required_norm_sq: required,
            measured_norm_sq: g.norm_sq(),
        });
    }
    let strictly_increasing = rows
        .windows(2)
        .all(|pair| pair[1].required_norm_sq > pair[0].required_norm_sq);
    let mut doubling_ratios = Vec::new();
    for pair in rows.windows(2) {
        if (pair[1].dual_extent / pair[0].dual_extent - 2.0).abs() < 1e-12 {
            doubling_ratios.push(pair[1].required_norm_sq / pair[0].required_norm_sq);
        }
    }
    Ok(NoGoReport {
        no_fixed_norm_family: strictly_increasing,
        strictly_increasing,
        doubling_ratios,
        rows,
        notes: vec![
            "every admissible vector for the band-limited subspace [-W, W) must have \
             squared norm nu_H = W/pi; the family diverges with W, so no fixed-norm \
             admissible vector serves the full regular representation"
                .into(),
        ],
    })
}

/// The discrete contrast: on cyclic models the criterion is satisfiable
/// with `||g||^2 = nu_H = 1` independent of the order.
pub fn discrete_contrast(orders: &[u64]) -> Result<Vec<(u64, f64)>> {
    let mut out = Vec::new();
    for n in orders {
        let pm = PlancherelModel::cyclic(*n);
        let p = ProjectionField::full(&pm)?;
        let g = admissible_vector_for_subspace(&p, &pm)?;
        out.push((*n, g.norm_sq()));
    }
    Ok(out)
}
