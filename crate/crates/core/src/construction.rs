//! Construction of admissible vectors for the nonunimodular regular
//! representation by dyadic slicing of the modular function.
//!
//! The quotient of the affine group by the kernel of its modular function
//! embeds in the positive reals; on a discretized copy of that quotient
//! (a [`GammaGrid`], points identified with their modular values) the
//! half-open slices
//!
//! ```text
//! S_n = { gamma : c^n <= Delta(gamma)^{-1/2} < c^{n+1} },   n = 0, 1, ...
//! ```
//!
//! partition the region where `Delta^{-1/2} >= 1`. Placing one unit vector
//! `v_n` (flat profile) in each slice and mapping an orthonormal basis
//! `u_n -> ||Delta^{-1/2} v_{n+k}||^{-1} v_{n+k}` yields an operator `A`
//! with three certified properties:
//!
//! * `||A||_2^2 = sum_n ||Delta^{-1/2} v_{n+k}||^{-2} < 2^{1-k}` for
//!   `c >= 2` (Hilbert-Schmidt smallness from the shift),
//! * `C A` maps the `u_n` to an orthonormal family (the isometry that
//!   makes the inverse transform admissible),
//! * `||[A^* C]||_inf <= c` (bounded extension via the slice
//!   decomposition).
//!
//! Assembling one such `A` per dual atom with shifts `k_n` satisfying
//! `nu(Sigma_n) 2^{-k_n} < 2^{-n}` produces a square-integrable operator
//! field whose inverse Plancherel transform is an admissible vector for
//! the whole regular representation; raising every shift scales its norm
//! down geometrically, so admissible vectors exist at every norm.

use serde::Serialize;

use num_complex::Complex64;

use crate::admissibility::{multiplier_criterion, AdmissibilityReport, DEFAULT_CRITERION_TOL};
use crate::error::{CoreError, Result};
use crate::group::GridFunction;
use crate::opfield::{
    operator_norm_bound, DufloMooreOperator, FieldEntry, HsMatrix, OperatorField, SigmaLabel,
};
use crate::plancherel::{AffineDualSpec, AffineGridSpec, PlancherelModel};

/// Discretized quotient grid: points are the modular values themselves
/// (the canonical embedding), with quadrature weights of the realization
/// measure.
#[derive(Debug, Clone)]
pub struct GammaGrid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl GammaGrid {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(CoreError::Contract(
                "gamma grid needs one weight per point".into(),
            ));
        }
        if points.iter().any(|p| !p.is_finite() || *p <= 0.0) {
            return Err(CoreError::Contract(
                "gamma points (modular values) must be positive".into(),
            ));
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(CoreError::Contract("gamma weights must be positive".into()));
        }
        Ok(GammaGrid { points, weights })
    }

    /// Log-uniform modular values on `[2^lo, 2^hi)` with multiplicative
    /// Haar weights `d t / t`.
    pub fn log_uniform(log2_lo: f64, log2_hi: f64, len: usize) -> Result<Self> {
        let step = (log2_hi - log2_lo) / len as f64;
        let points = (0..len)
            .map(|i| (log2_lo + (i as f64 + 0.5) * step).exp2())
            .collect();
        let weights = vec![step * std::f64::consts::LN_2; len];
        GammaGrid::new(points, weights)
    }

    /// The quotient grid sitting under an affine Plancherel model's dual:
    /// modular values are the half-line frequencies, weights the
    /// frequency quadrature weights.
    pub fn from_affine_dual(pm: &PlancherelModel) -> Result<Self> {
        let dual = pm
            .affine_dual()
            .ok_or_else(|| CoreError::Contract("needs an affine model".into()))?;
        GammaGrid::new(dual.omegas().to_vec(), dual.dweights().to_vec())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Modular values; identical to the stored points by the embedding.
    pub fn delta_values(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Delta(gamma)^{-1/2}` at grid index `i`.
    pub fn delta_inv_sqrt(&self, i: usize) -> f64 {
        1.0 / self.points[i].sqrt()
    }
}

/// Half-open dyadic slices of a gamma grid.
#[derive(Debug, Clone)]
pub struct SlicePartition {
    pub c: f64,
    /// `members[n]` = grid indices with `c^n <= Delta^{-1/2} < c^{n+1}`.
    members: Vec<Vec<usize>>,
    /// Points with `Delta^{-1/2} < 1`, outside every slice.
    excluded: Vec<usize>,
}

/// Slice index of a value `v = Delta^{-1/2} >= 1`: the unique `n >= 0`
/// with `c^n <= v < c^{n+1}` under the computed-power predicate.
fn slice_index(c: f64, v: f64) -> i64 {
    let mut n = (v.ln() / c.ln()).floor() as i64;
    while c.powi(n as i32 + 1) <= v {
        n += 1;
    }
    while n > 0 && c.powi(n as i32) > v {
        n -= 1;
    }
    n
}

/// Partition the sliceable part of the grid.
///
/// Preconditions: `c > 1`, and the base slice `S_0` must contain at least
/// one point of positive weight (the positive-measure condition that the
/// slicing constant is chosen to satisfy).
pub fn build_slices(c: f64, gamma: &GammaGrid) -> Result<SlicePartition> {
    if !c.is_finite() || c <= 1.0 {
        return Err(CoreError::Contract(format!(
            "slicing constant must satisfy c > 1, got {c}"
        )));
    }
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut excluded = Vec::new();
    for i in 0..gamma.len() {
        let v = gamma.delta_inv_sqrt(i);
        if v < 1.0 {
            excluded.push(i);
            continue;
        }
        let n = slice_index(c, v) as usize;
        if members.len() <= n {
            members.resize(n + 1, Vec::new());
        }
        members[n].push(i);
    }
    let base_weight: f64 = members
        .first()
        .map(|s| s.iter().map(|i| gamma.weights()[*i]).sum())
        .unwrap_or(0.0);
    if base_weight <= 0.0 {
        return Err(CoreError::Precondition(format!(
            "the base slice {{ 1 <= Delta^(-1/2) < c }} carries no weight for c = {c}; \
             the slicing constant must give it positive Haar measure"
        )));
    }
    Ok(SlicePartition {
        c,
        members,
        excluded,
    })
}

impl SlicePartition {
    /// Number of slice indices hit by the grid (some may be empty).
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self, n: usize) -> &[usize] {
        &self.members[n]
    }

    pub fn excluded(&self) -> &[usize] {
        &self.excluded
    }

    /// Indices of nonempty slices, ascending.
    pub fn nonempty(&self) -> Vec<usize> {
        (0..self.members.len())
            .filter(|n| !self.members[*n].is_empty())
            .collect()
    }

    /// Exact membership predicate for certificates.
    pub fn membership_exact(&self, gamma: &GammaGrid) -> bool {
        for (n, slice) in self.members.iter().enumerate() {
            for i in slice {
                let v = gamma.delta_inv_sqrt(*i);
                if !(self.c.powi(n as i32) <= v && v < self.c.powi(n as i32 + 1)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Unit vector supported in one slice, flat over the slice in the first
/// fiber direction. Values are function samples over gamma x fiber with
/// fiber-minor layout.
#[derive(Debug, Clone)]
pub struct SliceVector {
    pub slice: usize,
    pub fiber_dim: usize,
    values: Vec<f64>,
}

impl SliceVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Weighted coordinates `sqrt(w_p) v(p)` (first fiber direction kept
    /// in place), the embedding under which matrices act.
    pub fn weighted(&self, gamma: &GammaGrid) -> Vec<Complex64> {
        self.values
            .iter()
            .enumerate()
            .map(|(idx, v)| {
                let p = idx / self.fiber_dim;
                Complex64::new(v * gamma.weights()[p].sqrt(), 0.0)
            })
            .collect()
    }

    /// `|| Delta^{-1/2} v ||` over the gamma grid.
    pub fn delta_inv_sqrt_norm(&self, gamma: &GammaGrid) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(idx, v)| {
                let p = idx / self.fiber_dim;
                gamma.weights()[p] * v * v / gamma.delta_values()[p]
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn norm(&self, gamma: &GammaGrid) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(idx, v)| gamma.weights()[idx / self.fiber_dim] * v * v)
            .sum::<f64>()
            .sqrt()
    }
}

/// The unit vector of one slice: flat modulus over the slice's points,
/// supported in the first fiber direction.
pub fn vector_for_slice(
    sp: &SlicePartition,
    gamma: &GammaGrid,
    n: usize,
    fiber_dim: usize,
) -> Result<SliceVector> {
    if fiber_dim == 0 {
        return Err(CoreError::Contract("fiber dimension must be positive".into()));
    }
    if n >= sp.len() || sp.members(n).is_empty() {
        return Err(CoreError::Contract(format!(
            "slice {n} is empty or beyond the {} slices this grid supports",
            sp.len()
        )));
    }
    let total_weight: f64 = sp.members(n).iter().map(|i| gamma.weights()[*i]).sum();
    let amp = 1.0 / total_weight.sqrt();
    let mut values = vec![0.0; gamma.len() * fiber_dim];
    for i in sp.members(n) {
        values[i * fiber_dim] = amp;
    }
    Ok(SliceVector {
        slice: n,
        fiber_dim,
        values,
    })
}

/// One flat unit vector per nonempty slice, ascending slice order.
pub fn choose_vectors(
    sp: &SlicePartition,
    gamma: &GammaGrid,
    fiber_dim: usize,
) -> Result<Vec<SliceVector>> {
    sp.nonempty()
        .into_iter()
        .map(|n| vector_for_slice(sp, gamma, n, fiber_dim))
        .collect()
}

/// Sub-slice granularity: one unit vector per sliceable grid cell,
/// ordered by slice (then by descending modular-inverse depth within a
/// slice, i.e. ascending frequency depth). Each cell vector is certified
/// against its containing slice's bounds; with this family every
/// direction of the realization space is reachable, which is what makes
/// the assembled multiplier a full isometry on a finite grid.
pub fn cell_vectors(sp: &SlicePartition, gamma: &GammaGrid) -> Result<Vec<SliceVector>> {
    let mut out = Vec::new();
    for n in sp.nonempty() {
        let mut members: Vec<usize> = sp.members(n).to_vec();
        // Within a slice: shallow first (smaller Delta^{-1/2}).
        members.sort_by(|a, b| {
            gamma
                .delta_inv_sqrt(*a)
                .partial_cmp(&gamma.delta_inv_sqrt(*b))
                .unwrap()
        });
        for i in members {
            let amp = 1.0 / gamma.weights()[i].sqrt();
            let mut values = vec![0.0; gamma.len()];
            values[i] = amp;
            out.push(SliceVector {
                slice: n,
                fiber_dim: 1,
                values,
            });
        }
    }
    Ok(out)
}

/// Certificates of one constructed operator.
#[derive(Debug, Clone, Serialize)]
pub struct ConstructionCertificates {
    pub c: f64,
    pub shift: usize,
    /// Measured `||A||_2^2 = sum ||Delta^{-1/2} v_{n+k}||^{-2}`.
    pub hs_norm_sq: f64,
    /// The slice-estimate bound `sum c^{-2 n(v)}` over mapped vectors.
    pub hs_slice_bound: f64,
    /// `2^{1-k}`, the dyadic bound the shift guarantees for `c >= 2`.
    pub hs_dyadic_bound: f64,
    /// Max entrywise deviation of the Gram matrix of `(C A u_n)_n` from
    /// the identity.
    pub gram_defect: f64,
    /// Largest singular value of `[A^* C]`; certified `<= c`.
    pub op_norm_bound: f64,
    /// Every mapped vector satisfies `||Delta^{-1/2} v_n|| >= c^n` (with
    /// relative slack 1e-12 for the float sum).
    pub delta_lower_bounds_ok: bool,
    /// Slice membership re-checked point by point.
    pub membership_exact: bool,
    pub mapped: usize,
    pub excluded_points: usize,
}

/// A constructed Hilbert-Schmidt operator with its certificates.
#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub matrix: HsMatrix,
    pub duflo: DufloMooreOperator,
    pub certificates: ConstructionCertificates,
}

/// Build `A : u_n -> ||Delta^{-1/2} v_{n+k}||^{-1} v_{n+k}` and certify it.
///
/// `u_basis` must be an orthonormal list (in weighted coordinates on
/// gamma x fiber) of length `v_list.len() - shift`. `shift` counts list
/// positions; when the list holds one vector per slice it equals the
/// dyadic slice shift `k` of the `2^{1-k}` bound, and
/// [`build_a_with_slice_shift`] exposes the distinction for sub-slice
/// lists.
pub fn build_a(
    u_basis: &[Vec<Complex64>],
    v_list: &[SliceVector],
    gamma: &GammaGrid,
    sp: &SlicePartition,
    shift: usize,
) -> Result<ConstructionResult> {
    build_a_with_slice_shift(u_basis, v_list, gamma, sp, shift, shift)
}

/// [`build_a`] with the list shift and the dyadic slice shift decoupled:
/// a list at cell granularity moves `cells-per-slice` positions per slice
/// shift, while the `2^{1-k}` certificate uses the slice shift `k`.
pub fn build_a_with_slice_shift(
    u_basis: &[Vec<Complex64>],
    v_list: &[SliceVector],
    gamma: &GammaGrid,
    sp: &SlicePartition,
    shift: usize,
    slice_shift: usize,
) -> Result<ConstructionResult> {
    if v_list.is_empty() || v_list.len() <= shift {
        return Err(CoreError::Precondition(format!(
            "{} slice vectors cannot absorb a shift of {shift}",
            v_list.len()
        )));
    }
    let fiber_dim = v_list[0].fiber_dim;
    let dim = gamma.len() * fiber_dim;
    let mapped = v_list.len() - shift;
    if u_basis.len() != mapped {
        return Err(CoreError::Contract(format!(
            "expected {mapped} basis vectors (vectors minus shift), got {}",
            u_basis.len()
        )));
    }
    for u in u_basis {
        if u.len() != dim {
            return Err(CoreError::Contract(format!(
                "basis vector of length {} in a {dim}-dimensional space",
                u.len()
            )));
        }
    }
    // Orthonormality of the u's.
    for (i, u) in u_basis.iter().enumerate() {
        for (j, w) in u_basis.iter().enumerate().skip(i) {
            let inner: Complex64 = u.iter().zip(w).map(|(a, b)| a * b.conj()).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            if (inner - Complex64::new(target, 0.0)).norm() > 1e-12 {
                return Err(CoreError::Contract(format!(
                    "u basis is not orthonormal: <u_{i}, u_{j}> = {inner}"
                )));
            }
        }
    }

    let c = sp.c;
    let duflo = DufloMooreOperator::new(
        (0..dim)
            .map(|idx| gamma.delta_inv_sqrt(idx / fiber_dim))
            .collect(),
    )?;

    let mut matrix = HsMatrix::zeros(dim, dim);
    let mut hs_norm_sq = 0.0;
    let mut hs_slice_bound = 0.0;
    let mut delta_ok = true;
    // Images C A u_n in weighted coordinates, for the Gram certificate.
    let mut images: Vec<Vec<Complex64>> = Vec::with_capacity(mapped);
    for (n, u) in u_basis.iter().enumerate() {
        let target = &v_list[n + shift];
        let dnorm = target.delta_inv_sqrt_norm(gamma);
        let coeff = 1.0 / dnorm;
        hs_norm_sq += coeff * coeff;
        hs_slice_bound += c.powi(-2 * target.slice as i32);
        if dnorm < c.powi(target.slice as i32) * (1.0 - 1e-12) {
            delta_ok = false;
        }
        let vw = target.weighted(gamma);
        // matrix += coeff * v_w u^*
        for (r, val) in vw.iter().enumerate() {
            if *val == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (col, uc) in u.iter().enumerate() {
                matrix.add_assign_at(r, col, val * uc.conj() * coeff);
            }
        }
        images.push(
            vw.iter()
                .enumerate()
                .map(|(idx, val)| val * (duflo.diag()[idx] * coeff))
                .collect(),
        );
    }

    let mut gram_defect = 0.0f64;
    for (i, a) in images.iter().enumerate() {
        for (j, b) in images.iter().enumerate() {
            let inner: Complex64 = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            gram_defect = gram_defect.max((inner - Complex64::new(target, 0.0)).norm());
        }
    }

    // [A^* C] as a matrix: adjoint of A followed by the diagonal on the
    // left of A^*'s input, i.e. A^* C = (C A)^*.
    let ca = {
        let mut m = matrix.clone();
        for r in 0..dim {
            for col in 0..dim {
                m.set(r, col, m.get(r, col) * duflo.diag()[r]);
            }
        }
        m
    };
    let op_bound = operator_norm_bound(&ca.adjoint());

    let certificates = ConstructionCertificates {
        c,
        shift: slice_shift,
        hs_norm_sq,
        hs_slice_bound,
        hs_dyadic_bound: (1.0 - slice_shift as f64).exp2(),
        gram_defect,
        op_norm_bound: op_bound,
        delta_lower_bounds_ok: delta_ok,
        membership_exact: sp.membership_exact(gamma),
        mapped,
        excluded_points: sp.excluded().len(),
    };
    Ok(ConstructionResult {
        matrix,
        duflo,
        certificates,
    })
}

/// The standard basis of the weighted realization space, one vector per
/// mapped list position: `u_n` is the unit weighted-coordinate vector at
/// the first support point of `v_n`. Any orthonormal list works; this
/// deterministic choice keeps the assembled field's dilation structure
/// aligned with the grid.
pub fn standard_u_basis(
    v_list: &[SliceVector],
    gamma: &GammaGrid,
    shift: usize,
) -> Result<Vec<Vec<Complex64>>> {
    if v_list.len() <= shift {
        return Err(CoreError::Precondition(format!(
            "{} vectors cannot absorb a shift of {shift}",
            v_list.len()
        )));
    }
    let fiber_dim = v_list[0].fiber_dim;
    let dim = gamma.len() * fiber_dim;
    let mapped = v_list.len() - shift;
    let mut basis = Vec::with_capacity(mapped);
    for v in v_list.iter().take(mapped) {
        let p = v
            .values()
            .iter()
            .position(|x| *x != 0.0)
            .expect("slice vectors are nonzero");
        let mut u = vec![Complex64::new(0.0, 0.0); dim];
        u[p] = Complex64::new(1.0, 0.0);
        basis.push(u);
    }
    Ok(basis)
}

/// Certificates of one assembled dual atom.
#[derive(Debug, Clone, Serialize)]
pub struct AtomCertificate {
    pub label: String,
    pub nu: f64,
    /// Minimal shift from `nu(Sigma_n) 2^{-k} < 2^{-n}` (atom index `n`).
    pub k_minimal: usize,
    /// Minimal shift plus the caller's extra shift.
    pub k_total: usize,
    pub slices: usize,
    pub certificates: ConstructionCertificates,
}

/// Summary of an assembled field.
#[derive(Debug, Clone, Serialize)]
pub struct FieldAssembly {
    pub atoms: Vec<AtomCertificate>,
    pub field_norm_sq: f64,
    /// `sum_n 2^{1-n}` over the atom indices: the square-integrability
    /// budget the shifts enforce.
    pub field_budget: f64,
}

/// Smallest `k >= 0` with `nu * 2^{-k} < 2^{-n}`, strictly.
fn minimal_shift(nu: f64, n: u32) -> usize {
    let mut k = 0usize;
    while nu * (-(k as f64)).exp2() >= (-(n as f64)).exp2() {
        k += 1;
        assert!(k < 4096, "shift search diverged");
    }
    k
}

/// Granularity of the assembled slice family.
///
/// `Slice` is the one-vector-per-slice construction with the dyadic
/// Hilbert-Schmidt budget `||A||_2^2 < 2^{1-k}`; it is the right choice
/// on construction-grade duals with one cell per slice. `Cell` refines
/// the family to one vector per sliceable dual cell (each certified
/// against its containing slice): the budget is traded for a multiplier
/// that acts isometrically on the whole realization space, which is what
/// a quadrature wavelet transform on a frequency-resolved grid can
/// actually exhibit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Granularity {
    Slice,
    Cell,
}

/// Assemble the per-atom construction into an operator field on a
/// nonunimodular model. Atom `Sigma_n` (n = 1, 2 for the two affine
/// atoms) gets the minimal shift plus `extra_shift`; with `Cell`
/// granularity a slice shift moves `cells-per-slice` list positions, so
/// the dual grid must subdivide the slice width evenly.
pub fn assemble_field(
    pm: &PlancherelModel,
    c: f64,
    extra_shift: usize,
    granularity: Granularity,
) -> Result<(OperatorField, FieldAssembly)> {
    if pm.is_unimodular() {
        return Err(CoreError::Contract(
            "admissible vectors for the full regular representation exist only in \
             the nonunimodular case; unimodular nondiscrete models are obstructed"
                .into(),
        ));
    }
    let dual = pm.affine_dual().expect("nonunimodular model is affine");
    let cells_per_slice = match granularity {
        Granularity::Slice => 1,
        Granularity::Cell => {
            let slice_width = 2.0 * c.log2();
            let cps = slice_width / dual.dlog2;
            if (cps - cps.round()).abs() > 1e-9 || cps.round() < 1.0 {
                return Err(CoreError::Contract(format!(
                    "dual grid step {} does not subdivide the slice width {} evenly",
                    dual.dlog2, slice_width
                )));
            }
            cps.round() as usize
        }
    };
    let gamma = GammaGrid::from_affine_dual(pm)?;
    let sp = build_slices(c, &gamma)?;
    let mut entries = Vec::new();
    let mut atoms = Vec::new();
    let mut field_norm_sq = 0.0;
    let mut field_budget = 0.0;
    for (idx, label) in [SigmaLabel::AffinePlus, SigmaLabel::AffineMinus]
        .into_iter()
        .enumerate()
    {
        let atom_index = idx as u32 + 1;
        let nu = pm.nu(&label)?;
        let k_min = minimal_shift(nu, atom_index);
        let k_total = k_min + extra_shift;
        let vectors = match granularity {
            Granularity::Slice => choose_vectors(&sp, &gamma, 1)?,
            Granularity::Cell => cell_vectors(&sp, &gamma)?,
        };
        let list_shift = k_total * cells_per_slice;
        let u_basis = standard_u_basis(&vectors, &gamma, list_shift)?;
        let built =
            build_a_with_slice_shift(&u_basis, &vectors, &gamma, &sp, list_shift, k_total)?;
        field_norm_sq += nu * built.certificates.hs_norm_sq;
        field_budget += (1.0 - atom_index as f64).exp2();
        atoms.push(AtomCertificate {
            label: label.to_string(),
            nu,
            k_minimal: k_min,
            k_total,
            slices: sp.nonempty().len(),
            certificates: built.certificates.clone(),
        });
        entries.push(FieldEntry {
            label,
            matrix: built.matrix,
            duflo: pm.duflo(&label)?,
            weight: nu,
        });
    }
    let field = OperatorField::new(entries)?;
    Ok((
        field,
        FieldAssembly {
            atoms,
            field_norm_sq,
            field_budget,
        },
    ))
}

/// End-to-end admissible vector for the affine regular representation:
/// assemble the field, invert it, and report the multiplier criterion.
pub struct RegularAdmissibleVector {
    pub g: GridFunction,
    pub report: AdmissibilityReport,
    pub assembly: FieldAssembly,
    /// Transform-side squared norm of `g` (the certified value; the
    /// quadrature norm of the grid vector is reported alongside).
    pub norm_sq_certified: f64,
    pub norm_sq_quadrature: f64,
}

pub fn admissible_vector_for_regular(
    pm: &PlancherelModel,
    c: f64,
    extra_shift: usize,
    granularity: Granularity,
) -> Result<RegularAdmissibleVector> {
    let (field, assembly) = assemble_field(pm, c, extra_shift, granularity)?;
    let g = pm.inverse(&field)?;
    let report = multiplier_criterion(&field, pm, None, DEFAULT_CRITERION_TOL)?;
    let norm_sq_certified = assembly.field_norm_sq;
    let norm_sq_quadrature = g.norm_sq();
    Ok(RegularAdmissibleVector {
        g,
        report,
        assembly,
        norm_sq_certified,
        norm_sq_quadrature,
    })
}

/// The deep construction model: one dual cell per slice for the given
/// `c`, atom weights pinned to the analytic `1/(2 pi)` (the calibration
/// battery is not representable at construction depth). This is the grid
/// family whose Duflo-Moore diagonals span many orders of magnitude.
pub fn construction_model(c: f64, fibers: usize) -> Result<PlancherelModel> {
    if !c.is_finite() || c <= 1.0 {
        return Err(CoreError::Contract(format!("need c > 1, got {c}")));
    }
    let dspec = AffineDualSpec::construction(c, fibers);
    let nu = 1.0 / std::f64::consts::TAU;
    PlancherelModel::affine_with_weights(&AffineGridSpec::construction(), &dspec, nu, nu)
}

/// The end-to-end reference model: frequency-resolved dual up to
/// `omega = 1` on the construction group grid, analytic atom weights.
/// Cell-granularity assemblies on this model produce admissible vectors
/// whose quadrature wavelet transform is near-isometric on resolvable
/// batteries.
pub fn regular_reference_model() -> Result<PlancherelModel> {
    regular_reference_model_on(&AffineGridSpec::construction())
}

pub fn regular_reference_model_on(gspec: &AffineGridSpec) -> Result<PlancherelModel> {
    let nu = 1.0 / std::f64::consts::TAU;
    PlancherelModel::affine_with_weights(gspec, &AffineDualSpec::regular_reference(), nu, nu)
}
