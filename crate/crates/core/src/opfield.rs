//! Hilbert-Schmidt matrices, Duflo-Moore diagonals and operator fields.
//!
//! An [`OperatorField`] is the discretized element of the direct integral
//! of Hilbert-Schmidt spaces over a finite dual grid: a list of entries
//! `(sigma label, matrix, Duflo-Moore diagonal, Plancherel weight)`. The
//! squared field norm is `sum_j nu_j * ||A_j||_2^2`.
//!
//! Duflo-Moore operators are kept as positive diagonals in the natural
//! realization basis of each sigma; all of their algebra (powers, one-sided
//! scaling of a matrix) is entrywise. Diagonals may span many orders of
//! magnitude; powers are formed per entry and inversion of an entry below
//! the representable floor is reported instead of silently flushed.
//!
//! # Field JSON schema (version 1)
//!
//! ```text
//! {
//!   "schema_version": 1,
//!   "entries": [
//!     {
//!       "sigma_label": {"character": 3} | {"frequency": -1.5}
//!                      | "affine_plus" | "affine_minus",
//!       "weight": 0.015625,
//!       "rows": 2, "cols": 2,
//!       "matrix_re_im": [re00, im00, re01, im01, ...],   // row-major
//!       "duflo_diag": [d0, d1, ...]
//!     }, ...
//!   ]
//! }
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Diagonal entries below this floor are treated as not invertible in
/// finite arithmetic.
pub const DUFLO_UNDERFLOW_FLOOR: f64 = 1e-280;

/// Dense complex matrix with the Hilbert-Schmidt (Frobenius) geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct HsMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>, // row-major
}

impl HsMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        HsMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = HsMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        HsMatrix { rows, cols, data }
    }

    /// Rank-one operator `u (x) v : w -> <w, v> u`, i.e. the matrix `u v^*`.
    pub fn rank_one(u: &[Complex64], v: &[Complex64]) -> Self {
        HsMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_assign_at(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn hs_norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hs_norm(&self) -> f64 {
        self.hs_norm_sq().sqrt()
    }

    /// Frobenius inner product `<A, B> = tr(B^* A)`.
    pub fn hs_inner(&self, other: &HsMatrix) -> Result<Complex64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(CoreError::Contract(format!(
                "hs_inner dims {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn adjoint(&self) -> HsMatrix {
        HsMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scaled(&self, c: Complex64) -> HsMatrix {
        HsMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &HsMatrix) -> Result<HsMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(CoreError::Contract("matrix add dims".into()));
        }
        Ok(HsMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &HsMatrix) -> Result<HsMatrix> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &HsMatrix) -> Result<HsMatrix> {
        if self.cols != other.rows {
            return Err(CoreError::Contract(format!(
                "matrix product dims {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = HsMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.data[i * self.cols + k];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(row) {
                    *o += aik * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(CoreError::Contract("matrix-vector dims".into()));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .sum()
            })
            .collect())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Max entrywise deviation from the identity; the Gram-defect measure
    /// used by isometry certificates.
    pub fn max_dev_from_identity(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((self.get(i, j) - Complex64::new(target, 0.0)).norm());
            }
        }
        dev
    }
}

/// `||A||_2`, the Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm(a: &HsMatrix) -> f64 {
    a.hs_norm()
}

/// Largest singular value of `A`, via a cyclic Jacobi diagonalization of
/// `A^* A`. Deterministic and accurate at the dense sizes used here.
pub fn operator_norm_bound(a: &HsMatrix) -> f64 {
    let svs = singular_values(a);
    svs.first().copied().unwrap_or(0.0)
}

/// Singular values of `A` in decreasing order.
pub fn singular_values(a: &HsMatrix) -> Vec<f64> {
    let h = a.adjoint().mul(a).expect("dims match by construction");
    let mut eigs = hermitian_eigenvalues(&h);
    for e in eigs.iter_mut() {
        *e = e.max(0.0).sqrt();
    }
    eigs.sort_by(|x, y| y.total_cmp(x));
    eigs
}

/// Trace norm `tr |A| = sum of singular values`.
pub fn trace_norm(a: &HsMatrix) -> f64 {
    singular_values(a).iter().sum()
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.
/// The input is assumed Hermitian; only its Hermitian part is read.
pub fn hermitian_eigenvalues(h: &HsMatrix) -> Vec<f64> {
    assert_eq!(h.rows, h.cols, "hermitian_eigenvalues needs a square matrix");
    let n = h.rows;
    if n == 0 {
        return Vec::new();
    }
    let mut m = h.clone();
    // Symmetrize to guard against rounding in the caller's product.
    for i in 0..n {
        for j in 0..n {
            let v = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
            m.set(i, j, v);
        }
    }
    let scale = m.hs_norm().max(1.0);
    let tol = 1e-15 * scale;
    for _sweep in 0..60 {
        let mut off: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(m.get(i, j).norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let abs = apq.norm();
                if abs <= tol * 1e-2 {
                    continue;
                }
                let phase = apq / abs; // e^{i phi}
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let tau = (aqq - app) / (2.0 * abs);
                // Small root of t^2 - 2 tau t - 1 = 0.
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns: (MJ)_kp = c M_kp + s e^{-i phi} M_kq,
                //          (MJ)_kq = -s e^{i phi} M_kp + c M_kq.
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, mkp * c + mkq * s * phase.conj());
                    m.set(k, q, mkq * c - mkp * s * phase);
                }
                // Rows by J^*.
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, mpk * c + mqk * s * phase);
                    m.set(q, k, mqk * c - mpk * s * phase.conj());
                }
            }
        }
    }
    (0..n).map(|i| m.get(i, i).re).collect()
}

/// Which side of the matrix the diagonal multiplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DufloSide {
    /// `C^p A`: scales rows.
    LeftOfMatrix,
    /// `A C^p`: scales columns.
    RightOfMatrix,
}

/// The supported powers of a Duflo-Moore diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DufloPower {
    One,
    MinusOne,
    Half,
    MinusHalf,
}

impl DufloPower {
    pub fn exponent(self) -> f64 {
        match self {
            DufloPower::One => 1.0,
            DufloPower::MinusOne => -1.0,
            DufloPower::Half => 0.5,
            DufloPower::MinusHalf => -0.5,
        }
    }
}

/// Positive diagonal operator standing in for the (possibly unbounded)
/// Duflo-Moore operator of one sigma.
#[derive(Debug, Clone, PartialEq)]
pub struct DufloMooreOperator {
    diag: Vec<f64>,
}

impl DufloMooreOperator {
    pub fn new(diag: Vec<f64>) -> Result<Self> {
        if let Some((i, d)) = diag
            .iter()
            .enumerate()
            .find(|(_, d)| !(**d > 0.0 && d.is_finite()))
        {
            return Err(CoreError::Contract(format!(
                "Duflo-Moore diagonal must be positive and finite, entry {i} is {d}"
            )));
        }
        Ok(DufloMooreOperator { diag })
    }

    pub fn identity(n: usize) -> Self {
        DufloMooreOperator { diag: vec![1.0; n] }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.diag.iter().all(|d| (d - 1.0).abs() <= tol)
    }

    /// Entrywise power of the diagonal, guarding inversion against
    /// underflow of the represented inverse.
    pub fn powered(&self, power: DufloPower) -> Result<Vec<f64>> {
        let p = power.exponent();
        if p < 0.0 {
            if let Some((i, d)) = self
                .diag
                .iter()
                .enumerate()
                .find(|(_, d)| **d < DUFLO_UNDERFLOW_FLOOR)
            {
                return Err(CoreError::InverseNotRepresentable { index: i, entry: *d });
            }
        }
        Ok(self.diag.iter().map(|d| d.powf(p)).collect())
    }
}

/// `C^p A` or `A C^p` as an exact one-sided diagonal scaling.
pub fn apply_duflo(
    c: &DufloMooreOperator,
    a: &HsMatrix,
    side: DufloSide,
    power: DufloPower,
) -> Result<HsMatrix> {
    let d = c.powered(power)?;
    match side {
        DufloSide::LeftOfMatrix => {
            if d.len() != a.rows() {
                return Err(CoreError::Contract(format!(
                    "diagonal of length {} cannot scale {} rows",
                    d.len(),
                    a.rows()
                )));
            }
            Ok(HsMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) * d[i]))
        }
        DufloSide::RightOfMatrix => {
            if d.len() != a.cols() {
                return Err(CoreError::Contract(format!(
                    "diagonal of length {} cannot scale {} columns",
                    d.len(),
                    a.cols()
                )));
            }
            Ok(HsMatrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) * d[j]))
        }
    }
}

/// Label of a point of the dual grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaLabel {
    /// Character index of the cyclic group.
    Character(u64),
    /// Frequency on the real line.
    Frequency(f64),
    /// The two discrete-series atoms of the affine group.
    AffinePlus,
    AffineMinus,
}

impl SigmaLabel {
    fn same(&self, other: &SigmaLabel) -> bool {
        match (self, other) {
            (SigmaLabel::Frequency(a), SigmaLabel::Frequency(b)) => a.total_cmp(b).is_eq(),
            _ => self == other,
        }
    }
}

impl std::fmt::Display for SigmaLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SigmaLabel::Character(k) => write!(f, "chi_{k}"),
            SigmaLabel::Frequency(w) => write!(f, "omega={w}"),
            SigmaLabel::AffinePlus => write!(f, "pi_plus"),
            SigmaLabel::AffineMinus => write!(f, "pi_minus"),
        }
    }
}

/// One point of a discretized operator field.
#[derive(Debug, Clone)]
pub struct FieldEntry {
    pub label: SigmaLabel,
    pub matrix: HsMatrix,
    pub duflo: DufloMooreOperator,
    /// Plancherel weight `nu_j >= 0` of this sigma.
    pub weight: f64,
}

/// Finite family over the dual grid; the discretized direct-integral element.
#[derive(Debug, Clone, Default)]
pub struct OperatorField {
    entries: Vec<FieldEntry>,
}

impl OperatorField {
    pub fn new(entries: Vec<FieldEntry>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if entries[..i].iter().any(|prev| prev.label.same(&e.label)) {
                return Err(CoreError::Contract(format!(
                    "duplicate sigma label {} in operator field",
                    e.label
                )));
            }
        }
        Ok(OperatorField { entries })
    }

    pub fn entries(&self) -> &[FieldEntry] {
        &self.entries
    }

    pub fn entries_mut(&mut self) -> &mut [FieldEntry] {
        &mut self.entries
    }

    pub fn get(&self, label: &SigmaLabel) -> Option<&FieldEntry> {
        self.entries.iter().find(|e| e.label.same(label))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entrywise linear combination `self + c * other` over matching labels.
    pub fn axpy(&self, c: Complex64, other: &OperatorField) -> Result<OperatorField> {
        if self.len() != other.len() {
            return Err(CoreError::Contract("field axpy: label sets differ".into()));
        }
        let mut entries = Vec::with_capacity(self.len());
        for e in &self.entries {
            let o = other.get(&e.label).ok_or_else(|| {
                CoreError::Contract(format!("field axpy: missing label {}", e.label))
            })?;
            entries.push(FieldEntry {
                label: e.label,
                matrix: e.matrix.add(&o.matrix.scaled(c))?,
                duflo: e.duflo.clone(),
                weight: e.weight,
            });
        }
        OperatorField::new(entries)
    }
}

/// `sqrt( sum_j nu_j ||A_j||_2^2 )`.
pub fn field_norm(field: &OperatorField) -> Result<f64> {
    let mut acc = 0.0;
    for e in field.entries() {
        if e.weight < 0.0 {
            return Err(CoreError::Contract(format!(
                "negative Plancherel weight {} at {}",
                e.weight, e.label
            )));
        }
        acc += e.weight * e.matrix.hs_norm_sq();
    }
    Ok(acc.sqrt())
}

// --- JSON schema ------------------------------------------------------

pub const FIELD_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct EntryJson {
    sigma_label: SigmaLabel,
    weight: f64,
    rows: usize,
    cols: usize,
    matrix_re_im: Vec<f64>,
    duflo_diag: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FieldJson {
    schema_version: u32,
    entries: Vec<EntryJson>,
}

impl OperatorField {
    pub fn to_json_value(&self) -> serde_json::Value {
        let entries = self
            .entries
            .iter()
            .map(|e| EntryJson {
                sigma_label: e.label,
                weight: e.weight,
                rows: e.matrix.rows(),
                cols: e.matrix.cols(),
                matrix_re_im: e
                    .matrix
                    .data()
                    .iter()
                    .flat_map(|z| [z.re, z.im])
                    .collect(),
                duflo_diag: e.duflo.diag().to_vec(),
            })
            .collect();
        serde_json::to_value(FieldJson {
            schema_version: FIELD_SCHEMA_VERSION,
            entries,
        })
        .expect("field serialization cannot fail")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let parsed: FieldJson = serde_json::from_value(v.clone())
            .map_err(|e| CoreError::Io(format!("operator field parse: {e}")))?;
        if parsed.schema_version != FIELD_SCHEMA_VERSION {
            return Err(CoreError::Io(format!(
                "unsupported field schema version {}",
                parsed.schema_version
            )));
        }
        let mut entries = Vec::with_capacity(parsed.entries.len());
        for e in parsed.entries {
            if e.matrix_re_im.len() != 2 * e.rows * e.cols {
                return Err(CoreError::Io(format!(
                    "matrix payload length {} does not match {}x{}",
                    e.matrix_re_im.len(),
                    e.rows,
                    e.cols
                )));
            }
            let data: Vec<Complex64> = e
                .matrix_re_im
                .chunks_exact(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect();
            let mut m = HsMatrix::zeros(e.rows, e.cols);
            m.data.copy_from_slice(&data);
            entries.push(FieldEntry {
                label: e.sigma_label,
                matrix: m,
                duflo: DufloMooreOperator::new(e.duflo_diag)?,
                weight: e.weight,
            });
        }
        OperatorField::new(entries)
    }
}
