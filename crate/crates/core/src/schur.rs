//! Two-sided bounds on Schur (entrywise) multiplier norms.
//!
//! For a sampled symbol M the multiplier norm
//! ‖M‖_𝔐 = sup ‖M ∘ Q‖ / ‖Q‖ equals the least c for which there are vectors
//! x_i, y_j with ⟨x_i, y_j⟩ = M_ij and ‖x_i‖², ‖y_j‖² ≤ c, i.e. for which
//! [[S, M], [M†, T]] has a positive semidefinite completion with
//! diag(S), diag(T) ≤ c.
//!
//! Lower bounds come from explicit probe matrices plus an ascent on
//! ‖diag(a)·M·diag(b)‖_{S₁} over unit vectors a, b (the same quantity seen
//! through trace-class duality). Upper bounds are always backed by a
//! [`HaagerupCertificate`] that is checked entrywise before it is returned.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::ensemble::{gaussian_matrix, random_unit_vector, seeded_rng};
use crate::error::{invalid, Error, Result};
use crate::linalg::{eigh_from_guess, norms, svd, EighOptions, HermitianMatrix, Matrix, C64};
use crate::symbols::Symbol;

/// Samples of a symbol on a product grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolMatrix {
    pub x_grid: Vec<f64>,
    pub y_grid: Vec<f64>,
    pub entries: Matrix,
}

impl SymbolMatrix {
    /// Wraps raw entries; the grids are the row and column indices.
    pub fn from_matrix(entries: Matrix) -> Result<Self> {
        if entries.rows() == 0 || entries.cols() == 0 {
            return Err(invalid("symbol matrix must be nonempty"));
        }
        for i in 0..entries.rows() {
            for j in 0..entries.cols() {
                let z = entries[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::SymbolNotFinite {
                        x: i as f64,
                        y: j as f64,
                    });
                }
            }
        }
        Ok(Self {
            x_grid: (0..entries.rows()).map(|i| i as f64).collect(),
            y_grid: (0..entries.cols()).map(|j| j as f64).collect(),
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.entries.rows()
    }

    pub fn cols(&self) -> usize {
        self.entries.cols()
    }

    pub fn scaled(&self, alpha: C64) -> Self {
        Self {
            entries: self.entries.scale(alpha),
            ..self.clone()
        }
    }

    pub fn hadamard(&self, other: &SymbolMatrix) -> Self {
        Self {
            x_grid: self.x_grid.clone(),
            y_grid: self.y_grid.clone(),
            entries: self.entries.hadamard(&other.entries),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self {
            x_grid: rows.iter().map(|&i| self.x_grid[i]).collect(),
            y_grid: cols.iter().map(|&j| self.y_grid[j]).collect(),
            entries: Matrix::from_fn(rows.len(), cols.len(), |i, j| self.entries[(rows[i], cols[j])]),
        }
    }
}

pub fn sample_symbol(sym: &Symbol, x_grid: &[f64], y_grid: &[f64]) -> Result<SymbolMatrix> {
    if x_grid.is_empty() || y_grid.is_empty() {
        return Err(invalid("sample_symbol: grids must be nonempty"));
    }
    let mut data = Vec::with_capacity(x_grid.len() * y_grid.len());
    for &x in x_grid {
        for &y in y_grid {
            data.push(sym.try_eval(x, y)?);
        }
    }
    Ok(SymbolMatrix {
        x_grid: x_grid.to_vec(),
        y_grid: y_grid.to_vec(),
        entries: Matrix::from_vec(x_grid.len(), y_grid.len(), data)?,
    })
}

/// Which construction produced an upper-bound certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateSource {
    Rows,
    Columns,
    DualScaling,
    AlternatingProjections,
}

/// Vectors with ⟨x_i, y_j⟩ = M_ij; `bound` = max‖x_i‖·max‖y_j‖.
#[derive(Clone, Debug)]
pub struct HaagerupCertificate {
    pub x_vectors: Vec<Vec<C64>>,
    pub y_vectors: Vec<Vec<C64>>,
    pub bound: f64,
    pub source: CertificateSource,
    /// Whether the bound is within the requested tolerance of the lower bound.
    pub converged: bool,
}

impl HaagerupCertificate {
    /// Certificate from factors X (m×r), Y (n×r) with M ≈ X·Y†, balanced so
    /// that max‖x_i‖ = max‖y_j‖.
    fn from_factors(x: &Matrix, y: &Matrix, source: CertificateSource) -> Self {
        let rx = max_row_norm(x);
        let ry = max_row_norm(y);
        let s = if rx > 0.0 && ry > 0.0 { (ry / rx).sqrt() } else { 1.0 };
        let rows = |m: &Matrix, k: f64| -> Vec<Vec<C64>> {
            (0..m.rows()).map(|i| m.row(i).iter().map(|z| z * k).collect()).collect()
        };
        Self {
            x_vectors: rows(x, s),
            y_vectors: rows(y, 1.0 / s),
            bound: rx * ry,
            source,
            converged: false,
        }
    }

    pub fn rank(&self) -> usize {
        self.x_vectors.first().map_or(0, Vec::len)
    }

    /// max_ij |⟨x_i, y_j⟩ − M_ij| / (1 + |M_ij|)
    pub fn max_entry_error(&self, m: &SymbolMatrix) -> f64 {
        let mut err: f64 = 0.0;
        for (i, x) in self.x_vectors.iter().enumerate() {
            for (j, y) in self.y_vectors.iter().enumerate() {
                let dot: C64 = x.iter().zip(y).map(|(a, b)| a * b.conj()).sum();
                let target = m.entries[(i, j)];
                err = err.max((dot - target).norm() / (1.0 + target.norm()));
            }
        }
        err
    }

    /// Entrywise reproduction to 1e-7 and bound consistency.
    pub fn verify(&self, m: &SymbolMatrix) -> bool {
        if self.x_vectors.len() != m.rows() || self.y_vectors.len() != m.cols() {
            return false;
        }
        let nx = self.x_vectors.iter().map(|v| vec_norm(v)).fold(0.0, f64::max);
        let ny = self.y_vectors.iter().map(|v| vec_norm(v)).fold(0.0, f64::max);
        self.max_entry_error(m) <= 1e-7 && nx * ny <= self.bound * (1.0 + 1e-7) + 1e-300
    }
}

fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn max_row_norm(m: &Matrix) -> f64 {
    (0..m.rows()).map(|i| vec_norm(m.row(i))).fold(0.0, f64::max)
}

/// Parameters of the upper-bound search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperOptions {
    pub tol: f64,
    /// Total projection budget across the bisection.
    pub max_iter: usize,
    /// Random probes for the internal lower bound that opens the bracket.
    pub probes: usize,
    pub seed: u64,
}

impl Default for UpperOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 50_000,
            probes: 16,
            seed: 0,
        }
    }
}

/// Lower bound together with the unit vectors a, b attaining
/// ‖diag(a)·M·diag(b)‖_{S₁} from the ascent.
#[derive(Clone, Debug)]
pub struct LowerBound {
    pub value: f64,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
}

pub fn norm_lower(m: &SymbolMatrix, probes: usize, seed: u64) -> Result<f64> {
    lower_with_witness(m, probes, seed).map(|l| l.value)
}

fn ratio(m: &Matrix, q: &Matrix) -> f64 {
    let qn = norms(q).op;
    if qn == 0.0 {
        0.0
    } else {
        norms(&m.hadamard(q)).op / qn
    }
}

/// Sylvester–Hadamard sign pattern truncated to rows × cols.
fn sign_pattern(rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |i, j| {
        if (i & j).count_ones() % 2 == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(-1.0, 0.0)
        }
    })
}

pub fn lower_with_witness(m: &SymbolMatrix, probes: usize, seed: u64) -> Result<LowerBound> {
    if probes == 0 {
        return Err(invalid("norm_lower: probes must be at least 1"));
    }
    let e = &m.entries;
    let (rows, cols) = (e.rows(), e.cols());
    let mut rng = seeded_rng(seed);

    // Matrix units e_i e_j†: |M_ij|. When a direct certificate meets it the
    // bracket is closed and no search is needed.
    let unit = max_entry_witness(e);
    if direct_certificate(m).bound - unit.value <= 1e-12 * (1.0 + unit.value) {
        return Ok(unit);
    }
    let mut best = unit.value;

    let ones = Matrix::from_fn(rows, cols, |_, _| C64::new(1.0, 0.0));
    best = best.max(ratio(e, &ones));
    let diag = Matrix::from_fn(rows, cols, |i, j| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
    best = best.max(ratio(e, &diag));
    best = best.max(ratio(e, &sign_pattern(rows, cols)));
    for _ in 0..probes {
        let q = gaussian_matrix(rows, cols, &mut rng);
        best = best.max(ratio(e, &q));
    }

    let uniform = |k: usize| vec![C64::new(1.0 / (k as f64).sqrt(), 0.0); k];
    let mut starts = vec![(uniform(rows), uniform(cols))];
    for _ in 0..2 {
        starts.push((random_unit_vector(rows, &mut rng), random_unit_vector(cols, &mut rng)));
    }
    let mut witness = LowerBound {
        value: 0.0,
        a: starts[0].0.clone(),
        b: starts[0].1.clone(),
    };
    for (a, b) in starts {
        let w = ascend(e, a, b);
        if w.value > witness.value {
            witness = w;
        }
    }
    let mut witness = refine_weights(e, witness);
    witness.value = witness.value.max(best);
    Ok(witness)
}

/// ‖diag(α)^{1/2} M diag(β)^{1/2}‖_{S₁} together with diag(UΣU†) and diag(VΣV†).
fn weighted_trace_norm(m: &Matrix, alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
    let (rows, cols) = (m.rows(), m.cols());
    let d = svd(&Matrix::from_fn(rows, cols, |i, j| m[(i, j)] * (alpha[i] * beta[j]).sqrt()));
    let k = d.s.len();
    let value = d.s.iter().sum();
    let da = (0..rows).map(|i| (0..k).map(|r| d.u[(i, r)].norm_sqr() * d.s[r]).sum()).collect();
    let db = (0..cols).map(|j| (0..k).map(|r| d.v[(j, r)].norm_sqr() * d.s[r]).sum()).collect();
    (value, da, db)
}

/// (α, β) ↦ ‖diag(α)^{1/2} M diag(β)^{1/2}‖_{S₁} is concave on the product of
/// simplices, and its stationarity condition is α ∝ diag(UΣU†),
/// β ∝ diag(VΣV†). Over-relaxed multiplicative updates toward that fixed
/// point, started from the ascent's witness; every accepted iterate is a
/// valid lower bound.
fn refine_weights(m: &Matrix, start: LowerBound) -> LowerBound {
    const MAX_ITER: usize = 600;
    let mix = |v: &[C64]| -> Vec<f64> {
        let n = v.len() as f64;
        v.iter().map(|z| 0.999 * z.norm_sqr() + 0.001 / n).collect()
    };
    let mut alpha = mix(&start.a);
    let mut beta = mix(&start.b);
    let (mut value, mut da, mut db) = weighted_trace_norm(m, &alpha, &beta);
    if value == 0.0 {
        return start;
    }
    let mut power: f64 = 2.0;
    let mut checkpoint = value;
    for it in 0..MAX_ITER {
        let step = |x: &[f64], d: &[f64], w: f64| -> Vec<f64> {
            let raw: Vec<f64> = x
                .iter()
                .zip(d)
                .map(|(&x, &d)| if x > 0.0 { x * (d / (x * value)).powf(w) } else { 0.0 })
                .collect();
            let total: f64 = raw.iter().sum();
            raw.iter().map(|r| r / total).collect()
        };
        let na = step(&alpha, &da, power);
        let nb = step(&beta, &db, power);
        let (next, nda, ndb) = weighted_trace_norm(m, &na, &nb);
        if next > value || power <= 1.0 {
            let gain = next - value;
            if next > value {
                alpha = na;
                beta = nb;
                value = next;
                da = nda;
                db = ndb;
            }
            power = (power * 1.5).min(64.0);
            if gain <= 1e-15 * value {
                break;
            }
        } else {
            power = (power * 0.5).max(1.0);
        }
        if it % 50 == 49 {
            if value - checkpoint <= 1e-12 * value {
                break;
            }
            checkpoint = value;
        }
    }
    if value <= start.value {
        return start;
    }
    let root = |v: &[f64]| v.iter().map(|x| C64::new(x.sqrt(), 0.0)).collect();
    LowerBound {
        value,
        a: root(&alpha),
        b: root(&beta),
    }
}

/// Alternating maximization of Re tr(W† diag(a) M diag(b)) over partial
/// isometries W and unit vectors a, b. Every iterate is a valid lower bound.
fn ascend(m: &Matrix, mut a: Vec<C64>, mut b: Vec<C64>) -> LowerBound {
    let (rows, cols) = (m.rows(), m.cols());
    let scaled = |a: &[C64], b: &[C64]| Matrix::from_fn(rows, cols, |i, j| a[i] * m[(i, j)] * b[j]);
    let mut d = svd(&scaled(&a, &b));
    let mut value = d.s.iter().sum::<f64>();
    let mut stall = 0;
    for _ in 0..400 {
        let w = d.polar_isometry();
        // G_ij = conj(W_ij) M_ij
        let g = Matrix::from_fn(rows, cols, |i, j| w[(i, j)].conj() * m[(i, j)]);
        let v = g.mul_vec(&b);
        let nv = vec_norm(&v);
        if nv == 0.0 {
            break;
        }
        a = v.iter().map(|z| z.conj() / nv).collect();

        let w = svd(&scaled(&a, &b)).polar_isometry();
        let g = Matrix::from_fn(rows, cols, |i, j| w[(i, j)].conj() * m[(i, j)]);
        let u: Vec<C64> = (0..cols).map(|j| (0..rows).map(|i| a[i] * g[(i, j)]).sum()).collect();
        let nu = vec_norm(&u);
        if nu == 0.0 {
            break;
        }
        b = u.iter().map(|z| z.conj() / nu).collect();

        d = svd(&scaled(&a, &b));
        let next = d.s.iter().sum::<f64>();
        if next <= value * (1.0 + 1e-9) {
            stall += 1;
            if stall >= 3 {
                value = value.max(next);
                break;
            }
        } else {
            stall = 0;
        }
        value = value.max(next);
    }
    LowerBound { value, a, b }
}

pub fn norm_upper(m: &SymbolMatrix, opts: &UpperOptions) -> Result<HaagerupCertificate> {
    let lower = lower_with_witness(m, opts.probes.max(1), opts.seed)?;
    upper_given_lower(m, &lower, opts)
}

fn upper_given_lower(m: &SymbolMatrix, lower: &LowerBound, opts: &UpperOptions) -> Result<HaagerupCertificate> {
    if !(opts.tol > 0.0) {
        return Err(invalid("norm_upper: tol must be positive"));
    }
    let e = &m.entries;

    let mut best = Some(direct_certificate(m));
    let consider = |cert: HaagerupCertificate, best: &mut Option<HaagerupCertificate>| {
        if cert.bound.is_finite() && cert.verify(m) && best.as_ref().map_or(true, |b| cert.bound < b.bound) {
            *best = Some(cert);
        }
    };

    let amax = lower.a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let bmax = lower.b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for eps in [0.0, 1e-12, 1e-9, 1e-6, 1e-4, 1e-2, 1e-1, 1.0] {
        let d1: Vec<f64> = lower.a.iter().map(|z| z.norm() + eps * amax).collect();
        let d2: Vec<f64> = lower.b.iter().map(|z| z.norm() + eps * bmax).collect();
        if d1.iter().chain(&d2).any(|d| *d <= 0.0) {
            continue;
        }
        if let Some(cert) = scaled_svd_certificate(e, &d1, &d2) {
            consider(cert, &mut best);
        }
    }

    let mut best = best.expect("row factorization is always a valid certificate");
    if best.bound - lower.value > opts.tol {
        if let Some(cert) = alternating_projections(m, lower.value, best.bound, opts) {
            if cert.bound.is_finite() && cert.verify(m) && cert.bound < best.bound {
                best = cert;
            }
        }
    }
    best.converged = best.bound - lower.value <= opts.tol;
    Ok(best)
}

/// Best of the certificates that need no search: x_i = row_i, y_j = e_j;
/// x_i = e_i, y_j = conj(col_j); and the unscaled SVD factorization, which
/// is exact for rank-one symbols.
fn direct_certificate(m: &SymbolMatrix) -> HaagerupCertificate {
    let e = &m.entries;
    let (rows, cols) = (e.rows(), e.cols());
    let mut best = HaagerupCertificate::from_factors(e, &Matrix::identity(cols), CertificateSource::Rows);
    let mut candidates = vec![HaagerupCertificate::from_factors(
        &Matrix::identity(rows),
        &e.adjoint(),
        CertificateSource::Columns,
    )];
    candidates.extend(scaled_svd_certificate(e, &vec![1.0; rows], &vec![1.0; cols]));
    for cert in candidates {
        if cert.bound.is_finite() && cert.bound < best.bound && cert.verify(m) {
            best = cert;
        }
    }
    best
}

/// The matrix unit at the largest entry: lower bound |M_ij|, exact for
/// rank-one symbols.
fn max_entry_witness(m: &Matrix) -> LowerBound {
    let (rows, cols) = (m.rows(), m.cols());
    let (mut bi, mut bj, mut v) = (0, 0, -1.0);
    for i in 0..rows {
        for j in 0..cols {
            let a = m[(i, j)].norm();
            if a > v {
                (bi, bj, v) = (i, j, a);
            }
        }
    }
    let unit = |k: usize, n: usize| (0..n).map(|t| C64::new(if t == k { 1.0 } else { 0.0 }, 0.0)).collect();
    LowerBound {
        value: v.max(0.0),
        a: unit(bi, rows),
        b: unit(bj, cols),
    }
}

/// M = D1^{-1} (D1 M D2) D2^{-1} with D1 M D2 = UΣV†:
/// X = D1^{-1} U Σ^{1/2}, Y = D2^{-1} V Σ^{1/2}, then repaired to reproduce M.
fn scaled_svd_certificate(m: &Matrix, d1: &[f64], d2: &[f64]) -> Option<HaagerupCertificate> {
    let (rows, cols) = (m.rows(), m.cols());
    let n = Matrix::from_fn(rows, cols, |i, j| m[(i, j)] * d1[i] * d2[j]);
    let d = svd(&n);
    let k = d.s.len();
    let x = Matrix::from_fn(rows, k, |i, r| d.u[(i, r)] * d.s[r].sqrt() / d1[i]);
    let y = Matrix::from_fn(cols, k, |j, r| d.v[(j, r)] * d.s[r].sqrt() / d2[j]);
    let (x, y) = repair(m, x, y);
    Some(HaagerupCertificate::from_factors(&x, &y, CertificateSource::DualScaling))
}

/// Appends coordinates so that X·Y† reproduces M exactly up to rounding:
/// X' = [X, s·I], Y' = [Y, −E†/s] with E = X·Y† − M.
fn repair(m: &Matrix, x: Matrix, y: Matrix) -> (Matrix, Matrix) {
    let err = &(&x * &y.adjoint()) - m;
    if err.max_abs() <= 1e-13 * (1.0 + m.max_abs()) {
        return (x, y);
    }
    let (rows, cols) = (m.rows(), m.cols());
    let col_norm = (0..cols)
        .map(|j| (0..rows).map(|i| err[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let s = col_norm.sqrt();
    let r = x.cols();
    let x2 = Matrix::from_fn(rows, r + rows, |i, k| {
        if k < r {
            x[(i, k)]
        } else if k - r == i {
            C64::new(s, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let y2 = Matrix::from_fn(cols, r + rows, |j, k| if k < r { y[(j, k)] } else { -err[(k - r, j)].conj() / s });
    (x2, y2)
}

/// Bisection on c over Dykstra-corrected alternating projections between the
/// PSD cone and {Z : Z₁₂ = M, diag(Z) ≤ c}. Returns the best certificate
/// extracted from a PSD iterate, if any.
fn alternating_projections(
    m: &SymbolMatrix,
    lo: f64,
    hi: f64,
    opts: &UpperOptions,
) -> Option<HaagerupCertificate> {
    let e = &m.entries;
    let (rows, cols) = (e.rows(), e.cols());
    let size = rows + cols;
    let scale = 1.0 + e.max_abs();
    let feas_tol = 1e-9 * scale;

    let range = (hi - lo).max(opts.tol);
    let depth = ((range / opts.tol).log2().ceil() as usize).max(1);
    let per_level = (opts.max_iter / depth).max(50);
    let mut budget = opts.max_iter;

    let eig_opts = EighOptions::default();
    let mut basis = Matrix::identity(size);
    let mut best: Option<HaagerupCertificate> = None;
    let (mut lo, mut hi) = (lo, hi);

    let project_box = |z: &mut Matrix, c: f64| {
        for i in 0..size {
            let d = z[(i, i)].re.min(c);
            z[(i, i)] = C64::new(d, 0.0);
        }
        for i in 0..rows {
            for j in 0..cols {
                z[(i, rows + j)] = e[(i, j)];
                z[(rows + j, i)] = e[(i, j)].conj();
            }
        }
    };

    while hi - lo > opts.tol && budget > 0 {
        let c = 0.5 * (lo + hi);
        let mut x = Matrix::identity(size).scale(C64::new(c, 0.0));
        project_box(&mut x, c);
        let mut p = Matrix::zeros(size, size);
        let mut q = Matrix::zeros(size, size);
        let mut feasible = None;
        let mut checkpoint = f64::INFINITY;
        let iters = per_level.min(budget);
        for it in 0..iters {
            budget -= 1;
            let xp = &x + &p;
            let h = HermitianMatrix::hermitian_part(&xp);
            let es = eigh_from_guess(&h, &basis, &eig_opts);
            basis = es.u.clone();
            let clipped: Vec<f64> = es.lambdas.iter().map(|l| l.max(0.0)).collect();
            let scaled = Matrix::from_fn(size, size, |i, k| es.u[(i, k)] * clipped[k]);
            let y = &scaled * &es.u.adjoint();
            p = &xp - &y;

            let mut residual: f64 = 0.0;
            for i in 0..rows {
                for j in 0..cols {
                    residual = residual.max((y[(i, rows + j)] - e[(i, j)]).norm());
                }
            }
            for i in 0..size {
                residual = residual.max(y[(i, i)].re - c);
            }
            if residual <= feas_tol {
                feasible = Some((es, clipped));
                break;
            }

            let yq = &y + &q;
            let mut xn = yq.clone();
            project_box(&mut xn, c);
            q = &yq - &xn;
            x = xn;

            if it % 200 == 199 {
                // No meaningful progress over the window: call it infeasible.
                if residual > 0.9 * checkpoint {
                    break;
                }
                checkpoint = residual;
            }
        }
        match feasible {
            Some((es, clipped)) => {
                let f = Matrix::from_fn(size, size, |i, k| es.u[(i, k)] * clipped[k].sqrt());
                let xf = f.block(0, 0, rows, size);
                let yf = f.block(rows, 0, cols, size);
                let (xf, yf) = repair(e, xf, yf);
                let cert = HaagerupCertificate::from_factors(&xf, &yf, CertificateSource::AlternatingProjections);
                if best.as_ref().map_or(true, |b| cert.bound < b.bound) {
                    best = Some(cert);
                }
                hi = c;
            }
            None => lo = c,
        }
    }
    best
}

/// Two-sided multiplier-norm bounds with the certificate behind `hi`.
#[derive(Clone, Debug)]
pub struct MultiplierBounds {
    pub lo: f64,
    pub hi: f64,
    pub certificate: HaagerupCertificate,
}

impl MultiplierBounds {
    pub fn gap(&self) -> f64 {
        self.hi - self.lo
    }
}

pub fn multiplier_norm(m: &SymbolMatrix, tol: f64, probes: usize, seed: u64) -> Result<MultiplierBounds> {
    let opts = UpperOptions {
        tol,
        probes,
        seed,
        ..UpperOptions::default()
    };
    multiplier_norm_with(m, &opts)
}

pub fn multiplier_norm_with(m: &SymbolMatrix, opts: &UpperOptions) -> Result<MultiplierBounds> {
    if !(opts.tol > 0.0) {
        return Err(invalid("norm_upper: tol must be positive"));
    }
    // Cheap bracket first; the searches only run when it is too wide.
    let quick = max_entry_witness(&m.entries);
    let mut direct = direct_certificate(m);
    if direct.bound - quick.value <= opts.tol {
        direct.converged = true;
        return Ok(MultiplierBounds {
            lo: quick.value,
            hi: direct.bound,
            certificate: direct,
        });
    }
    let lower = lower_with_witness(m, opts.probes.max(1), opts.seed)?;
    let certificate = upper_given_lower(m, &lower, opts)?;
    Ok(MultiplierBounds {
        lo: lower.value,
        hi: certificate.bound,
        certificate,
    })
}

/// The upper-triangular all-ones pattern (triangular truncation).
pub fn triangular_truncation(n: usize) -> SymbolMatrix {
    SymbolMatrix::from_matrix(Matrix::from_fn(n, n, |i, j| {
        C64::new(if i <= j { 1.0 } else { 0.0 }, 0.0)
    }))
    .expect("finite entries")
}

/// ±1 pattern (−1)^{popcount(i & j)}, the leading block of a Sylvester
/// Hadamard matrix.
pub fn sign_symbol(n: usize) -> SymbolMatrix {
    SymbolMatrix::from_matrix(sign_pattern(n, n)).expect("finite entries")
}
