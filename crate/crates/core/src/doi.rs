//! Double operator integrals over finite spectral measures.
//!
//! With E₁ = Σ_i u_i u_i† δ_{λ_i} and E₂ = Σ_j v_j v_j† δ_{μ_j}, the integral
//! ∬ Φ(x, y) dE₁(x) Q dE₂(y) is the Schur product of the sample matrix
//! S_ij = Φ(λ_i, μ_j) with Q written in the mixed eigenbasis.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{eigh, func_calc, norms, resolvent, EigenSystem, HermitianMatrix, Matrix, C64};
use crate::symbols::{divided_difference, weight_symbol, ScalarFunction, Symbol, Weight};

/// Arguments of a double operator integral with left spectral measure
/// `left`, right spectral measure `right` and operator `q`.
#[derive(Clone, Copy, Debug)]
pub struct DoiRequest<'a> {
    pub symbol: &'a Symbol,
    pub left: &'a EigenSystem,
    pub right: &'a EigenSystem,
    pub q: &'a Matrix,
}

impl<'a> DoiRequest<'a> {
    pub fn new(
        symbol: &'a Symbol,
        left: &'a EigenSystem,
        right: &'a EigenSystem,
        q: &'a Matrix,
    ) -> Result<Self> {
        if q.rows() != left.n() {
            return Err(Error::DimensionMismatch {
                context: "doi: left spectral measure vs rows of q",
                expected: left.n(),
                found: q.rows(),
            });
        }
        if q.cols() != right.n() {
            return Err(Error::DimensionMismatch {
                context: "doi: right spectral measure vs columns of q",
                expected: right.n(),
                found: q.cols(),
            });
        }
        Ok(Self {
            symbol,
            left,
            right,
            q,
        })
    }

    /// S_ij = Φ(λ_i, μ_j).
    pub fn sample_matrix(&self) -> Result<Matrix> {
        let (m, n) = (self.left.n(), self.right.n());
        let mut data = Vec::with_capacity(m * n);
        for &x in &self.left.lambdas {
            for &y in &self.right.lambdas {
                data.push(self.symbol.try_eval(x, y)?);
            }
        }
        Matrix::from_vec(m, n, data)
    }
}

pub fn doi(r: &DoiRequest<'_>) -> Result<Matrix> {
    let s = r.sample_matrix()?;
    Ok(apply_samples(&s, r.left, r.right, r.q))
}

/// U_L · (S ∘ (U_L† q U_R)) · U_R†
pub fn apply_samples(s: &Matrix, left: &EigenSystem, right: &EigenSystem, q: &Matrix) -> Matrix {
    let inner = &(&left.u.adjoint() * q) * &right.u;
    &(&left.u * &inner.hadamard(s)) * &right.u.adjoint()
}

fn check_same_dim(a: &HermitianMatrix, b: &HermitianMatrix, context: &'static str) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            context,
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(())
}

/// f(B) − f(A) = ∬ 𝔇f(x, y) dE_B(x) (B − A) dE_A(y).
pub fn difference_standard(f: &ScalarFunction, a: &HermitianMatrix, b: &HermitianMatrix) -> Result<Matrix> {
    check_same_dim(a, b, "difference_standard")?;
    let ea = eigh(a);
    let eb = eigh(b);
    let q = b.as_matrix() - a.as_matrix();
    let sym = divided_difference(f);
    doi(&DoiRequest::new(&sym, &eb, &ea, &q)?)
}

/// Which relative representation of f(A + K) − f(A) to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelativeForm {
    /// symbol 𝔇f·(y + i), q = K(A + iI)^{-1}
    I,
    /// symbol 𝔇f·(y² + 1)^{1/2}, q = K(A² + I)^{-1/2}
    II,
}

#[derive(Clone, Debug)]
pub struct RelativeDifference {
    pub value: Matrix,
    /// The relatively bounded operator the integral is applied to.
    pub q: Matrix,
    /// ‖f(A + K) − f(A)‖ / ‖q‖ in operator norm (0 when q = 0).
    pub ratio: f64,
}

pub fn difference_relative(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    k: &HermitianMatrix,
    form: RelativeForm,
) -> Result<RelativeDifference> {
    check_same_dim(a, k, "difference_relative")?;
    let b = a.add_scaled(1.0, k);
    let ea = eigh(a);
    let eb = eigh(&b);
    let (sym, weight) = match form {
        RelativeForm::I => (weight_symbol(f, Weight::I), resolvent(&ea)),
        RelativeForm::II => (
            weight_symbol(f, Weight::II),
            func_calc(|x| C64::new(1.0 / (x * x + 1.0).sqrt(), 0.0), &ea)?,
        ),
    };
    let q = k.as_matrix() * &weight;
    let value = doi(&DoiRequest::new(&sym, &eb, &ea, &q)?)?;
    let qn = norms(&q).op;
    let ratio = if qn > 0.0 { norms(&value).op / qn } else { 0.0 };
    Ok(RelativeDifference { value, q, ratio })
}

/// d/ds f(A + sK) at s = t, as ∬ 𝔇f(x, y)(y + i) dE_{A_t}(x) K(A_t + iI)^{-1} dE_{A_t}(y).
pub fn derivative_at(f: &ScalarFunction, a: &HermitianMatrix, k: &HermitianMatrix, t: f64) -> Result<Matrix> {
    check_same_dim(a, k, "derivative_at")?;
    let at = a.add_scaled(t, k);
    let e = eigh(&at);
    let q = k.as_matrix() * &resolvent(&e);
    let sym = weight_symbol(f, Weight::I);
    doi(&DoiRequest::new(&sym, &e, &e, &q)?)
}

/// The transformer T ↦ ∬_{ℝ×[−M, M]} 𝔇f(x, y)(y + i) dE_A(x) T dE_A(y):
/// symbol samples in columns whose eigenvalue lies outside [−M, M] are zeroed.
pub fn truncated_transformer(f: &ScalarFunction, a: &HermitianMatrix, t: &Matrix, m: f64) -> Result<Matrix> {
    let e = eigh(a);
    let sym = weight_symbol(f, Weight::I);
    let req = DoiRequest::new(&sym, &e, &e, t)?;
    let mut s = req.sample_matrix()?;
    let inside = crate::linalg::indicator(-m, m);
    for (j, &mu) in e.lambdas.iter().enumerate() {
        if inside(mu).re == 0.0 {
            for i in 0..s.rows() {
                s[(i, j)] = C64::new(0.0, 0.0);
            }
        }
    }
    Ok(apply_samples(&s, &e, &e, t))
}
