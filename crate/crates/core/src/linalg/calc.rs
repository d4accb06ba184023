#[allow(unused_imports)]
use num_traits::Float;

use super::{svd, EigenSystem, Matrix, C64};
use crate::error::{Error, Result};

/// f(M) = u · diag(f(λ)) · u†.
pub fn func_calc(f: impl Fn(f64) -> C64, e: &EigenSystem) -> Result<Matrix> {
    let n = e.n();
    let mut values = alloc::vec::Vec::with_capacity(n);
    for &lambda in &e.lambdas {
        let v = f(lambda);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::PoleAtEigenvalue { lambda });
        }
        values.push(v);
    }
    let scaled = Matrix::from_fn(n, n, |i, j| e.u[(i, j)] * values[j]);
    Ok(&scaled * &e.u.adjoint())
}

/// (M + iI)^{-1}, which exists for every Hermitian M.
pub fn resolvent(e: &EigenSystem) -> Matrix {
    func_calc(|x| C64::new(1.0, 0.0) / C64::new(x, 1.0), e)
        .expect("x + i never vanishes on the real line")
}

/// Indicator of the closed interval [a, b]; points within 1e-12 of an
/// endpoint count as inside.
pub fn indicator(a: f64, b: f64) -> impl Fn(f64) -> C64 {
    const TIE: f64 = 1e-12;
    move |x| {
        if x >= a - TIE && x <= b + TIE {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    }
}

/// Operator, trace and Hilbert–Schmidt norms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Norms {
    pub op: f64,
    pub trace: f64,
    pub hs: f64,
}

pub fn norms(q: &Matrix) -> Norms {
    if q.rows() == 0 || q.cols() == 0 {
        return Norms {
            op: 0.0,
            trace: 0.0,
            hs: 0.0,
        };
    }
    let s = svd(q).s;
    Norms {
        op: s[0],
        trace: s.iter().sum(),
        hs: s.iter().map(|x| x * x).sum::<f64>().sqrt(),
    }
}
