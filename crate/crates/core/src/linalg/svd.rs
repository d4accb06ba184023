use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{Matrix, C64};

/// Thin singular value decomposition `a = u · diag(s) · v†` with `s`
/// descending. `u` is m×k and `v` is n×k where k = min(m, n).
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    /// The partial isometry u·v† that attains the trace norm:
    /// Re tr(w† a) = Σ s.
    pub fn polar_isometry(&self) -> Matrix {
        &self.u * &self.v.adjoint()
    }
}

const MAX_SWEEPS: usize = 80;

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(a: &Matrix) -> Svd {
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint());
        return Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        };
    }
    let m = a.rows();
    let n = a.cols();
    // Column-major working copy for cache-friendly column rotations.
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = alloc::vec![C64::new(0.0, 0.0); n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    // Columns below this squared norm are numerically zero.
    let tiny = {
        let f: f64 = w.iter().flatten().map(|z| z.norm_sqr()).sum();
        f * (f64::EPSILON * f64::EPSILON)
    };
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = w[p].iter().zip(&w[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || alpha <= tiny || beta <= tiny || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let theta = (beta - alpha) / (2.0 * g);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                let jqp = -phase.conj() * sn;
                let jqq = phase.conj() * cs;
                rotate_pair(&mut w, p, q, cs, sn, jqp, jqq);
                rotate_pair(&mut v, p, q, cs, sn, jqp, jqq);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = Matrix::from_fn(m, n, |i, k| {
        let j = order[k];
        if norms[j] > 0.0 {
            w[j][i] / norms[j]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let vm = Matrix::from_fn(n, n, |i, k| v[order[k]][i]);
    Svd { u, s, v: vm }
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, cs: f64, sn: f64, jqp: C64, jqq: C64) {
    let (left, right) = cols.split_at_mut(q);
    let cp = &mut left[p];
    let cq = &mut right[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = *x;
        let xq = *y;
        *x = xp * cs + xq * jqp;
        *y = xp * sn + xq * jqq;
    }
}
