use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{HermitianMatrix, Matrix, C64};

/// Convergence and clustering parameters for the Jacobi eigensolver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EighOptions {
    /// Stop once the off-diagonal Frobenius mass is below `off_tol * ‖M‖_F`.
    pub off_tol: f64,
    pub max_sweeps: usize,
    /// Eigenvalues closer than `cluster_gap * ‖M‖` are treated as one cluster
    /// and their eigenvectors re-orthonormalized.
    pub cluster_gap: f64,
}

impl Default for EighOptions {
    fn default() -> Self {
        Self {
            off_tol: 1e-13,
            max_sweeps: 64,
            cluster_gap: 1e-9,
        }
    }
}

/// Eigenvalues in ascending order together with a unitary matrix whose
/// columns are the matching eigenvectors. This is the finite spectral
/// measure of the decomposed matrix: E(Δ) = Σ_{λ_j ∈ Δ} u_j u_j†.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    pub lambdas: Vec<f64>,
    pub u: Matrix,
    /// Number of Jacobi sweeps performed.
    pub sweeps: usize,
}

impl EigenSystem {
    #[inline]
    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn eigenvector(&self, j: usize) -> Vec<C64> {
        self.u.column(j)
    }

    /// u · diag(λ) · u†
    pub fn reconstruct(&self) -> Matrix {
        let n = self.n();
        let scaled = Matrix::from_fn(n, n, |i, j| self.u[(i, j)] * self.lambdas[j]);
        &scaled * &self.u.adjoint()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.lambdas.iter().fold(0.0, |m: f64, l| m.max(l.abs()))
    }
}

pub fn eigh(m: &HermitianMatrix) -> EigenSystem {
    eigh_with(m, &EighOptions::default())
}

pub fn eigh_with(m: &HermitianMatrix, opts: &EighOptions) -> EigenSystem {
    let n = m.n();
    jacobi(m.as_matrix().clone(), Matrix::identity(n), m.as_matrix(), opts)
}

/// Jacobi iteration started from the basis `guess` (assumed unitary).
/// When `guess` nearly diagonalizes `m`, a couple of sweeps suffice.
pub fn eigh_from_guess(m: &HermitianMatrix, guess: &Matrix, opts: &EighOptions) -> EigenSystem {
    let a = &(&guess.adjoint() * m.as_matrix()) * guess;
    let a = HermitianMatrix::hermitian_part(&a).into_matrix();
    jacobi(a, guess.clone(), m.as_matrix(), opts)
}

fn jacobi(mut a: Matrix, mut v: Matrix, original: &Matrix, opts: &EighOptions) -> EigenSystem {
    let n = a.rows();
    let scale = original.frobenius_norm();
    let mut sweeps = 0;

    if scale > 0.0 {
        while sweeps < opts.max_sweeps {
            if off_diagonal_norm(&a) <= opts.off_tol * scale {
                break;
            }
            sweeps += 1;
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let lambdas: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut u = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    let spread = lambdas.iter().fold(0.0, |m: f64, l| m.max(l.abs()));
    let gap = opts.cluster_gap * spread.max(f64::MIN_POSITIVE);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && lambdas[end] - lambdas[end - 1] < gap {
            end += 1;
        }
        if end - start > 1 {
            gram_schmidt(&mut u, start, end);
        }
        start = end;
    }

    for j in 0..n {
        fix_phase(&mut u, j);
    }

    EigenSystem { lambdas, u, sweeps }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Unitary rotation J acting on columns p, q that annihilates a[p][q]:
/// a ← J† a J, v ← v J.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let h = a[(p, q)];
    let g = h.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Negligible relative to both diagonal entries: the rotation would be
    // the identity to working precision.
    if g <= f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = h / g;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
        sgn / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    // J_pp = c, J_pq = s, J_qp = -s·conj(e), J_qq = c·conj(e)
    let jqp = -phase.conj() * sn;
    let jqq = phase.conj() * cs;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * cs + akq * jqp;
        a[(k, q)] = akp * sn + akq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * cs + aqk * jqp.conj();
        a[(q, k)] = apk * sn + aqk * jqq.conj();
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..v.rows() {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cs + vkq * jqp;
        v[(k, q)] = vkp * sn + vkq * jqq;
    }
}

/// Modified Gram–Schmidt on columns start..end, in index order.
fn gram_schmidt(u: &mut Matrix, start: usize, end: usize) {
    let n = u.rows();
    for j in start..end {
        for k in start..j {
            let mut dot = C64::new(0.0, 0.0);
            for i in 0..n {
                dot += u[(i, k)].conj() * u[(i, j)];
            }
            for i in 0..n {
                let uk = u[(i, k)];
                u[(i, j)] -= dot * uk;
            }
        }
        let norm = (0..n).map(|i| u[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for i in 0..n {
                u[(i, j)] /= norm;
            }
        }
    }
}

/// Rotates column j so that its first non-negligible component is real and
/// positive.
fn fix_phase(u: &mut Matrix, j: usize) {
    let n = u.rows();
    for i in 0..n {
        let z = u[(i, j)];
        let r = z.norm();
        if r > 1e-8 {
            let rot = z.conj() / r;
            for k in 0..n {
                u[(k, j)] *= rot;
            }
            u[(i, j)] = C64::new(u[(i, j)].re, 0.0);
            return;
        }
    }
}
