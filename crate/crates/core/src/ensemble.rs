//! Seeded random instance families.
//!
//! All generators draw from a caller-supplied RNG so that a single seed
//! determines a whole batch of instances.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{eigh, HermitianMatrix, Matrix, C64};

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed)
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    C64::new(normal(rng) * s, normal(rng) * s)
}

/// Unitary-invariant Gaussian Hermitian matrix (GUE), entries multiplied by
/// `scale`.
pub fn gaussian_hermitian<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> HermitianMatrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(normal(rng) * scale, 0.0);
        for j in (i + 1)..n {
            let z = complex_normal(rng) * scale;
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::hermitian_part(&m)
}

/// GUE normalized so that the spectrum fills roughly [-2r, 2r].
pub fn wigner<R: Rng + ?Sized>(n: usize, radius: f64, rng: &mut R) -> HermitianMatrix {
    gaussian_hermitian(n, radius / (n.max(1) as f64).sqrt(), rng)
}

/// Hermitian matrix with a large, well separated diagonal and small
/// off-diagonal coupling.
pub fn diagonally_dominant<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    let mut m = gaussian_hermitian(n, 0.1 / (n.max(1) as f64).sqrt(), rng).into_matrix();
    for i in 0..n {
        m[(i, i)] = C64::new(i as f64 - 0.5 * (n as f64 - 1.0) + 0.1 * normal(rng), 0.0);
    }
    HermitianMatrix::hermitian_part(&m)
}

/// Random unitary conjugate of a spectrum made of `clusters` tight groups
/// (width `spread`) of nearly equal eigenvalues.
pub fn clustered_spectrum<R: Rng + ?Sized>(
    n: usize,
    clusters: usize,
    spread: f64,
    rng: &mut R,
) -> HermitianMatrix {
    let clusters = clusters.max(1);
    let centers: Vec<f64> = (0..clusters)
        .map(|k| 2.0 * k as f64 - (clusters as f64 - 1.0))
        .collect();
    let diag: Vec<f64> = (0..n)
        .map(|i| centers[i % clusters] + spread * normal(rng))
        .collect();
    let q = eigh(&gaussian_hermitian(n, 1.0, rng)).u;
    let d = Matrix::from_real_diag(&diag);
    HermitianMatrix::hermitian_part(&(&(&q * &d) * &q.adjoint()))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..n).map(|_| complex_normal(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Named instance families used by the probes and the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Gaussian,
    DiagonallyDominant,
    Clustered,
}

impl Family {
    pub fn sample<R: Rng + ?Sized>(self, n: usize, rng: &mut R) -> HermitianMatrix {
        match self {
            Family::Gaussian => wigner(n, 1.0, rng),
            Family::DiagonallyDominant => diagonally_dominant(n, rng),
            Family::Clustered => clustered_spectrum(n, 3, 1e-3, rng),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Gaussian => "gaussian",
            Family::DiagonallyDominant => "diagdom",
            Family::Clustered => "clustered",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "gaussian" => Some(Family::Gaussian),
            "diagdom" => Some(Family::DiagonallyDominant),
            "clustered" => Some(Family::Clustered),
            _ => None,
        }
    }

    pub const ALL: [Family; 3] = [
        Family::Gaussian,
        Family::DiagonallyDominant,
        Family::Clustered,
    ];
}
