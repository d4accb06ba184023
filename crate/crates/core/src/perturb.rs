//! Relative boundedness data, domination inequalities, commutator probes and
//! the Cayley-transform identity behind them.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::ensemble::{random_unit_vector, seeded_rng};
use crate::error::{invalid, Error, Result};
use crate::linalg::{eigh, func_calc, norms, resolvent, HermitianMatrix, Matrix, C64, I};
use crate::symbols::ScalarFunction;

/// Clean-zero threshold for commutator ratios, relative to the data scale.
pub const ZERO_TOL: f64 = 1e-12;

fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn same_dim(a: &HermitianMatrix, b: &HermitianMatrix, context: &'static str) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            context,
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(())
}

/// K together with C = K(A + iI)^{-1} and G = K(A² + I)^{-1/2}.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationPair {
    pub a: HermitianMatrix,
    pub k: HermitianMatrix,
    pub c: Matrix,
    pub g: Matrix,
    pub c_trace_norm: f64,
}

impl PerturbationPair {
    /// Frobenius residuals of C(A + iI) = K and G(A² + I)^{1/2} = K.
    pub fn residuals(&self) -> (f64, f64) {
        let e = eigh(&self.a);
        let shift = func_calc(|x| C64::new(x, 1.0), &e).expect("finite");
        let root = func_calc(|x| C64::new((x * x + 1.0).sqrt(), 0.0), &e).expect("finite");
        let k = self.k.as_matrix();
        (
            (&(&self.c * &shift) - k).frobenius_norm(),
            (&(&self.g * &root) - k).frobenius_norm(),
        )
    }
}

pub fn make_pair(a: &HermitianMatrix, k: &HermitianMatrix) -> Result<PerturbationPair> {
    same_dim(a, k, "make_pair")?;
    let e = eigh(a);
    let km = k.as_matrix();
    let c = km * &resolvent(&e);
    let g = km * &func_calc(|x| C64::new(1.0 / (x * x + 1.0).sqrt(), 0.0), &e)?;
    let c_trace_norm = norms(&c).trace;
    Ok(PerturbationPair {
        a: a.clone(),
        k: k.clone(),
        c,
        g,
        c_trace_norm,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DominationReport {
    /// max over trials of max(‖Kv‖ − c‖v‖ − d‖Av‖, 0).
    pub max_violation: f64,
    /// When no trial violated the hypothesis: whether
    /// ‖Kv‖ ≤ (c‖v‖ + d‖(A + K)v‖)/(1 − d) held on every trial.
    pub implication_holds: Option<bool>,
}

pub fn domination_check(
    a: &HermitianMatrix,
    k: &HermitianMatrix,
    c: f64,
    d: f64,
    trials: usize,
    seed: u64,
) -> Result<DominationReport> {
    same_dim(a, k, "domination_check")?;
    if trials == 0 {
        return Err(invalid("domination_check: trials must be at least 1"));
    }
    if !(0.0..1.0).contains(&d) || c < 0.0 {
        return Err(invalid("domination_check: need c >= 0 and 0 <= d < 1"));
    }
    let n = a.n();
    let b = a.add_scaled(1.0, k);
    let mut rng = seeded_rng(seed);
    let mut max_violation: f64 = 0.0;
    let mut implication = true;
    for _ in 0..trials {
        let v = random_unit_vector(n, &mut rng);
        let kv = vec_norm(&k.as_matrix().mul_vec(&v));
        let av = vec_norm(&a.as_matrix().mul_vec(&v));
        let bv = vec_norm(&b.as_matrix().mul_vec(&v));
        max_violation = max_violation.max(kv - c - d * av);
        let bound = (c + d * bv) / (1.0 - d);
        if kv > bound + 1e-12 * (1.0 + bound) {
            implication = false;
        }
    }
    Ok(DominationReport {
        max_violation,
        implication_holds: (max_violation == 0.0).then_some(implication),
    })
}

/// numerator / denominator with the zero-denominator policy applied.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ratio {
    pub numerator: f64,
    pub denominator: f64,
    /// 0 when both sides vanish, +∞ when only the denominator does.
    pub value: f64,
    /// Set when the denominator vanishes but the numerator does not.
    pub flagged: bool,
}

impl Ratio {
    fn new(numerator: f64, denominator: f64, scale: f64) -> Self {
        let zero = ZERO_TOL * scale;
        let (value, flagged) = if denominator > zero {
            (numerator / denominator, false)
        } else if numerator <= zero {
            (0.0, false)
        } else {
            (f64::INFINITY, true)
        };
        Self {
            numerator,
            denominator,
            value,
            flagged,
        }
    }
}

/// ratio_b: ‖f(A)R − Rf(A)‖ / ‖(AR − RA)(A + iI)^{-1}‖;
/// ratio_c: ‖f(B)R − Rf(A)‖ / ‖(BR − RA)(A + iI)^{-1}‖. Operator norms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorProbe {
    pub ratio_b: Ratio,
    pub ratio_c: Ratio,
}

fn quasi_commutator_ratio(f: &ScalarFunction, a: &HermitianMatrix, b: &HermitianMatrix, r: &Matrix) -> Result<Ratio> {
    let ea = eigh(a);
    let eb = eigh(b);
    let fa = func_calc(|x| f.eval(x), &ea)?;
    let fb = func_calc(|x| f.eval(x), &eb)?;
    let num = norms(&(&(&fb * r) - &(r * &fa))).op;
    let comm = &(b.as_matrix() * r) - &(r * a.as_matrix());
    let den = norms(&(&comm * &resolvent(&ea))).op;
    let scale = 1.0 + norms(r).op;
    Ok(Ratio::new(num, den, scale))
}

pub fn commutator_probe(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    r: &Matrix,
) -> Result<CommutatorProbe> {
    if r.rows() != b.n() || r.cols() != a.n() {
        return Err(Error::DimensionMismatch {
            context: "commutator_probe: R must be dim(B) x dim(A)",
            expected: b.n() * a.n(),
            found: r.rows() * r.cols(),
        });
    }
    let ratio_b = if a.n() == b.n() {
        quasi_commutator_ratio(f, a, a, r)?
    } else {
        return Err(invalid("commutator_probe: ratio_b needs a square R"));
    };
    let ratio_c = quasi_commutator_ratio(f, a, b, r)?;
    Ok(CommutatorProbe { ratio_b, ratio_c })
}

/// 𝐀 = blockdiag(A, B) and 𝐑 with R in the lower-left block, so that
/// 𝐀𝐑 − 𝐑𝐀 carries BR − RA in the same block.
pub fn block_dilation(a: &HermitianMatrix, b: &HermitianMatrix, r: &Matrix) -> Result<(HermitianMatrix, Matrix)> {
    if r.rows() != b.n() || r.cols() != a.n() {
        return Err(Error::DimensionMismatch {
            context: "block_dilation: R must be dim(B) x dim(A)",
            expected: b.n() * a.n(),
            found: r.rows() * r.cols(),
        });
    }
    let n = a.n() + b.n();
    let mut big_r = Matrix::zeros(n, n);
    big_r.set_block(a.n(), 0, r);
    Ok((HermitianMatrix::block_diag(a, b), big_r))
}

/// Residual of VR − RU = 2i(B + iI)^{-1}(BR − RA)(A + iI)^{-1} with
/// U, V the Cayley transforms of A, B.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResidual {
    pub residual: f64,
    pub scale: f64,
}

impl IdentityResidual {
    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }
}

pub fn cayley_transform(a: &HermitianMatrix) -> Matrix {
    func_calc(|x| C64::new(x, -1.0) / C64::new(x, 1.0), &eigh(a)).expect("x + i never vanishes")
}

pub fn cayley_commutator_identity(a: &HermitianMatrix, b: &HermitianMatrix, r: &Matrix) -> Result<IdentityResidual> {
    if r.rows() != b.n() || r.cols() != a.n() {
        return Err(Error::DimensionMismatch {
            context: "cayley_commutator_identity: R must be dim(B) x dim(A)",
            expected: b.n() * a.n(),
            found: r.rows() * r.cols(),
        });
    }
    let ea = eigh(a);
    let eb = eigh(b);
    let u = func_calc(|x| C64::new(x, -1.0) / C64::new(x, 1.0), &ea)?;
    let v = func_calc(|x| C64::new(x, -1.0) / C64::new(x, 1.0), &eb)?;
    let lhs = &(&v * r) - &(r * &u);
    let comm = &(b.as_matrix() * r) - &(r * a.as_matrix());
    let rhs = (&(&resolvent(&eb) * &comm) * &resolvent(&ea)).scale(I * 2.0);
    Ok(IdentityResidual {
        residual: (&lhs - &rhs).frobenius_norm(),
        scale: 1.0 + r.frobenius_norm(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainIdentity {
    pub residual: f64,
    pub scale: f64,
    /// Trace norm of −K(A + K + iI)^{-1}K(A + iI)^{-1}.
    pub s1_norm: f64,
}

/// K(A + K + iI)^{-1} − K(A + iI)^{-1} = −K(A + K + iI)^{-1}K(A + iI)^{-1}.
pub fn chain_identity(a: &HermitianMatrix, k: &HermitianMatrix) -> Result<ChainIdentity> {
    same_dim(a, k, "chain_identity")?;
    let km = k.as_matrix();
    let ra = resolvent(&eigh(a));
    let rb = resolvent(&eigh(&a.add_scaled(1.0, k)));
    let kb = km * &rb;
    let lhs = &kb - &(km * &ra);
    let rhs = -&(&(&kb * km) * &ra);
    let kf = km.frobenius_norm();
    Ok(ChainIdentity {
        residual: (&lhs - &rhs).frobenius_norm(),
        scale: 1.0 + kf * (1.0 + kf),
        s1_norm: norms(&rhs).trace,
    })
}

/// Increments of s ↦ f(A + sK) in operator norm and of
/// s ↦ K(A + sK + iI)^{-1} in trace norm along a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityReport {
    pub op_moduli: Vec<f64>,
    pub s1_moduli: Vec<f64>,
    /// max modulus / Δs in each channel.
    pub lipschitz_op: f64,
    pub lipschitz_s1: f64,
}

pub fn continuity_probe(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    k: &HermitianMatrix,
    s_grid: &[f64],
) -> Result<ContinuityReport> {
    same_dim(a, k, "continuity_probe")?;
    if s_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("continuity_probe: s_grid must be strictly ascending"));
    }
    let km = k.as_matrix();
    let mut fs = Vec::with_capacity(s_grid.len());
    let mut cs = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let e = eigh(&a.add_scaled(s, k));
        fs.push(func_calc(|x| f.eval(x), &e)?);
        cs.push(km * &resolvent(&e));
    }
    let mut report = ContinuityReport {
        op_moduli: Vec::new(),
        s1_moduli: Vec::new(),
        lipschitz_op: 0.0,
        lipschitz_s1: 0.0,
    };
    for i in 1..s_grid.len() {
        let ds = s_grid[i] - s_grid[i - 1];
        let op = norms(&(&fs[i] - &fs[i - 1])).op;
        let s1 = norms(&(&cs[i] - &cs[i - 1])).trace;
        report.lipschitz_op = report.lipschitz_op.max(op / ds);
        report.lipschitz_s1 = report.lipschitz_s1.max(s1 / ds);
        report.op_moduli.push(op);
        report.s1_moduli.push(s1);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{gaussian_matrix, wigner};
    use crate::linalg::re;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn pair_examples() {
        let a = wigner(4, 1.0, &mut seeded_rng(1));
        let p = make_pair(&a, &HermitianMatrix::zeros(4)).unwrap();
        assert_eq!(p.c.max_abs(), 0.0);
        assert_eq!(p.g.max_abs(), 0.0);
        assert_eq!(p.c_trace_norm, 0.0);

        let p = make_pair(&HermitianMatrix::zeros(3), &HermitianMatrix::identity(3)).unwrap();
        assert!((&p.c - &Matrix::identity(3).scale(-I)).max_abs() < 1e-15);
        assert!((&p.g - &Matrix::identity(3)).max_abs() < 1e-15);

        let a = HermitianMatrix::from_real_diag(&[0.0, 1.0, -2.0]);
        let k = HermitianMatrix::from_real_diag(&[2.0, -1.0, 0.5]);
        let p = make_pair(&a, &k).unwrap();
        for (j, (aj, kj)) in [(0.0, 2.0), (1.0, -1.0), (-2.0, 0.5)].iter().enumerate() {
            assert!(close(p.c[(j, j)], re(*kj) / C64::new(*aj, 1.0), 1e-15));
        }
        let (r1, r2) = p.residuals();
        assert!(r1 < 1e-14 && r2 < 1e-14);
    }

    #[test]
    fn domination_examples() {
        let a = wigner(5, 1.0, &mut seeded_rng(2));
        let zero = HermitianMatrix::zeros(5);
        let r = domination_check(&a, &zero, 0.5, 0.5, 50, 7).unwrap();
        assert_eq!(r.max_violation, 0.0);
        assert_eq!(r.implication_holds, Some(true));

        let r = domination_check(&a, &a, 0.1, 0.999, 50, 7).unwrap();
        assert_eq!(r.max_violation, 0.0);
        assert_eq!(r.implication_holds, Some(true));

        let r = domination_check(&a, &a, 0.0, 0.0, 10, 7).unwrap();
        assert!(r.max_violation > 0.0);
        assert_eq!(r.implication_holds, None);

        assert!(domination_check(&a, &a, 0.1, 1.0, 10, 7).is_err());
        assert!(domination_check(&a, &a, 0.1, 0.5, 0, 7).is_err());
    }

    #[test]
    fn commuting_probe_is_clean() {
        let mut rng = seeded_rng(3);
        let a = wigner(4, 1.0, &mut rng);
        let p = commutator_probe(&ScalarFunction::Arctan, &a, &a, &Matrix::identity(4)).unwrap();
        assert_eq!(p.ratio_b.value, 0.0);
        assert_eq!(p.ratio_c.value, 0.0);
        assert!(!p.ratio_b.flagged && !p.ratio_c.flagged);
    }

    #[test]
    fn linear_ratio_matches_direct_evaluation() {
        let mut rng = seeded_rng(4);
        let a = wigner(5, 2.0, &mut rng);
        let r = gaussian_matrix(5, 5, &mut rng);
        let f = ScalarFunction::poly(alloc::vec![0.5, -3.0]);
        let p = commutator_probe(&f, &a, &a, &r).unwrap();
        let comm = &(a.as_matrix() * &r) - &(&r * a.as_matrix());
        let expect = 3.0 * norms(&comm).op / norms(&(&comm * &resolvent(&eigh(&a)))).op;
        assert!((p.ratio_b.value - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn block_dilation_matches_quasi_commutator() {
        let mut rng = seeded_rng(5);
        let a = wigner(4, 1.0, &mut rng);
        let b = wigner(4, 1.5, &mut rng);
        let r = gaussian_matrix(4, 4, &mut rng);
        let f = ScalarFunction::standard_resolvent();
        let p = commutator_probe(&f, &a, &b, &r).unwrap();
        let (big_a, big_r) = block_dilation(&a, &b, &r).unwrap();
        let q = commutator_probe(&f, &big_a, &big_a, &big_r).unwrap();
        // The dilation resolvent is blockdiag((A+i)^{-1}, (B+i)^{-1}); only the
        // (A+i)^{-1} factor meets the lower-left block.
        assert!((p.ratio_c.numerator - q.ratio_b.numerator).abs() < 1e-10);
        assert!((p.ratio_c.denominator - q.ratio_b.denominator).abs() < 1e-10);
    }

    #[test]
    fn cayley_identity_scalar() {
        let (a, b) = (0.3, -1.7);
        let r = cayley_commutator_identity(
            &HermitianMatrix::from_real_diag(&[a]),
            &HermitianMatrix::from_real_diag(&[b]),
            &Matrix::identity(1),
        )
        .unwrap();
        assert!(r.residual < 1e-15);
        let cay = |x: f64| C64::new(x, -1.0) / C64::new(x, 1.0);
        let rhs = I * 2.0 * (b - a) / (C64::new(a, 1.0) * C64::new(b, 1.0));
        assert!(close(cay(b) - cay(a), rhs, 1e-15));
    }

    #[test]
    fn cayley_identity_random_and_commuting() {
        let mut rng = seeded_rng(6);
        let a = wigner(8, 3.0, &mut rng);
        let b = wigner(8, 3.0, &mut rng);
        let r = gaussian_matrix(8, 8, &mut rng);
        let res = cayley_commutator_identity(&a, &b, &r).unwrap();
        assert!(res.relative() <= 1e-10, "{}", res.relative());

        let poly = func_calc(|x| re(x * x - 1.0), &eigh(&a)).unwrap();
        let res = cayley_commutator_identity(&a, &a, &poly).unwrap();
        assert!(res.relative() <= 1e-12);
    }

    #[test]
    fn chain_identity_examples() {
        let a = wigner(3, 1.0, &mut seeded_rng(7));
        let c = chain_identity(&a, &HermitianMatrix::zeros(3)).unwrap();
        assert_eq!(c.residual, 0.0);
        assert_eq!(c.s1_norm, 0.0);

        let c = chain_identity(&HermitianMatrix::zeros(1), &HermitianMatrix::identity(1)).unwrap();
        let lhs = re(1.0) / C64::new(1.0, 1.0) - re(1.0) / I;
        let rhs = -(re(1.0) / C64::new(1.0, 1.0)) * (re(1.0) / I);
        assert!(close(lhs, rhs, 1e-15));
        assert!(c.residual < 1e-15);
        assert!((c.s1_norm - rhs.norm()).abs() < 1e-15);

        let mut rng = seeded_rng(8);
        let a = wigner(16, 2.0, &mut rng);
        let k = wigner(16, 0.5, &mut rng);
        let c = chain_identity(&a, &k).unwrap();
        assert!(c.residual <= 1e-10 * c.scale);
    }

    #[test]
    fn continuity_examples() {
        let mut rng = seeded_rng(9);
        let a = wigner(4, 1.0, &mut rng);
        let k = wigner(4, 1.0, &mut rng);
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let zero = continuity_probe(&ScalarFunction::Gauss, &a, &HermitianMatrix::zeros(4), &grid).unwrap();
        assert!(zero.op_moduli.iter().chain(&zero.s1_moduli).all(|m| *m == 0.0));

        let lin = continuity_probe(&ScalarFunction::poly(alloc::vec![1.0, 2.0]), &a, &k, &grid).unwrap();
        let kop = norms(k.as_matrix()).op;
        for m in &lin.op_moduli {
            assert!((m - 2.0 * 0.1 * kop).abs() < 1e-12);
        }

        let grid = [0.0, 0.5, 2.0];
        let one = continuity_probe(
            &ScalarFunction::standard_resolvent(),
            &HermitianMatrix::zeros(1),
            &HermitianMatrix::identity(1),
            &grid,
        )
        .unwrap();
        for (i, m) in one.op_moduli.iter().enumerate() {
            let (s, t) = (grid[i], grid[i + 1]);
            let expect = (t - s) / (C64::new(s, 1.0).norm() * C64::new(t, 1.0).norm());
            assert!((m - expect).abs() < 1e-15);
        }
        assert!(continuity_probe(&ScalarFunction::Gauss, &a, &k, &[0.0, 0.0]).is_err());
    }
}
