//! Scalar functions and the two-variable symbols built from them.
//!
//! A [`ScalarFunction`] carries its own derivative, so the divided difference
//! can switch to `f'` on the diagonal without numerical differentiation.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::linalg::{c, re, C64, I};

/// A registered scalar function f: ℝ → ℂ together with f′.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarFunction {
    /// 1/(x + z), Im z ≠ 0.
    Resolvent { z: C64 },
    /// num(x)/den(x), coefficients in ascending powers; den has no real zero.
    Rational { num: Vec<f64>, den: Vec<f64> },
    Arctan,
    /// e^{-x²}
    Gauss,
    /// Polynomial with ascending coefficients. Unbounded unless constant.
    Poly { coeffs: Vec<f64> },
    /// e^{iτx}/(x + i)
    ExpResolvent { tau: f64 },
}

impl ScalarFunction {
    pub fn resolvent(z: C64) -> Result<Self> {
        if z.im == 0.0 || !z.im.is_finite() || !z.re.is_finite() {
            return Err(Error::RealPole { at: -z.re });
        }
        Ok(Self::Resolvent { z })
    }

    /// 1/(x + i)
    pub fn standard_resolvent() -> Self {
        Self::Resolvent { z: I }
    }

    pub fn rational(num: Vec<f64>, den: Vec<f64>) -> Result<Self> {
        let den_t = poly::trimmed(&den);
        if den_t.is_empty() {
            return Err(invalid("rational: zero denominator"));
        }
        if num.iter().chain(&den).any(|x| !x.is_finite()) {
            return Err(invalid("rational: non-finite coefficient"));
        }
        if let Some(at) = poly::smallest_real_root(&den_t) {
            return Err(Error::RealPole { at });
        }
        Ok(Self::Rational { num, den })
    }

    pub fn poly(coeffs: Vec<f64>) -> Self {
        Self::Poly { coeffs }
    }

    /// The built-in set used for property and acceptance checks: functions
    /// with poles off ℝ, a few smooth bounded functions, and x² as the
    /// unbounded, non-relatively-Lipschitz member.
    pub fn registry() -> Vec<ScalarFunction> {
        vec![
            Self::standard_resolvent(),
            Self::Resolvent { z: c(-1.0, 0.5) },
            Self::Rational {
                num: vec![1.0],
                den: vec![1.0, 0.0, 1.0],
            },
            Self::Rational {
                num: vec![0.0, 1.0],
                den: vec![2.0, 0.0, 1.0],
            },
            Self::Arctan,
            Self::Gauss,
            Self::ExpResolvent { tau: 1.0 },
            Self::Poly {
                coeffs: vec![0.0, 0.0, 1.0],
            },
        ]
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Resolvent { .. } => "resolvent",
            Self::Rational { .. } => "rational",
            Self::Arctan => "arctan",
            Self::Gauss => "gauss",
            Self::Poly { .. } => "poly",
            Self::ExpResolvent { .. } => "expres",
        }
    }

    pub fn eval(&self, x: f64) -> C64 {
        match self {
            Self::Resolvent { z } => (re(x) + z).inv(),
            Self::Rational { num, den } => re(poly::eval(num, x) / poly::eval(den, x)),
            Self::Arctan => re(x.atan()),
            Self::Gauss => re((-x * x).exp()),
            Self::Poly { coeffs } => re(poly::eval(coeffs, x)),
            Self::ExpResolvent { tau } => c(0.0, tau * x).exp() / c(x, 1.0),
        }
    }

    pub fn deriv(&self, x: f64) -> C64 {
        match self {
            Self::Resolvent { z } => {
                let w = re(x) + z;
                -(w * w).inv()
            }
            Self::Rational { num, den } => {
                let n = poly::eval(num, x);
                let d = poly::eval(den, x);
                let dn = poly::eval_deriv(num, x);
                let dd = poly::eval_deriv(den, x);
                re((dn * d - n * dd) / (d * d))
            }
            Self::Arctan => re(1.0 / (1.0 + x * x)),
            Self::Gauss => re(-2.0 * x * (-x * x).exp()),
            Self::Poly { coeffs } => re(poly::eval_deriv(coeffs, x)),
            Self::ExpResolvent { tau } => {
                let e = c(0.0, tau * x).exp();
                let w = c(x, 1.0);
                e * c(0.0, *tau) / w - e / (w * w)
            }
        }
    }

    pub fn limit_at_infinity(&self) -> Option<C64> {
        match self {
            Self::Resolvent { .. } | Self::Gauss | Self::ExpResolvent { .. } => Some(re(0.0)),
            Self::Rational { num, den } => {
                let n = poly::trimmed(num);
                let d = poly::trimmed(den);
                if n.len() < d.len() {
                    Some(re(0.0))
                } else if n.len() == d.len() {
                    Some(re(n[n.len() - 1] / d[d.len() - 1]))
                } else {
                    None
                }
            }
            Self::Arctan => None,
            Self::Poly { coeffs } => match poly::trimmed(coeffs).as_slice() {
                [] => Some(re(0.0)),
                [c0] => Some(re(*c0)),
                _ => None,
            },
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            Self::Poly { coeffs } => poly::trimmed(coeffs).len() <= 1,
            Self::Rational { num, den } => poly::trimmed(num).len() <= poly::trimmed(den).len(),
            _ => true,
        }
    }

    /// Builds a boxed evaluator, convenient for passing to the functional
    /// calculus.
    pub fn evaluator(&self) -> impl Fn(f64) -> C64 + '_ {
        move |x| self.eval(x)
    }
}

/// Threshold below which two arguments of a divided difference are treated
/// as coincident.
#[inline]
pub fn coincidence_threshold(x: f64, y: f64) -> f64 {
    1e-7 * (1.0 + x.abs() + y.abs())
}

type Eval2 = dyn Fn(f64, f64) -> C64 + Send + Sync;

/// A function Φ(x, y) on ℝ², sampled on pairs of eigenvalues by the double
/// operator integral.
#[derive(Clone)]
pub struct Symbol {
    label: String,
    eval: Arc<Eval2>,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol").field("label", &self.label).finish()
    }
}

impl Symbol {
    pub fn new(label: impl Into<String>, f: impl Fn(f64, f64) -> C64 + Send + Sync + 'static) -> Self {
        Self {
            label: label.into(),
            eval: Arc::new(f),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> C64 {
        (self.eval)(x, y)
    }

    pub fn try_eval(&self, x: f64, y: f64) -> Result<C64> {
        let v = self.eval(x, y);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::SymbolNotFinite { x, y })
        }
    }

    pub fn check_finite(&self, probes: &[(f64, f64)]) -> Result<()> {
        probes.iter().try_for_each(|&(x, y)| self.try_eval(x, y).map(|_| ()))
    }

    pub fn constant(value: C64) -> Self {
        Self::new(format!("const({value})"), move |_, _| value)
    }

    /// Separated symbol Σ_n φ_n(x) ψ_n(y).
    pub fn separated(terms: Vec<(Box<dyn Fn(f64) -> C64 + Send + Sync>, Box<dyn Fn(f64) -> C64 + Send + Sync>)>) -> Self {
        Self::new("separated", move |x, y| {
            terms.iter().map(|(phi, psi)| phi(x) * psi(y)).sum()
        })
    }
}

/// 𝔇f(x, y) = (f(x) − f(y))/(x − y), and f′((x + y)/2) when x ≈ y.
pub fn divided_difference(f: &ScalarFunction) -> Symbol {
    let f = f.clone();
    Symbol::new(format!("dd[{}]", f.name()), move |x, y| dd_value(&f, x, y))
}

fn dd_value(f: &ScalarFunction, x: f64, y: f64) -> C64 {
    let h = x - y;
    if h.abs() <= coincidence_threshold(x, y) {
        f.deriv(0.5 * (x + y))
    } else {
        (f.eval(x) - f.eval(y)) / h
    }
}

/// Weights applied to the divided difference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    /// 𝔇f(x, y)·(y + i)
    I,
    /// 𝔇f(x, y)·(y² + 1)^{1/2}
    II,
    /// 𝔇f(x, y)·(x + i)(y + i)
    Resolvent,
}

pub fn weight_symbol(f: &ScalarFunction, kind: Weight) -> Symbol {
    let f = f.clone();
    let label = format!("dd{:?}[{}]", kind, f.name());
    match kind {
        Weight::I => Symbol::new(label, move |x, y| dd_value(&f, x, y) * c(y, 1.0)),
        Weight::II => Symbol::new(label, move |x, y| dd_value(&f, x, y) * (y * y + 1.0).sqrt()),
        Weight::Resolvent => {
            Symbol::new(label, move |x, y| dd_value(&f, x, y) * c(x, 1.0) * c(y, 1.0))
        }
    }
}

/// Grid suprema of the three growth quotients:
/// c_a of |f(s) − f(t)|(1 + |t|)/|s − t|,
/// c_b of |f(s) − f(t)|(1 + |s| + |t|)/|s − t|,
/// c_c of |(s + i)f(s) − (t + i)f(t)|/|s − t|.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthConstants {
    pub c_a: f64,
    pub c_b: f64,
    pub c_c: f64,
}

pub fn growth_check(f: &ScalarFunction, grid: &[f64]) -> Result<GrowthConstants> {
    let values: Vec<C64> = grid.iter().map(|&x| f.eval(x)).collect();
    let mut out = GrowthConstants {
        c_a: 0.0,
        c_b: 0.0,
        c_c: 0.0,
    };
    let mut distinct = false;
    for (i, &s) in grid.iter().enumerate() {
        for (j, &t) in grid.iter().enumerate() {
            let h = (s - t).abs();
            if h == 0.0 {
                continue;
            }
            distinct = true;
            let diff = (values[i] - values[j]).norm();
            out.c_a = out.c_a.max(diff * (1.0 + t.abs()) / h);
            out.c_b = out.c_b.max(diff * (1.0 + s.abs() + t.abs()) / h);
            if j > i {
                let cc = (c(s, 1.0) * values[i] - c(t, 1.0) * values[j]).norm() / h;
                out.c_c = out.c_c.max(cc);
            }
        }
    }
    if !distinct {
        return Err(invalid("growth_check: grid needs two distinct points"));
    }
    Ok(out)
}

/// −10..10 in steps of 0.1 plus ±10^k for k = 1..=4 and a few intermediate
/// far points, so that growth at infinity is visible.
pub fn default_growth_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (-100..=100).map(|k| k as f64 * 0.1).collect();
    for far in [20.0, 50.0, 100.0, 300.0, 1000.0, 3000.0, 10000.0] {
        g.push(far);
        g.push(-far);
        g.push(far + 1.0);
        g.push(-far - 1.0);
    }
    g
}

/// φ(ζ) = f(i(1 + ζ)/(1 − ζ)) on the unit circle.
#[derive(Clone, Debug)]
pub struct CayleyLift {
    f: ScalarFunction,
}

pub fn cayley_lift(f: &ScalarFunction) -> CayleyLift {
    CayleyLift { f: f.clone() }
}

impl CayleyLift {
    pub fn eval(&self, zeta: C64) -> Result<C64> {
        if (zeta - re(1.0)).norm() <= 1e-14 {
            return self.f.limit_at_infinity().ok_or(Error::NoLimitAtInfinity);
        }
        let x = I * (re(1.0) + zeta) / (re(1.0) - zeta);
        Ok(self.f.eval(x.re))
    }
}

/// Small dense polynomial toolkit (ascending coefficients) used to reject
/// rational functions with real poles.
pub(crate) mod poly {
    use alloc::vec::Vec;

    pub fn eval(p: &[f64], x: f64) -> f64 {
        p.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_deriv(p: &[f64], x: f64) -> f64 {
        p.iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * x + k as f64 * c)
    }

    fn max_abs(p: &[f64]) -> f64 {
        p.iter().fold(0.0, |m: f64, c| m.max(c.abs()))
    }

    /// Drops (numerically) zero leading coefficients.
    pub fn trimmed(p: &[f64]) -> Vec<f64> {
        let scale = max_abs(p);
        let mut v = p.to_vec();
        while let Some(&last) = v.last() {
            if last == 0.0 || last.abs() <= 1e-14 * scale {
                v.pop();
            } else {
                break;
            }
        }
        v
    }

    fn derivative(p: &[f64]) -> Vec<f64> {
        p.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect()
    }

    fn remainder(a: &[f64], b: &[f64]) -> Vec<f64> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        let lead = b[db];
        while r.len() > db {
            let q = r[r.len() - 1] / lead;
            let shift = r.len() - 1 - db;
            for (k, bc) in b.iter().enumerate() {
                r[shift + k] -= q * bc;
            }
            r.pop();
        }
        let scale = max_abs(a).max(max_abs(b));
        for c in r.iter_mut() {
            if c.abs() <= 1e-11 * scale {
                *c = 0.0;
            }
        }
        trimmed(&r)
    }

    fn sturm_sequence(p: &[f64]) -> Vec<Vec<f64>> {
        let mut seq = alloc::vec![p.to_vec()];
        let d = trimmed(&derivative(p));
        if d.is_empty() {
            return seq;
        }
        seq.push(d);
        loop {
            let k = seq.len();
            let r = remainder(&seq[k - 2], &seq[k - 1]);
            if r.is_empty() {
                break;
            }
            seq.push(r.iter().map(|c| -c).collect());
        }
        seq
    }

    fn sign_changes(values: impl Iterator<Item = f64>) -> usize {
        let mut prev = 0.0;
        let mut count = 0;
        for v in values {
            if v == 0.0 {
                continue;
            }
            if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
                count += 1;
            }
            prev = v;
        }
        count
    }

    fn changes_at(seq: &[Vec<f64>], x: f64) -> usize {
        sign_changes(seq.iter().map(|p| eval(p, x)))
    }

    fn changes_at_infinity(seq: &[Vec<f64>], positive: bool) -> usize {
        sign_changes(seq.iter().map(|p| {
            let lead = p[p.len() - 1];
            let deg = p.len() - 1;
            if positive || deg % 2 == 0 {
                lead
            } else {
                -lead
            }
        }))
    }

    /// Locates the smallest real root (distinct roots counted by a Sturm
    /// sequence, then bisection). `None` if the polynomial has no real root.
    pub fn smallest_real_root(p: &[f64]) -> Option<f64> {
        let p = trimmed(p);
        if p.len() <= 1 {
            return None;
        }
        let seq = sturm_sequence(&p);
        let total = changes_at_infinity(&seq, false) as isize - changes_at_infinity(&seq, true) as isize;
        if total <= 0 {
            return None;
        }
        let lead = p[p.len() - 1];
        let bound = 1.0 + p[..p.len() - 1].iter().fold(0.0, |m: f64, c| m.max((c / lead).abs()));
        let mut lo = -bound - 1.0;
        let mut hi = bound + 1.0;
        let v_lo = changes_at(&seq, lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 1e-13 * (1.0 + mid.abs()) {
                break;
            }
            if v_lo as isize - changes_at(&seq, mid) as isize > 0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        // Newton polish, kept inside a slightly widened bracket.
        let w = hi - lo;
        let mut x = 0.5 * (lo + hi);
        for _ in 0..4 {
            let d = eval_deriv(&p, x);
            if d == 0.0 {
                break;
            }
            let nx = x - eval(&p, x) / d;
            if !(nx >= lo - w && nx <= hi + w) {
                break;
            }
            x = nx;
        }
        Some(x)
    }
}
