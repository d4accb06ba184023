//! Spectral shift functions of finite-dimensional pairs.
//!
//! Two routes to ξ for the pair (A, A + K):
//!
//! * the counting oracle ξ(t) = #{λ(A) ≤ t} − #{λ(A + K) ≤ t}, exact;
//! * the ν-construction: along A_t = A + tK, the complex measures
//!   ν_t(Δ) = trace(E_{A_t}(Δ) K (A_t + iI)^{-1}) = Σ_{λ_j(t) ∈ Δ} w_j(t)/(λ_j(t) + i)
//!   with w_j(t) = ⟨K u_j(t), u_j(t)⟩ are averaged over t ∈ [0, 1] and
//!   ξ(s) = Re((s + i) dν/ds) is read off a histogram of ν.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::doi::{doi, DoiRequest};
use crate::error::{invalid, Error, Result};
use crate::linalg::{eigh, eigh_from_guess, func_calc, EigenSystem, EighOptions, HermitianMatrix, Matrix, C64};
use crate::symbols::{ScalarFunction, Symbol};

/// ∫_a^b dt/(1 + |t|), exact.
pub fn weight_integral(a: f64, b: f64) -> f64 {
    let g = |t: f64| t.signum() * t.abs().ln_1p();
    g(b) - g(a)
}

/// Compactly supported piecewise-constant function: `values[k]` on
/// [breakpoints[k], breakpoints[k+1]), zero outside.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    pub breakpoints: Vec<f64>,
    pub values: Vec<f64>,
}

impl StepFunction {
    pub fn zero() -> Self {
        Self {
            breakpoints: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn value_at(&self, t: f64) -> f64 {
        if self.breakpoints.len() < 2 || t < self.breakpoints[0] {
            return 0.0;
        }
        match self.breakpoints.iter().rposition(|&b| b <= t) {
            Some(k) if k < self.values.len() => self.values[k],
            _ => 0.0,
        }
    }

    /// ∫ |ξ(t)|/(1 + |t|) dt
    pub fn weighted_l1(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| v.abs() * weight_integral(self.breakpoints[k], self.breakpoints[k + 1]))
            .sum()
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        let first = self.values.iter().position(|v| *v != 0.0)?;
        let last = self.values.iter().rposition(|v| *v != 0.0)?;
        Some((self.breakpoints[first], self.breakpoints[last + 1]))
    }
}

/// Eigenvalue-counting spectral shift function of (A, B).
pub fn ssf_oracle(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<StepFunction> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            context: "ssf_oracle",
            expected: a.n(),
            found: b.n(),
        });
    }
    let la = eigh(a).lambdas;
    let lb = eigh(b).lambdas;
    let mut points: Vec<f64> = la.iter().chain(&lb).copied().collect();
    points.sort_by(f64::total_cmp);
    points.dedup();

    let count = |l: &[f64], t: f64| l.iter().filter(|&&x| x <= t).count() as f64;
    let mut breakpoints: Vec<f64> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for w in points.windows(2) {
        let v = count(&la, w[0]) - count(&lb, w[0]);
        if breakpoints.is_empty() {
            breakpoints.push(w[0]);
        } else if values.last() == Some(&v) {
            *breakpoints.last_mut().unwrap() = w[1];
            continue;
        }
        values.push(v);
        breakpoints.push(w[1]);
    }
    // Strip zero runs at the ends so the support is tight.
    while values.first() == Some(&0.0) {
        values.remove(0);
        breakpoints.remove(0);
    }
    while values.last() == Some(&0.0) {
        values.pop();
        breakpoints.pop();
    }
    if values.is_empty() {
        return Ok(StepFunction::zero());
    }
    Ok(StepFunction { breakpoints, values })
}

/// Parameters of the eigenvalue flow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowOptions {
    /// Overlaps closer than this are ambiguous; resolved by eigenvalue
    /// proximity and flagged.
    pub tie_tol: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self { tie_tol: 1e-6 }
    }
}

/// Eigenvalue trajectories and weights along A_t = A + tK.
///
/// `lambdas[k][j]` and `weights[k][j]` belong to trajectory j at `t_grid[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenFlow {
    pub t_grid: Vec<f64>,
    pub lambdas: Vec<Vec<f64>>,
    pub weights: Vec<Vec<f64>>,
    /// Indices k of steps t_{k-1} → t_k where matching was ambiguous.
    pub flagged_steps: Vec<usize>,
    pub trace_k: f64,
    pub k_op_norm: f64,
}

impl EigenFlow {
    pub fn trajectories(&self) -> usize {
        self.lambdas.first().map_or(0, Vec::len)
    }

    /// Max violation of |λ_j(t_{k+1}) − λ_j(t_k)| ≤ ‖K‖(t_{k+1} − t_k) + 1e-8
    /// and of Σ_j w_j(t) = trace K; both are ≤ 0 for a valid flow.
    pub fn invariant_violations(&self) -> (f64, f64) {
        let mut lip: f64 = f64::NEG_INFINITY;
        for k in 1..self.t_grid.len() {
            let dt = self.t_grid[k] - self.t_grid[k - 1];
            for j in 0..self.trajectories() {
                let step = (self.lambdas[k][j] - self.lambdas[k - 1][j]).abs();
                lip = lip.max(step - self.k_op_norm * dt - 1e-8);
            }
        }
        let tol = 1e-8 * (1.0 + self.trace_k.abs());
        let sum = self
            .weights
            .iter()
            .map(|w| (w.iter().sum::<f64>() - self.trace_k).abs() - tol)
            .fold(f64::NEG_INFINITY, f64::max);
        (lip, sum)
    }
}

pub fn eigen_flow(a: &HermitianMatrix, k: &HermitianMatrix, steps: usize) -> Result<EigenFlow> {
    eigen_flow_with(a, k, steps, &FlowOptions::default())
}

pub fn eigen_flow_with(
    a: &HermitianMatrix,
    k: &HermitianMatrix,
    steps: usize,
    opts: &FlowOptions,
) -> Result<EigenFlow> {
    if a.n() != k.n() {
        return Err(Error::DimensionMismatch {
            context: "eigen_flow",
            expected: a.n(),
            found: k.n(),
        });
    }
    if steps < 2 {
        return Err(invalid("eigen_flow: steps must be at least 2"));
    }
    let n = a.n();
    let km = k.as_matrix();
    let trace_k = km.trace().re;
    let k_op_norm = crate::linalg::norms(km).op;

    let t_grid: Vec<f64> = (0..=steps).map(|s| s as f64 / steps as f64).collect();
    let weights_of = |e: &EigenSystem| -> Vec<f64> {
        (0..n)
            .map(|j| {
                let u = e.eigenvector(j);
                let ku = km.mul_vec(&u);
                u.iter().zip(&ku).map(|(x, y)| x.conj() * y).sum::<C64>().re
            })
            .collect()
    };

    let e0 = eigh(a);
    let mut lambdas = vec![e0.lambdas.clone()];
    let mut weights = vec![weights_of(&e0)];
    let mut vectors: Vec<Vec<C64>> = (0..n).map(|j| e0.eigenvector(j)).collect();
    let mut flagged_steps = Vec::new();
    let mut basis = e0.u.clone();
    let eig_opts = EighOptions::default();

    for (step, &t) in t_grid.iter().enumerate().skip(1) {
        // Neighbouring points on the path are nearly diagonal in the previous basis.
        let e = eigh_from_guess(&a.add_scaled(t, k), &basis, &eig_opts);
        basis = e.u.clone();
        let w = weights_of(&e);
        let (assign, ambiguous) = match_trajectories(&vectors, &lambdas[step - 1], &e, opts.tie_tol);
        if ambiguous {
            flagged_steps.push(step);
        }
        let mut lam = vec![0.0; n];
        let mut wt = vec![0.0; n];
        for j in 0..n {
            let l = assign[j];
            lam[j] = e.lambdas[l];
            wt[j] = w[l];
            vectors[j] = e.eigenvector(l);
        }
        lambdas.push(lam);
        weights.push(wt);
    }

    Ok(EigenFlow {
        t_grid,
        lambdas,
        weights,
        flagged_steps,
        trace_k,
        k_op_norm,
    })
}

/// d/dt trace f(A_t) at grid point k, as Σ_j f′(λ_j(t)) w_j(t).
pub fn trace_derivative(f: &ScalarFunction, flow: &EigenFlow, k: usize) -> C64 {
    flow.lambdas[k]
        .iter()
        .zip(&flow.weights[k])
        .map(|(&l, &w)| f.deriv(l) * w)
        .sum()
}

/// Greedy matching of previous eigenvectors to new ones by overlap modulus.
/// Returns assign[j] = index of the new eigenpair continuing trajectory j.
fn match_trajectories(prev: &[Vec<C64>], prev_lambda: &[f64], next: &EigenSystem, tie_tol: f64) -> (Vec<usize>, bool) {
    let n = prev.len();
    let mut overlap = vec![0.0; n * n];
    for (j, v) in prev.iter().enumerate() {
        for l in 0..n {
            let dot: C64 = (0..n).map(|i| v[i].conj() * next.u[(i, l)]).sum();
            overlap[j * n + l] = dot.norm();
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..n).map(move |l| (j, l))).collect();
    let dist = |j: usize, l: usize| (prev_lambda[j] - next.lambdas[l]).abs();
    pairs.sort_by(|&(j1, l1), &(j2, l2)| {
        overlap[j2 * n + l2]
            .total_cmp(&overlap[j1 * n + l1])
            .then(dist(j1, l1).total_cmp(&dist(j2, l2)))
            .then((j1, l1).cmp(&(j2, l2)))
    });

    let mut assign = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    let mut ambiguous = false;
    let mut done = 0;
    let mut idx = 0;
    while done < n && idx < pairs.len() {
        let (j, l) = pairs[idx];
        idx += 1;
        if assign[j] != usize::MAX || taken[l] {
            continue;
        }
        let best = overlap[j * n + l];
        // Competing free candidates for the same row or column within the tie
        // tolerance: pick the one closest in eigenvalue.
        let mut choice = (j, l);
        for &(j2, l2) in &pairs[idx..] {
            let o = overlap[j2 * n + l2];
            if best - o > tie_tol {
                break;
            }
            if assign[j2] != usize::MAX || taken[l2] || (j2 != j && l2 != l) {
                continue;
            }
            if best > tie_tol {
                ambiguous = true;
            }
            if dist(j2, l2) < dist(choice.0, choice.1) {
                choice = (j2, l2);
            }
        }
        let (j, l) = choice;
        assign[j] = l;
        taken[l] = true;
        done += 1;
        if choice != pairs[idx - 1] {
            idx -= 1;
        }
    }
    (assign, ambiguous)
}

/// Histogram estimate of ν and the derived ξ̂ on fixed-width bins.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralShiftProfile {
    /// bins + 1 ascending edges.
    pub edges: Vec<f64>,
    /// Complex ν-mass per bin.
    pub mass: Vec<C64>,
    /// ξ̂ = Re((s_center + i)·mass/width) per bin.
    pub xi: Vec<f64>,
    /// ∫ |Im((s + i)·dν/ds)| ds over the histogram; vanishes in the limit.
    pub imag_residual: f64,
}

impl SpectralShiftProfile {
    pub fn bins(&self) -> usize {
        self.xi.len()
    }

    pub fn width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    pub fn center(&self, b: usize) -> f64 {
        0.5 * (self.edges[b] + self.edges[b + 1])
    }

    pub fn weighted_l1(&self) -> f64 {
        self.xi
            .iter()
            .enumerate()
            .map(|(b, v)| v.abs() * weight_integral(self.edges[b], self.edges[b + 1]))
            .sum()
    }

    /// ∫ |ξ̂(t) − ξ(t)|/(1 + |t|) dt, exact for the piecewise-constant pair.
    pub fn weighted_l1_distance(&self, oracle: &StepFunction) -> f64 {
        let mut cuts: Vec<f64> = self.edges.clone();
        cuts.extend(oracle.breakpoints.iter().copied());
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let diff = (self.value_at(mid) - oracle.value_at(mid)).abs();
            if diff != 0.0 {
                total += diff * weight_integral(w[0], w[1]);
            }
        }
        total
    }

    pub fn value_at(&self, t: f64) -> f64 {
        let n = self.bins();
        if n == 0 || t < self.edges[0] || t >= self.edges[n] {
            return 0.0;
        }
        let b = ((t - self.edges[0]) / self.width()).floor() as usize;
        self.xi[b.min(n - 1)]
    }

    /// ξ̂ + c on the histogram range.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            xi: self.xi.iter().map(|v| v + c).collect(),
            ..self.clone()
        }
    }
}

pub fn ssf_from_flow(flow: &EigenFlow, bins: usize) -> Result<SpectralShiftProfile> {
    if bins < 3 {
        return Err(invalid("ssf_from_flow: bins must be at least 3"));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for row in &flow.lambdas {
        for &l in row {
            lo = lo.min(l);
            hi = hi.max(l);
        }
    }
    if !lo.is_finite() {
        return Err(invalid("ssf_from_flow: empty flow"));
    }
    // One padding bin on each side of the swept range.
    let span = (hi - lo).max(1e-12 * (1.0 + lo.abs()));
    let width = span / (bins - 2) as f64;
    let start = lo - width;
    let edges: Vec<f64> = (0..=bins).map(|b| start + b as f64 * width).collect();
    let bin_of = |x: f64| (((x - start) / width).floor() as usize).min(bins - 1);

    let mut mass = vec![C64::new(0.0, 0.0); bins];
    for j in 0..flow.trajectories() {
        for k in 1..flow.t_grid.len() {
            let dt = flow.t_grid[k] - flow.t_grid[k - 1];
            let (l0, l1) = (flow.lambdas[k - 1][j], flow.lambdas[k][j]);
            let w = 0.5 * (flow.weights[k - 1][j] + flow.weights[k][j]);
            if w == 0.0 {
                continue;
            }
            let mid = 0.5 * (l0 + l1);
            let m = C64::new(w * dt, 0.0) / C64::new(mid, 1.0);
            let (a, b) = if l0 <= l1 { (l0, l1) } else { (l1, l0) };
            let (ba, bb) = (bin_of(a), bin_of(b));
            if ba == bb || b - a <= 0.0 {
                mass[ba] += m;
                continue;
            }
            // Spread the step's mass over the bins the segment crosses.
            let len = b - a;
            for (bin, slot) in mass.iter_mut().enumerate().take(bb + 1).skip(ba) {
                let overlap = b.min(edges[bin + 1]) - a.max(edges[bin]);
                if overlap > 0.0 {
                    *slot += m * (overlap / len);
                }
            }
        }
    }

    let mut xi = Vec::with_capacity(bins);
    let mut imag_residual = 0.0;
    for (b, m) in mass.iter().enumerate() {
        let s = 0.5 * (edges[b] + edges[b + 1]);
        let v = C64::new(s, 1.0) * (m / width);
        xi.push(v.re);
        imag_residual += v.im.abs() * width;
    }
    Ok(SpectralShiftProfile {
        edges,
        mass,
        xi,
        imag_residual,
    })
}

/// Result of comparing two sides of a trace identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceCheck {
    pub lhs: C64,
    pub rhs: C64,
    pub abs_error: f64,
}

impl TraceCheck {
    fn new(lhs: C64, rhs: C64) -> Self {
        Self {
            lhs,
            rhs,
            abs_error: (lhs - rhs).norm(),
        }
    }
}

/// Something that can be integrated against f′.
pub trait SpectralShift {
    /// ∫ f′(t) ξ(t) dt
    fn integrate_derivative(&self, f: &ScalarFunction) -> C64;
}

impl SpectralShift for StepFunction {
    fn integrate_derivative(&self, f: &ScalarFunction) -> C64 {
        self.values
            .iter()
            .enumerate()
            .map(|(k, v)| (f.eval(self.breakpoints[k + 1]) - f.eval(self.breakpoints[k])) * *v)
            .sum()
    }
}

impl SpectralShift for SpectralShiftProfile {
    fn integrate_derivative(&self, f: &ScalarFunction) -> C64 {
        let w = self.width();
        self.xi
            .iter()
            .enumerate()
            .map(|(b, v)| f.deriv(self.center(b)) * (*v * w))
            .sum()
    }
}

/// trace(f(A + K) − f(A)) against ∫ f′ ξ.
pub fn trace_formula_check(
    f: &ScalarFunction,
    a: &HermitianMatrix,
    k: &HermitianMatrix,
    xi: &dyn SpectralShift,
) -> Result<TraceCheck> {
    if a.n() != k.n() {
        return Err(Error::DimensionMismatch {
            context: "trace_formula_check",
            expected: a.n(),
            found: k.n(),
        });
    }
    let fb = func_calc(|x| f.eval(x), &eigh(&a.add_scaled(1.0, k)))?;
    let fa = func_calc(|x| f.eval(x), &eigh(a))?;
    let lhs = (&fb - &fa).trace();
    Ok(TraceCheck::new(lhs, xi.integrate_derivative(f)))
}

/// trace(∬ Φ dE T dE) against Σ_j Φ(λ_j, λ_j)⟨T u_j, u_j⟩.
pub fn diag_trace_identity(phi: &Symbol, e: &EigenSystem, t: &Matrix) -> Result<TraceCheck> {
    let lhs = doi(&DoiRequest::new(phi, e, e, t)?)?.trace();
    let mut rhs = C64::new(0.0, 0.0);
    for (j, &l) in e.lambdas.iter().enumerate() {
        let u = e.eigenvector(j);
        let tu = t.mul_vec(&u);
        let mu: C64 = u.iter().zip(&tu).map(|(x, y)| x.conj() * y).sum();
        rhs += phi.try_eval(l, l)? * mu;
    }
    Ok(TraceCheck::new(lhs, rhs))
}
