//! Walk kernels of a strongly connected digraph.
//!
//! From the out-transition kernel `P(x,y) = μ(x,y)/μ(x)` we compute, all in
//! exact arithmetic: the Perron measure `𝔪` (the unique stationary
//! probability vector of `P`), the reverse kernel
//! `←P(x,y) = 𝔪(y) P(y,x) / 𝔪(x)`, the mean kernel `𝓟 = (P + ←P)/2`, and
//! the symmetric edge weights `𝔪(x,y) = 𝔪(x) 𝓟(x,y)`.  The mean kernel is
//! what drives curvature: it is supported exactly on the union neighborhood
//! `𝒩_x`, and `𝔪(x,y)` is symmetric because both walk directions are
//! averaged against the stationary measure.

use crate::digraph::{VertexId, WeightedDigraph};
use crate::exactnum::{rat, solve_linear_system, LinSolveError, Matrix, Rational};
use num_traits::Zero;
use std::fmt;

/// Errors from kernel construction and measure handling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MarkovError {
    /// The stationary system failed to have a unique positive solution.
    /// Unreachable for validated strongly connected input; reported rather
    /// than silently trusted.
    PerronDegenerate(String),
    /// An argument outside an operation's domain.
    Domain(String),
}

impl fmt::Display for MarkovError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkovError::PerronDegenerate(msg) => write!(f, "Perron solve degenerate: {msg}"),
            MarkovError::Domain(msg) => write!(f, "domain error: {msg}"),
        }
    }
}

impl std::error::Error for MarkovError {}

/// A probability measure on the vertex set, exact and validated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbMeasure {
    weights: Vec<Rational>,
}

impl ProbMeasure {
    /// Wraps nonnegative weights summing to one.
    pub fn from_weights(weights: Vec<Rational>) -> Result<Self, MarkovError> {
        if weights.iter().any(|w| w < &Rational::zero()) {
            return Err(MarkovError::Domain("measure has a negative weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if total != rat(1) {
            return Err(MarkovError::Domain(format!(
                "measure weights sum to {total}, not 1"
            )));
        }
        Ok(ProbMeasure { weights })
    }

    /// The point mass at `x` on an `n`-vertex set.
    pub fn dirac(n: usize, x: VertexId) -> Self {
        let mut weights = vec![Rational::zero(); n];
        weights[x] = rat(1);
        ProbMeasure { weights }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, z: VertexId) -> &Rational {
        &self.weights[z]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    /// Vertices with positive mass, in index order.
    pub fn support(&self) -> Vec<VertexId> {
        (0..self.n()).filter(|&z| !self.weights[z].is_zero()).collect()
    }
}

/// The four kernels and two measures derived from a graph's random walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovData {
    p: Matrix,
    m: Vec<Rational>,
    p_rev: Matrix,
    p_mean: Matrix,
    mxy: Matrix,
}

impl MarkovData {
    pub fn n(&self) -> usize {
        self.m.len()
    }

    /// Out-transition kernel `P(x,y) = μ(x,y)/μ(x)`.
    pub fn p(&self) -> &Matrix {
        &self.p
    }

    /// Perron measure: the unique stationary probability vector, positive
    /// everywhere.
    pub fn perron(&self) -> &[Rational] {
        &self.m
    }

    /// Reverse kernel `←P(x,y) = 𝔪(y) P(y,x) / 𝔪(x)`.
    pub fn p_rev(&self) -> &Matrix {
        &self.p_rev
    }

    /// Mean kernel `𝓟 = (P + ←P)/2`.
    pub fn p_mean(&self) -> &Matrix {
        &self.p_mean
    }

    /// Symmetric weights `𝔪(x,y) = 𝔪(x) 𝓟(x,y)`.
    pub fn mxy(&self) -> &Matrix {
        &self.mxy
    }

    /// Support of the mean kernel's row at `x`, which equals the union
    /// neighborhood `𝒩_x`.
    pub fn mean_neighborhood(&self, x: VertexId) -> Vec<VertexId> {
        (0..self.n())
            .filter(|&y| !self.p_mean.at(x, y).is_zero())
            .collect()
    }

    /// Perron mass of a vertex subset.
    pub fn perron_mass(&self, subset: &[VertexId]) -> Rational {
        subset.iter().map(|&x| &self.m[x]).sum()
    }
}

/// Builds all kernels for a validated graph.
pub fn build_markov(g: &WeightedDigraph) -> Result<MarkovData, MarkovError> {
    let n = g.n();
    let mut p = Matrix::zeros(n, n);
    for x in 0..n {
        let mu_x = g.mu_out(x);
        for &y in g.out_neighbors(x) {
            p.set(x, y, g.mu(x, y) / &mu_x);
        }
    }

    // Stationarity 𝔪ᵀ P = 𝔪ᵀ as the n homogeneous rows (Pᵀ − I) 𝔪 = 0,
    // made inhomogeneous and full-rank by appending Σ 𝔪 = 1.
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n + 1);
    for y in 0..n {
        let mut row: Vec<Rational> = (0..n).map(|x| p.at(x, y).clone()).collect();
        row[y] -= rat(1);
        rows.push(row);
    }
    rows.push(vec![rat(1); n]);
    let a = Matrix::from_rows(rows);
    let mut b = vec![Rational::zero(); n + 1];
    b[n] = rat(1);
    let m = solve_linear_system(&a, &b).map_err(|e| match e {
        LinSolveError::NonUnique => {
            MarkovError::PerronDegenerate("stationary vector is not unique".into())
        }
        other => MarkovError::PerronDegenerate(other.to_string()),
    })?;
    if m.iter().any(|w| w <= &Rational::zero()) {
        return Err(MarkovError::PerronDegenerate(
            "stationary vector is not strictly positive".into(),
        ));
    }

    let mut p_rev = Matrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            let pyx = p.at(y, x);
            if !pyx.is_zero() {
                p_rev.set(x, y, &m[y] * pyx / &m[x]);
            }
        }
    }
    let mut p_mean = Matrix::zeros(n, n);
    let mut mxy = Matrix::zeros(n, n);
    let half = Rational::new(1.into(), 2.into());
    for x in 0..n {
        for y in 0..n {
            let v = (p.at(x, y) + p_rev.at(x, y)) * &half;
            if !v.is_zero() {
                mxy.set(x, y, &m[x] * &v);
                p_mean.set(x, y, v);
            }
        }
    }
    Ok(MarkovData { p, m, p_rev, p_mean, mxy })
}

/// The ε-lazy measure `ν_x^ε`: mass `1−ε` at `x` and `ε 𝓟(x,z)` elsewhere.
pub fn lazy_measure(
    md: &MarkovData,
    x: VertexId,
    eps: &Rational,
) -> Result<ProbMeasure, MarkovError> {
    if eps < &Rational::zero() || eps > &rat(1) {
        return Err(MarkovError::Domain(format!(
            "laziness ε = {eps} is outside [0, 1]"
        )));
    }
    let n = md.n();
    if x >= n {
        return Err(MarkovError::Domain(format!("vertex {x} out of range")));
    }
    let mut weights: Vec<Rational> = (0..n).map(|z| eps * md.p_mean.at(x, z)).collect();
    weights[x] += rat(1) - eps;
    ProbMeasure::from_weights(weights)
}

/// The ε-averaging operator: `(𝒜^ε f)(x) = Σ_z f(z) ν_x^ε(z)`, which equals
/// `f + ε Δf` pointwise.
pub fn averaging_apply(
    md: &MarkovData,
    eps: &Rational,
    f: &[Rational],
) -> Result<Vec<Rational>, MarkovError> {
    if f.len() != md.n() {
        return Err(MarkovError::Domain(format!(
            "function has {} values on {} vertices",
            f.len(),
            md.n()
        )));
    }
    (0..md.n())
        .map(|x| {
            let nu = lazy_measure(md, x, eps)?;
            Ok((0..md.n()).map(|z| nu.weight(z) * &f[z]).sum())
        })
        .collect()
}
