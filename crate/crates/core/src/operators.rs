//! The Chung Laplacian, p-Laplacians, carré du champ operators, and
//! curvature-dimension inequalities.
//!
//! The (positive) Chung Laplacian is `ℒf(x) = f(x) − Σ_y 𝓟(x,y) f(y)`,
//! self-adjoint for the inner product `(f₀,f₁) = Σ_x f₀(x) f₁(x) 𝔪(x)`
//! because the edge weight `𝔪_xy = 𝔪(x) 𝓟(x,y)` is symmetric.  The
//! Bakry-Émery operators `Γ` and `Γ₂` are built from the negative Laplacian
//! `Δ = −ℒ`; each admits a closed form that this module computes separately
//! from the defining composition so the two routes can certify each other.
//! The curvature-dimension inequality `Γ₂(f,f) ≥ ½(Δf)² + k·Γ(f,f)` is
//! checked pointwise for four choices of the constant function `k`.

use crate::digraph::{VertexId, WeightedDigraph};
use crate::exactnum::{rat, rat_to_f64, rational_abs, Matrix, Rational};
use crate::markov::MarkovData;
use num_traits::Zero;
use std::fmt;

/// Errors from operator evaluations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OperatorError {
    /// Arguments outside an operation's domain (p ≤ 1, empty subset,
    /// weighted graph where an unweighted one is required, …).
    Domain(String),
}

impl fmt::Display for OperatorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorError::Domain(msg) => write!(f, "domain error: {msg}"),
        }
    }
}

impl std::error::Error for OperatorError {}

/// The Laplacian matrix `ℒ = I − 𝓟` together with the Perron weights of
/// the inner product it is self-adjoint for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaplacianData {
    l: Matrix,
    inner_weights: Vec<Rational>,
}

impl LaplacianData {
    pub fn build(md: &MarkovData) -> Self {
        let n = md.n();
        let mut l = Matrix::identity(n);
        for x in 0..n {
            for y in 0..n {
                let v = l.at(x, y) - md.p_mean().at(x, y);
                l.set(x, y, v);
            }
        }
        LaplacianData {
            l,
            inner_weights: md.perron().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.l.rows()
    }

    /// The matrix of `ℒ`; rows sum to zero, so constants are harmonic.
    pub fn matrix(&self) -> &Matrix {
        &self.l
    }

    /// Perron weight `𝔪(x)` of the inner product.
    pub fn inner_weight(&self, x: VertexId) -> &Rational {
        &self.inner_weights[x]
    }
}

/// `ℒf`, exactly.
pub fn apply_laplacian(ld: &LaplacianData, f: &[Rational]) -> Vec<Rational> {
    ld.l.mul_vec(f)
}

/// The negative Laplacian `Δf = −ℒf = Σ_y 𝓟(x,y)(f(y) − f(x))`.
pub fn apply_delta(md: &MarkovData, f: &[Rational]) -> Vec<Rational> {
    let n = md.n();
    (0..n)
        .map(|x| {
            (0..n)
                .map(|y| md.p_mean().at(x, y) * (&f[y] - &f[x]))
                .sum()
        })
        .collect()
}

/// The p-Laplacian `ℒ_p f(x) = Σ_y |f(x)−f(y)|^{p−2}(f(x)−f(y)) 𝓟(x,y)`
/// for integer `p ≥ 2`, where it is exactly rational; `ℒ₂ = ℒ`.
pub fn apply_p_laplacian_exact(
    md: &MarkovData,
    f: &[Rational],
    p: u32,
) -> Result<Vec<Rational>, OperatorError> {
    if p < 2 {
        return Err(OperatorError::Domain(
            "exact p-Laplacian requires an integer p ≥ 2".into(),
        ));
    }
    let n = md.n();
    let mut out = Vec::with_capacity(n);
    for x in 0..n {
        let mut acc = Rational::zero();
        for y in 0..n {
            let diff = &f[x] - &f[y];
            if diff.is_zero() {
                continue;
            }
            let magnitude = rational_abs(&diff).pow((p - 1) as i32);
            let signed = if diff > Rational::zero() {
                magnitude
            } else {
                -magnitude
            };
            acc += signed * md.p_mean().at(x, y);
        }
        out.push(acc);
    }
    Ok(out)
}

/// The p-Laplacian for arbitrary real `p > 1`, evaluated in floating point
/// as `sign(t)·|t|^{p−1}` so small differences stay finite for `p < 2`.
pub fn apply_p_laplacian(
    md: &MarkovData,
    f: &[Rational],
    p: f64,
) -> Result<Vec<f64>, OperatorError> {
    if !(p > 1.0) {
        return Err(OperatorError::Domain(format!(
            "p-Laplacian requires p > 1, got {p}"
        )));
    }
    let n = md.n();
    let fv: Vec<f64> = f.iter().map(rat_to_f64).collect();
    let mut out = Vec::with_capacity(n);
    for x in 0..n {
        let mut acc = 0.0;
        for y in 0..n {
            let t = fv[x] - fv[y];
            if t != 0.0 {
                acc += t.signum() * t.abs().powf(p - 1.0) * rat_to_f64(md.p_mean().at(x, y));
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// The Perron inner product `(f₀,f₁) = Σ_x f₀(x) f₁(x) 𝔪(x)`.
pub fn inner_product(ld: &LaplacianData, f0: &[Rational], f1: &[Rational]) -> Rational {
    (0..ld.n())
        .map(|x| &f0[x] * &f1[x] * &ld.inner_weights[x])
        .sum()
}

/// `‖f‖² = (f,f)`; the norm itself is kept squared to stay rational.
pub fn norm_squared(ld: &LaplacianData, f: &[Rational]) -> Rational {
    inner_product(ld, f, f)
}

/// Both sides of the integration-by-parts identity on a subset `Ω`,
/// computed independently:
///
/// `Σ_{x∈Ω} ℒf₀(x) f₁(x) 𝔪(x)
///   = ½ Σ_{x,y∈Ω} (f₀(y)−f₀(x))(f₁(y)−f₁(x)) 𝔪_xy
///     − Σ_{x∈Ω, y∉Ω} (f₀(y)−f₀(x)) f₁(x) 𝔪_xy`.
///
/// With `Ω = V` the boundary term vanishes and the identity becomes
/// `(ℒf₀,f₁) = ½ Σ_{x,y} (f₀(y)−f₀(x))(f₁(y)−f₁(x)) 𝔪_xy`.
pub fn integration_by_parts_check(
    md: &MarkovData,
    omega: &[VertexId],
    f0: &[Rational],
    f1: &[Rational],
) -> Result<(Rational, Rational), OperatorError> {
    let n = md.n();
    if omega.is_empty() {
        return Err(OperatorError::Domain(
            "integration by parts requires a non-empty subset".into(),
        ));
    }
    let mut inside = vec![false; n];
    for &x in omega {
        if x >= n {
            return Err(OperatorError::Domain(format!(
                "subset vertex {x} is out of range"
            )));
        }
        if inside[x] {
            return Err(OperatorError::Domain(format!(
                "subset lists vertex {x} twice"
            )));
        }
        inside[x] = true;
    }
    let ld = LaplacianData::build(md);
    let lf0 = apply_laplacian(&ld, f0);
    let lhs: Rational = omega
        .iter()
        .map(|&x| &lf0[x] * &f1[x] * ld.inner_weight(x))
        .sum();
    let mut dirichlet = Rational::zero();
    let mut boundary = Rational::zero();
    for x in 0..n {
        if !inside[x] {
            continue;
        }
        for y in 0..n {
            let w = md.mxy().at(x, y);
            if w.is_zero() {
                continue;
            }
            let grad0 = &f0[y] - &f0[x];
            if inside[y] {
                dirichlet += &grad0 * (&f1[y] - &f1[x]) * w;
            } else {
                boundary += grad0 * &f1[x] * w;
            }
        }
    }
    Ok((lhs, dirichlet / rat(2) - boundary))
}

fn pointwise_product(f0: &[Rational], f1: &[Rational]) -> Vec<Rational> {
    f0.iter().zip(f1).map(|(a, b)| a * b).collect()
}

/// The carré du champ `Γ(f₀,f₁) = ½(Δ(f₀f₁) − f₀Δf₁ − f₁Δf₀)`, from the
/// defining composition.
pub fn gamma(md: &MarkovData, f0: &[Rational], f1: &[Rational]) -> Vec<Rational> {
    let product = apply_delta(md, &pointwise_product(f0, f1));
    let d1 = apply_delta(md, f1);
    let d0 = apply_delta(md, f0);
    (0..md.n())
        .map(|x| (&product[x] - &f0[x] * &d1[x] - &f1[x] * &d0[x]) / rat(2))
        .collect()
}

/// The iterated operator `Γ₂(f₀,f₁) = ½(ΔΓ(f₀,f₁) − Γ(f₀,Δf₁) − Γ(f₁,Δf₀))`,
/// from the defining composition.
pub fn gamma2(md: &MarkovData, f0: &[Rational], f1: &[Rational]) -> Vec<Rational> {
    let dgamma = apply_delta(md, &gamma(md, f0, f1));
    let g0 = gamma(md, f0, &apply_delta(md, f1));
    let g1 = gamma(md, f1, &apply_delta(md, f0));
    (0..md.n())
        .map(|x| (&dgamma[x] - &g0[x] - &g1[x]) / rat(2))
        .collect()
}

/// `𝒢f(x) = ¼ Σ_{y,z} (f(x) − 2f(y) + f(z))² 𝓟(x,y) 𝓟(y,z)`.
pub fn gcal(md: &MarkovData, f: &[Rational]) -> Vec<Rational> {
    let n = md.n();
    (0..n)
        .map(|x| {
            let mut acc = Rational::zero();
            for y in 0..n {
                let pxy = md.p_mean().at(x, y);
                if pxy.is_zero() {
                    continue;
                }
                for z in 0..n {
                    let pyz = md.p_mean().at(y, z);
                    if pyz.is_zero() {
                        continue;
                    }
                    let second = &f[x] - rat(2) * &f[y] + &f[z];
                    acc += &second * &second * pxy * pyz;
                }
            }
            acc / rat(4)
        })
        .collect()
}

/// Closed form `Γ(f,f)(x) = ½ Σ_y (f(x)−f(y))² 𝓟(x,y)`, computed without
/// going through `Δ`.
pub fn gamma_closed(md: &MarkovData, f: &[Rational]) -> Vec<Rational> {
    let n = md.n();
    (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let diff = &f[x] - &f[y];
                    &diff * &diff * md.p_mean().at(x, y)
                })
                .sum::<Rational>()
                / rat(2)
        })
        .collect()
}

/// Closed form for `ΔΓ(f,f)(x)`: the second-difference double sum minus,
/// for each intermediate vertex `y`, the product of the first difference
/// toward `y` with `y`'s own averaged second difference.
pub fn laplacian_gamma_closed(md: &MarkovData, f: &[Rational]) -> Vec<Rational> {
    let n = md.n();
    (0..n)
        .map(|x| {
            let mut squares = Rational::zero();
            let mut cross = Rational::zero();
            for y in 0..n {
                let pxy = md.p_mean().at(x, y);
                if pxy.is_zero() {
                    continue;
                }
                let mut second_sum = Rational::zero();
                for z in 0..n {
                    let pyz = md.p_mean().at(y, z);
                    if pyz.is_zero() {
                        continue;
                    }
                    let second = &f[x] - rat(2) * &f[y] + &f[z];
                    squares += &second * &second * pxy * pyz;
                    second_sum += second * pyz;
                }
                cross += (&f[x] - &f[y]) * pxy * second_sum;
            }
            squares / rat(2) - cross
        })
        .collect()
}

/// Closed form for `2Γ(f,Δf)(x) = −(Δf(x))² − Σ_y (f(x)−f(y)) 𝓟(x,y)
/// Σ_z (f(z)−f(y)) 𝓟(y,z)`.
pub fn two_gamma_delta_closed(md: &MarkovData, f: &[Rational]) -> Vec<Rational> {
    let n = md.n();
    let df = apply_delta(md, f);
    (0..n)
        .map(|x| {
            let mut cross = Rational::zero();
            for y in 0..n {
                let pxy = md.p_mean().at(x, y);
                if pxy.is_zero() {
                    continue;
                }
                let inner: Rational = (0..n)
                    .map(|z| (&f[z] - &f[y]) * md.p_mean().at(y, z))
                    .sum();
                cross += (&f[x] - &f[y]) * pxy * inner;
            }
            -(&df[x] * &df[x]) - cross
        })
        .collect()
}

/// The triangle function `𝒯(x) = inf_{y ∈ 𝒩_x} |𝒩_x ∩ 𝒩_y|`.
pub fn triangle_fn(md: &MarkovData) -> Vec<usize> {
    let n = md.n();
    (0..n)
        .map(|x| {
            let nx = md.mean_neighborhood(x);
            nx.iter()
                .map(|&y| {
                    let ny = md.mean_neighborhood(y);
                    nx.iter().filter(|z| ny.contains(z)).count()
                })
                .min()
                .expect("mean neighborhoods are non-empty under strong connectivity")
        })
        .collect()
}

/// `inf_{y∈𝒩_x} inf_{z∈𝒩_x∩𝒩_y} 𝓟(y,z)/𝓟(y,x)`, with the convention
/// that empty index sets contribute nothing; if every intersection is
/// empty the infimum is taken to be 0, which is harmless because the term
/// it multiplies also carries the then-vanishing `𝒯(x)`.
fn neighborhood_ratio_inf(md: &MarkovData, x: VertexId) -> Rational {
    let nx = md.mean_neighborhood(x);
    let mut best: Option<Rational> = None;
    for &y in &nx {
        let ny = md.mean_neighborhood(y);
        for &z in &nx {
            if ny.contains(&z) {
                let ratio = md.p_mean().at(y, z) / md.p_mean().at(y, x);
                if best.as_ref().is_none_or(|b| &ratio < b) {
                    best = Some(ratio);
                }
            }
        }
    }
    best.unwrap_or_else(Rational::zero)
}

fn min_inbound_mean(md: &MarkovData, x: VertexId) -> Rational {
    md.mean_neighborhood(x)
        .iter()
        .map(|&y| md.p_mean().at(y, x).clone())
        .min()
        .expect("mean neighborhoods are non-empty under strong connectivity")
}

/// The per-vertex curvature-dimension constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdConstants {
    /// `𝒦(x) = (inf_{y∈𝒩_x} 𝓟(y,x))·{2 + (𝒯(x)/2)·inf ratio} − 1`.
    pub k: Vec<Rational>,
    /// The simpler `𝒦̃(x) = 2 inf_{y∈𝒩_x} 𝓟(y,x) − 1 ≤ 𝒦(x)`.
    pub k_tilde: Vec<Rational>,
}

/// Computes `𝒦` and `𝒦̃` exactly.
pub fn cd_constants(md: &MarkovData) -> CdConstants {
    let n = md.n();
    let tri = triangle_fn(md);
    let mut k = Vec::with_capacity(n);
    let mut k_tilde = Vec::with_capacity(n);
    for x in 0..n {
        let k0 = min_inbound_mean(md, x);
        let k1 = neighborhood_ratio_inf(md, x);
        k.push(&k0 * (rat(2) + frac_of(tri[x]) / rat(2) * k1) - rat(1));
        k_tilde.push(rat(2) * k0 - rat(1));
    }
    CdConstants { k, k_tilde }
}

fn frac_of(n: usize) -> Rational {
    rat(n as i64)
}

/// Constants derived from a global curvature lower bound `inf κ ≥ K`
/// over all ordered pairs of distinct vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KhatConstants {
    /// `𝒦̂(x) = 2K − 3 + ((K−1)/2)·𝒯(x)·inf ratio`.
    pub khat: Vec<Rational>,
    /// The vertex-independent weakening `2K − 3`.
    pub coarse: Rational,
}

/// Computes `𝒦̂` and `2K − 3` from a verified curvature lower bound.
pub fn cd_khat(md: &MarkovData, k_lower: &Rational) -> KhatConstants {
    let n = md.n();
    let tri = triangle_fn(md);
    let khat = (0..n)
        .map(|x| {
            let k1 = neighborhood_ratio_inf(md, x);
            rat(2) * k_lower - rat(3) + (k_lower - rat(1)) / rat(2) * frac_of(tri[x]) * k1
        })
        .collect();
    KhatConstants {
        khat,
        coarse: rat(2) * k_lower - rat(3),
    }
}

/// The unweighted-only constant
/// `𝒦'(x) = min{inf_{y∈N_x} P(y,x), inf_{y∈←N_x} ←P(y,x)} − 1`,
/// never better than `𝒦̃`.
pub fn cd_kprime(
    g: &WeightedDigraph,
    md: &MarkovData,
) -> Result<Vec<Rational>, OperatorError> {
    if !g.classify().unweighted {
        return Err(OperatorError::Domain(
            "𝒦' is only defined for unweighted graphs".into(),
        ));
    }
    Ok((0..g.n())
        .map(|x| {
            let forward = g
                .out_neighbors(x)
                .iter()
                .map(|&y| md.p().at(y, x).clone())
                .min();
            let backward = g
                .in_neighbors(x)
                .iter()
                .map(|&y| md.p_rev().at(y, x).clone())
                .min();
            let smallest = match (forward, backward) {
                (Some(a), Some(b)) => a.min(b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (None, None) => unreachable!("strong connectivity gives every vertex neighbors"),
            };
            smallest - rat(1)
        })
        .collect())
}

/// Which constant the curvature-dimension residual uses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CdVariant {
    /// The full per-vertex `𝒦`.
    K,
    /// The simpler `𝒦̃`.
    KTilde,
    /// `𝒦̂` fed by a verified global curvature lower bound.
    KHat(Rational),
    /// The vertex-independent `2K − 3`.
    Coarse(Rational),
}

/// Pointwise residual `Γ₂(f,f)(x) − ½(Δf(x))² − k(x)·Γ(f,f)(x)` of the
/// curvature-dimension inequality; every entry is nonnegative when the
/// variant's hypothesis holds.
pub fn cd_check(md: &MarkovData, f: &[Rational], variant: &CdVariant) -> Vec<Rational> {
    let constants: Vec<Rational> = match variant {
        CdVariant::K => cd_constants(md).k,
        CdVariant::KTilde => cd_constants(md).k_tilde,
        CdVariant::KHat(k_lower) => cd_khat(md, k_lower).khat,
        CdVariant::Coarse(k_lower) => vec![rat(2) * k_lower - rat(3); md.n()],
    };
    let g2 = gamma2(md, f, f);
    let g = gamma(md, f, f);
    let df = apply_delta(md, f);
    (0..md.n())
        .map(|x| &g2[x] - &df[x] * &df[x] / rat(2) - &constants[x] * &g[x])
        .collect()
}
