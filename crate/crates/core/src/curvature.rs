//! Ricci curvature of ordered vertex pairs.
//!
//! The ε-lazy curvature is `κ_ε(x,y) = 1 − W(ν_x^ε, ν_y^ε)/d(x,y)`; the
//! Ricci curvature is the slope `κ(x,y) = lim_{ε→0} κ_ε(x,y)/ε`.  Two
//! independent routes compute it:
//!
//! * the variational (limit-free) form — the exact linear program
//!   `κ(x,y) = inf { ∇_xy ℒf : f 1-Lipschitz, ∇_xy f = 1 }` with `ℒ` the
//!   Chung Laplacian `ℒf(x) = f(x) − Σ_y 𝓟(x,y) f(y)`, and
//! * direct stabilization of `κ_ε/ε` along `ε = 1/2, 1/4, …`, which is exact
//!   rather than heuristic: `κ_ε` is piecewise-linear and concave in `ε`, so
//!   once two successive chord slopes from the origin agree, concavity pins
//!   the function to that line on the whole interval and the slope is the
//!   limit.
//!
//! Mean curvatures `ℋ_x = ℒρ_x(x)` and `←ℋ_x = ℒ←ρ_x(x)` and the
//! edge/pair/regular/upper curvature bounds live here too.

use crate::digraph::{DistanceMatrix, VertexId, WeightedDigraph};
use crate::exactnum::{frac, rat, solve_lp, Constraint, LinearProgram, Rational};
use crate::markov::{lazy_measure, MarkovData, MarkovError, ProbMeasure};
use crate::transport::{wasserstein, TransportError};
use num_traits::Zero;
use std::fmt;

/// Errors from curvature computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurvatureError {
    /// Arguments outside an operation's domain (equal vertices, ε outside
    /// `[0,1]`, a non-edge where an edge is required, …).
    Domain(String),
    /// Stabilization did not conclude within the ε-budget.
    BudgetExceeded(String),
}

impl fmt::Display for CurvatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvatureError::Domain(msg) => write!(f, "domain error: {msg}"),
            CurvatureError::BudgetExceeded(msg) => write!(f, "budget exceeded: {msg}"),
        }
    }
}

impl std::error::Error for CurvatureError {}

impl From<MarkovError> for CurvatureError {
    fn from(e: MarkovError) -> Self {
        CurvatureError::Domain(e.to_string())
    }
}

impl From<TransportError> for CurvatureError {
    fn from(e: TransportError) -> Self {
        match e {
            TransportError::Domain(msg) => CurvatureError::Domain(msg),
            TransportError::BudgetExceeded(msg) => CurvatureError::BudgetExceeded(msg),
        }
    }
}

/// Mean curvatures of every vertex: `ℋ_x = −Σ_y 𝓟(x,y) d(x,y)` weighs
/// outgoing distance, `←ℋ_x = −Σ_y 𝓟(x,y) d(y,x)` incoming.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeanCurvatures {
    h: Vec<Rational>,
    h_rev: Vec<Rational>,
}

impl MeanCurvatures {
    /// `ℋ_x`, always `≤ −1`, with equality on undirected graphs.
    pub fn h(&self, x: VertexId) -> &Rational {
        &self.h[x]
    }

    /// `←ℋ_x`, always `≤ −1`, with equality on undirected graphs.
    pub fn h_rev(&self, x: VertexId) -> &Rational {
        &self.h_rev[x]
    }

    /// Mixed mean curvature `ℋ(x,y) = −(ℋ_x + ←ℋ_y)`, always `≥ 2`.
    pub fn h_pair(&self, x: VertexId, y: VertexId) -> Rational {
        -(&self.h[x] + &self.h_rev[y])
    }
}

/// Computes both mean-curvature vectors.
pub fn mean_curvatures(d: &DistanceMatrix, md: &MarkovData) -> MeanCurvatures {
    let n = md.n();
    let mut h = Vec::with_capacity(n);
    let mut h_rev = Vec::with_capacity(n);
    for x in 0..n {
        let mut out = Rational::zero();
        let mut inward = Rational::zero();
        for y in 0..n {
            let p = md.p_mean().at(x, y);
            if !p.is_zero() {
                out += p * d.rational(x, y);
                inward += p * d.rational(y, x);
            }
        }
        h.push(-out);
        h_rev.push(-inward);
    }
    MeanCurvatures { h, h_rev }
}

/// The ε-lazy coupling curvature `κ_ε(x,y) = 1 − W(ν_x^ε, ν_y^ε)/d(x,y)`.
pub fn kappa_eps(
    d: &DistanceMatrix,
    md: &MarkovData,
    x: VertexId,
    y: VertexId,
    eps: &Rational,
) -> Result<Rational, CurvatureError> {
    if x == y {
        return Err(CurvatureError::Domain(
            "curvature requires two distinct vertices".into(),
        ));
    }
    let nu_x = lazy_measure(md, x, eps)?;
    let nu_y = lazy_measure(md, y, eps)?;
    let w = wasserstein(d, &nu_x, &nu_y)?.cost;
    Ok(rat(1) - w / d.rational(x, y))
}

/// An exact curvature value with the optimal Lipschitz potential that
/// certifies it in the variational form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RicciSolution {
    pub kappa: Rational,
    /// Minimizer `f` with `f(x) = 0`, `f(y) = d(x,y)`: 1-Lipschitz, and
    /// `∇_xy ℒf = κ(x,y)`.
    pub potential: Vec<Rational>,
}

/// Ricci curvature by the limit-free variational formula, as one exact LP.
///
/// Minimizes `(ℒf(y) − ℒf(x))/d(x,y)` over potentials with `f(x) = 0`
/// (a harmless normalization), `f(y) = d(x,y)`, and the 1-Lipschitz
/// constraints, which on a hop metric reduce to `f(w) − f(v) ≤ 1` over
/// edges.
pub fn ricci(
    d: &DistanceMatrix,
    md: &MarkovData,
    x: VertexId,
    y: VertexId,
) -> Result<RicciSolution, CurvatureError> {
    if x == y {
        return Err(CurvatureError::Domain(
            "curvature requires two distinct vertices".into(),
        ));
    }
    let n = d.n();
    let dxy = d.rational(x, y);
    let mut constraints = Vec::new();
    for v in 0..n {
        for w in 0..n {
            if v != w && d.get(v, w) == 1 {
                let mut coeffs = vec![Rational::zero(); n];
                coeffs[w] = rat(1);
                coeffs[v] = rat(-1);
                constraints.push(Constraint::le(coeffs, rat(1)));
            }
        }
    }
    let mut grad = vec![Rational::zero(); n];
    grad[y] = rat(1);
    grad[x] = rat(-1);
    constraints.push(Constraint::eq(grad, dxy.clone()));
    let mut pin = vec![Rational::zero(); n];
    pin[x] = rat(1);
    constraints.push(Constraint::eq(pin, Rational::zero()));

    // ∇_xy ℒf expanded over the values of f.
    let mut objective = vec![Rational::zero(); n];
    for z in 0..n {
        let mut c = md.p_mean().at(x, z) - md.p_mean().at(y, z);
        if z == y {
            c += rat(1);
        }
        if z == x {
            c -= rat(1);
        }
        objective[z] = c / &dxy;
    }
    let sol = solve_lp(&LinearProgram::minimize(objective, constraints))
        .expect("variational program is feasible (ρ_x) and bounded (pinned Lipschitz box)");
    Ok(RicciSolution {
        kappa: sol.optimum,
        potential: sol.witness,
    })
}

/// Stabilizes `g(ε) = κ_ε/ε` along `ε = 1/2, 1/4, …`: returns the first
/// value taken twice in a row.  For a concave piecewise-linear `κ_ε` with
/// `κ_0 = 0`, two equal chord slopes force linearity on `[0, ε]`, so the
/// returned value is exactly the ε → 0 limit.
fn stabilize_slope<F>(mut slope_at: F) -> Result<Rational, CurvatureError>
where
    F: FnMut(&Rational) -> Result<Rational, CurvatureError>,
{
    let mut eps = frac(1, 2);
    let mut previous: Option<Rational> = None;
    for _ in 0..20 {
        let value = slope_at(&eps)?;
        if previous.as_ref() == Some(&value) {
            return Ok(value);
        }
        previous = Some(value);
        eps /= rat(2);
    }
    Err(CurvatureError::BudgetExceeded(
        "κ_ε/ε did not stabilize before ε = 2⁻²⁰".into(),
    ))
}

/// Ricci curvature by direct stabilization of `κ_ε/ε` — the independent
/// oracle for [`ricci`].
pub fn ricci_via_limit(
    d: &DistanceMatrix,
    md: &MarkovData,
    x: VertexId,
    y: VertexId,
) -> Result<Rational, CurvatureError> {
    stabilize_slope(|eps| Ok(kappa_eps(d, md, x, y, eps)? / eps))
}

/// Which pairs a curvature report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Edges only: pairs at distance 1.
    Edges,
    /// Every ordered pair of distinct vertices.
    All,
}

/// Curvature of one ordered pair inside a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCurvature {
    pub x: VertexId,
    pub y: VertexId,
    pub kappa: Rational,
    pub potential: Vec<Rational>,
}

/// Curvatures over a scope, with the minima downstream theorems consume.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureReport {
    pub scope: Scope,
    pub pairs: Vec<PairCurvature>,
    /// Minimum over edges; always available since both scopes cover edges.
    pub edge_min: Rational,
    /// Minimum over all ordered pairs; only computed under [`Scope::All`].
    pub global_min: Option<Rational>,
}

impl CurvatureReport {
    pub fn kappa(&self, x: VertexId, y: VertexId) -> Option<&Rational> {
        self.pairs
            .iter()
            .find(|p| p.x == x && p.y == y)
            .map(|p| &p.kappa)
    }

    /// Minimum curvature out of `x`, available under [`Scope::All`].
    pub fn min_from(&self, x: VertexId) -> Option<Rational> {
        self.pairs
            .iter()
            .filter(|p| p.x == x)
            .map(|p| p.kappa.clone())
            .min()
    }
}

fn compute_pairs(
    d: &DistanceMatrix,
    md: &MarkovData,
    pairs: &[(VertexId, VertexId)],
    threads: usize,
) -> Vec<RicciSolution> {
    let solve = |&(x, y): &(VertexId, VertexId)| {
        ricci(d, md, x, y).expect("report pairs are distinct vertices")
    };
    if threads <= 1 || pairs.len() <= 1 {
        return pairs.iter().map(solve).collect();
    }
    let chunk = pairs.len().div_ceil(threads);
    let mut out = Vec::with_capacity(pairs.len());
    std::thread::scope(|scope| {
        let workers: Vec<_> = pairs
            .chunks(chunk)
            .map(|part| scope.spawn(move || part.iter().map(solve).collect::<Vec<_>>()))
            .collect();
        for worker in workers {
            out.extend(worker.join().expect("curvature worker panicked"));
        }
    });
    out
}

/// Computes curvature over the requested scope.  `threads` only fans the
/// independent per-pair programs out; results are ordered by pair index and
/// identical for every thread count.
pub fn curvature_report(
    d: &DistanceMatrix,
    md: &MarkovData,
    scope: Scope,
    threads: usize,
) -> CurvatureReport {
    let n = d.n();
    let mut wanted: Vec<(VertexId, VertexId)> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            if matches!(scope, Scope::All) || d.get(x, y) == 1 {
                wanted.push((x, y));
            }
        }
    }
    let solved = compute_pairs(d, md, &wanted, threads);
    let pairs: Vec<PairCurvature> = wanted
        .into_iter()
        .zip(solved)
        .map(|((x, y), sol)| PairCurvature {
            x,
            y,
            kappa: sol.kappa,
            potential: sol.potential,
        })
        .collect();
    let edge_min = pairs
        .iter()
        .filter(|p| d.get(p.x, p.y) == 1)
        .map(|p| p.kappa.clone())
        .min()
        .expect("a strongly connected graph has edges");
    let global_min = match scope {
        Scope::All => pairs.iter().map(|p| p.kappa.clone()).min(),
        Scope::Edges => None,
    };
    CurvatureReport {
        scope,
        pairs,
        edge_min,
        global_min,
    }
}

fn positive_part(r: Rational) -> Rational {
    if r > Rational::zero() {
        r
    } else {
        Rational::zero()
    }
}

/// Lower curvature bound for an arbitrary ordered pair, in terms of the
/// two-sided distance `𝒟(x,y) = max{d(x,y), d(y,x)}`, the mean-kernel mass
/// between the pair, and the mixed mean curvature `ℋ(y,x)`.
pub fn lower_bound_general(
    d: &DistanceMatrix,
    md: &MarkovData,
    mc: &MeanCurvatures,
    x: VertexId,
    y: VertexId,
) -> Result<Rational, CurvatureError> {
    if x == y {
        return Err(CurvatureError::Domain(
            "curvature bounds require two distinct vertices".into(),
        ));
    }
    let dxy = d.rational(x, y);
    let dyx = d.rational(y, x);
    let big_d = dxy.clone().max(dyx.clone());
    let pxy = md.p_mean().at(x, y);
    let pyx = md.p_mean().at(y, x);
    let mass = pxy + pyx;
    let spread = positive_part(rat(1) - &mass);
    let detour = rat(2) * &big_d / &dxy * &spread;
    let excess = (&dxy + &big_d - mc.h_pair(y, x)) / &dxy;
    let slack = (&big_d - &dyx) / &dxy * &mass;
    Ok(-detour + excess - slack)
}

/// Sharper form of the lower bound on an edge `x → y`.
pub fn lower_bound_edge(
    d: &DistanceMatrix,
    md: &MarkovData,
    mc: &MeanCurvatures,
    x: VertexId,
    y: VertexId,
) -> Result<Rational, CurvatureError> {
    if x == y || d.get(x, y) != 1 {
        return Err(CurvatureError::Domain(format!(
            "lower_bound_edge requires an edge, but d({x},{y}) ≠ 1"
        )));
    }
    let dyx = d.rational(y, x);
    let mass = md.p_mean().at(x, y) + md.p_mean().at(y, x);
    let spread = positive_part(rat(1) - mass);
    Ok(rat(-2) * &dyx * spread + (rat(1) + &dyx - mc.h_pair(y, x)))
}

/// Lower bound on an edge of an unweighted `r`-regular graph, in terms of
/// inscribed radii of the out-neighbors of `x` not pointing into `y`.
pub fn lower_bound_regular(
    g: &WeightedDigraph,
    d: &DistanceMatrix,
    x: VertexId,
    y: VertexId,
) -> Result<Rational, CurvatureError> {
    let Some(r) = g.classify().regular else {
        return Err(CurvatureError::Domain(
            "lower_bound_regular requires an unweighted regular graph".into(),
        ));
    };
    if !g.has_edge(x, y) {
        return Err(CurvatureError::Domain(format!(
            "lower_bound_regular requires an edge, but {x} → {y} is not one"
        )));
    }
    let r = rat(r as i64);
    let mut detour = Rational::zero();
    for &z in g.out_neighbors(x) {
        if !g.has_edge(z, y) {
            detour += rat(d.inscribed_radius(z) as i64);
        }
    }
    Ok((rat(1) - &r) / (rat(2) * &r) - detour / (rat(2) * &r))
}

/// Upper curvature bound on an edge, plus its coarser closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpperBound {
    /// `𝓟(x,y) + 𝓟(y,x) + min(Σ_{z ∈ 𝒩_x ∩ 𝒩_y} 𝓟(x,z), Σ_{z ∈ 𝒩_x ∩ 𝒩_y} 𝓟(y,z))`.
    pub bound: Rational,
    /// The weaker bound `1 + 𝓟(y,x)` it never exceeds.
    pub coarse: Rational,
}

/// Upper curvature bound on an edge `x → y` from common-neighborhood mass.
pub fn upper_bound(
    d: &DistanceMatrix,
    md: &MarkovData,
    x: VertexId,
    y: VertexId,
) -> Result<UpperBound, CurvatureError> {
    if x == y || d.get(x, y) != 1 {
        return Err(CurvatureError::Domain(format!(
            "upper_bound requires an edge, but d({x},{y}) ≠ 1"
        )));
    }
    let nx = md.mean_neighborhood(x);
    let ny = md.mean_neighborhood(y);
    let mut sum_x = Rational::zero();
    let mut sum_y = Rational::zero();
    for &z in &nx {
        if ny.contains(&z) {
            sum_x += md.p_mean().at(x, z);
            sum_y += md.p_mean().at(y, z);
        }
    }
    let pyx = md.p_mean().at(y, x).clone();
    let bound = md.p_mean().at(x, y) + &pyx + sum_x.min(sum_y);
    Ok(UpperBound {
        bound,
        coarse: rat(1) + pyx,
    })
}

/// The four one-sided-kernel curvature variants: which kernel feeds each of
/// the two lazy measures.  `Out` spreads along `P(x,·) = μ(x,·)/μ(x)`, `In`
/// along incoming weight `μ(·,x)/Σ_y μ(y,x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantKind {
    OutOut,
    InOut,
    OutIn,
    InIn,
}

fn variant_measure(
    g: &WeightedDigraph,
    x: VertexId,
    eps: &Rational,
    outward: bool,
) -> ProbMeasure {
    let n = g.n();
    let mut weights = vec![Rational::zero(); n];
    if outward {
        let mu_x = g.mu_out(x);
        for &z in g.out_neighbors(x) {
            weights[z] = eps * g.mu(x, z) / &mu_x;
        }
    } else {
        let mu_in = g.mu_in(x);
        for &z in g.in_neighbors(x) {
            weights[z] = eps * g.mu(z, x) / &mu_in;
        }
    }
    weights[x] = rat(1) - eps;
    ProbMeasure::from_weights(weights).expect("kernel rows are probability vectors")
}

/// Stabilized ε → 0 curvature for one of the one-sided-kernel variants.
/// On undirected graphs every variant agrees with [`ricci`] exactly.
pub fn variant_curvature(
    g: &WeightedDigraph,
    d: &DistanceMatrix,
    x: VertexId,
    y: VertexId,
    kind: VariantKind,
) -> Result<Rational, CurvatureError> {
    if x == y {
        return Err(CurvatureError::Domain(
            "curvature requires two distinct vertices".into(),
        ));
    }
    let (outward_x, outward_y) = match kind {
        VariantKind::OutOut => (true, true),
        VariantKind::InOut => (false, true),
        VariantKind::OutIn => (true, false),
        VariantKind::InIn => (false, false),
    };
    let dxy = d.rational(x, y);
    stabilize_slope(|eps| {
        let nu_x = variant_measure(g, x, eps, outward_x);
        let nu_y = variant_measure(g, y, eps, outward_y);
        let w = wasserstein(d, &nu_x, &nu_y)?.cost;
        Ok((rat(1) - w / &dxy) / eps)
    })
}
