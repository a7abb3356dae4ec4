//! Exact Wasserstein distance between vertex measures over the hop metric.
//!
//! The distance is computed from the Kantorovich dual: maximize
//! `Σ f · (ν₁ − ν₀)` over 1-Lipschitz potentials.  Because the metric is a
//! shortest-path hop count, the Lipschitz cone is cut out by the distance-1
//! constraints alone — `f(w) − f(v) ≤ 1` on edges telescopes along shortest
//! paths to `f(w) − f(v) ≤ d(v,w)` for every ordered pair.  An optimal
//! coupling is then recovered from complementary slackness: transport may
//! only flow along arcs the optimal potential makes tight, and a feasible
//! flow on those arcs is found exactly.  Every call returns both halves and
//! certifies that their objectives agree.

use crate::digraph::{DistanceMatrix, VertexId};
use crate::exactnum::{rat, solve_lp, Constraint, LinearProgram, Matrix, Rational};
use crate::markov::ProbMeasure;
use num_traits::Zero;
use std::collections::VecDeque;
use std::fmt;

/// Errors from transport computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransportError {
    /// Mismatched dimensions or otherwise invalid arguments.
    Domain(String),
    /// The brute-force oracle refuses instances beyond its budget.
    BudgetExceeded(String),
}

impl fmt::Display for TransportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransportError::Domain(msg) => write!(f, "domain error: {msg}"),
            TransportError::BudgetExceeded(msg) => write!(f, "budget exceeded: {msg}"),
        }
    }
}

impl std::error::Error for TransportError {}

/// An optimal transport plan with its certifying dual potential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportResult {
    /// The exact Wasserstein distance `W(ν₀, ν₁)`.
    pub cost: Rational,
    /// An optimal coupling: row sums are `ν₀`, column sums are `ν₁`.
    pub coupling: Matrix,
    /// An optimal 1-Lipschitz potential achieving `Σ f (ν₁ − ν₀) = cost`.
    pub potential: Vec<Rational>,
}

fn check_dims(
    d: &DistanceMatrix,
    nu0: &ProbMeasure,
    nu1: &ProbMeasure,
) -> Result<(), TransportError> {
    if nu0.n() != d.n() || nu1.n() != d.n() {
        return Err(TransportError::Domain(format!(
            "measures on {} and {} vertices against a {}-vertex metric",
            nu0.n(),
            nu1.n(),
            d.n()
        )));
    }
    Ok(())
}

/// Exact Wasserstein distance with primal and dual certificates.
pub fn wasserstein(
    d: &DistanceMatrix,
    nu0: &ProbMeasure,
    nu1: &ProbMeasure,
) -> Result<TransportResult, TransportError> {
    check_dims(d, nu0, nu1)?;
    let n = d.n();

    let objective: Vec<Rational> = (0..n).map(|z| nu1.weight(z) - nu0.weight(z)).collect();
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
    let pin = (0..n)
        .find(|&z| !nu0.weight(z).is_zero() || !nu1.weight(z).is_zero())
        .expect("probability measures have support");
    let mut pin_row = vec![Rational::zero(); n];
    pin_row[pin] = rat(1);
    constraints.push(Constraint::eq(pin_row, Rational::zero()));

    let sol = solve_lp(&LinearProgram::maximize(objective, constraints))
        .expect("dual transport program is feasible (f = 0) and bounded (pinned Lipschitz box)");
    let potential = sol.witness;
    let cost = sol.optimum;

    // Complementary slackness: an optimal plan moves mass only along arcs
    // where the potential gain meets the distance, plus the free diagonal.
    let mut tight: Vec<(VertexId, VertexId)> = Vec::new();
    for v in 0..n {
        for w in 0..n {
            if v == w || &potential[w] - &potential[v] == d.rational(v, w) {
                tight.push((v, w));
            }
        }
    }
    let coupling = feasible_flow_on_arcs(n, &tight, nu0, nu1);

    let mut primal_cost = Rational::zero();
    for v in 0..n {
        for w in 0..n {
            let mass = coupling.at(v, w);
            if !mass.is_zero() {
                primal_cost += mass * d.rational(v, w);
            }
        }
    }
    assert_eq!(
        primal_cost, cost,
        "strong duality certificate must be exact"
    );
    Ok(TransportResult { cost, coupling, potential })
}

/// Finds an exact feasible transport plan supported on the given arcs by
/// maximum flow (breadth-first augmenting paths, rational capacities).
/// Panics if no plan exists; the callers' arc sets come from an optimal
/// dual potential, for which feasibility is guaranteed.
fn feasible_flow_on_arcs(
    n: usize,
    arcs: &[(VertexId, VertexId)],
    nu0: &ProbMeasure,
    nu1: &ProbMeasure,
) -> Matrix {
    let nodes = 2 * n + 2;
    let (src, dst) = (0, nodes - 1);
    let left = |v: usize| 1 + v;
    let right = |w: usize| 1 + n + w;
    let mut cap = vec![vec![Rational::zero(); nodes]; nodes];
    for v in 0..n {
        cap[src][left(v)] = nu0.weight(v).clone();
    }
    for w in 0..n {
        cap[right(w)][dst] = nu1.weight(w).clone();
    }
    for &(v, w) in arcs {
        // Any single arc carries at most the whole unit of mass.
        cap[left(v)][right(w)] = rat(1);
    }

    loop {
        let mut parent = vec![usize::MAX; nodes];
        parent[src] = src;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for next in 0..nodes {
                if parent[next] == usize::MAX && !cap[u][next].is_zero() {
                    parent[next] = u;
                    queue.push_back(next);
                }
            }
            if parent[dst] != usize::MAX {
                break;
            }
        }
        if parent[dst] == usize::MAX {
            break;
        }
        let mut bottleneck: Option<Rational> = None;
        let mut node = dst;
        while node != src {
            let prev = parent[node];
            if bottleneck.as_ref().is_none_or(|b| &cap[prev][node] < b) {
                bottleneck = Some(cap[prev][node].clone());
            }
            node = prev;
        }
        let push = bottleneck.expect("augmenting path has at least one arc");
        let mut node = dst;
        while node != src {
            let prev = parent[node];
            cap[prev][node] -= &push;
            cap[node][prev] += &push;
            node = prev;
        }
    }

    let mut routed = Rational::zero();
    let mut coupling = Matrix::zeros(n, n);
    for &(v, w) in arcs {
        // Residual capacity on the reverse arc records the routed flow.
        let flow = cap[right(w)][left(v)].clone();
        if !flow.is_zero() {
            routed += &flow;
            coupling.set(v, w, flow);
        }
    }
    assert_eq!(
        routed,
        rat(1),
        "tight arcs of an optimal potential must route all mass"
    );
    coupling
}

/// Independent oracle: maximizes `Σ f (ν₁ − ν₀)` over all integer-valued
/// 1-Lipschitz potentials `f : V → {0, …, diam}`.
///
/// This range loses nothing: the metric is integral, so the dual attains its
/// optimum at an integral potential, the objective is shift-invariant, and a
/// shift of the minimum to zero keeps values within the diameter.  The scan
/// prunes on partial Lipschitz violations, so only feasible prefixes are
/// extended.  Budget: `n ≤ 7` and diameter `≤ 6`.
pub fn wasserstein_bruteforce(
    d: &DistanceMatrix,
    nu0: &ProbMeasure,
    nu1: &ProbMeasure,
) -> Result<Rational, TransportError> {
    check_dims(d, nu0, nu1)?;
    let n = d.n();
    let diam = d.diameter();
    if n > 7 || diam > 6 {
        return Err(TransportError::BudgetExceeded(format!(
            "brute-force transport is limited to n ≤ 7 and diameter ≤ 6, got n = {n}, diameter = {diam}"
        )));
    }
    let delta: Vec<Rational> = (0..n).map(|z| nu1.weight(z) - nu0.weight(z)).collect();
    let mut f = vec![0usize; n];
    let mut best: Option<Rational> = None;
    fn scan(
        k: usize,
        f: &mut Vec<usize>,
        d: &DistanceMatrix,
        diam: usize,
        delta: &[Rational],
        best: &mut Option<Rational>,
    ) {
        let n = f.len();
        if k == n {
            let value: Rational = (0..n)
                .filter(|&z| !delta[z].is_zero())
                .map(|z| &delta[z] * rat(f[z] as i64))
                .sum();
            if best.as_ref().is_none_or(|b| &value > b) {
                *best = Some(value);
            }
            return;
        }
        'candidates: for v in 0..=diam {
            for j in 0..k {
                let lip_up = v <= f[j] + d.get(j, k);
                let lip_down = f[j] <= v + d.get(k, j);
                if !(lip_up && lip_down) {
                    continue 'candidates;
                }
            }
            f[k] = v;
            scan(k + 1, f, d, diam, delta, best);
        }
    }
    scan(0, &mut f, d, diam, &delta, &mut best);
    Ok(best.expect("constant potentials are always feasible"))
}
