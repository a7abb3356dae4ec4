//! Shared graph corpus and random-input helpers for the integration suites.
//!
//! Every fixture is deterministic: the generator families are exact, and the
//! "random" graphs, functions, and measures are drawn from fixed-seed
//! ChaCha8 streams so reruns exercise identical inputs.

#![allow(dead_code)]

use dircurv::digraph::{gen_complete, gen_cycle, WeightedDigraph};
use dircurv::exactnum::{frac, Matrix, Rational};
use dircurv::markov::ProbMeasure;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn complete(n: usize) -> WeightedDigraph {
    gen_complete(n).expect("complete family needs n ≥ 3")
}

pub fn cycle(n: usize) -> WeightedDigraph {
    gen_cycle(n).expect("cycle family needs n ≥ 2")
}

/// Unit-weight undirected triangle.
pub fn undirected_triangle() -> WeightedDigraph {
    WeightedDigraph::from_edge_list(
        "a b 1\nb a 1\nb c 1\nc b 1\nc a 1\na c 1\n",
    )
    .expect("fixture is strongly connected")
}

/// Unit-weight undirected 4-cycle.
pub fn undirected_square() -> WeightedDigraph {
    WeightedDigraph::from_edge_list(
        "a b 1\nb a 1\nb c 1\nc b 1\nc d 1\nd c 1\nd a 1\na d 1\n",
    )
    .expect("fixture is strongly connected")
}

/// The induced subgraph of the Petersen graph on eight of its ten vertices
/// (outer vertices o0..o3, inner vertices i0..i3 with the pentagram chords
/// that survive the deletion), unit weights in both directions.
pub fn petersen_subgraph() -> WeightedDigraph {
    let undirected_edges = [
        ("o0", "o1"),
        ("o1", "o2"),
        ("o2", "o3"),
        ("o0", "i0"),
        ("o1", "i1"),
        ("o2", "i2"),
        ("o3", "i3"),
        ("i0", "i2"),
        ("i1", "i3"),
        ("i3", "i0"),
    ];
    let mut text = String::new();
    for (a, b) in undirected_edges {
        text.push_str(&format!("{a} {b} 1\n{b} {a} 1\n"));
    }
    WeightedDigraph::from_edge_list(&text).expect("fixture is strongly connected")
}

/// A weighted triangle with reciprocal edges of unequal weight: every arc
/// has a reverse arc, but the graph is neither undirected nor unweighted.
pub fn lopsided_triangle() -> WeightedDigraph {
    WeightedDigraph::from_edge_list(
        "a b 1\nb a 1\nb c 1\nc b 1\nc a 6/5\na c 1\n",
    )
    .expect("fixture is strongly connected")
}

/// Two directed loops (a 3-cycle and a 4-cycle) sharing the vertex `a`.
/// Global curvature minimum −3/4, attained at the pairs (a,p) and (r,a).
pub fn two_loops() -> WeightedDigraph {
    WeightedDigraph::from_edge_list(
        "a b 1\nb c 1\nc a 1\na p 1\np q 1\nq r 1\nr a 1\n",
    )
    .expect("fixture is strongly connected")
}

/// Undirected double star: adjacent centers u, v with two leaves each.
/// The center edge has curvature −2/3, the global minimum.
pub fn double_star() -> WeightedDigraph {
    WeightedDigraph::from_edge_list(
        "u v 1\nv u 1\nu a 1\na u 1\nu b 1\nb u 1\nv c 1\nc v 1\nv d 1\nd v 1\n",
    )
    .expect("fixture is strongly connected")
}

/// A random strongly connected weighted digraph on six vertices: a
/// Hamiltonian cycle guarantees strong connectivity, and extra arcs with
/// random small-rational weights are sprinkled on top.
pub fn random_digraph(seed: u64) -> WeightedDigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 6;
    let labels: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let weight = |rng: &mut ChaCha8Rng| frac(rng.gen_range(1..=4), rng.gen_range(1..=3));
    let mut mu = Matrix::zeros(n, n);
    for i in 0..n {
        let w = weight(&mut rng);
        mu.set(i, (i + 1) % n, w);
    }
    for x in 0..n {
        for y in 0..n {
            if x != y && mu.at(x, y).is_zero() && rng.gen_bool(0.35) {
                let w = weight(&mut rng);
                mu.set(x, y, w);
            }
        }
    }
    WeightedDigraph::from_weights(labels, mu).expect("Hamiltonian cycle keeps it strongly connected")
}

/// The undirected symmetrization: weights `μ(x,y) + μ(y,x)` in both
/// directions.
pub fn symmetrize(g: &WeightedDigraph) -> WeightedDigraph {
    let n = g.n();
    let mut mu = Matrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            if x != y {
                let w = g.mu(x, y) + g.mu(y, x);
                if !w.is_zero() {
                    mu.set(x, y, w);
                }
            }
        }
    }
    WeightedDigraph::from_weights(g.labels().to_vec(), mu)
        .expect("symmetrization preserves strong connectivity")
}

pub const RANDOM_SEEDS: [u64; 2] = [11, 12];

/// The full test corpus: generator families, seeded random digraphs with
/// their symmetrizations, undirected fixtures, and the negatively curved
/// fixtures.
pub fn corpus() -> Vec<(String, WeightedDigraph)> {
    let mut graphs = Vec::new();
    for n in [3usize, 4, 5, 6, 8] {
        graphs.push((format!("K{n}"), complete(n)));
    }
    for n in [4usize, 5, 6, 8] {
        graphs.push((format!("C{n}"), cycle(n)));
    }
    for seed in RANDOM_SEEDS {
        let g = random_digraph(seed);
        graphs.push((format!("R{seed}-sym"), symmetrize(&g)));
        graphs.push((format!("R{seed}"), g));
    }
    graphs.push(("triangle".into(), undirected_triangle()));
    graphs.push(("square".into(), undirected_square()));
    graphs.push(("petersen8".into(), petersen_subgraph()));
    graphs.push(("lopsided".into(), lopsided_triangle()));
    graphs.push(("two-loops".into(), two_loops()));
    graphs.push(("double-star".into(), double_star()));
    graphs
}

/// A random rational function with values `a/b`, `a ∈ [−6, 6]`, `b ∈ [1, 4]`.
pub fn random_function(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| frac(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
        .collect()
}

/// A random probability measure with positive rational weights.
pub fn random_measure(rng: &mut ChaCha8Rng, n: usize) -> ProbMeasure {
    let raw: Vec<Rational> = (0..n)
        .map(|_| frac(rng.gen_range(1..=9), rng.gen_range(1..=4)))
        .collect();
    let total: Rational = raw.iter().sum();
    ProbMeasure::from_weights(raw.into_iter().map(|w| w / &total).collect())
        .expect("normalized positive weights form a measure")
}
