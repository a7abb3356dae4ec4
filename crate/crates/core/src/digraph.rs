//! Weighted directed graphs: validated construction, the hop-count metric,
//! neighborhood structure, classification, and the two standard families.
//!
//! A graph here is a finite vertex set with a nonnegative weight `μ(x,y)` on
//! each ordered pair; `x → y` exactly when `μ(x,y) > 0`.  Graphs are simple
//! (no self-loops) and must be strongly connected, which guarantees that the
//! walk kernel, its Perron measure, and all distances downstream exist.

use crate::exactnum::{parse_rational, rat, Matrix, Rational};
use num_traits::Zero;
use std::collections::{HashMap, VecDeque};
use std::fmt;

/// Index of a vertex in construction order.
pub type VertexId = usize;

/// Errors from graph construction and the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// A malformed edge-list line: bad field count, bad weight literal,
    /// nonpositive weight, self-loop, or duplicate edge.
    Parse { line: usize, message: String },
    /// A structurally invalid weight matrix handed in programmatically.
    Invalid { message: String },
    /// No directed path from `from` to `to`.
    NotStronglyConnected { from: String, to: String },
    /// An argument outside an operation's domain (e.g. generator size).
    Domain { message: String },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Parse { line, message } => {
                write!(f, "edge list line {line}: {message}")
            }
            GraphError::Invalid { message } => write!(f, "invalid graph: {message}"),
            GraphError::NotStronglyConnected { from, to } => {
                write!(f, "graph is not strongly connected: no directed path from {from:?} to {to:?}")
            }
            GraphError::Domain { message } => write!(f, "domain error: {message}"),
        }
    }
}

impl std::error::Error for GraphError {}

/// Structural classification flags.
///
/// `eulerian` and `regular` follow the unweighted convention: they are only
/// ever set on unweighted graphs, where in- and out-degrees are the weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub unweighted: bool,
    pub undirected: bool,
    pub eulerian: bool,
    pub regular: Option<usize>,
}

/// A simple, strongly connected, positively weighted digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedDigraph {
    labels: Vec<String>,
    mu: Matrix,
    out_neighbors: Vec<Vec<VertexId>>,
    in_neighbors: Vec<Vec<VertexId>>,
}

impl WeightedDigraph {
    /// Builds a graph from a square weight matrix and vertex labels.
    ///
    /// Validates shape, nonnegativity, simpleness (zero diagonal), label
    /// uniqueness, and strong connectivity.
    pub fn from_weights(labels: Vec<String>, mu: Matrix) -> Result<Self, GraphError> {
        let n = labels.len();
        if mu.rows() != n || mu.cols() != n {
            return Err(GraphError::Invalid {
                message: format!(
                    "weight matrix is {}×{} but there are {n} labels",
                    mu.rows(),
                    mu.cols()
                ),
            });
        }
        if n < 2 {
            return Err(GraphError::Invalid {
                message: "a strongly connected simple graph needs at least two vertices".into(),
            });
        }
        let mut seen = HashMap::new();
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || label.chars().any(char::is_whitespace) {
                return Err(GraphError::Invalid {
                    message: format!("label {label:?} is empty or contains whitespace"),
                });
            }
            if seen.insert(label.clone(), i).is_some() {
                return Err(GraphError::Invalid {
                    message: format!("duplicate label {label:?}"),
                });
            }
        }
        for x in 0..n {
            if !mu.at(x, x).is_zero() {
                return Err(GraphError::Invalid {
                    message: format!("self-loop at {:?}", labels[x]),
                });
            }
            for y in 0..n {
                if mu.at(x, y) < &Rational::zero() {
                    return Err(GraphError::Invalid {
                        message: format!("negative weight on ({:?}, {:?})", labels[x], labels[y]),
                    });
                }
            }
        }
        let out_neighbors: Vec<Vec<VertexId>> = (0..n)
            .map(|x| (0..n).filter(|&y| !mu.at(x, y).is_zero()).collect())
            .collect();
        let in_neighbors: Vec<Vec<VertexId>> = (0..n)
            .map(|y| (0..n).filter(|&x| !mu.at(x, y).is_zero()).collect())
            .collect();
        let g = WeightedDigraph {
            labels,
            mu,
            out_neighbors,
            in_neighbors,
        };
        g.check_strongly_connected()?;
        Ok(g)
    }

    /// Parses the tab-separated edge-list format: one `src dst weight` edge
    /// per line, `#`-prefixed comment lines and blank lines ignored.
    /// Weights are positive rationals (`p/q`, integer, or decimal).
    /// Vertices are indexed in order of first appearance.
    pub fn from_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, VertexId> = HashMap::new();
        let mut edges: Vec<(VertexId, VertexId, Rational, usize)> = Vec::new();
        let intern = |name: &str, labels: &mut Vec<String>, index: &mut HashMap<String, VertexId>| {
            *index.entry(name.to_string()).or_insert_with(|| {
                labels.push(name.to_string());
                labels.len() - 1
            })
        };
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(GraphError::Parse {
                    line,
                    message: format!("expected `src dst weight`, found {} fields", fields.len()),
                });
            }
            let weight = parse_rational(fields[2]).map_err(|e| GraphError::Parse {
                line,
                message: e.to_string(),
            })?;
            if weight <= Rational::zero() {
                return Err(GraphError::Parse {
                    line,
                    message: format!("weight {} is not positive", fields[2]),
                });
            }
            if fields[0] == fields[1] {
                return Err(GraphError::Parse {
                    line,
                    message: format!("self-loop at {:?}", fields[0]),
                });
            }
            let src = intern(fields[0], &mut labels, &mut index);
            let dst = intern(fields[1], &mut labels, &mut index);
            if let Some(&(_, _, _, first)) = edges
                .iter()
                .find(|&&(s, d, _, _)| s == src && d == dst)
                .as_ref()
            {
                return Err(GraphError::Parse {
                    line,
                    message: format!(
                        "duplicate edge {:?} -> {:?} (first given on line {first})",
                        fields[0], fields[1]
                    ),
                });
            }
            edges.push((src, dst, weight, line));
        }
        if edges.is_empty() {
            return Err(GraphError::Parse {
                line: text.lines().count().max(1),
                message: "edge list contains no edges".into(),
            });
        }
        let n = labels.len();
        let mut mu = Matrix::zeros(n, n);
        for (src, dst, weight, _) in edges {
            mu.set(src, dst, weight);
        }
        Self::from_weights(labels, mu)
    }

    /// Renders the graph back into the edge-list format, edges in
    /// row-major vertex order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for x in 0..self.n() {
            for &y in &self.out_neighbors[x] {
                out.push_str(&format!(
                    "{}\t{}\t{}\n",
                    self.labels[x],
                    self.labels[y],
                    self.mu.at(x, y)
                ));
            }
        }
        out
    }

    fn check_strongly_connected(&self) -> Result<(), GraphError> {
        let n = self.n();
        let reach = |adj: &Vec<Vec<VertexId>>| -> Vec<bool> {
            let mut seen = vec![false; n];
            seen[0] = true;
            let mut queue = VecDeque::from([0usize]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            seen
        };
        let forward = reach(&self.out_neighbors);
        if let Some(u) = forward.iter().position(|&ok| !ok) {
            return Err(GraphError::NotStronglyConnected {
                from: self.labels[0].clone(),
                to: self.labels[u].clone(),
            });
        }
        let backward = reach(&self.in_neighbors);
        if let Some(u) = backward.iter().position(|&ok| !ok) {
            return Err(GraphError::NotStronglyConnected {
                from: self.labels[u].clone(),
                to: self.labels[0].clone(),
            });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v]
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().position(|l| l == label)
    }

    /// Edge weight `μ(x, y)`; zero when `x → y` is not an edge.
    pub fn mu(&self, x: VertexId, y: VertexId) -> &Rational {
        self.mu.at(x, y)
    }

    /// Total out-weight `μ(x) = Σ_y μ(x, y)`; positive on every vertex.
    pub fn mu_out(&self, x: VertexId) -> Rational {
        self.out_neighbors[x]
            .iter()
            .map(|&y| self.mu.at(x, y))
            .sum()
    }

    /// Total in-weight `Σ_y μ(y, x)`; positive on every vertex.
    pub fn mu_in(&self, x: VertexId) -> Rational {
        self.in_neighbors[x]
            .iter()
            .map(|&y| self.mu.at(y, x))
            .sum()
    }

    /// Total vertex weight `μ(V) = Σ_x μ(x)`.
    pub fn mu_total(&self) -> Rational {
        (0..self.n()).map(|x| self.mu_out(x)).sum()
    }

    pub fn has_edge(&self, x: VertexId, y: VertexId) -> bool {
        !self.mu.at(x, y).is_zero()
    }

    /// Out-neighborhood `{y : x → y}` in index order.
    pub fn out_neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.out_neighbors[x]
    }

    /// In-neighborhood `{y : y → x}` in index order.
    pub fn in_neighbors(&self, x: VertexId) -> &[VertexId] {
        &self.in_neighbors[x]
    }

    /// The full neighborhood: union of out- and in-neighbors, in index order.
    pub fn neighborhood(&self, x: VertexId) -> Vec<VertexId> {
        (0..self.n())
            .filter(|&y| self.has_edge(x, y) || self.has_edge(y, x))
            .collect()
    }

    pub fn out_degree(&self, x: VertexId) -> usize {
        self.out_neighbors[x].len()
    }

    pub fn in_degree(&self, x: VertexId) -> usize {
        self.in_neighbors[x].len()
    }

    /// All edges as ordered pairs, row-major.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.n())
            .flat_map(|x| self.out_neighbors[x].iter().map(move |&y| (x, y)))
            .collect()
    }

    /// All-pairs hop-count distances by breadth-first search from every
    /// source.  `d(x, y)` counts edges on a shortest directed path and is
    /// generally non-symmetric.
    pub fn distances(&self) -> DistanceMatrix {
        let n = self.n();
        let mut d = vec![0usize; n * n];
        for x in 0..n {
            let mut dist = vec![usize::MAX; n];
            dist[x] = 0;
            let mut queue = VecDeque::from([x]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.out_neighbors[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            debug_assert!(
                dist.iter().all(|&v| v != usize::MAX),
                "strong connectivity was validated at construction"
            );
            d[x * n..(x + 1) * n].clone_from_slice(&dist);
        }
        DistanceMatrix { n, d }
    }

    /// Structural flags; regularity reports the common degree when present.
    pub fn classify(&self) -> Classification {
        let n = self.n();
        let one = rat(1);
        let mut unweighted = true;
        let mut undirected = true;
        for x in 0..n {
            for y in 0..n {
                let w = self.mu.at(x, y);
                if !w.is_zero() && *w != one {
                    unweighted = false;
                }
                if y > x && self.mu.at(x, y) != self.mu.at(y, x) {
                    undirected = false;
                }
            }
        }
        let eulerian =
            unweighted && (0..n).all(|x| self.out_degree(x) == self.in_degree(x));
        let regular = if eulerian {
            let r = self.out_degree(0);
            (1..n).all(|x| self.out_degree(x) == r).then_some(r)
        } else {
            None
        };
        Classification {
            unweighted,
            undirected,
            eulerian,
            regular,
        }
    }
}

/// All-pairs hop-count distances of a strongly connected digraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<usize>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: VertexId, y: VertexId) -> usize {
        self.d[x * self.n + y]
    }

    /// `d(x, y)` as an exact rational, for use in LP data.
    pub fn rational(&self, x: VertexId, y: VertexId) -> Rational {
        rat(self.get(x, y) as i64)
    }

    /// Inscribed radius at `x`: the largest distance from `x` to anywhere.
    pub fn inscribed_radius(&self, x: VertexId) -> usize {
        (0..self.n).map(|y| self.get(x, y)).max().unwrap_or(0)
    }

    /// Largest distance between any ordered pair.
    pub fn diameter(&self) -> usize {
        (0..self.n)
            .map(|x| self.inscribed_radius(x))
            .max()
            .unwrap_or(0)
    }
}

/// The directed complete graph on `n ≥ 3` vertices: every ordered pair is an
/// edge except the reversals `(x_{i+1}, x_i)` for `i = 1..n−1` and the pair
/// `(x_1, x_n)`.  Unweighted, Eulerian, and `(n−2)`-regular.
pub fn gen_complete(n: usize) -> Result<WeightedDigraph, GraphError> {
    if n < 3 {
        return Err(GraphError::Domain {
            message: format!("directed complete graph needs n ≥ 3, got {n}"),
        });
    }
    let labels = (1..=n).map(|i| format!("x{i}")).collect();
    let mut mu = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let removed = (i == (j + 1) % n && j + 1 < n) || (i == 0 && j == n - 1);
            if !removed {
                mu.set(i, j, rat(1));
            }
        }
    }
    WeightedDigraph::from_weights(labels, mu)
}

/// The directed cycle on `n ≥ 3` vertices: edges `x_i → x_{i+1}` and
/// `x_n → x_1`.  Unweighted, Eulerian, and 1-regular.
pub fn gen_cycle(n: usize) -> Result<WeightedDigraph, GraphError> {
    if n < 3 {
        return Err(GraphError::Domain {
            message: format!("directed cycle needs n ≥ 3, got {n}"),
        });
    }
    let labels = (1..=n).map(|i| format!("x{i}")).collect();
    let mut mu = Matrix::zeros(n, n);
    for i in 0..n {
        mu.set(i, (i + 1) % n, rat(1));
    }
    WeightedDigraph::from_weights(labels, mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::frac;

    #[test]
    fn complete_graph_has_the_advertised_edges() {
        let k3 = gen_complete(3).unwrap();
        assert_eq!(k3.edges(), vec![(0, 1), (1, 2), (2, 0)]);
        let k4 = gen_complete(4).unwrap();
        // n(n−2) edges: each vertex keeps n−2 of its n−1 outgoing pairs.
        assert_eq!(k4.edges().len(), 8);
        let class = k4.classify();
        assert!(class.unweighted && class.eulerian && !class.undirected);
        assert_eq!(class.regular, Some(2));
        assert!(!k4.has_edge(1, 0));
        assert!(!k4.has_edge(0, 3));
        assert!(k4.has_edge(0, 2));
    }

    #[test]
    fn cycle_is_one_regular_and_distances_wrap() {
        let c4 = gen_cycle(4).unwrap();
        assert_eq!(c4.classify().regular, Some(1));
        let d = c4.distances();
        assert_eq!(d.get(0, 1), 1);
        assert_eq!(d.get(1, 0), 3);
        assert_eq!(d.inscribed_radius(0), 3);
        assert_eq!(d.diameter(), 3);
        let c6 = gen_cycle(6).unwrap();
        assert_eq!(c6.distances().inscribed_radius(0), 5);
    }

    #[test]
    fn complete_graph_distances_use_detours_around_removed_edges() {
        let k4 = gen_complete(4).unwrap();
        let d = k4.distances();
        assert_eq!(d.get(0, 1), 1);
        assert_eq!(d.get(1, 0), 2);
        assert_eq!(d.inscribed_radius(0), 2);
    }

    #[test]
    fn generators_reject_tiny_sizes() {
        assert!(matches!(gen_complete(2), Err(GraphError::Domain { .. })));
        assert!(matches!(gen_cycle(2), Err(GraphError::Domain { .. })));
    }

    #[test]
    fn parses_edge_lists_with_comments_and_fraction_weights() {
        let text = "# a weighted triangle\na\tb\t1/2\nb\tc\t0.25\n\nc\ta\t3\n";
        let g = WeightedDigraph::from_edge_list(text).unwrap();
        assert_eq!(g.labels(), &["a", "b", "c"]);
        assert_eq!(g.mu(0, 1), &frac(1, 2));
        assert_eq!(g.mu(1, 2), &frac(1, 4));
        assert_eq!(g.mu(2, 0), &rat(3));
        assert_eq!(g.mu_out(0), frac(1, 2));
        assert_eq!(g.mu_in(0), rat(3));
        assert_eq!(g.mu_total(), frac(15, 4));
    }

    #[test]
    fn edge_list_round_trips_through_rendering() {
        let k4 = gen_complete(4).unwrap();
        let back = WeightedDigraph::from_edge_list(&k4.to_edge_list()).unwrap();
        assert_eq!(k4, back);
    }

    #[test]
    fn rejects_malformed_lines() {
        let cases = [
            ("a\tb\n", "field count"),
            ("a\tb\t0\n", "nonpositive"),
            ("a\tb\t-1\n", "nonpositive"),
            ("a\tb\tnope\n", "bad literal"),
            ("a\ta\t1\n", "self-loop"),
            ("a\tb\t1\na\tb\t2\nb\ta\t1\n", "duplicate"),
        ];
        for (text, what) in cases {
            assert!(
                matches!(WeightedDigraph::from_edge_list(text), Err(GraphError::Parse { .. })),
                "expected parse error for {what}"
            );
        }
    }

    #[test]
    fn reports_a_witness_pair_when_not_strongly_connected() {
        let text = "a\tb\t1\nb\ta\t1\nb\tc\t1\n";
        match WeightedDigraph::from_edge_list(text) {
            Err(GraphError::NotStronglyConnected { from, to }) => {
                assert_eq!((from.as_str(), to.as_str()), ("c", "a"));
            }
            other => panic!("expected connectivity error, got {other:?}"),
        }
    }

    #[test]
    fn classify_spots_undirected_and_weighted_graphs() {
        let undirected = "a\tb\t2\nb\ta\t2\nb\tc\t1\nc\tb\t1\n";
        let class = WeightedDigraph::from_edge_list(undirected).unwrap().classify();
        assert!(class.undirected && !class.unweighted);
        assert!(!class.eulerian);
        let triangle = "a\tb\t1\nb\ta\t1\nb\tc\t1\nc\tb\t1\na\tc\t1\nc\ta\t1\n";
        let class = WeightedDigraph::from_edge_list(triangle).unwrap().classify();
        assert!(class.undirected && class.unweighted && class.eulerian);
        assert_eq!(class.regular, Some(2));
    }

    #[test]
    fn neighborhoods_merge_both_directions() {
        let k4 = gen_complete(4).unwrap();
        assert_eq!(k4.out_neighbors(0), &[1, 2]);
        assert_eq!(k4.in_neighbors(0), &[2, 3]);
        assert_eq!(k4.neighborhood(0), vec![1, 2, 3]);
    }

    #[test]
    fn triangle_inequality_holds_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(3..=7);
            let mut mu = Matrix::zeros(n, n);
            for i in 0..n {
                mu.set(i, (i + 1) % n, rat(rng.gen_range(1..=4)));
            }
            for i in 0..n {
                for j in 0..n {
                    if i != j && mu.at(i, j).is_zero() && rng.gen_bool(0.3) {
                        mu.set(i, j, frac(rng.gen_range(1..=6), rng.gen_range(1..=3)));
                    }
                }
            }
            let labels = (0..n).map(|i| format!("v{i}")).collect();
            let g = WeightedDigraph::from_weights(labels, mu).unwrap();
            let d = g.distances();
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        assert!(d.get(x, z) <= d.get(x, y) + d.get(y, z));
                    }
                    if x != y {
                        assert!(d.get(x, y) >= 1);
                        assert_eq!(d.get(x, y) == 1, g.has_edge(x, y));
                    }
                }
            }
        }
    }
}
