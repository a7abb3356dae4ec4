//! The (α,β)-weighted Cartesian product of two digraphs, and machine
//! checks of every identity it satisfies.
//!
//! The product of `(V,μ)` and `(V',μ')` lives on `V × V'` with weights
//! `μ_prod((x,x'),(y,y')) = β μ'(x') μ_xy [x'=y'] + α μ(x) μ'_{x'y'} [x=y]`,
//! so edges move in one coordinate at a time and the hop distance is the
//! `l¹` sum of factor distances.  Its kernels are `β/(α+β)`, `α/(α+β)`
//! mixtures of the factor kernels, its Perron measure is the outer product
//! of the factor measures, and its Ricci curvature is the distance-weighted
//! mixture of factor curvatures.  The checkers here recompute both sides of
//! each of those statements independently and report the first exact
//! mismatch.

use crate::curvature::{mean_curvatures, ricci};
use crate::digraph::{DistanceMatrix, VertexId, WeightedDigraph};
use crate::exactnum::{frac, Matrix, Rational};
use crate::markov::{build_markov, MarkovData};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use std::fmt;

/// Errors from product construction and identity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProductError {
    /// Arguments outside an operation's domain (non-positive α or β,
    /// out-of-range vertices, equal endpoints, …).
    Domain(String),
    /// An identity failed; carries both exactly computed sides.
    IdentityViolated {
        identity: &'static str,
        location: String,
        lhs: Rational,
        rhs: Rational,
    },
}

impl fmt::Display for ProductError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProductError::Domain(msg) => write!(f, "domain error: {msg}"),
            ProductError::IdentityViolated {
                identity,
                location,
                lhs,
                rhs,
            } => write!(
                f,
                "identity violated: {identity} at {location}: {lhs} ≠ {rhs}"
            ),
        }
    }
}

impl std::error::Error for ProductError {}

/// Two factors and the weights `α, β > 0` of their Cartesian product.
#[derive(Debug, Clone)]
pub struct ProductSpec<'a> {
    left: &'a WeightedDigraph,
    right: &'a WeightedDigraph,
    alpha: Rational,
    beta: Rational,
}

impl<'a> ProductSpec<'a> {
    pub fn new(
        left: &'a WeightedDigraph,
        right: &'a WeightedDigraph,
        alpha: Rational,
        beta: Rational,
    ) -> Result<Self, ProductError> {
        if alpha <= Rational::zero() || beta <= Rational::zero() {
            return Err(ProductError::Domain(format!(
                "product weights must be positive, got α = {alpha}, β = {beta}"
            )));
        }
        Ok(ProductSpec {
            left,
            right,
            alpha,
            beta,
        })
    }

    pub fn left(&self) -> &WeightedDigraph {
        self.left
    }

    pub fn right(&self) -> &WeightedDigraph {
        self.right
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// Row-major index of the product vertex `(x, x')`.
    pub fn index(&self, x: VertexId, xp: VertexId) -> VertexId {
        x * self.right.n() + xp
    }

    /// Factor coordinates of a product vertex index.
    pub fn coordinates(&self, v: VertexId) -> (VertexId, VertexId) {
        (v / self.right.n(), v % self.right.n())
    }

    fn mixture_weights(&self) -> (Rational, Rational) {
        let total = &self.alpha + &self.beta;
        (&self.beta / &total, &self.alpha / &total)
    }
}

/// Builds the product graph.  Vertices are indexed row-major and labeled
/// `(a,b)` from the factor labels; exotic factor labels that make two pair
/// labels collide are rejected.
pub fn cartesian_product(spec: &ProductSpec) -> Result<WeightedDigraph, ProductError> {
    let n = spec.left.n();
    let np = spec.right.n();
    let mut labels = Vec::with_capacity(n * np);
    for x in 0..n {
        for xp in 0..np {
            labels.push(format!("({},{})", spec.left.label(x), spec.right.label(xp)));
        }
    }
    let mut mu = Matrix::zeros(n * np, n * np);
    for x in 0..n {
        for xp in 0..np {
            let from = spec.index(x, xp);
            for &y in spec.left.out_neighbors(x) {
                let w = &spec.beta * spec.right.mu_out(xp) * spec.left.mu(x, y);
                mu.set(from, spec.index(y, xp), w);
            }
            for &yp in spec.right.out_neighbors(xp) {
                let w = &spec.alpha * spec.left.mu_out(x) * spec.right.mu(xp, yp);
                mu.set(from, spec.index(x, yp), w);
            }
        }
    }
    WeightedDigraph::from_weights(labels, mu)
        .map_err(|e| ProductError::Domain(format!("product construction failed: {e}")))
}

fn check(
    identity: &'static str,
    location: impl Fn() -> String,
    lhs: Rational,
    rhs: Rational,
) -> Result<(), ProductError> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(ProductError::IdentityViolated {
            identity,
            location: location(),
            lhs,
            rhs,
        })
    }
}

/// Verifies, exactly and in one sweep, everything the product construction
/// promises: the vertex-weight formula, the five kernel mixtures (forward,
/// Perron, reverse, mean), `l¹` distance additivity, the Laplacian sum rule
/// on random product-form functions, and the three mean-curvature mixtures.
pub fn check_product_identities(spec: &ProductSpec) -> Result<(), ProductError> {
    let product = cartesian_product(spec)?;
    let pd = product.distances();
    let pmd =
        build_markov(&product).map_err(|e| ProductError::Domain(format!("product kernel: {e}")))?;
    let ld = spec.left.distances();
    let lmd =
        build_markov(spec.left).map_err(|e| ProductError::Domain(format!("left kernel: {e}")))?;
    let rd = spec.right.distances();
    let rmd =
        build_markov(spec.right).map_err(|e| ProductError::Domain(format!("right kernel: {e}")))?;
    let (wbeta, walpha) = spec.mixture_weights();
    let total = &spec.alpha + &spec.beta;
    let n = spec.left.n();
    let np = spec.right.n();

    for x in 0..n {
        for xp in 0..np {
            let v = spec.index(x, xp);
            check(
                "product vertex weight (α+β)·μ(x)·μ'(x')",
                || format!("vertex {}", product.label(v)),
                product.mu_out(v),
                &total * spec.left.mu_out(x) * spec.right.mu_out(xp),
            )?;
            check(
                "product Perron measure 𝔪(x)·𝔪'(x')",
                || format!("vertex {}", product.label(v)),
                pmd.perron()[v].clone(),
                &lmd.perron()[x] * &rmd.perron()[xp],
            )?;
        }
    }

    let kernel_mixture = |pk: &Matrix, lk: &Matrix, rk: &Matrix, v: VertexId, w: VertexId| {
        let (x, xp) = spec.coordinates(v);
        let (y, yp) = spec.coordinates(w);
        let mut expected = Rational::zero();
        if xp == yp {
            expected += &wbeta * lk.at(x, y);
        }
        if x == y {
            expected += &walpha * rk.at(xp, yp);
        }
        (pk.at(v, w).clone(), expected)
    };
    for v in 0..product.n() {
        for w in 0..product.n() {
            let cases: [(&'static str, &Matrix, &Matrix, &Matrix); 3] = [
                ("product forward kernel mixture", pmd.p(), lmd.p(), rmd.p()),
                (
                    "product reverse kernel mixture",
                    pmd.p_rev(),
                    lmd.p_rev(),
                    rmd.p_rev(),
                ),
                (
                    "product mean kernel mixture",
                    pmd.p_mean(),
                    lmd.p_mean(),
                    rmd.p_mean(),
                ),
            ];
            for (name, pk, lk, rk) in cases {
                let (lhs, rhs) = kernel_mixture(pk, lk, rk, v, w);
                check(name, || format!("pair ({}, {})", product.label(v), product.label(w)), lhs, rhs)?;
            }
            let (x, xp) = spec.coordinates(v);
            let (y, yp) = spec.coordinates(w);
            check(
                "product distance additivity",
                || format!("pair ({}, {})", product.label(v), product.label(w)),
                pd.rational(v, w),
                ld.rational(x, y) + rd.rational(xp, yp),
            )?;
        }
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for round in 0..5 {
        let f: Vec<Rational> = (0..n)
            .map(|_| frac(rng.gen_range(-8..=8), rng.gen_range(1..=4)))
            .collect();
        let fp: Vec<Rational> = (0..np)
            .map(|_| frac(rng.gen_range(-8..=8), rng.gen_range(1..=4)))
            .collect();
        let chung = |md: &MarkovData, h: &[Rational], v: VertexId| -> Rational {
            &h[v]
                - (0..h.len())
                    .map(|w| md.p_mean().at(v, w) * &h[w])
                    .sum::<Rational>()
        };
        let combined: Vec<Rational> = (0..product.n())
            .map(|v| {
                let (x, xp) = spec.coordinates(v);
                &f[x] + &fp[xp]
            })
            .collect();
        for v in 0..product.n() {
            let (x, xp) = spec.coordinates(v);
            check(
                "product Laplacian sum rule",
                || format!("round {round}, vertex {}", product.label(v)),
                chung(&pmd, &combined, v),
                &wbeta * chung(&lmd, &f, x) + &walpha * chung(&rmd, &fp, xp),
            )?;
        }
    }

    let pmc = mean_curvatures(&pd, &pmd);
    let lmc = mean_curvatures(&ld, &lmd);
    let rmc = mean_curvatures(&rd, &rmd);
    for v in 0..product.n() {
        let (x, xp) = spec.coordinates(v);
        check(
            "product mean curvature mixture",
            || format!("vertex {}", product.label(v)),
            pmc.h(v).clone(),
            &wbeta * lmc.h(x) + &walpha * rmc.h(xp),
        )?;
        check(
            "product reverse mean curvature mixture",
            || format!("vertex {}", product.label(v)),
            pmc.h_rev(v).clone(),
            &wbeta * lmc.h_rev(x) + &walpha * rmc.h_rev(xp),
        )?;
        for w in 0..product.n() {
            let (y, yp) = spec.coordinates(w);
            check(
                "product mixed mean curvature mixture",
                || format!("pair ({}, {})", product.label(v), product.label(w)),
                pmc.h_pair(v, w),
                &wbeta * lmc.h_pair(x, y) + &walpha * rmc.h_pair(xp, yp),
            )?;
        }
    }
    Ok(())
}

/// The two sides of the product-curvature theorem for one ordered pair;
/// they are equal whenever `Ok` is returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductCurvatureCheck {
    pub direct: Rational,
    pub mixture: Rational,
}

struct ProductCurvatureContext {
    product: WeightedDigraph,
    pd: DistanceMatrix,
    pmd: MarkovData,
    ld: DistanceMatrix,
    lmd: MarkovData,
    rd: DistanceMatrix,
    rmd: MarkovData,
}

impl ProductCurvatureContext {
    fn build(spec: &ProductSpec) -> Result<Self, ProductError> {
        let product = cartesian_product(spec)?;
        let pd = product.distances();
        let pmd = build_markov(&product)
            .map_err(|e| ProductError::Domain(format!("product kernel: {e}")))?;
        let ld = spec.left.distances();
        let lmd = build_markov(spec.left)
            .map_err(|e| ProductError::Domain(format!("left kernel: {e}")))?;
        let rd = spec.right.distances();
        let rmd = build_markov(spec.right)
            .map_err(|e| ProductError::Domain(format!("right kernel: {e}")))?;
        Ok(ProductCurvatureContext {
            product,
            pd,
            pmd,
            ld,
            lmd,
            rd,
            rmd,
        })
    }

    fn compare(
        &self,
        spec: &ProductSpec,
        (x, xp): (VertexId, VertexId),
        (y, yp): (VertexId, VertexId),
        factor_kappa: &mut impl FnMut(&Self, bool, VertexId, VertexId) -> Rational,
    ) -> Result<ProductCurvatureCheck, ProductError> {
        let v = spec.index(x, xp);
        let w = spec.index(y, yp);
        let direct = ricci(&self.pd, &self.pmd, v, w)
            .expect("distinct product vertices")
            .kappa;
        let (wbeta, walpha) = spec.mixture_weights();
        let mixture = if xp == yp {
            wbeta * factor_kappa(self, true, x, y)
        } else if x == y {
            walpha * factor_kappa(self, false, xp, yp)
        } else {
            let dxy = self.ld.rational(x, y);
            let dxpyp = self.rd.rational(xp, yp);
            let denom = &dxy + &dxpyp;
            wbeta * dxy / &denom * factor_kappa(self, true, x, y)
                + walpha * dxpyp / &denom * factor_kappa(self, false, xp, yp)
        };
        if direct == mixture {
            Ok(ProductCurvatureCheck { direct, mixture })
        } else {
            Err(ProductError::IdentityViolated {
                identity: "product curvature mixture",
                location: format!(
                    "pair ({}, {})",
                    self.product.label(v),
                    self.product.label(w)
                ),
                lhs: direct,
                rhs: mixture,
            })
        }
    }
}

/// Checks the product-curvature theorem on one ordered pair of product
/// vertices given by factor coordinates: the curvature computed directly on
/// the product equals the distance-weighted mixture of factor curvatures.
pub fn check_product_curvature(
    spec: &ProductSpec,
    from: (VertexId, VertexId),
    to: (VertexId, VertexId),
) -> Result<ProductCurvatureCheck, ProductError> {
    let (n, np) = (spec.left.n(), spec.right.n());
    for (x, xp) in [from, to] {
        if x >= n || xp >= np {
            return Err(ProductError::Domain(format!(
                "product vertex ({x},{xp}) is out of range"
            )));
        }
    }
    if from == to {
        return Err(ProductError::Domain(
            "product curvature requires two distinct vertices".into(),
        ));
    }
    let ctx = ProductCurvatureContext::build(spec)?;
    let mut factor_kappa = |ctx: &ProductCurvatureContext, left: bool, a: VertexId, b: VertexId| {
        if left {
            ricci(&ctx.ld, &ctx.lmd, a, b)
        } else {
            ricci(&ctx.rd, &ctx.rmd, a, b)
        }
        .expect("distinct factor vertices")
        .kappa
    };
    ctx.compare(spec, from, to, &mut factor_kappa)
}

/// Checks the product-curvature theorem on every ordered pair of distinct
/// product vertices, computing each factor curvature once.
pub fn check_product_curvature_all(spec: &ProductSpec) -> Result<(), ProductError> {
    let ctx = ProductCurvatureContext::build(spec)?;
    let n = spec.left.n();
    let np = spec.right.n();
    let mut left_cache: Vec<Option<Rational>> = vec![None; n * n];
    let mut right_cache: Vec<Option<Rational>> = vec![None; np * np];
    let mut factor_kappa = |ctx: &ProductCurvatureContext, left: bool, a: VertexId, b: VertexId| {
        let (cache, span) = if left {
            (&mut left_cache, n)
        } else {
            (&mut right_cache, np)
        };
        if let Some(v) = &cache[a * span + b] {
            return v.clone();
        }
        let v = if left {
            ricci(&ctx.ld, &ctx.lmd, a, b)
        } else {
            ricci(&ctx.rd, &ctx.rmd, a, b)
        }
        .expect("distinct factor vertices")
        .kappa;
        cache[a * span + b] = Some(v.clone());
        v
    };
    for x in 0..n {
        for xp in 0..np {
            for y in 0..n {
                for yp in 0..np {
                    if (x, xp) != (y, yp) {
                        ctx.compare(spec, (x, xp), (y, yp), &mut factor_kappa)?;
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{gen_complete, gen_cycle};
    use crate::exactnum::rat;

    fn lopsided() -> WeightedDigraph {
        WeightedDigraph::from_edge_list("a\tb\t3\nb\tc\t1/2\nc\ta\t2\nb\ta\t1\n").unwrap()
    }

    #[test]
    fn cycle_square_has_the_expected_shape() {
        let c3 = gen_cycle(3).unwrap();
        let spec = ProductSpec::new(&c3, &c3, rat(1), rat(1)).unwrap();
        let p = cartesian_product(&spec).unwrap();
        assert_eq!(p.n(), 9);
        for v in 0..9 {
            assert_eq!(p.out_degree(v), 2);
        }
        assert_eq!(p.label(spec.index(1, 2)), "(x2,x3)");
        let class = p.classify();
        assert!(class.unweighted && class.eulerian);
        assert_eq!(class.regular, Some(2));
    }

    #[test]
    fn product_distances_add_coordinatewise() {
        let c4 = gen_cycle(4).unwrap();
        let k3 = gen_complete(3).unwrap();
        let spec = ProductSpec::new(&c4, &k3, rat(2), frac(1, 3)).unwrap();
        let p = cartesian_product(&spec).unwrap();
        let pd = p.distances();
        let ld = c4.distances();
        let rd = k3.distances();
        for v in 0..p.n() {
            for w in 0..p.n() {
                let (x, xp) = spec.coordinates(v);
                let (y, yp) = spec.coordinates(w);
                assert_eq!(pd.get(v, w), ld.get(x, y) + rd.get(xp, yp));
            }
        }
    }

    #[test]
    fn identities_hold_across_factor_and_weight_combinations() {
        let c3 = gen_cycle(3).unwrap();
        let c4 = gen_cycle(4).unwrap();
        let k3 = gen_complete(3).unwrap();
        let weighted = lopsided();
        let combos: [(&WeightedDigraph, &WeightedDigraph, Rational, Rational); 4] = [
            (&weighted, &c4, rat(1), rat(2)),
            (&k3, &c3, frac(2, 3), rat(5)),
            (&c4, &weighted, frac(7, 2), frac(1, 5)),
            (&k3, &k3, rat(1), rat(1)),
        ];
        for (left, right, alpha, beta) in combos {
            let spec = ProductSpec::new(left, right, alpha, beta).unwrap();
            check_product_identities(&spec).unwrap();
        }
    }

    #[test]
    fn regular_factor_perron_is_uniform_on_the_product() {
        let c3 = gen_cycle(3).unwrap();
        let c4 = gen_cycle(4).unwrap();
        let spec = ProductSpec::new(&c3, &c4, rat(1), rat(2)).unwrap();
        let p = cartesian_product(&spec).unwrap();
        let pmd = build_markov(&p).unwrap();
        for v in 0..12 {
            assert_eq!(pmd.perron()[v], frac(1, 12));
        }
    }

    #[test]
    fn product_mean_curvature_mixes_the_factor_values() {
        let k3 = gen_complete(3).unwrap();
        let c3 = gen_cycle(3).unwrap();
        let spec = ProductSpec::new(&k3, &c3, rat(1), rat(1)).unwrap();
        let p = cartesian_product(&spec).unwrap();
        let pmc = mean_curvatures(&p.distances(), &build_markov(&p).unwrap());
        for v in 0..p.n() {
            assert_eq!(pmc.h(v), &frac(-3, 2));
        }
    }

    #[test]
    fn curvature_mixture_on_first_factor_edges() {
        let k3 = gen_complete(3).unwrap();
        let spec = ProductSpec::new(&k3, &k3, rat(1), rat(1)).unwrap();
        let along_left = check_product_curvature(&spec, (0, 2), (1, 2)).unwrap();
        assert_eq!(along_left.direct, frac(3, 4));
        let along_right = check_product_curvature(&spec, (2, 0), (2, 1)).unwrap();
        assert_eq!(along_right.direct, frac(3, 4));
    }

    #[test]
    fn curvature_mixture_on_flat_cycle_products() {
        let c4 = gen_cycle(4).unwrap();
        let spec = ProductSpec::new(&c4, &c4, rat(1), rat(1)).unwrap();
        let along_edge = check_product_curvature(&spec, (0, 0), (1, 0)).unwrap();
        assert_eq!(along_edge.direct, rat(0));
    }

    #[test]
    fn curvature_mixture_with_unequal_weights_and_both_coordinates_moving() {
        let k3 = gen_complete(3).unwrap();
        let c4 = gen_cycle(4).unwrap();
        let spec = ProductSpec::new(&k3, &c4, rat(1), rat(3)).unwrap();
        let diagonal = check_product_curvature(&spec, (0, 0), (1, 1)).unwrap();
        assert_eq!(diagonal.direct, frac(9, 16));
        assert_eq!(diagonal.mixture, frac(9, 16));
    }

    #[test]
    fn curvature_mixture_holds_on_every_pair_of_a_small_product() {
        let k3 = gen_complete(3).unwrap();
        let c3 = gen_cycle(3).unwrap();
        let spec = ProductSpec::new(&k3, &c3, frac(1, 2), rat(2)).unwrap();
        check_product_curvature_all(&spec).unwrap();
    }

    #[test]
    fn inverse_degree_weights_give_regular_unweighted_products() {
        let k4 = gen_complete(4).unwrap();
        let c4 = gen_cycle(4).unwrap();
        let spec = ProductSpec::new(&k4, &c4, frac(1, 2), rat(1)).unwrap();
        let p = cartesian_product(&spec).unwrap();
        let class = p.classify();
        assert!(class.unweighted && class.eulerian);
        assert_eq!(class.regular, Some(3));
    }

    #[test]
    fn domain_errors_are_reported() {
        let c4 = gen_cycle(4).unwrap();
        assert!(ProductSpec::new(&c4, &c4, rat(0), rat(1)).is_err());
        assert!(ProductSpec::new(&c4, &c4, rat(1), rat(-2)).is_err());
        let spec = ProductSpec::new(&c4, &c4, rat(1), rat(1)).unwrap();
        assert!(check_product_curvature(&spec, (1, 2), (1, 2)).is_err());
        assert!(check_product_curvature(&spec, (4, 0), (1, 2)).is_err());
    }
}
