//! Brute-force JSR estimates from products of a fixed length.
//!
//! For every ordered word `i_1 .. i_n` the product `P = A_{i_n} ... A_{i_1}`
//! is formed explicitly. The largest spectral radius gives a lower bound
//! `(max rho(P))^{1/n} <= rho`, the largest induced norm an upper bound
//! `rho <= (max ||P||)^{1/n}`. The trace estimate `(max |tr P|)^{1/n}` is a
//! diagnostic with no bracketing guarantee at finite `n`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{Matrix, MatrixSet};
use crate::norm::{node_direction, AngularNorm};

/// Default limit on the number of products enumerated at one depth.
pub const DEFAULT_PRODUCT_CAP: u128 = 1 << 20;

/// Which norm produced an upper bound.
#[derive(Clone, Debug, PartialEq)]
pub enum NormUsed {
    Euclidean { node_count: usize },
    Profile { node_count: usize },
}

impl NormUsed {
    fn of(nm: &AngularNorm) -> Self {
        let node_count = nm.node_count();
        if nm.values().iter().all(|&v| v == 1.0) {
            Self::Euclidean { node_count }
        } else {
            Self::Profile { node_count }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductBounds {
    pub depth: usize,
    /// `(max_P rho(P))^{1/n}`.
    pub lower: f64,
    /// `(max_P ||P||)^{1/n}` in the grid-induced operator norm.
    pub upper: f64,
    pub norm_used: NormUsed,
}

fn product_count(set: &MatrixSet, depth: usize, cap: u128) -> Result<u128> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    let required = u32::try_from(depth)
        .ok()
        .and_then(|d| (set.len() as u128).checked_pow(d))
        .unwrap_or(u128::MAX);
    if required > cap {
        return Err(Error::BudgetExceeded { required, cap });
    }
    Ok(required)
}

/// All `r^depth` ordered products, each new factor multiplied on the left.
pub fn products(set: &MatrixSet, depth: usize, cap: u128) -> Result<Vec<Matrix>> {
    set.require_planar()?;
    product_count(set, depth, cap)?;
    let mut level: Vec<Matrix> = set.matrices().to_vec();
    for _ in 1..depth {
        level = level
            .iter()
            .flat_map(|p| {
                set.iter()
                    .map(move |a| a.mul(p).expect("uniform dimension"))
            })
            .collect();
    }
    Ok(level)
}

/// Grid operator norm `max_j ||P u_j|| / h_j`.
fn induced_norm(p: &Matrix, nm: &AngularNorm) -> f64 {
    let n = nm.node_count();
    nm.values()
        .iter()
        .enumerate()
        .map(|(j, h)| nm.eval(p.apply2(node_direction(j, n))) / h)
        .fold(0.0, f64::max)
}

/// Lower and upper product bounds at one depth, with the default cap.
pub fn product_bounds(set: &MatrixSet, depth: usize, nm: &AngularNorm) -> Result<ProductBounds> {
    product_bounds_capped(set, depth, nm, DEFAULT_PRODUCT_CAP)
}

pub fn product_bounds_capped(
    set: &MatrixSet,
    depth: usize,
    nm: &AngularNorm,
    cap: u128,
) -> Result<ProductBounds> {
    let prods = products(set, depth, cap)?;
    let (max_rho, max_norm) = prods
        .par_iter()
        .map(|p| {
            let rho = p.spectral_radius().expect("planar product");
            (rho, induced_norm(p, nm))
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    let inv = 1.0 / depth as f64;
    Ok(ProductBounds {
        depth,
        lower: max_rho.powf(inv),
        upper: max_norm.powf(inv),
        norm_used: NormUsed::of(nm),
    })
}

/// `(max_P |tr P|)^{1/n}` over all products of length `depth`.
pub fn trace_estimate(set: &MatrixSet, depth: usize) -> Result<f64> {
    trace_estimate_capped(set, depth, DEFAULT_PRODUCT_CAP)
}

pub fn trace_estimate_capped(set: &MatrixSet, depth: usize, cap: u128) -> Result<f64> {
    let prods = products(set, depth, cap)?;
    let max_tr = prods
        .par_iter()
        .map(|p| p.trace().abs())
        .reduce(|| 0.0, f64::max);
    Ok(max_tr.powf(1.0 / depth as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const GOLDEN: f64 = 1.618_033_988_749_895;

    fn example1() -> MatrixSet {
        MatrixSet::from_2x2(&[[[1.0, 1.0], [0.0, 1.0]], [[1.0, 0.0], [-1.0, 1.0]]]).unwrap()
    }

    fn scalar(c: f64) -> MatrixSet {
        MatrixSet::from_2x2(&[[[c, 0.0], [0.0, c]]]).unwrap()
    }

    #[test]
    fn scalar_family_bounds() {
        let nm = AngularNorm::euclidean(360).unwrap();
        let b = product_bounds(&scalar(2.0), 3, &nm).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-15);
        assert!((b.upper - 2.0).abs() < 1e-15);
        assert_eq!(b.norm_used, NormUsed::Euclidean { node_count: 360 });
    }

    #[test]
    fn example1_depth_one() {
        let nm = AngularNorm::euclidean(3000).unwrap();
        let b = product_bounds(&example1(), 1, &nm).unwrap();
        assert_eq!(b.lower, 1.0);
        assert!((b.upper - GOLDEN).abs() < 1e-5);
    }

    #[test]
    fn trace_examples() {
        let id = MatrixSet::new(vec![Matrix::identity(2)]).unwrap();
        assert!((trace_estimate(&id, 2).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let t = trace_estimate(&scalar(2.0), 4).unwrap();
        assert!((t - 2.0 * 2f64.powf(0.25)).abs() < 1e-14);
        assert_eq!(trace_estimate(&example1(), 1).unwrap(), 2.0);
    }

    #[test]
    fn product_order_is_left_multiplication() {
        let set = example1();
        let prods = products(&set, 2, DEFAULT_PRODUCT_CAP).unwrap();
        let a = &set.matrices()[0];
        let b = &set.matrices()[1];
        // words (i1, i2) in lexicographic order, product A_{i2} A_{i1}
        assert_eq!(prods[1], b.mul(a).unwrap());
        assert_eq!(prods[2], a.mul(b).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let nm = AngularNorm::euclidean(16).unwrap();
        match product_bounds_capped(&example1(), 11, &nm, 1024) {
            Err(Error::BudgetExceeded { required, cap }) => {
                assert_eq!(required, 2048);
                assert_eq!(cap, 1024);
            }
            other => panic!("{other:?}"),
        }
        assert!(trace_estimate(&example1(), 200).is_err());
        assert!(matches!(
            trace_estimate(&example1(), 0),
            Err(Error::ZeroDepth)
        ));
    }

    #[test]
    fn example1_sandwich_to_depth_12() {
        let nm = AngularNorm::euclidean(3000).unwrap();
        let all: Vec<_> = (1..=12)
            .map(|n| product_bounds(&example1(), n, &nm).unwrap())
            .collect();
        let best_lower = all.iter().map(|b| b.lower).fold(0.0, f64::max);
        let best_upper = all.iter().map(|b| b.upper).fold(f64::INFINITY, f64::min);
        assert!(best_lower <= 1.389 + 2e-3, "{best_lower}");
        assert!(best_upper >= 1.389 - 2e-3, "{best_upper}");
        for a in &all {
            for b in &all {
                assert!(a.lower <= b.upper + 1e-9);
            }
        }
    }

    fn entry() -> impl Strategy<Value = f64> {
        -2.0..2.0f64
    }

    fn pair() -> impl Strategy<Value = MatrixSet> {
        [
            [[entry(), entry()], [entry(), entry()]],
            [[entry(), entry()], [entry(), entry()]],
        ]
        .prop_filter_map("all zero", |m| MatrixSet::from_2x2(&m).ok())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn sandwich_across_depths(set in pair()) {
            let nm = AngularNorm::euclidean(720).unwrap();
            let all: Vec<_> = (1..=6).map(|n| product_bounds(&set, n, &nm).unwrap()).collect();
            for a in &all {
                for b in &all {
                    prop_assert!(a.lower <= b.upper + 1e-9, "{:?} vs {:?}", a, b);
                }
            }
        }

        #[test]
        fn permutation_invariant(set in pair()) {
            let nm = AngularNorm::euclidean(90).unwrap();
            let mut rev = set.matrices().to_vec();
            rev.reverse();
            let rev = MatrixSet::new(rev).unwrap();
            for n in 1..=5 {
                prop_assert_eq!(product_bounds(&set, n, &nm).unwrap(), product_bounds(&rev, n, &nm).unwrap());
                prop_assert_eq!(trace_estimate(&set, n).unwrap(), trace_estimate(&rev, n).unwrap());
            }
        }

        #[test]
        fn bounds_scale_with_family(set in pair(), c in prop_oneof![-4.0..-0.25f64, 0.25..4.0f64]) {
            let nm = AngularNorm::euclidean(90).unwrap();
            let scaled = set.scaled(c).unwrap();
            for n in 1..=4 {
                let a = product_bounds(&set, n, &nm).unwrap();
                let b = product_bounds(&scaled, n, &nm).unwrap();
                prop_assert!((b.lower - c.abs() * a.lower).abs() <= 1e-12 * b.lower.max(1e-300));
                prop_assert!((b.upper - c.abs() * a.upper).abs() <= 1e-12 * b.upper.max(1e-300));
            }
        }
    }
}
