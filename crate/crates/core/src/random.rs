//! Seeded random operators for property tests and benchmarks.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gauss::GaussRational;
use crate::multi_index::MultiIndex;
use crate::operator::{ScalarPDO, Space};
use crate::poly::Poly;

const AXES: [&str; 4] = ["x", "y", "z", "t"];

/// Size limits for [`random_scalar`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub max_dim: usize,
    pub max_order: u32,
    pub max_terms: usize,
    /// Numerators are drawn from `-bound..=bound`.
    pub bound: i64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        Self { max_dim: 4, max_order: 6, max_terms: 6, bound: 5 }
    }
}

fn ratio(rng: &mut impl Rng, bound: i64) -> BigRational {
    BigRational::new(rng.gen_range(-bound..=bound).into(), rng.gen_range(1..=4i64).into())
}

/// A nonzero Gaussian rational.
pub fn random_coeff(rng: &mut impl Rng, bound: i64) -> GaussRational {
    loop {
        let re = ratio(rng, bound);
        let im = if rng.gen_bool(0.5) { ratio(rng, bound) } else { BigRational::from_integer(0.into()) };
        let c = GaussRational::new(re, im);
        if c != GaussRational::from_int(0) {
            return c;
        }
    }
}

/// A multi-index in `dim` axes of total order exactly `order`.
pub fn random_index(rng: &mut impl Rng, dim: usize, order: u32) -> MultiIndex {
    let mut v = vec![0u32; dim];
    for _ in 0..order {
        v[rng.gen_range(0..dim)] += 1;
    }
    MultiIndex::new(v)
}

/// A space with `dim` of the axes `x, y, z, t`.
pub fn random_space(dim: usize) -> Space {
    Space::new(&AXES[..dim.clamp(1, AXES.len())], &[])
}

/// A nonzero scalar operator with at least one term of positive order.
pub fn random_scalar(rng: &mut impl Rng, spec: &RandomSpec) -> ScalarPDO {
    let dim = rng.gen_range(1..=spec.max_dim.clamp(1, AXES.len()));
    random_scalar_in(rng, &random_space(dim), spec)
}

/// Like [`random_scalar`] in a fixed space.
pub fn random_scalar_in(rng: &mut impl Rng, space: &Space, spec: &RandomSpec) -> ScalarPDO {
    let dim = space.dim();
    loop {
        let count = rng.gen_range(1..=spec.max_terms.max(1));
        let terms: Vec<(MultiIndex, Poly)> = (0..count)
            .map(|_| {
                let order = rng.gen_range(0..=spec.max_order);
                (random_index(rng, dim, order), Poly::constant(random_coeff(rng, spec.bound)))
            })
            .collect();
        let op = ScalarPDO::from_terms(space.clone(), terms).expect("dimensions agree");
        if op.order() > 0 {
            return op;
        }
    }
}

/// `count` operators from a fixed seed.
pub fn random_operators(seed: u64, count: usize, spec: &RandomSpec) -> Vec<ScalarPDO> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_scalar(&mut rng, spec)).collect()
}
