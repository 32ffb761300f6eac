//! Seeded instance generators.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{BarycenterInstance, DiscreteMeasure, Point};
use crate::numeric::{ratio, Rational};

fn uniform_weights(k: usize) -> Vec<Rational> {
    vec![ratio(1, k as i64); k]
}

fn positive(name: &str, v: usize) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidInstance(format!("{name} must be positive")));
    }
    Ok(())
}

/// `k` uniform measures on `n` points each, coordinates drawn uniformly from
/// the multiples of `1/denominator` in `[-1, 1]`, uniform weights.
pub fn random_instance(n: usize, k: usize, seed: u64, denominator: u64) -> Result<BarycenterInstance> {
    positive("n", n)?;
    positive("k", k)?;
    positive("denominator", denominator as usize)?;
    let den = i64::try_from(denominator).map_err(|_| Error::InvalidInstance("denominator too large".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let measures = (0..k)
        .map(|_| {
            let atoms = (0..n)
                .map(|_| vec![ratio(rng.random_range(-den..=den), den), ratio(rng.random_range(-den..=den), den)])
                .collect();
            DiscreteMeasure::new(atoms, vec![ratio(1, n as i64); n])
        })
        .collect::<Result<Vec<_>>>()?;
    BarycenterInstance::new(2, measures, uniform_weights(k))
}

/// One Dirac per point, uniform weights.
pub fn diracs(points: Vec<Point>) -> Result<BarycenterInstance> {
    positive("number of points", points.len())?;
    let d = points[0].len();
    let k = points.len();
    let measures = points.into_iter().map(DiscreteMeasure::dirac).collect();
    BarycenterInstance::new(d, measures, uniform_weights(k))
}

/// Axis-aligned ellipse with rational center and semi-axes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ellipse {
    pub center: (Rational, Rational),
    pub semi_axes: (Rational, Rational),
}

impl Ellipse {
    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        let u = (x - &self.center.0) / &self.semi_axes.0;
        let v = (y - &self.center.1) / &self.semi_axes.1;
        &u * &u + &v * &v <= Rational::from_integer(BigInt::from(1))
    }
}

/// Pixel centers `((c + 1/2) / m, (r + 1/2) / m)` lit by a pair of nested
/// ellipses: inside the outer one and outside the inner one, or inside a
/// small core ellipse within the inner one.
pub fn nested_ellipse_pixels(m: usize, outer: &Ellipse, inner: &Ellipse, core: &Ellipse) -> Vec<Point> {
    let mut lit = Vec::new();
    for r in 0..m {
        for c in 0..m {
            let x = ratio(2 * c as i64 + 1, 2 * m as i64);
            let y = ratio(2 * r as i64 + 1, 2 * m as i64);
            let ring = outer.contains(&x, &y) && !inner.contains(&x, &y);
            if ring || core.contains(&x, &y) {
                lit.push(vec![x, y]);
            }
        }
    }
    lit
}

/// Synthetic images in the style of a nested-ellipses benchmark: `k` images
/// on an `m x m` grid of the unit square, each a random ring plus core, turned
/// into uniform measures over their lit pixels.
pub fn ellipses(m: usize, k: usize, seed: u64) -> Result<BarycenterInstance> {
    positive("m", m)?;
    positive("k", k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut measures = Vec::with_capacity(k);
    while measures.len() < k {
        let q = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| ratio(rng.random_range(lo..=hi), 100);
        let center = (q(&mut rng, 40, 60), q(&mut rng, 40, 60));
        let outer_axes = (q(&mut rng, 25, 40), q(&mut rng, 25, 40));
        let shrink = q(&mut rng, 50, 75);
        let outer = Ellipse { center: center.clone(), semi_axes: outer_axes.clone() };
        let inner = Ellipse {
            center: center.clone(),
            semi_axes: (&outer_axes.0 * &shrink, &outer_axes.1 * &shrink),
        };
        let core = Ellipse {
            center,
            semi_axes: (&inner.semi_axes.0 / Rational::from_integer(3.into()), &inner.semi_axes.1 / Rational::from_integer(3.into())),
        };
        let pixels = nested_ellipse_pixels(m, &outer, &inner, &core);
        if pixels.is_empty() {
            continue;
        }
        let n = pixels.len() as i64;
        let masses = vec![ratio(1, n); pixels.len()];
        measures.push(DiscreteMeasure::new(pixels, masses)?);
    }
    BarycenterInstance::new(2, measures, uniform_weights(k))
}
