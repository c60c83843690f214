use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Point, SimplePolygon};
use crate::error::Result;

/// Seeded Monte-Carlo estimate of the fraction of the polygon's area seen
/// from at least one viewpoint. The standard error is below
/// `0.5 / sqrt(sample_count)`.
pub fn coverage_fraction(
    poly: &SimplePolygon,
    viewpoints: &[Point],
    sample_count: usize,
    seed: u64,
) -> Result<f64> {
    for &v in viewpoints {
        poly.require(v, "viewpoint")?;
    }
    if viewpoints.is_empty() || sample_count == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = 0usize;
    for _ in 0..sample_count {
        let q = sample_interior(poly, &mut rng);
        if viewpoints.iter().any(|&v| poly.sees_unchecked(v, q)) {
            seen += 1;
        }
    }
    Ok(seen as f64 / sample_count as f64)
}

/// Uniform point in the polygon by rejection from the bounding box.
pub fn sample_interior<R: Rng>(poly: &SimplePolygon, rng: &mut R) -> Point {
    let (lo, hi) = poly.bbox();
    loop {
        let q = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if poly.contains(q) {
            return q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::shapes::*;

    #[test]
    fn convex_fully_covered() {
        let f = coverage_fraction(&unit_square(), &[Point::new(0.5, 0.5)], 2000, 1).unwrap();
        assert_eq!(f, 1.0);
    }

    #[test]
    fn u_from_the_left_corner_misses_the_right_tower() {
        let f = coverage_fraction(&u_shape(), &[Point::new(0.5, 0.5)], 4000, 2).unwrap();
        assert!(f < 1.0);
        assert!(f > 0.5);
    }

    #[test]
    fn empty_viewpoints_is_zero() {
        assert_eq!(coverage_fraction(&u_shape(), &[], 10, 0).unwrap(), 0.0);
    }
}
