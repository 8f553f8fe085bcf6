//! Seeded random σ-spaces for tests, benchmarks and the `random` CLI command.

use rand::seq::index::sample;
use rand::Rng;

use crate::error::Result;
use crate::space::{GridSpec, SigmaSpace};

/// How σ values are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Values {
    /// Uniform reals in `[lo, hi)`.
    Uniform { lo: f64, hi: f64 },
    /// Uniform integers in `[lo, hi]`, stored exactly.
    Integer { lo: i64, hi: i64 },
}

impl Values {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Values::Uniform { lo, hi } => rng.random_range(lo..hi),
            Values::Integer { lo, hi } => rng.random_range(lo..=hi) as f64,
        }
    }
}

/// Labels `P0`, `P1`, ...
pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("P{i}")).collect()
}

/// A table-backed space with zero diagonal. When `symmetric` is false every
/// ordered pair gets an independent draw.
pub fn random_table<R: Rng + ?Sized>(rng: &mut R, n: usize, values: Values, symmetric: bool) -> Result<SigmaSpace> {
    let labels = labels(n);
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in i + 1..n {
            let forward = values.draw(rng);
            let backward = if symmetric { forward } else { values.draw(rng) };
            entries.push((labels[i].as_str(), labels[j].as_str(), forward));
            entries.push((labels[j].as_str(), labels[i].as_str(), backward));
        }
    }
    SigmaSpace::from_table(&labels, entries)
}

/// A `size^dim` grid with between `min_deleted` and `max_deleted` distinct
/// points removed (never all of them).
pub fn random_deleted_grid<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    size: usize,
    min_deleted: usize,
    max_deleted: usize,
) -> Result<(GridSpec, SigmaSpace)> {
    let total = size.pow(dim as u32);
    let max_deleted = max_deleted.min(total.saturating_sub(1));
    let count = rng.random_range(min_deleted.min(max_deleted)..=max_deleted);
    let mut spec = GridSpec::new(dim, size);
    for flat in sample(rng, total, count) {
        let mut coords = vec![0; dim];
        let mut rest = flat;
        for axis in (0..dim).rev() {
            coords[axis] = rest % size;
            rest /= size;
        }
        spec.deleted.insert(coords);
    }
    let space = SigmaSpace::grid(&spec)?;
    Ok((spec, space))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tables_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..6 {
            let s = random_table(&mut rng, n, Values::Uniform { lo: 0.0, hi: 10.0 }, true).unwrap();
            assert!(s.is_symmetric());
            assert_eq!(s.len(), n);
        }
        let a = random_table(&mut rng, 4, Values::Integer { lo: 0, hi: 9 }, false).unwrap();
        assert!(a.sigma_matrix().iter().all(|x| x.fract() == 0.0));
    }

    #[test]
    fn seeded_generation_is_deterministic() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            random_table(&mut rng, 5, Values::Uniform { lo: 0.0, hi: 10.0 }, false)
                .unwrap()
                .sigma_matrix()
        };
        assert_eq!(draw(3), draw(3));
        assert_ne!(draw(3), draw(4));
    }

    #[test]
    fn deleted_grid_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (spec, space) = random_deleted_grid(&mut rng, 2, 3, 1, 4).unwrap();
            assert!((1..=4).contains(&spec.deleted.len()));
            assert_eq!(space.len(), 9 - spec.deleted.len());
        }
    }
}
