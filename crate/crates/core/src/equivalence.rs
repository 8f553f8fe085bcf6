//! Vector equivalence.
//!
//! Two vectors `v` and `w` are equivalent when, for every probe pair
//! `(Q₀, Q₁) ∈ Ω²`, both `(v.Q₀Q₁) = (w.Q₀Q₁)` and `(Q₀Q₁.v) = (Q₀Q₁.w)`
//! hold within the space's tolerance.
//!
//! Probes are visited by (index of Q₀, index of Q₁) in the space's point
//! order; the whole first-slot pass runs before the second-slot pass.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::error::Result;
use crate::space::{PointId, SigmaSpace};
use crate::vector::{dot, resolve, Vector};

/// Which argument of the scalar product the tested vector occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    /// `(v.Q₀Q₁)`
    First,
    /// `(Q₀Q₁.v)`
    Second,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slot::First => "first-slot",
            Slot::Second => "second-slot",
        })
    }
}

/// The first probe at which two vectors disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub q0: PointId,
    pub q1: PointId,
    pub slot: Slot,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceWitness {
    pub equivalent: bool,
    pub counterexample: Option<Counterexample>,
}

/// Scalar products of one vector against every probe pair, first slot then
/// second slot. Length `2·|Ω|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint(Vec<f64>);

impl Fingerprint {
    pub fn of(space: &SigmaSpace, v: &Vector) -> Result<Self> {
        Ok(Fingerprint(fingerprint_at(space, resolve(space, v)?)))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Componentwise agreement within `eps`.
    pub fn agrees(&self, other: &Fingerprint, eps: f64) -> bool {
        agree(&self.0, &other.0, eps)
    }
}

pub(crate) fn fingerprint_at(space: &SigmaSpace, v: (usize, usize)) -> Vec<f64> {
    let n = space.len();
    let mut values = Vec::with_capacity(2 * n * n);
    for q0 in 0..n {
        for q1 in 0..n {
            values.push(dot(space, v, (q0, q1)));
        }
    }
    for q0 in 0..n {
        for q1 in 0..n {
            values.push(dot(space, (q0, q1), v));
        }
    }
    values
}

#[inline]
pub(crate) fn agree(a: &[f64], b: &[f64], eps: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= eps)
}

/// Decides equivalence directly, returning the first failing probe.
pub fn equivalent(space: &SigmaSpace, v: &Vector, w: &Vector) -> Result<EquivalenceWitness> {
    let (v, w) = (resolve(space, v)?, resolve(space, w)?);
    let n = space.len();
    let eps = space.tolerance();
    for slot in [Slot::First, Slot::Second] {
        for q0 in 0..n {
            for q1 in 0..n {
                let q = (q0, q1);
                let (lhs, rhs) = match slot {
                    Slot::First => (dot(space, v, q), dot(space, w, q)),
                    Slot::Second => (dot(space, q, v), dot(space, q, w)),
                };
                if (lhs - rhs).abs() > eps {
                    return Ok(EquivalenceWitness {
                        equivalent: false,
                        counterexample: Some(Counterexample {
                            q0: space.point(q0).clone(),
                            q1: space.point(q1).clone(),
                            slot,
                            lhs,
                            rhs,
                        }),
                    });
                }
            }
        }
    }
    Ok(EquivalenceWitness {
        equivalent: true,
        counterexample: None,
    })
}

/// All `|Ω|²` vectors of a space grouped into equivalence classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Each class sorted; classes ordered by their smallest member.
    pub classes: Vec<Vec<Vector>>,
    /// Quantized bucketing could not be confirmed and classes were formed by
    /// exact pairwise comparison.
    pub fallback_used: bool,
    /// Every pair inside every class is equivalent. False only when ε-equality
    /// failed to be transitive and classes are transitive closures.
    pub transitive: bool,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of(&self, v: &Vector) -> Option<usize> {
        self.classes.iter().position(|c| c.binary_search(v).is_ok())
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
    }
}

fn quantize(values: &[f64], eps: f64) -> Vec<i64> {
    if eps > 0.0 {
        // `as` saturates; collisions from saturation are caught by verification.
        values.iter().map(|x| (x / eps).round() as i64).collect()
    } else {
        values.iter().map(|x| (x + 0.0).to_bits() as i64).collect()
    }
}

/// Keys that differ by at most one step in every component may hold values
/// within ε of each other.
fn keys_adjacent(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.abs_diff(*y) <= 1)
}

/// Partitions every vector of the space into equivalence classes.
///
/// Fingerprints are hashed after quantization to multiples of ε, and every
/// resulting bucket is then verified. If any check fails the partition is
/// rebuilt by exact pairwise comparison with union-find.
pub fn equivalence_classes(space: &SigmaSpace) -> Partition {
    let n = space.len();
    let eps = space.tolerance();
    let vectors: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let fingerprints: Vec<Vec<f64>> = vectors.par_iter().map(|&v| fingerprint_at(space, v)).collect();

    let mut bucket_of_key: HashMap<Vec<i64>, usize> = HashMap::new();
    let mut keys: Vec<Vec<i64>> = Vec::new();
    let mut buckets: Vec<Vec<usize>> = Vec::new();
    for (i, fp) in fingerprints.iter().enumerate() {
        let key = quantize(fp, eps);
        let next = buckets.len();
        let b = *bucket_of_key.entry(key.clone()).or_insert(next);
        if b == next {
            keys.push(key);
            buckets.push(Vec::new());
        }
        buckets[b].push(i);
    }

    let same = |a: usize, b: usize| agree(&fingerprints[a], &fingerprints[b], eps);
    let within_ok = buckets.par_iter().all(|members| {
        members
            .iter()
            .enumerate()
            .all(|(k, &a)| members[k + 1..].iter().all(|&b| same(a, b)))
    });
    let across_ok = within_ok
        && eps > 0.0
        && (0..buckets.len()).into_par_iter().all(|x| {
            (x + 1..buckets.len()).all(|y| {
                !keys_adjacent(&keys[x], &keys[y])
                    || buckets[x].iter().all(|&a| buckets[y].iter().all(|&b| !same(a, b)))
            })
        });
    // With ε = 0 keys are exact bit patterns, so distinct keys never agree.
    let fast_path = within_ok && (across_ok || eps == 0.0);

    let (groups, fallback_used, transitive) = if fast_path {
        (buckets, false, true)
    } else {
        let mut sets = DisjointSets::new(vectors.len());
        for a in 0..vectors.len() {
            for b in a + 1..vectors.len() {
                if same(a, b) {
                    sets.union(a, b);
                }
            }
        }
        let mut by_root: HashMap<usize, usize> = HashMap::new();
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for a in 0..vectors.len() {
            let root = sets.find(a);
            let next = groups.len();
            let g = *by_root.entry(root).or_insert(next);
            if g == next {
                groups.push(Vec::new());
            }
            groups[g].push(a);
        }
        let transitive = groups.iter().all(|members| {
            members
                .iter()
                .enumerate()
                .all(|(k, &a)| members[k + 1..].iter().all(|&b| same(a, b)))
        });
        (groups, true, transitive)
    };

    let mut classes: Vec<Vec<Vector>> = groups
        .into_iter()
        .map(|members| {
            let mut class: Vec<Vector> = members
                .into_iter()
                .map(|i| Vector::from_indices(space, vectors[i]))
                .collect();
            class.sort();
            class
        })
        .collect();
    classes.sort_by(|a, b| a[0].cmp(&b[0]));
    Partition {
        classes,
        fallback_used,
        transitive,
    }
}
