//! Point-pair vectors and their scalar product.
//!
//! A vector is an ordered pair of points `P₀P₁`. The scalar product of two
//! vectors is built from σ alone:
//!
//! ```text
//! (P₀P₁.Q₀Q₁) = σ(P₀,Q₁) + σ(P₁,Q₀) − σ(P₀,Q₀) − σ(P₁,Q₁)
//! ```
//!
//! The four terms are always summed in this order so results are
//! reproducible bit for bit.

use std::fmt;

use crate::error::{Error, Result};
use crate::space::{PointId, SigmaSpace};

/// Largest space `verify_identities` enumerates by default (5-tuple pass).
pub const IDENTITY_POINT_LIMIT: usize = 12;

/// The ordered pair `origin → end`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector {
    pub origin: PointId,
    pub end: PointId,
}

impl Vector {
    pub fn new(origin: impl Into<PointId>, end: impl Into<PointId>) -> Self {
        Vector {
            origin: origin.into(),
            end: end.into(),
        }
    }

    pub fn is_null(&self) -> bool {
        self.origin == self.end
    }

    pub(crate) fn from_indices(space: &SigmaSpace, (origin, end): (usize, usize)) -> Self {
        Vector {
            origin: space.point(origin).clone(),
            end: space.point(end).clone(),
        }
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.origin, self.end)
    }
}

/// Resolves both endpoints to point indices of `space`.
pub fn resolve(space: &SigmaSpace, v: &Vector) -> Result<(usize, usize)> {
    Ok((space.index_of(v.origin.as_str())?, space.index_of(v.end.as_str())?))
}

/// Scalar product on point indices.
#[inline]
pub(crate) fn dot(space: &SigmaSpace, (p0, p1): (usize, usize), (q0, q1): (usize, usize)) -> f64 {
    space.sigma(p0, q1) + space.sigma(p1, q0) - space.sigma(p0, q0) - space.sigma(p1, q1)
}

pub fn scalar_product(space: &SigmaSpace, v: &Vector, w: &Vector) -> Result<f64> {
    Ok(dot(space, resolve(space, v)?, resolve(space, w)?))
}

/// `(v.v)`. Equals `2σ(P₀,P₁)` when σ is symmetric.
pub fn norm_squared(space: &SigmaSpace, v: &Vector) -> Result<f64> {
    let v = resolve(space, v)?;
    Ok(dot(space, v, v))
}

/// The universal identities of the scalar product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    /// `(P₀P₁.Q₀Q₁) = (Q₀Q₁.P₀P₁)`, symmetric σ only.
    Symmetry,
    /// `(P₀P₁.Q₀Q₁) = −(P₀P₁.Q₁Q₀)`
    SecondSlotAntisymmetry,
    /// `(Q₀Q₁.P₀P₁) = −(Q₀Q₁.P₁P₀)`
    FirstSlotAntisymmetry,
    /// `(P₀P₁.Q₀Q₁) + (P₁P₂.Q₀Q₁) = (P₀P₂.Q₀Q₁)`
    FirstSlotChain,
    /// `(Q₀Q₁.P₀P₁) + (Q₀Q₁.P₁P₂) = (Q₀Q₁.P₀P₂)`
    SecondSlotChain,
}

impl IdentityId {
    /// Short identity code used in reports, e.g. `a5.0`.
    pub fn tag(self) -> &'static str {
        match self {
            IdentityId::Symmetry => "a2.1",
            IdentityId::SecondSlotAntisymmetry => "a3",
            IdentityId::FirstSlotAntisymmetry => "a4",
            IdentityId::FirstSlotChain => "a5",
            IdentityId::SecondSlotChain => "a5.0",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityViolation {
    pub identity: IdentityId,
    /// `(P₀, P₁, Q₀, Q₁)` for 4-point identities, `(P₀, P₁, P₂, Q₀, Q₁)` for chains.
    pub points: Vec<PointId>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct IdentityReport {
    /// Number of (identity, tuple) evaluations.
    pub checked: u64,
    /// False when σ is asymmetric and the symmetry identity was skipped.
    pub symmetry_checked: bool,
    pub violations: Vec<IdentityViolation>,
}

impl IdentityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, identity: IdentityId) -> usize {
        self.violations.iter().filter(|v| v.identity == identity).count()
    }
}

/// Exhaustively checks every identity over all tuples of points.
pub fn verify_identities(space: &SigmaSpace) -> Result<IdentityReport> {
    verify_identities_with_limit(space, IDENTITY_POINT_LIMIT)
}

/// As [`verify_identities`] with an explicit bound on `|Ω|`.
/// Larger spaces are refused rather than sampled.
pub fn verify_identities_with_limit(space: &SigmaSpace, max_points: usize) -> Result<IdentityReport> {
    let n = space.len();
    if n > max_points {
        return Err(Error::SearchLimitExceeded {
            size: n,
            limit: max_points,
        });
    }
    let eps = space.tolerance();
    let symmetric = space.is_symmetric();
    let mut report = IdentityReport {
        symmetry_checked: symmetric,
        ..Default::default()
    };
    let mut record = |identity: IdentityId, tuple: &[usize], lhs: f64, rhs: f64| {
        report.checked += 1;
        if (lhs - rhs).abs() > eps {
            report.violations.push(IdentityViolation {
                identity,
                points: tuple.iter().map(|&i| space.point(i).clone()).collect(),
                lhs,
                rhs,
            });
        }
    };

    for p0 in 0..n {
        for p1 in 0..n {
            for q0 in 0..n {
                for q1 in 0..n {
                    let t = [p0, p1, q0, q1];
                    let (p, q) = ((p0, p1), (q0, q1));
                    let pq = dot(space, p, q);
                    if symmetric {
                        record(IdentityId::Symmetry, &t, pq, dot(space, q, p));
                    }
                    record(IdentityId::SecondSlotAntisymmetry, &t, pq, -dot(space, p, (q1, q0)));
                    record(
                        IdentityId::FirstSlotAntisymmetry,
                        &t,
                        dot(space, q, p),
                        -dot(space, q, (p1, p0)),
                    );
                    for p2 in 0..n {
                        let t = [p0, p1, p2, q0, q1];
                        record(
                            IdentityId::FirstSlotChain,
                            &t,
                            pq + dot(space, (p1, p2), q),
                            dot(space, (p0, p2), q),
                        );
                        record(
                            IdentityId::SecondSlotChain,
                            &t,
                            dot(space, q, p) + dot(space, q, (p1, p2)),
                            dot(space, q, (p0, p2)),
                        );
                    }
                }
            }
        }
    }
    report
        .violations
        .sort_by(|a, b| (a.identity, &a.points).cmp(&(b.identity, &b.points)));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::GridSpec;

    fn three_point() -> SigmaSpace {
        SigmaSpace::from_table(
            &["A", "B", "C"],
            [
                ("A", "B", 1.0),
                ("B", "A", 1.0),
                ("A", "C", 4.0),
                ("C", "A", 4.0),
                ("B", "C", 1.0),
                ("C", "B", 1.0),
            ],
        )
        .unwrap()
    }

    fn grid3() -> SigmaSpace {
        SigmaSpace::grid(&GridSpec::new(2, 3)).unwrap()
    }

    #[test]
    fn null_vector_has_zero_products() {
        let space = three_point();
        for w in [Vector::new("A", "B"), Vector::new("C", "A"), Vector::new("B", "B")] {
            assert_eq!(scalar_product(&space, &Vector::new("B", "B"), &w).unwrap(), 0.0);
        }
        assert_eq!(norm_squared(&space, &Vector::new("C", "C")).unwrap(), 0.0);
    }

    #[test]
    fn table_scalar_product() {
        let space = three_point();
        // σ(A,C) + σ(B,A) − σ(A,A) − σ(B,C) = 4 + 1 − 0 − 1
        assert_eq!(
            scalar_product(&space, &Vector::new("A", "B"), &Vector::new("A", "C")).unwrap(),
            4.0
        );
        assert_eq!(norm_squared(&space, &Vector::new("A", "B")).unwrap(), 2.0);
    }

    #[test]
    fn grid_scalar_product_matches_dot() {
        let space = grid3();
        let v = Vector::new("p0_0", "p1_0");
        let w = Vector::new("p0_1", "p2_2");
        assert_eq!(scalar_product(&space, &v, &w).unwrap(), 2.0);
        assert_eq!(norm_squared(&space, &Vector::new("p0_0", "p2_2")).unwrap(), 8.0);

        let big = SigmaSpace::grid(&GridSpec::new(2, 5)).unwrap();
        assert_eq!(norm_squared(&big, &Vector::new("p0_0", "p3_4")).unwrap(), 25.0);
    }

    #[test]
    fn unknown_point_is_reported() {
        let space = three_point();
        assert_eq!(
            scalar_product(&space, &Vector::new("A", "Z"), &Vector::new("A", "B")),
            Err(Error::UnknownPoint("Z".into()))
        );
    }

    #[test]
    fn identities_hold_on_symmetric_table() {
        let report = verify_identities(&three_point()).unwrap();
        assert!(report.symmetry_checked);
        assert!(report.is_clean());
        // 3⁴ tuples × 3 four-point identities + 3⁵ tuples × 2 chains.
        assert_eq!(report.checked, 81 * 3 + 243 * 2);
    }

    #[test]
    fn identities_on_asymmetric_table_skip_symmetry() {
        let space = three_point().perturb([("B", "A", 1.0)]).unwrap();
        assert!(!space.is_symmetric());
        let report = verify_identities(&space).unwrap();
        assert!(!report.symmetry_checked);
        assert!(report.is_clean());
    }

    #[test]
    fn single_point_identities() {
        let space = SigmaSpace::from_table(&["A"], Vec::<(&str, &str, f64)>::new()).unwrap();
        let report = verify_identities(&space).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.checked, 5);
    }

    #[test]
    fn identity_guard_refuses_large_spaces() {
        let space = SigmaSpace::grid(&GridSpec::new(2, 4)).unwrap();
        assert_eq!(
            verify_identities(&space),
            Err(Error::SearchLimitExceeded { size: 16, limit: 12 })
        );
    }

    #[test]
    fn near_symmetric_table_can_violate_symmetry_identity() {
        // Each pair is asymmetric by 0.4 < ε, but the four-term products
        // accumulate the defects: (AB.CA) − (CA.AB) = 3 × 0.4.
        let space = SigmaSpace::from_table_with_tolerance(
            &["A", "B", "C"],
            [
                ("A", "B", 1.4),
                ("B", "A", 1.0),
                ("B", "C", 1.4),
                ("C", "B", 1.0),
                ("C", "A", 1.4),
                ("A", "C", 1.0),
            ],
            0.5,
        )
        .unwrap();
        assert!(space.is_symmetric());
        let report = verify_identities(&space).unwrap();
        assert!(report.count(IdentityId::Symmetry) > 0);
        assert_eq!(report.count(IdentityId::SecondSlotAntisymmetry), 0);
        assert_eq!(report.count(IdentityId::FirstSlotChain), 0);
        assert!(report.violations.iter().all(|v| (v.lhs - v.rhs).abs() > 0.5));
        assert!(report
            .violations
            .iter()
            .any(|v| ((v.lhs - v.rhs).abs() - 1.2).abs() < 1e-12));
        let mut sorted = report.violations.clone();
        sorted.sort_by(|a, b| a.points.cmp(&b.points));
        assert_eq!(sorted, report.violations);
    }
}
