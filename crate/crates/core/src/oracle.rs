//! Naive reference implementations.
//!
//! Nothing here reuses the main code paths: scalar products are expanded
//! inline from σ and every quantifier is a plain loop. Only the σ accessor
//! and label lookup are shared with the rest of the crate.

use crate::error::{Error, Result};
use crate::linear::Coefficients;
use crate::space::SigmaSpace;
use crate::vector::Vector;

/// Hard bound on `|Ω|` for [`brute_force_solve`].
pub const ORACLE_LIMIT: usize = 12;

/// `Σᵢ (p1ᵢ − p0ᵢ)(q1ᵢ − q0ᵢ)` straight from coordinates.
pub fn euclid_dot_oracle(p0: &[f64], p1: &[f64], q0: &[f64], q1: &[f64]) -> Result<f64> {
    let n = p0.len();
    for other in [p1, q0, q1] {
        if other.len() != n {
            return Err(Error::DimensionMismatch(n, other.len()));
        }
    }
    let mut total = 0.0;
    for i in 0..n {
        total += (p1[i] - p0[i]) * (q1[i] - q0[i]);
    }
    Ok(total)
}

fn lookup(space: &SigmaSpace, v: &Vector) -> Result<(usize, usize)> {
    Ok((space.index_of(v.origin.as_str())?, space.index_of(v.end.as_str())?))
}

fn sp(space: &SigmaSpace, p0: usize, p1: usize, q0: usize, q1: usize) -> f64 {
    space.sigma(p0, q1) + space.sigma(p1, q0) - space.sigma(p0, q0) - space.sigma(p1, q1)
}

/// Equivalence by a double loop over all probes, both slots.
pub fn brute_force_equivalent(space: &SigmaSpace, v: &Vector, w: &Vector) -> Result<bool> {
    let (p0, p1) = lookup(space, v)?;
    let (r0, r1) = lookup(space, w)?;
    let eps = space.tolerance();
    let n = space.len();
    for q0 in 0..n {
        for q1 in 0..n {
            if (sp(space, p0, p1, q0, q1) - sp(space, r0, r1, q0, q1)).abs() > eps {
                return Ok(false);
            }
            if (sp(space, q0, q1, p0, p1) - sp(space, q0, q1, r0, r1)).abs() > eps {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All `(S₀, S₁)` solving `S₀S₁ = αv + βw`, by a quadruple loop.
pub fn brute_force_solve(space: &SigmaSpace, c: Coefficients, v: &Vector, w: &Vector) -> Result<Vec<Vector>> {
    let (p0, p1) = lookup(space, v)?;
    let (r0, r1) = lookup(space, w)?;
    let n = space.len();
    if n > ORACLE_LIMIT {
        return Err(Error::OracleLimitExceeded {
            size: n,
            limit: ORACLE_LIMIT,
        });
    }
    let eps = space.tolerance();
    let (alpha, beta) = (c.alpha, c.beta);
    let mut found = Vec::new();
    for s0 in 0..n {
        for s1 in 0..n {
            let mut ok = true;
            'probes: for q0 in 0..n {
                for q1 in 0..n {
                    let first = alpha * sp(space, p0, p1, q0, q1) + beta * sp(space, r0, r1, q0, q1);
                    let second = alpha * sp(space, q0, q1, p0, p1) + beta * sp(space, q0, q1, r0, r1);
                    if (sp(space, s0, s1, q0, q1) - first).abs() > eps
                        || (sp(space, q0, q1, s0, s1) - second).abs() > eps
                    {
                        ok = false;
                        break 'probes;
                    }
                }
            }
            if ok {
                found.push(Vector::new(space.point(s0).clone(), space.point(s1).clone()));
            }
        }
    }
    found.sort();
    Ok(found)
}
