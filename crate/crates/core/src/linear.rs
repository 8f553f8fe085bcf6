//! Linear combinations of point-pair vectors.
//!
//! `S₀S₁ = αP₀P₁ + βR₀R₁` is defined when some vector `S₀S₁` satisfies
//!
//! ```text
//! (S₀S₁.Q₀Q₁) = α(P₀P₁.Q₀Q₁) + β(R₀R₁.Q₀Q₁)
//! (Q₀Q₁.S₀S₁) = α(Q₀Q₁.P₀P₁) + β(Q₀Q₁.R₀R₁)
//! ```
//!
//! for every probe pair `(Q₀, Q₁)`. Only a few cases are defined in every
//! σ-space (see [`CaseId`]); everything else is decided by exhaustive search.

use std::fmt;

use rayon::prelude::*;

use crate::equivalence::fingerprint_at;
use crate::error::{Error, Result};
use crate::space::{PointId, SigmaSpace};
use crate::vector::{resolve, Vector};

/// Default bound on `|Ω|` for [`solve_combination`].
pub const SEARCH_LIMIT: usize = 40;
/// Default bound on `|Ω|` for [`survey_linearity`], which runs one search per vector pair.
pub const SURVEY_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub alpha: f64,
    pub beta: f64,
}

impl Coefficients {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha.is_finite() && beta.is_finite() {
            Ok(Coefficients { alpha, beta })
        } else {
            Err(Error::NonFiniteCoefficient(alpha, beta))
        }
    }

    fn check(&self) -> Result<()> {
        Coefficients::new(self.alpha, self.beta).map(|_| ())
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.alpha, self.beta)
    }
}

/// Combinations that exist in every σ-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// `α = β = 0`.
    Zero,
    /// One coefficient is 0, the other ±1.
    SingleVector,
    /// `α = β = ±1` and the vectors are chained (`P₁ = R₀` or `R₁ = P₀`).
    ChainSum,
    /// `α = −β = ±1` and the vectors share an end (`P₁ = R₁`) or an origin (`P₀ = R₀`).
    CommonEndpointDifference,
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseId::Zero => "zero",
            CaseId::SingleVector => "single-vector",
            CaseId::ChainSum => "chain-sum",
            CaseId::CommonEndpointDifference => "common-endpoint-difference",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// A guaranteed case applied; the representative was built directly.
    Constructed,
    /// No guaranteed case; solutions come from search alone.
    Searched,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinationResult {
    /// Every vector satisfying the combination constraints, sorted.
    pub solutions: Vec<Vector>,
    pub guaranteed: Option<CaseId>,
    /// The constructed vector when `guaranteed` is present.
    pub representative: Option<Vector>,
    pub method: Method,
}

impl CombinationResult {
    pub fn is_defined(&self) -> bool {
        !self.solutions.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub limit: usize,
    /// Run even when `|Ω|` exceeds `limit`.
    pub force: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            limit: SEARCH_LIMIT,
            force: false,
        }
    }
}

impl SolveOptions {
    fn admit(&self, space: &SigmaSpace) -> Result<()> {
        if !self.force && space.len() > self.limit {
            return Err(Error::SearchLimitExceeded {
                size: space.len(),
                limit: self.limit,
            });
        }
        Ok(())
    }
}

/// `P₁P₀ = −P₀P₁`.
pub fn negate(v: &Vector) -> Vector {
    Vector {
        origin: v.end.clone(),
        end: v.origin.clone(),
    }
}

/// `P₀P₁ + P₁P₂ = P₀P₂`. Only chained vectors can be added this way.
pub fn chain_sum(v: &Vector, w: &Vector) -> Result<Vector> {
    if v.end != w.origin {
        return Err(Error::ChainMismatch(
            v.origin.to_string(),
            v.end.to_string(),
            w.origin.to_string(),
            w.end.to_string(),
        ));
    }
    Ok(Vector {
        origin: v.origin.clone(),
        end: w.end.clone(),
    })
}

fn is_unit(x: f64) -> bool {
    x == 1.0 || x == -1.0
}

fn classify(c: Coefficients, (p0, p1): (usize, usize), (r0, r1): (usize, usize)) -> Option<CaseId> {
    let (a, b) = (c.alpha, c.beta);
    if a == 0.0 && b == 0.0 {
        Some(CaseId::Zero)
    } else if (a == 0.0 && is_unit(b)) || (b == 0.0 && is_unit(a)) {
        Some(CaseId::SingleVector)
    } else if is_unit(a) && a == b && (p1 == r0 || r1 == p0) {
        Some(CaseId::ChainSum)
    } else if is_unit(a) && a == -b && (p1 == r1 || p0 == r0) {
        Some(CaseId::CommonEndpointDifference)
    } else {
        None
    }
}

fn construct(c: Coefficients, p: (usize, usize), r: (usize, usize)) -> Option<(usize, usize)> {
    let flip = |(a, b): (usize, usize)| (b, a);
    let (p0, p1) = p;
    let (r0, r1) = r;
    let (a, b) = (c.alpha, c.beta);
    Some(match classify(c, p, r)? {
        CaseId::Zero => (p0, p0),
        CaseId::SingleVector if b == 0.0 => {
            if a == 1.0 {
                p
            } else {
                flip(p)
            }
        }
        CaseId::SingleVector => {
            if b == 1.0 {
                r
            } else {
                flip(r)
            }
        }
        CaseId::ChainSum => {
            let sum = if p1 == r0 { (p0, r1) } else { (r0, p1) };
            if a == 1.0 {
                sum
            } else {
                flip(sum)
            }
        }
        CaseId::CommonEndpointDifference => {
            // P₀P₁ − R₀P₁ = P₀R₀ and P₀P₁ − P₀R₁ = R₁P₁.
            let diff = if p1 == r1 { (p0, r0) } else { (r1, p1) };
            if a == 1.0 {
                diff
            } else {
                flip(diff)
            }
        }
    })
}

/// Which always-defined case, if any, covers `αv + βw`.
///
/// Coefficients are compared exactly against 0 and ±1. When several
/// endpoint coincidences hold, the first listed in [`CaseId`] wins.
pub fn guaranteed_case(space: &SigmaSpace, c: Coefficients, v: &Vector, w: &Vector) -> Result<Option<CaseId>> {
    Ok(classify(c, resolve(space, v)?, resolve(space, w)?))
}

/// Builds the representative of `αv + βw` for an always-defined case.
pub fn construct_guaranteed(space: &SigmaSpace, c: Coefficients, v: &Vector, w: &Vector) -> Result<Vector> {
    let s = construct(c, resolve(space, v)?, resolve(space, w)?).ok_or(Error::NotGuaranteed)?;
    Ok(Vector::from_indices(space, s))
}

/// Number of leading probes of each slot used to reject candidates before
/// full verification.
fn prefilter_len(n: usize) -> usize {
    n
}

/// Finds every `S₀S₁` solving the combination constraints, with default limits.
pub fn solve_combination(space: &SigmaSpace, c: Coefficients, v: &Vector, w: &Vector) -> Result<CombinationResult> {
    solve_combination_with(space, c, v, w, &SolveOptions::default())
}

pub fn solve_combination_with(
    space: &SigmaSpace,
    c: Coefficients,
    v: &Vector,
    w: &Vector,
    options: &SolveOptions,
) -> Result<CombinationResult> {
    c.check()?;
    let (pv, pw) = (resolve(space, v)?, resolve(space, w)?);
    options.admit(space)?;

    let n = space.len();
    let eps = space.tolerance();
    let (fv, fw) = (fingerprint_at(space, pv), fingerprint_at(space, pw));
    let target: Vec<f64> = fv.iter().zip(&fw).map(|(a, b)| c.alpha * a + c.beta * b).collect();

    let half = n * n;
    let pre = prefilter_len(n);
    let mut solutions: Vec<(usize, usize)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|s0| {
            let target = &target;
            (0..n).filter_map(move |s1| {
                let s = (s0, s1);
                // Cheap rejection on the probes (Q₀ = first point, Q₁ = any), both slots.
                let probe = |k: usize| {
                    let q = (k % half / n, k % n);
                    let value = if k < half {
                        crate::vector::dot(space, s, q)
                    } else {
                        crate::vector::dot(space, q, s)
                    };
                    (value - target[k]).abs() <= eps
                };
                if !(0..pre).all(probe) || !(half..half + pre).all(probe) {
                    return None;
                }
                let fs = fingerprint_at(space, s);
                crate::equivalence::agree(&fs, target, eps).then_some(s)
            })
        })
        .collect();
    solutions.sort_by(|&a, &b| Vector::from_indices(space, a).cmp(&Vector::from_indices(space, b)));

    let guaranteed = classify(c, pv, pw);
    let representative = construct(c, pv, pw).map(|s| Vector::from_indices(space, s));
    Ok(CombinationResult {
        solutions: solutions.into_iter().map(|s| Vector::from_indices(space, s)).collect(),
        method: if guaranteed.is_some() {
            Method::Constructed
        } else {
            Method::Searched
        },
        guaranteed,
        representative,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyRow {
    pub alpha: f64,
    pub beta: f64,
    /// Ordered vector pairs `(v, w)` examined.
    pub total_pairs: u64,
    /// Pairs for which `αv + βw` has at least one solution.
    pub solvable: u64,
    /// Pairs covered by an always-defined case.
    pub guaranteed: u64,
    /// Guaranteed pairs that the search also found solvable.
    pub guaranteed_solvable: u64,
    pub unsolvable: u64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SurveyReport {
    pub points: usize,
    pub rows: Vec<SurveyRow>,
}

impl SurveyReport {
    pub const CSV_HEADER: &'static str = "alpha,beta,total_pairs,solvable,guaranteed,guaranteed_solvable,unsolvable";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                r.alpha, r.beta, r.total_pairs, r.solvable, r.guaranteed, r.guaranteed_solvable, r.unsolvable
            ));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyOptions {
    pub limit: usize,
    pub force: bool,
    /// Only count pairs whose four endpoints lie in this set. Solutions and
    /// probes still range over the whole space.
    pub restrict_to: Option<Vec<PointId>>,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            limit: SURVEY_LIMIT,
            force: false,
            restrict_to: None,
        }
    }
}

/// For each coefficient pair, counts how many ordered vector pairs admit a
/// combination, how many are covered by a guaranteed case, and how many
/// have no solution.
pub fn survey_linearity(space: &SigmaSpace, coefficients: &[Coefficients]) -> Result<SurveyReport> {
    survey_linearity_with(space, coefficients, &SurveyOptions::default())
}

pub fn survey_linearity_with(
    space: &SigmaSpace,
    coefficients: &[Coefficients],
    options: &SurveyOptions,
) -> Result<SurveyReport> {
    for c in coefficients {
        c.check()?;
    }
    if !options.force && space.len() > options.limit {
        return Err(Error::SearchLimitExceeded {
            size: space.len(),
            limit: options.limit,
        });
    }
    let n = space.len();
    let eps = space.tolerance();
    let domain: Vec<usize> = match &options.restrict_to {
        None => (0..n).collect(),
        Some(labels) => {
            let mut idx = labels
                .iter()
                .map(|p| space.index_of(p.as_str()))
                .collect::<Result<Vec<_>>>()?;
            idx.sort_unstable();
            idx.dedup();
            idx
        }
    };

    let all: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let fingerprints: Vec<Vec<f64>> = all.par_iter().map(|&v| fingerprint_at(space, v)).collect();
    let fp = |(a, b): (usize, usize)| &fingerprints[a * n + b];
    let domain_vectors: Vec<(usize, usize)> = domain
        .iter()
        .flat_map(|&i| domain.iter().map(move |&j| (i, j)))
        .collect();

    let rows = coefficients
        .iter()
        .map(|&c| {
            let (solvable, guaranteed, guaranteed_solvable) = domain_vectors
                .par_iter()
                .map(|&v| {
                    let mut target = vec![0.0; 2 * n * n];
                    let mut counts = (0u64, 0u64, 0u64);
                    for &w in &domain_vectors {
                        for ((t, a), b) in target.iter_mut().zip(fp(v)).zip(fp(w)) {
                            *t = c.alpha * a + c.beta * b;
                        }
                        let ok = fingerprints
                            .iter()
                            .any(|fs| crate::equivalence::agree(fs, &target, eps));
                        let g = classify(c, v, w).is_some();
                        counts.0 += ok as u64;
                        counts.1 += g as u64;
                        counts.2 += (ok && g) as u64;
                    }
                    counts
                })
                .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
            let total = (domain_vectors.len() * domain_vectors.len()) as u64;
            SurveyRow {
                alpha: c.alpha,
                beta: c.beta,
                total_pairs: total,
                solvable,
                guaranteed,
                guaranteed_solvable,
                unsolvable: total - solvable,
            }
        })
        .collect();
    Ok(SurveyReport { points: n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::GridSpec;

    fn v(a: &str, b: &str) -> Vector {
        Vector::new(a, b)
    }

    fn coeffs(a: f64, b: f64) -> Coefficients {
        Coefficients::new(a, b).unwrap()
    }

    fn abcd() -> SigmaSpace {
        let labels = ["A", "B", "C", "D"];
        let mut entries = Vec::new();
        let mut k = 1.0;
        for (i, p) in labels.iter().enumerate() {
            for q in &labels[i + 1..] {
                entries.push((*p, *q, k));
                entries.push((*q, *p, k));
                k += 1.0;
            }
        }
        SigmaSpace::from_table(&labels, entries).unwrap()
    }

    #[test]
    fn negate_examples() {
        assert_eq!(negate(&v("A", "B")), v("B", "A"));
        assert_eq!(negate(&v("P", "P")), v("P", "P"));
        assert_eq!(negate(&negate(&v("A", "B"))), v("A", "B"));
    }

    #[test]
    fn chain_sum_examples() {
        assert_eq!(chain_sum(&v("A", "B"), &v("B", "C")).unwrap(), v("A", "C"));
        assert_eq!(chain_sum(&v("A", "B"), &v("B", "A")).unwrap(), v("A", "A"));
        assert!(matches!(
            chain_sum(&v("A", "B"), &v("C", "D")),
            Err(Error::ChainMismatch(..))
        ));
    }

    #[test]
    fn coefficients_must_be_finite() {
        assert!(Coefficients::new(f64::NAN, 1.0).is_err());
        assert!(Coefficients::new(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn classification() {
        let s = abcd();
        let case = |a, b, x: Vector, y: Vector| guaranteed_case(&s, coeffs(a, b), &x, &y).unwrap();
        assert_eq!(case(1.0, 1.0, v("A", "B"), v("B", "C")), Some(CaseId::ChainSum));
        assert_eq!(case(-1.0, -1.0, v("A", "B"), v("C", "A")), Some(CaseId::ChainSum));
        assert_eq!(
            case(1.0, -1.0, v("A", "B"), v("C", "B")),
            Some(CaseId::CommonEndpointDifference)
        );
        assert_eq!(
            case(-1.0, 1.0, v("A", "B"), v("A", "C")),
            Some(CaseId::CommonEndpointDifference)
        );
        assert_eq!(case(0.5, 0.5, v("A", "B"), v("B", "C")), None);
        assert_eq!(case(0.0, 0.0, v("A", "B"), v("C", "D")), Some(CaseId::Zero));
        assert_eq!(case(0.0, -1.0, v("A", "B"), v("C", "D")), Some(CaseId::SingleVector));
        assert_eq!(case(2.0, 0.0, v("A", "B"), v("C", "D")), None);
        assert_eq!(case(1.0, 1.0, v("A", "B"), v("C", "D")), None);
        assert_eq!(case(1.0, -1.0, v("A", "B"), v("B", "C")), None);
        assert!(guaranteed_case(&s, coeffs(1.0, 1.0), &v("A", "Z"), &v("A", "B")).is_err());
    }

    #[test]
    fn construction_table() {
        let s = abcd();
        let build = |a, b, x: Vector, y: Vector| construct_guaranteed(&s, coeffs(a, b), &x, &y);
        assert_eq!(build(1.0, 1.0, v("A", "B"), v("B", "C")).unwrap(), v("A", "C"));
        assert_eq!(build(1.0, 1.0, v("B", "C"), v("A", "B")).unwrap(), v("A", "C"));
        assert_eq!(build(-1.0, -1.0, v("A", "B"), v("B", "C")).unwrap(), v("C", "A"));
        assert_eq!(build(1.0, -1.0, v("A", "B"), v("C", "B")).unwrap(), v("A", "C"));
        assert_eq!(build(1.0, -1.0, v("A", "B"), v("A", "C")).unwrap(), v("C", "B"));
        assert_eq!(build(-1.0, 1.0, v("A", "B"), v("C", "B")).unwrap(), v("C", "A"));
        assert_eq!(build(0.0, 0.0, v("A", "B"), v("C", "D")).unwrap(), v("A", "A"));
        assert_eq!(build(-1.0, 0.0, v("A", "B"), v("C", "D")).unwrap(), v("B", "A"));
        assert_eq!(build(0.0, 1.0, v("A", "B"), v("C", "D")).unwrap(), v("C", "D"));
        assert_eq!(build(2.0, 1.0, v("A", "B"), v("B", "C")), Err(Error::NotGuaranteed));
    }

    #[test]
    fn both_coincidences_take_first_branch() {
        // P₁ = R₀ and R₁ = P₀ at once: (A,B) + (B,A) builds (A,A).
        let s = abcd();
        assert_eq!(
            construct_guaranteed(&s, coeffs(1.0, 1.0), &v("A", "B"), &v("B", "A")).unwrap(),
            v("A", "A")
        );
    }

    #[test]
    fn square_grid_axis_sum() {
        let full = SigmaSpace::grid(&GridSpec::new(2, 2)).unwrap();
        let r = solve_combination(&full, coeffs(1.0, 1.0), &v("p0_0", "p1_0"), &v("p0_0", "p0_1")).unwrap();
        assert_eq!(r.solutions, vec![v("p0_0", "p1_1")]);
        assert_eq!(r.guaranteed, None);
        assert_eq!(r.method, Method::Searched);

        let deleted = SigmaSpace::grid(&GridSpec::new(2, 2).delete([1, 1])).unwrap();
        let r = solve_combination(&deleted, coeffs(1.0, 1.0), &v("p0_0", "p1_0"), &v("p0_0", "p0_1")).unwrap();
        assert!(r.solutions.is_empty());
        assert!(!r.is_defined());
    }

    #[test]
    fn chained_sum_is_among_solutions() {
        let s = abcd();
        let r = solve_combination(&s, coeffs(1.0, 1.0), &v("A", "B"), &v("B", "C")).unwrap();
        assert_eq!(r.guaranteed, Some(CaseId::ChainSum));
        assert_eq!(r.representative, Some(v("A", "C")));
        assert!(r.solutions.contains(&v("A", "C")));
        assert_eq!(r.method, Method::Constructed);
    }

    #[test]
    fn search_limit_is_enforced() {
        let big = SigmaSpace::grid(&GridSpec::new(2, 7)).unwrap();
        let (x, y) = (v("p0_0", "p1_0"), v("p0_0", "p0_1"));
        assert_eq!(
            solve_combination(&big, coeffs(1.0, 1.0), &x, &y),
            Err(Error::SearchLimitExceeded { size: 49, limit: 40 })
        );
        let forced = SolveOptions {
            force: true,
            ..Default::default()
        };
        let r = solve_combination_with(&big, coeffs(1.0, 1.0), &x, &y, &forced).unwrap();
        // Displacement (1,1) fits in a 7×7 grid at 6×6 positions.
        assert_eq!(r.solutions.len(), 36);
    }

    #[test]
    fn non_unit_coefficients_on_grid() {
        let grid = SigmaSpace::grid(&GridSpec::new(1, 5)).unwrap();
        let r = solve_combination(&grid, coeffs(2.0, -1.0), &v("p0", "p1"), &v("p3", "p4")).unwrap();
        // 2·1 − 1 = 1: every unit step.
        assert_eq!(
            r.solutions,
            vec![v("p0", "p1"), v("p1", "p2"), v("p2", "p3"), v("p3", "p4")]
        );
        let r = solve_combination(&grid, coeffs(0.5, 0.0), &v("p0", "p1"), &v("p0", "p0")).unwrap();
        assert!(r.solutions.is_empty());
    }

    #[test]
    fn survey_single_point() {
        let s = SigmaSpace::from_table(&["P"], Vec::<(&str, &str, f64)>::new()).unwrap();
        let report = survey_linearity(&s, &[coeffs(0.5, 3.0)]).unwrap();
        assert_eq!(report.rows[0].total_pairs, 1);
        assert_eq!(report.rows[0].solvable, 1);
    }

    #[test]
    fn survey_deleted_grid() {
        let full = SigmaSpace::grid(&GridSpec::new(2, 2)).unwrap();
        let deleted = SigmaSpace::grid(&GridSpec::new(2, 2).delete([1, 1])).unwrap();
        let c = [coeffs(1.0, 1.0), coeffs(1.0, 0.0), coeffs(0.0, 0.0)];
        let a = survey_linearity(&full, &c).unwrap();
        let b = survey_linearity(&deleted, &c).unwrap();
        assert!(b.rows[0].solvable < a.rows[0].solvable);
        assert!(b.rows[0].guaranteed > 0);
        for report in [&a, &b] {
            for row in &report.rows {
                assert_eq!(row.guaranteed, row.guaranteed_solvable);
                assert_eq!(row.solvable + row.unsolvable, row.total_pairs);
            }
            assert_eq!(report.rows[1].solvable, report.rows[1].total_pairs);
            assert_eq!(report.rows[2].solvable, report.rows[2].total_pairs);
        }

        let restricted = SurveyOptions {
            restrict_to: Some(deleted.points().to_vec()),
            ..Default::default()
        };
        let a = survey_linearity_with(&full, &c, &restricted).unwrap();
        assert_eq!(a.rows[0].total_pairs, b.rows[0].total_pairs);
        assert_eq!(a.rows[0].guaranteed, b.rows[0].guaranteed);
        assert!(b.rows[0].solvable < a.rows[0].solvable);
    }

    #[test]
    fn survey_csv() {
        let s = SigmaSpace::from_table(&["P"], Vec::<(&str, &str, f64)>::new()).unwrap();
        let report = survey_linearity(&s, &[coeffs(1.0, 1.0)]).unwrap();
        assert_eq!(
            report.to_csv(),
            format!("{}\n1,1,1,1,1,1,0\n", SurveyReport::CSV_HEADER)
        );
    }
}
