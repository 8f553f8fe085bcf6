//! Line-oriented σ-table files.
//!
//! ```text
//! # comment
//! points: A B C
//! tolerance: 1e-9
//! sigma: A B 1
//! sigma: B C 1
//! sigma: A C 4
//! ```
//!
//! `points:` must be the first significant line. `tolerance:` is optional.
//! A file either lists both orders of every pair (σ may then be asymmetric)
//! or lists some pairs once, in which case the missing order is mirrored and
//! any pair given in both orders must agree within tolerance.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::space::{SigmaSpace, DEFAULT_TOLERANCE};

/// A parsed file before σ-space validation.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub labels: Vec<String>,
    pub tolerance: Option<f64>,
    /// One entry per ordered pair after mirroring, in file order.
    pub entries: Vec<(String, String, f64)>,
}

impl RawTable {
    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(DEFAULT_TOLERANCE)
    }

    /// Validates the table as a σ-space (diagonal, finiteness, completeness).
    pub fn build(&self) -> Result<SigmaSpace> {
        SigmaSpace::from_table_with_tolerance(
            &self.labels,
            self.entries.iter().map(|(p, q, v)| (p.as_str(), q.as_str(), *v)),
            self.tolerance(),
        )
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse(text: &str) -> Result<RawTable> {
    let mut labels: Option<Vec<String>> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut tolerance: Option<f64> = None;
    // (i, j) -> (value, line)
    let mut given: HashMap<(usize, usize), (f64, usize)> = HashMap::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut pending_duplicates: Vec<((usize, usize), f64, usize)> = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let (directive, rest) = content
            .split_once(':')
            .ok_or_else(|| parse_error(line, format!("expected `<directive>: ...`, got `{content}`")))?;
        let args: Vec<&str> = rest.split_whitespace().collect();
        match (directive.trim(), &labels) {
            ("points", None) => {
                if args.is_empty() {
                    return Err(parse_error(line, "`points:` needs at least one label"));
                }
                for (i, label) in args.iter().enumerate() {
                    if index.insert((*label).to_owned(), i).is_some() {
                        return Err(parse_error(line, format!("duplicate label `{label}`")));
                    }
                }
                labels = Some(args.iter().map(|s| (*s).to_owned()).collect());
            }
            ("points", Some(_)) => return Err(parse_error(line, "`points:` given twice")),
            (_, None) => return Err(parse_error(line, "the first directive must be `points:`")),
            ("tolerance", Some(_)) => {
                if tolerance.is_some() {
                    return Err(parse_error(line, "`tolerance:` given twice"));
                }
                let [value] = args[..] else {
                    return Err(parse_error(line, "`tolerance:` takes exactly one value"));
                };
                let value: f64 = value
                    .parse()
                    .map_err(|_| parse_error(line, format!("invalid tolerance `{value}`")))?;
                if !(value.is_finite() && value >= 0.0) {
                    return Err(parse_error(
                        line,
                        format!("tolerance must be finite and non-negative, got {value}"),
                    ));
                }
                tolerance = Some(value);
            }
            ("sigma", Some(_)) => {
                let [p, q, value] = args[..] else {
                    return Err(parse_error(line, "`sigma:` takes two labels and a value"));
                };
                let lookup = |label: &str| {
                    index
                        .get(label)
                        .copied()
                        .ok_or_else(|| parse_error(line, format!("unknown point `{label}`")))
                };
                let key = (lookup(p)?, lookup(q)?);
                let value: f64 = value
                    .parse()
                    .map_err(|_| parse_error(line, format!("invalid σ value `{value}`")))?;
                match given.entry(key) {
                    Entry::Occupied(_) => pending_duplicates.push((key, value, line)),
                    Entry::Vacant(slot) => {
                        slot.insert((value, line));
                        order.push(key);
                    }
                }
            }
            (other, Some(_)) => return Err(parse_error(line, format!("unknown directive `{other}`"))),
        }
    }

    let labels = labels.ok_or_else(|| parse_error(0, "missing `points:` line"))?;
    let eps = tolerance.unwrap_or(DEFAULT_TOLERANCE);
    let conflict = |a: f64, b: f64| !((a - b).abs() <= eps || a.to_bits() == b.to_bits());

    for (key, value, line) in pending_duplicates {
        let (first, first_line) = given[&key];
        if conflict(first, value) {
            return Err(parse_error(
                line,
                format!(
                    "σ({}, {}) = {value} conflicts with {first} on line {first_line}",
                    labels[key.0], labels[key.1]
                ),
            ));
        }
    }

    let n = labels.len();
    let fully_explicit = (0..n).all(|i| (i + 1..n).all(|j| given.contains_key(&(i, j)) && given.contains_key(&(j, i))));
    let mut mirrored = Vec::new();
    if !fully_explicit {
        for &(i, j) in &order {
            if i == j {
                continue;
            }
            let (value, line) = given[&(i, j)];
            match given.get(&(j, i)) {
                None => mirrored.push(((j, i), value)),
                Some(&(back, back_line)) if back_line > line && conflict(value, back) => {
                    return Err(parse_error(
                        back_line,
                        format!(
                            "σ({}, {}) = {back} conflicts with mirrored σ({}, {}) = {value} from line {line}",
                            labels[j], labels[i], labels[i], labels[j]
                        ),
                    ));
                }
                Some(_) => {}
            }
        }
    }

    let entries = order
        .iter()
        .map(|&(i, j)| (i, j, given[&(i, j)].0))
        .chain(mirrored.into_iter().map(|((i, j), v)| (i, j, v)))
        .map(|(i, j, v)| (labels[i].clone(), labels[j].clone(), v))
        .collect();
    Ok(RawTable {
        labels,
        tolerance,
        entries,
    })
}

/// Parses and validates in one step.
pub fn parse_space(text: &str) -> Result<SigmaSpace> {
    parse(text)?.build()
}

pub fn read_space(path: impl AsRef<Path>) -> Result<SigmaSpace> {
    parse_space(&read_text(path.as_ref())?)
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| parse_error(0, format!("cannot read {}: {e}", path.display())))
}

/// Canonical text form. Values use the shortest decimal that round-trips.
/// Exactly symmetric spaces list each unordered pair once.
pub fn write(space: &SigmaSpace) -> String {
    let n = space.len();
    let symmetric = (0..n).all(|i| (0..n).all(|j| space.sigma(i, j).to_bits() == space.sigma(j, i).to_bits()));
    let mut out = String::new();
    out.push_str(&format!(
        "# σ-table, {n} points{}\n",
        if symmetric { ", symmetric" } else { "" }
    ));
    let labels: Vec<&str> = space.points().iter().map(|p| p.as_str()).collect();
    out.push_str(&format!("points: {}\n", labels.join(" ")));
    out.push_str(&format!("tolerance: {:e}\n", space.tolerance()));
    for i in 0..n {
        for j in 0..n {
            let value = space.sigma(i, j);
            let skip = if i == j {
                value.to_bits() == 0
            } else {
                symmetric && j < i
            };
            if !skip {
                out.push_str(&format!("sigma: {} {} {}\n", labels[i], labels[j], value));
            }
        }
    }
    out
}

pub fn write_space(space: &SigmaSpace, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write(space)).map_err(|e| parse_error(0, format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::GridSpec;

    const THREE: &str = "\
# three points on a line
points: A B C
sigma: A B 1
sigma: A C 4
sigma: B C 1
";

    #[test]
    fn mirrored_file() {
        let space = parse_space(THREE).unwrap();
        assert_eq!(space.sigma_between("C", "A").unwrap(), 4.0);
        assert!(space.is_symmetric());
        assert_eq!(space.tolerance(), DEFAULT_TOLERANCE);
    }

    #[test]
    fn explicit_asymmetric_file() {
        let text = "points: A B\ntolerance: 0.01\nsigma: A B 1\nsigma: B A 2\n";
        let space = parse_space(text).unwrap();
        assert!(!space.is_symmetric());
        assert_eq!(space.tolerance(), 0.01);
    }

    #[test]
    fn conflicting_mirror_reports_line() {
        let text = "points: A B C\nsigma: A B 1\nsigma: A C 4\n\nsigma: C A 5\n";
        assert!(matches!(parse(text), Err(Error::Parse { line: 5, .. })));
        let consistent = "points: A B C\nsigma: A B 1\nsigma: A C 4\nsigma: C A 4\nsigma: B C 2\n";
        assert!(parse_space(consistent).is_ok());
    }

    #[test]
    fn duplicate_entries() {
        let same = "points: A B\nsigma: A B 1\nsigma: A B 1\n";
        assert!(parse_space(same).is_ok());
        let different = "points: A B\nsigma: A B 1\nsigma: A B 2\n";
        assert!(matches!(parse(different), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn syntax_errors() {
        let cases = [
            ("sigma: A B 1\n", 1),
            ("points: A\nfoo: 1\n", 2),
            ("points: A B\nsigma: A Z 1\n", 2),
            ("points: A B\nsigma: A B x\n", 2),
            ("points: A B\nsigma: A B\n", 2),
            ("points: A A\n", 1),
            ("points: A\ntolerance: -1\n", 2),
            ("points: A\npoints: B\n", 2),
            ("# only a comment\n", 0),
            ("points: A\nno colon here\n", 2),
        ];
        for (text, line) in cases {
            match parse(text) {
                Err(Error::Parse { line: got, .. }) => assert_eq!(got, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn validation_errors_come_from_build() {
        let raw = parse("points: A B\nsigma: A A 0.5\nsigma: A B 1\n").unwrap();
        assert!(matches!(raw.build(), Err(Error::NonzeroDiagonal(..))));
        let raw = parse("points: A B C\nsigma: A B 1\n").unwrap();
        assert!(matches!(raw.build(), Err(Error::MissingEntry(..))));
    }

    #[test]
    fn grid_round_trip_is_exact() {
        let grid = SigmaSpace::grid(&GridSpec::new(2, 3).delete([1, 1])).unwrap();
        let text = write(&grid);
        assert!(text.contains("sigma: p0_0 p0_1 0.5\n"));
        let back = parse_space(&text).unwrap();
        assert_eq!(back.points(), grid.points());
        assert_eq!(back.sigma_matrix(), grid.sigma_matrix());
        assert_eq!(back.tolerance(), grid.tolerance());
    }

    #[test]
    fn asymmetric_round_trip() {
        let space = parse_space("points: A B\nsigma: A B 0.1\nsigma: B A 0.30000000000000004\n").unwrap();
        let back = parse_space(&write(&space)).unwrap();
        assert_eq!(back.sigma_matrix(), space.sigma_matrix());
    }
}
