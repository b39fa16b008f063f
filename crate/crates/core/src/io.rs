//! Flat-file formats.
//!
//! * Market: header `outcome,<asset_1>,…,<asset_k>[,prob]`, then one row per
//!   outcome with its label and `k` nonnegative price relatives, optionally
//!   followed by the outcome probability.
//! * Distribution: a single row or a single column of probabilities.
//! * Family: one distribution per row.
//! * Sequence: outcome labels or zero-based indices, separated by commas,
//!   whitespace or newlines.
//! * Constraints: one constraint per row, `k` coefficients then the bound
//!   (`⟨c, b⟩ ≤ d`), or `k` coefficients, an operator (`<=`, `>=`, `=`) and
//!   the bound.
//!
//! Lines starting with `#` are comments everywhere except in the market file.

use std::fs;
use std::path::Path;

use csv::{ReaderBuilder, StringRecord, Trim};

use crate::error::{Error, Result};
use crate::logopt::LinearConstraint;
use crate::market::{Distribution, Market};

/// Tolerance on the sum of probabilities read from files.
pub const FILE_SUM_TOL: f64 = 1e-9;

fn parse_error(line: usize, column: Option<&str>, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: column.map(str::to_owned),
        message: message.into(),
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => parse_error(line, None, format!("{kind:?}")),
    }
}

fn record_line(r: &StringRecord) -> usize {
    r.position().map(|p| p.line() as usize).unwrap_or(0)
}

fn number(text: &str, line: usize, column: &str) -> Result<f64> {
    let v: f64 = text
        .parse()
        .map_err(|_| parse_error(line, Some(column), format!("`{text}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_error(line, Some(column), format!("`{text}` is not finite")));
    }
    Ok(v)
}

/// Market plus the probabilities from its optional `prob` column.
#[derive(Debug, Clone)]
pub struct MarketFile {
    pub market: Market,
    pub probs: Option<Distribution>,
}

pub fn parse_market(text: &str) -> Result<MarketFile> {
    let mut reader = ReaderBuilder::new()
        .has_headers(true)
        .trim(Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(csv_error)?.clone();
    if headers.len() < 2 || !headers[0].eq_ignore_ascii_case("outcome") {
        return Err(parse_error(1, None, "header must be `outcome,<asset_1>,…[,prob]`"));
    }
    let has_prob = headers.len() >= 3 && headers[headers.len() - 1].eq_ignore_ascii_case("prob");
    let k = headers.len() - 1 - usize::from(has_prob);
    let asset_names: Vec<String> = headers.iter().skip(1).take(k).map(str::to_owned).collect();

    let mut rows = Vec::new();
    let mut outcome_names = Vec::new();
    let mut probs = Vec::new();
    let mut prob_line = 0;
    for rec in reader.records() {
        let rec = rec.map_err(csv_error)?;
        let line = record_line(&rec);
        let label = rec[0].to_owned();
        let mut row = Vec::with_capacity(k);
        for (i, name) in asset_names.iter().enumerate() {
            let v = number(&rec[i + 1], line, name)?;
            if v < 0.0 {
                return Err(parse_error(line, Some(name), format!("negative price relative {v}")));
            }
            row.push(v);
        }
        if row.iter().all(|&v| v == 0.0) {
            return Err(parse_error(line, None, format!("outcome `{label}` has no positive price relative")));
        }
        if has_prob {
            let v = number(&rec[k + 1], line, "prob")?;
            if v < 0.0 {
                return Err(parse_error(line, Some("prob"), format!("negative probability {v}")));
            }
            probs.push(v);
            prob_line = line;
        }
        outcome_names.push(label);
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_error(1, None, "market has no outcomes"));
    }
    for (i, name) in asset_names.iter().enumerate() {
        if rows.iter().all(|r| r[i] == 0.0) {
            return Err(parse_error(1, Some(name), "asset is worthless in every outcome"));
        }
    }
    let market = Market::with_names(rows, asset_names, outcome_names)?;
    let probs = if has_prob {
        Some(checked_distribution(probs, prob_line, Some("prob"))?)
    } else {
        None
    };
    Ok(MarketFile { market, probs })
}

fn checked_distribution(v: Vec<f64>, line: usize, column: Option<&str>) -> Result<Distribution> {
    if let Some(x) = v.iter().find(|x| **x < 0.0) {
        return Err(parse_error(line, column, format!("negative probability {x}")));
    }
    let s: f64 = v.iter().sum();
    if (s - 1.0).abs() > FILE_SUM_TOL {
        return Err(parse_error(line, column, format!("probabilities sum to {s}, not 1")));
    }
    Distribution::normalized(v, FILE_SUM_TOL)
}

/// Numeric records of a headerless file, with their line numbers.
fn numeric_records(text: &str) -> Result<Vec<(usize, Vec<String>)>> {
    let mut reader = ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(csv_error)?;
        let fields: Vec<String> = rec.iter().filter(|f| !f.is_empty()).map(str::to_owned).collect();
        if !fields.is_empty() {
            out.push((record_line(&rec), fields));
        }
    }
    Ok(out)
}

/// A single row or a single column of probabilities.
pub fn parse_distribution(text: &str) -> Result<Distribution> {
    let recs = numeric_records(text)?;
    let values: Vec<(usize, String)> = match recs.as_slice() {
        [] => return Err(parse_error(1, None, "empty distribution file")),
        [(line, fields)] => fields.iter().map(|f| (*line, f.clone())).collect(),
        many => {
            if let Some((line, _)) = many.iter().find(|(_, f)| f.len() != 1) {
                return Err(parse_error(*line, None, "expected a single row or a single column"));
            }
            many.iter().map(|(l, f)| (*l, f[0].clone())).collect()
        }
    };
    let line = values.last().map(|(l, _)| *l).unwrap_or(1);
    let probs = values
        .iter()
        .enumerate()
        .map(|(i, (l, f))| number(f, *l, &(i + 1).to_string()))
        .collect::<Result<Vec<_>>>()?;
    checked_distribution(probs, line, None)
}

/// One distribution per row.
pub fn parse_family(text: &str) -> Result<Vec<Distribution>> {
    let recs = numeric_records(text)?;
    if recs.is_empty() {
        return Err(parse_error(1, None, "empty family file"));
    }
    recs.into_iter()
        .map(|(line, fields)| {
            let probs = fields
                .iter()
                .enumerate()
                .map(|(i, f)| number(f, line, &(i + 1).to_string()))
                .collect::<Result<Vec<_>>>()?;
            checked_distribution(probs, line, None)
        })
        .collect()
}

/// Outcome indices from labels or zero-based indices; labels take priority.
pub fn parse_sequence(text: &str, outcome_names: &[String]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        for token in line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let idx = match outcome_names.iter().position(|name| name == token) {
                Some(i) => i,
                None => token.parse::<usize>().map_err(|_| {
                    parse_error(n + 1, None, format!("`{token}` is neither an outcome label nor an index"))
                })?,
            };
            if idx >= outcome_names.len() {
                return Err(parse_error(
                    n + 1,
                    None,
                    format!("outcome index {idx} out of range for {} outcomes", outcome_names.len()),
                ));
            }
            out.push(idx);
        }
    }
    Ok(out)
}

/// Linear constraints over `assets` portfolio weights.
pub fn parse_constraints(text: &str, assets: usize) -> Result<Vec<LinearConstraint>> {
    let mut out = Vec::new();
    for (line, fields) in numeric_records(text)? {
        let coeffs = |fields: &[String]| -> Result<Vec<f64>> {
            fields
                .iter()
                .enumerate()
                .map(|(i, f)| number(f, line, &(i + 1).to_string()))
                .collect()
        };
        if fields.len() == assets + 1 {
            let c = coeffs(&fields[..assets])?;
            let d = number(&fields[assets], line, "bound")?;
            out.push(LinearConstraint::new(c, d));
        } else if fields.len() == assets + 2 {
            let c = coeffs(&fields[..assets])?;
            let d = number(&fields[assets + 1], line, "bound")?;
            let neg = |v: &[f64]| v.iter().map(|x| -x).collect::<Vec<_>>();
            match fields[assets].as_str() {
                "<=" => out.push(LinearConstraint::new(c, d)),
                ">=" => out.push(LinearConstraint::new(neg(&c), -d)),
                "=" | "==" => {
                    out.push(LinearConstraint::new(neg(&c), -d));
                    out.push(LinearConstraint::new(c, d));
                }
                op => return Err(parse_error(line, Some("op"), format!("unknown operator `{op}`"))),
            }
        } else {
            return Err(parse_error(
                line,
                None,
                format!("expected {} or {} fields, found {}", assets + 1, assets + 2, fields.len()),
            ));
        }
    }
    Ok(out)
}

pub fn read_market(path: &Path) -> Result<MarketFile> {
    parse_market(&fs::read_to_string(path)?)
}

pub fn read_distribution(path: &Path) -> Result<Distribution> {
    parse_distribution(&fs::read_to_string(path)?)
}

pub fn read_family(path: &Path) -> Result<Vec<Distribution>> {
    parse_family(&fs::read_to_string(path)?)
}

pub fn read_sequence(path: &Path, outcome_names: &[String]) -> Result<Vec<usize>> {
    parse_sequence(&fs::read_to_string(path)?, outcome_names)
}

pub fn read_constraints(path: &Path, assets: usize) -> Result<Vec<LinearConstraint>> {
    parse_constraints(&fs::read_to_string(path)?, assets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn market_with_probabilities() {
        let f = parse_market("outcome,cash,bet,prob\nwin,1,2,0.75\nlose,1,0,0.25\n").unwrap();
        assert_eq!(f.market.asset_names(), &["cash".to_string(), "bet".to_string()]);
        assert_eq!(f.market.get(0, 1), 2.0);
        assert_eq!(f.probs.unwrap().probs(), &[0.75, 0.25]);
    }

    #[test]
    fn market_without_probabilities() {
        let f = parse_market("outcome,a,b\nx,2,0\ny,0,2\n").unwrap();
        assert!(f.probs.is_none());
        assert_eq!(f.market.outcome_names()[1], "y");
    }

    #[test]
    fn negative_entry_names_row_and_column() {
        let e = parse_market("outcome,a,b\nx,2,0\ny,-1,2\n").unwrap_err();
        match e {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert_eq!(column.as_deref(), Some("a"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn market_structure_errors() {
        assert!(parse_market("outcome,a,b\nx,0,0\n").is_err());
        assert!(parse_market("outcome,a,b\nx,1,0\ny,1,0\n").is_err());
        assert!(parse_market("outcome,a,b\nx,1,zz\n").is_err());
        assert!(parse_market("outcome,a,b\nx,1\n").is_err());
        assert!(parse_market("outcome,a,prob\nx,1,0.5\ny,1,0.4\n").is_err());
    }

    #[test]
    fn distribution_row_or_column() {
        assert_eq!(parse_distribution("0.25,0.75\n").unwrap().probs(), &[0.25, 0.75]);
        assert_eq!(parse_distribution("0.25\n0.75\n").unwrap().probs(), &[0.25, 0.75]);
        assert!(parse_distribution("0.25,0.7\n").is_err());
        assert!(parse_distribution("0.5,0.5\n0.5,0.5\n").is_err());
        let d = parse_distribution("0.3333333333,0.3333333333,0.3333333334").unwrap();
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn family_and_sequence() {
        let fam = parse_family("# point masses\n1,0\n0,1\n").unwrap();
        assert_eq!(fam.len(), 2);
        let names = vec!["up".to_string(), "down".to_string()];
        assert_eq!(parse_sequence("up,up\ndown 0 1", &names).unwrap(), vec![0, 0, 1, 0, 1]);
        assert!(parse_sequence("2", &names).is_err());
        assert!(parse_sequence("sideways", &names).is_err());
    }

    #[test]
    fn constraints_with_operators() {
        let c = parse_constraints("1,0,0.3\n0,1,>=,0.2\n1,1,=,1\n", 2).unwrap();
        assert_eq!(c.len(), 4);
        assert_eq!(c[1].coeffs, vec![-0.0, -1.0]);
        assert_eq!(c[1].bound, -0.2);
        assert!(parse_constraints("1,0,<,1\n", 2).is_err());
        assert!(parse_constraints("1,0\n", 2).is_err());
    }
}
