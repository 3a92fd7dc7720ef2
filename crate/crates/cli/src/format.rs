//! Text formats for instances and solutions.
//!
//! Flowshop instances: a header line `n m`, then `n` lines of `m`
//! space-separated nonnegative integers (operation lengths in machine
//! order). Distance matrices: an optional header `ATSPP <source> <sink>`
//! (0-based) for path instances, a line `n`, then `n` rows of `n`
//! integers with a zero diagonal. Lines starting with `#` are ignored in
//! both. Solutions: a line `order:`/`tour:`/`path:` followed by 1-based
//! indices, as printed by the solve commands, or bare integers.

use std::fmt;

use nowait_core::flowshop::{FlowshopInstance, Job};
use nowait_core::graph::{Kind, WeightMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Significant lines with their 1-based line numbers.
fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_fields(line: usize, text: &str) -> Result<Vec<u64>, ParseError> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<u64>()
                .map_err(|_| ParseError::new(line, format!("expected an integer, found `{tok}`")))
        })
        .collect()
}

pub fn parse_flowshop(text: &str) -> Result<FlowshopInstance, ParseError> {
    let mut lines = significant_lines(text);
    let (lno, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "empty instance file"))?;
    let fields = parse_fields(lno, header)?;
    let [n, m] = fields[..] else {
        return Err(ParseError::new(lno, "expected a header `n m`"));
    };
    if n == 0 || m == 0 {
        return Err(ParseError::new(lno, "need at least one job and one machine"));
    }
    let mut jobs = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let (lno, row) = lines
            .next()
            .ok_or_else(|| ParseError::new(lno, format!("expected {n} job lines")))?;
        let ops = parse_fields(lno, row)?;
        if ops.len() != m as usize {
            return Err(ParseError::new(
                lno,
                format!("expected {m} operation lengths, found {}", ops.len()),
            ));
        }
        jobs.push(Job::new(ops));
    }
    if let Some((lno, _)) = lines.next() {
        return Err(ParseError::new(lno, "trailing content after the last job"));
    }
    FlowshopInstance::new(jobs).map_err(|e| ParseError::new(lno, e.to_string()))
}

pub fn serialize_flowshop(inst: &FlowshopInstance) -> String {
    let mut out = format!("{} {}\n", inst.n(), inst.machines());
    for job in inst.jobs() {
        let row: Vec<String> = job.ops().iter().map(u64::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<WeightMatrix, ParseError> {
    let mut lines = significant_lines(text).peekable();
    let mut kind = Kind::Atsp;
    if let Some(&(lno, line)) = lines.peek() {
        if line.starts_with("ATSPP") {
            let rest: Vec<&str> = line.split_whitespace().skip(1).collect();
            kind = match rest[..] {
                [] => Kind::Atspp { endpoints: None },
                [s, t] => {
                    let parse = |tok: &str| {
                        tok.parse::<usize>().map_err(|_| {
                            ParseError::new(lno, format!("bad endpoint `{tok}`"))
                        })
                    };
                    Kind::Atspp { endpoints: Some((parse(s)?, parse(t)?)) }
                }
                _ => {
                    return Err(ParseError::new(
                        lno,
                        "expected `ATSPP` or `ATSPP <source> <sink>`",
                    ))
                }
            };
            lines.next();
        }
    }
    let (lno, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(1, "empty matrix file"))?;
    let fields = parse_fields(lno, header)?;
    let [n] = fields[..] else {
        return Err(ParseError::new(lno, "expected a single vertex count"));
    };
    if n == 0 {
        return Err(ParseError::new(lno, "need at least one vertex"));
    }
    let n = n as usize;
    let mut rows = Vec::with_capacity(n);
    let mut last = lno;
    for i in 0..n {
        let (lno, row) = lines
            .next()
            .ok_or_else(|| ParseError::new(last, format!("expected {n} matrix rows")))?;
        last = lno;
        let entries = parse_fields(lno, row)?;
        if entries.len() != n {
            return Err(ParseError::new(
                lno,
                format!("expected {n} entries, found {}", entries.len()),
            ));
        }
        if entries[i] != 0 {
            return Err(ParseError::new(lno, "diagonal entries must be 0"));
        }
        rows.push(entries);
    }
    if let Some((lno, _)) = lines.next() {
        return Err(ParseError::new(lno, "trailing content after the last row"));
    }
    if let Kind::Atspp { endpoints: Some((s, t)) } = kind {
        if s >= n || t >= n || s == t {
            return Err(ParseError::new(1, "endpoints must be distinct vertices below n"));
        }
    }
    WeightMatrix::from_rows(rows, kind).map_err(|e| ParseError::new(last, e.to_string()))
}

pub fn serialize_matrix(m: &WeightMatrix) -> String {
    let mut out = String::new();
    if let Kind::Atspp { endpoints } = m.kind() {
        match endpoints {
            Some((s, t)) => out.push_str(&format!("ATSPP {s} {t}\n")),
            None => out.push_str("ATSPP\n"),
        }
    }
    out.push_str(&format!("{}\n", m.n()));
    for row in m.rows() {
        let fields: Vec<String> = row.iter().map(u64::to_string).collect();
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

/// Reads a solution as 0-based indices. Accepts the output of the solve
/// commands (`order:`/`tour:`/`path:` followed by 1-based indices) or a
/// file of bare 1-based integers.
pub fn parse_solution(text: &str) -> Result<Vec<usize>, ParseError> {
    for (lno, line) in significant_lines(text) {
        for prefix in ["order:", "tour:", "path:"] {
            if let Some(rest) = line.strip_prefix(prefix) {
                return solution_fields(lno, rest);
            }
        }
    }
    // bare integers, possibly over several lines
    let mut all = Vec::new();
    let mut seen = false;
    for (lno, line) in significant_lines(text) {
        seen = true;
        all.extend(solution_fields(lno, line)?);
    }
    if !seen {
        return Err(ParseError::new(1, "no solution indices found"));
    }
    Ok(all)
}

fn solution_fields(lno: usize, text: &str) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace()
        .map(|tok| {
            let v: usize = tok
                .parse()
                .map_err(|_| ParseError::new(lno, format!("expected an index, found `{tok}`")))?;
            if v == 0 {
                return Err(ParseError::new(lno, "solution indices are 1-based"));
            }
            Ok(v - 1)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flowshop_roundtrip() {
        let text = "# two jobs\n2 2\n3 2\n1 4\n";
        let inst = parse_flowshop(text).unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.machines(), 2);
        assert_eq!(inst.job(1).ops(), &[1, 4]);
        let again = parse_flowshop(&serialize_flowshop(&inst)).unwrap();
        assert_eq!(inst, again);
    }

    #[test]
    fn flowshop_errors_carry_line_numbers() {
        let err = parse_flowshop("2 2\n3 2\n1\n").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_flowshop("2 2\n3 x\n1 4\n").unwrap_err();
        assert_eq!(err.line, 2);
    }

    #[test]
    fn matrix_roundtrip_with_endpoints() {
        let text = "ATSPP 0 3\n4\n0 1 2 3\n1 0 1 2\n2 1 0 1\n3 2 1 0\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.kind(), Kind::Atspp { endpoints: Some((0, 3)) });
        let again = parse_matrix(&serialize_matrix(&m)).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn matrix_roundtrip_free_endpoints() {
        let text = "ATSPP\n2\n0 3\n4 0\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.kind(), Kind::Atspp { endpoints: None });
        assert_eq!(serialize_matrix(&m), text);
    }

    #[test]
    fn matrix_rejects_nonzero_diagonal() {
        let err = parse_matrix("2\n0 1\n1 7\n").unwrap_err();
        assert_eq!(err.line, 3);
    }

    #[test]
    fn solution_from_solver_output() {
        let sol = parse_solution("order: 2 1\nmakespan: 7\n").unwrap();
        assert_eq!(sol, vec![1, 0]);
        let sol = parse_solution("3 1 2\n").unwrap();
        assert_eq!(sol, vec![2, 0, 1]);
        assert!(parse_solution("order: 0 1\n").is_err());
    }
}
