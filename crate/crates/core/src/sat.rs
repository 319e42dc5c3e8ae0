//! CNF formulas, DIMACS input, 3-SAT normalization and a brute-force model
//! counter used as the parsimony oracle.

use std::fmt;

use thiserror::Error;

/// Default variable cap for [`count_satisfying`].
pub const DEFAULT_MAX_VARS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: clause data before the `p cnf` header")]
    MissingHeader { line: usize },
    #[error("line {line}: literal {literal} is out of range for {num_variables} variables")]
    LiteralOutOfRange { line: usize, literal: i64, num_variables: usize },
    #[error("line {line}: malformed literal `{token}`")]
    MalformedLiteral { line: usize, token: String },
    #[error("line {line}: last clause is missing its terminating 0")]
    MissingTerminator { line: usize },
    #[error("line {line}: header declares {declared} clauses but {found} were read")]
    ClauseCountMismatch { line: usize, declared: usize, found: usize },
    #[error("no `p cnf` header found")]
    NoHeader,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("clause {clause} has {len} literals after deduplication; at most 3 are allowed")]
    ClauseTooLong { clause: usize, len: usize },
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("{num_variables} variables exceed the brute-force cap of {cap}")]
    CapExceeded { num_variables: usize, cap: usize },
    #[error("literal on variable {variable} exceeds the {num_variables} declared variables")]
    VariableOutOfRange { variable: u32, num_variables: usize },
    #[error("assignment covers {got} variables, formula has {expected}")]
    AssignmentSize { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    variable: u32,
    negated: bool,
}

impl Literal {
    /// Panics if `variable` is 0.
    pub fn new(variable: u32, negated: bool) -> Self {
        assert!(variable >= 1, "variables are 1-based");
        Literal { variable, negated }
    }

    pub fn positive(variable: u32) -> Self {
        Literal::new(variable, false)
    }

    pub fn negative(variable: u32) -> Self {
        Literal::new(variable, true)
    }

    /// DIMACS encoding: `3` is x3, `-3` is ¬x3. Returns `None` for 0.
    pub fn from_dimacs(value: i64) -> Option<Self> {
        let variable = u32::try_from(value.unsigned_abs()).ok().filter(|&v| v != 0)?;
        Some(Literal { variable, negated: value < 0 })
    }

    pub fn to_dimacs(self) -> i64 {
        if self.negated {
            -(self.variable as i64)
        } else {
            self.variable as i64
        }
    }

    pub fn variable(self) -> u32 {
        self.variable
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    pub fn negate(self) -> Self {
        Literal { variable: self.variable, negated: !self.negated }
    }

    pub fn eval(self, assignment: &Assignment) -> bool {
        assignment.value(self.variable) != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬x{}", self.variable)
        } else {
            write!(f, "x{}", self.variable)
        }
    }
}

pub type Clause = Vec<Literal>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_variables: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_variables: usize, clauses: Vec<Clause>) -> Result<Self, SatError> {
        for lit in clauses.iter().flatten() {
            if lit.variable as usize > num_variables {
                return Err(SatError::VariableOutOfRange { variable: lit.variable, num_variables });
            }
        }
        Ok(CnfFormula { num_variables, clauses })
    }

    /// Builds a formula from DIMACS-style integer clauses, sizing the
    /// variable count to the largest variable mentioned.
    pub fn from_dimacs_clauses(clauses: &[&[i64]]) -> Self {
        let clauses: Vec<Clause> = clauses
            .iter()
            .map(|c| c.iter().map(|&v| Literal::from_dimacs(v).expect("0 is not a literal")).collect())
            .collect();
        let num_variables =
            clauses.iter().flatten().map(|l: &Literal| l.variable as usize).max().unwrap_or(0);
        CnfFormula { num_variables, clauses }
    }

    pub fn num_variables(&self) -> usize {
        self.num_variables
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Variables occurring in at least one clause, ascending.
    pub fn occurring_variables(&self) -> Vec<u32> {
        let mut seen = vec![false; self.num_variables + 1];
        for lit in self.clauses.iter().flatten() {
            seen[lit.variable as usize] = true;
        }
        (1..=self.num_variables as u32).filter(|&v| seen[v as usize]).collect()
    }

    /// The same clauses with occurring variables renumbered densely from 1
    /// in ascending order. Unused variables disappear.
    pub fn compacted(&self) -> CnfFormula {
        let occurring = self.occurring_variables();
        let mut rename = vec![0u32; self.num_variables + 1];
        for (k, &v) in occurring.iter().enumerate() {
            rename[v as usize] = k as u32 + 1;
        }
        let clauses = self
            .clauses
            .iter()
            .map(|c| c.iter().map(|l| Literal::new(rename[l.variable as usize], l.negated)).collect())
            .collect();
        CnfFormula { num_variables: occurring.len(), clauses }
    }

    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_variables, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_dimacs().to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }
}

/// Truth values for variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    /// Variable `v` takes bit `v - 1` of `mask`.
    pub fn from_mask(num_variables: usize, mask: u64) -> Self {
        Assignment { values: (0..num_variables).map(|i| mask >> i & 1 == 1).collect() }
    }

    pub fn all_false(num_variables: usize) -> Self {
        Assignment { values: vec![false; num_variables] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Panics if `variable` is 0 or beyond the table.
    pub fn value(&self, variable: u32) -> bool {
        self.values[variable as usize - 1]
    }

    pub fn get(&self, variable: u32) -> Option<bool> {
        (variable as usize).checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

/// Parses DIMACS cnf. Comment lines (`c`) are ignored, clauses may span
/// lines and are terminated by `0`, and a `%` line ends the input.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, DimacsError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Clause = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::MalformedHeader { line, reason: "duplicate header".into() });
            }
            header = Some(parse_header(trimmed, line)?);
            continue;
        }
        let Some((num_variables, _, _)) = header else {
            return Err(DimacsError::MissingHeader { line });
        };
        for token in trimmed.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| DimacsError::MalformedLiteral { line, token: token.to_string() })?;
            if value == 0 {
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            if value.unsigned_abs() > num_variables as u64 {
                return Err(DimacsError::LiteralOutOfRange { line, literal: value, num_variables });
            }
            current.push(Literal::from_dimacs(value).expect("nonzero literal"));
        }
    }

    let (num_variables, declared, header_line) = header.ok_or(DimacsError::NoHeader)?;
    if !current.is_empty() {
        return Err(DimacsError::MissingTerminator { line: last_line });
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCountMismatch {
            line: header_line,
            declared,
            found: clauses.len(),
        });
    }
    Ok(CnfFormula { num_variables, clauses })
}

fn parse_header(text: &str, line: usize) -> Result<(usize, usize, usize), DimacsError> {
    let malformed = |reason: &str| DimacsError::MalformedHeader { line, reason: reason.to_string() };
    let fields: Vec<&str> = text.split_whitespace().collect();
    match fields.as_slice() {
        ["p", "cnf", vars, clauses] => {
            let vars = vars.parse().map_err(|_| malformed("variable count is not a number"))?;
            let clauses = clauses.parse().map_err(|_| malformed("clause count is not a number"))?;
            Ok((vars, clauses, line))
        }
        ["p", format, ..] if *format != "cnf" => Err(malformed("format is not `cnf`")),
        _ => Err(malformed("expected `p cnf <variables> <clauses>`")),
    }
}

/// A 3-SAT-normalized formula and the number of tautological clauses dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub formula: CnfFormula,
    pub removed_tautologies: usize,
}

/// Deduplicates literals, drops tautological clauses, and rejects clauses
/// that are empty or still longer than three literals. Clause and literal
/// order are otherwise preserved.
pub fn normalize_3sat(f: &CnfFormula) -> Result<Normalized, SatError> {
    let mut clauses = Vec::with_capacity(f.clauses.len());
    let mut removed_tautologies = 0;
    for (idx, clause) in f.clauses.iter().enumerate() {
        let mut deduped: Clause = Vec::with_capacity(clause.len());
        let mut tautology = false;
        for &lit in clause {
            if deduped.contains(&lit) {
                continue;
            }
            if deduped.contains(&lit.negate()) {
                tautology = true;
            }
            deduped.push(lit);
        }
        if tautology {
            removed_tautologies += 1;
            continue;
        }
        match deduped.len() {
            0 => return Err(SatError::EmptyClause { clause: idx + 1 }),
            1..=3 => clauses.push(deduped),
            len => return Err(SatError::ClauseTooLong { clause: idx + 1, len }),
        }
    }
    Ok(Normalized {
        formula: CnfFormula { num_variables: f.num_variables, clauses },
        removed_tautologies,
    })
}

/// Exact model count over all `2^num_variables` assignments.
pub fn count_satisfying(f: &CnfFormula, cap: usize) -> Result<u64, SatError> {
    let n = f.num_variables;
    if n > cap || n > 63 {
        return Err(SatError::CapExceeded { num_variables: n, cap: cap.min(63) });
    }
    // (positive mask, negative mask) per clause; bit v-1 is variable v
    let masks: Vec<(u64, u64)> = f
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0, 0), |(pos, neg), l| {
                let bit = 1u64 << (l.variable - 1);
                if l.negated {
                    (pos, neg | bit)
                } else {
                    (pos | bit, neg)
                }
            })
        })
        .collect();
    let count = (0..1u64 << n)
        .filter(|&m| masks.iter().all(|&(pos, neg)| m & pos != 0 || !m & neg != 0))
        .count();
    Ok(count as u64)
}
