//! CNF formulas, their closed-diagram encoding, and resolution.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::diagram::{cap, cup, BoolMatrix, Diagram};
use crate::normalform::{decide_eq, NormalFormError};
use crate::semantics::{Interpreter, SemanticsError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("header declares {declared} clauses but {found} were given")]
    HeaderMismatch { declared: usize, found: usize },
    #[error("variable {var} out of range for {num_vars} variables")]
    VarOutOfRange { var: usize, num_vars: usize },
    #[error("clause index {0} out of range")]
    ClauseOutOfRange(usize),
    #[error("cannot resolve clauses {j1} and {j2} on variable {var}")]
    NotResolvable { j1: usize, j2: usize, var: usize },
    #[error("too many variables for exhaustive search: {0}")]
    TooManyVariables(usize),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
}

/// A disjunction of negated variables `neg` and plain variables `pos`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Clause {
    neg: BTreeSet<usize>,
    pos: BTreeSet<usize>,
}

impl Clause {
    pub fn new(
        neg: impl IntoIterator<Item = usize>,
        pos: impl IntoIterator<Item = usize>,
    ) -> Clause {
        Clause {
            neg: neg.into_iter().collect(),
            pos: pos.into_iter().collect(),
        }
    }

    pub fn neg(&self) -> &BTreeSet<usize> {
        &self.neg
    }

    pub fn pos(&self) -> &BTreeSet<usize> {
        &self.pos
    }

    pub fn is_empty(&self) -> bool {
        self.neg.is_empty() && self.pos.is_empty()
    }

    /// Contains some `x` together with `~x`.
    pub fn is_tautology(&self) -> bool {
        self.neg.intersection(&self.pos).next().is_some()
    }

    pub fn mentions(&self, v: usize) -> bool {
        self.neg.contains(&v) || self.pos.contains(&v)
    }

    /// Bit `i` of `x` is the value of variable `i`.
    pub fn satisfied_by(&self, x: u64) -> bool {
        self.pos.iter().any(|&i| x >> i & 1 == 1) || self.neg.iter().any(|&i| x >> i & 1 == 0)
    }

    fn max_var(&self) -> Option<usize> {
        self.neg.iter().chain(&self.pos).max().copied()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "FALSE");
        }
        let mut lits: Vec<(usize, bool)> = self
            .neg
            .iter()
            .map(|&v| (v, false))
            .chain(self.pos.iter().map(|&v| (v, true)))
            .collect();
        lits.sort();
        let text: Vec<String> = lits
            .iter()
            .map(|&(v, p)| format!("{}x{}", if p { "" } else { "~" }, v + 1))
            .collect();
        write!(f, "{}", text.join(" | "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<CnfFormula, SatError> {
        for c in &clauses {
            if let Some(var) = c.max_var().filter(|&v| v >= num_vars) {
                return Err(SatError::VarOutOfRange { var, num_vars });
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn satisfied_by(&self, x: u64) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(x))
    }

    /// All satisfying assignments, ascending.
    pub fn models(&self) -> Result<Vec<u64>, SatError> {
        if self.num_vars > 30 {
            return Err(SatError::TooManyVariables(self.num_vars));
        }
        Ok((0..1u64 << self.num_vars).filter(|&x| self.satisfied_by(x)).collect())
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for &v in &c.neg {
                s.push_str(&format!("-{} ", v + 1));
            }
            for &v in &c.pos {
                s.push_str(&format!("{} ", v + 1));
            }
            s.push_str("0\n");
        }
        s
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.clauses.iter().map(|c| format!("({c})")).collect();
        if parts.is_empty() {
            write!(f, "TRUE")
        } else {
            write!(f, "{}", parts.join(" & "))
        }
    }
}

/// Reads DIMACS CNF. Clauses may span lines; each ends with `0`. Input with
/// no header and no clauses is the empty formula over no variables.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, SatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Clause::default();
    let mut open = false;
    let mut last_line = 0;
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        last_line = line_no;
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let err = |message: String| SatError::Parse {
            line: line_no,
            message,
        };
        if line.starts_with('p') {
            if header.is_some() {
                return Err(err("duplicate header".into()));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["p", "cnf", n, k] => {
                    let n = n.parse().map_err(|_| err(format!("bad variable count `{n}`")))?;
                    let k = k.parse().map_err(|_| err(format!("bad clause count `{k}`")))?;
                    header = Some((n, k));
                }
                _ => return Err(err("expected `p cnf <vars> <clauses>`".into())),
            }
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(err("clause before the `p cnf` header".into()));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| err(format!("bad literal `{tok}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
                open = false;
                continue;
            }
            let var = lit.unsigned_abs() as usize - 1;
            if var >= num_vars {
                return Err(err(format!("literal {lit} exceeds {num_vars} variables")));
            }
            if lit > 0 {
                current.pos.insert(var);
            } else {
                current.neg.insert(var);
            }
            open = true;
        }
    }
    let Some((num_vars, declared)) = header else {
        return CnfFormula::new(0, Vec::new());
    };
    if open {
        return Err(SatError::Parse {
            line: last_line,
            message: "last clause is not terminated by 0".into(),
        });
    }
    if clauses.len() != declared {
        return Err(SatError::HeaderMismatch {
            declared,
            found: clauses.len(),
        });
    }
    CnfFormula::new(num_vars, clauses)
}

/// A formula with its incidence matrices: `neg[j][i]` marks `~x_i` in
/// clause `j`, `pos[j][i]` marks `x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatInstance {
    pub formula: CnfFormula,
    pub neg: BoolMatrix,
    pub pos: BoolMatrix,
}

impl SatInstance {
    /// Rebuilds the clause list from the matrices alone.
    pub fn to_formula(&self) -> CnfFormula {
        let clauses = (0..self.neg.rows())
            .map(|j| Clause::new(self.neg.row_support(j), self.pos.row_support(j)))
            .collect();
        CnfFormula {
            num_vars: self.neg.cols(),
            clauses,
        }
    }
}

pub fn incidence(f: &CnfFormula) -> SatInstance {
    let (k, n) = (f.clauses.len(), f.num_vars);
    let mut neg = BoolMatrix::zeros(k, n);
    let mut pos = BoolMatrix::zeros(k, n);
    for (j, c) in f.clauses.iter().enumerate() {
        for &i in &c.neg {
            neg.set(j, i, true);
        }
        for &i in &c.pos {
            pos.set(j, i, true);
        }
    }
    SatInstance {
        formula: f.clone(),
        neg,
        pos,
    }
}

/// The closed diagram: `n` cups feed assignments `p` into the black matrix
/// of negative occurrences, whose results pass through the white matrix of
/// positive occurrences and are capped against the other cup legs. It
/// denotes `{•}` iff some `p` has `AND_{neg j} p <= OR_{pos j} p` for every
/// clause `j`.
pub fn sat_diagram(f: &CnfFormula) -> Diagram {
    let inst = incidence(f);
    let n = f.num_vars;
    let mut split = vec![0; 2 * n];
    let mut merge = vec![0; 2 * n];
    for i in 0..n {
        split[2 * i] = i;
        split[2 * i + 1] = n + i;
        merge[i] = 2 * i;
        merge[n + i] = 2 * i + 1;
    }
    let matrix = inst.neg.black_diagram().then(&inst.pos.white_diagram());
    Diagram::chain(
        Diagram::tensor_all(&vec![cup(); n]),
        &[
            Diagram::permutation(&split).expect("bijection"),
            Diagram::tensor_all(&[matrix, Diagram::identity(n)]),
            Diagram::permutation(&merge).expect("bijection"),
            Diagram::tensor_all(&vec![cap(); n]),
        ],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Diagram,
    Brute,
}

/// Exhaustive search over all assignments.
pub fn brute_force_satisfiable(f: &CnfFormula) -> Result<bool, SatError> {
    if f.num_vars > 30 {
        return Err(SatError::TooManyVariables(f.num_vars));
    }
    Ok((0..1u64 << f.num_vars).any(|x| f.satisfied_by(x)))
}

pub fn is_satisfiable(interp: &Interpreter, f: &CnfFormula, method: Method) -> Result<bool, SatError> {
    match method {
        Method::Diagram => Ok(decide_eq(interp, &sat_diagram(f), &Diagram::empty())?),
        Method::Brute => brute_force_satisfiable(f),
    }
}

fn check_var(f: &CnfFormula, v: usize) -> Result<(), SatError> {
    if v >= f.num_vars {
        return Err(SatError::VarOutOfRange {
            var: v,
            num_vars: f.num_vars,
        });
    }
    Ok(())
}

fn resolvent(c1: &Clause, c2: &Clause, v: usize) -> Clause {
    let mut r = Clause::default();
    r.pos.extend(c1.pos.iter().filter(|&&i| i != v));
    r.neg.extend(c1.neg.iter().copied());
    r.pos.extend(c2.pos.iter().copied());
    r.neg.extend(c2.neg.iter().filter(|&&i| i != v));
    r
}

/// Davis-Putnam elimination of variable `v`.
///
/// Clauses without `v` are kept in order; clauses with both `x_v` and
/// `~x_v` are dropped; then every non-tautological resolvent on `v` is
/// appended once, positive premise major.
pub fn dp_eliminate(f: &CnfFormula, v: usize) -> Result<CnfFormula, SatError> {
    check_var(f, v)?;
    let live: Vec<&Clause> = f
        .clauses
        .iter()
        .filter(|c| !(c.pos.contains(&v) && c.neg.contains(&v)))
        .collect();
    let mut out: Vec<Clause> = live.iter().filter(|c| !c.mentions(v)).map(|&c| c.clone()).collect();
    let positive: Vec<&Clause> = live.iter().copied().filter(|c| c.pos.contains(&v)).collect();
    let negative: Vec<&Clause> = live.iter().copied().filter(|c| c.neg.contains(&v)).collect();
    for p in &positive {
        for q in &negative {
            let r = resolvent(p, q, v);
            if !r.is_tautology() && !out.contains(&r) {
                out.push(r);
            }
        }
    }
    Ok(CnfFormula {
        num_vars: f.num_vars,
        clauses: out,
    })
}

/// Appends the resolvent of clauses `j1` (with `x_v`) and `j2` (with
/// `~x_v`). Tautological resolvents are kept; see [`Clause::is_tautology`].
pub fn resolve(f: &CnfFormula, j1: usize, j2: usize, v: usize) -> Result<CnfFormula, SatError> {
    check_var(f, v)?;
    let c1 = f.clauses.get(j1).ok_or(SatError::ClauseOutOfRange(j1))?;
    let c2 = f.clauses.get(j2).ok_or(SatError::ClauseOutOfRange(j2))?;
    if !c1.pos.contains(&v) || !c2.neg.contains(&v) {
        return Err(SatError::NotResolvable { j1, j2, var: v });
    }
    let mut out = f.clone();
    out.clauses.push(resolvent(c1, c2, v));
    Ok(out)
}
