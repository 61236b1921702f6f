//! Propositional definite programs and their consequence diagrams.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::diagram::{bipartite, cap, cup, Diagram, Fan, Gather, Generator};
use crate::normalform::{decide_eq, NormalFormError};
use crate::semantics::{Interpreter, MonFunc, SemanticsError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: atom `{atom}` is not listed in the %atoms pragma")]
    UnknownAtom { line: usize, atom: String },
    #[error("unknown atom `{0}`")]
    UnknownFact(String),
    #[error("programs have different atom lists: {left:?} and {right:?}")]
    AtomMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },
    #[error("expected a diagram {expected}, found {found}")]
    WrongType { expected: String, found: String },
    #[error("the up-set has no single least element")]
    NotPrincipal,
    #[error("decision routes disagree: {0}")]
    RouteDisagreement(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
}

/// `body -> head`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HornClause {
    pub body: BTreeSet<usize>,
    pub head: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicProgram {
    atoms: Vec<String>,
    clauses: Vec<HornClause>,
}

/// A set of atoms, by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Interpretation(BTreeSet<usize>);

impl Interpretation {
    pub fn new(atoms: impl IntoIterator<Item = usize>) -> Self {
        Interpretation(atoms.into_iter().collect())
    }

    pub fn from_mask(mask: u64) -> Self {
        Interpretation::new((0..64).filter(|i| mask >> i & 1 == 1))
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |acc, &i| acc | 1 << i)
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.0.contains(&atom)
    }

    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &Interpretation) -> Interpretation {
        Interpretation(self.0.union(&other.0).copied().collect())
    }
}

impl LogicProgram {
    pub fn new(atoms: Vec<String>, clauses: Vec<HornClause>) -> Result<Self, LpError> {
        let n = atoms.len();
        for c in &clauses {
            if let Some(&bad) = c.body.iter().chain([&c.head]).find(|&&a| a >= n) {
                return Err(LpError::UnknownFact(format!("#{bad}")));
            }
        }
        let mut unique: Vec<HornClause> = Vec::new();
        for c in clauses {
            if !unique.contains(&c) {
                unique.push(c);
            }
        }
        Ok(LogicProgram {
            atoms,
            clauses: unique,
        })
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn clauses(&self) -> &[HornClause] {
        &self.clauses
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| a == name)
    }

    /// Reads a comma separated atom list such as `a,b`.
    pub fn interpretation(&self, names: &str) -> Result<Interpretation, LpError> {
        names
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| self.atom_index(s).ok_or_else(|| LpError::UnknownFact(s.to_string())))
            .collect::<Result<BTreeSet<_>, _>>()
            .map(Interpretation)
    }

    /// Atom names of `i`, in atom order.
    pub fn names(&self, i: &Interpretation) -> Vec<&str> {
        i.atoms().map(|a| self.atoms[a].as_str()).collect()
    }
}

impl fmt::Display for LogicProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "%atoms: {}", self.atoms.join(","))?;
        for c in &self.clauses {
            let head = &self.atoms[c.head];
            if c.body.is_empty() {
                writeln!(f, "{head}.")?;
            } else {
                let body: Vec<&str> = c.body.iter().map(|&b| self.atoms[b].as_str()).collect();
                writeln!(f, "{head} :- {}.", body.join(", "))?;
            }
        }
        Ok(())
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Reads `a.` and `a :- b, c.` statements. `%` starts a comment, except
/// that a line `%atoms: a,b,c` fixes the atom order.
pub fn parse_program(text: &str) -> Result<LogicProgram, LpError> {
    let mut atoms: Vec<String> = Vec::new();
    let mut fixed = false;
    let mut clauses = Vec::new();
    let mut pending = String::new();
    let mut pending_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let err = |message: String| LpError::Parse {
            line: line_no,
            message,
        };
        let trimmed = raw.trim();
        if let Some(list) = trimmed.strip_prefix("%atoms:") {
            if fixed || !clauses.is_empty() || !pending.trim().is_empty() {
                return Err(err("the %atoms pragma must come first and only once".into()));
            }
            for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                if !is_identifier(name) {
                    return Err(err(format!("`{name}` is not an atom name")));
                }
                if atoms.iter().any(|a| a == name) {
                    return Err(err(format!("atom `{name}` listed twice")));
                }
                atoms.push(name.to_string());
            }
            fixed = true;
            continue;
        }
        let code = raw.split('%').next().unwrap_or("");
        for ch in code.chars() {
            if pending.trim().is_empty() {
                pending_line = line_no;
            }
            if ch == '.' {
                let stmt = std::mem::take(&mut pending);
                clauses.push(statement(&stmt, pending_line, &mut atoms, fixed)?);
            } else {
                pending.push(ch);
            }
        }
        pending.push(' ');
    }
    if !pending.trim().is_empty() {
        return Err(LpError::Parse {
            line: pending_line,
            message: "statement is missing its final `.`".into(),
        });
    }
    LogicProgram::new(atoms, clauses)
}

fn statement(
    stmt: &str,
    line: usize,
    atoms: &mut Vec<String>,
    fixed: bool,
) -> Result<HornClause, LpError> {
    let err = |message: String| LpError::Parse { line, message };
    let mut atom = |name: &str| -> Result<usize, LpError> {
        if !is_identifier(name) {
            return Err(err(format!("`{name}` is not an atom name")));
        }
        if let Some(i) = atoms.iter().position(|a| a == name) {
            return Ok(i);
        }
        if fixed {
            return Err(LpError::UnknownAtom {
                line,
                atom: name.to_string(),
            });
        }
        atoms.push(name.to_string());
        Ok(atoms.len() - 1)
    };
    let (head, body) = match stmt.split_once(":-") {
        Some((h, b)) => (h.trim(), Some(b)),
        None => (stmt.trim(), None),
    };
    let head = atom(head)?;
    let mut set = BTreeSet::new();
    if let Some(b) = body {
        if b.trim().is_empty() {
            return Err(err("empty body after `:-`".into()));
        }
        for name in b.split(',') {
            set.insert(atom(name.trim())?);
        }
    }
    Ok(HornClause { body: set, head })
}

/// `T(I)`: heads of the clauses whose bodies hold in `i`.
pub fn immediate_consequence(l: &LogicProgram, i: &Interpretation) -> Interpretation {
    Interpretation(
        l.clauses
            .iter()
            .filter(|c| c.body.is_subset(&i.0))
            .map(|c| c.head)
            .collect(),
    )
}

/// `Cn(I)`, the least `U` with `I ∪ T(U) ⊆ U`.
pub fn consequence(l: &LogicProgram, i: &Interpretation) -> Interpretation {
    let mut u = i.clone();
    loop {
        let next = i.union(&immediate_consequence(l, &u));
        if next == u {
            return u;
        }
        u = next;
    }
}

/// The least Herbrand model, `Cn(∅)`.
pub fn herbrand(l: &LogicProgram) -> Interpretation {
    consequence(l, &Interpretation::default())
}

/// `T` as a value table over bitmasks.
pub fn immediate_consequence_function(l: &LogicProgram) -> MonFunc {
    let n = l.atoms.len();
    MonFunc::from_fn(n, n, |x| immediate_consequence(l, &Interpretation::from_mask(x)).mask())
        .expect("the immediate consequence operator is monotone")
}

/// `Cn` as a value table over bitmasks.
pub fn consequence_function(l: &LogicProgram) -> MonFunc {
    let n = l.atoms.len();
    MonFunc::from_fn(n, n, |x| consequence(l, &Interpretation::from_mask(x)).mask())
        .expect("the consequence operator is monotone")
}

/// Copies each atom once per body it occurs in, conjoins each body, and
/// joins the results per head.
pub fn imcnsq_diagram(l: &LogicProgram) -> Diagram {
    let n = l.atoms.len();
    let bodies: Vec<Vec<usize>> = l.clauses.iter().map(|c| c.body.iter().copied().collect()).collect();
    let mut by_head: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, c) in l.clauses.iter().enumerate() {
        by_head[c.head].push(j);
    }
    bipartite(Fan::Copy, Gather::Conj, n, &bodies)
        .then(&bipartite(Fan::Copy, Gather::Cocopy, l.clauses.len(), &by_head))
}

/// The consequence diagram: a feedback loop around
/// [`imcnsq_diagram`].
///
/// Per atom, the input `I` and the fed-back value `K6` are joined into
/// `K1`; `K1` is copied to the output `J` and to `K2`; `K2` runs through the
/// immediate consequence diagram to `K3`; a cap `K3 ∧ K5 <= 0` and a cup
/// `1 <= K5 ∨ K6` close the loop, forcing `K3 <= K6`.
pub fn cnsq_diagram(l: &LogicProgram) -> Diagram {
    let n = l.atoms.len();
    let id = Diagram::identity(n);
    let tensor = |g: Diagram| Diagram::tensor_all(&vec![g; n]);

    let mut gather = vec![0; 3 * n];
    let mut fork = vec![0; 3 * n];
    let mut close = vec![0; 3 * n];
    for i in 0..n {
        // [I, (K5_i, K6_i)...] -> [(I_i, K6_i)..., K5...]
        gather[i] = 2 * i;
        gather[n + 2 * i] = 2 * n + i;
        gather[n + 2 * i + 1] = 2 * i + 1;
        // [(J_i, K2_i)..., K5...] -> [J, K2, K5]
        fork[2 * i] = i;
        fork[2 * i + 1] = n + i;
        fork[2 * n + i] = 2 * n + i;
        // [J, K3, K5] -> [J, (K3_i, K5_i)...]
        close[i] = i;
        close[n + i] = n + 2 * i;
        close[2 * n + i] = n + 2 * i + 1;
    }
    let perm = |p: &[usize]| Diagram::permutation(p).expect("bijection");
    Diagram::chain(
        Diagram::tensor_all(&[id.clone(), tensor(cup())]),
        &[
            perm(&gather),
            Diagram::tensor_all(&[tensor(Diagram::gen(Generator::Cocopy)), id.clone()]),
            Diagram::tensor_all(&[tensor(Diagram::gen(Generator::Copy)), id.clone()]),
            perm(&fork),
            Diagram::tensor_all(&[id.clone(), imcnsq_diagram(l), id.clone()]),
            perm(&close),
            Diagram::tensor_all(&[id, tensor(cap())]),
        ],
    )
}

/// `unit` on the atoms of `i`, `codiscard` elsewhere; denotes the up-set
/// of `i`.
pub fn interp_diagram(i: &Interpretation, n: usize) -> Diagram {
    let parts: Vec<Diagram> = (0..n)
        .map(|a| {
            Diagram::gen(if i.contains(a) {
                Generator::Unit
            } else {
                Generator::Codiscard
            })
        })
        .collect();
    Diagram::tensor_all(&parts)
}

/// The least element of the up-set denoted by a `0 -> n` diagram.
pub fn extract_interpretation(interp: &Interpreter, d: &Diagram) -> Result<Interpretation, LpError> {
    if d.dom() != 0 {
        return Err(LpError::WrongType {
            expected: "0 -> n".into(),
            found: format!("{} -> {}", d.dom(), d.cod()),
        });
    }
    let r = interp.interpret(d)?;
    let members: Vec<u64> = r.image(0).collect();
    let minimal: Vec<u64> = members
        .iter()
        .copied()
        .filter(|&y| (0..d.cod()).all(|i| y >> i & 1 == 0 || !r.contains(0, y & !(1 << i))))
        .collect();
    match minimal.as_slice() {
        [y] => Ok(Interpretation::from_mask(*y)),
        _ => Err(LpError::NotPrincipal),
    }
}

/// `Cn(I)` read off `interp_diagram(I) ; cnsq_diagram(L)`.
pub fn model_via_diagram(
    interp: &Interpreter,
    l: &LogicProgram,
    i: &Interpretation,
) -> Result<Interpretation, LpError> {
    let n = l.atoms.len();
    let d = interp_diagram(i, n).then(&cnsq_diagram(l));
    extract_interpretation(interp, &d)
}

/// Equal consequence operators, by comparing consequence diagrams and by
/// comparing `Cn` on every interpretation.
pub fn lp_equiv(interp: &Interpreter, p: &LogicProgram, q: &LogicProgram) -> Result<bool, LpError> {
    if p.atoms != q.atoms {
        return Err(LpError::AtomMismatch {
            left: p.atoms.clone(),
            right: q.atoms.clone(),
        });
    }
    let by_diagram = decide_eq(interp, &cnsq_diagram(p), &cnsq_diagram(q))?;
    let by_operator = consequence_function(p) == consequence_function(q);
    if by_diagram != by_operator {
        return Err(LpError::RouteDisagreement(format!(
            "diagrams say {by_diagram}, consequence operators say {by_operator}"
        )));
    }
    Ok(by_diagram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{represents, MonRel};

    const P: &str = "%atoms: a,b,c,d\na.\nd :- b.\nd :- c.\nb :- c, d.\n";
    const Q: &str = "%atoms: a,b,c,d\na.\nd :- a, b.\nb :- c.\n";

    fn set(l: &LogicProgram, names: &str) -> Interpretation {
        l.interpretation(names).unwrap()
    }

    #[test]
    fn parses_examples() {
        let p = parse_program(P).unwrap();
        assert_eq!(p.atoms(), ["a", "b", "c", "d"]);
        assert_eq!(p.clauses().len(), 4);
        assert_eq!(p.clauses()[3].body, BTreeSet::from([2, 3]));
        let e = parse_program("").unwrap();
        assert!(e.atoms().is_empty() && e.clauses().is_empty());
        let q = parse_program(Q).unwrap();
        assert_eq!(q.to_string(), Q);
        let r = parse_program("b :- a. % trailing\nc :- b,\n a.\nb :- a.\n").unwrap();
        assert_eq!(r.atoms(), ["b", "a", "c"]);
        assert_eq!(r.clauses().len(), 2);
    }

    #[test]
    fn rejects_bad_programs() {
        assert!(matches!(
            parse_program("%atoms: a\nb.\n"),
            Err(LpError::UnknownAtom { line: 2, .. })
        ));
        assert!(matches!(parse_program("a :- b"), Err(LpError::Parse { .. })));
        assert!(matches!(parse_program("a :- ."), Err(LpError::Parse { .. })));
        assert!(matches!(parse_program("1a."), Err(LpError::Parse { .. })));
        assert!(matches!(parse_program("%atoms: a,a\n"), Err(LpError::Parse { .. })));
    }

    #[test]
    fn operator_examples() {
        let p = parse_program(P).unwrap();
        assert_eq!(immediate_consequence(&p, &set(&p, "c")), set(&p, "a,d"));
        assert_eq!(immediate_consequence(&p, &set(&p, "")), set(&p, "a"));
        assert_eq!(consequence(&p, &set(&p, "c")), set(&p, "a,b,c,d"));
        assert_eq!(herbrand(&p), set(&p, "a"));
        let q = parse_program(Q).unwrap();
        assert_eq!(herbrand(&q), set(&q, "a"));
        let e = parse_program("%atoms: a,b\n").unwrap();
        assert!(immediate_consequence(&e, &set(&e, "a,b")).is_empty());
        assert_eq!(consequence(&e, &set(&e, "b")), set(&e, "b"));
        assert!(herbrand(&e).is_empty());
    }

    #[test]
    fn diagrams_represent_operators() {
        let interp = Interpreter::default();
        for text in [P, Q, "%atoms: a,b\n", "a :- a.\n"] {
            let l = parse_program(text).unwrap();
            let t = interp.interpret(&imcnsq_diagram(&l)).unwrap();
            assert!(represents(&t, &immediate_consequence_function(&l)).unwrap(), "{text}");
            let c = interp.interpret(&cnsq_diagram(&l)).unwrap();
            assert!(represents(&c, &consequence_function(&l)).unwrap(), "{text}");
        }
        let e = parse_program("%atoms: a,b\n").unwrap();
        assert_eq!(interp.interpret(&cnsq_diagram(&e)).unwrap(), MonRel::order(2));
        let aa = parse_program("a :- a.\n").unwrap();
        let r = interp.interpret(&cnsq_diagram(&aa)).unwrap();
        assert_eq!(r, MonRel::order(1));
        assert!(r.contains(0, 1));
        assert!(interp.interpret(&imcnsq_diagram(&aa)).unwrap().contains(0, 0));
    }

    #[test]
    fn interpretation_diagrams() {
        let interp = Interpreter::default();
        let d = interp_diagram(&Interpretation::default(), 2);
        assert_eq!(interp.interpret(&d).unwrap(), MonRel::top(0, 2));
        let a = Interpretation::new([0]);
        let d = interp_diagram(&a, 4);
        assert_eq!(crate::diagram::emit_sd(&d), "unit * codiscard * codiscard * codiscard");
        assert_eq!(extract_interpretation(&interp, &d).unwrap(), a);
        assert!(matches!(
            extract_interpretation(&interp, &cup()),
            Err(LpError::NotPrincipal)
        ));
        let bottom = crate::diagram::parse_sd("unit ; counit ; codiscard").unwrap();
        assert!(matches!(extract_interpretation(&interp, &bottom), Err(LpError::NotPrincipal)));
    }

    #[test]
    fn models_and_equivalence() {
        let interp = Interpreter::default();
        let p = parse_program(P).unwrap();
        let q = parse_program(Q).unwrap();
        assert_eq!(model_via_diagram(&interp, &p, &set(&p, "c")).unwrap(), set(&p, "a,b,c,d"));
        assert_eq!(model_via_diagram(&interp, &p, &set(&p, "")).unwrap(), set(&p, "a"));
        let e = parse_program("%atoms: a,b,c\n").unwrap();
        assert_eq!(model_via_diagram(&interp, &e, &set(&e, "a,c")).unwrap(), set(&e, "a,c"));
        assert!(lp_equiv(&interp, &p, &q).unwrap());
        assert!(lp_equiv(&interp, &p, &p).unwrap());
        let no_fact = parse_program("%atoms: a,b,c,d\nd :- b.\nd :- c.\nb :- c, d.\n").unwrap();
        assert!(!lp_equiv(&interp, &p, &no_fact).unwrap());
        let other = parse_program("%atoms: a,b\n").unwrap();
        assert!(matches!(lp_equiv(&interp, &p, &other), Err(LpError::AtomMismatch { .. })));
    }
}
