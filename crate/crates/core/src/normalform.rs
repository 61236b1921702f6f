//! Canonical forms and the decision procedure for diagram (in)equality.
//!
//! A diagram `m -> n` is bent into an `m + n -> 0` diagram, whose meaning is
//! a downward-closed set of assignments. That set has a unique minimal
//! antichain of negative clauses, and the clauses are rebuilt into a fixed
//! diagram shape. Two diagrams are equal exactly when these shapes coincide.

use std::fmt;

use thiserror::Error;

use crate::bits::Bits;
use crate::diagram::{bipartite, cap, cocopy_n, copy_n, cup, Diagram, Fan, Gather, Generator};
use crate::semantics::{Interpreter, SemanticsError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalFormError {
    #[error("expected a diagram with no outputs, found {0} outputs")]
    NotClosedOnRight(usize),
    #[error("set of assignments is not downward closed")]
    NotDownwardClosed,
    #[error("variable x{} out of range for {m} variables", var + 1)]
    VarOutOfRange { var: usize, m: usize },
    #[error("clauses do not form an antichain")]
    NotAntichain,
    #[error("cannot unbend {n} wires from a diagram with {dom} inputs")]
    WidthTooSmall { dom: usize, n: usize },
    #[error("diagrams have different types: {left:?} and {right:?}")]
    WidthMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("decision routes disagree: {0}")]
    RouteDisagreement(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

/// A downward-closed subset of `B^m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DownSet {
    m: usize,
    members: Bits,
}

impl DownSet {
    pub fn from_bits(m: usize, members: Bits) -> Result<DownSet, NormalFormError> {
        if members.len() != 1 << m {
            return Err(NormalFormError::Semantics(SemanticsError::LengthMismatch {
                expected: 1 << m,
                found: members.len(),
            }));
        }
        for x in members.iter_ones() {
            if (0..m).any(|i| x >> i & 1 == 1 && !members.get(x & !(1 << i))) {
                return Err(NormalFormError::NotDownwardClosed);
            }
        }
        Ok(DownSet { m, members })
    }

    pub fn from_members(
        m: usize,
        members: impl IntoIterator<Item = u64>,
    ) -> Result<DownSet, NormalFormError> {
        let mut bits = Bits::zeros(1 << m);
        for x in members {
            if x >> m != 0 {
                return Err(NormalFormError::VarOutOfRange {
                    var: 63 - x.leading_zeros() as usize,
                    m,
                });
            }
            bits.set(x as usize);
        }
        DownSet::from_bits(m, bits)
    }

    pub fn full(m: usize) -> DownSet {
        DownSet {
            m,
            members: Bits::ones(1 << m),
        }
    }

    pub fn empty(m: usize) -> DownSet {
        DownSet {
            m,
            members: Bits::zeros(1 << m),
        }
    }

    /// Every downward-closed subset of `B^m`, in a fixed order.
    ///
    /// Splitting on the last variable, a downset is a pair `lower >= upper`
    /// of downsets one dimension down.
    pub fn enumerate(m: usize) -> Vec<DownSet> {
        if m == 0 {
            return vec![DownSet::empty(0), DownSet::full(0)];
        }
        let smaller = DownSet::enumerate(m - 1);
        let half = 1usize << (m - 1);
        let mut out = Vec::new();
        for lower in &smaller {
            for upper in smaller.iter().filter(|u| u.members.is_subset(&lower.members)) {
                let mut bits = Bits::zeros(1 << m);
                bits.or_block(0, &lower.members, 0, half);
                bits.or_block(half, &upper.members, 0, half);
                out.push(DownSet { m, members: bits });
            }
        }
        out
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn contains(&self, x: u64) -> bool {
        self.members.get(x as usize)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.members.none()
    }

    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter_ones().map(|x| x as u64)
    }
}

impl fmt::Debug for DownSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self
            .members()
            .map(|x| crate::semantics::tuple_string(x, self.m))
            .collect();
        write!(f, "DownSet({}) {{{}}}", self.m, members.join(", "))
    }
}

/// A set of variables read as the clause `~x_i1 | ... | ~x_ik`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NegClause {
    vars: Vec<usize>,
}

impl NegClause {
    pub fn new(vars: impl IntoIterator<Item = usize>) -> NegClause {
        let mut vars: Vec<usize> = vars.into_iter().collect();
        vars.sort_unstable();
        vars.dedup();
        NegClause { vars }
    }

    fn from_mask(mask: u64) -> NegClause {
        NegClause::new((0..64).filter(|i| mask >> i & 1 == 1))
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn mask(&self) -> u64 {
        self.vars.iter().fold(0, |acc, &i| acc | 1 << i)
    }

    /// Some variable in the clause is false under `x`.
    pub fn satisfied_by(&self, x: u64) -> bool {
        self.mask() & !x != 0
    }

    pub fn is_subset(&self, other: &NegClause) -> bool {
        self.mask() & !other.mask() == 0
    }
}

impl fmt::Display for NegClause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return write!(f, "FALSE");
        }
        let lits: Vec<String> = self.vars.iter().map(|i| format!("~x{}", i + 1)).collect();
        write!(f, "{}", lits.join(" | "))
    }
}

/// A lexicographically sorted antichain of negative clauses over `m`
/// variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClauseAntichain {
    m: usize,
    clauses: Vec<NegClause>,
}

impl ClauseAntichain {
    pub fn new(m: usize, mut clauses: Vec<NegClause>) -> Result<ClauseAntichain, NormalFormError> {
        check_range(&clauses, m)?;
        clauses.sort();
        for (a, ca) in clauses.iter().enumerate() {
            for cb in &clauses[a + 1..] {
                if ca.is_subset(cb) || cb.is_subset(ca) {
                    return Err(NormalFormError::NotAntichain);
                }
            }
        }
        Ok(ClauseAntichain { m, clauses })
    }

    /// Reads the text form: one clause per line, `FALSE` for the empty
    /// clause. Blank lines are skipped.
    pub fn parse(text: &str, m: usize) -> Result<ClauseAntichain, NormalFormError> {
        let mut clauses = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if line == "FALSE" {
                clauses.push(NegClause::new([]));
                continue;
            }
            let mut vars = Vec::new();
            for lit in line.split('|') {
                let lit = lit.trim();
                let var = lit
                    .strip_prefix("~x")
                    .and_then(|v| v.parse::<usize>().ok())
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| NormalFormError::Parse {
                        line: k + 1,
                        message: format!("expected `~xN`, found `{lit}`"),
                    })?;
                vars.push(var - 1);
            }
            clauses.push(NegClause::new(vars));
        }
        ClauseAntichain::new(m, clauses)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn clauses(&self) -> &[NegClause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }
}

impl fmt::Display for ClauseAntichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn check_range(clauses: &[NegClause], m: usize) -> Result<(), NormalFormError> {
    for c in clauses {
        if let Some(&var) = c.vars.iter().find(|&&v| v >= m) {
            return Err(NormalFormError::VarOutOfRange { var, m });
        }
    }
    Ok(())
}

/// `b` such that `(x, b) in [[bend(d)]]` iff `(x, !b) in [[d]]`: each output
/// is capped against a fresh input, in ascending wire order.
pub fn bend(d: &Diagram) -> Diagram {
    let n = d.cod();
    let mut p = vec![0; 2 * n];
    for i in 0..n {
        p[i] = 2 * i;
        p[n + i] = 2 * i + 1;
    }
    let interleave = Diagram::permutation(&p).expect("interleaving is a bijection");
    let caps = Diagram::tensor_all(&vec![cap(); n]);
    Diagram::tensor_all(&[d.clone(), Diagram::identity(n)])
        .then(&interleave)
        .then(&caps)
}

/// Inverse of [`bend`] on the last `n` inputs of `e`.
pub fn unbend(e: &Diagram, n: usize) -> Result<Diagram, NormalFormError> {
    if e.dom() < n || e.cod() != 0 {
        if e.cod() != 0 {
            return Err(NormalFormError::NotClosedOnRight(e.cod()));
        }
        return Err(NormalFormError::WidthTooSmall { dom: e.dom(), n });
    }
    let m = e.dom() - n;
    let mut p: Vec<usize> = (0..m).collect();
    p.resize(m + 2 * n, 0);
    for i in 0..n {
        p[m + 2 * i] = m + i;
        p[m + 2 * i + 1] = m + n + i;
    }
    let cups = Diagram::tensor_all(&[Diagram::identity(m), Diagram::tensor_all(&vec![cup(); n])]);
    let route = Diagram::permutation(&p).expect("reshuffle is a bijection");
    Ok(cups
        .then(&route)
        .then(&Diagram::tensor_all(&[e.clone(), Diagram::identity(n)])))
}

/// The assignments `x` with `(x, •)` in `[[d]]`.
pub fn downset_of(interp: &Interpreter, d: &Diagram) -> Result<DownSet, NormalFormError> {
    if d.cod() != 0 {
        return Err(NormalFormError::NotClosedOnRight(d.cod()));
    }
    let r = interp.interpret(d)?;
    Ok(DownSet {
        m: d.dom(),
        members: r.table().clone(),
    })
}

/// The unique minimal clause set with satisfying assignments exactly `a`:
/// the minimal elements of the complement, each read as its set of ones.
pub fn minimal_clauses(a: &DownSet) -> ClauseAntichain {
    let m = a.m;
    let mut clauses: Vec<NegClause> = (0..1u64 << m)
        .filter(|&x| !a.contains(x))
        .filter(|&x| (0..m).all(|i| x >> i & 1 == 0 || a.contains(x & !(1 << i))))
        .map(NegClause::from_mask)
        .collect();
    clauses.sort();
    ClauseAntichain { m, clauses }
}

/// Assignments of `m` variables satisfying every clause.
pub fn satisfying_assignments(clauses: &[NegClause], m: usize) -> Result<DownSet, NormalFormError> {
    check_range(clauses, m)?;
    let masks: Vec<u64> = clauses.iter().map(NegClause::mask).collect();
    let mut bits = Bits::zeros(1 << m);
    for x in 0..1u64 << m {
        if masks.iter().all(|&c| c & !x != 0) {
            bits.set(x as usize);
        }
    }
    Ok(DownSet { m, members: bits })
}

/// The canonical `m -> n` diagram of a clause list over inputs and outputs.
/// Clause `j` with input part `S` and output part `T` becomes the white
/// spider `AND_S x <= OR_T y`, fed by copies of its inputs and joined into
/// its outputs.
fn canonical(m: usize, n: usize, clauses: &[(Vec<usize>, Vec<usize>)]) -> Diagram {
    let inputs: Vec<Vec<usize>> = clauses.iter().map(|(s, _)| s.clone()).collect();
    let mut per_output: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, (_, t)) in clauses.iter().enumerate() {
        for &o in t {
            per_output[o].push(j);
        }
    }
    let black = bipartite(Fan::Copy, Gather::Conj, m, &inputs);
    let white = bipartite(Fan::Coconj, Gather::Cocopy, clauses.len(), &per_output);
    black.then(&white)
}

/// The normal form of an `m -> 0` diagram with clause set `phi`: a copy
/// layer, a routing permutation, a conjunction per clause and a counit per
/// clause.
pub fn clause_diagram(phi: &ClauseAntichain) -> Diagram {
    let rows: Vec<(Vec<usize>, Vec<usize>)> =
        phi.clauses.iter().map(|c| (c.vars.clone(), Vec::new())).collect();
    canonical(phi.m, 0, &rows)
}

/// The bent clause antichain of `d`, over its inputs followed by its
/// outputs.
pub fn clauses_of(interp: &Interpreter, d: &Diagram) -> Result<ClauseAntichain, NormalFormError> {
    Ok(minimal_clauses(&downset_of(interp, &bend(d))?))
}

/// The canonical representative of `d`'s equivalence class.
pub fn normal_form(interp: &Interpreter, d: &Diagram) -> Result<Diagram, NormalFormError> {
    let (m, n) = (d.dom(), d.cod());
    let phi = clauses_of(interp, d)?;
    let rows: Vec<(Vec<usize>, Vec<usize>)> = phi
        .clauses
        .iter()
        .map(|c| {
            let (s, t): (Vec<usize>, Vec<usize>) = c.vars.iter().partition(|&&v| v < m);
            (s, t.into_iter().map(|v| v - m).collect())
        })
        .collect();
    Ok(canonical(m, n, &rows))
}

fn same_type(c: &Diagram, d: &Diagram) -> Result<(), NormalFormError> {
    if (c.dom(), c.cod()) != (d.dom(), d.cod()) {
        return Err(NormalFormError::WidthMismatch {
            left: (c.dom(), c.cod()),
            right: (d.dom(), d.cod()),
        });
    }
    Ok(())
}

/// Copies the inputs into `c` and `d` and joins their outputs pairwise;
/// denotes `[[c]] ∩ [[d]]`.
pub fn conjoin(c: &Diagram, d: &Diagram) -> Result<Diagram, NormalFormError> {
    same_type(c, d)?;
    let (m, n) = (c.dom(), c.cod());
    let copies = Diagram::tensor_all(&vec![copy_n(2); m]);
    let mut split = vec![0; 2 * m];
    for i in 0..m {
        split[2 * i] = i;
        split[2 * i + 1] = m + i;
    }
    let mut merge = vec![0; 2 * n];
    for j in 0..n {
        merge[j] = 2 * j;
        merge[n + j] = 2 * j + 1;
    }
    let joins = Diagram::tensor_all(&vec![cocopy_n(2); n]);
    Ok(Diagram::chain(
        copies,
        &[
            Diagram::permutation(&split).expect("bijection"),
            Diagram::tensor_all(&[c.clone(), d.clone()]),
            Diagram::permutation(&merge).expect("bijection"),
            joins,
        ],
    ))
}

/// `[[c]] = [[d]]`, by comparing normal forms and by comparing
/// interpretations. The two answers must agree.
pub fn decide_eq(interp: &Interpreter, c: &Diagram, d: &Diagram) -> Result<bool, NormalFormError> {
    same_type(c, d)?;
    let by_form = normal_form(interp, c)? == normal_form(interp, d)?;
    let by_meaning = interp.interpret(c)? == interp.interpret(d)?;
    if by_form != by_meaning {
        return Err(NormalFormError::RouteDisagreement(format!(
            "normal forms say {by_form}, interpretations say {by_meaning}"
        )));
    }
    Ok(by_form)
}

/// `[[c]] ⊆ [[d]]`, as `c ∧ d = c` and by direct inclusion.
pub fn decide_leq(interp: &Interpreter, c: &Diagram, d: &Diagram) -> Result<bool, NormalFormError> {
    same_type(c, d)?;
    let by_meet = decide_eq(interp, &conjoin(c, d)?, c)?;
    let by_inclusion = interp.interpret(c)?.is_subset(&interp.interpret(d)?);
    if by_meet != by_inclusion {
        return Err(NormalFormError::RouteDisagreement(format!(
            "meet test says {by_meet}, inclusion says {by_inclusion}"
        )));
    }
    Ok(by_meet)
}

/// `discard^m`, the normal form of the full downset.
pub fn discards(m: usize) -> Diagram {
    Diagram::tensor_all(&vec![Diagram::gen(Generator::Discard); m])
}
