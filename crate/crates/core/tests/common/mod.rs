//! Random generators and brute-force oracles shared by the integration
//! tests. Nothing here calls into the library's evaluators.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use sata::diagram::Node;
use sata::logicprog::{HornClause, LogicProgram};
use sata::sat::{Clause, CnfFormula};
use sata::semantics::{standard_laws, Law, Mode};
use sata::{Diagram, Generator};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A relation as an explicit set of `(x, y)` pairs, bit `i` being wire `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairs {
    pub m: usize,
    pub n: usize,
    pub set: BTreeSet<(u64, u64)>,
}

impl Pairs {
    pub fn from_fn(m: usize, n: usize, f: impl Fn(u64, u64) -> bool) -> Pairs {
        let mut set = BTreeSet::new();
        for x in 0..1u64 << m {
            for y in 0..1u64 << n {
                if f(x, y) {
                    set.insert((x, y));
                }
            }
        }
        Pairs { m, n, set }
    }

    pub fn seq(&self, other: &Pairs) -> Pairs {
        assert_eq!(self.n, other.m);
        let mut set = BTreeSet::new();
        for &(x, y) in &self.set {
            for &(y2, z) in &other.set {
                if y == y2 {
                    set.insert((x, z));
                }
            }
        }
        Pairs { m: self.m, n: other.n, set }
    }

    pub fn par(&self, other: &Pairs) -> Pairs {
        let mut set = BTreeSet::new();
        for &(x1, y1) in &self.set {
            for &(x2, y2) in &other.set {
                set.insert((x1 | x2 << self.m, y1 | y2 << self.n));
            }
        }
        Pairs {
            m: self.m + other.m,
            n: self.n + other.n,
            set,
        }
    }

    pub fn is_subset(&self, other: &Pairs) -> bool {
        self.set.is_subset(&other.set)
    }
}

fn bit(v: u64, i: usize) -> bool {
    v >> i & 1 == 1
}

fn le(a: bool, b: bool) -> bool {
    !a || b
}

pub fn generator_pairs(g: Generator) -> Pairs {
    use Generator::*;
    match g {
        Copy => Pairs::from_fn(1, 2, |x, y| le(bit(x, 0), bit(y, 0)) && le(bit(x, 0), bit(y, 1))),
        Discard => Pairs::from_fn(1, 0, |_, _| true),
        Cocopy => Pairs::from_fn(2, 1, |x, y| le(bit(x, 0), bit(y, 0)) && le(bit(x, 1), bit(y, 0))),
        Codiscard => Pairs::from_fn(0, 1, |_, _| true),
        Conj => Pairs::from_fn(2, 1, |x, y| le(bit(x, 0) && bit(x, 1), bit(y, 0))),
        Unit => Pairs::from_fn(0, 1, |_, y| y == 1),
        Coconj => Pairs::from_fn(1, 2, |x, y| le(bit(x, 0), bit(y, 0) || bit(y, 1))),
        Counit => Pairs::from_fn(1, 0, |x, _| x == 0),
        Identity => Pairs::from_fn(1, 1, |x, y| le(bit(x, 0), bit(y, 0))),
        Swap => Pairs::from_fn(2, 2, |x, y| le(bit(x, 0), bit(y, 1)) && le(bit(x, 1), bit(y, 0))),
    }
}

/// Denotation by structural recursion over explicit pair sets.
pub fn oracle(d: &Diagram) -> Pairs {
    match d.node() {
        Node::Empty => Pairs::from_fn(0, 0, |_, _| true),
        Node::Gen(g) => generator_pairs(*g),
        Node::Seq(a, b) => oracle(a).seq(&oracle(b)),
        Node::Par(a, b) => oracle(a).par(&oracle(b)),
    }
}

pub fn pairs_of(r: &sata::MonRel) -> Pairs {
    Pairs {
        m: r.m(),
        n: r.n(),
        set: r.pairs().collect(),
    }
}

pub fn seq(a: &Diagram, b: &Diagram) -> Diagram {
    Diagram::seq(a, b).unwrap()
}

pub fn par(a: &Diagram, b: &Diagram) -> Diagram {
    Diagram::par(a, b)
}

/// `id^off * d * id^rest`.
pub fn placed(d: &Diagram, off: usize, width: usize) -> Diagram {
    let rest = width - off - d.dom();
    par(&par(&Diagram::identity(off), d), &Diagram::identity(rest))
}

const MAX_WIDTH: usize = 3;

/// A layered random diagram: every intermediate width stays within 3 and at
/// most `max_gens` generators are placed.
pub fn random_diagram(rng: &mut ChaCha8Rng, dom: usize, max_gens: usize) -> Diagram {
    random_diagram_over(rng, dom, max_gens, &Generator::ALL)
}

pub fn random_diagram_over(rng: &mut ChaCha8Rng, dom: usize, max_gens: usize, pool: &[Generator]) -> Diagram {
    let mut d = Diagram::identity(dom);
    let mut w = dom;
    let gens = rng.gen_range(0..=max_gens);
    for _ in 0..gens {
        let options: Vec<Generator> = pool
            .iter()
            .copied()
            .filter(|g| {
                let (a, b) = g.arity();
                a <= w && w - a + b <= MAX_WIDTH
            })
            .collect();
        let Some(&g) = options.choose(rng) else { break };
        let off = rng.gen_range(0..=w - g.arity().0);
        let layer = placed(&Diagram::gen(g), off, w);
        w = layer.cod();
        d = seq(&d, &layer);
    }
    d
}

/// A random diagram of the given type, by rejection.
pub fn random_typed(rng: &mut ChaCha8Rng, dom: usize, cod: usize, max_gens: usize) -> Diagram {
    loop {
        let d = random_diagram(rng, dom, max_gens);
        if d.cod() == cod {
            return d;
        }
    }
}

/// Laws with equal domain and codomain and at most `max_size` generators per
/// side, usable as local rewrites.
pub fn small_laws(max_size: usize) -> Vec<Law> {
    standard_laws()
        .into_iter()
        .filter(|l| {
            l.lhs.dom() == l.lhs.cod()
                && l.lhs.dom() <= MAX_WIDTH
                && l.lhs.size().max(l.rhs.size()) <= max_size
        })
        .collect()
}

/// A pair of diagrams of equal type. Roughly a third are independent draws,
/// a third differ by one law application (so are equal, or ordered for
/// inequational laws) and the rest differ by one generator.
pub fn random_pair(rng: &mut ChaCha8Rng, laws: &[Law]) -> (Diagram, Diagram) {
    let dom = rng.gen_range(0..=MAX_WIDTH);
    match rng.gen_range(0..3) {
        0 => {
            let c = random_diagram(rng, dom, 12);
            let d = random_typed(rng, dom, c.cod(), 12);
            (c, d)
        }
        1 => {
            let budget = 12;
            loop {
                let law = laws.choose(rng).unwrap();
                let k = law.lhs.dom();
                let size = law.lhs.size().max(law.rhs.size());
                if k > MAX_WIDTH || size > budget {
                    continue;
                }
                let w = rng.gen_range(k..=MAX_WIDTH);
                let before = random_diagram(rng, dom, (budget - size) / 2);
                if before.cod() != w {
                    continue;
                }
                let after = random_diagram(rng, w, (budget - size) / 2);
                let off = rng.gen_range(0..=w - k);
                let (l, r) = (placed(&law.lhs, off, w), placed(&law.rhs, off, w));
                let c = seq(&seq(&before, &l), &after);
                let d = seq(&seq(&before, &r), &after);
                return if law.mode == Mode::Leq || rng.gen_bool(0.5) { (c, d) } else { (d, c) };
            }
        }
        _ => {
            let c = random_diagram(rng, dom, 12);
            let d = mutate(rng, &c);
            (c, d)
        }
    }
}

/// Replaces one generator by another of the same arity, when one exists.
pub fn mutate(rng: &mut ChaCha8Rng, d: &Diagram) -> Diagram {
    let count = d.size();
    if count == 0 {
        return d.clone();
    }
    let target = rng.gen_range(0..count);
    let mut seen = 0;
    let choice = rng.gen::<u64>();
    replace_nth(d, target, &mut seen, choice)
}

fn replace_nth(d: &Diagram, target: usize, seen: &mut usize, choice: u64) -> Diagram {
    match d.node() {
        Node::Empty => d.clone(),
        Node::Gen(g) => {
            let here = *seen == target;
            *seen += 1;
            if !here {
                return d.clone();
            }
            let same: Vec<Generator> = Generator::ALL
                .iter()
                .copied()
                .filter(|h| h.arity() == g.arity() && h != g)
                .collect();
            if same.is_empty() {
                d.clone()
            } else {
                Diagram::gen(same[choice as usize % same.len()])
            }
        }
        Node::Seq(a, b) => {
            let a = replace_nth(a, target, seen, choice);
            let b = replace_nth(b, target, seen, choice);
            seq(&a, &b)
        }
        Node::Par(a, b) => {
            let a = replace_nth(a, target, seen, choice);
            let b = replace_nth(b, target, seen, choice);
            par(&a, &b)
        }
    }
}

/// A random clause over `n` variables; each variable is absent, negative
/// or positive with equal odds, except that it may not be both.
pub fn random_clause(rng: &mut ChaCha8Rng, n: usize) -> Clause {
    let mut neg = BTreeSet::new();
    let mut pos = BTreeSet::new();
    for v in 0..n {
        match rng.gen_range(0..3) {
            0 => {}
            1 => {
                neg.insert(v);
            }
            _ => {
                pos.insert(v);
            }
        }
    }
    Clause::new(neg, pos)
}

/// Clauses may include tautologies: half the time one extra variable is made
/// to occur with both signs.
pub fn random_formula(rng: &mut ChaCha8Rng, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(0..=max_vars);
    let k = rng.gen_range(0..=max_clauses);
    let mut clauses = Vec::new();
    for _ in 0..k {
        let mut c = random_clause(rng, n);
        if n > 0 && rng.gen_bool(0.1) {
            let v = rng.gen_range(0..n);
            let mut neg = c.neg().clone();
            let mut pos = c.pos().clone();
            neg.insert(v);
            pos.insert(v);
            c = Clause::new(neg, pos);
        }
        clauses.push(c);
    }
    CnfFormula::new(n, clauses).unwrap()
}

pub fn brute_sat(f: &CnfFormula) -> bool {
    (0..1u64 << f.num_vars()).any(|x| {
        f.clauses()
            .iter()
            .all(|c| c.neg().iter().any(|&v| !bit(x, v)) || c.pos().iter().any(|&v| bit(x, v)))
    })
}

pub fn brute_models(f: &CnfFormula) -> Vec<u64> {
    (0..1u64 << f.num_vars())
        .filter(|&x| {
            f.clauses()
                .iter()
                .all(|c| c.neg().iter().any(|&v| !bit(x, v)) || c.pos().iter().any(|&v| bit(x, v)))
        })
        .collect()
}

pub fn random_program(rng: &mut ChaCha8Rng, max_atoms: usize, max_clauses: usize) -> LogicProgram {
    let n = rng.gen_range(1..=max_atoms);
    let atoms: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let k = rng.gen_range(0..=max_clauses);
    let clauses = (0..k)
        .map(|_| HornClause {
            body: (0..n).filter(|_| rng.gen_bool(0.35)).collect(),
            head: rng.gen_range(0..n),
        })
        .collect();
    LogicProgram::new(atoms, clauses).unwrap()
}

/// One application of `T` on bitmasks, straight from the clause list.
pub fn step(l: &LogicProgram, i: u64) -> u64 {
    l.clauses()
        .iter()
        .filter(|c| c.body.iter().all(|&a| bit(i, a)))
        .fold(0, |acc, c| acc | 1 << c.head)
}

/// `Cn(I)`: the least `J >= I` closed under `T`, by brute search over all
/// candidate sets.
pub fn closure_by_search(l: &LogicProgram, i: u64) -> u64 {
    let n = l.atoms().len();
    let closed: Vec<u64> = (0..1u64 << n)
        .filter(|&j| j & i == i && step(l, j) & !j == 0)
        .collect();
    let meet = closed.iter().fold((1u64 << n) - 1, |acc, &j| acc & j);
    assert!(closed.contains(&meet));
    meet
}

/// Every downward-closed subset of `B^m`, by filtering all subsets (m <= 4).
pub fn brute_downsets(m: usize) -> Vec<HashSet<u64>> {
    let points = 1usize << m;
    let mut out = Vec::new();
    for s in 0u64..1 << points {
        let members: HashSet<u64> = (0..points as u64).filter(|&x| bit(s, x as usize)).collect();
        let closed = members
            .iter()
            .all(|&x| (0..points as u64).all(|y| y & x != y || members.contains(&y)));
        if closed {
            out.push(members);
        }
    }
    out
}
