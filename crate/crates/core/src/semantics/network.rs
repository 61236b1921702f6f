//! Evaluation of a diagram as a conjunctive query over its wires.
//!
//! Every wire segment becomes a Boolean variable and every generator a
//! constraint on the variables at its ports. Identities and swaps only
//! rename wires. Internal wires are then existentially projected out one at
//! a time, always picking the wire whose elimination touches the fewest
//! variables.

use std::collections::BTreeSet;

use super::{Interpreter, MonRel, SemanticsError};
use crate::bits::Bits;
use crate::diagram::{Diagram, Generator, Node};

struct Factor {
    scope: Vec<usize>,
    table: Bits,
}

enum Built {
    Ok,
    Empty,
}

struct Network<'a> {
    interp: &'a Interpreter,
    vars: usize,
    factors: Vec<Factor>,
    tables: Vec<Option<(Bits, bool)>>,
    empty: bool,
}

impl<'a> Network<'a> {
    fn fresh(&mut self) -> usize {
        self.vars += 1;
        self.vars - 1
    }

    /// Local table of generator `g`: bit `t` of the index is port `t`,
    /// inputs first.
    fn generator_table(&mut self, g: Generator) -> (Bits, bool) {
        let slot = Generator::ALL.iter().position(|h| *h == g).expect("listed");
        if let Some(t) = &self.tables[slot] {
            return t.clone();
        }
        let rel = self.interp.generator(g);
        let (a, b) = g.arity();
        let mut table = Bits::zeros(1 << (a + b));
        for u in 0..1u64 << (a + b) {
            if rel.contains(u & ((1 << a) - 1), u >> a) {
                table.set(u as usize);
            }
        }
        let full = table.count_ones() == table.len();
        self.tables[slot] = Some((table.clone(), full));
        (table, full)
    }

    fn add(&mut self, scope: Vec<usize>, table: Bits, full: bool) {
        if full {
            return;
        }
        if table.none() {
            self.empty = true;
        }
        self.factors.push(Factor { scope, table });
    }

    fn walk(&mut self, d: &Diagram, inputs: Vec<usize>) -> Vec<usize> {
        let plain = self.interp.overrides.is_none();
        match d.node() {
            Node::Empty => inputs,
            Node::Gen(Generator::Identity) if plain => inputs,
            Node::Gen(Generator::Swap) if plain => vec![inputs[1], inputs[0]],
            Node::Gen(g) => {
                let outputs: Vec<usize> = (0..g.arity().1).map(|_| self.fresh()).collect();
                let (table, full) = self.generator_table(*g);
                let scope = inputs.iter().chain(&outputs).copied().collect();
                self.add(scope, table, full);
                outputs
            }
            Node::Seq(a, b) => {
                let mid = self.walk(a, inputs);
                self.walk(b, mid)
            }
            Node::Par(a, b) => {
                let mut top = inputs;
                let bottom = top.split_off(a.dom());
                let mut out = self.walk(a, top);
                out.extend(self.walk(b, bottom));
                out
            }
        }
    }

    fn build(&mut self, d: &Diagram) -> (Vec<usize>, Vec<usize>, Built) {
        let inputs: Vec<usize> = (0..d.dom()).map(|_| self.fresh()).collect();
        let ends = self.walk(d, inputs.clone());
        let order = {
            let mut t = Bits::zeros(4);
            for u in [0usize, 2, 3] {
                t.set(u);
            }
            t
        };
        let outputs: Vec<usize> = ends
            .iter()
            .map(|&e| {
                let y = self.fresh();
                self.add(vec![e, y], order.clone(), false);
                y
            })
            .collect();
        let state = if self.empty { Built::Empty } else { Built::Ok };
        (inputs, outputs, state)
    }
}

/// Conjunction of `factors` over `scope`.
fn join(factors: &[Factor], scope: &[usize]) -> Bits {
    let local = |v: usize| scope.iter().position(|&w| w == v).expect("scope covers factor");
    let positions: Vec<Vec<usize>> = factors
        .iter()
        .map(|f| f.scope.iter().map(|&v| local(v)).collect())
        .collect();
    let mut out = Bits::zeros(1 << scope.len());
    'assignments: for u in 0..1usize << scope.len() {
        for (f, pos) in factors.iter().zip(&positions) {
            let idx = pos
                .iter()
                .enumerate()
                .fold(0usize, |acc, (t, &p)| acc | (u >> p & 1) << t);
            if !f.table.get(idx) {
                continue 'assignments;
            }
        }
        out.set(u);
    }
    out
}

fn union_size(factors: &[Factor], v: usize) -> usize {
    let mut s = BTreeSet::new();
    for f in factors.iter().filter(|f| f.scope.contains(&v)) {
        s.extend(f.scope.iter().copied());
    }
    s.len()
}

pub(super) fn evaluate(interp: &Interpreter, d: &Diagram) -> Result<MonRel, SemanticsError> {
    let (m, n) = (d.dom(), d.cod());
    interp.check(m + n)?;
    let mut net = Network {
        interp,
        vars: 0,
        factors: Vec::new(),
        tables: vec![None; Generator::ALL.len()],
        empty: false,
    };
    let (inputs, outputs, state) = net.build(d);
    if let Built::Empty = state {
        return Ok(MonRel::bottom(m, n));
    }
    let boundary: Vec<usize> = inputs.iter().chain(&outputs).copied().collect();
    let mut internal: BTreeSet<usize> = (0..net.vars).collect();
    for v in &boundary {
        internal.remove(v);
    }
    let mut factors = net.factors;

    while !internal.is_empty() {
        let v = *internal
            .iter()
            .min_by_key(|&&v| (union_size(&factors, v), v))
            .expect("nonempty");
        internal.remove(&v);
        let (bucket, rest): (Vec<Factor>, Vec<Factor>) =
            factors.into_iter().partition(|f| f.scope.contains(&v));
        factors = rest;
        if bucket.is_empty() {
            continue;
        }
        let mut scope: Vec<usize> = Vec::new();
        for f in &bucket {
            for &w in &f.scope {
                if w != v && !scope.contains(&w) {
                    scope.push(w);
                }
            }
        }
        scope.push(v);
        interp.check(scope.len())?;
        let joined = join(&bucket, &scope);
        let half = 1usize << (scope.len() - 1);
        let mut projected = Bits::zeros(half);
        projected.or_block(0, &joined, 0, half);
        projected.or_block(0, &joined, half, half);
        scope.pop();
        if projected.none() {
            return Ok(MonRel::bottom(m, n));
        }
        if projected.count_ones() < projected.len() {
            factors.push(Factor {
                scope,
                table: projected,
            });
        }
    }

    let joined = join(&factors, &boundary);
    let mut table = Bits::zeros(1 << (m + n));
    for u in joined.iter_ones() {
        let (x, y) = (u & ((1 << m) - 1), u >> m);
        table.set((x << n) | y);
    }
    Ok(MonRel::from_bits_unchecked(m, n, table))
}
