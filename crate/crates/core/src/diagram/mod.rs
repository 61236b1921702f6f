//! String diagrams as binary composition trees.
//!
//! A [`Diagram`] is built from [`Generator`]s with sequential composition
//! (`;`, left to right) and the monoidal product (`*`, top to bottom). Wires
//! are numbered `0..k` from the top; every node caches its domain and
//! codomain widths.

mod build;
mod render;
mod sd;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use build::{
    bipartite, cap, coconj_n, cocopy_n, conj_n, copy_n, cup, spider, BoolMatrix, Fan, Gather,
};
pub use render::{emit_dot, emit_json, parse_json};
pub use sd::{emit_sd, parse_sd};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("cannot compose: left codomain is {0} wires, right domain is {1}")]
    ArityMismatch(usize, usize),
    #[error("not a bijection on 0..{0}")]
    NotABijection(usize),
    #[error("matrix has {rows}x{cols} shape but {len} entries")]
    BadMatrix { rows: usize, cols: usize, len: usize },
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid diagram JSON: {0}")]
    Json(String),
}

/// The primitive boxes of the calculus, plus the identity wire and the
/// symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Copy,
    Discard,
    Cocopy,
    Codiscard,
    Conj,
    Unit,
    Coconj,
    Counit,
    Identity,
    Swap,
}

impl Generator {
    pub const ALL: [Generator; 10] = [
        Generator::Copy,
        Generator::Discard,
        Generator::Cocopy,
        Generator::Codiscard,
        Generator::Conj,
        Generator::Unit,
        Generator::Coconj,
        Generator::Counit,
        Generator::Identity,
        Generator::Swap,
    ];

    /// `(dom, cod)`.
    pub fn arity(self) -> (usize, usize) {
        use Generator::*;
        match self {
            Copy => (1, 2),
            Discard => (1, 0),
            Cocopy => (2, 1),
            Codiscard => (0, 1),
            Conj => (2, 1),
            Unit => (0, 1),
            Coconj => (1, 2),
            Counit => (1, 0),
            Identity => (1, 1),
            Swap => (2, 2),
        }
    }

    pub fn name(self) -> &'static str {
        use Generator::*;
        match self {
            Copy => "copy",
            Discard => "discard",
            Cocopy => "cocopy",
            Codiscard => "codiscard",
            Conj => "conj",
            Unit => "unit",
            Coconj => "coconj",
            Counit => "counit",
            Identity => "id",
            Swap => "swap",
        }
    }

    pub fn from_name(name: &str) -> Option<Generator> {
        Generator::ALL.into_iter().find(|g| g.name() == name)
    }

    /// Black generators manage variables; white ones build clauses.
    pub fn is_black(self) -> bool {
        use Generator::*;
        matches!(self, Copy | Discard | Cocopy | Codiscard)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    /// The empty diagram `0 -> 0`, unit of the monoidal product.
    Empty,
    Gen(Generator),
    Seq(Diagram, Diagram),
    Par(Diagram, Diagram),
}

/// An immutable, cheaply clonable diagram term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    node: Arc<Node>,
    dom: usize,
    cod: usize,
}

impl Diagram {
    pub fn gen(g: Generator) -> Self {
        let (dom, cod) = g.arity();
        Diagram {
            node: Arc::new(Node::Gen(g)),
            dom,
            cod,
        }
    }

    pub fn empty() -> Self {
        Diagram {
            node: Arc::new(Node::Empty),
            dom: 0,
            cod: 0,
        }
    }

    /// `c ; d`: feeds the outputs of `c` into `d`.
    pub fn seq(c: &Diagram, d: &Diagram) -> Result<Diagram, DiagramError> {
        if c.cod != d.dom {
            return Err(DiagramError::ArityMismatch(c.cod, d.dom));
        }
        Ok(Diagram {
            node: Arc::new(Node::Seq(c.clone(), d.clone())),
            dom: c.dom,
            cod: d.cod,
        })
    }

    /// `c * d`: `c` stacked above `d`.
    pub fn par(c: &Diagram, d: &Diagram) -> Diagram {
        Diagram {
            node: Arc::new(Node::Par(c.clone(), d.clone())),
            dom: c.dom + d.dom,
            cod: c.cod + d.cod,
        }
    }

    /// `n` parallel identity wires, associated to the left.
    pub fn identity(n: usize) -> Diagram {
        match n {
            0 => Diagram::empty(),
            _ => {
                let id = Diagram::gen(Generator::Identity);
                (1..n).fold(id.clone(), |acc, _| Diagram::par(&acc, &id))
            }
        }
    }

    /// The wiring `x_i <= y_{p(i)}`: wire `i` is routed to position `p[i]`.
    ///
    /// Built from adjacent swaps by bubble sort, so the number of swaps is
    /// the number of inversions of `p`.
    pub fn permutation(p: &[usize]) -> Result<Diagram, DiagramError> {
        let n = p.len();
        let mut seen = vec![false; n];
        for &t in p {
            if t >= n || seen[t] {
                return Err(DiagramError::NotABijection(n));
            }
            seen[t] = true;
        }
        // cur[pos] = source wire currently at `pos`
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = Diagram::identity(n);
        let mut layers = 0usize;
        loop {
            let mut swapped = false;
            for pos in 0..n.saturating_sub(1) {
                if p[cur[pos]] > p[cur[pos + 1]] {
                    cur.swap(pos, pos + 1);
                    let layer = Diagram::tensor_all(&[
                        Diagram::identity(pos),
                        Diagram::gen(Generator::Swap),
                        Diagram::identity(n - pos - 2),
                    ]);
                    out = if layers == 0 {
                        layer
                    } else {
                        Diagram::seq(&out, &layer).expect("layers are n -> n")
                    };
                    layers += 1;
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        Ok(out)
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    /// Whether this term is built only from identity wires and empties.
    pub fn is_identity(&self) -> bool {
        match &*self.node {
            Node::Empty | Node::Gen(Generator::Identity) => true,
            Node::Gen(_) => false,
            Node::Par(a, b) | Node::Seq(a, b) => a.is_identity() && b.is_identity(),
        }
    }

    /// Number of generator occurrences, identities and swaps included.
    pub fn size(&self) -> usize {
        match &*self.node {
            Node::Empty => 0,
            Node::Gen(_) => 1,
            Node::Seq(a, b) | Node::Par(a, b) => a.size() + b.size(),
        }
    }

    /// Recomputes widths bottom-up and compares them with the cached ones.
    pub fn check_widths(&self) -> bool {
        fn go(d: &Diagram) -> Option<(usize, usize)> {
            let (dom, cod) = match d.node() {
                Node::Empty => (0, 0),
                Node::Gen(g) => g.arity(),
                Node::Seq(a, b) => {
                    let (ad, ac) = go(a)?;
                    let (bd, bc) = go(b)?;
                    if ac != bd {
                        return None;
                    }
                    (ad, bc)
                }
                Node::Par(a, b) => {
                    let (ad, ac) = go(a)?;
                    let (bd, bc) = go(b)?;
                    (ad + bd, ac + bc)
                }
            };
            (dom == d.dom && cod == d.cod).then_some((dom, cod))
        }
        go(self).is_some()
    }

    /// Sequential composition that skips operands which are bare identity
    /// wiring. Used by the derived constructions so that, e.g., a 1-ary
    /// spider is literally a wire.
    pub(crate) fn then(&self, next: &Diagram) -> Diagram {
        assert_eq!(self.cod, next.dom, "internal composition of mismatched widths");
        if next.is_identity() {
            self.clone()
        } else if self.is_identity() {
            next.clone()
        } else {
            Diagram::seq(self, next).expect("widths checked above")
        }
    }

    /// Left-associated tensor of `parts`, dropping empty diagrams.
    pub(crate) fn tensor_all(parts: &[Diagram]) -> Diagram {
        parts
            .iter()
            .filter(|d| !matches!(d.node(), Node::Empty))
            .fold(None::<Diagram>, |acc, d| match acc {
                None => Some(d.clone()),
                Some(a) => Some(Diagram::par(&a, d)),
            })
            .unwrap_or_else(Diagram::empty)
    }

    /// Left-associated sequence of `parts`, skipping identity stages.
    pub(crate) fn chain(first: Diagram, rest: &[Diagram]) -> Diagram {
        rest.iter().fold(first, |acc, d| acc.then(d))
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram({} -> {}: {})", self.dom, self.cod, emit_sd(self))
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&emit_sd(self))
    }
}
