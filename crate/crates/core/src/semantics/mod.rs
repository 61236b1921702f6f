//! Monotone relations between Boolean tuples and the interpretation of
//! diagrams into them.
//!
//! A relation `m -> n` is a dense truth table over all `2^(m+n)` pairs. A
//! tuple is encoded as an integer whose bit `i` is wire `i`; pair `(x, y)`
//! sits at index `x * 2^n + y`. Every stored relation is monotone: closed
//! under shrinking the input and growing the output.

mod laws;
mod network;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Bits;
use crate::diagram::{Diagram, Generator, Node};

pub use laws::{standard_laws, verify_laws, Law, LawOutcome, Mode};

/// Default bound on the exponent of any table or composition step.
pub const DEFAULT_MAX_WIDTH: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("width mismatch: expected {expected:?}, found {found:?}")]
    WidthMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("width cap exceeded: step needs 2^{requested} entries, limit is 2^{limit}")]
    WidthCapExceeded { limit: u32, requested: u32 },
    #[error("table has {found} bits, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("relation is not monotone")]
    NotMonotone,
    #[error("function is not monotone")]
    NotMonotoneFunction,
    #[error("invalid relation JSON: {0}")]
    Json(String),
}

/// A monotone relation `m -> n` over Boolean tuples.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonRel {
    m: usize,
    n: usize,
    table: Bits,
}

fn table_len(m: usize, n: usize) -> usize {
    1usize << (m + n)
}

impl MonRel {
    /// Validates length and monotonicity.
    pub fn from_bits(m: usize, n: usize, table: Bits) -> Result<MonRel, SemanticsError> {
        if !is_monotone(m, n, &table)? {
            return Err(SemanticsError::NotMonotone);
        }
        Ok(MonRel { m, n, table })
    }

    pub fn from_fn(
        m: usize,
        n: usize,
        mut f: impl FnMut(u64, u64) -> bool,
    ) -> Result<MonRel, SemanticsError> {
        let mut table = Bits::zeros(table_len(m, n));
        for x in 0..1u64 << m {
            for y in 0..1u64 << n {
                if f(x, y) {
                    table.set(((x << n) | y) as usize);
                }
            }
        }
        MonRel::from_bits(m, n, table)
    }

    /// Relation from explicit pairs; fails unless the set is already
    /// monotone.
    pub fn from_pairs(
        m: usize,
        n: usize,
        pairs: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<MonRel, SemanticsError> {
        let mut table = Bits::zeros(table_len(m, n));
        for (x, y) in pairs {
            if x >> m != 0 || y >> n != 0 {
                return Err(SemanticsError::LengthMismatch {
                    expected: table_len(m, n),
                    found: table_len(m, n) + 1,
                });
            }
            table.set(((x << n) | y) as usize);
        }
        MonRel::from_bits(m, n, table)
    }

    pub(crate) fn from_bits_unchecked(m: usize, n: usize, table: Bits) -> MonRel {
        debug_assert_eq!(table.len(), table_len(m, n));
        debug_assert!(
            table.len() > 1 << 16 || is_monotone(m, n, &table).unwrap(),
            "internal construction produced a non-monotone relation"
        );
        MonRel { m, n, table }
    }

    pub fn top(m: usize, n: usize) -> MonRel {
        MonRel {
            m,
            n,
            table: Bits::ones(table_len(m, n)),
        }
    }

    pub fn bottom(m: usize, n: usize) -> MonRel {
        MonRel {
            m,
            n,
            table: Bits::zeros(table_len(m, n)),
        }
    }

    /// The componentwise order `x <= y` on `n` wires.
    pub fn order(n: usize) -> MonRel {
        MonRel::from_fn(n, n, |x, y| x & !y == 0).expect("the order is monotone")
    }

    /// `{(x, y) | f(x) <= y}`.
    pub fn of_function(f: &MonFunc) -> MonRel {
        MonRel::from_fn(f.m, f.n, |x, y| f.apply(x) & !y == 0)
            .expect("monotone functions give monotone relations")
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &Bits {
        &self.table
    }

    pub fn contains(&self, x: u64, y: u64) -> bool {
        self.table.get(((x << self.n) | y) as usize)
    }

    pub fn is_empty(&self) -> bool {
        self.table.none()
    }

    pub fn len(&self) -> usize {
        self.table.count_ones()
    }

    pub fn is_subset(&self, other: &MonRel) -> bool {
        self.m == other.m && self.n == other.n && self.table.is_subset(&other.table)
    }

    pub fn intersection(&self, other: &MonRel) -> Result<MonRel, SemanticsError> {
        self.same_type(other)?;
        Ok(MonRel::from_bits_unchecked(self.m, self.n, self.table.and(&other.table)))
    }

    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let n = self.n;
        self.table
            .iter_ones()
            .map(move |i| ((i >> n) as u64, (i & ((1 << n) - 1)) as u64))
    }

    /// Outputs related to input `x`.
    pub fn image(&self, x: u64) -> impl Iterator<Item = u64> + '_ {
        let len = 1usize << self.n;
        self.table
            .iter_ones_in(x as usize * len, len)
            .map(|y| y as u64)
    }

    fn same_type(&self, other: &MonRel) -> Result<(), SemanticsError> {
        if (self.m, self.n) != (other.m, other.n) {
            return Err(SemanticsError::WidthMismatch {
                expected: (self.m, self.n),
                found: (other.m, other.n),
            });
        }
        Ok(())
    }

    /// `{"m":..,"n":..,"pairs":[["01","1"],..]}`, wire 0 leftmost.
    pub fn to_json(&self) -> String {
        let dump = RelJson {
            m: self.m,
            n: self.n,
            pairs: self
                .pairs()
                .map(|(x, y)| [tuple_string(x, self.m), tuple_string(y, self.n)])
                .collect(),
        };
        serde_json::to_string(&dump).expect("relation JSON is always serializable")
    }

    pub fn from_json(text: &str) -> Result<MonRel, SemanticsError> {
        let dump: RelJson =
            serde_json::from_str(text).map_err(|e| SemanticsError::Json(e.to_string()))?;
        let parse = |s: &str, w: usize| -> Result<u64, SemanticsError> {
            if s.len() != w {
                return Err(SemanticsError::Json(format!("tuple `{s}` should have {w} wires")));
            }
            s.chars().enumerate().try_fold(0u64, |acc, (i, c)| match c {
                '0' => Ok(acc),
                '1' => Ok(acc | 1 << i),
                _ => Err(SemanticsError::Json(format!("bad tuple `{s}`"))),
            })
        };
        let pairs = dump
            .pairs
            .iter()
            .map(|[x, y]| Ok((parse(x, dump.m)?, parse(y, dump.n)?)))
            .collect::<Result<Vec<_>, SemanticsError>>()?;
        MonRel::from_pairs(dump.m, dump.n, pairs)
    }
}

#[derive(Serialize, Deserialize)]
struct RelJson {
    m: usize,
    n: usize,
    pairs: Vec<[String; 2]>,
}

/// Renders a tuple as a 0/1 string, wire 0 first.
pub fn tuple_string(v: u64, width: usize) -> String {
    (0..width)
        .map(|i| if v >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl fmt::Debug for MonRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonRel({} -> {}) {{", self.m, self.n)?;
        for (k, (x, y)) in self.pairs().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, " ({},{})", tuple_string(x, self.m), tuple_string(y, self.n))?;
        }
        write!(f, " }}")
    }
}

/// A monotone function between Boolean tuples, as a value table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonFunc {
    m: usize,
    n: usize,
    values: Vec<u64>,
}

impl MonFunc {
    pub fn new(m: usize, n: usize, values: Vec<u64>) -> Result<MonFunc, SemanticsError> {
        if values.len() != 1 << m {
            return Err(SemanticsError::LengthMismatch {
                expected: 1 << m,
                found: values.len(),
            });
        }
        if values.iter().any(|v| v >> n != 0) {
            return Err(SemanticsError::WidthMismatch {
                expected: (m, n),
                found: (m, 64 - values.iter().map(|v| v.leading_zeros()).min().unwrap_or(64) as usize),
            });
        }
        for x in 0..1usize << m {
            for i in 0..m {
                if x >> i & 1 == 0 && values[x] & !values[x | 1 << i] != 0 {
                    return Err(SemanticsError::NotMonotoneFunction);
                }
            }
        }
        Ok(MonFunc { m, n, values })
    }

    pub fn from_fn(m: usize, n: usize, f: impl Fn(u64) -> u64) -> Result<MonFunc, SemanticsError> {
        MonFunc::new(m, n, (0..1u64 << m).map(f).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn apply(&self, x: u64) -> u64 {
        self.values[x as usize]
    }
}

/// Checks the monotonicity closure condition on a raw table.
///
/// It suffices to check single-wire steps: removing one input bit or adding
/// one output bit must stay inside the relation.
pub fn is_monotone(m: usize, n: usize, raw: &Bits) -> Result<bool, SemanticsError> {
    if raw.len() != table_len(m, n) {
        return Err(SemanticsError::LengthMismatch {
            expected: table_len(m, n),
            found: raw.len(),
        });
    }
    for idx in raw.iter_ones() {
        let (x, y) = (idx >> n, idx & ((1 << n) - 1));
        for i in 0..m {
            if x >> i & 1 == 1 && !raw.get(((x & !(1 << i)) << n) | y) {
                return Ok(false);
            }
        }
        for j in 0..n {
            if y >> j & 1 == 0 && !raw.get((x << n) | y | 1 << j) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The relation denoted by a generator.
pub fn rel_of_generator(g: Generator) -> MonRel {
    use Generator::*;
    let bit = |v: u64, i: u32| v >> i & 1;
    let (m, n) = g.arity();
    let holds = move |x: u64, y: u64| -> bool {
        match g {
            Copy => bit(x, 0) <= bit(y, 0) && bit(x, 0) <= bit(y, 1),
            Discard => true,
            Cocopy => bit(x, 0) <= bit(y, 0) && bit(x, 1) <= bit(y, 0),
            Codiscard => true,
            Conj => (bit(x, 0) & bit(x, 1)) <= bit(y, 0),
            Unit => y == 1,
            Coconj => bit(x, 0) <= (bit(y, 0) | bit(y, 1)),
            Counit => x == 0,
            Identity => x <= y,
            Swap => bit(x, 0) <= bit(y, 1) && bit(x, 1) <= bit(y, 0),
        }
    };
    MonRel::from_fn(m, n, holds).expect("generator relations are monotone")
}

/// `R ; S = {(x, z) | exists y. (x, y) in R, (y, z) in S}`.
pub fn rel_seq(r: &MonRel, s: &MonRel) -> Result<MonRel, SemanticsError> {
    if r.n != s.m {
        return Err(SemanticsError::WidthMismatch {
            expected: (r.n, r.n),
            found: (s.m, s.n),
        });
    }
    let (m, n) = (r.m, s.n);
    let row = 1usize << n;
    let mut out = Bits::zeros(table_len(m, n));
    for x in 0..1usize << m {
        for y in r.image(x as u64) {
            out.or_block(x * row, &s.table, y as usize * row, row);
        }
    }
    Ok(MonRel::from_bits_unchecked(m, n, out))
}

/// Product relation on concatenated tuples: `r` on the top wires, `s` below.
pub fn rel_par(r: &MonRel, s: &MonRel) -> MonRel {
    let (m, n) = (r.m + s.m, r.n + s.n);
    let (row, r_row) = (1usize << n, 1usize << r.n);
    let mut out = Bits::zeros(table_len(m, n));
    for x2 in 0..1usize << s.m {
        for y2 in s.image(x2 as u64) {
            for x1 in 0..1usize << r.m {
                let x = x1 | x2 << r.m;
                out.or_block(x * row + (y2 as usize) * r_row, &r.table, x1 * r_row, r_row);
            }
        }
    }
    MonRel::from_bits_unchecked(m, n, out)
}

/// `R` represents `f` when `(x, y) in R` exactly when `f(x) <= y`.
pub fn represents(r: &MonRel, f: &MonFunc) -> Result<bool, SemanticsError> {
    if (r.m, r.n) != (f.m, f.n) {
        return Err(SemanticsError::WidthMismatch {
            expected: (r.m, r.n),
            found: (f.m, f.n),
        });
    }
    Ok(*r == MonRel::of_function(f))
}

/// Evaluates diagrams into monotone relations under a width cap.
///
/// The cap bounds the number of variables in any intermediate table, so a
/// table never exceeds `2^max_width` bits.
#[derive(Clone)]
pub struct Interpreter {
    max_width: u32,
    overrides: Option<Arc<Vec<(Generator, MonRel)>>>,
}

impl Default for Interpreter {
    fn default() -> Self {
        Interpreter::new(DEFAULT_MAX_WIDTH)
    }
}

impl fmt::Debug for Interpreter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Interpreter")
            .field("max_width", &self.max_width)
            .field("overridden", &self.overrides.as_ref().map(|o| o.len()).unwrap_or(0))
            .finish()
    }
}

impl Interpreter {
    pub fn new(max_width: u32) -> Self {
        Interpreter {
            max_width: max_width.max(1),
            overrides: None,
        }
    }

    pub fn max_width(&self) -> u32 {
        self.max_width
    }

    /// Replaces the meaning of one generator. Only meant for negative
    /// controls of the law suite.
    pub fn with_override(mut self, g: Generator, rel: MonRel) -> Self {
        assert_eq!((rel.m, rel.n), g.arity(), "override must keep the generator's arity");
        let mut v: Vec<(Generator, MonRel)> =
            self.overrides.as_deref().cloned().unwrap_or_default();
        v.retain(|(h, _)| *h != g);
        v.push((g, rel));
        self.overrides = Some(Arc::new(v));
        self
    }

    pub fn generator(&self, g: Generator) -> MonRel {
        self.overrides
            .as_ref()
            .and_then(|o| o.iter().find(|(h, _)| *h == g).map(|(_, r)| r.clone()))
            .unwrap_or_else(|| rel_of_generator(g))
    }

    fn check(&self, requested: usize) -> Result<(), SemanticsError> {
        if requested > self.max_width as usize {
            return Err(SemanticsError::WidthCapExceeded {
                limit: self.max_width,
                requested: requested as u32,
            });
        }
        Ok(())
    }

    /// `[[d]]`.
    pub fn interpret(&self, d: &Diagram) -> Result<MonRel, SemanticsError> {
        network::evaluate(self, d)
    }

    /// `[[d]]` by the plain structural fold with [`rel_seq`] and [`rel_par`].
    /// Charged at `m + k + n` per composition.
    pub fn interpret_by_fold(&self, d: &Diagram) -> Result<MonRel, SemanticsError> {
        match d.node() {
            Node::Empty => Ok(MonRel::top(0, 0)),
            Node::Gen(g) => Ok(self.generator(*g)),
            Node::Par(a, b) => {
                self.check(d.dom() + d.cod())?;
                Ok(rel_par(&self.interpret_by_fold(a)?, &self.interpret_by_fold(b)?))
            }
            Node::Seq(a, b) => {
                self.check(a.dom() + a.cod() + b.cod())?;
                rel_seq(&self.interpret_by_fold(a)?, &self.interpret_by_fold(b)?)
            }
        }
    }
}

/// `[[d]]` under the default width cap.
pub fn interpret(d: &Diagram) -> Result<MonRel, SemanticsError> {
    Interpreter::default().interpret(d)
}

/// Compares `[[lhs]]` and `[[rhs]]` for equality or inclusion.
pub fn verify_equation(
    interp: &Interpreter,
    lhs: &Diagram,
    rhs: &Diagram,
    mode: Mode,
) -> Result<bool, SemanticsError> {
    if (lhs.dom(), lhs.cod()) != (rhs.dom(), rhs.cod()) {
        return Err(SemanticsError::WidthMismatch {
            expected: (lhs.dom(), lhs.cod()),
            found: (rhs.dom(), rhs.cod()),
        });
    }
    let (l, r) = (interp.interpret(lhs)?, interp.interpret(rhs)?);
    Ok(match mode {
        Mode::Eq => l == r,
        Mode::Leq => l.is_subset(&r),
    })
}
