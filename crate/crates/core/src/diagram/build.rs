//! Derived constructions: n-ary (co)monoid trees, spiders, cups and caps,
//! and matrix diagrams.

use serde::{Deserialize, Serialize};

use super::{Diagram, DiagramError, Generator};

/// A Boolean matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoolMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<bool>,
}

impl BoolMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<bool>) -> Result<Self, DiagramError> {
        if entries.len() != rows * cols {
            return Err(DiagramError::BadMatrix {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(BoolMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BoolMatrix {
            rows,
            cols,
            entries: vec![false; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BoolMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from 0/1 rows. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: &[&[u8]]) -> Result<Self, DiagramError> {
        let entries: Vec<bool> = rows.iter().flat_map(|r| r.iter().map(|&v| v != 0)).collect();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(DiagramError::BadMatrix {
                rows: rows.len(),
                cols,
                len: entries.len(),
            });
        }
        BoolMatrix::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.entries[r * self.cols + c] = v;
    }

    /// Column indices of the ones in row `r`, ascending.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> BoolMatrix {
        let mut t = BoolMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Renders rows as 0/1 strings.
    pub fn to_strings(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| if self.get(r, c) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    /// The black matrix diagram `cols -> rows`:
    /// `(x, y)` is related iff `AND_{i : A[j][i]} x_i <= y_j` for every row `j`.
    pub fn black_diagram(&self) -> Diagram {
        let rows: Vec<Vec<usize>> = (0..self.rows).map(|r| self.row_support(r)).collect();
        bipartite(Fan::Copy, Gather::Conj, self.cols, &rows)
    }

    /// The white matrix diagram `rows -> cols`:
    /// `(u, y)` is related iff `u_j <= OR_{i : A[j][i]} y_i` for every row `j`.
    pub fn white_diagram(&self) -> Diagram {
        let t = self.transpose();
        let targets: Vec<Vec<usize>> = (0..t.rows).map(|r| t.row_support(r)).collect();
        bipartite(Fan::Coconj, Gather::Cocopy, self.rows, &targets)
    }
}

fn binary_tree(leaf: Generator, nullary: Generator, k: usize, monoid: bool) -> Diagram {
    let id = Diagram::gen(Generator::Identity);
    match k {
        0 => Diagram::gen(nullary),
        1 => id,
        _ => {
            let g = Diagram::gen(leaf);
            (2..k).fold(g.clone(), |acc, _| {
                if monoid {
                    Diagram::par(&acc, &id).then(&g)
                } else {
                    g.then(&Diagram::par(&acc, &id))
                }
            })
        }
    }
}

/// `k -> 1` conjunction tree; `unit` when `k = 0`.
pub fn conj_n(k: usize) -> Diagram {
    binary_tree(Generator::Conj, Generator::Unit, k, true)
}

/// `k -> 1` join tree; `codiscard` when `k = 0`.
pub fn cocopy_n(k: usize) -> Diagram {
    binary_tree(Generator::Cocopy, Generator::Codiscard, k, true)
}

/// `1 -> k` copy tree; `discard` when `k = 0`.
pub fn copy_n(k: usize) -> Diagram {
    binary_tree(Generator::Copy, Generator::Discard, k, false)
}

/// `1 -> k` disjunction tree; `counit` when `k = 0`.
pub fn coconj_n(k: usize) -> Diagram {
    binary_tree(Generator::Coconj, Generator::Counit, k, false)
}

/// The white spider `m -> n`, denoting `AND x <= OR y`.
pub fn spider(m: usize, n: usize) -> Diagram {
    conj_n(m).then(&coconj_n(n))
}

/// `unit ; coconj`.
pub fn cup() -> Diagram {
    Diagram::gen(Generator::Unit).then(&Diagram::gen(Generator::Coconj))
}

/// `conj ; counit`.
pub fn cap() -> Diagram {
    Diagram::gen(Generator::Conj).then(&Diagram::gen(Generator::Counit))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fan {
    Copy,
    Coconj,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gather {
    Conj,
    Cocopy,
}

/// A three-layer diagram `inputs -> targets.len()`: each input fans out
/// once per target that uses it, a permutation routes the copies, and each
/// target gathers its sources.
///
/// `targets[j]` lists the sources of target `j`. Copies of an input are
/// ordered by target index, and each target receives its sources in
/// ascending order.
pub fn bipartite(fan: Fan, gather: Gather, inputs: usize, targets: &[Vec<usize>]) -> Diagram {
    let mut sources: Vec<Vec<usize>> = vec![Vec::new(); inputs];
    let mut sorted_targets: Vec<Vec<usize>> = Vec::with_capacity(targets.len());
    for (j, t) in targets.iter().enumerate() {
        let mut t = t.clone();
        t.sort_unstable();
        t.dedup();
        for &i in &t {
            sources[i].push(j);
        }
        sorted_targets.push(t);
    }

    let fan_layer = Diagram::tensor_all(
        &sources
            .iter()
            .map(|s| match fan {
                Fan::Copy => copy_n(s.len()),
                Fan::Coconj => coconj_n(s.len()),
            })
            .collect::<Vec<_>>(),
    );
    let gather_layer = Diagram::tensor_all(
        &sorted_targets
            .iter()
            .map(|t| match gather {
                Gather::Conj => conj_n(t.len()),
                Gather::Cocopy => cocopy_n(t.len()),
            })
            .collect::<Vec<_>>(),
    );

    let mut target_offset = Vec::with_capacity(sorted_targets.len());
    let mut acc = 0;
    for t in &sorted_targets {
        target_offset.push(acc);
        acc += t.len();
    }
    let mut perm = Vec::with_capacity(acc);
    for (i, s) in sources.iter().enumerate() {
        for &j in s {
            let rank = sorted_targets[j].binary_search(&i).expect("edge present");
            perm.push(target_offset[j] + rank);
        }
    }
    let routing = Diagram::permutation(&perm).expect("edge routing is a bijection");
    Diagram::chain(fan_layer, &[routing, gather_layer])
}
