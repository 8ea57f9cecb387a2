//! Sparse matrices `E_β`, `F_β` and `H_α` attached to diagrams.
//!
//! Row index `I = (i_1..i_l)` and column index `J = (j_1..j_k)` are flattened
//! lexicographically with the first component most significant. For `F_β`
//! the components are symplectic basis labels `1, 1', .., m, m'`, stored by
//! their ordinal `1..n` (`a -> 2a-1`, `a' -> 2a`).

use std::fmt;

use itertools::Itertools;

use crate::diagrams::{BrauerDiagram, GroodDiagram};
use crate::error::{Error, Result};
use crate::sparse::{Entry, SparseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum MatrixKind {
    E,
    F,
    H,
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixKind::E => "E",
            MatrixKind::F => "F",
            MatrixKind::H => "H",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Diagram {
    Brauer(BrauerDiagram),
    Grood(GroodDiagram),
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagram::Brauer(d) => d.fmt(f),
            Diagram::Grood(d) => d.fmt(f),
        }
    }
}

/// A spanning matrix together with the diagram it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseEquivariantMatrix {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub kind: MatrixKind,
    pub source: Diagram,
    pub matrix: SparseMatrix,
}

/// A symplectic basis label: `pair` is `a` in `a` or `a'`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymplecticIndex {
    pub pair: usize,
    pub primed: bool,
}

impl SymplecticIndex {
    pub fn new(pair: usize, primed: bool) -> Self {
        assert!(pair >= 1, "symplectic labels start at 1");
        Self { pair, primed }
    }

    /// Position in the ordered basis `e_1, e_1', .., e_m, e_m'` (1-based).
    pub fn ordinal(self) -> usize {
        if self.primed {
            2 * self.pair
        } else {
            2 * self.pair - 1
        }
    }

    pub fn from_ordinal(ordinal: usize) -> Self {
        assert!(ordinal >= 1, "ordinals are 1-based");
        Self {
            pair: ordinal.div_ceil(2),
            primed: ordinal.is_multiple_of(2),
        }
    }
}

impl fmt::Display for SymplecticIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.pair, if self.primed { "'" } else { "" })
    }
}

/// Coefficient of the skew form: `ε(a, b') = -ε(a', b) = δ(a, b)`, zero otherwise.
pub fn epsilon(i: SymplecticIndex, j: SymplecticIndex) -> i32 {
    if i.pair != j.pair || i.primed == j.primed {
        0
    } else if i.primed {
        -1
    } else {
        1
    }
}

/// Sign of the permutation `(1..n) -> values`, or 0 if the values repeat.
/// Values are 1-based and must lie in `1..=values.len()` to be a permutation.
pub fn chi(values: &[usize]) -> i32 {
    let n = values.len();
    let mut seen = vec![false; n];
    for &v in values {
        if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
            return 0;
        }
    }
    // parity = n - number of cycles
    let mut visited = vec![false; n];
    let mut cycles = 0;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            i = values[i] - 1;
        }
    }
    if (n - cycles).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// 1-based lexicographic flattening of a tuple of 1-based components.
pub fn flatten_index(tuple: &[usize], n: usize) -> Result<usize> {
    let mut flat = 0usize;
    for &value in tuple {
        if value == 0 || value > n {
            return Err(Error::IndexOutOfRange { value, n });
        }
        flat = flat * n + (value - 1);
    }
    Ok(flat + 1)
}

/// Inverse of [`flatten_index`] for a tuple of length `len`.
pub fn unflatten_index(flat: usize, n: usize, len: usize) -> Vec<usize> {
    let mut rest = flat - 1;
    let mut tuple = vec![0; len];
    for slot in tuple.iter_mut().rev() {
        *slot = rest % n + 1;
        rest /= n;
    }
    tuple
}

/// Maps per-vertex values (0-based, vertex `v` at position `v - 1`) to a 0-based (row, col).
fn position(values: &[usize], l: usize, n: usize) -> (usize, usize) {
    let row = values[..l].iter().fold(0, |acc, &v| acc * n + v);
    let col = values[l..].iter().fold(0, |acc, &v| acc * n + v);
    (row, col)
}

/// Calls `f` on every tuple in `[0, n)^slots`, last slot fastest.
fn for_each_tuple(n: usize, slots: usize, mut f: impl FnMut(&[usize])) {
    let mut tuple = vec![0; slots];
    loop {
        f(&tuple);
        let mut pos = slots;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

fn shape(n: usize, k: usize, l: usize) -> (usize, usize) {
    (n.pow(l as u32), n.pow(k as u32))
}

/// `E_β`: entry 1 exactly where the indices on each block agree.
pub fn build_e(d: &BrauerDiagram, n: usize) -> Result<SparseEquivariantMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let (k, l) = (d.k(), d.l());
    let (nrows, ncols) = shape(n, k, l);
    let mut values = vec![0; l + k];
    let mut entries = Vec::with_capacity(n.pow(d.blocks().len() as u32));
    for_each_tuple(n, d.blocks().len(), |choice| {
        for (&(p, q), &c) in d.blocks().iter().zip(choice) {
            values[p - 1] = c;
            values[q - 1] = c;
        }
        let (row, col) = position(&values, l, n);
        entries.push(Entry { row, col, value: 1 });
    });
    Ok(SparseEquivariantMatrix {
        n,
        k,
        l,
        kind: MatrixKind::E,
        source: Diagram::Brauer(d.clone()),
        matrix: SparseMatrix::from_triplets(nrows, ncols, entries)?,
    })
}

/// `F_β` in the symplectic basis: δ on blocks joining the two rows, ε on
/// blocks within a row, read with the smaller vertex label first.
pub fn build_f(d: &BrauerDiagram, n: usize) -> Result<SparseEquivariantMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if n % 2 == 1 {
        return Err(Error::OddSymplecticDimension(n));
    }
    let (k, l) = (d.k(), d.l());
    let (nrows, ncols) = shape(n, k, l);
    let same_row: Vec<bool> = d.blocks().iter().map(|&(p, q)| d.is_top(p) == d.is_top(q)).collect();
    let mut values = vec![0; l + k];
    let mut entries = Vec::with_capacity(n.pow(d.blocks().len() as u32));
    for_each_tuple(n, d.blocks().len(), |choice| {
        let mut sign = 1;
        for ((&(p, q), &c), &within) in d.blocks().iter().zip(choice).zip(&same_row) {
            values[p - 1] = c;
            values[q - 1] = if within {
                // the only nonzero ε(c, ·) is at c's partner in its (a, a') pair
                let first = SymplecticIndex::from_ordinal(c + 1);
                let partner = SymplecticIndex::new(first.pair, !first.primed);
                sign *= epsilon(first, partner);
                partner.ordinal() - 1
            } else {
                c
            };
        }
        let (row, col) = position(&values, l, n);
        entries.push(Entry { row, col, value: sign });
    });
    Ok(SparseEquivariantMatrix {
        n,
        k,
        l,
        kind: MatrixKind::F,
        source: Diagram::Brauer(d.clone()),
        matrix: SparseMatrix::from_triplets(nrows, ncols, entries)?,
    })
}

/// `H_α`: the sign of the free-vertex values (top row then bottom row, left
/// to right, as a permutation of `[n]`) times the δ product over blocks.
pub fn build_h(d: &GroodDiagram, n: usize) -> Result<SparseEquivariantMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if d.n() != n {
        return Err(Error::FreeVertexMismatch {
            expected: n,
            got: d.n(),
        });
    }
    let (k, l) = (d.k(), d.l());
    let (nrows, ncols) = shape(n, k, l);
    let free: Vec<usize> = d.free_vertices().collect();
    let mut values = vec![0; l + k];
    let mut entries = Vec::new();
    let mut labels = vec![0; n];
    for perm in (0..n).permutations(n) {
        for (slot, &v) in labels.iter_mut().zip(&perm) {
            *slot = v + 1;
        }
        let sign = chi(&labels);
        for (&vertex, &v) in free.iter().zip(&perm) {
            values[vertex - 1] = v;
        }
        for_each_tuple(n, d.blocks().len(), |choice| {
            for (&(p, q), &c) in d.blocks().iter().zip(choice) {
                values[p - 1] = c;
                values[q - 1] = c;
            }
            let (row, col) = position(&values, l, n);
            entries.push(Entry { row, col, value: sign });
        });
    }
    Ok(SparseEquivariantMatrix {
        n,
        k,
        l,
        kind: MatrixKind::H,
        source: Diagram::Grood(d.clone()),
        matrix: SparseMatrix::from_triplets(nrows, ncols, entries)?,
    })
}
