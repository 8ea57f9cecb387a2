//! Independent reference implementations used by the integration tests.
//!
//! Nothing here calls into the matrix builders: entries are computed by
//! brute force over every index tuple, straight from the definitions.
#![allow(dead_code)]

use std::collections::BTreeSet;

/// Every index tuple of length `len` over `1..=n`, first component most
/// significant (row-major flattening order).
pub fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=n).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Symplectic form on values `1..=n` with `2a-1 ↔ a`, `2a ↔ a'`:
/// `ε(a, a') = 1`, `ε(a', a) = -1`, zero otherwise.
pub fn eps(x: usize, y: usize) -> i64 {
    let (px, py) = (x.div_ceil(2), y.div_ceil(2));
    if px != py {
        0
    } else if x % 2 == 1 && y.is_multiple_of(2) {
        1
    } else if x.is_multiple_of(2) && y % 2 == 1 {
        -1
    } else {
        0
    }
}

/// Sign of `values` as a permutation of `1..=n` by counting inversions;
/// zero when it is not a permutation.
pub fn perm_sign(values: &[usize], n: usize) -> i64 {
    let distinct: BTreeSet<_> = values.iter().collect();
    if values.len() != n || distinct.len() != n || values.iter().any(|&v| v == 0 || v > n) {
        return 0;
    }
    let inversions = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| values[a] > values[b])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The labelled values `v[1..=l+k]`: outputs on the top row, inputs below.
fn labelled(i: &[usize], j: &[usize]) -> Vec<usize> {
    let mut v = vec![0];
    v.extend_from_slice(i);
    v.extend_from_slice(j);
    v
}

/// Dense `n^l x n^k` matrix of `Π_blocks δ`.
pub fn dense_e(blocks: &[(usize, usize)], n: usize, k: usize, l: usize) -> Vec<Vec<i64>> {
    tuples(n, l)
        .iter()
        .map(|i| {
            tuples(n, k)
                .iter()
                .map(|j| {
                    let v = labelled(i, j);
                    blocks.iter().all(|&(a, b)| v[a] == v[b]) as i64
                })
                .collect()
        })
        .collect()
}

/// Dense matrix of `Π δ` over cross-row blocks times `Π ε` over same-row
/// blocks, each ε read left to right along the row.
pub fn dense_f(blocks: &[(usize, usize)], n: usize, k: usize, l: usize) -> Vec<Vec<i64>> {
    tuples(n, l)
        .iter()
        .map(|i| {
            tuples(n, k)
                .iter()
                .map(|j| {
                    let v = labelled(i, j);
                    blocks
                        .iter()
                        .map(|&(a, b)| {
                            let (a, b) = (a.min(b), a.max(b));
                            let same_row = (a <= l) == (b <= l);
                            if same_row {
                                eps(v[a], v[b])
                            } else {
                                (v[a] == v[b]) as i64
                            }
                        })
                        .product()
                })
                .collect()
        })
        .collect()
}

/// Dense matrix of `sign(free values) · Π_blocks δ`, free vertices read top
/// row left to right, then bottom row left to right.
pub fn dense_h(free: &[usize], blocks: &[(usize, usize)], n: usize, k: usize, l: usize) -> Vec<Vec<i64>> {
    let mut order: Vec<usize> = free.to_vec();
    order.sort_unstable();
    tuples(n, l)
        .iter()
        .map(|i| {
            tuples(n, k)
                .iter()
                .map(|j| {
                    let v = labelled(i, j);
                    let vals: Vec<usize> = order.iter().map(|&a| v[a]).collect();
                    perm_sign(&vals, n) * blocks.iter().all(|&(a, b)| v[a] == v[b]) as i64
                })
                .collect()
        })
        .collect()
}

/// All perfect matchings of `1..=m` found by brute force over permutations,
/// canonicalised as sorted lists of sorted pairs.
pub fn matchings_by_permutations(vertices: &[usize]) -> BTreeSet<Vec<(usize, usize)>> {
    fn permute(items: &mut Vec<usize>, at: usize, out: &mut BTreeSet<Vec<(usize, usize)>>) {
        if at == items.len() {
            let mut blocks: Vec<(usize, usize)> = items.chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
            blocks.sort_unstable();
            out.insert(blocks);
            return;
        }
        for s in at..items.len() {
            items.swap(at, s);
            permute(items, at + 1, out);
            items.swap(at, s);
        }
    }
    let mut out = BTreeSet::new();
    if vertices.len().is_multiple_of(2) {
        permute(&mut vertices.to_vec(), 0, &mut out);
    }
    out
}

pub fn to_i64(m: &[Vec<i32>]) -> Vec<Vec<i64>> {
    m.iter().map(|r| r.iter().map(|&v| v as i64).collect()).collect()
}

/// Golden 4x4 matrices for O(2), k = l = 2: cup-cap, identity, swap.
pub const O2_GOLDEN: [[[i32; 4]; 4]; 3] = [
    [[1, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]],
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]],
];

/// Golden 2x8 matrices for Sp(2), k = 3, l = 1, in diagram order
/// (1,2)(3,4), (1,3)(2,4), (1,4)(2,3).
pub const SP2_GOLDEN: [[[i32; 8]; 2]; 3] = [
    [[0, 1, -1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1, -1, 0]],
    [[0, 1, 0, 0, -1, 0, 0, 0], [0, 0, 0, 1, 0, 0, -1, 0]],
    [[0, 0, 1, 0, -1, 0, 0, 0], [0, 0, 0, 1, 0, -1, 0, 0]],
];

/// Free vertices, the single block, and the expected 2x8 matrix.
pub type SoGolden = ([usize; 2], (usize, usize), [[i32; 8]; 2]);

/// Golden `H` matrices for SO(2), k = 3, l = 1, keyed by diagram.
pub const SO2_GOLDEN: [SoGolden; 6] = [
    ([3, 4], (1, 2), [[0, 1, -1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 0, 1, -1, 0]]),
    ([2, 4], (1, 3), [[0, 1, 0, 0, -1, 0, 0, 0], [0, 0, 0, 1, 0, 0, -1, 0]]),
    ([2, 3], (1, 4), [[0, 0, 1, 0, -1, 0, 0, 0], [0, 0, 0, 1, 0, -1, 0, 0]]),
    ([1, 4], (2, 3), [[0, 1, 0, 0, 0, 0, 0, 1], [-1, 0, 0, 0, 0, 0, -1, 0]]),
    ([1, 3], (2, 4), [[0, 0, 1, 0, 0, 0, 0, 1], [-1, 0, 0, 0, 0, -1, 0, 0]]),
    ([1, 2], (3, 4), [[0, 0, 0, 0, 1, 0, 0, 1], [-1, 0, 0, -1, 0, 0, 0, 0]]),
];

/// The general element of `End_{O(3)}((R^3)^{⊗3})`: entry `(I, J)` is the
/// sum of the weights whose indices are listed, an empty list means zero.
pub struct O3Table {
    pub rows: Vec<Vec<usize>>,
    pub entries: Vec<Vec<Vec<usize>>>,
}

pub fn load_o3_table() -> O3Table {
    let text = include_str!("../fixtures/o3_end_t3.txt");
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    for line in text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let (label, cells) = line.split_once('|').expect("row label");
        rows.push(label.trim().split(',').map(|v| v.parse().unwrap()).collect());
        entries.push(
            cells
                .split_whitespace()
                .map(|c| {
                    if c == "0" {
                        vec![]
                    } else {
                        c.split(',').map(|v| v.parse().unwrap()).collect()
                    }
                })
                .collect(),
        );
    }
    O3Table { rows, entries }
}
