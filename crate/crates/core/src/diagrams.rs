//! (k,l)-Brauer diagrams and (l+k)\n-diagrams.
//!
//! Vertices are labelled `1..=l` along the top row (left to right) and
//! `l+1..=l+k` along the bottom row (left to right). Top vertices carry the
//! output indices `i_1..i_l`, bottom vertices the input indices `j_1..j_k`.
//!
//! Text form:
//!
//! ```text
//! B <k> <l> : (a,b)(c,d)...
//! G <k> <l> <n> : free=[v1,v2,...];(a,b)(c,d)...
//! ```
//!
//! Pairs are written smaller label first and in ascending order of the first
//! label. A diagram with no pairs is written `B 0 0 :` or
//! `G 1 1 2 : free=[1,2];`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};

/// A perfect matching on the `l + k` vertices of a two-row diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BrauerDiagram {
    k: usize,
    l: usize,
    blocks: Vec<(usize, usize)>,
}

/// A matching on the `l + k` vertices that leaves exactly `n` vertices free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroodDiagram {
    k: usize,
    l: usize,
    n: usize,
    free_top: Vec<usize>,
    free_bottom: Vec<usize>,
    blocks: Vec<(usize, usize)>,
}

fn canonical_blocks(pairs: impl IntoIterator<Item = (usize, usize)>) -> Vec<(usize, usize)> {
    let mut blocks: Vec<_> = pairs
        .into_iter()
        .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
        .collect();
    blocks.sort_unstable();
    blocks
}

/// Checks that `blocks` and `free` partition `1..=total` with every block a true pair.
fn check_partition(total: usize, blocks: &[(usize, usize)], free: &[usize]) -> std::result::Result<(), String> {
    let mut seen = vec![false; total + 1];
    let mut mark = |v: usize| -> std::result::Result<(), String> {
        if v == 0 || v > total {
            return Err(format!("vertex {v} outside 1..={total}"));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(format!("vertex {v} used twice"));
        }
        Ok(())
    };
    for &(a, b) in blocks {
        if a == b {
            return Err(format!("block ({a},{b}) is not a pair"));
        }
        mark(a)?;
        mark(b)?;
    }
    for &v in free {
        mark(v)?;
    }
    if let Some(v) = (1..=total).find(|&v| !seen[v]) {
        return Err(format!("vertex {v} is not covered"));
    }
    Ok(())
}

impl BrauerDiagram {
    /// Builds a diagram from arbitrary pairs, putting it in canonical form.
    pub fn new(k: usize, l: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let blocks = canonical_blocks(pairs);
        check_partition(l + k, &blocks, &[]).map_err(|reason| Error::DiagramParse {
            input: format!("B {k} {l} : {}", format_blocks(&blocks)),
            reason,
        })?;
        Ok(Self { k, l, blocks })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    /// Number of vertices, `l + k`.
    pub fn order(&self) -> usize {
        self.l + self.k
    }

    pub fn is_top(&self, vertex: usize) -> bool {
        vertex <= self.l
    }

    /// The same pairing read with the top and bottom rows exchanged.
    pub fn flipped(&self) -> Self {
        let l = self.l;
        let k = self.k;
        let relabel = |v: usize| if v <= l { v + k } else { v - l };
        Self {
            k: l,
            l: k,
            blocks: canonical_blocks(self.blocks.iter().map(|&(a, b)| (relabel(a), relabel(b)))),
        }
    }
}

impl GroodDiagram {
    /// Builds a diagram from its free vertices and pairs, putting it in canonical form.
    pub fn new(
        k: usize,
        l: usize,
        free: impl IntoIterator<Item = usize>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut free: Vec<usize> = free.into_iter().collect();
        free.sort_unstable();
        let blocks = canonical_blocks(pairs);
        let n = free.len();
        let err = |reason: String| Error::DiagramParse {
            input: format!(
                "G {k} {l} {n} : free=[{}];{}",
                free.iter().join(","),
                format_blocks(&blocks)
            ),
            reason,
        };
        if n == 0 {
            return Err(err("a diagram needs at least one free vertex".into()));
        }
        check_partition(l + k, &blocks, &free).map_err(err)?;
        let (free_top, free_bottom) = free.iter().partition(|&&v| v <= l);
        Ok(Self {
            k,
            l,
            n,
            free_top,
            free_bottom,
            blocks,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Number of free vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn free_top(&self) -> &[usize] {
        &self.free_top
    }

    pub fn free_bottom(&self) -> &[usize] {
        &self.free_bottom
    }

    /// Free vertices in the order used for the sign factor: top row left to
    /// right, then bottom row left to right.
    pub fn free_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.free_top.iter().chain(&self.free_bottom).copied()
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn order(&self) -> usize {
        self.l + self.k
    }
}

fn format_blocks(blocks: &[(usize, usize)]) -> String {
    blocks.iter().map(|(a, b)| format!("({a},{b})")).collect()
}

impl fmt::Display for BrauerDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B {} {} :", self.k, self.l)?;
        if !self.blocks.is_empty() {
            write!(f, " {}", format_blocks(&self.blocks))?;
        }
        Ok(())
    }
}

impl fmt::Display for GroodDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "G {} {} {} : free=[{}];{}",
            self.k,
            self.l,
            self.n,
            self.free_vertices().join(","),
            format_blocks(&self.blocks)
        )
    }
}

fn parse_err(input: &str, reason: impl Into<String>) -> Error {
    Error::DiagramParse {
        input: input.to_string(),
        reason: reason.into(),
    }
}

fn parse_usize(input: &str, token: &str) -> Result<usize> {
    token
        .trim()
        .parse()
        .map_err(|_| parse_err(input, format!("`{}` is not a non-negative integer", token.trim())))
}

fn parse_pairs(input: &str, mut s: &str) -> Result<Vec<(usize, usize)>> {
    let mut pairs = Vec::new();
    loop {
        s = s.trim_start();
        if s.is_empty() {
            return Ok(pairs);
        }
        let rest = s.strip_prefix('(').ok_or_else(|| parse_err(input, "expected `(`"))?;
        let close = rest.find(')').ok_or_else(|| parse_err(input, "unclosed `(`"))?;
        let (a, b) = rest[..close]
            .split_once(',')
            .ok_or_else(|| parse_err(input, "pair needs two labels"))?;
        pairs.push((parse_usize(input, a)?, parse_usize(input, b)?));
        s = &rest[close + 1..];
    }
}

fn parse_header<'a>(input: &'a str, tag: &str, count: usize) -> Result<(Vec<usize>, &'a str)> {
    let (head, body) = input.split_once(':').ok_or_else(|| parse_err(input, "missing `:`"))?;
    let mut tokens = head.split_whitespace();
    if tokens.next() != Some(tag) {
        return Err(parse_err(input, format!("expected leading `{tag}`")));
    }
    let nums = tokens.map(|t| parse_usize(input, t)).collect::<Result<Vec<_>>>()?;
    if nums.len() != count {
        return Err(parse_err(input, format!("expected {count} integers before `:`")));
    }
    Ok((nums, body))
}

impl FromStr for BrauerDiagram {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let (nums, body) = parse_header(input, "B", 2)?;
        let pairs = parse_pairs(input, body)?;
        Self::new(nums[0], nums[1], pairs).map_err(|e| match e {
            Error::DiagramParse { reason, .. } => parse_err(input, reason),
            other => other,
        })
    }
}

impl FromStr for GroodDiagram {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let (nums, body) = parse_header(input, "G", 3)?;
        let body = body
            .trim_start()
            .strip_prefix("free=[")
            .ok_or_else(|| parse_err(input, "expected `free=[`"))?;
        let (free, rest) = body.split_once(']').ok_or_else(|| parse_err(input, "unclosed `[`"))?;
        let rest = rest
            .trim_start()
            .strip_prefix(';')
            .ok_or_else(|| parse_err(input, "expected `;` after free list"))?;
        let free = free
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| parse_usize(input, t))
            .collect::<Result<Vec<_>>>()?;
        if free.len() != nums[2] {
            return Err(parse_err(
                input,
                format!(
                    "header says n = {} but {} free vertices are listed",
                    nums[2],
                    free.len()
                ),
            ));
        }
        let pairs = parse_pairs(input, rest)?;
        Self::new(nums[0], nums[1], free, pairs).map_err(|e| match e {
            Error::DiagramParse { reason, .. } => parse_err(input, reason),
            other => other,
        })
    }
}

/// All perfect matchings of `vertices` (ascending), in lexicographic order of
/// their canonical block lists. The smallest unpaired vertex is always paired
/// first, so no sorting pass is needed.
fn perfect_matchings(vertices: &[usize]) -> Vec<Vec<(usize, usize)>> {
    fn recurse(remaining: &mut Vec<usize>, current: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if remaining.is_empty() {
            out.push(current.clone());
            return;
        }
        let first = remaining.remove(0);
        for idx in 0..remaining.len() {
            let partner = remaining.remove(idx);
            current.push((first, partner));
            recurse(remaining, current, out);
            current.pop();
            remaining.insert(idx, partner);
        }
        remaining.insert(0, first);
    }

    let mut out = Vec::new();
    if vertices.len().is_multiple_of(2) {
        recurse(&mut vertices.to_vec(), &mut Vec::new(), &mut out);
    }
    out
}

/// All (k,l)-Brauer diagrams in canonical order. Empty when `l + k` is odd.
pub fn enumerate_brauer(k: usize, l: usize) -> Vec<BrauerDiagram> {
    let vertices: Vec<usize> = (1..=l + k).collect();
    perfect_matchings(&vertices)
        .into_iter()
        .map(|blocks| BrauerDiagram { k, l, blocks })
        .collect()
}

/// All (l+k)\n-diagrams, ordered by free-vertex set and then by block list.
/// Empty when `n > l + k`, when the parities of `n` and `l + k` differ, or
/// when `n == 0`.
pub fn enumerate_grood(k: usize, l: usize, n: usize) -> Vec<GroodDiagram> {
    let total = l + k;
    if n == 0 || n > total || !(total - n).is_multiple_of(2) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for free in (1..=total).combinations(n) {
        let rest: Vec<usize> = (1..=total).filter(|v| !free.contains(v)).collect();
        let (free_top, free_bottom): (Vec<usize>, Vec<usize>) = free.iter().partition(|&&v| v <= l);
        for blocks in perfect_matchings(&rest) {
            out.push(GroodDiagram {
                k,
                l,
                n,
                free_top: free_top.clone(),
                free_bottom: free_bottom.clone(),
                blocks,
            });
        }
    }
    out
}

/// `m!!` for `m >= -1`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(m: i64) -> u64 {
    let mut acc = 1u64;
    let mut x = m;
    while x > 1 {
        acc *= x as u64;
        x -= 2;
    }
    acc
}

pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Number of (k,l)-Brauer diagrams: `(l+k-1)!!` when `l + k` is even, else 0.
pub fn count_brauer(k: usize, l: usize) -> u64 {
    let total = l + k;
    if total % 2 == 1 {
        0
    } else {
        double_factorial(total as i64 - 1)
    }
}

/// Number of (l+k)\n-diagrams: `C(l+k, n) * (l+k-n-1)!!` when they exist, else 0.
pub fn count_grood(k: usize, l: usize, n: usize) -> u64 {
    let total = l + k;
    if n == 0 || n > total || !(total - n).is_multiple_of(2) {
        0
    } else {
        binomial(total, n) * double_factorial((total - n) as i64 - 1)
    }
}
