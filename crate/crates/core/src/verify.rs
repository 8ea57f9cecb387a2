//! Numerical checks: equivariance residuals, span ranks, and an independent
//! dimension oracle built from the infinitesimal equivariance equations.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::{apply_modes, component_reps, lie_basis, sample_with, GroupKind};
use crate::layers::{spanning_set, Factor, SpanningSet};
use crate::sparse::LinearOperator;

/// Relative residual tolerance for O(n) and SO(n).
pub const ORTHOGONAL_RESIDUAL_TOL: f64 = 1e-9;
/// Relative residual tolerance for Sp(n); sampled elements are less well conditioned.
pub const SYMPLECTIC_RESIDUAL_TOL: f64 = 1e-7;
pub const PROBES_PER_TRIAL: usize = 8;
pub const DEFAULT_TRIALS: usize = 20;
pub const DEFAULT_SEED: u64 = 0x5EED;
/// Largest `n^{l+k}` the oracle accepts by default.
pub const DEFAULT_ORACLE_LIMIT: usize = 4096;

pub fn default_tolerance(group: GroupKind) -> f64 {
    match group {
        GroupKind::O | GroupKind::SO => ORTHOGONAL_RESIDUAL_TOL,
        GroupKind::Sp => SYMPLECTIC_RESIDUAL_TOL,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl VerificationReport {
    fn new(subject: String, trials: usize, max_residual: f64, tolerance: f64) -> Self {
        Self {
            subject,
            trials,
            max_residual,
            tolerance,
            passed: max_residual <= tolerance,
        }
    }
}

/// How a product of groups acts on the input and output spaces of a matrix:
/// factor `i` acts on `k_i` (input) or `l_i` (output) tensor modes, factors
/// in order, followed by an untouched feature mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionLayout {
    pub factors: Vec<Factor>,
    pub d_k: usize,
    pub d_l: usize,
}

impl ActionLayout {
    pub fn single(group: GroupKind, n: usize, k: usize, l: usize) -> Result<Self> {
        Ok(Self {
            factors: vec![Factor::new(group, n, k, l)?],
            d_k: 1,
            d_l: 1,
        })
    }

    pub fn of(set: &SpanningSet) -> Self {
        Self {
            factors: set.factors.clone(),
            d_k: set.d_k,
            d_l: set.d_l,
        }
    }

    pub fn rows(&self) -> usize {
        self.factors.iter().map(Factor::rows).product::<usize>() * self.d_l
    }

    pub fn cols(&self) -> usize {
        self.factors.iter().map(Factor::cols).product::<usize>() * self.d_k
    }

    /// Loosest default tolerance among the factors.
    pub fn default_tolerance(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| default_tolerance(f.group))
            .fold(0.0, f64::max)
    }

    fn modes<'a>(&self, elements: &'a [DMatrix<f64>], output: bool) -> Vec<(usize, Option<&'a DMatrix<f64>>)> {
        let mut modes = Vec::new();
        for (f, g) in self.factors.iter().zip(elements) {
            let count = if output { f.l } else { f.k };
            modes.extend(std::iter::repeat_n((f.n, Some(g)), count));
        }
        modes.push((if output { self.d_l } else { self.d_k }, None));
        modes
    }

    /// `ρ_in(g) x`, one group element per factor.
    pub fn act_input(&self, elements: &[DMatrix<f64>], x: &[f64]) -> Result<Vec<f64>> {
        apply_modes(&self.modes(elements, false), x)
    }

    /// `ρ_out(g) y`, one group element per factor.
    pub fn act_output(&self, elements: &[DMatrix<f64>], y: &[f64]) -> Result<Vec<f64>> {
        apply_modes(&self.modes(elements, true), y)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<DMatrix<f64>>> {
        self.factors
            .iter()
            .map(|f| sample_with(f.group, f.n, rng).map(|g| g.matrix().clone()))
            .collect()
    }
}

fn check_shape(c: &impl LinearOperator, layout: &ActionLayout) -> Result<()> {
    if (c.nrows(), c.ncols()) != (layout.rows(), layout.cols()) {
        return Err(Error::ShapeMismatch {
            expected_rows: layout.rows(),
            expected_cols: layout.cols(),
            rows: c.nrows(),
            cols: c.ncols(),
        });
    }
    Ok(())
}

fn probe_vectors<R: Rng + ?Sized>(len: usize, count: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..len).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}

/// `max_p ‖ρ_out(g) C p − C ρ_in(g) p‖_∞ / (‖C‖_∞ ‖p‖_∞)` over the given
/// probes; zero for the zero matrix.
pub fn residual(
    c: &impl LinearOperator,
    layout: &ActionLayout,
    elements: &[DMatrix<f64>],
    probes: &[Vec<f64>],
) -> Result<f64> {
    check_shape(c, layout)?;
    let scale = c.norm_inf();
    if scale == 0.0 {
        return Ok(0.0);
    }
    let mut worst: f64 = 0.0;
    for p in probes {
        let lhs = layout.act_output(elements, &c.apply(p))?;
        let rhs = c.apply(&layout.act_input(elements, p)?);
        let diff = lhs.iter().zip(&rhs).fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        let p_norm = p.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if p_norm > 0.0 {
            worst = worst.max(diff / (scale * p_norm));
        }
    }
    Ok(worst)
}

/// Tests `ρ_l(g) C = C ρ_k(g)` on `trials` sampled elements of one group.
#[allow(clippy::too_many_arguments)]
pub fn check_equivariance(
    c: &impl LinearOperator,
    group: GroupKind,
    n: usize,
    k: usize,
    l: usize,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let layout = ActionLayout::single(group, n, k, l)?;
    check_layout_equivariance(c, &layout, trials, tol, seed, format!("{group}({n}) k={k} l={l}"))
}

/// [`check_equivariance`] for a product group acting through `layout`.
pub fn check_layout_equivariance(
    c: &impl LinearOperator,
    layout: &ActionLayout,
    trials: usize,
    tol: f64,
    seed: u64,
    subject: String,
) -> Result<VerificationReport> {
    check_shape(c, layout)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let elements = layout.sample(&mut rng)?;
        let probes = probe_vectors(layout.cols(), PROBES_PER_TRIAL, &mut rng);
        worst = worst.max(residual(c, layout, &elements, &probes)?);
    }
    Ok(VerificationReport::new(subject, trials, worst, tol))
}

/// Checks every element of a set against the same sampled group elements and
/// probes. `tol` defaults to the loosest tolerance of the set's groups.
pub fn check_set(set: &SpanningSet, trials: usize, tol: Option<f64>, seed: u64) -> Result<Vec<VerificationReport>> {
    let layout = ActionLayout::of(set);
    let tol = tol.unwrap_or_else(|| layout.default_tolerance());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = vec![0.0f64; set.len()];
    for _ in 0..trials {
        let elements = layout.sample(&mut rng)?;
        let probes = probe_vectors(layout.cols(), PROBES_PER_TRIAL, &mut rng);
        let moved: Vec<Vec<f64>> = probes
            .iter()
            .map(|p| layout.act_input(&elements, p))
            .collect::<Result<_>>()?;
        for (slot, m) in worst.iter_mut().zip(set.matrices()) {
            let scale = m.norm_inf();
            if scale == 0.0 {
                continue;
            }
            for (p, gp) in probes.iter().zip(&moved) {
                let lhs = layout.act_output(&elements, &m.apply(p))?;
                let rhs = m.apply(gp);
                let diff = lhs.iter().zip(&rhs).fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
                let p_norm = p.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
                *slot = slot.max(diff / (scale * p_norm));
            }
        }
    }
    Ok(set
        .elements
        .iter()
        .zip(worst)
        .map(|(e, w)| VerificationReport::new(e.diagram_label(), trials, w, tol))
        .collect())
}

/// Singular-value threshold for numerical rank.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum RankTolerance {
    /// `max(rows, cols) · ε_machine · σ_max`.
    #[default]
    Standard,
    /// `factor · σ_max`.
    Relative(f64),
}

impl RankTolerance {
    fn threshold(self, max_dim: usize, sigma_max: f64) -> f64 {
        match self {
            RankTolerance::Standard => max_dim as f64 * f64::EPSILON * sigma_max,
            RankTolerance::Relative(f) => f * sigma_max,
        }
    }
}

fn rank_from_values(values: impl Iterator<Item = f64> + Clone, max_dim: usize, tol: RankTolerance) -> usize {
    let top = values.clone().fold(0.0f64, |a, v| a.max(v.abs()));
    if top == 0.0 {
        return 0;
    }
    let threshold = tol.threshold(max_dim, top);
    values.filter(|v| v.abs() > threshold).count()
}

pub fn numerical_rank(m: &DMatrix<f64>, tol: RankTolerance) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    rank_from_values(sv.iter().copied(), m.nrows().max(m.ncols()), tol)
}

/// Rank of the matrix whose columns are the flattened elements of `set`.
pub fn span_rank(set: &SpanningSet, tol: RankTolerance) -> usize {
    if set.is_empty() {
        return 0;
    }
    let cols = set.cols();
    let mut m = DMatrix::zeros(set.rows() * cols, set.len());
    for (j, mat) in set.matrices().enumerate() {
        for e in mat.entries() {
            m[(e.row * cols + e.col, j)] = e.value as f64;
        }
    }
    numerical_rank(&m, tol)
}

const PRIME: u64 = (1 << 61) - 1;

fn mod_p(v: i64) -> u64 {
    v.rem_euclid(PRIME as i64) as u64
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

/// Rank over `Z/p` for `p = 2^61 − 1` of sparse integer rows. Equals the
/// rational rank unless `p` divides every maximal nonzero minor.
pub fn integer_rank(rows: &[Vec<(usize, i64)>], ncols: usize) -> usize {
    // pivot column -> reduced row with leading 1 at that column
    let mut pivots: HashMap<usize, Vec<u64>> = HashMap::new();
    for row in rows {
        let mut dense = vec![0u64; ncols];
        for &(c, v) in row {
            dense[c] = (dense[c] + mod_p(v)) % PRIME;
        }
        for c in 0..ncols {
            if dense[c] == 0 {
                continue;
            }
            match pivots.get(&c) {
                Some(p) => {
                    let factor = dense[c];
                    for (d, &pv) in dense.iter_mut().zip(p).skip(c) {
                        *d = (*d + PRIME - mul_mod(factor, pv)) % PRIME;
                    }
                }
                None => {
                    let inv = pow_mod(dense[c], PRIME - 2);
                    for d in dense.iter_mut().skip(c) {
                        *d = mul_mod(*d, inv);
                    }
                    pivots.insert(c, dense);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Exact-arithmetic cross-check of [`span_rank`].
pub fn span_rank_exact(set: &SpanningSet) -> usize {
    let cols = set.cols();
    let rows: Vec<Vec<(usize, i64)>> = set
        .matrices()
        .map(|m| {
            m.entries()
                .iter()
                .map(|e| (e.row * cols + e.col, e.value as i64))
                .collect()
        })
        .collect();
    integer_rank(&rows, set.rows() * cols)
}

/// Homogeneous linear constraints on `vec(C)`, `C` an `n^l x n^k` matrix
/// stored row-major, so unknown `u` is the flattened `(I, J)` tuple.
struct ConstraintSystem {
    n: usize,
    k: usize,
    l: usize,
    rows: Vec<Vec<(usize, i64)>>,
}

fn to_integer_matrix(m: &DMatrix<f64>) -> Vec<Vec<i64>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| {
                    let v = m[(i, j)];
                    assert!(v == v.round(), "constraint matrices must be integral");
                    v as i64
                })
                .collect()
        })
        .collect()
}

fn tuple_of(mut u: usize, n: usize, len: usize) -> Vec<usize> {
    let mut t = vec![0; len];
    for slot in t.iter_mut().rev() {
        *slot = u % n;
        u /= n;
    }
    t
}

fn flat_of(t: &[usize], n: usize) -> usize {
    t.iter().fold(0, |acc, &v| acc * n + v)
}

fn merge_row(mut row: Vec<(usize, i64)>) -> Vec<(usize, i64)> {
    row.sort_unstable_by_key(|&(c, _)| c);
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|&(_, v)| v != 0);
    out
}

/// Diagonal group elements (as sign vectors) used as exact discrete
/// constraints: the component representatives, plus coordinate sign flips
/// (single flips for O(n), adjacent pairs for SO(n)).
fn sign_elements(group: GroupKind, n: usize) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = component_reps(group, n)
        .iter()
        .map(|g| {
            let m = g.matrix();
            assert!(
                (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == 0.0)),
                "component representatives are expected to be diagonal"
            );
            (0..n).map(|i| m[(i, i)] as i64).collect()
        })
        .collect();
    match group {
        GroupKind::O => {
            for a in 0..n {
                let mut s = vec![1; n];
                s[a] = -1;
                out.push(s);
            }
        }
        GroupKind::SO => {
            for a in 0..n.saturating_sub(1) {
                let mut s = vec![1; n];
                s[a] = -1;
                s[a + 1] = -1;
                out.push(s);
            }
        }
        GroupKind::Sp => {}
    }
    out
}

impl ConstraintSystem {
    fn build(group: GroupKind, n: usize, k: usize, l: usize) -> Result<Self> {
        let order = l + k;
        let size = n.pow(order as u32);
        let mut rows = Vec::new();
        let generators: Vec<Vec<Vec<i64>>> = lie_basis(group, n)?.iter().map(|x| to_integer_matrix(&x.mat)).collect();
        for x in &generators {
            for u in 0..size {
                let t = tuple_of(u, n, order);
                let mut row = Vec::new();
                let mut moved = t.clone();
                // (dρ_l(X) C)_{IJ} = Σ_pos Σ_a X[i_pos, a] C[I(pos→a), J]
                for pos in 0..l {
                    for (a, &coeff) in x[t[pos]].iter().enumerate() {
                        if coeff != 0 {
                            moved[pos] = a;
                            row.push((flat_of(&moved, n), coeff));
                        }
                    }
                    moved[pos] = t[pos];
                }
                // (C dρ_k(X))_{IJ} = Σ_pos Σ_b C[I, J(pos→b)] X[b, j_pos]
                for pos in l..order {
                    for (b, x_row) in x.iter().enumerate() {
                        let coeff = x_row[t[pos]];
                        if coeff != 0 {
                            moved[pos] = b;
                            row.push((flat_of(&moved, n), -coeff));
                        }
                    }
                    moved[pos] = t[pos];
                }
                let row = merge_row(row);
                if !row.is_empty() {
                    rows.push(row);
                }
            }
        }
        // diagonal s: (ρ_l(s) C − C ρ_k(s))_{IJ} = (Π s[i] − Π s[j]) C_{IJ}
        for s in sign_elements(group, n) {
            for u in 0..size {
                let t = tuple_of(u, n, order);
                let out: i64 = t[..l].iter().map(|&v| s[v]).product();
                let inp: i64 = t[l..].iter().map(|&v| s[v]).product();
                if out != inp {
                    rows.push(vec![(u, out - inp)]);
                }
            }
        }
        Ok(Self { n, k, l, rows })
    }

    fn unknowns(&self) -> usize {
        self.n.pow((self.l + self.k) as u32)
    }

    /// Removes unknowns forced to zero by single-entry rows, to a fixpoint.
    /// Returns the surviving unknowns and the rows restricted to them.
    fn reduce(&self) -> (Vec<usize>, Vec<Vec<(usize, i64)>>) {
        let size = self.unknowns();
        let mut alive = vec![true; size];
        loop {
            let mut changed = false;
            for row in &self.rows {
                let mut live = row.iter().filter(|(c, _)| alive[*c]);
                if let (Some(&(c, _)), None) = (live.next(), live.next()) {
                    alive[c] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let survivors: Vec<usize> = (0..size).filter(|&u| alive[u]).collect();
        let index: HashMap<usize, usize> = survivors.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .filter_map(|(c, v)| index.get(c).map(|&i| (i, *v)))
                    .collect::<Vec<_>>()
            })
            .filter(|r| !r.is_empty())
            .collect();
        (survivors, rows)
    }
}

/// Groups the reduced unknowns into independent blocks (connected through
/// shared rows) and returns, per block, its Gram matrix `AᵀA` in exact integers.
fn gram_blocks(nvars: usize, rows: &[Vec<(usize, i64)>]) -> Vec<Vec<Vec<i64>>> {
    let mut parent: Vec<usize> = (0..nvars).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for row in rows {
        let first = find(&mut parent, row[0].0);
        for &(c, _) in &row[1..] {
            let r = find(&mut parent, c);
            if r != first {
                parent[r] = first;
            }
        }
    }
    let mut block_of = HashMap::new();
    let mut local = vec![0; nvars];
    let mut sizes: Vec<usize> = Vec::new();
    for (v, slot) in local.iter_mut().enumerate() {
        let root = find(&mut parent, v);
        let b = *block_of.entry(root).or_insert_with(|| {
            sizes.push(0);
            sizes.len() - 1
        });
        *slot = sizes[b];
        sizes[b] += 1;
    }
    let mut grams: Vec<Vec<Vec<i64>>> = sizes.iter().map(|&s| vec![vec![0; s]; s]).collect();
    for row in rows {
        let b = block_of[&find(&mut parent, row[0].0)];
        let g = &mut grams[b];
        for &(c1, v1) in row {
            for &(c2, v2) in row {
                g[local[c1]][local[c2]] += v1 * v2;
            }
        }
    }
    grams
}

fn reduced_blocks(group: GroupKind, n: usize, k: usize, l: usize, limit: usize) -> Result<Vec<Vec<Vec<i64>>>> {
    group.check_dimension(n)?;
    let size = (n as u128).pow((l + k) as u32);
    if size > limit as u128 {
        return Err(Error::OracleTooLarge {
            size: size.min(usize::MAX as u128) as usize,
            limit,
        });
    }
    let system = ConstraintSystem::build(group, n, k, l)?;
    let (survivors, rows) = system.reduce();
    Ok(gram_blocks(survivors.len(), &rows))
}

/// Dimension of `Hom_G((R^n)^{⊗k}, (R^n)^{⊗l})` computed without diagrams:
/// the null space of `dρ_l(X) C − C dρ_k(X) = 0` over a Lie algebra basis,
/// together with `ρ_l(s) C = C ρ_k(s)` for diagonal group elements `s` that
/// include a representative of every component. Rank is taken from the
/// singular values of each block's Gram matrix.
pub fn oracle_dimension(group: GroupKind, n: usize, k: usize, l: usize) -> Result<usize> {
    oracle_dimension_with_limit(group, n, k, l, DEFAULT_ORACLE_LIMIT)
}

pub fn oracle_dimension_with_limit(group: GroupKind, n: usize, k: usize, l: usize, limit: usize) -> Result<usize> {
    let mut nullity = 0;
    for gram in reduced_blocks(group, n, k, l, limit)? {
        let size = gram.len();
        let m = DMatrix::from_fn(size, size, |i, j| gram[i][j] as f64);
        let eig = m.symmetric_eigenvalues();
        nullity += size - rank_from_values(eig.iter().copied(), size, RankTolerance::Standard);
    }
    Ok(nullity)
}

/// [`oracle_dimension`] with the block ranks taken in exact modular arithmetic.
pub fn oracle_dimension_exact(group: GroupKind, n: usize, k: usize, l: usize, limit: usize) -> Result<usize> {
    let mut nullity = 0;
    for gram in reduced_blocks(group, n, k, l, limit)? {
        let size = gram.len();
        let rows: Vec<Vec<(usize, i64)>> = gram
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(|(c, v)| (c, *v))
                    .collect()
            })
            .collect();
        nullity += size - integer_rank(&rows, size);
    }
    Ok(nullity)
}

/// Whether the spanning set is known to be a basis: `2n >= l+k` for O(n),
/// `n >= l+k` for Sp(n). No claim is made for SO(n).
pub fn basis_regime(group: GroupKind, n: usize, k: usize, l: usize) -> bool {
    match group {
        GroupKind::O => 2 * n >= l + k,
        GroupKind::Sp => n >= l + k,
        GroupKind::SO => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridPoint {
    pub group: GroupKind,
    pub n: usize,
    pub k: usize,
    pub l: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub group: GroupKind,
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub span_count: usize,
    pub span_rank: usize,
    pub oracle_dim: usize,
    pub basis_regime: bool,
}

impl DimensionReport {
    /// `span_rank == oracle_dim`, and `span_rank == span_count` in a basis regime.
    pub fn consistent(&self) -> bool {
        self.span_rank == self.oracle_dim && (!self.basis_regime || self.span_rank == self.span_count)
    }
}

pub fn dimension_report(point: GridPoint) -> Result<DimensionReport> {
    let GridPoint { group, n, k, l } = point;
    let set = spanning_set(group, n, k, l)?;
    Ok(DimensionReport {
        group,
        n,
        k,
        l,
        span_count: set.len(),
        span_rank: span_rank(&set, RankTolerance::Standard),
        oracle_dim: oracle_dimension(group, n, k, l)?,
        basis_regime: basis_regime(group, n, k, l),
    })
}

pub fn dims_table(grid: &[GridPoint]) -> Result<Vec<DimensionReport>> {
    grid.iter().map(|&p| dimension_report(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layers::spanning_set;
    use crate::sparse::SparseMatrix;

    #[test]
    fn generated_element_passes() {
        let set = spanning_set(GroupKind::O, 3, 2, 2).unwrap();
        for m in set.matrices() {
            let r = check_equivariance(m, GroupKind::O, 3, 2, 2, 20, 1e-9, 1).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn zero_matrix_passes_trivially() {
        let z = SparseMatrix::zeros(4, 4);
        let r = check_equivariance(&z, GroupKind::O, 2, 2, 2, 5, 1e-9, 1).unwrap();
        assert!(r.passed);
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn matrix_unit_fails_under_quarter_turn() {
        // unit at row (1,1), col (1,2)
        let unit = SparseMatrix::unit(4, 4, 0, 1);
        let layout = ActionLayout::single(GroupKind::O, 2, 2, 2).unwrap();
        let rot = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let probes: Vec<Vec<f64>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        // column (1,2) maps to ρ(rot)e_(1,1) = e_(2,2) ≠ e_(1,1) ... residual 1
        let r = residual(&unit, &layout, &[rot], &probes).unwrap();
        assert_eq!(r, 1.0);
        let rep = check_equivariance(&unit, GroupKind::O, 2, 2, 2, 20, 1e-9, 3).unwrap();
        assert!(!rep.passed);
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let z = SparseMatrix::zeros(3, 4);
        assert!(matches!(
            check_equivariance(&z, GroupKind::O, 2, 2, 2, 1, 1e-9, 1),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn small_ranks() {
        let rank = |g, n, k, l| span_rank(&spanning_set(g, n, k, l).unwrap(), RankTolerance::Standard);
        assert_eq!(rank(GroupKind::O, 2, 2, 2), 3);
        assert_eq!(rank(GroupKind::O, 1, 2, 2), 1);
        assert!(rank(GroupKind::O, 2, 3, 3) < 15);
        assert_eq!(rank(GroupKind::O, 2, 1, 2), 0);
    }

    #[test]
    fn integer_rank_basics() {
        let rows = vec![vec![(0, 1), (1, 2)], vec![(0, 2), (1, 4)], vec![(2, -3)]];
        assert_eq!(integer_rank(&rows, 3), 2);
        assert_eq!(integer_rank(&[], 3), 0);
        let set = spanning_set(GroupKind::SO, 2, 3, 1).unwrap();
        assert_eq!(span_rank_exact(&set), span_rank(&set, RankTolerance::Standard));
    }

    #[test]
    fn small_oracle_values() {
        assert_eq!(oracle_dimension(GroupKind::O, 2, 1, 1).unwrap(), 1);
        assert_eq!(oracle_dimension(GroupKind::SO, 2, 1, 1).unwrap(), 2);
        assert_eq!(oracle_dimension(GroupKind::O, 2, 1, 2).unwrap(), 0);
        assert_eq!(oracle_dimension(GroupKind::O, 1, 2, 2).unwrap(), 1);
        assert_eq!(oracle_dimension(GroupKind::SO, 1, 0, 3).unwrap(), 1);
        assert_eq!(oracle_dimension(GroupKind::Sp, 4, 1, 1).unwrap(), 1);
        assert_eq!(oracle_dimension(GroupKind::O, 3, 0, 0).unwrap(), 1);
        assert!(matches!(
            oracle_dimension(GroupKind::O, 5, 3, 3),
            Err(Error::OracleTooLarge {
                size: 15625,
                limit: 4096
            })
        ));
    }

    #[test]
    fn oracle_routes_agree() {
        for (g, n, k, l) in [
            (GroupKind::O, 2, 2, 2),
            (GroupKind::SO, 3, 2, 1),
            (GroupKind::Sp, 2, 3, 1),
        ] {
            assert_eq!(
                oracle_dimension(g, n, k, l).unwrap(),
                oracle_dimension_exact(g, n, k, l, DEFAULT_ORACLE_LIMIT).unwrap()
            );
        }
    }

    #[test]
    fn report_consistency() {
        let r = dimension_report(GridPoint {
            group: GroupKind::O,
            n: 3,
            k: 3,
            l: 3,
        })
        .unwrap();
        assert_eq!((r.span_count, r.span_rank, r.oracle_dim), (15, 15, 15));
        assert!(r.basis_regime && r.consistent());
    }
}
