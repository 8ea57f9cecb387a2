//! Acceptance suite: one PASS/FAIL line per criterion, with the tolerances
//! and runtime budgets fixed below. Runs as a plain binary (no libtest
//! harness) so the report is always printed; exits non-zero on any failure.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use brauer_core::diagrams::{enumerate_brauer, enumerate_grood};
use brauer_core::groups::{sample, tensor_power_apply};
use brauer_core::layers::{assemble_layer, bias_set, local_spanning_set, spanning_set, with_features, LayerSpec};
use brauer_core::spanmat::{Diagram, MatrixKind};
use brauer_core::verify::{
    basis_regime, check_equivariance, check_set, oracle_dimension, span_rank, span_rank_exact, RankTolerance,
    DEFAULT_ORACLE_LIMIT,
};
use brauer_core::{Factor, GroupKind};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORTHOGONAL_TOL: f64 = 1e-9;
const SYMPLECTIC_TOL: f64 = 1e-7;
const LOCAL_TOL: f64 = 1e-8;
const TRIALS: usize = 20;
const SEED: u64 = 2024;

type Outcome = Result<String, String>;

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn tolerance(group: GroupKind) -> f64 {
    match group {
        GroupKind::Sp => SYMPLECTIC_TOL,
        _ => ORTHOGONAL_TOL,
    }
}

fn dense(rows: &[[i32; 4]; 4]) -> Vec<Vec<i32>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

fn golden_o2() -> Outcome {
    let set = spanning_set(GroupKind::O, 2, 2, 2).map_err(|e| e.to_string())?;
    ensure(set.len() == 3, || format!("{} elements", set.len()))?;
    for (i, (e, want)) in set.elements.iter().zip(&O2_GOLDEN).enumerate() {
        ensure(e.matrix.to_dense_i32() == dense(want), || {
            format!("element {} differs", i + 1)
        })?;
    }
    Ok("3 of 3 matrices equal".into())
}

fn golden_sp2() -> Outcome {
    let set = spanning_set(GroupKind::Sp, 2, 3, 1).map_err(|e| e.to_string())?;
    ensure(set.len() == 3, || format!("{} elements", set.len()))?;
    for (i, (e, want)) in set.elements.iter().zip(&SP2_GOLDEN).enumerate() {
        let want: Vec<Vec<i32>> = want.iter().map(|r| r.to_vec()).collect();
        ensure(e.matrix.to_dense_i32() == want, || format!("element {} differs", i + 1))?;
    }
    Ok("3 of 3 matrices equal, signs included".into())
}

fn golden_so2() -> Outcome {
    let set = spanning_set(GroupKind::SO, 2, 3, 1).map_err(|e| e.to_string())?;
    let h: Vec<_> = set.elements.iter().filter(|e| e.kinds == [MatrixKind::H]).collect();
    ensure(set.len() == 9 && h.len() == 6, || {
        format!("{} elements, {} H", set.len(), h.len())
    })?;
    for (free, block, want) in SO2_GOLDEN {
        let want: Vec<Vec<i32>> = want.iter().map(|r| r.to_vec()).collect();
        let found = h.iter().find(|e| match &e.diagrams[0] {
            Diagram::Grood(g) => g.free_vertices().eq(free) && g.blocks() == [block],
            Diagram::Brauer(_) => false,
        });
        let found = found.ok_or_else(|| format!("no diagram with free vertices {free:?}"))?;
        ensure(found.matrix.to_dense_i32() == want, || format!("free {free:?} differs"))?;
    }
    Ok("6 of 6 H matrices equal".into())
}

fn o3_dimension() -> Outcome {
    let set = spanning_set(GroupKind::O, 3, 3, 3).map_err(|e| e.to_string())?;
    let rank = span_rank(&set, RankTolerance::Standard);
    let exact = span_rank_exact(&set);
    let oracle = oracle_dimension(GroupKind::O, 3, 3, 3).map_err(|e| e.to_string())?;
    ensure((set.len(), rank, exact, oracle) == (15, 15, 15, 15), || {
        format!("count={} rank={rank} exact={exact} oracle={oracle}", set.len())
    })?;

    // match each weight index of the displayed matrix with one element
    let table = load_o3_table();
    let mut weights_of = [usize::MAX; 15];
    for p in 1..=15 {
        let pattern: Vec<Vec<i32>> = table
            .entries
            .iter()
            .map(|row| row.iter().map(|c| c.contains(&p) as i32).collect())
            .collect();
        let hits: Vec<usize> = (0..15)
            .filter(|&i| set.elements[i].matrix.to_dense_i32() == pattern)
            .collect();
        ensure(hits.len() == 1, || {
            format!("weight {p} matches {} elements", hits.len())
        })?;
        weights_of[hits[0]] = p;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let lambda: Vec<f64> = (0..15).map(|_| rng.random_range(-1.0..1.0)).collect();
    let weights: Vec<f64> = weights_of.iter().map(|&p| lambda[p - 1]).collect();
    let c = assemble_layer(&LayerSpec::new(Arc::new(set), weights).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let sum = |ps: &[usize]| ps.iter().map(|&p| lambda[p - 1]).sum::<f64>();
    let mut worst: f64 = 0.0;
    for (r, row) in table.entries.iter().enumerate() {
        for (col, cell) in row.iter().enumerate() {
            worst = worst.max((c[(r, col)] - sum(cell)).abs());
        }
    }
    ensure(worst < 1e-12, || format!("assembled matrix deviates by {worst:e}"))?;
    // rows/cols (1,1,1),(1,1,1) and (1,1,2),(2,2,2) in the flattened order
    let all: Vec<usize> = (1..=15).collect();
    let e1 = (c[(0, 0)] - sum(&all)).abs();
    let e2 = (c[(1, 13)] - sum(&[7, 11, 15])).abs();
    ensure(e1 < 1e-12 && e2 < 1e-12, || format!("entry errors {e1:e}, {e2:e}"))?;
    Ok(
        "count=15 rank=15 oracle=15; 729 entries match; ((1,1,1),(1,1,1))=λ1+…+λ15, ((1,1,2),(2,2,2))=λ7+λ11+λ15"
            .into(),
    )
}

fn double_factorial(m: i64) -> u64 {
    (1..=m.max(0) as u64).rev().step_by(2).product()
}

fn choose(n: u64, r: u64) -> u64 {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn counting_sweep() -> Outcome {
    let mut checked = 0;
    for order in 0..=8usize {
        for l in 0..=order {
            let k = order - l;
            let want = if order % 2 == 0 {
                double_factorial(order as i64 - 1)
            } else {
                0
            };
            let got = enumerate_brauer(k, l).len() as u64;
            ensure(got == want, || format!("Brauer k={k} l={l}: {got} != {want}"))?;
            checked += 1;
            for n in 1..=6usize {
                let want = if n <= order && (order - n) % 2 == 0 {
                    choose(order as u64, n as u64) * double_factorial(order as i64 - n as i64 - 1)
                } else {
                    0
                };
                let got = enumerate_grood(k, l, n).len() as u64;
                ensure(got == want, || format!("(l+k)\\n k={k} l={l} n={n}: {got} != {want}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} enumeration sizes equal the closed forms"))
}

fn grid(max_n: usize, max_order: usize) -> Vec<(GroupKind, usize, usize, usize)> {
    let mut out = Vec::new();
    for group in [GroupKind::O, GroupKind::SO, GroupKind::Sp] {
        for n in 1..=max_n {
            if group == GroupKind::Sp && n % 2 == 1 {
                continue;
            }
            for order in 0..=max_order {
                for l in 0..=order {
                    out.push((group, n, order - l, l));
                }
            }
        }
    }
    out
}

fn equivariance_suite() -> Outcome {
    let (mut elements, mut points) = (0, 0);
    let mut worst = [0.0f64; 2];
    for (group, n, k, l) in grid(4, 6) {
        let set = spanning_set(group, n, k, l).map_err(|e| e.to_string())?;
        points += 1;
        for (i, m) in set.matrices().enumerate() {
            let r = check_equivariance(m, group, n, k, l, TRIALS, tolerance(group), SEED + points)
                .map_err(|e| e.to_string())?;
            let slot = (group == GroupKind::Sp) as usize;
            worst[slot] = worst[slot].max(r.max_residual);
            ensure(r.passed, || {
                format!(
                    "{group}({n}) k={k} l={l} element {}: residual {:e}",
                    i + 1,
                    r.max_residual
                )
            })?;
            elements += 1;
        }
    }
    Ok(format!(
        "{elements} elements over {points} grid points; max residual O/SO {:.1e} (tol {ORTHOGONAL_TOL:e}), Sp {:.1e} (tol {SYMPLECTIC_TOL:e})",
        worst[0], worst[1]
    ))
}

/// Every `n <= 6`, `l+k <= 8` point within the oracle size guard.
fn oracle_grid() -> Vec<(GroupKind, usize, usize, usize)> {
    grid(6, 8)
        .into_iter()
        .filter(|&(_, n, k, l)| (n as u128).pow((k + l) as u32) <= DEFAULT_ORACLE_LIMIT as u128)
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let mut checked = 0;
    let mut outside = 0;
    for (group, n, k, l) in oracle_grid() {
        let set = spanning_set(group, n, k, l).map_err(|e| e.to_string())?;
        let rank = span_rank(&set, RankTolerance::Standard);
        let oracle = oracle_dimension(group, n, k, l).map_err(|e| e.to_string())?;
        ensure(rank == oracle, || {
            format!("{group}({n}) k={k} l={l}: rank {rank} != oracle {oracle}")
        })?;
        checked += 1;
        if !basis_regime(group, n, k, l) && rank < set.len() {
            outside += 1;
        }
    }
    let named = [(GroupKind::O, 2, 3, 3), (GroupKind::Sp, 2, 3, 1)]
        .iter()
        .map(|&(g, n, k, l)| {
            let d = oracle_dimension(g, n, k, l).unwrap_or(usize::MAX);
            format!("{g}({n}) k={k} l={l}: {d}")
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok(format!(
        "{checked} grid points with n^(l+k) <= {DEFAULT_ORACLE_LIMIT}, {outside} with linear dependencies; {named}"
    ))
}

fn basis_regimes() -> Outcome {
    let mut checked = 0;
    for (group, n, k, l) in oracle_grid() {
        if !basis_regime(group, n, k, l) {
            continue;
        }
        let set = spanning_set(group, n, k, l).map_err(|e| e.to_string())?;
        let rank = span_rank(&set, RankTolerance::Standard);
        ensure(rank == set.len(), || {
            format!("{group}({n}) k={k} l={l}: rank {rank} < count {}", set.len())
        })?;
        checked += 1;
    }
    Ok(format!("{checked} grid points in a basis regime have rank = count"))
}

fn local_symmetry() -> Outcome {
    let factors = [
        Factor::new(GroupKind::SO, 3, 3, 3).map_err(|e| e.to_string())?,
        Factor::new(GroupKind::SO, 3, 1, 2).map_err(|e| e.to_string())?,
    ];
    let set = local_spanning_set(&factors).map_err(|e| e.to_string())?;
    ensure(set.len() == 15, || format!("{} elements", set.len()))?;
    let reports = check_set(&set, TRIALS, Some(LOCAL_TOL), SEED).map_err(|e| e.to_string())?;
    let worst = reports.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    ensure(reports.iter().all(|r| r.passed), || format!("max residual {worst:e}"))?;
    Ok(format!("15 elements, max residual {worst:.1e} (tol {LOCAL_TOL:e})"))
}

fn bias_and_features() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut bias_elements = 0;
    for (group, n, l) in [
        (GroupKind::O, 2, 2),
        (GroupKind::O, 3, 4),
        (GroupKind::SO, 2, 2),
        (GroupKind::SO, 3, 3),
        (GroupKind::Sp, 2, 2),
        (GroupKind::Sp, 4, 4),
    ] {
        let set = bias_set(group, n, l).map_err(|e| e.to_string())?;
        ensure(set.cols() == 1 && !set.is_empty(), || {
            format!("{group}({n}) l={l}: empty bias set")
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        for _ in 0..TRIALS {
            let g = sample(group, n, rng.random()).map_err(|e| e.to_string())?;
            for m in set.matrices() {
                let c: Vec<f64> = m.to_dense().column(0).iter().copied().collect();
                let gc = tensor_power_apply(g.matrix(), l, &c).map_err(|e| e.to_string())?;
                let scale = c.iter().fold(0.0f64, |a, v| a.max(v.abs()));
                let r = gc.iter().zip(&c).fold(0.0f64, |a, (x, y)| a.max((x - y).abs())) / scale;
                worst = worst.max(r);
                ensure(r <= tolerance(group), || {
                    format!("{group}({n}) l={l}: ρ(g)c - c = {r:e}")
                })?;
            }
        }
        bias_elements += set.len();
    }
    let mut featured = 0;
    for (group, n, k, l, d_k, d_l) in [
        (GroupKind::O, 2, 2, 2, 2, 3),
        (GroupKind::SO, 2, 3, 1, 3, 2),
        (GroupKind::Sp, 2, 1, 1, 2, 2),
    ] {
        let base = spanning_set(group, n, k, l).map_err(|e| e.to_string())?;
        let set = with_features(&base, d_k, d_l).map_err(|e| e.to_string())?;
        ensure(set.len() == base.len() * d_k * d_l, || {
            format!("{group}({n}): {} elements", set.len())
        })?;
        let reports = check_set(&set, TRIALS, None, SEED).map_err(|e| e.to_string())?;
        ensure(reports.iter().all(|r| r.passed), || {
            format!("{group}({n}) featured element fails")
        })?;
        featured += set.len();
    }
    Ok(format!(
        "{bias_elements} bias elements invariant (max {worst:.1e}); {featured} featured elements equivariant with counts x d_k·d_l"
    ))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            name: "golden matrices O(2)",
            budget: Duration::from_secs(1),
            run: golden_o2,
        },
        Criterion {
            name: "golden matrices Sp(2)",
            budget: Duration::from_secs(1),
            run: golden_sp2,
        },
        Criterion {
            name: "golden matrices SO(2)",
            budget: Duration::from_secs(1),
            run: golden_so2,
        },
        Criterion {
            name: "O(3) dimension and displayed entries",
            budget: Duration::from_secs(30),
            run: o3_dimension,
        },
        Criterion {
            name: "counting sweep",
            budget: Duration::from_secs(10),
            run: counting_sweep,
        },
        Criterion {
            name: "equivariance suite",
            budget: Duration::from_secs(300),
            run: equivariance_suite,
        },
        Criterion {
            name: "oracle equivalence",
            budget: Duration::from_secs(600),
            run: oracle_equivalence,
        },
        Criterion {
            name: "basis regimes",
            budget: Duration::from_secs(600),
            run: basis_regimes,
        },
        Criterion {
            name: "local symmetry",
            budget: Duration::from_secs(60),
            run: local_symmetry,
        },
        Criterion {
            name: "bias and feature extensions",
            budget: Duration::from_secs(60),
            run: bias_and_features,
        },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.budget => Err(format!("{detail}; took {elapsed:.2?} > budget {:?}", c.budget)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {} ({elapsed:.2?}): {detail}", c.name),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {} ({elapsed:.2?}): {detail}", c.name);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
