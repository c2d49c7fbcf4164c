//! Acceptance checks. Runs without the libtest harness so that every line
//! is printed whether or not it passes; exits non-zero if any check fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{library_moves, minimax, random_positions, Naive};
use entroply::chess::{MoveCategory, PieceKind, Position};
use entroply::entropy::{
    asymptotic_rate, entropy_rate, exact_rate, info_gain, stationary_distribution, EntropyModel,
    MobilityGraph, TransitionMatrix,
};
use entroply::harness::{
    bundled_suite, compare_policies, emit_csv, median, spearman, ExperimentRow, PolicySummary,
};
use entroply::policy::{ers_fraction, winands_fraction, DepthPolicy};
use entroply::search::{
    knuth_best_case, search_root, synthetic_alphabeta, SearchParams, SyntheticTree, TreeOrdering,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, started: Instant) -> Result<(), String> {
    let took = started.elapsed();
    if took <= limit {
        Ok(())
    } else {
        Err(format!("took {took:.1?}, limit {limit:?}"))
    }
}

fn knuth_exactness() -> Outcome {
    let started = Instant::now();
    let mut notes = Vec::new();
    for ((b, n), expected) in [((2, 2), 3), ((3, 4), 17), ((4, 6), 127), ((5, 6), 249)] {
        let best =
            synthetic_alphabeta(&SyntheticTree::new(b, n, 1, TreeOrdering::Perfect).unwrap())
                .unwrap();
        let worst = synthetic_alphabeta(&SyntheticTree::new(b, n, 1, TreeOrdering::Worst).unwrap())
            .unwrap();
        let formula = knuth_best_case(b as u64, n).unwrap();
        let full = (b as u64).pow(n);
        notes.push(format!(
            "({b},{n}) {}/{}",
            best.leaf_count, worst.leaf_count
        ));
        if best.leaf_count != expected || formula != expected || worst.leaf_count != full {
            return Err(format!(
                "({b},{n}): perfect {} worst {} want {expected}/{full}",
                best.leaf_count, worst.leaf_count
            ));
        }
    }
    within(Duration::from_secs(1), started)?;
    Ok(notes.join(", "))
}

fn policy_constants() -> Outcome {
    let m = EntropyModel::asymptotic();
    assert!((m.best_gain() - 30f64.log2()).abs() < 1e-15);
    let check_d = ers_fraction(MoveCategory::Check, &m).unwrap();
    let queen = ers_fraction(MoveCategory::Capture(PieceKind::Queen), &m).unwrap();
    let rook = ers_fraction(MoveCategory::Capture(PieceKind::Rook), &m).unwrap();
    check(
        check_d == 0.0 && (queen - 0.0203).abs() <= 0.001 && (rook - 0.2237).abs() <= 0.002,
        format!("check {check_d}, queen {queen:.5}, rook {rook:.5}"),
    )
}

fn winands_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for m in 2..=64 {
        for c in 2..=64 {
            let (mf, cf) = (m as f64, c as f64);
            let ers_form = 1.0 - mf.ln() / cf.ln();
            worst = worst.max((ers_form - (mf / cf).ln() / (1.0 / cf).ln()).abs());
            if m <= c {
                worst = worst.max((ers_form - winands_fraction(mf / cf, cf).unwrap()).abs());
            }
        }
    }
    check(worst < 1e-12, format!("max deviation {worst:.2e}"))
}

fn entropy_rates() -> Outcome {
    let table = [
        (PieceKind::King, 8.0),
        (PieceKind::Knight, 8.0),
        (PieceKind::Bishop, 14.0),
        (PieceKind::Rook, 14.0),
        (PieceKind::Queen, 28.0),
    ];
    for (kind, moves) in table {
        let got = asymptotic_rate(kind).unwrap();
        let want = f64::log2(moves);
        if got != want {
            return Err(format!("{kind:?} asymptotic {got} != {want}"));
        }
    }
    let rook = exact_rate(PieceKind::Rook, 8).unwrap();
    if (rook - 14f64.log2()).abs() >= 1e-12 {
        return Err(format!("exact rook rate {rook}"));
    }
    let g = MobilityGraph::for_piece(PieceKind::King, 8).unwrap();
    let degrees: Vec<f64> = (0..64).map(|i| g.degree(i) as f64).collect();
    // Cross-check the degrees against plain coordinate arithmetic.
    for (i, &d) in degrees.iter().enumerate() {
        let (f, r) = ((i % 8) as i32, (i / 8) as i32);
        let count = (-1..=1)
            .flat_map(|df| (-1..=1).map(move |dr| (df, dr)))
            .filter(|&(df, dr)| {
                (df, dr) != (0, 0) && (0..8).contains(&(f + df)) && (0..8).contains(&(r + dr))
            })
            .count();
        if count as f64 != d {
            return Err(format!("king degree at {i}"));
        }
    }
    let total: f64 = degrees.iter().sum();
    let oracle: f64 = degrees.iter().map(|d| d / total * d.log2()).sum();
    let king = entropy_rate(&g).unwrap();
    if (king - oracle).abs() >= 1e-10 {
        return Err(format!("king rate {king} vs oracle {oracle}"));
    }
    let mut worst: f64 = 0.0;
    for (kind, _) in table {
        let g = MobilityGraph::for_piece(kind, 8).unwrap();
        let mu = if g.is_connected() {
            stationary_distribution(&g).unwrap()
        } else {
            g.degree_distribution().unwrap()
        };
        let p = TransitionMatrix::from_graph(&g).unwrap();
        worst = worst.max(p.step(&mu).max_abs_diff(&mu));
    }
    check(
        worst < 1e-10,
        format!("king {king:.10} bits, max |muP - mu| {worst:.1e}"),
    )
}

fn movegen_soundness() -> Outcome {
    let started = Instant::now();
    let start = Position::startpos();
    let naive = Naive::from_fen(&start.to_fen());
    let counts: Vec<u64> = (1..=4).map(|d| start.perft(d)).collect();
    if counts[0] != 20 || counts[1] != 400 {
        return Err(format!("perft 1..2 = {:?}", &counts[..2]));
    }
    for d in 3..=4 {
        let want = naive.perft(d);
        if counts[d as usize - 1] != want {
            return Err(format!(
                "perft {d} = {} but oracle says {want}",
                counts[d as usize - 1]
            ));
        }
    }
    let positions = random_positions(10_000, 99, 0, 100);
    for p in &positions {
        let fen = p.to_fen();
        if library_moves(p) != Naive::from_fen(&fen).legal() {
            return Err(format!("move lists differ at {fen}"));
        }
        let us = p.side_to_move();
        if p.legal_children().iter().any(|(_, c)| c.in_check(us)) {
            return Err(format!("move leaves king in check at {fen}"));
        }
    }
    within(Duration::from_secs(30), started)?;
    Ok(format!(
        "perft 1..4 = {counts:?}, {} positions",
        positions.len()
    ))
}

fn degeneracy() -> Outcome {
    let positions = random_positions(100, 2024, 4, 50);
    for p in &positions {
        let r = search_root(p, &SearchParams::new(DepthPolicy::Uniform, 3)).unwrap();
        let (value, best) = minimax(p, 3);
        if r.value != value || r.best_move != best {
            return Err(format!(
                "{}: search {} {:?}, oracle {value} {best:?}",
                p.to_fen(),
                r.value,
                r.best_move
            ));
        }
    }
    Ok(format!("{} positions at depth 3", positions.len()))
}

/// Median nodes of the minimal solving depth, unsolved cases counted as infinite.
fn nodes_to_solve(s: &PolicySummary) -> f64 {
    let nodes: Vec<f64> = s
        .cases
        .iter()
        .map(|h| h.as_ref().map_or(f64::INFINITY, |h| h.nodes as f64))
        .collect();
    median(&nodes).unwrap_or(f64::INFINITY)
}

fn mate_suite_params() -> SearchParams {
    SearchParams::new(DepthPolicy::Uniform, 9)
        .with_max_extension(12)
        .with_budget(Some(30_000_000))
}

fn node_reduction() -> Outcome {
    let started = Instant::now();
    let suite = bundled_suite("mate35").unwrap();
    let ers = DepthPolicy::entropy_reduction(EntropyModel::asymptotic());
    let s = compare_policies(&suite, &[DepthPolicy::Uniform, ers], &mate_suite_params()).unwrap();
    let (uniform, ers) = (&s[0], &s[1]);
    let ratio = ers.node_ratio.unwrap_or(f64::INFINITY);
    let coverage = ers.solved as f64 / uniform.solved.max(1) as f64;
    let detail = format!(
        "{} cases; uniform solved {} median {:?}; ers solved {} median {:?}; ratio {ratio:.3} (need <= 0.2), coverage {coverage:.2}",
        suite.len(),
        uniform.solved,
        uniform.median_nodes,
        ers.solved,
        ers.median_nodes
    );
    within(Duration::from_secs(300), started).map_err(|e| format!("{detail}; {e}"))?;
    check(suite.len() >= 10 && coverage >= 0.9 && ratio <= 0.2, detail)
}

fn divisor_trend() -> Outcome {
    let suite = bundled_suite("mate35").unwrap();
    let divisors = [1.0, 1.5, 2.0, 3.0, 4.0, 5.0];
    let policies: Vec<DepthPolicy> = divisors
        .iter()
        .map(|&d| DepthPolicy::appendix(d).unwrap())
        .collect();
    let s = compare_policies(&suite, &policies, &mate_suite_params()).unwrap();
    let medians: Vec<f64> = s.iter().map(nodes_to_solve).collect();
    let monotone = medians.windows(2).all(|w| w[0] <= w[1]);
    let rho = spearman(&divisors, &medians);
    check(
        monotone && rho.is_some_and(|r| r >= 0.6),
        format!("medians {medians:?}, spearman {rho:?}"),
    )
}

fn csv_fidelity() -> Outcome {
    let row = ExperimentRow {
        experiment_number: 1,
        nodes_searched: 20827,
        divisor: 1.0,
        max_depth_attained: 17,
        max_uniform_depth: 16,
        solved: true,
        step_size: 6.0,
    };
    let mut out = Vec::new();
    emit_csv(&[row], &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    let line = text.lines().nth(1).unwrap_or_default().to_string();
    check(line == "1,20827,1,17,16,1,6", line)
}

fn info_gain_bookkeeping() -> Outcome {
    let m = EntropyModel::asymptotic();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut p = Position::startpos();
    let (mut captures, mut quiet) = (0, 0);
    for _ in 0..1000 {
        if !p.has_legal_move() {
            p = Position::startpos();
        }
        let moves = p.legal_moves();
        let mv = *moves.choose(&mut rng).unwrap();
        let next = p.apply_move(&mv);
        let gain = info_gain(&p, &next, &m);
        if mv.promotion.is_none() {
            match p.captured_kind(&mv) {
                Some(kind) => {
                    captures += 1;
                    if gain != m.rate(kind) {
                        return Err(format!(
                            "{} {}: gain {gain} vs rate {}",
                            p.to_fen(),
                            mv.uci(),
                            m.rate(kind)
                        ));
                    }
                }
                None => {
                    quiet += 1;
                    if gain != 0.0 {
                        return Err(format!(
                            "{} {}: quiet move gained {gain}",
                            p.to_fen(),
                            mv.uci()
                        ));
                    }
                }
            }
        }
        p = next;
    }
    Ok(format!("{captures} captures, {quiet} quiet moves"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("knuth best-case leaf counts", knuth_exactness),
        ("policy constants", policy_constants),
        ("winands identity", winands_identity),
        ("entropy rates", entropy_rates),
        ("move generation soundness", movegen_soundness),
        ("uniform degeneracy", degeneracy),
        ("node reduction on mate suite", node_reduction),
        ("divisor sweep trend", divisor_trend),
        ("csv fidelity", csv_fidelity),
        ("info-gain bookkeeping", info_gain_bookkeeping),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let took = started.elapsed();
        match outcome {
            Ok(detail) => println!(
                "criterion {:>2} {name}: PASS ({detail}) [{took:.1?}]",
                i + 1
            ),
            Err(detail) => {
                failed += 1;
                println!(
                    "criterion {:>2} {name}: FAIL ({detail}) [{took:.1?}]",
                    i + 1
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
