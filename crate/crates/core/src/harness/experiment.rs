use std::fmt::Write as _;

use rayon::prelude::*;

use super::stats::median;
use super::{EpdRecord, HarnessError};
use crate::policy::DepthPolicy;
use crate::search::{search_root, SearchParams, SearchResult};

/// One line of the experiment table.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentRow {
    pub experiment_number: u64,
    pub nodes_searched: u64,
    pub divisor: f64,
    pub max_depth_attained: u32,
    pub max_uniform_depth: u32,
    pub solved: bool,
    pub step_size: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseOutcome {
    pub row: ExperimentRow,
    pub result: SearchResult,
}

/// A case solved by the depth ladder: the smallest uniform depth that worked.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderHit {
    pub depth: u32,
    pub nodes: u64,
    pub result: SearchResult,
}

fn is_solved(r: &EpdRecord, result: &SearchResult) -> bool {
    if result.aborted {
        return false;
    }
    match (r.direct_mate, &r.best_moves) {
        (Some(dm), _) => result.solved_mate_in.is_some_and(|k| k <= dm),
        (None, Some(bm)) => result.best_move.is_some_and(|m| bm.contains(&m)),
        (None, None) => false,
    }
}

/// Ply horizon for a record: a mate in `n` needs `2n - 1` plies, so deeper
/// lines cannot contribute to its solution. Other records keep `max_extension`.
pub fn record_horizon(r: &EpdRecord, max_extension: u32) -> u32 {
    match r.direct_mate {
        Some(dm) if dm > 0 => max_extension.min(dm.saturating_mul(2) - 1),
        _ => max_extension,
    }
}

/// Search one record and keep the full result next to its table row.
///
/// With `dm` the case is solved when a mate in at most `dm` moves is proved;
/// otherwise when the chosen move is one of `bm`. The search never goes past
/// [`record_horizon`].
pub fn evaluate_case(
    r: &EpdRecord,
    params: &SearchParams,
    node_budget: u64,
) -> Result<CaseOutcome, HarnessError> {
    if r.direct_mate.is_none() && r.best_moves.is_none() {
        return Err(HarnessError::NoCriterion(r.id.clone()));
    }
    let horizon = record_horizon(r, params.max_extension);
    let params = params
        .clone()
        .with_budget(Some(node_budget))
        .with_max_extension(horizon);
    let result = search_root(&r.position, &params).map_err(|source| HarnessError::Search {
        id: r.id.clone(),
        source,
    })?;
    let row = ExperimentRow {
        experiment_number: 1,
        nodes_searched: result.nodes,
        divisor: params.policy.divisor(),
        max_depth_attained: result.max_depth_attained,
        max_uniform_depth: params.max_uniform_depth().round() as u32,
        solved: is_solved(r, &result),
        step_size: params.step_scale,
    };
    Ok(CaseOutcome { row, result })
}

pub fn run_case(
    r: &EpdRecord,
    params: &SearchParams,
    node_budget: u64,
) -> Result<ExperimentRow, HarnessError> {
    Ok(evaluate_case(r, params, node_budget)?.row)
}

/// Raise the uniform depth from 1 to `max_depth` until the case is solved.
/// Stops early once a depth exhausts the budget, since deeper ones would too.
pub fn solve_with_ladder(
    r: &EpdRecord,
    base: &SearchParams,
    max_depth: u32,
    node_budget: u64,
) -> Result<Option<LadderHit>, HarnessError> {
    for depth in 1..=max_depth {
        let params = base.clone().with_max_uniform_depth(depth);
        let out = evaluate_case(r, &params, node_budget)?;
        if out.row.solved {
            return Ok(Some(LadderHit {
                depth,
                nodes: out.result.nodes,
                result: out.result,
            }));
        }
        if out.result.aborted {
            break;
        }
    }
    Ok(None)
}

/// How a sweep turns a divisor into a policy.
#[derive(Clone, Debug, PartialEq)]
pub enum PolicyFamily {
    /// The eval-delta heuristic with the swept divisor.
    Appendix,
    /// The same policy for every divisor; the column is informational.
    Fixed(DepthPolicy),
}

impl PolicyFamily {
    pub fn policy(&self, divisor: f64) -> Result<DepthPolicy, HarnessError> {
        match self {
            PolicyFamily::Appendix => DepthPolicy::appendix(divisor)
                .map_err(|e| HarnessError::InvalidSweep(e.to_string())),
            PolicyFamily::Fixed(p) => Ok(p.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub suite: Vec<EpdRecord>,
    pub divisors: Vec<f64>,
    pub uniform_depths: Vec<u32>,
    pub family: PolicyFamily,
    pub step_size: f64,
    pub max_extension: u32,
    pub node_budget: u64,
    /// Cases run concurrently; 1 runs them in order on the calling thread.
    pub jobs: usize,
}

impl SweepSpec {
    fn validate(&self) -> Result<(), HarnessError> {
        let fail = |m: &str| Err(HarnessError::InvalidSweep(m.to_string()));
        if self.suite.is_empty() {
            return fail("empty suite");
        }
        if self.divisors.is_empty() {
            return fail("no divisors");
        }
        if self.uniform_depths.is_empty() || self.uniform_depths.contains(&0) {
            return fail("uniform depths must be a non-empty list of positive counts");
        }
        if self.node_budget == 0 {
            return fail("node budget must be positive");
        }
        if self.jobs == 0 {
            return fail("jobs must be at least 1");
        }
        Ok(())
    }
}

/// One row per record × divisor × depth, numbered from 1 in that order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ExperimentRow>, HarnessError> {
    spec.validate()?;
    let mut tasks = Vec::new();
    for record in &spec.suite {
        for &divisor in &spec.divisors {
            let policy = spec.family.policy(divisor)?;
            for &depth in &spec.uniform_depths {
                let params = SearchParams::new(policy.clone(), depth)
                    .with_step(spec.step_size)
                    .with_max_extension(spec.max_extension);
                tasks.push((tasks.len() as u64 + 1, record, params));
            }
        }
    }
    let run = |(number, record, params): &(u64, &EpdRecord, SearchParams)| {
        let mut row = run_case(record, params, spec.node_budget)?;
        row.experiment_number = *number;
        Ok(row)
    };
    if spec.jobs == 1 {
        return tasks.iter().map(run).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| HarnessError::Pool(e.to_string()))?;
    pool.install(|| tasks.par_iter().map(run).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolicySummary {
    pub policy: String,
    pub solved: usize,
    pub total: usize,
    pub solve_rate: f64,
    /// Median nodes at the minimal solving depth, over solved cases.
    pub median_nodes: Option<f64>,
    /// Median nodes over the cases both this policy and the baseline solve,
    /// divided by the baseline's median over the same cases.
    pub node_ratio: Option<f64>,
    /// Per case, in suite order.
    pub cases: Vec<Option<LadderHit>>,
}

/// Run every policy over the suite with the depth ladder (up to the base
/// params' uniform depth) and summarize. The baseline is the first uniform
/// policy in the list, or the first policy if there is none.
pub fn compare_policies(
    suite: &[EpdRecord],
    policies: &[DepthPolicy],
    base: &SearchParams,
) -> Result<Vec<PolicySummary>, HarnessError> {
    if policies.len() < 2 {
        return Err(HarnessError::TooFewPolicies(policies.len()));
    }
    let max_depth = base.max_uniform_depth().round().max(1.0) as u32;
    let budget = base.node_budget.unwrap_or(u64::MAX);
    let jobs: Vec<(usize, usize)> = (0..policies.len())
        .flat_map(|p| (0..suite.len()).map(move |c| (p, c)))
        .collect();
    let hits = jobs
        .par_iter()
        .map(|&(p, c)| {
            let params = SearchParams {
                policy: policies[p].clone(),
                ..base.clone()
            };
            solve_with_ladder(&suite[c], &params, max_depth, budget)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let per_policy: Vec<Vec<Option<LadderHit>>> = hits
        .chunks(suite.len().max(1))
        .map(|c| c.to_vec())
        .collect();
    let per_policy = if suite.is_empty() {
        vec![Vec::new(); policies.len()]
    } else {
        per_policy
    };

    let baseline = policies
        .iter()
        .position(|p| matches!(p, DepthPolicy::Uniform))
        .unwrap_or(0);
    let nodes = |cases: &[Option<LadderHit>], keep: &dyn Fn(usize) -> bool| -> Vec<f64> {
        cases
            .iter()
            .enumerate()
            .filter_map(|(i, h)| h.as_ref().filter(|_| keep(i)).map(|h| h.nodes as f64))
            .collect()
    };
    let base_cases = &per_policy[baseline];
    Ok(policies
        .iter()
        .zip(&per_policy)
        .map(|(policy, cases)| {
            let solved = cases.iter().filter(|h| h.is_some()).count();
            let common = |i: usize| cases[i].is_some() && base_cases[i].is_some();
            let ratio = match (
                median(&nodes(cases, &common)),
                median(&nodes(base_cases, &common)),
            ) {
                (Some(a), Some(b)) if b > 0.0 => Some(a / b),
                _ => None,
            };
            PolicySummary {
                policy: policy.to_string(),
                solved,
                total: cases.len(),
                solve_rate: if cases.is_empty() {
                    0.0
                } else {
                    solved as f64 / cases.len() as f64
                },
                median_nodes: median(&nodes(cases, &|_| true)),
                node_ratio: ratio,
                cases: cases.clone(),
            }
        })
        .collect())
}

impl PolicySummary {
    /// Plain-text table of several summaries.
    pub fn table(summaries: &[PolicySummary]) -> String {
        let mut out = format!(
            "{:<24} {:>8} {:>10} {:>14} {:>10}\n",
            "policy", "solved", "rate", "median_nodes", "ratio"
        );
        for s in summaries {
            let median = s
                .median_nodes
                .map_or("-".to_string(), |m| format!("{m:.0}"));
            let ratio = s.node_ratio.map_or("-".to_string(), |r| format!("{r:.4}"));
            let _ = writeln!(
                out,
                "{:<24} {:>8} {:>10.3} {:>14} {:>10}",
                s.policy,
                format!("{}/{}", s.solved, s.total),
                s.solve_rate,
                median,
                ratio
            );
        }
        out
    }
}
