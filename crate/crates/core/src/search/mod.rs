//! Fractional-depth negamax alpha-beta.
//!
//! Every move is charged a virtual depth by the active [`DepthPolicy`]; a node
//! becomes a leaf once its virtual depth reaches `max_virtual_depth` or its real
//! ply count reaches `max_extension`. With the uniform policy this is ordinary
//! fixed-depth alpha-beta. There is no transposition table, quiescence search or
//! null move.

mod ordering;
mod synthetic;

use thiserror::Error;

use crate::chess::{GameStatus, Move, Position};
use crate::policy::{
    all_categories, child_rp, ply_increment, rp_should_expand, DepthPolicy, PolicyContext,
    PolicyError, DEFAULT_STEP,
};

pub use ordering::{order_moves, ScoredMove};
pub use synthetic::{
    brute_minimax, knuth_best_case, synthetic_alphabeta, SyntheticOutcome, SyntheticTree,
    TreeOrdering, MAX_ENUMERATED_LEAVES,
};

pub const DEFAULT_MATE_SCORE: i32 = 100_000;
/// Real-ply cap used when none is given.
pub const DEFAULT_MAX_EXTENSION: u32 = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("position is not playable: {0:?}")]
    NotOngoing(GameStatus),
    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("{what} overflows u64")]
    Overflow { what: String },
    #[error("tree has {leaves} leaves, more than the enumeration limit {limit}")]
    TooLarge { leaves: u128, limit: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchParams {
    pub policy: DepthPolicy,
    /// Depth budget in virtual units (uniform plies × `step_scale`).
    pub max_virtual_depth: f64,
    /// Hard cap on real plies from the root.
    pub max_extension: u32,
    /// Virtual depth of one full ply.
    pub step_scale: f64,
    pub mate_score: i32,
    /// Abort once this many nodes have been entered.
    pub node_budget: Option<u64>,
}

impl SearchParams {
    /// Budget of `max_uniform_depth` full plies at the default step.
    pub fn new(policy: DepthPolicy, max_uniform_depth: u32) -> SearchParams {
        SearchParams {
            policy,
            max_virtual_depth: max_uniform_depth as f64 * DEFAULT_STEP,
            max_extension: DEFAULT_MAX_EXTENSION,
            step_scale: DEFAULT_STEP,
            mate_score: DEFAULT_MATE_SCORE,
            node_budget: None,
        }
    }

    pub fn with_max_extension(mut self, max_extension: u32) -> SearchParams {
        self.max_extension = max_extension;
        self
    }

    pub fn with_budget(mut self, node_budget: Option<u64>) -> SearchParams {
        self.node_budget = node_budget;
        self
    }

    /// Rescale the step while keeping the same number of uniform plies.
    pub fn with_step(mut self, step_scale: f64) -> SearchParams {
        let plies = self.max_uniform_depth();
        self.step_scale = step_scale;
        self.max_virtual_depth = plies * step_scale;
        self
    }

    pub fn with_max_uniform_depth(mut self, plies: u32) -> SearchParams {
        self.max_virtual_depth = plies as f64 * self.step_scale;
        self
    }

    pub fn max_uniform_depth(&self) -> f64 {
        self.max_virtual_depth / self.step_scale
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) {
            return Err(SearchError::InvalidParams(format!(
                "step_scale must be positive, got {}",
                self.step_scale
            )));
        }
        if !(self.max_virtual_depth > 0.0 && self.max_virtual_depth.is_finite()) {
            return Err(SearchError::InvalidParams(format!(
                "max_virtual_depth must be positive, got {}",
                self.max_virtual_depth
            )));
        }
        if !(1..MAX_PLY as u32).contains(&self.max_extension) {
            return Err(SearchError::InvalidParams(format!(
                "max_extension must be in 1..{MAX_PLY}, got {}",
                self.max_extension
            )));
        }
        if self.mate_score <= self.max_extension as i32 {
            return Err(SearchError::InvalidParams(format!(
                "mate_score {} is too small",
                self.mate_score
            )));
        }
        // Surface missing table entries now rather than mid-search.
        for category in all_categories() {
            let ctx = PolicyContext {
                category,
                eval_delta: 0.0,
                move_count: 1,
                path_rp: 1.0,
            };
            ply_increment(&self.policy, &ctx, self.step_scale)?;
            child_rp(&self.policy, &ctx)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    /// Side-to-move perspective, centipawns or mate score.
    pub value: i32,
    pub best_move: Option<Move>,
    pub pv: Vec<Move>,
    pub nodes: u64,
    /// Deepest real ply entered.
    pub max_depth_attained: u32,
    /// Moves to mate for the side to move, when the value proves one.
    pub solved_mate_in: Option<u32>,
    pub cutoffs: u64,
    /// The node budget ran out; value and PV are not trustworthy.
    pub aborted: bool,
}

/// Search `p` to the depth allowed by `params`.
pub fn search_root(p: &Position, params: &SearchParams) -> Result<SearchResult, SearchError> {
    let inf = params.mate_score + 1;
    search_window(p, params, -inf, inf)
}

/// Search with an explicit `(alpha, beta)` window. The value is fail-soft:
/// inside the window it is exact, at or below `alpha` it is an upper bound,
/// at or above `beta` a lower bound.
pub fn search_window(
    p: &Position,
    params: &SearchParams,
    alpha: i32,
    beta: i32,
) -> Result<SearchResult, SearchError> {
    params.validate()?;
    if alpha >= beta {
        return Err(SearchError::InvalidParams(format!(
            "empty window ({alpha}, {beta})"
        )));
    }
    match p.game_status() {
        GameStatus::Ongoing => {}
        status => return Err(SearchError::NotOngoing(status)),
    }
    let mut s = Searcher::new(params);
    let value = s.node(p, alpha, beta, 0, 0.0, 1.0);
    let aborted = s.aborted;
    let pv = if aborted {
        Vec::new()
    } else {
        std::mem::take(&mut s.pv[0])
    };
    let solved_mate_in = if aborted {
        None
    } else {
        mate_in(value, params.mate_score)
    };
    Ok(SearchResult {
        value: if aborted { 0 } else { value },
        best_move: pv.first().copied(),
        pv,
        nodes: s.nodes,
        max_depth_attained: s.max_ply,
        solved_mate_in,
        cutoffs: s.cutoffs,
        aborted,
    })
}

/// Moves to mate encoded by `value`, if it is a winning mate score.
pub fn mate_in(value: i32, mate_score: i32) -> Option<u32> {
    let plies = mate_score - value;
    (value > 0 && (0..=MAX_PLY as i32).contains(&plies)).then(|| (plies as u32).div_ceil(2))
}

const MAX_PLY: usize = 1024;

struct Searcher<'a> {
    params: &'a SearchParams,
    nodes: u64,
    cutoffs: u64,
    max_ply: u32,
    aborted: bool,
    pv: Vec<Vec<Move>>,
}

impl<'a> Searcher<'a> {
    fn new(params: &'a SearchParams) -> Self {
        let depth = params.max_extension as usize + 1;
        Searcher {
            params,
            nodes: 0,
            cutoffs: 0,
            max_ply: 0,
            aborted: false,
            pv: vec![Vec::new(); depth],
        }
    }

    fn terminal_value(&self, p: &Position, ply: u32) -> i32 {
        if p.is_check() {
            -(self.params.mate_score - ply as i32)
        } else {
            0
        }
    }

    fn node(
        &mut self,
        p: &Position,
        mut alpha: i32,
        beta: i32,
        ply: u32,
        virtual_depth: f64,
        rp: f64,
    ) -> i32 {
        debug_assert!(alpha < beta);
        if self.params.node_budget.is_some_and(|b| self.nodes >= b) {
            self.aborted = true;
            return 0;
        }
        self.nodes += 1;
        self.max_ply = self.max_ply.max(ply);
        let ply_idx = ply as usize;
        self.pv[ply_idx].clear();

        let gated = match &self.params.policy {
            DepthPolicy::RealizationProbability { threshold, .. } => {
                ply > 0 && !rp_should_expand(rp, *threshold)
            }
            _ => false,
        };
        if virtual_depth >= self.params.max_virtual_depth
            || ply >= self.params.max_extension
            || gated
        {
            if !p.has_legal_move() {
                return self.terminal_value(p, ply);
            }
            return p.material_eval();
        }

        let children = p.legal_children();
        if children.is_empty() {
            return self.terminal_value(p, ply);
        }
        let move_count = children.len();
        let ordered = ordering::score_children(p, children, p.material_white());

        let mut best = -(self.params.mate_score + 1);
        for sm in &ordered {
            let ctx = PolicyContext {
                category: sm.category,
                eval_delta: sm.score as f64,
                move_count,
                path_rp: rp,
            };
            let inc = ply_increment(&self.params.policy, &ctx, self.params.step_scale)
                .expect("validated policy");
            let child_rp = child_rp(&self.params.policy, &ctx)
                .expect("validated policy")
                .map_or(rp, |(r, _)| r);
            let v = -self.node(
                &sm.child,
                -beta,
                -alpha,
                ply + 1,
                virtual_depth + inc,
                child_rp,
            );
            if self.aborted {
                return 0;
            }
            if v > best {
                best = v;
            }
            if v > alpha {
                alpha = v;
                let (head, tail) = self.pv.split_at_mut(ply_idx + 1);
                let line = &mut head[ply_idx];
                line.clear();
                line.push(sm.mv);
                line.extend_from_slice(&tail[0]);
            }
            if alpha >= beta {
                self.cutoffs += 1;
                break;
            }
        }
        best
    }
}
