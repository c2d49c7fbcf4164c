//! Fractional depth increments per move.
//!
//! A policy maps a classified move to the amount of virtual depth it costs.
//! Moves that reduce the position's uncertainty the most cost the least, so
//! forcing lines are searched deeper within the same budget. With a constant
//! increment the search reduces to ordinary fixed-depth alpha-beta.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::chess::{MoveCategory, PieceKind};
use crate::entropy::EntropyModel;

/// Virtual-depth units charged for an unremarkable move.
pub const DEFAULT_STEP: f64 = 6.0;

/// Eval-delta threshold above which a move carries the check bonus.
pub const CHECK_BONUS_THRESHOLD: f64 = 2000.0;

/// Ordering bonus added to checking moves, in centipawns.
pub const CHECK_BONUS: i32 = 10_000;

/// Default `C` for the probability-table policies; log₂ of it is the default best gain.
pub const DEFAULT_CATEGORY_COUNT: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("entropy reduction {reduction} of {category} exceeds best gain {best_gain}")]
    ReductionExceedsBestGain {
        category: MoveCategory,
        reduction: f64,
        best_gain: f64,
    },
    #[error("entropy reduction of {category} is negative ({reduction})")]
    NegativeReduction {
        category: MoveCategory,
        reduction: f64,
    },
    #[error("probability {0} outside (0, 1]")]
    BadProbability(f64),
    #[error("category count C = {0} must exceed 1")]
    BadCategoryCount(f64),
    #[error("threshold {0} outside (0, 1)")]
    BadThreshold(f64),
    #[error("divisor {0} must be positive")]
    BadDivisor(f64),
    #[error("no probability configured for category {0}")]
    MissingCategory(MoveCategory),
}

/// Probability assigned to each move category.
pub type CategoryTable = HashMap<MoveCategory, f64>;

/// Every category a legal move can fall into.
pub fn all_categories() -> Vec<MoveCategory> {
    let victims = [
        PieceKind::Pawn,
        PieceKind::Knight,
        PieceKind::Bishop,
        PieceKind::Rook,
        PieceKind::Queen,
    ];
    let mut out = vec![MoveCategory::Check];
    out.extend(victims.iter().map(|&k| MoveCategory::CheckCapture(k)));
    out.extend(victims.iter().map(|&k| MoveCategory::Capture(k)));
    out.push(MoveCategory::Promotion);
    out.push(MoveCategory::Quiet);
    out
}

#[derive(Clone, Debug, PartialEq)]
pub enum DepthPolicy {
    /// Constant increment: classical alpha-beta.
    Uniform,
    /// `step × (1 − ΔH_category / ΔH_best)`.
    EntropyReduction(EntropyModel),
    /// `step × log P_c / log (1/C)`.
    WinandsTable {
        probabilities: CategoryTable,
        c: f64,
    },
    /// Uniform depth bookkeeping, with expansion gated on the path's realization probability.
    RealizationProbability {
        probabilities: CategoryTable,
        threshold: f64,
    },
    /// Eval-delta and branching driven increment with a reduction divisor.
    AppendixHeuristic { divisor: f64 },
}

impl DepthPolicy {
    pub fn entropy_reduction(model: EntropyModel) -> DepthPolicy {
        DepthPolicy::EntropyReduction(model)
    }

    pub fn winands(probabilities: CategoryTable, c: f64) -> Result<DepthPolicy, PolicyError> {
        if c.is_nan() || c <= 1.0 {
            return Err(PolicyError::BadCategoryCount(c));
        }
        validate_table(&probabilities)?;
        Ok(DepthPolicy::WinandsTable { probabilities, c })
    }

    pub fn realization_probability(
        probabilities: CategoryTable,
        threshold: f64,
    ) -> Result<DepthPolicy, PolicyError> {
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(PolicyError::BadThreshold(threshold));
        }
        validate_table(&probabilities)?;
        Ok(DepthPolicy::RealizationProbability {
            probabilities,
            threshold,
        })
    }

    pub fn appendix(divisor: f64) -> Result<DepthPolicy, PolicyError> {
        if !(divisor > 0.0 && divisor.is_finite()) {
            return Err(PolicyError::BadDivisor(divisor));
        }
        Ok(DepthPolicy::AppendixHeuristic { divisor })
    }

    /// Short name used in reports and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            DepthPolicy::Uniform => "uniform",
            DepthPolicy::EntropyReduction(_) => "ers",
            DepthPolicy::WinandsTable { .. } => "winands",
            DepthPolicy::RealizationProbability { .. } => "rp",
            DepthPolicy::AppendixHeuristic { .. } => "appendix",
        }
    }

    /// The reduction divisor, 1 for policies without one.
    pub fn divisor(&self) -> f64 {
        match self {
            DepthPolicy::AppendixHeuristic { divisor } => *divisor,
            _ => 1.0,
        }
    }
}

impl fmt::Display for DepthPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DepthPolicy::AppendixHeuristic { divisor } => write!(f, "appendix(divisor={divisor})"),
            DepthPolicy::WinandsTable { c, .. } => write!(f, "winands(C={c})"),
            DepthPolicy::RealizationProbability { threshold, .. } => {
                write!(f, "rp(threshold={threshold})")
            }
            other => f.write_str(other.name()),
        }
    }
}

fn validate_table(table: &CategoryTable) -> Result<(), PolicyError> {
    match table.values().find(|&&p| !(p > 0.0 && p <= 1.0)) {
        Some(&p) => Err(PolicyError::BadProbability(p)),
        None => Ok(()),
    }
}

/// Entropy removed from the position by a move of this category.
pub fn category_reduction(category: MoveCategory, m: &EntropyModel) -> f64 {
    match category {
        MoveCategory::Check | MoveCategory::CheckCapture(_) => m.best_gain(),
        MoveCategory::Capture(kind) => m.rate(kind),
        MoveCategory::Promotion => m.rate(PieceKind::Queen) - m.rate(PieceKind::Pawn),
        MoveCategory::Quiet => 0.0,
    }
}

/// `P_c = 2^ΔH / C`: the probability table under which the Winands and
/// entropy-reduction fractions coincide.
pub fn table_from_model(m: &EntropyModel, c: f64) -> CategoryTable {
    all_categories()
        .into_iter()
        .map(|cat| {
            let p = (category_reduction(cat, m).exp2() / c).min(1.0);
            (cat, p)
        })
        .collect()
}

/// `D = 1 − ΔH_category / ΔH_best`.
pub fn ers_fraction(category: MoveCategory, m: &EntropyModel) -> Result<f64, PolicyError> {
    let reduction = category_reduction(category, m);
    if reduction > m.best_gain() {
        return Err(PolicyError::ReductionExceedsBestGain {
            category,
            reduction,
            best_gain: m.best_gain(),
        });
    }
    if reduction < 0.0 {
        return Err(PolicyError::NegativeReduction {
            category,
            reduction,
        });
    }
    Ok(1.0 - reduction / m.best_gain())
}

/// `FP = log P_c / log (1/C)`.
pub fn winands_fraction(p_c: f64, c: f64) -> Result<f64, PolicyError> {
    if !(p_c > 0.0 && p_c <= 1.0) {
        return Err(PolicyError::BadProbability(p_c));
    }
    if c.is_nan() || c <= 1.0 {
        return Err(PolicyError::BadCategoryCount(c));
    }
    // -0.0 for p_c = 1 would print oddly.
    Ok((p_c.ln() / (1.0 / c).ln()).max(0.0))
}

/// Realization probability of a child: parent's times the move's, multiplied in log space.
pub fn rp_update(parent_rp: f64, p_m: f64) -> f64 {
    (parent_rp.ln() + p_m.ln()).exp()
}

/// A node is expanded while its realization probability is strictly above the threshold.
pub fn rp_should_expand(rp: f64, threshold: f64) -> bool {
    rp > threshold
}

/// `Σ log₂ p_i` over the moves of a path.
pub fn selective_extension_score(path_probs: &[f64]) -> Result<f64, PolicyError> {
    path_probs.iter().try_fold(0.0, |acc, &p| {
        if p > 0.0 && p <= 1.0 {
            Ok(acc + p.log2())
        } else {
            Err(PolicyError::BadProbability(p))
        }
    })
}

/// The hand-tuned increment: `6 − (log₁₀|0.1 + Δ/100| + 5/ln(n + 2)) / divisor`,
/// zero for moves carrying the check bonus.
pub fn appendix_increment(eval_delta: f64, move_count: usize, divisor: f64) -> f64 {
    appendix_increment_with_step(DEFAULT_STEP, eval_delta, move_count, divisor)
}

pub fn appendix_increment_with_step(
    step: f64,
    eval_delta: f64,
    move_count: usize,
    divisor: f64,
) -> f64 {
    if eval_delta > CHECK_BONUS_THRESHOLD {
        return 0.0;
    }
    let reduction = (0.1 + eval_delta / 100.0).abs().log10() + 5.0 / ((move_count + 2) as f64).ln();
    (step - reduction / divisor).max(0.0)
}

/// What the policies see about a move.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolicyContext {
    pub category: MoveCategory,
    /// Ordering score: |child eval − parent eval|, plus the check bonus.
    pub eval_delta: f64,
    /// Legal moves available at the node where the move is played.
    pub move_count: usize,
    /// Realization probability of the path up to the node where the move is played.
    pub path_rp: f64,
}

fn lookup(table: &CategoryTable, category: MoveCategory) -> Result<f64, PolicyError> {
    table
        .get(&category)
        .copied()
        .ok_or(PolicyError::MissingCategory(category))
}

/// Virtual depth charged for the move described by `ctx`; never negative.
pub fn ply_increment(
    policy: &DepthPolicy,
    ctx: &PolicyContext,
    step_scale: f64,
) -> Result<f64, PolicyError> {
    let inc = match policy {
        DepthPolicy::Uniform => step_scale,
        DepthPolicy::EntropyReduction(model) => step_scale * ers_fraction(ctx.category, model)?,
        DepthPolicy::WinandsTable { probabilities, c } => {
            step_scale * winands_fraction(lookup(probabilities, ctx.category)?, *c)?
        }
        DepthPolicy::RealizationProbability { probabilities, .. } => {
            lookup(probabilities, ctx.category)?;
            step_scale
        }
        DepthPolicy::AppendixHeuristic { divisor } => {
            appendix_increment_with_step(step_scale, ctx.eval_delta, ctx.move_count, *divisor)
        }
    };
    Ok(inc.max(0.0))
}

/// Realization probability of the child reached by the move in `ctx`, for the
/// RP policy; `None` for policies without an expansion gate.
pub fn child_rp(
    policy: &DepthPolicy,
    ctx: &PolicyContext,
) -> Result<Option<(f64, f64)>, PolicyError> {
    match policy {
        DepthPolicy::RealizationProbability {
            probabilities,
            threshold,
        } => {
            let p = lookup(probabilities, ctx.category)?;
            Ok(Some((rp_update(ctx.path_rp, p), *threshold)))
        }
        _ => Ok(None),
    }
}
