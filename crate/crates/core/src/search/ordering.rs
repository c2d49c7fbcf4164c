use crate::chess::{Move, MoveCategory, Position};
use crate::policy::CHECK_BONUS;

/// A legal move with everything the search needs to rank and charge it.
#[derive(Clone, Debug)]
pub struct ScoredMove {
    pub mv: Move,
    pub child: Position,
    pub score: i32,
    pub category: MoveCategory,
}

/// Score every child of `p`: `|child eval − prev_eval| + CHECK_BONUS·[gives check]`,
/// with evals taken from White's point of view. Sorted by descending score;
/// ties keep generation order.
pub(crate) fn score_children(
    p: &Position,
    children: Vec<(Move, Position)>,
    prev_eval: i32,
) -> Vec<ScoredMove> {
    let mut scored: Vec<ScoredMove> = children
        .into_iter()
        .map(|(mv, child)| {
            let category = p.classify_with_child(&mv, &child);
            let mut score = (child.material_white() - prev_eval).abs();
            if category.gives_check() {
                score += CHECK_BONUS;
            }
            ScoredMove {
                mv,
                child,
                score,
                category,
            }
        })
        .collect();
    // `sort_by` is stable.
    scored.sort_by_key(|s| std::cmp::Reverse(s.score));
    scored
}

/// Order legal `moves` of `p` for search. `prev_eval` is the White-perspective
/// material of the position the moves are compared against (normally `p` itself).
pub fn order_moves(p: &Position, moves: &[Move], prev_eval: i32) -> Vec<(Move, i32)> {
    let children = moves.iter().map(|m| (*m, p.apply_move(m))).collect();
    score_children(p, children, prev_eval)
        .into_iter()
        .map(|s| (s.mv, s.score))
        .collect()
}
