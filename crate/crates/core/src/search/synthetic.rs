//! Uniform synthetic game trees for checking alpha-beta against Knuth's
//! best-case leaf count and against plain minimax.

use super::SearchError;

/// Largest tree `brute_minimax` and `synthetic_alphabeta` will enumerate.
pub const MAX_ENUMERATED_LEAVES: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeOrdering {
    /// Best child first at every node.
    Perfect,
    /// Children shuffled with the given seed.
    Random(u64),
    /// Worst child first at every node.
    Worst,
}

/// A complete `branching`-ary tree of height `depth` whose leaf values are a
/// deterministic function of `seed`. Leaf values are pairwise distinct.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SyntheticTree {
    pub branching: usize,
    pub depth: u32,
    pub seed: u64,
    pub ordering: TreeOrdering,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SyntheticOutcome {
    pub value: i64,
    pub leaf_count: u64,
    pub node_count: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl SyntheticTree {
    pub fn new(
        branching: usize,
        depth: u32,
        seed: u64,
        ordering: TreeOrdering,
    ) -> Result<SyntheticTree, SearchError> {
        if branching < 2 {
            return Err(SearchError::InvalidParams(format!(
                "branching must be at least 2, got {branching}"
            )));
        }
        Ok(SyntheticTree {
            branching,
            depth,
            seed,
            ordering,
        })
    }

    /// Number of leaves, `b^n`.
    pub fn leaves(&self) -> u128 {
        (self.branching as u128).saturating_pow(self.depth)
    }

    fn check_size(&self) -> Result<usize, SearchError> {
        if self.branching < 2 {
            return Err(SearchError::InvalidParams(format!(
                "branching must be at least 2, got {}",
                self.branching
            )));
        }
        let leaves = self.leaves();
        if leaves > MAX_ENUMERATED_LEAVES as u128 {
            return Err(SearchError::TooLarge {
                leaves,
                limit: MAX_ENUMERATED_LEAVES,
            });
        }
        Ok(leaves as usize)
    }

    /// Merit rank (0 = worst for the mover) of child `child` of node `index`
    /// on `level`: a seeded permutation of `0..b`.
    fn rank(&self, level: u32, index: u64, child: usize) -> u64 {
        let b = self.branching;
        let mut perm: Vec<u64> = (0..b as u64).collect();
        let mut state = splitmix64(self.seed ^ splitmix64(((level as u64) << 48) ^ index));
        for i in (1..b).rev() {
            state = splitmix64(state);
            perm.swap(i, (state % (i as u64 + 1)) as usize);
        }
        perm[child]
    }

    /// Value of leaf `index` (in natural order) for the side to move at the leaf.
    ///
    /// Every move carries a seeded merit rank; the root-perspective leaf value
    /// reads the ranks along the path as digits in base `b + 1`, signed by
    /// whose move it was. Higher levels dominate, so values are pairwise
    /// distinct and each node's best child is the one with the highest rank.
    pub fn leaf_value(&self, index: u64) -> i64 {
        let b = self.branching as u64;
        let base = b as i64 + 1;
        let mut digits = Vec::with_capacity(self.depth as usize);
        let mut node = index;
        for _ in 0..self.depth {
            digits.push((node % b) as usize);
            node /= b;
        }
        // digits[k] is the child taken at level depth-1-k; walk top-down.
        let mut value = 0i64;
        let mut parent = 0u64;
        for level in 0..self.depth {
            let child = digits[(self.depth - 1 - level) as usize];
            let r = self.rank(level, parent, child) as i64;
            let signed = if level % 2 == 0 { r } else { -r };
            value = value * base + signed;
            parent = parent * b + child as u64;
        }
        if self.depth.is_multiple_of(2) {
            value
        } else {
            -value
        }
    }
}

/// Node values of every level, computed bottom-up in natural order.
/// `levels[l][i]` is the negamax value of node `i` on level `l`.
fn level_values(t: &SyntheticTree, leaves: usize) -> Vec<Vec<i64>> {
    let b = t.branching;
    let mut levels = vec![(0..leaves as u64)
        .map(|i| t.leaf_value(i))
        .collect::<Vec<_>>()];
    for _ in 0..t.depth {
        let below = levels.last().expect("non-empty");
        let up = below
            .chunks(b)
            .map(|c| c.iter().map(|v| -v).max().expect("b >= 2"))
            .collect();
        levels.push(up);
    }
    levels.reverse();
    levels
}

/// Visiting order of the children of node `index` on `level`.
fn child_order(t: &SyntheticTree, levels: &[Vec<i64>], level: usize, index: usize) -> Vec<usize> {
    let b = t.branching;
    let first = index * b;
    let mut order: Vec<usize> = (first..first + b).collect();
    let child_values = &levels[level + 1];
    match t.ordering {
        // The parent wants the child whose own value is lowest.
        TreeOrdering::Perfect => order.sort_by_key(|&c| child_values[c]),
        TreeOrdering::Worst => order.sort_by_key(|&c| std::cmp::Reverse(child_values[c])),
        TreeOrdering::Random(seed) => {
            let mut state = splitmix64(seed ^ splitmix64(((level as u64) << 40) ^ index as u64));
            for i in (1..order.len()).rev() {
                state = splitmix64(state);
                order.swap(i, (state % (i as u64 + 1)) as usize);
            }
        }
    }
    order
}

struct AlphaBeta<'a> {
    tree: &'a SyntheticTree,
    levels: Vec<Vec<i64>>,
    leaves: u64,
    nodes: u64,
}

impl AlphaBeta<'_> {
    fn visit(&mut self, level: usize, index: usize, mut alpha: i64, beta: i64) -> i64 {
        self.nodes += 1;
        if level == self.tree.depth as usize {
            self.leaves += 1;
            return self.levels[level][index];
        }
        let mut best = i64::MIN + 1;
        for c in child_order(self.tree, &self.levels, level, index) {
            let v = -self.visit(level + 1, c, -beta, -alpha);
            best = best.max(v);
            alpha = alpha.max(v);
            if alpha >= beta {
                break;
            }
        }
        best
    }
}

/// Fail-soft alpha-beta over the tree in its configured child order.
pub fn synthetic_alphabeta(t: &SyntheticTree) -> Result<SyntheticOutcome, SearchError> {
    let leaves = t.check_size()?;
    let mut ab = AlphaBeta {
        tree: t,
        levels: level_values(t, leaves),
        leaves: 0,
        nodes: 0,
    };
    let value = ab.visit(0, 0, i64::MIN + 1, i64::MAX);
    Ok(SyntheticOutcome {
        value,
        leaf_count: ab.leaves,
        node_count: ab.nodes,
    })
}

/// Full negamax without pruning, in natural child order.
pub fn brute_minimax(t: &SyntheticTree) -> Result<i64, SearchError> {
    fn rec(t: &SyntheticTree, height: u32, index: u64) -> i64 {
        if height == 0 {
            return t.leaf_value(index);
        }
        let b = t.branching as u64;
        (0..b)
            .map(|k| -rec(t, height - 1, index * b + k))
            .max()
            .expect("b >= 2")
    }
    t.check_size()?;
    Ok(rec(t, t.depth, 0))
}

/// Leaves examined by alpha-beta on a perfectly ordered uniform tree:
/// `b^⌊n/2⌋ + b^⌈n/2⌉ − 1`.
pub fn knuth_best_case(b: u64, n: u32) -> Result<u64, SearchError> {
    if b < 2 || n < 1 {
        return Err(SearchError::InvalidParams(format!(
            "need b >= 2 and n >= 1, got b={b}, n={n}"
        )));
    }
    let overflow = || SearchError::Overflow {
        what: format!("knuth_best_case({b}, {n})"),
    };
    let lo = b.checked_pow(n / 2).ok_or_else(overflow)?;
    let hi = b.checked_pow(n.div_ceil(2)).ok_or_else(overflow)?;
    Ok(lo.checked_add(hi).ok_or_else(overflow)? - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(b: usize, n: u32, ordering: TreeOrdering) -> SyntheticTree {
        SyntheticTree::new(b, n, 7, ordering).unwrap()
    }

    #[test]
    fn knuth_examples() {
        assert_eq!(knuth_best_case(2, 2).unwrap(), 3);
        assert_eq!(knuth_best_case(4, 6).unwrap(), 127);
        assert_eq!(knuth_best_case(5, 6).unwrap(), 249);
        assert_eq!(knuth_best_case(3, 1).unwrap(), 3);
        assert!(matches!(
            knuth_best_case(2, 200),
            Err(SearchError::Overflow { .. })
        ));
        assert!(knuth_best_case(1, 3).is_err());
    }

    #[test]
    fn perfect_and_worst_counts() {
        assert_eq!(
            synthetic_alphabeta(&tree(2, 2, TreeOrdering::Perfect))
                .unwrap()
                .leaf_count,
            3
        );
        assert_eq!(
            synthetic_alphabeta(&tree(5, 6, TreeOrdering::Perfect))
                .unwrap()
                .leaf_count,
            249
        );
        assert_eq!(
            synthetic_alphabeta(&tree(3, 4, TreeOrdering::Worst))
                .unwrap()
                .leaf_count,
            81
        );
    }

    #[test]
    fn single_leaf() {
        let t = tree(3, 0, TreeOrdering::Perfect);
        assert_eq!(brute_minimax(&t).unwrap(), t.leaf_value(0));
        assert_eq!(synthetic_alphabeta(&t).unwrap().leaf_count, 1);
    }

    #[test]
    fn ordering_does_not_change_value() {
        let values: Vec<i64> = [
            TreeOrdering::Perfect,
            TreeOrdering::Worst,
            TreeOrdering::Random(3),
        ]
        .into_iter()
        .map(|o| synthetic_alphabeta(&tree(3, 5, o)).unwrap().value)
        .collect();
        assert!(values
            .iter()
            .all(|&v| v == brute_minimax(&tree(3, 5, TreeOrdering::Perfect)).unwrap()));
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            brute_minimax(&tree(10, 8, TreeOrdering::Perfect)),
            Err(SearchError::TooLarge { .. })
        ));
    }
}
