//! Piece entropy rates and the entropy of a position.
//!
//! The entropy of a position is modelled as the sum of the entropy rates of
//! the pieces on the board. Rates come either from the asymptotic table
//! (log₂ of the edge-free move count on an 8×8 board) or from exact random
//! walks on finite N×N mobility graphs. All quantities are in bits; the depth
//! policies only use ratios of them, which do not depend on the log base.

mod graph;

use thiserror::Error;

use crate::chess::{PieceKind, Position};

pub use graph::{
    build_mobility_graph, entropy_rate, stationary_distribution, Distribution, MobilityGraph,
    TransitionMatrix,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EntropyError {
    #[error(
        "pawn moves are not symmetric; its rate is a model parameter, not a random-walk result"
    )]
    PawnNotSymmetric,
    #[error("board size {0} is too small (need n >= 3)")]
    BoardTooSmall(usize),
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("graph has no positive-weight edges")]
    NoEdges,
    #[error("node {node} out of range for {n_nodes} nodes")]
    NodeOutOfRange { node: usize, n_nodes: usize },
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("edge ({a}, {b}) listed twice")]
    DuplicateEdge { a: usize, b: usize },
    #[error("edge ({a}, {b}) has invalid weight {weight}")]
    BadWeight { a: usize, b: usize, weight: f64 },
    #[error("node {0} has no outgoing weight")]
    IsolatedNode(usize),
    #[error("graph is disconnected: {} components of sizes {sizes:?} (first nodes {first_nodes:?}); select one with `subgraph`", sizes.len())]
    Disconnected {
        sizes: Vec<usize>,
        first_nodes: Vec<usize>,
    },
    #[error("invalid entropy model: {0}")]
    InvalidModel(String),
    #[error("heuristic efficiency needs at least one node")]
    ZeroNodes,
    #[error("csv output failed: {0}")]
    Csv(String),
}

impl From<csv::Error> for EntropyError {
    fn from(e: csv::Error) -> Self {
        EntropyError::Csv(e.to_string())
    }
}

/// log₂ 3: a pawn's forward step plus its two capture directions.
pub const DEFAULT_PAWN_RATE: f64 = 1.584_962_500_721_156_3;

/// log₂ 30: the reference entropy reduction assigned to a check.
pub fn default_best_gain() -> f64 {
    30f64.log2()
}

/// Asymptotic entropy rate of a piece, in bits. Pawns have none.
pub fn asymptotic_rate(kind: PieceKind) -> Result<f64, EntropyError> {
    let moves: f64 = match kind {
        PieceKind::King | PieceKind::Knight => 8.0,
        PieceKind::Bishop | PieceKind::Rook => 14.0,
        PieceKind::Queen => 28.0,
        PieceKind::Pawn => return Err(EntropyError::PawnNotSymmetric),
    };
    Ok(moves.log2())
}

/// Exact entropy rate of `kind` walking on an empty `n`×`n` board.
///
/// Disconnected graphs (bishops, knights on 3×3) are averaged over their
/// components weighted by edge weight, which is the rate of the
/// degree-proportional stationary walk.
pub fn exact_rate(kind: PieceKind, n: usize) -> Result<f64, EntropyError> {
    MobilityGraph::for_piece(kind, n)?.mixture_entropy_rate()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateMode {
    Asymptotic,
    ExactFinite(usize),
}

/// Per-piece entropy rates and the reference reduction of the best move category.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyModel {
    rates: [f64; 6],
    best_gain: f64,
    mode: RateMode,
}

impl EntropyModel {
    pub fn asymptotic() -> EntropyModel {
        let mut rates = [DEFAULT_PAWN_RATE; 6];
        for kind in PieceKind::ALL.into_iter().filter(|&k| k != PieceKind::Pawn) {
            rates[kind.index()] = asymptotic_rate(kind).expect("non-pawn");
        }
        EntropyModel {
            rates,
            best_gain: default_best_gain(),
            mode: RateMode::Asymptotic,
        }
    }

    pub fn exact(n: usize) -> Result<EntropyModel, EntropyError> {
        let mut rates = [DEFAULT_PAWN_RATE; 6];
        for kind in PieceKind::ALL.into_iter().filter(|&k| k != PieceKind::Pawn) {
            rates[kind.index()] = exact_rate(kind, n)?;
        }
        EntropyModel {
            rates,
            best_gain: default_best_gain(),
            mode: RateMode::ExactFinite(n),
        }
        .validated()
    }

    pub fn with_mode(mode: RateMode) -> Result<EntropyModel, EntropyError> {
        match mode {
            RateMode::Asymptotic => Ok(EntropyModel::asymptotic()),
            RateMode::ExactFinite(n) => EntropyModel::exact(n),
        }
    }

    pub fn with_pawn_rate(mut self, rate: f64) -> Result<EntropyModel, EntropyError> {
        self.rates[PieceKind::Pawn.index()] = rate;
        self.validated()
    }

    pub fn with_best_gain(mut self, best_gain: f64) -> Result<EntropyModel, EntropyError> {
        self.best_gain = best_gain;
        self.validated()
    }

    fn validated(self) -> Result<EntropyModel, EntropyError> {
        if let Some(k) = PieceKind::ALL
            .into_iter()
            .find(|k| !(self.rates[k.index()] > 0.0 && self.rates[k.index()].is_finite()))
        {
            return Err(EntropyError::InvalidModel(format!(
                "{k} rate must be positive, got {}",
                self.rates[k.index()]
            )));
        }
        let max_rate = self.rates.iter().copied().fold(0.0, f64::max);
        if self.best_gain.is_nan() || self.best_gain < max_rate {
            return Err(EntropyError::InvalidModel(format!(
                "best_gain {} is below the largest piece rate {max_rate}",
                self.best_gain
            )));
        }
        Ok(self)
    }

    #[inline]
    pub fn rate(&self, kind: PieceKind) -> f64 {
        self.rates[kind.index()]
    }

    pub fn best_gain(&self) -> f64 {
        self.best_gain
    }

    pub fn mode(&self) -> RateMode {
        self.mode
    }

    /// Sum of the rates of every piece on the board.
    pub fn position_entropy(&self, p: &Position) -> f64 {
        p.pieces().map(|(_, piece)| self.rate(piece.kind)).sum()
    }

    /// `H(before) − H(after)`, computed from the change in piece counts so
    /// that a single capture yields exactly the captured piece's rate.
    pub fn info_gain(&self, before: &Position, after: &Position) -> f64 {
        let mut diff = [0i64; 6];
        for (_, piece) in before.pieces() {
            diff[piece.kind.index()] += 1;
        }
        for (_, piece) in after.pieces() {
            diff[piece.kind.index()] -= 1;
        }
        diff.iter()
            .zip(self.rates)
            .filter(|(&d, _)| d != 0)
            .fold(0.0, |acc, (&d, rate)| acc + d as f64 * rate)
    }
}

impl Default for EntropyModel {
    fn default() -> Self {
        EntropyModel::asymptotic()
    }
}

pub fn position_entropy(p: &Position, m: &EntropyModel) -> f64 {
    m.position_entropy(p)
}

pub fn info_gain(before: &Position, after: &Position, m: &EntropyModel) -> f64 {
    m.info_gain(before, after)
}

/// Information gained per node expanded.
pub fn heuristic_efficiency(delta_h: f64, delta_nodes: u64) -> Result<f64, EntropyError> {
    if delta_nodes == 0 {
        return Err(EntropyError::ZeroNodes);
    }
    Ok(delta_h / delta_nodes as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asymptotic_table() {
        assert_eq!(asymptotic_rate(PieceKind::King).unwrap(), 3.0);
        assert_eq!(asymptotic_rate(PieceKind::Knight).unwrap(), 3.0);
        assert!((asymptotic_rate(PieceKind::Queen).unwrap() - 4.807_354_922_057_604).abs() < 1e-12);
        assert!(
            (asymptotic_rate(PieceKind::Bishop).unwrap() - 3.807_354_922_057_604).abs() < 1e-12
        );
        assert_eq!(
            asymptotic_rate(PieceKind::Pawn),
            Err(EntropyError::PawnNotSymmetric)
        );
        assert!((DEFAULT_PAWN_RATE - 3f64.log2()).abs() < 1e-15);
    }

    #[test]
    fn two_kings_is_six_bits() {
        let p = Position::from_fen("8/8/8/8/8/8/8/K6k w - - 0 1").unwrap();
        assert_eq!(position_entropy(&p, &EntropyModel::asymptotic()), 6.0);
    }

    #[test]
    fn model_validation() {
        let m = EntropyModel::asymptotic();
        assert!(m.clone().with_best_gain(4.0).is_err());
        assert!(m.clone().with_pawn_rate(0.0).is_err());
        assert!(m.clone().with_pawn_rate(2.0).is_ok());
        assert_eq!(m.mode(), RateMode::Asymptotic);
    }

    #[test]
    fn exact_model_rates_below_table() {
        let exact = EntropyModel::exact(8).unwrap();
        let table = EntropyModel::asymptotic();
        for k in [
            PieceKind::King,
            PieceKind::Knight,
            PieceKind::Bishop,
            PieceKind::Rook,
            PieceKind::Queen,
        ] {
            assert!(exact.rate(k) <= table.rate(k) + 1e-12, "{k}");
        }
        assert!((exact.rate(PieceKind::Rook) - 14f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn efficiency() {
        assert_eq!(heuristic_efficiency(3.0, 1).unwrap(), 3.0);
        assert!(
            (heuristic_efficiency(28f64.log2(), 2).unwrap() - 2.403_677_461_028_802).abs() < 1e-12
        );
        assert_eq!(heuristic_efficiency(0.0, 1000).unwrap(), 0.0);
        assert_eq!(heuristic_efficiency(1.0, 0), Err(EntropyError::ZeroNodes));
    }
}
