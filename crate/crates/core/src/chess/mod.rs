//! Chess rules: positions, legal move generation, move classification and
//! the material-only evaluation.

mod fen;
mod position;
mod san;
mod types;

pub use fen::FenError;
pub use position::Position;
pub use san::MoveParseError;
pub use types::{CastlingRights, Color, GameStatus, Move, MoveCategory, Piece, PieceKind, Square};

pub fn parse_fen(text: &str) -> Result<Position, FenError> {
    Position::from_fen(text)
}

pub fn to_fen(p: &Position) -> String {
    p.to_fen()
}

pub fn generate_legal_moves(p: &Position) -> Vec<Move> {
    p.legal_moves()
}

pub fn apply_move(p: &Position, m: &Move) -> Position {
    p.apply_move(m)
}

pub fn in_check(p: &Position, c: Color) -> bool {
    p.in_check(c)
}

pub fn game_status(p: &Position) -> GameStatus {
    p.game_status()
}

pub fn classify_move(p: &Position, m: &Move) -> MoveCategory {
    p.classify_move(m)
}

/// Material balance in centipawns from the side to move's perspective.
pub fn material_eval(p: &Position) -> i32 {
    p.material_eval()
}

pub fn perft(p: &Position, depth: u32) -> u64 {
    p.perft(depth)
}
