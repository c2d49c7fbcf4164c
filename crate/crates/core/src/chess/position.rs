//! Mailbox position representation with copy-make move application.
//!
//! `Position` is an immutable value: applying a move returns a fresh position.
//! Legal moves are produced by generating pseudo-legal moves and discarding
//! the ones that leave the mover's king attacked.

use super::types::{
    CastlingRights, Color, GameStatus, Move, MoveCategory, Piece, PieceKind, Square,
};

const KNIGHT_OFFSETS: [(i8, i8); 8] = [
    (1, 2),
    (2, 1),
    (2, -1),
    (1, -2),
    (-1, -2),
    (-2, -1),
    (-2, 1),
    (-1, 2),
];

const KING_OFFSETS: [(i8, i8); 8] = [
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

const ORTHOGONAL: [(i8, i8); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
const DIAGONAL: [(i8, i8); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

/// Complete 8×8 game state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Position {
    pub(crate) board: [Option<Piece>; 64],
    pub(crate) side_to_move: Color,
    pub(crate) castling: CastlingRights,
    pub(crate) en_passant: Option<Square>,
    pub(crate) halfmove_clock: u32,
    pub(crate) fullmove_number: u32,
    // Derived from `board`; kept in sync by `make`.
    pub(crate) kings: [Square; 2],
    pub(crate) material: i32,
}

impl Position {
    pub const START_FEN: &'static str = "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

    pub fn startpos() -> Position {
        Position::from_fen(Self::START_FEN).expect("start FEN is valid")
    }

    #[inline]
    pub fn piece_at(&self, sq: Square) -> Option<Piece> {
        self.board[sq.index()]
    }

    #[inline]
    pub fn side_to_move(&self) -> Color {
        self.side_to_move
    }

    #[inline]
    pub fn castling_rights(&self) -> CastlingRights {
        self.castling
    }

    #[inline]
    pub fn en_passant(&self) -> Option<Square> {
        self.en_passant
    }

    #[inline]
    pub fn halfmove_clock(&self) -> u32 {
        self.halfmove_clock
    }

    #[inline]
    pub fn fullmove_number(&self) -> u32 {
        self.fullmove_number
    }

    #[inline]
    pub fn king_square(&self, color: Color) -> Square {
        self.kings[color.index()]
    }

    /// Occupied squares with their pieces, in square order.
    pub fn pieces(&self) -> impl Iterator<Item = (Square, Piece)> + '_ {
        self.board
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (Square::from_index(i), p)))
    }

    pub fn piece_count(&self) -> usize {
        self.board.iter().filter(|p| p.is_some()).count()
    }

    /// Material balance from White's point of view, in centipawns.
    #[inline]
    pub fn material_white(&self) -> i32 {
        self.material
    }

    /// Material balance from the side to move's point of view.
    #[inline]
    pub fn material_eval(&self) -> i32 {
        self.material * self.side_to_move.sign()
    }

    pub(crate) fn recompute_derived(&mut self) {
        let mut material = 0;
        for (sq, p) in self.pieces().collect::<Vec<_>>() {
            material += p.kind.weight() * p.color.sign();
            if p.kind == PieceKind::King {
                self.kings[p.color.index()] = sq;
            }
        }
        self.material = material;
    }

    /// True iff `sq` is attacked by any piece of color `by`.
    pub fn is_attacked(&self, sq: Square, by: Color) -> bool {
        // A pawn of `by` attacks sq from one rank behind (relative to its direction).
        let back = -by.forward();
        for df in [-1, 1] {
            if let Some(s) = sq.offset(df, back) {
                if self.board[s.index()] == Some(Piece::new(by, PieceKind::Pawn)) {
                    return true;
                }
            }
        }
        for (df, dr) in KNIGHT_OFFSETS {
            if let Some(s) = sq.offset(df, dr) {
                if self.board[s.index()] == Some(Piece::new(by, PieceKind::Knight)) {
                    return true;
                }
            }
        }
        for (df, dr) in KING_OFFSETS {
            if let Some(s) = sq.offset(df, dr) {
                if self.board[s.index()] == Some(Piece::new(by, PieceKind::King)) {
                    return true;
                }
            }
        }
        self.ray_hits(sq, by, &ORTHOGONAL, PieceKind::Rook)
            || self.ray_hits(sq, by, &DIAGONAL, PieceKind::Bishop)
    }

    fn ray_hits(&self, sq: Square, by: Color, dirs: &[(i8, i8)], slider: PieceKind) -> bool {
        for &(df, dr) in dirs {
            let mut cur = sq;
            while let Some(next) = cur.offset(df, dr) {
                if let Some(p) = self.board[next.index()] {
                    if p.color == by && (p.kind == slider || p.kind == PieceKind::Queen) {
                        return true;
                    }
                    break;
                }
                cur = next;
            }
        }
        false
    }

    /// True iff `color`'s king is attacked.
    #[inline]
    pub fn in_check(&self, color: Color) -> bool {
        self.is_attacked(self.kings[color.index()], !color)
    }

    /// True iff the side to move is in check.
    #[inline]
    pub fn is_check(&self) -> bool {
        self.in_check(self.side_to_move)
    }

    /// Pseudo-legal moves: obey piece movement but may leave the king attacked.
    pub(crate) fn pseudo_moves(&self, out: &mut Vec<Move>) {
        let us = self.side_to_move;
        for i in 0..64 {
            let Some(p) = self.board[i] else { continue };
            if p.color != us {
                continue;
            }
            let from = Square::from_index(i);
            match p.kind {
                PieceKind::Pawn => self.pawn_moves(from, out),
                PieceKind::Knight => self.step_moves(from, &KNIGHT_OFFSETS, out),
                PieceKind::Bishop => self.slide_moves(from, &DIAGONAL, out),
                PieceKind::Rook => self.slide_moves(from, &ORTHOGONAL, out),
                PieceKind::Queen => {
                    self.slide_moves(from, &ORTHOGONAL, out);
                    self.slide_moves(from, &DIAGONAL, out);
                }
                PieceKind::King => {
                    self.step_moves(from, &KING_OFFSETS, out);
                    self.castle_moves(from, out);
                }
            }
        }
    }

    fn push_target(&self, from: Square, to: Square, out: &mut Vec<Move>) -> bool {
        match self.board[to.index()] {
            None => {
                out.push(Move::quiet(from, to));
                true
            }
            Some(q) if q.color != self.side_to_move => {
                out.push(Move {
                    is_capture: true,
                    ..Move::quiet(from, to)
                });
                false
            }
            Some(_) => false,
        }
    }

    fn step_moves(&self, from: Square, offsets: &[(i8, i8)], out: &mut Vec<Move>) {
        for &(df, dr) in offsets {
            if let Some(to) = from.offset(df, dr) {
                self.push_target(from, to, out);
            }
        }
    }

    fn slide_moves(&self, from: Square, dirs: &[(i8, i8)], out: &mut Vec<Move>) {
        for &(df, dr) in dirs {
            let mut cur = from;
            while let Some(to) = cur.offset(df, dr) {
                if !self.push_target(from, to, out) {
                    break;
                }
                cur = to;
            }
        }
    }

    fn pawn_moves(&self, from: Square, out: &mut Vec<Move>) {
        let us = self.side_to_move;
        let fwd = us.forward();
        let last_rank = match us {
            Color::White => 7,
            Color::Black => 0,
        };
        let start_rank = match us {
            Color::White => 1,
            Color::Black => 6,
        };
        let push = |m: Move, out: &mut Vec<Move>| {
            if m.to.rank() == last_rank {
                for k in PieceKind::PROMOTIONS {
                    out.push(Move {
                        promotion: Some(k),
                        ..m
                    });
                }
            } else {
                out.push(m);
            }
        };
        if let Some(one) = from.offset(0, fwd) {
            if self.board[one.index()].is_none() {
                push(Move::quiet(from, one), out);
                if from.rank() == start_rank {
                    let two = one.offset(0, fwd).expect("double push stays on board");
                    if self.board[two.index()].is_none() {
                        out.push(Move::quiet(from, two));
                    }
                }
            }
        }
        for df in [-1, 1] {
            let Some(to) = from.offset(df, fwd) else {
                continue;
            };
            match self.board[to.index()] {
                Some(q) if q.color != us => push(
                    Move {
                        is_capture: true,
                        ..Move::quiet(from, to)
                    },
                    out,
                ),
                None if self.en_passant == Some(to) => out.push(Move {
                    is_capture: true,
                    is_en_passant: true,
                    ..Move::quiet(from, to)
                }),
                _ => {}
            }
        }
    }

    fn castle_moves(&self, from: Square, out: &mut Vec<Move>) {
        let us = self.side_to_move;
        let home = match us {
            Color::White => Square::new(4, 0),
            Color::Black => Square::new(4, 7),
        };
        if from != home || self.is_attacked(home, !us) {
            return;
        }
        let r = home.rank();
        let empty = |files: &[u8]| {
            files
                .iter()
                .all(|&f| self.board[Square::new(f, r).index()].is_none())
        };
        let safe = |files: &[u8]| {
            files
                .iter()
                .all(|&f| !self.is_attacked(Square::new(f, r), !us))
        };
        if self.castling.has(CastlingRights::kingside(us)) && empty(&[5, 6]) && safe(&[5, 6]) {
            out.push(Move {
                is_castle: true,
                ..Move::quiet(home, Square::new(6, r))
            });
        }
        if self.castling.has(CastlingRights::queenside(us)) && empty(&[1, 2, 3]) && safe(&[2, 3]) {
            out.push(Move {
                is_castle: true,
                ..Move::quiet(home, Square::new(2, r))
            });
        }
    }

    /// Apply a pseudo-legal move without any legality checking.
    pub(crate) fn make(&self, m: Move) -> Position {
        let us = self.side_to_move;
        let mut next = self.clone();
        let moving = self.board[m.from.index()].expect("move from an empty square");
        let captured = if m.is_en_passant {
            let victim = Square::new(m.to.file(), m.from.rank());
            next.board[victim.index()] = None;
            Some(PieceKind::Pawn)
        } else {
            self.board[m.to.index()].map(|p| p.kind)
        };

        next.board[m.from.index()] = None;
        let placed = match m.promotion {
            Some(k) => Piece::new(us, k),
            None => moving,
        };
        next.board[m.to.index()] = Some(placed);

        if m.is_castle {
            let r = m.from.rank();
            let (rook_from, rook_to) = if m.to.file() == 6 { (7, 5) } else { (0, 3) };
            next.board[Square::new(rook_from, r).index()] = None;
            next.board[Square::new(rook_to, r).index()] = Some(Piece::new(us, PieceKind::Rook));
        }
        if moving.kind == PieceKind::King {
            next.kings[us.index()] = m.to;
        }

        next.castling.clear(
            CastlingRights::lost_by_touching(m.from) | CastlingRights::lost_by_touching(m.to),
        );

        next.en_passant = None;
        if moving.kind == PieceKind::Pawn && m.from.rank().abs_diff(m.to.rank()) == 2 {
            next.en_passant = Some(Square::new(
                m.from.file(),
                (m.from.rank() + m.to.rank()) / 2,
            ));
        }

        if moving.kind == PieceKind::Pawn || captured.is_some() {
            next.halfmove_clock = 0;
        } else {
            next.halfmove_clock += 1;
        }
        if us == Color::Black {
            next.fullmove_number += 1;
        }

        let mut delta = 0;
        if let Some(k) = captured {
            delta += k.weight();
        }
        if let Some(k) = m.promotion {
            delta += k.weight() - PieceKind::Pawn.weight();
        }
        next.material += delta * us.sign();
        next.side_to_move = !us;
        next
    }

    /// Legal moves in generation order: from-square, then to-square, then promotion kind.
    pub fn legal_moves(&self) -> Vec<Move> {
        self.legal_children().into_iter().map(|(m, _)| m).collect()
    }

    /// Legal moves paired with the positions they lead to, in generation order.
    pub fn legal_children(&self) -> Vec<(Move, Position)> {
        let mut pseudo = Vec::with_capacity(64);
        self.pseudo_moves(&mut pseudo);
        let us = self.side_to_move;
        let mut children: Vec<(Move, Position)> = pseudo
            .into_iter()
            .filter_map(|m| {
                let child = self.make(m);
                (!child.in_check(us)).then_some((m, child))
            })
            .collect();
        children.sort_by_key(|(m, _)| m.order_key());
        children
    }

    /// True iff the side to move has at least one legal move. Stops at the first one found.
    pub fn has_legal_move(&self) -> bool {
        let mut pseudo = Vec::with_capacity(64);
        self.pseudo_moves(&mut pseudo);
        let us = self.side_to_move;
        pseudo.into_iter().any(|m| !self.make(m).in_check(us))
    }

    pub fn is_legal(&self, m: &Move) -> bool {
        self.legal_moves().contains(m)
    }

    /// Apply a legal move.
    ///
    /// Panics if `m` does not move a piece of the side to move; full legality is
    /// only checked in debug builds.
    pub fn apply_move(&self, m: &Move) -> Position {
        let p = self.board[m.from.index()];
        assert!(
            p.is_some_and(|p| p.color == self.side_to_move),
            "illegal move {m}: no piece of the side to move on {}",
            m.from
        );
        debug_assert!(self.is_legal(m), "illegal move {m} in {}", self.to_fen());
        self.make(*m)
    }

    /// Apply `m` if it is legal in this position.
    pub fn try_apply_move(&self, m: &Move) -> Option<Position> {
        self.is_legal(m).then(|| self.make(*m))
    }

    pub fn game_status(&self) -> GameStatus {
        if self.has_legal_move() {
            GameStatus::Ongoing
        } else if self.is_check() {
            GameStatus::Checkmate
        } else {
            GameStatus::Stalemate
        }
    }

    /// Kind of the piece `m` captures, if any. En-passant victims are pawns.
    #[inline]
    pub fn captured_kind(&self, m: &Move) -> Option<PieceKind> {
        if m.is_en_passant {
            Some(PieceKind::Pawn)
        } else {
            self.board[m.to.index()].map(|p| p.kind)
        }
    }

    /// Classify `m` given the position `child` it leads to.
    pub fn classify_with_child(&self, m: &Move, child: &Position) -> MoveCategory {
        let check = child.is_check();
        match (check, self.captured_kind(m)) {
            (true, Some(k)) => MoveCategory::CheckCapture(k),
            (true, None) => MoveCategory::Check,
            (false, Some(k)) => MoveCategory::Capture(k),
            (false, None) if m.promotion.is_some() => MoveCategory::Promotion,
            (false, None) => MoveCategory::Quiet,
        }
    }

    pub fn classify_move(&self, m: &Move) -> MoveCategory {
        self.classify_with_child(m, &self.make(*m))
    }

    /// Number of leaf nodes of the legal move tree at exactly `depth`.
    pub fn perft(&self, depth: u32) -> u64 {
        match depth {
            0 => 1,
            1 => self.legal_children().len() as u64,
            _ => self
                .legal_children()
                .iter()
                .map(|(_, child)| child.perft(depth - 1))
                .sum(),
        }
    }
}
