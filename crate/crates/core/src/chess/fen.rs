use thiserror::Error;

use super::position::Position;
use super::types::{CastlingRights, Color, Piece, PieceKind, Square};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FenError {
    #[error("expected {expected} FEN fields, found {found}")]
    FieldCount { expected: usize, found: usize },
    #[error("bad piece placement: {0}")]
    Placement(String),
    #[error("bad side to move `{0}`")]
    SideToMove(String),
    #[error("bad castling field `{0}`")]
    Castling(String),
    #[error("bad en-passant field `{0}`")]
    EnPassant(String),
    #[error("bad move counter `{0}`")]
    Counter(String),
    #[error("{color} has {count} kings")]
    KingCount { color: Color, count: usize },
    #[error("pawn on back rank at {0}")]
    PawnOnBackRank(Square),
    #[error("side not to move ({0}) is in check")]
    OpponentInCheck(Color),
    #[error("castling right `{0}` inconsistent with king/rook placement")]
    CastlingInconsistent(char),
}

impl Position {
    /// Parse a standard six-field FEN string.
    pub fn from_fen(text: &str) -> Result<Position, FenError> {
        let fields: Vec<&str> = text.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(FenError::FieldCount {
                expected: 6,
                found: fields.len(),
            });
        }
        Position::from_fen_fields(&fields[..4], fields[4], fields[5])
    }

    /// Build a position from the four board fields plus the two counters.
    /// EPD records carry only the first four fields.
    pub fn from_fen_fields(
        fields: &[&str],
        halfmove: &str,
        fullmove: &str,
    ) -> Result<Position, FenError> {
        if fields.len() != 4 {
            return Err(FenError::FieldCount {
                expected: 4,
                found: fields.len(),
            });
        }
        let board = parse_placement(fields[0])?;
        let side_to_move = match fields[1] {
            "w" => Color::White,
            "b" => Color::Black,
            other => return Err(FenError::SideToMove(other.to_string())),
        };
        let castling = parse_castling(fields[2])?;
        let en_passant = match fields[3] {
            "-" => None,
            s => Some(Square::parse(s).ok_or_else(|| FenError::EnPassant(s.to_string()))?),
        };
        let halfmove_clock = halfmove
            .parse::<u32>()
            .map_err(|_| FenError::Counter(halfmove.to_string()))?;
        let fullmove_number = fullmove
            .parse::<u32>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| FenError::Counter(fullmove.to_string()))?;

        let mut pos = Position {
            board,
            side_to_move,
            castling,
            en_passant,
            halfmove_clock,
            fullmove_number,
            kings: [Square::from_index(0); 2],
            material: 0,
        };
        validate(&pos)?;
        pos.recompute_derived();
        if pos.in_check(!side_to_move) {
            return Err(FenError::OpponentInCheck(!side_to_move));
        }
        Ok(pos)
    }

    pub fn to_fen(&self) -> String {
        format!(
            "{} {} {} {} {} {}",
            self.placement_string(),
            match self.side_to_move {
                Color::White => 'w',
                Color::Black => 'b',
            },
            self.castling,
            self.en_passant
                .map_or_else(|| "-".to_string(), |s| s.to_string()),
            self.halfmove_clock,
            self.fullmove_number
        )
    }

    /// The first four FEN fields, as used by EPD.
    pub fn to_epd_prefix(&self) -> String {
        let full = self.to_fen();
        full.split_whitespace()
            .take(4)
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn placement_string(&self) -> String {
        let mut out = String::with_capacity(72);
        for rank in (0..8).rev() {
            let mut empty = 0;
            for file in 0..8 {
                match self.board[Square::new(file, rank).index()] {
                    Some(p) => {
                        if empty > 0 {
                            out.push(char::from_digit(empty, 10).unwrap());
                            empty = 0;
                        }
                        out.push(p.to_char());
                    }
                    None => empty += 1,
                }
            }
            if empty > 0 {
                out.push(char::from_digit(empty, 10).unwrap());
            }
            if rank > 0 {
                out.push('/');
            }
        }
        out
    }
}

fn parse_placement(s: &str) -> Result<[Option<Piece>; 64], FenError> {
    let mut board = [None; 64];
    let rows: Vec<&str> = s.split('/').collect();
    if rows.len() != 8 {
        return Err(FenError::Placement(format!("{} ranks", rows.len())));
    }
    for (i, row) in rows.iter().enumerate() {
        let rank = 7 - i as u8;
        let mut file = 0u8;
        for c in row.chars() {
            if let Some(d) = c.to_digit(10) {
                if d == 0 || d > 8 {
                    return Err(FenError::Placement(format!("bad digit `{c}`")));
                }
                file += d as u8;
            } else {
                let piece = Piece::from_char(c)
                    .ok_or_else(|| FenError::Placement(format!("bad piece `{c}`")))?;
                if file >= 8 {
                    return Err(FenError::Placement(format!("rank {} overflows", rank + 1)));
                }
                board[Square::new(file, rank).index()] = Some(piece);
                file += 1;
            }
            if file > 8 {
                return Err(FenError::Placement(format!("rank {} overflows", rank + 1)));
            }
        }
        if file != 8 {
            return Err(FenError::Placement(format!(
                "rank {} has {file} files",
                rank + 1
            )));
        }
    }
    Ok(board)
}

fn parse_castling(s: &str) -> Result<CastlingRights, FenError> {
    let mut rights = CastlingRights::NONE;
    if s == "-" {
        return Ok(rights);
    }
    for c in s.chars() {
        let flag = match c {
            'K' => CastlingRights::WHITE_KING,
            'Q' => CastlingRights::WHITE_QUEEN,
            'k' => CastlingRights::BLACK_KING,
            'q' => CastlingRights::BLACK_QUEEN,
            _ => return Err(FenError::Castling(s.to_string())),
        };
        if rights.has(flag) {
            return Err(FenError::Castling(s.to_string()));
        }
        rights.set(flag);
    }
    Ok(rights)
}

fn validate(pos: &Position) -> Result<(), FenError> {
    for color in Color::BOTH {
        let count = pos
            .pieces()
            .filter(|(_, p)| *p == Piece::new(color, PieceKind::King))
            .count();
        if count != 1 {
            return Err(FenError::KingCount { color, count });
        }
    }
    if let Some((sq, _)) = pos
        .pieces()
        .find(|(sq, p)| p.kind == PieceKind::Pawn && (sq.rank() == 0 || sq.rank() == 7))
    {
        return Err(FenError::PawnOnBackRank(sq));
    }
    let has = |sq: &str, piece: Piece| pos.piece_at(Square::parse(sq).unwrap()) == Some(piece);
    let checks = [
        ('K', CastlingRights::WHITE_KING, Color::White, "e1", "h1"),
        ('Q', CastlingRights::WHITE_QUEEN, Color::White, "e1", "a1"),
        ('k', CastlingRights::BLACK_KING, Color::Black, "e8", "h8"),
        ('q', CastlingRights::BLACK_QUEEN, Color::Black, "e8", "a8"),
    ];
    for (c, flag, color, king, rook) in checks {
        if pos.castling.has(flag)
            && !(has(king, Piece::new(color, PieceKind::King))
                && has(rook, Piece::new(color, PieceKind::Rook)))
        {
            return Err(FenError::CastlingInconsistent(c));
        }
    }
    if let Some(ep) = pos.en_passant {
        // The target square sits behind a pawn that just double-pushed.
        let mover = !pos.side_to_move;
        let (target_rank, pawn_rank) = match mover {
            Color::White => (2, 3),
            Color::Black => (5, 4),
        };
        let pawn_sq = Square::new(ep.file(), pawn_rank);
        if ep.rank() != target_rank
            || pos.piece_at(ep).is_some()
            || pos.piece_at(pawn_sq) != Some(Piece::new(mover, PieceKind::Pawn))
        {
            return Err(FenError::EnPassant(ep.to_string()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_round_trip() {
        let p = Position::startpos();
        assert_eq!(p.to_fen(), Position::START_FEN);
        assert_eq!(p.piece_count(), 32);
    }

    #[test]
    fn minimal_board() {
        let p = Position::from_fen("8/8/8/8/8/8/8/K6k w - - 0 1").unwrap();
        assert_eq!(p.side_to_move(), Color::White);
        assert_eq!(p.piece_count(), 2);
    }

    type Case = (&'static str, fn(&FenError) -> bool);

    #[test]
    fn distinct_errors() {
        let cases: &[Case] = &[
            ("8/8/8/8/8/8/8/KK5k w - - 0 1", |e| {
                matches!(
                    e,
                    FenError::KingCount {
                        color: Color::White,
                        count: 2
                    }
                )
            }),
            ("8/8/8/8/8/8/8/K6k w - -", |e| {
                matches!(e, FenError::FieldCount { .. })
            }),
            ("8/8/8/8/8/8/8/K6x w - - 0 1", |e| {
                matches!(e, FenError::Placement(_))
            }),
            ("8/8/8/8/8/8/8/K6k x - - 0 1", |e| {
                matches!(e, FenError::SideToMove(_))
            }),
            ("8/8/8/8/8/8/8/K6k w Z - 0 1", |e| {
                matches!(e, FenError::Castling(_))
            }),
            ("8/8/8/8/8/8/8/K6k w - e9 0 1", |e| {
                matches!(e, FenError::EnPassant(_))
            }),
            ("8/8/8/8/8/8/8/K6k w - - x 1", |e| {
                matches!(e, FenError::Counter(_))
            }),
            ("P7/8/8/8/8/8/8/K6k w - - 0 1", |e| {
                matches!(e, FenError::PawnOnBackRank(_))
            }),
            ("k6R/8/8/8/8/8/8/K7 w - - 0 1", |e| {
                matches!(e, FenError::OpponentInCheck(Color::Black))
            }),
            ("k7/8/8/8/8/8/8/K7 w K - 0 1", |e| {
                matches!(e, FenError::CastlingInconsistent('K'))
            }),
            ("8/8/8/8/8/8/8/K7k w - - 0 1", |e| {
                matches!(e, FenError::Placement(_))
            }),
        ];
        for (fen, check) in cases {
            let err = Position::from_fen(fen).unwrap_err();
            assert!(check(&err), "{fen}: unexpected {err:?}");
        }
    }

    #[test]
    fn en_passant_requires_pawn() {
        assert!(Position::from_fen("4k3/8/8/3pP3/8/8/8/4K3 w - d6 0 2").is_ok());
        assert!(matches!(
            Position::from_fen("4k3/8/8/4P3/8/8/8/4K3 w - d6 0 2"),
            Err(FenError::EnPassant(_))
        ));
    }
}
