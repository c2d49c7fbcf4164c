//! Standard algebraic notation.

use thiserror::Error;

use super::position::Position;
use super::types::{Move, PieceKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveParseError {
    #[error("`{0}` does not match any legal move")]
    NoMatch(String),
    #[error("`{0}` is ambiguous")]
    Ambiguous(String),
}

impl Position {
    /// SAN for a legal move, including the `+`/`#` suffix.
    pub fn san(&self, m: &Move) -> String {
        let mut s = self.san_body(m, &self.legal_moves());
        let child = self.make(*m);
        if child.is_check() {
            s.push(if child.has_legal_move() { '+' } else { '#' });
        }
        s
    }

    fn san_body(&self, m: &Move, legal: &[Move]) -> String {
        if m.is_castle {
            return if m.to.file() == 6 {
                "O-O".into()
            } else {
                "O-O-O".into()
            };
        }
        let piece = self.piece_at(m.from).expect("move from occupied square");
        let mut s = String::new();
        if piece.kind == PieceKind::Pawn {
            if m.is_capture {
                s.push((b'a' + m.from.file()) as char);
            }
        } else {
            s.push(piece.kind.letter().to_ascii_uppercase());
            let rivals: Vec<&Move> = legal
                .iter()
                .filter(|o| {
                    o.to == m.to
                        && o.from != m.from
                        && self.piece_at(o.from).map(|p| p.kind) == Some(piece.kind)
                })
                .collect();
            if !rivals.is_empty() {
                let same_file = rivals.iter().any(|o| o.from.file() == m.from.file());
                let same_rank = rivals.iter().any(|o| o.from.rank() == m.from.rank());
                if !same_file {
                    s.push((b'a' + m.from.file()) as char);
                } else if !same_rank {
                    s.push((b'1' + m.from.rank()) as char);
                } else {
                    s.push_str(&m.from.to_string());
                }
            }
        }
        if m.is_capture {
            s.push('x');
        }
        s.push_str(&m.to.to_string());
        if let Some(k) = m.promotion {
            s.push('=');
            s.push(k.letter().to_ascii_uppercase());
        }
        s
    }

    /// Resolve a move written in SAN (with or without check suffixes and
    /// annotations) or in coordinate notation.
    pub fn parse_move(&self, text: &str) -> Result<Move, MoveParseError> {
        let legal = self.legal_moves();
        let cleaned: String = text
            .trim()
            .trim_end_matches(['+', '#', '!', '?'])
            .replace('0', "O");
        let hits: Vec<Move> = legal
            .iter()
            .copied()
            .filter(|m| {
                let body = self.san_body(m, &legal);
                body == cleaned || body.replace('=', "") == cleaned || m.uci() == text.trim()
            })
            .collect();
        match hits.as_slice() {
            [m] => Ok(*m),
            [] => Err(MoveParseError::NoMatch(text.to_string())),
            _ => Err(MoveParseError::Ambiguous(text.to_string())),
        }
    }

    /// Render a line of moves from this position in SAN with move numbers.
    pub fn san_line(&self, line: &[Move]) -> String {
        let mut pos = self.clone();
        let mut out = Vec::with_capacity(line.len());
        for (i, m) in line.iter().enumerate() {
            let number = pos.fullmove_number();
            match pos.side_to_move() {
                super::types::Color::White => out.push(format!("{number}. {}", pos.san(m))),
                super::types::Color::Black if i == 0 => {
                    out.push(format!("{number}... {}", pos.san(m)))
                }
                super::types::Color::Black => out.push(pos.san(m)),
            }
            pos = pos.make(*m);
        }
        out.join(" ")
    }
}
