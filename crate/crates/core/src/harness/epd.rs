//! Extended Position Description records.

use log::{debug, warn};
use thiserror::Error;

use crate::chess::{FenError, Move, MoveParseError, Position};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EpdErrorKind {
    #[error("expected at least 4 position fields")]
    MissingFields,
    #[error(transparent)]
    Fen(#[from] FenError),
    #[error("unterminated quoted operand")]
    UnterminatedQuote,
    #[error("opcode `{0}` needs an operand")]
    MissingOperand(&'static str),
    #[error("bad `dm` operand `{0}` (want a positive integer)")]
    BadMateCount(String),
    #[error("bad `bm` move: {0}")]
    BadMove(#[from] MoveParseError),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct EpdError {
    pub line: usize,
    pub kind: EpdErrorKind,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpdRecord {
    pub position: Position,
    pub best_moves: Option<Vec<Move>>,
    pub direct_mate: Option<u32>,
    pub id: String,
}

/// Opcodes that are understood but carry nothing the harness uses.
const IGNORED_OPCODES: &[&str] = &[
    "am", "acd", "acn", "acs", "ce", "pv", "pm", "hmvc", "fmvn", "c0", "c1", "c2", "c3", "c4",
    "c5", "c6", "c7", "c8", "c9",
];

/// Split operations on `;`, honouring single- and double-quoted operands.
fn split_operations(text: &str) -> Result<Vec<Vec<String>>, EpdErrorKind> {
    let mut ops = Vec::new();
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ';' => {
                chars.next();
                if !tokens.is_empty() {
                    ops.push(std::mem::take(&mut tokens));
                }
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '"' | '\'' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some(q) if q == c => break,
                        Some(other) => s.push(other),
                        None => return Err(EpdErrorKind::UnterminatedQuote),
                    }
                }
                tokens.push(s);
            }
            _ => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_whitespace() || d == ';' {
                        break;
                    }
                    s.push(d);
                    chars.next();
                }
                tokens.push(s);
            }
        }
    }
    if !tokens.is_empty() {
        ops.push(tokens);
    }
    Ok(ops)
}

/// Parse one EPD line. `line_no` only labels the record when it has no `id`.
pub fn parse_epd_line(line: &str, line_no: usize) -> Result<EpdRecord, EpdErrorKind> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() < 4 {
        return Err(EpdErrorKind::MissingFields);
    }
    // Some suites append the two FEN counters before the operations.
    let numeric = |f: &&str| !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit());
    let with_counters = fields.len() >= 6 && numeric(&fields[4]) && numeric(&fields[5]);
    let (halfmove, fullmove) = if with_counters {
        (fields[4], fields[5])
    } else {
        ("0", "1")
    };
    let position = Position::from_fen_fields(&fields[..4], halfmove, fullmove)?;

    let mut rest = line.trim_start();
    for _ in 0..if with_counters { 6 } else { 4 } {
        rest = rest.trim_start();
        let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
        rest = &rest[end..];
    }

    let mut record = EpdRecord {
        position,
        best_moves: None,
        direct_mate: None,
        id: format!("line{line_no}"),
    };
    for op in split_operations(rest)? {
        let (opcode, operands) = op.split_first().expect("non-empty operation");
        match opcode.as_str() {
            "bm" => {
                if operands.is_empty() {
                    return Err(EpdErrorKind::MissingOperand("bm"));
                }
                let moves = operands
                    .iter()
                    .map(|m| record.position.parse_move(m))
                    .collect::<Result<Vec<_>, _>>()?;
                record.best_moves = Some(moves);
            }
            "dm" => {
                let n = operands.first().ok_or(EpdErrorKind::MissingOperand("dm"))?;
                match n.parse::<u32>() {
                    Ok(k) if k >= 1 => record.direct_mate = Some(k),
                    _ => return Err(EpdErrorKind::BadMateCount(n.clone())),
                }
            }
            "id" => {
                let id = operands.first().ok_or(EpdErrorKind::MissingOperand("id"))?;
                record.id = id.clone();
            }
            other if IGNORED_OPCODES.contains(&other) => {
                debug!("line {line_no}: ignoring opcode `{other}`")
            }
            other => warn!("line {line_no}: unknown opcode `{other}` ignored"),
        }
    }
    Ok(record)
}

/// Parse every non-blank, non-comment (`#`) line of an EPD source.
pub fn load_epd(source: &str) -> Result<Vec<EpdRecord>, EpdError> {
    source
        .lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| parse_epd_line(l, i + 1).map_err(|kind| EpdError { line: i + 1, kind }))
        .collect()
}

/// Read a whole stream and parse it with [`load_epd`].
pub fn read_epd<R: std::io::Read>(mut reader: R) -> Result<Vec<EpdRecord>, super::HarnessError> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    Ok(load_epd(&text)?)
}

impl EpdRecord {
    /// Render back to a single EPD line.
    pub fn to_epd(&self) -> String {
        let mut s = self.position.to_epd_prefix();
        if let Some(bm) = &self.best_moves {
            let sans: Vec<String> = bm.iter().map(|m| self.position.san(m)).collect();
            s.push_str(&format!(" bm {};", sans.join(" ")));
        }
        if let Some(dm) = self.direct_mate {
            s.push_str(&format!(" dm {dm};"));
        }
        s.push_str(&format!(" id \"{}\";", self.id));
        s
    }
}
