//! Test-only oracles written independently of the library: a naive move
//! generator, a plain minimax, and seeded random positions.

#![allow(dead_code)]

use entroply::chess::Position;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A board as 64 ASCII bytes (`b'.'` empty), a1 first.
#[derive(Clone, Debug)]
pub struct Naive {
    sq: [u8; 64],
    white: bool,
    // K, Q, k, q
    castle: [bool; 4],
    ep: Option<usize>,
}

fn at(file: i32, rank: i32) -> Option<usize> {
    ((0..8).contains(&file) && (0..8).contains(&rank)).then(|| (rank * 8 + file) as usize)
}

fn name(i: usize) -> String {
    format!("{}{}", (b'a' + (i % 8) as u8) as char, i / 8 + 1)
}

impl Naive {
    pub fn from_fen(fen: &str) -> Naive {
        let f: Vec<&str> = fen.split_whitespace().collect();
        let mut sq = [b'.'; 64];
        for (row, text) in f[0].split('/').enumerate() {
            let rank = 7 - row as i32;
            let mut file = 0;
            for c in text.bytes() {
                if c.is_ascii_digit() {
                    file += (c - b'0') as i32;
                } else {
                    sq[at(file, rank).unwrap()] = c;
                    file += 1;
                }
            }
        }
        let castle = [
            f[2].contains('K'),
            f[2].contains('Q'),
            f[2].contains('k'),
            f[2].contains('q'),
        ];
        let ep = (f[3] != "-").then(|| {
            let b = f[3].as_bytes();
            at((b[0] - b'a') as i32, (b[1] - b'1') as i32).unwrap()
        });
        Naive {
            sq,
            white: f[1] == "w",
            castle,
            ep,
        }
    }

    fn mine(&self, c: u8, white: bool) -> bool {
        c != b'.' && c.is_ascii_uppercase() == white
    }

    /// Is square `t` attacked by the side `by_white`?
    pub fn attacked(&self, t: usize, by_white: bool) -> bool {
        let (tf, tr) = ((t % 8) as i32, (t / 8) as i32);
        let want = |p: u8| {
            if by_white {
                p.to_ascii_uppercase()
            } else {
                p.to_ascii_lowercase()
            }
        };
        // Pawns sit one rank "behind" the target from the attacker's view.
        let pr = if by_white { tr - 1 } else { tr + 1 };
        for df in [-1, 1] {
            if at(tf + df, pr).is_some_and(|s| self.sq[s] == want(b'p')) {
                return true;
            }
        }
        for (df, dr) in [
            (1, 2),
            (2, 1),
            (2, -1),
            (1, -2),
            (-1, -2),
            (-2, -1),
            (-2, 1),
            (-1, 2),
        ] {
            if at(tf + df, tr + dr).is_some_and(|s| self.sq[s] == want(b'n')) {
                return true;
            }
        }
        for df in -1..=1 {
            for dr in -1..=1 {
                if (df, dr) != (0, 0)
                    && at(tf + df, tr + dr).is_some_and(|s| self.sq[s] == want(b'k'))
                {
                    return true;
                }
            }
        }
        let lines: [((i32, i32), u8); 8] = [
            ((1, 0), b'r'),
            ((-1, 0), b'r'),
            ((0, 1), b'r'),
            ((0, -1), b'r'),
            ((1, 1), b'b'),
            ((1, -1), b'b'),
            ((-1, 1), b'b'),
            ((-1, -1), b'b'),
        ];
        for ((df, dr), slider) in lines {
            let (mut f, mut r) = (tf + df, tr + dr);
            while let Some(s) = at(f, r) {
                let p = self.sq[s];
                if p != b'.' {
                    if p == want(slider) || p == want(b'q') {
                        return true;
                    }
                    break;
                }
                f += df;
                r += dr;
            }
        }
        false
    }

    fn king(&self, white: bool) -> usize {
        let k = if white { b'K' } else { b'k' };
        self.sq.iter().position(|&c| c == k).expect("king on board")
    }

    pub fn in_check(&self) -> bool {
        self.attacked(self.king(self.white), !self.white)
    }

    /// Every pseudo-legal move as (from, to, promotion letter or 0).
    fn pseudo(&self) -> Vec<(usize, usize, u8)> {
        let mut out = Vec::new();
        let w = self.white;
        for s in 0..64 {
            let p = self.sq[s];
            if !self.mine(p, w) {
                continue;
            }
            let (f, r) = ((s % 8) as i32, (s / 8) as i32);
            let mut add = |t: usize| out.push((s, t, 0u8));
            match p.to_ascii_lowercase() {
                b'p' => {
                    let dir = if w { 1 } else { -1 };
                    let start = if w { 1 } else { 6 };
                    let mut pawn_targets = Vec::new();
                    if let Some(t) = at(f, r + dir) {
                        if self.sq[t] == b'.' {
                            pawn_targets.push(t);
                            if r == start {
                                let t2 = at(f, r + 2 * dir).unwrap();
                                if self.sq[t2] == b'.' {
                                    pawn_targets.push(t2);
                                }
                            }
                        }
                    }
                    for df in [-1, 1] {
                        if let Some(t) = at(f + df, r + dir) {
                            if self.mine(self.sq[t], !w) || Some(t) == self.ep {
                                pawn_targets.push(t);
                            }
                        }
                    }
                    for t in pawn_targets {
                        if t / 8 == 0 || t / 8 == 7 {
                            for promo in *b"nbrq" {
                                out.push((s, t, promo));
                            }
                        } else {
                            out.push((s, t, 0));
                        }
                    }
                }
                b'n' | b'k' => {
                    let deltas: Vec<(i32, i32)> = if p.eq_ignore_ascii_case(&b'n') {
                        vec![
                            (1, 2),
                            (2, 1),
                            (2, -1),
                            (1, -2),
                            (-1, -2),
                            (-2, -1),
                            (-2, 1),
                            (-1, 2),
                        ]
                    } else {
                        vec![
                            (1, 0),
                            (1, 1),
                            (0, 1),
                            (-1, 1),
                            (-1, 0),
                            (-1, -1),
                            (0, -1),
                            (1, -1),
                        ]
                    };
                    for (df, dr) in deltas {
                        if let Some(t) = at(f + df, r + dr) {
                            if !self.mine(self.sq[t], w) {
                                add(t);
                            }
                        }
                    }
                }
                kind => {
                    let mut dirs = Vec::new();
                    if kind == b'r' || kind == b'q' {
                        dirs.extend([(1, 0), (-1, 0), (0, 1), (0, -1)]);
                    }
                    if kind == b'b' || kind == b'q' {
                        dirs.extend([(1, 1), (1, -1), (-1, 1), (-1, -1)]);
                    }
                    for (df, dr) in dirs {
                        let (mut ff, mut rr) = (f + df, r + dr);
                        while let Some(t) = at(ff, rr) {
                            if self.mine(self.sq[t], w) {
                                break;
                            }
                            add(t);
                            if self.sq[t] != b'.' {
                                break;
                            }
                            ff += df;
                            rr += dr;
                        }
                    }
                }
            }
        }
        // Castling: rights, empty path, king not passing through attack.
        let (rank, k_idx, q_idx) = if w { (0, 0, 1) } else { (7, 2, 3) };
        let e = at(4, rank).unwrap();
        let king = if w { b'K' } else { b'k' };
        let rook = if w { b'R' } else { b'r' };
        if self.sq[e] == king && !self.attacked(e, !w) {
            if self.castle[k_idx]
                && self.sq[at(7, rank).unwrap()] == rook
                && [5, 6]
                    .iter()
                    .all(|&fl| self.sq[at(fl, rank).unwrap()] == b'.')
                && [5, 6]
                    .iter()
                    .all(|&fl| !self.attacked(at(fl, rank).unwrap(), !w))
            {
                out.push((e, at(6, rank).unwrap(), 0));
            }
            if self.castle[q_idx]
                && self.sq[at(0, rank).unwrap()] == rook
                && [1, 2, 3]
                    .iter()
                    .all(|&fl| self.sq[at(fl, rank).unwrap()] == b'.')
                && [2, 3]
                    .iter()
                    .all(|&fl| !self.attacked(at(fl, rank).unwrap(), !w))
            {
                out.push((e, at(2, rank).unwrap(), 0));
            }
        }
        out
    }

    fn play(&self, (from, to, promo): (usize, usize, u8)) -> Naive {
        let mut n = self.clone();
        let p = self.sq[from];
        let lower = p.to_ascii_lowercase();
        n.sq[from] = b'.';
        if lower == b'p' && Some(to) == self.ep {
            let victim = if self.white { to - 8 } else { to + 8 };
            n.sq[victim] = b'.';
        }
        n.sq[to] = if promo != 0 {
            if self.white {
                promo.to_ascii_uppercase()
            } else {
                promo
            }
        } else {
            p
        };
        if lower == b'k' && (from as i32 - to as i32).abs() == 2 {
            let (rf, rt) = if to % 8 == 6 {
                (to + 1, to - 1)
            } else {
                (to - 2, to + 1)
            };
            n.sq[rt] = n.sq[rf];
            n.sq[rf] = b'.';
        }
        n.ep = (lower == b'p' && (from as i32 - to as i32).abs() == 16).then(|| (from + to) / 2);
        for (i, corner, king_sq) in [(0, 7, 4), (1, 0, 4), (2, 63, 60), (3, 56, 60)] {
            if from == corner || to == corner || from == king_sq {
                n.castle[i] = false;
            }
        }
        n.white = !self.white;
        n
    }

    /// Legal moves in coordinate notation, sorted.
    pub fn legal(&self) -> Vec<String> {
        let mut v: Vec<String> = self
            .pseudo()
            .into_iter()
            .filter(|&m| {
                let next = self.play(m);
                !next.attacked(next.king(self.white), next.white)
            })
            .map(|(f, t, p)| {
                let mut s = name(f) + &name(t);
                if p != 0 {
                    s.push(p as char);
                }
                s
            })
            .collect();
        v.sort();
        v
    }

    pub fn perft(&self, depth: u32) -> u64 {
        if depth == 0 {
            return 1;
        }
        self.pseudo()
            .into_iter()
            .map(|m| (m, self.play(m)))
            .filter(|(_, next)| !next.attacked(next.king(self.white), next.white))
            .map(|(_, next)| next.perft(depth - 1))
            .sum()
    }
}

/// Sorted coordinate moves according to the library.
pub fn library_moves(p: &Position) -> Vec<String> {
    let mut v: Vec<String> = p.legal_moves().iter().map(|m| m.uci()).collect();
    v.sort();
    v
}

/// Positions reached by seeded random playouts from a few starting points.
pub fn random_positions(count: usize, seed: u64, min_ply: usize, max_ply: usize) -> Vec<Position> {
    let starts = [
        Position::startpos(),
        Position::from_fen("r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1")
            .unwrap(),
        Position::from_fen("8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1").unwrap(),
        Position::from_fen("r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1")
            .unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut p = starts[out.len() % starts.len()].clone();
        let plies = min_ply + (out.len() * 7 + seed as usize) % (max_ply - min_ply + 1);
        for _ in 0..plies {
            let moves = p.legal_moves();
            let Some(m) = moves.choose(&mut rng) else {
                break;
            };
            p = p.apply_move(m);
        }
        if p.has_legal_move() {
            out.push(p);
        }
    }
    out
}

/// Plain fixed-depth negamax with no pruning, mirroring the engine's leaf
/// conventions (material from the side to move, mate = ±(100000 − ply),
/// stalemate 0). Returns the value and the first move (in `order_moves`
/// order) that achieves it.
pub fn minimax(p: &Position, depth: u32) -> (i32, Option<entroply::chess::Move>) {
    fn rec(p: &Position, depth: u32, ply: i32) -> i32 {
        let moves = p.legal_moves();
        if moves.is_empty() {
            return if p.is_check() { -(100_000 - ply) } else { 0 };
        }
        if depth == 0 {
            return p.material_eval();
        }
        moves
            .iter()
            .map(|m| -rec(&p.apply_move(m), depth - 1, ply + 1))
            .max()
            .unwrap()
    }
    let ordered = entroply::search::order_moves(p, &p.legal_moves(), p.material_white());
    let mut best = (i32::MIN, None);
    for (m, _) in ordered {
        let v = -rec(&p.apply_move(&m), depth - 1, 1);
        if v > best.0 {
            best = (v, Some(m));
        }
    }
    best
}
