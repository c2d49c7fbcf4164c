//! Random walks on weighted undirected graphs.
//!
//! A piece wandering over an empty N×N board is a random walk on its mobility
//! graph: nodes are squares, edges join squares the piece can move between in
//! one move. For an undirected graph the walk picks each edge with probability
//! proportional to its weight, the stationary distribution is proportional to
//! the weighted degree, and the entropy rate is the stationary average of the
//! per-row transition entropies.

use std::io::Write;

use crate::chess::PieceKind;

use super::EntropyError;

/// Undirected weighted graph over `n_nodes` nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct MobilityGraph {
    n_nodes: usize,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl MobilityGraph {
    /// Build a graph from an undirected edge list. Each unordered pair may appear once.
    pub fn new(
        n_nodes: usize,
        edges: Vec<(usize, usize, f64)>,
    ) -> Result<MobilityGraph, EntropyError> {
        if n_nodes == 0 {
            return Err(EntropyError::EmptyGraph);
        }
        let mut adjacency = vec![Vec::new(); n_nodes];
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for &(a, b, w) in &edges {
            if a >= n_nodes || b >= n_nodes {
                return Err(EntropyError::NodeOutOfRange {
                    node: a.max(b),
                    n_nodes,
                });
            }
            if a == b {
                return Err(EntropyError::SelfLoop(a));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(EntropyError::BadWeight { a, b, weight: w });
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(EntropyError::DuplicateEdge { a, b });
            }
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
        }
        for row in &mut adjacency {
            row.sort_by_key(|&(j, _)| j);
        }
        Ok(MobilityGraph {
            n_nodes,
            edges,
            adjacency,
        })
    }

    /// Single-move reachability graph of `kind` on an empty `n`×`n` board,
    /// with unit edge weights. Node index is `rank * n + file`.
    pub fn for_piece(kind: PieceKind, n: usize) -> Result<MobilityGraph, EntropyError> {
        if kind == PieceKind::Pawn {
            return Err(EntropyError::PawnNotSymmetric);
        }
        if n < 3 {
            return Err(EntropyError::BoardTooSmall(n));
        }
        const KNIGHT: [(i64, i64); 8] = [
            (1, 2),
            (2, 1),
            (2, -1),
            (1, -2),
            (-1, -2),
            (-2, -1),
            (-2, 1),
            (-1, 2),
        ];
        const KING: [(i64, i64); 8] = [
            (1, 0),
            (1, 1),
            (0, 1),
            (-1, 1),
            (-1, 0),
            (-1, -1),
            (0, -1),
            (1, -1),
        ];
        const ORTHO: [(i64, i64); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];
        const DIAG: [(i64, i64); 4] = [(1, 1), (1, -1), (-1, 1), (-1, -1)];

        let (dirs, sliding): (Vec<(i64, i64)>, bool) = match kind {
            PieceKind::Knight => (KNIGHT.to_vec(), false),
            PieceKind::King => (KING.to_vec(), false),
            PieceKind::Rook => (ORTHO.to_vec(), true),
            PieceKind::Bishop => (DIAG.to_vec(), true),
            PieceKind::Queen => (ORTHO.iter().chain(DIAG.iter()).copied().collect(), true),
            PieceKind::Pawn => unreachable!(),
        };
        let size = n as i64;
        let on_board = |f: i64, r: i64| (0..size).contains(&f) && (0..size).contains(&r);
        let mut edges = Vec::new();
        for from in 0..n * n {
            let (f0, r0) = ((from % n) as i64, (from / n) as i64);
            for &(df, dr) in &dirs {
                let (mut f, mut r) = (f0 + df, r0 + dr);
                while on_board(f, r) {
                    let to = (r * size + f) as usize;
                    if from < to {
                        edges.push((from, to, 1.0));
                    }
                    if !sliding {
                        break;
                    }
                    f += df;
                    r += dr;
                }
            }
        }
        MobilityGraph::new(n * n, edges)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[(usize, f64)] {
        &self.adjacency[node]
    }

    /// Number of incident edges.
    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    /// Sum of incident edge weights.
    pub fn weighted_degree(&self, node: usize) -> f64 {
        self.adjacency[node].iter().map(|&(_, w)| w).sum()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n_nodes).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    fn total_weight(&self) -> f64 {
        (0..self.n_nodes).map(|i| self.weighted_degree(i)).sum()
    }

    /// Connected components through positive-weight edges, each sorted, ordered by smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut label = vec![usize::MAX; self.n_nodes];
        let mut comps = Vec::new();
        for start in 0..self.n_nodes {
            if label[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![start];
            label[start] = id;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(u, w) in &self.adjacency[v] {
                    if w > 0.0 && label[u] == usize::MAX {
                        label[u] = id;
                        members.push(u);
                        stack.push(u);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Induced subgraph on `nodes` (renumbered 0.. in the given order).
    pub fn subgraph(&self, nodes: &[usize]) -> Result<MobilityGraph, EntropyError> {
        let mut index = vec![usize::MAX; self.n_nodes];
        for (new, &old) in nodes.iter().enumerate() {
            index[old] = new;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b, _)| index[a] != usize::MAX && index[b] != usize::MAX)
            .map(|&(a, b, w)| (index[a], index[b], w))
            .collect();
        MobilityGraph::new(nodes.len(), edges)
    }

    fn require_connected(&self) -> Result<(), EntropyError> {
        let comps = self.components();
        if comps.len() == 1 {
            Ok(())
        } else {
            Err(EntropyError::Disconnected {
                sizes: comps.iter().map(Vec::len).collect(),
                first_nodes: comps.iter().map(|c| c[0]).collect(),
            })
        }
    }

    /// Degree-proportional distribution over all nodes, defined for any graph
    /// with at least one positive-weight edge. On a disconnected graph it is
    /// one stationary distribution among many (a weight-proportional mixture).
    pub fn degree_distribution(&self) -> Result<Distribution, EntropyError> {
        let total = self.total_weight();
        if total <= 0.0 {
            return Err(EntropyError::NoEdges);
        }
        Ok(Distribution(
            (0..self.n_nodes)
                .map(|i| self.weighted_degree(i) / total)
                .collect(),
        ))
    }

    /// Entropy of the walk's next step from `node`, in bits; 0 for isolated nodes.
    pub fn row_entropy(&self, node: usize) -> f64 {
        let d = self.weighted_degree(node);
        if d <= 0.0 {
            return 0.0;
        }
        -self.adjacency[node]
            .iter()
            .filter(|&&(_, w)| w > 0.0)
            .map(|&(_, w)| {
                let p = w / d;
                p * p.log2()
            })
            .sum::<f64>()
    }

    /// Entropy rate of the degree-weighted mixture walk. Equals
    /// [`entropy_rate`] on connected graphs; on disconnected ones it averages
    /// the per-component rates weighted by component edge weight.
    pub fn mixture_entropy_rate(&self) -> Result<f64, EntropyError> {
        let mu = self.degree_distribution()?;
        Ok((0..self.n_nodes)
            .map(|i| mu.0[i] * self.row_entropy(i))
            .sum())
    }

    /// Write one row per node: `node,degree,mu,row_entropy`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), EntropyError> {
        let mu = self.degree_distribution()?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["node", "degree", "mu", "row_entropy"])?;
        for i in 0..self.n_nodes {
            w.write_record([
                i.to_string(),
                format_weight(self.weighted_degree(i)),
                format!("{:.12}", mu.0[i]),
                format!("{:.12}", self.row_entropy(i)),
            ])?;
        }
        w.flush().map_err(|e| EntropyError::Csv(e.to_string()))?;
        Ok(())
    }
}

fn format_weight(w: f64) -> String {
    if w.fract() == 0.0 {
        format!("{}", w as i64)
    } else {
        format!("{w}")
    }
}

/// Row-stochastic transition matrix, stored sparsely.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    rows: Vec<Vec<(usize, f64)>>,
}

impl TransitionMatrix {
    /// `P_ij = w_ij / Σ_k w_ik`. Every node needs positive weighted degree.
    pub fn from_graph(g: &MobilityGraph) -> Result<TransitionMatrix, EntropyError> {
        let rows = (0..g.n_nodes())
            .map(|i| {
                let d = g.weighted_degree(i);
                if d <= 0.0 {
                    return Err(EntropyError::IsolatedNode(i));
                }
                Ok(g.neighbors(i)
                    .iter()
                    .filter(|&&(_, w)| w > 0.0)
                    .map(|&(j, w)| (j, w / d))
                    .collect())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TransitionMatrix { rows })
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// One step of the chain applied to a row vector: `(μP)_j = Σ_i μ_i P_ij`.
    pub fn step(&self, mu: &Distribution) -> Distribution {
        let mut next = vec![0.0; self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, p) in row {
                next[j] += mu.0[i] * p;
            }
        }
        Distribution(next)
    }
}

/// Probability vector over graph nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution(pub Vec<f64>);

impl Distribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn build_mobility_graph(kind: PieceKind, n: usize) -> Result<MobilityGraph, EntropyError> {
    MobilityGraph::for_piece(kind, n)
}

/// `μ_i = Σ_k w(i,k) / Σ_j Σ_k w(j,k)` on a connected graph.
pub fn stationary_distribution(g: &MobilityGraph) -> Result<Distribution, EntropyError> {
    g.require_connected()?;
    g.degree_distribution()
}

/// `Σ_i μ_i H(P_i·)` in bits, on a connected graph.
pub fn entropy_rate(g: &MobilityGraph) -> Result<f64, EntropyError> {
    let mu = stationary_distribution(g)?;
    let p = TransitionMatrix::from_graph(g)?;
    Ok((0..p.n())
        .map(|i| {
            let h: f64 = -p.row(i).iter().map(|&(_, q)| q * q.log2()).sum::<f64>();
            mu.0[i] * h
        })
        .sum())
}
