//! Undirected weighted graphs and their Laplacians.
//!
//! Storage is dense row-major (`n * n`), intended for networks up to roughly
//! 10⁴ nodes. Each [`Network`] additionally caches, per row, the nonzero
//! Laplacian entries in ascending column order so that the right-hand sides
//! in [`crate::dynamics`] and [`crate::phase`] do not sweep zero entries.
//!
//! Sign convention: `L_ij = A_ij` off the diagonal and `L_ii = -k_i`, so
//! `L` is negative semidefinite and `L · 1 = 0`.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("ring lattice needs at least 3 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("ring lattice coordination number must be even, got {0}")]
    OddCoordination(usize),
    #[error("coordination number {k} must be smaller than the node count {n}")]
    CoordinationTooLarge { n: usize, k: usize },
    #[error("adjacency has {len} entries, expected {n}x{n}")]
    NotSquare { n: usize, len: usize },
    #[error("adjacency entry ({i}, {j}) = {value} is negative or not finite")]
    InvalidWeight { i: usize, j: usize, value: f64 },
    #[error("adjacency is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("adjacency has a nonzero diagonal entry at node {0}")]
    SelfLoop(usize),
    #[error("edge ({i}, {j}) is out of range for {n} nodes")]
    EdgeOutOfRange { i: usize, j: usize, n: usize },
    #[error("edge ({0}, {1}) listed more than once")]
    DuplicateEdge(usize, usize),
}

/// An immutable undirected network with its cached Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    n: usize,
    adjacency: Vec<f64>,
    laplacian: Vec<f64>,
    // (column, L_ij) for every nonzero entry of row i, ascending column order.
    laplacian_rows: Vec<Vec<(usize, f64)>>,
    // (column, A_ij) for every nonzero off-diagonal entry of row i.
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl Network {
    /// Builds a network from a dense row-major adjacency matrix.
    pub fn from_adjacency(n: usize, adjacency: Vec<f64>) -> Result<Self, NetworkError> {
        let laplacian = laplacian(n, &adjacency)?;
        let laplacian_rows = (0..n)
            .map(|i| {
                (0..n)
                    .filter_map(|j| {
                        let v = laplacian[i * n + j];
                        (v != 0.0).then_some((j, v))
                    })
                    .collect()
            })
            .collect();
        let neighbors = (0..n)
            .map(|i| {
                (0..n)
                    .filter_map(|j| {
                        let v = adjacency[i * n + j];
                        (v != 0.0).then_some((j, v))
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            n,
            adjacency,
            laplacian,
            laplacian_rows,
            neighbors,
        })
    }

    /// Builds a network from an undirected edge list `(i, j, weight)`.
    ///
    /// Each unordered pair may appear at most once; self loops are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self, NetworkError> {
        let mut adjacency = vec![0.0; n * n];
        for (i, j, w) in edges {
            if i >= n || j >= n {
                return Err(NetworkError::EdgeOutOfRange { i, j, n });
            }
            if i == j {
                return Err(NetworkError::SelfLoop(i));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(NetworkError::InvalidWeight { i, j, value: w });
            }
            if adjacency[i * n + j] != 0.0 {
                return Err(NetworkError::DuplicateEdge(i, j));
            }
            adjacency[i * n + j] = w;
            adjacency[j * n + i] = w;
        }
        Self::from_adjacency(n, adjacency)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Row-major adjacency matrix.
    pub fn adjacency(&self) -> &[f64] {
        &self.adjacency
    }

    /// Row-major Laplacian matrix.
    pub fn laplacian(&self) -> &[f64] {
        &self.laplacian
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency[i * self.n + j]
    }

    /// Weighted degree `k_i`.
    pub fn degree(&self, i: usize) -> f64 {
        -self.laplacian[i * self.n + i]
    }

    /// Nonzero Laplacian entries of row `i`, diagonal included.
    pub fn laplacian_row(&self, i: usize) -> &[(usize, f64)] {
        &self.laplacian_rows[i]
    }

    /// Nonzero off-diagonal adjacency entries of row `i`.
    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.neighbors[i]
    }

    /// Number of undirected edges with nonzero weight.
    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Largest absolute Laplacian row sum, each row summed off-diagonal
    /// entries first (column order) and the diagonal last.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let row = &self.laplacian[i * self.n..(i + 1) * self.n];
                let off: f64 = row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).sum();
                libm::fabs(off + row[i])
            })
            .fold(0.0, f64::max)
    }
}

/// Ring lattice where node `i` links to its `k / 2` nearest neighbors on each
/// side (indices mod `n`), all with unit weight.
pub fn ring_lattice(n: usize, k: usize) -> Result<Network, NetworkError> {
    if n < 3 {
        return Err(NetworkError::TooFewNodes(n));
    }
    if !k.is_multiple_of(2) {
        return Err(NetworkError::OddCoordination(k));
    }
    if k >= n {
        return Err(NetworkError::CoordinationTooLarge { n, k });
    }
    let mut adjacency = vec![0.0; n * n];
    for i in 0..n {
        for offset in 1..=k / 2 {
            let j = (i + offset) % n;
            adjacency[i * n + j] = 1.0;
            adjacency[j * n + i] = 1.0;
        }
    }
    Network::from_adjacency(n, adjacency)
}

/// Laplacian of a symmetric, nonnegative, zero-diagonal adjacency matrix.
///
/// The diagonal is `-k_i` with `k_i` summed in column order, so every row of
/// the result sums to zero up to the rounding of that one summation.
pub fn laplacian(n: usize, adjacency: &[f64]) -> Result<Vec<f64>, NetworkError> {
    if adjacency.len() != n * n {
        return Err(NetworkError::NotSquare {
            n,
            len: adjacency.len(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            let a = adjacency[i * n + j];
            if !(a.is_finite() && a >= 0.0) {
                return Err(NetworkError::InvalidWeight { i, j, value: a });
            }
            if a != adjacency[j * n + i] {
                return Err(NetworkError::Asymmetric { i, j });
            }
        }
        if adjacency[i * n + i] != 0.0 {
            return Err(NetworkError::SelfLoop(i));
        }
    }
    let mut lap = adjacency.to_vec();
    for i in 0..n {
        let degree: f64 = adjacency[i * n..(i + 1) * n].iter().sum();
        lap[i * n + i] = -degree;
    }
    Ok(lap)
}
