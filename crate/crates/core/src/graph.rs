//! Complete graphs and the lexicographic numbering of their edges.
//!
//! The edge `(a, b)` with `a < b` of `K_n` is numbered by its rank among all
//! unordered pairs of `[0, n)` in lexicographic order. This numbering is the
//! variety id space of every design built from a complete graph, so it is
//! also part of the design file format.

use num_bigint::BigUint;
use thiserror::Error;

/// A vertex of `K_n`.
pub type VertexId = u32;

/// Dense index of an edge of `K_n`, in `[0, C(n, 2))`.
pub type EdgeId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex pair ({a}, {b}) is not an edge of K_{n}: need a < b < n")]
    BadPair { a: VertexId, b: VertexId, n: u32 },
    #[error("edge id {id} out of range for K_{n} ({count} edges)")]
    EdgeOutOfRange { id: EdgeId, n: u32, count: u64 },
    #[error("K_{n} has too many edges for 32-bit edge ids")]
    TooLarge { n: u32 },
}

/// Canonical endpoints of an edge, always `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeEndpoints {
    pub a: VertexId,
    pub b: VertexId,
}

impl EdgeEndpoints {
    /// Orders the two vertices; `None` if they are equal.
    pub fn new(x: VertexId, y: VertexId) -> Option<Self> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Some(Self { a: x, b: y }),
            std::cmp::Ordering::Greater => Some(Self { a: y, b: x }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn shares_vertex(&self, other: &EdgeEndpoints) -> bool {
        self.a == other.a || self.a == other.b || self.b == other.a || self.b == other.b
    }
}

/// Exact number of edges of `K_n`.
pub fn edge_count(n: u64) -> BigUint {
    let n = BigUint::from(n);
    if n < BigUint::from(2u32) {
        return BigUint::from(0u32);
    }
    (&n * (&n - 1u32)) >> 1
}

fn small_edge_count(n: u32) -> u64 {
    let n = u64::from(n);
    n * n.saturating_sub(1) / 2
}

/// Rank of `(a, b)` among all pairs of `[0, n)` in lexicographic order.
pub fn edge_index(a: VertexId, b: VertexId, n: u32) -> Result<EdgeId, GraphError> {
    if a >= b || b >= n {
        return Err(GraphError::BadPair { a, b, n });
    }
    if small_edge_count(n) > u64::from(u32::MAX) {
        return Err(GraphError::TooLarge { n });
    }
    Ok(edge_index_unchecked(a, b, n))
}

/// `edge_index` without validation. Callers guarantee `a < b < n`.
#[inline]
pub(crate) fn edge_index_unchecked(a: VertexId, b: VertexId, n: u32) -> EdgeId {
    let (a, b, n) = (u64::from(a), u64::from(b), u64::from(n));
    (a * n - a * (a + 1) / 2 + (b - a - 1)) as EdgeId
}

/// Inverse of [`edge_index`].
pub fn edge_endpoints(id: EdgeId, n: u32) -> Result<EdgeEndpoints, GraphError> {
    let count = small_edge_count(n);
    if u64::from(id) >= count {
        return Err(GraphError::EdgeOutOfRange { id, n, count });
    }
    // Row `a` starts at offset a*n - a(a+1)/2 and holds n-1-a pairs.
    let id = u64::from(id);
    let n64 = u64::from(n);
    let mut a = 0u64;
    let mut row_start = 0u64;
    loop {
        let row_len = n64 - 1 - a;
        if id < row_start + row_len {
            let b = a + 1 + (id - row_start);
            return Ok(EdgeEndpoints {
                a: a as VertexId,
                b: b as VertexId,
            });
        }
        row_start += row_len;
        a += 1;
    }
}

/// The complete graph on `n` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompleteGraph {
    n: u32,
}

impl CompleteGraph {
    pub fn new(n: u32) -> Result<Self, GraphError> {
        if small_edge_count(n) > u64::from(u32::MAX) {
            return Err(GraphError::TooLarge { n });
        }
        Ok(Self { n })
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u32 {
        small_edge_count(self.n) as u32
    }

    /// Edge id of the unordered pair `{x, y}`, in either order.
    pub fn edge(&self, x: VertexId, y: VertexId) -> Result<EdgeId, GraphError> {
        let e = EdgeEndpoints::new(x, y).ok_or(GraphError::BadPair {
            a: x,
            b: y,
            n: self.n,
        })?;
        edge_index(e.a, e.b, self.n)
    }

    pub fn endpoints(&self, id: EdgeId) -> Result<EdgeEndpoints, GraphError> {
        edge_endpoints(id, self.n)
    }

    /// All edges in id order.
    pub fn edges(&self) -> impl Iterator<Item = EdgeEndpoints> {
        let n = self.n;
        (0..n).flat_map(move |a| (a + 1..n).map(move |b| EdgeEndpoints { a, b }))
    }
}
