//! Canonical words for path and cycle subgraphs of `K_n` and streaming
//! enumeration of them.
//!
//! A path on `m` vertices is written as its vertex sequence with the smaller
//! endpoint first. A cycle is written starting at its minimum vertex and
//! heading towards the smaller of its two neighbours. Enumeration generates
//! only canonical words, in lexicographic order, so a stream never repeats
//! a subgraph and never needs a seen-set.

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::block::Block;
use crate::graph::{edge_index_unchecked, CompleteGraph, GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgraphError {
    #[error("vertex {0} appears more than once")]
    DuplicateVertex(VertexId),
    #[error("a {kind} needs at least {min} vertices, got {got}")]
    TooShort {
        kind: &'static str,
        min: usize,
        got: usize,
    },
    #[error("vertex {vertex} is not in K_{n}")]
    VertexOutOfRange { vertex: VertexId, n: u32 },
    #[error("path length khat={khat} needs khat >= 2 and n >= khat + 1 (n = {n})")]
    BadPathLength { n: u32, khat: u32 },
    #[error("cycle length khat={khat} needs khat >= 3 and n >= khat (n = {n})")]
    BadCycleLength { n: u32, khat: u32 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn check_distinct(seq: &[VertexId]) -> Result<(), SubgraphError> {
    let mut sorted = seq.to_vec();
    sorted.sort_unstable();
    match sorted.windows(2).find(|w| w[0] == w[1]) {
        Some(w) => Err(SubgraphError::DuplicateVertex(w[0])),
        None => Ok(()),
    }
}

/// Canonical vertex sequence of a path subgraph: first vertex < last vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathWord(Vec<VertexId>);

impl PathWord {
    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Canonical vertex sequence of a cycle subgraph: minimum vertex first,
/// second vertex smaller than the last.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleWord(Vec<VertexId>);

impl CycleWord {
    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    /// Number of edges, equal to the number of vertices.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().join(","))
    }
}

impl fmt::Display for CycleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// Picks `seq` or its reversal, whichever starts with the smaller endpoint.
pub fn canonical_path(seq: &[VertexId]) -> Result<PathWord, SubgraphError> {
    if seq.len() < 2 {
        return Err(SubgraphError::TooShort {
            kind: "path",
            min: 2,
            got: seq.len(),
        });
    }
    check_distinct(seq)?;
    let mut v = seq.to_vec();
    if v[0] > v[v.len() - 1] {
        v.reverse();
    }
    Ok(PathWord(v))
}

/// Unique representative of the dihedral class of `seq`.
pub fn canonical_cycle(seq: &[VertexId]) -> Result<CycleWord, SubgraphError> {
    if seq.len() < 3 {
        return Err(SubgraphError::TooShort {
            kind: "cycle",
            min: 3,
            got: seq.len(),
        });
    }
    check_distinct(seq)?;
    let start = seq
        .iter()
        .position_min()
        .expect("sequence is nonempty");
    let mut v = seq.to_vec();
    v.rotate_left(start);
    if v[1] > v[v.len() - 1] {
        v[1..].reverse();
    }
    Ok(CycleWord(v))
}

/// Lexicographic odometer over injective sequences of length `m` from
/// `[0, n)` with per-position lower bounds that encode canonicity.
#[derive(Debug, Clone)]
struct Odometer {
    n: u32,
    word: Vec<VertexId>,
    used: Vec<bool>,
    /// Positions below `floor` are fixed and never revisited.
    floor: usize,
    started: bool,
    done: bool,
    kind: WordKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WordKind {
    Path,
    Cycle,
}

impl Odometer {
    fn new(n: u32, m: usize, kind: WordKind, first: Option<VertexId>) -> Self {
        let mut od = Self {
            n,
            word: vec![0; m],
            used: vec![false; n as usize],
            floor: 0,
            started: false,
            done: false,
            kind,
        };
        if let Some(f) = first {
            if f >= n {
                od.done = true;
            } else {
                od.word[0] = f;
                od.used[f as usize] = true;
                od.floor = 1;
            }
        }
        od
    }

    fn lower_bound(&self, pos: usize) -> u32 {
        let last = self.word.len() - 1;
        match self.kind {
            WordKind::Path if pos == last => self.word[0] + 1,
            WordKind::Path => 0,
            WordKind::Cycle if pos == 0 => 0,
            WordKind::Cycle if pos == last => self.word[1] + 1,
            WordKind::Cycle => self.word[0] + 1,
        }
    }

    fn candidate(&self, pos: usize, from: u32) -> Option<u32> {
        let start = from.max(self.lower_bound(pos));
        (start..self.n).find(|&c| !self.used[c as usize])
    }

    /// Places the smallest admissible value `>= from` at `pos` and fills
    /// the rest minimally, backtracking as needed.
    fn fill(&mut self, mut pos: usize, mut from: u32) -> bool {
        let m = self.word.len();
        loop {
            match self.candidate(pos, from) {
                Some(c) => {
                    self.word[pos] = c;
                    self.used[c as usize] = true;
                    pos += 1;
                    if pos == m {
                        return true;
                    }
                    from = 0;
                }
                None => {
                    if pos == self.floor {
                        return false;
                    }
                    pos -= 1;
                    let c = self.word[pos];
                    self.used[c as usize] = false;
                    from = c + 1;
                }
            }
        }
    }

    fn advance(&mut self) -> Option<&[VertexId]> {
        if self.done {
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            self.fill(self.floor, 0)
        } else {
            let pos = self.word.len() - 1;
            let c = self.word[pos];
            self.used[c as usize] = false;
            self.fill(pos, c + 1)
        };
        if ok {
            Some(&self.word)
        } else {
            self.done = true;
            None
        }
    }
}

/// Stream of canonical paths with `khat` edges in `K_n`.
#[derive(Debug, Clone)]
pub struct PathStream {
    od: Odometer,
}

impl Iterator for PathStream {
    type Item = PathWord;

    fn next(&mut self) -> Option<PathWord> {
        self.od.advance().map(|w| PathWord(w.to_vec()))
    }
}

impl PathStream {
    /// Advances and lends the next word without allocating.
    pub fn next_vertices(&mut self) -> Option<&[VertexId]> {
        self.od.advance()
    }
}

/// Stream of canonical cycles on `khat` vertices in `K_n`.
#[derive(Debug, Clone)]
pub struct CycleStream {
    od: Odometer,
}

impl Iterator for CycleStream {
    type Item = CycleWord;

    fn next(&mut self) -> Option<CycleWord> {
        self.od.advance().map(|w| CycleWord(w.to_vec()))
    }
}

impl CycleStream {
    pub fn next_vertices(&mut self) -> Option<&[VertexId]> {
        self.od.advance()
    }
}

fn check_path_args(n: u32, khat: u32) -> Result<(), SubgraphError> {
    if khat < 2 || n < khat + 1 {
        return Err(SubgraphError::BadPathLength { n, khat });
    }
    CompleteGraph::new(n)?;
    Ok(())
}

fn check_cycle_args(n: u32, khat: u32) -> Result<(), SubgraphError> {
    if khat < 3 || n < khat {
        return Err(SubgraphError::BadCycleLength { n, khat });
    }
    CompleteGraph::new(n)?;
    Ok(())
}

/// Every path with `khat` edges in `K_n`, once each, in lexicographic order
/// of the canonical word. Yields `P(n, khat + 1) / 2` words.
pub fn enumerate_paths(n: u32, khat: u32) -> Result<PathStream, SubgraphError> {
    check_path_args(n, khat)?;
    Ok(PathStream {
        od: Odometer::new(n, khat as usize + 1, WordKind::Path, None),
    })
}

/// The slice of [`enumerate_paths`] whose words start at `first`.
///
/// Concatenating the partitions for `first = 0..n` reproduces the full
/// stream, so disjoint partitions can be consumed independently.
pub fn enumerate_paths_from(
    n: u32,
    khat: u32,
    first: VertexId,
) -> Result<PathStream, SubgraphError> {
    check_path_args(n, khat)?;
    Ok(PathStream {
        od: Odometer::new(n, khat as usize + 1, WordKind::Path, Some(first)),
    })
}

/// Every cycle on `khat` vertices in `K_n`, once each, in lexicographic
/// order of the canonical word. Yields `P(n, khat) / (2 khat)` words.
pub fn enumerate_cycles(n: u32, khat: u32) -> Result<CycleStream, SubgraphError> {
    check_cycle_args(n, khat)?;
    Ok(CycleStream {
        od: Odometer::new(n, khat as usize, WordKind::Cycle, None),
    })
}

/// The slice of [`enumerate_cycles`] whose minimum vertex is `first`.
pub fn enumerate_cycles_from(
    n: u32,
    khat: u32,
    first: VertexId,
) -> Result<CycleStream, SubgraphError> {
    check_cycle_args(n, khat)?;
    Ok(CycleStream {
        od: Odometer::new(n, khat as usize, WordKind::Cycle, Some(first)),
    })
}

fn check_vertices(seq: &[VertexId], n: u32) -> Result<(), SubgraphError> {
    CompleteGraph::new(n)?;
    match seq.iter().find(|&&v| v >= n) {
        Some(&vertex) => Err(SubgraphError::VertexOutOfRange { vertex, n }),
        None => Ok(()),
    }
}

/// Sorted edge ids of consecutive vertex pairs. Vertices must be distinct
/// and `< n`; `closed` adds the edge from last back to first.
pub(crate) fn walk_edges(seq: &[VertexId], n: u32, closed: bool, out: &mut Vec<u32>) {
    out.clear();
    let edge = |x: VertexId, y: VertexId| {
        if x < y {
            edge_index_unchecked(x, y, n)
        } else {
            edge_index_unchecked(y, x, n)
        }
    };
    out.extend(seq.windows(2).map(|w| edge(w[0], w[1])));
    if closed {
        out.push(edge(seq[seq.len() - 1], seq[0]));
    }
    out.sort_unstable();
}

/// Edge set of a path as a block of `K_n` edge ids.
pub fn path_to_block(p: &PathWord, n: u32) -> Result<Block, SubgraphError> {
    check_vertices(&p.0, n)?;
    let mut edges = Vec::with_capacity(p.len());
    walk_edges(&p.0, n, false, &mut edges);
    Ok(Block::from_sorted_unchecked(edges))
}

/// Edge set of a cycle, including the closing edge.
pub fn cycle_to_block(c: &CycleWord, n: u32) -> Result<Block, SubgraphError> {
    check_vertices(&c.0, n)?;
    let mut edges = Vec::with_capacity(c.len());
    walk_edges(&c.0, n, true, &mut edges);
    Ok(Block::from_sorted_unchecked(edges))
}

/// Block shapes of the four-edge 3-design on `K_5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum K5Shape {
    /// All four edges at one vertex.
    Fan,
    /// A 4-cycle.
    Rectangle,
    /// A triangle plus the edge joining the two vertices it misses.
    Triangle,
}

impl fmt::Display for K5Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            K5Shape::Fan => "fan",
            K5Shape::Rectangle => "rectangle",
            K5Shape::Triangle => "triangle",
        })
    }
}

/// All 30 fan, rectangle and triangle blocks of `K_5`: 5 fans, then 15
/// rectangles, then 10 triangles.
pub fn enumerate_k5_special() -> impl Iterator<Item = (K5Shape, Block)> {
    const N: u32 = 5;
    let g = CompleteGraph::new(N).expect("K_5 is small");
    let edge = move |x, y| g.edge(x, y).expect("distinct vertices of K_5");

    let fans = (0..N).map(move |center| {
        let ids = (0..N).filter(|&u| u != center).map(|u| edge(center, u)).collect();
        (K5Shape::Fan, Block::from_unsorted(ids).expect("distinct edges"))
    });
    let rectangles = enumerate_cycles(N, 4)
        .expect("K_5 has 4-cycles")
        .map(move |c| {
            let block = cycle_to_block(&c, N).expect("vertices of K_5");
            (K5Shape::Rectangle, block)
        });
    let triangles = (0..N).tuple_combinations().map(move |(a, b, c)| {
        let rest: Vec<u32> = (0..N).filter(|&u| u != a && u != b && u != c).collect();
        let ids = vec![edge(a, b), edge(b, c), edge(a, c), edge(rest[0], rest[1])];
        (K5Shape::Triangle, Block::from_unsorted(ids).expect("distinct edges"))
    });
    fans.chain(rectangles).chain(triangles)
}
