//! Tree representations shared by every estimator.
//!
//! Two views of the same object live here:
//!
//! * [`GrowthTree`] is the ground truth produced by a growth process. Vertex
//!   labels are chronological, so vertex 1 is the first vertex and every other
//!   vertex points at an older parent.
//! * [`ShapeTree`] is what an estimator gets to see: an undirected tree whose
//!   labels carry no information about arrival order.
//!
//! Vertices are dense 1-based integers throughout. Per-vertex arrays have
//! length `n + 1` and slot 0 is unused.

use std::collections::VecDeque;
use std::fmt;
use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

/// A vertex identifier in `1..=n`.
pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("edge set is not a tree on {n} vertices ({edges} edges, connected graph required)")]
    CycleOrDisconnected { n: usize, edges: usize },
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("self loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("vertex identifiers must be positive")]
    ZeroVertex,
    #[error("a tree needs at least 2 vertices, got {0}")]
    TooSmall(usize),
    #[error("parent of vertex {child} is {parent}, expected a vertex in 1..{child}")]
    NotIncreasing { child: Vertex, parent: Vertex },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A chronologically labeled tree stored as a parent array.
///
/// `parent(i) < i` for every `i >= 2`; vertex 1 is the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrowthTree {
    // parent[0] and parent[1] are 0.
    parent: Vec<u32>,
}

impl GrowthTree {
    /// The two-vertex tree every growth process starts from.
    pub fn seed() -> Self {
        GrowthTree {
            parent: vec![0, 0, 1],
        }
    }

    pub(crate) fn with_capacity(n: usize) -> Self {
        let mut parent = Vec::with_capacity(n + 1);
        parent.extend_from_slice(&[0, 0, 1]);
        GrowthTree { parent }
    }

    /// Builds a tree from the parents of vertices `2..=n`, in order.
    pub fn from_parents(parents: &[Vertex]) -> Result<Self, TreeError> {
        let n = parents.len() + 1;
        if n < 2 {
            return Err(TreeError::TooSmall(n));
        }
        let mut parent = Vec::with_capacity(n + 1);
        parent.extend_from_slice(&[0, 0]);
        for (offset, &p) in parents.iter().enumerate() {
            let child = offset + 2;
            if p == 0 || p >= child {
                return Err(TreeError::NotIncreasing { child, parent: p });
            }
            parent.push(p as u32);
        }
        Ok(GrowthTree { parent })
    }

    /// Appends vertex `n + 1` below `parent`.
    pub(crate) fn attach(&mut self, parent: Vertex) {
        debug_assert!(parent >= 1 && parent <= self.n());
        self.parent.push(parent as u32);
    }

    pub fn n(&self) -> usize {
        self.parent.len() - 1
    }

    /// Parent of `v`, or `None` for the root.
    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        match self.parent[v] {
            0 => None,
            p => Some(p as Vertex),
        }
    }

    /// Parents of vertices `2..=n`.
    pub fn parents(&self) -> impl ExactSizeIterator<Item = Vertex> + Clone + '_ {
        self.parent[2..].iter().map(|&p| p as Vertex)
    }

    /// Edges `(i, parent(i))` for `i = 2..=n`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + Clone + '_ {
        self.parents().enumerate().map(|(k, p)| (k + 2, p))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n() + 1];
        for (c, p) in self.edges() {
            deg[c] += 1;
            deg[p] += 1;
        }
        deg
    }

    pub fn degree(&self, v: Vertex) -> usize {
        let children = self.parent[2..].iter().filter(|&&p| p as usize == v).count();
        children + usize::from(v != 1)
    }

    /// The same tree with labels kept, as an undirected shape.
    pub fn to_shape(&self) -> ShapeTree {
        ShapeTree::from_trusted_edges(self.n(), self.edges())
    }

    /// Writes the `n` header followed by one `i parent[i]` line per vertex.
    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", self.n())?;
        for (c, p) in self.edges() {
            writeln!(out, "{c} {p}")?;
        }
        Ok(())
    }

    /// Parses the format produced by [`GrowthTree::write_to`]. Lines starting
    /// with `#` and blank lines are skipped; `i` lines may come in any order.
    pub fn parse(text: &str) -> Result<Self, TreeError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(TreeError::Parse {
            line: 0,
            msg: "missing vertex count".into(),
        })?;
        let n: usize = header.parse().map_err(|_| TreeError::Parse {
            line,
            msg: format!("bad vertex count {header:?}"),
        })?;
        if n < 2 {
            return Err(TreeError::TooSmall(n));
        }
        let mut parents = vec![0usize; n - 1];
        let mut seen = 0;
        for (line, l) in lines {
            let (i, p) = parse_pair(l, line)?;
            let (i, p) = (i as usize, p as usize);
            if i < 2 || i > n {
                return Err(TreeError::Parse {
                    line,
                    msg: format!("vertex {i} outside 2..={n}"),
                });
            }
            if parents[i - 2] != 0 {
                return Err(TreeError::Parse {
                    line,
                    msg: format!("vertex {i} listed twice"),
                });
            }
            parents[i - 2] = p;
            seen += 1;
        }
        if seen != n - 1 {
            return Err(TreeError::Parse {
                line: 0,
                msg: format!("expected {} parent lines, found {seen}", n - 1),
            });
        }
        GrowthTree::from_parents(&parents)
    }
}

fn parse_pair(l: &str, line: usize) -> Result<(u64, u64), TreeError> {
    let mut it = l.split_whitespace();
    let mut next = || -> Result<u64, TreeError> {
        let tok = it.next().ok_or_else(|| TreeError::Parse {
            line,
            msg: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| TreeError::Parse {
            line,
            msg: format!("bad integer {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(TreeError::Parse {
            line,
            msg: "expected exactly two integers".into(),
        });
    }
    Ok((a, b))
}

/// An undirected tree on `1..=n` with flat (CSR) adjacency.
#[derive(Clone, PartialEq, Eq)]
pub struct ShapeTree {
    n: usize,
    // neighbors of v are adj[offsets[v]..offsets[v + 1]]
    offsets: Vec<usize>,
    adj: Vec<u32>,
}

impl fmt::Debug for ShapeTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ShapeTree")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl ShapeTree {
    /// Validates an edge list over `1..=n`, where `n` is the largest label.
    pub fn from_edges(edges: &[(Vertex, Vertex)]) -> Result<Self, TreeError> {
        let mut n = 0;
        for &(u, v) in edges {
            if u == 0 || v == 0 {
                return Err(TreeError::ZeroVertex);
            }
            if u == v {
                return Err(TreeError::SelfLoop(u));
            }
            n = n.max(u).max(v);
        }
        if n < 2 {
            return Err(TreeError::TooSmall(n));
        }
        let mut sorted: Vec<(Vertex, Vertex)> =
            edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(TreeError::DuplicateEdge(w[0].0, w[0].1));
        }
        let bad = TreeError::CycleOrDisconnected {
            n,
            edges: edges.len(),
        };
        if edges.len() != n - 1 {
            return Err(bad);
        }
        let shape = ShapeTree::from_trusted_edges(n, edges.iter().copied());
        // n - 1 edges and connected implies acyclic.
        let mut seen = vec![false; n + 1];
        let mut queue = VecDeque::from([1]);
        seen[1] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for v in shape.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        if reached != n {
            return Err(bad);
        }
        Ok(shape)
    }

    /// Builds the CSR arrays without validation. Callers guarantee a tree.
    pub(crate) fn from_trusted_edges(
        n: usize,
        edges: impl Iterator<Item = (Vertex, Vertex)> + Clone,
    ) -> Self {
        let mut offsets = vec![0usize; n + 2];
        for (u, v) in edges.clone() {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 1..offsets.len() {
            offsets[i] += offsets[i - 1];
        }
        let mut fill = offsets.clone();
        let mut adj = vec![0u32; offsets[n + 1]];
        for (u, v) in edges {
            adj[fill[u]] = v as u32;
            fill[u] += 1;
            adj[fill[v]] = u as u32;
            fill[v] += 1;
        }
        ShapeTree { n, offsets, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.n
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: Vertex) -> impl ExactSizeIterator<Item = Vertex> + Clone + '_ {
        self.adj[self.offsets[v]..self.offsets[v + 1]]
            .iter()
            .map(|&w| w as Vertex)
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.vertices()
            .flat_map(move |u| self.neighbors(u).filter(move |&v| u < v).map(move |v| (u, v)))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.vertices().map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// Renames every vertex `v` to `perm[v]`. `perm` has length `n + 1`, slot 0
    /// ignored, and must be a permutation of `1..=n` on the remaining slots.
    pub fn relabel(&self, perm: &[Vertex]) -> ShapeTree {
        assert_eq!(perm.len(), self.n + 1);
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        ShapeTree::from_trusted_edges(self.n, edges.iter().copied())
    }

    /// Writes one `u v` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (u, v) in self.edges() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    /// CSR slot range for `v`; used to address per-ordered-edge arrays.
    pub(crate) fn slots(&self, v: Vertex) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    pub(crate) fn slot_target(&self, slot: usize) -> Vertex {
        self.adj[slot] as Vertex
    }
}

/// A shape read from an edge-list file, together with the file's own labels.
#[derive(Debug, Clone)]
pub struct LabeledShape {
    pub shape: ShapeTree,
    /// `labels[v - 1]` is the original identifier of internal vertex `v`.
    pub labels: Vec<u64>,
}

/// Parses an edge list: one edge per line, two positive integers separated by
/// whitespace, `#` lines ignored. The distinct labels are mapped in ascending
/// order onto `1..=n`.
pub fn parse_edge_list(text: &str) -> Result<LabeledShape, TreeError> {
    let mut raw = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (a, b) = parse_pair(l, i + 1)?;
        if a == 0 || b == 0 {
            return Err(TreeError::ZeroVertex);
        }
        raw.push((a, b));
    }
    let mut labels: Vec<u64> = raw.iter().flat_map(|&(a, b)| [a, b]).collect();
    labels.sort_unstable();
    labels.dedup();
    let index = |x: u64| labels.binary_search(&x).unwrap() + 1;
    let edges: Vec<_> = raw.iter().map(|&(a, b)| (index(a), index(b))).collect();
    let shape = ShapeTree::from_edges(&edges)?;
    Ok(LabeledShape { shape, labels })
}

/// Hides the chronological labels of `tree` behind a uniformly random
/// permutation. Returns the shape and the new name of vertex 1.
pub fn forget_labels<R: Rng + ?Sized>(tree: &GrowthTree, rng: &mut R) -> (ShapeTree, Vertex) {
    let n = tree.n();
    let mut perm: Vec<Vertex> = (0..=n).collect();
    perm[1..].shuffle(rng);
    let shape = ShapeTree::from_trusted_edges(n, tree.edges().map(|(c, p)| (perm[c], perm[p])));
    (shape, perm[1])
}

/// Iterative depth-first preorder from `root`. Returns `(parent, order)`;
/// `parent[root] == 0`.
pub(crate) fn preorder(shape: &ShapeTree, root: Vertex) -> (Vec<u32>, Vec<u32>) {
    let n = shape.n();
    let mut parent = vec![0u32; n + 1];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![root as u32];
    while let Some(u) = stack.pop() {
        order.push(u);
        let pu = parent[u as usize];
        for w in shape.neighbors(u as Vertex) {
            if w as u32 != pu {
                parent[w] = u;
                stack.push(w as u32);
            }
        }
    }
    (parent, order)
}

/// `shape` oriented away from `root`, with every subtree size.
#[derive(Debug, Clone)]
pub struct RootedView<'a> {
    shape: &'a ShapeTree,
    root: Vertex,
    parent: Vec<u32>,
    order: Vec<u32>,
    down_size: Vec<u32>,
}

impl<'a> RootedView<'a> {
    pub fn shape(&self) -> &'a ShapeTree {
        self.shape
    }

    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        match self.parent[v] {
            0 => None,
            p => Some(p as Vertex),
        }
    }

    /// `|(T, root)_{v↓}|`.
    pub fn down_size(&self, v: Vertex) -> usize {
        self.down_size[v] as usize
    }

    pub fn children(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let p = self.parent[v] as Vertex;
        self.shape.neighbors(v).filter(move |&w| w != p)
    }

    pub fn child_count(&self, v: Vertex) -> usize {
        self.shape.degree(v) - usize::from(v != self.root)
    }

    /// Vertices in depth-first preorder; parents precede children.
    pub fn preorder(&self) -> impl ExactSizeIterator<Item = Vertex> + DoubleEndedIterator + '_ {
        self.order.iter().map(|&v| v as Vertex)
    }

    /// Vertices with no children.
    pub fn leaves(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.shape.vertices().filter(|&v| self.child_count(v) == 0)
    }
}

/// Orients `shape` away from `root` and counts subtree sizes in one pass.
pub fn subtree_sizes(shape: &ShapeTree, root: Vertex) -> RootedView<'_> {
    assert!((1..=shape.n()).contains(&root), "root {root} out of range");
    let (parent, order) = preorder(shape, root);
    let mut down_size = vec![1u32; shape.n() + 1];
    down_size[0] = 0;
    for &v in order.iter().rev() {
        let p = parent[v as usize];
        if p != 0 {
            down_size[p as usize] += down_size[v as usize];
        }
    }
    RootedView {
        shape,
        root,
        parent,
        order,
        down_size,
    }
}

/// For every ordered edge `(u, v)`, the size of the component of `v` once `u`
/// is removed, i.e. `|(T,u)_{v↓}|`.
#[derive(Debug, Clone)]
pub struct SplitSizes {
    n: usize,
    // aligned with the CSR slots of the shape
    sizes: Vec<u32>,
}

impl SplitSizes {
    /// `size(u→v)`. `{u, v}` must be an edge.
    pub fn size(&self, shape: &ShapeTree, u: Vertex, v: Vertex) -> usize {
        let slot = shape
            .slots(u)
            .find(|&s| shape.slot_target(s) == v)
            .unwrap_or_else(|| panic!("{u}-{v} is not an edge"));
        self.sizes[slot] as usize
    }

    /// `(v, size(u→v))` for every neighbor `v` of `u`.
    pub fn around<'s>(
        &'s self,
        shape: &'s ShapeTree,
        u: Vertex,
    ) -> impl Iterator<Item = (Vertex, usize)> + 's {
        shape
            .slots(u)
            .map(move |s| (shape.slot_target(s), self.sizes[s] as usize))
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Computes [`SplitSizes`] with one traversal rooted at vertex 1.
pub fn split_sizes(shape: &ShapeTree) -> SplitSizes {
    let n = shape.n();
    let view = subtree_sizes(shape, 1);
    let mut sizes = vec![0u32; shape.adj.len()];
    for u in shape.vertices() {
        let pu = view.parent[u];
        for s in shape.slots(u) {
            let v = shape.slot_target(s);
            sizes[s] = if v as u32 == pu {
                (n - view.down_size(u)) as u32
            } else {
                view.down_size[v]
            };
        }
    }
    SplitSizes { n, sizes }
}
