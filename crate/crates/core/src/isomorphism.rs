//! Rooted-tree isomorphism classes, automorphism factors and orbit counts.
//!
//! Two independent routes are provided:
//!
//! * [`canonical_code`] computes an exact AHU string for one rooted view. Equal strings mean isomorphic rooted trees, across any two
//!   trees. [`orbit_counts_naive`] and [`log_aut_total_naive`] evaluate it once
//!   per root.
//! * [`AllRootClasses`] assigns interned class ids to every directed side of
//!   every edge in a single rerooting sweep and derives the same orbit counts
//!   and automorphism totals for all roots at once.
//!
//! Both routes are exact (no hashing of codes), so they are expected to agree
//! integer for integer on orbit counts.

use std::cmp::Ordering;
use std::collections::HashMap;

use rustc_hash::FxHashMap;

use crate::tree::{preorder, ShapeTree, Vertex};

/// `table[k] = ln(k!)` for `k = 0..=n`.
pub fn ln_factorial_table(n: usize) -> Vec<f64> {
    let mut t = Vec::with_capacity(n + 1);
    t.push(0.0);
    let mut acc = 0.0f64;
    for k in 1..=n {
        acc += (k as f64).ln();
        t.push(acc);
    }
    t
}

const OPEN: u8 = b'(';
const CLOSE: u8 = b')';
const NODE_BYTES: usize = 6;

/// AHU canonical form of a rooted tree. Each vertex is written as `(`, its
/// height as a big-endian `u32`, its children's codes in ascending order, and
/// `)`.
///
/// Two codes are equal exactly when the rooted trees are isomorphic. The byte
/// order compares height first, then the child lists element by element, a
/// longer list sorting before its own prefix. This is the same order in which
/// [`AllRootClasses::code_rank`] ranks roots.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Number of vertices of the encoded tree.
    pub fn vertex_count(&self) -> usize {
        self.0.len() / NODE_BYTES
    }

    /// Height of the encoded tree.
    pub fn height(&self) -> u32 {
        u32::from_be_bytes(self.0[1..5].try_into().expect("header"))
    }
}

/// Prints the bare parenthesis string, without heights.
impl std::fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut i = 0;
        let mut s = String::with_capacity(self.vertex_count() * 2);
        while i < self.0.len() {
            if self.0[i] == OPEN {
                s.push('(');
                i += 5;
            } else {
                s.push(')');
                i += 1;
            }
        }
        f.write_str(&s)
    }
}

/// Order of two sorted child-class lists of equal height.
fn cmp_child_lists(a: &[u32], b: &[u32]) -> Ordering {
    match a.iter().zip(b).find(|(x, y)| x != y) {
        Some((x, y)) => x.cmp(y),
        None => b.len().cmp(&a.len()),
    }
}

/// Level-by-level AHU classification of one rooted view.
///
/// Class ids grow with height, and within a height follow [`cmp_child_lists`]
/// on sorted child ids. That order depends only on tree structure, so sorting
/// children by id yields a canonical child order.
struct RootedAhu {
    root: Vertex,
    class: Vec<u32>,
    height: Vec<u32>,
    // children of v sorted by class: kids[kid_off[v]..kid_off[v + 1]]
    kid_off: Vec<usize>,
    kids: Vec<u32>,
}

impl RootedAhu {
    fn new(shape: &ShapeTree, root: Vertex) -> Self {
        let n = shape.n();
        let (parent, order) = preorder(shape, root);

        let mut kid_off = vec![0usize; n + 2];
        for v in 1..=n {
            kid_off[v + 1] = shape.degree(v) - usize::from(v != root);
        }
        for i in 1..kid_off.len() {
            kid_off[i] += kid_off[i - 1];
        }
        let mut fill = kid_off.clone();
        let mut kids = vec![0u32; n - 1];
        for &v in &order[1..] {
            let p = parent[v as usize] as usize;
            kids[fill[p]] = v;
            fill[p] += 1;
        }

        let mut height = vec![0u32; n + 1];
        for &v in order.iter().rev() {
            let p = parent[v as usize] as usize;
            if p != 0 {
                height[p] = height[p].max(height[v as usize] + 1);
            }
        }
        let max_h = height[root] as usize;
        let mut levels: Vec<Vec<u32>> = vec![Vec::new(); max_h + 1];
        for v in 1..=n {
            levels[height[v] as usize].push(v as u32);
        }

        let mut class = vec![0u32; n + 1];
        let mut next_id = 1u32;
        let mut keys: Vec<Vec<u32>> = Vec::new();
        for level in levels.iter().skip(1) {
            keys.clear();
            for &v in level {
                let mut key: Vec<u32> = kids[kid_off[v as usize]..kid_off[v as usize + 1]]
                    .iter()
                    .map(|&c| class[c as usize])
                    .collect();
                key.sort_unstable();
                keys.push(key);
            }
            let mut idx: Vec<usize> = (0..level.len()).collect();
            idx.sort_unstable_by(|&a, &b| cmp_child_lists(&keys[a], &keys[b]));
            let mut id = next_id;
            for (pos, &i) in idx.iter().enumerate() {
                if pos > 0 && keys[i] != keys[idx[pos - 1]] {
                    id += 1;
                }
                class[level[i] as usize] = id;
            }
            next_id = id + 1;
        }

        for v in 1..=n {
            kids[kid_off[v]..kid_off[v + 1]].sort_unstable_by_key(|&c| (class[c as usize], c));
        }
        RootedAhu {
            root,
            class,
            height,
            kid_off,
            kids,
        }
    }

    fn children(&self, v: Vertex) -> &[u32] {
        &self.kids[self.kid_off[v]..self.kid_off[v + 1]]
    }

    fn code(&self) -> CanonicalCode {
        const DONE: u32 = 1 << 31;
        let mut out = Vec::with_capacity(NODE_BYTES * (self.class.len() - 1));
        let mut stack = vec![self.root as u32];
        while let Some(item) = stack.pop() {
            if item & DONE != 0 {
                out.push(CLOSE);
                continue;
            }
            out.push(OPEN);
            out.extend_from_slice(&self.height[item as usize].to_be_bytes());
            stack.push(item | DONE);
            stack.extend(self.children(item as Vertex).iter().rev());
        }
        CanonicalCode(out)
    }

    fn aut_log(&self, ln_fact: &[f64]) -> Vec<f64> {
        let n = self.class.len() - 1;
        let mut out = vec![0.0; n + 1];
        for (v, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = runs(self.children(v).iter().map(|&c| self.class[c as usize]))
                .map(|len| ln_fact[len])
                .sum();
        }
        out
    }
}

/// Lengths of runs of equal consecutive items.
fn runs<I: Iterator<Item = u32>>(mut it: I) -> impl Iterator<Item = usize> {
    let mut current = it.next();
    std::iter::from_fn(move || {
        let x = current?;
        let mut len = 1;
        loop {
            current = it.next();
            match current {
                Some(y) if y == x => len += 1,
                _ => return Some(len),
            }
        }
    })
}

/// Canonical code of `(shape, root)`. O(n log n).
pub fn canonical_code(shape: &ShapeTree, root: Vertex) -> CanonicalCode {
    assert!((1..=shape.n()).contains(&root), "root {root} out of range");
    RootedAhu::new(shape, root).code()
}

/// `ln Aut(v, (shape, root))` for every vertex `v` (slot 0 unused): the sum
/// of `ln(ℓ!)` over the multiplicities `ℓ` of isomorphic child subtrees.
pub fn aut_log(shape: &ShapeTree, root: Vertex) -> Vec<f64> {
    assert!((1..=shape.n()).contains(&root), "root {root} out of range");
    RootedAhu::new(shape, root).aut_log(&ln_factorial_table(shape.n()))
}

/// For every vertex `v`, the multiplicities `ℓ_1, …, ℓ_L` of the isomorphism
/// classes among its child subtrees in `(shape, root)`, so that
/// `Aut(v) = ∏ ℓ_i!`. Slot 0 is empty.
pub fn child_multiplicities(shape: &ShapeTree, root: Vertex) -> Vec<Vec<usize>> {
    assert!((1..=shape.n()).contains(&root), "root {root} out of range");
    let ahu = RootedAhu::new(shape, root);
    std::iter::once(Vec::new())
        .chain(
            shape
                .vertices()
                .map(|v| runs(ahu.children(v).iter().map(|&c| ahu.class[c as usize])).collect()),
        )
        .collect()
}

/// Number of vertices `v` with `(shape, v)` isomorphic to `(shape, u)`.
pub fn orbit_count(shape: &ShapeTree, u: Vertex) -> usize {
    AllRootClasses::compute(shape).orbit(u)
}

/// Orbit counts for every vertex from `n` canonical codes. O(n² log n).
pub fn orbit_counts_naive(shape: &ShapeTree) -> Vec<usize> {
    let codes: Vec<CanonicalCode> = shape.vertices().map(|u| canonical_code(shape, u)).collect();
    let mut freq: HashMap<&CanonicalCode, usize> = HashMap::new();
    for c in &codes {
        *freq.entry(c).or_default() += 1;
    }
    std::iter::once(0)
        .chain(codes.iter().map(|c| freq[c]))
        .collect()
}

/// `Σ_v ln Aut(v, (shape, u))` for every root `u`, one rooted pass per root.
pub fn log_aut_total_naive(shape: &ShapeTree) -> Vec<f64> {
    let ln_fact = ln_factorial_table(shape.n());
    std::iter::once(0.0)
        .chain(
            shape
                .vertices()
                .map(|u| RootedAhu::new(shape, u).aut_log(&ln_fact).iter().sum()),
        )
        .collect()
}

/// Isomorphism classes of every rooted view and every directed edge side,
/// computed for all roots in one rerooting sweep.
///
/// Class ids are interned per call: equal ids mean isomorphic rooted trees
/// within this shape, but ids are not comparable across shapes.
#[derive(Debug, Clone)]
pub struct AllRootClasses {
    // per CSR slot (u → v): class of (T, u)_{v↓}; sorted within each vertex's
    // slot range, so the slot order differs from the shape's neighbor order.
    sides: Vec<u32>,
    offsets: Vec<usize>,
    whole: Vec<u32>,
    orbit: Vec<u32>,
    log_aut: Vec<f64>,
    code_rank: Vec<u32>,
}

/// Ranks interned classes in code order. Class `id` has child class ids
/// `buf[off[id]..off[id + 1]]`, and every child is interned before its parent.
fn global_ranks(buf: &[u32], off: &[usize]) -> Vec<u32> {
    let classes = off.len() - 1;
    let key = |id: usize| &buf[off[id]..off[id + 1]];
    let mut height = vec![0u32; classes];
    for id in 0..classes {
        height[id] = key(id).iter().map(|&c| height[c as usize] + 1).max().unwrap_or(0);
    }
    let max_h = height.iter().copied().max().unwrap_or(0) as usize;
    let mut levels: Vec<Vec<u32>> = vec![Vec::new(); max_h + 1];
    for (id, &h) in height.iter().enumerate() {
        levels[h as usize].push(id as u32);
    }
    let mut rank = vec![0u32; classes];
    let mut next = 0u32;
    let mut flat: Vec<u32> = Vec::new();
    let mut spans: Vec<(usize, usize, u32)> = Vec::new();
    for level in &levels {
        flat.clear();
        spans.clear();
        for &id in level {
            let start = flat.len();
            flat.extend(key(id as usize).iter().map(|&c| rank[c as usize]));
            flat[start..].sort_unstable();
            spans.push((start, flat.len(), id));
        }
        spans.sort_unstable_by(|a, b| cmp_child_lists(&flat[a.0..a.1], &flat[b.0..b.1]));
        for &(_, _, id) in &spans {
            rank[id as usize] = next;
            next += 1;
        }
    }
    rank
}

impl AllRootClasses {
    pub fn compute(shape: &ShapeTree) -> Self {
        let n = shape.n();
        let ln_fact = ln_factorial_table(n);
        let (parent, order) = preorder(shape, 1);
        let mut interner: FxHashMap<Box<[u32]>, u32> = FxHashMap::default();
        let mut key_buf: Vec<u32> = Vec::new();
        let mut key_off: Vec<usize> = vec![0];
        let mut intern = |key: &[u32]| -> u32 {
            if let Some(&id) = interner.get(key) {
                return id;
            }
            let id = interner.len() as u32;
            interner.insert(key.into(), id);
            key_buf.extend_from_slice(key);
            key_off.push(key_buf.len());
            id
        };

        // class of the subtree below v when rooted at 1
        let mut down = vec![0u32; n + 1];
        let mut key = Vec::new();
        for &v in order.iter().rev() {
            let v = v as usize;
            key.clear();
            key.extend(
                shape
                    .neighbors(v)
                    .filter(|&w| w as u32 != parent[v])
                    .map(|w| down[w]),
            );
            key.sort_unstable();
            down[v] = intern(&key);
        }

        // up[v]: class of the parent's side seen from v, rooted at parent(v).
        let mut up = vec![0u32; n + 1];
        let mut offsets = vec![0usize; n + 2];
        for v in 1..=n {
            offsets[v + 1] = offsets[v] + shape.degree(v);
        }
        let mut sides = vec![0u32; offsets[n + 1]];
        let mut whole = vec![0u32; n + 1];
        let mut minus_one: Vec<(u32, u32)> = Vec::new();
        for &p in &order {
            let p = p as usize;
            let range = offsets[p]..offsets[p + 1];
            {
                let m = &mut sides[range.clone()];
                for (slot, w) in m.iter_mut().zip(shape.neighbors(p)) {
                    *slot = if w as u32 == parent[p] { up[p] } else { down[w] };
                }
                m.sort_unstable();
            }
            whole[p] = intern(&sides[range.clone()]);
            minus_one.clear();
            let m = &sides[range];
            for i in 0..m.len() {
                if i > 0 && m[i] == m[i - 1] {
                    continue;
                }
                key.clear();
                key.extend_from_slice(&m[..i]);
                key.extend_from_slice(&m[i + 1..]);
                minus_one.push((m[i], intern(&key)));
            }
            for c in shape.neighbors(p).filter(|&c| c as u32 != parent[p]) {
                let at = minus_one
                    .binary_search_by_key(&down[c], |&(x, _)| x)
                    .expect("child class present in multiset");
                up[c] = minus_one[at].1;
            }
        }

        let mult = |v: usize, x: u32| -> usize {
            let m = &sides[offsets[v]..offsets[v + 1]];
            m.partition_point(|&y| y <= x) - m.partition_point(|&y| y < x)
        };
        let full = |v: usize| -> f64 {
            runs(sides[offsets[v]..offsets[v + 1]].iter().copied())
                .map(|l| ln_fact[l])
                .sum()
        };

        let mut log_aut = vec![0.0; n + 1];
        let mut base = full(1);
        for v in 2..=n {
            base += full(v) - (mult(v, up[v]) as f64).ln();
        }
        log_aut[1] = base;
        for &c in &order[1..] {
            let c = c as usize;
            let p = parent[c] as usize;
            log_aut[c] = log_aut[p] - (mult(p, down[c]) as f64).ln()
                + (mult(c, up[c]) as f64).ln();
        }

        let rank = global_ranks(&key_buf, &key_off);
        let code_rank = std::iter::once(0)
            .chain(whole[1..].iter().map(|&w| rank[w as usize]))
            .collect();

        let mut freq: FxHashMap<u32, u32> = FxHashMap::default();
        for &w in &whole[1..] {
            *freq.entry(w).or_default() += 1;
        }
        let orbit = std::iter::once(0)
            .chain(whole[1..].iter().map(|w| freq[w]))
            .collect();

        AllRootClasses {
            sides,
            offsets,
            whole,
            orbit,
            log_aut,
            code_rank,
        }
    }

    /// Position of `canonical_code(T, u)` among the distinct codes of all
    /// rooted classes met in the sweep, without building any code.
    pub fn code_rank(&self, u: Vertex) -> u32 {
        self.code_rank[u]
    }

    /// `Ā(u)`: how many vertices share `u`'s rooted isomorphism class.
    pub fn orbit(&self, u: Vertex) -> usize {
        self.orbit[u] as usize
    }

    /// Interned class id of `(T, u)`.
    pub fn whole_class(&self, u: Vertex) -> u32 {
        self.whole[u]
    }

    /// Sorted class ids of the subtrees hanging off `u`'s neighbors.
    pub fn side_classes(&self, u: Vertex) -> &[u32] {
        &self.sides[self.offsets[u]..self.offsets[u + 1]]
    }

    /// `Σ_v ln Aut(v, (T, u))`.
    pub fn log_aut_total(&self, u: Vertex) -> f64 {
        self.log_aut[u]
    }

    /// Number of distinct rooted classes, i.e. of orbits.
    pub fn orbit_representatives(&self) -> usize {
        let mut w = self.whole[1..].to_vec();
        w.sort_unstable();
        w.dedup();
        w.len()
    }
}
