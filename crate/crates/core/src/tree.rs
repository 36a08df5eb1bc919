//! Rooted trees, depth layers, scale layerings and subtree partitions.
//!
//! Vertex ids are the caller's dense ids `0..n`. A breadth-first order is
//! computed once at construction and used for every root-to-leaf pass.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on the number of vertices accepted by [`Tree::build`].
pub const DEFAULT_MAX_VERTICES: usize = 1 << 22;

/// Errors raised while building or querying trees.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("parent list is empty")]
    Empty,
    #[error("no root: no vertex is its own parent")]
    NoRoot,
    #[error("multiple roots: {0} and {1} are both their own parent")]
    MultipleRoots(usize, usize),
    #[error("vertex {vertex} has dangling parent id {parent}")]
    DanglingParent { vertex: usize, parent: usize },
    #[error("cycle detected through vertex {0}")]
    Cycle(usize),
    #[error("tree has {count} vertices, cap is {cap}")]
    TooLarge { count: usize, cap: usize },
    #[error("vertex {0} out of range")]
    InvalidVertex(usize),
    #[error("scale index {t} is below t0 = {t0}")]
    BelowT0 { t: u32, t0: u32 },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("m_* must be positive")]
    ZeroMStar,
}

/// Immutable rooted tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    parent: Vec<usize>,
    root: usize,
    depth: Vec<usize>,
    child_start: Vec<usize>,
    child_list: Vec<usize>,
    bfs: Vec<usize>,
}

impl Tree {
    /// Builds a tree from a parent list; the root is its own parent.
    pub fn build(parent: Vec<usize>) -> Result<Self, TreeError> {
        Self::build_with_cap(parent, DEFAULT_MAX_VERTICES)
    }

    /// As [`Tree::build`] with an explicit vertex cap.
    pub fn build_with_cap(parent: Vec<usize>, cap: usize) -> Result<Self, TreeError> {
        let n = parent.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if n > cap {
            return Err(TreeError::TooLarge { count: n, cap });
        }
        let mut root = None;
        for (v, &p) in parent.iter().enumerate() {
            if p >= n {
                return Err(TreeError::DanglingParent { vertex: v, parent: p });
            }
            if p == v {
                match root {
                    None => root = Some(v),
                    Some(r) => return Err(TreeError::MultipleRoots(r, v)),
                }
            }
        }
        let root = root.ok_or(TreeError::NoRoot)?;

        let mut counts = vec![0usize; n + 1];
        for (v, &p) in parent.iter().enumerate() {
            if v != root {
                counts[p + 1] += 1;
            }
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let child_start = counts.clone();
        let mut fill = counts;
        let mut child_list = vec![0usize; n.saturating_sub(1)];
        for (v, &p) in parent.iter().enumerate() {
            if v != root {
                child_list[fill[p]] = v;
                fill[p] += 1;
            }
        }

        let mut depth = vec![usize::MAX; n];
        let mut bfs = Vec::with_capacity(n);
        depth[root] = 0;
        bfs.push(root);
        let mut head = 0;
        while head < bfs.len() {
            let v = bfs[head];
            head += 1;
            for &c in &child_list[child_start[v]..child_start[v + 1]] {
                depth[c] = depth[v] + 1;
                bfs.push(c);
            }
        }
        if bfs.len() != n {
            let v = depth.iter().position(|d| *d == usize::MAX).unwrap_or(0);
            return Err(TreeError::Cycle(v));
        }
        Ok(Self {
            parent,
            root,
            depth,
            child_start,
            child_list,
            bfs,
        })
    }

    /// Path `0 - 1 - ... - (n-1)` rooted at 0.
    pub fn path(n: usize) -> Result<Self, TreeError> {
        Self::build((0..n).map(|v| v.saturating_sub(1)).collect())
    }

    /// Complete `k`-ary tree with `depth + 1` levels, labelled in BFS order.
    pub fn complete(k: usize, depth: usize) -> Result<Self, TreeError> {
        let mut parent = vec![0usize];
        let mut level = vec![0usize];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(level.len() * k);
            for &v in &level {
                for _ in 0..k {
                    next.push(parent.len());
                    parent.push(v);
                }
            }
            level = next;
        }
        Self::build(parent)
    }

    pub fn vertex_count(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent_list(&self) -> &[usize] {
        &self.parent
    }

    /// Parent of `v` (the root maps to itself).
    #[inline]
    pub fn parent(&self, v: usize) -> usize {
        self.parent[v]
    }

    #[inline]
    pub fn depth(&self, v: usize) -> usize {
        self.depth[v]
    }

    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    #[inline]
    pub fn children(&self, v: usize) -> &[usize] {
        &self.child_list[self.child_start[v]..self.child_start[v + 1]]
    }

    /// Vertices in breadth-first order from the root.
    pub fn bfs_order(&self) -> &[usize] {
        &self.bfs
    }

    pub fn max_depth(&self) -> usize {
        self.depth[*self.bfs.last().unwrap_or(&self.root)]
    }

    /// Largest number of children of any vertex.
    pub fn max_branching(&self) -> usize {
        (0..self.vertex_count())
            .map(|v| self.children(v).len())
            .max()
            .unwrap_or(0)
    }

    /// Number of vertices at each depth `0..=max_depth`.
    pub fn depth_counts(&self) -> Vec<usize> {
        let mut c = vec![0usize; self.max_depth() + 1];
        for &d in &self.depth {
            c[d] += 1;
        }
        c
    }

    /// Whether `a ≤ b` in the tree order (`a` lies on the root path of `b`).
    pub fn is_ancestor_or_self(&self, a: usize, mut b: usize) -> bool {
        if self.depth[a] > self.depth[b] {
            return false;
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b];
        }
        a == b
    }

    fn check(&self, v: usize) -> Result<(), TreeError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(TreeError::InvalidVertex(v))
        }
    }

    /// Descendants of `xi` exactly `l` levels below it, in BFS order.
    pub fn descendants_at_distance(&self, xi: usize, l: usize) -> Result<Vec<usize>, TreeError> {
        self.check(xi)?;
        let mut level = vec![xi];
        for _ in 0..l {
            level = level.iter().flat_map(|&v| self.children(v)).copied().collect();
            if level.is_empty() {
                break;
            }
        }
        Ok(level)
    }

    /// All vertices of the subtree rooted at `xi`, in BFS order.
    pub fn subtree(&self, xi: usize) -> Result<Vec<usize>, TreeError> {
        self.check(xi)?;
        let mut out = vec![xi];
        let mut head = 0;
        while head < out.len() {
            let v = out[head];
            head += 1;
            out.extend_from_slice(self.children(v));
        }
        Ok(out)
    }

    /// Tree restricted to depths `0..=max_depth` together with the map from
    /// new ids to old ids.
    pub fn truncate(&self, max_depth: usize) -> (Tree, Vec<usize>) {
        let keep: Vec<usize> = self
            .bfs
            .iter()
            .copied()
            .filter(|&v| self.depth[v] <= max_depth)
            .collect();
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let parent = keep.iter().map(|&v| new_id[self.parent[v]]).collect();
        let t = Tree::build(parent).expect("truncation of a valid tree is valid");
        (t, keep)
    }
}

/// Rule assigning a scale index `t` to the scaled depth `x = m_* · j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum LayerRule {
    /// Layer `t` collects depths with `2^{t-1} ≤ m_* j < 2^t`.
    Linear { m_star: u32 },
    /// Layer `t` collects depths with `2^{2^{t-1}} ≤ m_* j < 2^{2^t}`.
    DoublyExponential { m_star: u32 },
}

impl LayerRule {
    pub fn m_star(&self) -> u32 {
        match *self {
            LayerRule::Linear { m_star } | LayerRule::DoublyExponential { m_star } => m_star,
        }
    }

    /// Scale index of absolute depth `j`, or `None` when the rule leaves it
    /// undefined (`m_* j = 0`, or `m_* j < 2` for the doubly exponential rule).
    pub fn raw_layer(&self, j: u64) -> Option<u32> {
        let x = self.m_star() as u64 * j;
        match self {
            LayerRule::Linear { .. } => (x >= 1).then(|| x.ilog2() + 1),
            LayerRule::DoublyExponential { .. } => (x >= 2).then(|| (x.ilog2()).ilog2() + 1),
        }
    }
}

/// Scale layering `Γ_t` of a tree.
///
/// Depths that the rule leaves undefined (the root at depth 0 and, for the
/// doubly exponential rule, `m_* j = 1`) join the first defined layer `t0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layering {
    t0: u32,
    layer_of: Vec<u32>,
    rule: LayerRule,
    depth_offset: u64,
}

impl Layering {
    /// Layering of `tree` whose root sits at absolute depth `depth_offset`.
    pub fn new(tree: &Tree, rule: LayerRule, depth_offset: u64) -> Result<Self, TreeError> {
        if rule.m_star() == 0 {
            return Err(TreeError::ZeroMStar);
        }
        let first_defined = (depth_offset..)
            .find_map(|j| rule.raw_layer(j))
            .expect("every rule is defined for large depths");
        let t0 = first_defined;
        let layer_of = tree
            .depths()
            .iter()
            .map(|&d| rule.raw_layer(depth_offset + d as u64).unwrap_or(t0))
            .collect();
        Ok(Self {
            t0,
            layer_of,
            rule,
            depth_offset,
        })
    }

    pub fn t0(&self) -> u32 {
        self.t0
    }

    pub fn rule(&self) -> LayerRule {
        self.rule
    }

    pub fn depth_offset(&self) -> u64 {
        self.depth_offset
    }

    #[inline]
    pub fn layer(&self, v: usize) -> u32 {
        self.layer_of[v]
    }

    pub fn layers(&self) -> &[u32] {
        &self.layer_of
    }

    /// Largest scale index present.
    pub fn t_max(&self) -> u32 {
        self.layer_of.iter().copied().max().unwrap_or(self.t0)
    }

    /// Number of vertices in each layer `t0..=t_max` (index `t - t0`).
    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut c = vec![0usize; (self.t_max() - self.t0 + 1) as usize];
        for &t in &self.layer_of {
            c[(t - self.t0) as usize] += 1;
        }
        c
    }

    /// Checks monotonicity along edges and unit steps between layers.
    pub fn check_invariants(&self, tree: &Tree) -> Result<(), TreeError> {
        for v in 0..tree.vertex_count() {
            let (a, b) = (self.layer_of[tree.parent(v)], self.layer_of[v]);
            if b < a || b - a > 1 {
                return Err(TreeError::InvalidPartition(format!(
                    "layer jump {a} -> {b} at vertex {v}"
                )));
            }
        }
        Ok(())
    }
}

/// One connected part of a [`SubtreePartition`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub root: usize,
    pub vertices: Vec<usize>,
}

/// Collection of disjoint connected subtrees.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SubtreePartition {
    pub parts: Vec<Part>,
}

impl SubtreePartition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Map from vertex to part index (`usize::MAX` for uncovered vertices).
    pub fn owner(&self, n: usize) -> Vec<usize> {
        let mut own = vec![usize::MAX; n];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in &part.vertices {
                own[v] = i;
            }
        }
        own
    }

    /// Checks that parts are disjoint, nonempty and connected, and that each
    /// part root is its minimal vertex. With `covering`, also checks that the
    /// union is the whole vertex set.
    pub fn validate(&self, tree: &Tree, covering: bool) -> Result<(), TreeError> {
        let n = tree.vertex_count();
        let mut own = vec![usize::MAX; n];
        for (i, part) in self.parts.iter().enumerate() {
            if part.vertices.is_empty() {
                return Err(TreeError::InvalidPartition(format!("part {i} is empty")));
            }
            for &v in &part.vertices {
                if v >= n {
                    return Err(TreeError::InvalidVertex(v));
                }
                if own[v] != usize::MAX {
                    return Err(TreeError::InvalidPartition(format!(
                        "vertex {v} in parts {} and {i}",
                        own[v]
                    )));
                }
                own[v] = i;
            }
        }
        for (i, part) in self.parts.iter().enumerate() {
            if own[part.root] != i {
                return Err(TreeError::InvalidPartition(format!(
                    "root {} not in part {i}",
                    part.root
                )));
            }
            let r = part.root;
            if r != tree.root() && own[tree.parent(r)] == i {
                return Err(TreeError::InvalidPartition(format!(
                    "root {r} of part {i} is not minimal"
                )));
            }
            for &v in &part.vertices {
                if v != r && own[tree.parent(v)] != i {
                    return Err(TreeError::InvalidPartition(format!(
                        "part {i} is disconnected at vertex {v}"
                    )));
                }
            }
        }
        if covering {
            if let Some(v) = own.iter().position(|o| *o == usize::MAX) {
                return Err(TreeError::InvalidPartition(format!("vertex {v} uncovered")));
            }
        }
        Ok(())
    }
}

/// Connected components of the layer-`t` subgraph `Γ_t`, rooted at their
/// minimal vertices and listed in BFS order of those roots.
pub fn layer_components(
    tree: &Tree,
    layering: &Layering,
    t: u32,
) -> Result<SubtreePartition, TreeError> {
    if t < layering.t0() {
        return Err(TreeError::BelowT0 { t, t0: layering.t0() });
    }
    let mut parts = Vec::new();
    for &v in tree.bfs_order() {
        if layering.layer(v) != t {
            continue;
        }
        if v != tree.root() && layering.layer(tree.parent(v)) == t {
            continue;
        }
        let mut vertices = vec![v];
        let mut head = 0;
        while head < vertices.len() {
            let x = vertices[head];
            head += 1;
            for &c in tree.children(x) {
                if layering.layer(c) == t {
                    vertices.push(c);
                }
            }
        }
        parts.push(Part { root: v, vertices });
    }
    Ok(SubtreePartition { parts })
}

/// JSON tree file: parent list plus optional weights and metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeFile {
    pub parent: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_depth: Option<usize>,
}

impl TreeFile {
    pub fn from_tree(tree: &Tree) -> Self {
        Self {
            parent: tree.parent_list().to_vec(),
            u: None,
            w: None,
            profile: None,
            truncation_depth: Some(tree.max_depth()),
        }
    }

    pub fn tree(&self) -> Result<Tree, TreeError> {
        Tree::build(self.parent.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_small_trees() {
        let t = Tree::build(vec![0]).unwrap();
        assert_eq!((t.vertex_count(), t.depth(0)), (1, 0));
        let star = Tree::build(vec![0, 0, 0]).unwrap();
        assert_eq!(star.depths(), &[0, 1, 1]);
        let t = Tree::build(vec![0, 0, 1, 1, 2]).unwrap();
        assert_eq!(t.depths(), &[0, 1, 2, 2, 3]);
        assert_eq!(t.descendants_at_distance(1, 1).unwrap(), vec![2, 3]);
    }

    #[test]
    fn rejects_bad_parent_lists() {
        assert_eq!(Tree::build(vec![]), Err(TreeError::Empty));
        assert_eq!(Tree::build(vec![0, 1]), Err(TreeError::MultipleRoots(0, 1)));
        assert_eq!(Tree::build(vec![1, 0]), Err(TreeError::NoRoot));
        assert_eq!(
            Tree::build(vec![0, 7]),
            Err(TreeError::DanglingParent { vertex: 1, parent: 7 })
        );
        assert!(matches!(Tree::build(vec![0, 2, 1]), Err(TreeError::Cycle(_))));
        assert!(matches!(
            Tree::build_with_cap(vec![0, 0, 0], 2),
            Err(TreeError::TooLarge { .. })
        ));
    }

    #[test]
    fn descendants_and_order() {
        let star = Tree::build(vec![0, 0, 0]).unwrap();
        assert_eq!(star.descendants_at_distance(0, 1).unwrap(), vec![1, 2]);
        assert_eq!(star.descendants_at_distance(2, 0).unwrap(), vec![2]);
        assert!(star.descendants_at_distance(1, 3).unwrap().is_empty());
        assert!(star.is_ancestor_or_self(0, 2));
        assert!(!star.is_ancestor_or_self(1, 2));
    }

    #[test]
    fn linear_layers_on_a_path() {
        let t = Tree::path(7).unwrap();
        let lay = Layering::new(&t, LayerRule::Linear { m_star: 1 }, 0).unwrap();
        assert_eq!(lay.t0(), 1);
        assert_eq!(lay.layers(), &[1, 1, 2, 2, 3, 3, 3]);
        let c = layer_components(&t, &lay, 2).unwrap();
        assert_eq!(c.parts, vec![Part { root: 2, vertices: vec![2, 3] }]);
        assert!(layer_components(&t, &lay, 0).is_err());
        assert!(layer_components(&t, &lay, 9).unwrap().is_empty());
    }

    #[test]
    fn doubly_exponential_layers() {
        let r = LayerRule::DoublyExponential { m_star: 1 };
        assert_eq!(r.raw_layer(1), None);
        assert_eq!(r.raw_layer(2), Some(1));
        assert_eq!(r.raw_layer(3), Some(1));
        assert_eq!(r.raw_layer(4), Some(2));
        assert_eq!(r.raw_layer(15), Some(2));
        assert_eq!(r.raw_layer(16), Some(3));
        assert_eq!(r.raw_layer(255), Some(3));
        assert_eq!(r.raw_layer(256), Some(4));
    }

    #[test]
    fn truncate_keeps_prefix() {
        let t = Tree::complete(2, 4).unwrap();
        let (s, map) = t.truncate(2);
        assert_eq!(s.vertex_count(), 7);
        assert_eq!(map, (0..7).collect::<Vec<_>>());
    }
}
