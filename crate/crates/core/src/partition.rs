//! Balanced partitions of weighted trees into connected subtrees, and
//! laminar dyadic families of such partitions.

use crate::tree::{Part, SubtreePartition, Tree, TreeError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by the partitioners.
#[derive(Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error("vertex {vertex} has {children} children, branching bound is {k}")]
    BranchingExceeded { vertex: usize, children: usize, k: usize },
    #[error("total weight is zero")]
    ZeroWeight,
    #[error("weight of vertex {0} is negative or not finite")]
    BadWeight(usize),
    #[error("weight vector has length {got}, tree has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("n must be positive")]
    ZeroN,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Additive vertex weight `Φ(W) = Σ_{v ∈ W} φ(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexWeight {
    phi: Vec<f64>,
}

impl VertexWeight {
    pub fn new(phi: Vec<f64>) -> Result<Self, PartitionError> {
        if let Some(v) = phi.iter().position(|x| !x.is_finite() || *x < 0.0) {
            return Err(PartitionError::BadWeight(v));
        }
        Ok(Self { phi })
    }

    pub fn uniform(n: usize) -> Self {
        Self { phi: vec![1.0; n] }
    }

    pub fn values(&self) -> &[f64] {
        &self.phi
    }

    /// `Φ` of a vertex set.
    pub fn of(&self, vertices: &[usize]) -> f64 {
        vertices.iter().map(|&v| self.phi[v]).sum()
    }

    pub fn total(&self) -> f64 {
        self.phi.iter().sum()
    }
}

/// Output of [`balanced_partition`] together with its constant `C(k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalancedPartition {
    pub partition: SubtreePartition,
    /// Constant with `parts ≤ c_k · n`; equal to `k + 2`.
    pub c_k: usize,
}

fn check_inputs(tree: &Tree, weights: &VertexWeight, n: usize, k: usize) -> Result<(), PartitionError> {
    if n == 0 {
        return Err(PartitionError::ZeroN);
    }
    if weights.phi.len() != tree.vertex_count() {
        return Err(PartitionError::LengthMismatch {
            expected: tree.vertex_count(),
            got: weights.phi.len(),
        });
    }
    for v in 0..tree.vertex_count() {
        let c = tree.children(v).len();
        if c > k {
            return Err(PartitionError::BranchingExceeded { vertex: v, children: c, k });
        }
    }
    if weights.total() <= 0.0 {
        return Err(PartitionError::ZeroWeight);
    }
    Ok(())
}

/// Groups vertices into parts given the set of part roots: every other
/// vertex joins the part of its parent.
fn parts_from_roots(tree: &Tree, is_root: &[bool]) -> SubtreePartition {
    let n = tree.vertex_count();
    let mut owner = vec![usize::MAX; n];
    let mut parts: Vec<Part> = Vec::new();
    for &v in tree.bfs_order() {
        let o = if is_root[v] {
            parts.push(Part { root: v, vertices: Vec::new() });
            parts.len() - 1
        } else {
            owner[tree.parent(v)]
        };
        owner[v] = o;
        parts[o].vertices.push(v);
    }
    SubtreePartition { parts }
}

/// Partitions `tree` into at most `(k + 2) n` connected subtrees such that
/// every part with at least two vertices has `Φ(part) ≤ (k + 2) Φ(V) / n`.
///
/// Vertices are visited in post-order with threshold `τ = Φ(V) / n`. A vertex
/// with `φ(v) > τ` becomes a singleton and closes each open child component
/// as its own part. Otherwise the vertex absorbs its children's open
/// components, and the result is closed when its weight reaches `τ`.
pub fn balanced_partition(
    tree: &Tree,
    weights: &VertexWeight,
    n: usize,
    k: usize,
) -> Result<BalancedPartition, PartitionError> {
    check_inputs(tree, weights, n, k)?;
    let c_k = k + 2;
    let nv = tree.vertex_count();
    let mut is_root = vec![false; nv];
    is_root[tree.root()] = true;
    if n == 1 {
        return Ok(BalancedPartition {
            partition: parts_from_roots(tree, &is_root),
            c_k,
        });
    }
    let tau = weights.total() / n as f64;
    let mut residual = vec![0.0f64; nv];
    for &v in tree.bfs_order().iter().rev() {
        let phi = weights.phi[v];
        let kids = tree.children(v);
        if phi > tau {
            is_root[v] = true;
            for &c in kids {
                is_root[c] = true;
            }
            continue;
        }
        let acc = phi
            + kids
                .iter()
                .filter(|&&c| !is_root[c])
                .map(|&c| residual[c])
                .sum::<f64>();
        if acc >= tau {
            is_root[v] = true;
        } else {
            residual[v] = acc;
        }
    }
    is_root[tree.root()] = true;
    Ok(BalancedPartition {
        partition: parts_from_roots(tree, &is_root),
        c_k,
    })
}

/// Laminar family of partitions indexed by dyadic levels `l = 0, 1, …`,
/// from the balanced partition for `n0` up to the whole tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionFamily {
    pub levels: Vec<SubtreePartition>,
    pub n0: usize,
    /// Constant `C(k) = k + 2` bounding part counts and cross-level meetings.
    pub c_k: usize,
}

impl PartitionFamily {
    /// Largest number of level-`l±1` parts met by a single level-`l` part,
    /// over all levels.
    pub fn max_cross_intersections(&self, n: usize) -> usize {
        let mut worst = 0;
        for pair in self.levels.windows(2) {
            let fine = pair[0].owner(n);
            let coarse = pair[1].owner(n);
            worst = worst.max(max_meets(&pair[0], &coarse));
            worst = worst.max(max_meets(&pair[1], &fine));
        }
        worst
    }

    /// Whether every part of each level lies inside one part of the next.
    pub fn is_laminar(&self, n: usize) -> bool {
        self.levels.windows(2).all(|pair| {
            let coarse = pair[1].owner(n);
            pair[0].parts.iter().all(|p| {
                let o = coarse[p.vertices[0]];
                p.vertices.iter().all(|&v| coarse[v] == o)
            })
        })
    }
}

fn max_meets(parts: &SubtreePartition, other_owner: &[usize]) -> usize {
    parts
        .parts
        .iter()
        .map(|p| {
            let mut seen: Vec<usize> = p.vertices.iter().map(|&v| other_owner[v]).collect();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        })
        .max()
        .unwrap_or(0)
}

/// Open group carried up the quotient tree during a merge pass.
#[derive(Clone, Copy)]
struct Group {
    weight: f64,
    members: usize,
}

/// Builds level `0` with [`balanced_partition`] and each level `l + 1` by
/// merging neighbouring level-`l` parts along the quotient tree with
/// threshold `2^{l+1} Φ(V) / n0`, at most `k + 2` parts per merged group.
/// The top level is the whole tree; when the level below it still has more
/// than `k + 2` parts, extra capped merge levels are inserted first.
pub fn dyadic_family(
    tree: &Tree,
    weights: &VertexWeight,
    n0: usize,
    k: usize,
) -> Result<PartitionFamily, PartitionError> {
    let base = balanced_partition(tree, weights, n0, k)?;
    let c_k = base.c_k;
    let top = n0.ilog2() as usize;
    let nv = tree.vertex_count();
    let total = weights.total();
    let mut levels = vec![base.partition];
    for l in 0..top.saturating_sub(1) {
        let tau = total * 2f64.powi(l as i32 + 1) / n0 as f64;
        let next = merge_level(tree, weights, &levels[l], tau, c_k);
        levels.push(next);
    }
    if top > 0 {
        while levels.last().map_or(0, |p| p.len()) > c_k {
            let next = merge_level(tree, weights, levels.last().unwrap(), f64::INFINITY, c_k);
            levels.push(next);
        }
        let mut is_root = vec![false; nv];
        is_root[tree.root()] = true;
        levels.push(parts_from_roots(tree, &is_root));
    }
    Ok(PartitionFamily { levels, n0, c_k })
}

fn merge_level(
    tree: &Tree,
    weights: &VertexWeight,
    prev: &SubtreePartition,
    tau: f64,
    cap: usize,
) -> SubtreePartition {
    let nv = tree.vertex_count();
    let owner = prev.owner(nv);
    let np = prev.len();
    let mut q_children: Vec<Vec<usize>> = vec![Vec::new(); np];
    let mut order: Vec<usize> = Vec::with_capacity(np);
    for &v in tree.bfs_order() {
        let o = owner[v];
        if prev.parts[o].root == v {
            order.push(o);
            if v != tree.root() {
                q_children[owner[tree.parent(v)]].push(o);
            }
        }
    }
    let phi: Vec<f64> = prev.parts.iter().map(|p| weights.of(&p.vertices)).collect();
    let mut closed = vec![false; np];
    let mut open: Vec<Option<Group>> = vec![None; np];
    for &a in order.iter().rev() {
        let mut kids: Vec<(usize, Group)> = q_children[a]
            .iter()
            .filter_map(|&c| open[c].map(|g| (c, g)))
            .collect();
        if phi[a] >= tau {
            closed[a] = true;
            for (c, _) in kids {
                closed[c] = true;
            }
            continue;
        }
        kids.sort_by(|x, y| x.1.weight.total_cmp(&y.1.weight).then(x.0.cmp(&y.0)));
        let mut g = Group { weight: phi[a], members: 1 };
        for (c, cg) in kids {
            if g.members + cg.members <= cap {
                g.weight += cg.weight;
                g.members += cg.members;
            } else {
                closed[c] = true;
            }
        }
        if g.weight >= tau {
            closed[a] = true;
        } else {
            open[a] = Some(g);
        }
    }
    let root_part = owner[tree.root()];
    closed[root_part] = true;
    let mut is_root = vec![false; nv];
    for (i, p) in prev.parts.iter().enumerate() {
        if closed[i] {
            is_root[p.root] = true;
        }
    }
    parts_from_roots(tree, &is_root)
}
