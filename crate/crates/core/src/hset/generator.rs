//! Trees whose layer sizes follow an h-profile.

use super::{HProfile, HsetError};
use crate::tree::Tree;
use serde::{Deserialize, Serialize};

/// Output of [`generate_hset_tree`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedTree {
    pub tree: Tree,
    /// Absolute depth of the root.
    pub j_min: u64,
    /// Number of vertices at each generated depth.
    pub layer_sizes: Vec<usize>,
    /// Empirical two-sided constant of the descendant counts.
    pub c_hat: f64,
    pub meta: ProfileMeta,
}

/// Metadata block attached to exported generated trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub profile: HProfile,
    pub m_star: u32,
    pub j_min: u64,
    pub depth: usize,
    pub seed: u64,
    pub c_hat: f64,
}

/// Generates a tree of `depth + 1` levels whose root sits at absolute depth
/// `j_min`, with level `d` holding about `h(2^{-m_* j_min}) / h(2^{-m_*(j_min+d)})`
/// vertices.
///
/// Every vertex carries a real weight in `[1, 2)`, starting from root
/// weight 1, so integer ratios give exact trees. The construction is
/// deterministic; `seed` is only recorded in the metadata. A vertex of weight `ω` at level `d` gets `c = ⌊ω r_d⌋`
/// children of weight `ω r_d / c` each, where `r_d` is the one-step ratio.
/// Weights are conserved, so the descendants of a vertex of weight `ω` at
/// offset `l` number `ω R / 2 < count ≤ ω R` with `R` the ideal ratio, and
/// the census constant stays below 2.
///
/// Fails when a level target is smaller than the previous one, and when the
/// empirical census constant exceeds `h.c3`.
pub fn generate_hset_tree(
    h: &HProfile,
    m_star: u32,
    depth: usize,
    j_min: u64,
    seed: u64,
) -> Result<GeneratedTree, HsetError> {
    h.validate()?;
    if m_star == 0 {
        return Err(HsetError::Profile("m_* must be positive".into()));
    }
    let mut targets = vec![1.0f64];
    for d in 1..=depth {
        let t = h.branching_ratio(m_star, j_min, j_min + d as u64);
        if !(t.is_finite() && t < (1u64 << 40) as f64) {
            return Err(HsetError::Profile(format!("layer {d} target {t} too large")));
        }
        let prev = targets[d - 1];
        if t < prev * (1.0 - 1e-12) {
            return Err(HsetError::Infeasible {
                depth: d - 1,
                next: d,
                from: prev.round() as usize,
                to: t.round() as usize,
            });
        }
        targets.push(t);
    }
    let estimate: f64 = targets.iter().map(|t| t + 1.0).sum();
    if estimate > crate::tree::DEFAULT_MAX_VERTICES as f64 {
        return Err(HsetError::Tree(crate::tree::TreeError::TooLarge {
            count: estimate as usize,
            cap: crate::tree::DEFAULT_MAX_VERTICES,
        }));
    }
    let mut weight = vec![1.0f64];
    let mut sizes = vec![1usize];
    let mut parent = vec![0usize];
    let mut level_start = 0usize;
    for d in 1..=depth {
        let prev = sizes[d - 1];
        let r = targets[d] / targets[d - 1];
        let mut count = 0usize;
        for i in 0..prev {
            let mass = weight[level_start + i] * r;
            let kids = (mass.floor() as usize).max(1);
            let share = mass / kids as f64;
            for _ in 0..kids {
                parent.push(level_start + i);
                weight.push(share);
            }
            count += kids;
        }
        level_start += prev;
        sizes.push(count);
    }
    let tree = Tree::build(parent)?;
    let c_hat = census_constant(&tree, h, m_star, j_min, 8);
    if c_hat > h.c3 {
        return Err(HsetError::Census { found: c_hat, c3: h.c3 });
    }
    Ok(GeneratedTree {
        layer_sizes: sizes,
        j_min,
        c_hat,
        meta: ProfileMeta {
            profile: h.clone(),
            m_star,
            j_min,
            depth,
            seed,
            c_hat,
        },
        tree,
    })
}

/// Smallest `c ≥ 1` with
/// `c^{-1} R(j, j') ≤ card V_{j'-j}(ξ) ≤ c R(j, j')` over sampled vertices
/// `ξ` and all offsets, where `R` is [`HProfile::branching_ratio`].
///
/// At most `per_depth` vertices per depth are sampled (evenly spaced in BFS
/// order, always including the first and last); `usize::MAX` checks all.
pub fn census_constant(tree: &Tree, h: &HProfile, m_star: u32, j_min: u64, per_depth: usize) -> f64 {
    let counts = tree.depth_counts();
    let mut offsets = vec![0usize; counts.len() + 1];
    for (d, c) in counts.iter().enumerate() {
        offsets[d + 1] = offsets[d] + c;
    }
    let bfs = tree.bfs_order();
    let mut worst = 1.0f64;
    for (d, &c) in counts.iter().enumerate() {
        let picks: Vec<usize> = if c <= per_depth {
            (0..c).collect()
        } else {
            let mut v: Vec<usize> = (0..per_depth)
                .map(|k| k * (c - 1) / (per_depth - 1).max(1))
                .collect();
            v.dedup();
            v
        };
        for k in picks {
            let xi = bfs[offsets[d] + k];
            let mut level = vec![xi];
            let mut l = 0usize;
            loop {
                let ideal = h.branching_ratio(m_star, j_min + d as u64, j_min + (d + l) as u64);
                let got = level.len() as f64;
                worst = worst.max(got / ideal).max(ideal / got);
                l += 1;
                if d + l >= counts.len() {
                    break;
                }
                level = level.iter().flat_map(|&v| tree.children(v)).copied().collect();
                if level.is_empty() {
                    worst = f64::INFINITY;
                    break;
                }
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hset::Tau;

    #[test]
    fn binary_profile_gives_full_binary_tree() {
        let h = HProfile::new(1.0, 0.0, Tau::Const, 1.0).unwrap();
        let g = generate_hset_tree(&h, 1, 6, 0, 7).unwrap();
        assert_eq!(g.layer_sizes, vec![1, 2, 4, 8, 16, 32, 64]);
        for v in 0..g.tree.vertex_count() {
            let d = g.tree.depth(v);
            for l in 0..=(6 - d) {
                assert_eq!(g.tree.descendants_at_distance(v, l).unwrap().len(), 1 << l);
            }
        }
        assert!((g.c_hat - 1.0).abs() < 1e-9);
    }

    #[test]
    fn depth_zero_is_single_vertex() {
        let h = HProfile::new(1.0, 0.0, Tau::Const, 1.0).unwrap();
        assert_eq!(generate_hset_tree(&h, 1, 0, 0, 0).unwrap().tree.vertex_count(), 1);
    }

    #[test]
    fn shrinking_profile_is_rejected() {
        let h = HProfile::new(0.0, 1.0, Tau::Const, 4.0).unwrap();
        assert!(matches!(
            generate_hset_tree(&h, 1, 5, 1, 0),
            Err(HsetError::Infeasible { .. })
        ));
    }

    #[test]
    fn log_profile_layers_grow_linearly() {
        let h = HProfile::new(0.0, -1.0, Tau::Const, 4.0).unwrap();
        let g = generate_hset_tree(&h, 1, 64, 1, 3).unwrap();
        let s = &g.layer_sizes;
        assert!(s[64] > s[32] && s[32] > s[16]);
        let r = s[64] as f64 / s[32] as f64;
        assert!((1.0..4.0).contains(&r), "{s:?}");
        let exact = census_constant(&g.tree, &h, 1, 1, usize::MAX);
        assert!(exact < 2.0, "{exact}");
    }
}
