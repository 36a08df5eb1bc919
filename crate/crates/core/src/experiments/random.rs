//! Seeded random trees and vertex weights.

use crate::tree::Tree;
use rand::Rng;

/// Random recursive tree on `n ≥ 1` vertices in which no vertex has more
/// than `max_branching ≥ 1` children. Each new vertex attaches to a uniform
/// vertex among those with spare capacity.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize, max_branching: usize) -> Tree {
    assert!(n >= 1 && max_branching >= 1);
    let mut parent = vec![0usize];
    let mut kids = vec![0usize];
    let mut open = vec![0usize];
    for v in 1..n {
        let i = rng.random_range(0..open.len());
        let p = open[i];
        parent.push(p);
        kids.push(0);
        kids[p] += 1;
        if kids[p] == max_branching {
            open.swap_remove(i);
        }
        open.push(v);
    }
    Tree::build(parent).expect("random recursive trees are valid")
}

/// Positive weights `exp(U)` with `U` uniform on `[-spread, spread]`.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize, spread: f64) -> Vec<f64> {
    (0..n)
        .map(|_| {
            if spread > 0.0 {
                rng.random_range(-spread..spread).exp()
            } else {
                1.0
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn branching_cap_holds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for b in 1..=3 {
            let t = random_tree(&mut rng, 500, b);
            assert_eq!(t.vertex_count(), 500);
            assert!(t.max_branching() <= b);
        }
    }
}
