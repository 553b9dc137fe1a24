//! Weyl-group machinery on weights in the fundamental-weight basis:
//! simple reflections, dominance walks relative to a parabolic subset,
//! and the duality involution ° = −w₀.

use crate::dynkin::{DynkinDiagram, Family, IntMatrix, ParabolicSubset, Rat};
use crate::{Error, Result};

pub fn zero_weight(n: usize) -> Vec<Rat> {
    vec![Rat::from_integer(0); n]
}

pub fn fundamental_weight(n: usize, node: usize) -> Vec<Rat> {
    let mut w = zero_weight(n);
    w[node] = Rat::from_integer(1);
    w
}

pub fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Rat]) -> Vec<Rat> {
    a.iter().map(|x| -x).collect()
}

/// Simple reflection: s_i(λ) = λ − λ_i · (row i of the Cartan matrix).
pub fn reflect(cartan: &IntMatrix, lambda: &mut [Rat], i: usize) {
    let c = lambda[i];
    if c == Rat::from_integer(0) {
        return;
    }
    for (j, entry) in cartan.a[i].iter().enumerate() {
        lambda[j] -= c * Rat::from_integer(*entry);
    }
}

pub fn is_theta_dominant(p: &ParabolicSubset, lambda: &[Rat]) -> bool {
    p.theta.iter().all(|&t| lambda[t] >= Rat::from_integer(0))
}

/// Number of positive roots of the Levi of Θ — the length of its longest
/// Weyl element, hence a hard cap on any dominance walk.
pub fn theta_positive_roots(p: &ParabolicSubset) -> usize {
    p.components
        .iter()
        .map(|c| c.family.positive_roots(c.rank))
        .sum()
}

/// Walk λ to its unique Θ-dominant Weyl conjugate, reflecting at the
/// smallest-index Θ-node whose coordinate is negative.
pub fn dominate(d: &DynkinDiagram, p: &ParabolicSubset, lambda: &[Rat]) -> Result<Vec<Rat>> {
    let cartan = d.cartan_matrix();
    let cap = theta_positive_roots(p) + 1;
    let mut w = lambda.to_vec();
    for _ in 0..cap {
        match p
            .theta
            .iter()
            .copied()
            .find(|&t| w[t] < Rat::from_integer(0))
        {
            None => return Ok(w),
            Some(t) => reflect(&cartan, &mut w, t),
        }
    }
    Err(Error::IterationCap("dominate"))
}

/// The involution ° as a table: `perm[i]` is the 0-based local index of the
/// dual of local node `i` in a connected diagram of the given family/rank.
pub fn circ_rule(family: Family, rank: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..rank).collect();
    match family {
        Family::A => {
            for (i, p) in perm.iter_mut().enumerate() {
                *p = rank - 1 - i;
            }
        }
        Family::D if rank % 2 == 1 => perm.swap(rank - 2, rank - 1),
        Family::E if rank == 6 => {
            perm.swap(0, 5);
            perm.swap(2, 4);
        }
        _ => {}
    }
    perm
}

/// ° computed from first principles: the dominant conjugate of −ω_i is
/// ω_{i°}.  Panics if the walk does not land on a fundamental weight.
pub fn circ_oracle(family: Family, rank: usize) -> Vec<usize> {
    let d = DynkinDiagram::new(&[(family, rank)]).unwrap();
    let all: std::collections::BTreeSet<usize> = (0..rank).collect();
    let p = ParabolicSubset::new(&d, &all).unwrap();
    let mut perm = Vec::with_capacity(rank);
    for i in 0..rank {
        let w = dominate(&d, &p, &neg(&fundamental_weight(rank, i))).unwrap();
        let ones: Vec<usize> = (0..rank)
            .filter(|&j| w[j] != Rat::from_integer(0))
            .collect();
        assert!(
            ones.len() == 1 && w[ones[0]] == Rat::from_integer(1),
            "-w0(omega_{i}) is not a fundamental weight in {family}{rank}: {w:?}"
        );
        perm.push(ones[0]);
    }
    perm
}

/// ° on a global Θ-node, through the classification of its Θ-component.
pub fn circ_in_theta(p: &ParabolicSubset, node: usize) -> usize {
    let c = p
        .component_containing(node)
        .expect("node must lie in theta");
    let local = c.local_of(node).unwrap() - 1;
    c.nodes[circ_rule(c.family, c.rank)[local]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynkin::all_connected_diagrams;

    #[test]
    fn dominate_small() {
        let d: DynkinDiagram = "A2".parse().unwrap();
        let all = (0..2).collect();
        let p = ParabolicSubset::new(&d, &all).unwrap();
        let w = dominate(&d, &p, &neg(&fundamental_weight(2, 0))).unwrap();
        assert_eq!(w, fundamental_weight(2, 1));

        let d: DynkinDiagram = "B2".parse().unwrap();
        let all = (0..2).collect();
        let p = ParabolicSubset::new(&d, &all).unwrap();
        let w = dominate(&d, &p, &neg(&fundamental_weight(2, 0))).unwrap();
        assert_eq!(w, fundamental_weight(2, 0));
    }

    #[test]
    fn dominate_respects_white_nodes() {
        // Θ = {1} in A₂: reflections never touch coordinate 2's sign source.
        let d: DynkinDiagram = "A2".parse().unwrap();
        let theta = [0usize].into_iter().collect();
        let p = ParabolicSubset::new(&d, &theta).unwrap();
        let w = dominate(&d, &p, &neg(&fundamental_weight(2, 0))).unwrap();
        // −ω₁ = (−1,0) → s₁ → (1,−1), Θ-dominant already.
        assert_eq!(w[0], Rat::from_integer(1));
        assert_eq!(w[1], Rat::from_integer(-1));
    }

    #[test]
    fn circ_rule_matches_oracle_small_ranks() {
        for d in all_connected_diagrams(6) {
            let (family, rank) = d.components()[0];
            assert_eq!(
                circ_rule(family, rank),
                circ_oracle(family, rank),
                "{family}{rank}"
            );
        }
    }

    #[test]
    fn circ_is_involution() {
        for d in all_connected_diagrams(8) {
            let (family, rank) = d.components()[0];
            let perm = circ_rule(family, rank);
            for i in 0..rank {
                assert_eq!(perm[perm[i]], i);
            }
        }
    }
}
