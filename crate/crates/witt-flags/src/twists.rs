//! Twist vectors m^ϑ: the character by which duality shifts the line bundle
//! attached to a Θ-node ϑ.  Two independent routes compute them — a closed
//! formula in inverse Cartan entries of the Θ-component, and a Weyl-group
//! dominance walk — and must agree everywhere.

use crate::dynkin::{DynkinDiagram, ParabolicSubset, Rat, ThetaComponent};
use crate::gf2::{F2Matrix, F2Vec};
use crate::weyl::{circ_in_theta, dominate, fundamental_weight, neg};
use crate::{Error, Result};

/// The unique neighbour of white node `beta` inside `comp`, if any.
/// Uniqueness holds because diagrams are forests; violated means a bug.
pub fn component_neighbour(
    d: &DynkinDiagram,
    comp: &ThetaComponent,
    beta: usize,
) -> Option<usize> {
    let mut hits = d
        .neighbours(beta)
        .iter()
        .copied()
        .filter(|&n| comp.contains(n));
    let first = hits.next();
    assert!(hits.next().is_none(), "white node adjacent to a component twice");
    first
}

/// Projection coefficient c_{ϑβ} = −C̄^{ϑ ϑ_β} · C_{ϑ_β β}, where ϑ_β is the
/// neighbour of β in ϑ's component (zero when there is none).
pub fn projection_coeff(
    d: &DynkinDiagram,
    comp: &ThetaComponent,
    theta_node: usize,
    beta: usize,
) -> Rat {
    let Some(tb) = component_neighbour(d, comp, beta) else {
        return Rat::from_integer(0);
    };
    let inv = comp.inverse_cartan();
    let lt = comp.local_of(theta_node).expect("theta node in component") - 1;
    let ltb = comp.local_of(tb).unwrap() - 1;
    let cart = d.cartan_matrix();
    -inv.a[lt][ltb] * Rat::from_integer(cart.a[tb][beta])
}

/// m^ϑ over the white nodes (ascending order): −(c_{ϑβ} + c_{ϑ°β}).
/// Entries are always integral; a non-integral value is reported as an error
/// rather than silently truncated.
pub fn twist_vector(d: &DynkinDiagram, p: &ParabolicSubset, theta_node: usize) -> Result<Vec<i64>> {
    let comp = p
        .component_containing(theta_node)
        .expect("twist of a non-theta node");
    let dual = circ_in_theta(p, theta_node);
    let mut out = Vec::with_capacity(p.white.len());
    for &beta in &p.white {
        let m = -(projection_coeff(d, comp, theta_node, beta)
            + projection_coeff(d, comp, dual, beta));
        if !m.is_integer() {
            return Err(Error::NonIntegralTwist(d.node_name(theta_node)));
        }
        out.push(m.to_integer());
    }
    Ok(out)
}

/// Oracle: the Θ-dominant conjugate of −ω_ϑ is ω_{ϑ°} + τ with τ supported on
/// white nodes; m^ϑ is the white part of τ.
pub fn twist_vector_oracle(
    d: &DynkinDiagram,
    p: &ParabolicSubset,
    theta_node: usize,
) -> Result<Vec<i64>> {
    let n = d.node_count();
    let dual = circ_in_theta(p, theta_node);
    let w = dominate(d, p, &neg(&fundamental_weight(n, theta_node)))?;
    for &t in &p.theta {
        let expect = if t == dual { 1 } else { 0 };
        assert_eq!(
            w[t],
            Rat::from_integer(expect),
            "dominant conjugate of -omega is not omega-dual + white part"
        );
    }
    let mut out = Vec::with_capacity(p.white.len());
    for &beta in &p.white {
        assert!(w[beta].is_integer());
        out.push(w[beta].to_integer());
    }
    Ok(out)
}

/// Twist data of all self-dual Θ-nodes: the integer matrix M with one column
/// m^ϑ per self-dual ϑ, rows indexed by white nodes.
#[derive(Debug, Clone)]
pub struct TwistMatrix {
    pub white: Vec<usize>,
    pub self_dual: Vec<usize>,
    pub columns: Vec<Vec<i64>>,
}

impl TwistMatrix {
    /// M̄: reduction mod 2, rows = white nodes, columns = self-dual Θ-nodes.
    pub fn f2(&self) -> F2Matrix {
        let cols: Vec<F2Vec> = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .enumerate()
                    .fold(0u64, |v, (i, &x)| v | (((x.rem_euclid(2)) as u64) << i))
            })
            .collect();
        F2Matrix::from_cols(self.white.len(), &cols)
    }

    /// Integer twist M·j for an exponent vector j over the self-dual nodes.
    pub fn apply(&self, j: &[i64]) -> Vec<i64> {
        assert_eq!(j.len(), self.self_dual.len());
        let mut out = vec![0i64; self.white.len()];
        for (col, &jj) in self.columns.iter().zip(j) {
            for (o, &m) in out.iter_mut().zip(col) {
                *o += m * jj;
            }
        }
        out
    }
}

pub fn self_dual_twist_matrix(d: &DynkinDiagram, p: &ParabolicSubset) -> Result<TwistMatrix> {
    let self_dual: Vec<usize> = p
        .theta
        .iter()
        .copied()
        .filter(|&t| circ_in_theta(p, t) == t)
        .collect();
    let mut columns = Vec::with_capacity(self_dual.len());
    for &t in &self_dual {
        columns.push(twist_vector(d, p, t)?);
    }
    Ok(TwistMatrix {
        white: p.white.clone(),
        self_dual,
        columns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynkin::{all_connected_diagrams, DynkinDiagram};
    use std::collections::BTreeSet;

    fn setup(s: &str, theta: &[&str]) -> (DynkinDiagram, ParabolicSubset) {
        let d: DynkinDiagram = s.parse().unwrap();
        let p = ParabolicSubset::from_names(&d, theta).unwrap();
        (d, p)
    }

    #[test]
    fn a6_middle_twist() {
        // Θ = {2,…,6} in A₆ is an A₅ whose only self-dual node is ϑ = 4;
        // its twist is odd at the single white node.
        let (d, p) = setup("A6", &["2", "3", "4", "5", "6"]);
        let tm = self_dual_twist_matrix(&d, &p).unwrap();
        assert_eq!(tm.self_dual, vec![d.parse_node("4").unwrap()]);
        assert_eq!(tm.columns, vec![vec![-1]]);
    }

    #[test]
    fn e6_twist_parities() {
        // Θ = {1,3,4,5,6} in E₆ is an A₅ (chain 1–3–4–5–6); self-dual ϑ = 4,
        // twist odd at white node 2.
        let (d, p) = setup("E6", &["1", "3", "4", "5", "6"]);
        let tm = self_dual_twist_matrix(&d, &p).unwrap();
        assert_eq!(tm.self_dual, vec![d.parse_node("4").unwrap()]);
        assert_eq!(tm.white, vec![d.parse_node("2").unwrap()]);
        assert_eq!(tm.columns[0][0].rem_euclid(2), 1);
    }

    #[test]
    fn formula_matches_oracle_everywhere_small() {
        for d in all_connected_diagrams(5) {
            let n = d.node_count();
            for mask in 0u32..(1 << n) {
                let theta: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let p = ParabolicSubset::new(&d, &theta).unwrap();
                for &t in &p.theta {
                    let a = twist_vector(&d, &p, t).unwrap();
                    let b = twist_vector_oracle(&d, &p, t).unwrap();
                    assert_eq!(a, b, "{d} theta={theta:?} node={t}");
                    let dual = circ_in_theta(&p, t);
                    let c = twist_vector(&d, &p, dual).unwrap();
                    assert_eq!(a, c, "m^theta != m^theta-dual");
                }
            }
        }
    }

    #[test]
    fn self_dual_matrix_shape() {
        // A₃ ⊃ Θ = {1,3}: both nodes self-dual (two A₁ components).
        let (d, p) = setup("A3", &["1", "3"]);
        let tm = self_dual_twist_matrix(&d, &p).unwrap();
        assert_eq!(tm.self_dual.len(), 2);
        assert_eq!(tm.white, vec![1]);
        assert_eq!(tm.columns, vec![vec![-1], vec![-1]]);
        let f2 = tm.f2();
        assert_eq!(f2.nrows, 1);
        assert_eq!(f2.ncols, 2);
        assert!(f2.get(0, 0) && f2.get(0, 1));
    }
}
