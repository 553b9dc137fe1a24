//! Cross-validation sweep: every closed-form rule checked against its
//! first-principles oracle, over all connected diagrams up to a rank bound
//! and every parabolic subset.  Violations are collected rather than
//! panicked so `selfcheck` can report them all; assertions inside the
//! library still abort loudly if a structural invariant breaks mid-walk.

use std::collections::BTreeSet;
use std::fmt;

use crate::dynkin::{
    all_connected_diagrams, cartan_matrix_for, inverse_cartan, DynkinDiagram, Family,
    ParabolicSubset, RationalMatrix,
};
use crate::marks::mark_report;
use crate::tate::{presentation, brute_fixed_monomials, vanishes, zeta, TwistedPolyRing};
use crate::twists::{self_dual_twist_matrix, twist_vector, twist_vector_oracle};
use crate::weyl::{circ_in_theta, circ_oracle, circ_rule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub case: String,
    pub what: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.case, self.what)
    }
}

fn push(out: &mut Vec<Violation>, case: &str, what: String) {
    out.push(Violation {
        case: case.to_string(),
        what,
    });
}

/// Per-(family, rank) checks: ° is an involution and matches the dominance
/// oracle; the closed-form inverse Cartan matrix really inverts the Cartan
/// matrix.
fn check_family(family: Family, rank: usize, out: &mut Vec<Violation>) {
    let case = format!("{}{}", family.letter(), rank);
    let rule = circ_rule(family, rank);
    for i in 0..rank {
        if rule[rule[i]] != i {
            push(out, &case, format!("circ rule is not an involution at {i}"));
        }
    }
    let oracle = circ_oracle(family, rank);
    if rule != oracle {
        push(out, &case, format!("circ rule {rule:?} != oracle {oracle:?}"));
    }
    let prod = inverse_cartan(family, rank).mul_int(&cartan_matrix_for(family, rank));
    if prod != RationalMatrix::identity(rank) {
        push(out, &case, "inverse Cartan does not invert Cartan".into());
    }
}

fn check_parabolic(d: &DynkinDiagram, label: &str, theta: &BTreeSet<usize>, out: &mut Vec<Violation>) {
    let names: Vec<String> = theta.iter().map(|&t| d.node_name(t)).collect();
    let case = format!("{label} theta={{{}}}", names.join(","));
    let p = match ParabolicSubset::new(d, theta) {
        Ok(p) => p,
        Err(e) => {
            push(out, &case, format!("parabolic construction failed: {e}"));
            return;
        }
    };

    // The Θ-components must partition Θ, and exceptional component types can
    // only classify the full diagram, so they never touch a white node.
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for c in &p.components {
        if c.nodes.len() != c.rank {
            push(out, &case, format!("component rank {} != node count", c.rank));
        }
        for &n in &c.nodes {
            if !p.is_theta(n) || !seen.insert(n) {
                push(out, &case, "components do not partition theta".into());
            }
        }
        if matches!(
            (c.family, c.rank),
            (Family::E, 8) | (Family::F, 4) | (Family::G, 2)
        ) {
            let touches_white = c
                .nodes
                .iter()
                .flat_map(|&n| d.neighbours(n))
                .any(|&m| !p.is_theta(m));
            if touches_white {
                push(out, &case, format!("{}{} component with a white neighbour", c.family.letter(), c.rank));
            }
        }
    }
    if seen.len() != p.theta.len() {
        push(out, &case, "components do not cover theta".into());
    }

    // Twist vectors: closed-form projection formula vs the dominance walk,
    // and invariance under °.
    for &t in &p.theta {
        let a = twist_vector(d, &p, t);
        let b = twist_vector_oracle(d, &p, t);
        match (&a, &b) {
            (Ok(a), Ok(b)) if a != b => {
                push(out, &case, format!("twist of {}: formula {a:?} != oracle {b:?}", d.node_name(t)));
            }
            (Err(e), _) | (_, Err(e)) => {
                push(out, &case, format!("twist of {} failed: {e}", d.node_name(t)));
            }
            _ => {}
        }
        let dual = circ_in_theta(&p, t);
        if dual != t {
            if circ_in_theta(&p, dual) != t {
                push(out, &case, format!("circ in theta not involutive at {}", d.node_name(t)));
            }
            if a.ok() != twist_vector(d, &p, dual).ok() {
                push(out, &case, format!("twist of {} differs from its dual's", d.node_name(t)));
            }
        }
    }

    // Marked diagrams: rule-based marks span the same subspace as the parity
    // columns of the twist matrix.
    match mark_report(d, &p) {
        Ok(r) => {
            if !r.agree {
                push(out, &case, "rule marks span != computed marks span".into());
            }
        }
        Err(e) => push(out, &case, format!("mark report failed: {e}")),
    }

    let tm = match self_dual_twist_matrix(d, &p) {
        Ok(tm) => tm,
        Err(e) => {
            push(out, &case, format!("twist matrix failed: {e}"));
            return;
        }
    };

    // Vanishing sanity on the zero twist and unit twists: ζ exists exactly
    // when the twist does not vanish.
    let mut probes: Vec<Vec<i64>> = vec![vec![0; p.white.len()]];
    for i in 0..p.white.len() {
        let mut t = vec![0i64; p.white.len()];
        t[i] = 1;
        probes.push(t);
    }
    for t in &probes {
        if vanishes(&tm, t) == zeta(&tm, t).is_some() {
            push(out, &case, format!("zeta/vanishing mismatch at twist {t:?}"));
        }
    }
    if vanishes(&tm, &probes[0]) {
        push(out, &case, "zero twist vanishes".into());
    }

    // Presentation self-checks run inside `presentation`; on top, for small
    // cases, the generated fixed monomials must agree with brute enumeration.
    if tm.self_dual.len() <= 6 {
        let ring = match TwistedPolyRing::from_parabolic(d, &p) {
            Ok(r) => r,
            Err(e) => {
                push(out, &case, format!("ring construction failed: {e}"));
                return;
            }
        };
        let t0 = vec![0i64; p.white.len()];
        let pres = presentation(&ring, &t0);
        if tm.self_dual.len() <= 2 && p.white.len() <= 3 {
            let brute = brute_fixed_monomials(&tm, &t0, 2, 3);
            let generated = pres.generated_fixed_monomials(2, 3);
            if brute != generated {
                push(out, &case, format!(
                    "brute fixed monomials ({}) != generated ({})",
                    brute.len(),
                    generated.len()
                ));
            }
        }
    }
}

/// Run every check on every connected diagram of rank ≤ `max_rank` and every
/// parabolic subset, in deterministic order.
pub fn sweep(max_rank: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    for d in all_connected_diagrams(max_rank) {
        let (family, rank) = d.components()[0];
        check_family(family, rank, &mut out);
        let label = format!("{}{}", family.letter(), rank);
        for mask in 0u64..(1u64 << rank) {
            let theta: BTreeSet<usize> = (0..rank).filter(|&i| mask >> i & 1 == 1).collect();
            check_parabolic(&d, &label, &theta, &mut out);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_rank_4_clean() {
        let violations = sweep(4);
        assert!(violations.is_empty(), "{violations:?}");
    }
}
