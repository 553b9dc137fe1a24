//! Marked Dynkin diagrams: the non-vanishing twist subspace drawn as marks
//! on white nodes.  Marks are computed twice — from twist-vector parities,
//! and from the case-by-case marking rules — and must span the same
//! GF(2)-subspace.  Renders to aligned text and to DOT.

use std::collections::BTreeSet;

use crate::dynkin::{DynkinDiagram, Family, ParabolicSubset, ThetaComponent};
use crate::gf2::F2Subspace;
use crate::twists::self_dual_twist_matrix;
use crate::{Error, Result};

/// One mark: a joint highlight of a set of white nodes.  A mark over k nodes
/// contributes the single vector e_{β₁}+…+e_{β_k} to the twist span.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mark {
    pub support: Vec<usize>,
}

impl Mark {
    fn from_set(s: BTreeSet<usize>) -> Option<Mark> {
        if s.is_empty() {
            None
        } else {
            Some(Mark {
                support: s.into_iter().collect(),
            })
        }
    }
}

/// Marks from the twist matrix: for every self-dual ϑ, the set of white
/// nodes where m^ϑ is odd.  Trivial columns contribute no mark.
pub fn computed_marks(d: &DynkinDiagram, p: &ParabolicSubset) -> Result<Vec<(usize, Mark)>> {
    let tm = self_dual_twist_matrix(d, p)?;
    let mut out = Vec::new();
    for (t, col) in tm.self_dual.iter().zip(&tm.columns) {
        let support: BTreeSet<usize> = p
            .white
            .iter()
            .zip(col)
            .filter(|(_, &m)| m.rem_euclid(2) == 1)
            .map(|(&b, _)| b)
            .collect();
        if let Some(mark) = Mark::from_set(support) {
            out.push((*t, mark));
        }
    }
    Ok(out)
}

/// White neighbours of a set of nodes.  Neighbours outside a Θ-component are
/// automatically white: anything in Θ adjacent to the component is in it.
fn white_neighbours(d: &DynkinDiagram, p: &ParabolicSubset, nodes: &[usize]) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for &n in nodes {
        for &m in d.neighbours(n) {
            if !p.is_theta(m) {
                out.insert(m);
            }
        }
    }
    out
}

/// The case-by-case marking rule for one Θ-component, dispatched on the
/// ambient family and the component's shape.
fn component_rule_marks(
    d: &DynkinDiagram,
    p: &ParabolicSubset,
    c: &ThetaComponent,
) -> Result<Vec<Mark>> {
    let ambient = d.ambient_family(c.nodes[0]);
    let amb_comp = d.component_of(c.nodes[0]);
    let amb_rank = d.components()[amb_comp].1;
    let all_nbrs = || white_neighbours(d, p, &c.nodes);
    let local_nbrs =
        |locals: &[usize]| -> BTreeSet<usize> {
            let nodes: Vec<usize> = locals.iter().map(|&l| c.nodes[l - 1]).collect();
            white_neighbours(d, p, &nodes)
        };
    let joint = |s: BTreeSet<usize>| -> Vec<Mark> { Mark::from_set(s).into_iter().collect() };
    let unique = |s: BTreeSet<usize>| -> Result<Vec<Mark>> {
        if s.len() > 1 {
            return Err(Error::UnreachableRule(format!(
                "expected at most one neighbour, got {s:?}"
            )));
        }
        Ok(joint(s))
    };
    let none = Vec::new();
    let bad = || {
        Error::UnreachableRule(format!(
            "{}{} component inside ambient {ambient}",
            c.family, c.rank
        ))
    };

    Ok(match ambient {
        Family::A => match (c.family, c.rank % 2) {
            (Family::A, 1) => joint(all_nbrs()),
            (Family::A, _) => none,
            _ => return Err(bad()),
        },
        Family::B => {
            let short_root = d.node_at(amb_comp, amb_rank);
            match c.family {
                Family::B => unique(all_nbrs())?,
                Family::A if c.rank % 2 == 1 => {
                    let mut s = all_nbrs();
                    s.remove(&short_root);
                    joint(s)
                }
                Family::A => none,
                _ => return Err(bad()),
            }
        }
        Family::C => {
            let long_root = d.node_at(amb_comp, amb_rank);
            if c.contains(long_root) {
                // Covers C-shaped components and the singleton {long root}.
                none
            } else {
                match (c.family, c.rank % 2) {
                    (Family::A, 1) => joint(all_nbrs()),
                    (Family::A, _) => none,
                    _ => return Err(bad()),
                }
            }
        }
        Family::D => match (c.family, c.rank % 2) {
            (Family::A, _) if c.rank == 1 => joint(all_nbrs()),
            (Family::A, 1) => joint(local_nbrs(&[1, c.rank])),
            (Family::A, _) => none,
            (Family::D, 0) => unique(all_nbrs())?,
            (Family::D, _) => none,
            _ => return Err(bad()),
        },
        Family::E => match (c.family, c.rank) {
            (Family::A, 1) => joint(all_nbrs()),
            (Family::A, 3) => joint(local_nbrs(&[1, 3])),
            (Family::A, 5) => joint(local_nbrs(&[1, 3, 5])),
            (Family::A, 7) => unique(all_nbrs())?,
            (Family::A, _) => none,
            (Family::D, 4 | 6 | 7) => all_nbrs()
                .into_iter()
                .map(|b| Mark { support: vec![b] })
                .collect(),
            (Family::D, 5) => {
                // Exactly one fork arm has a white neighbour; mark it.
                let s = local_nbrs(&[4, 5]);
                if s.len() != 1 {
                    return Err(Error::UnreachableRule(format!(
                        "D5 in E with {} fork-arm neighbours",
                        s.len()
                    )));
                }
                joint(s)
            }
            (Family::E, 6) => none,
            (Family::E, 7) => unique(all_nbrs())?,
            // A full E8 subset: the whole diagram, nothing left to mark.
            (Family::E, 8) => none,
            _ => return Err(bad()),
        },
        Family::F => {
            let locals: BTreeSet<usize> =
                c.nodes.iter().map(|&n| d.bourbaki_index(n)).collect();
            let key: Vec<usize> = locals.into_iter().collect();
            let marks: &[&[usize]] = match key.as_slice() {
                [1] => &[&[2]],
                [2] => &[&[1]],
                [3] => &[&[2, 4]],
                [4] => &[&[3]],
                [1, 2] => &[],
                [2, 3] => &[&[1]],
                [3, 4] => &[],
                [1, 2, 3] => &[&[4]],
                [2, 3, 4] => &[&[1]],
                [1, 2, 3, 4] => &[],
                _ => return Err(bad()),
            };
            marks
                .iter()
                .map(|supp| Mark {
                    support: supp
                        .iter()
                        .map(|&b| d.node_at(amb_comp, b))
                        .collect(),
                })
                .collect()
        }
        Family::G => match c.rank {
            1 => joint(all_nbrs()),
            2 => none,
            _ => return Err(bad()),
        },
    })
}

/// Marks from the case-by-case rules, in component order.
pub fn rule_marks(d: &DynkinDiagram, p: &ParabolicSubset) -> Result<Vec<Mark>> {
    let mut out = Vec::new();
    for c in &p.components {
        out.extend(component_rule_marks(d, p, c)?);
    }
    Ok(out)
}

/// GF(2)-span of the mark vectors, coordinates = white-node positions.
pub fn span_of_marks(p: &ParabolicSubset, marks: &[Mark]) -> F2Subspace {
    let vecs: Vec<u64> = marks
        .iter()
        .map(|m| {
            m.support
                .iter()
                .map(|&b| p.white_index(b).expect("mark on a non-white node"))
                .fold(0u64, |v, i| v | (1 << i))
        })
        .collect();
    F2Subspace::from_vectors(p.white.len(), &vecs)
}

/// Both mark routes plus their span comparison.
#[derive(Debug, Clone)]
pub struct MarkReport {
    pub computed: Vec<(usize, Mark)>,
    pub rule: Vec<Mark>,
    pub span: F2Subspace,
    pub agree: bool,
}

pub fn mark_report(d: &DynkinDiagram, p: &ParabolicSubset) -> Result<MarkReport> {
    let computed = computed_marks(d, p)?;
    let rule = rule_marks(d, p)?;
    let computed_only: Vec<Mark> = computed.iter().map(|(_, m)| m.clone()).collect();
    let span = span_of_marks(p, &computed_only);
    let agree = span == span_of_marks(p, &rule);
    Ok(MarkReport {
        computed,
        rule,
        span,
        agree,
    })
}

/// Connector drawn between consecutive spine nodes `a`, `b`.
fn connector(d: &DynkinDiagram, a: usize, b: usize) -> &'static str {
    match d.edge_between(a, b) {
        Some(e) if e.multiplicity == 2 && e.long == Some(a) => "==>",
        Some(e) if e.multiplicity == 2 => "<==",
        Some(e) if e.multiplicity == 3 && e.long == Some(a) => "≡≡>",
        Some(e) if e.multiplicity == 3 => "<≡≡",
        Some(_) => "---",
        None => "   ",
    }
}

fn glyph(p: &ParabolicSubset, node: usize) -> char {
    if p.is_theta(node) {
        '*'
    } else {
        'o'
    }
}

/// Aligned text rendering: label line, spine line, and for D/E families the
/// branch node below its attachment point.  Marks are listed underneath.
pub fn render_text(d: &DynkinDiagram, p: &ParabolicSubset, marks: &[Mark]) -> String {
    let mut out = String::new();
    for (ci, &(family, rank)) in d.components().iter().enumerate() {
        let node = |b: usize| d.node_at(ci, b);
        // Spine in drawing order, plus optional (branch node, spine index).
        let (spine, branch): (Vec<usize>, Option<(usize, usize)>) = match family {
            Family::D => {
                let s: Vec<usize> = (1..=rank - 1).map(node).collect();
                (s, Some((node(rank), rank - 3)))
            }
            Family::E => {
                let mut s = vec![node(1)];
                s.extend((3..=rank).map(node));
                (s, Some((node(2), 2)))
            }
            _ => ((1..=rank).map(node).collect(), None),
        };
        let cell = 4;
        let mut labels = String::new();
        let mut glyphs = String::new();
        for (i, &n) in spine.iter().enumerate() {
            let name = d.node_name(n);
            labels.push_str(&format!("{name:<cell$}"));
            glyphs.push(glyph(p, n));
            if i + 1 < spine.len() {
                glyphs.push_str(connector(d, n, spine[i + 1]));
            }
        }
        out.push_str(labels.trim_end());
        out.push('\n');
        out.push_str(&glyphs);
        out.push('\n');
        if let Some((bnode, at)) = branch {
            let pad = " ".repeat(at * cell);
            out.push_str(&format!("{pad}|\n"));
            out.push_str(&format!("{pad}{} {}\n", glyph(p, bnode), d.node_name(bnode)));
        }
    }
    if marks.is_empty() {
        out.push_str("marks: (none)\n");
    } else {
        let rendered: Vec<String> = marks
            .iter()
            .map(|m| {
                let names: Vec<String> = m.support.iter().map(|&b| d.node_name(b)).collect();
                format!("[{}]", names.join(","))
            })
            .collect();
        out.push_str(&format!("marks: {}\n", rendered.join(" ")));
    }
    out
}

/// DOT rendering: filled nodes for Θ, box nodes for marks with dashed edges
/// to their supports (joint and overlapping marks both stay readable).
pub fn render_dot(d: &DynkinDiagram, p: &ParabolicSubset, marks: &[Mark]) -> String {
    let mut out = String::from("digraph dynkin {\n  rankdir=LR;\n  edge [dir=none];\n");
    for n in 0..d.node_count() {
        let fill = if p.is_theta(n) {
            ", style=filled, fillcolor=gray"
        } else {
            ""
        };
        out.push_str(&format!(
            "  n{} [label=\"{}\", shape=circle{}];\n",
            n,
            d.node_name(n),
            fill
        ));
    }
    for e in d.edges() {
        if e.multiplicity == 1 {
            out.push_str(&format!("  n{} -> n{};\n", e.a, e.b));
        } else {
            let (from, to) = match e.long {
                Some(l) => (l, e.other(l)),
                None => (e.a, e.b),
            };
            out.push_str(&format!(
                "  n{from} -> n{to} [dir=forward, label=\"{}\"];\n",
                e.multiplicity
            ));
        }
    }
    for (i, m) in marks.iter().enumerate() {
        out.push_str(&format!("  m{i} [label=\"mark\", shape=box];\n"));
        for &b in &m.support {
            out.push_str(&format!("  m{i} -> n{b} [style=dashed];\n"));
        }
    }
    out.push_str("}\n");
    out
}
