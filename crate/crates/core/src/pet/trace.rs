//! Reduction traces: the in-memory tree, its serialisable form and a text
//! outline.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::polynomials::RingPolynomial;

use super::{weight_less, PetSystem, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NodeOrigin {
    /// The input system, already standard.
    Input,
    /// The standard system built from a nonstandard input.
    Doubled { original: Vec<String>, q_degree: u32 },
    /// Produced by a van der Corput step from its parent.
    VdcStep,
}

#[derive(Clone, Debug)]
pub struct ReductionNode {
    pub system: PetSystem,
    pub weight: Weight,
    pub origin: NodeOrigin,
    /// Zero-based index of the subtracted member, for inner nodes.
    pub i0: Option<usize>,
    pub constraints: Vec<RingPolynomial>,
    pub pair_constraints_omitted: bool,
    /// `size + 1` at a degree-one leaf.
    pub leaf_k: Option<usize>,
    pub children: Vec<ReductionNode>,
}

impl ReductionNode {
    /// Every node from the root down, depth-first.
    pub fn nodes(&self) -> Vec<&ReductionNode> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.nodes());
        }
        out
    }

    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    /// `(parent, child)` weight pairs for every edge.
    pub fn edges(&self) -> Vec<(&Weight, &Weight)> {
        let mut out = Vec::new();
        for c in &self.children {
            out.push((&self.weight, &c.weight));
            out.extend(c.edges());
        }
        out
    }

    pub fn edges_decrease(&self) -> bool {
        self.edges().into_iter().all(|(p, c)| weight_less(c, p))
    }

    pub fn to_trace(&self) -> TraceNode {
        let names = self.system.names();
        // Constraints live in the parameters of the step, i.e. the child's variables.
        let step_names = self.children.first().map_or(names, |c| c.system.names());
        TraceNode {
            origin: self.origin.clone(),
            variables: names.to_vec(),
            primary: names.iter().zip(self.system.primary()).filter(|(_, m)| **m).map(|(n, _)| n.clone()).collect(),
            system: self.system.texts(),
            weight: self.weight.0.clone(),
            i0: self.i0.map(|i| i + 1),
            constraints: self.constraints.iter().map(|c| c.display_with(step_names)).collect(),
            pair_constraints_omitted: self.pair_constraints_omitted,
            leaf_k: self.leaf_k,
            children: self.children.iter().map(ReductionNode::to_trace).collect(),
        }
    }
}

/// JSON form of a trace node. `i0` is one-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceNode {
    pub origin: NodeOrigin,
    pub variables: Vec<String>,
    pub primary: Vec<String>,
    pub system: Vec<String>,
    pub weight: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub i0: Option<usize>,
    pub constraints: Vec<String>,
    pub pair_constraints_omitted: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub leaf_k: Option<usize>,
    pub children: Vec<TraceNode>,
}

const OUTLINE_LIST_LIMIT: usize = 8;

/// Indented text rendering, two spaces per level.
pub fn render_outline(node: &TraceNode) -> String {
    let mut out = String::new();
    render(node, 0, &mut out);
    out
}

fn render(node: &TraceNode, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let weight: Vec<String> = node.weight.iter().map(u32::to_string).collect();
    let _ = write!(out, "{pad}depth {depth}: weight ({}), {} polynomials", weight.join(","), node.system.len());
    if let Some(i0) = node.i0 {
        let _ = write!(out, ", i0 = {i0}");
    }
    if let Some(k) = node.leaf_k {
        let _ = write!(out, ", leaf k = {k}");
    }
    out.push('\n');
    if let NodeOrigin::Doubled { original, q_degree } = &node.origin {
        let _ = writeln!(out, "{pad}  doubled from {{{}}} with q = g^{q_degree}", original.join(", "));
    }
    for (i, p) in node.system.iter().take(OUTLINE_LIST_LIMIT).enumerate() {
        let _ = writeln!(out, "{pad}  p{} = {p}", i + 1);
    }
    if node.system.len() > OUTLINE_LIST_LIMIT {
        let _ = writeln!(out, "{pad}  ... {} more", node.system.len() - OUTLINE_LIST_LIMIT);
    }
    for c in node.constraints.iter().take(OUTLINE_LIST_LIMIT) {
        let _ = writeln!(out, "{pad}  nonzero: {c}");
    }
    if node.constraints.len() > OUTLINE_LIST_LIMIT {
        let _ = writeln!(out, "{pad}  ... {} more constraints", node.constraints.len() - OUTLINE_LIST_LIMIT);
    }
    if node.pair_constraints_omitted {
        let _ = writeln!(out, "{pad}  (pairwise constraints omitted)");
    }
    for c in &node.children {
        render(c, depth + 1, out);
    }
}
