//! Affine Weyl orbit enumeration, Bruhat length and cover structure, and the
//! assembly of regular and singular operator patterns with edge orders.
//!
//! Weyl elements act on rho-shifted tuples by permuting the entries. The
//! orbit of a dominant (weakly decreasing) arrangement is enumerated through
//! its p-dominant representatives; nodes are grouped into columns by Bruhat
//! length, and standard edges are the covering pairs (one transposition,
//! length difference one), directed toward smaller length. Edge order is the
//! difference of grading-element actions. Singular patterns are built by
//! replaying a regular template's permutations on the singular tuple,
//! replacing non-p-dominant results by cross nodes.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::weights::{same_inf_char, Weight};
use crate::{Error, Rat, Result};

/// One orbit node: the permuted weight, the position map producing it from
/// the dominant arrangement, and its Bruhat length (inversion count).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitElement {
    pub weight: Weight,
    pub perm: Vec<usize>,
    pub length: usize,
}

/// Inversion count of a value sequence: pairs (i, j), i < j, with
/// `xs[i] < xs[j]`.
pub fn inversion_count(xs: &[i64]) -> usize {
    let mut count = 0;
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            if xs[i] < xs[j] {
                count += 1;
            }
        }
    }
    count
}

/// Bruhat length of a regular weight read as a permutation of its entries.
/// Repeated entries are rejected; singular tuples take their length from the
/// template position instead (see [`build_singular_pattern`]).
pub fn length_of(w: &Weight) -> Result<usize> {
    if w.singularity_level() > 0 {
        return Err(Error::invalid(format!(
            "length of `{w}` is ambiguous: repeated entries; use the template permutation"
        )));
    }
    Ok(inversion_count(w.entries()))
}

/// All p-dominant permutations of a dominant (weakly decreasing) tuple,
/// each with its position map and length. For a regular tuple there are
/// exactly binomial(n, p) of them.
pub fn affine_orbit_p_dominant(w: &Weight) -> Result<Vec<OrbitElement>> {
    if !w.is_weakly_decreasing() {
        return Err(Error::invalid(format!(
            "orbit enumeration expects the dominant arrangement, got `{w}`"
        )));
    }
    let n = w.n();
    let p = w.p();
    let entries = w.entries();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for picked in combinations(n, p) {
        let mut block1: Vec<usize> = picked.clone();
        let mut block2: Vec<usize> = (0..n).filter(|i| !picked.contains(i)).collect();
        // Entries are decreasing along positions, so index order is already
        // the descending arrangement inside each block.
        block1.sort_unstable();
        block2.sort_unstable();
        let perm: Vec<usize> = block1.iter().chain(block2.iter()).copied().collect();
        let arranged: Vec<i64> = perm.iter().map(|&i| entries[i]).collect();
        let weight = Weight::new(arranged.clone(), p)?;
        if !weight.is_p_dominant() || !seen.insert(arranged.clone()) {
            continue;
        }
        out.push(OrbitElement {
            weight,
            perm,
            length: inversion_count(&arranged),
        });
    }
    out.sort_by(|a, b| {
        (a.length, a.weight.entries(), &a.perm).cmp(&(b.length, b.weight.entries(), &b.perm))
    });
    Ok(out)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Bruhat covering pairs inside the orbit: two nodes whose tuples differ by
/// one transposition with length difference exactly one. Each edge points
/// from the longer element to the shorter one and carries the e-action
/// difference as its order.
pub fn standard_edges(orbit: &[OrbitElement]) -> Vec<(usize, usize, Rat)> {
    let mut edges = Vec::new();
    for (ui, u) in orbit.iter().enumerate() {
        for (vi, v) in orbit.iter().enumerate() {
            if u.length != v.length + 1 {
                continue;
            }
            if differs_by_transposition(u.weight.entries(), v.weight.entries()) {
                let order = v.weight.e_action() - u.weight.e_action();
                edges.push((ui, vi, order));
            }
        }
    }
    edges
}

fn differs_by_transposition(a: &[i64], b: &[i64]) -> bool {
    let diff: Vec<usize> = (0..a.len()).filter(|&i| a[i] != b[i]).collect();
    diff.len() == 2 && a[diff[0]] == b[diff[1]] && a[diff[1]] == b[diff[0]]
}

/// Absolute difference of grading-element actions of two weights in one
/// affine orbit; the order of the homomorphism joining their pattern nodes.
pub fn pair_order(u: &Weight, v: &Weight) -> Result<Rat> {
    if !same_inf_char(u, v)? {
        return Err(Error::contract(format!(
            "pair order of `{u}` and `{v}`: different affine orbits"
        )));
    }
    let d = u.e_action() - v.e_action();
    Ok(if d < Rat::from_integer(0.into()) { -d } else { d })
}

/// Node of a pattern graph. Non-dominant nodes are the crosses of singular
/// patterns; their tuple records the arrangement that failed dominance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternNode {
    pub tuple: Vec<i64>,
    pub perm: Vec<usize>,
    pub length: usize,
    pub e_action: Rat,
    pub dominant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternEdge {
    pub from: usize,
    pub to: usize,
    pub order: Rat,
    pub standard: bool,
}

/// Operator pattern: orbit nodes in length columns plus directed edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGraph {
    pub n: usize,
    pub p: usize,
    pub singularity: usize,
    pub nodes: Vec<PatternNode>,
    pub edges: Vec<PatternEdge>,
}

/// Pattern of a regular dominant tuple: columns by length, standard edges.
/// Singular tuples are rejected here; build them against a regular template.
pub fn build_pattern(wdom: &Weight) -> Result<PatternGraph> {
    if wdom.singularity_level() > 0 {
        return Err(Error::invalid(format!(
            "`{wdom}` is singular; build it with build_singular_pattern against a regular template"
        )));
    }
    if !wdom.is_weakly_decreasing() {
        return Err(Error::invalid(format!(
            "pattern expects the dominant arrangement, got `{wdom}`"
        )));
    }
    let orbit = affine_orbit_p_dominant(wdom)?;
    let nodes = orbit
        .iter()
        .map(|el| PatternNode {
            tuple: el.weight.entries().to_vec(),
            perm: el.perm.clone(),
            length: el.length,
            e_action: el.weight.e_action(),
            dominant: true,
        })
        .collect();
    let edges = standard_edges(&orbit)
        .into_iter()
        .map(|(from, to, order)| PatternEdge {
            from,
            to,
            order,
            standard: true,
        })
        .collect();
    Ok(PatternGraph {
        n: wdom.n(),
        p: wdom.p(),
        singularity: 0,
        nodes,
        edges,
    })
}

/// Replays the template's position maps on a singular dominant tuple.
/// Non-p-dominant results become cross nodes; repeated p-dominant weights are
/// kept at their template positions with the template lengths. Edges survive
/// when both endpoints stay dominant, with orders recomputed.
pub fn build_singular_pattern(wsing: &Weight, template: &PatternGraph) -> Result<PatternGraph> {
    if wsing.n() != template.n || wsing.p() != template.p {
        return Err(Error::invalid(format!(
            "template shape (n={}, p={}) does not match weight `{wsing}`",
            template.n, template.p
        )));
    }
    if template.singularity != 0 {
        return Err(Error::invalid("template must come from a regular tuple"));
    }
    if !wsing.is_weakly_decreasing() {
        return Err(Error::invalid(format!(
            "singular pattern expects the dominant arrangement, got `{wsing}`"
        )));
    }
    let mut nodes = Vec::with_capacity(template.nodes.len());
    for node in &template.nodes {
        let permuted = wsing.permuted(&node.perm)?;
        nodes.push(PatternNode {
            tuple: permuted.entries().to_vec(),
            perm: node.perm.clone(),
            length: node.length,
            e_action: permuted.e_action(),
            dominant: permuted.is_p_dominant(),
        });
    }
    let edges = template
        .edges
        .iter()
        .filter(|e| nodes[e.from].dominant && nodes[e.to].dominant)
        .map(|e| PatternEdge {
            from: e.from,
            to: e.to,
            order: nodes[e.to].e_action.clone() - nodes[e.from].e_action.clone(),
            standard: e.standard,
        })
        .collect();
    Ok(PatternGraph {
        n: template.n,
        p: template.p,
        singularity: wsing.singularity_level(),
        nodes,
        edges,
    })
}

impl PatternGraph {
    pub fn node_weight(&self, idx: usize) -> Result<Weight> {
        Weight::new(self.nodes[idx].tuple.clone(), self.p)
    }

    /// Index of the node carrying this exact tuple arrangement, if any.
    pub fn find_node(&self, tuple: &[i64]) -> Option<usize> {
        self.nodes.iter().position(|node| node.tuple == tuple)
    }

    /// Appends a user-requested non-standard edge between two existing
    /// nodes, ordered by the pair order, pointing toward larger e-action.
    pub fn annotate_pair(&mut self, a: &[i64], b: &[i64]) -> Result<()> {
        let ia = self
            .find_node(a)
            .ok_or_else(|| Error::invalid(format!("pattern has no node {a:?}")))?;
        let ib = self
            .find_node(b)
            .ok_or_else(|| Error::invalid(format!("pattern has no node {b:?}")))?;
        let (from, to) = if self.nodes[ia].e_action <= self.nodes[ib].e_action {
            (ia, ib)
        } else {
            (ib, ia)
        };
        let order = self.nodes[to].e_action.clone() - self.nodes[from].e_action.clone();
        self.edges.push(PatternEdge {
            from,
            to,
            order,
            standard: false,
        });
        Ok(())
    }

    pub fn max_length(&self) -> usize {
        self.nodes.iter().map(|n| n.length).max().unwrap_or(0)
    }

    fn tuple_text(&self, idx: usize) -> String {
        let node = &self.nodes[idx];
        let fmt = |xs: &[i64]| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let body = format!(
            "{} | {}",
            fmt(&node.tuple[..self.p]),
            fmt(&node.tuple[self.p..])
        );
        if node.dominant {
            format!("({body})")
        } else {
            format!("x[{body}]")
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "p": self.p,
            "singularity": self.singularity,
            "nodes": self.nodes.iter().enumerate().map(|(id, node)| json!({
                "id": id,
                "tuple": node.tuple,
                "length": node.length,
                "e_action": node.e_action.to_string(),
                "dominant": node.dominant,
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "from": e.from,
                "to": e.to,
                "order": e.order.to_string(),
                "standard": e.standard,
            })).collect::<Vec<_>>(),
        })
    }

    /// DOT digraph with one rank per length column.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph pattern {\n  rankdir=LR;\n  node [shape=box];\n");
        for (id, node) in self.nodes.iter().enumerate() {
            let label = if node.dominant {
                self.tuple_text(id)
            } else {
                "x".to_string()
            };
            out.push_str(&format!("  n{id} [label=\"{label}\"];\n"));
        }
        for len in 0..=self.max_length() {
            let members: Vec<String> = self
                .nodes
                .iter()
                .enumerate()
                .filter(|(_, n)| n.length == len)
                .map(|(id, _)| format!("n{id};"))
                .collect();
            if !members.is_empty() {
                out.push_str(&format!("  {{ rank=same; {} }}\n", members.join(" ")));
            }
        }
        for e in &self.edges {
            let style = if e.standard { "" } else { " style=dashed" };
            out.push_str(&format!(
                "  n{} -> n{} [label=\"{}\"{}];\n",
                e.from, e.to, e.order, style
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "pattern n={} p={} singularity={} nodes={} edges={}\n",
            self.n,
            self.p,
            self.singularity,
            self.nodes.len(),
            self.edges.len()
        );
        for len in 0..=self.max_length() {
            let members: Vec<String> = self
                .nodes
                .iter()
                .enumerate()
                .filter(|(_, n)| n.length == len)
                .map(|(id, node)| format!("{} e={}", self.tuple_text(id), node.e_action))
                .collect();
            if !members.is_empty() {
                out.push_str(&format!("length {len}: {}\n", members.join("  ")));
            }
        }
        for e in &self.edges {
            out.push_str(&format!(
                "edge {} -> {} order={}{}\n",
                self.tuple_text(e.from),
                self.tuple_text(e.to),
                e.order,
                if e.standard { "" } else { " [annotated]" }
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rint;
    use std::collections::BTreeSet;

    fn w(s: &str) -> Weight {
        s.parse().unwrap()
    }

    fn orbit(s: &str) -> Vec<OrbitElement> {
        affine_orbit_p_dominant(&w(s)).unwrap()
    }

    #[test]
    fn orbit_of_de_rham_22() {
        let got: BTreeSet<String> = orbit("3 2 | 1 0")
            .iter()
            .map(|el| el.weight.to_string())
            .collect();
        let expect: BTreeSet<String> = [
            "3 2 | 1 0",
            "3 1 | 2 0",
            "2 1 | 3 0",
            "3 0 | 2 1",
            "2 0 | 3 1",
            "1 0 | 3 2",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn orbit_sizes_are_binomial() {
        assert_eq!(orbit("2 1 | 0").len(), 3);
        assert_eq!(orbit("5 4 3 | 2 1 0").len(), 20);
        // binomial(n, p) exhaustively for regular de Rham tuples, n <= 7.
        for n in 2..=7usize {
            for p in 1..n {
                let entries: Vec<i64> = (0..n).rev().map(|x| x as i64).collect();
                let wt = Weight::new(entries, p).unwrap();
                let len = affine_orbit_p_dominant(&wt).unwrap().len();
                assert_eq!(len, binomial(n, p), "n={n} p={p}");
            }
        }
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn orbit_rejects_non_dominant_input() {
        assert!(affine_orbit_p_dominant(&w("2 3 | 1 0")).is_err());
    }

    #[test]
    fn lengths_match_inversions() {
        assert_eq!(length_of(&w("3 2 | 1 0")).unwrap(), 0);
        assert_eq!(length_of(&w("2 1 | 3 0")).unwrap(), 2);
        assert_eq!(length_of(&w("1 0 | 3 2")).unwrap(), 4);
        assert!(length_of(&w("2 1 | 1 0")).is_err());
    }

    #[test]
    fn orbit_weights_reconstruct_from_perms() {
        let dom = w("4 3 2 | 1 0");
        for el in affine_orbit_p_dominant(&dom).unwrap() {
            assert_eq!(dom.permuted(&el.perm).unwrap(), el.weight);
            assert_eq!(el.length, inversion_count(el.weight.entries()));
        }
    }

    #[test]
    fn standard_edges_of_22() {
        let pattern = build_pattern(&w("3 2 | 1 0")).unwrap();
        let named: BTreeSet<(String, String)> = pattern
            .edges
            .iter()
            .map(|e| {
                (
                    pattern.node_weight(e.from).unwrap().to_string(),
                    pattern.node_weight(e.to).unwrap().to_string(),
                )
            })
            .collect();
        let expect: BTreeSet<(String, String)> = [
            ("3 1 | 2 0", "3 2 | 1 0"),
            ("2 1 | 3 0", "3 1 | 2 0"),
            ("3 0 | 2 1", "3 1 | 2 0"),
            ("2 0 | 3 1", "2 1 | 3 0"),
            ("2 0 | 3 1", "3 0 | 2 1"),
            ("1 0 | 3 2", "2 0 | 3 1"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        assert_eq!(named, expect);
        for e in &pattern.edges {
            assert_eq!(e.order, rint(1));
            assert_eq!(
                pattern.nodes[e.from].length,
                pattern.nodes[e.to].length + 1
            );
        }
    }

    #[test]
    fn projective_chain_12() {
        let pattern = build_pattern(&w("2 1 | 0")).unwrap();
        assert_eq!(pattern.nodes.len(), 3);
        assert_eq!(pattern.edges.len(), 2);
        for e in &pattern.edges {
            assert_eq!(e.order, rint(1));
        }
    }

    #[test]
    fn pair_orders_for_long_morphisms() {
        assert_eq!(pair_order(&w("3 2 | 1 0"), &w("1 0 | 3 2")).unwrap(), rint(4));
        assert_eq!(
            pair_order(&w("5 4 3 | 2 1 0"), &w("2 1 0 | 5 4 3")).unwrap(),
            rint(9)
        );
        assert_eq!(
            pair_order(&w("5 4 2 | 3 1 0"), &w("3 1 0 | 5 4 2")).unwrap(),
            rint(7)
        );
        assert!(matches!(
            pair_order(&w("3 2 | 1 0"), &w("4 2 | 1 0")),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn column_profile_of_22_is_gaussian() {
        let pattern = build_pattern(&w("3 2 | 1 0")).unwrap();
        let mut sizes = vec![0usize; pattern.max_length() + 1];
        for node in &pattern.nodes {
            sizes[node.length] += 1;
        }
        assert_eq!(sizes, vec![1, 1, 2, 1, 1]);
        assert_eq!(pattern.max_length(), 4); // p*q
    }

    #[test]
    fn relabeled_pattern_has_same_shape() {
        let de_rham = build_pattern(&w("3 2 | 1 0")).unwrap();
        let relabeled = build_pattern(&w("4 2 | 1 0")).unwrap();
        assert_eq!(de_rham.nodes.len(), relabeled.nodes.len());
        let lengths = |g: &PatternGraph| g.nodes.iter().map(|n| n.length).collect::<Vec<_>>();
        assert_eq!(lengths(&de_rham), lengths(&relabeled));
        let shape = |g: &PatternGraph| {
            let mut e: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.from, e.to)).collect();
            e.sort_unstable();
            e
        };
        assert_eq!(shape(&de_rham), shape(&relabeled));
        // Same permutations applied to the relabeled tuple.
        for (a, b) in de_rham.nodes.iter().zip(&relabeled.nodes) {
            assert_eq!(a.perm, b.perm);
        }
    }

    #[test]
    fn singular_pattern_22() {
        let template = build_pattern(&w("3 2 | 1 0")).unwrap();
        let sing = build_singular_pattern(&w("2 1 | 1 0"), &template).unwrap();
        assert_eq!(sing.singularity, 1);
        let summary: Vec<(usize, String, bool)> = sing
            .nodes
            .iter()
            .map(|n| {
                let wt = Weight::new(n.tuple.clone(), 2).unwrap();
                (n.length, wt.to_string(), n.dominant)
            })
            .collect();
        assert_eq!(
            summary,
            vec![
                (0, "2 1 | 1 0".into(), true),
                (1, "2 1 | 1 0".into(), true),
                (2, "1 1 | 2 0".into(), false),
                (2, "2 0 | 1 1".into(), false),
                (3, "1 0 | 2 1".into(), true),
                (4, "1 0 | 2 1".into(), true),
            ]
        );
        // Surviving template edges connect the equal weights; their order
        // drops to zero (isomorphisms in the diagram).
        assert_eq!(sing.edges.len(), 2);
        for e in &sing.edges {
            assert!(e.order.is_integer());
            assert_eq!(e.order, rint(0));
        }
    }

    #[test]
    fn doubly_singular_pattern_22() {
        let template = build_pattern(&w("3 2 | 1 0")).unwrap();
        let sing = build_singular_pattern(&w("1 1 | 0 0"), &template).unwrap();
        assert_eq!(sing.singularity, 2);
        let dominant: Vec<&PatternNode> = sing.nodes.iter().filter(|n| n.dominant).collect();
        assert_eq!(dominant.len(), 4);
        for node in &dominant {
            assert_eq!(node.tuple, vec![1, 0, 1, 0]);
        }
        assert_eq!(sing.nodes.iter().filter(|n| !n.dominant).count(), 2);
    }

    #[test]
    fn singular_pattern_of_regular_tuple_is_template() {
        let template = build_pattern(&w("3 2 | 1 0")).unwrap();
        let replay = build_singular_pattern(&w("3 2 | 1 0"), &template).unwrap();
        assert_eq!(replay, template);
    }

    #[test]
    fn singular_pattern_shape_mismatch() {
        let template = build_pattern(&w("3 2 | 1 0")).unwrap();
        assert!(build_singular_pattern(&w("2 1 1 | 0"), &template).is_err());
        assert!(build_singular_pattern(&w("2 1 | 1 0 0"), &template).is_err());
    }

    #[test]
    fn annotate_pair_adds_nonstandard_edge() {
        let mut pattern = build_pattern(&w("3 2 | 1 0")).unwrap();
        pattern.annotate_pair(&[1, 0, 3, 2], &[3, 2, 1, 0]).unwrap();
        let e = pattern.edges.last().unwrap();
        assert!(!e.standard);
        assert_eq!(e.order, rint(4));
        assert_eq!(pattern.nodes[e.to].tuple, vec![3, 2, 1, 0]);
    }

    #[test]
    fn json_shape() {
        let pattern = build_pattern(&w("2 1 | 0")).unwrap();
        let v = pattern.to_json();
        assert_eq!(v["n"], 3);
        assert_eq!(v["nodes"].as_array().unwrap().len(), 3);
        assert_eq!(v["nodes"][0]["e_action"], "1");
        assert_eq!(v["edges"][0]["order"], "1");
    }

    #[test]
    fn dot_has_rank_columns() {
        let pattern = build_pattern(&w("3 2 | 1 0")).unwrap();
        let dot = pattern.to_dot();
        assert!(dot.starts_with("digraph pattern {"));
        assert_eq!(dot.matches("rank=same").count(), 5);
    }
}
