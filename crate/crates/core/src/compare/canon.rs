//! Canonical blank node labelling.
//!
//! Blank nodes are grouped into connected components. Inside a component,
//! colours are refined from the hashed signatures of incident triples until
//! the partition is stable; remaining ties are broken by individualising
//! each member of the smallest tied class in turn and keeping the
//! lexicographically smallest relabelled serialisation. Components are then
//! ordered by their canonical text, so disjoint identical components never
//! multiply the search.

use std::collections::{BTreeMap, HashMap, HashSet};

use sha2::{Digest, Sha256};

use crate::rdf::{Graph, Term, Triple};

type Color = [u8; 32];

const LABEL_PREFIX: &str = "c14n";

fn hex(color: &Color) -> String {
    color.iter().map(|b| format!("{b:02x}")).collect()
}

/// One connected component of blank nodes and the triples touching it.
struct Component<'g> {
    nodes: Vec<&'g str>,
    index: HashMap<&'g str, usize>,
    triples: Vec<&'g Triple>,
    incident: Vec<Vec<usize>>,
}

impl<'g> Component<'g> {
    fn new(nodes: Vec<&'g str>, triples: Vec<&'g Triple>) -> Self {
        let index: HashMap<&str, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
        let mut incident = vec![Vec::new(); nodes.len()];
        for (ti, t) in triples.iter().enumerate() {
            let mut seen = [usize::MAX; 2];
            for (slot, term) in [t.subject(), t.object()].into_iter().enumerate() {
                if let Some(&ni) = term.blank_label().and_then(|l| index.get(l)) {
                    if !seen.contains(&ni) {
                        incident[ni].push(ti);
                    }
                    seen[slot] = ni;
                }
            }
        }
        Component {
            nodes,
            index,
            triples,
            incident,
        }
    }

    fn render(&self, term: &Term, me: usize, colors: &[Color]) -> String {
        match term.blank_label() {
            Some(label) => {
                let i = self.index[label];
                if i == me {
                    "@self".to_owned()
                } else {
                    format!("@{}", hex(&colors[i]))
                }
            }
            None => term.to_string(),
        }
    }

    fn refine_once(&self, colors: &[Color]) -> Vec<Color> {
        (0..self.nodes.len())
            .map(|n| {
                let mut sigs: Vec<String> = self.incident[n]
                    .iter()
                    .map(|&ti| {
                        let t = self.triples[ti];
                        format!(
                            "{} <{}> {}",
                            self.render(t.subject(), n, colors),
                            t.predicate(),
                            self.render(t.object(), n, colors)
                        )
                    })
                    .collect();
                sigs.sort_unstable();
                let mut h = Sha256::new();
                h.update(colors[n]);
                for s in &sigs {
                    h.update(s.as_bytes());
                    h.update(b"\n");
                }
                h.finalize().into()
            })
            .collect()
    }

    fn refine(&self, mut colors: Vec<Color>) -> Vec<Color> {
        let mut classes = distinct(&colors);
        loop {
            let next = self.refine_once(&colors);
            let next_classes = distinct(&next);
            colors = next;
            if next_classes == classes {
                return colors;
            }
            classes = next_classes;
        }
    }

    fn relabel(&self, colors: &[Color]) -> (Vec<usize>, String) {
        let mut order: Vec<usize> = (0..self.nodes.len()).collect();
        order.sort_by(|&a, &b| colors[a].cmp(&colors[b]));
        let mut rank = vec![0; self.nodes.len()];
        for (r, &n) in order.iter().enumerate() {
            rank[n] = r;
        }
        let mut lines: Vec<String> = self
            .triples
            .iter()
            .map(|t| {
                t.map_blank_nodes(|l| format!("{LABEL_PREFIX}{}", rank[self.index[l]]))
                    .to_string()
            })
            .collect();
        lines.sort_unstable();
        (rank, lines.join("\n"))
    }

    /// Whether swapping `u` and `v` maps the component onto itself.
    fn swap_is_automorphism(&self, u: usize, v: usize) -> bool {
        let (lu, lv) = (self.nodes[u], self.nodes[v]);
        let set: HashSet<&Triple> = self.triples.iter().copied().collect();
        self.incident[u].iter().chain(&self.incident[v]).all(|&ti| {
            let swapped = self.triples[ti].map_blank_nodes(|l| {
                if l == lu {
                    lv.to_owned()
                } else if l == lv {
                    lu.to_owned()
                } else {
                    l.to_owned()
                }
            });
            set.contains(&swapped)
        })
    }

    fn search(&self, colors: Vec<Color>) -> (Vec<usize>, String) {
        let colors = self.refine(colors);
        let mut classes: BTreeMap<Color, Vec<usize>> = BTreeMap::new();
        for (n, c) in colors.iter().enumerate() {
            classes.entry(*c).or_default().push(n);
        }
        let target = classes
            .iter()
            .filter(|(_, members)| members.len() > 1)
            .min_by(|(ca, a), (cb, b)| a.len().cmp(&b.len()).then(ca.cmp(cb)))
            .map(|(_, members)| members.clone());
        let Some(members) = target else {
            return self.relabel(&colors);
        };

        // Members related by an automorphic swap lead to identical subtrees.
        let mut representatives: Vec<usize> = Vec::new();
        for &m in &members {
            if !representatives
                .iter()
                .any(|&r| self.swap_is_automorphism(r, m))
            {
                representatives.push(m);
            }
        }

        let mut best: Option<(Vec<usize>, String)> = None;
        for m in representatives {
            let mut branch = colors.clone();
            let mut h = Sha256::new();
            h.update(branch[m]);
            h.update(b"individualized");
            branch[m] = h.finalize().into();
            let candidate = self.search(branch);
            if best.as_ref().is_none_or(|(_, text)| candidate.1 < *text) {
                best = Some(candidate);
            }
        }
        best.expect("tied class has at least one member")
    }
}

fn distinct(colors: &[Color]) -> usize {
    colors.iter().collect::<HashSet<_>>().len()
}

fn components(graph: &Graph) -> Vec<Component<'_>> {
    let blanks: Vec<&str> = graph.blank_nodes().into_iter().collect();
    let position: HashMap<&str, usize> = blanks.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let mut parent: Vec<usize> = (0..blanks.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for t in graph {
        if let (Some(s), Some(o)) = (t.subject().blank_label(), t.object().blank_label()) {
            let (a, b) = (find(&mut parent, position[s]), find(&mut parent, position[o]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut grouped: BTreeMap<usize, (Vec<&str>, Vec<&Triple>)> = BTreeMap::new();
    for (i, b) in blanks.iter().enumerate() {
        let root = find(&mut parent, i);
        grouped.entry(root).or_default().0.push(b);
    }
    for t in graph {
        if let Some(l) = t.subject().blank_label().or(t.object().blank_label()) {
            let root = find(&mut parent, position[l]);
            grouped.entry(root).or_default().1.push(t);
        }
    }
    grouped
        .into_values()
        .map(|(nodes, triples)| Component::new(nodes, triples))
        .collect()
}

/// Maps every blank node label of `graph` to its canonical label.
/// Isomorphic graphs yield labellings under which they become identical.
pub fn canonical_labeling(graph: &Graph) -> BTreeMap<String, String> {
    let comps = components(graph);
    let mut solved: Vec<(String, &Component, Vec<usize>)> = Vec::with_capacity(comps.len());
    for comp in &comps {
        let initial = vec![Sha256::digest(b"blank").into(); comp.nodes.len()];
        let (rank, text) = comp.search(initial);
        solved.push((text, comp, rank));
    }
    solved.sort_by(|a, b| a.0.cmp(&b.0));
    let mut labels = BTreeMap::new();
    let mut offset = 0;
    for (_, comp, rank) in solved {
        for (n, node) in comp.nodes.iter().enumerate() {
            labels.insert((*node).to_owned(), format!("{LABEL_PREFIX}{}", offset + rank[n]));
        }
        offset += comp.nodes.len();
    }
    labels
}

/// Replaces blank node labels by canonical ones. Ground graphs are returned
/// unchanged.
pub fn canonicalize_blank_nodes(graph: &Graph) -> Graph {
    if graph.iter().all(|t| !t.subject().is_blank() && !t.object().is_blank()) {
        return graph.clone();
    }
    let labels = canonical_labeling(graph);
    graph
        .iter()
        .map(|t| t.map_blank_nodes(|l| labels[l].clone()))
        .collect()
}
