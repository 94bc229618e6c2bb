//! Generation of one representative per nonzero isomorphism class.
//!
//! Classes with `k` edges on a fixed vertex set are obtained by adding one edge
//! slot at a time to the classes with `k - 1` edges and deduplicating by
//! canonical form. Symmetry-killed classes are kept at intermediate levels since
//! they can still grow into nonzero graphs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canon_class, Sign, SignedCanonGraph};
use crate::graph::{Edge, Graph, GraphKind, KindTag, Vertex, EXT, IN, OUT};

/// Restrictions on the enumerated graphs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Constraints {
    /// The whole graph, special vertices included, is connected.
    pub connected: bool,
    /// The graph stays connected after deleting the special vertices.
    pub internally_connected: bool,
    /// Lower bound for the valence of every internal vertex.
    pub min_valence: usize,
    /// Every internal component touches a special vertex.
    pub no_free_internal: bool,
}

impl Constraints {
    pub const NONE: Constraints = Constraints {
        connected: false,
        internally_connected: false,
        min_valence: 0,
        no_free_internal: false,
    };

    pub fn admits(&self, g: &Graph) -> bool {
        if self.min_valence > 0 && g.valences().iter().any(|&v| v < self.min_valence) {
            return false;
        }
        let comps = g.internal_components();
        if self.internally_connected && comps.len() > 1 {
            return false;
        }
        if self.no_free_internal && comps.iter().any(|(_, touches)| !touches) {
            return false;
        }
        if self.connected && !is_connected(g) {
            return false;
        }
        true
    }
}

/// Connectivity of the graph on the internal vertices and the special vertices
/// that occur in some edge.
fn is_connected(g: &Graph) -> bool {
    whole_graph_components(g) <= 1
}

fn whole_graph_components(g: &Graph) -> usize {
    let n = g.n_internal();
    let idx = |v: Vertex| -> usize {
        match v {
            OUT => n,
            IN => n + 1,
            EXT => n + 2,
            _ => v as usize,
        }
    };
    let mut parent: Vec<usize> = (0..n + 3).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut present = vec![false; n + 3];
    present[..n].iter_mut().for_each(|p| *p = true);
    for &(a, b) in g.edges() {
        let (a, b) = (idx(a), idx(b));
        present[a] = true;
        present[b] = true;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    (0..n + 3)
        .filter(|&v| present[v] && find(&mut parent, v) == v)
        .count()
}

/// Every edge a graph of this kind on `n` internal vertices may contain.
pub(crate) fn edge_slots(kind: GraphKind, n: usize) -> Vec<Edge> {
    let mut slots = Vec::new();
    let internal = (0..n as Vertex).collect::<Vec<_>>();
    for &a in &internal {
        for &b in &internal {
            let keep = match kind.tag {
                KindTag::U => a <= b,
                _ => true,
            };
            if keep && (a != b || kind.allows_tadpole_at(a)) {
                slots.push((a, b));
            }
        }
    }
    match kind.tag {
        KindTag::U | KindTag::D => {}
        KindTag::M => {
            for &v in &internal {
                slots.push((OUT, v));
                slots.push((v, IN));
            }
            slots.push((OUT, IN));
        }
        KindTag::X => {
            for &v in &internal {
                slots.push((EXT, v));
                slots.push((v, EXT));
            }
            slots.push((EXT, EXT));
        }
    }
    slots
}

/// Lower bound on the number of edges still needed to satisfy `c`.
fn edges_needed(kind: GraphKind, n: usize, edges: &[Edge], c: &Constraints) -> usize {
    let g = Graph::from_parts(kind, n as u8, edges.to_vec());
    let mut need = 0;
    if c.min_valence > 0 {
        let deficit: usize = g
            .valences()
            .iter()
            .map(|&v| c.min_valence.saturating_sub(v))
            .sum();
        need = need.max(deficit.div_ceil(2));
    }
    if c.internally_connected || c.connected || c.no_free_internal {
        let comps = g.internal_components();
        if c.internally_connected {
            need = need.max(comps.len().saturating_sub(1));
        }
        if c.connected {
            need = need.max(whole_graph_components(&g).saturating_sub(1));
        }
        if c.no_free_internal {
            need = need.max(comps.iter().filter(|(_, t)| !t).count());
        }
    }
    need
}

/// One canonical representative per nonzero isomorphism class with `n_internal`
/// internal vertices and `n_edges` edges satisfying `constraints`, in canonical
/// order.
pub fn enumerate_graphs(
    kind: GraphKind,
    n_internal: usize,
    n_edges: usize,
    constraints: &Constraints,
) -> Vec<SignedCanonGraph> {
    enumerate_canonical(kind, n_internal, n_edges, constraints)
        .into_iter()
        .map(|graph| SignedCanonGraph {
            graph,
            sign: Sign::Plus,
        })
        .collect()
}

pub(crate) fn enumerate_canonical(
    kind: GraphKind,
    n: usize,
    k: usize,
    constraints: &Constraints,
) -> Vec<Graph> {
    let slots = edge_slots(kind, n);
    if k > slots.len() {
        return Vec::new();
    }
    let mut level: Vec<Vec<Edge>> = vec![Vec::new()];
    if edges_needed(kind, n, &[], constraints) > k {
        return Vec::new();
    }
    for j in 0..k {
        let remaining = k - j - 1;
        let mut next: Vec<Vec<Edge>> = level
            .par_iter()
            .flat_map_iter(|edges| {
                let mut out = Vec::new();
                for &s in &slots {
                    if edges.contains(&s) {
                        continue;
                    }
                    let mut e = edges.clone();
                    e.push(s);
                    if edges_needed(kind, n, &e, constraints) > remaining {
                        continue;
                    }
                    let (canon, _) = canon_class(kind, n, &e);
                    out.push(canon);
                }
                out.sort_unstable();
                out.dedup();
                out.into_iter()
            })
            .collect();
        next.par_sort_unstable();
        next.dedup();
        level = next;
    }
    let mut result: Vec<Graph> = level
        .into_par_iter()
        .filter_map(|edges| {
            let (canon, zero) = canon_class(kind, n, &edges);
            if zero {
                return None;
            }
            let g = Graph::from_parts(kind, n as u8, canon);
            constraints.admits(&g).then_some(g)
        })
        .collect();
    result.sort();
    result
}
