//! Canonical labeling with orientation signs.
//!
//! The search individualizes vertices of the first non-singleton cell of an
//! equitable coloring and refines after each step; every leaf of the search tree
//! is a labeling of the internal vertices. The canonical form is the
//! lexicographically least sorted edge list over all leaves, and its sign is the
//! parity of the permutation that sorts the relabeled input edges. Two leaves
//! producing the same edge list differ by an automorphism whose edge parity is
//! the difference of their sorting parities; an odd one kills the graph.
//! Automorphisms found along the way prune equivalent branches.

use std::cmp::Ordering;

use crate::error::GraphError;
use crate::graph::{is_internal, Edge, Graph, GraphKind, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
    Zero,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
            Sign::Zero => 0,
        }
    }
}

/// A canonical representative together with the sign relating it to the input.
///
/// When `sign` is [`Sign::Zero`] the graph still holds the canonical form of the
/// underlying (unoriented) graph, unless the graph has duplicate edges or a
/// forbidden tadpole, in which case it is the normalized input.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedCanonGraph {
    pub graph: Graph,
    pub sign: Sign,
}

/// Validates `g` and returns its canonical form and sign.
pub fn canonicalize(g: &Graph) -> Result<SignedCanonGraph, GraphError> {
    g.validate()?;
    let kind = g.kind();
    let edges = normalized(kind, g.edges());
    if has_duplicates(&edges) {
        return Ok(SignedCanonGraph {
            graph: Graph::from_parts(kind, g.n_internal() as u8, edges),
            sign: Sign::Zero,
        });
    }
    let res = Searcher::new(kind, g.n_internal(), &edges, false).run();
    Ok(SignedCanonGraph {
        graph: Graph::from_parts(kind, g.n_internal() as u8, res.edges),
        sign: if res.zero {
            Sign::Zero
        } else if res.odd {
            Sign::Minus
        } else {
            Sign::Plus
        },
    })
}

/// Result of canonicalizing a raw term inside an algebraic operation.
pub(crate) enum Term {
    Zero,
    Graph { graph: Graph, odd: bool },
}

/// Canonicalizes a term produced by a composition. Forbidden tadpoles and
/// parallel identical edges make the term vanish; the search stops at the first
/// odd automorphism.
pub(crate) fn canon_term(kind: GraphKind, n: u8, edges: &[Edge]) -> Term {
    let edges = normalized(kind, edges);
    if edges.iter().any(|&(a, b)| a == b && !kind.allows_tadpole_at(a)) || has_duplicates(&edges) {
        return Term::Zero;
    }
    let res = Searcher::new(kind, n as usize, &edges, true).run();
    if res.zero {
        Term::Zero
    } else {
        Term::Graph {
            graph: Graph::from_parts(kind, n, res.edges),
            odd: res.odd,
        }
    }
}

/// Canonical sorted edge list of an unoriented class (no duplicates allowed),
/// plus whether the class is killed by an odd automorphism.
pub(crate) fn canon_class(kind: GraphKind, n: usize, edges: &[Edge]) -> (Vec<Edge>, bool) {
    let edges = normalized(kind, edges);
    debug_assert!(!has_duplicates(&edges));
    let res = Searcher::new(kind, n, &edges, false).run();
    (res.edges, res.zero)
}

fn normalized(kind: GraphKind, edges: &[Edge]) -> Vec<Edge> {
    if kind.is_directed() {
        edges.to_vec()
    } else {
        edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect()
    }
}

fn has_duplicates(edges: &[Edge]) -> bool {
    let mut s = edges.to_vec();
    s.sort_unstable();
    s.windows(2).any(|w| w[0] == w[1])
}

fn odd_inversions(edges: &[Edge]) -> bool {
    let mut inv = 0usize;
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if edges[i] > edges[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

// Relation codes in the refinement signatures.
const REL_UNDIRECTED: u8 = 0;
const REL_OUT: u8 = 1;
const REL_IN: u8 = 2;
const REL_TADPOLE: u8 = 3;
const SPECIAL_COLOR: u32 = 1 << 20;

struct SearchResult {
    edges: Vec<Edge>,
    odd: bool,
    zero: bool,
}

struct Leaf {
    edges: Vec<Edge>,
    odd: bool,
    labels: Vec<Vertex>,
}

struct Searcher<'a> {
    directed: bool,
    n: usize,
    edges: &'a [Edge],
    adj: Vec<Vec<(u8, Vertex)>>,
    stop_on_zero: bool,
    first: Option<Leaf>,
    best: Option<Leaf>,
    zero: bool,
    done: bool,
    automorphisms: Vec<Vec<Vertex>>,
}

impl<'a> Searcher<'a> {
    fn new(kind: GraphKind, n: usize, edges: &'a [Edge], stop_on_zero: bool) -> Self {
        let directed = kind.is_directed();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a == b {
                if is_internal(a) {
                    adj[a as usize].push((REL_TADPOLE, a));
                }
                continue;
            }
            if is_internal(a) {
                adj[a as usize].push((if directed { REL_OUT } else { REL_UNDIRECTED }, b));
            }
            if is_internal(b) {
                adj[b as usize].push((if directed { REL_IN } else { REL_UNDIRECTED }, a));
            }
        }
        Searcher {
            directed,
            n,
            edges,
            adj,
            stop_on_zero,
            first: None,
            best: None,
            zero: false,
            done: false,
            automorphisms: Vec::new(),
        }
    }

    fn run(mut self) -> SearchResult {
        let mut colors = vec![0u32; self.n];
        self.refine(&mut colors);
        self.search(colors, &mut Vec::new());
        let best = self.best.expect("search visits at least one leaf");
        SearchResult {
            edges: best.edges,
            odd: best.odd,
            zero: self.zero,
        }
    }

    /// Iterated color refinement; leaves colors compressed to `0..cells` with the
    /// relative order of existing cells preserved.
    fn refine(&self, colors: &mut [u32]) {
        let n = self.n;
        let mut cells = usize::MAX;
        let mut sigs: Vec<(u32, Vec<(u8, u32)>, usize)> = Vec::with_capacity(n);
        loop {
            sigs.clear();
            for v in 0..n {
                let mut s: Vec<(u8, u32)> = self.adj[v]
                    .iter()
                    .map(|&(rel, w)| {
                        let c = if is_internal(w) && rel != REL_TADPOLE {
                            colors[w as usize]
                        } else {
                            SPECIAL_COLOR | w as u32
                        };
                        (rel, c)
                    })
                    .collect();
                s.sort_unstable();
                sigs.push((colors[v], s, v));
            }
            sigs.sort_unstable();
            let mut c = 0u32;
            for i in 0..n {
                if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                    c += 1;
                }
                colors[sigs[i].2] = c;
            }
            let now = if n == 0 { 0 } else { c as usize + 1 };
            if now == cells {
                break;
            }
            cells = now;
        }
    }

    fn search(&mut self, colors: Vec<u32>, prefix: &mut Vec<Vertex>) {
        // First non-singleton cell, by color order.
        let mut counts = vec![0u32; self.n];
        for &c in &colors {
            counts[c as usize] += 1;
        }
        let target = counts.iter().position(|&k| k > 1);
        let Some(target) = target else {
            self.leaf(&colors);
            return;
        };
        let cell: Vec<Vertex> = (0..self.n)
            .filter(|&v| colors[v] as usize == target)
            .map(|v| v as Vertex)
            .collect();
        let mut tried: Vec<Vertex> = Vec::new();
        for &v in &cell {
            if self.done {
                return;
            }
            if !tried.is_empty() && self.equivalent_to_tried(prefix, &tried, v) {
                continue;
            }
            tried.push(v);
            let mut child: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| 2 * c + u32::from(c as usize == target && u != v as usize))
                .collect();
            self.refine(&mut child);
            prefix.push(v);
            self.search(child, prefix);
            prefix.pop();
        }
    }

    /// Whether `v` lies in the orbit of an already tried vertex under the known
    /// automorphisms that fix `prefix` pointwise.
    fn equivalent_to_tried(&self, prefix: &[Vertex], tried: &[Vertex], v: Vertex) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for aut in &self.automorphisms {
            if prefix.iter().any(|&p| aut[p as usize] != p) {
                continue;
            }
            any = true;
            for (u, &w) in aut.iter().enumerate() {
                let (a, b) = (find(&mut parent, u), find(&mut parent, w as usize));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut parent, v as usize);
        tried.iter().any(|&t| find(&mut parent, t as usize) == rv)
    }

    fn leaf(&mut self, colors: &[u32]) {
        let labels: Vec<Vertex> = colors.iter().map(|&c| c as Vertex).collect();
        let map = |v: Vertex| if is_internal(v) { labels[v as usize] } else { v };
        let mut rel: Vec<Edge> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (map(a), map(b));
                if self.directed {
                    (a, b)
                } else {
                    (a.min(b), a.max(b))
                }
            })
            .collect();
        let odd = odd_inversions(&rel);
        rel.sort_unstable();
        let leaf = Leaf {
            edges: rel,
            odd,
            labels,
        };

        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                edges: leaf.edges.clone(),
                odd: leaf.odd,
                labels: leaf.labels.clone(),
            });
            self.first = Some(leaf);
            return;
        };
        if first.edges == leaf.edges {
            let aut = automorphism(&first.labels, &leaf.labels);
            if first.odd != leaf.odd {
                self.zero = true;
                if self.stop_on_zero {
                    self.done = true;
                }
            }
            self.automorphisms.push(aut);
        }
        let best = self.best.as_ref().expect("best is set with first");
        match leaf.edges.cmp(&best.edges) {
            Ordering::Less => self.best = Some(leaf),
            Ordering::Equal if best.edges != first.edges => {
                let aut = automorphism(&best.labels, &leaf.labels);
                if best.odd != leaf.odd {
                    self.zero = true;
                    if self.stop_on_zero {
                        self.done = true;
                    }
                }
                self.automorphisms.push(aut);
            }
            _ => {}
        }
    }
}

/// The automorphism `v ↦ b⁻¹(a(v))` relating two leaves with equal edge lists.
fn automorphism(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let mut b_inv = vec![0 as Vertex; b.len()];
    for (v, &l) in b.iter().enumerate() {
        b_inv[l as usize] = v as Vertex;
    }
    a.iter().map(|&l| b_inv[l as usize]).collect()
}

/// Every automorphism of `g` fixing the special vertices, by brute force over all
/// permutations of the internal vertices, with the parity of the induced edge
/// permutation (`+1` even, `-1` odd).
///
/// This is an oracle: it does not share code with the canonical labeling search.
pub fn automorphism_edge_signs(g: &Graph) -> Result<Vec<(Vec<Vertex>, i8)>, GraphError> {
    g.validate()?;
    let n = g.n_internal();
    let kind = g.kind();
    let norm = |(a, b): Edge| {
        if kind.is_directed() {
            (a, b)
        } else {
            (a.min(b), a.max(b))
        }
    };
    let edges: Vec<Edge> = g.edges().iter().map(|&e| norm(e)).collect();
    let mut out = Vec::new();
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    permutations(&mut perm, 0, &mut |p| {
        let map = |v: Vertex| if is_internal(v) { p[v as usize] } else { v };
        let image: Vec<Edge> = edges.iter().map(|&(a, b)| norm((map(a), map(b)))).collect();
        // image[i] must be matched to a distinct position j with edges[j] == image[i]
        let mut used = vec![false; edges.len()];
        let mut target = Vec::with_capacity(edges.len());
        for e in &image {
            match (0..edges.len()).find(|&j| !used[j] && edges[j] == *e) {
                Some(j) => {
                    used[j] = true;
                    target.push(j);
                }
                None => return,
            }
        }
        out.push((p.to_vec(), if permutation_is_odd(&target) { -1 } else { 1 }));
    });
    out.sort();
    Ok(out)
}

fn permutations(p: &mut Vec<Vertex>, k: usize, f: &mut impl FnMut(&[Vertex])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

pub(crate) fn permutation_is_odd(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for i in 0..p.len() {
        if seen[i] {
            continue;
        }
        let mut j = i;
        let mut len = 0;
        while !seen[j] {
            seen[j] = true;
            j = p[j];
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 1
}
