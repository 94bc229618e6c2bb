//! Enumeration against a brute-force classification of edge subsets that uses
//! only vertex permutations, with no canonical labeling.

use std::collections::BTreeSet;

use gce_core::enumerate::{enumerate_graphs, Constraints};
use gce_core::{canonicalize, Graph, GraphKind, KindTag, Sign};

const OUT: u8 = 253;
const IN: u8 = 254;
const EXT: u8 = 255;

fn slots(kind: GraphKind, n: u8) -> Vec<(u8, u8)> {
    let mut s = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && (kind.is_directed() || a < b) {
                s.push((a, b));
            }
        }
    }
    match kind.tag {
        KindTag::M => {
            for v in 0..n {
                s.push((OUT, v));
                s.push((v, IN));
            }
            s.push((OUT, IN));
        }
        KindTag::X => {
            for v in 0..n {
                s.push((EXT, v));
                s.push((v, EXT));
            }
            s.push((EXT, EXT));
        }
        _ => {}
    }
    s
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, (n - 1) as u8);
            out.push(q);
        }
    }
    out
}

fn apply(p: &[u8], directed: bool, e: (u8, u8)) -> (u8, u8) {
    let m = |v: u8| if (v as usize) < p.len() { p[v as usize] } else { v };
    let (a, b) = (m(e.0), m(e.1));
    if directed || a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut parity = false;
    for i in 0..perm.len() {
        let mut len = 0;
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            parity = !parity;
        }
    }
    parity
}

/// Isomorphism classes of nonvanishing graphs: minimal sorted edge set of the
/// orbit, dropped when some symmetry permutes the edges oddly.
fn oracle_classes(kind: GraphKind, n: usize, k: usize, keep: impl Fn(&[(u8, u8)]) -> bool) -> BTreeSet<Vec<(u8, u8)>> {
    let s = slots(kind, n as u8);
    let perms = permutations(n);
    let mut classes = BTreeSet::new();
    let m = s.len();
    assert!(m <= 24);
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != k {
            continue;
        }
        let mut edges: Vec<(u8, u8)> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
        edges.sort();
        if !keep(&edges) {
            continue;
        }
        let mut best = edges.clone();
        let mut vanishes = false;
        for p in &perms {
            let mut img: Vec<(u8, u8)> = edges.iter().map(|&e| apply(p, kind.is_directed(), e)).collect();
            let sorted = {
                let mut x = img.clone();
                x.sort();
                x
            };
            if sorted == edges {
                let perm: Vec<usize> = img.iter().map(|e| edges.binary_search(e).unwrap()).collect();
                if odd(&perm) {
                    vanishes = true;
                    break;
                }
            }
            img.sort();
            best = best.min(img);
        }
        if !vanishes {
            classes.insert(best);
        }
    }
    classes
}

#[test]
fn counts_match_the_brute_force_classification() {
    for kind in [GraphKind::U, GraphKind::D, GraphKind::M, GraphKind::X] {
        for n in 0..=4 {
            for k in 0..=5 {
                if slots(kind, n as u8).len() > 21 {
                    continue;
                }
                let expected = oracle_classes(kind, n, k, |_| true).len();
                let got = enumerate_graphs(kind, n, k, &Constraints::NONE);
                assert_eq!(got.len(), expected, "{kind} n={n} k={k}");
                let distinct: BTreeSet<&Graph> = got.iter().map(|g| &g.graph).collect();
                assert_eq!(distinct.len(), got.len());
            }
        }
    }
}

#[test]
fn enumerated_graphs_are_canonical_and_nonzero() {
    for kind in [GraphKind::U, GraphKind::M, GraphKind::X] {
        for g in enumerate_graphs(kind, 3, 4, &Constraints::NONE) {
            assert_eq!(g.sign, Sign::Plus);
            let c = canonicalize(&g.graph).unwrap();
            assert_eq!(c.graph, g.graph);
            assert_eq!(c.sign, Sign::Plus);
        }
    }
}

fn connected(n: usize, edges: &[(u8, u8)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
        parent[ra] = rb;
    }
    (0..n).map(|x| find(&mut parent, x)).collect::<BTreeSet<_>>().len() <= 1
}

#[test]
fn constrained_undirected_counts() {
    let connected_only = Constraints {
        connected: true,
        ..Constraints::NONE
    };
    // the triangle is killed by its symmetries
    assert_eq!(enumerate_graphs(GraphKind::U, 3, 3, &connected_only).len(), 0);
    assert_eq!(oracle_classes(GraphKind::U, 3, 3, |e| connected(3, e)).len(), 0);
    let gc = Constraints {
        connected: true,
        min_valence: 3,
        ..Constraints::NONE
    };
    let k4 = enumerate_graphs(GraphKind::U, 4, 6, &gc);
    assert_eq!(k4.len(), 1);
    assert_eq!(k4[0].graph.n_edges(), 6);
    for (n, k) in [(4, 3), (4, 4), (4, 5), (5, 4), (5, 6)] {
        let expected = oracle_classes(GraphKind::U, n, k, |e| connected(n, e)).len();
        assert_eq!(enumerate_graphs(GraphKind::U, n, k, &connected_only).len(), expected, "n={n} k={k}");
    }
}

