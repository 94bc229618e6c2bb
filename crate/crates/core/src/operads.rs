//! Insertion and reconnection compositions of graphs.
//!
//! In every composite the edges of the host (left factor) come first, followed
//! by the edges of the guest (right factor); the orientation sign of each term is
//! then fixed by canonicalization.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{is_internal, Edge, Graph, GraphKind, KindTag, TadpolePolicy, Vertex, EXT, IN, OUT};
use crate::vector::{Accumulator, GraphVector, Rational};
use num_traits::One;

/// Calls `f` with every tuple in `choices^len`.
pub(crate) fn for_each_assignment(len: usize, choices: &[Vertex], mut f: impl FnMut(&[Vertex])) {
    if choices.is_empty() && len > 0 {
        return;
    }
    let mut idx = vec![0usize; len];
    let mut cur: Vec<Vertex> = vec![choices.first().copied().unwrap_or(0); len];
    loop {
        f(&cur);
        let mut i = 0;
        loop {
            if i == len {
                return;
            }
            idx[i] += 1;
            if idx[i] < choices.len() {
                cur[i] = choices[idx[i]];
                break;
            }
            idx[i] = 0;
            cur[i] = choices[0];
            i += 1;
        }
    }
}

/// Kind of `host • guest`, or an error if the guest cannot be inserted.
fn insertion_kind(host: GraphKind, guest: GraphKind) -> Result<GraphKind> {
    let tadpoles = |a: GraphKind, b: GraphKind| {
        if a.tadpoles == TadpolePolicy::All || b.tadpoles == TadpolePolicy::All {
            a.with_tadpoles()
        } else {
            a
        }
    };
    match (host.tag, guest.tag) {
        (KindTag::U, KindTag::U) | (KindTag::D, KindTag::D) => Ok(tadpoles(host, guest)),
        (KindTag::M | KindTag::X, KindTag::D) => Ok(host),
        _ => Err(Error::kind_mismatch(
            format!("a guest insertable into {host}"),
            guest,
        )),
    }
}

/// Raw terms of inserting `guest` at internal vertex `v` of `host`.
fn insert_raw(host: &Graph, v: Vertex, guest: &Graph, acc: &mut Accumulator, sign: i64) {
    let hn = host.n_internal() as Vertex;
    let gn = guest.n_internal() as Vertex;
    let shift = |u: Vertex| -> Vertex {
        if !is_internal(u) || u <= v {
            u
        } else {
            u - 1
        }
    };
    let base = hn - 1;
    let targets: Vec<Vertex> = (0..gn).map(|j| base + j).collect();
    let mut positions = Vec::new();
    for (i, &(a, b)) in host.edges().iter().enumerate() {
        if a == v {
            positions.push((i, 0));
        }
        if b == v {
            positions.push((i, 1));
        }
    }
    let mut edges: Vec<Edge> = host
        .edges()
        .iter()
        .map(|&(a, b)| (shift(a), shift(b)))
        .chain(guest.edges().iter().map(|&(a, b)| {
            let m = |u: Vertex| if is_internal(u) { base + u } else { u };
            (m(a), m(b))
        }))
        .collect();
    let n = hn - 1 + gn;
    for_each_assignment(positions.len(), &targets, |choice| {
        for (&(i, side), &t) in positions.iter().zip(choice) {
            if side == 0 {
                edges[i].0 = t;
            } else {
                edges[i].1 = t;
            }
        }
        acc.push_scaled(n, &edges, sign);
    });
}

/// `host •_v guest`: insert `guest` at `v` and reconnect the edges at `v` to the
/// vertices of `guest` in all ways.
pub fn insert(host: &Graph, v: Vertex, guest: &Graph) -> Result<GraphVector> {
    let kind = insertion_kind(host.kind(), guest.kind())?;
    if !is_internal(v) || v as usize >= host.n_internal() {
        return Err(Error::NotInternal(v));
    }
    let mut acc = Accumulator::new(kind);
    insert_raw(host, v, guest, &mut acc, 1);
    Ok(acc.into_vector(&Rational::one()))
}

/// Bilinear extension of a map on pairs of graphs, expanding in parallel over
/// the terms of `a`.
fn bilinear(
    kind: GraphKind,
    a: &GraphVector,
    b: &GraphVector,
    raw: impl Fn(&Graph, &Graph, &mut Accumulator) + Sync,
) -> GraphVector {
    let a_terms: Vec<_> = a.terms().collect();
    let b_terms: Vec<_> = b.terms().collect();
    let parts: Vec<GraphVector> = a_terms
        .par_iter()
        .flat_map_iter(|&(g, c)| {
            b_terms.iter().map(move |&(h, d)| (g, h, c * d))
        })
        .map(|(g, h, c)| {
            let mut acc = Accumulator::new(kind);
            raw(g, h, &mut acc);
            acc.into_vector(&c)
        })
        .collect();
    let mut out = GraphVector::zero(kind);
    for p in parts {
        out.axpy(&Rational::one(), &p).expect("same kind");
    }
    out
}

/// `a • b = Σ_v a •_v b`, summing over the internal vertices of each term of `a`.
pub fn pre_lie(a: &GraphVector, b: &GraphVector) -> Result<GraphVector> {
    let kind = insertion_kind(a.kind(), b.kind())?;
    Ok(bilinear(kind, a, b, |g, h, acc| {
        for v in 0..g.n_internal() as Vertex {
            insert_raw(g, v, h, acc, 1);
        }
    }))
}

fn require(v: &GraphVector, tag: KindTag) -> Result<()> {
    if v.kind().tag != tag {
        return Err(Error::kind_mismatch(
            match tag {
                KindTag::U => "u",
                KindTag::D => "d",
                KindTag::M => "m",
                KindTag::X => "b",
            },
            v.kind(),
        ));
    }
    Ok(())
}

fn mcompose_raw(a: &Graph, b: &Graph, acc: &mut Accumulator) {
    let na = a.n_internal() as Vertex;
    let nb = b.n_internal() as Vertex;
    let mut edges: Vec<Edge> = a.edges().to_vec();
    edges.extend(b.edges().iter().map(|&(s, t)| {
        let m = |u: Vertex| if is_internal(u) { na + u } else { u };
        (m(s), m(t))
    }));
    let mut positions = Vec::new();
    for (i, &(_, t)) in a.edges().iter().enumerate() {
        if t == IN {
            positions.push((i, 1));
        }
    }
    let n_a_side = positions.len();
    for (i, &(s, _)) in b.edges().iter().enumerate() {
        if s == OUT {
            positions.push((a.n_edges() + i, 0));
        }
    }
    let below: Vec<Vertex> = (na..na + nb).chain([IN]).collect();
    let above: Vec<Vertex> = (0..na).chain([OUT]).collect();
    // the two families of choices are independent; iterate the product
    for_each_assignment(n_a_side, &below, |heads| {
        let mut e = edges.clone();
        for (&(i, _), &t) in positions[..n_a_side].iter().zip(heads) {
            e[i].1 = t;
        }
        for_each_assignment(positions.len() - n_a_side, &above, |tails| {
            for (&(i, _), &s) in positions[n_a_side..].iter().zip(tails) {
                e[i].0 = s;
            }
            acc.push(na + nb, &e, false);
        });
    });
}

/// Composition of unary operations with in/out vertices: `a` stacked above `b`.
pub fn mcompose(a: &GraphVector, b: &GraphVector) -> Result<GraphVector> {
    require(a, KindTag::M)?;
    require(b, KindTag::M)?;
    Ok(bilinear(GraphKind::M, a, b, mcompose_raw))
}

fn xcompose_raw(a: &Graph, b: &Graph, acc: &mut Accumulator) {
    let na = a.n_internal() as Vertex;
    let nb = b.n_internal() as Vertex;
    let mut edges: Vec<Edge> = a.edges().to_vec();
    edges.extend(b.edges().iter().map(|&(s, t)| {
        let m = |u: Vertex| if is_internal(u) { na + u } else { u };
        (m(s), m(t))
    }));
    let mut positions = Vec::new();
    for (i, &(s, t)) in a.edges().iter().enumerate() {
        if s == EXT {
            positions.push((i, 0));
        }
        if t == EXT {
            positions.push((i, 1));
        }
    }
    let targets: Vec<Vertex> = (na..na + nb).chain([EXT]).collect();
    for_each_assignment(positions.len(), &targets, |choice| {
        let mut e = edges.clone();
        for (&(i, side), &t) in positions.iter().zip(choice) {
            if side == 0 {
                e[i].0 = t;
            } else {
                e[i].1 = t;
            }
        }
        acc.push(na + nb, &e, false);
    });
}

/// Composition of unary operations with one external vertex: `b` is plugged into
/// the external vertex of `a`.
pub fn xcompose(a: &GraphVector, b: &GraphVector) -> Result<GraphVector> {
    require(a, KindTag::X)?;
    require(b, KindTag::X)?;
    Ok(bilinear(GraphKind::X, a, b, xcompose_raw))
}

fn directed_kind(kind: GraphKind) -> GraphKind {
    if kind.tadpoles == TadpolePolicy::All {
        GraphKind::D_TADPOLE
    } else {
        GraphKind::D
    }
}

/// Every undirected edge replaced by the sum of its two directions.
pub fn direct_image(a: &GraphVector) -> Result<GraphVector> {
    require(a, KindTag::U)?;
    let kind = directed_kind(a.kind());
    a.map_linear(kind, |g| Ok(direct_raw(g, kind).into_vector(&Rational::one())))
}

fn direct_raw(g: &Graph, kind: GraphKind) -> Accumulator {
    let mut acc = Accumulator::new(kind);
    let k = g.n_edges();
    let mut edges = g.edges().to_vec();
    for mask in 0u64..1 << k {
        for (i, &(a, b)) in g.edges().iter().enumerate() {
            edges[i] = if mask >> i & 1 == 1 { (b, a) } else { (a, b) };
        }
        acc.push(g.n_internal() as u8, &edges, false);
    }
    acc
}

/// The Lie algebra map from undirected to directed graphs: the direct image
/// divided by `2^k` on graphs with `k` edges. `μ` goes to the single directed
/// edge.
pub fn embed_directed(a: &GraphVector) -> Result<GraphVector> {
    require(a, KindTag::U)?;
    let kind = directed_kind(a.kind());
    a.map_linear(kind, |g| {
        let scale = Rational::new(1.into(), num_bigint::BigInt::from(1u64) << g.n_edges());
        Ok(direct_raw(g, kind).into_vector(&scale))
    })
}

/// `γ ↦ γ₁`: the sum over all ways to declare one vertex external.
pub fn mark_external(a: &GraphVector) -> Result<GraphVector> {
    require(a, KindTag::D)?;
    a.map_linear(GraphKind::X, |g| {
        let mut acc = Accumulator::new(GraphKind::X);
        let n = g.n_internal() as Vertex;
        for v in 0..n {
            let m = |u: Vertex| match u.cmp(&v) {
                std::cmp::Ordering::Less => u,
                std::cmp::Ordering::Equal => EXT,
                std::cmp::Ordering::Greater => u - 1,
            };
            let edges: Vec<Edge> = g.edges().iter().map(|&(a, b)| (m(a), m(b))).collect();
            acc.push(n - 1, &edges, false);
        }
        Ok(acc.into_vector(&Rational::one()))
    })
}

/// `Γ ↦ I • Γ`: a directed graph read as a graph with untouched in/out vertices.
pub fn embed_i(a: &GraphVector) -> Result<GraphVector> {
    require(a, KindTag::D)?;
    if a.kind().tadpoles == TadpolePolicy::All {
        return Err(Error::kind_mismatch(GraphKind::D, a.kind()));
    }
    a.map_linear(GraphKind::M, |g| {
        GraphVector::graph(&g.with_kind(GraphKind::M))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::int;

    fn v(s: &str) -> GraphVector {
        GraphVector::parse_graph(s).unwrap()
    }

    fn g(s: &str) -> Graph {
        s.parse().unwrap()
    }

    #[test]
    fn assignments_cover_the_product() {
        let mut seen = Vec::new();
        for_each_assignment(2, &[0, 1, 2], |c| seen.push(c.to_vec()));
        assert_eq!(seen.len(), 9);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 9);
        let mut count = 0;
        for_each_assignment(0, &[], |_| count += 1);
        assert_eq!(count, 1);
        for_each_assignment(1, &[], |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn insertion_units() {
        let mu = v("u 2 : 1-2");
        assert_eq!(insert(&g("u 1"), 0, &g("u 2 : 1-2")).unwrap(), mu);
        assert_eq!(insert(&g("u 2 : 1-2"), 0, &g("u 1")).unwrap(), mu);
        assert_eq!(pre_lie(&v("u 1"), &mu).unwrap(), mu);
        assert_eq!(pre_lie(&mu, &v("u 1")).unwrap(), mu.scale(&int(2)));
    }

    #[test]
    fn insertion_of_an_edge_into_an_edge() {
        // both reconnections give a path on three vertices, which is killed by
        // its reflection
        let r = insert(&g("u 2 : 1-2"), 0, &g("u 2 : 1-2")).unwrap();
        assert!(r.is_zero());
        // the directed path survives with its last edge listed first; the
        // out-star is killed
        let r = insert(&g("d 2 : 1>2"), 0, &g("d 2 : 1>2")).unwrap();
        assert_eq!(r, v("d 3 : 2>3, 1>2"));
    }

    #[test]
    fn insertion_checks_kinds() {
        assert!(insert(&g("u 1"), 0, &g("d 1")).is_err());
        assert!(insert(&g("m 1"), 0, &g("u 1")).is_err());
        assert!(matches!(insert(&g("u 1"), 1, &g("u 1")), Err(Error::NotInternal(1))));
    }

    #[test]
    fn compositions_have_units() {
        let gamma = v("m 2 : o>1, o>2, 1>2, 1>i, 2>i");
        let one = v("m 0");
        assert_eq!(mcompose(&one, &gamma).unwrap(), gamma);
        assert_eq!(mcompose(&gamma, &one).unwrap(), gamma);
        let mu1 = v("b 1 : x>1").add(&v("b 1 : 1>x")).unwrap();
        let one_x = v("b 0");
        assert_eq!(xcompose(&mu1, &one_x).unwrap(), mu1);
        assert_eq!(xcompose(&one_x, &mu1).unwrap(), mu1);
    }

    #[test]
    fn tadpole_at_x_squares_to_zero() {
        let d = v("b 0 : x>x");
        assert!(xcompose(&d, &d).unwrap().is_zero());
    }

    #[test]
    fn tadpole_at_x_survives_insertion() {
        let d = v("b 1 : x>x, x>1");
        let r = pre_lie(&d, &v("d 2 : 1>2")).unwrap();
        assert!(!r.is_zero());
        assert!(r.terms().all(|(g, _)| g.edges().contains(&(EXT, EXT))));
    }

    #[test]
    fn direct_images() {
        let mu = v("u 2 : 1-2");
        assert_eq!(direct_image(&v("u 1")).unwrap(), v("d 1"));
        assert_eq!(direct_image(&mu).unwrap(), v("d 2 : 1>2").scale(&int(2)));
        assert_eq!(embed_directed(&mu).unwrap(), v("d 2 : 1>2"));
        let marked = mark_external(&direct_image(&mu).unwrap()).unwrap();
        let expected = v("b 1 : x>1").add(&v("b 1 : 1>x")).unwrap().scale(&int(2));
        assert_eq!(marked, expected);
        assert_eq!(mark_external(&v("d 1")).unwrap(), v("b 0"));
        assert_eq!(embed_i(&v("d 2 : 1>2")).unwrap(), v("m 2 : 1>2"));
        assert_eq!(embed_i(&v("d 1")).unwrap(), v("m 1"));
    }
}
