//! Distinguished elements, the isomorphism `F` from in/out graphs to graphs with
//! one external vertex, its inverse, and the lifting map `Ψ`.

use num_traits::One;

use crate::complexes::{divergence, EgcElement};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, GraphKind, KindTag, Vertex, EXT, IN, OUT};
use crate::operads::{embed_directed, for_each_assignment, mark_external};
use crate::vector::{Accumulator, GraphVector, Rational};

fn lit(s: &str) -> GraphVector {
    GraphVector::parse_graph(s).expect("valid literal")
}

fn sum(a: &str, b: &str, sign: i64) -> GraphVector {
    let mut v = lit(a);
    v.axpy(&Rational::from_integer(sign.into()), &lit(b))
        .expect("same kind");
    v
}

/// `𝟙`: no vertices besides in and out.
pub fn one() -> GraphVector {
    lit("m 0")
}

/// `B`: a single edge from out to in.
pub fn b_element() -> GraphVector {
    lit("m 0 : o>i")
}

/// `I`: one internal vertex, no edges.
pub fn i_element() -> GraphVector {
    lit("m 1")
}

pub fn l_element() -> GraphVector {
    sum("m 1 : 1>i", "m 1 : o>1", -1)
}

/// `μ`: the single undirected edge.
pub fn mu() -> GraphVector {
    lit("u 2 : 1-2")
}

/// The single directed edge, image of `μ` among directed graphs.
pub fn directed_edge() -> GraphVector {
    lit("d 2 : 1>2")
}

pub fn mu1() -> GraphVector {
    sum("b 1 : x>1", "b 1 : 1>x", 1)
}

/// `t`: the tadpole graph.
pub fn tadpole() -> GraphVector {
    lit("u@ 1 : 1-1")
}

/// `θ₄`: the complete graph on four vertices.
pub fn theta4() -> GraphVector {
    lit("u 4 : 1-2, 1-3, 1-4, 2-3, 2-4, 3-4")
}

/// `𝟙ₓ`: the bare external vertex.
pub fn one_x() -> GraphVector {
    lit("b 0")
}

/// `D`: the tadpole at the external vertex.
pub fn d_element() -> GraphVector {
    lit("b 0 : x>x")
}

/// `μ + L`, the Maurer-Cartan element of the extended complex.
pub fn mc_element() -> EgcElement {
    EgcElement::new(mu(), l_element()).expect("kinds")
}

/// Looks up a distinguished element by name; both parts for `m`.
pub fn named(name: &str) -> Option<NamedElement> {
    let v = match name {
        "one" => one(),
        "B" | "b" => b_element(),
        "I" | "i" => i_element(),
        "L" => l_element(),
        "mu" => mu(),
        "e" => directed_edge(),
        "mu1" => mu1(),
        "tadpole" | "t" => tadpole(),
        "theta4" => theta4(),
        "oneX" | "onex" => one_x(),
        "D" => d_element(),
        "m" => return Some(NamedElement::Pair(mc_element())),
        _ => return None,
    };
    Some(NamedElement::Vector(v))
}

pub enum NamedElement {
    Vector(GraphVector),
    Pair(EgcElement),
}

pub const NAMES: &[&str] = &[
    "one", "B", "I", "L", "mu", "e", "mu1", "tadpole", "theta4", "oneX", "D", "m",
];

fn require(v: &GraphVector, tag: KindTag, name: &str) -> Result<()> {
    if v.kind().tag != tag {
        return Err(Error::kind_mismatch(name, v.kind()));
    }
    Ok(())
}

/// Remaps an in/out graph to a graph with external vertex: heads at in go to x
/// and the tails of out-edges take the given values.
fn reroute(g: &Graph, tails: &[Vertex], positions: &[usize]) -> Vec<Edge> {
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|&(a, b)| (a, if b == IN { EXT } else { b }))
        .collect();
    for (&i, &t) in positions.iter().zip(tails) {
        edges[i].0 = t;
    }
    edges
}

fn out_positions(g: &Graph) -> Vec<usize> {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.0 == OUT)
        .map(|(i, _)| i)
        .collect()
}

fn f_graph(g: &Graph, leading_only: bool) -> GraphVector {
    let mut acc = Accumulator::new(GraphKind::X);
    let positions = out_positions(g);
    let odd = positions.len() % 2 == 1;
    let n = g.n_internal() as Vertex;
    if leading_only {
        let tails = vec![EXT; positions.len()];
        acc.push(n, &reroute(g, &tails, &positions), odd);
    } else {
        let targets: Vec<Vertex> = (0..n).chain([EXT]).collect();
        for_each_assignment(positions.len(), &targets, |tails| {
            acc.push(n, &reroute(g, tails, &positions), odd);
        });
    }
    acc.into_vector(&Rational::one())
}

/// `F`: delete out, reconnect the tails of its edges to the internal vertices or
/// to x in all ways, rename in to x, and multiply by `(−1)^{out-valence}`.
pub fn f_map(a: &GraphVector) -> Result<GraphVector> {
    require(a, KindTag::M, "m")?;
    a.map_linear(GraphKind::X, |g| Ok(f_graph(g, false)))
}

/// The part of `F` keeping the out-valence: every tail reconnects to x.
pub fn f_leading(a: &GraphVector) -> Result<GraphVector> {
    require(a, KindTag::M, "m")?;
    a.map_linear(GraphKind::X, |g| Ok(f_graph(g, true)))
}

/// Inverse of [`f_leading`]: tails at x move to out, heads at x to in.
fn f_leading_inverse(b: &GraphVector) -> Result<GraphVector> {
    b.map_linear(GraphKind::M, |g| {
        let mut odd = false;
        let edges: Vec<Edge> = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let a = if a == EXT {
                    odd = !odd;
                    OUT
                } else {
                    a
                };
                (a, if b == EXT { IN } else { b })
            })
            .collect();
        let mut acc = Accumulator::new(GraphKind::M);
        acc.push(g.n_internal() as u8, &edges, odd);
        Ok(acc.into_vector(&Rational::one()))
    })
}

/// `F⁻¹` by the series `D⁻¹ − D⁻¹ N D⁻¹ + …` with `D` the leading part of `F`
/// and `N = F − D`, which lowers the number of edges leaving x.
pub fn f_inverse(b: &GraphVector) -> Result<GraphVector> {
    require(b, KindTag::X, "b")?;
    let mut cur = f_leading_inverse(b)?;
    let mut res = cur.clone();
    let bound = b.terms().map(|(g, _)| g.n_edges()).max().unwrap_or(0) + 1;
    for _ in 0..bound {
        if cur.is_zero() {
            break;
        }
        let n = f_map(&cur)?.sub(&f_leading(&cur)?)?;
        cur = f_leading_inverse(&n)?.neg();
        res = res.add(&cur)?;
    }
    debug_assert!(cur.is_zero());
    Ok(res)
}

/// `γ ↦ γ₁` for undirected `γ`: mark one vertex of its directed image as
/// external.
pub fn marked(x: &GraphVector) -> Result<GraphVector> {
    mark_external(&embed_directed(x)?)
}

/// `Ψ(X) = X + F⁻¹(X₁)` for divergence-free `X`.
pub fn psi(x: &GraphVector) -> Result<EgcElement> {
    require(x, KindTag::U, "u")?;
    let div = divergence(x)?;
    if !div.is_zero() {
        return Err(Error::NotDivergenceFree(div.to_string()));
    }
    EgcElement::new(x.clone(), f_inverse(&marked(x)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn images_of_the_distinguished_elements() {
        assert_eq!(f_map(&one()).unwrap(), one_x());
        assert_eq!(f_map(&l_element()).unwrap(), mu1());
        // B has one out-edge, so F carries a minus sign
        assert_eq!(f_map(&b_element()).unwrap(), d_element().neg());
    }

    #[test]
    fn inverse_on_distinguished_elements() {
        assert_eq!(f_inverse(&one_x()).unwrap(), one());
        assert_eq!(f_inverse(&mu1()).unwrap(), l_element());
        assert_eq!(f_inverse(&d_element()).unwrap(), b_element().neg());
    }

    #[test]
    fn example_graph_has_two_images() {
        let g = lit("m 2 : o>1, o>2, 1>2, 1>i, 2>i");
        let f = f_map(&g).unwrap();
        assert_eq!(f.len(), 2);
        assert!(f.terms().all(|(_, c)| c.numer().magnitude() == &1u32.into() && c.is_integer()));
        assert_eq!(f_inverse(&f).unwrap(), g);
    }

    #[test]
    fn psi_of_simple_graphs() {
        let p = psi(&mu()).unwrap();
        assert_eq!(p, mc_element());
        let p = psi(&lit("u 1")).unwrap();
        assert_eq!(p.m, one());
        assert!(matches!(psi(&lit("u 2")), Err(Error::NotDivergenceFree(_))));
    }
}
