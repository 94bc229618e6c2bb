//! Formal linear combinations of canonical graphs with rational coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::canon::{canon_term, canonicalize, Sign, Term};
use crate::error::{Error, Result};
use crate::graph::{parse_graph, Edge, Graph, GraphKind};

pub type Rational = BigRational;

pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    BigRational::from_integer(BigInt::from(p))
}

/// A finite linear combination of canonical graphs of a single kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GraphVector {
    kind: GraphKind,
    terms: BTreeMap<Graph, Rational>,
}

impl GraphVector {
    pub fn zero(kind: GraphKind) -> GraphVector {
        GraphVector {
            kind,
            terms: BTreeMap::new(),
        }
    }

    /// `c · g`, routed through canonicalization.
    pub fn term(c: Rational, g: &Graph) -> Result<GraphVector> {
        let mut v = GraphVector::zero(g.kind());
        v.add_term(c, g)?;
        Ok(v)
    }

    pub fn graph(g: &Graph) -> Result<GraphVector> {
        GraphVector::term(Rational::one(), g)
    }

    /// Parses a single graph literal as a vector with coefficient one.
    pub fn parse_graph(text: &str) -> Result<GraphVector> {
        GraphVector::graph(&parse_graph(text)?)
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Graph, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, c: Rational, g: &Graph) -> Result<()> {
        self.check_kind(g.kind())?;
        let sc = canonicalize(g)?;
        match sc.sign {
            Sign::Zero => {}
            Sign::Plus => self.add_canonical(sc.graph, c),
            Sign::Minus => self.add_canonical(sc.graph, -c),
        }
        Ok(())
    }

    /// Adds `c · g` where `g` is already canonical and nonzero.
    pub(crate) fn add_canonical(&mut self, g: Graph, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_kind(&self, kind: GraphKind) -> Result<()> {
        if kind != self.kind {
            return Err(Error::kind_mismatch(self.kind, kind));
        }
        Ok(())
    }

    pub fn add(&self, other: &GraphVector) -> Result<GraphVector> {
        self.check_kind(other.kind)?;
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_canonical(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GraphVector) -> Result<GraphVector> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> GraphVector {
        if c.is_zero() {
            return GraphVector::zero(self.kind);
        }
        GraphVector {
            kind: self.kind,
            terms: self.terms.iter().map(|(g, x)| (g.clone(), x * c)).collect(),
        }
    }

    pub fn neg(&self) -> GraphVector {
        self.scale(&-Rational::one())
    }

    /// Adds `c · other` in place.
    pub fn axpy(&mut self, c: &Rational, other: &GraphVector) -> Result<()> {
        self.check_kind(other.kind)?;
        for (g, x) in &other.terms {
            self.add_canonical(g.clone(), x * c);
        }
        Ok(())
    }

    /// Coefficient of `g`, with the sign relating `g` to its canonical form.
    pub fn coeff(&self, g: &Graph) -> Result<Rational> {
        self.check_kind(g.kind())?;
        let sc = canonicalize(g)?;
        let c = self.terms.get(&sc.graph).cloned().unwrap_or_else(Rational::zero);
        Ok(match sc.sign {
            Sign::Zero => Rational::zero(),
            Sign::Plus => c,
            Sign::Minus => -c,
        })
    }

    /// Same vector viewed in another kind with the same vertex set, e.g. a
    /// tadpole-free graph inside the complex with tadpoles.
    pub fn with_kind(&self, kind: GraphKind) -> Result<GraphVector> {
        let mut out = GraphVector::zero(kind);
        for (g, c) in &self.terms {
            out.add_term(c.clone(), &g.with_kind(kind))?;
        }
        Ok(out)
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Graph) -> bool) -> GraphVector {
        GraphVector {
            kind: self.kind,
            terms: self
                .terms
                .iter()
                .filter(|(g, _)| keep(g))
                .map(|(g, c)| (g.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies a linear map given on graphs.
    pub fn map_linear(
        &self,
        kind: GraphKind,
        f: impl Fn(&Graph) -> Result<GraphVector> + Sync,
    ) -> Result<GraphVector> {
        use rayon::prelude::*;
        let images: Vec<(Rational, GraphVector)> = self
            .terms
            .par_iter()
            .map(|(g, c)| f(g).map(|v| (c.clone(), v)))
            .collect::<Result<_>>()?;
        let mut out = GraphVector::zero(kind);
        for (c, v) in images {
            out.axpy(&c, &v)?;
        }
        Ok(out)
    }

    /// Largest absolute numerator and denominator among the coefficients, for
    /// reporting.
    pub fn max_height(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs().max(c.denom().clone()))
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Display for GraphVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, c) in &self.terms {
            writeln!(f, "{c} | {g}")?;
        }
        Ok(())
    }
}

pub fn vadd(a: &GraphVector, b: &GraphVector) -> Result<GraphVector> {
    a.add(b)
}

pub fn vscale(c: &Rational, a: &GraphVector) -> GraphVector {
    a.scale(c)
}

pub fn vterm(c: Rational, g: &Graph) -> Result<GraphVector> {
    GraphVector::term(c, g)
}

pub fn vequal(a: &GraphVector, b: &GraphVector) -> bool {
    a == b
}

pub fn vcoeff(a: &GraphVector, g: &Graph) -> Result<Rational> {
    a.coeff(g)
}

/// Integer accumulator for the raw terms produced by expanding a single graph.
pub(crate) struct Accumulator {
    kind: GraphKind,
    terms: HashMap<Graph, i64>,
}

impl Accumulator {
    pub(crate) fn new(kind: GraphKind) -> Self {
        Accumulator {
            kind,
            terms: HashMap::new(),
        }
    }

    /// Adds `(-1)^odd · [edges]`, canonicalizing first.
    pub(crate) fn push(&mut self, n: u8, edges: &[Edge], odd: bool) {
        self.push_scaled(n, edges, if odd { -1 } else { 1 });
    }

    pub(crate) fn push_scaled(&mut self, n: u8, edges: &[Edge], c: i64) {
        if let Term::Graph { graph, odd } = canon_term(self.kind, n, edges) {
            *self.terms.entry(graph).or_insert(0) += if odd { -c } else { c };
        }
    }

    pub(crate) fn into_vector(self, scale: &Rational) -> GraphVector {
        let mut v = GraphVector::zero(self.kind);
        for (g, c) in self.terms {
            if c != 0 {
                v.add_canonical(g, scale * BigInt::from(c));
            }
        }
        v
    }
}

/// A parsed vector file: every term with its graph as written.
pub fn parse_terms(text: &str) -> Result<Vec<(Rational, Graph)>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
        let (c, g) = line
            .split_once('|')
            .ok_or_else(|| parse_err("expected '<rational> | <graph>'".into()))?;
        let c: Rational = c
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("bad coefficient '{}'", c.trim())))?;
        let g = parse_graph(g.trim()).map_err(|e| parse_err(e.to_string()))?;
        out.push((c, g));
    }
    Ok(out)
}

/// Reads a single-kind vector file. An empty file is the zero vector of `default_kind`.
pub fn parse_vector(text: &str, default_kind: GraphKind) -> Result<GraphVector> {
    let terms = parse_terms(text)?;
    let kind = terms.first().map(|(_, g)| g.kind()).unwrap_or(default_kind);
    let mut v = GraphVector::zero(kind);
    for (c, g) in terms {
        v.add_term(c, &g)?;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Graph {
        parse_graph(s).unwrap()
    }

    #[test]
    fn cancellation_and_killed_graphs() {
        let v = GraphVector::parse_graph("d 3 : 1>2, 2>3").unwrap();
        assert!(v.add(&v.neg()).unwrap().is_zero());
        assert!(vterm(int(1), &g("u 2 : 1-2, 1-2")).unwrap().is_zero());
        let a = vterm(int(1), &g("u 3 : 2-3, 1-2, 1-3")).unwrap();
        let b = vterm(int(1), &g("u 3 : 1-2, 1-3, 2-3")).unwrap();
        assert!(a.add(&b).unwrap().is_zero());
    }

    #[test]
    fn coefficients_follow_the_edge_order() {
        let path = g("d 3 : 1>2, 2>3");
        let v = vterm(int(3), &path).unwrap();
        assert_eq!(vcoeff(&v, &path).unwrap(), int(3));
        assert_eq!(vcoeff(&v, &g("d 3 : 2>3, 1>2")).unwrap(), int(-3));
        // relabel 1 -> 3 -> 2 -> 1 keeping the edge order
        assert_eq!(vcoeff(&v, &g("d 3 : 3>1, 1>2")).unwrap(), int(3));
        assert_eq!(
            vcoeff(&GraphVector::zero(GraphKind::D), &path).unwrap(),
            int(0)
        );
    }

    #[test]
    fn kinds_must_match() {
        let a = GraphVector::parse_graph("u 2 : 1-2").unwrap();
        let b = GraphVector::parse_graph("d 2 : 1>2").unwrap();
        assert!(matches!(a.add(&b), Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn vector_file_round_trip() {
        let text = "# a comment\n\n1/2 | u 2 : 1-2\n-3 | u 4: 1-2 ,2-3, 3-4, 2-4, 1-3 \n";
        let v = parse_vector(text, GraphKind::U).unwrap();
        assert_eq!(v.len(), 2);
        let again = parse_vector(&v.to_string(), GraphKind::U).unwrap();
        assert_eq!(v, again);
        assert!(matches!(
            parse_vector("1 u 2", GraphKind::U),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
