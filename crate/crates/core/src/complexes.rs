//! Gradings, Lie brackets and differentials of the graph complexes.
//!
//! Every differential is the adjoint action of a Maurer-Cartan element: `μ` on
//! the undirected complexes, the directed edge on the directed one, `μ + L` on
//! the extended complex and `μ₁` together with the right action of the directed
//! edge on the unary operations with one external vertex.

use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::enumerate::Constraints;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, GraphKind, KindTag, TadpolePolicy, Vertex};
use crate::gtmaps;
use crate::operads::{embed_directed, mcompose, pre_lie, xcompose};
use crate::vector::{Accumulator, GraphVector, Rational};

/// Weight and cohomological degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bidegree {
    pub w: i64,
    pub d: i64,
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(w={}, d={})", self.w, self.d)
    }
}

pub fn bidegree(g: &Graph) -> Bidegree {
    let n = g.n_internal() as i64;
    let k = g.n_edges() as i64;
    match g.kind().tag {
        KindTag::U | KindTag::D => Bidegree {
            w: k - n + 1,
            d: 2 * n - k - 2,
        },
        KindTag::M | KindTag::X => Bidegree { w: k - n, d: 2 * n - k },
    }
}

/// The number of internal vertices and edges of graphs of `kind` in bidegree `b`.
pub fn vertices_and_edges(kind: GraphKind, b: Bidegree) -> Option<(usize, usize)> {
    let (n, k) = match kind.tag {
        KindTag::U | KindTag::D => (b.d + b.w + 1, b.d + 2 * b.w),
        KindTag::M | KindTag::X => (b.d + b.w, b.d + 2 * b.w),
    };
    (n >= 0 && k >= 0).then_some((n as usize, k as usize))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComplexKind {
    /// Undirected graphs.
    Fgc,
    /// Undirected graphs with tadpoles.
    FgcTadpole,
    /// Directed graphs.
    Dfgc,
    /// Graphs with in/out vertices.
    Fgc1,
    /// Pairs of an undirected graph part and an in/out part.
    Fegc,
    /// Graphs with one external vertex, internal tadpoles set to zero.
    Fbvg1,
}

/// A complex together with the constraints selecting a subcomplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ComplexId {
    pub kind: ComplexKind,
    pub flags: Constraints,
}

const CONNECTED: Constraints = Constraints {
    connected: true,
    ..Constraints::NONE
};

const INTERNALLY_CONNECTED: Constraints = Constraints {
    internally_connected: true,
    ..Constraints::NONE
};

impl ComplexId {
    pub const fn new(kind: ComplexKind) -> ComplexId {
        ComplexId {
            kind,
            flags: Constraints::NONE,
        }
    }

    pub const FGC: ComplexId = ComplexId::new(ComplexKind::Fgc);
    pub const FCGC: ComplexId = ComplexId {
        kind: ComplexKind::Fgc,
        flags: CONNECTED,
    };
    pub const GC: ComplexId = ComplexId {
        kind: ComplexKind::Fgc,
        flags: Constraints {
            min_valence: 3,
            ..CONNECTED
        },
    };
    pub const FGC_TADPOLE: ComplexId = ComplexId::new(ComplexKind::FgcTadpole);
    pub const DFGC: ComplexId = ComplexId::new(ComplexKind::Dfgc);
    pub const FGC1: ComplexId = ComplexId::new(ComplexKind::Fgc1);
    pub const FCGC1: ComplexId = ComplexId {
        kind: ComplexKind::Fgc1,
        flags: INTERNALLY_CONNECTED,
    };
    pub const GC1: ComplexId = ComplexId {
        kind: ComplexKind::Fgc1,
        flags: Constraints {
            min_valence: 2,
            ..INTERNALLY_CONNECTED
        },
    };
    pub const FEGC: ComplexId = ComplexId::new(ComplexKind::Fegc);
    pub const FBVG1: ComplexId = ComplexId::new(ComplexKind::Fbvg1);
    pub const BVG1: ComplexId = ComplexId {
        kind: ComplexKind::Fbvg1,
        flags: Constraints {
            no_free_internal: true,
            ..Constraints::NONE
        },
    };

    pub fn with_flags(self, flags: Constraints) -> ComplexId {
        ComplexId { flags, ..self }
    }

    /// Kind of the graphs spanning the complex (the undirected part for the
    /// extended complex).
    pub fn graph_kind(&self) -> GraphKind {
        match self.kind {
            ComplexKind::Fgc | ComplexKind::Fegc => GraphKind::U,
            ComplexKind::FgcTadpole => GraphKind::U_TADPOLE,
            ComplexKind::Dfgc => GraphKind::D,
            ComplexKind::Fgc1 => GraphKind::M,
            ComplexKind::Fbvg1 => GraphKind::X,
        }
    }

    /// Constraints applied to the in/out part of the extended complex.
    pub fn m_flags(&self) -> Constraints {
        Constraints {
            connected: false,
            internally_connected: self.flags.internally_connected || self.flags.connected,
            min_valence: self.flags.min_valence.min(2),
            no_free_internal: self.flags.no_free_internal,
        }
    }

    pub fn admits(&self, g: &Graph) -> bool {
        in_subcomplex(self, g)
    }
}

impl fmt::Display for ComplexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let named = [
            (ComplexId::FGC, "fGC"),
            (ComplexId::FCGC, "fcGC"),
            (ComplexId::GC, "GC"),
            (ComplexId::FGC_TADPOLE, "fGC@"),
            (ComplexId::DFGC, "dfGC"),
            (ComplexId::FGC1, "fGC1"),
            (ComplexId::FCGC1, "fcGC1"),
            (ComplexId::GC1, "GC1"),
            (ComplexId::FEGC, "fEGC"),
            (ComplexId::FBVG1, "fBVG1"),
            (ComplexId::BVG1, "BVG1"),
        ];
        if let Some((_, name)) = named.iter().find(|(c, _)| c == self) {
            return f.write_str(name);
        }
        let base = named
            .iter()
            .find(|(c, _)| c.kind == self.kind && c.flags == Constraints::NONE)
            .map(|(_, n)| *n)
            .unwrap_or("?");
        write!(f, "{base}[{}]", flags_to_string(&self.flags))
    }
}

pub fn flags_to_string(c: &Constraints) -> String {
    let mut parts = Vec::new();
    if c.connected {
        parts.push("connected".to_string());
    }
    if c.internally_connected {
        parts.push("internally-connected".to_string());
    }
    if c.min_valence > 0 {
        parts.push(format!("minval{}", c.min_valence));
    }
    if c.no_free_internal {
        parts.push("no-free-internal".to_string());
    }
    parts.join(",")
}

/// Parses a comma separated flag list such as `connected,minval3`.
pub fn parse_flags(text: &str) -> Result<Constraints> {
    let mut c = Constraints::NONE;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part {
            "connected" => c.connected = true,
            "internally-connected" | "iconnected" => c.internally_connected = true,
            "no-free-internal" | "nofree" => c.no_free_internal = true,
            _ => match part.strip_prefix("minval").map(str::parse::<usize>) {
                Some(Ok(v)) => c.min_valence = v,
                _ => {
                    return Err(Error::InvalidArgument(format!("unknown flag '{part}'")))
                }
            },
        }
    }
    Ok(c)
}

impl FromStr for ComplexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id = match s {
            "fGC" => ComplexId::FGC,
            "fcGC" => ComplexId::FCGC,
            "GC" => ComplexId::GC,
            "fGC@" => ComplexId::FGC_TADPOLE,
            "dfGC" => ComplexId::DFGC,
            "fGC1" => ComplexId::FGC1,
            "fcGC1" => ComplexId::FCGC1,
            "GC1" => ComplexId::GC1,
            "fEGC" => ComplexId::FEGC,
            "fBVG1" => ComplexId::FBVG1,
            "BVG1" => ComplexId::BVG1,
            _ => {
                return Err(Error::InvalidArgument(format!("unknown complex '{s}'")))
            }
        };
        Ok(id)
    }
}

/// An element of the extended complex: an undirected part and an in/out part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EgcElement {
    pub gc: GraphVector,
    pub m: GraphVector,
}

impl EgcElement {
    pub fn zero() -> EgcElement {
        EgcElement {
            gc: GraphVector::zero(GraphKind::U),
            m: GraphVector::zero(GraphKind::M),
        }
    }

    pub fn new(gc: GraphVector, m: GraphVector) -> Result<EgcElement> {
        if gc.kind() != GraphKind::U {
            return Err(Error::kind_mismatch(GraphKind::U, gc.kind()));
        }
        if m.kind() != GraphKind::M {
            return Err(Error::kind_mismatch(GraphKind::M, m.kind()));
        }
        Ok(EgcElement { gc, m })
    }

    pub fn from_gc(gc: GraphVector) -> Result<EgcElement> {
        EgcElement::new(gc, GraphVector::zero(GraphKind::M))
    }

    pub fn from_m(m: GraphVector) -> Result<EgcElement> {
        EgcElement::new(GraphVector::zero(GraphKind::U), m)
    }

    pub fn is_zero(&self) -> bool {
        self.gc.is_zero() && self.m.is_zero()
    }

    pub fn add(&self, other: &EgcElement) -> EgcElement {
        EgcElement {
            gc: self.gc.add(&other.gc).expect("undirected parts"),
            m: self.m.add(&other.m).expect("in/out parts"),
        }
    }

    pub fn sub(&self, other: &EgcElement) -> EgcElement {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> EgcElement {
        EgcElement {
            gc: self.gc.scale(c),
            m: self.m.scale(c),
        }
    }

    /// Both parts in one vector file.
    pub fn to_vector_text(&self) -> String {
        format!("{}{}", self.gc, self.m)
    }

    /// Reads a vector file whose lines may mix undirected and in/out graphs.
    pub fn parse(text: &str) -> Result<EgcElement> {
        let mut out = EgcElement::zero();
        for (c, g) in crate::vector::parse_terms(text)? {
            match g.kind() {
                GraphKind::U => out.gc.add_term(c, &g)?,
                GraphKind::M => out.m.add_term(c, &g)?,
                other => return Err(Error::kind_mismatch("u or m", other)),
            }
        }
        Ok(out)
    }
}

/// Splits a vector into its even and odd degree parts.
pub fn parity_parts(v: &GraphVector) -> (GraphVector, GraphVector) {
    (v.filter(|g| !g.is_odd()), v.filter(|g| g.is_odd()))
}

/// `f(a, b) − (−1)^{|a||b|} f(b, a)`, applied to homogeneous parity parts.
fn graded_commutator(
    a: &GraphVector,
    b: &GraphVector,
    f: impl Fn(&GraphVector, &GraphVector) -> Result<GraphVector>,
) -> Result<GraphVector> {
    let (a0, a1) = parity_parts(a);
    let (b0, b1) = parity_parts(b);
    let mut out = f(a, b)?;
    for (x, xo) in [(&a0, false), (&a1, true)] {
        for (y, yo) in [(&b0, false), (&b1, true)] {
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let sign = if xo && yo { Rational::one() } else { -Rational::one() };
            out.axpy(&sign, &f(y, x)?)?;
        }
    }
    Ok(out)
}

/// The Lie bracket on one kind of graphs: from the pre-Lie insertion for
/// undirected and directed graphs, from composition for unary operations.
pub fn bracket(a: &GraphVector, b: &GraphVector) -> Result<GraphVector> {
    if a.kind().tag != b.kind().tag {
        return Err(Error::kind_mismatch(a.kind(), b.kind()));
    }
    match a.kind().tag {
        KindTag::U | KindTag::D => {
            let kind = if a.kind().tadpoles == TadpolePolicy::All
                || b.kind().tadpoles == TadpolePolicy::All
            {
                a.kind().with_tadpoles()
            } else {
                a.kind()
            };
            let a = a.with_kind(kind)?;
            let b = b.with_kind(kind)?;
            graded_commutator(&a, &b, pre_lie)
        }
        KindTag::M => graded_commutator(a, b, mcompose),
        KindTag::X => graded_commutator(a, b, xcompose),
    }
}

/// `−(−1)^{|x||y₁|} y₁ • φ(x)`: the bracket of an undirected element with an
/// in/out element.
fn mixed(x: &GraphVector, y1: &GraphVector) -> Result<GraphVector> {
    let (y0, y1o) = parity_parts(y1);
    let (x0, x1) = parity_parts(x);
    let mut out = GraphVector::zero(GraphKind::M);
    for (yy, yo) in [(&y0, false), (&y1o, true)] {
        for (xx, xo) in [(&x0, false), (&x1, true)] {
            if xx.is_zero() || yy.is_zero() {
                continue;
            }
            let sign = if xo && yo { Rational::one() } else { -Rational::one() };
            out.axpy(&sign, &pre_lie(yy, &embed_directed(xx)?)?)?;
        }
    }
    Ok(out)
}

/// The bracket of the extended complex.
pub fn egc_bracket(a: &EgcElement, b: &EgcElement) -> Result<EgcElement> {
    let gc = bracket(&a.gc, &b.gc)?;
    let mut m = bracket(&a.m, &b.m)?;
    // [x₁, y] = x₁ • φ(y)
    m.axpy(&Rational::one(), &pre_lie(&a.m, &embed_directed(&b.gc)?)?)?;
    // [x, y₁] = −(−1)^{|x||y₁|} y₁ • φ(x)
    m.axpy(&Rational::one(), &mixed(&a.gc, &b.m)?)?;
    EgcElement::new(gc, m)
}

fn check_in(c: &ComplexId, a: &GraphVector) -> Result<()> {
    let kind = c.graph_kind();
    let kind_ok = if c.kind == ComplexKind::FgcTadpole {
        a.kind().tag == KindTag::U
    } else {
        a.kind() == kind
    };
    if !kind_ok {
        return Err(Error::NotInComplex {
            complex: c.to_string(),
            reason: format!("graphs of kind {} expected, found {}", kind, a.kind()),
        });
    }
    if let Some((g, _)) = a.terms().find(|(g, _)| !c.flags.admits(g)) {
        return Err(Error::NotInComplex {
            complex: c.to_string(),
            reason: format!("graph {g} violates the constraints"),
        });
    }
    Ok(())
}

/// The differential of a single-kind complex.
pub fn differential(c: &ComplexId, a: &GraphVector) -> Result<GraphVector> {
    check_in(c, a)?;
    match c.kind {
        ComplexKind::Fgc => bracket(&gtmaps::mu(), a),
        ComplexKind::FgcTadpole => bracket(&gtmaps::mu().with_kind(GraphKind::U_TADPOLE)?, a),
        ComplexKind::Dfgc => bracket(&gtmaps::directed_edge(), a),
        ComplexKind::Fgc1 => {
            let x = EgcElement::from_m(a.clone())?;
            Ok(egc_bracket(&gtmaps::mc_element(), &x)?.m)
        }
        ComplexKind::Fbvg1 => {
            // μ₁ ∘ a − (−1)^{|a|} (a • e + a ∘ μ₁)
            let mut out = bracket(&gtmaps::mu1(), a)?;
            let (a0, a1) = parity_parts(a);
            let e = gtmaps::directed_edge();
            out.axpy(&-Rational::one(), &pre_lie(&a0, &e)?)?;
            out.axpy(&Rational::one(), &pre_lie(&a1, &e)?)?;
            Ok(out)
        }
        ComplexKind::Fegc => Err(Error::NotInComplex {
            complex: c.to_string(),
            reason: "elements of the extended complex are pairs".into(),
        }),
    }
}

/// The differential of the extended complex, `[μ + L, ·]`.
pub fn egc_differential(x: &EgcElement) -> Result<EgcElement> {
    egc_bracket(&gtmaps::mc_element(), x)
}

/// `∇`: the sum over all ways to add one edge, the new edge listed last.
pub fn divergence(a: &GraphVector) -> Result<GraphVector> {
    if !matches!(a.kind(), GraphKind::U | GraphKind::D) {
        return Err(Error::kind_mismatch("u or d", a.kind()));
    }
    let kind = a.kind();
    a.map_linear(kind, |g| {
        let mut acc = Accumulator::new(kind);
        let n = g.n_internal() as Vertex;
        let mut edges: Vec<Edge> = g.edges().to_vec();
        edges.push((0, 0));
        let last = edges.len() - 1;
        for i in 0..n {
            for j in 0..n {
                if i == j || (!kind.is_directed() && j < i) {
                    continue;
                }
                edges[last] = (i, j);
                acc.push(n, &edges, false);
            }
        }
        Ok(acc.into_vector(&Rational::one()))
    })
}

/// `[t, a]` computed with tadpoles allowed, `t` the tadpole graph. On
/// tadpole-free `a` this equals `2 (−1)^{|a|} ∇a`.
pub fn divergence_via_tadpole(a: &GraphVector) -> Result<GraphVector> {
    let a = a.with_kind(GraphKind::U_TADPOLE)?;
    bracket(&gtmaps::tadpole(), &a)
}

pub fn is_cocycle(c: &ComplexId, a: &GraphVector) -> Result<bool> {
    Ok(differential(c, a)?.is_zero())
}

pub fn is_egc_cocycle(x: &EgcElement) -> Result<bool> {
    Ok(egc_differential(x)?.is_zero())
}

pub fn is_divergence_free(a: &GraphVector) -> Result<bool> {
    Ok(divergence(a)?.is_zero())
}

/// Whether a graph lies in the complex: right kind and all constraints met.
pub fn in_subcomplex(c: &ComplexId, g: &Graph) -> bool {
    let kind_ok = match c.kind {
        ComplexKind::Fegc => g.kind() == GraphKind::U || g.kind() == GraphKind::M,
        ComplexKind::FgcTadpole => g.kind().tag == KindTag::U,
        _ => g.kind() == c.graph_kind(),
    };
    if !kind_ok {
        return false;
    }
    if c.kind == ComplexKind::Fegc && g.kind() == GraphKind::M {
        return c.m_flags().admits(g);
    }
    c.flags.admits(g)
}
