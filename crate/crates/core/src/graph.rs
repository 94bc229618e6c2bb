//! Labeled graphs of the four kinds used throughout the crate, plus their text syntax.
//!
//! Internal vertices are numbered `0..n` in memory and `1..=n` in text. The
//! special vertices `out`, `in` (kind M) and `x` (kind X) use reserved ids above
//! every internal label, so they sort after internal vertices.
//!
//! The order of the edge list is the orientation of the graph: every edge has
//! degree −1, so an odd reordering of the edges flips the sign of the element.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

pub type Vertex = u8;
pub type Edge = (Vertex, Vertex);

pub const OUT: Vertex = 253;
pub const IN: Vertex = 254;
pub const EXT: Vertex = 255;

/// Hard limit on internal vertices; the canonical labeling is meant for tiny graphs.
pub const MAX_INTERNAL: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KindTag {
    /// Undirected, internal vertices only.
    U,
    /// Directed, internal vertices only.
    D,
    /// Directed, plus the special vertices `out` and `in`.
    M,
    /// Directed, plus one external vertex `x`.
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TadpolePolicy {
    None,
    All,
    ExternalOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphKind {
    pub tag: KindTag,
    pub tadpoles: TadpolePolicy,
}

impl GraphKind {
    pub const U: GraphKind = GraphKind {
        tag: KindTag::U,
        tadpoles: TadpolePolicy::None,
    };
    pub const U_TADPOLE: GraphKind = GraphKind {
        tag: KindTag::U,
        tadpoles: TadpolePolicy::All,
    };
    pub const D: GraphKind = GraphKind {
        tag: KindTag::D,
        tadpoles: TadpolePolicy::None,
    };
    pub const D_TADPOLE: GraphKind = GraphKind {
        tag: KindTag::D,
        tadpoles: TadpolePolicy::All,
    };
    pub const M: GraphKind = GraphKind {
        tag: KindTag::M,
        tadpoles: TadpolePolicy::None,
    };
    pub const X: GraphKind = GraphKind {
        tag: KindTag::X,
        tadpoles: TadpolePolicy::ExternalOnly,
    };

    pub fn is_directed(self) -> bool {
        self.tag != KindTag::U
    }

    pub fn allows_tadpole_at(self, v: Vertex) -> bool {
        match self.tadpoles {
            TadpolePolicy::None => false,
            TadpolePolicy::All => true,
            TadpolePolicy::ExternalOnly => v == EXT,
        }
    }

    pub fn allows_special(self, v: Vertex) -> bool {
        match self.tag {
            KindTag::U | KindTag::D => false,
            KindTag::M => v == OUT || v == IN,
            KindTag::X => v == EXT,
        }
    }

    /// The same kind with tadpoles allowed everywhere (only meaningful for U and D).
    pub fn with_tadpoles(self) -> GraphKind {
        match self.tag {
            KindTag::U | KindTag::D => GraphKind {
                tag: self.tag,
                tadpoles: TadpolePolicy::All,
            },
            _ => self,
        }
    }

    /// The text token of the kind in the graph grammar.
    pub fn token(self) -> &'static str {
        match (self.tag, self.tadpoles) {
            (KindTag::U, TadpolePolicy::All) => "u@",
            (KindTag::U, _) => "u",
            (KindTag::D, TadpolePolicy::All) => "d@",
            (KindTag::D, _) => "d",
            (KindTag::M, _) => "m",
            (KindTag::X, _) => "b",
        }
    }

    pub fn from_token(tok: &str) -> Option<GraphKind> {
        Some(match tok {
            "u" => GraphKind::U,
            "u@" => GraphKind::U_TADPOLE,
            "d" => GraphKind::D,
            "d@" => GraphKind::D_TADPOLE,
            "m" => GraphKind::M,
            "b" => GraphKind::X,
            _ => return None,
        })
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

pub fn is_internal(v: Vertex) -> bool {
    (v as usize) < MAX_INTERNAL
}

/// A labeled graph with an ordered edge list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    kind: GraphKind,
    n: u8,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph after checking every kind invariant.
    pub fn new(kind: GraphKind, n: usize, edges: Vec<Edge>) -> Result<Graph, GraphError> {
        if n > MAX_INTERNAL {
            return Err(GraphError::TooManyVertices(n));
        }
        let g = Graph {
            kind,
            n: n as u8,
            edges,
        };
        g.validate()?;
        Ok(g)
    }

    /// Builds a graph whose endpoints are known to be in range. Tadpole policy and
    /// duplicate edges are left to canonicalization.
    pub(crate) fn from_parts(kind: GraphKind, n: u8, edges: Vec<Edge>) -> Graph {
        Graph { kind, n, edges }
    }

    /// The graph with no edges and `n` internal vertices.
    pub fn empty(kind: GraphKind, n: usize) -> Graph {
        Graph::from_parts(kind, n as u8, Vec::new())
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn n_internal(&self) -> usize {
        self.n as usize
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Parity of the cohomological degree: every edge is odd, every vertex even.
    pub fn is_odd(&self) -> bool {
        self.edges.len() % 2 == 1
    }

    /// Same vertices and edges, reinterpreted as a graph of another kind.
    pub(crate) fn with_kind(&self, kind: GraphKind) -> Graph {
        Graph {
            kind,
            n: self.n,
            edges: self.edges.clone(),
        }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let kind = self.kind;
        for &(a, b) in &self.edges {
            for v in [a, b] {
                if is_internal(v) {
                    if v >= self.n {
                        return Err(GraphError::LabelOutOfRange {
                            label: v as usize + 1,
                            count: self.n as usize,
                        });
                    }
                } else if !kind.allows_special(v) {
                    return Err(GraphError::ForeignVertex {
                        vertex: vertex_name(v),
                        kind,
                    });
                }
            }
            if kind.tag == KindTag::M && (b == OUT || a == IN) {
                return Err(GraphError::InOutDirection {
                    edge: edge_text(kind, (a, b)),
                });
            }
            if a == b && !kind.allows_tadpole_at(a) {
                return Err(GraphError::TadpolePolicy {
                    vertex: vertex_name(a),
                    kind,
                });
            }
        }
        Ok(())
    }

    /// Number of edge endpoints at each internal vertex (a tadpole counts twice).
    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0usize; self.n as usize];
        for &(a, b) in &self.edges {
            if is_internal(a) {
                val[a as usize] += 1;
            }
            if is_internal(b) {
                val[b as usize] += 1;
            }
        }
        val
    }

    /// Connected components of the graph on internal vertices only, together with
    /// a flag per component telling whether it touches a special vertex.
    pub fn internal_components(&self) -> Vec<(Vec<Vertex>, bool)> {
        let n = self.n as usize;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            if is_internal(a) && is_internal(b) {
                let (ra, rb) = (find(&mut parent, a as usize), find(&mut parent, b as usize));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        let mut touches = vec![false; n];
        for &(a, b) in &self.edges {
            if is_internal(a) && !is_internal(b) {
                touches[a as usize] = true;
            }
            if is_internal(b) && !is_internal(a) {
                touches[b as usize] = true;
            }
        }
        let mut comps: Vec<(Vec<Vertex>, bool)> = Vec::new();
        let mut index = vec![usize::MAX; n];
        for v in 0..n {
            let r = find(&mut parent, v);
            if index[r] == usize::MAX {
                index[r] = comps.len();
                comps.push((Vec::new(), false));
            }
            let c = &mut comps[index[r]];
            c.0.push(v as Vertex);
            c.1 |= touches[v];
        }
        comps
    }
}

pub fn vertex_name(v: Vertex) -> String {
    match v {
        OUT => "o".into(),
        IN => "i".into(),
        EXT => "x".into(),
        v => (v as usize + 1).to_string(),
    }
}

fn edge_text(kind: GraphKind, (a, b): Edge) -> String {
    let sep = if kind.is_directed() { ">" } else { "-" };
    format!("{}{}{}", vertex_name(a), sep, vertex_name(b))
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.kind.token(), self.n)?;
        for (i, &e) in self.edges.iter().enumerate() {
            f.write_str(if i == 0 { " : " } else { ", " })?;
            f.write_str(&edge_text(self.kind, e))?;
        }
        Ok(())
    }
}

/// Writes a graph in the text grammar, preserving the stored edge order.
pub fn serialize_graph(g: &Graph) -> String {
    g.to_string()
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, GraphError> {
        Err(GraphError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), GraphError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn number(&mut self) -> Result<usize, GraphError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.src[start..]
            .bytes()
            .take_while(|b| b.is_ascii_digit())
            .count();
        if digits == 0 {
            return self.err("expected a number");
        }
        self.pos += digits;
        self.src[start..self.pos]
            .parse()
            .or_else(|_| self.err("number too large"))
    }
}

/// Parses `kind count [: edge, edge, ...]`. The written edge order is kept.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lx = Lexer { src: text, pos: 0 };
    lx.skip_ws();
    let start = lx.pos;
    let tok_len = text[start..]
        .bytes()
        .take_while(|b| b.is_ascii_alphabetic() || *b == b'@')
        .count();
    let kind = match GraphKind::from_token(&text[start..start + tok_len]) {
        Some(k) => k,
        None => return lx.err("expected a kind (u, d, m, b, u@, d@)"),
    };
    lx.pos += tok_len;
    let n = lx.number()?;
    if n > MAX_INTERNAL {
        return Err(GraphError::TooManyVertices(n));
    }
    let mut edges = Vec::new();
    if lx.peek() == Some(':') {
        lx.pos += 1;
        loop {
            let a = parse_endpoint(&mut lx, kind, n)?;
            let sep = if kind.is_directed() { '>' } else { '-' };
            lx.expect(sep)?;
            let b = parse_endpoint(&mut lx, kind, n)?;
            edges.push((a, b));
            match lx.peek() {
                Some(',') => lx.pos += 1,
                None => break,
                Some(_) => return lx.err("expected ',' or end of input"),
            }
        }
    } else if lx.peek().is_some() {
        return lx.err("expected ':' or end of input");
    }
    Graph::new(kind, n, edges)
}

fn parse_endpoint(lx: &mut Lexer<'_>, kind: GraphKind, n: usize) -> Result<Vertex, GraphError> {
    let special = match lx.peek() {
        Some('o') => Some(OUT),
        Some('i') => Some(IN),
        Some('x') => Some(EXT),
        _ => None,
    };
    if let Some(v) = special {
        if !kind.allows_special(v) {
            return lx.err(format!(
                "vertex '{}' not allowed in kind {kind}",
                vertex_name(v)
            ));
        }
        lx.pos += 1;
        return Ok(v);
    }
    let label = lx.number()?;
    if label == 0 || label > n {
        return Err(GraphError::LabelOutOfRange { label, count: n });
    }
    Ok((label - 1) as Vertex)
}

impl std::str::FromStr for Graph {
    type Err = GraphError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_basic_kinds() {
        let g = parse_graph("u 2 : 1-2").unwrap();
        assert_eq!(g.kind(), GraphKind::U);
        assert_eq!(g.n_internal(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);

        let g = parse_graph("m 2 : o>1, o>2, 1>2, 1>i, 2>i").unwrap();
        assert_eq!(g.edges(), &[(OUT, 0), (OUT, 1), (0, 1), (0, IN), (1, IN)]);

        let g = parse_graph("b 1 : x>1").unwrap();
        assert_eq!(g.kind(), GraphKind::X);
        assert_eq!(g.edges(), &[(EXT, 0)]);

        let g = parse_graph("  m 0  ").unwrap();
        assert_eq!(g.n_edges(), 0);
        assert_eq!(parse_graph("b 0 : x>x").unwrap().edges(), &[(EXT, EXT)]);
    }

    #[test]
    fn keeps_the_written_edge_order() {
        let g = parse_graph("u 3 : 2-3,1-2 , 1-3").unwrap();
        assert_eq!(g.edges(), &[(1, 2), (0, 1), (0, 2)]);
        assert_eq!(g.to_string(), "u 3 : 2-3, 1-2, 1-3");
    }

    #[test]
    fn rejects_malformed_text() {
        assert!(matches!(
            parse_graph("q 2"),
            Err(GraphError::Syntax { pos: 0, .. })
        ));
        assert!(matches!(
            parse_graph("u 2 : 1-3"),
            Err(GraphError::LabelOutOfRange { label: 3, count: 2 })
        ));
        assert!(matches!(
            parse_graph("u 2 : 1>2"),
            Err(GraphError::Syntax { .. })
        ));
        assert!(parse_graph("u 2 : o-1").is_err());
        assert!(parse_graph("d 2 : 1>2,").is_err());
    }

    #[test]
    fn enforces_kind_invariants() {
        assert!(matches!(
            parse_graph("m 1 : 1>o"),
            Err(GraphError::InOutDirection { .. })
        ));
        assert!(matches!(
            parse_graph("m 1 : i>1"),
            Err(GraphError::InOutDirection { .. })
        ));
        assert!(matches!(
            parse_graph("u 1 : 1-1"),
            Err(GraphError::TadpolePolicy { .. })
        ));
        assert!(parse_graph("u@ 1 : 1-1").is_ok());
        assert!(matches!(
            parse_graph("b 1 : 1>1"),
            Err(GraphError::TadpolePolicy { .. })
        ));
    }

    #[test]
    fn components_see_special_vertices() {
        let g = parse_graph("b 3 : x>1, 2>3").unwrap();
        let comps = g.internal_components();
        assert_eq!(comps, vec![(vec![0], true), (vec![1, 2], false)]);
    }
}
