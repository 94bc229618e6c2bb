//! Bases, differential matrices and cohomology of the graph complexes in finite
//! boxes of bidegrees.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::complexes::{
    differential, egc_differential, vertices_and_edges, Bidegree, ComplexId, ComplexKind, EgcElement,
};
use crate::complexes::divergence;
use crate::enumerate::{enumerate_canonical, Constraints};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphKind};
use crate::linalg::{cohomology_representatives, rank, CoeffMode, RankMethod, SparseMatrix};
use crate::vector::{GraphVector, Rational};

const CACHE_FORMAT: &str = "gce-basis-v1";

/// Run-time settings shared by the library entry points and the command line.
#[derive(Clone, Debug)]
pub struct Config {
    pub cache_dir: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub coeff_mode: CoeffMode,
    pub max_vertices: usize,
    pub max_edges: usize,
    /// Largest basis slice that will be built.
    pub max_terms: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cache_dir: None,
            jobs: None,
            coeff_mode: CoeffMode::default(),
            max_vertices: 10,
            max_edges: 16,
            max_terms: 2_000_000,
        }
    }
}

impl Config {
    /// Runs `f` on a pool of `jobs` workers, or on the global pool.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.jobs {
            None => Ok(f()),
            Some(j) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(j.max(1))
                    .build()
                    .map_err(|e| Error::ResourceLimit(e.to_string()))?;
                Ok(pool.install(f))
            }
        }
    }
}

/// The canonical graphs spanning one bidegree of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisSlice {
    pub complex: ComplexId,
    pub bidegree: Bidegree,
    pub graphs: Arc<Vec<Graph>>,
}

impl BasisSlice {
    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }
}

type MemoKey = (GraphKind, Constraints, usize, usize);

fn memo() -> &'static Mutex<HashMap<MemoKey, Arc<Vec<Graph>>>> {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, Arc<Vec<Graph>>>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Forgets the bases kept in memory by earlier computations.
pub fn clear_memo() {
    memo().lock().expect("memo lock").clear();
}

fn cache_file(dir: &Path, key: &MemoKey) -> (PathBuf, String) {
    let manifest = format!(
        "{CACHE_FORMAT} kind={} flags={:?} n={} k={}",
        key.0, key.1, key.2, key.3
    );
    let digest = Sha256::digest(manifest.as_bytes());
    let name: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    (dir.join(format!("{name}.basis")), manifest)
}

fn read_cached(path: &Path, manifest: &str) -> Option<Vec<Graph>> {
    let text = fs::read_to_string(path).ok()?;
    let mut lines = text.lines();
    if lines.next()? != format!("# {manifest}") {
        return None;
    }
    let terms = crate::vector::parse_terms(lines.collect::<Vec<_>>().join("\n").as_str()).ok()?;
    Some(terms.into_iter().map(|(_, g)| g).collect())
}

fn write_cached(dir: &Path, path: &Path, manifest: &str, graphs: &[Graph]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut text = format!("# {manifest}\n");
    for g in graphs {
        let _ = writeln!(text, "1 | {g}");
    }
    let tmp = tempfile_in(dir)?;
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn tempfile_in(dir: &Path) -> Result<PathBuf> {
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let id = COUNTER.fetch_add(1, Ordering::Relaxed);
    Ok(dir.join(format!(".tmp-{}-{id}", std::process::id())))
}

/// Canonical graphs of `kind` with `n` vertices and `k` edges meeting `flags`,
/// memoized in process and optionally on disk.
fn graphs_of(kind: GraphKind, flags: Constraints, n: usize, k: usize, cfg: &Config) -> Result<Arc<Vec<Graph>>> {
    if n > cfg.max_vertices || k > cfg.max_edges {
        return Err(Error::ResourceLimit(format!(
            "{n} vertices and {k} edges exceed the caps ({} vertices, {} edges)",
            cfg.max_vertices, cfg.max_edges
        )));
    }
    let key = (kind, flags, n, k);
    if let Some(g) = memo().lock().expect("memo lock").get(&key) {
        return Ok(g.clone());
    }
    let cached = cfg.cache_dir.as_ref().and_then(|dir| {
        let (path, manifest) = cache_file(dir, &key);
        read_cached(&path, &manifest)
    });
    let graphs = match cached {
        Some(g) => g,
        None => {
            let g = enumerate_canonical(kind, n, k, &flags);
            if let Some(dir) = &cfg.cache_dir {
                let (path, manifest) = cache_file(dir, &key);
                write_cached(dir, &path, &manifest, &g)?;
            }
            g
        }
    };
    if graphs.len() > cfg.max_terms {
        return Err(Error::ResourceLimit(format!(
            "basis of {} graphs exceeds the cap of {}",
            graphs.len(),
            cfg.max_terms
        )));
    }
    let graphs = Arc::new(graphs);
    memo().lock().expect("memo lock").insert(key, graphs.clone());
    Ok(graphs)
}

/// The parts of a complex: graph kind and constraints of each block.
fn parts(c: &ComplexId) -> Vec<(GraphKind, Constraints)> {
    match c.kind {
        ComplexKind::Fegc => vec![(GraphKind::U, c.flags), (GraphKind::M, c.m_flags())],
        _ => vec![(c.graph_kind(), c.flags)],
    }
}

/// All basis graphs of `complex` in bidegree `b`; for the extended complex the
/// undirected graphs come first.
pub fn basis(complex: &ComplexId, b: Bidegree, cfg: &Config) -> Result<BasisSlice> {
    let mut graphs = Vec::new();
    for (kind, flags) in parts(complex) {
        if let Some((n, k)) = vertices_and_edges(kind, b) {
            // the empty undirected graph is not part of any complex
            if n == 0 && matches!(kind.tag, crate::graph::KindTag::U | crate::graph::KindTag::D) {
                continue;
            }
            graphs.extend(graphs_of(kind, flags, n, k, cfg)?.iter().cloned());
        }
    }
    Ok(BasisSlice {
        complex: *complex,
        bidegree: b,
        graphs: Arc::new(graphs),
    })
}

/// The differential applied to one basis graph, as a list of (graph, coefficient).
fn delta_of(complex: &ComplexId, g: &Graph) -> Result<Vec<(Graph, Rational)>> {
    let v = GraphVector::graph(g)?;
    let image: Vec<(Graph, Rational)> = match complex.kind {
        ComplexKind::Fegc => {
            let x = if g.kind() == GraphKind::U {
                EgcElement::from_gc(v)?
            } else {
                EgcElement::from_m(v)?
            };
            let d = egc_differential(&x)?;
            d.gc.terms()
                .chain(d.m.terms())
                .map(|(g, c)| (g.clone(), c.clone()))
                .collect()
        }
        _ => differential(complex, &v)?
            .terms()
            .map(|(g, c)| (g.clone(), c.clone()))
            .collect(),
    };
    if let Some((h, _)) = image.iter().find(|(h, _)| !complex.admits(h)) {
        return Err(Error::NotInComplex {
            complex: complex.to_string(),
            reason: format!("the differential of {g} contains {h}"),
        });
    }
    Ok(image)
}

/// Matrix of the differential from `source` to the next degree. Rows follow
/// `rows` when given; otherwise they are numbered in order of appearance.
pub fn delta_matrix_between(
    complex: &ComplexId,
    source: &BasisSlice,
    rows: Option<&BasisSlice>,
) -> Result<(SparseMatrix, Vec<Graph>)> {
    let images: Vec<Vec<(Graph, Rational)>> = source
        .graphs
        .par_iter()
        .map(|g| delta_of(complex, g))
        .collect::<Result<_>>()?;
    let mut index: HashMap<Graph, usize> = HashMap::new();
    let mut labels: Vec<Graph> = Vec::new();
    if let Some(r) = rows {
        for g in r.graphs.iter() {
            index.insert(g.clone(), labels.len());
            labels.push(g.clone());
        }
    }
    let fixed = rows.is_some();
    let mut cols = Vec::with_capacity(images.len());
    for image in images {
        let mut col = Vec::with_capacity(image.len());
        for (g, c) in image {
            let i = match index.get(&g) {
                Some(&i) => i,
                None if fixed => {
                    return Err(Error::NotInComplex {
                        complex: complex.to_string(),
                        reason: format!("{g} is missing from the target basis"),
                    })
                }
                None => {
                    index.insert(g.clone(), labels.len());
                    labels.push(g);
                    labels.len() - 1
                }
            };
            col.push((i, c));
        }
        col.sort_by_key(|(i, _)| *i);
        cols.push(col);
    }
    Ok((SparseMatrix::from_columns(labels.len(), cols), labels))
}

/// Matrix of the differential from bidegree `b` to `b + (0, 1)` in the enumerated
/// bases of both.
pub fn delta_matrix(complex: &ComplexId, b: Bidegree, cfg: &Config) -> Result<SparseMatrix> {
    let source = basis(complex, b, cfg)?;
    let target = basis(complex, Bidegree { w: b.w, d: b.d + 1 }, cfg)?;
    Ok(delta_matrix_between(complex, &source, Some(&target))?.0)
}

/// Rank of the differential leaving bidegree `b`, without enumerating the target.
pub fn delta_rank(complex: &ComplexId, b: Bidegree, cfg: &Config) -> Result<(usize, usize, RankMethod)> {
    let source = basis(complex, b, cfg)?;
    let (m, _) = delta_matrix_between(complex, &source, None)?;
    let (r, method) = rank(&m, &cfg.coeff_mode);
    Ok((source.len(), r, method))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub w: i64,
    pub d: i64,
    pub dim: Option<usize>,
    pub rank_in: Option<usize>,
    pub rank_out: Option<usize>,
    pub dim_h: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub representatives: Vec<String>,
}

/// Dimensions of cohomology over a box of bidegrees. The rank methods are not
/// serialized.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyReport {
    pub complex: String,
    pub w: (i64, i64),
    pub d: (i64, i64),
    pub cells: Vec<CellReport>,
    #[serde(skip)]
    pub methods: Vec<RankMethod>,
}

impl CohomologyReport {
    pub fn cell(&self, w: i64, d: i64) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.w == w && c.d == d)
    }

    pub fn dim_h(&self, w: i64, d: i64) -> Option<usize> {
        self.cell(w, d).and_then(|c| c.dim_h)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "cohomology of {} for w in {}..{}, d in {}..{}", self.complex, self.w.0, self.w.1, self.d.0, self.d.1);
        let _ = writeln!(s, "{:>4} {:>4} {:>8} {:>8} {:>8} {:>6}", "w", "d", "dim", "rk_in", "rk_out", "H");
        let show = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
        for c in &self.cells {
            let _ = write!(
                s,
                "{:>4} {:>4} {:>8} {:>8} {:>8} {:>6}",
                c.w,
                c.d,
                show(c.dim),
                show(c.rank_in),
                show(c.rank_out),
                show(c.dim_h)
            );
            if let Some(reason) = &c.skipped {
                let _ = write!(s, "  skipped: {reason}");
            }
            s.push('\n');
            for r in &c.representatives {
                for line in r.lines() {
                    let _ = writeln!(s, "    {line}");
                }
                s.push_str("    --\n");
            }
        }
        s
    }
}

/// Cohomology of `complex` over the box `w_range × d_range` (inclusive). Cells
/// listed in `representatives` also get cocycle representatives.
pub fn cohomology(
    complex: &ComplexId,
    w_range: (i64, i64),
    d_range: (i64, i64),
    representatives: &[Bidegree],
    cfg: &Config,
) -> Result<CohomologyReport> {
    let mut cells = Vec::new();
    let mut methods = Vec::new();
    for w in w_range.0..=w_range.1 {
        let ranks: Vec<(i64, Result<(usize, usize, RankMethod)>)> = (d_range.0 - 1..=d_range.1)
            .into_par_iter()
            .map(|d| (d, delta_rank(complex, Bidegree { w, d }, cfg)))
            .collect();
        let get = |d: i64| ranks.iter().find(|(x, _)| *x == d).map(|(_, r)| r);
        for d in d_range.0..=d_range.1 {
            let here = get(d).expect("in range");
            let below = get(d - 1).expect("in range");
            let mut cell = CellReport {
                w,
                d,
                dim: None,
                rank_in: None,
                rank_out: None,
                dim_h: None,
                skipped: None,
                representatives: Vec::new(),
            };
            match (here, below) {
                (Ok((dim, r_out, m1)), Ok((_, r_in, m2))) => {
                    cell.dim = Some(*dim);
                    cell.rank_out = Some(*r_out);
                    cell.rank_in = Some(*r_in);
                    cell.dim_h = Some(dim - r_out - r_in);
                    methods.push(m1.clone());
                    methods.push(m2.clone());
                    if representatives.contains(&Bidegree { w, d }) {
                        cell.representatives = representatives_at(complex, Bidegree { w, d }, cfg)?
                            .iter()
                            .map(|r| r.to_string())
                            .collect();
                    }
                }
                (Err(Error::ResourceLimit(msg)), _) | (_, Err(Error::ResourceLimit(msg))) => {
                    cell.skipped = Some(msg.clone());
                }
                (Err(e), _) | (_, Err(e)) => {
                    return Err(Error::NotInComplex {
                        complex: complex.to_string(),
                        reason: e.to_string(),
                    })
                }
            }
            cells.push(cell);
        }
    }
    Ok(CohomologyReport {
        complex: complex.to_string(),
        w: w_range,
        d: d_range,
        cells,
        methods,
    })
}

/// A representative vector in either single-kind or paired form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representative {
    Vector(GraphVector),
    Pair(EgcElement),
}

impl std::fmt::Display for Representative {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Representative::Vector(v) => write!(f, "{v}"),
            Representative::Pair(p) => write!(f, "{}", p.to_vector_text()),
        }
    }
}

/// Cocycles spanning the cohomology at `b`, exactly.
pub fn representatives_at(complex: &ComplexId, b: Bidegree, cfg: &Config) -> Result<Vec<Representative>> {
    let here = basis(complex, b, cfg)?;
    let below = basis(complex, Bidegree { w: b.w, d: b.d - 1 }, cfg)?;
    let (incoming, _) = delta_matrix_between(complex, &below, Some(&here))?;
    let (outgoing, _) = delta_matrix_between(complex, &here, None)?;
    let reps = cohomology_representatives(&incoming, &outgoing);
    reps.into_iter()
        .map(|r| to_representative(complex, &here.graphs, &r))
        .collect()
}

fn to_representative(complex: &ComplexId, graphs: &[Graph], v: &[(usize, Rational)]) -> Result<Representative> {
    if complex.kind == ComplexKind::Fegc {
        let mut x = EgcElement::zero();
        for (i, c) in v {
            let g = &graphs[*i];
            if g.kind() == GraphKind::U {
                x.gc.add_term(c.clone(), g)?;
            } else {
                x.m.add_term(c.clone(), g)?;
            }
        }
        Ok(Representative::Pair(x))
    } else {
        let mut x = GraphVector::zero(complex.graph_kind());
        for (i, c) in v {
            x.add_term(c.clone(), &graphs[*i])?;
        }
        Ok(Representative::Vector(x))
    }
}

/// Cohomology of the cone of `∇` on the undirected complex: the cell `(w, d)`
/// is `fGC(w, d) ⊕ fGC(w + 1, d − 2)` with differential `(a, b) ↦ (δa, ∇a − δb)`.
/// Returns `(dim, rank_out)` for the cell.
pub fn cone_rank(w: i64, d: i64, cfg: &Config) -> Result<(usize, usize)> {
    let c = ComplexId::FGC;
    let a_basis = basis(&c, Bidegree { w, d }, cfg)?;
    let b_basis = basis(&c, Bidegree { w: w + 1, d: d - 2 }, cfg)?;
    let mut index: HashMap<(bool, Graph), usize> = HashMap::new();
    let mut cols: Vec<Vec<(usize, Rational)>> = Vec::new();
    let row = |key: (bool, Graph), index: &mut HashMap<(bool, Graph), usize>| {
        let next = index.len();
        *index.entry(key).or_insert(next)
    };
    let images_a: Vec<(GraphVector, GraphVector)> = a_basis
        .graphs
        .par_iter()
        .map(|g| {
            let v = GraphVector::graph(g)?;
            Ok((differential(&c, &v)?, divergence(&v)?))
        })
        .collect::<Result<_>>()?;
    for (da, diva) in images_a {
        let mut col: Vec<(usize, Rational)> = Vec::new();
        for (g, x) in da.terms() {
            col.push((row((false, g.clone()), &mut index), x.clone()));
        }
        for (g, x) in diva.terms() {
            col.push((row((true, g.clone()), &mut index), x.clone()));
        }
        cols.push(col);
    }
    let images_b: Vec<GraphVector> = b_basis
        .graphs
        .par_iter()
        .map(|g| differential(&c, &GraphVector::graph(g)?))
        .collect::<Result<_>>()?;
    for db in images_b {
        let col = db
            .terms()
            .map(|(g, x)| (row((true, g.clone()), &mut index), -x.clone()))
            .collect();
        cols.push(col);
    }
    let m = SparseMatrix::from_columns(index.len(), cols);
    Ok((a_basis.len() + b_basis.len(), rank(&m, &cfg.coeff_mode).0))
}

/// `dim H` of the cone of `∇` at `(w, d)`.
pub fn cone_cohomology(w: i64, d: i64, cfg: &Config) -> Result<usize> {
    let (dim, r_out) = cone_rank(w, d, cfg)?;
    let (_, r_in) = cone_rank(w, d - 1, cfg)?;
    Ok(dim - r_out - r_in)
}

/// `dim H(fGC)` at one cell.
pub fn fgc_cohomology(w: i64, d: i64, cfg: &Config) -> Result<usize> {
    let c = ComplexId::FGC;
    let (dim, r_out, _) = delta_rank(&c, Bidegree { w, d }, cfg)?;
    let (_, r_in, _) = delta_rank(&c, Bidegree { w, d: d - 1 }, cfg)?;
    Ok(dim - r_out - r_in)
}

/// The dimension of `H(fEGC)` at `(w, d)` predicted from the undirected complex
/// and the cone of `∇`: the classes `B` and `𝟙`, the products of `B` with
/// `H(fGC)`, and the cone.
pub fn predicted_egc_dimension(w: i64, d: i64, cfg: &Config) -> Result<usize> {
    let b = usize::from(w == 1 && d == -1);
    let one = usize::from(w == 0 && d == 0);
    Ok(b + one + fgc_cohomology(w, d - 1, cfg)? + cone_cohomology(w, d, cfg)?)
}
