use gce_core::complexes::{bidegree, differential, egc_differential, Bidegree, ComplexId, EgcElement};
use gce_core::gtmaps::theta4;
use gce_core::homology::{
    basis, clear_memo, cohomology, delta_matrix, representatives_at, Config, Representative,
};
use gce_core::linalg::{rank, CoeffMode, SparseMatrix, DEFAULT_PRIMES};
use gce_core::{int, GraphKind, GraphVector, Rational};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;

/// Rank by plain dense elimination over the rationals.
fn dense_rank(m: &SparseMatrix) -> usize {
    let mut a = vec![vec![Rational::zero(); m.ncols]; m.nrows];
    for (j, col) in m.cols.iter().enumerate() {
        for (i, x) in col {
            a[*i][j] = x.clone();
        }
    }
    let mut r = 0;
    for c in 0..m.ncols {
        let Some(p) = (r..m.nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in 0..m.nrows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..m.ncols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

fn exact() -> Config {
    Config {
        coeff_mode: CoeffMode::Exact,
        ..Config::default()
    }
}

#[test]
fn basis_examples() {
    let cfg = Config::default();
    let gc = basis(&ComplexId::GC, Bidegree { w: 3, d: 0 }, &cfg).unwrap();
    assert_eq!(gc.len(), 1);
    assert_eq!(GraphVector::graph(&gc.graphs[0]).unwrap(), theta4());
    assert!(basis(&ComplexId::GC, Bidegree { w: 3, d: -1 }, &cfg).unwrap().is_empty());
    let pt = basis(&ComplexId::FGC, Bidegree { w: 0, d: 0 }, &cfg).unwrap();
    assert_eq!(pt.len(), 1);
    assert_eq!(pt.graphs[0].n_internal(), 1);
    for b in [Bidegree { w: 2, d: 1 }, Bidegree { w: 1, d: 0 }] {
        for g in basis(&ComplexId::FEGC, b, &cfg).unwrap().graphs.iter() {
            assert_eq!(bidegree(g), b);
        }
    }
}

#[test]
fn matrix_examples() {
    let cfg = Config::default();
    assert!(delta_matrix(&ComplexId::GC, Bidegree { w: 3, d: 0 }, &cfg).unwrap().is_zero());
    let m = delta_matrix(&ComplexId::FGC, Bidegree { w: 0, d: 0 }, &cfg).unwrap();
    assert_eq!((m.nrows, m.ncols), (1, 1));
    // δpt = μ•pt − pt•μ = 2μ − μ
    assert_eq!(m.get(0, 0), int(1));
    let empty = delta_matrix(&ComplexId::GC, Bidegree { w: 3, d: -1 }, &cfg).unwrap();
    assert_eq!(empty.ncols, 0);
}

#[test]
fn columns_expand_the_differential() {
    let cfg = Config::default();
    for (c, b) in [
        (ComplexId::FGC1, Bidegree { w: 1, d: 1 }),
        (ComplexId::FBVG1, Bidegree { w: 1, d: 0 }),
        (ComplexId::FGC, Bidegree { w: 1, d: 2 }),
    ] {
        let src = basis(&c, b, &cfg).unwrap();
        let dst = basis(&c, Bidegree { w: b.w, d: b.d + 1 }, &cfg).unwrap();
        let m = delta_matrix(&c, b, &cfg).unwrap();
        for (j, g) in src.graphs.iter().enumerate() {
            let image = differential(&c, &GraphVector::graph(g).unwrap()).unwrap();
            let mut from_matrix = GraphVector::zero(image.kind());
            for (i, x) in &m.cols[j] {
                from_matrix.add_term(x.clone(), &dst.graphs[*i]).unwrap();
            }
            assert_eq!(from_matrix, image, "{c} {g}");
        }
    }
}

#[test]
fn consecutive_matrices_compose_to_zero() {
    let cfg = Config::default();
    for (c, w, ds) in [
        (ComplexId::FGC, 2, -1..3),
        (ComplexId::FGC1, 1, -2..3),
        (ComplexId::BVG1, 2, -3..2),
        (ComplexId::FEGC, 1, -2..3),
        (ComplexId::DFGC, 2, -1..2),
    ] {
        for d in ds {
            let a = delta_matrix(&c, Bidegree { w, d }, &cfg).unwrap();
            let b = delta_matrix(&c, Bidegree { w, d: d + 1 }, &cfg).unwrap();
            assert!(b.mul(&a).is_zero(), "{c} w={w} d={d}");
        }
    }
}

#[test]
fn ranks_agree_with_dense_elimination_and_across_modes() {
    let cfg = Config::default();
    let modes = [
        CoeffMode::Exact,
        CoeffMode::Modular(vec![DEFAULT_PRIMES[0]]),
        CoeffMode::Modular(vec![DEFAULT_PRIMES[1]]),
        CoeffMode::Modular(DEFAULT_PRIMES.to_vec()),
    ];
    for (c, w, d) in [
        (ComplexId::FGC1, 1, 0),
        (ComplexId::FGC1, 1, 1),
        (ComplexId::FGC1, 2, 0),
        (ComplexId::FEGC, 1, 1),
        (ComplexId::FBVG1, 2, -1),
        (ComplexId::FGC, 2, 1),
    ] {
        let m = delta_matrix(&c, Bidegree { w, d }, &cfg).unwrap();
        let expected = dense_rank(&m);
        for mode in &modes {
            assert_eq!(rank(&m, mode).0, expected, "{c} w={w} d={d} {mode:?}");
        }
    }
}

#[test]
fn dimensions_do_not_depend_on_basis_order() {
    let cfg = Config::default();
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for (c, w, d) in [(ComplexId::FGC1, 2, 0), (ComplexId::FEGC, 1, 1), (ComplexId::FGC, 3, 1)] {
        let m = delta_matrix(&c, Bidegree { w, d }, &cfg).unwrap();
        let mut rows: Vec<usize> = (0..m.nrows).collect();
        let mut cols: Vec<usize> = (0..m.ncols).collect();
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        let p = m.permuted(&rows, &cols);
        assert_eq!(rank(&p, &CoeffMode::Exact).0, rank(&m, &CoeffMode::Exact).0);
        assert_eq!(dense_rank(&p), dense_rank(&m));
    }
}

#[test]
fn small_boxes() {
    let cfg = Config::default();
    let gc = cohomology(&ComplexId::GC, (3, 3), (-2, 2), &[], &cfg).unwrap();
    for d in -2..=2 {
        assert_eq!(gc.dim_h(3, d), Some(usize::from(d == 0)));
    }
    let bv = cohomology(&ComplexId::BVG1, (0, 1), (-3, 2), &[], &cfg).unwrap();
    let total = |d: i64| (0..=1).map(|w| bv.dim_h(w, d).unwrap()).sum::<usize>();
    for d in -3..=2 {
        assert_eq!(total(d), usize::from(d == 0 || d == -1), "d={d}");
    }
    let f = cohomology(&ComplexId::FGC, (0, 2), (-3, -1), &[], &cfg).unwrap();
    assert!(f.cells.iter().all(|c| c.dim_h == Some(0)));
}

/// The representatives are cocycles and stay independent modulo the image.
#[test]
fn representatives_are_independent_cocycles() {
    let cfg = exact();
    for (c, b) in [
        (ComplexId::FGC, Bidegree { w: 1, d: 3 }),
        (ComplexId::GC, Bidegree { w: 3, d: 0 }),
        (ComplexId::FGC1, Bidegree { w: 0, d: 0 }),
        (ComplexId::FEGC, Bidegree { w: 1, d: -1 }),
        (ComplexId::FEGC, Bidegree { w: 3, d: 1 }),
    ] {
        let reps = representatives_at(&c, b, &cfg).unwrap();
        let report = cohomology(&c, (b.w, b.w), (b.d, b.d), &[], &cfg).unwrap();
        assert_eq!(Some(reps.len()), report.dim_h(b.w, b.d), "{c} {b:?}");
        let here = basis(&c, b, &cfg).unwrap();
        let index = |g: &gce_core::Graph| here.graphs.iter().position(|h| h == g).unwrap();
        let mut cols: Vec<Vec<(usize, Rational)>> = Vec::new();
        for r in &reps {
            let terms: Vec<(gce_core::Graph, Rational)> = match r {
                Representative::Vector(v) => {
                    assert!(differential(&c, v).unwrap().is_zero());
                    v.terms().map(|(g, x)| (g.clone(), x.clone())).collect()
                }
                Representative::Pair(p) => {
                    assert!(egc_differential(p).unwrap().is_zero());
                    p.gc.terms().chain(p.m.terms()).map(|(g, x)| (g.clone(), x.clone())).collect()
                }
            };
            let mut col: Vec<(usize, Rational)> = terms.iter().map(|(g, x)| (index(g), x.clone())).collect();
            col.sort_by_key(|t| t.0);
            cols.push(col);
        }
        let incoming = delta_matrix(&c, Bidegree { w: b.w, d: b.d - 1 }, &cfg).unwrap();
        let image_rank = dense_rank(&incoming);
        let mut all = incoming.cols.clone();
        all.extend(cols);
        let combined = SparseMatrix::from_columns(here.len(), all);
        assert_eq!(dense_rank(&combined), image_rank + reps.len(), "{c} {b:?}");
    }
}

#[test]
fn extended_representatives_have_both_parts_typed() {
    let reps = representatives_at(&ComplexId::FEGC, Bidegree { w: 1, d: -1 }, &exact()).unwrap();
    let [Representative::Pair(p)] = reps.as_slice() else { panic!("one class expected") };
    assert!(p.gc.is_zero());
    assert_eq!(p.m.kind(), GraphKind::M);
    let b = EgcElement::from_m(gce_core::gtmaps::b_element()).unwrap();
    let (g, x) = p.m.terms().next().unwrap();
    assert_eq!(p.scale(&(Rational::from_integer(1.into()) / x)), b, "{g}");
}

#[test]
fn disk_cache_is_reused_and_safe_to_delete() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = Config {
        cache_dir: Some(dir.path().to_path_buf()),
        ..Config::default()
    };
    clear_memo();
    let first = cohomology(&ComplexId::FGC1, (1, 1), (-1, 2), &[], &cfg).unwrap();
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(!files.is_empty());
    for f in &files {
        let text = std::fs::read_to_string(f).unwrap();
        assert!(text.starts_with("# gce-basis-v1 "));
        assert!(!f.file_name().unwrap().to_string_lossy().starts_with(".tmp"));
    }
    clear_memo();
    let second = cohomology(&ComplexId::FGC1, (1, 1), (-1, 2), &[], &cfg).unwrap();
    assert_eq!(first.to_json(), second.to_json());
    for f in &files {
        std::fs::remove_file(f).unwrap();
    }
    clear_memo();
    let third = cohomology(&ComplexId::FGC1, (1, 1), (-1, 2), &[], &cfg).unwrap();
    assert_eq!(first.to_json(), third.to_json());
}

#[test]
fn corrupt_cache_files_are_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = Config {
        cache_dir: Some(dir.path().to_path_buf()),
        ..Config::default()
    };
    clear_memo();
    let first = basis(&ComplexId::FGC, Bidegree { w: 1, d: 1 }, &cfg).unwrap();
    for e in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(e.unwrap().path(), "garbage").unwrap();
    }
    clear_memo();
    let second = basis(&ComplexId::FGC, Bidegree { w: 1, d: 1 }, &cfg).unwrap();
    assert_eq!(first, second);
}

#[test]
fn reports_are_identical_across_modes_and_workers() {
    let mut texts = Vec::new();
    for (jobs, mode) in [
        (Some(1), CoeffMode::Exact),
        (Some(3), CoeffMode::Modular(DEFAULT_PRIMES.to_vec())),
        (None, CoeffMode::Modular(vec![1_000_000_007])),
    ] {
        clear_memo();
        let cfg = Config {
            jobs,
            coeff_mode: mode,
            ..Config::default()
        };
        let r = cfg
            .install(|| cohomology(&ComplexId::FEGC, (0, 1), (-1, 2), &[], &cfg))
            .unwrap()
            .unwrap();
        texts.push((r.to_text(), r.to_json()));
    }
    assert!(texts.windows(2).all(|w| w[0] == w[1]));
}
