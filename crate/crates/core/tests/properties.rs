use gce_core::complexes::bracket;
use gce_core::gtmaps::{f_map, theta4};
use gce_core::operads::{embed_directed, mcompose, pre_lie, xcompose};
use gce_core::{int, Graph, GraphKind, GraphVector, Rational};
use proptest::prelude::*;

fn undirected_graph(max_n: usize, max_k: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        let pairs: Vec<(u8, u8)> = (0..n as u8).flat_map(|a| (a + 1..n as u8).map(move |b| (a, b))).collect();
        let k_max = pairs.len().min(max_k);
        (Just(n), proptest::sample::subsequence(pairs, 0..=k_max).prop_shuffle())
    })
    .prop_map(|(n, edges)| Graph::new(GraphKind::U, n, edges).unwrap())
}

fn inout_graph(max_n: usize, max_k: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(move |n| {
        let mut slots: Vec<(u8, u8)> = Vec::new();
        for a in 0..n as u8 {
            for b in 0..n as u8 {
                if a != b {
                    slots.push((a, b));
                }
            }
            slots.push((253, a));
            slots.push((a, 254));
        }
        slots.push((253, 254));
        let k_max = slots.len().min(max_k);
        (Just(n), proptest::sample::subsequence(slots, 0..=k_max).prop_shuffle())
    })
    .prop_map(|(n, edges)| Graph::new(GraphKind::M, n, edges).unwrap())
}

fn bv_graph(max_n: usize, max_k: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(move |n| {
        let mut slots: Vec<(u8, u8)> = vec![(255, 255)];
        for a in 0..n as u8 {
            for b in 0..n as u8 {
                if a != b {
                    slots.push((a, b));
                }
            }
            slots.push((255, a));
            slots.push((a, 255));
        }
        let k_max = slots.len().min(max_k);
        (Just(n), proptest::sample::subsequence(slots, 0..=k_max).prop_shuffle())
    })
    .prop_map(|(n, edges)| Graph::new(GraphKind::X, n, edges).unwrap())
}

fn coeff() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(p, q)| gce_core::rat(p, q))
}

fn vector(max_n: usize, max_k: usize) -> impl Strategy<Value = GraphVector> {
    proptest::collection::vec((coeff(), undirected_graph(max_n, max_k)), 0..4).prop_map(|terms| {
        let mut v = GraphVector::zero(GraphKind::U);
        for (c, g) in terms {
            v.add_term(c, &g).unwrap();
        }
        v
    })
}

fn single(g: &Graph) -> GraphVector {
    GraphVector::graph(g).unwrap()
}

fn sign_of(perm: &[usize]) -> i64 {
    let mut p = perm.to_vec();
    let mut s = 1;
    for i in 0..p.len() {
        while p[i] != i {
            let j = p[i];
            p.swap(i, j);
            s = -s;
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relabeling_changes_only_the_sign(g in undirected_graph(6, 9), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let n = g.n_internal();
        let mut vperm: Vec<u8> = (0..n as u8).collect();
        vperm.shuffle(&mut rng);
        let mut eperm: Vec<usize> = (0..g.n_edges()).collect();
        eperm.shuffle(&mut rng);
        // new edge i is old edge eperm[i]
        let edges: Vec<(u8, u8)> = eperm
            .iter()
            .map(|&i| {
                let (a, b) = g.edges()[i];
                (vperm[a as usize], vperm[b as usize])
            })
            .collect();
        let h = Graph::new(GraphKind::U, n, edges).unwrap();
        let expected = single(&g).scale(&int(sign_of(&eperm)));
        prop_assert_eq!(single(&h), expected);
    }

    #[test]
    fn vector_space_axioms(a in vector(4, 4), b in vector(4, 4), c in vector(4, 4), x in coeff(), y in coeff()) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(a.add(&b).unwrap().scale(&x), a.scale(&x).add(&b.scale(&x)).unwrap());
        prop_assert_eq!(a.scale(&(&x + &y)), a.scale(&x).add(&a.scale(&y)).unwrap());
        prop_assert_eq!(a.scale(&x).scale(&y), a.scale(&(&x * &y)));
    }

    #[test]
    fn bracket_is_graded_antisymmetric(a in undirected_graph(3, 3), b in undirected_graph(3, 3)) {
        let (x, y) = (single(&a), single(&b));
        let s = if a.is_odd() && b.is_odd() { 1 } else { -1 };
        prop_assert_eq!(bracket(&x, &y).unwrap(), bracket(&y, &x).unwrap().scale(&int(s)));
    }

    #[test]
    fn right_pre_lie_identity(a in undirected_graph(3, 3), b in undirected_graph(2, 1), c in undirected_graph(2, 1)) {
        // (a•b)•c − a•(b•c) is graded symmetric in b and c
        let (x, y, z) = (single(&a), single(&b), single(&c));
        let assoc = |y: &GraphVector, z: &GraphVector| {
            pre_lie(&pre_lie(&x, y).unwrap(), z).unwrap().sub(&pre_lie(&x, &pre_lie(y, z).unwrap()).unwrap()).unwrap()
        };
        let s = if b.is_odd() && c.is_odd() { -1 } else { 1 };
        prop_assert_eq!(assoc(&y, &z), assoc(&z, &y).scale(&int(s)));
    }

    #[test]
    fn inout_composition_is_associative(a in inout_graph(1, 2), b in inout_graph(1, 2), c in inout_graph(1, 2)) {
        let (x, y, z) = (single(&a), single(&b), single(&c));
        let l = mcompose(&mcompose(&x, &y).unwrap(), &z).unwrap();
        let r = mcompose(&x, &mcompose(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn external_composition_is_associative(a in bv_graph(1, 2), b in bv_graph(1, 2), c in bv_graph(1, 2)) {
        let (x, y, z) = (single(&a), single(&b), single(&c));
        let l = xcompose(&xcompose(&x, &y).unwrap(), &z).unwrap();
        let r = xcompose(&x, &xcompose(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn f_respects_both_structures(a in inout_graph(2, 3), b in inout_graph(2, 2)) {
        let (x, y) = (single(&a), single(&b));
        let l = f_map(&mcompose(&x, &y).unwrap()).unwrap();
        let r = xcompose(&f_map(&x).unwrap(), &f_map(&y).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        let t = embed_directed(&theta4()).unwrap();
        prop_assert_eq!(f_map(&pre_lie(&x, &t).unwrap()).unwrap(), pre_lie(&f_map(&x).unwrap(), &t).unwrap());
    }
}
