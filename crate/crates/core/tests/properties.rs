mod common;

use std::sync::Arc;

use common::*;
use covers::complex::{Subcomplex, TwoComplex};
use covers::covering::{check_covering, excise, monodromy, ComplexPresentation, Letter};
use covers::galois::{galois_group, inverse_galois, is_galois, quotient_by_deck_subgroup};
use covers::graph::{spanning_tree, Path, VertexId};
use covers::homotopy::HomotopyBounds;
use covers::map::{compose_maps, factor_through_quotient, is_isomorphism, maps_agree};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn unique_path_and_spur_lifting(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_graph_cover(&mut r);
        let c = check_covering(&f).unwrap();
        let (yg, xg) = (c.source().graph(), c.target().graph());
        let u = VertexId(r.gen_range(0..yg.num_vertices()));
        let len = r.gen_range(0..12);
        let p = random_path(&mut r, xg, f.vertex(u), len);
        let lift = c.lift_path(&p, u).unwrap();
        prop_assert_eq!(&lift, &lift_by_search(&f, &p, u));
        prop_assert_eq!(f.map_path(&lift), p.clone());

        // a spur inserted downstairs lifts to a spur at the same place
        let k = r.gen_range(0..=p.len());
        let v = p.vertex_at(xg, k);
        let out = xg.darts_from(v);
        let d = out[r.gen_range(0..out.len())];
        let mut darts = p.darts.clone();
        darts.splice(k..k, [d, xg.inv(d)]);
        let spurred = c.lift_path(&Path::new(p.start, darts), u).unwrap();
        prop_assert_eq!(spurred.darts[k + 1], yg.inv(spurred.darts[k]));
        let mut removed = spurred.darts.clone();
        removed.drain(k..k + 2);
        prop_assert_eq!(removed, lift.darts);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fibers_are_equinumerous(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = check_covering(&random_graph_cover(&mut r)).unwrap();
        prop_assert!(c.fibers_equinumerous());
        let n = c.degree();
        for v in c.target().graph().vertices() {
            prop_assert_eq!(c.vertex_fiber(v).len(), n);
        }
    }

    #[test]
    fn monodromy_is_a_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = check_covering(&random_graph_cover(&mut r)).unwrap();
        let base = VertexId(0);
        let m = monodromy(&c, base).unwrap();
        let k = m.presentation.generators.len();
        prop_assume!(k > 0);
        let word = |r: &mut rand_chacha::ChaCha8Rng| -> Vec<Letter> {
            (0..r.gen_range(0..6)).map(|_| Letter::new(r.gen_range(0..k), r.gen_bool(0.5))).collect()
        };
        let (w1, w2) = (word(&mut r), word(&mut r));
        let w: Vec<Letter> = w1.iter().chain(&w2).copied().collect();
        prop_assert_eq!(m.of_word(&w), m.of_word(&w1).compose(&m.of_word(&w2)));
        let yg = c.source().graph();
        for i in 0..m.degree() {
            prop_assert_eq!(m.endpoint(i, &w), m.endpoint(m.endpoint(i, &w1), &w2));
            // against an explicit lift of the loop
            let end = c.lift_path(&m.presentation.loop_of(&w), m.fiber[i]).unwrap().end(yg);
            prop_assert_eq!(m.fiber[m.endpoint(i, &w)], end);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn degree_one_coverings_are_isomorphisms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_graph_cover(&mut r);
        let copy = shuffled_copy(&mut r, &f.source);
        let c = check_covering(&copy).unwrap();
        prop_assert_eq!(c.degree(), 1);
        prop_assert!(is_isomorphism(&copy));

        // Y / Gal -> X for a random Galois cover
        let n = r.gen_range(2..=4);
        let gens = vec![random_perm(&mut r, n), random_perm(&mut r, n)];
        let (cert, g) = inverse_galois(&gens).unwrap();
        let ic = quotient_by_deck_subgroup(&g, g.perm_rep()).unwrap();
        prop_assert_eq!(ic.lower.degree(), 1);
        prop_assert!(is_isomorphism(ic.lower.map()));
        prop_assert_eq!(ic.upper.degree(), cert.degree());
    }

    #[test]
    fn galois_groups_act_freely(seed in any::<u64>()) {
        let mut r = rng(seed);
        let c = check_covering(&random_graph_cover(&mut r)).unwrap();
        let g = galois_group(&c, VertexId(0)).unwrap();
        prop_assert!(g.acts_freely());
        prop_assert_eq!(c.degree() % g.order(), 0);
    }

    #[test]
    fn spanning_trees_have_twice_v_minus_one_darts(seed in any::<u64>()) {
        let mut r = rng(seed);
        let nv = r.gen_range(1..30);
        let extra = r.gen_range(0..30);
        let g = random_connected_graph(&mut r, nv, extra);
        let root = VertexId(r.gen_range(0..nv));
        let t = spanning_tree(&g, root).unwrap();
        prop_assert_eq!(t.num_darts(), 2 * (g.num_vertices() - 1));
        for v in g.vertices() {
            prop_assert!(t.path_from_root(&g, v).end(&g) == v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn two_out_of_three(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_graph_cover(&mut r);
        let g = random_connected_cover(&mut r, &f.source, 3);
        let fg = compose_maps(&f, &g).unwrap();
        let (cf, cg) = (check_covering(&f).unwrap(), check_covering(&g).unwrap());
        let cfg = check_covering(&fg).unwrap();
        prop_assert_eq!(cfg.degree(), cf.degree() * cg.degree());
        // f and f∘g cover: the lift of f∘g through f is g, a cover
        let z0 = VertexId(0);
        let lifted = cf.lift_map(&fg, z0, g.vertex(z0)).unwrap();
        prop_assert!(maps_agree(&lifted, &g));
        prop_assert_eq!(check_covering(&lifted).unwrap().degree(), cg.degree());
        // g and f∘g cover: f∘g factors through the surjection g as f
        let down = factor_through_quotient(&g, &fg).unwrap();
        prop_assert!(maps_agree(&down, &f));
        prop_assert_eq!(check_covering(&down).unwrap().degree(), cf.degree());
    }

    #[test]
    fn excising_a_tree_keeps_degree_and_group(seed in any::<u64>()) {
        let mut r = rng(seed);
        let nv = r.gen_range(2..=4);
        let x = Arc::new(TwoComplex::from_graph(random_connected_graph(&mut r, nv, 2)));
        let f = random_connected_cover(&mut r, &x, 3);
        let c = check_covering(&f).unwrap();
        // a subtree: the first few tree arcs, which form a tree on x0..xk
        let k = r.gen_range(1..nv);
        let mut names: Vec<String> = (0..k).map(|i| format!("t{i}")).collect();
        names.extend((0..=k).map(|i| format!("x{i}")));
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let z = Subcomplex::from_names(&x, &refs).unwrap();
        let ex = excise(&c, &z, HomotopyBounds::default()).unwrap();
        prop_assert_eq!(ex.cover.degree(), c.degree());
        prop_assert_eq!(ex.base().num_vertices(), nv - k);
        prop_assert_eq!(is_galois(&ex.cover).unwrap().order, is_galois(&c).unwrap().order);
    }
}

#[test]
fn presentations_of_random_graphs_are_free() {
    let mut r = rng(7);
    for _ in 0..20 {
        let nv = r.gen_range(1..6);
        let g = random_connected_graph(&mut r, nv, 3);
        let arcs = g.num_arcs();
        let cp = ComplexPresentation::new(Arc::new(TwoComplex::from_graph(g)), VertexId(0)).unwrap();
        assert_eq!(cp.generators.len(), arcs - (nv - 1));
        assert!(cp.presentation.relators.is_empty());
    }
}
