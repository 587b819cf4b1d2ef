use artin::dihedral::{find_critical, pn_stats, tau};
use artin::kernel::{psi, vertex_params};
use artin::linear::LinearRep;
use artin::oracle::abelian_image;
use artin::rewriting::{render_traces, replay_rendered};
use artin::words::free_reduce;
use artin::{ArtinGraph, Letter, ShortlexEngine, Word};
use proptest::prelude::*;

fn graphs() -> Vec<ArtinGraph> {
    vec![
        ArtinGraph::dihedral(Some(4)),
        ArtinGraph::dihedral(Some(6)),
        ArtinGraph::dihedral(Some(5)),
        ArtinGraph::triangle(4, 4, 4),
        ArtinGraph::triangle(6, 4, 8),
        ArtinGraph::triangle(3, 3, 3),
    ]
}

fn word(n: u16, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..n, any::<bool>()), 0..=max_len)
        .prop_map(|ls| ls.into_iter().map(|(g, pos)| if pos { Letter::pos(g) } else { Letter::neg(g) }).collect())
}

fn graph_and_words(count: usize, max_len: usize) -> impl Strategy<Value = (usize, Vec<Word>)> {
    (0..graphs().len()).prop_flat_map(move |i| {
        let n = graphs()[i].vertex_count() as u16;
        (Just(i), prop::collection::vec(word(n, max_len), count))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn normal_form_is_a_geodesic_fixpoint((i, ws) in graph_and_words(1, 18)) {
        let g = &graphs()[i];
        let e = ShortlexEngine::with_default_order(g.clone()).unwrap();
        let w = &ws[0];
        let nf = e.normalize(w).unwrap();
        prop_assert!(nf.len() <= free_reduce(w).len());
        prop_assert_eq!(e.normalize(&nf).unwrap(), nf.clone());
        prop_assert!(e.is_geodesic(&nf).unwrap());
        prop_assert!(e.words_equal(w, &nf).unwrap());
    }

    #[test]
    fn normalization_preserves_independent_invariants((i, ws) in graph_and_words(1, 16)) {
        let g = &graphs()[i];
        let e = ShortlexEngine::with_default_order(g.clone()).unwrap();
        let rep = LinearRep::new(g);
        let nf = e.normalize(&ws[0]).unwrap();
        prop_assert_eq!(abelian_image(&nf, g), abelian_image(&ws[0], g));
        prop_assert_eq!(rep.image(&nf), rep.image(&ws[0]));
    }

    #[test]
    fn normal_forms_respect_the_group_law((i, ws) in graph_and_words(2, 10)) {
        let g = &graphs()[i];
        let e = ShortlexEngine::with_default_order(g.clone()).unwrap();
        let (u, v) = (&ws[0], &ws[1]);
        let whole = e.normalize(&u.concat(v)).unwrap();
        let parts = e.normalize(&e.normalize(u).unwrap().concat(&e.normalize(v).unwrap())).unwrap();
        prop_assert_eq!(whole, parts);
        prop_assert!(e.normalize(&u.concat(&u.inverse())).unwrap().is_empty());
        let inv = e.normalize(&u.inverse()).unwrap();
        prop_assert_eq!(inv.len(), e.normalize(u).unwrap().len());
    }

    #[test]
    fn rendered_traces_replay_to_the_normal_form((i, ws) in graph_and_words(1, 14)) {
        let g = &graphs()[i];
        let e = ShortlexEngine::with_default_order(g.clone()).unwrap();
        let (nf, traces) = e.normalize_traced(&ws[0]).unwrap();
        let text = render_traces(g, &ws[0], &traces, &nf);
        prop_assert_eq!(replay_rendered(g, &text).unwrap(), nf);
    }

    #[test]
    fn rendered_words_parse_back((i, ws) in graph_and_words(1, 20)) {
        let g = &graphs()[i];
        prop_assert_eq!(g.parse_word(&g.render_word(&ws[0])).unwrap(), ws[0].clone());
    }

    #[test]
    fn retraction_fixes_subgroup_words(w in word(2, 20)) {
        // generators 0 and 1 only; kill generator 2
        prop_assert_eq!(psi(&w, 2), free_reduce(&w));
    }

    #[test]
    fn vertex_parameters(k in 1u32..=100) {
        let p = vertex_params(k).unwrap();
        prop_assert_eq!(p.p_minus - 1, p.n_minus);
        prop_assert_eq!(p.p_plus - 1, p.n_plus);
        prop_assert_eq!(p.p_plus - p.p_minus, k as i64);
        prop_assert_eq!(p.n_plus - p.n_minus, k as i64);
        prop_assert!(p.p_plus >= 1 && p.n_minus <= -1);
        prop_assert!(p.n_plus < p.p_plus);
    }

    #[test]
    fn tau_is_an_involution_on_critical_words(w in word(2, 10), m in 3usize..=7) {
        if let Some(c) = find_critical(&w, m) {
            let t = tau(&c);
            let back = find_critical(&t, m).expect("image of a critical word is critical");
            prop_assert_eq!(tau(&back), w.clone());
            let (s, st) = (pn_stats(&w, m).unwrap(), pn_stats(&t, m).unwrap());
            prop_assert_eq!((s.p, s.n), (st.p, st.n));
            prop_assert_eq!(t.len(), w.len());
            prop_assert_ne!(t.first().map(|l| l.name()), w.first().map(|l| l.name()));
            prop_assert_ne!(t.last().map(|l| l.name()), w.last().map(|l| l.name()));
        }
    }

    #[test]
    fn tau_preserves_the_element(w in word(2, 10), m in prop::sample::select(vec![4u32, 6, 8])) {
        if let Some(t) = artin::dihedral::tau_word(&w, m as usize) {
            let e = ShortlexEngine::with_default_order(ArtinGraph::dihedral(Some(m))).unwrap();
            prop_assert!(e.words_equal(&w, &t).unwrap());
            prop_assert!(artin::dihedral::garside_equal(&w, &t, Some(m)).unwrap());
        }
    }
}
