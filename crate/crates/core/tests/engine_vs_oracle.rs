use artin::oracle::{Ball, BallMethod, DEFAULT_BALL_CAP};
use artin::{ArtinGraph, ShortlexEngine};

fn check_ball(graph: &ArtinGraph, ball: &Ball) {
    let engine = ShortlexEngine::with_default_order(graph.clone()).unwrap();
    let order = graph.default_order();
    assert!(ball.unresolved().is_empty(), "{:?}", ball.unresolved());
    let mut bad = Vec::new();
    for (w, id) in ball.members() {
        let class = &ball.classes()[id];
        let sl = engine.normalize(&w).unwrap();
        let least = class.geodesics.iter().min_by(|a, b| order.shortlex_compare(a, b).unwrap()).unwrap();
        if &sl != least {
            bad.push((graph.display_word(&w), graph.display_word(&sl), graph.display_word(least)));
        }
    }
    assert!(bad.is_empty(), "{} mismatches, first {:?}", bad.len(), &bad[..bad.len().min(5)]);
}

#[test]
fn dihedral_balls_match_engine() {
    for m in [3, 4, 5, 6] {
        let g = ArtinGraph::dihedral(Some(m));
        let ball = Ball::enumerate(&g, 9).unwrap();
        check_ball(&g, &ball);
    }
}

#[test]
fn relator_ball_agrees_with_garside_ball() {
    for m in [3, 4, 6] {
        let g = ArtinGraph::dihedral(Some(m));
        let exact = Ball::enumerate(&g, 7).unwrap();
        let moves = Ball::enumerate_with(&g, 7, BallMethod::RelatorMoves { budget: 8 }, DEFAULT_BALL_CAP).unwrap();
        assert!(moves.unresolved().is_empty());
        assert_eq!(exact.len(), moves.len(), "m = {m}");
        for (a, b) in exact.classes().iter().zip(moves.classes()) {
            assert_eq!(a.canonical, b.canonical);
            assert_eq!(a.geodesics, b.geodesics);
        }
    }
}

#[test]
fn triangle_balls_match_engine() {
    for (ab, bc, ca) in [(4, 4, 4), (3, 3, 3), (6, 4, 8), (4, 4, 2)] {
        let g = ArtinGraph::triangle(ab, bc, ca);
        if !g.is_large() {
            continue;
        }
        let ball = Ball::enumerate(&g, 6).unwrap();
        check_ball(&g, &ball);
    }
}
