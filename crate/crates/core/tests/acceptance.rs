//! The twelve acceptance criteria, one line each. Runs as a plain binary so the lines
//! always print. Exits nonzero when any outcome differs from `EXPECTED_FAILURES`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::time::{Duration, Instant};

use artin::dihedral::{find_critical, garside_normal_form, pn_stats, tau};
use artin::geodesic::{verify_lemma, Lemma};
use artin::kernel::{eliminate, poly_free_tower, vertex_params, KernelError, Retraction, Sign};
use artin::linear::LinearRep;
use artin::oracle::{relator_equal, relator_equal_capped, Ball, BallMethod, Verdict, DEFAULT_BALL_CAP};
use artin::rewriting::ReductionKind;
use artin::words::free_reduce;
use artin::{ArtinGraph, Letter, ShortlexEngine, Word};

/// Criteria whose statement is contradicted by an explicit counterexample; see the
/// detail line printed for each.
const EXPECTED_FAILURES: [usize; 2] = [4, 5];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn parse(g: &ArtinGraph, s: &str) -> Word {
    g.parse_word(s).unwrap()
}

fn criterion_1() -> Outcome {
    let g = ArtinGraph::triangle(4, 4, 4);
    let e = ShortlexEngine::new(g.clone(), g.parse_order("a a^-1 b b^-1 c c^-1").unwrap()).unwrap();
    let w = parse(&g, "c b c a b a c b c b");
    let t = e.search_leftward_lex_reduction(&w).map_err(|e| e.to_string())?.ok_or("no lex reduction")?;
    ensure(t.output == parse(&g, "b c b c a b a c b c"), || format!("output {}", g.render_word(&t.output)))?;
    ensure(t.steps.len() == 3, || format!("{} steps", t.steps.len()))?;
    ensure(t.replay(&g).map_err(|e| e.to_string())? == t.output, || "replay differs".into())?;
    ensure(e.words_equal(&w, &t.output).unwrap(), || "not equal to input".into())?;
    Ok(format!("{} with 3 steps", g.render_word(&t.output)))
}

fn criterion_2() -> Outcome {
    let g = ArtinGraph::triangle(4, 4, 4);
    let e = ShortlexEngine::with_default_order(g.clone()).unwrap();
    let w = parse(&g, "a^-1 b^3 a b c^-1 a^2 c b^-1 a b a");
    let t = e.search_rightward_length_reduction(&w).map_err(|e| e.to_string())?.ok_or("no length reduction")?;
    let expected = parse(&g, "b a b^3 c a^2 c^-1 b a b^-1");
    ensure(t.output == expected, || format!("output {}", g.render_word(&t.output)))?;
    ensure(w.len() == 14 && t.output.len() == 12, || "lengths".into())?;
    ensure(t.steps.len() == 3 && t.kind == ReductionKind::LengthReducing, || "trace shape".into())?;
    // the last image ends with the inverse of the letter after the span: a free cancellation
    let last = t.steps.last().unwrap();
    ensure(last.image.last().map(|l| l.inverse()) == t.tail, || "no closing cancellation".into())?;
    ensure(e.words_equal(&w, &t.output).unwrap(), || "not equal to input".into())?;
    Ok("length 14 -> 12 in 3 steps ending in a free cancellation".into())
}

/// Minimal classes of a ball among those with geodesics starting with both prefixes.
fn minimal_with_prefixes<'a>(ball: &'a Ball, first: &[Letter], second: &[Letter]) -> (Option<usize>, Vec<&'a Word>) {
    let hits: Vec<_> = ball
        .classes()
        .iter()
        .filter(|c| c.geodesics.iter().any(|w| w.starts_with(first)) && c.geodesics.iter().any(|w| w.starts_with(second)))
        .collect();
    let min = hits.iter().map(|c| c.geodesic_length()).min();
    let minimal = hits.iter().filter(|c| Some(c.geodesic_length()) == min).map(|c| &c.canonical).collect();
    (min, minimal)
}

fn criterion_3() -> Outcome {
    let g = ArtinGraph::dihedral(Some(4));
    let e = ShortlexEngine::with_default_order(g.clone()).unwrap();
    let w = parse(&g, "b^2 a b a a b a");
    let w_hat = parse(&g, "a^2 b a b b a b");
    ensure(e.words_equal(&w, &w_hat).unwrap(), || "not equal".into())?;
    ensure(e.is_geodesic(&w).unwrap() && e.is_geodesic(&w_hat).unwrap() && w.len() == 2 + 2 * 3, || "not geodesic of length 8".into())?;
    let ball = Ball::enumerate(&g, 8).map_err(|e| e.to_string())?;
    let (min, minimal) = minimal_with_prefixes(&ball, &parse(&g, "a^2"), &parse(&g, "b^2"));
    ensure(min == Some(8), || format!("minimal length {min:?}"))?;
    ensure(minimal.len() == 1, || format!("{} minimal elements", minimal.len()))?;
    let class = ball.class_of(&w).unwrap();
    ensure(&class.canonical == minimal[0] && class.geodesics.contains(&w_hat), || "pair not in the minimal class".into())?;
    Ok(format!("unique minimal element of length 8 over {} elements", ball.len()))
}

fn criterion_4() -> Outcome {
    let g = ArtinGraph::dihedral(Some(4));
    let e = ShortlexEngine::with_default_order(g.clone()).unwrap();
    let w = parse(&g, "b a^-1 b^-1 a^-1");
    let w_hat = parse(&g, "a^-1 b^-1 a^-1 b");
    ensure(e.words_equal(&w, &w_hat).unwrap(), || "not equal".into())?;
    ensure(relator_equal(&w, &w_hat, &g, 6).unwrap().is_equal(), || "oracle disagrees".into())?;
    ensure(e.geodesic_length(&w).unwrap() == 1 + 3, || "length is not 4".into())?;
    let ball = Ball::enumerate(&g, 5).map_err(|e| e.to_string())?;
    let (min, minimal) = minimal_with_prefixes(&ball, &parse(&g, "b"), &parse(&g, "a^-1"));
    ensure(min == Some(4), || format!("minimal length {min:?}"))?;
    let shown: Vec<String> = minimal.iter().map(|w| g.render_word(w)).collect();
    ensure(minimal.len() == 1, || {
        format!("equality and length 4 hold, but {} minimal elements: {}", minimal.len(), shown.join(", "))
    })?;
    Ok("unique minimal element of length 4".into())
}

fn criterion_5() -> Outcome {
    let triangle = ArtinGraph::triangle(4, 4, 4);
    let mut runs: Vec<(Lemma, ArtinGraph, usize)> = Vec::new();
    for l in [Lemma::InverseInitials, Lemma::PowerExtension, Lemma::MixedSignSquares, Lemma::Initials] {
        runs.push((l, ArtinGraph::dihedral(Some(4)), 8));
        runs.push((l, ArtinGraph::dihedral(Some(6)), 8));
        runs.push((l, triangle.clone(), 5));
    }
    for l in [Lemma::OmegaCount, Lemma::RhoLength, Lemma::RhoShortlex, Lemma::RhoDescent, Lemma::DeltaDistinct] {
        runs.push((l, triangle.clone(), 5));
    }
    let mut failed = Vec::new();
    let mut checked = 0;
    for (l, g, radius) in &runs {
        let rep = verify_lemma(*l, g, *radius, None).map_err(|e| format!("{}: {e}", l.id()))?;
        checked += rep.checked;
        if !rep.passed() {
            failed.push(format!(
                "{} on {} has {} violations, first {}",
                l.id(),
                g.name(),
                rep.violations.len(),
                rep.violations[0]
            ));
        }
    }
    ensure(failed.is_empty(), || failed.join("; "))?;
    Ok(format!("{} runs, {checked} instances, 0 violations", runs.len()))
}

fn criterion_6() -> Outcome {
    let p = vertex_params(2).unwrap();
    ensure((p.p_plus, p.p_minus, p.n_minus, p.n_plus) == (2, 0, -1, 1), || format!("k=2 gives {p:?}"))?;
    let p = vertex_params(1).unwrap();
    ensure((p.p_plus, p.p_minus, p.n_minus, p.n_plus) == (1, 0, -1, 0), || format!("k=1 gives {p:?}"))?;
    for k in 1..=100 {
        let p = vertex_params(k).unwrap();
        ensure(p.p_minus - 1 == p.n_minus && p.p_plus - 1 == p.n_plus, || format!("identities fail at k={k}"))?;
    }
    Ok("k=2 and k=1 rows match; identities hold for k in 1..=100".into())
}

fn criterion_7() -> Outcome {
    // edge c-b of the (4,4,4) triangle, so the conjugators live in the subgroup on a, b
    let g = ArtinGraph::triangle(4, 4, 4);
    let ret = Retraction::new(&g, 2, None).unwrap();
    let whole = ShortlexEngine::with_default_order(g.clone()).unwrap();
    let mut cases = Vec::new();
    for conj in ["", "b", "b a b"] {
        cases.push((format!("b^2 {conj}"), Sign::Plus));
    }
    for conj in ["", "b^-1", "b^-1 a^-1 b^-1"] {
        cases.push((format!("b^-1 {conj}"), Sign::Minus));
    }
    let mut shown = Vec::new();
    for (h, sign) in &cases {
        let rel = ret.instantiate_relation(&parse(&g, h), 1, *sign).map_err(|e| e.to_string())?;
        let (lhs, rhs) = rel.flatten(2);
        ensure(whole.normalize(&lhs.concat(&rhs.inverse())).unwrap().is_empty(), || format!("engine rejects {}", rel.render(&g)))?;
        let verdict = relator_equal(&free_reduce(&lhs), &free_reduce(&rhs), &g, 16).map_err(|e| e.to_string())?;
        ensure(verdict.is_equal(), || format!("oracle gives {verdict:?} for {}", rel.render(&g)))?;
        shown.push(rel.render(&g));
    }
    Ok(format!("{} relations verified, e.g. {}", shown.len(), shown[2]))
}

fn criterion_8() -> Outcome {
    let g = ArtinGraph::triangle(4, 4, 4);
    let state = eliminate(&g, 2, 4, None).map_err(|e| e.to_string())?;
    let h1 = parse(&g, "a^-1 b^-1 a^-1 b^-1");
    ensure(state.omega_index.first() == Some(&h1), || "first processed element differs".into())?;

    // independent: two-set elements of the oracle ball of the subgroup, shortlex-least first
    let sub = ArtinGraph::dihedral(Some(4));
    let ball = Ball::enumerate(&sub, 4).unwrap();
    let order = sub.default_order();
    let prefixes = ["a^2", "a^-1", "b^2", "b^-1"].map(|s| parse(&sub, s));
    let mut doubles: Vec<Word> = ball
        .classes()
        .iter()
        .filter(|c| prefixes.iter().filter(|p| c.geodesics.iter().any(|w| w.starts_with(p))).count() == 2)
        .map(|c| c.geodesics.iter().min_by(|a, b| order.shortlex_compare(a, b).unwrap()).unwrap().clone())
        .collect();
    doubles.sort_by(|a, b| order.shortlex_compare(a, b).unwrap());
    ensure(doubles.first() == Some(&h1), || "oracle finds a smaller two-set element".into())?;

    let ret = Retraction::new(&g, 2, None).unwrap();
    let (delta, _) = ret.delta(&h1).map_err(|e| e.to_string())?;
    let expected = vec![parse(&g, "a b^-1 a^-1 b"), parse(&g, "b a^-1 b^-1 a")];
    ensure(delta == expected, || format!("descent set has {} elements", delta.len()))?;
    let first = &state.eliminated[0];
    ensure(first.h == h1 && first.generator.conjugator == expected[1], || "wrong member eliminated".into())?;
    let (lhs, rhs) = first.relation.flatten(2);
    let whole = ShortlexEngine::with_default_order(g.clone()).unwrap();
    ensure(whole.words_equal(&lhs, &rhs).unwrap(), || "relation fails".into())?;
    Ok(format!("eliminated b a^-1 b^-1 a via {}", first.relation.render(&g)))
}

fn partition_agreement(
    g: &ArtinGraph,
    ball: &Ball,
    reference: Option<&Ball>,
    budget: usize,
) -> Result<(usize, usize), String> {
    ensure(ball.unresolved().is_empty(), || format!("{} unresolved class pairs", ball.unresolved().len()))?;
    let e = ShortlexEngine::with_default_order(g.clone()).unwrap();
    let words: Vec<(Word, usize)> = ball.members().collect();
    let forms: Vec<Word> = words.iter().map(|(w, _)| e.normalize(w).unwrap()).collect();
    let other: Option<HashMap<Word, usize>> = reference.map(|r| r.members().collect());
    let mut pairs = 0;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            pairs += 1;
            let same = words[i].1 == words[j].1;
            ensure((forms[i] == forms[j]) == same, || {
                format!("{} vs {}", g.render_word(&words[i].0), g.render_word(&words[j].0))
            })?;
            if let Some(o) = &other {
                ensure((o[&words[i].0] == o[&words[j].0]) == same, || "Garside and move classes differ".into())?;
            }
        }
    }
    // some classes only join through words longer than the move budget, so the
    // search widens up to the depth the ball itself used for merging
    let max_label = g.edges().iter().map(|e| e.2 as usize).max().unwrap_or(0);
    let ceiling = (ball.radius() + 2 * max_label).min(30);
    let mut deepest = budget;
    for (w, id) in &words {
        let canonical = &ball.classes()[*id].canonical;
        let mut b = budget;
        loop {
            match relator_equal_capped(w, canonical, g, b, 3_000_000).map_err(|e| e.to_string())? {
                Verdict::Equal(_) => break,
                v if b >= ceiling => return Err(format!("{} gives {v:?} at budget {b}", g.render_word(w))),
                _ => b = (b + 2).min(ceiling),
            }
        }
        deepest = deepest.max(b);
    }
    Ok((pairs, deepest))
}

fn criterion_9() -> Outcome {
    let triangle = ArtinGraph::triangle(4, 4, 4);
    let ball = Ball::enumerate_with(&triangle, 4, BallMethod::RelatorMoves { budget: 6 }, DEFAULT_BALL_CAP).map_err(|e| e.to_string())?;
    let (mut pairs, mut deepest) = partition_agreement(&triangle, &ball, None, 6)?;
    let mut words = ball.members().count();
    for m in [4, 6] {
        let g = ArtinGraph::dihedral(Some(m));
        let moves = Ball::enumerate_with(&g, 6, BallMethod::RelatorMoves { budget: 8 }, DEFAULT_BALL_CAP).map_err(|e| e.to_string())?;
        let garside = Ball::enumerate_with(&g, 6, BallMethod::GarsideDihedral, DEFAULT_BALL_CAP).map_err(|e| e.to_string())?;
        ensure(moves.len() == garside.len(), || format!("A(m={m}): {} vs {} classes", moves.len(), garside.len()))?;
        let (p, d) = partition_agreement(&g, &moves, Some(&garside), 8)?;
        pairs += p;
        deepest = deepest.max(d);
        words += moves.members().count();
    }
    Ok(format!("{pairs} word pairs agree; {words} words reach their class representative within budget {deepest}"))
}

fn criterion_10() -> Outcome {
    let mut count = 0;
    for m in [4usize, 6] {
        let letters = [Letter::pos(0), Letter::neg(0), Letter::pos(1), Letter::neg(1)];
        let mut layer: Vec<Vec<Letter>> = vec![vec![]];
        for _ in 0..10 {
            let mut next = Vec::new();
            for w in &layer {
                for &l in &letters {
                    if w.last() == Some(&l.inverse()) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            for w in &next {
                let Some(c) = find_critical(w, m) else { continue };
                count += 1;
                let t = tau(&c);
                let back = find_critical(&t, m).ok_or_else(|| format!("tau of {w:?} is not critical"))?;
                ensure(tau(&back).letters() == &w[..], || format!("tau twice moves {w:?}"))?;
                let (s, st) = (pn_stats(w, m).unwrap(), pn_stats(&t, m).unwrap());
                ensure((s.p, s.n) == (st.p, st.n), || format!("p/n change on {w:?}"))?;
                let (f, l) = (w[0], w[w.len() - 1]);
                let (tf, tl) = (t[0], t[t.len() - 1]);
                ensure(f.name() != tf.name() && l.name() != tl.name(), || format!("names kept on {w:?}"))?;
                let signed = w.iter().all(|x| x.is_positive()) || w.iter().all(|x| x.is_negative());
                let same_sign = f.is_positive() == tf.is_positive() && l.is_positive() == tl.is_positive();
                let flipped = f.is_positive() != tf.is_positive() && l.is_positive() != tl.is_positive();
                ensure(if signed { same_sign } else { flipped }, || format!("sign rule fails on {w:?}"))?;
                ensure(garside_normal_form(w, (0, 1), Some(m as u32)).unwrap() == garside_normal_form(&t, (0, 1), Some(m as u32)).unwrap(), || {
                    format!("tau changes the element of {w:?}")
                })?;
            }
            layer = next;
        }
    }
    Ok(format!("{count} critical words"))
}

fn criterion_11() -> Outcome {
    let g = ArtinGraph::dihedral(Some(4));
    let e = ShortlexEngine::with_default_order(g.clone()).unwrap();
    let blocks = ["a^2", "a^-2", "b^2", "b^-2"].map(|s| parse(&g, s));
    let mut words: Vec<(Word, Option<usize>)> = vec![(Word::empty(), None)];
    let mut frontier = words.clone();
    for _ in 0..4 {
        let mut next = Vec::new();
        for (w, last) in &frontier {
            for (i, b) in blocks.iter().enumerate() {
                if *last == Some(i ^ 1) {
                    continue;
                }
                next.push((w.concat(b), Some(i)));
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut forms = HashSet::new();
    let mut garside = HashSet::new();
    let rep = LinearRep::new(&g);
    let mut images = HashSet::new();
    for (w, _) in &words {
        ensure(images.insert(rep.image(w)), || format!("image collision at {}", g.render_word(w)))?;
        ensure(forms.insert(e.normalize(w).unwrap()), || format!("engine collision at {}", g.render_word(w)))?;
        ensure(garside.insert(garside_normal_form(w, (0, 1), Some(4)).unwrap()), || format!("oracle collision at {}", g.render_word(w)))?;
    }
    Ok(format!("{} block words pairwise distinct", words.len()))
}

fn criterion_12() -> Outcome {
    let mut lines = Vec::new();
    for g in [ArtinGraph::triangle(4, 4, 4), ArtinGraph::triangle(6, 4, 8), ArtinGraph::triangle(4, 4, 2)] {
        let steps = poly_free_tower(&g, 4).map_err(|e| format!("{}: {e}", g.name()))?;
        ensure(steps.len() == 3 && steps.iter().all(|s| s.state.escaped.is_empty()), || format!("{} schedule", g.name()))?;
        let order: Vec<&str> = steps.iter().map(|s| g.vertex_name(s.removed)).collect();
        lines.push(format!("{} removes {}", g.name(), order.join(",")));
    }
    let path = ArtinGraph::from_edges(&["a", "b", "c"], &[("a", "b", 2), ("b", "c", 2)]).unwrap();
    ensure(poly_free_tower(&path, 3).is_ok(), || "path with labels 2 has an admissible vertex".into())?;
    let square = ArtinGraph::from_edges(&["a", "b", "c", "d"], &[("a", "b", 2), ("b", "c", 2), ("c", "d", 2), ("d", "a", 2)]).unwrap();
    match poly_free_tower(&square, 3) {
        Err(KernelError::Unsupported(msg)) if msg.contains("edge") => lines.push("square rejected".into()),
        other => return Err(format!("square: {other:?}")),
    }
    Ok(lines.join("; "))
}

fn main() {
    let criteria: [(fn() -> Outcome, u64); 12] = [
        (criterion_1, 1),
        (criterion_2, 1),
        (criterion_3, 30),
        (criterion_4, 10),
        (criterion_5, 600),
        (criterion_6, 1),
        (criterion_7, 60),
        (criterion_8, 60),
        (criterion_9, 900),
        (criterion_10, 60),
        (criterion_11, 120),
        (criterion_12, 300),
    ];
    let mut unexpected = Vec::new();
    for (i, (run, limit)) in criteria.iter().enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if outcome.is_ok() && elapsed > Duration::from_secs(*limit) {
            outcome = Err(format!("took {elapsed:.1?}, limit {limit} s"));
        }
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        let detail = match &outcome {
            Ok(d) | Err(d) => d,
        };
        println!("criterion {n:>2} {status} ({:.2} s): {detail}", elapsed.as_secs_f64());
        if outcome.is_ok() == EXPECTED_FAILURES.contains(&n) {
            unexpected.push(n);
        }
    }
    let expected: BTreeSet<usize> = EXPECTED_FAILURES.into_iter().collect();
    if unexpected.is_empty() {
        println!("acceptance: outcomes match expectations (known failures {expected:?})");
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
