//! Shortlex normal forms for large Artin groups by chains of τ-moves on
//! overlapping two-generator critical subwords.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::ops::Range;

use thiserror::Error;

use crate::dihedral::{find_critical, tau, CriticalForm, CriticalWord};
use crate::graph::ArtinGraph;
use crate::words::{free_reduce, is_freely_reduced, Letter, LexOrder, Word, WordError};

/// Default cap on chain-search nodes explored by one search call.
pub const DEFAULT_NODE_CAP: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("unsupported presentation: edge {0}-{1} has label {2}, the engine needs labels >= 3")]
    NotLarge(String, String, u32),
    #[error("order covers {order} generators but the graph has {graph}")]
    OrderMismatch { order: usize, graph: usize },
    #[error("input word is not freely reduced")]
    NotReduced,
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("search budget exceeded: {0}")]
    Budget(String),
    #[error("trace replay mismatch: {0}")]
    Replay(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Leftward,
    Rightward,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Leftward => "leftward",
            Direction::Rightward => "rightward",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionKind {
    LengthReducing,
    LexReducing,
}

impl ReductionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReductionKind::LengthReducing => "length_reducing",
            ReductionKind::LexReducing => "lex_reducing",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// Position of the critical subword in the word before this step.
    pub span: Range<usize>,
    pub critical: CriticalWord,
    /// τ of the critical subword.
    pub image: Word,
}

/// One critical sequence applied to `input`; `output` is after free reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub direction: Direction,
    pub kind: ReductionKind,
    pub input: Word,
    pub steps: Vec<TraceStep>,
    pub tail: Option<Letter>,
    pub output: Word,
}

impl ReductionTrace {
    /// Reapplies the recorded τ-moves to `input` and checks every intermediate claim.
    pub fn replay(&self, graph: &ArtinGraph) -> Result<Word, RewriteError> {
        let mut cur = self.input.letters().to_vec();
        for (k, st) in self.steps.iter().enumerate() {
            if st.span.end > cur.len() || st.span.is_empty() {
                return Err(RewriteError::Replay(format!("step {}: span out of range", k + 1)));
            }
            let sub = &cur[st.span.clone()];
            let c = critical_in_graph(sub, graph).ok_or_else(|| {
                RewriteError::Replay(format!("step {}: subword is not critical", k + 1))
            })?;
            if c.form != st.critical.form {
                return Err(RewriteError::Replay(format!(
                    "step {}: form is {} not {}",
                    k + 1,
                    c.form,
                    st.critical.form
                )));
            }
            let image = tau(&c);
            if image != st.image {
                return Err(RewriteError::Replay(format!("step {}: τ image differs", k + 1)));
            }
            cur.splice(st.span.clone(), image.into_letters());
        }
        let out = free_reduce(&cur);
        if out != self.output {
            return Err(RewriteError::Replay("output differs".into()));
        }
        Ok(out)
    }

    pub fn render(&self, graph: &ArtinGraph, index: usize) -> String {
        let mut s = String::new();
        let _ = write!(s, "sequence {index}: {} {}", self.direction.as_str(), self.kind.as_str());
        if let Some(t) = self.tail {
            let _ = write!(s, " tail {}", graph.render_word(&[t]));
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "input: {}", graph.render_word(&self.input));
        for (k, st) in self.steps.iter().enumerate() {
            let _ = writeln!(
                s,
                "step {}: span [{},{}) form {} tau-> {}",
                k + 1,
                st.span.start,
                st.span.end,
                st.critical.form,
                graph.render_word(&st.image)
            );
        }
        let _ = writeln!(s, "output: {}", graph.render_word(&self.output));
        s
    }
}

/// Renders a full normalization: every sequence then `result:`.
pub fn render_traces(graph: &ArtinGraph, input: &[Letter], traces: &[ReductionTrace], result: &[Letter]) -> String {
    let mut s = format!("word: {}\n", graph.render_word(input));
    for (i, t) in traces.iter().enumerate() {
        s.push_str(&t.render(graph, i + 1));
    }
    let _ = writeln!(s, "result: {}", graph.render_word(result));
    s
}

/// Parses the output of [`render_traces`], replays the normalization and checks the recorded result.
pub fn replay_rendered(graph: &ArtinGraph, text: &str) -> Result<Word, RewriteError> {
    let bad = |msg: &str| RewriteError::Replay(msg.to_string());
    let mut input: Option<Word> = None;
    let mut result: Option<Word> = None;
    let mut traces: Vec<ReductionTrace> = Vec::new();
    let mut current: Option<ReductionTrace> = None;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(rest) = line.strip_prefix("word:") {
            input = Some(graph.parse_word(rest)?);
        } else if let Some(rest) = line.strip_prefix("result:") {
            result = Some(graph.parse_word(rest)?);
        } else if let Some(rest) = line.strip_prefix("sequence ") {
            if let Some(t) = current.take() {
                traces.push(t);
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let direction = match fields.get(1) {
                Some(&"leftward") => Direction::Leftward,
                Some(&"rightward") => Direction::Rightward,
                _ => return Err(bad("bad sequence direction")),
            };
            let kind = match fields.get(2) {
                Some(&"length_reducing") => ReductionKind::LengthReducing,
                Some(&"lex_reducing") => ReductionKind::LexReducing,
                _ => return Err(bad("bad sequence kind")),
            };
            let tail = match fields.get(3) {
                Some(&"tail") => {
                    let w = graph.parse_word(fields.get(4).ok_or_else(|| bad("missing tail"))?)?;
                    Some(w[0])
                }
                _ => None,
            };
            current = Some(ReductionTrace {
                direction,
                kind,
                input: Word::empty(),
                steps: Vec::new(),
                tail,
                output: Word::empty(),
            });
        } else if let Some(rest) = line.strip_prefix("input:") {
            current.as_mut().ok_or_else(|| bad("input outside sequence"))?.input = graph.parse_word(rest)?;
        } else if let Some(rest) = line.strip_prefix("output:") {
            current.as_mut().ok_or_else(|| bad("output outside sequence"))?.output = graph.parse_word(rest)?;
        } else if let Some(rest) = line.strip_prefix("step ") {
            let t = current.as_mut().ok_or_else(|| bad("step outside sequence"))?;
            let (_, rest) = rest.split_once(": span [").ok_or_else(|| bad("bad step line"))?;
            let (range, rest) = rest.split_once(") form ").ok_or_else(|| bad("bad step span"))?;
            let (a, b) = range.split_once(',').ok_or_else(|| bad("bad step span"))?;
            let start: usize = a.trim().parse().map_err(|_| bad("bad span start"))?;
            let end: usize = b.trim().parse().map_err(|_| bad("bad span end"))?;
            let (form, image) = rest.split_once(" tau->").ok_or_else(|| bad("bad step form"))?;
            let form = CriticalForm::parse(form.trim()).ok_or_else(|| bad("unknown form"))?;
            let image = graph.parse_word(image)?;
            // the critical word itself is recomputed on replay; keep only its form here
            t.steps.push(TraceStep {
                span: start..end,
                critical: CriticalWord {
                    word: Word::empty(),
                    form,
                    m: 0,
                    lead: 0..0,
                    middle: 0..0,
                    trail: 0..0,
                    generators: (0, 0),
                },
                image,
            });
        } else {
            return Err(bad(&format!("unrecognized line `{line}`")));
        }
    }
    if let Some(t) = current.take() {
        traces.push(t);
    }
    let result = result.ok_or_else(|| bad("missing result line"))?;
    let input = input.ok_or_else(|| bad("missing word line"))?;
    let replayed = replay_normalization(graph, &input, &traces)?;
    if replayed != result {
        return Err(bad("result differs from replayed output"));
    }
    Ok(result)
}

/// Re-runs the letter-by-letter normalization of `input`, applying the recorded sequences where
/// they were applied originally instead of searching for them.
pub fn replay_normalization(graph: &ArtinGraph, input: &[Letter], traces: &[ReductionTrace]) -> Result<Word, RewriteError> {
    fn push(
        graph: &ArtinGraph,
        u: &mut Vec<Letter>,
        a: Letter,
        traces: &[ReductionTrace],
        next: &mut usize,
    ) -> Result<(), RewriteError> {
        if u.last() == Some(&a.inverse()) {
            u.pop();
            return Ok(());
        }
        u.push(a);
        let Some(t) = traces.get(*next) else {
            return Ok(());
        };
        if t.input.letters() != u.as_slice() {
            return Ok(());
        }
        *next += 1;
        let result = t.replay(graph)?;
        let keep = u.iter().zip(result.iter()).take_while(|(x, y)| x == y).count();
        u.truncate(keep);
        for &l in &result[keep..] {
            push(graph, u, l, traces, next)?;
        }
        Ok(())
    }
    let mut u = Vec::new();
    let mut next = 0;
    for &a in input {
        push(graph, &mut u, a, traces, &mut next)?;
    }
    if next != traces.len() {
        return Err(RewriteError::Replay(format!(
            "{} of {} sequences were never reached",
            traces.len() - next,
            traces.len()
        )));
    }
    Ok(Word::new(u))
}

fn critical_in_graph(w: &[Letter], graph: &ArtinGraph) -> Option<CriticalWord> {
    let names = two_names(w)?;
    let m = graph.label(names.0, names.1)?;
    find_critical(w, m as usize)
}

fn two_names(w: &[Letter]) -> Option<(u16, u16)> {
    let a = w.first()?.name();
    let b = w.iter().map(|l| l.name()).find(|&n| n != a)?;
    if w.iter().all(|l| l.name() == a || l.name() == b) {
        Some((a, b))
    } else {
        None
    }
}

/// All critical subwords, sorted by start then end.
pub fn find_critical_subwords(w: &[Letter], graph: &ArtinGraph) -> Vec<(Range<usize>, CriticalWord)> {
    let mut out = Vec::new();
    for i in 0..w.len() {
        let a = w[i].name();
        let mut b: Option<u16> = None;
        for j in i + 1..w.len() {
            let n = w[j].name();
            if n != a {
                match b {
                    None => b = Some(n),
                    Some(b) if b != n => break,
                    _ => {}
                }
            }
            if let Some(c) = critical_in_graph(&w[i..=j], graph) {
                out.push((i..j + 1, c));
            }
        }
    }
    out
}

#[derive(Clone)]
struct Candidate {
    word: Vec<Letter>,
    steps: Vec<TraceStep>,
    kind: ReductionKind,
    tail: Option<Letter>,
    direction: Direction,
}

struct Search<'a> {
    graph: &'a ArtinGraph,
    order: &'a LexOrder,
    original: &'a [Letter],
    nodes: usize,
    cap: usize,
    best_length: Option<Candidate>,
    best_lex: Option<Candidate>,
}

impl<'a> Search<'a> {
    fn tick(&mut self) -> Result<(), RewriteError> {
        self.nodes += 1;
        if self.nodes > self.cap {
            return Err(RewriteError::Budget(format!(
                "more than {} chain nodes explored",
                self.cap
            )));
        }
        Ok(())
    }

    fn offer(&mut self, cand: Candidate) {
        let slot = match cand.kind {
            ReductionKind::LengthReducing => &mut self.best_length,
            ReductionKind::LexReducing => &mut self.best_lex,
        };
        let better = match slot {
            None => true,
            Some(cur) => {
                let (a, b) = match cand.kind {
                    ReductionKind::LengthReducing => (free_reduce(&cand.word), free_reduce(&cur.word)),
                    ReductionKind::LexReducing => (Word::new(cand.word.clone()), Word::new(cur.word.clone())),
                };
                match self.order.shortlex_unchecked(&a, &b) {
                    Ordering::Less => true,
                    Ordering::Equal => cand.steps.len() < cur.steps.len(),
                    Ordering::Greater => false,
                }
            }
        };
        if better {
            *slot = Some(cand);
        }
    }

    /// Applies τ at `span` of `cur`, classifies the result and continues the chain.
    fn extend(
        &mut self,
        cur: &[Letter],
        span: Range<usize>,
        c: CriticalWord,
        steps: &mut Vec<TraceStep>,
        direction: Direction,
    ) -> Result<(), RewriteError> {
        self.tick()?;
        let image = tau(&c);
        let pair = c.generators;
        let mut next = Vec::with_capacity(cur.len());
        next.extend_from_slice(&cur[..span.start]);
        next.extend_from_slice(&image);
        next.extend_from_slice(&cur[span.end..]);
        steps.push(TraceStep { span: span.clone(), critical: c, image });
        let (s, e) = (span.start, span.end);
        let right_cancel = e < next.len() && next[e - 1] == next[e].inverse();
        let left_cancel = s > 0 && next[s - 1] == next[s].inverse();
        if right_cancel || left_cancel || !is_freely_reduced(&next) {
            self.offer(Candidate {
                word: next,
                steps: steps.clone(),
                kind: ReductionKind::LengthReducing,
                tail: if right_cancel { Some(cur[e]) } else { None },
                direction,
            });
            steps.pop();
            return Ok(());
        }
        if direction == Direction::Leftward
            && self.order.lex_unchecked(&next, self.original) == Ordering::Less
        {
            self.offer(Candidate {
                word: next.clone(),
                steps: steps.clone(),
                kind: ReductionKind::LexReducing,
                tail: None,
                direction,
            });
        }
        match direction {
            Direction::Rightward => self.continue_right(&next, s..e, pair, steps)?,
            Direction::Leftward => self.continue_left(&next, s..e, pair, steps)?,
        }
        steps.pop();
        Ok(())
    }

    fn continue_right(
        &mut self,
        cur: &[Letter],
        block: Range<usize>,
        pair: (u16, u16),
        steps: &mut Vec<TraceStep>,
    ) -> Result<(), RewriteError> {
        let e = block.end;
        if e >= cur.len() || steps.len() >= self.original.len() {
            return Ok(());
        }
        let l = cur[e - 1];
        let c = cur[e].name();
        if c == pair.0 || c == pair.1 || self.graph.label(l.name(), c).is_none() {
            return Ok(());
        }
        let run = cur[block.clone()].iter().rev().take_while(|&&x| x == l).count();
        // w_i extends right while its letters stay on {name(l), c}
        let mut max_end = e;
        while max_end < cur.len() && (cur[max_end].name() == c || cur[max_end].name() == l.name()) {
            max_end += 1;
        }
        for j in 1..=run {
            for end in e + 1..=max_end {
                let span = e - j..end;
                if let Some(crit) = critical_in_graph(&cur[span.clone()], self.graph) {
                    self.extend(cur, span, crit, steps, Direction::Rightward)?;
                }
            }
        }
        Ok(())
    }

    fn continue_left(
        &mut self,
        cur: &[Letter],
        block: Range<usize>,
        pair: (u16, u16),
        steps: &mut Vec<TraceStep>,
    ) -> Result<(), RewriteError> {
        let s = block.start;
        if s == 0 || steps.len() >= self.original.len() {
            return Ok(());
        }
        let f = cur[s];
        let c = cur[s - 1].name();
        if c == pair.0 || c == pair.1 || self.graph.label(f.name(), c).is_none() {
            return Ok(());
        }
        let run = cur[block.clone()].iter().take_while(|&&x| x == f).count();
        let mut min_start = s;
        while min_start > 0 && (cur[min_start - 1].name() == c || cur[min_start - 1].name() == f.name()) {
            min_start -= 1;
        }
        for j in 1..=run {
            for start in (min_start..s).rev() {
                let span = start..s + j;
                if let Some(crit) = critical_in_graph(&cur[span.clone()], self.graph) {
                    self.extend(cur, span, crit, steps, Direction::Leftward)?;
                }
            }
        }
        Ok(())
    }
}

/// Normalizer and word-problem solver for one large presentation and one order.
#[derive(Debug, Clone)]
pub struct ShortlexEngine {
    graph: ArtinGraph,
    order: LexOrder,
    node_cap: usize,
}

impl ShortlexEngine {
    pub fn new(graph: ArtinGraph, order: LexOrder) -> Result<Self, RewriteError> {
        if let Some((u, v, m)) = graph.edges().into_iter().find(|&(_, _, m)| m < 3) {
            return Err(RewriteError::NotLarge(
                graph.vertex_name(u).into(),
                graph.vertex_name(v).into(),
                m,
            ));
        }
        if order.generator_count() != graph.vertex_count() {
            return Err(RewriteError::OrderMismatch {
                order: order.generator_count(),
                graph: graph.vertex_count(),
            });
        }
        Ok(ShortlexEngine { graph, order, node_cap: DEFAULT_NODE_CAP })
    }

    /// Engine under the graph's default order.
    pub fn with_default_order(graph: ArtinGraph) -> Result<Self, RewriteError> {
        let order = graph.default_order();
        ShortlexEngine::new(graph, order)
    }

    pub fn with_node_cap(mut self, cap: usize) -> Self {
        self.node_cap = cap;
        self
    }

    pub fn graph(&self) -> &ArtinGraph {
        &self.graph
    }

    pub fn order(&self) -> &LexOrder {
        &self.order
    }

    /// The same graph under another order.
    pub fn reordered(&self, order: LexOrder) -> ShortlexEngine {
        ShortlexEngine { graph: self.graph.clone(), order, node_cap: self.node_cap }
    }

    fn check_alphabet(&self, w: &[Letter]) -> Result<(), RewriteError> {
        match w.iter().find(|l| !self.order.contains(**l)) {
            Some(l) => Err(RewriteError::Word(WordError::AlphabetMismatch(*l))),
            None => Ok(()),
        }
    }

    fn search(
        &self,
        w: &[Letter],
        starts: &[(Range<usize>, CriticalWord)],
        directions: &[Direction],
    ) -> Result<(Option<ReductionTrace>, Option<ReductionTrace>), RewriteError> {
        let mut s = Search {
            graph: &self.graph,
            order: &self.order,
            original: w,
            nodes: 0,
            cap: self.node_cap,
            best_length: None,
            best_lex: None,
        };
        let mut steps = Vec::new();
        for &d in directions {
            for (span, c) in starts {
                s.extend(w, span.clone(), c.clone(), &mut steps, d)?;
            }
        }
        let len = s.best_length.take();
        let lex = s.best_lex.take();
        let to_trace = |c: Candidate| ReductionTrace {
            direction: c.direction,
            kind: c.kind,
            input: Word::new(w.to_vec()),
            tail: c.tail,
            output: free_reduce(&c.word),
            steps: c.steps,
        };
        Ok((len.map(to_trace), lex.map(to_trace)))
    }

    /// A rightward critical sequence ending in a free cancellation, if any; among several the one
    /// with shortlex-least output.
    pub fn search_rightward_length_reduction(&self, w: &[Letter]) -> Result<Option<ReductionTrace>, RewriteError> {
        self.check_alphabet(w)?;
        if !is_freely_reduced(w) {
            return Err(RewriteError::NotReduced);
        }
        let starts = find_critical_subwords(w, &self.graph);
        let (len, _) = self.search(w, &starts, &[Direction::Rightward])?;
        Ok(len)
    }

    /// A leftward critical sequence with freely reduced, lex-smaller output, if any; among several
    /// the one with lex-least output.
    pub fn search_leftward_lex_reduction(&self, w: &[Letter]) -> Result<Option<ReductionTrace>, RewriteError> {
        self.check_alphabet(w)?;
        if !is_freely_reduced(w) {
            return Err(RewriteError::NotReduced);
        }
        let starts = find_critical_subwords(w, &self.graph);
        let (_, lex) = self.search(w, &starts, &[Direction::Leftward])?;
        Ok(lex)
    }

    /// `sl(u·a)` for `u` already shortlex minimal.
    pub fn append(&self, u: &[Letter], a: Letter) -> Result<Word, RewriteError> {
        let mut budget = Budget::new(u.len() + 1, self.graph.vertex_count());
        let mut out = u.to_vec();
        self.push(&mut out, a, &mut budget, &mut None)?;
        Ok(Word::new(out))
    }

    fn push(
        &self,
        u: &mut Vec<Letter>,
        a: Letter,
        budget: &mut Budget,
        traces: &mut Option<Vec<ReductionTrace>>,
    ) -> Result<(), RewriteError> {
        if u.last() == Some(&a.inverse()) {
            u.pop();
            return Ok(());
        }
        u.push(a);
        let n = u.len();
        // rightward chains may start anywhere; leftward ones must contain the new letter
        let starts = find_critical_subwords(u, &self.graph);
        let suffix: Vec<_> = starts.iter().filter(|(s, _)| s.end == n).cloned().collect();
        let (len_r, _) = self.search(u, &starts, &[Direction::Rightward])?;
        let (len_l, lex) = self.search(u, &suffix, &[Direction::Leftward])?;
        let chosen = match (len_r, len_l) {
            (Some(r), Some(l)) => {
                if self.order.shortlex_unchecked(&l.output, &r.output) == Ordering::Less {
                    Some(l)
                } else {
                    Some(r)
                }
            }
            (r, l) => r.or(l).or(lex),
        };
        let Some(trace) = chosen else {
            return Ok(());
        };
        budget.spend(trace.steps.len())?;
        let result = trace.output.clone();
        if let Some(ts) = traces.as_mut() {
            ts.push(trace);
        }
        // everything before the first changed position is a prefix of a normal form;
        // re-append the rest so each step again starts from a normal form
        let keep = u.iter().zip(result.iter()).take_while(|(x, y)| x == y).count();
        u.truncate(keep);
        for &l in &result[keep..] {
            self.push(u, l, budget, traces)?;
        }
        Ok(())
    }

    fn run(&self, w: &[Letter], traces: &mut Option<Vec<ReductionTrace>>) -> Result<Word, RewriteError> {
        self.check_alphabet(w)?;
        let mut budget = Budget::new(w.len(), self.graph.vertex_count());
        let mut u = Vec::with_capacity(w.len());
        for &a in w {
            self.push(&mut u, a, &mut budget, traces)?;
        }
        Ok(Word::new(u))
    }

    /// The shortlex-least word equal to `w`.
    pub fn normalize(&self, w: &[Letter]) -> Result<Word, RewriteError> {
        self.run(w, &mut None)
    }

    /// As [`normalize`](Self::normalize), also returning every sequence applied, in order.
    pub fn normalize_traced(&self, w: &[Letter]) -> Result<(Word, Vec<ReductionTrace>), RewriteError> {
        let mut traces = Some(Vec::new());
        let out = self.run(w, &mut traces)?;
        Ok((out, traces.unwrap_or_default()))
    }

    pub fn words_equal(&self, u: &[Letter], v: &[Letter]) -> Result<bool, RewriteError> {
        Ok(self.normalize(u)? == self.normalize(v)?)
    }

    pub fn is_geodesic(&self, w: &[Letter]) -> Result<bool, RewriteError> {
        Ok(self.normalize(w)?.len() == w.len())
    }

    pub fn geodesic_length(&self, w: &[Letter]) -> Result<usize, RewriteError> {
        Ok(self.normalize(w)?.len())
    }
}

/// Caps the number of τ-moves applied during one normalization.
struct Budget {
    left: usize,
    cap: usize,
}

impl Budget {
    fn new(len: usize, vertices: usize) -> Budget {
        let cap = (len * len * vertices * vertices).max(64);
        Budget { left: cap, cap }
    }

    fn spend(&mut self, moves: usize) -> Result<(), RewriteError> {
        if moves > self.left {
            return Err(RewriteError::Budget(format!("more than {} τ-moves applied", self.cap)));
        }
        self.left -= moves;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(g: ArtinGraph) -> ShortlexEngine {
        ShortlexEngine::with_default_order(g).unwrap()
    }

    #[test]
    fn critical_subwords_of_example() {
        let g = ArtinGraph::triangle(4, 4, 4);
        let w = g.parse_word("c b c a b a c b c b").unwrap();
        let found = find_critical_subwords(&w, &g);
        assert!(found.iter().any(|(s, _)| *s == (6..10)));
        let w = g.parse_word("a b a b c").unwrap();
        assert!(find_critical_subwords(&w, &g).iter().any(|(s, _)| *s == (0..4)));
        let w = g.parse_word("a c b^-1").unwrap();
        assert!(find_critical_subwords(&w, &g).is_empty());
    }

    #[test]
    fn leftward_example() {
        let e = engine(ArtinGraph::triangle(4, 4, 4));
        let g = e.graph().clone();
        let w = g.parse_word("c b c a b a c b c b").unwrap();
        let t = e.search_leftward_lex_reduction(&w).unwrap().unwrap();
        assert_eq!(g.render_word(&t.output), "b c b c a b a c b c");
        assert_eq!(t.steps.len(), 3);
        assert_eq!(t.replay(&g).unwrap(), t.output);
        assert!(e.search_leftward_lex_reduction(&g.parse_word("a b a b").unwrap()).unwrap().is_none());
        let t = e.search_leftward_lex_reduction(&g.parse_word("b a b a").unwrap()).unwrap().unwrap();
        assert_eq!(g.render_word(&t.output), "a b a b");
    }

    #[test]
    fn rightward_example() {
        let e = engine(ArtinGraph::triangle(4, 4, 4));
        let g = e.graph().clone();
        let w = g.parse_word("a^-1 b^3 a b c^-1 a^2 c b^-1 a b a").unwrap();
        let t = e.search_rightward_length_reduction(&w).unwrap().unwrap();
        assert_eq!(t.output, g.parse_word("b a b^3 c a^2 c^-1 b a b^-1").unwrap());
        assert_eq!(t.steps.len(), 3);
        assert_eq!(t.tail, Some(Letter::pos(0)));
        assert!(e.search_rightward_length_reduction(&g.parse_word("a b a b").unwrap()).unwrap().is_none());
        assert_eq!(
            e.search_rightward_length_reduction(&g.parse_word("a b a b b^-1").unwrap()),
            Err(RewriteError::NotReduced)
        );
    }

    #[test]
    fn normal_forms() {
        let e = engine(ArtinGraph::dihedral(Some(4)));
        let g = e.graph().clone();
        assert_eq!(e.normalize(&g.parse_word("a a^-1 b").unwrap()).unwrap(), g.parse_word("b").unwrap());
        assert_eq!(e.normalize(&g.parse_word("b a b a").unwrap()).unwrap(), g.parse_word("a b a b").unwrap());
        assert!(e
            .words_equal(&g.parse_word("b^2 a b a a b a").unwrap(), &g.parse_word("a^2 b a b b a b").unwrap())
            .unwrap());
        assert!(!e.is_geodesic(&g.parse_word("a a^-1").unwrap()).unwrap());
        let t = engine(ArtinGraph::triangle(4, 4, 4));
        let tg = t.graph().clone();
        let w = tg.parse_word("a^-1 b^3 a b c^-1 a^2 c b^-1 a b a").unwrap();
        assert_eq!(t.normalize(&w).unwrap().len(), 12);
    }

    #[test]
    fn rejects_small_labels() {
        assert!(matches!(
            ShortlexEngine::with_default_order(ArtinGraph::triangle(2, 4, 4)),
            Err(RewriteError::NotLarge(..))
        ));
    }

    #[test]
    fn rendered_traces_replay() {
        let e = engine(ArtinGraph::triangle(4, 4, 4));
        let g = e.graph().clone();
        let w = g.parse_word("c b c a b a c b c b a^-1 b a").unwrap();
        let (out, traces) = e.normalize_traced(&w).unwrap();
        let text = render_traces(&g, &w, &traces, &out);
        assert_eq!(replay_rendered(&g, &text).unwrap(), out);
        let tampered = text.replace("result:", "result: a");
        assert!(replay_rendered(&g, &tampered).is_err());
    }
}
