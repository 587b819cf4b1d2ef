//! Engine-independent ground truth: relator-move search, Cayley balls by union-find,
//! and exact dihedral balls from Garside forms. Nothing here calls the rewriting engine.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::dihedral::{garside_normal_form, GarsideForm};
use crate::graph::ArtinGraph;
use crate::linear::LinearRep;
use crate::words::{alternating_unchecked, free_reduce, Letter, LexOrder, Side, Word};

/// Default cap on words visited by a ball construction.
pub const DEFAULT_BALL_CAP: usize = 10_000_000;
/// Default cap on words visited by one equality search.
pub const DEFAULT_SEARCH_CAP: usize = 3_000_000;
const MAX_PACKED: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("ball too large: more than {0} words")]
    BallTooLarge(usize),
    #[error("oracle supports at most 8 generators and words of length {MAX_PACKED}")]
    Unsupported,
    #[error("element of length {0} lies outside the ball of radius {1}")]
    OutsideBall(usize, usize),
    #[error("Garside balls need a single finite edge on two vertices")]
    NotDihedral,
}

/// Words packed into a `u128`: four bits per letter index, length in the top byte.
pub(crate) fn pack(w: &[Letter]) -> u128 {
    debug_assert!(w.len() <= MAX_PACKED);
    let mut k: u128 = (w.len() as u128) << 120;
    for (i, l) in w.iter().enumerate() {
        k |= (l.index() as u128) << (4 * i);
    }
    k
}

pub(crate) fn unpack(k: u128) -> Word {
    let len = (k >> 120) as usize;
    (0..len).map(|i| Letter::from_index(((k >> (4 * i)) & 0xf) as usize)).collect()
}

/// Subword replacements `s -> c⁻¹` for every cyclic rotation `s·c` of every relator and its inverse.
#[derive(Debug, Clone)]
pub struct MoveTable {
    pieces: HashMap<u128, Vec<Word>>,
    max_piece: usize,
}

impl MoveTable {
    pub fn new(graph: &ArtinGraph) -> Result<MoveTable, OracleError> {
        if graph.vertex_count() > 8 {
            return Err(OracleError::Unsupported);
        }
        let mut pieces: HashMap<u128, Vec<Word>> = HashMap::new();
        let mut max_piece = 0;
        for (u, v, m) in graph.edges() {
            let m = m as usize;
            let (x, y) = (Letter::pos(u), Letter::pos(v));
            let lhs = alternating_unchecked(x, y, m, Side::Left);
            let rhs = alternating_unchecked(y, x, m, Side::Left);
            let rel = lhs.concat(&rhs.inverse());
            for r in [rel.clone(), rel.inverse()] {
                let n = r.len();
                for rot in 0..n {
                    let rotated: Vec<Letter> = r[rot..].iter().chain(&r[..rot]).copied().collect();
                    for cut in 0..=n {
                        let s = &rotated[..cut];
                        let c = Word::new(rotated[cut..].to_vec());
                        let rep = c.inverse();
                        let e = pieces.entry(pack(s)).or_default();
                        if !e.contains(&rep) {
                            e.push(rep);
                        }
                    }
                }
                max_piece = max_piece.max(n);
            }
        }
        Ok(MoveTable { pieces, max_piece })
    }

    /// Every freely reduced word of length at most `budget` reachable from `w` by one
    /// replacement of a subword of length in `min_piece..=max_piece`.
    pub fn neighbors(&self, w: &[Letter], min_piece: usize, budget: usize, out: &mut Vec<Word>) {
        out.clear();
        for i in 0..=w.len() {
            let top = self.max_piece.min(w.len() - i);
            for len in min_piece..=top {
                let Some(reps) = self.pieces.get(&pack(&w[i..i + len])) else {
                    continue;
                };
                for rep in reps {
                    if w.len() - len + rep.len() > budget + 2 * rep.len() {
                        continue;
                    }
                    let mut v = Vec::with_capacity(w.len() + rep.len());
                    v.extend_from_slice(&w[..i]);
                    v.extend_from_slice(rep);
                    v.extend_from_slice(&w[i + len..]);
                    let v = free_reduce(&v);
                    if v.len() <= budget && v.letters() != w {
                        out.push(v);
                    }
                }
            }
        }
    }
}

/// Exponent sums per connected component of the odd-labeled edges: a homomorphism to ℤⁿ.
pub fn abelian_image(w: &[Letter], graph: &ArtinGraph) -> Vec<i64> {
    let n = graph.vertex_count();
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            c[x] = c[c[x]];
            x = c[x];
        }
        x
    }
    for (u, v, m) in graph.edges() {
        if m % 2 == 1 {
            let (a, b) = (root(&mut comp, u as usize), root(&mut comp, v as usize));
            comp[a] = b;
        }
    }
    let mut out = vec![0i64; n];
    for l in w {
        let r = root(&mut comp, l.name() as usize);
        out[r] += if l.is_positive() { 1 } else { -1 };
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistinctBy {
    /// The abelianization separates the words.
    Invariant,
    /// The words lie in different components of the move graph on words of length at most the budget.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Carries a chain of words, each one move from the next.
    Equal(Vec<Word>),
    Distinct(DistinctBy),
    Inconclusive,
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal(_))
    }
}

pub fn relator_equal(u: &[Letter], v: &[Letter], graph: &ArtinGraph, budget: usize) -> Result<Verdict, OracleError> {
    relator_equal_capped(u, v, graph, budget, DEFAULT_SEARCH_CAP)
}

/// Bidirectional best-first search over freely reduced words of length at most `budget`,
/// always expanding the shortest pending word.
pub fn relator_equal_capped(
    u: &[Letter],
    v: &[Letter],
    graph: &ArtinGraph,
    budget: usize,
    cap: usize,
) -> Result<Verdict, OracleError> {
    if abelian_image(u, graph) != abelian_image(v, graph) {
        return Ok(Verdict::Distinct(DistinctBy::Invariant));
    }
    let (u, v) = (free_reduce(u), free_reduce(v));
    if u == v {
        return Ok(Verdict::Equal(vec![u]));
    }
    let budget = budget.max(u.len()).max(v.len());
    if budget > MAX_PACKED {
        return Err(OracleError::Unsupported);
    }
    let table = MoveTable::new(graph)?;
    let mut seen: [HashMap<u128, Option<u128>>; 2] = [HashMap::new(), HashMap::new()];
    let mut heaps: [BinaryHeap<Reverse<(usize, u64, u128)>>; 2] = [BinaryHeap::new(), BinaryHeap::new()];
    let mut seq = 0u64;
    for (side, w) in [(0, &u), (1, &v)] {
        seen[side].insert(pack(w), None);
        heaps[side].push(Reverse((w.len(), seq, pack(w))));
        seq += 1;
    }
    let mut buf = Vec::new();
    loop {
        let side = match (heaps[0].peek(), heaps[1].peek()) {
            (None, _) | (_, None) => return Ok(Verdict::Distinct(DistinctBy::Exhausted)),
            (Some(a), Some(b)) => usize::from(b.0 .0 < a.0 .0),
        };
        let Reverse((_, _, key)) = heaps[side].pop().expect("peeked");
        let w = unpack(key);
        table.neighbors(&w, 0, budget, &mut buf);
        for n in buf.drain(..) {
            let nk = pack(&n);
            if seen[side].contains_key(&nk) {
                continue;
            }
            seen[side].insert(nk, Some(key));
            if seen[1 - side].contains_key(&nk) {
                let mut left = chain(&seen[side], nk);
                let mut right = chain(&seen[1 - side], nk);
                left.reverse();
                right.remove(0);
                left.extend(right);
                if side == 1 {
                    left.reverse();
                }
                return Ok(Verdict::Equal(left));
            }
            heaps[side].push(Reverse((n.len(), seq, nk)));
            seq += 1;
        }
        if seen[0].len() + seen[1].len() > cap {
            return Ok(Verdict::Inconclusive);
        }
    }
}

fn chain(parents: &HashMap<u128, Option<u128>>, mut k: u128) -> Vec<Word> {
    let mut out = vec![unpack(k)];
    while let Some(Some(p)) = parents.get(&k) {
        out.push(unpack(*p));
        k = *p;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallMethod {
    /// Union-find over freely reduced words of length at most `budget` joined by relator moves.
    RelatorMoves { budget: usize },
    GarsideDihedral,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallClass {
    pub id: usize,
    /// Shortlex-least member under the graph's default order.
    pub canonical: Word,
    pub geodesics: Vec<Word>,
}

impl BallClass {
    pub fn geodesic_length(&self) -> usize {
        self.canonical.len()
    }
}

/// Every group element of geodesic length at most `radius`, with all its geodesic words.
#[derive(Debug, Clone)]
pub struct Ball {
    graph_name: String,
    radius: usize,
    method: BallMethod,
    classes: Vec<BallClass>,
    index: HashMap<u128, u32>,
    unresolved: Vec<(usize, usize)>,
}

/// Freely reduced words of length at most `max_len`, in shortlex order.
fn reduced_words(order: &LexOrder, max_len: usize, cap: usize) -> Result<Vec<Word>, OracleError> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in order.letters() {
                if w.last() == Some(l.inverse()) {
                    continue;
                }
                let mut v = w.letters().to_vec();
                v.push(l);
                next.push(Word::new(v));
            }
        }
        out.extend(next.iter().cloned());
        if out.len() > cap {
            return Err(OracleError::BallTooLarge(cap));
        }
        layer = next;
    }
    Ok(out)
}

/// Move components at a fixed budget can split one element into several classes.
/// Classes whose images under [`LinearRep`] agree are compared by a deeper relator
/// search and merged on success; pairs the search cannot settle are returned.
fn merge_by_image(graph: &ArtinGraph, words: &[Word], radius: usize, uf: &mut UnionFind) -> Vec<(Word, Word)> {
    let rep = LinearRep::new(graph);
    let mut first: HashMap<u32, usize> = HashMap::new();
    for (i, w) in words.iter().enumerate() {
        if w.len() > radius {
            break;
        }
        first.entry(uf.find(i as u32)).or_insert(i);
    }
    let mut reps: Vec<usize> = first.into_values().collect();
    reps.sort_unstable();
    let images: Vec<Vec<u64>> = reps.par_iter().map(|&i| rep.image(&words[i])).collect();
    let mut groups: HashMap<&[u64], Vec<usize>> = HashMap::new();
    for (i, img) in reps.iter().zip(&images) {
        groups.entry(img.as_slice()).or_default().push(*i);
    }
    let max_label = graph.edges().iter().map(|e| e.2 as usize).max().unwrap_or(0);
    let budget = (radius + 2 * max_label).min(MAX_PACKED);
    let pending: Vec<(usize, usize)> = groups
        .values()
        .filter(|g| g.len() > 1)
        .flat_map(|g| g[1..].iter().map(move |&j| (g[0], j)))
        .collect();
    let verdicts: Vec<Verdict> = pending
        .par_iter()
        .map(|&(a, b)| {
            relator_equal_capped(&words[a], &words[b], graph, budget, 400_000).unwrap_or(Verdict::Inconclusive)
        })
        .collect();
    let mut unresolved = Vec::new();
    for ((a, b), v) in pending.into_iter().zip(verdicts) {
        if v.is_equal() {
            uf.union(a as u32, b as u32);
        } else {
            unresolved.push((words[a].clone(), words[b].clone()));
        }
    }
    unresolved
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

impl Ball {
    /// Garside classes for dihedral graphs, relator moves with `radius + 2` budget otherwise.
    pub fn enumerate(graph: &ArtinGraph, radius: usize) -> Result<Ball, OracleError> {
        let method = if graph.vertex_count() == 2 && graph.label(0, 1).is_some() {
            BallMethod::GarsideDihedral
        } else {
            BallMethod::RelatorMoves { budget: radius + 2 }
        };
        Ball::enumerate_with(graph, radius, method, DEFAULT_BALL_CAP)
    }

    pub fn enumerate_with(graph: &ArtinGraph, radius: usize, method: BallMethod, cap: usize) -> Result<Ball, OracleError> {
        let order = graph.default_order();
        let limit = match method {
            BallMethod::RelatorMoves { budget } => budget.max(radius),
            BallMethod::GarsideDihedral => radius,
        };
        if limit > MAX_PACKED || graph.vertex_count() > 8 {
            return Err(OracleError::Unsupported);
        }
        let words = reduced_words(&order, limit, cap)?;
        let mut unresolved = Vec::new();
        // class root of every word, words in shortlex order
        let roots: Vec<u32> = match method {
            BallMethod::GarsideDihedral => {
                let m = graph.label(0, 1).ok_or(OracleError::NotDihedral)?;
                if graph.vertex_count() != 2 {
                    return Err(OracleError::NotDihedral);
                }
                let mut first: HashMap<GarsideForm, u32> = HashMap::new();
                let forms: Vec<GarsideForm> = words
                    .par_iter()
                    .map(|w| garside_normal_form(w, (0, 1), Some(m)).expect("two generators"))
                    .collect();
                forms
                    .into_iter()
                    .enumerate()
                    .map(|(i, f)| *first.entry(f).or_insert(i as u32))
                    .collect()
            }
            BallMethod::RelatorMoves { budget } => {
                let table = MoveTable::new(graph)?;
                let index: HashMap<u128, u32> =
                    words.iter().enumerate().map(|(i, w)| (pack(w), i as u32)).collect();
                let mut uf = UnionFind::new(words.len());
                let index = &index;
                for chunk in words.chunks(1 << 16) {
                    let edges: Vec<(u32, u32)> = chunk
                        .par_iter()
                        .flat_map_iter(|w| {
                            let mut buf = Vec::new();
                            table.neighbors(w, 1, budget, &mut buf);
                            let from = index[&pack(w)];
                            buf.into_iter().map(move |n| (from, index[&pack(&n)]))
                        })
                        .collect();
                    for (a, b) in edges {
                        uf.union(a, b);
                    }
                }
                unresolved = merge_by_image(graph, &words, radius, &mut uf);
                (0..words.len() as u32).map(|i| uf.find(i)).collect()
            }
        };
        let mut class_of_root: HashMap<u32, u32> = HashMap::new();
        let mut classes: Vec<BallClass> = Vec::new();
        let mut index = HashMap::new();
        for (w, root) in words.iter().zip(roots) {
            if w.len() > radius {
                continue;
            }
            let id = *class_of_root.entry(root).or_insert_with(|| {
                classes.push(BallClass { id: classes.len(), canonical: w.clone(), geodesics: Vec::new() });
                (classes.len() - 1) as u32
            });
            let class = &mut classes[id as usize];
            if w.len() == class.canonical.len() {
                class.geodesics.push(w.clone());
            }
            index.insert(pack(w), id);
        }
        let unresolved = unresolved
            .into_iter()
            .map(|(a, b): (Word, Word)| (index[&pack(&a)] as usize, index[&pack(&b)] as usize))
            .collect();
        Ok(Ball { graph_name: graph.name().to_string(), radius, method, classes, index, unresolved })
    }

    /// Pairs of class ids with equal linear images that no relator search could join.
    /// Empty means every class split is certified by the representation.
    pub fn unresolved(&self) -> &[(usize, usize)] {
        &self.unresolved
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn method(&self) -> BallMethod {
        self.method
    }

    pub fn classes(&self) -> &[BallClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// The class of a word of length at most the radius.
    pub fn class_of(&self, w: &[Letter]) -> Result<&BallClass, OracleError> {
        let w = free_reduce(w);
        if w.len() > self.radius {
            return Err(OracleError::OutsideBall(w.len(), self.radius));
        }
        let id = self.index.get(&pack(&w)).ok_or(OracleError::Unsupported)?;
        Ok(&self.classes[*id as usize])
    }

    pub fn geodesics_of(&self, w: &[Letter]) -> Result<&[Word], OracleError> {
        Ok(&self.class_of(w)?.geodesics)
    }

    /// Class id of every freely reduced word of length at most the radius.
    pub fn members(&self) -> impl Iterator<Item = (Word, usize)> + '_ {
        self.index.iter().map(|(k, id)| (unpack(*k), *id as usize))
    }

    /// `class <id>: <canonical>` followed by indented geodesic members.
    pub fn dump(&self, graph: &ArtinGraph) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "ball graph {} radius {} classes {}",
            self.graph_name,
            self.radius,
            self.classes.len()
        );
        for (a, b) in &self.unresolved {
            let _ = writeln!(s, "unresolved: {a} {b}");
        }
        for c in &self.classes {
            let _ = writeln!(s, "class {}: {}", c.id, graph.display_word(&c.canonical));
            for g in &c.geodesics {
                let _ = writeln!(s, "  {}", graph.display_word(g));
            }
        }
        s
    }
}
