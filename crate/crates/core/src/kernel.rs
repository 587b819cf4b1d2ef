//! Kernel of the retraction killing one generator `r` of an even Artin group: the
//! relations among the conjugates `r^g`, the prefix-stripping descent, and the bounded
//! elimination that leaves a free basis, plus the driver that repeats it down a tower.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::geodesic::{has_geodesic_prefix, GeodesicError};
use crate::graph::ArtinGraph;
use crate::oracle::{relator_equal_capped, OracleError, Verdict};
use crate::rewriting::{RewriteError, ShortlexEngine};
use crate::words::{free_reduce, Letter, LexOrder, Word, WordError};

/// Iterations of the set map before the descent is declared stuck.
pub const DESCENT_CAP: usize = 1000;

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("half-label must be at least 1, got {0}")]
    BadHalfLabel(u32),
    #[error("{0}")]
    Unsupported(String),
    #[error("{h} is not in the {sign} set of vertex {vertex}")]
    NotInOmega { h: String, vertex: String, sign: Sign },
    #[error("descent from {0} did not reach the complement within {DESCENT_CAP} steps")]
    DescentStuck(String),
    #[error("soundness alarm: {0}")]
    SoundnessAlarm(String),
    #[error("order {0} does not put each generator before its inverse with neighbors first by half-label")]
    IncompatibleOrder(String),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Word(#[from] WordError),
}

type Result<T> = std::result::Result<T, KernelError>;

/// Prefix exponents for a neighbor joined to `r` by label `2k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexParams {
    pub k: u32,
    pub p_plus: i64,
    pub p_minus: i64,
    pub n_minus: i64,
    pub n_plus: i64,
}

pub fn vertex_params(k: u32) -> Result<VertexParams> {
    if k < 1 {
        return Err(KernelError::BadHalfLabel(k));
    }
    let k64 = k as i64;
    let p_plus = k64 / 2 + 1;
    let n_minus = -((k64 - 1) / 2 + 1);
    Ok(VertexParams { k, p_plus, p_minus: p_plus - k64, n_minus, n_plus: k64 + n_minus })
}

/// Deletes `r^{±1}` and free-reduces.
pub fn psi(w: &[Letter], r: u16) -> Word {
    let kept: Vec<Letter> = w.iter().copied().filter(|l| l.name() != r).collect();
    free_reduce(&kept)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn parse(s: &str) -> Option<Sign> {
        match s {
            "+" | "plus" => Some(Sign::Plus),
            "-" | "minus" => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighbor {
    pub vertex: u16,
    pub params: VertexParams,
}

/// `r^{conjugator}`; the conjugator is a shortlex word of the subgroup without `r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelGenerator {
    pub conjugator: Word,
}

/// One instance of the rewritten edge relation at `base`: `r^{lhs} = Π (r^{g})^{±1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationInstance {
    pub base: Word,
    pub vertex: u16,
    pub sign: Sign,
    pub lhs: KernelGenerator,
    pub rhs: Vec<(KernelGenerator, i8)>,
}

impl RelationInstance {
    /// Both sides as words of the whole group, `r^g` read as `g⁻¹ r g`.
    pub fn flatten(&self, r: u16) -> (Word, Word) {
        let conj = |g: &Word, e: i8| {
            let rl = if e > 0 { Letter::pos(r) } else { Letter::neg(r) };
            let mut v = g.inverse().into_letters();
            v.push(rl);
            v.extend_from_slice(g);
            v
        };
        let lhs = Word::new(conj(&self.lhs.conjugator, 1));
        let rhs: Vec<Letter> = self.rhs.iter().flat_map(|(g, e)| conj(&g.conjugator, *e)).collect();
        (lhs, Word::new(rhs))
    }

    pub fn render(&self, graph: &ArtinGraph) -> String {
        let gen = |g: &KernelGenerator| match g.conjugator.is_empty() {
            true => "r".to_string(),
            false => format!("r^({})", graph.render_word(&g.conjugator)),
        };
        let rhs: Vec<String> = self
            .rhs
            .iter()
            .map(|(g, e)| if *e > 0 { gen(g) } else { format!("{}^-1", gen(g)) })
            .collect();
        format!("{} = {}", gen(&self.lhs), rhs.join(" "))
    }
}

/// How a relation instance was checked in the whole group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verification {
    Engine,
    Oracle(Verdict),
}

/// Conjugation-invariant shortening: free and cyclic reduction.
fn cyclic_reduce(w: &[Letter]) -> Word {
    let w = free_reduce(w);
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == w[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    Word::new(w[lo..hi].to_vec())
}

/// Checks `lhs · rhs⁻¹ = 1` in the whole group. On a large graph the engine decides it.
/// Otherwise every conjugator `c` is rewritten as `sl₁(c·g⁻¹)·g` in the subgroup without
/// `r`, with `g = b^{-lead}·base`; the relation then holds iff its
/// instance at `g = ε` does, and that short word goes to relator search.
pub fn verify_relation(graph: &ArtinGraph, rel: &RelationInstance, r: u16, budget: usize) -> Result<Verification> {
    let (lhs, rhs) = rel.flatten(r);
    let word = lhs.concat(&rhs.inverse());
    if graph.is_large() {
        let engine = ShortlexEngine::with_default_order(graph.clone())?;
        if !engine.normalize(&word)?.is_empty() {
            return Err(KernelError::SoundnessAlarm(format!(
                "relation {} fails in {}",
                rel.render(graph),
                graph.name()
            )));
        }
        return Ok(Verification::Engine);
    }
    let (sub, old_ids) = graph.without(r);
    let to_sub = |w: &[Letter]| -> Word {
        w.iter()
            .map(|l| l.with_name(old_ids.iter().position(|&o| o == l.name()).expect("conjugators avoid r") as u16))
            .collect()
    };
    let to_whole = |w: &[Letter]| -> Word { w.iter().map(|l| l.with_name(old_ids[l.name() as usize])).collect() };
    let engine = ShortlexEngine::with_default_order(sub)?;
    let half = graph.label(r, rel.vertex).ok_or_else(|| KernelError::Unsupported("relation vertex is not a neighbor".into()))? / 2;
    let p = vertex_params(half)?;
    let lead = if rel.sign == Sign::Plus { p.p_plus } else { p.n_minus };
    let g_inv = engine.normalize(&to_sub(&Word::power(rel.vertex, -lead).concat(&rel.base)))?.inverse();
    let shift = |c: &KernelGenerator| -> Result<KernelGenerator> {
        Ok(KernelGenerator { conjugator: to_whole(&engine.normalize(&to_sub(&c.conjugator).concat(&g_inv))?) })
    };
    let base = RelationInstance {
        base: Word::empty(),
        vertex: rel.vertex,
        sign: rel.sign,
        lhs: shift(&rel.lhs)?,
        rhs: rel.rhs.iter().map(|(c, e)| Ok((shift(c)?, *e))).collect::<Result<_>>()?,
    };
    let (lhs, rhs) = base.flatten(r);
    let core = cyclic_reduce(&lhs.concat(&rhs.inverse()));
    let verdict = relator_equal_capped(&core, &[], graph, budget.max(core.len()), 2_000_000)?;
    if !verdict.is_equal() {
        return Err(KernelError::SoundnessAlarm(format!(
            "relation {} not confirmed by relator search: {verdict:?}",
            rel.render(graph)
        )));
    }
    Ok(Verification::Oracle(verdict))
}

/// The splitting `G = G₁ ⋉ K` at a vertex `r`; all subgroup computations use the
/// engine on the graph with `r`'s edges removed.
#[derive(Debug, Clone)]
pub struct Retraction {
    graph: ArtinGraph,
    r: u16,
    sub: ShortlexEngine,
    neighbors: Vec<Neighbor>,
}

/// Neighbors of `r` first by half-label then name, then the other vertices, then `r`;
/// each generator before its inverse.
pub fn polyfree_order(graph: &ArtinGraph, r: u16) -> LexOrder {
    let mut nbrs = graph.neighbors(r);
    nbrs.sort_by_key(|&v| (graph.label(r, v), graph.vertex_name(v).to_string()));
    let mut rest: Vec<u16> = (0..graph.vertex_count() as u16)
        .filter(|&v| v != r && !nbrs.contains(&v))
        .collect();
    rest.sort_by_key(|&v| graph.vertex_name(v).to_string());
    let letters = nbrs
        .into_iter()
        .chain(rest)
        .chain([r])
        .flat_map(|v| [Letter::pos(v), Letter::neg(v)])
        .collect();
    LexOrder::from_letters(letters).expect("permutation of the alphabet")
}

impl Retraction {
    /// `order` defaults to [`polyfree_order`].
    pub fn new(graph: &ArtinGraph, r: u16, order: Option<LexOrder>) -> Result<Retraction> {
        if r as usize >= graph.vertex_count() {
            return Err(KernelError::Unsupported(format!("no vertex {r}")));
        }
        if let Some((u, v, m)) = graph.edges().into_iter().find(|e| e.2 % 2 == 1) {
            return Err(KernelError::Unsupported(format!(
                "odd label {m} on {}-{}: killing a generator is not a retraction",
                graph.vertex_name(u),
                graph.vertex_name(v)
            )));
        }
        let sub_graph = graph.isolate(r);
        if let Some((u, v, m)) = sub_graph.edges().into_iter().find(|e| e.2 < 4) {
            return Err(KernelError::Unsupported(format!(
                "removing {} leaves edge {}-{} with label {m}, not large",
                graph.vertex_name(r),
                graph.vertex_name(u),
                graph.vertex_name(v)
            )));
        }
        let order = order.unwrap_or_else(|| polyfree_order(graph, r));
        let sub = ShortlexEngine::new(sub_graph, order)?;
        let mut neighbors = Vec::new();
        for v in graph.neighbors(r) {
            let label = graph.label(r, v).expect("neighbor");
            neighbors.push(Neighbor { vertex: v, params: vertex_params(label / 2)? });
        }
        neighbors.sort_by_key(|n| sub.order().rank(Letter::pos(n.vertex)).unwrap_or(u32::MAX));
        Ok(Retraction { graph: graph.clone(), r, sub, neighbors })
    }

    pub fn graph(&self) -> &ArtinGraph {
        &self.graph
    }

    pub fn removed(&self) -> u16 {
        self.r
    }

    pub fn neighbors(&self) -> &[Neighbor] {
        &self.neighbors
    }

    /// Engine for the subgroup generated by every vertex but `r`.
    pub fn subgroup_engine(&self) -> &ShortlexEngine {
        &self.sub
    }

    pub fn order(&self) -> &LexOrder {
        self.sub.order()
    }

    /// True when the order is polyfree-compatible and lists neighbors first, by half-label.
    pub fn order_is_elimination_ready(&self) -> bool {
        let order = self.order();
        if !order.is_polyfree_compatible() {
            return false;
        }
        let ranks: Vec<(u32, u32)> = self
            .neighbors
            .iter()
            .map(|n| (order.rank(Letter::pos(n.vertex)).unwrap_or(u32::MAX), n.params.k))
            .collect();
        let max_nbr = ranks.iter().map(|r| r.0).max();
        let others_after = (0..self.graph.vertex_count() as u16)
            .filter(|&v| v != self.r && !self.neighbors.iter().any(|n| n.vertex == v))
            .all(|v| max_nbr.is_none_or(|m| order.rank(Letter::pos(v)).unwrap_or(0) > m));
        others_after && ranks.windows(2).all(|w| w[0].1 <= w[1].1)
    }

    fn neighbor(&self, v: u16) -> Result<&Neighbor> {
        self.neighbors.iter().find(|n| n.vertex == v).ok_or_else(|| {
            KernelError::Unsupported(format!("{} is not joined to {}", self.graph.vertex_name(v), self.name_r()))
        })
    }

    fn name_r(&self) -> &str {
        self.graph.vertex_name(self.r)
    }

    fn check_subgroup_word(&self, g: &[Letter]) -> Result<()> {
        if g.iter().any(|l| l.name() == self.r) {
            return Err(KernelError::Unsupported(format!(
                "{} involves the removed generator {}",
                self.graph.render_word(g),
                self.name_r()
            )));
        }
        Ok(())
    }

    pub fn normalize(&self, g: &[Letter]) -> Result<Word> {
        self.check_subgroup_word(g)?;
        Ok(self.sub.normalize(g)?)
    }

    fn prefix_exponent(n: &Neighbor, sign: Sign) -> i64 {
        match sign {
            Sign::Plus => n.params.p_plus,
            Sign::Minus => n.params.n_minus,
        }
    }

    pub fn in_omega(&self, g: &[Letter], vertex: u16, sign: Sign) -> Result<bool> {
        self.check_subgroup_word(g)?;
        let n = self.neighbor(vertex)?;
        let prefix = Word::power(vertex, Self::prefix_exponent(n, sign));
        Ok(has_geodesic_prefix(&self.sub, g, &prefix)?)
    }

    /// Every `(neighbor, sign)` whose prefix set contains `g`.
    pub fn omega_membership(&self, g: &[Letter]) -> Result<Vec<(u16, Sign)>> {
        let mut out = Vec::new();
        for n in &self.neighbors {
            for sign in [Sign::Plus, Sign::Minus] {
                if self.in_omega(g, n.vertex, sign)? {
                    out.push((n.vertex, sign));
                }
            }
        }
        Ok(out)
    }

    /// Strips `b^{±k}` from the front: `sl(b^{∓k} g)`.
    pub fn rho(&self, g: &[Letter], vertex: u16, sign: Sign) -> Result<Word> {
        if !self.in_omega(g, vertex, sign)? {
            return Err(KernelError::NotInOmega {
                h: self.graph.display_word(g),
                vertex: self.graph.vertex_name(vertex).to_string(),
                sign,
            });
        }
        let k = self.neighbor(vertex)?.params.k as i64;
        let e = if sign == Sign::Plus { -k } else { k };
        Ok(self.sub.normalize(&Word::power(vertex, e).concat(&Word::new(g.to_vec())))?)
    }

    /// Images of every member under every applicable strip; members outside all prefix sets stay.
    pub fn rho_set(&self, set: &[Word]) -> Result<Vec<Word>> {
        let mut out = BTreeSet::new();
        for g in set {
            let g = self.normalize(g)?;
            let ms = self.omega_membership(&g)?;
            for &(v, s) in &ms {
                out.insert(self.rho(&g, v, s)?);
            }
            if ms.is_empty() {
                out.insert(g);
            }
        }
        Ok(self.sorted(out))
    }

    fn sorted(&self, set: BTreeSet<Word>) -> Vec<Word> {
        let mut v: Vec<Word> = set.into_iter().collect();
        v.sort_by(|a, b| self.order().shortlex_compare(a, b).expect("subgroup alphabet"));
        v
    }

    /// Iterates [`Retraction::rho_set`] until no member has a stripping prefix. Elements
    /// already outside every prefix set have `alpha = 0`.
    pub fn delta(&self, g: &[Letter]) -> Result<(Vec<Word>, usize)> {
        let mut set = vec![self.normalize(g)?];
        for alpha in 0..=DESCENT_CAP {
            let mut done = true;
            for h in &set {
                if !self.omega_membership(h)?.is_empty() {
                    done = false;
                    break;
                }
            }
            if done {
                return Ok((set, alpha));
            }
            set = self.rho_set(&set)?;
        }
        Err(KernelError::DescentStuck(self.graph.display_word(g)))
    }

    /// The relation attached to `h` and one of its prefix sets.
    pub fn instantiate_relation(&self, h: &[Letter], vertex: u16, sign: Sign) -> Result<RelationInstance> {
        let h = self.normalize(h)?;
        if !self.in_omega(&h, vertex, sign)? {
            return Err(KernelError::NotInOmega {
                h: self.graph.display_word(&h),
                vertex: self.graph.vertex_name(vertex).to_string(),
                sign,
            });
        }
        let n = *self.neighbor(vertex)?;
        let lead = Self::prefix_exponent(&n, sign);
        let g = self.sub.normalize(&Word::power(vertex, -lead).concat(&h))?;
        let gen = |j: i64| -> Result<KernelGenerator> {
            Ok(KernelGenerator { conjugator: self.sub.normalize(&Word::power(vertex, j).concat(&g))? })
        };
        let p = n.params;
        let mut rhs = Vec::new();
        match sign {
            Sign::Plus => {
                for j in (p.p_minus + 1..p.p_plus).rev() {
                    rhs.push((gen(j)?, 1));
                }
                rhs.push((gen(p.p_minus)?, 1));
                for j in p.p_minus + 1..p.p_plus {
                    rhs.push((gen(j)?, -1));
                }
            }
            Sign::Minus => {
                for j in p.n_minus + 1..p.n_plus {
                    rhs.push((gen(j)?, -1));
                }
                rhs.push((gen(p.n_plus)?, 1));
                for j in (p.n_minus + 1..p.n_plus).rev() {
                    rhs.push((gen(j)?, 1));
                }
            }
        }
        Ok(RelationInstance { base: h.clone(), vertex, sign, lhs: KernelGenerator { conjugator: h }, rhs })
    }

    /// Instantiates and checks in the whole group; failures are soundness alarms.
    pub fn verified_relation(&self, h: &[Letter], vertex: u16, sign: Sign) -> Result<RelationInstance> {
        let rel = self.instantiate_relation(h, vertex, sign)?;
        verify_relation(&self.graph, &rel, self.r, 24)?;
        Ok(rel)
    }

    /// Shortlex normal forms of the subgroup of length at most `radius`, in shortlex order.
    pub fn subgroup_ball(&self, radius: usize) -> Result<Vec<Word>> {
        let letters: Vec<Letter> =
            self.order().letters().iter().copied().filter(|l| l.name() != self.r).collect();
        let mut out = vec![Word::empty()];
        let mut layer = vec![Word::empty()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for w in &layer {
                for &l in &letters {
                    if w.last() == Some(l.inverse()) {
                        continue;
                    }
                    let mut v = w.letters().to_vec();
                    v.push(l);
                    // shortlex forms are prefix-closed
                    if self.sub.normalize(&v)?.letters() == v.as_slice() {
                        next.push(Word::new(v));
                    }
                }
            }
            next.sort_by(|a, b| self.order().shortlex_compare(a, b).expect("subgroup alphabet"));
            out.extend(next.iter().cloned());
            layer = next;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub generator: KernelGenerator,
    pub h: Word,
    pub relation: RelationInstance,
}

/// Bounded-radius result of removing the redundant conjugates of `r`.
#[derive(Debug, Clone)]
pub struct EliminationState {
    pub graph_hash: String,
    pub removed: u16,
    pub radius: usize,
    pub order: LexOrder,
    pub retained: Vec<KernelGenerator>,
    pub eliminated: Vec<Elimination>,
    /// Elements lying in two prefix sets, in the order they were processed.
    pub omega_index: Vec<Word>,
    pub escaped: Vec<Word>,
}

impl EliminationState {
    pub fn render(&self, graph: &ArtinGraph) -> String {
        let mut s = String::new();
        let order: Vec<String> = self.order.letters().iter().map(|l| graph.render_word(&[*l])).collect();
        let _ = writeln!(s, "graph: {}", self.graph_hash);
        let _ = writeln!(s, "removed: {}", graph.vertex_name(self.removed));
        let _ = writeln!(s, "radius: {}", self.radius);
        let _ = writeln!(s, "order: {}", order.join(" < "));
        for g in &self.retained {
            let _ = writeln!(s, "retained: {}", graph.display_word(&g.conjugator));
        }
        for e in &self.eliminated {
            let _ = writeln!(
                s,
                "eliminated: {} via R({}) vertex {} sign {}",
                graph.display_word(&e.generator.conjugator),
                graph.display_word(&e.h),
                graph.vertex_name(e.relation.vertex),
                e.relation.sign
            );
        }
        for h in &self.escaped {
            let _ = writeln!(s, "escaped: {}", graph.display_word(h));
        }
        s
    }
}

/// Processes the two-set elements of the ball in shortlex order, each time dropping the
/// shortlex-larger of the two surviving descent targets.
pub fn eliminate(graph: &ArtinGraph, r: u16, radius: usize, order: Option<LexOrder>) -> Result<EliminationState> {
    let ret = Retraction::new(graph, r, order)?;
    if !ret.order_is_elimination_ready() {
        let names: Vec<String> = ret.order().letters().iter().map(|l| graph.render_word(&[*l])).collect();
        return Err(KernelError::IncompatibleOrder(names.join(" ")));
    }
    let ball = ret.subgroup_ball(radius)?;
    let mut complement = Vec::new();
    let mut doubles = Vec::new();
    for g in &ball {
        match ret.omega_membership(g)?.len() {
            0 => complement.push(g.clone()),
            1 => {}
            2 => doubles.push(g.clone()),
            n => {
                return Err(KernelError::SoundnessAlarm(format!(
                    "{} lies in {n} prefix sets",
                    graph.display_word(g)
                )))
            }
        }
    }
    let mut removed: BTreeSet<Word> = BTreeSet::new();
    let mut eliminated = Vec::new();
    let mut escaped = Vec::new();
    for h in &doubles {
        let (delta, _) = match ret.delta(h) {
            Ok(d) => d,
            Err(KernelError::DescentStuck(_)) => {
                escaped.push(h.clone());
                continue;
            }
            Err(e) => return Err(e),
        };
        if delta.iter().any(|w| w.len() > radius) {
            escaped.push(h.clone());
            continue;
        }
        let alive: Vec<&Word> = delta.iter().filter(|w| !removed.contains(*w)).collect();
        if alive.len() != 2 {
            return Err(KernelError::SoundnessAlarm(format!(
                "descent of {} keeps {} generators, expected 2",
                graph.display_word(h),
                alive.len()
            )));
        }
        let larger = alive[1].clone();
        let mut via = None;
        for (v, s) in ret.omega_membership(h)? {
            let (branch, _) = ret.delta(&ret.rho(h, v, s)?)?;
            if branch.contains(&larger) {
                via = Some((v, s));
                break;
            }
        }
        let (v, s) = via.ok_or_else(|| {
            KernelError::SoundnessAlarm(format!("no branch of {} reaches {}", graph.display_word(h), graph.display_word(&larger)))
        })?;
        let relation = ret.verified_relation(h, v, s)?;
        removed.insert(larger.clone());
        eliminated.push(Elimination { generator: KernelGenerator { conjugator: larger }, h: h.clone(), relation });
    }
    let retained = complement
        .into_iter()
        .filter(|g| !removed.contains(g))
        .map(|conjugator| KernelGenerator { conjugator })
        .collect();
    Ok(EliminationState {
        graph_hash: graph.hash(),
        removed: r,
        radius,
        order: ret.order().clone(),
        retained,
        eliminated,
        omega_index: doubles,
        escaped,
    })
}

#[derive(Debug, Clone)]
pub struct TowerStep {
    /// Vertex removed, as an index of the original graph.
    pub removed: u16,
    /// The graph at this step, induced on the vertices still present.
    pub graph: ArtinGraph,
    pub state: EliminationState,
}

/// Removal schedule down to the trivial group; the last step is the infinite cyclic
/// group on the final vertex. At each step picks, among vertices whose
/// removal leaves a large even graph, the one with the largest incident label sum,
/// ties broken by name.
pub fn poly_free_tower(graph: &ArtinGraph, radius: usize) -> Result<Vec<TowerStep>> {
    if let Some((u, v, m)) = graph.edges().into_iter().find(|e| e.2 % 2 == 1) {
        return Err(KernelError::Unsupported(format!(
            "odd label {m} on {}-{}",
            graph.vertex_name(u),
            graph.vertex_name(v)
        )));
    }
    let mut alive: Vec<u16> = (0..graph.vertex_count() as u16).collect();
    let mut steps = Vec::new();
    while !alive.is_empty() {
        let current = graph.induced(&alive);
        let mut best: Option<(u32, String, usize)> = None;
        let mut blocking = None;
        for i in 0..current.vertex_count() {
            let r = i as u16;
            match current.isolate(r).edges().into_iter().find(|e| e.2 < 4) {
                Some(e) => {
                    blocking.get_or_insert(e);
                }
                None => {
                    let sum: u32 = current.neighbors(r).iter().map(|&v| current.label(r, v).unwrap_or(0)).sum();
                    let key = (sum, current.vertex_name(r).to_string(), i);
                    let better = match &best {
                        None => true,
                        Some(b) => key.0 > b.0 || (key.0 == b.0 && key.1 < b.1),
                    };
                    if better {
                        best = Some(key);
                    }
                }
            }
        }
        let Some((_, _, i)) = best else {
            let (u, v, m) = blocking.expect("some vertex blocks");
            return Err(KernelError::Unsupported(format!(
                "no vertex of {{{}}} leaves a large even graph; edge {}-{} with label {m} remains after every removal",
                alive.iter().map(|&v| graph.vertex_name(v)).collect::<Vec<_>>().join(", "),
                current.vertex_name(u),
                current.vertex_name(v)
            )));
        };
        let state = eliminate(&current, i as u16, radius, None)?;
        steps.push(TowerStep { removed: alive[i], graph: current, state });
        alive.remove(i);
    }
    Ok(steps)
}
