//! Geodesic-prefix queries and bounded exhaustive checks of the structural facts about
//! geodesics that the kernel construction relies on. Checks run against oracle balls
//! and cross-check the rewriting engine on every element they touch.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::ArtinGraph;
use crate::kernel::{vertex_params, KernelError, Retraction, Sign, VertexParams};
use crate::linear::LinearRep;
use crate::oracle::{Ball, BallClass, OracleError};
use crate::rewriting::{RewriteError, ShortlexEngine};
use crate::words::{alternating_unchecked, free_reduce, Letter, LexOrder, Side, Word, WordError};

#[derive(Debug, Error)]
pub enum GeodesicError {
    #[error("prefix test and reordered normal form disagree on {word} for letter {letter}")]
    MethodDisagreement { word: String, letter: String },
    #[error("no minimal intersection word for s = {0}, t = {1}")]
    BadParameters(i64, i64),
    #[error("unknown lemma {0}")]
    UnknownLemma(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("kernel: {0}")]
    Kernel(String),
}

impl From<KernelError> for GeodesicError {
    fn from(e: KernelError) -> Self {
        GeodesicError::Kernel(e.to_string())
    }
}

type Result<T> = std::result::Result<T, GeodesicError>;

/// Some geodesic for `g` starts with `u` iff `|u⁻¹g| = |g| − |u|`.
pub fn has_geodesic_prefix(engine: &ShortlexEngine, g: &[Letter], u: &[Letter]) -> Result<bool> {
    let len = engine.geodesic_length(g)?;
    if u.len() > len {
        return Ok(false);
    }
    let rest = Word::new(u.to_vec()).inverse().concat(&Word::new(g.to_vec()));
    Ok(engine.geodesic_length(&rest)? == len - u.len())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialLetterReport {
    pub element: Word,
    pub initials: Vec<Letter>,
}

/// Letters starting some geodesic of `g`, in the engine's order. Each letter is decided
/// twice, by the prefix test and by normalizing under an order with that letter first.
pub fn initial_letters(engine: &ShortlexEngine, g: &[Letter]) -> Result<InitialLetterReport> {
    let element = engine.normalize(g)?;
    let mut initials = Vec::new();
    for &x in engine.order().letters() {
        let by_prefix = has_geodesic_prefix(engine, &element, &[x])?;
        let by_order = engine.reordered(engine.order().with_first(x)).normalize(&element)?.first() == Some(x);
        if by_prefix != by_order {
            return Err(GeodesicError::MethodDisagreement {
                word: engine.graph().display_word(&element),
                letter: engine.graph().render_word(&[x]),
            });
        }
        if by_prefix {
            initials.push(x);
        }
    }
    Ok(InitialLetterReport { element, initials })
}

/// Largest `t` such that some geodesic of `g` starts with `x^t`.
pub fn max_initial_power(engine: &ShortlexEngine, g: &[Letter], x: Letter) -> Result<usize> {
    let len = engine.geodesic_length(g)?;
    let mut t = 0;
    while t < len && has_geodesic_prefix(engine, g, &vec![x; t + 1])? {
        t += 1;
    }
    Ok(t)
}

fn letter_power(l: Letter, e: i64) -> Word {
    Word::power(l.name(), if l.is_positive() { e } else { -e })
}

/// Shortest pair `w =_G ŵ` with `w` starting `b^t` and `ŵ` starting `a^s`, on generators
/// `a = 0`, `b = 1` with label `2m`.
pub fn minimal_intersection_word(m: u32, s: i64, t: i64) -> Result<(Word, Word)> {
    minimal_intersection_word_on(Letter::pos(0), Letter::pos(1), m, s, t)
}

/// As [`minimal_intersection_word`] for positive letters `a`, `b`. For `(s, t) = (−1, 1)`
/// there is a second minimal element, `a⁻¹·(b,a)₂ₘ₋₁`; this returns the first form.
pub fn minimal_intersection_word_on(a: Letter, b: Letter, m: u32, s: i64, t: i64) -> Result<(Word, Word)> {
    if m < 1 {
        return Err(GeodesicError::BadParameters(s, t));
    }
    let len = 2 * m as usize - 1;
    let alt = |x: Letter, y: Letter| alternating_unchecked(x, y, len, Side::Left);
    let pw = |x: Letter, e: i64| letter_power(x, e);
    let (ai, bi) = (a.inverse(), b.inverse());
    let pair = if s >= t && t >= 1 {
        (
            pw(b, t).concat(&alt(a, b).repeat(t as usize)).concat(&pw(a, s - t)),
            pw(a, s).concat(&alt(b, a).repeat(t as usize)),
        )
    } else if s <= t && t <= -1 {
        let n = t.unsigned_abs() as usize;
        (
            pw(b, t).concat(&alt(ai, bi).repeat(n)).concat(&pw(a, -(s - t).abs())),
            pw(a, s).concat(&alt(bi, ai).repeat(n)),
        )
    } else if s == -1 && t >= 1 {
        (pw(b, t).concat(&alt(ai, bi)), alt(ai, bi).concat(&pw(b, t)))
    } else if s <= -1 && t == 1 {
        (alt(b, a).concat(&pw(a, s)), pw(a, s).concat(&alt(b, a)))
    } else if s == 1 && t <= -1 {
        (pw(b, t).concat(&alt(a, b)), alt(a, b).concat(&pw(b, t)))
    } else if s >= 1 && t == -1 {
        (alt(bi, ai).concat(&pw(a, s)), pw(a, s).concat(&alt(bi, ai)))
    } else {
        return Err(GeodesicError::BadParameters(s, t));
    };
    Ok(pair)
}

/// The properties checked by [`verify_lemma`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lemma {
    /// No element has geodesics starting with both `x` and `x⁻¹`.
    InverseInitials,
    /// `b^t w` is geodesic iff `b w` is.
    PowerExtension,
    /// Losing a leading `b^t` on right multiplication forces a `b⁻¹` start on the tail.
    PrefixLoss,
    /// A leading power `a^s`, `s > 1`, appears only from `a^{s−1}`.
    PowerGrowth,
    /// Prefixes climb through every leading power `a, a², …, a^s`.
    PrefixLadder,
    /// Geodesics starting `b^t` and `a^s` of the same sign: minimal length and unique minimum.
    SameSignIntersection,
    /// No element has geodesics starting `a^s` and `b^{−t}` with `s, t ≥ 2`.
    MixedSignSquares,
    /// Geodesics starting `b^t` and `a⁻¹`: minimal length and minimal elements.
    MixedSignIntersection,
    /// At most two initial letters.
    Initials,
    /// An element lies in at most two prefix sets.
    OmegaCount,
    /// `Ω_i⁺ ∩ Ω_j⁻` is nonempty iff the half-label at `j` is 2.
    OmegaMixed,
    /// Stripping shortens on the plus side and never lengthens on the minus side.
    RhoLength,
    /// A length-preserving minus strip lands in at most one prefix set.
    RhoStable,
    /// Stripping lowers the shortlex form under a polyfree-compatible order.
    RhoShortlex,
    /// Iterated stripping eventually shortens and ends outside every prefix set.
    RhoDescent,
    /// The two descent branches of a two-set element end at distinct elements.
    DeltaDistinct,
    /// Lower bound and attained minimum for the length of two-set elements.
    IntersectionLength,
    /// The powers `b_i^{k_i}` generate a free subgroup.
    PowerSubgroupFree,
    /// No nontrivial element of the subgroup commutes with `r`.
    Centralizer,
}

impl Lemma {
    pub const ALL: [Lemma; 19] = [
        Lemma::InverseInitials,
        Lemma::PowerExtension,
        Lemma::PrefixLoss,
        Lemma::PowerGrowth,
        Lemma::PrefixLadder,
        Lemma::SameSignIntersection,
        Lemma::MixedSignSquares,
        Lemma::MixedSignIntersection,
        Lemma::Initials,
        Lemma::OmegaCount,
        Lemma::OmegaMixed,
        Lemma::RhoLength,
        Lemma::RhoStable,
        Lemma::RhoShortlex,
        Lemma::RhoDescent,
        Lemma::DeltaDistinct,
        Lemma::IntersectionLength,
        Lemma::PowerSubgroupFree,
        Lemma::Centralizer,
    ];

    pub fn id(self) -> &'static str {
        self.ids()[0]
    }

    /// Canonical id first, then accepted aliases.
    fn ids(self) -> &'static [&'static str] {
        match self {
            Lemma::InverseInitials => &["inverse-initials", "L3.1"],
            Lemma::PowerExtension => &["power-extension", "L3.2"],
            Lemma::PrefixLoss => &["prefix-loss", "L3.3"],
            Lemma::PowerGrowth => &["power-growth", "L3.5"],
            Lemma::PrefixLadder => &["prefix-ladder", "C3.6"],
            Lemma::SameSignIntersection => &["same-sign-intersection", "L3.7"],
            Lemma::MixedSignSquares => &["mixed-sign-squares", "L3.8"],
            Lemma::MixedSignIntersection => &["mixed-sign-intersection", "L3.9"],
            Lemma::Initials => &["initials", "L3.10"],
            Lemma::OmegaCount => &["omega-count", "L5.3"],
            Lemma::OmegaMixed => &["omega-mixed", "L5.4"],
            Lemma::RhoLength => &["rho-length", "L5.8"],
            Lemma::RhoStable => &["rho-stable", "L5.10"],
            Lemma::RhoShortlex => &["rho-shortlex", "L5.11"],
            Lemma::RhoDescent => &["rho-descent", "L5.12", "C5.13", "L5.12/C5.13"],
            Lemma::DeltaDistinct => &["delta-distinct", "L5.15"],
            Lemma::IntersectionLength => &["intersection-length", "L5.16-len", "L5.16"],
            Lemma::PowerSubgroupFree => &["power-subgroup-free", "H-free"],
            Lemma::Centralizer => &["centralizer", "Commute"],
        }
    }

    pub fn parse(s: &str) -> Result<Lemma> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.ids().iter().any(|id| id.eq_ignore_ascii_case(s)))
            .ok_or_else(|| GeodesicError::UnknownLemma(s.to_string()))
    }

    /// Properties of the subgroup left after removing a vertex.
    pub fn is_kernel(self) -> bool {
        matches!(
            self,
            Lemma::OmegaCount
                | Lemma::OmegaMixed
                | Lemma::RhoLength
                | Lemma::RhoStable
                | Lemma::RhoShortlex
                | Lemma::RhoDescent
                | Lemma::DeltaDistinct
                | Lemma::IntersectionLength
                | Lemma::PowerSubgroupFree
                | Lemma::Centralizer
        )
    }

    fn needs_even(self) -> bool {
        self.is_kernel()
            || matches!(
                self,
                Lemma::SameSignIntersection | Lemma::MixedSignSquares | Lemma::MixedSignIntersection | Lemma::Initials
            )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub graph: String,
    pub radius: usize,
    pub checked: usize,
    pub violations: Vec<String>,
    /// Elements on which the engine's normal form was compared with the oracle.
    pub engine_checked: usize,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render(&self) -> String {
        let mut s = format!(
            "lemma {} graph {} radius {}: checked {} violations {}\n",
            self.lemma.id(),
            self.graph,
            self.radius,
            self.checked,
            self.violations.len()
        );
        for v in &self.violations {
            let _ = writeln!(s, "{v}");
        }
        s
    }
}

/// Oracle-side view of a ball: prefix and shortlex queries by class.
struct View<'a> {
    graph: &'a ArtinGraph,
    ball: &'a Ball,
}

impl<'a> View<'a> {
    fn class(&self, w: &[Letter]) -> Result<&'a BallClass> {
        Ok(self.ball.class_of(w)?)
    }

    fn class_id(&self, w: &[Letter]) -> Result<usize> {
        Ok(self.class(w)?.id)
    }

    fn get(&self, id: usize) -> &'a BallClass {
        &self.ball.classes()[id]
    }

    fn len(&self, id: usize) -> usize {
        self.get(id).geodesic_length()
    }

    fn has_prefix(&self, id: usize, u: &[Letter]) -> bool {
        self.get(id).geodesics.iter().any(|g| g.starts_with(u))
    }

    fn initials(&self, id: usize) -> BTreeSet<Letter> {
        self.get(id).geodesics.iter().filter_map(|g| g.first()).collect()
    }

    fn shortlex(&self, id: usize, order: &LexOrder) -> &'a Word {
        self.get(id)
            .geodesics
            .iter()
            .min_by(|a, b| order.shortlex_unchecked(a, b))
            .expect("classes are nonempty")
    }

    fn show(&self, w: &[Letter]) -> String {
        self.graph.display_word(w)
    }

    /// Ids of classes with geodesic length at most `radius`.
    fn within(&self, radius: usize) -> impl Iterator<Item = usize> + 'a {
        let classes = self.ball.classes();
        (0..classes.len()).filter(move |&i| classes[i].geodesic_length() <= radius)
    }
}

fn alphabet(graph: &ArtinGraph) -> Vec<Letter> {
    (0..graph.vertex_count() as u16).flat_map(|v| [Letter::pos(v), Letter::neg(v)]).collect()
}

struct Check {
    checked: usize,
    violations: Vec<String>,
}

impl Check {
    fn new() -> Check {
        Check { checked: 0, violations: Vec::new() }
    }

    fn expect(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

/// Compares the engine's normal form with the oracle's shortlex-least geodesic.
fn engine_agreement(view: &View, engine: &ShortlexEngine, ids: &[usize], check: &mut Check) -> Result<usize> {
    for &id in ids {
        let class = view.get(id);
        let expected = view.shortlex(id, engine.order());
        let got = engine.normalize(&class.canonical)?;
        if &got != expected {
            check.violations.push(format!(
                "engine {}: {} vs oracle {}",
                view.show(&class.canonical),
                view.show(&got),
                view.show(expected)
            ));
        }
    }
    Ok(ids.len())
}

/// Enumerates the ball of the given radius and checks the property on every applicable
/// instance. Properties of the kernel construction are checked at every vertex, in the
/// subgroup generated by the remaining vertices.
pub fn verify_lemma(lemma: Lemma, graph: &ArtinGraph, radius: usize, order: Option<&LexOrder>) -> Result<LemmaReport> {
    let mut report = LemmaReport {
        lemma,
        graph: graph.name().to_string(),
        radius,
        checked: 0,
        violations: Vec::new(),
        engine_checked: 0,
    };
    if !graph.is_large() {
        return Err(GeodesicError::Unsupported(format!("{} is not large", graph.name())));
    }
    if lemma.needs_even() && !graph.is_even() {
        return Err(GeodesicError::Unsupported(format!("{} needs an even graph", lemma.id())));
    }
    if radius == 0 {
        return Ok(report);
    }
    let order = order.cloned().unwrap_or_else(|| graph.default_order());
    let mut check = Check::new();
    if lemma.is_kernel() {
        for r in 0..graph.vertex_count() as u16 {
            if graph.neighbors(r).is_empty() {
                continue;
            }
            report.engine_checked += kernel_check(lemma, graph, r, radius, &order, &mut check)?;
        }
    } else {
        let ball = Ball::enumerate(graph, radius)?;
        if !ball.unresolved().is_empty() {
            return Err(GeodesicError::Unsupported(format!(
                "oracle left {} class pairs unresolved",
                ball.unresolved().len()
            )));
        }
        let view = View { graph, ball: &ball };
        let engine = ShortlexEngine::new(graph.clone(), order.clone())?;
        let ids: Vec<usize> = view.within(radius).collect();
        report.engine_checked = engine_agreement(&view, &engine, &ids, &mut check)?;
        geodesic_check(lemma, &view, &engine, radius, &mut check)?;
    }
    report.checked = check.checked;
    report.violations = check.violations;
    Ok(report)
}

fn even_pairs(graph: &ArtinGraph) -> Vec<(Letter, Letter, u32)> {
    let mut out = Vec::new();
    for (u, v, m) in graph.edges() {
        if m % 2 == 0 {
            out.push((Letter::pos(u), Letter::pos(v), m / 2));
            out.push((Letter::pos(v), Letter::pos(u), m / 2));
        }
    }
    out
}

fn geodesic_check(lemma: Lemma, view: &View, engine: &ShortlexEngine, radius: usize, check: &mut Check) -> Result<()> {
    let letters = alphabet(view.graph);
    let ids: Vec<usize> = view.within(radius).collect();
    match lemma {
        Lemma::InverseInitials => {
            for &id in &ids {
                let init = view.initials(id);
                let ok = init.iter().all(|x| !init.contains(&x.inverse()));
                check.expect(ok, || view.show(&view.get(id).canonical));
            }
        }
        Lemma::Initials => {
            for &id in &ids {
                let init = view.initials(id);
                check.expect(init.len() <= 2, || view.show(&view.get(id).canonical));
                let rep = initial_letters(engine, &view.get(id).canonical)?;
                let by_engine: BTreeSet<Letter> = rep.initials.into_iter().collect();
                check.expect(by_engine == init, || format!("{} initial letters differ", view.show(&view.get(id).canonical)));
            }
        }
        Lemma::PowerExtension => {
            for (w, id) in view.ball.members() {
                let Some(b) = w.first() else { continue };
                let t = w.leading_power(b);
                if t < 2 || w.len() > radius {
                    continue;
                }
                let short = w.suffix_from(t - 1);
                let long_geo = view.len(id) == w.len();
                let short_geo = view.len(view.class_id(&short)?) == short.len();
                check.expect(long_geo == short_geo, || view.show(&w));
            }
        }
        Lemma::PrefixLoss => {
            for &id in &ids {
                if view.len(id) + 1 > radius {
                    continue;
                }
                for w in &view.get(id).geodesics {
                    let Some(b) = w.first() else { continue };
                    for t in 1..=w.leading_power(b) {
                        let tail = w.suffix_from(t);
                        for &h in &letters {
                            let wh = view.class_id(&w.concat(&Word::new(vec![h])))?;
                            if view.has_prefix(wh, &vec![b; t]) {
                                continue;
                            }
                            let th = view.class_id(&tail.concat(&Word::new(vec![h])))?;
                            let branch = if b.is_positive() { "positive" } else { "negative" };
                            check.expect(view.has_prefix(th, &[b.inverse()]), || {
                                format!("{} t={t} h={} ({branch} branch)", view.show(w), view.show(&[h]))
                            });
                        }
                    }
                }
            }
        }
        Lemma::PowerGrowth => {
            for &a in &letters {
                let ord = engine.order().with_first(a);
                for &id in &ids {
                    if view.len(id) + 1 > radius {
                        continue;
                    }
                    let u = view.shortlex(id, &ord);
                    let i = u.leading_power(a);
                    for &l in &letters {
                        let ul = view.class_id(&u.concat(&Word::new(vec![l])))?;
                        if view.len(ul) != view.len(id) + 1 {
                            continue;
                        }
                        let s = view.shortlex(ul, &ord).leading_power(a);
                        if s > 1 && i < s {
                            check.expect(i == s - 1, || {
                                format!("{} l={} first={}", view.show(u), view.show(&[l]), view.show(&[a]))
                            });
                        }
                    }
                }
            }
        }
        Lemma::PrefixLadder => {
            for &a in &letters {
                let ord = engine.order().with_first(a);
                for &id in &ids {
                    let s = view.shortlex(id, &ord).leading_power(a);
                    if s == 0 {
                        continue;
                    }
                    for w in &view.get(id).geodesics {
                        if w.first().map(|l| l.name()) == Some(a.name()) {
                            continue;
                        }
                        let mut powers = vec![0usize];
                        for k in 1..=w.len() {
                            powers.push(view.shortlex(view.class_id(&w[..k])?, &ord).leading_power(a));
                        }
                        let ok = (1..=s).all(|i| {
                            let first = powers.iter().position(|&e| e >= i);
                            matches!(first, Some(l) if powers[l] == i && powers[l - 1] == i - 1)
                        });
                        check.expect(ok, || format!("{} first={}", view.show(w), view.show(&[a])));
                    }
                }
            }
        }
        Lemma::MixedSignSquares => {
            let n = view.graph.vertex_count() as u16;
            for &id in &ids {
                for a in 0..n {
                    for b in 0..n {
                        if a == b {
                            continue;
                        }
                        let both = view.has_prefix(id, &Word::power(a, 2)) && view.has_prefix(id, &Word::power(b, -2));
                        check.expect(!both, || view.show(&view.get(id).canonical));
                    }
                }
            }
        }
        Lemma::SameSignIntersection => {
            for (a, b, m) in even_pairs(view.graph) {
                let step = 2 * m as i64 - 1;
                for sign in [1i64, -1] {
                    for t in 1i64.. {
                        if t + t * step > radius as i64 {
                            break;
                        }
                        for s in t.. {
                            let target = (s + t * step) as usize;
                            if target > radius {
                                break;
                            }
                            let (bt, as_) = (letter_power(b, sign * t), letter_power(a, sign * s));
                            let hits: Vec<usize> = ids
                                .iter()
                                .copied()
                                .filter(|&id| view.has_prefix(id, &bt) && view.has_prefix(id, &as_))
                                .collect();
                            let min = hits.iter().map(|&id| view.len(id)).min();
                            let minimal: Vec<usize> =
                                hits.iter().copied().filter(|&id| Some(view.len(id)) == min).collect();
                            let (w, w_hat) = minimal_intersection_word_on(a, b, m, sign * s, sign * t)?;
                            let ok = min == Some(target)
                                && minimal.len() == 1
                                && view.get(minimal[0]).geodesics.contains(&w)
                                && view.get(minimal[0]).geodesics.contains(&w_hat);
                            check.expect(ok, || {
                                format!(
                                    "a={} b={} s={} t={}: minimal length {:?}, {} minimal elements",
                                    view.show(&[a]),
                                    view.show(&[b]),
                                    sign * s,
                                    sign * t,
                                    min,
                                    minimal.len()
                                )
                            });
                        }
                    }
                }
            }
        }
        Lemma::MixedSignIntersection => {
            for (a, b, m) in even_pairs(view.graph) {
                let step = 2 * m as usize - 1;
                for t in 1.. {
                    if t + step > radius {
                        break;
                    }
                    let main = minimal_intersection_word_on(a, b, m, -1, t as i64)?.0;
                    let resp = letter_power(a, -(t as i64)).concat(&alternating_unchecked(b, a, step, Side::Left));
                    let allowed = [view.class_id(&main)?, view.class_id(&resp)?];
                    let branches = [
                        (letter_power(b, t as i64), vec![a.inverse()], allowed[0]),
                        (letter_power(a, -(t as i64)), vec![b], allowed[1]),
                    ];
                    for (first, second, expected) in branches {
                        let hits: Vec<usize> = ids
                            .iter()
                            .copied()
                            .filter(|&id| view.has_prefix(id, &first) && view.has_prefix(id, &second))
                            .collect();
                        let min = hits.iter().map(|&id| view.len(id)).min();
                        let minimal: Vec<usize> = hits.iter().copied().filter(|&id| Some(view.len(id)) == min).collect();
                        let ok = min == Some(t + step)
                            && minimal.contains(&expected)
                            && minimal.iter().all(|id| allowed.contains(id));
                        check.expect(ok, || {
                            let shown: Vec<String> = minimal.iter().map(|&id| view.show(&view.get(id).canonical)).collect();
                            format!(
                                "a={} b={} t={t} start {}: minimal length {:?}, minimal elements [{}]",
                                view.show(&[a]),
                                view.show(&[b]),
                                view.show(&first),
                                min,
                                shown.join(", ")
                            )
                        });
                    }
                }
            }
        }
        _ => unreachable!("kernel properties are checked per vertex"),
    }
    Ok(())
}

/// Prefix-set data of the subgroup without `r`, in the subgroup's own numbering.
struct Strips<'a> {
    view: View<'a>,
    /// (vertex in the subgroup, parameters)
    nbrs: Vec<(u16, VertexParams)>,
    half_labels: HashMap<(u16, u16), u32>,
}

impl<'a> Strips<'a> {
    fn exponent(p: &VertexParams, sign: Sign) -> i64 {
        if sign == Sign::Plus {
            p.p_plus
        } else {
            p.n_minus
        }
    }

    fn members(&self, id: usize) -> Vec<(usize, Sign)> {
        let mut out = Vec::new();
        for (i, (v, p)) in self.nbrs.iter().enumerate() {
            for sign in [Sign::Plus, Sign::Minus] {
                if self.view.has_prefix(id, &Word::power(*v, Self::exponent(p, sign))) {
                    out.push((i, sign));
                }
            }
        }
        out
    }

    fn rho(&self, id: usize, i: usize, sign: Sign) -> Result<usize> {
        let (v, p) = self.nbrs[i];
        let e = if sign == Sign::Plus { -(p.k as i64) } else { p.k as i64 };
        let w = Word::power(v, e).concat(&self.view.get(id).canonical);
        self.view.class_id(&free_reduce(&w))
    }

    fn rho_set(&self, set: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for &id in set {
            let ms = self.members(id);
            if ms.is_empty() {
                out.insert(id);
            }
            for (i, s) in ms {
                out.insert(self.rho(id, i, s)?);
            }
        }
        Ok(out)
    }

    fn in_complement(&self, set: &BTreeSet<usize>) -> bool {
        set.iter().all(|&id| self.members(id).is_empty())
    }

    fn delta(&self, id: usize) -> Result<Option<BTreeSet<usize>>> {
        let mut set = BTreeSet::from([id]);
        for _ in 0..=crate::kernel::DESCENT_CAP {
            if self.in_complement(&set) {
                return Ok(Some(set));
            }
            set = self.rho_set(&set)?;
        }
        Ok(None)
    }
}

fn kernel_check(lemma: Lemma, graph: &ArtinGraph, r: u16, radius: usize, order: &LexOrder, check: &mut Check) -> Result<usize> {
    let (sub, old_ids) = graph.without(r);
    let new_id = |v: u16| old_ids.iter().position(|&o| o == v).expect("kept vertex") as u16;
    let mut nbrs = Vec::new();
    for v in graph.neighbors(r) {
        nbrs.push((new_id(v), vertex_params(graph.label(r, v).expect("neighbor") / 2)?));
    }
    let max_k = nbrs.iter().map(|(_, p)| p.k as usize).max().unwrap_or(0);
    let ball = Ball::enumerate(&sub, radius + max_k)?;
    if !ball.unresolved().is_empty() {
        return Err(GeodesicError::Unsupported(format!("oracle left {} class pairs unresolved", ball.unresolved().len())));
    }
    let sub_order = {
        let letters: Vec<Letter> = order
            .letters()
            .iter()
            .filter(|l| l.name() != r)
            .map(|l| l.with_name(new_id(l.name())))
            .collect();
        LexOrder::from_letters(letters)?
    };
    let half_labels = sub.edges().into_iter().flat_map(|(u, v, m)| [((u, v), m / 2), ((v, u), m / 2)]).collect();
    let strips = Strips { view: View { graph: &sub, ball: &ball }, nbrs, half_labels };
    let view = &strips.view;
    let engine = ShortlexEngine::new(sub.clone(), sub_order.clone())?;
    let ids: Vec<usize> = view.within(radius).collect();
    let agreed = engine_agreement(view, &engine, &ids, check)?;
    let tag = |w: &[Letter]| format!("{} (r={})", view.show(w), graph.vertex_name(r));

    match lemma {
        Lemma::OmegaCount => {
            let ret = Retraction::new(graph, r, None)?;
            for &id in &ids {
                let ms = strips.members(id);
                let opposite = ms.iter().any(|(i, s)| *s == Sign::Plus && ms.contains(&(*i, Sign::Minus)));
                check.expect(ms.len() <= 2 && !opposite, || tag(&view.get(id).canonical));
                let lifted: Word = view.get(id).canonical.iter().map(|l| l.with_name(old_ids[l.name() as usize])).collect();
                let mut by_engine: Vec<(u16, Sign)> = ret.omega_membership(&lifted)?;
                by_engine.sort();
                let mut by_oracle: Vec<(u16, Sign)> =
                    ms.iter().map(|(i, s)| (old_ids[strips.nbrs[*i].0 as usize], *s)).collect();
                by_oracle.sort();
                check.expect(by_engine == by_oracle, || format!("{} prefix sets differ", tag(&lifted)));
            }
        }
        Lemma::OmegaMixed => {
            for i in 0..strips.nbrs.len() {
                for j in 0..strips.nbrs.len() {
                    if i == j {
                        continue;
                    }
                    let (vi, pi) = strips.nbrs[i];
                    let (vj, pj) = strips.nbrs[j];
                    let hits = ids
                        .iter()
                        .filter(|&&id| strips.members(id).contains(&(i, Sign::Plus)) && strips.members(id).contains(&(j, Sign::Minus)))
                        .count();
                    if pj.n_minus != -1 {
                        check.expect(hits == 0, || format!("{} and {} mixed sets meet", view.show(&[Letter::pos(vi)]), view.show(&[Letter::pos(vj)])));
                    } else if let Some(&m) = strips.half_labels.get(&(vi, vj)) {
                        if pi.p_plus as usize + 2 * m as usize - 1 <= radius {
                            check.expect(hits > 0, || format!("no element in both sets of {} and {}", view.show(&[Letter::pos(vi)]), view.show(&[Letter::pos(vj)])));
                        }
                    }
                }
            }
        }
        Lemma::RhoLength => {
            for &id in &ids {
                for (i, sign) in strips.members(id) {
                    let rho = strips.rho(id, i, sign)?;
                    let (v, p) = strips.nbrs[i];
                    let (len, rlen) = (view.len(id), view.len(rho));
                    match sign {
                        Sign::Plus => check.expect(rlen < len, || tag(&view.get(id).canonical)),
                        Sign::Minus => {
                            let rest = view.class_id(&free_reduce(
                                &Word::power(v, -p.n_minus).concat(&view.get(id).canonical),
                            ))?;
                            let predicted = p.k % 2 == 0 && !view.has_prefix(rest, &[Letter::neg(v)]);
                            check.expect(rlen <= len && (rlen == len) == predicted, || tag(&view.get(id).canonical));
                        }
                    }
                }
            }
        }
        Lemma::RhoStable => {
            for &id in &ids {
                for (i, sign) in strips.members(id) {
                    if sign != Sign::Minus {
                        continue;
                    }
                    let rho = strips.rho(id, i, sign)?;
                    if view.len(rho) == view.len(id) {
                        check.expect(strips.members(rho).len() <= 1, || tag(&view.get(id).canonical));
                    }
                }
            }
        }
        Lemma::RhoShortlex => {
            if !sub_order.is_polyfree_compatible() {
                return Err(GeodesicError::Unsupported("order must put each generator before its inverse".into()));
            }
            for &id in &ids {
                for (i, sign) in strips.members(id) {
                    let rho = strips.rho(id, i, sign)?;
                    let (g, h) = (view.shortlex(id, &sub_order), view.shortlex(rho, &sub_order));
                    let (v, _) = strips.nbrs[i];
                    check.expect(sub_order.shortlex_unchecked(g, h).is_gt(), || {
                        format!("{} strip {}{} gives {}", tag(g), view.show(&[Letter::pos(v)]), sign.as_char(), view.show(h))
                    });
                    let by_engine = engine.normalize(&view.get(rho).canonical)?;
                    check.expect(&by_engine == h, || format!("{} engine strip differs", tag(g)));
                }
            }
        }
        Lemma::RhoDescent => {
            for &id in &ids {
                if strips.members(id).is_empty() {
                    continue;
                }
                let len = view.len(id);
                let mut set = BTreeSet::from([id]);
                let mut shortened = false;
                let mut finished = false;
                for _ in 0..=crate::kernel::DESCENT_CAP {
                    if !shortened && set.iter().all(|&h| strips.members(h).is_empty() || view.len(h) < len) && set != BTreeSet::from([id]) {
                        shortened = true;
                    }
                    if strips.in_complement(&set) {
                        finished = true;
                        break;
                    }
                    set = strips.rho_set(&set)?;
                }
                check.expect(shortened && finished, || tag(&view.get(id).canonical));
            }
        }
        Lemma::DeltaDistinct => {
            for &id in &ids {
                let ms = strips.members(id);
                if ms.len() != 2 {
                    continue;
                }
                let mut ends = Vec::new();
                for &(i, s) in &ms {
                    let rho = strips.rho(id, i, s)?;
                    ends.push(strips.delta(rho)?);
                }
                let ok = match (&ends[0], &ends[1]) {
                    (Some(x), Some(y)) => x.is_disjoint(y),
                    _ => false,
                };
                check.expect(ok, || tag(&view.get(id).canonical));
            }
        }
        Lemma::IntersectionLength => {
            for i in 0..strips.nbrs.len() {
                for j in 0..strips.nbrs.len() {
                    let (vi, pi) = strips.nbrs[i];
                    let (vj, pj) = strips.nbrs[j];
                    if i == j || pj.n_minus.abs() < pi.n_minus.abs() || (pj.n_minus == pi.n_minus && j < i) {
                        continue;
                    }
                    let Some(&m) = strips.half_labels.get(&(vi, vj)) else { continue };
                    let bound = (pj.n_minus.abs() + pi.n_minus.abs() * (2 * m as i64 - 1)) as usize;
                    let mut shortest = None::<usize>;
                    let mut attained = false;
                    for &id in &ids {
                        let ms = strips.members(id);
                        let in_i = ms.iter().any(|(x, _)| *x == i);
                        let in_j = ms.iter().any(|(x, _)| *x == j);
                        if in_i && in_j {
                            let len = view.len(id);
                            shortest = Some(shortest.map_or(len, |s| s.min(len)));
                            if len == bound && ms.contains(&(i, Sign::Minus)) && ms.contains(&(j, Sign::Minus)) {
                                attained = true;
                            }
                        }
                    }
                    let pair = || format!("{} {}", view.show(&[Letter::pos(vi)]), view.show(&[Letter::pos(vj)]));
                    check.expect(shortest.is_none_or(|s| s >= bound), || format!("{} shorter than {bound}", pair()));
                    if bound <= radius {
                        check.expect(attained, || format!("{} bound {bound} not attained", pair()));
                    }
                }
            }
        }
        Lemma::PowerSubgroupFree => {
            let blocks: Vec<Word> = strips
                .nbrs
                .iter()
                .flat_map(|(v, p)| [Word::power(*v, p.k as i64), Word::power(*v, -(p.k as i64))])
                .collect();
            let mut words = vec![(Word::empty(), usize::MAX)];
            let mut frontier = words.clone();
            for _ in 0..4 {
                let mut next = Vec::new();
                for (w, last) in &frontier {
                    for (bi, blk) in blocks.iter().enumerate() {
                        if *last != usize::MAX && bi == (*last ^ 1) {
                            continue;
                        }
                        let v = w.concat(blk);
                        if v.len() <= radius {
                            next.push((v, bi));
                        }
                    }
                }
                words.extend(next.iter().cloned());
                frontier = next;
            }
            let mut seen: HashMap<usize, Word> = HashMap::new();
            let mut forms = HashMap::new();
            for (w, _) in &words {
                let id = view.class_id(w)?;
                check.expect(seen.insert(id, w.clone()).is_none() && view.len(id) == w.len(), || view.show(w));
                let form = engine.normalize(w)?;
                check.expect(forms.insert(form, w.clone()).is_none(), || format!("{} engine collision", view.show(w)));
            }
        }
        Lemma::Centralizer => {
            let rep = LinearRep::new(graph);
            let whole = ShortlexEngine::with_default_order(graph.clone())?;
            let rl = Letter::pos(r);
            let target = rep.image(&[rl]);
            for &id in &ids {
                let g: Word = view.get(id).canonical.iter().map(|l| l.with_name(old_ids[l.name() as usize])).collect();
                if g.is_empty() {
                    continue;
                }
                let conj = g.inverse().concat(&Word::new(vec![rl])).concat(&g);
                let separated = rep.image(&conj) != target;
                let engine_distinct = !whole.words_equal(&conj, &[rl])?;
                check.expect(separated && engine_distinct, || tag(&view.get(id).canonical));
            }
        }
        _ => unreachable!("geodesic properties are checked on the whole graph"),
    }
    Ok(agreed)
}
