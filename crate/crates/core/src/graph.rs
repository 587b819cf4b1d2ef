//! Labeled presentation graphs, their text format, and word syntax.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::words::{Letter, LexOrder, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("loop at vertex `{0}`")]
    Loop(String),
    #[error("edge {0}-{1} declared twice")]
    MultiEdge(String, String),
    #[error("edge {0}-{1} has label {2}, labels must be at least 2 or `inf`")]
    BadLabel(String, String, u32),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A simple graph on named vertices; a missing edge and an `inf` edge both mean "no relation".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinGraph {
    name: String,
    names: Vec<String>,
    labels: Vec<Vec<Option<u32>>>,
    order: Option<Vec<Letter>>,
}

impl ArtinGraph {
    pub fn new(names: Vec<String>, edges: &[(usize, usize, Option<u32>)]) -> Result<Self, GraphError> {
        let n = names.len();
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(GraphError::DuplicateVertex(a.clone()));
            }
        }
        let mut labels = vec![vec![None; n]; n];
        let mut seen = vec![vec![false; n]; n];
        for &(u, v, m) in edges {
            if u == v {
                return Err(GraphError::Loop(names[u].clone()));
            }
            if seen[u][v] {
                return Err(GraphError::MultiEdge(names[u].clone(), names[v].clone()));
            }
            if let Some(m) = m {
                if m < 2 {
                    return Err(GraphError::BadLabel(names[u].clone(), names[v].clone(), m));
                }
            }
            seen[u][v] = true;
            seen[v][u] = true;
            labels[u][v] = m;
            labels[v][u] = m;
        }
        Ok(ArtinGraph { name: "graph".into(), names, labels, order: None })
    }

    /// Convenience constructor from `(u, v, m)` name triples, `m = 0` meaning `inf`.
    pub fn from_edges(vertices: &[&str], edges: &[(&str, &str, u32)]) -> Result<Self, GraphError> {
        let names: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| GraphError::Word(WordError::UnknownGenerator(s.to_string())))
        };
        let mut es = Vec::new();
        for &(u, v, m) in edges {
            es.push((idx(u)?, idx(v)?, if m == 0 { None } else { Some(m) }));
        }
        ArtinGraph::new(names, &es)
    }

    /// The dihedral group on `a`, `b` with label `m` (`None` for the free group).
    pub fn dihedral(m: Option<u32>) -> Self {
        let mut g = ArtinGraph::new(vec!["a".into(), "b".into()], &[(0, 1, m)])
            .expect("valid dihedral graph");
        g.name = match m {
            Some(m) => format!("dihedral{m}"),
            None => "free2".into(),
        };
        g
    }

    /// Triangle on `a`, `b`, `c` with labels on ab, bc, ca.
    pub fn triangle(ab: u32, bc: u32, ca: u32) -> Self {
        let mut g = ArtinGraph::from_edges(
            &["a", "b", "c"],
            &[("a", "b", ab), ("b", "c", bc), ("c", "a", ca)],
        )
        .expect("valid triangle");
        g.name = format!("triangle{ab}{bc}{ca}");
        g
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_name(&self, v: u16) -> &str {
        &self.names[v as usize]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<u16> {
        self.names.iter().position(|n| n == name).map(|i| i as u16)
    }

    /// `Some(m)` for a finite label, `None` for no relation.
    pub fn label(&self, u: u16, v: u16) -> Option<u32> {
        self.labels[u as usize][v as usize]
    }

    /// Edges with finite labels, each once with `u < v`.
    pub fn edges(&self) -> Vec<(u16, u16, u32)> {
        let n = self.vertex_count();
        let mut out = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if let Some(m) = self.labels[u][v] {
                    out.push((u as u16, v as u16, m));
                }
            }
        }
        out
    }

    pub fn neighbors(&self, v: u16) -> Vec<u16> {
        (0..self.vertex_count() as u16)
            .filter(|&u| self.label(u, v).is_some())
            .collect()
    }

    pub fn is_even(&self) -> bool {
        self.edges().iter().all(|&(_, _, m)| m % 2 == 0)
    }

    pub fn is_large(&self) -> bool {
        self.edges().iter().all(|&(_, _, m)| m >= 3)
    }

    pub fn is_large_even(&self) -> bool {
        self.edges().iter().all(|&(_, _, m)| m >= 4 && m % 2 == 0)
    }

    /// Drops every edge at `r`, keeping vertex numbering. On words avoiding `r` this
    /// computes in the parabolic subgroup on the remaining vertices, since the result
    /// is that subgroup free-product a copy of the integers.
    pub fn isolate(&self, r: u16) -> ArtinGraph {
        let mut g = self.clone();
        for v in 0..self.vertex_count() {
            g.labels[r as usize][v] = None;
            g.labels[v][r as usize] = None;
        }
        g.name = format!("{}-{}", self.name, self.names[r as usize]);
        g
    }

    /// The full subgraph on `keep`, renumbered in the given sequence. A custom order is
    /// restricted to the kept vertices.
    pub fn induced(&self, keep: &[u16]) -> ArtinGraph {
        let names = keep.iter().map(|&v| self.names[v as usize].clone()).collect();
        let mut labels = vec![vec![None; keep.len()]; keep.len()];
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate() {
                labels[i][j] = self.labels[u as usize][v as usize];
            }
        }
        let order = self.order.as_ref().map(|ls| {
            ls.iter()
                .filter_map(|l| keep.iter().position(|&v| v == l.name()).map(|i| l.with_name(i as u16)))
                .collect()
        });
        ArtinGraph { name: self.name.clone(), names, labels, order }
    }

    /// The induced subgraph on every vertex but `r`, with the map from new to old vertex ids.
    pub fn without(&self, r: u16) -> (ArtinGraph, Vec<u16>) {
        let keep: Vec<u16> = (0..self.vertex_count() as u16).filter(|&v| v != r).collect();
        let mut g = self.induced(&keep);
        g.name = format!("{}-{}", self.name, self.names[r as usize]);
        (g, keep)
    }

    /// The order from the file's `[order]` section, or declaration order
    /// with each positive letter immediately before its inverse.
    pub fn default_order(&self) -> LexOrder {
        match &self.order {
            Some(ls) => LexOrder::from_letters(ls.clone()).expect("validated at parse time"),
            None => LexOrder::standard(self.vertex_count()),
        }
    }

    pub fn set_order(&mut self, order: &LexOrder) {
        self.order = Some(order.letters().to_vec());
    }

    /// Parses `name` / `name^k` tokens separated by whitespace.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let k: i64 = e
                        .parse()
                        .map_err(|_| WordError::MalformedExponent(tok.to_string()))?;
                    if k == 0 {
                        return Err(WordError::MalformedExponent(tok.to_string()));
                    }
                    (n, k)
                }
                None => (tok, 1),
            };
            let g = self
                .vertex(name)
                .ok_or_else(|| WordError::UnknownGenerator(name.to_string()))?;
            letters.extend(Word::power(g, exp).into_letters());
        }
        Ok(Word::new(letters))
    }

    /// Renders one token per letter (`a`, `a^-1`), so `parse_word` inverts it.
    pub fn render_word(&self, w: &[Letter]) -> String {
        let mut s = String::new();
        for (i, l) in w.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(self.vertex_name(l.name()));
            if l.is_negative() {
                s.push_str("^-1");
            }
        }
        s
    }

    /// Like `render_word` but `ε` for the empty word.
    pub fn display_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            "ε".into()
        } else {
            self.render_word(w)
        }
    }

    pub fn parse_order(&self, text: &str) -> Result<LexOrder, WordError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let w = self.parse_word(tok)?;
            if w.len() != 1 {
                return Err(WordError::InvalidOrder(format!(
                    "`{tok}` is not a single signed letter"
                )));
            }
            letters.push(w[0]);
        }
        if letters.len() != 2 * self.vertex_count() {
            return Err(WordError::InvalidOrder(format!(
                "expected {} letters, got {}",
                2 * self.vertex_count(),
                letters.len()
            )));
        }
        LexOrder::from_letters(letters)
    }

    /// Reads the `[vertices]` / `[edges]` / `[order]` text format. `#` starts a comment.
    pub fn parse(text: &str) -> Result<ArtinGraph, GraphError> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Vertices,
            Edges,
            Order,
        }
        let mut section = Section::None;
        let mut names: Vec<String> = Vec::new();
        let mut raw_edges: Vec<(usize, String, String, Option<u32>)> = Vec::new();
        let mut order_text = String::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let no = no + 1;
            if line.is_empty() {
                continue;
            }
            match line {
                "[vertices]" => section = Section::Vertices,
                "[edges]" => section = Section::Edges,
                "[order]" => section = Section::Order,
                _ if line.starts_with('[') => {
                    return Err(GraphError::Syntax { line: no, msg: format!("unknown section {line}") })
                }
                _ => match section {
                    Section::None => {
                        return Err(GraphError::Syntax { line: no, msg: "content before any section".into() })
                    }
                    Section::Vertices => {
                        for n in line.split_whitespace() {
                            if n.contains('^') {
                                return Err(GraphError::Syntax {
                                    line: no,
                                    msg: format!("vertex name `{n}` contains `^`"),
                                });
                            }
                            names.push(n.to_string());
                        }
                    }
                    Section::Edges => {
                        let parts: Vec<&str> = line.split_whitespace().collect();
                        if parts.len() != 3 {
                            return Err(GraphError::Syntax { line: no, msg: "expected `u v m`".into() });
                        }
                        let m = if parts[2] == "inf" {
                            None
                        } else {
                            Some(parts[2].parse::<u32>().map_err(|_| GraphError::Syntax {
                                line: no,
                                msg: format!("bad label `{}`", parts[2]),
                            })?)
                        };
                        raw_edges.push((no, parts[0].into(), parts[1].into(), m));
                    }
                    Section::Order => {
                        order_text.push(' ');
                        order_text.push_str(line);
                    }
                },
            }
        }
        let mut edges = Vec::new();
        for (no, u, v, m) in raw_edges {
            let find = |s: &str| {
                names.iter().position(|n| n == s).ok_or_else(|| GraphError::Syntax {
                    line: no,
                    msg: format!("unknown vertex `{s}`"),
                })
            };
            edges.push((find(&u)?, find(&v)?, m));
        }
        let mut g = ArtinGraph::new(names, &edges)?;
        if !order_text.trim().is_empty() {
            let ord = g.parse_order(&order_text)?;
            g.order = Some(ord.letters().to_vec());
        }
        Ok(g)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("[vertices]\n");
        for n in &self.names {
            let _ = writeln!(s, "{n}");
        }
        s.push_str("[edges]\n");
        for (u, v, m) in self.edges() {
            let _ = writeln!(s, "{} {} {}", self.vertex_name(u), self.vertex_name(v), m);
        }
        if let Some(ls) = &self.order {
            let _ = writeln!(s, "[order]\n{}", self.render_word(ls));
        }
        s
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIANGLE: &str = "\
[vertices]
a
b
c
[edges]
a b 4
b c 4
c a 4   # comment
[order]
a a^-1 b b^-1 c c^-1
";

    #[test]
    fn parse_and_flags() {
        let g = ArtinGraph::parse(TRIANGLE).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert!(g.is_large_even());
        assert_eq!(g.label(0, 2), Some(4));
        let g2 = ArtinGraph::triangle(2, 4, 4);
        assert!(g2.is_even() && !g2.is_large());
        let g3 = ArtinGraph::triangle(3, 4, 0);
        assert!(g3.is_large() && !g3.is_even());
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(matches!(
            ArtinGraph::parse("[vertices]\na\nb\n[edges]\na a 4\n"),
            Err(GraphError::Loop(_))
        ));
        assert!(matches!(
            ArtinGraph::parse("[vertices]\na\nb\n[edges]\na b 4\nb a 6\n"),
            Err(GraphError::MultiEdge(..))
        ));
        assert!(matches!(
            ArtinGraph::parse("[vertices]\na\nb\n[edges]\na b 1\n"),
            Err(GraphError::BadLabel(..))
        ));
        assert!(ArtinGraph::parse("[vertices]\na\n[edges]\na z 4\n").is_err());
    }

    #[test]
    fn word_syntax() {
        let g = ArtinGraph::triangle(4, 4, 4);
        let w = g.parse_word("a^-1 b^3 a").unwrap();
        assert_eq!(
            w.letters(),
            &[Letter::neg(0), Letter::pos(1), Letter::pos(1), Letter::pos(1), Letter::pos(0)]
        );
        assert_eq!(g.parse_word("").unwrap(), Word::empty());
        assert_eq!(g.parse_word("c b c a b a c b c b").unwrap().len(), 10);
        assert_eq!(g.parse_word(&g.render_word(&w)).unwrap(), w);
        assert_eq!(g.parse_word("d"), Err(WordError::UnknownGenerator("d".into())));
        assert!(matches!(g.parse_word("a^x"), Err(WordError::MalformedExponent(_))));
        assert!(matches!(g.parse_word("a^0"), Err(WordError::MalformedExponent(_))));
    }

    #[test]
    fn order_section_roundtrip() {
        let g = ArtinGraph::parse("[vertices]\na b\n[order]\nb a b^-1 a^-1\n").unwrap();
        let ord = g.default_order();
        assert!(ord.less(Letter::pos(1), Letter::pos(0)));
        let again = ArtinGraph::parse(&g.to_text()).unwrap();
        assert_eq!(again.default_order(), ord);
        assert_eq!(again.hash(), g.hash());
    }

    #[test]
    fn isolate_keeps_numbering() {
        let g = ArtinGraph::triangle(4, 6, 8);
        let h = g.isolate(2);
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edges(), vec![(0, 1, 4)]);
    }
}
