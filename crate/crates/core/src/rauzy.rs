//! Special factors, n-simple paths and super reduced Rauzy graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use crate::complexity::{safe_length, DEFAULT_SAFE_DIVISOR};
use crate::error::{Error, Result};
use crate::factors::extension_map;
use crate::words::{Antimorphism, Letter, Word};

/// Left/right special factors of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialFactors {
    pub n: usize,
    pub left_special: BTreeSet<Word>,
    pub right_special: BTreeSet<Word>,
    pub bispecial: BTreeSet<Word>,
    /// Number of left extensions of every left special factor.
    pub left_valence: BTreeMap<Word, usize>,
    /// Number of right extensions of every right special factor.
    pub right_valence: BTreeMap<Word, usize>,
}

impl SpecialFactors {
    pub fn is_special(&self, w: &Word) -> bool {
        self.left_special.contains(w) || self.right_special.contains(w)
    }

    /// All factors that are left or right special.
    pub fn all(&self) -> BTreeSet<Word> {
        self.left_special.union(&self.right_special).cloned().collect()
    }
}

fn check_n(prefix: &Word, n: usize) -> Result<()> {
    if n == 0 || n >= prefix.len() {
        return Err(Error::OutOfRange {
            what: "factor length n",
            value: n,
            min: 1,
            max: prefix.len().saturating_sub(1),
        });
    }
    Ok(())
}

pub fn special_factors(prefix: &Word, n: usize) -> Result<SpecialFactors> {
    check_n(prefix, n)?;
    let alpha = prefix.alphabet();
    let word = |s: &[Letter]| Word::from_trusted(alpha.clone(), s.to_vec());
    let mut out = SpecialFactors {
        n,
        left_special: BTreeSet::new(),
        right_special: BTreeSet::new(),
        bispecial: BTreeSet::new(),
        left_valence: BTreeMap::new(),
        right_valence: BTreeMap::new(),
    };
    for (f, ext) in extension_map(prefix.symbols(), n) {
        let (l, r) = (ext.left.len() >= 2, ext.right.len() >= 2);
        if l {
            out.left_special.insert(word(f));
            out.left_valence.insert(word(f), ext.left.len());
        }
        if r {
            out.right_special.insert(word(f));
            out.right_valence.insert(word(f), ext.right.len());
        }
        if l && r {
            out.bispecial.insert(word(f));
        }
    }
    Ok(out)
}

/// Left and right extension counts of every distinct factor of length `n`.
pub(crate) fn extension_counts(text: &[Letter], n: usize) -> (Vec<usize>, Vec<usize>) {
    extension_map(text, n)
        .into_values()
        .map(|e| (e.left.len(), e.right.len()))
        .unzip()
}

/// Start positions of all windows of length `n` that are left or right special.
pub(crate) fn special_occurrences(text: &[Letter], n: usize) -> Vec<usize> {
    let ext = extension_map(text, n);
    text.windows(n)
        .enumerate()
        .filter(|(_, win)| {
            let e = &ext[win];
            e.left.len() >= 2 || e.right.len() >= 2
        })
        .map(|(i, _)| i)
        .collect()
}

/// A factor whose only special factors of length `n` are its length-`n`
/// prefix and suffix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplePath {
    pub word: Word,
    pub first_occurrence: usize,
}

impl SimplePath {
    pub fn begin(&self, n: usize) -> Word {
        self.word.prefix(n)
    }

    pub fn end(&self, n: usize) -> Word {
        self.word.factor(self.word.len() - n, self.word.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplePaths {
    pub n: usize,
    /// Distinct paths in order of first occurrence.
    pub paths: Vec<SimplePath>,
    /// Positions of special factors of length `n`, increasing.
    pub occurrences: Vec<usize>,
    /// Whether `n` is within the prefix's safe length.
    pub confident: bool,
    pub diagnostic: Option<String>,
}

pub fn simple_paths(prefix: &Word, n: usize) -> Result<SimplePaths> {
    check_n(prefix, n)?;
    let text = prefix.symbols();
    let occurrences = special_occurrences(text, n);
    let confident = n <= safe_length(text.len(), DEFAULT_SAFE_DIVISOR);
    if occurrences.is_empty() {
        return Ok(SimplePaths {
            n,
            paths: Vec::new(),
            occurrences,
            confident,
            diagnostic: Some(format!(
                "no special factors of length {n}: the prefix looks eventually periodic"
            )),
        });
    }
    let mut seen: HashMap<&[Letter], ()> = HashMap::new();
    let mut paths = Vec::new();
    for pair in occurrences.windows(2) {
        let (s, t) = (pair[0], pair[1]);
        let e = &text[s..t + n];
        if seen.insert(e, ()).is_none() {
            paths.push(SimplePath {
                word: Word::from_trusted(prefix.alphabet().clone(), e.to_vec()),
                first_occurrence: s,
            });
        }
    }
    Ok(SimplePaths {
        n,
        paths,
        occurrences,
        confident,
        diagnostic: None,
    })
}

/// An edge `(e, Θ(e))` of the super reduced Rauzy graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    /// Lexicographically smaller member of the pair.
    pub path: Word,
    pub image: Word,
    pub from: usize,
    pub to: usize,
}

impl GraphEdge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }
}

/// Multigraph on vertex pairs `(w, Θ(w))` of special factors, with one edge
/// per pair `(e, Θ(e))` of simple paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperReducedRauzyGraph {
    pub n: usize,
    /// Canonical pairs `(min, max)` of `w` and `Θ(w)`, sorted.
    pub vertices: Vec<(Word, Word)>,
    /// Sorted by canonical pair.
    pub edges: Vec<GraphEdge>,
    pub confident: bool,
}

fn canonical(a: Word, b: Word) -> (Word, Word) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn build_graph(theta: &Antimorphism, prefix: &Word, n: usize) -> Result<SuperReducedRauzyGraph> {
    theta.check_word(prefix)?;
    let specials = special_factors(prefix, n)?;
    let paths = simple_paths(prefix, n)?;
    let image = |w: &Word| theta.apply(w).expect("same alphabet");

    let vertex_set: BTreeSet<(Word, Word)> = specials
        .all()
        .into_iter()
        .map(|w| {
            let t = image(&w);
            canonical(w, t)
        })
        .collect();
    let vertices: Vec<(Word, Word)> = vertex_set.into_iter().collect();
    let index: HashMap<&Word, usize> = vertices
        .iter()
        .enumerate()
        .flat_map(|(i, (a, b))| [(a, i), (b, i)])
        .collect();
    // begin/end of a simple path are special, so both are indexed.
    let vertex_of = |w: &Word| -> usize { index[w] };

    let mut edges: BTreeMap<(Word, Word), GraphEdge> = BTreeMap::new();
    for p in &paths.paths {
        let pair = canonical(p.word.clone(), image(&p.word));
        if edges.contains_key(&pair) {
            continue;
        }
        let (a, b) = (vertex_of(&p.begin(n)), vertex_of(&p.end(n)));
        edges.insert(
            pair.clone(),
            GraphEdge {
                path: pair.0,
                image: pair.1,
                from: a.min(b),
                to: a.max(b),
            },
        );
    }
    Ok(SuperReducedRauzyGraph {
        n,
        vertices,
        edges: edges.into_values().collect(),
        confident: paths.confident,
    })
}

impl SuperReducedRauzyGraph {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex labels and edge descriptions as plain strings; equal for
    /// isomorphic constructions.
    pub fn canonical_form(&self) -> (Vec<String>, Vec<String>) {
        let label = |i: usize| {
            let (a, b) = &self.vertices[i];
            format!("{a}|{b}")
        };
        let vs = (0..self.vertices.len()).map(label).collect();
        let es = self
            .edges
            .iter()
            .map(|e| format!("{}|{}:{}--{}", e.path, e.image, label(e.from), label(e.to)))
            .collect();
        (vs, es)
    }

    /// Graphviz rendering with deterministic ordering.
    pub fn to_dot(&self) -> String {
        let mut out = format!("graph G{} {{\n", self.n);
        let label = |i: usize| {
            let (a, b) = &self.vertices[i];
            format!("{a}|{b}")
        };
        for i in 0..self.vertices.len() {
            let _ = writeln!(out, "  \"{}\";", label(i));
        }
        for e in &self.edges {
            let text = if e.path == e.image {
                e.path.to_string()
            } else {
                format!("{}|{}", e.path, e.image)
            };
            let _ = writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{}\"];",
                label(e.from),
                label(e.to),
                text
            );
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop1Check {
    pub loops_palindromic: bool,
    pub tree_after_loop_removal: bool,
    pub vertices: usize,
    pub loop_edges: usize,
    pub non_loop_edges: usize,
    pub components: usize,
    /// A loop whose path is not a Θ-palindrome.
    pub bad_loop: Option<String>,
}

impl Prop1Check {
    pub fn holds(&self) -> bool {
        self.loops_palindromic && self.tree_after_loop_removal
    }
}

/// Both graph conditions: every loop is a Θ-palindrome, and the graph
/// without loops is a tree (the empty graph counts as one).
pub fn check_proposition1(g: &SuperReducedRauzyGraph, theta: &Antimorphism) -> Prop1Check {
    let loops: Vec<&GraphEdge> = g.edges.iter().filter(|e| e.is_loop()).collect();
    let bad_loop = loops
        .iter()
        .find(|e| !theta.is_palindrome_slice(e.path.symbols()))
        .map(|e| e.path.to_string());

    let v = g.vertices.len();
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = v;
    let mut non_loop = 0;
    for e in g.edges.iter().filter(|e| !e.is_loop()) {
        non_loop += 1;
        let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    let tree = v == 0 || (components == 1 && non_loop == v - 1);
    Prop1Check {
        loops_palindromic: bad_loop.is_none(),
        tree_after_loop_removal: tree,
        vertices: v,
        loop_edges: loops.len(),
        non_loop_edges: non_loop,
        components,
        bad_loop,
    }
}
