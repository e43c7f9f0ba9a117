//! Distinct Θ-palindromic factors, Θ-defect and Θ-palindromic closure.
//!
//! [`PalIndex`] is a palindromic tree (eertree) generalized to an arbitrary
//! involutive antimorphism: a Θ-palindrome ending with `a` must begin with
//! `Θ(a)`, so suffix-link walks look for `Θ(a)` in front of the candidate
//! instead of `a`, and length-one nodes exist only for fixed letters.
//! [`distinct_theta_palindromes_naive`] is the quadratic reference used to
//! check it.

use std::collections::{BTreeSet, HashSet};
use std::ops::Range;

use serde::Serialize;

use crate::error::Result;
use crate::words::{Antimorphism, Letter, Word};

/// Node id of the virtual root (length −1).
pub const IMAGINARY: usize = 0;
/// Node id of the root representing ε.
pub const EMPTY: usize = 1;

#[derive(Debug, Clone)]
struct Node {
    len: isize,
    link: usize,
    parent: usize,
    parent_letter: Option<Letter>,
    edges: Vec<(Letter, usize)>,
    first_end: usize,
    lps_hits: usize,
}

impl Node {
    fn root(len: isize, link: usize) -> Self {
        Self {
            len,
            link,
            parent: link,
            parent_letter: None,
            edges: Vec::new(),
            first_end: 0,
            lps_hits: 0,
        }
    }

    fn child(&self, a: Letter) -> Option<usize> {
        self.edges.iter().find(|&&(l, _)| l == a).map(|&(_, c)| c)
    }
}

/// Outcome of appending one letter to a [`PalIndex`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppendReport {
    /// Position range of the newly created Θ-palindrome, if any.
    pub new_palindrome: Option<Range<usize>>,
    /// Position range of the longest Θ-palindromic suffix (empty for ε).
    pub lps: Range<usize>,
    /// Node of the longest Θ-palindromic suffix.
    pub lps_node: usize,
    /// Whether the longest Θ-palindromic suffix occurs exactly once.
    pub lps_unioccurrent: bool,
}

/// Incremental index of the distinct Θ-palindromic factors of a word.
#[derive(Debug, Clone)]
pub struct PalIndex {
    theta: Antimorphism,
    text: Vec<Letter>,
    nodes: Vec<Node>,
    last: usize,
    pair_seen: Vec<bool>,
    gamma: usize,
}

impl PalIndex {
    pub fn new(theta: Antimorphism) -> Self {
        let size = theta.alphabet().size();
        Self {
            theta,
            text: Vec::new(),
            nodes: vec![Node::root(-1, IMAGINARY), Node::root(0, IMAGINARY)],
            last: EMPTY,
            pair_seen: vec![false; size],
            gamma: 0,
        }
    }

    pub fn from_word(theta: &Antimorphism, w: &Word) -> Result<Self> {
        theta.check_word(w)?;
        Ok(Self::from_slice(theta, w.symbols()))
    }

    pub fn from_slice(theta: &Antimorphism, w: &[Letter]) -> Self {
        let mut idx = Self::new(theta.clone());
        for &a in w {
            idx.push(a);
        }
        idx
    }

    pub fn antimorphism(&self) -> &Antimorphism {
        &self.theta
    }

    pub fn text(&self) -> &[Letter] {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    /// `#PalΘ` of the processed prefix, ε included.
    pub fn palindrome_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn defect(&self) -> usize {
        let bound = self.text.len() + 1 - self.gamma;
        let count = self.palindrome_count();
        debug_assert!(count <= bound, "palindrome count exceeds |w|+1-γ");
        bound - count
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node_len(&self, node: usize) -> isize {
        self.nodes[node].len
    }

    pub fn suffix_link(&self, node: usize) -> usize {
        self.nodes[node].link
    }

    /// Parent node and the letter `a` such that this node is `Θ(a)·parent·a`.
    pub fn parent(&self, node: usize) -> Option<(usize, Letter)> {
        self.nodes[node].parent_letter.map(|l| (self.nodes[node].parent, l))
    }

    /// End position (exclusive) of the first occurrence of a node.
    pub fn first_end(&self, node: usize) -> usize {
        self.nodes[node].first_end
    }

    /// Position range of the first occurrence of a non-root node.
    pub fn first_range(&self, node: usize) -> Range<usize> {
        let n = &self.nodes[node];
        let len = n.len.max(0) as usize;
        n.first_end - len..n.first_end
    }

    pub fn node_word(&self, node: usize) -> Word {
        let r = self.first_range(node);
        Word::from_trusted(self.theta.alphabet().clone(), self.text[r].to_vec())
    }

    pub fn lps_node(&self) -> usize {
        self.last
    }

    pub fn lps_len(&self) -> usize {
        self.nodes[self.last].len.max(0) as usize
    }

    /// Full occurrence count of every node (number of end positions),
    /// obtained by pushing the per-step hit counters along suffix links.
    pub fn occurrence_counts(&self) -> Vec<usize> {
        let mut counts: Vec<usize> = self.nodes.iter().map(|n| n.lps_hits).collect();
        // Nodes are created in order of increasing first end, and a suffix
        // link always points to an older node, so reverse creation order is
        // a valid topological order.
        for v in (2..self.nodes.len()).rev() {
            let link = self.nodes[v].link;
            counts[link] += counts[v];
        }
        counts[EMPTY] = self.text.len() + 1;
        counts[IMAGINARY] = 0;
        counts
    }

    /// Iterates over the Θ-palindromic suffixes of the processed prefix,
    /// longest first, ending with ε.
    pub fn suffix_chain(&self) -> impl Iterator<Item = usize> + '_ {
        let mut cur = Some(self.last);
        std::iter::from_fn(move || {
            let node = cur?;
            cur = (node != EMPTY).then(|| self.nodes[node].link);
            Some(node)
        })
    }

    fn fits(&self, node: usize, i: usize, want: Letter) -> bool {
        let len = self.nodes[node].len;
        if len < 0 {
            return self.text[i] == want;
        }
        let j = i as isize - len - 1;
        j >= 0 && self.text[j as usize] == want
    }

    /// Walks suffix links from `from` to the first node `X` such that
    /// `Θ(a)·X·a` is a suffix of the text. `None` if even the virtual root
    /// fails, which happens exactly when `a ≠ Θ(a)`.
    fn find_extendable(&self, mut node: usize, i: usize, want: Letter) -> Option<usize> {
        loop {
            if self.fits(node, i, want) {
                return Some(node);
            }
            if node == IMAGINARY {
                return None;
            }
            node = self.nodes[node].link;
        }
    }

    pub fn append(&mut self, a: Letter) -> Result<AppendReport> {
        self.theta.alphabet().check(a)?;
        Ok(self.push(a))
    }

    pub(crate) fn push(&mut self, a: Letter) -> AppendReport {
        let want = self.theta.image(a);
        if a != want && !self.pair_seen[a as usize] && !self.pair_seen[want as usize] {
            self.gamma += 1;
        }
        self.pair_seen[a as usize] = true;

        self.text.push(a);
        let i = self.text.len() - 1;
        let end = i + 1;

        let Some(x) = self.find_extendable(self.last, i, want) else {
            self.last = EMPTY;
            return AppendReport {
                new_palindrome: None,
                lps: end..end,
                lps_node: EMPTY,
                lps_unioccurrent: false,
            };
        };

        if let Some(existing) = self.nodes[x].child(a) {
            self.last = existing;
            self.nodes[existing].lps_hits += 1;
            let len = self.nodes[existing].len as usize;
            return AppendReport {
                new_palindrome: None,
                lps: end - len..end,
                lps_node: existing,
                lps_unioccurrent: false,
            };
        }

        let len = self.nodes[x].len + 2;
        let link = if len == 1 {
            EMPTY
        } else {
            match self.find_extendable(self.nodes[x].link, i, want) {
                Some(y) => self.nodes[y]
                    .child(a)
                    .expect("proper Θ-palindromic suffix must already be indexed"),
                None => EMPTY,
            }
        };
        let id = self.nodes.len();
        self.nodes.push(Node {
            len,
            link,
            parent: x,
            parent_letter: Some(a),
            edges: Vec::new(),
            first_end: end,
            lps_hits: 1,
        });
        self.nodes[x].edges.push((a, id));
        self.last = id;
        let range = end - len as usize..end;
        AppendReport {
            new_palindrome: Some(range.clone()),
            lps: range,
            lps_node: id,
            lps_unioccurrent: true,
        }
    }
}

pub fn pal_index_append(idx: &mut PalIndex, a: Letter) -> Result<AppendReport> {
    idx.append(a)
}

/// Exact set of distinct Θ-palindromic factors (ε included) by expanding
/// around every center. Quadratic in the worst case.
pub fn distinct_theta_palindromes_naive(theta: &Antimorphism, w: &Word) -> Result<BTreeSet<Word>> {
    theta.check_word(w)?;
    Ok(naive_palindrome_set(theta, w.symbols())
        .into_iter()
        .map(|s| Word::from_trusted(w.alphabet().clone(), s.to_vec()))
        .collect())
}

/// Number of distinct Θ-palindromic factors of `w`, ε included.
pub fn count_theta_palindromes_naive(theta: &Antimorphism, w: &[Letter]) -> usize {
    naive_palindrome_set(theta, w).len()
}

fn naive_palindrome_set<'a>(theta: &Antimorphism, w: &'a [Letter]) -> HashSet<&'a [Letter]> {
    let n = w.len();
    let mut seen: HashSet<&[Letter]> = HashSet::new();
    seen.insert(&w[0..0]);
    // Center c in 0..2n: even c is the gap before position c/2, odd c is the
    // letter at (c-1)/2.
    for c in 0..=2 * n {
        let (mut lo, mut hi) = if c % 2 == 0 {
            (c / 2, c / 2)
        } else {
            let p = (c - 1) / 2;
            if theta.image(w[p]) != w[p] {
                continue;
            }
            (p, p + 1)
        };
        while lo > 0 && hi < n && w[lo - 1] == theta.image(w[hi]) {
            lo -= 1;
            hi += 1;
        }
        // Shrink from the longest; once a palindrome is known, every
        // shorter one on this center was recorded together with it.
        while hi > lo {
            if !seen.insert(&w[lo..hi]) {
                break;
            }
            lo += 1;
            hi -= 1;
        }
    }
    seen
}

/// Maximal Θ-palindrome radii around every center (Manacher's algorithm
/// with `Θ` in place of letter equality). Answers "is `w[a..b]` a
/// Θ-palindrome" in O(1).
#[derive(Debug, Clone)]
pub struct PalRadii {
    /// `radius[c]` for c in 0..=2n; `-1` marks a letter center whose letter
    /// is not Θ-fixed.
    radius: Vec<i32>,
}

impl PalRadii {
    pub fn new(theta: &Antimorphism, w: &[Letter]) -> Self {
        let n = w.len();
        let m = 2 * n + 1;
        // t[k]: even k is a separator, odd k is w[(k-1)/2].
        let at = |k: usize| -> Option<Letter> { (k % 2 == 1).then(|| w[(k - 1) / 2]) };
        let matches = |i: usize, j: usize| match (at(i), at(j)) {
            (None, None) => true,
            (Some(x), Some(y)) => x == theta.image(y),
            _ => false,
        };
        let mut radius = vec![0i32; m];
        let (mut center, mut right) = (0usize, 0usize);
        for k in 0..m {
            if let Some(x) = at(k) {
                if theta.image(x) != x {
                    radius[k] = -1;
                    continue;
                }
            }
            let mut r = 0usize;
            if k < right {
                let mirror = 2 * center - k;
                r = (radius[mirror].max(0) as usize).min(right - k);
            }
            while k > r && k + r + 1 < m && matches(k - r - 1, k + r + 1) {
                r += 1;
            }
            radius[k] = r as i32;
            if k + r > right {
                center = k;
                right = k + r;
            }
        }
        Self { radius }
    }

    /// Whether `w[start..end]` is a Θ-palindrome.
    #[inline]
    pub fn is_palindrome(&self, start: usize, end: usize) -> bool {
        if end <= start {
            return true;
        }
        self.radius[start + end] >= (end - start) as i32
    }

    /// Length of the longest Θ-palindrome centered at `c` (in 0..=2n).
    pub fn max_len_at(&self, c: usize) -> Option<usize> {
        let r = self.radius[c];
        (r >= 0).then_some(r as usize)
    }
}

pub fn defect(theta: &Antimorphism, w: &Word) -> Result<usize> {
    Ok(PalIndex::from_word(theta, w)?.defect())
}

pub fn is_rich_finite(theta: &Antimorphism, w: &Word) -> Result<bool> {
    Ok(defect(theta, w)? == 0)
}

/// Defects of every prefix `d_0..d_|w|` plus the quantities they come from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectProfile {
    pub values: Vec<usize>,
    pub gammas: Vec<usize>,
    pub pal_counts: Vec<usize>,
}

impl DefectProfile {
    pub fn final_defect(&self) -> usize {
        *self.values.last().unwrap_or(&0)
    }

    /// Prefix length at which the defect last increased.
    pub fn last_increase(&self) -> Option<usize> {
        (1..self.values.len())
            .rev()
            .find(|&k| self.values[k] > self.values[k - 1])
    }

    /// True when the defect does not grow over the final `fraction` of
    /// the prefix.
    pub fn is_stable_over_tail(&self, fraction: f64) -> bool {
        let n = self.values.len().saturating_sub(1);
        let tail_start = n - ((n as f64) * fraction).floor() as usize;
        self.last_increase().is_none_or(|k| k <= tail_start)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("prefix_length,defect,gamma,pal_count\n");
        for (k, ((d, g), p)) in self
            .values
            .iter()
            .zip(&self.gammas)
            .zip(&self.pal_counts)
            .enumerate()
        {
            out.push_str(&format!("{k},{d},{g},{p}\n"));
        }
        out
    }
}

pub fn defect_profile(theta: &Antimorphism, w: &Word) -> Result<DefectProfile> {
    theta.check_word(w)?;
    Ok(defect_profile_slice(theta, w.symbols()))
}

pub fn defect_profile_slice(theta: &Antimorphism, w: &[Letter]) -> DefectProfile {
    let mut idx = PalIndex::new(theta.clone());
    let mut values = Vec::with_capacity(w.len() + 1);
    let mut gammas = Vec::with_capacity(w.len() + 1);
    let mut pal_counts = Vec::with_capacity(w.len() + 1);
    values.push(0);
    gammas.push(0);
    pal_counts.push(1);
    for &a in w {
        idx.push(a);
        values.push(idx.defect());
        gammas.push(idx.gamma());
        pal_counts.push(idx.palindrome_count());
    }
    DefectProfile {
        values,
        gammas,
        pal_counts,
    }
}

pub fn longest_theta_pal_suffix(theta: &Antimorphism, w: &Word) -> Result<Word> {
    let idx = PalIndex::from_word(theta, w)?;
    Ok(w.factor(w.len() - idx.lps_len(), w.len()))
}

/// Shortest Θ-palindrome having `w` as a prefix.
pub fn theta_pal_closure(theta: &Antimorphism, w: &Word) -> Result<Word> {
    let mut idx = PalIndex::from_word(theta, w)?;
    close_in_place(&mut idx);
    Ok(Word::from_trusted(w.alphabet().clone(), idx.text().to_vec()))
}

/// Extends the indexed text to its Θ-palindromic closure, keeping the index
/// in sync. Returns the number of letters appended.
pub(crate) fn close_in_place(idx: &mut PalIndex) -> usize {
    let n = idx.len();
    let head = n - idx.lps_len();
    let tail: Vec<Letter> = idx.theta.apply_slice(&idx.text[..head]);
    for &a in &tail {
        idx.push(a);
    }
    debug_assert_eq!(idx.lps_len(), idx.len());
    tail.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn ab() -> Arc<Alphabet> {
        Alphabet::from_chars("ab").unwrap()
    }

    fn tr() -> Antimorphism {
        Antimorphism::reversal(ab())
    }

    fn ex() -> Antimorphism {
        Antimorphism::from_pairs(ab(), &[("a", "b")]).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::parse(&ab(), s).unwrap()
    }

    fn abc(s: &str) -> Word {
        Word::parse(&Alphabet::from_chars("abc").unwrap(), s).unwrap()
    }

    #[test]
    fn naive_examples() {
        let x = abc("abc");
        let th = Antimorphism::reversal(x.alphabet().clone());
        assert_eq!(distinct_theta_palindromes_naive(&th, &x).unwrap().len(), 4);
        let set = distinct_theta_palindromes_naive(&ex(), &w("ab")).unwrap();
        assert_eq!(set, BTreeSet::from([w(""), w("ab")]));
        assert_eq!(
            distinct_theta_palindromes_naive(&th, &abc("abca")).unwrap().len(),
            4
        );
    }

    #[test]
    fn append_examples() {
        let mut idx = PalIndex::from_word(&tr(), &w("ab")).unwrap();
        let r = idx.append(0).unwrap();
        assert_eq!(r.new_palindrome, Some(0..3));
        assert_eq!(r.lps, 0..3);
        assert!(r.lps_unioccurrent);

        let mut idx = PalIndex::from_word(&ex(), &w("a")).unwrap();
        let r = idx.append(1).unwrap();
        assert_eq!(r.new_palindrome, Some(0..2));
        assert_eq!(idx.node_word(r.lps_node), w("ab"));

        let mut idx = PalIndex::new(ex());
        let r = idx.append(0).unwrap();
        assert_eq!(r.new_palindrome, None);
        assert!(r.lps.is_empty());
        assert!(idx.append(7).is_err());
    }

    #[test]
    fn defect_examples() {
        let x = abc("abca");
        let th = Antimorphism::reversal(x.alphabet().clone());
        assert_eq!(defect(&th, &x).unwrap(), 1);
        assert_eq!(defect(&ex(), &w("ab")).unwrap(), 0);
        assert!(is_rich_finite(&th, &abc("abc")).unwrap());
        assert!(!is_rich_finite(&th, &x).unwrap());
        // abab under the exchange: palindromes ε, ab, ba, abab; γ = 1.
        assert_eq!(
            distinct_theta_palindromes_naive(&ex(), &w("abab")).unwrap().len(),
            4
        );
        assert!(is_rich_finite(&ex(), &w("abab")).unwrap());
    }

    #[test]
    fn profile_examples() {
        let x = abc("abca");
        let th = Antimorphism::reversal(x.alphabet().clone());
        assert_eq!(defect_profile(&th, &x).unwrap().values, vec![0, 0, 0, 0, 1]);
        assert_eq!(defect_profile(&tr(), &w("aaaa")).unwrap().values, vec![0; 5]);
        let csv = defect_profile(&th, &x).unwrap().to_csv();
        assert!(csv.starts_with("prefix_length,defect,gamma,pal_count\n0,0,0,1\n"));
        assert!(csv.ends_with("4,1,0,4\n"));
    }

    #[test]
    fn closure_examples() {
        assert_eq!(theta_pal_closure(&tr(), &w("ab")).unwrap(), w("aba"));
        assert_eq!(theta_pal_closure(&ex(), &w("a")).unwrap(), w("ab"));
        assert_eq!(theta_pal_closure(&tr(), &w("aba")).unwrap(), w("aba"));
        assert_eq!(theta_pal_closure(&tr(), &w("")).unwrap(), w(""));
    }

    #[test]
    fn lps_examples() {
        assert_eq!(longest_theta_pal_suffix(&tr(), &w("abaab")).unwrap(), w("baab"));
        assert_eq!(longest_theta_pal_suffix(&ex(), &w("aab")).unwrap(), w("ab"));
        assert_eq!(longest_theta_pal_suffix(&ex(), &w("a")).unwrap(), w(""));
    }

    #[test]
    fn closure_is_minimal_exhaustively() {
        for theta in [tr(), ex()] {
            for len in 0..=8u32 {
                for bits in 0..(1u32 << len) {
                    let s: Vec<Letter> = (0..len).map(|i| (bits >> i) & 1).collect();
                    let x = Word::new(ab(), s.clone()).unwrap();
                    let c = theta_pal_closure(&theta, &x).unwrap();
                    assert!(theta.is_palindrome(&c).unwrap());
                    assert!(x.is_prefix_of(&c));
                    // Any Θ-palindrome with prefix x of length m ≥ |x| is
                    // determined by x: its letter at i ≥ |x| is Θ(x[m-1-i]).
                    for m in x.len()..c.len() {
                        let cand: Vec<Letter> = (0..m)
                            .map(|i| if i < s.len() { s[i] } else { theta.image(s[m - 1 - i]) })
                            .collect();
                        assert!(
                            !theta.is_palindrome_slice(&cand),
                            "shorter closure of length {m} for {x}"
                        );
                    }
                }
            }
        }
    }

    fn random_theta(size: usize, swaps: &[usize]) -> Antimorphism {
        let alpha = Alphabet::new((0..size).map(|i| char::from(b'a' + i as u8).to_string())).unwrap();
        let mut pairing: Vec<Letter> = (0..size as Letter).collect();
        let mut free: Vec<Letter> = (0..size as Letter).collect();
        for &s in swaps {
            if free.len() < 2 {
                break;
            }
            let i = free.remove(s % free.len());
            let j = free.remove(s % free.len());
            pairing[i as usize] = j;
            pairing[j as usize] = i;
        }
        Antimorphism::new(alpha, pairing).unwrap()
    }

    fn naive_lps(theta: &Antimorphism, w: &[Letter]) -> usize {
        (0..=w.len())
            .find(|&s| theta.is_palindrome_slice(&w[s..]))
            .map(|s| w.len() - s)
            .unwrap()
    }

    proptest! {
        #[test]
        fn index_matches_oracle_per_step(
            size in 1usize..5,
            swaps in proptest::collection::vec(0usize..8, 0..3),
            raw in proptest::collection::vec(0u32..4, 0..120),
        ) {
            let theta = random_theta(size, &swaps);
            let s: Vec<Letter> = raw.into_iter().map(|x| x % size as Letter).collect();
            let mut idx = PalIndex::new(theta.clone());
            let mut prev_count = 1;
            let mut prev_defect = 0;
            for k in 0..s.len() {
                let r = idx.push(s[k]);
                let prefix = &s[..=k];
                let oracle = count_theta_palindromes_naive(&theta, prefix);
                prop_assert_eq!(idx.palindrome_count(), oracle);
                prop_assert!(oracle <= prefix.len() + 1 - theta.gamma_slice(prefix));
                // at most one new palindrome, and it is the lps
                prop_assert!(oracle - prev_count <= 1);
                prop_assert_eq!(r.new_palindrome.is_some(), oracle == prev_count + 1);
                prop_assert_eq!(r.lps.len(), naive_lps(&theta, prefix));
                if let Some(range) = &r.new_palindrome {
                    prop_assert_eq!(range, &r.lps);
                }
                // lps unioccurrent iff a palindrome was created
                let lps = &prefix[r.lps.clone()];
                let occ = if lps.is_empty() { prefix.len() + 1 } else {
                    crate::words::occurrences_slice(prefix, lps).len()
                };
                prop_assert_eq!(occ == 1, r.lps_unioccurrent);
                prop_assert_eq!(r.lps_unioccurrent, r.new_palindrome.is_some());
                let d = idx.defect();
                prop_assert!(d == prev_defect || d == prev_defect + 1);
                prev_count = oracle;
                prev_defect = d;
            }
        }

        #[test]
        fn suffix_links_point_to_longest_proper_suffix(
            size in 1usize..4,
            swaps in proptest::collection::vec(0usize..8, 0..2),
            raw in proptest::collection::vec(0u32..3, 1..80),
        ) {
            let theta = random_theta(size, &swaps);
            let s: Vec<Letter> = raw.into_iter().map(|x| x % size as Letter).collect();
            let idx = PalIndex::from_slice(&theta, &s);
            let counts = idx.occurrence_counts();
            for (v, &count) in counts.iter().enumerate().skip(2) {
                let word = idx.node_word(v);
                let p = word.symbols();
                prop_assert!(theta.is_palindrome_slice(p));
                if p.len() == 1 {
                    prop_assert_eq!(theta.image(p[0]), p[0]);
                }
                let expected = (1..=p.len()).find(|&k| theta.is_palindrome_slice(&p[k..])).unwrap();
                prop_assert_eq!(idx.node_len(idx.suffix_link(v)), (p.len() - expected) as isize);
                prop_assert_eq!(count, crate::words::occurrences_slice(&s, p).len());
            }
        }

        #[test]
        fn radii_match_brute_force(
            size in 1usize..4,
            swaps in proptest::collection::vec(0usize..8, 0..2),
            raw in proptest::collection::vec(0u32..3, 0..60),
        ) {
            let theta = random_theta(size, &swaps);
            let s: Vec<Letter> = raw.into_iter().map(|x| x % size as Letter).collect();
            let radii = PalRadii::new(&theta, &s);
            for a in 0..=s.len() {
                for b in a..=s.len() {
                    prop_assert_eq!(radii.is_palindrome(a, b), theta.is_palindrome_slice(&s[a..b]));
                }
            }
        }
    }

    #[test]
    fn unary_words_are_rich() {
        let th = Antimorphism::reversal(Alphabet::from_chars("a").unwrap());
        let idx = PalIndex::from_slice(&th, &[0; 50]);
        assert_eq!(idx.palindrome_count(), 51);
        assert_eq!(idx.defect(), 0);
    }
}
