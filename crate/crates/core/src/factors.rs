//! Factor-set machinery shared by the complexity, Rauzy and return-word
//! analyses.

use std::collections::HashMap;

use crate::words::Letter;

/// Dense class ids for all windows of one length, refined one letter at a
/// time: the class of `w[i..i+n+1]` is determined by the class of
/// `w[i..i+n]` and the letter `w[i+n]`. Exact (no hashing of contents).
#[derive(Debug, Clone)]
pub struct LengthClasses<'a> {
    text: &'a [Letter],
    len: usize,
    ids: Vec<u32>,
    first: Vec<usize>,
}

impl<'a> LengthClasses<'a> {
    /// Classes of length 0: a single class (ε) at every position.
    pub fn new(text: &'a [Letter]) -> Self {
        Self {
            text,
            len: 0,
            ids: vec![0; text.len() + 1],
            first: vec![0],
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Number of distinct factors of the current length.
    pub fn count(&self) -> usize {
        self.first.len()
    }

    /// Class of the window starting at each position.
    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    /// First occurrence of each class.
    pub fn first_occurrences(&self) -> &[usize] {
        &self.first
    }

    pub fn representative(&self, class: u32) -> &'a [Letter] {
        let s = self.first[class as usize];
        &self.text[s..s + self.len]
    }

    /// Advances to length `len + 1`. Returns false once windows run out.
    pub fn advance(&mut self) -> bool {
        let n = self.len;
        if n >= self.text.len() {
            return false;
        }
        let windows = self.text.len() - n;
        let mut map: HashMap<(u32, Letter), u32> = HashMap::with_capacity(self.first.len() * 2);
        let mut ids = Vec::with_capacity(windows);
        let mut first = Vec::new();
        for i in 0..windows {
            let key = (self.ids[i], self.text[i + n]);
            let next = first.len() as u32;
            let id = *map.entry(key).or_insert(next);
            if id == next {
                first.push(i);
            }
            ids.push(id);
        }
        self.ids = ids;
        self.first = first;
        self.len = n + 1;
        true
    }
}

/// Occurrence lists of every distinct factor of length `n`, keyed by the
/// factor itself.
pub fn occurrence_groups(text: &[Letter], n: usize) -> HashMap<&[Letter], Vec<usize>> {
    let mut groups: HashMap<&[Letter], Vec<usize>> = HashMap::new();
    if n == 0 || n > text.len() {
        return groups;
    }
    for (i, win) in text.windows(n).enumerate() {
        groups.entry(win).or_default().push(i);
    }
    groups
}

/// Left and right extension letters of a factor, sorted and deduplicated.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Extensions {
    pub left: Vec<Letter>,
    pub right: Vec<Letter>,
}

fn insert_sorted(v: &mut Vec<Letter>, a: Letter) {
    if let Err(pos) = v.binary_search(&a) {
        v.insert(pos, a);
    }
}

/// Extension letters for every distinct factor of length `n`.
pub fn extension_map(text: &[Letter], n: usize) -> HashMap<&[Letter], Extensions> {
    let mut map: HashMap<&[Letter], Extensions> = HashMap::new();
    if n > text.len() {
        return map;
    }
    for i in 0..=text.len() - n {
        let e = map.entry(&text[i..i + n]).or_default();
        if i > 0 {
            insert_sorted(&mut e.left, text[i - 1]);
        }
        if i + n < text.len() {
            insert_sorted(&mut e.right, text[i + n]);
        }
    }
    map
}

/// Smallest period of `text` (its length when aperiodic within itself).
pub fn smallest_period(text: &[Letter]) -> usize {
    let n = text.len();
    if n == 0 {
        return 0;
    }
    // KMP failure function.
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && text[i] != text[k] {
            k = fail[k - 1];
        }
        if text[i] == text[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

/// Z-array: `z[i]` is the length of the longest common prefix of `text`
/// and `text[i..]`, with `z[0] = text.len()`.
pub fn z_array(text: &[Letter]) -> Vec<usize> {
    let n = text.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        if i < r {
            z[i] = z[i - l].min(r - i);
        }
        while i + z[i] < n && text[z[i]] == text[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}
