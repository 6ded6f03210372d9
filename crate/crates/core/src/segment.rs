//! Dictionary word segmentation over a prefix trie.
//!
//! [`segment`] runs dynamic programming over character positions and returns
//! a segmentation into lexicon words plus single-grapheme-cluster OOV
//! fallbacks that minimizes the cost tuple (OOV count, token count), with a
//! configurable tie-break. [`segment_bruteforce`] enumerates every
//! segmentation of short inputs under the same cost and is the testing
//! oracle; it deliberately avoids the trie and matches words against the
//! lexicon directly.

use std::collections::BTreeMap;

use thiserror::Error;
use unicode_segmentation::UnicodeSegmentation;

use crate::corpus::Lexicon;

#[derive(Debug, Error)]
pub enum SegmentError {
    #[error("cannot build a trie from an empty lexicon")]
    EmptyLexicon,
    #[error("text of {len} characters exceeds the brute-force limit of {limit}")]
    TooLongForBruteForce { len: usize, limit: usize },
}

/// Maximum character count accepted by [`segment_bruteforce`].
pub const BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Default)]
struct TrieNode {
    children: BTreeMap<char, TrieNode>,
    terminal: bool,
    frequency: u64,
}

/// Immutable prefix index over a lexicon.
#[derive(Debug)]
pub struct TrieIndex {
    root: TrieNode,
    words: usize,
}

impl TrieIndex {
    /// Builds the index; the lexicon must be non-empty.
    pub fn build(lexicon: &Lexicon) -> Result<TrieIndex, SegmentError> {
        if lexicon.is_empty() {
            return Err(SegmentError::EmptyLexicon);
        }
        let mut root = TrieNode::default();
        for (word, freq) in lexicon.iter() {
            let mut node = &mut root;
            for ch in word.chars() {
                node = node.children.entry(ch).or_default();
            }
            node.terminal = true;
            node.frequency = freq;
        }
        Ok(TrieIndex { root, words: lexicon.len() })
    }

    pub fn word_count(&self) -> usize {
        self.words
    }

    /// Exact membership: true iff the word is a lexicon entry.
    pub fn contains(&self, word: &str) -> bool {
        let mut node = &self.root;
        for ch in word.chars() {
            match node.children.get(&ch) {
                Some(next) => node = next,
                None => return false,
            }
        }
        node.terminal
    }

    /// All lexicon words that start at `start` in `chars`, as
    /// (char length, frequency) pairs in increasing length order.
    pub fn matches_at(&self, chars: &[char], start: usize) -> Vec<(usize, u64)> {
        let mut out = Vec::new();
        let mut node = &self.root;
        for (len, &ch) in chars[start..].iter().enumerate() {
            match node.children.get(&ch) {
                Some(next) => node = next,
                None => break,
            }
            if node.terminal {
                out.push((len + 1, node.frequency));
            }
        }
        out
    }

    /// Depth of the longest root-to-leaf path, in characters.
    pub fn depth(&self) -> usize {
        fn walk(node: &TrieNode) -> usize {
            node.children.values().map(|c| 1 + walk(c)).max().unwrap_or(0)
        }
        walk(&self.root)
    }
}

/// Tokens plus a parallel flag marking non-lexicon (fallback) tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    pub tokens: Vec<String>,
    pub oov_flags: Vec<bool>,
}

impl Segmentation {
    pub fn empty() -> Self {
        Segmentation { tokens: Vec::new(), oov_flags: Vec::new() }
    }

    pub fn oov_count(&self) -> usize {
        self.oov_flags.iter().filter(|&&f| f).count()
    }

    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    /// The (OOV count, token count) cost tuple, compared lexicographically.
    pub fn cost(&self) -> (usize, usize) {
        (self.oov_count(), self.token_count())
    }

    pub fn concat(&self) -> String {
        self.tokens.concat()
    }
}

/// Tie-break among segmentations with equal (OOV count, token count).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Prefer longer tokens earlier in the sentence.
    #[default]
    LongestFirst,
    /// Prefer the larger summed lexicon frequency, then longer tokens
    /// earlier.
    Frequency,
}

impl TieBreak {
    pub fn name(self) -> &'static str {
        match self {
            TieBreak::LongestFirst => "longest-first",
            TieBreak::Frequency => "frequency",
        }
    }

    pub fn from_name(name: &str) -> Option<TieBreak> {
        match name {
            "longest-first" => Some(TieBreak::LongestFirst),
            "frequency" => Some(TieBreak::Frequency),
            _ => None,
        }
    }
}

/// Char indices (into the char vector) where extended grapheme clusters
/// start, plus the end position. OOV fallback tokens and their boundaries
/// live on this grid so combining marks are never split from their base.
fn cluster_starts(text: &str) -> Vec<usize> {
    let mut starts = Vec::new();
    let mut char_index = 0usize;
    for (_, cluster) in text.grapheme_indices(true) {
        starts.push(char_index);
        char_index += cluster.chars().count();
    }
    starts.push(char_index);
    starts
}

#[derive(Debug, Clone, Copy)]
struct DpState {
    oov: usize,
    tokens: usize,
    freq: u64,
    /// Edge taken at this position: char length and OOV flag.
    edge_len: usize,
    edge_oov: bool,
}

/// Segments NFC text into lexicon words and single-cluster OOV fallbacks,
/// minimizing (OOV count, token count) under the default tie-break.
pub fn segment(text: &str, trie: &TrieIndex) -> Segmentation {
    segment_with(text, trie, TieBreak::LongestFirst)
}

/// [`segment`] with an explicit tie-break mode.
pub fn segment_with(text: &str, trie: &TrieIndex, tie: TieBreak) -> Segmentation {
    if text.is_empty() {
        return Segmentation::empty();
    }
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    let starts = cluster_starts(text);
    // next_cluster_end[i] = end of the cluster starting at i, for cluster starts.
    let mut next_cluster_end = vec![usize::MAX; n + 1];
    for w in starts.windows(2) {
        next_cluster_end[w[0]] = w[1];
    }

    let mut dp: Vec<Option<DpState>> = vec![None; n + 1];
    dp[n] = Some(DpState { oov: 0, tokens: 0, freq: 0, edge_len: 0, edge_oov: false });
    for i in (0..n).rev() {
        let mut best: Option<DpState> = None;
        let mut consider = |edge_len: usize, edge_oov: bool, edge_freq: u64, dp: &[Option<DpState>]| {
            let Some(rest) = dp[i + edge_len] else { return };
            let cand = DpState {
                oov: rest.oov + usize::from(edge_oov),
                tokens: rest.tokens + 1,
                freq: rest.freq + edge_freq,
                edge_len,
                edge_oov,
            };
            let better = match best {
                None => true,
                Some(cur) => {
                    let cand_cost = (cand.oov, cand.tokens);
                    let cur_cost = (cur.oov, cur.tokens);
                    if cand_cost != cur_cost {
                        cand_cost < cur_cost
                    } else if tie == TieBreak::Frequency && cand.freq != cur.freq {
                        cand.freq > cur.freq
                    } else {
                        cand.edge_len > cur.edge_len
                    }
                }
            };
            if better {
                best = Some(cand);
            }
        };
        for (len, freq) in trie.matches_at(&chars, i) {
            consider(len, false, freq, &dp);
        }
        let cluster_end = next_cluster_end[i];
        if cluster_end != usize::MAX {
            let cluster: String = chars[i..cluster_end].iter().collect();
            if !trie.contains(&cluster) {
                consider(cluster_end - i, true, 0, &dp);
            }
        }
        dp[i] = best;
    }

    let mut tokens = Vec::new();
    let mut oov_flags = Vec::new();
    let mut i = 0;
    while i < n {
        let state = dp[i].expect("every cluster start is reachable via the OOV fallback");
        let token: String = chars[i..i + state.edge_len].iter().collect();
        tokens.push(token);
        oov_flags.push(state.edge_oov);
        i += state.edge_len;
    }
    Segmentation { tokens, oov_flags }
}

/// Enumerates every segmentation of `text` into lexicon words and
/// single-cluster OOV fallbacks, sorted best-first under the same cost and
/// tie-break as [`segment_with`]. Independent of [`TrieIndex`].
pub fn segment_bruteforce(
    text: &str,
    lexicon: &Lexicon,
    tie: TieBreak,
) -> Result<Vec<Segmentation>, SegmentError> {
    let chars: Vec<char> = text.chars().collect();
    let n = chars.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(SegmentError::TooLongForBruteForce { len: n, limit: BRUTE_FORCE_LIMIT });
    }
    if n == 0 {
        return Ok(vec![Segmentation::empty()]);
    }
    let starts = cluster_starts(text);
    let mut next_cluster_end = vec![usize::MAX; n + 1];
    for w in starts.windows(2) {
        next_cluster_end[w[0]] = w[1];
    }

    fn recurse(
        i: usize,
        n: usize,
        chars: &[char],
        lexicon: &Lexicon,
        next_cluster_end: &[usize],
        current: &mut Vec<(String, bool)>,
        out: &mut Vec<Segmentation>,
    ) {
        if i == n {
            out.push(Segmentation {
                tokens: current.iter().map(|(t, _)| t.clone()).collect(),
                oov_flags: current.iter().map(|&(_, f)| f).collect(),
            });
            return;
        }
        for (word, _) in lexicon.iter() {
            let wchars: Vec<char> = word.chars().collect();
            if i + wchars.len() <= n && chars[i..i + wchars.len()] == wchars[..] {
                current.push((word.to_string(), false));
                recurse(i + wchars.len(), n, chars, lexicon, next_cluster_end, current, out);
                current.pop();
            }
        }
        let end = next_cluster_end[i];
        if end != usize::MAX {
            let cluster: String = chars[i..end].iter().collect();
            if !lexicon.contains(&cluster) {
                current.push((cluster, true));
                recurse(end, n, chars, lexicon, next_cluster_end, current, out);
                current.pop();
            }
        }
    }

    let mut out = Vec::new();
    recurse(0, n, &chars, lexicon, &next_cluster_end, &mut Vec::new(), &mut out);

    let total_freq = |s: &Segmentation| -> u64 {
        s.tokens
            .iter()
            .zip(&s.oov_flags)
            .filter(|(_, &oov)| !oov)
            .map(|(t, _)| lexicon.frequency(t).unwrap_or(0))
            .sum()
    };
    out.sort_by(|a, b| {
        a.cost().cmp(&b.cost()).then_with(|| {
            if tie == TieBreak::Frequency {
                let by_freq = total_freq(b).cmp(&total_freq(a));
                if by_freq != std::cmp::Ordering::Equal {
                    return by_freq;
                }
            }
            // Longer tokens earlier: compare length sequences, descending.
            let la = a.tokens.iter().map(|t| t.chars().count());
            let lb = b.tokens.iter().map(|t| t.chars().count());
            lb.cmp(la)
        })
    });
    Ok(out)
}
