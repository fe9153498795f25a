//! Sock orderings: parsing, formatting, canonical forms and pattern containment.
//!
//! A [`SockOrdering`] is a finite word over [`Color`]s. Two orderings are
//! *equivalent* when one is obtained from the other by a bijective recoloring;
//! the canonical representative of a class relabels colors in order of first
//! appearance (`babc` becomes `abac`). `Y ⊆ X` (subordering) is literal
//! subsequence containment, while `Y ⪯ X` (subpattern) allows the subsequence
//! to be recolored.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of colors that can be rendered as single lowercase letters.
pub const LETTER_COLORS: u32 = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Color(pub u32);

impl Color {
    pub fn id(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The color named by a lowercase letter, `a` being color 0.
    pub fn from_letter(letter: char) -> Option<Color> {
        letter
            .is_ascii_lowercase()
            .then(|| Color(letter as u32 - 'a' as u32))
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 < LETTER_COLORS {
            write!(f, "{}", char::from(b'a' + self.0 as u8))
        } else {
            write!(f, "c{}", self.0)
        }
    }
}

/// How [`SockOrdering::parse`] reads its input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// One lowercase letter per sock; the letter names the color literally.
    #[default]
    Letters,
    /// Comma-separated color names, numbered by first appearance.
    Tokens,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SockOrdering {
    socks: Vec<Color>,
}

impl SockOrdering {
    pub fn new(socks: Vec<Color>) -> Self {
        SockOrdering { socks }
    }

    pub fn empty() -> Self {
        SockOrdering::default()
    }

    pub fn from_ids(ids: &[u32]) -> Self {
        SockOrdering::new(ids.iter().map(|&id| Color(id)).collect())
    }

    pub fn parse(text: &str, mode: ParseMode) -> Result<Self> {
        match mode {
            ParseMode::Letters => parse_letters(text),
            ParseMode::Tokens => parse_tokens(text),
        }
    }

    pub fn socks(&self) -> &[Color] {
        &self.socks
    }

    pub fn into_socks(self) -> Vec<Color> {
        self.socks
    }

    pub fn len(&self) -> usize {
        self.socks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.socks.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Color> {
        self.socks.iter()
    }

    /// Distinct colors in order of first appearance.
    pub fn colors(&self) -> Vec<Color> {
        let mut seen = ColorSet::default();
        self.socks
            .iter()
            .copied()
            .filter(|&c| seen.insert(c))
            .collect()
    }

    pub fn color_count(&self) -> usize {
        self.colors().len()
    }

    pub fn contains_color(&self, color: Color) -> bool {
        self.socks.contains(&color)
    }

    pub fn last_index_of(&self, color: Color) -> Option<usize> {
        self.socks.iter().rposition(|&c| c == color)
    }

    pub fn concat(&self, other: &SockOrdering) -> SockOrdering {
        let mut socks = Vec::with_capacity(self.len() + other.len());
        socks.extend_from_slice(&self.socks);
        socks.extend_from_slice(&other.socks);
        SockOrdering::new(socks)
    }

    /// Whether every color occupies one consecutive block.
    pub fn is_grouped(&self) -> bool {
        let mut seen = ColorSet::default();
        let mut prev = None;
        for &c in &self.socks {
            if prev != Some(c) && !seen.insert(c) {
                return false;
            }
            prev = Some(c);
        }
        true
    }

    /// Relabels colors in order of first appearance.
    pub fn canonicalize(&self) -> SockOrdering {
        let mut relabel: Vec<Option<u32>> = Vec::new();
        let mut next = 0;
        let socks = self
            .socks
            .iter()
            .map(|&c| {
                if relabel.len() <= c.index() {
                    relabel.resize(c.index() + 1, None);
                }
                let id = *relabel[c.index()].get_or_insert_with(|| {
                    next += 1;
                    next - 1
                });
                Color(id)
            })
            .collect();
        SockOrdering::new(socks)
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonicalize()
    }

    /// `self ≅ other`: equal up to a bijective recoloring.
    pub fn is_equivalent(&self, other: &SockOrdering) -> bool {
        self.len() == other.len() && self.canonicalize() == other.canonicalize()
    }

    /// `sub ⊆ self`: `sub` is a subsequence of `self` with literal colors.
    pub fn contains_subordering(&self, sub: &SockOrdering) -> bool {
        is_subsequence(sub.socks(), &self.socks)
    }

    /// Finds a witness of `pattern ⪯ self`.
    ///
    /// Backtracks over injective assignments of pattern colors to host colors.
    /// A sock whose color is already assigned is matched at the leftmost
    /// feasible position; a sock introducing a new pattern color branches over
    /// the unused host colors, each at its leftmost feasible position. Leftmost
    /// placement is pointwise minimal among embeddings sharing an assignment,
    /// so no embedding is missed.
    pub fn find_subpattern(&self, pattern: &SockOrdering) -> Option<Embedding> {
        if pattern.len() > self.len() {
            return None;
        }
        let pattern_canon = pattern.canonicalize();
        let pattern_colors = pattern.colors();
        let index = OccurrenceIndex::new(&self.socks);
        let mut search = SubpatternSearch {
            host: &self.socks,
            pattern: pattern_canon.socks(),
            index: &index,
            assigned: vec![None; pattern_colors.len()],
            used: ColorSet::default(),
            positions: Vec::with_capacity(pattern.len()),
        };
        if !search.extend(0, 0) {
            return None;
        }
        let mapping = pattern_colors
            .iter()
            .zip(&search.assigned)
            .map(|(&p, h)| (p, h.expect("every pattern color is assigned")))
            .collect();
        Some(Embedding {
            positions: search.positions,
            mapping,
        })
    }

    /// `pattern ⪯ self`.
    pub fn contains_pattern(&self, pattern: &SockOrdering) -> bool {
        self.find_subpattern(pattern).is_some()
    }

    /// `self − color`: every sock of `color` deleted.
    pub fn remove_color(&self, color: Color) -> SockOrdering {
        SockOrdering::new(self.socks.iter().copied().filter(|&c| c != color).collect())
    }

    /// The ordering with the sock at `index` deleted.
    pub fn remove_at(&self, index: usize) -> SockOrdering {
        let mut socks = self.socks.clone();
        socks.remove(index);
        SockOrdering::new(socks)
    }

    pub fn is_letter_renderable(&self) -> bool {
        self.socks.iter().all(|c| c.0 < LETTER_COLORS)
    }
}

/// Letters while every color fits in `a..=z`, otherwise comma-separated
/// `c<id>` tokens (readable back with [`ParseMode::Tokens`]).
impl fmt::Display for SockOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_letter_renderable() {
            for c in &self.socks {
                write!(f, "{c}")?;
            }
        } else {
            for (i, c) in self.socks.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "c{}", c.0)?;
            }
        }
        Ok(())
    }
}

impl FromStr for SockOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SockOrdering::parse(s, ParseMode::Letters)
    }
}

impl FromIterator<Color> for SockOrdering {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        SockOrdering::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a SockOrdering {
    type Item = &'a Color;
    type IntoIter = std::slice::Iter<'a, Color>;

    fn into_iter(self) -> Self::IntoIter {
        self.socks.iter()
    }
}

fn parse_letters(text: &str) -> Result<SockOrdering> {
    text.char_indices()
        .map(|(offset, ch)| {
            Color::from_letter(ch).ok_or_else(|| Error::Parse {
                offset,
                message: format!("expected a lowercase letter, found {ch:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(SockOrdering::new)
}

fn parse_tokens(text: &str) -> Result<SockOrdering> {
    if text.trim().is_empty() {
        return Ok(SockOrdering::empty());
    }
    let mut names: Vec<&str> = Vec::new();
    let mut socks = Vec::new();
    let mut offset = 0;
    for raw in text.split(',') {
        let token = raw.trim();
        if token.is_empty() {
            return Err(Error::Parse {
                offset,
                message: "empty token".into(),
            });
        }
        let id = match names.iter().position(|&n| n == token) {
            Some(id) => id,
            None => {
                names.push(token);
                names.len() - 1
            }
        };
        socks.push(Color(id as u32));
        offset += raw.len() + 1;
    }
    Ok(SockOrdering::new(socks))
}

pub(crate) fn is_subsequence(needle: &[Color], haystack: &[Color]) -> bool {
    let mut it = haystack.iter();
    needle.iter().all(|c| it.any(|h| h == c))
}

/// Witness of `pattern ⪯ host`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    /// Strictly increasing, 0-based indices into the host.
    pub positions: Vec<usize>,
    /// Pattern color to host color, in order of first appearance in the pattern.
    pub mapping: Vec<(Color, Color)>,
}

impl Embedding {
    pub fn host_color(&self, pattern_color: Color) -> Option<Color> {
        self.mapping
            .iter()
            .find(|(p, _)| *p == pattern_color)
            .map(|&(_, h)| h)
    }

    /// Checks that the embedding is injective, increasing, and reads the
    /// pattern from the host sock by sock.
    pub fn validates(&self, pattern: &SockOrdering, host: &SockOrdering) -> bool {
        if self.positions.len() != pattern.len() {
            return false;
        }
        if self.positions.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        if self.positions.last().is_some_and(|&p| p >= host.len()) {
            return false;
        }
        let mut hosts = ColorSet::default();
        if !self.mapping.iter().all(|&(_, h)| hosts.insert(h)) {
            return false;
        }
        pattern
            .iter()
            .zip(&self.positions)
            .all(|(&p, &pos)| self.host_color(p) == Some(host.socks()[pos]))
    }

    /// Positions as 1-based indices.
    pub fn one_based_positions(&self) -> Vec<usize> {
        self.positions.iter().map(|p| p + 1).collect()
    }
}

/// `I(t_0, …, t_n) = t_1 t_0 t_2 t_1 … t_n t_{n−1}`, empty for a single color.
pub fn interlace(colors: &[Color]) -> Result<SockOrdering> {
    if colors.is_empty() {
        return Err(Error::EmptyInterlace);
    }
    let mut seen = ColorSet::default();
    for &c in colors {
        if !seen.insert(c) {
            return Err(Error::DuplicateColor(c));
        }
    }
    Ok(colors
        .windows(2)
        .flat_map(|pair| [pair[1], pair[0]])
        .collect())
}

/// Small dense set of colors, indexed by color id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct ColorSet {
    bits: Vec<bool>,
}

impl ColorSet {
    pub(crate) fn contains(&self, c: Color) -> bool {
        self.bits.get(c.index()).copied().unwrap_or(false)
    }

    /// Returns true if the color was not already present.
    pub(crate) fn insert(&mut self, c: Color) -> bool {
        if self.bits.len() <= c.index() {
            self.bits.resize(c.index() + 1, false);
        }
        !std::mem::replace(&mut self.bits[c.index()], true)
    }
}

/// Sorted occurrence lists per host color, for leftmost-next lookups.
struct OccurrenceIndex {
    by_color: Vec<Vec<usize>>,
    colors: Vec<Color>,
}

impl OccurrenceIndex {
    fn new(host: &[Color]) -> Self {
        let mut by_color: Vec<Vec<usize>> = Vec::new();
        let mut colors = Vec::new();
        for (i, &c) in host.iter().enumerate() {
            if by_color.len() <= c.index() {
                by_color.resize(c.index() + 1, Vec::new());
            }
            if by_color[c.index()].is_empty() {
                colors.push(c);
            }
            by_color[c.index()].push(i);
        }
        OccurrenceIndex { by_color, colors }
    }

    fn next_at_or_after(&self, color: Color, from: usize) -> Option<usize> {
        let list = self.by_color.get(color.index())?;
        let k = list.partition_point(|&p| p < from);
        list.get(k).copied()
    }
}

struct SubpatternSearch<'a> {
    host: &'a [Color],
    /// Canonical pattern, so pattern colors are dense indices.
    pattern: &'a [Color],
    index: &'a OccurrenceIndex,
    assigned: Vec<Option<Color>>,
    used: ColorSet,
    positions: Vec<usize>,
}

impl SubpatternSearch<'_> {
    fn extend(&mut self, j: usize, from: usize) -> bool {
        if j == self.pattern.len() {
            return true;
        }
        if self.pattern.len() - j > self.host.len() - from {
            return false;
        }
        let p = self.pattern[j].index();
        if let Some(h) = self.assigned[p] {
            let Some(pos) = self.index.next_at_or_after(h, from) else {
                return false;
            };
            self.positions.push(pos);
            if self.extend(j + 1, pos + 1) {
                return true;
            }
            self.positions.pop();
            return false;
        }
        let mut candidates: Vec<(usize, Color)> = self
            .index
            .colors
            .iter()
            .filter(|&&h| !self.used.contains(h))
            .filter_map(|&h| self.index.next_at_or_after(h, from).map(|pos| (pos, h)))
            .collect();
        candidates.sort_unstable();
        for (pos, h) in candidates {
            self.assigned[p] = Some(h);
            self.used.insert(h);
            self.positions.push(pos);
            if self.extend(j + 1, pos + 1) {
                return true;
            }
            self.positions.pop();
            self.used.bits[h.index()] = false;
            self.assigned[p] = None;
        }
        false
    }
}
