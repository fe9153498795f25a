//! Sorting stages `(S, R)`, sandwiches, and color moves.
//!
//! The stack `S` is written bottom-to-top. Positions inside a stage refer to
//! the concatenation `S·R`: stack bottom-to-top, then the remaining input
//! left-to-right.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordering::{Color, ColorSet, SockOrdering};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SortState {
    pub stack: SockOrdering,
    pub remaining: SockOrdering,
}

impl SortState {
    pub fn new(stack: SockOrdering, remaining: SockOrdering) -> Self {
        SortState { stack, remaining }
    }

    /// `(∅, X)`.
    pub fn initial(input: &SockOrdering) -> Self {
        SortState::new(SockOrdering::empty(), input.clone())
    }

    /// `(∅, ∅)`.
    pub fn is_empty(&self) -> bool {
        self.stack.is_empty() && self.remaining.is_empty()
    }

    /// `S·R`.
    pub fn concat(&self) -> SockOrdering {
        self.stack.concat(&self.remaining)
    }

    pub fn contains_color(&self, color: Color) -> bool {
        self.stack.contains_color(color) || self.remaining.contains_color(color)
    }

    /// Distinct colors of `S·R` in order of first appearance.
    pub fn colors(&self) -> Vec<Color> {
        self.concat().colors()
    }

    /// The top color of the stack.
    pub fn top(&self) -> Option<Color> {
        self.stack.socks().last().copied()
    }

    /// Distinct stack colors from the top down.
    pub fn stack_colors_top_down(&self) -> Vec<Color> {
        let mut out: Vec<Color> = Vec::new();
        for &c in self.stack.socks().iter().rev() {
            if out.last() != Some(&c) {
                out.push(c);
            }
        }
        out
    }

    /// Whether `color` appears on the stack below some other color.
    pub fn is_buried(&self, color: Color) -> bool {
        let socks = self.stack.socks();
        match socks.iter().position(|&c| c == color) {
            Some(first) => socks[first..].iter().any(|&c| c != color),
            None => false,
        }
    }
}

/// Prints `(S | R)`, with `∅` for an empty component.
impl fmt::Display for SortState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |o: &SockOrdering| {
            if o.is_empty() {
                "∅".to_string()
            } else {
                o.to_string()
            }
        };
        write!(f, "({} | {})", part(&self.stack), part(&self.remaining))
    }
}

/// An occurrence of `xyx` with `x ≠ y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sandwich {
    pub outer: Color,
    pub inner: Color,
    pub positions: [usize; 3],
}

impl fmt::Display for Sandwich {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.outer.id() < 26 && self.inner.id() < 26 {
            write!(f, "{}{}{}", self.outer, self.inner, self.outer)
        } else {
            write!(f, "{},{},{}", self.outer, self.inner, self.outer)
        }
    }
}

/// The sandwich completed earliest in `socks`, if any.
///
/// A word has a sandwich exactly when some color's occurrences are not
/// contiguous.
pub fn find_sandwich(socks: &[Color]) -> Option<Sandwich> {
    let mut first_seen: Vec<Option<usize>> = Vec::new();
    for (k, &c) in socks.iter().enumerate() {
        if first_seen.len() <= c.index() {
            first_seen.resize(c.index() + 1, None);
        }
        match first_seen[c.index()] {
            Some(i) if k > 0 && socks[k - 1] != c => {
                let j = (i + 1..k).find(|&j| socks[j] != c).expect("gap exists");
                let i = (i..j).rev().find(|&i| socks[i] == c).expect("outer exists");
                return Some(Sandwich {
                    outer: c,
                    inner: socks[j],
                    positions: [i, j, k],
                });
            }
            Some(_) => {}
            None => first_seen[c.index()] = Some(k),
        }
    }
    None
}

fn has_sandwich_without(socks: &[Color], skip: Color) -> bool {
    let mut seen = ColorSet::default();
    let mut prev = None;
    for &c in socks.iter().filter(|&&c| c != skip) {
        if prev != Some(c) && !seen.insert(c) {
            return true;
        }
        prev = Some(c);
    }
    false
}

/// The first sandwich `xyx` (`x, y ≠ color`) that is followed by a sock of
/// `color` in `word`.
///
/// Sandwiches are ordered by the position of their second outer sock; among
/// those sharing it, the one with the earlier middle sock comes first.
pub fn first_blocking_sandwich(word: &SockOrdering, color: Color) -> Result<Option<Sandwich>> {
    let socks = word.socks();
    let last = word.last_index_of(color).ok_or(Error::ColorAbsent(color))?;
    for k in 0..last {
        let outer = socks[k];
        if outer == color {
            continue;
        }
        let Some(first) = socks[..k].iter().position(|&c| c == outer) else {
            continue;
        };
        if let Some(j) = (first + 1..k).find(|&j| socks[j] != outer && socks[j] != color) {
            return Ok(Some(Sandwich {
                outer,
                inner: socks[j],
                positions: [first, j, k],
            }));
        }
    }
    Ok(None)
}

/// Whether some sandwich involving `d` (as either color) blocks `color` in `word`.
pub fn blocked_by_sandwich_with(word: &SockOrdering, color: Color, d: Color) -> bool {
    let Some(last) = word.last_index_of(color) else {
        return false;
    };
    let prefix = &word.socks()[..last];
    let others: Vec<Color> = word
        .colors()
        .into_iter()
        .filter(|&e| e != color && e != d)
        .collect();
    others.into_iter().any(|e| {
        // Over the two colors {d, e}, a sandwich exists iff there are at least three runs.
        let mut runs = 0;
        let mut prev = None;
        for &c in prefix.iter().filter(|&&c| c == d || c == e) {
            if prev != Some(c) {
                runs += 1;
                prev = Some(c);
            }
        }
        runs >= 3
    })
}

fn sortable_in(state: &SortState, concat: &SockOrdering, color: Color) -> bool {
    if state.is_buried(color) {
        return false;
    }
    if !state.remaining.contains_color(color) {
        return true;
    }
    let last = concat.last_index_of(color).expect("color is in R");
    !has_sandwich_without(&concat.socks()[..last], color)
}

/// A color is sortable when it is not buried in the stack and, if it still
/// occurs in `R`, no sandwich of two other colors precedes its final sock in
/// `S·R`.
pub fn is_color_sortable(state: &SortState, color: Color) -> Result<bool> {
    if !state.contains_color(color) {
        return Err(Error::ColorAbsent(color));
    }
    Ok(sortable_in(state, &state.concat(), color))
}

/// Every sortable color, in order of first appearance in `S·R`.
pub fn sortable_colors(state: &SortState) -> Vec<Color> {
    let concat = state.concat();
    concat
        .colors()
        .into_iter()
        .filter(|&c| sortable_in(state, &concat, c))
        .collect()
}

/// No color is sortable. The empty stage is not terminal.
pub fn is_terminal(state: &SortState) -> bool {
    !state.is_empty() && sortable_colors(state).is_empty()
}

/// Outcome of [`first_terminating_sortable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    Next(Color),
    /// The selected color is one of the stop colors.
    Stopped(Color),
}

impl Selection {
    pub fn color(self) -> Color {
        match self {
            Selection::Next(c) | Selection::Stopped(c) => c,
        }
    }
}

/// The sortable color whose final sock comes first in `S·R`.
pub fn first_terminating_sortable(state: &SortState, stop: &[Color]) -> Option<Selection> {
    let concat = state.concat();
    let chosen = concat
        .colors()
        .into_iter()
        .filter(|&c| sortable_in(state, &concat, c))
        .min_by_key(|&c| concat.last_index_of(c))?;
    Some(if stop.contains(&chosen) {
        Selection::Stopped(chosen)
    } else {
        Selection::Next(chosen)
    })
}

/// A single push or pop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    /// Stack the leftmost remaining sock; `index` locates it in the input.
    Push { index: usize, color: Color },
    /// Unstack the top sock onto the output.
    Pop(Color),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Push { index, color } => write!(f, "push {index}:{color}"),
            Step::Pop(color) => write!(f, "pop:{color}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveTrace {
    pub color: Color,
    /// Push indices are relative to the remaining input at the start of the move.
    pub steps: Vec<Step>,
}

impl MoveTrace {
    /// Number of socks sent to the output.
    pub fn emitted(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, Step::Pop(_)))
            .count()
    }

    /// The trace with push indices offset by `by`.
    pub fn shifted(&self, by: usize) -> MoveTrace {
        let steps = self
            .steps
            .iter()
            .map(|&s| match s {
                Step::Push { index, color } => Step::Push {
                    index: index + by,
                    color,
                },
                pop => pop,
            })
            .collect();
        MoveTrace {
            color: self.color,
            steps,
        }
    }
}

/// Sorts `color`: pops its block off the top of the stack, then, if it still
/// occurs in `R`, streams `R` up to its final sock, passing that color
/// straight through and stacking everything else.
pub fn apply_move(state: &SortState, color: Color) -> Result<(SortState, MoveTrace)> {
    if !is_color_sortable(state, color)? {
        return Err(Error::NotSortable(color));
    }
    execute_move(state, color)
}

/// [`apply_move`] without the sortability check. Still refuses to create a
/// sandwich on the stack.
pub(crate) fn execute_move(state: &SortState, color: Color) -> Result<(SortState, MoveTrace)> {
    let mut stack = state.stack.socks().to_vec();
    let mut steps = Vec::new();
    while stack.last() == Some(&color) {
        stack.pop();
        steps.push(Step::Pop(color));
    }
    let remaining = state.remaining.socks();
    let rest = match state.remaining.last_index_of(color) {
        None => remaining,
        Some(last) => {
            let mut on_stack = ColorSet::default();
            for &c in &stack {
                on_stack.insert(c);
            }
            for (index, &c) in remaining[..=last].iter().enumerate() {
                steps.push(Step::Push { index, color: c });
                if c == color {
                    steps.push(Step::Pop(c));
                    continue;
                }
                if on_stack.contains(c) && stack.last() != Some(&c) {
                    let top = *stack.last().expect("nonempty");
                    return Err(Error::SandwichInStack(format!("{c}{top}{c}")));
                }
                on_stack.insert(c);
                stack.push(c);
            }
            &remaining[last + 1..]
        }
    };
    Ok((
        SortState::new(SockOrdering::new(stack), SockOrdering::new(rest.to_vec())),
        MoveTrace { color, steps },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> SockOrdering {
        s.parse().unwrap()
    }

    fn st(s: &str, r: &str) -> SortState {
        SortState::new(o(s), o(r))
    }

    fn c(ch: char) -> Color {
        Color::from_letter(ch).unwrap()
    }

    /// Every sandwich `(i, j, k)` of two colors other than `color` that ends
    /// before the final `color`, sorted by the blocking order.
    fn all_blocking_sandwiches(word: &SockOrdering, color: Color) -> Vec<[usize; 3]> {
        let s = word.socks();
        let last = word.last_index_of(color).unwrap();
        let mut out = Vec::new();
        for i in 0..last {
            for j in i + 1..last {
                for k in j + 1..last {
                    if s[i] == s[k] && s[i] != s[j] && s[i] != color && s[j] != color {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out.sort_by_key(|&[i, j, k]| (k, j, i));
        out
    }

    #[test]
    fn first_blocking_sandwich_examples() {
        let sw = first_blocking_sandwich(&o("abcabd"), c('d'))
            .unwrap()
            .unwrap();
        assert_eq!((sw.outer, sw.inner), (c('a'), c('b')));
        assert_eq!(sw.positions, [0, 1, 3]);

        assert_eq!(first_blocking_sandwich(&o("abab"), c('b')).unwrap(), None);

        let w = o("atarat");
        let sw = first_blocking_sandwich(&w, c('r')).unwrap().unwrap();
        assert_eq!(sw.positions, [0, 1, 2]);
        assert_eq!(all_blocking_sandwiches(&w, c('r'))[0], [0, 1, 2]);

        assert_eq!(
            first_blocking_sandwich(&o("abc"), c('z')),
            Err(Error::ColorAbsent(c('z')))
        );
    }

    #[test]
    fn first_blocking_sandwich_matches_enumeration() {
        for w in ["abcabd", "abacbdcd", "cabcbaad", "abcbcada", "babcacbd"] {
            let w = o(w);
            for color in w.colors() {
                let expected = all_blocking_sandwiches(&w, color).first().copied();
                let got = first_blocking_sandwich(&w, color).unwrap();
                // The outer sock chosen is the first one before the middle; compare
                // on (middle, second outer), which fully determine blocking order.
                assert_eq!(
                    got.map(|s| (s.positions[1], s.positions[2])),
                    expected.map(|p| (p[1], p[2])),
                    "{w} / {color}"
                );
            }
        }
    }

    #[test]
    fn sortability_examples() {
        assert!(is_color_sortable(&st("", "abcabc"), c('a')).unwrap());
        assert!(!is_color_sortable(&st("bc", "bc"), c('b')).unwrap());
        assert!(!is_color_sortable(&st("abt", "at"), c('t')).unwrap());
        assert_eq!(
            is_color_sortable(&st("ab", "ab"), c('q')),
            Err(Error::ColorAbsent(c('q')))
        );
    }

    #[test]
    fn terminal_examples() {
        assert!(is_terminal(&st("abt", "at")));
        assert!(!is_terminal(&st("", "abcabc")));
        assert!(is_terminal(&st("", "abacaba")));
        assert!(!is_terminal(&st("", "")));
    }

    #[test]
    fn move_examples() {
        let (s, t) = apply_move(&st("", "abcabc"), c('a')).unwrap();
        assert_eq!(s, st("bc", "bc"));
        assert_eq!(t.emitted(), 2);

        let (s, t) = apply_move(&st("bc", "bc"), c('c')).unwrap();
        assert_eq!(s, st("bb", ""));
        assert_eq!(
            t.steps,
            vec![
                Step::Pop(c('c')),
                Step::Push {
                    index: 0,
                    color: c('b')
                },
                Step::Push {
                    index: 1,
                    color: c('c')
                },
                Step::Pop(c('c')),
            ]
        );

        let (s, _) = apply_move(&st("bb", ""), c('b')).unwrap();
        assert!(s.is_empty());

        assert_eq!(
            apply_move(&st("bc", "bc"), c('b')),
            Err(Error::NotSortable(c('b')))
        );
    }

    #[test]
    fn selection_examples() {
        assert_eq!(
            first_terminating_sortable(&st("", "abcabc"), &[]),
            Some(Selection::Next(c('a')))
        );
        assert_eq!(
            first_terminating_sortable(&st("bc", "bc"), &[]),
            Some(Selection::Next(c('c')))
        );
        assert_eq!(
            first_terminating_sortable(&st("", "abcabc"), &[c('a')]),
            Some(Selection::Stopped(c('a')))
        );
        assert_eq!(first_terminating_sortable(&st("", "abacaba"), &[]), None);
    }

    #[test]
    fn state_display() {
        assert_eq!(st("bc", "bc").to_string(), "(bc | bc)");
        assert_eq!(st("", "").to_string(), "(∅ | ∅)");
    }

    #[test]
    fn sandwich_detection() {
        assert_eq!(find_sandwich(o("aabbcc").socks()), None);
        let sw = find_sandwich(o("abcb").socks()).unwrap();
        assert_eq!(
            (sw.outer, sw.inner, sw.positions),
            (c('b'), c('c'), [1, 2, 3])
        );
    }

    #[test]
    fn d_sandwich_blocking() {
        // dtd precedes the final a.
        assert!(blocked_by_sandwich_with(&o("adtdrart"), c('a'), c('d')));
        assert!(!blocked_by_sandwich_with(&o("atdarat"), c('a'), c('d')));
        // tdt blocks a as well.
        assert!(blocked_by_sandwich_with(&o("tdta"), c('a'), c('d')));
    }
}
