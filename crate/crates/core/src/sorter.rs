//! The deterministic sorter.
//!
//! [`greedy`] repeatedly sorts the sortable color that terminates first. When
//! it stalls on a sortable input, [`full_sort`] identifies a color `d` such
//! that any sequence fully sorting `X − d` also fully sorts `X`, recurses on
//! `X − d` through [`sort_helper`], and replays the result on `X` with
//! [`sort_colors`]. Unsortable inputs come back with an unsortable
//! subordering of the input as a certificate.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordering::{is_subsequence, Color, SockOrdering};
use crate::state::{
    apply_move, blocked_by_sandwich_with, execute_move, find_sandwich, first_terminating_sortable,
    is_color_sortable, is_terminal, Selection, SortState, Step,
};

/// Colors in the order they are sorted; no color repeats.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SortingSequence(Vec<Color>);

impl SortingSequence {
    pub fn new(colors: Vec<Color>) -> Self {
        SortingSequence(colors)
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Color> {
        self.0.last().copied()
    }

    fn push(&mut self, color: Color) {
        self.0.push(color);
    }
}

/// Prints `(a,c,b)`.
impl fmt::Display for SortingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortReport {
    /// Colors actually sorted, including those sorted because they sat alone
    /// on top of the stack.
    pub sequence: SortingSequence,
    pub final_state: SortState,
    /// The input itself when sorted; otherwise an unsortable subordering of it.
    pub witness: SockOrdering,
    /// The grouped output word, present exactly when the input was fully sorted.
    pub output: Option<SockOrdering>,
    /// Nesting depth of the recursion on smaller orderings.
    pub recursion_depth: usize,
}

impl SortReport {
    pub fn is_sorted(&self) -> bool {
        self.output.is_some()
    }

    fn finish(
        input: &SockOrdering,
        sequence: SortingSequence,
        final_state: SortState,
        witness: SockOrdering,
    ) -> Result<SortReport> {
        let output = if final_state.is_empty() {
            let replayed = replay(input, sequence.colors())
                .map_err(|e| Error::Contract(format!("sorted sequence does not replay: {e}")))?;
            Some(replayed.output)
        } else {
            None
        };
        Ok(SortReport {
            sequence,
            final_state,
            witness,
            output,
            recursion_depth: 0,
        })
    }
}

/// Result of replaying a sorting sequence step by step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replay {
    pub state: SortState,
    /// Push indices are 0-based positions in the input.
    pub steps: Vec<Step>,
    pub output: SockOrdering,
}

/// Applies `sequence` to `(∅, input)` strictly: every color must be sortable
/// at its turn, and no color is sorted implicitly.
pub fn replay(input: &SockOrdering, sequence: &[Color]) -> Result<Replay> {
    let mut state = SortState::initial(input);
    let mut steps = Vec::new();
    let mut output = Vec::new();
    for &color in sequence {
        let consumed = input.len() - state.remaining.len();
        let (next, trace) = apply_move(&state, color)?;
        steps.extend(trace.shifted(consumed).steps);
        output.extend(std::iter::repeat_n(color, trace.emitted()));
        state = next;
    }
    Ok(Replay {
        state,
        steps,
        output: SockOrdering::new(output),
    })
}

/// Sorts with the prescribed order `order`, except that a color sitting only
/// on top of the stack is sorted immediately. Colors of `order` that are no
/// longer present are skipped. Stops when the next prescribed color is not
/// sortable or the order runs out.
pub fn sort_colors(input: &SockOrdering, order: &[Color]) -> Result<SortReport> {
    let mut state = SortState::initial(input);
    let mut sorted = SortingSequence::default();
    let mut pending = order.iter().copied();
    while !state.is_empty() {
        if let Some(top) = state.top().filter(|&t| !state.remaining.contains_color(t)) {
            sorted.push(top);
            state = execute_move(&state, top)?.0;
            continue;
        }
        let Some(next) = pending.next() else { break };
        if !state.contains_color(next) {
            continue;
        }
        if !is_color_sortable(&state, next)? {
            break;
        }
        sorted.push(next);
        state = execute_move(&state, next)?.0;
    }
    SortReport::finish(input, sorted, state, input.clone())
}

/// Greedy sorting: repeatedly sort the first-terminating sortable color.
///
/// Stops when no color is sortable, or before sorting a color listed in
/// `stop`.
pub fn greedy(input: &SockOrdering, stop: &[Color]) -> Result<(SortingSequence, SortState)> {
    let mut state = SortState::initial(input);
    let mut sorted = SortingSequence::default();
    while let Some(Selection::Next(color)) = first_terminating_sortable(&state, stop) {
        state = execute_move(&state, color)?.0;
        sorted.push(color);
    }
    Ok((sorted, state))
}

/// Decides foot-sortability of `input` and sorts it when possible.
pub fn full_sort(input: &SockOrdering) -> Result<SortReport> {
    full_sort_at(input, 0)
}

/// Recursion step used by [`full_sort`]: if `a` is blocked by a sandwich
/// containing `d`, the input is unsortable; otherwise a sequence that fully
/// sorts `input − d` fully sorts `input` exactly when `input` is sortable.
pub fn sort_helper(input: &SockOrdering, d: Color, a: Color) -> Result<SortReport> {
    sort_helper_at(input, d, a, 0)
}

fn unsortable_by_greedy(
    input: &SockOrdering,
    greedy_run: (SortingSequence, SortState),
    depth: usize,
) -> Result<SortReport> {
    let (sequence, state) = greedy_run;
    let mut report = SortReport::finish(input, sequence, state, input.clone())?;
    report.recursion_depth = depth;
    Ok(report)
}

fn sort_helper_at(input: &SockOrdering, d: Color, a: Color, depth: usize) -> Result<SortReport> {
    if blocked_by_sandwich_with(input, a, d) {
        return unsortable_by_greedy(input, greedy(input, &[])?, depth);
    }
    let reduced = full_sort_at(&input.remove_color(d), depth + 1)?;
    if !reduced.is_sorted() {
        return Ok(reduced);
    }
    let mut report = sort_colors(input, reduced.sequence.colors())?;
    report.recursion_depth = reduced.recursion_depth;
    Ok(report)
}

fn full_sort_at(input: &SockOrdering, depth: usize) -> Result<SortReport> {
    let (sequence, state) = greedy(input, &[])?;
    if state.remaining.is_empty() {
        // With R empty the top color is always sortable, so greedy has emptied the stack.
        let mut report = SortReport::finish(input, sequence, state, input.clone())?;
        report.recursion_depth = depth;
        return Ok(report);
    }
    if state.stack.is_empty() {
        return unsortable_by_greedy(input, (sequence, state), depth);
    }

    let stack_colors = state.stack_colors_top_down();
    for &x in &stack_colors {
        let single = SortState::new(SockOrdering::new(vec![x]), state.remaining.clone());
        if is_terminal(&single) {
            let copies = state.stack.iter().filter(|&&c| c == x).count();
            let witness: SockOrdering = std::iter::repeat_n(x, copies)
                .chain(state.remaining.iter().copied())
                .collect();
            let mut report = SortReport::finish(input, sequence, state, witness)?;
            report.recursion_depth = depth;
            return Ok(report);
        }
    }

    let (&t, &b) = match stack_colors.as_slice() {
        [t, b, ..] => (t, b),
        _ => {
            return Err(Error::Contract(format!(
                "terminal greedy state {state} has a single stack color but no terminal single-color substate"
            )))
        }
    };
    let d = sequence
        .last()
        .ok_or_else(|| Error::Contract("nonempty stack but no color sorted".into()))?;

    let pair = SortState::new(SockOrdering::new(vec![b, t]), state.remaining.clone());
    if is_terminal(&pair) {
        return sort_helper_at(input, d, b, depth);
    }

    let a = lowest_terminal_triple(&state, &stack_colors, b, t)?;

    // Stack colors strictly above `a`, up to and including `b`, that recur in R.
    let a_level = stack_colors
        .iter()
        .position(|&c| c == a)
        .expect("a on stack");
    let candidate = stack_colors[1..a_level]
        .iter()
        .copied()
        .find(|&z| state.remaining.contains_color(z));
    if let Some(z) = candidate {
        let rest = state.remaining.socks();
        return if is_subsequence(&[a, z, t], rest) || is_subsequence(&[a, t, z], rest) {
            sort_helper_at(input, d, a, depth)
        } else {
            sort_helper_at(input, d, z, depth)
        };
    }

    // Backtrack to just before the final b is pushed.
    let last_b = input.last_index_of(b).expect("b came from the input");
    let (before, after) = (&input.socks()[..last_b], &input.socks()[last_b + 1..]);
    let stop = SockOrdering::new(after.to_vec()).colors();
    let (back_sequence, back_state) = greedy(input, &stop)?;
    let c = match first_terminating_sortable(&back_state, &stop) {
        Some(Selection::Stopped(c)) => c,
        other => {
            return Err(Error::Contract(format!(
                "backtracked greedy run did not stop at a color after the final {b}: {other:?}"
            )))
        }
    };
    if is_subsequence(&[c, a], before) {
        return unsortable_by_greedy(input, (sequence, state), depth);
    }
    let d_back = back_sequence
        .last()
        .ok_or_else(|| Error::Contract("backtracked greedy run sorted nothing".into()))?;
    let y = *back_state
        .stack_colors_top_down()
        .get(1)
        .ok_or_else(|| Error::Contract(format!("backtracked stack {back_state} has one color")))?;
    sort_helper_at(input, d_back, y, depth)
}

/// The lowest stack color `a` such that `(abt, R)` is terminal. A stalled
/// greedy state with at least three sandwich-free stack colors always has one.
fn lowest_terminal_triple(
    state: &SortState,
    stack_colors: &[Color],
    b: Color,
    t: Color,
) -> Result<Color> {
    if let Some(sw) = find_sandwich(state.stack.socks()) {
        return Err(Error::Contract(format!(
            "greedy stack {state} holds sandwich {sw}"
        )));
    }
    stack_colors
        .iter()
        .rev()
        .copied()
        .filter(|&a| a != b && a != t)
        .find(|&a| {
            let triple = SortState::new(SockOrdering::new(vec![a, b, t]), state.remaining.clone());
            is_terminal(&triple)
        })
        .ok_or_else(|| {
            Error::Contract(format!(
                "no stack color a with (a{b}{t}, R) terminal in stalled state {state}"
            ))
        })
}
