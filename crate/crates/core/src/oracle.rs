//! Ground truth by exhaustive search over single push/pop steps.
//!
//! The search keeps the output implicit: it tracks the color currently being
//! emitted (`open`) and the colors already completed (`finished`). Popping a
//! finished color is illegal; popping a new color closes the open one, which
//! is only allowed once no sock of the open color is left. Branches that put a
//! sandwich on the stack are cut, since the stack must eventually unstack in
//! reverse and a sandwich can never come out grouped. Failed nodes are
//! memoized; branch order is pop before push, so witnesses are reproducible.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::ordering::{Color, SockOrdering};
use crate::state::{
    execute_move, find_sandwich, is_color_sortable, sortable_colors, SortState, Step,
};

/// Largest number of distinct colors the oracle accepts.
pub const MAX_ORACLE_COLORS: usize = 64;

/// Memo key of a search node. `finished` is a bitmask over dense color ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OracleKey {
    pub stack: Vec<u8>,
    pub remaining_index: usize,
    pub open_color: Option<u8>,
    pub finished: u64,
}

/// A complete step sequence and the grouped output it produces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleWitness {
    /// Push indices are 0-based positions in the remaining input of the start state.
    pub steps: Vec<Step>,
    pub output: SockOrdering,
}

struct Search {
    palette: Vec<Color>,
    remaining: Vec<u8>,
    stack: Vec<u8>,
    index: usize,
    on_stack: Vec<u32>,
    pending: Vec<u32>,
    open: Option<u8>,
    finished: u64,
    failed: HashSet<OracleKey>,
    path: Vec<Step>,
}

impl Search {
    fn new(state: &SortState) -> Result<Search> {
        if let Some(sw) = find_sandwich(state.stack.socks()) {
            return Err(Error::SandwichInStack(sw.to_string()));
        }
        let palette = state.colors();
        if palette.len() > MAX_ORACLE_COLORS {
            return Err(Error::TooManyColors {
                max: MAX_ORACLE_COLORS,
                got: palette.len(),
            });
        }
        let dense = |c: &Color| palette.iter().position(|p| p == c).expect("in palette") as u8;
        let stack: Vec<u8> = state.stack.iter().map(dense).collect();
        let remaining: Vec<u8> = state.remaining.iter().map(dense).collect();
        let mut on_stack = vec![0; palette.len()];
        let mut pending = vec![0; palette.len()];
        for &c in &stack {
            on_stack[c as usize] += 1;
            pending[c as usize] += 1;
        }
        for &c in &remaining {
            pending[c as usize] += 1;
        }
        Ok(Search {
            palette,
            remaining,
            stack,
            index: 0,
            on_stack,
            pending,
            open: None,
            finished: 0,
            failed: HashSet::new(),
            path: Vec::new(),
        })
    }

    fn key(&self) -> OracleKey {
        OracleKey {
            stack: self.stack.clone(),
            remaining_index: self.index,
            open_color: self.open,
            finished: self.finished,
        }
    }

    fn solve(&mut self) -> bool {
        if self.stack.is_empty() && self.index == self.remaining.len() {
            return true;
        }
        let key = self.key();
        if self.failed.contains(&key) {
            return false;
        }
        if self.try_pop() || self.try_push() {
            return true;
        }
        self.failed.insert(key);
        false
    }

    fn try_pop(&mut self) -> bool {
        let Some(&top) = self.stack.last() else {
            return false;
        };
        if self.finished >> top & 1 == 1 {
            return false;
        }
        let (saved_open, saved_finished) = (self.open, self.finished);
        if let Some(open) = self.open.filter(|&o| o != top) {
            if self.pending[open as usize] > 0 {
                return false;
            }
            self.finished |= 1 << open;
        }
        self.open = Some(top);
        self.stack.pop();
        self.on_stack[top as usize] -= 1;
        self.pending[top as usize] -= 1;
        self.path.push(Step::Pop(self.palette[top as usize]));
        if self.solve() {
            return true;
        }
        self.path.pop();
        self.pending[top as usize] += 1;
        self.on_stack[top as usize] += 1;
        self.stack.push(top);
        self.open = saved_open;
        self.finished = saved_finished;
        false
    }

    fn try_push(&mut self) -> bool {
        let Some(&next) = self.remaining.get(self.index) else {
            return false;
        };
        if self.on_stack[next as usize] > 0 && self.stack.last() != Some(&next) {
            return false;
        }
        self.stack.push(next);
        self.on_stack[next as usize] += 1;
        self.path.push(Step::Push {
            index: self.index,
            color: self.palette[next as usize],
        });
        self.index += 1;
        if self.solve() {
            return true;
        }
        self.index -= 1;
        self.path.pop();
        self.on_stack[next as usize] -= 1;
        self.stack.pop();
        false
    }
}

/// Whether some sequence of single steps empties `state` with grouped output.
pub fn oracle_is_sortable(state: &SortState) -> Result<bool> {
    Ok(Search::new(state)?.solve())
}

/// `oracle_is_sortable((∅, input))`.
pub fn is_sortable(input: &SockOrdering) -> bool {
    match oracle_is_sortable(&SortState::initial(input)) {
        Ok(verdict) => verdict,
        Err(Error::TooManyColors { .. }) => {
            panic!("oracle input has more than {MAX_ORACLE_COLORS} colors")
        }
        Err(e) => unreachable!("empty stack cannot hold a sandwich: {e}"),
    }
}

/// One full step sequence sorting `input`, with its output word.
pub fn oracle_witness(input: &SockOrdering) -> Result<Option<OracleWitness>> {
    let mut search = Search::new(&SortState::initial(input))?;
    if !search.solve() {
        return Ok(None);
    }
    let output = search
        .path
        .iter()
        .filter_map(|s| match s {
            Step::Pop(c) => Some(*c),
            Step::Push { .. } => None,
        })
        .collect();
    Ok(Some(OracleWitness {
        steps: search.path,
        output,
    }))
}

/// `color` is sortable and the stage left after sorting it is still sortable.
pub fn is_good_sortable(state: &SortState, color: Color) -> Result<bool> {
    if !is_color_sortable(state, color)? {
        return Ok(false);
    }
    let (next, _) = execute_move(state, color)?;
    oracle_is_sortable(&next)
}

/// Unsortable, while deleting any single sock leaves a sortable ordering.
/// Single deletions suffice because sortability passes to subpatterns.
pub fn is_minimally_unsortable(input: &SockOrdering) -> bool {
    !is_sortable(input) && (0..input.len()).all(|i| is_sortable(&input.remove_at(i)))
}

/// Whether whole color moves alone can empty `state`.
pub fn sortable_by_moves(state: &SortState) -> Result<bool> {
    fn go(state: &SortState, memo: &mut HashMap<SortState, bool>) -> Result<bool> {
        if state.is_empty() {
            return Ok(true);
        }
        if let Some(&known) = memo.get(state) {
            return Ok(known);
        }
        let mut verdict = false;
        for color in sortable_colors(state) {
            let (next, _) = execute_move(state, color)?;
            if go(&next, memo)? {
                verdict = true;
                break;
            }
        }
        memo.insert(state.clone(), verdict);
        Ok(verdict)
    }
    if let Some(sw) = find_sandwich(state.stack.socks()) {
        return Err(Error::SandwichInStack(sw.to_string()));
    }
    go(state, &mut HashMap::new())
}
