//! Foot-sorting of sock orderings.
//!
//! A sock ordering is a word over colors. Foot-sorting pushes socks from the
//! input onto a stack and pops them to the output, aiming for an output in
//! which every color forms one consecutive block. This crate provides:
//!
//! * [`ordering`]: the data model, canonical forms, and pattern containment;
//! * [`state`]: sorting stages, sandwiches, sortable colors and moves;
//! * [`sorter`]: a deterministic polynomial-time sorter ([`full_sort`]);
//! * [`oracle`]: an exhaustive step-level search used as ground truth;
//! * [`basis`]: the minimally unsortable orderings and witness search;
//! * [`verify`]: exhaustive checks over all canonical orderings of small length;
//! * [`bench`]: reproducible random inputs and scaling measurements.

pub mod basis;
pub mod bench;
pub mod error;
pub mod oracle;
pub mod ordering;
pub mod sorter;
pub mod state;
pub mod verify;

pub use error::{Error, Result};
pub use ordering::{interlace, Color, Embedding, ParseMode, SockOrdering};
pub use sorter::{
    full_sort, greedy, replay, sort_colors, sort_helper, Replay, SortReport, SortingSequence,
};
pub use state::SortState;
