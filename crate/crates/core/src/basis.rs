//! The minimally unsortable sock orderings.
//!
//! The basis consists of thirty finite classes (`T1`–`T10`, `C1,1`–`C1,13`,
//! `C2,1`–`C2,7`) and five infinite families built on the interlace
//! `E = I(t_0, …, t_n) a t_n`:
//!
//! | family | ordering   | length  |
//! |--------|------------|---------|
//! | 1      | `dabtdE`   | `7+2n`  |
//! | 2      | `adbtdbE`  | `8+2n`  |
//! | 3      | `abdtdbE`  | `8+2n`  |
//! | 4      | `abtdtbE`  | `8+2n`  |
//! | 5      | `abtdedbE` | `9+2n`  |
//!
//! with `t = t_0`. An ordering is sortable exactly when none of these is a
//! subpattern of it.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ordering::{interlace, Color, Embedding, ParseMode, SockOrdering};

const FINITE_TABLE: &str = include_str!("../data/basis.tsv");

/// Color id of `t_0` in generated family members; `t_i` is `t_0 + i`.
const T0: u32 = 19;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisClass {
    T(u8),
    C1(u8),
    C2(u8),
    I { family: u8, n: u32 },
}

impl BasisClass {
    pub fn is_finite(self) -> bool {
        !matches!(self, BasisClass::I { .. })
    }
}

impl fmt::Display for BasisClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisClass::T(k) => write!(f, "T{k}"),
            BasisClass::C1(k) => write!(f, "C1,{k}"),
            BasisClass::C2(k) => write!(f, "C2,{k}"),
            BasisClass::I { family, n } => write!(f, "I{family},{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub class: BasisClass,
    /// Canonical form.
    pub realization: SockOrdering,
    /// The ordering spelled with the table's color names (`d`, `a`, `b`, `t`, …).
    pub named: SockOrdering,
}

impl BasisElement {
    fn new(class: BasisClass, named: SockOrdering) -> Self {
        BasisElement {
            class,
            realization: named.canonicalize(),
            named,
        }
    }

    pub fn len(&self) -> usize {
        self.realization.len()
    }

    pub fn is_empty(&self) -> bool {
        self.realization.is_empty()
    }
}

fn parse_class(label: &str) -> Option<BasisClass> {
    let index = |s: &str| s.parse::<u8>().ok();
    if let Some(rest) = label.strip_prefix("C1,") {
        index(rest).map(BasisClass::C1)
    } else if let Some(rest) = label.strip_prefix("C2,") {
        index(rest).map(BasisClass::C2)
    } else if let Some(rest) = label.strip_prefix('T') {
        index(rest).map(BasisClass::T)
    } else {
        None
    }
}

/// The thirty finite elements, in table order.
pub fn finite_basis_elements() -> Vec<BasisElement> {
    FINITE_TABLE
        .lines()
        .filter(|line| !line.trim().is_empty() && !line.starts_with('#'))
        .map(|line| {
            let (label, word) = line.split_once('\t').expect("tab-separated table row");
            let class = parse_class(label).expect("known class label");
            let named =
                SockOrdering::parse(word, ParseMode::Letters).expect("table row is letters");
            BasisElement::new(class, named)
        })
        .collect()
}

fn family_length(family: u32, n: u32) -> usize {
    let base = match family {
        1 => 7,
        2..=4 => 8,
        _ => 9,
    };
    base + 2 * n as usize
}

fn family_colors(family: u32, n: u32) -> usize {
    n as usize + if family == 5 { 5 } else { 4 }
}

/// Member `n` of infinite family `family` (1 to 5).
pub fn infinite_basis_element(family: u32, n: u32) -> Result<BasisElement> {
    let prefix = match family {
        1 => "dabtd",
        2 => "adbtdb",
        3 => "abdtdb",
        4 => "abtdtb",
        5 => "abtdedb",
        _ => return Err(Error::InvalidFamily(family)),
    };
    let ts: Vec<Color> = (0..=n).map(|i| Color(T0 + i)).collect();
    let a = Color::from_letter('a').expect("letter");
    let mut socks = SockOrdering::parse(prefix, ParseMode::Letters)?.into_socks();
    socks.extend(interlace(&ts)?.into_socks());
    socks.push(a);
    socks.push(ts[n as usize]);
    Ok(BasisElement::new(
        BasisClass::I {
            family: family as u8,
            n,
        },
        SockOrdering::new(socks),
    ))
}

/// Basis elements of length at most `max_len` and at most `max_colors`
/// distinct colors, by increasing length, finite classes before the
/// infinite families at equal length, without duplicate classes.
fn basis_elements_bounded(max_len: usize, max_colors: usize) -> Vec<BasisElement> {
    let finite = finite_basis_elements();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    let shortest = finite.iter().map(BasisElement::len).min().unwrap_or(0);
    for len in shortest..=max_len {
        let same_length_finite = finite.iter().filter(|e| e.len() == len).cloned();
        let same_length_infinite = (1..=5u32).filter_map(|family| {
            let base = family_length(family, 0);
            if len < base || !(len - base).is_multiple_of(2) {
                return None;
            }
            let n = ((len - base) / 2) as u32;
            (family_colors(family, n) <= max_colors)
                .then(|| infinite_basis_element(family, n).expect("valid family"))
        });
        for element in same_length_finite.chain(same_length_infinite) {
            if element.realization.color_count() <= max_colors
                && seen.insert(element.realization.clone())
            {
                out.push(element);
            }
        }
    }
    out
}

/// Every basis element with at most `max_len` socks.
pub fn basis_up_to_length(max_len: usize) -> Vec<BasisElement> {
    basis_elements_bounded(max_len, usize::MAX)
}

/// The first basis element (in [`basis_up_to_length`] order) that is a
/// subpattern of `input`, with its embedding. `None` certifies that `input`
/// is sortable.
pub fn find_basis_witness(input: &SockOrdering) -> Option<(BasisElement, Embedding)> {
    basis_elements_bounded(input.len(), input.color_count())
        .into_iter()
        .find_map(|element| {
            let embedding = input.find_subpattern(&element.realization)?;
            Some((element, embedding))
        })
}
