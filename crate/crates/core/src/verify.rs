//! Exhaustive verification over every canonical ordering up to a length.
//!
//! Canonical orderings are restricted growth strings: `x_0 = 0` and each
//! `x_i` is at most one more than the largest earlier value. Work is sharded
//! by fixed prefixes of these strings; shards are processed in parallel and
//! merged in prefix order, so reports do not depend on the worker count.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{basis_up_to_length, find_basis_witness};
use crate::error::{Error, Result};
use crate::oracle::{is_sortable, oracle_is_sortable};
use crate::ordering::{interlace, Color, SockOrdering};
use crate::sorter::{full_sort, greedy, replay};
use crate::state::SortState;

/// Iterator over the canonical orderings of one length, in lexicographic order.
#[derive(Clone, Debug)]
pub struct CanonicalOrderings {
    current: Vec<u32>,
    /// `prefix_max[i]` is the largest value among `current[..=i]`.
    prefix_max: Vec<u32>,
    fixed: usize,
    done: bool,
}

impl CanonicalOrderings {
    /// All canonical orderings of `length` that start with `prefix`, which
    /// must itself be canonical.
    pub fn with_prefix(length: usize, prefix: &[u32]) -> Self {
        assert!(prefix.len() <= length, "prefix longer than the ordering");
        let mut current = prefix.to_vec();
        current.resize(length, 0);
        let mut prefix_max = Vec::with_capacity(length);
        let mut max = 0;
        for &v in &current {
            max = max.max(v);
            prefix_max.push(max);
        }
        CanonicalOrderings {
            current,
            prefix_max,
            fixed: prefix.len().max(1),
            done: false,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.current.len();
        for i in (self.fixed..n).rev() {
            if self.current[i] <= self.prefix_max[i - 1] {
                self.current[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.current[i]);
                for j in i + 1..n {
                    self.current[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for CanonicalOrderings {
    type Item = SockOrdering;

    fn next(&mut self) -> Option<SockOrdering> {
        if self.done {
            return None;
        }
        let item = SockOrdering::from_ids(&self.current);
        self.done = !self.advance();
        Some(item)
    }
}

/// Every canonical ordering of exactly `length` socks, one per equivalence class.
pub fn enumerate_canonical(length: usize) -> CanonicalOrderings {
    CanonicalOrderings::with_prefix(length, &[])
}

/// Canonical prefixes of length `min(length, prefix_len)`, in lexicographic order.
fn shard_prefixes(length: usize, prefix_len: usize) -> Vec<Vec<u32>> {
    enumerate_canonical(length.min(prefix_len))
        .map(|o| o.iter().map(|c| c.id()).collect())
        .collect()
}

/// Number of set partitions of `n` elements, by the Stirling recurrence.
pub fn set_partition_count(n: usize) -> u64 {
    let mut row = vec![1u64];
    for k in 1..=n {
        let mut next = vec![0u64; k + 1];
        for (j, &s) in row.iter().enumerate() {
            next[j + 1] += s;
            next[j] += j as u64 * s;
        }
        row = next;
    }
    row.iter().sum()
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    /// Length of the prefixes that define shards.
    pub shard_prefix_len: usize,
    /// Optional verdict cache file.
    pub cache: Option<PathBuf>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            jobs: 0,
            shard_prefix_len: 5,
            cache: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scope {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_len: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_max: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub i: Option<u32>,
    pub enumerated: u64,
    pub sortable: u64,
    pub unsortable: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub minimal: Option<u64>,
    /// Orderings the greedy pass leaves stuck but the full sorter sorts.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub greedy_recovered: Option<u64>,
}

impl Counts {
    fn merge(&mut self, other: &Counts) {
        let add = |a: &mut Option<u64>, b: Option<u64>| {
            if let Some(b) = b {
                *a = Some(a.unwrap_or(0) + b);
            }
        };
        self.enumerated += other.enumerated;
        self.sortable += other.sortable;
        self.unsortable += other.unsortable;
        add(&mut self.minimal, other.minimal);
        add(&mut self.greedy_recovered, other.greedy_recovered);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Oracle verdict versus existence of a basis subpattern.
    BasisAvoidance,
    /// A minimally unsortable class missing from the basis.
    MinimalOutsideBasis,
    /// A basis element that the enumeration did not find minimal.
    BasisNotMinimal,
    /// Full sorter verdict versus oracle verdict.
    SorterVerdict,
    /// A sorted verdict whose sequence does not replay to a grouped output.
    SorterReplay,
    /// An unsortable verdict whose witness is not an unsortable subordering.
    SorterWitness,
    /// The sorter reported an internal contract violation.
    SorterContract,
    /// A sub-state verdict in the interlace sweep.
    InterlaceState,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub check: CheckKind,
    /// The ordering, or `S|R` for stage checks.
    pub subject: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub scope: Scope,
    pub counts: Vec<Counts>,
    pub mismatches: Vec<Mismatch>,
    pub elapsed_ms: u64,
}

impl VerifyReport {
    pub fn is_success(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// Totals over all rows.
    pub fn total(&self) -> Counts {
        let mut total = Counts::default();
        for row in &self.counts {
            total.merge(row);
        }
        total
    }

    /// The report with timing zeroed, for comparing runs.
    pub fn without_timing(&self) -> VerifyReport {
        VerifyReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

fn verdict_word(sortable: bool) -> &'static str {
    if sortable {
        "sortable"
    } else {
        "unsortable"
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Contract(format!("cannot build worker pool: {e}")))
}

/// Runs `per_item` over every canonical ordering of `length`, shard by shard,
/// and returns the results in enumeration order.
fn map_canonical<T, F>(length: usize, options: &VerifyOptions, per_item: F) -> Vec<T>
where
    T: Send,
    F: Fn(SockOrdering) -> T + Sync,
{
    shard_prefixes(length, options.shard_prefix_len)
        .par_iter()
        .map(|prefix| {
            CanonicalOrderings::with_prefix(length, prefix)
                .map(&per_item)
                .collect::<Vec<T>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Verdicts for every canonical ordering of one length, in enumeration order.
type Verdicts = Vec<(SockOrdering, bool)>;

fn load_cache(path: &Path) -> Result<HashMap<usize, Verdicts>> {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(HashMap::new()),
        Err(e) => return Err(Error::Cache(format!("{}: {e}", path.display()))),
    };
    let mut by_length: HashMap<usize, Verdicts> = HashMap::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::Cache(format!("{}:{}: malformed line", path.display(), lineno + 1));
        let (word, verdict) = line.split_once('\t').ok_or_else(bad)?;
        let ordering: SockOrdering = word.parse().map_err(|_| bad())?;
        let sortable = match verdict {
            "sortable" => true,
            "unsortable" => false,
            _ => return Err(bad()),
        };
        by_length
            .entry(ordering.len())
            .or_default()
            .push((ordering, sortable));
    }
    // Keep only lengths whose entries are exactly the full canonical class list.
    by_length.retain(|&len, verdicts| {
        if verdicts.len() as u64 != set_partition_count(len) {
            return false;
        }
        verdicts.sort();
        let distinct: HashSet<&SockOrdering> = verdicts.iter().map(|(o, _)| o).collect();
        distinct.len() == verdicts.len() && verdicts.iter().all(|(o, _)| o.is_canonical())
    });
    Ok(by_length)
}

fn store_cache(path: &Path, lengths: &[Verdicts]) -> Result<()> {
    let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
    let mut file = std::io::BufWriter::new(fs::File::create(path).map_err(io)?);
    for verdicts in lengths {
        for (ordering, sortable) in verdicts {
            writeln!(file, "{ordering}\t{}", verdict_word(*sortable)).map_err(io)?;
        }
    }
    file.flush().map_err(io)
}

/// For every canonical ordering of length at most `max_len`, checks that it
/// is unsortable exactly when some basis element is a subpattern of it, and
/// that the minimally unsortable classes are exactly the basis elements of
/// that length range.
pub fn verify_theorem(max_len: usize, options: &VerifyOptions) -> Result<VerifyReport> {
    let start = Instant::now();
    let workers = pool(options.jobs)?;
    let cached = match &options.cache {
        Some(path) => load_cache(path)?,
        None => HashMap::new(),
    };
    let basis: HashSet<SockOrdering> = basis_up_to_length(max_len)
        .into_iter()
        .map(|e| e.realization)
        .collect();

    let mut report = VerifyReport {
        scope: Scope {
            check: "theorem".into(),
            max_len: Some(max_len),
            n_max: None,
        },
        ..VerifyReport::default()
    };
    let mut all_verdicts: Vec<Verdicts> = Vec::new();
    let mut minimal_found: HashSet<SockOrdering> = HashSet::new();
    let mut previous: HashMap<SockOrdering, bool> = HashMap::new();

    for length in 0..=max_len {
        let verdicts: Verdicts = match cached.get(&length) {
            Some(v) => v.clone(),
            None => workers.install(|| {
                map_canonical(length, options, |x| {
                    let sortable = is_sortable(&x);
                    (x, sortable)
                })
            }),
        };

        let checks: Vec<(bool, Option<Mismatch>)> = workers.install(|| {
            verdicts
                .par_iter()
                .map(|(x, sortable)| {
                    let embeds = find_basis_witness(x).is_some();
                    let mismatch = (embeds == *sortable).then(|| Mismatch {
                        check: CheckKind::BasisAvoidance,
                        subject: x.to_string(),
                        expected: verdict_word(*sortable).into(),
                        actual: if embeds {
                            "basis subpattern found".into()
                        } else {
                            "no basis subpattern".into()
                        },
                    });
                    let minimal = !sortable
                        && (0..x.len()).all(|i| {
                            previous
                                .get(&x.remove_at(i).canonicalize())
                                .copied()
                                .expect("every shorter class has a verdict")
                        });
                    (minimal, mismatch)
                })
                .collect()
        });

        let mut row = Counts {
            length: Some(length),
            minimal: Some(0),
            ..Counts::default()
        };
        for ((x, sortable), (minimal, mismatch)) in verdicts.iter().zip(checks) {
            row.enumerated += 1;
            if *sortable {
                row.sortable += 1;
            } else {
                row.unsortable += 1;
            }
            report.mismatches.extend(mismatch);
            if minimal {
                *row.minimal.as_mut().expect("set") += 1;
                minimal_found.insert(x.clone());
                if !basis.contains(x) {
                    report.mismatches.push(Mismatch {
                        check: CheckKind::MinimalOutsideBasis,
                        subject: x.to_string(),
                        expected: "not minimally unsortable".into(),
                        actual: "minimally unsortable".into(),
                    });
                }
            }
        }
        report.counts.push(row);
        previous = verdicts.iter().cloned().collect();
        all_verdicts.push(verdicts);
    }

    for element in basis_up_to_length(max_len) {
        if !minimal_found.contains(&element.realization) {
            report.mismatches.push(Mismatch {
                check: CheckKind::BasisNotMinimal,
                subject: format!("{} = {}", element.class, element.realization),
                expected: "minimally unsortable".into(),
                actual: "not found minimal".into(),
            });
        }
    }

    if let Some(path) = &options.cache {
        store_cache(path, &all_verdicts)?;
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Outcome of checking the full sorter on one ordering.
struct SorterCheck {
    sortable: bool,
    greedy_recovered: bool,
    mismatches: Vec<Mismatch>,
}

fn check_sorter(x: &SockOrdering) -> SorterCheck {
    let sortable = is_sortable(x);
    let mut mismatches = Vec::new();
    let mut push = |check, expected: &str, actual: String| {
        mismatches.push(Mismatch {
            check,
            subject: x.to_string(),
            expected: expected.into(),
            actual,
        })
    };
    let report = match full_sort(x) {
        Ok(report) => report,
        Err(e) => {
            push(
                CheckKind::SorterContract,
                verdict_word(sortable),
                e.to_string(),
            );
            return SorterCheck {
                sortable,
                greedy_recovered: false,
                mismatches,
            };
        }
    };
    if report.is_sorted() != sortable {
        push(
            CheckKind::SorterVerdict,
            verdict_word(sortable),
            verdict_word(report.is_sorted()).into(),
        );
    }
    if report.is_sorted() {
        match replay(x, report.sequence.colors()) {
            Ok(r) if r.state.is_empty() && r.output.is_grouped() && r.output.len() == x.len() => {}
            Ok(r) => push(
                CheckKind::SorterReplay,
                "grouped output from (∅, ∅)",
                format!("state {} output {}", r.state, r.output),
            ),
            Err(e) => push(
                CheckKind::SorterReplay,
                "replayable sequence",
                e.to_string(),
            ),
        }
    } else if !x.contains_subordering(&report.witness) || is_sortable(&report.witness) {
        push(
            CheckKind::SorterWitness,
            "unsortable subordering",
            report.witness.to_string(),
        );
    }
    let greedy_stuck = greedy(x, &[]).map(|(_, s)| !s.is_empty()).unwrap_or(false);
    SorterCheck {
        sortable,
        greedy_recovered: greedy_stuck && report.is_sorted(),
        mismatches,
    }
}

/// Compares the full sorter against the oracle on every canonical ordering
/// of length at most `max_len`, validating sequences and witnesses.
pub fn cross_check(max_len: usize, options: &VerifyOptions) -> Result<VerifyReport> {
    let start = Instant::now();
    let workers = pool(options.jobs)?;
    let mut report = VerifyReport {
        scope: Scope {
            check: "cross-check".into(),
            max_len: Some(max_len),
            n_max: None,
        },
        ..VerifyReport::default()
    };
    for length in 0..=max_len {
        let checks = workers.install(|| map_canonical(length, options, |x| check_sorter(&x)));
        let mut row = Counts {
            length: Some(length),
            greedy_recovered: Some(0),
            ..Counts::default()
        };
        for check in checks {
            row.enumerated += 1;
            if check.sortable {
                row.sortable += 1;
            } else {
                row.unsortable += 1;
            }
            if check.greedy_recovered {
                *row.greedy_recovered.as_mut().expect("set") += 1;
            }
            report.mismatches.extend(check.mismatches);
        }
        report.counts.push(row);
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// The stage `(a b t_i, I(t_i, …, t_n) a t_n)`.
pub fn interlace_stage(n: u32, i: u32) -> SortState {
    let a = Color(0);
    let b = Color(1);
    let t = |k: u32| Color(19 + k);
    let ts: Vec<Color> = (i..=n).map(t).collect();
    let mut remaining = interlace(&ts).expect("distinct colors").into_socks();
    remaining.extend([a, t(n)]);
    SortState::new(
        SockOrdering::new(vec![a, b, t(i)]),
        SockOrdering::new(remaining),
    )
}

fn subsequences(word: &SockOrdering) -> impl Iterator<Item = (u64, SockOrdering)> + '_ {
    let n = word.len();
    (0u64..1 << n).map(move |mask| {
        let sub = (0..n)
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| word.socks()[k])
            .collect();
        (mask, sub)
    })
}

/// For each `n ≤ n_max` and `i ≤ n`, checks that the interlace stage is
/// unsortable and that every proper sub-stage is sortable.
pub fn verify_inf_unsort(n_max: u32) -> Result<VerifyReport> {
    let start = Instant::now();
    let mut report = VerifyReport {
        scope: Scope {
            check: "interlace-stages".into(),
            max_len: None,
            n_max: Some(n_max),
        },
        ..VerifyReport::default()
    };
    for n in 0..=n_max {
        for i in 0..=n {
            let stage = interlace_stage(n, i);
            let mut row = Counts {
                n: Some(n),
                i: Some(i),
                ..Counts::default()
            };
            let mut record = |state: &SortState, expect_sortable: bool| -> Result<()> {
                let sortable = oracle_is_sortable(state)?;
                row.enumerated += 1;
                if sortable {
                    row.sortable += 1;
                } else {
                    row.unsortable += 1;
                }
                if sortable != expect_sortable {
                    report.mismatches.push(Mismatch {
                        check: CheckKind::InterlaceState,
                        subject: state.to_string(),
                        expected: verdict_word(expect_sortable).into(),
                        actual: verdict_word(sortable).into(),
                    });
                }
                Ok(())
            };
            record(&stage, false)?;
            let full_stack = (1u64 << stage.stack.len()) - 1;
            let full_rest = (1u64 << stage.remaining.len()) - 1;
            for (stack_mask, stack) in subsequences(&stage.stack) {
                for (rest_mask, rest) in subsequences(&stage.remaining) {
                    if stack_mask == full_stack && rest_mask == full_rest {
                        continue;
                    }
                    record(&SortState::new(stack.clone(), rest), true)?;
                }
            }
            report.counts.push(row);
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Re-runs the check behind a mismatch record; true when the disagreement
/// reproduces.
pub fn mismatch_reproduces(mismatch: &Mismatch) -> bool {
    let parse = |s: &str| s.parse::<SockOrdering>().ok();
    match mismatch.check {
        CheckKind::BasisAvoidance => parse(&mismatch.subject)
            .is_some_and(|x| find_basis_witness(&x).is_some() == is_sortable(&x)),
        CheckKind::MinimalOutsideBasis => parse(&mismatch.subject).is_some_and(|x| {
            crate::oracle::is_minimally_unsortable(&x)
                && !basis_up_to_length(x.len())
                    .iter()
                    .any(|e| e.realization == x.canonicalize())
        }),
        CheckKind::SorterVerdict
        | CheckKind::SorterReplay
        | CheckKind::SorterWitness
        | CheckKind::SorterContract => parse(&mismatch.subject).is_some_and(|x| {
            check_sorter(&x)
                .mismatches
                .iter()
                .any(|m| m.check == mismatch.check)
        }),
        CheckKind::BasisNotMinimal | CheckKind::InterlaceState => false,
    }
}
