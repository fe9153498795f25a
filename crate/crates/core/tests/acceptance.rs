//! Acceptance suite: prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use footsort::basis::{finite_basis_elements, infinite_basis_element};
use footsort::bench::{loglog_slope, random_ordering};
use footsort::oracle::{is_minimally_unsortable, oracle_is_sortable};
use footsort::verify::{cross_check, verify_inf_unsort, verify_theorem, VerifyOptions};
use footsort::{full_sort, greedy, sort_colors, SockOrdering, SortState};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn o(s: &str) -> SockOrdering {
    s.parse().expect("letters")
}

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn basis_minimality() -> Outcome {
    let mut elements = finite_basis_elements();
    for family in 1..=5 {
        for n in 0..=3 {
            elements.push(infinite_basis_element(family, n).map_err(|e| e.to_string())?);
        }
    }
    let failing: Vec<String> = elements
        .iter()
        .filter(|e| !is_minimally_unsortable(&e.realization))
        .map(|e| e.class.to_string())
        .collect();
    ensure(failing.is_empty(), || {
        format!("not minimal: {}", failing.join(" "))
    })?;
    Ok(format!("{} elements minimally unsortable", elements.len()))
}

fn theorem_exactness() -> Outcome {
    let report = verify_theorem(10, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    ensure(report.is_success(), || {
        format!(
            "{} mismatches, first {:?}",
            report.mismatches.len(),
            report.mismatches.first()
        )
    })?;
    let seven = report
        .counts
        .iter()
        .find(|c| c.length == Some(7))
        .and_then(|c| c.minimal);
    ensure(seven == Some(8), || {
        format!("length-7 minimal classes: {seven:?}")
    })?;
    let total = report.total();
    Ok(format!(
        "{} classes, {} unsortable, {} minimal, {} ms",
        total.enumerated,
        total.unsortable,
        total.minimal.unwrap_or(0),
        report.elapsed_ms
    ))
}

fn sorter_correctness() -> Outcome {
    let report = cross_check(9, &VerifyOptions::default()).map_err(|e| e.to_string())?;
    ensure(report.is_success(), || {
        format!(
            "{} mismatches, first {:?}",
            report.mismatches.len(),
            report.mismatches.first()
        )
    })?;
    Ok(format!(
        "{} classes agree with the oracle",
        report.total().enumerated
    ))
}

fn example_goldens() -> Outcome {
    let abcabc = o("abcabc");
    let full = sort_colors(&abcabc, o("acb").socks()).map_err(|e| e.to_string())?;
    ensure(full.output == Some(o("aaccbb")), || {
        format!("(a,c,b) gave {:?}", full.output)
    })?;

    let partial = sort_colors(&abcabc, o("a").socks()).map_err(|e| e.to_string())?;
    ensure(
        partial.sequence.to_string() == "(a)"
            && partial.final_state == SortState::new(o("bc"), o("bc")),
        || {
            format!(
                "(a) left {} after {}",
                partial.final_state, partial.sequence
            )
        },
    )?;

    ensure(o("abacbab").contains_pattern(&o("babc")), || {
        "babc not within abacbab".into()
    })?;
    ensure(!o("abacbab").contains_subordering(&o("babc")), || {
        "babc is a literal subordering".into()
    })?;

    let stage = SortState::new(o("abt"), o("at"));
    ensure(
        !oracle_is_sortable(&stage).map_err(|e| e.to_string())?,
        || "(abt, at) judged sortable".into(),
    )?;

    let report = verify_inf_unsort(3).map_err(|e| e.to_string())?;
    ensure(report.is_success(), || {
        format!("interlace stages: {:?}", report.mismatches.first())
    })?;
    Ok(format!(
        "interlace sweep checked {} stages",
        report.total().enumerated
    ))
}

fn greedy_insufficiency() -> Outcome {
    let x = o("atdarat");
    let report = full_sort(&x).map_err(|e| e.to_string())?;
    ensure(
        report.is_sorted() && report.sequence.to_string() == "(a,r,d,t)",
        || {
            format!(
                "full sort gave {} sorted={}",
                report.sequence,
                report.is_sorted()
            )
        },
    )?;
    let (_, stalled) = greedy(&x, &[]).map_err(|e| e.to_string())?;
    ensure(stalled == SortState::new(o("at"), o("arat")), || {
        format!("greedy stopped at {stalled}")
    })?;
    let recovered = cross_check(9, &VerifyOptions::default())
        .map_err(|e| e.to_string())?
        .total()
        .greedy_recovered
        .unwrap_or(0);
    ensure(recovered >= 1, || "no greedy-recovered class".into())?;
    Ok(format!("{recovered} classes need the recursion"))
}

fn median_secs(input: &SockOrdering, repeats: usize) -> Result<f64, String> {
    let mut times = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        full_sort(input).map_err(|e| e.to_string())?;
        times.push(start.elapsed().as_secs_f64());
    }
    times.sort_by(f64::total_cmp);
    Ok(times[times.len() / 2])
}

fn performance() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in [1, 2, 3] {
        let t = median_secs(&random_ordering(10_000, 50, seed), 3)?;
        ensure(t < 10.0, || format!("10000 socks, seed {seed}: {t:.3} s"))?;
        worst = worst.max(t);
    }
    let points: Vec<(usize, f64)> = [1000, 2000, 4000, 8000]
        .iter()
        .map(|&n| median_secs(&random_ordering(n, 50, 1), 7).map(|t| (n, t)))
        .collect::<Result<_, _>>()?;
    let slope = loglog_slope(&points).ok_or("degenerate timings")?;
    ensure(slope <= 3.2, || format!("log-log slope {slope:.2}"))?;
    Ok(format!(
        "worst 10000-sock run {:.3} ms, slope {slope:.2}",
        worst * 1e3
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("basis minimality", basis_minimality),
        ("basis characterization to length 10", theorem_exactness),
        ("sorter agrees with oracle to length 9", sorter_correctness),
        ("worked examples", example_goldens),
        ("greedy insufficiency and recursion", greedy_insufficiency),
        ("performance", performance),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.1} s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}; {secs:.1} s)", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
