//! `footsort`: decide, sort and explain foot-sorting of sock orderings.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use footsort::basis::{
    basis_up_to_length, find_basis_witness, infinite_basis_element, BasisElement,
};
use footsort::bench::{loglog_slope, run_bench};
use footsort::oracle::{is_minimally_unsortable, oracle_witness};
use footsort::state::Step;
use footsort::verify::{
    cross_check, verify_inf_unsort, verify_theorem, VerifyOptions, VerifyReport,
};
use footsort::{full_sort, replay, Color, Error, ParseMode, SockOrdering};

#[derive(Parser)]
#[command(name = "footsort", version, about = "Foot-sorting of sock orderings")]
struct Cli {
    /// Print one JSON object per result.
    #[arg(long, global = true)]
    json: bool,
    /// Read orderings as comma-separated color names instead of letters.
    #[arg(long, global = true)]
    tokens: bool,
    /// Include the push/pop step trace.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Inputs {
    /// Orderings given inline.
    orderings: Vec<String>,
    /// Corpus files with one ordering per line; `#` starts a comment line.
    #[arg(long)]
    file: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide sortability; exit 0 when every input is sortable, 1 otherwise.
    Check(Inputs),
    /// Like `check`, always with the step trace.
    Sort(Inputs),
    /// Find a basis element embedded in each input.
    Witness(Inputs),
    /// Test minimal unsortability; exit 0 when every input is minimal.
    Minimal(Inputs),
    /// Decide sortability by exhaustive search.
    Oracle(Inputs),
    /// List basis elements.
    Basis {
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        /// Print a single member of an infinite family (1 to 5).
        #[arg(long, requires = "n")]
        family: Option<u32>,
        #[arg(long, requires = "family")]
        n: Option<u32>,
    },
    /// Exhaustively verify the basis characterization.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// Also check the interlace stages up to this size.
        #[arg(long)]
        obs_n: Option<u32>,
        /// Also compare the sorter against the oracle.
        #[arg(long)]
        cross_check: bool,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Verdict cache file.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Time the sorter on reproducible random inputs.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "1000,2000,4000,8000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 50)]
        colors: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
}

/// Exit status of a run, ordered by severity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Positive = 0,
    Negative = 1,
    Usage = 2,
    Internal = 3,
}

struct Failure {
    status: Status,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Contract(_) => Status::Internal,
            _ => Status::Usage,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

/// An input ordering together with the names its colors are printed with.
struct Input {
    text: String,
    ordering: SockOrdering,
    names: Option<Vec<String>>,
}

impl Input {
    fn parse(text: &str, tokens: bool) -> Result<Input, Failure> {
        let mode = if tokens {
            ParseMode::Tokens
        } else {
            ParseMode::Letters
        };
        let ordering = SockOrdering::parse(text, mode).map_err(|e| Failure {
            status: Status::Usage,
            message: format!("cannot parse {text:?}: {e}"),
        })?;
        let names = tokens.then(|| {
            let mut names: Vec<String> = Vec::new();
            for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                if !names.iter().any(|n| n == token) {
                    names.push(token.to_string());
                }
            }
            names
        });
        Ok(Input {
            text: text.to_string(),
            ordering,
            names,
        })
    }

    fn color(&self, c: Color) -> String {
        match &self.names {
            Some(names) => names[c.index()].clone(),
            None => c.to_string(),
        }
    }

    fn word(&self, o: &SockOrdering) -> String {
        match &self.names {
            Some(_) => o
                .iter()
                .map(|&c| self.color(c))
                .collect::<Vec<_>>()
                .join(","),
            None => o.to_string(),
        }
    }

    fn sequence(&self, colors: &[Color]) -> String {
        let names: Vec<String> = colors.iter().map(|&c| self.color(c)).collect();
        format!("({})", names.join(","))
    }

    fn step(&self, step: &Step) -> String {
        match *step {
            Step::Push { index, color } => format!("push {}:{}", index + 1, self.color(color)),
            Step::Pop(color) => format!("pop:{}", self.color(color)),
        }
    }
}

fn read_inputs(inputs: &Inputs, tokens: bool) -> Result<Vec<Input>, Failure> {
    let mut texts = inputs.orderings.clone();
    for path in &inputs.file {
        let content = fs::read_to_string(path).map_err(|e| Failure {
            status: Status::Usage,
            message: format!("{}: {e}", path.display()),
        })?;
        texts.extend(
            content
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from),
        );
    }
    if texts.is_empty() {
        return Err(Failure {
            status: Status::Usage,
            message: "no orderings given".into(),
        });
    }
    texts.iter().map(|t| Input::parse(t, tokens)).collect()
}

struct Printer {
    json: bool,
    label: bool,
}

impl Printer {
    fn emit(&self, input: Option<&Input>, mut value: Value, text: String) {
        if self.json {
            if let (true, Some(input), Value::Object(map)) = (self.label, input, &mut value) {
                let mut labelled = serde_json::Map::new();
                labelled.insert("input".into(), Value::String(input.text.clone()));
                labelled.extend(std::mem::take(map));
                value = Value::Object(labelled);
            }
            println!("{value}");
        } else if let (true, Some(input)) = (self.label, input) {
            println!("{}: {text}", input.text);
        } else {
            println!("{text}");
        }
    }
}

fn witness_value(input: &Input) -> (Value, String) {
    match find_basis_witness(&input.ordering) {
        Some((element, embedding)) => {
            let positions = embedding.one_based_positions();
            let listed: Vec<String> = positions.iter().map(usize::to_string).collect();
            (
                json!({"class": element.class.to_string(), "positions": positions}),
                format!("{} at {}", element.class, listed.join(",")),
            )
        }
        None => (Value::Null, "none".into()),
    }
}

fn check(input: &Input, trace: bool, printer: &Printer) -> Result<Status, Failure> {
    let report = full_sort(&input.ordering)?;
    let sequence = input.sequence(report.sequence.colors());
    let (mut value, mut text, status) = match &report.output {
        Some(output) => (
            json!({
                "sortable": true,
                "sequence": report.sequence.colors().iter().map(|&c| input.color(c)).collect::<Vec<_>>(),
                "output": input.word(output),
            }),
            format!(
                "sortable, sequence={sequence}, output={}",
                input.word(output)
            ),
            Status::Positive,
        ),
        None => {
            let (witness, described) = witness_value(input);
            (
                json!({"sortable": false, "witness": witness}),
                format!(
                    "unsortable, sequence={sequence}, subordering={}, witness={described}",
                    input.word(&report.witness)
                ),
                Status::Negative,
            )
        }
    };
    if trace {
        let steps = replay(&input.ordering, report.sequence.colors())?.steps;
        let rendered: Vec<String> = steps.iter().map(|s| input.step(s)).collect();
        for step in &rendered {
            text.push_str("\n  ");
            text.push_str(step);
        }
        value["trace"] = json!(rendered);
    }
    printer.emit(Some(input), value, text);
    Ok(status)
}

fn witness(input: &Input, printer: &Printer) -> Status {
    match find_basis_witness(&input.ordering) {
        Some((element, embedding)) => {
            let positions = embedding.one_based_positions();
            let listed: Vec<String> = positions.iter().map(usize::to_string).collect();
            printer.emit(
                Some(input),
                json!({"witness": {
                    "class": element.class.to_string(),
                    "pattern": element.realization.to_string(),
                    "positions": positions,
                }}),
                format!(
                    "{} {} at {}",
                    element.class,
                    element.realization,
                    listed.join(",")
                ),
            );
            Status::Negative
        }
        None => {
            printer.emit(Some(input), json!({"witness": null}), "none".into());
            Status::Positive
        }
    }
}

fn minimal(input: &Input, printer: &Printer) -> Result<Status, Failure> {
    if input.ordering.color_count() > footsort::oracle::MAX_ORACLE_COLORS {
        return Err(Error::TooManyColors {
            max: footsort::oracle::MAX_ORACLE_COLORS,
            got: input.ordering.color_count(),
        }
        .into());
    }
    let verdict = is_minimally_unsortable(&input.ordering);
    let text = if verdict {
        "minimally unsortable"
    } else {
        "not minimally unsortable"
    };
    printer.emit(Some(input), json!({"minimal": verdict}), text.into());
    Ok(if verdict {
        Status::Positive
    } else {
        Status::Negative
    })
}

fn oracle(input: &Input, trace: bool, printer: &Printer) -> Result<Status, Failure> {
    let Some(found) = oracle_witness(&input.ordering)? else {
        printer.emit(Some(input), json!({"sortable": false}), "unsortable".into());
        return Ok(Status::Negative);
    };
    let mut value = json!({"sortable": true, "output": input.word(&found.output)});
    let mut text = format!("sortable, output={}", input.word(&found.output));
    if trace {
        let rendered: Vec<String> = found.steps.iter().map(|s| input.step(s)).collect();
        for step in &rendered {
            text.push_str("\n  ");
            text.push_str(step);
        }
        value["trace"] = json!(rendered);
    }
    printer.emit(Some(input), value, text);
    Ok(Status::Positive)
}

fn basis(max_len: usize, member: Option<(u32, u32)>, printer: &Printer) -> Result<Status, Failure> {
    let elements: Vec<BasisElement> = match member {
        Some((family, n)) => vec![infinite_basis_element(family, n)?],
        None => basis_up_to_length(max_len),
    };
    for e in elements {
        printer.emit(
            None,
            json!({
                "class": e.class.to_string(),
                "named": e.named.to_string(),
                "canonical": e.realization.to_string(),
                "length": e.len(),
            }),
            format!("{}\t{}", e.class, e.named),
        );
    }
    Ok(Status::Positive)
}

fn print_report(report: &VerifyReport, printer: &Printer) {
    let mut lines = vec![format!("{}:", report.scope.check)];
    for row in &report.counts {
        let mut line = match (row.length, row.n, row.i) {
            (Some(len), _, _) => format!("  length {len:>2}"),
            (None, Some(n), Some(i)) => format!("  n {n} i {i}"),
            _ => "  total".into(),
        };
        line += &format!(
            ": enumerated {}, sortable {}, unsortable {}",
            row.enumerated, row.sortable, row.unsortable
        );
        if let Some(m) = row.minimal {
            line += &format!(", minimal {m}");
        }
        if let Some(g) = row.greedy_recovered {
            line += &format!(", greedy-recovered {g}");
        }
        lines.push(line);
    }
    for m in &report.mismatches {
        lines.push(format!(
            "  MISMATCH {:?} {}: expected {}, got {}",
            m.check, m.subject, m.expected, m.actual
        ));
    }
    lines.push(if report.is_success() {
        format!("  ok ({} ms)", report.elapsed_ms)
    } else {
        format!("  FAILED: {} mismatches", report.mismatches.len())
    });
    let value = serde_json::to_value(report).expect("report serializes");
    printer.emit(None, value, lines.join("\n"));
}

fn run(cli: Cli) -> Result<Status, Failure> {
    let inputs = match &cli.command {
        Command::Check(i)
        | Command::Sort(i)
        | Command::Witness(i)
        | Command::Minimal(i)
        | Command::Oracle(i) => read_inputs(i, cli.tokens)?,
        _ => Vec::new(),
    };
    let printer = Printer {
        json: cli.json,
        label: inputs.len() > 1,
    };
    let mut status = Status::Positive;
    match cli.command {
        Command::Check(_) | Command::Sort(_) => {
            let trace = cli.trace || matches!(cli.command, Command::Sort(_));
            for input in &inputs {
                status = status.max(check(input, trace, &printer)?);
            }
        }
        Command::Witness(_) => {
            for input in &inputs {
                status = status.max(witness(input, &printer));
            }
        }
        Command::Minimal(_) => {
            for input in &inputs {
                status = status.max(minimal(input, &printer)?);
            }
        }
        Command::Oracle(_) => {
            for input in &inputs {
                status = status.max(oracle(input, cli.trace, &printer)?);
            }
        }
        Command::Basis { max_len, family, n } => {
            status = basis(max_len, family.zip(n), &printer)?;
        }
        Command::Verify {
            max_len,
            obs_n,
            cross_check: with_cross_check,
            jobs,
            cache,
        } => {
            let options = VerifyOptions {
                jobs,
                cache,
                ..VerifyOptions::default()
            };
            let mut reports = vec![verify_theorem(max_len, &options)?];
            if with_cross_check {
                reports.push(cross_check(max_len, &options)?);
            }
            if let Some(n) = obs_n {
                reports.push(verify_inf_unsort(n)?);
            }
            for report in &reports {
                print_report(report, &printer);
                if !report.is_success() {
                    status = Status::Negative;
                }
            }
        }
        Command::Bench {
            sizes,
            colors,
            seed,
            repeats,
        } => {
            if colors == 0 {
                return Err(Failure {
                    status: Status::Usage,
                    message: "--colors must be positive".into(),
                });
            }
            let rows = run_bench(&sizes, colors, seed, repeats);
            let points: Vec<(usize, f64)> = rows.iter().map(|r| (r.size, r.min_ms)).collect();
            let slope = loglog_slope(&points);
            let mut lines = vec!["size\tcolors\tsortable\tmin_ms\tmedian_ms\tinput".to_string()];
            for r in &rows {
                lines.push(format!(
                    "{}\t{}\t{}\t{:.3}\t{:.3}\t{}",
                    r.size, r.colors, r.sortable, r.min_ms, r.median_ms, r.input_digest
                ));
            }
            if let Some(s) = slope {
                lines.push(format!("log-log slope {s:.2}"));
            }
            printer.emit(
                None,
                json!({"rows": rows, "slope": slope}),
                lines.join("\n"),
            );
        }
    }
    Ok(status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.status as u8)
        }
    }
}
