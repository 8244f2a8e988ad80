//! Command-line front end: evaluate temporal phrases over a calendar frame,
//! compare two phrases, solve qualitative networks, analyze clause aspect,
//! place iterations on the timeline, and scan text for iterative phrases.
//!
//! Exit codes: 0 on success, 1 on domain errors (with a one-line JSON error
//! object on stderr), 2 on usage errors. All output is deterministic.

mod iterfile;
mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use temporel::cti::{self, Denotation, DenoteOpts};
use temporel::extract::{self, PatternId, PeriodClass};
use temporel::itermodel::{self, Itere};
use temporel::network::QualNetwork;
use temporel::sdt::{self, Adverb, Circumstancial, Clause, EncoreDeja, Tense, Vendler};
use temporel::{Frame, Verdict};

use output::{
    aspect_name, category_name, constraint_json, constraint_text, cti_error, denotation_text,
    diagnosis_name, interval_json, interval_text, network_error, parse_frame, reading_name,
    tense_value_name, verdict_name, CliError,
};

#[derive(Parser)]
#[command(
    name = "temporel",
    version,
    about = "Series algebra, temporal adverbials and iteration on the timeline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FrameArgs {
    /// Start of the evaluation frame (inclusive), YYYY-MM-DD or YYYY-MM-DDTHH:MM.
    #[arg(long, value_name = "DATE")]
    from: String,
    /// End of the evaluation frame (exclusive), same formats.
    #[arg(long, value_name = "DATE")]
    to: String,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a temporal phrase over a frame and print its denotation.
    Eval {
        /// Phrase to evaluate, e.g. "tous les lundis de mars".
        phrase: String,
        #[command(flatten)]
        frame: FrameArgs,
        /// Clip members at component boundaries instead of dropping them.
        #[arg(long)]
        soft: bool,
        /// Let ratio witnesses under-fill components that are too small.
        #[arg(long)]
        lenient: bool,
        /// For quantified phrases, print one canonical witness series.
        #[arg(long)]
        witness: bool,
        /// Print a single JSON object instead of lines.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate two phrases and report how their denotations relate.
    Check {
        first: String,
        second: String,
        #[command(flatten)]
        frame: FrameArgs,
        /// Clip members at component boundaries instead of dropping them.
        #[arg(long)]
        soft: bool,
        /// Tolerate under-filled ratio witnesses when comparing families.
        #[arg(long)]
        lenient: bool,
        /// Print a single JSON object instead of lines.
        #[arg(long)]
        json: bool,
    },
    /// Solve or render a qualitative constraint network.
    #[command(subcommand)]
    Network(NetworkAction),
    /// Analyze a clause: viewpoint aspect, conflicts, adverb readings.
    Sdt(SdtArgs),
    /// Place the occurrences of an iteration description on the timeline.
    Instantiate {
        /// JSON description of the iteration (see the manual for the schema).
        file: PathBuf,
        #[command(flatten)]
        frame: FrameArgs,
        /// Print a single JSON object instead of indented lines.
        #[arg(long)]
        json: bool,
    },
    /// Scan a text file for iterative adverbial phrases.
    Extract {
        file: PathBuf,
        /// Keep only matches of this pattern (e.g. TOUS_LES, FOIS_PAR).
        #[arg(long, value_name = "ID")]
        pattern: Option<String>,
        /// Print one JSON object per match instead of summary lines.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum NetworkAction {
    /// Propagate constraints and print the verdict with the closed edges.
    Solve {
        /// File of `<node> <relation> <node>` lines; `#` starts a comment.
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Refine to one concrete scenario and print its endpoint ranks.
    Scenario {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Draw one scenario as a fixed-width timeline.
    Chronogram { file: PathBuf },
}

#[derive(Args)]
struct SdtArgs {
    /// Situation type: etat, activite, accomplissement, achevement.
    vendler: String,
    /// Tense: present, imparfait, passe-simple, passe-compose,
    /// plus-que-parfait, futur.
    tense: String,
    /// "pendant <d>": frame the whole process (minutes).
    #[arg(long, value_name = "MINUTES", value_parser = positive_minutes)]
    pendant: Option<i64>,
    /// "en <d>": measure a telic run (minutes).
    #[arg(long, value_name = "MINUTES", value_parser = positive_minutes)]
    en: Option<i64>,
    /// "depuis <d>": relate a phase to the reference (minutes).
    #[arg(long, value_name = "MINUTES", value_parser = positive_minutes)]
    depuis: Option<i64>,
    /// Punctual clock anchor, e.g. 8:30.
    #[arg(long, value_name = "HH:MM")]
    clock: Option<String>,
    /// Calendar adverbial as a phrase, e.g. "tous les lundis".
    #[arg(long, value_name = "PHRASE")]
    calendar: Option<String>,
    /// Iteration adverb whose reading to compute: encore or deja.
    #[arg(long, value_name = "WORD")]
    adverb: Option<String>,
    /// Iteration count adverbial ("trois fois").
    #[arg(long, value_name = "N", conflicts_with = "adverb")]
    count: Option<u32>,
    /// Frequency adverb: souvent, parfois, rarement.
    #[arg(long, value_name = "WORD", conflicts_with_all = ["adverb", "count"])]
    frequency: Option<String>,
    /// Treat the process as one-shot rather than reiterable.
    #[arg(long)]
    not_reiterable: bool,
    /// Treat one uninterrupted run over the stated span as implausible.
    #[arg(long)]
    implausible_duration: bool,
    /// Print a single JSON object instead of lines.
    #[arg(long)]
    json: bool,
}

fn positive_minutes(text: &str) -> Result<i64, String> {
    match text.parse::<i64>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(String::from("expected a positive number of minutes")),
    }
}

/// Dying silently when the read end of a pipe closes (`temporel … | head`)
/// is the expected command-line behavior; Rust's default turns it into a
/// panic on the first blocked print instead.
fn reset_sigpipe() {
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Domain { kind, message }) => {
            eprintln!("{}", json!({"error": {"kind": kind, "message": message}}));
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Eval {
            phrase,
            frame,
            soft,
            lenient,
            witness,
            json,
        } => cmd_eval(&phrase, &frame, soft, lenient, witness, json),
        Command::Check {
            first,
            second,
            frame,
            soft,
            lenient,
            json,
        } => cmd_check(&first, &second, &frame, soft, lenient, json),
        Command::Network(action) => match action {
            NetworkAction::Solve { file, json } => cmd_network_solve(&file, json),
            NetworkAction::Scenario { file, json } => cmd_network_scenario(&file, json),
            NetworkAction::Chronogram { file } => cmd_network_chronogram(&file),
        },
        Command::Sdt(args) => cmd_sdt(&args),
        Command::Instantiate { file, frame, json } => cmd_instantiate(&file, &frame, json),
        Command::Extract {
            file,
            pattern,
            json,
        } => cmd_extract(&file, pattern.as_deref(), json),
    }
}

fn read_input(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// eval

fn cmd_eval(
    phrase: &str,
    frame: &FrameArgs,
    soft: bool,
    lenient: bool,
    witness: bool,
    json: bool,
) -> Result<(), CliError> {
    let frame = parse_frame(&frame.from, &frame.to)?;
    let ast = cti::parse(phrase).map_err(cti_error)?;
    let category = cti::classify_ast(&ast);
    let opts = DenoteOpts { soft, lenient };
    let denotation = cti::denote(&ast, &frame, opts).map_err(cti_error)?;

    if json {
        let mut obj = json!({
            "phrase": phrase,
            "category": category_name(&category),
        });
        match &denotation {
            Denotation::Concrete(series) => {
                obj["kind"] = "concrete".into();
                obj["intervals"] = series
                    .iter()
                    .map(|j| interval_json(&frame, j))
                    .collect::<Vec<_>>()
                    .into();
            }
            Denotation::Quantified(family) => {
                obj["kind"] = "quantified".into();
                obj["base"] = family.base.len().into();
                obj["constraint"] = constraint_json(&family.constraint);
                obj["witness"] = if witness {
                    let w = cti::witness(family, lenient).map_err(cti_error)?;
                    w.iter()
                        .map(|j| interval_json(&frame, j))
                        .collect::<Vec<_>>()
                        .into()
                } else {
                    Value::Null
                };
            }
        }
        println!("{obj}");
        return Ok(());
    }

    match &denotation {
        Denotation::Concrete(series) => {
            for j in series {
                println!("{}", interval_text(&frame, j));
            }
        }
        Denotation::Quantified(family) if witness => {
            let w = cti::witness(family, lenient).map_err(cti_error)?;
            for j in &w {
                println!("{}", interval_text(&frame, j));
            }
        }
        Denotation::Quantified(family) => {
            println!(
                "family over a base of {}",
                output::counted(family.base.len(), "member")
            );
            println!("constraint: {}", constraint_text(&family.constraint));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// check

fn cmd_check(
    first: &str,
    second: &str,
    frame: &FrameArgs,
    soft: bool,
    lenient: bool,
    json: bool,
) -> Result<(), CliError> {
    let frame = parse_frame(&frame.from, &frame.to)?;
    let opts = DenoteOpts { soft, lenient };
    let d1 = cti::denote(&cti::parse(first).map_err(cti_error)?, &frame, opts).map_err(cti_error)?;
    let d2 =
        cti::denote(&cti::parse(second).map_err(cti_error)?, &frame, opts).map_err(cti_error)?;
    let report = cti::compare(&d1, &d2, lenient).map_err(cti_error)?;

    if json {
        println!(
            "{}",
            json!({
                "first": {"phrase": first, "denotation": denotation_text(&d1)},
                "second": {"phrase": second, "denotation": denotation_text(&d2)},
                "report": {
                    "equal": report.equal,
                    "first_extracted_from_second": report.first_extracted_from_second,
                    "second_extracted_from_first": report.second_extracted_from_first,
                    "first_included_in_second": report.first_included_in_second,
                    "second_included_in_first": report.second_included_in_first,
                    "disjoint": report.disjoint,
                    "overlapping": report.overlapping,
                },
            })
        );
        return Ok(());
    }

    println!("first: {}", denotation_text(&d1));
    println!("second: {}", denotation_text(&d2));
    for (name, value) in [
        ("equal", report.equal),
        (
            "first_extracted_from_second",
            report.first_extracted_from_second,
        ),
        (
            "second_extracted_from_first",
            report.second_extracted_from_first,
        ),
        (
            "first_included_in_second",
            report.first_included_in_second,
        ),
        (
            "second_included_in_first",
            report.second_included_in_first,
        ),
        ("disjoint", report.disjoint),
        ("overlapping", report.overlapping),
    ] {
        println!("{name}: {value}");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// network

fn load_network(path: &Path) -> Result<QualNetwork, CliError> {
    QualNetwork::parse(&read_input(path)?).map_err(network_error)
}

fn cmd_network_solve(path: &Path, json: bool) -> Result<(), CliError> {
    let mut net = load_network(path)?;
    let verdict = net.path_consistency();
    if json {
        let nodes: Vec<&str> = (0..net.node_count()).map(|i| net.node_name(i)).collect();
        let mut edges = Vec::new();
        for i in 0..net.node_count() {
            for j in (i + 1)..net.node_count() {
                edges.push(json!({
                    "from": net.node_name(i),
                    "to": net.node_name(j),
                    "relations": net.edge(i, j).iter().map(|r| r.name()).collect::<Vec<_>>(),
                }));
            }
        }
        println!(
            "{}",
            json!({"verdict": verdict_name(verdict), "nodes": nodes, "edges": edges})
        );
    } else {
        println!("verdict: {}", verdict_name(verdict));
        for i in 0..net.node_count() {
            for j in (i + 1)..net.node_count() {
                println!(
                    "{} {} {}",
                    net.node_name(i),
                    net.edge(i, j),
                    net.node_name(j)
                );
            }
        }
    }
    if verdict == Verdict::Inconsistent {
        return Err(CliError::domain("inconsistent", "the network admits no model"));
    }
    Ok(())
}

fn cmd_network_scenario(path: &Path, json: bool) -> Result<(), CliError> {
    let net = load_network(path)?;
    let scenario = net.scenario().map_err(network_error)?;
    if json {
        let nodes: Vec<Value> = scenario
            .ranks
            .iter()
            .enumerate()
            .map(|(i, (beg, end))| json!({"name": net.node_name(i), "beg": beg, "end": end}))
            .collect();
        println!("{}", json!({"nodes": nodes}));
    } else {
        for (i, (beg, end)) in scenario.ranks.iter().enumerate() {
            println!("{}: {}..{}", net.node_name(i), beg, end);
        }
    }
    Ok(())
}

fn cmd_network_chronogram(path: &Path) -> Result<(), CliError> {
    let net = load_network(path)?;
    print!("{}", net.export_chronogram().map_err(network_error)?);
    Ok(())
}

// ---------------------------------------------------------------------------
// sdt

fn fold_word(text: &str) -> String {
    text.chars()
        .filter(|c| !matches!(c, '-' | '_' | ' '))
        .flat_map(char::to_lowercase)
        .map(|c| match c {
            'à' | 'â' => 'a',
            'é' | 'è' | 'ê' => 'e',
            _ => c,
        })
        .collect()
}

fn parse_vendler(text: &str) -> Result<Vendler, CliError> {
    match fold_word(text).as_str() {
        "etat" => Ok(Vendler::Etat),
        "activite" => Ok(Vendler::Activite),
        "accomplissement" => Ok(Vendler::Accomplissement),
        "achevement" => Ok(Vendler::Achevement),
        _ => Err(CliError::usage(format!(
            "unknown situation type `{text}` (etat, activite, accomplissement, achevement)"
        ))),
    }
}

fn parse_tense(text: &str) -> Result<Tense, CliError> {
    match fold_word(text).as_str() {
        "present" => Ok(Tense::Present),
        "imparfait" => Ok(Tense::Imparfait),
        "passesimple" => Ok(Tense::PasseSimple),
        "passecompose" => Ok(Tense::PasseCompose),
        "plusqueparfait" => Ok(Tense::PlusQueParfait),
        "futur" => Ok(Tense::Futur),
        _ => Err(CliError::usage(format!(
            "unknown tense `{text}` (present, imparfait, passe-simple, passe-compose, \
             plus-que-parfait, futur)"
        ))),
    }
}

fn parse_frequency(text: &str) -> Result<temporel::cti::FreqAdverb, CliError> {
    use temporel::cti::FreqAdverb;
    match fold_word(text).as_str() {
        "souvent" => Ok(FreqAdverb::Souvent),
        "parfois" => Ok(FreqAdverb::Parfois),
        "rarement" => Ok(FreqAdverb::Rarement),
        _ => Err(CliError::usage(format!(
            "unknown frequency `{text}` (souvent, parfois, rarement)"
        ))),
    }
}

fn parse_clock(text: &str) -> Result<(u8, u8), CliError> {
    let bad = || CliError::usage(format!("`{text}`: expected HH:MM"));
    let (h, m) = text.split_once(':').ok_or_else(bad)?;
    let hour: u8 = h.parse().map_err(|_| bad())?;
    let minute: u8 = m.parse().map_err(|_| bad())?;
    if hour >= 24 || minute >= 60 {
        return Err(bad());
    }
    Ok((hour, minute))
}

fn cmd_sdt(args: &SdtArgs) -> Result<(), CliError> {
    let mut clause = Clause::new(parse_vendler(&args.vendler)?, parse_tense(&args.tense)?);
    clause.reiterable = !args.not_reiterable;
    clause.plausible_duration = !args.implausible_duration;
    if let Some(d) = args.pendant {
        clause = clause.with(Circumstancial::PendantDuree(d));
    }
    if let Some(d) = args.en {
        clause = clause.with(Circumstancial::EnDuree(d));
    }
    if let Some(d) = args.depuis {
        clause = clause.with(Circumstancial::DepuisDuree(d));
    }
    if let Some(clock) = &args.clock {
        let (hour, minute) = parse_clock(clock)?;
        clause = clause.with(Circumstancial::AClock { hour, minute });
    }
    if let Some(phrase) = &args.calendar {
        let ast = cti::parse(phrase).map_err(cti_error)?;
        clause = clause.with(Circumstancial::CtiCirc(ast));
    }
    let reading_adverb = match args.adverb.as_deref().map(fold_word).as_deref() {
        None => None,
        Some("encore") => Some(EncoreDeja::Encore),
        Some("deja") => Some(EncoreDeja::Deja),
        Some(_) => {
            return Err(CliError::usage(format!(
                "unknown adverb `{}` (encore, deja)",
                args.adverb.as_deref().unwrap_or_default()
            )))
        }
    };
    clause.adverb = match (reading_adverb, args.count, &args.frequency) {
        (Some(EncoreDeja::Encore), _, _) => Some(Adverb::Encore),
        (Some(EncoreDeja::Deja), _, _) => Some(Adverb::Deja),
        (None, Some(n), _) => Some(Adverb::IterativeCount(n)),
        (None, None, Some(f)) => Some(Adverb::Frequency(parse_frequency(f)?)),
        (None, None, None) => None,
    };
    clause
        .validate()
        .map_err(|e| CliError::usage(e.to_string()))?;

    let structure = sdt::build_structure(&clause);
    let reading = reading_adverb.map(|a| sdt::encore_deja(&clause, a));

    if args.json {
        println!(
            "{}",
            json!({
                "aspect": aspect_name(structure.aspect),
                "location": tense_value_name(structure.tense_value),
                "diagnosis": diagnosis_name(structure.diagnosis),
                "telic": structure.telic,
                "punctual": structure.punctual,
                "iterative": structure.iterative(),
                "series_aspect": structure.aspect_series.map(aspect_name),
                "reading": reading.map(reading_name),
            })
        );
        return Ok(());
    }

    println!("aspect: {}", aspect_name(structure.aspect));
    println!("location: {}", tense_value_name(structure.tense_value));
    println!("diagnosis: {}", diagnosis_name(structure.diagnosis));
    println!("telic: {}", structure.telic);
    println!("punctual: {}", structure.punctual);
    println!("iterative: {}", structure.iterative());
    if let Some(a) = structure.aspect_series {
        println!("series_aspect: {}", aspect_name(a));
    }
    if let Some(r) = reading {
        println!("reading: {}", reading_name(r));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// instantiate

fn cmd_instantiate(path: &Path, frame: &FrameArgs, json: bool) -> Result<(), CliError> {
    let frame = parse_frame(&frame.from, &frame.to)?;
    let text = read_input(path)?;
    let dto: iterfile::IterationDto = serde_json::from_str(&text)
        .map_err(|e| CliError::domain("parse", format!("{}: {e}", path.display())))?;
    let iteration = iterfile::build(&dto, &frame)?;
    let occurrences = itermodel::instantiate(&iteration, &frame)
        .map_err(|e| CliError::domain("iteration", e.to_string()))?;

    if json {
        let rendered: Vec<Value> = occurrences
            .iter()
            .map(|o| occurrence_json(&frame, o))
            .collect();
        println!(
            "{}",
            json!({"count": occurrences.len(), "occurrences": rendered})
        );
    } else {
        for occ in &occurrences {
            print_occurrence(&frame, occ, 0);
        }
    }
    Ok(())
}

fn print_occurrence(frame: &Frame, occ: &Itere, depth: usize) {
    let pad = "  ".repeat(depth);
    println!(
        "{pad}occurrence {}: {}",
        occ.index + 1,
        interval_text(frame, &occ.anchor)
    );
    for (name, interval) in &occ.realized_slots {
        println!("{pad}  {name}: {}", interval_text(frame, interval));
    }
    for (name, children) in &occ.children {
        println!("{pad}  {name}:");
        for child in children {
            print_occurrence(frame, child, depth + 2);
        }
    }
}

fn occurrence_json(frame: &Frame, occ: &Itere) -> Value {
    json!({
        "index": occ.index,
        "anchor": interval_json(frame, &occ.anchor),
        "slots": occ
            .realized_slots
            .iter()
            .map(|(name, interval)| json!({"name": name, "interval": interval_json(frame, interval)}))
            .collect::<Vec<_>>(),
        "children": occ
            .children
            .iter()
            .map(|(name, list)| json!({
                "name": name,
                "occurrences": list.iter().map(|c| occurrence_json(frame, c)).collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// extract

fn period_name(p: PeriodClass) -> &'static str {
    match p {
        PeriodClass::Continuous => "continuous",
        PeriodClass::Discontinuous => "discontinuous",
    }
}

fn cmd_extract(path: &Path, pattern: Option<&str>, json: bool) -> Result<(), CliError> {
    let text = read_input(path)?;
    let filter = pattern
        .map(|p| {
            PatternId::parse(p).ok_or_else(|| CliError::usage(format!("unknown pattern id `{p}`")))
        })
        .transpose()?;

    for m in extract::scan(&text) {
        if filter.is_some_and(|f| f != m.pattern) {
            continue;
        }
        let period = m.period_class().ok();
        let phrase = extract::to_cti(&m).map(|ast| cti::render(&ast));
        if json {
            println!(
                "{}",
                json!({
                    "pattern": m.pattern.id(),
                    "label": m.label,
                    "span": [m.span.0, m.span.1],
                    "sentence": m.sentence,
                    "number": m.number,
                    "out_of": m.out_of,
                    "rank": m.rank,
                    "second_label": m.second_label,
                    "period": period.map(period_name),
                    "phrase": phrase,
                })
            );
        } else {
            let mut line = format!(
                "{} label={} span={}..{}",
                m.pattern.id(),
                m.label,
                m.span.0,
                m.span.1
            );
            if let Some(n) = m.number {
                line.push_str(&format!(" number={n}"));
            }
            if let Some(n) = m.out_of {
                line.push_str(&format!(" out_of={n}"));
            }
            if let Some(n) = m.rank {
                line.push_str(&format!(" rank={n}"));
            }
            if let Some(s) = &m.second_label {
                line.push_str(&format!(" second={s}"));
            }
            if let Some(p) = period {
                line.push_str(&format!(" period={}", period_name(p)));
            }
            println!("{line}");
        }
    }
    Ok(())
}
