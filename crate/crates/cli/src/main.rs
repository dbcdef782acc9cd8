//! `aspec`: enumerate bracketings, compute associative spectra, run the
//! three-element scan and verify closed-form families.
//!
//! Exit codes: 0 success, 1 usage, 2 input, 3 resource, 4 verification failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use assoc_spectrum::bracketing;
use assoc_spectrum::families::{verify, VerifyOptions, VerifyReport};
use assoc_spectrum::groupoid::{enumerate_classes, from_designator};
use assoc_spectrum::spectrum::{scan3_with_budget, DEFAULT_MEMORY_BUDGET};
use assoc_spectrum::{spectrum, Error, Groupoid, SpectrumOptions};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const MAX_LISTING_SIZE: usize = 12;

#[derive(Parser, Debug)]
#[command(name = "aspec", version, about = "Associative spectra of finite groupoids")]
struct Cli {
    /// Print a JSON run report instead of plain text.
    #[arg(long, global = true)]
    json: bool,

    /// Write the primary output to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, value_name = "K")]
    jobs: Option<usize>,

    /// Memory budget for term tables, in bytes.
    #[arg(long, global = true, value_name = "BYTES", default_value_t = DEFAULT_MEMORY_BUDGET)]
    max_memory: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List all bracketings of size n.
    Brackets {
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compute s(1..=N) for a groupoid given by designator or JSON file.
    Spectrum {
        /// e.g. id:624, fc3:<code>, siena:79, sheffer, dihedral:8, or a path to a JSON table
        groupoid: String,
        #[arg(short = 'n', long = "max-arity", default_value_t = 7)]
        max_arity: usize,
        /// List one bracketing per distinct term function.
        #[arg(long)]
        witnesses: bool,
        /// Compute every arity even after the spectrum reaches 1.
        #[arg(long)]
        no_short_circuit: bool,
    },
    /// Spectra of all three-element groupoids up to isomorphism, as CSV.
    Scan3 {
        #[arg(short = 'n', long = "max-arity", default_value_t = 7)]
        max_arity: usize,
    },
    /// Check a family's closed form against computed counts.
    Verify { family: String },
    /// List isomorphism classes of groupoids on g elements.
    Classes {
        g: usize,
        /// Also identify antiisomorphic groupoids.
        #[arg(long)]
        anti: bool,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Depths,
    Rdepths,
    Fmpf,
    Zag,
}

#[derive(Serialize)]
struct Settings {
    jobs: usize,
    max_memory: u64,
}

#[derive(Serialize)]
struct RunReport {
    command: Vec<String>,
    inputs_digest: String,
    settings: Settings,
    wall_time_ms: f64,
    result: Value,
}

/// What a command produced: plain text for stdout or `--out`, a JSON
/// payload for the report, and whether verification passed.
struct Output {
    text: String,
    payload: Value,
    inputs: Value,
    verified: bool,
}

enum Failure {
    Usage(String),
    Input(String),
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource { .. } => Failure::Resource(e.to_string()),
            Error::UnknownFamily(_) => Failure::Usage(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(k) = cli.jobs {
        if k == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let output = match run(&cli) {
        Ok(o) => o,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (1, m),
                Failure::Input(m) => (2, m),
                Failure::Resource(m) => (3, m),
            };
            eprintln!("error: {msg}");
            return ExitCode::from(code);
        }
    };
    let wall_time_ms = start.elapsed().as_secs_f64() * 1000.0;
    let rendered = if cli.json {
        let report = RunReport {
            command: std::env::args().collect(),
            inputs_digest: digest(&output.inputs),
            settings: Settings {
                jobs: rayon::current_num_threads(),
                max_memory: cli.max_memory,
            },
            wall_time_ms,
            result: output.payload,
        };
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        output.text
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, rendered.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(rendered.as_bytes())
            .map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    if output.verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(4)
    }
}

fn digest(inputs: &Value) -> String {
    let bytes = serde_json::to_vec(inputs).expect("inputs serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::Brackets { n, format } => brackets(*n, *format),
        Command::Spectrum {
            groupoid,
            max_arity,
            witnesses,
            no_short_circuit,
        } => {
            let g = load_groupoid(groupoid)?;
            let opts = SpectrumOptions {
                max_arity: *max_arity,
                memory_budget: cli.max_memory,
                parallel: true,
                witnesses: *witnesses,
                short_circuit: !no_short_circuit,
            };
            spectrum_cmd(&g, opts)
        }
        Command::Scan3 { max_arity } => scan3_cmd(*max_arity, cli.max_memory),
        Command::Verify { family } => verify_cmd(family, cli.max_memory),
        Command::Classes { g, anti } => classes_cmd(*g, *anti),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn brackets(n: usize, format: Format) -> Result<Output, Failure> {
    if n == 0 || n > MAX_LISTING_SIZE {
        return Err(Failure::Input(format!("listing needs 1 <= n <= {MAX_LISTING_SIZE}, got {n}")));
    }
    let lines: Vec<String> = bracketing::iter(n)?
        .map(|b| match format {
            Format::Text => b.to_string(),
            Format::Depths => join(&b.depths()),
            Format::Rdepths => join(&b.right_depths()),
            Format::Fmpf => b.fmpf_words().join(" "),
            Format::Zag => join(b.zag_sequence().values()),
        })
        .collect();
    let mut text = lines.join("\n");
    text.push('\n');
    Ok(Output {
        text,
        payload: json!({ "n": n, "format": format!("{format:?}").to_lowercase(), "bracketings": lines }),
        inputs: json!({ "brackets": n, "format": format!("{format:?}") }),
        verified: true,
    })
}

fn load_groupoid(designator: &str) -> Result<Groupoid, Failure> {
    let path = Path::new(designator);
    if designator.ends_with(".json") || path.is_file() {
        let data = fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read {designator}: {e}")))?;
        return serde_json::from_str(&data)
            .map_err(|e| Failure::Input(format!("{designator}: {e}")));
    }
    Ok(from_designator(designator)?)
}

fn spectrum_cmd(g: &Groupoid, opts: SpectrumOptions) -> Result<Output, Failure> {
    let s = spectrum(g, opts)?;
    let mut text = format!("s = {}\n", join(&s.counts));
    text.push_str(&format!("catalan_prefix = {}\n", s.catalan_prefix));
    match s.stabilized_at {
        Some(n) => text.push_str(&format!("stabilized_at = {n}\n")),
        None => text.push_str("stabilized_at = none\n"),
    }
    let mut payload = serde_json::to_value(&s).expect("spectrum serializes");
    if let Some(ws) = &s.witnesses {
        let listed: Vec<Vec<String>> =
            ws.iter().map(|layer| layer.iter().map(ToString::to_string).collect()).collect();
        for (i, layer) in listed.iter().enumerate() {
            text.push_str(&format!("n = {}: {}\n", i + 1, layer.join(" ")));
        }
        payload["witnesses"] = json!(listed);
    }
    Ok(Output {
        text,
        payload,
        inputs: json!({
            "groupoid": g,
            "max_arity": opts.max_arity,
            "witnesses": opts.witnesses,
            "short_circuit": opts.short_circuit,
        }),
        verified: true,
    })
}

fn scan3_cmd(max_arity: usize, budget: u64) -> Result<Output, Failure> {
    let table = scan3_with_budget(max_arity, true, budget)?;
    let csv = table.to_csv();
    Ok(Output {
        payload: json!({
            "csv": csv,
            "nonassociative_rows": table.rows.len(),
            "associative": table.associative,
            "total": table.total,
        }),
        text: csv,
        inputs: json!({ "scan3": max_arity }),
        verified: true,
    })
}

fn verify_text(r: &VerifyReport) -> String {
    let mut text = format!("family {}\n", r.family);
    text.push_str("   n      expected      computed       catalan  result\n");
    for row in &r.rows {
        let expected = row.expected.map_or("-".to_string(), |e| e.to_string());
        text.push_str(&format!(
            "{:>4}  {:>12}  {:>12}  {:>12}  {}\n",
            row.arity,
            expected,
            row.computed,
            row.catalan,
            if row.pass { "pass" } else { "FAIL" }
        ));
    }
    for c in &r.checks {
        text.push_str(&format!("{}: {}\n", if c.pass { "pass" } else { "FAIL" }, c.name));
    }
    match r.non_catalan_from {
        Some(n) => text.push_str(&format!("non-Catalan from n = {n}\n")),
        None => text.push_str("Catalan at every computed arity\n"),
    }
    text.push_str(if r.pass { "PASS\n" } else { "FAIL\n" });
    text
}

fn verify_cmd(family: &str, budget: u64) -> Result<Output, Failure> {
    let report = verify(
        family,
        VerifyOptions {
            memory_budget: budget,
            parallel: true,
        },
    )?;
    Ok(Output {
        text: verify_text(&report),
        payload: serde_json::to_value(&report).expect("report serializes"),
        inputs: json!({ "verify": family, "max_memory": budget }),
        verified: report.pass,
    })
}

fn classes_cmd(g: usize, anti: bool) -> Result<Output, Failure> {
    let mut classes = enumerate_classes(g)?;
    if anti {
        let mut seen = std::collections::BTreeSet::new();
        classes.retain(|c| seen.insert(c.canonical_form_with_anti().expect("size checked")));
    }
    let mut text = String::new();
    let mut listed = Vec::new();
    for c in &classes {
        let table: String = c.flat().iter().map(|e| e.to_string()).collect();
        let assoc = c.is_associative();
        text.push_str(&format!("{table}{}\n", if assoc { " associative" } else { "" }));
        listed.push(json!({ "table": c, "associative": assoc }));
    }
    Ok(Output {
        text,
        payload: json!({ "size": g, "anti": anti, "count": classes.len(), "classes": listed }),
        inputs: json!({ "classes": g, "anti": anti }),
        verified: true,
    })
}
