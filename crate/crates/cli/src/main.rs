//! `pillowcase-kh`: reduced Khovanov homology of 2-tangle closures through
//! the pillowcase pairing, with an independent cube-of-resolutions oracle to
//! check against.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pillowcase_core::corpus::{load_pairs, parse_pair, MoveFile};
use pillowcase_core::functor::frobenius_identities;
use pillowcase_core::khovanov::{jones_from_bracket, reduced_khovanov};
use pillowcase_core::pairing::{cohomology, jones, pair};
use pillowcase_core::pillowcase::{
    verify_ainfty, verify_algebra_comparisons, verify_image_vanishing, verify_module_relations, Report,
};
use pillowcase_core::pipeline::{compare_closure, rank_table, twisted_complex, PipelineError};
use pillowcase_core::ranks::RankTable;
use pillowcase_core::tangle::{close, orientation_extends, parse_link, parse_tangle, LinkDiagram, TangleDiagram, TangleError};
use pillowcase_core::twisted::verify_twisted;

#[derive(Parser)]
#[command(name = "pillowcase-kh", version, about = "Reduced Khovanov homology of 2-tangle closures via the pillowcase")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// closure to pair with: 0 or 1
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(0..=1))]
    closure: Option<u8>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// gradings relative to the cube, ignoring the orientation
    #[arg(long, global = true)]
    relative: bool,
    /// worker threads (defaults to one per core)
    #[arg(long, global = true, env = "PILLOWCASE_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the category, module, functor and Frobenius tables; with a
    /// diagram, also check its twisted complex.
    Verify { input: Option<PathBuf> },
    /// Emit the twisted complex of a tangle.
    Build { input: PathBuf },
    /// Pair with W_k: emit the chain complex and its rank table.
    Pair { input: PathBuf },
    /// Oracle table for a closed diagram, or for a tangle closed by --closure.
    Khovanov { input: PathBuf },
    /// Pipeline against oracle on one closure.
    Compare { input: PathBuf },
    /// Compare tables across Reidemeister pairs (a pair file or a directory).
    Invariance { input: PathBuf },
    /// Jones polynomial read off the rank table.
    Jones { input: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

/// What a command produced; `ok` is false when an assertion failed.
struct Outcome {
    ok: bool,
    json: Value,
    text: String,
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn tangle(path: &Path) -> anyhow::Result<TangleDiagram> {
    Ok(parse_tangle(&read(path)?)?)
}

fn report_text(r: &Report) -> String {
    let mut s = format!("{:<28} {:>7} checked  {}\n", r.name, r.checked, if r.passed() { "ok" } else { "FAILED" });
    for v in r.violations.iter().take(10) {
        s += &format!("    {} at {:?}: {}\n", v.check, v.inputs, v.value);
    }
    s
}

fn reports(rs: Vec<Report>) -> Outcome {
    let ok = rs.iter().all(Report::passed);
    Outcome {
        ok,
        text: rs.iter().map(report_text).collect(),
        json: json!({ "passed": ok, "reports": rs }),
    }
}

fn verify(input: Option<&Path>, relative: bool) -> anyhow::Result<Outcome> {
    let mut rs = vec![
        verify_ainfty(),
        verify_module_relations(0),
        verify_module_relations(1),
        verify_algebra_comparisons(),
        verify_image_vanishing(),
        frobenius_identities(),
    ];
    if let Some(p) = input {
        rs.push(verify_twisted(&twisted_complex(&tangle(p)?, relative)));
    }
    Ok(reports(rs))
}

fn build(d: &TangleDiagram, relative: bool) -> Outcome {
    let tc = twisted_complex(d, relative);
    let r = verify_twisted(&tc);
    let mut text = format!("{} objects, {} entries, total dimension {}\n", tc.len(), tc.delta.len(), tc.total_dim());
    for (i, o) in tc.objects.iter().enumerate() {
        text += &format!("  {i:>4}: A^{} {{{}}} L{}  h={}\n", o.m, o.shift, o.ell, o.h);
    }
    text += &report_text(&r);
    Outcome { ok: r.passed(), json: json!({ "complex": tc.to_json(), "checks": r }), text }
}

fn pair_cmd(d: &TangleDiagram, k: u8, relative: bool) -> anyhow::Result<Outcome> {
    let fallback = !relative && !orientation_extends(d, k);
    let tc = twisted_complex(d, relative || fallback);
    let r = verify_twisted(&tc);
    if !r.passed() {
        return Err(PipelineError::Twisted(r.violations).into());
    }
    let c = pair(&tc, k)?;
    let table = cohomology(&c)?;
    let mut json = json!({ "closure": k, "complex": c.to_json(), "ranks": table.to_json() });
    let mut text = format!("{} generators\n{}", c.generators.len(), table.to_table());
    if fallback {
        let note = format!("the orientation does not extend over closure {k}; gradings are relative");
        text = format!("note: {note}\n{text}");
        json["note"] = json!(note);
    }
    Ok(Outcome { ok: true, json, text })
}

/// A closed diagram, or a tangle closed by `k`.
fn link(path: &Path, k: u8) -> anyhow::Result<LinkDiagram> {
    let text = read(path)?;
    let v: Value = serde_json::from_str(&text).map_err(TangleError::from)?;
    let is_tangle = v.get("endpoints").and_then(Value::as_array).is_some_and(|a| !a.is_empty());
    if !is_tangle {
        return Ok(parse_link(&text)?);
    }
    let d = parse_tangle(&text)?;
    if !orientation_extends(&d, k) {
        return Err(PipelineError::Refused(k).into());
    }
    Ok(close(&d, k))
}

fn table_outcome(t: &RankTable) -> Outcome {
    Outcome { ok: true, json: t.to_json(), text: t.to_table() }
}

fn compare_cmd(d: &TangleDiagram, k: u8) -> anyhow::Result<Outcome> {
    let (ours, oracle, c) = match compare_closure(d, k) {
        Err(e @ PipelineError::Refused(_)) => {
            return Err(anyhow::Error::new(e).context("compare refused; `pair --relative` still runs"))
        }
        other => other?,
    };
    let diffs: Vec<Value> =
        c.differences.iter().map(|&(r, s, a, b)| json!({ "r": r, "s": s, "pipeline": a, "oracle": b })).collect();
    let mut text = format!("pipeline\n{}oracle\n{}", ours.to_table(), oracle.to_table());
    text += if c.equal { "equal\n" } else { "DIFFERENT\n" };
    for &(r, s, a, b) in &c.differences {
        text += &format!("  ({r}, {s}): pipeline {a}, oracle {b}\n");
    }
    Ok(Outcome {
        ok: c.equal,
        json: json!({
            "closure": k,
            "equal": c.equal,
            "pipeline": ours.to_json(),
            "oracle": oracle.to_json(),
            "differences": diffs,
        }),
        text,
    })
}

fn move_files(path: &Path) -> anyhow::Result<Vec<MoveFile>> {
    if path.is_dir() {
        return Ok(load_pairs(path)?);
    }
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    Ok(vec![parse_pair(&name, &read(path)?)?])
}

fn invariance(path: &Path, closure: Option<u8>, relative: bool) -> anyhow::Result<Outcome> {
    let files = move_files(path)?;
    if files.is_empty() {
        bail!("no pair files in {}", path.display());
    }
    let ks: Vec<u8> = closure.map_or(vec![0, 1], |k| vec![k]);
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut ok = true;
    for f in &files {
        for &k in &ks {
            let a = rank_table(&f.first, k, relative).with_context(|| format!("{}: first diagram", f.name))?;
            let b = rank_table(&f.second, k, relative).with_context(|| format!("{}: second diagram", f.name))?;
            let equal = a == b;
            ok &= equal;
            text += &format!("{:<24} {:<3} k={k}  {}\n", f.name, f.mv, if equal { "equal" } else { "DIFFERENT" });
            rows.push(json!({
                "name": f.name,
                "move": f.mv,
                "closure": k,
                "equal": equal,
                "first": a.to_json(),
                "second": b.to_json(),
            }));
        }
    }
    Ok(Outcome { ok, json: json!({ "passed": ok, "pairs": rows }), text })
}

fn jones_cmd(d: &TangleDiagram, k: u8) -> anyhow::Result<Outcome> {
    if !orientation_extends(d, k) {
        return Err(PipelineError::Refused(k).into());
    }
    let p = jones(&rank_table(d, k, false)?)?;
    let state_sum = jones_from_bracket(&close(d, k))?;
    let agree = p == state_sum;
    let text = format!("{p}\n{}", if agree { "" } else { "state sum disagrees\n" });
    Ok(Outcome {
        ok: agree,
        json: json!({ "closure": k, "jones": p.to_string(), "terms": p.terms(), "state_sum_agrees": agree }),
        text,
    })
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let k = cli.closure.unwrap_or(0);
    match &cli.command {
        Command::Verify { input } => verify(input.as_deref(), cli.relative),
        Command::Build { input } => Ok(build(&tangle(input)?, cli.relative)),
        Command::Pair { input } => pair_cmd(&tangle(input)?, k, cli.relative),
        Command::Khovanov { input } => Ok(table_outcome(&reduced_khovanov(&link(input, k)?)?)),
        Command::Compare { input } => compare_cmd(&tangle(input)?, k),
        Command::Invariance { input } => invariance(input, cli.closure, cli.relative),
        Command::Jones { input } => jones_cmd(&tangle(input)?, k),
    }
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    if let Some(p) = e.downcast_ref::<PipelineError>() {
        return match p {
            PipelineError::Refused(_) => "refused",
            PipelineError::Tangle(_) => "input",
            PipelineError::Twisted(_) => "check",
            _ => "computation",
        };
    }
    if e.downcast_ref::<TangleError>().is_some() {
        return "input";
    }
    if e.downcast_ref::<std::io::Error>().is_some() {
        return "io";
    }
    "computation"
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: {e}");
        }
    }
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
                Format::Table => print!("{}", out.text),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let kind = error_kind(&e);
            let message = format!("{e:#}");
            match cli.format {
                Format::Json => println!("{}", json!({ "error": { "kind": kind, "message": message } })),
                Format::Table => eprintln!("error ({kind}): {message}"),
            }
            ExitCode::from(2)
        }
    }
}
