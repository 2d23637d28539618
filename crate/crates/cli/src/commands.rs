use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use relfocus::correlation::{mincor_family, SearchOptions};
use relfocus::decomposition::{self, FactorizeOptions};
use relfocus::io::{self as rio, Ingested};
use relfocus::oracle::{self, GenSpec};
use relfocus::{Error, Partition, Relation, Scheme};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::report::{
    blocks, Body, Cells, CheckBody, FactorInfo, FactorizeBody, InputInfo, MincorBody, MincorEntry,
    OracleBody, Report, TraceBody, TraceStep, TraceSummary, Verdict, SCHEMA_VERSION,
};

pub type CmdResult<T> = Result<T, Error>;

/// What a command hands back to the driver: a report for `--json`, and the
/// human-readable rendering otherwise.
pub struct Outcome {
    pub json: String,
    pub text: String,
}

struct Loaded {
    ingested: Ingested,
    info: InputInfo,
    started: Instant,
}

fn load(path: &Path) -> CmdResult<Loaded> {
    let started = Instant::now();
    let bytes = fs::read(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    let ingested = rio::parse_csv(&bytes)?;
    let r = &ingested.relation;
    let info = InputInfo {
        path: path.display().to_string(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        attributes: r.scheme().names().map(str::to_string).collect(),
        tuples: r.len(),
        duplicates_removed: ingested.duplicates,
    };
    Ok(Loaded {
        ingested,
        info,
        started,
    })
}

fn finish(command: &'static str, loaded: Loaded, status: Verdict, body: Body, text: String) -> Outcome {
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command,
        input: loaded.info,
        status,
        elapsed_ms: loaded.started.elapsed().as_millis() as u64,
        body,
    };
    Outcome {
        json: to_json(&report),
        text,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize")
}

fn show(scheme: &Scheme, p: &Partition) -> String {
    scheme.partition_json(p)
}

fn show_blocks(b: &[Vec<String>]) -> String {
    serde_json::to_string(b).expect("names serialize")
}

pub fn factorize(path: &Path, out: Option<&Path>, paranoid: bool, cap: Option<usize>) -> CmdResult<Outcome> {
    let loaded = load(path)?;
    let r = &loaded.ingested.relation;
    let s = r.scheme();
    let opts = FactorizeOptions {
        search: SearchOptions { max_size: cap },
        paranoid,
    };
    let f = decomposition::factorize_with(r, opts)?;
    let verdict = Verdict::from(f.status);

    let names = factor_file_names(s, &f.focus);
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
        for (factor, name) in f.factors.iter().zip(&names) {
            let target = dir.join(name);
            fs::write(&target, rio::write_csv(factor))
                .map_err(|e| Error::Input(format!("{}: {e}", target.display())))?;
        }
    }
    let factors: Vec<FactorInfo> = f
        .factors
        .iter()
        .zip(&names)
        .map(|(factor, name)| FactorInfo {
            attributes: factor.scheme().names().map(str::to_string).collect(),
            tuples: factor.len(),
            file: out.map(|_| name.clone()),
        })
        .collect();

    let mut text = String::new();
    let _ = writeln!(text, "focus: {}", show(s, &f.focus));
    let _ = writeln!(text, "status: {}", status_word(verdict));
    for fi in &factors {
        let _ = writeln!(text, "factor {}: {} tuples", fi.attributes.join(","), fi.tuples);
    }
    let _ = writeln!(text, "cells: {} -> {}", f.cells_flat, f.cells_factorized);
    let _ = writeln!(
        text,
        "iterations: {} ({} productive)",
        f.trace.iterations(),
        f.trace.productive_steps()
    );

    let body = Body::Factorize(FactorizeBody {
        focus: blocks(s, &f.focus),
        independent: verdict == Verdict::Verified,
        factors,
        cells: Cells {
            flat: f.cells_flat,
            factorized: f.cells_factorized,
        },
        trace: TraceSummary::new(s, &f.trace),
    });
    Ok(finish("factorize", loaded, verdict, body, text))
}

fn status_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Verified => "VERIFIED",
        Verdict::Unverified => "UNVERIFIED",
    }
}

/// `AB.csv` for the block {A,B}. Characters outside `[A-Za-z0-9._-]` become
/// `_`, and clashes get a numeric suffix.
pub fn factor_file_names(s: &Scheme, p: &Partition) -> Vec<String> {
    let mut taken = HashSet::new();
    p.blocks()
        .iter()
        .map(|b| {
            let joined: String = s.block_names(b).concat();
            let mut stem: String = joined
                .chars()
                .map(|c| {
                    if c.is_ascii_alphanumeric() || "._-".contains(c) {
                        c
                    } else {
                        '_'
                    }
                })
                .take(96)
                .collect();
            if stem.is_empty() || stem.starts_with('.') {
                stem.insert(0, '_');
            }
            let mut name = format!("{stem}.csv");
            let mut k = 2;
            while !taken.insert(name.to_ascii_lowercase()) {
                name = format!("{stem}-{k}.csv");
                k += 1;
            }
            name
        })
        .collect()
}

pub fn mincors(path: &Path, partition: Option<&str>) -> CmdResult<Outcome> {
    let loaded = load(path)?;
    let r = &loaded.ingested.relation;
    let s = r.scheme();
    let x = match partition {
        Some(text) => rio::parse_partition(s, text)?,
        None => s.bottom(),
    };
    let fam = mincor_family(r, &x, SearchOptions::default())?;
    let body = MincorBody::new(s, &fam);

    let mut text = String::new();
    let _ = writeln!(text, "partition: {}", show(s, &x));
    write_mincors(&mut text, &body.mincors, "");
    if !body.singletons.is_empty() {
        let _ = writeln!(text, "singletons: {}", show_blocks(&body.singletons));
    }
    Ok(finish(
        "mincors",
        loaded,
        Verdict::Verified,
        Body::Mincors(body),
        text,
    ))
}

fn write_mincors(text: &mut String, entries: &[MincorEntry], indent: &str) {
    if entries.is_empty() {
        let _ = writeln!(text, "{indent}no mincors");
    }
    for m in entries {
        let _ = writeln!(
            text,
            "{indent}mincor {}: {} < {}",
            show_blocks(&m.blocks),
            m.joint,
            m.product
        );
    }
}

pub fn alpha_trace(path: &Path) -> CmdResult<Outcome> {
    let loaded = load(path)?;
    let r = &loaded.ingested.relation;
    let s = r.scheme();
    let (focus, trace) = decomposition::focus(r)?;
    let steps: Vec<TraceStep> = trace.steps().iter().map(|st| TraceStep::new(s, st)).collect();

    let mut text = String::new();
    for (i, st) in steps.iter().enumerate() {
        let _ = writeln!(
            text,
            "step {}: {} -> {}",
            i + 1,
            show_blocks(&st.input),
            show_blocks(&st.output)
        );
        write_mincors(&mut text, &st.mincors, "  ");
    }
    let _ = writeln!(text, "fixed after {} steps: {}", steps.len(), show(s, &focus));

    let body = Body::AlphaTrace(TraceBody {
        steps,
        focus: blocks(s, &focus),
        iterations: trace.iterations(),
        productive_steps: trace.productive_steps(),
    });
    Ok(finish("alpha-trace", loaded, Verdict::Verified, body, text))
}

pub fn check(path: &Path, partition: &str, paranoid: bool) -> CmdResult<Outcome> {
    let loaded = load(path)?;
    let r = &loaded.ingested.relation;
    let s = r.scheme();
    let x = rio::parse_partition(s, partition)?;
    let independent = if paranoid {
        decomposition::is_independent_paranoid(r, &x)?
    } else {
        decomposition::is_independent(r, &x)?
    };
    let block_sizes: Vec<usize> = decomposition::projections(r, &x)?
        .iter()
        .map(Relation::len)
        .collect();
    let product = decomposition::block_product(r, &x)?;

    let mut text = String::new();
    let _ = writeln!(text, "partition: {}", show(s, &x));
    let _ = writeln!(text, "independent: {independent}");
    let _ = writeln!(
        text,
        "tuples: {}, block product: {}",
        r.len(),
        product.map_or("overflow".to_string(), |p| p.to_string())
    );

    let body = Body::Check(CheckBody {
        partition: blocks(s, &x),
        independent,
        block_sizes,
        product,
        paranoid,
    });
    Ok(finish("check", loaded, Verdict::Verified, body, text))
}

pub fn oracle(path: &Path) -> CmdResult<Outcome> {
    let loaded = load(path)?;
    let r = &loaded.ingested.relation;
    let s = r.scheme();
    let focus = oracle::focus(r)?;
    let attribute_mincors: Vec<Vec<String>> = oracle::mincors(r)?.iter().map(|m| s.block_names(m)).collect();

    let mut text = String::new();
    let _ = writeln!(text, "focus: {}", show(s, &focus));
    let _ = writeln!(text, "mincors: {}", show_blocks(&attribute_mincors));

    let body = Body::Oracle(OracleBody {
        focus: blocks(s, &focus),
        attribute_mincors,
    });
    Ok(finish("oracle", loaded, Verdict::Verified, body, text))
}

#[derive(Serialize)]
struct Sidecar {
    schema_version: &'static str,
    seed: u64,
    spec: GenSpec,
    attributes: Vec<String>,
    tuples: usize,
    planted: Option<Vec<Vec<String>>>,
}

/// Path of the JSON file recording how `out` was generated.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".seed.json");
    PathBuf::from(name)
}

pub fn gen(seed: u64, spec: &str, out: &Path) -> CmdResult<Outcome> {
    let spec = GenSpec::parse(spec)?;
    let (r, planted) = spec.generate(seed)?;
    let s = r.scheme();
    let sidecar = Sidecar {
        schema_version: SCHEMA_VERSION,
        seed,
        spec,
        attributes: s.names().map(str::to_string).collect(),
        tuples: r.len(),
        planted: planted.as_ref().map(|p| blocks(s, p)),
    };
    let json = to_json(&sidecar);
    fs::write(out, rio::write_csv(&r)).map_err(|e| Error::Input(format!("{}: {e}", out.display())))?;
    let side = sidecar_path(out);
    fs::write(&side, format!("{json}\n")).map_err(|e| Error::Input(format!("{}: {e}", side.display())))?;
    let text = format!(
        "wrote {} ({} attributes, {} tuples) and {}\n",
        out.display(),
        r.arity(),
        r.len(),
        side.display()
    );
    Ok(Outcome { json, text })
}
