//! Batch front end: reads JSON documents, runs one command and produces a report.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use tatesmith::equivsimp::smith_localization_check;
use tatesmith::io::{Document, WeightEntry};
use tatesmith::parity::{
    check_parity, check_tate_parity, decompose_tate, hyperco_check, lift_l, modular_compare, psm_hom_surjectivity_check, smith,
    Coefficients,
};
use tatesmith::tate::{classify, is_perfect, stable_hom, tate_cohomology_at};
use thiserror::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Tate,
    Classify,
    Perfect,
    Stablehom,
    Smith,
    ParityCheck,
    TateParityCheck,
    Decompose,
    ReduceCompare,
    Lift,
    HypercoCheck,
    SimpSmith,
    ExportPoset,
    DemoGrWeights,
}

impl Command {
    pub fn name(self) -> &'static str {
        use Command::*;
        match self {
            Tate => "tate",
            Classify => "classify",
            Perfect => "perfect",
            Stablehom => "stablehom",
            Smith => "smith",
            ParityCheck => "parity-check",
            TateParityCheck => "tate-parity-check",
            Decompose => "decompose",
            ReduceCompare => "reduce-compare",
            Lift => "lift",
            HypercoCheck => "hyperco-check",
            SimpSmith => "simp-smith",
            ExportPoset => "export-poset",
            DemoGrWeights => "demo-gr-weights",
        }
    }

    fn arity(self) -> (usize, usize) {
        match self {
            Command::Stablehom => (2, 2),
            Command::ReduceCompare | Command::Lift => (1, 2),
            _ => (1, 1),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    /// Replaces the prime of every input document.
    pub p: Option<u64>,
    /// Degree at which Tate cohomology is read.
    pub window: Option<i64>,
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
    #[error("weight {weight} is divisible by {p} but its pairing {pairing} is not")]
    PairingNotDivisible { p: u64, weight: i64, pairing: i64 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::PairingNotDivisible { .. } => 2,
            CliError::CrossCheck(_) => 3,
        }
    }
}

impl From<tatesmith::Error> for CliError {
    fn from(e: tatesmith::Error) -> Self {
        match e {
            tatesmith::Error::StabilizationFailure(m) => CliError::CrossCheck(m),
            other => CliError::Input(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub tool_version: String,
    /// SHA-256 of the input documents after any prime override.
    pub input_digest: String,
    pub verdicts: BTreeMap<String, String>,
    pub tables: Value,
    pub timing_ms: u64,
}

impl RunReport {
    /// JSON with the timing field zeroed, for reproducibility checks.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.timing_ms = 0;
        serde_json::to_string_pretty(&r).expect("reports serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} (tatesmith {})\ninput sha256 {}\n", self.command, self.tool_version, self.input_digest);
        for (k, v) in &self.verdicts {
            out.push_str(&format!("  {k}: {v}\n"));
        }
        if let Value::Object(tables) = &self.tables {
            for (name, t) in tables {
                out.push_str(&format!("\n[{name}]\n"));
                render(&mut out, t, 1);
            }
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Nested objects become dotted column names.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn render(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Array(rows) if rows.iter().all(Value::is_object) && !rows.is_empty() => {
            let flat: Vec<Vec<(String, String)>> = rows
                .iter()
                .map(|r| {
                    let mut f = Vec::new();
                    flatten("", r, &mut f);
                    f
                })
                .collect();
            let cols: Vec<String> = flat[0].iter().map(|x| x.0.clone()).collect();
            let cells: Vec<Vec<String>> = flat
                .iter()
                .map(|r| cols.iter().map(|c| r.iter().find(|x| &x.0 == c).map_or(String::new(), |x| x.1.clone())).collect())
                .collect();
            let width: Vec<usize> = (0..cols.len()).map(|j| cells.iter().map(|r| r[j].len()).chain([cols[j].len()]).max().unwrap()).collect();
            let line = |r: &[String]| r.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ");
            out.push_str(&format!("{pad}{}\n", line(&cols)));
            for r in &cells {
                out.push_str(&format!("{pad}{}\n", line(r)));
            }
        }
        Value::Object(m) => {
            for (k, x) in m {
                if x.is_object() || x.is_array() && x.as_array().unwrap().iter().any(|e| e.is_object()) {
                    out.push_str(&format!("{pad}{k}:\n"));
                    render(out, x, depth + 1);
                } else {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

/// Parses a document, replacing its prime when `p` is given.
pub fn load_document(text: &str, p: Option<u64>) -> Result<Document, CliError> {
    let mut v: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    if let (Some(p), Some(obj)) = (p, v.as_object_mut()) {
        obj.insert("p".into(), json!(p));
    }
    Document::parse(&v.to_string()).map_err(CliError::from)
}

fn yes(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}

fn pass(b: bool) -> String {
    if b { "pass" } else { "fail" }.to_string()
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

/// Keeps weights divisible by p, dividing weight and pairing by p; drops the rest.
pub fn demo_gr_weights(p: u64, entries: &[WeightEntry]) -> Result<(Vec<WeightEntry>, Vec<WeightEntry>), CliError> {
    let q = p as i64;
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for e in entries {
        if e.weight.rem_euclid(q) != 0 {
            dropped.push(e.clone());
            continue;
        }
        if e.pairing.rem_euclid(q) != 0 {
            return Err(CliError::PairingNotDivisible { p, weight: e.weight, pairing: e.pairing });
        }
        kept.push(WeightEntry { weight: e.weight / q, mult: e.mult, pairing: e.pairing / q });
    }
    Ok((kept, dropped))
}

const SAMPLES: usize = 10;

/// Runs a command on already-loaded documents.
pub fn run_documents(cmd: Command, docs: &[Document], flags: &Flags) -> Result<(BTreeMap<String, String>, Value), CliError> {
    let (lo, hi) = cmd.arity();
    if docs.len() < lo || docs.len() > hi {
        return Err(CliError::Input(format!("{} takes {lo}..={hi} input documents, got {}", cmd.name(), docs.len())));
    }
    let mut verdicts = BTreeMap::new();
    let tables = match cmd {
        Command::Tate => {
            let c = docs[0].complex()?;
            let t = tate_cohomology_at(&c, flags.window.unwrap_or(0))?;
            verdicts.insert("perfect".into(), yes(t.t0_dim == 0 && t.t1_dim == 0));
            json!({ "tate": { "t0": t.t0_dim, "t1": t.t1_dim } })
        }
        Command::Classify => {
            let k = classify(&docs[0].complex()?);
            verdicts.insert("perfect".into(), yes(k.k0 == 0 && k.k1 == 0));
            json!({ "classification": k })
        }
        Command::Perfect => {
            let c = docs[0].complex()?;
            verdicts.insert("perfect".into(), yes(is_perfect(&c)));
            json!({})
        }
        Command::Stablehom => {
            let h = stable_hom(&docs[0].complex()?, &docs[1].complex()?)?;
            verdicts.insert("routes".into(), "agree".into());
            json!({ "stable_hom": {
                "hom_complex_route": { "t0": h.grading.0, "t1": h.grading.1 },
                "colimit_route": { "t0": h.grading_colimit.0, "t1": h.grading_colimit.1 },
                "stable_level": h.level,
            }})
        }
        Command::Smith => {
            let r = smith(&docs[0].sheaf()?)?;
            verdicts.insert("smith".into(), r.verdict.clone());
            json!({ "smith": r })
        }
        Command::ParityCheck => {
            let f = docs[0].sheaf()?;
            let i = check_parity(&f, Coefficients::Integral)?;
            let m = check_parity(&f, Coefficients::Fp)?;
            verdicts.insert("integral".into(), scalar(&to_value(&i.verdict)));
            verdicts.insert("mod_p".into(), scalar(&to_value(&m.verdict)));
            json!({ "integral": i, "mod_p": m })
        }
        Command::TateParityCheck => {
            let r = check_tate_parity(&docs[0].sheaf()?)?;
            verdicts.insert("tate_parity".into(), scalar(&to_value(&r.verdict)));
            json!({ "tate_parity": r })
        }
        Command::Decompose => {
            let r = decompose_tate(&docs[0].sheaf()?)?;
            verdicts.insert("local".into(), yes(r.local));
            verdicts.insert("summands".into(), r.total_multiplicity().to_string());
            json!({ "decomposition": r })
        }
        Command::ReduceCompare => {
            let f = docs[0].sheaf()?;
            let g = if docs.len() > 1 { docs[1].sheaf()? } else { f.clone() };
            let r = modular_compare(&f, &g, SAMPLES, flags.seed)?;
            verdicts.insert("parity_agrees".into(), pass(r.parity_agrees));
            verdicts.insert("dims_agree".into(), pass(r.dims_agree));
            verdicts.insert("factorization".into(), pass(r.factorization_holds));
            json!({ "comparison": r })
        }
        Command::Lift => {
            let f = docs[0].sheaf()?;
            let g = if docs.len() > 1 { docs[1].sheaf()? } else { f.clone() };
            let l = lift_l(&f, &g)?;
            let maps = l.sample_maps(SAMPLES, flags.seed);
            let holds = maps.iter().all(|m| l.same_class(&l.apply(&l.tate_class(m)), &l.reduce_map(m)));
            verdicts.insert("factorization".into(), pass(holds));
            let t = l.tate_dims();
            json!({ "lift": {
                "tate_homs": { "t0": t.t0, "t1": t.t1 },
                "mod_p_hom_dim": l.fp_hom_dim(),
                "image_rank": l.image_rank(),
                "sampled": maps.len(),
            }})
        }
        Command::HypercoCheck => {
            let f = docs[0].sheaf()?;
            let r = hyperco_check(&f)?;
            verdicts.insert("bound".into(), pass(r.bound_holds));
            verdicts.insert("equality".into(), yes(r.equality));
            let mut t = json!({ "hypercohomology": r });
            if !f.base().fixed_points().is_empty() {
                let s = psm_hom_surjectivity_check(&f, &f)?;
                verdicts.insert("smith_surjective".into(), yes(s.surjective));
                t["smith_homs"] = to_value(&s);
            }
            t
        }
        Command::SimpSmith => {
            let (x, rounds) = docs[0].simplicial()?.regularize();
            let r = smith_localization_check(&x)?;
            verdicts.insert("smith_localization".into(), pass(r.pass));
            verdicts.insert("euler_congruence".into(), pass(r.euler_congruent));
            json!({ "subdivisions": rounds, "smith_localization": r })
        }
        Command::ExportPoset => {
            let (x, rounds) = docs[0].simplicial()?.regularize();
            let (base, f) = x.face_poset_export()?;
            verdicts.insert("strata".into(), base.len().to_string());
            json!({ "subdivisions": rounds, "document": to_value(&Document::of_sheaf(&f)) })
        }
        Command::DemoGrWeights => {
            let (kept, dropped) = demo_gr_weights(docs[0].p, docs[0].weights()?)?;
            verdicts.insert("kept".into(), kept.len().to_string());
            verdicts.insert("dropped".into(), dropped.len().to_string());
            json!({ "kept": kept, "dropped": dropped })
        }
    };
    Ok((verdicts, tables))
}

/// Runs a command on document texts.
pub fn run_texts(cmd: Command, texts: &[String], flags: &Flags) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let docs = texts.iter().map(|t| load_document(t, flags.p)).collect::<Result<Vec<_>, _>>()?;
    let mut hasher = Sha256::new();
    for d in &docs {
        hasher.update(serde_json::to_vec(d).expect("documents serialize"));
        hasher.update([0u8]);
    }
    let (verdicts, tables) = run_documents(cmd, &docs, flags)?;
    Ok(RunReport {
        command: cmd.name().into(),
        tool_version: VERSION.into(),
        input_digest: hex::encode(hasher.finalize()),
        verdicts,
        tables,
        timing_ms: start.elapsed().as_millis() as u64,
    })
}

pub fn run(cmd: Command, paths: &[impl AsRef<Path>], flags: &Flags) -> Result<RunReport, CliError> {
    let texts = paths
        .iter()
        .map(|p| std::fs::read_to_string(p.as_ref()).map_err(|e| CliError::Input(format!("{}: {e}", p.as_ref().display()))))
        .collect::<Result<Vec<_>, _>>()?;
    run_texts(cmd, &texts, flags)
}
