//! Command-line front end: descriptor inspection, group enumeration, table
//! export, single-lemma verification, and the suite profiles.
//!
//! Exit codes partition outcomes: `0` all assertions pass, `1` an assertion
//! failed (witnesses in the report), `2` the job was malformed (bad
//! descriptor, unknown lemma, out-of-domain instance), `3` an enumeration
//! cap was exceeded and a partial report was written.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::json;

use crate::catalog::{run_job, run_suite, Job};
use crate::chev::{build_chevalley, ChevalleyData};
use crate::engine::{closure_with_depth_cap, GeneratorFamily, GroupSet, DEFAULT_CAP};
use crate::error::Error;
use crate::report::{emit, write_atomic};
use crate::ring::{colocalization_tower, make_ring, Elem, FiniteRing, Subalgebra};
use crate::roots::build_root_system;

#[derive(Parser)]
#[command(
    name = "chevalley",
    version,
    about = "Exact checks of elementary-subgroup lemmas over finite commutative rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe a root system: coordinates, neighbors, hyperplane counts.
    Rootsys {
        /// System descriptor, e.g. A2, B3, G2, BC2, [A1,A1]
        #[arg(long)]
        system: String,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Describe a finite commutative ring built from a descriptor.
    Ring {
        /// Ring descriptor, e.g. Z/6, Z/2[x]/(x^2+x+1), Z/2 x Z/3
        #[arg(long)]
        ring: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive the commutator table of a system, optionally checked over a ring.
    Commutator {
        #[arg(long)]
        system: String,
        /// Also verify the table exhaustively over this ring
        #[arg(long)]
        ring: Option<String>,
        /// Export the table as CSV (columns alpha,beta,i,j,coefficient)
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate an elementary group by breadth-first closure.
    Egroup {
        #[arg(long)]
        system: String,
        #[arg(long)]
        ring: String,
        /// Abandon the closure beyond this many elements
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Abandon the closure beyond this word length
        #[arg(long)]
        depth_cap: Option<u32>,
        /// Dump the sorted element matrices to this JSON file
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify one named lemma on one instance.
    Verify {
        /// Lemma id from the registered catalog (see --help-lemmas)
        #[arg(long)]
        lemma: String,
        #[arg(long)]
        system: Option<String>,
        #[arg(long)]
        ring: Option<String>,
        /// Ideal: `full` or comma-separated generator codes, e.g. `2`
        #[arg(long)]
        ideal: Option<String>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include wall-clock milliseconds in the report timings
        #[arg(long)]
        timings: bool,
    },
    /// Run a suite profile: quick, full, or empty.
    Suite {
        #[arg(long, default_value = "quick")]
        profile: String,
        /// Worker pool size; 1 gives byte-reproducible reports
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        timings: bool,
    },
}

/// Entry point used by the binary: parses `std::env` arguments and returns
/// the process exit code.
pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Runs the CLI on explicit arguments; separated from `main` so tests can
/// drive it in-process.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) | Error::Domain(_) => 2,
                Error::CapExceeded(_) => 3,
                _ => 1,
            }
        }
    }
}

fn dispatch(command: Command) -> Result<i32, Error> {
    match command {
        Command::Rootsys { system, out } => rootsys(&system, out.as_deref()),
        Command::Ring { ring, out } => ring_info(&ring, out.as_deref()),
        Command::Commutator { system, ring, csv, out } => {
            commutator(&system, ring.as_deref(), csv.as_deref(), out.as_deref())
        }
        Command::Egroup { system, ring, cap, depth_cap, dump, out } => {
            egroup(&system, &ring, cap, depth_cap, dump.as_deref(), out.as_deref())
        }
        Command::Verify { lemma, system, ring, ideal, cap, out, timings } => {
            let job = Job {
                lemma,
                system,
                ring,
                ideal,
                cap: cap.unwrap_or(DEFAULT_CAP),
                wall: timings,
            };
            let report = run_job(&job)?;
            emit(&report, out.as_deref())?;
            Ok(report.exit_code())
        }
        Command::Suite { profile, workers, out, timings } => {
            let report = run_suite(&profile, workers.max(1), timings)?;
            emit(&report, out.as_deref())?;
            Ok(report.exit_code())
        }
    }
}

fn rootsys(desc: &str, out: Option<&Path>) -> Result<i32, Error> {
    let system = build_root_system(desc)?;
    let coordinates: Vec<&[i64]> = (0..system.len()).map(|i| system.root(i)).collect();
    let mut doc = json!({
        "system": desc,
        "roots": system.len(),
        "rank": system.ambient_rank(),
        "irreducible": system.is_irreducible(),
        "coordinates": coordinates,
    });
    if system.is_irreducible() {
        let hyperplanes = system.root_spanned_hyperplanes()?;
        doc["root_spanned_hyperplanes"] = json!(hyperplanes.len());
        let neighbor_counts: Vec<usize> = (0..system.len())
            .map(|i| system.neighbors(i).map(<[_]>::len).unwrap_or(0))
            .collect();
        doc["neighbor_counts"] = json!(neighbor_counts);
    }
    emit(&doc, out)?;
    Ok(0)
}

fn ring_info(desc: &str, out: Option<&Path>) -> Result<i32, Error> {
    let ring = make_ring(desc)?;
    let elements: Vec<String> = ring.elements().map(|a| ring.render(a)).collect();
    let units: Vec<String> = ring.units().iter().map(|&a| ring.render(a)).collect();
    let idempotents: Vec<String> = ring
        .elements()
        .filter(|&e| ring.mul(e, e) == e)
        .map(|e| ring.render(e))
        .collect();
    let mut principal: Vec<Vec<String>> = Vec::new();
    let mut seen: Vec<Vec<Elem>> = Vec::new();
    for a in ring.elements() {
        let ideal = Subalgebra::ideal(&ring, &[a]);
        if !seen.contains(&ideal.elems) {
            seen.push(ideal.elems.clone());
            principal.push(ideal.elems.iter().map(|&x| ring.render(x)).collect());
        }
    }
    let full = Subalgebra::full(&ring);
    let towers: Vec<serde_json::Value> = ring
        .elements()
        .map(|s| {
            let tower = colocalization_tower(&full, s, ring.size() + 2);
            let mut levels: Vec<Vec<String>> = Vec::new();
            let mut level: Vec<Elem> = full.elems.clone();
            for _ in 0..=tower.stabilization {
                levels.push(level.iter().map(|&a| ring.render(a)).collect());
                let mut next: Vec<Elem> = level.iter().map(|&a| ring.mul(a, s)).collect();
                next.sort_unstable();
                next.dedup();
                level = next;
            }
            json!({
                "s": ring.render(s),
                "levels": levels,
                "step": tower.step,
                "stabilization": tower.stabilization,
                "stable": tower.stable.iter().map(|&a| ring.render(a)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = json!({
        "ring": desc,
        "size": ring.size(),
        "elements": elements,
        "units": units,
        "idempotents": idempotents,
        "principal_ideals": principal,
        "towers": towers,
    });
    emit(&doc, out)?;
    Ok(0)
}

fn commutator(
    system_desc: &str,
    ring_desc: Option<&str>,
    csv: Option<&Path>,
    out: Option<&Path>,
) -> Result<i32, Error> {
    let system = build_root_system(system_desc)?;
    let data = build_chevalley(&system)?;
    let table = data.derive_commutator_table()?;
    let pairs: Vec<serde_json::Value> = table
        .terms
        .iter()
        .map(|(&(a, b), terms)| {
            json!({
                "alpha": a,
                "beta": b,
                "terms": terms.iter().map(|t| json!({
                    "i": t.i,
                    "j": t.j,
                    "root": t.root,
                    "coefficient": t.coeff,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut doc = json!({ "system": system_desc, "pairs": pairs });
    let mut code = 0;
    if let Some(desc) = ring_desc {
        let ring = make_ring(desc)?;
        let rep = data.verify_commutator_table(&table, &ring);
        doc["ring"] = json!(desc);
        doc["verified"] = json!(rep.pass);
        if !rep.pass {
            doc["witnesses"] = json!(rep.witnesses);
            code = 1;
        }
    }
    if let Some(path) = csv {
        let mut body = String::from("alpha,beta,i,j,coefficient\n");
        for (&(a, b), terms) in &table.terms {
            for t in terms {
                body.push_str(&format!("{a},{b},{},{},{}\n", t.i, t.j, t.coeff));
            }
        }
        write_atomic(path, &body)?;
    }
    emit(&doc, out)?;
    Ok(code)
}

fn egroup_closure(
    data: &ChevalleyData,
    ring: &FiniteRing,
    cap: usize,
    depth_cap: Option<u32>,
) -> (GroupSet, usize) {
    let family = GeneratorFamily::full(data, ring);
    let gens = family.matrices(data);
    let count = gens.len();
    (closure_with_depth_cap(ring, data.dim(), &gens, cap, depth_cap), count)
}

fn egroup(
    system_desc: &str,
    ring_desc: &str,
    cap: usize,
    depth_cap: Option<u32>,
    dump: Option<&Path>,
    out: Option<&Path>,
) -> Result<i32, Error> {
    let system = build_root_system(system_desc)?;
    let data = build_chevalley(&system)?;
    let ring = make_ring(ring_desc)?;
    let (set, generators) = egroup_closure(&data, &ring, cap, depth_cap);
    let doc = json!({
        "system": system_desc,
        "ring": ring_desc,
        "dim": data.dim(),
        "generators": generators,
        "order": set.order(),
        "diameter": set.diameter(),
        "complete": set.complete,
    });
    if let Some(path) = dump {
        let mut elements: Vec<Vec<Elem>> = set.iter().collect();
        elements.sort();
        let dump_doc = json!({
            "order": elements.len(),
            "dim": data.dim(),
            "complete": set.complete,
            "elements": elements,
        });
        emit(&dump_doc, Some(path))?;
    }
    emit(&doc, out)?;
    Ok(if set.complete { 0 } else { 3 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_vec(args: &[&str]) -> i32 {
        run(args.iter().map(|s| s.to_string()))
    }

    #[test]
    fn exit_codes_partition_outcomes() {
        assert_eq!(run_vec(&["chevalley", "verify", "--lemma", "root-sys-dec", "--system", "G2"]), 0);
        assert_eq!(
            run_vec(&["chevalley", "verify", "--lemma", "perfect", "--system", "B2", "--ring", "Z/2"]),
            1
        );
        assert_eq!(run_vec(&["chevalley", "verify", "--lemma", "nope", "--system", "A2"]), 2);
        assert_eq!(run_vec(&["chevalley", "verify", "--lemma", "perfect", "--ring", "Z/2"]), 2);
        assert_eq!(run_vec(&["chevalley", "rootsys", "--system", "Q9"]), 2);
        assert_eq!(
            run_vec(&[
                "chevalley", "verify", "--lemma", "perfect", "--system", "A2", "--ring", "Z/2",
                "--cap", "100"
            ]),
            3
        );
        assert_eq!(run_vec(&["chevalley", "--help"]), 0);
    }

    #[test]
    fn egroup_matches_known_order() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("egroup.json");
        let code = run_vec(&[
            "chevalley", "egroup", "--system", "A2", "--ring", "Z/2",
            "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let doc: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(doc["order"], 168);
        assert_eq!(doc["complete"], true);
    }
}
