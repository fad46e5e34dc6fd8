//! Representative databases: compute or ingest orbit/class representatives,
//! persist them as graph6 text with a JSON sidecar (checksum + provenance).

use gsx_core::enumerate::{connected_graphs, connected_iso_classes, lc_class_partition};
use gsx_core::graph::{parse_graph6, to_graph6};
use gsx_core::lc::{partition_orbits, PartitionMode};
use gsx_core::Graph;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::process::ExitCode;

pub struct RepresentativeDb {
    pub n: usize,
    pub mode: PartitionMode,
    pub reps: Vec<Graph>,
    pub provenance: serde_json::Value,
}

fn sha256_hex(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    format!("{:x}", h.finalize())
}

/// Compute representatives: minimum-key member per labeled orbit, or the
/// canonical representative per entanglement class.
pub fn compute_db(n: usize, mode: PartitionMode) -> Result<RepresentativeDb, String> {
    let reps = match mode {
        PartitionMode::Labeled => {
            let universe: Vec<Graph> =
                connected_graphs(n).map_err(|e| e.to_string())?.collect();
            let part =
                partition_orbits(universe, PartitionMode::Labeled).map_err(|e| e.to_string())?;
            part.groups()
                .iter()
                .map(|group| {
                    group
                        .iter()
                        .map(|&i| part.universe[i].clone())
                        .min_by_key(Graph::triangle_key)
                        .expect("groups are non-empty")
                })
                .collect()
        }
        PartitionMode::Unlabeled => {
            let iso = connected_iso_classes(n).map_err(|e| e.to_string())?;
            let classes = lc_class_partition(&iso).map_err(|e| e.to_string())?;
            classes.iter().map(|class| iso[class[0]].clone()).collect()
        }
    };
    Ok(RepresentativeDb {
        n,
        mode,
        reps,
        provenance: json!({"computed": {"tool": "gsx classes", "n": n}}),
    })
}

/// Ingest representatives from a graph6 file and verify them: class
/// representatives must be pairwise LC-inequivalent up to isomorphism.
pub fn ingest_db(n: usize, mode: PartitionMode, path: &str) -> Result<RepresentativeDb, String> {
    if mode != PartitionMode::Unlabeled {
        return Err("ingestion supports unlabeled class databases only".into());
    }
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let checksum = sha256_hex(&text);
    let mut reps = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let g = parse_graph6(line).map_err(|e| format!("{path}: {e}"))?;
        if g.n() != n {
            return Err(format!("{path}: graph {line:?} has {} nodes, expected {n}", g.n()));
        }
        reps.push(g);
    }
    // pairwise non-equivalence: every class group must be a singleton
    let classes = lc_class_partition(&reps).map_err(|e| e.to_string())?;
    for class in &classes {
        if class.len() > 1 {
            return Err(format!(
                "database integrity: representatives {} and {} (lines {} and {}) are equivalent",
                to_graph6(&reps[class[0]]),
                to_graph6(&reps[class[1]]),
                class[0] + 1,
                class[1] + 1
            ));
        }
    }
    Ok(RepresentativeDb {
        n,
        mode,
        reps,
        provenance: json!({"ingested": {"path": path, "sha256": checksum}}),
    })
}

pub fn save_db(db: &RepresentativeDb, path: &str) -> Result<(), String> {
    let body: String = db.reps.iter().map(|g| to_graph6(g) + "\n").collect();
    std::fs::write(path, &body).map_err(|e| e.to_string())?;
    let sidecar = json!({
        "schema": 1,
        "n": db.n,
        "mode": match db.mode {
            PartitionMode::Labeled => "labeled",
            PartitionMode::Unlabeled => "unlabeled",
        },
        "count": db.reps.len(),
        "sha256": sha256_hex(&body),
        "provenance": db.provenance,
    });
    std::fs::write(format!("{path}.json"), sidecar.to_string() + "\n")
        .map_err(|e| e.to_string())
}

/// Verify a saved database against its sidecar checksum.
pub fn verify_saved(path: &str) -> Result<(), String> {
    let body = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let sidecar: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(format!("{path}.json")).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let want = sidecar["sha256"].as_str().ok_or("sidecar missing sha256")?;
    if sha256_hex(&body) != want {
        return Err(format!("database integrity: checksum mismatch for {path}"));
    }
    Ok(())
}

pub fn cmd_classes(
    n: usize,
    mode: PartitionMode,
    source: Option<&str>,
    out: Option<&str>,
    json_out: bool,
) -> Result<ExitCode, String> {
    let db = match source {
        Some(path) => ingest_db(n, mode, path)?,
        None => compute_db(n, mode)?,
    };
    if let Some(path) = out {
        save_db(&db, path)?;
        verify_saved(path)?;
    }
    let label = match mode {
        PartitionMode::Labeled => "orbits",
        PartitionMode::Unlabeled => "classes",
    };
    if json_out {
        println!(
            "{}",
            json!({
                "n": n,
                "mode": label,
                "count": db.reps.len(),
                "provenance": db.provenance,
                "out": out,
            })
        );
    } else {
        println!("n={n}: {} {label}", db.reps.len());
        if let Some(path) = out {
            println!("saved to {path} (+ {path}.json)");
        }
    }
    Ok(ExitCode::SUCCESS)
}
