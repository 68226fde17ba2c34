//! Result files. Every CSV starts with a `schema,<name>,<version>` record;
//! all files are written to a temporary sibling and renamed into place.

use std::io::Write;
use std::path::Path;

use crate::lattice_hp::Census;
use crate::vqa::{Campaign, Landscape};

use super::CliError;

pub const RUNS_SCHEMA: &str = "hpdesign.runs";
pub const CAMPAIGNS_SCHEMA: &str = "hpdesign.campaigns";
pub const LANDSCAPE_SCHEMA: &str = "hpdesign.landscape";
pub const CENSUS_SCHEMA: &str = "hpdesign.census";
pub const SCHEMA_VERSION: &str = "1";

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(dir, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e))?;
    Ok(())
}

fn csv_bytes(schema: &str, header: &[&str], rows: Vec<Vec<String>>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
    let push = |w: &mut csv::Writer<Vec<u8>>, rec: &[String]| w.write_record(rec).expect("in-memory write");
    push(&mut w, &["schema".into(), schema.into(), SCHEMA_VERSION.into()]);
    push(&mut w, &header.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    for r in rows {
        push(&mut w, &r);
    }
    w.into_inner().expect("in-memory flush")
}

/// One row per optimization run.
pub fn runs_csv(campaigns: &[Campaign]) -> Vec<u8> {
    let header = [
        "n",
        "n_h",
        "variant",
        "mode",
        "seed",
        "run",
        "evals",
        "initial_energy",
        "final_energy",
        "success_rate",
        "exact_success",
    ];
    let rows = campaigns
        .iter()
        .flat_map(|c| &c.runs)
        .map(|r| {
            vec![
                r.n.to_string(),
                r.n_h.to_string(),
                r.variant.to_string(),
                r.mode.to_string(),
                r.seed.to_string(),
                r.run.to_string(),
                r.evals().to_string(),
                r.stages[0].result.trace[0].1.to_string(),
                r.result().value.to_string(),
                r.success_rate.to_string(),
                r.exact_success.map_or(String::new(), |x| x.to_string()),
            ]
        })
        .collect();
    csv_bytes(RUNS_SCHEMA, &header, rows)
}

/// One row per instance.
pub fn campaigns_csv(campaigns: &[Campaign]) -> Vec<u8> {
    let header = ["n", "n_h", "variant", "mode", "runs", "mean_success", "standard_error", "best_run"];
    let rows = campaigns
        .iter()
        .map(|c| {
            vec![
                c.n.to_string(),
                c.n_h.to_string(),
                c.variant.to_string(),
                c.mode.to_string(),
                c.runs.len().to_string(),
                c.mean.to_string(),
                c.standard_error.to_string(),
                c.best.to_string(),
            ]
        })
        .collect();
    csv_bytes(CAMPAIGNS_SCHEMA, &header, rows)
}

/// Header of gamma values; each row starts with its beta.
pub fn landscape_csv(l: &Landscape) -> Vec<u8> {
    let mut header = vec!["beta\\gamma".to_string()];
    header.extend(l.gammas.iter().map(|g| g.to_string()));
    let rows = l
        .betas
        .iter()
        .zip(&l.values)
        .map(|(b, row)| std::iter::once(b.to_string()).chain(row.iter().map(|v| v.to_string())).collect())
        .collect();
    let header_refs: Vec<&str> = header.iter().map(|s| s.as_str()).collect();
    csv_bytes(LANDSCAPE_SCHEMA, &header_refs, rows)
}

/// Structures by decreasing designability.
pub fn census_csv(c: &Census) -> Vec<u8> {
    let header = ["rank", "moves", "designability", "designing_sequences"];
    let rows = c
        .ranking()
        .into_iter()
        .enumerate()
        .map(|(rank, k)| {
            let seqs: Vec<String> = c.designing[k].iter().map(|s| s.to_string()).collect();
            vec![rank.to_string(), c.structures[k].moves_string(), c.designability[k].to_string(), seqs.join(" ")]
        })
        .collect();
    csv_bytes(CENSUS_SCHEMA, &header, rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub").join("x.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn landscape_layout() {
        let l = Landscape {
            betas: vec![0.0, 1.5],
            gammas: vec![0.0, 0.5, 1.0],
            values: vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]],
        };
        let text = String::from_utf8(landscape_csv(&l)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, ["schema,hpdesign.landscape,1", "beta\\gamma,0,0.5,1", "0,1,2,3", "1.5,4,5,6"]);
    }
}
