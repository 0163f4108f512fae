//! Observation file formats and CSV output.
//!
//! Formats are plain text and loss-free: integers one per line, bit strings
//! as 0/1 rows, partitions as one JSON array-of-arrays per line (e.g.
//! `[[1,2],[3]]`), lattices as one row-major CSV line of ±1 per lattice.

use std::fmt::Write as _;
use std::path::Path;

use srs::domain::{BitString, Partition, SpinLattice};

use crate::error::{CliError, CliResult};

fn read_lines(path: &Path) -> CliResult<Vec<String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

pub fn read_integers(path: &Path) -> CliResult<Vec<i64>> {
    read_lines(path)?
        .iter()
        .enumerate()
        .map(|(i, line)| {
            line.parse::<i64>().map_err(|e| {
                CliError::Input(format!("{}:{}: not an integer: {e}", path.display(), i + 1))
            })
        })
        .collect()
}

pub fn read_bitstrings(path: &Path) -> CliResult<Vec<BitString>> {
    read_lines(path)?
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let bits: Vec<u8> = line
                .chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    other => Err(CliError::Input(format!(
                        "{}:{}: unexpected character '{other}' in bit string",
                        path.display(),
                        i + 1
                    ))),
                })
                .collect::<CliResult<_>>()?;
            BitString::from_bits(&bits).map_err(CliError::from)
        })
        .collect()
}

pub fn read_partitions(path: &Path) -> CliResult<Vec<Partition>> {
    read_lines(path)?
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let blocks: Vec<Vec<u32>> = serde_json::from_str(line).map_err(|e| {
                CliError::Input(format!(
                    "{}:{}: not a JSON array of arrays: {e}",
                    path.display(),
                    i + 1
                ))
            })?;
            let n = blocks.iter().map(Vec::len).sum();
            Partition::new(n, blocks).map_err(CliError::from)
        })
        .collect()
}

pub fn read_lattices(path: &Path) -> CliResult<Vec<SpinLattice>> {
    read_lines(path)?
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let spins: Vec<i8> = line
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<i8>().map_err(|e| {
                        CliError::Input(format!(
                            "{}:{}: not a spin value: {e}",
                            path.display(),
                            i + 1
                        ))
                    })
                })
                .collect::<CliResult<_>>()?;
            let side = (spins.len() as f64).sqrt().round() as usize;
            if side * side != spins.len() {
                return Err(CliError::Input(format!(
                    "{}:{}: {} values is not a square lattice",
                    path.display(),
                    i + 1,
                    spins.len()
                )));
            }
            SpinLattice::new(side, spins).map_err(CliError::from)
        })
        .collect()
}

/// Render rows to CSV text with a header; floats use Rust's shortest
/// round-trip formatting so reruns are byte-identical.
pub fn csv_text(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(header);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}
