//! Plain-text matrix files: one matrix row per line, entries separated by
//! commas, each entry a `re im` pair separated by whitespace. Blank lines
//! and `#` comments are skipped. Written values carry 17 significant
//! digits, so a write/read cycle reproduces every entry to the last bit of
//! rounding.

use std::fs;
use std::path::Path;

use krylov_core::{C64, CMatrix, KrylovError, OperatorMatrix, Result};

/// Loads a complex square operator matrix from `path`, validated finite and
/// square. Hermiticity is the caller's concern (enforced where the matrix
/// serves as a Hamiltonian).
pub fn load_operator_file(path: &Path) -> Result<OperatorMatrix> {
    let text = fs::read_to_string(path).map_err(|e| {
        KrylovError::InvalidInput(format!("cannot read {}: {e}", path.display()))
    })?;
    OperatorMatrix::new(parse_matrix(&text, &path.display().to_string())?)
}

fn parse_matrix(text: &str, origin: &str) -> Result<CMatrix> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for (col, entry) in line.split(',').enumerate() {
            let parts: Vec<&str> = entry.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(KrylovError::InvalidInput(format!(
                    "{origin} line {}: entry {} must be a `re im` pair, got {:?}",
                    idx + 1,
                    col + 1,
                    entry.trim()
                )));
            }
            let mut vals = [0.0f64; 2];
            for (slot, part) in vals.iter_mut().zip(parts.iter()) {
                *slot = part.parse().map_err(|e| {
                    KrylovError::InvalidInput(format!(
                        "{origin} line {}: cannot parse {part:?} as a number: {e}",
                        idx + 1
                    ))
                })?;
                if !slot.is_finite() {
                    return Err(KrylovError::InvalidInput(format!(
                        "{origin} line {}: entry {} is not finite",
                        idx + 1,
                        col + 1
                    )));
                }
            }
            row.push(C64::new(vals[0], vals[1]));
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(KrylovError::InvalidInput(format!(
            "{origin}: no matrix rows found"
        )));
    }
    let d = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != d {
            return Err(KrylovError::InvalidInput(format!(
                "{origin}: row {} has {} entries but the matrix must be square \
                 {d}x{d} ({d} rows were given)",
                i + 1,
                row.len()
            )));
        }
    }
    Ok(CMatrix::from_fn(d, d, |i, j| rows[i][j]))
}

/// Writes a complex matrix to `path` in the same format [`read_matrix`]
/// accepts; the shipped commands only read matrices, so the write half of
/// the format lives with the tests that pin the round-trip.
#[cfg(test)]
pub fn write_matrix(path: &Path, m: &CMatrix) -> Result<()> {
    let mut text = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| format!("{:.16e} {:.16e}", m[(i, j)].re, m[(i, j)].im))
            .collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text).map_err(|e| {
        KrylovError::InvalidInput(format!("cannot write {}: {e}", path.display()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_pauli_x_fixture() {
        let m = parse_matrix("0 0,1 0\n1 0,0 0\n", "inline").unwrap();
        assert_eq!(m.nrows(), 2);
        assert_eq!(m[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(m[(1, 0)], C64::new(1.0, 0.0));
        assert_eq!(m[(0, 0)], C64::new(0.0, 0.0));
    }

    #[test]
    fn skips_blank_lines_and_comments() {
        let m = parse_matrix("# a comment\n\n1 0,0 0\n0 0,1 0\n", "inline").unwrap();
        assert_eq!(m[(0, 0)], C64::new(1.0, 0.0));
    }

    #[test]
    fn rejects_non_square_input_naming_the_expected_shape() {
        let err = parse_matrix("1 0,0 0,0 0\n0 0,1 0,0 0\n", "inline").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("2x2"), "message was: {msg}");
        assert!(msg.contains("row 1"), "message was: {msg}");
    }

    #[test]
    fn rejects_malformed_entries_with_line_numbers() {
        let err = parse_matrix("1 0,0\n0 0,1 0\n", "inline").unwrap_err();
        assert!(err.to_string().contains("line 1"));
        let err = parse_matrix("1 0,x 0\n0 0,1 0\n", "inline").unwrap_err();
        assert!(err.to_string().contains("line 1"));
    }

    #[test]
    fn write_then_read_round_trips_to_machine_precision() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let m = CMatrix::from_fn(4, 4, |_, _| {
            C64::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0))
        });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.txt");
        write_matrix(&path, &m).unwrap();
        let back = load_operator_file(&path).unwrap();
        let dev = (back.matrix() - &m).map(|z| z.norm()).max();
        assert!(dev <= 1e-15, "round-trip deviation {dev}");
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = parse_matrix("1 0,inf 0\n0 0,1 0\n", "inline").unwrap_err();
        assert!(err.to_string().contains("not finite"));
    }
}
