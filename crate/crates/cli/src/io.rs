//! File formats: Pauli-sum text, state JSON, atomic output.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use num_complex::Complex;
use robint::linalg::SquareMatrix;
use robint::{DensityOperator, PauliSum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Version of every JSON document this tool writes.
pub const SCHEMA_VERSION: u32 = 1;

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(CliError::Other)
}

/// Hamiltonian on `n_qubits` (inferred from the highest index when `None`).
pub fn read_hamiltonian(path: &Path, n_qubits: Option<usize>) -> CliResult<PauliSum> {
    let text = read_text(path)?;
    let parsed = match n_qubits {
        Some(n) => PauliSum::parse_on(&text, n),
        None => PauliSum::parse(&text),
    };
    parsed.map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

/// `{"dim": d, "matrix": [[[re, im], ...], ...]}`, row-major.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct StateFile {
    pub dim: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_state(rho: &DensityOperator) -> Self {
        let d = rho.dim();
        let matrix = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let z = rho.matrix().get(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Self { dim: d, matrix }
    }

    pub fn to_state(&self) -> Result<DensityOperator, String> {
        if self.matrix.len() != self.dim {
            return Err(format!(
                "expected {} rows, found {}",
                self.dim,
                self.matrix.len()
            ));
        }
        if let Some((i, row)) = self
            .matrix
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != self.dim)
        {
            return Err(format!(
                "row {i} has {} entries, expected {}",
                row.len(),
                self.dim
            ));
        }
        let m = SquareMatrix::from_fn(self.dim, |i, j| {
            let [re, im] = self.matrix[i][j];
            Complex::new(re, im)
        });
        robint::HermitianMatrix::new(m)
            .and_then(DensityOperator::new)
            .map_err(|e| e.to_string())
    }
}

pub fn parse_state(text: &str) -> Result<DensityOperator, String> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
    file.to_state()
}

pub fn read_state(path: &Path) -> CliResult<DensityOperator> {
    let text = read_text(path)?;
    parse_state(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn state_json(rho: &DensityOperator) -> String {
    serde_json::to_string_pretty(&StateFile::from_state(rho)).expect("state serializes")
}

/// Writes `contents` to `path` through a sibling temporary file, or to stdout.
pub fn emit(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .context("writing to stdout")?;
        }
        Some(path) => {
            let mut tmp = path.as_os_str().to_owned();
            tmp.push(".tmp");
            fs::write(&tmp, contents).with_context(|| format!("writing {}", path.display()))?;
            fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

/// JSON number or `null` for infinities and NaN.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}
