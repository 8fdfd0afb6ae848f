//! JSON state files: `{ "labels": [...], "dim": n, "re": [...], "im": [...] }`
//! with row-major entries.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use super::linalg::{CMatrix, C64};
use super::state::DensityMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct StateFile {
    labels: Vec<String>,
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

/// Numbers are written with 17 significant digits so that reading a file
/// back reproduces every entry exactly.
pub fn state_to_json(rho: &DensityMatrix) -> String {
    let m = rho.matrix();
    let n = rho.dim();
    let mut out = String::from("{\n  \"labels\": [");
    for (i, l) in rho.labels().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(&serde_json::to_string(l).expect("string serializes"));
    }
    let _ = write!(out, "],\n  \"dim\": {n},\n");
    let part = |out: &mut String, key: &str, f: &dyn Fn(C64) -> f64| {
        let _ = write!(out, "  \"{key}\": [");
        for i in 0..n {
            for j in 0..n {
                if i + j > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{:.16e}", f(m[(i, j)]));
            }
        }
        out.push(']');
    };
    part(&mut out, "re", &|z| z.re);
    out.push_str(",\n");
    part(&mut out, "im", &|z| z.im);
    out.push_str("\n}\n");
    out
}

pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(text)?;
    let n = file.dim;
    if n == 0 || file.re.len() != n * n || file.im.len() != n * n {
        return Err(Error::Format(format!(
            "expected {} real and imaginary entries for dim {n}, found {} and {}",
            n * n,
            file.re.len(),
            file.im.len()
        )));
    }
    if file.re.iter().chain(&file.im).any(|x| !x.is_finite()) {
        return Err(Error::Format("non-finite matrix entry".into()));
    }
    let m = CMatrix::from_row_iterator(
        n,
        n,
        file.re.iter().zip(&file.im).map(|(&r, &i)| C64::new(r, i)),
    );
    DensityMatrix::new(file.labels, m)
}

pub fn write_state(path: &Path, rho: &DensityMatrix) -> Result<()> {
    std::fs::write(path, state_to_json(rho))?;
    Ok(())
}

pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    state_from_json(&std::fs::read_to_string(path)?)
}
