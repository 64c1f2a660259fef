//! Text serialization of descriptors: a header line naming the method and
//! its configuration, then the values.

use std::path::Path;

use crate::arb::ArbVariant;
use crate::method::Method;
use crate::{Error, Result};

fn row_len(method: &Method) -> usize {
    match method {
        Method::Arb { variant, config } => {
            let bins = config.angular_bins();
            if *variant == ArbVariant::Overlapping {
                bins * config.instances
            } else {
                bins
            }
        }
        Method::Fourier { retained, .. } => *retained,
        Method::Hausdorff { .. } => 2,
    }
}

/// Header line, then rows of values (one ring per line for ARB, one point per
/// line for Hausdorff, a single line for Fourier descriptors).
pub fn write_descriptor(method: &Method, values: &[f64]) -> Result<String> {
    if values.len() != method.descriptor_len() {
        return Err(Error::LengthMismatch { left: values.len(), right: method.descriptor_len() });
    }
    let mut out = method.header();
    out.push('\n');
    for row in values.chunks(row_len(method)) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

pub fn read_descriptor(text: &str) -> Result<(Method, Vec<f64>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty descriptor".into()))?;
    let method = Method::parse_header(header)?;
    let values = lines
        .flat_map(str::split_whitespace)
        .map(|w| {
            w.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad descriptor value {w:?}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.len() != method.descriptor_len() {
        return Err(Error::Parse(format!(
            "expected {} values, found {}",
            method.descriptor_len(),
            values.len()
        )));
    }
    Ok((method, values))
}

pub fn save_descriptor(path: &Path, method: &Method, values: &[f64]) -> Result<()> {
    std::fs::write(path, write_descriptor(method, values)?).map_err(|e| Error::io(path, e))
}

pub fn load_descriptor(path: &Path) -> Result<(Method, Vec<f64>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_descriptor(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}
