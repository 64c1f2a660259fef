//! Descriptor distances and exact nearest-neighbour retrieval.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::imgio::Dataset;
use crate::method::Method;
use crate::serial::{load_descriptor, save_descriptor};
use crate::{Error, Result};

const MANIFEST: &str = "manifest.txt";
const MANIFEST_TAG: &str = "arb-index v1";

/// Euclidean norm of `a - b`.
pub fn l2_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    Ok(a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt())
}

/// An immutable set of descriptors built with a single method.
#[derive(Clone, Debug, PartialEq)]
pub struct DescriptorIndex {
    method: Method,
    entries: Vec<(String, Vec<f64>)>,
}

impl DescriptorIndex {
    pub fn new(method: Method, entries: Vec<(String, Vec<f64>)>) -> Result<Self> {
        let len = method.descriptor_len();
        let mut seen = HashSet::new();
        for (id, v) in &entries {
            if v.len() != len {
                return Err(Error::LengthMismatch { left: v.len(), right: len });
            }
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidConfig(format!("duplicate index id {id:?}")));
            }
        }
        Ok(Self { method, entries })
    }

    /// Describes every dataset image; the first failure is reported with the
    /// image id.
    pub fn build(dataset: &Dataset, method: &Method) -> Result<Self> {
        method.validate()?;
        let entries = dataset
            .entries()
            .par_iter()
            .map(|(id, img)| {
                method
                    .describe(img)
                    .map(|v| (id.clone(), v))
                    .map_err(|e| Error::InvalidImage(format!("{id}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(*method, entries)
    }

    pub fn method(&self) -> &Method {
        &self.method
    }

    pub fn entries(&self) -> &[(String, Vec<f64>)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The `k` closest entries by exact linear scan, ascending by distance
    /// with ties in id order. `k` is clipped to the index size.
    pub fn nearest(&self, query: &[f64], k: usize) -> Result<Vec<(String, f64)>> {
        if self.entries.is_empty() {
            return Err(Error::EmptyDataset("descriptor index is empty".into()));
        }
        let mut scored = self
            .entries
            .iter()
            .map(|(id, v)| Ok((id.as_str(), self.method.distance(query, v)?)))
            .collect::<Result<Vec<(&str, f64)>>>()?;
        scored.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));
        Ok(scored
            .into_iter()
            .take(k)
            .map(|(id, d)| (id.to_string(), d))
            .collect())
    }

    /// Writes `manifest.txt` plus one `<id>.desc` file per entry.
    pub fn save(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut manifest = format!("{MANIFEST_TAG}\n{}\n", self.method.header());
        for (id, v) in &self.entries {
            save_descriptor(&dir.join(format!("{id}.desc")), &self.method, v)?;
            let _ = writeln!(manifest, "{id}");
        }
        let path = dir.join(MANIFEST);
        std::fs::write(&path, manifest).map_err(|e| Error::io(&path, e))
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let mut lines = text.lines();
        if lines.next() != Some(MANIFEST_TAG) {
            return Err(Error::Parse(format!("{}: not an index manifest", path.display())));
        }
        let method = Method::parse_header(lines.next().unwrap_or_default())?;
        let mut entries = Vec::new();
        for id in lines.filter(|l| !l.is_empty()) {
            let file = dir.join(format!("{id}.desc"));
            let (m, v) = load_descriptor(&file)?;
            if m != method {
                return Err(Error::InvalidConfig(format!(
                    "{} was built with `{m}`, index uses `{method}`",
                    file.display()
                )));
            }
            entries.push((id.to_string(), v));
        }
        Self::new(method, entries)
    }
}
