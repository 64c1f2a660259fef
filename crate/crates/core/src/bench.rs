//! Deformation-accuracy and timing protocols, and their CSV reports.

use std::collections::BTreeMap;
use std::hint::black_box;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::deform::{apply, level_suite, DeformKind};
use crate::imgio::{BinaryImage, Dataset};
use crate::matching::DescriptorIndex;
use crate::method::Method;
use crate::{Error, Result};

/// Pair evaluations timed together as one match sample.
pub const MATCH_BLOCK: usize = 64;

/// One (kind, level) cell of an accuracy table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRow {
    pub method: String,
    pub kind: String,
    pub level: u32,
    /// Queries generated, including skipped ones.
    pub attempted: u64,
    /// Queries whose deformation or description failed.
    pub skipped: u64,
    pub misses: u64,
    /// `100 * misses / (attempted - skipped)`; empty when nothing was scored.
    pub error_percent: Option<f64>,
}

impl AccuracyRow {
    fn from_counts(method: &str, kind: DeformKind, level: u32, c: Counts) -> Self {
        let scored = c.attempted - c.skipped;
        Self {
            method: method.to_string(),
            kind: kind.token().to_string(),
            level,
            attempted: c.attempted,
            skipped: c.skipped,
            misses: c.misses,
            error_percent: (scored > 0).then(|| 100.0 * c.misses as f64 / scored as f64),
        }
    }

    pub fn scored(&self) -> u64 {
        self.attempted - self.skipped
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AccuracyReport {
    pub method: String,
    pub rows: Vec<AccuracyRow>,
}

impl AccuracyReport {
    pub fn row(&self, kind: DeformKind, level: u32) -> Option<&AccuracyRow> {
        self.rows
            .iter()
            .find(|r| r.kind == kind.token() && r.level == level)
    }

    /// Mean error over the levels of `kind` that scored at least one query.
    pub fn kind_average(&self, kind: DeformKind) -> Option<f64> {
        let values: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.kind == kind.token())
            .filter_map(|r| r.error_percent)
            .collect();
        (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Counts {
    attempted: u64,
    skipped: u64,
    misses: u64,
}

enum Outcome {
    Hit,
    Miss,
    Skipped,
}

/// Deforms every dataset image by every (kind, level, variant), describes it
/// and looks up its nearest neighbour in the undeformed index.
///
/// A query is a hit only if the top-ranked id is its source; ties are
/// resolved by id order. Deformations that leave the frame or erase the
/// shape, and deformed images that cannot be described, are counted as
/// skipped and excluded from the error denominator.
pub fn run_accuracy(
    dataset: &Dataset,
    method: &Method,
    kinds: &[DeformKind],
    max_level: u32,
) -> Result<AccuracyReport> {
    if dataset.len() < 2 {
        return Err(Error::InvalidConfig("accuracy runs need at least 2 dataset images".into()));
    }
    if max_level == 0 && !kinds.is_empty() {
        return Err(Error::InvalidConfig("max level must be >= 1".into()));
    }
    let index = DescriptorIndex::build(dataset, method)?;
    let suite: Vec<_> = kinds.iter().flat_map(|&k| level_suite(k, max_level)).collect();

    let query = |id: &str, img: &BinaryImage, spec| -> Result<Outcome> {
        let deformed = match apply(img, spec) {
            Ok(d) => d,
            Err(Error::OutOfFrame { .. } | Error::VanishedShape) => return Ok(Outcome::Skipped),
            Err(e) => return Err(e),
        };
        let descriptor = match method.describe(&deformed) {
            Ok(v) => v,
            Err(Error::EmptyShape | Error::DegenerateShape(_)) => return Ok(Outcome::Skipped),
            Err(e) => return Err(e),
        };
        let best = index.nearest(&descriptor, 1)?;
        Ok(if best[0].0 == id { Outcome::Hit } else { Outcome::Miss })
    };

    let outcomes = dataset
        .entries()
        .par_iter()
        .flat_map_iter(|(id, img)| suite.iter().map(move |spec| (id, img, spec)))
        .map(|(id, img, spec)| Ok(((spec.kind(), spec.level()), query(id, img, spec)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut cells: BTreeMap<(DeformKind, u32), Counts> = BTreeMap::new();
    for (key, outcome) in outcomes {
        let c = cells.entry(key).or_default();
        c.attempted += 1;
        match outcome {
            Outcome::Hit => {}
            Outcome::Miss => c.misses += 1,
            Outcome::Skipped => c.skipped += 1,
        }
    }

    let label = method.to_string();
    let rows = kinds
        .iter()
        .flat_map(|&k| (1..=max_level).map(move |l| (k, l)))
        .map(|(k, l)| AccuracyRow::from_counts(&label, k, l, cells.get(&(k, l)).copied().unwrap_or_default()))
        .collect();
    Ok(AccuracyReport { method: label, rows })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimingReport {
    pub method: String,
    pub train_iters: u64,
    pub match_iters: u64,
    /// Mean seconds to turn one image into a descriptor.
    pub train_mean_s: f64,
    pub train_median_s: f64,
    /// Mean seconds per descriptor-pair distance.
    pub match_mean_s: f64,
    /// Median over blocks of per-pair seconds.
    pub match_median_s: f64,
}

impl TimingReport {
    /// Seconds to describe one query and compare it against `n` stored
    /// descriptors.
    pub fn retrieval_projection(&self, n: u64) -> f64 {
        self.train_mean_s + n as f64 * self.match_mean_s
    }
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2.0
    }
}

/// Ordered pair `p` of the cyclic sequence (0,1), (0,2), ..., (1,0), ...
fn cycled_pair(p: usize, n: usize) -> (usize, usize) {
    if n == 1 {
        return (0, 0);
    }
    let p = p % (n * (n - 1));
    let i = p / (n - 1);
    let j = p % (n - 1);
    (i, if j >= i { j + 1 } else { j })
}

/// Timing protocol with caller-supplied describe and distance functions, run
/// on the calling thread only.
pub fn run_timing_with<D, M>(
    label: &str,
    dataset: &Dataset,
    mut describe: D,
    mut distance: M,
    train_iters: u64,
    match_iters: u64,
) -> Result<TimingReport>
where
    D: FnMut(&BinaryImage) -> Result<Vec<f64>>,
    M: FnMut(&[f64], &[f64]) -> Result<f64>,
{
    if dataset.is_empty() {
        return Err(Error::EmptyDataset("timing needs at least one image".into()));
    }
    if train_iters == 0 || match_iters == 0 {
        return Err(Error::InvalidConfig("iteration counts must be >= 1".into()));
    }

    let mut train_samples = Vec::with_capacity(train_iters as usize * dataset.len());
    let mut descriptors = Vec::with_capacity(dataset.len());
    for iter in 0..train_iters {
        for (_, img) in dataset.entries() {
            let t0 = Instant::now();
            let d = describe(black_box(img))?;
            train_samples.push(t0.elapsed().as_secs_f64());
            if iter == 0 {
                descriptors.push(d);
            }
        }
    }
    let train_mean_s = train_samples.iter().sum::<f64>() / train_samples.len() as f64;

    let n = descriptors.len();
    let total = match_iters as usize;
    let mut block_samples = Vec::with_capacity(total.div_ceil(MATCH_BLOCK));
    let mut match_total = 0.0;
    let mut p = 0;
    while p < total {
        let end = (p + MATCH_BLOCK).min(total);
        let t0 = Instant::now();
        for q in p..end {
            let (i, j) = cycled_pair(q, n);
            black_box(distance(black_box(&descriptors[i]), black_box(&descriptors[j]))?);
        }
        let secs = t0.elapsed().as_secs_f64();
        match_total += secs;
        block_samples.push(secs / (end - p) as f64);
        p = end;
    }

    Ok(TimingReport {
        method: label.to_string(),
        train_iters,
        match_iters,
        train_mean_s,
        train_median_s: median(&mut train_samples),
        match_mean_s: match_total / total as f64,
        match_median_s: median(&mut block_samples),
    })
}

/// Times `train_iters` passes of image-to-descriptor over the dataset and
/// `match_iters` distance evaluations cycling through all ordered pairs.
pub fn run_timing(dataset: &Dataset, method: &Method, train_iters: u64, match_iters: u64) -> Result<TimingReport> {
    method.validate()?;
    run_timing_with(
        &method.to_string(),
        dataset,
        |img| method.describe(img),
        |a, b| method.distance(a, b),
        train_iters,
        match_iters,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionRow {
    pub method: String,
    pub dataset_size: u64,
    pub total_ms: f64,
}

pub fn projection_rows(reports: &[TimingReport], sizes: &[u64]) -> Vec<ProjectionRow> {
    reports
        .iter()
        .flat_map(|r| {
            sizes.iter().map(move |&n| ProjectionRow {
                method: r.method.clone(),
                dataset_size: n,
                total_ms: r.retrieval_projection(n) * 1000.0,
            })
        })
        .collect()
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path, header: &[&str]) -> Result<Vec<T>> {
    let csv_err = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let found = r.headers().map_err(csv_err)?;
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Parse(format!("{}: unexpected CSV header", path.display())));
    }
    r.deserialize().collect::<std::result::Result<_, _>>().map_err(csv_err)
}

pub const ACCURACY_HEADER: [&str; 7] = ["method", "kind", "level", "attempted", "skipped", "misses", "error_percent"];
pub const TIMING_HEADER: [&str; 7] = [
    "method",
    "train_iters",
    "match_iters",
    "train_mean_s",
    "train_median_s",
    "match_mean_s",
    "match_median_s",
];
pub const PROJECTION_HEADER: [&str; 3] = ["method", "dataset_size", "total_ms"];

pub fn write_accuracy_csv(path: &Path, reports: &[AccuracyReport]) -> Result<()> {
    let rows: Vec<&AccuracyRow> = reports.iter().flat_map(|r| &r.rows).collect();
    write_csv(path, &ACCURACY_HEADER, &rows)
}

pub fn read_accuracy_csv(path: &Path) -> Result<Vec<AccuracyRow>> {
    read_csv(path, &ACCURACY_HEADER)
}

pub fn write_timing_csv(path: &Path, reports: &[TimingReport]) -> Result<()> {
    write_csv(path, &TIMING_HEADER, reports)
}

pub fn read_timing_csv(path: &Path) -> Result<Vec<TimingReport>> {
    read_csv(path, &TIMING_HEADER)
}

pub fn write_projection_csv(path: &Path, rows: &[ProjectionRow]) -> Result<()> {
    write_csv(path, &PROJECTION_HEADER, rows)
}

pub fn read_projection_csv(path: &Path) -> Result<Vec<ProjectionRow>> {
    read_csv(path, &PROJECTION_HEADER)
}
