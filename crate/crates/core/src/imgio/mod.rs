//! Binary silhouette images: ingestion, binarization, resizing and
//! synthetic gesture generation.

mod synth;

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use image::{ImageFormat, ImageReader};

use crate::{Error, Result};

pub use synth::generate_synthetic_dataset;

/// Default binarization level: a pixel is foreground iff its gray value is
/// strictly greater than this.
pub const DEFAULT_THRESHOLD: u8 = 127;

/// Side length used when ingesting datasets.
pub const DEFAULT_SIZE: usize = 120;

/// Row-major grid of foreground (`true`) and background (`false`) pixels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, pixels: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "zero dimension {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidImage(format!(
                "{} pixels for a {width}x{height} grid",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// All-background image.
    pub fn blank(width: usize, height: usize) -> Result<Self> {
        Self::new(width, height, vec![false; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    /// Builds an image from text rows, `#` marking foreground and anything
    /// else background. Handy for small fixtures.
    pub fn from_rows(rows: &[&str]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        if rows.iter().any(|r| r.chars().count() != width) {
            return Err(Error::InvalidImage("ragged rows".into()));
        }
        let pixels = rows
            .iter()
            .flat_map(|r| r.chars().map(|c| c == '#'))
            .collect();
        Self::new(width, height, pixels)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[bool] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.pixels[y * self.width + x]
    }

    /// Pixel lookup that treats everything outside the frame as background.
    #[inline]
    pub fn get_or_bg(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return false;
        }
        self.pixels[y as usize * self.width + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.pixels[y * self.width + x] = value;
    }

    pub fn foreground_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.pixels.iter().any(|&p| p)
    }

    /// Foreground coordinates in raster order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.pixels
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(move |(i, _)| (i % w, i / w))
    }

    /// True when a foreground pixel lies on the outermost pixel ring.
    pub fn touches_border(&self) -> bool {
        let (w, h) = (self.width, self.height);
        (0..w).any(|x| self.get(x, 0) || self.get(x, h - 1))
            || (0..h).any(|y| self.get(0, y) || self.get(w - 1, y))
    }

    /// 8-bit rendering, foreground as 255.
    pub fn to_gray(&self) -> Vec<u8> {
        self.pixels.iter().map(|&p| if p { 255 } else { 0 }).collect()
    }
}

/// An ordered collection of labelled images, one image per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    entries: Vec<(String, BinaryImage)>,
}

impl Dataset {
    /// Sorts entries by id and rejects duplicates.
    pub fn new(mut entries: Vec<(String, BinaryImage)>) -> Result<Self> {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidConfig(format!("duplicate dataset id {:?}", w[0].0)));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(String, BinaryImage)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(id, _)| id.as_str())
    }

    pub fn get(&self, id: &str) -> Option<&BinaryImage> {
        self.entries
            .binary_search_by(|(e, _)| e.as_str().cmp(id))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    /// Writes every entry as `<id>.pgm` into `dir`, creating it if needed.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (id, img) in &self.entries {
            write_pgm(img, &dir.join(format!("{id}.pgm")))?;
        }
        Ok(())
    }
}

/// Loads a PGM/PBM (binary P4/P5) or PNG file and binarizes it: a pixel is
/// foreground iff its gray level (luma for colour input) is `> threshold`.
pub fn load_image(path: &Path, threshold: u8) -> Result<BinaryImage> {
    let reader = ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    match reader.format() {
        Some(ImageFormat::Png | ImageFormat::Pnm) => {}
        _ => {
            return Err(Error::UnsupportedFormat {
                path: path.to_path_buf(),
            })
        }
    }
    let decoded = reader.decode().map_err(|source| Error::Decode {
        path: path.to_path_buf(),
        source,
    })?;
    let gray = decoded.to_luma8();
    let (w, h) = gray.dimensions();
    let pixels = gray.as_raw().iter().map(|&v| v > threshold).collect();
    BinaryImage::new(w as usize, h as usize, pixels).map_err(|e| match e {
        Error::InvalidImage(msg) => Error::InvalidImage(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Writes a binary PGM (P5, maxval 255) with foreground as 255.
pub fn write_pgm(img: &BinaryImage, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write!(out, "P5\n{} {}\n255\n", img.width(), img.height())
        .and_then(|_| out.write_all(&img.to_gray()))
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

/// Nearest-neighbour resampling to `w`x`h`. Output pixel `(x, y)` copies the
/// source pixel containing its centre: `floor((x + 0.5) * src_w / w)`.
pub fn resize_to(img: &BinaryImage, w: usize, h: usize) -> Result<BinaryImage> {
    if w == 0 || h == 0 {
        return Err(Error::InvalidConfig(format!("resize target {w}x{h}")));
    }
    if w == img.width() && h == img.height() {
        return Ok(img.clone());
    }
    // (2x + 1) * src / (2 * dst) evaluated in integers.
    let map = |i: usize, src: usize, dst: usize| ((2 * i + 1) * src / (2 * dst)).min(src - 1);
    let xs: Vec<usize> = (0..w).map(|x| map(x, img.width(), w)).collect();
    let ys: Vec<usize> = (0..h).map(|y| map(y, img.height(), h)).collect();
    BinaryImage::from_fn(w, h, |x, y| img.get(xs[x], ys[y]))
}

/// Loads every regular, non-hidden file of `dir`, resized to `w`x`h`.
/// Entries are ordered by filename and keyed by the file stem.
pub fn load_dataset(dir: &Path, threshold: u8, w: usize, h: usize) -> Result<Dataset> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .filter(|p| {
            p.file_name()
                .and_then(|n| n.to_str())
                .is_some_and(|n| !n.starts_with('.'))
        })
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::EmptyDataset(dir.display().to_string()));
    }
    let mut entries = Vec::with_capacity(files.len());
    for path in files {
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| Error::InvalidImage(format!("{}: non UTF-8 filename", path.display())))?
            .to_string();
        let img = load_image(&path, threshold)?;
        entries.push((id, resize_to(&img, w, h)?));
    }
    Dataset::new(entries)
}
