//! Big-endian IDX files as distributed for MNIST, optionally gzip-compressed.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use super::dataset::{Dataset, Sample};
use crate::error::{Error, Result};

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

const DIGITS: usize = 10;

/// Raw contents of an IDX3 image file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdxImages {
    pub rows: usize,
    pub cols: usize,
    /// `count * rows * cols` pixels, image-major.
    pub pixels: Vec<u8>,
}

impl IdxImages {
    pub fn count(&self) -> usize {
        self.pixels.len() / (self.rows * self.cols).max(1)
    }
}

/// Loads MNIST images and labels; pixels are scaled to `[0, 1]` by `/255`.
pub fn load_mnist(images_path: impl AsRef<Path>, labels_path: impl AsRef<Path>) -> Result<Dataset> {
    let images = read_idx_images(images_path)?;
    let labels = read_idx_labels(labels_path)?;
    if images.count() != labels.len() {
        return Err(Error::Format(format!(
            "{} images but {} labels",
            images.count(),
            labels.len()
        )));
    }
    let dim = images.rows * images.cols;
    let samples = images
        .pixels
        .chunks_exact(dim)
        .zip(&labels)
        .map(|(px, &label)| {
            if label as usize >= DIGITS {
                return Err(Error::Format(format!("label {label} is not a digit")));
            }
            Ok(Sample {
                features: px.iter().map(|&p| p as f64 / 255.0).collect(),
                label: label as usize,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(samples, dim, (0..DIGITS).map(|d| d.to_string()).collect())
}

pub fn read_idx_images(path: impl AsRef<Path>) -> Result<IdxImages> {
    let bytes = read_maybe_gzip(path.as_ref())?;
    let mut header = Header::new(&bytes);
    header.expect_magic(IMAGES_MAGIC)?;
    let count = header.next_u32()? as usize;
    let rows = header.next_u32()? as usize;
    let cols = header.next_u32()? as usize;
    let want = count
        .checked_mul(rows)
        .and_then(|v| v.checked_mul(cols))
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;
    let body = header.rest();
    if body.len() != want {
        return Err(Error::Format(format!(
            "expected {want} pixel bytes for {count} images of {rows}x{cols}, found {}",
            body.len()
        )));
    }
    Ok(IdxImages {
        rows,
        cols,
        pixels: body.to_vec(),
    })
}

pub fn read_idx_labels(path: impl AsRef<Path>) -> Result<Vec<u8>> {
    let bytes = read_maybe_gzip(path.as_ref())?;
    let mut header = Header::new(&bytes);
    header.expect_magic(LABELS_MAGIC)?;
    let count = header.next_u32()? as usize;
    let body = header.rest();
    if body.len() != count {
        return Err(Error::Format(format!(
            "expected {count} label bytes, found {}",
            body.len()
        )));
    }
    Ok(body.to_vec())
}

/// Writes an IDX3 image file, gzip-compressed when the path ends in `.gz`.
pub fn write_idx_images(path: impl AsRef<Path>, images: &IdxImages) -> Result<()> {
    let mut out = Vec::with_capacity(16 + images.pixels.len());
    for v in [
        IMAGES_MAGIC,
        images.count() as u32,
        images.rows as u32,
        images.cols as u32,
    ] {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out.extend_from_slice(&images.pixels);
    write_maybe_gzip(path.as_ref(), &out)
}

pub fn write_idx_labels(path: impl AsRef<Path>, labels: &[u8]) -> Result<()> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    write_maybe_gzip(path.as_ref(), &out)
}

fn read_maybe_gzip(path: &Path) -> Result<Vec<u8>> {
    let raw = fs::read(path)?;
    if raw.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(raw.as_slice())
            .read_to_end(&mut out)
            .map_err(|e| Error::Format(format!("{}: bad gzip stream: {e}", path.display())))?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

fn write_maybe_gzip(path: &Path, bytes: &[u8]) -> Result<()> {
    if path.extension().is_some_and(|e| e == "gz") {
        let mut enc = GzEncoder::new(fs::File::create(path)?, Compression::default());
        enc.write_all(bytes)?;
        enc.finish()?;
    } else {
        fs::write(path, bytes)?;
    }
    Ok(())
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Header { bytes, pos: 0 }
    }

    fn next_u32(&mut self) -> Result<u32> {
        let chunk = self
            .bytes
            .get(self.pos..self.pos + 4)
            .ok_or_else(|| Error::Format("truncated IDX header".into()))?;
        self.pos += 4;
        Ok(u32::from_be_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]))
    }

    fn expect_magic(&mut self, magic: u32) -> Result<()> {
        let found = self.next_u32()?;
        if found != magic {
            return Err(Error::Format(format!(
                "magic number {found:#010x}, expected {magic:#010x}"
            )));
        }
        Ok(())
    }

    fn rest(&self) -> &'a [u8] {
        &self.bytes[self.pos..]
    }
}
