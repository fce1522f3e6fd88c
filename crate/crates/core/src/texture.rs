//! Imagette texture description: gray-level quantization, symmetric
//! co-occurrence matrices, and six Haralick parameters averaged over the
//! four directions 0°, 45°, 90° and 135°.

use std::io::Cursor;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageEncoder, ImageFormat};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::real17;

pub const DEFAULT_SIDE: usize = 32;
pub const DEFAULT_LEVELS: usize = 16;
pub const DEFAULT_DISTANCE: usize = 2;
pub const ANGLES: [u32; 4] = [0, 45, 90, 135];

/// Square tile of 8-bit gray levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Imagette {
    pub id: String,
    pub label: Option<String>,
    side: usize,
    pixels: Vec<u8>,
}

impl Imagette {
    pub fn new(id: impl Into<String>, label: Option<String>, side: usize, pixels: Vec<u8>) -> Result<Self> {
        if side == 0 || pixels.len() != side * side {
            return Err(Error::InvalidImagette(format!(
                "{} pixels for side {side}",
                pixels.len()
            )));
        }
        Ok(Imagette {
            id: id.into(),
            label,
            side,
            pixels,
        })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.side + col]
    }

    /// Binary (P5) graymap encoding.
    pub fn to_pgm(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        PnmEncoder::new(&mut out)
            .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
            .write_image(
                &self.pixels,
                self.side as u32,
                self.side as u32,
                ExtendedColorType::L8,
            )?;
        Ok(out)
    }

    pub fn from_pgm(id: impl Into<String>, label: Option<String>, bytes: &[u8]) -> Result<Self> {
        let img = image::load(Cursor::new(bytes), ImageFormat::Pnm)?.to_luma8();
        if img.width() != img.height() {
            return Err(Error::InvalidImagette(format!(
                "imagettes must be square, got {}x{}",
                img.width(),
                img.height()
            )));
        }
        let side = img.width() as usize;
        Imagette::new(id, label, side, img.into_raw())
    }

    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_pgm()?)?;
        Ok(())
    }

    pub fn read_pgm(path: &Path, id: impl Into<String>, label: Option<String>) -> Result<Self> {
        Imagette::from_pgm(id, label, &std::fs::read(path)?)
    }
}

/// Gray levels reduced to `levels` bins.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantizedGrid {
    side: usize,
    levels: usize,
    cells: Vec<u8>,
}

impl QuantizedGrid {
    pub fn new(side: usize, levels: usize, cells: Vec<u8>) -> Result<Self> {
        if side == 0 || cells.len() != side * side {
            return Err(Error::InvalidImagette(format!(
                "{} cells for side {side}",
                cells.len()
            )));
        }
        if cells.iter().any(|&c| c as usize >= levels) {
            return Err(Error::InvalidImagette(format!("cell outside {levels} levels")));
        }
        Ok(QuantizedGrid { side, levels, cells })
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.side + col]
    }
}

fn check_levels(q: usize) -> Result<()> {
    if matches!(q, 4 | 8 | 16 | 32) {
        Ok(())
    } else {
        Err(Error::InvalidLevels(q))
    }
}

/// `level = floor(pixel * q / 256)`.
pub fn quantize(img: &Imagette, q: usize) -> Result<QuantizedGrid> {
    check_levels(q)?;
    let cells = img
        .pixels
        .iter()
        .map(|&p| (p as usize * q / 256) as u8)
        .collect();
    Ok(QuantizedGrid {
        side: img.side,
        levels: q,
        cells,
    })
}

/// (Δrow, Δcol) for a direction, with rows growing downward.
pub fn displacement(distance: usize, angle: u32) -> Result<(isize, isize)> {
    let d = distance as isize;
    match angle {
        0 => Ok((0, d)),
        45 => Ok((-d, d)),
        90 => Ok((-d, 0)),
        135 => Ok((-d, -d)),
        other => Err(Error::InvalidAngle(other)),
    }
}

/// Joint probability of gray-level pairs at a fixed displacement, counted
/// symmetrically.
#[derive(Clone, Debug, PartialEq)]
pub struct CooccurrenceMatrix {
    levels: usize,
    p: Vec<f64>,
}

impl CooccurrenceMatrix {
    pub fn from_probabilities(levels: usize, p: Vec<f64>) -> Result<Self> {
        if p.len() != levels * levels {
            return Err(Error::InvalidImagette(format!(
                "{} entries for {levels} levels",
                p.len()
            )));
        }
        Ok(CooccurrenceMatrix { levels, p })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.levels + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.p
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.levels).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.levels).all(|i| (0..self.levels).all(|j| i == j || self.get(i, j) == 0.0))
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let q = self.levels;
        self.p
            .iter()
            .enumerate()
            .map(move |(k, &v)| (k / q, k % q, v))
    }
}

pub fn cooccurrence(grid: &QuantizedGrid, distance: usize, angle: u32) -> Result<CooccurrenceMatrix> {
    let (dr, dc) = displacement(distance, angle)?;
    if distance == 0 || distance >= grid.side {
        return Err(Error::InvalidDistance {
            distance,
            side: grid.side,
        });
    }
    let q = grid.levels;
    let side = grid.side as isize;
    let mut counts = vec![0u64; q * q];
    let mut total = 0u64;
    for r in 0..side {
        let r2 = r + dr;
        if !(0..side).contains(&r2) {
            continue;
        }
        for c in 0..side {
            let c2 = c + dc;
            if !(0..side).contains(&c2) {
                continue;
            }
            let a = grid.get(r as usize, c as usize) as usize;
            let b = grid.get(r2 as usize, c2 as usize) as usize;
            counts[a * q + b] += 1;
            counts[b * q + a] += 1;
            total += 2;
        }
    }
    let p = counts
        .into_iter()
        .map(|c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
        .collect();
    Ok(CooccurrenceMatrix { levels: q, p })
}

/// The six texture parameters of one imagette.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub homogeneity: f64,
    pub contrast: f64,
    pub entropy: f64,
    pub correlation: f64,
    pub directivity: f64,
    pub uniformity: f64,
}

impl FeatureVector {
    pub const NAMES: [&'static str; 6] = [
        "homogeneity",
        "contrast",
        "entropy",
        "correlation",
        "directivity",
        "uniformity",
    ];

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.homogeneity,
            self.contrast,
            self.entropy,
            self.correlation,
            self.directivity,
            self.uniformity,
        ]
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        FeatureVector {
            homogeneity: a[0],
            contrast: a[1],
            entropy: a[2],
            correlation: a[3],
            directivity: a[4],
            uniformity: a[5],
        }
    }
}

/// Haralick parameters of a single matrix.
pub fn haralick(m: &CooccurrenceMatrix) -> FeatureVector {
    let mut f = FeatureVector::default();
    let (mut mu_i, mut mu_j) = (0.0, 0.0);
    for (i, j, p) in m.cells() {
        let d = i.abs_diff(j) as f64;
        f.homogeneity += p / (1.0 + d);
        f.contrast += d * d * p;
        if p > 0.0 {
            f.entropy -= p * p.ln();
        }
        if i == j {
            f.directivity += p;
        }
        f.uniformity += p * p;
        mu_i += i as f64 * p;
        mu_j += j as f64 * p;
    }
    let (mut var_i, mut var_j, mut cov) = (0.0, 0.0, 0.0);
    for (i, j, p) in m.cells() {
        let (a, b) = (i as f64 - mu_i, j as f64 - mu_j);
        var_i += a * a * p;
        var_j += b * b * p;
        cov += a * b * p;
    }
    let sd = (var_i * var_j).sqrt();
    f.correlation = if sd > 0.0 {
        (cov / sd).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    f
}

/// Per-direction parameters averaged over the four matrices.
pub fn haralick6(mats: &[CooccurrenceMatrix; 4]) -> Result<FeatureVector> {
    let q = mats[0].levels;
    if mats.iter().any(|m| m.levels != q) {
        return Err(Error::MismatchedLevels);
    }
    let mut sum = [0.0; 6];
    for m in mats {
        for (s, v) in sum.iter_mut().zip(haralick(m).to_array()) {
            *s += v;
        }
    }
    Ok(FeatureVector::from_array(sum.map(|s| s / 4.0)))
}

/// Quantize, build the four direction matrices, and average their
/// parameters.
pub fn extract_features(img: &Imagette, q: usize, distance: usize) -> Result<FeatureVector> {
    let grid = quantize(img, q)?;
    let mats = [
        cooccurrence(&grid, distance, ANGLES[0])?,
        cooccurrence(&grid, distance, ANGLES[1])?,
        cooccurrence(&grid, distance, ANGLES[2])?,
        cooccurrence(&grid, distance, ANGLES[3])?,
    ];
    haralick6(&mats)
}

/// One line of the features CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureRow {
    pub id: String,
    pub label: Option<String>,
    pub features: FeatureVector,
}

pub fn write_features_csv(path: &Path, rows: &[FeatureRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["id", "label"];
    header.extend(FeatureVector::NAMES);
    w.write_record(&header)?;
    for row in rows {
        let mut rec = vec![row.id.clone(), row.label.clone().unwrap_or_default()];
        rec.extend(row.features.to_array().iter().map(|&v| real17(v)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_features_csv(path: &Path) -> Result<Vec<FeatureRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        if rec.len() != 8 {
            return Err(Error::Config(format!(
                "features row with {} fields, expected 8",
                rec.len()
            )));
        }
        let mut a = [0.0; 6];
        for (k, v) in a.iter_mut().enumerate() {
            *v = rec[k + 2]
                .parse()
                .map_err(|e| Error::Config(format!("bad feature value `{}`: {e}", &rec[k + 2])))?;
        }
        rows.push(FeatureRow {
            id: rec[0].to_string(),
            label: (!rec[1].is_empty()).then(|| rec[1].to_string()),
            features: FeatureVector::from_array(a),
        });
    }
    Ok(rows)
}
