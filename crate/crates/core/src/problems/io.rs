//! CSV and IDX dataset readers.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};

/// Loads a headerless (unless `has_header`) comma-separated numeric table,
/// taking column `label_column` as the label. Row numbers in errors are
/// 1-based file lines.
pub fn load_csv(path: impl AsRef<Path>, label_column: usize, has_header: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .from_reader(file);

    let mut width = None;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (index, record) in reader.records().enumerate() {
        let row = index + 1 + usize::from(has_header);
        let record =
            record.map_err(|e| Error::Shape(format!("{}: row {row}: {e}", path.display())))?;
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::RaggedRow {
                path: path.to_path_buf(),
                row,
                expected,
                found: record.len(),
            });
        }
        if label_column >= expected {
            return Err(Error::LabelColumnOutOfRange {
                path: path.to_path_buf(),
                column: label_column,
                width: expected,
            });
        }
        for (column, field) in record.iter().enumerate() {
            let value: f64 = field.trim().parse().map_err(|_| Error::NonNumeric {
                path: path.to_path_buf(),
                row,
                column,
                value: field.to_string(),
            })?;
            if column == label_column {
                labels.push(value);
            } else {
                features.push(value);
            }
        }
    }
    let d = match width {
        None => return Err(Error::EmptyDataset),
        Some(w) => w - 1,
    };
    if d == 0 {
        return Err(Error::Shape(format!(
            "{}: no feature columns",
            path.display()
        )));
    }
    Dataset::new(features, d, labels)
}

pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;
pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;

/// Raw unsigned-byte IDX tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdxArray {
    pub dims: Vec<usize>,
    pub data: Vec<u8>,
}

/// Reads a uint8 IDX file with 1 or 3 dimensions (magic `0x0801` or `0x0803`).
pub fn read_idx(path: impl AsRef<Path>) -> Result<IdxArray> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    let truncated = |expected: usize| Error::TruncatedIdx {
        path: path.to_path_buf(),
        expected,
        found: bytes.len(),
    };
    let word = |i: usize| -> Option<u32> {
        bytes
            .get(4 * i..4 * i + 4)
            .map(|b| u32::from_be_bytes(b.try_into().unwrap()))
    };
    let magic = word(0).ok_or_else(|| truncated(4))?;
    let rank = match magic {
        IDX_LABELS_MAGIC => 1,
        IDX_IMAGES_MAGIC => 3,
        _ => {
            return Err(Error::UnsupportedIdxType {
                path: path.to_path_buf(),
                magic,
            })
        }
    };
    let header = 4 * (rank + 1);
    let dims = (1..=rank)
        .map(|i| word(i).map(|d| d as usize).ok_or_else(|| truncated(header)))
        .collect::<Result<Vec<_>>>()?;
    let payload: usize = dims.iter().product();
    if bytes.len() < header + payload {
        return Err(truncated(header + payload));
    }
    Ok(IdxArray {
        dims,
        data: bytes[header..header + payload].to_vec(),
    })
}

/// Writes a uint8 IDX file; `dims` must have 1 or 3 entries.
pub fn write_idx(path: impl AsRef<Path>, array: &IdxArray) -> Result<()> {
    let path = path.as_ref();
    let magic = match array.dims.len() {
        1 => IDX_LABELS_MAGIC,
        3 => IDX_IMAGES_MAGIC,
        r => return Err(Error::Shape(format!("IDX rank {r} is not supported"))),
    };
    if array.dims.iter().product::<usize>() != array.data.len() {
        return Err(Error::Shape(format!(
            "IDX dims {:?} do not match {} payload bytes",
            array.dims,
            array.data.len()
        )));
    }
    let mut out = Vec::with_capacity(4 * (array.dims.len() + 1) + array.data.len());
    out.extend_from_slice(&magic.to_be_bytes());
    for &d in &array.dims {
        out.extend_from_slice(&(d as u32).to_be_bytes());
    }
    out.extend_from_slice(&array.data);
    File::create(path)
        .and_then(|mut f| f.write_all(&out))
        .map_err(|e| Error::io(path, e))
}

/// Loads an IDX image/label pair, scaling pixels to `[0, 1]` and keeping at
/// most `limit` examples.
pub fn load_idx(
    images_path: impl AsRef<Path>,
    labels_path: impl AsRef<Path>,
    limit: Option<usize>,
) -> Result<Dataset> {
    let images = read_idx(images_path.as_ref())?;
    let labels = read_idx(labels_path.as_ref())?;
    if images.dims.len() != 3 {
        return Err(Error::UnsupportedIdxType {
            path: images_path.as_ref().to_path_buf(),
            magic: IDX_LABELS_MAGIC,
        });
    }
    if labels.dims.len() != 1 {
        return Err(Error::UnsupportedIdxType {
            path: labels_path.as_ref().to_path_buf(),
            magic: IDX_IMAGES_MAGIC,
        });
    }
    let count = images.dims[0];
    if count != labels.dims[0] {
        return Err(Error::CountMismatch {
            images: count,
            labels: labels.dims[0],
        });
    }
    let n = limit.map_or(count, |l| l.min(count));
    let d = images.dims[1] * images.dims[2];
    let features = images.data[..n * d]
        .iter()
        .map(|&b| f64::from(b) / 255.0)
        .collect();
    let labels = labels.data[..n].iter().map(|&b| f64::from(b)).collect();
    Dataset::new(features, d, labels)
}
