use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::LabeledDataset;
use crate::error::{Error, Result};

/// Writes `f1,...,fm,label`. Two-class datasets store signed labels (+1/−1),
/// others store class indices. Floats use the shortest representation that
/// parses back to the same value.
pub fn write_csv<W: Write>(data: &LabeledDataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<String> = (1..=data.dim()).map(|k| format!("f{k}")).collect();
    header.push("label".into());
    w.write_record(&header)?;
    for i in 0..data.len() {
        let mut rec: Vec<String> = data.point(i).iter().map(|v| v.to_string()).collect();
        rec.push(if data.class_count() == 2 {
            format!("{}", data.signed_label(i) as i64)
        } else {
            data.label(i).to_string()
        });
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the format written by [`write_csv`]. Labels drawn only from {−1, +1}
/// give a two-class dataset (+1 is class 0); otherwise labels must be
/// non-negative class indices.
pub fn read_csv<R: Read>(reader: R) -> Result<LabeledDataset> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = r.headers()?.clone();
    if headers.len() < 2 || headers.get(headers.len() - 1) != Some("label") {
        return Err(Error::Parse("header must be f1,...,fm,label".into()));
    }
    let dim = headers.len() - 1;
    let mut points = Vec::new();
    let mut raw_labels = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        if rec.len() != dim + 1 {
            return Err(Error::Parse(format!("row {} has {} fields", line + 1, rec.len())));
        }
        for k in 0..dim {
            let v: f64 = rec[k]
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("row {} field {}: {e}", line + 1, k + 1)))?;
            points.push(v);
        }
        let l: i64 = rec[dim]
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("row {} label: {e}", line + 1)))?;
        raw_labels.push(l);
    }
    if raw_labels.is_empty() {
        return Err(Error::Parse("no data rows".into()));
    }
    let signed = raw_labels.iter().all(|&l| l == 1 || l == -1) && raw_labels.contains(&-1);
    let (labels, class_count) = if signed {
        (raw_labels.iter().map(|&l| if l == 1 { 0 } else { 1 }).collect(), 2)
    } else {
        if let Some(bad) = raw_labels.iter().find(|&&l| l < 0) {
            return Err(Error::Parse(format!("negative class index {bad}")));
        }
        let k = *raw_labels.iter().max().expect("non-empty") as usize + 1;
        (raw_labels.iter().map(|&l| l as usize).collect(), k.max(2))
    };
    LabeledDataset::new(points, dim, labels, class_count)
}

pub fn write_csv_path(data: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    write_csv(data, File::create(path)?)
}

pub fn read_csv_path(path: impl AsRef<Path>) -> Result<LabeledDataset> {
    read_csv(File::open(path)?)
}
