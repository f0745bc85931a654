use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::{Error, Instance, Label, Result};

/// Writes a header `x1,...,xd,y` and one row per instance.
///
/// Features use the shortest decimal form that parses back to the same
/// `f64`, so `import` of an `export` is bit-exact.
pub fn write_csv<W: Write>(instances: &[Instance], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let d = instances.first().map_or(0, Instance::dims);
    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    header.push("y".into());
    w.write_record(&header)?;
    let mut row = Vec::with_capacity(d + 1);
    for inst in instances {
        if inst.dims() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: inst.dims() });
        }
        row.clear();
        row.extend(inst.x.iter().map(|v| v.to_string()));
        row.push(inst.y.to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Parses the format written by [`write_csv`]. `origin` names the source in
/// errors. Instances are numbered from 0 in file order.
pub fn read_csv<R: Read>(input: R, origin: &Path) -> Result<Vec<Instance>> {
    let mut r = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let width = r.headers()?.len();
    if width < 2 {
        return Err(parse_err(origin, 1, "header needs at least one feature and a label column".into()));
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(i as u64 + 2, |p| p.line());
        if rec.len() != width {
            return Err(parse_err(origin, line, format!("expected {width} columns, found {}", rec.len())));
        }
        let x = rec
            .iter()
            .take(width - 1)
            .map(|f| f.trim().parse::<f64>().map_err(|e| parse_err(origin, line, format!("feature {f:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let label = &rec[width - 1];
        let y = label
            .trim()
            .parse::<Label>()
            .map_err(|e| parse_err(origin, line, format!("label {label:?}: {e}")))?;
        out.push(Instance::new(out.len() as u64, x, y));
    }
    Ok(out)
}

fn parse_err(path: &Path, line: u64, message: String) -> Error {
    Error::Parse { path: path.to_path_buf(), line, message }
}

pub fn export_csv(instances: &[Instance], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(instances, std::io::BufWriter::new(file))
}

pub fn import_csv(path: impl AsRef<Path>) -> Result<Vec<Instance>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(std::io::BufReader::new(file), path)
}
