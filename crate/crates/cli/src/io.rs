//! CSV readers and writers. Numbers are written with 17 significant digits
//! so every value reads back to the same `f64`.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use bandsinc::geometry::linear_index;
use bandsinc::{Error, Spectrum};
use num_complex::Complex64;

use crate::CliError;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn open(path: &Path) -> Result<csv::Reader<File>, CliError> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn parse_field<T: std::str::FromStr>(path: &Path, row: usize, text: &str) -> Result<T, CliError> {
    text.parse().map_err(|_| {
        CliError::Parse(format!(
            "{}: row {row}: cannot parse {text:?}",
            path.display()
        ))
    })
}

fn check_header(
    path: &Path,
    reader: &mut csv::Reader<File>,
    expected: &[String],
) -> Result<(), CliError> {
    let header = reader
        .headers()
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let found: Vec<&str> = header.iter().collect();
    if found != expected {
        return Err(CliError::Parse(format!(
            "{}: header {:?}, expected {:?}",
            path.display(),
            found.join(","),
            expected.join(",")
        )));
    }
    Ok(())
}

fn records(
    path: &Path,
    reader: csv::Reader<File>,
) -> impl Iterator<Item = Result<(usize, csv::StringRecord), CliError>> + '_ {
    reader.into_records().enumerate().map(move |(i, r)| {
        r.map(|rec| (i + 1, rec))
            .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    })
}

/// Spectrum file `k1..kd,re,im`, one row per `k ∈ I_M` in any order.
pub fn read_spectrum(path: &Path, bandwidth: usize, dim: usize) -> Result<Spectrum, CliError> {
    let mut reader = open(path)?;
    let mut header: Vec<String> = (1..=dim).map(|t| format!("k{t}")).collect();
    header.extend(["re".to_string(), "im".to_string()]);
    check_header(path, &mut reader, &header)?;

    let total = bandwidth.pow(dim as u32);
    let mut values: Vec<Option<Complex64>> = vec![None; total];
    let h = (bandwidth / 2) as i64;
    for item in records(path, reader) {
        let (row, rec) = item?;
        let k = (0..dim)
            .map(|t| parse_field::<i64>(path, row, &rec[t]))
            .collect::<Result<Vec<_>, _>>()?;
        let re = parse_field::<f64>(path, row, &rec[dim])?;
        let im = parse_field::<f64>(path, row, &rec[dim + 1])?;
        if k.iter().any(|&kt| kt < -h || kt >= h) {
            return Err(Error::ShapeMismatch(format!(
                "spectrum row {row}: index {k:?} outside I_{bandwidth}"
            ))
            .into());
        }
        let slot = &mut values[linear_index(&k, bandwidth)];
        if slot.is_some() {
            return Err(
                Error::ShapeMismatch(format!("spectrum row {row}: index {k:?} repeated")).into(),
            );
        }
        *slot = Some(Complex64::new(re, im));
    }
    let missing = values.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        return Err(Error::ShapeMismatch(format!(
            "spectrum file lacks {missing} of {total} indices"
        ))
        .into());
    }
    Ok(Spectrum::new(
        bandwidth,
        dim,
        values.into_iter().flatten().collect(),
    )?)
}

/// Nodes file `x1..xd`, returned as flat coordinates.
pub fn read_nodes(path: &Path, dim: usize) -> Result<Vec<f64>, CliError> {
    let mut reader = open(path)?;
    let header: Vec<String> = (1..=dim).map(|t| format!("x{t}")).collect();
    check_header(path, &mut reader, &header)?;
    let mut coords = Vec::new();
    for item in records(path, reader) {
        let (row, rec) = item?;
        for t in 0..dim {
            coords.push(parse_field::<f64>(path, row, &rec[t])?);
        }
    }
    Ok(coords)
}

/// Writes a header and float rows, atomically when a path is given.
pub fn write_table(
    out: Option<&Path>,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<(), CliError> {
    let emit = |sink: &mut dyn Write| -> io::Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()
    };
    match out {
        None => emit(&mut io::stdout().lock()).map_err(|e| CliError::Io(format!("stdout: {e}"))),
        Some(path) => {
            let io_err = |e: io::Error| CliError::Io(format!("{}: {e}", path.display()));
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
            emit(tmp.as_file_mut()).map_err(io_err)?;
            tmp.as_file().sync_all().map_err(io_err)?;
            tmp.persist(path).map_err(|e| io_err(e.error))?;
            Ok(())
        }
    }
}

pub fn write_values(out: Option<&Path>, values: &[Complex64]) -> Result<(), CliError> {
    let rows = values
        .iter()
        .enumerate()
        .map(|(j, z)| vec![(j + 1).to_string(), fmt_f64(z.re), fmt_f64(z.im)]);
    write_table(out, &["j", "re", "im"], rows)
}
