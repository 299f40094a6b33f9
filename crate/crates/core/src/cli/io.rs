//! Matrix files, fixed-precision JSON and atomic artifact writes.

use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{CMatrix, C64};

/// `{"n": 2, "entries": [[[re, im], ...], ...]}`, row-major.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let file: MatrixFile = serde_json::from_str(text)?;
    if file.n == 0 {
        return Err(Error::input("n must be >= 1"));
    }
    if file.entries.len() != file.n {
        return Err(Error::input(format!(
            "expected {} rows, found {}",
            file.n,
            file.entries.len()
        )));
    }
    let mut flat = Vec::with_capacity(file.n * file.n);
    for (i, row) in file.entries.iter().enumerate() {
        if row.len() != file.n {
            return Err(Error::input(format!(
                "row {i} has {} entries, expected {}",
                row.len(),
                file.n
            )));
        }
        flat.extend(row.iter().map(|[re, im]| C64::new(*re, *im)));
    }
    CMatrix::from_row_major(file.n, &flat)
}

pub fn read_matrix(path: &Path) -> Result<CMatrix> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text)
}

pub fn emit_matrix(a: &CMatrix) -> String {
    let file = MatrixFile {
        n: a.n(),
        entries: a
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(|z| [z.re, z.im]).collect())
            .collect(),
    };
    let mut s = to_json_string(&file);
    s.push('\n');
    s
}

/// Compact JSON with every float written to 17 significant digits;
/// non-finite floats become `null`.
struct Digits17;

impl serde_json::ser::Formatter for Digits17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        if v.is_finite() {
            write!(w, "{v:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Digits17);
    value
        .serialize(&mut ser)
        .expect("serializing in-memory values cannot fail");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => std::path::PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::input(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    let result = (|| -> io::Result<()> {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    result.map_err(Error::from)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let j = parse_matrix(r#"{"n":2,"entries":[[[0,0],[1,0]],[[0,0],[0,0]]]}"#).unwrap();
        assert_eq!(j, CMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]).unwrap());
        let s = parse_matrix(r#"{"n":1,"entries":[[[2,-1]]]}"#).unwrap();
        assert_eq!(s.get(0, 0), C64::new(2.0, -1.0));
        let e = parse_matrix(r#"{"n":2,"entries":[[[0,0]]]}"#).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_matrix("{\"n\":1,\n\"entries\": [[[1, ]]]}") {
            Err(Error::Json { line, column, .. }) => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_matrix(r#"{"n":1,"entries":[[[1e999,0]]]}"#),
            Err(Error::Json { .. })
        ));
    }

    #[test]
    fn emit_round_trips_bit_identically() {
        let a = CMatrix::from_row_major(
            2,
            &[
                C64::new(0.1, -0.0),
                C64::new(1.0 / 3.0, 1e-300),
                C64::new(-2.5e17, 5e-324),
                C64::new(0.0, 1.0),
            ],
        )
        .unwrap();
        let text = emit_matrix(&a);
        let b = parse_matrix(&text).unwrap();
        for (x, y) in a.inner().iter().zip(b.inner().iter()) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        assert_eq!(emit_matrix(&b), text);
    }

    #[test]
    fn floats_use_17_significant_digits() {
        assert_eq!(to_json_string(&[0.1f64, f64::NAN]), "[1.0000000000000001e-1,null]");
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
