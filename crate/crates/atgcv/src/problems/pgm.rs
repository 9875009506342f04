//! Binary PGM (P5, 8-bit) image input/output with the pixel mapping
//! [0, 255] -> [0, 1] and clamping on write.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::dense::Matrix;
use crate::error::{Error, Result};

/// Read an 8-bit binary PGM into a matrix of intensities in [0, 1].
/// `out[(i, j)]` is the pixel at raster row i, column j.
pub fn read_pgm(path: &Path) -> Result<Matrix> {
    let bytes = fs::read(path)?;
    let mut pos = 0usize;

    let mut next_token = |bytes: &[u8]| -> Result<String> {
        // Skip whitespace and '#' comments.
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            break;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::InvalidArgument("truncated pgm header".into()));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };

    let magic = next_token(&bytes)?;
    if magic != "P5" {
        return Err(Error::InvalidArgument(format!(
            "unsupported pgm magic '{magic}', only binary P5 is handled"
        )));
    }
    let width: usize = next_token(&bytes)?
        .parse()
        .map_err(|_| Error::InvalidArgument("bad pgm width".into()))?;
    let height: usize = next_token(&bytes)?
        .parse()
        .map_err(|_| Error::InvalidArgument("bad pgm height".into()))?;
    let maxval: usize = next_token(&bytes)?
        .parse()
        .map_err(|_| Error::InvalidArgument("bad pgm maxval".into()))?;
    if maxval != 255 {
        return Err(Error::InvalidArgument(format!(
            "unsupported pgm maxval {maxval}, expected 255"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    pos += 1;
    if bytes.len() < pos + width * height {
        return Err(Error::InvalidArgument("pgm raster shorter than header claims".into()));
    }
    let raster = &bytes[pos..pos + width * height];
    Ok(Matrix::from_fn(height, width, |i, j| raster[i * width + j] as f64 / 255.0))
}

/// Write intensities in [0, 1] as an 8-bit binary PGM, clamping out-of-range
/// values.
pub fn write_pgm(path: &Path, image: &Matrix) -> Result<()> {
    let (h, w) = (image.rows(), image.cols());
    let mut out = Vec::with_capacity(32 + h * w);
    write!(out, "P5\n{w} {h}\n255\n")?;
    for i in 0..h {
        for j in 0..w {
            let v = (image[(i, j)] * 255.0).round().clamp(0.0, 255.0);
            out.push(v as u8);
        }
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_preserves_quantized_pixels() {
        let img = Matrix::from_fn(5, 7, |i, j| ((i * 7 + j * 3) % 256) as f64 / 255.0);
        let dir = std::env::temp_dir().join("atgcv_pgm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("roundtrip.pgm");
        write_pgm(&path, &img).unwrap();
        let back = read_pgm(&path).unwrap();
        assert_eq!(back.rows(), 5);
        assert_eq!(back.cols(), 7);
        assert!(back.sub(&img).max_abs() < 1e-12);
    }

    #[test]
    fn clamps_out_of_range_on_write() {
        let img = Matrix::from_fn(2, 2, |i, j| if (i + j) % 2 == 0 { -0.3 } else { 1.7 });
        let dir = std::env::temp_dir().join("atgcv_pgm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("clamp.pgm");
        write_pgm(&path, &img).unwrap();
        let back = read_pgm(&path).unwrap();
        assert_eq!(back[(0, 0)], 0.0);
        assert_eq!(back[(0, 1)], 1.0);
    }

    #[test]
    fn rejects_ascii_pgm() {
        let dir = std::env::temp_dir().join("atgcv_pgm_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("ascii.pgm");
        std::fs::write(&path, b"P2\n2 2\n255\n0 1 2 3\n").unwrap();
        assert!(read_pgm(&path).is_err());
    }
}
