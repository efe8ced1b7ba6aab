//! MatrixMarket and CSV writers.

use std::io::{self, Write};

use kfp_core::operator::Csr;

/// Coordinate real general format with 1-based indices.
pub fn write_matrix_market<W: Write>(m: &Csr, comment: &str, out: &mut W) -> io::Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate real general")?;
    for line in comment.lines() {
        writeln!(out, "% {line}")?;
    }
    writeln!(out, "{} {} {}", m.nrows(), m.ncols(), m.nnz())?;
    for (i, j, v) in m.triplets() {
        writeln!(out, "{} {} {:e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

/// Shortest round-tripping representation, in exponent form for very large
/// or very small magnitudes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_csv<W: Write>(header: &[&str], rows: &[Vec<String>], out: &mut W) -> io::Result<()> {
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_market_round_trip() {
        let m = Csr::from_rows(2, 3, |i, push| {
            push(i, 1.5 + i as f64);
            push(2, -0.25);
        });
        let mut buf = Vec::new();
        write_matrix_market(&m, "test matrix", &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines().filter(|l| !l.starts_with('%'));
        assert_eq!(lines.next(), Some("2 3 4"));
        let mut dense = [[0.0; 3]; 2];
        for l in lines {
            let f: Vec<&str> = l.split_whitespace().collect();
            let (i, j): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
            dense[i - 1][j - 1] = f[2].parse().unwrap();
        }
        assert_eq!(dense, [[1.5, 0.0, -0.25], [0.0, 2.5, -0.25]]);
        assert!(text.starts_with("%%MatrixMarket matrix coordinate real general\n% test matrix\n"));
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        let rows = vec![vec![num(0.5), num(1.0)], vec!["7".into(), num(1e-20)]];
        write_csv(&["a", "b"], &rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n0.5,1.0\n7,1e-20\n");
    }
}
