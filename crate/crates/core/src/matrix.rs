//! Dense square complex matrices — just enough structure for pencil
//! assembly, independent residual checks, and the plain-text debug dump.

use num_complex::Complex64;
use std::io::{self, Write};

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    side: usize,
    data: Vec<Complex64>, // row-major
}

impl ComplexMatrix {
    pub fn zeros(side: usize) -> Self {
        ComplexMatrix { side, data: vec![Complex64::new(0.0, 0.0); side * side] }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.side + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        self.data[row * self.side + col] = v;
    }

    /// Writes a 2×2 block with its top-left corner at (row0, col0).
    pub fn set_block2(&mut self, row0: usize, col0: usize, block: [[Complex64; 2]; 2]) {
        for (i, r) in block.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                self.set(row0 + i, col0 + j, v);
            }
        }
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.side, "matvec length mismatch");
        let mut y = vec![Complex64::new(0.0, 0.0); self.side];
        for (row, yr) in y.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (col, &xc) in x.iter().enumerate() {
                acc += self.get(row, col) * xc;
            }
            *yr = acc;
        }
        y
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Row-major text dump, one matrix row per line, each entry as a
    /// round-trippable "re imag" pair.
    pub fn write_text(&self, out: &mut impl Write) -> io::Result<()> {
        for row in 0..self.side {
            for col in 0..self.side {
                let v = self.get(row, col);
                if col > 0 {
                    write!(out, "  ")?;
                }
                write!(out, "{:e} {:e}", v.re, v.im)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.data[row * self.side + col]
    }
}
