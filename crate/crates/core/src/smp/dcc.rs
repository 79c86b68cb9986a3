//! Exact deterministic communication complexity of small functions.
//!
//! A protocol tree alternates between Alice splitting the current row set
//! and Bob splitting the column set; each split costs one bit. The cost of a
//! rectangle is zero once it is monochromatic (the answer itself is not
//! charged). Rectangles are indexed by row and column bitmasks, so matrices
//! are limited to 8 × 8.

use std::collections::HashMap;

use super::FunctionTable;
use crate::error::{Error, Result};

pub const MAX_SIDE: usize = 8;

/// Convention string written next to every exact `D` value.
pub const D_CONVENTION: &str =
    "D = depth of an optimal protocol tree whose leaves are monochromatic rectangles; the output bit is not charged";

pub struct DccSolver {
    rows: usize,
    cols: usize,
    /// `matrix[r]` has bit `c` set iff `f(r, c) = 1`.
    matrix: Vec<u8>,
    memo: HashMap<(u8, u8), u32>,
}

impl DccSolver {
    /// Rectangular 0/1 matrix with at most 8 rows and 8 columns.
    pub fn new(matrix: &[Vec<bool>]) -> Result<Self> {
        let rows = matrix.len();
        let cols = matrix.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 || matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::param("table", "must be a non-empty rectangular matrix"));
        }
        if rows > MAX_SIDE || cols > MAX_SIDE {
            return Err(Error::TooLarge {
                what: "brute-force deterministic complexity (matrix side)",
                n: rows.max(cols),
                limit: MAX_SIDE,
            });
        }
        let matrix = matrix
            .iter()
            .map(|r| r.iter().enumerate().fold(0u8, |acc, (c, &v)| acc | (u8::from(v) << c)))
            .collect();
        Ok(DccSolver {
            rows,
            cols,
            matrix,
            memo: HashMap::new(),
        })
    }

    pub fn solve(&mut self) -> u32 {
        let all_rows = full_mask(self.rows);
        let all_cols = full_mask(self.cols);
        self.cost(all_rows, all_cols)
    }

    fn monochromatic(&self, rows: u8, cols: u8) -> bool {
        let mut seen_one = false;
        let mut seen_zero = false;
        for r in bits(rows) {
            let ones = self.matrix[r] & cols;
            seen_one |= ones != 0;
            seen_zero |= ones != cols;
        }
        !(seen_one && seen_zero)
    }

    fn cost(&mut self, rows: u8, cols: u8) -> u32 {
        if self.monochromatic(rows, cols) {
            return 0;
        }
        if let Some(&c) = self.memo.get(&(rows, cols)) {
            return c;
        }
        let mut best = u32::MAX;
        for part in proper_splits(rows) {
            let c = 1 + self.cost(part, cols).max(self.cost(rows & !part, cols));
            best = best.min(c);
        }
        for part in proper_splits(cols) {
            let c = 1 + self.cost(rows, part).max(self.cost(rows, cols & !part));
            best = best.min(c);
        }
        self.memo.insert((rows, cols), best);
        best
    }
}

fn full_mask(n: usize) -> u8 {
    ((1u16 << n) - 1) as u8
}

fn bits(mask: u8) -> impl Iterator<Item = usize> {
    (0..8).filter(move |i| mask >> i & 1 == 1)
}

/// Nonempty proper subsets of `mask` containing its lowest set bit, so each
/// unordered bipartition appears once.
fn proper_splits(mask: u8) -> Vec<u8> {
    let low = mask & mask.wrapping_neg();
    let rest = mask & !low;
    let mut out = Vec::new();
    let mut sub = rest;
    loop {
        let part = sub | low;
        if part != mask {
            out.push(part);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    out
}

/// `D(f)` for a function table with `n ≤ 3`.
pub fn bruteforce_deterministic_cc(table: &FunctionTable) -> Result<u32> {
    if table.input_bits() > 3 {
        return Err(Error::TooLarge {
            what: "brute-force deterministic complexity",
            n: table.input_bits(),
            limit: 3,
        });
    }
    Ok(DccSolver::new(&table.rows())?.solve())
}

/// `D` of an arbitrary rectangular 0/1 matrix of side at most 8.
pub fn deterministic_cc_matrix(matrix: &[Vec<bool>]) -> Result<u32> {
    Ok(DccSolver::new(matrix)?.solve())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smp::equality_function;

    #[test]
    fn known_values() {
        assert_eq!(bruteforce_deterministic_cc(&equality_function(1).unwrap()).unwrap(), 2);
        assert_eq!(bruteforce_deterministic_cc(&equality_function(2).unwrap()).unwrap(), 3);
        assert_eq!(bruteforce_deterministic_cc(&equality_function(3).unwrap()).unwrap(), 4);
        assert_eq!(bruteforce_deterministic_cc(&FunctionTable::constant(3, false).unwrap()).unwrap(), 0);
        assert!(bruteforce_deterministic_cc(&equality_function(4).unwrap()).is_err());
    }

    #[test]
    fn one_bit_functions() {
        // f(x, y) = x needs only Alice's bit
        let m = vec![vec![false, false], vec![true, true]];
        assert_eq!(deterministic_cc_matrix(&m).unwrap(), 1);
        let xor = vec![vec![false, true], vec![true, false]];
        assert_eq!(deterministic_cc_matrix(&xor).unwrap(), 2);
    }

    #[test]
    fn splits_enumerate_each_bipartition_once() {
        assert_eq!(proper_splits(0b111).len(), 3);
        assert_eq!(proper_splits(0b1).len(), 0);
        assert_eq!(proper_splits(0xff).len(), 127);
    }
}
