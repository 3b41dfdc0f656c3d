//! Exact nullspaces of integer matrices.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::geometry::{big_to_rat, Rational};

/// Fraction-free (Bareiss) reduction to row echelon form. Returns the pivot
/// columns. Every intermediate entry is a minor of the input, so the
/// divisions are exact and no rationals appear.
pub fn echelon_fraction_free(rows: &mut Vec<Vec<BigInt>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            for j in col + 1..cols {
                let v = &pivot_row[col] * &row[j] - &row[col] * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot_row[col].clone();
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{v : A v = 0}`. One vector per free column, with that column set
/// to 1 and the other free columns 0, then scaled so that its first nonzero
/// entry is 1.
pub fn nullspace(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<Rational>> {
    let pivots = echelon_fraction_free(&mut rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); cols];
            v[fc] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate().rev() {
                let mut acc = Rational::zero();
                for j in pc + 1..cols {
                    if !rows[r][j].is_zero() {
                        acc += big_to_rat(&rows[r][j]) * &v[j];
                    }
                }
                v[pc] = -acc / big_to_rat(&rows[r][pc]);
            }
            let lead = v.iter().find(|x| !x.is_zero()).cloned().expect("free column is 1");
            v.iter().map(|x| x / &lead).collect()
        })
        .collect()
}
