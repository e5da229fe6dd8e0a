//! Exact rank over the rationals by fraction-free (Bareiss) elimination.

use num::{BigInt, BigRational, Integer, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Evidence for an exact rank: the pivot columns and the last pivot, which
/// is a nonzero `rank × rank` minor of the cleared integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
    pub pivot_rows: Vec<usize>,
    pub minor: String,
    pub rows_used: usize,
}

/// Multiplies a rational row by the lcm of its denominators and divides by
/// the gcd of the resulting numerators.
pub fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = row.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|v| v / &g).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Echelon {
    /// Fraction-free echelon rows (the first `rank` rows are nonzero).
    pub rows: Vec<Vec<BigInt>>,
    pub certificate: RankCertificate,
}

/// Bareiss elimination with row pivoting and skipping of pivot-free
/// columns. Every intermediate entry is a minor of the input, so each
/// division by the previous pivot is exact.
pub fn bareiss(mut m: Vec<Vec<BigInt>>, ncols: usize) -> Echelon {
    let nrows = m.len();
    let mut origin: Vec<usize> = (0..nrows).collect();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        origin.swap(r, p);
        let pivot_row = m[r].clone();
        for row in m.iter_mut().skip(r + 1) {
            let f = row[c].clone();
            for j in c + 1..ncols {
                let num = &pivot_row[c] * &row[j] - &f * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss division");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon {
        certificate: RankCertificate {
            rank: r,
            pivot_columns: pivots,
            pivot_rows: origin[..r].to_vec(),
            minor: if r == 0 { "1".into() } else { prev.to_string() },
            rows_used: nrows,
        },
        rows: m,
    }
}

/// Null space basis from the echelon form: one vector per free column,
/// with that column set to one and the other free columns to zero.
pub fn nullspace_from_echelon(e: &Echelon, ncols: usize) -> Vec<Vec<BigRational>> {
    let rank = e.certificate.rank;
    let piv = &e.certificate.pivot_columns;
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![BigRational::zero(); ncols];
            x[f] = BigRational::one();
            for k in (0..rank).rev() {
                let c = piv[k];
                let row = &e.rows[k];
                let mut s = BigRational::zero();
                for j in c + 1..ncols {
                    if !row[j].is_zero() {
                        s += BigRational::from_integer(row[j].clone()) * &x[j];
                    }
                }
                x[c] = -s / BigRational::from_integer(row[c].clone());
            }
            x
        })
        .collect()
}

pub fn to_f64_vec(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect()
}

/// Number of decimal digits of the certificate minor, for compact reports.
pub fn minor_digits(cert: &RankCertificate) -> usize {
    cert.minor.trim_start_matches('-').len()
}
