//! Exact rank of integer matrices by fraction-free (Bareiss) elimination.
//!
//! Elimination runs in `i128` with checked arithmetic and restarts with
//! arbitrary-precision integers if any intermediate value overflows.

use num_bigint::BigInt;
use num_traits::Zero;

/// Rank over Q of a dense integer matrix given as rows.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    match rank_i128(m) {
        Some(r) => r,
        None => rank_big(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()),
    }
}

fn rank_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut prev: i128 = 1;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot) = (r..nrows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pivot);
        let pv = m[r][c];
        for i in r + 1..nrows {
            let lead = m[i][c];
            for j in c + 1..ncols {
                let num = pv.checked_mul(m[i][j])?.checked_sub(lead.checked_mul(m[r][j])?)?;
                m[i][j] = num / prev;
            }
            m[i][c] = 0;
        }
        prev = pv;
        r += 1;
    }
    Some(r)
}

fn rank_big(mut m: Vec<Vec<BigInt>>) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pivot) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pivot);
        let pv = m[r][c].clone();
        for i in r + 1..nrows {
            let lead = m[i][c].clone();
            for j in c + 1..ncols {
                let num = &pv * &m[i][j] - &lead * &m[r][j];
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = pv;
        r += 1;
    }
    r
}
