#![allow(dead_code)]

use dynwave::quotients::two_point_quotient;
use dynwave::{Grid, Nonlinearity};
use rand::Rng;

pub fn random_vec(rng: &mut impl Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-scale..=scale)).collect()
}

/// Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (dst, src) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *dst -= factor * src;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// One update of the fixed-point map, assembled densely from the
/// unmodified equations. Unknowns are the new level `U~_0..U~_K` and the
/// ghost values `U~_-1`, `U~_K+1`; the ghosts of the old level are
/// `prev_ghost`.
///
/// ```text
/// (U~ - 2c + p)/dt^2 = d2x (U~ + p)/2 - (U~ + p)/2 + (g + p)/2 - dF/d(g, p)
/// (U~_0 - 2c_0 + p_0)/dt^2 = d1x (U~ + p)_0 / 2
/// (U~_K - 2c_K + p_K)/dt^2 = -d1x (U~ + p)_K / 2
/// ```
pub fn phi_oracle(
    grid: &Grid,
    nl: &Nonlinearity,
    guess: &[f64],
    prev: &[f64],
    curr: &[f64],
    prev_ghost: (f64, f64),
) -> Vec<f64> {
    let kk = grid.intervals();
    let n = kk + 3;
    let idx = |k: isize| (k + 1) as usize;
    let p = |k: isize| match k {
        -1 => prev_ghost.0,
        k if k as usize == kk + 1 => prev_ghost.1,
        k => prev[k as usize],
    };
    let dt2 = grid.dt() * grid.dt();
    let h2 = grid.dx() * grid.dx();
    let mut a = vec![vec![0.0; n]; n];
    let mut b = vec![0.0; n];
    for k in 0..=kk as isize {
        let row = idx(k);
        let ku = k as usize;
        a[row][idx(k)] += 1.0 / dt2 + 1.0 / h2 + 0.5;
        a[row][idx(k - 1)] -= 0.5 / h2;
        a[row][idx(k + 1)] -= 0.5 / h2;
        b[row] = (2.0 * curr[ku] - prev[ku]) / dt2
            + 0.5 * (p(k + 1) - 2.0 * p(k) + p(k - 1)) / h2
            - 0.5 * prev[ku]
            + 0.5 * (guess[ku] + prev[ku])
            - two_point_quotient(nl, guess[ku], prev[ku]);
    }
    let dx = grid.dx();
    let (left, right) = (0, kk + 2);
    a[left][idx(0)] = 1.0 / dt2;
    a[left][idx(1)] = -0.25 / dx;
    a[left][idx(-1)] = 0.25 / dx;
    b[left] = (2.0 * curr[0] - prev[0]) / dt2 + 0.25 * (p(1) - p(-1)) / dx;
    let k = kk as isize;
    a[right][idx(k)] = 1.0 / dt2;
    a[right][idx(k + 1)] = 0.25 / dx;
    a[right][idx(k - 1)] = -0.25 / dx;
    b[right] = (2.0 * curr[kk] - prev[kk]) / dt2 - 0.25 * (p(k + 1) - p(k - 1)) / dx;
    dense_solve(a, b)[1..=kk + 1].to_vec()
}
