//! Symmetric tridiagonal eigensolver (implicit QL with Wilkinson shifts).

use crate::error::{invalid, Error, Result};

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples `i` and `i + 1`), together with the
/// requested rows of the orthogonal eigenvector matrix.
///
/// `rows_out[r][j]` is component `rows[r]` of eigenvector `j`. Only these rows
/// are accumulated, so the cost stays `O(n²)`.
pub fn tridiagonal_eigen(
    diag: &[f64],
    off: &[f64],
    rows: &[usize],
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    if off.len() + 1 != n && !(n == 0 && off.is_empty()) {
        return Err(invalid(
            "off",
            format!(
                "expected {} entries, got {}",
                n.saturating_sub(1),
                off.len()
            ),
        ));
    }
    if let Some(&r) = rows.iter().find(|&&r| r >= n) {
        return Err(invalid(
            "rows",
            format!("row {r} out of range for dimension {n}"),
        ));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut z: Vec<Vec<f64>> = rows
        .iter()
        .map(|&r| {
            let mut v = vec![0.0; n];
            v[r] = 1.0;
            v
        })
        .collect();

    let eps = f64::EPSILON;
    let mut f = 0.0;
    // local deflation test: graded matrices keep their small eigenvalues
    let negligible = |d: &[f64], e: &[f64], m: usize, f: f64| {
        e[m].abs() <= eps * ((d[m] + f).abs() + (d[m + 1] + f).abs())
    };
    for l in 0..n {
        let mut m = l;
        while m < n - 1 && !negligible(&d, &e, m, f) {
            m += 1;
        }
        let mut iter = 0;
        if m > l {
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::NonConvergence {
                        what: "tridiagonal QL",
                        terms: iter,
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in z.iter_mut() {
                        let t = row[i + 1];
                        row[i + 1] = s * row[i] + c * t;
                        row[i] = c * row[i] - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if negligible(&d, &e, l, f) {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok((d, z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn second_difference_spectrum() {
        // tridiag(−1, 2, −1) has eigenvalues 2 − 2cos(jπ/(n+1))
        let n = 50;
        let (mut ev, z) = tridiagonal_eigen(&vec![2.0; n], &vec![-1.0; n - 1], &[0, 17]).unwrap();
        ev.sort_by(f64::total_cmp);
        for (j, v) in ev.iter().enumerate() {
            let e = 2.0 - 2.0 * ((j + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((v - e).abs() < 1e-13, "{j}: {v} vs {e}");
        }
        // rows of an orthogonal matrix are unit vectors and mutually orthogonal
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        assert!((dot(&z[0], &z[0]) - 1.0).abs() < 1e-13);
        assert!(dot(&z[0], &z[1]).abs() < 1e-13);
    }

    #[test]
    fn reconstructs_matrix_entries() {
        let d = [1.0, -2.0, 3.5, 0.25, 4.0];
        let o = [0.3, 1.1, -0.7, 2.0];
        let rows = [0, 1, 2, 3, 4];
        let (ev, z) = tridiagonal_eigen(&d, &o, &rows).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let a: f64 = (0..5).map(|k| z[i][k] * ev[k] * z[j][k]).sum();
                let e = if i == j {
                    d[i]
                } else if j == i + 1 {
                    o[i]
                } else if i == j + 1 {
                    o[j]
                } else {
                    0.0
                };
                assert!((a - e).abs() < 1e-13, "({i},{j})");
            }
        }
    }

    #[test]
    fn trivial_sizes() {
        let (ev, z) = tridiagonal_eigen(&[3.0], &[], &[0]).unwrap();
        assert_eq!(ev, vec![3.0]);
        assert_eq!(z, vec![vec![1.0]]);
        assert!(tridiagonal_eigen(&[1.0, 2.0], &[], &[]).is_err());
        assert!(tridiagonal_eigen(&[1.0, 2.0], &[0.5], &[2]).is_err());
    }
}
