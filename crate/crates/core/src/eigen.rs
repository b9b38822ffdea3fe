//! Dense symmetric eigensolver: Householder reduction to tridiagonal form
//! followed by implicit-shift QL iteration, eigenvalues only.
//!
//! This is the classical pair of kernels for the full symmetric eigenvalue
//! problem.  Eigenvector accumulation is deliberately omitted: the
//! distribution series and the tail bounds consume only the spectrum, and
//! skipping the transformation product roughly halves the work per
//! Householder step and removes the O(n^2) inner loop from every QL rotation.

use crate::error::{Error, Result};

/// Maximum implicit-shift sweeps allowed per eigenvalue before reporting
/// non-convergence.  Convergence is normally reached in well under ten.
const MAX_QL_SWEEPS: usize = 50;

/// Eigenvalues of a dense symmetric matrix, in ascending order.
///
/// `matrix` is the full row-major `n x n` array (both triangles populated);
/// it is consumed as scratch space.  Fails with
/// [`Error::EigenNonConvergence`] if a QL sweep limit is exceeded — the error
/// carries the eigenvalue index, sweep count, and matrix dimension.
pub fn symmetric_eigenvalues(mut matrix: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    if n == 0 || matrix.len() != n * n {
        return Err(Error::Dimension(format!(
            "expected a row-major n x n matrix with n >= 1, got n = {n}, len = {}",
            matrix.len()
        )));
    }
    let mut diag = vec![0.0_f64; n];
    let mut off = vec![0.0_f64; n];
    tridiagonalize(&mut matrix, n, &mut diag, &mut off);
    ql_implicit_shift(&mut diag, &mut off, n)?;
    diag.sort_unstable_by(|a, b| a.partial_cmp(b).expect("eigenvalues are never NaN"));
    Ok(diag)
}

/// Householder reduction of a symmetric matrix to tridiagonal form
/// (eigenvalues-only variant: the orthogonal transformation is not
/// accumulated).  On exit `diag` holds the tridiagonal diagonal and
/// `off[1..]` the subdiagonal (`off[0]` is zero).
fn tridiagonalize(a: &mut [f64], n: usize, diag: &mut [f64], off: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a[i * n + k].abs();
            }
            if scale == 0.0 {
                // Row already reduced; skip the reflection.
                off[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                off[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    // g_acc = (A u)_j using the stored symmetric lower triangle.
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g_acc += a[k * n + j] * a[i * n + k];
                    }
                    off[j] = g_acc / h;
                    f_acc += off[j] * a[i * n + j];
                }
                // Rank-two update A <- A - u p^T - p u^T with p = A u / h - (u^T A u / 2h^2) u.
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = off[j] - hh * f;
                    off[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * off[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            off[i] = a[i * n + l];
        }
    }
    off[0] = 0.0;
    for i in 0..n {
        diag[i] = a[i * n + i];
    }
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix
/// (`diag`, subdiagonal in `off[1..]`).  On success `diag` holds the
/// eigenvalues in unspecified order.
fn ql_implicit_shift(diag: &mut [f64], off: &mut [f64], n: usize) -> Result<()> {
    // Renumber the subdiagonal so off[i] couples diag[i] and diag[i+1].
    for i in 1..n {
        off[i - 1] = off[i];
    }
    off[n - 1] = 0.0;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // Look for a negligible subdiagonal element to split the problem.
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break; // diag[l] has converged.
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::EigenNonConvergence {
                    index: l,
                    iterations: MAX_QL_SWEEPS,
                    dimension: n,
                });
            }
            // Form the implicit Wilkinson-like shift.
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow_restart = false;
            for i in (l..m).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    // Rotation annihilated prematurely; restart the sweep.
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    underflow_restart = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow_restart {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(got: &[f64], expect: &[f64], tol: f64) {
        assert_eq!(got.len(), expect.len());
        for (g, e) in got.iter().zip(expect) {
            assert!(
                (g - e).abs() <= tol * e.abs().max(1.0),
                "eigenvalue {g} vs expected {e} (tol {tol})\n got: {got:?}\n exp: {expect:?}"
            );
        }
    }

    #[test]
    fn two_by_two_closed_form() {
        // [[2,1],[1,2]] has eigenvalues {1, 3}.
        let eig = symmetric_eigenvalues(vec![2.0, 1.0, 1.0, 2.0], 2).unwrap();
        assert_close(&eig, &[1.0, 3.0], 1e-14);
    }

    #[test]
    fn diagonal_and_identity() {
        let eig = symmetric_eigenvalues(vec![1.0, 0.0, 0.0, 1.0], 2).unwrap();
        assert_close(&eig, &[1.0, 1.0], 1e-15);
        let eig =
            symmetric_eigenvalues(vec![5.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 7.5], 3).unwrap();
        assert_close(&eig, &[-2.0, 5.0, 7.5], 1e-15);
        let eig = symmetric_eigenvalues(vec![42.0], 1).unwrap();
        assert_close(&eig, &[42.0], 0.0);
    }

    #[test]
    fn tridiagonal_toeplitz_analytic_spectrum() {
        // The n x n tridiagonal Toeplitz matrix with diagonal a and
        // off-diagonal b has eigenvalues a + 2 b cos(k pi / (n + 1)).
        for n in [3usize, 8, 17, 40] {
            let (a, b) = (2.0, -1.0);
            let mut m = vec![0.0; n * n];
            for i in 0..n {
                m[i * n + i] = a;
                if i + 1 < n {
                    m[i * n + i + 1] = b;
                    m[(i + 1) * n + i] = b;
                }
            }
            let mut expect: Vec<f64> = (1..=n)
                .map(|k| a + 2.0 * b * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
                .collect();
            expect.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
            let eig = symmetric_eigenvalues(m, n).unwrap();
            assert_close(&eig, &expect, 1e-12);
        }
    }

    #[test]
    fn frozen_fractional_increment_covariance_spectrum() {
        // 4 x 4 symmetric Toeplitz with first row
        // [1, sigma_1(1), sigma_1(2), sigma_1(3)] for D = 1/2, H = 0.7.
        // Eigenvalues from mpmath.eigsy at 50 digits.
        let h = 1.4_f64; // 2H
        let c = |j: f64| 0.5 * ((j + 1.0).powf(h) - 2.0 * j.powf(h) + (j - 1.0).abs().powf(h));
        let row = [1.0, c(1.0), c(2.0), c(3.0)];
        let n = 4;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = row[i.abs_diff(j)];
            }
        }
        let expect = [
            0.6102893880206606132711,
            0.7172440370210104716434,
            0.9240292589951333342558,
            1.74843731596319558083,
        ];
        let eig = symmetric_eigenvalues(m, n).unwrap();
        assert_close(&eig, &expect, 1e-13);
    }

    #[test]
    fn agrees_with_library_solver_on_toeplitz_family() {
        // Independent oracle: nalgebra's symmetric eigensolver over a family
        // of banded and dense Toeplitz matrices of varying size.
        for n in [2usize, 5, 12, 33, 64] {
            for (kind, gen) in [
                ("banded", 0usize),
                ("slow-decay", 1usize),
                ("alternating", 2usize),
            ] {
                let row: Vec<f64> = (0..n)
                    .map(|j| match gen {
                        0 => {
                            if j < 3 {
                                (3 - j) as f64
                            } else {
                                0.0
                            }
                        }
                        1 => 1.0 / (1.0 + j as f64),
                        _ => {
                            if j == 0 {
                                2.0
                            } else {
                                (-0.8_f64).powi(j as i32) / j as f64
                            }
                        }
                    })
                    .collect();
                let mut m = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        m[i * n + j] = row[i.abs_diff(j)];
                    }
                }
                let dm = nalgebra::DMatrix::from_row_slice(n, n, &m);
                let mut expect: Vec<f64> =
                    dm.symmetric_eigen().eigenvalues.iter().copied().collect();
                expect.sort_unstable_by(|x, y| x.partial_cmp(y).unwrap());
                let eig = symmetric_eigenvalues(m, n).unwrap();
                assert_close(&eig, &expect, 1e-11);
                let _ = kind;
            }
        }
    }

    #[test]
    fn trace_and_frobenius_preserved() {
        // Eigenvalue sums must match matrix invariants: sum = trace,
        // sum of squares = Frobenius norm squared.
        let n = 24;
        let row: Vec<f64> = (0..n).map(|j| if j == 0 { 4.0 } else { 1.0 / (j * j) as f64 }).collect();
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = row[i.abs_diff(j)];
            }
        }
        let trace: f64 = (0..n).map(|i| m[i * n + i]).sum();
        let frob2: f64 = m.iter().map(|x| x * x).sum();
        let eig = symmetric_eigenvalues(m, n).unwrap();
        let s1: f64 = eig.iter().sum();
        let s2: f64 = eig.iter().map(|x| x * x).sum();
        assert!((s1 - trace).abs() < 1e-12 * trace.abs());
        assert!((s2 - frob2).abs() < 1e-12 * frob2);
    }

    #[test]
    fn invalid_dimension_rejected() {
        assert!(symmetric_eigenvalues(vec![], 0).is_err());
        assert!(symmetric_eigenvalues(vec![1.0, 2.0], 2).is_err());
    }
}
