//! Eigenvalues of symmetric tridiagonal matrices: Sturm bisection for the
//! real case, implicit QL for the complex-symmetric case.

use num_complex::Complex64 as C64;

use crate::error::{Result, SgaError};

/// Number of eigenvalues strictly below `x` (LDLᵀ inertia count).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        if q == 0.0 {
            q = -tiny;
        }
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// The `k` smallest eigenvalues, ascending, each bisected to full
/// floating-point resolution.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = diag.len();
    if off.len() + 1 != n {
        return Err(SgaError::Grid("off-diagonal length must be n - 1".into()));
    }
    if k > n {
        return Err(SgaError::validation(format!("requested {k} eigenvalues of a {n}x{n} matrix")));
    }
    let (glo, ghi) = gershgorin(diag, off);
    let pad = 1e-12 * (glo.abs().max(ghi.abs()) + 1.0);
    let mut out = Vec::with_capacity(k);
    let mut lower = glo - pad;
    for j in 0..k {
        // smallest x with count(x) > j
        let (mut a, mut b) = (lower, ghi + pad);
        let mut it = 0;
        loop {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if sturm_count(diag, off, m) > j {
                b = m;
            } else {
                a = m;
            }
            it += 1;
            if it > 2000 {
                return Err(SgaError::NumericConvergence { iterations: it, detail: format!("bisection for eigenvalue {j}") });
            }
        }
        let v = 0.5 * (a + b);
        out.push(v);
        lower = a;
    }
    Ok(out)
}

/// All eigenvalues of the complex-symmetric tridiagonal matrix with
/// diagonal `diag` and sub-diagonal `off`, by implicit QL with Wilkinson
/// shifts.
pub fn complex_symmetric_eigenvalues(diag: &[C64], off: &[C64]) -> Result<Vec<C64>> {
    const MAX_ITER: usize = 60;
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(C64::new(0.0, 0.0));
    let sign_like = |r: C64, g: C64| if (g.conj() * r).re >= 0.0 { r } else { -r };
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].norm() + d[m + 1].norm();
                if e[m].norm() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(SgaError::NumericConvergence {
                    iterations: iter,
                    detail: format!("complex QL did not deflate eigenvalue {l} of {n}"),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (e[l] * 2.0);
            let mut r = (g * g + 1.0).sqrt();
            g = d[m] - d[l] + e[l] / (g + sign_like(r, g));
            let (mut s, mut c, mut p) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0));
            let mut early = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r.norm() == 0.0 {
                    d[i + 1] -= p;
                    e[m] = C64::new(0.0, 0.0);
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + c * b * 2.0;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = C64::new(0.0, 0.0);
        }
    }
    if d.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(SgaError::NumericConvergence { iterations: 0, detail: "complex QL produced non-finite values".into() });
    }
    d.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(d)
}
