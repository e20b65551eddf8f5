//! Damped Newton iteration for small square systems with a
//! finite-difference Jacobian.

pub(crate) struct NewtonOutcome {
    pub x: [f64; 3],
    /// Max-norm of the residual at `x`.
    pub residual: f64,
}

fn max_norm(v: &[f64; 3]) -> f64 {
    v.iter().fold(0.0, |m: f64, x| m.max(x.abs()))
}

/// Solves `J d = -r` by Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], r: [f64; 3]) -> Option<[f64; 3]> {
    let mut b = [-r[0], -r[1], -r[2]];
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (x, p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in row + 1..3 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Runs damped Newton from `start`. `residual` returns `None` where the
/// parametrization is invalid; such trial points are rejected by the line
/// search.
pub(crate) fn solve<F>(residual: F, start: [f64; 3], tol: f64, max_iter: usize) -> Option<NewtonOutcome>
where
    F: Fn(&[f64; 3]) -> Option<[f64; 3]>,
{
    let mut x = start;
    let mut r = residual(&x)?;
    let mut norm = max_norm(&r);
    for _ in 0..max_iter {
        if norm < tol {
            break;
        }
        let mut jac = [[0.0; 3]; 3];
        for k in 0..3 {
            let h = 1e-7 * x[k].abs().max(1.0);
            let mut xp = x;
            let mut xm = x;
            xp[k] += h;
            xm[k] -= h;
            let (rp, rm) = (residual(&xp)?, residual(&xm)?);
            for i in 0..3 {
                jac[i][k] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let step = solve3(jac, r)?;
        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda > 1e-6 {
            let trial = [
                x[0] + lambda * step[0],
                x[1] + lambda * step[1],
                x[2] + lambda * step[2],
            ];
            if let Some(rt) = residual(&trial) {
                let nt = max_norm(&rt);
                if nt < norm {
                    x = trial;
                    r = rt;
                    norm = nt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Some(NewtonOutcome { x, residual: norm })
}
