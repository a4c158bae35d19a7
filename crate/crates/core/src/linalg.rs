//! Small dense eigensolvers and related kernels.
//!
//! Everything here is plain Rust on `ndarray` storage: a cyclic Jacobi
//! eigensolver for Hermitian matrices, an eigenvalue routine for normal
//! matrices built on top of it, and the matrix exponential of Hermitian
//! generators. Deterministic by construction, which the reporting layer
//! relies on.

use crate::operator::{CMat, Operator, ZERO};
use ndarray::Array2;
use num_complex::Complex64;

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
/// Returns eigenvalues in ascending order with matching eigenvector columns.
pub fn eigh(a: &CMat) -> (Vec<f64>, CMat) {
    let d = a.nrows();
    assert_eq!(d, a.ncols(), "matrix must be square");
    let mut m = a.clone();
    let mut v: CMat = Array2::eye(d);
    let scale = a.iter().fold(0.0_f64, |acc, z| acc.max(z.norm())).max(1e-300);
    let stop = 1e-15 * scale;

    for _sweep in 0..100 {
        let mut off = 0.0_f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off = off.max(m[[p, q]].norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = m[[p, q]];
                let mag = apq.norm();
                if mag <= stop * 1e-2 {
                    continue;
                }
                let phase = apq / mag;
                let app = m[[p, p]].re;
                let aqq = m[[q, q]].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Rotation columns: e_p' = c e_p - s conj(phase) e_q,
                //                   e_q' = s e_p + c conj(phase) e_q.
                let cs = Complex64::new(c, 0.0);
                let sp = phase.conj() * s;
                for i in 0..d {
                    let mip = m[[i, p]];
                    let miq = m[[i, q]];
                    m[[i, p]] = mip * cs - miq * sp;
                    m[[i, q]] = mip * s + miq * phase.conj() * c;
                }
                for j in 0..d {
                    let mpj = m[[p, j]];
                    let mqj = m[[q, j]];
                    m[[p, j]] = mpj * cs - mqj * phase * s;
                    m[[q, j]] = mpj * s + mqj * phase * c;
                }
                m[[p, q]] = ZERO;
                m[[q, p]] = ZERO;
                for i in 0..d {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = vip * cs - viq * sp;
                    v[[i, q]] = vip * s + viq * phase.conj() * c;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let diag: Vec<f64> = (0..d).map(|i| m[[i, i]].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vecs = CMat::zeros((d, d));
    for (col, &src) in order.iter().enumerate() {
        for i in 0..d {
            vecs[[i, col]] = v[[i, src]];
        }
    }
    (vals, vecs)
}

/// Eigenvalues of a normal matrix. The Hermitian part fixes the real parts;
/// the skew part is diagonalized inside each near-degenerate cluster, which
/// is exact because a commuting skew part is block diagonal across distinct
/// Hermitian eigenspaces.
pub fn eig_normal(b: &CMat) -> Vec<Complex64> {
    let d = b.nrows();
    let bdag = b.t().mapv(|z| z.conj());
    let h1 = (b + &bdag).mapv(|z| z * 0.5);
    let (mu, u) = eigh(&h1);
    let udag = u.t().mapv(|z| z.conj());
    let bt = udag.dot(b).dot(&u);

    let scale = mu.iter().fold(1.0_f64, |acc, x| acc.max(x.abs()));
    let gap = 1e-6 * scale;
    let mut out = Vec::with_capacity(d);
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && mu[end] - mu[end - 1] <= gap {
            end += 1;
        }
        let w = end - start;
        if w == 1 {
            out.push(bt[[start, start]]);
        } else {
            let mut sub = CMat::zeros((w, w));
            for i in 0..w {
                for j in 0..w {
                    sub[[i, j]] = bt[[start + i, start + j]];
                }
            }
            let subdag = sub.t().mapv(|z| z.conj());
            let h2 = (&sub - &subdag).mapv(|z| z * Complex64::new(0.0, -0.5));
            let (_nu, wv) = eigh(&h2);
            let wdag = wv.t().mapv(|z| z.conj());
            let diag = wdag.dot(&sub).dot(&wv);
            for i in 0..w {
                out.push(diag[[i, i]]);
            }
        }
        start = end;
    }
    out
}

/// Principal argument of det(U) for a unitary matrix, accumulated from the
/// eigenvalue arguments rather than the determinant product.
pub fn arg_det_unitary(b: &CMat) -> f64 {
    let total: f64 = eig_normal(b).iter().map(|z| z.arg()).sum();
    wrap_angle(total)
}

/// Reduces an angle to the principal interval (-pi, pi].
pub fn wrap_angle(x: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut y = x % tau;
    if y <= -std::f64::consts::PI {
        y += tau;
    } else if y > std::f64::consts::PI {
        y -= tau;
    }
    y
}

/// Distance between two angles on the circle.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

/// exp(-i t H) for Hermitian H, via the eigendecomposition.
pub fn expm_hermitian(h: &Operator, t: f64) -> Operator {
    let (vals, vecs) = eigh(h.matrix());
    let d = h.dim();
    let mut phases = CMat::zeros((d, d));
    for (i, lam) in vals.iter().enumerate() {
        phases[[i, i]] = Complex64::from_polar(1.0, -t * lam);
    }
    let vdag = vecs.t().mapv(|z| z.conj());
    let data = vecs.dot(&phases).dot(&vdag);
    Operator::new(h.n(), data).expect("shape preserved")
}

/// Trace distance (half the sum of singular values of the difference)
/// between two Hermitian matrices.
pub fn trace_distance(a: &CMat, b: &CMat) -> f64 {
    let diff = a - b;
    let (vals, _) = eigh(&diff);
    0.5 * vals.iter().map(|x| x.abs()).sum::<f64>()
}

/// Solves a small real linear system by Gaussian elimination with partial
/// pivoting. Panics on singular input; callers control conditioning.
pub fn solve_real(a: &Array2<f64>, b: &[f64]) -> Vec<f64> {
    let k = a.nrows();
    assert_eq!(k, a.ncols());
    assert_eq!(k, b.len());
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| m[[i, col]].abs().partial_cmp(&m[[j, col]].abs()).unwrap())
            .unwrap();
        assert!(m[[pivot, col]].abs() > 1e-300, "singular normal system");
        if pivot != col {
            for j in 0..k {
                let tmp = m[[col, j]];
                m[[col, j]] = m[[pivot, j]];
                m[[pivot, j]] = tmp;
            }
            rhs.swap(col, pivot);
        }
        for row in (col + 1)..k {
            let f = m[[row, col]] / m[[col, col]];
            for j in col..k {
                m[[row, j]] -= f * m[[col, j]];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; k];
    for col in (0..k).rev() {
        let mut acc = rhs[col];
        for j in (col + 1)..k {
            acc -= m[[col, j]] * x[j];
        }
        x[col] = acc / m[[col, col]];
    }
    x
}

/// Max-entry reconstruction residual of an eigendecomposition; test helper
/// exposed for the verification suite.
pub fn eigh_residual(a: &CMat, vals: &[f64], vecs: &CMat) -> f64 {
    let d = a.nrows();
    let mut lam = CMat::zeros((d, d));
    for (i, v) in vals.iter().enumerate() {
        lam[[i, i]] = Complex64::new(*v, 0.0);
    }
    let vdag = vecs.t().mapv(|z| z.conj());
    let rec = vecs.dot(&lam).dot(&vdag);
    (a - &rec).iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}
