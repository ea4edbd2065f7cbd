//! Matrix functions on 3×3 real matrices: principal logarithm, square root,
//! symmetric eigenvalues and Cartan projection.

use super::{CartanVec, Mat3};
use crate::{Error, Result};

/// Principal square root by the Denman–Beavers iteration.
pub fn sqrtm(a: &Mat3) -> Result<Mat3> {
    let mut y = *a;
    let mut z = Mat3::identity();
    for _ in 0..100 {
        let yi = y.try_inverse().ok_or_else(|| Error::LogUndefined("singular iterate".into()))?;
        let zi = z.try_inverse().ok_or_else(|| Error::LogUndefined("singular iterate".into()))?;
        let y1 = (y + zi) * 0.5;
        let z1 = (z + yi) * 0.5;
        let done = (y1 - y).norm() <= 1e-15 * y1.norm();
        y = y1;
        z = z1;
        if done {
            return Ok(y);
        }
    }
    Err(Error::LogUndefined("square root iteration did not converge".into()))
}

/// Principal logarithm by inverse scaling and squaring.
///
/// Fails when an eigenvalue lies on the closed negative real axis.
pub fn logm(a: &Mat3) -> Result<Mat3> {
    let scale = a.norm();
    if !scale.is_finite() || scale == 0.0 {
        return Err(Error::LogUndefined("zero or non-finite matrix".into()));
    }
    for l in a.complex_eigenvalues().iter() {
        if l.norm() <= 1e-14 * scale {
            return Err(Error::LogUndefined("singular matrix".into()));
        }
        if l.re < 0.0 && l.im.abs() <= 1e-12 * scale {
            return Err(Error::LogUndefined(format!("eigenvalue {} on the negative real axis", l.re)));
        }
    }
    let id = Mat3::identity();
    let mut y = *a;
    let mut k = 0;
    while (y - id).norm() > 0.25 {
        y = sqrtm(&y)?;
        k += 1;
        if k > 64 {
            return Err(Error::LogUndefined("scaling did not reach the identity".into()));
        }
    }
    // log y = 2 atanh(w), w = (y - I)(y + I)^{-1}, a series in odd powers of w.
    let w = (y - id) * (y + id).try_inverse().ok_or_else(|| Error::LogUndefined("y + I singular".into()))?;
    let w2 = w * w;
    let mut term = w;
    let mut sum = w;
    for n in 1..60 {
        term *= w2;
        let add = term / (2 * n + 1) as f64;
        sum += add;
        if add.norm() <= 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    Ok(sum * 2.0 * (1u64 << k) as f64)
}

/// Eigenvalues of a symmetric 3×3 matrix in descending order (trigonometric closed form).
pub fn sym3_eigenvalues(s: &Mat3) -> [f64; 3] {
    let p1 = s[(0, 1)].powi(2) + s[(0, 2)].powi(2) + s[(1, 2)].powi(2);
    let q = s.trace() / 3.0;
    let d = [s[(0, 0)] - q, s[(1, 1)] - q, s[(2, 2)] - q];
    let p2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2] + 2.0 * p1;
    if p2 <= 1e-300 {
        return [q; 3];
    }
    let p = (p2 / 6.0).sqrt();
    let b = (s - Mat3::identity() * q) / p;
    let r = (b.determinant() / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    [e1, 3.0 * q - e1 - e3, e3]
}

/// Cartan coordinates: `H` in the positive chamber with `g ∈ K exp(H) K`,
/// computed from the singular values of `g` (trace removed, so `g` may be any
/// matrix of positive determinant up to scale).
pub fn cartan_projection(g: &Mat3) -> Result<CartanVec> {
    let d = g.determinant();
    let gi = g.try_inverse().filter(|_| d > 0.0).ok_or_else(|| Error::Decomposition("no Cartan projection for this matrix".into()))?;
    // The largest eigenvalue of the closed form is accurate; the smallest is taken from the inverse.
    let h1 = 0.5 * sym3_eigenvalues(&(g * g.transpose()))[0].ln();
    let h3 = -0.5 * sym3_eigenvalues(&(gi.transpose() * gi))[0].ln();
    Ok(CartanVec::project([h1, d.ln() - h1 - h3, h3]))
}

/// Ratio of extreme singular values.
pub fn condition_number(g: &Mat3) -> f64 {
    match g.try_inverse() {
        Some(gi) => (sym3_eigenvalues(&(g * g.transpose()))[0] * sym3_eigenvalues(&(gi.transpose() * gi))[0]).sqrt(),
        None => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::random_traceless;

    #[test]
    fn log_inverts_exp() {
        let mut rng = crate::rng::stream(3, "logm");
        for _ in 0..200 {
            let x = random_traceless(&mut rng, 0.8);
            let l = logm(&x.exp()).unwrap();
            assert!((l - x).norm() < 1e-12 * (1.0 + x.norm()), "{}", (l - x).norm());
        }
    }

    #[test]
    fn log_of_rotation_by_pi_fails() {
        let r = Mat3::from_diagonal(&[-1.0, -1.0, 1.0].into());
        assert!(matches!(logm(&r), Err(Error::LogUndefined(_))));
    }

    #[test]
    fn log_of_diagonal() {
        let d = Mat3::from_diagonal(&[2.0, 0.5, 1.0].into());
        let l = logm(&d).unwrap();
        assert!((l[(0, 0)] - 2f64.ln()).abs() < 1e-14);
        assert!((l[(1, 1)] - 0.5f64.ln()).abs() < 1e-14);
        assert!(l[(2, 2)].abs() < 1e-14);
    }

    #[test]
    fn symmetric_eigenvalues_match_jacobi() {
        let mut rng = crate::rng::stream(4, "eig");
        for _ in 0..200 {
            let x = random_traceless(&mut rng, 1.0);
            let s = x * x.transpose();
            let mut e: Vec<f64> = s.symmetric_eigenvalues().iter().cloned().collect();
            e.sort_by(|a, b| b.total_cmp(a));
            let f = sym3_eigenvalues(&s);
            for i in 0..3 {
                assert!((e[i] - f[i]).abs() < 1e-10 * (1.0 + e[0]));
            }
        }
    }

    #[test]
    fn cartan_projection_of_kak() {
        let mut rng = crate::rng::stream(5, "cartan");
        for _ in 0..50 {
            let k1 = crate::lie::RotationElement::random(&mut rng);
            let k2 = crate::lie::RotationElement::random(&mut rng);
            let h = crate::lie::random_cartan(&mut rng, 1.5).dominant();
            let g = k1.matrix() * h.exp() * k2.matrix();
            let c = cartan_projection(&g).unwrap();
            assert!(c.sub(&h).norm() < 1e-9, "{:?} {:?}", c, h);
        }
    }
}
