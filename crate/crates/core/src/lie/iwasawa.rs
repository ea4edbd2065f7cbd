//! Iwasawa coordinates `g = n · exp(A) · k`, computed by a triangular-orthogonal
//! factorization acting on the rows of `g` from the bottom.

use super::{condition_number, CartanVec, GroupElement, Mat3, RotationElement};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IwasawaCoords {
    /// Strictly upper triangular `N` with `n = exp(N)`.
    pub n: Mat3,
    pub a: CartanVec,
    pub k: RotationElement,
}

impl IwasawaCoords {
    pub fn unipotent(&self) -> Mat3 {
        Mat3::identity() + self.n + self.n * self.n * 0.5
    }

    pub fn reassemble(&self) -> Mat3 {
        self.unipotent() * self.a.exp() * self.k.matrix()
    }
}

fn check_conditioning(g: &Mat3) -> Result<()> {
    let d = g.determinant();
    if !(d > 0.0) {
        return Err(Error::Decomposition(format!("determinant {d} is not positive")));
    }
    if !(condition_number(g) <= 1e12) {
        return Err(Error::Decomposition("condition number exceeds 1e12".into()));
    }
    Ok(())
}

/// Upper triangular `R` with positive diagonal and rotation `Q` with `g = R Q`.
fn rq(g: &Mat3) -> (Mat3, Mat3) {
    let p = Mat3::new(0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0);
    let qr = (p * g).transpose().qr();
    let mut r = p * qr.r().transpose() * p;
    let mut q = p * qr.q().transpose();
    for i in 0..3 {
        if r[(i, i)] < 0.0 {
            for j in 0..3 {
                r[(j, i)] = -r[(j, i)];
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    (r, q)
}

/// Iwasawa coordinates of any matrix of positive determinant; the `A`-part has its trace removed.
pub fn iwasawa_of(g: &Mat3) -> Result<IwasawaCoords> {
    check_conditioning(g)?;
    let (r, q) = rq(g);
    let d = r.diagonal();
    let n1 = r * Mat3::from_diagonal(&d.map(|x| 1.0 / x)) - Mat3::identity();
    let mut n = n1 - n1 * n1 * 0.5;
    for i in 0..3 {
        for j in 0..=i {
            n[(i, j)] = 0.0;
        }
    }
    Ok(IwasawaCoords { n, a: CartanVec::project([d[0].ln(), d[1].ln(), d[2].ln()]), k: RotationElement::new(q)? })
}

pub fn iwasawa(g: &GroupElement) -> Result<IwasawaCoords> {
    iwasawa_of(g.matrix())
}

/// `k(g)` alone.
pub fn k_part(g: &Mat3) -> Result<RotationElement> {
    Ok(iwasawa_of(g)?.k)
}

/// `A(g)` from row norms: `|r3|² = e^{2A3}` and `|r2 × r3|² = e^{2A2 + 2A3}`.
pub fn iwasawa_a(g: &Mat3) -> CartanVec {
    let r2 = g.row(1).transpose();
    let r3 = g.row(2).transpose();
    let d3 = r3.norm_squared();
    let d23 = r2.cross(&r3).norm_squared();
    let a3 = 0.5 * d3.ln();
    let a2 = 0.5 * (d23 / d3).ln();
    let a1 = g.determinant().abs().ln() - a2 - a3;
    CartanVec::project([a1, a2, a3])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{m_elements, random_traceless};

    #[test]
    fn identity_and_diagonal() {
        let c = iwasawa(&GroupElement::identity()).unwrap();
        assert!(c.n.norm() < 1e-15 && c.a.norm() < 1e-15);
        assert!((c.k.matrix() - Mat3::identity()).norm() < 1e-15);
        let h = CartanVec::new([1.0, 0.0, -1.0]).unwrap();
        let c = iwasawa_of(&h.exp()).unwrap();
        assert!(c.n.norm() < 1e-14 && c.a.sub(&h).norm() < 1e-14);
        assert!((c.k.matrix() - Mat3::identity()).norm() < 1e-14);
    }

    #[test]
    fn reassembly_and_fast_a() {
        let mut rng = crate::rng::stream(11, "iwasawa");
        for _ in 0..300 {
            let g = random_traceless(&mut rng, 1.0).exp();
            let c = iwasawa_of(&g).unwrap();
            assert!((c.reassemble() - g).norm() < 1e-10);
            assert!(c.a.sub(&iwasawa_a(&g)).norm() < 1e-12);
            for i in 0..3 {
                for j in 0..=i {
                    assert_eq!(c.n[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn a_part_is_left_m_invariant() {
        let mut rng = crate::rng::stream(12, "iwasawa-m");
        for _ in 0..50 {
            let g = random_traceless(&mut rng, 1.0).exp();
            for m in m_elements() {
                assert!(iwasawa_a(&(m * g)).sub(&iwasawa_a(&g)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_singular_and_ill_conditioned() {
        assert!(iwasawa_of(&Mat3::zeros()).is_err());
        let g = Mat3::from_diagonal(&[1e7, 1.0, 1e-7].into());
        assert!(matches!(iwasawa_of(&g), Err(Error::Decomposition(_))));
        let neg = Mat3::from_diagonal(&[-1.0, 1.0, 1.0].into());
        assert!(iwasawa_of(&neg).is_err());
    }
}
