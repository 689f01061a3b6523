//! Small dense complex linear algebra: 2x2 matrices for the coin/k-space
//! operators and a Jacobi eigensolver for Hermitian matrices up to the
//! full coin dimension (16x16 at M = 4).

use num_complex::Complex64;

/// 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub e: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub fn new(e00: Complex64, e01: Complex64, e10: Complex64, e11: Complex64) -> Self {
        Self {
            e: [[e00, e01], [e10, e11]],
        }
    }

    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new(z, z, z, z)
    }

    pub fn identity() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let o = Complex64::new(1.0, 0.0);
        Self::new(o, z, z, o)
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] = self.e[i][0] * rhs.e[0][j] + self.e[i][1] * rhs.e[1][j];
            }
        }
        out
    }

    pub fn mul_vec(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.e[0][0] * v[0] + self.e[0][1] * v[1],
            self.e[1][0] * v[0] + self.e[1][1] * v[1],
        ]
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(
            self.e[0][0].conj(),
            self.e[1][0].conj(),
            self.e[0][1].conj(),
            self.e[1][1].conj(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        let mut out = *self;
        for row in out.e.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] += rhs.e[i][j];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.e[i][j] -= rhs.e[i][j];
            }
        }
        out
    }

    pub fn det(&self) -> Complex64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1]
    }

    /// Largest entry-wise absolute difference to `rhs`.
    pub fn max_abs_diff(&self, rhs: &Mat2) -> f64 {
        let mut d = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.e[i][j] - rhs.e[i][j]).norm());
            }
        }
        d
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs_diff(&Mat2::zero())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.mul(&self.adjoint()).max_abs_diff(&Mat2::identity()) <= tol
    }
}

impl std::ops::Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        Mat2::mul(&self, &rhs)
    }
}

/// Eigenvalues of a Hermitian matrix (row-major, `dim` x `dim`), ascending.
///
/// Cyclic Jacobi with complex Givens rotations. Intended for the small
/// reduced density matrices of this crate; convergence at dim <= 16 takes
/// a handful of sweeps.
pub fn hermitian_eigenvalues(entries: &[Complex64], dim: usize) -> Vec<f64> {
    assert_eq!(entries.len(), dim * dim, "matrix shape mismatch");
    let mut a = entries.to_vec();
    let idx = |i: usize, j: usize| i * dim + j;
    let scale = a
        .iter()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..dim {
            for q in (p + 1)..dim {
                off += a[idx(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[idx(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let app = a[idx(p, p)].re;
                let aqq = a[idx(q, q)].re;
                let mag = apq.norm();
                let phase = apq / mag; // e^{i phi}
                                       // Rotation angle zeroing the (p,q) entry of the 2x2 block.
                let tau = (app - aqq) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns: [p q] <- [p q] * [[c, -s*phase], [s*conj(phase), c]]
                for r in 0..dim {
                    let arp = a[idx(r, p)];
                    let arq = a[idx(r, q)];
                    a[idx(r, p)] = arp * c + arq * s * phase.conj();
                    a[idx(r, q)] = -arp * s * phase + arq * c;
                }
                // Rows: conjugate-transpose action.
                for r in 0..dim {
                    let apr = a[idx(p, r)];
                    let aqr = a[idx(q, r)];
                    a[idx(p, r)] = apr * c + aqr * s * phase;
                    a[idx(q, r)] = -apr * s * phase.conj() + aqr * c;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..dim).map(|i| a[idx(i, i)].re).collect();
    eigs.sort_by(|x, y| x.partial_cmp(y).unwrap());
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mat2_identity_and_product() {
        let u = Mat2::new(c(0.0, 1.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.0, -1.0));
        assert_eq!(u.mul(&Mat2::identity()), u);
        assert!(Mat2::identity().is_unitary(1e-15));
    }

    #[test]
    fn adjoint_of_product() {
        let a = Mat2::new(c(1.0, 2.0), c(0.5, -0.25), c(0.0, 1.0), c(2.0, 0.0));
        let b = Mat2::new(c(0.0, -1.0), c(3.0, 0.0), c(1.0, 1.0), c(0.0, 0.5));
        let lhs = a.mul(&b).adjoint();
        let rhs = b.adjoint().mul(&a.adjoint());
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn jacobi_diagonal_matrix() {
        let d = [c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)];
        let eigs = hermitian_eigenvalues(&d, 2);
        assert!((eigs[0] + 1.0).abs() < 1e-13);
        assert!((eigs[1] - 3.0).abs() < 1e-13);
    }

    #[test]
    fn jacobi_complex_hermitian_2x2() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let m = [c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)];
        let eigs = hermitian_eigenvalues(&m, 2);
        assert!(eigs[0].abs() < 1e-13);
        assert!((eigs[1] - 2.0).abs() < 1e-13);
    }

    #[test]
    fn jacobi_preserves_trace_and_square_trace() {
        // Hermitian 4x4 with mixed complex off-diagonals.
        let mut m = vec![c(0.0, 0.0); 16];
        let vals = [
            (0, 0, c(0.5, 0.0)),
            (1, 1, c(0.2, 0.0)),
            (2, 2, c(0.1, 0.0)),
            (3, 3, c(0.2, 0.0)),
            (0, 1, c(0.1, 0.05)),
            (0, 2, c(-0.02, 0.07)),
            (1, 3, c(0.03, -0.04)),
            (2, 3, c(0.0, 0.06)),
        ];
        for (i, j, v) in vals {
            m[i * 4 + j] = v;
            if i != j {
                m[j * 4 + i] = v.conj();
            }
        }
        let tr: f64 = (0..4).map(|i| m[i * 4 + i].re).sum();
        let tr2: f64 = m.iter().map(|z| z.norm_sqr()).sum();
        let eigs = hermitian_eigenvalues(&m, 4);
        let sum: f64 = eigs.iter().sum();
        let sum2: f64 = eigs.iter().map(|x| x * x).sum();
        assert!((sum - tr).abs() < 1e-12);
        assert!((sum2 - tr2).abs() < 1e-12);
    }
}
