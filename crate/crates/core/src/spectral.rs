//! Closed-form k-space propagator of the walk step, the first- and
//! second-moment integrands, and the periodic trapezoidal quadrature that
//! yields the moment constants c1_tilde(t) and c2_tilde(t).
//!
//! The one-step operator in k-space is
//!
//! ```text
//! U_k = (1/sqrt 2) ( e^{ik}    i e^{ik}  )
//!                  ( i e^{-ik}  e^{-ik}  )
//! ```
//!
//! and its t-th power has the closed form ((a, b), (-b*, a*)) with
//! a = cos(t theta) + i sin(k)/w sin(t theta), b = i e^{ik}/w sin(t theta),
//! w = sqrt(1 + sin^2 k), theta = arccos(cos k / sqrt 2).
//!
//! Sign conventions are pinned so that `moment_via_integral` agrees with the
//! direct simulation including sign. Under that convention the first moment
//! of an arbitrary coin state is -i/(2 pi) times the integral of the
//! integrand trace, and the tabulated `c1_tilde` (defined as +i/(2 pi) times
//! the integral of c1) is negative for large t: the single-coin |0> walk
//! drifts to +x while c1_tilde(t) slopes downward.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;

use crate::entanglement::reduce;
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::walk::CoinState;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance on the imaginary residue of integrals that must be real.
const IM_TOL_CTILDE: f64 = 1e-10;
const IM_TOL_MOMENT: f64 = 1e-8;
/// A doubled grid may move a converged integral by at most this much.
const CONVERGENCE_TOL: f64 = 1e-8;

/// Step h for central finite differences of U_k^t (first derivative).
const FD_STEP_FIRST: f64 = 1e-6;
/// Step h for the five-point second-derivative stencil.
const FD_STEP_SECOND: f64 = 5e-4;

/// Geometry of the k-space spectrum at a single wavenumber.
struct Geometry {
    theta: f64,
    /// s = sin k / w = theta'; also theta'' = s'.
    s: f64,
    s1: f64,
    s2: f64,
    /// u = 1 / w.
    u: f64,
    u1: f64,
    u2: f64,
}

fn geometry(k: f64) -> Geometry {
    let (sk, ck) = k.sin_cos();
    let w = (1.0 + sk * sk).sqrt();
    let u = 1.0 / w;
    let u3 = u * u * u;
    let u5 = u3 * u * u;
    let s = sk * u;
    let s1 = ck * u3;
    let s2 = -sk * u3 - 3.0 * sk * ck * ck * u5;
    let u1 = -sk * ck * u3;
    let u2 = -(2.0 * k).cos() * u3 + 3.0 * sk * sk * ck * ck * u5;
    let theta = (ck / std::f64::consts::SQRT_2).acos();
    Geometry {
        theta,
        s,
        s1,
        s2,
        u,
        u1,
        u2,
    }
}

/// Per-(k, t) spectral data: the closed-form entries a, b of U_k^t, the phase
/// angle theta, and the moment-integrand entries c1, d1, c2, d2.
#[derive(Debug, Clone, Copy)]
pub struct SpectralKernel {
    pub k: f64,
    pub t: usize,
    pub theta: f64,
    pub a: Complex64,
    pub b: Complex64,
    pub c1: Complex64,
    pub d1: Complex64,
    pub c2: Complex64,
    pub d2: Complex64,
}

impl SpectralKernel {
    /// Evaluates the closed forms and their analytic k-derivatives.
    pub fn new(k: f64, t: usize) -> Self {
        let geo = geometry(k);
        let tf = t as f64;
        let phi = tf * geo.theta;
        let p1 = tf * geo.s;
        let p2 = tf * geo.s1;
        let (sinp, cosp) = phi.sin_cos();

        let a = Complex64::new(cosp, geo.s * sinp);
        let a1 = Complex64::new(-p1 * sinp, geo.s1 * sinp + geo.s * p1 * cosp);
        let a2 = Complex64::new(
            -p2 * sinp - p1 * p1 * cosp,
            geo.s2 * sinp + 2.0 * geo.s1 * p1 * cosp + geo.s * p2 * cosp - geo.s * p1 * p1 * sinp,
        );

        let g = geo.u * sinp;
        let g1 = geo.u1 * sinp + geo.u * p1 * cosp;
        let g2 =
            geo.u2 * sinp + 2.0 * geo.u1 * p1 * cosp + geo.u * p2 * cosp - geo.u * p1 * p1 * sinp;
        let e = Complex64::cis(k);
        let b = I * e * g;
        let b1 = I * e * (I * g + g1);
        let b2 = I * e * (Complex64::new(-g, 0.0) + 2.0 * I * g1 + g2);

        let c1 = a1 * a.conj() + b * b1.conj();
        let d1 = a.conj() * b1 - a1.conj() * b;
        let c2 = a2 * a.conj() + b * b2.conj();
        let d2 = a.conj() * b2 - a2.conj() * b;

        SpectralKernel {
            k,
            t,
            theta: geo.theta,
            a,
            b,
            c1,
            d1,
            c2,
            d2,
        }
    }

    /// |a|^2 + |b|^2 = 1 within 1e-12 and Re c1 = 0 within 1e-10.
    pub fn check_identities(&self) -> Result<()> {
        let norm = self.a.norm_sqr() + self.b.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized {
                norm_sqr: norm,
                tol: 1e-12,
            });
        }
        if self.c1.re.abs() > 1e-10 {
            return Err(Error::ImaginaryResidue {
                residue: self.c1.re,
                tol: 1e-10,
            });
        }
        Ok(())
    }
}

/// The one-step operator in k-space.
pub fn u_k(k: f64) -> Mat2 {
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let ep = Complex64::cis(k);
    let em = Complex64::cis(-k);
    Mat2::new(r * ep, r * I * ep, r * I * em, r * em)
}

/// Eigenvalues of U_k: lambda = (cos k +/- i sqrt(1 + sin^2 k)) / sqrt 2.
pub fn lambda(k: f64) -> (Complex64, Complex64) {
    let w = (1.0 + k.sin().powi(2)).sqrt();
    let half = 1.0 / std::f64::consts::SQRT_2;
    (
        Complex64::new(k.cos() * half, w * half),
        Complex64::new(k.cos() * half, -w * half),
    )
}

/// U_k^t from the closed-form entries a, b.
pub fn u_k_power(k: f64, t: usize) -> Mat2 {
    let kern = SpectralKernel::new(k, t);
    Mat2::new(kern.a, kern.b, -kern.b.conj(), kern.a.conj())
}

/// U_k^t via the similarity transform T diag(lambda1, lambda2)^t T^{-1}
/// with T columns built from c_pm = e^{ik} (sin k +/- w). Cross-validation
/// route; the closed form above is the primary implementation.
pub fn u_k_power_eigen(k: f64, t: usize) -> Mat2 {
    let w = (1.0 + k.sin().powi(2)).sqrt();
    let e = Complex64::cis(k);
    let c_plus = e * (k.sin() + w);
    let c_minus = e * (k.sin() - w);
    let (l1, l2) = lambda(k);
    let t_mat = Mat2::new(
        c_plus,
        c_minus,
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
    );
    let det = c_plus - c_minus;
    let t_inv = Mat2::new(
        Complex64::new(1.0, 0.0),
        -c_minus,
        Complex64::new(-1.0, 0.0),
        c_plus,
    )
    .scale(det.inv());
    let z = Complex64::new(0.0, 0.0);
    let diag = Mat2::new(l1.powu(t as u32), z, z, l2.powu(t as u32));
    t_mat.mul(&diag).mul(&t_inv)
}

/// U_k^t by t-fold matrix product; oracle for the closed forms.
pub fn u_k_power_product(k: f64, t: usize) -> Mat2 {
    let step = u_k(k);
    let mut acc = Mat2::identity();
    for _ in 0..t {
        acc = acc.mul(&step);
    }
    acc
}

/// Whether integrand derivatives come from the analytic closed forms or from
/// finite differences of U_k^t (retained as an independent oracle).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference,
}

fn integrand_matrix(c: Complex64, d: Complex64) -> Mat2 {
    Mat2::new(c, d, -d.conj(), c.conj())
}

/// (U_k^dagger)^t d/dk U_k^t = ((c1, d1), (-d1*, c1*)).
pub fn first_moment_integrand(k: f64, t: usize, mode: DerivativeMode) -> Mat2 {
    match mode {
        DerivativeMode::Analytic => {
            let kern = SpectralKernel::new(k, t);
            integrand_matrix(kern.c1, kern.d1)
        }
        DerivativeMode::FiniteDifference => {
            let h = FD_STEP_FIRST;
            let scale = Complex64::new(1.0 / (2.0 * h), 0.0);
            let deriv = u_k_power(k + h, t).sub(&u_k_power(k - h, t)).scale(scale);
            u_k_power(k, t).adjoint().mul(&deriv)
        }
    }
}

/// (U_k^dagger)^t d^2/dk^2 U_k^t = ((c2, d2), (-d2*, c2*)).
pub fn second_moment_integrand(k: f64, t: usize, mode: DerivativeMode) -> Mat2 {
    match mode {
        DerivativeMode::Analytic => {
            let kern = SpectralKernel::new(k, t);
            integrand_matrix(kern.c2, kern.d2)
        }
        DerivativeMode::FiniteDifference => {
            let h = FD_STEP_SECOND;
            let scale = Complex64::new(1.0 / (12.0 * h * h), 0.0);
            let f2p = u_k_power(k + 2.0 * h, t);
            let f1p = u_k_power(k + h, t).scale(Complex64::new(16.0, 0.0));
            let f0 = u_k_power(k, t).scale(Complex64::new(-30.0, 0.0));
            let f1m = u_k_power(k - h, t).scale(Complex64::new(16.0, 0.0));
            let f2m = u_k_power(k - 2.0 * h, t);
            let deriv = f1p.add(&f0).add(&f1m).sub(&f2p).sub(&f2m).scale(scale);
            u_k_power(k, t).adjoint().mul(&deriv)
        }
    }
}

/// Uniform-grid trapezoidal rule over [-pi, pi].
///
/// The integrands here are smooth and 2 pi periodic, so this rule is
/// spectrally accurate; the grid must still track the O(t) oscillation of
/// sin(t theta), hence N >= max(64, 32 t).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    pub num_points: usize,
}

impl QuadratureSpec {
    pub fn new(num_points: usize) -> Self {
        Self { num_points }
    }

    /// Smallest admissible grid for time `t`.
    pub fn auto(t: usize) -> Self {
        Self {
            num_points: 64usize.max(32 * t),
        }
    }

    pub fn validate_for(&self, t: usize) -> Result<()> {
        let required = 64usize.max(32 * t);
        if self.num_points < required {
            return Err(Error::QuadratureTooCoarse {
                num_points: self.num_points,
                required,
                t,
            });
        }
        Ok(())
    }
}

/// Periodic trapezoid: h * sum over k_j = -pi + j h, j = 0..N-1, h = 2 pi / N.
/// Kahan-compensated so that 1e4-point sums stay at machine accuracy.
pub(crate) fn integrate<F: Fn(f64) -> Complex64>(num_points: usize, f: F) -> Complex64 {
    let h = 2.0 * PI / num_points as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for j in 0..num_points {
        let k = -PI + j as f64 * h;
        let y = f(k) - comp;
        let new_sum = sum + y;
        comp = (new_sum - sum) - y;
        sum = new_sum;
    }
    sum * h
}

fn converged_integral<F: Fn(f64) -> Complex64>(
    t: usize,
    quad: &QuadratureSpec,
    f: F,
) -> Result<Complex64> {
    quad.validate_for(t)?;
    let coarse = integrate(quad.num_points, &f);
    let fine = integrate(2 * quad.num_points, &f);
    let shift = (fine - coarse).norm();
    if shift > CONVERGENCE_TOL {
        return Err(Error::QuadratureNotConverged { t, shift });
    }
    Ok(fine)
}

fn real_part_checked(v: Complex64, tol: f64) -> Result<f64> {
    if v.im.abs() > tol {
        return Err(Error::ImaginaryResidue { residue: v.im, tol });
    }
    Ok(v.re)
}

/// c1_tilde(t) = i/(2 pi) * integral of c1 over [-pi, pi].
///
/// Real by the identity c1 + c1* = 0; negative-sloped in t under this
/// crate's conventions (see the module docs).
pub fn c1_tilde(t: usize, quad: &QuadratureSpec) -> Result<f64> {
    let raw = converged_integral(t, quad, |k| SpectralKernel::new(k, t).c1)?;
    real_part_checked(I / (2.0 * PI) * raw, IM_TOL_CTILDE)
}

/// c2_tilde(t) = -1/(2 pi) * integral of c2; equals the (state-independent)
/// second moment of the walk at time t.
pub fn c2_tilde(t: usize, quad: &QuadratureSpec) -> Result<f64> {
    let raw = converged_integral(t, quad, |k| SpectralKernel::new(k, t).c2)?;
    real_part_checked(-raw / (2.0 * PI), IM_TOL_CTILDE)
}

/// d1_tilde(t) = 1/(2 pi) * integral of d1; real because the integral of
/// (d1 - d1*) vanishes by the k -> -k symmetry of the integrand.
pub fn d1_tilde(t: usize, quad: &QuadratureSpec) -> Result<f64> {
    let raw = converged_integral(t, quad, |k| SpectralKernel::new(k, t).d1)?;
    real_part_checked(raw / (2.0 * PI), IM_TOL_CTILDE)
}

/// m-th displacement moment of the walk from `coin` with the step acting on
/// `active_qubit`, evaluated in k-space.
///
/// The 2x2 integrand acts on the active qubit; spectator qubits contribute
/// identity, so the expectation is the trace of the integrand against the
/// active qubit's reduced density matrix. Agrees with the direct simulation
/// including sign.
pub fn moment_via_integral(
    coin: &CoinState,
    active_qubit: usize,
    m: u32,
    t: usize,
    quad: &QuadratureSpec,
) -> Result<f64> {
    if m != 1 && m != 2 {
        return Err(Error::BadMomentOrder { m });
    }
    if active_qubit < 1 || active_qubit > coin.num_coins() {
        return Err(Error::QubitOutOfRange {
            qubit: active_qubit,
            num_coins: coin.num_coins(),
        });
    }
    let rho = reduce(coin, &[active_qubit])?;
    let (r00, r01, r10, r11) = (
        rho.entry(0, 0),
        rho.entry(0, 1),
        rho.entry(1, 0),
        rho.entry(1, 1),
    );
    let trace_against = move |c: Complex64, d: Complex64| -> Complex64 {
        // tr(rho M) with M = ((c, d), (-d*, c*)).
        r00 * c + r11 * c.conj() + r10 * d - r01 * d.conj()
    };
    let raw = converged_integral(t, quad, |k| {
        let kern = SpectralKernel::new(k, t);
        match m {
            1 => trace_against(kern.c1, kern.d1),
            _ => trace_against(kern.c2, kern.d2),
        }
    })?;
    let prefactor = match m {
        1 => -I / (2.0 * PI),
        _ => Complex64::new(-1.0 / (2.0 * PI), 0.0),
    };
    real_part_checked(prefactor * raw, IM_TOL_MOMENT)
}

/// Memoized c1_tilde / c2_tilde values at the auto grid for each t.
///
/// Sweeps evaluate many states at the same time step; the constants depend
/// only on t. Safe for concurrent lookups and inserts of distinct keys.
#[derive(Debug, Default)]
pub struct CtildeCache {
    map: Mutex<HashMap<usize, (f64, f64)>>,
}

impl CtildeCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// (c1_tilde(t), c2_tilde(t)), computed once per t.
    pub fn get(&self, t: usize) -> Result<(f64, f64)> {
        if let Some(hit) = self.map.lock().unwrap().get(&t) {
            return Ok(*hit);
        }
        let quad = QuadratureSpec::auto(t);
        let pair = (c1_tilde(t, &quad)?, c2_tilde(t, &quad)?);
        self.map.lock().unwrap().insert(t, pair);
        Ok(pair)
    }
}
