//! Field elements used by every matrix in the crate.
//!
//! Two backends exist: [`GaussRational`] (complex numbers with exact rational
//! real and imaginary parts) and [`Complex64`]. The trait also carries the
//! backend-specific rank, kernel and span routines so that generic code can
//! stay agnostic of how a rank decision is made.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub, Div};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{exact, svd, Containment, RankKernel, TolerancePolicy};
use crate::matrix::Matrix;

/// Complex number with exact rational parts.
pub type GaussRational = Complex<BigRational>;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is performed without rounding.
    const EXACT: bool;
    /// Backend tag used in family files and reports.
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    /// Exact for the rational backend: the binary value of each `f64` part is kept.
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(&self) -> Complex64;
    fn conj(&self) -> Self;
    fn modulus(&self) -> f64;
    fn is_zero(&self) -> bool;
    /// Imaginary part is exactly zero.
    fn is_real(&self) -> bool;

    /// Zero test honouring the tolerance policy of the backend.
    fn approx_zero(&self, atol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.modulus() <= atol
        }
    }

    fn approx_eq(&self, other: &Self, atol: f64) -> bool {
        (self.clone() - other.clone()).approx_zero(atol)
    }

    fn rank_and_kernel(m: &Matrix<Self>, pol: &TolerancePolicy) -> RankKernel<Self>;

    /// Independent columns spanning the column space of `m`.
    fn range_basis(m: &Matrix<Self>, pol: &TolerancePolicy) -> Matrix<Self>;

    /// Whether every column of `small` lies in the column space of `big`.
    fn containment(big: &Matrix<Self>, small: &Matrix<Self>, pol: &TolerancePolicy) -> Containment;
}

impl Scalar for GaussRational {
    const EXACT: bool = true;
    const NAME: &'static str = "rational";

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }

    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    fn from_c64(z: Complex64) -> Self {
        let conv = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        Complex::new(conv(z.re), conv(z.im))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    fn rank_and_kernel(m: &Matrix<Self>, _pol: &TolerancePolicy) -> RankKernel<Self> {
        exact::rank_and_kernel(m)
    }

    fn range_basis(m: &Matrix<Self>, _pol: &TolerancePolicy) -> Matrix<Self> {
        exact::range_basis(m)
    }

    fn containment(big: &Matrix<Self>, small: &Matrix<Self>, pol: &TolerancePolicy) -> Containment {
        exact::containment(big, small, pol)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    const NAME: &'static str = "complex64";

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_c64(z: Complex64) -> Self {
        z
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn is_real(&self) -> bool {
        self.im == 0.0
    }

    fn rank_and_kernel(m: &Matrix<Self>, pol: &TolerancePolicy) -> RankKernel<Self> {
        svd::rank_and_kernel(m, pol)
    }

    fn range_basis(m: &Matrix<Self>, pol: &TolerancePolicy) -> Matrix<Self> {
        svd::range_basis(m, pol)
    }

    fn containment(big: &Matrix<Self>, small: &Matrix<Self>, pol: &TolerancePolicy) -> Containment {
        svd::containment(big, small, pol)
    }
}

/// Build an exact real rational `num/den`.
pub fn rational(num: i64, den: i64) -> GaussRational {
    Complex::new(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        BigRational::zero(),
    )
}

/// Render an exact rational as `p/q` (or `p` when integral).
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p`, `p/q`, or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(BigRational::from_integer(n));
    }
    // decimal such as "-0.25": interpret in base ten exactly
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let r = BigRational::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// Round a float to the nearest multiple of `1/den`, exactly.
pub fn round_to_rational(x: f64, den: i64) -> BigRational {
    let scaled = (x * den as f64).round() as i64;
    BigRational::new(BigInt::from(scaled), BigInt::from(den))
}

pub(crate) fn rational_is_negative(r: &BigRational) -> bool {
    r.is_negative()
}
