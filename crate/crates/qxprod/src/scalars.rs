//! Exact scalar field for all symbolic computations.
//!
//! Every structure constant in the algebras handled by this crate is a
//! rational function of `s = q^(1/2)` with rational coefficients, so the
//! scalar field is the fraction field of Laurent polynomials in `s` over the
//! rationals.  [`QScalar`] keeps a canonical representative (reduced
//! fraction, denominator a primitive integer polynomial with nonzero
//! positive constant term), which makes equality
//! testing exact and cheap.
//!
//! The field element is only turned into a float at the boundary to the
//! numeric layer, via [`QScalar::evaluate`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Errors produced when leaving the exact world.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScalarError {
    /// Deformation parameters are only meaningful in the open interval (0, 1).
    #[error("q must be finite and in (0, 1), got {0}")]
    InvalidQ(f64),
    /// The denominator of a scalar vanishes (or nearly vanishes) at the
    /// requested point.
    #[error("scalar denominator vanishes near q = {0}")]
    NearPole(f64),
}

type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_add(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(&mut out);
    out
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    trim(&mut out);
    out
}

/// Euclidean division of polynomials over the rationals; `b` must be nonzero.
fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Poly, Poly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut rem: Poly = a.to_vec();
    trim(&mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    let lead = b.last().expect("nonzero divisor");
    while rem.len() >= b.len() {
        let k = rem.len() - b.len();
        let c = rem.last().expect("nonempty remainder") / lead;
        for (j, bc) in b.iter().enumerate() {
            let delta = bc * &c;
            rem[k + j] -= delta;
        }
        quot[k] = c;
        trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    (quot, rem)
}

/// Monic greatest common divisor; `gcd(0, 0)` is the zero polynomial.
fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = poly_divrem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for c in &mut a {
            *c = &*c / &lead;
        }
    }
    a
}

fn int_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn int_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    (a / int_gcd(a, b) * b).abs()
}

/// An element of the fraction field of Laurent polynomials in `s = q^(1/2)`
/// over the rationals, kept in canonical form.
///
/// The value is `s^num_low * (num[0] + num[1] s + ...) / (den[0] + den[1] s + ...)`.
/// Invariants: the numerator has nonzero first and last coefficients (or is
/// empty, representing zero with `num_low = 0` and `den = [1]`); the
/// denominator has a nonzero constant term, integer coprime coefficients and
/// a positive constant term; numerator and denominator share no
/// polynomial factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QScalar {
    num_low: i64,
    num: Poly,
    den: Poly,
}

impl QScalar {
    fn canonical(mut num_low: i64, mut num: Poly, mut den: Poly) -> QScalar {
        trim(&mut num);
        trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return QScalar::zero();
        }
        let low_zeros = num.iter().take_while(|c| c.is_zero()).count();
        if low_zeros > 0 {
            num.drain(..low_zeros);
            num_low += low_zeros as i64;
        }
        let den_low_zeros = den.iter().take_while(|c| c.is_zero()).count();
        if den_low_zeros > 0 {
            den.drain(..den_low_zeros);
            num_low -= den_low_zeros as i64;
        }
        let g = poly_gcd(&num, &den);
        if g.len() > 1 {
            num = poly_divrem(&num, &g).0;
            den = poly_divrem(&den, &g).0;
        }
        let mut lcm = BigInt::one();
        for c in &den {
            lcm = int_lcm(&lcm, c.denom());
        }
        let mut gcd = BigInt::zero();
        for c in &den {
            gcd = int_gcd(&gcd, &(c.numer() * &lcm / c.denom()));
        }
        let mut scale = BigRational::new(lcm, gcd);
        if den[0].is_negative() {
            scale = -scale;
        }
        for c in &mut num {
            *c = &*c * &scale;
        }
        for c in &mut den {
            *c = &*c * &scale;
        }
        QScalar { num_low, num, den }
    }

    pub fn zero() -> QScalar {
        QScalar {
            num_low: 0,
            num: Vec::new(),
            den: vec![BigRational::one()],
        }
    }

    pub fn one() -> QScalar {
        QScalar::int(1)
    }

    pub fn int(n: i64) -> QScalar {
        QScalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The rational constant `n/d`; `d` must be nonzero.
    pub fn ratio(n: i64, d: i64) -> QScalar {
        assert!(d != 0, "zero denominator");
        QScalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: BigRational) -> QScalar {
        if r.is_zero() {
            return QScalar::zero();
        }
        QScalar {
            num_low: 0,
            num: vec![r],
            den: vec![BigRational::one()],
        }
    }

    /// `q^(k/2) = s^k` for any integer `k`.
    pub fn q_half_pow(k: i64) -> QScalar {
        QScalar {
            num_low: k,
            num: vec![BigRational::one()],
            den: vec![BigRational::one()],
        }
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i64) -> QScalar {
        QScalar::q_half_pow(2 * k)
    }

    /// `λ = q - q^(-1)`, negative for q in (0, 1).
    pub fn lambda() -> QScalar {
        QScalar::q_pow(1) - QScalar::q_pow(-1)
    }

    /// `γ = (1 - q^2)^(-1)`.
    pub fn gamma() -> QScalar {
        (QScalar::one() - QScalar::q_pow(2)).inv()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self == &QScalar::one()
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> QScalar {
        assert!(!self.is_zero(), "inverse of zero scalar");
        QScalar::canonical(-self.num_low, self.den.clone(), self.num.clone())
    }

    /// Integer power, with negative exponents via the inverse.
    pub fn pow(&self, n: i64) -> QScalar {
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut out = QScalar::one();
        for _ in 0..n.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// The field automorphism `s -> s^(-1)`, i.e. `q -> q^(-1)` preserving
    /// the square root.  Used as coefficient conjugation for real-form stars
    /// that invert the deformation parameter.
    pub fn conj_s_inverse(&self) -> QScalar {
        if self.is_zero() {
            return self.clone();
        }
        let num: Poly = self.num.iter().rev().cloned().collect();
        let den: Poly = self.den.iter().rev().cloned().collect();
        let low = -(self.num_low + self.num.len() as i64 - 1) + (self.den.len() as i64 - 1);
        QScalar::canonical(low, num, den)
    }

    /// Evaluates at a concrete `q` in (0, 1) using `s = sqrt(q)`.
    pub fn evaluate(&self, q: f64) -> Result<f64, ScalarError> {
        if !q.is_finite() || q <= 0.0 || q >= 1.0 {
            return Err(ScalarError::InvalidQ(q));
        }
        let root = q.sqrt();
        let s_pow = |e: i64| -> f64 {
            if e % 2 == 0 {
                q.powi((e / 2) as i32)
            } else {
                q.powi(((e - 1) / 2) as i32) * root
            }
        };
        let mut num_val = 0.0;
        for (i, c) in self.num.iter().enumerate() {
            num_val += c.to_f64().unwrap_or(f64::NAN) * s_pow(self.num_low + i as i64);
        }
        let mut den_val = 0.0;
        let mut den_mag = 0.0;
        for (j, c) in self.den.iter().enumerate() {
            let term = c.to_f64().unwrap_or(f64::NAN) * s_pow(j as i64);
            den_val += term;
            den_mag += term.abs();
        }
        if !den_val.is_finite() || den_val.abs() <= 1e-12 * den_mag.max(1.0) {
            return Err(ScalarError::NearPole(q));
        }
        Ok(num_val / den_val)
    }
}

fn add_impl(a: &QScalar, b: &QScalar) -> QScalar {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let low = a.num_low.min(b.num_low);
    let shift = |x: &QScalar, other_den: &[BigRational]| -> Poly {
        let mut p = vec![BigRational::zero(); (x.num_low - low) as usize];
        p.extend(poly_mul(&x.num, other_den));
        p
    };
    let num = poly_add(&shift(a, &b.den), &shift(b, &a.den));
    QScalar::canonical(low, num, poly_mul(&a.den, &b.den))
}

fn mul_impl(a: &QScalar, b: &QScalar) -> QScalar {
    if a.is_zero() || b.is_zero() {
        return QScalar::zero();
    }
    QScalar::canonical(
        a.num_low + b.num_low,
        poly_mul(&a.num, &b.num),
        poly_mul(&a.den, &b.den),
    )
}

fn neg_impl(a: &QScalar) -> QScalar {
    QScalar {
        num_low: a.num_low,
        num: a.num.iter().map(|c| -c).collect(),
        den: a.den.clone(),
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait<&QScalar> for &QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &QScalar) -> QScalar {
                $impl_fn(self, rhs)
            }
        }
        impl $trait<QScalar> for &QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                $impl_fn(self, &rhs)
            }
        }
        impl $trait<&QScalar> for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: &QScalar) -> QScalar {
                $impl_fn(&self, rhs)
            }
        }
        impl $trait<QScalar> for QScalar {
            type Output = QScalar;
            fn $method(self, rhs: QScalar) -> QScalar {
                $impl_fn(&self, &rhs)
            }
        }
    };
}

fn sub_impl(a: &QScalar, b: &QScalar) -> QScalar {
    add_impl(a, &neg_impl(b))
}

fn div_impl(a: &QScalar, b: &QScalar) -> QScalar {
    mul_impl(a, &b.inv())
}

impl_binop!(Add, add, add_impl);
impl_binop!(Sub, sub, sub_impl);
impl_binop!(Mul, mul, mul_impl);
impl_binop!(Div, div, div_impl);

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        neg_impl(self)
    }
}

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        neg_impl(&self)
    }
}

fn poly_display(low: i64, p: &[BigRational]) -> String {
    let mut out = String::new();
    for (i, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = low + i as i64;
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let mag = c.abs();
        let coeff = if mag.is_one() && e != 0 {
            String::new()
        } else {
            mag.to_string()
        };
        let var = match e {
            0 => String::new(),
            1 => "s".to_string(),
            _ => format!("s^{e}"),
        };
        match (coeff.is_empty(), var.is_empty()) {
            (true, _) => out.push_str(&var),
            (false, true) => out.push_str(&coeff),
            (false, false) => {
                out.push_str(&coeff);
                out.push('*');
                out.push_str(&var);
            }
        }
    }
    out
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let num = poly_display(self.num_low, &self.num);
        if self.den.len() == 1 && self.den[0].is_one() {
            return write!(f, "{num}");
        }
        let num = if self.num.iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({num})")
        } else {
            num
        };
        let den = if self.den.len() == 1 {
            self.den[0].to_string()
        } else {
            format!("({})", poly_display(0, &self.den))
        };
        write!(f, "{num}/{den}")
    }
}

/// `λ_n = (1 - q^(2n))^(1/2)` as a float; real only for n >= 0.
pub fn lambda_n(q: f64, n: i64) -> f64 {
    (1.0 - q.powi(2 * n as i32)).sqrt()
}

/// `α_k(a) = (1 + q^(2k) a^2)^(1/2)` as a float.
pub fn alpha_k(q: f64, k: i64, a: f64) -> f64 {
    (1.0 + q.powi(2 * k as i32) * a * a).sqrt()
}

/// `β_k(a) = (1 + q^(-2k) a^(-2))^(1/2)` as a float.
pub fn beta_k(q: f64, k: i64, a: f64) -> f64 {
    (1.0 + q.powi(-2 * k as i32) / (a * a)).sqrt()
}

/// `λ = q - q^(-1)` as a float.
pub fn lambda_num(q: f64) -> f64 {
    q - 1.0 / q
}

/// `γ = (1 - q^2)^(-1)` as a float.
pub fn gamma_num(q: f64) -> f64 {
    1.0 / (1.0 - q * q)
}
