//! Exact roots of unity and compensated complex summation.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Complex number over a [`Real`] backend.
pub type ComplexValue<T> = Complex<T>;

/// The root of unity `exp(i*pi*num/den)`, stored in lowest terms with `0 <= num < 2*den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PhaseUnit {
    num: u64,
    den: u64,
}

impl PhaseUnit {
    pub const ONE: PhaseUnit = PhaseUnit { num: 0, den: 1 };
    pub const MINUS_ONE: PhaseUnit = PhaseUnit { num: 1, den: 1 };

    pub fn new(t: i128, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDenominator);
        }
        let period = 2 * d as u128;
        let t = t.rem_euclid(period as i128) as u128;
        Ok(Self::reduce(t, d as u128))
    }

    /// Same as [`PhaseUnit::new`] for exponents too large for fixed width.
    pub fn from_bigint(t: &BigInt, d: &BigInt) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::InvalidDenominator);
        }
        let d_abs = d
            .magnitude()
            .to_u64()
            .ok_or_else(|| Error::Domain(format!("denominator {d} too large")))?;
        let t = if d.sign() == num_bigint::Sign::Minus {
            -t
        } else {
            t.clone()
        };
        let period = BigInt::from(2 * d_abs as u128);
        let r = t.mod_floor(&period).to_u128().expect("reduced below 2d");
        Ok(Self::reduce(r, d_abs as u128))
    }

    fn reduce(t: u128, d: u128) -> Self {
        let g = t.gcd(&d);
        PhaseUnit {
            num: (t / g) as u64,
            den: (d / g) as u64,
        }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn mul(&self, other: &PhaseUnit) -> PhaseUnit {
        let l = (self.den as u128).lcm(&(other.den as u128));
        let t =
            self.num as u128 * (l / self.den as u128) + other.num as u128 * (l / other.den as u128);
        let l64 = u64::try_from(l).expect("common denominator exceeds 64 bits");
        Self::reduce(t % (2 * l), l64 as u128)
    }

    pub fn pow(&self, e: i128) -> PhaseUnit {
        let period = 2 * self.den as i128;
        let t = match (self.num as i128).checked_mul(e) {
            Some(x) => x.rem_euclid(period),
            None => {
                let x = BigInt::from(self.num) * BigInt::from(e);
                x.mod_floor(&BigInt::from(period))
                    .to_i128()
                    .expect("reduced")
            }
        };
        Self::reduce(t as u128, self.den as u128)
    }

    pub fn pow_big(&self, e: &BigInt) -> PhaseUnit {
        let t = (BigInt::from(self.num) * e).mod_floor(&BigInt::from(2 * self.den as u128));
        Self::reduce(t.to_u128().expect("reduced"), self.den as u128)
    }

    pub fn conj(&self) -> PhaseUnit {
        Self::reduce(
            (2 * self.den as u128 - self.num as u128) % (2 * self.den as u128),
            self.den as u128,
        )
    }

    /// Numeric value. The angle is reduced exactly to `q*pi/2 + beta` with `|beta| <= pi/4`
    /// before any trigonometric evaluation.
    pub fn to_complex<T: Real>(&self) -> Complex<T> {
        let d = self.den as i128;
        let w = 4 * self.num as i128;
        let q = (w + d).div_euclid(2 * d);
        let v = w - q * 2 * d;
        let (s, c) = if v == 0 {
            (T::zero(), T::one())
        } else {
            let beta = T::pi() * T::from_i128(v).expect("int") / T::from_i128(4 * d).expect("int");
            beta.sin_cos()
        };
        match q.rem_euclid(4) {
            0 => Complex::new(c, s),
            1 => Complex::new(-s, c),
            2 => Complex::new(-c, -s),
            _ => Complex::new(s, -c),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"num": self.num, "den": self.den})
    }
}

pub fn unit_phase(t: i128, d: u64) -> Result<PhaseUnit> {
    PhaseUnit::new(t, d)
}

pub fn phase_mul(x: &PhaseUnit, y: &PhaseUnit) -> PhaseUnit {
    x.mul(y)
}

pub fn phase_pow(x: &PhaseUnit, e: i128) -> PhaseUnit {
    x.pow(e)
}

pub fn to_complex<T: Real>(x: &PhaseUnit) -> Complex<T> {
    x.to_complex()
}

/// All powers `exp(i*pi*t/den)` for `t` in `0..2*den`, so that sums whose phases share one
/// denominator cost a table lookup per term.
#[derive(Clone, Debug)]
pub struct RootTable<T> {
    den: u64,
    roots: Vec<Complex<T>>,
}

impl<T: Real> RootTable<T> {
    pub fn new(den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidDenominator);
        }
        let roots = (0..2 * den)
            .map(|t| PhaseUnit { num: t, den }.to_complex())
            .collect();
        Ok(RootTable { den, roots })
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// `exp(i*pi*t/den)` for any integer `t`.
    pub fn get(&self, t: i128) -> &Complex<T> {
        &self.roots[t.rem_euclid(2 * self.den as i128) as usize]
    }

    /// `sin(pi*t/den)`.
    pub fn sin(&self, t: i128) -> &T {
        &self.get(t).im
    }
}

pub fn modulus<T: Real>(z: &Complex<T>) -> T {
    (z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()).sqrt()
}

pub fn complex_exp<T: Real>(z: &Complex<T>) -> Complex<T> {
    let r = z.re.exp();
    let (s, c) = (z.im.sin(), z.im.cos());
    Complex::new(r.clone() * c, r * s)
}

pub fn complex_sinh<T: Real>(z: &Complex<T>) -> Complex<T> {
    let half = T::ratio(1, 2);
    (complex_exp(z) - complex_exp(&-z.clone())).scale(half)
}

/// Principal square root.
pub fn complex_sqrt<T: Real>(z: &Complex<T>) -> Complex<T> {
    let r = modulus(z);
    let two = T::from_int(2);
    let re = ((r.clone() + z.re.clone()) / two.clone()).sqrt();
    let im_mag = ((r - z.re.clone()) / two).sqrt();
    let im = if z.im < T::zero() { -im_mag } else { im_mag };
    Complex::new(re, im)
}

pub fn complex_to_json<T: Real>(z: &Complex<T>) -> Value {
    json!({"re": z.re.to_decimal(), "im": z.im.to_decimal()})
}

/// Neumaier-compensated running sum of one real component.
#[derive(Clone, Debug)]
struct Compensated<T> {
    sum: T,
    comp: T,
}

impl<T: Real> Compensated<T> {
    fn new() -> Self {
        Compensated {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    fn add(&mut self, x: T) {
        let t = self.sum.clone() + x.clone();
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp.clone() + ((self.sum.clone() - t.clone()) + x);
        } else {
            self.comp = self.comp.clone() + ((x - t.clone()) + self.sum.clone());
        }
        self.sum = t;
    }

    fn value(&self) -> T {
        self.sum.clone() + self.comp.clone()
    }
}

/// Compensated complex accumulator.
#[derive(Clone, Debug)]
pub struct Accumulator<T> {
    re: Compensated<T>,
    im: Compensated<T>,
}

impl<T: Real> Default for Accumulator<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> Accumulator<T> {
    pub fn new() -> Self {
        Accumulator {
            re: Compensated::new(),
            im: Compensated::new(),
        }
    }

    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn add_real(&mut self, x: T) {
        self.re.add(x);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

impl<T: Real> Extend<Complex<T>> for Accumulator<T> {
    fn extend<I: IntoIterator<Item = Complex<T>>>(&mut self, iter: I) {
        for z in iter {
            self.add(z);
        }
    }
}

pub fn accumulate<T: Real, I: IntoIterator<Item = Complex<T>>>(terms: I) -> Complex<T> {
    let mut acc = Accumulator::new();
    acc.extend(terms);
    acc.value()
}

/// Exact `(-1)^e`.
pub fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
