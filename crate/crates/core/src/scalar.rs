//! Real scalar abstraction shared by every numeric routine.
//!
//! Two backends: hardware `f64` and [`MpFloat`], a fixed-precision binary
//! float backed by `astro-float`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

/// Real field used by the evaluators.
///
/// `PRECISION_BITS` is the significand width; anything below 53 is rejected
/// by the numeric contracts, so `f32` is intentionally not implemented.
pub trait Real:
    Num
    + Neg<Output = Self>
    + FromPrimitive
    + ToPrimitive
    + PartialOrd
    + Clone
    + fmt::Debug
    + Send
    + Sync
    + 'static
{
    const PRECISION_BITS: u32;

    fn pi() -> Self;
    fn sqrt(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn abs(&self) -> Self;
    fn is_finite(&self) -> bool;
    /// Unit roundoff 2^-PRECISION_BITS.
    fn epsilon() -> Self;
    /// Shortest decimal string that round-trips at this precision.
    fn to_decimal(&self) -> String;

    fn from_int(x: i64) -> Self {
        Self::from_i64(x).expect("integer conversion")
    }

    /// Nearest value to `num/den`.
    fn ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64")
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `(sin x, cos x)`; backends may share work between the two.
    fn sin_cos(&self) -> (Self, Self) {
        (self.sin(), self.cos())
    }
}

impl Real for f64 {
    const PRECISION_BITS: u32 = 53;

    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn epsilon() -> Self {
        f64::EPSILON / 2.0
    }
    fn to_decimal(&self) -> String {
        format!("{self:?}")
    }
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
}

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Binary float with a significand of at least `BITS` bits.
#[derive(Clone)]
pub struct MpFloat<const BITS: usize>(BigFloat);

impl<const BITS: usize> MpFloat<BITS> {
    fn wrap(x: BigFloat) -> Self {
        MpFloat(x)
    }

    pub fn inner(&self) -> &BigFloat {
        &self.0
    }
}

impl<const BITS: usize> fmt::Debug for MpFloat<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl<const BITS: usize> fmt::Display for MpFloat<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl<const BITS: usize> PartialEq for MpFloat<BITS> {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl<const BITS: usize> PartialOrd for MpFloat<BITS> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! mp_binop {
    ($tr:ident, $m:ident) => {
        impl<const BITS: usize> $tr for MpFloat<BITS> {
            type Output = Self;
            fn $m(self, rhs: Self) -> Self {
                Self::wrap(self.0.$m(&rhs.0, BITS, RM))
            }
        }
    };
}

mp_binop!(Add, add);
mp_binop!(Sub, sub);
mp_binop!(Mul, mul);
mp_binop!(Div, div);

impl<const BITS: usize> Rem for MpFloat<BITS> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        Self::wrap(self.0.rem(&rhs.0))
    }
}

impl<const BITS: usize> Neg for MpFloat<BITS> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::wrap(self.0.neg())
    }
}

impl<const BITS: usize> Zero for MpFloat<BITS> {
    fn zero() -> Self {
        Self::wrap(BigFloat::from_word(0, BITS))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl<const BITS: usize> One for MpFloat<BITS> {
    fn one() -> Self {
        Self::wrap(BigFloat::from_word(1, BITS))
    }
}

impl<const BITS: usize> Num for MpFloat<BITS> {
    type FromStrRadixErr = String;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, String> {
        if radix != 10 {
            return Err(format!("unsupported radix {radix}"));
        }
        let x = with_consts(|cc| BigFloat::parse(s, Radix::Dec, BITS, RM, cc));
        if x.is_nan() {
            Err(format!("not a number: {s:?}"))
        } else {
            Ok(Self::wrap(x))
        }
    }
}

impl<const BITS: usize> FromPrimitive for MpFloat<BITS> {
    fn from_i64(n: i64) -> Option<Self> {
        let mut x = BigFloat::from_word(n.unsigned_abs(), BITS);
        if n < 0 {
            x.inv_sign();
        }
        Some(Self::wrap(x))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(Self::wrap(BigFloat::from_word(n, BITS)))
    }
    fn from_f64(f: f64) -> Option<Self> {
        f.is_finite()
            .then(|| Self::wrap(BigFloat::from_f64(f, BITS)))
    }
}

impl<const BITS: usize> ToPrimitive for MpFloat<BITS> {
    fn to_i64(&self) -> Option<i64> {
        let f = self.to_f64()?;
        (f.fract() == 0.0 && f.abs() < 9.2e18).then_some(f as i64)
    }
    fn to_u64(&self) -> Option<u64> {
        let f = self.to_f64()?;
        (f.fract() == 0.0 && (0.0..1.8e19).contains(&f)).then_some(f as u64)
    }
    fn to_f64(&self) -> Option<f64> {
        if self.0.is_zero() {
            return Some(0.0);
        }
        let (words, _, sign, exp, _) = self.0.as_raw_parts()?;
        // Mantissa is normalized with the top bit of the last word set; value = 0.m * 2^exp.
        let top = *words.last()?;
        let next = if words.len() > 1 {
            words[words.len() - 2]
        } else {
            0
        };
        let hi = top as f64 * 2f64.powi(exp - 64);
        let lo = next as f64 * 2f64.powi(exp - 128);
        let v = hi + lo;
        Some(if sign == Sign::Neg { -v } else { v })
    }
}

impl<const BITS: usize> Real for MpFloat<BITS> {
    const PRECISION_BITS: u32 = BITS as u32;

    fn pi() -> Self {
        Self::wrap(with_consts(|cc| cc.pi(BITS, RM)))
    }
    fn sqrt(&self) -> Self {
        Self::wrap(self.0.sqrt(BITS, RM))
    }
    fn sin(&self) -> Self {
        Self::wrap(with_consts(|cc| self.0.sin(BITS, RM, cc)))
    }
    fn cos(&self) -> Self {
        Self::wrap(with_consts(|cc| self.0.cos(BITS, RM, cc)))
    }
    fn exp(&self) -> Self {
        Self::wrap(with_consts(|cc| self.0.exp(BITS, RM, cc)))
    }
    fn ln(&self) -> Self {
        Self::wrap(with_consts(|cc| self.0.ln(BITS, RM, cc)))
    }
    fn abs(&self) -> Self {
        Self::wrap(self.0.abs())
    }
    fn is_finite(&self) -> bool {
        !(self.0.is_nan() || self.0.is_inf())
    }
    fn epsilon() -> Self {
        let mut e = Self::one();
        e.0.set_exponent(1 - BITS as i32);
        e
    }
    fn to_decimal(&self) -> String {
        if self.0.is_zero() {
            return "0".into();
        }
        let digits = (BITS as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1;
        let s =
            with_consts(|cc| self.0.format(Radix::Dec, RM, cc)).unwrap_or_else(|_| "NaN".into());
        trim_decimal(&s, digits)
    }
    fn sin_cos(&self) -> (Self, Self) {
        // Callers reduce to |x| <= pi/4, where cos is well conditioned as sqrt(1 - sin^2).
        let s = self.sin();
        let quarter = Self::pi() / Self::from_int(4);
        if self.abs() <= quarter {
            let c = (Self::one() - s.clone() * s.clone()).sqrt();
            (s, c)
        } else {
            (s, self.cos())
        }
    }
}

/// Cuts an astro-float decimal rendering ("1.2345e+3") to `digits` significant digits.
fn trim_decimal(s: &str, digits: usize) -> String {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let neg = mant.starts_with('-');
    let body = mant.trim_start_matches('-');
    let mut out = String::new();
    let mut count = 0;
    for ch in body.chars() {
        if ch.is_ascii_digit() {
            if count == digits {
                break;
            }
            count += 1;
        }
        out.push(ch);
    }
    if out.contains('.') {
        while out.ends_with('0') {
            out.pop();
        }
        if out.ends_with('.') {
            out.pop();
        }
    }
    let exp = match exp.trim_start_matches(['e', 'E']).parse::<i64>() {
        Ok(0) | Err(_) => String::new(),
        Ok(e) => format!("e{e}"),
    };
    format!("{}{}{}", if neg { "-" } else { "" }, out, exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = MpFloat<150>;

    #[test]
    fn mp_roundtrips_through_f64() {
        for x in [1.5, -0.3, 1e-20, 6.02e23, 0.0] {
            assert_eq!(M::from_f64_lossy(x).to_f64_lossy(), x);
        }
    }

    #[test]
    fn mp_pi_and_trig() {
        let pi = M::pi();
        assert!((pi.to_f64_lossy() - std::f64::consts::PI).abs() < 1e-16);
        let s = (pi / M::from_int(6)).sin();
        let err = (s - M::ratio(1, 2)).abs();
        assert!(err < M::from_f64_lossy(1e-44));
    }

    #[test]
    fn mp_decimal_string_parses_back() {
        let x = M::ratio(1, 3);
        let y = M::from_str_radix(&x.to_decimal(), 10).unwrap();
        assert!((x - y).abs() < M::from_f64_lossy(1e-44));
        assert_eq!(M::from_int(-7).to_decimal(), "-7");
    }

    #[test]
    fn epsilon_is_unit_roundoff() {
        let e = M::epsilon().to_f64_lossy();
        assert!((e - 2f64.powi(-150)).abs() < 1e-60);
        assert_eq!(<f64 as Real>::epsilon(), 2f64.powi(-53));
    }
}
