//! Integer primitives: surgery parameters, residues, Jacobi symbols, quadratic Gauss sums,
//! continued fractions and the Seifert coefficients of the surgered manifold.

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::phase::{Accumulator, PhaseUnit};
use crate::scalar::Real;

/// Validated surgery parameters: torus knot `T(a, b)` with `b` odd, surgery slope `p > ab`,
/// evaluation level `n` (odd, at least 3), and the canonical `(c, d)` with `ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SurgerySpec {
    pub a: i64,
    pub b: i64,
    pub p: i64,
    pub n: i64,
    pub c: i64,
    pub d: i64,
}

impl SurgerySpec {
    /// Validates the parameters. If `b` is even the pair is swapped so that `b` is odd.
    pub fn new(a: i64, b: i64, p: i64, n: i64) -> Result<Self> {
        let invalid = |m: &str| Err(Error::Validation(m.to_string()));
        if a < 2 || b < 2 {
            return invalid("a and b must be at least 2");
        }
        if a.gcd(&b) != 1 {
            return invalid("gcd(a,b) != 1");
        }
        let (a, b) = if b % 2 == 0 { (b, a) } else { (a, b) };
        let ab = a
            .checked_mul(b)
            .ok_or_else(|| Error::Validation("a*b overflows".into()))?;
        if p <= ab {
            return invalid("p must exceed ab");
        }
        if p.gcd(&ab) != 1 {
            return invalid("gcd(p,ab) != 1");
        }
        if n % 2 == 0 {
            return invalid("n must be odd");
        }
        if n < 3 {
            return invalid("n must be at least 3");
        }
        let (c, d) = canonical_cd(a, b)?;
        Ok(SurgerySpec { a, b, p, n, c, d })
    }

    /// Same surgery evaluated at another level.
    pub fn with_n(&self, n: i64) -> Result<Self> {
        Self::new(self.a, self.b, self.p, n)
    }

    /// Replaces `(c, d)` by another solution of `ad - bc = 1`.
    pub fn with_cd(&self, c: i64, d: i64) -> Result<Self> {
        if self.a * d - self.b * c != 1 {
            return Err(Error::Validation("ad - bc != 1".into()));
        }
        Ok(SurgerySpec { c, d, ..*self })
    }

    pub fn ab(&self) -> i64 {
        self.a * self.b
    }

    /// `p - ab`, the Euler-number shift of the third exceptional fibre.
    pub fn excess(&self) -> i64 {
        self.p - self.a * self.b
    }

    pub fn to_json(&self) -> Value {
        json!({"a": self.a, "b": self.b, "p": self.p, "n": self.n})
    }
}

/// `(c, d)` with `ad - bc = 1`, `d = a^{-1} mod b` in `[0, b)`.
pub fn canonical_cd(a: i64, b: i64) -> Result<(i64, i64)> {
    if a <= 0 || b <= 0 {
        return Err(Error::Validation("a and b must be positive".into()));
    }
    let e = a.extended_gcd(&b);
    if e.gcd != 1 {
        return Err(Error::Validation("gcd(a,b) != 1".into()));
    }
    if b == 1 {
        return Ok((a - 1, 1));
    }
    let d = e.x.rem_euclid(b);
    Ok(((a * d - 1) / b, d))
}

/// Representative of `x mod p` in `[0, p)`.
pub fn bracket_mod(x: i64, p: i64) -> Result<i64> {
    if p < 1 {
        return Err(Error::InvalidModulus(p));
    }
    Ok(x.rem_euclid(p))
}

/// Jacobi symbol `(c / n)` for odd positive `n`.
pub fn jacobi(c: i64, n: i64) -> Result<i8> {
    if n < 1 || n % 2 == 0 {
        return Err(Error::InvalidModulus(n));
    }
    let mut a = c.rem_euclid(n);
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// `sum_{l=0}^{n-1} zeta^{l^2}` with `zeta = exp(i*pi*q)`.
pub fn gauss_sum<T: Real>(n: u64, q: &BigRational) -> Complex<T> {
    let mut acc = Accumulator::new();
    for l in 0..n {
        let t = q.numer() * BigInt::from(l) * BigInt::from(l);
        let z = PhaseUnit::from_bigint(&t, q.denom()).expect("nonzero denominator");
        acc.add(z.to_complex());
    }
    acc.value()
}

/// Both sides of the Gauss-sum reciprocity law
/// `d^{-1/2} sum_{k=1}^{d} e^{(c/d)(k+w)^2 pi i} = e^{pi i/4} c^{-1/2} sum_{l=1}^{c} e^{(-(d/c) l^2 + 2lw) pi i}`,
/// valid when `cd + 2cw` is an even integer.
pub fn reciprocity_check<T: Real>(
    c: i64,
    d: i64,
    w: &BigRational,
) -> Result<(Complex<T>, Complex<T>)> {
    if c < 1 || d < 1 {
        return Err(Error::Precondition("c and d must be positive".into()));
    }
    let (u, v) = (w.numer().clone(), w.denom().clone());
    let (cb, db) = (BigInt::from(c), BigInt::from(d));
    // cd + 2cu/v in 2Z  <=>  2v | cdv + 2cu
    let cleared = &cb * &db * &v + BigInt::from(2) * &cb * &u;
    if !cleared.is_multiple_of(&(BigInt::from(2) * &v)) {
        return Err(Error::Precondition(format!(
            "cd + 2cw is not an even integer for c={c}, d={d}, w={w}"
        )));
    }
    let mut lhs = Accumulator::<T>::new();
    for k in 1..=d {
        let s = BigInt::from(k) * &v + &u;
        let t = &cb * &s * &s;
        let den = &db * &v * &v;
        lhs.add(PhaseUnit::from_bigint(&t, &den)?.to_complex());
    }
    let mut rhs = Accumulator::<T>::new();
    for l in 1..=c {
        let lb = BigInt::from(l);
        let t = -(&db * &lb * &lb * &v) + BigInt::from(2) * &lb * &u * &cb;
        let den = &cb * &v;
        rhs.add(PhaseUnit::from_bigint(&t, &den)?.to_complex());
    }
    let eighth: Complex<T> = PhaseUnit::new(1, 4)?.to_complex();
    let lhs = lhs.value().unscale(T::from_int(d).sqrt());
    let rhs = (rhs.value() * eighth).unscale(T::from_int(c).sqrt());
    Ok((lhs, rhs))
}

/// Euclidean algorithm `r_{i-1} = q_i r_i + r_{i+1}` started from `r_0 = b`, `r_1 = a`.
/// `remainders` runs `r_0..=r_k` with `r_k = 1`, and the last step is `r_{k-1} = q_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EuclidChain {
    pub quotients: Vec<i64>,
    pub remainders: Vec<i64>,
}

impl EuclidChain {
    pub fn len(&self) -> usize {
        self.quotients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.quotients.is_empty()
    }
}

pub fn euclid_chain(a: i64, b: i64) -> Result<EuclidChain> {
    if !(1 <= a && a < b) {
        return Err(Error::Precondition(format!(
            "need b > a >= 1, got a={a}, b={b}"
        )));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::Validation("gcd(a,b) != 1".into()));
    }
    let mut remainders = vec![b, a];
    let mut quotients = Vec::new();
    loop {
        let (prev, cur) = (
            remainders[remainders.len() - 2],
            remainders[remainders.len() - 1],
        );
        let (q, r) = prev.div_rem(&cur);
        quotients.push(q);
        if r == 0 {
            break;
        }
        remainders.push(r);
    }
    Ok(EuclidChain {
        quotients,
        remainders,
    })
}

/// `m_0 + 1/(m_1 + 1/(... + 1/m_k))`.
pub fn continued_fraction_eval(qs: &[i64]) -> Result<BigRational> {
    let (last, rest) = qs
        .split_last()
        .ok_or_else(|| Error::Empty("continued fraction".into()))?;
    let mut x = BigRational::from_integer((*last).into());
    for q in rest.iter().rev() {
        if x.is_zero() {
            return Err(Error::Pole("continued fraction tail vanishes".into()));
        }
        x = BigRational::from_integer((*q).into()) + x.recip();
    }
    Ok(x)
}

/// Seifert invariants `S(r1, r2, r3)` of the surgered manifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertData {
    pub r1: BigRational,
    pub r2: BigRational,
    pub r3: BigRational,
}

impl SeifertData {
    pub fn to_json(&self) -> Value {
        json!({"r1": rational_to_json(&self.r1), "r2": rational_to_json(&self.r2), "r3": rational_to_json(&self.r3)})
    }
}

/// Intermediate data of the Seifert computation, kept for inspection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertWitness {
    pub chain: EuclidChain,
    /// `M(q_k) ... M(q_1)` with `M(q) = [[q, 1], [1, 0]]`.
    pub product: [[i64; 2]; 2],
    pub c: i64,
    pub d: i64,
    /// `p - sum_{j<k} r_j^2 q_j - r_{k-1}`.
    pub telescoped: i64,
}

/// Runs the Euclidean surgery chain for `b > a >= 1` and checks its identities.
pub fn seifert_witness(a: i64, b: i64, p: i64) -> Result<SeifertWitness> {
    let chain = euclid_chain(a, b)?;
    let k = chain.len();
    let mut m = [[1i64, 0], [0, 1]];
    for &q in &chain.quotients {
        m = [
            [q * m[0][0] + m[1][0], q * m[0][1] + m[1][1]],
            [m[0][0], m[0][1]],
        ];
    }
    let [[s1, t1], [u1, v1]] = m;
    if (s1, t1) != (b, a) {
        return Err(Error::Consistency(format!(
            "first row ({s1},{t1}) != (b,a) = ({b},{a})"
        )));
    }
    let parity = if k % 2 == 0 { 1 } else { -1 };
    if b * v1 - a * u1 != parity {
        return Err(Error::Consistency(format!(
            "b*v1 - a*u1 = {} != (-1)^{k}",
            b * v1 - a * u1
        )));
    }
    let (c, d) = if k % 2 == 0 { (-v1, -u1) } else { (v1, u1) };
    if a * d - b * c != 1 {
        return Err(Error::Consistency(format!(
            "ad - bc = {} != 1",
            a * d - b * c
        )));
    }
    let r = &chain.remainders;
    let squares: i64 = (1..k).map(|j| r[j] * r[j] * chain.quotients[j - 1]).sum();
    let telescoped = p - squares - r[k - 1];
    if telescoped != p - a * b {
        return Err(Error::Consistency(format!(
            "telescoped {telescoped} != p - ab = {}",
            p - a * b
        )));
    }
    Ok(SeifertWitness {
        chain,
        product: m,
        c,
        d,
        telescoped,
    })
}

/// Seifert coefficients for an arbitrary coprime pair (either parity, either order); the
/// smaller of `a, b` fills the first slot.
pub fn seifert_data_for(a: i64, b: i64, p: i64) -> Result<SeifertData> {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let w = seifert_witness(lo, hi, p)?;
    if w.c == 0 || w.d == 0 {
        return Err(Error::Degenerate(format!(
            "T({lo},{hi}) has a trivial exceptional fibre"
        )));
    }
    Ok(SeifertData {
        r1: BigRational::new((-lo).into(), w.c.into()),
        r2: BigRational::new(hi.into(), w.d.into()),
        r3: BigRational::from_integer(w.telescoped.into()),
    })
}

pub fn seifert_data(spec: &SurgerySpec) -> Result<SeifertData> {
    seifert_data_for(spec.a, spec.b, spec.p)
}

pub fn rational_to_json(x: &BigRational) -> Value {
    json!({"num": x.numer().to_string(), "den": x.denom().to_string()})
}

/// `"num/den"` rendering used in CSV cells.
pub fn rational_to_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// `|x|` as an exact rational, used in tolerance-free comparisons.
pub fn rational_abs(x: &BigRational) -> BigRational {
    if x.is_negative() {
        -x.clone()
    } else {
        x.clone()
    }
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn is_integer(x: &BigRational) -> bool {
    x.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation_messages() {
        let msg = |r: Result<SurgerySpec>| r.unwrap_err().to_string();
        assert_eq!(msg(SurgerySpec::new(2, 4, 9, 5)), "gcd(a,b) != 1");
        assert_eq!(msg(SurgerySpec::new(2, 3, 7, 4)), "n must be odd");
        assert_eq!(msg(SurgerySpec::new(3, 5, 18, 5)), "gcd(p,ab) != 1");
        assert_eq!(msg(SurgerySpec::new(2, 3, 5, 5)), "p must exceed ab");
        assert_eq!(msg(SurgerySpec::new(2, 3, 7, 1)), "n must be at least 3");
    }

    #[test]
    fn even_b_is_swapped() {
        let s = SurgerySpec::new(3, 4, 17, 5).unwrap();
        assert_eq!((s.a, s.b), (4, 3));
        assert_eq!(s.a * s.d - s.b * s.c, 1);
    }

    #[test]
    fn canonical_cd_examples() {
        assert_eq!(canonical_cd(2, 3).unwrap(), (1, 2));
        assert_eq!(canonical_cd(3, 5).unwrap(), (1, 2));
        assert_eq!(canonical_cd(1, 1).unwrap(), (0, 1));
        assert!(canonical_cd(4, 6).is_err());
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket_mod(-3, 5).unwrap(), 2);
        assert_eq!(bracket_mod(7, 5).unwrap(), 2);
        assert_eq!(bracket_mod(0, 5).unwrap(), 0);
        assert_eq!(bracket_mod(1, 0), Err(Error::InvalidModulus(0)));
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 3).unwrap(), -1);
        assert_eq!(jacobi(2, 7).unwrap(), 1);
        assert_eq!(jacobi(3, 9).unwrap(), 0);
        assert_eq!(jacobi(-1, 7).unwrap(), -1);
        assert!(jacobi(3, 8).is_err());
    }

    #[test]
    fn euclid_examples() {
        assert_eq!(euclid_chain(2, 3).unwrap().quotients, vec![1, 2]);
        assert_eq!(euclid_chain(3, 5).unwrap().quotients, vec![1, 1, 2]);
        assert_eq!(euclid_chain(1, 2).unwrap().quotients, vec![2]);
        assert!(euclid_chain(2, 4).is_err());
    }

    #[test]
    fn continued_fraction_examples() {
        assert_eq!(continued_fraction_eval(&[1, 2]).unwrap(), rational(3, 2));
        assert_eq!(continued_fraction_eval(&[1, 1, 2]).unwrap(), rational(5, 3));
        assert_eq!(continued_fraction_eval(&[7]).unwrap(), rational(7, 1));
        assert!(continued_fraction_eval(&[]).is_err());
    }

    #[test]
    fn seifert_trefoil() {
        let w = seifert_witness(2, 3, 7).unwrap();
        assert_eq!(w.product, [[3, 2], [1, 1]]);
        assert_eq!((w.c, w.d), (-1, -1));
        let s = seifert_data(&SurgerySpec::new(2, 3, 7, 3).unwrap()).unwrap();
        assert_eq!(
            (s.r1, s.r2, s.r3),
            (rational(2, 1), rational(-3, 1), rational(1, 1))
        );
        let s = seifert_data(&SurgerySpec::new(3, 5, 19, 3).unwrap()).unwrap();
        assert_eq!(s.r3, rational(4, 1));
    }

    #[test]
    fn seifert_json_shape() {
        let s = seifert_data_for(2, 3, 7).unwrap();
        assert_eq!(s.to_json()["r2"], json!({"num": "-3", "den": "1"}));
    }

    #[test]
    fn reciprocity_trivial_case() {
        let (l, r) = reciprocity_check::<f64>(2, 1, &rational(0, 1)).unwrap();
        assert!((l - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!((r - Complex::new(1.0, 0.0)).norm() < 1e-15);
        assert!(reciprocity_check::<f64>(1, 1, &rational(0, 1)).is_err());
    }
}
