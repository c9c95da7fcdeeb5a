//! Colored Jones polynomials of torus knots at roots of unity, and the Alexander polynomial.

use num_complex::Complex;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::phase::{complex_sqrt, modulus, Accumulator, PhaseUnit};
use crate::scalar::Real;

/// Torus knot `T(a, b)`; `T(2, 3)` is the right-handed trefoil.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KnotParam {
    pub a: i64,
    pub b: i64,
}

impl KnotParam {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a < 1 || b < 1 {
            return Err(Error::Validation("a and b must be positive".into()));
        }
        if a.gcd(&b) != 1 {
            return Err(Error::Validation("gcd(a,b) != 1".into()));
        }
        Ok(KnotParam { a, b })
    }

    pub fn swapped(&self) -> Self {
        KnotParam {
            a: self.b,
            b: self.a,
        }
    }
}

/// Offsets `l = 2j` in `-(k-1)..=(k-1)` with `l = k+1 (mod 2)`.
pub(crate) fn half_steps(k: i64) -> impl Iterator<Item = i64> {
    (0..k).map(move |i| 2 * i - (k - 1))
}

/// `J_k(T(a,b); q)` at `q = exp(i*pi*t/d)`, with all quarter-integer powers of `q` taken
/// as powers of `exp(i*pi*t/(4d))`.
pub fn colored_jones<T: Real>(k: i64, knot: KnotParam, q: &PhaseUnit) -> Result<Complex<T>> {
    if k < 1 {
        return Err(Error::Domain(format!("colour k={k} must be positive")));
    }
    let (t, d) = (q.numer() as i128, q.denom());
    if (t * k as i128) % (2 * d as i128) == 0 {
        return Err(Error::Pole(format!(
            "q^(k/2) = q^(-k/2) at k={k}, q=exp(i*pi*{t}/{d})"
        )));
    }
    let quarter =
        |e: i128| -> Result<Complex<T>> { Ok(PhaseUnit::new(t * e, 4 * d)?.to_complex()) };
    let (a, b, k128) = (knot.a as i128, knot.b as i128, k as i128);
    let mut acc = Accumulator::new();
    for l in half_steps(k) {
        let l = l as i128;
        let base = b * l * (a * l + 2);
        let w = 2 * (a * l + 1);
        acc.add(quarter(base + w)? - quarter(base - w)?);
    }
    let den = quarter(2 * k128)? - quarter(-2 * k128)?;
    let pre = quarter(-a * b * (k128 * k128 - 1))?;
    Ok(acc.value() * pre / den)
}

/// The same polynomial evaluated at an arbitrary complex `q = s^4`.
pub fn colored_jones_at<T: Real>(k: i64, knot: KnotParam, s: &Complex<T>) -> Result<Complex<T>> {
    if k < 1 {
        return Err(Error::Domain(format!("colour k={k} must be positive")));
    }
    let pw = |e: i64| -> Complex<T> { s.powi(e as i32) };
    let den = pw(2 * k) - pw(-2 * k);
    if modulus(&den) == T::zero() {
        return Err(Error::Pole(format!("q^(k/2) = q^(-k/2) at k={k}")));
    }
    let (a, b) = (knot.a, knot.b);
    let mut acc = Accumulator::new();
    for l in half_steps(k) {
        let base = b * l * (a * l + 2);
        let w = 2 * (a * l + 1);
        acc.add(pw(base + w) - pw(base - w));
    }
    Ok(acc.value() * pw(-a * b * (k * k - 1)) / den)
}

/// `J_k(T(a,b); exp(4*pi*i/n))` through the sine-ratio form
/// `e^{-ab(k^2-1) pi i/n} sum_l e^{b l(al+2) pi i/n} sin(2(al+1)pi/n) / sin(2k pi/n)`.
pub fn jones_at_root<T: Real>(k: i64, knot: KnotParam, n: i64) -> Result<Complex<T>> {
    if k < 1 || n < 1 {
        return Err(Error::Domain(format!("need k, n >= 1, got k={k}, n={n}")));
    }
    if (2 * k) % n == 0 {
        return Err(Error::Pole(format!("sin(2k*pi/n) = 0 at k={k}, n={n}")));
    }
    let nd = n as u64;
    let (a, b) = (knot.a as i128, knot.b as i128);
    let sin_of = |t: i128| -> Result<T> { Ok(PhaseUnit::new(t, nd)?.to_complex::<T>().im) };
    let mut acc = Accumulator::new();
    for l in half_steps(k) {
        let l = l as i128;
        let z: Complex<T> = PhaseUnit::new(b * l * (a * l + 2), nd)?.to_complex();
        acc.add(z.scale(sin_of(2 * (a * l + 1))?));
    }
    let k = k as i128;
    let pre: Complex<T> = PhaseUnit::new(-a * b * (k * k - 1), nd)?.to_complex();
    Ok((acc.value() * pre).unscale(sin_of(2 * k)?))
}

/// Alexander polynomial `(t^{ab/2}-t^{-ab/2})(t^{1/2}-t^{-1/2}) / ((t^{a/2}-t^{-a/2})(t^{b/2}-t^{-b/2}))`.
/// The value does not depend on the branch of `t^{1/2}`; `t = 1` returns the limit 1.
pub fn alexander<T: Real>(knot: KnotParam, t: &Complex<T>) -> Result<Complex<T>> {
    let one = Complex::new(T::one(), T::zero());
    if *t == one {
        return Ok(one);
    }
    if modulus(t) == T::zero() {
        return Err(Error::Pole("t = 0".into()));
    }
    let s = complex_sqrt(t);
    let diff = |e: i64| -> Complex<T> { s.powi(e as i32) - s.powi(-(e as i32)) };
    let num = diff(knot.a * knot.b) * diff(1);
    let den = diff(knot.a) * diff(knot.b);
    let r = modulus(&s);
    let base = r.clone() + T::one() / r;
    let scale = (0..knot.a + knot.b).fold(T::one(), |acc, _| acc * base.clone());
    if modulus(&den) <= T::epsilon() * T::from_int(64) * scale {
        return Err(Error::Pole("Alexander denominator vanishes".into()));
    }
    Ok(num / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> KnotParam {
        KnotParam::new(2, 3).unwrap()
    }

    #[test]
    fn unit_colour_is_one() {
        let q = PhaseUnit::new(4, 7).unwrap();
        let j: Complex<f64> = colored_jones(1, KnotParam::new(3, 5).unwrap(), &q).unwrap();
        assert!((j - Complex::new(1.0, 0.0)).norm() < 1e-14);
        let j: Complex<f64> = jones_at_root(1, trefoil(), 9).unwrap();
        assert!((j - Complex::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn trefoil_two_colour_polynomial() {
        let s = Complex::new(2f64.powf(0.25), 0.0);
        let j = colored_jones_at(2, trefoil(), &s).unwrap();
        assert!((j.re - 9.0 / 16.0).abs() < 1e-14 && j.im.abs() < 1e-14);
        for (t, d) in [(1, 3), (4, 7), (2, 9), (5, 11)] {
            let q = PhaseUnit::new(t, d).unwrap();
            let j: Complex<f64> = colored_jones(2, trefoil(), &q).unwrap();
            let z: Complex<f64> = q.to_complex();
            let expected = z.powi(-1) + z.powi(-3) - z.powi(-4);
            assert!((j - expected).norm() < 1e-13, "{t}/{d}");
        }
    }

    #[test]
    fn pole_is_reported() {
        let q = PhaseUnit::new(4, 7).unwrap();
        assert!(matches!(
            colored_jones::<f64>(7, trefoil(), &q),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            jones_at_root::<f64>(7, trefoil(), 7),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn root_paths_agree_on_small_cases() {
        for (a, b, n, k) in [(2, 3, 5, 2), (3, 5, 7, 3)] {
            let knot = KnotParam::new(a, b).unwrap();
            let q = PhaseUnit::new(4, n as u64).unwrap();
            let x: Complex<f64> = colored_jones(k, knot, &q).unwrap();
            let y: Complex<f64> = jones_at_root(k, knot, n).unwrap();
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn alexander_examples() {
        let d = alexander(trefoil(), &Complex::new(2.0, 0.0)).unwrap();
        assert!((d - Complex::new(1.5, 0.0)).norm() < 1e-14);
        let one = Complex::new(1.0, 0.0);
        assert_eq!(alexander(KnotParam::new(5, 7).unwrap(), &one).unwrap(), one);
        let root = Complex::new(-1.0, 0.0);
        assert!(matches!(alexander(trefoil(), &root), Err(Error::Pole(_))));
    }
}
