//! Invariants attached to representations of the surgered manifold: Chern-Simons values,
//! Reidemeister torsions, the signed amplitudes entering the expansion, and the
//! SU(2) / SU(1,1) classification of irreducible labels.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::indexsets::{enumerate_h, gamma, in_h, IrrepLabel, Sign};
use crate::jones::{alexander, KnotParam};
use crate::numtheory::{rational_to_json, rational_to_string, SurgerySpec};
use crate::phase::{modulus, PhaseUnit};
use crate::scalar::Real;
use crate::F150;

/// A rational reduced into `[0, modulus)`, with modulus 1 or 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMod {
    value: BigRational,
    modulus: u8,
}

impl RationalMod {
    pub fn new(x: BigRational, modulus: u8) -> Self {
        assert!(modulus == 1 || modulus == 2, "modulus must be 1 or 2");
        let m = BigRational::from_integer(modulus.into());
        let q = (&x / &m).floor();
        RationalMod {
            value: x - q * m,
            modulus,
        }
    }

    pub fn mod1(x: BigRational) -> Self {
        Self::new(x, 1)
    }

    pub fn mod2(x: BigRational) -> Self {
        Self::new(x, 2)
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn modulus(&self) -> u8 {
        self.modulus
    }

    /// Class modulo 1 of a value tracked modulo 2.
    pub fn to_mod1(&self) -> RationalMod {
        Self::mod1(self.value.clone())
    }

    /// `exp(n * pi * i * value)` for an odd integer `n`, reduced exactly.
    pub fn phase(&self, n: i64) -> PhaseUnit {
        assert!(
            self.modulus == 2 || n % 2 == 0,
            "mod-1 class does not determine exp(n pi i x) for odd n"
        );
        PhaseUnit::from_bigint(&(self.value.numer() * BigInt::from(n)), self.value.denom())
            .expect("nonzero")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"value": rational_to_json(&self.value), "modulus": self.modulus})
    }
}

impl std::fmt::Display for RationalMod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&rational_to_string(&self.value))
    }
}

/// Torsion magnitude. The overall sign of the torsion is not determined, so only the
/// magnitude is carried.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsionValue<T> {
    pub magnitude: T,
    pub sign_ambiguous: bool,
}

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// `sin(pi*t/d)` with exact argument reduction.
fn sin_pi<T: Real>(t: i64, d: i64) -> T {
    PhaseUnit::new(t as i128, d as u64)
        .expect("positive denominator")
        .to_complex::<T>()
        .im
}

fn cos_pi<T: Real>(t: i64, d: i64) -> T {
    PhaseUnit::new(t as i128, d as u64)
        .expect("positive denominator")
        .to_complex::<T>()
        .re
}

fn check_abelian_index(l: i64, spec: &SurgerySpec) -> Result<()> {
    if !(0 < l && l < spec.p) {
        return Err(Error::Domain(format!(
            "abelian index l={l} outside 0 < l < {}",
            spec.p
        )));
    }
    if (2 * l) % spec.p == 0 {
        return Err(Error::Domain(format!("p divides 2l for l={l}")));
    }
    Ok(())
}

/// Chern-Simons value `-l^2/p` of the `l`-th abelian representation, modulo 1.
pub fn cs_abel(l: i64, spec: &SurgerySpec) -> Result<RationalMod> {
    check_abelian_index(l, spec)?;
    Ok(RationalMod::mod1(q(-l * l, spec.p)))
}

/// `(-1)^l 4 sin(2al pi/p) sin(2bl pi/p) sin(2l pi/p) / (sqrt(p) sin(2abl pi/p))`.
pub fn abel_amplitude<T: Real>(l: i64, spec: &SurgerySpec) -> Result<T> {
    check_abelian_index(l, spec)?;
    let p = spec.p;
    let num =
        sin_pi::<T>(2 * spec.a * l, p) * sin_pi::<T>(2 * spec.b * l, p) * sin_pi::<T>(2 * l, p);
    let v = T::from_int(4) * num / (T::from_int(p).sqrt() * sin_pi::<T>(2 * spec.ab() * l, p));
    Ok(if l % 2 == 0 { v } else { -v })
}

/// `p sin^2(2abl pi/p) / (16 sin^2(2al pi/p) sin^2(2bl pi/p) sin^2(2l pi/p))`.
pub fn torsion_abel<T: Real>(l: i64, spec: &SurgerySpec) -> Result<TorsionValue<T>> {
    check_abelian_index(l, spec)?;
    let p = spec.p;
    let sq = |x: T| x.clone() * x;
    let num = T::from_int(p) * sq(sin_pi(2 * spec.ab() * l, p));
    let den = T::from_int(16)
        * sq(sin_pi(2 * spec.a * l, p))
        * sq(sin_pi(2 * spec.b * l, p))
        * sq(sin_pi(2 * l, p));
    Ok(TorsionValue {
        magnitude: num / den,
        sign_ambiguous: true,
    })
}

/// The abelian torsion assembled from the Alexander polynomial:
/// `|Delta(e^{4l pi i/p}) / (2 sinh(2l pi i/p))|^2 * p / |4 cos^2(2l pi/p) - 4|`.
pub fn torsion_abel_via_alexander<T: Real>(l: i64, spec: &SurgerySpec) -> Result<T> {
    check_abelian_index(l, spec)?;
    let p = spec.p;
    let t: Complex<T> = PhaseUnit::new(4 * l as i128, p as u64)?.to_complex();
    let delta = alexander(KnotParam::new(spec.a, spec.b)?, &t)?;
    let w: Complex<T> = PhaseUnit::new(2 * l as i128, p as u64)?.to_complex();
    let two_sinh = w.clone() - w.inv();
    let ratio = modulus(&(delta / two_sinh));
    let c = w.re;
    let tail = (T::from_int(4) * c.clone() * c - T::from_int(4)).abs();
    Ok(ratio.clone() * ratio * T::from_int(p) / tail)
}

fn check_label_ranges(label: &IrrepLabel, spec: &SurgerySpec) -> Result<()> {
    let IrrepLabel { h, k, l } = *label;
    if 0 < h && h < spec.excess() && 0 < k && k < spec.a && 0 < l && l < spec.b {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "({h},{k},{l}) outside 0<h<{}, 0<k<{}, 0<l<{}",
            spec.excess(),
            spec.a,
            spec.b
        )))
    }
}

/// `-h^2/(4(p-ab)) - (adl - bck)^2/(4ab)` modulo 1. Accepts any triple in the label box, so
/// reflected labels (which need not satisfy the parity condition) can be evaluated too.
pub fn cs_irr(label: &IrrepLabel, spec: &SurgerySpec) -> Result<RationalMod> {
    check_label_ranges(label, spec)?;
    let IrrepLabel { h, k, l } = *label;
    let x = spec.a * spec.d * l - spec.b * spec.c * k;
    Ok(RationalMod::mod1(
        q(-h * h, 4 * spec.excess()) - q(x * x, 4 * spec.ab()),
    ))
}

/// `ab(p-ab) / (64 sin^2(k pi/a) sin^2(l pi/b) sin^2(h pi/(p-ab)))`.
pub fn torsion_irr<T: Real>(label: &IrrepLabel, spec: &SurgerySpec) -> Result<TorsionValue<T>> {
    check_label_ranges(label, spec)?;
    let IrrepLabel { h, k, l } = *label;
    let sq = |x: T| x.clone() * x;
    let den = T::from_int(64)
        * sq(sin_pi(k, spec.a))
        * sq(sin_pi(l, spec.b))
        * sq(sin_pi(h, spec.excess()));
    Ok(TorsionValue {
        magnitude: T::from_int(spec.ab() * spec.excess()) / den,
        sign_ambiguous: true,
    })
}

/// `Gamma_sign(k, l)` or `ab - Gamma_sign(k, l)`, whichever makes `m + ab + h` even.
fn effective_gamma(sign: Sign, label: &IrrepLabel, spec: &SurgerySpec) -> Result<i64> {
    if !in_h(label, spec) {
        return Err(Error::Domain(format!("{:?} is not in H", label.tuple())));
    }
    let g = gamma(sign, label.k, label.l, spec)?;
    Ok(if (g + spec.ab() + label.h) % 2 == 0 {
        g
    } else {
        spec.ab() - g
    })
}

/// Chern-Simons coefficient of the `sign` branch, modulo 2.
pub fn cs_pm_irr(sign: Sign, label: &IrrepLabel, spec: &SurgerySpec) -> Result<RationalMod> {
    let m = effective_gamma(sign, label, spec)?;
    let g = spec.excess() - label.h;
    Ok(RationalMod::mod2(
        q(-g * g, 4 * spec.excess()) - q(m * m, 4 * spec.ab()),
    ))
}

/// Signed amplitude `(-1)^m 8 sin(m pi/a) sin(m pi/b) sin(g pi/(p-ab)) / sqrt(ab(p-ab))`
/// with `g = p-ab-h` and `m` the effective branch value.
pub fn t_pm_irr<T: Real>(sign: Sign, label: &IrrepLabel, spec: &SurgerySpec) -> Result<T> {
    let m = effective_gamma(sign, label, spec)?;
    let g = spec.excess() - label.h;
    let v = T::from_int(8)
        * sin_pi::<T>(m, spec.a)
        * sin_pi::<T>(m, spec.b)
        * sin_pi::<T>(g, spec.excess())
        / T::from_int(spec.ab() * spec.excess()).sqrt();
    Ok(if m % 2 == 0 { v } else { -v })
}

/// `S_0 = 1`, `S_1 = x`, `S_{j+1} = x S_j - S_{j-1}`.
pub fn chebyshev_s<T: Real>(n: usize, x: &Complex<T>) -> Complex<T> {
    let mut prev = Complex::new(T::one(), T::zero());
    if n == 0 {
        return prev;
    }
    let mut cur = x.clone();
    for _ in 1..n {
        let next = x.clone() * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RepClass {
    SU2,
    SU11,
}

impl RepClass {
    pub fn name(self) -> &'static str {
        match self {
            RepClass::SU2 => "SU2",
            RepClass::SU11 => "SU11",
        }
    }
}

/// Band around zero in which the classifying product is treated as undecidable.
pub const CLASSIFY_DEGENERATE_BAND: f64 = 1e-12;

/// The product `(cos(h pi/(p-ab)) - cos((adl+bck) pi/ab)) (cos(h pi/(p-ab)) - cos((adl-bck) pi/ab))`.
pub fn classification_product<T: Real>(label: &IrrepLabel, spec: &SurgerySpec) -> T {
    let IrrepLabel { h, k, l } = *label;
    let (adl, bck) = (spec.a * spec.d * l, spec.b * spec.c * k);
    let ch = cos_pi::<T>(h, spec.excess());
    (ch.clone() - cos_pi::<T>(adl + bck, spec.ab())) * (ch - cos_pi::<T>(adl - bck, spec.ab()))
}

/// Positive product: conjugate into SU(2); negative: into SU(1,1).
pub fn classify_rep(label: &IrrepLabel, spec: &SurgerySpec) -> Result<RepClass> {
    if !in_h(label, spec) {
        return Err(Error::Domain(format!("{:?} is not in H", label.tuple())));
    }
    let prod = classification_product::<F150>(label, spec);
    let band = F150::from_f64_lossy(CLASSIFY_DEGENERATE_BAND);
    if prod.abs() < band {
        return Err(Error::Degenerate(format!(
            "classifying product vanishes at {:?}",
            label.tuple()
        )));
    }
    Ok(if prod > F150::zero() {
        RepClass::SU2
    } else {
        RepClass::SU11
    })
}

/// One row of the per-label invariant table.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantRow<T> {
    pub label: IrrepLabel,
    pub class: RepClass,
    pub cs_plus: RationalMod,
    pub cs_minus: RationalMod,
    pub t_plus: T,
    pub t_minus: T,
}

pub fn invariant_table<T: Real>(spec: &SurgerySpec) -> Result<Vec<InvariantRow<T>>> {
    enumerate_h(spec)
        .into_iter()
        .map(|label| {
            Ok(InvariantRow {
                label,
                class: classify_rep(&label, spec)?,
                cs_plus: cs_pm_irr(Sign::Plus, &label, spec)?,
                cs_minus: cs_pm_irr(Sign::Minus, &label, spec)?,
                t_plus: t_pm_irr(Sign::Plus, &label, spec)?,
                t_minus: t_pm_irr(Sign::Minus, &label, spec)?,
            })
        })
        .collect()
}

pub const INVARIANT_TABLE_HEADER: &str = "h,k,l,class,CS_plus,CS_minus,T_plus,T_minus";

pub fn invariant_table_csv<T: Real>(rows: &[InvariantRow<T>]) -> String {
    let mut out = format!("{INVARIANT_TABLE_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.label.h,
            r.label.k,
            r.label.l,
            r.class.name(),
            r.cs_plus,
            r.cs_minus,
            r.t_plus.to_decimal(),
            r.t_minus.to_decimal()
        ));
    }
    out
}

/// Exact comparison `x = y (mod modulus)` for raw rationals.
pub fn congruent(x: &BigRational, y: &BigRational, modulus: u8) -> bool {
    let diff = (x - y) / BigRational::from_integer(modulus.into());
    diff.is_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(a: i64, b: i64, p: i64) -> SurgerySpec {
        SurgerySpec::new(a, b, p, 3).unwrap()
    }

    #[test]
    fn abelian_cs_examples() {
        assert_eq!(cs_abel(1, &spec(2, 3, 7)).unwrap().value(), &q(6, 7));
        assert_eq!(cs_abel(2, &spec(2, 3, 13)).unwrap().value(), &q(9, 13));
        let s = spec(2, 3, 13);
        assert_eq!(cs_abel(3, &s).unwrap(), cs_abel(10, &s).unwrap());
        assert!(cs_abel(0, &s).is_err());
    }

    #[test]
    fn irreducible_cs_example() {
        let s = spec(3, 5, 19);
        let v = cs_irr(&IrrepLabel::new(1, 1, 1), &s).unwrap();
        assert_eq!(v, RationalMod::mod1(q(-1, 16) - q(1, 60)));
    }

    #[test]
    fn branch_cs_example() {
        let s = spec(3, 5, 19);
        let v = cs_pm_irr(Sign::Plus, &IrrepLabel::new(3, 1, 3), &s).unwrap();
        assert_eq!(v, RationalMod::mod2(q(-31, 240)));
    }

    #[test]
    fn chebyshev_examples() {
        let x = Complex::new(0.7f64, -0.2);
        assert_eq!(chebyshev_s(0, &x), Complex::new(1.0, 0.0));
        assert!((chebyshev_s(2, &x) - (x * x - 1.0)).norm() < 1e-15);
        let x = Complex::new(2.0 * (std::f64::consts::PI / 5.0).cos(), 0.0);
        assert!(chebyshev_s(4, &x).norm() < 1e-14);
    }

    #[test]
    fn worked_example_classes() {
        let s = spec(3, 5, 19);
        let su2: Vec<_> = enumerate_h(&s)
            .into_iter()
            .filter(|x| classify_rep(x, &s).unwrap() == RepClass::SU2)
            .map(|x| x.tuple())
            .collect();
        assert_eq!(su2, vec![(1, 1, 3), (3, 1, 1)]);
    }

    #[test]
    fn table_csv_shape() {
        let rows = invariant_table::<f64>(&spec(2, 3, 7)).unwrap();
        assert_eq!(
            invariant_table_csv(&rows),
            format!("{INVARIANT_TABLE_HEADER}\n")
        );
        let rows = invariant_table::<f64>(&spec(3, 5, 19)).unwrap();
        assert_eq!(invariant_table_csv(&rows).lines().count(), 7);
    }

    #[test]
    fn mod2_phase_uses_full_class() {
        let x = RationalMod::mod2(q(-31, 240));
        let p = x.phase(3);
        let direct = PhaseUnit::new(-93, 240).unwrap();
        assert_eq!(p, direct);
    }
}
