//! The quantum invariant of p-surgery on `T(a, b)` at the root `exp(4*pi*i/n)`.

use num_complex::Complex;
use serde_json::{json, Value};

use crate::numtheory::SurgerySpec;
use crate::phase::{complex_to_json, sign_pow, Accumulator, PhaseUnit, RootTable};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct TauValue<T> {
    pub value: Complex<T>,
    pub spec: SurgerySpec,
    pub precision_bits: u32,
}

impl<T: Real> TauValue<T> {
    pub fn to_json(&self) -> Value {
        json!({"n": self.spec.n, "value": complex_to_json(&self.value)})
    }
}

/// Contribution of colour `k` with the `sin^2` prefactor folded into the colored Jones
/// denominator:
/// `sin(2k pi/n) (-1)^{p(k^2-1)} e^{(p-ab)(k^2-1) pi i/n} sum_l e^{b l(al+2) pi i/n} sin(2(al+1) pi/n)`.
fn colour_term<T: Real>(spec: &SurgerySpec, roots: &RootTable<T>, k: i64) -> Complex<T> {
    let (a, b) = (spec.a as i128, spec.b as i128);
    let k128 = k as i128;
    let s = roots.sin(2 * k128);
    if *s == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let mut inner = Accumulator::new();
    for l in crate::jones::half_steps(k) {
        let l = l as i128;
        inner.add(
            roots
                .get(b * l * (a * l + 2))
                .clone()
                .scale(roots.sin(2 * (a * l + 1)).clone()),
        );
    }
    let e = k128 * k128 - 1;
    let phase = roots.get(spec.excess() as i128 * e).clone();
    let sign = sign_pow(((spec.p as i128 * e) % 2) as i64);
    let term = inner.value() * phase.scale(s.clone());
    if sign < 0 {
        -term
    } else {
        term
    }
}

/// `e^{(3/n + (n+1)/4) pi i} / (sqrt(n) sin(2 pi/n))`.
fn tau_prefactor<T: Real>(n: i64, roots: &RootTable<T>) -> Complex<T> {
    let z: Complex<T> = PhaseUnit::new(12 + n as i128 * (n as i128 + 1), 4 * n as u64)
        .expect("positive denominator")
        .to_complex();
    z.unscale(T::from_int(n).sqrt() * roots.sin(2).clone())
}

/// Exact finite-sum evaluation over colours `k = 1..n-1`.
pub fn tau_hat<T: Real>(spec: &SurgerySpec) -> TauValue<T> {
    tau_hat_with_parts(spec, 1)
}

/// Splits the colours into `parts` contiguous blocks evaluated on separate threads and
/// combines the block sums in block order, so the result depends only on `parts`.
pub fn tau_hat_with_parts<T: Real>(spec: &SurgerySpec, parts: usize) -> TauValue<T> {
    let n = spec.n;
    let roots = RootTable::<T>::new(n as u64).expect("n >= 3");
    let parts = parts.clamp(1, (n - 1) as usize);
    let colours: Vec<i64> = (1..n).collect();
    let chunk = colours.len().div_ceil(parts);
    let block_sums: Vec<Complex<T>> = if parts == 1 {
        vec![block_sum(spec, &roots, &colours)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = colours
                .chunks(chunk)
                .map(|ks| {
                    let roots = &roots;
                    scope.spawn(move || block_sum(spec, roots, ks))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        })
    };
    let mut total = Accumulator::new();
    total.extend(block_sums);
    TauValue {
        value: total.value() * tau_prefactor(n, &roots),
        spec: *spec,
        precision_bits: T::PRECISION_BITS,
    }
}

fn block_sum<T: Real>(spec: &SurgerySpec, roots: &RootTable<T>, ks: &[i64]) -> Complex<T> {
    let mut acc = Accumulator::new();
    for &k in ks {
        acc.add(colour_term(spec, roots, k));
    }
    acc.value()
}

/// Both forms of the framing correction for the `+1`-framed unknot:
/// the defining sum `(A^2-A^{-2})^{-2} sum_{k=1}^{n-1} (-A)^{k^2-1} (A^{2k}-A^{-2k})^2` at
/// `A = exp(pi*i/n)`, and the closed form `sqrt(n)/sin(2 pi/n) e^{-(3/n+(n+1)/4) pi i}`.
pub fn omega_unknot_plus<T: Real>(n: i64) -> (Complex<T>, Complex<T>) {
    let nd = n as u64;
    let a_pow = |e: i128| -> Complex<T> { PhaseUnit::new(e, nd).expect("n >= 1").to_complex() };
    let mut acc = Accumulator::new();
    for k in 1..n as i128 {
        let e = k * k - 1;
        let minus_a = if e % 2 == 0 { a_pow(e) } else { -a_pow(e) };
        let diff = a_pow(2 * k) - a_pow(-2 * k);
        acc.add(minus_a * diff.clone() * diff);
    }
    let norm = a_pow(2) - a_pow(-2);
    let sum_form = acc.value() / (norm.clone() * norm);
    let sin: T = a_pow(2).im;
    let phase: Complex<T> = PhaseUnit::new(-(12 + n as i128 * (n as i128 + 1)), 4 * nd)
        .expect("n >= 1")
        .to_complex();
    let closed_form = phase.scale(T::from_int(n).sqrt() / sin);
    (sum_form, closed_form)
}
