//! Leading terms of the large-`n` expansion, residual diagnostics against the exact value, and
//! the finite identities the expansion rests on.

use num_complex::Complex;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::indexsets::{enumerate_s2_and_stilde, partition_h, IrrepLabel, Sign};
use crate::numtheory::SurgerySpec;
use crate::phase::{complex_exp, complex_sinh, complex_to_json, modulus, Accumulator, PhaseUnit};
use crate::reps::{abel_amplitude, cs_abel, cs_pm_irr, t_pm_irr, RationalMod};
use crate::scalar::Real;
use crate::wrt::tau_hat;

fn sin_pi<T: Real>(t: i64, d: i64) -> T {
    PhaseUnit::new(t as i128, d as u64)
        .expect("positive denominator")
        .to_complex::<T>()
        .im
}

/// `e^{(n+1) pi i/4}`.
fn eighth_root_prefactor<T: Real>(n: i64) -> Complex<T> {
    PhaseUnit::new(n as i128 + 1, 4)
        .expect("constant")
        .to_complex()
}

/// `(-1)^m sin(m pi/a) sin(m pi/b) sin(g pi/(p-ab)) e^{n pi i (-g^2/(4(p-ab)) - m^2/(4ab))}`.
pub fn g_term<T: Real>(g: i64, m: i64, n: i64, spec: &SurgerySpec) -> Complex<T> {
    let (ab, q) = (spec.ab() as i128, spec.excess() as i128);
    let (g128, m128) = (g as i128, m as i128);
    let amp = sin_pi::<T>(m, spec.a) * sin_pi::<T>(m, spec.b) * sin_pi::<T>(g, spec.excess());
    let amp = if m % 2 == 0 { amp } else { -amp };
    let t = -(n as i128) * (g128 * g128 * ab + m128 * m128 * q);
    let phase: Complex<T> = PhaseUnit::new(t, (4 * ab * q) as u64)
        .expect("positive")
        .to_complex();
    phase.scale(amp)
}

/// `A(n) = e^{(n+1) pi i/4} / sqrt(ab(p-ab)) * sum over S~ of G(g, m)`.
pub fn a_via_stilde<T: Real>(n: i64, spec: &SurgerySpec) -> Complex<T> {
    let (_, stilde) = enumerate_s2_and_stilde(spec);
    let mut acc = Accumulator::<T>::new();
    for pt in &stilde {
        acc.add(g_term(pt.first, pt.second, n, spec));
    }
    let norm = T::from_int(spec.ab() * spec.excess()).sqrt();
    (acc.value() * eighth_root_prefactor(n)).unscale(norm)
}

/// One irreducible contribution `+- T_sign e^{n CS_sign pi i}`, before the common prefactor.
#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibleTerm<T> {
    pub sign: Sign,
    pub label: IrrepLabel,
    /// `+1` for the below-diagonal part (all-odd labels), `-1` above it (all-even labels).
    pub side: i64,
    pub cs: RationalMod,
    pub amplitude: T,
    pub term: Complex<T>,
}

/// The irreducible terms in the form
/// `A(n) = e^{(n+1) pi i/4}/4 * (sum_{H+delta, odd} + sum_{H-delta, odd} - sum_{H+nabla, even} - sum_{H-nabla, even}) T e^{n CS pi i}`.
pub fn irreducible_terms<T: Real>(n: i64, spec: &SurgerySpec) -> Result<Vec<IrreducibleTerm<T>>> {
    let parts = partition_h(spec)?;
    let mut out = Vec::new();
    for sign in Sign::BOTH {
        for (delta, side) in [(true, 1i64), (false, -1i64)] {
            for label in parts.part(sign, delta) {
                let keep = if delta {
                    label.all_odd()
                } else {
                    label.all_even()
                };
                if !keep {
                    continue;
                }
                let cs = cs_pm_irr(sign, label, spec)?;
                let amplitude = t_pm_irr::<T>(sign, label, spec)?;
                let z: Complex<T> = cs.phase(n).to_complex();
                let term = z.scale(amplitude.clone() * T::from_int(side));
                out.push(IrreducibleTerm {
                    sign,
                    label: *label,
                    side,
                    cs,
                    amplitude,
                    term,
                });
            }
        }
    }
    Ok(out)
}

pub fn a_via_h<T: Real>(n: i64, spec: &SurgerySpec) -> Result<Complex<T>> {
    let terms = irreducible_terms::<T>(n, spec)?;
    Ok(assemble_a(n, &terms))
}

fn assemble_a<T: Real>(n: i64, terms: &[IrreducibleTerm<T>]) -> Complex<T> {
    let mut acc = Accumulator::<T>::new();
    for t in terms {
        acc.add(t.term.clone());
    }
    (acc.value() * eighth_root_prefactor(n)).unscale(T::from_int(4))
}

/// One abelian contribution `T^Abel(l) e^{n CS^Abel(l) pi i}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianTerm<T> {
    pub l: i64,
    pub cs: RationalMod,
    pub amplitude: T,
    pub term: Complex<T>,
}

/// Upper end of the abelian index range, `1 <= l <= (p-1)/2`.
pub fn abelian_range_end(spec: &SurgerySpec) -> i64 {
    (spec.p - 1) / 2
}

pub fn abelian_terms<T: Real>(n: i64, spec: &SurgerySpec) -> Result<Vec<AbelianTerm<T>>> {
    (1..=abelian_range_end(spec))
        .map(|l| {
            let cs = cs_abel(l, spec)?;
            let amplitude = abel_amplitude::<T>(l, spec)?;
            let phase: Complex<T> =
                PhaseUnit::new(-(n as i128) * (l as i128) * (l as i128), spec.p as u64)?
                    .to_complex();
            Ok(AbelianTerm {
                l,
                cs,
                term: phase.scale(amplitude.clone()),
                amplitude,
            })
        })
        .collect()
}

/// `B(n) = (i/2) (-1)^{a+b+ab} e^{n(1-p) pi i/4} sum_l T^Abel(l) e^{n CS^Abel(l) pi i}`.
pub fn b_of_n<T: Real>(n: i64, spec: &SurgerySpec) -> Result<Complex<T>> {
    let terms = abelian_terms::<T>(n, spec)?;
    Ok(assemble_b(n, spec, &terms))
}

fn assemble_b<T: Real>(n: i64, spec: &SurgerySpec, terms: &[AbelianTerm<T>]) -> Complex<T> {
    let mut acc = Accumulator::<T>::new();
    for t in terms {
        acc.add(t.term.clone());
    }
    let (a, b) = (spec.a, spec.b);
    let sign = if (a + b + a * b) % 2 == 0 { 1 } else { -1 };
    // i * e^{n(1-p) pi i/4} = e^{(n(1-p) + 2) pi i/4}
    let phase: Complex<T> = PhaseUnit::new(n as i128 * (1 - spec.p as i128) + 2, 4)
        .expect("constant")
        .to_complex();
    (acc.value() * phase).scale(T::ratio(sign, 2))
}

/// Exact value, both expansion coefficients and their mismatch at one level `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionReport<T> {
    pub spec: SurgerySpec,
    pub n: i64,
    pub tau_exact: Complex<T>,
    pub a: Complex<T>,
    pub b: Complex<T>,
    /// `(-1)^{p+1} n^{3/2}/(2 pi) (A + B n^{-1/2})`.
    pub approx: Complex<T>,
    /// `|2 pi (-1)^{p+1} n^{-3/2} tau - A - n^{-1/2} B|`.
    pub residual: T,
    pub irreducible: Vec<IrreducibleTerm<T>>,
    pub abelian: Vec<AbelianTerm<T>>,
}

/// `(-1)^{p+1} n^{3/2}/(2 pi) (A + B n^{-1/2})`.
pub fn assemble_approx<T: Real>(spec: &SurgerySpec, a: &Complex<T>, b: &Complex<T>) -> Complex<T> {
    let root_n = T::from_int(spec.n).sqrt();
    let scale = T::from_int(spec.n) * root_n.clone() / (T::from_int(2) * T::pi());
    let v = (a.clone() + b.clone().unscale(root_n)).scale(scale);
    if spec.p % 2 == 0 {
        -v
    } else {
        v
    }
}

/// `|2 pi (-1)^{p+1} n^{-3/2} tau - A - n^{-1/2} B|`.
pub fn normalized_residual<T: Real>(
    spec: &SurgerySpec,
    tau: &Complex<T>,
    a: &Complex<T>,
    b: &Complex<T>,
) -> T {
    let root_n = T::from_int(spec.n).sqrt();
    let scale = T::from_int(2) * T::pi() / (T::from_int(spec.n) * root_n.clone());
    let lhs = tau.clone().scale(scale);
    let lhs = if spec.p % 2 == 0 { -lhs } else { lhs };
    modulus(&(lhs - a.clone() - b.clone().unscale(root_n)))
}

pub fn expansion_report<T: Real>(spec: &SurgerySpec) -> Result<ExpansionReport<T>> {
    let n = spec.n;
    let tau = tau_hat::<T>(spec).value;
    let irreducible = irreducible_terms::<T>(n, spec)?;
    let abelian = abelian_terms::<T>(n, spec)?;
    let a = assemble_a(n, &irreducible);
    let b = assemble_b(n, spec, &abelian);
    let approx = assemble_approx(spec, &a, &b);
    let residual = normalized_residual(spec, &tau, &a, &b);
    Ok(ExpansionReport {
        spec: *spec,
        n,
        tau_exact: tau,
        a,
        b,
        approx,
        residual,
        irreducible,
        abelian,
    })
}

impl<T: Real> ExpansionReport<T> {
    pub fn n_times_residual(&self) -> T {
        self.residual.clone() * T::from_int(self.n)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "tau": complex_to_json(&self.tau_exact),
            "A": complex_to_json(&self.a),
            "B": complex_to_json(&self.b),
            "approx": complex_to_json(&self.approx),
            "residual": self.residual.to_decimal(),
            "n_times_residual": self.n_times_residual().to_decimal(),
            "irreducible_terms": self.irreducible.iter().map(|t| json!({
                "sign": t.sign.symbol(),
                "label": [t.label.h, t.label.k, t.label.l],
                "side": t.side,
                "cs": t.cs.to_string(),
                "amplitude": t.amplitude.to_decimal(),
                "term": complex_to_json(&t.term),
            })).collect::<Vec<_>>(),
            "abelian_terms": self.abelian.iter().map(|t| json!({
                "l": t.l,
                "cs": t.cs.to_string(),
                "amplitude": t.amplitude.to_decimal(),
                "term": complex_to_json(&t.term),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.n,
            self.tau_exact.re.to_decimal(),
            self.tau_exact.im.to_decimal(),
            self.a.re.to_decimal(),
            self.a.im.to_decimal(),
            self.b.re.to_decimal(),
            self.b.im.to_decimal(),
            self.residual.to_decimal(),
            self.n_times_residual().to_decimal()
        )
    }
}

pub const SWEEP_HEADER: &str = "n,tau_re,tau_im,A_re,A_im,B_re,B_im,residual,n_times_residual";

/// Trend statistics of a residual sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepSummary {
    /// Least-squares slope of `log residual` against `log n` over the fitted points.
    pub slope: f64,
    pub fitted_points: usize,
    /// Levels whose residual is below the numerical floor; excluded from the log fit.
    pub below_floor: Vec<i64>,
    pub floor: f64,
    /// Median of `n * residual` over the lower and upper halves of the sorted levels.
    pub lower_median: f64,
    pub upper_median: f64,
    pub lower_max: f64,
    pub upper_max: f64,
}

impl SweepSummary {
    pub fn to_json(&self) -> Value {
        json!({
            "slope": self.slope,
            "fitted_points": self.fitted_points,
            "below_floor": self.below_floor,
            "floor": self.floor,
            "lower_half_median_n_residual": self.lower_median,
            "upper_half_median_n_residual": self.upper_median,
            "lower_half_max_n_residual": self.lower_max,
            "upper_half_max_n_residual": self.upper_max,
        })
    }
}

#[derive(Clone, Debug)]
pub struct Sweep<T> {
    pub rows: Vec<ExpansionReport<T>>,
    pub summary: SweepSummary,
}

/// Residuals under this many units of roundoff are indistinguishable from zero.
pub const RESIDUAL_FLOOR_ULPS: f64 = 1e4;

/// Evaluates `expansion_report` at every level, on up to `workers` threads. Rows come back
/// sorted by `n` regardless of scheduling.
pub fn convergence_sweep<T: Real>(
    spec: &SurgerySpec,
    n_values: &[i64],
    workers: usize,
) -> Result<Sweep<T>> {
    if n_values.is_empty() {
        return Err(Error::Empty("no levels to sweep".into()));
    }
    let mut ns = n_values.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let specs = ns
        .iter()
        .map(|&n| spec.with_n(n))
        .collect::<Result<Vec<_>>>()?;
    let workers = workers.clamp(1, specs.len());
    let next = std::sync::atomic::AtomicUsize::new(0);
    let mut slots: Vec<Option<Result<ExpansionReport<T>>>> =
        (0..specs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                let (specs, next) = (&specs, &next);
                scope.spawn(move || {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                        if i >= specs.len() {
                            break;
                        }
                        done.push((i, expansion_report::<T>(&specs[i])));
                    }
                    done
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("sweep worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    let rows = slots
        .into_iter()
        .map(|r| r.expect("every level evaluated"))
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(&rows, RESIDUAL_FLOOR_ULPS * T::epsilon().to_f64_lossy());
    Ok(Sweep { rows, summary })
}

fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

pub fn summarize<T: Real>(rows: &[ExpansionReport<T>], floor: f64) -> SweepSummary {
    let pairs: Vec<(i64, f64)> = rows
        .iter()
        .map(|r| (r.n, r.residual.to_f64_lossy()))
        .collect();
    let (fit, below): (Vec<_>, Vec<_>) = pairs.iter().partition(|(_, r)| *r > floor);
    let xs: Vec<f64> = fit.iter().map(|(n, _)| (*n as f64).ln()).collect();
    let ys: Vec<f64> = fit.iter().map(|(_, r)| r.ln()).collect();
    let scaled: Vec<f64> = pairs.iter().map(|(n, r)| *n as f64 * r).collect();
    let half = scaled.len() / 2;
    let (lower, upper) = (&scaled[..half], &scaled[scaled.len() - half..]);
    let max = |xs: &[f64]| xs.iter().cloned().fold(f64::NAN, f64::max);
    SweepSummary {
        slope: if xs.len() >= 2 {
            ls_slope(&xs, &ys)
        } else {
            f64::NAN
        },
        fitted_points: xs.len(),
        below_floor: below.iter().map(|(n, _)| *n).collect(),
        floor,
        lower_median: median(lower),
        upper_median: median(upper),
        lower_max: max(lower),
        upper_max: max(upper),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// `sum_{0 <= m <= 2ab, m of the given parity} sin(m pi/a) sin(m pi/b) e^{-n m^2 pi i/(4ab)}`.
pub fn vanishing_sum_check<T: Real>(a: i64, b: i64, n: i64, parity: Parity) -> Complex<T> {
    let ab = a * b;
    let start = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let mut acc = Accumulator::<T>::new();
    for m in (start..=2 * ab).step_by(2) {
        let amp = sin_pi::<T>(m, a) * sin_pi::<T>(m, b);
        let z: Complex<T> = PhaseUnit::new(-(n as i128) * (m as i128) * (m as i128), 4 * ab as u64)
            .expect("positive")
            .to_complex();
        acc.add(z.scale(amp));
    }
    acc.value()
}

/// Both sides of
/// `sum_{|l| <= k-1, l = k+1 (2)} e^{-2(al+1)z} sinh(2(al+1)h)
///  = e^{2(h-z)} sinh(2ka(z-h)) / (2 sinh(2a(z-h))) - e^{-2(h+z)} sinh(2ka(z+h)) / (2 sinh(2a(z+h)))`.
pub fn sum_l_identity_check<T: Real>(
    a: i64,
    k: i64,
    z: &Complex<T>,
    h: &Complex<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    if k < 1 {
        return Err(Error::Domain(format!("k={k} must be positive")));
    }
    let c = |x: i64| Complex::new(T::from_int(x), T::zero());
    let mut lhs = Accumulator::new();
    for l in crate::jones::half_steps(k) {
        let w = c(2 * (a * l + 1));
        lhs.add(complex_exp(&-(w.clone() * z.clone())) * complex_sinh(&(w * h.clone())));
    }
    let minus = z.clone() - h.clone();
    let plus = z.clone() + h.clone();
    let d1 = complex_sinh(&(c(2 * a) * minus.clone()));
    let d2 = complex_sinh(&(c(2 * a) * plus.clone()));
    let tiny = T::epsilon() * T::from_int(1 << 20);
    if modulus(&d1) < tiny || modulus(&d2) < tiny {
        return Err(Error::Degenerate("sinh(2a(z -+ h)) vanishes".into()));
    }
    let half = T::ratio(1, 2);
    let r1 =
        complex_exp(&(c(2) * (h.clone() - z.clone()))) * complex_sinh(&(c(2 * k * a) * minus)) / d1;
    let r2 = complex_exp(&(c(-2) * plus.clone())) * complex_sinh(&(c(2 * k * a) * plus)) / d2;
    Ok((lhs.value(), (r1 - r2).scale(half)))
}
