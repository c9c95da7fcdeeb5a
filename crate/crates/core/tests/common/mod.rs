#![allow(dead_code)]

use num_complex::Complex;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torus_wrt::{Real, SurgerySpec, F150};

pub const TEST_SPECS: &[(i64, i64, i64)] = &[
    (2, 3, 7),
    (2, 3, 13),
    (3, 5, 19),
    (4, 3, 17),
    (2, 5, 13),
    (2, 5, 17),
    (2, 7, 23),
    (3, 4, 17),
    (2, 3, 11),
];

pub fn spec(a: i64, b: i64, p: i64) -> SurgerySpec {
    SurgerySpec::new(a, b, p, 3).unwrap()
}

pub fn test_specs() -> Vec<SurgerySpec> {
    TEST_SPECS.iter().map(|&(a, b, p)| spec(a, b, p)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A valid spec with `a, b <= 7`, `p <= 3ab` and odd `n` in `[3, max_n]`.
pub fn random_spec(rng: &mut ChaCha8Rng, max_n: i64) -> SurgerySpec {
    loop {
        let a = rng.random_range(2..=7i64);
        let b = rng.random_range(2..=7i64);
        if a.gcd(&b) != 1 {
            continue;
        }
        let p = rng.random_range(a * b + 1..=3 * a * b);
        let n = 2 * rng.random_range(1..=(max_n - 1) / 2) + 1;
        if let Ok(s) = SurgerySpec::new(a, b, p, n) {
            return s;
        }
    }
}

fn cis(theta: F150) -> Complex<F150> {
    Complex::new(theta.cos(), theta.sin())
}

/// `exp(i*pi*num/den)` without any exact reduction of the angle.
fn naive_root(num: i64, den: i64) -> Complex<F150> {
    cis(F150::pi() * F150::from_int(num) / F150::from_int(den))
}

/// The unreduced definition:
/// `e^{(3/n+(n+1)/4) pi i} / (sqrt(n) sin(2pi/n)) sum_k sin^2(2k pi/n) (-e^{pi i/n})^{p(k^2-1)} J_k`
/// with `J_k` expanded as the Rosso-Jones sum over `j` at `q = e^{4 pi i/n}`.
pub fn brute_tau(s: &SurgerySpec) -> Complex<F150> {
    let (a, b, p, n) = (s.a, s.b, s.p, s.n);
    let pi = F150::pi();
    let zero = Complex::new(F150::zero(), F150::zero());
    let mut total = zero.clone();
    for k in 1..n {
        let sin2k = (pi.clone() * F150::from_int(2 * k) / F150::from_int(n)).sin();
        // q^{x} = e^{4 pi i x / n}; half-integer j are written with l = 2j.
        let mut jones = zero.clone();
        let mut l = -(k - 1);
        while l < k {
            // q^{b j (a j + 1)} (q^{a j + 1/2} - q^{-(a j + 1/2)}) with j = l/2
            let e0 = b * l * (a * l + 2); // 4 b j (a j + 1)
            let w = 2 * (a * l + 1); // 4 (a j + 1/2)
            jones = jones + naive_root(e0 + w, n) - naive_root(e0 - w, n);
            l += 2;
        }
        let den = naive_root(2 * k, n) - naive_root(-2 * k, n);
        let jones = jones * naive_root(-a * b * (k * k - 1), n) / den;
        let e = p * (k * k - 1);
        let twist = naive_root(e, n);
        let twist = if e % 2 == 0 { twist } else { -twist };
        total = total + twist * jones * (sin2k.clone() * sin2k);
    }
    let pre = naive_root(12 + n * (n + 1), 4 * n);
    let scale = F150::from_int(n).sqrt() * (pi * F150::from_int(2) / F150::from_int(n)).sin();
    (total * pre).unscale(scale)
}

pub fn rel_err(x: &Complex<F150>, y: &Complex<F150>) -> f64 {
    let d = (x.clone() - y.clone()).norm_sqr().sqrt().to_f64_lossy();
    let m = y.norm_sqr().sqrt().to_f64_lossy().max(1e-300);
    d / m
}

pub fn close(x: Complex<f64>, y: Complex<f64>, tol: f64) -> bool {
    (x - y).norm() <= tol
}
