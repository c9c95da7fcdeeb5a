//! Built-in consistency checks behind the `verify` subcommand.

use std::collections::BTreeSet;

use clap::ValueEnum;
use num_complex::Complex;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use torus_wrt::asymptotics::{
    a_via_h, a_via_stilde, sum_l_identity_check, vanishing_sum_check, Parity,
};
use torus_wrt::indexsets::{
    enumerate_h, enumerate_r, enumerate_s2_and_stilde, enumerate_stilde_direct,
    h_count_closed_form, partition_h, partition_r, r_count_closed_form, s2_to_stilde, stilde_to_s2,
    tilde_gamma, tilde_theta, IrrepLabel, LatticePoint, Sign,
};
use torus_wrt::numtheory::{gauss_sum, rational, reciprocity_check, seifert_witness};
use torus_wrt::reps::{classify_rep, RepClass};
use torus_wrt::wrt::omega_unknot_plus;
use torus_wrt::{Error, SurgerySpec};

const TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum CheckGroup {
    IndexSets,
    Bijections,
    Lemmas,
    Gauss,
    DualA,
    Classification,
}

impl CheckGroup {
    pub const ALL: [CheckGroup; 6] = [
        CheckGroup::IndexSets,
        CheckGroup::Bijections,
        CheckGroup::Lemmas,
        CheckGroup::Gauss,
        CheckGroup::DualA,
        CheckGroup::Classification,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckGroup::IndexSets => "index-sets",
            CheckGroup::Bijections => "bijections",
            CheckGroup::Lemmas => "lemmas",
            CheckGroup::Gauss => "gauss",
            CheckGroup::DualA => "dual-a",
            CheckGroup::Classification => "classification",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub group: CheckGroup,
    pub name: String,
    /// What the check establishes, in plain words.
    pub context: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group.name(),
            "name": self.name,
            "context": self.context,
            "pass": self.pass,
            "detail": self.detail,
        })
    }
}

fn outcome(
    group: CheckGroup,
    name: &str,
    context: &str,
    pass: bool,
    detail: String,
) -> CheckOutcome {
    CheckOutcome {
        group,
        name: name.into(),
        context: context.into(),
        pass,
        detail,
    }
}

/// Every valid `(a, b, p)` with `2 <= a, b <= 7` and `ab < p <= 3ab`.
fn small_specs() -> Vec<SurgerySpec> {
    let mut out = Vec::new();
    for a in 2..=7i64 {
        for b in 2..=7i64 {
            if a.gcd(&b) != 1 {
                continue;
            }
            for p in a * b + 1..=3 * a * b {
                if let Ok(s) = SurgerySpec::new(a, b, p, 3) {
                    out.push(s);
                }
            }
        }
    }
    out.sort_by_key(|s| (s.a, s.b, s.p));
    out.dedup_by_key(|s| (s.a, s.b, s.p));
    out
}

fn spec(a: i64, b: i64, p: i64) -> SurgerySpec {
    SurgerySpec::new(a, b, p, 3).expect("fixed example is valid")
}

fn tuples(xs: &[IrrepLabel]) -> BTreeSet<(i64, i64, i64)> {
    xs.iter().map(|x| x.tuple()).collect()
}

fn index_set_checks() -> Vec<CheckOutcome> {
    let g = CheckGroup::IndexSets;
    let mut out = Vec::new();
    let s = spec(3, 5, 19);
    let h = tuples(&enumerate_h(&s));
    let want: BTreeSet<_> = [
        (1, 1, 1),
        (1, 1, 3),
        (2, 2, 2),
        (2, 2, 4),
        (3, 1, 1),
        (3, 1, 3),
    ]
    .into();
    out.push(outcome(
        g,
        "labels-3-5-19",
        "irreducible labels of the (3,5,19) example",
        h == want,
        format!("{h:?}"),
    ));

    let pt = LatticePoint::new;
    let maps_ok = [
        tilde_gamma(Sign::Plus, &IrrepLabel::new(1, 1, 1), &s).ok() == Some(pt(3, 14)),
        tilde_gamma(Sign::Minus, &IrrepLabel::new(2, 2, 4), &s).ok() == Some(pt(2, 11)),
        tilde_theta(Sign::Plus, &pt(1, 2), &s).ok() == Some(IrrepLabel::new(3, 1, 3)),
        tilde_theta(Sign::Minus, &pt(3, 4), &s).ok() == Some(IrrepLabel::new(1, 1, 1)),
    ];
    out.push(outcome(
        g,
        "sign-maps-3-5-19",
        "label-to-lattice maps on the (3,5,19) example",
        maps_ok.iter().all(|x| *x),
        format!("{maps_ok:?}"),
    ));

    let s4 = spec(4, 3, 17);
    let got = (
        tuples(&enumerate_h(&s4)),
        partition_h(&s4).map(|p| (tuples(&p.plus_delta), tuples(&p.minus_delta))),
    );
    let want_h: BTreeSet<_> = [
        (1, 1, 1),
        (1, 3, 1),
        (2, 2, 2),
        (3, 1, 1),
        (3, 3, 1),
        (4, 2, 2),
    ]
    .into();
    let want_pd: BTreeSet<_> = [(1, 1, 1), (1, 3, 1), (2, 2, 2), (3, 1, 1), (4, 2, 2)].into();
    let want_md: BTreeSet<_> = [(1, 1, 1)].into();
    let ok = got.0 == want_h
        && got
            .1
            .as_ref()
            .is_ok_and(|(pd, md)| *pd == want_pd && *md == want_md);
    out.push(outcome(
        g,
        "labels-4-3-17",
        "irreducible labels and their split for the (4,3,17) example",
        ok,
        format!("{got:?}"),
    ));

    let r = partition_r(&s);
    let ok = r.as_ref().is_ok_and(|r| {
        let parts = [&r.plus_delta, &r.plus_nabla, &r.minus_delta, &r.minus_nabla];
        let total: usize = parts.iter().map(|x| x.len()).sum();
        let union: BTreeSet<_> = parts
            .iter()
            .flat_map(|x| x.iter().map(|p| p.tuple()))
            .collect();
        let all: BTreeSet<_> = enumerate_r(&s).iter().map(|p| p.tuple()).collect();
        total == union.len() && union == all
    });
    out.push(outcome(
        g,
        "lattice-partition",
        "the four lattice subsets are disjoint and cover the lattice",
        ok,
        String::new(),
    ));

    let specs = small_specs();
    let bad: Vec<_> = specs
        .iter()
        .filter(|s| {
            enumerate_h(s).len() as i64 != h_count_closed_form(s)
                || enumerate_r(s).len() as i64 != r_count_closed_form(s)
        })
        .map(|s| (s.a, s.b, s.p))
        .collect();
    out.push(outcome(
        g,
        "closed-form-counts",
        "set sizes match their closed forms for all small surgeries",
        bad.is_empty(),
        format!("{} surgeries, mismatches {bad:?}", specs.len()),
    ));
    out
}

fn bijection_checks() -> Vec<CheckOutcome> {
    let g = CheckGroup::Bijections;
    let specs = small_specs();
    let mut bad_inverse = Vec::new();
    let mut bad_image = Vec::new();
    let mut bad_s2 = Vec::new();
    for s in &specs {
        let key = (s.a, s.b, s.p);
        let mut image = Vec::new();
        for sign in Sign::BOTH {
            for x in enumerate_h(s) {
                match tilde_gamma(sign, &x, s).and_then(|y| Ok((y, tilde_theta(sign, &y, s)?))) {
                    Ok((y, back)) if back == x => image.push(y.tuple()),
                    _ => bad_inverse.push(key),
                }
            }
        }
        image.sort();
        let mut lattice: Vec<_> = enumerate_r(s).iter().map(|p| p.tuple()).collect();
        lattice.sort();
        if image != lattice {
            bad_image.push(key);
        }
        let (s2, st) = enumerate_s2_and_stilde(s);
        let mapped: BTreeSet<_> = s2.iter().map(|x| s2_to_stilde(x, s).tuple()).collect();
        let direct: BTreeSet<_> = enumerate_stilde_direct(s)
            .iter()
            .map(|x| x.tuple())
            .collect();
        let listed: BTreeSet<_> = st.iter().map(|x| x.tuple()).collect();
        let round_trip = s2
            .iter()
            .all(|x| stilde_to_s2(&s2_to_stilde(x, s), s) == Some(*x));
        if mapped != direct || listed != direct || mapped.len() != s2.len() || !round_trip {
            bad_s2.push(key);
        }
    }
    let n = specs.len();
    vec![
        outcome(
            g,
            "label-lattice-inverse",
            "label-to-lattice maps invert each other",
            bad_inverse.is_empty(),
            format!("{n} surgeries, failures {bad_inverse:?}"),
        ),
        outcome(
            g,
            "label-lattice-image",
            "both sign maps together cover the lattice exactly once",
            bad_image.is_empty(),
            format!("{n} surgeries, failures {bad_image:?}"),
        ),
        outcome(
            g,
            "summation-change",
            "the summation-set coordinate change is a bijection",
            bad_s2.is_empty(),
            format!("{n} surgeries, failures {bad_s2:?}"),
        ),
    ]
}

fn sum_l_points(seed: Option<u64>) -> Vec<(i64, i64, Complex<f64>, Complex<f64>)> {
    let mut pts = vec![
        (1, 1, Complex::new(0.1, 0.3), Complex::new(-0.2, 0.7)),
        (2, 3, Complex::new(0.05, 1.1), Complex::new(0.15, -0.4)),
        (3, 4, Complex::new(-0.3, 2.0), Complex::new(0.25, 0.9)),
        (5, 6, Complex::new(0.2, -1.7), Complex::new(-0.1, 0.2)),
    ];
    if let Some(seed) = seed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let a = rng.random_range(1..=5i64);
            let k = rng.random_range(1..=8i64);
            let z = Complex::new(rng.random_range(-0.5..0.5), rng.random_range(-3.2..3.2));
            let h = Complex::new(rng.random_range(-0.5..0.5), rng.random_range(-3.2..3.2));
            pts.push((a, k, z, h));
        }
    }
    pts
}

fn lemma_checks(seed: Option<u64>) -> Vec<CheckOutcome> {
    let g = CheckGroup::Lemmas;
    let mut worst: f64 = 0.0;
    for a in 1..=10i64 {
        for b in 1..=10i64 {
            if a.gcd(&b) != 1 {
                continue;
            }
            for n in (3..=61i64).step_by(2) {
                for parity in [Parity::Even, Parity::Odd] {
                    worst = worst.max(
                        vanishing_sum_check::<f64>(a, b, n, parity).norm() / (2 * a * b) as f64,
                    );
                }
            }
        }
    }
    let mut out = vec![outcome(
        g,
        "vanishing-sine-sums",
        "parity-restricted Gaussian sine sums vanish",
        worst <= TOL,
        format!("max scaled modulus {worst:.3e}"),
    )];

    let mut worst_l: f64 = 0.0;
    let (mut used, mut skipped) = (0, 0);
    let mut errors = Vec::new();
    for (a, k, z, h) in sum_l_points(seed) {
        match sum_l_identity_check::<f64>(a, k, &z, &h) {
            Ok((l, r)) => {
                worst_l = worst_l.max((l - r).norm() / l.norm().max(1.0));
                used += 1;
            }
            Err(Error::Degenerate(_)) => skipped += 1,
            Err(e) => errors.push(e.to_string()),
        }
    }
    out.push(outcome(
        g,
        "geometric-sinh-sum",
        "closed form of the weighted sinh sum over half-steps",
        worst_l <= TOL && errors.is_empty(),
        format!(
            "{used} points, {skipped} degenerate skipped, max relative error {worst_l:.3e}{}",
            if errors.is_empty() {
                String::new()
            } else {
                format!(", errors {errors:?}")
            }
        ),
    ));

    let mut worst_r: f64 = 0.0;
    let mut cases = 0;
    let mut errors = Vec::new();
    let ws = [
        rational(0, 1),
        rational(5, 6),
        rational(-1, 6),
        rational(7, 12),
        rational(1, 2),
    ];
    for c in 1..=12 {
        for d in 1..=12 {
            for w in &ws {
                match reciprocity_check::<f64>(c, d, w) {
                    Ok((l, r)) => {
                        cases += 1;
                        worst_r = worst_r.max((l - r).norm());
                    }
                    Err(Error::Precondition(_)) => {}
                    Err(e) => errors.push(e.to_string()),
                }
            }
        }
    }
    out.push(outcome(
        g,
        "gauss-reciprocity",
        "reciprocity for generalized quadratic Gauss sums",
        worst_r <= TOL && errors.is_empty() && cases > 0,
        format!("{cases} cases, max error {worst_r:.3e}"),
    ));

    let mut bad = Vec::new();
    let mut pairs = 0;
    for b in 2..=30i64 {
        for a in 1..b {
            if a.gcd(&b) == 1 {
                pairs += 1;
                if let Err(e) = seifert_witness(a, b, a * b + 1) {
                    bad.push(format!("({a},{b}): {e}"));
                }
            }
        }
    }
    out.push(outcome(
        g,
        "seifert-invariants",
        "Seifert invariants agree with the continued-fraction witness",
        bad.is_empty(),
        format!("{pairs} pairs, failures {bad:?}"),
    ));
    out
}

fn gauss_checks() -> Vec<CheckOutcome> {
    let g = CheckGroup::Gauss;
    let mut worst: f64 = 0.0;
    for n in (3..=99i64).step_by(2) {
        let root = (n as f64).sqrt();
        let s = gauss_sum::<f64>(n as u64, &rational(2, n));
        let want = if n % 4 == 1 {
            Complex::new(root, 0.0)
        } else {
            Complex::new(0.0, root)
        };
        worst = worst.max((s - want).norm());
    }
    let mut worst_w: f64 = 0.0;
    for n in (3..=99i64).step_by(2) {
        let (sum, closed) = omega_unknot_plus::<f64>(n);
        worst_w = worst_w.max((sum - closed).norm());
    }
    vec![
        outcome(
            g,
            "quadratic-gauss",
            "quadratic Gauss sums take their classical values",
            worst <= TOL,
            format!("max error {worst:.3e}"),
        ),
        outcome(
            g,
            "unknot-framing",
            "closed form of the framing sum for the +1 unknot",
            worst_w <= TOL,
            format!("max error {worst_w:.3e}"),
        ),
    ]
}

fn dual_a_checks() -> Vec<CheckOutcome> {
    let g = CheckGroup::DualA;
    let mut worst: f64 = 0.0;
    let mut errors = Vec::new();
    let examples = [
        (2, 3, 7),
        (2, 3, 13),
        (3, 5, 19),
        (4, 3, 17),
        (2, 5, 13),
        (3, 4, 17),
    ];
    for (a, b, p) in examples {
        let s = spec(a, b, p);
        for n in [3, 5, 7, 11, 21, 51] {
            match a_via_h::<f64>(n, &s) {
                Ok(x) => worst = worst.max((x - a_via_stilde::<f64>(n, &s)).norm()),
                Err(e) => errors.push(format!("({a},{b},{p}) n={n}: {e}")),
            }
        }
    }
    vec![outcome(
        g,
        "leading-coefficient-routes",
        "label sum and lattice sum give the same leading coefficient",
        worst <= TOL && errors.is_empty(),
        format!("max difference {worst:.3e}, errors {errors:?}"),
    )]
}

fn classification_checks() -> Vec<CheckOutcome> {
    let g = CheckGroup::Classification;
    let su2 = |s: &SurgerySpec| -> Result<BTreeSet<(i64, i64, i64)>, Error> {
        let mut out = BTreeSet::new();
        for x in enumerate_h(s) {
            if classify_rep(&x, s)? == RepClass::SU2 {
                out.insert(x.tuple());
            }
        }
        Ok(out)
    };
    let got = su2(&spec(3, 5, 19));
    let want: BTreeSet<_> = [(1, 1, 3), (3, 1, 1)].into();
    let mut out = vec![outcome(
        g,
        "compact-labels-3-5-19",
        "compact-group labels of the (3,5,19) example",
        got.as_ref().is_ok_and(|x| *x == want),
        format!("{got:?}"),
    )];
    let mut bad = Vec::new();
    let mut checked = 0;
    for (b, p) in [(3, 13), (5, 17), (7, 23), (3, 11), (5, 13), (9, 23)] {
        let s = spec(2, b, p);
        let q = p - 2 * b;
        for x in enumerate_h(&s) {
            let region = 2 * b * x.h < x.l * q || x.l * q + 2 * b * x.h > 2 * b * q;
            match classify_rep(&x, &s) {
                Ok(c) if region == (c == RepClass::SU2) => {}
                other => bad.push(format!("(2,{b},{p}) {:?}: {other:?}", x.tuple())),
            }
            checked += 1;
        }
    }
    out.push(outcome(
        g,
        "two-strand-region",
        "for a=2 the class agrees with the integer region test",
        bad.is_empty(),
        format!("{checked} labels, mismatches {bad:?}"),
    ));
    out
}

/// Runs the selected groups (all when `only` is empty) in a fixed order.
pub fn run_checks(only: &[CheckGroup], seed: Option<u64>) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for g in CheckGroup::ALL {
        if !only.is_empty() && !only.contains(&g) {
            continue;
        }
        out.extend(match g {
            CheckGroup::IndexSets => index_set_checks(),
            CheckGroup::Bijections => bijection_checks(),
            CheckGroup::Lemmas => lemma_checks(seed),
            CheckGroup::Gauss => gauss_checks(),
            CheckGroup::DualA => dual_a_checks(),
            CheckGroup::Classification => classification_checks(),
        });
    }
    out
}
