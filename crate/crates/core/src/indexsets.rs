//! Finite lattice sets labelling the terms of the expansion, and the bijections between them.
//!
//! Every predicate is exact integer arithmetic; rational inequalities are cleared of
//! denominators before comparison.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numtheory::SurgerySpec;

/// Label `(h, k, l)` of an irreducible representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct IrrepLabel {
    pub h: i64,
    pub k: i64,
    pub l: i64,
}

impl IrrepLabel {
    pub fn new(h: i64, k: i64, l: i64) -> Self {
        IrrepLabel { h, k, l }
    }

    pub fn tuple(&self) -> (i64, i64, i64) {
        (self.h, self.k, self.l)
    }

    /// `(p-ab-h, a-k, b-l)`.
    pub fn reflected(&self, spec: &SurgerySpec) -> IrrepLabel {
        IrrepLabel::new(spec.excess() - self.h, spec.a - self.k, spec.b - self.l)
    }

    /// True when `h, k, l` are all odd.
    pub fn all_odd(&self) -> bool {
        self.h % 2 != 0 && self.k % 2 != 0 && self.l % 2 != 0
    }

    pub fn all_even(&self) -> bool {
        self.h % 2 == 0 && self.k % 2 == 0 && self.l % 2 == 0
    }
}

/// Integer pair `(first, m)`; `first` is `g` or `l` depending on the set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LatticePoint {
    pub first: i64,
    pub second: i64,
}

impl LatticePoint {
    pub fn new(first: i64, second: i64) -> Self {
        LatticePoint { first, second }
    }

    /// Checked construction against one of the named sets.
    pub fn in_set(set: LatticeSet, first: i64, second: i64, spec: &SurgerySpec) -> Result<Self> {
        let ok = match set {
            LatticeSet::R => in_r(first, second, spec),
            LatticeSet::S2 => in_s2(first, second, spec),
            LatticeSet::Stilde => in_stilde(first, second, spec),
        };
        if ok {
            Ok(LatticePoint::new(first, second))
        } else {
            Err(Error::Domain(format!(
                "({first},{second}) is not in {set:?}"
            )))
        }
    }

    pub fn tuple(&self) -> (i64, i64) {
        (self.first, self.second)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LatticeSet {
    /// `(g, m)` with `0<m<ab`, `0<g<p-ab`.
    R,
    /// `(l, m)` in the pre-image coordinates.
    S2,
    /// `(g, m)` in the double-size triangle.
    Stilde,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

fn even(x: i64) -> bool {
    x.rem_euclid(2) == 0
}

fn coprime_to_knot(m: i64, spec: &SurgerySpec) -> bool {
    m % spec.a != 0 && m % spec.b != 0
}

pub fn in_p(k: i64, l: i64, spec: &SurgerySpec) -> bool {
    0 < k && k < spec.a && 0 < l && l < spec.b && even(k - l)
}

pub fn in_q(m: i64, spec: &SurgerySpec) -> bool {
    0 < m && m < spec.ab() && coprime_to_knot(m, spec)
}

/// `m` lies in the image of `Gamma_sign`.
pub fn in_q_sign(sign: Sign, m: i64, spec: &SurgerySpec) -> bool {
    in_q(m, spec) && {
        let (k, l) = theta_unchecked(sign, m, spec);
        in_p(k, l, spec)
    }
}

pub fn in_h(label: &IrrepLabel, spec: &SurgerySpec) -> bool {
    let IrrepLabel { h, k, l } = *label;
    0 < h && h < spec.excess() && in_p(k, l, spec) && even(h - k)
}

pub fn in_r(g: i64, m: i64, spec: &SurgerySpec) -> bool {
    0 < m
        && m < spec.ab()
        && 0 < g
        && g < spec.excess()
        && even(g - spec.p + m)
        && coprime_to_knot(m, spec)
}

/// `m/ab < g/(p-ab)`.
pub fn below_diagonal(g: i64, m: i64, spec: &SurgerySpec) -> bool {
    m * spec.excess() < g * spec.ab()
}

pub fn on_diagonal(g: i64, m: i64, spec: &SurgerySpec) -> bool {
    m * spec.excess() == g * spec.ab()
}

/// `[m]_a = [m]_b (mod 2)`: the half of the lattice set reached from the `+` branch.
pub fn r_sign(m: i64, spec: &SurgerySpec) -> Sign {
    if even(m.rem_euclid(spec.a) - m.rem_euclid(spec.b)) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

pub fn in_r_sign(sign: Sign, g: i64, m: i64, spec: &SurgerySpec) -> bool {
    in_r(g, m, spec) && r_sign(m, spec) == sign
}

pub fn in_s2(l: i64, m: i64, spec: &SurgerySpec) -> bool {
    let (p, ab) = (spec.p, spec.ab());
    -p < 2 * l
        && 2 * l < p
        && p * m <= 2 * ab * l + ab * p
        && 2 * l < m + p - 2 * ab
        && 0 < m
        && m < 2 * ab
        && coprime_to_knot(m, spec)
}

pub fn in_stilde(g: i64, m: i64, spec: &SurgerySpec) -> bool {
    let q = spec.excess();
    0 < m
        && m < 2 * spec.ab()
        && q * m < g * spec.ab()
        && g < 2 * q
        && even(g - spec.p + m)
        && coprime_to_knot(m, spec)
}

/// All of `H`, lexicographically sorted.
pub fn enumerate_h(spec: &SurgerySpec) -> Vec<IrrepLabel> {
    let mut out = Vec::new();
    for h in 1..spec.excess() {
        for k in 1..spec.a {
            for l in 1..spec.b {
                let label = IrrepLabel::new(h, k, l);
                if in_h(&label, spec) {
                    out.push(label);
                }
            }
        }
    }
    out
}

/// All of `R`, lexicographically sorted.
pub fn enumerate_r(spec: &SurgerySpec) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for g in 1..spec.excess() {
        for m in 1..spec.ab() {
            if in_r(g, m, spec) {
                out.push(LatticePoint::new(g, m));
            }
        }
    }
    out
}

/// `#H` in closed form, for either parity of `p`.
pub fn h_count_closed_form(spec: &SurgerySpec) -> i64 {
    let (a, b, q) = (spec.a, spec.b, spec.excess());
    if spec.p % 2 != 0 {
        (a - 1) * (b - 1) * (q - 1) / 4
    } else {
        (a - 1) * (b - 1) / 2 * ((q - 1) / 2)
    }
}

/// `#R` in closed form, for either parity of `p`.
pub fn r_count_closed_form(spec: &SurgerySpec) -> i64 {
    let (a, b, q) = (spec.a, spec.b, spec.excess());
    if spec.p % 2 != 0 {
        (a - 1) * (b - 1) * (q - 1) / 2
    } else {
        (a - 1) * (b - 1) * ((q - 1) / 2)
    }
}

/// `[sign*a*d*l - b*c*k]_{ab}`.
pub fn gamma(sign: Sign, k: i64, l: i64, spec: &SurgerySpec) -> Result<i64> {
    if !in_p(k, l, spec) {
        return Err(Error::Domain(format!("({k},{l}) is not in P")));
    }
    Ok(gamma_unchecked(sign, k, l, spec))
}

fn gamma_unchecked(sign: Sign, k: i64, l: i64, spec: &SurgerySpec) -> i64 {
    (sign.value() * spec.a * spec.d * l - spec.b * spec.c * k).rem_euclid(spec.ab())
}

/// `([m]_a, [sign*m]_b)`.
pub fn theta(sign: Sign, m: i64, spec: &SurgerySpec) -> Result<(i64, i64)> {
    if !in_q_sign(sign, m, spec) {
        return Err(Error::Domain(format!("{m} is not in Q{}", sign.symbol())));
    }
    Ok(theta_unchecked(sign, m, spec))
}

fn theta_unchecked(sign: Sign, m: i64, spec: &SurgerySpec) -> (i64, i64) {
    (m.rem_euclid(spec.a), (sign.value() * m).rem_euclid(spec.b))
}

/// `Gamma_sign` lifted to `H`, with the reflection `m -> ab - m` chosen to fix parity.
pub fn tilde_gamma(sign: Sign, label: &IrrepLabel, spec: &SurgerySpec) -> Result<LatticePoint> {
    if !in_h(label, spec) {
        return Err(Error::Domain(format!("{:?} is not in H", label.tuple())));
    }
    let g = spec.excess() - label.h;
    let m = gamma_unchecked(sign, label.k, label.l, spec);
    let m = if even(m + spec.ab() + label.h) {
        m
    } else {
        spec.ab() - m
    };
    Ok(LatticePoint::new(g, m))
}

/// Inverse of [`tilde_gamma`] on the `sign` half of `R`.
pub fn tilde_theta(sign: Sign, point: &LatticePoint, spec: &SurgerySpec) -> Result<IrrepLabel> {
    let (g, m) = point.tuple();
    if !in_r_sign(sign, g, m, spec) {
        return Err(Error::Domain(format!(
            "({g},{m}) is not in R{}",
            sign.symbol()
        )));
    }
    let h = spec.excess() - g;
    let (k, l) = if even(spec.ab() + m + m.rem_euclid(spec.a)) {
        theta_unchecked(sign, m, spec)
    } else {
        theta_unchecked(sign, -m, spec)
    };
    Ok(IrrepLabel::new(h, k, l))
}

/// A set split by branch sign and by side of the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition<X> {
    pub plus_delta: Vec<X>,
    pub plus_nabla: Vec<X>,
    pub minus_delta: Vec<X>,
    pub minus_nabla: Vec<X>,
}

impl<X> Default for Partition<X> {
    fn default() -> Self {
        Partition {
            plus_delta: Vec::new(),
            plus_nabla: Vec::new(),
            minus_delta: Vec::new(),
            minus_nabla: Vec::new(),
        }
    }
}

impl<X> Partition<X> {
    pub fn part(&self, sign: Sign, delta: bool) -> &[X] {
        match (sign, delta) {
            (Sign::Plus, true) => &self.plus_delta,
            (Sign::Plus, false) => &self.plus_nabla,
            (Sign::Minus, true) => &self.minus_delta,
            (Sign::Minus, false) => &self.minus_nabla,
        }
    }

    fn part_mut(&mut self, sign: Sign, delta: bool) -> &mut Vec<X> {
        match (sign, delta) {
            (Sign::Plus, true) => &mut self.plus_delta,
            (Sign::Plus, false) => &mut self.plus_nabla,
            (Sign::Minus, true) => &mut self.minus_delta,
            (Sign::Minus, false) => &mut self.minus_nabla,
        }
    }
}

/// `R` split into `R_sign` and into `m/ab < g/(p-ab)` (delta) versus `>` (nabla).
/// Errors if a point of `R` lies on the diagonal, which coprimality rules out.
pub fn partition_r(spec: &SurgerySpec) -> Result<Partition<LatticePoint>> {
    let mut out = Partition::default();
    for pt in enumerate_r(spec) {
        let (g, m) = pt.tuple();
        if on_diagonal(g, m, spec) {
            return Err(Error::Consistency(format!(
                "({g},{m}) lies on the diagonal"
            )));
        }
        out.part_mut(r_sign(m, spec), below_diagonal(g, m, spec))
            .push(pt);
    }
    Ok(out)
}

/// Images of the parts of `R` under `tilde_theta`, each sorted.
pub fn partition_h(spec: &SurgerySpec) -> Result<Partition<IrrepLabel>> {
    let r = partition_r(spec)?;
    let mut out = Partition::default();
    for sign in Sign::BOTH {
        for delta in [true, false] {
            let mut labels = r
                .part(sign, delta)
                .iter()
                .map(|pt| tilde_theta(sign, pt, spec))
                .collect::<Result<Vec<_>>>()?;
            labels.sort();
            *out.part_mut(sign, delta) = labels;
        }
    }
    Ok(out)
}

/// `S_2` from its own predicate, and `S~` as its image under `g = 2l - m + p`, both sorted.
pub fn enumerate_s2_and_stilde(spec: &SurgerySpec) -> (Vec<LatticePoint>, Vec<LatticePoint>) {
    let (p, ab) = (spec.p, spec.ab());
    let mut s2 = Vec::new();
    for l in (-p / 2 - 1)..=(p / 2 + 1) {
        for m in 1..2 * ab {
            if in_s2(l, m, spec) {
                s2.push(LatticePoint::new(l, m));
            }
        }
    }
    let mut stilde: Vec<LatticePoint> = s2.iter().map(|pt| s2_to_stilde(pt, spec)).collect();
    stilde.sort();
    (s2, stilde)
}

pub fn s2_to_stilde(pt: &LatticePoint, spec: &SurgerySpec) -> LatticePoint {
    LatticePoint::new(2 * pt.first - pt.second + spec.p, pt.second)
}

pub fn stilde_to_s2(pt: &LatticePoint, spec: &SurgerySpec) -> Option<LatticePoint> {
    let twice = pt.first + pt.second - spec.p;
    even(twice).then(|| LatticePoint::new(twice / 2, pt.second))
}

/// Scan of the bounding box of `S~` against its predicate, independent of `S_2`.
pub fn enumerate_stilde_direct(spec: &SurgerySpec) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for g in 0..=2 * spec.excess() {
        for m in 0..=2 * spec.ab() {
            if in_stilde(g, m, spec) {
                out.push(LatticePoint::new(g, m));
            }
        }
    }
    out
}

/// The integer points on the upper edge `l = m/2 + p/2 - ab`, `0 < m < 2ab`, excluded from `S_2`.
pub fn s1_edge(spec: &SurgerySpec) -> Vec<LatticePoint> {
    (1..2 * spec.ab())
        .filter(|&m| coprime_to_knot(m, spec) && even(m + spec.p))
        .map(|m| LatticePoint::new((m + spec.p) / 2 - spec.ab(), m))
        .collect()
}

/// `S_1 = S_2` together with its upper edge.
pub fn enumerate_s1(spec: &SurgerySpec) -> Vec<LatticePoint> {
    let (s2, _) = enumerate_s2_and_stilde(spec);
    let all: BTreeSet<LatticePoint> = s2.into_iter().chain(s1_edge(spec)).collect();
    all.into_iter().collect()
}

pub fn labels_to_csv(labels: &[IrrepLabel]) -> String {
    let mut out = String::from("h,k,l\n");
    for x in labels {
        out.push_str(&format!("{},{},{}\n", x.h, x.k, x.l));
    }
    out
}

/// CSV with the given column names for the two coordinates.
pub fn points_to_csv(points: &[LatticePoint], columns: (&str, &str)) -> String {
    let mut out = format!("{},{}\n", columns.0, columns.1);
    for x in points {
        out.push_str(&format!("{},{}\n", x.first, x.second));
    }
    out
}

pub fn labels_to_json(labels: &[IrrepLabel]) -> serde_json::Value {
    serde_json::Value::Array(
        labels
            .iter()
            .map(|x| serde_json::json!([x.h, x.k, x.l]))
            .collect(),
    )
}

pub fn points_to_json(points: &[LatticePoint]) -> serde_json::Value {
    serde_json::Value::Array(
        points
            .iter()
            .map(|x| serde_json::json!([x.first, x.second]))
            .collect(),
    )
}
