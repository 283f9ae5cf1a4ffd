//! Weil polynomials of abelian surfaces.
//!
//! A monic quartic `X^4 + aX^3 + bX^2 + aqX + q^2` is the Weil polynomial of
//! an abelian surface over `F_q` exactly when `(a, b)` lies in the region cut
//! out by the Weil bounds and satisfies one of four arithmetic conditions.
//! Each condition pins down the p-rank. All square-root comparisons are done
//! by squaring with sign guards.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{is_perfect_square, valuation, zp_is_square, PrimePower};
use crate::error::{Error, Result};

/// The coefficients `(a, b)` of `X^4 + aX^3 + bX^2 + aqX + q^2` over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeilCoeffs {
    pub q: PrimePower,
    pub a: i64,
    pub b: i64,
}

impl WeilCoeffs {
    pub fn new(q: PrimePower, a: i64, b: i64) -> Self {
        Self { q, a, b }
    }

    /// `a^2 - 4(b - 2q)`, the discriminant of `Y^2 + aY + (b - 2q)`, whose
    /// roots are the values `alpha + q/alpha` over the Frobenius roots.
    pub fn discriminant(&self) -> i64 {
        self.a * self.a - 4 * (self.b - 2 * self.q.q())
    }

    /// `(b + 2q)^2 - 4q a^2`.
    pub fn norm_discriminant(&self) -> i64 {
        let q = self.q.q();
        (self.b + 2 * q).pow(2) - 4 * q * self.a * self.a
    }

    /// Coefficients of the quartic, constant term first.
    pub fn polynomial(&self) -> [i64; 5] {
        let q = self.q.q();
        [q * q, self.a * q, self.b, self.a, 1]
    }
}

impl fmt::Display for WeilCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q={}, a={}, b={})", self.q, self.a, self.b)
    }
}

/// One row of the supersingular table: `(a, b)` of a fixed shape, valid under
/// conditions on `p` and `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SupersingularRow {
    /// `(0, 0)`
    Zero,
    /// `(0, -q)`
    ZeroMinusQ,
    /// `(0, q)`
    ZeroQ,
    /// `(0, -2q)`
    ZeroMinusTwoQ,
    /// `(0, 2q)`
    ZeroTwoQ,
    /// `(±sqrt(q), q)`
    SqrtQ,
    /// `(±sqrt(2q), q)`
    SqrtTwoQ,
    /// `(±2 sqrt(q), 3q)`
    TwoSqrtQ,
    /// `(±sqrt(5q), 3q)`
    SqrtFiveQ,
}

impl SupersingularRow {
    pub fn label(self) -> &'static str {
        match self {
            SupersingularRow::Zero => "(0,0)",
            SupersingularRow::ZeroMinusQ => "(0,-q)",
            SupersingularRow::ZeroQ => "(0,q)",
            SupersingularRow::ZeroMinusTwoQ => "(0,-2q)",
            SupersingularRow::ZeroTwoQ => "(0,2q)",
            SupersingularRow::SqrtQ => "(+-sqrt(q),q)",
            SupersingularRow::SqrtTwoQ => "(+-sqrt(2q),q)",
            SupersingularRow::TwoSqrtQ => "(+-2sqrt(q),3q)",
            SupersingularRow::SqrtFiveQ => "(+-sqrt(5q),3q)",
        }
    }
}

/// The arithmetic condition under which `(a, b)` is a Weil polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    /// `p` does not divide `b`; p-rank 2.
    Ordinary,
    /// `v_p(b) >= m/2`, `p` does not divide `a`, and `delta` is zero or a
    /// non-square in `Z_p`; p-rank 1.
    AlmostOrdinary,
    /// `q | b`, `v_p(a) >= m/2` and the discriminant is a square; p-rank 0.
    SupersingularSplit,
    /// A row of the supersingular table; p-rank 0.
    Supersingular(SupersingularRow),
}

impl Condition {
    pub fn p_rank(self) -> u8 {
        match self {
            Condition::Ordinary => 2,
            Condition::AlmostOrdinary => 1,
            Condition::SupersingularSplit | Condition::Supersingular(_) => 0,
        }
    }

    pub fn label(self) -> String {
        match self {
            Condition::Ordinary => "ordinary".into(),
            Condition::AlmostOrdinary => "almost-ordinary".into(),
            Condition::SupersingularSplit => "supersingular".into(),
            Condition::Supersingular(row) => format!("supersingular{}", row.label()),
        }
    }
}

impl Serialize for Condition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

/// The factorization `(X^2 - sX + q)(X^2 - tX + q)` of a split Weil
/// polynomial, normalized so that `|s| >= |t|` and `s >= 0` when `s = -t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SplitForm {
    pub s: i64,
    pub t: i64,
}

impl SplitForm {
    /// Normalizes an unordered pair.
    pub fn normalized(x: i64, y: i64) -> Self {
        let (mut s, mut t) = if x.abs() >= y.abs() { (x, y) } else { (y, x) };
        if s == -t && s < 0 {
            std::mem::swap(&mut s, &mut t);
        }
        Self { s, t }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityVerdict {
    pub admissible: bool,
    pub conditions: BTreeSet<Condition>,
    pub p_rank: Option<u8>,
    pub simple: Option<bool>,
}

/// `|a| <= 4 sqrt(q)` and `2|a| sqrt(q) - 2q <= b <= a^2/4 + 2q`, as exact
/// integer inequalities.
pub fn bounds_ok(w: &WeilCoeffs) -> bool {
    let q = w.q.q();
    w.a * w.a <= 16 * q
        && 4 * w.b <= w.a * w.a + 8 * q
        && w.b + 2 * q >= 0
        && w.norm_discriminant() >= 0
}

/// `p` does not divide `b`.
pub fn ordinary_condition(w: &WeilCoeffs) -> bool {
    valuation(w.b, w.q.p()).is_zero()
}

pub fn almost_ordinary_condition(w: &WeilCoeffs) -> bool {
    let (p, m) = (w.q.p(), w.q.m());
    if !(valuation(w.b, p).at_least_half(m) && valuation(w.a, p).is_zero()) {
        return false;
    }
    match w.norm_discriminant() {
        0 => true,
        delta => !zp_is_square(p, delta).expect("nonzero"),
    }
}

pub fn supersingular_split_condition(w: &WeilCoeffs) -> bool {
    let (p, m) = (w.q.p(), w.q.m());
    if !(valuation(w.b, p).at_least(m)
        && valuation(w.a, p).at_least_half(m)
        && is_perfect_square(w.discriminant()).is_some())
    {
        return false;
    }
    let Some(root) = w.q.sqrt() else {
        return true;
    };
    let a_red = w.a / root;
    let b_red = w.b / w.q.q();
    if b_red == 2 && p % 4 == 1 {
        return false;
    }
    // Rejects when a' and b' differ in parity, not when they agree.
    if (a_red - b_red).rem_euclid(2) == 1 && p % 3 == 1 {
        return false;
    }
    true
}

/// The supersingular table row matched by `(a, b)`, if any. At most one row
/// can match since the rows have distinct shapes.
pub fn supersingular_table_row(w: &WeilCoeffs) -> Option<SupersingularRow> {
    use SupersingularRow::*;
    let (q, p) = (w.q.q(), w.q.p());
    let square = w.q.is_square();
    let (a, b) = (w.a, w.b);
    let abs_a = a.abs();
    let rows = [
        (
            Zero,
            a == 0 && b == 0 && ((square && p % 8 != 1) || (!square && p != 2)),
        ),
        (
            ZeroMinusQ,
            a == 0 && b == -q && ((square && p % 12 != 1) || (!square && p != 3)),
        ),
        (ZeroQ, a == 0 && b == q && !square),
        (ZeroMinusTwoQ, a == 0 && b == -2 * q && !square),
        (ZeroTwoQ, a == 0 && b == 2 * q && square && p % 4 == 1),
        (SqrtQ, b == q && w.q.sqrt() == Some(abs_a) && p % 5 != 1),
        (SqrtTwoQ, b == q && p == 2 && w.q.sqrt_pq() == Some(abs_a)),
        (
            TwoSqrtQ,
            b == 3 * q && w.q.sqrt().map(|r| 2 * r) == Some(abs_a) && p % 3 == 1,
        ),
        (
            SqrtFiveQ,
            b == 3 * q && p == 5 && w.q.sqrt_pq() == Some(abs_a),
        ),
    ];
    rows.into_iter().find(|&(_, hit)| hit).map(|(row, _)| row)
}

/// Every arithmetic condition `(a, b)` satisfies, ignoring the bounds.
pub fn matched_conditions(w: &WeilCoeffs) -> BTreeSet<Condition> {
    let mut out = BTreeSet::new();
    if ordinary_condition(w) {
        out.insert(Condition::Ordinary);
    }
    if almost_ordinary_condition(w) {
        out.insert(Condition::AlmostOrdinary);
    }
    if supersingular_split_condition(w) {
        out.insert(Condition::SupersingularSplit);
    }
    if let Some(row) = supersingular_table_row(w) {
        out.insert(Condition::Supersingular(row));
    }
    out
}

pub fn admissibility(w: &WeilCoeffs) -> AdmissibilityVerdict {
    let conditions = matched_conditions(w);
    let admissible = bounds_ok(w) && !conditions.is_empty();
    let (p_rank, simple) = if admissible {
        let rank = conditions.iter().next().map(|c| c.p_rank());
        (rank, Some(simple_unchecked(w)))
    } else {
        (None, None)
    };
    AdmissibilityVerdict {
        admissible,
        conditions,
        p_rank,
        simple,
    }
}

pub fn is_admissible(w: &WeilCoeffs) -> bool {
    bounds_ok(w) && !matched_conditions(w).is_empty()
}

/// Whether the isogeny class is simple. Errors unless `w` is admissible.
pub fn is_simple(w: &WeilCoeffs) -> Result<bool> {
    if !is_admissible(w) {
        return Err(not_admissible(w));
    }
    Ok(simple_unchecked(w))
}

fn simple_unchecked(w: &WeilCoeffs) -> bool {
    if is_perfect_square(w.discriminant()).is_none() {
        return true;
    }
    let (q, p) = (w.q.q(), w.q.p());
    let Some(root) = w.q.sqrt() else {
        return false;
    };
    (w.a == 0 && w.b == 2 * q && p % 4 == 1)
        || (w.a.abs() == 2 * root && w.b == 3 * q && p % 3 == 1)
}

pub(crate) fn not_admissible(w: &WeilCoeffs) -> Error {
    Error::NotAdmissible {
        q: w.q.q(),
        a: w.a,
        b: w.b,
    }
}

/// The factorization into two quadratics `X^2 - sX + q`, present exactly
/// when the discriminant is a perfect square.
pub fn split(w: &WeilCoeffs) -> Option<SplitForm> {
    let z = is_perfect_square(w.discriminant())?;
    // z and a share parity since z^2 = a^2 mod 4.
    Some(SplitForm::normalized((-w.a + z) / 2, (-w.a - z) / 2))
}

/// `P(1) = 1 + a + b + aq + q^2`, the number of rational points on any
/// surface in the class.
pub fn group_order(w: &WeilCoeffs) -> i64 {
    let q = w.q.q();
    1 + w.a + w.b + w.a * q + q * q
}

/// Power sums `p_1..=p_k` of the roots of the Weil polynomial, by Newton's
/// identities.
pub fn power_sums(w: &WeilCoeffs, k: usize) -> Vec<i128> {
    let q = w.q.q() as i128;
    let coeffs = [w.a as i128, w.b as i128, w.a as i128 * q, q * q];
    let mut sums: Vec<i128> = Vec::with_capacity(k);
    for n in 1..=k {
        let mut acc: i128 = 0;
        for i in 1..=(n - 1).min(4) {
            acc -= coeffs[i - 1] * sums[n - i - 1];
        }
        if n <= 4 {
            acc -= n as i128 * coeffs[n - 1];
        }
        sums.push(acc);
    }
    sums
}

/// `q^k + 1 - p_k`: the number of `F_{q^k}`-points on a genus-2 curve whose
/// Jacobian has this Weil polynomial.
pub fn predicted_curve_count(w: &WeilCoeffs, k: u32) -> i64 {
    assert!(k >= 1, "extension degree must be positive");
    let pk = power_sums(w, k as usize)[k as usize - 1];
    let count = (w.q.q() as i128).pow(k) + 1 - pk;
    i64::try_from(count).expect("point count overflows i64")
}
