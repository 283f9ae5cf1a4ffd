//! Per-class records, and the isogeny classes whose group order is divisible
//! by a power of `q`.
//!
//! [`enumerate_order_divisible`] scans the whole admissible `(a, b)` region,
//! so for `k = 2` it is an independent check on [`q_squared_closed_form`].

use std::collections::BTreeSet;

use serde::Serialize;

use crate::arith::PrimePower;
use crate::error::Result;
use crate::jacobian::is_jacobian;
use crate::weil::{admissibility, group_order, split, Condition, SplitForm, WeilCoeffs};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationRecord {
    pub q: PrimePower,
    pub a: i64,
    pub b: i64,
    pub admissible: bool,
    pub conditions: BTreeSet<Condition>,
    pub p_rank: Option<u8>,
    pub simple: Option<bool>,
    pub split: Option<SplitForm>,
    pub order: i64,
    /// `order / q^2` when `q^2` divides the order.
    pub c: Option<i64>,
    pub jacobian: Option<bool>,
}

impl ClassificationRecord {
    pub fn from_coeffs(w: &WeilCoeffs) -> Self {
        let verdict = admissibility(w);
        let order = group_order(w);
        let q2 = w.q.q() * w.q.q();
        let jacobian = verdict
            .admissible
            .then(|| is_jacobian(w).expect("admissible"));
        Self {
            q: w.q,
            a: w.a,
            b: w.b,
            admissible: verdict.admissible,
            conditions: verdict.conditions,
            p_rank: verdict.p_rank,
            simple: verdict.simple,
            split: if verdict.admissible { split(w) } else { None },
            order,
            c: (order % q2 == 0).then_some(order / q2),
            jacobian,
        }
    }

    pub fn coeffs(&self) -> WeilCoeffs {
        WeilCoeffs::new(self.q, self.a, self.b)
    }
}

pub fn classify_record(q: i64, a: i64, b: i64) -> Result<ClassificationRecord> {
    let q = PrimePower::new(q)?;
    Ok(ClassificationRecord::from_coeffs(&WeilCoeffs::new(q, a, b)))
}

/// Every `(a, b)` allowed by the Weil bounds `a^2 <= 16q`,
/// `-2q <= b <= a^2/4 + 2q`, in lexicographic order.
pub fn bound_rectangle(q: PrimePower) -> impl Iterator<Item = (i64, i64)> {
    let qv = q.q();
    let a_max = (16 * qv).isqrt();
    (-a_max..=a_max).flat_map(move |a| {
        let b_max = (a * a + 8 * qv).div_euclid(4);
        (-2 * qv..=b_max).map(move |b| (a, b))
    })
}

/// All admissible classes over `F_q` whose group order is divisible by
/// `q^k`, sorted by `(a, b)`.
pub fn enumerate_order_divisible(q: PrimePower, k: u32) -> Vec<ClassificationRecord> {
    assert!(k >= 1, "k must be positive");
    let modulus = q.q().checked_pow(k);
    bound_rectangle(q)
        .map(|(a, b)| WeilCoeffs::new(q, a, b))
        .filter(|w| {
            let order = group_order(w);
            // Orders are positive, so an overflowing q^k cannot divide one.
            modulus.is_some_and(|n| order % n == 0)
        })
        .filter(crate::weil::is_admissible)
        .map(|w| ClassificationRecord::from_coeffs(&w))
        .collect()
}

/// Isolated classes with `q^2 | P(1)` for small `q`.
const SMALL_Q_TABLE: &[(i64, &[(i64, i64)])] = &[
    (13, &[(9, 42)]),
    (9, &[(6, 20)]),
    (7, &[(4, 16)]),
    (5, &[(3, 6), (8, 26)]),
    (4, &[(2, 5), (4, 11), (6, 17)]),
    (3, &[(1, 4), (3, 5), (4, 10)]),
    (2, &[(0, 3), (1, 0), (1, 4), (2, 5), (3, 6)]),
];

/// Classes with `q^2 | P(1)` and no Jacobian.
const NON_JACOBIAN_TABLE: &[(i64, &[(i64, i64)])] = &[
    (5, &[(8, 26)]),
    (4, &[(6, 17)]),
    (2, &[(-2, 5), (0, 3), (1, 4), (2, 5), (3, 6)]),
];

fn table_row(table: &'static [(i64, &'static [(i64, i64)])], q: i64) -> &'static [(i64, i64)] {
    table
        .iter()
        .find(|(key, _)| *key == q)
        .map(|(_, row)| *row)
        .unwrap_or(&[])
}

/// The classes with `q^2 | #J(F_q)`, from the four infinite families plus
/// the small-`q` table, sorted by `(a, b)`.
pub fn q_squared_closed_form(q: PrimePower) -> Vec<(i64, i64)> {
    let (qv, p, m) = (q.q(), q.p(), q.m());
    let mut out = BTreeSet::new();
    if qv % 2 == 1 && qv > 8 {
        out.insert((1, -(qv + 2)));
    }
    out.insert((0, -1));
    if m % 2 == 1 || p % 4 != 1 {
        out.insert((-1, qv));
    }
    out.insert((-2, 2 * qv + 1));
    out.extend(table_row(SMALL_Q_TABLE, qv).iter().copied());
    out.into_iter().collect()
}

/// The classes with `q^2 | #J(F_q)` that contain no Jacobian.
pub fn known_non_jacobians(q: PrimePower) -> BTreeSet<(i64, i64)> {
    table_row(NON_JACOBIAN_TABLE, q.q())
        .iter()
        .copied()
        .collect()
}

/// `order <= (sqrt(q) + 1)^4`, evaluated exactly:
/// `(sqrt(q)+1)^4 = q^2 + 6q + 1 + (4q + 4) sqrt(q)`.
pub fn within_upper_weil_bound(q: PrimePower, order: i64) -> bool {
    let qv = q.q() as i128;
    let lhs = order as i128 - qv * qv - 6 * qv - 1;
    lhs <= 0 || lhs * lhs <= (4 * qv + 4).pow(2) * qv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::prime_powers_up_to;

    fn pp(q: i64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    fn pairs(records: &[ClassificationRecord]) -> Vec<(i64, i64)> {
        records.iter().map(|r| (r.a, r.b)).collect()
    }

    #[test]
    fn records() {
        let r = classify_record(2, -1, 2).unwrap();
        assert!(r.admissible);
        assert_eq!(r.conditions, BTreeSet::from([Condition::AlmostOrdinary]));
        assert_eq!(r.p_rank, Some(1));
        assert_eq!(r.simple, Some(false));
        assert_eq!(r.split, Some(SplitForm { s: 2, t: -1 }));
        assert_eq!((r.order, r.c, r.jacobian), (4, Some(1), Some(true)));

        let r = classify_record(2, 1, 0).unwrap();
        assert_eq!(r.conditions, BTreeSet::from([Condition::AlmostOrdinary]));
        assert_eq!((r.p_rank, r.simple, r.split), (Some(1), Some(true), None));
        assert_eq!((r.order, r.c, r.jacobian), (8, Some(2), Some(true)));

        assert!(classify_record(12, 0, 0).is_err());

        let r = classify_record(25, -1, 25).unwrap();
        assert!(!r.admissible);
        assert_eq!(
            (r.p_rank, r.simple, r.split, r.jacobian),
            (None, None, None, None)
        );
        assert_eq!(r.order, 625);
    }

    #[test]
    fn enumerations() {
        assert_eq!(
            pairs(&enumerate_order_divisible(pp(13), 2)),
            vec![(-2, 27), (-1, 13), (0, -1), (1, -15), (9, 42)]
        );
        assert_eq!(
            pairs(&enumerate_order_divisible(pp(2), 2)),
            vec![
                (-2, 5),
                (-1, 2),
                (0, -1),
                (0, 3),
                (1, 0),
                (1, 4),
                (2, 5),
                (3, 6)
            ]
        );
        assert_eq!(
            pairs(&enumerate_order_divisible(pp(7), 2)),
            vec![(-2, 15), (-1, 7), (0, -1), (4, 16)]
        );
    }

    #[test]
    fn closed_forms() {
        assert_eq!(
            q_squared_closed_form(pp(9)),
            vec![(-2, 19), (-1, 9), (0, -1), (1, -11), (6, 20)]
        );
        assert_eq!(
            q_squared_closed_form(pp(25)),
            vec![(-2, 51), (0, -1), (1, -27)]
        );
        assert_eq!(
            q_squared_closed_form(pp(8)),
            vec![(-2, 17), (-1, 8), (0, -1)]
        );
        assert_eq!(
            q_squared_closed_form(pp(49)),
            vec![(-2, 99), (-1, 49), (0, -1), (1, -51)]
        );
    }

    #[test]
    fn exclusion_table() {
        assert_eq!(known_non_jacobians(pp(5)), BTreeSet::from([(8, 26)]));
        assert_eq!(
            known_non_jacobians(pp(2)),
            BTreeSet::from([(-2, 5), (0, 3), (1, 4), (2, 5), (3, 6)])
        );
        assert!(known_non_jacobians(pp(13)).is_empty());
    }

    #[test]
    fn divisibility_is_monotone() {
        for q in prime_powers_up_to(64) {
            let by_q: BTreeSet<_> = pairs(&enumerate_order_divisible(q, 1))
                .into_iter()
                .collect();
            let by_q2 = pairs(&enumerate_order_divisible(q, 2));
            assert!(by_q2.iter().all(|x| by_q.contains(x)), "q={q}");
        }
    }

    #[test]
    fn quotient_respects_weil_bound() {
        for q in prime_powers_up_to(200) {
            for r in enumerate_order_divisible(q, 2) {
                let c = r.c.unwrap();
                assert!(within_upper_weil_bound(q, c * q.q() * q.q()), "q={q} {r:?}");
                if q.q() > 27 {
                    assert_eq!(c, 1, "q={q}");
                }
            }
        }
    }

    #[test]
    fn upper_bound_is_tight() {
        // (sqrt(4)+1)^4 = 81.
        assert!(within_upper_weil_bound(pp(4), 81));
        assert!(!within_upper_weil_bound(pp(4), 82));
        // (sqrt(2)+1)^4 = 33.97...
        assert!(within_upper_weil_bound(pp(2), 33));
        assert!(!within_upper_weil_bound(pp(2), 34));
    }
}
