//! Which isogeny classes of abelian surfaces contain a genus-2 Jacobian.
//!
//! Simple and split classes are decided by separate exclusion tables. Rows
//! of the split table are tagged with a p-rank and only consulted for
//! surfaces of that p-rank; untagged rows always apply. Rows are OR-ed.

use crate::arith::{is_squarefree, prime_divisors};
use crate::error::{Error, Result};
use crate::weil::{admissibility, not_admissible, split, SplitForm, WeilCoeffs};

/// Whether a simple class fails to contain a Jacobian.
pub fn simple_non_jacobian(w: &WeilCoeffs) -> Result<bool> {
    let verdict = admissibility(w);
    if !verdict.admissible {
        return Err(not_admissible(w));
    }
    if verdict.simple != Some(true) {
        return Err(Error::NotSimple {
            q: w.q.q(),
            a: w.a,
            b: w.b,
        });
    }
    Ok(simple_row_matches(w))
}

fn simple_row_matches(w: &WeilCoeffs) -> bool {
    let (q, p) = (w.q.q(), w.q.p());
    let square = w.q.is_square();
    let (a, b) = (w.a, w.b);

    if a * a - b == q && b < 0 {
        let divisors = prime_divisors(b).expect("b < 0");
        if divisors.iter().all(|d| d % 3 == 1) {
            return true;
        }
    }
    if a != 0 {
        return false;
    }
    b == 1 - 2 * q
        || (p > 2 && b == 2 - 2 * q)
        || (b == -q && ((p % 12 == 11 && square) || (p == 3 && square) || (p == 2 && !square)))
        || ((q == 2 || q == 3) && b == -2 * q)
}

/// Whether a split class `(X^2 - sX + q)(X^2 - tX + q)` of the given p-rank
/// fails to contain a Jacobian.
pub fn split_non_jacobian(q: crate::PrimePower, split: SplitForm, p_rank: u8) -> bool {
    let SplitForm { s, t } = split;
    let (p, qv) = (q.p(), q.q());
    let square = q.is_square();

    if (s - t).abs() == 1 {
        return true;
    }
    match p_rank {
        2 => (s == t && [-3, -4, -7].contains(&(t * t - 4 * qv))) || (qv == 2 && s == 1 && t == -1),
        1 => square && s * s == 4 * qv && s != t && is_squarefree(s - t).expect("s != t"),
        0 => {
            (p > 3 && s * s != t * t)
                || (p == 3 && !square && s * s == 3 * qv && t * t == 3 * qv)
                || (p == 3 && square && (s - t) % (3 * q.sqrt().expect("square")) != 0)
                || (p == 2 && (s * s - t * t) % (2 * qv) != 0)
                || ((qv == 2 || qv == 3) && s == t)
                || ((qv == 4 || qv == 9) && s * s == 4 * qv && t * t == 4 * qv)
        }
        _ => false,
    }
}

/// Whether the isogeny class of `w` contains the Jacobian of a genus-2
/// curve. Errors when `w` is not a Weil polynomial at all.
pub fn is_jacobian(w: &WeilCoeffs) -> Result<bool> {
    let verdict = admissibility(w);
    if !verdict.admissible {
        return Err(not_admissible(w));
    }
    if verdict.simple == Some(true) {
        return Ok(!simple_row_matches(w));
    }
    let form = split(w).expect("non-simple admissible classes split");
    let rank = verdict.p_rank.expect("admissible");
    Ok(!split_non_jacobian(w.q, form, rank))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PrimePower;

    fn pp(q: i64) -> PrimePower {
        PrimePower::new(q).unwrap()
    }

    fn w(q: i64, a: i64, b: i64) -> WeilCoeffs {
        WeilCoeffs::new(pp(q), a, b)
    }

    #[test]
    fn simple_table() {
        assert!(simple_non_jacobian(&w(3, 0, -5)).unwrap());
        assert!(simple_non_jacobian(&w(11, 2, -7)).unwrap());
        assert!(!simple_non_jacobian(&w(13, 9, 42)).unwrap());
        // a^2 - b = q, b < 0, but 5 is not 1 mod 3.
        assert!(!simple_non_jacobian(&w(11, 1, -10)).unwrap());
        assert!(matches!(
            simple_non_jacobian(&w(2, -2, 5)),
            Err(Error::NotSimple { .. })
        ));
        assert!(matches!(
            simple_non_jacobian(&w(25, -1, 25)),
            Err(Error::NotAdmissible { .. })
        ));
    }

    #[test]
    fn split_table() {
        assert!(split_non_jacobian(pp(2), SplitForm { s: 1, t: 0 }, 2));
        assert!(split_non_jacobian(pp(2), SplitForm { s: -1, t: -1 }, 2));
        assert!(!split_non_jacobian(pp(4), SplitForm { s: -3, t: 1 }, 2));
        assert!(split_non_jacobian(pp(2), SplitForm { s: 1, t: -1 }, 2));
        // Rank-tagged rows do not fire for other ranks.
        assert!(!split_non_jacobian(pp(3), SplitForm { s: -1, t: -1 }, 2));
        assert!(split_non_jacobian(pp(3), SplitForm { s: 0, t: 0 }, 0));
        assert!(split_non_jacobian(pp(5), SplitForm { s: 4, t: 0 }, 0));
        assert!(!split_non_jacobian(pp(5), SplitForm { s: 0, t: 0 }, 0));
    }

    #[test]
    fn jacobian_verdicts() {
        assert!(!is_jacobian(&w(5, 8, 26)).unwrap());
        assert!(is_jacobian(&w(2, 1, 0)).unwrap());
        assert!(!is_jacobian(&w(4, 6, 17)).unwrap());
        assert!(is_jacobian(&w(4, 0, -1)).unwrap());
        assert!(is_jacobian(&w(2, -1, 2)).unwrap());
        assert!(matches!(
            is_jacobian(&w(2, 0, 5)),
            Err(Error::NotAdmissible { .. })
        ));
    }
}
