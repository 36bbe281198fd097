//! Bounded-window evaluation of an operation on the integers.

use serde::Serialize;

use crate::error::{Result, WmError};

/// An operation on `i64` with closed forms for `[r]` and `r⁻¹`.
#[derive(Debug, Clone, Copy)]
pub struct FunctionMagma {
    pub op_rule: fn(i64, i64) -> Option<i64>,
    pub identity_rule: fn(i64) -> Option<i64>,
    pub inverse_rule: fn(i64) -> Option<i64>,
    /// Elements are drawn from `[-window, window]`.
    pub window: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TallyLine {
    pub check: &'static str,
    pub checked: u64,
    pub failed: u64,
    pub first_failure: Option<Vec<i64>>,
}

impl TallyLine {
    fn new(check: &'static str) -> Self {
        TallyLine {
            check,
            checked: 0,
            failed: 0,
            first_failure: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Vec<i64>) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(witness());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpotCheckReport {
    pub window: i64,
    /// Axiom checks; all should pass.
    pub axioms: Vec<TallyLine>,
    /// Associativity; a failure here is the expected outcome.
    pub associativity: TallyLine,
    /// Tuples skipped because an intermediate value overflowed.
    pub skipped: u64,
}

impl SpotCheckReport {
    pub fn axioms_hold(&self) -> bool {
        self.axioms.iter().all(TallyLine::passed)
    }

    pub fn associativity_witness(&self) -> Option<(i64, i64, i64)> {
        self.associativity
            .first_failure
            .as_ref()
            .map(|w| (w[0], w[1], w[2]))
    }
}

fn neg_add_op(a: i64, b: i64) -> Option<i64> {
    a.checked_add(b)?.checked_neg()
}

fn neg_add_identity(r: i64) -> Option<i64> {
    r.checked_mul(-2)
}

fn neg_add_inverse(r: i64) -> Option<i64> {
    Some(r)
}

impl FunctionMagma {
    /// `r * m = -(r + m)` with `[r] = -2r` and `r⁻¹ = r`.
    pub fn negated_addition(window: i64) -> Self {
        FunctionMagma {
            op_rule: neg_add_op,
            identity_rule: neg_add_identity,
            inverse_rule: neg_add_inverse,
            window,
        }
    }

    pub fn spot_check(&self) -> Result<SpotCheckReport> {
        if self.window < 2 {
            return Err(WmError::usage("the integer window needs W >= 2"));
        }
        let w = self.window;
        let op = self.op_rule;
        let mut skipped = 0u64;

        let mut a1 = TallyLine::new("A1: (r*m)*n = (m*r)*n");
        let mut a2 = TallyLine::new("A2: r*[r] = r");
        let mut a3 = TallyLine::new("A3: r^-1*r = [r] and r^-1*[r] = r^-1");
        let mut a4u = TallyLine::new("A4: at most one z in window with m*z = r");
        let mut a4c = TallyLine::new("A4: m*(m^-1*r) = r");
        let mut assoc = TallyLine::new("associativity: (r*m)*n = r*(m*n)");

        for r in -w..=w {
            match (self.identity_rule)(r).and_then(|e| op(r, e).map(|v| (e, v))) {
                Some((e, v)) => a2.record(v == r, || vec![r, e]),
                None => skipped += 1,
            }
            let inv = (self.identity_rule)(r).and_then(|e| {
                let s = (self.inverse_rule)(r)?;
                Some((e, s, op(s, r)?, op(s, e)?))
            });
            match inv {
                Some((e, s, sr, se)) => a3.record(sr == e && se == s, || vec![r, s]),
                None => skipped += 1,
            }
        }

        for r in -w..=w {
            for m in -w..=w {
                let sols = (-w..=w).filter(|&z| op(m, z) == Some(r)).count();
                a4u.record(sols <= 1, || vec![m, r]);
                match (self.inverse_rule)(m).and_then(|s| op(m, op(s, r)?)) {
                    Some(v) => a4c.record(v == r, || vec![m, r]),
                    None => skipped += 1,
                }
                for n in -w..=w {
                    let sc = op(r, m)
                        .zip(op(m, r))
                        .and_then(|(rm, mr)| Some((op(rm, n)?, op(mr, n)?)));
                    match sc {
                        Some((lhs, rhs)) => a1.record(lhs == rhs, || vec![r, m, n]),
                        None => skipped += 1,
                    }
                    let associative = op(r, m)
                        .and_then(|rm| op(rm, n))
                        .and_then(|lhs| Some((lhs, op(r, op(m, n)?)?)));
                    match associative {
                        Some((lhs, rhs)) => assoc.record(lhs == rhs, || vec![r, m, n]),
                        None => skipped += 1,
                    }
                }
            }
        }

        Ok(SpotCheckReport {
            window: w,
            axioms: vec![a1, a2, a3, a4u, a4c],
            associativity: assoc,
            skipped,
        })
    }
}

/// Spot-checks negated addition on `[-window, window]`.
pub fn spot_check_integer_example(window: i64) -> Result<SpotCheckReport> {
    FunctionMagma::negated_addition(window).spot_check()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_ten_axioms_hold_and_associativity_fails() {
        let report = spot_check_integer_example(10).unwrap();
        assert!(report.axioms_hold(), "{report:?}");
        assert_eq!(report.skipped, 0);
        assert_eq!(report.axioms[0].checked, 21 * 21 * 21);
        // (r*m)*n - r*(m*n) = 2(r - n) over the integers
        let (r, m, n) = report.associativity_witness().unwrap();
        assert_ne!(r, n);
        let lhs = neg_add_op(neg_add_op(r, m).unwrap(), n);
        let rhs = neg_add_op(r, neg_add_op(m, n).unwrap());
        assert_ne!(lhs, rhs);
        let expected_failures = 21u64 * 21 * 20;
        assert_eq!(report.associativity.failed, expected_failures);
    }

    #[test]
    fn bracket_of_one() {
        assert_eq!(neg_add_identity(1), Some(-2));
        assert_eq!(neg_add_op(1, -2), Some(1));
        assert!(spot_check_integer_example(2).unwrap().axioms_hold());
    }

    #[test]
    fn small_window_rejected() {
        assert!(spot_check_integer_example(1).is_err());
    }
}
