//! The four-axiom verification engine and the derived element calculus.
//!
//! Unparenthesized products are read left-associated, so the
//! semi-commutativity axiom is `(r*m)*n = (m*r)*n`.
//!
//! The unique-solvability axiom has two readings, selected by [`Axiom4`]:
//! `Weak` only asks every row `z -> m*z` to be a bijection, `Strong`
//! additionally asks for an inverse `s` of `m` with `m*(s*x) = x` for all
//! `x`, which makes the literal product `m⁻¹*x` the solution of `m*z = x`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::check::Check;
use crate::table::{CayleyTable, Element};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Axiom4 {
    Weak,
    #[default]
    Strong,
}

impl fmt::Display for Axiom4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom4::Weak => "weak",
            Axiom4::Strong => "strong",
        })
    }
}

impl std::str::FromStr for Axiom4 {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "weak" => Ok(Axiom4::Weak),
            "strong" => Ok(Axiom4::Strong),
            other => Err(format!("unknown axiom-4 mode `{other}` (expected weak|strong)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Axiom {
    A1,
    A2,
    A3,
    #[serde(rename = "A4-unique")]
    A4Unique,
    #[serde(rename = "A4-compat")]
    A4Compat,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::A1 => "A1",
            Axiom::A2 => "A2",
            Axiom::A3 => "A3",
            Axiom::A4Unique => "A4-unique",
            Axiom::A4Compat => "A4-compat",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WitnessPolicy {
    /// Stop at the lexicographically first witness of each axiom.
    #[default]
    First,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub witness: Vec<Element>,
    pub detail: String,
}

impl AxiomViolation {
    /// Re-evaluates the axiom's defining equation on the witness and
    /// returns `true` when the violation is reproduced.
    pub fn replay(&self, t: &CayleyTable) -> bool {
        let n = t.order();
        if self.witness.iter().any(|&x| x >= n) {
            return false;
        }
        match (self.axiom, self.witness.as_slice()) {
            (Axiom::A1, &[r, m, k]) => t.mul(t.mul(r, m), k) != t.mul(t.mul(m, r), k),
            (Axiom::A2, &[r]) => right_identities(t, r).is_empty(),
            (Axiom::A3, &[r]) => right_identities(t, r)
                .into_iter()
                .all(|e| inverse_candidates(t, r, e).is_empty()),
            (Axiom::A4Unique, &[m, z1, z2]) => z1 != z2 && t.mul(m, z1) == t.mul(m, z2),
            (Axiom::A4Unique, &[m, r]) => (0..n).all(|z| t.mul(m, z) != r),
            (Axiom::A4Compat, &[m, x]) => {
                let candidates = all_inverse_candidates(t, m);
                let none_compatible = candidates.iter().all(|&s| !is_compatible(t, m, s));
                let x_fails = candidates
                    .first()
                    .is_none_or(|&s0| t.mul(m, t.mul(s0, x)) != x);
                none_compatible && x_fails
            }
            _ => false,
        }
    }
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at {:?}: {}", self.axiom, self.witness, self.detail)
    }
}

/// All `z` with `r * z = r`.
pub fn right_identities(t: &CayleyTable, r: Element) -> Vec<Element> {
    (0..t.order()).filter(|&z| t.mul(r, z) == r).collect()
}

/// All `s` with `s * r = e` and `s * e = s`, for a chosen right identity `e` of `r`.
pub fn inverse_candidates(t: &CayleyTable, r: Element, e: Element) -> Vec<Element> {
    (0..t.order())
        .filter(|&s| t.mul(s, r) == e && t.mul(s, e) == s)
        .collect()
}

fn all_inverse_candidates(t: &CayleyTable, r: Element) -> Vec<Element> {
    let set: BTreeSet<Element> = right_identities(t, r)
        .into_iter()
        .flat_map(|e| inverse_candidates(t, r, e))
        .collect();
    set.into_iter().collect()
}

fn is_compatible(t: &CayleyTable, m: Element, s: Element) -> bool {
    (0..t.order()).all(|x| t.mul(m, t.mul(s, x)) == x)
}

/// Inverse candidates of `m` that also satisfy `m*(s*x) = x` for all `x`.
pub fn compatible_inverses(t: &CayleyTable, m: Element) -> Vec<Element> {
    all_inverse_candidates(t, m)
        .into_iter()
        .filter(|&s| is_compatible(t, m, s))
        .collect()
}

pub fn check_axiom1(t: &CayleyTable, policy: WitnessPolicy) -> Vec<AxiomViolation> {
    let n = t.order();
    let mut out = Vec::new();
    for r in 0..n {
        for m in 0..n {
            let (rm, mr) = (t.mul(r, m), t.mul(m, r));
            if rm == mr {
                continue;
            }
            for k in 0..n {
                let (lhs, rhs) = (t.mul(rm, k), t.mul(mr, k));
                if lhs != rhs {
                    out.push(AxiomViolation {
                        axiom: Axiom::A1,
                        witness: vec![r, m, k],
                        detail: format!("({r}*{m})*{k} = {lhs} but ({m}*{r})*{k} = {rhs}"),
                    });
                    if policy == WitnessPolicy::First {
                        return out;
                    }
                }
            }
        }
    }
    out
}

pub fn check_axiom2(t: &CayleyTable, policy: WitnessPolicy) -> Vec<AxiomViolation> {
    let mut out = Vec::new();
    for r in 0..t.order() {
        if right_identities(t, r).is_empty() {
            out.push(AxiomViolation {
                axiom: Axiom::A2,
                witness: vec![r],
                detail: format!("no z with {r}*z = {r}"),
            });
            if policy == WitnessPolicy::First {
                break;
            }
        }
    }
    out
}

pub fn check_axiom3(t: &CayleyTable, policy: WitnessPolicy) -> Vec<AxiomViolation> {
    let mut out = Vec::new();
    for r in 0..t.order() {
        let ids = right_identities(t, r);
        let detail = if ids.is_empty() {
            Some(format!("[{r}] is undefined (depends on A2)"))
        } else if ids.iter().all(|&e| inverse_candidates(t, r, e).is_empty()) {
            Some(format!("no s with s*{r} = [{r}] and s*[{r}] = s"))
        } else {
            None
        };
        if let Some(detail) = detail {
            out.push(AxiomViolation {
                axiom: Axiom::A3,
                witness: vec![r],
                detail,
            });
            if policy == WitnessPolicy::First {
                break;
            }
        }
    }
    out
}

pub fn check_axiom4(t: &CayleyTable, mode: Axiom4, policy: WitnessPolicy) -> Vec<AxiomViolation> {
    let n = t.order();
    let mut out = Vec::new();
    let first = policy == WitnessPolicy::First;
    'rows: for m in 0..n {
        let mut seen = vec![None; n];
        for z in 0..n {
            let v = t.mul(m, z);
            if let Some(z1) = seen[v] {
                out.push(AxiomViolation {
                    axiom: Axiom::A4Unique,
                    witness: vec![m, z1, z],
                    detail: format!("{m}*{z1} = {m}*{z} = {v}"),
                });
                if first {
                    break 'rows;
                }
            } else {
                seen[v] = Some(z);
            }
        }
        if !first {
            for (r, hit) in seen.iter().enumerate() {
                if hit.is_none() {
                    out.push(AxiomViolation {
                        axiom: Axiom::A4Unique,
                        witness: vec![m, r],
                        detail: format!("{m}*z = {r} has no solution"),
                    });
                }
            }
        }
    }
    if mode == Axiom4::Strong {
        for m in 0..n {
            let candidates = all_inverse_candidates(t, m);
            let Some(&s0) = candidates.first() else {
                // reported by A3
                continue;
            };
            if candidates.iter().any(|&s| is_compatible(t, m, s)) {
                continue;
            }
            let x = (0..n)
                .find(|&x| t.mul(m, t.mul(s0, x)) != x)
                .expect("incompatible candidate has a failing point");
            out.push(AxiomViolation {
                axiom: Axiom::A4Compat,
                witness: vec![m, x],
                detail: format!(
                    "no inverse s of {m} has {m}*(s*x) = x for all x; with s = {s0}: {m}*({s0}*{x}) = {}",
                    t.mul(m, t.mul(s0, x))
                ),
            });
            if first {
                break;
            }
        }
    }
    out
}

/// The outcome of a failed verification, grouped by axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub mode: Axiom4,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn violated_axioms(&self) -> BTreeSet<Axiom> {
        self.violations.iter().map(|v| v.axiom).collect()
    }

    pub fn of(&self, axiom: Axiom) -> impl Iterator<Item = &AxiomViolation> {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "not a Wm-group ({})", self.mode)?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// A table that passed verification, with its derived maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WmStructure {
    table: CayleyTable,
    mode: Axiom4,
    identity_map: Vec<Element>,
    inverse_map: Vec<Element>,
    inverse_candidates: Vec<Vec<Element>>,
    // solution[m * n + r] = the unique z with m*z = r
    solution: Vec<Element>,
}

impl WmStructure {
    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn mode(&self) -> Axiom4 {
        self.mode
    }

    pub fn name(&self) -> &str {
        self.table.name().unwrap_or("unnamed")
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table.mul(a, b)
    }

    /// `[r]`.
    #[inline]
    pub fn identity(&self, r: Element) -> Element {
        self.identity_map[r]
    }

    /// `r⁻¹`.
    #[inline]
    pub fn inverse(&self, r: Element) -> Element {
        self.inverse_map[r]
    }

    pub fn identity_map(&self) -> &[Element] {
        &self.identity_map
    }

    pub fn inverse_map(&self) -> &[Element] {
        &self.inverse_map
    }

    /// Every `s` satisfying `s*r = [r]` and `s*[r] = s`; the inverse map
    /// holds the selected one.
    pub fn inverse_candidates(&self, r: Element) -> &[Element] {
        &self.inverse_candidates[r]
    }

    /// The unique `z` with `m * z = r`.
    #[inline]
    pub fn solve(&self, m: Element, r: Element) -> Element {
        self.solution[m * self.order() + r]
    }

    /// The term `m⁻¹ * r` under the chosen semantics.
    #[inline]
    pub fn left_div(&self, m: Element, r: Element, semantics: Semantics) -> Element {
        match semantics {
            Semantics::Product => self.mul(self.inverse(m), r),
            Semantics::Solution => self.solve(m, r),
        }
    }
}

/// How `m⁻¹ * r` is evaluated inside derived checks. The two agree on
/// strong-verified structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    #[default]
    Product,
    Solution,
}

impl std::str::FromStr for Semantics {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "product" => Ok(Semantics::Product),
            "solution" => Ok(Semantics::Solution),
            other => Err(format!("unknown semantics `{other}` (expected product|solution)")),
        }
    }
}

pub fn verify(t: &CayleyTable, mode: Axiom4) -> Result<WmStructure, AxiomReport> {
    verify_with(t, mode, WitnessPolicy::First)
}

pub fn verify_with(
    t: &CayleyTable,
    mode: Axiom4,
    policy: WitnessPolicy,
) -> Result<WmStructure, AxiomReport> {
    let mut violations = check_axiom1(t, policy);
    violations.extend(check_axiom2(t, policy));
    violations.extend(check_axiom3(t, policy));
    violations.extend(check_axiom4(t, mode, policy));
    if !violations.is_empty() {
        return Err(AxiomReport { mode, violations });
    }

    let n = t.order();
    let mut solution = vec![0; n * n];
    for m in 0..n {
        for z in 0..n {
            solution[m * n + t.mul(m, z)] = z;
        }
    }
    // rows are bijections, so [r] is unique
    let identity_map: Vec<Element> = (0..n).map(|r| solution[r * n + r]).collect();
    let inverse_candidates: Vec<Vec<Element>> = (0..n)
        .map(|r| inverse_candidates(t, r, identity_map[r]))
        .collect();
    let inverse_map = (0..n)
        .map(|r| match mode {
            Axiom4::Weak => inverse_candidates[r][0],
            Axiom4::Strong => compatible_inverses(t, r)[0],
        })
        .collect();

    Ok(WmStructure {
        table: t.clone(),
        mode,
        identity_map,
        inverse_map,
        inverse_candidates,
        solution,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum GroupLawFailure {
    Associativity { a: Element, b: Element, c: Element },
    Identity,
    Inverse { element: Element },
}

impl fmt::Display for GroupLawFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLawFailure::Associativity { a, b, c } => {
                write!(f, "({a}*{b})*{c} != {a}*({b}*{c})")
            }
            GroupLawFailure::Identity => f.write_str("no two-sided identity"),
            GroupLawFailure::Inverse { element } => {
                write!(f, "{element} has no two-sided inverse")
            }
        }
    }
}

/// Classical group test: associativity, a two-sided identity, two-sided inverses.
pub fn is_group(t: &CayleyTable) -> Check<GroupLawFailure> {
    let n = t.order();
    for a in 0..n {
        for b in 0..n {
            let ab = t.mul(a, b);
            for c in 0..n {
                if t.mul(ab, c) != t.mul(a, t.mul(b, c)) {
                    return Check::Fails(GroupLawFailure::Associativity { a, b, c });
                }
            }
        }
    }
    let Some(e) = (0..n).find(|&e| (0..n).all(|x| t.mul(e, x) == x && t.mul(x, e) == x)) else {
        return Check::Fails(GroupLawFailure::Identity);
    };
    Check::from_first(
        (0..n)
            .find(|&x| !(0..n).any(|y| t.mul(x, y) == e && t.mul(y, x) == e))
            .map(|element| GroupLawFailure::Inverse { element }),
    )
}

pub fn is_commutative(t: &CayleyTable) -> Check<(Element, Element)> {
    let n = t.order();
    Check::from_first(
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| t.mul(a, b) != t.mul(b, a)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neg_add(n: usize) -> CayleyTable {
        CayleyTable::from_fn(n, |a, b| (2 * n - a - b) % n).unwrap()
    }

    fn left_projection(n: usize) -> CayleyTable {
        CayleyTable::from_fn(n, |a, _| a).unwrap()
    }

    fn right_projection(n: usize) -> CayleyTable {
        CayleyTable::from_fn(n, |_, b| b).unwrap()
    }

    #[test]
    fn right_projection_satisfies_semi_commutativity() {
        assert!(check_axiom1(&right_projection(4), WitnessPolicy::All).is_empty());
    }

    #[test]
    fn left_projection_passes_a2_fails_a4() {
        let t = left_projection(2);
        assert!(check_axiom2(&t, WitnessPolicy::All).is_empty());
        let v = check_axiom4(&t, Axiom4::Weak, WitnessPolicy::First);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].axiom, Axiom::A4Unique);
        assert_eq!(v[0].witness, vec![0, 0, 1]);
        assert!(v[0].replay(&t));
    }

    #[test]
    fn neg_add_identity_and_inverse_maps() {
        let w = verify(&neg_add(6), Axiom4::Strong).unwrap();
        let expected: Vec<_> = (0..6).map(|r| (12 - 2 * r) % 6).collect();
        assert_eq!(w.identity_map(), expected.as_slice());
        let w5 = verify(&neg_add(5), Axiom4::Strong).unwrap();
        assert_eq!(w5.inverse_map(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn neg_add_solves_rows() {
        let w = verify(&neg_add(7), Axiom4::Strong).unwrap();
        assert_eq!(w.solve(2, 5), 0);
        for m in 0..7 {
            for z in 0..7 {
                assert_eq!(w.solve(m, w.mul(m, z)), z);
            }
        }
    }

    #[test]
    fn right_projection_inverses_are_self() {
        let t = right_projection(3);
        for r in 0..3 {
            assert_eq!(inverse_candidates(&t, r, r), vec![r]);
        }
    }

    #[test]
    fn readings_agree_on_order_three_row_tables() {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut passing = 0;
        for &a in &perms {
            for &b in &perms {
                for &c in &perms {
                    let t = CayleyTable::from_rows(&[a.to_vec(), b.to_vec(), c.to_vec()]).unwrap();
                    let weak = verify(&t, Axiom4::Weak).is_ok();
                    let strong = verify(&t, Axiom4::Strong).is_ok();
                    assert_eq!(weak, strong, "{:?}", t.flat());
                    passing += usize::from(strong);
                }
            }
        }
        assert_eq!(passing, 10);
    }

    #[test]
    fn group_and_commutativity_witnesses() {
        assert_eq!(
            is_group(&neg_add(5)),
            Check::Fails(GroupLawFailure::Associativity { a: 0, b: 0, c: 1 })
        );
        assert_eq!(is_group(&right_projection(2)), Check::Fails(GroupLawFailure::Identity));
        assert_eq!(is_commutative(&right_projection(2)), Check::Fails((0, 1)));
        let z3 = CayleyTable::from_fn(3, |a, b| (a + b) % 3).unwrap();
        assert!(is_group(&z3).holds());
        assert!(is_commutative(&z3).holds());
    }

    #[test]
    fn order_one_verifies() {
        let t = CayleyTable::from_rows(&[vec![0]]).unwrap();
        let w = verify(&t, Axiom4::Strong).unwrap();
        assert_eq!(w.identity(0), 0);
        assert_eq!(w.inverse(0), 0);
    }

    #[test]
    fn all_witness_policy_replays() {
        let t = CayleyTable::from_fn(3, |a, b| (a * b + a) % 3).unwrap();
        let report = verify_with(&t, Axiom4::Strong, WitnessPolicy::All).unwrap_err();
        assert!(!report.violations.is_empty());
        for v in &report.violations {
            assert!(v.replay(&t), "{v}");
        }
    }
}
