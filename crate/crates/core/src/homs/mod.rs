//! Homomorphisms between verified structures, kernels, images and
//! preimages, and canonical forms for isomorphism classification.
//!
//! Two notions of isomorphism coexist: *injective-iso* (an injective
//! homomorphism, the literal definition used by `iso_only`) and
//! *bijective-iso* (used for classification via [`canonical_form`]).

mod canonical;

pub use canonical::{
    are_isomorphic, canonical_form, canonical_form_with_cap, CanonicalForm, DEFAULT_CANON_CAP,
};
pub(crate) use canonical::{canonical_form_unchecked, next_permutation};

use crate::axioms::WmStructure;
use crate::check::Check;
use crate::error::{Result, WmError};
use crate::subgroups::SubSet;
use crate::table::{CayleyTable, Element};

/// Default largest order of either side for hom enumeration.
pub const DEFAULT_HOM_CAP: usize = 6;

/// A map between two verified structures satisfying `f(a*b) = f(a)*f(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomMap<'a> {
    source: &'a WmStructure,
    target: &'a WmStructure,
    map: Vec<Element>,
}

impl<'a> HomMap<'a> {
    pub fn new(source: &'a WmStructure, target: &'a WmStructure, map: Vec<Element>) -> Result<Self> {
        match is_homomorphism(source.table(), target.table(), &map)? {
            Check::Holds => Ok(HomMap { source, target, map }),
            Check::Fails((a, b)) => Err(WmError::usage(format!(
                "not a homomorphism: f({a}*{b}) != f({a})*f({b})"
            ))),
        }
    }

    pub fn source(&self) -> &'a WmStructure {
        self.source
    }

    pub fn target(&self) -> &'a WmStructure {
        self.target
    }

    pub fn map(&self) -> &[Element] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, a: Element) -> Element {
        self.map[a]
    }

    pub fn is_injective(&self) -> bool {
        is_injective(&self.map, self.target.order())
    }

    /// `0↦a, 1↦b, …`
    pub fn render(&self, source_names: Option<&[String]>, target_names: Option<&[String]>) -> String {
        render_map(&self.map, source_names, target_names)
    }
}

pub fn render_map(
    map: &[Element],
    source_names: Option<&[String]>,
    target_names: Option<&[String]>,
) -> String {
    let name = |names: Option<&[String]>, i: usize| match names {
        Some(n) => n[i].clone(),
        None => i.to_string(),
    };
    map.iter()
        .enumerate()
        .map(|(a, &b)| format!("{}↦{}", name(source_names, a), name(target_names, b)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn is_injective(map: &[Element], target_order: usize) -> bool {
    let mut seen = vec![false; target_order];
    map.iter().all(|&b| !std::mem::replace(&mut seen[b], true))
}

/// Checks `map(a*b) = map(a)*map(b)` on every pair; the witness is `(a, b)`.
pub fn is_homomorphism(
    source: &CayleyTable,
    target: &CayleyTable,
    map: &[Element],
) -> Result<Check<(Element, Element)>> {
    if map.len() != source.order() {
        return Err(WmError::usage(format!(
            "map has {} entries but the source has order {}",
            map.len(),
            source.order()
        )));
    }
    if let Some(&b) = map.iter().find(|&&b| b >= target.order()) {
        return Err(WmError::Bounds {
            index: b,
            order: target.order(),
        });
    }
    let n = source.order();
    Ok(Check::from_first(
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| map[source.mul(a, b)] != target.mul(map[a], map[b])),
    ))
}

const UNSET: usize = usize::MAX;

/// All homomorphism maps `source -> target` (injective ones only when
/// `iso_only`), in lexicographic order of image arrays.
pub fn enumerate_hom_maps(
    source: &CayleyTable,
    target: &CayleyTable,
    iso_only: bool,
    cap: usize,
) -> Result<Vec<Vec<Element>>> {
    let order = source.order().max(target.order());
    if order > cap {
        return Err(WmError::Capacity {
            what: "homomorphism enumeration",
            order,
            cap,
        });
    }
    let mut out = Vec::new();
    let mut f = vec![UNSET; source.order()];
    extend(source, target, &mut f, &mut out);
    if iso_only {
        out.retain(|m| is_injective(m, target.order()));
    }
    out.sort();
    Ok(out)
}

/// Forces `f(a*b) = f(a)*f(b)` wherever both `f(a)` and `f(b)` are set.
/// Returns `false` on a contradiction.
fn propagate(source: &CayleyTable, target: &CayleyTable, f: &mut [usize]) -> bool {
    let n = source.order();
    loop {
        let mut changed = false;
        for a in 0..n {
            if f[a] == UNSET {
                continue;
            }
            for b in 0..n {
                if f[b] == UNSET {
                    continue;
                }
                let c = source.mul(a, b);
                let v = target.mul(f[a], f[b]);
                if f[c] == UNSET {
                    f[c] = v;
                    changed = true;
                } else if f[c] != v {
                    return false;
                }
            }
        }
        if !changed {
            return true;
        }
    }
}

fn extend(source: &CayleyTable, target: &CayleyTable, f: &mut [usize], out: &mut Vec<Vec<usize>>) {
    if !propagate(source, target, f) {
        return;
    }
    let Some(x) = f.iter().position(|&v| v == UNSET) else {
        out.push(f.to_vec());
        return;
    };
    for y in 0..target.order() {
        let mut next = f.to_vec();
        next[x] = y;
        extend(source, target, &mut next, out);
    }
}

pub fn enumerate_homs<'a>(
    source: &'a WmStructure,
    target: &'a WmStructure,
    iso_only: bool,
) -> Result<Vec<HomMap<'a>>> {
    enumerate_homs_with_cap(source, target, iso_only, DEFAULT_HOM_CAP)
}

pub fn enumerate_homs_with_cap<'a>(
    source: &'a WmStructure,
    target: &'a WmStructure,
    iso_only: bool,
    cap: usize,
) -> Result<Vec<HomMap<'a>>> {
    Ok(enumerate_hom_maps(source.table(), target.table(), iso_only, cap)?
        .into_iter()
        .map(|map| HomMap { source, target, map })
        .collect())
}

/// `{r : f(r) = f([r])}`, with `[r]` taken in the source.
pub fn kernel(f: &HomMap<'_>) -> SubSet {
    let n = f.source.order();
    SubSet::new(
        n,
        (0..n).filter(|&r| f.apply(r) == f.apply(f.source.identity(r))),
    )
    .expect("source fits a subset")
}

/// `f(S) = {f(s) : s ∈ S}`.
pub fn image(f: &HomMap<'_>, s: &SubSet) -> SubSet {
    SubSet::new(f.target.order(), s.iter().map(|x| f.apply(x))).expect("target fits a subset")
}

/// `f⁻¹(S') = {z : f(z) ∈ S'}`.
pub fn preimage(f: &HomMap<'_>, s: &SubSet) -> SubSet {
    let n = f.source.order();
    SubSet::new(n, (0..n).filter(|&z| s.contains(f.apply(z)))).expect("source fits a subset")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{verify, Axiom4};
    use crate::catalog;
    use crate::subgroups::bracket_g;

    fn strong(inst: catalog::Instance) -> WmStructure {
        verify(&inst.table, Axiom4::Strong).unwrap()
    }

    #[test]
    fn reduction_mod_two() {
        let z4 = strong(catalog::cyclic(4).unwrap());
        let z2 = strong(catalog::cyclic(2).unwrap());
        let f = HomMap::new(&z4, &z2, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(kernel(&f).to_string(), "{0,2}");
        assert_eq!(image(&f, &SubSet::full(4).unwrap()).to_string(), "{0,1}");
        assert_eq!(preimage(&f, &SubSet::new(2, [0]).unwrap()).to_string(), "{0,2}");
        assert_eq!(f.render(None, None), "0↦0, 1↦1, 2↦0, 3↦1");
    }

    #[test]
    fn neg_add_reduction_kernel() {
        let g = strong(catalog::neg_add(4).unwrap());
        let h = strong(catalog::neg_add(2).unwrap());
        let f = HomMap::new(&g, &h, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(kernel(&f).to_string(), "{0,2}");
    }

    #[test]
    fn constant_maps_are_homs_iff_idempotent() {
        for inst in catalog::small_controls(4) {
            let t = &inst.table;
            for c in 0..t.order() {
                let map = vec![c; t.order()];
                let hom = is_homomorphism(t, t, &map).unwrap().holds();
                assert_eq!(hom, t.mul(c, c) == c, "{} c={c}", inst.name());
            }
        }
    }

    #[test]
    fn identity_kernel_is_bracket_fixed_points() {
        let w = strong(catalog::neg_add(6).unwrap());
        let f = HomMap::new(&w, &w, (0..6).collect()).unwrap();
        assert_eq!(kernel(&f), bracket_g(&w).unwrap().fixed_points);
    }

    #[test]
    fn enumeration_small_cases() {
        let z2 = strong(catalog::cyclic(2).unwrap());
        let maps: Vec<Vec<usize>> = enumerate_homs(&z2, &z2, false)
            .unwrap()
            .iter()
            .map(|h| h.map().to_vec())
            .collect();
        assert_eq!(maps, vec![vec![0, 0], vec![0, 1]]);
        let z4 = strong(catalog::cyclic(4).unwrap());
        let pz4 = strong(catalog::paper_z4());
        assert!(!enumerate_homs(&pz4, &z4, true).unwrap().is_empty());
    }

    #[test]
    fn usage_errors() {
        let t = catalog::cyclic(2).unwrap().table;
        assert!(matches!(is_homomorphism(&t, &t, &[0]), Err(WmError::Usage(_))));
        assert!(matches!(is_homomorphism(&t, &t, &[0, 2]), Err(WmError::Bounds { .. })));
        let big = catalog::cyclic(7).unwrap().table;
        assert!(matches!(
            enumerate_hom_maps(&big, &t, false, DEFAULT_HOM_CAP),
            Err(WmError::Capacity { .. })
        ));
    }
}
