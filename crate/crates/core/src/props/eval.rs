use std::collections::HashSet;

use serde::Serialize;

use super::ids::PropositionId as P;
use crate::axioms::{Semantics, WmStructure};
use crate::error::Result;
use crate::subgroups::{
    is_normal, is_wm_subgroup_direct, product_set, quotient, relation_k, satisfies_closure_criterion,
    enumerate_subgroups_with, SubSet, SubgroupSearch,
};
use crate::table::Element;

/// One point of a check's domain: element values, bound subsets, a hom and
/// a sub-claim tag. A failing case is the witness.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Case {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub elements: Vec<Element>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sets: Vec<SubSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<Element>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub part: Option<char>,
}

impl Case {
    pub fn render(&self, id: P) -> String {
        let mut parts = Vec::new();
        if let Some(p) = self.part {
            parts.push(format!("part {p}"));
        }
        if let Some(m) = &self.map {
            parts.push(format!("f=[{}]", join(m)));
        }
        let set_names: &[&str] = match id.bindings_needed() {
            super::BindingsNeeded::Hom => &["S"],
            super::BindingsNeeded::SubgroupPair => &["S", "R"],
            _ => &["S"],
        };
        for (i, s) in self.sets.iter().enumerate() {
            parts.push(format!("{}={s}", set_names.get(i).unwrap_or(&"T")));
        }
        for (v, x) in id.variables().iter().zip(&self.elements) {
            parts.push(format!("{v}={x}"));
        }
        parts.join(", ")
    }
}

fn join(v: &[Element]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Borrowed form of [`Case`] used on the hot path.
#[derive(Clone, Copy)]
pub(crate) struct CaseRef<'a> {
    pub elements: &'a [Element],
    pub sets: &'a [SubSet],
    pub map: Option<&'a [Element]>,
    pub part: Option<char>,
}

impl CaseRef<'_> {
    pub fn to_owned(self) -> Case {
        Case {
            elements: self.elements.to_vec(),
            sets: self.sets.to_vec(),
            map: self.map.map(<[Element]>::to_vec),
            part: self.part,
        }
    }
}

impl Case {
    pub(crate) fn as_ref(&self) -> CaseRef<'_> {
        CaseRef {
            elements: &self.elements,
            sets: &self.sets,
            map: self.map.as_deref(),
            part: self.part,
        }
    }
}

/// A verified structure with its subgroup lattice precomputed.
pub(crate) struct Ctx<'a> {
    pub w: &'a WmStructure,
    pub sem: Semantics,
    pub subgroups: Vec<SubSet>,
    masks: HashSet<u64>,
}

impl<'a> Ctx<'a> {
    pub fn new(w: &'a WmStructure, sem: Semantics, search: SubgroupSearch) -> Result<Self> {
        let subgroups = enumerate_subgroups_with(w, false, search)?;
        let masks = subgroups.iter().map(SubSet::mask).collect();
        Ok(Ctx {
            w,
            sem,
            subgroups,
            masks,
        })
    }

    fn n(&self) -> usize {
        self.w.order()
    }

    fn mul(&self, a: Element, b: Element) -> Element {
        self.w.mul(a, b)
    }

    fn id(&self, a: Element) -> Element {
        self.w.identity(a)
    }

    fn inv(&self, a: Element) -> Element {
        self.w.inverse(a)
    }

    /// `m⁻¹ * r`
    fn div(&self, m: Element, r: Element) -> Element {
        self.w.left_div(m, r, self.sem)
    }

    pub fn is_subgroup(&self, s: &SubSet) -> bool {
        !s.is_empty() && self.masks.contains(&s.mask())
    }

    fn is_normal(&self, s: &SubSet) -> bool {
        is_normal(self.w, s).holds()
    }

    fn is_normal_subgroup(&self, s: &SubSet) -> bool {
        self.is_subgroup(s) && self.is_normal(s)
    }

    pub fn normal_subgroups(&self) -> impl Iterator<Item = &SubSet> {
        self.subgroups.iter().filter(|s| self.is_normal(s))
    }

    fn set(&self, it: impl IntoIterator<Item = Element>) -> SubSet {
        SubSet::new(self.n(), it).expect("elements are in range")
    }
}

fn image(f: &[Element], h: &Ctx<'_>, s: &SubSet) -> SubSet {
    h.set(s.iter().map(|x| f[x]))
}

fn preimage(f: &[Element], g: &Ctx<'_>, s: &SubSet) -> SubSet {
    g.set((0..g.n()).filter(|&z| s.contains(f[z])))
}

fn kernel(f: &[Element], g: &Ctx<'_>) -> SubSet {
    g.set((0..g.n()).filter(|&r| f[r] == f[g.id(r)]))
}

fn implies(a: bool, b: bool) -> bool {
    !a || b
}

/// Whether the statement of `id` holds at `case`. `h` is the hom target.
pub(crate) fn evaluate(id: P, g: &Ctx<'_>, h: Option<&Ctx<'_>>, case: CaseRef<'_>) -> bool {
    let e = case.elements;
    let part = case.part;
    match id {
        P::R2_3 | P::R2_4 => true,
        P::P2_7 => {
            let (n, r, m) = (e[0], e[1], e[2]);
            implies(g.mul(n, r) == g.mul(n, m), r == m)
        }
        P::P2_8 => {
            let (r, m, n) = (e[0], e[1], e[2]);
            let middle = g.mul(g.div(m, r), n);
            match part {
                Some('a') => g.mul(r, g.div(m, n)) == middle,
                _ => middle == g.div(m, g.mul(r, n)),
            }
        }
        P::P2_9_1 => g.mul(g.id(e[0]), e[1]) == e[1],
        P::P2_9_2 => g.mul(e[0], g.inv(e[0])) == g.id(e[0]),
        P::P2_9_3 => g.id(g.inv(e[0])) == g.id(e[0]),
        P::P2_9_4 => g.inv(g.inv(e[0])) == e[0],
        P::P2_10 => {
            let (r, m, n) = (e[0], e[1], e[2]);
            let middle = g.div(m, g.div(r, n));
            match part {
                Some('a') => g.div(g.mul(r, m), n) == middle,
                _ => middle == g.div(r, g.div(m, n)),
            }
        }
        P::P2_11_1 => g.id(g.mul(e[0], e[1])) == g.id(e[1]),
        P::P2_11_2 => g.inv(g.mul(e[0], e[1])) == g.div(e[0], g.inv(e[1])),
        P::P2_11_3 => g.id(g.id(e[0])) == g.id(e[0]),
        P::P2_11_4 => match part {
            Some('a') => g.id(g.inv(e[0])) == g.id(e[0]),
            _ => g.id(e[0]) == g.inv(g.id(e[0])),
        },
        P::P2_11_5 => {
            let (r, m) = (e[0], e[1]);
            (g.mul(r, m) == g.mul(m, r)) == (g.id(r) == g.id(m))
        }
        P::P2_12_1 => {
            let (r, z, w) = (e[0], e[1], e[2]);
            implies(g.mul(r, z) == g.mul(r, w), z == g.mul(w, g.id(z)))
        }
        P::P2_12_2 => {
            let (r, z, w) = (e[0], e[1], e[2]);
            implies(z == g.mul(g.id(z), w), g.mul(r, z) == g.mul(r, w))
        }
        P::P2_12_3 => {
            let (r, z, w) = (e[0], e[1], e[2]);
            implies(g.div(r, z) == g.div(r, w), z == g.mul(w, g.id(z)))
        }
        P::P2_12_4 => {
            let (r, z, w) = (e[0], e[1], e[2]);
            implies(z == g.mul(g.id(z), w), g.div(r, z) == g.div(r, w))
        }
        P::P2_14 => {
            let s = &case.sets[0];
            let direct = is_wm_subgroup_direct(g.w, s).map(|c| c.holds()).unwrap_or(false);
            let criterion = satisfies_closure_criterion(g.w, s, g.sem)
                .map(|c| c.holds())
                .unwrap_or(false);
            direct == criterion
        }
        P::P2_15 => {
            let (s, r) = (&case.sets[0], &case.sets[1]);
            g.is_subgroup(&s.union(r)) == (s.is_subset(r) || r.is_subset(s))
        }
        P::P2_17 => {
            let k = relation_k(g.w, &case.sets[0]);
            match part {
                Some('a') => k.is_equivalence,
                _ => k.classes_match_cosets.unwrap_or(false),
            }
        }
        P::P2_18 => {
            let q = quotient(g.w, &case.sets[0]);
            match part {
                Some('a') => q.cosets.is_partition,
                Some('b') => q.well_defined,
                _ => q.is_wm_group(),
            }
        }
        P::P2_23 | P::C2_24 => {
            let s = &case.sets[0];
            let conj = |r: Element, x: Element| {
                if id == P::P2_23 {
                    g.mul(g.div(r, x), r)
                } else {
                    g.mul(g.mul(r, x), g.inv(r))
                }
            };
            let contained = (0..g.n()).all(|r| s.iter().all(|x| s.contains(conj(r, x))));
            g.is_normal(s) == contained
        }
        P::P2_28_1 => g.is_subgroup(&case.sets[0].intersect(&case.sets[1])),
        P::P2_28_2 => {
            let (s, r) = (&case.sets[0], &case.sets[1]);
            let t = s.intersect(r);
            implies(
                g.is_normal(s),
                g.is_subgroup(&t) && r.iter().all(|p| t.contains(g.id(p))),
            )
        }
        P::P2_28_3 => {
            let (s, r) = (&case.sets[0], &case.sets[1]);
            let t = s.intersect(r);
            implies(g.is_normal(s) && g.is_normal(r), g.is_normal_subgroup(&t))
        }
        P::P2_29 => {
            let (s, r) = (&case.sets[0], &case.sets[1]);
            implies(s.is_subset(r) && g.is_normal(s), g.is_normal(r))
        }
        P::P2_31_1 => g.is_subgroup(&product_set(g.w, &case.sets[0], &case.sets[1])),
        P::P2_31_2 => {
            let (s, r) = (&case.sets[0], &case.sets[1]);
            implies(g.is_normal(s), g.is_normal_subgroup(&product_set(g.w, s, r)))
        }
        P::P2_31_3 => {
            let (s, r) = (&case.sets[0], &case.sets[1]);
            implies(
                g.is_normal(s) && g.is_normal(r),
                product_set(g.w, s, r) == product_set(g.w, r, s),
            )
        }
        P::P2_32 => {
            let fixed = g.set((0..g.n()).filter(|&r| g.id(r) == r));
            match part {
                Some('a') => fixed == g.set((0..g.n()).map(|r| g.id(r))),
                Some('b') => g.is_subgroup(&fixed),
                _ => g.is_normal(&fixed),
            }
        }
        P::P2_20_1 | P::P2_20_2 | P::P2_20_3 | P::P2_21_1 | P::P2_21_2 | P::P2_26 | P::P2_27_1
        | P::P2_27_2 => {
            let h = h.expect("hom checks need a target");
            let f = case.map.expect("hom checks need a map");
            evaluate_hom(id, g, h, f, case)
        }
    }
}

fn evaluate_hom(id: P, g: &Ctx<'_>, h: &Ctx<'_>, f: &[Element], case: CaseRef<'_>) -> bool {
    let e = case.elements;
    match id {
        P::P2_20_1 => {
            let (r, m) = (e[0], e[1]);
            f[g.div(m, r)] == h.div(f[m], f[r])
        }
        P::P2_20_2 => h.id(f[e[0]]) == f[g.id(e[0])],
        P::P2_20_3 => f[g.inv(e[0])] == h.inv(f[e[0]]),
        P::P2_21_1 => h.is_subgroup(&image(f, h, &case.sets[0])),
        P::P2_21_2 => g.is_subgroup(&preimage(f, g, &case.sets[0])),
        P::P2_26 => {
            let k = kernel(f, g);
            match case.part {
                Some('a') => g.is_subgroup(&k),
                _ => g.is_normal(&k),
            }
        }
        P::P2_27_1 => {
            let s = &case.sets[0];
            let fs = image(f, h, s);
            match case.part {
                Some('a') => h.is_normal_subgroup(&fs),
                _ => preimage(f, g, &fs) == *s,
            }
        }
        P::P2_27_2 => {
            let s2 = &case.sets[0];
            let pre = preimage(f, g, s2);
            match case.part {
                Some('a') => g.is_normal_subgroup(&pre),
                Some('b') => kernel(f, g).is_subset(&pre),
                _ => image(f, h, &pre) == *s2,
            }
        }
        _ => unreachable!("not a hom check"),
    }
}

fn tuples(n: usize, k: usize, mut visit: impl FnMut(&[Element])) {
    if n == 0 {
        return;
    }
    let mut t = vec![0; k];
    loop {
        visit(&t);
        let Some(i) = (0..k).rev().find(|&i| t[i] + 1 < n) else {
            return;
        };
        t[i] += 1;
        t[i + 1..].iter_mut().for_each(|x| *x = 0);
    }
}

fn parts(id: P) -> &'static [Option<char>] {
    match id {
        P::P2_8 | P::P2_10 | P::P2_11_4 | P::P2_17 | P::P2_26 | P::P2_27_1 => &[Some('a'), Some('b')],
        P::P2_18 | P::P2_32 | P::P2_27_2 => &[Some('a'), Some('b'), Some('c')],
        _ => &[None],
    }
}

/// Calls `visit` on every case of `id`'s domain, in a fixed order.
pub(crate) fn for_each_case(
    id: P,
    g: &Ctx<'_>,
    h: Option<&Ctx<'_>>,
    homs: &[Vec<Element>],
    mut visit: impl FnMut(CaseRef<'_>),
) {
    let n = g.n();
    let arity = id.variables().len();
    let parts = parts(id);
    let mut each_part = |elements: &[Element], sets: &[SubSet], map: Option<&[Element]>| {
        for &part in parts {
            visit(CaseRef {
                elements,
                sets,
                map,
                part,
            });
        }
    };
    match id {
        P::R2_3 | P::R2_4 => {}
        P::P2_14 => {
            for mask in 1..(1u64 << n) {
                each_part(&[], &[SubSet::from_mask(n, mask)], None);
            }
        }
        P::P2_17 | P::P2_18 | P::P2_23 | P::C2_24 => {
            for s in &g.subgroups {
                each_part(&[], std::slice::from_ref(s), None);
            }
        }
        P::P2_15 | P::P2_28_1 | P::P2_28_2 | P::P2_28_3 | P::P2_29 | P::P2_31_1 | P::P2_31_2
        | P::P2_31_3 => {
            for s in &g.subgroups {
                for r in &g.subgroups {
                    each_part(&[], &[*s, *r], None);
                }
            }
        }
        P::P2_20_1 | P::P2_20_2 | P::P2_20_3 => {
            for f in homs {
                tuples(n, arity, |t| each_part(t, &[], Some(f)));
            }
        }
        P::P2_21_1 => {
            for f in homs {
                for s in &g.subgroups {
                    each_part(&[], std::slice::from_ref(s), Some(f));
                }
            }
        }
        P::P2_21_2 => {
            let h = h.expect("hom checks need a target");
            for f in homs {
                for s in &h.subgroups {
                    each_part(&[], std::slice::from_ref(s), Some(f));
                }
            }
        }
        P::P2_26 => {
            for f in homs {
                each_part(&[], &[], Some(f));
            }
        }
        P::P2_27_1 => {
            for f in homs {
                let k = kernel(f, g);
                for s in g.normal_subgroups().filter(|s| k.is_subset(s)) {
                    each_part(&[], std::slice::from_ref(s), Some(f));
                }
            }
        }
        P::P2_27_2 => {
            let h = h.expect("hom checks need a target");
            for f in homs {
                for s in h.normal_subgroups() {
                    each_part(&[], std::slice::from_ref(s), Some(f));
                }
            }
        }
        _ => tuples(n, arity, |t| each_part(t, &[], None)),
    }
}
