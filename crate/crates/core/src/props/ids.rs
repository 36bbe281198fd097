use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// What a check quantifies over besides elements of the instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BindingsNeeded {
    None,
    /// Every nonempty subset, subgroup or not.
    Subset,
    Subgroup,
    SubgroupPair,
    Hom,
    /// Evaluated once over the whole catalog rather than per instance.
    Catalog,
}

macro_rules! propositions {
    ($($var:ident = $code:literal, $bind:ident, [$($v:literal),*], $stmt:literal;)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum PropositionId {
            $($var,)*
        }

        impl PropositionId {
            pub const ALL: &'static [PropositionId] = &[$(PropositionId::$var,)*];

            pub fn code(self) -> &'static str {
                match self { $(PropositionId::$var => $code,)* }
            }

            pub fn statement(self) -> &'static str {
                match self { $(PropositionId::$var => $stmt,)* }
            }

            pub fn bindings_needed(self) -> BindingsNeeded {
                match self { $(PropositionId::$var => BindingsNeeded::$bind,)* }
            }

            /// Names of the quantified element variables, in witness order.
            pub fn variables(self) -> &'static [&'static str] {
                match self { $(PropositionId::$var => &[$($v),*],)* }
            }
        }
    };
}

propositions! {
    R2_3 = "R2.3", Catalog, [], "every commutative group verifies";
    R2_4 = "R2.4", Catalog, [], "some Wm-group is not a group and some group is not a Wm-group";
    P2_7 = "P2.7", None, ["n", "r", "m"], "n*r = n*m implies r = m";
    P2_8 = "P2.8", None, ["r", "m", "n"], "(a) r*(m⁻¹*n) = (m⁻¹*r)*n; (b) (m⁻¹*r)*n = m⁻¹*(r*n)";
    P2_9_1 = "P2.9.1", None, ["r", "m"], "[r]*m = m";
    P2_9_2 = "P2.9.2", None, ["r"], "r*r⁻¹ = [r]";
    P2_9_3 = "P2.9.3", None, ["m"], "[m⁻¹] = [m]";
    P2_9_4 = "P2.9.4", None, ["r"], "(r⁻¹)⁻¹ = r";
    P2_10 = "P2.10", None, ["r", "m", "n"], "(a) (r*m)⁻¹*n = m⁻¹*(r⁻¹*n); (b) m⁻¹*(r⁻¹*n) = r⁻¹*(m⁻¹*n)";
    P2_11_1 = "P2.11.1", None, ["r", "m"], "[r*m] = [m]";
    P2_11_2 = "P2.11.2", None, ["r", "m"], "(r*m)⁻¹ = r⁻¹*m⁻¹";
    P2_11_3 = "P2.11.3", None, ["m"], "[[m]] = [m]";
    P2_11_4 = "P2.11.4", None, ["m"], "(a) [m⁻¹] = [m]; (b) [m] = [m]⁻¹";
    P2_11_5 = "P2.11.5", None, ["r", "m"], "r*m = m*r iff [r] = [m]";
    P2_12_1 = "P2.12.1", None, ["r", "z", "w"], "r*z = r*w implies z = w*[z]";
    P2_12_2 = "P2.12.2", None, ["r", "z", "w"], "z = [z]*w implies r*z = r*w";
    P2_12_3 = "P2.12.3", None, ["r", "z", "w"], "r⁻¹*z = r⁻¹*w implies z = w*[z]";
    P2_12_4 = "P2.12.4", None, ["r", "z", "w"], "z = [z]*w implies r⁻¹*z = r⁻¹*w";
    P2_14 = "P2.14", Subset, [], "S is a Wm-subgroup iff m⁻¹*r ∈ S for all r, m ∈ S";
    P2_15 = "P2.15", SubgroupPair, [], "S ∪ R is a Wm-subgroup iff S ⊆ R or R ⊆ S";
    P2_17 = "P2.17", Subgroup, [], "(a) r K m iff r = s*m for some s ∈ S is an equivalence; (b) its classes are the right cosets S*r";
    P2_18 = "P2.18", Subgroup, [], "(a) right cosets partition G; (b) (S*r)(S*m) = S*(r*m) is well defined; (c) G|S is a Wm-group";
    P2_20_1 = "P2.20.1", Hom, ["r", "m"], "f(m⁻¹*r) = f(m)⁻¹*f(r)";
    P2_20_2 = "P2.20.2", Hom, ["r"], "[f(r)] = f([r])";
    P2_20_3 = "P2.20.3", Hom, ["r"], "f(r⁻¹) = f(r)⁻¹";
    P2_21_1 = "P2.21.1", Hom, [], "f(S) is a Wm-subgroup of the target for every Wm-subgroup S of the source";
    P2_21_2 = "P2.21.2", Hom, [], "f⁻¹(S') is a Wm-subgroup of the source for every Wm-subgroup S' of the target";
    P2_23 = "P2.23", Subgroup, [], "S is normal iff (r⁻¹*s)*r ∈ S for all r ∈ G, s ∈ S";
    C2_24 = "C2.24", Subgroup, [], "S is normal iff (r*s)*r⁻¹ ∈ S for all r ∈ G, s ∈ S";
    P2_26 = "P2.26", Hom, [], "(a) the kernel {r : f(r) = f([r])} is a Wm-subgroup; (b) it is normal";
    P2_27_1 = "P2.27.1", Hom, [], "for normal S ⊇ K: (a) f(S) is a normal Wm-subgroup; (b) f⁻¹(f(S)) = S";
    P2_27_2 = "P2.27.2", Hom, [], "for normal S' in the target: (a) f⁻¹(S') is a normal Wm-subgroup; (b) K ⊆ f⁻¹(S'); (c) f(f⁻¹(S')) = S'";
    P2_28_1 = "P2.28.1", SubgroupPair, [], "S ∩ R is a Wm-subgroup";
    P2_28_2 = "P2.28.2", SubgroupPair, [], "S normal in G implies S ∩ R normal in R";
    P2_28_3 = "P2.28.3", SubgroupPair, [], "S, R normal in G implies S ∩ R normal in G";
    P2_29 = "P2.29", SubgroupPair, [], "S ⊆ R and S normal imply R normal";
    P2_31_1 = "P2.31.1", SubgroupPair, [], "S*R is a Wm-subgroup";
    P2_31_2 = "P2.31.2", SubgroupPair, [], "S normal implies S*R is a normal Wm-subgroup";
    P2_31_3 = "P2.31.3", SubgroupPair, [], "S, R normal imply S*R = R*S";
    P2_32 = "P2.32", None, [], "(a) {r : r = [r]} = {[r] : r ∈ G}; (b) it is a Wm-subgroup; (c) it is normal";
}

impl PropositionId {
    /// The checks whose conclusion follows from strong axiom 4 alone.
    pub const FORCED: &'static [PropositionId] = &[
        PropositionId::P2_7,
        PropositionId::P2_9_2,
        PropositionId::P2_9_3,
        PropositionId::P2_12_1,
        PropositionId::P2_20_1,
        PropositionId::P2_20_2,
    ];

    pub fn is_catalog_level(self) -> bool {
        self.bindings_needed() == BindingsNeeded::Catalog
    }
}

impl fmt::Display for PropositionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for PropositionId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        PropositionId::ALL
            .iter()
            .copied()
            .find(|id| id.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown proposition id {s:?}"))
    }
}

impl Serialize for PropositionId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.code())
    }
}
