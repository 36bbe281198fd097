//! Built-in instances, the `wmtable` file format and the bounded-window
//! checker for negated addition on the integers.

mod format;
mod integers;

pub use format::{load_table, parse_table, serialize};
pub use integers::{spot_check_integer_example, FunctionMagma, SpotCheckReport, TallyLine};

use crate::error::{Result, WmError};
use crate::table::{is_permutation, CayleyTable, Element};

/// A table together with optional element names and where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub table: CayleyTable,
    pub element_names: Option<Vec<String>>,
    pub provenance: String,
}

impl Instance {
    pub fn new(table: CayleyTable, provenance: impl Into<String>) -> Self {
        Instance {
            table,
            element_names: None,
            provenance: provenance.into(),
        }
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        validate_names(&names, self.table.order()).map_err(WmError::Usage)?;
        self.element_names = Some(names);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        self.table.name().unwrap_or(&self.provenance)
    }

    pub fn element_name(&self, a: Element) -> String {
        match &self.element_names {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }

    /// Resolves an element written either as one of the names or as an index.
    pub fn resolve(&self, token: &str) -> Option<Element> {
        if let Some(names) = &self.element_names {
            if let Some(i) = names.iter().position(|n| n == token) {
                return Some(i);
            }
        }
        token.parse().ok().filter(|&i| i < self.table.order())
    }

    /// Same table, same names, same table name; provenance is ignored.
    pub fn same_structure(&self, other: &Instance) -> bool {
        self.table == other.table && self.element_names == other.element_names
    }
}

pub(crate) fn validate_names(names: &[String], order: usize) -> std::result::Result<(), String> {
    if names.len() != order {
        return Err(format!("expected {order} element names, got {}", names.len()));
    }
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() || n.chars().any(|c| c.is_whitespace() || c == '#' || c == ',') {
            return Err(format!("element name `{n}` must be a non-empty token without whitespace, `#` or `,`"));
        }
        if names[..i].contains(n) {
            return Err(format!("duplicate element name `{n}`"));
        }
    }
    Ok(())
}

fn named(table: CayleyTable, name: String) -> Instance {
    Instance::new(table.with_name(name.clone()), name)
}

/// The order-4 table with elements `[r], r, m, m⁻¹` (indices 0..3). The
/// fourth row is completed by closure in the cyclic group of order 4.
pub fn paper_z4() -> Instance {
    let rows = [
        vec![0, 1, 2, 3],
        vec![1, 0, 3, 2],
        vec![2, 3, 1, 0],
        vec![3, 2, 0, 1],
    ];
    let table = CayleyTable::from_rows(&rows).expect("static table");
    named(table, "paper_z4".into())
        .with_names(["[r]", "r", "m", "m^-1"].map(String::from).to_vec())
        .expect("static names")
}

/// Permutations of `{1,2,3}` as image arrays over `0..3`, in the listing
/// order `1, (12), (13), (23), (123), (132)`.
const S3_ELEMENTS: [([usize; 3], &str); 6] = [
    ([0, 1, 2], "1"),
    ([1, 0, 2], "(12)"),
    ([2, 1, 0], "(13)"),
    ([0, 2, 1], "(23)"),
    ([1, 2, 0], "(123)"),
    ([2, 0, 1], "(132)"),
];

/// The symmetric group on three points under `(f∘g)(x) = f(g(x))`, so the
/// right factor acts first.
pub fn sym3() -> Instance {
    let index_of = |p: [usize; 3]| {
        S3_ELEMENTS
            .iter()
            .position(|(q, _)| *q == p)
            .expect("closed under composition")
    };
    let table = CayleyTable::from_fn(6, |a, b| {
        let (f, g) = (S3_ELEMENTS[a].0, S3_ELEMENTS[b].0);
        index_of([f[g[0]], f[g[1]], f[g[2]]])
    })
    .expect("static table");
    named(table, "sym3".into())
        .with_names(S3_ELEMENTS.iter().map(|(_, n)| n.to_string()).collect())
        .expect("static names")
}

pub fn cyclic(n: usize) -> Result<Instance> {
    if n == 0 {
        return Err(WmError::usage("cyclic(n) needs n >= 1"));
    }
    let table = CayleyTable::from_fn(n, |a, b| (a + b) % n)?;
    Ok(named(table, format!("cyclic({n})")))
}

/// `Z_d1 x ... x Z_dk`, elements enumerated lexicographically with the
/// first coordinate most significant.
pub fn abelian_product(dims: &[usize]) -> Result<Instance> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(WmError::usage("abelian_product needs a nonempty list of positive dimensions"));
    }
    let order: usize = dims.iter().product();
    let digits = |mut x: usize| {
        let mut out = vec![0; dims.len()];
        for (slot, &d) in out.iter_mut().zip(dims).rev() {
            *slot = x % d;
            x /= d;
        }
        out
    };
    let table = CayleyTable::from_fn(order, |a, b| {
        let (da, db) = (digits(a), digits(b));
        dims.iter()
            .zip(da.iter().zip(&db))
            .fold(0, |acc, (&d, (&x, &y))| acc * d + (x + y) % d)
    })?;
    let label = dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
    Ok(named(table, format!("abelian_product([{label}])")))
}

/// `a * b = -(a + b) mod n`.
pub fn neg_add(n: usize) -> Result<Instance> {
    if n == 0 {
        return Err(WmError::usage("neg_add(n) needs n >= 1"));
    }
    let table = CayleyTable::from_fn(n, |a, b| (2 * n - a - b) % n)?;
    Ok(named(table, format!("neg_add({n})")))
}

/// `a * b = b`.
pub fn right_projection(n: usize) -> Result<Instance> {
    if n == 0 {
        return Err(WmError::usage("right_projection(n) needs n >= 1"));
    }
    let table = CayleyTable::from_fn(n, |_, b| b)?;
    Ok(named(table, format!("right_projection({n})")))
}

/// `a * b = pi(b)` for an involution `pi`.
pub fn involution_rows(n: usize, pi: &[Element]) -> Result<Instance> {
    if n == 0 || !is_permutation(pi, n) {
        return Err(WmError::usage(format!("involution_rows needs a permutation of 0..{n}")));
    }
    if let Some(x) = (0..n).find(|&x| pi[pi[x]] != x) {
        return Err(WmError::usage(format!("pi is not an involution: pi(pi({x})) != {x}")));
    }
    let table = CayleyTable::from_fn(n, |_, b| pi[b])?;
    let label = pi.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
    Ok(named(table, format!("involution_rows({n},[{label}])")))
}

/// The transposition of `0` and `1` on `0..n` (identity when `n < 2`).
pub fn swap01(n: usize) -> Vec<Element> {
    let mut pi: Vec<Element> = (0..n).collect();
    if n >= 2 {
        pi.swap(0, 1);
    }
    pi
}

/// Every involution of `0..n`, in lexicographic order of image arrays.
pub fn involutions(n: usize) -> Vec<Vec<Element>> {
    fn extend(pi: &mut Vec<Option<Element>>, out: &mut Vec<Vec<Element>>) {
        let Some(x) = pi.iter().position(Option::is_none) else {
            out.push(pi.iter().map(|p| p.unwrap()).collect());
            return;
        };
        pi[x] = Some(x);
        extend(pi, out);
        for y in x + 1..pi.len() {
            if pi[y].is_none() {
                pi[x] = Some(y);
                pi[y] = Some(x);
                extend(pi, out);
                pi[y] = None;
            }
        }
        pi[x] = None;
    }
    let mut out = Vec::new();
    extend(&mut vec![None; n], &mut out);
    out.sort();
    out
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 7] = [
    "paper_z4",
    "sym3",
    "cyclic",
    "abelian_product",
    "neg_add",
    "right_projection",
    "involution_rows",
];

/// Looks up a built-in by name. `param` is `n` for the families, a
/// comma-separated dimension list for `abelian_product`, and `n` or
/// `n:pi0,pi1,...` for `involution_rows` (default: swap 0 and 1).
pub fn builtin(name: &str, param: Option<&str>) -> Result<Instance> {
    let need = |p: Option<&str>| -> Result<usize> {
        let p = p.ok_or_else(|| WmError::usage(format!("`{name}` needs --param n")))?;
        p.trim()
            .parse()
            .map_err(|_| WmError::usage(format!("`{name}`: cannot read `{p}` as a positive integer")))
    };
    let list = |p: &str| -> Result<Vec<usize>> {
        p.split(',')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| WmError::usage(format!("`{name}`: bad list entry `{x}`")))
            })
            .collect()
    };
    match name {
        "paper_z4" => Ok(paper_z4()),
        "sym3" => Ok(sym3()),
        "cyclic" => cyclic(need(param)?),
        "neg_add" => neg_add(need(param)?),
        "right_projection" => right_projection(need(param)?),
        "abelian_product" => {
            let p = param.ok_or_else(|| WmError::usage("`abelian_product` needs --param d1,d2,..."))?;
            abelian_product(&list(p)?)
        }
        "involution_rows" => {
            let p = param.ok_or_else(|| WmError::usage("`involution_rows` needs --param n[:pi]"))?;
            match p.split_once(':') {
                Some((n, pi)) => involution_rows(need(Some(n))?, &list(pi)?),
                None => {
                    let n = need(Some(p))?;
                    involution_rows(n, &swap01(n))
                }
            }
        }
        other => Err(WmError::usage(format!(
            "unknown built-in `{other}` (known: {})",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

/// The positive controls: every instance here passes strong verification.
pub fn positive_controls() -> Vec<Instance> {
    let mut out = vec![paper_z4()];
    out.extend((1..=12).map(|n| cyclic(n).unwrap()));
    for dims in [&[2, 2][..], &[2, 3], &[2, 2, 2], &[2, 4], &[3, 3]] {
        out.push(abelian_product(dims).unwrap());
    }
    out.extend((1..=12).map(|n| neg_add(n).unwrap()));
    out.extend((1..=8).map(|n| right_projection(n).unwrap()));
    out.extend((2..=8).map(|n| involution_rows(n, &swap01(n)).unwrap()));
    out
}

/// Instances of order at most `max_order` from [`positive_controls`],
/// skipping the duplicate order-1 tables.
pub fn small_controls(max_order: usize) -> Vec<Instance> {
    positive_controls()
        .into_iter()
        .filter(|i| i.table.order() <= max_order)
        .filter(|i| i.table.order() > 1 || i.name() == "cyclic(1)")
        .collect()
}
