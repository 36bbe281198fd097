use std::path::Path;

use wm_core::catalog::{self, Instance};
use wm_core::{Result, SubSet, WmError};

/// A path if one exists, otherwise `NAME[:PARAM]` from the catalog.
pub fn load(spec: &str) -> Result<Instance> {
    let path = Path::new(spec);
    if path.exists() {
        let mut inst = catalog::load_table(path)?;
        if inst.table.name().is_none() {
            let stem = path.file_stem().map_or(spec.into(), |s| s.to_string_lossy().into_owned());
            inst.table = inst.table.with_name(stem);
        }
        return Ok(inst);
    }
    let (name, param) = match spec.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (spec, None),
    };
    if !catalog::BUILTIN_NAMES.contains(&name) {
        return Err(WmError::Usage(format!(
            "`{spec}` is neither a file nor a built-in (known: {})",
            catalog::BUILTIN_NAMES.join(", ")
        )));
    }
    catalog::builtin(name, param)
}

/// `0,3` or `e,a`, resolved against the instance's element names.
pub fn subset(inst: &Instance, list: &str) -> Result<SubSet> {
    let members = list
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            inst.resolve(t)
                .ok_or_else(|| WmError::Usage(format!("`{t}` is not an element of {}", inst.name())))
        })
        .collect::<Result<Vec<_>>>()?;
    if members.is_empty() {
        return Err(WmError::Usage("--subgroup needs at least one element".into()));
    }
    SubSet::new(inst.table.order(), members)
}
