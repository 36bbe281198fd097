//! The `wmtable v1` text format.
//!
//! ```text
//! wmtable v1
//! name: paper_z4          (optional)
//! order: 4
//! elements: e a b c       (optional; default 0..n-1)
//! <n rows of n whitespace-separated names or indices>
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Blank lines are
//! ignored.

use std::fmt::Write as _;
use std::path::Path;

use super::{validate_names, Instance};
use crate::error::{Result, WmError};
use crate::table::CayleyTable;

const HEADER: &str = "wmtable v1";

fn err(line: usize, message: impl Into<String>) -> WmError {
    WmError::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_table(text: &str) -> Result<Instance> {
    parse_with_provenance(text, "<text>")
}

pub fn load_table(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    parse_with_provenance(&text, &path.display().to_string())
}

fn parse_with_provenance(text: &str, provenance: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .peekable();

    match lines.next() {
        Some((_, HEADER)) => {}
        Some((no, other)) => return Err(err(no, format!("expected `{HEADER}`, found `{other}`"))),
        None => return Err(err(1, "empty input")),
    }

    let mut name = None;
    if let Some(&(_, l)) = lines.peek() {
        if let Some(rest) = l.strip_prefix("name:") {
            name = Some(rest.trim().to_string());
            lines.next();
        }
    }

    let (order_line, order) = match lines.next() {
        Some((no, l)) => {
            let rest = l
                .strip_prefix("order:")
                .ok_or_else(|| err(no, format!("expected `order: <n>`, found `{l}`")))?;
            let n: usize = rest
                .trim()
                .parse()
                .map_err(|_| err(no, format!("order `{}` is not a positive integer", rest.trim())))?;
            if n == 0 {
                return Err(err(no, "order must be positive"));
            }
            (no, n)
        }
        None => return Err(err(text.lines().count().max(1), "missing `order:` line")),
    };

    let mut names = None;
    if let Some(&(no, l)) = lines.peek() {
        if let Some(rest) = l.strip_prefix("elements:") {
            let list: Vec<String> = rest.split_whitespace().map(String::from).collect();
            validate_names(&list, order).map_err(|m| err(no, m))?;
            names = Some(list);
            lines.next();
        }
    }

    let resolve = |no: usize, tok: &str| -> Result<usize> {
        if let Some(names) = &names {
            if let Some(i) = names.iter().position(|n| n == tok) {
                return Ok(i);
            }
        }
        match tok.parse::<usize>() {
            Ok(i) if i < order => Ok(i),
            Ok(i) => Err(err(no, format!("entry {i} out of range for order {order}"))),
            Err(_) => Err(err(no, format!("unknown element `{tok}`"))),
        }
    };

    let mut entries = Vec::with_capacity(order * order);
    for row in 0..order {
        let Some((no, l)) = lines.next() else {
            return Err(err(
                order_line,
                format!("order {order} declared here but only {row} grid rows follow"),
            ));
        };
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != order {
            return Err(err(
                no,
                format!("grid row has {} entries, expected {order}", toks.len()),
            ));
        }
        for tok in toks {
            entries.push(resolve(no, tok)?);
        }
    }
    if let Some((no, l)) = lines.next() {
        return Err(err(no, format!("unexpected content after the grid: `{l}`")));
    }

    let mut table = CayleyTable::from_flat(order, entries)?;
    if let Some(n) = &name {
        table = table.with_name(n.clone());
    }
    Ok(Instance {
        table,
        element_names: names,
        provenance: provenance.to_string(),
    })
}

pub fn serialize(instance: &Instance) -> String {
    let t = &instance.table;
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    if let Some(name) = t.name() {
        let _ = writeln!(out, "name: {name}");
    }
    let _ = writeln!(out, "order: {}", t.order());
    if let Some(names) = &instance.element_names {
        let _ = writeln!(out, "elements: {}", names.join(" "));
    }
    for row in t.rows() {
        let cells: Vec<String> = row.iter().map(|&v| instance.element_name(v)).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{paper_z4, sym3};

    #[test]
    fn paper_z4_round_trips() {
        let z4 = paper_z4();
        let text = serialize(&z4);
        assert!(text.starts_with("wmtable v1\nname: paper_z4\norder: 4\nelements: [r] r m m^-1\n"));
        let back = parse_table(&text).unwrap();
        assert!(back.same_structure(&z4));
    }

    #[test]
    fn names_take_precedence_over_indices() {
        // sym3 uses "1" as the name of element 0
        let s3 = sym3();
        let back = parse_table(&serialize(&s3)).unwrap();
        assert!(back.same_structure(&s3));
    }

    #[test]
    fn short_grid_names_the_order_line() {
        let text = "wmtable v1\norder: 4\n0 1 2 3\n1 2 3 0\n2 3 0 1\n";
        assert_eq!(
            parse_table(text).unwrap_err(),
            WmError::Parse {
                line: 2,
                message: "order 4 declared here but only 3 grid rows follow".into()
            }
        );
    }

    #[test]
    fn out_of_range_entry() {
        let text = "wmtable v1\norder: 4\n0 1 2 3\n1 2 3 0\n2 3 0 5\n3 0 1 2\n";
        match parse_table(text).unwrap_err() {
            WmError::Parse { line, message } => {
                assert_eq!(line, 5);
                assert!(message.contains("out of range"), "{message}");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        let cases = [
            ("wmtable v2\norder: 1\n0\n", 1),
            ("wmtable v1\norder: x\n0\n", 2),
            ("wmtable v1\norder: 2\n0 1\n1\n", 4),
            ("wmtable v1\norder: 2\nelements: a a\na a\na a\n", 3),
            ("wmtable v1\norder: 2\nelements: a b\na c\nb a\n", 4),
            ("wmtable v1\norder: 1\n0\n0\n", 4),
        ];
        for (text, want) in cases {
            match parse_table(text) {
                Err(WmError::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# leading comment\nwmtable v1\n\norder: 2 # two\n0 1\n# middle\n1 0\n";
        let inst = parse_table(text).unwrap();
        assert_eq!(inst.table.flat(), &[0, 1, 1, 0]);
        assert!(inst.table.name().is_none());
    }
}
