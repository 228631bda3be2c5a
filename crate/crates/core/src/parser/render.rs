use std::fmt::Write;

use crate::model::{Model, DEFAULT_MODEL_NAME};
use crate::numfmt::shortest;

const LINE_WIDTH: usize = 80;

/// Canonical text for `model`. Parsing the output yields the same model.
pub fn render_model(model: &Model) -> String {
    let mut out = String::new();
    let section = |out: &mut String, lines: Vec<String>| {
        if lines.is_empty() {
            return;
        }
        if !out.is_empty() {
            out.push('\n');
        }
        for l in lines {
            out.push_str(&l);
            out.push('\n');
        }
    };

    if model.name != DEFAULT_MODEL_NAME {
        section(&mut out, vec![format!("model {};", model.name)]);
    }
    section(
        &mut out,
        model
            .parameters
            .iter()
            .map(|p| format!("{} = {};", p.name, render_value(p.value)))
            .collect(),
    );
    section(
        &mut out,
        model
            .locations
            .iter()
            .map(|l| {
                let parent = l.parent.as_ref().map(|p| format!(" in {p}")).unwrap_or_default();
                format!(
                    "location {}{parent} : size = {}, type = {};",
                    l.name,
                    l.size,
                    l.kind.keyword()
                )
            })
            .collect(),
    );
    section(
        &mut out,
        model
            .functional_rates
            .iter()
            .map(|r| format!("{} = {};", r.action, r.law))
            .collect(),
    );
    section(
        &mut out,
        model
            .species
            .iter()
            .map(|c| {
                if c.prefixes.is_empty() {
                    return format!("{} = ();", c.name);
                }
                let terms: Vec<String> = c
                    .prefixes
                    .iter()
                    .map(|p| {
                        let loc = p.location.as_ref().map(|l| format!("@{l}")).unwrap_or_default();
                        format!(
                            "({},{}) {} {}{loc}",
                            p.action,
                            p.stoichiometry,
                            p.role.operator(),
                            c.name
                        )
                    })
                    .collect();
                wrap(&format!("{} = ", c.name), &terms, " + ", ";")
            })
            .collect(),
    );
    section(
        &mut out,
        model
            .events
            .iter()
            .map(|e| {
                let body: Vec<String> = e
                    .assignments
                    .iter()
                    .map(|a| format!("{} = {}", a.target, a.value))
                    .collect();
                format!(
                    "event {} at {} {{ {} }}",
                    e.name,
                    shortest(e.trigger_time),
                    body.join(", ")
                )
            })
            .collect(),
    );

    let comps: Vec<String> = model
        .system
        .iter()
        .map(|i| {
            let mut s = i.species.clone();
            if let Some(l) = &i.location {
                let _ = write!(s, "@{l}");
            }
            if let Some(a) = i.initial_amount {
                let _ = write!(s, "[{}]", shortest(a));
            }
            s
        })
        .collect();
    let system = if comps.is_empty() {
        "()".to_string()
    } else {
        wrap("", &comps, " <*> ", "")
    };
    section(&mut out, vec![system]);
    out
}

fn render_value(v: f64) -> String {
    if v.is_sign_negative() && v != 0.0 {
        format!("-{}", shortest(-v))
    } else {
        shortest(v)
    }
}

/// Joins `items` on one line, or one item per line when too long.
fn wrap(head: &str, items: &[String], sep: &str, tail: &str) -> String {
    let one_line = format!("{head}{}{tail}", items.join(sep));
    if one_line.len() <= LINE_WIDTH || items.len() == 1 {
        return one_line;
    }
    let indent = " ".repeat(head.len().max(4));
    let sep = sep.trim_end();
    let mut s = String::from(head);
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            s.push_str(sep);
            s.push('\n');
            s.push_str(&indent);
        }
        s.push_str(item);
    }
    s.push_str(tail);
    s
}
