//! Tiny expression language for naming events on the command line, so the
//! CLI never evaluates arbitrary code:
//!
//! ```text
//! omega                    the sure event
//! chooses(x,slot)          vertex x selects its slot
//! edge(x,y,mode)           the {x,y} edge is open
//! conn(x,y,mode)           x and y joined within the support
//! reach(n,mode)            origin cluster reaches distance n
//! and(E;E;...) or(E;...) not(E)
//! ```
//!
//! Vertices are window ids. The support is inferred from the mentioned
//! vertices (`reach` pulls in the whole ball of its radius) and can be
//! widened with an explicit `--support` list.

use crate::CliError;
use dvp_core::cluster::Mode;
use dvp_core::events::{EventSpec, Predicate};
use dvp_core::graph::GraphWindow;

pub fn parse_event(
    window: &GraphWindow,
    text: &str,
    extra_support: &[u32],
) -> Result<EventSpec, CliError> {
    let mut support = Vec::new();
    let predicate = parse_expr(window, text.trim(), &mut support)?;
    support.extend_from_slice(extra_support);
    if support.is_empty() {
        support.push(0);
    }
    for &v in &support {
        if v as usize >= window.vertex_count() {
            return Err(CliError::usage(format!(
                "event vertex {v} outside window of {} vertices",
                window.vertex_count()
            )));
        }
    }
    Ok(EventSpec::new(support, predicate, text.trim()))
}

fn parse_expr(
    window: &GraphWindow,
    text: &str,
    support: &mut Vec<u32>,
) -> Result<Predicate, CliError> {
    let text = text.trim();
    if text.eq_ignore_ascii_case("omega") {
        return Ok(Predicate::Always);
    }
    let open = text
        .find('(')
        .ok_or_else(|| CliError::usage(format!("event: expected name(...), got '{text}'")))?;
    if !text.ends_with(')') {
        return Err(CliError::usage(format!("event: unbalanced parens in '{text}'")));
    }
    let name = text[..open].trim().to_ascii_lowercase();
    let body = &text[open + 1..text.len() - 1];
    match name.as_str() {
        "and" | "or" => {
            let parts = split_top(body, ';')?;
            let mut children = Vec::new();
            for part in parts {
                children.push(parse_expr(window, &part, support)?);
            }
            if children.is_empty() {
                return Err(CliError::usage(format!("event: empty {name}(...)")));
            }
            Ok(if name == "and" {
                Predicate::All(children)
            } else {
                Predicate::Any(children)
            })
        }
        "not" => Ok(Predicate::Not(Box::new(parse_expr(window, body, support)?))),
        "chooses" => {
            let args = split_top(body, ',')?;
            let [x, slot] = two(&args, "chooses(x,slot)")?;
            let x: u32 = num(&x)?;
            let slot: usize = num(&slot)?;
            if slot >= window.degree() {
                return Err(CliError::usage(format!(
                    "chooses: slot {slot} out of range for degree {}",
                    window.degree()
                )));
            }
            support.push(x);
            Ok(Predicate::Chooses { x, slot })
        }
        "edge" | "conn" => {
            let args = split_top(body, ',')?;
            let [x, y, mode] = three(&args, "edge(x,y,mode)")?;
            let x: u32 = num(&x)?;
            let y: u32 = num(&y)?;
            let mode = parse_mode(&mode)?;
            support.push(x);
            support.push(y);
            Ok(if name == "edge" {
                Predicate::EdgeOpen { x, y, mode }
            } else {
                Predicate::Connected { a: x, b: y, mode }
            })
        }
        "reach" => {
            let args = split_top(body, ',')?;
            let [n, mode] = two(&args, "reach(n,mode)")?;
            let n: u32 = num(&n)?;
            let mode = parse_mode(&mode)?;
            if n > window.radius() {
                return Err(CliError::usage(format!(
                    "reach: shell {n} outside window radius {}",
                    window.radius()
                )));
            }
            // The event depends on the whole ball of radius n.
            for v in 0..window.vertex_count() as u32 {
                if window.distance(v) <= n {
                    support.push(v);
                }
            }
            Ok(Predicate::ReachesShell { n, mode })
        }
        other => Err(CliError::usage(format!("event: unknown predicate '{other}'"))),
    }
}

fn split_top(body: &str, separator: char) -> Result<Vec<String>, CliError> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in body.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| CliError::usage("event: unbalanced parens".to_string()))?;
                current.push(ch);
            }
            c if c == separator && depth == 0 => {
                parts.push(current.trim().to_string());
                current.clear();
            }
            _ => current.push(ch),
        }
    }
    if !current.trim().is_empty() {
        parts.push(current.trim().to_string());
    }
    Ok(parts)
}

fn parse_mode(raw: &str) -> Result<Mode, CliError> {
    raw.trim().parse::<Mode>().map_err(CliError::usage)
}

fn num<T: std::str::FromStr>(raw: &str) -> Result<T, CliError> {
    raw.trim()
        .parse::<T>()
        .map_err(|_| CliError::usage(format!("event: bad number '{raw}'")))
}

fn two(args: &[String], usage: &str) -> Result<[String; 2], CliError> {
    if args.len() != 2 {
        return Err(CliError::usage(format!("event: expected {usage}")));
    }
    Ok([args[0].clone(), args[1].clone()])
}

fn three(args: &[String], usage: &str) -> Result<[String; 3], CliError> {
    if args.len() != 3 {
        return Err(CliError::usage(format!("event: expected {usage}")));
    }
    Ok([args[0].clone(), args[1].clone(), args[2].clone()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use dvp_core::graph::{build_window, GraphKind};

    #[test]
    fn parses_composites() {
        let w = build_window(&GraphKind::Line, 3).unwrap();
        let e = parse_event(&w, "and(edge(0,1,weak); not(chooses(2,1)))", &[]).unwrap();
        assert_eq!(e.support, vec![0, 1, 2]);
        let e = parse_event(&w, "reach(2,strong)", &[]).unwrap();
        assert_eq!(e.support.len(), 5); // ball of radius 2 on the chain
        assert!(parse_event(&w, "frob(1)", &[]).is_err());
        assert!(parse_event(&w, "edge(0,1)", &[]).is_err());
    }
}
