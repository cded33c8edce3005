//! Line-based `.ccel` structure files.
//!
//! ```text
//! # three blocks
//! size 5
//! pred P0 = {0, 3}
//! equiv E0 convex = [[0,1],[2],[3,4]]
//! ```

use super::{FiniteCcelStructure, StructureError};

fn syntax(line: usize, message: impl Into<String>) -> StructureError {
    StructureError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_elements(line: usize, text: &str) -> Result<Vec<usize>, StructureError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| syntax(line, format!("bad element `{}`", t.trim())))
        })
        .collect()
}

fn parse_blocks(line: usize, text: &str) -> Result<Vec<Vec<usize>>, StructureError> {
    let text = text.trim();
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| syntax(line, "expected `[[...],...]`"))?;
    let mut blocks = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('[')
            .ok_or_else(|| syntax(line, "expected `[` starting a block"))?;
        let close = body
            .find(']')
            .ok_or_else(|| syntax(line, "unterminated block"))?;
        blocks.push(parse_elements(line, &body[..close])?);
        rest = body[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
        }
    }
    Ok(blocks)
}

fn split_decl(line: usize, text: &str) -> Result<(&str, &str), StructureError> {
    let eq = text
        .find('=')
        .ok_or_else(|| syntax(line, "expected `=`"))?;
    Ok((text[..eq].trim(), text[eq + 1..].trim()))
}

fn check_name(line: usize, name: &str) -> Result<(), StructureError> {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_uppercase() => {}
        _ => return Err(syntax(line, format!("symbol name `{name}` must start with an uppercase letter"))),
    }
    if chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        Ok(())
    } else {
        Err(syntax(line, format!("bad symbol name `{name}`")))
    }
}

/// Parses and validates a `.ccel` structure description.
pub fn parse_structure(text: &str) -> Result<FiniteCcelStructure, StructureError> {
    let mut size = None;
    let mut preds = Vec::new();
    let mut equivs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .ok_or_else(|| syntax(line, format!("incomplete declaration `{content}`")))?;
        match keyword {
            "size" => {
                if size.is_some() {
                    return Err(syntax(line, "size declared twice"));
                }
                size = Some(
                    rest.trim()
                        .parse::<usize>()
                        .map_err(|_| syntax(line, "bad size"))?,
                );
            }
            "pred" => {
                let (name, body) = split_decl(line, rest)?;
                check_name(line, name)?;
                let inner = body
                    .strip_prefix('{')
                    .and_then(|b| b.strip_suffix('}'))
                    .ok_or_else(|| syntax(line, "expected `{...}`"))?;
                preds.push((name.to_string(), parse_elements(line, inner)?));
            }
            "equiv" => {
                let (head, body) = split_decl(line, rest)?;
                let mut parts = head.split_whitespace();
                let name = parts.next().ok_or_else(|| syntax(line, "missing name"))?;
                check_name(line, name)?;
                let convex = match parts.next() {
                    Some("convex") => true,
                    Some("free") => false,
                    _ => return Err(syntax(line, "expected `convex` or `free`")),
                };
                if parts.next().is_some() {
                    return Err(syntax(line, "unexpected tokens before `=`"));
                }
                equivs.push((name.to_string(), convex, parse_blocks(line, body)?));
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }
    let size = size.ok_or_else(|| syntax(0, "missing `size` declaration"))?;
    FiniteCcelStructure::new(size, preds, equivs)
}

/// Renders a structure back to the `.ccel` format.
pub fn render_structure(s: &FiniteCcelStructure) -> String {
    let mut out = format!("size {}\n", s.size());
    for p in s.predicates() {
        let elems: Vec<String> = p
            .members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(e, _)| e.to_string())
            .collect();
        out.push_str(&format!("pred {} = {{{}}}\n", p.name, elems.join(",")));
    }
    for e in s.equivalences() {
        out.push_str(&format!(
            "equiv {} {} = {}\n",
            e.name,
            if e.convex { "convex" } else { "free" },
            e.partition
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# sample\nsize 5\npred P0 = {0, 3}\nequiv E0 convex = [[0,1],[2],[3,4]]\nequiv R free = [[0,4],[1,2,3]] # trailing\n";

    #[test]
    fn parses_and_renders() {
        let s = parse_structure(SAMPLE).unwrap();
        assert_eq!(s.size(), 5);
        assert_eq!(s.predicate("P0").unwrap(), &[true, false, false, true, false]);
        let again = parse_structure(&render_structure(&s)).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(
            parse_structure("size 3\nequiv E0 convex = [[0,2],[1]]"),
            Err(StructureError::NonContiguousConvexBlock { .. })
        ));
        assert!(matches!(
            parse_structure("size 3\nfoo bar"),
            Err(StructureError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_structure("pred P = {}"),
            Err(StructureError::Syntax { .. })
        ));
        assert!(matches!(
            parse_structure("size 2\npred p = {0}"),
            Err(StructureError::Syntax { line: 2, .. })
        ));
    }
}
