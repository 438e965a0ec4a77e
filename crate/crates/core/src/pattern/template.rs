//! Statement templates: literal text with `{name}` / `{name.field}`
//! placeholders. `{{` and `}}` stand for literal braces.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placeholder {
    pub name: String,
    pub field: Option<String>,
}

impl fmt::Display for Placeholder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(field) => write!(f, "{{{}.{}}}", self.name, field),
            None => write!(f, "{{{}}}", self.name),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Literal(String),
    Placeholder(Placeholder),
}

/// A malformed placeholder; `offset` counts characters from the start of
/// the template text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateError {
    pub offset: usize,
    pub message: String,
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn is_placeholder_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if is_name_start(c)) && chars.all(is_name_char)
}

pub fn parse_template(text: &str) -> Result<Vec<Segment>, TemplateError> {
    let chars: Vec<char> = text.chars().collect();
    let mut segments = Vec::new();
    let mut literal = String::new();
    let mut i = 0;
    while i < chars.len() {
        match chars[i] {
            '{' if chars.get(i + 1) == Some(&'{') => {
                literal.push('{');
                i += 2;
            }
            '}' if chars.get(i + 1) == Some(&'}') => {
                literal.push('}');
                i += 2;
            }
            '{' => {
                let start = i;
                let close = chars[i + 1..]
                    .iter()
                    .position(|&c| c == '}')
                    .map(|p| p + i + 1)
                    .ok_or_else(|| TemplateError {
                        offset: start,
                        message: "unterminated placeholder".into(),
                    })?;
                let inner: String = chars[i + 1..close].iter().collect();
                let (name, field) = match inner.split_once('.') {
                    Some((n, f)) => (n.to_string(), Some(f.to_string())),
                    None => (inner.clone(), None),
                };
                let field_ok = field.as_deref().is_none_or(is_placeholder_name);
                if !is_placeholder_name(&name) || !field_ok {
                    return Err(TemplateError {
                        offset: start,
                        message: format!("malformed placeholder '{{{inner}}}'"),
                    });
                }
                if !literal.is_empty() {
                    segments.push(Segment::Literal(std::mem::take(&mut literal)));
                }
                segments.push(Segment::Placeholder(Placeholder { name, field }));
                i = close + 1;
            }
            c => {
                literal.push(c);
                i += 1;
            }
        }
    }
    if !literal.is_empty() {
        segments.push(Segment::Literal(literal));
    }
    Ok(segments)
}

/// The canonical template text for `segments`.
pub fn encode_template(segments: &[Segment]) -> String {
    let mut out = String::new();
    for segment in segments {
        match segment {
            Segment::Literal(text) => {
                for c in text.chars() {
                    match c {
                        '{' => out.push_str("{{"),
                        '}' => out.push_str("}}"),
                        c => out.push(c),
                    }
                }
            }
            Segment::Placeholder(p) => out.push_str(&p.to_string()),
        }
    }
    out
}

pub fn placeholders(segments: &[Segment]) -> impl Iterator<Item = &Placeholder> {
    segments.iter().filter_map(|s| match s {
        Segment::Placeholder(p) => Some(p),
        Segment::Literal(_) => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_literals_and_placeholders() {
        let segs = parse_template("{system} in {scenario.description}").unwrap();
        assert_eq!(
            segs,
            vec![
                Segment::Placeholder(Placeholder {
                    name: "system".into(),
                    field: None
                }),
                Segment::Literal(" in ".into()),
                Segment::Placeholder(Placeholder {
                    name: "scenario".into(),
                    field: Some("description".into())
                }),
            ]
        );
    }

    #[test]
    fn escapes() {
        let segs = parse_template("a {{b}} c } d").unwrap();
        assert_eq!(segs, vec![Segment::Literal("a {b} c } d".into())]);
        assert_eq!(encode_template(&segs), "a {{b}} c }} d");
    }

    #[test]
    fn malformed() {
        assert_eq!(parse_template("x {open").unwrap_err().offset, 2);
        assert!(parse_template("{a b}").is_err());
        assert!(parse_template("{a.b.c}").is_err());
        assert!(parse_template("{}").is_err());
    }
}
