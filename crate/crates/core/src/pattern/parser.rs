use std::collections::{BTreeMap, HashSet};

use super::template::{encode_template, parse_template, placeholders, Segment};
use super::{Expansion, HotSpot, Objective, ParseDiagnostic, Pattern, Sort};
use crate::gsn::{ArgumentGraph, EdgeKind, GsnEdge, GsnNode, NodeId, NodeKind};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(u64),
    Str(String),
    Colon,
    Star,
    Question,
    Eq,
    DotDot,
    Arrow(EdgeKind),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Number(n) => format!("'{n}'"),
            Tok::Str(_) => "string literal".into(),
            Tok::Colon => "':'".into(),
            Tok::Star => "'*'".into(),
            Tok::Question => "'?'".into(),
            Tok::Eq => "'='".into(),
            Tok::DotDot => "'..'".into(),
            Tok::Arrow(k) => format!("'-{}->'", arrow_name(*k)),
        }
    }
}

fn arrow_name(kind: EdgeKind) -> &'static str {
    match kind {
        EdgeKind::SupportedBy => "supportedBy",
        EdgeKind::InContextOf => "inContextOf",
    }
}

pub(super) fn arrow(kind: EdgeKind) -> String {
    format!("-{}->", arrow_name(kind))
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

type LexError = (usize, String);

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-')
}

fn lex_line(line: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        let tok = if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            Tok::Number(
                digits
                    .parse()
                    .map_err(|_| (col, format!("number '{digits}' is too large")))?,
            )
        } else if c == '"' {
            i += 1;
            let mut value = String::new();
            loop {
                match chars.get(i) {
                    None => return Err((col, "unterminated string literal".into())),
                    Some('"') => {
                        i += 1;
                        break;
                    }
                    Some('\\') => match chars.get(i + 1) {
                        Some(&e @ ('"' | '\\')) => {
                            value.push(e);
                            i += 2;
                        }
                        _ => return Err((i + 1, "invalid escape in string literal".into())),
                    },
                    Some(&ch) => {
                        value.push(ch);
                        i += 1;
                    }
                }
            }
            Tok::Str(value)
        } else if c == '-' {
            let rest: String = chars[i..].iter().collect();
            let kind = [EdgeKind::SupportedBy, EdgeKind::InContextOf]
                .into_iter()
                .find(|k| rest.starts_with(&arrow(*k)))
                .ok_or_else(|| {
                    (
                        col,
                        "expected '-supportedBy->' or '-inContextOf->'".to_string(),
                    )
                })?;
            i += arrow(kind).chars().count();
            Tok::Arrow(kind)
        } else if c == '.' && chars.get(i + 1) == Some(&'.') {
            i += 2;
            Tok::DotDot
        } else {
            i += 1;
            match c {
                ':' => Tok::Colon,
                '*' => Tok::Star,
                '?' => Tok::Question,
                '=' => Tok::Eq,
                other => return Err((col, format!("unexpected character '{other}'"))),
            }
        };
        tokens.push(Token { tok, col });
    }
    Ok(tokens)
}

struct Cursor<'a> {
    tokens: &'a [Token],
    pos: usize,
    /// Column reported when the line ends early.
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn col(&self) -> usize {
        self.peek().map_or(self.end_col, |t| t.col)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, LexError> {
        let found = self
            .peek()
            .map_or("end of line".to_string(), |t| t.tok.describe());
        Err((self.col(), format!("expected {expected}, found {found}")))
    }

    fn ident(&mut self, expected: &str) -> Result<(String, usize), LexError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                col,
            }) => {
                self.pos += 1;
                Ok((s.clone(), *col))
            }
            _ => self.fail(expected),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), LexError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s), ..
            }) if s == word => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(&format!("'{word}'")),
        }
    }

    fn punct(&mut self, tok: Tok) -> Result<(), LexError> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => self.fail(&tok.describe()),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().map(|t| &t.tok) == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64, LexError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Number(n),
                ..
            }) => {
                self.pos += 1;
                Ok(*n)
            }
            _ => self.fail("a number"),
        }
    }

    fn string(&mut self) -> Result<(String, usize), LexError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Str(s),
                col,
            }) => {
                self.pos += 1;
                Ok((s.clone(), *col))
            }
            _ => self.fail("a quoted statement"),
        }
    }

    fn end(&self) -> Result<(), LexError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => self.fail("end of line"),
        }
    }
}

struct TemplateText {
    segments: Vec<Segment>,
    line: usize,
    col: usize,
}

struct NodeDecl {
    id: NodeId,
    kind: NodeKind,
    statement: TemplateText,
    undeveloped: bool,
    expansion: Option<(Expansion, usize)>,
    tags: Vec<(String, TemplateText)>,
}

struct EdgeDecl {
    source: (String, usize),
    target: (String, usize),
    kind: EdgeKind,
    line: usize,
}

#[derive(Default)]
struct State {
    header: Option<(String, String)>,
    objective: Option<Objective>,
    params: Vec<HotSpot>,
    nodes: Vec<NodeDecl>,
    edges: Vec<EdgeDecl>,
    diags: Vec<ParseDiagnostic>,
}

impl State {
    fn diag(&mut self, line: usize, column: usize, message: impl Into<String>) {
        self.diags.push(ParseDiagnostic {
            line,
            column: column.max(1),
            message: message.into(),
        });
    }
}

/// Parses a pattern from UTF-8 bytes; invalid UTF-8 is reported as a
/// diagnostic rather than rejected by the type system.
pub fn parse_pattern_bytes(bytes: &[u8]) -> Result<Pattern, Vec<ParseDiagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_pattern(text),
        Err(e) => {
            let valid = &bytes[..e.valid_up_to()];
            let line = valid.iter().filter(|&&b| b == b'\n').count() + 1;
            let line_start = valid.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
            let column = String::from_utf8_lossy(&valid[line_start..])
                .chars()
                .count()
                + 1;
            Err(vec![ParseDiagnostic {
                line,
                column,
                message: "source is not valid UTF-8".into(),
            }])
        }
    }
}

pub fn parse_pattern(source: &str) -> Result<Pattern, Vec<ParseDiagnostic>> {
    let mut state = State::default();
    let mut saw_declaration = false;

    for (index, raw) in source.split('\n').enumerate() {
        let line = index + 1;
        let tokens = match lex_line(raw) {
            Ok(tokens) => tokens,
            Err((col, message)) => {
                state.diag(line, col, message);
                continue;
            }
        };
        if tokens.is_empty() {
            continue;
        }
        let end_col = raw.trim_end().chars().count().max(1);
        let mut cur = Cursor {
            tokens: &tokens,
            pos: 0,
            end_col,
        };
        let seen_before = saw_declaration;
        saw_declaration = true;
        let keyword = match &tokens[0].tok {
            Tok::Ident(k) => k.clone(),
            _ => String::new(),
        };
        if !seen_before && keyword != "pattern" {
            state.diag(line, 1, "expected 'pattern' header");
        }
        let result = match keyword.as_str() {
            "pattern" => parse_header(&mut cur, &mut state, seen_before),
            "objective" => parse_objective(&mut cur, &mut state),
            "param" => parse_param(&mut cur, &mut state),
            "node" => parse_node(&mut cur, &mut state, line),
            "edge" => parse_edge(&mut cur, &mut state, line),
            _ => Err((
                tokens[0].col,
                format!(
                    "expected a declaration ('pattern', 'objective', 'param', 'node', 'edge'), found {}",
                    tokens[0].tok.describe()
                ),
            )),
        };
        if let Err((col, message)) = result {
            state.diag(line, col, message);
        }
    }

    if !saw_declaration {
        state.diag(1, 1, "expected 'pattern' header");
    }

    finish(state)
}

fn parse_header(cur: &mut Cursor, state: &mut State, seen_before: bool) -> Result<(), LexError> {
    cur.next();
    let (name, _) = cur.ident("a pattern name")?;
    let (version, col) = cur.ident("a version such as 'v1'")?;
    cur.end()?;
    let Some(version) = version.strip_prefix('v').filter(|v| !v.is_empty()) else {
        return Err((
            col,
            format!("version '{version}' must look like 'v<version>'"),
        ));
    };
    if state.header.is_some() {
        return Err((1, "duplicate 'pattern' header".into()));
    }
    if seen_before {
        return Err((1, "'pattern' header must be the first declaration".into()));
    }
    state.header = Some((name, version.to_string()));
    Ok(())
}

fn parse_objective(cur: &mut Cursor, state: &mut State) -> Result<(), LexError> {
    cur.next();
    let (word, col) = cur.ident("an objective")?;
    cur.end()?;
    let objective: Objective = word.parse().map_err(|e| (col, e))?;
    if state.objective.replace(objective).is_some() {
        return Err((1, "duplicate 'objective' declaration".into()));
    }
    Ok(())
}

fn parse_param(cur: &mut Cursor, state: &mut State) -> Result<(), LexError> {
    cur.next();
    let (name, name_col) = cur.ident("a hot-spot name")?;
    if !super::template::is_placeholder_name(&name) {
        return Err((
            name_col,
            format!("hot-spot name '{name}' may only contain letters, digits and '_'"),
        ));
    }
    cur.punct(Tok::Colon)?;
    let (sort, sort_col) = cur.ident("a hot-spot sort")?;
    let sort: Sort = sort.parse().map_err(|e| (sort_col, e))?;
    let collection = cur.eat(&Tok::Star);
    let required = !cur.eat(&Tok::Question);
    cur.end()?;
    if state.params.iter().any(|p| p.name == name) {
        return Err((name_col, format!("duplicate hot spot '{name}'")));
    }
    state.params.push(HotSpot {
        name,
        sort,
        collection,
        required,
    });
    Ok(())
}

fn template_text(text: &str, line: usize, col: usize) -> Result<TemplateText, LexError> {
    let segments = parse_template(text).map_err(|e| (col + 1 + e.offset, e.message))?;
    Ok(TemplateText {
        segments,
        line,
        col,
    })
}

fn parse_node(cur: &mut Cursor, state: &mut State, line: usize) -> Result<(), LexError> {
    cur.next();
    let (raw_id, id_col) = cur.ident("a node id")?;
    let id = NodeId::new(raw_id).map_err(|e| (id_col, e.to_string()))?;
    cur.punct(Tok::Colon)?;
    let (kind, kind_col) = cur.ident("a node kind")?;
    let kind: NodeKind = kind.parse().map_err(|e| (kind_col, e))?;
    let (statement, stmt_col) = cur.string()?;
    let statement = template_text(&statement, line, stmt_col)?;

    let mut undeveloped = false;
    let mut expansion = None;
    let mut tags: Vec<(String, TemplateText)> = Vec::new();
    while cur.peek().is_some() {
        let col = cur.col();
        let (word, _) = cur.ident("a node modifier")?;
        match word.as_str() {
            "undeveloped" => undeveloped = true,
            "multiplicity" => {
                cur.keyword("over")?;
                let (over, _) = cur.ident("a hot-spot name")?;
                if expansion.replace((Expansion::Multiplicity { over }, col)).is_some() {
                    return Err((col, "a node takes at most one multiplicity or choice".into()));
                }
            }
            "choice" => {
                let min = cur.number()?;
                cur.punct(Tok::DotDot)?;
                let max = cur.number()?;
                let (min, max) = match (u32::try_from(min), u32::try_from(max)) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => return Err((col, "choice bound is too large".into())),
                };
                if expansion.replace((Expansion::Choice { min, max }, col)).is_some() {
                    return Err((col, "a node takes at most one multiplicity or choice".into()));
                }
            }
            "tag" => {
                let (key, key_col) = cur.ident("a tag key")?;
                cur.punct(Tok::Eq)?;
                let (value, value_col) = cur.string()?;
                if tags.iter().any(|(k, _)| *k == key) {
                    return Err((key_col, format!("duplicate tag '{key}'")));
                }
                tags.push((key, template_text(&value, line, value_col)?));
            }
            other => {
                return Err((
                    col,
                    format!(
                        "unknown node modifier '{other}' (expected 'undeveloped', 'multiplicity', 'choice' or 'tag')"
                    ),
                ))
            }
        }
    }
    if state.nodes.iter().any(|n| n.id == id) {
        return Err((id_col, format!("duplicate node id '{id}'")));
    }
    state.nodes.push(NodeDecl {
        id,
        kind,
        statement,
        undeveloped,
        expansion,
        tags,
    });
    Ok(())
}

fn parse_edge(cur: &mut Cursor, state: &mut State, line: usize) -> Result<(), LexError> {
    cur.next();
    let source = cur.ident("a source node id")?;
    let kind = match cur.next() {
        Some(Token {
            tok: Tok::Arrow(k), ..
        }) => *k,
        _ => {
            cur.pos -= 1;
            return cur.fail("'-supportedBy->' or '-inContextOf->'");
        }
    };
    let target = cur.ident("a target node id")?;
    cur.end()?;
    state.edges.push(EdgeDecl {
        source,
        target,
        kind,
        line,
    });
    Ok(())
}

fn finish(mut state: State) -> Result<Pattern, Vec<ParseDiagnostic>> {
    let declared: HashSet<String> = state.params.iter().map(|p| p.name.clone()).collect();

    let mut undeclared = Vec::new();
    for node in &state.nodes {
        let texts = std::iter::once(&node.statement).chain(node.tags.iter().map(|(_, t)| t));
        for text in texts {
            for p in placeholders(&text.segments) {
                if !declared.contains(&p.name) {
                    undeclared.push((text.line, text.col, p.name.clone()));
                }
            }
        }
        if let Some((Expansion::Multiplicity { over }, col)) = &node.expansion {
            if !declared.contains(over) {
                undeclared.push((node.statement.line, *col, over.clone()));
            }
        }
    }
    for (line, col, name) in undeclared {
        state.diag(line, col, format!("undeclared placeholder '{name}'"));
    }

    let ids: HashSet<&str> = state.nodes.iter().map(|n| n.id.as_str()).collect();
    let mut edges = Vec::new();
    let mut unknown = Vec::new();
    for edge in &state.edges {
        let mut ok = true;
        for (name, col) in [&edge.source, &edge.target] {
            if !ids.contains(name.as_str()) {
                unknown.push((edge.line, *col, name.clone()));
                ok = false;
            }
        }
        if ok {
            // Endpoints exist, so they are valid ids.
            if let (Ok(s), Ok(t)) = (
                NodeId::new(edge.source.0.as_str()),
                NodeId::new(edge.target.0.as_str()),
            ) {
                edges.push(GsnEdge::new(s, t, edge.kind));
            }
        }
    }
    for (line, col, name) in unknown {
        state.diag(line, col, format!("unknown edge endpoint '{name}'"));
    }

    if !state.diags.is_empty() {
        state.diags.sort_by_key(|d| (d.line, d.column));
        return Err(state.diags);
    }
    let Some((name, version)) = state.header else {
        return Err(vec![ParseDiagnostic {
            line: 1,
            column: 1,
            message: "expected 'pattern' header".into(),
        }]);
    };

    let mut expansions = BTreeMap::new();
    let mut nodes = Vec::new();
    for decl in state.nodes {
        let has_placeholders = std::iter::once(&decl.statement)
            .chain(decl.tags.iter().map(|(_, t)| t))
            .any(|t| placeholders(&t.segments).next().is_some());
        let mut node = GsnNode::new(
            decl.id.clone(),
            decl.kind,
            encode_template(&decl.statement.segments),
        );
        node.undeveloped = decl.undeveloped;
        node.uninstantiated = has_placeholders;
        for (key, value) in decl.tags {
            node.tags.insert(key, encode_template(&value.segments));
        }
        if let Some((expansion, _)) = decl.expansion {
            expansions.insert(decl.id, expansion);
        }
        nodes.push(node);
    }

    Ok(Pattern {
        name,
        version,
        objective: state.objective.unwrap_or(Objective::Generic),
        params: state.params,
        template: ArgumentGraph::from_parts(nodes, edges),
        expansions,
    })
}
