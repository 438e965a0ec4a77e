//! A checker for the GraphViz DOT language grammar, independent of the
//! emitter. Supports the full statement grammar except HTML strings.

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Colon,
    Eq,
    EdgeOp(&'static str),
}

#[derive(Debug, Default)]
pub struct Summary {
    pub directed: bool,
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
}

fn is_id_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_' || (c as u32) >= 0x80
}

fn lex(text: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '/' if chars.get(i + 1) == Some(&'*') => {
                i += 2;
                loop {
                    if i + 1 >= chars.len() {
                        return Err("unterminated comment".into());
                    }
                    if chars[i] == '*' && chars[i + 1] == '/' {
                        i += 2;
                        break;
                    }
                    i += 1;
                }
            }
            '{' => {
                out.push(Tok::LBrace);
                i += 1;
            }
            '}' => {
                out.push(Tok::RBrace);
                i += 1;
            }
            '[' => {
                out.push(Tok::LBracket);
                i += 1;
            }
            ']' => {
                out.push(Tok::RBracket);
                i += 1;
            }
            ';' => {
                out.push(Tok::Semi);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            ':' => {
                out.push(Tok::Colon);
                i += 1;
            }
            '=' => {
                out.push(Tok::Eq);
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Tok::EdgeOp("->"));
                i += 2;
            }
            '-' if chars.get(i + 1) == Some(&'-') => {
                out.push(Tok::EdgeOp("--"));
                i += 2;
            }
            '"' => {
                i += 1;
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated string".into()),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') if chars.get(i + 1) == Some(&'"') => {
                            s.push('"');
                            i += 2;
                        }
                        Some('\\') if chars.get(i + 1) == Some(&'\n') => i += 2,
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                out.push(Tok::Id(s));
            }
            c if c == '-' || c == '.' || c.is_ascii_digit() => {
                let start = i;
                if c == '-' {
                    i += 1;
                }
                let mut digits = 0;
                let mut dots = 0;
                while let Some(&ch) = chars.get(i) {
                    if ch.is_ascii_digit() {
                        digits += 1;
                    } else if ch == '.' {
                        dots += 1;
                    } else {
                        break;
                    }
                    i += 1;
                }
                if digits == 0 || dots > 1 {
                    return Err(format!("bad numeral at char {start}"));
                }
                out.push(Tok::Id(chars[start..i].iter().collect()));
            }
            c if is_id_start(c) => {
                let start = i;
                while i < chars.len() && (is_id_start(chars[i]) || chars[i].is_ascii_digit()) {
                    i += 1;
                }
                out.push(Tok::Id(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character {other:?} at char {i}")),
        }
    }
    Ok(out)
}

fn keyword(tok: Option<&Tok>, kw: &str) -> bool {
    matches!(tok, Some(Tok::Id(s)) if s.eq_ignore_ascii_case(kw))
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    summary: Summary,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), String> {
        match self.bump() {
            Some(t) if t == want => Ok(()),
            other => Err(format!(
                "expected {want:?}, found {other:?} at token {}",
                self.pos - 1
            )),
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.bump() {
            Some(Tok::Id(s)) => Ok(s),
            other => Err(format!(
                "expected ID, found {other:?} at token {}",
                self.pos - 1
            )),
        }
    }

    fn graph(&mut self) -> Result<(), String> {
        if keyword(self.peek(), "strict") {
            self.bump();
        }
        if keyword(self.peek(), "digraph") {
            self.summary.directed = true;
        } else if !keyword(self.peek(), "graph") {
            return Err("expected 'graph' or 'digraph'".into());
        }
        self.bump();
        if let Some(Tok::Id(_)) = self.peek() {
            self.bump();
        }
        self.expect(Tok::LBrace)?;
        self.stmt_list()?;
        self.expect(Tok::RBrace)?;
        if self.pos != self.toks.len() {
            return Err("trailing tokens after graph".into());
        }
        Ok(())
    }

    fn stmt_list(&mut self) -> Result<(), String> {
        while !matches!(self.peek(), Some(Tok::RBrace) | None) {
            self.stmt()?;
            if self.peek() == Some(&Tok::Semi) {
                self.bump();
            }
        }
        Ok(())
    }

    fn stmt(&mut self) -> Result<(), String> {
        if keyword(self.peek(), "graph")
            || keyword(self.peek(), "node")
            || keyword(self.peek(), "edge")
        {
            self.bump();
            return self.attr_list(true);
        }
        if self.peek() == Some(&Tok::LBrace) || keyword(self.peek(), "subgraph") {
            self.subgraph()?;
            return self.edge_rhs(None, false);
        }
        let id = self.id()?;
        if self.peek() == Some(&Tok::Eq) {
            self.bump();
            self.id()?;
            return Ok(());
        }
        self.port()?;
        if matches!(self.peek(), Some(Tok::EdgeOp(_))) {
            return self.edge_rhs(Some(id), true);
        }
        self.summary.nodes.push(id);
        self.attr_list(false)
    }

    fn port(&mut self) -> Result<(), String> {
        if self.peek() == Some(&Tok::Colon) {
            self.bump();
            self.id()?;
            if self.peek() == Some(&Tok::Colon) {
                self.bump();
                self.id()?;
            }
        }
        Ok(())
    }

    fn subgraph(&mut self) -> Result<(), String> {
        if keyword(self.peek(), "subgraph") {
            self.bump();
            if let Some(Tok::Id(_)) = self.peek() {
                self.bump();
            }
        }
        self.expect(Tok::LBrace)?;
        self.stmt_list()?;
        self.expect(Tok::RBrace)
    }

    fn edge_rhs(&mut self, mut from: Option<String>, required: bool) -> Result<(), String> {
        if !matches!(self.peek(), Some(Tok::EdgeOp(_))) {
            return if required {
                Err("expected edge operator".into())
            } else {
                Ok(())
            };
        }
        while let Some(Tok::EdgeOp(op)) = self.peek().cloned() {
            let want = if self.summary.directed { "->" } else { "--" };
            if op != want {
                return Err(format!(
                    "edge operator {op} in a {} graph",
                    if self.summary.directed {
                        "directed"
                    } else {
                        "undirected"
                    }
                ));
            }
            self.bump();
            if self.peek() == Some(&Tok::LBrace) || keyword(self.peek(), "subgraph") {
                self.subgraph()?;
                from = None;
            } else {
                let to = self.id()?;
                self.port()?;
                if let Some(f) = from.take() {
                    self.summary.edges.push((f, to.clone()));
                }
                from = Some(to);
            }
        }
        self.attr_list(false)
    }

    fn attr_list(&mut self, required: bool) -> Result<(), String> {
        if self.peek() != Some(&Tok::LBracket) {
            return if required {
                Err("expected attribute list".into())
            } else {
                Ok(())
            };
        }
        while self.peek() == Some(&Tok::LBracket) {
            self.bump();
            while self.peek() != Some(&Tok::RBracket) {
                self.id()?;
                self.expect(Tok::Eq)?;
                self.id()?;
                if matches!(self.peek(), Some(Tok::Semi) | Some(Tok::Comma)) {
                    self.bump();
                }
            }
            self.expect(Tok::RBracket)?;
        }
        Ok(())
    }
}

/// Parses `text` as a DOT graph.
pub fn check(text: &str) -> Result<Summary, String> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        summary: Summary::default(),
    };
    p.graph()?;
    Ok(p.summary)
}
