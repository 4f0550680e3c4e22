//! Line-oriented parser for definition files.

use num_bigint::BigInt;
use thiserror::Error;

use super::ast::*;

pub const FORMAT_VERSION: u32 = 1;

/// First error found in a definition file, with its 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("{line}:{col}: parse error: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("{line}:{col}: unresolved reference to {name}")]
    UnresolvedReference { line: usize, col: usize, name: String },
    #[error("{line}:{col}: format version {found} is not supported (expected {expected})")]
    VersionMismatch { line: usize, col: usize, found: u32, expected: u32 },
    #[error("{line}:{col}: {message}")]
    Invalid { line: usize, col: usize, message: String },
}

impl DocError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            DocError::Parse { line, col, .. }
            | DocError::UnresolvedReference { line, col, .. }
            | DocError::VersionMismatch { line, col, .. }
            | DocError::Invalid { line, col, .. } => (*line, *col),
        }
    }

    pub(crate) fn invalid(span: Span, message: impl Into<String>) -> Self {
        DocError::Invalid { line: span.line, col: span.col, message: message.into() }
    }

    pub(crate) fn unresolved(name: &Name) -> Self {
        DocError::UnresolvedReference { line: name.span.line, col: name.span.col, name: name.text.clone() }
    }
}

fn parse_error(span: Span, message: impl Into<String>) -> DocError {
    DocError::Parse { line: span.line, col: span.col, message: message.into() }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Arrow,
    Sym(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Int(n) => format!("'{n}'"),
            Tok::Arrow => "'->'".into(),
            Tok::Sym(c) => format!("'{c}'"),
        }
    }
}

struct Line {
    number: usize,
    toks: Vec<(Tok, usize)>,
    /// Column just past the last character.
    end: usize,
}

fn lex_line(number: usize, text: &str) -> Result<Line, DocError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            toks.push((Tok::Int(digits.parse().expect("digits")), col));
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            toks.push((Tok::Arrow, col));
            i += 2;
        } else if "=<[](),+-*/^.".contains(c) {
            toks.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(parse_error(Span { line: number, col }, format!("unexpected character '{c}'")));
        }
    }
    Ok(Line { number, end: chars.len() + 1, toks })
}

struct Cursor<'a> {
    line: &'a Line,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(line: &'a Line) -> Self {
        Cursor { line, pos: 0 }
    }

    fn span(&self) -> Span {
        let col = self.line.toks.get(self.pos).map(|t| t.1).unwrap_or(self.line.end);
        Span { line: self.line.number, col }
    }

    fn peek(&self) -> Option<&Tok> {
        self.line.toks.get(self.pos).map(|t| &t.0)
    }

    fn unexpected(&self, wanted: &str) -> DocError {
        match self.peek() {
            Some(t) => parse_error(self.span(), format!("expected {wanted}, found {}", t.describe())),
            None => parse_error(self.span(), format!("expected {wanted} before end of line")),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sym(&mut self, c: char) -> Result<(), DocError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    fn arrow(&mut self) -> Result<(), DocError> {
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected("'->'"))
        }
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn kw(&mut self, kw: &str) -> Result<(), DocError> {
        if self.at_kw(kw) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{kw}'")))
        }
    }

    fn ident(&mut self) -> Result<Name, DocError> {
        let span = self.span();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let text = s.clone();
                self.pos += 1;
                Ok(Name { text, span })
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn int(&mut self) -> Result<BigInt, DocError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn finish(&self) -> Result<(), DocError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of line")),
        }
    }

    fn expr(&mut self) -> Result<Expr, DocError> {
        let mut lhs = self.term()?;
        loop {
            let span = self.span();
            let build: fn(Box<Expr>, Box<Expr>) -> ExprKind = if self.eat_sym('+') {
                ExprKind::Add
            } else if self.eat_sym('-') {
                ExprKind::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Expr { kind: build(Box::new(lhs), Box::new(rhs)), span };
        }
    }

    fn term(&mut self) -> Result<Expr, DocError> {
        let mut lhs = self.unary()?;
        loop {
            let span = self.span();
            let build: fn(Box<Expr>, Box<Expr>) -> ExprKind = if self.eat_sym('*') {
                ExprKind::Mul
            } else if self.eat_sym('/') {
                ExprKind::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Expr { kind: build(Box::new(lhs), Box::new(rhs)), span };
        }
    }

    fn unary(&mut self) -> Result<Expr, DocError> {
        let span = self.span();
        if self.eat_sym('-') {
            return Ok(Expr { kind: ExprKind::Neg(Box::new(self.unary()?)), span });
        }
        let base = self.atom()?;
        if self.eat_sym('^') {
            let span = self.span();
            let k = self.int()?;
            let k: u32 = k.try_into().map_err(|_| parse_error(span, "exponent too large"))?;
            let span = base.span;
            return Ok(Expr { kind: ExprKind::Pow(Box::new(base), k), span });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, DocError> {
        let span = self.span();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr { kind: ExprKind::Int(n), span })
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                if self.eat_sym('(') {
                    let mut args = Vec::new();
                    if !self.eat_sym(')') {
                        loop {
                            args.push(self.expr()?);
                            if self.eat_sym(')') {
                                break;
                            }
                            self.sym(',')?;
                        }
                    }
                    return Ok(Expr { kind: ExprKind::Call(s, args), span });
                }
                Ok(Expr { kind: ExprKind::Var(s), span })
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.sym(')')?;
                Ok(e)
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    /// `[e, e, ...]`, possibly empty.
    fn list(&mut self) -> Result<Vec<Expr>, DocError> {
        self.sym('[')?;
        let mut out = Vec::new();
        if self.eat_sym(']') {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if self.eat_sym(']') {
                return Ok(out);
            }
            self.sym(',')?;
        }
    }

    fn matrix(&mut self) -> Result<Vec<Vec<Expr>>, DocError> {
        self.sym('[')?;
        let mut rows = Vec::new();
        if self.eat_sym(']') {
            return Ok(rows);
        }
        loop {
            rows.push(self.list()?);
            if self.eat_sym(']') {
                return Ok(rows);
            }
            self.sym(',')?;
        }
    }

    fn algebra(&mut self) -> Result<AlgebraLit, DocError> {
        let span = self.span();
        self.kw("algebra")?;
        let mult = self.matrix()?;
        self.kw("unit")?;
        let unit = self.list()?;
        Ok(AlgebraLit { mult, unit, span })
    }

    fn names_until_end(&mut self) -> Result<Vec<Name>, DocError> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn expect_clause(&mut self) -> Result<Vec<Name>, DocError> {
        if !self.at_kw("expect") {
            return Ok(Vec::new());
        }
        self.pos += 1;
        let mut out = vec![self.ident()?];
        while self.eat_sym(',') {
            out.push(self.ident()?);
        }
        Ok(out)
    }
}

fn ring_def(c: &mut Cursor) -> Result<RingDef, DocError> {
    if c.at_kw("algebra") {
        return Ok(RingDef::Algebra(c.algebra()?));
    }
    let kind = c.ident()?;
    let def = match kind.text.as_str() {
        "rationals" => RingDef::Rationals,
        "zero" => RingDef::Zero,
        "poly" => RingDef::Poly(c.ident()?.text),
        "fraction" => RingDef::Fraction(c.ident()?.text),
        "quotient" => {
            let v = c.ident()?.text;
            c.kw("by")?;
            RingDef::Quotient(v, c.expr()?)
        }
        "localize" => {
            let v = c.ident()?.text;
            c.kw("at")?;
            RingDef::Localize(v, c.expr()?)
        }
        "product" => RingDef::Product(c.names_until_end()?),
        other => return Err(parse_error(kind.span, format!("unknown ring constructor '{other}'"))),
    };
    Ok(def)
}

fn monoid_def(c: &mut Cursor) -> Result<MonoidDef, DocError> {
    if c.at_kw("algebra") {
        return Ok(MonoidDef::Algebra(c.algebra()?));
    }
    let kind = c.ident()?;
    match kind.text.as_str() {
        "ring" => Ok(MonoidDef::Ring(c.ident()?)),
        "presheaf" => Ok(MonoidDef::Presheaf(c.ident()?)),
        other => Err(parse_error(kind.span, format!("unknown monoid constructor '{other}'"))),
    }
}

fn poset_decl(c: &mut Cursor, name: Name) -> Result<Decl, DocError> {
    let mut elements = Vec::new();
    while c.peek().is_some() && !c.at_kw("where") {
        elements.push(c.ident()?);
    }
    let mut relations = Vec::new();
    if c.at_kw("where") {
        c.pos += 1;
        loop {
            let a = c.ident()?;
            c.sym('<')?;
            relations.push((a, c.ident()?));
            if !c.eat_sym(',') {
                break;
            }
        }
    }
    Ok(Decl::Poset { name, elements, relations })
}

/// Block bodies up to the matching `end`.
fn block<'a>(lines: &'a [Line], i: &mut usize, header: &Line, what: &str) -> Result<Vec<&'a Line>, DocError> {
    let mut body = Vec::new();
    loop {
        *i += 1;
        let Some(line) = lines.get(*i) else {
            return Err(parse_error(
                Span { line: header.number, col: 1 },
                format!("{what} block is not closed by 'end'"),
            ));
        };
        let c = Cursor::new(line);
        if c.at_kw("end") {
            let mut c = c;
            c.pos += 1;
            c.finish()?;
            return Ok(body);
        }
        body.push(line);
    }
}

fn presheaf_decl(c: &mut Cursor, name: Name, body: &[&Line]) -> Result<Decl, DocError> {
    c.kw("on")?;
    let poset = c.ident()?;
    c.finish()?;
    let mut at = Vec::new();
    let mut restrict = Vec::new();
    for line in body {
        let mut c = Cursor::new(line);
        if c.at_kw("at") {
            c.pos += 1;
            let p = c.ident()?;
            c.sym('=')?;
            at.push((p, c.ident()?));
        } else if c.at_kw("restrict") {
            c.pos += 1;
            let from = c.ident()?;
            c.arrow()?;
            let to = c.ident()?;
            c.kw("map")?;
            restrict.push(Restriction { from, to, images: c.list()? });
        } else {
            return Err(c.unexpected("'at', 'restrict' or 'end'"));
        }
        c.finish()?;
    }
    Ok(Decl::Presheaf { name, poset, at, restrict })
}

fn diagram_decl(c: &mut Cursor, name: Name, body: &[&Line]) -> Result<Decl, DocError> {
    let expect = c.expect_clause()?;
    c.finish()?;
    let (mut charts, mut edges, mut meets) = (Vec::new(), Vec::new(), Vec::new());
    for line in body {
        let mut c = Cursor::new(line);
        if c.at_kw("chart") {
            c.pos += 1;
            let ch = c.ident()?;
            c.sym('=')?;
            charts.push((ch, c.ident()?));
        } else if c.at_kw("edge") {
            c.pos += 1;
            let from = c.ident()?;
            c.arrow()?;
            let to = c.ident()?;
            c.kw("tags")?;
            let tags = c.list()?;
            c.kw("map")?;
            edges.push(EdgeDecl { from, to, tags, images: c.list()? });
        } else if c.at_kw("meet") {
            c.pos += 1;
            let left = c.ident()?;
            let right = c.ident()?;
            c.sym('=')?;
            meets.push(Meet { left, right, chart: c.ident()? });
        } else {
            return Err(c.unexpected("'chart', 'edge', 'meet' or 'end'"));
        }
        c.finish()?;
    }
    Ok(Decl::Diagram { name, charts, edges, meets, expect })
}

fn ratmap_decl(c: &mut Cursor, name: Name) -> Result<Decl, DocError> {
    let source = c.ident()?;
    c.sym('.')?;
    let source_chart = c.ident()?;
    c.kw("at")?;
    let denom = c.expr()?;
    c.arrow()?;
    let target = c.ident()?;
    c.sym('.')?;
    let target_chart = c.ident()?;
    c.kw("map")?;
    let images = c.list()?;
    let expect = c.expect_clause()?;
    Ok(Decl::RatMap { name, source, source_chart, denom, target, target_chart, images, expect })
}

/// A single expression, e.g. a polynomial literal.
pub fn parse_expr(text: &str) -> Result<Expr, DocError> {
    if text.contains('\n') {
        return Err(parse_error(Span { line: 1, col: text.find('\n').unwrap() + 1 }, "an expression fits on one line"));
    }
    let line = lex_line(1, text)?;
    let mut c = Cursor::new(&line);
    let e = c.expr()?;
    c.finish()?;
    Ok(e)
}

/// Syntax only; names are resolved separately.
pub fn parse_document(text: &str) -> Result<Document, DocError> {
    let lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| lex_line(i + 1, l))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|l| !l.toks.is_empty())
        .collect::<Vec<_>>();
    let mut doc = Document::default();
    let mut i = 0;
    while i < lines.len() {
        let line = &lines[i];
        let mut c = Cursor::new(line);
        let span = c.span();
        let kw = c.ident()?;
        if kw.text == "version" {
            if doc.version.is_some() || !doc.items.is_empty() {
                return Err(parse_error(span, "'version' must be the first declaration"));
            }
            let vspan = c.span();
            let v = c.int()?;
            c.finish()?;
            let found: u32 = v.try_into().unwrap_or(u32::MAX);
            if found != FORMAT_VERSION {
                return Err(DocError::VersionMismatch { line: vspan.line, col: vspan.col, found, expected: FORMAT_VERSION });
            }
            doc.version = Some(found);
            i += 1;
            continue;
        }
        let name = c.ident()?;
        let decl = match kw.text.as_str() {
            "ring" => {
                c.sym('=')?;
                Decl::Ring { name, def: ring_def(&mut c)? }
            }
            "poset" => {
                c.sym('=')?;
                poset_decl(&mut c, name)?
            }
            "monoid" => {
                c.sym('=')?;
                let def = monoid_def(&mut c)?;
                Decl::Monoid { name, def, expect: c.expect_clause()? }
            }
            "presheaf" => {
                let body = block(&lines, &mut i, line, "presheaf")?;
                presheaf_decl(&mut c, name, &body)?
            }
            "diagram" => {
                let body = block(&lines, &mut i, line, "diagram")?;
                diagram_decl(&mut c, name, &body)?
            }
            "ratmap" => {
                c.sym('=')?;
                ratmap_decl(&mut c, name)?
            }
            "kmap" => {
                c.sym('=')?;
                let source = c.ident()?;
                c.arrow()?;
                let target = c.ident()?;
                c.kw("map")?;
                Decl::KMap { name, source, target, images: c.list()? }
            }
            other => return Err(parse_error(kw.span, format!("unknown declaration '{other}'"))),
        };
        c.finish()?;
        doc.items.push(Item { decl, span });
        i += 1;
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expressions_print_back() {
        let doc = parse_document("ring R = quotient x by -x^2 + 3*(x - 1)/(2 - x) - (1 - x)\n").unwrap();
        let text = doc.to_text();
        assert_eq!(text, "ring R = quotient x by -x^2 + 3*(x - 1)/(2 - x) - (1 - x)\n");
        assert_eq!(parse_document(&text).unwrap(), doc);
    }

    #[test]
    fn positions() {
        let err = parse_document("version 1\nring R = poly x\nring S = bogus\n").unwrap_err();
        assert_eq!(err.position(), (3, 10));
        let err = parse_document("ring R = poly\n").unwrap_err();
        assert_eq!(err.position(), (1, 14));
        let err = parse_document("version 2\n").unwrap_err();
        assert!(matches!(err, DocError::VersionMismatch { found: 2, .. }));
    }

    #[test]
    fn blocks_need_end() {
        assert!(parse_document("diagram D\n  chart A = R\n").is_err());
        let d = parse_document("diagram D expect reducible\n  chart A = R\nend\n").unwrap();
        assert_eq!(parse_document(&d.to_text()).unwrap(), d);
    }
}
