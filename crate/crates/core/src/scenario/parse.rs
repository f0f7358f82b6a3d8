//! Lexer and line-oriented recursive-descent parser for scenario files.
//!
//! ```text
//! stmt      := "space" ID "=" spaceExpr | "map" ID "=" mapExpr | "check" checkExpr
//! spaceExpr := ID | builder "(" ints ")" | "product" "(" ID "," ID ")"
//!            | "dsum" "(" ID "," ID ")" | "scramble" "(" ID ["," INT] ")"
//!            | "vertices" matrix "unit" vector
//! mapExpr   := matrix | "identity" "(" ID ")" | "swap" "(" ID ")" | "cnot" "(" ")"
//!            | "product" "(" ID "," ID ")" | "ctrl" "(" ID "," ID "," idList ")"
//!            | "element" "(" ID "," INT ")"
//! checkExpr := kind args ["expect" (INT | "true" | "false" | WORD)]
//! ```
//!
//! Identifiers must be defined before use and only once. `#` starts a
//! comment.

use std::collections::HashMap;
use std::fmt::{self, Display, Formatter};

use crate::geometry::field::parse_rational;

use super::ast::{Check, CheckExpr, Expect, Location, MapExpr, ScenarioAst, SpaceExpr, Statement, Stmt};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical(String),
    Syntax { found: String, expected: Vec<String> },
    UnknownBuilder(String),
    UnknownCheck(String),
    Arity { name: String, expected: usize, found: usize },
    Duplicate(String),
    Undefined(String),
    WrongKind { name: String, expected: &'static str },
    BadExpect { kind: &'static str, found: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub loc: Location,
    pub kind: ParseErrorKind,
}

impl ParseError {
    /// Tokens that would have been accepted at the error position.
    pub fn expected(&self) -> &[String] {
        match &self.kind {
            ParseErrorKind::Syntax { expected, .. } => expected,
            _ => &[],
        }
    }
}

impl Display for ParseError {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Lexical(m) => write!(f, "{m}")?,
            ParseErrorKind::Syntax { found, expected } => {
                write!(f, "unexpected {found}, expected ")?;
                if expected.len() > 1 {
                    write!(f, "one of ")?;
                }
                write!(f, "{}", expected.join(", "))?;
            }
            ParseErrorKind::UnknownBuilder(n) => write!(f, "unknown builder '{n}'")?,
            ParseErrorKind::UnknownCheck(n) => write!(f, "unknown check '{n}'")?,
            ParseErrorKind::Arity { name, expected, found } => {
                write!(f, "'{name}' takes {expected} argument(s), found {found}")?
            }
            ParseErrorKind::Duplicate(n) => write!(f, "duplicate definition of '{n}'")?,
            ParseErrorKind::Undefined(n) => write!(f, "undefined identifier '{n}'")?,
            ParseErrorKind::WrongKind { name, expected } => write!(f, "'{name}' is not a {expected}")?,
            ParseErrorKind::BadExpect { kind, found } => write!(f, "check {kind} cannot expect '{found}'")?,
        }
        write!(f, " at {}", self.loc)
    }
}

impl std::error::Error for ParseError {}

/// Builders and their argument counts.
pub const BUILDERS: &[(&str, usize)] =
    &[("simplex", 1), ("point", 0), ("gbit", 0), ("cube", 1), ("cross", 1), ("house", 0), ("polygon", 1)];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Punct(char),
    Newline,
    Eof,
}

impl Display for Tok {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Number(s) => write!(f, "number {s}"),
            Tok::Punct(c) => write!(f, "'{c}'"),
            Tok::Newline => write!(f, "end of line"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    loc: Location,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    for (l, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let loc = Location { line: l + 1, col: i + 1 };
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), loc });
            } else if c.is_ascii_digit() || c == '-' {
                let start = i;
                i += 1;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/' || chars[i] == '.') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                if parse_rational(&s).is_err() {
                    return Err(ParseError { loc, kind: ParseErrorKind::Lexical(format!("invalid number '{s}'")) });
                }
                out.push(Token { tok: Tok::Number(s), loc });
            } else if "()[],=".contains(c) {
                out.push(Token { tok: Tok::Punct(c), loc });
                i += 1;
            } else {
                return Err(ParseError { loc, kind: ParseErrorKind::Lexical(format!("unexpected character '{c}'")) });
            }
        }
        out.push(Token { tok: Tok::Newline, loc: Location { line: l + 1, col: chars.len() + 1 } });
    }
    let line = text.lines().count();
    out.push(Token { tok: Tok::Eof, loc: Location { line: line + 1, col: 1 } });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Space,
    Map,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    defined: HashMap<String, Kind>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = self.peek();
        Err(ParseError {
            loc: t.loc,
            kind: ParseErrorKind::Syntax {
                found: t.tok.to_string(),
                expected: expected.iter().map(|s| s.to_string()).collect(),
            },
        })
    }

    fn punct(&mut self, c: char) -> PResult<()> {
        if self.peek().tok == Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            self.syntax(&[&format!("'{c}'")])
        }
    }

    fn at_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn keyword(&mut self, k: &str) -> PResult<()> {
        if matches!(&self.peek().tok, Tok::Ident(s) if s == k) {
            self.bump();
            Ok(())
        } else {
            self.syntax(&[&format!("'{k}'")])
        }
    }

    fn ident(&mut self) -> PResult<(String, Location)> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => {
                let loc = self.bump().loc;
                Ok((s, loc))
            }
            _ => self.syntax(&["identifier"]),
        }
    }

    fn int(&mut self) -> PResult<u64> {
        if let Tok::Number(s) = &self.peek().tok {
            if let Ok(n) = s.parse::<u64>() {
                self.bump();
                return Ok(n);
            }
        }
        self.syntax(&["non-negative integer"])
    }

    fn number(&mut self) -> PResult<String> {
        match self.peek().tok.clone() {
            Tok::Number(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.syntax(&["number"]),
        }
    }

    fn use_name(&mut self, want: Kind) -> PResult<String> {
        let (name, loc) = self.ident()?;
        match self.defined.get(&name) {
            None => Err(ParseError { loc, kind: ParseErrorKind::Undefined(name) }),
            Some(&k) if k != want => Err(ParseError {
                loc,
                kind: ParseErrorKind::WrongKind {
                    name,
                    expected: if want == Kind::Space { "space" } else { "map" },
                },
            }),
            Some(_) => Ok(name),
        }
    }

    fn vector(&mut self) -> PResult<Vec<String>> {
        self.punct('[')?;
        let mut out = vec![self.number()?];
        while self.at_punct(',') {
            self.bump();
            out.push(self.number()?);
        }
        self.punct(']')?;
        Ok(out)
    }

    fn matrix(&mut self) -> PResult<Vec<Vec<String>>> {
        self.punct('[')?;
        let mut rows = vec![self.vector()?];
        while self.at_punct(',') {
            self.bump();
            rows.push(self.vector()?);
        }
        self.punct(']')?;
        Ok(rows)
    }

    fn pair(&mut self, want: Kind) -> PResult<(String, String)> {
        self.punct('(')?;
        let a = self.use_name(want)?;
        self.punct(',')?;
        let b = self.use_name(want)?;
        self.punct(')')?;
        Ok((a, b))
    }

    fn space_expr(&mut self) -> PResult<SpaceExpr> {
        let (name, loc) = self.ident()?;
        if !self.at_punct('(') && name != "vertices" {
            self.pos -= 1;
            return Ok(SpaceExpr::Ref(self.use_name(Kind::Space)?));
        }
        match name.as_str() {
            "product" => {
                let (a, b) = self.pair(Kind::Space)?;
                Ok(SpaceExpr::Product(a, b))
            }
            "dsum" => {
                let (a, b) = self.pair(Kind::Space)?;
                Ok(SpaceExpr::Dsum(a, b))
            }
            "scramble" => {
                self.punct('(')?;
                let space = self.use_name(Kind::Space)?;
                let seed = if self.at_punct(',') {
                    self.bump();
                    Some(self.int()?)
                } else {
                    None
                };
                self.punct(')')?;
                Ok(SpaceExpr::Scramble { space, seed })
            }
            "vertices" => {
                let rows = self.matrix()?;
                self.keyword("unit")?;
                let unit = self.vector()?;
                Ok(SpaceExpr::Vertices { rows, unit })
            }
            _ => {
                let Some(&(_, arity)) = BUILDERS.iter().find(|(b, _)| *b == name) else {
                    return Err(ParseError { loc, kind: ParseErrorKind::UnknownBuilder(name) });
                };
                self.punct('(')?;
                let mut args = Vec::new();
                if !self.at_punct(')') {
                    args.push(self.int()?);
                    while self.at_punct(',') {
                        self.bump();
                        args.push(self.int()?);
                    }
                }
                self.punct(')')?;
                if args.len() != arity {
                    return Err(ParseError { loc, kind: ParseErrorKind::Arity { name, expected: arity, found: args.len() } });
                }
                Ok(SpaceExpr::Builder { name, args })
            }
        }
    }

    fn map_expr(&mut self) -> PResult<MapExpr> {
        if self.at_punct('[') {
            return Ok(MapExpr::Matrix(self.matrix()?));
        }
        let expected = ["matrix", "'identity'", "'swap'", "'cnot'", "'product'", "'ctrl'", "'element'"];
        let name = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            _ => return self.syntax(&expected),
        };
        match name.as_str() {
            "identity" | "swap" => {
                self.bump();
                self.punct('(')?;
                let s = self.use_name(Kind::Space)?;
                self.punct(')')?;
                Ok(if name == "identity" { MapExpr::Identity(s) } else { MapExpr::Swap(s) })
            }
            "cnot" => {
                self.bump();
                self.punct('(')?;
                self.punct(')')?;
                Ok(MapExpr::Cnot)
            }
            "product" => {
                self.bump();
                let (x, y) = self.pair(Kind::Map)?;
                Ok(MapExpr::Product(x, y))
            }
            "ctrl" => {
                self.bump();
                self.punct('(')?;
                let control = self.use_name(Kind::Space)?;
                self.punct(',')?;
                let target = self.use_name(Kind::Space)?;
                self.punct(',')?;
                self.punct('[')?;
                let mut maps = vec![self.use_name(Kind::Map)?];
                while self.at_punct(',') {
                    self.bump();
                    maps.push(self.use_name(Kind::Map)?);
                }
                self.punct(']')?;
                self.punct(')')?;
                Ok(MapExpr::Ctrl { control, target, maps })
            }
            "element" => {
                self.bump();
                self.punct('(')?;
                let space = self.use_name(Kind::Space)?;
                self.punct(',')?;
                let index = self.int()?;
                self.punct(')')?;
                Ok(MapExpr::Element { space, index })
            }
            _ => self.syntax(&expected),
        }
    }

    fn check(&mut self) -> PResult<Check> {
        let (kind, loc) = self.ident()?;
        let expr = match kind.as_str() {
            "decompose" => CheckExpr::Decompose(self.space_expr()?),
            "transitive" => CheckExpr::Transitive(self.space_expr()?),
            "group" => CheckExpr::Group(self.space_expr()?),
            "theorem1" => CheckExpr::Theorem1(self.space_expr()?),
            "theorem2" => {
                self.keyword("on")?;
                CheckExpr::Theorem2(self.space_expr()?)
            }
            "lri" | "theorem3" | "broadcaster" => {
                let map = self.use_name(Kind::Map)?;
                self.keyword("on")?;
                let on = self.space_expr()?;
                match kind.as_str() {
                    "lri" => CheckExpr::Lri { map, on },
                    "theorem3" => CheckExpr::Theorem3 { map, on },
                    _ => {
                        self.keyword("at")?;
                        CheckExpr::Broadcaster { map, on, at: self.int()? }
                    }
                }
            }
            "distributivity" => {
                let a = self.use_name(Kind::Space)?;
                let b = self.use_name(Kind::Space)?;
                let c = self.use_name(Kind::Space)?;
                CheckExpr::Distributivity(a, b, c)
            }
            "entangled" => {
                let on = self.space_expr()?;
                CheckExpr::Entangled { on, state: self.vector()? }
            }
            _ => return Err(ParseError { loc, kind: ParseErrorKind::UnknownCheck(kind) }),
        };
        let expect = if matches!(&self.peek().tok, Tok::Ident(s) if s == "expect") {
            self.bump();
            let loc = self.peek().loc;
            let e = match self.bump().tok {
                Tok::Number(s) => match s.parse::<u64>() {
                    Ok(n) => Expect::Int(n),
                    Err(_) => {
                        return Err(ParseError { loc, kind: ParseErrorKind::BadExpect { kind: expr.kind(), found: s } })
                    }
                },
                Tok::Ident(s) if s == "true" => Expect::Bool(true),
                Tok::Ident(s) if s == "false" => Expect::Bool(false),
                Tok::Ident(s) => Expect::Word(s),
                _ => {
                    self.pos -= 1;
                    return self.syntax(&["integer", "'true'", "'false'", "word"]);
                }
            };
            if !expect_allowed(&expr, &e) {
                return Err(ParseError { loc, kind: ParseErrorKind::BadExpect { kind: expr.kind(), found: e.to_string() } });
            }
            Some(e)
        } else {
            None
        };
        Ok(Check { expr, expect })
    }

    /// Reads `ID =`; the name becomes visible once its expression is parsed.
    fn define(&mut self) -> PResult<String> {
        let (name, loc) = self.ident()?;
        if self.defined.contains_key(&name) {
            return Err(ParseError { loc, kind: ParseErrorKind::Duplicate(name) });
        }
        self.punct('=')?;
        Ok(name)
    }

    fn statement(&mut self) -> PResult<Option<Statement>> {
        while self.peek().tok == Tok::Newline {
            self.bump();
        }
        let loc = self.peek().loc;
        let node = match self.peek().tok.clone() {
            Tok::Eof => return Ok(None),
            Tok::Ident(k) if k == "space" => {
                self.bump();
                let name = self.define()?;
                let expr = self.space_expr()?;
                self.defined.insert(name.clone(), Kind::Space);
                Stmt::Space { name, expr }
            }
            Tok::Ident(k) if k == "map" => {
                self.bump();
                let name = self.define()?;
                let expr = self.map_expr()?;
                self.defined.insert(name.clone(), Kind::Map);
                Stmt::Map { name, expr }
            }
            Tok::Ident(k) if k == "check" => {
                self.bump();
                Stmt::Check(self.check()?)
            }
            _ => return self.syntax(&["'space'", "'map'", "'check'"]),
        };
        if !matches!(self.peek().tok, Tok::Newline | Tok::Eof) {
            return self.syntax(&["end of line"]);
        }
        Ok(Some(Statement { loc, node }))
    }
}

/// Which `expect` values each check kind understands.
fn expect_allowed(expr: &CheckExpr, e: &Expect) -> bool {
    let word = |ws: &[&str]| matches!(e, Expect::Word(w) if ws.contains(&w.as_str()));
    match expr {
        CheckExpr::Decompose(_) | CheckExpr::Group(_) => matches!(e, Expect::Int(_)),
        CheckExpr::Transitive(_) | CheckExpr::Distributivity(..) | CheckExpr::Entangled { .. } => {
            matches!(e, Expect::Bool(_))
        }
        CheckExpr::Theorem1(_) => matches!(e, Expect::Int(_)) || word(&["none"]),
        CheckExpr::Theorem2(_) => matches!(e, Expect::Int(_)) || word(&["inapplicable"]),
        CheckExpr::Lri { .. } => word(&["witness", "none", "trivial", "nontrivial"]),
        CheckExpr::Broadcaster { .. } => word(&["decomposes", "trivial"]),
        CheckExpr::Theorem3 { .. } => word(&["preserving", "permuting", "none"]),
    }
}

pub fn parse(text: &str) -> Result<ScenarioAst, ParseError> {
    let mut p = Parser { tokens: lex(text)?, pos: 0, defined: HashMap::new() };
    let mut statements = Vec::new();
    while let Some(s) = p.statement()? {
        statements.push(s);
    }
    Ok(ScenarioAst { statements })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_builder() {
        let ast = parse("space A = simplex(2)").unwrap();
        assert_eq!(
            ast.nodes(),
            vec![&Stmt::Space { name: "A".into(), expr: SpaceExpr::Builder { name: "simplex".into(), args: vec![2] } }]
        );
        assert_eq!(ast.statements[0].loc, Location { line: 1, col: 1 });
    }

    #[test]
    fn unknown_builder_location() {
        let err = parse("space A = blorp(3)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownBuilder("blorp".into()));
        assert_eq!(err.loc, Location { line: 1, col: 11 });
        assert_eq!(err.to_string(), "unknown builder 'blorp' at 1:11");
    }

    #[test]
    fn name_errors() {
        let err = parse("space A = gbit()\nspace A = point()").unwrap_err();
        assert_eq!((err.kind, err.loc), (ParseErrorKind::Duplicate("A".into()), Location { line: 2, col: 7 }));
        let err = parse("space A = product(B, B)").unwrap_err();
        assert_eq!((err.kind, err.loc), (ParseErrorKind::Undefined("B".into()), Location { line: 1, col: 19 }));
        let err = parse("space A = gbit()\ncheck lri A on A").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::WrongKind { .. }));
        let err = parse("space A = scramble(A)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Undefined("A".into()));
    }

    #[test]
    fn syntax_errors_list_expectations() {
        let err = parse("space A gbit()").unwrap_err();
        assert_eq!(err.loc, Location { line: 1, col: 9 });
        assert_eq!(err.expected(), ["'='"]);
        let err = parse("frobnicate").unwrap_err();
        assert_eq!(err.expected(), ["'space'", "'map'", "'check'"]);
        let err = parse("space A = gbit() extra").unwrap_err();
        assert_eq!(err.expected(), ["end of line"]);
        let err = parse("space A = simplex(1, 2)").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Arity { expected: 1, found: 2, .. }));
    }

    #[test]
    fn lexical_errors() {
        let err = parse("space A = simplex(2) $").unwrap_err();
        assert_eq!(err.loc, Location { line: 1, col: 22 });
        assert!(matches!(err.kind, ParseErrorKind::Lexical(_)));
        let err = parse("map M = [[1/0]]").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Lexical(_)));
    }

    #[test]
    fn checks_and_expectations() {
        let text = "\
# comment line
space G = gbit()   # trailing comment

space GG = product(G, G)
map S = swap(G)
check lri S on GG expect none
check theorem2 on product(G, G) expect 64
check entangled GG [1, 1, 0, 1, -1, 0, 0, 0, 1] expect true
check distributivity G G G
";
        let ast = parse(text).unwrap();
        assert_eq!(ast.statements.len(), 7);
        assert_eq!(ast.statements[3].loc.line, 6);
        let err = parse("space G = gbit()\ncheck group G expect maybe").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::BadExpect { kind: "group", .. }));
        let err = parse("space G = gbit()\ncheck bogus G").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownCheck("bogus".into()));
    }

    #[test]
    fn printer_round_trip() {
        let text = "space D = simplex(1)\nspace G = gbit()\nspace V = vertices [[1, 0], [0, 1]] unit [1, 1]\n\
                    space S = scramble(G, 3)\nspace T = scramble(G)\nspace P = dsum(D, G)\n\
                    map I = identity(D)\nmap R = element(G, 2)\nmap C = ctrl(D, G, [R, R])\n\
                    map M = [[1/2, -3], [0.5, 1]]\nmap X = product(I, I)\nmap N = cnot()\n\
                    check broadcaster N on product(D, D) at 0 expect decomposes\ncheck theorem3 N on product(D, D) expect permuting\n\
                    check theorem1 P expect none\ncheck transitive G expect true\n";
        let ast = parse(text).unwrap();
        let printed = ast.to_string();
        let again = parse(&printed).unwrap();
        assert_eq!(ast.nodes(), again.nodes());
        assert_eq!(printed, again.to_string());
    }
}
