//! Lexer and recursive-descent parser for the expression syntax.

use super::{NodeExpr, PathExpr};
use crate::datagraph::{DataValue, EdgeLabel};
use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A syntax error with its 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnknownEscape(char),
    UnterminatedString,
    NumberOverflow,
    /// `{n,m}` with n > m.
    InvalidRepeat(u32, u32),
    /// `^-` applied to something other than a single label.
    InverseOnNonLabel,
    UnexpectedToken {
        found: String,
        expected: &'static str,
    },
    UnexpectedEnd {
        expected: &'static str,
    },
    TrailingInput,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.col)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnknownEscape(c) => write!(f, "unknown escape \\{c}"),
            ParseErrorKind::UnterminatedString => f.write_str("unterminated string literal"),
            ParseErrorKind::NumberOverflow => f.write_str("repetition bound is too large"),
            ParseErrorKind::InvalidRepeat(n, m) => {
                write!(f, "invalid repetition bounds {{{n},{m}}}: lower exceeds upper")
            }
            ParseErrorKind::InverseOnNonLabel => {
                f.write_str("^- applies only to a single edge label")
            }
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
            ParseErrorKind::TrailingInput => f.write_str("trailing input after expression"),
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    Num(u32),
    Underscore,
    Dot,
    Plus,
    Amp,
    Star,
    Bang,
    BangEq,
    Eq,
    FatArrow,
    CaretMinus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    LBrace,
    RBrace,
    Comma,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Num(n) => format!("number {n}"),
            Tok::Underscore => "`_`".to_owned(),
            Tok::Dot => "`.`".to_owned(),
            Tok::Plus => "`+`".to_owned(),
            Tok::Amp => "`&`".to_owned(),
            Tok::Star => "`*`".to_owned(),
            Tok::Bang => "`!`".to_owned(),
            Tok::BangEq => "`!=`".to_owned(),
            Tok::Eq => "`=`".to_owned(),
            Tok::FatArrow => "`=>`".to_owned(),
            Tok::CaretMinus => "`^-`".to_owned(),
            Tok::LParen => "`(`".to_owned(),
            Tok::RParen => "`)`".to_owned(),
            Tok::LBracket => "`[`".to_owned(),
            Tok::RBracket => "`]`".to_owned(),
            Tok::LAngle => "`<`".to_owned(),
            Tok::RAngle => "`>`".to_owned(),
            Tok::LBrace => "`{`".to_owned(),
            Tok::RBrace => "`}`".to_owned(),
            Tok::Comma => "`,`".to_owned(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: u32,
    col: u32,
}

struct Lexer<'a> {
    chars: core::iter::Peekable<core::str::Chars<'a>>,
    line: u32,
    col: u32,
}

pub(super) fn is_ident_start_char(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(super) fn is_ident_continue_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, kind: ParseErrorKind, line: u32, col: u32) -> ParseError {
        ParseError { line, col, kind }
    }

    fn lex(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        loop {
            while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
                self.bump();
            }
            let (line, col) = (self.line, self.col);
            let Some(c) = self.bump() else { break };
            let tok = match c {
                '.' => Tok::Dot,
                '+' => Tok::Plus,
                '&' => Tok::Amp,
                '*' => Tok::Star,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '<' => Tok::LAngle,
                '>' => Tok::RAngle,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                '!' => {
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        Tok::BangEq
                    } else {
                        Tok::Bang
                    }
                }
                '=' => {
                    if self.chars.peek() == Some(&'>') {
                        self.bump();
                        Tok::FatArrow
                    } else {
                        Tok::Eq
                    }
                }
                '^' => {
                    if self.chars.peek() == Some(&'-') {
                        self.bump();
                        Tok::CaretMinus
                    } else {
                        return Err(self.err(ParseErrorKind::UnexpectedChar('^'), line, col));
                    }
                }
                '"' => {
                    let mut s = String::new();
                    loop {
                        let (eline, ecol) = (self.line, self.col);
                        match self.bump() {
                            None => {
                                return Err(self.err(
                                    ParseErrorKind::UnterminatedString,
                                    line,
                                    col,
                                ))
                            }
                            Some('"') => break,
                            Some('\\') => match self.bump() {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some('n') => s.push('\n'),
                                Some('t') => s.push('\t'),
                                Some(other) => {
                                    return Err(self.err(
                                        ParseErrorKind::UnknownEscape(other),
                                        eline,
                                        ecol,
                                    ))
                                }
                                None => {
                                    return Err(self.err(
                                        ParseErrorKind::UnterminatedString,
                                        line,
                                        col,
                                    ))
                                }
                            },
                            Some(other) => s.push(other),
                        }
                    }
                    Tok::Str(s)
                }
                c if c.is_ascii_digit() => {
                    let mut n: u32 = c.to_digit(10).unwrap();
                    while matches!(self.chars.peek(), Some(d) if d.is_ascii_digit()) {
                        let d = self.bump().unwrap().to_digit(10).unwrap();
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(d))
                            .ok_or(ParseError {
                                line,
                                col,
                                kind: ParseErrorKind::NumberOverflow,
                            })?;
                    }
                    Tok::Num(n)
                }
                c if is_ident_start_char(c) => {
                    let mut s = String::new();
                    s.push(c);
                    while matches!(self.chars.peek(), Some(&c) if is_ident_continue_char(c)) {
                        s.push(self.bump().unwrap());
                    }
                    if s == "_" {
                        Tok::Underscore
                    } else {
                        Tok::Ident(s)
                    }
                }
                other => return Err(self.err(ParseErrorKind::UnexpectedChar(other), line, col)),
            };
            out.push(Spanned { tok, line, col });
        }
        Ok(out)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end_line: u32,
    end_col: u32,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        let lexer = Lexer::new(text);
        let end_line = text.lines().count().max(1) as u32;
        let end_col = text.lines().last().map_or(1, |l| l.chars().count() + 1) as u32;
        Ok(Parser {
            toks: lexer.lex()?,
            pos: 0,
            end_line,
            end_col,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (u32, u32) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn error(&self, expected: &'static str) -> ParseError {
        let (line, col) = self.here();
        let kind = match self.toks.get(self.pos) {
            Some(s) => ParseErrorKind::UnexpectedToken {
                found: s.tok.describe(),
                expected,
            },
            None => ParseErrorKind::UnexpectedEnd { expected },
        };
        ParseError { line, col, kind }
    }

    fn eat(&mut self, tok: &Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    // ----- path expressions -----

    /// Full path level: unions plus right-associative implication sugar.
    fn path(&mut self) -> Result<PathExpr, ParseError> {
        let lhs = self.path_union()?;
        if self.peek() == Some(&Tok::FatArrow) {
            self.pos += 1;
            let rhs = self.path()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn path_union(&mut self) -> Result<PathExpr, ParseError> {
        let mut e = self.path_intersect()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            e = e.union(self.path_intersect()?);
        }
        Ok(e)
    }

    fn path_intersect(&mut self) -> Result<PathExpr, ParseError> {
        let mut e = self.path_concat()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            e = e.intersect(self.path_concat()?);
        }
        Ok(e)
    }

    fn path_concat(&mut self) -> Result<PathExpr, ParseError> {
        let mut e = self.path_prefix()?;
        while self.peek() == Some(&Tok::Dot) {
            self.pos += 1;
            e = e.concat(self.path_prefix()?);
        }
        Ok(e)
    }

    fn path_prefix(&mut self) -> Result<PathExpr, ParseError> {
        if self.peek() == Some(&Tok::Bang) {
            self.pos += 1;
            Ok(self.path_prefix()?.complement())
        } else {
            self.path_postfix()
        }
    }

    fn path_postfix(&mut self) -> Result<PathExpr, ParseError> {
        let mut e = self.path_atom()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    e = e.star();
                }
                Some(Tok::CaretMinus) => {
                    let (line, col) = self.here();
                    self.pos += 1;
                    match e {
                        PathExpr::Label(l) => e = PathExpr::Inverse(l),
                        _ => {
                            return Err(ParseError {
                                line,
                                col,
                                kind: ParseErrorKind::InverseOnNonLabel,
                            })
                        }
                    }
                }
                Some(Tok::LBrace) => {
                    let (line, col) = self.here();
                    self.pos += 1;
                    let n = self.number()?;
                    self.eat(&Tok::Comma, "`,` between repetition bounds")?;
                    let m = self.number()?;
                    self.eat(&Tok::RBrace, "`}` after repetition bounds")?;
                    if n > m {
                        return Err(ParseError {
                            line,
                            col,
                            kind: ParseErrorKind::InvalidRepeat(n, m),
                        });
                    }
                    e = e.repeat(n, m);
                }
                _ => break,
            }
        }
        Ok(e)
    }

    fn number(&mut self) -> Result<u32, ParseError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("a repetition bound")),
        }
    }

    fn path_atom(&mut self) -> Result<PathExpr, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "eps" => {
                self.pos += 1;
                Ok(PathExpr::Epsilon)
            }
            Some(Tok::Underscore) => {
                self.pos += 1;
                Ok(PathExpr::Wildcard)
            }
            Some(Tok::Ident(_)) | Some(Tok::Str(_)) => {
                let Some(Spanned { tok, .. }) = self.bump() else {
                    unreachable!()
                };
                let name = match tok {
                    Tok::Ident(s) | Tok::Str(s) => s,
                    _ => unreachable!(),
                };
                Ok(PathExpr::Label(EdgeLabel::new(name)))
            }
            Some(Tok::LBracket) => {
                self.pos += 1;
                let inner = self.node()?;
                self.eat(&Tok::RBracket, "`]` closing the node test")?;
                Ok(PathExpr::node_test(inner))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.path()?;
                self.eat(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error("a path expression")),
        }
    }

    // ----- node expressions -----

    fn node(&mut self) -> Result<NodeExpr, ParseError> {
        let lhs = self.node_or()?;
        if self.peek() == Some(&Tok::FatArrow) {
            self.pos += 1;
            let rhs = self.node()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn node_or(&mut self) -> Result<NodeExpr, ParseError> {
        let mut e = self.node_and()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            e = e.or(self.node_and()?);
        }
        Ok(e)
    }

    fn node_and(&mut self) -> Result<NodeExpr, ParseError> {
        let mut e = self.node_prefix()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            e = e.and(self.node_prefix()?);
        }
        Ok(e)
    }

    fn node_prefix(&mut self) -> Result<NodeExpr, ParseError> {
        if self.peek() == Some(&Tok::Bang) {
            self.pos += 1;
            Ok(self.node_prefix()?.negate())
        } else {
            self.node_atom()
        }
    }

    fn data_constant(&mut self) -> Result<DataValue, ParseError> {
        match self.peek() {
            Some(Tok::Str(_)) => {
                let Some(Spanned {
                    tok: Tok::Str(s), ..
                }) = self.bump()
                else {
                    unreachable!()
                };
                Ok(DataValue::new(s))
            }
            _ => Err(self.error("a quoted data value")),
        }
    }

    fn node_atom(&mut self) -> Result<NodeExpr, ParseError> {
        match self.peek() {
            Some(Tok::Eq) => {
                self.pos += 1;
                Ok(NodeExpr::DataEq(self.data_constant()?))
            }
            Some(Tok::BangEq) => {
                self.pos += 1;
                Ok(NodeExpr::DataNeq(self.data_constant()?))
            }
            Some(Tok::LAngle) => {
                self.pos += 1;
                let first = self.path()?;
                let e = match self.peek() {
                    Some(Tok::Eq) => {
                        self.pos += 1;
                        let second = self.path()?;
                        NodeExpr::exists_eq(first, second)
                    }
                    Some(Tok::BangEq) => {
                        self.pos += 1;
                        let second = self.path()?;
                        NodeExpr::exists_neq(first, second)
                    }
                    _ => NodeExpr::exists(first),
                };
                self.eat(&Tok::RAngle, "`>` closing the path test")?;
                Ok(e)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.node()?;
                self.eat(&Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.error("a node expression")),
        }
    }

    fn finish<T>(mut self, value: T) -> Result<T, ParseError> {
        match self.bump() {
            None => Ok(value),
            Some(s) => Err(ParseError {
                line: s.line,
                col: s.col,
                kind: ParseErrorKind::TrailingInput,
            }),
        }
    }
}

/// Parses a path expression, desugaring implications.
pub fn parse_path(text: &str) -> Result<PathExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.path()?;
    p.finish(e)
}

/// Parses a node expression, desugaring implications.
pub fn parse_node(text: &str) -> Result<NodeExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.node()?;
    p.finish(e)
}
