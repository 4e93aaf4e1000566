//! Tokenizer for the contract dialect and its property language.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

use crate::ast::Span;
use crate::diag::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keyword {
    Contract,
    Constructor,
    Function,
    Require,
    Payable,
    Immutable,
    Mapping,
    Address,
    Int,
    Uint,
    Bool,
    Property,
    Forall,
    Exists,
    Tx,
    Transfer,
    If,
    Else,
    True,
    False,
    Msg,
    Block,
    This,
}

const KEYWORDS: &[(&str, Keyword)] = &[
    ("contract", Keyword::Contract),
    ("constructor", Keyword::Constructor),
    ("function", Keyword::Function),
    ("require", Keyword::Require),
    ("payable", Keyword::Payable),
    ("immutable", Keyword::Immutable),
    ("mapping", Keyword::Mapping),
    ("address", Keyword::Address),
    ("int", Keyword::Int),
    ("uint", Keyword::Uint),
    ("bool", Keyword::Bool),
    ("property", Keyword::Property),
    ("Forall", Keyword::Forall),
    ("Exists", Keyword::Exists),
    ("tx", Keyword::Tx),
    ("transfer", Keyword::Transfer),
    ("if", Keyword::If),
    ("else", Keyword::Else),
    ("true", Keyword::True),
    ("false", Keyword::False),
    ("msg", Keyword::Msg),
    ("block", Keyword::Block),
    ("this", Keyword::This),
];

impl Keyword {
    pub fn as_str(self) -> &'static str {
        KEYWORDS.iter().find(|(_, k)| *k == self).map(|(s, _)| *s).unwrap_or("?")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(BigInt),
    Kw(Keyword),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Dot,
    /// `=>` inside mapping types.
    FatArrow,
    /// `->` separating a property's antecedent from its consequent.
    Arrow,
    Assign,
    PlusAssign,
    MinusAssign,
    Plus,
    Minus,
    Star,
    Slash,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    AndAnd,
    OrOr,
    Bang,
    /// `<tx>`
    PostMarker,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident(s) => return write!(f, "identifier `{s}`"),
            TokenKind::Int(v) => return write!(f, "integer `{v}`"),
            TokenKind::Kw(k) => return write!(f, "`{}`", k.as_str()),
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::LBracket => "[",
            TokenKind::RBracket => "]",
            TokenKind::Comma => ",",
            TokenKind::Semi => ";",
            TokenKind::Dot => ".",
            TokenKind::FatArrow => "=>",
            TokenKind::Arrow => "->",
            TokenKind::Assign => "=",
            TokenKind::PlusAssign => "+=",
            TokenKind::MinusAssign => "-=",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Slash => "/",
            TokenKind::EqEq => "==",
            TokenKind::NotEq => "!=",
            TokenKind::Lt => "<",
            TokenKind::Le => "<=",
            TokenKind::Gt => ">",
            TokenKind::Ge => ">=",
            TokenKind::AndAnd => "&&",
            TokenKind::OrOr => "||",
            TokenKind::Bang => "!",
            TokenKind::PostMarker => "<tx>",
        };
        write!(f, "`{s}`")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl Cursor<'_> {
    fn peek(&self, off: usize) -> Option<u8> {
        self.src.get(self.pos + off).copied()
    }

    fn starts_with(&self, s: &str) -> bool {
        self.src[self.pos..].starts_with(s.as_bytes())
    }

    fn bump(&mut self) {
        if let Some(&b) = self.src.get(self.pos) {
            self.pos += 1;
            if b == b'\n' {
                self.line += 1;
                self.col = 1;
            } else if b & 0xC0 != 0x80 {
                // columns count characters, not UTF-8 continuation bytes
                self.col += 1;
            }
        }
    }

    fn span_from(&self, line: u32, col: u32, start: usize) -> Span {
        Span::new(line, col, (self.pos - start) as u32)
    }
}

const PUNCT: &[(&str, TokenKind)] = &[
    ("<tx>", TokenKind::PostMarker),
    ("=>", TokenKind::FatArrow),
    ("->", TokenKind::Arrow),
    ("+=", TokenKind::PlusAssign),
    ("-=", TokenKind::MinusAssign),
    ("==", TokenKind::EqEq),
    ("!=", TokenKind::NotEq),
    ("<=", TokenKind::Le),
    (">=", TokenKind::Ge),
    ("&&", TokenKind::AndAnd),
    ("||", TokenKind::OrOr),
    ("(", TokenKind::LParen),
    (")", TokenKind::RParen),
    ("{", TokenKind::LBrace),
    ("}", TokenKind::RBrace),
    ("[", TokenKind::LBracket),
    ("]", TokenKind::RBracket),
    (",", TokenKind::Comma),
    (";", TokenKind::Semi),
    (".", TokenKind::Dot),
    ("=", TokenKind::Assign),
    ("+", TokenKind::Plus),
    ("-", TokenKind::Minus),
    ("*", TokenKind::Star),
    ("/", TokenKind::Slash),
    ("<", TokenKind::Lt),
    (">", TokenKind::Gt),
    ("!", TokenKind::Bang),
];

/// Splits `src` into tokens, skipping whitespace and comments.
pub fn tokenize(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut cur = Cursor { src: src.as_bytes(), pos: 0, line: 1, col: 1 };
    let mut out = Vec::new();
    'outer: while let Some(b) = cur.peek(0) {
        let (line, col, start) = (cur.line, cur.col, cur.pos);
        if b.is_ascii_whitespace() {
            cur.bump();
            continue;
        }
        if cur.starts_with("//") {
            while let Some(c) = cur.peek(0) {
                if c == b'\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if cur.starts_with("/*") {
            cur.bump();
            cur.bump();
            loop {
                if cur.peek(0).is_none() {
                    return Err(Diagnostic::error(
                        Span::new(line, col, 2),
                        "lex-unterminated-comment",
                        "unterminated block comment",
                    ));
                }
                if cur.starts_with("*/") {
                    cur.bump();
                    cur.bump();
                    continue 'outer;
                }
                cur.bump();
            }
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while matches!(cur.peek(0), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                cur.bump();
            }
            let word = &src[start..cur.pos];
            let kind = match KEYWORDS.iter().find(|(s, _)| *s == word) {
                Some((_, k)) => TokenKind::Kw(*k),
                None => TokenKind::Ident(word.into()),
            };
            out.push(Token { kind, span: cur.span_from(line, col, start) });
            continue;
        }
        if b.is_ascii_digit() {
            while matches!(cur.peek(0), Some(c) if c.is_ascii_digit()) {
                cur.bump();
            }
            if matches!(cur.peek(0), Some(c) if c.is_ascii_alphabetic() || c == b'_') {
                return Err(Diagnostic::error(
                    cur.span_from(line, col, start),
                    "lex-bad-number",
                    "numeric literals are plain decimal digits",
                ));
            }
            let digits = &src[start..cur.pos];
            let v = BigInt::parse_bytes(digits.as_bytes(), 10).unwrap_or_default();
            out.push(Token { kind: TokenKind::Int(v), span: cur.span_from(line, col, start) });
            continue;
        }
        for (text, kind) in PUNCT {
            if cur.starts_with(text) {
                for _ in 0..text.len() {
                    cur.bump();
                }
                out.push(Token { kind: kind.clone(), span: cur.span_from(line, col, start) });
                continue 'outer;
            }
        }
        let ch = src[start..].chars().next().unwrap_or('?');
        return Err(Diagnostic::error(
            Span::new(line, col, ch.len_utf8() as u32),
            "lex-illegal-char",
            alloc::format!("illegal character `{}`", ch.escape_default()),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn exists_header() {
        assert_eq!(
            kinds("Exists tx [1, xa]"),
            vec![
                TokenKind::Kw(Keyword::Exists),
                TokenKind::Kw(Keyword::Tx),
                TokenKind::LBracket,
                TokenKind::Int(BigInt::from(1)),
                TokenKind::Comma,
                TokenKind::Ident("xa".into()),
                TokenKind::RBracket,
            ]
        );
    }

    #[test]
    fn empty_input() {
        assert!(kinds("").is_empty());
        assert!(kinds("  // only a comment\n /* and a block */ ").is_empty());
    }

    #[test]
    fn post_marker() {
        assert_eq!(kinds("<tx>balance"), vec![TokenKind::PostMarker, TokenKind::Ident("balance".into())]);
        assert_eq!(
            kinds("a<b"),
            vec![TokenKind::Ident("a".into()), TokenKind::Lt, TokenKind::Ident("b".into())]
        );
    }

    #[test]
    fn spans_are_one_based() {
        let toks = tokenize("contract C {\n  bool x;\n}").unwrap();
        assert_eq!((toks[0].span.line, toks[0].span.col, toks[0].span.len), (1, 1, 8));
        assert_eq!((toks[3].span.line, toks[3].span.col), (2, 3));
    }

    #[test]
    fn errors() {
        let d = tokenize("a $ b").unwrap_err();
        assert_eq!((d.rule_id, d.line, d.col), ("lex-illegal-char", 1, 3));
        let d = tokenize("x /* open").unwrap_err();
        assert_eq!(d.rule_id, "lex-unterminated-comment");
        assert_eq!(tokenize("1ether").unwrap_err().rule_id, "lex-bad-number");
    }
}
