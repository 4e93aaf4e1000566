//! Recursive-descent parser producing [`SourceUnit`]s.
//!
//! Operator precedence, loosest first: `||`, `&&`, `!`, comparisons, `+ -`,
//! `* /`, unary minus. The `<tx>` marker applies to the postfix expression
//! that follows it. Solidity surface noise (`public`, `external`,
//! `payable(...)` casts, `address payable`, `uintN`/`intN`) is accepted and
//! normalized away.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use crate::ast::*;
use crate::diag::Diagnostic;
use crate::lexer::{tokenize, Keyword, Token, TokenKind};

const MAX_DEPTH: u32 = 200;

const VISIBILITY: &[&str] = &["public", "external", "internal", "private", "view", "pure"];

/// Parses a whole source file: one contract, then any number of
/// `property` and `invariant` blocks.
pub fn parse_file(src: &str) -> Result<SourceUnit, Vec<Diagnostic>> {
    let tokens = tokenize(src).map_err(|d| alloc::vec![d])?;
    let mut p = Parser { toks: tokens, pos: 0, diags: Vec::new(), scope: Scope::Method(Vec::new()), depth: 0 };
    let unit = p.file();
    match unit {
        Some(u) if p.diags.is_empty() => Ok(u),
        _ => {
            if p.diags.is_empty() {
                p.diags.push(Diagnostic::error(p.here(), "parse-error", "could not parse file"));
            }
            Err(p.diags)
        }
    }
}

/// Parses a standalone expression in property scope with the given bound
/// variables. Used for invariants passed on the command line and in tests.
pub fn parse_expr(src: &str, qvars: &[&str]) -> Result<Expr, Vec<Diagnostic>> {
    let tokens = tokenize(src).map_err(|d| alloc::vec![d])?;
    let mut p = Parser {
        toks: tokens,
        pos: 0,
        diags: Vec::new(),
        scope: Scope::Property(qvars.iter().map(|s| s.to_string()).collect()),
        depth: 0,
    };
    let e = p.expr();
    if e.is_some() && !p.at_end() {
        p.err_here("parse-trailing", "unexpected trailing input");
    }
    match e {
        Some(e) if p.diags.is_empty() => Ok(e),
        _ => Err(p.diags),
    }
}

enum Scope {
    Method(Vec<String>),
    Property(Vec<String>),
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
    scope: Scope,
    depth: u32,
}

type PResult<T> = Option<T>;

impl Parser {
    fn peek(&self) -> Option<&TokenKind> {
        self.toks.get(self.pos).map(|t| &t.kind)
    }

    fn peek_at(&self, off: usize) -> Option<&TokenKind> {
        self.toks.get(self.pos + off).map(|t| &t.kind)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn here(&self) -> Span {
        match self.toks.get(self.pos).or_else(|| self.toks.last()) {
            Some(t) => t.span,
            None => Span::new(1, 1, 0),
        }
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn is(&self, k: &TokenKind) -> bool {
        self.peek() == Some(k)
    }

    fn is_kw(&self, k: Keyword) -> bool {
        self.peek() == Some(&TokenKind::Kw(k))
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(TokenKind::Ident(i)) if i == s)
    }

    fn eat(&mut self, k: &TokenKind) -> bool {
        if self.is(k) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_kw(&mut self, k: Keyword) -> bool {
        self.eat(&TokenKind::Kw(k))
    }

    fn err_here(&mut self, rule: &'static str, msg: impl Into<String>) {
        let span = self.here();
        self.diags.push(Diagnostic::error(span, rule, msg));
    }

    fn unexpected(&mut self, what: &str) {
        let found = match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".into(),
        };
        self.err_here("parse-unexpected", format!("expected {what}, found {found}"));
    }

    fn expect(&mut self, k: &TokenKind) -> PResult<()> {
        if self.eat(k) {
            Some(())
        } else {
            self.unexpected(&k.to_string());
            None
        }
    }

    fn expect_kw(&mut self, k: Keyword) -> PResult<()> {
        self.expect(&TokenKind::Kw(k))
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek() {
            Some(TokenKind::Ident(s)) => {
                let s = s.clone();
                let span = self.here();
                self.pos += 1;
                Some((s, span))
            }
            _ => {
                self.unexpected("identifier");
                None
            }
        }
    }

    /// Skips to just past the next `;` at the current nesting level, or to
    /// (not past) the closing `}` of the current block.
    fn recover_stmt(&mut self) {
        let mut depth = 0i32;
        let start = self.pos;
        while let Some(t) = self.peek() {
            match t {
                TokenKind::LBrace | TokenKind::LParen | TokenKind::LBracket => depth += 1,
                TokenKind::RParen | TokenKind::RBracket => depth -= 1,
                TokenKind::RBrace => {
                    if depth <= 0 {
                        if self.pos == start {
                            self.pos += 1;
                        }
                        return;
                    }
                    depth -= 1;
                }
                TokenKind::Semi if depth <= 0 => {
                    self.pos += 1;
                    return;
                }
                _ => {}
            }
            self.pos += 1;
        }
    }

    /// Skips to the next token that can start a top-level or member item.
    /// With `advance`, at least one token is consumed first.
    fn recover_item(&mut self, advance: bool) {
        if advance {
            self.bump();
        }
        while let Some(t) = self.peek() {
            if matches!(
                    t,
                    TokenKind::Kw(Keyword::Function | Keyword::Constructor | Keyword::Property | Keyword::Contract)
                )
            {
                return;
            }
            self.pos += 1;
        }
    }

    fn file(&mut self) -> PResult<SourceUnit> {
        let contract = self.contract();
        let mut properties = Vec::new();
        let mut invariants = Vec::new();
        while !self.at_end() {
            if self.is_kw(Keyword::Property) {
                match self.property() {
                    Some(p) => properties.push(p),
                    None => self.recover_item(false),
                }
            } else if self.is_ident("invariant") {
                match self.invariant_block() {
                    Some(mut inv) => invariants.append(&mut inv),
                    None => self.recover_item(false),
                }
            } else if self.is_kw(Keyword::Contract) {
                self.err_here("one-contract-per-file", "only one contract per file is supported");
                self.recover_item(true);
            } else {
                self.unexpected("`property` or `invariant`");
                self.recover_item(true);
            }
        }
        Some(SourceUnit { contract: contract?, properties, invariants })
    }

    fn contract(&mut self) -> PResult<Contract> {
        let span = self.here();
        if !self.eat_kw(Keyword::Contract) {
            self.unexpected("`contract`");
            self.recover_item(false);
            return None;
        }
        let (name, _) = self.ident()?;
        self.expect(&TokenKind::LBrace)?;
        let mut state_vars = Vec::new();
        let mut ctor: Option<Method> = None;
        let mut methods = Vec::new();
        let mut ok = true;
        while !self.is(&TokenKind::RBrace) {
            if self.at_end() || self.is_kw(Keyword::Property) {
                self.unexpected("`}`");
                return None;
            }
            if self.is_kw(Keyword::Constructor) {
                let cspan = self.here();
                match self.method(true) {
                    Some(m) => {
                        if ctor.is_some() {
                            self.diags.push(Diagnostic::error(
                                cspan,
                                "duplicate-constructor",
                                "contract declares more than one constructor",
                            ));
                        }
                        ctor = Some(m);
                    }
                    None => {
                        ok = false;
                        self.recover_item(false);
                    }
                }
            } else if self.is_kw(Keyword::Function) {
                match self.method(false) {
                    Some(m) => methods.push(m),
                    None => {
                        ok = false;
                        self.recover_item(false);
                    }
                }
            } else {
                match self.state_var() {
                    Some(v) => state_vars.push(v),
                    None => {
                        ok = false;
                        self.recover_stmt();
                    }
                }
            }
        }
        self.bump();
        let ctor = ctor.unwrap_or(Method {
            name: CONSTRUCTOR.into(),
            params: Vec::new(),
            payable: false,
            body: Vec::new(),
            span,
        });
        ok.then_some(Contract { name, state_vars, ctor, methods, span })
    }

    fn ty(&mut self) -> PResult<Ty> {
        let ty = match self.peek() {
            Some(TokenKind::Kw(Keyword::Uint)) => Ty::UInt,
            Some(TokenKind::Kw(Keyword::Int)) => Ty::Int,
            Some(TokenKind::Kw(Keyword::Bool)) => Ty::Bool,
            Some(TokenKind::Kw(Keyword::Address)) => {
                self.pos += 1;
                self.eat_kw(Keyword::Payable);
                return Some(Ty::Address);
            }
            Some(TokenKind::Kw(Keyword::Mapping)) => {
                self.pos += 1;
                self.expect(&TokenKind::LParen)?;
                let key_span = self.here();
                let key = self.ty()?;
                if key != Ty::Address {
                    self.diags.push(Diagnostic::error(key_span, "mapping-key", "mapping keys must be addresses"));
                }
                self.expect(&TokenKind::FatArrow)?;
                let val = self.ty()?;
                self.expect(&TokenKind::RParen)?;
                return Some(Ty::Mapping(Box::new(val)));
            }
            Some(TokenKind::Ident(s)) if sized_int(s, "uint") => Ty::UInt,
            Some(TokenKind::Ident(s)) if sized_int(s, "int") => Ty::Int,
            _ => {
                self.unexpected("type");
                return None;
            }
        };
        self.pos += 1;
        Some(ty)
    }

    fn skip_visibility(&mut self) {
        while matches!(self.peek(), Some(TokenKind::Ident(s)) if VISIBILITY.contains(&s.as_str())) {
            self.pos += 1;
        }
    }

    fn state_var(&mut self) -> PResult<VarDecl> {
        let ty = self.ty()?;
        let mut immutable = false;
        loop {
            if self.eat_kw(Keyword::Immutable) {
                immutable = true;
            } else if matches!(self.peek(), Some(TokenKind::Ident(s)) if VISIBILITY.contains(&s.as_str())) {
                self.pos += 1;
            } else {
                break;
            }
        }
        let (name, span) = self.ident()?;
        self.expect(&TokenKind::Semi)?;
        Some(VarDecl { name, ty, immutable, span })
    }

    fn method(&mut self, is_ctor: bool) -> PResult<Method> {
        let kw_span = self.here();
        self.pos += 1;
        let (name, span) = if is_ctor { (CONSTRUCTOR.to_string(), kw_span) } else { self.ident()? };
        self.expect(&TokenKind::LParen)?;
        let mut params = Vec::new();
        if !self.is(&TokenKind::RParen) {
            loop {
                let ty = self.ty()?;
                let (pname, _) = self.ident()?;
                params.push(Param { name: pname, ty });
                if !self.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        self.expect(&TokenKind::RParen)?;
        let mut payable = false;
        loop {
            if self.eat_kw(Keyword::Payable) {
                payable = true;
            } else if matches!(self.peek(), Some(TokenKind::Ident(s)) if VISIBILITY.contains(&s.as_str())) {
                self.skip_visibility();
            } else {
                break;
            }
        }
        self.scope = Scope::Method(params.iter().map(|p| p.name.clone()).collect());
        let body = self.block()?;
        Some(Method { name, params, payable, body, span })
    }

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect(&TokenKind::LBrace)?;
        let mut stmts = Vec::new();
        let mut ok = true;
        while !self.is(&TokenKind::RBrace) {
            if self.at_end() {
                self.unexpected("`}`");
                return None;
            }
            match self.stmt() {
                Some(s) => stmts.push(s),
                None => {
                    ok = false;
                    self.recover_stmt();
                }
            }
        }
        self.pos += 1;
        ok.then_some(stmts)
    }

    fn stmt_or_block(&mut self) -> PResult<Vec<Stmt>> {
        if self.is(&TokenKind::LBrace) {
            self.block()
        } else {
            Some(alloc::vec![self.stmt()?])
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let span = self.here();
        self.enter()?;
        let r = self.stmt_inner(span);
        self.depth -= 1;
        r
    }

    fn stmt_inner(&mut self, span: Span) -> PResult<Stmt> {
        if self.eat_kw(Keyword::Require) {
            self.expect(&TokenKind::LParen)?;
            let cond = self.expr()?;
            self.expect(&TokenKind::RParen)?;
            self.expect(&TokenKind::Semi)?;
            return Some(Stmt { kind: StmtKind::Require(cond), span });
        }
        if self.eat_kw(Keyword::If) {
            self.expect(&TokenKind::LParen)?;
            let cond = self.expr()?;
            self.expect(&TokenKind::RParen)?;
            let then_branch = self.stmt_or_block()?;
            let else_branch = if self.eat_kw(Keyword::Else) { self.stmt_or_block()? } else { Vec::new() };
            return Some(Stmt { kind: StmtKind::If { cond, then_branch, else_branch }, span });
        }
        let target = self.postfix()?;
        if self.eat(&TokenKind::Dot) {
            self.expect_kw(Keyword::Transfer)?;
            self.expect(&TokenKind::LParen)?;
            let amount = self.expr()?;
            self.expect(&TokenKind::RParen)?;
            self.expect(&TokenKind::Semi)?;
            return Some(Stmt { kind: StmtKind::Transfer { to: target, amount }, span });
        }
        let lv = match target {
            Expr::StateVar(n) | Expr::Param(n) => LValue::Var(n),
            Expr::MapGet(n, k) => LValue::MapEntry(n, *k),
            _ => {
                self.diags.push(Diagnostic::error(span, "bad-lvalue", "left-hand side is not assignable"));
                return None;
            }
        };
        let op = self.bump().map(|t| t.kind);
        let rhs = self.expr()?;
        let current = || match &lv {
            LValue::Var(n) => Expr::StateVar(n.clone()),
            LValue::MapEntry(n, k) => Expr::MapGet(n.clone(), Box::new(k.clone())),
        };
        let value = match op {
            Some(TokenKind::Assign) => rhs,
            Some(TokenKind::PlusAssign) => Expr::bin(BinOp::Add, current(), rhs),
            Some(TokenKind::MinusAssign) => Expr::bin(BinOp::Sub, current(), rhs),
            _ => {
                self.pos -= 1;
                self.unexpected("`=`, `+=`, `-=` or `.transfer`");
                return None;
            }
        };
        self.expect(&TokenKind::Semi)?;
        Some(Stmt { kind: StmtKind::Assign(lv, value), span })
    }

    fn property(&mut self) -> PResult<Property> {
        self.pos += 1;
        let (name, span) = self.ident()?;
        self.expect(&TokenKind::LBrace)?;
        self.expect_kw(Keyword::Forall)?;
        let mut qvars = Vec::new();
        loop {
            let (q, _) = self.ident()?;
            qvars.push(q);
            self.eat(&TokenKind::Comma);
            if self.is(&TokenKind::LBracket) {
                break;
            }
        }
        self.expect(&TokenKind::LBracket)?;
        self.scope = Scope::Property(qvars.clone());
        let antecedent = self.expr()?;
        self.expect(&TokenKind::Arrow)?;
        self.expect_kw(Keyword::Exists)?;
        self.expect_kw(Keyword::Tx)?;
        self.expect(&TokenKind::LBracket)?;
        let bound_m = match self.bump().map(|t| t.kind) {
            Some(TokenKind::Int(v)) => match v.to_u32() {
                Some(m) => m,
                None => {
                    self.pos -= 1;
                    self.err_here("bound-range", "transaction bound out of range");
                    return None;
                }
            },
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.unexpected("transaction bound");
                return None;
            }
        };
        self.expect(&TokenKind::Comma)?;
        let (actor, _) = self.ident()?;
        self.expect(&TokenKind::RBracket)?;
        self.expect(&TokenKind::LBracket)?;
        let consequent = self.expr()?;
        self.expect(&TokenKind::RBracket)?;
        self.expect(&TokenKind::RBracket)?;
        self.expect(&TokenKind::RBrace)?;
        Some(Property { name, qvars, antecedent, bound_m, actor, consequent, span })
    }

    fn invariant_block(&mut self) -> PResult<Vec<Expr>> {
        self.pos += 1;
        self.expect(&TokenKind::LBrace)?;
        self.scope = Scope::Property(Vec::new());
        let mut out = Vec::new();
        while !self.eat(&TokenKind::RBrace) {
            out.push(self.expr()?);
            self.expect(&TokenKind::Semi)?;
        }
        Some(out)
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            self.err_here("nesting-too-deep", "nesting too deep");
            self.depth -= 1;
            return None;
        }
        Some(())
    }

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let r = self.or_expr();
        self.depth -= 1;
        r
    }

    fn or_expr(&mut self) -> PResult<Expr> {
        let mut l = self.and_expr()?;
        while self.eat(&TokenKind::OrOr) {
            let r = self.and_expr()?;
            l = Expr::bin(BinOp::Or, l, r);
        }
        Some(l)
    }

    fn and_expr(&mut self) -> PResult<Expr> {
        let mut l = self.not_expr()?;
        while self.eat(&TokenKind::AndAnd) {
            let r = self.not_expr()?;
            l = Expr::bin(BinOp::And, l, r);
        }
        Some(l)
    }

    fn not_expr(&mut self) -> PResult<Expr> {
        if self.eat(&TokenKind::Bang) {
            self.enter()?;
            let e = self.not_expr();
            self.depth -= 1;
            return Some(Expr::not(e?));
        }
        self.cmp_expr()
    }

    fn cmp_expr(&mut self) -> PResult<Expr> {
        let mut l = self.add_expr()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::EqEq) => BinOp::Eq,
                Some(TokenKind::NotEq) => BinOp::Ne,
                Some(TokenKind::Lt) => BinOp::Lt,
                Some(TokenKind::Le) => BinOp::Le,
                Some(TokenKind::Gt) => BinOp::Gt,
                Some(TokenKind::Ge) => BinOp::Ge,
                _ => return Some(l),
            };
            self.pos += 1;
            let r = self.add_expr()?;
            l = Expr::bin(op, l, r);
        }
    }

    fn add_expr(&mut self) -> PResult<Expr> {
        let mut l = self.mul_expr()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => return Some(l),
            };
            self.pos += 1;
            let r = self.mul_expr()?;
            l = Expr::bin(op, l, r);
        }
    }

    fn mul_expr(&mut self) -> PResult<Expr> {
        let mut l = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                _ => return Some(l),
            };
            self.pos += 1;
            let r = self.unary()?;
            l = Expr::bin(op, l, r);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat(&TokenKind::Minus) {
            self.enter()?;
            let e = self.unary();
            self.depth -= 1;
            return Some(Expr::Unary(UnOp::Neg, Box::new(e?)));
        }
        if self.eat(&TokenKind::PostMarker) {
            let e = self.postfix()?;
            return Some(Expr::post(e));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        while self.is(&TokenKind::Dot) && self.is_ident_at(1, "balance") {
            self.pos += 2;
            e = Expr::AccountBalance(Box::new(e));
        }
        Some(e)
    }

    fn is_ident_at(&self, off: usize, s: &str) -> bool {
        matches!(self.peek_at(off), Some(TokenKind::Ident(i)) if i == s)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let tok = match self.bump() {
            Some(t) => t,
            None => {
                self.unexpected("expression");
                return None;
            }
        };
        match tok.kind {
            TokenKind::Int(v) => Some(Expr::IntLit(v)),
            TokenKind::Kw(Keyword::True) => Some(Expr::BoolLit(true)),
            TokenKind::Kw(Keyword::False) => Some(Expr::BoolLit(false)),
            TokenKind::LParen => {
                let e = self.expr()?;
                self.expect(&TokenKind::RParen)?;
                Some(e)
            }
            TokenKind::Kw(Keyword::Address) => {
                self.expect(&TokenKind::LParen)?;
                let e = match self.bump().map(|t| t.kind) {
                    Some(TokenKind::Int(v)) => Expr::AddressLit(v),
                    Some(TokenKind::Kw(Keyword::This)) => {
                        self.expect(&TokenKind::RParen)?;
                        if !(self.is(&TokenKind::Dot) && self.is_ident_at(1, "balance")) {
                            self.err_here("address-this", "`address(this)` is only supported as `address(this).balance`");
                            return None;
                        }
                        self.pos += 2;
                        return Some(Expr::ContractBalance);
                    }
                    _ => {
                        self.pos -= 1;
                        self.unexpected("address literal");
                        return None;
                    }
                };
                self.expect(&TokenKind::RParen)?;
                Some(e)
            }
            TokenKind::Kw(Keyword::Payable) => {
                self.expect(&TokenKind::LParen)?;
                let e = self.expr()?;
                self.expect(&TokenKind::RParen)?;
                Some(e)
            }
            TokenKind::Kw(Keyword::This) => {
                if self.is(&TokenKind::Dot) && self.is_ident_at(1, "balance") {
                    self.pos += 2;
                    Some(Expr::ContractBalance)
                } else {
                    self.unexpected("`.balance`");
                    None
                }
            }
            TokenKind::Kw(Keyword::Msg) => {
                self.expect(&TokenKind::Dot)?;
                let (field, _) = self.ident()?;
                match field.as_str() {
                    "sender" => Some(Expr::MsgSender),
                    "value" => Some(Expr::MsgValue),
                    _ => {
                        self.pos -= 1;
                        self.err_here("unknown-builtin", format!("unknown field `msg.{field}`"));
                        None
                    }
                }
            }
            TokenKind::Kw(Keyword::Block) => {
                self.expect(&TokenKind::Dot)?;
                let (field, _) = self.ident()?;
                if field == "number" {
                    Some(Expr::BlockNumber)
                } else {
                    self.pos -= 1;
                    self.err_here("unknown-builtin", format!("unknown field `block.{field}`"));
                    None
                }
            }
            TokenKind::Ident(name) => {
                if name == "st" && self.is(&TokenKind::Dot) && !self.is_ident_at(1, "balance") {
                    self.pos += 1;
                    let (n, _) = self.ident()?;
                    return self.name_ref(n, true);
                }
                if name == "balance" {
                    if self.eat(&TokenKind::LBracket) {
                        let a = self.expr()?;
                        self.expect(&TokenKind::RBracket)?;
                        return Some(Expr::AccountBalance(Box::new(a)));
                    }
                    return Some(Expr::ContractBalance);
                }
                self.name_ref(name, false)
            }
            _ => {
                self.pos -= 1;
                self.unexpected("expression");
                None
            }
        }
    }

    fn name_ref(&mut self, name: String, force_state: bool) -> PResult<Expr> {
        if self.eat(&TokenKind::LBracket) {
            let k = self.expr()?;
            self.expect(&TokenKind::RBracket)?;
            return Some(Expr::MapGet(name, Box::new(k)));
        }
        if force_state {
            return Some(Expr::StateVar(name));
        }
        Some(match &self.scope {
            Scope::Method(params) if params.contains(&name) => Expr::Param(name),
            Scope::Property(qvars) if qvars.contains(&name) => Expr::QVar(name),
            _ => Expr::StateVar(name),
        })
    }
}

fn sized_int(s: &str, prefix: &str) -> bool {
    match s.strip_prefix(prefix) {
        Some(rest) => !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()),
        None => false,
    }
}
