//! Abstract syntax of the contract fragment and of liquidity properties.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;

/// Source location of a declaration or statement: 1-based line and column,
/// plus the length in bytes of the leading token.
///
/// Spans never take part in structural equality, so an AST re-parsed from
/// pretty-printed text compares equal to the original.
#[derive(Debug, Clone, Copy, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
    pub len: u32,
}

impl Span {
    pub const fn new(line: u32, col: u32, len: u32) -> Self {
        Span { line, col, len }
    }
}

impl PartialEq for Span {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl Eq for Span {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ty {
    /// Unbounded signed integer.
    Int,
    /// Unbounded nonnegative integer.
    UInt,
    Bool,
    Address,
    /// Address-keyed mapping with a numeric value type.
    Mapping(Box<Ty>),
}

impl Ty {
    pub fn is_numeric(&self) -> bool {
        matches!(self, Ty::Int | Ty::UInt)
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Int => f.write_str("int"),
            Ty::UInt => f.write_str("uint"),
            Ty::Bool => f.write_str("bool"),
            Ty::Address => f.write_str("address"),
            Ty::Mapping(v) => write!(f, "mapping(address => {v})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub ty: Ty,
    pub immutable: bool,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: Ty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Method {
    pub name: String,
    pub params: Vec<Param>,
    pub payable: bool,
    pub body: Vec<Stmt>,
    pub span: Span,
}

pub const CONSTRUCTOR: &str = "constructor";
pub const SELFDESTRUCT: &str = "selfdestruct";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contract {
    pub name: String,
    pub state_vars: Vec<VarDecl>,
    pub ctor: Method,
    pub methods: Vec<Method>,
    pub span: Span,
}

impl Contract {
    pub fn state_var(&self, name: &str) -> Option<&VarDecl> {
        self.state_vars.iter().find(|v| v.name == name)
    }

    pub fn method(&self, name: &str) -> Option<&Method> {
        self.methods.iter().find(|m| m.name == name)
    }

    /// Largest parameter count over the constructor and all methods.
    pub fn max_arity(&self) -> usize {
        core::iter::once(&self.ctor)
            .chain(self.methods.iter())
            .map(|m| m.params.len())
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

impl Stmt {
    pub fn new(kind: StmtKind) -> Self {
        Stmt { kind, span: Span::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Require(Expr),
    Assign(LValue, Expr),
    /// Moves `amount` currency units from the contract to `to`.
    Transfer { to: Expr, amount: Expr },
    If { cond: Expr, then_branch: Vec<Stmt>, else_branch: Vec<Stmt> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LValue {
    Var(String),
    MapEntry(String, Expr),
}

impl LValue {
    pub fn root(&self) -> &str {
        match self {
            LValue::Var(n) | LValue::MapEntry(n, _) => n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnOp {
    Neg,
    Not,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&&",
            BinOp::Or => "||",
        }
    }

    pub fn is_comparison(self) -> bool {
        matches!(self, BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge)
    }

    pub fn is_arith(self) -> bool {
        matches!(self, BinOp::Add | BinOp::Sub | BinOp::Mul | BinOp::Div)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    IntLit(BigInt),
    BoolLit(bool),
    /// `address(k)`.
    AddressLit(BigInt),
    StateVar(String),
    Param(String),
    /// A variable bound by a property's `Forall`.
    QVar(String),
    MapGet(String, Box<Expr>),
    MsgSender,
    MsgValue,
    BlockNumber,
    /// `balance` or `address(this).balance`.
    ContractBalance,
    /// `a.balance` or `balance[a]`.
    AccountBalance(Box<Expr>),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// `<tx>e`: `e` read in the state reached after the liquidating suffix.
    Post(Box<Expr>),
}

impl Expr {
    pub fn int(v: i64) -> Expr {
        Expr::IntLit(BigInt::from(v))
    }

    pub fn addr(v: i64) -> Expr {
        Expr::AddressLit(BigInt::from(v))
    }

    pub fn var(name: &str) -> Expr {
        Expr::StateVar(name.into())
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Unary(UnOp::Not, Box::new(e))
    }

    pub fn post(e: Expr) -> Expr {
        Expr::Post(Box::new(e))
    }

    /// Visits `self` and every subexpression in pre-order.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a Expr)) {
        f(self);
        match self {
            Expr::MapGet(_, e)
            | Expr::AccountBalance(e)
            | Expr::Unary(_, e)
            | Expr::Post(e) => e.walk(f),
            Expr::Binary(_, l, r) => {
                l.walk(f);
                r.walk(f);
            }
            _ => {}
        }
    }

    /// True when the expression mentions no variable or environment atom.
    pub fn is_constant(&self) -> bool {
        let mut constant = true;
        self.walk(&mut |e| {
            if !matches!(
                e,
                Expr::IntLit(_) | Expr::BoolLit(_) | Expr::AddressLit(_) | Expr::Unary(..) | Expr::Binary(..)
            ) {
                constant = false;
            }
        });
        constant
    }

    pub fn contains_post(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| found |= matches!(e, Expr::Post(_)));
        found
    }
}

/// A liquidity query:
/// `Forall qvars [ antecedent -> Exists tx [bound_m, actor] [ consequent ] ]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub name: String,
    pub qvars: Vec<String>,
    pub antecedent: Expr,
    pub bound_m: u32,
    pub actor: String,
    pub consequent: Expr,
    pub span: Span,
}

/// The parsed content of one source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub contract: Contract,
    pub properties: Vec<Property>,
    /// Candidate state invariants declared in `invariant { ... }` blocks.
    pub invariants: Vec<Expr>,
}

impl SourceUnit {
    pub fn property(&self, name: &str) -> Option<&Property> {
        self.properties.iter().find(|p| p.name == name)
    }
}
