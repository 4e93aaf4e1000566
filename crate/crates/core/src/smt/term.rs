//! SMT-LIB terms with light constant folding.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sort {
    Int,
    Bool,
    /// `(Array Int Int)`: mappings and account balances.
    IntArray,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Int => "Int",
            Sort::Bool => "Bool",
            Sort::IntArray => "(Array Int Int)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Int(BigInt),
    Bool(bool),
    Sym(String),
    App(&'static str, Vec<Term>),
    /// `((as const (Array Int Int)) v)`
    ConstArray(Box<Term>),
    Let(Vec<(String, Term)>, Box<Term>),
    Forall(Vec<(String, Sort)>, Box<Term>),
}

impl Term {
    pub fn sym(s: impl Into<String>) -> Term {
        Term::Sym(s.into())
    }

    pub fn int(v: impl Into<BigInt>) -> Term {
        Term::Int(v.into())
    }

    pub fn tt() -> Term {
        Term::Bool(true)
    }

    pub fn ff() -> Term {
        Term::Bool(false)
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Term::Bool(true))
    }

    pub fn is_false(&self) -> bool {
        matches!(self, Term::Bool(false))
    }
}

pub fn and(parts: impl IntoIterator<Item = Term>) -> Term {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Term::Bool(true) => {}
            Term::Bool(false) => return Term::ff(),
            Term::App("and", inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Term::tt(),
        1 => out.pop().unwrap(),
        _ => Term::App("and", out),
    }
}

pub fn or(parts: impl IntoIterator<Item = Term>) -> Term {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Term::Bool(false) => {}
            Term::Bool(true) => return Term::tt(),
            Term::App("or", inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Term::ff(),
        1 => out.pop().unwrap(),
        _ => Term::App("or", out),
    }
}

pub fn not(t: Term) -> Term {
    match t {
        Term::Bool(b) => Term::Bool(!b),
        Term::App("not", mut inner) => inner.pop().unwrap(),
        other => Term::App("not", alloc::vec![other]),
    }
}

pub fn implies(a: Term, b: Term) -> Term {
    if a.is_true() {
        return b;
    }
    if a.is_false() || b.is_true() {
        return Term::tt();
    }
    Term::App("=>", alloc::vec![a, b])
}

pub fn ite(c: Term, a: Term, b: Term) -> Term {
    match c {
        Term::Bool(true) => a,
        Term::Bool(false) => b,
        _ if a == b => a,
        c => Term::App("ite", alloc::vec![c, a, b]),
    }
}

pub fn eq(a: Term, b: Term) -> Term {
    if a == b {
        return Term::tt();
    }
    match (&a, &b) {
        (Term::Int(x), Term::Int(y)) => Term::Bool(x == y),
        (Term::Bool(x), Term::Bool(y)) => Term::Bool(x == y),
        _ => Term::App("=", alloc::vec![a, b]),
    }
}

fn arith(op: &'static str, a: Term, b: Term, fold: fn(&BigInt, &BigInt) -> BigInt) -> Term {
    match (&a, &b) {
        (Term::Int(x), Term::Int(y)) => Term::Int(fold(x, y)),
        _ => Term::App(op, alloc::vec![a, b]),
    }
}

pub fn add(a: Term, b: Term) -> Term {
    match (&a, &b) {
        (Term::Int(x), _) if x.sign() == num_bigint::Sign::NoSign => b,
        (_, Term::Int(y)) if y.sign() == num_bigint::Sign::NoSign => a,
        _ => arith("+", a, b, |x, y| x + y),
    }
}

pub fn sub(a: Term, b: Term) -> Term {
    match &b {
        Term::Int(y) if y.sign() == num_bigint::Sign::NoSign => a,
        _ => arith("-", a, b, |x, y| x - y),
    }
}

pub fn mul(a: Term, b: Term) -> Term {
    arith("*", a, b, |x, y| x * y)
}

pub fn neg(a: Term) -> Term {
    match a {
        Term::Int(x) => Term::Int(-x),
        other => Term::App("-", alloc::vec![other]),
    }
}

/// Integer division truncating toward zero, for a nonzero divisor.
pub fn trunc_div(a: Term, b: Term) -> Term {
    if let (Term::Int(x), Term::Int(y)) = (&a, &b) {
        if y.sign() != num_bigint::Sign::NoSign {
            return Term::Int(crate::interp::trunc_div(x, y));
        }
    }
    let nonneg = cmp(">=", a.clone(), Term::int(0));
    let pos = Term::App("div", alloc::vec![a.clone(), b.clone()]);
    let negd = neg(Term::App("div", alloc::vec![neg(a), b]));
    ite(nonneg, pos, negd)
}

pub fn cmp(op: &'static str, a: Term, b: Term) -> Term {
    if let (Term::Int(x), Term::Int(y)) = (&a, &b) {
        return Term::Bool(match op {
            "<" => x < y,
            "<=" => x <= y,
            ">" => x > y,
            ">=" => x >= y,
            _ => return Term::App(op, alloc::vec![a, b]),
        });
    }
    Term::App(op, alloc::vec![a, b])
}

/// Array read, simplified over `store`, `ite` and constant arrays so that
/// reads of symbolic post-states reduce to reads of the base arrays.
pub fn select(arr: Term, idx: Term) -> Term {
    match arr {
        Term::ConstArray(v) => *v,
        Term::App("store", mut parts) => {
            let v = parts.pop().unwrap();
            let i = parts.pop().unwrap();
            let a = parts.pop().unwrap();
            if i == idx {
                return v;
            }
            let same = eq(i, idx.clone());
            if same.is_false() {
                return select(a, idx);
            }
            ite(same, v, select(a, idx))
        }
        Term::App("ite", mut parts) => {
            let e = parts.pop().unwrap();
            let t = parts.pop().unwrap();
            let c = parts.pop().unwrap();
            ite(c, select(t, idx.clone()), select(e, idx))
        }
        arr => Term::App("select", alloc::vec![arr, idx]),
    }
}

pub fn store(arr: Term, idx: Term, val: Term) -> Term {
    Term::App("store", alloc::vec![arr, idx, val])
}

pub fn const_array(v: Term) -> Term {
    Term::ConstArray(Box::new(v))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(v) => {
                if v.is_negative() {
                    write!(f, "(- {})", -v)
                } else {
                    write!(f, "{v}")
                }
            }
            Term::Bool(b) => write!(f, "{b}"),
            Term::Sym(s) => f.write_str(s),
            Term::App(op, args) => {
                write!(f, "({op}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Term::ConstArray(v) => write!(f, "((as const (Array Int Int)) {v})"),
            Term::Let(binds, body) => {
                f.write_str("(let (")?;
                for (i, (n, t)) in binds.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "({n} {t})")?;
                }
                write!(f, ") {body})")
            }
            Term::Forall(vars, body) => {
                f.write_str("(forall (")?;
                for (i, (n, s)) in vars.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "({n} {s})")?;
                }
                write!(f, ") {body})")
            }
        }
    }
}
