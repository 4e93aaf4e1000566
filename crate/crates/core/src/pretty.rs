//! Canonical concrete syntax. Re-parsing the output yields an equal AST.

use alloc::format;
use alloc::string::String;
use core::fmt::Write;

use crate::ast::*;

pub fn pretty_print(c: &Contract) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "contract {} {{", c.name);
    for v in &c.state_vars {
        let imm = if v.immutable { " immutable" } else { "" };
        let _ = writeln!(out, "  {}{} {};", v.ty, imm, v.name);
    }
    method(&mut out, &c.ctor, true);
    for m in &c.methods {
        method(&mut out, m, false);
    }
    out.push_str("}\n");
    out
}

pub fn pretty_print_property(p: &Property) -> String {
    format!(
        "property {} {{\n  Forall {} [\n    {}\n    -> Exists tx [{}, {}] [\n      {}\n    ]\n  ]\n}}\n",
        p.name,
        p.qvars.join(", "),
        expr(&p.antecedent),
        p.bound_m,
        p.actor,
        expr(&p.consequent)
    )
}

pub fn pretty_print_unit(u: &SourceUnit) -> String {
    let mut out = pretty_print(&u.contract);
    if !u.invariants.is_empty() {
        out.push_str("\ninvariant {\n");
        for inv in &u.invariants {
            let _ = writeln!(out, "  {};", expr(inv));
        }
        out.push_str("}\n");
    }
    for p in &u.properties {
        out.push('\n');
        out.push_str(&pretty_print_property(p));
    }
    out
}

fn method(out: &mut String, m: &Method, is_ctor: bool) {
    let params: alloc::vec::Vec<String> = m.params.iter().map(|p| format!("{} {}", p.ty, p.name)).collect();
    let head = if is_ctor { String::from("constructor") } else { format!("function {}", m.name) };
    let pay = if m.payable { " payable" } else { "" };
    let _ = write!(out, "\n  {}({}){} ", head, params.join(", "), pay);
    block(out, &m.body, 2);
    out.push('\n');
}

fn block(out: &mut String, body: &[Stmt], indent: usize) {
    out.push_str("{\n");
    for s in body {
        stmt(out, s, indent + 2);
    }
    for _ in 0..indent {
        out.push(' ');
    }
    out.push('}');
}

fn stmt(out: &mut String, s: &Stmt, indent: usize) {
    for _ in 0..indent {
        out.push(' ');
    }
    match &s.kind {
        StmtKind::Require(e) => {
            let _ = writeln!(out, "require({});", expr(e));
        }
        StmtKind::Assign(LValue::Var(n), e) => {
            let _ = writeln!(out, "{} = {};", n, expr(e));
        }
        StmtKind::Assign(LValue::MapEntry(n, k), e) => {
            let _ = writeln!(out, "{}[{}] = {};", n, expr(k), expr(e));
        }
        StmtKind::Transfer { to, amount } => {
            let _ = writeln!(out, "{}.transfer({});", postfix_operand(to), expr(amount));
        }
        StmtKind::If { cond, then_branch, else_branch } => {
            let _ = write!(out, "if ({}) ", expr(cond));
            block(out, then_branch, indent);
            if !else_branch.is_empty() {
                out.push_str(" else ");
                block(out, else_branch, indent);
            }
            out.push('\n');
        }
    }
}

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_NOT: u8 = 3;
const PREC_CMP: u8 = 4;
const PREC_ADD: u8 = 5;
const PREC_MUL: u8 = 6;
const PREC_NEG: u8 = 7;
const PREC_ATOM: u8 = 8;

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Binary(op, ..) => match op {
            BinOp::Or => PREC_OR,
            BinOp::And => PREC_AND,
            BinOp::Add | BinOp::Sub => PREC_ADD,
            BinOp::Mul | BinOp::Div => PREC_MUL,
            _ => PREC_CMP,
        },
        Expr::Unary(UnOp::Not, _) => PREC_NOT,
        Expr::Unary(UnOp::Neg, _) => PREC_NEG,
        // `<tx>` binds to a postfix expression; it sits at unary level.
        Expr::Post(_) => PREC_NEG,
        _ => PREC_ATOM,
    }
}

fn at_least(e: &Expr, min: u8) -> String {
    if prec(e) >= min {
        expr(e)
    } else {
        format!("({})", expr(e))
    }
}

fn postfix_operand(e: &Expr) -> String {
    at_least(e, PREC_ATOM)
}

pub fn expr(e: &Expr) -> String {
    match e {
        Expr::IntLit(v) => {
            if v.sign() == num_bigint::Sign::Minus {
                format!("(-{})", -v)
            } else {
                format!("{v}")
            }
        }
        Expr::BoolLit(b) => format!("{b}"),
        Expr::AddressLit(v) => format!("address({v})"),
        Expr::StateVar(n) | Expr::Param(n) | Expr::QVar(n) => n.clone(),
        Expr::MapGet(n, k) => format!("{}[{}]", n, expr(k)),
        Expr::MsgSender => "msg.sender".into(),
        Expr::MsgValue => "msg.value".into(),
        Expr::BlockNumber => "block.number".into(),
        Expr::ContractBalance => "balance".into(),
        Expr::AccountBalance(a) => match **a {
            Expr::StateVar(_) | Expr::Param(_) | Expr::QVar(_) | Expr::MsgSender => {
                format!("{}.balance", expr(a))
            }
            _ => format!("balance[{}]", expr(a)),
        },
        Expr::Unary(UnOp::Not, a) => format!("!{}", at_least(a, PREC_NOT)),
        Expr::Unary(UnOp::Neg, a) => format!("-{}", at_least(a, PREC_ATOM)),
        Expr::Post(a) => format!("<tx>{}", at_least(a, PREC_ATOM)),
        Expr::Binary(op, l, r) => {
            let p = prec(e);
            format!("{} {} {}", at_least(l, p), op.symbol(), at_least(r, p + 1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_expr, parse_file};

    #[test]
    fn nested_if_round_trips() {
        let src = "contract C { uint x; bool b;
            function f(uint v) { if (v > 1) { if (b) { x = v; } else { x = 0; } } else { b = !b; } } }";
        let u = parse_file(src).unwrap();
        let text = pretty_print(&u.contract);
        assert!(text.contains("      if (b) {"), "{text}");
        assert_eq!(parse_file(&text).unwrap().contract, u.contract);
    }

    #[test]
    fn exists_header_tokens() {
        let src = "contract C { mapping(address => uint) donors; }
            property donor_wd { Forall xa [ donors[xa] > 0 -> Exists tx [1, xa] [ <tx>xa.balance == xa.balance + donors[xa] ] ] }";
        let u = parse_file(src).unwrap();
        let text = pretty_print_property(&u.properties[0]);
        assert!(text.contains("Exists tx [1, xa]"), "{text}");
        let again = parse_file(&pretty_print_unit(&u)).unwrap();
        assert_eq!(again, u);
    }

    #[test]
    fn parenthesization() {
        for src in ["(a + b) * c", "a - (b - c)", "!(a == b)", "-(a + b)", "(!a) == b", "<tx>(a + b) > a"] {
            let e = parse_expr(src, &[]).unwrap();
            assert_eq!(parse_expr(&expr(&e), &[]).unwrap(), e, "{src} -> {}", expr(&e));
        }
    }
}
