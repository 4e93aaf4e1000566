mod common;

use std::collections::BTreeSet;

use common::gen::Gen;
use proptest::prelude::*;
use solvent_core::ast::{BinOp, Contract, Expr, Property, StmtKind, Stmt};
use solvent_core::parser::parse_file;
use solvent_core::smt::{
    build_abstract_query, build_bmc_query, build_invariant_init_query, build_invariant_step_query, encode_chain,
    parse_all, EncodedQuery, Logic, SExp,
};

const OPS: &[&str] = &[
    "and", "or", "not", "=>", "=", "ite", "+", "-", "*", "div", "<", "<=", ">", ">=", "select", "store", "forall",
    "exists", "let", "Int", "Bool", "Array", "as", "const", "true", "false", "distinct", "check-sat", "get-value",
    "declare-fun", "assert", "set-option", "set-logic", ":produce-models", "ALL",
];

fn binders(e: &SExp, out: &mut BTreeSet<String>) {
    if let SExp::List(xs) = e {
        if let [SExp::Atom(head), SExp::List(bs), ..] = xs.as_slice() {
            if matches!(head.as_str(), "forall" | "exists" | "let") {
                for b in bs {
                    if let SExp::List(pair) = b {
                        if let Some(SExp::Atom(n)) = pair.first() {
                            out.insert(n.clone());
                        }
                    }
                }
            }
        }
        for x in xs {
            binders(x, out);
        }
    }
}

fn atoms(e: &SExp, out: &mut BTreeSet<String>) {
    match e {
        SExp::Atom(a) => {
            out.insert(a.clone());
        }
        SExp::List(xs) => xs.iter().for_each(|x| atoms(x, out)),
        SExp::Str(_) => {}
    }
}

/// Every symbol of the script is an operator, a numeral, a declared
/// constant or a bound variable, and declarations are unique.
fn check_closed(q: &EncodedQuery) -> Result<(), String> {
    let script = q.script();
    let forms = parse_all(&script).map_err(|e| format!("{e:?}"))?;
    let mut declared = BTreeSet::new();
    for (n, _) in &q.decls {
        if !declared.insert(n.clone()) {
            return Err(format!("`{n}` declared twice"));
        }
    }
    let (mut bound, mut used) = (BTreeSet::new(), BTreeSet::new());
    for f in &forms {
        binders(f, &mut bound);
        atoms(f, &mut used);
    }
    for a in used {
        let known = OPS.contains(&a.as_str())
            || a.chars().all(|c| c.is_ascii_digit())
            || declared.contains(&a)
            || bound.contains(&a);
        if !known {
            return Err(format!("free symbol `{a}` in\n{script}"));
        }
    }
    Ok(())
}

fn nonlinear(e: &Expr) -> bool {
    let mut found = false;
    e.walk(&mut |x| {
        if let Expr::Binary(BinOp::Mul | BinOp::Div, l, r) = x {
            found |= !l.is_constant() && !r.is_constant();
        }
    });
    found
}

fn stmts_nonlinear(body: &[Stmt]) -> bool {
    body.iter().any(|s| match &s.kind {
        StmtKind::Require(e) => nonlinear(e),
        StmtKind::Assign(lv, e) => {
            nonlinear(e) || matches!(lv, solvent_core::ast::LValue::MapEntry(_, k) if nonlinear(k))
        }
        StmtKind::Transfer { to, amount } => nonlinear(to) || nonlinear(amount),
        StmtKind::If { cond, then_branch, else_branch } => {
            nonlinear(cond) || stmts_nonlinear(then_branch) || stmts_nonlinear(else_branch)
        }
    })
}

fn expected_logic(c: &Contract, p: &Property) -> Logic {
    let body = std::iter::once(&c.ctor).chain(&c.methods).any(|m| stmts_nonlinear(&m.body));
    if body || nonlinear(&p.antecedent) || nonlinear(&p.consequent) {
        Logic::Nia
    } else {
        Logic::Lia
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn generated_queries_are_closed(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let c = g.contract();
        let p = g.property(&c, 0);
        for k in 1..=3 {
            let q = build_bmc_query(&c, &p, k);
            prop_assert_eq!(check_closed(&q), Ok(()));
            prop_assert_eq!(q.logic, expected_logic(&c, &p));
        }
        let abs = build_abstract_query(&c, &p, &[]);
        prop_assert_eq!(check_closed(&abs), Ok(()));
        prop_assert!(abs.decode_map.is_empty());
        prop_assert_eq!(check_closed(&encode_chain(&c, 3).query), Ok(()));
    }
}

#[test]
fn benchmark_logics() {
    let cases = [
        (include_str!("../../../benchmarks/crowdfund_bug.sol"), Logic::Lia),
        (include_str!("../../../benchmarks/crowdfund_fix2.sol"), Logic::Lia),
        (include_str!("../../../benchmarks/bank.sol"), Logic::Lia),
        (include_str!("../../../benchmarks/payment_splitter.sol"), Logic::Nia),
    ];
    for (src, want) in cases {
        let u = parse_file(src).unwrap();
        for p in &u.properties {
            let q = build_bmc_query(&u.contract, p, 2);
            assert_eq!(q.logic, want, "{}", p.name);
            assert!(q.script().contains(&format!("; logic: {want}")));
            assert_eq!(check_closed(&q), Ok(()));
        }
    }
}

#[test]
fn invariant_queries_are_closed() {
    let u = parse_file(include_str!("../../../benchmarks/crowdfund_fix2.sol")).unwrap();
    let inv = solvent_core::parser::parse_expr("balance >= tot_donations", &[]).unwrap();
    assert_eq!(check_closed(&build_invariant_init_query(&u.contract, &inv)), Ok(()));
    assert_eq!(check_closed(&build_invariant_step_query(&u.contract, &[inv.clone()], &inv)), Ok(()));
    let p = u.property("donor_wd").unwrap();
    assert_eq!(check_closed(&build_abstract_query(&u.contract, p, &[inv])), Ok(()));
}

#[test]
fn decode_map_covers_every_step() {
    let u = parse_file(include_str!("../../../benchmarks/crowdfund_bug.sol")).unwrap();
    let p = u.property("donor_wd").unwrap();
    for k in 1..=4 {
        let q = build_bmc_query(&u.contract, p, k);
        let names = q.requested_terms();
        for step in 1..=k {
            assert!(names.iter().any(|n| n.starts_with(&format!("t{step}"))), "step {step} of {k}: {names:?}");
        }
    }
}
