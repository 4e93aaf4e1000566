use crate::ast::{BinOp, Contract, Expr, Property};

use super::encoder::for_each_body_expr;
use super::Logic;

fn nonlinear(e: &Expr) -> bool {
    let mut found = false;
    e.walk(&mut |x| {
        if let Expr::Binary(BinOp::Mul | BinOp::Div, l, r) = x {
            if !l.is_constant() && !r.is_constant() {
                found = true;
            }
        }
    });
    found
}

/// NIA iff some product or quotient has two non-constant operands.
pub fn select_logic(c: &Contract, p: Option<&Property>, invariants: &[Expr]) -> Logic {
    let mut nia = invariants.iter().any(nonlinear);
    if let Some(p) = p {
        nia |= nonlinear(&p.antecedent) || nonlinear(&p.consequent);
    }
    for_each_body_expr(c, &mut |e| nia |= nonlinear(e));
    if nia {
        Logic::Nia
    } else {
        Logic::Lia
    }
}
