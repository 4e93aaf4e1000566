//! Reading solver responses.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExp {
    Atom(String),
    /// A `"..."` literal with escapes resolved.
    Str(String),
    List(Vec<SExp>),
}

impl fmt::Display for SExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExp::Atom(a) => f.write_str(a),
            SExp::Str(s) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
            SExp::List(items) => {
                f.write_str("(")?;
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SExpError {
    #[error("unexpected end of solver output")]
    Eof,
    #[error("unbalanced `)` in solver output")]
    Unbalanced,
    #[error("solver error: {0}")]
    Solver(String),
    #[error("unexpected solver output `{0}`")]
    Unexpected(String),
    #[error("expected {expected} model values, got {got}")]
    Count { expected: usize, got: usize },
}

/// Parses every complete s-expression in `text`.
pub fn parse_all(text: &str) -> Result<Vec<SExp>, SExpError> {
    let mut stack: Vec<Vec<SExp>> = alloc::vec![Vec::new()];
    let mut chars = text.char_indices().peekable();
    while let Some((i, ch)) = chars.next() {
        match ch {
            c if c.is_whitespace() => {}
            ';' => {
                while chars.next_if(|(_, c)| *c != '\n').is_some() {}
            }
            '(' => stack.push(Vec::new()),
            ')' => {
                let done = stack.pop().ok_or(SExpError::Unbalanced)?;
                stack.last_mut().ok_or(SExpError::Unbalanced)?.push(SExp::List(done));
            }
            '"' => {
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None => return Err(SExpError::Eof),
                        Some((_, '"')) => {
                            if chars.next_if(|(_, c)| *c == '"').is_some() {
                                s.push('"');
                            } else {
                                break;
                            }
                        }
                        Some((_, c)) => s.push(c),
                    }
                }
                stack.last_mut().unwrap().push(SExp::Str(s));
            }
            '|' => {
                let start = i;
                let mut end = None;
                for (j, c) in chars.by_ref() {
                    if c == '|' {
                        end = Some(j);
                        break;
                    }
                }
                let end = end.ok_or(SExpError::Eof)?;
                stack.last_mut().unwrap().push(SExp::Atom(text[start..=end].to_string()));
            }
            _ => {
                let start = i;
                let mut end = i + ch.len_utf8();
                while let Some((j, c)) = chars.next_if(|(_, c)| !c.is_whitespace() && !matches!(c, '(' | ')' | '"' | ';')) {
                    end = j + c.len_utf8();
                }
                stack.last_mut().unwrap().push(SExp::Atom(text[start..end].to_string()));
            }
        }
    }
    if stack.len() != 1 {
        return Err(SExpError::Eof);
    }
    Ok(stack.pop().unwrap())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckSat {
    Sat,
    Unsat,
    Unknown,
}

fn solver_error(x: &SExp) -> Option<SExpError> {
    match x {
        SExp::List(items) if matches!(items.first(), Some(SExp::Atom(a)) if a == "error") => {
            let msg = items.get(1).map(|m| match m {
                SExp::Str(s) => s.clone(),
                other => other.to_string(),
            });
            Some(SExpError::Solver(msg.unwrap_or_default()))
        }
        _ => None,
    }
}

/// Interprets the response to `(check-sat)`.
pub fn parse_check_sat(text: &str) -> Result<CheckSat, SExpError> {
    let items = parse_all(text)?;
    for x in &items {
        if let Some(e) = solver_error(x) {
            return Err(e);
        }
        if let SExp::Atom(a) = x {
            match a.as_str() {
                "sat" => return Ok(CheckSat::Sat),
                "unsat" => return Ok(CheckSat::Unsat),
                "unknown" => return Ok(CheckSat::Unknown),
                "success" => continue,
                _ => return Err(SExpError::Unexpected(a.clone())),
            }
        }
    }
    Err(SExpError::Eof)
}

/// Interprets the whole output of a script ending in `(check-sat)` and an
/// optional `(get-value ...)` with `expected` terms. The model is read only
/// on `sat`.
pub fn parse_response(text: &str, expected: usize) -> Result<(CheckSat, Option<Vec<ModelValue>>), SExpError> {
    let items = parse_all(text)?;
    let mut rest = items.iter();
    let status = loop {
        let x = rest.next().ok_or(SExpError::Eof)?;
        if let Some(e) = solver_error(x) {
            return Err(e);
        }
        match x {
            SExp::Atom(a) if a == "sat" => break CheckSat::Sat,
            SExp::Atom(a) if a == "unsat" => break CheckSat::Unsat,
            SExp::Atom(a) if a == "unknown" => break CheckSat::Unknown,
            SExp::Atom(a) if a == "success" => continue,
            other => return Err(SExpError::Unexpected(other.to_string())),
        }
    };
    if status != CheckSat::Sat || expected == 0 {
        return Ok((status, None));
    }
    let model = rest.next().ok_or(SExpError::Eof)?;
    Ok((status, Some(parse_get_value(&model.to_string(), expected)?)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelValue {
    Int(BigInt),
    Bool(bool),
    /// Anything else, kept verbatim.
    Other(String),
}

impl ModelValue {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            ModelValue::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            ModelValue::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

impl fmt::Display for ModelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelValue::Int(v) => write!(f, "{v}"),
            ModelValue::Bool(b) => write!(f, "{b}"),
            ModelValue::Other(s) => f.write_str(s),
        }
    }
}

fn value_of(x: &SExp) -> ModelValue {
    match x {
        SExp::Atom(a) if a == "true" => ModelValue::Bool(true),
        SExp::Atom(a) if a == "false" => ModelValue::Bool(false),
        SExp::Atom(a) => a.parse::<BigInt>().map(ModelValue::Int).unwrap_or_else(|_| ModelValue::Other(a.clone())),
        SExp::List(items) => match items.as_slice() {
            [SExp::Atom(m), inner] if m == "-" => match value_of(inner) {
                ModelValue::Int(v) => ModelValue::Int(-v),
                _ => ModelValue::Other(x.to_string()),
            },
            _ => ModelValue::Other(x.to_string()),
        },
        SExp::Str(_) => ModelValue::Other(x.to_string()),
    }
}

/// Interprets the response to `(get-value (t1 ... tn))`. Values are
/// matched to terms by position.
pub fn parse_get_value(text: &str, expected: usize) -> Result<Vec<ModelValue>, SExpError> {
    let items = parse_all(text)?;
    let first = items.first().ok_or(SExpError::Eof)?;
    if let Some(e) = solver_error(first) {
        return Err(e);
    }
    let SExp::List(pairs) = first else {
        return Err(SExpError::Unexpected(first.to_string()));
    };
    let mut out = Vec::with_capacity(pairs.len());
    for pair in pairs {
        match pair {
            SExp::List(kv) if kv.len() == 2 => out.push(value_of(&kv[1])),
            other => return Err(SExpError::Unexpected(other.to_string())),
        }
    }
    if out.len() != expected {
        return Err(SExpError::Count { expected, got: out.len() });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statuses() {
        assert_eq!(parse_check_sat("sat\n"), Ok(CheckSat::Sat));
        assert_eq!(parse_check_sat("unsat"), Ok(CheckSat::Unsat));
        assert_eq!(parse_check_sat("unknown\n"), Ok(CheckSat::Unknown));
        assert_eq!(parse_check_sat("(error \"line 3: bad \"\"x\"\"\")"), Err(SExpError::Solver("line 3: bad \"x\"".into())));
    }

    #[test]
    fn whole_response() {
        let (st, m) = parse_response("sat\n((x 1) (y (- 2)))\n", 2).unwrap();
        assert_eq!(st, CheckSat::Sat);
        assert_eq!(m.unwrap()[1], ModelValue::Int((-2).into()));
        let (st, m) = parse_response("unsat\n(error \"model not available\")\n", 2).unwrap();
        assert_eq!((st, m), (CheckSat::Unsat, None));
        let (st, _) = parse_response("unknown (INCOMPLETE)\n", 2).unwrap();
        assert_eq!(st, CheckSat::Unknown);
        assert!(matches!(parse_response("(error \"bad sort\")\nsat\n", 0), Err(SExpError::Solver(_))));
        assert_eq!(parse_response("", 0), Err(SExpError::Eof));
    }

    #[test]
    fn values() {
        let out = "((t1$snd 4)\n (q.xa (- 7))\n ((select fg$acc t1$snd) 10) (t2$b0 true) (|odd name| (_ bv1 8)))";
        let v = parse_get_value(out, 5).unwrap();
        assert_eq!(v[0], ModelValue::Int(4.into()));
        assert_eq!(v[1], ModelValue::Int((-7).into()));
        assert_eq!(v[2], ModelValue::Int(10.into()));
        assert_eq!(v[3], ModelValue::Bool(true));
        assert_eq!(v[4], ModelValue::Other("(_ bv1 8)".into()));
        assert_eq!(parse_get_value(out, 4), Err(SExpError::Count { expected: 4, got: 5 }));
    }
}
