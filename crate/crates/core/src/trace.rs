//! The human trace format, one step per line:
//! `[i] name(args)  msg.sender=address(k)  msg.value=v  block=b`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use thiserror::Error;

use crate::ast::{CONSTRUCTOR, SELFDESTRUCT};
use crate::interp::{Transaction, TxKind, Value};

const SKIP: &str = "skip";

fn call_text(t: &Transaction) -> String {
    let args: Vec<String> = t.args.iter().map(|a| a.to_string()).collect();
    format!("{}({})", t.name(), args.join(","))
}

/// Renders a trace with the call column padded so the remaining columns line up.
pub fn format_trace(txs: &[Transaction]) -> String {
    let calls: Vec<String> = txs.iter().map(call_text).collect();
    let width = calls.iter().map(|c| c.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (i, (t, call)) in txs.iter().zip(&calls).enumerate() {
        out.push_str(&format!(
            "[{}] {:<width$}  msg.sender=address({})  msg.value={}  block={}\n",
            i + 1,
            call,
            t.sender,
            t.value,
            t.block
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("trace line {line}: {message}")]
pub struct TraceParseError {
    pub line: usize,
    pub message: String,
}

fn num(s: &str) -> Option<BigInt> {
    s.parse().ok()
}

fn parse_line(text: &str) -> Result<Transaction, String> {
    let mut words = text.split_whitespace();
    let idx = words.next().ok_or("empty line")?;
    if !(idx.starts_with('[') && idx.ends_with(']')) {
        return Err(format!("expected `[i]`, found `{idx}`"));
    }
    let call = words.next().ok_or("missing call")?;
    let open = call.find('(').ok_or("missing `(`")?;
    let inner = call[open + 1..].strip_suffix(')').ok_or("missing `)`")?;
    let name = &call[..open];
    let args = if inner.is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|a| match a {
                "true" => Ok(Value::Bool(true)),
                "false" => Ok(Value::Bool(false)),
                n => num(n).map(Value::Int).ok_or_else(|| format!("bad argument `{n}`")),
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    let mut sender = None;
    let mut value = None;
    let mut block = None;
    for w in words {
        if let Some(s) = w.strip_prefix("msg.sender=address(").and_then(|s| s.strip_suffix(')')) {
            sender = num(s);
        } else if let Some(s) = w.strip_prefix("msg.value=") {
            value = num(s);
        } else if let Some(s) = w.strip_prefix("block=") {
            block = num(s);
        } else {
            return Err(format!("unexpected `{w}`"));
        }
    }
    let kind = match name {
        CONSTRUCTOR => TxKind::Constructor,
        SELFDESTRUCT => TxKind::Selfdestruct,
        SKIP => TxKind::Skip,
        m => TxKind::Call(m.into()),
    };
    Ok(Transaction {
        kind,
        args,
        sender: sender.ok_or("missing msg.sender")?,
        value: value.ok_or("missing msg.value")?,
        block: block.ok_or("missing block")?,
    })
}

/// Parses the output of [`format_trace`]. Blank lines are ignored.
pub fn parse_trace(text: &str) -> Result<Vec<Transaction>, TraceParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_line(l).map_err(|message| TraceParseError { line: i + 1, message }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_matches_listing() {
        let t = alloc::vec![
            Transaction::constructor(alloc::vec![Value::int(2), Value::int(0), Value::int(2)], 4, 0, 0),
            Transaction::call("donate", alloc::vec![], 4, 1, 0),
            Transaction::selfdestruct(0, 1, 1),
        ];
        let text = format_trace(&t);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "[1] constructor(2,0,2)  msg.sender=address(4)  msg.value=0  block=0");
        assert_eq!(lines[1], "[2] donate()            msg.sender=address(4)  msg.value=1  block=0");
        assert_eq!(lines[2], "[3] selfdestruct()      msg.sender=address(0)  msg.value=1  block=1");
        assert_eq!(parse_trace(&text).unwrap(), t);
    }

    #[test]
    fn rejects_garbage() {
        assert_eq!(parse_trace("[1] f()  msg.value=0  block=0").unwrap_err().message, "missing msg.sender");
        assert!(parse_trace("f() x").is_err());
    }
}
