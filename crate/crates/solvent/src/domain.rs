//! The `--oracle-domain` syntax: comma-separated `key=value` pairs.
//!
//! `values=0..3` and `addresses=0..5` are inclusive ranges or `:`-separated
//! lists, `blocks=0:1:1000` lists block advances, `max=N` caps the search.
//! Omitted keys keep their defaults.

use num_bigint::BigInt;
use solvent_core::oracle::FiniteDomains;

fn numbers(key: &str, v: &str) -> Result<Vec<BigInt>, String> {
    let bad = |s: &str| format!("{key}: `{s}` is not a non-negative integer");
    let num = |s: &str| s.trim().parse::<BigInt>().ok().filter(|n| n.sign() != num_bigint::Sign::Minus).ok_or_else(|| bad(s));
    let out: Vec<BigInt> = if let Some((lo, hi)) = v.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi {
            return Err(format!("{key}: empty range {v}"));
        }
        let mut out = Vec::new();
        let mut i = lo;
        while i <= hi {
            out.push(i.clone());
            i += 1;
            if out.len() > 10_000 {
                return Err(format!("{key}: range {v} is too large"));
            }
        }
        out
    } else {
        v.split(':').map(num).collect::<Result<_, _>>()?
    };
    if out.is_empty() {
        return Err(format!("{key}: empty domain"));
    }
    Ok(out)
}

pub fn parse_domain(spec: &str) -> Result<FiniteDomains, String> {
    let mut d = FiniteDomains::default();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, v) = part.split_once('=').ok_or_else(|| format!("expected key=value, found `{part}`"))?;
        match key.trim() {
            "values" => d.values = numbers(key, v)?,
            "addresses" => d.addresses = numbers(key, v)?,
            "blocks" => d.block_offsets = numbers(key, v)?,
            "max" => d.max_traces = v.trim().parse().map_err(|_| format!("max: `{v}` is not a count"))?,
            other => return Err(format!("unknown oracle domain key `{other}`")),
        }
    }
    Ok(d)
}
