//! Open-channel share bundles:
//!
//! ```text
//! share-bundle participant=2 k=3
//! w1 x1 x2^-1 x3
//! w2 x2 x2 x1
//! w3 x3^-1 x1
//! ```

use std::fmt::Write;

use super::WordColumn;
use crate::error::{Error, Result};
use crate::freegroup::Word;

pub fn format_bundle(wc: &WordColumn) -> String {
    let mut out = format!(
        "share-bundle participant={} k={}\n",
        wc.participant,
        wc.width()
    );
    for (i, w) in wc.words.iter().enumerate() {
        let _ = writeln!(out, "w{} {w}", i + 1);
    }
    out
}

fn header_field(token: Option<&str>, key: &str) -> Result<usize> {
    token
        .and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::parse(1, format!("expected `{key}=<number>` in the bundle header")))
}

pub fn parse_bundle(text: &str) -> Result<WordColumn> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty share bundle"))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("share-bundle") {
        return Err(Error::parse(1, "expected a `share-bundle` header"));
    }
    let participant = header_field(tokens.next(), "participant")?;
    let k = header_field(tokens.next(), "k")?;
    if participant == 0 {
        return Err(Error::parse(1, "participants are numbered from 1"));
    }
    let mut words = Vec::with_capacity(k);
    for (line, body) in lines {
        let (tag, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let expected = format!("w{}", words.len() + 1);
        if tag != expected {
            return Err(Error::parse(
                line,
                format!("expected `{expected}`, found `{tag}`"),
            ));
        }
        let w: Word = rest
            .parse()
            .map_err(|e: Error| Error::parse(line, e.to_string()))?;
        words.push(w);
    }
    if words.len() != k {
        return Err(Error::WidthMismatch {
            expected: k,
            got: words.len(),
        });
    }
    Ok(WordColumn { participant, words })
}
