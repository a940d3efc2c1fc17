//! Canonical line format of a correction log:
//!
//! ```text
//! {a,c} -> dist=2 ; (present | future) ; (present | future)
//! ```
//!
//! Entries are sorted by `(distance, event)`. A present holding a top-level
//! `|`, `->` or `<->` is parenthesized so the first top-level ` | ` in a pair
//! always separates present from future.

use std::fmt::Write;

use super::{Entry, Tcl, Top, TopSet};
use crate::error::{Error, Result};
use crate::event::Event;
use crate::ltl::{parse_formula, Formula};

fn present_text(f: &Formula) -> String {
    match f {
        Formula::Or(..) | Formula::Implies(..) | Formula::Iff(..) => format!("({f})"),
        _ => f.to_string(),
    }
}

/// Canonical text of one entry.
pub fn tcl_line(event: &Event, entry: &Entry) -> String {
    let mut s = format!("{event} -> dist={}", entry.distance);
    for top in &entry.tops {
        let _ = write!(s, " ; ({} | {})", present_text(&top.present), top.future);
    }
    s
}

impl std::fmt::Display for Tcl {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (event, entry) in self.sorted_entries() {
            writeln!(f, "{}", tcl_line(event, entry))?;
        }
        Ok(())
    }
}

fn split_pair(text: &str) -> Option<(&str, &str)> {
    let inner = text.trim().strip_prefix('(')?.strip_suffix(')')?;
    let mut depth = 0i32;
    for (i, c) in inner.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '|' if depth == 0 => return Some((&inner[..i], &inner[i + 1..])),
            _ => {}
        }
    }
    None
}

/// Parses one canonical entry line.
pub fn parse_tcl_line(line: &str) -> std::result::Result<(Event, Entry), String> {
    let (event_text, rest) = line
        .split_once(" -> ")
        .ok_or_else(|| "expected `<event> -> dist=<n>`".to_string())?;
    let event: Event = event_text.parse()?;
    let mut parts = rest.split(" ; ");
    let dist_text = parts.next().unwrap_or_default().trim();
    let distance: usize = dist_text
        .strip_prefix("dist=")
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| format!("invalid distance `{dist_text}`"))?;
    let mut tops = TopSet::new();
    for pair in parts {
        let (present, future) =
            split_pair(pair).ok_or_else(|| format!("invalid obligation pair `{pair}`"))?;
        let present = parse_formula(present).map_err(|e| e.to_string())?;
        let future = parse_formula(future).map_err(|e| e.to_string())?;
        tops.insert(Top::new(present, future));
    }
    Ok((event, Entry { tops, distance }))
}

/// Parses a whole canonical log, one entry per nonempty line.
pub fn parse_tcl(text: &str) -> Result<Tcl> {
    let mut t = Tcl::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (event, entry) =
            parse_tcl_line(line).map_err(|msg| Error::Format { line: i + 1, msg })?;
        t.insert(event, entry.tops, entry.distance);
    }
    Ok(t)
}
