use std::fmt;

use crate::encoding::{parse_tcl, parse_tcl_line, tcl_line, Entry, Tcl};
use crate::error::{Error, Result};
use crate::event::Event;
use crate::ltl::{parse_formula, Formula};

/// Payloads exchanged between enforcers during a round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Message {
    /// Whole log handed to the next evaluator (global exploration).
    TclTransfer(Tcl),
    /// The single entry kept by a local decision (local exploration).
    TclEntry(Event, Entry),
    /// Final log sent to everyone so each enforcer runs the same decision.
    FinalBroadcast(Tcl),
    /// Formula for the next timestamp, sent by the deciding enforcer.
    NextFormula(Formula),
}

impl Message {
    pub fn kind(&self) -> &'static str {
        match self {
            Message::TclTransfer(_) => "TCL",
            Message::TclEntry(..) => "ENTRY",
            Message::FinalBroadcast(_) => "FINAL",
            Message::NextFormula(_) => "NEXT",
        }
    }

    /// Number of log entries carried.
    pub fn entries(&self) -> usize {
        match self {
            Message::TclTransfer(t) | Message::FinalBroadcast(t) => t.len(),
            Message::TclEntry(..) => 1,
            Message::NextFormula(_) => 0,
        }
    }

    /// Parses the wire text produced by `Display`.
    pub fn parse(text: &str) -> Result<Message> {
        let (head, body) = text.split_once('\n').unwrap_or((text, ""));
        let format = |msg: String| Error::Format { line: 2, msg };
        match head.trim() {
            "TCL" => Ok(Message::TclTransfer(parse_tcl(body)?)),
            "FINAL" => Ok(Message::FinalBroadcast(parse_tcl(body)?)),
            "ENTRY" => {
                let (event, entry) = parse_tcl_line(body.trim_end()).map_err(format)?;
                Ok(Message::TclEntry(event, entry))
            }
            "NEXT" => Ok(Message::NextFormula(parse_formula(body.trim())?)),
            other => Err(Error::Format {
                line: 1,
                msg: format!("unknown message kind `{other}`"),
            }),
        }
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.kind())?;
        match self {
            Message::TclTransfer(t) | Message::FinalBroadcast(t) => write!(f, "{t}"),
            Message::TclEntry(event, entry) => writeln!(f, "{}", tcl_line(event, entry)),
            Message::NextFormula(phi) => writeln!(f, "{phi}"),
        }
    }
}
