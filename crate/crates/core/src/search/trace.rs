//! Step-by-step evaluation events.

use crate::lexicon::{FlList, LemmaId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceEvent {
    Shift {
        start: u32,
    },
    ReadPosting {
        positions: [u32; 3],
        key: [(LemmaId, bool); 3],
    },
    Set {
        pos: u32,
        lemma: LemmaId,
        buffer: usize,
    },
    PopulateSource,
    Fetch {
        pos: u32,
        lemma: LemmaId,
    },
    Add {
        lemma: LemmaId,
        complete: bool,
    },
    BufferSwitch {
        start: u32,
    },
    Result {
        start: u32,
        end: u32,
    },
}

impl TraceEvent {
    pub fn render(&self, fl: &FlList) -> String {
        match self {
            TraceEvent::Shift { start } => format!("Shift Start={start}"),
            TraceEvent::ReadPosting { positions, key } => {
                let mut s = format!(
                    "Read posting ({}, {}, {}) key (",
                    positions[0], positions[1], positions[2]
                );
                for (i, (lemma, star)) in key.iter().enumerate() {
                    if i > 0 {
                        s.push_str(", ");
                    }
                    s.push_str(fl.lemma(*lemma));
                    if *star {
                        s.push('*');
                    }
                }
                s.push(')');
                s
            }
            TraceEvent::Set { pos, lemma, buffer } => {
                format!(
                    "Set (position {pos}, key {}), buffer {buffer}",
                    fl.lemma(*lemma)
                )
            }
            TraceEvent::PopulateSource => "Populate Source".to_string(),
            TraceEvent::Fetch { pos, lemma } => {
                format!("Fetch (position {pos}, key {})", fl.lemma(*lemma))
            }
            TraceEvent::Add { lemma, complete } => {
                let op = if *complete { "=" } else { "!=" };
                format!("Add (key {}) Count{op}Max", fl.lemma(*lemma))
            }
            TraceEvent::BufferSwitch { start } => format!("Buffer switch, Start={start}"),
            TraceEvent::Result { start, end } => format!("Result (from {start}, to {end})"),
        }
    }
}

/// Receives trace events. The unit type discards them.
pub trait TraceSink {
    fn enabled(&self) -> bool;
    fn record(&mut self, event: TraceEvent);
}

impl TraceSink for () {
    fn enabled(&self) -> bool {
        false
    }

    fn record(&mut self, _: TraceEvent) {}
}

impl TraceSink for Vec<TraceEvent> {
    fn enabled(&self) -> bool {
        true
    }

    fn record(&mut self, event: TraceEvent) {
        self.push(event);
    }
}
