//! Append-only event log, one JSON record per line, for rebuilding the
//! session store after a restart.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::session::SessionSpec;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "lowercase")]
pub enum Event {
    Create {
        id: String,
        #[serde(flatten)]
        spec: SessionSpec,
    },
    Move {
        id: String,
        #[serde(rename = "move")]
        mv: String,
    },
    End {
        id: String,
    },
    Delete {
        id: String,
    },
}

pub struct Journal {
    file: Mutex<File>,
}

impl Journal {
    /// Opens `path` for appending and returns the events already in it.
    pub fn open(path: &Path) -> io::Result<(Journal, Vec<Event>)> {
        let mut events = Vec::new();
        if path.exists() {
            for (n, line) in BufReader::new(File::open(path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let event = serde_json::from_str(&line).map_err(|e| {
                    io::Error::new(io::ErrorKind::InvalidData, format!("journal line {}: {e}", n + 1))
                })?;
                events.push(event);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok((Journal { file: Mutex::new(file) }, events))
    }

    pub fn append(&self, event: &Event) -> io::Result<()> {
        let mut line = serde_json::to_string(event)?;
        line.push('\n');
        let mut file = self.file.lock().unwrap();
        file.write_all(line.as_bytes())?;
        file.flush()
    }
}
