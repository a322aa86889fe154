//! Adapter for Algorithms running as child processes.
//!
//! Wire protocol, newline-delimited JSON over the child's stdin/stdout: the first line the
//! harness writes is the transcript header; then one request per round (the transcript move
//! without its colors), each answered by one line `{"color": <nonnegative integer>}`.
//! Closing stdin ends the game.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use crate::algorithms::{Algorithm, GraphAlgorithm, GraphView};
use crate::error::{Error, Result};
use crate::game::{ColoringState, Move};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

pub struct ExternalAlgorithm {
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<std::io::Result<String>>,
    timeout: Duration,
}

/// The JSON request line for a move: everything but the colors.
pub fn request_line(mv: &Move) -> String {
    let mut v = serde_json::to_value(mv).expect("move serializes");
    if let Some(obj) = v.as_object_mut() {
        obj.remove("algorithm_color");
        obj.remove("presenter_color");
    }
    v.to_string()
}

/// Parses `{"color": n}` with n a nonnegative integer.
pub fn parse_response(line: &str) -> Result<usize> {
    let v: serde_json::Value =
        serde_json::from_str(line.trim()).map_err(|e| Error::Protocol(format!("bad response {line:?}: {e}")))?;
    v.get("color")
        .and_then(serde_json::Value::as_u64)
        .map(|c| c as usize)
        .ok_or_else(|| Error::Protocol(format!("response {line:?} lacks a nonnegative integer color")))
}

impl ExternalAlgorithm {
    /// Starts `command` through the shell and sends the header line.
    pub fn spawn(command: &str, header_line: &str) -> Result<Self> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()?;
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        let mut ext = Self {
            stdin: child.stdin.take(),
            child,
            lines: rx,
            timeout: DEFAULT_TIMEOUT,
        };
        ext.send(header_line)?;
        Ok(ext)
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    fn send(&mut self, line: &str) -> Result<()> {
        let stdin = self
            .stdin
            .as_mut()
            .ok_or_else(|| Error::Protocol("input already closed".into()))?;
        writeln!(stdin, "{line}")
            .and_then(|_| stdin.flush())
            .map_err(|e| Error::Protocol(format!("cannot write to algorithm: {e}")))
    }

    /// One request/response exchange.
    pub fn step(&mut self, mv: &Move) -> Result<usize> {
        self.send(&request_line(mv))?;
        match self.lines.recv_timeout(self.timeout) {
            Ok(Ok(line)) => parse_response(&line),
            Ok(Err(e)) => Err(Error::Protocol(format!("read failed: {e}"))),
            Err(RecvTimeoutError::Timeout) => Err(Error::Timeout(self.timeout)),
            Err(RecvTimeoutError::Disconnected) => Err(Error::Protocol("algorithm closed its output".into())),
        }
    }
}

impl Algorithm for ExternalAlgorithm {
    fn choose(&mut self, _state: &ColoringState, request: &Move) -> Result<usize> {
        self.step(request)
    }
}

impl GraphAlgorithm for ExternalAlgorithm {
    fn choose(&mut self, _view: &GraphView<'_>, request: &Move) -> Result<usize> {
        self.step(request)
    }
}

impl Drop for ExternalAlgorithm {
    fn drop(&mut self) {
        self.stdin.take();
        for _ in 0..20 {
            if let Ok(Some(_)) = self.child.try_wait() {
                return;
            }
            thread::sleep(Duration::from_millis(10));
        }
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}
