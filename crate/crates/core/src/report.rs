//! Pass/fail records returned by the verifiers.

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Free-form findings, one line each.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Report {
            name: name.into(),
            max_residual: 0.0,
            tolerance,
            pass: true,
            notes: Vec::new(),
        }
    }

    /// Folds one residual into the report.
    pub fn record(&mut self, residual: f64) {
        if residual.is_nan() || residual > self.max_residual {
            self.max_residual = residual;
        }
        if residual.is_nan() || residual > self.tolerance {
            self.pass = false;
        }
    }

    pub fn fail(&mut self, note: impl Into<String>) {
        self.pass = false;
        self.notes.push(note.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// Merges a sub-report, keeping the worst residual.
    pub fn absorb(&mut self, other: &Report) {
        if other.max_residual > self.max_residual {
            self.max_residual = other.max_residual;
        }
        self.pass &= other.pass;
        for n in &other.notes {
            self.notes.push(alloc::format!("{}: {}", other.name, n));
        }
    }
}
