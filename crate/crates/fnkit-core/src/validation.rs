//! Shared validation-report types used by every model checker in the crate.
//!
//! Validators never fail: they return a report of findings. A model is valid
//! iff the report carries no error-severity finding.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Severity of a single finding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => write!(f, "error"),
            Severity::Warning => write!(f, "warning"),
        }
    }
}

/// One validation finding, anchored to a JSON-style path into the document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    /// Dotted path into the offending document, e.g. `InterfaceData[2].Datatype.Min`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.severity, self.path, self.message)
    }
}

/// Ordered list of findings produced by one validation pass.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn error(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.findings.push(Finding {
            severity: Severity::Error,
            path: path.into(),
            message: message.into(),
        });
    }

    pub fn warning(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.findings.push(Finding {
            severity: Severity::Warning,
            path: path.into(),
            message: message.into(),
        });
    }

    /// A report is valid iff it carries no error-severity finding.
    pub fn is_valid(&self) -> bool {
        !self
            .findings
            .iter()
            .any(|f| f.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.findings.extend(other.findings);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_with_only_warnings_is_valid() {
        let mut report = ValidationReport::new();
        report.warning("A", "suspicious");
        assert!(report.is_valid());
        report.error("B", "broken");
        assert!(!report.is_valid());
        assert_eq!(report.errors().count(), 1);
    }

    #[test]
    fn finding_renders_as_severity_path_message() {
        let f = Finding {
            severity: Severity::Error,
            path: "InterfaceData[0].Name".into(),
            message: "empty segment".into(),
        };
        assert_eq!(f.to_string(), "error InterfaceData[0].Name empty segment");
    }
}
