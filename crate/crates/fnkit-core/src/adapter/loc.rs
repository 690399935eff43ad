//! Line-of-code accounting for generated artifacts.

use serde::{Deserialize, Serialize};

use super::{FileOrigin, GeneratedArtifact};

/// Generated-versus-manual split of an artifact's code lines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub struct LocReport {
    pub generated_loc: usize,
    pub manual_loc: usize,
    pub fraction_generated: f64,
}

/// Count non-blank, non-comment lines per file origin.
pub fn loc_report(artifact: &GeneratedArtifact) -> LocReport {
    let mut generated = 0;
    let mut manual = 0;
    for file in &artifact.files {
        let lines = count_code_lines(&file.text);
        match file.origin {
            FileOrigin::Generated => generated += lines,
            FileOrigin::ManualSlot => manual += lines,
        }
    }
    LocReport {
        generated_loc: generated,
        manual_loc: manual,
        fraction_generated: if generated + manual == 0 {
            1.0
        } else {
            generated as f64 / (generated + manual) as f64
        },
    }
}

/// C/C++-style counting: blank lines, `//` lines, and lines living inside
/// `/* */` blocks do not count.
fn count_code_lines(text: &str) -> usize {
    let mut count = 0;
    let mut in_block_comment = false;
    for line in text.lines() {
        let mut code = false;
        let mut rest = line.trim();
        while !rest.is_empty() {
            if in_block_comment {
                match rest.find("*/") {
                    Some(end) => {
                        in_block_comment = false;
                        rest = rest[end + 2..].trim_start();
                    }
                    None => break,
                }
            } else if let Some(stripped) = rest.strip_prefix("//") {
                let _ = stripped;
                break;
            } else if let Some(start) = rest.find("/*") {
                if rest[..start].trim().is_empty() {
                    in_block_comment = true;
                    rest = rest[start + 2..].trim_start();
                } else {
                    code = true;
                    break;
                }
            } else {
                code = true;
                break;
            }
        }
        if code {
            count += 1;
        }
    }
    count
}
