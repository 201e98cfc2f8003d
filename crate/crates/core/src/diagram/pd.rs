//! Line-oriented PD text format.
//!
//! ```text
//! components 2
//! freeloops 0
//! arc 1 1
//! arc 2 1
//! arc 3 2
//! arc 4 2
//! X 1 4 2 3
//! X 4 1 3 2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. When `freeloops` is
//! absent it is taken to be the number of components without arcs.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{ArcId, DiagramError, LinkDiagram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PdError {
    #[error("line {line}: unknown directive `{word}`")]
    UnknownDirective { line: usize, word: String },
    #[error("line {line}: duplicate `{header}` header")]
    DuplicateHeader { line: usize, header: String },
    #[error("line {line}: arc {arc} declared twice")]
    DuplicateArc { line: usize, arc: ArcId },
    #[error("line {line}: `{directive}` expects {expected} values, found {found}")]
    BadArity {
        line: usize,
        directive: String,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: bad number `{token}`")]
    BadNumber { line: usize, token: String },
    #[error("missing `components` header")]
    MissingComponents,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

pub fn parse_pd(text: &str) -> Result<LinkDiagram, PdError> {
    let mut components: Option<usize> = None;
    let mut free_loops: Option<usize> = None;
    let mut arcs: BTreeMap<ArcId, usize> = BTreeMap::new();
    let mut tuples: Vec<[ArcId; 4]> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut words = trimmed.split_whitespace();
        let directive = words.next().expect("non-empty line");
        let values: Vec<&str> = words.collect();
        let expected = match directive {
            "components" | "freeloops" => 1,
            "arc" => 2,
            "X" => 4,
            other => {
                return Err(PdError::UnknownDirective {
                    line,
                    word: other.to_string(),
                })
            }
        };
        if values.len() != expected {
            return Err(PdError::BadArity {
                line,
                directive: directive.to_string(),
                expected,
                found: values.len(),
            });
        }
        let nums = values
            .iter()
            .map(|t| {
                t.parse::<u32>().map_err(|_| PdError::BadNumber {
                    line,
                    token: t.to_string(),
                })
            })
            .collect::<Result<Vec<u32>, PdError>>()?;
        match directive {
            "components" | "freeloops" => {
                let slot = if directive == "components" {
                    &mut components
                } else {
                    &mut free_loops
                };
                if slot.is_some() {
                    return Err(PdError::DuplicateHeader {
                        line,
                        header: directive.to_string(),
                    });
                }
                *slot = Some(nums[0] as usize);
            }
            "arc" => {
                if arcs.insert(nums[0], nums[1] as usize).is_some() {
                    return Err(PdError::DuplicateArc { line, arc: nums[0] });
                }
            }
            _ => tuples.push([nums[0], nums[1], nums[2], nums[3]]),
        }
    }

    let n = components.ok_or(PdError::MissingComponents)?;
    let free_loops = match free_loops {
        Some(k) => k,
        None => {
            let labelled: BTreeSet<usize> = arcs.values().copied().collect();
            n.saturating_sub(labelled.len())
        }
    };
    Ok(LinkDiagram::from_pd(&tuples, arcs, n, free_loops)?)
}

/// Writes the canonical form of `d`.
pub(crate) fn write_pd(d: &LinkDiagram) -> String {
    let d = d.canonicalize();
    let mut out = format!(
        "components {}\nfreeloops {}\n",
        d.n_components, d.free_loops
    );
    for (arc, comp) in &d.arc_component {
        out.push_str(&format!("arc {arc} {comp}\n"));
    }
    for c in &d.crossings {
        let [a, b, x, y] = c.arcs;
        out.push_str(&format!("X {a} {b} {x} {y}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = "components 2\narc 1 1\narc 2 1\narc 3 2\narc 4 2\nX 1 4 2 3\nX 4 1 3 2\n";

    #[test]
    fn parses_hopf_with_inferred_free_loops() {
        let d = parse_pd(HOPF).unwrap();
        assert_eq!(d.free_loops(), 0);
        assert_eq!(d.linking_number(1, 2), Ok(1));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = format!("# hopf\n\n{HOPF}\n# end\n");
        assert_eq!(parse_pd(&text).unwrap(), parse_pd(HOPF).unwrap());
    }

    #[test]
    fn trivial_link_needs_only_the_header() {
        let d = parse_pd("components 3\n").unwrap();
        assert_eq!(d, LinkDiagram::trivial(3));
        assert_eq!(d.to_pd_string(), "components 3\nfreeloops 3\n");
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            parse_pd("components 1\ncomponents 1\n"),
            Err(PdError::DuplicateHeader { line: 2, .. })
        ));
        assert!(matches!(
            parse_pd("components 1\nknot 3\n"),
            Err(PdError::UnknownDirective { line: 2, .. })
        ));
        assert!(matches!(
            parse_pd("components 1\nX 1 2 3\n"),
            Err(PdError::BadArity { found: 3, .. })
        ));
        assert!(matches!(
            parse_pd("components x\n"),
            Err(PdError::BadNumber { .. })
        ));
        assert!(matches!(
            parse_pd("components 1\narc 1 1\narc 1 1\n"),
            Err(PdError::DuplicateArc { arc: 1, .. })
        ));
        assert_eq!(parse_pd("arc 1 1\n"), Err(PdError::MissingComponents));
        assert!(matches!(
            parse_pd("components 2\nfreeloops 1\narc 1 1\narc 2 1\narc 3 2\narc 4 2\nX 1 4 2 3\nX 4 1 3 2\n"),
            Err(PdError::Diagram(DiagramError::ComponentCount { .. }))
        ));
    }

    #[test]
    fn write_then_parse_is_canonical() {
        let d = parse_pd(HOPF).unwrap();
        let text = d.to_pd_string();
        let back = parse_pd(&text).unwrap();
        assert_eq!(back, d.canonicalize());
        assert_eq!(back.to_pd_string(), text);
    }
}
