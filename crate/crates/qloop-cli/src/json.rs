//! Input file schemas and their conversion to core types.
//!
//! Quiver JSON is either a full matrix or an arrow list:
//!
//! ```json
//! {"n": 3, "b": [[0, 1, 0], [-1, 0, -1], [0, 1, 0]]}
//! {"n": 3, "arrows": [[1, 2], [3, 2]]}
//! ```
//!
//! Loop JSON wraps a quiver and a step list:
//!
//! ```json
//! {"quiver": {...}, "steps": [{"mutate": 2}, {"relabel": [2, 1]}]}
//! ```

use serde::Deserialize;

use qloop_core::{MutationLoop, Permutation, Quiver, Step};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuiverDoc {
    pub n: usize,
    #[serde(default)]
    pub b: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub arrows: Option<Vec<(usize, usize)>>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepDoc {
    Mutate(usize),
    Relabel(Vec<usize>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopDoc {
    pub quiver: QuiverDoc,
    pub steps: Vec<StepDoc>,
}

impl QuiverDoc {
    pub fn build(self) -> Result<Quiver, CliError> {
        let q = match (self.b, self.arrows) {
            (Some(rows), None) => {
                if rows.len() != self.n {
                    return Err(CliError::parse(format!(
                        "matrix has {} rows but n = {}",
                        rows.len(),
                        self.n
                    )));
                }
                Quiver::from_matrix(rows).map_err(CliError::parse)?
            }
            (None, Some(arrows)) => {
                Quiver::from_arrows(self.n, &arrows).map_err(CliError::parse)?
            }
            _ => {
                return Err(CliError::parse(
                    "quiver needs exactly one of \"b\" or \"arrows\"",
                ))
            }
        };
        Ok(q)
    }
}

impl StepDoc {
    fn build(self) -> Result<Step, CliError> {
        Ok(match self {
            StepDoc::Mutate(v) => Step::Mutate(v),
            StepDoc::Relabel(image) => {
                Step::Relabel(Permutation::from_one_line(image).map_err(CliError::parse)?)
            }
        })
    }
}

impl LoopDoc {
    pub fn build(self) -> Result<MutationLoop, CliError> {
        let q = self.quiver.build()?;
        let steps: Vec<Step> = self
            .steps
            .into_iter()
            .map(StepDoc::build)
            .collect::<Result<_, _>>()?;
        MutationLoop::new(q, steps).map_err(CliError::from_loop_error)
    }
}

pub fn read_loop_file(path: &std::path::Path) -> Result<MutationLoop, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let doc: LoopDoc = serde_json::from_str(&text)
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    doc.build()
}
