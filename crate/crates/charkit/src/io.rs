//! JSON input formats: group files and vector-action files.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::orbit::VectorAction;
use crate::perm::Permutation;

/// `group.json`: a named permutation group given by generator image lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn build(&self, cap: usize) -> Result<Arc<Group>> {
        let gens: Result<Vec<Permutation>> = self
            .generators
            .iter()
            .map(|images| {
                if images.len() != self.degree {
                    return Err(Error::InvalidPermutation(format!(
                        "generator of length {} in a group of degree {}",
                        images.len(),
                        self.degree
                    )));
                }
                Permutation::from_images(images)
            })
            .collect();
        Ok(Group::closure(self.degree, gens?, cap)?.with_name(&self.name))
    }
}

pub fn load_group_file(path: &Path, cap: usize) -> Result<Arc<Group>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    let file: GroupFile = serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("malformed group file: {e}")))?;
    file.build(cap)
}

pub fn load_action_file(path: &Path) -> Result<VectorAction> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("malformed action file: {e}")))
}
