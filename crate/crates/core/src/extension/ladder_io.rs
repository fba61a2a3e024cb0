//! Ladder directories: `mother.alist`, `h_ext.alist`, `level_<l>.alist`,
//! `level_<l>.gen` and `manifest.json`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ExtensionError, ExtensionLadder, ExtensionLevel, ExtensionPlan};
use crate::gf2::{content_hash, load_alist, load_generator, save_alist, save_generator};
use crate::Rate;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub level: usize,
    pub rate: Rate,
    /// Rows and columns.
    pub dims: [usize; 2],
    pub alist: String,
    pub generator: String,
    pub hash: String,
    /// Hash of the level below (the mother for level 1).
    pub parent_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderManifest {
    pub plan: ExtensionPlan,
    pub mother: String,
    pub mother_hash: String,
    pub h_ext: String,
    pub h_ext_hash: String,
    pub levels: Vec<LevelEntry>,
    /// How the ladder was made (scheme, seeds, candidate metrics).
    #[serde(default)]
    pub provenance: serde_json::Value,
}

pub fn save_ladder(
    ladder: &ExtensionLadder,
    dir: impl AsRef<Path>,
    provenance: serde_json::Value,
) -> Result<LadderManifest, ExtensionError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    save_alist(&ladder.mother, dir.join("mother.alist"))?;
    save_alist(&ladder.h_ext, dir.join("h_ext.alist"))?;
    let mut parent_hash = content_hash(&ladder.mother);
    let mut levels = Vec::with_capacity(ladder.levels.len());
    for lvl in &ladder.levels {
        let alist = format!("level_{}.alist", lvl.level);
        let generator = format!("level_{}.gen", lvl.level);
        save_alist(&lvl.h, dir.join(&alist))?;
        save_generator(&lvl.g, dir.join(&generator))?;
        let hash = content_hash(&lvl.h);
        levels.push(LevelEntry {
            level: lvl.level,
            rate: lvl.rate(),
            dims: [lvl.h.num_rows(), lvl.h.num_cols()],
            alist,
            generator,
            hash: hash.clone(),
            parent_hash: std::mem::replace(&mut parent_hash, hash),
        });
    }
    let manifest = LadderManifest {
        plan: ladder.plan.clone(),
        mother: "mother.alist".into(),
        mother_hash: content_hash(&ladder.mother),
        h_ext: "h_ext.alist".into(),
        h_ext_hash: content_hash(&ladder.h_ext),
        levels,
        provenance,
    };
    std::fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)? + "\n",
    )?;
    Ok(manifest)
}

fn check_hash(what: &str, expected: &str, found: String) -> Result<(), ExtensionError> {
    if expected != found {
        return Err(ExtensionError::Inconsistent(format!(
            "{what}: hash {found} does not match manifest {expected}"
        )));
    }
    Ok(())
}

/// Reads a ladder directory, verifying every file against the manifest.
pub fn load_ladder(
    dir: impl AsRef<Path>,
) -> Result<(ExtensionLadder, LadderManifest), ExtensionError> {
    let dir = dir.as_ref();
    let manifest: LadderManifest =
        serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json"))?)?;
    let mother = load_alist(dir.join(&manifest.mother))?;
    check_hash(
        &manifest.mother,
        &manifest.mother_hash,
        content_hash(&mother),
    )?;
    let h_ext = load_alist(dir.join(&manifest.h_ext))?;
    check_hash(&manifest.h_ext, &manifest.h_ext_hash, content_hash(&h_ext))?;
    let mut parent = manifest.mother_hash.clone();
    let mut levels = Vec::with_capacity(manifest.levels.len());
    for entry in &manifest.levels {
        let h = load_alist(dir.join(&entry.alist))?;
        let hash = content_hash(&h);
        check_hash(&entry.alist, &entry.hash, hash.clone())?;
        if entry.parent_hash != parent {
            return Err(ExtensionError::Inconsistent(format!(
                "level {} does not follow its parent",
                entry.level
            )));
        }
        let g = load_generator(dir.join(&entry.generator))?;
        if g.n() != h.num_cols() {
            return Err(ExtensionError::Inconsistent(format!(
                "generator of level {} has the wrong length",
                entry.level
            )));
        }
        parent = hash;
        levels.push(ExtensionLevel {
            level: entry.level,
            h,
            g,
        });
    }
    let ladder = ExtensionLadder {
        plan: manifest.plan.clone(),
        mother,
        h_ext,
        levels,
    };
    Ok((ladder, manifest))
}
