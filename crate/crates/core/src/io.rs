//! File formats: Cayley-table group files, variety presentation files, and
//! input fingerprints for reproducible reports.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::words::{parse_word, VarietyPresentation, Word};

/// On-disk Cayley-table format: `{order, table (row-major), labels?,
/// generators?}`. The loader validates all group axioms and re-indexes so
/// the identity becomes element 0.
#[derive(Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_string(path: &Path, data: &str) -> Result<()> {
    std::fs::write(path, data).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn group_from_file_struct(path_for_errors: &str, file: GroupFile) -> Result<FiniteGroup> {
    let GroupFile {
        order,
        mut table,
        mut labels,
        mut generators,
    } = file;
    if order == 0 || table.len() != order * order {
        return Err(Error::Malformed {
            path: path_for_errors.into(),
            message: format!(
                "table has {} entries for declared order {}",
                table.len(),
                order
            ),
        });
    }
    for &v in &table {
        if v as usize >= order {
            return Err(Error::Malformed {
                path: path_for_errors.into(),
                message: format!("table entry {v} out of range"),
            });
        }
    }
    // locate a two-sided identity and re-index it to 0 if necessary
    let identity = (0..order).find(|&e| {
        (0..order).all(|a| table[e * order + a] as usize == a && table[a * order + e] as usize == a)
    });
    let Some(e) = identity else {
        return Err(Error::NotAGroup {
            axiom: "identity".into(),
            witness: "no two-sided identity element".into(),
        });
    };
    if e != 0 {
        // swap indices 0 and e throughout
        let swap = |x: usize| {
            if x == 0 {
                e
            } else if x == e {
                0
            } else {
                x
            }
        };
        let mut new_table = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                new_table[a * order + b] =
                    swap(table[swap(a) * order + swap(b)] as usize) as u32;
            }
        }
        table = new_table;
        if let Some(ref mut l) = labels {
            l.swap(0, e);
        }
        if let Some(ref mut g) = generators {
            for x in g.iter_mut() {
                *x = swap(*x);
            }
        }
    }
    FiniteGroup::from_table(order, table, labels, generators)
}

pub fn load_group(path: &Path) -> Result<FiniteGroup> {
    let text = read_to_string(path)?;
    let file: GroupFile = serde_json::from_str(&text).map_err(|e| Error::Malformed {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    group_from_file_struct(&path.display().to_string(), file)
}

pub fn save_group(path: &Path, g: &FiniteGroup) -> Result<()> {
    let file = GroupFile {
        order: g.order(),
        table: g.table().to_vec(),
        labels: g.labels.clone(),
        generators: g.generators.clone(),
    };
    write_string(path, &serde_json::to_string(&file).unwrap())
}

/// On-disk variety format: either a law basis
/// `{name, laws: ["[x1,x2]", "x1^3"], exponent?, contained_in?}` or a
/// product `{name, product: [ref, ...]}` where each ref is an inline
/// presentation or a path (resolved relative to the referencing file).
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum VarietyFile {
    Basis {
        name: String,
        laws: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exponent: Option<u64>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        contained_in: Vec<String>,
    },
    Product {
        name: String,
        product: Vec<VarietyRef>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum VarietyRef {
    Path(String),
    Inline(Box<VarietyFile>),
}

fn variety_from_file_struct(
    file: VarietyFile,
    base_dir: &Path,
    depth: usize,
) -> Result<VarietyPresentation> {
    if depth > 16 {
        return Err(Error::Malformed {
            path: base_dir.display().to_string(),
            message: "variety references nested too deeply".into(),
        });
    }
    match file {
        VarietyFile::Basis {
            name,
            laws,
            exponent,
            contained_in,
        } => {
            let laws: Result<Vec<Word>> = laws.iter().map(|s| parse_word(s)).collect();
            let v = VarietyPresentation::Basis {
                name,
                laws: laws?,
                declared_exponent: exponent,
                contained_in,
            };
            v.validate()?;
            Ok(v)
        }
        VarietyFile::Product { name, product } => {
            let mut factors = Vec::new();
            for r in product {
                factors.push(match r {
                    VarietyRef::Inline(inner) => {
                        variety_from_file_struct(*inner, base_dir, depth + 1)?
                    }
                    VarietyRef::Path(p) => load_variety(&base_dir.join(p))?,
                });
            }
            let v = VarietyPresentation::Product { name, factors };
            v.validate()?;
            Ok(v)
        }
    }
}

pub fn load_variety(path: &Path) -> Result<VarietyPresentation> {
    let text = read_to_string(path)?;
    let file: VarietyFile = serde_json::from_str(&text).map_err(|e| Error::Malformed {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let base_dir = path.parent().unwrap_or(Path::new("."));
    variety_from_file_struct(file, base_dir, 0)
}

pub fn save_variety(path: &Path, v: &VarietyPresentation) -> Result<()> {
    fn to_file(v: &VarietyPresentation) -> VarietyFile {
        match v {
            VarietyPresentation::Basis {
                name,
                laws,
                declared_exponent,
                contained_in,
            } => VarietyFile::Basis {
                name: name.clone(),
                laws: laws.iter().map(|w| w.to_string()).collect(),
                exponent: *declared_exponent,
                contained_in: contained_in.clone(),
            },
            VarietyPresentation::Product { name, factors } => VarietyFile::Product {
                name: name.clone(),
                product: factors
                    .iter()
                    .map(|f| VarietyRef::Inline(Box::new(to_file(f))))
                    .collect(),
            },
        }
    }
    write_string(path, &serde_json::to_string_pretty(&to_file(v)).unwrap())
}

/// SHA-256 of a file's bytes, for embedding in reports.
pub fn fingerprint_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}
