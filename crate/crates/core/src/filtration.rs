//! Growing filtrations of a complex.
//!
//! A filtration is a sequence of simplices with nondecreasing integer levels.
//! The position of a simplex in the sequence is its simplex-wise clock; the
//! level is the coarser clock in which barcodes are reported.
//!
//! The skeleton filtration puts the simplices of dimension `t` at level `t`,
//! so the complex at level `t` is the `t`-skeleton and the empty complex is
//! the empty prefix. (Summing skeletons `S_1 … S_i` gives the same complexes
//! shifted by one, since skeletons are nested.)

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{Simplex, SimplicialComplex};
use crate::graph::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FiltrationKind {
    /// Level `t` adds the `t`-dimensional simplices.
    Skeleton,
    /// One simplex per level.
    Simplexwise,
    /// Anything else, e.g. read from a file.
    Custom,
}

impl fmt::Display for FiltrationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FiltrationKind::Skeleton => "skeleton",
            FiltrationKind::Simplexwise => "simplexwise",
            FiltrationKind::Custom => "custom",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredSimplex {
    pub simplex: Simplex,
    pub level: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    entries: Vec<FilteredSimplex>,
    level_count: usize,
    kind: FiltrationKind,
    exact_homology_dims: usize,
}

/// First problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("level drops from {previous} to {level} at position {position}")]
    LevelDecrease { position: usize, previous: usize, level: usize },
    #[error("{simplex} at position {position} appears twice (first at {first})")]
    Duplicate { simplex: Simplex, position: usize, first: usize },
    #[error("{simplex} at position {position} has face {face} missing from the filtration")]
    MissingFace { simplex: Simplex, position: usize, face: Simplex },
    #[error("{simplex} at position {position} precedes its face {face} at position {face_position}")]
    FaceAfterCoface { simplex: Simplex, position: usize, face: Simplex, face_position: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FiltrationParseError {
    pub line: usize,
    pub message: String,
}

impl Filtration {
    /// Wraps entries without checking them; see [`validate`].
    pub fn from_entries(entries: Vec<FilteredSimplex>, kind: FiltrationKind) -> Self {
        let level_count = entries.iter().map(|e| e.level + 1).max().unwrap_or(0);
        let exact_homology_dims = entries.iter().map(|e| e.simplex.dim() + 1).max().unwrap_or(0);
        Self { entries, level_count, kind, exact_homology_dims }
    }

    pub fn entries(&self) -> &[FilteredSimplex] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn level_count(&self) -> usize {
        self.level_count
    }

    pub fn kind(&self) -> FiltrationKind {
        self.kind
    }

    /// Homology dimensions `0..k` that the simplices determine exactly. A
    /// filtration of a capped complex cannot see the cycles its missing top
    /// simplices would fill, so the top dimension is excluded.
    pub fn exact_homology_dims(&self) -> usize {
        self.exact_homology_dims
    }

    pub fn level(&self, position: usize) -> usize {
        self.entries[position].level
    }

    pub fn dim(&self, position: usize) -> usize {
        self.entries[position].simplex.dim()
    }

    /// Simplices present at level `l`.
    pub fn prefix(&self, l: usize) -> impl Iterator<Item = &Simplex> {
        self.entries.iter().take_while(move |e| e.level <= l).map(|e| &e.simplex)
    }

    /// Per-dimension simplex counts of the complex at level `l`.
    pub fn face_counts_at(&self, l: usize) -> Vec<usize> {
        let mut counts = Vec::new();
        for s in self.prefix(l) {
            if counts.len() <= s.dim() {
                counts.resize(s.dim() + 1, 0);
            }
            counts[s.dim()] += 1;
        }
        counts
    }

    /// Export: a header line, then `level dim v0 v1 …` per simplex.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "#filtration {} levels {} exact_dims {}\n",
            self.kind, self.level_count, self.exact_homology_dims
        );
        for e in &self.entries {
            let _ = write!(out, "{} {}", e.level, e.simplex.dim());
            for v in e.simplex.vertices() {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FiltrationParseError> {
        let mut kind = FiltrationKind::Custom;
        let mut exact = None;
        let mut entries = Vec::new();
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let err = |message: String| FiltrationParseError { line, message };
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(header) = trimmed.strip_prefix("#filtration") {
                let words: Vec<&str> = header.split_whitespace().collect();
                kind = match words.first() {
                    Some(&"skeleton") => FiltrationKind::Skeleton,
                    Some(&"simplexwise") => FiltrationKind::Simplexwise,
                    _ => FiltrationKind::Custom,
                };
                if let Some(i) = words.iter().position(|&w| w == "exact_dims") {
                    let value = words.get(i + 1).ok_or_else(|| err("missing exact_dims".into()))?;
                    exact = Some(value.parse().map_err(|_| err(format!("bad exact_dims `{value}`")))?);
                }
                continue;
            }
            if trimmed.starts_with('#') {
                continue;
            }
            let numbers = trimmed
                .split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|_| err(format!("`{t}` is not a number"))))
                .collect::<Result<Vec<_>, _>>()?;
            if numbers.len() < 3 {
                return Err(err("expected `level dim v0 …`".into()));
            }
            let (level, dim) = (numbers[0] as usize, numbers[1] as usize);
            let vertices = numbers[2..]
                .iter()
                .map(|&v| Vertex::try_from(v).map_err(|_| err(format!("vertex {v} too large"))))
                .collect::<Result<Vec<_>, _>>()?;
            if vertices.len() != dim + 1 {
                return Err(err(format!("dim {dim} but {} vertices", vertices.len())));
            }
            let simplex = Simplex::new(vertices).map_err(|e| err(e.to_string()))?;
            entries.push(FilteredSimplex { simplex, level });
        }
        let mut filtration = Self::from_entries(entries, kind);
        if let Some(exact) = exact {
            filtration.exact_homology_dims = exact;
        }
        Ok(filtration)
    }
}

/// Level `t` holds exactly the `t`-simplices; `level_count = dim + 1`.
pub fn skeleton_filtration(k: &SimplicialComplex) -> Filtration {
    let entries = k
        .enumerate_simplices(usize::MAX)
        .into_iter()
        .map(|simplex| FilteredSimplex { level: simplex.dim(), simplex })
        .collect();
    Filtration {
        entries,
        level_count: k.dimension().map_or(0, |d| d + 1),
        kind: FiltrationKind::Skeleton,
        exact_homology_dims: k.exact_homology_dims(),
    }
}

/// One simplex per level in `(dimension, lexicographic)` order: the refinement
/// of [`skeleton_filtration`].
pub fn simplexwise_filtration(k: &SimplicialComplex) -> Filtration {
    let entries: Vec<FilteredSimplex> = k
        .enumerate_simplices(usize::MAX)
        .into_iter()
        .enumerate()
        .map(|(level, simplex)| FilteredSimplex { simplex, level })
        .collect();
    Filtration {
        level_count: entries.len(),
        entries,
        kind: FiltrationKind::Simplexwise,
        exact_homology_dims: k.exact_homology_dims(),
    }
}

/// Checks level monotonicity and that every face precedes its cofaces.
/// Checking codimension-one faces suffices: by induction each of them is
/// preceded by its own faces.
pub fn validate(f: &Filtration) -> Result<(), Violation> {
    let mut position_of: HashMap<&Simplex, usize> = HashMap::with_capacity(f.len());
    for (position, entry) in f.entries.iter().enumerate() {
        if let Some(&first) = position_of.get(&entry.simplex) {
            return Err(Violation::Duplicate { simplex: entry.simplex.clone(), position, first });
        }
        position_of.insert(&entry.simplex, position);
    }
    let mut previous = 0;
    for (position, entry) in f.entries.iter().enumerate() {
        if entry.level < previous {
            return Err(Violation::LevelDecrease { position, previous, level: entry.level });
        }
        previous = entry.level;
        for face in entry.simplex.facets() {
            match position_of.get(&face) {
                None => {
                    return Err(Violation::MissingFace {
                        simplex: entry.simplex.clone(),
                        position,
                        face,
                    })
                }
                Some(&face_position) if face_position > position => {
                    return Err(Violation::FaceAfterCoface {
                        simplex: entry.simplex.clone(),
                        position,
                        face,
                        face_position,
                    })
                }
                Some(_) => {}
            }
        }
    }
    Ok(())
}
