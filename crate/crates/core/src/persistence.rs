//! Boundary matrices over GF(2), column reduction and barcodes.
//!
//! Columns and rows are filtration positions. Reducing the boundary matrix
//! left to right pairs each negative simplex (nonzero reduced column) with the
//! positive simplex at its lowest row; positive simplices that are never
//! paired carry essential classes. The pairing does not depend on the order in
//! which column additions are carried out, which is what lets
//! [`Reduction::Twist`] skip work.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::Simplex;
use crate::filtration::{Filtration, FiltrationKind};

const NONE: usize = usize::MAX;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PersistenceError {
    #[error("face {face} of {simplex} is not in the filtration")]
    FaceNotFound { simplex: Simplex, face: Simplex },
    #[error("level {level} outside 0..{level_count}")]
    LevelOutOfRange { level: usize, level_count: usize },
}

/// Sparse GF(2) boundary matrix in compressed-column form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatrix {
    offsets: Vec<usize>,
    rows: Vec<usize>,
    dims: Vec<usize>,
}

impl BoundaryMatrix {
    /// Builds a matrix from explicit columns (sorted row indices per column).
    pub fn from_columns(columns: Vec<Vec<usize>>, dims: Vec<usize>) -> Self {
        assert_eq!(columns.len(), dims.len());
        let mut offsets = Vec::with_capacity(columns.len() + 1);
        let mut rows = Vec::new();
        offsets.push(0);
        for mut column in columns {
            column.sort_unstable();
            rows.extend(column);
            offsets.push(rows.len());
        }
        Self { offsets, rows, dims }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Row indices of column `j`, ascending.
    pub fn column(&self, j: usize) -> &[usize] {
        &self.rows[self.offsets[j]..self.offsets[j + 1]]
    }

    pub fn dim(&self, j: usize) -> usize {
        self.dims[j]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
}

/// Boundary matrix of `f`: column `j` lists the positions of the facets of
/// the simplex at position `j`.
pub fn boundary_matrix(f: &Filtration) -> Result<BoundaryMatrix, PersistenceError> {
    let entries = f.entries();
    let top = entries.iter().map(|e| e.simplex.dim()).max().unwrap_or(0);
    // per dimension, positions sorted by simplex
    let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
    for (position, entry) in entries.iter().enumerate() {
        by_dim[entry.simplex.dim()].push(position);
    }
    for positions in &mut by_dim {
        if !positions.windows(2).all(|w| entries[w[0]].simplex < entries[w[1]].simplex) {
            positions.sort_unstable_by(|&a, &b| entries[a].simplex.cmp(&entries[b].simplex));
        }
    }
    let find = |face: &Simplex| -> Option<usize> {
        let positions = &by_dim[face.dim()];
        positions
            .binary_search_by(|&p| entries[p].simplex.cmp(face))
            .ok()
            .map(|i| positions[i])
    };

    let mut offsets = Vec::with_capacity(entries.len() + 1);
    let mut rows = Vec::new();
    let mut dims = Vec::with_capacity(entries.len());
    offsets.push(0);
    for entry in entries {
        let start = rows.len();
        for face in entry.simplex.facets() {
            match find(&face) {
                Some(p) => rows.push(p),
                None => {
                    return Err(PersistenceError::FaceNotFound { simplex: entry.simplex.clone(), face })
                }
            }
        }
        rows[start..].sort_unstable();
        offsets.push(rows.len());
        dims.push(entry.simplex.dim());
    }
    Ok(BoundaryMatrix { offsets, rows, dims })
}

/// Column-reduction schedule. Both produce the same pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    /// All columns left to right.
    Standard,
    /// Dimensions from the top down, each left to right; a column whose
    /// simplex is already known to be positive is zeroed without reduction.
    #[default]
    Twist,
}

/// Births and deaths in filtration positions.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PersistencePairing {
    /// `(birth, death)` with `birth < death`, sorted by birth.
    pub pairs: Vec<(usize, usize)>,
    /// Positions carrying essential classes, ascending.
    pub unpaired: Vec<usize>,
}

pub fn reduce(m: &BoundaryMatrix) -> PersistencePairing {
    reduce_with(m, Reduction::default())
}

pub fn reduce_with(m: &BoundaryMatrix, schedule: Reduction) -> PersistencePairing {
    let n = m.len();
    let mut reducer = Reducer::new(n);
    match schedule {
        Reduction::Standard => {
            for j in 0..n {
                reducer.reduce_column(m, j);
            }
        }
        Reduction::Twist => {
            let top = m.dims.iter().copied().max().unwrap_or(0);
            let mut by_dim: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
            for j in 0..n {
                by_dim[m.dim(j)].push(j);
            }
            let mut cleared = vec![false; n];
            for columns in by_dim.iter().skip(1).rev() {
                for &j in columns {
                    if cleared[j] {
                        continue;
                    }
                    if let Some(low) = reducer.reduce_column(m, j) {
                        cleared[low] = true;
                    }
                }
            }
        }
    }
    reducer.into_pairing()
}

struct Reducer {
    // row -> column whose reduced low it is
    pivot_of_row: Vec<usize>,
    reduced: Vec<Vec<usize>>,
    scratch: Vec<usize>,
}

impl Reducer {
    fn new(n: usize) -> Self {
        Self { pivot_of_row: vec![NONE; n], reduced: vec![Vec::new(); n], scratch: Vec::new() }
    }

    fn reduce_column(&mut self, m: &BoundaryMatrix, j: usize) -> Option<usize> {
        let mut column = m.column(j).to_vec();
        while let Some(&low) = column.last() {
            let other = self.pivot_of_row[low];
            if other == NONE {
                break;
            }
            symmetric_difference(&column, &self.reduced[other], &mut self.scratch);
            std::mem::swap(&mut column, &mut self.scratch);
        }
        let low = *column.last()?;
        self.pivot_of_row[low] = j;
        self.reduced[j] = column;
        Some(low)
    }

    fn into_pairing(self) -> PersistencePairing {
        let n = self.pivot_of_row.len();
        let mut pairs = Vec::new();
        let mut paired = vec![false; n];
        for (row, &column) in self.pivot_of_row.iter().enumerate() {
            if column != NONE {
                pairs.push((row, column));
                paired[row] = true;
                paired[column] = true;
            }
        }
        let unpaired = (0..n).filter(|&i| !paired[i]).collect();
        PersistencePairing { pairs, unpaired }
    }
}

fn symmetric_difference(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

/// A homology class's lifetime `[birth, death)` in filtration levels, plus
/// the positions of its creator and annihilator simplices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub dim: usize,
    pub birth: usize,
    /// `None` for essential classes.
    pub death: Option<usize>,
    pub birth_position: usize,
    pub death_position: Option<usize>,
}

impl Interval {
    pub fn is_infinite(&self) -> bool {
        self.death.is_none()
    }

    /// Born and killed at the same level; invisible in ranks and plots.
    pub fn is_zero_length(&self) -> bool {
        self.death == Some(self.birth)
    }

    /// `birth <= level < death`.
    pub fn contains(&self, level: usize) -> bool {
        self.birth <= level && self.death.is_none_or(|d| level < d)
    }

    /// Length in levels; `None` when infinite.
    pub fn length(&self) -> Option<usize> {
        self.death.map(|d| d - self.birth)
    }

    /// Persistence in the simplex-wise clock: `j - i - 1` for a class created
    /// at position `i` and killed at position `j`.
    pub fn position_persistence(&self) -> Option<usize> {
        self.death_position.map(|j| j - self.birth_position - 1)
    }

    fn sort_key(&self) -> (usize, usize, usize, usize) {
        (self.dim, self.birth, self.death.unwrap_or(usize::MAX), self.birth_position)
    }
}

/// What the levels of a barcode mean and where it came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarcodeMeta {
    pub level_count: usize,
    pub filtration: FiltrationKind,
    /// Betti vectors have this many entries: dimensions `0..homology_dims`.
    pub homology_dims: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Barcode {
    /// Sorted by `(dim, birth, death, birth_position)`, infinite deaths last.
    pub intervals: Vec<Interval>,
    pub meta: BarcodeMeta,
}

impl Barcode {
    pub fn new(mut intervals: Vec<Interval>, meta: BarcodeMeta) -> Self {
        intervals.sort_by_key(Interval::sort_key);
        Self { intervals, meta }
    }

    pub fn of_dim(&self, dim: usize) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(move |i| i.dim == dim)
    }

    /// Intervals that show up in plots and ranks.
    pub fn visible(&self) -> impl Iterator<Item = &Interval> {
        self.intervals.iter().filter(|i| !i.is_zero_length())
    }

    /// Number of essential classes per dimension.
    pub fn infinite_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.meta.homology_dims];
        for i in self.intervals.iter().filter(|i| i.is_infinite()) {
            counts[i.dim] += 1;
        }
        counts
    }

    /// Highest dimension with an essential class.
    pub fn max_infinite_dim(&self) -> Option<usize> {
        self.intervals.iter().filter(|i| i.is_infinite()).map(|i| i.dim).max()
    }
}

/// Turns a pairing of `f` into level intervals. Classes in dimensions that
/// `f` cannot resolve exactly (the top dimension of a capped complex) are
/// dropped.
pub fn intervals(pairing: &PersistencePairing, f: &Filtration) -> Barcode {
    let exact = f.exact_homology_dims();
    let mut out = Vec::with_capacity(pairing.pairs.len() + pairing.unpaired.len());
    for &(i, j) in &pairing.pairs {
        if f.dim(i) < exact {
            out.push(Interval {
                dim: f.dim(i),
                birth: f.level(i),
                death: Some(f.level(j)),
                birth_position: i,
                death_position: Some(j),
            });
        }
    }
    for &i in &pairing.unpaired {
        if f.dim(i) < exact {
            out.push(Interval {
                dim: f.dim(i),
                birth: f.level(i),
                death: None,
                birth_position: i,
                death_position: None,
            });
        }
    }
    let meta = BarcodeMeta {
        level_count: f.level_count(),
        filtration: f.kind(),
        homology_dims: exact,
        complex: None,
        config: None,
    };
    Barcode::new(out, meta)
}

/// Boundary matrix, reduction and interval extraction in one call.
pub fn barcode(f: &Filtration) -> Result<Barcode, PersistenceError> {
    let m = boundary_matrix(f)?;
    Ok(intervals(&reduce(&m), f))
}

fn check_level(b: &Barcode, level: usize) -> Result<(), PersistenceError> {
    if level < b.meta.level_count {
        Ok(())
    } else {
        Err(PersistenceError::LevelOutOfRange { level, level_count: b.meta.level_count })
    }
}

/// `β_k` at level `l`: the number of `k`-intervals with `birth <= l < death`.
pub fn betti_at(b: &Barcode, l: usize) -> Result<Vec<usize>, PersistenceError> {
    persistent_betti(b, l, 0)
}

/// `β_k^{l,p}`: the number of `k`-intervals born at or before `l` that are
/// still alive at `l + p`.
pub fn persistent_betti(b: &Barcode, l: usize, p: usize) -> Result<Vec<usize>, PersistenceError> {
    let last = l.checked_add(p).ok_or(PersistenceError::LevelOutOfRange {
        level: usize::MAX,
        level_count: b.meta.level_count,
    })?;
    check_level(b, last)?;
    let mut counts = vec![0; b.meta.homology_dims];
    for i in &b.intervals {
        if i.birth <= l && i.death.is_none_or(|d| d > last) {
            counts[i.dim] += 1;
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{clique_complex, SimplicialComplex};
    use crate::filtration::{simplexwise_filtration, skeleton_filtration, FilteredSimplex};
    use crate::graph::Graph;

    fn hollow_triangle() -> SimplicialComplex {
        clique_complex(&Graph::complete(3), None).unwrap().skeleton(1)
    }

    #[test]
    fn triangle_column() {
        let f = simplexwise_filtration(&clique_complex(&Graph::complete(3), None).unwrap());
        let m = boundary_matrix(&f).unwrap();
        assert_eq!(m.column(6), &[3, 4, 5]);
        assert_eq!(m.column(3), &[0, 1]);
        assert!(m.column(0).is_empty());
    }

    #[test]
    fn vertices_only() {
        let f = skeleton_filtration(&clique_complex(&Graph::empty(4, false), None).unwrap());
        let m = boundary_matrix(&f).unwrap();
        assert!((0..4).all(|j| m.column(j).is_empty()));
        let pairing = reduce(&m);
        assert!(pairing.pairs.is_empty());
        assert_eq!(pairing.unpaired, vec![0, 1, 2, 3]);
    }

    #[test]
    fn missing_face_is_an_error() {
        let s = |v: &[u32]| Simplex::new(v.iter().copied()).unwrap();
        let f = Filtration::from_entries(
            vec![FilteredSimplex { simplex: s(&[0]), level: 0 }, FilteredSimplex { simplex: s(&[0, 1]), level: 1 }],
            FiltrationKind::Custom,
        );
        assert_eq!(
            boundary_matrix(&f),
            Err(PersistenceError::FaceNotFound { simplex: s(&[0, 1]), face: s(&[1]) })
        );
    }

    #[test]
    fn hollow_triangle_pairing() {
        let f = simplexwise_filtration(&hollow_triangle());
        let pairing = reduce(&boundary_matrix(&f).unwrap());
        // vertices 0,1,2 then edges 01,02,12
        assert_eq!(pairing.pairs, vec![(1, 3), (2, 4)]);
        assert_eq!(pairing.unpaired, vec![0, 5]);
    }

    #[test]
    fn filled_triangle_pairing() {
        let f = simplexwise_filtration(&clique_complex(&Graph::complete(3), None).unwrap());
        let pairing = reduce(&boundary_matrix(&f).unwrap());
        assert_eq!(pairing.pairs, vec![(1, 3), (2, 4), (5, 6)]);
        assert_eq!(pairing.unpaired, vec![0]);
        let b = intervals(&pairing, &f);
        let edge_class = b.of_dim(1).next().unwrap();
        assert_eq!(edge_class.position_persistence(), Some(0));
    }

    #[test]
    fn schedules_agree_on_k5() {
        let f = simplexwise_filtration(&clique_complex(&Graph::complete(5), None).unwrap());
        let m = boundary_matrix(&f).unwrap();
        assert_eq!(reduce_with(&m, Reduction::Standard), reduce_with(&m, Reduction::Twist));
    }

    #[test]
    fn skeleton_barcodes() {
        let b = barcode(&skeleton_filtration(&hollow_triangle())).unwrap();
        let essential: Vec<(usize, usize)> =
            b.intervals.iter().filter(|i| i.is_infinite()).map(|i| (i.dim, i.birth)).collect();
        assert_eq!(essential, vec![(0, 0), (1, 1)]);
        assert_eq!(betti_at(&b, 1).unwrap(), vec![1, 1]);

        let k3 = barcode(&skeleton_filtration(&clique_complex(&Graph::complete(3), None).unwrap()))
            .unwrap();
        let h1: Vec<_> = k3.of_dim(1).collect();
        assert_eq!(h1.len(), 1);
        assert_eq!((h1[0].birth, h1[0].death, h1[0].length()), (1, Some(2), Some(1)));
        assert_eq!(persistent_betti(&k3, 1, 0).unwrap()[1], 1);
        assert_eq!(persistent_betti(&k3, 1, 1).unwrap()[1], 0);
    }

    #[test]
    fn out_of_range_levels() {
        let b = barcode(&skeleton_filtration(&hollow_triangle())).unwrap();
        assert_eq!(betti_at(&b, 2), Err(PersistenceError::LevelOutOfRange { level: 2, level_count: 2 }));
        assert!(persistent_betti(&b, 1, 1).is_err());
        assert!(persistent_betti(&b, 0, usize::MAX).is_err());
    }

    #[test]
    fn capped_complex_drops_top_dimension() {
        let k5 = clique_complex(&Graph::complete(5), Some(2)).unwrap();
        let b = barcode(&skeleton_filtration(&k5)).unwrap();
        assert_eq!(b.meta.homology_dims, 2);
        assert!(b.intervals.iter().all(|i| i.dim < 2));
        assert_eq!(betti_at(&b, 2).unwrap(), vec![1, 0]);
    }

    #[test]
    fn zero_length_intervals_are_invisible() {
        let s = |v: &[u32]| Simplex::new(v.iter().copied()).unwrap();
        // vertices at level 0, edge 01 and vertex 2 and edge 12 all at level 1
        let f = Filtration::from_entries(
            vec![
                FilteredSimplex { simplex: s(&[0]), level: 0 },
                FilteredSimplex { simplex: s(&[1]), level: 0 },
                FilteredSimplex { simplex: s(&[2]), level: 1 },
                FilteredSimplex { simplex: s(&[0, 1]), level: 1 },
                FilteredSimplex { simplex: s(&[1, 2]), level: 1 },
            ],
            FiltrationKind::Custom,
        );
        let b = barcode(&f).unwrap();
        let zero: Vec<_> = b.intervals.iter().filter(|i| i.is_zero_length()).collect();
        assert_eq!(zero.len(), 1);
        assert_eq!(zero[0].birth_position, 2);
        assert_eq!(b.visible().count(), 2);
        assert_eq!(betti_at(&b, 1).unwrap(), vec![1, 0]);
    }
}
