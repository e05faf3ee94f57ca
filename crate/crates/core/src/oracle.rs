//! Brute-force homology by dense Gaussian elimination over GF(2).
//!
//! Nothing here touches the boundary-matrix reduction in [`crate::persistence`];
//! the two engines share only the simplex enumeration. Ranks come from
//! explicit row echelon forms of the chain maps, and persistent Betti numbers
//! from explicit cycle and boundary bases and the dimension of their
//! intersection.

use std::collections::HashMap;

use thiserror::Error;

use crate::complex::{Simplex, SimplicialComplex};
use crate::filtration::Filtration;

/// Largest total simplex count the oracle accepts.
pub const SIZE_GUARD: usize = 20_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{simplices} simplices exceed the oracle limit of {limit}")]
    TooLarge { simplices: usize, limit: usize },
    #[error("filtration is missing face {0}")]
    MissingFace(Simplex),
}

/// Ranks for one dimension `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionRanks {
    /// `f_k`, the number of `k`-simplices.
    pub simplices: usize,
    /// rank ∂_k
    pub boundary_rank: usize,
    /// rank Z_k = f_k − rank ∂_k
    pub cycles: usize,
    /// rank B_k = rank ∂_{k+1}
    pub boundaries: usize,
    pub betti: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankReport {
    pub dims: Vec<DimensionRanks>,
}

impl RankReport {
    pub fn betti(&self) -> Vec<usize> {
        self.dims.iter().map(|d| d.betti).collect()
    }
}

/// Dense GF(2) vector.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BitRow {
    words: Vec<u64>,
}

impl BitRow {
    fn zeros(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)] }
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor(&mut self, other: &BitRow) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }
}

/// Rank of a set of vectors (consumed).
fn rank(mut rows: Vec<BitRow>) -> usize {
    echelon(&mut rows, None)
}

/// Gaussian elimination in place. Returns the rank; `companions`, when given,
/// receive the same row operations (used to track kernel combinations).
/// Afterwards rows `0..rank` are the nonzero echelon rows.
fn echelon(rows: &mut [BitRow], mut companions: Option<&mut [BitRow]>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.words.len() * 64);
    for column in 0..width {
        let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(column)) else {
            continue;
        };
        rows.swap(rank, found);
        if let Some(c) = companions.as_deref_mut() {
            c.swap(rank, found);
        }
        let pivot = rows[rank].clone();
        let pivot_companion = companions.as_deref().map(|c| c[rank].clone());
        for r in 0..rows.len() {
            if r != rank && rows[r].get(column) {
                rows[r].xor(&pivot);
                if let (Some(c), Some(pc)) = (companions.as_deref_mut(), pivot_companion.as_ref()) {
                    c[r].xor(pc);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Boundary vectors of `simplices` over the basis `faces`.
fn boundary_rows(simplices: &[&Simplex], faces: &[&Simplex]) -> Result<Vec<BitRow>, OracleError> {
    let index: HashMap<&Simplex, usize> = faces.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    simplices
        .iter()
        .map(|s| {
            let mut row = BitRow::zeros(faces.len());
            for face in s.facets() {
                let i = index.get(&face).ok_or_else(|| OracleError::MissingFace(face.clone()))?;
                row.set(*i);
            }
            Ok(row)
        })
        .collect()
}

fn by_dimension<'a>(simplices: impl Iterator<Item = &'a Simplex>) -> Vec<Vec<&'a Simplex>> {
    let mut out: Vec<Vec<&Simplex>> = Vec::new();
    for s in simplices {
        if out.len() <= s.dim() {
            out.resize_with(s.dim() + 1, Vec::new);
        }
        out[s.dim()].push(s);
    }
    out
}

fn ranks_of(groups: &[Vec<&Simplex>], up_to: usize) -> Result<RankReport, OracleError> {
    let count = |k: usize| groups.get(k).map_or(0, Vec::len);
    // boundary_rank[k] = rank ∂_k, with ∂_0 = 0
    let mut boundary_rank = vec![0usize; up_to + 2];
    for (k, slot) in boundary_rank.iter_mut().enumerate().skip(1) {
        if count(k) == 0 {
            continue;
        }
        let rows = boundary_rows(&groups[k], &groups[k - 1])?;
        *slot = rank(rows);
    }
    let dims = (0..=up_to)
        .map(|k| {
            let cycles = count(k) - boundary_rank[k];
            let boundaries = boundary_rank[k + 1];
            DimensionRanks {
                simplices: count(k),
                boundary_rank: boundary_rank[k],
                cycles,
                boundaries,
                betti: cycles - boundaries,
            }
        })
        .collect();
    Ok(RankReport { dims })
}

/// Betti numbers `β_0..=β_up_to` of `k` by eliminating each ∂ densely.
///
/// Dimensions above the complex's cap cannot be resolved; callers asking for
/// `up_to >= cap` on a truncated complex get the homology of the truncation.
pub fn betti_bruteforce(k: &SimplicialComplex, up_to: usize) -> Result<RankReport, OracleError> {
    let needed = up_to.saturating_add(1);
    let counts = k.face_counts();
    let total: usize = counts.iter().take(needed + 1).sum();
    if total > SIZE_GUARD {
        return Err(OracleError::TooLarge { simplices: total, limit: SIZE_GUARD });
    }
    let simplices = k.enumerate_simplices(needed);
    ranks_of(&by_dimension(simplices.iter()), up_to)
}

/// Betti numbers of the complex at level `l` of `f`.
pub fn betti_of_prefix(f: &Filtration, l: usize, up_to: usize) -> Result<Vec<usize>, OracleError> {
    let prefix: Vec<&Simplex> = f.prefix(l).collect();
    guard(prefix.len())?;
    Ok(ranks_of(&by_dimension(prefix.into_iter()), up_to)?.betti())
}

fn guard(simplices: usize) -> Result<(), OracleError> {
    if simplices > SIZE_GUARD {
        Err(OracleError::TooLarge { simplices, limit: SIZE_GUARD })
    } else {
        Ok(())
    }
}

/// `rank Z_k^l − rank(B_k^{l+p} ∩ Z_k^l)` from explicit bases.
///
/// A basis of `Z_k^l` comes from the kernel of ∂_k restricted to the
/// `k`-simplices present at level `l`; `B_k^{l+p}` is spanned by the
/// boundaries of the `(k+1)`-simplices present at level `l + p`. Both live in
/// the `k`-chains at level `l + p`, and
/// `dim(U ∩ W) = dim U + dim W − dim(U + W)`.
pub fn persistent_betti_direct(f: &Filtration, l: usize, p: usize, k: usize) -> Result<usize, OracleError> {
    let late: Vec<&Simplex> = f.prefix(l + p).collect();
    guard(late.len())?;
    let early_count = f.prefix(l).count();

    let chains_k: Vec<&Simplex> = late.iter().copied().filter(|s| s.dim() == k).collect();
    let early_k: Vec<&Simplex> =
        late[..early_count].iter().copied().filter(|s| s.dim() == k).collect();
    let index_k: HashMap<&Simplex, usize> = chains_k.iter().enumerate().map(|(i, &s)| (s, i)).collect();

    // kernel of ∂_k on early k-chains
    let cycles: Vec<BitRow> = if k == 0 {
        early_k
            .iter()
            .map(|s| {
                let mut row = BitRow::zeros(chains_k.len());
                row.set(index_k[s]);
                row
            })
            .collect()
    } else {
        let faces: Vec<&Simplex> = late.iter().copied().filter(|s| s.dim() == k - 1).collect();
        let mut images = boundary_rows(&early_k, &faces)?;
        let mut combos: Vec<BitRow> = early_k
            .iter()
            .map(|s| {
                let mut row = BitRow::zeros(chains_k.len());
                row.set(index_k[s]);
                row
            })
            .collect();
        let r = echelon(&mut images, Some(&mut combos));
        combos.split_off(r)
    };
    let cycle_rank = cycles.len();
    if cycle_rank == 0 {
        return Ok(0);
    }

    let cofaces: Vec<&Simplex> = late.iter().copied().filter(|s| s.dim() == k + 1).collect();
    let boundaries = boundary_rows(&cofaces, &chains_k)?;
    let boundary_rank = rank(boundaries.clone());
    let mut sum = cycles;
    sum.extend(boundaries);
    let sum_rank = rank(sum);
    let intersection = cycle_rank + boundary_rank - sum_rank;
    Ok(cycle_rank - intersection)
}
