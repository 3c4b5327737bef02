//! The symmetric Δ-complex of covers and its rational homology.
//!
//! An n-simplex is a cover with n + 1 edges labelled by `0..=n`. Faces
//! contract the edges whose labels are not hit by an injection and relabel
//! the rest. Cells are orbits of labelled covers under relabelling; the
//! stored representative (the decoded canonical form, labelled by edge
//! index) fixes the positive orientation of its orbit.
//!
//! Rational chains: one generator per orbit whose label stabiliser is
//! contained in the alternating group; orbits with an odd automorphism
//! contribute nothing.

use rayon::prelude::*;
use serde::Serialize;

use crate::census::CensusLevel;
use crate::error::{Error, Result};
use crate::linalg;
use crate::pcover::{CoverKey, PCover};
use crate::present::sign;

/// A cover with a bijective labelling of its edges: `labels[e]` is the label
/// of edge `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledCover {
    pub cover: PCover,
    pub labels: Vec<usize>,
}

impl LabeledCover {
    /// The census labelling: edge `e` carries label `e`.
    pub fn identity(cover: PCover) -> Self {
        let n = cover.target().num_edges();
        Self { cover, labels: (0..n).collect() }
    }

    /// Key that is equal for two labelled covers iff an isomorphism respects
    /// the labels.
    pub fn labeled_key(&self) -> CoverKey {
        let marks: Vec<u32> = self.labels.iter().map(|&l| l as u32).collect();
        self.cover.canonical_form_marked(None, Some(&marks)).key
    }

    /// Face along an injection `θ: [m] → [n]` given as `theta[j] = θ(j)`:
    /// edges with labels outside the image are contracted and the edge
    /// labelled `θ(j)` is relabelled `j`.
    pub fn face(&self, theta: &[usize]) -> Result<LabeledCover> {
        let n = self.labels.len();
        let mut hit = vec![usize::MAX; n];
        for (j, &t) in theta.iter().enumerate() {
            if t >= n || hit[t] != usize::MAX {
                return Err(Error::NotInjective(n.saturating_sub(1)));
            }
            hit[t] = j;
        }
        let gone: Vec<usize> = (0..n).filter(|&e| hit[self.labels[e]] == usize::MAX).collect();
        let cover = self.cover.contract_all(&gone)?;
        let labels = (0..n).filter(|e| !gone.contains(e)).map(|e| hit[self.labels[e]]).collect();
        Ok(LabeledCover { cover, labels })
    }
}

/// Injection `[n−1] → [n]` skipping `i`.
pub fn coface(n: usize, i: usize) -> Vec<usize> {
    (0..=n).filter(|&j| j != i).collect()
}

#[derive(Clone, Debug)]
pub struct OrbitCell {
    pub key: CoverKey,
    pub cover: PCover,
    /// label permutations fixing the representative (contains the identity)
    pub stabilizer: Vec<Vec<usize>>,
    pub alternating: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceEntry {
    pub target: usize,
    /// label j of the face goes to label `perm[j]` of the target representative
    pub perm: Vec<usize>,
    pub sign: i8,
}

/// Which minimising presentation supplies the aligning permutation.
#[derive(Clone, Copy, Debug, Default)]
pub enum TieBreak {
    #[default]
    First,
    /// pseudo-random choice; boundary matrices must not depend on it
    Seeded(u64),
}

#[derive(Clone, Debug)]
pub struct DeltaComplex {
    pub genus: u32,
    pub p: u32,
    levels: Vec<Vec<OrbitCell>>,
    /// faces[n][cell][i] = d_i of the cell (empty for n = 0)
    faces: Vec<Vec<Vec<FaceEntry>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub betti: Vec<usize>,
    pub chain_dims: Vec<usize>,
}

impl BettiVector {
    /// Reduced Betti numbers (b̃_0 = b_0 − 1 for a nonempty complex).
    pub fn reduced(&self) -> Vec<i64> {
        let mut r: Vec<i64> = self.betti.iter().map(|&b| b as i64).collect();
        if self.chain_dims.iter().any(|&d| d > 0) {
            if let Some(b0) = r.first_mut() {
                *b0 -= 1;
            }
        }
        r
    }

    pub fn is_acyclic(&self) -> bool {
        self.reduced().iter().all(|&b| b == 0)
    }
}

pub fn format_vector<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn mix(seed: u64, a: usize, b: usize, c: usize) -> u64 {
    let mut x = seed ^ 0x9E37_79B9_7F4A_7C15;
    for v in [a as u64, b as u64, c as u64] {
        x = (x ^ v).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x ^= x >> 31;
    }
    x
}

impl DeltaComplex {
    pub fn assemble(census: &[CensusLevel]) -> Result<Self> {
        Self::assemble_with(census, TieBreak::First)
    }

    pub fn assemble_with(census: &[CensusLevel], tie: TieBreak) -> Result<Self> {
        let (genus, p) = census.first().map_or((0, 0), |l| (l.genus, l.p));
        let levels: Vec<Vec<OrbitCell>> = census
            .iter()
            .map(|level| {
                level
                    .cells
                    .par_iter()
                    .map(|c| {
                        let stabilizer = c.cover.automorphism_edge_group();
                        let alternating = stabilizer.iter().all(|s| sign(s) == 1);
                        OrbitCell { key: c.key.clone(), cover: c.cover.clone(), stabilizer, alternating }
                    })
                    .collect()
            })
            .collect();
        let mut faces = vec![Vec::new()];
        for n in 1..census.len() {
            let below = &census[n - 1];
            let row: Vec<Vec<FaceEntry>> = census[n]
                .cells
                .par_iter()
                .enumerate()
                .map(|(idx, c)| {
                    (0..=n)
                        .map(|i| {
                            let face = c.cover.contract(i)?;
                            let cf = face.canonical_form();
                            let target = below.index_of(&cf.key).ok_or(Error::MissingFace { dim: n, cell: idx })?;
                            let pick = match tie {
                                TieBreak::First => 0,
                                TieBreak::Seeded(s) => (mix(s, n, idx, i) % cf.num_minimisers() as u64) as usize,
                            };
                            let perm = cf.edge_map_at(pick).to_vec();
                            let sign = sign(&perm);
                            Ok(FaceEntry { target, perm, sign })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            faces.push(row);
        }
        Ok(Self { genus, p, levels, faces })
    }

    pub fn top_dimension(&self) -> usize {
        self.levels.len().saturating_sub(1)
    }
    pub fn level(&self, n: usize) -> &[OrbitCell] {
        &self.levels[n]
    }
    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }
    pub fn faces_of(&self, n: usize, cell: usize) -> &[FaceEntry] {
        &self.faces[n][cell]
    }
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.len()).collect()
    }

    /// Generators of C_n: indices of alternating cells.
    pub fn chain_basis(&self, n: usize) -> Vec<usize> {
        (0..self.levels[n].len()).filter(|&i| self.levels[n][i].alternating).collect()
    }

    /// Matrix of ∂_n : C_n → C_{n−1}, rows indexed by the basis of C_{n−1}.
    pub fn boundary_matrix(&self, n: usize) -> Vec<Vec<i64>> {
        if n == 0 || n >= self.levels.len() {
            return Vec::new();
        }
        let rows = self.chain_basis(n - 1);
        let cols = self.chain_basis(n);
        let mut row_of = vec![usize::MAX; self.levels[n - 1].len()];
        for (r, &c) in rows.iter().enumerate() {
            row_of[c] = r;
        }
        let mut m = vec![vec![0i64; cols.len()]; rows.len()];
        for (j, &c) in cols.iter().enumerate() {
            for (i, f) in self.faces[n][c].iter().enumerate() {
                let r = row_of[f.target];
                if r != usize::MAX {
                    let s = if i % 2 == 0 { 1 } else { -1 };
                    m[r][j] += s * f.sign as i64;
                }
            }
        }
        m
    }

    pub fn chain_dims(&self) -> Vec<usize> {
        (0..self.levels.len()).map(|n| self.chain_basis(n).len()).collect()
    }

    pub fn betti(&self) -> BettiVector {
        let dims = self.chain_dims();
        let top = self.levels.len();
        let ranks: Vec<usize> = (0..=top)
            .into_par_iter()
            .map(|n| if n == 0 || n >= top { 0 } else { linalg::rank(&self.boundary_matrix(n)) })
            .collect();
        let betti = (0..top).map(|n| dims[n] - ranks[n] - ranks[n + 1]).collect();
        BettiVector { betti, chain_dims: dims }
    }

    /// Betti numbers up to degree `k` only (ranks of ∂_1 … ∂_{k+1}).
    pub fn betti_up_to(&self, k: usize) -> Vec<usize> {
        let dims = self.chain_dims();
        let top = self.levels.len();
        let rank = |n: usize| if n == 0 || n >= top { 0 } else { linalg::rank(&self.boundary_matrix(n)) };
        let ranks: Vec<usize> = (0..=(k + 1).min(top)).into_par_iter().map(rank).collect();
        (0..=k.min(top.saturating_sub(1)))
            .map(|n| dims[n] - ranks[n] - ranks.get(n + 1).copied().unwrap_or(0))
            .collect()
    }

    /// Checks ∂_{n}∘∂_{n+1} = 0 for every n.
    pub fn boundary_squares_to_zero(&self) -> bool {
        (1..self.levels.len().saturating_sub(1)).all(|n| {
            let a = self.boundary_matrix(n);
            let b = self.boundary_matrix(n + 1);
            let inner = b.len();
            a.iter().all(|row| {
                (0..b.first().map_or(0, |r| r.len()))
                    .all(|j| (0..inner).map(|k| row[k] * b[k][j]).sum::<i64>() == 0)
            })
        })
    }

    /// Euler characteristic from chain dimensions, checked against the
    /// alternating sum of Betti numbers and against ∂∘∂ = 0.
    pub fn euler_characteristic(&self) -> Result<i64> {
        let b = self.betti();
        let alt = |v: &[usize]| v.iter().enumerate().map(|(n, &x)| if n % 2 == 0 { x as i64 } else { -(x as i64) }).sum::<i64>();
        let chains = alt(&b.chain_dims);
        let homology = alt(&b.betti);
        if chains != homology || !self.boundary_squares_to_zero() {
            return Err(Error::InconsistentEuler { chains, homology });
        }
        Ok(chains)
    }

    /// Smallest subcomplex containing the marked `(dimension, index)` cells.
    pub fn subcomplex_closure(&self, marked: &[(usize, usize)]) -> Result<DeltaComplex> {
        let mut members: Vec<Vec<bool>> = self.levels.iter().map(|l| vec![false; l.len()]).collect();
        for &(n, i) in marked {
            if n >= self.levels.len() || i >= self.levels[n].len() {
                return Err(Error::UnknownCell { dim: n, index: i });
            }
            members[n][i] = true;
        }
        Ok(self.restrict(&self.close_down(members)))
    }

    /// Downward closure of a membership table in the face poset.
    pub fn close_down(&self, mut members: Vec<Vec<bool>>) -> Vec<Vec<bool>> {
        for n in (1..self.levels.len()).rev() {
            for c in 0..self.levels[n].len() {
                if members[n][c] {
                    for f in &self.faces[n][c] {
                        members[n - 1][f.target] = true;
                    }
                }
            }
        }
        members
    }

    /// The subcomplex on a face-closed membership table.
    pub fn restrict(&self, members: &[Vec<bool>]) -> DeltaComplex {
        let mut new_index: Vec<Vec<usize>> = Vec::new();
        for (n, level) in self.levels.iter().enumerate() {
            let mut idx = vec![usize::MAX; level.len()];
            let mut k = 0;
            for c in 0..level.len() {
                if members[n][c] {
                    idx[c] = k;
                    k += 1;
                }
            }
            new_index.push(idx);
        }
        let levels: Vec<Vec<OrbitCell>> = self
            .levels
            .iter()
            .enumerate()
            .map(|(n, l)| l.iter().enumerate().filter(|(c, _)| members[n][*c]).map(|(_, x)| x.clone()).collect())
            .collect();
        let faces: Vec<Vec<Vec<FaceEntry>>> = self
            .faces
            .iter()
            .enumerate()
            .map(|(n, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| members[n][*c])
                    .map(|(_, fs)| {
                        fs.iter()
                            .map(|f| {
                                let t = new_index[n - 1][f.target];
                                assert!(t != usize::MAX, "membership table is not closed under faces");
                                FaceEntry { target: t, ..f.clone() }
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        DeltaComplex { genus: self.genus, p: self.p, levels, faces }
    }

    pub fn index_of(&self, n: usize, key: &CoverKey) -> Option<usize> {
        self.levels.get(n)?.binary_search_by(|c| c.key.cmp(key)).ok()
    }

    pub fn dump(&self) -> ComplexDump {
        let mut cells = Vec::new();
        let mut faces = Vec::new();
        for (n, level) in self.levels.iter().enumerate() {
            for (i, c) in level.iter().enumerate() {
                cells.push(CellDump {
                    dimension: n,
                    index: i,
                    key: c.key.to_hex(),
                    alternating: c.alternating,
                    stabilizer: c.stabilizer.clone(),
                });
                if n > 0 {
                    for (j, f) in self.faces[n][i].iter().enumerate() {
                        faces.push(FaceDump { dimension: n, cell: i, omitted: j, face: f.clone() });
                    }
                }
            }
        }
        ComplexDump { genus: self.genus, p: self.p, cells, faces }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexDump {
    pub genus: u32,
    pub p: u32,
    pub cells: Vec<CellDump>,
    pub faces: Vec<FaceDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellDump {
    pub dimension: usize,
    pub index: usize,
    pub key: String,
    pub alternating: bool,
    pub stabilizer: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceDump {
    pub dimension: usize,
    pub cell: usize,
    pub omitted: usize,
    #[serde(flatten)]
    pub face: FaceEntry,
}
