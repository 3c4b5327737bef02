//! Closed-form counts for genus 2, computed without the census, and the
//! classification of top-dimensional genus-2 cells into their families.
//!
//! The top cells are covers of the two trivalent genus-2 graphs: the
//! dumbbell (two loops joined by a bridge) and the theta (three parallel
//! edges), every vertex of genus 0.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::census::CensusLevel;
use crate::error::{Error, Result};
use crate::pcover::{check_prime, EdgeKind, PCover};

fn odd_prime_from_five(p: u32) -> Result<()> {
    check_prime(p)?;
    if p < 5 {
        return Err(Error::PrimeTooSmall { p, min: 5 });
    }
    Ok(())
}

fn half(p: u32) -> u64 {
    (p as u64 - 1) / 2
}

/// Number of top-dimensional cells of the genus-2 complex.
pub fn expected_maximal_cells(p: u32) -> Result<u64> {
    check_prime(p)?;
    let p = p as u64;
    Ok(match p {
        2 => 7,
        3 => 9,
        _ => (4 * p * p + 9 * p - 13) / 6,
    })
}

/// Number of 2-spheres in the homotopy type (the second Betti number).
pub fn expected_wedge_count(p: u32) -> Result<u64> {
    check_prime(p)?;
    if p < 5 {
        return Ok(0);
    }
    let p = p as u64;
    Ok((p - 1) * (p - 5) / 6 + (p - 3) * (p - 3) / 4)
}

/// Product of polynomials truncated above degree 3.
fn mul3(a: &[i128; 4], b: &[i128; 4]) -> [i128; 4] {
    let mut c = [0i128; 4];
    for i in 0..4 {
        for j in 0..4 - i {
            c[i + j] += a[i] * b[j];
        }
    }
    c
}

fn pow3(a: &[i128; 4], mut e: u64) -> [i128; 4] {
    let mut base = *a;
    let mut acc = [1, 0, 0, 0];
    while e > 0 {
        if e & 1 == 1 {
            acc = mul3(&acc, &base);
        }
        base = mul3(&base, &base);
        e >>= 1;
    }
    acc
}

/// `1 + t^k` truncated above degree 3.
fn one_plus_t_pow(k: u32) -> [i128; 4] {
    let mut a = [1, 0, 0, 0];
    if k <= 3 {
        a[k as usize] += 1;
    }
    a
}

/// Coefficient of t³ in the dihedral cycle index evaluated at 1 + t^k:
/// three-bead bracelets on p positions.
pub fn polya_free_theta_count(p: u32) -> Result<u64> {
    odd_prime_from_five(p)?;
    let m = half(p);
    let z1p = pow3(&one_plus_t_pow(1), p as u64);
    let reflections = mul3(&one_plus_t_pow(1), &pow3(&one_plus_t_pow(2), m));
    let rotations = one_plus_t_pow(p);
    let total = z1p[3] + p as i128 * reflections[3] + (p as i128 - 1) * rotations[3];
    let order = 2 * p as i128;
    debug_assert_eq!(total % order, 0);
    Ok((total / order) as u64)
}

/// Orbits of 3-subsets of Z/p under x ↦ ±x + c, counted directly.
pub fn bracelet_orbit_count(p: u32) -> Result<u64> {
    odd_prime_from_five(p)?;
    let mut seen: BTreeSet<[u32; 3]> = BTreeSet::new();
    for a in 0..p {
        for b in a + 1..p {
            for c in b + 1..p {
                seen.insert(bracelet_canon(p, [a, b, c]));
            }
        }
    }
    Ok(seen.len() as u64)
}

fn bracelet_canon(p: u32, s: [u32; 3]) -> [u32; 3] {
    let mut best = [u32::MAX; 3];
    for sign in [1, p - 1] {
        for shift in 0..p {
            let mut t = s.map(|x| (x * sign + shift) % p);
            t.sort_unstable();
            best = best.min(t);
        }
    }
    best
}

/// Gain triples (0, i, j) with 1 ≤ i < (p+1)/3 and 2i ≤ j ≤ ⌊(p+i)/2⌋.
pub fn free_theta_representatives(p: u32) -> Result<Vec<(u32, u32, u32)>> {
    odd_prime_from_five(p)?;
    let mut out = Vec::new();
    let mut i = 1;
    while 3 * i < p + 1 {
        for j in 2 * i..=(p + i) / 2 {
            out.push((0, i, j));
        }
        i += 1;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaAutClass {
    /// automorphism group of order 2p: the cell is folded in half
    Dihedral,
    /// only the deck group
    Cyclic,
}

/// Automorphism class of the free theta with pairwise distinct gains.
pub fn theta_aut_class(p: u32, i: u32, j: u32, k: u32) -> Result<ThetaAutClass> {
    check_prime(p)?;
    let (i, j, k) = (i % p, j % p, k % p);
    if i == j || j == k || i == k {
        return Err(Error::NotDistinct);
    }
    let s = (i + j + k) % p;
    Ok(if [i, j, k].iter().any(|&x| (3 * x) % p == s) { ThetaAutClass::Dihedral } else { ThetaAutClass::Cyclic })
}

/// Whether swapping the vertices and the edges of gains `i`, `j` lifts to
/// the cover: `i + j = 2k`.
pub fn swap_lifts(p: u32, i: u32, j: u32, k: u32) -> bool {
    (i + j) % p == (2 * k) % p
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DilatedThetaCensus {
    /// classes with three distinct flows (no automorphisms)
    pub distinct: u64,
    /// classes of shape (i, i, −2i)
    pub reflection: u64,
    /// least member of each distinct class, flows read from one vertex
    pub representatives: Vec<[u32; 3]>,
}

/// Fully dilated theta covers: flow triples summing to zero, up to
/// permuting edges and swapping the vertices (negation).
pub fn dilated_theta_census(p: u32) -> Result<DilatedThetaCensus> {
    odd_prime_from_five(p)?;
    let mut a_size = 0u64;
    let mut classes: BTreeSet<[u32; 3]> = BTreeSet::new();
    for i in 1..p {
        for j in 1..p {
            let k = (2 * p - i - j) % p;
            if k == 0 || i == j || j == k || i == k {
                continue;
            }
            a_size += 1;
            let canon = [[i, j, k], [p - i, p - j, p - k]]
                .into_iter()
                .map(|mut t| {
                    t.sort_unstable();
                    t
                })
                .min()
                .expect("two candidates");
            classes.insert(canon);
        }
    }
    debug_assert_eq!(a_size, (p as u64 - 1) * (p as u64 - 5));
    let reflection: BTreeSet<u32> = (1..p).map(|i| i.min(p - i)).collect();
    Ok(DilatedThetaCensus {
        distinct: classes.len() as u64,
        reflection: reflection.len() as u64,
        representatives: classes.into_iter().collect(),
    })
}

/// The thirteen families of top-dimensional genus-2 cells for p ≥ 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TopCellFamily {
    /// dumbbell: dilated loop | free loop of gain 0
    DilatedLoopTrivialLoop,
    /// dumbbell: two dilated loops of equal flow (up to sign)
    TwinDilatedLoops,
    /// dumbbell: dilated loop | free loop of nonzero gain
    DilatedLoopSpiralLoop,
    /// dumbbell: free loop of nonzero gain | free loop of gain 0
    SpiralLoopTrivialLoop,
    /// dumbbell: two free loops of equal nonzero gain (up to sign)
    TwinSpiralLoops,
    /// dumbbell: two free loops of distinct nonzero gains
    DistinctSpiralLoops,
    /// free theta, gains 0, 0, i
    FreeThetaRepeatedGain,
    /// free theta, distinct gains, automorphism group of order 2p
    FreeThetaDihedral,
    /// dumbbell: two dilated loops of distinct flows
    DistinctDilatedLoops,
    /// both vertices dilated, dilated edges i, −i and one free edge
    MixedTheta,
    /// free theta, distinct gains, automorphism group of order p
    FreeThetaCyclic,
    /// dilated theta, flows i, i, −2i
    DilatedThetaRepeatedFlow,
    /// dilated theta, distinct flows
    DilatedThetaDistinct,
}

impl TopCellFamily {
    pub const ALL: [TopCellFamily; 13] = [
        TopCellFamily::DilatedLoopTrivialLoop,
        TopCellFamily::TwinDilatedLoops,
        TopCellFamily::DilatedLoopSpiralLoop,
        TopCellFamily::SpiralLoopTrivialLoop,
        TopCellFamily::TwinSpiralLoops,
        TopCellFamily::DistinctSpiralLoops,
        TopCellFamily::FreeThetaRepeatedGain,
        TopCellFamily::FreeThetaDihedral,
        TopCellFamily::DistinctDilatedLoops,
        TopCellFamily::MixedTheta,
        TopCellFamily::FreeThetaCyclic,
        TopCellFamily::DilatedThetaRepeatedFlow,
        TopCellFamily::DilatedThetaDistinct,
    ];

    /// (row, column) in the table of top cells; column 1 lies in the
    /// parallel-edge locus, column 2 carries a reflecting automorphism.
    pub fn position(self) -> (u8, u8) {
        use TopCellFamily::*;
        match self {
            DilatedLoopTrivialLoop => (1, 1),
            TwinDilatedLoops => (1, 2),
            DilatedLoopSpiralLoop => (1, 3),
            SpiralLoopTrivialLoop => (2, 1),
            TwinSpiralLoops => (2, 2),
            DistinctSpiralLoops => (2, 3),
            FreeThetaRepeatedGain => (3, 1),
            FreeThetaDihedral => (3, 2),
            DistinctDilatedLoops => (3, 3),
            MixedTheta => (4, 2),
            FreeThetaCyclic => (4, 3),
            DilatedThetaRepeatedFlow => (5, 2),
            DilatedThetaDistinct => (5, 3),
        }
    }

    pub fn expected_count(self, p: u32) -> Result<u64> {
        odd_prime_from_five(p)?;
        use TopCellFamily::*;
        let m = half(p);
        let p64 = p as u64;
        Ok(match self {
            DilatedLoopTrivialLoop | TwinDilatedLoops | SpiralLoopTrivialLoop | TwinSpiralLoops => m,
            FreeThetaRepeatedGain | FreeThetaDihedral | MixedTheta | DilatedThetaRepeatedFlow => m,
            DilatedLoopSpiralLoop => m * m,
            DistinctSpiralLoops | DistinctDilatedLoops => m * (m - 1) / 2,
            FreeThetaCyclic => (p64 * p64 - 1) / 12 - m,
            DilatedThetaDistinct => (p64 - 1) * (p64 - 5) / 12,
        })
    }
}

impl fmt::Display for TopCellFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, c) = self.position();
        write!(f, "({r},{c})")
    }
}

enum LoopEndType {
    Dilated(u32),
    Free(u32),
}

/// Family of a top-dimensional genus-2 cell.
pub fn classify_top_cell(cover: &PCover) -> Result<TopCellFamily> {
    use TopCellFamily::*;
    let g = cover.target();
    let p = cover.p();
    let bad = || Error::UnclassifiableCell(cover.describe());
    if g.num_vertices() != 2 || g.num_edges() != 3 || g.vertex_genera().iter().any(|&x| x != 0) {
        return Err(bad());
    }
    let norm = |a: u32| a.min(p - a);
    let loops: Vec<usize> = (0..3).filter(|&e| g.is_loop(e)).collect();
    if loops.len() == 2 {
        let mut ends = Vec::new();
        for &e in &loops {
            let h = g.edge(e)[0];
            ends.push(match cover.edge_kind(e) {
                EdgeKind::Dilated => LoopEndType::Dilated(norm(cover.flow(h))),
                EdgeKind::FreeFree => LoopEndType::Free(norm(cover.gain(h))),
                EdgeKind::FreeAtDilated => return Err(bad()),
            });
        }
        return Ok(match (&ends[0], &ends[1]) {
            (LoopEndType::Dilated(a), LoopEndType::Dilated(b)) => {
                if a == b {
                    TwinDilatedLoops
                } else {
                    DistinctDilatedLoops
                }
            }
            (LoopEndType::Dilated(_), LoopEndType::Free(x)) | (LoopEndType::Free(x), LoopEndType::Dilated(_)) => {
                if *x == 0 {
                    DilatedLoopTrivialLoop
                } else {
                    DilatedLoopSpiralLoop
                }
            }
            (LoopEndType::Free(a), LoopEndType::Free(b)) => match (*a == 0, *b == 0) {
                (true, true) => return Err(bad()),
                (true, false) | (false, true) => SpiralLoopTrivialLoop,
                _ if a == b => TwinSpiralLoops,
                _ => DistinctSpiralLoops,
            },
        });
    }
    if !loops.is_empty() {
        return Err(bad());
    }
    // theta: read every edge from vertex 0
    let along: Vec<usize> =
        (0..3).map(|e| g.edge(e)).map(|[h0, h1]| if g.vertex_of(h0) == 0 { h0 } else { h1 }).collect();
    let kinds: Vec<EdgeKind> = (0..3).map(|e| cover.edge_kind(e)).collect();
    if kinds.iter().all(|&k| k == EdgeKind::FreeFree) {
        let gains: Vec<u32> = along.iter().map(|&h| cover.gain(h)).collect();
        let distinct: BTreeSet<u32> = gains.iter().copied().collect();
        return match distinct.len() {
            2 => Ok(FreeThetaRepeatedGain),
            3 => Ok(match theta_aut_class(p, gains[0], gains[1], gains[2])? {
                ThetaAutClass::Dihedral => FreeThetaDihedral,
                ThetaAutClass::Cyclic => FreeThetaCyclic,
            }),
            _ => Err(bad()),
        };
    }
    let dilated = kinds.iter().filter(|&&k| k == EdgeKind::Dilated).count();
    match dilated {
        3 => {
            let flows: BTreeSet<u32> = along.iter().map(|&h| cover.flow(h)).collect();
            Ok(if flows.len() == 3 { DilatedThetaDistinct } else { DilatedThetaRepeatedFlow })
        }
        2 if kinds.contains(&EdgeKind::FreeAtDilated) => Ok(MixedTheta),
        _ => Err(bad()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCensusReport {
    pub p: u32,
    pub counts: BTreeMap<TopCellFamily, u64>,
    pub expected: BTreeMap<TopCellFamily, u64>,
}

impl FamilyCensusReport {
    pub fn matches(&self) -> bool {
        self.counts == self.expected
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Classifies every cell of the top census level and compares the
/// per-family counts with the closed forms.
pub fn family_census_check(p: u32, level: &CensusLevel) -> Result<FamilyCensusReport> {
    odd_prime_from_five(p)?;
    if level.p != p || level.genus != 2 || level.dimension != 2 {
        return Err(Error::MalformedCover(format!(
            "expected the top level of genus 2 at p = {p}, got genus {} dimension {} p = {}",
            level.genus, level.dimension, level.p
        )));
    }
    let mut counts: BTreeMap<TopCellFamily, u64> = TopCellFamily::ALL.iter().map(|&f| (f, 0)).collect();
    for cell in &level.cells {
        *counts.get_mut(&classify_top_cell(&cell.cover)?).expect("all families present") += 1;
    }
    let expected = TopCellFamily::ALL.iter().map(|&f| Ok((f, f.expected_count(p)?))).collect::<Result<_>>()?;
    Ok(FamilyCensusReport { p, counts, expected })
}

/// Everything predicted for genus 2 at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Genus2Expectation {
    pub p: u32,
    pub maximal_cells: u64,
    pub wedge_count: u64,
    /// free thetas with distinct gains (None below p = 5)
    pub free_theta_distinct: Option<u64>,
    /// fully dilated thetas with distinct flows (None below p = 5)
    pub dilated_theta_distinct: Option<u64>,
    pub family_rows: BTreeMap<TopCellFamily, u64>,
}

impl Genus2Expectation {
    pub fn for_prime(p: u32) -> Result<Self> {
        let maximal_cells = expected_maximal_cells(p)?;
        let wedge_count = expected_wedge_count(p)?;
        if p < 5 {
            return Ok(Self {
                p,
                maximal_cells,
                wedge_count,
                free_theta_distinct: None,
                dilated_theta_distinct: None,
                family_rows: BTreeMap::new(),
            });
        }
        let family_rows = TopCellFamily::ALL.iter().map(|&f| Ok((f, f.expected_count(p)?))).collect::<Result<_>>()?;
        Ok(Self {
            p,
            maximal_cells,
            wedge_count,
            free_theta_distinct: Some(polya_free_theta_count(p)?),
            dilated_theta_distinct: Some(dilated_theta_census(p)?.distinct),
            family_rows,
        })
    }
}
