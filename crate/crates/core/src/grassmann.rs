//! Degeneracy strata of hyperplane collections on a Grassmannian of
//! k-planes: codimension arithmetic, the exhaustive partition scan for the
//! emptiness threshold, and randomized exact-rank evidence for concrete
//! hyperplane sets.
//!
//! A grouped collection imposes, per block, that the restrictions of its
//! forms to the k-plane W span a space of dimension at most 1. Each block of
//! size ℓ_ν cuts (k-1)(ℓ_ν-1) conditions, so the stratum has codimension
//! (k-1)·Σ(ℓ_ν-1) against the ambient dimension k(m-k); when the count
//! exceeds the ambient dimension the stratum is empty for generic forms.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::Error;
use crate::linalg;
use crate::rational::{rat, Rational};
use crate::Result;

/// N exact-rational covectors on C^m, each nonzero.
#[derive(Clone, Debug)]
pub struct HyperplaneSet {
    m: usize,
    forms: Vec<Vec<Rational>>,
}

impl HyperplaneSet {
    pub fn new(m: usize, forms: Vec<Vec<Rational>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("ambient dimension must be positive"));
        }
        if forms.len() < 2 {
            return Err(Error::invalid("need at least two covectors"));
        }
        for (i, f) in forms.iter().enumerate() {
            if f.len() != m {
                return Err(Error::invalid(format!("covector {i} has wrong length")));
            }
            if f.iter().all(num_traits::Zero::is_zero) {
                return Err(Error::invalid(format!("covector {i} is zero")));
            }
        }
        Ok(HyperplaneSet { m, forms })
    }

    /// Seeded random set with small integer entries; rows are resampled
    /// until nonzero.
    pub fn random(m: usize, n: usize, rng: &mut ChaCha20Rng) -> Result<Self> {
        let mut forms = Vec::with_capacity(n);
        for _ in 0..n {
            loop {
                let row: Vec<Rational> = (0..m)
                    .map(|_| rat(rng.gen_range(-9i64..=9), 1))
                    .collect();
                if !row.iter().all(num_traits::Zero::is_zero) {
                    forms.push(row);
                    break;
                }
            }
        }
        Self::new(m, forms)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn form(&self, i: usize) -> &[Rational] {
        &self.forms[i]
    }
}

/// Partition of the form indices {0..N-1} into blocks of size >= 2.
#[derive(Clone, Debug)]
pub struct GroupedPartition {
    blocks: Vec<Vec<usize>>,
}

impl GroupedPartition {
    pub fn new(blocks: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.len() < 2 {
                return Err(Error::invalid("blocks must have at least two members"));
            }
            for &i in b {
                if i >= n || seen[i] {
                    return Err(Error::invalid("blocks must partition the index set"));
                }
                seen[i] = true;
            }
        }
        if !seen.into_iter().all(|s| s) {
            return Err(Error::invalid("blocks must cover every index"));
        }
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        Ok(GroupedPartition { blocks })
    }

    /// Contiguous blocks of the given sizes over {0..Σsizes-1}.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self> {
        let mut blocks = Vec::with_capacity(sizes.len());
        let mut next = 0;
        for &s in sizes {
            blocks.push((next..next + s).collect());
            next += s;
        }
        Self::new(blocks, next)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn q(&self) -> usize {
        self.blocks.len()
    }

    pub fn n(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum StratumVerdict {
    EmptyByCount,
    PossiblyNonempty,
}

/// Codimension (k-1)·Σ(ℓ_ν-1) of the stratum cut out by a grouped
/// collection, for k-planes.
pub fn stratum_codimension(k: usize, partition: &GroupedPartition) -> Result<usize> {
    if k < 2 {
        return Err(Error::invalid("plane dimension must be at least 2"));
    }
    let conditions: usize = partition.blocks.iter().map(|b| b.len() - 1).sum();
    Ok((k - 1) * conditions)
}

/// Codimension count against the ambient dimension k(m-k).
#[derive(Clone, Debug, serde::Serialize)]
pub struct CodimReport {
    pub k: usize,
    pub m: usize,
    pub block_sizes: Vec<usize>,
    pub codimension: usize,
    pub ambient_dimension: usize,
    pub verdict: StratumVerdict,
}

pub fn codim_report(k: usize, m: usize, partition: &GroupedPartition) -> Result<CodimReport> {
    if k + 1 > m {
        return Err(Error::invalid("plane dimension must be below ambient"));
    }
    let codimension = stratum_codimension(k, partition)?;
    let ambient_dimension = k * (m - k);
    Ok(CodimReport {
        k,
        m,
        block_sizes: partition.sizes(),
        codimension,
        ambient_dimension,
        verdict: if codimension > ambient_dimension {
            StratumVerdict::EmptyByCount
        } else {
            StratumVerdict::PossiblyNonempty
        },
    })
}

/// All multisets of block sizes >= 2 summing to n, each sorted descending,
/// enumerated in a fixed canonical order.
pub fn partitions_into_blocks(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        let mut part = cap.min(n);
        while part >= 2 {
            if n != part && n - part < 2 {
                part -= 1;
                continue;
            }
            prefix.push(part);
            rec(n - part, part, prefix, out);
            prefix.pop();
            part -= 1;
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct ThresholdScan {
    pub m: usize,
    pub n_forms: usize,
    /// 4m-7; at or above this count every case must be empty.
    pub threshold: usize,
    pub uniformly_empty: bool,
    pub cases: Vec<CodimReport>,
}

/// Enumerates every block-size multiset of N forms and every plane dimension
/// k in 2..=m-1, and reports the codimension verdict for each.
pub fn prop4_threshold_scan(m: usize, n_forms: usize) -> Result<ThresholdScan> {
    if m < 3 {
        return Err(Error::invalid("ambient dimension must be at least 3"));
    }
    if n_forms < 2 {
        return Err(Error::invalid("need at least two forms"));
    }
    let mut cases = Vec::new();
    for sizes in partitions_into_blocks(n_forms) {
        let partition = GroupedPartition::from_sizes(&sizes)?;
        for k in 2..=m - 1 {
            cases.push(codim_report(k, m, &partition)?);
        }
    }
    let uniformly_empty = cases
        .iter()
        .all(|c| c.verdict == StratumVerdict::EmptyByCount);
    Ok(ThresholdScan {
        m,
        n_forms,
        threshold: 4 * m - 7,
        uniformly_empty,
        cases,
    })
}

/// True iff the block's forms restrict to a span of dimension <= 1 on the
/// k-plane spanned by the rows of `w`.
pub fn stratum_membership(
    w: &[Vec<Rational>],
    h: &HyperplaneSet,
    block: &[usize],
) -> Result<bool> {
    let k = w.len();
    if k == 0 || w.iter().any(|r| r.len() != h.m()) {
        return Err(Error::invalid("plane matrix has wrong shape"));
    }
    if linalg::rank(w.to_vec()) != k {
        return Err(Error::invalid("plane matrix is rank-deficient"));
    }
    // Rows H_i·W^T: the i-th form in the basis dual to the rows of w.
    let restricted: Vec<Vec<Rational>> = block
        .iter()
        .map(|&i| {
            w.iter()
                .map(|row| {
                    row.iter()
                        .zip(h.form(i))
                        .fold(Rational::from_integer(0.into()), |acc, (a, b)| acc + a * b)
                })
                .collect()
        })
        .collect();
    Ok(linalg::rank(restricted) <= 1)
}

#[derive(Clone, Debug)]
pub struct EmptinessEvidence {
    /// Largest exact rank of the difference stack over the sampled c-vectors.
    pub generic_rank: usize,
    /// Every sampled stack leaves kernel dimension below k, and the
    /// codimension count independently certifies emptiness.
    pub certified_empty_by_count: bool,
    /// A k-plane (row basis) on the stratum, when a sampled or degenerate
    /// stack exposed one; re-verified blockwise before being reported.
    pub counterexample: Option<Vec<Vec<Rational>>>,
    pub trials: usize,
    pub report: CodimReport,
}

/// Randomized exact-rank evidence for emptiness of a stratum on a concrete
/// hyperplane set: samples rational c-vectors of bounded height, stacks the
/// per-block differences H_j - c_j·H_anchor, and reads kernel dimensions.
/// The all-forms-vanish branch is probed by also stacking each full block.
pub fn emptiness_evidence(
    h: &HyperplaneSet,
    partition: &GroupedPartition,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<EmptinessEvidence> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    if partition.n() != h.len() {
        return Err(Error::invalid("partition does not cover the form set"));
    }
    let report = codim_report(k, h.m(), partition)?;
    let m = h.m();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut generic_rank = 0usize;
    let mut all_small_kernel = true;
    let mut counterexample: Option<Vec<Vec<Rational>>> = None;

    let try_kernel = |stack: &[Vec<Rational>],
                          counterexample: &mut Option<Vec<Vec<Rational>>>|
     -> Result<usize> {
        let rank = linalg::rank(stack.to_vec());
        if m - rank >= k && counterexample.is_none() {
            let basis = linalg::kernel_basis(stack, m);
            let w: Vec<Vec<Rational>> = basis.into_iter().take(k).collect();
            let mut ok = w.len() == k;
            for block in partition.blocks() {
                if !ok {
                    break;
                }
                ok = stratum_membership(&w, h, block)?;
            }
            if ok {
                *counterexample = Some(w);
            }
        }
        Ok(rank)
    };

    for _ in 0..trials {
        let mut stack: Vec<Vec<Rational>> = Vec::new();
        for block in partition.blocks() {
            let anchor = h.form(block[0]);
            for &j in &block[1..] {
                let c = rat(
                    rng.gen_range(-1000i64..=1000),
                    rng.gen_range(1i64..=1000),
                );
                let row: Vec<Rational> = h
                    .form(j)
                    .iter()
                    .zip(anchor)
                    .map(|(a, b)| a - &c * b)
                    .collect();
                stack.push(row);
            }
        }
        let rank = try_kernel(&stack, &mut counterexample)?;
        generic_rank = generic_rank.max(rank);
        if m - rank >= k {
            all_small_kernel = false;
        }
    }

    // Degenerate branch: all forms of each block vanish on W simultaneously.
    let full_stack: Vec<Vec<Rational>> = partition
        .blocks()
        .iter()
        .flat_map(|b| b.iter().map(|&i| h.form(i).to_vec()))
        .collect();
    try_kernel(&full_stack, &mut counterexample)?;

    let certified_empty_by_count =
        all_small_kernel && report.verdict == StratumVerdict::EmptyByCount;
    Ok(EmptinessEvidence {
        generic_rank,
        certified_empty_by_count,
        counterexample,
        trials,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    fn ratv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn codimension_examples() {
        let p32 = GroupedPartition::from_sizes(&[3, 2]).unwrap();
        assert_eq!(stratum_codimension(2, &p32).unwrap(), 3);
        let p222 = GroupedPartition::from_sizes(&[2, 2, 2]).unwrap();
        assert_eq!(stratum_codimension(3, &p222).unwrap(), 6);
        assert!(stratum_codimension(1, &p32).is_err());
    }

    #[test]
    fn verdict_compares_against_ambient_dimension() {
        let p32 = GroupedPartition::from_sizes(&[3, 2]).unwrap();
        let r = codim_report(2, 3, &p32).unwrap();
        assert_eq!(r.ambient_dimension, 2);
        assert_eq!(r.verdict, StratumVerdict::EmptyByCount);

        let p22 = GroupedPartition::from_sizes(&[2, 2]).unwrap();
        let r = codim_report(2, 4, &p22).unwrap();
        assert_eq!(r.codimension, 2);
        assert_eq!(r.ambient_dimension, 4);
        assert_eq!(r.verdict, StratumVerdict::PossiblyNonempty);
    }

    #[test]
    fn partition_enumeration_counts() {
        // 9 = 9, 7+2, 6+3, 5+4, 5+2+2, 4+3+2, 3+3+3, 3+2+2+2.
        assert_eq!(partitions_into_blocks(9).len(), 8);
        assert_eq!(partitions_into_blocks(4), vec![vec![4], vec![2, 2]]);
        assert_eq!(partitions_into_blocks(2), vec![vec![2]]);
        assert_eq!(partitions_into_blocks(3), vec![vec![3]]);
    }

    #[test]
    fn scan_at_the_threshold_is_uniformly_empty() {
        let scan = prop4_threshold_scan(4, 9).unwrap();
        assert!(scan.uniformly_empty);
        assert_eq!(scan.threshold, 9);
        assert_eq!(scan.cases.len(), 8 * 2);

        let scan = prop4_threshold_scan(3, 5).unwrap();
        assert!(scan.uniformly_empty);
    }

    #[test]
    fn scan_below_the_threshold_finds_a_witness() {
        let scan = prop4_threshold_scan(4, 4).unwrap();
        assert!(!scan.uniformly_empty);
        assert!(scan
            .cases
            .iter()
            .any(|c| c.k == 2
                && c.block_sizes == vec![2, 2]
                && c.verdict == StratumVerdict::PossiblyNonempty));
    }

    #[test]
    fn membership_examples() {
        // H_1 = H_2 restricted to any plane: span dim <= 1.
        let h = HyperplaneSet::new(
            3,
            vec![ratv(&[1, 2, 3]), ratv(&[1, 2, 3]), ratv(&[0, 1, 0])],
        )
        .unwrap();
        let w = vec![ratv(&[1, 0, 0]), ratv(&[0, 1, 0])];
        assert!(stratum_membership(&w, &h, &[0, 1]).unwrap());

        // Coordinate forms x_1*, x_2* on span(e_1, e_2): rank 2.
        let h2 = HyperplaneSet::new(3, vec![ratv(&[1, 0, 0]), ratv(&[0, 1, 0])]).unwrap();
        assert!(!stratum_membership(&w, &h2, &[0, 1]).unwrap());

        // Plane inside both kernels: rank 0 counts as degenerate membership.
        let h3 = HyperplaneSet::new(3, vec![ratv(&[0, 0, 1]), ratv(&[0, 0, 2])]).unwrap();
        assert!(stratum_membership(&w, &h3, &[0, 1]).unwrap());

        let bad = vec![ratv(&[1, 0, 0]), ratv(&[2, 0, 0])];
        assert!(stratum_membership(&bad, &h, &[0, 1]).is_err());
    }

    #[test]
    fn generic_forms_certify_empty() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let h = HyperplaneSet::random(3, 5, &mut rng).unwrap();
        let p = GroupedPartition::from_sizes(&[3, 2]).unwrap();
        let ev = emptiness_evidence(&h, &p, 2, 20, 11).unwrap();
        assert_eq!(ev.generic_rank, 3);
        assert!(ev.certified_empty_by_count);
        assert!(ev.counterexample.is_none());
    }

    #[test]
    fn global_proportionality_yields_counterexample() {
        // H_2 = 2 H_1: the difference stack can reach rank 0.
        let h = HyperplaneSet::new(3, vec![ratv(&[1, 1, 1]), ratv(&[2, 2, 2])]).unwrap();
        let p = GroupedPartition::from_sizes(&[2]).unwrap();
        let ev = emptiness_evidence(&h, &p, 2, 10, 3).unwrap();
        assert!(ev.counterexample.is_some());
        let w = ev.counterexample.unwrap();
        assert!(stratum_membership(&w, &h, &[0, 1]).unwrap());
    }

    #[test]
    fn wide_ambient_space_gives_explicit_plane() {
        let mut rng = ChaCha20Rng::seed_from_u64(19);
        let h = HyperplaneSet::random(5, 4, &mut rng).unwrap();
        let p = GroupedPartition::from_sizes(&[2, 2]).unwrap();
        let ev = emptiness_evidence(&h, &p, 2, 5, 23).unwrap();
        assert_eq!(ev.generic_rank, 2);
        assert!(!ev.certified_empty_by_count);
        assert!(ev.counterexample.is_some());
    }

    #[test]
    fn refinement_tracks_block_count() {
        // Σ(ℓ_ν-1) = N - q strictly decreases as q grows.
        for sizes in partitions_into_blocks(8) {
            let p = GroupedPartition::from_sizes(&sizes).unwrap();
            let c = stratum_codimension(2, &p).unwrap();
            assert_eq!(c, 8 - p.q());
        }
    }
}
