//! Spectral sequences of filtered exterior DGAs.
//!
//! Filtrations are decreasing, `F^0 ⊇ F^1 ⊇ …`, with `d(F^f) ⊆ F^f`, and
//! `d_r : E_r^{f,s} → E_r^{f+r,s+1}`. They are multiplicative up to a
//! constant: the filtration degree of a monomial is `offset + Σ weight(g)`
//! over its generators.
//!
//! Pages are computed one (Ravenel, internal, arithmetic) block at a time
//! from ranks of submatrices of `d`. Let `R_s(a, b)` be the rank of `d`
//! restricted to the cochains of degree `s` and filtration `≥ a`, followed
//! by projection onto the coordinates of filtration `< b`. Then
//! `Z_r^f = {x ∈ F^f : dx ∈ F^{f+r}}` has dimension
//! `dim F^f − R_s(f, f+r)`, and
//!
//! ```text
//! dim E_r^{f,s} = dim gr^f − R_s(f, f+r) + R_s(f+1, f+r)
//!               + R_{s−1}(f−r+1, f) − R_{s−1}(f−r+1, f+1)
//! rank d_r^{f,s} = Z_r^f − Z_{r+1}^f − Z_{r−1}^{f+1} + Z_r^{f+1}
//! ```
//!
//! Every run also checks `dim E_{r+1} = dim E_r − rank(d_r in) − rank(d_r
//! out)` at each spot and compares `E_∞` with [`cohomology`] per block.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::cohomology::{cohomology_with, CohomologyOptions, LocalCohomology};
use crate::dga::{bits, DgaPresentation, Element, Mask, MultiDegree};
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::golden::{diff_maps, Diff};
use crate::linalg::{Echelon, SparseVec};

/// A presentation with a multiplicative decreasing filtration.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    presentation: DgaPresentation,
    weights: Vec<i64>,
    offset: i64,
}

impl FilteredComplex {
    /// Filtration degree of a monomial = `offset + Σ weights[g]`. Fails if
    /// some monomial would get a negative degree or if `d` lowers the
    /// filtration of some generator.
    pub fn new(presentation: DgaPresentation, weights: Vec<i64>, offset: i64) -> Result<Self> {
        if weights.len() != presentation.num_generators() {
            return Err(Error::DimensionMismatch { expected: presentation.num_generators(), got: weights.len() });
        }
        let lowest = offset + weights.iter().filter(|&&w| w < 0).sum::<i64>();
        if lowest < 0 || offset + weights.iter().filter(|&&w| w > 0).sum::<i64>() > i64::from(u32::MAX) {
            return Err(Error::InvalidFiltration(format!(
                "filtration degrees must lie in 0..2^32, lowest is {lowest}"
            )));
        }
        let fc = Self { presentation, weights, offset };
        let p = &fc.presentation;
        for (i, g) in p.generators().iter().enumerate() {
            let own = fc.weights[i];
            if let Some((m, _)) = p.generator_differential(i).terms().find(|&(m, _)| fc.weight_sum(m) < own) {
                return Err(Error::InvalidFiltration(format!(
                    "d({}) lowers the filtration through the term {}",
                    g.name,
                    p.format_element(&Element::monomial(m, 1))
                )));
            }
        }
        Ok(fc)
    }

    /// Every monomial in filtration 0.
    pub fn trivial(presentation: DgaPresentation) -> Self {
        let g = presentation.num_generators();
        Self { presentation, weights: vec![0; g], offset: 0 }
    }

    pub fn presentation(&self) -> &DgaPresentation {
        &self.presentation
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    fn weight_sum(&self, m: Mask) -> i64 {
        bits(m).map(|i| self.weights[i]).sum()
    }

    pub fn filtration_degree(&self, m: Mask) -> u32 {
        (self.offset + self.weight_sum(m)) as u32
    }

    /// True if σ maps each generator to one of the same weight, so that the
    /// whole spectral sequence is σ-equivariant.
    pub fn sigma_invariant(&self) -> bool {
        let p = &self.presentation;
        (0..p.num_generators()).all(|i| {
            let (img, _) = p.action_on_monomial(1 << i);
            self.weight_sum(img) == self.weights[i]
        })
    }
}

/// The Cartan–Eilenberg filtration of an extension `A → B → Λ(Q)`: `B` is
/// the total algebra, `Q` the named quotient generators and `A` the
/// subalgebra on the others. A monomial with `k` quotient factors lies in
/// filtration `|Q| − k`, so `d_1` is induced by the part of `d` that trades
/// a quotient generator for subalgebra generators.
///
/// Requires `A` to be closed under `d` and each `d(q)` to have at most one
/// quotient factor per term.
pub fn ce_filtration(total: &DgaPresentation, quotient_generators: &[&str]) -> Result<FilteredComplex> {
    let g = total.num_generators();
    let mut weights = vec![0i64; g];
    for name in quotient_generators {
        let i = total
            .generator_index(name)
            .ok_or_else(|| Error::InvalidRequest(format!("unknown quotient generator {name}")))?;
        if weights[i] != 0 {
            return Err(Error::InvalidRequest(format!("quotient generator {name} listed twice")));
        }
        weights[i] = -1;
    }
    let quotient: Mask = (0..g).filter(|&i| weights[i] != 0).fold(0, |acc, i| acc | 1 << i);
    for i in 0..g {
        let in_quotient = quotient & (1 << i) != 0;
        for (m, _) in total.generator_differential(i).terms() {
            let k = (m & quotient).count_ones();
            if (!in_quotient && k > 0) || k > 1 {
                return Err(Error::InvalidFiltration(format!(
                    "not an extension by the quotient generators: d({}) contains {}",
                    total.generators()[i].name,
                    total.format_element(&Element::monomial(m, 1))
                )));
            }
        }
    }
    FilteredComplex::new(total.clone(), weights, quotient_generators.len() as i64)
}

/// The filtration of `algebra` by powers of the ideal generated by the
/// linear elements `ideal`, in a basis adapted to the ideal. The internal
/// grading becomes the coarsest one in which the ideal is homogeneous.
pub fn i_adic_filtration(algebra: &DgaPresentation, ideal: &[Element]) -> Result<FilteredComplex> {
    let modulus = algebra.coarse_ideal_modulus(ideal);
    let (rebased, weights) = algebra.ideal_adapted_basis(ideal, modulus, 0)?;
    FilteredComplex::new(rebased.presentation()?, weights.into_iter().map(i64::from).collect(), 0)
}

/// One nonzero spot of a page.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PageBlock {
    pub filtration: u32,
    pub coh: u32,
    pub rav: u64,
    pub internal: u64,
    pub arith: u32,
    pub dim: usize,
    /// Rank of the page differential leaving this spot.
    pub d_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SSPage {
    pub page: u32,
    pub blocks: Vec<PageBlock>,
    /// True if this page already equals `E_∞`.
    pub stable: bool,
}

impl SSPage {
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.dim).sum()
    }

    pub fn total_d_rank(&self) -> usize {
        self.blocks.iter().map(|b| b.d_rank).sum()
    }

    /// Dimensions keyed by `(filtration, degree)`.
    pub fn dims(&self) -> BTreeMap<(u32, MultiDegree), usize> {
        self.blocks
            .iter()
            .map(|b| ((b.filtration, MultiDegree::new(b.coh, b.rav, b.internal, b.arith)), b.dim))
            .collect()
    }
}

/// Pages `E_1, E_2, …` up to the first stable page or the page bound.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralSequence {
    pub pages: Vec<SSPage>,
    pub e_infinity: SSPage,
    /// `E_∞` against the directly computed cohomology, per degree (empty
    /// when they agree).
    pub convergence_diffs: Vec<Diff>,
    /// The rank bookkeeping `dim E_{r+1} = dim E_r − rank in − rank out`
    /// held at every spot.
    pub bookkeeping_ok: bool,
    /// Whether σ-conjugate spots have equal dimensions and ranks on every
    /// page; `None` if the filtration is not σ-invariant.
    pub sigma_ok: Option<bool>,
    /// True if the Ravenel degree is only a filtration, in which case it is
    /// dropped from block keys.
    pub ravenel_is_filtration: bool,
}

impl SpectralSequence {
    pub fn converges(&self) -> bool {
        self.convergence_diffs.is_empty()
    }

    /// `E_∞` dimensions summed over the filtration, per degree.
    pub fn e_infinity_by_degree(&self) -> BTreeMap<MultiDegree, usize> {
        let mut out = BTreeMap::new();
        for b in &self.e_infinity.blocks {
            *out.entry(MultiDegree::new(b.coh, b.rav, b.internal, b.arith)).or_insert(0) += b.dim;
        }
        out
    }
}

/// The cochain complex of one block, graded by `coh`, with each level
/// sorted by filtration degree.
struct ChainBlock {
    key: MultiDegree,
    levels: Vec<Vec<Mask>>,
    filt: Vec<Vec<u32>>,
    /// `columns[s][j]` = `d(levels[s][j])` in the basis of `levels[s+1]`.
    columns: Vec<Vec<SparseVec>>,
}

impl ChainBlock {
    fn level_len(&self, s: usize) -> usize {
        self.levels.get(s).map_or(0, Vec::len)
    }

    /// First index of `levels[s]` with filtration `≥ f`.
    fn first_index_at(&self, s: usize, f: u32) -> usize {
        self.filt.get(s).map_or(0, |v| v.partition_point(|&x| x < f))
    }

    /// Range of `levels[s]` in filtration exactly `f`.
    fn graded_range(&self, s: usize, f: u32) -> std::ops::Range<usize> {
        self.first_index_at(s, f)..self.first_index_at(s, f + 1)
    }
}

fn chain_blocks(fc: &FilteredComplex, filt_mode: bool) -> Vec<ChainBlock> {
    let p = &fc.presentation;
    let g = p.num_generators();
    let mut chains: BTreeMap<MultiDegree, Vec<Vec<Mask>>> = BTreeMap::new();
    for m in 0..(1u64 << g) {
        let mut k = p.degree_of(m);
        if filt_mode {
            k.rav = 0;
        }
        let s = k.coh as usize;
        k.coh = 0;
        let levels = chains.entry(k).or_default();
        if levels.len() <= s {
            levels.resize(s + 1, Vec::new());
        }
        levels[s].push(m);
    }
    chains
        .into_par_iter()
        .map(|(key, mut levels)| {
            for level in &mut levels {
                level.sort_by_key(|&m| (fc.filtration_degree(m), m));
            }
            let filt: Vec<Vec<u32>> =
                levels.iter().map(|l| l.iter().map(|&m| fc.filtration_degree(m)).collect()).collect();
            let index: Vec<HashMap<Mask, usize>> =
                levels.iter().map(|l| l.iter().enumerate().map(|(i, &m)| (m, i)).collect()).collect();
            let columns = levels
                .iter()
                .enumerate()
                .map(|(s, level)| {
                    level
                        .iter()
                        .map(|&m| {
                            let mut v: SparseVec =
                                p.differential_of_monomial(m).into_iter().map(|(t, c)| (index[s + 1][&t], c)).collect();
                            v.sort_by_key(|&(i, _)| i);
                            v
                        })
                        .collect()
                })
                .collect();
            ChainBlock { key, levels, filt, columns }
        })
        .collect()
}

/// The rank data of one block.
struct BlockRanks {
    lo: u32,
    hi: u32,
    /// `ranks[s][a − lo][b − lo]` = `R_s(a, b)` for `lo ≤ a, b ≤ hi + 1`.
    ranks: Vec<Vec<Vec<usize>>>,
    /// `filtered[s][f − lo]` = `dim F^f C^s` for `lo ≤ f ≤ hi + 1`.
    filtered: Vec<Vec<usize>>,
}

impl BlockRanks {
    fn compute(field: PrimeField, cb: &ChainBlock, dense_threshold: usize) -> Self {
        let all = cb.filt.iter().flatten();
        let lo = all.clone().copied().min().unwrap_or(0);
        let hi = all.copied().max().unwrap_or(0);
        let span = (hi - lo + 2) as usize;
        let mut ranks = Vec::with_capacity(cb.levels.len());
        let mut filtered = Vec::with_capacity(cb.levels.len());
        for s in 0..cb.levels.len() {
            filtered.push((lo..=hi + 1).map(|f| cb.level_len(s) - cb.first_index_at(s, f)).collect());
            let mut table = vec![vec![0usize; span]; span];
            let targets = cb.level_len(s + 1);
            // rows[i] = row i of d restricted to level s, as (column, value).
            let mut rows: Vec<SparseVec> = vec![Vec::new(); targets];
            for (j, col) in cb.columns[s].iter().enumerate() {
                for &(i, c) in col {
                    rows[i].push((j, c));
                }
            }
            for a in lo..=hi {
                let start = cb.first_index_at(s, a);
                let width = cb.level_len(s) - start;
                let mut ech = Echelon::with_threshold(field, width, dense_threshold);
                let mut i = 0;
                for b in lo..=hi + 1 {
                    // Insert target rows of filtration < b.
                    while i < targets && cb.filt[s + 1][i] < b {
                        let v: SparseVec =
                            rows[i].iter().filter(|&&(j, _)| j >= start).map(|&(j, c)| (j - start, c)).collect();
                        if !v.is_empty() {
                            ech.insert(&v).expect("restricted row fits the column range");
                        }
                        i += 1;
                    }
                    table[(a - lo) as usize][(b - lo) as usize] = ech.rank();
                }
            }
            ranks.push(table);
        }
        Self { lo, hi, ranks, filtered }
    }

    fn clamp(&self, f: i64) -> usize {
        (f.clamp(i64::from(self.lo), i64::from(self.hi) + 1) - i64::from(self.lo)) as usize
    }

    /// `R_s(a, b)`, zero outside the complex.
    fn r(&self, s: i64, a: i64, b: i64) -> usize {
        if s < 0 || s as usize >= self.ranks.len() {
            return 0;
        }
        self.ranks[s as usize][self.clamp(a)][self.clamp(b)]
    }

    fn filtered_dim(&self, s: i64, f: i64) -> usize {
        if s < 0 || s as usize >= self.filtered.len() {
            return 0;
        }
        self.filtered[s as usize][self.clamp(f)]
    }

    /// `dim Z_r^f` in degree `s`.
    fn z(&self, s: i64, r: i64, f: i64) -> i64 {
        self.filtered_dim(s, f) as i64 - self.r(s, f, f + r) as i64
    }

    fn e(&self, s: i64, r: i64, f: i64) -> i64 {
        let gr = self.filtered_dim(s, f) as i64 - self.filtered_dim(s, f + 1) as i64;
        gr - self.r(s, f, f + r) as i64 + self.r(s, f + 1, f + r) as i64 + self.r(s - 1, f - r + 1, f) as i64
            - self.r(s - 1, f - r + 1, f + 1) as i64
    }

    fn d_rank(&self, s: i64, r: i64, f: i64) -> i64 {
        self.z(s, r, f) - self.z(s, r + 1, f) - self.z(s, r - 1, f + 1) + self.z(s, r, f + 1)
    }

    /// Pages beyond this one are all `E_∞`.
    fn last_page(&self) -> u32 {
        self.hi - self.lo + 1
    }
}

/// Runs the spectral sequence: pages `E_1 … E_{r_max}`, stopping at the
/// first page equal to `E_∞`, plus `E_∞` itself and the self-checks
/// described in the module documentation.
pub fn pages(fc: &FilteredComplex, r_max: u32, opts: &CohomologyOptions) -> Result<SpectralSequence> {
    let p = &fc.presentation;
    let report = p.validate()?;
    let g = p.num_generators();
    if g > crate::cohomology::MAX_ENUMERATED_GENERATORS {
        return Err(Error::Unsupported(format!("{g} generators are too many to enumerate")));
    }
    if r_max == 0 {
        return Err(Error::InvalidRequest("the page bound must be at least 1".into()));
    }
    let filt_mode = report.ravenel_is_filtration;
    let field = p.field();
    let blocks = chain_blocks(fc, filt_mode);
    let ranks: Vec<BlockRanks> =
        blocks.par_iter().map(|cb| BlockRanks::compute(field, cb, opts.dense_threshold)).collect();
    let last = ranks.iter().map(BlockRanks::last_page).max().unwrap_or(1);

    let page_at = |r: u32| -> Vec<PageBlock> {
        let mut out = Vec::new();
        for (cb, br) in blocks.iter().zip(&ranks) {
            for s in 0..cb.levels.len() {
                for f in br.lo..=br.hi {
                    let (si, ri, fi) = (s as i64, i64::from(r), i64::from(f));
                    let dim = br.e(si, ri, fi);
                    debug_assert!(dim >= 0);
                    if dim > 0 {
                        out.push(PageBlock {
                            filtration: f,
                            coh: s as u32,
                            rav: cb.key.rav,
                            internal: cb.key.internal,
                            arith: cb.key.arith,
                            dim: dim as usize,
                            d_rank: br.d_rank(si, ri, fi) as usize,
                        });
                    }
                }
            }
        }
        out.sort();
        out
    };

    let mut bookkeeping_ok = true;
    for br in &ranks {
        for s in 0..br.ranks.len() as i64 {
            for r in 1..=i64::from(br.last_page()) {
                for f in i64::from(br.lo)..=i64::from(br.hi) {
                    let next = br.e(s, r + 1, f);
                    let expected = br.e(s, r, f) - br.d_rank(s, r, f) - br.d_rank(s - 1, r, f - r);
                    if next != expected || br.d_rank(s, r, f) < 0 {
                        bookkeeping_ok = false;
                    }
                }
            }
        }
    }

    let e_inf_blocks = page_at(last + 1);
    let strip = |v: &[PageBlock]| -> Vec<(u32, u32, u64, u64, u32, usize)> {
        v.iter().map(|b| (b.filtration, b.coh, b.rav, b.internal, b.arith, b.dim)).collect()
    };
    let e_inf_key = strip(&e_inf_blocks);
    let mut out_pages = Vec::new();
    for r in 1..=r_max {
        let blocks_r = page_at(r);
        let stable = strip(&blocks_r) == e_inf_key;
        out_pages.push(SSPage { page: r, blocks: blocks_r, stable });
        if stable {
            break;
        }
    }

    let sigma_ok = fc.sigma_invariant().then(|| sigma_consistent(p, filt_mode, &out_pages));

    // Convergence against the direct computation.
    let direct = cohomology_with(p, opts)?;
    let mut expected: BTreeMap<MultiDegree, i64> = BTreeMap::new();
    for (mut d, n) in direct.dims() {
        if filt_mode {
            d.rav = 0;
        }
        *expected.entry(d).or_insert(0) += n as i64;
    }
    let e_infinity = SSPage { page: last + 1, blocks: e_inf_blocks, stable: true };
    let mut got: BTreeMap<MultiDegree, i64> = BTreeMap::new();
    for b in &e_infinity.blocks {
        *got.entry(MultiDegree::new(b.coh, b.rav, b.internal, b.arith)).or_insert(0) += b.dim as i64;
    }
    let convergence_diffs = diff_maps(&expected, &got);

    Ok(SpectralSequence {
        pages: out_pages,
        e_infinity,
        convergence_diffs,
        bookkeeping_ok,
        sigma_ok,
        ravenel_is_filtration: filt_mode,
    })
}

/// σ maps spot `(f, s, key)` to `(f, s, σ·key)`; its dimension and the rank
/// of `d_r` there must not change.
fn sigma_consistent(p: &DgaPresentation, filt_mode: bool, pages: &[SSPage]) -> bool {
    let g = p.num_generators();
    let key_of = |m: Mask| {
        let mut d = p.degree_of(m);
        if filt_mode {
            d.rav = 0;
        }
        d
    };
    let mut sigma_key: HashMap<MultiDegree, MultiDegree> = HashMap::new();
    for m in 0..(1u64 << g) {
        sigma_key.entry(key_of(m)).or_insert_with(|| key_of(p.action_on_monomial(m).0));
    }
    pages.iter().all(|page| {
        let spots: HashMap<(u32, MultiDegree), (usize, usize)> = page
            .blocks
            .iter()
            .map(|b| ((b.filtration, MultiDegree::new(b.coh, b.rav, b.internal, b.arith)), (b.dim, b.d_rank)))
            .collect();
        spots.iter().all(|(&(f, d), v)| spots.get(&(f, sigma_key[&d])) == Some(v))
    })
}

/// A basis class of `E_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct E1Class {
    pub filtration: u32,
    pub degree: MultiDegree,
    /// Index among the classes at this spot.
    pub index: usize,
    /// A representative in the filtration quotient.
    pub representative: String,
}

/// One nonzero coefficient of `d_1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct D1Entry {
    pub source: E1Class,
    pub target: E1Class,
    /// Signed representative in `(−p/2, p/2]`.
    pub coefficient: i64,
}

/// `d_1` in chosen bases of `E_1 = H(gr C)`: every class of filtration `f`
/// is represented by a `d_0`-cocycle in `gr^f`, whose coboundary is reduced
/// to filtration `f+1` and decomposed there.
pub fn e1_differential_table(fc: &FilteredComplex) -> Result<Vec<D1Entry>> {
    let p = &fc.presentation;
    let report = p.validate()?;
    if p.num_generators() > crate::cohomology::MAX_ENUMERATED_GENERATORS {
        return Err(Error::Unsupported("too many generators to enumerate".into()));
    }
    let field = p.field();
    let filt_mode = report.ravenel_is_filtration;
    let blocks = chain_blocks(fc, filt_mode);
    let tables: Vec<Vec<D1Entry>> = blocks.par_iter().map(|cb| block_d1(p, field, cb)).collect();
    Ok(tables.into_iter().flatten().collect())
}

fn block_d1(p: &DgaPresentation, field: PrimeField, cb: &ChainBlock) -> Vec<D1Entry> {
    // E_1 at (s, f): cohomology of d_0 on gr^f C^s.
    let mut local: BTreeMap<(usize, u32), LocalCohomology> = BTreeMap::new();
    let graded_part = |col: &SparseVec, target: std::ops::Range<usize>| -> SparseVec {
        col.iter().filter(|(i, _)| target.contains(i)).map(|&(i, c)| (i - target.start, c)).collect()
    };
    for s in 0..cb.levels.len() {
        let fs: Vec<u32> = {
            let mut v = cb.filt[s].clone();
            v.dedup();
            v
        };
        for f in fs {
            let here = cb.graded_range(s, f);
            let incoming: Vec<SparseVec> = if s == 0 {
                Vec::new()
            } else {
                cb.graded_range(s - 1, f).map(|j| graded_part(&cb.columns[s - 1][j], here.clone())).collect()
            };
            let next = cb.graded_range(s + 1, f);
            let mut rows: Vec<SparseVec> = vec![Vec::new(); next.len()];
            for (j, col) in here.clone().map(|j| &cb.columns[s][j]).enumerate() {
                for (i, c) in graded_part(col, next.clone()) {
                    rows[i].push((j, c));
                }
            }
            let lc = LocalCohomology::compute(field, here.len(), &incoming, &rows, usize::MAX);
            local.insert((s, f), lc);
        }
    }
    let element = |s: usize, f: u32, v: &SparseVec| -> String {
        let start = cb.graded_range(s, f).start;
        p.format_element(&Element::from_terms(field, v.iter().map(|&(i, c)| (cb.levels[s][start + i], c))))
    };
    let class = |s: usize, f: u32, index: usize, lc: &LocalCohomology| {
        let mut degree = cb.key;
        degree.coh = s as u32;
        E1Class { filtration: f, degree, index, representative: element(s, f, &lc.reps[index]) }
    };
    let mut out = Vec::new();
    for (&(s, f), lc) in &local {
        let Some(target_lc) = local.get(&(s + 1, f + 1)) else { continue };
        let start = cb.graded_range(s, f).start;
        let target = cb.graded_range(s + 1, f + 1);
        for (k, rep) in lc.reps.iter().enumerate() {
            let mut acc: BTreeMap<usize, FieldElement> = BTreeMap::new();
            for &(j, c) in rep {
                for &(i, x) in &cb.columns[s][start + j] {
                    if target.contains(&i) {
                        let e = acc.entry(i - target.start).or_insert(0);
                        *e = field.add(*e, field.mul(c, x));
                    }
                }
            }
            let v: SparseVec = acc.into_iter().filter(|&(_, x)| x != 0).collect();
            let coords = target_lc.decompose(field, &v).expect("d_1 of an E_1 class is a d_0-cocycle");
            for (t, c) in coords {
                out.push(D1Entry {
                    source: class(s, f, k, lc),
                    target: class(s + 1, f + 1, t, target_lc),
                    coefficient: field.to_signed(c),
                });
            }
        }
    }
    out
}
