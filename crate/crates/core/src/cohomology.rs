//! Blockwise cohomology of an exterior DGA.
//!
//! The differential preserves every degree except `coh`, so the cochain
//! complex splits into one small complex per (Ravenel, internal,
//! arithmetic) degree; each is solved independently (in parallel) and the
//! results are assembled in a fixed order.
//!
//! Within a block, the coboundaries `B` are put in echelon form first; the
//! cocycle space `Z` is the RREF kernel of the outgoing differential; and a
//! kernel vector becomes a class representative when it is independent of
//! `B` and of the representatives already chosen. Every echelon row
//! remembers its coordinates in the representative basis, which is how any
//! cocycle is later decomposed into classes.
//!
//! When some differential lowers the Ravenel degree (see
//! [`ValidationReport::ravenel_is_filtration`]), the Ravenel degree is only
//! an increasing filtration. Blocks are then keyed without it, monomials are
//! ordered by Ravenel degree inside each block, and each class is labelled
//! with the lowest filtration level containing a cocycle representing it;
//! the per-label counts are the dimensions of the associated graded.
//!
//! [`ValidationReport::ravenel_is_filtration`]: crate::dga::ValidationReport

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::dga::{DgaPresentation, Element, Mask, MultiDegree};
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::linalg::{self, Echelon, SparseMatrix, SparseVec, DEFAULT_DENSE_THRESHOLD};

/// Largest generator count for which the full basis is enumerated.
pub const MAX_ENUMERATED_GENERATORS: usize = 26;

#[derive(Debug, Clone, Copy)]
pub struct CohomologyOptions {
    pub dense_threshold: usize,
}

impl Default for CohomologyOptions {
    fn default() -> Self {
        Self { dense_threshold: DEFAULT_DENSE_THRESHOLD }
    }
}

/// Cohomology of one cochain space `C` between an incoming and an
/// outgoing differential.
#[derive(Debug, Clone)]
pub(crate) struct LocalCohomology {
    echelon: Echelon,
    /// Coordinates of each echelon row in the representative basis
    /// (empty for coboundary rows).
    row_coords: Vec<Vec<(usize, FieldElement)>>,
    pub reps: Vec<SparseVec>,
    /// Largest nonzero index of each representative.
    pub free_cols: Vec<usize>,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
}

impl LocalCohomology {
    /// `incoming`: images of the previous differential, as vectors in `C`.
    /// `outgoing_rows`: the rows of the next differential's matrix, over
    /// `dim` columns.
    pub(crate) fn compute(
        field: PrimeField,
        dim: usize,
        incoming: &[SparseVec],
        outgoing_rows: &[SparseVec],
        dense_threshold: usize,
    ) -> Self {
        let mut echelon = Echelon::with_threshold(field, dim, dense_threshold);
        for v in incoming {
            echelon.insert(v).expect("coboundaries lie in the block");
        }
        let dim_coboundaries = echelon.rank();
        let mut row_coords = vec![Vec::new(); dim_coboundaries];
        let kernel = linalg::kernel_sparse(field, dim, outgoing_rows, dense_threshold);
        let dim_cocycles = kernel.len();
        let mut reps = Vec::new();
        let mut free_cols = Vec::new();
        for z in kernel {
            let red = echelon.reduce(&z).expect("cocycles lie in the block");
            if red.remainder.is_empty() {
                continue;
            }
            // stored = s·(z − Σ c_r row_r), and z is the new class.
            let new_class = reps.len();
            let mut acc: BTreeMap<usize, FieldElement> = BTreeMap::new();
            acc.insert(new_class, 1);
            for &(r, c) in &red.combination {
                for &(k, x) in &row_coords[r] {
                    let e = acc.entry(k).or_insert(0);
                    *e = field.sub(*e, field.mul(c, x));
                }
            }
            let (_, s) = echelon.push_reduced(&red.remainder);
            row_coords.push(acc.into_iter().filter(|&(_, x)| x != 0).map(|(k, x)| (k, field.mul(s, x))).collect());
            free_cols.push(z.last().expect("kernel vectors are nonzero").0);
            reps.push(z);
        }
        Self { echelon, row_coords, reps, free_cols, dim_cocycles, dim_coboundaries }
    }

    /// Class coordinates of a cocycle, or `None` if `v` is not a cocycle.
    pub(crate) fn decompose(
        &self,
        field: PrimeField,
        v: &[(usize, FieldElement)],
    ) -> Option<Vec<(usize, FieldElement)>> {
        let red = self.echelon.reduce(v).ok()?;
        if !red.remainder.is_empty() {
            return None;
        }
        let mut acc: BTreeMap<usize, FieldElement> = BTreeMap::new();
        for (r, c) in red.combination {
            for &(k, x) in &self.row_coords[r] {
                let e = acc.entry(k).or_insert(0);
                *e = field.add(*e, field.mul(c, x));
            }
        }
        Some(acc.into_iter().filter(|&(_, x)| x != 0).collect())
    }

    pub(crate) fn is_coboundary(&self, field: PrimeField, v: &[(usize, FieldElement)]) -> bool {
        // Coboundaries are exactly the cocycles with zero class coordinates.
        matches!(self.decompose(field, v), Some(c) if c.is_empty())
    }
}

/// Cohomology in one multidegree block.
#[derive(Debug, Clone)]
struct Block {
    /// `rav` is 0 in filtration mode.
    key: MultiDegree,
    basis: Vec<Mask>,
    index: HashMap<Mask, usize>,
    local: LocalCohomology,
    labels: Vec<u64>,
}

/// One basis class of the cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    /// Degree of the class; in filtration mode `rav` is the filtration label.
    pub degree: MultiDegree,
    #[serde(skip)]
    block: usize,
    #[serde(skip)]
    local: usize,
}

/// Cohomology of a presentation with a chosen basis of classes.
#[derive(Debug, Clone)]
pub struct CohomologyResult {
    presentation: DgaPresentation,
    ravenel_is_filtration: bool,
    blocks: Vec<Block>,
    block_of: HashMap<MultiDegree, usize>,
    classes: Vec<ClassInfo>,
    class_of: Vec<Vec<usize>>,
}

/// Cohomology with default options.
pub fn cohomology(p: &DgaPresentation) -> Result<CohomologyResult> {
    cohomology_with(p, &CohomologyOptions::default())
}

pub fn cohomology_with(p: &DgaPresentation, opts: &CohomologyOptions) -> Result<CohomologyResult> {
    let report = p.validate()?;
    let g = p.num_generators();
    if g > MAX_ENUMERATED_GENERATORS {
        return Err(Error::Unsupported(format!(
            "{g} generators: the 2^{g}-dimensional algebra is too large to enumerate"
        )));
    }
    let filt = report.ravenel_is_filtration;
    let key_of = |m: Mask| {
        let mut d = p.degree_of(m);
        if filt {
            d.rav = 0;
        }
        d
    };
    // chain key (coh = 0) → monomials grouped by coh.
    let mut chains: BTreeMap<MultiDegree, Vec<Vec<Mask>>> = BTreeMap::new();
    for m in 0..(1u64 << g) {
        let mut k = key_of(m);
        let s = k.coh as usize;
        k.coh = 0;
        let levels = chains.entry(k).or_default();
        if levels.len() <= s {
            levels.resize(s + 1, Vec::new());
        }
        levels[s].push(m);
    }
    let field = p.field();
    let weight = |m: Mask| p.degree_of(m).rav;
    let chain_list: Vec<(MultiDegree, Vec<Vec<Mask>>)> = chains.into_iter().collect();
    let solved: Vec<Vec<Block>> = chain_list
        .into_par_iter()
        .map(|(key, mut levels)| {
            for level in &mut levels {
                level.sort_by_key(|&m| (weight(m), m));
            }
            solve_chain(p, field, key, &levels, &weight, opts.dense_threshold)
        })
        .collect();
    let mut blocks: Vec<Block> = solved.into_iter().flatten().collect();
    blocks.sort_by_key(|b| b.key);
    let block_of = blocks.iter().enumerate().map(|(i, b)| (b.key, i)).collect();
    let mut classes = Vec::new();
    for (bi, b) in blocks.iter().enumerate() {
        for (li, &label) in b.labels.iter().enumerate() {
            let mut degree = b.key;
            if filt {
                degree.rav = label;
            }
            classes.push(ClassInfo { degree, block: bi, local: li });
        }
    }
    classes.sort_by_key(|c| (c.degree, c.block, c.local));
    let mut class_of: Vec<Vec<usize>> = blocks.iter().map(|b| vec![0; b.labels.len()]).collect();
    for (i, c) in classes.iter().enumerate() {
        class_of[c.block][c.local] = i;
    }
    Ok(CohomologyResult { presentation: p.clone(), ravenel_is_filtration: filt, blocks, block_of, classes, class_of })
}

fn solve_chain(
    p: &DgaPresentation,
    field: PrimeField,
    key: MultiDegree,
    levels: &[Vec<Mask>],
    weight: &(impl Fn(Mask) -> u64 + Sync),
    dense_threshold: usize,
) -> Vec<Block> {
    let indices: Vec<HashMap<Mask, usize>> =
        levels.iter().map(|l| l.iter().enumerate().map(|(i, &m)| (m, i)).collect()).collect();
    // columns[s][j] = d(levels[s][j]) in the basis of levels[s+1].
    let columns: Vec<Vec<SparseVec>> = levels
        .iter()
        .enumerate()
        .map(|(s, level)| {
            level
                .iter()
                .map(|&m| {
                    let mut v: SparseVec = p
                        .differential_of_monomial(m)
                        .into_iter()
                        .map(|(t, c)| {
                            let idx = indices.get(s + 1).and_then(|ix| ix.get(&t));
                            (*idx.expect("d preserves the block degrees"), c)
                        })
                        .collect();
                    v.sort_by_key(|&(i, _)| i);
                    v
                })
                .collect()
        })
        .collect();
    let mut blocks = Vec::new();
    for (s, level) in levels.iter().enumerate() {
        if level.is_empty() {
            continue;
        }
        let incoming: &[SparseVec] = if s == 0 { &[] } else { &columns[s - 1] };
        let next_dim = levels.get(s + 1).map_or(0, Vec::len);
        let mut rows: Vec<SparseVec> = vec![Vec::new(); next_dim];
        for (j, col) in columns[s].iter().enumerate() {
            for &(i, c) in col {
                rows[i].push((j, c));
            }
        }
        let local = LocalCohomology::compute(field, level.len(), incoming, &rows, dense_threshold);
        let labels = local.free_cols.iter().map(|&c| weight(level[c])).collect();
        let mut k = key;
        k.coh = s as u32;
        blocks.push(Block { key: k, basis: level.clone(), index: indices[s].clone(), local, labels });
    }
    blocks
}

impl CohomologyResult {
    pub fn presentation(&self) -> &DgaPresentation {
        &self.presentation
    }

    pub fn field(&self) -> PrimeField {
        self.presentation.field()
    }

    /// True if the Ravenel components of class degrees are filtration labels.
    pub fn ravenel_is_filtration(&self) -> bool {
        self.ravenel_is_filtration
    }

    pub fn classes(&self) -> &[ClassInfo] {
        &self.classes
    }

    pub fn class_degree(&self, i: usize) -> MultiDegree {
        self.classes[i].degree
    }

    /// Rank per class degree.
    pub fn dims(&self) -> BTreeMap<MultiDegree, usize> {
        let mut out = BTreeMap::new();
        for c in &self.classes {
            *out.entry(c.degree).or_insert(0) += 1;
        }
        out
    }

    pub fn total_rank(&self) -> usize {
        self.classes.len()
    }

    /// Largest cohomological degree with a nonzero class.
    pub fn duality_top(&self) -> Option<u32> {
        self.classes.iter().map(|c| c.degree.coh).max()
    }

    /// Ranks indexed by cohomological degree.
    pub fn one_var(&self) -> Vec<u64> {
        let top = self.duality_top().map_or(0, |t| t as usize + 1);
        let mut out = vec![0; top];
        for c in &self.classes {
            out[c.degree.coh as usize] += 1;
        }
        out
    }

    /// Cocycle representing class `i`.
    pub fn representative(&self, i: usize) -> Element {
        let c = self.classes[i];
        let b = &self.blocks[c.block];
        Element::from_terms(self.field(), b.local.reps[c.local].iter().map(|&(k, x)| (b.basis[k], x)))
    }

    /// Representatives grouped by class degree.
    pub fn reps(&self) -> BTreeMap<MultiDegree, Vec<Element>> {
        let mut out: BTreeMap<MultiDegree, Vec<Element>> = BTreeMap::new();
        for i in 0..self.classes.len() {
            out.entry(self.classes[i].degree).or_default().push(self.representative(i));
        }
        out
    }

    fn block_key(&self, m: Mask) -> MultiDegree {
        let mut d = self.presentation.degree_of(m);
        if self.ravenel_is_filtration {
            d.rav = 0;
        }
        d
    }

    fn split(&self, x: &Element) -> Result<BTreeMap<usize, SparseVec>> {
        let mut parts: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (m, c) in x.terms() {
            let key = self.block_key(m);
            let b = *self.block_of.get(&key).ok_or_else(|| Error::Arithmetic(format!("no block for degree {key}")))?;
            parts.entry(b).or_default().push((self.blocks[b].index[&m], c));
        }
        for v in parts.values_mut() {
            v.sort_by_key(|&(i, _)| i);
        }
        Ok(parts)
    }

    /// Expresses a cocycle as a combination of basis classes (modulo
    /// coboundaries). Fails if `x` is not a cocycle.
    pub fn decompose(&self, x: &Element) -> Result<Vec<(usize, FieldElement)>> {
        let field = self.field();
        let mut out = Vec::new();
        for (b, v) in self.split(x)? {
            let coords = self.blocks[b]
                .local
                .decompose(field, &v)
                .ok_or_else(|| Error::NotACocycle(self.presentation.format_element(x)))?;
            out.extend(coords.into_iter().map(|(k, c)| (self.class_of[b][k], c)));
        }
        out.sort_by_key(|&(i, _)| i);
        Ok(out)
    }

    /// True if `x` is a coboundary.
    pub fn is_coboundary(&self, x: &Element) -> Result<bool> {
        for (b, v) in self.split(x)? {
            if !self.blocks[b].local.is_coboundary(self.field(), &v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Cup product of two basis classes, in the class basis.
    pub fn cup_product(&self, a: usize, b: usize) -> Result<Vec<(usize, FieldElement)>> {
        if a >= self.classes.len() || b >= self.classes.len() {
            return Err(Error::InvalidRequest(format!("class index out of range ({a}, {b})")));
        }
        let prod = self.presentation.multiply(&self.representative(a), &self.representative(b));
        self.decompose(&prod)
            .map_err(|_| Error::Arithmetic("product of representatives is not a cocycle (representative bug)".into()))
    }

    /// All nonzero products of pairs of basis classes.
    pub fn ring_table(&self) -> Result<RingTable> {
        let n = self.classes.len();
        let reps: Vec<Element> = (0..n).map(|i| self.representative(i)).collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        let products = pairs
            .into_par_iter()
            .map(|(a, b)| {
                let prod = self.presentation.multiply(&reps[a], &reps[b]);
                self.decompose(&prod).map(|c| ((a, b), c))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RingTable { products: products.into_iter().filter(|(_, c)| !c.is_empty()).collect() })
    }

    /// σ on each basis class, in the class basis.
    pub fn induced_action(&self) -> Result<Vec<Vec<(usize, FieldElement)>>> {
        (0..self.classes.len())
            .map(|i| self.decompose(&self.presentation.apply_action(&self.representative(i))))
            .collect()
    }

    /// Smallest `k ≥ 1` with σ^k = id on cohomology (at most the action
    /// order of the presentation), or `None` if none is found.
    pub fn action_order_on_cohomology(&self) -> Result<Option<u32>> {
        let sigma = self.induced_action()?;
        let n = self.classes.len();
        let field = self.field();
        let mut power: Vec<Vec<(usize, FieldElement)>> = (0..n).map(|i| vec![(i, 1)]).collect();
        for k in 1..=self.presentation.action_order() {
            power = compose(field, &sigma, &power);
            if power.iter().enumerate().all(|(i, col)| col == &vec![(i, 1)]) {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }

    /// Trace of σ^k on each (coh, internal, arith) piece that σ^k maps into
    /// itself, summed over Ravenel degrees. Pieces not preserved by σ^k are
    /// omitted.
    pub fn action_traces(&self, k: u32) -> Result<BTreeMap<(u32, u64, u32), i64>> {
        let sigma = self.induced_action()?;
        let n = self.classes.len();
        let field = self.field();
        let mut power: Vec<Vec<(usize, FieldElement)>> = (0..n).map(|i| vec![(i, 1)]).collect();
        for _ in 0..k {
            power = compose(field, &sigma, &power);
        }
        let piece = |i: usize| {
            let d = self.classes[i].degree;
            (d.coh, d.internal, d.arith)
        };
        let mut traces: BTreeMap<(u32, u64, u32), FieldElement> = BTreeMap::new();
        let mut broken = std::collections::BTreeSet::new();
        for (i, col) in power.iter().enumerate() {
            let key = piece(i);
            if col.iter().any(|&(j, _)| piece(j) != key) {
                broken.insert(key);
            }
            let diag = col.iter().find(|&&(j, _)| j == i).map_or(0, |&(_, c)| c);
            let e = traces.entry(key).or_insert(0);
            *e = field.add(*e, diag);
        }
        Ok(traces
            .into_iter()
            .filter(|(key, _)| !broken.contains(key))
            .map(|(key, t)| (key, field.to_signed(t)))
            .collect())
    }

    /// One- and two-variable Poincaré series. The t-exponent of a class is
    /// its internal degree divided by `2(p−1)`, reduced mod
    /// `T = M / (2(p−1))` where `M` is the internal modulus.
    pub fn poincare(&self) -> Result<PoincareSeries> {
        let p = self.presentation.prime() as u64;
        let unit = 2 * (p - 1);
        let modulus = self.presentation.internal_modulus();
        let t_modulus = if modulus == 1 {
            1
        } else if modulus.is_multiple_of(unit) {
            modulus / unit
        } else {
            return Err(Error::Arithmetic(format!("internal modulus {modulus} is not divisible by 2(p-1) = {unit}")));
        };
        let mut two_var: BTreeMap<u32, BTreeMap<u64, u64>> = BTreeMap::new();
        for c in &self.classes {
            let d = c.degree;
            if d.internal % unit != 0 && modulus != 1 {
                return Err(Error::Arithmetic(format!("internal degree {} is not divisible by {unit}", d.internal)));
            }
            let t = if modulus == 1 { 0 } else { (d.internal / unit) % t_modulus };
            *two_var.entry(d.coh).or_default().entry(t).or_insert(0) += 1;
        }
        Ok(PoincareSeries { one_var: self.one_var(), two_var, t_modulus })
    }

    /// Checks that each block's Euler characteristic Σ(−1)^s dim C^s equals
    /// Σ(−1)^s dim H^s.
    pub fn euler_characteristics_match(&self) -> bool {
        let mut cochains: BTreeMap<MultiDegree, i64> = BTreeMap::new();
        let mut classes: BTreeMap<MultiDegree, i64> = BTreeMap::new();
        for b in &self.blocks {
            let mut chain = b.key;
            chain.coh = 0;
            let sign = if b.key.coh % 2 == 0 { 1 } else { -1 };
            *cochains.entry(chain).or_insert(0) += sign * b.basis.len() as i64;
            *classes.entry(chain).or_insert(0) += sign * b.labels.len() as i64;
        }
        cochains == classes
    }

    /// Dimensions of cocycles and coboundaries per block key (with `rav`
    /// zeroed in filtration mode).
    pub fn block_summary(&self) -> Vec<BlockSummary> {
        self.blocks
            .iter()
            .map(|b| BlockSummary {
                degree: b.key,
                cochains: b.basis.len(),
                cocycles: b.local.dim_cocycles,
                coboundaries: b.local.dim_coboundaries,
                classes: b.labels.len(),
            })
            .collect()
    }

    /// Rank analysis of the action of two classes `x`, `y` by left
    /// multiplication (or one class `x`), decomposing the cohomology into
    /// cyclic modules over the exterior algebra they generate.
    pub fn module_structure(&self, over: &[usize]) -> Result<ModuleStructure> {
        let n = self.classes.len();
        let field = self.field();
        let op = |a: usize| -> Result<Vec<Vec<(usize, FieldElement)>>> {
            let ra = self.representative(a);
            (0..n).map(|i| self.decompose(&self.presentation.multiply(&ra, &self.representative(i)))).collect()
        };
        let rank_of = |cols: &[Vec<(usize, FieldElement)>], dim: usize| {
            let rows: Vec<SparseVec> = cols.to_vec();
            linalg::rank(&SparseMatrix::from_rows(field, dim, rows))
        };
        match over {
            [x] => {
                let xs = op(*x)?;
                let rx = rank_of(&xs, n);
                let sq = rank_of(&compose(field, &xs, &xs), n);
                Ok(ModuleStructure {
                    dimension: n,
                    free: rx,
                    m0: 0,
                    m1: 0,
                    trivial: n as i64 - 2 * rx as i64,
                    ranks: vec![rx],
                    consistent: sq == 0 && n >= 2 * rx,
                })
            }
            [x, y] => {
                let xs = op(*x)?;
                let ys = op(*y)?;
                let rx = rank_of(&xs, n) as i64;
                let ry = rank_of(&ys, n) as i64;
                let rxy = rank_of(&compose(field, &xs, &ys), n) as i64;
                let stacked: Vec<Vec<(usize, FieldElement)>> = xs
                    .iter()
                    .zip(&ys)
                    .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&(j, c)| (j + n, c))).collect())
                    .collect();
                let rs = rank_of(&stacked, 2 * n) as i64;
                let free = rxy;
                let m0 = rx - 2 * free;
                let m1 = ry - 2 * free;
                let trivial = n as i64 - 4 * free - 2 * m0 - 2 * m1;
                let consistent = m0 >= 0 && m1 >= 0 && trivial >= 0 && rs == 3 * free + m0 + m1;
                Ok(ModuleStructure {
                    dimension: n,
                    free: free as usize,
                    m0: m0.max(0) as usize,
                    m1: m1.max(0) as usize,
                    trivial,
                    ranks: vec![rx as usize, ry as usize, rxy as usize, rs as usize],
                    consistent,
                })
            }
            _ => Err(Error::InvalidRequest("module structure needs one or two classes".into())),
        }
    }

    /// Index of the unique class in degree `d`, if there is exactly one.
    pub fn unique_class_in(&self, d: MultiDegree) -> Option<usize> {
        let mut it = self.classes.iter().enumerate().filter(|(_, c)| c.degree == d).map(|(i, _)| i);
        match (it.next(), it.next()) {
            (Some(i), None) => Some(i),
            _ => None,
        }
    }
}

/// `(a ∘ b)` for linear maps given by their columns.
fn compose(
    field: PrimeField,
    a: &[Vec<(usize, FieldElement)>],
    b: &[Vec<(usize, FieldElement)>],
) -> Vec<Vec<(usize, FieldElement)>> {
    b.iter()
        .map(|col| {
            let mut acc: BTreeMap<usize, FieldElement> = BTreeMap::new();
            for &(j, c) in col {
                for &(k, x) in &a[j] {
                    let e = acc.entry(k).or_insert(0);
                    *e = field.add(*e, field.mul(c, x));
                }
            }
            acc.into_iter().filter(|&(_, x)| x != 0).collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockSummary {
    pub degree: MultiDegree,
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub classes: usize,
}

/// Products of basis classes: `(a, b) → Σ c_k class_k`, nonzero only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingTable {
    pub products: BTreeMap<(usize, usize), Vec<(usize, FieldElement)>>,
}

/// Poincaré series of a cohomology result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PoincareSeries {
    /// Rank in each cohomological degree.
    pub one_var: Vec<u64>,
    /// Cohomological degree → (t-exponent → multiplicity).
    pub two_var: BTreeMap<u32, BTreeMap<u64, u64>>,
    pub t_modulus: u64,
}

/// Decomposition into cyclic modules over `Λ(x, y)`: free modules `P`,
/// the quotients `M0 = P/(y)` and `M1 = P/(x)`, and trivial modules `T`.
///
/// With `X`, `Y` the multiplication operators: `rank XY = #P`,
/// `rank X = 2#P + #M0`, `rank Y = 2#P + #M1`,
/// `dim = 4#P + 2#M0 + 2#M1 + #T`, and consistency requires
/// `rank [X; Y] = 3#P + #M0 + #M1`. Over a single class only `P` and `T`
/// occur.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuleStructure {
    pub dimension: usize,
    pub free: usize,
    pub m0: usize,
    pub m1: usize,
    pub trivial: i64,
    /// `[rank X]`, or `[rank X, rank Y, rank XY, rank [X;Y]]`.
    pub ranks: Vec<usize>,
    /// False when the ranks are not those of a sum of such cyclic modules.
    pub consistent: bool,
}
