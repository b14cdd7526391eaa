//! Chevalley–Eilenberg data for a finite-dimensional Lie superalgebra `L`:
//! `H²(L, F)` with trivial coefficients, the coadjoint module `L*`, and the
//! spaces `Der(L, L*) ⊇ Inn(L, L*)`.
//!
//! Conventions:
//! `(d¹f)(x,y) = −f([x,y])`,
//! `(d²c)(x,y,z) = (−1)^{xz} c([x,y],z) + (−1)^{yx} c([y,z],x) + (−1)^{zy} c([z,x],y)`,
//! `(x·f)(y) = −(−1)^{p(x)p(f)} f([x,y])`.
//! A map `ψ: L → L*` is stored as the bilinear form `B(x,y) = ψ(x)(y)`; the
//! superderivation identity then reads
//! `B([x,y],z) + (−1)^{xy} B(y,[x,z]) − B(x,[y,z]) = 0` for every parity of `ψ`.
//!
//! All computations split into blocks keyed by total degree, total weight and
//! total parity, which the differentials preserve.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartan::GradedAlgebra;
use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::linalg::{EchelonBasis, SparseMatrix, SparseVec};
use crate::parity::Parity;
use crate::weights::{weight_decomposition, Weight};

/// Grading data carried by a basis element or a block of cochain coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockKey {
    pub degree: i32,
    pub weight: Weight,
    pub parity: Parity,
}

impl BlockKey {
    fn add(&self, field: &PrimeField, other: &BlockKey) -> BlockKey {
        BlockKey {
            degree: self.degree + other.degree,
            weight: self.weight.add(field, &other.weight),
            parity: self.parity + other.parity,
        }
    }

    fn sub(&self, field: &PrimeField, other: &BlockKey) -> BlockKey {
        BlockKey {
            degree: self.degree - other.degree,
            weight: self.weight.add(field, &other.weight.neg(field)),
            parity: self.parity + other.parity,
        }
    }
}

impl fmt::Display for BlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "degree {} weight {} parity {}",
            self.degree, self.weight, self.parity
        )
    }
}

/// Keys of the basis elements. Algebras without a torus get the empty weight.
pub fn basis_keys(x: &GradedAlgebra) -> Result<Vec<BlockKey>> {
    let weights: Vec<Weight> = if x.family().is_some() {
        weight_decomposition(x)?.weights().to_vec()
    } else {
        vec![Weight(Vec::new()); x.dim()]
    };
    Ok((0..x.dim())
        .map(|i| BlockKey {
            degree: x.degree(i),
            weight: weights[i].clone(),
            parity: x.parity(i),
        })
        .collect())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Full,
    Blockwise,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "blockwise" => Ok(Mode::Blockwise),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::Blockwise => "blockwise",
        })
    }
}

/// A super-alternating bilinear form, stored on pairs `i < j` and odd diagonals.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cochain2 {
    values: BTreeMap<(usize, usize), Fp>,
}

impl Cochain2 {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the coordinate `c(i, j)` for `i ≤ j`.
    pub fn set(&mut self, x: &GradedAlgebra, i: usize, j: usize, v: Fp) -> Result<()> {
        if i > j || j >= x.dim() {
            return Err(Error::IndexOutOfRange {
                index: j,
                max: x.dim(),
            });
        }
        if i == j && !x.parity(i).is_odd() {
            return Err(Error::InvalidParameter(format!(
                "even diagonal ({i},{i}) is not a coordinate"
            )));
        }
        if v.is_zero() {
            self.values.remove(&(i, j));
        } else {
            self.values.insert((i, j), v);
        }
        Ok(())
    }

    pub fn coordinates(&self) -> impl Iterator<Item = ((usize, usize), Fp)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `c(e_a, e_b)` using super-antisymmetry for `a > b`.
    pub fn eval(&self, x: &GradedAlgebra, a: usize, b: usize) -> Fp {
        let f = x.field();
        if a <= b {
            self.values.get(&(a, b)).copied().unwrap_or(Fp::ZERO)
        } else {
            let v = self.values.get(&(b, a)).copied().unwrap_or(Fp::ZERO);
            f.signed(v, !x.parity(a).koszul(x.parity(b)))
        }
    }

    fn eval_vec(&self, x: &GradedAlgebra, u: &SparseVec, b: usize) -> Fp {
        let f = x.field();
        u.entries().iter().fold(Fp::ZERO, |acc, &(k, c)| {
            f.add(acc, f.mul(c, self.eval(x, k, b)))
        })
    }
}

/// `d¹f` for a dual vector `f` given in the dual basis.
pub fn d1_trivial(x: &GradedAlgebra, f: &SparseVec) -> Cochain2 {
    let field = x.field();
    let mut c = Cochain2::new();
    for i in 0..x.dim() {
        for j in i..x.dim() {
            if i == j && !x.parity(i).is_odd() {
                continue;
            }
            let v = field.neg(x.bracket_basis(i, j).dot(field, f));
            if !v.is_zero() {
                c.values.insert((i, j), v);
            }
        }
    }
    c
}

/// Admissible triples `i ≤ j ≤ k`: even indices never repeat.
fn admissible(x: &GradedAlgebra, i: usize, j: usize, k: usize) -> bool {
    !(i == j && !x.parity(i).is_odd()) && !(j == k && !x.parity(j).is_odd())
}

/// `d²c` on all admissible triples, as a sparse map.
pub fn d2_trivial(x: &GradedAlgebra, c: &Cochain2) -> BTreeMap<(usize, usize, usize), Fp> {
    let f = x.field();
    let n = x.dim();
    let mut out = BTreeMap::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                if !admissible(x, i, j, k) {
                    continue;
                }
                let (pi, pj, pk) = (x.parity(i), x.parity(j), x.parity(k));
                let t1 = f.signed(c.eval_vec(x, x.bracket_basis(i, j), k), pi.koszul(pk));
                let t2 = f.signed(c.eval_vec(x, x.bracket_basis(j, k), i), pj.koszul(pi));
                let t3 = f.signed(c.eval_vec(x, x.bracket_basis(k, i), j), pk.koszul(pj));
                let v = f.add(f.add(t1, t2), t3);
                if !v.is_zero() {
                    out.insert((i, j, k), v);
                }
            }
        }
    }
    out
}

/// Coordinates of one block of 2-cochains.
struct Block {
    key: Option<BlockKey>,
    coords: Vec<(usize, usize)>,
    col: HashMap<(usize, usize), usize>,
}

impl Block {
    fn new(key: Option<BlockKey>, coords: Vec<(usize, usize)>) -> Self {
        let col = coords.iter().enumerate().map(|(c, &p)| (p, c)).collect();
        Block { key, coords, col }
    }

    /// Adds `coef · c(a, b)` to a row under construction.
    fn push_c(
        &self,
        x: &GradedAlgebra,
        row: &mut Vec<(usize, Fp)>,
        a: usize,
        b: usize,
        coef: Fp,
    ) -> Result<()> {
        let f = x.field();
        let (pair, coef) = match a.cmp(&b) {
            std::cmp::Ordering::Less => ((a, b), coef),
            std::cmp::Ordering::Equal if x.parity(a).is_odd() => ((a, a), coef),
            std::cmp::Ordering::Equal => return Ok(()),
            std::cmp::Ordering::Greater => {
                ((b, a), f.signed(coef, !x.parity(a).koszul(x.parity(b))))
            }
        };
        match self.col.get(&pair) {
            Some(&c) => {
                row.push((c, coef));
                Ok(())
            }
            None => Err(Error::Consistency(format!(
                "cochain coordinate ({}, {}) falls outside its block",
                pair.0, pair.1
            ))),
        }
    }

    fn d2_row(&self, x: &GradedAlgebra, i: usize, j: usize, k: usize) -> Result<SparseVec> {
        let f = x.field();
        let (pi, pj, pk) = (x.parity(i), x.parity(j), x.parity(k));
        let mut row = Vec::new();
        for (u, w, z, s) in [
            (i, j, k, pi.koszul(pk)),
            (j, k, i, pj.koszul(pi)),
            (k, i, j, pk.koszul(pj)),
        ] {
            for &(m, v) in x.bracket_basis(u, w).entries() {
                self.push_c(x, &mut row, m, z, f.signed(v, s))?;
            }
        }
        Ok(SparseVec::from_entries(f, row))
    }

    fn d1_vectors(&self, x: &GradedAlgebra, ks: &[usize]) -> Vec<SparseVec> {
        let f = x.field();
        let pos: HashMap<usize, usize> = ks.iter().enumerate().map(|(p, &k)| (k, p)).collect();
        let mut acc: Vec<Vec<(usize, Fp)>> = vec![Vec::new(); ks.len()];
        for (c, &(a, b)) in self.coords.iter().enumerate() {
            for &(k, v) in x.bracket_basis(a, b).entries() {
                if let Some(&p) = pos.get(&k) {
                    acc[p].push((c, f.neg(v)));
                }
            }
        }
        acc.into_iter()
            .map(|e| SparseVec::from_entries(f, e))
            .collect()
    }

    fn to_cochain(&self, v: &SparseVec) -> Cochain2 {
        Cochain2 {
            values: v
                .entries()
                .iter()
                .map(|&(c, val)| (self.coords[c], val))
                .collect(),
        }
    }
}

/// Per-block numbers for `H²`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Block {
    pub degree: Option<i32>,
    pub weight: Option<Weight>,
    pub parity: Option<u32>,
    pub dim_c2: usize,
    pub rank_d2: usize,
    pub rank_d1: usize,
    pub h2: usize,
}

#[derive(Clone, Debug)]
pub struct H2Result {
    pub mode: Mode,
    pub dim: usize,
    pub blocks: Vec<H2Block>,
    /// Cocycles whose classes form a basis of `H²`.
    pub representatives: Vec<Cochain2>,
}

impl H2Result {
    /// Dimensions of the even and odd parts; blockwise mode only.
    pub fn parity_split(&self) -> Option<(usize, usize)> {
        let mut even = 0;
        let mut odd = 0;
        for b in &self.blocks {
            match b.parity? {
                0 => even += b.h2,
                _ => odd += b.h2,
            }
        }
        Some((even, odd))
    }
}

fn key_fields(key: &Option<BlockKey>) -> (Option<i32>, Option<Weight>, Option<u32>) {
    match key {
        Some(k) => (Some(k.degree), Some(k.weight.clone()), Some(k.parity.bit())),
        None => (None, None, None),
    }
}

/// Admissible unordered pairs `i ≤ j` grouped by key sum.
fn pairs_by_key(
    x: &GradedAlgebra,
    keys: &[BlockKey],
    odd_diagonal_only: bool,
) -> BTreeMap<BlockKey, Vec<(usize, usize)>> {
    let f = x.field();
    let mut map: BTreeMap<BlockKey, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..x.dim() {
        for j in i..x.dim() {
            if i == j && odd_diagonal_only && !x.parity(i).is_odd() {
                continue;
            }
            map.entry(keys[i].add(f, &keys[j]))
                .or_default()
                .push((i, j));
        }
    }
    map
}

fn indices_by_key(keys: &[BlockKey]) -> HashMap<BlockKey, Vec<usize>> {
    let mut map: HashMap<BlockKey, Vec<usize>> = HashMap::new();
    for (i, k) in keys.iter().enumerate() {
        map.entry(k.clone()).or_default().push(i);
    }
    map
}

/// Eliminates one block; returns its report and representatives.
fn h2_block(
    x: &GradedAlgebra,
    block: &Block,
    triples: impl Iterator<Item = (usize, usize, usize)>,
    d1_sources: &[usize],
) -> Result<(H2Block, Vec<Cochain2>)> {
    let f = *x.field();
    let d1 = block.d1_vectors(x, d1_sources);
    let mut ech = EchelonBasis::new(f, block.coords.len());
    for (i, j, k) in triples {
        let row = block.d2_row(x, i, j, k)?;
        if row.is_zero() {
            continue;
        }
        if let Some(v) = d1.iter().find(|v| !row.dot(&f, v).is_zero()) {
            return Err(Error::Consistency(format!(
                "d2 of a coboundary is nonzero at triple ({i}, {j}, {k}) on {:?}",
                v.entries().first()
            )));
        }
        if ech.rank() < block.coords.len() {
            ech.insert(row);
        }
    }
    let mut cob = EchelonBasis::new(f, block.coords.len());
    for v in &d1 {
        cob.insert(v.clone());
    }
    let rank_d1 = cob.rank();
    let rank_d2 = ech.rank();
    let h2 = block
        .coords
        .len()
        .checked_sub(rank_d2 + rank_d1)
        .ok_or_else(|| Error::Consistency("rank d1 + rank d2 exceeds dim C2".into()))?;
    let mut reps = Vec::new();
    if h2 > 0 {
        let rows = SparseMatrix::from_rows(block.coords.len(), ech.into_rref())?;
        let ker = rows.kernel_basis(&f);
        for v in ker.basis() {
            if cob.insert(v.clone()) {
                reps.push(block.to_cochain(v));
            }
        }
        if reps.len() != h2 {
            return Err(Error::Consistency("coboundaries are not cocycles".into()));
        }
    }
    let (degree, weight, parity) = key_fields(&block.key);
    Ok((
        H2Block {
            degree,
            weight,
            parity,
            dim_c2: block.coords.len(),
            rank_d2,
            rank_d1,
            h2,
        },
        reps,
    ))
}

/// `dim H²(X, F)` with representatives.
pub fn h2_trivial(x: &GradedAlgebra, mode: Mode) -> Result<H2Result> {
    let f = *x.field();
    let n = x.dim();
    let (blocks, representatives) = match mode {
        Mode::Full => {
            let coords: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i..n).map(move |j| (i, j)))
                .filter(|&(i, j)| i != j || x.parity(i).is_odd())
                .collect();
            let block = Block::new(None, coords);
            let triples = (0..n)
                .flat_map(|i| (i..n).flat_map(move |j| (j..n).map(move |k| (i, j, k))))
                .filter(|&(i, j, k)| admissible(x, i, j, k));
            let all: Vec<usize> = (0..n).collect();
            let (b, r) = h2_block(x, &block, triples, &all)?;
            (vec![b], r)
        }
        Mode::Blockwise => {
            let keys = basis_keys(x)?;
            let pairs = pairs_by_key(x, &keys, true);
            let singles = indices_by_key(&keys);
            let results: Vec<(H2Block, Vec<Cochain2>)> = pairs
                .par_iter()
                .map(|(key, coords)| {
                    let block = Block::new(Some(key.clone()), coords.clone());
                    let mut triples = Vec::new();
                    for (pk, list) in &pairs {
                        if let Some(ks) = singles.get(&key.sub(&f, pk)) {
                            for &(i, j) in list {
                                let start = ks.partition_point(|&k| k < j);
                                for &k in &ks[start..] {
                                    if admissible(x, i, j, k) {
                                        triples.push((i, j, k));
                                    }
                                }
                            }
                        }
                    }
                    let sources = singles.get(key).cloned().unwrap_or_default();
                    h2_block(x, &block, triples.into_iter(), &sources)
                })
                .collect::<Result<_>>()?;
            let mut blocks = Vec::with_capacity(results.len());
            let mut reps = Vec::new();
            for (b, r) in results {
                blocks.push(b);
                reps.extend(r);
            }
            (blocks, reps)
        }
    };
    Ok(H2Result {
        mode,
        dim: blocks.iter().map(|b| b.h2).sum(),
        blocks,
        representatives,
    })
}

/// Matrix of `f ↦ e_i·f` on dual coordinates.
pub fn coadjoint_matrix(x: &GradedAlgebra, i: usize) -> SparseMatrix {
    let f = x.field();
    let pi = x.parity(i);
    let rows = (0..x.dim())
        .map(|j| {
            SparseVec::from_entries(
                f,
                x.bracket_basis(i, j)
                    .entries()
                    .iter()
                    .map(|&(k, v)| (k, f.signed(v, !pi.koszul(x.parity(k))))),
            )
        })
        .collect();
    SparseMatrix::from_rows(x.dim(), rows).expect("brackets stay in range")
}

/// `e_i · f` for a dual vector `f`.
pub fn coadjoint(x: &GradedAlgebra, i: usize, f: &SparseVec) -> SparseVec {
    coadjoint_matrix(x, i).mul_vec(x.field(), f)
}

/// First basis pair violating `[x,y]·f = x·(y·f) − (−1)^{xy} y·(x·f)`.
pub fn coadjoint_representation_violation(x: &GradedAlgebra) -> Option<(usize, usize)> {
    let f = *x.field();
    let n = x.dim();
    let mats: Vec<SparseMatrix> = (0..n)
        .into_par_iter()
        .map(|i| coadjoint_matrix(x, i))
        .collect();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| (0..n).map(move |j| (i, j)))
        .find_first(|&(i, j)| {
            let mut lhs = SparseMatrix::zero(n, n);
            for &(k, v) in x.bracket_basis(i, j).entries() {
                lhs = lhs.axpy(&f, v, &mats[k]).unwrap();
            }
            let ab = mats[i].mul(&f, &mats[j]).unwrap();
            let ba = mats[j].mul(&f, &mats[i]).unwrap();
            let sign = f.signed(Fp::ONE, !x.parity(i).koszul(x.parity(j)));
            let rhs = ab.axpy(&f, sign, &ba).unwrap();
            lhs != rhs
        })
}

/// A homogeneous linear map `ψ: L → L*`, as `B(a,b) = ψ(e_a)(e_b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMapToDual {
    pub parity: Parity,
    entries: BTreeMap<(usize, usize), Fp>,
}

impl LinearMapToDual {
    pub fn new(parity: Parity, entries: impl IntoIterator<Item = ((usize, usize), Fp)>) -> Self {
        LinearMapToDual {
            parity,
            entries: entries.into_iter().filter(|e| !e.1.is_zero()).collect(),
        }
    }

    pub fn zero(parity: Parity) -> Self {
        Self::new(parity, [])
    }

    pub fn get(&self, a: usize, b: usize) -> Fp {
        self.entries.get(&(a, b)).copied().unwrap_or(Fp::ZERO)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), Fp)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `ψ(e_a)` as a dual vector.
    pub fn apply(&self, field: &PrimeField, a: usize) -> SparseVec {
        SparseVec::from_entries(
            field,
            self.entries
                .range((a, 0)..=(a, usize::MAX))
                .map(|(&(_, b), &v)| (b, v)),
        )
    }
}

/// Whether `ψ(x)(y) = −(−1)^{p(x)p(y)} ψ(y)(x)` on all basis pairs.
pub fn skewness_check(x: &GradedAlgebra, psi: &LinearMapToDual) -> bool {
    let f = x.field();
    psi.entries().all(|((a, b), v)| {
        let expect = f.signed(v, !x.parity(a).koszul(x.parity(b)));
        psi.get(b, a) == expect
    })
}

/// `ψ([e_a,e_b]) − (−1)^{p(ψ)p(a)} e_a·ψ(e_b) + (−1)^{(p(ψ)+p(a))p(b)} e_b·ψ(e_a)`.
pub fn derivation_defect(
    x: &GradedAlgebra,
    psi: &LinearMapToDual,
    a: usize,
    b: usize,
) -> SparseVec {
    let f = x.field();
    let (pa, pb, pp) = (x.parity(a), x.parity(b), psi.parity);
    let mut lhs = SparseVec::new();
    for &(k, v) in x.bracket_basis(a, b).entries() {
        lhs = lhs.axpy(f, v, &psi.apply(f, k));
    }
    let t1 = coadjoint(x, a, &psi.apply(f, b));
    let t2 = coadjoint(x, b, &psi.apply(f, a));
    let lhs = lhs.axpy(f, f.signed(Fp::ONE, !pp.koszul(pa)), &t1);
    lhs.axpy(f, f.signed(Fp::ONE, (pp + pa).koszul(pb)), &t2)
}

/// Whether `ψ` is a superderivation, by the identity on every basis pair.
pub fn is_derivation(x: &GradedAlgebra, psi: &LinearMapToDual) -> bool {
    let n = x.dim();
    (0..n)
        .into_par_iter()
        .all(|a| (0..n).all(|b| derivation_defect(x, psi, a, b).is_zero()))
}

/// Per-block numbers for `Der(X, X*)` and `Inn(X, X*)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerBlock {
    pub degree: i32,
    pub weight: Weight,
    pub parity: u32,
    pub unknowns: usize,
    pub rank_equations: usize,
    pub der_dim: usize,
    pub inn_dim: usize,
}

#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub blocks: Vec<DerBlock>,
    /// Basis of `Der(X, X*)`; populated only when requested.
    pub basis: Vec<LinearMapToDual>,
    /// Number of inner maps that failed the derivation equations.
    pub inner_not_derivations: usize,
}

impl DerivationSpace {
    pub fn der_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.der_dim).sum()
    }

    pub fn inn_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.inn_dim).sum()
    }

    /// `dim H¹(X, X*) = dim Der − dim Inn`.
    pub fn h1(&self) -> usize {
        self.der_dim() - self.inn_dim()
    }
}

/// Solves the superderivation equations blockwise; with `with_basis` the
/// kernel vectors are also returned as maps.
pub fn derivation_space(x: &GradedAlgebra, with_basis: bool) -> Result<DerivationSpace> {
    let f = *x.field();
    let n = x.dim();
    let keys = basis_keys(x)?;
    let singles = indices_by_key(&keys);
    let mut ordered: BTreeMap<BlockKey, Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..n {
        for b in 0..n {
            ordered
                .entry(keys[a].add(&f, &keys[b]))
                .or_default()
                .push((a, b));
        }
    }
    // equations use x ≤ y; x = y even gives 2E = 0
    let eq_pairs = pairs_by_key(x, &keys, true);

    type BlockOut = (DerBlock, Vec<LinearMapToDual>, usize);
    let results: Vec<BlockOut> = ordered
        .par_iter()
        .map(|(key, coords)| {
            let col: HashMap<(usize, usize), usize> =
                coords.iter().enumerate().map(|(c, &p)| (p, c)).collect();
            let lookup = |a: usize, b: usize| {
                col.get(&(a, b)).copied().ok_or_else(|| {
                    Error::Consistency(format!(
                        "derivation unknown ({a}, {b}) falls outside its block"
                    ))
                })
            };
            let mut ech = EchelonBasis::new(f, coords.len());
            for (pk, list) in &eq_pairs {
                let Some(zs) = singles.get(&key.sub(&f, pk)) else {
                    continue;
                };
                for &(a, b) in list {
                    let sign_ab = f.signed(Fp::ONE, x.parity(a).koszul(x.parity(b)));
                    for &z in zs {
                        if ech.rank() == coords.len() {
                            break;
                        }
                        let mut row = Vec::new();
                        for &(k, v) in x.bracket_basis(a, b).entries() {
                            row.push((lookup(k, z)?, v));
                        }
                        for &(k, v) in x.bracket_basis(a, z).entries() {
                            row.push((lookup(b, k)?, f.mul(sign_ab, v)));
                        }
                        for &(k, v) in x.bracket_basis(b, z).entries() {
                            row.push((lookup(a, k)?, f.neg(v)));
                        }
                        let row = SparseVec::from_entries(&f, row);
                        if !row.is_zero() {
                            ech.insert(row);
                        }
                    }
                }
            }
            // inner maps: B_f(a,b) = −f([a,b]) for f = e_k*, key(e_k) = key
            let sources = singles.get(key).cloned().unwrap_or_default();
            let pos: HashMap<usize, usize> =
                sources.iter().enumerate().map(|(p, &k)| (k, p)).collect();
            let mut inner: Vec<Vec<(usize, Fp)>> = vec![Vec::new(); sources.len()];
            for (c, &(a, b)) in coords.iter().enumerate() {
                for &(k, v) in x.bracket_basis(a, b).entries() {
                    if let Some(&p) = pos.get(&k) {
                        inner[p].push((c, f.neg(v)));
                    }
                }
            }
            let mut inn = EchelonBasis::new(f, coords.len());
            let mut bad_inner = 0;
            for e in inner {
                let v = SparseVec::from_entries(&f, e);
                if ech.rows().iter().any(|r| !r.dot(&f, &v).is_zero()) {
                    bad_inner += 1;
                }
                inn.insert(v);
            }
            let rank = ech.rank();
            let mut basis = Vec::new();
            if with_basis && rank < coords.len() {
                let m = SparseMatrix::from_rows(coords.len(), ech.into_rref())?;
                for v in m.kernel_basis(&f).basis() {
                    basis.push(LinearMapToDual::new(
                        key.parity,
                        v.entries().iter().map(|&(c, val)| (coords[c], val)),
                    ));
                }
            }
            Ok((
                DerBlock {
                    degree: key.degree,
                    weight: key.weight.clone(),
                    parity: key.parity.bit(),
                    unknowns: coords.len(),
                    rank_equations: rank,
                    der_dim: coords.len() - rank,
                    inn_dim: inn.rank(),
                },
                basis,
                bad_inner,
            ))
        })
        .collect::<Result<_>>()?;
    let mut out = DerivationSpace {
        blocks: Vec::new(),
        basis: Vec::new(),
        inner_not_derivations: 0,
    };
    for (b, basis, bad) in results {
        out.blocks.push(b);
        out.basis.extend(basis);
        out.inner_not_derivations += bad;
    }
    Ok(out)
}

/// The inner map `ψ_f(x) = (−1)^{p(x)p(f)} x·f` for the dual basis vector `e_k*`.
pub fn inner_map(x: &GradedAlgebra, k: usize) -> LinearMapToDual {
    let f = x.field();
    let mut entries = Vec::new();
    for a in 0..x.dim() {
        for b in 0..x.dim() {
            let v = x.bracket_basis(a, b).get(k);
            if !v.is_zero() {
                entries.push(((a, b), f.neg(v)));
            }
        }
    }
    LinearMapToDual::new(x.parity(k), entries)
}

/// `dim H¹(X, X*)`.
pub fn h1_dual(x: &GradedAlgebra) -> Result<usize> {
    Ok(derivation_space(x, false)?.h1())
}

/// JSON form of a cohomology computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub family: String,
    pub p: u32,
    pub n: usize,
    pub t: Vec<u32>,
    pub mode: Option<Mode>,
    pub h2_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h2_even_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h2_odd_dim: Option<usize>,
    pub h1_dual_dim: Option<usize>,
    pub per_block: Vec<H2Block>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_block_h1: Vec<DerBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CohomologyReport {
    pub fn new(x: &GradedAlgebra) -> Self {
        let (family, n, t) = match x.params() {
            Some(p) => (p.family.to_string(), p.n, p.t.clone()),
            None => (x.name().to_string(), 0, vec![]),
        };
        CohomologyReport {
            family,
            p: x.field().characteristic(),
            n,
            t,
            mode: None,
            h2_dim: None,
            h2_even_dim: None,
            h2_odd_dim: None,
            h1_dual_dim: None,
            per_block: Vec::new(),
            per_block_h1: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn with_h2(mut self, r: &H2Result) -> Self {
        self.mode = Some(r.mode);
        self.h2_dim = Some(r.dim);
        if let Some((e, o)) = r.parity_split() {
            self.h2_even_dim = Some(e);
            self.h2_odd_dim = Some(o);
        }
        self.per_block = r.blocks.clone();
        self
    }

    pub fn with_h1(mut self, d: &DerivationSpace) -> Self {
        self.h1_dual_dim = Some(d.h1());
        self.per_block_h1 = d.blocks.clone();
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abelian(parities: &[Parity]) -> GradedAlgebra {
        let f = PrimeField::new(5).unwrap();
        GradedAlgebra::custom(
            f,
            "abelian",
            parities.to_vec(),
            vec![0; parities.len()],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn abelian_examples() {
        let x = abelian(&[Parity::Even, Parity::Even]);
        assert_eq!(h2_trivial(&x, Mode::Full).unwrap().dim, 1);
        let odd = abelian(&[Parity::Odd]);
        let r = h2_trivial(&odd, Mode::Blockwise).unwrap();
        assert_eq!(r.dim, 1);
        assert_eq!(r.representatives[0].coordinates().next().unwrap().0, (0, 0));
        let one = abelian(&[Parity::Even]);
        assert_eq!(h1_dual(&one).unwrap(), 1);
        assert!(coadjoint(&one, 0, &SparseVec::unit(0)).is_zero());
    }

    #[test]
    fn heisenberg() {
        let f = PrimeField::new(5).unwrap();
        let x = GradedAlgebra::custom(
            f,
            "heisenberg",
            vec![Parity::Even; 3],
            vec![1, 1, 2],
            &[(0, 1, SparseVec::unit(2))],
        )
        .unwrap();
        let r = h2_trivial(&x, Mode::Full).unwrap();
        assert_eq!(r.dim, 2);
        assert_eq!(h2_trivial(&x, Mode::Blockwise).unwrap().dim, 2);
        let c = d1_trivial(&x, &SparseVec::unit(2));
        assert_eq!(c.eval(&x, 0, 1), f.elem(-1));
        assert_eq!(c.eval(&x, 1, 0), f.elem(1));
        for rep in &r.representatives {
            assert!(d2_trivial(&x, rep).is_empty());
        }
    }

    #[test]
    fn skewness_of_zero() {
        let x = abelian(&[Parity::Odd]);
        assert!(skewness_check(&x, &LinearMapToDual::zero(Parity::Even)));
    }
}
