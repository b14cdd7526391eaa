//! Exact sparse linear algebra over `F_p`.
//!
//! Everything here works on row vectors. Elimination is incremental: rows are
//! inserted into an [`EchelonBasis`], each reduced only against existing pivots,
//! so block-diagonal inputs never fill in across blocks.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};

/// Below this many columns `rank` switches to dense elimination.
pub const DENSE_CUTOFF: usize = 64;

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Fp)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, Fp::ONE)],
        }
    }

    /// Builds from unsorted entries, summing duplicates and dropping zeros.
    pub fn from_entries(
        field: &PrimeField,
        entries: impl IntoIterator<Item = (usize, Fp)>,
    ) -> Self {
        let mut raw: Vec<(usize, Fp)> = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        raw.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(usize, Fp)> = Vec::with_capacity(raw.len());
        for (i, v) in raw {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = field.add(last.1, v),
                _ => out.push((i, v)),
            }
        }
        out.retain(|e| !e.1.is_zero());
        SparseVec { entries: out }
    }

    /// Wraps entries that are already sorted, distinct and nonzero.
    pub fn from_sorted(entries: Vec<(usize, Fp)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|e| !e.1.is_zero()));
        SparseVec { entries }
    }

    pub fn from_dense(values: &[Fp]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, &v)| (i, v))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Fp> {
        let mut out = vec![Fp::ZERO; len];
        for &(i, v) in &self.entries {
            out[i] = v;
        }
        out
    }

    pub fn entries(&self) -> &[(usize, Fp)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Fp)> {
        self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lead(&self) -> Option<(usize, Fp)> {
        self.entries.first().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|e| e.0)
    }

    pub fn get(&self, i: usize) -> Fp {
        match self.entries.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.entries[k].1,
            Err(_) => Fp::ZERO,
        }
    }

    pub fn scale(&self, field: &PrimeField, c: Fp) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec {
            entries: self
                .entries
                .iter()
                .map(|&(i, v)| (i, field.mul(c, v)))
                .collect(),
        }
    }

    /// `self + c · other`.
    pub fn axpy(&self, field: &PrimeField, c: Fp, other: &SparseVec) -> SparseVec {
        if c.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((b[j].0, field.mul(c, b[j].1)));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let v = field.add(a[i].1, field.mul(c, b[j].1));
                    if !v.is_zero() {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[j..].iter().map(|&(k, v)| (k, field.mul(c, v))));
        SparseVec { entries: out }
    }

    pub fn dot(&self, field: &PrimeField, other: &SparseVec) -> Fp {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = Fp::ZERO;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = field.add(acc, field.mul(a[i].1, b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }
}

/// Row-major sparse matrix; each row a [`SparseVec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            ncols,
            rows: vec![SparseVec::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            ncols: n,
            rows: (0..n).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_rows(ncols: usize, rows: Vec<SparseVec>) -> Result<Self> {
        for r in &rows {
            if let Some(k) = r.max_index() {
                if k >= ncols {
                    return Err(Error::AmbientMismatch {
                        left: k + 1,
                        right: ncols,
                    });
                }
            }
        }
        Ok(SparseMatrix { ncols, rows })
    }

    pub fn from_dense(ncols: usize, rows: &[Vec<Fp>]) -> Result<Self> {
        Self::from_rows(
            ncols,
            rows.iter().map(|r| SparseVec::from_dense(r)).collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<SparseVec> {
        self.rows
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(SparseVec::nnz).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Fp>> {
        self.rows.iter().map(|r| r.to_dense(self.ncols)).collect()
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<Vec<(usize, Fp)>> = vec![Vec::new(); self.ncols];
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r.entries() {
                cols[j].push((i, v));
            }
        }
        SparseMatrix {
            ncols: self.rows.len(),
            rows: cols.into_iter().map(SparseVec::from_sorted).collect(),
        }
    }

    /// `M · v` for a column vector `v`.
    pub fn mul_vec(&self, field: &PrimeField, v: &SparseVec) -> SparseVec {
        SparseVec::from_sorted(
            self.rows
                .iter()
                .enumerate()
                .filter_map(|(i, r)| {
                    let d = r.dot(field, v);
                    (!d.is_zero()).then_some((i, d))
                })
                .collect(),
        )
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, field: &PrimeField, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols != other.nrows() {
            return Err(Error::LengthMismatch {
                left: self.ncols,
                right: other.nrows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let acc = r.entries().iter().flat_map(|&(k, a)| {
                    other.rows[k]
                        .entries()
                        .iter()
                        .map(move |&(j, b)| (j, field.mul(a, b)))
                });
                SparseVec::from_entries(field, acc)
            })
            .collect();
        Ok(SparseMatrix {
            ncols: other.ncols,
            rows,
        })
    }

    /// `self + c · other`.
    pub fn axpy(&self, field: &PrimeField, c: Fp, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols != other.ncols || self.nrows() != other.nrows() {
            return Err(Error::LengthMismatch {
                left: self.nrows(),
                right: other.nrows(),
            });
        }
        Ok(SparseMatrix {
            ncols: self.ncols,
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.axpy(field, c, b))
                .collect(),
        })
    }

    /// Row order used for elimination: fewest nonzeros first, then smallest leading column.
    fn pivot_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.rows.len())
            .filter(|&i| !self.rows[i].is_zero())
            .collect();
        order.sort_by_key(|&i| (self.rows[i].nnz(), self.rows[i].lead().map(|e| e.0), i));
        order
    }

    fn echelon(&self, field: &PrimeField) -> EchelonBasis {
        let mut ech = EchelonBasis::new(*field, self.ncols);
        for i in self.pivot_order() {
            ech.insert(self.rows[i].clone());
        }
        ech
    }

    pub fn rank(&self, field: &PrimeField) -> usize {
        if self.ncols < DENSE_CUTOFF {
            dense_rank(field, &self.to_dense())
        } else {
            self.rank_sparse(field)
        }
    }

    /// Rank by sparse elimination regardless of size.
    pub fn rank_sparse(&self, field: &PrimeField) -> usize {
        self.echelon(field).rank()
    }

    /// Reduced row echelon form with zero rows dropped; canonical for the row space.
    pub fn rref(&self, field: &PrimeField) -> SparseMatrix {
        SparseMatrix {
            ncols: self.ncols,
            rows: self.echelon(field).into_rref(),
        }
    }

    /// `{v : M v = 0}`.
    pub fn kernel_basis(&self, field: &PrimeField) -> Subspace {
        let rref = self.rref(field);
        let kernel = kernel_from_rref(field, self.ncols, rref.rows());
        assert_eq!(
            rref.nrows() + kernel.len(),
            self.ncols,
            "rank-nullity violated"
        );
        Subspace::span(*field, self.ncols, kernel).expect("kernel vectors lie in the ambient space")
    }

    /// Matrix-market style coordinate dump (1-based), for debugging.
    pub fn to_matrix_market(&self) -> String {
        let mut out = String::from("%%MatrixMarket matrix coordinate integer general\n");
        let _ = writeln!(out, "{} {} {}", self.rows.len(), self.ncols, self.nnz());
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r.entries() {
                let _ = writeln!(out, "{} {} {}", i + 1, j + 1, v);
            }
        }
        out
    }
}

fn kernel_from_rref(field: &PrimeField, ncols: usize, rows: &[SparseVec]) -> Vec<SparseVec> {
    let mut is_pivot = vec![false; ncols];
    for r in rows {
        is_pivot[r.lead().expect("rref rows are nonzero").0] = true;
    }
    let mut kernel: Vec<Vec<(usize, Fp)>> = vec![Vec::new(); ncols];
    for r in rows {
        let lead = r.lead().unwrap().0;
        for &(j, v) in &r.entries()[1..] {
            kernel[j].push((lead, field.neg(v)));
        }
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut e = std::mem::take(&mut kernel[f]);
            e.push((f, Fp::ONE));
            SparseVec::from_entries(field, e)
        })
        .collect()
}

/// Textbook dense Gaussian elimination; used for small column counts.
pub fn dense_rank(field: &PrimeField, rows: &[Vec<Fp>]) -> usize {
    let mut m: Vec<Vec<Fp>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = field.inv(m[rank][col]).expect("pivot is nonzero");
        for v in m[rank].iter_mut() {
            *v = field.mul(*v, inv);
        }
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let c = field.neg(row[col]);
            for (x, &y) in row.iter_mut().zip(&pivot) {
                *x = field.add(*x, field.mul(c, y));
            }
        }
        rank += 1;
    }
    rank
}

/// Incrementally built semi-echelon basis: every stored row has a distinct
/// leading column with coefficient one.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    field: PrimeField,
    ncols: usize,
    pivot_row: Vec<usize>,
    rows: Vec<SparseVec>,
}

const NO_PIVOT: usize = usize::MAX;

impl EchelonBasis {
    pub fn new(field: PrimeField, ncols: usize) -> Self {
        EchelonBasis {
            field,
            ncols,
            pivot_row: vec![NO_PIVOT; ncols],
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Removes every pivot column from `v`.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut cur = v.clone();
        let mut from = 0usize;
        loop {
            let next = cur
                .entries()
                .iter()
                .find(|&&(c, _)| c >= from && self.pivot_row[c] != NO_PIVOT)
                .copied();
            let Some((c, val)) = next else {
                return cur;
            };
            let row = &self.rows[self.pivot_row[c]];
            cur = cur.axpy(&self.field, self.field.neg(val), row);
            from = c + 1;
        }
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the basis if independent; returns whether it was.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut cur = v;
        while let Some((c, val)) = cur.lead() {
            debug_assert!(c < self.ncols);
            let pr = self.pivot_row[c];
            if pr == NO_PIVOT {
                let inv = self.field.inv(val).expect("lead is nonzero");
                let normalized = cur.scale(&self.field, inv);
                self.pivot_row[c] = self.rows.len();
                self.rows.push(normalized);
                return true;
            }
            cur = cur.axpy(&self.field, self.field.neg(val), &self.rows[pr]);
        }
        false
    }

    /// Back-substitutes into reduced row echelon form, ordered by leading column.
    pub fn into_rref(self) -> Vec<SparseVec> {
        let field = self.field;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(self.rows[i].lead().unwrap().0));
        let mut done: Vec<Option<SparseVec>> = vec![None; self.rows.len()];
        for &i in &order {
            let mut cur = self.rows[i].clone();
            let lead = cur.lead().unwrap().0;
            let mut from = lead + 1;
            loop {
                let next = cur
                    .entries()
                    .iter()
                    .find(|&&(c, _)| c >= from && self.pivot_row[c] != NO_PIVOT)
                    .copied();
                let Some((c, val)) = next else { break };
                let reduced = done[self.pivot_row[c]]
                    .as_ref()
                    .expect("higher pivots finished first");
                cur = cur.axpy(&field, field.neg(val), reduced);
                from = c + 1;
            }
            done[i] = Some(cur);
        }
        let mut out: Vec<SparseVec> = done.into_iter().map(Option::unwrap).collect();
        out.sort_by_key(|r| r.lead().unwrap().0);
        out
    }
}

/// A subspace of `F_p^ambient`, stored by its canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: PrimeField,
    ambient: usize,
    basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            basis: (0..ambient).map(SparseVec::unit).collect(),
        }
    }

    pub fn span(
        field: PrimeField,
        ambient: usize,
        rows: impl IntoIterator<Item = SparseVec>,
    ) -> Result<Self> {
        let m = SparseMatrix::from_rows(ambient, rows.into_iter().collect())?;
        Ok(Subspace {
            field,
            ambient,
            basis: m.rref(&field).into_rows(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            })
        } else {
            Ok(())
        }
    }

    pub fn contains(&self, v: &SparseVec) -> Result<bool> {
        if v.max_index().is_some_and(|k| k >= self.ambient) {
            return Err(Error::AmbientMismatch {
                left: v.max_index().unwrap() + 1,
                right: self.ambient,
            });
        }
        let mut cur = v.clone();
        for r in &self.basis {
            let (lead, _) = r.lead().unwrap();
            let c = cur.get(lead);
            if !c.is_zero() {
                cur = cur.axpy(&self.field, self.field.neg(c), r);
            }
        }
        Ok(cur.is_zero())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        for r in &self.basis {
            if !other.contains(r)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Subspace::span(
            self.field,
            self.ambient,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    /// Intersection through the left kernel of the stacked bases.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let k = self.dim();
        let stacked = SparseMatrix::from_rows(
            self.ambient,
            self.basis.iter().chain(&other.basis).cloned().collect(),
        )?;
        let left_kernel = stacked.transpose().kernel_basis(&self.field);
        let field = self.field;
        let vectors = left_kernel.basis.iter().map(|w| {
            let mut acc = SparseVec::new();
            for &(i, c) in w.entries().iter().take_while(|e| e.0 < k) {
                acc = acc.axpy(&field, c, &self.basis[i]);
            }
            acc
        });
        Subspace::span(field, self.ambient, vectors.collect::<Vec<_>>())
    }

    /// Canonical bases make equality a direct comparison.
    pub fn equal(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        Ok(self.basis == other.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let f = f5();
        let id = SparseMatrix::identity(5);
        assert_eq!(id.rank(&f), 5);
        assert_eq!(id.kernel_basis(&f).dim(), 0);
        let z = SparseMatrix::zero(3, 4);
        assert_eq!(z.rank(&f), 0);
        assert_eq!(z.kernel_basis(&f).dim(), 4);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = f5();
        let rows = vec![
            vec![f.elem(1), f.elem(2), f.elem(0), f.elem(3)],
            vec![f.elem(2), f.elem(4), f.elem(1), f.elem(1)],
            vec![f.elem(3), f.elem(1), f.elem(1), f.elem(4)],
        ];
        let m = SparseMatrix::from_dense(4, &rows).unwrap();
        let k = m.kernel_basis(&f);
        assert_eq!(m.rank(&f) + k.dim(), 4);
        for v in k.basis() {
            assert!(m.mul_vec(&f, v).is_zero());
        }
    }

    #[test]
    fn rref_is_idempotent_and_order_independent() {
        let f = f5();
        let rows = vec![
            SparseVec::from_entries(&f, [(0, f.elem(2)), (3, f.elem(1))]),
            SparseVec::from_entries(&f, [(1, f.elem(3)), (3, f.elem(4))]),
            SparseVec::from_entries(&f, [(0, f.elem(4)), (1, f.elem(3)), (3, f.elem(1))]),
        ];
        let a = SparseMatrix::from_rows(4, rows.clone()).unwrap().rref(&f);
        let mut rev = rows;
        rev.reverse();
        let b = SparseMatrix::from_rows(4, rev).unwrap().rref(&f);
        assert_eq!(a, b);
        assert_eq!(a.rref(&f), a);
    }

    #[test]
    fn subspace_basics() {
        let f = f5();
        let u = Subspace::span(f, 3, [SparseVec::unit(0), SparseVec::unit(1)]).unwrap();
        let v = Subspace::span(f, 3, [SparseVec::unit(2)]).unwrap();
        assert!(u.intersect(&u).unwrap().equal(&u).unwrap());
        assert_eq!(u.intersect(&v).unwrap().dim(), 0);
        assert_eq!(u.sum(&v).unwrap(), Subspace::full(f, 3));
        let w = Subspace::span(f, 4, [SparseVec::unit(0)]).unwrap();
        assert!(matches!(u.sum(&w), Err(Error::AmbientMismatch { .. })));
        assert!(u
            .contains(&SparseVec::from_entries(
                &f,
                [(0, f.elem(3)), (1, f.elem(1))]
            ))
            .unwrap());
        assert!(!u.contains(&SparseVec::unit(2)).unwrap());
    }

    #[test]
    fn echelon_insert_reports_dependence() {
        let f = f5();
        let mut e = EchelonBasis::new(f, 3);
        assert!(e.insert(SparseVec::from_entries(
            &f,
            [(0, f.elem(2)), (1, f.elem(1))]
        )));
        assert!(!e.insert(SparseVec::from_entries(
            &f,
            [(0, f.elem(4)), (1, f.elem(2))]
        )));
        assert!(e.insert(SparseVec::unit(1)));
        assert!(e.contains(&SparseVec::unit(0)));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn matrix_market_dump() {
        let m = SparseMatrix::identity(2);
        let txt = m.to_matrix_market();
        assert!(txt.contains("2 2 2"));
        assert!(txt.ends_with("2 2 1\n"));
    }
}
