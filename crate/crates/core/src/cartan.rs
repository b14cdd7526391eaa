//! The odd Hamiltonian superalgebra `HO(n,n;t)` and the odd contact
//! superalgebra `KO(n,n+1;t)` as explicit graded algebras.
//!
//! Basis elements are labelled by the monomial `a` of `T_H(a)` or `T_K(a)`.
//! Structure constants come from the closed bracket forms
//! `[T_H(a),T_H(b)] = T_H(T_H(a)(b))` and
//! `[T_K(a),T_K(b)] = T_K(T_K(a)(b) - (-1)^{p(a)} 2 ∂_{2n+1}(a) b)`,
//! re-expressed through the argument polynomial; the Witt-level bracket is
//! kept only as a cross-check.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::divided_power::{Context, Monomial, Poly, Signature};
use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::linalg::{SparseMatrix, SparseVec};
use crate::parity::Parity;
use crate::witt::WittElement;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    HO,
    KO,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::HO => "HO",
            Family::KO => "KO",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "HO" => Ok(Family::HO),
            "KO" => Ok(Family::KO),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// Parameters `(family, n, t, p)` of one algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanParams {
    pub family: Family,
    pub n: usize,
    pub t: Vec<u32>,
    pub p: u32,
}

impl CartanParams {
    pub fn new(family: Family, n: usize, t: &[u32], p: u32) -> Result<Self> {
        PrimeField::new(p)?;
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if t.len() != n {
            return Err(Error::InvalidParameter(format!(
                "t has {} entries, expected {n}",
                t.len()
            )));
        }
        if t.contains(&0) {
            return Err(Error::InvalidParameter("t entries must be positive".into()));
        }
        Ok(CartanParams {
            family,
            n,
            t: t.to_vec(),
            p,
        })
    }

    pub fn signature(&self) -> Result<Signature> {
        match self.family {
            Family::HO => Signature::hamiltonian(self.n, &self.t, self.p),
            Family::KO => Signature::contact(self.n, &self.t, self.p),
        }
    }
}

/// `ω₀ = ⟨n+1,…,2n⟩` and `ω₁ = ⟨n+1,…,2n+1⟩` as odd bit sets.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Omega {
    pub omega0: u32,
    pub omega1: u32,
}

impl Omega {
    pub fn new(n: usize) -> Self {
        Omega {
            omega0: (1u32 << n) - 1,
            omega1: (1u32 << (n + 1)) - 1,
        }
    }
}

fn paired_n(sig: &Signature) -> Result<usize> {
    match sig.context() {
        Context::General => Err(Error::WrongContext("a Hamiltonian or contact signature")),
        _ => Ok(sig.m()),
    }
}

/// The Euler operator `𝔇 = Σ_{i=1}^{2n} x_i ∂_i`.
pub fn euler(sig: &Signature) -> Result<WittElement> {
    if sig.context() != Context::Contact {
        return Err(Error::WrongContext("a contact signature"));
    }
    let n = sig.m();
    let mut d = WittElement::zero(sig);
    for i in 1..=2 * n {
        d.add_term(i, &Poly::var(sig, i)?)?;
    }
    Ok(d)
}

/// `T_H(a) = Σ_{i=1}^{2n} (-1)^{p(∂_i)p(a)} ∂_i(a) ∂_{i′}`.
pub fn t_h(a: &Poly) -> Result<WittElement> {
    let sig = a.signature();
    let n = paired_n(sig)?;
    let f = *sig.field();
    let mut out = WittElement::zero(sig);
    for (k, part) in a.homogeneous_parts().iter().enumerate() {
        if part.is_zero() {
            continue;
        }
        let odd_part = k == 1;
        for i in 1..=2 * n {
            let d = part.partial(i)?;
            if d.is_zero() {
                continue;
            }
            let negate = sig.index_parity(i)?.is_odd() && odd_part;
            out.add_term(sig.prime_index(i)?, &d.scale(f.signed(Fp::ONE, negate)))?;
        }
    }
    Ok(out)
}

/// `T_K(a) = T_H(a) + (-1)^{p(a)} ∂_{2n+1}(a) 𝔇 + (𝔇(a) - 2a) ∂_{2n+1}`.
pub fn t_k(a: &Poly) -> Result<WittElement> {
    let sig = a.signature();
    let d = euler(sig)?;
    let f = *sig.field();
    let last = sig.nvars();
    let mut out = t_h(a)?;
    for (k, part) in a.homogeneous_parts().iter().enumerate() {
        if part.is_zero() {
            continue;
        }
        let dz = part.partial(last)?;
        if !dz.is_zero() {
            let c = f.signed(Fp::ONE, k == 1);
            for (i, xi) in d.coeffs() {
                out.add_term(i, &dz.mul(xi)?.scale(c))?;
            }
        }
        let coeff = d.apply(part)?.sub(&part.scale(f.elem(2)))?;
        out.add_term(last, &coeff)?;
    }
    Ok(out)
}

/// The operator `T_H` or `T_K` for a family.
pub fn t_op(family: Family, a: &Poly) -> Result<WittElement> {
    match family {
        Family::HO => t_h(a),
        Family::KO => t_k(a),
    }
}

/// Argument `c` with `[T(a), T(b)] = T(c)`, from the closed bracket forms.
pub fn closed_form_argument(family: Family, a: &Poly, b: &Poly) -> Result<Poly> {
    let ta = t_op(family, a)?;
    bracket_argument_with(family, &ta, a, b)
}

fn bracket_argument_with(family: Family, ta: &WittElement, a: &Poly, b: &Poly) -> Result<Poly> {
    let mut c = ta.apply(b)?;
    if family == Family::KO {
        let sig = a.signature();
        let f = *sig.field();
        let last = sig.nvars();
        for (k, part) in a.homogeneous_parts().iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            // - (-1)^{p(a)} 2 ∂_{2n+1}(a) b
            let coef = f.signed(f.elem(-2), k == 1);
            c.add_scaled(coef, &part.partial(last)?.mul(b)?)?;
        }
    }
    Ok(c)
}

/// Rank of the coefficient matrix of `T` over the full monomial basis of
/// `O`, written in the `x^(α)x^u ∂_j` basis of `W`.
pub fn image_rank(family: Family, sig: &Signature) -> Result<usize> {
    let monos = sig.basis();
    let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let nv = sig.nvars();
    let rows = monos
        .par_iter()
        .map(|m| {
            let w = t_op(family, &Poly::monomial(sig, m.clone()))?;
            let mut entries = Vec::new();
            for (j, f) in w.coeffs() {
                for (mon, c) in f.terms() {
                    entries.push((index[mon] * nv + (j - 1), c));
                }
            }
            Ok(SparseVec::from_entries(sig.field(), entries))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_rows(monos.len() * nv, rows)?.rank(sig.field()))
}

#[derive(Clone, Debug)]
struct CartanData {
    family: Family,
    params: CartanParams,
    signature: Signature,
    labels: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

/// A finite-dimensional Lie superalgebra with a homogeneous basis, a Z-grading
/// and sparse structure constants.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    field: PrimeField,
    name: String,
    cartan: Option<CartanData>,
    parity: Vec<Parity>,
    degree: Vec<i32>,
    // row-major dim × dim table of brackets of basis elements
    sc: Vec<SparseVec>,
    simplicity_asserted: bool,
}

impl GradedAlgebra {
    /// An algebra given by explicit brackets `[e_i, e_j]` for listed pairs;
    /// the swapped pairs are filled in by super-antisymmetry.
    pub fn custom(
        field: PrimeField,
        name: &str,
        parity: Vec<Parity>,
        degree: Vec<i32>,
        brackets: &[(usize, usize, SparseVec)],
    ) -> Result<Self> {
        let dim = parity.len();
        if degree.len() != dim {
            return Err(Error::LengthMismatch {
                left: degree.len(),
                right: dim,
            });
        }
        let mut sc = vec![SparseVec::new(); dim * dim];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim || v.max_index().is_some_and(|k| k >= dim) {
                return Err(Error::InvalidParameter(format!(
                    "bracket ({i},{j}) out of range"
                )));
            }
            if i == j && !parity[i].is_odd() && !v.is_zero() {
                return Err(Error::InvalidParameter(format!(
                    "even element {i} has nonzero square"
                )));
            }
            sc[i * dim + j] = v.clone();
            if i != j {
                let neg = !parity[i].koszul(parity[j]);
                sc[j * dim + i] = v.scale(&field, field.signed(Fp::ONE, neg));
            }
        }
        Ok(GradedAlgebra {
            field,
            name: name.to_string(),
            cartan: None,
            parity,
            degree,
            sc,
            simplicity_asserted: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.parity.len()
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> Option<Family> {
        self.cartan.as_ref().map(|c| c.family)
    }

    pub fn params(&self) -> Option<&CartanParams> {
        self.cartan.as_ref().map(|c| &c.params)
    }

    pub fn signature(&self) -> Option<&Signature> {
        self.cartan.as_ref().map(|c| &c.signature)
    }

    /// Monomial labels (empty for custom algebras).
    pub fn labels(&self) -> &[Monomial] {
        self.cartan.as_ref().map_or(&[], |c| &c.labels)
    }

    pub fn label(&self, i: usize) -> Option<&Monomial> {
        self.labels().get(i)
    }

    pub fn index_of(&self, mon: &Monomial) -> Option<usize> {
        self.cartan.as_ref()?.index.get(mon).copied()
    }

    /// Text label of a basis element, e.g. `T(x^(1,0) u{3})` or `e7`.
    pub fn label_text(&self, i: usize) -> String {
        match self.label(i) {
            Some(m) => m.to_string(),
            None => format!("e{i}"),
        }
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    pub fn parities(&self) -> &[Parity] {
        &self.parity
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degree[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degree
    }

    /// Lowest and highest degree present.
    pub fn degree_range(&self) -> (i32, i32) {
        let lo = self.degree.iter().copied().min().unwrap_or(0);
        let hi = self.degree.iter().copied().max().unwrap_or(0);
        (lo, hi)
    }

    pub fn basis_of_degree(&self, d: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree[i] == d).collect()
    }

    /// False for constructions where simplicity is not claimed (custom algebras, `n = 1`).
    pub fn simplicity_asserted(&self) -> bool {
        self.simplicity_asserted
    }

    /// `[e_i, e_j]` in the basis.
    #[inline]
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.sc[i * self.dim() + j]
    }

    /// Bracket of arbitrary vectors.
    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let f = &self.field;
        let mut acc: Vec<(usize, Fp)> = Vec::new();
        for &(i, a) in x.entries() {
            for &(j, b) in y.entries() {
                let ab = f.mul(a, b);
                acc.extend(
                    self.bracket_basis(i, j)
                        .entries()
                        .iter()
                        .map(|&(k, v)| (k, f.mul(ab, v))),
                );
            }
        }
        SparseVec::from_entries(f, acc)
    }

    /// Matrix of `ad e_i` acting on column vectors: entry `(k, j)` is the
    /// `e_k` coefficient of `[e_i, e_j]`.
    pub fn ad_matrix(&self, i: usize) -> SparseMatrix {
        let n = self.dim();
        let cols: Vec<SparseVec> = (0..n).map(|j| self.bracket_basis(i, j).clone()).collect();
        SparseMatrix::from_rows(n, cols)
            .expect("brackets stay in range")
            .transpose()
    }

    /// First pair violating `[e_j,e_i] = -(-1)^{p_i p_j} [e_i,e_j]`, if any.
    pub fn super_antisymmetry_violation(&self) -> Option<(usize, usize)> {
        let f = &self.field;
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let neg = !self.parity[i].koszul(self.parity[j]);
                let expect = self.bracket_basis(i, j).scale(f, f.signed(Fp::ONE, neg));
                if &expect != self.bracket_basis(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Super-Jacobi defect
    /// `(-1)^{p_x p_z}[x,[y,z]] + (-1)^{p_y p_x}[y,[z,x]] + (-1)^{p_z p_y}[z,[x,y]]` on basis elements.
    pub fn jacobi_defect(&self, x: usize, y: usize, z: usize) -> SparseVec {
        let f = &self.field;
        let (px, py, pz) = (self.parity[x], self.parity[y], self.parity[z]);
        let term = |a: usize, b: usize, c: usize, neg: bool| {
            self.bracket(&SparseVec::unit(a), self.bracket_basis(b, c))
                .scale(f, f.signed(Fp::ONE, neg))
        };
        let t1 = term(x, y, z, px.koszul(pz));
        let t2 = term(y, z, x, py.koszul(px));
        let t3 = term(z, x, y, pz.koszul(py));
        t1.axpy(f, Fp::ONE, &t2).axpy(f, Fp::ONE, &t3)
    }

    /// Grading check: `[X_i, X_j] ⊆ X_{i+j}`. Returns a violating pair.
    pub fn degree_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let d = self.degree[i] + self.degree[j];
                let p = self.parity[i] + self.parity[j];
                if self
                    .bracket_basis(i, j)
                    .entries()
                    .iter()
                    .any(|&(k, _)| self.degree[k] != d || self.parity[k] != p)
                {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Dimension of the ideal generated by `e_i`.
    pub fn ideal_dim(&self, i: usize) -> usize {
        let n = self.dim();
        let mut ech = crate::linalg::EchelonBasis::new(self.field, n);
        let mut queue = vec![SparseVec::unit(i)];
        ech.insert(SparseVec::unit(i));
        while let Some(v) = queue.pop() {
            for b in 0..n {
                let w = self.bracket(&SparseVec::unit(b), &v);
                if !w.is_zero() && ech.insert(w.clone()) {
                    if ech.rank() == n {
                        return n;
                    }
                    queue.push(w);
                }
            }
        }
        ech.rank()
    }

    /// Basis elements whose generated ideal is proper.
    pub fn simplicity_witnesses(&self) -> Vec<usize> {
        (0..self.dim())
            .into_par_iter()
            .filter(|&i| self.ideal_dim(i) != self.dim())
            .collect()
    }
}

/// Builds `HO(n,n;t)` or `KO(n,n+1;t)`.
pub fn build_algebra(params: &CartanParams) -> Result<GradedAlgebra> {
    let params = CartanParams::new(params.family, params.n, &params.t, params.p)?;
    let sig = params.signature()?;
    let family = params.family;
    let mut labels: Vec<(i32, Monomial)> = Vec::new();
    for m in sig.basis() {
        let deg = match family {
            Family::HO => {
                if m == sig.one_monomial() {
                    continue;
                }
                m.std_degree() - 2
            }
            Family::KO => sig.principal_degree(&m)? - 2,
        };
        labels.push((deg, m));
    }
    labels.sort_by(|a, b| (a.0, a.1.alpha(), a.1.odd()).cmp(&(b.0, b.1.alpha(), b.1.odd())));
    let degree: Vec<i32> = labels.iter().map(|l| l.0).collect();
    let labels: Vec<Monomial> = labels.into_iter().map(|l| l.1).collect();
    let parity: Vec<Parity> = labels.iter().map(|m| m.parity() + Parity::Odd).collect();
    let index: HashMap<Monomial, usize> = labels
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let one = sig.one_monomial();
    let dim = labels.len();
    let field = *sig.field();

    let rows: Vec<Vec<SparseVec>> = (0..dim)
        .into_par_iter()
        .map(|i| {
            let a = Poly::monomial(&sig, labels[i].clone());
            let ta = t_op(family, &a)?;
            let mut row = Vec::with_capacity(dim);
            for lj in &labels {
                let b = Poly::monomial(&sig, lj.clone());
                let c = bracket_argument_with(family, &ta, &a, &b)?;
                let mut entries = Vec::with_capacity(c.len());
                for (mon, v) in c.terms() {
                    match index.get(mon) {
                        Some(&k) => entries.push((k, v)),
                        // T_H(1) = 0
                        None if family == Family::HO && *mon == one => {}
                        None => {
                            return Err(Error::Consistency(format!(
                                "bracket of {} and {lj} leaves the basis at {mon}",
                                labels[i]
                            )))
                        }
                    }
                }
                row.push(SparseVec::from_entries(&field, entries));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let sc: Vec<SparseVec> = rows.into_iter().flatten().collect();

    Ok(GradedAlgebra {
        field,
        name: format!("{family}({},{};{:?})", params.n, sig.n(), params.t),
        simplicity_asserted: params.n >= 2,
        cartan: Some(CartanData {
            family,
            params,
            signature: sig,
            labels,
            index,
        }),
        parity,
        degree,
        sc,
    })
}

/// The span `K(n,t) ⊂ KO` of `T_K(a)`, `a` of positive standard degree
/// without the contact variable, and the map `ρ: T_K(a) ↦ T_H(a)`.
///
/// `K` is not required to be closed: brackets may pick up `T_K(1)`, which is
/// recorded in `outside`.
#[derive(Clone, Debug)]
pub struct KSubalgebra {
    pub ko: GradedAlgebra,
    pub ho: GradedAlgebra,
    /// Indices of the spanning basis elements inside `ko`.
    pub ko_indices: Vec<usize>,
    /// `rho[k]` is the `ho` index of the image of `ko_indices[k]`.
    pub rho: Vec<usize>,
    /// Pairs `(i, j)` of `ko` indices whose bracket leaves `K`, with the first
    /// offending component.
    pub outside: Vec<(usize, usize, usize)>,
}

impl KSubalgebra {
    pub fn is_closed(&self) -> bool {
        self.outside.is_empty()
    }
}

pub fn ko_subalgebra_k(n: usize, t: &[u32], p: u32) -> Result<KSubalgebra> {
    let ko = build_algebra(&CartanParams::new(Family::KO, n, t, p)?)?;
    let ho = build_algebra(&CartanParams::new(Family::HO, n, t, p)?)?;
    let contact_bit = 1u32 << n;
    let ko_indices: Vec<usize> = (0..ko.dim())
        .filter(|&i| {
            let m = ko.label(i).unwrap();
            m.odd() & contact_bit == 0 && m.std_degree() >= 1
        })
        .collect();
    let mut member = vec![false; ko.dim()];
    for &i in &ko_indices {
        member[i] = true;
    }
    let mut outside = Vec::new();
    for &i in &ko_indices {
        for &j in &ko_indices {
            if let Some(&(k, _)) = ko
                .bracket_basis(i, j)
                .entries()
                .iter()
                .find(|e| !member[e.0])
            {
                outside.push((i, j, k));
            }
        }
    }
    let rho = ko_indices
        .iter()
        .map(|&i| {
            ho.index_of(ko.label(i).unwrap()).ok_or_else(|| {
                Error::Consistency(format!("{} has no counterpart in HO", ko.label_text(i)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KSubalgebra {
        ko,
        ho,
        ko_indices,
        rho,
        outside,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntryJson {
    pub label: String,
    pub parity: u32,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub k: usize,
    pub val: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketJson {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermJson>,
}

/// On-disk form of a [`GradedAlgebra`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub family: String,
    pub p: u32,
    pub n: usize,
    pub t: Vec<u32>,
    pub basis: Vec<BasisEntryJson>,
    pub sc: Vec<BracketJson>,
}

impl GradedAlgebra {
    pub fn to_json(&self) -> AlgebraJson {
        let (family, n, t) = match self.params() {
            Some(p) => (p.family.to_string(), p.n, p.t.clone()),
            None => (self.name.clone(), 0, vec![]),
        };
        let basis = (0..self.dim())
            .map(|i| BasisEntryJson {
                label: self.label_text(i),
                parity: self.parity[i].bit(),
                degree: self.degree[i],
            })
            .collect();
        let mut sc = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let v = self.bracket_basis(i, j);
                if !v.is_zero() {
                    sc.push(BracketJson {
                        i,
                        j,
                        terms: v
                            .entries()
                            .iter()
                            .map(|&(k, val)| TermJson {
                                k,
                                val: val.value(),
                            })
                            .collect(),
                    });
                }
            }
        }
        AlgebraJson {
            family,
            p: self.field.characteristic(),
            n,
            t,
            basis,
            sc,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("plain data serializes")
    }

    /// Rebuilds an algebra from its JSON form. For `HO`/`KO` the labels are
    /// checked against a fresh enumeration of the basis.
    pub fn from_json(j: &AlgebraJson) -> Result<Self> {
        let field = PrimeField::new(j.p)?;
        let dim = j.basis.len();
        let parity: Vec<Parity> = j.basis.iter().map(|b| Parity::from_bit(b.parity)).collect();
        let degree: Vec<i32> = j.basis.iter().map(|b| b.degree).collect();
        let mut sc = vec![SparseVec::new(); dim * dim];
        for b in &j.sc {
            if b.i >= dim || b.j >= dim {
                return Err(Error::Parse(format!(
                    "bracket index ({}, {}) out of range",
                    b.i, b.j
                )));
            }
            let mut entries = Vec::with_capacity(b.terms.len());
            for t in &b.terms {
                if t.k >= dim {
                    return Err(Error::Parse(format!("term index {} out of range", t.k)));
                }
                entries.push((t.k, field.from_reduced(t.val)?));
            }
            sc[b.i * dim + b.j] = SparseVec::from_entries(&field, entries);
        }
        let cartan = match j.family.parse::<Family>() {
            Ok(family) => {
                let params = CartanParams::new(family, j.n, &j.t, j.p)?;
                let signature = params.signature()?;
                let labels = j
                    .basis
                    .iter()
                    .map(|b| b.label.parse::<Monomial>())
                    .collect::<Result<Vec<_>>>()?;
                for (k, m) in labels.iter().enumerate() {
                    if !signature.contains(m) {
                        return Err(Error::Parse(format!("label {m} is not a basis word")));
                    }
                    if m.parity() + Parity::Odd != parity[k] {
                        return Err(Error::Parse(format!("label {m} has the wrong parity")));
                    }
                }
                let index: HashMap<Monomial, usize> = labels
                    .iter()
                    .cloned()
                    .enumerate()
                    .map(|(i, m)| (m, i))
                    .collect();
                if index.len() != dim {
                    return Err(Error::Parse("duplicate basis labels".into()));
                }
                Some(CartanData {
                    family,
                    params,
                    signature,
                    labels,
                    index,
                })
            }
            Err(_) => None,
        };
        let simplicity_asserted = cartan.as_ref().is_some_and(|c| c.params.n >= 2);
        Ok(GradedAlgebra {
            field,
            name: j.family.clone(),
            cartan,
            parity,
            degree,
            sc,
            simplicity_asserted,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: AlgebraJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }
}
