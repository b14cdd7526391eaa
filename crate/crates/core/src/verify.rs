//! Checks of the structural statements about HO and KO, and the suite that
//! runs them.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartan::{
    build_algebra, closed_form_argument, image_rank, ko_subalgebra_k, t_h, t_op, CartanParams,
    Family, GradedAlgebra,
};
use crate::cohomology::{
    coadjoint_representation_violation, derivation_space, h2_trivial, is_derivation,
    skewness_check, Mode,
};
use crate::divided_power::{Monomial, Poly, Signature};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::linalg::{SparseMatrix, SparseVec, Subspace};
use crate::weights::{
    associative_form_obstruction, delta_sets, formula_delta_set, top_degree, verify_ko_theta,
    verify_proposition_weight_spaces, weight_additivity_violation, weight_decomposition, weight_of,
    Weight,
};

/// `μ = (1,…,1, π_1,…,π_n)`, with an extra leading `1` in the contact case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mu(pub Vec<u32>);

impl Mu {
    pub fn new(family: Family, sig: &Signature) -> Self {
        let n = sig.m();
        let lead = match family {
            Family::HO => n,
            Family::KO => n + 1,
        };
        let mut v = vec![1; lead];
        v.extend_from_slice(sig.pi());
        Mu(v)
    }
}

/// `M(X)_h`: span of brackets of positive-degree basis pairs landing in degree `h`.
pub fn m_plus(x: &GradedAlgebra) -> Result<BTreeMap<i32, Subspace>> {
    let (_, hi) = x.degree_range();
    let f = *x.field();
    let mut rows: BTreeMap<i32, Vec<SparseVec>> = (1..=hi).map(|h| (h, Vec::new())).collect();
    for i in 0..x.dim() {
        for j in i..x.dim() {
            let (di, dj) = (x.degree(i), x.degree(j));
            if di >= 1 && dj >= 1 && di + dj <= hi {
                let v = x.bracket_basis(i, j);
                if !v.is_zero() {
                    rows.get_mut(&(di + dj)).unwrap().push(v.clone());
                }
            }
        }
    }
    rows.into_iter()
        .map(|(h, r)| Ok((h, Subspace::span(f, x.dim(), r)?)))
        .collect()
}

fn degree_space(x: &GradedAlgebra, h: i32) -> Result<Subspace> {
    Subspace::span(
        *x.field(),
        x.dim(),
        x.basis_of_degree(h).into_iter().map(SparseVec::unit),
    )
}

/// A failed check: human-readable message plus a compact witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub details: String,
    pub witness: String,
}

type CheckOutcome = std::result::Result<String, Failure>;

fn fail(details: impl Into<String>, witness: impl Into<String>) -> CheckOutcome {
    Err(Failure {
        details: details.into(),
        witness: witness.into(),
    })
}

/// `M(X)` is closed under the bracket.
pub fn verify_m_subalgebra(x: &GradedAlgebra) -> Result<CheckOutcome> {
    let m = m_plus(x)?;
    for (&h, mh) in &m {
        for (&k, mk) in &m {
            let Some(target) = m.get(&(h + k)) else {
                continue;
            };
            for u in mh.basis() {
                for v in mk.basis() {
                    if !target.contains(&x.bracket(u, v))? {
                        return Ok(fail(
                            format!("a bracket of M_{h} and M_{k} leaves M_{}", h + k),
                            format!("degrees ({h}, {k})"),
                        ));
                    }
                }
            }
        }
    }
    Ok(Ok(format!(
        "M(X) closed under brackets in degrees 1..={}",
        x.degree_range().1
    )))
}

/// Labels in the explicit complement to `M(X)_h` for `h ≥ 3`.
pub fn spanning_complement_labels(x: &GradedAlgebra, h: i32) -> Result<Vec<usize>> {
    let (family, sig) = cartan_parts(x)?;
    let p = sig.field().characteristic();
    let n = sig.m();
    let contact = 1u32 << n;
    Ok((0..x.dim())
        .filter(|&i| x.degree(i) == h)
        .filter(|&i| {
            let m = x.label(i).unwrap();
            let size = (m.alpha_sum() + (m.odd() & !contact).count_ones()) as i32;
            if m.odd() & contact == 0 {
                size - 2 == h && m.alpha().iter().all(|&a| a % p <= 1)
            } else {
                family == Family::KO
                    && size == h
                    && (0..n).all(|j| {
                        (i64::from(m.alpha()[j]) - i64::from((m.odd() >> j) & 1))
                            .rem_euclid(i64::from(p))
                            == 0
                    })
            }
        })
        .collect())
}

fn cartan_parts(x: &GradedAlgebra) -> Result<(Family, &Signature)> {
    match (x.family(), x.signature()) {
        (Some(f), Some(s)) => Ok((f, s)),
        _ => Err(Error::WrongContext("an HO or KO algebra")),
    }
}

/// `X_h = M(X)_h + span(complement labels)` for every `h ≥ 3`.
pub fn verify_lemma_m_spanning(x: &GradedAlgebra) -> Result<CheckOutcome> {
    let m = m_plus(x)?;
    let f = *x.field();
    let (_, hi) = x.degree_range();
    let mut summary = Vec::new();
    for h in 3..=hi {
        let extra = Subspace::span(
            f,
            x.dim(),
            spanning_complement_labels(x, h)?
                .into_iter()
                .map(SparseVec::unit),
        )?;
        let sum = m[&h].sum(&extra)?;
        let xh = degree_space(x, h)?;
        if !sum.is_subspace_of(&xh)? {
            return Ok(fail(
                format!("M_{h} + complement is not inside X_{h}"),
                format!("degree {h}"),
            ));
        }
        if !sum.equal(&xh)? {
            return Ok(fail(
                format!(
                    "dim(M_{h} + complement) = {} < dim X_{h} = {}",
                    sum.dim(),
                    xh.dim()
                ),
                format!("degree {h}"),
            ));
        }
        summary.push(format!("h={h}: {}+{}", m[&h].dim(), extra.dim()));
    }
    Ok(Ok(format!(
        "equality for h in 3..={hi} ({})",
        summary.join(", ")
    )))
}

/// `ker ad T_H(x_i) = (ad T_H(x_i))^{μ_i}(HO) + F T_H(x_{i′})` for `i = 1..2n`.
pub fn verify_lemma_ad_kernel(x: &GradedAlgebra) -> Result<CheckOutcome> {
    let (family, sig) = cartan_parts(x)?;
    if family != Family::HO {
        return Err(Error::WrongContext("an HO algebra"));
    }
    let f = *x.field();
    let n = x.dim();
    let mu = Mu::new(family, sig);
    let mut dims = Vec::new();
    for i in 1..=2 * sig.m() {
        let e = x
            .index_of(&sig.var(i)?)
            .ok_or_else(|| Error::Consistency("missing T_H(x_i)".into()))?;
        let ep = x
            .index_of(&sig.var(sig.prime_index(i)?)?)
            .ok_or_else(|| Error::Consistency("missing T_H(x_i′)".into()))?;
        let ker = x.ad_matrix(e).kernel_basis(&f);
        let mut images: Vec<SparseVec> = (0..n).map(SparseVec::unit).collect();
        for _ in 0..mu.0[i - 1] {
            images = images
                .iter()
                .map(|v| x.bracket(&SparseVec::unit(e), v))
                .collect();
        }
        images.push(SparseVec::unit(ep));
        let rhs = Subspace::span(f, n, images)?;
        if !ker.contains(&SparseVec::unit(ep))? {
            return Ok(fail(
                format!("T_H(x_{i}′) is not in the kernel of ad T_H(x_{i})"),
                format!("i = {i}"),
            ));
        }
        if !ker.equal(&rhs)? {
            return Ok(fail(
                format!(
                    "i = {i}: dim ker = {}, dim image power + line = {}",
                    ker.dim(),
                    rhs.dim()
                ),
                format!("i = {i}"),
            ));
        }
        dims.push(ker.dim().to_string());
    }
    Ok(Ok(format!(
        "equality for all i; kernel dimensions [{}]",
        dims.join(", ")
    )))
}

/// `ρ: K(n,t) → HO`, `T_K(a) ↦ T_H(a)` is a parity-preserving bijection
/// respecting brackets, and `[T_K(a),T_K(b)] = T_K(T_H(a)(b))` on `K`.
///
/// When `K` is not closed the failure details also report whether
/// `K ⊕ F T_K(1)` is closed with `T_K(1)` central, and whether `ρ` extended by
/// `T_K(1) ↦ 0` respects brackets.
pub fn verify_remark_rho(n: usize, t: &[u32], p: u32) -> Result<CheckOutcome> {
    let k = ko_subalgebra_k(n, t, p)?;
    let (ko, ho) = (&k.ko, &k.ho);
    let f = *ko.field();
    let sig = ko.signature().unwrap();
    let image: BTreeSet<usize> = k.rho.iter().copied().collect();
    if image.len() != k.rho.len() || image.len() != ho.dim() {
        return Ok(fail(
            format!(
                "rho maps {} elements onto {} of {}",
                k.rho.len(),
                image.len(),
                ho.dim()
            ),
            "basis count",
        ));
    }
    for (q, &i) in k.ko_indices.iter().enumerate() {
        if ko.parity(i) != ho.parity(k.rho[q]) {
            return Ok(fail("rho does not preserve parity", ko.label_text(i)));
        }
    }
    let one = ko
        .index_of(&sig.one_monomial())
        .ok_or_else(|| Error::Consistency("KO lacks T_K(1)".into()))?;
    let pos: HashMap<usize, usize> = k
        .ko_indices
        .iter()
        .enumerate()
        .map(|(q, &i)| (i, q))
        .collect();
    // ρ extended by T_K(1) ↦ 0
    let rho_ext = |v: &SparseVec| -> Option<SparseVec> {
        let mut out = Vec::new();
        for &(c, val) in v.entries() {
            if c == one {
                continue;
            }
            out.push((k.rho[*pos.get(&c)?], val));
        }
        Some(SparseVec::from_entries(&f, out))
    };
    let bad = k
        .ko_indices
        .par_iter()
        .enumerate()
        .find_map_first(|(qa, &a)| {
            let pa = Poly::monomial(sig, ko.label(a).unwrap().clone());
            let tha = t_h(&pa).ok()?;
            for (qb, &b) in k.ko_indices.iter().enumerate() {
                let pb = Poly::monomial(sig, ko.label(b).unwrap().clone());
                let lhs = closed_form_argument(Family::KO, &pa, &pb).ok()?;
                if Some(lhs) != tha.apply(&pb).ok() {
                    return Some((a, b, "restricted contact bracket differs from T_H(a)(b)"));
                }
                if rho_ext(ko.bracket_basis(a, b)).as_ref()
                    != Some(ho.bracket_basis(k.rho[qa], k.rho[qb]))
                {
                    return Some((a, b, "bracket not preserved modulo T_K(1)"));
                }
            }
            None
        });
    if let Some((a, b, what)) = bad {
        return Ok(fail(
            what,
            format!("pair ({}, {})", ko.label_text(a), ko.label_text(b)),
        ));
    }
    let pairs = k.ko_indices.len() * k.ko_indices.len();
    if let Some(&(a, b, c)) = k.outside.first() {
        let only_one = k.outside.iter().all(|&(i, j, _)| {
            ko.bracket_basis(i, j)
                .entries()
                .iter()
                .all(|e| e.0 == one || pos.contains_key(&e.0))
        });
        let central = k
            .ko_indices
            .iter()
            .all(|&i| ko.bracket_basis(one, i).is_zero())
            && ko.bracket_basis(one, one).is_zero();
        return Ok(fail(
            format!(
                "K is not closed: {} of {pairs} brackets have a T_K(1) component; \
                 restricted formula holds on all pairs; K + F T_K(1) closed: {only_one}; \
                 T_K(1) central there: {central}; rho with T_K(1) -> 0 respects all brackets",
                k.outside.len()
            ),
            format!(
                "[{}, {}] has a component on {}",
                ko.label_text(a),
                ko.label_text(b),
                ko.label_text(c)
            ),
        ));
    }
    Ok(Ok(format!(
        "dim K = {} = dim HO; all {pairs} pairs preserved",
        k.ko_indices.len()
    )))
}

/// Minimal `φ_h`: weights whose part of `X_h` is not inside `M(X)_h`.
pub fn minimal_phi(x: &GradedAlgebra) -> Result<BTreeMap<i32, BTreeSet<Weight>>> {
    let m = m_plus(x)?;
    let wd = weight_decomposition(x)?;
    let mut out = BTreeMap::new();
    for (&h, mh) in &m {
        let mut phi = BTreeSet::new();
        for i in x.basis_of_degree(h) {
            if !mh.contains(&SparseVec::unit(i))? {
                phi.insert(wd.weight(i).clone());
            }
        }
        out.insert(h, phi);
    }
    Ok(out)
}

/// The weight conditions on `φ_h` used for the vanishing of `H²`.
pub fn verify_phi_conditions(x: &GradedAlgebra) -> Result<CheckOutcome> {
    let (family, sig) = cartan_parts(x)?;
    let f = *x.field();
    let n = sig.m();
    let q = top_degree(family, sig);
    let phi = minimal_phi(x)?;
    let top = delta_sets(x, q)?;
    let neg_top: BTreeSet<Weight> = top.iter().map(|w| w.neg(&f)).collect();
    let not_inside = |s: &BTreeSet<Weight>| !neg_top.is_subset(s);
    let d1 = delta_sets(x, 1)?;
    let d2 = delta_sets(x, 2)?;
    if phi[&1] != d1 {
        return Ok(fail("phi_1 differs from the degree-1 root set", "h = 1"));
    }
    if !phi[&2].is_subset(&d2) {
        return Ok(fail("phi_2 is not inside the degree-2 root set", "h = 2"));
    }
    if !not_inside(&d1) {
        return Ok(fail("-Delta_q lies in the degree-1 root set", "h = 1"));
    }
    for h in 1..=q {
        let ph = phi.get(&h).cloned().unwrap_or_default();
        if !not_inside(&ph) {
            return Ok(fail(
                format!("-Delta_q lies in phi_{h}"),
                format!("h = {h}"),
            ));
        }
        if h >= 3 {
            let mut allowed: BTreeSet<Weight> = spanning_complement_labels(x, h)?
                .into_iter()
                .map(|i| weight_of(&f, n, x.label(i).unwrap()))
                .collect();
            if family == Family::KO {
                allowed.insert(Weight::zero(n));
            }
            if !ph.is_subset(&allowed) {
                return Ok(fail(
                    format!("phi_{h} is not inside the weights of the complement labels"),
                    format!("h = {h}"),
                ));
            }
            if !not_inside(&allowed) {
                return Ok(fail(
                    format!("-Delta_q lies in the complement weights at h = {h}"),
                    format!("h = {h}"),
                ));
            }
        }
    }
    let sizes: Vec<String> = phi
        .iter()
        .map(|(h, s)| format!("{h}:{}", s.len()))
        .collect();
    Ok(Ok(format!(
        "minimal phi_h used; -Delta_q = {{{}}}; |phi_h| = [{}]",
        neg_top
            .iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join(", "),
        sizes.join(", ")
    )))
}

/// `[T(a),T(b)]` computed in `W` equals `T` of the closed-form argument, for all pairs.
pub fn verify_closed_forms(x: &GradedAlgebra) -> Result<CheckOutcome> {
    let (family, sig) = cartan_parts(x)?;
    let polys: Vec<Poly> = x
        .labels()
        .iter()
        .map(|m| Poly::monomial(sig, m.clone()))
        .collect();
    let ts: Vec<_> = polys
        .par_iter()
        .map(|a| t_op(family, a))
        .collect::<Result<_>>()?;
    let bad = (0..x.dim()).into_par_iter().find_map_first(|i| {
        (0..x.dim())
            .find(|&j| {
                let lhs = ts[i].bracket(&ts[j]);
                let rhs = closed_form_argument(family, &polys[i], &polys[j])
                    .and_then(|c| t_op(family, &c));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => l != r,
                    _ => true,
                }
            })
            .map(|j| (i, j))
    });
    match bad {
        Some((i, j)) => Ok(fail(
            "Witt bracket differs from the closed form",
            format!("pair ({}, {})", x.label_text(i), x.label_text(j)),
        )),
        None => Ok(Ok(format!("all {} ordered pairs agree", x.dim() * x.dim()))),
    }
}

/// Matrix of the operator `T(label_i)` on the monomial basis of `O`.
fn operator_matrices(x: &GradedAlgebra) -> Result<Vec<SparseMatrix>> {
    let (family, sig) = cartan_parts(x)?;
    let monos = sig.basis();
    let index: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let inputs: Vec<Poly> = monos
        .iter()
        .map(|m| Poly::monomial(sig, m.clone()))
        .collect();
    x.labels()
        .par_iter()
        .map(|m| {
            let d = t_op(family, &Poly::monomial(sig, m.clone()))?;
            // row g holds D(g): acting on row vectors from the right
            let rows = inputs
                .iter()
                .map(|g| {
                    let img = d.apply(g)?;
                    Ok(SparseVec::from_entries(
                        sig.field(),
                        img.terms().map(|(mm, c)| (index[mm], c)),
                    ))
                })
                .collect::<Result<Vec<_>>>()?;
            SparseMatrix::from_rows(monos.len(), rows)
        })
        .collect()
}

/// Structure constants against operator composition on `O`:
/// `T(a)∘T(b) − (−1)^{ab} T(b)∘T(a) = Σ_k c_k T(e_k)`.
pub fn verify_operator_composition(x: &GradedAlgebra) -> Result<CheckOutcome> {
    let f = *x.field();
    let mats = operator_matrices(x)?;
    let n = x.dim();
    let bad = (0..n).into_par_iter().find_map_first(|i| {
        (0..n)
            .find(|&j| {
                // rows are images, so D∘E corresponds to M_E · M_D
                let de = mats[j].mul(&f, &mats[i]).unwrap();
                let ed = mats[i].mul(&f, &mats[j]).unwrap();
                let sign = f.signed(Fp::ONE, !x.parity(i).koszul(x.parity(j)));
                let lhs = de.axpy(&f, sign, &ed).unwrap();
                let mut rhs = SparseMatrix::zero(mats[0].nrows(), mats[0].ncols());
                for &(k, v) in x.bracket_basis(i, j).entries() {
                    rhs = rhs.axpy(&f, v, &mats[k]).unwrap();
                }
                lhs != rhs
            })
            .map(|j| (i, j))
    });
    match bad {
        Some((i, j)) => Ok(fail(
            "operator commutator differs from the structure constants",
            format!("pair ({}, {})", x.label_text(i), x.label_text(j)),
        )),
        None => Ok(Ok(format!("all {} ordered pairs agree on O", n * n))),
    }
}

/// Super-Jacobi on `samples` seeded random triples, or on all triples when `None`.
pub fn verify_jacobi(x: &GradedAlgebra, samples: Option<usize>, seed: u64) -> CheckOutcome {
    let n = x.dim();
    let bad = match samples {
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let triples: Vec<(usize, usize, usize)> = (0..s)
                .map(|_| {
                    (
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                        rng.gen_range(0..n),
                    )
                })
                .collect();
            triples
                .into_par_iter()
                .find_first(|&(a, b, c)| !x.jacobi_defect(a, b, c).is_zero())
        }
        None => (0..n).into_par_iter().find_map_first(|a| {
            (0..n)
                .flat_map(|b| (0..n).map(move |c| (b, c)))
                .find(|&(b, c)| !x.jacobi_defect(a, b, c).is_zero())
                .map(|(b, c)| (a, b, c))
        }),
    };
    let count = samples.unwrap_or(n * n * n);
    match bad {
        Some((a, b, c)) => fail(
            "super-Jacobi defect is nonzero",
            format!(
                "triple ({}, {}, {})",
                x.label_text(a),
                x.label_text(b),
                x.label_text(c)
            ),
        ),
        None => Ok(format!("{count} triples, no defect")),
    }
}

/// Dimension, grading range and parity shift of the construction.
pub fn verify_construction(x: &GradedAlgebra) -> Result<CheckOutcome> {
    let (family, sig) = cartan_parts(x)?;
    let p = u64::from(sig.field().characteristic());
    let size = 2u64.pow(sig.n() as u32) * p.pow(sig.t().iter().sum());
    let expected = match family {
        Family::HO => size - 1,
        Family::KO => size,
    };
    let rank = image_rank(family, sig)?;
    if x.dim() as u64 != expected || rank != x.dim() {
        return Ok(fail(
            format!("dim {} vs count {expected} vs image rank {rank}", x.dim()),
            "dimension".to_string(),
        ));
    }
    let expect_range = match family {
        Family::HO => (-1, sig.xi() as i32 - 2),
        Family::KO => (-2, sig.xi() as i32),
    };
    if x.degree_range() != expect_range {
        return Ok(fail(
            format!(
                "degree range {:?}, expected {expect_range:?}",
                x.degree_range()
            ),
            "grading",
        ));
    }
    for i in 0..x.dim() {
        let m = x.label(i).unwrap();
        if x.parity(i) != m.parity() + crate::parity::Parity::Odd {
            return Ok(fail(
                "basis parity is not the shifted monomial parity",
                x.label_text(i),
            ));
        }
    }
    if let Some((i, j)) = x.super_antisymmetry_violation() {
        return Ok(fail(
            "structure constants are not super-antisymmetric",
            format!("pair ({i}, {j})"),
        ));
    }
    if let Some((i, j)) = x.degree_violation() {
        return Ok(fail(
            "bracket does not respect degree and parity",
            format!("pair ({i}, {j})"),
        ));
    }
    Ok(Ok(format!(
        "dim {} = image rank; degrees {}..={}",
        x.dim(),
        expect_range.0,
        expect_range.1
    )))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// The statement the check tests.
    pub anchor: String,
    pub status: Status,
    pub details: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproduce: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub family: Family,
    pub n: usize,
    pub t: Vec<u32>,
    pub p: u32,
    pub suite: Suite,
    pub status: Status,
    pub checks: Vec<CheckReport>,
}

impl VerificationReport {
    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// One line per check.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{:<8} {:<28} {}\n",
                c.status.to_string(),
                c.name,
                c.details
            ));
            if let Some(w) = &c.witness {
                s.push_str(&format!("         witness: {w}\n"));
            }
            if let Some(r) = &c.reproduce {
                s.push_str(&format!("         reproduce: {r}\n"));
            }
        }
        s.push_str(&format!("overall: {}\n", self.status));
        s
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Fast,
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub suite: Suite,
    /// Exhaustive super-Jacobi instead of sampling.
    pub long: bool,
    pub jacobi_samples: usize,
    pub seed: u64,
    /// Record per-check wall time (makes the report run-dependent).
    pub timing: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            suite: Suite::All,
            long: false,
            jacobi_samples: 100_000,
            seed: 0x5eed,
            timing: false,
        }
    }
}

struct Runner<'a> {
    opts: &'a SuiteOptions,
    reproduce: String,
    checks: Vec<CheckReport>,
}

impl Runner<'_> {
    fn run(
        &mut self,
        name: &str,
        anchor: &str,
        heavy: bool,
        f: impl FnOnce() -> Result<CheckOutcome>,
    ) {
        if heavy && self.opts.suite == Suite::Fast {
            self.skip(name, anchor, "not part of the fast suite");
            return;
        }
        let start = Instant::now();
        let outcome = f();
        let elapsed_ms = self.opts.timing.then(|| start.elapsed().as_millis() as u64);
        let (status, details, witness) = match outcome {
            Ok(Ok(d)) => (Status::Pass, d, None),
            Ok(Err(fl)) => (Status::Fail, fl.details, Some(fl.witness)),
            Err(e) => (Status::Fail, format!("error: {e}"), Some(name.to_string())),
        };
        let reproduce = (status == Status::Fail).then(|| self.reproduce.clone());
        self.checks.push(CheckReport {
            name: name.to_string(),
            anchor: anchor.to_string(),
            status,
            details,
            witness,
            reproduce,
            elapsed_ms,
        });
    }

    fn skip(&mut self, name: &str, anchor: &str, why: &str) {
        self.checks.push(CheckReport {
            name: name.to_string(),
            anchor: anchor.to_string(),
            status: Status::Skipped,
            details: why.to_string(),
            witness: None,
            reproduce: None,
            elapsed_ms: None,
        });
    }
}

/// Runs every check for one parameter set.
pub fn run_suite(params: &CartanParams, opts: &SuiteOptions) -> Result<VerificationReport> {
    let params = CartanParams::new(params.family, params.n, &params.t, params.p)?;
    let x = build_algebra(&params)?;
    let family = params.family;
    let t_arg = params
        .t
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let mut r = Runner {
        opts,
        reproduce: format!(
            "cartan-super verify --family {family} --n {} --t {t_arg} --p {} --suite all",
            params.n, params.p
        ),
        checks: Vec::new(),
    };

    r.run(
        "construction",
        "basis, grading and parity of the construction",
        false,
        || verify_construction(&x),
    );
    r.run(
        "closed-form-brackets",
        "closed bracket forms for T_H and T_K",
        false,
        || verify_closed_forms(&x),
    );
    r.run(
        "operator-composition",
        "structure constants agree with operator commutators",
        false,
        || verify_operator_composition(&x),
    );
    r.run("super-jacobi", "super-Jacobi identity", false, || {
        Ok(verify_jacobi(
            &x,
            (!opts.long).then_some(opts.jacobi_samples),
            opts.seed,
        ))
    });
    r.run(
        "torus-weights",
        "standard torus acts diagonally with weights [i' in u] - alpha_i",
        false,
        || {
            let wd = weight_decomposition(&x)?;
            if let Some((i, j, k)) = weight_additivity_violation(&x, &wd) {
                return Ok(fail(
                    "weights are not additive",
                    format!("sc ({i}, {j}) -> {k}"),
                ));
            }
            Ok(Ok(format!(
                "{} weight spaces, all basis vectors are eigenvectors",
                wd.blocks().len()
            )))
        },
    );
    r.run(
        "weight-spaces",
        "weight spaces are spanned by the predicted label families",
        false,
        || {
            let rep = verify_proposition_weight_spaces(&x)?;
            if let Some(d) = rep.discrepancies.first() {
                return Ok(fail(
                    format!("{} discrepancies", rep.discrepancies.len()),
                    d.clone(),
                ));
            }
            if family == Family::KO {
                if let Some(d) = verify_ko_theta(&x)? {
                    return Ok(fail("zero weight space of KO differs from prediction", d));
                }
            }
            Ok(Ok(format!(
                "{} weights, {} representatives, no discrepancy",
                rep.weights_checked, rep.representatives_checked
            )))
        },
    );
    r.run("root-sets", "root sets in degrees 0, 1, 2 and top", false, || {
        let sig = x.signature().unwrap();
        let mut out = Vec::new();
        for d in [0, 1, 2, top_degree(family, sig)] {
            let computed = delta_sets(&x, d)?;
            let formula = formula_delta_set(family, sig, d)?.unwrap();
            if computed != formula {
                let only_c: Vec<String> = computed.difference(&formula).map(|w| w.to_string()).collect();
                let only_f: Vec<String> = formula.difference(&computed).map(|w| w.to_string()).collect();
                return Ok(fail(
                    format!(
                        "degree {d}: computed {} weights, formula {}; computed only [{}], formula only [{}]",
                        computed.len(),
                        formula.len(),
                        only_c.join(" "),
                        only_f.join(" ")
                    ),
                    format!("degree {d}"),
                ));
            }
            out.push(format!("{d}:{}", computed.len()));
        }
        Ok(Ok(format!("sets agree (degree:size {})", out.join(" "))))
    });
    r.run(
        "associative-form",
        "no nondegenerate associative form",
        false,
        || {
            let rep = associative_form_obstruction(&x)?;
            let sig = x.signature().unwrap();
            let expected = match family {
                Family::HO => rep.contains(-1, None, 2 * sig.m(), 1),
                Family::KO => rep.contains(-2, Some(&Weight::zero(sig.m())), 1, 0),
            };
            if !rep.obstructed() {
                return Ok(fail(
                    "graded dimensions are symmetric; no obstruction found",
                    "none",
                ));
            }
            let first = rep
                .degree_violations
                .first()
                .or(rep.weight_violations.first())
                .map(|v| v.to_string())
                .unwrap_or_default();
            if !expected {
                return Ok(fail(
                    "obstruction found but not the expected lowest-degree witness",
                    first,
                ));
            }
            let witness = match family {
                Family::HO => rep.degree_violations.iter().find(|v| v.k == -1),
                Family::KO => rep
                    .weight_violations
                    .iter()
                    .find(|v| v.k == -2 && v.weight.as_ref().is_some_and(Weight::is_zero)),
            };
            Ok(Ok(format!(
                "{}; {} degree and {} weight violations",
                witness.map(|v| v.to_string()).unwrap_or_default(),
                rep.degree_violations.len(),
                rep.weight_violations.len()
            )))
        },
    );
    r.run(
        "m-subalgebra",
        "M(X) = [X+, X+] is a graded subalgebra",
        false,
        || verify_m_subalgebra(&x),
    );
    r.run(
        "m-spanning",
        "X_h = M(X)_h + explicit complement for h >= 3",
        false,
        || verify_lemma_m_spanning(&x),
    );
    if family == Family::HO {
        r.run(
            "ad-kernel",
            "kernel of ad T_H(x_i) is an image power plus a line",
            false,
            || verify_lemma_ad_kernel(&x),
        );
    } else {
        r.skip(
            "ad-kernel",
            "kernel of ad T_H(x_i) is an image power plus a line",
            "stated for HO only",
        );
    }
    r.run(
        "rho-isomorphism",
        "K(n,t) is isomorphic to HO via T_K(a) -> T_H(a)",
        false,
        || verify_remark_rho(params.n, &params.t, params.p),
    );
    r.run(
        "phi-conditions",
        "weight conditions on phi_h",
        false,
        || verify_phi_conditions(&x),
    );
    if x.simplicity_asserted() {
        r.run("simplicity", "X is simple", true, || {
            let w = x.simplicity_witnesses();
            match w.first() {
                Some(&i) => Ok(fail(
                    format!("{} basis elements generate proper ideals", w.len()),
                    format!("ideal of {} has dim {}", x.label_text(i), x.ideal_dim(i)),
                )),
                None => Ok(Ok(format!(
                    "every basis element generates all {} dimensions",
                    x.dim()
                ))),
            }
        });
    } else {
        r.skip(
            "simplicity",
            "X is simple",
            "simplicity not asserted for n = 1",
        );
    }
    r.run(
        "coadjoint-module",
        "X* is a module under the coadjoint action",
        true,
        || {
            Ok(match coadjoint_representation_violation(&x) {
                Some((i, j)) => fail(
                    "coadjoint action is not a representation",
                    format!("pair ({i}, {j})"),
                ),
                None => Ok(format!("all {} pairs", x.dim() * x.dim())),
            })
        },
    );
    let mut h2_dims: Vec<usize> = Vec::new();
    r.run("h2-vanishing", "H^2(X, F) = 0", true, || {
        let modes: &[Mode] = match family {
            Family::HO => &[Mode::Blockwise, Mode::Full],
            Family::KO => &[Mode::Blockwise],
        };
        let mut parts = Vec::new();
        let mut witness = None;
        for &m in modes {
            let res = h2_trivial(&x, m)?;
            h2_dims.push(res.dim);
            let split = res
                .parity_split()
                .map(|(e, o)| format!(" (even {e}, odd {o})"))
                .unwrap_or_default();
            parts.push(format!("{m}: {}{split}", res.dim));
            if res.dim != 0 && witness.is_none() {
                let block = res.blocks.iter().find(|b| b.h2 > 0).unwrap();
                let cocycle = res.representatives.first().map(|c| {
                    c.coordinates()
                        .map(|((a, b), v)| {
                            format!("c({}, {}) = {v}", x.label_text(a), x.label_text(b))
                        })
                        .collect::<Vec<_>>()
                        .join("; ")
                });
                let weight = block
                    .weight
                    .as_ref()
                    .map(|w| w.to_string())
                    .unwrap_or_else(|| "-".into());
                let parity = block
                    .parity
                    .map(|q| q.to_string())
                    .unwrap_or_else(|| "-".into());
                witness = Some(format!(
                    "block degree {} weight {weight} parity {parity}; cocycle {}",
                    block
                        .degree
                        .map(|d| d.to_string())
                        .unwrap_or_else(|| "-".into()),
                    cocycle.unwrap_or_default()
                ));
            }
        }
        if h2_dims.windows(2).any(|w| w[0] != w[1]) {
            return Ok(fail(
                format!("modes disagree: {}", parts.join(", ")),
                "mode comparison",
            ));
        }
        if let Some(w) = witness {
            return Ok(fail(format!("dim H^2 = {}", parts.join(", ")), w));
        }
        Ok(Ok(format!(
            "dim H^2 = {}; d2 d1 = 0 in every block",
            parts.join(", ")
        )))
    });
    let mut der = None;
    r.run(
        "h1-dual",
        "H^2(X, F) is isomorphic to H^1(X, X*)",
        true,
        || {
            let d = derivation_space(&x, true)?;
            let (h1, inn, dd) = (d.h1(), d.inn_dim(), d.der_dim());
            let bad_inner = d.inner_not_derivations;
            der = Some(d);
            if bad_inner > 0 {
                return Ok(fail(
                    format!("{bad_inner} inner maps violate the derivation equations"),
                    "inner maps",
                ));
            }
            let h2 = match h2_dims.first() {
                Some(&v) => v,
                None => h2_trivial(&x, Mode::Blockwise)?.dim,
            };
            if h1 != h2 || h1 != 0 {
                return Ok(fail(
                    format!("dim Der = {dd}, dim Inn = {inn}, dim H^1 = {h1}, dim H^2 = {h2}"),
                    format!("H^1 = {h1}, H^2 = {h2}"),
                ));
            }
            Ok(Ok(format!(
                "dim Der = dim Inn = {dd}; dim H^1 = dim H^2 = 0"
            )))
        },
    );
    r.run(
        "skewness",
        "superderivations into X* are skew",
        true,
        || {
            let d = match der.take() {
                Some(d) => d,
                None => derivation_space(&x, true)?,
            };
            if let Some(psi) = d.basis.iter().find(|p| !skewness_check(&x, p)) {
                let ((a, b), _) = psi.entries().next().unwrap_or(((0, 0), Fp::ZERO));
                return Ok(fail(
                    "a superderivation is not skew",
                    format!("entry ({a}, {b})"),
                ));
            }
            let literal = if family == Family::HO {
                let bad = d.basis.iter().filter(|p| !is_derivation(&x, p)).count();
                if bad > 0 {
                    return Ok(fail(
                        format!("{bad} basis maps fail the literal derivation identity"),
                        "derivation identity",
                    ));
                }
                "; each also satisfies the literal identity"
            } else {
                ""
            };
            Ok(Ok(format!(
                "{} basis superderivations are skew{literal}",
                d.basis.len()
            )))
        },
    );

    let status = if r.checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else {
        Status::Pass
    };
    Ok(VerificationReport {
        family,
        n: params.n,
        t: params.t.clone(),
        p: params.p,
        suite: opts.suite,
        status,
        checks: r.checks,
    })
}
