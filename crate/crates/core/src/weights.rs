//! Weights with respect to the standard torus spanned by `T(x_i x_{i′})`,
//! the weight space decomposition, the root sets `Δ_{X,i}` and the
//! graded-dimension test for nondegenerate associative forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cartan::{Family, GradedAlgebra};
use crate::divided_power::{Monomial, Poly, Signature};
use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::linalg::SparseVec;

/// Values of a linear function on the torus generators `T(x_i x_{i′})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<Fp>);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(vec![Fp::ZERO; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| v.is_zero())
    }

    pub fn add(&self, field: &PrimeField, other: &Weight) -> Weight {
        Weight(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| field.add(a, b))
                .collect(),
        )
    }

    pub fn neg(&self, field: &PrimeField) -> Weight {
        Weight(self.0.iter().map(|&a| field.neg(a)).collect())
    }

    /// Builds `[i′ ∈ u] − α_i` from integer data; `primes` lists the `i` with `i′ ∈ u`.
    pub fn from_label_data(field: &PrimeField, alpha: &[i64], primes: &[usize]) -> Weight {
        Weight(
            alpha
                .iter()
                .enumerate()
                .map(|(i, &a)| field.elem(i64::from(primes.contains(&(i + 1))) - a))
                .collect(),
        )
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

fn cartan_parts(x: &GradedAlgebra) -> Result<(Family, &Signature)> {
    match (x.family(), x.signature()) {
        (Some(f), Some(s)) => Ok((f, s)),
        _ => Err(Error::WrongContext("an HO or KO algebra")),
    }
}

/// Basis indices of `T(x_i x_{i′})`, `i = 1..n`.
pub fn torus_basis(x: &GradedAlgebra) -> Result<Vec<usize>> {
    let (_, sig) = cartan_parts(x)?;
    let n = sig.m();
    (0..n)
        .map(|i| {
            let mut alpha = vec![0; n];
            alpha[i] = 1;
            let mon = Monomial::new(alpha, 1 << i);
            x.index_of(&mon)
                .ok_or_else(|| Error::Consistency(format!("torus element {mon} missing")))
        })
        .collect()
}

/// Weight `α + u` of the label `x^(α)x^u`: component `i` is `[i′ ∈ u] − α_i`.
/// The contact variable `x_{2n+1}` does not contribute.
pub fn weight_of(field: &PrimeField, n: usize, mon: &Monomial) -> Weight {
    Weight(
        (0..n)
            .map(|i| {
                let bit = i64::from((mon.odd() >> i) & 1);
                field.elem(bit - i64::from(mon.alpha()[i]))
            })
            .collect(),
    )
}

/// Weight spaces of an algebra, checked against the structure constants.
#[derive(Clone, Debug)]
pub struct WeightDecomposition {
    weights: Vec<Weight>,
    blocks: BTreeMap<Weight, Vec<usize>>,
}

impl WeightDecomposition {
    pub fn weight(&self, i: usize) -> &Weight {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn blocks(&self) -> &BTreeMap<Weight, Vec<usize>> {
        &self.blocks
    }

    pub fn block(&self, w: &Weight) -> &[usize] {
        self.blocks.get(w).map_or(&[], Vec::as_slice)
    }

    /// Indices in `X_d ∩ X_w`.
    pub fn block_at(&self, x: &GradedAlgebra, d: i32, w: &Weight) -> Vec<usize> {
        self.block(w)
            .iter()
            .copied()
            .filter(|&i| x.degree(i) == d)
            .collect()
    }
}

/// Computes the weight of every basis element and verifies that it is an
/// eigenvector of each `ad T(x_i x_{i′})` with that eigenvalue.
pub fn weight_decomposition(x: &GradedAlgebra) -> Result<WeightDecomposition> {
    let (_, sig) = cartan_parts(x)?;
    let field = *x.field();
    let n = sig.m();
    let torus = torus_basis(x)?;
    let weights: Vec<Weight> = x.labels().iter().map(|m| weight_of(&field, n, m)).collect();
    let bad = (0..x.dim()).into_par_iter().find_first(|&j| {
        torus.iter().enumerate().any(|(i, &h)| {
            let expect = SparseVec::from_entries(&field, [(j, weights[j].0[i])]);
            x.bracket_basis(h, j) != &expect
        })
    });
    if let Some(j) = bad {
        return Err(Error::Consistency(format!(
            "{} is not a torus eigenvector with weight {}",
            x.label_text(j),
            weights[j]
        )));
    }
    let mut blocks: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    for (i, w) in weights.iter().enumerate() {
        blocks.entry(w.clone()).or_default().push(i);
    }
    Ok(WeightDecomposition { weights, blocks })
}

/// First structure constant `[e_i,e_j] ∋ e_k` whose weights are not additive.
pub fn weight_additivity_violation(
    x: &GradedAlgebra,
    wd: &WeightDecomposition,
) -> Option<(usize, usize, usize)> {
    let f = x.field();
    for i in 0..x.dim() {
        for j in 0..x.dim() {
            let target = wd.weight(i).add(f, wd.weight(j));
            for &(k, _) in x.bracket_basis(i, j).entries() {
                if wd.weight(k) != &target {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// Outcome of comparing each weight space with its predicted spanning labels.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct WeightSpaceReport {
    pub weights_checked: usize,
    pub representatives_checked: usize,
    pub discrepancies: Vec<String>,
}

impl WeightSpaceReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

fn label_str(alpha: &[u32], odd: u32) -> String {
    Monomial::new(alpha.to_vec(), odd).to_string()
}

/// Labels predicted to span `X_{(α+u)}` from one representative `(α, u)`:
/// `x^(β − Σ_{j′∈v1} ε_j + Σ_{j′∈v2} ε_j) x^{u−v1+v2}` with `β ≡ α (mod p)`,
/// `v1 ⊆ u`, `v2` disjoint from `u`. For KO, `v2` may contain the contact
/// variable, which shifts no exponent.
pub fn predicted_weight_space(
    family: Family,
    sig: &Signature,
    alpha: &[u32],
    u: u32,
) -> BTreeSet<Monomial> {
    let n = sig.m();
    let p = sig.field().characteristic();
    let pi = sig.pi();
    let free = match family {
        Family::HO => (1u32 << n) - 1,
        Family::KO => (1u32 << (n + 1)) - 1,
    };
    let comp = free & !u;
    // β is an integer vector; only the shifted exponent must lie in 𝔸, so β_i ∈ [−1, π_i + 1]
    let choices: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let r = i64::from(alpha[i] % p);
            let p = i64::from(p);
            (-1..=i64::from(pi[i]) + 1)
                .filter(|b| (b - r).rem_euclid(p) == 0)
                .collect()
        })
        .collect();
    let mut out = BTreeSet::new();
    let mut beta = vec![0i64; n];
    let mut v1 = u;
    loop {
        let mut v2 = comp;
        loop {
            let mut idx = vec![0usize; n];
            'beta: loop {
                for i in 0..n {
                    beta[i] = choices[i][idx[i]];
                }
                let mut gamma = Vec::with_capacity(n);
                let mut ok = true;
                for i in 0..n {
                    let g = beta[i] - i64::from((v1 >> i) & 1) + i64::from((v2 >> i) & 1);
                    if g < 0 || g > i64::from(pi[i]) {
                        ok = false;
                        break;
                    }
                    gamma.push(g as u32);
                }
                if ok {
                    let mon = Monomial::new(gamma, (u & !v1) | v2);
                    if !(family == Family::HO && mon == sig.one_monomial()) {
                        out.insert(mon);
                    }
                }
                let mut k = 0;
                loop {
                    if k == n {
                        break 'beta;
                    }
                    idx[k] += 1;
                    if idx[k] < choices[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
            }
            if v2 == 0 {
                break;
            }
            v2 = (v2 - 1) & comp;
        }
        if v1 == 0 {
            break;
        }
        v1 = (v1 - 1) & u;
    }
    out
}

/// Checks every weight space against the spanning set predicted from each of
/// its labels.
pub fn verify_proposition_weight_spaces(x: &GradedAlgebra) -> Result<WeightSpaceReport> {
    let (family, sig) = cartan_parts(x)?;
    let wd = weight_decomposition(x)?;
    let n = sig.m();
    let mask = (1u32 << n) - 1;
    let results: Vec<(usize, Vec<String>)> = wd
        .blocks()
        .par_iter()
        .map(|(w, idx)| {
            let actual: BTreeSet<Monomial> =
                idx.iter().map(|&i| x.label(i).unwrap().clone()).collect();
            let mut problems = Vec::new();
            let mut reps = BTreeSet::new();
            for m in &actual {
                reps.insert((m.alpha().to_vec(), m.odd() & mask));
            }
            for (alpha, u) in &reps {
                let predicted = predicted_weight_space(family, sig, alpha, *u);
                if predicted != actual {
                    let extra: Vec<String> = predicted
                        .difference(&actual)
                        .map(|m| m.to_string())
                        .collect();
                    let missing: Vec<String> = actual
                        .difference(&predicted)
                        .map(|m| m.to_string())
                        .collect();
                    problems.push(format!(
                        "weight {w} from {}: predicted-only [{}], computed-only [{}]",
                        label_str(alpha, *u),
                        extra.join("; "),
                        missing.join("; ")
                    ));
                }
            }
            (reps.len(), problems)
        })
        .collect();
    let mut report = WeightSpaceReport {
        weights_checked: wd.blocks().len(),
        ..Default::default()
    };
    for (r, problems) in results {
        report.representatives_checked += r;
        report.discrepancies.extend(problems);
    }
    Ok(report)
}

/// Labels `x^(α + Σ_{j′∈u, j′≠2n+1} ε_j) x^u` with `α ≡ 0 (mod p)` and
/// `u ⊆ {n+1, …, 2n+1}`, the predicted spanning set of `KO_θ`.
pub fn ko_theta_labels(sig: &Signature) -> BTreeSet<Monomial> {
    let n = sig.m();
    let p = sig.field().characteristic();
    let pi = sig.pi();
    let mut out = BTreeSet::new();
    let mut base = vec![0u32; n];
    loop {
        for u in 0..(1u32 << (n + 1)) {
            let gamma: Vec<u32> = (0..n).map(|i| base[i] + ((u >> i) & 1)).collect();
            if gamma.iter().zip(pi).all(|(g, m)| g <= m) {
                out.insert(Monomial::new(gamma, u));
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            base[k] += p;
            if base[k] <= pi[k] {
                break;
            }
            base[k] = 0;
            k += 1;
        }
    }
}

/// Compares the zero weight space of KO with [`ko_theta_labels`].
pub fn verify_ko_theta(x: &GradedAlgebra) -> Result<Option<String>> {
    let (family, sig) = cartan_parts(x)?;
    if family != Family::KO {
        return Err(Error::WrongContext("a KO algebra"));
    }
    let wd = weight_decomposition(x)?;
    let actual: BTreeSet<Monomial> = wd
        .block(&Weight::zero(sig.m()))
        .iter()
        .map(|&i| x.label(i).unwrap().clone())
        .collect();
    let predicted = ko_theta_labels(sig);
    if actual == predicted {
        Ok(None)
    } else {
        Ok(Some(format!(
            "zero weight space has {} labels, prediction has {}",
            actual.len(),
            predicted.len()
        )))
    }
}

/// Weights occurring in `X_d`.
pub fn delta_sets(x: &GradedAlgebra, d: i32) -> Result<BTreeSet<Weight>> {
    let (_, sig) = cartan_parts(x)?;
    let n = sig.m();
    Ok(x.basis_of_degree(d)
        .into_iter()
        .map(|i| weight_of(x.field(), n, x.label(i).unwrap()))
        .collect())
}

/// Top degree: `ξ − 2` for HO, `ξ` for KO.
pub fn top_degree(family: Family, sig: &Signature) -> i32 {
    match family {
        Family::HO => sig.xi() as i32 - 2,
        Family::KO => sig.xi() as i32,
    }
}

/// `Σ_{i=1}^n ∂_i ∂_{i′}` applied to a monomial of `O(n,n;t)`.
pub fn divergence_of(sig: &Signature, mon: &Monomial) -> Result<Poly> {
    let n = sig.m();
    let a = Poly::monomial(sig, mon.clone());
    let mut out = Poly::zero(sig);
    for i in 1..=n {
        out.add_scaled(Fp::ONE, &a.partial(n + i)?.partial(i)?)?;
    }
    Ok(out)
}

fn all_labels_of_size(sig: &Signature, size: u32) -> Vec<Monomial> {
    let mask = (1u32 << sig.m()) - 1;
    sig.basis()
        .into_iter()
        .filter(|m| m.odd() & !mask == 0 && m.alpha_sum() + m.odd().count_ones() == size)
        .collect()
}

/// The instantiated root-set formulas at degrees `0`, `1`, `2` and the top
/// degree. `None` for other degrees.
///
/// Families indexed by distinct indices are empty when too few indices
/// exist. The summand written `2ε_i + ⟨j⟩` is read as `2ε_i + ⟨j′⟩`.
pub fn formula_delta_set(
    family: Family,
    sig: &Signature,
    d: i32,
) -> Result<Option<BTreeSet<Weight>>> {
    let f = *sig.field();
    let n = sig.m();
    let w = |alpha: &[(usize, i64)], primes: &[usize]| {
        let mut a = vec![0i64; n];
        for &(i, c) in alpha {
            a[i - 1] += c;
        }
        Weight::from_label_data(&f, &a, primes)
    };
    let mut out = BTreeSet::new();
    let idx: Vec<usize> = (1..=n).collect();
    if d == top_degree(family, sig) {
        let pi: Vec<i64> = sig.pi().iter().map(|&v| i64::from(v)).collect();
        out.insert(Weight::from_label_data(&f, &pi, &idx));
        return Ok(Some(out));
    }
    match d {
        0 => {
            out.insert(Weight::zero(n));
            for &i in &idx {
                out.insert(w(&[(i, 2)], &[]));
                for &j in &idx {
                    if i != j {
                        out.insert(w(&[(i, 1), (j, 1)], &[]));
                        out.insert(w(&[(i, 1)], &[j]));
                        out.insert(w(&[], &[i, j]));
                    }
                }
            }
        }
        1 => {
            for &i in &idx {
                out.insert(w(&[(i, 1)], &[]));
                out.insert(w(&[], &[i]));
                out.insert(w(&[(i, 3)], &[]));
                for &j in &idx {
                    if i == j {
                        continue;
                    }
                    out.insert(w(&[(i, 2), (j, 1)], &[]));
                    out.insert(w(&[(i, 2)], &[j]));
                    for &k in &idx {
                        if k == i || k == j {
                            continue;
                        }
                        out.insert(w(&[(i, 1), (j, 1), (k, 1)], &[]));
                        out.insert(w(&[(i, 1), (j, 1)], &[k]));
                        out.insert(w(&[(i, 1)], &[j, k]));
                        out.insert(w(&[], &[i, j, k]));
                    }
                }
            }
        }
        2 => {
            out.insert(Weight::zero(n));
            for size in [4, 2] {
                for m in all_labels_of_size(sig, size) {
                    if divergence_of(sig, &m)?.is_zero() {
                        out.insert(weight_of(&f, n, &m));
                    }
                }
            }
        }
        _ => return Ok(None),
    }
    Ok(Some(out))
}

/// One failure of graded-dimension symmetry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryViolation {
    pub k: i32,
    pub mirror: i32,
    /// `None` for the plain degree condition, `Some(γ)` for `X_k ∩ X_γ` vs `X_mirror ∩ X_{−γ}`.
    pub weight: Option<Weight>,
    pub dim_k: usize,
    pub dim_mirror: usize,
}

impl fmt::Display for SymmetryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.weight {
            None => write!(
                f,
                "dim X_{} = {} but dim X_{} = {}",
                self.k, self.dim_k, self.mirror, self.dim_mirror
            ),
            Some(w) => write!(
                f,
                "dim X_{}∩X_{w} = {} but dim X_{}∩X_-{w} = {}",
                self.k, self.dim_k, self.mirror, self.dim_mirror
            ),
        }
    }
}

/// Result of the necessary condition for a nondegenerate associative form on
/// `X = ⊕_{i=−r}^{q} X_i`: `dim X_k = dim X_{q−r−k}` and the weight-refined
/// version with `γ ↔ −γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub r: i32,
    pub q: i32,
    pub degree_violations: Vec<SymmetryViolation>,
    pub weight_violations: Vec<SymmetryViolation>,
}

impl ObstructionReport {
    /// True when some symmetry fails, so no nondegenerate associative form exists.
    pub fn obstructed(&self) -> bool {
        !self.degree_violations.is_empty() || !self.weight_violations.is_empty()
    }

    pub fn contains(
        &self,
        k: i32,
        weight: Option<&Weight>,
        dim_k: usize,
        dim_mirror: usize,
    ) -> bool {
        let list = if weight.is_some() {
            &self.weight_violations
        } else {
            &self.degree_violations
        };
        list.iter().any(|v| {
            v.k == k
                && v.weight.as_ref() == weight
                && v.dim_k == dim_k
                && v.dim_mirror == dim_mirror
        })
    }
}

pub fn associative_form_obstruction(x: &GradedAlgebra) -> Result<ObstructionReport> {
    let (lo, hi) = x.degree_range();
    let (r, q) = (-lo, hi);
    let mut degree_violations = Vec::new();
    for k in lo..=hi {
        let mirror = q - r - k;
        let (a, b) = (x.basis_of_degree(k).len(), x.basis_of_degree(mirror).len());
        if a != b {
            degree_violations.push(SymmetryViolation {
                k,
                mirror,
                weight: None,
                dim_k: a,
                dim_mirror: b,
            });
        }
    }
    let mut weight_violations = Vec::new();
    if x.family().is_some() {
        let wd = weight_decomposition(x)?;
        let f = x.field();
        let mut count: BTreeMap<(i32, Weight), usize> = BTreeMap::new();
        for i in 0..x.dim() {
            *count
                .entry((x.degree(i), wd.weight(i).clone()))
                .or_default() += 1;
        }
        let weights: BTreeSet<Weight> = wd.blocks().keys().cloned().collect();
        for k in lo..=hi {
            let mirror = q - r - k;
            for g in &weights {
                let a = count.get(&(k, g.clone())).copied().unwrap_or(0);
                let b = count.get(&(mirror, g.neg(f))).copied().unwrap_or(0);
                if a != b {
                    weight_violations.push(SymmetryViolation {
                        k,
                        mirror,
                        weight: Some(g.clone()),
                        dim_k: a,
                        dim_mirror: b,
                    });
                }
            }
        }
    }
    Ok(ObstructionReport {
        r,
        q,
        degree_violations,
        weight_violations,
    })
}

/// One row of the weight table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightRow {
    pub weight: Weight,
    pub degree: i32,
    pub dim: usize,
    pub labels: Vec<String>,
}

/// Weight spaces refined by degree, optionally restricted to one degree.
pub fn weight_table(x: &GradedAlgebra, degree: Option<i32>) -> Result<Vec<WeightRow>> {
    let wd = weight_decomposition(x)?;
    let mut rows: BTreeMap<(i32, Weight), Vec<usize>> = BTreeMap::new();
    for i in 0..x.dim() {
        if degree.is_none_or(|d| d == x.degree(i)) {
            rows.entry((x.degree(i), wd.weight(i).clone()))
                .or_default()
                .push(i);
        }
    }
    Ok(rows
        .into_iter()
        .map(|((degree, weight), idx)| WeightRow {
            weight,
            degree,
            dim: idx.len(),
            labels: idx.iter().map(|&i| x.label_text(i)).collect(),
        })
        .collect())
}

/// Plain-text rendering of [`weight_table`].
pub fn render_weight_table(rows: &[WeightRow]) -> String {
    let mut s = format!("{:>6}  {:<16} {:>4}\n", "degree", "weight", "dim");
    for r in rows {
        s.push_str(&format!(
            "{:>6}  {:<16} {:>4}\n",
            r.degree,
            r.weight.to_string(),
            r.dim
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::{build_algebra, CartanParams};

    fn ho() -> GradedAlgebra {
        build_algebra(&CartanParams::new(Family::HO, 2, &[1, 1], 5).unwrap()).unwrap()
    }

    #[test]
    fn weight_examples() {
        let f = PrimeField::new(5).unwrap();
        assert!(weight_of(&f, 2, &Monomial::new(vec![1, 0], 0b01)).is_zero());
        assert_eq!(
            weight_of(&f, 2, &Monomial::new(vec![0, 0], 0b01)),
            Weight(vec![Fp::ONE, Fp::ZERO])
        );
        let top = weight_of(&f, 2, &Monomial::new(vec![4, 4], 0b11));
        assert_eq!(top, Weight(vec![f.elem(2), f.elem(2)]));
    }

    #[test]
    fn torus_elements() {
        let x = ho();
        let t = torus_basis(&x).unwrap();
        assert_eq!(t.len(), 2);
        for &i in &t {
            assert_eq!(x.degree(i), 0);
            assert!(!x.parity(i).is_odd());
        }
    }

    #[test]
    fn decomposition_partitions_basis() {
        let x = ho();
        let wd = weight_decomposition(&x).unwrap();
        let total: usize = wd.blocks().values().map(Vec::len).sum();
        assert_eq!(total, x.dim());
        assert!(weight_additivity_violation(&x, &wd).is_none());
    }

    #[test]
    fn top_root_set() {
        let x = ho();
        let sig = x.signature().unwrap();
        let top = delta_sets(&x, 8).unwrap();
        assert_eq!(top, formula_delta_set(Family::HO, sig, 8).unwrap().unwrap());
        assert!(delta_sets(&x, 0).unwrap().contains(&Weight::zero(2)));
    }
}
