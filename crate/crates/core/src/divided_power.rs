//! The super-commutative algebra `O(m,n;t) = O(m;t) ⊗ Λ(n)`.
//!
//! Variables are numbered `1..=m+n`; the first `m` are the even divided-power
//! variables, the remaining `n` are odd exterior variables. A basis word
//! `x^(α) x^u` stores `α` as a multi-index and `u` as a bit set over the odd
//! variables (bit `k` is variable `m+1+k`), always in ascending order. All
//! reordering signs are produced at multiplication / differentiation time.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fp, PrimeField};
use crate::parity::Parity;

/// Which family the signature is meant for; gates the paired-index helpers.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Context {
    General,
    /// `O(n,n;t)`.
    Hamiltonian,
    /// `O(n,n+1;t)`; the last odd variable `x_{2n+1}` is the contact variable.
    Contact,
}

#[derive(Debug, PartialEq, Eq)]
struct SignatureInner {
    m: usize,
    n: usize,
    t: Vec<u32>,
    pi: Vec<u32>,
    field: PrimeField,
    context: Context,
    xi: u32,
}

/// Shape data of `O(m,n;t)` over `F_p`. Cheap to clone.
#[derive(Clone, Debug)]
pub struct Signature(Arc<SignatureInner>);

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Signature {}

impl Signature {
    pub fn new(m: usize, n: usize, t: &[u32], p: u32) -> Result<Self> {
        Self::build(m, n, t, p, Context::General)
    }

    /// Signature of `O(n,n;t)`.
    pub fn hamiltonian(n: usize, t: &[u32], p: u32) -> Result<Self> {
        Self::build(n, n, t, p, Context::Hamiltonian)
    }

    /// Signature of `O(n,n+1;t)`.
    pub fn contact(n: usize, t: &[u32], p: u32) -> Result<Self> {
        Self::build(n, n + 1, t, p, Context::Contact)
    }

    fn build(m: usize, n: usize, t: &[u32], p: u32, context: Context) -> Result<Self> {
        let field = PrimeField::new(p)?;
        if t.len() != m {
            return Err(Error::LengthMismatch {
                left: t.len(),
                right: m,
            });
        }
        if m + n == 0 || n > 30 {
            return Err(Error::InvalidParameter(format!(
                "unsupported variable counts m={m}, n={n}"
            )));
        }
        let mut pi = Vec::with_capacity(m);
        for &ti in t {
            let pow = (ti >= 1)
                .then(|| (p as u64).checked_pow(ti))
                .flatten()
                .filter(|&v| v <= u32::MAX as u64 / 4)
                .ok_or_else(|| Error::InvalidParameter(format!("t entry {ti} out of range")))?;
            pi.push((pow - 1) as u32);
        }
        let total: u32 = pi.iter().sum();
        let xi = match context {
            Context::General | Context::Hamiltonian => total + n as u32,
            Context::Contact => total + m as u32,
        };
        Ok(Signature(Arc::new(SignatureInner {
            m,
            n,
            t: t.to_vec(),
            pi,
            field,
            context,
            xi,
        })))
    }

    #[inline]
    pub fn field(&self) -> &PrimeField {
        &self.0.field
    }

    /// Number of even variables.
    #[inline]
    pub fn m(&self) -> usize {
        self.0.m
    }

    /// Number of odd variables.
    #[inline]
    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn t(&self) -> &[u32] {
        &self.0.t
    }

    /// `π_i = p^{t_i} - 1`.
    pub fn pi(&self) -> &[u32] {
        &self.0.pi
    }

    /// `|π| + n`, with `n` the number of paired odd variables.
    pub fn xi(&self) -> u32 {
        self.0.xi
    }

    pub fn context(&self) -> Context {
        self.0.context
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.0.m + self.0.n
    }

    /// Dimension of `O(m,n;t)`.
    pub fn dim(&self) -> usize {
        self.0.pi.iter().map(|&p| p as usize + 1).product::<usize>() << self.0.n
    }

    fn check_var(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.nvars() {
            Err(Error::IndexOutOfRange {
                index: i,
                max: self.nvars(),
            })
        } else {
            Ok(())
        }
    }

    /// Parity of `∂_i` (equivalently of `x_i`): even iff `i <= m`.
    pub fn index_parity(&self, i: usize) -> Result<Parity> {
        self.check_var(i)?;
        Ok(if i <= self.m() {
            Parity::Even
        } else {
            Parity::Odd
        })
    }

    fn paired(&self) -> Result<usize> {
        match self.context() {
            Context::General => Err(Error::WrongContext("a Hamiltonian or contact signature")),
            _ => Ok(self.m()),
        }
    }

    /// The pairing `i ↦ i′`: `0′ = 2n+1`, `i′ = i+n` for `i ≤ n`, `i′ = i-n` for `n < i ≤ 2n`.
    pub fn prime_index(&self, i: usize) -> Result<usize> {
        let n = self.paired()?;
        match i {
            0 => Ok(2 * n + 1),
            i if i <= n => Ok(i + n),
            i if i <= 2 * n => Ok(i - n),
            _ => Err(Error::IndexOutOfRange {
                index: i,
                max: 2 * n,
            }),
        }
    }

    /// `‖u‖`: `|u|`, plus one more if the contact variable occurs.
    pub fn norm_u(&self, odd: u32) -> Result<u32> {
        if self.context() != Context::Contact {
            return Err(Error::WrongContext("a contact signature"));
        }
        let bonus = (odd >> self.m()) & 1;
        Ok(odd.count_ones() + bonus)
    }

    /// Principal degree `|α| + ‖u‖` (contact signatures only).
    pub fn principal_degree(&self, mon: &Monomial) -> Result<i32> {
        Ok(mon.alpha_sum() as i32 + self.norm_u(mon.odd)? as i32)
    }

    /// Variable `x_i` as a monomial.
    pub fn var(&self, i: usize) -> Result<Monomial> {
        self.check_var(i)?;
        let mut alpha = vec![0; self.m()];
        let mut odd = 0;
        if i <= self.m() {
            alpha[i - 1] = 1;
        } else {
            odd = 1 << (i - self.m() - 1);
        }
        Ok(Monomial { alpha, odd })
    }

    pub fn one_monomial(&self) -> Monomial {
        Monomial {
            alpha: vec![0; self.m()],
            odd: 0,
        }
    }

    /// Checks that the word lies in `A(m;t) × B(n)`.
    pub fn contains(&self, mon: &Monomial) -> bool {
        mon.alpha.len() == self.m()
            && mon.alpha.iter().zip(self.pi()).all(|(a, p)| a <= p)
            && mon.odd >> self.n() == 0
    }

    /// Standard basis, ordered by (standard degree, α lexicographic, u as bitmask).
    pub fn basis(&self) -> Vec<Monomial> {
        let mut alphas: Vec<Vec<u32>> = vec![vec![]];
        for &p in self.pi() {
            let mut next = Vec::with_capacity(alphas.len() * (p as usize + 1));
            for a in &alphas {
                for v in 0..=p {
                    let mut b = a.clone();
                    b.push(v);
                    next.push(b);
                }
            }
            alphas = next;
        }
        let mut out = Vec::with_capacity(self.dim());
        for a in &alphas {
            for odd in 0..(1u32 << self.n()) {
                out.push(Monomial {
                    alpha: a.clone(),
                    odd,
                });
            }
        }
        out.sort_by(|a, b| a.std_key().cmp(&b.std_key()));
        out
    }

    /// Product of two basis words: coefficient and word, or `None` when it vanishes.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Fp, Monomial)> {
        if a.odd & b.odd != 0 {
            return None;
        }
        let f = self.field();
        let c = f.multi_binomial(&a.alpha, &b.alpha).ok()?;
        if c.is_zero() {
            return None;
        }
        let alpha: Vec<u32> = a.alpha.iter().zip(&b.alpha).map(|(x, y)| x + y).collect();
        debug_assert!(alpha.iter().zip(self.pi()).all(|(x, p)| x <= p));
        let negate = merge_sign(a.odd, b.odd);
        Some((
            f.signed(c, negate),
            Monomial {
                alpha,
                odd: a.odd | b.odd,
            },
        ))
    }

    /// `∂_r` applied to a basis word.
    pub fn partial_monomial(&self, r: usize, mon: &Monomial) -> Result<Option<(Fp, Monomial)>> {
        self.check_var(r)?;
        let m = self.m();
        if r <= m {
            if mon.alpha[r - 1] == 0 {
                return Ok(None);
            }
            let mut alpha = mon.alpha.clone();
            alpha[r - 1] -= 1;
            return Ok(Some((
                Fp::ONE,
                Monomial {
                    alpha,
                    odd: mon.odd,
                },
            )));
        }
        let bit = 1u32 << (r - m - 1);
        if mon.odd & bit == 0 {
            return Ok(None);
        }
        let before = (mon.odd & (bit - 1)).count_ones();
        let c = self.field().signed(Fp::ONE, before % 2 == 1);
        Ok(Some((
            c,
            Monomial {
                alpha: mon.alpha.clone(),
                odd: mon.odd & !bit,
            },
        )))
    }
}

/// Sign of sorting the concatenation `x^u x^v` (disjoint sets) into ascending order:
/// true when an odd number of transpositions is needed.
#[inline]
pub fn merge_sign(u: u32, v: u32) -> bool {
    let mut inversions = 0u32;
    let mut rest = v;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inversions += (u >> b >> 1).count_ones();
        rest &= rest - 1;
    }
    inversions % 2 == 1
}

/// A basis word `x^(α) x^u` of `O(m,n;t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    alpha: Vec<u32>,
    odd: u32,
}

impl Monomial {
    pub fn new(alpha: Vec<u32>, odd: u32) -> Self {
        Monomial { alpha, odd }
    }

    pub fn alpha(&self) -> &[u32] {
        &self.alpha
    }

    /// Bit set of the odd variables present; bit `k` is variable `m+1+k`.
    pub fn odd(&self) -> u32 {
        self.odd
    }

    pub fn alpha_sum(&self) -> u32 {
        self.alpha.iter().sum()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd.count_ones())
    }

    /// `|α| + |u|`.
    pub fn std_degree(&self) -> i32 {
        (self.alpha_sum() + self.odd.count_ones()) as i32
    }

    /// True if odd variable number `i` (1-based over all variables) is present.
    pub fn has_var(&self, i: usize) -> bool {
        let m = self.alpha.len();
        if i <= m {
            i >= 1 && self.alpha[i - 1] > 0
        } else {
            (self.odd >> (i - m - 1)) & 1 == 1
        }
    }

    fn std_key(&self) -> (i32, &[u32], u32) {
        (self.std_degree(), &self.alpha, self.odd)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.alpha.len();
        write!(f, "x^(")?;
        for (k, a) in self.alpha.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ") u{{")?;
        let mut first = true;
        for b in 0..32 {
            if (self.odd >> b) & 1 == 1 {
                if !first {
                    write!(f, ",")?;
                }
                write!(f, "{}", m + 1 + b)?;
                first = false;
            }
        }
        write!(f, "}}")
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Parses the report form `x^(a1,...,am) u{i1,...,ik}`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed monomial {s:?}"));
        let rest = s.trim().strip_prefix("x^(").ok_or_else(bad)?;
        let (alpha_txt, rest) = rest.split_once(')').ok_or_else(bad)?;
        let alpha = if alpha_txt.is_empty() {
            vec![]
        } else {
            alpha_txt
                .split(',')
                .map(|v| v.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        let rest = rest.trim_start().strip_prefix("u{").ok_or_else(bad)?;
        let odd_txt = rest.strip_suffix('}').ok_or_else(bad)?;
        let m = alpha.len();
        let mut odd = 0u32;
        let mut last = 0usize;
        if !odd_txt.trim().is_empty() {
            for v in odd_txt.split(',') {
                let i: usize = v.trim().parse().map_err(|_| bad())?;
                if i <= m || i <= last || i - m > 32 {
                    return Err(bad());
                }
                odd |= 1 << (i - m - 1);
                last = i;
            }
        }
        Ok(Monomial { alpha, odd })
    }
}

/// A sparse `F_p`-linear combination of basis words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    sig: Signature,
    terms: BTreeMap<Monomial, Fp>,
}

impl Poly {
    pub fn zero(sig: &Signature) -> Self {
        Poly {
            sig: sig.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(sig: &Signature) -> Self {
        Self::monomial(sig, sig.one_monomial())
    }

    pub fn monomial(sig: &Signature, mon: Monomial) -> Self {
        Self::term(sig, mon, Fp::ONE)
    }

    pub fn term(sig: &Signature, mon: Monomial, c: Fp) -> Self {
        let mut p = Self::zero(sig);
        p.add_term(mon, c);
        p
    }

    /// The variable `x_i`.
    pub fn var(sig: &Signature, i: usize) -> Result<Self> {
        Ok(Self::monomial(sig, sig.var(i)?))
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Fp)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coeff(&self, mon: &Monomial) -> Fp {
        self.terms.get(mon).copied().unwrap_or(Fp::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c · mon` in place.
    pub fn add_term(&mut self, mon: Monomial, c: Fp) {
        if c.is_zero() {
            return;
        }
        let f = *self.sig.field();
        match self.terms.entry(mon) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = f.add(*e.get(), c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    fn same_sig(&self, other: &Poly) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch)
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: Fp, other: &Poly) -> Result<()> {
        self.same_sig(other)?;
        let f = *self.sig.field();
        for (m, v) in other.terms() {
            self.add_term(m.clone(), f.mul(c, v));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        let mut out = self.clone();
        out.add_scaled(Fp::ONE, other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        let mut out = self.clone();
        out.add_scaled(self.sig.field().neg(Fp::ONE), other)?;
        Ok(out)
    }

    pub fn scale(&self, c: Fp) -> Poly {
        let f = *self.sig.field();
        let mut out = Poly::zero(&self.sig);
        if c.is_zero() {
            return out;
        }
        for (m, v) in self.terms() {
            out.terms.insert(m.clone(), f.mul(c, v));
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(self.sig.field().neg(Fp::ONE))
    }

    /// Product in `O(m,n;t)`.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.same_sig(other)?;
        let f = *self.sig.field();
        let mut out = Poly::zero(&self.sig);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if let Some((c, mon)) = self.sig.mul_monomials(a, b) {
                    out.add_term(mon, f.mul(c, f.mul(ca, cb)));
                }
            }
        }
        Ok(out)
    }

    /// `∂_r` extended linearly.
    pub fn partial(&self, r: usize) -> Result<Poly> {
        self.sig.check_var(r)?;
        let f = *self.sig.field();
        let mut out = Poly::zero(&self.sig);
        for (mon, c) in self.terms() {
            if let Some((s, m2)) = self.sig.partial_monomial(r, mon)? {
                out.add_term(m2, f.mul(s, c));
            }
        }
        Ok(out)
    }

    /// The Z₂-homogeneous components `[even, odd]`.
    pub fn homogeneous_parts(&self) -> [Poly; 2] {
        let mut parts = [Poly::zero(&self.sig), Poly::zero(&self.sig)];
        for (m, c) in self.terms() {
            parts[m.parity().bit() as usize].terms.insert(m.clone(), c);
        }
        parts
    }

    /// Parity if homogeneous and nonzero.
    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(Monomial::parity);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    /// Standard degree if homogeneous and nonzero.
    pub fn std_degree(&self) -> Option<i32> {
        let mut it = self.terms.keys().map(Monomial::std_degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{m}")?;
        }
        Ok(())
    }
}
