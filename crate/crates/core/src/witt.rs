//! Superderivations `Σ f_j ∂_j` of `O(m,n;t)`, i.e. elements of `W(m,n;t)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::divided_power::{Context, Poly, Signature};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::parity::Parity;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittElement {
    sig: Signature,
    coeffs: BTreeMap<usize, Poly>,
}

impl WittElement {
    pub fn zero(sig: &Signature) -> Self {
        WittElement {
            sig: sig.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    /// `f ∂_j`.
    pub fn term(f: Poly, j: usize) -> Result<Self> {
        let mut w = WittElement::zero(f.signature());
        w.add_term(j, &f)?;
        Ok(w)
    }

    /// The bare partial derivative `∂_j`.
    pub fn partial(sig: &Signature, j: usize) -> Result<Self> {
        Self::term(Poly::one(sig), j)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    /// Coefficient of `∂_j` (zero if absent).
    pub fn coeff(&self, j: usize) -> Poly {
        self.coeffs
            .get(&j)
            .cloned()
            .unwrap_or_else(|| Poly::zero(&self.sig))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &Poly)> + '_ {
        self.coeffs.iter().map(|(&j, f)| (j, f))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `self += f ∂_j`.
    pub fn add_term(&mut self, j: usize, f: &Poly) -> Result<()> {
        if f.signature() != &self.sig {
            return Err(Error::SignatureMismatch);
        }
        self.sig.index_parity(j)?;
        let entry = self
            .coeffs
            .entry(j)
            .or_insert_with(|| Poly::zero(&self.sig));
        entry.add_scaled(Fp::ONE, f)?;
        if entry.is_zero() {
            self.coeffs.remove(&j);
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, c: Fp, other: &WittElement) -> Result<()> {
        if other.sig != self.sig {
            return Err(Error::SignatureMismatch);
        }
        for (j, f) in other.coeffs() {
            self.add_term(j, &f.scale(c))?;
        }
        Ok(())
    }

    pub fn add(&self, other: &WittElement) -> Result<WittElement> {
        let mut out = self.clone();
        out.add_scaled(Fp::ONE, other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &WittElement) -> Result<WittElement> {
        let mut out = self.clone();
        out.add_scaled(self.sig.field().neg(Fp::ONE), other)?;
        Ok(out)
    }

    pub fn scale(&self, c: Fp) -> WittElement {
        let mut out = WittElement::zero(&self.sig);
        for (&j, f) in &self.coeffs {
            let g = f.scale(c);
            if !g.is_zero() {
                out.coeffs.insert(j, g);
            }
        }
        out
    }

    /// `Σ_j f_j · ∂_j(g)`.
    pub fn apply(&self, g: &Poly) -> Result<Poly> {
        if g.signature() != &self.sig {
            return Err(Error::SignatureMismatch);
        }
        let mut out = Poly::zero(&self.sig);
        for (&j, f) in &self.coeffs {
            let d = g.partial(j)?;
            if !d.is_zero() {
                out.add_scaled(Fp::ONE, &f.mul(&d)?)?;
            }
        }
        Ok(out)
    }

    /// Splits into `[even, odd]` parts; a term `x^(α)x^u ∂_j` has parity `|u| + p(∂_j)`.
    pub fn homogeneous_parts(&self) -> [WittElement; 2] {
        let mut parts = [WittElement::zero(&self.sig), WittElement::zero(&self.sig)];
        for (&j, f) in &self.coeffs {
            let pj = self.sig.index_parity(j).expect("stored index is valid");
            for (k, piece) in f.homogeneous_parts().into_iter().enumerate() {
                if piece.is_zero() {
                    continue;
                }
                let total = Parity::from_bit(k as u32) + pj;
                parts[total.bit() as usize].coeffs.insert(j, piece);
            }
        }
        parts
    }

    /// Parity if homogeneous and nonzero.
    pub fn parity(&self) -> Option<Parity> {
        let [even, odd] = self.homogeneous_parts();
        match (even.is_zero(), odd.is_zero()) {
            (false, true) => Some(Parity::Even),
            (true, false) => Some(Parity::Odd),
            _ => None,
        }
    }

    /// Supercommutator, computed coefficientwise:
    /// `[D,E] = Σ_j (D(E_j) - (-1)^{p(D)p(E)} E(D_j)) ∂_j` on homogeneous parts.
    pub fn bracket(&self, other: &WittElement) -> Result<WittElement> {
        if other.sig != self.sig {
            return Err(Error::SignatureMismatch);
        }
        let f = *self.sig.field();
        let mut out = WittElement::zero(&self.sig);
        let lhs = self.homogeneous_parts();
        let rhs = other.homogeneous_parts();
        for (pd, d) in lhs.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            for (pe, e) in rhs.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let sign = f.signed(Fp::ONE, pd == 1 && pe == 1);
                for (&j, ej) in &e.coeffs {
                    out.add_term(j, &d.apply(ej)?)?;
                }
                for (&j, dj) in &d.coeffs {
                    out.add_term(j, &e.apply(dj)?.scale(f.neg(sign)))?;
                }
            }
        }
        Ok(out)
    }

    fn uniform_degree(
        &self,
        deg: impl Fn(usize, &crate::divided_power::Monomial) -> Result<i32>,
    ) -> Result<Option<i32>> {
        let mut found = None;
        for (&j, f) in &self.coeffs {
            for (mon, _) in f.terms() {
                let d = deg(j, mon)?;
                match found {
                    None => found = Some(d),
                    Some(prev) if prev != d => return Err(Error::NonHomogeneous),
                    _ => {}
                }
            }
        }
        Ok(found)
    }

    /// Standard degree: `f ∂_j` has degree `deg f - 1`. `None` for zero.
    pub fn std_degree(&self) -> Result<Option<i32>> {
        self.uniform_degree(|_, mon| Ok(mon.std_degree() - 1))
    }

    /// Principal degree (contact signatures): `f ∂_j` has degree `deg_p f - 1 - δ_{j,2n+1}`.
    pub fn principal_degree(&self) -> Result<Option<i32>> {
        if self.sig.context() != Context::Contact {
            return Err(Error::WrongContext("a contact signature"));
        }
        let last = self.sig.nvars();
        self.uniform_degree(|j, mon| Ok(self.sig.principal_degree(mon)? - 1 - i32::from(j == last)))
    }
}

impl fmt::Display for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (j, c)) in self.coeffs().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) d{j}")?;
        }
        Ok(())
    }
}
