//! Sparse multivariate polynomials and truncated power series.

mod jet;

pub use jet::{Jet, Order, VectorJet, EXACT};

use std::collections::BTreeMap;
use std::ops::Index;

use crate::exact_arith::Field;

/// Multi-index `α ∈ ℕⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        Exponent(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Exponent(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u32> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self − other` when `other ≤ self` componentwise.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    /// `self ≤ other` componentwise, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn with(&self, i: usize, value: u32) -> Exponent {
        let mut v = self.0.clone();
        v[i] = value;
        Exponent(v)
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }
}

impl Index<usize> for Exponent {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

/// Sparse polynomial: exponents mapped to nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F> {
    nvars: usize,
    terms: BTreeMap<Exponent, F>,
}

impl<F: Field> Poly<F> {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(Exponent::zeros(nvars), c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Exponent::unit(nvars, i), F::one())
    }

    pub fn monomial(e: Exponent, c: F) -> Self {
        let mut p = Self::zero(e.len());
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// Sum of the given terms; repeated exponents are combined.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, F)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.is_zero())
    }

    pub fn constant_coeff(&self) -> F {
        self.coeff(&Exponent::zeros(self.nvars))
    }

    pub fn coeff(&self, e: &Exponent) -> F {
        self.terms.get(e).cloned().unwrap_or_else(F::zero)
    }

    /// Terms in increasing lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &F)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Exponent, F)> {
        self.terms.into_iter()
    }

    pub fn add_term(&mut self, e: Exponent, c: F) {
        debug_assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly<F>) -> Poly<F> {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly<F>) -> Poly<F> {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly<F> {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn scale(&self, c: &F) -> Poly<F> {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        self.map_coeffs(|a| a.mul_ref(c))
    }

    pub fn mul_term(&self, e: &Exponent, c: &F) -> Poly<F> {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(a, b)| (a.add(e), b.mul_ref(c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly<F>) -> Poly<F> {
        self.mul_filtered(other, |_| true)
    }

    /// Product keeping only the exponents accepted by `keep`.
    pub fn mul_filtered(&self, other: &Poly<F>, keep: impl Fn(&Exponent) -> bool) -> Poly<F> {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.add(eb);
                if keep(&e) {
                    out.add_term(e, ca.mul_ref(cb));
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly<F> {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// Keep the terms whose exponent satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Exponent) -> bool) -> Poly<F> {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drop every term of total degree `≥ d`.
    pub fn truncate_degree(&self, d: u32) -> Poly<F> {
        self.filter(|e| e.total_degree() < d)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::total_degree).max()
    }

    /// Lowest total degree of a term; `None` for zero.
    pub fn ord(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::total_degree).min()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// `(d, part)` for every nonzero homogeneous part, in increasing `d`.
    pub fn homogeneous_parts(&self) -> Vec<(u32, Poly<F>)> {
        let mut parts: BTreeMap<u32, Poly<F>> = BTreeMap::new();
        for (e, c) in &self.terms {
            parts
                .entry(e.total_degree())
                .or_insert_with(|| Poly::zero(self.nvars))
                .terms
                .insert(e.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// Coefficients `c_k` with `self = Σ c_k x_i^k`; each `c_k` is free of `x_i`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Poly<F>> {
        let deg = match self.degree_in(i) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![Poly::zero(self.nvars); deg + 1];
        for (e, c) in &self.terms {
            out[e[i] as usize].terms.insert(e.with(i, 0), c.clone());
        }
        out
    }

    /// Inverse of [`Poly::coefficients_in`].
    pub fn from_coefficients_in(nvars: usize, i: usize, coeffs: &[Poly<F>]) -> Poly<F> {
        let mut out = Poly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                out.add_term(e.with(i, e[i] + k as u32), a.clone());
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Poly<F> {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                out.add_term(e.with(i, e[i] - 1), c.mul_ref(&F::from_i64(e[i] as i64)));
            }
        }
        out
    }

    /// Substitute `x_i := s`.
    pub fn substitute(&self, i: usize, s: &Poly<F>) -> Poly<F> {
        let coeffs = self.coefficients_in(i);
        let mut acc = Poly::zero(self.nvars);
        for c in coeffs.iter().rev() {
            acc = acc.mul(s).add(c);
        }
        acc
    }

    /// Specialise `x_i := v`, keeping the variable count.
    pub fn eval_var(&self, i: usize, v: &F) -> Poly<F> {
        self.substitute(i, &Poly::constant(self.nvars, v.clone()))
    }

    pub fn eval_all(&self, values: &[F]) -> F {
        debug_assert_eq!(values.len(), self.nvars);
        let mut sum = F::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, v) in e.iter().zip(values) {
                for _ in 0..*k {
                    t = t.mul_ref(v);
                }
            }
            sum = sum.add_ref(&t);
        }
        sum
    }

    /// Re-embed in `n` variables sending variable `i` to `map[i]`.
    pub fn remap(&self, n: usize, map: &[usize]) -> Poly<F> {
        debug_assert_eq!(map.len(), self.nvars);
        let mut out = Poly::zero(n);
        for (e, c) in &self.terms {
            let mut v = vec![0; n];
            for (i, &a) in e.iter().enumerate() {
                v[map[i]] += a;
            }
            out.add_term(Exponent(v), c.clone());
        }
        out
    }

    /// Pad with trailing variables up to `n` (no-op if already that wide).
    pub fn widen(&self, n: usize) -> Poly<F> {
        if n <= self.nvars {
            return self.clone();
        }
        let map: Vec<usize> = (0..self.nvars).collect();
        self.remap(n, &map)
    }

    pub fn swap_vars(&self, i: usize, j: usize) -> Poly<F> {
        let mut map: Vec<usize> = (0..self.nvars).collect();
        map.swap(i, j);
        self.remap(self.nvars, &map)
    }

    /// Largest term in the lexicographic order on exponents.
    pub fn lex_leading(&self) -> Option<(&Exponent, &F)> {
        self.terms.iter().next_back()
    }

    /// Make the lex-leading coefficient one.
    pub fn monic(&self) -> Poly<F> {
        match self.lex_leading() {
            Some((_, c)) => self.scale(&c.try_inv().expect("nonzero leading coefficient")),
            None => self.clone(),
        }
    }

    /// `self / d` when the division is exact.
    pub fn div_exact(&self, d: &Poly<F>) -> Option<Poly<F>> {
        let (de, dc) = d.lex_leading()?;
        let dinv = dc.try_inv().ok()?;
        let mut r = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((re, rc)) = r.lex_leading() {
            let e = re.checked_sub(de)?;
            let c = rc.mul_ref(&dinv);
            r = r.sub(&d.mul_term(&e, &c));
            q.add_term(e, c);
        }
        Some(q)
    }

    /// Pseudo-remainder of `self` by `d` in the variable `v`.
    pub fn prem(&self, d: &Poly<F>, v: usize) -> Poly<F> {
        let dd = match d.degree_in(v) {
            Some(k) => k,
            None => panic!("pseudo-remainder by zero"),
        };
        let dcs = d.coefficients_in(v);
        let lc = &dcs[dd as usize];
        let mut r = self.clone();
        while let Some(rd) = r.degree_in(v) {
            if rd < dd {
                break;
            }
            let lr = r.coefficients_in(v).swap_remove(rd as usize);
            let shift = Exponent::unit(self.nvars, v);
            let mut shifted = d.mul(&lr);
            for _ in 0..(rd - dd) {
                shifted = shifted.mul_term(&shift, &F::one());
            }
            r = r.mul(lc).sub(&shifted);
        }
        r
    }

    fn highest_var(&self) -> Option<usize> {
        (0..self.nvars)
            .rev()
            .find(|&i| self.terms.keys().any(|e| e[i] > 0))
    }

    /// Content with respect to `v`: gcd of the coefficients of powers of `x_v`.
    pub fn content_in(&self, v: usize) -> Poly<F> {
        let mut g = Poly::zero(self.nvars);
        for c in self.coefficients_in(v) {
            if !c.is_zero() {
                g = g.gcd(&c);
                if g.is_constant() {
                    break;
                }
            }
        }
        g
    }

    pub fn primitive_part_in(&self, v: usize) -> Poly<F> {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides").monic()
    }

    /// Monic greatest common divisor (lex-leading coefficient one); `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly<F>) -> Poly<F> {
        debug_assert_eq!(self.nvars, other.nvars);
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        let v = match (self.highest_var(), other.highest_var()) {
            (None, _) | (_, None) => return Poly::one(self.nvars),
            (Some(a), Some(b)) => a.max(b),
        };
        let ca = self.content_in(v);
        let cb = other.content_in(v);
        let c = ca.gcd(&cb);
        let mut a = self.div_exact(&ca).expect("content divides");
        let mut b = other.div_exact(&cb).expect("content divides");
        if a.degree_in(v) < b.degree_in(v) {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() && b.degree_in(v) != Some(0) {
            let r = a.prem(&b, v);
            a = b;
            b = r.primitive_part_in(v);
        }
        let g = if b.is_zero() {
            a.primitive_part_in(v)
        } else {
            Poly::one(self.nvars)
        };
        g.mul(&c).monic()
    }
}
