use std::fmt;

use crate::error::{Error, Result};
use crate::exact_arith::Field;
use crate::monorder::OrderSpec;

use super::{Exponent, Poly};

/// Truncation weight of a jet known exactly everywhere (a polynomial).
pub const EXACT: u64 = u64::MAX;

/// `(x)`-adic order of a series, possibly only bounded below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u64),
    /// Every known coefficient vanishes; the order is at least this value.
    AtLeast(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// A lower bound valid in every case.
    pub fn lower_bound(self) -> u64 {
        match self {
            Order::Finite(v) | Order::AtLeast(v) => v,
            Order::Infinite => u64::MAX,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::AtLeast(v) => write!(f, ">= {v}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A power series known exactly on `{α : λ(α) < trunc}`.
///
/// `λ` is the grading carried in `order`; the body never holds a term of
/// weight `≥ trunc`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<F> {
    body: Poly<F>,
    order: OrderSpec,
    trunc: u64,
}

impl<F: Field> Jet<F> {
    pub fn new(body: Poly<F>, order: OrderSpec, trunc: u64) -> Result<Self> {
        if body.nvars() != order.nvars() {
            return Err(Error::Dimension {
                expected: order.nvars(),
                got: body.nvars(),
            });
        }
        let body = if trunc == EXACT {
            body
        } else {
            body.filter(|e| order.weight(e) < trunc)
        };
        Ok(Jet { body, order, trunc })
    }

    pub fn exact(body: Poly<F>, order: OrderSpec) -> Result<Self> {
        Self::new(body, order, EXACT)
    }

    pub fn zero(order: OrderSpec, trunc: u64) -> Self {
        Jet {
            body: Poly::zero(order.nvars()),
            order,
            trunc,
        }
    }

    pub fn body(&self) -> &Poly<F> {
        &self.body
    }

    pub fn into_body(self) -> Poly<F> {
        self.body
    }

    pub fn order(&self) -> &OrderSpec {
        &self.order
    }

    pub fn trunc(&self) -> u64 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc == EXACT
    }

    pub fn nvars(&self) -> usize {
        self.body.nvars()
    }

    /// Known to vanish below the truncation.
    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn coeff(&self, e: &Exponent) -> F {
        self.body.coeff(e)
    }

    /// Same series with a lower (or equal) truncation weight.
    pub fn truncated(&self, w: u64) -> Self {
        let w = w.min(self.trunc);
        Jet {
            body: self.body.filter(|e| self.order.weight(e) < w),
            order: self.order.clone(),
            trunc: w,
        }
    }

    /// Lowest weight a term of the represented series can have.
    pub fn valuation(&self) -> u64 {
        self.body
            .terms()
            .map(|(e, _)| self.order.weight(e))
            .min()
            .unwrap_or(self.trunc)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::InvalidArgument(format!(
                "jets graded by different weights ({}) and ({})",
                self.order, other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let w = self.trunc.min(other.trunc);
        Self::new(self.body.add(&other.body), self.order.clone(), w)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let w = self.trunc.min(other.trunc);
        Self::new(self.body.sub(&other.body), self.order.clone(), w)
    }

    pub fn neg(&self) -> Self {
        Jet {
            body: self.body.neg(),
            order: self.order.clone(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Jet {
            body: self.body.scale(c),
            order: self.order.clone(),
            trunc: self.trunc,
        }
    }

    /// Product, exact below `min(W_f + v(g), W_g + v(f))`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let w = self
            .trunc
            .saturating_add(other.valuation())
            .min(other.trunc.saturating_add(self.valuation()));
        let order = &self.order;
        let body = self
            .body
            .mul_filtered(&other.body, |e| w == EXACT || order.weight(e) < w);
        Ok(Jet {
            body,
            order: self.order.clone(),
            trunc: w,
        })
    }

    /// Product truncated to at most `w`.
    pub fn mul_trunc(&self, other: &Self, w: u64) -> Result<Self> {
        self.check_compatible(other)?;
        let w = w
            .min(self.trunc.saturating_add(other.valuation()))
            .min(other.trunc.saturating_add(self.valuation()));
        let order = &self.order;
        let body = self
            .body
            .mul_filtered(&other.body, |e| w == EXACT || order.weight(e) < w);
        Ok(Jet {
            body,
            order: self.order.clone(),
            trunc: w,
        })
    }

    /// Substitute `x_i := s`, where `s` must have no constant term.
    pub fn substitute(&self, i: usize, s: &Self) -> Result<Self> {
        self.check_compatible(s)?;
        if i >= self.nvars() {
            return Err(Error::Dimension {
                expected: self.nvars(),
                got: i + 1,
            });
        }
        if s.trunc == 0 || !s.body.constant_coeff().is_zero() {
            return Err(Error::CompositionDomain);
        }
        let vs = s.valuation();
        let li = self.order.weights()[i];
        let mut w = EXACT;
        if self.trunc != EXACT {
            // unknown terms x^β of f, λ(β) ≥ W_f, with β_i = k
            let ks = [0, self.trunc / li, self.trunc.div_ceil(li)];
            for k in ks {
                let rest = self.trunc.saturating_sub(k.saturating_mul(li));
                w = w.min(rest.saturating_add(k.saturating_mul(vs)));
            }
        }
        if s.trunc != EXACT {
            // known terms of f hit by the unknown tail of s
            for (e, _) in self.body.terms() {
                let k = e[i] as u64;
                if k >= 1 {
                    let base = self.order.weight(e) - k * li;
                    let err = base
                        .saturating_add((k - 1).saturating_mul(vs))
                        .saturating_add(s.trunc);
                    w = w.min(err);
                }
            }
        }
        let order = &self.order;
        let keep = |e: &Exponent| w == EXACT || order.weight(e) < w;
        let coeffs = self.body.coefficients_in(i);
        let mut acc = Poly::zero(self.nvars());
        let mut power = Poly::one(self.nvars());
        for (k, c) in coeffs.iter().enumerate() {
            if k > 0 {
                power = power.mul_filtered(&s.body, keep);
            }
            if !c.is_zero() {
                acc = acc.add(&c.mul_filtered(&power, keep));
            }
        }
        Ok(Jet {
            body: acc,
            order: self.order.clone(),
            trunc: w,
        })
    }

    /// Multiplicative inverse below `min(w, W)`; needs a nonzero constant term.
    pub fn inverse(&self, w: u64) -> Result<Self> {
        let w = w.min(self.trunc);
        if w == EXACT {
            if self.body.is_constant() && !self.body.is_zero() {
                let c = self.body.constant_coeff().try_inv()?;
                return Self::exact(Poly::constant(self.nvars(), c), self.order.clone());
            }
            return Err(Error::Precision {
                requested: EXACT,
                available: self.trunc,
            });
        }
        let c0 = self.body.constant_coeff();
        if c0.is_zero() || w == 0 {
            return Err(Error::DivisionByZero);
        }
        let f = self.truncated(w);
        let one = Jet::new(Poly::one(self.nvars()), self.order.clone(), w)?;
        let mut u = Jet::new(Poly::constant(self.nvars(), c0.try_inv()?), self.order.clone(), w)?;
        loop {
            let err = one.sub(&f.mul_trunc(&u, w)?)?;
            if err.is_zero() {
                return Ok(u);
            }
            u = u.add(&u.mul_trunc(&err, w)?)?.truncated(w);
        }
    }

    /// The same series graded by another weight vector.
    ///
    /// The new truncation is the largest `W'` for which `μ(α) < W'` forces
    /// `λ(α) < W`.
    pub fn regrade(&self, new: &OrderSpec) -> Result<Self> {
        if new.nvars() != self.nvars() {
            return Err(Error::Dimension {
                expected: self.nvars(),
                got: new.nvars(),
            });
        }
        let w = if self.trunc == EXACT {
            EXACT
        } else {
            new.weights()
                .iter()
                .zip(self.order.weights())
                .map(|(&m, &l)| (self.trunc as u128 * m as u128).div_ceil(l as u128))
                .min()
                .map_or(EXACT, |v| v.min(EXACT as u128 - 1) as u64)
        };
        Self::new(self.body.clone(), new.clone(), w)
    }

    /// `(x)`-adic order (total degree), aware of the truncation.
    pub fn ord(&self) -> Order {
        let floor = if self.trunc == EXACT {
            None
        } else {
            Some(self.trunc.div_ceil(self.order.max_weight()))
        };
        match (self.body.ord(), floor) {
            (None, None) => Order::Infinite,
            (None, Some(fl)) => Order::AtLeast(fl),
            (Some(m), None) => Order::Finite(m as u64),
            (Some(m), Some(fl)) if (m as u64) <= fl => Order::Finite(m as u64),
            (Some(_), Some(fl)) => Order::AtLeast(fl),
        }
    }

    /// Restriction `f(0, …, 0, x_i, 0, …, 0)`.
    pub fn restrict_to_axis(&self, i: usize) -> Self {
        Jet {
            body: self
                .body
                .filter(|e| e.iter().enumerate().all(|(j, &a)| j == i || a == 0)),
            order: self.order.clone(),
            trunc: self.trunc,
        }
    }

    pub fn homogeneous_parts(&self) -> Vec<(u32, Poly<F>)> {
        self.body.homogeneous_parts()
    }
}

impl<F: Field> fmt::Display for Jet<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::text::default_names(self.nvars());
        write!(f, "{}", crate::text::format_poly(&self.body, &names))?;
        if self.trunc != EXACT {
            write!(f, " + O(w >= {})", self.trunc)?;
        }
        Ok(())
    }
}

/// `s` jets sharing one grading and truncation weight.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorJet<F> {
    components: Vec<Jet<F>>,
}

impl<F: Field> VectorJet<F> {
    pub fn new(components: Vec<Jet<F>>) -> Result<Self> {
        let first = components.first().ok_or(Error::EmptySupport)?;
        let (order, w) = (first.order.clone(), first.trunc);
        if components.iter().any(|c| c.order != order) {
            return Err(Error::InvalidArgument(
                "vector components graded differently".into(),
            ));
        }
        let w = components.iter().map(|c| c.trunc).min().unwrap_or(w);
        Ok(VectorJet {
            components: components.iter().map(|c| c.truncated(w)).collect(),
        })
    }

    /// A rank-one vector.
    pub fn scalar(j: Jet<F>) -> Self {
        VectorJet { components: vec![j] }
    }

    pub fn components(&self) -> &[Jet<F>] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn trunc(&self) -> u64 {
        self.components[0].trunc
    }

    pub fn order(&self) -> &OrderSpec {
        &self.components[0].order
    }

    pub fn nvars(&self) -> usize {
        self.components[0].nvars()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{rat, Rational};
    use crate::text::parse_poly;
    use proptest::prelude::*;

    fn j(s: &str, w: u64) -> Jet<Rational> {
        Jet::new(parse_poly(s, &["x", "y"]).unwrap(), OrderSpec::uniform(2), w).unwrap()
    }

    #[test]
    fn products_and_orders() {
        let p = j("x + y", 10).mul(&j("x - y", 10)).unwrap();
        assert_eq!(p.body(), j("x^2 - y^2", 20).body());
        assert_eq!(p.trunc(), 11);
        assert_eq!(j("x^3 - x^6", EXACT).ord(), Order::Finite(3));
        assert_eq!(Jet::<Rational>::zero(OrderSpec::uniform(2), EXACT).ord(), Order::Infinite);
        assert_eq!(j("0", 20).ord(), Order::AtLeast(20));
        assert_eq!(j("0", 20).ord().to_string(), ">= 20");
    }

    #[test]
    fn substitution() {
        let r = j("x*y", 10).substitute(1, &j("x^2", EXACT)).unwrap();
        assert_eq!(r.body(), j("x^3", 20).body());
        assert_eq!(r.trunc(), 10);
        assert_eq!(
            j("x*y", 10).substitute(1, &j("1 + x", 10)),
            Err(Error::CompositionDomain)
        );
    }

    #[test]
    fn geometric_inverse() {
        let u = j("1 - x", EXACT).inverse(6).unwrap();
        assert_eq!(u.body(), j("1 + x + x^2 + x^3 + x^4 + x^5", 6).body());
    }

    #[test]
    fn regrading_weights() {
        let f = j("x + y^3", 10);
        let g = f.regrade(&OrderSpec::new(vec![2, 1]).unwrap()).unwrap();
        // μ(α) < 10 ⇒ |α| < 10 since |α| ≤ μ(α)
        assert_eq!(g.trunc(), 10);
        let h = f.regrade(&OrderSpec::new(vec![1, 3]).unwrap()).unwrap();
        // with λ ≤ μ everywhere the weight bound is unchanged
        assert_eq!(h.trunc(), 10);
        let k = j("x", 10).regrade(&OrderSpec::new(vec![1, 1]).unwrap()).unwrap();
        assert_eq!(k, j("x", 10));
    }

    #[test]
    fn weighted_floor_of_zero_jet() {
        let z = Jet::<Rational>::zero(OrderSpec::new(vec![3, 2]).unwrap(), 20);
        assert_eq!(z.ord(), Order::AtLeast(7));
    }

    fn jet_strategy(w: u64) -> impl Strategy<Value = Jet<Rational>> {
        proptest::collection::vec(((0u32..5, 0u32..5), -3i64..4), 0..6).prop_map(move |ts| {
            let body = Poly::from_terms(
                2,
                ts.into_iter()
                    .map(|((a, b), c)| (Exponent::new(vec![a, b]), rat(c, 1))),
            );
            Jet::new(body, OrderSpec::new(vec![1, 2]).unwrap(), w).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_laws_below_common_weight(a in jet_strategy(9), b in jet_strategy(9), c in jet_strategy(9)) {
            let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            let w = ab_c.trunc().min(a_bc.trunc());
            prop_assert_eq!(ab_c.truncated(w), a_bc.truncated(w));
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            let w = lhs.trunc().min(rhs.trunc());
            prop_assert_eq!(lhs.truncated(w), rhs.truncated(w));
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn truncation_is_honest(a in jet_strategy(7), b in jet_strategy(7), tail in jet_strategy(EXACT)) {
            // perturb above the truncation; the product must not move below its weight
            let pert = |x: &Jet<Rational>| {
                let shifted = tail.body().mul_term(&Exponent::new(vec![7, 0]), &rat(1, 1));
                Jet::new(x.body().add(&shifted), x.order().clone(), EXACT).unwrap()
            };
            let p = a.mul(&b).unwrap();
            let q = pert(&a).mul(&pert(&b)).unwrap().truncated(p.trunc());
            prop_assert_eq!(p, q);
        }

        #[test]
        fn substitution_is_honest(a in jet_strategy(8), s in jet_strategy(6), tail in jet_strategy(EXACT)) {
            prop_assume!(s.body().constant_coeff() == rat(0, 1));
            let r = a.substitute(0, &s).unwrap();
            let bump = |x: &Jet<Rational>, at: u32| {
                let shifted = tail.body().mul_term(&Exponent::new(vec![at, 0]), &rat(1, 1));
                Jet::new(x.body().add(&shifted), x.order().clone(), EXACT).unwrap()
            };
            let exact = bump(&a, 8).substitute(0, &bump(&s, 6)).unwrap();
            prop_assert_eq!(r.clone(), exact.truncated(r.trunc()));
        }
    }
}
