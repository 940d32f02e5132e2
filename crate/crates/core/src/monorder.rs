//! Monomial orders induced by positive linear forms, initial terms, and the
//! staircase partition of the exponent lattice by a list of leaders.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact_arith::Field;
use crate::polyseries::{Exponent, Poly};

/// A linear form with positive integer coefficients.
///
/// Exponents compare by `(λ(α), α₁, …, αₙ)` lexicographically. The same
/// weights double as the grading in which truncated series are measured.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderSpec {
    weights: Vec<u64>,
}

impl OrderSpec {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.contains(&0) {
            return Err(Error::InvalidArgument(
                "order weights must be strictly positive".into(),
            ));
        }
        Ok(OrderSpec { weights })
    }

    /// Total degree, `λ = (1, …, 1)`.
    pub fn uniform(n: usize) -> Self {
        OrderSpec {
            weights: vec![1; n],
        }
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn nvars(&self) -> usize {
        self.weights.len()
    }

    pub fn is_uniform(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }

    pub fn weight(&self, e: &Exponent) -> u64 {
        debug_assert_eq!(e.len(), self.weights.len());
        e.iter()
            .zip(&self.weights)
            .map(|(&a, &w)| a as u64 * w)
            .sum()
    }

    pub fn max_weight(&self) -> u64 {
        self.weights.iter().copied().max().unwrap_or(1)
    }

    pub fn min_weight(&self) -> u64 {
        self.weights.iter().copied().min().unwrap_or(1)
    }

    /// Sort key realising the order: `(λ(α), α)` with `α` compared lexicographically.
    pub fn key(&self, e: &Exponent) -> (u64, Exponent) {
        (self.weight(e), e.clone())
    }

    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Result<Ordering> {
        for e in [a, b] {
            if e.len() != self.weights.len() {
                return Err(Error::Dimension {
                    expected: self.weights.len(),
                    got: e.len(),
                });
            }
        }
        Ok(self.cmp_unchecked(a, b))
    }

    pub(crate) fn cmp_unchecked(&self, a: &Exponent, b: &Exponent) -> Ordering {
        self.weight(a)
            .cmp(&self.weight(b))
            .then_with(|| a.cmp(b))
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Initial exponent and coefficient of a nonzero polynomial.
pub fn initial_exponent<F: Field>(f: &Poly<F>, order: &OrderSpec) -> Result<(Exponent, F)> {
    if f.nvars() != order.nvars() {
        return Err(Error::Dimension {
            expected: order.nvars(),
            got: f.nvars(),
        });
    }
    f.terms()
        .min_by(|(a, _), (b, _)| order.cmp_unchecked(a, b))
        .map(|(e, c)| (e.clone(), c.clone()))
        .ok_or(Error::EmptySupport)
}

/// The regions `Δ₀, Δ₁, …, Δₛ` cut out by leaders `exp(g₁), …, exp(gₛ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionPartition {
    leaders: Vec<Exponent>,
}

impl RegionPartition {
    pub fn new(leaders: Vec<Exponent>) -> Self {
        RegionPartition { leaders }
    }

    pub fn leaders(&self) -> &[Exponent] {
        &self.leaders
    }

    pub fn len(&self) -> usize {
        self.leaders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaders.is_empty()
    }

    /// Index `i` of the region containing `e`; 0 means `Δ₀`.
    pub fn classify(&self, e: &Exponent) -> usize {
        self.leaders
            .iter()
            .position(|l| l.divides(e))
            .map_or(0, |i| i + 1)
    }
}
