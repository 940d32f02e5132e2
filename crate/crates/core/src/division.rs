//! Grauert–Hironaka–Galligo division of truncated series, with Weierstrass
//! division and preparation as special cases.

use std::collections::BTreeMap;

use crate::algnum::regularity_order;
use crate::error::{Error, Result};
use crate::exact_arith::Field;
use crate::monorder::{initial_exponent, OrderSpec, RegionPartition};
use crate::polyseries::{Exponent, Jet, Poly, EXACT};

/// Output of [`ghg_divide`].
///
/// Below `trunc_weight` (in the grading of the inputs),
/// `f = Σ g_i q_i + r` with `Supp(q_i) + exp(g_i) ⊆ Δ_i` and `Supp(r) ⊆ Δ_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisionResult<F> {
    pub quotients: Vec<Jet<F>>,
    pub remainder: Jet<F>,
    pub partition: RegionPartition,
    pub trunc_weight: u64,
    /// Number of reduction steps performed.
    pub steps: u64,
}

/// Divide `f` by `gs` for the monomial order `order`, up to weight `w`.
///
/// Jets are measured in their own grading, which must be shared by all
/// inputs. Every term of each `g_i` must weigh at least as much as its
/// initial term in that grading; this holds automatically when the grading
/// is the order's own linear form.
pub fn ghg_divide<F: Field>(
    f: &Jet<F>,
    gs: &[Jet<F>],
    order: &OrderSpec,
    w: u64,
) -> Result<DivisionResult<F>> {
    if gs.is_empty() {
        return Err(Error::EmptyDivisors);
    }
    if w == EXACT {
        return Err(Error::InvalidArgument(
            "division needs a finite truncation weight".into(),
        ));
    }
    let n = f.nvars();
    if order.nvars() != n {
        return Err(Error::Dimension {
            expected: n,
            got: order.nvars(),
        });
    }
    let grading = f.order().clone();
    let mut leaders = Vec::with_capacity(gs.len());
    let mut inv_lc = Vec::with_capacity(gs.len());
    let mut lead_weight = Vec::with_capacity(gs.len());
    for g in gs {
        if g.nvars() != n {
            return Err(Error::Dimension {
                expected: n,
                got: g.nvars(),
            });
        }
        if g.order() != &grading {
            return Err(Error::InvalidArgument(
                "divisors graded differently from the dividend".into(),
            ));
        }
        let (e, c) = initial_exponent(g.body(), order)?;
        let we = grading.weight(&e);
        if g.trunc() <= we {
            return Err(Error::Precision {
                requested: we + 1,
                available: g.trunc(),
            });
        }
        if g.body().terms().any(|(a, _)| grading.weight(a) < we) {
            return Err(Error::InvalidArgument(
                "divisor has terms lighter than its initial term in the grading".into(),
            ));
        }
        inv_lc.push(c.try_inv().map_err(|_| Error::NonInvertibleLeading)?);
        leaders.push(e);
        lead_weight.push(we);
    }

    // f's unknown tail and each g_i's unknown tail bound the usable weight.
    let vf = f.valuation();
    let mut weff = w.min(f.trunc());
    for (g, &wi) in gs.iter().zip(&lead_weight) {
        weff = weff.min(vf.saturating_add(g.trunc()).saturating_sub(wi));
    }

    let partition = RegionPartition::new(leaders);
    let mut work: BTreeMap<(u64, Exponent), F> = BTreeMap::new();
    for (e, c) in f.body().terms() {
        if grading.weight(e) < weff {
            work.insert(order.key(e), c.clone());
        }
    }
    let mut quotients: Vec<Poly<F>> = vec![Poly::zero(n); gs.len()];
    let mut remainder = Poly::zero(n);
    let mut steps = 0u64;

    while let Some(((_, e), c)) = work.pop_first() {
        let i = partition.classify(&e);
        if i == 0 {
            remainder.add_term(e, c);
            continue;
        }
        steps += 1;
        let lead = &partition.leaders()[i - 1];
        let m = e.checked_sub(lead).expect("classified into the leader's cone");
        let qc = c.mul_ref(&inv_lc[i - 1]);
        for (a, b) in gs[i - 1].body().terms() {
            if a == lead {
                continue;
            }
            let t = a.add(&m);
            if grading.weight(&t) >= weff {
                continue;
            }
            let delta = -qc.mul_ref(b);
            match work.entry(order.key(&t)) {
                std::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(delta);
                }
                std::collections::btree_map::Entry::Occupied(mut o) => {
                    let s = o.get().add_ref(&delta);
                    if s.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = s;
                    }
                }
            }
        }
        quotients[i - 1].add_term(m, qc);
    }

    let quotients = quotients
        .into_iter()
        .zip(&lead_weight)
        .map(|(q, &wi)| Jet::new(q, grading.clone(), weff.saturating_sub(wi)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DivisionResult {
        quotients,
        remainder: Jet::new(remainder, grading, weff)?,
        partition,
        trunc_weight: weff,
        steps,
    })
}

/// Grading `(d, …, d, 1)` (1 on the axis) used for Weierstrass problems.
///
/// Under it, the reductions by an `x_axis`-regular series of order `d` never
/// lower the weight, so truncation stays exact.
pub fn weierstrass_grading(n: usize, axis: usize, d: u32) -> OrderSpec {
    let d = d.max(1) as u64;
    let w = (0..n).map(|i| if i == axis { 1 } else { d }).collect();
    OrderSpec::new(w).expect("positive weights")
}

/// Order `(W+1, …, W+1, 1)` making `x_axis^d` the initial term of a regular series.
pub fn weierstrass_order(n: usize, axis: usize, w: u64) -> OrderSpec {
    let big = w.saturating_add(1);
    let ws = (0..n).map(|i| if i == axis { 1 } else { big }).collect();
    OrderSpec::new(ws).expect("positive weights")
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassDivision<F> {
    pub quotient: Jet<F>,
    /// Polynomial in `x_axis` of degree `< d`.
    pub remainder: Jet<F>,
    /// `r_0, …, r_{d−1}` with `r = Σ r_k x_axis^k`; each is free of `x_axis`.
    pub coefficients: Vec<Jet<F>>,
    pub degree: u32,
    pub trunc_weight: u64,
}

fn regular_degree<F: Field>(f: &Jet<F>, axis: usize) -> Result<u32> {
    if axis >= f.nvars() {
        return Err(Error::Dimension {
            expected: f.nvars(),
            got: axis + 1,
        });
    }
    regularity_order(f, axis).ok_or(Error::NotRegular { axis })
}

/// Divide `g` by the `x_axis`-regular series `f`: `g = f q + r`.
///
/// Outputs are graded by [`weierstrass_grading`] and exact below the returned
/// truncation weight, which is at most `w`.
pub fn weierstrass_divide<F: Field>(
    g: &Jet<F>,
    f: &Jet<F>,
    axis: usize,
    w: u64,
) -> Result<WeierstrassDivision<F>> {
    let d = regular_degree(f, axis)?;
    let n = f.nvars();
    let grading = weierstrass_grading(n, axis, d);
    let fg = f.regrade(&grading)?;
    let gg = g.regrade(&grading)?;
    let res = ghg_divide(&gg, &[fg], &weierstrass_order(n, axis, w), w)?;
    let wr = res.trunc_weight;
    let coefficients = res
        .remainder
        .body()
        .coefficients_in(axis)
        .into_iter()
        .chain(std::iter::repeat(Poly::zero(n)))
        .take(d as usize)
        .enumerate()
        .map(|(k, c)| Jet::new(c, grading.clone(), wr.saturating_sub(k as u64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(WeierstrassDivision {
        quotient: res.quotients.into_iter().next().expect("one divisor"),
        remainder: res.remainder,
        coefficients,
        degree: d,
        trunc_weight: wr,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeierstrassPreparation<F> {
    pub unit: Jet<F>,
    /// Monic in `x_axis` of degree `d`, lower coefficients of positive order.
    pub wpoly: Jet<F>,
    pub degree: u32,
}

/// Factor `f = u · P` with `u` a unit and `P` a Weierstrass polynomial in `x_axis`.
pub fn weierstrass_prepare<F: Field>(
    f: &Jet<F>,
    axis: usize,
    w: u64,
) -> Result<WeierstrassPreparation<F>> {
    let d = regular_degree(f, axis)?;
    let n = f.nvars();
    let grading = weierstrass_grading(n, axis, d);
    let xd = Jet::exact(
        Poly::monomial(Exponent::zeros(n).with(axis, d), F::one()),
        grading.clone(),
    )?;
    let div = weierstrass_divide(&xd, f, axis, w)?;
    let wr = div.trunc_weight;
    let wpoly = xd.sub(&div.remainder)?.truncated(wr);
    let unit = div.quotient.inverse(wr).map_err(|e| match e {
        Error::DivisionByZero => Error::Internal("Weierstrass quotient is not a unit".into()),
        other => other,
    })?;
    let unit = unit.truncated(wr);
    let fg = f.regrade(&grading)?.truncated(wr);
    let check = unit.mul_trunc(&wpoly, wr)?;
    let diff = fg.sub(&check)?;
    if !diff.is_zero() {
        return Err(Error::Internal(
            "prepared factors do not reproduce the input".into(),
        ));
    }
    Ok(WeierstrassPreparation {
        unit,
        wpoly,
        degree: d,
    })
}
