//! Truncated linear algebra over the local ring `k[[x]]`.
//!
//! Everything here reduces to row echelon forms over the coefficient field.
//! A submodule `N ⊆ R^s` is represented by the span of the rows
//! `x^β·g_i mod (x)^D`, and membership in `N + (x)^c` for `c ≤ D` is read off
//! from a canonical normal form.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::b_hermann;
use crate::error::{Error, Result};
use crate::exact_arith::{Field, Rational};
use crate::monorder::OrderSpec;
use crate::polyseries::{Exponent, Jet, Order, Poly, VectorJet, EXACT};

/// Column of the monomial basis: total degree, component, exponent.
///
/// The derived ordering is degree first, which is what makes the normal
/// form detect `(x)^c`-membership.
type Col = (u32, usize, Exponent);

/// Generator index and multiplier exponent of a row `x^β·g_i`.
type Tag = (usize, Exponent);

#[derive(Clone, Debug)]
struct Row<F> {
    entries: BTreeMap<Col, F>,
    combo: BTreeMap<Tag, F>,
}

/// `target -= c·src`, dropping cancelled entries.
fn sub_scaled<K: Ord + Clone, F: Field>(
    target: &mut BTreeMap<K, F>,
    c: &F,
    src: &BTreeMap<K, F>,
    skip_first: bool,
) {
    for (k, v) in src.iter().skip(usize::from(skip_first)) {
        let d = c.mul_ref(v);
        match target.get_mut(k) {
            Some(t) => {
                *t = t.sub_ref(&d);
                if t.is_zero() {
                    target.remove(k);
                }
            }
            None => {
                target.insert(k.clone(), -d);
            }
        }
    }
}

/// Semi-echelon form: every row is monic at its minimal column and no two
/// rows share that column.
#[derive(Clone, Debug)]
struct Echelon<F> {
    rows: Vec<Row<F>>,
    pivots: HashMap<Col, usize>,
    track: bool,
}

impl<F: Field> Echelon<F> {
    fn new(track: bool) -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: HashMap::new(),
            track,
        }
    }

    /// Returns whether the row enlarged the span.
    fn insert(&mut self, mut entries: BTreeMap<Col, F>, mut combo: BTreeMap<Tag, F>) -> Result<bool> {
        loop {
            let Some((col, lead)) = entries.first_key_value() else {
                return Ok(false);
            };
            match self.pivots.get(col) {
                Some(&r) => {
                    let c = lead.clone();
                    let row = &self.rows[r];
                    entries.pop_first();
                    sub_scaled(&mut entries, &c, &row.entries, true);
                    if self.track {
                        sub_scaled(&mut combo, &c, &row.combo, false);
                    }
                }
                None => {
                    let inv = lead.try_inv()?;
                    let col = col.clone();
                    for v in entries.values_mut() {
                        *v = v.mul_ref(&inv);
                    }
                    if self.track {
                        for v in combo.values_mut() {
                            *v = v.mul_ref(&inv);
                        }
                    }
                    self.pivots.insert(col, self.rows.len());
                    self.rows.push(Row { entries, combo });
                    return Ok(true);
                }
            }
        }
    }

    /// Canonical normal form: the unique representative supported on
    /// non-pivot columns, together with the combination that was removed.
    fn reduce(&self, mut entries: BTreeMap<Col, F>) -> (BTreeMap<Col, F>, BTreeMap<Tag, F>) {
        let mut nf = BTreeMap::new();
        let mut combo = BTreeMap::new();
        while let Some((col, c)) = entries.pop_first() {
            match self.pivots.get(&col) {
                Some(&r) => {
                    let row = &self.rows[r];
                    sub_scaled(&mut entries, &c, &row.entries, true);
                    if self.track {
                        sub_scaled(&mut combo, &c.clone().neg(), &row.combo, false);
                    }
                }
                None => {
                    nf.insert(col, c);
                }
            }
        }
        (nf, combo)
    }

    fn pivot_degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.pivots.keys().map(|c| c.0)
    }
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Exponents of total degree `d` in `n` variables, ascending.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Exponent> {
    fn go(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(Exponent::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in 0..=d {
            prefix.push(a);
            go(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Exponent::new(Vec::new()));
        }
        return out;
    }
    go(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Total degree below which every monomial of `j` is known.
fn exact_degree<F: Field>(j: &Jet<F>) -> u64 {
    if j.trunc() == EXACT {
        return EXACT;
    }
    j.trunc().div_ceil(j.order().max_weight())
}

fn vector_entries<F: Field>(comps: &[&Poly<F>], shift: &Exponent, below: u32) -> BTreeMap<Col, F> {
    let mut out = BTreeMap::new();
    for (j, p) in comps.iter().enumerate() {
        for (e, c) in p.terms() {
            let e = e.add(shift);
            let d = e.total_degree();
            if d < below {
                out.insert((d, j, e), c.clone());
            }
        }
    }
    out
}

fn certificate<F: Field>(combo: &BTreeMap<Tag, F>, ngens: usize, nvars: usize) -> Vec<Poly<F>> {
    let mut out = vec![Poly::zero(nvars); ngens];
    for ((i, e), c) in combo {
        out[*i].add_term(e.clone(), c.clone());
    }
    out
}

/// Answer of [`TruncatedSubmodule::membership_mod`].
#[derive(Clone, Debug, PartialEq)]
pub enum Membership<F> {
    /// `f ≡ Σ a_i g_i mod (x)^c`; the `a_i` are exact below degree `c`.
    Member { coefficients: Vec<Jet<F>> },
    /// The normal form keeps a term of this degree `< c`.
    NonMember { obstruction_degree: u32 },
}

impl<F> Membership<F> {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member { .. })
    }
}

/// Submodule of `R^s` known modulo `(x)^D`.
#[derive(Clone, Debug)]
pub struct TruncatedSubmodule<F> {
    nvars: usize,
    rank: usize,
    generators: Vec<VectorJet<F>>,
    trunc_degree: u32,
    basis: Echelon<F>,
}

impl<F: Field> TruncatedSubmodule<F> {
    /// Row-reduce `{x^β·g_i mod (x)^D}`. Each generator must be exact below
    /// total degree `D`.
    pub fn new(
        nvars: usize,
        rank: usize,
        generators: Vec<VectorJet<F>>,
        trunc_degree: u32,
    ) -> Result<Self> {
        for g in &generators {
            if g.nvars() != nvars {
                return Err(Error::Dimension { expected: nvars, got: g.nvars() });
            }
            if g.rank() != rank {
                return Err(Error::Dimension { expected: rank, got: g.rank() });
            }
            for c in g.components() {
                let avail = exact_degree(c);
                if avail < u64::from(trunc_degree) {
                    return Err(Error::Precision {
                        requested: u64::from(trunc_degree),
                        available: avail,
                    });
                }
            }
        }
        let mut basis = Echelon::new(true);
        for b in 0..trunc_degree {
            for beta in monomials_of_degree(nvars, b) {
                for (i, g) in generators.iter().enumerate() {
                    let comps: Vec<&Poly<F>> = g.components().iter().map(|c| c.body()).collect();
                    let entries = vector_entries(&comps, &beta, trunc_degree);
                    let combo = BTreeMap::from([((i, beta.clone()), F::one())]);
                    basis.insert(entries, combo)?;
                }
            }
        }
        Ok(TruncatedSubmodule {
            nvars,
            rank,
            generators,
            trunc_degree,
            basis,
        })
    }

    /// Ideal of `R` generated by scalar jets.
    pub fn ideal(nvars: usize, generators: Vec<Jet<F>>, trunc_degree: u32) -> Result<Self> {
        let gens = generators.into_iter().map(VectorJet::scalar).collect();
        Self::new(nvars, 1, gens, trunc_degree)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[VectorJet<F>] {
        &self.generators
    }

    pub fn trunc_degree(&self) -> u32 {
        self.trunc_degree
    }

    /// Dimension of the image of `N` in `R^s/(x)^D`.
    pub fn basis_len(&self) -> usize {
        self.basis.rows.len()
    }

    fn query_entries(&self, f: &VectorJet<F>) -> Result<BTreeMap<Col, F>> {
        if f.nvars() != self.nvars {
            return Err(Error::Dimension { expected: self.nvars, got: f.nvars() });
        }
        if f.rank() != self.rank {
            return Err(Error::Dimension { expected: self.rank, got: f.rank() });
        }
        for c in f.components() {
            let avail = exact_degree(c);
            if avail < u64::from(self.trunc_degree) {
                return Err(Error::Precision {
                    requested: u64::from(self.trunc_degree),
                    available: avail,
                });
            }
        }
        let comps: Vec<&Poly<F>> = f.components().iter().map(|c| c.body()).collect();
        Ok(vector_entries(&comps, &Exponent::zeros(self.nvars), self.trunc_degree))
    }

    /// Canonical representative of `f` modulo `N + (x)^D`, one polynomial per
    /// component.
    pub fn normal_form(&self, f: &VectorJet<F>) -> Result<Vec<Poly<F>>> {
        let (nf, _) = self.basis.reduce(self.query_entries(f)?);
        let mut out = vec![Poly::zero(self.nvars); self.rank];
        for ((_, j, e), c) in nf {
            out[j].add_term(e, c);
        }
        Ok(out)
    }

    /// Decide `f ∈ N + (x)^c` for `c ≤ D`.
    pub fn membership_mod(&self, f: &VectorJet<F>, c: u32) -> Result<Membership<F>> {
        if c > self.trunc_degree {
            return Err(Error::Precision {
                requested: u64::from(c),
                available: u64::from(self.trunc_degree),
            });
        }
        let (nf, combo) = self.basis.reduce(self.query_entries(f)?);
        if let Some(((d, _, _), _)) = nf.first_key_value() {
            if *d < c {
                return Ok(Membership::NonMember { obstruction_degree: *d });
            }
        }
        let grading = OrderSpec::uniform(self.nvars);
        let coefficients = certificate(&combo, self.generators.len(), self.nvars)
            .into_iter()
            .map(|a| Jet::new(a, grading.clone(), u64::from(c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Membership::Member { coefficients })
    }

    /// `sup{c : f ∈ N + (x)^c}`, exact when below `D`.
    pub fn ord_quotient(&self, f: &VectorJet<F>) -> Result<Order> {
        let (nf, _) = self.basis.reduce(self.query_entries(f)?);
        Ok(match nf.first_key_value() {
            Some(((d, _, _), _)) => Order::Finite(u64::from(*d)),
            None => Order::AtLeast(u64::from(self.trunc_degree)),
        })
    }

    /// Same value as [`Self::ord_quotient`], found by binary search over
    /// [`Self::membership_mod`].
    pub fn ord_by_bisection(&self, f: &VectorJet<F>) -> Result<Order> {
        let (mut lo, mut hi) = (0u32, self.trunc_degree);
        while lo < hi {
            let mid = lo + (hi - lo).div_ceil(2);
            if self.membership_mod(f, mid)?.is_member() {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        Ok(if lo == self.trunc_degree {
            Order::AtLeast(u64::from(lo))
        } else {
            Order::Finite(u64::from(lo))
        })
    }

    pub fn ord_of_poly(&self, p: &Poly<F>) -> Result<Order> {
        let j = Jet::exact(p.clone(), OrderSpec::uniform(self.nvars))?;
        self.ord_quotient(&VectorJet::scalar(j))
    }

    /// `Ψ(d) = dim R^s/(N + (x)^d)` for `d ≤ D`.
    pub fn psi(&self, d: u32) -> Result<u64> {
        if d > self.trunc_degree {
            return Err(Error::Precision {
                requested: u64::from(d),
                available: u64::from(self.trunc_degree),
            });
        }
        let total = self.rank as u64 * binomial(u64::from(d) + self.nvars as u64 - 1, self.nvars as u64);
        let inside = self.basis.pivot_degrees().filter(|&p| p < d).count() as u64;
        Ok(total - inside)
    }
}

/// Sampled Hilbert–Samuel function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSProfile {
    pub values: Vec<(u32, u64)>,
    /// Smallest `k` whose `k`-th forward differences are constant on the
    /// last three available entries.
    pub fitted_degree: Option<usize>,
}

impl HSProfile {
    pub fn from_values(values: Vec<(u32, u64)>) -> Self {
        let fitted_degree = fit_degree(&values.iter().map(|v| i128::from(v.1)).collect::<Vec<_>>());
        HSProfile { values, fitted_degree }
    }

    /// `k`-th forward differences of the values.
    pub fn differences(&self, k: usize) -> Vec<i128> {
        let mut s: Vec<i128> = self.values.iter().map(|v| i128::from(v.1)).collect();
        for _ in 0..k {
            s = s.windows(2).map(|w| w[1] - w[0]).collect();
        }
        s
    }
}

fn fit_degree(values: &[i128]) -> Option<usize> {
    let mut s = values.to_vec();
    let mut k = 0;
    while s.len() >= 3 {
        let tail = &s[s.len() - 3..];
        if tail.iter().all(|&v| v == tail[0]) {
            return Some(k);
        }
        s = s.windows(2).map(|w| w[1] - w[0]).collect();
        k += 1;
    }
    None
}

/// `Ψ(d)` for the ideal generated by `gens` in `nvars` variables.
pub fn hilbert_samuel_psi<F: Field>(nvars: usize, gens: &[Jet<F>], d: u32) -> Result<u64> {
    TruncatedSubmodule::ideal(nvars, gens.to_vec(), d)?.psi(d)
}

pub fn psi_profile<F: Field>(nvars: usize, gens: &[Jet<F>], dmax: u32) -> Result<HSProfile> {
    let m = TruncatedSubmodule::ideal(nvars, gens.to_vec(), dmax)?;
    let values = (0..=dmax).map(|d| Ok((d, m.psi(d)?))).collect::<Result<Vec<_>>>()?;
    Ok(HSProfile::from_values(values))
}

/// `Φ(d)` for `d = 0..=dmax`: `C(d+n, n)` minus the rank of the products
/// `x^β·g_i` of degree `≤ d`.
///
/// Only multiples of single generators are collected, so the count is the
/// true `dim k[x]_d/J_d` when `J` is homogeneous or monomial.
pub fn phi_profile<F: Field>(nvars: usize, gens: &[Poly<F>], dmax: u32) -> Result<HSProfile> {
    let mut ech = Echelon::new(false);
    let gens: Vec<&Poly<F>> = gens.iter().filter(|g| !g.is_zero()).collect();
    for g in &gens {
        if g.nvars() != nvars {
            return Err(Error::Dimension { expected: nvars, got: g.nvars() });
        }
    }
    let mut values = Vec::new();
    for d in 0..=dmax {
        for g in &gens {
            let dg = g.total_degree().unwrap_or(0);
            if dg > d {
                continue;
            }
            for beta in monomials_of_degree(nvars, d - dg) {
                let entries = vector_entries(&[*g], &beta, u32::MAX);
                ech.insert(entries, BTreeMap::new())?;
            }
        }
        let total = binomial(u64::from(d) + nvars as u64, nvars as u64);
        values.push((d, total - ech.rows.len() as u64));
    }
    Ok(HSProfile::from_values(values))
}

pub fn hilbert_samuel_phi<F: Field>(nvars: usize, gens: &[Poly<F>], d: u32) -> Result<u64> {
    Ok(phi_profile(nvars, gens, d)?.values[d as usize].1)
}

/// Largest number of unknowns [`hermann_solve`] accepts.
pub const SOLVE_LIMIT: u64 = 200_000;

/// Coefficient degree cap from the membership degree bound, lowered to
/// `user_cap` when given.
pub fn hermann_cap<F: Field>(f: &[Poly<F>], gens: &[Vec<Poly<F>>], user_cap: Option<u64>) -> Result<u64> {
    let nvars = f.first().map_or(0, |p| p.nvars()) as u64;
    let degf = f.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0);
    let d = gens
        .iter()
        .flatten()
        .filter_map(|p| p.total_degree())
        .max()
        .unwrap_or(0);
    let bound = b_hermann(nvars, gens.len() as u64, u64::from(d) + 1, u64::from(degf))?;
    let bound = bound.to_u64().unwrap_or(u64::MAX);
    Ok(user_cap.map_or(bound, |c| c.min(bound)))
}

/// Solve `f = Σ a_i·gens_i` with `deg a_i ≤ cap` exactly. `None` means no
/// solution within the cap.
pub fn hermann_solve<F: Field>(
    f: &[Poly<F>],
    gens: &[Vec<Poly<F>>],
    cap: u64,
) -> Result<Option<Vec<Poly<F>>>> {
    let rank = f.len();
    if rank == 0 {
        return Err(Error::InvalidArgument("empty target vector".into()));
    }
    let nvars = f[0].nvars();
    for v in gens.iter().chain([&f.to_vec()]) {
        if v.len() != rank {
            return Err(Error::Dimension { expected: rank, got: v.len() });
        }
        if let Some(p) = v.iter().find(|p| p.nvars() != nvars) {
            return Err(Error::Dimension { expected: nvars, got: p.nvars() });
        }
    }
    let per_gen = binomial(cap.saturating_add(nvars as u64), nvars as u64);
    let unknowns = per_gen.saturating_mul(gens.len() as u64);
    if unknowns > SOLVE_LIMIT || cap > u64::from(u32::MAX) {
        return Err(Error::Resource(format!(
            "{unknowns} unknowns exceed the solver limit of {SOLVE_LIMIT}"
        )));
    }
    let mut ech = Echelon::new(true);
    for b in 0..=cap as u32 {
        for beta in monomials_of_degree(nvars, b) {
            for (i, g) in gens.iter().enumerate() {
                let comps: Vec<&Poly<F>> = g.iter().collect();
                let combo = BTreeMap::from([((i, beta.clone()), F::one())]);
                ech.insert(vector_entries(&comps, &beta, u32::MAX), combo)?;
            }
        }
    }
    let comps: Vec<&Poly<F>> = f.iter().collect();
    let (nf, combo) = ech.reduce(vector_entries(&comps, &Exponent::zeros(nvars), u32::MAX));
    if !nf.is_empty() {
        return Ok(None);
    }
    let a = certificate(&combo, gens.len(), nvars);
    for (j, target) in f.iter().enumerate() {
        let mut acc = Poly::zero(nvars);
        for (ai, g) in a.iter().zip(gens) {
            acc = acc.add(&ai.mul(&g[j]));
        }
        if &acc != target {
            return Err(Error::Internal("membership certificate does not reconstruct".into()));
        }
    }
    Ok(Some(a))
}

/// Random candidates for [`zero_estimate_scan`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanSampler {
    pub seed: u64,
    pub samples: usize,
    /// Coefficients are uniform in `-coeff_bound..=coeff_bound`.
    pub coeff_bound: i64,
}

impl Default for ScanSampler {
    fn default() -> Self {
        ScanSampler {
            seed: 0,
            samples: 32,
            coeff_bound: 3,
        }
    }
}

impl ScanSampler {
    /// Polynomials without constant term, of a degree drawn from
    /// `1..=deg_cap`, with every monomial of degree `1..=deg` sampled.
    pub fn draw<F: Field>(&self, nvars: usize, deg_cap: u32) -> Vec<Poly<F>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.samples)
            .map(|_| {
                let deg = rng.gen_range(1..=deg_cap.max(1));
                let mut p = Poly::zero(nvars);
                for d in 1..=deg {
                    for e in monomials_of_degree(nvars, d) {
                        let c = rng.gen_range(-self.coeff_bound..=self.coeff_bound);
                        p.add_term(e, F::from_i64(c));
                    }
                }
                p
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanEntry<F> {
    pub poly: Poly<F>,
    pub degree: u32,
    pub ord: Order,
}

/// Result of [`zero_estimate_scan`].
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroEstimateReport<F> {
    pub seed: u64,
    pub checked: usize,
    /// Largest `ord/deg` over candidates with a finite order.
    pub max_ratio: Option<Rational>,
    pub witness: Option<ScanEntry<F>>,
    /// Candidates whose order reached `D`: members of `N + (x)^D`, possibly
    /// of `N` itself.
    pub saturated: Vec<Poly<F>>,
    pub entries: Vec<ScanEntry<F>>,
}

/// Measure `ord_{R/N}(p)/deg(p)` over all monomials of degree
/// `1..=deg_cap`, the sampled polynomials and `extra`.
pub fn zero_estimate_scan<F: Field>(
    module: &TruncatedSubmodule<F>,
    deg_cap: u32,
    sampler: &ScanSampler,
    extra: &[Poly<F>],
) -> Result<ZeroEstimateReport<F>> {
    if module.rank() != 1 {
        return Err(Error::InvalidArgument("zero-estimate scans need an ideal".into()));
    }
    if deg_cap >= module.trunc_degree() {
        return Err(Error::Precision {
            requested: u64::from(deg_cap) + 1,
            available: u64::from(module.trunc_degree()),
        });
    }
    let n = module.nvars();
    let mut candidates: Vec<Poly<F>> = (1..=deg_cap)
        .flat_map(|d| monomials_of_degree(n, d))
        .map(|e| Poly::monomial(e, F::one()))
        .collect();
    candidates.extend(sampler.draw::<F>(n, deg_cap));
    candidates.extend(extra.iter().filter(|p| !p.is_zero()).cloned());

    let entries = candidates
        .into_par_iter()
        .map(|p| {
            let ord = module.ord_of_poly(&p)?;
            let degree = p.total_degree().unwrap_or(0);
            Ok(ScanEntry { poly: p, degree, ord })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut max_ratio: Option<Rational> = None;
    let mut witness = None;
    let mut saturated = Vec::new();
    for e in &entries {
        match e.ord.finite() {
            Some(o) if e.degree > 0 => {
                let r = Rational::new(o.into(), u64::from(e.degree).into());
                if max_ratio.as_ref().is_none_or(|m| r > *m) {
                    max_ratio = Some(r);
                    witness = Some(e.clone());
                }
            }
            Some(_) => {}
            None => saturated.push(e.poly.clone()),
        }
    }
    Ok(ZeroEstimateReport {
        seed: sampler.seed,
        checked: entries.len(),
        max_ratio,
        witness,
        saturated,
        entries,
    })
}

/// Partial sum `Σ_{k=1}^{terms} z^k/k` of `−log(1−z)` in the variable `axis`.
pub fn log_series(nvars: usize, axis: usize, terms: u32) -> Poly<Rational> {
    Poly::from_terms(
        nvars,
        (1..=terms).map(|k| (Exponent::unit(nvars, axis).with(axis, k), Rational::new(1.into(), k.into()))),
    )
}

/// Generators `x², y², xy, x + f̂(z)·y` in `k[[x, y, z]]`, where `f̂` is the
/// logarithmic series cut below `series_order`.
pub fn log_perturbed_generators(series_order: u32) -> Vec<Poly<Rational>> {
    let v = |i| Poly::<Rational>::var(3, i);
    let (x, y) = (v(0), v(1));
    let f = log_series(3, 2, series_order.saturating_sub(1));
    vec![x.mul(&x), y.mul(&y), x.mul(&y), x.add(&f.mul(&y))]
}

/// The quotient `k[[x,y,z]]/Q′` of the log-perturbed ideal above, known
/// modulo `(x,y,z)^D`.
pub fn log_perturbed_module(series_order: u32, trunc_degree: u32) -> Result<TruncatedSubmodule<Rational>> {
    let g = OrderSpec::uniform(3);
    let gens = log_perturbed_generators(series_order)
        .into_iter()
        .map(|p| Jet::exact(p, g.clone()))
        .collect::<Result<Vec<_>>>()?;
    TruncatedSubmodule::ideal(3, gens, trunc_degree)
}

/// The `d×d` matrix with entries `1/(d+i−j)`: first row `1/d, …, 1`.
pub fn hilbert_matrix(d: usize) -> Vec<Vec<Rational>> {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| Rational::new(1.into(), ((d + i - j) as i64).into()))
                .collect()
        })
        .collect()
}

/// Determinant by Gaussian elimination with exact pivots.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::from_integer(1.into());
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        det *= &m[k][k];
        let inv = m[k][k].recip();
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] * &inv;
            for j in k..n {
                let t = &factor * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Exact determinant of [`hilbert_matrix`] and whether it is nonzero.
pub fn hilbert_matrix_check(d: usize) -> Result<(Rational, bool)> {
    if d == 0 {
        return Err(Error::InvalidArgument("matrix size must be positive".into()));
    }
    let det = determinant(hilbert_matrix(d));
    let ok = !det.is_zero();
    Ok((det, ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::rat;
    use crate::text::parse_poly;
    use proptest::prelude::*;

    fn q(s: &str, names: &[&str]) -> Poly<Rational> {
        parse_poly(s, names).unwrap()
    }

    fn ideal(gens: &[&str], names: &[&str], d: u32) -> TruncatedSubmodule<Rational> {
        let g = OrderSpec::uniform(names.len());
        let js = gens.iter().map(|s| Jet::exact(q(s, names), g.clone()).unwrap()).collect();
        TruncatedSubmodule::ideal(names.len(), js, d).unwrap()
    }

    fn vj(s: &str, names: &[&str]) -> VectorJet<Rational> {
        VectorJet::scalar(Jet::exact(q(s, names), OrderSpec::uniform(names.len())).unwrap())
    }

    const XY: [&str; 2] = ["x", "y"];

    #[test]
    fn generator_is_member_with_unit_certificate() {
        let m = ideal(&["x - y^2", "x*y + y^3"], &XY, 6);
        match m.membership_mod(&vj("x - y^2", &XY), 0).unwrap() {
            Membership::Member { coefficients } => {
                // c = 0 asks nothing; the certificate is still a valid one
                assert_eq!(coefficients.len(), 2);
            }
            other => panic!("{other:?}"),
        }
        match m.membership_mod(&vj("x - y^2", &XY), 6).unwrap() {
            Membership::Member { coefficients } => {
                assert_eq!(coefficients[0].body(), &q("1", &XY));
                assert!(coefficients[1].is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kg_cubic_membership_and_order() {
        let m = ideal(&["(x - y^2)*(y - x^2)"], &XY, 20);
        let f = vj("x*y - x^3 - y^3", &XY);
        assert!(m.membership_mod(&f, 6).unwrap().is_member());
        assert!(!m.membership_mod(&f, 7).unwrap().is_member());
        assert_eq!(m.ord_quotient(&f).unwrap(), Order::Finite(6));
        assert_eq!(m.ord_by_bisection(&f).unwrap(), Order::Finite(6));
    }

    #[test]
    fn certificate_reconstructs() {
        let m = ideal(&["(x - y^2)*(y - x^2)"], &XY, 12);
        let f = vj("x*y - x^3 - y^3", &XY);
        let Membership::Member { coefficients } = m.membership_mod(&f, 6).unwrap() else {
            panic!()
        };
        let g = q("(x - y^2)*(y - x^2)", &XY);
        let diff = f.components()[0].body().sub(&coefficients[0].body().mul(&g));
        assert!(diff.ord().unwrap() >= 6);
    }

    #[test]
    fn constants_survive() {
        let m = ideal(&["x", "y"], &XY, 4);
        assert_eq!(
            m.membership_mod(&vj("1", &XY), 1).unwrap(),
            Membership::NonMember { obstruction_degree: 0 }
        );
        assert!(matches!(
            m.membership_mod(&vj("1", &XY), 5),
            Err(Error::Precision { requested: 5, available: 4 })
        ));
    }

    #[test]
    fn order_in_zero_module_is_plain_order() {
        let m = ideal(&[], &XY, 10);
        assert_eq!(m.ord_quotient(&vj("x^3 + x^4*y", &XY)).unwrap(), Order::Finite(3));
        assert_eq!(m.ord_quotient(&vj("0", &XY)).unwrap(), Order::AtLeast(10));
    }

    #[test]
    fn log_perturbed_order_of_x() {
        let m = log_perturbed_module(40, 12).unwrap();
        assert_eq!(m.ord_of_poly(&Poly::var(3, 0)).unwrap(), Order::Finite(2));
        assert_eq!(m.ord_of_poly(&Poly::var(3, 1)).unwrap(), Order::Finite(1));
        assert_eq!(m.ord_of_poly(&q("x*y", &["x", "y", "z"])).unwrap(), Order::AtLeast(12));
    }

    #[test]
    fn inexact_generators_are_rejected() {
        let g = Jet::new(q("x", &XY), OrderSpec::uniform(2), 3).unwrap();
        assert!(matches!(
            TruncatedSubmodule::ideal(2, vec![g], 5),
            Err(Error::Precision { requested: 5, available: 3 })
        ));
    }

    #[test]
    fn rank_two_submodule() {
        let g = OrderSpec::uniform(2);
        let mk = |a: &str, b: &str| {
            VectorJet::new(vec![
                Jet::exact(q(a, &XY), g.clone()).unwrap(),
                Jet::exact(q(b, &XY), g.clone()).unwrap(),
            ])
            .unwrap()
        };
        let m = TruncatedSubmodule::new(2, 2, vec![mk("x", "y")], 5).unwrap();
        assert_eq!(m.ord_quotient(&mk("x^2", "x*y")).unwrap(), Order::AtLeast(5));
        assert_eq!(m.ord_quotient(&mk("x^2", "x*y + y^3")).unwrap(), Order::Finite(3));
        // R²/(x,y)R: degree < d part of R² minus the multiples
        assert_eq!(m.psi(1).unwrap(), 2);
        assert_eq!(m.psi(3).unwrap(), 2 * 6 - 3);
    }

    #[test]
    fn psi_of_square_of_plane() {
        let names = ["x", "y", "z"];
        let m = ideal(&["x^2", "y^2", "x*y"], &names, 11);
        assert_eq!(m.psi(3).unwrap(), 7);
        for d in 2..=10u64 {
            assert_eq!(m.psi(d as u32).unwrap(), 3 * d - 2);
        }
    }

    #[test]
    fn phi_of_zero_ideal_and_monomial_ideal() {
        let p = phi_profile::<Rational>(2, &[], 10).unwrap();
        for (d, v) in &p.values {
            assert_eq!(*v, binomial(u64::from(*d) + 2, 2));
        }
        assert_eq!(p.fitted_degree, Some(2));
        // k[x,y]/(x^2): dimension 2d + 1 for d ≥ 1
        let p = phi_profile(2, &[q("x^2", &XY)], 8).unwrap();
        for (d, v) in p.values.iter().skip(1) {
            assert_eq!(*v, 2 * u64::from(*d) + 1);
        }
        assert_eq!(p.fitted_degree, Some(1));
        assert_eq!(hilbert_samuel_phi::<Rational>(2, &[], 2).unwrap(), 6);
    }

    #[test]
    fn profile_fit() {
        let p = HSProfile::from_values(vec![(0, 0), (1, 1), (2, 4), (3, 7), (4, 10)]);
        assert_eq!(p.fitted_degree, Some(1));
        assert_eq!(p.differences(1), vec![1, 3, 3, 3]);
        assert_eq!(HSProfile::from_values(vec![(0, 1), (1, 2)]).fitted_degree, None);
    }

    #[test]
    fn hermann_examples() {
        let f = [q("x^2 + x*y", &XY)];
        let a = hermann_solve(&f, &[vec![q("x", &XY)]], 2).unwrap().unwrap();
        assert_eq!(a, vec![q("x + y", &XY)]);
        let none = hermann_solve(&[q("1", &XY)], &[vec![q("x", &XY)], vec![q("y", &XY)]], 3).unwrap();
        assert!(none.is_none());
        let a = hermann_solve(&[q("x^3", &XY)], &[vec![q("x^2", &XY)], vec![q("x*y", &XY)]], 1)
            .unwrap()
            .unwrap();
        let back = a[0].mul(&q("x^2", &XY)).add(&a[1].mul(&q("x*y", &XY)));
        assert_eq!(back, q("x^3", &XY));
        // x^3 needs a coefficient of degree 1
        assert!(hermann_solve(&[q("x^3", &XY)], &[vec![q("x^2", &XY)]], 0).unwrap().is_none());
    }

    #[test]
    fn hermann_limits() {
        let g = vec![vec![q("x", &XY)]];
        assert!(matches!(hermann_solve(&[q("x", &XY)], &g, 1000), Err(Error::Resource(_))));
        assert_eq!(hermann_cap(&[q("x^5", &XY)], &vec![vec![q("x", &XY)]; 3], None).unwrap(), 5 + 6u64.pow(4));
        assert_eq!(hermann_cap(&[q("x^5", &XY)], &vec![vec![q("x", &XY)]; 3], Some(4)).unwrap(), 4);
    }

    #[test]
    fn scan_on_zero_ideal_gives_ratio_one() {
        let m = ideal(&[], &XY, 8);
        let r = zero_estimate_scan(&m, 4, &ScanSampler { samples: 0, ..Default::default() }, &[]).unwrap();
        assert_eq!(r.max_ratio, Some(rat(1, 1)));
        assert!(r.entries.iter().all(|e| e.ord == Order::Finite(u64::from(e.degree))));
    }

    #[test]
    fn scan_is_reproducible() {
        let m = log_perturbed_module(40, 8).unwrap();
        let s = ScanSampler { seed: 7, samples: 6, coeff_bound: 3 };
        let a = zero_estimate_scan(&m, 3, &s, &[]).unwrap();
        let b = zero_estimate_scan(&m, 3, &s, &[]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.max_ratio, Some(rat(2, 1)));
        assert_eq!(a.witness.unwrap().poly, Poly::var(3, 0));
        assert!(matches!(
            zero_estimate_scan(&m, 8, &s, &[]),
            Err(Error::Precision { .. })
        ));
    }

    /// Cauchy determinant for `1/(a_i − b_j)` with `a_i = d + i`, `b_j = j`.
    fn cauchy_det(d: i64) -> Rational {
        let mut num = rat(1, 1);
        let mut den = rat(1, 1);
        for i in 0..d {
            for j in 0..d {
                if i < j {
                    num *= rat((j - i) * (i - j), 1);
                }
                den *= rat(d + i - j, 1);
            }
        }
        num / den
    }

    #[test]
    fn hilbert_determinants() {
        assert_eq!(hilbert_matrix(2), vec![vec![rat(1, 2), rat(1, 1)], vec![rat(1, 3), rat(1, 2)]]);
        assert_eq!(hilbert_matrix_check(2).unwrap(), (rat(-1, 12), true));
        assert_eq!(hilbert_matrix_check(1).unwrap(), (rat(1, 1), true));
        for d in 1..=10 {
            let (det, ok) = hilbert_matrix_check(d as usize).unwrap();
            assert!(ok);
            assert_eq!(det, cauchy_det(d));
        }
        assert!(hilbert_matrix_check(0).is_err());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(2, 0), vec![Exponent::zeros(2)]);
        assert_eq!(binomial(12, 2), 66);
        assert_eq!(binomial(2, 5), 0);
    }

    proptest! {
        #[test]
        fn normal_form_order_matches_bisection(
            coeffs in proptest::collection::vec(-2i64..3, 10),
            gsel in 0usize..3,
        ) {
            let gens = [["x^2 - y^3"].as_slice(), &["x*y", "y^2 + x^3"], &["(x - y^2)*(y - x^2)"]][gsel];
            let m = ideal(gens, &XY, 9);
            let mons = monomials_of_degree(2, 1).into_iter()
                .chain(monomials_of_degree(2, 2))
                .chain(monomials_of_degree(2, 3))
                .chain(monomials_of_degree(2, 0));
            let p = Poly::from_terms(2, mons.zip(coeffs).map(|(e, c)| (e, rat(c, 1))));
            let f = VectorJet::scalar(Jet::exact(p.clone(), OrderSpec::uniform(2)).unwrap());
            let o = m.ord_quotient(&f).unwrap();
            prop_assert_eq!(o, m.ord_by_bisection(&f).unwrap());
            prop_assert!(o.lower_bound() >= u64::from(p.ord().unwrap_or(9)).min(9));
        }
    }
}
