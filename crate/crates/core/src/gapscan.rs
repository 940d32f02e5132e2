//! Gap sequences of series and closed forms for the Kashiwara–Gabber
//! division `xy = (x − b·y^k)(y − a·x^k)·Q + R(x) + S(y)`.

use num_traits::{One, Zero};

use crate::division::{ghg_divide, DivisionResult};
use crate::error::{Error, Result};
use crate::exact_arith::{Field, ParamRational, Rational};
use crate::monorder::OrderSpec;
use crate::polyseries::{Exponent, Jet, Poly, EXACT};

/// Degrees carrying a nonzero homogeneous part, with consecutive ratios.
#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub degrees: Vec<u32>,
    /// `n(k+1)/n(k)` over consecutive positive degrees.
    pub ratios: Vec<Rational>,
    pub max_ratio: Option<Rational>,
    pub min_ratio: Option<Rational>,
    /// Truncation weight of the analysed jet; parts at or above it are unknown.
    pub truncation: u64,
}

pub fn gap_sequence<F: Field>(r: &Jet<F>) -> Result<GapReport> {
    if r.is_zero() {
        return Err(Error::EmptySupport);
    }
    let degrees: Vec<u32> = r.body().homogeneous_parts().into_iter().map(|(d, _)| d).collect();
    let positive: Vec<u32> = degrees.iter().copied().filter(|&d| d > 0).collect();
    let ratios: Vec<Rational> = positive
        .windows(2)
        .map(|w| Rational::new(w[1].into(), w[0].into()))
        .collect();
    Ok(GapReport {
        max_ratio: ratios.iter().max().cloned(),
        min_ratio: ratios.iter().min().cloned(),
        degrees,
        ratios,
        truncation: r.trunc(),
    })
}

/// Whether every observed ratio exceeds `c`. With fewer than two positive
/// degrees the answer is vacuously true; `report.ratios.len()` is the window.
pub fn hadamard_test(report: &GapReport, c: &Rational) -> Result<bool> {
    if *c <= Rational::one() {
        return Err(Error::InvalidArgument("the gap constant must exceed 1".into()));
    }
    Ok(report.ratios.iter().all(|r| r > c))
}

fn check_base(a: u32) -> Result<()> {
    if a < 2 {
        return Err(Error::InvalidArgument(format!("base must be at least 2, got {a}")));
    }
    Ok(())
}

/// Exponents `(a+1)·a^i` below `w`.
fn gap_exponents(a: u32, w: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut e = u64::from(a) + 1;
    while e < w {
        out.push(e);
        e = match e.checked_mul(u64::from(a)) {
            Some(v) => v,
            None => break,
        };
    }
    out
}

/// `s(x) = Σ_i (−1)^i x^{(a+1)a^i}` in variable `axis` of `nvars`, cut below
/// degree `w`.
pub fn s_series(nvars: usize, axis: usize, a: u32, w: u64) -> Result<Poly<Rational>> {
    check_base(a)?;
    let mut p = Poly::zero(nvars);
    for (i, e) in gap_exponents(a, w).into_iter().enumerate() {
        let c = if i % 2 == 0 { 1 } else { -1 };
        let e = u32::try_from(e).map_err(|_| Error::Resource("exponent overflow".into()))?;
        p.add_term(Exponent::unit(nvars, axis).with(axis, e), Rational::from_integer(c.into()));
    }
    Ok(p)
}

/// Closed-form remainders of `xy` divided by `(x − y^a)(y − x^a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KgOracle {
    /// `s(x)` in `k[[x, y]]`.
    pub s: Jet<Rational>,
    /// `s(x) + s(y)`.
    pub symmetric: Jet<Rational>,
}

pub fn kg_remainder_oracle(a: u32, w: u64) -> Result<KgOracle> {
    let g = OrderSpec::uniform(2);
    let sx = s_series(2, 0, a, w)?;
    let sy = s_series(2, 1, a, w)?;
    Ok(KgOracle {
        s: Jet::new(sx.clone(), g.clone(), w)?,
        symmetric: Jet::new(sx.add(&sy), g, w)?,
    })
}

/// `(x − y^a)(y − x^a) = xy − x^{a+1} − y^{a+1} + x^a y^a`.
pub fn kg_divisor(a: u32) -> Poly<Rational> {
    let x = Poly::<Rational>::var(2, 0);
    let y = Poly::<Rational>::var(2, 1);
    x.sub(&y.pow(a)).mul(&y.sub(&x.pow(a)))
}

/// GHG division of `f` by the divisor above for the total degree order.
pub fn kg_divide(f: &Poly<Rational>, a: u32, w: u64) -> Result<DivisionResult<Rational>> {
    check_base(a)?;
    let g = OrderSpec::uniform(2);
    let fj = Jet::exact(f.clone(), g.clone())?;
    let gj = Jet::exact(kg_divisor(a), g.clone())?;
    ghg_divide(&fj, &[gj], &g, w)
}

/// `xy` as a polynomial in `k[x, y]`.
pub fn xy() -> Poly<Rational> {
    Poly::monomial(Exponent::new(vec![1, 1]), Rational::one())
}

/// Coefficient of `x^{k^i(k+1)}` in `R_{a,b,−ab}`:
/// `(−1)^i a^{(k^{i+1}−1)/(k−1)} b^{(k^i−1)/(k−1)}`.
pub fn kg_generic_coefficient(k: u32, i: u32) -> Result<ParamRational> {
    check_base(k)?;
    let geometric = |m: u32| -> Result<u32> {
        let km = k
            .checked_pow(m)
            .ok_or_else(|| Error::Resource("exponent overflow".into()))?;
        Ok((km - 1) / (k - 1))
    };
    let ea = geometric(i + 1)?;
    let eb = geometric(i)?;
    let sign = if i.is_multiple_of(2) { 1 } else { -1 };
    let mono = Poly::monomial(Exponent::new(vec![ea, eb]), Rational::from_integer(sign.into()));
    Ok(ParamRational::from_poly(mono))
}

/// Expected coefficient of `x^l` in `R_{a,b,−ab}`.
pub fn kg_generic_expected(k: u32, l: u32) -> Result<ParamRational> {
    check_base(k)?;
    if l == 0 || !l.is_multiple_of(k + 1) {
        return Ok(ParamRational::zero());
    }
    let mut q = l / (k + 1);
    let mut i = 0;
    while q.is_multiple_of(k) {
        q /= k;
        i += 1;
    }
    if q == 1 {
        kg_generic_coefficient(k, i)
    } else {
        Ok(ParamRational::zero())
    }
}

/// `xy − a·x^{k+1} − b·y^{k+1} + ab·x^k y^k` over `Q(a, b)`.
pub fn kg_generic_divisor(k: u32) -> Poly<ParamRational> {
    let a = ParamRational::param(0);
    let b = ParamRational::param(1);
    let ab = a.mul_ref(&b);
    Poly::from_terms(
        2,
        [
            (Exponent::new(vec![1, 1]), ParamRational::one()),
            (Exponent::new(vec![k + 1, 0]), -a),
            (Exponent::new(vec![0, k + 1]), -b),
            (Exponent::new(vec![k, k]), ab),
        ],
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct KgGenericReport {
    pub k: u32,
    /// The x-pure part is compared below this degree.
    pub trunc: u64,
    pub remainder: Jet<ParamRational>,
    /// `(l, computed, expected)` for every `l` below `trunc`.
    pub x_coefficients: Vec<(u32, ParamRational, ParamRational)>,
    pub mismatches: Vec<u32>,
    /// `S_{a,b}(y) = R_{b,a}(y)` on the compared window.
    pub symmetric: bool,
    /// For `k = 2`: specialising `a = b = 1` reproduces the rational division.
    pub specialization_agrees: Option<bool>,
}

impl KgGenericReport {
    pub fn matches(&self) -> bool {
        self.mismatches.is_empty() && self.symmetric && self.specialization_agrees != Some(false)
    }
}

/// Divide `xy` by [`kg_generic_divisor`] with weights `λ = (3, 2)` and
/// truncation weight `3w`, so that the x-pure remainder is exact below
/// degree `w`, and compare with the closed form.
pub fn kg_generic_divide(k: u32, w: u64) -> Result<KgGenericReport> {
    check_base(k)?;
    if w == 0 || w == EXACT {
        return Err(Error::InvalidArgument("a finite positive window is needed".into()));
    }
    let lambda = OrderSpec::new(vec![3, 2])?;
    let weight = w.checked_mul(3).ok_or_else(|| Error::Resource("weight overflow".into()))?;
    let f = Jet::exact(xy().map_coeffs(ParamRational::from_rational), lambda.clone())?;
    let g = Jet::exact(kg_generic_divisor(k), lambda.clone())?;
    let res = ghg_divide(&f, &[g], &lambda, weight)?;
    let r = res.remainder;
    let top = u32::try_from(w).map_err(|_| Error::Resource("window too large".into()))?;

    let mut x_coefficients = Vec::new();
    let mut mismatches = Vec::new();
    let mut symmetric = true;
    for l in 0..top {
        let got = r.coeff(&Exponent::new(vec![l, 0]));
        let want = kg_generic_expected(k, l)?;
        if got != want {
            mismatches.push(l);
        }
        if r.coeff(&Exponent::new(vec![0, l])) != got.swap_params(0, 1) {
            symmetric = false;
        }
        x_coefficients.push((l, got, want));
    }
    let mixed = r.body().terms().any(|(e, _)| e[0] > 0 && e[1] > 0);
    if mixed {
        return Err(Error::Internal("remainder left the region of pure powers".into()));
    }

    let specialization_agrees = if k == 2 {
        let plain = kg_divide(&xy(), 2, w)?.remainder;
        let ones = [Rational::one(), Rational::one()];
        let mut ok = true;
        for l in 0..top {
            for e in [Exponent::new(vec![l, 0]), Exponent::new(vec![0, l])] {
                if r.coeff(&e).eval(&ones)? != plain.coeff(&e) {
                    ok = false;
                }
            }
        }
        Some(ok)
    } else {
        None
    };

    Ok(KgGenericReport {
        k,
        trunc: w,
        remainder: r,
        x_coefficients,
        mismatches,
        symmetric,
        specialization_agrees,
    })
}

/// Which form of the sharpness family to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyVariant {
    /// `xy − Σ_{i≤n} (−1)^i x^{(a+1)a^i}`.
    Printed,
    /// `xy − Σ_{i≤n} (−1)^i (x^{(a+1)a^i} + y^{(a+1)a^i})`.
    Symmetric,
}

/// Polynomial `f_n` of degree `(a+1)a^n` whose class modulo the divisor has
/// order `(a+1)a^{n+1}` (symmetric variant).
pub fn sharpness_family(a: u32, n: u32, variant: FamilyVariant) -> Result<Poly<Rational>> {
    check_base(a)?;
    let top = (u64::from(a) + 1).saturating_mul(u64::from(a).checked_pow(n).unwrap_or(u64::MAX));
    let w = top.saturating_add(1);
    let mut sum = s_series(2, 0, a, w)?;
    if variant == FamilyVariant::Symmetric {
        sum = sum.add(&s_series(2, 1, a, w)?);
    }
    Ok(xy().sub(&sum))
}

/// Expected remainder of the symmetric `f_n`: `Σ_{i>n} (−1)^i (x^{…} + y^{…})`
/// below `w`.
pub fn sharpness_remainder(a: u32, n: u32, w: u64) -> Result<Poly<Rational>> {
    let full = kg_remainder_oracle(a, w)?.symmetric.into_body();
    let head = xy().sub(&sharpness_family(a, n, FamilyVariant::Symmetric)?);
    Ok(full.sub(&head))
}
