//! Certified height/degree bounds for algebraic power series, evaluated
//! exactly with arbitrary-precision naturals.
//!
//! Notation: `H` is a height (largest total degree of a coefficient of the
//! minimal polynomial), `Deg` a degree over `k(x)`.

use std::fmt;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Refuse to materialise numbers longer than this many bits.
pub const MAX_BITS: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundNat(BigUint);

impl BoundNat {
    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    pub fn pow(&self, e: u64) -> Result<BoundNat> {
        if e == 0 {
            return Ok(BoundNat(BigUint::one()));
        }
        if self.0 <= BigUint::one() {
            return Ok(self.clone());
        }
        if self.bits().saturating_mul(e) > MAX_BITS {
            return Err(Error::Resource(format!(
                "bound would need more than {MAX_BITS} bits"
            )));
        }
        let e = u32::try_from(e).map_err(|_| Error::Resource("exponent too large".into()))?;
        Ok(BoundNat(self.0.pow(e)))
    }

    pub fn factorial(n: u64) -> Result<BoundNat> {
        // log2(n!) ≤ n·log2(n)
        let est = n.saturating_mul(64 - n.leading_zeros() as u64);
        if est > MAX_BITS {
            return Err(Error::Resource(format!("{n}! is too large")));
        }
        let mut acc = BigUint::one();
        for k in 2..=n {
            acc *= k;
        }
        Ok(BoundNat(acc))
    }
}

impl From<u64> for BoundNat {
    fn from(v: u64) -> Self {
        BoundNat(BigUint::from(v))
    }
}

impl From<BigUint> for BoundNat {
    fn from(v: BigUint) -> Self {
        BoundNat(v)
    }
}

impl fmt::Display for BoundNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for BoundNat {
    type Output = BoundNat;
    fn add(self, rhs: Self) -> Self {
        BoundNat(self.0 + rhs.0)
    }
}

impl Mul for BoundNat {
    type Output = BoundNat;
    fn mul(self, rhs: Self) -> Self {
        BoundNat(self.0 * rhs.0)
    }
}

fn n(v: u64) -> BoundNat {
    BoundNat::from(v)
}

fn product(vs: &[u64]) -> Result<BoundNat> {
    if vs.is_empty() {
        return Err(Error::InvalidArgument("empty list of degrees".into()));
    }
    Ok(vs.iter().fold(n(1), |acc, &v| acc * n(v)))
}

/// `Deg(Σ a_i α_i) ≤ Π Deg(α_i)`.
pub fn b_lincomb_deg(degs: &[u64]) -> Result<BoundNat> {
    product(degs)
}

/// `H(Σ a_i α_i) ≤ p · Π Deg(α_i) · (max H(α_i) + max H(a_j))`.
pub fn b_lincomb_h(p: u64, degs: &[u64], max_h_alpha: u64, max_h_a: u64) -> Result<BoundNat> {
    Ok(n(p) * product(degs)? * (n(max_h_alpha) + n(max_h_a)))
}

/// `H(a + α), H(a · α) ≤ H(α) + Deg(α) · H(a)`.
pub fn b_shift_h(h_alpha: u64, deg_alpha: u64, h_a: u64) -> BoundNat {
    n(h_alpha) + n(deg_alpha) * n(h_a)
}

/// `Deg(α_1 ⋯ α_p) ≤ Π Deg(α_i)`.
pub fn b_prod_deg(degs: &[u64]) -> Result<BoundNat> {
    product(degs)
}

/// `H(α_1 ⋯ α_p) ≤ p · Π Deg(α_i) · max H(α_i)`.
pub fn b_prod_h(p: u64, degs: &[u64], max_h: u64) -> Result<BoundNat> {
    Ok(n(p) * product(degs)? * n(max_h))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBounds {
    pub height: BoundNat,
    pub degree: BoundNat,
    /// Degree of the field generated by distinct roots.
    pub field_degree: BoundNat,
}

/// Roots of an `x_n`-regular series `f`: `H, Deg ≤ H(f)`, field degree `≤ H(f)!`.
pub fn b_root(hf: u64) -> Result<RootBounds> {
    Ok(RootBounds {
        height: n(hf),
        degree: n(hf),
        field_degree: BoundNat::factorial(hf)?,
    })
}

/// `H(g(x, α)) ≤ H(g) · (H(α) + Deg(α))`.
pub fn b_compose_h(hg: u64, h_alpha: u64, deg_alpha: u64) -> BoundNat {
    n(hg) * (n(h_alpha) + n(deg_alpha))
}

/// `Deg(g(x, α)) ≤ Deg(α) · Deg(g)`.
pub fn b_compose_deg(degg: u64, deg_alpha: u64) -> BoundNat {
    n(deg_alpha) * n(degg)
}

/// Several substituted series: `H ≤ Π (H(a_i) + Deg(a_i)) · H(g)`.
pub fn b_compose_multi_h(hg: u64, args: &[(u64, u64)]) -> BoundNat {
    args.iter()
        .fold(n(hg), |acc, &(h, d)| acc * (n(h) + n(d)))
}

/// Several substituted series: `Deg ≤ Π Deg(a_i) · Deg(g)`.
pub fn b_compose_multi_deg(degg: u64, degs: &[u64]) -> BoundNat {
    degs.iter().fold(n(degg), |acc, &d| acc * n(d))
}

/// `H(∂f/∂x_n) ≤ 4 · Deg^{2·Deg+4} · H`.
pub fn b_derivative_h(h: u64, deg: u64) -> Result<BoundNat> {
    Ok(n(4) * n(deg).pow(2 * deg + 4)? * n(h))
}

/// `Deg(∂f/∂x_n) ≤ Deg(f)`.
pub fn b_derivative_deg(deg: u64) -> BoundNat {
    n(deg)
}

/// `H(f(x, y)) ≤ H(f(x, y^q)) ≤ q · H(f(x, y))`, as `(lower, upper)`.
pub fn b_power_subst(h: u64, q: u64) -> (BoundNat, BoundNat) {
    (n(h), n(q) * n(h))
}

/// Height of the pieces `f_i(x, y^q)` of `f = Σ f_i(x, y^q) y^i`, with
/// `q = r·p^e` (`e = 0` in characteristic zero).
pub fn b_extraction_h(h: u64, deg: u64, q: u64, p: u64, e: u64) -> Result<BoundNat> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be positive".into()));
    }
    if e == 0 {
        return Ok(n(deg).pow(q)? * (n(q) * n(h) + n(q - 1)));
    }
    let pe = n(p).pow(e * (e + 1) / 2)?;
    let dexp = 2 * q * deg + 5 * q;
    Ok(n(q) * n(q) * pe * n(4).pow(q)? * n(deg).pow(dexp)? * (n(h) + n(q * (q - 1) / 2)))
}

/// `Deg(f_i(x, y^q)) ≤ Deg(f)^r`.
pub fn b_extraction_deg(deg: u64, r: u64) -> Result<BoundNat> {
    n(deg).pow(r)
}

/// Weierstrass polynomial of an `x_n`-regular series of order `d`:
/// `(H(P), Deg(P)) ≤ (2d·H^{d+1}, H!)`.
pub fn b_wprep(h: u64, d: u64) -> Result<(BoundNat, BoundNat)> {
    Ok((n(2) * n(d) * n(h).pow(d + 1)?, BoundNat::factorial(h)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WdivBounds {
    /// Height of each coefficient `r_i` of the remainder.
    pub h_ri: BoundNat,
    /// Height of the remainder.
    pub h_r: BoundNat,
    /// Degree of the remainder and of each `r_i`.
    pub deg_r: BoundNat,
}

/// Division by a series with `d` distinct roots.
pub fn b_wdiv_sep(hf: u64, d: u64, hg: u64, degg: u64) -> Result<WdivBounds> {
    let hf_fact = BoundNat::factorial(hf)?;
    let d_fact = BoundNat::factorial(d)?;
    let pairs = d * d.saturating_sub(1) / 2;
    let d_fact_u = d_fact
        .to_u64()
        .ok_or_else(|| Error::Resource("d! does not fit a machine word".into()))?;
    let first = d_fact * n(pairs) * n(hf).pow(pairs)? * hf_fact.pow(d_fact_u + 2)?;
    let max = first.max(n(hg));
    let h_ri = n(4) * n(d) * hf_fact.pow(d + 1)? * n(hf).pow(2)? * n(degg) * max;
    let deg_r = hf_fact * n(degg).pow(d)?;
    let h_r = n(d) * deg_r.pow(d)? * (h_ri.clone() + n(d.saturating_sub(1)));
    Ok(WdivBounds { h_ri, h_r, deg_r })
}

/// Degree bound for polynomial ideal membership with `p` generators of
/// degree `< d` in `n` variables: `deg(f) + (p·d)^{2^n}`.
pub fn b_hermann(nvars: u64, p: u64, d: u64, degf: u64) -> Result<BoundNat> {
    if nvars >= 64 {
        return Err(Error::Resource("too many variables".into()));
    }
    Ok(n(degf) + (n(p) * n(d)).pow(1u64 << nvars)?)
}

/// Smallest natural `C` with `(2d)^{(2d)^{a·d}} ≤ 2^{2^{C·d^{1+ε}}}`.
///
/// Decided exactly: taking `log₂` twice, the condition reads
/// `(2d)^{ad} · log₂(2d) ≤ 2^{C·d^{1+ε}}`, and `log₂(2d)` is enclosed in
/// `[(b_k − 1)/k, b_k/k)` with `b_k` the bit length of `(2d)^k`.
pub fn b_lemma_tech(d: u64, a: u64, eps: u64) -> Result<u64> {
    if d == 0 || a == 0 || eps == 0 {
        return Err(Error::InvalidArgument("d, a and ε must be positive".into()));
    }
    let base = BoundNat::from(2 * d);
    let x = base.pow(a * d)?;
    let m = BoundNat::from(d).pow(1 + eps)?;
    let m = m
        .to_u64()
        .ok_or_else(|| Error::Resource("d^(1+ε) too large".into()))?;
    let mut c = 0u64;
    loop {
        let exp = c.saturating_mul(m);
        if exp > MAX_BITS {
            return Err(Error::Resource("constant search exceeded limits".into()));
        }
        if log_product_le(&x, 2 * d, exp)? {
            return Ok(c);
        }
        c += 1;
    }
}

/// Decide `x · log₂(b) ≤ 2^e`.
fn log_product_le(x: &BoundNat, b: u64, e: u64) -> Result<bool> {
    let rhs = BigUint::one() << e;
    if b.is_power_of_two() {
        let l = b.trailing_zeros() as u64;
        return Ok(&x.0 * l <= rhs);
    }
    let mut k = 1u64;
    loop {
        let bk = BoundNat::from(b).pow(k)?.bits();
        // x·(bk−1)/k ≤ x·log₂ b < x·bk/k
        if &x.0 * bk <= &rhs * k {
            return Ok(true);
        }
        if &x.0 * (bk - 1) > &rhs * k {
            return Ok(false);
        }
        k *= 2;
        if k > MAX_BITS {
            return Err(Error::Resource("log enclosure did not separate".into()));
        }
    }
}

/// Bounds whose constants are not explicit; recorded as formulas only.
pub const SYMBOLIC_SHAPES: &[(&str, &str)] = &[
    (
        "weierstrass division, remainder height",
        "H(r_i) <= 4 H(f)^(H(f)^O(d)) Deg(g) (H(g)+1)",
    ),
    (
        "weierstrass division, remainder height (inseparable case)",
        "H(r_i) <= (2H(f))^((2H(f))^O(d)) Deg(g)^(2d(Deg(g)+2)) (H(g)+1)",
    ),
    (
        "weierstrass division, overall",
        "H(q), H(r) <= 2^(2^O(H(f)^(1+eps))) Deg(g)^O(d Deg(g)) (H(g)+1)",
    ),
    ("local membership degree", "gamma(n, q, d) = (2d)^(2^O(n+q))"),
    (
        "algebraic ideal membership",
        "H(a_i) <= C1(n, Deg, H(g)) H(f), Deg(a_i) <= C2(n, Deg, H(g))",
    ),
    ("zero estimate constant", "C(Deg(f)) existential, depends on a primary decomposition"),
];
