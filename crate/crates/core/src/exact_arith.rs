//! Exact coefficient fields.
//!
//! Two fields are provided: the rationals, and the fraction field of
//! polynomials over the rationals in a list of named parameters `a, b, c, ...`.
//! Everything else in the crate is generic over [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyseries::Poly;
use crate::text;

pub type Rational = BigRational;

/// How a coefficient should be rendered in front of a monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffRepr {
    pub negative: bool,
    /// Absolute value, already parenthesised when it is not a product of atoms.
    pub magnitude: String,
    pub is_one: bool,
}

/// A commutative field of characteristic zero with exact arithmetic.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
{
    fn try_inv(&self) -> Result<Self>;

    fn from_rational(q: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul_ref(&rhs.try_inv()?))
    }

    fn repr(&self) -> CoeffRepr;
}

impl Field for Rational {
    fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn repr(&self) -> CoeffRepr {
        let abs = self.abs();
        CoeffRepr {
            negative: self.is_negative(),
            is_one: abs.is_one(),
            magnitude: abs.to_string(),
        }
    }
}

/// Build a rational from a numerator and a nonzero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Name of the `i`-th parameter: `a, b, ..., z`, then `p26, p27, ...`.
pub fn param_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("p{i}")
    }
}

pub fn param_names(n: usize) -> Vec<String> {
    (0..n).map(param_name).collect()
}

/// Element of `Q(a, b, ...)`, kept as a reduced fraction of polynomials.
///
/// Invariant: `gcd(num, den) = 1` and the lex-leading coefficient of `den`
/// is one. Parameter count grows on demand; values with fewer parameters are
/// padded when combined.
#[derive(Clone, Debug)]
pub struct ParamRational {
    num: Poly<Rational>,
    den: Poly<Rational>,
}

impl ParamRational {
    /// The `i`-th parameter as a field element.
    pub fn param(i: usize) -> Self {
        ParamRational {
            num: Poly::var(i + 1, i),
            den: Poly::one(i + 1),
        }
    }

    pub fn from_poly(num: Poly<Rational>) -> Self {
        let n = num.nvars();
        ParamRational {
            num,
            den: Poly::one(n),
        }
    }

    pub fn from_parts(num: Poly<Rational>, den: Poly<Rational>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn numerator(&self) -> &Poly<Rational> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<Rational> {
        &self.den
    }

    pub fn nparams(&self) -> usize {
        self.num.nvars().max(self.den.nvars())
    }

    /// True when the denominator is the constant one.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Specialise every parameter to a rational value.
    pub fn eval(&self, values: &[Rational]) -> Result<Rational> {
        let n = self.nparams();
        if values.len() < n {
            return Err(Error::Dimension {
                expected: n,
                got: values.len(),
            });
        }
        let num = self.num.widen(n).eval_all(&values[..n]);
        let den = self.den.widen(n).eval_all(&values[..n]);
        num.try_div(&den)
    }

    /// Exchange two parameters.
    pub fn swap_params(&self, i: usize, j: usize) -> Self {
        let n = self.nparams().max(i + 1).max(j + 1);
        Self::normalized(
            self.num.widen(n).swap_vars(i, j),
            self.den.widen(n).swap_vars(i, j),
        )
    }

    fn normalized(num: Poly<Rational>, den: Poly<Rational>) -> Self {
        let n = num.nvars().max(den.nvars());
        let num = num.widen(n);
        let den = den.widen(n);
        if num.is_zero() {
            return ParamRational {
                num: Poly::zero(n),
                den: Poly::one(n),
            };
        }
        if den.is_constant() {
            let c = den.constant_coeff().recip();
            return ParamRational {
                num: num.scale(&c),
                den: Poly::one(n),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den
            .lex_leading()
            .map(|(_, c)| c.recip())
            .expect("nonzero denominator");
        ParamRational {
            num: num.scale(&lc),
            den: den.scale(&lc),
        }
    }
}

impl PartialEq for ParamRational {
    fn eq(&self, other: &Self) -> bool {
        let n = self.nparams().max(other.nparams());
        self.num.widen(n) == other.num.widen(n) && self.den.widen(n) == other.den.widen(n)
    }
}

impl fmt::Display for ParamRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = param_names(self.nparams());
        let num = text::format_poly(&self.num.widen(names.len()), &names);
        if self.is_polynomial() {
            write!(f, "{num}")
        } else {
            let den = text::format_poly(&self.den.widen(names.len()), &names);
            write!(f, "({num})/({den})")
        }
    }
}

impl Add for ParamRational {
    type Output = ParamRational;

    fn add(self, rhs: Self) -> Self {
        if self.is_polynomial() && rhs.is_polynomial() {
            let n = self.nparams().max(rhs.nparams());
            return ParamRational {
                num: self.num.widen(n).add(&rhs.num.widen(n)),
                den: Poly::one(n),
            };
        }
        let n = self.nparams().max(rhs.nparams());
        let (a, b) = (self.num.widen(n), self.den.widen(n));
        let (c, d) = (rhs.num.widen(n), rhs.den.widen(n));
        Self::normalized(a.mul(&d).add(&c.mul(&b)), b.mul(&d))
    }
}

impl Sub for ParamRational {
    type Output = ParamRational;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ParamRational {
    type Output = ParamRational;

    fn neg(self) -> Self {
        ParamRational {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Mul for ParamRational {
    type Output = ParamRational;

    fn mul(self, rhs: Self) -> Self {
        let n = self.nparams().max(rhs.nparams());
        if self.is_polynomial() && rhs.is_polynomial() {
            return ParamRational {
                num: self.num.widen(n).mul(&rhs.num.widen(n)),
                den: Poly::one(n),
            };
        }
        Self::normalized(
            self.num.widen(n).mul(&rhs.num.widen(n)),
            self.den.widen(n).mul(&rhs.den.widen(n)),
        )
    }
}

impl Zero for ParamRational {
    fn zero() -> Self {
        ParamRational {
            num: Poly::zero(0),
            den: Poly::one(0),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for ParamRational {
    fn one() -> Self {
        ParamRational {
            num: Poly::one(0),
            den: Poly::one(0),
        }
    }
}

impl Field for ParamRational {
    fn try_inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    fn from_rational(q: &Rational) -> Self {
        ParamRational {
            num: Poly::constant(0, q.clone()),
            den: Poly::one(0),
        }
    }

    fn repr(&self) -> CoeffRepr {
        if self.is_polynomial() && self.num.len() == 1 {
            let (e, c) = self.num.terms().next().expect("one term");
            let names = param_names(self.nparams());
            let mono = Poly::monomial(e.clone(), c.abs());
            let magnitude = text::format_poly(&mono, &names);
            return CoeffRepr {
                negative: c.is_negative(),
                is_one: magnitude == "1",
                magnitude,
            };
        }
        CoeffRepr {
            negative: false,
            is_one: false,
            magnitude: format!("({self})"),
        }
    }
}
