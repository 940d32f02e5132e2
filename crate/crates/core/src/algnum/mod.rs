//! Algebraic power series: annihilating polynomials, Newton lifting, and
//! resultant constructions for sums, products, derivatives and compositions.

mod resultant;

pub use resultant::{det, resultant};

use crate::error::{Error, Result};
use crate::exact_arith::Field;
use crate::monorder::OrderSpec;
use crate::polyseries::{Exponent, Jet, Poly, EXACT};

/// `P(x, T) = Σ a_i(x) T^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct AnnPoly<F> {
    coeffs: Vec<Poly<F>>,
    /// Irreducibility is asserted by the caller, never verified.
    pub claimed_minimal: bool,
}

impl<F: Field> AnnPoly<F> {
    /// Trailing zero coefficients are dropped; at least one must be nonzero.
    pub fn new(mut coeffs: Vec<Poly<F>>, claimed_minimal: bool) -> Result<Self> {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        let n = coeffs.first().ok_or(Error::EmptySupport)?.nvars();
        if let Some(c) = coeffs.iter().find(|c| c.nvars() != n) {
            return Err(Error::Dimension {
                expected: n,
                got: c.nvars(),
            });
        }
        Ok(AnnPoly {
            coeffs,
            claimed_minimal,
        })
    }

    /// Read `P` from a polynomial whose last variable is `T`.
    pub fn from_poly(p: &Poly<F>, claimed_minimal: bool) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::EmptySupport);
        }
        let n = p.nvars() - 1;
        let coeffs = p
            .coefficients_in(n)
            .into_iter()
            .map(|c| drop_last_var(&c))
            .collect();
        Self::new(coeffs, claimed_minimal)
    }

    /// `P` as a polynomial in `(x_1, …, x_n, T)`.
    pub fn to_poly(&self) -> Poly<F> {
        let n = self.nvars();
        let widened: Vec<Poly<F>> = self.coeffs.iter().map(|c| c.widen(n + 1)).collect();
        Poly::from_coefficients_in(n + 1, n, &widened)
    }

    pub fn coeffs(&self) -> &[Poly<F>] {
        &self.coeffs
    }

    pub fn nvars(&self) -> usize {
        self.coeffs[0].nvars()
    }

    /// Maximum total degree of the coefficients.
    pub fn height(&self) -> u32 {
        self.coeffs
            .iter()
            .filter_map(Poly::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Degree in `T`.
    pub fn degree(&self) -> u32 {
        (self.coeffs.len() - 1) as u32
    }

    /// `∂P/∂T`.
    pub fn t_derivative(&self) -> AnnPoly<F> {
        let n = self.nvars();
        let coeffs: Vec<Poly<F>> = if self.coeffs.len() == 1 {
            vec![Poly::zero(n)]
        } else {
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&F::from_i64(i as i64)))
                .collect()
        };
        AnnPoly {
            coeffs,
            claimed_minimal: false,
        }
    }

    /// `P(x, j)` as a jet in the grading of `j`.
    pub fn eval_jet(&self, j: &Jet<F>) -> Result<Jet<F>> {
        if j.nvars() != self.nvars() {
            return Err(Error::Dimension {
                expected: self.nvars(),
                got: j.nvars(),
            });
        }
        let mut acc = Jet::exact(Poly::zero(self.nvars()), j.order().clone())?;
        for c in self.coeffs.iter().rev() {
            let c = Jet::exact(c.clone(), j.order().clone())?;
            acc = acc.mul(j)?.add(&c)?;
        }
        Ok(acc)
    }

    /// `P(0, c)`.
    pub fn eval_origin(&self, c: &F) -> F {
        let mut acc = F::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc.mul_ref(c).add_ref(&a.constant_coeff());
        }
        acc
    }

    /// Divide out the content in `T` and normalise the leading coefficient.
    pub fn primitive(&self) -> AnnPoly<F> {
        let n = self.nvars();
        let p = self.to_poly().primitive_part_in(n);
        let mut out = Self::from_poly(&p, self.claimed_minimal).expect("nonzero");
        out.claimed_minimal = self.claimed_minimal;
        out
    }

    /// True when `other` divides `self` in `F(x)[T]` (pseudo-remainder test).
    pub fn is_divisible_by(&self, other: &AnnPoly<F>) -> bool {
        let n = self.nvars();
        let d = other.to_poly().primitive_part_in(n);
        self.to_poly().prem(&d, n).is_zero()
    }
}

fn drop_last_var<F: Field>(p: &Poly<F>) -> Poly<F> {
    let n = p.nvars() - 1;
    Poly::from_terms(
        n,
        p.terms().map(|(e, c)| {
            debug_assert_eq!(e[n], 0);
            (Exponent::new(e.as_slice()[..n].to_vec()), c.clone())
        }),
    )
}

/// An algebraic series: an annihilator together with a lifted jet.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgSeries<F> {
    pub ann: AnnPoly<F>,
    pub jet: Jet<F>,
    /// `P(x, jet)` vanishes below this weight.
    pub certified: u64,
    /// Residual valuation after each Newton step.
    pub trace: Vec<u64>,
}

/// Lift the simple root `c0` of `P(0, T)` to a jet exact below weight `w`
/// (total degree).
pub fn newton_lift<F: Field>(p: &AnnPoly<F>, c0: &F, w: u64) -> Result<AlgSeries<F>> {
    if w == EXACT {
        return Err(Error::InvalidArgument("lifting needs a finite weight".into()));
    }
    if !p.eval_origin(c0).is_zero() {
        return Err(Error::LiftingPrecondition(format!(
            "{c0} is not a root of P(0, T)"
        )));
    }
    let dp = p.t_derivative();
    if dp.eval_origin(c0).is_zero() {
        return Err(Error::LiftingPrecondition(format!(
            "{c0} is a multiple root of P(0, T)"
        )));
    }
    let n = p.nvars();
    let order = OrderSpec::uniform(n);
    let mut jet = Jet::new(Poly::constant(n, c0.clone()), order.clone(), w)?;
    let mut prec = 1u64.min(w);
    let mut trace = Vec::new();
    while prec < w {
        prec = (prec * 2).min(w);
        let j = jet.truncated(prec);
        let res = p.eval_jet(&j)?.truncated(prec);
        let inv = dp.eval_jet(&j)?.inverse(prec)?;
        let step = res.mul_trunc(&inv, prec)?;
        jet = Jet::new(j.sub(&step)?.into_body(), order.clone(), w)?;
        let check = p.eval_jet(&jet.truncated(prec))?;
        trace.push(check.valuation().min(prec));
    }
    let residual = p.eval_jet(&jet)?;
    if !residual.is_zero() {
        return Err(Error::Internal("Newton lifting left a residual".into()));
    }
    Ok(AlgSeries {
        ann: p.clone(),
        certified: residual.trunc(),
        jet,
        trace,
    })
}

/// Order in `x_axis` of `f(0, …, x_axis, …, 0)`, or `None` when that
/// restriction vanishes below the truncation.
pub fn regularity_order<F: Field>(f: &Jet<F>, axis: usize) -> Option<u32> {
    f.restrict_to_axis(axis)
        .body()
        .terms()
        .map(|(e, _)| e[axis])
        .min()
}

/// Variables `(x_1..x_n, y, T)` used during elimination.
fn lift_xt<F: Field>(p: &AnnPoly<F>, t_slot: usize) -> Poly<F> {
    let n = p.nvars();
    let map: Vec<usize> = (0..n).chain(std::iter::once(t_slot)).collect();
    p.to_poly().remap(n + 2, &map)
}

fn finish<F: Field>(r: Poly<F>, n: usize) -> Result<AnnPoly<F>> {
    if r.is_zero() {
        return Err(Error::DegenerateComposition);
    }
    // y (slot n) has been eliminated; T moves from slot n + 1 to slot n
    let map: Vec<usize> = (0..n).chain([n, n]).collect();
    AnnPoly::from_poly(&r.remap(n + 1, &map), false).map(|a| a.primitive())
}

/// Annihilator of `f + g` from annihilators of `f` and `g`:
/// `Res_y(P_f(x, y), P_g(x, T − y))`.
pub fn annihilator_sum<F: Field>(pf: &AnnPoly<F>, pg: &AnnPoly<F>) -> Result<AnnPoly<F>> {
    check_same_vars(pf, pg)?;
    let n = pf.nvars();
    let (y, t) = (n, n + 1);
    let a = lift_xt(pf, y);
    let b = lift_xt(pg, t);
    let t_minus_y = Poly::var(n + 2, t).sub(&Poly::var(n + 2, y));
    let b = b.substitute(t, &t_minus_y);
    finish(resultant(&a, &b, y), n)
}

/// Annihilator of `f · g`: `Res_y(P_f(x, y), y^{D_g} P_g(x, T / y))`.
pub fn annihilator_product<F: Field>(pf: &AnnPoly<F>, pg: &AnnPoly<F>) -> Result<AnnPoly<F>> {
    check_same_vars(pf, pg)?;
    let n = pf.nvars();
    let (y, t) = (n, n + 1);
    let a = lift_xt(pf, y);
    let dg = pg.degree();
    let mut b = Poly::zero(n + 2);
    for (i, c) in pg.coeffs().iter().enumerate() {
        let mono = Exponent::zeros(n + 2)
            .with(t, i as u32)
            .with(y, dg - i as u32);
        b = b.add(&c.widen(n + 2).mul_term(&mono, &F::one()));
    }
    finish(resultant(&a, &b, y), n)
}

/// Annihilator of `∂f/∂x_axis` for the lifted series `f`:
/// `Res_y(P(x, y), T·P_T(x, y) + P_{x_axis}(x, y))`.
pub fn annihilator_derivative<F: Field>(f: &AlgSeries<F>, axis: usize) -> Result<AnnPoly<F>> {
    let p = &f.ann;
    let n = p.nvars();
    if axis >= n {
        return Err(Error::Dimension {
            expected: n,
            got: axis + 1,
        });
    }
    if p.t_derivative().eval_jet(&f.jet)?.is_zero() {
        return Err(Error::Separability);
    }
    let (y, t) = (n, n + 1);
    let a = lift_xt(p, y);
    let b = Poly::var(n + 2, t)
        .mul(&a.derivative(y))
        .add(&a.derivative(axis));
    finish(resultant(&a, &b, y), n)
}

/// Annihilator of `g(x, α(x))` given `P(x, y, T)` annihilating `g(x, y)`
/// and `Q(x, y)` annihilating `α`: `Res_y(P(x, y, T), Q(x, y))`.
pub fn annihilator_compose<F: Field>(p: &AnnPoly<F>, q: &AnnPoly<F>) -> Result<AnnPoly<F>> {
    let n = q.nvars();
    if p.nvars() != n + 1 {
        return Err(Error::Dimension {
            expected: n + 1,
            got: p.nvars(),
        });
    }
    let y = n;
    let a = p.to_poly();
    let b = lift_xt(q, y);
    finish(resultant(&a, &b, y), n)
}

fn check_same_vars<F: Field>(a: &AnnPoly<F>, b: &AnnPoly<F>) -> Result<()> {
    if a.nvars() != b.nvars() {
        return Err(Error::Dimension {
            expected: a.nvars(),
            got: b.nvars(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{rat, Rational};
    use crate::text::parse_poly;

    fn ann(s: &str) -> AnnPoly<Rational> {
        AnnPoly::from_poly(&parse_poly(s, &["x", "T"]).unwrap(), false).unwrap()
    }

    fn one() -> Rational {
        rat(1, 1)
    }

    #[test]
    fn height_and_degree() {
        let p = ann("T - (x^7 + 3*x^2 - 1)");
        assert_eq!((p.height(), p.degree()), (7, 1));
        let q = ann("(1 + x^4)*T^4 - 1");
        assert_eq!((q.height(), q.degree()), (4, 4));
        let r = ann("T^2 - (1 + x)");
        assert_eq!((r.height(), r.degree()), (1, 2));
        assert_eq!(AnnPoly::from_poly(&r.to_poly(), false).unwrap(), r);
    }

    #[test]
    fn lifts_square_root() {
        let s = newton_lift(&ann("T^2 - (1 + x)"), &one(), 5).unwrap();
        let expected = parse_poly("1 + x/2 - x^2/8 + x^3/16 - 5*x^4/128", &["x"]).unwrap();
        assert_eq!(s.jet.body(), &expected);
        assert_eq!(s.certified, 5);
        let t = newton_lift(&ann("(1 + x^2)*T^2 - 1"), &one(), 5).unwrap();
        let expected = parse_poly("1 - x^2/2 + 3*x^4/8", &["x"]).unwrap();
        assert_eq!(t.jet.body(), &expected);
        let p = newton_lift(&ann("T - (x^3 - 2*x + 5)"), &rat(5, 1), 3).unwrap();
        assert_eq!(p.jet.body(), &parse_poly("5 - 2*x", &["x"]).unwrap());
    }

    #[test]
    fn lifting_preconditions() {
        assert!(matches!(
            newton_lift(&ann("T^2 - (1 + x)"), &rat(2, 1), 5),
            Err(Error::LiftingPrecondition(_))
        ));
        assert!(matches!(
            newton_lift(&ann("T^2 - x"), &rat(0, 1), 5),
            Err(Error::LiftingPrecondition(_))
        ));
    }

    #[test]
    fn residual_doubles() {
        let s = newton_lift(&ann("T^3 - T - x"), &rat(1, 1), 64).unwrap();
        let mut prev = 1;
        for &v in &s.trace {
            assert!(v >= (2 * prev).min(64));
            prev = v;
        }
    }

    #[test]
    fn regularity() {
        let o = OrderSpec::uniform(2);
        let names = ["x", "y"];
        let j = |s: &str| Jet::new(parse_poly::<Rational, _>(s, &names).unwrap(), o.clone(), 20).unwrap();
        assert_eq!(regularity_order(&j("(x - y^2)*(y - x^2)"), 1), Some(3));
        assert_eq!(regularity_order(&j("y^2 - x"), 1), Some(2));
        assert_eq!(regularity_order(&j("x*y"), 1), None);
    }

    #[test]
    fn sum_with_polynomial() {
        let r = annihilator_sum(&ann("T^2 - (1 + x)"), &ann("T - x")).unwrap();
        let expected = ann("(T - x)^2 - (1 + x)").primitive();
        assert_eq!(r, expected);
    }

    #[test]
    fn product_of_polynomials_is_linear() {
        let r = annihilator_product(&ann("T - (1 + x)"), &ann("T - x^2")).unwrap();
        assert_eq!(r.degree(), 1);
        assert_eq!(r, ann("T - x^2 - x^3").primitive());
    }

    #[test]
    fn derivative_of_root() {
        let s = newton_lift(&ann("T^2 - (1 + x)"), &one(), 10).unwrap();
        let d = annihilator_derivative(&s, 0).unwrap();
        assert_eq!(d, ann("4*(1 + x)*T^2 - 1").primitive());
        let p = newton_lift(&ann("T - x^3"), &rat(0, 1), 10).unwrap();
        let d = annihilator_derivative(&p, 0).unwrap();
        assert_eq!(d, ann("T - 3*x^2").primitive());
    }

    #[test]
    fn composition() {
        // g(x, y) = y^2, α = sqrt(1 + x) − 1
        let p = AnnPoly::from_poly(&parse_poly::<Rational, _>("T - y^2", &["x", "y", "T"]).unwrap(), false).unwrap();
        let q = ann("(T + 1)^2 - (1 + x)");
        let r = annihilator_compose(&p, &q).unwrap();
        assert_eq!(r, ann("T^2 - (4 + 2*x)*T + x^2").primitive());

        let id = AnnPoly::from_poly(&parse_poly::<Rational, _>("T - y", &["x", "y", "T"]).unwrap(), false).unwrap();
        assert_eq!(annihilator_compose(&id, &q).unwrap(), q.primitive());

        let alpha = newton_lift(&q, &rat(0, 1), 30).unwrap();
        let g = Jet::exact(alpha.jet.body().mul(alpha.jet.body()), OrderSpec::uniform(1))
            .unwrap()
            .truncated(30);
        assert!(r.eval_jet(&g).unwrap().is_zero());
    }

    #[test]
    fn degenerate_composition() {
        // P does not involve T after substituting any root: P = Q(x, y)
        let p = AnnPoly::from_poly(&parse_poly::<Rational, _>("(y^2 - x)*T", &["x", "y", "T"]).unwrap(), false).unwrap();
        let q = ann("T^2 - x");
        assert_eq!(annihilator_compose(&p, &q), Err(Error::DegenerateComposition));
    }
}
