use std::fmt::Display;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use algps::algnum::{
    annihilator_compose, annihilator_derivative, annihilator_product, annihilator_sum, newton_lift,
    AnnPoly,
};
use algps::bounds::{self, BoundNat};
use algps::division::{ghg_divide, weierstrass_divide, weierstrass_prepare};
use algps::exact_arith::Field;
use algps::gapscan::{
    gap_sequence, hadamard_test, kg_divide, kg_generic_divide, kg_remainder_oracle, xy,
};
use algps::localalg::{
    hermann_cap, hermann_solve, hilbert_matrix_check, log_perturbed_module, phi_profile,
    psi_profile, zero_estimate_scan, HSProfile, Membership, ScanSampler, TruncatedSubmodule,
};
use algps::text::{format_poly, format_rational, infer_variables, parse_poly, parse_rational};
use algps::{Error, Jet, OrderSpec, QJet, QPoly, Rational, VectorJet, EXACT};

const DEFAULT_TRUNC: u64 = 64;
const TRUNC_ENV: &str = "ALGPS_TRUNC";

#[derive(Parser, Debug)]
#[command(name = "algps", version, about = "Exact computations with truncated algebraic power series")]
struct Cli {
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Comma-separated variable names; inferred from the inputs otherwise.
    #[arg(long, global = true)]
    vars: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Grauert–Hironaka–Galligo division of f by g_1, ..., g_s.
    Divide {
        #[arg(long)]
        f: String,
        #[arg(long = "g", required = true)]
        g: Vec<String>,
        /// Comma-separated positive weights of the monomial order.
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        trunc: Option<u64>,
    },
    /// Weierstrass division g = f q + r by an x_axis-regular f.
    Wdiv {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        /// Distinguished variable; the last one by default.
        #[arg(long)]
        axis: Option<String>,
        #[arg(long)]
        trunc: Option<u64>,
    },
    /// Weierstrass preparation f = u P.
    Prep {
        #[arg(long)]
        f: String,
        #[arg(long)]
        axis: Option<String>,
        #[arg(long)]
        trunc: Option<u64>,
    },
    /// Newton lifting of a simple root of P(0, T).
    Lift {
        #[arg(long)]
        p: String,
        #[arg(long, default_value = "0")]
        c0: String,
        #[arg(long, default_value = "T")]
        tvar: String,
        #[arg(long)]
        trunc: Option<u64>,
    },
    /// Annihilating polynomials of sums, products, derivatives, compositions.
    Annihilate {
        #[arg(value_enum)]
        op: AnnOp,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value = "T")]
        tvar: String,
        /// Root of P(0, T) to lift (derivative).
        #[arg(long, default_value = "0")]
        c0: String,
        /// Differentiation variable, or the substituted variable for compose.
        #[arg(long)]
        var: Option<String>,
        #[arg(long)]
        trunc: Option<u64>,
    },
    /// Evaluate a named bound formula on natural arguments.
    Bounds {
        name: String,
        args: Vec<u64>,
    },
    /// Decide f ∈ N + (x)^c for N generated by the g's, known modulo (x)^trunc.
    Member {
        #[arg(long)]
        f: String,
        #[arg(long = "g")]
        g: Vec<String>,
        #[arg(long)]
        c: Option<u32>,
        #[arg(long)]
        trunc: Option<u32>,
    },
    /// Order of f in the quotient by the ideal of the g's.
    Ord {
        #[arg(long)]
        f: String,
        #[arg(long = "g")]
        g: Vec<String>,
        #[arg(long)]
        trunc: Option<u32>,
    },
    /// Hilbert–Samuel functions.
    Hs {
        #[arg(value_enum)]
        kind: HsKind,
        #[arg(long = "g")]
        g: Vec<String>,
        #[arg(long, default_value_t = 10)]
        dmax: u32,
    },
    /// Polynomial membership with bounded coefficient degrees.
    Solve {
        #[arg(long)]
        f: String,
        #[arg(long = "g", required = true)]
        g: Vec<String>,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Scan ord(p)/deg(p) over monomials and sampled polynomials.
    Zescan {
        #[arg(long = "g")]
        g: Vec<String>,
        /// Use the log-perturbed ideal (x², y², xy, x + f(z)y).
        #[arg(long)]
        log_preset: bool,
        #[arg(long, default_value_t = 40)]
        series_order: u32,
        #[arg(long, default_value_t = 8)]
        deg_cap: u32,
        /// Truncation degree of the module; 2·deg_cap + 4 by default.
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Determinant of the d×d matrix (1/(d+i−j)).
    Hilbertmat { d: usize },
    /// Gap sequence of a series read from a file or given inline.
    Gaps {
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        series: Option<String>,
        #[arg(long = "C", default_value = "3/2")]
        c: String,
        #[arg(long)]
        trunc: Option<u64>,
    },
    /// Remainder of xy divided by (x − y^a)(y − x^a).
    Kg {
        #[arg(long, default_value_t = 2)]
        a: u32,
        #[arg(long)]
        trunc: Option<u64>,
    },
    /// Division over Q(a, b) checked against the closed-form coefficients.
    KgGeneric {
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long)]
        trunc: Option<u64>,
    },
    /// Run a job file of `key = value` lines.
    Run {
        #[arg(long)]
        job: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AnnOp {
    Sum,
    Product,
    Derivative,
    Compose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum HsKind {
    Psi,
    Phi,
}

/// Ordered `key = value` output, with an optional one-line human summary.
#[derive(Default)]
struct Report {
    fields: Vec<(String, String)>,
    summary: Option<String>,
}

impl Report {
    fn put(&mut self, k: impl Into<String>, v: impl Display) {
        self.fields.push((k.into(), v.to_string()));
    }

    fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match (format, &self.summary) {
            (Format::Human, Some(s)) => {
                out.push_str(s);
                out.push('\n');
            }
            (Format::Human, None) => {
                for (k, v) in &self.fields {
                    out.push_str(&format!("{k}: {v}\n"));
                }
            }
            (Format::Machine, _) => {
                for (k, v) in &self.fields {
                    out.push_str(&format!("{k} = {v}\n"));
                }
            }
        }
        out
    }
}

/// Failure with an exit status: 2 parse, 3 precondition, 4 resource, 1 other.
#[derive(Debug)]
struct Failure {
    category: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            category: e.category(),
            message: e.to_string(),
        }
    }
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure {
            category: "parse",
            message: msg.into(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self.category {
            "parse" => 2,
            "precondition" => 3,
            "resource" => 4,
            _ => 1,
        }
    }
}

type Out = Result<Report, Failure>;

fn default_trunc(given: Option<u64>) -> Result<u64, Failure> {
    let w = match given {
        Some(w) => w,
        None => match std::env::var(TRUNC_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| Failure::usage(format!("{TRUNC_ENV} is not a natural number: {s}")))?,
            Err(_) => DEFAULT_TRUNC,
        },
    };
    if w == 0 {
        return Err(Failure::usage("truncation weight must be at least 1"));
    }
    Ok(w)
}

fn small_trunc(given: Option<u32>) -> Result<u32, Failure> {
    let w = default_trunc(given.map(u64::from))?;
    u32::try_from(w).map_err(|_| Failure::usage("truncation degree too large"))
}

struct Ctx {
    format: Format,
    vars: Option<Vec<String>>,
}

impl Ctx {
    fn names(&self, inputs: &[&str]) -> Result<Vec<String>, Failure> {
        let names = match &self.vars {
            Some(v) => v.clone(),
            None => infer_variables(inputs),
        };
        let mut seen = names.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != names.len() {
            return Err(Failure::usage("variable names must be unique"));
        }
        Ok(names)
    }

    /// Names of the series variables followed by `t`.
    fn names_with_t(&self, inputs: &[&str], t: &str) -> Result<Vec<String>, Failure> {
        let mut names: Vec<String> = self.names(inputs)?.into_iter().filter(|v| v != t).collect();
        names.push(t.to_string());
        Ok(names)
    }

    fn jet_text<F: Field>(&self, j: &Jet<F>, names: &[String]) -> String {
        let body = format_poly(j.body(), names);
        match (self.format, j.is_exact()) {
            (Format::Human, false) => format!("{body} + O(w >= {})", j.trunc()),
            _ => body,
        }
    }
}

fn parse(s: &str, names: &[String]) -> Result<QPoly, Failure> {
    Ok(parse_poly(s, names)?)
}

fn parse_order(s: Option<&str>, n: usize) -> Result<OrderSpec, Failure> {
    let Some(s) = s else {
        return Ok(OrderSpec::uniform(n));
    };
    let ws = s
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Failure::usage(format!("bad order weights `{s}`")))?;
    if ws.len() != n {
        return Err(Error::Dimension { expected: n, got: ws.len() }.into());
    }
    Ok(OrderSpec::new(ws)?)
}

fn axis_index(axis: Option<&str>, names: &[String]) -> Result<usize, Failure> {
    match axis {
        None if names.is_empty() => Err(Failure::usage("no variables")),
        None => Ok(names.len() - 1),
        Some(a) => names
            .iter()
            .position(|v| v == a)
            .ok_or_else(|| Error::UnknownVariable(a.to_string()).into()),
    }
}

fn exact(p: QPoly, o: &OrderSpec) -> Result<QJet, Failure> {
    Ok(Jet::exact(p, o.clone())?)
}

fn cmd_divide(ctx: &Ctx, f: &str, gs: &[String], order: Option<&str>, trunc: Option<u64>) -> Out {
    let mut inputs = vec![f];
    inputs.extend(gs.iter().map(String::as_str));
    let names = ctx.names(&inputs)?;
    let w = default_trunc(trunc)?;
    let order = parse_order(order, names.len())?;
    let fj = exact(parse(f, &names)?, &order)?;
    let gj = gs
        .iter()
        .map(|g| exact(parse(g, &names)?, &order))
        .collect::<Result<Vec<_>, _>>()?;
    let res = ghg_divide(&fj, &gj, &order, w)?;
    let mut r = Report::default();
    r.put("vars", names.join(","));
    r.put("order", &order);
    r.put("trunc", res.trunc_weight);
    r.put("remainder", ctx.jet_text(&res.remainder, &names));
    for (i, q) in res.quotients.iter().enumerate() {
        r.put(format!("quotient.{}", i + 1), ctx.jet_text(q, &names));
        r.put(format!("quotient.{}.trunc", i + 1), q.trunc());
    }
    r.put("steps", res.steps);
    Ok(r)
}

fn cmd_wdiv(ctx: &Ctx, f: &str, g: &str, axis: Option<&str>, trunc: Option<u64>) -> Out {
    let names = ctx.names(&[f, g])?;
    let ax = axis_index(axis, &names)?;
    let w = default_trunc(trunc)?;
    let o = OrderSpec::uniform(names.len());
    let res = weierstrass_divide(&exact(parse(g, &names)?, &o)?, &exact(parse(f, &names)?, &o)?, ax, w)?;
    let mut r = Report::default();
    r.put("vars", names.join(","));
    r.put("axis", &names[ax]);
    r.put("degree", res.degree);
    r.put("grading", res.quotient.order());
    r.put("trunc", res.trunc_weight);
    r.put("quotient", ctx.jet_text(&res.quotient, &names));
    r.put("quotient.trunc", res.quotient.trunc());
    r.put("remainder", ctx.jet_text(&res.remainder, &names));
    Ok(r)
}

fn cmd_prep(ctx: &Ctx, f: &str, axis: Option<&str>, trunc: Option<u64>) -> Out {
    let names = ctx.names(&[f])?;
    let ax = axis_index(axis, &names)?;
    let w = default_trunc(trunc)?;
    let o = OrderSpec::uniform(names.len());
    let res = weierstrass_prepare(&exact(parse(f, &names)?, &o)?, ax, w)?;
    let mut r = Report::default();
    r.put("vars", names.join(","));
    r.put("axis", &names[ax]);
    r.put("degree", res.degree);
    r.put("grading", res.unit.order());
    r.put("trunc", res.unit.trunc());
    r.put("unit", ctx.jet_text(&res.unit, &names));
    r.put("wpoly", ctx.jet_text(&res.wpoly, &names));
    r.put("wpoly.trunc", res.wpoly.trunc());
    Ok(r)
}

/// Scale to integer coefficients with gcd one.
fn integral(p: &QPoly) -> QPoly {
    let den = p.terms().fold(BigInt::one(), |d, (_, c)| d.lcm(c.denom()));
    let g = p
        .terms()
        .fold(BigInt::zero(), |g, (_, c)| g.gcd(&(c.clone() * Rational::from_integer(den.clone())).to_integer()));
    if g.is_zero() {
        return p.clone();
    }
    p.scale(&Rational::new(den, g))
}

fn ann_report(r: &mut Report, a: &AnnPoly<Rational>, names: &[String]) {
    r.put("annihilator", format_poly(&integral(&a.to_poly()), names));
    r.put("height", a.height());
    r.put("degree", a.degree());
}

fn cmd_lift(ctx: &Ctx, p: &str, c0: &str, tvar: &str, trunc: Option<u64>) -> Out {
    let names = ctx.names_with_t(&[p], tvar)?;
    let w = default_trunc(trunc)?;
    let ann = AnnPoly::from_poly(&parse(p, &names)?, false)?;
    let s = newton_lift(&ann, &parse_rational(c0)?, w)?;
    let series_names = &names[..names.len() - 1];
    let mut r = Report::default();
    r.put("vars", series_names.join(","));
    r.put("trunc", s.jet.trunc());
    r.put("series", ctx.jet_text(&s.jet, series_names));
    ann_report(&mut r, &s.ann, &names);
    r.put("certified", s.certified);
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn cmd_annihilate(
    ctx: &Ctx,
    op: AnnOp,
    p: &str,
    q: Option<&str>,
    tvar: &str,
    c0: &str,
    var: Option<&str>,
    trunc: Option<u64>,
) -> Out {
    let need_q = || q.ok_or_else(|| Failure::usage("this operation needs --q"));
    let mut r = Report::default();
    match op {
        AnnOp::Sum | AnnOp::Product => {
            let q = need_q()?;
            let names = ctx.names_with_t(&[p, q], tvar)?;
            let pa = AnnPoly::from_poly(&parse(p, &names)?, false)?;
            let qa = AnnPoly::from_poly(&parse(q, &names)?, false)?;
            let out = if op == AnnOp::Sum {
                annihilator_sum(&pa, &qa)?
            } else {
                annihilator_product(&pa, &qa)?
            };
            ann_report(&mut r, &out, &names);
        }
        AnnOp::Derivative => {
            let names = ctx.names_with_t(&[p], tvar)?;
            let ax = axis_index(var, &names[..names.len() - 1])?;
            let pa = AnnPoly::from_poly(&parse(p, &names)?, false)?;
            let s = newton_lift(&pa, &parse_rational(c0)?, default_trunc(trunc)?)?;
            ann_report(&mut r, &annihilator_derivative(&s, ax)?, &names);
        }
        AnnOp::Compose => {
            let q = need_q()?;
            let y = var.unwrap_or("y");
            let mut names = ctx.names_with_t(&[p, q], tvar)?;
            names.retain(|v| v != y);
            let t = names.pop().expect("t is present");
            let mut pnames = names.clone();
            pnames.push(y.to_string());
            pnames.push(t.clone());
            names.push(t);
            let pa = AnnPoly::from_poly(&parse(p, &pnames)?, false)?;
            let qa = AnnPoly::from_poly(&parse(q, &names)?, false)?;
            ann_report(&mut r, &annihilator_compose(&pa, &qa)?, &names);
        }
    }
    Ok(r)
}

fn bound_args<const N: usize>(name: &str, args: &[u64]) -> Result<[u64; N], Failure> {
    <[u64; N]>::try_from(args)
        .map_err(|_| Failure::usage(format!("bound `{name}` takes {N} arguments, got {}", args.len())))
}

fn cmd_bounds(name: &str, args: &[u64]) -> Out {
    let mut r = Report::default();
    let mut single = |v: BoundNat| {
        r.put("value", &v);
        r.summary = Some(v.to_string());
    };
    let need_some = || {
        if args.is_empty() {
            Err(Failure::usage(format!("bound `{name}` needs arguments")))
        } else {
            Ok(())
        }
    };
    match name {
        "hermann" => {
            let [n, p, d, degf] = bound_args(name, args)?;
            single(bounds::b_hermann(n, p, d, degf)?);
        }
        "lincomb-deg" => {
            need_some()?;
            single(bounds::b_lincomb_deg(args)?);
        }
        "lincomb-h" => {
            if args.len() < 4 {
                return Err(Failure::usage("lincomb-h takes p, maxHα, maxHa, degs..."));
            }
            single(bounds::b_lincomb_h(args[0], &args[3..], args[1], args[2])?);
        }
        "shift-h" => {
            let [h, d, ha] = bound_args(name, args)?;
            single(bounds::b_shift_h(h, d, ha));
        }
        "prod-deg" => {
            need_some()?;
            single(bounds::b_prod_deg(args)?);
        }
        "prod-h" => {
            if args.len() < 3 {
                return Err(Failure::usage("prod-h takes p, maxH, degs..."));
            }
            single(bounds::b_prod_h(args[0], &args[2..], args[1])?);
        }
        "root" => {
            let [h] = bound_args(name, args)?;
            let b = bounds::b_root(h)?;
            r.put("height", &b.height);
            r.put("degree", &b.degree);
            r.put("field_degree", &b.field_degree);
        }
        "compose-h" => {
            let [hg, ha, da] = bound_args(name, args)?;
            single(bounds::b_compose_h(hg, ha, da));
        }
        "compose-deg" => {
            let [dg, da] = bound_args(name, args)?;
            single(bounds::b_compose_deg(dg, da));
        }
        "derivative-h" => {
            let [h, d] = bound_args(name, args)?;
            single(bounds::b_derivative_h(h, d)?);
        }
        "derivative-deg" => {
            let [d] = bound_args(name, args)?;
            single(bounds::b_derivative_deg(d));
        }
        "power-subst" => {
            let [h, q] = bound_args(name, args)?;
            let (lo, hi) = bounds::b_power_subst(h, q);
            r.put("lower", lo);
            r.put("upper", hi);
        }
        "extraction-h" => {
            let [h, d, q, p, e] = bound_args(name, args)?;
            single(bounds::b_extraction_h(h, d, q, p, e)?);
        }
        "extraction-deg" => {
            let [d, rr] = bound_args(name, args)?;
            single(bounds::b_extraction_deg(d, rr)?);
        }
        "wprep" => {
            let [h, d] = bound_args(name, args)?;
            let (hp, dp) = bounds::b_wprep(h, d)?;
            r.put("height", hp);
            r.put("degree", dp);
        }
        "wdiv-sep" => {
            let [hf, d, hg, dg] = bound_args(name, args)?;
            let b = bounds::b_wdiv_sep(hf, d, hg, dg)?;
            r.put("h_ri", b.h_ri);
            r.put("h_r", b.h_r);
            r.put("deg_r", b.deg_r);
        }
        "lemma-tech" => {
            let [d, a, eps] = bound_args(name, args)?;
            single(BoundNat::from(bounds::b_lemma_tech(d, a, eps)?));
        }
        other => {
            let known: Vec<&str> = bounds::SYMBOLIC_SHAPES.iter().map(|s| s.0).collect();
            return Err(Failure::usage(format!(
                "unknown bound `{other}`; computable: hermann, lincomb-deg, lincomb-h, shift-h, prod-deg, prod-h, root, compose-h, compose-deg, derivative-h, derivative-deg, power-subst, extraction-h, extraction-deg, wprep, wdiv-sep, lemma-tech; symbolic only: {}",
                known.join(", ")
            )));
        }
    }
    Ok(r)
}

fn ideal_module(ctx: &Ctx, f: &str, gs: &[String], d: u32) -> Result<(Vec<String>, TruncatedSubmodule<Rational>, QJet), Failure> {
    let mut inputs = vec![f];
    inputs.extend(gs.iter().map(String::as_str));
    let names = ctx.names(&inputs)?;
    let o = OrderSpec::uniform(names.len());
    let gens = gs
        .iter()
        .map(|g| exact(parse(g, &names)?, &o))
        .collect::<Result<Vec<_>, _>>()?;
    let m = TruncatedSubmodule::ideal(names.len(), gens, d)?;
    let fj = exact(parse(f, &names)?, &o)?;
    Ok((names, m, fj))
}

fn cmd_member(ctx: &Ctx, f: &str, gs: &[String], c: Option<u32>, trunc: Option<u32>) -> Out {
    let d = small_trunc(trunc)?;
    let c = c.unwrap_or(d);
    let (names, m, fj) = ideal_module(ctx, f, gs, d)?;
    let mut r = Report::default();
    r.put("trunc_degree", d);
    r.put("c", c);
    match m.membership_mod(&VectorJet::scalar(fj), c)? {
        Membership::Member { coefficients } => {
            r.put("member", true);
            for (i, a) in coefficients.iter().enumerate() {
                r.put(format!("coefficient.{}", i + 1), ctx.jet_text(a, &names));
            }
        }
        Membership::NonMember { obstruction_degree } => {
            r.put("member", false);
            r.put("obstruction_degree", obstruction_degree);
        }
    }
    Ok(r)
}

fn cmd_ord(ctx: &Ctx, f: &str, gs: &[String], trunc: Option<u32>) -> Out {
    let d = small_trunc(trunc)?;
    let (_, m, fj) = ideal_module(ctx, f, gs, d)?;
    let o = m.ord_quotient(&VectorJet::scalar(fj))?;
    let mut r = Report::default();
    r.put("ord", o);
    r.put("trunc_degree", d);
    Ok(r)
}

fn profile_report(r: &mut Report, name: &str, p: &HSProfile) {
    for (d, v) in &p.values {
        r.put(format!("{name}({d})"), v);
    }
    match p.fitted_degree {
        Some(k) => r.put("fitted_degree", k),
        None => r.put("fitted_degree", "none"),
    }
}

fn cmd_hs(ctx: &Ctx, kind: HsKind, gs: &[String], dmax: u32) -> Out {
    let inputs: Vec<&str> = gs.iter().map(String::as_str).collect();
    let names = ctx.names(&inputs)?;
    if names.is_empty() {
        return Err(Failure::usage("no variables: pass --vars"));
    }
    let polys = gs.iter().map(|g| parse(g, &names)).collect::<Result<Vec<_>, _>>()?;
    let mut r = Report::default();
    r.put("vars", names.join(","));
    match kind {
        HsKind::Psi => {
            let o = OrderSpec::uniform(names.len());
            let jets = polys.into_iter().map(|p| exact(p, &o)).collect::<Result<Vec<_>, _>>()?;
            profile_report(&mut r, "psi", &psi_profile(names.len(), &jets, dmax)?);
        }
        HsKind::Phi => profile_report(&mut r, "phi", &phi_profile(names.len(), &polys, dmax)?),
    }
    Ok(r)
}

fn cmd_solve(ctx: &Ctx, f: &str, gs: &[String], cap: Option<u64>) -> Out {
    let mut inputs = vec![f];
    inputs.extend(gs.iter().map(String::as_str));
    let names = ctx.names(&inputs)?;
    let fp = parse(f, &names)?;
    let gens = gs
        .iter()
        .map(|g| Ok(vec![parse(g, &names)?]))
        .collect::<Result<Vec<_>, Failure>>()?;
    let cap = hermann_cap(std::slice::from_ref(&fp), &gens, cap)?;
    let mut r = Report::default();
    r.put("cap", cap);
    match hermann_solve(&[fp], &gens, cap)? {
        Some(a) => {
            r.put("solvable", true);
            for (i, ai) in a.iter().enumerate() {
                r.put(format!("coefficient.{}", i + 1), format_poly(ai, &names));
            }
        }
        None => r.put("solvable", false),
    }
    Ok(r)
}

#[allow(clippy::too_many_arguments)]
fn cmd_zescan(
    ctx: &Ctx,
    gs: &[String],
    log_preset: bool,
    series_order: u32,
    deg_cap: u32,
    depth: Option<u32>,
    seed: u64,
    samples: usize,
) -> Out {
    let d = depth.unwrap_or(2 * deg_cap + 4);
    let (names, m) = if log_preset {
        (vec!["x".to_string(), "y".into(), "z".into()], log_perturbed_module(series_order, d)?)
    } else {
        let inputs: Vec<&str> = gs.iter().map(String::as_str).collect();
        let names = ctx.names(&inputs)?;
        if names.is_empty() {
            return Err(Failure::usage("no variables: pass --vars"));
        }
        let o = OrderSpec::uniform(names.len());
        let gens = gs
            .iter()
            .map(|g| exact(parse(g, &names)?, &o))
            .collect::<Result<Vec<_>, _>>()?;
        let m = TruncatedSubmodule::ideal(names.len(), gens, d)?;
        (names, m)
    };
    let sampler = ScanSampler { seed, samples, coeff_bound: 3 };
    let rep = zero_estimate_scan(&m, deg_cap, &sampler, &[])?;
    let mut r = Report::default();
    r.put("seed", rep.seed);
    r.put("trunc_degree", d);
    r.put("checked", rep.checked);
    match &rep.max_ratio {
        Some(q) => r.put("max_ratio", format_rational(q)),
        None => r.put("max_ratio", "none"),
    }
    if let Some(w) = &rep.witness {
        r.put("witness", format_poly(&w.poly, &names));
        r.put("witness_degree", w.degree);
        r.put("witness_ord", w.ord);
    }
    r.put("saturated", rep.saturated.len());
    Ok(r)
}

fn cmd_hilbertmat(d: usize) -> Out {
    let (det, ok) = hilbert_matrix_check(d)?;
    let mut r = Report::default();
    r.put("det", format_rational(&det));
    r.put("nonsingular", ok);
    r.summary = Some(format!(
        "det = {}, {}",
        format_rational(&det),
        if ok { "nonsingular" } else { "singular" }
    ));
    Ok(r)
}

fn strip_big_o(s: &str) -> (&str, Option<u64>) {
    if let Some(i) = s.find("+ O(") {
        let tail = &s[i..];
        let w = tail
            .trim_start_matches("+ O(")
            .trim_start_matches("w >=")
            .trim()
            .trim_end_matches(')')
            .trim()
            .parse()
            .ok();
        (s[..i].trim(), w)
    } else {
        (s.trim(), None)
    }
}

fn cmd_gaps(ctx: &Ctx, input: Option<&str>, series: Option<&str>, c: &str, trunc: Option<u64>) -> Out {
    let text = match (input, series) {
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| Failure { category: "precondition", message: format!("{path}: {e}") })?,
        (None, Some(s)) => s.to_string(),
        _ => return Err(Failure::usage("pass exactly one of --input and --series")),
    };
    let (body, w_text) = strip_big_o(&text);
    let names = ctx.names(&[body])?;
    let p = parse(body, &names)?;
    let w = trunc.or(w_text).unwrap_or(EXACT);
    let o = OrderSpec::uniform(names.len());
    let jet = Jet::new(p, o, w)?;
    let rep = gap_sequence(&jet)?;
    let cval = parse_rational(c)?;
    let hadamard = hadamard_test(&rep, &cval)?;
    let list = |v: Vec<String>| format!("[{}]", v.join(", "));
    let mut r = Report::default();
    r.put("degrees", list(rep.degrees.iter().map(|d| d.to_string()).collect()));
    r.put("ratios", list(rep.ratios.iter().map(format_rational).collect()));
    let opt = |q: &Option<Rational>| q.as_ref().map_or("none".to_string(), format_rational);
    r.put("max_ratio", opt(&rep.max_ratio));
    r.put("min_ratio", opt(&rep.min_ratio));
    r.put("window", rep.ratios.len());
    if rep.truncation == EXACT {
        r.put("truncation", "exact");
    } else {
        r.put("truncation", rep.truncation);
    }
    r.put("C", format_rational(&cval));
    r.put("hadamard", hadamard);
    Ok(r)
}

fn cmd_kg(ctx: &Ctx, a: u32, trunc: Option<u64>) -> Out {
    let w = default_trunc(trunc)?;
    let res = kg_divide(&xy(), a, w)?;
    let oracle = kg_remainder_oracle(a, w)?;
    let names = vec!["x".to_string(), "y".to_string()];
    let mut r = Report::default();
    r.put("a", a);
    r.put("trunc", res.trunc_weight);
    r.put("remainder", ctx.jet_text(&res.remainder, &names));
    r.put("matches_closed_form", res.remainder.body() == oracle.symmetric.body());
    let rep = gap_sequence(&res.remainder)?;
    r.put("max_ratio", rep.max_ratio.as_ref().map_or("none".into(), format_rational));
    Ok(r)
}

fn cmd_kg_generic(ctx: &Ctx, k: u32, trunc: Option<u64>) -> Out {
    let _ = ctx;
    let w = default_trunc(trunc)?;
    let rep = kg_generic_divide(k, w)?;
    let params = ["a", "b"];
    let mut r = Report::default();
    r.put("k", k);
    r.put("trunc", rep.trunc);
    for (l, got, _) in &rep.x_coefficients {
        if !got.is_zero() {
            let text = if got.is_polynomial() {
                format_poly(got.numerator(), &params)
            } else {
                got.to_string()
            };
            r.put(format!("r_{l}"), text);
        }
    }
    let mism: Vec<String> = rep.mismatches.iter().map(|l| l.to_string()).collect();
    r.put("mismatches", format!("[{}]", mism.join(", ")));
    r.put("symmetric", rep.symmetric);
    if let Some(s) = rep.specialization_agrees {
        r.put("specialization_agrees", s);
    }
    r.put("matches", rep.matches());
    Ok(r)
}

/// Turn a job file into command-line arguments: `command = name` selects the
/// subcommand, `args = ...` supplies positional arguments, `format` and
/// `vars` are global, and every other key becomes `--key value`.
fn job_to_args(text: &str) -> Result<Vec<String>, Failure> {
    let mut command = None;
    let mut global = Vec::new();
    let mut rest = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Failure::usage(format!("job line {}: expected `key = value`", no + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        match k {
            "command" => command = Some(v.to_string()),
            "args" => rest.extend(v.split_whitespace().map(String::from)),
            "format" | "vars" | "variables" => {
                global.push(if k == "format" { "--format".into() } else { "--vars".into() });
                global.push(v.to_string());
            }
            "run" | "job" => return Err(Failure::usage("job files cannot nest")),
            _ if v.eq_ignore_ascii_case("true") && is_flag(k) => rest.push(format!("--{k}")),
            _ => {
                rest.push(format!("--{k}"));
                rest.push(v.to_string());
            }
        }
    }
    let command = command.ok_or_else(|| Failure::usage("job file has no `command` line"))?;
    if command == "run" {
        return Err(Failure::usage("job files cannot nest"));
    }
    let mut args = vec!["algps".to_string()];
    args.extend(global);
    args.push(command);
    args.extend(rest);
    Ok(args)
}

fn is_flag(k: &str) -> bool {
    k == "log-preset"
}

fn dispatch(cli: Cli) -> Result<(Format, Report), Failure> {
    let ctx = Ctx {
        format: cli.format,
        vars: cli
            .vars
            .as_ref()
            .map(|v| v.split(',').map(|s| s.trim().to_string()).collect()),
    };
    let report = match cli.command {
        Command::Divide { f, g, order, trunc } => cmd_divide(&ctx, &f, &g, order.as_deref(), trunc),
        Command::Wdiv { f, g, axis, trunc } => cmd_wdiv(&ctx, &f, &g, axis.as_deref(), trunc),
        Command::Prep { f, axis, trunc } => cmd_prep(&ctx, &f, axis.as_deref(), trunc),
        Command::Lift { p, c0, tvar, trunc } => cmd_lift(&ctx, &p, &c0, &tvar, trunc),
        Command::Annihilate { op, p, q, tvar, c0, var, trunc } => {
            cmd_annihilate(&ctx, op, &p, q.as_deref(), &tvar, &c0, var.as_deref(), trunc)
        }
        Command::Bounds { name, args } => cmd_bounds(&name, &args),
        Command::Member { f, g, c, trunc } => cmd_member(&ctx, &f, &g, c, trunc),
        Command::Ord { f, g, trunc } => cmd_ord(&ctx, &f, &g, trunc),
        Command::Hs { kind, g, dmax } => cmd_hs(&ctx, kind, &g, dmax),
        Command::Solve { f, g, cap } => cmd_solve(&ctx, &f, &g, cap),
        Command::Zescan { g, log_preset, series_order, deg_cap, depth, seed, samples } => {
            cmd_zescan(&ctx, &g, log_preset, series_order, deg_cap, depth, seed, samples)
        }
        Command::Hilbertmat { d } => cmd_hilbertmat(d),
        Command::Gaps { input, series, c, trunc } => {
            cmd_gaps(&ctx, input.as_deref(), series.as_deref(), &c, trunc)
        }
        Command::Kg { a, trunc } => cmd_kg(&ctx, a, trunc),
        Command::KgGeneric { k, trunc } => cmd_kg_generic(&ctx, k, trunc),
        Command::Run { job } => {
            let text = std::fs::read_to_string(&job)
                .map_err(|e| Failure { category: "precondition", message: format!("{job}: {e}") })?;
            let args = job_to_args(&text)?;
            let mut inner = Cli::try_parse_from(&args).map_err(|e| Failure::usage(e.to_string()))?;
            if !args.iter().any(|a| a == "--format") {
                inner.format = cli.format;
            }
            if inner.vars.is_none() {
                inner.vars = cli.vars;
            }
            return dispatch(inner);
        }
    }?;
    Ok((ctx.format, report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok((format, report)) => {
            print!("{}", report.render(format));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error[{}]: {}", f.category, f.message);
            ExitCode::from(f.exit_code())
        }
    }
}
