//! Rational functions on P^1 and one-dimensional Weil reciprocity.
//!
//! This is a fully independent code path from the surface machinery:
//! places are monic irreducible polynomials plus infinity, and the tame
//! symbol at a finite place is computed inside the quotient ring
//! F_q[x]/(pi) with the norm taken by multiplying Frobenius conjugates
//! there. Curve-reciprocity tests on lines cross-check against this.

use std::fmt;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::homog::HPoly;
use crate::poly::{factor, multiplicity, Poly};
use crate::surface::{Curve, RationalFunction};

/// A rational function on P^1 with coprime numerator and denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunc1 {
    num: Poly,
    den: Poly,
}

impl fmt::Display for RationalFunc1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}

impl RationalFunc1 {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunc1> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::ZeroInput("zero rational function on P^1".into()));
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g);
        let den = den.div_exact(&g);
        let scale = den.leading().inv()?;
        Ok(RationalFunc1 {
            num: num.scale(&scale),
            den: den.scale(&scale),
        })
    }

    pub fn parse(field: &Fq, input: &str) -> Result<RationalFunc1> {
        let mut depth = 0i32;
        let mut split = None;
        for (k, ch) in input.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                '/' if depth == 0 => {
                    if split.is_some() {
                        return Err(Error::Parse("multiple top-level '/'".into()));
                    }
                    split = Some(k);
                }
                _ => {}
            }
        }
        match split {
            Some(k) => RationalFunc1::new(
                parse_poly1(field, &input[..k])?,
                parse_poly1(field, &input[k + 1..])?,
            ),
            None => RationalFunc1::new(parse_poly1(field, input)?, Poly::one(field)),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
    pub fn field(&self) -> &Fq {
        self.num.field()
    }
}

/// Parse a univariate polynomial in x, e.g. "1 - x" or "x^2 + 3*x".
pub fn parse_poly1(field: &Fq, input: &str) -> Result<Poly> {
    let mut p = P1Parser {
        field: field.clone(),
        chars: input.chars().peekable(),
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.chars.peek().is_some() {
        return Err(Error::Parse(format!("trailing input in '{input}'")));
    }
    Ok(poly)
}

struct P1Parser<'a> {
    field: Fq,
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl<'a> P1Parser<'a> {
    fn skip_ws(&mut self) {
        while self.chars.peek().map_or(false, |c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        self.skip_ws();
        let mut sign = 1i64;
        if let Some('-') = self.chars.peek() {
            self.chars.next();
            sign = -1;
        }
        let mut acc = Poly::zero(&self.field);
        loop {
            let mut term = self.term()?;
            if sign == -1 {
                term = term.neg();
            }
            acc = acc.add(&term);
            self.skip_ws();
            match self.chars.peek() {
                Some('+') => {
                    self.chars.next();
                    sign = 1;
                }
                Some('-') => {
                    self.chars.next();
                    sign = -1;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if let Some('*') = self.chars.peek() {
                self.chars.next();
                acc = acc.mul(&self.factor()?);
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        self.skip_ws();
        let base = match self.chars.peek() {
            Some('(') => {
                self.chars.next();
                let inner = self.expr()?;
                self.skip_ws();
                if self.chars.next() != Some(')') {
                    return Err(Error::Parse("unclosed parenthesis".into()));
                }
                inner
            }
            Some('x') => {
                self.chars.next();
                Poly::x(&self.field)
            }
            Some(c) if c.is_ascii_digit() => {
                let mut n = String::new();
                while self.chars.peek().map_or(false, |c| c.is_ascii_digit()) {
                    n.push(self.chars.next().unwrap());
                }
                let v: i64 = n.parse().map_err(|_| Error::Parse(format!("bad number {n}")))?;
                Poly::constant(self.field.from_int(v))
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character {other:?} in polynomial"
                )))
            }
        };
        self.skip_ws();
        if let Some('^') = self.chars.peek() {
            self.chars.next();
            self.skip_ws();
            let mut n = String::new();
            while self.chars.peek().map_or(false, |c| c.is_ascii_digit()) {
                n.push(self.chars.next().unwrap());
            }
            let e: u32 = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {n}")))?;
            let mut acc = Poly::one(&self.field);
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }
}

/// A place of P^1: a monic irreducible polynomial or infinity.
#[derive(Clone, Debug, PartialEq)]
pub enum Place1 {
    Finite(Poly),
    Infinity,
}

impl fmt::Display for Place1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place1::Finite(p) => write!(f, "pi={p:?}"),
            Place1::Infinity => write!(f, "infinity"),
        }
    }
}

/// All places where either function has a zero or pole.
pub fn support(fs: &[&RationalFunc1]) -> Vec<Place1> {
    let field = fs[0].field().clone();
    let mut finite: Vec<Poly> = Vec::new();
    for f in fs {
        for part in [f.num(), f.den()] {
            if part.degree() == 0 {
                continue;
            }
            let (_, factors) = factor(part);
            for (pi, _) in factors {
                if !finite.contains(&pi) {
                    finite.push(pi);
                }
            }
        }
    }
    finite.sort_by(|a, b| {
        (a.degree(), coeff_codes(a)).cmp(&(b.degree(), coeff_codes(b)))
    });
    let mut out: Vec<Place1> = finite.into_iter().map(Place1::Finite).collect();
    out.push(Place1::Infinity);
    let _ = field;
    out
}

fn coeff_codes(p: &Poly) -> Vec<u128> {
    p.coeffs().iter().map(|c| c.code()).collect()
}

pub fn order_at(f: &RationalFunc1, place: &Place1) -> i64 {
    match place {
        Place1::Finite(pi) => {
            multiplicity(f.num(), pi) as i64 - multiplicity(f.den(), pi) as i64
        }
        Place1::Infinity => f.den().degree() as i64 - f.num().degree() as i64,
    }
}

/// The unit part of f at a finite place, as a residue in F_q[x]/(pi).
fn unit_part_mod(f: &RationalFunc1, pi: &Poly) -> Result<Poly> {
    let strip = |p: &Poly| -> Poly {
        let mut p = p.clone();
        while multiplicity(&p, pi) > 0 {
            p = p.div_exact(pi);
        }
        p
    };
    let n = strip(f.num()).rem(pi);
    let d = strip(f.den()).rem(pi);
    // inverse mod pi by Fermat in the residue field of size q^deg
    let field = pi.field();
    let size = field.q().pow(pi.degree() as u32);
    let d_inv = d.pow_mod(size - 2, pi);
    Ok(n.mul(&d_inv).rem(pi))
}

/// Norm from F_q[x]/(pi) down to F_q: the product of the Frobenius
/// conjugates inside the quotient ring.
fn norm_mod(a: &Poly, pi: &Poly) -> Result<FqElem> {
    let field = pi.field().clone();
    let q = field.q();
    let d = pi.degree();
    let mut acc = a.rem(pi);
    let mut conj = a.rem(pi);
    for _ in 1..d {
        conj = conj.pow_mod(q, pi);
        acc = acc.mul(&conj).rem(pi);
    }
    if acc.is_zero() {
        return Ok(field.zero());
    }
    if acc.degree() != 0 {
        return Err(Error::InvalidInput(
            "internal: norm did not land in the base field".into(),
        ));
    }
    Ok(acc.coeff(0))
}

/// N(tame symbol of (f, g)) at a place, a value in F_q^x.
pub fn tame1_at(f: &RationalFunc1, g: &RationalFunc1, place: &Place1) -> Result<FqElem> {
    let field = f.field().clone();
    let a = order_at(f, place);
    let b = order_at(g, place);
    match place {
        Place1::Infinity => {
            // uniformizer 1/x; the unit part's value is the ratio of
            // leading coefficients
            let sign = field.from_int(if (a * b) % 2 == 0 { 1 } else { -1 });
            let uf = f.num().leading().mul(&f.den().leading().inv()?);
            let ug = g.num().leading().mul(&g.den().leading().inv()?);
            Ok(sign.mul(&uf.pow(b)?).mul(&ug.pow(-a)?))
        }
        Place1::Finite(pi) => {
            // the sign lives in the residue field GF(q^deg), so the norm
            // turns it into (-1)^(a b deg)
            let d = pi.degree() as i64;
            let sign = field.from_int(if (a * b * d) % 2 == 0 { 1 } else { -1 });
            let uf = unit_part_mod(f, pi)?;
            let ug = unit_part_mod(g, pi)?;
            let size = field.q().pow(pi.degree() as u32);
            let pow_signed = |u: &Poly, e: i64| -> Poly {
                if e >= 0 {
                    u.pow_mod(e as u128, pi)
                } else {
                    u.pow_mod(size - 2, pi).pow_mod((-e) as u128, pi)
                }
            };
            let val = pow_signed(&uf, b).mul(&pow_signed(&ug, -a)).rem(pi);
            Ok(sign.mul(&norm_mod(&val, pi)?))
        }
    }
}

/// Weil reciprocity on P^1: the product of normed tame symbols over all
/// places of the support. Returns the per-place terms and the product.
pub fn weil_product(
    f: &RationalFunc1,
    g: &RationalFunc1,
) -> Result<(Vec<(Place1, FqElem)>, FqElem)> {
    let field = f.field().clone();
    let mut terms = Vec::new();
    let mut product = field.one();
    for place in support(&[f, g]) {
        let v = tame1_at(f, g, &place)?;
        product = product.mul(&v);
        terms.push((place, v));
    }
    Ok((terms, product))
}

/// Degree of the divisor of f: must vanish (used as the degree-sum
/// oracle for restrictions to a line).
pub fn divisor_degree(f: &RationalFunc1) -> i64 {
    let mut total = 0i64;
    for place in support(&[f]) {
        let d = match &place {
            Place1::Finite(pi) => pi.degree() as i64,
            Place1::Infinity => 1,
        };
        total += d * order_at(f, &place);
    }
    total
}

/// Restrict a rational function on P^2 to a line, via the deterministic
/// degree-one parametrization of the line.
pub fn restrict_to_line(f: &RationalFunction, line: &Curve) -> Result<RationalFunc1> {
    if line.degree() != 1 {
        return Err(Error::InvalidInput("restriction target must be a line".into()));
    }
    let field = f.field().clone();
    if f.num().multiplicity_of(line.poly()) > 0 || f.den().multiplicity_of(line.poly()) > 0 {
        return Err(Error::CurveInSupport);
    }
    // line coefficients a X + b Y + c Z
    let mut abc = [field.zero(), field.zero(), field.zero()];
    for (e, coeff) in line.poly().terms() {
        let var = (0..3).find(|&v| e[v] == 1).unwrap();
        abc[var] = coeff.clone();
    }
    // two independent kernel vectors, deterministically
    let pivot = (0..3).find(|&v| !abc[v].is_zero()).unwrap();
    let others: Vec<usize> = (0..3).filter(|&v| v != pivot).collect();
    let mut p0 = [field.zero(), field.zero(), field.zero()];
    let mut p1 = [field.zero(), field.zero(), field.zero()];
    let inv = abc[pivot].inv()?;
    p0[others[0]] = field.one();
    p0[pivot] = abc[others[0]].mul(&inv).neg();
    p1[others[1]] = field.one();
    p1[pivot] = abc[others[1]].mul(&inv).neg();
    let num = substitute_line(f.num(), &p0, &p1)?;
    let den = substitute_line(f.den(), &p0, &p1)?;
    RationalFunc1::new(num, den)
}

/// Evaluate a form at s*P0 + P1 (the affine part of the parametrized
/// line), producing a univariate polynomial in s.
fn substitute_line(h: &HPoly, p0: &[FqElem; 3], p1: &[FqElem; 3]) -> Result<Poly> {
    let field = h.field().clone();
    // linear polynomials s*p0[v] + p1[v]
    let lin: Vec<Poly> = (0..3)
        .map(|v| {
            Poly::from_coeffs(&field, vec![p1[v].clone(), p0[v].clone()])
        })
        .collect();
    let mut acc = Poly::zero(&field);
    for (e, c) in h.terms() {
        let mut term = Poly::constant(c.clone());
        for v in 0..3 {
            for _ in 0..e[v] {
                term = term.mul(&lin[v]);
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fq {
        Fq::make(5, 1).unwrap()
    }

    #[test]
    fn steinberg_pair_weil() {
        let f = f5();
        let a = RationalFunc1::parse(&f, "x").unwrap();
        let b = RationalFunc1::parse(&f, "1 - x").unwrap();
        let (terms, product) = weil_product(&a, &b).unwrap();
        assert!(product.is_one());
        // places 0, 1, infinity
        assert_eq!(terms.len(), 3);
    }

    #[test]
    fn equal_arguments_weil() {
        let f = f5();
        let a = RationalFunc1::parse(&f, "(x^2 + 2)/(x - 1)").unwrap();
        let (_, product) = weil_product(&a, &a).unwrap();
        assert!(product.is_one());
    }

    #[test]
    fn constant_argument_weil() {
        let f = f5();
        let c = RationalFunc1::parse(&f, "3").unwrap();
        let g = RationalFunc1::parse(&f, "(x^2 + x + 1)/(x^3 - 2)").unwrap();
        let (_, product) = weil_product(&c, &g).unwrap();
        // c^deg(div g) = c^0 = 1
        assert!(product.is_one());
    }

    #[test]
    fn random_pairs_weil() {
        use rand::{Rng, SeedableRng};
        let f = f5();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(91);
        for _ in 0..50 {
            let num1 = Poly::from_fn(&f, rng.gen_range(1..4), |_| f.sample(&mut rng));
            let den1 = Poly::from_fn(&f, rng.gen_range(0..3), |_| f.sample(&mut rng));
            let num2 = Poly::from_fn(&f, rng.gen_range(1..4), |_| f.sample(&mut rng));
            let den2 = Poly::from_fn(&f, rng.gen_range(0..3), |_| f.sample(&mut rng));
            if num1.is_zero() || den1.is_zero() || num2.is_zero() || den2.is_zero() {
                continue;
            }
            let a = RationalFunc1::new(num1, den1).unwrap();
            let b = RationalFunc1::new(num2, den2).unwrap();
            let (terms, product) = weil_product(&a, &b).unwrap();
            assert!(product.is_one(), "Weil product failed: {terms:?}");
        }
    }

    #[test]
    fn divisor_degree_zero() {
        let f = f5();
        let a = RationalFunc1::parse(&f, "(x^2 + 2)/(x^2 - x)").unwrap();
        assert_eq!(divisor_degree(&a), 0);
        let b = RationalFunc1::parse(&f, "x^3 + x + 1").unwrap();
        assert_eq!(divisor_degree(&b), 0); // pole of order 3 at infinity
    }

    #[test]
    fn restriction_to_line() {
        let f = f5();
        let line = Curve::parse(&f, "Y").unwrap();
        let func = RationalFunction::parse(&f, "X/Z").unwrap();
        let restricted = restrict_to_line(&func, &line).unwrap();
        // the divisor of the restriction has degree zero
        assert_eq!(divisor_degree(&restricted), 0);
        // restriction is multiplicative
        let func2 = RationalFunction::parse(&f, "(X + 2*Z)/(X + Y + Z)").unwrap();
        let r2 = restrict_to_line(&func2, &line).unwrap();
        let prod = restrict_to_line(&func.mul(&func2).unwrap(), &line).unwrap();
        let lhs = prod.num().mul(r2.den()).mul(restricted.den());
        let rhs = prod.den().mul(r2.num()).mul(restricted.num());
        assert_eq!(lhs.monic(), rhs.monic());
        // a function supported on the line is rejected
        let bad = RationalFunction::parse(&f, "Y/Z").unwrap();
        assert!(matches!(
            restrict_to_line(&bad, &line),
            Err(Error::CurveInSupport)
        ));
    }
}
