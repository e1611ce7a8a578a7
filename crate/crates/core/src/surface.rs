//! The global model: P^2 over F_q. Rational functions, irreducible
//! curves, closed points as Frobenius orbits, branch expansions at
//! (possibly singular) points, and the embedding of global functions
//! into the two-dimensional local fields attached to a branch.
//!
//! Local coordinates at a branch: t1 is the transverse affine chart
//! coordinate, t2 is the branch's local equation (solved coordinate
//! minus its Hensel series). With this choice v(t1) = (1,0) and
//! v(t2) = (0,1) hold at smooth and ordinary multiple points alike.

use std::fmt;

use crate::error::{Error, Result};
use crate::fq::{subfield_pullback, Embedding, Fq, FqElem};
use crate::homog::{parse_hpoly, HPoly, Poly2, VARS};
use crate::laurent1::{Bound, Laurent1};
use crate::laurent2::{FqSeries, Laurent2};
use crate::poly;
use crate::precision::Precision;

/// A rational function on P^2: two coprime forms of equal degree.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    num: HPoly,
    den: HPoly,
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num.text(), self.den.text())
    }
}

impl RationalFunction {
    pub fn new(num: HPoly, den: HPoly) -> Result<RationalFunction> {
        if num.is_zero() {
            return Err(Error::ZeroInput("zero rational function".into()));
        }
        if den.is_zero() {
            return Err(Error::ZeroInput("zero denominator".into()));
        }
        if num.degree() != den.degree() {
            return Err(Error::InvalidInput(format!(
                "numerator degree {} != denominator degree {}",
                num.degree(),
                den.degree()
            )));
        }
        // cancel common irreducible factors
        let mut num = num;
        let mut den = den;
        for (factor, mult) in den.clone().factor() {
            for _ in 0..mult {
                match (num.div_exact(&factor), den.div_exact(&factor)) {
                    (Some(n2), Some(d2)) => {
                        num = n2;
                        den = d2;
                    }
                    _ => break,
                }
            }
        }
        // normalize: denominator leading coefficient 1
        let scale = den.leading().unwrap().inv()?;
        Ok(RationalFunction {
            num: num.scale(&scale),
            den: den.scale(&scale),
        })
    }

    /// Parse "num/den" or a plain polynomial (denominator 1 of matching
    /// degree in Z).
    pub fn parse(field: &Fq, input: &str) -> Result<RationalFunction> {
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
            Some(k) => {
                let num = parse_hpoly(field, &input[..k])?;
                let den = parse_hpoly(field, &input[k + 1..])?;
                RationalFunction::new(num, den)
            }
            None => {
                let num = parse_hpoly(field, input)?;
                let d = num.degree();
                let den = HPoly::monomial(field, field.one(), [0, 0, d as u16]);
                RationalFunction::new(num, den)
            }
        }
    }

    pub fn num(&self) -> &HPoly {
        &self.num
    }
    pub fn den(&self) -> &HPoly {
        &self.den
    }
    pub fn field(&self) -> &Fq {
        self.num.field()
    }
    pub fn constant(field: &Fq, c: FqElem) -> Result<RationalFunction> {
        RationalFunction::new(
            HPoly::monomial(field, c, [0, 0, 0]),
            HPoly::monomial(field, field.one(), [0, 0, 0]),
        )
    }
    pub fn mul(&self, other: &RationalFunction) -> Result<RationalFunction> {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    /// Order of vanishing along an irreducible curve (negative at poles).
    pub fn order_along(&self, curve: &Curve) -> i64 {
        self.num.multiplicity_of(&curve.poly) as i64
            - self.den.multiplicity_of(&curve.poly) as i64
    }
}

/// A reduced irreducible curve in P^2.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    poly: HPoly,
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{} = 0}}", self.poly.text())
    }
}

impl Curve {
    pub fn new(poly: HPoly) -> Result<Curve> {
        if poly.is_zero() || poly.degree() == 0 {
            return Err(Error::InvalidInput("curve needs positive degree".into()));
        }
        if poly.degree() > 6 {
            return Err(Error::InvalidInput(
                "curve degree above the desk-scale cap of 6".into(),
            ));
        }
        let poly = poly.normalize();
        if !poly.is_irreducible() {
            return Err(Error::InvalidInput("curve polynomial is reducible".into()));
        }
        Ok(Curve { poly })
    }

    /// For factors already known irreducible (from factorization).
    pub(crate) fn from_irreducible(poly: HPoly) -> Curve {
        Curve {
            poly: poly.normalize(),
        }
    }

    pub fn parse(field: &Fq, input: &str) -> Result<Curve> {
        Curve::new(parse_hpoly(field, input)?)
    }

    pub fn poly(&self) -> &HPoly {
        &self.poly
    }
    pub fn degree(&self) -> usize {
        self.poly.degree()
    }
    pub fn sort_key(&self) -> (usize, Vec<([u16; 3], u128)>) {
        self.poly.sort_key()
    }
}

/// A closed point: a Frobenius orbit of projective points, stored by a
/// canonical representative over GF(q^degree) with the first nonzero
/// coordinate scaled to 1.
#[derive(Clone, Debug)]
pub struct ClosedPoint {
    base: Fq,
    degree: usize,
    chart: usize,
    field: Fq,
    coords: [FqElem; 3],
}

impl PartialEq for ClosedPoint {
    fn eq(&self, other: &Self) -> bool {
        self.sort_key() == other.sort_key()
    }
}
impl Eq for ClosedPoint {}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.affine();
        write!(f, "{}=1;({},{})", VARS[self.chart], a, b)?;
        if self.degree > 1 {
            write!(f, ";deg{}", self.degree)?;
        }
        Ok(())
    }
}

impl ClosedPoint {
    /// Canonicalize raw projective coordinates over any ambient
    /// extension of the base field.
    pub fn from_coords(base: &Fq, ambient: &Fq, coords: [FqElem; 3]) -> Result<ClosedPoint> {
        let k = coords
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::InvalidInput("(0:0:0) is not a point".into()))?;
        let scale = coords[k].inv()?;
        let coords: Vec<FqElem> = coords.iter().map(|c| c.mul(&scale)).collect();
        // orbit size under the q-Frobenius
        let nq = base.n();
        let mut degree = 1usize;
        let mut conj: Vec<FqElem> = coords.iter().map(|c| c.frobenius_iter(nq)).collect();
        while conj != coords {
            degree += 1;
            conj = conj.iter().map(|c| c.frobenius_iter(nq)).collect();
        }
        let target = Fq::extension_internal(base.p(), nq * degree);
        let mut rep: Vec<FqElem> = coords
            .iter()
            .map(|c| subfield_pullback(&target, ambient, c))
            .collect::<Result<_>>()?;
        // orbit-minimal representative
        let key = |v: &[FqElem]| -> Vec<u128> { v.iter().map(|c| c.code()).collect() };
        let mut best = rep.clone();
        for _ in 1..degree {
            rep = rep.iter().map(|c| c.frobenius_iter(nq)).collect();
            if key(&rep) < key(&best) {
                best = rep.clone();
            }
        }
        Ok(ClosedPoint {
            base: base.clone(),
            degree,
            chart: k,
            field: target,
            coords: [best[0].clone(), best[1].clone(), best[2].clone()],
        })
    }

    /// A rational point from integer chart coordinates.
    pub fn rational(base: &Fq, chart: usize, a: i64, b: i64) -> Result<ClosedPoint> {
        let mut coords = [base.one(), base.one(), base.one()];
        let others: Vec<usize> = (0..3).filter(|&v| v != chart).collect();
        coords[chart] = base.one();
        coords[others[0]] = base.from_int(a);
        coords[others[1]] = base.from_int(b);
        ClosedPoint::from_coords(base, base, coords)
    }

    /// Parse "Z=1;(a,b)" with integer or bracketed coordinates, with an
    /// optional ";degN" suffix declaring the coordinate field degree.
    pub fn parse(base: &Fq, input: &str) -> Result<ClosedPoint> {
        let mut parts = input.split(';');
        let chart_part = parts.next().ok_or_else(|| Error::Parse("empty point".into()))?;
        let coords_part = parts
            .next()
            .ok_or_else(|| Error::Parse("point needs ';(a,b)'".into()))?;
        let deg: usize = match parts.next() {
            None => 1,
            Some(d) => d
                .trim()
                .strip_prefix("deg")
                .and_then(|x| x.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad degree suffix '{d}'")))?,
        };
        let chart_var = chart_part
            .trim()
            .strip_suffix("=1")
            .map(str::trim)
            .and_then(|v| v.chars().next())
            .ok_or_else(|| Error::Parse("point chart must look like 'Z=1'".into()))?;
        let chart = VARS
            .iter()
            .position(|&v| v == chart_var)
            .ok_or_else(|| Error::Parse(format!("unknown chart variable '{chart_var}'")))?;
        let inner = coords_part
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Parse("coordinates must be '(a,b)'".into()))?;
        let ambient = Fq::extension_internal(base.p(), base.n() * deg);
        // split on top-level commas (brackets may contain commas)
        let mut pieces = Vec::new();
        let mut depth = 0;
        let mut cur = String::new();
        for ch in inner.chars() {
            match ch {
                '[' => depth += 1,
                ']' => depth -= 1,
                ',' if depth == 0 => {
                    pieces.push(std::mem::take(&mut cur));
                    continue;
                }
                _ => {}
            }
            cur.push(ch);
        }
        pieces.push(cur);
        if pieces.len() != 2 {
            return Err(Error::Parse("expected two coordinates".into()));
        }
        let parse_coord = |s: &str| -> Result<FqElem> {
            let s = s.trim();
            if let Some(body) = s.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
                let digits: Vec<u64> = body
                    .split(',')
                    .map(|d| {
                        d.trim()
                            .parse::<i64>()
                            .map(|v| v.rem_euclid(base.p() as i64) as u64)
                            .map_err(|_| Error::Parse(format!("bad digit '{d}'")))
                    })
                    .collect::<Result<_>>()?;
                ambient.from_coeffs(&digits)
            } else {
                let v: i64 = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coordinate '{s}'")))?;
                Ok(ambient.from_int(v))
            }
        };
        let a = parse_coord(&pieces[0])?;
        let b = parse_coord(&pieces[1])?;
        let others: Vec<usize> = (0..3).filter(|&v| v != chart).collect();
        let mut coords = [ambient.one(), ambient.one(), ambient.one()];
        coords[chart] = ambient.one();
        coords[others[0]] = a;
        coords[others[1]] = b;
        ClosedPoint::from_coords(base, &ambient, coords)
    }

    pub fn base(&self) -> &Fq {
        &self.base
    }
    /// Residue field k(x) = GF(q^degree).
    pub fn residue_field(&self) -> &Fq {
        &self.field
    }
    pub fn degree(&self) -> usize {
        self.degree
    }
    pub fn chart(&self) -> usize {
        self.chart
    }
    pub fn coords(&self) -> &[FqElem; 3] {
        &self.coords
    }
    /// Affine coordinates on the canonical chart, in (X, Y, Z) order of
    /// the remaining variables.
    pub fn affine(&self) -> (FqElem, FqElem) {
        let others: Vec<usize> = (0..3).filter(|&v| v != self.chart).collect();
        (
            self.coords[others[0]].clone(),
            self.coords[others[1]].clone(),
        )
    }

    pub fn lies_on(&self, curve: &Curve) -> Result<bool> {
        Ok(curve
            .poly
            .eval_ext(&self.field, &self.coords)?
            .is_zero())
    }

    pub fn sort_key(&self) -> (usize, usize, Vec<u128>) {
        (
            self.degree,
            self.chart,
            self.coords.iter().map(|c| c.code()).collect(),
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (a, b) = self.affine();
        serde_json::json!({
            "chart": self.chart,
            "coords": [a.coeffs(), b.coeffs()],
            "ext_degree": self.degree,
        })
    }
}

/// Which affine chart coordinate the branch series solves for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolvedCoord {
    /// first chart coordinate = phi(second); t1 is the second coordinate
    First,
    /// second chart coordinate = phi(first); t1 is the first coordinate
    Second,
}

/// One analytic branch of a curve at a point, with its Hensel
/// parametrization.
#[derive(Clone, Debug)]
pub struct BranchExpansion {
    pub point: ClosedPoint,
    pub curve: Curve,
    /// k_z(x), an extension of the point's residue field.
    pub residue_field: Fq,
    pub chart: usize,
    pub solved: SolvedCoord,
    /// The solved coordinate as a power series in the transverse one.
    pub phi: Laurent1<Fq>,
    /// Affine coordinates of the center, embedded in residue_field.
    pub center: (FqElem, FqElem),
    pub prec: Precision,
}

impl fmt::Display for BranchExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.residue_field.n() / self.point.residue_field().n();
        write!(f, "{}#b{:?}e{}", self.point, self.solved, e)
    }
}

/// Evaluate a bivariate polynomial at a pair of one-variable series.
fn poly2_eval_series(p: &Poly2, u: &Laurent1<Fq>, w: &Laurent1<Fq>) -> Laurent1<Fq> {
    let field = p.field().clone();
    let max_u = p.terms().map(|(e, _)| e[0]).max().unwrap_or(0) as usize;
    let max_w = p.terms().map(|(e, _)| e[1]).max().unwrap_or(0) as usize;
    let mut u_pows = vec![Laurent1::monomial(&field, field.one(), 0)];
    for _ in 0..max_u {
        u_pows.push(u_pows.last().unwrap().mul(u));
    }
    let mut w_pows = vec![Laurent1::monomial(&field, field.one(), 0)];
    for _ in 0..max_w {
        w_pows.push(w_pows.last().unwrap().mul(w));
    }
    let mut acc = Laurent1::zero(&field);
    for (e, c) in p.terms() {
        acc = acc.add(&u_pows[e[0] as usize].mul(&w_pows[e[1] as usize]).scale(c));
    }
    acc
}

/// Evaluate a bivariate polynomial at a pair of two-variable series.
fn poly2_eval_series2(p: &Poly2, u: &FqSeries, w: &FqSeries) -> FqSeries {
    let field = p.field().clone();
    let max_u = p.terms().map(|(e, _)| e[0]).max().unwrap_or(0) as usize;
    let max_w = p.terms().map(|(e, _)| e[1]).max().unwrap_or(0) as usize;
    let mut u_pows = vec![FqSeries::one(&field)];
    for _ in 0..max_u {
        u_pows.push(u_pows.last().unwrap().mul(u));
    }
    let mut w_pows = vec![FqSeries::one(&field)];
    for _ in 0..max_w {
        w_pows.push(w_pows.last().unwrap().mul(w));
    }
    let mut acc = FqSeries::zero(&field);
    for (e, c) in p.terms() {
        acc = acc.add(&u_pows[e[0] as usize].mul(&w_pows[e[1] as usize]).scale(c));
    }
    acc
}

/// Newton iteration solving P(x, s(x)) = 0 for a power series s with
/// s(0) = 0; requires dP/ds to be a unit at the origin. When the
/// solution is exactly a polynomial the result carries full knowledge,
/// so downstream valuations of exact data stay determined.
fn newton_solve(p: &Poly2, prec: &Precision) -> Result<Laurent1<Fq>> {
    let field = p.field().clone();
    let ds = p.partial(1);
    let x = Laurent1::monomial(&field, field.one(), 1);
    let mut s = Laurent1::zero(&field).add(&Laurent1::zero_window(&field, Bound::finite(prec.t1)));
    // s starts as the zero series known to prec
    let steps = (64 - (prec.t1 as u64).leading_zeros()) + 2;
    for _ in 0..steps {
        let val = poly2_eval_series(p, &x, &s);
        let deriv = poly2_eval_series(&ds, &x, &s);
        let update = val.mul(&deriv.inv(prec.t1)?);
        s = s.sub(&update);
    }
    // if the window content solves the equation exactly, upgrade to an
    // exact series
    let exact = Laurent1::from_terms(&field, s.terms().map(|(i, c)| (i, c.clone())));
    let residual = poly2_eval_series(p, &x, &exact);
    if residual.is_known_zero() {
        return Ok(exact);
    }
    Ok(s)
}

/// All branches of the curve at the point: one for a smooth point, one
/// per distinct tangent direction at an ordinary multiple point.
pub fn branches_at(
    curve: &Curve,
    point: &ClosedPoint,
    prec: &Precision,
) -> Result<Vec<BranchExpansion>> {
    if !point.lies_on(curve)? {
        return Err(Error::NotOnCurve);
    }
    let kx = point.residue_field().clone();
    let (a, b) = point.affine();
    let local = curve
        .poly
        .dehomogenize(point.chart)
        .embed(&kx)?
        .translate(&a, &b);
    debug_assert!(local.eval(&kx.zero(), &kx.zero()).is_zero());
    let m = local.lowest_degree();
    assert!(m >= 1, "point is on the curve, so the constant term vanishes");

    let mut out = Vec::new();
    if m == 1 {
        // smooth point: solve for whichever coordinate has a nonzero
        // linear coefficient
        let cone = local.lowest_part();
        let dw = cone.eval(&kx.zero(), &kx.one());
        if !dw.is_zero() {
            let phi = newton_solve(&local, prec)?;
            out.push(make_branch(point, curve, &kx, SolvedCoord::Second, phi, (a, b), prec));
        } else {
            let swapped = swap_vars(&local);
            let phi = newton_solve(&swapped, prec)?;
            out.push(make_branch(point, curve, &kx, SolvedCoord::First, phi, (a, b), prec));
        }
    } else {
        // tangent cone T(u, w); directions w = lambda u from T(1, lambda),
        // plus a possible vertical direction u = 0
        let cone = local.lowest_part();
        let t_poly = cone.eval_u(&kx.one()); // T(1, lambda) as univariate in lambda
        let vertical_mult = m - if t_poly.is_zero() { 0 } else { t_poly.degree() };
        if vertical_mult >= 2 {
            return Err(Error::UnsupportedSingularity);
        }
        let (_, factors) = poly::factor(&t_poly);
        if factors.iter().any(|(_, mult)| *mult >= 2) {
            return Err(Error::UnsupportedSingularity);
        }
        for (h, _) in &factors {
            let e = h.degree();
            let kz = Fq::extension_internal(kx.p(), kx.n() * e);
            let h_up = h.map_coeffs(&kz, |c| {
                Embedding::new(&kx, &kz).unwrap().apply(c)
            });
            let mut roots = poly::roots_in_field(&h_up);
            roots.sort_by_key(|r| r.code());
            let lambda = roots
                .first()
                .cloned()
                .ok_or_else(|| Error::InvalidInput("tangent factor lost its roots".into()))?;
            // substitute w = u (lambda + s), divide by u^m
            let local_z = local.embed(&kz)?;
            let h_poly = direction_quotient(&local_z, &lambda, m, false);
            let s = newton_solve(&h_poly, prec)?;
            // phi(u) = u * (lambda + s(u))
            let phi = s
                .add(&Laurent1::monomial(&kz, lambda.clone(), 0))
                .shift(1);
            let emb = Embedding::new(&kx, &kz)?;
            out.push(make_branch(
                point,
                curve,
                &kz,
                SolvedCoord::Second,
                phi,
                (emb.apply(&a), emb.apply(&b)),
                prec,
            ));
        }
        if vertical_mult == 1 {
            // branch tangent to u = 0: solve u = w * s(w)
            let swapped = swap_vars(&local);
            let h_poly = direction_quotient(&swapped, &kx.zero(), m, true);
            let s = newton_solve(&h_poly, prec)?;
            let phi = s.shift(1);
            out.push(make_branch(point, curve, &kx, SolvedCoord::First, phi, (a, b), prec));
        }
    }
    out.sort_by_key(|z| {
        (
            z.residue_field.n(),
            matches!(z.solved, SolvedCoord::First) as u8,
            z.phi.terms().next().map(|(_, c)| c.code()).unwrap_or(0),
        )
    });
    // verify each parametrization against the curve equation
    for z in &out {
        let check = check_branch(&local, z)?;
        if !check {
            return Err(Error::InvalidInput(
                "internal: branch parametrization failed verification".into(),
            ));
        }
    }
    Ok(out)
}

fn swap_vars(p: &Poly2) -> Poly2 {
    Poly2::from_terms(
        p.field(),
        p.terms().map(|(&e, c)| ([e[1], e[0]], c.clone())),
    )
}

/// G(u, u*(lambda + s)) / u^m as a polynomial in (u, s). With
/// `already_swapped` the caller passed G with swapped variables, so this
/// computes the vertical-direction quotient.
fn direction_quotient(g: &Poly2, lambda: &FqElem, m: usize, already_swapped: bool) -> Poly2 {
    let field = g.field().clone();
    let _ = already_swapped;
    // w -> u * (lambda + s): term c u^i w^j -> c u^(i+j) (lambda + s)^j
    let mut acc = Poly2::zero(&field);
    for (e, c) in g.terms() {
        let (i, j) = (e[0] as usize, e[1] as usize);
        // (lambda + s)^j expanded in s
        let mut binom = Poly2::constant(field.one());
        let lin = Poly2::from_terms(
            &field,
            [([0, 0], lambda.clone()), ([0, 1], field.one())],
        );
        for _ in 0..j {
            binom = binom.mul(&lin);
        }
        let shifted = Poly2::from_terms(
            &field,
            binom
                .terms()
                .map(|(&be, bc)| ([be[0] + (i + j) as u16, be[1]], bc.mul(c))),
        );
        acc = acc.add(&shifted);
    }
    // divide by u^m exactly
    Poly2::from_terms(
        &field,
        acc.terms().map(|(&e, c)| {
            assert!(e[0] as usize >= m, "direction quotient not divisible by u^m");
            ([e[0] - m as u16, e[1]], c.clone())
        }),
    )
}

fn make_branch(
    point: &ClosedPoint,
    curve: &Curve,
    kz: &Fq,
    solved: SolvedCoord,
    phi: Laurent1<Fq>,
    center: (FqElem, FqElem),
    prec: &Precision,
) -> BranchExpansion {
    BranchExpansion {
        point: point.clone(),
        curve: curve.clone(),
        residue_field: kz.clone(),
        chart: point.chart(),
        solved,
        phi,
        center,
        prec: *prec,
    }
}

/// Substitute the parametrization into the translated curve equation;
/// the result must vanish on the whole window.
fn check_branch(local_kx: &Poly2, z: &BranchExpansion) -> Result<bool> {
    let local = local_kx.embed(&z.residue_field)?;
    let field = z.residue_field.clone();
    let x = Laurent1::monomial(&field, field.one(), 1)
        .add(&Laurent1::zero_window(&field, Bound::finite(z.prec.t1)));
    let val = match z.solved {
        SolvedCoord::Second => poly2_eval_series(&local, &x, &z.phi),
        SolvedCoord::First => poly2_eval_series(&local, &z.phi, &x),
    };
    let clean = val.terms().next().is_none();
    Ok(clean)
}

impl BranchExpansion {
    /// The local coordinates (t1, t2) as series in themselves: t1 is the
    /// transverse chart coordinate and t2 the branch equation.
    fn chart_coord_series(&self) -> (FqSeries, FqSeries) {
        let field = &self.residue_field;
        let t1 = Laurent2::monomial(field, field.one(), 1, 0);
        let t2 = Laurent2::monomial(field, field.one(), 0, 1);
        // solved coordinate = phi(t1) + t2
        let phi2 = laurent1_as_level0(&self.phi);
        let solved_series = phi2.add(&t2);
        match self.solved {
            SolvedCoord::Second => (t1, solved_series),
            SolvedCoord::First => (solved_series, t1),
        }
    }
}

fn laurent1_as_level0(phi: &Laurent1<Fq>) -> FqSeries {
    let field = phi.ring().clone();
    let mut levels = std::collections::BTreeMap::new();
    levels.insert(0i64, phi.clone());
    Laurent2::from_levels(&field, 0, Bound::INF, levels)
}

/// Embed a global rational function into the local field of a branch.
pub fn expand(f: &RationalFunction, z: &BranchExpansion) -> Result<FqSeries> {
    if f.field() != z.point.base() {
        return Err(Error::RingMismatch(
            "function and branch live over different base fields".into(),
        ));
    }
    let kz = &z.residue_field;
    let (first, second) = z.chart_coord_series();
    let localize = |p: &HPoly| -> Result<FqSeries> {
        let affine = p
            .dehomogenize(z.chart)
            .embed(kz)?
            .translate(&z.center.0, &z.center.1);
        Ok(poly2_eval_series2(&affine, &first, &second))
    };
    let num = localize(&f.num)?;
    let den = localize(&f.den)?;
    Ok(num.mul(&den.inv(&z.prec)?))
}

/// Irreducible curves through the point supporting any of the functions:
/// the factors of their numerators and denominators that vanish there.
pub fn curves_through_point(
    x: &ClosedPoint,
    funcs: &[RationalFunction],
) -> Result<Vec<Curve>> {
    let mut out: Vec<Curve> = Vec::new();
    for f in funcs {
        for part in [f.num(), f.den()] {
            if part.degree() == 0 {
                continue;
            }
            for (factor, _) in part.factor() {
                if factor
                    .eval_ext(x.residue_field(), x.coords())?
                    .is_zero()
                {
                    out.push(Curve::from_irreducible(factor));
                }
            }
        }
    }
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out.dedup_by(|a, b| a.sort_key() == b.sort_key());
    Ok(out)
}

/// Common zeros of the curve and another form, as closed points.
fn common_zeros(curve: &Curve, other: &HPoly) -> Result<Vec<ClosedPoint>> {
    let base = curve.poly.field().clone();
    let mut out = Vec::new();
    if other.multiplicity_of(&curve.poly) >= 1 {
        return Err(Error::CurveInSupport);
    }
    for chart in 0..3 {
        let g = curve.poly.dehomogenize(chart);
        let p = other.dehomogenize(chart);
        if g.is_zero() || p.is_zero() {
            continue;
        }
        let gw = g.as_w_polys();
        let pw = p.as_w_polys();
        if gw.len() == 1 {
            // the curve is free of the second chart coordinate, i.e. a
            // vertical line u = r on this chart; points come from the
            // w-roots of the other form restricted to it
            for root in poly::roots_over_extensions(&gw[0])? {
                let pv = p.eval_u(&root);
                if pv.is_zero() {
                    continue;
                }
                for wroot in poly::roots_over_extensions(&pv)? {
                    let rf = wroot.field().clone();
                    let emb = Embedding::new(root.field(), &rf)?;
                    out.push(chart_point(&base, chart, &emb.apply(&root), &wroot)?);
                }
            }
            continue;
        }
        let res = poly::resultant_y(&gw, &pw, &base);
        if res.is_zero() {
            return Err(Error::InvalidInput(
                "internal: coprime forms produced a zero resultant".into(),
            ));
        }
        if res.degree() == 0 {
            continue;
        }
        let (_, factors) = poly::factor(&res);
        for (pi, _) in factors {
            let d = pi.degree();
            let xfield = try_extension(&base, d)?;
            let pi_up = embed_poly(&pi, &xfield)?;
            let mut roots = poly::roots_in_field(&pi_up);
            roots.sort_by_key(|r| r.code());
            let Some(x0) = roots.first().cloned() else {
                continue;
            };
            let g_at = g.eval_u(&x0);
            if g_at.is_zero() {
                // vertical line inside the curve: impossible for an
                // irreducible curve that is not itself that line
                continue;
            }
            let (_, wfactors) = poly::factor(&g_at);
            for (h, _) in wfactors {
                let e = h.degree();
                let yfield = try_extension(&base, d * e)?;
                let h_up = embed_poly(&h, &yfield)?;
                let mut wroots = poly::roots_in_field(&h_up);
                wroots.sort_by_key(|r| r.code());
                let Some(y0) = wroots.first().cloned() else {
                    continue;
                };
                let x0_up = Embedding::new(&xfield, &yfield)?.apply(&x0);
                // the resultant may produce candidates not on the other
                // form; keep only true common zeros
                if !p.eval_u(&x0_up).eval(&y0).is_zero() {
                    continue;
                }
                out.push(chart_point(&base, chart, &x0_up, &y0)?);
            }
        }
    }
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out.dedup_by(|a, b| a.sort_key() == b.sort_key());
    Ok(out)
}

fn try_extension(base: &Fq, rel_degree: usize) -> Result<Fq> {
    let n = base.n() * rel_degree;
    if (n as u32) * (64 - base.p().leading_zeros()) > 120 {
        return Err(Error::InvalidInput(format!(
            "point residue degree {rel_degree} exceeds the desk-scale cap"
        )));
    }
    Ok(Fq::extension_internal(base.p(), n))
}

fn embed_poly(p: &poly::Poly, big: &Fq) -> Result<poly::Poly> {
    let emb = Embedding::new(p.field(), big)?;
    Ok(p.map_coeffs(big, |c| emb.apply(c)))
}

fn chart_point(base: &Fq, chart: usize, u: &FqElem, w: &FqElem) -> Result<ClosedPoint> {
    let field = u.field().clone();
    let others: Vec<usize> = (0..3).filter(|&v| v != chart).collect();
    let mut coords = [field.one(), field.one(), field.one()];
    coords[chart] = field.one();
    coords[others[0]] = u.clone();
    coords[others[1]] = w.clone();
    ClosedPoint::from_coords(base, &field, coords)
}

/// Singular points of the curve.
pub fn singular_points(curve: &Curve) -> Result<Vec<ClosedPoint>> {
    let mut candidates = Vec::new();
    for var in 0..3 {
        let partial = curve.poly.partial(var);
        if partial.is_zero() {
            continue;
        }
        if partial.multiplicity_of(&curve.poly) >= 1 {
            continue;
        }
        candidates.extend(common_zeros(curve, &partial)?);
        break;
    }
    // filter: all three projective partials vanish
    let mut out = Vec::new();
    for pt in candidates {
        let mut singular = true;
        for var in 0..3 {
            let partial = curve.poly.partial(var);
            if partial.is_zero() {
                continue;
            }
            if !partial
                .eval_ext(pt.residue_field(), pt.coords())?
                .is_zero()
            {
                singular = false;
                break;
            }
        }
        if singular {
            out.push(pt);
        }
    }
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out.dedup_by(|a, b| a.sort_key() == b.sort_key());
    Ok(out)
}

/// Candidate support for curve reciprocity: all points of the curve
/// where any function's numerator or denominator vanishes, plus the
/// singular points and the intersections with the coordinate lines.
pub fn points_on_curve(
    y: &Curve,
    funcs: &[RationalFunction],
) -> Result<Vec<ClosedPoint>> {
    let base = y.poly().field().clone();
    for f in funcs {
        if f.num().multiplicity_of(y.poly()) >= 1 || f.den().multiplicity_of(y.poly()) >= 1 {
            return Err(Error::CurveInSupport);
        }
    }
    let mut out = singular_points(y)?;
    for var in 0..3 {
        let mut e = [0u16; 3];
        e[var] = 1;
        let axis = HPoly::monomial(&base, base.one(), e);
        if axis.multiplicity_of(y.poly()) >= 1 || y.poly().multiplicity_of(&axis) >= 1 {
            continue; // the curve is this coordinate line
        }
        out.extend(common_zeros(y, &axis)?);
    }
    for f in funcs {
        for part in [f.num(), f.den()] {
            if part.degree() == 0 {
                continue;
            }
            out.extend(common_zeros(y, part)?);
        }
    }
    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    out.dedup_by(|a, b| a.sort_key() == b.sort_key());
    Ok(out)
}
