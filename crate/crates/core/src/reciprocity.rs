//! Verifiers for the reciprocity laws: around a point and along a curve,
//! for the higher tame symbol and the Witt symbol, plus the
//! one-dimensional Weil baseline.
//!
//! Each verifier enumerates the support (where symbols can be
//! nontrivial), computes every local term, folds them under the law's
//! monoid, and also spot-checks a few places outside the support, which
//! the finiteness lemmas say must contribute trivially.

use std::fmt;

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::laurent2::FqSeries;
use crate::pone::{self, Place1, RationalFunc1};
use crate::precision::{with_retry, Precision};
use crate::surface::{
    branches_at, curves_through_point, expand, points_on_curve, singular_points, BranchExpansion,
    ClosedPoint, Curve, RationalFunction,
};
use crate::symbols::{tame2_branch, witt_pair};
use crate::witt::{SeriesRing, WittVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Law {
    TamePoint,
    WittPoint,
    TameCurve,
    WittCurve,
    Weil1d,
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Law::TamePoint => "tame_point",
            Law::WittPoint => "witt_point",
            Law::TameCurve => "tame_curve",
            Law::WittCurve => "witt_curve",
            Law::Weil1d => "weil_1d",
        };
        write!(f, "{name}")
    }
}

/// A local symbol value: multiplicative for tame, additive for Witt.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolValue {
    Tame(FqElem),
    Witt(WittVec<Fq>),
}

impl SymbolValue {
    pub fn is_identity(&self) -> bool {
        match self {
            SymbolValue::Tame(v) => v.is_one(),
            SymbolValue::Witt(w) => w.is_zero(),
        }
    }

    fn fold(&self, other: &SymbolValue) -> Result<SymbolValue> {
        match (self, other) {
            (SymbolValue::Tame(a), SymbolValue::Tame(b)) => Ok(SymbolValue::Tame(a.mul(b))),
            (SymbolValue::Witt(a), SymbolValue::Witt(b)) => {
                Ok(SymbolValue::Witt(crate::witt::witt_add_fq(a, b)?))
            }
            _ => Err(Error::InvalidInput("mixed symbol kinds".into())),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            SymbolValue::Tame(v) => serde_json::json!({"tame": v.coeffs()}),
            SymbolValue::Witt(w) => serde_json::json!({
                "witt": {
                    "length": w.len(),
                    "components": w.components().iter().map(|c| c.coeffs().to_vec()).collect::<Vec<_>>(),
                }
            }),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlaceTerm {
    pub place: String,
    pub value: SymbolValue,
}

#[derive(Debug, Clone)]
pub struct ReciprocityReport {
    pub law: Law,
    pub place_terms: Vec<PlaceTerm>,
    pub aggregate: SymbolValue,
    pub holds: bool,
    pub precision: Precision,
    pub witt_length: usize,
}

impl ReciprocityReport {
    fn assemble(
        law: Law,
        terms: Vec<PlaceTerm>,
        identity: SymbolValue,
        precision: Precision,
        witt_length: usize,
    ) -> Result<ReciprocityReport> {
        let mut aggregate = identity;
        for t in &terms {
            aggregate = aggregate.fold(&t.value)?;
        }
        let holds = aggregate.is_identity();
        Ok(ReciprocityReport {
            law,
            place_terms: terms,
            aggregate,
            holds,
            precision,
            witt_length,
        })
    }

    /// Recompute the aggregate from the stored terms (consistency check).
    pub fn refold(&self) -> Result<SymbolValue> {
        let identity = match &self.aggregate {
            SymbolValue::Tame(v) => SymbolValue::Tame(v.field().one()),
            SymbolValue::Witt(w) => SymbolValue::Witt(WittVec::zero(w.ring(), w.len())),
        };
        let mut acc = identity;
        for t in &self.place_terms {
            acc = acc.fold(&t.value)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "law": self.law.to_string(),
            "holds": self.holds,
            "aggregate": self.aggregate.to_json(),
            "terms": self.place_terms.iter().map(|t| serde_json::json!({
                "place": t.place,
                "value": t.value.to_json(),
            })).collect::<Vec<_>>(),
            "precision": {
                "t1_window": self.precision.t1,
                "t2_window": self.precision.t2,
                "witt_length": self.witt_length,
            },
        })
    }
}

/// Deterministic extra curves through a point, outside the given support.
fn offsupport_curves(
    x: &ClosedPoint,
    exclude: &[Curve],
    count: usize,
) -> Result<Vec<Curve>> {
    let base = x.base().clone();
    let mut out = Vec::new();
    // lines a X + b Y + c Z through x, then irreducible conics
    for degree in 1..=2u16 {
        if out.len() >= count {
            break;
        }
        for cand in all_forms_vanishing_at(&base, degree, x)? {
            if out.len() >= count {
                break;
            }
            if !cand.is_irreducible() {
                continue;
            }
            let curve = Curve::from_irreducible(cand);
            if exclude.iter().any(|c| c.sort_key() == curve.sort_key()) {
                continue;
            }
            if out
                .iter()
                .any(|c: &Curve| c.sort_key() == curve.sort_key())
            {
                continue;
            }
            out.push(curve);
        }
    }
    Ok(out)
}

fn all_forms_vanishing_at(
    base: &Fq,
    degree: u16,
    x: &ClosedPoint,
) -> Result<Vec<crate::homog::HPoly>> {
    // brute-force over normalized forms of the degree; desk scale
    let mut out = Vec::new();
    let monomials: Vec<[u16; 3]> = {
        let mut v = Vec::new();
        for a in (0..=degree).rev() {
            for b in (0..=degree - a).rev() {
                v.push([a, b, degree - a - b]);
            }
        }
        v
    };
    let dim = monomials.len();
    let q = base.q();
    for lead in 0..dim {
        let free = dim - lead - 1;
        let total = q.pow(free as u32);
        for code in 0..total {
            let mut terms = vec![(monomials[lead], base.one())];
            let mut rest = code;
            for off in 0..free {
                let digit = rest % q;
                rest /= q;
                if digit != 0 {
                    terms.push((monomials[lead + 1 + off], base.from_code(digit)));
                }
            }
            let form = crate::homog::HPoly::from_terms(base, degree as usize, terms)?;
            if form.eval_ext(x.residue_field(), x.coords())?.is_zero() {
                out.push(form);
            }
        }
    }
    Ok(out)
}

struct LocalTriple {
    place: String,
    branch: BranchExpansion,
}

/// Branches of every support curve at the point, labelled.
fn point_branches(
    x: &ClosedPoint,
    curves: &[Curve],
    off: &[Curve],
    prec: &Precision,
) -> Result<Vec<LocalTriple>> {
    let mut out = Vec::new();
    for (is_off, y) in curves
        .iter()
        .map(|y| (false, y))
        .chain(off.iter().map(|y| (true, y)))
    {
        for (k, z) in branches_at(y, x, prec)?.into_iter().enumerate() {
            let tag = if is_off { "offsupport " } else { "" };
            out.push(LocalTriple {
                place: format!("{tag}y={}; branch {k}", y.poly().text()),
                branch: z,
            });
        }
    }
    Ok(out)
}

/// Branches at every support point along the curve, labelled.
fn curve_branches(
    y: &Curve,
    points: &[ClosedPoint],
    off: &[ClosedPoint],
    prec: &Precision,
) -> Result<Vec<LocalTriple>> {
    let mut out = Vec::new();
    for (is_off, x) in points
        .iter()
        .map(|x| (false, x))
        .chain(off.iter().map(|x| (true, x)))
    {
        for (k, z) in branches_at(y, x, prec)?.into_iter().enumerate() {
            let tag = if is_off { "offsupport " } else { "" };
            out.push(LocalTriple {
                place: format!("{tag}x={x}; branch {k}"),
                branch: z,
            });
        }
    }
    Ok(out)
}

/// Tame reciprocity around a point: the product over curves through the
/// point and their branches of N(f, g, h) must be 1.
pub fn verify_tame_point(
    x: &ClosedPoint,
    f: &RationalFunction,
    g: &RationalFunction,
    h: &RationalFunction,
    start: Precision,
) -> Result<ReciprocityReport> {
    let base = x.base().clone();
    let funcs = [f.clone(), g.clone(), h.clone()];
    let support = curves_through_point(x, &funcs)?;
    let off = offsupport_curves(x, &support, 5)?;
    with_retry(start, |prec| {
        let mut terms = Vec::new();
        for t in point_branches(x, &support, &off, &prec)? {
            let ef = expand(f, &t.branch)?;
            let eg = expand(g, &t.branch)?;
            let eh = expand(h, &t.branch)?;
            let val = tame2_branch(&ef, &eg, &eh, &base)?;
            terms.push(PlaceTerm {
                place: t.place,
                value: SymbolValue::Tame(val),
            });
        }
        ReciprocityReport::assemble(
            Law::TamePoint,
            terms,
            SymbolValue::Tame(base.one()),
            prec,
            0,
        )
    })
}

/// Expand the Witt components at a branch.
fn expand_witt(
    h: &[RationalFunction],
    z: &BranchExpansion,
    prec: &Precision,
) -> Result<WittVec<SeriesRing<Fq>>> {
    let ring = SeriesRing::new(&z.residue_field, *prec);
    let comps: Vec<FqSeries> = h.iter().map(|c| expand(c, z)).collect::<Result<_>>()?;
    Ok(WittVec::new(&ring, comps))
}

/// Witt reciprocity around a point: the sum over curves through the
/// point of (f, g | h] must vanish in W_m(F_p).
pub fn verify_witt_point(
    x: &ClosedPoint,
    f: &RationalFunction,
    g: &RationalFunction,
    h: &[RationalFunction],
    start: Precision,
) -> Result<ReciprocityReport> {
    let m = h.len();
    if m == 0 {
        return Err(Error::InvalidInput("empty Witt vector".into()));
    }
    let prime = Fq::extension_internal(x.base().p(), 1);
    let mut funcs = vec![f.clone(), g.clone()];
    funcs.extend(h.iter().cloned());
    let support = curves_through_point(x, &funcs)?;
    let off = offsupport_curves(x, &support, 5)?;
    with_retry(start, |prec| {
        let mut terms = Vec::new();
        for t in point_branches(x, &support, &off, &prec)? {
            let ef = expand(f, &t.branch)?;
            let eg = expand(g, &t.branch)?;
            let eh = expand_witt(h, &t.branch, &prec)?;
            let val = witt_pair(&ef, &eg, &eh, &prec)?;
            terms.push(PlaceTerm {
                place: t.place,
                value: SymbolValue::Witt(val),
            });
        }
        ReciprocityReport::assemble(
            Law::WittPoint,
            terms,
            SymbolValue::Witt(WittVec::zero(&prime, m)),
            prec,
            m,
        )
    })
}

/// Deterministic extra points on the curve outside the support.
fn offsupport_points(
    y: &Curve,
    exclude: &[ClosedPoint],
    count: usize,
) -> Result<Vec<ClosedPoint>> {
    let base = y.poly().field().clone();
    let mut out = Vec::new();
    // scan rational points of P^2 in code order
    let q = base.q();
    'outer: for chart in (0..3).rev() {
        for a_code in 0..q {
            for b_code in 0..q {
                if out.len() >= count {
                    break 'outer;
                }
                let a = base.from_code(a_code);
                let b = base.from_code(b_code);
                let others: Vec<usize> = (0..3).filter(|&v| v != chart).collect();
                let mut coords = [base.one(), base.one(), base.one()];
                coords[others[0]] = a;
                coords[others[1]] = b;
                let Ok(pt) = ClosedPoint::from_coords(&base, &base, coords) else {
                    continue;
                };
                if !pt.lies_on(y)? {
                    continue;
                }
                if exclude.iter().any(|p| p == &pt) || out.iter().any(|p| p == &pt) {
                    continue;
                }
                out.push(pt);
            }
        }
    }
    Ok(out)
}

/// Tame reciprocity along a curve: the product over its points (and
/// branches) of N(f, g, h) must be 1.
pub fn verify_tame_curve(
    y: &Curve,
    f: &RationalFunction,
    g: &RationalFunction,
    h: &RationalFunction,
    start: Precision,
) -> Result<ReciprocityReport> {
    let base = y.poly().field().clone();
    let funcs = [f.clone(), g.clone(), h.clone()];
    let support = points_on_curve(y, &funcs)?;
    let off = offsupport_points(y, &support, 5)?;
    with_retry(start, |prec| {
        let mut terms = Vec::new();
        for t in curve_branches(y, &support, &off, &prec)? {
            let ef = expand(f, &t.branch)?;
            let eg = expand(g, &t.branch)?;
            let eh = expand(h, &t.branch)?;
            let val = tame2_branch(&ef, &eg, &eh, &base)?;
            terms.push(PlaceTerm {
                place: t.place,
                value: SymbolValue::Tame(val),
            });
        }
        ReciprocityReport::assemble(
            Law::TameCurve,
            terms,
            SymbolValue::Tame(base.one()),
            prec,
            0,
        )
    })
}

/// Witt reciprocity along a curve: the sum over its points of (f, g | h]
/// must vanish in W_m(F_p).
pub fn verify_witt_curve(
    y: &Curve,
    f: &RationalFunction,
    g: &RationalFunction,
    h: &[RationalFunction],
    start: Precision,
) -> Result<ReciprocityReport> {
    let m = h.len();
    if m == 0 {
        return Err(Error::InvalidInput("empty Witt vector".into()));
    }
    let base = y.poly().field().clone();
    let prime = Fq::extension_internal(base.p(), 1);
    let mut funcs = vec![f.clone(), g.clone()];
    funcs.extend(h.iter().cloned());
    let support = points_on_curve(y, &funcs)?;
    let off = offsupport_points(y, &support, 5)?;
    with_retry(start, |prec| {
        let mut terms = Vec::new();
        for t in curve_branches(y, &support, &off, &prec)? {
            let ef = expand(f, &t.branch)?;
            let eg = expand(g, &t.branch)?;
            let eh = expand_witt(h, &t.branch, &prec)?;
            let val = witt_pair(&ef, &eg, &eh, &prec)?;
            terms.push(PlaceTerm {
                place: t.place,
                value: SymbolValue::Witt(val),
            });
        }
        ReciprocityReport::assemble(
            Law::WittCurve,
            terms,
            SymbolValue::Witt(WittVec::zero(&prime, m)),
            prec,
            m,
        )
    })
}

/// One-dimensional Weil reciprocity on P^1.
pub fn weil_1d(f: &RationalFunc1, g: &RationalFunc1) -> Result<ReciprocityReport> {
    let base = f.field().clone();
    let (raw_terms, _) = pone::weil_product(f, g)?;
    let terms: Vec<PlaceTerm> = raw_terms
        .into_iter()
        .map(|(place, v)| PlaceTerm {
            place: match place {
                Place1::Finite(pi) => format!("pi={pi:?}"),
                Place1::Infinity => "infinity".into(),
            },
            value: SymbolValue::Tame(v),
        })
        .collect();
    ReciprocityReport::assemble(
        Law::Weil1d,
        terms,
        SymbolValue::Tame(base.one()),
        Precision::default(),
        0,
    )
}

/// All branches over all support curves exist and singular support is
/// present: helper used by callers wanting the raw place list.
pub fn point_support(x: &ClosedPoint, funcs: &[RationalFunction]) -> Result<Vec<Curve>> {
    curves_through_point(x, funcs)
}

pub fn curve_support(y: &Curve, funcs: &[RationalFunction]) -> Result<Vec<ClosedPoint>> {
    let pts = points_on_curve(y, funcs)?;
    debug_assert!(singular_points(y)?.iter().all(|s| pts.contains(s)));
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fq {
        Fq::make(5, 1).unwrap()
    }
    fn start() -> Precision {
        Precision::default()
    }

    fn origin(base: &Fq) -> ClosedPoint {
        ClosedPoint::rational(base, 2, 0, 0).unwrap()
    }

    #[test]
    fn tame_point_constants_trivial() {
        let f = f5();
        let c = |v: i64| RationalFunction::constant(&f, f.from_int(v)).unwrap();
        let report =
            verify_tame_point(&origin(&f), &c(2), &c(3), &c(4), start()).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn tame_point_three_lines() {
        let f = f5();
        let fx = RationalFunction::parse(&f, "X/Z").unwrap();
        let fy = RationalFunction::parse(&f, "Y/Z").unwrap();
        let fxy = RationalFunction::parse(&f, "(X+Y)/Z").unwrap();
        let report = verify_tame_point(&origin(&f), &fx, &fy, &fxy, start()).unwrap();
        assert!(report.holds, "report: {:?}", report.to_json());
        // three support curves plus five off-support spot checks
        assert!(report.place_terms.len() >= 8);
        assert_eq!(report.refold().unwrap(), report.aggregate);
    }

    #[test]
    fn tame_point_constant_h_cancellation() {
        let f = f5();
        let fx = RationalFunction::parse(&f, "X/Z").unwrap();
        let fy = RationalFunction::parse(&f, "Y/Z").unwrap();
        let c = RationalFunction::constant(&f, f.from_int(3)).unwrap();
        let report = verify_tame_point(&origin(&f), &fx, &fy, &c, start()).unwrap();
        assert!(report.holds);
        // the two line terms are 3^{-1} and 3: hand-checked cancellation
        let vals: Vec<&SymbolValue> = report
            .place_terms
            .iter()
            .filter(|t| !t.place.starts_with("offsupport"))
            .map(|t| &t.value)
            .collect();
        assert_eq!(vals.len(), 2);
        let as_tame = |v: &SymbolValue| match v {
            SymbolValue::Tame(x) => x.clone(),
            _ => unreachable!(),
        };
        let prod = as_tame(vals[0]).mul(&as_tame(vals[1]));
        assert!(prod.is_one());
        assert!(vals.iter().any(|v| as_tame(v) == f.from_int(3)));
        assert!(vals.iter().any(|v| as_tame(v) == f.from_int(3).inv().unwrap()));
    }

    #[test]
    fn witt_point_zero_h_trivial() {
        let f = f5();
        let fx = RationalFunction::parse(&f, "X/Z").unwrap();
        let fy = RationalFunction::parse(&f, "Y/Z").unwrap();
        // h = 0 is not a valid rational function; the law for h = (c)
        // with constant c exercises the same two-line cancellation
        let c = RationalFunction::constant(&f, f.from_int(2)).unwrap();
        let report =
            verify_witt_point(&origin(&f), &fx, &fy, &[c], start()).unwrap();
        assert!(report.holds, "{:?}", report.to_json());
    }

    #[test]
    fn witt_point_nonconstant_h() {
        let f = f5();
        let fx = RationalFunction::parse(&f, "X/Z").unwrap();
        let fy = RationalFunction::parse(&f, "Y/Z").unwrap();
        let h = RationalFunction::parse(&f, "X/(X+Y)").unwrap();
        let report = verify_witt_point(&origin(&f), &fx, &fy, &[h.clone()], start()).unwrap();
        assert!(report.holds, "{:?}", report.to_json());
        // length 2
        let h1 = RationalFunction::parse(&f, "(X+2*Z)/Z").unwrap();
        let report =
            verify_witt_point(&origin(&f), &fx, &fy, &[h, h1], start()).unwrap();
        assert!(report.holds, "{:?}", report.to_json());
        assert_eq!(report.witt_length, 2);
    }

    #[test]
    fn tame_curve_line_reduces_to_weil() {
        let f = f5();
        let y = Curve::parse(&f, "Y").unwrap();
        let fx = RationalFunction::parse(&f, "X/Z").unwrap();
        let g = RationalFunction::parse(&f, "(X+Z)/Z").unwrap();
        let h = RationalFunction::parse(&f, "(X+2*Z)/(X+3*Z)").unwrap();
        let report = verify_tame_curve(&y, &fx, &g, &h, start()).unwrap();
        assert!(report.holds, "{:?}", report.to_json());
        // the independent 1-d verifier agrees on the restrictions
        for (a, b) in [(&fx, &g), (&fx, &h), (&g, &h)] {
            let ra = pone::restrict_to_line(a, &y).unwrap();
            let rb = pone::restrict_to_line(b, &y).unwrap();
            let w = weil_1d(&ra, &rb).unwrap();
            assert!(w.holds);
        }
    }

    #[test]
    fn tame_curve_in_support_rejected() {
        let f = f5();
        let y = Curve::parse(&f, "Y").unwrap();
        let fy = RationalFunction::parse(&f, "Y/Z").unwrap();
        let c = RationalFunction::constant(&f, f.one()).unwrap();
        assert!(matches!(
            verify_tame_curve(&y, &fy, &c, &c, start()),
            Err(Error::CurveInSupport)
        ));
    }

    #[test]
    fn witt_curve_on_line() {
        let f = f5();
        let y = Curve::parse(&f, "Y").unwrap();
        let fx = RationalFunction::parse(&f, "X/Z").unwrap();
        let g = RationalFunction::parse(&f, "(X+Z)/Z").unwrap();
        let c = RationalFunction::constant(&f, f.from_int(2)).unwrap();
        let report = verify_witt_curve(&y, &fx, &g, &[c.clone()], start()).unwrap();
        assert!(report.holds, "{:?}", report.to_json());
        // m = 2 on the same data
        let h1 = RationalFunction::parse(&f, "(X+4*Z)/Z").unwrap();
        let report = verify_witt_curve(&y, &fx, &g, &[c, h1], start()).unwrap();
        assert!(report.holds, "{:?}", report.to_json());
    }

    #[test]
    fn weil_baseline() {
        let f = f5();
        let a = RationalFunc1::parse(&f, "x").unwrap();
        let b = RationalFunc1::parse(&f, "1 - x").unwrap();
        let report = weil_1d(&a, &b).unwrap();
        assert!(report.holds);
        assert_eq!(report.refold().unwrap(), report.aggregate);
    }

    #[test]
    fn nodal_cubic_tame_curve() {
        let f = f5();
        let y = Curve::parse(&f, "Y^2*Z - X^2*Z - X^3").unwrap();
        let a = RationalFunction::parse(&f, "X/Z").unwrap();
        let b = RationalFunction::parse(&f, "Y/Z").unwrap();
        let c = RationalFunction::parse(&f, "(X+Y)/Z").unwrap();
        let report = verify_tame_curve(&y, &a, &b, &c, start()).unwrap();
        assert!(report.holds, "{:?}", report.to_json());
        // the node contributes two branch terms
        let node_terms = report
            .place_terms
            .iter()
            .filter(|t| t.place.contains("Z=1;(0,0)") && !t.place.starts_with("offsupport"))
            .count();
        assert_eq!(node_terms, 2);
    }
}
