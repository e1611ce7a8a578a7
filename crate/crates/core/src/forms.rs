//! Continuous 2-forms a(t1,t2) dt1^dt2 and the residue map.
//!
//! Forms are always held in the fixed parameter pair (t1, t2); a change
//! of parameters rewrites the density through substitution and the
//! Jacobian. The residue is the raw (-1,-1) coefficient — trace maps are
//! applied by callers, which need it against different base fields.

use crate::error::Result;
use crate::laurent2::{Axis, Laurent2};
use crate::precision::Precision;
use crate::ring::Ring;

/// A 2-form, stored as its density against dt1^dt2.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm<R: Ring> {
    pub density: Laurent2<R>,
}

impl<R: Ring> TwoForm<R> {
    pub fn new(density: Laurent2<R>) -> Self {
        TwoForm { density }
    }

    pub fn add(&self, other: &Self) -> Self {
        TwoForm {
            density: self.density.add(&other.density),
        }
    }

    pub fn scale_series(&self, s: &Laurent2<R>) -> Self {
        TwoForm {
            density: self.density.mul(s),
        }
    }
}

/// df1/f1 ^ df2/f2 as a 2-form: (d1 f1 * d2 f2 - d2 f1 * d1 f2) / (f1 f2).
pub fn dlog_wedge<R: Ring>(
    f1: &Laurent2<R>,
    f2: &Laurent2<R>,
    prec: &Precision,
) -> Result<TwoForm<R>> {
    let num = f1
        .derivative(Axis::T1)
        .mul(&f2.derivative(Axis::T2))
        .sub(&f1.derivative(Axis::T2).mul(&f2.derivative(Axis::T1)));
    let den_inv = f1.mul(f2).inv(prec)?;
    Ok(TwoForm::new(num.mul(&den_inv)))
}

/// The raw residue: the coefficient of t1^-1 t2^-1 in the density.
pub fn residue<R: Ring>(form: &TwoForm<R>) -> Result<R::Elem> {
    form.density.coeff(-1, -1)
}

/// Rewrite the form in new parameters t1 = s1(u1,u2), t2 = s2(u1,u2)
/// (an admissible change) and read the residue there. By parameter
/// independence this must equal `residue(form)`.
pub fn residue_after_param_change<R: Ring>(
    form: &TwoForm<R>,
    s1: &Laurent2<R>,
    s2: &Laurent2<R>,
    prec: &Precision,
) -> Result<R::Elem> {
    let pulled = form.density.substitute(s1, s2, prec)?;
    let jac = s1
        .derivative(Axis::T1)
        .mul(&s2.derivative(Axis::T2))
        .sub(&s1.derivative(Axis::T2).mul(&s2.derivative(Axis::T1)));
    residue(&TwoForm::new(pulled.mul(&jac)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fq::Fq;
    use crate::laurent2::{parse_series, FqSeries};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f5() -> Fq {
        Fq::make(5, 1).unwrap()
    }

    fn prec() -> Precision {
        Precision::default()
    }

    #[test]
    fn dlog_wedge_of_parameters() {
        let f = f5();
        let t1 = parse_series(&f, "t1").unwrap();
        let t2 = parse_series(&f, "t2").unwrap();
        let w = dlog_wedge(&t1, &t2, &prec()).unwrap();
        assert_eq!(w.density.coeff(-1, -1).unwrap(), f.one());
        // antisymmetry
        let w2 = dlog_wedge(&t2, &t1, &prec()).unwrap();
        assert_eq!(w2.density.coeff(-1, -1).unwrap(), f.from_int(-1));
        // equal arguments wedge to zero
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..10 {
            let u = random_unit(&f, &mut rng);
            let w3 = dlog_wedge(&u, &u, &prec()).unwrap();
            assert_eq!(residue(&w3).unwrap(), f.zero());
            assert!(w3.density.terms().next().is_none());
        }
    }

    #[test]
    fn residue_reads_the_corner_coefficient() {
        let f = f5();
        let d = parse_series(&f, "2*t1^-1*t2^-1 + t1*t2^-1 + 4*t1^-1").unwrap();
        assert_eq!(residue(&TwoForm::new(d)).unwrap(), f.from_int(2));
    }

    #[test]
    fn integral_forms_have_zero_residue() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let terms: Vec<(i64, i64, crate::fq::FqElem)> = (0..6)
                .map(|_| (rng.gen_range(0..5), rng.gen_range(0..5), f.sample(&mut rng)))
                .collect();
            let d = Laurent2::from_terms(&f, terms);
            assert_eq!(residue(&TwoForm::new(d)).unwrap(), f.zero());
        }
    }

    #[test]
    fn residue_linear() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..40 {
            let a = random_form(&f, &mut rng);
            let b = random_form(&f, &mut rng);
            assert_eq!(
                residue(&a.add(&b)).unwrap(),
                residue(&a).unwrap().add(&residue(&b).unwrap())
            );
        }
    }

    #[test]
    fn t1_derivatives_have_no_residue() {
        // the coefficient of t1^-1 in a t1-derivative is always zero
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..40 {
            let s = random_form(&f, &mut rng).density;
            let d = s.derivative(Axis::T1);
            assert_eq!(residue(&TwoForm::new(d)).unwrap(), f.zero());
        }
    }

    #[test]
    fn param_change_identity() {
        let f = f5();
        let t1 = parse_series(&f, "t1").unwrap();
        let t2 = parse_series(&f, "t2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for _ in 0..10 {
            let w = random_form(&f, &mut rng);
            assert_eq!(
                residue_after_param_change(&w, &t1, &t2, &prec()).unwrap(),
                residue(&w).unwrap()
            );
        }
    }

    #[test]
    fn param_change_fixed_examples() {
        let f = f5();
        // t1 -> t1(1+t2), t2 -> t2 on t1^-1 t2^-1 dt1^dt2
        let s1 = parse_series(&f, "t1 + t1*t2").unwrap();
        let t2 = parse_series(&f, "t2").unwrap();
        let w = TwoForm::new(parse_series(&f, "t1^-1*t2^-1").unwrap());
        assert_eq!(
            residue_after_param_change(&w, &s1, &t2, &prec()).unwrap(),
            f.one()
        );
        // t2 -> t2(1+t1) on random forms
        let t1 = parse_series(&f, "t1").unwrap();
        let s2 = parse_series(&f, "t2 + t1*t2").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        for _ in 0..25 {
            let w = random_form(&f, &mut rng);
            assert_eq!(
                residue_after_param_change(&w, &t1, &s2, &prec()).unwrap(),
                residue(&w).unwrap(),
            );
        }
    }

    #[test]
    fn param_change_invariance_random_changes() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for _ in 0..50 {
            let w = random_form(&f, &mut rng);
            // admissible random change: s1 = t1 * unit, s2 = t2 * unit
            let u1 = random_unit_poly(&f, &mut rng);
            let u2 = random_unit_poly(&f, &mut rng);
            let s1 = parse_series(&f, "t1").unwrap().mul(&u1);
            let s2 = parse_series(&f, "t2").unwrap().mul(&u2);
            assert_eq!(
                residue_after_param_change(&w, &s1, &s2, &prec()).unwrap(),
                residue(&w).unwrap(),
            );
        }
    }

    fn random_form(f: &Fq, rng: &mut ChaCha8Rng) -> TwoForm<Fq> {
        let terms: Vec<(i64, i64, crate::fq::FqElem)> = (0..6)
            .map(|_| (rng.gen_range(-3..4), rng.gen_range(-3..4), f.sample(rng)))
            .collect();
        TwoForm::new(Laurent2::from_terms(f, terms))
    }

    fn random_unit(f: &Fq, rng: &mut ChaCha8Rng) -> FqSeries {
        let mut terms: Vec<(i64, i64, crate::fq::FqElem)> = (0..4)
            .map(|_| (rng.gen_range(0..4), rng.gen_range(0..4), f.sample(rng)))
            .collect();
        terms.push((0, 0, f.sample_nonzero(rng)));
        Laurent2::from_terms(f, terms)
    }

    /// Unit of the form 1 + (terms with positive orders).
    fn random_unit_poly(f: &Fq, rng: &mut ChaCha8Rng) -> FqSeries {
        let mut terms: Vec<(i64, i64, crate::fq::FqElem)> = vec![(0, 0, f.one())];
        for _ in 0..3 {
            let i = rng.gen_range(0..3);
            let j = rng.gen_range(0..3);
            if i == 0 && j == 0 {
                continue;
            }
            terms.push((i, j, f.sample(rng)));
        }
        Laurent2::from_terms(f, terms)
    }
}
