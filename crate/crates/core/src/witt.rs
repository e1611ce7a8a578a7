//! Truncated Witt vectors: ghost coordinates, component recovery,
//! addition via ghosts, Frobenius, Verschiebung, truncation.
//!
//! Arithmetic runs in a characteristic-zero lift (a Galois ring, or
//! series over one) at p-adic precision N = length. Ghost entry i is
//! exact mod p^N; recovering component i costs i divisions by p, leaving
//! it correct mod p^(N-i) — still at least one good digit for i < N.

use crate::error::{Error, Result};
use crate::fq::{Fq, FqElem};
use crate::galois_ring::{GaloisRing, GrElem};
use crate::laurent2::Laurent2;
use crate::precision::Precision;
use crate::ring::Ring;

/// A truncated Witt vector over any coefficient ring.
#[derive(Clone, Debug, PartialEq)]
pub struct WittVec<R: Ring> {
    ring: R,
    comps: Vec<R::Elem>,
}

impl<R: Ring> WittVec<R> {
    pub fn new(ring: &R, comps: Vec<R::Elem>) -> Self {
        assert!(!comps.is_empty(), "Witt vectors have length >= 1");
        WittVec {
            ring: ring.clone(),
            comps,
        }
    }
    pub fn zero(ring: &R, len: usize) -> Self {
        Self::new(ring, vec![ring.zero(); len])
    }
    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn len(&self) -> usize {
        self.comps.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn components(&self) -> &[R::Elem] {
        &self.comps
    }
    pub fn get(&self, i: usize) -> &R::Elem {
        &self.comps[i]
    }
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| self.ring.is_zero(c))
    }

    /// First k components.
    pub fn truncate(&self, k: usize) -> Self {
        assert!(k >= 1 && k <= self.len());
        Self::new(&self.ring, self.comps[..k].to_vec())
    }

    /// Verschiebung: prepend a zero (length grows by one).
    pub fn verschiebung(&self) -> Self {
        let mut comps = Vec::with_capacity(self.len() + 1);
        comps.push(self.ring.zero());
        comps.extend(self.comps.iter().cloned());
        Self::new(&self.ring, comps)
    }

    /// Componentwise map, e.g. a Frobenius on the coefficient ring.
    pub fn map(&self, f: impl Fn(&R::Elem) -> R::Elem) -> Self {
        Self::new(&self.ring, self.comps.iter().map(f).collect())
    }
}

impl WittVec<Fq> {
    /// Componentwise p-th power.
    pub fn frobenius(&self) -> Self {
        self.map(|c| c.frobenius())
    }
}

/// Which lift of a mod-p object to characteristic zero to use. The
/// pairing must not depend on this; tests exercise both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftStrategy {
    Teichmuller,
    Naive,
}

/// A characteristic-p ring together with a characteristic-zero model:
/// lift, reduce, and exact division by p.
pub trait PadicLift {
    type Small: Ring;
    type Big: Ring;

    fn small(&self) -> &Self::Small;
    fn big(&self) -> &Self::Big;
    fn p(&self) -> u64;
    /// p-adic precision of the big model.
    fn precision(&self) -> u32;
    fn lift(
        &self,
        a: &<Self::Small as Ring>::Elem,
        strategy: LiftStrategy,
    ) -> <Self::Big as Ring>::Elem;
    fn reduce(&self, a: &<Self::Big as Ring>::Elem) -> <Self::Small as Ring>::Elem;
    fn div_p(&self, a: &<Self::Big as Ring>::Elem) -> Result<<Self::Big as Ring>::Elem>;
}

/// GF(p^n) lifted into GR(p^N, n).
pub struct GrLift {
    fq: Fq,
    gr: GaloisRing,
}

impl GrLift {
    pub fn new(fq: &Fq, precision: u32) -> GrLift {
        GrLift {
            fq: fq.clone(),
            gr: GaloisRing::over(fq, precision),
        }
    }
}

impl PadicLift for GrLift {
    type Small = Fq;
    type Big = GaloisRing;

    fn small(&self) -> &Fq {
        &self.fq
    }
    fn big(&self) -> &GaloisRing {
        &self.gr
    }
    fn p(&self) -> u64 {
        self.fq.p()
    }
    fn precision(&self) -> u32 {
        self.gr.precision()
    }
    fn lift(&self, a: &FqElem, strategy: LiftStrategy) -> GrElem {
        match strategy {
            LiftStrategy::Teichmuller => self.gr.teichmuller(a),
            LiftStrategy::Naive => self.gr.lift_naive(a),
        }
    }
    fn reduce(&self, a: &GrElem) -> FqElem {
        a.reduce()
    }
    fn div_p(&self, a: &GrElem) -> Result<GrElem> {
        a.div_p()
    }
}

/// Series over GF(p^n) lifted coefficientwise into series over GR(p^N, n).
pub struct SeriesLift {
    small: crate::witt::SeriesRing<Fq>,
    big: crate::witt::SeriesRing<GaloisRing>,
    inner: GrLift,
}

impl SeriesLift {
    pub fn new(fq: &Fq, precision: u32, prec: Precision) -> SeriesLift {
        let inner = GrLift::new(fq, precision);
        SeriesLift {
            small: SeriesRing::new(fq, prec),
            big: SeriesRing::new(inner.big(), prec),
            inner,
        }
    }
}

impl PadicLift for SeriesLift {
    type Small = SeriesRing<Fq>;
    type Big = SeriesRing<GaloisRing>;

    fn small(&self) -> &SeriesRing<Fq> {
        &self.small
    }
    fn big(&self) -> &SeriesRing<GaloisRing> {
        &self.big
    }
    fn p(&self) -> u64 {
        self.inner.p()
    }
    fn precision(&self) -> u32 {
        self.inner.precision()
    }
    fn lift(&self, a: &Laurent2<Fq>, strategy: LiftStrategy) -> Laurent2<GaloisRing> {
        a.map_coeffs(self.inner.big(), |c| self.inner.lift(c, strategy))
    }
    fn reduce(&self, a: &Laurent2<GaloisRing>) -> Laurent2<Fq> {
        a.map_coeffs(self.inner.small(), |c| c.reduce())
    }
    fn div_p(&self, a: &Laurent2<GaloisRing>) -> Result<Laurent2<GaloisRing>> {
        // every known coefficient must be divisible; windows unchanged
        let mut failed = false;
        let out = a.map_coeffs(self.inner.big(), |c| match c.div_p() {
            Ok(d) => d,
            Err(_) => {
                failed = true;
                c.clone()
            }
        });
        if failed {
            Err(Error::NonIntegralGhost)
        } else {
            Ok(out)
        }
    }
}

/// The ring of truncated series over a coefficient ring, with the
/// ambient precision baked in so `inv` is total on nonzero elements.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRing<R: Ring> {
    pub coeff: R,
    pub prec: Precision,
}

impl<R: Ring> SeriesRing<R> {
    pub fn new(coeff: &R, prec: Precision) -> Self {
        SeriesRing {
            coeff: coeff.clone(),
            prec,
        }
    }
}

impl<R: Ring> Ring for SeriesRing<R> {
    type Elem = Laurent2<R>;

    fn zero(&self) -> Laurent2<R> {
        Laurent2::zero(&self.coeff)
    }
    fn one(&self) -> Laurent2<R> {
        Laurent2::one(&self.coeff)
    }
    fn from_int(&self, k: i64) -> Laurent2<R> {
        Laurent2::constant(&self.coeff, self.coeff.from_int(k))
    }
    fn add(&self, a: &Laurent2<R>, b: &Laurent2<R>) -> Laurent2<R> {
        a.add(b)
    }
    fn sub(&self, a: &Laurent2<R>, b: &Laurent2<R>) -> Laurent2<R> {
        a.sub(b)
    }
    fn neg(&self, a: &Laurent2<R>) -> Laurent2<R> {
        a.neg()
    }
    fn mul(&self, a: &Laurent2<R>, b: &Laurent2<R>) -> Laurent2<R> {
        a.mul(b)
    }
    fn is_zero(&self, a: &Laurent2<R>) -> bool {
        a.is_known_zero()
    }
    fn inv(&self, a: &Laurent2<R>) -> Result<Laurent2<R>> {
        a.inv(&self.prec)
    }
    fn prime(&self) -> u64 {
        self.coeff.prime()
    }
}

fn ring_pow<R: Ring>(ring: &R, a: &R::Elem, mut e: u64) -> R::Elem {
    let mut result = ring.one();
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = ring.mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = ring.mul(&base, &base);
        }
    }
    result
}

/// Ghost coordinates of already-lifted components:
/// x(i) = x_0^(p^i) + p x_1^(p^(i-1)) + ... + p^i x_i.
pub fn ghost_from_lifts<B: Ring>(big: &B, p: u64, lifted: &[B::Elem]) -> Vec<B::Elem> {
    let m = lifted.len();
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut acc = big.zero();
        let mut scale = big.one();
        for (j, x) in lifted.iter().enumerate().take(i + 1) {
            let e = p.pow((i - j) as u32);
            let term = ring_pow(big, x, e);
            acc = big.add(&acc, &big.mul(&scale, &term));
            scale = big.mul_int(&scale, p as i64);
        }
        out.push(acc);
    }
    out
}

/// Ghost coordinates of a Witt vector under the chosen lift.
pub fn ghost<L: PadicLift>(
    lift: &L,
    w: &WittVec<L::Small>,
    strategy: LiftStrategy,
) -> Vec<<L::Big as Ring>::Elem> {
    assert!(
        lift.precision() >= w.len() as u32,
        "p-adic precision must cover the Witt length"
    );
    let lifted: Vec<_> = w.components().iter().map(|c| lift.lift(c, strategy)).collect();
    ghost_from_lifts(lift.big(), lift.p(), &lifted)
}

/// Recover Witt components mod p from ghost coordinates:
/// x_i = p^-i (g_i - sum_{j<i} p^j x_j^(p^(i-j))), reduced mod p.
/// The divisions must be exact; a failure is NonIntegralGhost.
pub fn from_ghost<L: PadicLift>(
    lift: &L,
    ghosts: &[<L::Big as Ring>::Elem],
) -> Result<WittVec<L::Small>> {
    let m = ghosts.len();
    assert!(m >= 1);
    assert!(lift.precision() >= m as u32);
    let big = lift.big();
    let p = lift.p();
    let mut xs: Vec<<L::Big as Ring>::Elem> = Vec::with_capacity(m);
    for (i, g) in ghosts.iter().enumerate() {
        let mut num = g.clone();
        let mut scale = big.one();
        for (j, x) in xs.iter().enumerate() {
            let e = p.pow((i - j) as u32);
            num = big.sub(&num, &big.mul(&scale, &ring_pow(big, x, e)));
            scale = big.mul_int(&scale, p as i64);
        }
        let mut x = num;
        for _ in 0..i {
            x = lift.div_p(&x)?;
        }
        xs.push(x);
    }
    let comps = xs.iter().map(|x| lift.reduce(x)).collect();
    Ok(WittVec::new(lift.small(), comps))
}

/// Witt addition computed through ghost coordinates.
pub fn witt_add<L: PadicLift>(
    lift: &L,
    a: &WittVec<L::Small>,
    b: &WittVec<L::Small>,
) -> Result<WittVec<L::Small>> {
    assert_eq!(a.len(), b.len(), "Witt addition needs equal lengths");
    let ga = ghost(lift, a, LiftStrategy::Teichmuller);
    let gb = ghost(lift, b, LiftStrategy::Teichmuller);
    let big = lift.big();
    let gsum: Vec<_> = ga.iter().zip(&gb).map(|(x, y)| big.add(x, y)).collect();
    from_ghost(lift, &gsum)
}

/// Witt addition over a finite field at the canonical precision.
pub fn witt_add_fq(a: &WittVec<Fq>, b: &WittVec<Fq>) -> Result<WittVec<Fq>> {
    let lift = GrLift::new(a.ring(), a.len() as u32);
    witt_add(&lift, a, b)
}

/// Additive inverse: solve a + (-a) = 0 via ghosts.
pub fn witt_neg_fq(a: &WittVec<Fq>) -> Result<WittVec<Fq>> {
    let lift = GrLift::new(a.ring(), a.len() as u32);
    let ga = ghost(&lift, a, LiftStrategy::Teichmuller);
    let gneg: Vec<GrElem> = ga.iter().map(|x| x.neg()).collect();
    from_ghost(&lift, &gneg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn wv(field: &Fq, comps: &[i64]) -> WittVec<Fq> {
        WittVec::new(field, comps.iter().map(|&c| field.from_int(c)).collect())
    }

    #[test]
    fn ghost_examples_over_f2() {
        let f2 = Fq::make(2, 1).unwrap();
        let lift = GrLift::new(&f2, 2);
        // (0, 0) -> (0, 0)
        let z = ghost(&lift, &wv(&f2, &[0, 0]), LiftStrategy::Teichmuller);
        assert!(z.iter().all(|g| g.is_zero()));
        // (1, 0) -> (1, 1): 1^2 + 2*0 = 1
        let g = ghost(&lift, &wv(&f2, &[1, 0]), LiftStrategy::Teichmuller);
        assert_eq!(g[0].as_int(), 1);
        assert_eq!(g[1].as_int(), 1);
        // (1, 1) -> (1, 3): 1^2 + 2*1 = 3
        let g = ghost(&lift, &wv(&f2, &[1, 1]), LiftStrategy::Teichmuller);
        assert_eq!(g[1].as_int(), 3);
    }

    #[test]
    fn from_ghost_examples() {
        let f2 = Fq::make(2, 1).unwrap();
        let lift = GrLift::new(&f2, 2);
        let gr = lift.big().clone();
        // ghosts (1, 3) -> (1, 1)
        let w = from_ghost(&lift, &[gr.from_int(1), gr.from_int(3)]).unwrap();
        assert_eq!(w, wv(&f2, &[1, 1]));
        // ghosts (2, 2) over Z/4 -> (0, 1): z0 = 2 = 0 mod 2; z1 = (2 - 4)/2 = -1 = 1
        let w = from_ghost(&lift, &[gr.from_int(2), gr.from_int(2)]).unwrap();
        assert_eq!(w, wv(&f2, &[0, 1]));
        // non-integral ghost: (1, 2) needs (2 - 1)/2
        assert_eq!(
            from_ghost(&lift, &[gr.from_int(1), gr.from_int(2)]).unwrap_err(),
            Error::NonIntegralGhost
        );
    }

    #[test]
    fn ghost_round_trip() {
        // exhaustive over F_2 m <= 3, randomized over F_4 and F_5 m <= 4
        let f2 = Fq::make(2, 1).unwrap();
        for m in 1..=3usize {
            let lift = GrLift::new(&f2, m as u32);
            let count = 1u64 << m;
            for code in 0..count {
                let comps: Vec<_> = (0..m)
                    .map(|i| f2.from_int((code >> i & 1) as i64))
                    .collect();
                let w = WittVec::new(&f2, comps);
                for strat in [LiftStrategy::Teichmuller, LiftStrategy::Naive] {
                    let g = ghost(&lift, &w, strat);
                    assert_eq!(from_ghost(&lift, &g).unwrap(), w);
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for field in [Fq::make(2, 2).unwrap(), Fq::make(5, 1).unwrap()] {
            for _ in 0..100 {
                for m in 1..=4usize {
                    let lift = GrLift::new(&field, m as u32);
                    let comps: Vec<_> = (0..m).map(|_| field.sample(&mut rng)).collect();
                    let w = WittVec::new(&field, comps);
                    for strat in [LiftStrategy::Teichmuller, LiftStrategy::Naive] {
                        let g = ghost(&lift, &w, strat);
                        assert_eq!(from_ghost(&lift, &g).unwrap(), w, "m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn witt_add_carries() {
        let f2 = Fq::make(2, 1).unwrap();
        // (1,0) + (1,0) = (0,1): 1 + 1 = 2 in W(F_2) = Z_2
        let s = witt_add_fq(&wv(&f2, &[1, 0]), &wv(&f2, &[1, 0])).unwrap();
        assert_eq!(s, wv(&f2, &[0, 1]));
        // a + 0 = a
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let f5 = Fq::make(5, 1).unwrap();
        for _ in 0..20 {
            let a = WittVec::new(&f5, (0..3).map(|_| f5.sample(&mut rng)).collect());
            assert_eq!(witt_add_fq(&a, &WittVec::zero(&f5, 3)).unwrap(), a);
        }
        // length 1 is the base ring
        let a = wv(&f5, &[3]);
        let b = wv(&f5, &[4]);
        assert_eq!(witt_add_fq(&a, &b).unwrap(), wv(&f5, &[2]));
    }

    #[test]
    fn witt_add_universal_polynomials_f2() {
        // exhaustive m = 2 over F_2: (a+b)_0 = a_0 + b_0,
        // (a+b)_1 = a_1 + b_1 + a_0 b_0
        let f2 = Fq::make(2, 1).unwrap();
        for a0 in 0..2i64 {
            for a1 in 0..2i64 {
                for b0 in 0..2i64 {
                    for b1 in 0..2i64 {
                        let s = witt_add_fq(&wv(&f2, &[a0, a1]), &wv(&f2, &[b0, b1])).unwrap();
                        assert_eq!(s.get(0), &f2.from_int(a0 + b0));
                        assert_eq!(s.get(1), &f2.from_int(a1 + b1 + a0 * b0));
                    }
                }
            }
        }
    }

    #[test]
    fn witt_add_associative_commutative() {
        let f4 = Fq::make(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..30 {
            let a = WittVec::new(&f4, (0..3).map(|_| f4.sample(&mut rng)).collect());
            let b = WittVec::new(&f4, (0..3).map(|_| f4.sample(&mut rng)).collect());
            let c = WittVec::new(&f4, (0..3).map(|_| f4.sample(&mut rng)).collect());
            assert_eq!(
                witt_add_fq(&a, &b).unwrap(),
                witt_add_fq(&b, &a).unwrap()
            );
            assert_eq!(
                witt_add_fq(&witt_add_fq(&a, &b).unwrap(), &c).unwrap(),
                witt_add_fq(&a, &witt_add_fq(&b, &c).unwrap()).unwrap()
            );
            // negation
            let n = witt_neg_fq(&a).unwrap();
            assert!(witt_add_fq(&a, &n).unwrap().is_zero());
        }
    }

    #[test]
    fn truncation_commutes_with_addition() {
        let f5 = Fq::make(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        for _ in 0..40 {
            let a = WittVec::new(&f5, (0..4).map(|_| f5.sample(&mut rng)).collect());
            let b = WittVec::new(&f5, (0..4).map(|_| f5.sample(&mut rng)).collect());
            let s = witt_add_fq(&a, &b).unwrap();
            for k in 1..=4usize {
                assert_eq!(
                    s.truncate(k),
                    witt_add_fq(&a.truncate(k), &b.truncate(k)).unwrap()
                );
            }
        }
    }

    #[test]
    fn frobenius_trace_compatible() {
        let f4 = Fq::make(2, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        for _ in 0..20 {
            let a = WittVec::new(&f4, (0..3).map(|_| f4.sample(&mut rng)).collect());
            let fr = a.frobenius();
            for i in 0..3 {
                assert_eq!(
                    a.get(i).trace_to_prime(),
                    fr.get(i).trace_to_prime()
                );
            }
        }
        // over F_p Frobenius is the identity
        let f5 = Fq::make(5, 1).unwrap();
        let w = wv(&f5, &[2, 3, 4]);
        assert_eq!(w.frobenius(), w);
        // (omega, 0) -> (omega^2, 0)
        let w = WittVec::new(&f4, vec![f4.gen(), f4.zero()]);
        assert_eq!(w.frobenius().get(0), &f4.gen().frobenius());
    }

    #[test]
    fn verschiebung_ghost_identity() {
        // ghost(V(w))_0 = 0 and ghost(V(w))_i = p * ghost(w)_(i-1)
        let f5 = Fq::make(5, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(56);
        for _ in 0..20 {
            let w = WittVec::new(&f5, (0..3).map(|_| f5.sample(&mut rng)).collect());
            let v = w.verschiebung();
            let lift = GrLift::new(&f5, 4);
            let gw = ghost(&lift, &w, LiftStrategy::Teichmuller);
            let gv = ghost(&lift, &v, LiftStrategy::Teichmuller);
            assert!(gv[0].is_zero());
            for i in 1..4 {
                assert_eq!(gv[i], gw[i - 1].mul_int(5));
            }
        }
        // V(0) = 0, V((a)) = (0, a)
        let z = WittVec::zero(&f5, 2);
        assert!(z.verschiebung().is_zero());
        let a = wv(&f5, &[3]);
        assert_eq!(a.verschiebung(), wv(&f5, &[0, 3]));
    }

    #[test]
    fn series_lift_ghost_round_trip() {
        use crate::laurent2::parse_series;
        let f5 = Fq::make(5, 1).unwrap();
        let m = 3usize;
        let lift = SeriesLift::new(&f5, m as u32, Precision::default());
        let g0 = parse_series(&f5, "2*t1^-1 + t2").unwrap();
        let g1 = parse_series(&f5, "3 + t1*t2").unwrap();
        let g2 = parse_series(&f5, "t1^2").unwrap();
        let w = WittVec::new(lift.small(), vec![g0, g1, g2]);
        for strat in [LiftStrategy::Teichmuller, LiftStrategy::Naive] {
            let g = ghost(&lift, &w, strat);
            let back = from_ghost(&lift, &g).unwrap();
            assert_eq!(back, w);
        }
    }
}
