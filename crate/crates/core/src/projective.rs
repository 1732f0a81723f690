//! Points of the projective line, Möbius maps, and homogeneous pairs.
//!
//! A `HomogeneousPair` is a point of P^(2d+1): two degree-d forms up to a
//! common scalar. Its gcd factorization `f = H * fhat` (holes and reduced
//! map) is computed lazily and cached, so raw symbolic constructions such
//! as iterates stay cheap until a verdict is actually requested.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::form::{poly_gcd, HomogeneousForm};
use crate::scalar::ExactScalar;

/// A point of P^1 over the exact scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum P1Point {
    Finite(ExactScalar),
    Infinity,
}

impl P1Point {
    pub fn finite(z: ExactScalar) -> Self {
        P1Point::Finite(z)
    }

    pub fn from_int(n: i64) -> Self {
        P1Point::Finite(ExactScalar::from_int(n))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, P1Point::Infinity)
    }

    pub fn as_finite(&self) -> Option<&ExactScalar> {
        match self {
            P1Point::Finite(z) => Some(z),
            P1Point::Infinity => None,
        }
    }

    /// Deterministic total order: finite points first, by `(re, im)`
    /// lexicographically; infinity last.
    pub fn cmp_points(&self, other: &Self) -> Ordering {
        match (self, other) {
            (P1Point::Finite(a), P1Point::Finite(b)) => a.cmp_lex(b),
            (P1Point::Finite(_), P1Point::Infinity) => Ordering::Less,
            (P1Point::Infinity, P1Point::Finite(_)) => Ordering::Greater,
            (P1Point::Infinity, P1Point::Infinity) => Ordering::Equal,
        }
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Finite(z) => write!(f, "{z}"),
            P1Point::Infinity => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An exact Möbius transformation `z -> (a z + b) / (c z + d)`.
#[derive(Clone, PartialEq, Eq)]
pub struct MoebiusMap {
    pub a: ExactScalar,
    pub b: ExactScalar,
    pub c: ExactScalar,
    pub d: ExactScalar,
}

impl MoebiusMap {
    pub fn new(a: ExactScalar, b: ExactScalar, c: ExactScalar, d: ExactScalar) -> Result<Self> {
        let det = &(&a * &d) - &(&b * &c);
        if det.is_zero() {
            return Err(Error::DegenerateInput("singular Moebius matrix".into()));
        }
        Ok(MoebiusMap { a, b, c, d })
    }

    pub fn identity() -> Self {
        MoebiusMap {
            a: ExactScalar::one(),
            b: ExactScalar::zero(),
            c: ExactScalar::zero(),
            d: ExactScalar::one(),
        }
    }

    /// The affine map `z -> scale*z + offset`.
    pub fn affine(scale: ExactScalar, offset: ExactScalar) -> Result<Self> {
        MoebiusMap::new(scale, offset, ExactScalar::zero(), ExactScalar::one())
    }

    pub fn is_affine(&self) -> bool {
        self.c.is_zero()
    }

    /// The unique Möbius map sending `(p1, p2, p3)` to `(0, 1, inf)`.
    pub fn to_standard_triple(p1: &P1Point, p2: &P1Point, p3: &P1Point) -> Result<Self> {
        use P1Point::*;
        let one = ExactScalar::one();
        let zero = ExactScalar::zero();
        if p1 == p2 || p2 == p3 || p1 == p3 {
            return Err(Error::DegenerateInput("coincident points in triple".into()));
        }
        let m = match (p1, p2, p3) {
            (Finite(a), Finite(b), Finite(c)) => {
                // z -> (z-a)(b-c) / ((z-c)(b-a))
                let bc = &(b.clone()) - c;
                let ba = &(b.clone()) - a;
                MoebiusMap::new(bc.clone(), -(a * &bc), ba.clone(), -(c * &ba))?
            }
            (Infinity, Finite(b), Finite(c)) => {
                // z -> (b-c)/(z-c)
                let bc = &(b.clone()) - c;
                MoebiusMap::new(zero.clone(), bc, one.clone(), -c.clone())?
            }
            (Finite(a), Infinity, Finite(c)) => {
                // z -> (z-a)/(z-c)
                MoebiusMap::new(one.clone(), -a.clone(), one.clone(), -c.clone())?
            }
            (Finite(a), Finite(b), Infinity) => {
                // z -> (z-a)/(b-a)
                let ba = &(b.clone()) - a;
                MoebiusMap::new(one.clone(), -a.clone(), zero.clone(), ba)?
            }
            _ => unreachable!("at most one point can be infinity"),
        };
        debug_assert_eq!(m.apply(p1), P1Point::finite(ExactScalar::zero()));
        debug_assert_eq!(m.apply(p2), P1Point::finite(ExactScalar::one()));
        debug_assert_eq!(m.apply(p3), P1Point::Infinity);
        Ok(m)
    }

    pub fn apply(&self, p: &P1Point) -> P1Point {
        match p {
            P1Point::Finite(z) => {
                let num = &(&self.a * z) + &self.b;
                let den = &(&self.c * z) + &self.d;
                match den.inv() {
                    Some(inv) => P1Point::Finite(&num * &inv),
                    None => P1Point::Infinity,
                }
            }
            P1Point::Infinity => match self.c.inv() {
                Some(inv) => P1Point::Finite(&self.a * &inv),
                None => P1Point::Infinity,
            },
        }
    }

    pub fn inverse(&self) -> Self {
        MoebiusMap {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    /// `self ∘ rhs` as maps (apply `rhs` first).
    pub fn compose(&self, rhs: &Self) -> Self {
        MoebiusMap {
            a: &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            b: &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            c: &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            d: &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        }
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}*z + {})/({}*z + {})", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The gcd factorization of a pair: `f = h * [ra : rb]` with `gcd(ra, rb) = 1`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub h: HomogeneousForm,
    pub ra: HomogeneousForm,
    pub rb: HomogeneousForm,
}

/// A point of P^(2d+1): two degree-d forms, not both zero, up to scaling.
pub struct HomogeneousPair {
    fa: HomogeneousForm,
    fb: HomogeneousForm,
    fact: OnceLock<Factorization>,
}

impl HomogeneousPair {
    /// Raw constructor; no gcd extraction happens here.
    pub fn new(fa: HomogeneousForm, fb: HomogeneousForm) -> Result<Self> {
        if fa.degree() != fb.degree() {
            return Err(Error::DegenerateInput(format!(
                "coordinate degrees differ: {} vs {}",
                fa.degree(),
                fb.degree()
            )));
        }
        if fa.is_zero() && fb.is_zero() {
            return Err(Error::DegenerateInput("both coordinates zero".into()));
        }
        Ok(HomogeneousPair {
            fa,
            fb,
            fact: OnceLock::new(),
        })
    }

    /// Build from a known factorization `h * [ra : rb]`. Any residual common
    /// factor of the reduced candidates is folded into `h`, so the cached
    /// factorization is always fully reduced.
    pub fn from_parts(
        h: HomogeneousForm,
        ra: HomogeneousForm,
        rb: HomogeneousForm,
    ) -> Result<Self> {
        let (extra, ra, rb) = poly_gcd(&ra, &rb)?;
        let h = h.mul(&extra).normalized();
        let fa = h.mul(&ra);
        let fb = h.mul(&rb);
        let pair = HomogeneousPair::new(fa, fb)?;
        pair.fact
            .set(Factorization { h, ra, rb })
            .expect("fresh cell");
        Ok(pair)
    }

    pub fn degree(&self) -> u32 {
        self.fa.degree()
    }

    pub fn numerator(&self) -> &HomogeneousForm {
        &self.fa
    }

    pub fn denominator(&self) -> &HomogeneousForm {
        &self.fb
    }

    /// The cached gcd factorization (computed on first use).
    pub fn factorization(&self) -> &Factorization {
        self.fact.get_or_init(|| {
            let (h, ra, rb) =
                poly_gcd(&self.fa, &self.fb).expect("pair invariant: coordinates not both zero");
            Factorization { h, ra, rb }
        })
    }

    pub fn hole_form(&self) -> &HomogeneousForm {
        &self.factorization().h
    }

    /// Degree of the reduced map (`deg fhat = d - deg H`).
    pub fn reduced_degree(&self) -> u32 {
        self.degree() - self.factorization().h.degree()
    }

    pub fn is_degenerate(&self) -> bool {
        self.factorization().h.degree() > 0
    }

    /// Evaluate the reduced map at a point. Well-defined everywhere because
    /// the reduced coordinates have no common root.
    pub fn fhat_apply(&self, p: &P1Point) -> P1Point {
        let f = self.factorization();
        let va = f.ra.eval_point(p);
        let vb = f.rb.eval_point(p);
        debug_assert!(!(va.is_zero() && vb.is_zero()), "reduced pair not coprime");
        match vb.inv() {
            Some(inv) => P1Point::Finite(&va * &inv),
            None => P1Point::Infinity,
        }
    }

    pub fn fhat_fixes(&self, p: &P1Point) -> bool {
        self.fhat_apply(p) == *p
    }

    /// The form `X*rb - Y*ra` whose projective roots are exactly the fixed
    /// points of the reduced map.
    pub fn fixed_point_form(&self) -> HomogeneousForm {
        let f = self.factorization();
        let x = HomogeneousForm::monomial(1, 1, ExactScalar::one());
        let y = HomogeneousForm::monomial(1, 0, ExactScalar::one());
        x.mul(&f.rb).sub(&y.mul(&f.ra))
    }

    /// Conjugate by a Möbius map: `M^-1 ∘ f ∘ M`.
    pub fn conjugate(&self, m: &MoebiusMap) -> HomogeneousPair {
        let am = compose_with_moebius(&self.fa, m);
        let bm = compose_with_moebius(&self.fb, m);
        // M^-1 [u : v] = [d u - b v : -c u + a v]
        let fa = am.scale(&m.d).sub(&bm.scale(&m.b));
        let fb = bm.scale(&m.a).sub(&am.scale(&m.c));
        HomogeneousPair::new(fa, fb).expect("conjugation preserves nonzeroness")
    }

    /// Canonical representative: both coordinates scaled so the first
    /// nonzero coefficient (scanning the numerator from X^d down, then the
    /// denominator) is 1.
    pub fn normalized_coords(&self) -> (HomogeneousForm, HomogeneousForm) {
        let lead = self
            .fa
            .coeffs()
            .iter()
            .rev()
            .chain(self.fb.coeffs().iter().rev())
            .find(|c| !c.is_zero())
            .expect("pair invariant");
        let inv = lead.inv().unwrap();
        (self.fa.scale(&inv), self.fb.scale(&inv))
    }

    /// Projective equality of pairs.
    pub fn projectively_equal(&self, other: &HomogeneousPair) -> bool {
        if self.degree() != other.degree() {
            return false;
        }
        let (a1, b1) = self.normalized_coords();
        let (a2, b2) = other.normalized_coords();
        a1 == a2 && b1 == b2
    }
}

impl Clone for HomogeneousPair {
    fn clone(&self) -> Self {
        let pair = HomogeneousPair {
            fa: self.fa.clone(),
            fb: self.fb.clone(),
            fact: OnceLock::new(),
        };
        if let Some(f) = self.fact.get() {
            let _ = pair.fact.set(f.clone());
        }
        pair
    }
}

impl fmt::Display for HomogeneousPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {}]", self.fa, self.fb)
    }
}

impl fmt::Debug for HomogeneousPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Substitute `X -> a X + b Y`, `Y -> c X + d Y` into a form.
fn compose_with_moebius(form: &HomogeneousForm, m: &MoebiusMap) -> HomogeneousForm {
    let d = form.degree();
    let u = HomogeneousForm::new(1, vec![m.b.clone(), m.a.clone()]);
    let v = HomogeneousForm::new(1, vec![m.d.clone(), m.c.clone()]);
    let mut u_pows = Vec::with_capacity(d as usize + 1);
    let mut v_pows = Vec::with_capacity(d as usize + 1);
    let mut acc_u = HomogeneousForm::one();
    let mut acc_v = HomogeneousForm::one();
    for _ in 0..=d {
        u_pows.push(acc_u.clone());
        v_pows.push(acc_v.clone());
        acc_u = acc_u.mul(&u);
        acc_v = acc_v.mul(&v);
    }
    let mut out = HomogeneousForm::zero(d);
    for (i, c) in form.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = u_pows[i].mul(&v_pows[d as usize - i]).scale(c);
        out = out.add(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn moebius_three_point_normalization() {
        let p1 = P1Point::from_int(5);
        let p2 = P1Point::from_int(7);
        let p3 = P1Point::Infinity;
        let m = MoebiusMap::to_standard_triple(&p1, &p2, &p3).unwrap();
        assert_eq!(m.apply(&P1Point::from_int(9)), P1Point::from_int(2));
    }

    #[test]
    fn moebius_inverse_round_trip() {
        let m = MoebiusMap::new(s(2), s(1), s(1), s(3)).unwrap();
        let inv = m.inverse();
        for z in [
            P1Point::from_int(0),
            P1Point::from_int(4),
            P1Point::Infinity,
        ] {
            assert_eq!(inv.apply(&m.apply(&z)), z);
        }
    }

    #[test]
    fn pair_factorization_is_lazy_and_cached() {
        // X^2 Y, 2 X Y^2
        let fa = HomogeneousForm::monomial(3, 2, s(1));
        let fb = HomogeneousForm::monomial(3, 1, s(2));
        let pair = HomogeneousPair::new(fa, fb).unwrap();
        let f = pair.factorization();
        assert_eq!(f.h, HomogeneousForm::monomial(2, 1, s(1)));
        assert_eq!(pair.reduced_degree(), 1);
    }

    #[test]
    fn conjugation_by_translation_moves_roots() {
        // f = [X^2 : Y^2] is z -> z^2; conjugating by z -> z + 1 gives
        // z -> (z+1)^2 - 1, which fixes 0.
        let fa = HomogeneousForm::monomial(2, 2, s(1));
        let fb = HomogeneousForm::monomial(2, 0, s(1));
        let f = HomogeneousPair::new(fa, fb).unwrap();
        let m = MoebiusMap::affine(s(1), s(1)).unwrap();
        let g = f.conjugate(&m);
        assert!(g.fhat_fixes(&P1Point::from_int(0)));
        assert!(g.fhat_fixes(&P1Point::Infinity));
    }

    #[test]
    fn fhat_apply_on_reduced_map() {
        // XY [X : 2Y]: reduced map z -> z/2
        let fa = HomogeneousForm::monomial(3, 2, s(1));
        let fb = HomogeneousForm::monomial(3, 1, s(2));
        let pair = HomogeneousPair::new(fa, fb).unwrap();
        assert_eq!(pair.fhat_apply(&P1Point::from_int(4)), P1Point::from_int(2));
        assert!(pair.fhat_fixes(&P1Point::from_int(0)));
        assert!(pair.fhat_fixes(&P1Point::Infinity));
    }
}
