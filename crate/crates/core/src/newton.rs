//! Degenerate Newton maps from root divisors.
//!
//! A divisor of degree d (points of P^1 with multiplicities summing to d,
//! at least one finite) determines the boundary Newton map
//!
//! `N = H * Nhat`,  `H = prod (X - s Y)^(m_s - 1) * Y^(m_inf)`,
//!
//! with `Nhat` the Newton map of `prod (z - s)^(m_s)` over the distinct
//! finite points. This is the algebraic limit of Newton maps whose roots
//! collide according to the divisor; the limit consistency is exercised
//! separately through the one-parameter-subgroup machinery.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::form::{roots_of_form, HomogeneousForm};
use crate::projective::{HomogeneousPair, P1Point};
use crate::scalar::ExactScalar;

/// A multiset of P^1 points with multiplicities summing to the degree.
#[derive(Clone, PartialEq, Eq)]
pub struct RootDivisor {
    entries: Vec<(P1Point, u32)>,
    degree: u32,
}

impl RootDivisor {
    /// Entries must have positive multiplicities; points are deduplicated
    /// by summing. Degree (>= 2) is the total multiplicity.
    pub fn new(entries: Vec<(P1Point, u32)>) -> Result<Self> {
        let mut merged: Vec<(P1Point, u32)> = Vec::new();
        for (p, m) in entries {
            if m == 0 {
                return Err(Error::InvalidDivisor("zero multiplicity".into()));
            }
            match merged.iter_mut().find(|(q, _)| *q == p) {
                Some((_, acc)) => *acc += m,
                None => merged.push((p, m)),
            }
        }
        merged.sort_by(|(p, _), (q, _)| p.cmp_points(q));
        let degree: u32 = merged.iter().map(|(_, m)| m).sum();
        if degree < 2 {
            return Err(Error::InvalidDivisor(format!("degree {degree} < 2")));
        }
        Ok(RootDivisor {
            entries: merged,
            degree,
        })
    }

    pub fn from_points(points: Vec<P1Point>) -> Result<Self> {
        RootDivisor::new(points.into_iter().map(|p| (p, 1)).collect())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn entries(&self) -> &[(P1Point, u32)] {
        &self.entries
    }

    pub fn finite_entries(&self) -> impl Iterator<Item = (&ExactScalar, u32)> {
        self.entries.iter().filter_map(|(p, m)| match p {
            P1Point::Finite(z) => Some((z, *m)),
            P1Point::Infinity => None,
        })
    }

    pub fn infinity_multiplicity(&self) -> u32 {
        self.entries
            .iter()
            .find(|(p, _)| p.is_infinity())
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }

    pub fn multiplicity_of(&self, p: &P1Point) -> u32 {
        self.entries
            .iter()
            .find(|(q, _)| q == p)
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }

    /// Number of distinct finite support points.
    pub fn finite_support_len(&self) -> usize {
        self.finite_entries().count()
    }

    /// Total multiplicity carried by finite points.
    pub fn finite_mass(&self) -> u32 {
        self.finite_entries().map(|(_, m)| m).sum()
    }

    /// Push the divisor forward through an affine map `z -> a z + b`
    /// (infinity stays put).
    pub fn apply_affine(&self, scale: &ExactScalar, offset: &ExactScalar) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::DegenerateInput("affine map with zero scale".into()));
        }
        let entries = self
            .entries
            .iter()
            .map(|(p, m)| {
                let q = match p {
                    P1Point::Finite(z) => P1Point::Finite(&(z * scale) + offset),
                    P1Point::Infinity => P1Point::Infinity,
                };
                (q, *m)
            })
            .collect();
        RootDivisor::new(entries)
    }
}

impl fmt::Display for RootDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (p, m)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}:{m}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for RootDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A (possibly degenerate) Newton map together with its source divisor.
#[derive(Clone)]
pub struct NewtonMap {
    divisor: RootDivisor,
    pair: HomogeneousPair,
}

impl NewtonMap {
    /// Construct the boundary Newton map of a divisor.
    ///
    /// Errors when the divisor has no finite point (such limits are
    /// indeterminate and carry no Newton map).
    pub fn from_divisor(divisor: RootDivisor) -> Result<Self> {
        let finite: Vec<(ExactScalar, u32)> = divisor
            .finite_entries()
            .map(|(z, m)| (z.clone(), m))
            .collect();
        if finite.is_empty() {
            return Err(Error::UnsupportedDivisor("all roots at infinity".into()));
        }
        let m_inf = divisor.infinity_multiplicity();

        // S = sum_i m_i prod_{j != i} (X - r_j Y), degree n-1
        // Pr = prod_i (X - r_i Y), degree n
        // Nhat = [X*S - Pr : Y*S]
        let n = finite.len() as u32;
        let linears: Vec<HomogeneousForm> = finite
            .iter()
            .map(|(r, _)| HomogeneousForm::linear_factor(&P1Point::Finite(r.clone())))
            .collect();
        let mut pr = HomogeneousForm::one();
        for l in &linears {
            pr = pr.mul(l);
        }
        let mut s = HomogeneousForm::zero(n.saturating_sub(1));
        for (i, (_, m)) in finite.iter().enumerate() {
            let mut prod = HomogeneousForm::one();
            for (j, l) in linears.iter().enumerate() {
                if j != i {
                    prod = prod.mul(l);
                }
            }
            s = s.add(&prod.scale(&ExactScalar::from_int(*m as i64)));
        }
        let x = HomogeneousForm::monomial(1, 1, ExactScalar::one());
        let y = HomogeneousForm::monomial(1, 0, ExactScalar::one());
        let nhat_a = x.mul(&s).sub(&pr);
        let nhat_b = y.mul(&s);

        let mut hole_factors: Vec<(P1Point, u32)> = finite
            .iter()
            .filter(|(_, m)| *m >= 2)
            .map(|(r, m)| (P1Point::Finite(r.clone()), m - 1))
            .collect();
        if m_inf > 0 {
            hole_factors.push((P1Point::Infinity, m_inf));
        }
        let h = HomogeneousForm::from_linear_factors(&hole_factors);

        // Any residual common factor of the reduced candidates (which only
        // occurs when the finite mass is 1 and Nhat collapses to a constant)
        // is folded into H by from_parts.
        let pair = HomogeneousPair::from_parts(h, nhat_a, nhat_b)?;
        debug_assert_eq!(pair.degree(), divisor.degree());
        Ok(NewtonMap { divisor, pair })
    }

    pub fn divisor(&self) -> &RootDivisor {
        &self.divisor
    }

    pub fn pair(&self) -> &HomogeneousPair {
        &self.pair
    }

    pub fn degree(&self) -> u32 {
        self.pair.degree()
    }

    /// Exact holes of the map with their depths, from the factorization.
    /// Empty exactly when the map is nondegenerate.
    pub fn holes_and_depths(&self) -> Vec<(P1Point, u32)> {
        let h = self.pair.hole_form();
        if h.degree() == 0 {
            return Vec::new();
        }
        let roots = roots_of_form(h).expect("hole form of a Newton map splits into linears");
        debug_assert!(roots.remainder.is_none());
        roots.roots
    }

    /// Multiplier of the reduced map at a root of the divisor:
    /// `(m - 1)/m` for a root of multiplicity m.
    pub fn multiplier_at_root(&self, s: &P1Point) -> Result<ExactScalar> {
        let z = s
            .as_finite()
            .ok_or_else(|| Error::NotARoot("infinity is not a superattracting root".into()))?;
        let m = self.divisor.multiplicity_of(s);
        if m == 0 {
            return Err(Error::NotARoot(format!("{s} is not in the divisor")));
        }
        let _ = z;
        let m = ExactScalar::from_int(m as i64);
        Ok(&(&m - &ExactScalar::one()) / &m)
    }

    /// The divisor `D(N)` on C: multiplicity at each finite point
    /// (depth + 1 at holes, 1 at superattracting fixed points).
    pub fn attracting_divisor(&self) -> Vec<(ExactScalar, u32)> {
        self.divisor
            .finite_entries()
            .map(|(z, m)| (z.clone(), m))
            .collect()
    }

    /// Conjugate by an affine map, acting on the source divisor.
    pub fn conjugate_affine(&self, scale: &ExactScalar, offset: &ExactScalar) -> Result<NewtonMap> {
        NewtonMap::from_divisor(self.divisor.apply_affine(scale, offset)?)
    }
}

impl fmt::Display for NewtonMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N_{} = {}", self.divisor, self.pair)
    }
}

impl fmt::Debug for NewtonMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A Newton map with its fixed points marked: `(inf, p_1, ..., p_d)` where
/// the `p_i` list the divisor points with multiplicity. Infinity occurs
/// `m_inf + 1` times in the full list (itself plus each escaped root).
#[derive(Clone)]
pub struct MarkedNewtonMap {
    map: NewtonMap,
    marks: Vec<P1Point>,
}

impl MarkedNewtonMap {
    /// Build from the ordered root list (length d).
    pub fn from_roots(roots: Vec<P1Point>) -> Result<Self> {
        let divisor = RootDivisor::from_points(roots.clone())?;
        let map = NewtonMap::from_divisor(divisor)?;
        let mut marks = Vec::with_capacity(roots.len() + 1);
        marks.push(P1Point::Infinity);
        marks.extend(roots);
        Ok(MarkedNewtonMap { map, marks })
    }

    pub fn map(&self) -> &NewtonMap {
        &self.map
    }

    /// The full mark list `(inf, p_1, ..., p_d)`.
    pub fn marks(&self) -> &[P1Point] {
        &self.marks
    }

    /// The d root marks (without the leading infinity).
    pub fn root_marks(&self) -> &[P1Point] {
        &self.marks[1..]
    }

    /// Check the mark/divisor consistency (each point appears exactly its
    /// multiplicity many times among the root marks).
    pub fn is_consistent(&self) -> bool {
        let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
        for p in self.root_marks() {
            let idx = self
                .map
                .divisor()
                .entries()
                .iter()
                .position(|(q, _)| q == p);
            match idx {
                Some(i) => *counts.entry(i).or_insert(0) += 1,
                None => return false,
            }
        }
        self.map
            .divisor()
            .entries()
            .iter()
            .enumerate()
            .all(|(i, (_, m))| counts.get(&i) == Some(m))
    }
}

/// Direct symbolic Newton map of a polynomial with the given exact
/// coefficients (little-endian): the homogenization of `z - P/P'`.
///
/// Used as an independent construction route for nondegenerate divisors.
pub fn newton_pair_of_polynomial(coeffs: &[ExactScalar]) -> Result<HomogeneousPair> {
    let d = coeffs.len().saturating_sub(1);
    if d < 2 || coeffs[d].is_zero() {
        return Err(Error::DegenerateInput(
            "polynomial of degree < 2 or zero leading coefficient".into(),
        ));
    }
    // numerator z P' - P  (degree d), denominator P' (degree d-1)
    let mut num = vec![ExactScalar::zero(); d + 1];
    let mut dp = vec![ExactScalar::zero(); d];
    for (k, c) in coeffs.iter().enumerate() {
        let kk = ExactScalar::from_int(k as i64);
        // z * k c z^(k-1) - c z^k = (k-1) c z^k
        num[k] = &(&kk - &ExactScalar::one()) * c;
        if k >= 1 {
            dp[k - 1] = &kk * c;
        }
    }
    let fa = HomogeneousForm::new(d as u32, num);
    // denominator homogenized at degree d: Y * hom(P')
    let y = HomogeneousForm::monomial(1, 0, ExactScalar::one());
    let fb = y.mul(&HomogeneousForm::new(d as u32 - 1, dp));
    HomogeneousPair::new(fa, fb)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn pt(n: i64) -> P1Point {
        P1Point::from_int(n)
    }

    fn divisor(entries: &[(P1Point, u32)]) -> RootDivisor {
        RootDivisor::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn cubic_case_one_hole_at_infinity() {
        // {0:1, 1:1, inf:1} -> Y [X^2 : 2XY - Y^2]
        let n = NewtonMap::from_divisor(divisor(&[(pt(0), 1), (pt(1), 1), (P1Point::Infinity, 1)]))
            .unwrap();
        let f = n.pair().factorization();
        assert_eq!(f.h, HomogeneousForm::monomial(1, 0, s(1)));
        assert_eq!(f.ra.normalized(), HomogeneousForm::monomial(2, 2, s(1)));
        assert_eq!(f.rb, HomogeneousForm::new(2, vec![s(-1), s(2), s(0)]));
    }

    #[test]
    fn cubic_double_root_is_xy_x_2y() {
        // {0:2, inf:1} -> XY [X : 2Y]
        let n = NewtonMap::from_divisor(divisor(&[(pt(0), 2), (P1Point::Infinity, 1)])).unwrap();
        assert_eq!(n.pair().numerator(), &HomogeneousForm::monomial(3, 2, s(1)));
        assert_eq!(
            n.pair().denominator(),
            &HomogeneousForm::monomial(3, 1, s(2))
        );
    }

    #[test]
    fn nondegenerate_cubic_matches_direct_formula() {
        // {0:1, 1:1, 2:1}: independent oracle by symbolic differentiation of
        // P = z(z-1)(z-2) = z^3 - 3z^2 + 2z.
        let n = NewtonMap::from_divisor(divisor(&[(pt(0), 1), (pt(1), 1), (pt(2), 1)])).unwrap();
        assert_eq!(n.pair().hole_form().degree(), 0);
        let oracle = newton_pair_of_polynomial(&[s(0), s(2), s(-3), s(1)]).unwrap();
        assert!(n.pair().projectively_equal(&oracle));
    }

    #[test]
    fn all_infinity_divisor_rejected() {
        let err = NewtonMap::from_divisor(divisor(&[(P1Point::Infinity, 3)])).unwrap_err();
        assert_eq!(err.code(), "unsupported-divisor");
    }

    #[test]
    fn holes_round_trip_matches_divisor() {
        // {0:3, 1:1, 2:1, 3:1} at d=6: holes {0:2}
        let n = NewtonMap::from_divisor(divisor(&[(pt(0), 3), (pt(1), 1), (pt(2), 1), (pt(3), 1)]))
            .unwrap();
        assert_eq!(n.holes_and_depths(), vec![(pt(0), 2)]);
    }

    #[test]
    fn single_simple_finite_root_collapses() {
        // {0:1, inf:2}: the reduced candidates share a factor of Y and the
        // construction self-corrects to Y^3 [0 : 1], a constant map with a
        // depth-3 hole at infinity.
        let n = NewtonMap::from_divisor(divisor(&[(pt(0), 1), (P1Point::Infinity, 2)])).unwrap();
        assert_eq!(n.pair().reduced_degree(), 0);
        assert_eq!(n.holes_and_depths(), vec![(P1Point::Infinity, 3)]);
    }

    #[test]
    fn multiplier_is_m_minus_one_over_m() {
        let n = NewtonMap::from_divisor(divisor(&[(pt(0), 3), (pt(1), 2), (pt(5), 1)])).unwrap();
        assert_eq!(
            n.multiplier_at_root(&pt(0)).unwrap(),
            ExactScalar::from_ratio(2, 3)
        );
        assert_eq!(
            n.multiplier_at_root(&pt(1)).unwrap(),
            ExactScalar::from_ratio(1, 2)
        );
        assert!(n.multiplier_at_root(&pt(0)).unwrap() != s(1));
        assert_eq!(n.multiplier_at_root(&pt(5)).unwrap(), s(0));
        assert!(n.multiplier_at_root(&pt(7)).is_err());
    }

    #[test]
    fn multiplier_matches_exact_derivative_of_reduced_map() {
        // oracle: (ra' rb - ra rb')/rb^2 evaluated at the root, done on the
        // dehomogenized coordinates
        let n = NewtonMap::from_divisor(divisor(&[(pt(0), 2), (pt(3), 1), (pt(1), 2)])).unwrap();
        for root in [pt(0), pt(3), pt(1)] {
            let z = root.as_finite().unwrap();
            let f = n.pair().factorization();
            let ra_full = affine_poly(&f.ra);
            let rb_full = affine_poly(&f.rb);
            let d_ra = ra_full.derivative();
            let d_rb = rb_full.derivative();
            let num = &(&d_ra.eval(z) * &rb_full.eval(z)) - &(&ra_full.eval(z) * &d_rb.eval(z));
            let den = &rb_full.eval(z) * &rb_full.eval(z);
            let derivative = &num / &den;
            assert_eq!(derivative, n.multiplier_at_root(&root).unwrap());
        }
    }

    fn affine_poly(form: &HomogeneousForm) -> crate::poly::QPoly {
        crate::poly::QPoly::from_coeffs(form.coeffs().to_vec())
    }

    #[test]
    fn marked_map_consistency() {
        let m = MarkedNewtonMap::from_roots(vec![pt(0), pt(0), pt(1)]).unwrap();
        assert!(m.is_consistent());
        assert_eq!(m.marks().len(), 4);
        assert_eq!(m.marks()[0], P1Point::Infinity);
    }
}
