//! GIT stability of points of P^(2d+1).
//!
//! The decision procedure is the depth criterion on holes: writing
//! `f = H * fhat`, the verdict depends only on the multiplicities of the
//! zeros of H and on whether the critical-depth holes are fixed by fhat.
//! Both questions are answered without extracting roots: the depth
//! multiset comes from a squarefree decomposition of H, and "some hole of
//! this depth is fixed" is a gcd of the squarefree part against the
//! fixed-point form of fhat. Verdicts are therefore always certified,
//! even when the holes are irrational.
//!
//! For d even the stable and semistable loci coincide; for odd d the gap
//! between depth (d-1)/2 and (d+1)/2 carries the strictly semistable
//! classes, whose Newton representatives all degenerate onto the single
//! normal form `phi_d = X^((d-1)/2) Y^((d-1)/2) [(d-1)X : (d+1)Y]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::form::{poly_gcd, roots_of_form, HomogeneousForm};
use crate::newton::NewtonMap;
use crate::projective::{HomogeneousPair, MoebiusMap, P1Point};
use crate::scalar::ExactScalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VerdictKind {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl VerdictKind {
    pub fn is_semistable(self) -> bool {
        !matches!(self, VerdictKind::Unstable)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Stable => "stable",
            VerdictKind::StrictlySemistable => "strictly_semistable",
            VerdictKind::Unstable => "unstable",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// The extremal (deepest) hole backing a verdict. The hole itself is only
/// reported when it lies in the scalar field; the depth is always exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub depth: u32,
    pub hole: Option<P1Point>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StabilityVerdict {
    pub kind: VerdictKind,
    pub witness: Option<Witness>,
}

impl StabilityVerdict {
    pub fn is_semistable(&self) -> bool {
        self.kind.is_semistable()
    }
}

/// A one-parameter subgroup `[t^a X : t^b Y]`, optionally preceded by an
/// exact change of coordinates.
#[derive(Clone)]
pub struct OneParamWeight {
    pub a: i64,
    pub b: i64,
    pub conjugator: Option<MoebiusMap>,
}

impl OneParamWeight {
    pub fn diagonal(a: i64, b: i64) -> Self {
        OneParamWeight {
            a,
            b,
            conjugator: None,
        }
    }

    pub fn with_conjugator(a: i64, b: i64, m: MoebiusMap) -> Self {
        OneParamWeight {
            a,
            b,
            conjugator: Some(m),
        }
    }
}

/// Classify a point of P^(2d+1) by the depth criterion.
#[allow(clippy::manual_div_ceil)]
pub fn classify_pair(f: &HomogeneousPair) -> StabilityVerdict {
    let d = f.degree();
    debug_assert!(d >= 2);
    let h = f.hole_form();
    if h.degree() == 0 {
        return StabilityVerdict {
            kind: VerdictKind::Stable,
            witness: None,
        };
    }
    let profile = h.multiplicity_profile();
    let fix = f.fixed_point_form();
    // does some hole of exact depth k sit on a fixed point of fhat?
    let fixed_at = |factor: &HomogeneousForm| -> bool {
        let (g, _, _) = poly_gcd(factor, &fix).expect("nonzero forms");
        g.degree() >= 1
    };

    let ok = |cap_strict: u32, factor_mult: u32, factor: &HomogeneousForm| -> bool {
        factor_mult < cap_strict || (factor_mult == cap_strict && !fixed_at(factor))
    };

    let kind = if d.is_multiple_of(2) {
        let cap = d / 2;
        let stable = profile.iter().all(|(k, fk)| ok(cap, *k, fk));
        if stable {
            VerdictKind::Stable
        } else {
            VerdictKind::Unstable
        }
    } else {
        let s_cap = (d - 1) / 2;
        let ss_cap = (d + 1) / 2;
        let stable = profile.iter().all(|(k, fk)| ok(s_cap, *k, fk));
        let semistable = profile.iter().all(|(k, fk)| ok(ss_cap, *k, fk));
        if stable {
            VerdictKind::Stable
        } else if semistable {
            VerdictKind::StrictlySemistable
        } else {
            VerdictKind::Unstable
        }
    };

    StabilityVerdict {
        kind,
        witness: extremal_witness(&profile),
    }
}

/// Deepest hole: finite before infinity, then (re, im)-lexicographic.
fn extremal_witness(profile: &[(u32, HomogeneousForm)]) -> Option<Witness> {
    let (depth, factor) = profile.iter().max_by_key(|(k, _)| *k)?;
    let hole = match roots_of_form(factor) {
        Ok(r) => r.roots.first().map(|(p, _)| p.clone()),
        Err(_) => None,
    };
    Some(Witness {
        depth: *depth,
        hole,
    })
}

/// Classify a Newton map by the specialized depth bounds (every hole of a
/// Newton map is fixed by the reduced map, so the side conditions of the
/// general criterion collapse into smaller caps).
#[allow(clippy::int_plus_one)] // d/2 - 1 is the cap as stated
pub fn classify_newton(n: &NewtonMap) -> StabilityVerdict {
    let d = n.degree();
    let holes = n.holes_and_depths();
    let max = holes.iter().map(|(_, k)| *k).max().unwrap_or(0);
    let kind = if d.is_multiple_of(2) {
        if max <= d / 2 - 1 {
            VerdictKind::Stable
        } else {
            VerdictKind::Unstable
        }
    } else if max <= (d - 3) / 2 {
        VerdictKind::Stable
    } else if max <= (d - 1) / 2 {
        VerdictKind::StrictlySemistable
    } else {
        VerdictKind::Unstable
    };
    let witness = holes
        .iter()
        .filter(|(_, k)| *k == max)
        .min_by(|(p, _), (q, _)| p.cmp_points(q))
        .map(|(p, k)| Witness {
            depth: *k,
            hole: Some(p.clone()),
        });
    StabilityVerdict { kind, witness }
}

/// Membership in the indeterminacy locus I(d): the reduced map is a
/// constant c and H(c) = 0.
pub fn is_indeterminate(f: &HomogeneousPair) -> bool {
    if f.reduced_degree() != 0 {
        return false;
    }
    let fact = f.factorization();
    // constant map c = [ra : rb] with ra, rb scalars
    let c = if fact.rb.coeffs()[0].is_zero() {
        P1Point::Infinity
    } else {
        P1Point::Finite(&fact.ra.coeffs()[0] / &fact.rb.coeffs()[0])
    };
    fact.h.eval_point(&c).is_zero()
}

/// Conjugate `f` by the weighted action `[t^a X : t^b Y]` (after the
/// optional coordinate change) and return the exact limit as `t -> 0`:
/// the sub-pair of minimal total t-weight.
pub fn ops_limit(f: &HomogeneousPair, w: &OneParamWeight) -> HomogeneousPair {
    let g = match &w.conjugator {
        Some(m) => f.conjugate(m),
        None => f.clone(),
    };
    let d = g.degree() as i64;
    // coefficient of X^i Y^(d-i) in coordinate r (r = a-row or b-row)
    // picks up weight a*i + b*(d-i) - w_r under conjugation
    let weight = |i: i64, row: i64| w.a * i + w.b * (d - i) - row;
    let mut min_w = i64::MAX;
    for (i, c) in g.numerator().coeffs().iter().enumerate() {
        if !c.is_zero() {
            min_w = min_w.min(weight(i as i64, w.a));
        }
    }
    for (i, c) in g.denominator().coeffs().iter().enumerate() {
        if !c.is_zero() {
            min_w = min_w.min(weight(i as i64, w.b));
        }
    }
    let filter = |form: &HomogeneousForm, row: i64| -> HomogeneousForm {
        let coeffs = form
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if !c.is_zero() && weight(i as i64, row) == min_w {
                    c.clone()
                } else {
                    ExactScalar::zero()
                }
            })
            .collect();
        HomogeneousForm::new(form.degree(), coeffs)
    };
    let fa = filter(g.numerator(), w.a);
    let fb = filter(g.denominator(), w.b);
    HomogeneousPair::new(fa, fb).expect("minimal-weight terms exist")
}

/// The strictly semistable normal form
/// `phi_d = X^((d-1)/2) Y^((d-1)/2) [(d-1)X : (d+1)Y]` for odd d >= 3.
pub fn strictly_semistable_normal_form(d: u32) -> Result<HomogeneousPair> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::NoStrictlySemistable(d));
    }
    let half = (d - 1) / 2;
    let fa = HomogeneousForm::monomial(d, half + 1, ExactScalar::from_int((d - 1) as i64));
    let fb = HomogeneousForm::monomial(d, half, ExactScalar::from_int((d + 1) as i64));
    HomogeneousPair::new(fa, fb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::RootDivisor;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn pt(n: i64) -> P1Point {
        P1Point::from_int(n)
    }

    fn newton(entries: &[(P1Point, u32)]) -> NewtonMap {
        NewtonMap::from_divisor(RootDivisor::new(entries.to_vec()).unwrap()).unwrap()
    }

    /// XY [X : 2X + 2Y] from the strictly-semistable example.
    fn xy_x_2x2y() -> HomogeneousPair {
        let xy = HomogeneousForm::monomial(2, 1, s(1));
        let inner_a = HomogeneousForm::new(1, vec![s(0), s(1)]);
        let inner_b = HomogeneousForm::new(1, vec![s(2), s(2)]);
        HomogeneousPair::new(xy.mul(&inner_a), xy.mul(&inner_b)).unwrap()
    }

    #[test]
    fn strictly_semistable_example_pair() {
        // depth-1 holes at 0 and inf; fhat fixes 0, so not stable; no
        // depth-2 hole, so semistable.
        let f = xy_x_2x2y();
        let v = classify_pair(&f);
        assert_eq!(v.kind, VerdictKind::StrictlySemistable);
        assert_eq!(
            v.witness,
            Some(Witness {
                depth: 1,
                hole: Some(pt(0))
            })
        );
    }

    #[test]
    fn constant_at_own_hole_is_indeterminate_and_unstable() {
        // Y^3 [1 : 0]
        let fa = HomogeneousForm::monomial(3, 0, s(1));
        let fb = HomogeneousForm::zero(3);
        let f = HomogeneousPair::new(fa, fb).unwrap();
        assert!(is_indeterminate(&f));
        assert_eq!(classify_pair(&f).kind, VerdictKind::Unstable);
    }

    #[test]
    fn nondegenerate_maps_are_stable() {
        let n = newton(&[(pt(0), 1), (pt(1), 1), (pt(2), 1)]);
        assert_eq!(classify_pair(n.pair()).kind, VerdictKind::Stable);
        assert!(!is_indeterminate(n.pair()));
    }

    #[test]
    fn newton_criterion_even_degree() {
        assert_eq!(
            classify_newton(&newton(&[(pt(0), 2), (pt(1), 1), (pt(2), 1)])).kind,
            VerdictKind::Stable
        );
        assert_eq!(
            classify_newton(&newton(&[(pt(0), 1), (pt(1), 1), (P1Point::Infinity, 2)])).kind,
            VerdictKind::Unstable
        );
    }

    #[test]
    fn newton_criterion_cubic_boundary_never_stable() {
        for entries in [
            vec![(pt(0), 1), (pt(1), 1), (P1Point::Infinity, 1)],
            vec![(pt(0), 2), (pt(1), 1)],
            vec![(pt(0), 2), (P1Point::Infinity, 1)],
        ] {
            let v = classify_newton(&newton(&entries));
            assert_eq!(v.kind, VerdictKind::StrictlySemistable);
        }
    }

    #[test]
    fn ops_limit_identity_weight_is_id() {
        let f = xy_x_2x2y();
        let g = ops_limit(&f, &OneParamWeight::diagonal(1, 1));
        assert!(f.projectively_equal(&g));
    }

    #[test]
    fn ops_limit_drives_example_to_normal_form() {
        // XY [X : 2X+2Y] with weight (1, 0) -> XY [X : 2Y]
        let f = xy_x_2x2y();
        let g = ops_limit(&f, &OneParamWeight::diagonal(1, 0));
        let phi3 = strictly_semistable_normal_form(3).unwrap();
        assert!(g.projectively_equal(&phi3));
    }

    #[test]
    fn semi_singleton_case_one() {
        // d=5, divisor {0:1, 1:2, inf:2}: hole at inf of depth 2 = (d-1)/2,
        // weight (-1, 1) degenerates it to phi_5.
        let n = newton(&[(pt(0), 1), (pt(1), 2), (P1Point::Infinity, 2)]);
        assert_eq!(classify_newton(&n).kind, VerdictKind::StrictlySemistable);
        let lim = ops_limit(n.pair(), &OneParamWeight::diagonal(-1, 1));
        let phi5 = strictly_semistable_normal_form(5).unwrap();
        assert!(lim.projectively_equal(&phi5));
    }

    #[test]
    fn semi_singleton_case_two() {
        // d=3, divisor {0:2, 1:1}: finite hole at 0, weight (1, -1).
        let n = newton(&[(pt(0), 2), (pt(1), 1)]);
        let lim = ops_limit(n.pair(), &OneParamWeight::diagonal(1, -1));
        let phi3 = strictly_semistable_normal_form(3).unwrap();
        assert!(lim.projectively_equal(&phi3));
    }

    #[test]
    fn semi_singleton_case_two_with_escape() {
        // d=5, divisor {0:3, 1:1, inf:1}: the single deep hole is finite
        // and part of the mass has escaped; the same weight still reaches
        // the normal form.
        let n = newton(&[(pt(0), 3), (pt(1), 1), (P1Point::Infinity, 1)]);
        assert_eq!(classify_newton(&n).kind, VerdictKind::StrictlySemistable);
        let lim = ops_limit(n.pair(), &OneParamWeight::diagonal(1, -1));
        let phi5 = strictly_semistable_normal_form(5).unwrap();
        assert!(lim.projectively_equal(&phi5));
    }

    #[test]
    fn semi_singleton_case_three_at_higher_degree() {
        // d=5, divisor {0:3, inf:2}: two deep holes already at 0 and
        // infinity; the pair is phi_5 on the nose.
        let n = newton(&[(pt(0), 3), (P1Point::Infinity, 2)]);
        let phi5 = strictly_semistable_normal_form(5).unwrap();
        assert!(n.pair().projectively_equal(&phi5));
    }

    #[test]
    fn normal_form_values() {
        let phi3 = strictly_semistable_normal_form(3).unwrap();
        assert_eq!(phi3.to_string(), "[2*X^2*Y : 4*X*Y^2]");
        let xy_x_2y = HomogeneousPair::new(
            HomogeneousForm::monomial(3, 2, s(1)),
            HomogeneousForm::monomial(3, 1, s(2)),
        )
        .unwrap();
        assert!(phi3.projectively_equal(&xy_x_2y));
        let phi5 = strictly_semistable_normal_form(5).unwrap();
        assert_eq!(phi5.to_string(), "[4*X^3*Y^2 : 6*X^2*Y^3]");
        assert!(strictly_semistable_normal_form(4).is_err());
        assert_eq!(classify_pair(&phi3).kind, VerdictKind::StrictlySemistable);
        assert_eq!(classify_pair(&phi5).kind, VerdictKind::StrictlySemistable);
    }

    #[test]
    fn newton_and_pair_classifications_agree() {
        let fixtures: Vec<Vec<(P1Point, u32)>> = vec![
            vec![(pt(0), 1), (pt(1), 1)],
            vec![(pt(0), 2)],
            vec![(pt(0), 1), (P1Point::Infinity, 1)],
            vec![(pt(0), 2), (pt(1), 1)],
            vec![(pt(0), 3)],
            vec![(pt(0), 2), (P1Point::Infinity, 2)],
            vec![(pt(0), 3), (pt(1), 1), (P1Point::Infinity, 1)],
            vec![(pt(0), 1), (pt(1), 1), (pt(2), 1), (pt(3), 1), (pt(4), 1)],
            vec![(pt(0), 4), (pt(1), 1)],
            vec![(pt(0), 1), (P1Point::Infinity, 4)],
        ];
        for entries in fixtures {
            let n = newton(&entries);
            assert_eq!(
                classify_newton(&n).kind,
                classify_pair(n.pair()).kind,
                "mismatch for {entries:?}"
            );
        }
    }
}
