//! Symbolic composition and iteration of homogeneous pairs.
//!
//! Composition is formal substitution of one pair into the other, giving
//! the raw point of P^(2 d1 d2 + 1) with no gcd extraction (the cached
//! factorization of [`HomogeneousPair`] stays lazy). Iterate reports then
//! classify each power, which is where the preservation of (semi)stability
//! along `f -> f^n` becomes something a test can actually check by brute
//! force rather than by quoting the theorem.

use std::fmt;

use crate::error::{Error, Result};
use crate::form::{roots_of_form, HomogeneousForm};
use crate::moduli::{git_class, minimal_diagonal, GitClassDescriptor};
use crate::newton::NewtonMap;
use crate::projective::{HomogeneousPair, P1Point};
use crate::scalar::ExactScalar;
use crate::stability::{
    classify_newton, classify_pair, is_indeterminate, StabilityVerdict, VerdictKind,
};

/// Default cap on `d^n` (coefficients per form) for symbolic iterates.
pub const DEFAULT_ITERATE_BUDGET: u64 = 1024;

/// Formal composition `f ∘ g` of pairs of degrees d1 and d2: the raw pair
/// of degree d1*d2 obtained by substituting the coordinates of `g` into
/// the coordinate forms of `f`.
pub fn compose(f: &HomogeneousPair, g: &HomogeneousPair) -> HomogeneousPair {
    let d1 = f.degree() as usize;
    let ga = g.numerator();
    let gb = g.denominator();
    let mut ga_pows: Vec<HomogeneousForm> = Vec::with_capacity(d1 + 1);
    let mut gb_pows: Vec<HomogeneousForm> = Vec::with_capacity(d1 + 1);
    let mut acc_a = HomogeneousForm::one();
    let mut acc_b = HomogeneousForm::one();
    for _ in 0..=d1 {
        ga_pows.push(acc_a.clone());
        gb_pows.push(acc_b.clone());
        acc_a = acc_a.mul(ga);
        acc_b = acc_b.mul(gb);
    }
    let substitute = |form: &HomogeneousForm| -> HomogeneousForm {
        let mut out = HomogeneousForm::zero(f.degree() * g.degree());
        for (i, c) in form.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = ga_pows[i].mul(&gb_pows[d1 - i]).scale(c);
            out = out.add(&term);
        }
        out
    };
    HomogeneousPair::new(substitute(f.numerator()), substitute(f.denominator()))
        .expect("composition of nonzero pairs is nonzero")
}

/// The identity pair `[X : Y]`.
pub fn identity_pair() -> HomogeneousPair {
    HomogeneousPair::new(
        HomogeneousForm::monomial(1, 1, ExactScalar::one()),
        HomogeneousForm::monomial(1, 0, ExactScalar::one()),
    )
    .unwrap()
}

/// One iterate with its classification data.
#[derive(Clone, Debug)]
pub struct IterateStep {
    pub n: u32,
    pub degree: u32,
    pub verdict: StabilityVerdict,
    /// Hole depth profile: `(depth, count)` counts distinct holes (over the
    /// algebraic closure) of each exact depth.
    pub depth_profile: Vec<(u32, u32)>,
    /// The explicit hole multiset when it is exactly extractable.
    pub holes: Option<Vec<(P1Point, u32)>>,
}

/// All iterates of a Newton map up to n, with verdicts.
pub struct IterateReport {
    pub steps: Vec<IterateStep>,
    /// The raw n-th iterate pair.
    pub pair: HomogeneousPair,
}

impl fmt::Debug for IterateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IterateReport")
            .field("steps", &self.steps)
            .finish()
    }
}

fn classify_step(n: u32, pair: &HomogeneousPair) -> IterateStep {
    let verdict = classify_pair(pair);
    let h = pair.hole_form();
    let profile: Vec<(u32, u32)> = h
        .multiplicity_profile()
        .iter()
        .map(|(k, f)| (*k, f.degree()))
        .collect();
    let holes = if h.degree() == 0 {
        Some(Vec::new())
    } else {
        match roots_of_form(h) {
            Ok(r) if r.remainder.is_none() => Some(r.roots),
            _ => None,
        }
    };
    IterateStep {
        n,
        degree: pair.degree(),
        verdict,
        depth_profile: profile,
        holes,
    }
}

/// Compute all iterates `N, N^2, ..., N^n` by direct symbolic composition
/// and classify each one.
///
/// Errors on indeterminate input (iteration is not defined there), when the
/// budget `d^n <= budget` is exceeded, and if the classification category
/// fails to be constant along the orbit (which would contradict the
/// iterate-preservation results and indicates a bug).
pub fn iterate_report(n: &NewtonMap, count: u32, budget: Option<u64>) -> Result<IterateReport> {
    if count < 1 {
        return Err(Error::DegenerateInput("iterate count must be >= 1".into()));
    }
    if is_indeterminate(n.pair()) {
        return Err(Error::IndeterminateInput);
    }
    let budget = budget.unwrap_or(DEFAULT_ITERATE_BUDGET);
    let d = n.degree() as u64;
    let required = d.checked_pow(count).ok_or(Error::BudgetExceeded {
        required: u64::MAX,
        budget,
    })?;
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }

    let mut steps = Vec::with_capacity(count as usize);
    let mut current = n.pair().clone();
    steps.push(classify_step(1, &current));
    for k in 2..=count {
        current = compose(&current, n.pair());
        steps.push(classify_step(k, &current));
    }
    let base_kind = steps[0].verdict.kind;
    for step in &steps {
        if step.verdict.kind != base_kind {
            return Err(Error::Internal(format!(
                "iterate verdict drift: N is {:?} but N^{} is {:?}",
                base_kind, step.n, step.verdict.kind
            )));
        }
    }
    Ok(IterateReport {
        steps,
        pair: current,
    })
}

/// One entry of the orbit-of-classes sequence `([N], [N^2], ..., [N^n])`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OrbitClassEntry {
    /// Stable orbit: the class of the iterate is determined by the class of
    /// the base map (iteration preserves stable conjugacy).
    Stable {
        degree: u64,
        class: GitClassDescriptor,
    },
    /// Strictly semistable orbit: the minimal (closed-orbit) diagonal
    /// representative `X^k Y^k [X : lambda^-1 Y]`, recorded by its depth
    /// and multiplier, computed from the composed iterate itself.
    MinimalDiagonal {
        degree: u64,
        half_depth: u32,
        multiplier: ExactScalar,
    },
}

/// The finite orbit of GIT classes of a semistable Newton map.
///
/// Strictly semistable entries are computed independently per iterate by
/// composing and reducing to the minimal diagonal form, so the statement
/// "the first entry determines the rest" is a checkable property rather
/// than a definition.
pub fn orbit_classes(
    n: &NewtonMap,
    count: u32,
    budget: Option<u64>,
) -> Result<Vec<OrbitClassEntry>> {
    let verdict = classify_newton(n);
    match verdict.kind {
        VerdictKind::Unstable => Err(Error::UnstableInput(format!(
            "orbit classes need a semistable map, got {}",
            n.divisor()
        ))),
        VerdictKind::Stable => {
            let class = git_class(n)?;
            let d = n.degree() as u64;
            Ok((1..=count)
                .map(|k| OrbitClassEntry::Stable {
                    degree: d.pow(k),
                    class: class.clone(),
                })
                .collect())
        }
        VerdictKind::StrictlySemistable => {
            // validates budget and verdict constancy along the way
            iterate_report(n, count, budget)?;
            let mut out = Vec::with_capacity(count as usize);
            let mut current = n.pair().clone();
            for k in 1..=count {
                if k > 1 {
                    current = compose(&current, n.pair());
                }
                let (half_depth, multiplier) = minimal_diagonal(&current)?;
                out.push(OrbitClassEntry::MinimalDiagonal {
                    degree: (n.degree() as u64).pow(k),
                    half_depth,
                    multiplier,
                });
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newton::RootDivisor;
    use crate::stability::strictly_semistable_normal_form;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn pt(n: i64) -> P1Point {
        P1Point::from_int(n)
    }

    fn newton(entries: &[(P1Point, u32)]) -> NewtonMap {
        NewtonMap::from_divisor(RootDivisor::new(entries.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn compose_with_identity() {
        let n = newton(&[(pt(0), 2), (P1Point::Infinity, 1)]);
        let id = identity_pair();
        assert!(compose(n.pair(), &id).projectively_equal(n.pair()));
        assert!(compose(&id, n.pair()).projectively_equal(n.pair()));
    }

    #[test]
    fn square_of_phi3_by_hand() {
        // (X^2 Y, 2 X Y^2) composed with itself is (2 X^5 Y^4, 8 X^4 Y^5)
        let n = newton(&[(pt(0), 2), (P1Point::Infinity, 1)]);
        let sq = compose(n.pair(), n.pair());
        let expect = HomogeneousPair::new(
            HomogeneousForm::monomial(9, 5, s(2)),
            HomogeneousForm::monomial(9, 4, s(8)),
        )
        .unwrap();
        assert!(sq.projectively_equal(&expect));
        // X^4 Y^4 [X : 4Y]
        assert_eq!(sq.hole_form().x_order(), 4);
        assert_eq!(sq.hole_form().y_order(), 4);
    }

    #[test]
    fn phi5_square_hole_depths() {
        let phi5 = strictly_semistable_normal_form(5).unwrap();
        let sq = compose(&phi5, &phi5);
        let r = roots_of_form(sq.hole_form()).unwrap();
        assert_eq!(r.roots, vec![(pt(0), 12), (P1Point::Infinity, 12)]);
    }

    #[test]
    fn degree_multiplicativity() {
        let a = newton(&[(pt(0), 1), (pt(1), 1), (pt(2), 1)]);
        let b = newton(&[(pt(0), 2)]);
        assert_eq!(compose(a.pair(), b.pair()).degree(), 6);
        assert_eq!(compose(b.pair(), a.pair()).degree(), 6);
    }

    #[test]
    fn iterate_report_semistable_cubic() {
        let n = newton(&[(pt(0), 2), (P1Point::Infinity, 1)]);
        let report = iterate_report(&n, 2, None).unwrap();
        assert_eq!(report.steps.len(), 2);
        for step in &report.steps {
            assert_eq!(step.verdict.kind, VerdictKind::StrictlySemistable);
        }
    }

    #[test]
    fn iterate_report_stable_quartic() {
        let n = newton(&[(pt(0), 2), (pt(1), 1), (pt(2), 1)]);
        let report = iterate_report(&n, 2, None).unwrap();
        for step in &report.steps {
            assert_eq!(step.verdict.kind, VerdictKind::Stable);
        }
    }

    #[test]
    fn first_iterate_matches_direct_classification() {
        let n = newton(&[(pt(0), 1), (pt(1), 1), (P1Point::Infinity, 1)]);
        let report = iterate_report(&n, 1, None).unwrap();
        assert_eq!(report.steps[0].verdict.kind, classify_newton(&n).kind);
    }

    #[test]
    fn budget_guard() {
        let n = newton(&[(pt(0), 2), (P1Point::Infinity, 1)]);
        let err = iterate_report(&n, 8, None).unwrap_err();
        assert_eq!(err.code(), "budget-exceeded");
    }

    #[test]
    fn orbit_of_phi3() {
        let n = newton(&[(pt(0), 2), (P1Point::Infinity, 1)]);
        let orbit = orbit_classes(&n, 2, None).unwrap();
        assert_eq!(orbit.len(), 2);
        // entry 1: multiplier 1/2 at half-depth 1; entry 2: multiplier 1/4
        // at half-depth 4 (the class of X^4 Y^4 [X : 4Y])
        assert_eq!(
            orbit[0],
            OrbitClassEntry::MinimalDiagonal {
                degree: 3,
                half_depth: 1,
                multiplier: ExactScalar::from_ratio(1, 2),
            }
        );
        assert_eq!(
            orbit[1],
            OrbitClassEntry::MinimalDiagonal {
                degree: 9,
                half_depth: 4,
                multiplier: ExactScalar::from_ratio(1, 4),
            }
        );
    }

    #[test]
    fn orbit_of_stable_map_is_constant_class() {
        let n = newton(&[(pt(0), 2), (pt(1), 1), (pt(2), 1)]);
        let orbit = orbit_classes(&n, 3, None).unwrap();
        assert_eq!(orbit.len(), 3);
        match (&orbit[0], &orbit[2]) {
            (
                OrbitClassEntry::Stable { class: c1, .. },
                OrbitClassEntry::Stable { class: c2, .. },
            ) => assert_eq!(c1, c2),
            _ => panic!("expected stable entries"),
        }
    }

    #[test]
    fn orbit_rejects_unstable() {
        let n = newton(&[(pt(0), 3)]);
        assert!(orbit_classes(&n, 2, None).is_err());
    }

    #[test]
    fn first_entry_determines_strictly_semistable_orbit() {
        // two different strictly semistable cubics give the same orbit
        let n1 = newton(&[(pt(0), 2), (P1Point::Infinity, 1)]);
        let n2 = newton(&[(pt(5), 1), (pt(7), 1), (P1Point::Infinity, 1)]);
        let o1 = orbit_classes(&n1, 2, None).unwrap();
        let o2 = orbit_classes(&n2, 2, None).unwrap();
        assert_eq!(o1, o2);
    }
}
