//! Conjugacy and GIT classes of (degenerate) Newton maps.
//!
//! Two boundary Newton maps with nonconstant reduced parts are conjugate
//! exactly when an affine map matches their divisor points with
//! multiplicities, so conjugacy testing is a finite exact search: an
//! affine map is pinned down by the images of two points. The GIT class
//! of a stable map is recorded by a canonical representative of its
//! finite weighted configuration (plus the multiplicity at infinity);
//! every strictly semistable map of odd degree d shares the single class
//! of the normal form `phi_d`.

use std::fmt;

use crate::error::{Error, Result};
use crate::form::roots_of_form;
use crate::newton::{MarkedNewtonMap, NewtonMap};
use crate::projective::{HomogeneousPair, MoebiusMap, P1Point};
use crate::scalar::ExactScalar;
use crate::stability::{classify_newton, classify_pair, ops_limit, OneParamWeight, VerdictKind};

/// A finite weighted configuration of points with a normalization witness
/// (the affine map that produced it, when it came from a normalization).
#[derive(Clone, Debug)]
pub struct WeightedConfiguration {
    entries: Vec<(ExactScalar, u32)>,
    witness: Option<(ExactScalar, ExactScalar)>,
}

impl WeightedConfiguration {
    pub fn new(mut entries: Vec<(ExactScalar, u32)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        entries.sort_by(|(p, _), (q, _)| p.cmp_lex(q));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidDivisor("repeated configuration point".into()));
            }
        }
        Ok(WeightedConfiguration {
            entries,
            witness: None,
        })
    }

    /// Points with weights, sorted by `(re, im)`.
    pub fn entries(&self) -> &[(ExactScalar, u32)] {
        &self.entries
    }

    /// The affine map `z -> a z + b` used to normalize, if any.
    pub fn witness(&self) -> Option<&(ExactScalar, ExactScalar)> {
        self.witness.as_ref()
    }

    fn apply_affine(&self, scale: &ExactScalar, offset: &ExactScalar) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(p, w)| (&(p * scale) + offset, *w))
            .collect::<Vec<_>>();
        let mut c = WeightedConfiguration::new(entries).expect("affine image stays valid");
        c.witness = Some((scale.clone(), offset.clone()));
        c
    }
}

impl PartialEq for WeightedConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for WeightedConfiguration {}

impl fmt::Display for WeightedConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (p, w)) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}:{w}")?;
        }
        write!(f, "}}")
    }
}

/// The GIT class of a semistable Newton map.
#[derive(Clone, PartialEq, Eq, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum GitClassDescriptor {
    /// Conjugacy class of a stable map: canonical finite configuration and
    /// the multiplicity at infinity.
    Stable {
        degree: u32,
        configuration: WeightedConfiguration,
        infinity_multiplicity: u32,
    },
    /// The unique strictly semistable boundary class of odd degree d.
    StrictlySemistable { degree: u32 },
}

impl fmt::Display for GitClassDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GitClassDescriptor::Stable {
                degree,
                configuration,
                infinity_multiplicity,
            } => write!(
                f,
                "stable(d={degree}, {configuration}, inf:{infinity_multiplicity})"
            ),
            GitClassDescriptor::StrictlySemistable { degree } => {
                write!(f, "strictly_semistable(d={degree})")
            }
        }
    }
}

/// Exact affine conjugacy between two Newton maps, if one exists.
///
/// The search enumerates the finitely many assignments of two anchor
/// points of the first divisor to multiplicity-matching points of the
/// second; an affine map is determined by two values, and each candidate
/// is verified against the whole divisor. Only affine maps need to be
/// searched because any conjugacy of Newton maps fixes infinity.
pub fn conjugacy_test(n1: &NewtonMap, n2: &NewtonMap) -> Option<(ExactScalar, ExactScalar)> {
    if n1.degree() != n2.degree() {
        return None;
    }
    let d1 = n1.divisor();
    let d2 = n2.divisor();
    if d1.infinity_multiplicity() != d2.infinity_multiplicity() {
        return None;
    }
    let f1: Vec<(ExactScalar, u32)> = d1.finite_entries().map(|(p, m)| (p.clone(), m)).collect();
    let f2: Vec<(ExactScalar, u32)> = d2.finite_entries().map(|(p, m)| (p.clone(), m)).collect();
    if f1.len() != f2.len() {
        return None;
    }
    if f1.len() == 1 {
        let (p, m) = &f1[0];
        let (q, m2) = &f2[0];
        if m == m2 {
            return Some((ExactScalar::one(), q - p));
        }
        return None;
    }
    let (a1, m1) = &f1[0];
    let (a2, m2) = &f1[1];
    let span = &(a2.clone()) - a1;
    for (q1, k1) in &f2 {
        if k1 != m1 {
            continue;
        }
        for (q2, k2) in &f2 {
            if k2 != m2 || q1 == q2 {
                continue;
            }
            let scale = &(&(q2.clone()) - q1) / &span;
            let offset = q1 - &(&scale * a1);
            let image = d1
                .apply_affine(&scale, &offset)
                .expect("nonzero scale by construction");
            if image == *d2 {
                return Some((scale, offset));
            }
        }
    }
    None
}

/// Canonical representative of a weighted configuration under the affine
/// action.
///
/// With marks, the first two distinct points are sent to 0 and 1. Without
/// marks, all ordered pairs of distinct points are tried as the (0, 1)
/// anchor and the representative whose sorted `(point, weight)` tuple is
/// lexicographically extremal is returned, which is a deterministic
/// function of the affine orbit.
pub fn canonical_configuration(
    entries: &[(ExactScalar, u32)],
    marked: bool,
) -> Result<WeightedConfiguration> {
    if entries.is_empty() {
        return Err(Error::EmptyConfiguration);
    }
    let mut distinct: Vec<ExactScalar> = Vec::new();
    for (p, _) in entries {
        if !distinct.contains(p) {
            distinct.push(p.clone());
        }
    }
    if distinct.len() == 1 {
        // single-point configuration: translate to {0 : m}
        let total: u32 = entries.iter().map(|(_, m)| m).sum();
        let mut c = WeightedConfiguration::new(vec![(ExactScalar::zero(), total)])?;
        c.witness = Some((ExactScalar::one(), -distinct[0].clone()));
        return Ok(c);
    }
    let base = WeightedConfiguration::new(entries.to_vec())?;
    let normalize = |p: &ExactScalar, q: &ExactScalar| -> WeightedConfiguration {
        // z -> (z - p) / (q - p)
        let scale = (&(q.clone()) - p).inv().expect("distinct points");
        let offset = -(&scale * p);
        base.apply_affine(&scale, &offset)
    };
    if marked {
        return Ok(normalize(&distinct[0], &distinct[1]));
    }
    let mut best: Option<WeightedConfiguration> = None;
    for p in &distinct {
        for q in &distinct {
            if p == q {
                continue;
            }
            let cand = normalize(p, q);
            let better = match &best {
                None => true,
                Some(b) => config_key_gt(&cand, b),
            };
            if better {
                best = Some(cand);
            }
        }
    }
    Ok(best.expect("at least one ordered pair"))
}

/// Compare two configurations by their sorted `(point, weight)` tuples;
/// true when `a` is strictly greater.
fn config_key_gt(a: &WeightedConfiguration, b: &WeightedConfiguration) -> bool {
    for ((pa, wa), (pb, wb)) in a.entries.iter().zip(b.entries.iter()) {
        match pa.cmp_lex(pb).then(wa.cmp(wb)) {
            std::cmp::Ordering::Greater => return true,
            std::cmp::Ordering::Less => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    a.entries.len() > b.entries.len()
}

/// The GIT class descriptor of a semistable Newton map.
pub fn git_class(n: &NewtonMap) -> Result<GitClassDescriptor> {
    match classify_newton(n).kind {
        VerdictKind::Unstable => Err(Error::UnstableInput(format!(
            "no GIT class for unstable map {}",
            n.divisor()
        ))),
        VerdictKind::StrictlySemistable => {
            Ok(GitClassDescriptor::StrictlySemistable { degree: n.degree() })
        }
        VerdictKind::Stable => {
            let finite = n.attracting_divisor();
            let configuration = canonical_configuration(&finite, false)?;
            Ok(GitClassDescriptor::Stable {
                degree: n.degree(),
                configuration,
                infinity_multiplicity: n.divisor().infinity_multiplicity(),
            })
        }
    }
}

/// The normalized marked moduli point `(inf, 0, 1, r_3', ..., r_d')` of a
/// marked Newton map with d distinct finite roots.
pub fn marked_moduli_point(m: &MarkedNewtonMap) -> Result<Vec<P1Point>> {
    let roots = m.root_marks();
    let mut finite: Vec<&ExactScalar> = Vec::with_capacity(roots.len());
    for p in roots {
        match p.as_finite() {
            Some(z) => finite.push(z),
            None => return Err(Error::RepeatedRoots),
        }
    }
    for i in 0..finite.len() {
        for j in (i + 1)..finite.len() {
            if finite[i] == finite[j] {
                return Err(Error::RepeatedRoots);
            }
        }
    }
    let r1 = finite[0].clone();
    let r2 = finite[1].clone();
    let scale = (&r2 - &r1).inv().expect("distinct");
    let mut out = vec![P1Point::Infinity];
    for z in finite {
        out.push(P1Point::Finite(&(&(z.clone()) - &r1) * &scale));
    }
    Ok(out)
}

/// Exact Möbius conjugacy between two degenerate pairs.
///
/// Any conjugacy maps holes to holes and fixed points of the reduced map
/// to fixed points, and a Möbius map is determined by three point values,
/// so enumerating assignments of one marked triple of `f` into the marked
/// set of `g` and verifying each candidate exactly is a complete decision
/// procedure. Errors when the marked points cannot be extracted over the
/// scalar field or number fewer than three.
pub fn moebius_conjugacy(f: &HomogeneousPair, g: &HomogeneousPair) -> Result<Option<MoebiusMap>> {
    if f.degree() != g.degree() {
        return Ok(None);
    }
    let marked = |p: &HomogeneousPair| -> Result<Vec<P1Point>> {
        let mut out: Vec<P1Point> = Vec::new();
        let mut push_roots = |form: &crate::form::HomogeneousForm| -> Result<()> {
            if form.degree() == 0 {
                return Ok(());
            }
            let r = roots_of_form(form)?;
            if r.remainder.is_some() {
                return Err(Error::InexactFactor(
                    "marked point outside the scalar field".into(),
                ));
            }
            for (pt, _) in r.roots {
                if !out.contains(&pt) {
                    out.push(pt);
                }
            }
            Ok(())
        };
        push_roots(&p.factorization().h)?;
        push_roots(&p.fixed_point_form())?;
        out.sort_by(|a, b| a.cmp_points(b));
        Ok(out)
    };
    let mf = marked(f)?;
    let mg = marked(g)?;
    if mf.len() != mg.len() {
        return Ok(None);
    }
    if mf.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "only {} marked points; conjugacy is not pinned by them",
            mf.len()
        )));
    }
    let (p1, p2, p3) = (&mf[0], &mf[1], &mf[2]);
    let base = MoebiusMap::to_standard_triple(p1, p2, p3)?;
    for q1 in &mg {
        for q2 in &mg {
            for q3 in &mg {
                if q1 == q2 || q2 == q3 || q1 == q3 {
                    continue;
                }
                let target = MoebiusMap::to_standard_triple(q1, q2, q3)?;
                // m sends (p1,p2,p3) to (q1,q2,q3)
                let m = target.inverse().compose(&base);
                if g.conjugate(&m).projectively_equal(f) {
                    return Ok(Some(m));
                }
            }
        }
    }
    Ok(None)
}

/// Reduce a strictly semistable pair to its minimal-orbit diagonal form
/// `X^k Y^k [alpha X : beta Y]`, returning `(k, lambda)` with
/// `lambda = alpha/beta` canonicalized against the `0 <-> inf` swap
/// (the lexicographically smaller of `lambda` and `1/lambda`).
pub fn minimal_diagonal(pair: &HomogeneousPair) -> Result<(u32, ExactScalar)> {
    let verdict = classify_pair(pair);
    if verdict.kind != VerdictKind::StrictlySemistable {
        return Err(Error::UnstableInput(format!(
            "minimal diagonal form needs a strictly semistable pair, got {}",
            verdict.kind
        )));
    }
    let d = pair.degree();
    let deep = (d - 1) / 2;
    // fixed holes of critical depth
    let profile = pair.hole_form().multiplicity_profile();
    let factor = profile
        .iter()
        .find(|(k, _)| *k == deep)
        .map(|(_, f)| f.clone())
        .ok_or_else(|| {
            Error::UnstableInput("no hole of critical depth (not a boundary Newton class)".into())
        })?;
    let fix = pair.fixed_point_form();
    let (common, _, _) = crate::form::poly_gcd(&factor, &fix)?;
    if common.degree() == 0 {
        return Err(Error::UnstableInput(
            "critical-depth holes are not fixed (not a boundary Newton class)".into(),
        ));
    }
    let roots = roots_of_form(&common)?;
    if roots.remainder.is_some() {
        return Err(Error::InexactFactor(
            "critical fixed hole outside the scalar field".into(),
        ));
    }
    let fixed_deep: Vec<P1Point> = roots.roots.iter().map(|(p, _)| p.clone()).collect();

    let diagonal = match fixed_deep.as_slice() {
        [single] => {
            // drive the single deep hole to depth (d-1)/2 at both ends
            let w = match single {
                P1Point::Infinity => OneParamWeight::diagonal(-1, 1),
                P1Point::Finite(h) => {
                    let m = MoebiusMap::affine(ExactScalar::one(), h.clone())
                        .expect("translation is invertible");
                    OneParamWeight::with_conjugator(1, -1, m)
                }
            };
            ops_limit(pair, &w)
        }
        [h1, h2] => {
            // move the two deep holes to 0 and infinity
            let (finite_one, other) = match (h1, h2) {
                (P1Point::Finite(a), P1Point::Infinity) => (a.clone(), P1Point::Infinity),
                (P1Point::Infinity, P1Point::Finite(a)) => (a.clone(), P1Point::Infinity),
                (P1Point::Finite(a), P1Point::Finite(b)) => (a.clone(), P1Point::Finite(b.clone())),
                _ => unreachable!("distinct holes"),
            };
            let m = match other {
                P1Point::Infinity => {
                    MoebiusMap::affine(ExactScalar::one(), finite_one).expect("translation")
                }
                P1Point::Finite(b) => {
                    // z -> (z - a)/(z - b) sends (a, b) to (0, inf); conjugate
                    // by its inverse so the pair sees (0, inf) at (a, b)
                    MoebiusMap::new(
                        ExactScalar::one(),
                        -finite_one,
                        ExactScalar::one(),
                        -b.clone(),
                    )
                    .expect("distinct points")
                    .inverse()
                }
            };
            pair.conjugate(&m)
        }
        _ => {
            return Err(Error::Internal(
                "more than two holes of critical depth".into(),
            ))
        }
    };

    extract_diagonal(&diagonal)
}

/// Read `(k, lambda)` off a pair expected to be `X^k Y^k [a X : b Y]`.
fn extract_diagonal(pair: &HomogeneousPair) -> Result<(u32, ExactScalar)> {
    let d = pair.degree();
    let k = (d - 1) / 2;
    let fa = pair.numerator();
    let fb = pair.denominator();
    let ok_a = fa
        .coeffs()
        .iter()
        .enumerate()
        .all(|(i, c)| (i as u32 == k + 1) || c.is_zero());
    let ok_b = fb
        .coeffs()
        .iter()
        .enumerate()
        .all(|(i, c)| (i as u32 == k) || c.is_zero());
    if !ok_a || !ok_b {
        return Err(Error::Internal(format!(
            "expected diagonal pair X^{k} Y^{k} [aX : bY], got {pair}"
        )));
    }
    let alpha = fa.coeff(k + 1);
    let beta = fb.coeff(k);
    let lambda = alpha / beta;
    let inv = lambda
        .inv()
        .ok_or_else(|| Error::Internal("diagonal multiplier is zero".into()))?;
    let canonical = if inv.cmp_lex(&lambda).is_lt() {
        inv
    } else {
        lambda
    };
    Ok((k, canonical))
}
