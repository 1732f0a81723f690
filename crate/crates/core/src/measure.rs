//! Truncated maximal measures of degenerate maps and conformal barycenters.
//!
//! For a degenerate `f = H * fhat` with `deg fhat >= 1` the maximal
//! measure is purely atomic: level n places mass `1/d^(n+1)` on each
//! solution of `fhat^n(z) = h` over the holes h, everything counted with
//! multiplicity. Truncating at level K leaves the exact geometric tail
//! `(deg fhat / d)^(K+1)`, which this module tracks as a rational
//! certificate: positions of atoms are floating point, masses and tails
//! are exact.
//!
//! The conformal barycenter lives in the unit-ball model of hyperbolic
//! 3-space: the point w such that pushing the measure by the ball isometry
//! sending w to the origin kills the Euclidean center of mass on the
//! sphere. It exists whenever every atom (plus the undistributed tail)
//! stays below mass 1/2 and is found here by a damped fixed-point
//! iteration, with Möbius equivariance checked in the tests.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::form::roots_of_form;
use crate::moduli::GitClassDescriptor;
use crate::newton::NewtonMap;
use crate::numeric::{cluster_points, poly_roots};
use crate::projective::HomogeneousPair;
use crate::stability::{classify_newton, classify_pair, is_indeterminate, VerdictKind};

/// Relative tolerance for identifying coincident preimage points.
const CLUSTER_TOL: f64 = 1e-9;

/// A point of the Riemann sphere in floating coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

impl SpherePoint {
    pub fn finite(re: f64, im: f64) -> Self {
        SpherePoint::Finite(Complex64::new(re, im))
    }

    fn close_to(&self, other: &SpherePoint, tol: f64) -> bool {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => true,
            (SpherePoint::Finite(a), SpherePoint::Finite(b)) => {
                let scale = 1.0f64.max(a.norm()).max(b.norm());
                (a - b).norm() <= tol * scale
            }
            _ => false,
        }
    }
}

/// Stereographic image on the unit sphere in R^3 (infinity at the north
/// pole).
pub fn stereographic(p: &SpherePoint) -> [f64; 3] {
    match p {
        SpherePoint::Infinity => [0.0, 0.0, 1.0],
        SpherePoint::Finite(z) => {
            let n = z.norm_sqr();
            let d = n + 1.0;
            [2.0 * z.re / d, 2.0 * z.im / d, (n - 1.0) / d]
        }
    }
}

/// A point of the open unit ball (the model of hyperbolic 3-space).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BallPoint(pub [f64; 3]);

impl BallPoint {
    pub fn origin() -> Self {
        BallPoint([0.0, 0.0, 0.0])
    }

    pub fn norm(&self) -> f64 {
        dot(&self.0, &self.0).sqrt()
    }
}

/// Accumulates (point, value) pairs, merging points that coincide up to
/// the cluster tolerance. A spatial hash over the (bounded) spherical
/// coordinates keeps insertion near-constant; any pair within the
/// relative tolerance on C lands within one chordal cell of each other,
/// so scanning the 27 neighboring cells finds every merge candidate.
struct AtomAccumulator<T> {
    atoms: Vec<(SpherePoint, T)>,
    grid: std::collections::HashMap<(i64, i64, i64), Vec<usize>>,
}

const GRID_CELL: f64 = 2e-9;

fn grid_key(p: &SpherePoint) -> (i64, i64, i64) {
    let s = stereographic(p);
    (
        (s[0] / GRID_CELL).floor() as i64,
        (s[1] / GRID_CELL).floor() as i64,
        (s[2] / GRID_CELL).floor() as i64,
    )
}

impl<T> AtomAccumulator<T> {
    fn new() -> Self {
        AtomAccumulator {
            atoms: Vec::new(),
            grid: std::collections::HashMap::new(),
        }
    }

    fn add(&mut self, p: SpherePoint, value: T, combine: impl Fn(&mut T, T)) {
        let key = grid_key(&p);
        let mut target: Option<usize> = None;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let cell = (key.0 + dx, key.1 + dy, key.2 + dz);
                    if let Some(indices) = self.grid.get(&cell) {
                        for &i in indices {
                            if self.atoms[i].0.close_to(&p, CLUSTER_TOL) {
                                // earliest-inserted match keeps determinism
                                target = Some(target.map_or(i, |t: usize| t.min(i)));
                            }
                        }
                        if target.is_some() {
                            break 'search;
                        }
                    }
                }
            }
        }
        match target {
            Some(i) => combine(&mut self.atoms[i].1, value),
            None => {
                self.atoms.push((p, value));
                self.grid.entry(key).or_default().push(self.atoms.len() - 1);
            }
        }
    }

    fn into_atoms(self) -> Vec<(SpherePoint, T)> {
        self.atoms
    }
}

/// Truncated atomic measure with an exact tail certificate.
#[derive(Clone, Debug)]
pub struct AtomicMeasure {
    atoms: Vec<(SpherePoint, BigRational)>,
    tail_bound: BigRational,
    levels: u32,
}

impl AtomicMeasure {
    /// Assemble from raw atoms (aggregating coincident points).
    pub fn from_atoms(
        atoms: Vec<(SpherePoint, BigRational)>,
        tail_bound: BigRational,
        levels: u32,
    ) -> Self {
        let mut acc = AtomAccumulator::new();
        for (p, m) in atoms {
            acc.add(p, m, |a, b| *a += b);
        }
        AtomicMeasure {
            atoms: acc.into_atoms(),
            tail_bound,
            levels,
        }
    }

    pub fn atoms(&self) -> &[(SpherePoint, BigRational)] {
        &self.atoms
    }

    pub fn tail_bound(&self) -> &BigRational {
        &self.tail_bound
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn total_mass(&self) -> BigRational {
        self.atoms
            .iter()
            .fold(BigRational::zero(), |acc, (_, m)| acc + m)
    }

    pub fn max_atom_mass(&self) -> BigRational {
        self.atoms
            .iter()
            .map(|(_, m)| m.clone())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

fn big_ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn ratio_pow(r: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= r;
    }
    acc
}

/// Holes of the pair with multiplicities, as floating sphere points.
/// Exact linear factors are used where they exist; factors with no roots
/// in the scalar field fall back to the numeric solver on the (squarefree,
/// hence well-conditioned) factor.
fn holes_numeric(f: &HomogeneousPair) -> Result<Vec<(SpherePoint, u32)>> {
    let mut out: Vec<(SpherePoint, u32)> = Vec::new();
    for (mult, factor) in f.hole_form().multiplicity_profile() {
        let r = roots_of_form(&factor)?;
        for (p, k) in &r.roots {
            debug_assert_eq!(*k, 1, "profile factors are squarefree");
            let sp = match p {
                crate::projective::P1Point::Infinity => SpherePoint::Infinity,
                crate::projective::P1Point::Finite(z) => SpherePoint::Finite(z.to_complex64()),
            };
            out.push((sp, mult));
        }
        if let Some(rem) = r.remainder {
            let coeffs: Vec<Complex64> = rem.coeffs().iter().map(|c| c.to_complex64()).collect();
            for z in poly_roots(&coeffs)? {
                out.push((SpherePoint::Finite(z), mult));
            }
        }
    }
    Ok(out)
}

/// Solutions of `fhat(z) = w` counted with multiplicity (total = deg fhat),
/// including solutions at infinity from degree drop.
fn preimages(f: &HomogeneousPair, w: &SpherePoint) -> Result<Vec<(SpherePoint, u32)>> {
    let fact = f.factorization();
    let m = f.reduced_degree() as usize;
    let ra: Vec<Complex64> = fact.ra.coeffs().iter().map(|c| c.to_complex64()).collect();
    let rb: Vec<Complex64> = fact.rb.coeffs().iter().map(|c| c.to_complex64()).collect();
    let poly: Vec<Complex64> = match w {
        SpherePoint::Infinity => rb,
        SpherePoint::Finite(w) => ra.iter().zip(rb.iter()).map(|(a, b)| a - w * b).collect(),
    };
    let scale = poly.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return Err(Error::Internal("preimage polynomial vanished".into()));
    }
    // effective degree after floating cancellation of the top coefficients
    let mut lead = poly.len() - 1;
    while lead > 0 && poly[lead].norm() <= 1e-12 * scale {
        lead -= 1;
    }
    let inf_mult = (m - lead) as u32;
    // exact zeros at the bottom become roots at the origin
    let mut low = 0;
    while low < lead && poly[low].norm() == 0.0 {
        low += 1;
    }
    let mut out: Vec<(SpherePoint, u32)> = Vec::new();
    if inf_mult > 0 {
        out.push((SpherePoint::Infinity, inf_mult));
    }
    if low > 0 {
        out.push((SpherePoint::finite(0.0, 0.0), low as u32));
    }
    if lead > low {
        let roots = poly_roots(&poly[low..=lead])?;
        for (z, k) in cluster_points(&roots, CLUSTER_TOL) {
            out.push((SpherePoint::Finite(z), k));
        }
    }
    debug_assert_eq!(out.iter().map(|(_, k)| *k as usize).sum::<usize>(), m);
    Ok(out)
}

/// The truncated maximal measure of a degenerate pair, down to level
/// `n_max`.
///
/// Level-n solutions of `fhat^n(z) = h` are found by iterated numeric
/// preimages; multiplicities are combinatorial, so every mass is an exact
/// rational and the total telescopes to `1 - (deg fhat / d)^(n_max+1)`
/// exactly (asserted).
pub fn measure_truncated(f: &HomogeneousPair, n_max: u32) -> Result<AtomicMeasure> {
    if !f.is_degenerate() {
        return Err(Error::NonAtomicMeasure);
    }
    if is_indeterminate(f) {
        return Err(Error::IndeterminateInput);
    }
    let d = f.degree() as u64;
    let m = f.reduced_degree() as u64;
    let holes = holes_numeric(f)?;

    let mut atoms: Vec<(SpherePoint, BigRational)> = Vec::new();
    if m == 0 {
        // mu = (1/d) sum over holes (tail is exactly zero)
        for (p, k) in &holes {
            atoms.push((*p, big_ratio(*k as u64, d)));
        }
        let measure = AtomicMeasure::from_atoms(atoms, BigRational::zero(), n_max);
        debug_assert_eq!(measure.total_mass(), BigRational::one());
        return Ok(measure);
    }

    // frontier of (point, combined multiplicity) at the current level
    let mut frontier: Vec<(SpherePoint, u64)> =
        holes.iter().map(|(p, k)| (*p, *k as u64)).collect();
    let mut level_weight = big_ratio(1, d);
    let inv_d = big_ratio(1, d);
    for level in 0..=n_max {
        if level > 0 {
            let mut next = AtomAccumulator::new();
            for (w, mu) in &frontier {
                for (z, k) in preimages(f, w)? {
                    next.add(z, mu * k as u64, |a, b| *a += b);
                }
            }
            frontier = next.into_atoms();
            level_weight *= &inv_d;
        }
        let count: u64 = frontier.iter().map(|(_, mu)| mu).sum();
        debug_assert_eq!(
            count,
            (d - m) * m.pow(level),
            "level {level} multiplicity bookkeeping"
        );
        for (p, mu) in &frontier {
            atoms.push((
                *p,
                &level_weight * BigRational::from_integer(BigInt::from(*mu)),
            ));
        }
    }

    let tail = ratio_pow(&big_ratio(m, d), n_max + 1);
    let measure = AtomicMeasure::from_atoms(atoms, tail.clone(), n_max);
    let expected = BigRational::one() - &tail;
    if measure.total_mass() != expected {
        return Err(Error::Internal(format!(
            "mass identity violated: {} vs {}",
            measure.total_mass(),
            expected
        )));
    }
    Ok(measure)
}

/// Convenience wrapper for Newton maps.
pub fn measure_of_newton(n: &NewtonMap, n_max: u32) -> Result<AtomicMeasure> {
    measure_truncated(n.pair(), n_max)
}

/// Smallest level count that certifies `tail < bound`, capped.
pub fn levels_for_tail(f: &HomogeneousPair, bound: &BigRational, cap: u32) -> u32 {
    let d = f.degree() as u64;
    let m = f.reduced_degree() as u64;
    if m == 0 {
        return 0;
    }
    let r = big_ratio(m, d);
    let mut tail = r.clone();
    for k in 0..cap {
        if &tail < bound {
            return k;
        }
        tail *= &r;
    }
    cap
}

/// Exact truncated bounds on the point mass at `z`.
#[derive(Clone, Debug)]
pub struct MassBounds {
    pub lower: BigRational,
    pub upper: BigRational,
    /// True when the combinatorial criterion certifies that every iterate
    /// is semistable, which is what bounds the limiting mass by 1/2.
    pub semistable_certified: bool,
}

pub fn mass_at(f: &HomogeneousPair, z: &SpherePoint, n_max: u32) -> Result<MassBounds> {
    let measure = measure_truncated(f, n_max)?;
    let lower = measure
        .atoms()
        .iter()
        .find(|(p, _)| p.close_to(z, CLUSTER_TOL))
        .map(|(_, m)| m.clone())
        .unwrap_or_else(BigRational::zero);
    let upper = &lower + measure.tail_bound();
    Ok(MassBounds {
        lower,
        upper,
        semistable_certified: classify_pair(f).is_semistable(),
    })
}

// ---------------------------------------------------------------------------
// ball geometry
// ---------------------------------------------------------------------------

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn scale3(a: &[f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn add3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Möbius addition on the unit ball; `mobius_add(w, x)` is the image of x
/// under the isometry taking 0 to w.
pub fn mobius_add(w: &[f64; 3], x: &[f64; 3]) -> [f64; 3] {
    let wx = dot(w, x);
    let w2 = dot(w, w);
    let x2 = dot(x, x);
    let denom = 1.0 + 2.0 * wx + w2 * x2;
    let cw = 1.0 + 2.0 * wx + x2;
    let cx = 1.0 - w2;
    scale3(&add3(&scale3(w, cw), &scale3(x, cx)), 1.0 / denom)
}

/// The ball isometry taking w to the origin, applied to x.
pub fn to_origin(w: &[f64; 3], x: &[f64; 3]) -> [f64; 3] {
    mobius_add(&scale3(w, -1.0), x)
}

/// Euclidean center of mass of the pushforward of the (normalized) atoms
/// under the isometry sending w to 0.
fn center_at(atoms: &[([f64; 3], f64)], w: &[f64; 3]) -> [f64; 3] {
    let mut e = [0.0f64; 3];
    let mut total = 0.0;
    for (p, m) in atoms {
        let q = to_origin(w, p);
        e = add3(&e, &scale3(&q, *m));
        total += m;
    }
    scale3(&e, 1.0 / total)
}

const BARYCENTER_TOL: f64 = 1e-12;
const BARYCENTER_MAX_ITERS: usize = 10_000;

/// The conformal barycenter of a truncated atomic measure.
///
/// Requires every atom mass plus the tail bound to stay strictly below
/// 1/2 (exact rational check); fails with a numerical error if the damped
/// iteration does not converge within the step budget.
pub fn conformal_barycenter(measure: &AtomicMeasure) -> Result<BallPoint> {
    let half = big_ratio(1, 2);
    let worst = measure.max_atom_mass() + measure.tail_bound();
    if worst >= half {
        return Err(Error::BarycenterUndefined(format!(
            "an atom plus the tail carries mass {worst} >= 1/2"
        )));
    }
    if measure.atoms().is_empty() {
        return Err(Error::BarycenterUndefined("empty measure".into()));
    }
    let atoms: Vec<([f64; 3], f64)> = measure
        .atoms()
        .iter()
        .map(|(p, m)| (stereographic(p), m.to_f64().unwrap_or(0.0)))
        .collect();
    barycenter_of_sphere_atoms(&atoms)
}

/// Damped fixed-point iteration for the barycenter of weighted sphere
/// points (weights need not sum to one; they are normalized internally).
pub fn barycenter_of_sphere_atoms(atoms: &[([f64; 3], f64)]) -> Result<BallPoint> {
    let mut w = [0.0f64; 3];
    let mut eta = 0.8f64;
    let mut e = center_at(atoms, &w);
    let mut err = dot(&e, &e).sqrt();
    for _ in 0..BARYCENTER_MAX_ITERS {
        if err < BARYCENTER_TOL {
            return Ok(BallPoint(w));
        }
        let mut accepted = false;
        for _ in 0..60 {
            let cand = mobius_add(&w, &scale3(&e, eta));
            if dot(&cand, &cand) >= 1.0 {
                eta *= 0.5;
                continue;
            }
            let e2 = center_at(atoms, &cand);
            let err2 = dot(&e2, &e2).sqrt();
            if err2 < err {
                w = cand;
                e = e2;
                err = err2;
                eta = (eta * 1.25).min(1.0);
                accepted = true;
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            // stagnated: either converged to numerical noise or stuck
            if err < 1e-10 {
                return Ok(BallPoint(w));
            }
            return Err(Error::NumericalFailure(format!(
                "barycenter iteration stagnated at residual {err:.3e}"
            )));
        }
    }
    Err(Error::NumericalFailure(
        "barycenter iteration exceeded the step budget".into(),
    ))
}

/// Residual `|E|` of the pushed measure at w (diagnostic for tests).
pub fn barycenter_residual(measure: &AtomicMeasure, w: &BallPoint) -> f64 {
    let atoms: Vec<([f64; 3], f64)> = measure
        .atoms()
        .iter()
        .map(|(p, m)| (stereographic(p), m.to_f64().unwrap_or(0.0)))
        .collect();
    let e = center_at(&atoms, &w.0);
    dot(&e, &e).sqrt()
}

// ---------------------------------------------------------------------------
// canonical rotation and the measure-class assignment
// ---------------------------------------------------------------------------

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn mat_apply(m: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    [dot(&m[0], v), dot(&m[1], v), dot(&m[2], v)]
}

/// Rodrigues rotation taking unit vector `from` to unit vector `to`.
fn rotation_between(from: &[f64; 3], to: &[f64; 3]) -> [[f64; 3]; 3] {
    let c = dot(from, to);
    let axis = cross(from, to);
    let s2 = dot(&axis, &axis);
    if s2 < 1e-24 {
        if c > 0.0 {
            return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        }
        // antipodal: half-turn about any orthogonal axis; pick x or y
        let ortho = if from[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let u = {
            let proj = scale3(from, dot(&ortho, from));
            let mut v = [ortho[0] - proj[0], ortho[1] - proj[1], ortho[2] - proj[2]];
            let n = dot(&v, &v).sqrt();
            v = scale3(&v, 1.0 / n);
            v
        };
        let mut m = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = 2.0 * u[i] * u[j] - if i == j { 1.0 } else { 0.0 };
            }
        }
        return m;
    }
    let k = scale3(&axis, 1.0 / s2.sqrt());
    let s = s2.sqrt();
    let mut m = [[0.0f64; 3]; 3];
    let kx = [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]];
    for i in 0..3 {
        for j in 0..3 {
            let kk = k[i] * k[j];
            m[i][j] = if i == j { c } else { 0.0 } + s * kx[i][j] + (1.0 - c) * kk;
        }
    }
    // with this parametrization m = cI + s K + (1-c) kk^T maps `from` to `to`
    m
}

/// Rotate atoms to the canonical frame: heaviest atom at the north pole,
/// next-heaviest off-axis atom at zero longitude. Mass ties are broken by
/// rotation-invariant data (latitude), and any residual ties are resolved
/// by enumerating the candidates and keeping the extremal serialized
/// configuration, so the output is a function of the SO(3) orbit alone.
pub fn canonical_rotation(atoms: &[([f64; 3], BigRational)]) -> Vec<([f64; 3], BigRational)> {
    if atoms.is_empty() {
        return Vec::new();
    }
    let north = [0.0, 0.0, 1.0];
    let max_mass = atoms.iter().map(|(_, m)| m).max().unwrap().clone();
    let mut best: Option<Vec<([f64; 3], BigRational)>> = None;
    for (p1, m1) in atoms {
        if *m1 != max_mass {
            continue;
        }
        let r1 = rotation_between(p1, &north);
        let rotated: Vec<([f64; 3], BigRational)> = atoms
            .iter()
            .map(|(p, m)| (mat_apply(&r1, p), m.clone()))
            .collect();
        // candidates for the zero-longitude anchor: off-axis atoms of
        // maximal (mass, latitude)
        let mut anchor_key: Option<(BigRational, f64)> = None;
        for (p, m) in &rotated {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            if r <= 1e-9 {
                continue;
            }
            let better = match &anchor_key {
                None => true,
                Some((bm, bz)) => match m.cmp(bm) {
                    std::cmp::Ordering::Greater => true,
                    std::cmp::Ordering::Less => false,
                    std::cmp::Ordering::Equal => p[2] > bz + 1e-12,
                },
            };
            if better {
                anchor_key = Some((m.clone(), p[2]));
            }
        }
        let candidates: Vec<[f64; 3]> = match &anchor_key {
            None => {
                // everything on the axis: the configuration is already
                // rotation-canonical
                consider(&mut best, rotated);
                continue;
            }
            Some((bm, bz)) => rotated
                .iter()
                .filter(|(p, m)| {
                    let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
                    r > 1e-9 && m == bm && (p[2] - bz).abs() <= 1e-12
                })
                .map(|(p, _)| *p)
                .collect(),
        };
        for anchor in candidates {
            let r = (anchor[0] * anchor[0] + anchor[1] * anchor[1]).sqrt();
            let cosg = anchor[0] / r;
            let sing = -anchor[1] / r;
            let rz = [[cosg, -sing, 0.0], [sing, cosg, 0.0], [0.0, 0.0, 1.0]];
            let cand: Vec<([f64; 3], BigRational)> = rotated
                .iter()
                .map(|(q, m)| (mat_apply(&rz, q), m.clone()))
                .collect();
            consider(&mut best, cand);
        }
    }
    best.expect("nonempty atom list")
}

/// Keep the candidate whose sorted serialization is smaller.
fn consider(best: &mut Option<Vec<([f64; 3], BigRational)>>, cand: Vec<([f64; 3], BigRational)>) {
    match best {
        None => *best = Some(cand),
        Some(b) => {
            if config_key(&cand) < config_key(b) {
                *best = Some(cand);
            }
        }
    }
}

fn config_key(atoms: &[([f64; 3], BigRational)]) -> Vec<(BigRational, [i64; 3])> {
    // quantize coordinates so the comparison is robust to float noise
    let mut key: Vec<(BigRational, [i64; 3])> = atoms
        .iter()
        .map(|(p, m)| {
            (
                -m.clone(),
                [
                    (p[2] * 1e9).round() as i64,
                    (p[0] * 1e9).round() as i64,
                    (p[1] * 1e9).round() as i64,
                ],
            )
        })
        .collect();
    key.sort();
    key
}

/// The measure-class value of a boundary Newton map.
#[derive(Clone, Debug)]
pub enum MeasureClass {
    /// The strictly semistable boundary value `delta_0/2 + delta_inf/2`.
    BoundaryHalfAtoms,
    /// Barycentered truncated measure, reported in the canonical rotation
    /// frame; `residual` is the Euclidean center-of-mass norm after
    /// recentering.
    Barycentered {
        atoms: Vec<([f64; 3], BigRational)>,
        tail_bound: BigRational,
        residual: f64,
    },
}

/// Assign the measure class of a semistable boundary Newton map,
/// consistently with its GIT class.
pub fn theta_bar(class: &GitClassDescriptor, n: &NewtonMap, n_max: u32) -> Result<MeasureClass> {
    let verdict = classify_newton(n).kind;
    match (class, verdict) {
        (GitClassDescriptor::StrictlySemistable { degree }, VerdictKind::StrictlySemistable) => {
            if *degree != n.degree() {
                return Err(Error::DegenerateInput("class degree mismatch".into()));
            }
            Ok(MeasureClass::BoundaryHalfAtoms)
        }
        (GitClassDescriptor::Stable { degree, .. }, VerdictKind::Stable) => {
            if *degree != n.degree() {
                return Err(Error::DegenerateInput("class degree mismatch".into()));
            }
            let measure = measure_of_newton(n, n_max)?;
            let bc = conformal_barycenter(&measure)?;
            let pushed: Vec<([f64; 3], BigRational)> = measure
                .atoms()
                .iter()
                .map(|(p, m)| (to_origin(&bc.0, &stereographic(p)), m.clone()))
                .collect();
            let canonical = canonical_rotation(&pushed);
            let mut e = [0.0f64; 3];
            let mut total = 0.0;
            for (p, m) in &canonical {
                let mf = m.to_f64().unwrap_or(0.0);
                e = add3(&e, &scale3(p, mf));
                total += mf;
            }
            let residual = dot(&e, &e).sqrt() / total;
            Ok(MeasureClass::Barycentered {
                atoms: canonical,
                tail_bound: measure.tail_bound().clone(),
                residual,
            })
        }
        _ => Err(Error::DegenerateInput(
            "class descriptor inconsistent with the map's verdict".into(),
        )),
    }
}
