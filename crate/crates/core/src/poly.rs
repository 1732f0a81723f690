//! Dense univariate polynomials over the Gaussian rationals.
//!
//! Internal engine behind the homogeneous-form operations: Euclidean gcd,
//! Yun squarefree decomposition, and complete extraction of roots lying in
//! Q(i). The root search is the Gaussian-integer rational root theorem: a
//! root p/q in lowest terms of a primitive Z[i] polynomial has p dividing
//! the constant term and q dividing the leading term, so enumerating
//! divisors (up to units) is exhaustive.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

/// Roots with multiplicities plus the factor with no roots in the field.
pub(crate) type RootsAndRemainder = (Vec<(ExactScalar, u32)>, Option<QPoly>);

/// Coefficients little-endian; invariant: no trailing zero (zero poly = empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct QPoly(pub Vec<ExactScalar>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn from_coeffs(coeffs: Vec<ExactScalar>) -> Self {
        let mut p = QPoly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.0.last(), Some(c) if c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn lead(&self) -> Option<&ExactScalar> {
        self.0.last()
    }

    pub fn eval(&self, z: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn sub(&self, rhs: &QPoly) -> QPoly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.0.get(k).cloned().unwrap_or_else(ExactScalar::zero);
            let b = rhs.0.get(k).cloned().unwrap_or_else(ExactScalar::zero);
            out.push(&a - &b);
        }
        QPoly::from_coeffs(out)
    }

    #[cfg_attr(not(test), allow(dead_code))]
    pub fn mul(&self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![ExactScalar::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &ExactScalar) -> QPoly {
        QPoly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> QPoly {
        if self.0.len() <= 1 {
            return QPoly::zero();
        }
        let out = self
            .0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &ExactScalar::from_int(k as i64))
            .collect();
        QPoly::from_coeffs(out)
    }

    /// Euclidean division. Panics if `rhs` is zero.
    pub fn div_rem(&self, rhs: &QPoly) -> (QPoly, QPoly) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let dr = rhs.degree().unwrap();
        let lead_inv = rhs.lead().unwrap().inv().unwrap();
        let mut rem = self.0.clone();
        let mut quo = vec![ExactScalar::zero(); self.0.len().saturating_sub(dr)];
        while rem.len() > dr {
            let k = rem.len() - 1;
            let c = &rem[k] * &lead_inv;
            if !c.is_zero() {
                let shift = k - dr;
                for (j, b) in rhs.0.iter().enumerate() {
                    rem[shift + j] = &rem[shift + j] - &(&c * b);
                }
                quo[shift] = c;
            }
            rem.pop();
        }
        (QPoly::from_coeffs(quo), QPoly::from_coeffs(rem))
    }

    /// Exact division; errors internally if the division leaves a remainder.
    pub fn exact_div(&self, rhs: &QPoly) -> Result<QPoly> {
        let (q, r) = self.div_rem(rhs);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Internal("inexact polynomial division".into()))
        }
    }

    /// Monic associate (leading coefficient 1); zero stays zero.
    pub fn monic(&self) -> QPoly {
        match self.lead() {
            None => QPoly::zero(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    /// Monic gcd by the Euclidean algorithm. Coefficient growth is tamed by
    /// re-normalizing to monic at every step.
    pub fn gcd(&self, rhs: &QPoly) -> QPoly {
        let mut a = self.monic();
        let mut b = rhs.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    /// Yun's squarefree decomposition: returns pairwise-coprime squarefree
    /// `S_k` with `self = lead * prod S_k^k`, listed as `(k, S_k)` with
    /// `deg S_k >= 1`.
    pub fn squarefree_decomposition(&self) -> Vec<(u32, QPoly)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let mut c = fp.exact_div(&a0).expect("gcd divides");
        let mut k = 1u32;
        loop {
            let d = c.sub(&b.derivative());
            if d.is_zero() {
                if b.degree().unwrap_or(0) >= 1 {
                    out.push((k, b.monic()));
                }
                break;
            }
            let s = b.gcd(&d);
            if s.degree().unwrap_or(0) >= 1 {
                out.push((k, s.clone()));
            }
            b = b.exact_div(&s).expect("gcd divides");
            c = d.exact_div(&s).expect("gcd divides");
            k += 1;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
        }
        out
    }

    /// All roots in Q(i) with multiplicities, plus the leftover factor that
    /// has no roots in Q(i) (monic; `None` if the polynomial splits).
    pub fn rational_roots(&self) -> Result<RootsAndRemainder> {
        let deg = match self.degree() {
            None => return Err(Error::ZeroForm),
            Some(0) => return Ok((Vec::new(), None)),
            Some(d) => d,
        };
        let mut roots: Vec<(ExactScalar, u32)> = Vec::new();
        let mut work = self.monic();

        // strip z^k
        let zeros = work.0.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            roots.push((ExactScalar::zero(), zeros as u32));
            work = QPoly::from_coeffs(work.0[zeros..].to_vec());
        }
        if work.degree().unwrap_or(0) == 0 {
            return Ok((roots, None));
        }
        if work.degree() == Some(1) {
            let r = -(&work.0[0] / &work.0[1]);
            roots.push((r, 1));
            return Ok((roots, None));
        }

        let candidates = root_candidates(&work)?;
        for cand in candidates {
            let mut mult = 0u32;
            loop {
                if work.eval(&cand).is_zero() {
                    let lin = QPoly::from_coeffs(vec![-cand.clone(), ExactScalar::one()]);
                    work = work.exact_div(&lin)?;
                    mult += 1;
                } else {
                    break;
                }
            }
            if mult > 0 {
                roots.push((cand, mult));
            }
            if work.degree().unwrap_or(0) == 0 {
                break;
            }
        }
        debug_assert_eq!(
            deg,
            roots.iter().map(|(_, m)| *m as usize).sum::<usize>() + work.degree().unwrap_or(0)
        );
        let remainder = if work.degree().unwrap_or(0) >= 1 {
            Some(work.monic())
        } else {
            None
        };
        Ok((roots, remainder))
    }
}

// ---------------------------------------------------------------------------
// Gaussian integers and divisor enumeration for the rational root theorem
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn new(re: BigInt, im: BigInt) -> Self {
        GaussInt { re, im }
    }

    fn from_int(n: i64) -> Self {
        GaussInt::new(BigInt::from(n), BigInt::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    fn mul(&self, rhs: &GaussInt) -> GaussInt {
        GaussInt::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }

    fn conj(&self) -> GaussInt {
        GaussInt::new(self.re.clone(), -self.im.clone())
    }

    /// Exact quotient if `rhs` divides `self` in Z[i].
    fn exact_div(&self, rhs: &GaussInt) -> Option<GaussInt> {
        let n = rhs.norm();
        let p = self.mul(&rhs.conj());
        let (qr, rr) = p.re.div_mod_floor(&n);
        let (qi, ri) = p.im.div_mod_floor(&n);
        if rr.is_zero() && ri.is_zero() {
            Some(GaussInt::new(qr, qi))
        } else {
            None
        }
    }

    fn to_scalar(&self) -> ExactScalar {
        ExactScalar::new(
            BigRational::from_integer(self.re.clone()),
            BigRational::from_integer(self.im.clone()),
        )
    }
}

/// Factor a nonzero Gaussian integer into Gaussian primes (up to units),
/// by factoring its norm over Z.
fn gauss_factor(a: &GaussInt) -> Result<Vec<(GaussInt, u32)>> {
    let mut out: Vec<(GaussInt, u32)> = Vec::new();
    let mut rem = a.clone();
    for (p, _) in factor_norm(&a.norm())? {
        let gprimes: Vec<GaussInt> = if p == BigInt::from(2) {
            vec![GaussInt::new(BigInt::one(), BigInt::one())]
        } else if (&p % BigInt::from(4u8)) == BigInt::from(3u8) {
            vec![GaussInt::new(p.clone(), BigInt::zero())]
        } else {
            let (x, y) = two_squares(&p)?;
            vec![GaussInt::new(x.clone(), y.clone()), GaussInt::new(x, -y)]
        };
        for g in gprimes {
            let mut e = 0u32;
            while let Some(q) = rem.exact_div(&g) {
                rem = q;
                e += 1;
            }
            if e > 0 {
                out.push((g, e));
            }
        }
    }
    debug_assert!(rem.norm().is_one());
    Ok(out)
}

/// Trial-division factorization of a positive integer (desk scale).
fn factor_norm(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    let mut n = n.clone();
    assert!(n.is_positive());
    let mut out = Vec::new();
    let mut push = |p: BigInt, e: u32| out.push((p, e));
    let mut e2 = 0u32;
    while n.is_even() {
        n /= 2;
        e2 += 1;
    }
    if e2 > 0 {
        push(BigInt::from(2), e2);
    }
    let mut d = BigInt::from(3);
    // coefficients beyond this bound are outside the intended desk scale
    let limit = BigInt::from(100_000_000u64);
    while &d * &d <= n {
        if d > limit {
            return Err(Error::InexactFactor(format!(
                "coefficient norm too large to factor exactly (cofactor {n})"
            )));
        }
        let mut e = 0u32;
        while (&n % &d).is_zero() {
            n = &n / &d;
            e += 1;
        }
        if e > 0 {
            push(d.clone(), e);
        }
        d += 2;
    }
    if n > BigInt::one() {
        push(n, 1);
    }
    Ok(out)
}

/// Write an odd prime p = 1 mod 4 as x^2 + y^2.
fn two_squares(p: &BigInt) -> Result<(BigInt, BigInt)> {
    let pu = p.to_u64().ok_or_else(|| {
        Error::InexactFactor(format!("prime {p} too large for two-square search"))
    })?;
    let mut x = 1u64;
    while x * x <= pu {
        let rest = pu - x * x;
        let y = rest.isqrt();
        if y * y == rest {
            return Ok((BigInt::from(x), BigInt::from(y)));
        }
        x += 1;
    }
    Err(Error::Internal(format!(
        "no two-square decomposition for {p}"
    )))
}

/// Divisors of a nonzero Gaussian integer up to units.
fn gauss_divisors(a: &GaussInt) -> Result<Vec<GaussInt>> {
    let factors = gauss_factor(a)?;
    let mut divs = vec![GaussInt::from_int(1)];
    for (g, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut cur = d.clone();
            next.push(cur.clone());
            for _ in 0..e {
                cur = cur.mul(&g);
                next.push(cur.clone());
            }
        }
        divs = next;
    }
    Ok(divs)
}

/// Candidate roots in Q(i) of a polynomial with nonzero constant term.
fn root_candidates(p: &QPoly) -> Result<Vec<ExactScalar>> {
    // clear denominators to a Z[i] polynomial
    let mut lcm = BigInt::one();
    for c in &p.0 {
        lcm = lcm.lcm(c.re().denom());
        lcm = lcm.lcm(c.im().denom());
    }
    let lcm_r = BigRational::from_integer(lcm);
    let ints: Vec<GaussInt> =
        p.0.iter()
            .map(|c| {
                let re = (c.re() * &lcm_r).to_integer();
                let im = (c.im() * &lcm_r).to_integer();
                GaussInt::new(re, im)
            })
            .collect();
    let a0 = ints.first().expect("nonzero").clone();
    let an = ints.last().expect("nonzero").clone();
    debug_assert!(!a0.is_zero() && !an.is_zero());

    let units = [
        ExactScalar::one(),
        -ExactScalar::one(),
        ExactScalar::i(),
        -ExactScalar::i(),
    ];
    let d0 = gauss_divisors(&a0)?;
    let dn = gauss_divisors(&an)?;
    let mut seen: Vec<ExactScalar> = Vec::new();
    for num in &d0 {
        for den in &dn {
            let base = &num.to_scalar() / &den.to_scalar();
            for u in &units {
                let cand = &base * u;
                if !seen.contains(&cand) {
                    seen.push(cand);
                }
            }
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn poly(coeffs: &[i64]) -> QPoly {
        QPoly::from_coeffs(coeffs.iter().map(|&c| s(c)).collect())
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (z-1)(z-2) and (z-1)(z-3)
        let a = poly(&[2, -3, 1]);
        let b = poly(&[3, -4, 1]);
        let g = a.gcd(&b);
        assert_eq!(g, poly(&[-1, 1]));
    }

    #[test]
    fn squarefree_decomposition_of_cube() {
        // z^3 (z-1)^2 (z+2)
        let f = poly(&[0, 0, 0, 1])
            .mul(&poly(&[1, -2, 1]))
            .mul(&poly(&[2, 1]));
        let parts = f.squarefree_decomposition();
        let mut by_mult: Vec<(u32, usize)> = parts
            .iter()
            .map(|(k, s)| (*k, s.degree().unwrap()))
            .collect();
        by_mult.sort();
        assert_eq!(by_mult, vec![(1, 1), (2, 1), (3, 1)]);
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (z - 1/2)^2 (z - 3)
        let half = ExactScalar::from_ratio(1, 2);
        let lin1 = QPoly::from_coeffs(vec![-half.clone(), s(1)]);
        let lin2 = QPoly::from_coeffs(vec![s(-3), s(1)]);
        let f = lin1.mul(&lin1).mul(&lin2);
        let (roots, rem) = f.rational_roots().unwrap();
        assert!(rem.is_none());
        let mut roots: Vec<(String, u32)> =
            roots.iter().map(|(r, m)| (r.to_string(), *m)).collect();
        roots.sort();
        assert_eq!(roots, vec![("1/2".to_string(), 2), ("3".to_string(), 1)]);
    }

    #[test]
    fn gaussian_roots_found() {
        // (z - i)(z + i) = z^2 + 1
        let f = poly(&[1, 0, 1]);
        let (roots, rem) = f.rational_roots().unwrap();
        assert!(rem.is_none());
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().any(|(r, _)| *r == ExactScalar::i()));
    }

    #[test]
    fn irreducible_remainder_reported() {
        // z^2 - 2 has no roots in Q(i)
        let f = poly(&[-2, 0, 1]);
        let (roots, rem) = f.rational_roots().unwrap();
        assert!(roots.is_empty());
        assert_eq!(rem.unwrap().degree(), Some(2));
    }

    #[test]
    fn exact_div_round_trip() {
        let a = poly(&[1, 2, 3, 4]);
        let b = poly(&[5, -1, 2]);
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
    }
}
