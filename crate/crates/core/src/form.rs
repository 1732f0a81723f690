//! Homogeneous bivariate forms over the Gaussian rationals.
//!
//! A degree-d form is stored as the vector of coefficients of
//! `X^i Y^(d-i)` for `i = 0..=d`. Projective roots split into the two
//! coordinate axes (`[0:1]` from a power of X, `[1:0]` from a power of Y)
//! plus the finite nonzero roots of the dehomogenized core polynomial in
//! `z = X/Y`, which is how the gcd, squarefree and root routines below
//! reduce to the univariate engine.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::projective::P1Point;
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Eq)]
pub struct HomogeneousForm {
    degree: u32,
    coeffs: Vec<ExactScalar>,
}

/// Exact roots of a form. `remainder`, when present, is a normalized factor
/// of positive degree with no roots in Q(i); the listed roots together with
/// it account for the full degree.
#[derive(Clone, Debug)]
pub struct FormRoots {
    pub roots: Vec<(P1Point, u32)>,
    pub remainder: Option<HomogeneousForm>,
}

impl HomogeneousForm {
    pub fn new(degree: u32, coeffs: Vec<ExactScalar>) -> Self {
        assert_eq!(coeffs.len(), degree as usize + 1, "coefficient count");
        HomogeneousForm { degree, coeffs }
    }

    pub fn zero(degree: u32) -> Self {
        HomogeneousForm::new(degree, vec![ExactScalar::zero(); degree as usize + 1])
    }

    /// The constant form 1 (degree 0).
    pub fn one() -> Self {
        HomogeneousForm::new(0, vec![ExactScalar::one()])
    }

    /// `c * X^i * Y^(degree-i)`.
    pub fn monomial(degree: u32, i: u32, c: ExactScalar) -> Self {
        assert!(i <= degree);
        let mut coeffs = vec![ExactScalar::zero(); degree as usize + 1];
        coeffs[i as usize] = c;
        HomogeneousForm::new(degree, coeffs)
    }

    /// `X - s*Y` for finite `s`; `Y` for the point at infinity the factor
    /// `X - inf*Y` degenerates to under the usual convention.
    pub fn linear_factor(p: &P1Point) -> Self {
        match p {
            P1Point::Finite(s) => HomogeneousForm::new(1, vec![-s.clone(), ExactScalar::one()]),
            P1Point::Infinity => {
                HomogeneousForm::new(1, vec![ExactScalar::one(), ExactScalar::zero()])
            }
        }
    }

    /// Product of linear factors with multiplicities.
    pub fn from_linear_factors(factors: &[(P1Point, u32)]) -> Self {
        let mut acc = HomogeneousForm::one();
        for (p, m) in factors {
            let lin = HomogeneousForm::linear_factor(p);
            for _ in 0..*m {
                acc = acc.mul(&lin);
            }
        }
        acc
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: u32) -> &ExactScalar {
        &self.coeffs[i as usize]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the highest nonzero coefficient (X-exponent), if any.
    fn lead_index(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Leading (highest X-power) nonzero coefficient.
    pub fn lead_coeff(&self) -> Option<&ExactScalar> {
        self.lead_index().map(|i| &self.coeffs[i])
    }

    /// Multiplicity of `[0:1]` as a root: largest k with X^k dividing.
    pub fn x_order(&self) -> u32 {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len()) as u32
    }

    /// Multiplicity of `[1:0]` as a root: largest k with Y^k dividing.
    pub fn y_order(&self) -> u32 {
        match self.lead_index() {
            Some(i) => self.degree - i as u32,
            None => self.degree,
        }
    }

    /// Scale so the leading nonzero coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.lead_coeff() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().unwrap()),
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        HomogeneousForm::new(self.degree, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree, rhs.degree, "degree mismatch in form addition");
        HomogeneousForm::new(
            self.degree,
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.degree, rhs.degree,
            "degree mismatch in form subtraction"
        );
        HomogeneousForm::new(
            self.degree,
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let degree = self.degree + rhs.degree;
        let mut out = vec![ExactScalar::zero(); degree as usize + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        HomogeneousForm::new(degree, out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = HomogeneousForm::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &ExactScalar, y: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        let mut xp = ExactScalar::one();
        let mut pows_x = Vec::with_capacity(self.coeffs.len());
        for _ in 0..self.coeffs.len() {
            pows_x.push(xp.clone());
            xp = &xp * x;
        }
        let mut yp = ExactScalar::one();
        for i in (0..self.coeffs.len()).rev() {
            let term = &(&self.coeffs[i] * &pows_x[i]) * &yp;
            acc = &acc + &term;
            yp = &yp * y;
        }
        acc
    }

    /// Value at a projective point, in the chart `(z, 1)` for finite z and
    /// `(1, 0)` at infinity. Vanishing is chart-independent.
    pub fn eval_point(&self, p: &P1Point) -> ExactScalar {
        match p {
            P1Point::Finite(z) => self.eval(z, &ExactScalar::one()),
            P1Point::Infinity => self.coeffs[self.degree as usize].clone(),
        }
    }

    /// Strip the axis factors: returns `(x_order, y_order, core)` with the
    /// core dehomogenized (nonzero constant and leading terms).
    pub(crate) fn split_core(&self) -> (u32, u32, QPoly) {
        if self.is_zero() {
            return (0, self.degree, QPoly::zero());
        }
        let xo = self.x_order() as usize;
        let lead = self.lead_index().unwrap();
        let core = QPoly::from_coeffs(self.coeffs[xo..=lead].to_vec());
        (xo as u32, self.degree - lead as u32, core)
    }

    pub(crate) fn from_core(x_order: u32, y_order: u32, core: &QPoly, degree: u32) -> Self {
        let mut coeffs = vec![ExactScalar::zero(); degree as usize + 1];
        for (j, c) in core.0.iter().enumerate() {
            coeffs[x_order as usize + j] = c.clone();
        }
        let built = HomogeneousForm::new(degree, coeffs);
        debug_assert_eq!(built.y_order(), y_order);
        built
    }

    /// Exact division by a (necessarily dividing) factor.
    pub fn exact_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroForm);
        }
        if self.is_zero() {
            return Ok(HomogeneousForm::zero(self.degree - rhs.degree));
        }
        let (xa, _ya, ca) = self.split_core();
        let (xb, _yb, cb) = rhs.split_core();
        if xa < xb {
            return Err(Error::Internal("form division: X-order mismatch".into()));
        }
        let q = ca.exact_div(&cb)?;
        let degree = self.degree - rhs.degree;
        Ok(HomogeneousForm::from_core(
            xa - xb,
            degree - (xa - xb) - q.degree().unwrap_or(0) as u32,
            &q,
            degree,
        ))
    }

    /// Squarefree multiplicity profile: pairwise-coprime squarefree forms
    /// `F_k` of positive degree with `self ~ prod F_k^k` up to a scalar.
    /// Each `(k, F_k)` collects the roots of exact multiplicity `k`.
    pub fn multiplicity_profile(&self) -> Vec<(u32, HomogeneousForm)> {
        if self.is_zero() || self.degree == 0 {
            return Vec::new();
        }
        let (xo, yo, core) = self.split_core();
        let mut parts: Vec<(u32, HomogeneousForm)> = Vec::new();
        let core_deg = core.degree().unwrap_or(0) as u32;
        for (k, s) in core.squarefree_decomposition() {
            let d = s.degree().unwrap_or(0) as u32;
            parts.push((k, HomogeneousForm::from_core(0, 0, &s.monic(), d)));
        }
        let _ = core_deg;
        let mut push_axis = |mult: u32, axis_x: bool| {
            if mult == 0 {
                return;
            }
            let axis = if axis_x {
                HomogeneousForm::monomial(1, 1, ExactScalar::one())
            } else {
                HomogeneousForm::monomial(1, 0, ExactScalar::one())
            };
            if let Some(entry) = parts.iter_mut().find(|(k, _)| *k == mult) {
                entry.1 = entry.1.mul(&axis);
            } else {
                parts.push((mult, axis));
            }
        };
        push_axis(xo, true);
        push_axis(yo, false);
        parts.sort_by_key(|(k, _)| *k);
        parts
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let d = self.degree as usize;
        let mut first = true;
        for i in (0..=d).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_real() && c.re() < &num_traits::Zero::zero() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let xi = i;
            let yi = d - i;
            let coeff_is_one = mag.is_one();
            let needs_coeff = !coeff_is_one || (xi == 0 && yi == 0);
            if needs_coeff {
                if mag.is_real() || xi + yi == 0 {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
                if xi + yi > 0 {
                    write!(f, "*")?;
                }
            }
            match (xi, yi) {
                (0, 0) => {}
                (1, 0) => write!(f, "X")?,
                (x, 0) => write!(f, "X^{x}")?,
                (0, 1) => write!(f, "Y")?,
                (0, y) => write!(f, "Y^{y}")?,
                (1, 1) => write!(f, "X*Y")?,
                (1, y) => write!(f, "X*Y^{y}")?,
                (x, 1) => write!(f, "X^{x}*Y")?,
                (x, y) => write!(f, "X^{x}*Y^{y}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Greatest common divisor of two forms, with cofactors.
///
/// Returns `(H, A1, B1)` with `H*A1 = A` and `H*B1 = B` exactly,
/// `gcd(A1, B1) = 1`, and `H` normalized (leading coefficient 1).
pub fn poly_gcd(
    a: &HomogeneousForm,
    b: &HomogeneousForm,
) -> Result<(HomogeneousForm, HomogeneousForm, HomogeneousForm)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::DegenerateInput("gcd of two zero forms".into()));
    }
    let h = if a.is_zero() {
        b.normalized()
    } else if b.is_zero() {
        a.normalized()
    } else {
        let (xa, _ya, ca) = a.split_core();
        let (xb, _yb, cb) = b.split_core();
        let xo = xa.min(xb);
        let yo = a.y_order().min(b.y_order());
        let core = ca.gcd(&cb);
        let cd = core.degree().unwrap_or(0) as u32;
        HomogeneousForm::from_core(xo, yo, &core, xo + yo + cd)
    };
    let a1 = a.exact_div(&h)?;
    let b1 = b.exact_div(&h)?;
    Ok((h, a1, b1))
}

/// Exact projective roots of a nonzero form, with the unfactorable
/// remainder (no roots in the scalar field) surfaced rather than
/// approximated.
pub fn roots_of_form(a: &HomogeneousForm) -> Result<FormRoots> {
    if a.is_zero() {
        return Err(Error::ZeroForm);
    }
    let (xo, yo, core) = a.split_core();
    let mut roots: Vec<(P1Point, u32)> = Vec::new();
    if xo > 0 {
        roots.push((P1Point::finite(ExactScalar::zero()), xo));
    }
    if yo > 0 {
        roots.push((P1Point::Infinity, yo));
    }
    let mut remainder = None;
    if core.degree().unwrap_or(0) >= 1 {
        let (finite, rem) = core.rational_roots()?;
        for (r, m) in finite {
            if r.is_zero() {
                continue; // already accounted by x_order
            }
            roots.push((P1Point::finite(r), m));
        }
        remainder = rem.map(|p| {
            let d = p.degree().unwrap_or(0) as u32;
            HomogeneousForm::from_core(0, 0, &p, d)
        });
    }
    roots.sort_by(|(p1, _), (p2, _)| p1.cmp_points(p2));
    Ok(FormRoots { roots, remainder })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    fn pt(n: i64) -> P1Point {
        P1Point::finite(s(n))
    }

    // X^i Y^j monomial of matching degree
    fn xy(i: u32, j: u32, c: i64) -> HomogeneousForm {
        HomogeneousForm::monomial(i + j, i, s(c))
    }

    #[test]
    fn gcd_shared_linear_factors() {
        // A = X^2 (X - Y), B = X (X - Y)^2
        let x = xy(1, 0, 1);
        let xmy = HomogeneousForm::linear_factor(&pt(1));
        let a = x.mul(&x).mul(&xmy);
        let b = x.mul(&xmy).mul(&xmy);
        let (h, a1, b1) = poly_gcd(&a, &b).unwrap();
        assert_eq!(h, x.mul(&xmy).normalized());
        assert_eq!(h.mul(&a1), a);
        assert_eq!(h.mul(&b1), b);
        // cofactors are X and X - Y
        assert_eq!(a1.normalized(), x.normalized());
        assert_eq!(b1.normalized(), xmy.normalized());
    }

    #[test]
    fn gcd_of_cubic_newton_pair() {
        // (X^2 Y, 2 X Y^2) -> H = XY, A1 = X, B1 = 2Y
        let a = xy(2, 1, 1);
        let b = xy(1, 2, 2);
        let (h, a1, b1) = poly_gcd(&a, &b).unwrap();
        assert_eq!(h, xy(1, 1, 1));
        assert_eq!(a1, xy(1, 0, 1));
        assert_eq!(b1, xy(0, 1, 2));
    }

    #[test]
    fn gcd_of_coprime_forms_is_one() {
        let a = xy(2, 0, 1);
        let b = xy(0, 2, 1);
        let (h, _, _) = poly_gcd(&a, &b).unwrap();
        assert_eq!(h.degree(), 0);
    }

    #[test]
    fn gcd_rejects_two_zero_forms() {
        let z = HomogeneousForm::zero(2);
        assert!(poly_gcd(&z, &z).is_err());
    }

    #[test]
    fn roots_of_monomial_form() {
        // X^2 Y -> [0:1] twice, [1:0] once
        let a = xy(2, 1, 1);
        let r = roots_of_form(&a).unwrap();
        assert!(r.remainder.is_none());
        assert_eq!(r.roots, vec![(pt(0), 2), (P1Point::Infinity, 1)]);
    }

    #[test]
    fn roots_with_shifted_factor() {
        // X (X - 2Y)^3
        let f = HomogeneousForm::from_linear_factors(&[(pt(0), 1), (pt(2), 3)]);
        let r = roots_of_form(&f).unwrap();
        assert!(r.remainder.is_none());
        assert_eq!(r.roots, vec![(pt(0), 1), (pt(2), 3)]);
    }

    #[test]
    fn irreducible_quadratic_reported() {
        // X^2 - 2 Y^2 has no roots over Q(i)
        let f = HomogeneousForm::new(2, vec![s(-2), s(0), s(1)]);
        let r = roots_of_form(&f).unwrap();
        assert!(r.roots.is_empty());
        assert_eq!(r.remainder.unwrap().degree(), 2);
    }

    #[test]
    fn x2_plus_y2_splits_over_gaussians() {
        let f = HomogeneousForm::new(2, vec![s(1), s(0), s(1)]);
        let r = roots_of_form(&f).unwrap();
        assert!(r.remainder.is_none());
        assert_eq!(r.roots.len(), 2);
    }

    #[test]
    fn multiplicity_profile_counts_degrees() {
        // X^2 Y (X - Y)^3
        let f =
            HomogeneousForm::from_linear_factors(&[(pt(0), 2), (P1Point::Infinity, 1), (pt(1), 3)]);
        let profile = f.multiplicity_profile();
        let summary: Vec<(u32, u32)> = profile.iter().map(|(k, f)| (*k, f.degree())).collect();
        assert_eq!(summary, vec![(1, 1), (2, 1), (3, 1)]);
    }
}
