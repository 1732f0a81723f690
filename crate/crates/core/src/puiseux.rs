//! Truncated Puiseux series over the exact scalars.
//!
//! The computational stand-in for the completed field of formal Puiseux
//! series: finitely many terms with rational exponents, plus a truncation
//! order below which coefficients are known and above which nothing is.
//! Every query that would need unknown coefficients (valuations of
//! differences, reductions at a radius beyond the truncation) fails
//! loudly instead of guessing.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

/// Exponents are rationals; the implied ramification index of a series is
/// the lcm of the exponent denominators.
pub type Exponent = Ratio<i64>;

/// Truncation order: exponents `>= this` are unknown. `Infinite` marks an
/// exactly known element (a polynomial expression entered literally).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Trunc {
    Finite(Exponent),
    Infinite,
}

impl Trunc {
    fn min(self, other: Trunc) -> Trunc {
        match (self, other) {
            (Trunc::Infinite, t) | (t, Trunc::Infinite) => t,
            (Trunc::Finite(a), Trunc::Finite(b)) => Trunc::Finite(a.min(b)),
        }
    }

    fn shift(self, by: Exponent) -> Trunc {
        match self {
            Trunc::Infinite => Trunc::Infinite,
            Trunc::Finite(a) => Trunc::Finite(a + by),
        }
    }

    pub fn allows(self, e: Exponent) -> bool {
        match self {
            Trunc::Infinite => true,
            Trunc::Finite(t) => e < t,
        }
    }
}

/// The valuation of a series: least known exponent, or plus infinity for
/// an exactly zero series.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Valuation {
    Finite(Exponent),
    PlusInfinity,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PuiseuxSeries {
    /// Nonzero coefficients by exponent, all strictly below the truncation.
    terms: BTreeMap<Exponent, ExactScalar>,
    trunc: Trunc,
}

impl PuiseuxSeries {
    pub fn new(terms: Vec<(Exponent, ExactScalar)>, trunc: Trunc) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            assert!(trunc.allows(e), "term exponent {e} at or above truncation");
            let entry = map.entry(e).or_insert_with(ExactScalar::zero);
            *entry = &*entry + &c;
            if entry.is_zero() {
                map.remove(&e);
            }
        }
        PuiseuxSeries { terms: map, trunc }
    }

    /// An exactly known constant.
    pub fn constant(c: ExactScalar) -> Self {
        PuiseuxSeries::new(vec![(Exponent::from_integer(0), c)], Trunc::Infinite)
    }

    pub fn zero() -> Self {
        PuiseuxSeries::new(Vec::new(), Trunc::Infinite)
    }

    /// `c * t^e`, exactly known.
    pub fn monomial(c: ExactScalar, e: Exponent) -> Self {
        PuiseuxSeries::new(vec![(e, c)], Trunc::Infinite)
    }

    pub fn truncation(&self) -> Trunc {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn is_known_zero(&self) -> bool {
        self.terms.is_empty() && self.trunc == Trunc::Infinite
    }

    /// Ramification index: lcm of exponent denominators.
    pub fn ramification(&self) -> i64 {
        self.terms
            .keys()
            .fold(1i64, |acc, e| num_integer::lcm(acc, *e.denom()))
    }

    /// The valuation, or an error if no term is known and the truncation is
    /// finite (the leading term may hide beyond it).
    pub fn valuation(&self) -> Result<Valuation> {
        match self.terms.keys().next() {
            Some(e) => Ok(Valuation::Finite(*e)),
            None => match self.trunc {
                Trunc::Infinite => Ok(Valuation::PlusInfinity),
                Trunc::Finite(_) => Err(Error::IndeterminateValuation),
            },
        }
    }

    /// Certified test `v(self) >= q`.
    pub fn valuation_at_least(&self, q: Exponent) -> Result<bool> {
        match self.terms.keys().next() {
            Some(e) => Ok(*e >= q),
            None => match self.trunc {
                Trunc::Infinite => Ok(true),
                Trunc::Finite(t) if t >= q => Ok(true),
                Trunc::Finite(_) => Err(Error::IndeterminateValuation),
            },
        }
    }

    /// The exact coefficient of `t^e`, certified: errors when `e` is at or
    /// beyond the truncation order.
    pub fn coefficient_at(&self, e: Exponent) -> Result<ExactScalar> {
        if !self.trunc.allows(e) {
            return Err(Error::UncertifiedReduction(format!(
                "coefficient of t^{e} lies beyond the truncation order"
            )));
        }
        Ok(self
            .terms
            .get(&e)
            .cloned()
            .unwrap_or_else(ExactScalar::zero))
    }

    pub fn add(&self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        let trunc = self.trunc.min(rhs.trunc);
        let mut terms: Vec<(Exponent, ExactScalar)> = Vec::new();
        for (e, c) in self.terms.iter().chain(rhs.terms.iter()) {
            if trunc.allows(*e) {
                terms.push((*e, c.clone()));
            }
        }
        PuiseuxSeries::new(terms, trunc)
    }

    pub fn neg(&self) -> PuiseuxSeries {
        PuiseuxSeries {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        // a known only below t_a, b below t_b: the product is certain below
        // min(t_a + v(b), t_b + v(a)), with the truncation standing in for
        // the valuation of a series with no known terms.
        let vbar = |s: &PuiseuxSeries| -> Trunc {
            match s.terms.keys().next() {
                Some(e) => Trunc::Finite(*e),
                None => s.trunc,
            }
        };
        let t1 = match vbar(rhs) {
            Trunc::Infinite => Trunc::Infinite,
            Trunc::Finite(v) => self.trunc.shift(v),
        };
        let t2 = match vbar(self) {
            Trunc::Infinite => Trunc::Infinite,
            Trunc::Finite(v) => rhs.trunc.shift(v),
        };
        let trunc = t1.min(t2);
        let mut terms: Vec<(Exponent, ExactScalar)> = Vec::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1 + e2;
                if trunc.allows(e) {
                    terms.push((e, c1 * c2));
                }
            }
        }
        PuiseuxSeries::new(terms, trunc)
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            for (k, (e, c)) in self.terms.iter().enumerate() {
                if k > 0 {
                    write!(f, " + ")?;
                }
                let e_zero = e.numer() == &0;
                let e_one = *e == Exponent::from_integer(1);
                if e_zero {
                    write!(f, "{c}")?;
                } else {
                    if !c.is_one() {
                        if c.is_real() {
                            write!(f, "{c}*")?;
                        } else {
                            write!(f, "({c})*")?;
                        }
                    }
                    if e_one {
                        write!(f, "t")?;
                    } else if e.denom() == &1 && e.numer() > &0 {
                        write!(f, "t^{}", e.numer())?;
                    } else {
                        write!(f, "t^({e})")?;
                    }
                }
            }
        }
        if let Trunc::Finite(t) = self.trunc {
            write!(f, " + O(t^({t}))")?;
        }
        Ok(())
    }
}
