use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{fraction_string, int, rat, to_f64, Rational};

/// Model parameters for one graph.
///
/// The stored relations always hold exactly: `p_rc = 1 - 1/beta` (when
/// `beta` is finite) and `p_even = p_rc / 2`. `p_rc = 1` is representable
/// and corresponds to `beta = ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    beta: Option<Rational>,
    p_rc: Rational,
    p_even: Rational,
    q: Rational,
    n: usize,
}

fn out_of_range(name: &'static str, value: &Rational, expected: &'static str) -> Error {
    Error::Parameter {
        name,
        value: fraction_string(value),
        expected,
    }
}

impl Params {
    pub fn from_beta(beta: Rational, n: usize) -> Result<Self> {
        if beta <= Rational::one() {
            return Err(out_of_range("beta", &beta, "beta > 1"));
        }
        let p_rc = Rational::one() - beta.recip();
        Self::build(Some(beta), p_rc, n)
    }

    pub fn from_p_rc(p_rc: Rational, n: usize) -> Result<Self> {
        if p_rc <= Rational::zero() || p_rc > Rational::one() {
            return Err(out_of_range("p_rc", &p_rc, "0 < p_rc <= 1"));
        }
        let beta = (p_rc < Rational::one()).then(|| (Rational::one() - &p_rc).recip());
        Self::build(beta, p_rc, n)
    }

    pub fn from_p_even(p_even: Rational, n: usize) -> Result<Self> {
        if p_even <= Rational::zero() || p_even > rat(1, 2) {
            return Err(out_of_range("p_even", &p_even, "0 < p_even <= 1/2"));
        }
        Self::from_p_rc(p_even * int(2), n)
    }

    fn build(beta: Option<Rational>, p_rc: Rational, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        let p_even = &p_rc / int(2);
        let params = Params {
            beta,
            p_rc,
            p_even,
            q: int(2),
            n,
        };
        debug_assert!(params.relations_hold());
        Ok(params)
    }

    /// Replace the cluster weight. Every bound check still demands `q = 2`.
    pub fn with_q(mut self, q: Rational) -> Result<Self> {
        if q <= Rational::zero() {
            return Err(out_of_range("q", &q, "q > 0"));
        }
        self.q = q;
        Ok(self)
    }

    pub fn beta(&self) -> Option<&Rational> {
        self.beta.as_ref()
    }

    pub fn p_rc(&self) -> &Rational {
        &self.p_rc
    }

    pub fn p_even(&self) -> &Rational {
        &self.p_even
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// p' = p_even / (1 - p_even), the per-edge probability of the lift.
    pub fn lift_probability(&self) -> Rational {
        &self.p_even / (Rational::one() - &self.p_even)
    }

    /// n⁻², the weight penalty on near-even subgraphs.
    pub fn worm_penalty(&self) -> Rational {
        Rational::new(1.into(), (self.n * self.n).into())
    }

    pub fn relations_hold(&self) -> bool {
        let beta_ok = match &self.beta {
            Some(b) => self.p_rc == Rational::one() - b.recip(),
            None => self.p_rc == Rational::one(),
        };
        let lift = self.lift_probability();
        beta_ok && self.p_even == &self.p_rc / int(2) && lift > Rational::zero() && lift <= Rational::one()
    }

    pub fn require_q2(&self) -> Result<()> {
        if self.q != int(2) {
            return Err(out_of_range("q", &self.q, "q = 2 for this check"));
        }
        Ok(())
    }

    /// The single-bond chain needs `0 < p_rc < 1`.
    pub fn require_open_rc(&self) -> Result<()> {
        if self.p_rc >= Rational::one() {
            return Err(out_of_range("p_rc", &self.p_rc, "0 < p_rc < 1"));
        }
        Ok(())
    }

    pub fn p_rc_f64(&self) -> f64 {
        to_f64(&self.p_rc)
    }

    pub fn p_even_f64(&self) -> f64 {
        to_f64(&self.p_even)
    }

    pub fn q_f64(&self) -> f64 {
        to_f64(&self.q)
    }

    pub fn record(&self) -> ParamsRecord {
        ParamsRecord {
            beta: self.beta.as_ref().map(fraction_string),
            p_rc: fraction_string(&self.p_rc),
            p_even: fraction_string(&self.p_even),
            q: fraction_string(&self.q),
            lift_probability: fraction_string(&self.lift_probability()),
        }
    }
}

/// Parameters echoed into reports.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ParamsRecord {
    pub beta: Option<String>,
    pub p_rc: String,
    pub p_even: String,
    pub q: String,
    pub lift_probability: String,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_are_exact() {
        let p = Params::from_beta(int(2), 3).unwrap();
        assert_eq!(p.p_rc(), &rat(1, 2));
        assert_eq!(p.p_even(), &rat(1, 4));
        assert_eq!(p.lift_probability(), rat(1, 3));
        assert_eq!(p.worm_penalty(), rat(1, 9));
        assert!(p.relations_hold());

        let p = Params::from_p_even(rat(2, 5), 4).unwrap();
        assert_eq!(p.p_rc(), &rat(4, 5));
        assert_eq!(p.beta(), Some(&int(5)));

        let p = Params::from_p_even(rat(1, 2), 4).unwrap();
        assert_eq!(p.beta(), None);
        assert_eq!(p.lift_probability(), int(1));
        assert!(p.require_open_rc().is_err());
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(Params::from_beta(int(1), 2).is_err());
        assert!(Params::from_beta(rat(1, 2), 2).is_err());
        assert!(Params::from_p_rc(int(0), 2).is_err());
        assert!(Params::from_p_rc(rat(3, 2), 2).is_err());
        assert!(Params::from_p_even(rat(3, 5), 2).is_err());
        let p = Params::from_beta(int(2), 2).unwrap();
        assert!(p.clone().with_q(int(0)).is_err());
        let p3 = p.with_q(int(3)).unwrap();
        assert!(p3.require_q2().is_err());
    }
}
