//! Textual description of exchange-coupling Hamiltonians.
//!
//! A spec is a real linear combination of monomials, each monomial a product
//! of exchange couplings between labelled sites. Factor order inside a
//! monomial is preserved when building the dense operator, so non-commuting
//! products keep their written meaning.

use crate::error::{Error, Result};
use crate::operator::{check_pair, exchange_op, Operator};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Term {
    pub coeff: f64,
    /// Ordered exchange factors, each a (site, site) pair with 1-based labels.
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct HamiltonianSpec {
    pub n: usize,
    pub terms: Vec<Term>,
}

impl HamiltonianSpec {
    pub fn new(n: usize, terms: Vec<Term>) -> Result<Self> {
        let spec = HamiltonianSpec { n, terms };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks site labels; failures name the offending zero-based term index.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Internal("spec requires n >= 1".into()));
        }
        for (t, term) in self.terms.iter().enumerate() {
            if !term.coeff.is_finite() {
                return Err(Error::InvalidTerm {
                    term: t,
                    msg: format!("coefficient {} is not finite", term.coeff),
                });
            }
            for &(r, s) in &term.pairs {
                check_pair(r, s, self.n).map_err(|e| Error::InvalidTerm {
                    term: t,
                    msg: e.to_string(),
                })?;
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: HamiltonianSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Dense operator: sum over terms of coeff times the ordered product of
    /// exchange factors; an empty factor list denotes the identity.
    pub fn build(&self) -> Result<Operator> {
        self.validate()?;
        let mut acc = Operator::zero(self.n)?;
        for term in &self.terms {
            let mut mono = Operator::identity(self.n)?;
            for &(r, s) in &term.pairs {
                mono = mono.mul(&exchange_op(self.n, r, s)?);
            }
            acc = acc.add(&mono.scale_re(term.coeff));
        }
        Ok(acc)
    }
}
