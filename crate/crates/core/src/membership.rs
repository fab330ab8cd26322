//! Interchangeable lattice-membership tests, registered by name.
//!
//! Two oracles ship by default and are always run together by
//! [`crate::lattice::contains`]: the group-sum criterion (a degree-0 divisor
//! on the rational places is principal iff its coefficients sum the points
//! to Q_inf) and integer solvability against the HNF basis.

use std::sync::OnceLock;

use crate::curve::PlaceTable;
use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;

pub trait MembershipOracle: Send + Sync {
    fn name(&self) -> &'static str;

    /// `v` has length n.
    fn contains(&self, table: &PlaceTable, basis: &LatticeBasis, v: &[i64]) -> bool;
}

/// Zero coordinate sum and sum v_i P_i = Q_inf.
pub struct GroupSumOracle;

impl MembershipOracle for GroupSumOracle {
    fn name(&self) -> &'static str {
        "group-sum"
    }

    fn contains(&self, table: &PlaceTable, _: &LatticeBasis, v: &[i64]) -> bool {
        v.iter().sum::<i64>() == 0 && table.group_sum(v) == 0
    }
}

/// Reduction against the HNF rows leaves zero.
pub struct HnfSolveOracle;

impl MembershipOracle for HnfSolveOracle {
    fn name(&self) -> &'static str {
        "hnf-solve"
    }

    fn contains(&self, _: &PlaceTable, basis: &LatticeBasis, v: &[i64]) -> bool {
        basis.hnf().contains(v)
    }
}

pub struct OracleRegistry {
    oracles: Vec<Box<dyn MembershipOracle>>,
}

impl OracleRegistry {
    pub fn empty() -> Self {
        OracleRegistry { oracles: Vec::new() }
    }

    /// The shared registry holding both built-in oracles.
    pub fn with_defaults() -> &'static OracleRegistry {
        static DEFAULT: OnceLock<OracleRegistry> = OnceLock::new();
        DEFAULT.get_or_init(|| {
            let mut r = OracleRegistry::empty();
            r.register(Box::new(GroupSumOracle));
            r.register(Box::new(HnfSolveOracle));
            r
        })
    }

    /// Adds an oracle, replacing any with the same name.
    pub fn register(&mut self, oracle: Box<dyn MembershipOracle>) {
        self.oracles.retain(|o| o.name() != oracle.name());
        self.oracles.push(oracle);
    }

    pub fn get(&self, name: &str) -> Result<&dyn MembershipOracle> {
        self.oracles
            .iter()
            .find(|o| o.name() == name)
            .map(|o| o.as_ref())
            .ok_or_else(|| Error::UnknownName {
                kind: "membership oracle",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.oracles.iter().map(|o| o.name()).collect()
    }

    /// Runs every oracle and insists they agree.
    pub fn decide(&self, table: &PlaceTable, basis: &LatticeBasis, v: &[i64]) -> Result<bool> {
        if v.len() != table.n() {
            return Err(Error::LengthMismatch(v.len(), table.n()));
        }
        let mut verdict = None;
        for o in &self.oracles {
            let got = o.contains(table, basis, v);
            match verdict {
                None => verdict = Some((o.name(), got)),
                Some((first, expect)) if expect != got => {
                    return Err(Error::Internal(format!(
                        "membership oracles disagree on {v:?}: {first} says {expect}, {} says {got}",
                        o.name()
                    )))
                }
                Some(_) => {}
            }
        }
        verdict
            .map(|(_, b)| b)
            .ok_or_else(|| Error::Internal("no membership oracle registered".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Curve;
    use crate::field::PrimeField;
    use crate::lattice::basis;

    struct Never;
    impl MembershipOracle for Never {
        fn name(&self) -> &'static str {
            "never"
        }
        fn contains(&self, _: &PlaceTable, _: &LatticeBasis, _: &[i64]) -> bool {
            false
        }
    }

    #[test]
    fn registry_lookup_and_disagreement() {
        let t = Curve::new(&PrimeField::new(5).unwrap(), [1, 0, 1, 1])
            .unwrap()
            .enumerate_places();
        let b = basis(&t).unwrap();
        let defaults = OracleRegistry::with_defaults();
        assert_eq!(defaults.names(), vec!["group-sum", "hnf-solve"]);
        assert!(defaults.get("hnf-solve").is_ok());
        assert!(matches!(defaults.get("lll"), Err(Error::UnknownName { .. })));

        let row = b.rows()[0].clone();
        let mut r = OracleRegistry::empty();
        assert!(r.decide(&t, &b, &row).is_err());
        r.register(Box::new(GroupSumOracle));
        assert!(r.decide(&t, &b, &row).unwrap());
        r.register(Box::new(Never));
        assert!(matches!(r.decide(&t, &b, &row), Err(Error::Internal(_))));
        assert_eq!(
            defaults.decide(&t, &b, &[0, 0]).unwrap_err(),
            Error::LengthMismatch(2, 9)
        );
    }
}
