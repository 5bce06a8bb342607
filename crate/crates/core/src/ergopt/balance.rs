use super::karp::karp_min_mean;
use super::ErgoptError;
use crate::numeric::Rational;
use crate::systems::{EdgeObservable, FiniteSystem};

/// Range of `∫ u dμ` over invariant measures.
///
/// Both extremes are attained on periodic-orbit measures for an edge
/// observable, so they are two minimum-cycle-mean problems (for `u` and
/// `-u`).
#[derive(Clone, Debug, PartialEq)]
pub struct BalanceReport {
    pub min_integral: Rational,
    pub max_integral: Rational,
    pub min_witness: Vec<usize>,
    pub max_witness: Vec<usize>,
    pub balanced: bool,
}

impl BalanceReport {
    pub fn gap(&self) -> Rational {
        &self.max_integral - &self.min_integral
    }

    /// The common integral of a balanced observable.
    pub fn common_integral(&self) -> Option<&Rational> {
        self.balanced.then_some(&self.min_integral)
    }
}

pub fn balance_check(system: &FiniteSystem, u: &EdgeObservable) -> Result<BalanceReport, ErgoptError> {
    let low = karp_min_mean(system, u)?;
    let high = karp_min_mean(system, &u.negated())?;
    let max_integral = -high.fbar;
    Ok(BalanceReport {
        balanced: max_integral == low.fbar,
        min_integral: low.fbar,
        max_integral,
        min_witness: low.witness_cycle,
        max_witness: high.witness_cycle,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn zero_is_balanced() {
        let sys = FiniteSystem::full_shift(2);
        let rep = balance_check(&sys, &EdgeObservable::constant(&sys, r(0))).unwrap();
        assert!(rep.balanced);
        assert_eq!(rep.gap(), r(0));
        assert_eq!(rep.common_integral(), Some(&r(0)));
    }

    #[test]
    fn source_symbol_is_not_balanced() {
        let sys = FiniteSystem::full_shift(2);
        let u = EdgeObservable::from_fn(&sys, |v, _| r(v as i64));
        let rep = balance_check(&sys, &u).unwrap();
        assert!(!rep.balanced);
        assert_eq!(rep.gap(), r(1));
        assert_eq!(sys.edge_ids(&rep.min_witness), ["00"]);
        assert_eq!(sys.edge_ids(&rep.max_witness), ["11"]);
        assert_eq!(rep.min_integral, r(0));
        assert_eq!(rep.max_integral, r(1));
    }

    #[test]
    fn vertex_difference_is_balanced() {
        let sys = FiniteSystem::full_shift(2);
        let u = EdgeObservable::from_fn(&sys, |v, w| r(v as i64 - w as i64));
        let rep = balance_check(&sys, &u).unwrap();
        assert!(rep.balanced);
        assert_eq!(rep.common_integral(), Some(&r(0)));
    }
}
