use serde::{Deserialize, Serialize};

use super::OpticsError;

/// An exact dyadic probability 1 / 2^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DyadicFraction {
    pub numerator: u64,
    pub denominator: u128,
}

impl DyadicFraction {
    pub fn one_over_two_pow(k: u32) -> Self {
        Self {
            numerator: 1,
            denominator: 1u128 << k,
        }
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl std::fmt::Display for DyadicFraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.numerator, self.denominator)
    }
}

/// Closed-form resource count for the optical n-controlled Fredkin gate: the
/// success probability 1/2^(4n+1), 2n beam splitters providing the auxiliary
/// spatial modes, 2(n-1) ancilla-assisted CNOT gates, and the three partial
/// swaps. No simulation is performed at this level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub n: usize,
    pub success_probability: DyadicFraction,
    pub success_probability_decimal: f64,
    pub pbs_count: usize,
    pub cnot_count: usize,
    pub pswap_count: usize,
}

pub fn resource_calculator(n: usize) -> Result<ResourceEstimate, OpticsError> {
    if n < 1 {
        return Err(OpticsError::InvalidInput(format!(
            "control count must be at least 1, got {n}"
        )));
    }
    if n > 31 {
        return Err(OpticsError::InvalidInput(format!(
            "control count {n} overflows the exact probability"
        )));
    }
    let fraction = DyadicFraction::one_over_two_pow(4 * n as u32 + 1);
    Ok(ResourceEstimate {
        n,
        success_probability: fraction,
        success_probability_decimal: fraction.as_f64(),
        pbs_count: 2 * n,
        cnot_count: 2 * (n - 1),
        pswap_count: 3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_control_matches_the_chained_gate() {
        let r = resource_calculator(1).unwrap();
        assert_eq!(r.success_probability.denominator, 32);
        assert_eq!(r.success_probability.numerator, 1);
        assert_eq!(r.pbs_count, 2);
        assert_eq!(r.cnot_count, 0);
        assert_eq!(r.pswap_count, 3);
    }

    #[test]
    fn probability_follows_the_exponent() {
        assert_eq!(resource_calculator(2).unwrap().success_probability.denominator, 512);
        assert_eq!(
            resource_calculator(3).unwrap().success_probability.denominator,
            1 << 13
        );
        assert_eq!(resource_calculator(2).unwrap().pbs_count, 4);
        for n in 1..=10 {
            let r = resource_calculator(n).unwrap();
            assert_eq!(r.success_probability.denominator, 1u128 << (4 * n + 1));
        }
    }

    #[test]
    fn zero_controls_is_rejected() {
        assert!(resource_calculator(0).is_err());
    }
}
