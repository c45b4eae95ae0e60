use std::fmt;

use serde::{Deserialize, Serialize};

use super::{AlgebraError, GradedModule};

/// Poincaré polynomial Σ b_i t^i with non-negative coefficients, trailing zeros trimmed.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<u64>", into = "Vec<u64>")]
pub struct PoincarePolynomial {
    coefficients: Vec<u64>,
}

impl From<Vec<u64>> for PoincarePolynomial {
    fn from(c: Vec<u64>) -> Self {
        Self::new(c)
    }
}

impl From<PoincarePolynomial> for Vec<u64> {
    fn from(p: PoincarePolynomial) -> Self {
        p.coefficients
    }
}

impl PoincarePolynomial {
    pub fn new(mut coefficients: Vec<u64>) -> Self {
        while coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        Self { coefficients }
    }

    pub fn one() -> Self {
        Self::new(vec![1])
    }

    /// (1 + t^a) for a ≥ 1.
    pub fn one_plus_t_pow(a: usize) -> Self {
        let mut c = vec![0; a + 1];
        c[0] += 1;
        c[a] += 1;
        Self::new(c)
    }

    /// ∏ (1 + t^a).
    pub fn exterior(generators: &[usize]) -> Self {
        generators.iter().fold(Self::one(), |acc, &a| acc.mul(&Self::one_plus_t_pow(a)))
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize) -> u64 {
        self.coefficients.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut c = vec![0; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in other.coefficients.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coefficients.len().max(other.coefficients.len());
        Self::new((0..n).map(|i| self.coefficient(i) + other.coefficient(i)).collect())
    }

    pub fn eval(&self, t: i64) -> i128 {
        self.coefficients.iter().rev().fold(0i128, |acc, &c| acc * t as i128 + c as i128)
    }

    /// Free ranks of a module in non-negative degrees.
    pub fn from_module(g: &GradedModule) -> Result<Self, AlgebraError> {
        if let Some(d) = g.min_degree().filter(|&d| d < 0) {
            return Err(AlgebraError::NegativeDegree(d));
        }
        let top = g.max_degree().unwrap_or(-1);
        Ok(Self::new((0..=top).map(|i| g.rank(i)).collect()))
    }

    /// Exact quotient by (1 + t); fails unless the remainder vanishes and
    /// every quotient coefficient is non-negative.
    pub fn divide_by_one_plus_t(&self) -> Result<Self, AlgebraError> {
        let c = &self.coefficients;
        if c.is_empty() {
            return Ok(Self::default());
        }
        let mut q: Vec<i128> = Vec::with_capacity(c.len() - 1);
        let mut prev: i128 = 0;
        for &ci in &c[..c.len() - 1] {
            let qi = ci as i128 - prev;
            if qi < 0 {
                return Err(AlgebraError::NotDivisible(self.to_string()));
            }
            q.push(qi);
            prev = qi;
        }
        if *c.last().unwrap() as i128 != prev {
            return Err(AlgebraError::NotDivisible(self.to_string()));
        }
        Ok(Self::new(q.into_iter().map(|x| x as u64).collect()))
    }
}

impl fmt::Debug for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let mono = match i {
                    0 => String::new(),
                    1 => "t".into(),
                    _ => format!("t^{i}"),
                };
                match (c, i) {
                    (_, 0) => c.to_string(),
                    (1, _) => mono,
                    _ => format!("{c}{mono}"),
                }
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_to_polynomial_ignores_torsion() {
        use crate::algebra::{CoefficientMode, Entry, Torsion};
        let mut g = GradedModule::zero(CoefficientMode::Integral);
        g.set_entry(0, Entry::free(1));
        g.set_entry(1, Entry { free_rank: 1, torsion: vec![Torsion { prime: 2, exponent: 1, multiplicity: 1 }] });
        assert_eq!(PoincarePolynomial::from_module(&g).unwrap(), PoincarePolynomial::new(vec![1, 1]));
        let neg = GradedModule::from_ranks([(-1, 1)]);
        assert!(matches!(PoincarePolynomial::from_module(&neg), Err(AlgebraError::NegativeDegree(-1))));
        let g = GradedModule::from_ranks([(0, 1), (3, 1)]);
        assert_eq!(PoincarePolynomial::from_module(&g).unwrap().to_string(), "1 + t^3");
    }

    #[test]
    fn division_examples() {
        let p = PoincarePolynomial::new(vec![1, 1, 0, 1, 1, 1, 1, 0, 1, 1]);
        assert_eq!(p.divide_by_one_plus_t().unwrap(), PoincarePolynomial::new(vec![1, 0, 0, 1, 0, 1, 0, 0, 1]));
        assert_eq!(PoincarePolynomial::new(vec![1, 1]).divide_by_one_plus_t().unwrap(), PoincarePolynomial::one());
        assert!(PoincarePolynomial::new(vec![1, 0, 1]).divide_by_one_plus_t().is_err());
        // p(-1) = 0 but the quotient would have a negative coefficient
        assert!(PoincarePolynomial::new(vec![1, 1, 0, 1, 0, 0, 1, 0, 1, 1]).divide_by_one_plus_t().is_err());
    }

    #[test]
    fn exterior_products() {
        assert_eq!(PoincarePolynomial::exterior(&[3, 5]).to_string(), "1 + t^3 + t^5 + t^8");
        assert_eq!(PoincarePolynomial::exterior(&[]), PoincarePolynomial::one());
    }
}
