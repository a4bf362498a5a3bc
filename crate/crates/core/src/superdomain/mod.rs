//! Chart-level supercalculus on `ℝ^{n|m}` with Λ-valued polynomial coefficients.
//!
//! A superfunction is stored flat as a sum of terms `c · η_B ⊗ x^a θ^I` with
//! `c` rational, `η_B` a Λ blade, `x^a` a monomial in the even coordinates and
//! `θ^I` an increasing product of odd coordinates. Λ generators are ordered
//! before the coordinates; all reorderings use the Koszul rule, so
//! `(η⊗θ^I)(η′⊗θ^J) = (−1)^{|I||η′|} ηη′ ⊗ θ^Iθ^J`.

mod flow;
mod forms;
mod function;
mod tensor;
mod text;
mod vector;

pub use flow::{flow_jet, FlowJet};
pub use forms::{basis_value, multiplicity, SuperForm};
pub use function::{Key, SuperFunction};
pub use tensor::{lie_derivative, SuperTensor, TensorField, TensorSymmetry};
pub use text::parse_function;
pub use vector::{graded_bracket, SuperVectorField};

use crate::error::{Error, Result};

/// Largest total x-degree a chart may keep.
pub const MAX_X_DEGREE: u32 = 15;
/// Even coordinates are packed 4 bits each into one word.
pub const MAX_EVEN: usize = 16;
pub const MAX_ODD: usize = 64;

/// Supercoordinates `(x¹…xⁿ, θ¹…θᵐ)` over `Λ = Λ*ℝ^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Chart {
    pub n: usize,
    pub m: usize,
    pub generators: u32,
    pub max_x_degree: u32,
}

impl Chart {
    pub fn new(n: usize, m: usize, generators: u32, max_x_degree: u32) -> Result<Self> {
        if n > MAX_EVEN {
            return Err(Error::Dimension(format!("at most {MAX_EVEN} even coordinates")));
        }
        if m > MAX_ODD {
            return Err(Error::Dimension(format!("at most {MAX_ODD} odd coordinates")));
        }
        if generators == 0 || generators > crate::lambda::MAX_GENERATORS {
            return Err(Error::Dimension("Λ generator count must be in 1..=64".into()));
        }
        if max_x_degree > MAX_X_DEGREE {
            return Err(Error::Dimension(format!("max_x_degree is capped at {MAX_X_DEGREE}")));
        }
        Ok(Chart {
            n,
            m,
            generators,
            max_x_degree,
        })
    }

    /// Total coordinate count `n + m`; coordinate `B < n` is `x^{B+1}`,
    /// coordinate `n + α` is `θ^{α+1}`.
    pub fn dim(&self) -> usize {
        self.n + self.m
    }

    pub fn is_odd(&self, b: usize) -> bool {
        b >= self.n
    }

    /// `true` when `N < m`, where products of odd quantities can cancel early.
    pub fn generators_warning(&self) -> bool {
        (self.generators as usize) < self.m
    }

    /// Same chart with `extra` even parameters appended after `xⁿ`.
    pub fn with_parameters(&self, extra: usize) -> Result<Chart> {
        Chart::new(self.n + extra, self.m, self.generators, self.max_x_degree)
    }

    pub(crate) fn check(&self, other: &Chart) -> Result<()> {
        if self != other {
            return Err(Error::ChartMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// `(−1)^{Σ_{(i,j)∈Δ_σ}(1 + |X_i||X_j|)}` for the permutation `σ` (given as
/// the list `σ(0), σ(1), …`) acting on arguments of the given parities;
/// `Δ_σ` is the set of inversion pairs.
pub fn super_sign(sigma: &[usize], odd: &[bool]) -> Result<i8> {
    if sigma.len() != odd.len() {
        return Err(Error::Dimension("permutation and parity list lengths differ".into()));
    }
    let mut seen = vec![false; sigma.len()];
    for &s in sigma {
        if s >= sigma.len() || seen[s] {
            return Err(Error::Validation(format!("{sigma:?} is not a permutation")));
        }
        seen[s] = true;
    }
    let mut exponent = 0usize;
    for a in 0..sigma.len() {
        for b in a + 1..sigma.len() {
            let (i, j) = (sigma[a], sigma[b]);
            if i > j {
                exponent += 1 + (odd[i] && odd[j]) as usize;
            }
        }
    }
    Ok(if exponent.is_multiple_of(2) { 1 } else { -1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permutations(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }

    fn classical_sign(p: &[usize]) -> i8 {
        let inv = (0..p.len())
            .flat_map(|a| (a + 1..p.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| p[a] > p[b])
            .count();
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn super_sign_examples() {
        assert_eq!(super_sign(&[0, 1, 2], &[true, false, true]).unwrap(), 1);
        assert_eq!(super_sign(&[1, 0], &[true, true]).unwrap(), 1);
        assert_eq!(super_sign(&[1, 0], &[false, false]).unwrap(), -1);
        assert_eq!(super_sign(&[1, 0], &[true, false]).unwrap(), -1);
        assert!(super_sign(&[0, 0], &[false, false]).is_err());
    }

    #[test]
    fn super_sign_is_classical_for_even_arguments() {
        let perms = permutations(4);
        assert_eq!(perms.len(), 24);
        for p in perms {
            assert_eq!(super_sign(&p, &[false; 4]).unwrap(), classical_sign(&p));
        }
    }
}
