//! Seeded generation of conjugate system pairs.
//!
//! `H = τ_c ∘ σ` (a coordinate permutation followed by an XOR translation)
//! together with `H' = σ` conjugates `Φ` to `Υ = H ∘ Φ ∘ H^{-1}`, because
//! both `σ` and `x ↦ x ⊕ c` commute with the bitwise mux defining `Φ^v`.

use asyncflow_core::conjugacy::{forced_conjugate, omega_elements, verify_conjugacy, OmegaElement, StateBijection};
use asyncflow_core::explorer::function_count;
use asyncflow_core::TransitionFunction;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ConjugatePair {
    pub phi: TransitionFunction,
    pub ups: TransitionFunction,
    pub h: StateBijection,
    pub h_prime: OmegaElement,
}

/// `count` verified conjugate pairs at arity `n`, reproducible from `seed`.
pub fn conjugate_pairs(n: u8, count: usize, seed: u64) -> Result<Vec<ConjugatePair>> {
    let total = function_count(n)?;
    let omega = omega_elements(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let phi = TransitionFunction::from_index(n, rng.gen_range(0..total))?;
        let sigma = omega.choose(&mut rng).expect("Ω_n is non-empty").clone();
        let c: u32 = rng.gen_range(0..1 << n);
        let forward = (0..1u32 << n).map(|x| sigma.bijection().apply_bits(x) ^ c).collect();
        let h = StateBijection::new(n, forward)?;
        let ups = forced_conjugate(&phi, &h)?;
        if !verify_conjugacy(&phi, &ups, &h, &sigma)? {
            return Err(Error::Invariant(format!("generated pair for {:?} failed verification", phi.table())));
        }
        out.push(ConjugatePair { phi, ups, h, h_prime: sigma });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_verified() {
        let a = conjugate_pairs(2, 20, 7).unwrap();
        let b = conjugate_pairs(2, 20, 7).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.phi == y.phi && x.ups == y.ups && x.h == y.h));
        assert!(a.iter().any(|p| p.phi != p.ups));
        assert_eq!(conjugate_pairs(3, 5, 1).unwrap().len(), 5);
    }
}
