//! Point counting over finite fields: field arithmetic, counting sequences,
//! twisted Frobenius fixed-point counts, Burnside quotient counts and an
//! independent enumeration oracle.
//!
//! `#(X/G)(F_q)` is taken to be the number of Frobenius-stable `G`-orbits on
//! `X(F̄_q)`, which Burnside's lemma turns into `(1/|G|) Σ_g #X^{gF}` with
//! `X^{gF} = {x : g·F(x) = x}`. For linear `g` the twisted loci are forms of
//! affine spaces, tori and projective spaces, and Lang's theorem gives their
//! counts in closed form.

mod action;
mod algebra;
mod field;
mod oracle;
mod sequence;

pub use action::{Ambient, GroupAction, Representation};
pub use algebra::{CountAlgebra, Numeric, Symbolic};
pub use field::{
    is_irreducible, primitive_modulus, FieldSpec, FiniteField, PrimePower, MAX_FIELD_SIZE,
};
pub use oracle::{
    factor_sequence, oracle_orbit_count, ExplicitVariety, OracleResult, Piece, DEFAULT_BUDGET,
};
pub use sequence::CountingSequence;

pub(crate) use action::twisted_count_power_in;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// `Π_{cycles c of σ} N_{|c|}`.
pub fn twisted_count_power(base: &CountingSequence, sigma: &Permutation, q: u64) -> Result<i128> {
    PrimePower::new(q)?;
    twisted_count_power_in(&Numeric { q }, base, sigma)
}

/// `#(X/G)(F_q)` by Burnside averaging, after the tameness screen.
pub fn burnside_quotient_count(action: &GroupAction, q: u64) -> Result<i128> {
    action.validate(q)?;
    action.burnside(&Numeric { q })
}

/// Twisted count of a coordinate torus stratum of dimension `dim` under an
/// element of `μ_k` acting with the given weights: `(q - 1)^dim`.
pub fn twisted_count_diagonal(dim: u32, weights: &[u32], k: u32, q: u64) -> Result<i128> {
    PrimePower::new(q)?;
    if weights.len() != dim as usize {
        return Err(Error::Mismatch(format!(
            "{} weights for a stratum of dimension {dim}",
            weights.len()
        )));
    }
    Representation::diagonal(weights.to_vec(), k)?.check_tame(q)?;
    Ok((q as i128 - 1).pow(dim))
}

/// Count of a linearly twisted `P^{n-1}`: `1 + q + ... + q^{n-1}`.
pub fn twisted_count_projective(n: u32, q: u64) -> i128 {
    (0..n).map(|j| (q as i128).pow(j)).sum()
}

/// `a - z + z·(1 + q + ... + q^{c-1})` for a twisted ambient count `a` and
/// twisted center count `z`.
pub fn twisted_count_blowup(ambient: i128, center: i128, codim: u32, q: u64) -> Result<i128> {
    if codim == 0 {
        return Err(Error::range("codim", 0, 1, u32::MAX as i128));
    }
    Ok(ambient - center + center * twisted_count_projective(codim, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::PermGroup;

    #[test]
    fn power_twists() {
        let p1 = CountingSequence::projective(1);
        let swap = Permutation::from_cycles(2, &[&[1, 2]]).unwrap();
        assert_eq!(twisted_count_power(&p1, &swap, 3).unwrap(), 10);
        assert_eq!(
            twisted_count_power(&p1, &Permutation::identity(2), 3).unwrap(),
            16
        );
        let c3 = Permutation::from_cycles(3, &[&[1, 2, 3]]).unwrap();
        assert_eq!(
            twisted_count_power(&CountingSequence::affine(1), &c3, 2).unwrap(),
            8
        );
        let short = CountingSequence::table(5, vec![6]).unwrap();
        assert!(matches!(
            twisted_count_power(&short, &swap, 5),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn burnside_examples() {
        let sym2 = GroupAction::symmetric_power(CountingSequence::projective(1), 2).unwrap();
        assert_eq!(burnside_quotient_count(&sym2, 3).unwrap(), 13);
        let v = GroupAction::linear(
            Representation::diagonal(vec![1, 2], 3).unwrap(),
            Ambient::Affine,
        );
        assert_eq!(burnside_quotient_count(&v, 7).unwrap(), 49);
        assert!(matches!(
            burnside_quotient_count(&v, 5),
            Err(Error::NotTame(_))
        ));
        let trivial = GroupAction::power(CountingSequence::projective(2), PermGroup::trivial(1));
        assert_eq!(burnside_quotient_count(&trivial, 4).unwrap(), 21);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(twisted_count_diagonal(2, &[1, 2], 3, 7).unwrap(), 36);
        assert_eq!(twisted_count_diagonal(0, &[], 3, 7).unwrap(), 1);
        assert!(twisted_count_diagonal(1, &[1], 3, 5).is_err());
        assert_eq!(twisted_count_projective(3, 2), 7);
        assert_eq!(twisted_count_projective(1, 9), 1);
        assert_eq!(twisted_count_blowup(13, 1, 2, 3).unwrap(), 16);
        assert_eq!(twisted_count_blowup(10, 4, 1, 3).unwrap(), 10);
    }
}
