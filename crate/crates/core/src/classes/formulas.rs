//! Closed-form class identities for quotients of torsors, vector bundles and
//! line bundles, plus the projective space and smooth blowup formulas.

use super::MotivicClass;

/// `[P^m] = 1 + L + ... + L^m`.
pub fn projective_space_class(m: u32) -> MotivicClass {
    MotivicClass::from_l_coefficients(&vec![1; m as usize + 1])
}

/// Quotient of an equivariant `G_m`-torsor over `X`: `(L - 1)[X/G]`.
pub fn torsor_quotient(base_class: &MotivicClass) -> MotivicClass {
    &(MotivicClass::lefschetz() - MotivicClass::one()) * base_class
}

/// `[V/G] = (L - 1)[P(V)/G] + 1` for a linear action on a vector space.
pub fn vector_bundle_quotient(pv_class: &MotivicClass) -> MotivicClass {
    torsor_quotient(pv_class) + MotivicClass::one()
}

/// Total space of an equivariant line bundle, cut into the complement of the
/// zero section and the zero section itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineBundleSplit {
    /// `L[X/G]`
    pub total: MotivicClass,
    /// `(L - 1)[X/G]`
    pub torsor_part: MotivicClass,
    /// `[X/G]`
    pub zero_section: MotivicClass,
}

pub fn line_bundle_quotient(base_class: &MotivicClass) -> LineBundleSplit {
    LineBundleSplit {
        total: &MotivicClass::lefschetz() * base_class,
        torsor_part: torsor_quotient(base_class),
        zero_section: base_class.clone(),
    }
}

/// Blowup of a smooth center of codimension `codim` in a smooth ambient:
/// the center is replaced by a `P^{codim-1}`-bundle over it.
pub fn blowup_class(ambient: &MotivicClass, center: &MotivicClass, codim: u32) -> MotivicClass {
    assert!(codim >= 1, "blowup center must have codimension at least 1");
    let fibre_excess = projective_space_class(codim - 1) - MotivicClass::one();
    ambient + &(center * &fibre_excess)
}
