//! Exact `p`-adic arithmetic for Lubin–Tate formal groups, their torsion
//! fields, and composita of those fields.

pub mod cert;
pub mod compositum;
pub mod division_points;
pub mod ec_formal;
pub mod error;
pub mod formal_group;
pub mod membership;
pub mod residue;
pub mod scenario;
pub mod ring;
pub mod tame_ext;
pub mod tseries;
pub mod unramified;

pub use error::{Error, Result};
pub use ring::Ring;
pub use unramified::{embed_subring, make_unramified_ring, RingEmbedding, UnramifiedRing, UrElem, Valuation};
pub use tame_ext::{make_radical_ext, RationalValuation, TameExt, TeElem, UniformizerPair};
pub use tseries::{Series, Weierstrass};
pub use formal_group::{
    height_of_group_law, lubin_tate_endomorphism, lubin_tate_group_law, lubin_tate_series, verify_group_axioms,
    FormalGroupLaw, LtSeries,
};
pub use cert::{Certificate, Check};
pub use division_points::{
    construct_division_field, division_field, division_polynomial, torsion_module_structure, verify_division_field,
    DivisionFieldData, DivisionPolynomial,
};
pub use membership::{membership, Membership, MembershipSummary};
pub use compositum::{
    adjoin_zeta_one, galois_structure, height_descend, k1_degree, krasner_locate, verify_compositum,
    verify_equal_over_k1, verify_unequal_heights, zeta_of_pair, CompositumReport, EqualityReport, GaloisStructure,
    KrasnerWitness, UnequalHeightReport,
};
pub use ec_formal::{
    curve_formal_group, product_group, supersingular_test, verify_product_tameness, ProductGroupLaw, ProductReport,
    SupersingularVerdict, WeierstrassCurve,
};
