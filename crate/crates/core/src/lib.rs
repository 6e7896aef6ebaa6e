//! Strict G-crossed Frobenius star-algebras.
//!
//! Numerics are generic over the real scalar (`f32` or `f64`, see [`Real`]); the `*64`
//! aliases below fix `f64`, which is what the CLI uses.
//!
//! ```
//! use gcrossed::{catalog, construct_extension, verlinde_genus0, FiniteGroup, FrobeniusBase64, GAction, TwistedCharacterTable};
//!
//! let g = FiniteGroup::klein_four();
//! let b = FrobeniusBase64::trivial();
//! let act = GAction::trivial(&b, &g);
//! let phi = catalog::cocycle("twist", &g, &b)?;
//! let a = construct_extension(&g, &b, &act, &phi, 1e-9)?;
//! let t = TwistedCharacterTable::new(&a);
//! let e = |g| (g, a.basis_element(g, 0).unwrap());
//! let v = verlinde_genus0(&a, &t, &[e(1), e(2), e(1), e(2)])?;
//! assert!((v + 1.0).norm() < 1e-12);
//! # Ok::<(), gcrossed::Error>(())
//! ```

pub mod catalog;
pub mod cohomology;
pub mod crossed;
pub mod error;
pub mod frobenius;
pub mod group;
mod intlin;
pub mod io;
pub mod modular;
pub mod scalar;
pub mod verlinde;

pub use cohomology::{
    coboundary, cohomologous, is_cocycle, obstruction_delta, solve_coboundary, unitarize, Cochain, Cohomologous,
    Separation, SolveOptions,
};
pub use crossed::{
    construct_extension, extract_cocycle, verify_crossed_axioms, AlgebraElement, AxiomCheck, AxiomReport,
    CrossedAlgebra,
};
pub use error::{Error, Result};
pub use frobenius::{diagonalize_fusion_ring, DiagonalizeOptions, FrobeniusBase, FusionData, GAction};
pub use group::FiniteGroup;
pub use modular::{categorical_verlinde, crossed_s_matrix, s_unitarity_check, CrossedSMatrixData};
pub use scalar::{principal_root, root_of_unity, Real, C};
pub use verlinde::{fusion_coefficients, verlinde_any_genus, verlinde_genus0, TwistedCharacterTable};

pub type FrobeniusBase64 = FrobeniusBase<f64>;
pub type Cochain64 = Cochain<f64>;
pub type CrossedAlgebra64 = CrossedAlgebra<f64>;
pub type AlgebraElement64 = AlgebraElement<f64>;
pub type TwistedCharacterTable64 = TwistedCharacterTable<f64>;
pub type CrossedSMatrixData64 = CrossedSMatrixData<f64>;
