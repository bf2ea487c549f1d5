//! Integer polynomials, height-bounded families and their enumeration,
//! primitivity and irreducibility.

mod factor;
mod family;
mod poly;

pub use factor::{count_primitive_irreducible, factorize, is_irreducible, is_primitive_irreducible, Factorization};
pub use family::{FamilyIter, FamilySpec};
pub use poly::{lex_cmp, IntPoly};

