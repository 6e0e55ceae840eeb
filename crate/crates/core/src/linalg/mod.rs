//! Dense linear algebra, root bracketing and quadrature shared by every engine.

mod eig;
mod quad;
mod roots;

pub use eig::{gen_sym_eig, sym_eig, EigenDecomposition, SymMatrix};
pub use quad::{integrate_1d, integrate_rect, GaussLegendre, Scheme};
pub use roots::{find_root_brackets, refine_root, DEFAULT_ROOT_TOL};
