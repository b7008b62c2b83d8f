//! Exact rational polynomial arithmetic and real root counting on the
//! half-axes. Every witness produced elsewhere in the crate is accepted only
//! after passing through [`count_roots`] and [`sign_pattern_of`].

mod poly;
mod rational;
mod roots;

pub use poly::Poly;
pub use rational::{
    dyadic_from_f64, format_rational, frac, int, parse_rational, pow2, rational_serde,
    rational_vec_serde, to_f64, Rational,
};
pub use roots::{
    count_half_axis_roots, count_roots, ensure_full_support, normalized_sign_pattern,
    sign_pattern_of, squarefree_decomposition, sturm_count, Bound, Interval, RootCount, SturmChain,
};
