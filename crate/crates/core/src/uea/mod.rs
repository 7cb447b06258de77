//! Universal enveloping algebras: PBW monomials, normal ordering against a
//! (possibly deformed) commutator table, tensor powers and coproducts.

mod element;
mod rewrite;
mod table;

pub use element::{PbwMonomial, TensorElement, UeaElement};
pub use rewrite::{
    commutator, coproduct_extend, flip, multiply, normal_order, normal_order_with, primitive_coproduct,
    CoproductSeries, Rewriter,
};
pub use table::{CommutatorTable, EXACT};
