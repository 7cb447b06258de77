//! Coefficient arithmetic: the field Q(i, √2) and truncated z-series over it.

mod field;
mod series;

pub use field::AlgebraicScalar;
pub use series::{SeriesPattern, ZSeries};

/// Arithmetic selector for [`scalar_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(
    x: &AlgebraicScalar,
    y: &AlgebraicScalar,
    op: ArithOp,
) -> crate::Result<AlgebraicScalar> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.checked_div(y)?,
    })
}
