//! Graded Lie machinery shared by every algebra in the crate.

mod closure;
mod element;
mod grid;
mod rule;

pub use closure::{membership, subalgebra_closure, Closure, Window};
pub use element::{BasisIndex, Element, ElementParseError};
pub use grid::{
    grid_identity_check, Grid, Identity, ResidualTerm, Verdict, Witness, GRID_SYMBOLS,
};
pub use rule::{
    bracket_apply, bracket_basis, spot_check_degree_bounds, BracketRule, DegreeBounds, GradeLaw,
    GradeTarget, IndexPoint, PolyBracketRule, StructureTerm, TemplateTerm, ALPHA, BETA, GAMMA,
    LEVEL_I, LEVEL_J, LEVEL_K,
};

/// `ad_{z2}^{l2-1} ad_{z1}^{l1} (z2)`.
pub fn adjoint_chain(rule: &dyn BracketRule, z1: &Element, z2: &Element, l1: u32, l2: u32) -> Element {
    let mut acc = z2.clone();
    for _ in 0..l1 {
        acc = bracket_apply(rule, z1, &acc);
    }
    for _ in 1..l2 {
        acc = bracket_apply(rule, z2, &acc);
    }
    acc
}
