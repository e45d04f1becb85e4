//! Quadratic equations over free groups.
//!
//! This crate computes the orientable and nonorientable genus of elements of
//! a free group, enumerates Wicks forms (irredundant quadratic cyclic words
//! up to relabeling), finds all cancellation-free factorizations of a word
//! through such forms, and turns those factorizations into a complete set of
//! solution-class representatives for the equations
//!
//! ```text
//! [x1,y1][x2,y2]...[xg,yg] = U      and      x1^2 x2^2 ... xg^2 = U.
//! ```
//!
//! Words live over two disjoint namespaces: constants (the group H where U
//! lives) and variables (the group F where equations are written).

pub mod matcher;
pub mod normalize;
pub mod oracle;
pub mod verify;
pub mod solver;
pub mod subgroup;
pub mod surface;
pub mod wicks;
pub mod word;
