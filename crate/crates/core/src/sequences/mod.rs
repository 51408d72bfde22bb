//! Stages of the sequence of regular rooted trees, the discrete dendroid
//! construction over rational heights, and the grid linking the two.

mod fraisse;
mod grid;
mod layout;
mod mn;
mod operations;

pub use fraisse::{
    bonding_composite, bonding_factors, bonding_map, cap_from_env, extend_over, first_stage, projected_size, stage,
    stage_graph, stage_height, stage_sord, verify_internchar, Extension, InternCharProfile, InternCharReport,
    DEFAULT_CAP,
};
pub use grid::{skeleton, Grid};
pub use layout::{geometric_layout, Layout, LayoutPoint};
pub use mn::{mn_map, mn_tree, order_equivalent, MnSequence, MnTree};
pub use operations::{colored_add_branches, double_split, multiply_branches};
