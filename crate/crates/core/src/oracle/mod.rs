//! Exhaustive reference implementations used to certify the constructive
//! algorithms on small instances.

mod brute;
mod enumerate;
mod extension;
mod search;
mod unicoherent;

pub use brute::{brute_simple_confluent, brute_simple_monotone, BruteOracle};
pub use enumerate::{
    enumerate_connected_graphs, enumerate_epimorphisms, enumerate_rooted_trees, enumerate_trees,
    for_each_epimorphism, ClassSpec,
};
pub use extension::{check_extension, ExtensionWitness};
pub use search::{search_amalgam, search_amalgam_on, AmalgamSearch};
pub use unicoherent::is_hereditarily_unicoherent;
