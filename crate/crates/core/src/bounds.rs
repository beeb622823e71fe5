//! Default resource limits shared across the workbench.

/// Central knobs for every bounded search or enumeration.
///
/// The zero-argument constructors of the heavier operations take these
/// explicitly so that a caller (or the CLI config file) can tighten or
/// relax them in one place.
#[derive(Debug, Clone)]
pub struct Bounds {
    /// Largest pinch index tried when probing for duality witnesses.
    pub max_pinch_n: usize,
    /// Search nodes a single homomorphism search may expand.
    pub node_budget: u64,
    /// Largest universe any construction is allowed to produce.
    pub size_bound: usize,
    /// Cap on solutions collected by enumeration searches.
    pub enumeration_cap: usize,
    /// Assignments a formula evaluation may enumerate.
    pub eval_budget: u64,
    /// Work budget for exhaustive game-tree or transcript exploration.
    pub game_budget: u64,
    /// Labeled-structure times permutation budget for isomorphism-free
    /// enumeration of small structures.
    pub enum_budget: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_pinch_n: 8,
            node_budget: 10_000_000,
            size_bound: 5000,
            enumeration_cap: 1_000_000,
            eval_budget: 10_000_000,
            game_budget: 10_000_000,
            enum_budget: 1_000_000_000,
        }
    }
}
