//! Approximate Nash equilibria of finite normal-form games.
//!
//! Every profile gets a pure "root" label: for each player, the worst pure
//! strategy inside the support of that player's mixed strategy. Product cells
//! of a lattice subdivision whose vertex labels cover all pure profiles are
//! pre-equilibrium certificates; as the grid is refined, the barycenters of
//! such cells approach equilibria.
//!
//! All arithmetic is generic over [`Scalar`]: exact [`Rational`] by default,
//! `f64` with a fixed tolerance as an option.

pub mod cli;
pub mod error;
pub mod game;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod root;
pub mod scalar;
pub mod search;
pub mod subdivision;
pub mod volume;

pub use error::{Error, Result};
pub use game::{
    deviation_profile, evaluate_payoff, gain_table, is_equilibrium, max_regret, GainTable, Game,
    MixedProfile, PureProfile,
};
pub use root::{check_root_properties, root_label, root_motion};
pub use scalar::{NumericMode, Rational, Scalar, FLOAT_TOLERANCE};
pub use search::{
    classify_cell, find_pre_equilibria, solve, CellClassification, PreEquilibriumCert,
    SolveOptions, SolveReport,
};
pub use subdivision::{cell_diameter, product_cells, triangulate, ProductCell, Triangulation};
