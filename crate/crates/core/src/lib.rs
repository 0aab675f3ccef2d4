//! Exact geometry of polytopal normed spaces and the random geometric
//! graphs `G_p(V, S)` built on them.
//!
//! * [`exact_geometry`]: rational arithmetic, an exact simplex kernel, unit
//!   balls given by vertices, and their gauge norm.
//! * [`decomposition`]: extreme lines, `l_inf`-directions, the
//!   `(U (+) l_inf^d)_inf` splitting (computed two independent ways), the
//!   lattice cover and the linear isometry group.
//! * [`step_isometry`]: maps preserving the integer part of distances.
//! * [`random_graphs`]: typical point samples, unit graphs and their
//!   Bernoulli subgraphs, hop-distance audits.
//! * [`back_forth`]: the back-and-forth matching game on fibred samples.
//! * [`cli`]: the `rado-lab` command line.

pub mod exact_geometry;
pub mod decomposition;
pub mod rng;
pub mod step_isometry;
pub mod random_graphs;
pub mod back_forth;
pub mod cli;
