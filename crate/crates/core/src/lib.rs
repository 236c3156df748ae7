//! Numerical potential theory for Carleson measures of the Dirichlet space.
//!
//! Modules, bottom up: [`geometry`] (arcs, boxes, kernels), [`measures`]
//! (atomic measures), [`gauges`] (box gauges `phi`), [`capacity`]
//! (logarithmic capacity by energy minimization), [`embedding`] (potentials,
//! quadratic-form bounds, box suprema), [`constructions`] (Cantor
//! counterexample, radial example, certificates) and [`cli`].

pub mod capacity;
pub mod cli;
pub mod constructions;
pub mod embedding;
pub mod error;
pub mod gauges;
pub mod geometry;
pub mod measures;

pub use capacity::{
    cantor_surrogate, cantor_surrogate_log, capacity, capacity_with, energy_matrix, energy_matrix_with,
    minimize_energy, CapacityEstimate, EquilibriumWeights, OffDiagonalRule,
};
pub use constructions::{
    counterexample, radial_potential, scheme_from_gauge, potential_certificate, CantorScheme, CertificateReport,
    CounterexampleReport, Mode,
};
pub use embedding::{
    dual_norm, embedding_report, one_box_sup, onearc_necessity_profile, perron_bound, potential, potential_sup,
    stegenga_ratio, DualWitness, EmbeddingReport,
};
pub use error::{Error, Result};
pub use gauges::{Gauge, IntegralTest, Verdict};
pub use geometry::{box_contains, log_chord, log_kernel, repr_kernel, Arc, ArcSet, DiskPoint, KernelPoint};
pub use measures::{circle_measure, radial_discretize, AtomicMeasure, FubiniProfile};
