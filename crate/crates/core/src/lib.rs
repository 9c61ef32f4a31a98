pub mod axioms;
pub mod cartan;
pub mod chart;
pub mod error;
pub mod form;
pub mod frame;
pub mod genform;
pub mod matrix;
pub mod oracle;
pub mod random;
pub mod spinor;
pub mod vacuum;

pub use chart::{Chart, ChartRef};
pub use error::{CoreError, Result};
pub use form::OrdForm;
pub use frame::{Coframe, FrameMetric, Geometry};
pub use matrix::{Algebra, FormMatrix, Graded, MatOrdForm};
pub use genform::{potential_of_closed, GenForm, GenMatForm, NType};
