//! Exact verification of the character-variety component `X0` of the
//! Whitehead link complement: field towers, linear algebra, words, flags,
//! deformation varieties, the `X0` parametrisation and the bundled instance.

pub mod defvar;
pub mod field;
pub mod flags;
pub mod linalg;
pub mod whitehead;
pub mod words;
pub mod x0;

pub use defvar::{DefPoint, DefVarError, GluingSystem};
pub use field::{FieldElement, FieldError, Tower};
pub use flags::{Flag, FlagError};
pub use linalg::{LinalgError, Matrix};
pub use whitehead::{InstanceData, Report, Stage, WhiteheadError};
pub use words::{Word, WordError};
pub use x0::{ParameterQuadruple, Sign, TraceCoordinates, X0Error};
