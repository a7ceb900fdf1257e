pub mod error;
pub mod intensity;
pub mod limits;
pub mod occupation;
pub mod oracle;
pub mod par;
pub mod phi;
pub mod quadrature;
pub mod regime;
pub mod rng;
pub mod scenario;
pub mod special;
pub mod stable;
pub mod stats;

pub use error::{Error, Result};
pub use intensity::{IntensityKind, IntensityMeasure, Mass};
pub use phi::{Dim, Point, TestFunction};
pub use rng::StreamId;
pub use stable::StableLaw;
