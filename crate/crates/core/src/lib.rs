pub mod blockcode;
pub mod bounds;
pub mod channel;
pub mod combin;
pub mod constructions;
pub mod error;
pub mod gf2m;
pub mod mds;
pub mod payload;
pub mod seq;
pub mod verify;
pub mod vt;

pub use error::{Error, Result};
pub use seq::{CharacteristicVector, DataSet, ReceivedSet, Sequence};
