use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size cap exceeded: {what} = {value} > {cap}")]
    SizeCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },
    #[error("tile not allowed: (bottom, left, top, right) = {0:?}")]
    DisallowedTile((u8, u8, u8, u8)),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("particle number not conserved: off-block entry {0:.3e}")]
    Conservation(f64),
    #[error("precision insufficient: rounding residual {0:.3e}")]
    Precision(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn cap(what: &'static str, value: usize, cap: usize) -> Result<()> {
    if value > cap {
        Err(Error::SizeCap { what, value, cap })
    } else {
        Ok(())
    }
}
