use alloc::string::String;

/// Errors shared by the image model and the detection pipelines.
///
/// The PNM codec has its own error type ([`crate::pnm::PnmError`]) because
/// its variants carry byte offsets into the encoded stream.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("coordinates ({x}, {y}) outside {width}x{height} image")]
    OutOfBounds { x: u32, y: u32, width: u32, height: u32 },

    #[error("pixel buffer holds {actual} bytes, expected {expected}")]
    DataLength { expected: usize, actual: usize },

    #[error("integral image accumulator overflowed at ({x}, {y})")]
    IntegralOverflow { x: u32, y: u32 },

    #[error("invalid fitness band [{low}, {high}]")]
    InvalidBand { low: f64, high: f64 },

    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },

    #[error("{width}x{height} image smaller than required {min_width}x{min_height}")]
    ImageTooSmall { width: u32, height: u32, min_width: u32, min_height: u32 },

    #[error("box filter of size {filter_size} does not fit at ({x}, {y})")]
    FilterOutOfBounds { x: u32, y: u32, filter_size: u32 },
}
