//! Binary netpbm codec: P5 (grayscale) in, P6 (RGB) in, both out.
//!
//! Only `maxval = 255` streams are accepted. Header comments (`#` to end of
//! line) are allowed anywhere a separator is. Every parse error names the
//! byte offset at which the input stopped making sense.

use alloc::vec::Vec;

use crate::image::Image;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PnmError {
    /// Recognizably netpbm, but not binary P5/P6 (e.g. P4 bitmaps or the
    /// plain-text variants).
    #[error("unsupported netpbm format at byte {offset}; only binary P5/P6 are read")]
    UnsupportedFormat { offset: usize },

    #[error("malformed header at byte {offset}: {reason}")]
    MalformedHeader { offset: usize, reason: &'static str },

    #[error("unsupported maxval {maxval} at byte {offset}; only 255 is read")]
    UnsupportedMaxval { offset: usize, maxval: u32 },

    #[error("payload truncated at byte {offset}: {missing} sample bytes missing")]
    TruncatedPayload { offset: usize, missing: usize },
}

const fn is_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Advances past whitespace and `#` comments.
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b if is_space(b) => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len()
                        && !matches!(self.bytes[self.pos], b'\n' | b'\r')
                    {
                        self.pos += 1;
                    }
                }
                _ => return,
            }
        }
    }

    /// Reads one decimal integer token, returning it with its start offset.
    fn next_u32(&mut self) -> Result<(u32, usize), PnmError> {
        self.skip_separators();
        let start = self.pos;
        if start >= self.bytes.len() {
            return Err(PnmError::MalformedHeader { offset: start, reason: "header ends early" });
        }
        let mut value: u64 = 0;
        let mut digits = 0;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            value = value * 10 + (self.bytes[self.pos] - b'0') as u64;
            if value > u32::MAX as u64 {
                return Err(PnmError::MalformedHeader {
                    offset: start,
                    reason: "integer field too large",
                });
            }
            digits += 1;
            self.pos += 1;
        }
        if digits == 0 {
            return Err(PnmError::MalformedHeader {
                offset: start,
                reason: "expected decimal integer",
            });
        }
        Ok((value as u32, start))
    }
}

/// Decodes a binary P5/P6 stream into an [`Image`].
pub fn read_pnm(bytes: &[u8]) -> Result<Image, PnmError> {
    if bytes.len() < 2 {
        return Err(PnmError::MalformedHeader { offset: 0, reason: "missing magic number" });
    }
    let channels: u8 = match &bytes[..2] {
        b"P5" => 1,
        b"P6" => 3,
        [b'P', b'1'..=b'7'] => return Err(PnmError::UnsupportedFormat { offset: 0 }),
        _ => return Err(PnmError::MalformedHeader { offset: 0, reason: "missing magic number" }),
    };
    // The magic must be followed by a separator before the width field.
    if bytes.len() < 3 || (!is_space(bytes[2]) && bytes[2] != b'#') {
        return Err(PnmError::MalformedHeader {
            offset: 2,
            reason: "magic number not followed by whitespace",
        });
    }

    let mut cur = Cursor { bytes, pos: 2 };
    let (width, w_off) = cur.next_u32()?;
    let (height, h_off) = cur.next_u32()?;
    if width == 0 {
        return Err(PnmError::MalformedHeader { offset: w_off, reason: "zero width" });
    }
    if height == 0 {
        return Err(PnmError::MalformedHeader { offset: h_off, reason: "zero height" });
    }
    let (maxval, m_off) = cur.next_u32()?;
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval { offset: m_off, maxval });
    }
    // Exactly one whitespace byte separates the header from the payload.
    if cur.pos >= bytes.len() || !is_space(bytes[cur.pos]) {
        return Err(PnmError::MalformedHeader {
            offset: cur.pos,
            reason: "maxval not followed by single whitespace",
        });
    }
    let payload = cur.pos + 1;

    let expected = width as usize * height as usize * channels as usize;
    let available = bytes.len() - payload;
    if available < expected {
        return Err(PnmError::TruncatedPayload {
            offset: bytes.len(),
            missing: expected - available,
        });
    }
    let data = bytes[payload..payload + expected].to_vec();
    // Length and channel count are already validated, so this cannot fail.
    Ok(Image::new(width, height, channels, data).expect("validated header"))
}

/// Encodes an [`Image`] as binary P5 (one channel) or P6 (three channels).
pub fn write_pnm(img: &Image) -> Vec<u8> {
    let magic: &[u8] = if img.channels() == 1 { b"P5" } else { b"P6" };
    let mut out = Vec::with_capacity(img.data().len() + 32);
    out.extend_from_slice(magic);
    out.extend_from_slice(
        alloc::format!("\n{} {}\n255\n", img.width(), img.height()).as_bytes(),
    );
    out.extend_from_slice(img.data());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn parses_minimal_p5() {
        let img = read_pnm(b"P5\n2 2\n255\n\x00\x01\x02\x03").unwrap();
        assert_eq!((img.width(), img.height(), img.channels()), (2, 2, 1));
        assert_eq!(img.data(), &[0, 1, 2, 3]);
    }

    #[test]
    fn parses_p6_with_comments() {
        let img = read_pnm(b"P6 # rgb\n# another note\n1 1 # dims\n255\n\x0a\x0b\x0c").unwrap();
        assert_eq!((img.width(), img.height(), img.channels()), (1, 1, 3));
        assert_eq!(img.pixel(0, 0), &[0x0a, 0x0b, 0x0c]);
    }

    #[test]
    fn one_pixel_gray_round_trips() {
        let img = Image::gray(1, 1, vec![0]).unwrap();
        let bytes = write_pnm(&img);
        assert_eq!(bytes, b"P5\n1 1\n255\n\x00");
        assert_eq!(read_pnm(&bytes).unwrap(), img);
    }

    #[test]
    fn p4_is_unsupported_format() {
        assert_eq!(
            read_pnm(b"P4\n8 8\n0123456789"),
            Err(PnmError::UnsupportedFormat { offset: 0 })
        );
    }

    #[test]
    fn non_256_maxval_rejected_with_offset() {
        assert_eq!(
            read_pnm(b"P5\n2 2\n65535\n\x00\x00\x00\x00\x00\x00\x00\x00"),
            Err(PnmError::UnsupportedMaxval { offset: 7, maxval: 65535 })
        );
    }

    #[test]
    fn truncated_payload_reports_end_offset() {
        let err = read_pnm(b"P5\n2 2\n255\n\x00\x01\x02").unwrap_err();
        assert_eq!(err, PnmError::TruncatedPayload { offset: 14, missing: 1 });
    }

    #[test]
    fn header_garbage_reports_offset() {
        assert_eq!(
            read_pnm(b"P5\nab 2\n255\n"),
            Err(PnmError::MalformedHeader { offset: 3, reason: "expected decimal integer" })
        );
        assert_eq!(
            read_pnm(b"Px\n2 2\n255\n"),
            Err(PnmError::MalformedHeader { offset: 0, reason: "missing magic number" })
        );
        assert!(matches!(read_pnm(b""), Err(PnmError::MalformedHeader { offset: 0, .. })));
        assert!(matches!(
            read_pnm(b"P52 2\n255\n"),
            Err(PnmError::MalformedHeader { offset: 2, .. })
        ));
    }

    #[test]
    fn zero_dimension_rejected() {
        assert_eq!(
            read_pnm(b"P5\n0 2\n255\n"),
            Err(PnmError::MalformedHeader { offset: 3, reason: "zero width" })
        );
    }

    #[test]
    fn trailing_bytes_are_ignored() {
        let img = read_pnm(b"P5\n1 1\n255\n\x07extra").unwrap();
        assert_eq!(img.data(), &[7]);
    }
}
