//! Framing of byte streams into codeword-sized chunks.
//!
//! A frame is a 64-bit big-endian bit count followed by the payload bits,
//! zero-padded to a whole number of chunks.

use crate::constructions::SetCode;
use crate::error::{Error, Result};
use crate::seq::{DataSet, ReceivedSet, Sequence};

pub const LENGTH_HEADER_BITS: usize = 64;

pub fn bytes_to_bits(data: &[u8]) -> Sequence {
    Sequence::from_bits(
        data.iter()
            .flat_map(|&b| (0..8).rev().map(move |i| b >> i & 1 == 1)),
    )
}

pub fn bits_to_bytes(bits: &Sequence) -> Result<Vec<u8>> {
    if !bits.len().is_multiple_of(8) {
        return Err(Error::Parse(format!(
            "{} bits is not a whole number of bytes",
            bits.len()
        )));
    }
    Ok((0..bits.len() / 8)
        .map(|i| (0..8).fold(0u8, |acc, j| acc << 1 | u8::from(bits.get(8 * i + j))))
        .collect())
}

/// Header plus payload.
pub fn frame(payload: &Sequence) -> Sequence {
    Sequence::from_u64(payload.len() as u64, LENGTH_HEADER_BITS).concat(payload)
}

/// Splits into `chunk_bits`-bit pieces, zero-padding the last.
pub fn chunk(bits: &Sequence, chunk_bits: usize) -> Result<Vec<Sequence>> {
    if chunk_bits == 0 {
        return Err(Error::InvalidParameters(
            "code carries no information bits".into(),
        ));
    }
    let n = bits.len().div_ceil(chunk_bits);
    Ok((0..n)
        .map(|i| {
            let end = ((i + 1) * chunk_bits).min(bits.len());
            bits.slice(i * chunk_bits, end)
                .concat(&Sequence::zeros((i + 1) * chunk_bits - end))
        })
        .collect())
}

/// Inverse of [`frame`]; trailing padding is dropped.
pub fn unframe(bits: &Sequence) -> Result<Sequence> {
    if bits.len() < LENGTH_HEADER_BITS {
        return Err(Error::Parse("stream shorter than its length header".into()));
    }
    let len = bits
        .slice(0, LENGTH_HEADER_BITS)
        .to_u64()
        .expect("64-bit header") as usize;
    let end = LENGTH_HEADER_BITS
        .checked_add(len)
        .filter(|&e| e <= bits.len())
        .ok_or_else(|| Error::Parse(format!("header announces {len} bits, stream is shorter")))?;
    Ok(bits.slice(LENGTH_HEADER_BITS, end))
}

/// Encodes a byte stream as a sequence of codewords.
pub fn encode_stream(code: &dyn SetCode, data: &[u8]) -> Result<Vec<DataSet>> {
    chunk(&frame(&bytes_to_bits(data)), code.info_bits())?
        .iter()
        .map(|c| code.encode_bits(c))
        .collect()
}

pub fn decode_stream(code: &dyn SetCode, received: &[ReceivedSet]) -> Result<Vec<u8>> {
    let mut bits = Sequence::zeros(0);
    for r in received {
        bits = bits.concat(&code.decode_bits(r)?);
    }
    bits_to_bytes(&unframe(&bits)?)
}
