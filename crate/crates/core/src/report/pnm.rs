//! Binary Netpbm output: P6 for basin rasters, P4 for masks. The first
//! image row is the top of the window (largest imaginary part).
//!
//! Basin palette: label `k ≥ 0` (the encoded fixed-point index) is drawn in
//! `PALETTE[k mod 8]`, escaped pixels black, undecided pixels white.

use crate::bov::GridMask;
use crate::dynamics::{GridClassification, LABEL_ESCAPED};
use crate::error::{Error, Result};

/// Eight fully saturated hues, 45° apart.
pub const PALETTE: [[u8; 3]; 8] = [
    [255, 0, 0],
    [255, 191, 0],
    [128, 255, 0],
    [0, 255, 64],
    [0, 255, 255],
    [0, 64, 255],
    [127, 0, 255],
    [255, 0, 191],
];
pub const ESCAPED_RGB: [u8; 3] = [0, 0, 0];
pub const UNDECIDED_RGB: [u8; 3] = [255, 255, 255];

pub fn label_color(label: i32) -> [u8; 3] {
    if label >= 0 {
        PALETTE[label.rem_euclid(8) as usize]
    } else if label == LABEL_ESCAPED {
        ESCAPED_RGB
    } else {
        UNDECIDED_RGB
    }
}

/// Anything that can be written as a Netpbm image.
pub enum Image<'a> {
    Basins(&'a GridClassification),
    Mask(&'a GridMask),
}

/// P6 image of a basin raster.
pub fn emit_ppm_grid(g: &GridClassification) -> Result<Vec<u8>> {
    let (nx, ny) = (g.nx(), g.ny());
    if nx == 0 || ny == 0 {
        return Err(Error::Precondition("empty raster".into()));
    }
    let mut out = format!("P6\n{nx} {ny}\n255\n").into_bytes();
    out.reserve(3 * nx * ny);
    for j in (0..ny).rev() {
        for i in 0..nx {
            out.extend_from_slice(&label_color(g.label(i, j)));
        }
    }
    Ok(out)
}

/// P4 image of a mask; set pixels are black (bit 1).
pub fn emit_pbm(mask: &GridMask) -> Result<Vec<u8>> {
    let (nx, ny) = (mask.nx(), mask.ny());
    if nx == 0 || ny == 0 {
        return Err(Error::Precondition("empty raster".into()));
    }
    let mut out = format!("P4\n{nx} {ny}\n").into_bytes();
    let row_bytes = nx.div_ceil(8);
    for j in (0..ny).rev() {
        let mut row = vec![0u8; row_bytes];
        for i in 0..nx {
            if mask.get(i, j) {
                row[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out.extend_from_slice(&row);
    }
    Ok(out)
}

pub fn emit_ppm(image: Image<'_>) -> Result<Vec<u8>> {
    match image {
        Image::Basins(g) => emit_ppm_grid(g),
        Image::Mask(m) => emit_pbm(m),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PnmHeader {
    pub magic: [u8; 2],
    pub width: usize,
    pub height: usize,
    /// Maximum sample value; 1 for P4.
    pub maxval: usize,
    /// Byte offset of the raster data.
    pub data_offset: usize,
}

/// Parses the header of a binary P4 or P6 image (comments allowed).
pub fn read_header(bytes: &[u8]) -> Result<PnmHeader> {
    let bad = |why: &str| Error::Parse(format!("netpbm header: {why}"));
    if bytes.len() < 2 || bytes[0] != b'P' || !(bytes[1] == b'4' || bytes[1] == b'6') {
        return Err(bad("expected P4 or P6"));
    }
    let fields = if bytes[1] == b'4' { 2 } else { 3 };
    let mut pos = 2;
    let mut values = Vec::new();
    while values.len() < fields {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("missing number"));
        }
        let s = std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("not ascii"))?;
        values.push(s.parse::<usize>().map_err(|_| bad("bad number"))?);
    }
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(bad("missing separator before data"));
    }
    Ok(PnmHeader {
        magic: [bytes[0], bytes[1]],
        width: values[0],
        height: values[1],
        maxval: if fields == 3 { values[2] } else { 1 },
        data_offset: pos + 1,
    })
}
