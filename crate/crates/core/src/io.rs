//! Raster and click-point file formats.
//!
//! Grayscale rasters are 8-bit binary PGM (`P5`) or 8-bit grayscale PNG.
//! Masks are written with foreground 255 and background 0; on load any
//! nonzero pixel is foreground. Every writer goes through
//! [`write_atomic`], so a failed write never leaves a half-written file.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage, SeedPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    Png,
}

impl ImageFormat {
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "pgm" | "pnm" => Some(ImageFormat::Pgm),
            "png" => Some(ImageFormat::Png),
            _ => None,
        }
    }

    fn sniff(bytes: &[u8]) -> Option<Self> {
        if bytes.starts_with(b"\x89PNG\r\n\x1a\n") {
            Some(ImageFormat::Png)
        } else if bytes.starts_with(b"P5") {
            Some(ImageFormat::Pgm)
        } else {
            None
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            ImageFormat::Pgm => "pgm",
            ImageFormat::Png => "png",
        }
    }
}

pub fn encode(image: &GrayImage, format: ImageFormat) -> Vec<u8> {
    match format {
        ImageFormat::Pgm => encode_pgm(image),
        ImageFormat::Png => encode_png(image),
    }
}

/// Decodes PGM or PNG, picking the format from the magic bytes.
pub fn decode(bytes: &[u8]) -> std::result::Result<GrayImage, String> {
    match ImageFormat::sniff(bytes) {
        Some(ImageFormat::Pgm) => decode_pgm(bytes),
        Some(ImageFormat::Png) => decode_png(bytes),
        None => Err("not a binary PGM (P5) or PNG file".into()),
    }
}

pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend_from_slice(image.data());
    out
}

pub fn decode_pgm(bytes: &[u8]) -> std::result::Result<GrayImage, String> {
    let mut pos = 0usize;
    let magic = header_token(bytes, &mut pos)?;
    if magic != "P5" {
        return Err(format!("unsupported netpbm magic `{magic}`, expected P5"));
    }
    let mut field = |name: &str| -> std::result::Result<usize, String> {
        let tok = header_token(bytes, &mut pos)?;
        tok.parse::<usize>()
            .map_err(|_| format!("bad {name} `{tok}` in PGM header"))
    };
    let width = field("width")?;
    let height = field("height")?;
    let maxval = field("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(format!("maxval {maxval} is not an 8-bit PGM"));
    }
    // exactly one whitespace byte separates the header from the raster
    pos += 1;
    let len = width
        .checked_mul(height)
        .ok_or_else(|| "PGM dimensions overflow".to_string())?;
    let raster = bytes
        .get(pos..pos + len)
        .ok_or_else(|| format!("PGM raster truncated: need {len} bytes"))?;
    let data = if maxval == 255 {
        raster.to_vec()
    } else {
        raster
            .iter()
            .map(|&v| ((v.min(maxval as u8) as usize * 255 + maxval / 2) / maxval) as u8)
            .collect()
    };
    GrayImage::new(width, height, data).map_err(|e| e.to_string())
}

fn header_token<'a>(bytes: &'a [u8], pos: &mut usize) -> std::result::Result<&'a str, String> {
    loop {
        match bytes.get(*pos) {
            Some(b'#') => {
                while !matches!(bytes.get(*pos), Some(b'\n') | None) {
                    *pos += 1;
                }
            }
            Some(c) if c.is_ascii_whitespace() => *pos += 1,
            Some(_) => break,
            None => return Err("PGM header truncated".into()),
        }
    }
    let start = *pos;
    while matches!(bytes.get(*pos), Some(c) if !c.is_ascii_whitespace() && *c != b'#') {
        *pos += 1;
    }
    std::str::from_utf8(&bytes[start..*pos]).map_err(|_| "non-ASCII PGM header".to_string())
}

pub fn encode_png(image: &GrayImage) -> Vec<u8> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, image.width() as u32, image.height() as u32);
        encoder.set_color(png::ColorType::Grayscale);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder.write_header().expect("in-memory PNG header");
        writer
            .write_image_data(image.data())
            .expect("in-memory PNG data");
    }
    out
}

/// Decodes a PNG to 8-bit gray. Palette, 16-bit and colour inputs are
/// converted (colour via integer BT.601 luma); alpha is dropped.
pub fn decode_png(bytes: &[u8]) -> std::result::Result<GrayImage, String> {
    let mut decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::EXPAND | png::Transformations::STRIP_16);
    let mut reader = decoder.read_info().map_err(|e| e.to_string())?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| "PNG too large".to_string())?;
    let mut buf = vec![0u8; size];
    let info = reader.next_frame(&mut buf).map_err(|e| e.to_string())?;
    buf.truncate(info.buffer_size());
    let (w, h) = (info.width as usize, info.height as usize);
    let luma = |r: u8, g: u8, b: u8| ((299 * r as u32 + 587 * g as u32 + 114 * b as u32 + 500) / 1000) as u8;
    let data: Vec<u8> = match info.color_type {
        png::ColorType::Grayscale => buf,
        png::ColorType::GrayscaleAlpha => buf.chunks_exact(2).map(|p| p[0]).collect(),
        png::ColorType::Rgb => buf.chunks_exact(3).map(|p| luma(p[0], p[1], p[2])).collect(),
        png::ColorType::Rgba => buf.chunks_exact(4).map(|p| luma(p[0], p[1], p[2])).collect(),
        png::ColorType::Indexed => return Err("unexpanded palette PNG".into()),
    };
    GrayImage::new(w, h, data).map_err(|e| e.to_string())
}

/// Writes `bytes` to a temporary sibling of `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn load_gray(path: &Path) -> Result<GrayImage> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes).map_err(|reason| Error::Decode {
        path: path.to_path_buf(),
        reason,
    })
}

/// Saves with the format implied by the extension (PNG when unknown).
pub fn save_gray(path: &Path, image: &GrayImage) -> Result<()> {
    let format = ImageFormat::from_path(path).unwrap_or(ImageFormat::Png);
    write_atomic(path, &encode(image, format))
}

pub fn load_mask(path: &Path) -> Result<BinaryMask> {
    load_gray(path).map(|g| g.to_mask())
}

pub fn save_mask(path: &Path, mask: &BinaryMask) -> Result<()> {
    save_gray(path, &mask.to_gray())
}

/// Parses a click-point list: one `row,col` per line, `#` comments and
/// blank lines ignored.
pub fn parse_seeds(text: &str) -> Result<Vec<SeedPoint>> {
    let mut seeds = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |reason: String| Error::Parse { line: i + 1, reason };
        let (r, c) = line
            .split_once(',')
            .ok_or_else(|| parse_err(format!("expected `row,col`, got `{line}`")))?;
        let row = r
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("bad row `{}`", r.trim())))?;
        let col = c
            .trim()
            .parse()
            .map_err(|_| parse_err(format!("bad col `{}`", c.trim())))?;
        seeds.push(SeedPoint { row, col });
    }
    Ok(seeds)
}

pub fn format_seeds(seeds: &[SeedPoint]) -> String {
    let mut out = String::from("# row,col\n");
    for s in seeds {
        out.push_str(&format!("{},{}\n", s.row, s.col));
    }
    out
}

pub fn load_seeds(path: &Path) -> Result<Vec<SeedPoint>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_seeds(&text)
}
