//! Binary dilation, erosion and closing with digital disk structuring
//! elements.
//!
//! A disk of radius `r` holds every offset `(dr, dc)` with
//! `dr² + dc² <= r²`. Each row of that set is a contiguous run of columns,
//! so both operators work on per-row prefix counts and cost
//! `O(pixels × (2r + 1))` regardless of the disk area.

use serde::{Deserialize, Serialize};

use super::BinaryMask;

/// Digital disk structuring element. Radius 0 is the single pixel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DiskSE {
    pub radius: u32,
}

impl DiskSE {
    pub const fn new(radius: u32) -> Self {
        Self { radius }
    }

    /// Every `(dr, dc)` with `dr² + dc² <= radius²`, row-major.
    pub fn offsets(&self) -> Vec<(isize, isize)> {
        let r = self.radius as isize;
        let mut out = Vec::new();
        for dr in -r..=r {
            for dc in -r..=r {
                if dr * dr + dc * dc <= r * r {
                    out.push((dr, dc));
                }
            }
        }
        out
    }

    /// Half-width of the disk's run of columns at each row offset,
    /// indexed by `dr + radius`.
    fn half_widths(&self) -> Vec<isize> {
        let r = self.radius as isize;
        (-r..=r)
            .map(|dr| {
                let budget = r * r - dr * dr;
                let mut w = 0isize;
                while (w + 1) * (w + 1) <= budget {
                    w += 1;
                }
                w
            })
            .collect()
    }
}

/// What pixels outside the raster count as.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Border {
    Background,
    Foreground,
}

struct RowCounts {
    width: usize,
    prefix: Vec<u32>,
}

impl RowCounts {
    fn new(mask: &BinaryMask) -> Self {
        let width = mask.width();
        let mut prefix = Vec::with_capacity(mask.height() * (width + 1));
        for row in mask.data().chunks(width) {
            let mut acc = 0u32;
            prefix.push(0);
            for &v in row {
                acc += v as u32;
                prefix.push(acc);
            }
        }
        Self { width, prefix }
    }

    /// Foreground count in `row`, columns `lo..=hi` (already clipped).
    #[inline]
    fn count(&self, row: usize, lo: usize, hi: usize) -> u32 {
        let base = row * (self.width + 1);
        self.prefix[base + hi + 1] - self.prefix[base + lo]
    }
}

/// Dilation with out-of-bounds pixels treated as background.
pub fn dilate(mask: &BinaryMask, se: DiskSE) -> BinaryMask {
    dilate_with(mask, se, Border::Background)
}

/// Erosion with out-of-bounds pixels treated as background, so foreground
/// touching the raster edge shrinks.
pub fn erode(mask: &BinaryMask, se: DiskSE) -> BinaryMask {
    erode_with(mask, se, Border::Background)
}

pub fn dilate_with(mask: &BinaryMask, se: DiskSE, border: Border) -> BinaryMask {
    if se.radius == 0 {
        return mask.clone();
    }
    let counts = RowCounts::new(mask);
    let widths = se.half_widths();
    let r = se.radius as isize;
    let (h, w) = (mask.height() as isize, mask.width() as isize);
    BinaryMask::from_fn(mask.width(), mask.height(), |row, col| {
        let (row, col) = (row as isize, col as isize);
        for dr in -r..=r {
            let rr = row + dr;
            let half = widths[(dr + r) as usize];
            let (lo, hi) = (col - half, col + half);
            let clipped = rr < 0 || rr >= h || lo < 0 || hi >= w;
            if clipped && border == Border::Foreground {
                return true;
            }
            if rr < 0 || rr >= h {
                continue;
            }
            let (lo, hi) = (lo.max(0) as usize, hi.min(w - 1) as usize);
            if counts.count(rr as usize, lo, hi) > 0 {
                return true;
            }
        }
        false
    })
    .expect("shape of an existing mask")
}

pub fn erode_with(mask: &BinaryMask, se: DiskSE, border: Border) -> BinaryMask {
    if se.radius == 0 {
        return mask.clone();
    }
    let counts = RowCounts::new(mask);
    let widths = se.half_widths();
    let r = se.radius as isize;
    let (h, w) = (mask.height() as isize, mask.width() as isize);
    BinaryMask::from_fn(mask.width(), mask.height(), |row, col| {
        let (row, col) = (row as isize, col as isize);
        for dr in -r..=r {
            let rr = row + dr;
            let half = widths[(dr + r) as usize];
            let (lo, hi) = (col - half, col + half);
            let clipped = rr < 0 || rr >= h || lo < 0 || hi >= w;
            if clipped && border == Border::Background {
                return false;
            }
            if rr < 0 || rr >= h {
                continue;
            }
            let (lo, hi) = (lo.max(0) as usize, hi.min(w - 1) as usize);
            if counts.count(rr as usize, lo, hi) as usize != hi - lo + 1 {
                return false;
            }
        }
        true
    })
    .expect("shape of an existing mask")
}

/// Morphological closing: dilation, then erosion with the same disk.
///
/// The erosion step ignores offsets that fall outside the raster (it pads
/// with foreground, the neutral value for erosion). With that pairing the
/// two operators are adjoint on the raster's own domain, which makes the
/// closing extensive and idempotent right up to the edges, and lets a gap
/// in a one-pixel-tall line close.
pub fn close(mask: &BinaryMask, se: DiskSE) -> BinaryMask {
    let dilated = dilate_with(mask, se, Border::Background);
    erode_with(&dilated, se, Border::Foreground)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(width: usize, bits: &[u8]) -> BinaryMask {
        BinaryMask::new(width, bits.len() / width, bits.iter().map(|&b| b != 0).collect()).unwrap()
    }

    // Direct definition over the offset set; used to check the run-based code.
    fn reference(m: &BinaryMask, se: DiskSE, dilation: bool, border: Border) -> BinaryMask {
        let outside = border == Border::Foreground;
        let offsets = se.offsets();
        BinaryMask::from_fn(m.width(), m.height(), |r, c| {
            let mut vals = offsets
                .iter()
                .map(|&(dr, dc)| m.get_signed(r as isize + dr, c as isize + dc).unwrap_or(outside));
            if dilation {
                vals.any(|v| v)
            } else {
                vals.all(|v| v)
            }
        })
        .unwrap()
    }

    #[test]
    fn disk_offsets() {
        assert_eq!(DiskSE::new(0).offsets(), vec![(0, 0)]);
        assert_eq!(DiskSE::new(1).offsets().len(), 5);
        assert_eq!(DiskSE::new(2).offsets().len(), 13);
        assert_eq!(DiskSE::new(3).offsets().len(), 29);
    }

    #[test]
    fn dilate_point_with_unit_disk_gives_plus() {
        let mut m = BinaryMask::filled(5, 5, false).unwrap();
        m.set(2, 2, true);
        let d = dilate(&m, DiskSE::new(1));
        let expected = mask(
            5,
            &[
                0, 0, 0, 0, 0, //
                0, 0, 1, 0, 0, //
                0, 1, 1, 1, 0, //
                0, 0, 1, 0, 0, //
                0, 0, 0, 0, 0,
            ],
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn erode_full_square_shrinks_from_border() {
        let m = BinaryMask::filled(5, 5, true).unwrap();
        let e = erode(&m, DiskSE::new(1));
        let expected = BinaryMask::from_fn(5, 5, |r, c| (1..4).contains(&r) && (1..4).contains(&c)).unwrap();
        assert_eq!(e, expected);
    }

    #[test]
    fn empty_stays_empty() {
        let m = BinaryMask::filled(6, 4, false).unwrap();
        for r in 0..4 {
            let se = DiskSE::new(r);
            assert_eq!(dilate(&m, se), m);
            assert_eq!(erode(&m, se), m);
            assert_eq!(close(&m, se), m);
        }
    }

    #[test]
    fn closing_bridges_one_pixel_gap() {
        let m = mask(7, &[1, 1, 1, 0, 1, 1, 1]);
        let c = close(&m, DiskSE::new(1));
        assert_eq!(c, mask(7, &[1, 1, 1, 1, 1, 1, 1]));
    }

    #[test]
    fn run_based_matches_offset_definition() {
        let mut state = 0x2545_f491_4f6c_dd1du64;
        for _ in 0..200 {
            let bits: Vec<bool> = (0..63)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    state.is_multiple_of(3)
                })
                .collect();
            let m = BinaryMask::new(9, 7, bits).unwrap();
            for radius in 0..4 {
                let se = DiskSE::new(radius);
                for border in [Border::Background, Border::Foreground] {
                    assert_eq!(dilate_with(&m, se, border), reference(&m, se, true, border));
                    assert_eq!(erode_with(&m, se, border), reference(&m, se, false, border));
                }
            }
        }
    }
}
