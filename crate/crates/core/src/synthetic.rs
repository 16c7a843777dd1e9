//! Synthetic cell-like test images: dark membranes on a light field.

use crate::raster::{GrayImage, SeedPoint};

pub const MEMBRANE: u8 = 20;
pub const FIELD: u8 = 220;

/// An annulus centred on `center` covering distances
/// `radius - thickness / 2 ..= radius + thickness / 2`, optionally opened on
/// its right-hand side by `gap` rows.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ring {
    pub center: SeedPoint,
    pub radius: f64,
    pub thickness: f64,
    pub gap: usize,
}

impl Ring {
    pub fn contains(&self, row: usize, col: usize) -> bool {
        let dr = row as f64 - self.center.row as f64;
        let dc = col as f64 - self.center.col as f64;
        let d = (dr * dr + dc * dc).sqrt();
        if (d - self.radius).abs() > self.thickness / 2.0 {
            return false;
        }
        let half = (self.gap / 2) as f64;
        let in_gap = self.gap > 0 && dc > 0.0 && dr.abs() <= half;
        !in_gap
    }
}

pub fn ring_image(width: usize, height: usize, rings: &[Ring]) -> GrayImage {
    GrayImage::from_fn(width, height, |r, c| {
        if rings.iter().any(|ring| ring.contains(r, c)) {
            MEMBRANE
        } else {
            FIELD
        }
    })
    .expect("non-empty synthetic image")
}

/// 32×32 image with two membrane rings and a seed at each centre. With
/// `gap = Some(n)` the first ring is opened by `n` rows.
pub fn two_ring_fixture(gap: Option<usize>) -> (GrayImage, Vec<SeedPoint>) {
    let rings = [
        Ring {
            center: SeedPoint::new(9, 9),
            radius: 5.5,
            thickness: 2.0,
            gap: gap.unwrap_or(0),
        },
        Ring {
            center: SeedPoint::new(22, 22),
            radius: 5.5,
            thickness: 2.0,
            gap: 0,
        },
    ];
    let seeds = rings.iter().map(|r| r.center).collect();
    (ring_image(32, 32, &rings), seeds)
}
