//! Dataset growth by flips, rotations and translations.
//!
//! The eight [`Orientation`]s are the symmetries of a square: four
//! clockwise quarter-turn rotations, each optionally followed by a
//! horizontal mirror. They are exact pixel permutations, so a square
//! image/label pair yields eight training pairs with no resampling.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{BinaryMask, GrayImage, Grid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rotation {
    R0,
    R90,
    R180,
    R270,
}

impl Rotation {
    pub const ALL: [Rotation; 4] = [Rotation::R0, Rotation::R90, Rotation::R180, Rotation::R270];

    /// Clockwise quarter turns.
    pub fn quarter_turns(self) -> u8 {
        self as u8
    }

    fn from_quarter_turns(k: u8) -> Self {
        Self::ALL[(k % 4) as usize]
    }

    pub fn degrees(self) -> u16 {
        self.quarter_turns() as u16 * 90
    }
}

/// Clockwise rotation, then an optional horizontal mirror.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Orientation {
    pub rotation: Rotation,
    pub flipped: bool,
}

impl Orientation {
    pub const IDENTITY: Orientation = Orientation {
        rotation: Rotation::R0,
        flipped: false,
    };

    /// Canonical order: rot0, rot90, rot180, rot270, then the same four
    /// mirrored.
    pub const ALL: [Orientation; 8] = {
        let mut all = [Self::IDENTITY; 8];
        let mut i = 0;
        while i < 8 {
            all[i] = Orientation {
                rotation: Rotation::ALL[i % 4],
                flipped: i >= 4,
            };
            i += 1;
        }
        all
    };

    pub const fn new(rotation: Rotation, flipped: bool) -> Self {
        Self { rotation, flipped }
    }

    /// The orientation equal to applying `self` and then `next`.
    pub fn then(self, next: Orientation) -> Orientation {
        // A mirror turns a clockwise rotation into an anticlockwise one:
        // R^k F = F R^-k.
        let a = self.rotation.quarter_turns();
        let b = next.rotation.quarter_turns();
        let b = if self.flipped { (4 - b) % 4 } else { b };
        Orientation {
            rotation: Rotation::from_quarter_turns(a + b),
            flipped: self.flipped ^ next.flipped,
        }
    }

    pub fn inverse(self) -> Orientation {
        if self.flipped {
            // reflections are involutions
            self
        } else {
            Orientation {
                rotation: Rotation::from_quarter_turns(4 - self.rotation.quarter_turns()),
                flipped: false,
            }
        }
    }

    fn swaps_axes(self) -> bool {
        matches!(self.rotation, Rotation::R90 | Rotation::R270)
    }

    /// File-name suffix, e.g. `_r90_f`.
    pub fn suffix(self) -> String {
        format!(
            "_r{}{}",
            self.rotation.degrees(),
            if self.flipped { "_f" } else { "" }
        )
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.suffix().trim_start_matches('_'))
    }
}

/// Exact pixel permutation; 90° and 270° need a square raster.
pub fn apply_orientation<T: Copy>(grid: &Grid<T>, o: Orientation) -> Result<Grid<T>> {
    let (w, h) = (grid.width(), grid.height());
    if o.swaps_axes() && w != h {
        return Err(Error::NonSquareRotation { width: w, height: h });
    }
    let (ow, oh) = if o.swaps_axes() { (h, w) } else { (w, h) };
    Grid::from_fn(ow, oh, |r, c| {
        // undo the mirror first, then the rotation
        let c = if o.flipped { ow - 1 - c } else { c };
        let (sr, sc) = match o.rotation {
            Rotation::R0 => (r, c),
            Rotation::R90 => (h - 1 - c, r),
            Rotation::R180 => (h - 1 - r, w - 1 - c),
            Rotation::R270 => (c, w - 1 - r),
        };
        grid.get(sr, sc)
    })
}

/// All eight orientations in canonical order. Symmetric inputs give
/// repeated entries; nothing is deduplicated.
pub fn orbit<T: Copy>(grid: &Grid<T>) -> Result<Vec<(Orientation, Grid<T>)>> {
    Orientation::ALL
        .iter()
        .map(|&o| apply_orientation(grid, o).map(|g| (o, g)))
        .collect()
}

/// Shift within the raster's borders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Translation {
    pub dr: i64,
    pub dc: i64,
    /// Intensity for vacated image pixels; labels always get background.
    #[serde(default)]
    pub fill: u8,
}

impl Translation {
    pub const fn new(dr: i64, dc: i64) -> Self {
        Self { dr, dc, fill: 0 }
    }

    pub const fn with_fill(self, fill: u8) -> Self {
        Self { fill, ..self }
    }

    pub fn negated(self) -> Self {
        Self {
            dr: -self.dr,
            dc: -self.dc,
            fill: self.fill,
        }
    }

    /// File-name suffix, e.g. `_t+3-2`.
    pub fn suffix(self) -> String {
        format!("_t{:+}{:+}", self.dr, self.dc)
    }
}

/// Output pixel `(r, c)` takes input `(r - dr, c - dc)`, or `fill` when that
/// lies outside.
pub fn translate<T: Copy>(grid: &Grid<T>, dr: i64, dc: i64, fill: T) -> Grid<T> {
    Grid::from_fn(grid.width(), grid.height(), |r, c| {
        let sr = r as i64 - dr;
        let sc = c as i64 - dc;
        if sr < 0 || sc < 0 || sr >= grid.height() as i64 || sc >= grid.width() as i64 {
            fill
        } else {
            grid.get(sr as usize, sc as usize)
        }
    })
    .expect("shape of an existing grid")
}

pub fn translate_image(image: &GrayImage, t: Translation) -> GrayImage {
    translate(image, t.dr, t.dc, t.fill)
}

pub fn translate_mask(mask: &BinaryMask, t: Translation) -> BinaryMask {
    translate(mask, t.dr, t.dc, false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    Orient(Orientation),
    Shift(Translation),
}

impl Transform {
    pub fn suffix(self) -> String {
        match self {
            Transform::Orient(o) => o.suffix(),
            Transform::Shift(t) => t.suffix(),
        }
    }
}

/// Applies each transform identically to the image and its label, in order.
pub fn augment_pair(
    image: &GrayImage,
    label: &BinaryMask,
    transforms: &[Transform],
) -> Result<Vec<(GrayImage, BinaryMask)>> {
    if !image.same_shape(label) {
        return Err(Error::mismatch(format!(
            "image is {}x{}, label is {}x{}",
            image.width(),
            image.height(),
            label.width(),
            label.height()
        )));
    }
    transforms
        .iter()
        .map(|&t| match t {
            Transform::Orient(o) => Ok((apply_orientation(image, o)?, apply_orientation(label, o)?)),
            Transform::Shift(s) => Ok((translate_image(image, s), translate_mask(label, s))),
        })
        .collect()
}
