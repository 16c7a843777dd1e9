//! Pixel-grid primitives.
//!
//! Everything here operates on [`Grid`], a row-major 2D buffer. The two
//! concrete rasters used throughout the crate are [`GrayImage`] (8-bit
//! intensities) and [`BinaryMask`] (`true` = foreground).

mod fill;
mod morphology;
mod skeleton;
mod threshold;

pub use fill::{flood_fill, flood_fill_bounded, BoundedFill};
pub use morphology::{close, dilate, dilate_with, erode, erode_with, Border, DiskSE};
pub use skeleton::{count_components8, skeletonize};
pub use threshold::{binarize, otsu_threshold, ThresholdMethod, DEFAULT_THRESHOLD};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major 2D raster with top-left origin.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Grid<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

/// 8-bit grayscale raster.
pub type GrayImage = Grid<u8>;

/// Binary raster; `true` is foreground.
pub type BinaryMask = Grid<bool>;

impl<T: Copy> Grid<T> {
    pub fn new(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        check_dims(width, height)?;
        if data.len() != width * height {
            return Err(Error::DataLength {
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: T) -> Result<Self> {
        check_dims(width, height)?;
        Ok(Self {
            width,
            height,
            data: vec![value; width * height],
        })
    }

    /// Builds a grid by evaluating `f(row, col)` for every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Result<Self> {
        check_dims(width, height)?;
        let mut data = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                data.push(f(row, col));
            }
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false; a grid has at least one pixel.
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.width + col]
    }

    /// Bounds-checked access with signed coordinates.
    #[inline]
    pub fn get_signed(&self, row: isize, col: isize) -> Option<T> {
        if row < 0 || col < 0 || row as usize >= self.height || col as usize >= self.width {
            None
        } else {
            Some(self.data[row as usize * self.width + col as usize])
        }
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[row * self.width + col] = value;
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(T) -> U) -> Grid<U> {
        Grid {
            width: self.width,
            height: self.height,
            data: self.data.iter().copied().map(f).collect(),
        }
    }

    pub fn same_shape<U>(&self, other: &Grid<U>) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn contains(&self, seed: SeedPoint) -> bool {
        seed.row < self.height && seed.col < self.width
    }

    pub(crate) fn check_seed(&self, seed: SeedPoint) -> Result<()> {
        if self.contains(seed) {
            Ok(())
        } else {
            Err(Error::SeedOutOfBounds {
                seed,
                width: self.width,
                height: self.height,
            })
        }
    }
}

impl Grid<bool> {
    pub fn count_foreground(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub fn complement(&self) -> Self {
        self.map(|v| !v)
    }

    /// Pixelwise union. Panics if the shapes differ.
    pub fn union(&self, other: &Self) -> Self {
        assert!(self.same_shape(other), "union of differently sized masks");
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        assert!(self.same_shape(other), "intersection of differently sized masks");
        self.zip_with(other, |a, b| a && b)
    }

    /// True when every foreground pixel of `self` is foreground in `other`.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.same_shape(other)
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(&a, &b)| !a || b)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.same_shape(other) && self.data.iter().zip(&other.data).all(|(&a, &b)| !(a && b))
    }

    /// Mask as 0/255 intensities, the on-disk convention.
    pub fn to_gray(&self) -> GrayImage {
        self.map(|v| if v { 255 } else { 0 })
    }

    fn zip_with(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        Grid {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl Grid<u8> {
    /// Any nonzero pixel becomes foreground.
    pub fn to_mask(&self) -> BinaryMask {
        self.map(|v| v != 0)
    }
}

impl<T: Copy + std::fmt::Debug> std::fmt::Debug for Grid<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Grid {}x{} [", self.width, self.height)?;
        for row in self.data.chunks(self.width) {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        Err(Error::InvalidDimensions { width, height })
    } else {
        Ok(())
    }
}

/// A single-pixel click-point, `(row, col)` with top-left origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SeedPoint {
    pub row: usize,
    pub col: usize,
}

impl SeedPoint {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl From<(usize, usize)> for SeedPoint {
    fn from((row, col): (usize, usize)) -> Self {
        Self { row, col }
    }
}

/// 4-neighbours of `index` in a `width`x`height` grid, in raster order
/// (up, left, right, down).
#[inline]
pub(crate) fn neighbors4(
    index: usize,
    width: usize,
    height: usize,
) -> impl Iterator<Item = usize> {
    let row = index / width;
    let col = index % width;
    let up = (row > 0).then(|| index - width);
    let left = (col > 0).then(|| index - 1);
    let right = (col + 1 < width).then(|| index + 1);
    let down = (row + 1 < height).then(|| index + width);
    [up, left, right, down].into_iter().flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            GrayImage::new(0, 3, vec![]),
            Err(Error::InvalidDimensions { .. })
        ));
        assert!(matches!(
            GrayImage::new(2, 2, vec![1, 2, 3]),
            Err(Error::DataLength {
                expected: 4,
                actual: 3
            })
        ));
    }

    #[test]
    fn from_fn_is_row_major() {
        let g = Grid::from_fn(3, 2, |r, c| (r * 10 + c) as u8).unwrap();
        assert_eq!(g.data(), &[0, 1, 2, 10, 11, 12]);
        assert_eq!(g.get(1, 2), 12);
        assert_eq!(g.get_signed(-1, 0), None);
        assert_eq!(g.get_signed(1, 3), None);
    }

    #[test]
    fn neighbors_at_corner() {
        let n: Vec<_> = neighbors4(0, 3, 3).collect();
        assert_eq!(n, vec![1, 3]);
        let n: Vec<_> = neighbors4(4, 3, 3).collect();
        assert_eq!(n, vec![1, 3, 5, 7]);
    }
}
