use std::collections::VecDeque;

use super::{neighbors4, BinaryMask, SeedPoint};
use crate::error::{Error, Result};

/// Outcome of a flood fill that may stop early.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedFill {
    pub mask: BinaryMask,
    pub pixels: usize,
    /// False when the pixel budget ran out before the component was exhausted.
    pub complete: bool,
}

/// The 4-connected component of background (`false`) barrier pixels that
/// contains `seed`.
pub fn flood_fill(barrier: &BinaryMask, seed: SeedPoint) -> Result<BinaryMask> {
    flood_fill_bounded(barrier, seed, None).map(|fill| fill.mask)
}

/// [`flood_fill`] that stops after `budget` pixels when one is given.
pub fn flood_fill_bounded(
    barrier: &BinaryMask,
    seed: SeedPoint,
    budget: Option<usize>,
) -> Result<BoundedFill> {
    barrier.check_seed(seed)?;
    if barrier.get(seed.row, seed.col) {
        return Err(Error::SeedOnBarrier { seed });
    }
    let (w, h) = (barrier.width(), barrier.height());
    let limit = budget.unwrap_or(usize::MAX);
    let walls = barrier.data();
    let mut filled = vec![false; w * h];
    let mut queue = VecDeque::new();
    let start = seed.row * w + seed.col;
    filled[start] = true;
    queue.push_back(start);
    let mut pixels = 1;
    let mut complete = true;
    'bfs: while let Some(i) = queue.pop_front() {
        for j in neighbors4(i, w, h) {
            if walls[j] || filled[j] {
                continue;
            }
            if pixels >= limit {
                complete = false;
                break 'bfs;
            }
            filled[j] = true;
            pixels += 1;
            queue.push_back(j);
        }
    }
    Ok(BoundedFill {
        mask: BinaryMask::new(w, h, filled)?,
        pixels,
        complete,
    })
}
