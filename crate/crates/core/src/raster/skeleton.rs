//! Two-subiteration boundary thinning.
//!
//! Each subiteration marks candidates with the classic directional
//! conditions (2 ≤ B ≤ 6, one 0→1 transition around the ring, and the
//! south-east / north-west product tests), then deletes them one at a time
//! in raster order, re-checking that each deletion is still simple under
//! 8-connectivity (Yokoi connectivity number = 1). The re-check is what
//! keeps 2×2 blocks and diagonal staircases from vanishing.

use std::collections::VecDeque;

use super::BinaryMask;

/// Ring order used by the directional tests: N, NE, E, SE, S, SW, W, NW.
const RING: [(isize, isize); 8] = [
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
];

fn ring(mask: &BinaryMask, row: usize, col: usize) -> [bool; 8] {
    let mut out = [false; 8];
    for (slot, (dr, dc)) in out.iter_mut().zip(RING) {
        *slot = mask
            .get_signed(row as isize + dr, col as isize + dc)
            .unwrap_or(false);
    }
    out
}

fn transitions(p: &[bool; 8]) -> usize {
    (0..8).filter(|&i| !p[i] && p[(i + 1) % 8]).count()
}

/// Yokoi 8-connectivity number; 1 means the pixel is simple.
fn connectivity8(p: &[bool; 8]) -> i32 {
    // Counter-clockwise from east: E, NE, N, NW, W, SW, S, SE.
    let x = [p[2], p[1], p[0], p[7], p[6], p[5], p[4], p[3]];
    let inv = |k: usize| (!x[k % 8]) as i32;
    [0usize, 2, 4, 6]
        .into_iter()
        .map(|k| inv(k) - inv(k) * inv(k + 1) * inv(k + 2))
        .sum()
}

fn is_candidate(p: &[bool; 8], first: bool) -> bool {
    let [n, _, e, _, s, _, w, _] = *p;
    let b = p.iter().filter(|&&v| v).count();
    if !(2..=6).contains(&b) || transitions(p) != 1 {
        return false;
    }
    if first {
        !(n && e && s) && !(e && s && w)
    } else {
        !(n && e && w) && !(n && s && w)
    }
}

/// Thins every foreground object to a one-pixel-wide skeleton.
///
/// The result is a subset of the input with the same number of
/// 8-connected components.
pub fn skeletonize(mask: &BinaryMask) -> BinaryMask {
    let mut out = mask.clone();
    let mut candidates = Vec::new();
    loop {
        let mut changed = false;
        for first in [true, false] {
            candidates.clear();
            for row in 0..out.height() {
                for col in 0..out.width() {
                    if out.get(row, col) && is_candidate(&ring(&out, row, col), first) {
                        candidates.push((row, col));
                    }
                }
            }
            for &(row, col) in &candidates {
                if connectivity8(&ring(&out, row, col)) == 1 {
                    out.set(row, col, false);
                    changed = true;
                }
            }
        }
        if !changed {
            return out;
        }
    }
}

/// Number of 8-connected foreground components.
pub fn count_components8(mask: &BinaryMask) -> usize {
    let (w, h) = (mask.width(), mask.height());
    let mut seen = vec![false; w * h];
    let mut queue = VecDeque::new();
    let mut count = 0;
    for start in 0..w * h {
        if !mask.data()[start] || seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        queue.push_back(start);
        while let Some(i) = queue.pop_front() {
            let (r, c) = ((i / w) as isize, (i % w) as isize);
            for dr in -1..=1 {
                for dc in -1..=1 {
                    if let Some(true) = mask.get_signed(r + dr, c + dc) {
                        let j = (r + dr) as usize * w + (c + dc) as usize;
                        if !seen[j] {
                            seen[j] = true;
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
    }
    count
}
