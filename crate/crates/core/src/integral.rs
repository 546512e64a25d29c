//! Summed-area table over integer energy grids.
//!
//! The box-filter detector consumes squared-channel "energy" rather than
//! plain intensity, so the table is built from a [`Grid<u64>`] produced by
//! [`rowsum_energy`] (or any other nonnegative integer grid).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::grid::Grid;
use crate::image::Image;

/// Per-pixel channel energy: `R² + G² + B²` for RGB images; grayscale pixels
/// are treated as `R = G = B = v`, giving `3·v²`.
pub fn rowsum_energy(img: &Image) -> Grid<u64> {
    Grid::from_fn(img.width(), img.height(), |x, y| {
        let px = img.pixel(x, y);
        if img.channels() == 1 {
            3 * (px[0] as u64).pow(2)
        } else {
            px.iter().map(|&c| (c as u64).pow(2)).sum()
        }
    })
}

/// Summed-area table with a zero-padded top row and left column, so the
/// table is `(width + 1) x (height + 1)` and any rectangle sum is four
/// lookups, regardless of position.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralImage {
    width: u32,
    height: u32,
    table: Vec<u64>,
}

impl IntegralImage {
    /// Single-pass construction. Additions are checked: a grid whose running
    /// sum exceeds `u64::MAX` reports the offending cell instead of wrapping.
    pub fn build(grid: &Grid<u64>) -> Result<Self, Error> {
        let w = grid.width() as usize;
        let h = grid.height() as usize;
        let stride = w + 1;
        let mut table = vec![0u64; stride * (h + 1)];
        for y in 0..h {
            for x in 0..w {
                let above = table[y * stride + (x + 1)];
                let left = table[(y + 1) * stride + x];
                let diag = table[y * stride + x];
                // `left - diag` is the prefix sum of row y left of x; the
                // subtraction cannot underflow because `left` extends `diag`
                // by one full row of nonnegative values.
                let row_prefix = left - diag;
                let cell = grid
                    .get(x as u32, y as u32)
                    .checked_add(above)
                    .and_then(|s| s.checked_add(row_prefix))
                    .ok_or(Error::IntegralOverflow { x: x as u32, y: y as u32 })?;
                table[(y + 1) * stride + (x + 1)] = cell;
            }
        }
        Ok(IntegralImage { width: grid.width(), height: grid.height(), table })
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    /// Sum over the half-open rectangle `[x0, x1) x [y0, y1)`.
    /// Requires `x0 <= x1 <= width` and `y0 <= y1 <= height`.
    #[inline]
    pub fn sum_rect(&self, x0: u32, y0: u32, x1: u32, y1: u32) -> u64 {
        debug_assert!(x0 <= x1 && x1 <= self.width, "x range [{x0}, {x1}) out of bounds");
        debug_assert!(y0 <= y1 && y1 <= self.height, "y range [{y0}, {y1}) out of bounds");
        let stride = self.width as usize + 1;
        let t = |x: u32, y: u32| self.table[y as usize * stride + x as usize] as u128;
        // Grouping the positive corners first keeps the arithmetic in u128
        // until the (always nonnegative) result is extracted.
        ((t(x1, y1) + t(x0, y0)) - (t(x1, y0) + t(x0, y1))) as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force rectangle sum, the oracle for the four-lookup identity.
    fn naive_sum(grid: &Grid<u64>, x0: u32, y0: u32, x1: u32, y1: u32) -> u64 {
        let mut acc = 0u64;
        for y in y0..y1 {
            for x in x0..x1 {
                acc += grid.get(x, y);
            }
        }
        acc
    }

    #[test]
    fn gray_energy_triples_the_square() {
        let img = Image::constant(3, 3, 10);
        let grid = rowsum_energy(&img);
        assert_eq!(grid.get(1, 1), 300);
        let ii = IntegralImage::build(&grid).unwrap();
        assert_eq!(ii.sum_rect(0, 0, 3, 3), 9 * 300);
    }

    #[test]
    fn rgb_energy_sums_channel_squares() {
        let img = Image::rgb(1, 1, alloc::vec![1, 2, 3]).unwrap();
        assert_eq!(rowsum_energy(&img).get(0, 0), 1 + 4 + 9);
    }

    #[test]
    fn ones_grid_corner_is_area() {
        let grid = Grid::filled(4, 4, 1u64);
        let ii = IntegralImage::build(&grid).unwrap();
        assert_eq!(ii.sum_rect(0, 0, 4, 4), 16);
        assert_eq!(ii.sum_rect(1, 1, 3, 3), 4);
    }

    #[test]
    fn singleton_grid() {
        let grid = Grid::filled(1, 1, 42u64);
        let ii = IntegralImage::build(&grid).unwrap();
        assert_eq!(ii.sum_rect(0, 0, 1, 1), 42);
        assert_eq!(ii.sum_rect(0, 0, 0, 0), 0);
    }

    #[test]
    fn matches_naive_sums_on_random_grids() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let w = rng.random_range(1..20u32);
            let h = rng.random_range(1..20u32);
            let grid = Grid::from_fn(w, h, |_, _| rng.random_range(0..200_000u64));
            let ii = IntegralImage::build(&grid).unwrap();
            for _ in 0..50 {
                let x0 = rng.random_range(0..=w);
                let x1 = rng.random_range(x0..=w);
                let y0 = rng.random_range(0..=h);
                let y1 = rng.random_range(y0..=h);
                assert_eq!(
                    ii.sum_rect(x0, y0, x1, y1),
                    naive_sum(&grid, x0, y0, x1, y1),
                    "rect [{x0},{x1})x[{y0},{y1}) on {w}x{h} grid"
                );
            }
        }
    }

    #[test]
    fn overflow_reports_cell() {
        let grid = Grid::from_vec(2, 1, alloc::vec![u64::MAX, 1]);
        assert_eq!(
            IntegralImage::build(&grid),
            Err(Error::IntegralOverflow { x: 1, y: 0 })
        );
    }
}
