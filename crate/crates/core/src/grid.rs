use alloc::vec;
use alloc::vec::Vec;

/// Dense row-major 2D array. Used for energy grids, filter responses and
/// scale-space levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    width: u32,
    height: u32,
    data: Vec<T>,
}

impl<T: Copy> Grid<T> {
    /// Grid filled with a constant. Panics if either dimension is zero.
    pub fn filled(width: u32, height: u32, value: T) -> Self {
        assert!(width > 0 && height > 0, "grid dimensions must be nonzero");
        Grid { width, height, data: vec![value; width as usize * height as usize] }
    }

    /// Grid computed per cell from `f(x, y)`.
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> T) -> Self {
        assert!(width > 0 && height > 0, "grid dimensions must be nonzero");
        let mut data = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Grid { width, height, data }
    }

    /// Wraps an existing row-major buffer; `data.len()` must equal `width * height`.
    pub fn from_vec(width: u32, height: u32, data: Vec<T>) -> Self {
        assert!(width > 0 && height > 0, "grid dimensions must be nonzero");
        assert_eq!(data.len(), width as usize * height as usize, "buffer length mismatch");
        Grid { width, height, data }
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    /// Value at `(x, y)`. Panics when out of bounds.
    #[inline]
    pub fn get(&self, x: u32, y: u32) -> T {
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, value: T) {
        debug_assert!(x < self.width && y < self.height);
        self.data[y as usize * self.width as usize + x as usize] = value;
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }
}
