//! Keypoint overlay rendering.

use fkp_core::{Image, KeyPoint};

/// Returns an RGB copy of the image with a red cross over every keypoint:
/// the rounded center pixel plus its four axis neighbors, clipped at the
/// borders.
pub fn annotate(img: &Image, kps: &[KeyPoint]) -> Image {
    let (w, h) = (img.width(), img.height());
    let mut data = Vec::with_capacity((3 * w * h) as usize);
    for y in 0..h {
        for x in 0..w {
            let px = img.pixel(x, y);
            match *px {
                [v] => data.extend_from_slice(&[v, v, v]),
                [r, g, b] => data.extend_from_slice(&[r, g, b]),
                _ => unreachable!("images carry 1 or 3 channels"),
            }
        }
    }
    let mut paint = |x: i64, y: i64| {
        if x >= 0 && y >= 0 && (x as u32) < w && (y as u32) < h {
            let at = 3 * (y as usize * w as usize + x as usize);
            data[at] = 255;
            data[at + 1] = 0;
            data[at + 2] = 0;
        }
    };
    for kp in kps {
        let cx = kp.x.round() as i64;
        let cy = kp.y.round() as i64;
        for (dx, dy) in [(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)] {
            paint(cx + dx, cy + dy);
        }
    }
    Image::rgb(w, h, data).expect("constructed with matching dimensions")
}
