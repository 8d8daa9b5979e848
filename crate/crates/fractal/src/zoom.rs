//! Zoom sequences: re-render the same centre at geometrically shrinking
//! widths and compare boundary statistics between frames.  Near a
//! self-similar parameter, zooming by the contraction factor leaves the
//! boundary density roughly unchanged.

use crate::{render, ImageGrid, RenderMode, Window};
use renorm_core::{Error, Result};

/// Smallest pixel size we trust in f64, relative to the centre magnitude.
pub const RELATIVE_PIXEL_FLOOR: f64 = 1e-14;

pub struct ZoomFrame {
    pub index: usize,
    pub max_iter: u32,
    pub grid: ImageGrid,
    pub boundary_fraction: f64,
}

/// Fraction of cells whose in-bounds 3x3 neighbourhood contains both
/// escaped and bounded cells.
pub fn boundary_pixel_fraction(grid: &ImageGrid) -> f64 {
    let (w, h) = (grid.px_width, grid.px_height);
    let mut boundary = 0usize;
    for j in 0..h {
        for i in 0..w {
            let mut saw_in = false;
            let mut saw_out = false;
            for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= w as i64 || nj >= h as i64 {
                        continue;
                    }
                    if grid.cell(ni as usize, nj as usize).escaped {
                        saw_out = true;
                    } else {
                        saw_in = true;
                    }
                }
            }
            if saw_in && saw_out {
                boundary += 1;
            }
        }
    }
    boundary as f64 / (w * h) as f64
}

/// Render `frames` views centred at `center`, frame k at width
/// `initial_width / factor^k`.  The iteration budget grows by sqrt(factor)
/// per frame: escape times at a fixed pixel depth into the boundary scale
/// with the local return time, which under an eigenvalue zoom grows by the
/// square root of the parameter contraction, so a flat budget would leave
/// deeper frames speckled with unresolved cells.  Fails before producing a
/// frame whose pixel size falls under the relative f64 resolution floor.
pub fn zoom_sequence(
    mode: RenderMode,
    center: (f64, f64),
    initial_width: f64,
    factor: f64,
    frames: usize,
    resolution: usize,
    base_iter: u32,
    threads: usize,
) -> Result<Vec<ZoomFrame>> {
    if !(factor > 1.0) {
        return Err(Error::Domain("zoom factor must exceed 1".into()));
    }
    if !(initial_width > 0.0) || frames == 0 {
        return Err(Error::Domain("need a positive width and a frame".into()));
    }
    let centre_mag = center.0.hypot(center.1);
    let mut out = Vec::with_capacity(frames);
    for k in 0..frames {
        let width = initial_width / factor.powi(k as i32);
        let pixel = width / resolution as f64;
        if pixel < RELATIVE_PIXEL_FLOOR * centre_mag {
            return Err(Error::Precision(format!(
                "frame {k}: pixel size {pixel:.3e} below f64 floor for centre magnitude {centre_mag:.3e}"
            )));
        }
        let max_iter = (base_iter as f64 * factor.sqrt().powi(k as i32)).ceil() as u32;
        let grid = render(
            mode,
            Window::new(center.0, center.1, width),
            (resolution, resolution),
            max_iter,
            threads,
        )?;
        let boundary_fraction = boundary_pixel_fraction(&grid);
        out.push(ZoomFrame {
            index: k,
            max_iter,
            grid,
            boundary_fraction,
        });
    }
    Ok(out)
}
