//! Escape-time experiments for z^2 + c: deterministic grid rendering with
//! reproducible digests, interior/boundary area counts, and the orbit and
//! zoom statistics built on top of them (see `orbit` and `zoom`).

pub mod orbit;
pub mod zoom;

use rayon::prelude::*;
use renorm_core::{Error, Result};
use sha2::{Digest, Sha256};

/// Hard cap on cells per render so a typo cannot allocate the machine away.
pub const MAX_PIXELS: usize = 1 << 25;

/// Square-pixel view rectangle; height follows from the pixel aspect.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub center: (f64, f64),
    pub width: f64,
}

impl Window {
    pub fn new(cx: f64, cy: f64, width: f64) -> Window {
        Window {
            center: (cx, cy),
            width,
        }
    }

    pub fn pixel_size(&self, px_width: usize) -> f64 {
        self.width / px_width as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub escaped: bool,
    pub iterations: u32,
    pub final_magnitude: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RenderMode {
    Mandelbrot,
    Julia { c: (f64, f64) },
}

/// Iterate z^2 + c from z0 until |z| strictly exceeds `bailout` or the
/// budget runs out.  `iterations` counts applications of the map, so the
/// classic c = 1 orbit 0, 1, 2, 5 reports 3.
pub fn escape_time(c: (f64, f64), z0: (f64, f64), max_iter: u32, bailout: f64) -> Cell {
    let b2 = bailout * bailout;
    let (cr, ci) = c;
    let (mut x, mut y) = z0;
    for k in 1..=max_iter {
        let nx = x * x - y * y + cr;
        let ny = 2.0 * x * y + ci;
        x = nx;
        y = ny;
        let m2 = x * x + y * y;
        if !m2.is_finite() || m2 > b2 {
            return Cell {
                escaped: true,
                iterations: k,
                final_magnitude: m2.sqrt(),
            };
        }
    }
    Cell {
        escaped: false,
        iterations: max_iter,
        final_magnitude: (x * x + y * y).sqrt(),
    }
}

pub struct ImageGrid {
    pub px_width: usize,
    pub px_height: usize,
    pub cells: Vec<Cell>,
    pub window: Window,
    pub mode: RenderMode,
    pub max_iter: u32,
    pub bailout: f64,
}

/// Centre of pixel column i (and, with the sign flipped, row j): offsets are
/// symmetric about zero, so conjugate rows see exactly negated imaginary
/// parts and reflection symmetries hold bit-for-bit.
fn axis_offset(i: usize, n: usize, step: f64) -> f64 {
    (i as f64 + 0.5 - n as f64 / 2.0) * step
}

pub fn render(
    mode: RenderMode,
    window: Window,
    px: (usize, usize),
    max_iter: u32,
    threads: usize,
) -> Result<ImageGrid> {
    let (w, h) = px;
    if w == 0 || h == 0 {
        return Err(Error::Domain("empty pixel grid".into()));
    }
    if w.saturating_mul(h) > MAX_PIXELS {
        return Err(Error::Budget(format!("{w}x{h} exceeds {MAX_PIXELS} cells")));
    }
    if !(window.width > 0.0) || !window.center.0.is_finite() || !window.center.1.is_finite() {
        return Err(Error::Domain("degenerate window".into()));
    }
    if max_iter == 0 {
        return Err(Error::Domain("max_iter must be positive".into()));
    }
    let s = window.pixel_size(w);
    let (cx, cy) = window.center;
    let half_w = s * w as f64 / 2.0;
    let half_h = s * h as f64 / 2.0;
    let corner = ((cx.abs() + half_w).hypot(cy.abs() + half_h)).max(2.0);
    let bailout = match mode {
        RenderMode::Mandelbrot => corner,
        RenderMode::Julia { c } => c.0.hypot(c.1).max(2.0),
    };

    let row = |j: usize| -> Vec<Cell> {
        let im = cy - axis_offset(j, h, s);
        (0..w)
            .map(|i| {
                let re = cx + axis_offset(i, w, s);
                match mode {
                    RenderMode::Mandelbrot => escape_time((re, im), (0.0, 0.0), max_iter, bailout),
                    RenderMode::Julia { c } => escape_time(c, (re, im), max_iter, bailout),
                }
            })
            .collect()
    };

    let rows: Vec<Vec<Cell>> = if threads <= 1 {
        (0..h).map(row).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Budget(format!("thread pool: {e}")))?;
        pool.install(|| (0..h).into_par_iter().map(row).collect())
    };
    let cells: Vec<Cell> = rows.into_iter().flatten().collect();
    Ok(ImageGrid {
        px_width: w,
        px_height: h,
        cells,
        window,
        mode,
        max_iter,
        bailout,
    })
}

impl ImageGrid {
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[j * self.px_width + i]
    }

    pub fn escaped_count(&self) -> usize {
        self.cells.iter().filter(|c| c.escaped).count()
    }

    /// SHA-256 over dimensions, parameters and every cell, hex-encoded.
    /// Identical for identical inputs regardless of thread count.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.px_width as u64).to_le_bytes());
        h.update((self.px_height as u64).to_le_bytes());
        h.update(self.max_iter.to_le_bytes());
        h.update(self.bailout.to_bits().to_le_bytes());
        for c in &self.cells {
            h.update([c.escaped as u8]);
            h.update(c.iterations.to_le_bytes());
            h.update(c.final_magnitude.to_bits().to_le_bytes());
        }
        let out = h.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }

    fn gray_bytes(&self) -> Vec<u8> {
        self.cells
            .iter()
            .map(|c| {
                if c.escaped {
                    ((255 * c.iterations as u64) / self.max_iter as u64) as u8
                } else {
                    0
                }
            })
            .collect()
    }

    /// Binary PPM (P6), escaped cells shaded by iteration count.
    pub fn ppm_bytes(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.px_width, self.px_height).into_bytes();
        for g in self.gray_bytes() {
            out.extend_from_slice(&[g, g, g]);
        }
        out
    }

    /// Same shading as `ppm_bytes`, encoded as an 8-bit grayscale PNG.
    pub fn png_bytes(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        let enc = image::codecs::png::PngEncoder::new(&mut out);
        image::ImageEncoder::write_image(
            enc,
            &self.gray_bytes(),
            self.px_width as u32,
            self.px_height as u32,
            image::ColorType::L8,
        )
        .map_err(|e| Error::Domain(format!("png encode: {e}")))?;
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AreaEstimate {
    /// Bounded cells whose eight neighbours are all bounded.
    pub interior_cells: usize,
    /// All bounded cells.
    pub bounded_cells: usize,
    pub pixel_area: f64,
    pub lower: f64,
    pub upper: f64,
    pub estimate: f64,
}

/// Pixel-counting area of the filled Julia set of z^2 + c.  The window must
/// contain the closed disk |z| <= 2 (everything outside it escapes, so the
/// count is then exhaustive).  `upper` counts bounded cells; `lower` keeps
/// only those padded by bounded neighbours on all eight sides.
pub fn area_estimate(
    c: (f64, f64),
    resolution: usize,
    max_iter: u32,
    window: Window,
) -> Result<AreaEstimate> {
    let half = window.width / 2.0;
    if window.center.0.abs() + 2.0 > half || window.center.1.abs() + 2.0 > half {
        return Err(Error::Domain(
            "area window must contain the disk |z| <= 2".into(),
        ));
    }
    let grid = render(
        RenderMode::Julia { c },
        window,
        (resolution, resolution),
        max_iter,
        1,
    )?;
    let n = resolution;
    let bounded = |i: isize, j: isize| -> bool {
        if i < 0 || j < 0 || i >= n as isize || j >= n as isize {
            return false;
        }
        !grid.cell(i as usize, j as usize).escaped
    };
    let mut bounded_cells = 0usize;
    let mut interior_cells = 0usize;
    for j in 0..n {
        for i in 0..n {
            if !bounded(i as isize, j as isize) {
                continue;
            }
            bounded_cells += 1;
            let mut island = true;
            for dj in -1isize..=1 {
                for di in -1isize..=1 {
                    if (di, dj) != (0, 0) && !bounded(i as isize + di, j as isize + dj) {
                        island = false;
                    }
                }
            }
            if island {
                interior_cells += 1;
            }
        }
    }
    let pixel_area = grid.window.pixel_size(n).powi(2);
    Ok(AreaEstimate {
        interior_cells,
        bounded_cells,
        pixel_area,
        lower: interior_cells as f64 * pixel_area,
        upper: bounded_cells as f64 * pixel_area,
        estimate: bounded_cells as f64 * pixel_area,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escape_counts_applications() {
        // c = 1: 0 -> 1 -> 2 -> 5, threshold 2 crossed on the third map.
        let cell = escape_time((1.0, 0.0), (0.0, 0.0), 100, 2.0);
        assert!(cell.escaped);
        assert_eq!(cell.iterations, 3);
        assert_eq!(cell.final_magnitude, 5.0);
    }

    #[test]
    fn bailout_is_strict() {
        // c = -2: 0 -> -2 -> 2 -> 2 -> ... touches |z| = 2 without exceeding.
        let cell = escape_time((-2.0, 0.0), (0.0, 0.0), 500, 2.0);
        assert!(!cell.escaped);
        assert_eq!(cell.iterations, 500);
        assert_eq!(cell.final_magnitude, 2.0);
    }

    #[test]
    fn unit_disk_is_the_julia_set_of_zero() {
        let grid = render(
            RenderMode::Julia { c: (0.0, 0.0) },
            Window::new(0.0, 0.0, 4.0),
            (64, 64),
            100,
            1,
        )
        .unwrap();
        let s = grid.window.pixel_size(64);
        for j in 0..64 {
            for i in 0..64 {
                let re = axis_offset(i, 64, s);
                let im = -axis_offset(j, 64, s);
                let inside = re.hypot(im) < 1.0;
                assert_eq!(grid.cell(i, j).escaped, !inside, "pixel ({i},{j})");
            }
        }
    }

    #[test]
    fn filled_set_of_minus_two_is_a_segment() {
        // For c = -2 the filled set is exactly [-2, 2] on the real line.
        for k in 0..=40 {
            let x = -2.0 + 4.0 * k as f64 / 40.0;
            let cell = escape_time((-2.0, 0.0), (x, 0.0), 300, 2.0);
            assert!(!cell.escaped, "x = {x}");
        }
        for x in [-2.3, -2.01, 2.01, 2.5, 3.0] {
            let cell = escape_time((-2.0, 0.0), (x, 0.0), 300, 2.5);
            assert!(cell.escaped, "x = {x}");
        }
    }

    #[test]
    fn mirror_symmetry_is_exact() {
        let grid = render(
            RenderMode::Mandelbrot,
            Window::new(-0.5, 0.0, 3.0),
            (64, 64),
            200,
            1,
        )
        .unwrap();
        for j in 0..64 {
            for i in 0..64 {
                assert_eq!(grid.cell(i, j), grid.cell(i, 63 - j));
            }
        }
    }

    #[test]
    fn julia_negation_symmetry_is_exact() {
        let grid = render(
            RenderMode::Julia { c: (-0.39, 0.58) },
            Window::new(0.0, 0.0, 3.0),
            (64, 64),
            200,
            1,
        )
        .unwrap();
        for j in 0..64 {
            for i in 0..64 {
                assert_eq!(grid.cell(i, j), grid.cell(63 - i, 63 - j));
            }
        }
    }

    #[test]
    fn digests_agree_across_thread_counts() {
        let make = |threads| {
            render(
                RenderMode::Mandelbrot,
                Window::new(-0.6, 0.2, 2.5),
                (96, 96),
                150,
                threads,
            )
            .unwrap()
            .digest()
        };
        let one = make(1);
        assert_eq!(one, make(2));
        assert_eq!(one, make(8));
        assert_eq!(one.len(), 64);
    }

    #[test]
    fn ppm_layout() {
        let grid = render(
            RenderMode::Julia { c: (0.0, 0.0) },
            Window::new(0.0, 0.0, 4.0),
            (8, 8),
            10,
            1,
        )
        .unwrap();
        let ppm = grid.ppm_bytes();
        assert!(ppm.starts_with(b"P6\n8 8\n255\n"));
        assert_eq!(ppm.len(), 11 + 8 * 8 * 3);
        // Corner pixel escapes fast and is shaded; centre stays black.
        let corner = grid.cell(0, 0);
        assert!(corner.escaped);
        let expected = ((255 * corner.iterations as u64) / 10) as u8;
        assert_eq!(ppm[11], expected);
        let centre_idx = 11 + (4 * 8 + 4) * 3;
        assert_eq!(ppm[centre_idx], 0);

        let png = grid.png_bytes().unwrap();
        assert!(png.starts_with(&[0x89, b'P', b'N', b'G']));
    }

    #[test]
    fn disk_area_from_pixels() {
        let est = area_estimate((0.0, 0.0), 512, 100, Window::new(0.0, 0.0, 4.5)).unwrap();
        let pi = std::f64::consts::PI;
        assert!((est.estimate - pi).abs() / pi < 0.02, "{}", est.estimate);
        assert!(est.lower <= est.estimate);
        assert!(est.lower > 0.9 * pi);
    }

    #[test]
    fn area_shrinks_with_iteration_depth() {
        let w = Window::new(0.0, 0.0, 4.5);
        let coarse = area_estimate((-1.0, 0.0), 128, 40, w).unwrap();
        let mid = area_estimate((-1.0, 0.0), 128, 160, w).unwrap();
        let fine = area_estimate((-1.0, 0.0), 128, 640, w).unwrap();
        assert!(coarse.bounded_cells >= mid.bounded_cells);
        assert!(mid.bounded_cells >= fine.bounded_cells);
        assert!(fine.lower > 0.0);
    }

    #[test]
    fn area_stabilises_under_refinement() {
        let w = Window::new(0.0, 0.0, 4.5);
        let lo = area_estimate((-1.0, 0.0), 256, 300, w).unwrap();
        let hi = area_estimate((-1.0, 0.0), 512, 300, w).unwrap();
        let rel = (lo.estimate - hi.estimate).abs() / hi.estimate;
        assert!(rel < 0.02, "{} vs {}", lo.estimate, hi.estimate);
    }

    #[test]
    fn guards() {
        assert!(render(
            RenderMode::Mandelbrot,
            Window::new(0.0, 0.0, 0.0),
            (8, 8),
            10,
            1
        )
        .is_err());
        assert!(render(
            RenderMode::Mandelbrot,
            Window::new(0.0, 0.0, 1.0),
            (1 << 13, 1 << 13),
            10,
            1
        )
        .is_err());
        assert!(area_estimate((0.0, 0.0), 64, 10, Window::new(0.0, 0.0, 3.0)).is_err());
        assert!(area_estimate((0.0, 0.0), 64, 10, Window::new(1.0, 0.0, 5.0)).is_err());
    }
}
