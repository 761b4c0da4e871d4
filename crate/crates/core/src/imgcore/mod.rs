//! Pixel buffer type, color arithmetic, PNG round-trip, noise injection and
//! the deterministic synthetic challenge image generator.
//!
//! All channel values live on the `[0, 255]` scale but are stored as `f64`,
//! so intermediate filter results may leave the nominal range; clamping and
//! quantization happen only in [`save_png`].

mod challenge;

use std::path::Path;

use image::ImageReader;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

pub use challenge::{generate_challenge, ChallengeImage, ChallengeSpec};

/// One 3-channel color sample on the `[0, 255]` scale.
pub type Color = [f64; 3];

/// Euclidean distance between two colors, taken jointly over the three
/// channels. Symmetric, zero iff the colors are equal.
pub fn color_distance(a: Color, b: Color) -> f64 {
    let dr = a[0] - b[0];
    let dg = a[1] - b[1];
    let db = a[2] - b[2];
    (dr * dr + dg * dg + db * db).sqrt()
}

/// Row-major buffer of 3-channel floating-point colors.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<Color>,
}

impl Image {
    /// All-black image of the given dimensions.
    ///
    /// Panics if either dimension is zero; images are never empty.
    pub fn new(width: usize, height: usize) -> Self {
        Self::constant(width, height, [0.0; 3])
    }

    /// Image filled with a single color.
    pub fn constant(width: usize, height: usize, color: Color) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        Image {
            width,
            height,
            data: vec![color; width * height],
        }
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> Color) -> Self {
        let mut img = Image::new(width, height);
        for y in 0..height {
            for x in 0..width {
                img.data[y * width + x] = f(x, y);
            }
        }
        img
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Color {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, color: Color) {
        debug_assert!(x < self.width && y < self.height);
        self.data[y * self.width + x] = color;
    }

    /// Flat row-major view of the pixel data.
    pub fn pixels(&self) -> &[Color] {
        &self.data
    }

    pub fn pixels_mut(&mut self) -> &mut [Color] {
        &mut self.data
    }

    /// Mutable rows for parallel per-row processing.
    pub fn rows_mut(&mut self) -> std::slice::ChunksMut<'_, Color> {
        self.data.chunks_mut(self.width)
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.width && y < self.height
    }

    /// Per-channel sums over the whole image.
    pub fn channel_sums(&self) -> [f64; 3] {
        let mut sums = [0.0; 3];
        for p in &self.data {
            for c in 0..3 {
                sums[c] += p[c];
            }
        }
        sums
    }

    /// True when every channel of every pixel is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|p| p.iter().all(|c| c.is_finite()))
    }

    /// Rounds every channel to the nearest integer and clamps to `[0, 255]`,
    /// the same quantization [`save_png`] applies.
    pub fn quantized(&self) -> Image {
        let mut out = self.clone();
        for p in out.data.iter_mut() {
            for c in p.iter_mut() {
                *c = c.round().clamp(0.0, 255.0);
            }
        }
        out
    }
}

/// Inclusive axis-aligned pixel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PixelRect {
    pub x0: usize,
    pub y0: usize,
    pub x1: usize,
    pub y1: usize,
}

impl PixelRect {
    pub fn new(x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        assert!(x0 <= x1 && y0 <= y1, "degenerate rect");
        PixelRect { x0, y0, x1, y1 }
    }

    /// Window of half-width `half` around `(cx, cy)`, clipped to an image of
    /// the given dimensions.
    pub fn window(cx: usize, cy: usize, half: usize, width: usize, height: usize) -> Self {
        PixelRect {
            x0: cx.saturating_sub(half),
            y0: cy.saturating_sub(half),
            x1: (cx + half).min(width - 1),
            y1: (cy + half).min(height - 1),
        }
    }

    pub fn width(&self) -> usize {
        self.x1 - self.x0 + 1
    }

    pub fn height(&self) -> usize {
        self.y1 - self.y0 + 1
    }

    pub fn area(&self) -> usize {
        self.width() * self.height()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    /// Shrinks the rect by `n` pixels on every side. Panics if it would
    /// become empty.
    pub fn inset(&self, n: usize) -> PixelRect {
        PixelRect::new(self.x0 + n, self.y0 + n, self.x1 - n, self.y1 - n)
    }

    /// Row-major iteration over the contained coordinates.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let xs = self.x0..=self.x1;
        (self.y0..=self.y1).flat_map(move |y| xs.clone().map(move |x| (x, y)))
    }
}

/// Named rectangle from the challenge generator's metadata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub name: String,
    pub rect: PixelRect,
}

impl Region {
    pub fn new(name: impl Into<String>, rect: PixelRect) -> Self {
        Region {
            name: name.into(),
            rect,
        }
    }
}

/// Serializes regions as one `name = x,y,w,h` line each.
pub fn regions_to_sidecar(regions: &[Region]) -> String {
    let mut out = String::new();
    for r in regions {
        out.push_str(&format!(
            "{} = {},{},{},{}\n",
            r.name,
            r.rect.x0,
            r.rect.y0,
            r.rect.width(),
            r.rect.height()
        ));
    }
    out
}

/// Parses the `name = x,y,w,h` sidecar format produced by
/// [`regions_to_sidecar`].
pub fn regions_from_sidecar(text: &str) -> Result<Vec<Region>> {
    let mut regions = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || Error::Param(format!("regions line {}: expected `name = x,y,w,h`", lineno + 1));
        let (name, nums) = line.split_once('=').ok_or_else(bad)?;
        let fields: Vec<usize> = nums
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        if fields.len() != 4 || fields[2] == 0 || fields[3] == 0 {
            return Err(bad());
        }
        regions.push(Region::new(
            name.trim(),
            PixelRect::new(
                fields[0],
                fields[1],
                fields[0] + fields[2] - 1,
                fields[1] + fields[3] - 1,
            ),
        ));
    }
    Ok(regions)
}

/// Loads an 8-bit PNG as a float image. Alpha is discarded; grayscale is
/// expanded to three identical channels. 16-bit and paletted files are
/// rejected.
pub fn load_png(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let reader = ImageReader::open(path).map_err(|e| Error::io(path, e))?;
    let decoded = reader.decode().map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::Format {
            path: path.to_path_buf(),
            reason: other.to_string(),
        },
    })?;

    use image::DynamicImage::*;
    let rgb = match decoded {
        ImageRgb8(img) => img,
        ImageRgba8(img) => image::DynamicImage::ImageRgba8(img).to_rgb8(),
        ImageLuma8(img) => image::DynamicImage::ImageLuma8(img).to_rgb8(),
        ImageLumaA8(img) => image::DynamicImage::ImageLumaA8(img).to_rgb8(),
        other => {
            return Err(Error::Format {
                path: path.to_path_buf(),
                reason: format!("unsupported color type {:?}; expected 8-bit RGB(A)", other.color()),
            })
        }
    };

    let (w, h) = rgb.dimensions();
    let mut img = Image::new(w as usize, h as usize);
    for (x, y, p) in rgb.enumerate_pixels() {
        img.set(
            x as usize,
            y as usize,
            [p.0[0] as f64, p.0[1] as f64, p.0[2] as f64],
        );
    }
    Ok(img)
}

/// Writes the image as 8-bit RGB PNG, clamping each channel to `[0, 255]`
/// and rounding to the nearest integer.
pub fn save_png(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = image::RgbImage::new(img.width() as u32, img.height() as u32);
    for (x, y, p) in out.enumerate_pixels_mut() {
        let c = img.get(x as usize, y as usize);
        p.0 = [
            c[0].round().clamp(0.0, 255.0) as u8,
            c[1].round().clamp(0.0, 255.0) as u8,
            c[2].round().clamp(0.0, 255.0) as u8,
        ];
    }
    out.save(path).map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::Format {
            path: path.to_path_buf(),
            reason: other.to_string(),
        },
    })
}

/// Adds independent zero-mean Gaussian noise to every channel, clamped to
/// `[0, 255]`. Deterministic for a given seed.
pub fn add_gaussian_noise(img: &Image, sigma: f64, seed: u64) -> Image {
    assert!(sigma >= 0.0, "noise sigma must be non-negative");
    if sigma == 0.0 {
        return img.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("finite sigma");
    let mut out = img.clone();
    for p in out.pixels_mut() {
        for c in p.iter_mut() {
            *c = (*c + normal.sample(&mut rng)).clamp(0.0, 255.0);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn color_distance_basics() {
        assert_eq!(color_distance([0.0; 3], [0.0; 3]), 0.0);
        assert_eq!(color_distance([255.0, 0.0, 0.0], [0.0; 3]), 255.0);
        // 1-2-2 Pythagorean triple.
        assert_eq!(color_distance([1.0, 2.0, 2.0], [0.0; 3]), 3.0);
    }

    #[test]
    fn png_round_trip_single_pixel() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("white.png");
        let img = Image::constant(1, 1, [255.0; 3]);
        save_png(&img, &path).unwrap();
        let back = load_png(&path).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn png_round_trip_2x2() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.png");
        let img = Image::from_fn(2, 2, |x, y| [x as f64 * 10.0, y as f64 * 20.0, 7.0]);
        save_png(&img, &path).unwrap();
        assert_eq!(load_png(&path).unwrap(), img);
    }

    #[test]
    fn png_save_clamps() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("clamp.png");
        let mut img = Image::new(2, 1);
        img.set(0, 0, [255.7, -3.0, 128.4]);
        save_png(&img, &path).unwrap();
        let back = load_png(&path).unwrap();
        assert_eq!(back.get(0, 0), [255.0, 0.0, 128.0]);
    }

    #[test]
    fn png_load_truncated_file_is_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("broken.png");
        // Valid magic, then nothing.
        std::fs::write(&path, b"\x89PNG\r\n\x1a\n\x00\x00").unwrap();
        assert!(load_png(&path).is_err());
    }

    #[test]
    fn png_load_missing_file_is_io_error() {
        match load_png("/nonexistent/nowhere.png") {
            Err(Error::Io { .. }) => {}
            other => panic!("expected io error, got {other:?}"),
        }
    }

    #[test]
    fn noise_zero_sigma_is_identity() {
        let img = Image::from_fn(8, 8, |x, y| [x as f64, y as f64, 3.0]);
        assert_eq!(add_gaussian_noise(&img, 0.0, 42), img);
    }

    #[test]
    fn noise_is_deterministic_per_seed() {
        let img = Image::constant(16, 16, [128.0; 3]);
        let a = add_gaussian_noise(&img, 10.0, 7);
        let b = add_gaussian_noise(&img, 10.0, 7);
        let c = add_gaussian_noise(&img, 10.0, 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn noise_sample_stddev_tracks_sigma() {
        // Mid-gray so clamping never bites at sigma=10.
        let img = Image::constant(64, 64, [128.0; 3]);
        let noisy = add_gaussian_noise(&img, 10.0, 1);
        let n = (noisy.pixel_count() * 3) as f64;
        let mean: f64 = noisy.pixels().iter().flatten().sum::<f64>() / n;
        let var: f64 = noisy
            .pixels()
            .iter()
            .flatten()
            .map(|c| (c - mean) * (c - mean))
            .sum::<f64>()
            / (n - 1.0);
        let sd = var.sqrt();
        assert!((sd - 10.0).abs() < 1.0, "sample sd {sd} outside 10 +/- 1");
    }

    #[test]
    fn regions_sidecar_round_trip() {
        let regions = vec![
            Region::new("a", PixelRect::new(0, 0, 9, 4)),
            Region::new("b_2", PixelRect::new(3, 7, 3, 7)),
        ];
        let text = regions_to_sidecar(&regions);
        assert_eq!(regions_from_sidecar(&text).unwrap(), regions);
    }

    proptest! {
        #[test]
        fn color_distance_triangle_inequality(
            a in prop::array::uniform3(0.0f64..=255.0),
            b in prop::array::uniform3(0.0f64..=255.0),
            c in prop::array::uniform3(0.0f64..=255.0),
        ) {
            let ab = color_distance(a, b);
            let bc = color_distance(b, c);
            let ac = color_distance(a, c);
            prop_assert!(ac <= ab + bc + 1e-9);
            prop_assert!((ab - color_distance(b, a)).abs() < 1e-12);
        }

        #[test]
        fn png_round_trip_integer_images(
            w in 1usize..6, h in 1usize..6,
            seed in any::<u64>(),
        ) {
            use rand::Rng;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let img = Image::from_fn(w, h, |_, _| {
                [rng.random_range(0u8..=255) as f64,
                 rng.random_range(0u8..=255) as f64,
                 rng.random_range(0u8..=255) as f64]
            });
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("rt.png");
            save_png(&img, &path).unwrap();
            prop_assert_eq!(load_png(&path).unwrap(), img);
        }
    }
}
