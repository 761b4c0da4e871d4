//! Deterministic synthetic challenge image.
//!
//! The fixture packs the structures that trip up discontinuity-preserving
//! smoothers into one image: a white→red gradient abutting an orange block
//! across a thin black line (bleeding/novel-color bait), four black
//! rectangles speckled with differently colored noise (non-convex features
//! that derail mean shift), a field of brightly colored noise blobs with
//! opposing hues adjacent (color cancellation bait), and six cleanly colored
//! control rectangles with mild zero-mean noise.
//!
//! The layout is proportional to the requested dimensions and every random
//! draw comes from one seeded ChaCha8 stream consumed in a fixed pass order,
//! so a given [`ChallengeSpec`] always produces the identical image. All
//! channels are quantized to the integer grid before returning, making the
//! in-memory fixture equal to its PNG round-trip.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{Color, Image, PixelRect, Region};
use crate::error::{Error, Result};

/// Parameters of the synthetic challenge image.
#[derive(Debug, Clone, PartialEq)]
pub struct ChallengeSpec {
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    /// Std-dev of the zero-mean noise in the six control rectangles.
    pub noise_sigma_control: f64,
    /// Amplitude scale of the colored noise in the four black rectangles and
    /// the background blobs.
    pub noise_amplitude_blocks: f64,
}

impl Default for ChallengeSpec {
    fn default() -> Self {
        ChallengeSpec {
            width: 256,
            height: 256,
            seed: 0,
            noise_sigma_control: 6.0,
            noise_amplitude_blocks: 55.0,
        }
    }
}

/// Generated fixture: the image plus labeled bounding boxes for metric
/// targeting.
#[derive(Debug, Clone, PartialEq)]
pub struct ChallengeImage {
    pub image: Image,
    pub regions: Vec<Region>,
}

impl ChallengeImage {
    pub fn region(&self, name: &str) -> Option<&Region> {
        self.regions.iter().find(|r| r.name == name)
    }
}

const WHITE: Color = [255.0, 255.0, 255.0];
const RED: Color = [220.0, 30.0, 30.0];
const ORANGE: Color = [245.0, 150.0, 30.0];
const BLACK: Color = [0.0, 0.0, 0.0];

const CONTROL_COLORS: [Color; 6] = [
    [220.0, 50.0, 50.0],
    [50.0, 200.0, 70.0],
    [60.0, 80.0, 230.0],
    [230.0, 200.0, 50.0],
    [200.0, 60.0, 220.0],
    [60.0, 210.0, 210.0],
];

// Bright blob palette with opposing hue pairs adjacent in the cycle, so
// neighbouring blobs invite color cancellation.
const BLOB_COLORS: [Color; 8] = [
    [230.0, 40.0, 40.0],
    [45.0, 225.0, 225.0],
    [45.0, 220.0, 45.0],
    [230.0, 45.0, 230.0],
    [50.0, 90.0, 235.0],
    [235.0, 220.0, 45.0],
    [245.0, 150.0, 40.0],
    [150.0, 60.0, 235.0],
];

const NOISY_RECT_COLORS: [(&str, Color); 4] = [
    ("noisy_red", [220.0, 45.0, 45.0]),
    ("noisy_green", [45.0, 210.0, 45.0]),
    ("noisy_yellow", [225.0, 215.0, 45.0]),
    ("noisy_purple", [150.0, 55.0, 215.0]),
];

const BLOB_SITES: usize = 12;
/// Width of every thin black separator line, in pixels.
pub const LINE_WIDTH: usize = 2;

/// Generates the challenge image for `spec`. Pure function of the spec:
/// repeated calls yield byte-identical buffers.
pub fn generate_challenge(spec: &ChallengeSpec) -> Result<ChallengeImage> {
    if spec.width < 128 || spec.height < 128 {
        return Err(Error::Spec(format!(
            "challenge image must be at least 128x128, got {}x{}",
            spec.width, spec.height
        )));
    }
    if spec.noise_sigma_control < 0.0 || spec.noise_amplitude_blocks < 0.0 {
        return Err(Error::Spec("noise levels must be non-negative".into()));
    }

    let (w, h) = (spec.width, spec.height);
    let mut img = Image::new(w, h);
    let mut regions = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    // Column layout: main area | 2px black line | control column.
    let col_x = w * 78 / 100;
    let ctrl_x0 = col_x + LINE_WIDTH;
    // Top band: gradient | 2px black line | orange.
    let band_y1 = h / 4 - 1;
    let sep_x = col_x * 55 / 100;
    let grad_end = sep_x - sep_x / 8; // last eighth is solid red
    let blob_y0 = band_y1 + 1;

    // Top band: white-to-red gradient, solid red strip, separator, orange.
    for y in 0..=band_y1 {
        for x in 0..col_x {
            let c = if x < grad_end {
                let t = x as f64 / (grad_end - 1) as f64;
                [
                    WHITE[0] + t * (RED[0] - WHITE[0]),
                    WHITE[1] + t * (RED[1] - WHITE[1]),
                    WHITE[2] + t * (RED[2] - WHITE[2]),
                ]
            } else if x < sep_x {
                RED
            } else if x < sep_x + LINE_WIDTH {
                BLACK
            } else {
                ORANGE
            };
            img.set(x, y, c);
        }
    }
    regions.push(Region::new("gradient", PixelRect::new(0, 0, sep_x - 1, band_y1)));
    regions.push(Region::new(
        "separator",
        PixelRect::new(sep_x, 0, sep_x + LINE_WIDTH - 1, band_y1),
    ));
    regions.push(Region::new(
        "orange",
        PixelRect::new(sep_x + LINE_WIDTH, 0, col_x - 1, band_y1),
    ));

    // Pass 1: blob sites.
    let blob_area = PixelRect::new(0, blob_y0, col_x - 1, h - 1);
    let mut sites: Vec<(f64, f64, Color)> = Vec::with_capacity(BLOB_SITES);
    for i in 0..BLOB_SITES {
        let sx = rng.random_range(blob_area.x0 as f64..=blob_area.x1 as f64);
        let sy = rng.random_range(blob_area.y0 as f64..=blob_area.y1 as f64);
        sites.push((sx, sy, BLOB_COLORS[i % BLOB_COLORS.len()]));
    }

    // Pass 2: blob noise over the whole bottom-left area (noisy rectangles
    // are painted over it afterwards, keeping the draw sequence independent
    // of their placement).
    let blob_noise = Normal::new(0.0, spec.noise_amplitude_blocks).expect("finite sigma");
    for (x, y) in blob_area.iter() {
        let (px, py) = (x as f64, y as f64);
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, (sx, sy, _)) in sites.iter().enumerate() {
            let d = (px - sx) * (px - sx) + (py - sy) * (py - sy);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        let base = sites[best].2;
        let c = [
            (base[0] + blob_noise.sample(&mut rng)).clamp(0.0, 255.0),
            (base[1] + blob_noise.sample(&mut rng)).clamp(0.0, 255.0),
            (base[2] + blob_noise.sample(&mut rng)).clamp(0.0, 255.0),
        ];
        img.set(x, y, c);
    }
    regions.push(Region::new("blobs", blob_area));

    // Pass 3: the four black rectangles with colored speckle noise inside a
    // 2px black frame.
    let bw = col_x;
    let bh = h - blob_y0;
    let rw = bw * 30 / 100;
    let rh = bh * 28 / 100;
    let anchors = [
        (bw * 8 / 100, bh * 10 / 100),
        (bw * 55 / 100, bh * 10 / 100),
        (bw * 8 / 100, bh * 58 / 100),
        (bw * 55 / 100, bh * 58 / 100),
    ];
    let speckle = Normal::new(0.0, spec.noise_amplitude_blocks * 0.3).expect("finite sigma");
    for (i, (name, dominant)) in NOISY_RECT_COLORS.iter().enumerate() {
        let (ax, ay) = anchors[i];
        let rect = PixelRect::new(ax, blob_y0 + ay, ax + rw - 1, blob_y0 + ay + rh - 1);
        for (x, y) in rect.iter() {
            img.set(x, y, BLACK);
        }
        for (x, y) in rect.inset(LINE_WIDTH).iter() {
            let c = if rng.random_range(0.0..1.0) < 0.45 {
                // Near-black speckle.
                let v = rng.random_range(0.0..25.0);
                [v, v, v]
            } else {
                [
                    (dominant[0] + speckle.sample(&mut rng)).clamp(0.0, 255.0),
                    (dominant[1] + speckle.sample(&mut rng)).clamp(0.0, 255.0),
                    (dominant[2] + speckle.sample(&mut rng)).clamp(0.0, 255.0),
                ]
            };
            img.set(x, y, c);
        }
        regions.push(Region::new(*name, rect));
    }

    // Column separator and the six control rectangles.
    for y in 0..h {
        for x in col_x..ctrl_x0 {
            img.set(x, y, BLACK);
        }
    }
    regions.push(Region::new(
        "column_separator",
        PixelRect::new(col_x, 0, ctrl_x0 - 1, h - 1),
    ));

    let ctrl_noise = Normal::new(0.0, spec.noise_sigma_control).expect("finite sigma");
    let slot_h = (h - 5 * LINE_WIDTH) / 6;
    let mut y_cursor = 0usize;
    for (i, color) in CONTROL_COLORS.iter().enumerate() {
        let y1 = if i == 5 { h - 1 } else { y_cursor + slot_h - 1 };
        let rect = PixelRect::new(ctrl_x0, y_cursor, w - 1, y1);
        for (x, y) in rect.iter() {
            let c = [
                (color[0] + ctrl_noise.sample(&mut rng)).clamp(0.0, 255.0),
                (color[1] + ctrl_noise.sample(&mut rng)).clamp(0.0, 255.0),
                (color[2] + ctrl_noise.sample(&mut rng)).clamp(0.0, 255.0),
            ];
            img.set(x, y, c);
        }
        regions.push(Region::new(format!("control_{i}"), rect));
        y_cursor = y1 + 1;
        if i < 5 {
            for y in y_cursor..y_cursor + LINE_WIDTH {
                for x in ctrl_x0..w {
                    img.set(x, y, BLACK);
                }
            }
            y_cursor += LINE_WIDTH;
        }
    }

    Ok(ChallengeImage {
        image: img.quantized(),
        regions,
    })
}
