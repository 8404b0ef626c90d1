//! Gray-scale images as hypercomplex vectors, noise corruption and recall
//! experiments.
//!
//! Bits of a pixel `x` are numbered `b_1..b_8` from the least significant.

use std::fmt::{self, Write as _};
use std::io::Cursor;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ColorType, ExtendedColorType, ImageFormat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::activations::{ActivationFn, ActivationKind};
use crate::algebra::{AlgebraSpec, HVector, Involution};
use crate::error::{Error, Result};
use crate::rcnn::{ExcitationFn, MemorySet, Network, NetworkConfig, UpdateMode};
use crate::scalar::Scalar;

/// Largest distance from the codomain accepted by [`decode`].
pub const DECODE_TOL: f64 = 0.5;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Image(format!("empty image {width}x{height}")));
        }
        if pixels.len() != width * height {
            return Err(Error::LengthMismatch {
                expected: width * height,
                found: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Uniformly random pixels.
    pub fn random<R: Rng + ?Sized>(width: usize, height: usize, rng: &mut R) -> Result<Self> {
        let mut pixels = vec![0u8; width * height];
        rng.fill(pixels.as_mut_slice());
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Decodes an 8-bit binary PGM (`P5`).
    pub fn from_pgm_bytes(bytes: &[u8]) -> Result<Self> {
        if !bytes.starts_with(b"P5") {
            return Err(Error::Image("not a binary PGM (P5) file".into()));
        }
        let img = image::load_from_memory_with_format(bytes, ImageFormat::Pnm)
            .map_err(|e| Error::Image(e.to_string()))?;
        if img.color() != ColorType::L8 {
            return Err(Error::Image(format!(
                "expected 8-bit gray, found {:?}",
                img.color()
            )));
        }
        let (w, h) = (img.width() as usize, img.height() as usize);
        Self::new(w, h, img.into_luma8().into_raw())
    }

    pub fn to_pgm_bytes(&self) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        PnmEncoder::new(Cursor::new(&mut buf))
            .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
            .encode(
                self.pixels.as_slice(),
                self.width as u32,
                self.height as u32,
                ExtendedColorType::L8,
            )
            .map_err(|e| Error::Image(e.to_string()))?;
        Ok(buf)
    }

    pub fn read_pgm(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes =
            std::fs::read(path).map_err(|e| Error::Image(format!("{}: {e}", path.display())))?;
        Self::from_pgm_bytes(&bytes)
    }

    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_pgm_bytes()?)
            .map_err(|e| Error::Image(format!("{}: {e}", path.display())))
    }
}

/// `count` random `width x height` images from one seed.
pub fn synthetic_images(
    count: usize,
    width: usize,
    height: usize,
    seed: u64,
) -> Result<Vec<GrayImage>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| GrayImage::random(width, height, &mut rng))
        .collect()
}

/// Per pixel `round(x + eta)` clamped to `[0, 255]`, `eta ~ N(0, stdev^2)`.
pub fn add_gaussian_noise(img: &GrayImage, stdev: f64, seed: u64) -> Result<GrayImage> {
    if stdev.is_nan() || stdev < 0.0 || !stdev.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "noise stdev must be >= 0, got {stdev}"
        )));
    }
    if stdev == 0.0 {
        return Ok(img.clone());
    }
    let normal = Normal::new(0.0, stdev).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pixels = img
        .pixels
        .iter()
        .map(|&x| {
            (x as f64 + normal.sample(&mut rng))
                .round()
                .clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage::new(img.width, img.height, pixels)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Codec {
    /// Eight `+-1` neurons per pixel.
    Bipolar8,
    /// `e^{2 pi x i / 256}`.
    ComplexPhase,
    /// `e^{2 pi x_1 i / 16} + e^{2 pi x_2 i / 16} j` with `x_1`, `x_2` the low
    /// and high nibbles.
    QuaternionTwin,
    /// `(2 b_1 - 1) + (2 b_2 - 1) i_1 + .. + (2 b_8 - 1) i_7`.
    OctonionBits,
}

impl Codec {
    pub const ALL: [Codec; 4] = [
        Codec::Bipolar8,
        Codec::ComplexPhase,
        Codec::QuaternionTwin,
        Codec::OctonionBits,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Codec::Bipolar8 => "bipolar8",
            Codec::ComplexPhase => "complex_phase",
            Codec::QuaternionTwin => "quaternion_twin",
            Codec::OctonionBits => "octonion_bits",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    pub fn algebra<T: Scalar>(self) -> AlgebraSpec<T> {
        match self {
            Codec::Bipolar8 => AlgebraSpec::reals(),
            Codec::ComplexPhase => AlgebraSpec::complex(),
            Codec::QuaternionTwin => AlgebraSpec::quaternion(),
            Codec::OctonionBits => AlgebraSpec::octonion(),
        }
    }

    pub fn involution(self) -> Involution {
        match self {
            Codec::Bipolar8 => Involution::Trivial,
            _ => Involution::Natural,
        }
    }

    pub fn activation_kind(self) -> ActivationKind {
        match self {
            Codec::Bipolar8 => ActivationKind::BipolarSign,
            Codec::ComplexPhase => ActivationKind::Csgn { k: 256 },
            Codec::QuaternionTwin => ActivationKind::TwinMultistate { k: 16 },
            Codec::OctonionBits => ActivationKind::SplitSign,
        }
    }

    pub fn activation<T: Scalar>(self) -> ActivationFn<T> {
        ActivationFn::new(self.activation_kind()).expect("codec resolution factors exceed 1")
    }

    pub fn dim(self) -> usize {
        match self {
            Codec::Bipolar8 => 1,
            Codec::ComplexPhase => 2,
            Codec::QuaternionTwin => 4,
            Codec::OctonionBits => 8,
        }
    }

    /// Neurons per pixel.
    pub fn neurons_per_pixel(self) -> usize {
        if self == Codec::Bipolar8 {
            8
        } else {
            1
        }
    }

    /// `max_{s in S} B(s, s)`: 1, 1, 2 and 8.
    pub fn self_form(self) -> usize {
        match self {
            Codec::Bipolar8 | Codec::ComplexPhase => 1,
            Codec::QuaternionTwin => 2,
            Codec::OctonionBits => 8,
        }
    }

    /// Exponential excitation with `alpha = a / (N m)` and `beta = e^{-a}`.
    pub fn excitation<T: Scalar>(self, a: f64, pixels: usize) -> Result<ExcitationFn<T>> {
        let scale = (pixels * self.neurons_per_pixel() * self.self_form()) as f64;
        ExcitationFn::exponential_scaled(T::lit(a), T::lit(scale))
    }

    /// Network configuration with exponential excitation for images of
    /// `pixels` pixels.
    pub fn network_config<T: Scalar>(self, a: f64, pixels: usize) -> Result<NetworkConfig<T>> {
        Ok(NetworkConfig::new(
            self.algebra(),
            self.involution(),
            self.activation(),
            self.excitation(a, pixels)?,
        ))
    }
}

impl fmt::Display for Codec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn sign<T: Scalar>(bit: bool) -> T {
    if bit {
        T::one()
    } else {
        -T::one()
    }
}

pub fn encode<T: Scalar>(img: &GrayImage, codec: Codec) -> HVector<T> {
    let act = codec.activation::<T>();
    let mut data = Vec::with_capacity(img.pixels.len() * codec.neurons_per_pixel() * codec.dim());
    for &x in &img.pixels {
        match codec {
            Codec::Bipolar8 | Codec::OctonionBits => {
                data.extend((0..8).map(|j| sign::<T>(x >> j & 1 == 1)));
            }
            Codec::ComplexPhase => data.extend_from_slice(&act.phasor(x as usize)),
            Codec::QuaternionTwin => {
                data.extend_from_slice(&act.phasor((x & 0x0f) as usize));
                data.extend_from_slice(&act.phasor((x >> 4) as usize));
            }
        }
    }
    HVector::new(codec.dim(), data).expect("codec dimension divides the data")
}

/// Inverse of [`encode`]; components are first snapped to the nearest
/// codomain element.
pub fn decode<T: Scalar>(
    v: &HVector<T>,
    codec: Codec,
    width: usize,
    height: usize,
) -> Result<GrayImage> {
    if v.dim() != codec.dim() {
        return Err(Error::DimensionMismatch {
            expected: codec.dim(),
            found: v.dim(),
        });
    }
    let pixels_len = width * height;
    if v.len() != pixels_len * codec.neurons_per_pixel() {
        return Err(Error::LengthMismatch {
            expected: pixels_len * codec.neurons_per_pixel(),
            found: v.len(),
        });
    }
    let act = codec.activation::<T>();
    let tol = T::lit(DECODE_TOL);
    let snap = |i: usize| -> Result<Vec<T>> {
        match act.nearest_codomain(v.component(i)) {
            Some((s, d)) if d <= tol => Ok(s),
            _ => Err(Error::Decode { index: i }),
        }
    };
    let phase = |re: T, im: T, k: usize| -> u8 {
        let step = T::TAU() / T::of_usize(k);
        let idx = (im.atan2(re) / step).round().to_i64().unwrap_or(0);
        idx.rem_euclid(k as i64) as u8
    };
    let mut pixels = Vec::with_capacity(pixels_len);
    for p in 0..pixels_len {
        let x = match codec {
            Codec::Bipolar8 => {
                let mut x = 0u8;
                for j in 0..8 {
                    if snap(8 * p + j)?[0] > T::zero() {
                        x |= 1 << j;
                    }
                }
                x
            }
            Codec::OctonionBits => {
                let s = snap(p)?;
                (0..8).fold(0u8, |x, j| if s[j] > T::zero() { x | 1 << j } else { x })
            }
            Codec::ComplexPhase => {
                let s = snap(p)?;
                phase(s[0], s[1], 256)
            }
            Codec::QuaternionTwin => {
                let s = snap(p)?;
                phase(s[0], s[1], 16) | phase(s[2], s[3], 16) << 4
            }
        };
        pixels.push(x);
    }
    GrayImage::new(width, height, pixels)
}

/// Parameters of a recall experiment for one codec.
#[derive(Clone, Debug, PartialEq)]
pub struct RecallConfig {
    pub codec: Codec,
    /// Excitation multiplier: `alpha = a / (N m)`, `beta = e^{-a}`.
    pub a: f64,
    pub modes: Vec<UpdateMode>,
    pub noise_levels: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub max_sweeps: usize,
}

impl RecallConfig {
    pub fn new(codec: Codec, noise_levels: Vec<f64>, trials: usize, seed: u64) -> Self {
        Self {
            codec,
            a: 20.0,
            modes: vec![UpdateMode::Synchronous, UpdateMode::Asynchronous],
            noise_levels,
            trials,
            seed,
            max_sweeps: 100,
        }
    }
}

/// One row of the success table.
#[derive(Clone, Debug, PartialEq)]
pub struct RecallRow {
    pub codec: Codec,
    pub mode: UpdateMode,
    pub noise_stdev: f64,
    pub trials: usize,
    pub successes: usize,
}

impl RecallRow {
    pub fn rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.successes as f64 / self.trials as f64
        }
    }
}

/// Stores `images` and, for every noise level and trial, corrupts one
/// randomly chosen image and runs the network in each mode. A trial succeeds
/// when the final state decodes to the original image exactly.
///
/// Trial `t` draws its image and noise from seed `seed + t`, so the same
/// corrupted input is used by every mode (and by every codec sharing the seed).
pub fn recall_experiment<T: Scalar>(
    cfg: &RecallConfig,
    images: &[GrayImage],
) -> Result<Vec<RecallRow>> {
    if cfg.trials == 0 {
        return Ok(Vec::new());
    }
    let first = images.first().ok_or(Error::EmptyMemorySet)?;
    let (w, h) = (first.width, first.height);
    if let Some(bad) = images.iter().find(|i| (i.width, i.height) != (w, h)) {
        return Err(Error::Image(format!(
            "image sizes differ: {w}x{h} vs {}x{}",
            bad.width, bad.height
        )));
    }
    let codec = cfg.codec;
    let act = codec.activation::<T>();
    let memories = MemorySet::new(images.iter().map(|i| encode::<T>(i, codec)).collect(), &act)?;
    let base = codec
        .network_config::<T>(cfg.a, w * h)?
        .with_max_sweeps(cfg.max_sweeps);
    let nets = cfg
        .modes
        .iter()
        .map(|&mode| Network::new(base.clone().with_mode(mode), memories.clone()))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for &stdev in &cfg.noise_levels {
        let outcomes: Vec<Vec<bool>> = (0..cfg.trials)
            .into_par_iter()
            .map(|t| -> Result<Vec<bool>> {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(t as u64));
                let target = rng.random_range(0..images.len());
                let noisy = add_gaussian_noise(&images[target], stdev, rng.random())?;
                let x0 = encode::<T>(&noisy, codec);
                nets.iter()
                    .map(|net| {
                        let run = net.run(&x0)?;
                        Ok(decode(&run.final_state, codec, w, h)? == images[target])
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        for (k, &mode) in cfg.modes.iter().enumerate() {
            rows.push(RecallRow {
                codec,
                mode,
                noise_stdev: stdev,
                trials: cfg.trials,
                successes: outcomes.iter().filter(|o| o[k]).count(),
            });
        }
    }
    Ok(rows)
}

/// CSV with columns `codec,mode,noise_stdev,trials,successes,rate`.
pub fn recall_csv(rows: &[RecallRow]) -> String {
    let mut out = String::from("codec,mode,noise_stdev,trials,successes,rate\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.codec,
            r.mode,
            r.noise_stdev,
            r.trials,
            r.successes,
            r.rate()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_pixel(x: u8) -> GrayImage {
        GrayImage::new(1, 1, vec![x]).unwrap()
    }

    #[test]
    fn pixel_encodings() {
        let z = encode::<f64>(&one_pixel(0), Codec::ComplexPhase);
        assert_eq!(z.as_slice(), &[1.0, 0.0]);
        let b = encode::<f64>(&one_pixel(255), Codec::Bipolar8);
        assert_eq!(b.len(), 8);
        assert!(b.as_slice().iter().all(|&v| v == 1.0));
        let b = encode::<f64>(&one_pixel(1), Codec::Bipolar8);
        assert_eq!(
            b.as_slice(),
            &[1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0]
        );
        let o = encode::<f64>(&one_pixel(0b1000_0001), Codec::OctonionBits);
        assert_eq!(
            o.as_slice(),
            &[1.0, -1.0, -1.0, -1.0, -1.0, -1.0, -1.0, 1.0]
        );
    }

    #[test]
    fn lengths_match_image_size() {
        let img = GrayImage::filled(32, 32, 7).unwrap();
        assert_eq!(encode::<f64>(&img, Codec::Bipolar8).len(), 8192);
        for c in [
            Codec::ComplexPhase,
            Codec::QuaternionTwin,
            Codec::OctonionBits,
        ] {
            assert_eq!(encode::<f64>(&img, c).len(), 1024);
        }
    }

    #[test]
    fn round_trip_every_pixel_value() {
        let img = GrayImage::new(16, 16, (0..=255).collect()).unwrap();
        for c in Codec::ALL {
            let v = encode::<f64>(&img, c);
            assert_eq!(decode(&v, c, 16, 16).unwrap(), img, "{c}");
            let v32 = encode::<f32>(&img, c);
            assert_eq!(decode(&v32, c, 16, 16).unwrap(), img, "{c} f32");
        }
    }

    #[test]
    fn decode_snaps_and_rejects() {
        let img = GrayImage::new(2, 1, vec![200, 13]).unwrap();
        let mut v = encode::<f64>(&img, Codec::ComplexPhase);
        v.component_mut(1)[0] += 1e-10;
        assert_eq!(decode(&v, Codec::ComplexPhase, 2, 1).unwrap(), img);
        v.component_mut(1).copy_from_slice(&[0.0, 0.0]);
        assert_eq!(
            decode(&v, Codec::ComplexPhase, 2, 1),
            Err(Error::Decode { index: 1 })
        );
    }

    #[test]
    fn zero_noise_is_identity() {
        let img = synthetic_images(1, 8, 8, 3).unwrap().remove(0);
        assert_eq!(add_gaussian_noise(&img, 0.0, 9).unwrap(), img);
        let a = add_gaussian_noise(&img, 30.0, 9).unwrap();
        assert_eq!(a, add_gaussian_noise(&img, 30.0, 9).unwrap());
        assert_ne!(a, img);
        assert!(add_gaussian_noise(&img, -1.0, 9).is_err());
    }

    #[test]
    fn pgm_round_trip() {
        let img = synthetic_images(1, 5, 3, 1).unwrap().remove(0);
        let bytes = img.to_pgm_bytes().unwrap();
        assert!(bytes.starts_with(b"P5"));
        assert_eq!(GrayImage::from_pgm_bytes(&bytes).unwrap(), img);
        assert!(GrayImage::from_pgm_bytes(b"P2\n1 1\n255\n0\n").is_err());
    }

    #[test]
    fn empty_trials_give_an_empty_table() {
        let imgs = synthetic_images(2, 4, 4, 1).unwrap();
        let cfg = RecallConfig::new(Codec::Bipolar8, vec![10.0], 0, 1);
        assert!(recall_experiment::<f64>(&cfg, &imgs).unwrap().is_empty());
    }

    #[test]
    fn csv_has_one_row_per_mode_and_level() {
        let imgs = synthetic_images(3, 4, 4, 1).unwrap();
        let cfg = RecallConfig::new(Codec::ComplexPhase, vec![0.0, 10.0], 2, 5);
        let rows = recall_experiment::<f64>(&cfg, &imgs).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows
            .iter()
            .filter(|r| r.noise_stdev == 0.0)
            .all(|r| r.successes == 2));
        let csv = recall_csv(&rows);
        assert!(csv.starts_with("codec,mode,noise_stdev,trials,successes,rate\n"));
        assert_eq!(csv.lines().count(), 5);
    }
}
