//! Desk-scale diffraction: finite-window autocorrelation, numerical Fourier
//! transform on a frequency grid, and Bragg-peak extraction.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::convolution::{convolve_finite, VanHoveSequence};
use crate::error::{Error, Result};
use crate::measure::Measure;

/// Finite-n autocorrelation
/// `gamma_n = (1/|A_n|) * (omega|_{A_n}) * (omega|_{A_n})~`,
/// where `~` is reflection composed with conjugation. Pure-point input yields
/// coefficients on the difference set of the atom positions.
pub fn autocorrelation(omega: &Measure, vh: &VanHoveSequence, n: usize) -> Result<Measure> {
    let region = vh.region(n)?;
    if let Some(w) = &omega.truncation {
        if !w.contains_window(&region) {
            return Err(Error::TruncationTooSmall);
        }
    }
    let cut = omega.restrict(&region);
    let mirrored = cut.reflect().conjugate();
    let conv = convolve_finite(&cut, &mirrored)?;
    Ok(conv.scale(Complex64::new(1.0 / region.len(), 0.0)))
}

/// Spectral window applied before the Fourier sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Taper {
    None,
    Triangular,
}

/// One extracted Bragg peak.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Peak {
    pub freq: f64,
    pub intensity: f64,
}

/// A sampled diffraction pattern on a uniform frequency grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Spectrum {
    pub freq_origin: f64,
    pub freq_step: f64,
    pub intensities: Vec<f64>,
    /// Averaging-window length |A_n| the autocorrelation was taken over;
    /// calibrates intensities so a unit comb reports per-peak mass near 1.
    pub window_length: f64,
    pub taper: Taper,
    pub peaks: Vec<Peak>,
    pub pp_mass_fraction: f64,
}

impl Spectrum {
    pub fn freq_at(&self, i: usize) -> f64 {
        self.freq_origin + self.freq_step * i as f64
    }
}

/// Numerical Fourier transform of a finite (autocorrelation) measure on the
/// frequency grid `{origin + k * step}`.
///
/// Intensity at frequency k is `Re sum w_j taper(x_j) exp(-2 pi i k x_j)`
/// plus the corresponding density integral, normalized so that Bragg peaks
/// report their mass: by `|A|` without taper, by `2|A|/3` with the triangular
/// taper (the taper rides on top of the intrinsic finite-window envelope).
pub fn fourier(
    gamma: &Measure,
    freq_origin: f64,
    freq_step: f64,
    freq_count: usize,
    taper: Taper,
    window_length: f64,
) -> Result<Spectrum> {
    if freq_step <= 0.0 || !freq_step.is_finite() || freq_count == 0 {
        return Err(Error::BadParams("empty frequency grid".into()));
    }
    if window_length <= 0.0 || !window_length.is_finite() {
        return Err(Error::BadParams("window length must be positive".into()));
    }
    let l = window_length;
    let taper_at = move |x: f64| -> f64 {
        match taper {
            Taper::None => 1.0,
            Taper::Triangular => (1.0 - x.abs() / l).max(0.0),
        }
    };
    let norm = match taper {
        Taper::None => l,
        Taper::Triangular => 2.0 * l / 3.0,
    };

    // tapered atoms (pp and sc realizations alike carry plain weights here)
    let atoms: Vec<(f64, Complex64)> = gamma
        .pp
        .atoms()
        .iter()
        .chain(gamma.sc.atoms())
        .map(|a| (a.pos, a.weight * taper_at(a.pos)))
        .filter(|(_, w)| w.norm() > 0.0)
        .collect();
    let pieces = gamma.ac.as_ref().map(|d| d.pieces()).unwrap_or_default();

    let intensities: Vec<f64> = (0..freq_count)
        .into_par_iter()
        .map(|i| {
            let k = freq_origin + freq_step * i as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, w) in &atoms {
                let phase = -2.0 * std::f64::consts::PI * k * x;
                acc += w * Complex64::new(phase.cos(), phase.sin());
            }
            for p in &pieces {
                acc += p.value * segment_transform(p.a, p.b, k, taper, l);
            }
            acc.re / norm
        })
        .collect();

    Ok(Spectrum {
        freq_origin,
        freq_step,
        intensities,
        window_length,
        taper,
        peaks: Vec::new(),
        pp_mass_fraction: 0.0,
    })
}

/// Exact `int_a^b taper(x) exp(-2 pi i k x) dx` for the piecewise-linear
/// tapers in use; splits at 0 so the taper is linear on each side.
fn segment_transform(a: f64, b: f64, k: f64, taper: Taper, l: f64) -> Complex64 {
    match taper {
        Taper::None => linear_osc_integral(a, b, k, 1.0, 0.0),
        Taper::Triangular => {
            let mut acc = Complex64::new(0.0, 0.0);
            let cuts = [a, 0.0f64.clamp(a, b), b];
            for s in cuts.windows(2) {
                let (x0, x1) = (s[0], s[1]);
                if x0 >= x1 {
                    continue;
                }
                // taper = 1 - |x|/l = alpha + beta x on this side
                let (alpha, beta) = if x1 <= 0.0 {
                    (1.0, 1.0 / l)
                } else {
                    (1.0, -1.0 / l)
                };
                acc += linear_osc_integral(x0, x1, k, alpha, beta);
            }
            acc
        }
    }
}

/// `int_a^b (alpha + beta x) exp(-2 pi i k x) dx`, switching to a series for
/// small |k (b - a)| to avoid cancellation.
fn linear_osc_integral(a: f64, b: f64, k: f64, alpha: f64, beta: f64) -> Complex64 {
    let w = -2.0 * std::f64::consts::PI * k;
    let len = b - a;
    if (w * len).abs() < 1e-6 {
        // exp(i w x) ~ 1 + i w x - (w x)^2/2 around the midpoint
        let mid = 0.5 * (a + b);
        let e_mid = Complex64::new((w * mid).cos(), (w * mid).sin());
        let c0 = alpha + beta * mid;
        let i_w = Complex64::new(0.0, w);
        // int_{-h}^{h} (c0 + beta u)(1 + i w u - (w u)^2 / 2) du, h = len/2
        let h = 0.5 * len;
        let int0 = 2.0 * h * c0 * (1.0 - (w * h).powi(2) / 6.0);
        let int1 = beta * i_w * (2.0 * h * h * h / 3.0) * Complex64::new(1.0, 0.0)
            + c0 * i_w * Complex64::new(0.0, 0.0);
        return e_mid * (Complex64::new(int0, 0.0) + int1);
    }
    let iw = Complex64::new(0.0, w);
    let ea = Complex64::new((w * a).cos(), (w * a).sin());
    let eb = Complex64::new((w * b).cos(), (w * b).sin());
    // int (alpha + beta x) e^{iwx} dx = e^{iwx} ((alpha + beta x)/(iw) - beta/(iw)^2)
    let f = |x: f64, e: Complex64| e * (Complex64::new(alpha + beta * x, 0.0) / iw - Complex64::new(beta, 0.0) / (iw * iw));
    f(b, eb) - f(a, ea)
}

/// Extract local maxima above `threshold` as Bragg peaks and split the grid
/// mass into a pure-point part (mass inside the peak lobes) and the residual
/// continuous floor.
pub fn peak_split(s: &Spectrum, threshold: f64) -> (Vec<Peak>, f64, f64) {
    let v = &s.intensities;
    let n = v.len();
    let mut peaks: Vec<(usize, f64)> = Vec::new();
    for i in 0..n {
        let left = if i == 0 { f64::NEG_INFINITY } else { v[i - 1] };
        let right = if i + 1 == n { f64::NEG_INFINITY } else { v[i + 1] };
        if v[i] > threshold && v[i] >= left && v[i] > right {
            peaks.push((i, v[i]));
        }
    }
    peaks.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());

    let mut claimed = vec![false; n];
    let mut out_peaks = Vec::with_capacity(peaks.len());
    let mut peak_mass = 0.0f64;
    for (i, height) in peaks {
        if claimed[i] {
            continue;
        }
        out_peaks.push(Peak {
            freq: s.freq_at(i),
            intensity: height,
        });
        let floor = 0.005 * height;
        let mut lo = i;
        while lo > 0 && !claimed[lo - 1] && v[lo - 1] >= floor && v[lo - 1] <= v[lo] {
            lo -= 1;
        }
        let mut hi = i;
        while hi + 1 < n && !claimed[hi + 1] && v[hi + 1] >= floor && v[hi + 1] <= v[hi] {
            hi += 1;
        }
        for j in lo..=hi {
            if !claimed[j] {
                claimed[j] = true;
                peak_mass += v[j].max(0.0) * s.freq_step;
            }
        }
    }

    let total_mass: f64 = v.iter().map(|x| x.max(0.0)).sum::<f64>() * s.freq_step;
    let fraction = if total_mass > 0.0 {
        (peak_mass / total_mass).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let span = s.freq_step * n as f64;
    let continuous_floor = if span > 0.0 {
        (total_mass - peak_mass).max(0.0) / span
    } else {
        0.0
    };
    (out_peaks, continuous_floor, fraction)
}

/// Fourier transform followed by peak extraction, with the peak data written
/// back into the spectrum.
pub fn spectrum_with_peaks(
    gamma: &Measure,
    freq_origin: f64,
    freq_step: f64,
    freq_count: usize,
    taper: Taper,
    window_length: f64,
    threshold: f64,
) -> Result<Spectrum> {
    let mut s = fourier(gamma, freq_origin, freq_step, freq_count, taper, window_length)?;
    let (peaks, _floor, fraction) = peak_split(&s, threshold);
    s.peaks = peaks;
    s.pp_mass_fraction = fraction;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Atom;
    use crate::window::Window;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn integer_comb(r: f64) -> Measure {
        let atoms: Vec<Atom> = (-(r as i64)..=(r as i64))
            .map(|k| Atom::new(k as f64, c(1.0)))
            .filter(|a| a.pos.abs() < r)
            .collect();
        Measure::from_atoms(atoms).with_truncation(Window::new(-r, r).unwrap())
    }

    #[test]
    fn autocorrelation_of_comb_counts_pairs() {
        let comb = integer_comb(60.0);
        let vh = VanHoveSequence::linear(50);
        let g = autocorrelation(&comb, &vh, 50).unwrap();
        let at = |k: f64| {
            g.pp
                .atoms()
                .iter()
                .find(|a| (a.pos - k).abs() < 1e-9)
                .map(|a| a.weight.re)
                .unwrap_or(0.0)
        };
        // 99 atoms in the open window: coefficient (99 - |k|)/100
        for k in [0i64, 1, 5, 50] {
            let expect = (99 - k) as f64 / 100.0;
            assert!((at(k as f64) - expect).abs() < 1e-12, "lag {k}");
        }
        // hermitian symmetry
        for a in g.pp.atoms() {
            let m = at(-a.pos);
            assert!((m - a.weight.re).abs() < 1e-12);
        }
    }

    #[test]
    fn autocorrelation_of_zero() {
        let z = Measure::zero().with_truncation(Window::new(-60.0, 60.0).unwrap());
        let vh = VanHoveSequence::linear(50);
        let g = autocorrelation(&z, &vh, 50).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn truncation_too_small() {
        let comb = integer_comb(10.0);
        let vh = VanHoveSequence::linear(50);
        assert_eq!(
            autocorrelation(&comb, &vh, 50),
            Err(Error::TruncationTooSmall)
        );
    }

    #[test]
    fn dirac_flat_spectrum() {
        let g = Measure::dirac(0.0, c(1.0));
        let s = fourier(&g, 0.0, 0.25, 9, Taper::None, 1.0).unwrap();
        for v in &s.intensities {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn comb_pipeline_peaks_near_unity() {
        let comb = integer_comb(60.0);
        let vh = VanHoveSequence::linear(50);
        let g = autocorrelation(&comb, &vh, 50).unwrap();
        let s = spectrum_with_peaks(&g, 0.0, 1e-3, 3001, Taper::Triangular, 100.0, 0.3).unwrap();
        // peaks at integer frequencies with intensity near the squared density
        for f0 in [0.0f64, 1.0, 2.0, 3.0] {
            let peak = s
                .peaks
                .iter()
                .find(|p| (p.freq - f0).abs() < 2e-3)
                .unwrap_or_else(|| panic!("no peak near {f0}"));
            assert!(
                peak.intensity > 0.9 && peak.intensity < 1.05,
                "peak {} -> {}",
                f0,
                peak.intensity
            );
        }
        // inter-peak floor stays low under the nonnegative taper
        let inter = s
            .intensities
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let f = s.freq_at(*i);
                (f - f.round()).abs() > 0.2
            })
            .map(|(_, v)| *v)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(inter <= 0.02, "floor {inter}");
        assert!(s.pp_mass_fraction >= 0.95, "fraction {}", s.pp_mass_fraction);
    }

    #[test]
    fn mass_conservation_against_lag_zero() {
        // total grid mass over a band ending between Bragg peaks matches
        // gamma(0) * band / normalization within 1%
        let comb = integer_comb(60.0);
        let vh = VanHoveSequence::linear(50);
        let g = autocorrelation(&comb, &vh, 50).unwrap();
        let c0 = g
            .pp
            .atoms()
            .iter()
            .find(|a| a.pos.abs() < 1e-9)
            .unwrap()
            .weight
            .re;
        let fstep = 1e-3f64;
        let fmax = 5.5f64;
        let count = (fmax / fstep).round() as usize + 1;
        let s = fourier(&g, 0.0, fstep, count, Taper::Triangular, 100.0).unwrap();
        let total: f64 = s.intensities.iter().map(|x| x.max(0.0)).sum::<f64>() * fstep;
        let predicted = c0 * fmax / (2.0 * 100.0 / 3.0);
        assert!(
            (total - predicted).abs() / predicted < 0.01,
            "total {total} vs predicted {predicted}"
        );
    }

    #[test]
    fn window_doubling_keeps_peak_intensities() {
        let peak_at_one = |r: f64, n: usize| -> f64 {
            let comb = integer_comb(r);
            let vh = VanHoveSequence::linear(n);
            let g = autocorrelation(&comb, &vh, n).unwrap();
            let s = fourier(&g, 0.0, 1e-3, 1501, Taper::Triangular, 2.0 * n as f64).unwrap();
            s.intensities[1000]
        };
        let a = peak_at_one(60.0, 50);
        let b = peak_at_one(110.0, 100);
        assert!((a - b).abs() / a < 0.10, "intensities {a} vs {b}");
        assert!(a > 0.9 && b > 0.9);
    }

    #[test]
    fn taper_positivity() {
        let comb = integer_comb(60.0);
        let vh = VanHoveSequence::linear(50);
        let g = autocorrelation(&comb, &vh, 50).unwrap();
        let s = fourier(&g, 0.0, 1e-3, 3001, Taper::Triangular, 100.0).unwrap();
        let min = s.intensities.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(min >= -1e-6, "min {min}");
    }

    #[test]
    fn flat_spectrum_no_peaks() {
        let s = Spectrum {
            freq_origin: 0.0,
            freq_step: 0.01,
            intensities: vec![0.5; 101],
            window_length: 10.0,
            taper: Taper::None,
            peaks: Vec::new(),
            pp_mass_fraction: 0.0,
        };
        let (peaks, _floor, fraction) = peak_split(&s, 1.0);
        assert!(peaks.is_empty());
        assert_eq!(fraction, 0.0);
    }

    #[test]
    fn oscillatory_integral_matches_quadrature() {
        for (a, b, k) in [(0.0, 1.0, 0.7), (-2.0, 1.5, 0.0), (0.3, 0.9, 3.2), (0.0, 2.0, 1e-8)] {
            let exact = linear_osc_integral(a, b, k, 1.0, 0.25);
            let n = 40_000;
            let h = (b - a) / n as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let x = a + h * (i as f64 + 0.5);
                let ph = -2.0 * std::f64::consts::PI * k * x;
                acc += Complex64::new(ph.cos(), ph.sin()) * (1.0 + 0.25 * x) * h;
            }
            assert!((exact - acc).norm() < 1e-7, "a={a} b={b} k={k}: {exact} vs {acc}");
        }
    }
}
