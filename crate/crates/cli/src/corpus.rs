//! Deterministic random-measure corpus for property and acceptance tests.
//!
//! The generator is a self-contained splitmix64 stream, so a given seed
//! yields byte-identical measures on every platform and toolchain. The
//! schedule cycles through pure-point, absolutely continuous, singular
//! continuous and mixed measures so every Lebesgue combination is exercised.

use apmeas_core::{Atom, Complex64, DensityPart, Measure, SingularPart, Window};

use apmeas_core::constructions::gallery_cantor;

/// splitmix64; passes through every 64-bit state exactly once.
#[derive(Debug, Clone)]
pub struct SplitMix(u64);

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        SplitMix(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.f64()
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

fn unit_disk(rng: &mut SplitMix) -> Complex64 {
    let r = rng.f64().sqrt();
    let th = rng.range(0.0, std::f64::consts::TAU);
    Complex64::new(r * th.cos(), r * th.sin())
}

fn random_atoms(rng: &mut SplitMix, max: u64) -> Vec<Atom> {
    let n = 1 + rng.below(max);
    (0..n)
        .map(|_| Atom::new(rng.range(-7.5, 7.5), unit_disk(rng)))
        .collect()
}

fn random_density(rng: &mut SplitMix) -> DensityPart {
    let samples: Vec<Complex64> = (0..64)
        .map(|_| Complex64::new(rng.range(-1.0, 1.0), 0.0))
        .collect();
    DensityPart::new(-8.0, 0.25, samples).expect("valid grid")
}

fn random_singular(rng: &mut SplitMix) -> SingularPart {
    let mass = rng.f64();
    let shift = rng.range(-7.0, 6.0);
    gallery_cantor(6)
        .expect("cantor")
        .scale(Complex64::new(mass, 0.0))
        .translate(shift)
        .sc
}

/// The seeded mixed-measure corpus on the window (-8, 8).
pub fn corpus(seed: u64, size: usize) -> Vec<Measure> {
    let trunc = Window::new(-8.0, 8.0).expect("window");
    let mut out = Vec::with_capacity(size);
    for i in 0..size {
        let mut rng = SplitMix::new(seed ^ (0x9e37 + i as u64).wrapping_mul(0x2545f4914f6cdd1d));
        let m = match i % 4 {
            0 => Measure::from_atoms(random_atoms(&mut rng, 20)),
            1 => Measure::from_density(random_density(&mut rng)),
            2 => Measure::from_singular(random_singular(&mut rng)),
            _ => {
                let mut m = Measure::from_atoms(random_atoms(&mut rng, 8));
                m.ac = Some(random_density(&mut rng));
                m.sc = random_singular(&mut rng);
                m
            }
        };
        out.push(m.with_truncation(trunc));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use apmeas_core::json::to_json;

    #[test]
    fn corpus_is_deterministic() {
        let a = corpus(42, 16);
        let b = corpus(42, 16);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(to_json(x), to_json(y));
        }
        let c = corpus(43, 16);
        assert!(a.iter().zip(&c).any(|(x, y)| to_json(x) != to_json(y)));
    }

    #[test]
    fn corpus_covers_component_schedule() {
        let ms = corpus(7, 8);
        assert!(!ms[0].pp.is_empty() && ms[0].ac.is_none() && ms[0].sc.is_empty());
        assert!(ms[1].pp.is_empty() && ms[1].ac.is_some() && ms[1].sc.is_empty());
        assert!(ms[2].pp.is_empty() && ms[2].ac.is_none() && !ms[2].sc.is_empty());
        assert!(!ms[3].pp.is_empty() && ms[3].ac.is_some() && !ms[3].sc.is_empty());
    }

    #[test]
    fn corpus_measures_are_translation_bounded() {
        for m in corpus(11, 12) {
            let cert = m.tb_certificate();
            assert!(cert.is_finite());
            // every unit window inside the truncation respects the certificate
            let tv = m.total_variation();
            let mut x = -8.0;
            while x + 1.0 <= 8.0 {
                let w = Window::new(x, x + 1.0).unwrap();
                assert!(tv.mass(&w).unwrap() <= cert + 1e-9);
                x += 0.37;
            }
        }
    }
}
