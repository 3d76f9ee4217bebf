//! Convolutions of measures with test functions and with finite measures,
//! plus van Hove averaging (the finite-n Eberlein convolution) and the
//! boundary-ratio diagnostics that justify it.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measure::{Atom, DensityPart, Measure, PairingView, Piece, SingularPart};
use crate::norms;
use crate::testfn::TestFunction;
use crate::window::Window;

/// Values of a continuous function on a uniform grid together with the
/// validity region inside which the samples are edge-safe.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub origin: f64,
    pub step: f64,
    pub samples: Vec<Complex64>,
    /// Closed interval of edge-safe sample positions.
    pub valid: (f64, f64),
}

impl SampledFunction {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn x_at(&self, i: usize) -> f64 {
        self.origin + self.step * i as f64
    }

    /// Sup-norm over the samples inside the validity region.
    pub fn sup_norm(&self) -> f64 {
        self.samples
            .iter()
            .enumerate()
            .filter(|(i, _)| {
                let x = self.x_at(*i);
                self.valid.0 <= x && x <= self.valid.1
            })
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
    }

    /// Position of the last sample.
    pub fn last_x(&self) -> f64 {
        self.origin + self.step * self.samples.len().saturating_sub(1) as f64
    }
}

/// A uniform output grid request.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub origin: f64,
    pub step: f64,
    pub len: usize,
}

impl GridSpec {
    /// Closed interval from the first to the last sample position.
    pub fn span(&self) -> (f64, f64) {
        (
            self.origin,
            self.origin + self.step * self.len.saturating_sub(1) as f64,
        )
    }
}

/// Nested symmetric averaging regions `A_n = (-r_n, r_n)`.
#[derive(Debug, Clone)]
pub struct VanHoveSequence {
    radii: Vec<f64>,
}

impl VanHoveSequence {
    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.is_empty()
            || radii.iter().any(|r| !r.is_finite() || *r <= 0.0)
            || radii.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::BadParams(
                "van Hove radii must be finite, positive and strictly increasing".into(),
            ));
        }
        Ok(VanHoveSequence { radii })
    }

    /// The standard sequence `A_n = (-n, n)` for `n = 1..=n_max`.
    pub fn linear(n_max: usize) -> Self {
        VanHoveSequence {
            radii: (1..=n_max).map(|n| n as f64).collect(),
        }
    }

    pub fn radius(&self, n: usize) -> Result<f64> {
        if n == 0 || n > self.radii.len() {
            return Err(Error::VanHoveIndex(n));
        }
        Ok(self.radii[n - 1])
    }

    pub fn region(&self, n: usize) -> Result<Window> {
        let r = self.radius(n)?;
        Window::new(-r, r)
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }
}

/// Exact length of the K-boundary of `A_n = (-r, r)` relative to `|A_n|`,
/// where the K-boundary of an open set A is
/// `(closure(A + K) \ A) union (((complement A) - K) intersect closure A)`.
pub fn boundary_ratio(vh: &VanHoveSequence, k_lo: f64, k_hi: f64, n: usize) -> Result<f64> {
    if k_lo > k_hi {
        return Err(Error::BadParams("K must satisfy k_lo <= k_hi".into()));
    }
    let r = vh.radius(n)?;
    // closure(A+K) \ A = [-r + k_lo, -r] u [r, r + k_hi]  (clipped to be nonempty)
    // ((R \ A) - K) n closure(A) = [-r, -r - k_lo] u [r - k_hi, r]
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let push = |a: f64, b: f64, iv: &mut Vec<(f64, f64)>| {
        if b > a {
            iv.push((a.max(-r - k_hi.abs().max(k_lo.abs())), b));
        }
    };
    push(-r + k_lo, -r, &mut intervals);
    push(r, r + k_hi, &mut intervals);
    push(-r, -r - k_lo, &mut intervals);
    push(r - k_hi, r, &mut intervals);
    intervals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in intervals {
        match cur {
            None => cur = Some((a, b)),
            Some((ca, cb)) => {
                if a <= cb {
                    cur = Some((ca, cb.max(b)));
                } else {
                    total += cb - ca;
                    cur = Some((a, b));
                }
            }
        }
    }
    if let Some((ca, cb)) = cur {
        total += cb - ca;
    }
    Ok(total / (2.0 * r))
}

/// `(mu * f)(x) = mu(y -> f(x - y))` evaluated on a uniform grid.
///
/// Every requested grid point must have its dependence cone
/// `x - supp(f)` inside the truncation window of `mu`.
pub fn convolve_mf(m: &Measure, f: &TestFunction, grid: GridSpec) -> Result<SampledFunction> {
    if grid.len == 0 || grid.step <= 0.0 {
        return Err(Error::BadParams("empty output grid".into()));
    }
    let fdag = f.reflect();
    let (s0, s1) = f.support_hull().unwrap_or((0.0, 0.0));
    if let Some(w) = &m.truncation {
        let (glo, ghi) = grid.span();
        // dependence cone of the whole grid
        if !w.contains_closed(glo - s1, ghi - s0) {
            return Err(Error::EdgeContamination);
        }
    }
    let view = PairingView::of(m);
    let samples: Vec<Complex64> = (0..grid.len)
        .into_par_iter()
        .map(|i| {
            let x = grid.origin + grid.step * i as f64;
            view.pairing_translated(&fdag, x)
        })
        .collect();
    Ok(SampledFunction {
        origin: grid.origin,
        step: grid.step,
        samples,
        valid: grid.span(),
    })
}

/// Largest grid of the given step on which `mu * f` is edge-safe.
pub fn safe_grid(m: &Measure, f: &TestFunction, step: f64) -> Result<GridSpec> {
    let (s0, s1) = f.support_hull().unwrap_or((0.0, 0.0));
    let (lo, hi) = match &m.truncation {
        Some(w) => (w.lo + s1, w.hi + s0),
        None => {
            let (dlo, dhi) = m.data_hull().unwrap_or((0.0, 0.0));
            (dlo + s0, dhi + s1)
        }
    };
    if lo >= hi {
        return Err(Error::EdgeContamination);
    }
    let len = ((hi - lo) / step).floor() as usize + 1;
    Ok(GridSpec {
        origin: lo,
        step,
        len,
    })
}

fn support_hull_of(m: &Measure) -> Option<(f64, f64)> {
    m.data_hull()
}

/// Convolution of a (possibly truncated) measure with a finite measure of
/// compact support. Lebesgue components combine by the classical rules:
/// pp*pp stays pure point, anything involving ac becomes ac, pp*sc and sc*sc
/// stay singular continuous. The result's truncation shrinks by the support
/// of the finite factor.
pub fn convolve_mm(a: &Measure, b: &Measure) -> Result<Measure> {
    match (&a.truncation, &b.truncation) {
        (Some(_), Some(_)) => Err(Error::NonFiniteConvolver),
        _ => convolve_pair(a, b),
    }
}

/// Convolution of two compactly realized measures, ignoring truncation tags.
/// Used for van Hove averages where both factors are exact restrictions of
/// faithfully realized measures and hence fully known.
pub(crate) fn convolve_finite(a: &Measure, b: &Measure) -> Result<Measure> {
    let mut a = a.clone();
    a.truncation = None;
    let mut b = b.clone();
    b.truncation = None;
    convolve_pair(&a, &b)
}

fn convolve_pair(a: &Measure, b: &Measure) -> Result<Measure> {
    // resulting truncation: shrink the truncated side by the other's support
    let truncation = match (&a.truncation, &b.truncation) {
        (None, None) => None,
        (Some(w), None) => shrink_by_support(w, b)?,
        (None, Some(w)) => shrink_by_support(w, a)?,
        (Some(_), Some(_)) => return Err(Error::NonFiniteConvolver),
    };

    let _zero_c = Complex64::new(0.0, 0.0);

    // pure point x pure point
    let mut pp_atoms: Vec<Atom> = Vec::new();
    for x in a.pp.atoms() {
        for y in b.pp.atoms() {
            pp_atoms.push(Atom::new(x.pos + y.pos, x.weight * y.weight));
        }
    }

    // singular outputs
    let mut sc_atoms: Vec<Atom> = Vec::new();
    let cross = |xs: &[Atom], ys: &[Atom], out: &mut Vec<Atom>| {
        for x in xs {
            for y in ys {
                out.push(Atom::new(x.pos + y.pos, x.weight * y.weight));
            }
        }
    };
    cross(a.pp.atoms(), b.sc.atoms(), &mut sc_atoms);
    cross(a.sc.atoms(), b.pp.atoms(), &mut sc_atoms);
    cross(a.sc.atoms(), b.sc.atoms(), &mut sc_atoms);

    // absolutely continuous outputs
    let mut ac_contribs: Vec<(f64, Complex64, DensityPart)> = Vec::new(); // (shift, scale, density)
    let mut ac_ac: Option<(DensityPart, DensityPart)> = None;
    if let Some(da) = &a.ac {
        for y in b.pp.atoms().iter().chain(b.sc.atoms()) {
            ac_contribs.push((y.pos, y.weight, da.clone()));
        }
    }
    if let Some(db) = &b.ac {
        for x in a.pp.atoms().iter().chain(a.sc.atoms()) {
            ac_contribs.push((x.pos, x.weight, db.clone()));
        }
    }
    if let (Some(da), Some(db)) = (&a.ac, &b.ac) {
        if !da.is_empty() && !db.is_empty() {
            ac_ac = Some((da.clone(), db.clone()));
        }
    }

    let ac = build_ac_output(&ac_contribs, &ac_ac)?;

    Ok(Measure {
        pp: crate::measure::PurePointPart::new(pp_atoms),
        ac,
        sc: SingularPart::from_atoms(sc_atoms),
        truncation,
    })
}

fn shrink_by_support(w: &Window, finite: &Measure) -> Result<Option<Window>> {
    let (s0, s1) = match support_hull_of(finite) {
        Some(h) => h,
        None => return Ok(Some(*w)), // zero measure: convolution is zero anyway
    };
    let lo = w.lo + s1;
    let hi = w.hi + s0;
    if lo >= hi {
        return Err(Error::TruncationTooSmall);
    }
    Ok(Some(Window { lo, hi }))
}

/// Assemble the ac component of a convolution from shifted copies of a
/// density (atom x density terms) and at most one density x density term.
fn build_ac_output(
    contribs: &[(f64, Complex64, DensityPart)],
    ac_ac: &Option<(DensityPart, DensityPart)>,
) -> Result<Option<DensityPart>> {
    if contribs.is_empty() && ac_ac.is_none() {
        return Ok(None);
    }

    // exact path: a single shifted copy needs no resampling
    if contribs.len() == 1 && ac_ac.is_none() {
        let (shift, scale, d) = &contribs[0];
        return Ok(Some(d.translate(*shift).map_values(|v| v * scale)));
    }

    // aligned path: all shifts integer multiples of a common grid step
    if ac_ac.is_none() {
        let step = contribs[0].2.step;
        let aligned = contribs.iter().all(|(shift, _, d)| {
            (d.step - step).abs() <= 1e-12 * step && {
                let k = (shift + d.origin - contribs[0].2.origin - contribs[0].0) / step;
                (k - k.round()).abs() <= 1e-9
            }
        }) && contribs.iter().all(|(_, _, d)| d.clip.is_none());
        if aligned {
            let base_origin = contribs[0].2.origin + contribs[0].0;
            let mut lo_k = i64::MAX;
            let mut hi_k = i64::MIN;
            for (shift, _, d) in contribs {
                let k0 = ((d.origin + shift - base_origin) / step).round() as i64;
                lo_k = lo_k.min(k0);
                hi_k = hi_k.max(k0 + d.samples.len() as i64);
            }
            let mut samples = vec![Complex64::new(0.0, 0.0); (hi_k - lo_k) as usize];
            for (shift, scale, d) in contribs {
                let k0 = ((d.origin + shift - base_origin) / step).round() as i64;
                for (i, v) in d.samples.iter().enumerate() {
                    samples[(k0 - lo_k) as usize + i] += v * scale;
                }
            }
            return Ok(Some(DensityPart::new(
                base_origin + lo_k as f64 * step,
                step,
                samples,
            )?));
        }
    }

    // general path: resample everything onto the finest involved grid,
    // cell value = exact average of the true convolution over the cell
    let mut step = f64::INFINITY;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (shift, _, d) in contribs {
        step = step.min(d.step);
        if let Some((a, b)) = d.hull() {
            lo = lo.min(a + shift);
            hi = hi.max(b + shift);
        }
    }
    if let Some((da, db)) = ac_ac {
        step = step.min(da.step.min(db.step));
        if let (Some((a1, b1)), Some((a2, b2))) = (da.hull(), db.hull()) {
            lo = lo.min(a1 + a2);
            hi = hi.max(b1 + b2);
        }
    }
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Ok(None);
    }
    let cells = ((hi - lo) / step).ceil() as usize;
    if cells > 20_000_000 {
        return Err(Error::BadParams("convolution output grid too large".into()));
    }

    // prefix integrals of the shifted-copy densities
    let piece_lists: Vec<(f64, Complex64, Vec<Piece>)> = contribs
        .iter()
        .map(|(shift, scale, d)| (*shift, *scale, d.pieces()))
        .collect();

    let conv_pieces: Option<(Vec<Piece>, Vec<Piece>)> =
        ac_ac.as_ref().map(|(da, db)| (da.pieces(), db.pieces()));

    let samples: Vec<Complex64> = (0..cells)
        .into_par_iter()
        .map(|k| {
            let x0 = lo + step * k as f64;
            let x1 = lo + step * (k + 1) as f64;
            let mut acc = Complex64::new(0.0, 0.0);
            for (shift, scale, pieces) in &piece_lists {
                acc += scale * integral_over(pieces, x0 - shift, x1 - shift);
            }
            if let Some((pa, pb)) = &conv_pieces {
                acc += conv_cell_average_numerator(pa, pb, x0, x1);
            }
            acc / step
        })
        .collect();

    Ok(Some(DensityPart::new(lo, step, samples)?))
}

fn integral_over(pieces: &[Piece], lo: f64, hi: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for p in pieces {
        let a = p.a.max(lo);
        let b = p.b.min(hi);
        if a < b {
            acc += p.value * (b - a);
        }
    }
    acc
}

/// Exact integral over `[x0, x1]` of the convolution of two piecewise
/// constant densities: for constant pieces `u` on `[a1,b1]` and `v` on
/// `[a2,b2]`, the convolution is the tent-shaped overlap profile, and the
/// integral over a cell has the closed form below (double antiderivative of
/// the overlap length).
fn conv_cell_average_numerator(pa: &[Piece], pb: &[Piece], x0: f64, x1: f64) -> Complex64 {
    // F2(x) = int_{-inf}^x overlap(t) dt where overlap(t) = len([a,b] cap [t-d, t-c])
    // for the pair of pieces with supports [a1,b1], [a2,b2]; the overlap profile
    // is trapezoidal on [a1+a2, b1+b2].
    fn tent_integral(a1: f64, b1: f64, a2: f64, b2: f64, x: f64) -> f64 {
        // integral from a1+a2 to x of the trapezoid with ramp up on
        // [a1+a2, min-sum], plateau, ramp down ending at b1+b2
        let lo = a1 + a2;
        let hi = b1 + b2;
        if x <= lo {
            return 0.0;
        }
        let l1 = b1 - a1;
        let l2 = b2 - a2;
        let (rs, rl) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
        let ramp_end = lo + rs;
        let plat_end = lo + rl;
        let x = x.min(hi);
        let mut acc = 0.0;
        // rising ramp: height t - lo
        let r = x.min(ramp_end);
        if r > lo {
            acc += 0.5 * (r - lo).powi(2);
        }
        // plateau: height rs
        if x > ramp_end {
            let p = x.min(plat_end);
            acc += rs * (p - ramp_end);
        }
        // falling ramp: height hi - t
        if x > plat_end {
            let f = x.min(hi);
            acc += 0.5 * ((hi - plat_end).powi(2) - (hi - f).powi(2));
        }
        acc
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for p in pa {
        for q in pb {
            let lo = p.a + q.a;
            let hi = p.b + q.b;
            if hi <= x0 || lo >= x1 {
                continue;
            }
            let w = tent_integral(p.a, p.b, q.a, q.b, x1) - tent_integral(p.a, p.b, q.a, q.b, x0);
            acc += p.value * q.value * w;
        }
    }
    acc
}

/// `||(mu_n - mu) * g||_inf`, the product-topology defect, evaluated by the
/// exact translate-sup kernel over the edge-safe range.
pub fn product_convergence_defect(
    mu_n: &Measure,
    mu: &Measure,
    g: &TestFunction,
) -> Result<f64> {
    let diff = mu_n.sub(mu)?;
    let points = norms::family_scan(&diff, std::slice::from_ref(&g.reflect()))
        .map_err(|e| match e {
            Error::EmptyScanRange => Error::EdgeContamination,
            other => other,
        })?;
    Ok(points.iter().map(|p| p.value).fold(0.0, f64::max))
}

/// Output of a finite-n Eberlein (van Hove averaged) convolution.
#[derive(Debug, Clone)]
pub struct EberleinOutput {
    pub measure: Measure,
    pub n: usize,
    pub radius: f64,
    /// `|d^K A_n| / |A_n|` for the reference compact set K = [-1, 1].
    pub boundary_ratio: f64,
}

/// `(1 / |A_n|) * (mu|_{A_n}) * (nu|_{A_n})` at a single finite stage n.
///
/// The restrictions are exact compact measures, so the averaged convolution
/// is computed without truncation bookkeeping; convergence along n is
/// evidenced by comparing stages, never certified.
pub fn eberlein(
    mu: &Measure,
    nu: &Measure,
    vh: &VanHoveSequence,
    n: usize,
) -> Result<EberleinOutput> {
    let region = vh.region(n)?;
    for m in [mu, nu] {
        if let Some(w) = &m.truncation {
            if !w.contains_window(&region) {
                return Err(Error::TruncationTooSmall);
            }
        }
    }
    let a = mu.restrict(&region);
    let b = nu.restrict(&region);
    let conv = convolve_finite(&a, &b)?;
    let scaled = conv.scale(Complex64::new(1.0 / region.len(), 0.0));
    Ok(EberleinOutput {
        measure: scaled,
        n,
        radius: vh.radius(n)?,
        boundary_ratio: boundary_ratio(vh, -1.0, 1.0, n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::IfsMap;

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
    fn dirac_convolution_identity() {
        let f = TestFunction::hat(-1.0, 0.0, 1.0).unwrap();
        let m = Measure::dirac(0.0, c(1.0));
        let grid = GridSpec { origin: -2.0, step: 0.25, len: 17 };
        let s = convolve_mf(&m, &f, grid).unwrap();
        for (i, v) in s.samples.iter().enumerate() {
            let x = s.x_at(i);
            assert!((v - f.eval(x)).norm() < 1e-14);
        }

        // delta_a shifts
        let m = Measure::dirac(0.5, c(1.0));
        let s = convolve_mf(&m, &f, grid).unwrap();
        for (i, v) in s.samples.iter().enumerate() {
            let x = s.x_at(i);
            assert!((v - f.eval(x - 0.5)).norm() < 1e-14);
        }
    }

    #[test]
    fn density_hat_convolution_closed_form() {
        // (1_[0,1) theta) * hat(-1,0,1) at 0.5 = int_0^1 hat(0.5 - y) dy = 0.75
        let d = DensityPart::new(0.0, 1.0, vec![c(1.0)]).unwrap();
        let m = Measure::from_density(d);
        let f = TestFunction::hat(-1.0, 0.0, 1.0).unwrap();
        let grid = GridSpec { origin: 0.5, step: 1.0, len: 1 };
        let s = convolve_mf(&m, &f, grid).unwrap();
        assert!((s.samples[0].re - 0.75).abs() < 1e-14);
    }

    #[test]
    fn edge_contamination_detected() {
        let comb = integer_comb(5.0);
        let f = TestFunction::hat(-1.0, 0.0, 1.0).unwrap();
        let grid = GridSpec { origin: -10.0, step: 1.0, len: 21 };
        assert_eq!(convolve_mf(&comb, &f, grid), Err(Error::EdgeContamination));
        let safe = safe_grid(&comb, &f, 1.0).unwrap();
        assert!(convolve_mf(&comb, &f, safe).is_ok());
    }

    #[test]
    fn mu_times_dirac_is_identity() {
        let comb = integer_comb(5.0);
        let e = Measure::dirac(0.0, c(1.0));
        let out = convolve_mm(&comb, &e).unwrap();
        assert_eq!(out.pp.atoms(), comb.pp.atoms());
    }

    #[test]
    fn comb_times_unit_cell_tiles_lebesgue() {
        let comb = integer_comb(8.0);
        let cell = Measure::from_density(DensityPart::new(0.0, 1.0, vec![c(1.0)]).unwrap());
        let out = convolve_mm(&comb, &cell).unwrap();
        let w = out.truncation.unwrap();
        // density is identically 1 on the safe window
        let d = out.ac.as_ref().unwrap();
        let mut x = w.lo + 0.05;
        while x < w.hi {
            assert!((d.eval(x) - c(1.0)).norm() < 1e-12, "at {x}");
            x += 0.3;
        }
        assert!(out.pp.is_empty());
    }

    #[test]
    fn both_truncated_rejected() {
        let a = integer_comb(5.0);
        let b = integer_comb(5.0);
        assert_eq!(convolve_mm(&a, &b), Err(Error::NonFiniteConvolver));
    }

    #[test]
    fn sc_smearing_becomes_ac_with_mass_preserved() {
        let ifs = vec![
            IfsMap { ratio: 1.0 / 3.0, offset: 0.0, weight: 0.5 },
            IfsMap { ratio: 1.0 / 3.0, offset: 2.0 / 3.0, weight: 0.5 },
        ];
        let cantor = Measure::from_singular(SingularPart::realize(ifs, 8, 1.0).unwrap());
        let n = 4.0;
        let tri = crate::constructions::gallery_triangle(n as u32, 32).unwrap();
        let out = convolve_mm(&cantor, &tri).unwrap();
        assert!(out.sc.is_empty() && out.pp.is_empty());
        let total = out.ac.as_ref().unwrap().total();
        assert!((total.re - 1.0).abs() < 1e-10, "mass {}", total.re);
    }

    #[test]
    fn associativity_with_dirac_translates() {
        let m = Measure::from_atoms(vec![Atom::new(0.25, c(1.0)), Atom::new(1.0, c(-2.0))]);
        let da = Measure::dirac(0.5, c(1.0));
        let db = Measure::dirac(-1.25, c(1.0));
        let lhs = convolve_mm(&convolve_mm(&m, &da).unwrap(), &db).unwrap();
        let rhs = convolve_mm(&m, &Measure::dirac(0.5 + (-1.25), c(1.0))).unwrap();
        assert_eq!(lhs.pp.atoms(), rhs.pp.atoms());
    }

    #[test]
    fn boundary_ratio_values() {
        let vh = VanHoveSequence::linear(100);
        // degenerate K = {0}
        assert_eq!(boundary_ratio(&vh, 0.0, 0.0, 10).unwrap(), 0.0);
        // K = [-1,1], A = (-50, 50): boundary length 4, ratio 0.04
        assert_eq!(boundary_ratio(&vh, -1.0, 1.0, 50).unwrap(), 0.04);
        // exact 2/n law, monotone decreasing
        let mut prev = f64::INFINITY;
        for n in 2..=100 {
            let r = boundary_ratio(&vh, -1.0, 1.0, n).unwrap();
            assert_eq!(r, 2.0 / n as f64);
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn eberlein_comb_coefficients() {
        let comb = integer_comb(60.0);
        let vh = VanHoveSequence::linear(50);
        let out = eberlein(&comb, &comb, &vh, 50).unwrap();
        // 99 atoms in (-50,50); lag-0 coefficient 99/100
        let atoms = out.measure.pp.atoms();
        let at = |k: f64| {
            atoms
                .iter()
                .find(|a| (a.pos - k).abs() < 1e-9)
                .map(|a| a.weight.re)
                .unwrap_or(0.0)
        };
        assert!((at(0.0) - 0.99).abs() < 1e-12);
        assert!(at(0.0) >= 0.98 && at(0.0) <= 1.0);
        assert!((at(1.0) - 0.98).abs() < 1e-12);
        assert_eq!(out.boundary_ratio, 2.0 / 50.0);
    }

    #[test]
    fn eberlein_lebesgue_with_dirac_keeps_unit_mass() {
        let trunc = Window::new(-60.0, 60.0).unwrap();
        let d = DensityPart::constant(-60.0, 60.0, 120, c(1.0)).unwrap();
        let leb = Measure::from_density(d).with_truncation(trunc);
        let delta = Measure::dirac(0.0, c(1.0)).with_truncation(trunc);
        let vh = VanHoveSequence::linear(50);
        let out = eberlein(&leb, &delta, &vh, 50).unwrap();
        // (1/|A_n|) theta|_{A_n}: total mass ratio 1
        let total = out
            .measure
            .mass(&Window::new(-55.0, 55.0).unwrap())
            .unwrap();
        assert!((total - 1.0).abs() < 1e-12, "mass {total}");
    }

    #[test]
    fn product_defect_zero_for_identical() {
        let m = integer_comb(6.0);
        let g = TestFunction::hat(0.0, 1.0, 2.0).unwrap();
        assert_eq!(product_convergence_defect(&m, &m, &g).unwrap(), 0.0);
    }
}
