//! Translation-bounded measures on the line with structural Lebesgue bookkeeping.
//!
//! A [`Measure`] is the formal sum of a pure-point part (weighted atoms), an
//! absolutely continuous part (piecewise-constant density against Lebesgue
//! measure) and a singular continuous part (an iterated-function-system measure
//! realized as a depth-d atom cloud that keeps its `sc` tag under every
//! operation). Infinite objects such as Dirac combs are realized on a
//! truncation window; operations refuse to report values whose dependence cone
//! escapes that window.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::testfn::TestFunction;
use crate::window::{intersect_truncations, Window};

/// Positions closer than this are treated as the same atom when merging.
/// Covers floating-point drift from re-associated lattice sums while staying
/// far below any structural spacing used by the generators.
pub const ATOM_MERGE_TOL: f64 = 1e-9;

/// Weights at or below this modulus are dropped during normalization.
pub const WEIGHT_DROP_TOL: f64 = 1e-14;

/// A weighted Dirac atom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub pos: f64,
    pub weight: Complex64,
}

impl Atom {
    pub fn new(pos: f64, weight: Complex64) -> Self {
        Atom { pos, weight }
    }
}

/// Sort, merge near-coincident positions and drop negligible weights.
pub fn normalize_atoms(mut atoms: Vec<Atom>) -> Vec<Atom> {
    atoms.retain(|a| a.pos.is_finite() && a.weight.is_finite());
    atoms.sort_by(|a, b| a.pos.partial_cmp(&b.pos).unwrap());
    let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match out.last_mut() {
            Some(last) if (a.pos - last.pos).abs() <= ATOM_MERGE_TOL => {
                last.weight += a.weight;
            }
            _ => out.push(a),
        }
    }
    out.retain(|a| a.weight.norm() > WEIGHT_DROP_TOL);
    out
}

/// The pure-point component: atoms sorted strictly increasing in position,
/// plus a realized translation-boundedness certificate (the largest absolute
/// weight mass found in any unit window).
#[derive(Debug, Clone, PartialEq)]
pub struct PurePointPart {
    atoms: Vec<Atom>,
    tb_bound: f64,
}

impl PurePointPart {
    pub fn new(atoms: Vec<Atom>) -> Self {
        let atoms = normalize_atoms(atoms);
        let tb_bound = unit_window_bound(&atoms);
        PurePointPart { atoms, tb_bound }
    }

    pub fn empty() -> Self {
        PurePointPart {
            atoms: Vec::new(),
            tb_bound: 0.0,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Certificate C with sum of |weight| over any unit window at most C.
    pub fn tb_bound(&self) -> f64 {
        self.tb_bound
    }
}

fn unit_window_bound(atoms: &[Atom]) -> f64 {
    let n = atoms.len();
    let mut prefix = vec![0.0f64; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + atoms[i].weight.norm();
    }
    let mut best = 0.0f64;
    let mut j = 0usize;
    for i in 0..n {
        if j < i {
            j = i;
        }
        while j < n && atoms[j].pos - atoms[i].pos < 1.0 {
            j += 1;
        }
        best = best.max(prefix[j] - prefix[i]);
    }
    best
}

/// A maximal constant piece `value` on `[a, b)` of a density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub a: f64,
    pub b: f64,
    pub value: Complex64,
}

/// The absolutely continuous component: a piecewise-constant density on a
/// uniform cell grid, optionally clipped to a sub-interval so restriction to
/// an arbitrary window stays exact.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityPart {
    pub origin: f64,
    pub step: f64,
    pub samples: Vec<Complex64>,
    /// Density is multiplied by the indicator of this interval when present.
    pub clip: Option<(f64, f64)>,
}

impl DensityPart {
    pub fn new(origin: f64, step: f64, samples: Vec<Complex64>) -> Result<Self> {
        if !(origin.is_finite() && step.is_finite()) || step <= 0.0 {
            return Err(Error::BadParams("density grid needs finite origin, step > 0".into()));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadParams("non-finite density sample".into()));
        }
        Ok(DensityPart {
            origin,
            step,
            samples,
            clip: None,
        })
    }

    pub fn constant(origin: f64, hi: f64, cells: usize, value: Complex64) -> Result<Self> {
        let step = (hi - origin) / cells as f64;
        DensityPart::new(origin, step, vec![value; cells])
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty() || self.pieces().is_empty()
    }

    /// End of the sample span (before clipping).
    pub fn span_hi(&self) -> f64 {
        self.origin + self.step * self.samples.len() as f64
    }

    /// Hull of the region where the stored density may be non-zero.
    pub fn hull(&self) -> Option<(f64, f64)> {
        let pieces = self.pieces();
        if pieces.is_empty() {
            None
        } else {
            Some((pieces[0].a, pieces.last().unwrap().b))
        }
    }

    /// The non-zero constant pieces with the clip applied, in increasing order.
    pub fn pieces(&self) -> Vec<Piece> {
        let zero = Complex64::new(0.0, 0.0);
        let (clo, chi) = match self.clip {
            Some((a, b)) => (a, b),
            None => (f64::NEG_INFINITY, f64::INFINITY),
        };
        let mut out = Vec::new();
        for (k, v) in self.samples.iter().enumerate() {
            if *v == zero {
                continue;
            }
            let a = (self.origin + self.step * k as f64).max(clo);
            let b = (self.origin + self.step * (k + 1) as f64).min(chi);
            if a < b {
                out.push(Piece { a, b, value: *v });
            }
        }
        out
    }

    /// Density value at `x` (cells are half-open `[a, b)`).
    pub fn eval(&self, x: f64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        if let Some((a, b)) = self.clip {
            if x < a || x >= b {
                return zero;
            }
        }
        let k = ((x - self.origin) / self.step).floor();
        if k < 0.0 || k >= self.samples.len() as f64 {
            return zero;
        }
        let k = k as usize;
        // guard the floor against boundary rounding
        if x < self.origin + self.step * k as f64 || x >= self.origin + self.step * (k + 1) as f64 {
            let kk = if x < self.origin + self.step * k as f64 {
                k.checked_sub(1)
            } else {
                Some(k + 1)
            };
            return match kk {
                Some(kk) if kk < self.samples.len() => self.samples[kk],
                _ => zero,
            };
        }
        self.samples[k]
    }

    pub fn translate(&self, t: f64) -> DensityPart {
        DensityPart {
            origin: self.origin + t,
            step: self.step,
            samples: self.samples.clone(),
            clip: self.clip.map(|(a, b)| (a + t, b + t)),
        }
    }

    pub fn reflect(&self) -> DensityPart {
        DensityPart {
            origin: -self.span_hi(),
            step: self.step,
            samples: self.samples.iter().rev().copied().collect(),
            clip: self.clip.map(|(a, b)| (-b, -a)),
        }
    }

    pub fn map_values(&self, f: impl Fn(Complex64) -> Complex64) -> DensityPart {
        DensityPart {
            origin: self.origin,
            step: self.step,
            samples: self.samples.iter().map(|v| f(*v)).collect(),
            clip: self.clip,
        }
    }

    /// Restrict the density to a window, exactly, by tightening the clip.
    pub fn restrict(&self, w: &Window) -> Option<DensityPart> {
        let (clo, chi) = match self.clip {
            Some((a, b)) => (a.max(w.lo), b.min(w.hi)),
            None => (w.lo, w.hi),
        };
        if clo >= chi {
            return None;
        }
        let mut d = self.clone();
        d.clip = Some((clo, chi));
        if d.pieces().is_empty() {
            None
        } else {
            Some(d)
        }
    }

    /// Exact integral of `density * T_t g` (piecewise-linear `g`), without
    /// materializing the translated function: subdivides every constant piece
    /// at the shifted breakpoints of `g` and sums trapezoids in place.
    pub fn integrate_against_translated(&self, g: &TestFunction, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let (glo, ghi) = match g.support_hull() {
            Some((lo, hi)) => (lo + t, hi + t),
            None => return acc,
        };
        let bps = g.breakpoints();
        for p in self.pieces() {
            let a = p.a.max(glo);
            let b = p.b.min(ghi);
            if a >= b {
                continue;
            }
            let mut x0 = a;
            let mut v0 = g.eval(x0 - t);
            let mut i = bps.partition_point(|bp| bp + t <= a);
            while x0 < b {
                let x1 = if i < bps.len() && bps[i] + t < b {
                    let x = bps[i] + t;
                    i += 1;
                    x
                } else {
                    b
                };
                let v1 = g.eval(x1 - t);
                acc += p.value * (v0 + v1) * (0.5 * (x1 - x0));
                x0 = x1;
                v0 = v1;
            }
        }
        acc
    }

    /// Exact integral of `density * g` (piecewise-linear `g`).
    pub fn integrate_against(&self, g: &TestFunction) -> Complex64 {
        self.integrate_against_translated(g, 0.0)
    }

    /// Exact integral of the density over the open interval `(a, b)`
    /// (endpoints carry no mass for an absolutely continuous measure).
    pub fn integrate_abs(&self, a: f64, b: f64) -> f64 {
        let mut acc = 0.0;
        for p in self.pieces() {
            let lo = p.a.max(a);
            let hi = p.b.min(b);
            if lo < hi {
                acc += p.value.norm() * (hi - lo);
            }
        }
        acc
    }

    /// Total integral of the density.
    pub fn total(&self) -> Complex64 {
        self.pieces()
            .iter()
            .map(|p| p.value * (p.b - p.a))
            .sum()
    }
}

/// One affine contraction of an iterated function system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IfsMap {
    pub ratio: f64,
    pub offset: f64,
    pub weight: f64,
}

/// The singular continuous component.
///
/// Numerically an sc measure is realized as a depth-d atom cloud; the `sc`
/// tag is structural and never collapses into the pure-point component, which
/// is what keeps Lebesgue bookkeeping honest under convolution and arithmetic.
/// The generator description (`ifs`, `depth`, `mass`) is kept for provenance;
/// after restriction or convolution the atoms are the ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularPart {
    pub ifs: Vec<IfsMap>,
    pub depth: u32,
    pub mass: f64,
    atoms: Vec<Atom>,
}

impl SingularPart {
    pub fn empty() -> Self {
        SingularPart {
            ifs: Vec::new(),
            depth: 0,
            mass: 0.0,
            atoms: Vec::new(),
        }
    }

    /// Realize an IFS probability measure of total `mass` at the given depth.
    /// Atom positions are the images of the attractor-hull midpoint under all
    /// depth-d compositions, so every atom lies strictly inside its cylinder.
    pub fn realize(ifs: Vec<IfsMap>, depth: u32, mass: f64) -> Result<Self> {
        if ifs.is_empty() {
            if mass.abs() > WEIGHT_DROP_TOL {
                return Err(Error::BadParams("sc mass without generator maps".into()));
            }
            return Ok(SingularPart::empty());
        }
        for m in &ifs {
            if !(m.ratio > 0.0 && m.ratio < 1.0) || !m.offset.is_finite() || m.weight <= 0.0 {
                return Err(Error::BadParams(
                    "ifs maps need ratio in (0,1), finite offset, weight > 0".into(),
                ));
            }
        }
        let wsum: f64 = ifs.iter().map(|m| m.weight).sum();
        if (wsum - 1.0).abs() > 1e-9 {
            return Err(Error::BadParams(format!(
                "ifs probability weights sum to {wsum}, expected 1"
            )));
        }
        let count = (ifs.len() as f64).powi(depth as i32);
        if count > 4e6 {
            return Err(Error::BadParams("ifs realization too large".into()));
        }
        // attractor hull from the fixed points of the (increasing) maps
        let lo = ifs
            .iter()
            .map(|m| m.offset / (1.0 - m.ratio))
            .fold(f64::INFINITY, f64::min);
        let hi = ifs
            .iter()
            .map(|m| m.offset / (1.0 - m.ratio))
            .fold(f64::NEG_INFINITY, f64::max);
        let base = 0.5 * (lo + hi);
        let mut cloud: Vec<(f64, f64)> = vec![(base, mass)];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(cloud.len() * ifs.len());
            for (x, w) in &cloud {
                for m in &ifs {
                    next.push((m.ratio * x + m.offset, w * m.weight));
                }
            }
            cloud = next;
        }
        let atoms = normalize_atoms(
            cloud
                .into_iter()
                .map(|(x, w)| Atom::new(x, Complex64::new(w, 0.0)))
                .collect(),
        );
        Ok(SingularPart {
            ifs,
            depth,
            mass,
            atoms,
        })
    }

    /// Rebuild from explicit atoms (derived parts keep an empty generator).
    pub fn from_atoms(atoms: Vec<Atom>) -> Self {
        SingularPart {
            ifs: Vec::new(),
            depth: 0,
            mass: 0.0,
            atoms: normalize_atoms(atoms),
        }
    }

    pub fn from_parts(ifs: Vec<IfsMap>, depth: u32, mass: f64, atoms: Vec<Atom>) -> Self {
        SingularPart {
            ifs,
            depth,
            mass,
            atoms: normalize_atoms(atoms),
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    fn map_atoms(&self, f: impl Fn(&Atom) -> Atom, ifs: Vec<IfsMap>) -> SingularPart {
        SingularPart {
            ifs,
            depth: self.depth,
            mass: self.mass,
            atoms: normalize_atoms(self.atoms.iter().map(f).collect()),
        }
    }
}

/// A three-component translation-bounded measure with optional truncation.
///
/// `truncation == None` means the data is the whole measure (finite, compactly
/// supported); `Some(w)` means the measure is only faithfully realized on `w`
/// and nothing may be inferred outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure {
    pub pp: PurePointPart,
    pub ac: Option<DensityPart>,
    pub sc: SingularPart,
    pub truncation: Option<Window>,
}

impl Measure {
    pub fn zero() -> Self {
        Measure {
            pp: PurePointPart::empty(),
            ac: None,
            sc: SingularPart::empty(),
            truncation: None,
        }
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Self {
        Measure {
            pp: PurePointPart::new(atoms),
            ac: None,
            sc: SingularPart::empty(),
            truncation: None,
        }
    }

    pub fn dirac(pos: f64, weight: Complex64) -> Self {
        Measure::from_atoms(vec![Atom::new(pos, weight)])
    }

    pub fn from_density(ac: DensityPart) -> Self {
        Measure {
            pp: PurePointPart::empty(),
            ac: Some(ac),
            sc: SingularPart::empty(),
            truncation: None,
        }
    }

    pub fn from_singular(sc: SingularPart) -> Self {
        Measure {
            pp: PurePointPart::empty(),
            ac: None,
            sc,
            truncation: None,
        }
    }

    pub fn with_truncation(mut self, w: Window) -> Self {
        self.truncation = Some(w);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.pp.is_empty() && self.sc.is_empty() && self.ac.as_ref().is_none_or(|d| d.is_empty())
    }

    /// Hull of all stored data (atoms and density pieces).
    pub fn data_hull(&self) -> Option<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in self.pp.atoms().iter().chain(self.sc.atoms()) {
            lo = lo.min(a.pos);
            hi = hi.max(a.pos);
        }
        if let Some(d) = &self.ac {
            if let Some((a, b)) = d.hull() {
                lo = lo.min(a);
                hi = hi.max(b);
            }
        }
        if lo <= hi {
            Some((lo, hi))
        } else {
            None
        }
    }

    /// Whether the closed interval `[a, b]` lies inside the faithful region.
    pub fn is_safe(&self, a: f64, b: f64) -> bool {
        match &self.truncation {
            None => true,
            Some(w) => w.contains_closed(a, b),
        }
    }

    /// The translate `T_t mu` with `(T_t mu)(g) = mu(T_{-t} g)`.
    pub fn translate(&self, t: f64) -> Measure {
        Measure {
            pp: PurePointPart::new(
                self.pp
                    .atoms()
                    .iter()
                    .map(|a| Atom::new(a.pos + t, a.weight))
                    .collect(),
            ),
            ac: self.ac.as_ref().map(|d| d.translate(t)),
            sc: self.sc.map_atoms(
                |a| Atom::new(a.pos + t, a.weight),
                self.sc
                    .ifs
                    .iter()
                    .map(|m| IfsMap {
                        ratio: m.ratio,
                        offset: m.offset + (1.0 - m.ratio) * t,
                        weight: m.weight,
                    })
                    .collect(),
            ),
            truncation: self.truncation.map(|w| w.translate(t)),
        }
    }

    /// The reflection with `mu†(g) = mu(g†)`.
    pub fn reflect(&self) -> Measure {
        Measure {
            pp: PurePointPart::new(
                self.pp
                    .atoms()
                    .iter()
                    .map(|a| Atom::new(-a.pos, a.weight))
                    .collect(),
            ),
            ac: self.ac.as_ref().map(|d| d.reflect()),
            sc: self.sc.map_atoms(
                |a| Atom::new(-a.pos, a.weight),
                self.sc
                    .ifs
                    .iter()
                    .map(|m| IfsMap {
                        ratio: m.ratio,
                        offset: -m.offset,
                        weight: m.weight,
                    })
                    .collect(),
            ),
            truncation: self.truncation.map(|w| w.reflect()),
        }
    }

    pub fn conjugate(&self) -> Measure {
        Measure {
            pp: PurePointPart::new(
                self.pp
                    .atoms()
                    .iter()
                    .map(|a| Atom::new(a.pos, a.weight.conj()))
                    .collect(),
            ),
            ac: self.ac.as_ref().map(|d| d.map_values(|v| v.conj())),
            sc: self
                .sc
                .map_atoms(|a| Atom::new(a.pos, a.weight.conj()), self.sc.ifs.clone()),
            truncation: self.truncation,
        }
    }

    /// The total variation |mu|, taken component by component.
    pub fn total_variation(&self) -> Measure {
        let abs = |w: Complex64| Complex64::new(w.norm(), 0.0);
        Measure {
            pp: PurePointPart::new(
                self.pp
                    .atoms()
                    .iter()
                    .map(|a| Atom::new(a.pos, abs(a.weight)))
                    .collect(),
            ),
            ac: self.ac.as_ref().map(|d| d.map_values(abs)),
            sc: self
                .sc
                .map_atoms(|a| Atom::new(a.pos, abs(a.weight)), self.sc.ifs.clone()),
            truncation: self.truncation,
        }
    }

    pub fn scale(&self, c: Complex64) -> Measure {
        Measure {
            pp: PurePointPart::new(
                self.pp
                    .atoms()
                    .iter()
                    .map(|a| Atom::new(a.pos, a.weight * c))
                    .collect(),
            ),
            ac: self.ac.as_ref().map(|d| d.map_values(|v| v * c)),
            sc: self
                .sc
                .map_atoms(|a| Atom::new(a.pos, a.weight * c), self.sc.ifs.clone()),
            truncation: self.truncation,
        }
    }

    /// Riesz pairing `mu(g)` for compactly supported piecewise-linear `g`.
    pub fn pairing(&self, g: &TestFunction) -> Result<Complex64> {
        if let (Some((lo, hi)), Some(w)) = (g.support_hull(), &self.truncation) {
            if !w.contains_closed(lo, hi) {
                return Err(Error::SupportOutsideTruncation);
            }
        }
        Ok(self.pairing_unchecked(g))
    }

    /// Pairing without the edge-safety check; callers must have validated the
    /// dependence cone themselves.
    pub fn pairing_unchecked(&self, g: &TestFunction) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let hull = g.support_hull();
        for a in self.pp.atoms() {
            if hull.is_some_and(|(lo, hi)| lo < a.pos && a.pos < hi) {
                acc += a.weight * g.eval(a.pos);
            }
        }
        if let Some(d) = &self.ac {
            acc += d.integrate_against(g);
        }
        for a in self.sc.atoms() {
            if hull.is_some_and(|(lo, hi)| lo < a.pos && a.pos < hi) {
                acc += a.weight * g.eval(a.pos);
            }
        }
        acc
    }

    /// Total-variation mass `|mu|(I)` of an open window (atoms exactly at the
    /// endpoints are excluded).
    pub fn mass(&self, i: &Window) -> Result<f64> {
        if let Some(w) = &self.truncation {
            if !w.contains_window(i) {
                return Err(Error::WindowOutsideTruncation);
            }
        }
        let mut acc = 0.0;
        for a in self.pp.atoms() {
            if i.contains(a.pos) {
                acc += a.weight.norm();
            }
        }
        if let Some(d) = &self.ac {
            acc += d.integrate_abs(i.lo, i.hi);
        }
        for a in self.sc.atoms() {
            if i.contains(a.pos) {
                acc += a.weight.norm();
            }
        }
        Ok(acc)
    }

    /// Restriction to an open window: atoms outside are dropped, the density
    /// is clipped exactly, the truncation becomes the window itself.
    pub fn restrict(&self, w: &Window) -> Measure {
        let keep = |a: &&Atom| w.contains(a.pos);
        Measure {
            pp: PurePointPart::new(self.pp.atoms().iter().filter(keep).copied().collect()),
            ac: self.ac.as_ref().and_then(|d| d.restrict(w)),
            sc: SingularPart::from_parts(
                self.sc.ifs.clone(),
                self.sc.depth,
                self.sc.mass,
                self.sc.atoms().iter().filter(keep).copied().collect(),
            ),
            truncation: Some(*w),
        }
    }

    /// The Lebesgue components as stand-alone measures (pp, ac, sc).
    pub fn components(&self) -> (Measure, Measure, Measure) {
        let pp = Measure {
            pp: self.pp.clone(),
            ac: None,
            sc: SingularPart::empty(),
            truncation: self.truncation,
        };
        let ac = Measure {
            pp: PurePointPart::empty(),
            ac: self.ac.clone(),
            sc: SingularPart::empty(),
            truncation: self.truncation,
        };
        let sc = Measure {
            pp: PurePointPart::empty(),
            ac: None,
            sc: self.sc.clone(),
            truncation: self.truncation,
        };
        (pp, ac, sc)
    }

    /// Formal sum. Densities must live on compatible grids.
    pub fn add(&self, other: &Measure) -> Result<Measure> {
        let truncation = intersect_truncations(self.truncation, other.truncation)
            .ok_or(Error::TruncationTooSmall)?;
        let mut atoms = self.pp.atoms().to_vec();
        atoms.extend_from_slice(other.pp.atoms());
        let ac = match (&self.ac, &other.ac) {
            (None, None) => None,
            (Some(d), None) | (None, Some(d)) => Some(d.clone()),
            (Some(a), Some(b)) => Some(add_densities(a, b)?),
        };
        let mut sc_atoms = self.sc.atoms().to_vec();
        sc_atoms.extend_from_slice(other.sc.atoms());
        Ok(Measure {
            pp: PurePointPart::new(atoms),
            ac,
            sc: SingularPart::from_atoms(sc_atoms),
            truncation,
        })
    }

    pub fn sub(&self, other: &Measure) -> Result<Measure> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Check the realized translation-boundedness certificate: every unit
    /// window inside the faithful region carries at most `bound` total mass.
    pub fn tb_certificate(&self) -> f64 {
        let mut atoms = self.pp.atoms().to_vec();
        atoms.extend_from_slice(self.sc.atoms());
        let atoms = normalize_atoms(atoms);
        let mut b = unit_window_bound(&atoms);
        if let Some(d) = &self.ac {
            let sup = d.pieces().iter().map(|p| p.value.norm()).fold(0.0, f64::max);
            b += sup;
        }
        b
    }
}

/// Flattened read-only view of a measure for repeated pairing evaluations:
/// all atoms (pp and sc) merged into one sorted array plus the density piece
/// list, so `mu(T_t g)` costs two binary searches and no allocation.
#[derive(Debug, Clone)]
pub struct PairingView {
    atom_pos: Vec<f64>,
    atom_w: Vec<Complex64>,
    pieces: Vec<Piece>,
}

impl PairingView {
    pub fn of(m: &Measure) -> Self {
        let mut atoms: Vec<(f64, Complex64)> = m
            .pp
            .atoms()
            .iter()
            .chain(m.sc.atoms())
            .map(|a| (a.pos, a.weight))
            .collect();
        atoms.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        PairingView {
            atom_pos: atoms.iter().map(|a| a.0).collect(),
            atom_w: atoms.iter().map(|a| a.1).collect(),
            pieces: m.ac.as_ref().map(|d| d.pieces()).unwrap_or_default(),
        }
    }

    /// `mu(T_t g)` for piecewise-linear `g`, no allocation.
    pub fn pairing_translated(&self, g: &TestFunction, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let (glo, ghi) = match g.support_hull() {
            Some((lo, hi)) => (lo + t, hi + t),
            None => return acc,
        };
        let i0 = self.atom_pos.partition_point(|p| *p <= glo);
        let i1 = self.atom_pos.partition_point(|p| *p < ghi);
        for i in i0..i1 {
            acc += self.atom_w[i] * g.eval(self.atom_pos[i] - t);
        }
        let bps = g.breakpoints();
        let k0 = self.pieces.partition_point(|p| p.b <= glo);
        for p in &self.pieces[k0..] {
            if p.a >= ghi {
                break;
            }
            let a = p.a.max(glo);
            let b = p.b.min(ghi);
            if a >= b {
                continue;
            }
            let mut x0 = a;
            let mut v0 = g.eval(x0 - t);
            let mut i = bps.partition_point(|bp| bp + t <= a);
            while x0 < b {
                let x1 = if i < bps.len() && bps[i] + t < b {
                    let x = bps[i] + t;
                    i += 1;
                    x
                } else {
                    b
                };
                let v1 = g.eval(x1 - t);
                acc += p.value * (v0 + v1) * (0.5 * (x1 - x0));
                x0 = x1;
                v0 = v1;
            }
        }
        acc
    }
}

fn add_densities(a: &DensityPart, b: &DensityPart) -> Result<DensityPart> {
    if a.is_empty() {
        return Ok(b.clone());
    }
    if b.is_empty() {
        return Ok(a.clone());
    }
    let rel = (a.step - b.step).abs() / a.step.max(b.step);
    if rel > 1e-12 {
        return Err(Error::GridMismatch(format!(
            "density steps differ: {} vs {}",
            a.step, b.step
        )));
    }
    let k = (b.origin - a.origin) / a.step;
    if (k - k.round()).abs() > 1e-9 {
        return Err(Error::GridMismatch(
            "density origins differ by a non-integer number of cells".into(),
        ));
    }
    if a.clip != b.clip {
        return Err(Error::GridMismatch("density clips differ".into()));
    }
    let k = k.round() as i64;
    let lo = 0.min(k);
    let hi = (a.samples.len() as i64).max(k + b.samples.len() as i64);
    let mut samples = vec![Complex64::new(0.0, 0.0); (hi - lo) as usize];
    for (i, v) in a.samples.iter().enumerate() {
        samples[(i as i64 - lo) as usize] += v;
    }
    for (i, v) in b.samples.iter().enumerate() {
        samples[(i as i64 + k - lo) as usize] += v;
    }
    let mut d = DensityPart::new(a.origin + lo as f64 * a.step, a.step, samples)?;
    d.clip = a.clip;
    Ok(d)
}
