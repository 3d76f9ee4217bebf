//! Measure norms on open windows.
//!
//! The sliding norm `sup_x |mu|(x + U)` is computed exactly: the map
//! `x -> |mu|(x + U)` is piecewise linear between the finitely many critical
//! translates where an atom or a density-cell boundary enters or leaves the
//! window, and on each critical interval the atom count is constant while the
//! density contribution is linear. Taking, per interval, the open-interval
//! atom mass plus the larger endpoint density integral therefore reproduces
//! the supremum (which open windows may approach without attaining).
//!
//! The same scan also yields the three Lebesgue component norms from one
//! candidate set with a fixed summation order, so the component sandwich
//! inequalities hold without any tolerance.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{normalize_atoms, Atom, DensityPart, Measure, PairingView, Piece};
use crate::testfn::TestFunction;
use crate::window::{intersect_truncations, Window};

/// How a norm value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    Sliding,
    SupFamily,
    Operator,
    CompactInf,
}

/// Result of a norm computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub value: f64,
    /// A translate at (or arbitrarily near) which the supremum is realized.
    pub argmax_translate: f64,
    pub method: NormMethod,
    /// Number of family members for the family-based methods, 0 otherwise.
    pub family_size: usize,
}

/// Sorted atom positions with prefix sums of |weight|.
#[derive(Debug, Clone, Default)]
struct AtomProfile {
    pos: Vec<f64>,
    prefix: Vec<f64>,
}

impl AtomProfile {
    fn from_atoms(atoms: &[Atom]) -> Self {
        let mut pos = Vec::with_capacity(atoms.len());
        let mut prefix = Vec::with_capacity(atoms.len() + 1);
        prefix.push(0.0);
        for a in atoms {
            pos.push(a.pos);
            prefix.push(prefix.last().unwrap() + a.weight.norm());
        }
        AtomProfile { pos, prefix }
    }

    /// Sum of |weight| over positions in the open interval `(lo, hi)`.
    fn sum_open(&self, lo: f64, hi: f64) -> f64 {
        let i = self.pos.partition_point(|p| *p <= lo);
        let j = self.pos.partition_point(|p| *p < hi);
        if j > i {
            self.prefix[j] - self.prefix[i]
        } else {
            0.0
        }
    }

    /// Enter/leave critical translates for a window `u`: the atom at `pos`
    /// sits inside the open window `(x + u.lo, x + u.hi)` exactly for
    /// `x` between these two values. The same floating-point expressions
    /// generate the kernel's candidate list, so interval-membership tests
    /// against candidates are self-consistent to the last bit.
    fn events(&self, u: &Window) -> (Vec<f64>, Vec<f64>) {
        let enter: Vec<f64> = self.pos.iter().map(|p| p - u.hi).collect();
        let leave: Vec<f64> = self.pos.iter().map(|p| p - u.lo).collect();
        (enter, leave)
    }

    /// Sum of |weight| over atoms inside the window for every `x` in the open
    /// candidate interval `(c, c2)`: those with `enter <= c` and `leave >= c2`.
    fn sum_interval(&self, enter: &[f64], leave: &[f64], c: f64, c2: f64) -> f64 {
        let a = enter.partition_point(|e| *e <= c);
        let b = leave.partition_point(|l| *l < c2);
        if a > b {
            self.prefix[a] - self.prefix[b]
        } else {
            0.0
        }
    }
}

/// Non-overlapping |density| pieces with prefix integrals.
#[derive(Debug, Clone, Default)]
struct PieceProfile {
    a: Vec<f64>,
    b: Vec<f64>,
    v: Vec<f64>,
    prefix: Vec<f64>,
}

impl PieceProfile {
    fn from_pieces(pieces: &[Piece]) -> Self {
        let mut p = PieceProfile::default();
        p.prefix.push(0.0);
        for pc in pieces {
            p.a.push(pc.a);
            p.b.push(pc.b);
            p.v.push(pc.value.norm());
            let len = pc.b - pc.a;
            p.prefix
                .push(p.prefix.last().unwrap() + pc.value.norm() * len);
        }
        p
    }

    /// Integral of |density| from far left up to `x`.
    fn up_to(&self, x: f64) -> f64 {
        let idx = self.a.partition_point(|ai| *ai <= x);
        if idx == 0 {
            return 0.0;
        }
        let i = idx - 1;
        let cut = x.min(self.b[i]);
        self.prefix[i] + self.v[i] * (cut - self.a[i]).max(0.0)
    }

    fn integral(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        (self.up_to(hi) - self.up_to(lo)).max(0.0)
    }
}

/// Total-variation feature view of a measure, component by component.
#[derive(Debug, Clone, Default)]
pub(crate) struct TvView {
    pp: AtomProfile,
    sc: AtomProfile,
    ac: PieceProfile,
    features: Vec<f64>,
}

impl TvView {
    pub(crate) fn of_measure(m: &Measure) -> Self {
        let pieces = m.ac.as_ref().map(|d| d.pieces()).unwrap_or_default();
        TvView::from_parts(m.pp.atoms(), m.sc.atoms(), &pieces)
    }

    /// View of `mu - T_t mu`, exact for arbitrary `t`.
    pub(crate) fn of_difference(m: &Measure, t: f64) -> Self {
        let minus = Complex64::new(-1.0, 0.0);
        let mut pp: Vec<Atom> = m.pp.atoms().to_vec();
        pp.extend(
            m.pp.atoms()
                .iter()
                .map(|a| Atom::new(a.pos + t, a.weight * minus)),
        );
        let mut sc: Vec<Atom> = m.sc.atoms().to_vec();
        sc.extend(
            m.sc.atoms()
                .iter()
                .map(|a| Atom::new(a.pos + t, a.weight * minus)),
        );
        let mut segs: Vec<Piece> = Vec::new();
        if let Some(d) = &m.ac {
            for p in d.pieces() {
                segs.push(p);
                segs.push(Piece {
                    a: p.a + t,
                    b: p.b + t,
                    value: p.value * minus,
                });
            }
        }
        let merged = sweep_pieces(segs);
        TvView::from_parts(&normalize_atoms(pp), &normalize_atoms(sc), &merged)
    }

    fn from_parts(pp: &[Atom], sc: &[Atom], pieces: &[Piece]) -> Self {
        let mut features = Vec::with_capacity(pp.len() + sc.len() + 2 * pieces.len());
        features.extend(pp.iter().map(|a| a.pos));
        features.extend(sc.iter().map(|a| a.pos));
        for p in pieces {
            features.push(p.a);
            features.push(p.b);
        }
        features.sort_by(|a, b| a.partial_cmp(b).unwrap());
        features.dedup();
        TvView {
            pp: AtomProfile::from_atoms(pp),
            sc: AtomProfile::from_atoms(sc),
            ac: PieceProfile::from_pieces(pieces),
            features,
        }
    }

    fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

/// Flatten possibly overlapping constant segments into a disjoint piece list.
pub(crate) fn sweep_pieces(segs: Vec<Piece>) -> Vec<Piece> {
    let zero = Complex64::new(0.0, 0.0);
    let mut events: Vec<(f64, Complex64)> = Vec::with_capacity(2 * segs.len());
    for s in segs {
        if s.a < s.b && s.value != zero {
            events.push((s.a, s.value));
            events.push((s.b, -s.value));
        }
    }
    events.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut out = Vec::new();
    let mut active = zero;
    let mut i = 0;
    while i < events.len() {
        let x = events[i].0;
        let mut delta = zero;
        while i < events.len() && events[i].0 == x {
            delta += events[i].1;
            i += 1;
        }
        let next = if i < events.len() { events[i].0 } else { x };
        active += delta;
        if next > x && active != zero {
            out.push(Piece {
                a: x,
                b: next,
                value: active,
            });
        }
    }
    out
}

/// Component-resolved sliding norms, all taken over one shared candidate set
/// with a fixed summation order (pp + sc) + ac, so that
/// `max(component) <= total <= pp + ac + sc` holds exactly in floating point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComponentNorms {
    pub total: f64,
    pub pp: f64,
    pub ac: f64,
    pub sc: f64,
    pub argmax: f64,
}

fn scan_domain(m: &Measure, u: &Window, view: &TvView) -> Result<Option<(f64, f64)>> {
    match &m.truncation {
        Some(t) => {
            let lo = t.lo - u.lo;
            let hi = t.hi - u.hi;
            if lo > hi {
                Err(Error::EmptyScanRange)
            } else {
                Ok(Some((lo, hi)))
            }
        }
        None => {
            if view.is_empty() {
                Ok(None)
            } else {
                let lo = view.features[0] - u.hi;
                let hi = view.features[view.features.len() - 1] - u.lo;
                Ok(Some((lo, hi)))
            }
        }
    }
}

fn sliding_sup(view: &TvView, u: &Window, domain: Option<(f64, f64)>) -> ComponentNorms {
    let (xlo, xhi) = match domain {
        Some(d) => d,
        None => {
            return ComponentNorms {
                total: 0.0,
                pp: 0.0,
                ac: 0.0,
                sc: 0.0,
                argmax: 0.0,
            }
        }
    };
    let mut cand: Vec<f64> = Vec::with_capacity(2 * view.features.len() + 2);
    cand.push(xlo);
    cand.push(xhi);
    for f in &view.features {
        for c in [f - u.hi, f - u.lo] {
            if c > xlo && c < xhi {
                cand.push(c);
            }
        }
    }
    cand.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cand.dedup();

    let ac_at: Vec<f64> = cand
        .iter()
        .map(|x| view.ac.integral(x + u.lo, x + u.hi))
        .collect();

    let mut best = ComponentNorms {
        total: f64::NEG_INFINITY,
        pp: f64::NEG_INFINITY,
        ac: f64::NEG_INFINITY,
        sc: f64::NEG_INFINITY,
        argmax: cand[0],
    };
    let consider = |pp: f64, sc: f64, ac: f64, x: f64, best: &mut ComponentNorms| {
        let total = (pp + sc) + ac;
        if total > best.total {
            best.total = total;
            best.argmax = x;
        }
        best.pp = best.pp.max(pp);
        best.sc = best.sc.max(sc);
        best.ac = best.ac.max(ac);
    };

    for (k, x) in cand.iter().enumerate() {
        let pp = view.pp.sum_open(x + u.lo, x + u.hi);
        let sc = view.sc.sum_open(x + u.lo, x + u.hi);
        consider(pp, sc, ac_at[k], *x, &mut best);
    }
    let (pp_enter, pp_leave) = view.pp.events(u);
    let (sc_enter, sc_leave) = view.sc.events(u);
    for k in 0..cand.len().saturating_sub(1) {
        let (c, c2) = (cand[k], cand[k + 1]);
        // atoms contained in the window for every x strictly between c and c2
        let pp = view.pp.sum_interval(&pp_enter, &pp_leave, c, c2);
        let sc = view.sc.sum_interval(&sc_enter, &sc_leave, c, c2);
        let (ac, x) = if ac_at[k] >= ac_at[k + 1] {
            (ac_at[k], c)
        } else {
            (ac_at[k + 1], c2)
        };
        consider(pp, sc, ac, x, &mut best);
    }
    best
}

/// The sliding norm together with its per-component values.
pub fn component_norms(m: &Measure, u: &Window) -> Result<ComponentNorms> {
    let view = TvView::of_measure(m);
    let domain = scan_domain(m, u, &view)?;
    Ok(sliding_sup(&view, u, domain))
}

/// `sup_x |mu|(x + U)` by the exact critical-translate scan.
pub fn norm_u(m: &Measure, u: &Window) -> Result<NormReport> {
    let c = component_norms(m, u)?;
    Ok(NormReport {
        value: c.total,
        argmax_translate: c.argmax,
        method: NormMethod::Sliding,
        family_size: 0,
    })
}

/// Sliding norm of `mu - T_t mu` over the edge-safe sub-window, used by the
/// almost-period scans. Exact for arbitrary `t`.
pub(crate) fn difference_norm(m: &Measure, t: f64, u: &Window) -> Result<f64> {
    let safe = match &m.truncation {
        None => None,
        Some(w) => Some(
            w.intersect(&w.translate(t))
                .ok_or(Error::ScanExceedsTruncation)?,
        ),
    };
    let view = TvView::of_difference(m, t);
    let domain = match safe {
        Some(w) => {
            let lo = w.lo - u.lo;
            let hi = w.hi - u.hi;
            if lo > hi {
                return Err(Error::ScanExceedsTruncation);
            }
            Some((lo, hi))
        }
        None => {
            if view.is_empty() {
                None
            } else {
                Some((
                    view.features[0] - u.hi,
                    view.features[view.features.len() - 1] - u.lo,
                ))
            }
        }
    };
    Ok(sliding_sup(&view, u, domain).total)
}

/// One evaluated point of a family scan: `value = |mu(T_t g)|`.
#[derive(Debug, Clone, Copy)]
pub struct TranslatePoint {
    pub g_index: usize,
    pub t: f64,
    pub value: f64,
}

fn feature_positions(m: &Measure) -> Vec<f64> {
    TvView::of_measure(m).features
}

fn t_domain(m: &Measure, g: &TestFunction, features: &[f64]) -> Result<(f64, f64)> {
    let (s0, s1) = g.support_hull().unwrap_or((0.0, 0.0));
    match &m.truncation {
        Some(w) => {
            let lo = w.lo - s0;
            let hi = w.hi - s1;
            if lo > hi {
                Err(Error::EmptyScanRange)
            } else {
                Ok((lo, hi))
            }
        }
        None => {
            if features.is_empty() {
                Ok((0.0, 0.0))
            } else {
                Ok((features[0] - s1, features[features.len() - 1] - s0))
            }
        }
    }
}

fn translate_candidates(features: &[f64], g: &TestFunction, dom: (f64, f64)) -> Vec<f64> {
    let mut cand = vec![dom.0, dom.1];
    for f in features {
        for b in g.breakpoints() {
            let t = f - b;
            if t > dom.0 && t < dom.1 {
                cand.push(t);
            }
        }
    }
    cand.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cand.dedup();
    let mut with_mid = Vec::with_capacity(2 * cand.len());
    for k in 0..cand.len() {
        with_mid.push(cand[k]);
        if k + 1 < cand.len() {
            with_mid.push(0.5 * (cand[k] + cand[k + 1]));
        }
    }
    with_mid
}

/// Evaluate `|mu(T_t g)|` over every family member at its critical translates
/// (breakpoint/feature alignments plus midpoints).
pub fn family_scan(m: &Measure, family: &[TestFunction]) -> Result<Vec<TranslatePoint>> {
    let features = feature_positions(m);
    let domains: Result<Vec<(f64, f64)>> = family
        .iter()
        .map(|g| t_domain(m, g, &features))
        .collect();
    let domains = domains?;
    let view = PairingView::of(m);
    let points: Vec<Vec<TranslatePoint>> = family
        .par_iter()
        .enumerate()
        .map(|(gi, g)| {
            translate_candidates(&features, g, domains[gi])
                .into_iter()
                .map(|t| TranslatePoint {
                    g_index: gi,
                    t,
                    value: view.pairing_translated(g, t).norm(),
                })
                .collect()
        })
        .collect();
    Ok(points.into_iter().flatten().collect())
}

/// The three equivalent sup orderings over a family scan.
pub mod orderings {
    use super::TranslatePoint;

    /// sup over t of (sup over g at that t).
    pub fn t_then_g(points: &[TranslatePoint]) -> f64 {
        let mut sorted: Vec<&TranslatePoint> = points.iter().collect();
        sorted.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
        let mut sup = 0.0f64;
        let mut i = 0;
        while i < sorted.len() {
            let t = sorted[i].t;
            let mut per_t = 0.0f64;
            while i < sorted.len() && sorted[i].t == t {
                per_t = per_t.max(sorted[i].value);
                i += 1;
            }
            sup = sup.max(per_t);
        }
        sup
    }

    /// sup over the joint (t, g) index set.
    pub fn joint(points: &[TranslatePoint]) -> f64 {
        points.iter().map(|p| p.value).fold(0.0, f64::max)
    }

    /// sup over g of (sup over t for that g).
    pub fn g_then_t(points: &[TranslatePoint]) -> f64 {
        let n = points.iter().map(|p| p.g_index).max().map_or(0, |m| m + 1);
        let mut per_g = vec![0.0f64; n];
        for p in points {
            per_g[p.g_index] = per_g[p.g_index].max(p.value);
        }
        per_g.into_iter().fold(0.0, f64::max)
    }
}

/// Family formula for the norm: `sup_t sup_{g in family} |mu(T_t g)|`.
/// Always a lower bound for the sliding norm.
pub fn norm_via_family(
    m: &Measure,
    u: &Window,
    family: &[TestFunction],
) -> Result<NormReport> {
    for (i, g) in family.iter().enumerate() {
        if !g.in_family_set(u) {
            return Err(Error::FamilyNotInFU { index: i });
        }
    }
    let points = family_scan(m, family)?;
    let mut value = 0.0f64;
    let mut argmax = 0.0f64;
    for p in &points {
        if p.value > value {
            value = p.value;
            argmax = p.t;
        }
    }
    Ok(NormReport {
        value,
        argmax_translate: argmax,
        method: NormMethod::SupFamily,
        family_size: family.len(),
    })
}

/// Operator formula: `max_f ||mu * f||_inf / ||f||_inf` over functions
/// supported in `-U`. Evaluated through the same translate-sup kernel as
/// [`norm_via_family`] via `(mu * f)(t) = mu(T_t f†)`, so the identity with
/// the reflected family holds exactly.
pub fn operator_norm(
    m: &Measure,
    u: &Window,
    family: &[TestFunction],
) -> Result<NormReport> {
    let minus_u = u.reflect();
    let mut reflected = Vec::with_capacity(family.len());
    for (i, g) in family.iter().enumerate() {
        let sup = g.sup_norm();
        if sup == 0.0 {
            return Err(Error::ZeroFunctionInFamily { index: i });
        }
        match g.support_hull() {
            Some((lo, hi)) if minus_u.lo <= lo && hi <= minus_u.hi => {}
            _ => return Err(Error::FamilyNotInMinusU { index: i }),
        }
        reflected.push((g.reflect(), sup));
    }
    let mut value = 0.0f64;
    let mut argmax = 0.0f64;
    for (gdag, sup) in &reflected {
        let points = family_scan(m, std::slice::from_ref(gdag))?;
        for p in &points {
            let v = p.value / sup;
            if v > value {
                value = v;
                argmax = p.t;
            }
        }
    }
    Ok(NormReport {
        value,
        argmax_translate: argmax,
        method: NormMethod::Operator,
        family_size: family.len(),
    })
}

/// Compact-set norm from above: `sup_t min_f |mu|(T_t f)` over a finite family
/// dominating `1_K`. An upper bound for the sliding norm over the closed
/// interval `K = [k_lo, k_hi]`; the bound tightens as the family grows.
pub fn norm_k_compact(
    m: &Measure,
    k_lo: f64,
    k_hi: f64,
    family: &[TestFunction],
) -> Result<NormReport> {
    if family.is_empty() {
        return Err(Error::BadParams("empty dominating family".into()));
    }
    for (i, f) in family.iter().enumerate() {
        if !f.dominates_indicator(k_lo, k_hi) {
            return Err(Error::FamilyNotDominating { index: i });
        }
    }
    let tv = m.total_variation();
    let features = feature_positions(&tv);
    let mut dom = (f64::NEG_INFINITY, f64::INFINITY);
    for g in family {
        let d = t_domain(&tv, g, &features)?;
        dom.0 = dom.0.max(d.0);
        dom.1 = dom.1.min(d.1);
    }
    if dom.0 > dom.1 {
        return Err(Error::EmptyScanRange);
    }
    let mut cand = vec![dom.0, dom.1];
    for f in &features {
        for g in family {
            for b in g.breakpoints() {
                let t = f - b;
                if t > dom.0 && t < dom.1 {
                    cand.push(t);
                }
            }
        }
    }
    cand.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cand.dedup();
    let mut all = Vec::with_capacity(2 * cand.len());
    for i in 0..cand.len() {
        all.push(cand[i]);
        if i + 1 < cand.len() {
            all.push(0.5 * (cand[i] + cand[i + 1]));
        }
    }
    let view = PairingView::of(&tv);
    let mut value = f64::NEG_INFINITY;
    let mut argmax = all.first().copied().unwrap_or(0.0);
    for t in all {
        let v = family
            .iter()
            .map(|g| view.pairing_translated(g, t).re)
            .fold(f64::INFINITY, f64::min);
        if v > value {
            value = v;
            argmax = t;
        }
    }
    Ok(NormReport {
        value,
        argmax_translate: argmax,
        method: NormMethod::CompactInf,
        family_size: family.len(),
    })
}

/// Number of open-interval translates needed to cover one window with the
/// other (the larger of the two greedy covering numbers). Guarantees
/// `(1/N) ||.||_A <= ||.||_B <= N ||.||_A`.
pub fn window_equivalence_constant(a: &Window, b: &Window) -> u32 {
    fn cover(by: f64, target: f64) -> u32 {
        if target <= by {
            return 1;
        }
        let r = target / by;
        if (r - r.round()).abs() <= 1e-9 * r.max(1.0) {
            r.round() as u32 + 1
        } else {
            r.ceil() as u32
        }
    }
    cover(a.len(), b.len()).max(cover(b.len(), a.len()))
}

/// Stepanov norm of a density: the sliding norm of `f theta` divided by |U|.
/// The density is taken as a finite object (zero outside its realized span).
pub fn stepanov_norm(f: &DensityPart, u: &Window) -> Result<f64> {
    let m = Measure::from_density(f.clone());
    Ok(norm_u(&m, u)?.value / u.len())
}

/// The canonical refinement family in `F_U` at a given depth: for every
/// dyadic scale `j = 1..=depth`, the hats on the `2^j`-cell grid, plus (from
/// scale 2 on) the alternating comb and the plateau with ramps one cell wide.
/// Families are nested across depths, so family norms grow monotonically
/// under refinement. Size `2^(depth+1) + depth - 4`.
pub fn canonical_family(u: &Window, depth: u32) -> Vec<TestFunction> {
    assert!(depth >= 1, "family depth must be at least 1");
    let mut fam = Vec::new();
    let len = u.len();
    for j in 1..=depth {
        let n = 1usize << j;
        let h = len / n as f64;
        let grid: Vec<f64> = (0..=n).map(|i| u.lo + h * i as f64).collect();
        for i in 1..n {
            fam.push(TestFunction::hat(grid[i - 1], grid[i], grid[i + 1]).unwrap());
        }
        if n >= 4 {
            // alternating comb at this scale
            let values: Vec<Complex64> = (0..=n)
                .map(|i| {
                    if i == 0 || i == n {
                        Complex64::new(0.0, 0.0)
                    } else if i % 2 == 1 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(-1.0, 0.0)
                    }
                })
                .collect();
            fam.push(TestFunction::new(grid.clone(), values).unwrap());
            // plateau with one-cell ramps
            fam.push(
                TestFunction::trapezoid(grid[0], grid[1], grid[n - 1], grid[n], 1.0).unwrap(),
            );
        }
    }
    fam
}

/// Differences of adjacent truncation levels converge in norm; used by the
/// finite-approximation completeness checks.
pub fn norm_distance(a: &Measure, b: &Measure, u: &Window) -> Result<f64> {
    let trunc =
        intersect_truncations(a.truncation, b.truncation).ok_or(Error::TruncationTooSmall)?;
    let mut diff = a.sub(b)?;
    diff.truncation = trunc;
    Ok(norm_u(&diff, u)?.value)
}
