//! Property-based invariants for the measure, norm, period and convolution
//! machinery, plus the finite-approximation completeness checks.

use num_complex::Complex64;
use proptest::prelude::*;

use apmeas_core::constructions::{gallery_cantor, gallery_ex1, gallery_leb01};
use apmeas_core::convolution::{convolve_mf, convolve_mm, product_convergence_defect, safe_grid};
use apmeas_core::norms::{
    self, canonical_family, component_norms, norm_u, norm_via_family, window_equivalence_constant,
};
use apmeas_core::periods::{norm_period_scan, norm_periods, stepanov_periods};
use apmeas_core::{Atom, DensityPart, Measure, SingularPart, TestFunction, Window};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn trunc() -> Window {
    Window::new(-8.0, 8.0).unwrap()
}

#[derive(Debug, Clone)]
struct Mix {
    atoms: Vec<(f64, f64, f64)>,
    cells: Vec<f64>,
    sc_mass: f64,
    sc_shift: f64,
}

fn arb_mix() -> impl Strategy<Value = Mix> {
    (
        proptest::collection::vec((-7.0f64..7.0, -1.0f64..1.0, -1.0f64..1.0), 0..8),
        proptest::collection::vec(-1.0f64..1.0, 8),
        0.0f64..1.0,
        -6.0f64..5.0,
    )
        .prop_map(|(atoms, cells, sc_mass, sc_shift)| Mix {
            atoms,
            cells,
            sc_mass,
            sc_shift,
        })
}

fn build(mix: &Mix) -> Measure {
    let atoms: Vec<Atom> = mix
        .atoms
        .iter()
        .map(|(p, re, im)| Atom::new(*p, Complex64::new(*re, *im)))
        .collect();
    let density = DensityPart::new(-4.0, 1.0, mix.cells.iter().map(|v| c(*v)).collect()).unwrap();
    let sc = if mix.sc_mass > 1e-3 {
        gallery_cantor(4)
            .unwrap()
            .scale(c(mix.sc_mass))
            .translate(mix.sc_shift)
            .sc
    } else {
        SingularPart::empty()
    };
    let mut m = Measure::from_atoms(atoms);
    m.ac = Some(density);
    m.sc = sc;
    m.with_truncation(trunc())
}

fn hat_in(a: f64, b: f64, cc: f64) -> TestFunction {
    TestFunction::hat(a, b, cc).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // (T_t mu)(g) = mu(T_{-t} g)
    #[test]
    fn translate_adjoint(mix in arb_mix(), t in -0.9f64..0.9, peak in -2.0f64..2.0) {
        let m = build(&mix);
        let g = hat_in(peak - 1.0, peak, peak + 1.0);
        let lhs = m.translate(t).pairing(&g).unwrap();
        let rhs = m.pairing(&g.translate(-t)).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    // reflection adjoint and involution
    #[test]
    fn reflect_adjoint(mix in arb_mix(), peak in -2.0f64..2.0) {
        let m = build(&mix);
        let g = hat_in(peak - 1.0, peak, peak + 1.0);
        let lhs = m.reflect().pairing(&g).unwrap();
        let rhs = m.pairing(&g.reflect()).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
        let double = m.reflect().reflect();
        prop_assert_eq!(double.pp.atoms(), m.pp.atoms());
    }

    // pairing splits over the Lebesgue components
    #[test]
    fn component_additivity(mix in arb_mix(), peak in -2.0f64..2.0) {
        let m = build(&mix);
        let g = hat_in(peak - 1.5, peak, peak + 1.5);
        let (pp, ac, sc) = m.components();
        let total = m.pairing(&g).unwrap();
        let split = pp.pairing(&g).unwrap() + ac.pairing(&g).unwrap() + sc.pairing(&g).unwrap();
        prop_assert!((total - split).norm() < 1e-12);
    }

    #[test]
    fn total_variation_idempotent(mix in arb_mix()) {
        let m = build(&mix);
        let tv = m.total_variation();
        prop_assert_eq!(tv.total_variation(), tv);
    }

    // |mu(g)| <= |mu|(window) for |g| <= 1 supported there
    #[test]
    fn tv_dominates_pairing(mix in arb_mix(), peak in -2.0f64..2.0) {
        let m = build(&mix);
        let g = hat_in(peak - 1.0, peak, peak + 1.0);
        let w = Window::new(peak - 1.0, peak + 1.0).unwrap();
        let lhs = m.pairing(&g).unwrap().norm();
        let rhs = m.total_variation().mass(&w).unwrap();
        prop_assert!(lhs <= rhs + 1e-12);
    }

    // mass is monotone and additive across an atom-free cut
    #[test]
    fn mass_monotone_additive(mix in arb_mix()) {
        let m = build(&mix);
        let small = Window::new(-2.0, 2.0).unwrap();
        let big = Window::new(-5.0, 5.0).unwrap();
        let ms = m.mass(&small).unwrap();
        let mb = m.mass(&big).unwrap();
        prop_assert!(ms <= mb + 1e-12);

        // cut at an irrational point, where no construction places atoms
        let cut = 1.0 / std::f64::consts::SQRT_2;
        let left = m.mass(&Window::new(-5.0, cut).unwrap()).unwrap();
        let right = m.mass(&Window::new(cut, 5.0).unwrap()).unwrap();
        prop_assert!((left + right - mb).abs() < 1e-10);
    }

    // restriction preserves the mass seen through the restriction window
    #[test]
    fn restrict_preserves_window_mass(mix in arb_mix(), lo in -6.0f64..0.0, len in 0.5f64..5.0) {
        let m = build(&mix);
        let w = Window::new(lo, lo + len).unwrap();
        let r = m.restrict(&w);
        prop_assert!((r.mass(&w).unwrap() - m.mass(&w).unwrap()).abs() < 1e-12);
    }

    // canonical JSON round trip is idempotent
    #[test]
    fn json_round_trip(mix in arb_mix()) {
        let m = build(&mix);
        let once = apmeas_core::json::to_json(&m);
        let back = apmeas_core::json::from_json(&once).unwrap();
        prop_assert_eq!(apmeas_core::json::to_json(&back), once);
    }

    // family formula stays below the sliding norm and grows with depth
    #[test]
    fn family_below_sliding_and_monotone(mix in arb_mix()) {
        let m = build(&mix);
        let u = Window::new(0.0, 1.0).unwrap();
        let sliding = norm_u(&m, &u).unwrap().value;
        let mut prev = 0.0f64;
        for depth in [2u32, 4] {
            let fam = canonical_family(&u, depth);
            let v = norm_via_family(&m, &u, &fam).unwrap().value;
            prop_assert!(v <= sliding + 1e-12, "family {v} > sliding {sliding}");
            prop_assert!(v + 1e-12 >= prev, "family value dropped with depth");
            prev = v;
        }
    }

    // component norms sandwich the total norm, exactly
    #[test]
    fn component_sandwich_exact(mix in arb_mix()) {
        let m = build(&mix);
        let u = Window::new(0.0, 1.0).unwrap();
        let cn = component_norms(&m, &u).unwrap();
        prop_assert!(cn.pp <= cn.total);
        prop_assert!(cn.ac <= cn.total);
        prop_assert!(cn.sc <= cn.total);
        prop_assert!(cn.total <= cn.pp + cn.ac + cn.sc);
    }

    // two-window equivalence with the computed covering constant
    #[test]
    fn window_equivalence_sandwich(mix in arb_mix()) {
        let m = build(&mix);
        let a = Window::new(0.0, 1.0).unwrap();
        let b = Window::new(0.0, 2.0).unwrap();
        let n = window_equivalence_constant(&a, &b) as f64;
        let na = norm_u(&m, &a).unwrap().value;
        let nb = norm_u(&m, &b).unwrap().value;
        prop_assert!(na / n <= nb + 1e-12);
        prop_assert!(nb <= n * na + 1e-12);
    }

    // norm axioms: homogeneity and the triangle inequality
    #[test]
    fn norm_axioms(mix in arb_mix(), scale_re in -2.0f64..2.0, scale_im in -2.0f64..2.0) {
        let m = build(&mix);
        let u = Window::new(0.0, 1.0).unwrap();
        let s = Complex64::new(scale_re, scale_im);
        let nm = norm_u(&m, &u).unwrap().value;
        let ns = norm_u(&m.scale(s), &u).unwrap().value;
        prop_assert!((ns - s.norm() * nm).abs() <= 1e-10 * (1.0 + nm));

        // translate by a whole density cell so the grids stay compatible
        let shifted = m.translate(1.0);
        let mut sum = m.add(&shifted).unwrap();
        sum.truncation = Some(Window::new(-7.0, 7.0).unwrap());
        let u7 = Window::new(0.0, 1.0).unwrap();
        let lhs = norm_u(&sum, &u7).unwrap().value;
        let mut m7 = m.clone();
        m7.truncation = sum.truncation;
        let mut s7 = shifted.clone();
        s7.truncation = sum.truncation;
        let rhs = norm_u(&m7, &u7).unwrap().value + norm_u(&s7, &u7).unwrap().value;
        prop_assert!(lhs <= rhs + 1e-10);
    }

    // sliding kernel dominates a dense-grid evaluation of x -> |mu|(x+U)
    #[test]
    fn sliding_dominates_grid_oracle(mix in arb_mix()) {
        let m = build(&mix);
        let u = Window::new(0.0, 1.0).unwrap();
        let tv = m.total_variation();
        let kernel = norm_u(&m, &u).unwrap().value;
        let mut grid_best = 0.0f64;
        let mut x = -8.0 + 0.01;
        while x + 1.0 < 8.0 {
            let w = Window::new(x, x + 1.0).unwrap();
            grid_best = grid_best.max(tv.mass(&w).unwrap());
            x += 0.037;
        }
        prop_assert!(kernel >= grid_best - 1e-12);
    }

    // periods: monotone in epsilon, zero always a member, symmetry for real data
    #[test]
    fn period_monotone_zero_symmetry(cells in proptest::collection::vec(-1.0f64..1.0, 8)) {
        let d = DensityPart::new(-4.0, 1.0, cells.iter().map(|v| c(*v)).collect()).unwrap();
        let m = Measure::from_density(d).with_truncation(trunc());
        let u = Window::new(0.0, 1.0).unwrap();
        let scan = Window::new(-2.0, 2.0).unwrap();
        let p1 = norm_periods(&m, &u, 0.1, &scan, 0.25).unwrap();
        let p2 = norm_periods(&m, &u, 0.4, &scan, 0.25).unwrap();
        for t in &p1.members {
            prop_assert!(p2.members.contains(t));
        }
        prop_assert!(p1.members.contains(&0.0));
        let neg: Vec<f64> = p1.members.iter().rev().map(|t| -t).collect();
        prop_assert_eq!(&p1.members, &neg);
    }

    // group-like closure: s, t eps-periods => s + t is a 2eps-period
    #[test]
    fn period_group_closure(cells in proptest::collection::vec(-1.0f64..1.0, 8)) {
        let d = DensityPart::new(-4.0, 1.0, cells.iter().map(|v| c(*v)).collect()).unwrap();
        let m = Measure::from_density(d).with_truncation(trunc());
        let u = Window::new(0.0, 1.0).unwrap();
        let scan = Window::new(-1.5, 1.5).unwrap();
        let eps = 0.15;
        let p = norm_periods(&m, &u, eps, &scan, 0.25).unwrap();
        let p2 = norm_periods(&m, &u, 2.0 * eps, &scan, 0.25).unwrap();
        for s in &p.members {
            for t in &p.members {
                let sum = s + t;
                if sum >= scan.lo - 1e-12 && sum <= scan.hi + 1e-12 {
                    prop_assert!(
                        p2.members.iter().any(|x| (x - sum).abs() < 1e-9),
                        "closure fails at {s} + {t}"
                    );
                }
            }
        }
    }

    // Stepanov periods of f equal norm periods of f theta at eps |U|, bit-exact
    #[test]
    fn stepanov_norm_period_identity(cells in proptest::collection::vec(-1.0f64..1.0, 16)) {
        let d = DensityPart::new(-8.0, 1.0, cells.iter().map(|v| c(*v)).collect()).unwrap();
        let u = Window::new(0.0, 1.0).unwrap();
        let scan = Window::new(-2.0, 2.0).unwrap();
        let eps = 0.12;
        let a = stepanov_periods(&d, &u, eps, &scan, 0.25).unwrap();
        let span = Window::new(d.origin, d.span_hi()).unwrap();
        let m = Measure::from_density(d.clone()).with_truncation(span);
        let b = norm_periods(&m, &u, eps * u.len(), &scan, 0.25).unwrap();
        prop_assert_eq!(a.members, b.members);
    }

    // convolution commutes under pairing for finite measures
    #[test]
    fn convolution_commutative(
        atoms_a in proptest::collection::vec((-2.0f64..2.0, -1.0f64..1.0), 1..4),
        atoms_b in proptest::collection::vec((-2.0f64..2.0, -1.0f64..1.0), 1..4),
        cells_b in proptest::collection::vec(-1.0f64..1.0, 4),
        peak in -2.0f64..2.0,
    ) {
        let a = Measure::from_atoms(
            atoms_a.iter().map(|(p, w)| Atom::new(*p, c(*w))).collect(),
        );
        let mut b = Measure::from_atoms(
            atoms_b.iter().map(|(p, w)| Atom::new(*p, c(*w))).collect(),
        );
        b.ac = Some(DensityPart::new(-1.0, 0.5, cells_b.iter().map(|v| c(*v)).collect()).unwrap());
        let ab = convolve_mm(&a, &b).unwrap();
        let ba = convolve_mm(&b, &a).unwrap();
        let g = hat_in(peak - 1.5, peak, peak + 1.5);
        let x = ab.pairing(&g).unwrap();
        let y = ba.pairing(&g).unwrap();
        prop_assert!((x - y).norm() < 1e-10, "{x} vs {y}");
    }

    // Young-type bound ||mu * f||_inf <= ||mu||_U ||f||_inf for supp f in -U
    #[test]
    fn operator_young_bound(mix in arb_mix()) {
        let m = build(&mix);
        let u = Window::new(0.0, 1.0).unwrap();
        let f = hat_in(-1.0, -0.4, 0.0);
        let grid = safe_grid(&m, &f, 0.05).unwrap();
        let conv = convolve_mf(&m, &f, grid).unwrap();
        let bound = norm_u(&m, &u).unwrap().value * f.sup_norm();
        prop_assert!(conv.sup_norm() <= bound + 1e-10);
    }
}

// pairing is linear in the test function
#[test]
fn pairing_linearity() {
    let m = build(&Mix {
        atoms: vec![(0.3, 0.4, -0.2), (-1.7, -0.8, 0.1)],
        cells: vec![0.5, -0.25, 0.75, 0.0, -0.6, 0.9, 0.1, -0.3],
        sc_mass: 0.4,
        sc_shift: -1.0,
    });
    let g1 = hat_in(-2.0, -0.5, 1.0);
    let g2 = hat_in(-1.0, 0.5, 2.0);
    let sum = g1.add(&g2);
    let lhs = m.pairing(&sum).unwrap();
    let rhs = m.pairing(&g1).unwrap() + m.pairing(&g2).unwrap();
    assert!((lhs - rhs).norm() < 1e-13);
}

// norm periods of a cosine-modulated density agree with a direct
// dense-window evaluation of the translate distance at every scanned t
#[test]
fn norm_period_scan_matches_dense_oracle() {
    let step = 1.0 / 64.0;
    let cells = (16.0 / step) as usize;
    let samples: Vec<Complex64> = (0..cells)
        .map(|i| {
            let x = -8.0 + step * i as f64;
            c(1.0 + 0.05 * (std::f64::consts::TAU * std::f64::consts::SQRT_2 * x).cos())
        })
        .collect();
    let f = DensityPart::new(-8.0, step, samples).unwrap();
    let m = Measure::from_density(f.clone()).with_truncation(Window::new(-8.0, 8.0).unwrap());
    let u = Window::new(0.0, 1.0).unwrap();
    let scan = Window::new(-2.0, 2.0).unwrap();
    let data = norm_period_scan(&m, &u, &scan, 0.25).unwrap();
    for (t, v) in data {
        // oracle: max over a dense grid of window positions of the exact
        // windowed L1 distance computed cell by cell
        let mut oracle = 0.0f64;
        let safe_lo = -8.0 + t.max(0.0);
        let safe_hi = 8.0 + t.min(0.0);
        let mut x = safe_lo;
        while x + 1.0 <= safe_hi {
            let mut acc = 0.0;
            let mut yy = x;
            while yy < x + 1.0 - 1e-12 {
                let y1 = (yy + step).min(x + 1.0);
                let mid = 0.5 * (yy + y1);
                acc += (f.eval(mid) - f.eval(mid - t)).norm() * (y1 - yy);
                yy = y1;
            }
            oracle = oracle.max(acc);
            x += 0.0131;
        }
        assert!(
            v >= oracle - 1e-9 && v <= oracle + 0.01,
            "t = {t}: kernel {v} vs oracle {oracle}"
        );
    }
}

// Prop. p2-style stability: ||mu*nu - T_t(mu*nu)||_U <= ||mu - T_t mu||_{U'} |nu|(R)
#[test]
fn convolution_transfers_almost_periods() {
    let atoms: Vec<Atom> = (-24..24)
        .map(|k| {
            let w = 1.0 + 0.05 * (0.7 * k as f64).sin();
            Atom::new(k as f64, c(w))
        })
        .collect();
    let mu = Measure::from_atoms(atoms).with_truncation(Window::new(-24.0, 24.0).unwrap());
    let mut nu = Measure::from_atoms(vec![
        Atom::new(-0.5, c(0.4)),
        Atom::new(0.25, Complex64::new(0.1, 0.3)),
    ]);
    nu.ac = Some(DensityPart::new(-0.25, 0.25, vec![c(0.5), c(-0.2)]).unwrap());

    let conv = convolve_mm(&mu, &nu).unwrap();
    let u = Window::new(0.0, 1.0).unwrap();
    let (s0, s1) = nu.data_hull().unwrap();
    let u_big = Window::new(u.lo + s0, u.hi + s1).unwrap();
    let nu_mass = nu
        .total_variation()
        .mass(&Window::new(-2.0, 2.0).unwrap())
        .unwrap();

    let scan = Window::new(-4.0, 4.0).unwrap();
    let lhs = norm_period_scan(&conv, &u, &scan, 0.5).unwrap();
    let rhs = norm_period_scan(&mu, &u_big, &scan, 0.5).unwrap();
    for ((t1, a), (t2, b)) in lhs.iter().zip(&rhs) {
        assert_eq!(t1, t2);
        assert!(
            *a <= b * nu_mass + 1e-9,
            "t = {t1}: {a} > {b} * {nu_mass}"
        );
    }
}

// product-topology approximate identities: n * defect <= Lipschitz constant
#[test]
fn ex1_defect_bound() {
    let lim = gallery_leb01();
    let g = TestFunction::hat(0.0, 1.0, 2.0).unwrap();
    let lip = g.lipschitz();
    let mut prev = f64::INFINITY;
    for n in [1u32, 2, 4, 8, 16, 32, 64] {
        let mu_n = gallery_ex1(n).unwrap();
        let d = product_convergence_defect(&mu_n, &lim, &g).unwrap();
        assert!(n as f64 * d <= lip + 1e-12, "n = {n}: defect {d}");
        assert!(d <= prev + 1e-15);
        prev = d;
    }
}

// scaled Cantor measures shrink to the origin in the product topology
#[test]
fn scaled_cantor_defect_bound() {
    use apmeas_core::constructions::gallery_scaled_cantor;
    let delta = Measure::dirac(0.0, c(1.0));
    let g = TestFunction::hat(0.0, 1.0, 2.0).unwrap();
    let lip = g.lipschitz();
    for n in [1u32, 2, 4, 8, 16] {
        let mu_n = gallery_scaled_cantor(n, 8).unwrap();
        let d = product_convergence_defect(&mu_n, &delta, &g).unwrap();
        assert!(d <= lip / n as f64 + 1e-12, "n = {n}: defect {d}");
    }
}

// singular-continuous tags survive convolution and the limits swap class
#[test]
fn lebesgue_class_bookkeeping_under_convolution() {
    let cantor = gallery_cantor(6).unwrap();
    // sc * pp stays sc
    let shifted = convolve_mm(&cantor, &Measure::dirac(1.0, c(1.0))).unwrap();
    assert!(shifted.pp.is_empty() && shifted.ac.is_none() && !shifted.sc.is_empty());
    // sc * ac becomes ac
    let smeared = convolve_mm(&cantor, &gallery_leb01()).unwrap();
    assert!(smeared.sc.is_empty() && smeared.ac.is_some());
    // atomic approximants convolved with sc stay sc, and their defect against
    // the ac limit vanishes
    let g = TestFunction::hat(-1.0, 0.0, 1.0).unwrap();
    let lim = convolve_mm(&gallery_leb01(), &cantor).unwrap();
    let mut prev = f64::INFINITY;
    for n in [1u32, 2, 4, 8] {
        let approx = convolve_mm(&gallery_ex1(n).unwrap(), &cantor).unwrap();
        assert!(approx.ac.is_none() && !approx.sc.is_empty());
        let d = product_convergence_defect(&approx, &lim, &g).unwrap();
        assert!(d <= prev + 1e-12);
        prev = d;
    }
    assert!(prev <= 0.51, "defect after n = 8 should be below Lip/2n: {prev}");
}

// classification of a weighted cut-and-project comb: almost-period evidence
// appears once the scan grid resolves the family scale, and the covering
// radius shrinks as epsilon grows
#[test]
fn classify_fibonacci_comb_evidence() {
    use apmeas_core::constructions::{cps_comb, fibonacci_scheme};
    use apmeas_core::periods::{classify, ClassifyOptions};

    let tau = 0.5 * (1.0 + 5.0f64.sqrt());
    let scheme = fibonacci_scheme();
    let h = TestFunction::hat(-1.0, 0.0, tau - 1.0).unwrap();
    let comb = cps_comb(&scheme, &h, &Window::new(-40.0, 40.0).unwrap()).unwrap();
    let u = Window::new(0.0, 1.0).unwrap();
    let scan = Window::new(-16.0, 16.0).unwrap();
    let opts = ClassifyOptions {
        family_depth: 3,
        threshold_frac: 0.25,
        refine: 1,
    };
    let rep = classify(&comb, &u, &[0.4, 0.6], &scan, 0.01, &opts).unwrap();
    assert!(rep.norm_ap_evidence, "rows: {:?}", rep.rows);
    assert!(rep.failure_witness.is_none());
    assert!(rep.rows[0].covering_radius <= 7.0);
    assert!(rep.rows[1].covering_radius <= rep.rows[0].covering_radius);
    for r in &rep.rows {
        assert!(r.stable);
        // the norm route cannot see irrational translates on a uniform grid
        assert!(r.norm_route_radius >= scan.len() / 2.0 - 1e-9);
    }
}

// finite-approximation completeness: a geometric Cauchy sequence of comb
// perturbations converges in norm to its realized limit
#[test]
fn cauchy_sequence_has_realized_limit() {
    let u = Window::new(0.0, 1.0).unwrap();
    let stage = |n: u32| -> Measure {
        // partial sums sum_{k<=n} 2^-k delta_{k/16 mod 1 + lattice}
        let mut atoms = Vec::new();
        for k in 0..=n {
            let w = (0.5f64).powi(k as i32);
            atoms.push(Atom::new(0.05 * k as f64, c(w)));
        }
        Measure::from_atoms(atoms).with_truncation(Window::new(-4.0, 4.0).unwrap())
    };
    let limit = stage(20);
    let mut prev = f64::INFINITY;
    for n in [2u32, 4, 8, 16] {
        let d = norms::norm_distance(&stage(n), &limit, &u).unwrap();
        assert!(d <= prev, "distance must shrink: {d} after {prev}");
        assert!(d <= (0.5f64).powi(n as i32) * 2.0 + 1e-15);
        prev = d;
    }
}
