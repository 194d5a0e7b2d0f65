//! Randomized invariants across the model, hierarchy, spectrum, numeric and
//! CLI layers.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use susyhier::cli::commands::fmt_f64;
use susyhier::cli::{ConfigError, RunConfig};
use susyhier::expr::SuperpotentialExpr;
use susyhier::hierarchy::{self, riccati_apply, solve_selfconsistent_morse, SelfConsistent};
use susyhier::numeric::scan::full_spectrum;
use susyhier::numeric::{
    bound_spectrum, build_hamiltonian, compare, conjugate_pairing, eigen_spectrum,
};
use susyhier::potential::{
    classify_symmetry, poschl_teller_imaginary_compact, poschl_teller_imaginary_expanded,
    pt_reflect, DerivedParams, FnPotential,
};
use susyhier::spectra::{self, GroundState, QuantumNumbers, SpectrumParams};
use susyhier::{
    Complex64, DerivativeScale, EnergyRecord, Error, Formula, Grid, Mode, PotentialModel,
    UnitSystem,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

fn pt_model() -> impl Strategy<Value = PotentialModel> {
    prop_oneof![
        (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(v1, v2)| PotentialModel::morse_pt1(
            v1.into(),
            v2.into()
        )
        .unwrap()),
        (
            prop_oneof![-3.0..-0.1f64, 0.1..3.0f64],
            -3.0..3.0f64,
            0.2..2.0f64
        )
            .prop_map(|(w, d, a)| PotentialModel::morse_pt2(w, d, a).unwrap()),
        (-5.0..5.0f64, -0.9..0.9f64, 0.2..2.0f64)
            .prop_map(|(v0, q, a)| PotentialModel::poschl_teller_pt(v0, q, a).unwrap()),
    ]
}

fn coupling_ratio(model: &PotentialModel) -> f64 {
    match *model {
        PotentialModel::MorsePt1 { v1, v2 } => v1.norm().max(v2.norm()),
        PotentialModel::MorsePt2 { omega, d, alpha } => {
            (omega * omega).max(d.abs()) / (alpha * alpha)
        }
        PotentialModel::PoschlTellerPt { v0, alpha, .. } => v0.abs() / (alpha * alpha),
        _ => f64::INFINITY,
    }
}

fn units() -> impl Strategy<Value = UnitSystem> {
    (0.2..3.0f64, 0.2..3.0f64, 0.2..3.0f64).prop_map(|(h, m, e)| UnitSystem::new(h, m, e).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn pt_families_are_reflection_invariant(model in pt_model()) {
        let grid = Grid::symmetric(10.0, 401).unwrap();
        for x in grid.points() {
            let v = model.eval(x).unwrap();
            let r = pt_reflect(&model, x).unwrap();
            prop_assert!((v - r).norm() < 1e-10, "x={x}: {v} vs {r}");
        }
    }

    #[test]
    fn classification_survives_refinement(model in pt_model(), n in 41usize..200) {
        let half = 8.0 * model.length_scale();
        let coarse = Grid::symmetric(half, 2 * n + 1).unwrap();
        let a = classify_symmetry(&model, &coarse, 1e-10).unwrap();
        let b = classify_symmetry(&model, &coarse.refined(), 1e-10).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn imaginary_compact_form_agrees_at_origin(
        v in -5.0..5.0f64, w in -0.9..0.9f64, alpha in 0.2..3.0f64,
    ) {
        let a = poschl_teller_imaginary_compact(v, w, alpha, 0.0);
        let b = poschl_teller_imaginary_expanded(v, w, alpha, 0.0);
        prop_assert!(close(a, b, 1e-12));
        // the expanded form is the model itself
        let m = PotentialModel::poschl_teller(c(0.0, v), c(0.0, w), alpha).unwrap();
        for x in [-1.3, -0.2, 0.4, 2.0] {
            let direct = m.eval(x).unwrap();
            let expanded = poschl_teller_imaginary_expanded(v, w, alpha, x);
            prop_assert!(close(direct, expanded, 1e-12), "x={x}: {direct} vs {expanded}");
        }
    }

    #[test]
    fn derived_chain_identities(
        a in -4.0..4.0f64, b in -4.0..4.0f64, cc in -3.0..3.0f64, u in units(),
        v1r in 0.1..20.0f64, v1i in -5.0..5.0f64, alpha in 0.2..3.0f64,
    ) {
        prop_assume!(a.hypot(b) > 1e-3 && (2.0 * cc + 1.0).abs() > 1e-3);
        let d = DerivedParams::from_abc(a, b, cc).unwrap();
        let (omega, k) = (d.omega.unwrap(), d.k.unwrap());
        prop_assert!(close(omega * omega, -(c(a, b) * c(a, b)), 1e-12));
        prop_assert!(close(k, (2.0 * cc + 1.0).into(), 1e-12));
        prop_assert!(close(d.g.unwrap(), omega * omega / k, 1e-12));
        prop_assert!(close(d.t.unwrap(), k * k / omega, 1e-12));
        prop_assert!(close(d.d.unwrap(), d.g.unwrap() * k, 1e-12));
        prop_assert!(close(d.p.unwrap(), d.t.unwrap() / k, 1e-12));

        let m = PotentialModel::morse_general(c(v1r, v1i), 1.0.into(), alpha).unwrap();
        let lambda = m.derived(&u).lambda.unwrap();
        let lambda_sq = 2.0 * u.mass() * c(v1r, v1i) / (alpha * alpha * u.hbar() * u.hbar());
        prop_assert!(close(lambda * lambda, lambda_sq, 1e-12));
    }

    #[test]
    fn selfconsistent_riccati_identity(
        v1r in 0.5..30.0f64, v1i in -3.0..3.0f64,
        v2r in -30.0..30.0f64, v2i in -3.0..3.0f64,
        alpha in 0.3..2.0f64, l in 0u32..=5,
    ) {
        let u = UnitSystem::default();
        let model = PotentialModel::morse_general(c(v1r, v1i), c(v2r, v2i), alpha).unwrap();
        let d = model.default_grid();
        let grid = Grid::new(d.x_min(), d.x_max(), 300).unwrap();
        let level = hierarchy::level(&model, l, Mode::SelfConsistent, &u).unwrap();
        let scale = grid
            .points()
            .map(|x| level.partner.eval(x).unwrap().norm())
            .fold(1.0, f64::max);
        let r = hierarchy::riccati_residual(
            &model, l, level.e0, &grid, Mode::SelfConsistent, DerivativeScale::Unit, &u,
        )
        .unwrap();
        prop_assert!(r.max_abs_residual < 1e-13 * scale, "{} vs scale {scale}", r.max_abs_residual);
    }

    #[test]
    fn coefficient_matching_involution(
        c2r in 0.1..50.0f64, c2i in -10.0..10.0f64,
        c1r in -50.0..50.0f64, c1i in -10.0..10.0f64,
        rate in 0.2..3.0f64,
    ) {
        let (c2, c1) = (c(c2r, c2i), c(c1r, c1i));
        let sol = solve_selfconsistent_morse(c2, c1, rate.into()).unwrap();
        let (u, constant) = riccati_apply(&sol.superpotential(0), DerivativeScale::Unit);
        prop_assert!(close(u.coefficient(2, 0), c2, 1e-12));
        prop_assert!(close(u.coefficient(1, 0), c1, 1e-12));
        prop_assert!(close(constant, -sol.e0, 1e-12));
    }

    #[test]
    fn structural_derivative_is_second_order(
        a in -3.0..3.0f64, b in -3.0..3.0f64, q in 0.05..2.0f64,
        qi in -0.5..0.5f64, rate in 0.3..2.0f64, x in -1.0..2.0f64,
    ) {
        let w = SuperpotentialExpr::with_denominator(rate.into(), c(q, qi), 2)
            .exp(a.into(), 1)
            .rational(b.into(), 2, 2)
            .rational(1.0.into(), 0, 1)
            .constant(0.5.into());
        let exact = w.derivative().eval(x).unwrap();
        let fd = |h: f64| (w.eval(x + h).unwrap() - w.eval(x - h).unwrap()) / (2.0 * h);
        let (e1, e2) = ((fd(1e-3) - exact).norm(), (fd(5e-4) - exact).norm());
        let scale = 1.0 + exact.norm();
        prop_assert!(e2 < 1e-5 * scale, "error {e2:e}");
        // halving h cuts an O(h²) error by about four
        if e1 > 1e-9 * scale {
            prop_assert!((2.5..6.0).contains(&(e1 / e2)), "ratio {}", e1 / e2);
        }
    }

    #[test]
    fn log_derivative_of_ground_state(
        lambda in 1.5..8.0f64, q in 0.8..2.0f64, alpha in 0.4..2.0f64, l in 0u32..=2,
        x in -2.0..12.0f64,
    ) {
        let u = UnitSystem::default();
        prop_assume!(lambda * q - (2 * l + 1) as f64 / 2.0 > 0.1);
        let model =
            PotentialModel::morse_general_from_lambda(lambda.into(), q.into(), alpha, &u).unwrap();
        let state = GroundState::for_model(&model, l, Mode::PaperLiteral, &u).unwrap();
        let w = hierarchy::superpotential(&model, l, &u).unwrap();
        let h = 1e-3;
        let f = |y: f64| state.exponent(y).unwrap();
        let slope = (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
        let minus_w = -w.eval(x).unwrap();
        prop_assert!(close(slope, minus_w, 1e-8), "{slope} vs {minus_w}");
    }

    #[test]
    fn real_inputs_give_real_energies(
        lambda in -10.0..10.0f64, q in -5.0..5.0f64, d in -5.0..5.0f64,
        omega in prop_oneof![-5.0..-0.1f64, 0.1..5.0f64],
        n in 0u32..30, l in 0u32..10, u in units(),
    ) {
        let nq = QuantumNumbers::new(n, l);
        prop_assert_eq!(spectra::energy_morse_general(lambda.into(), q.into(), nq).im, 0.0);
        prop_assert_eq!(spectra::energy_morse_nonpt(lambda.into(), nq).im, 0.0);
        prop_assert!(spectra::energy_morse_pt2(d, omega, nq).unwrap().is_finite());
        prop_assert_eq!(spectra::energy_poschl_teller(q.into(), &u, nq).im, 0.0);
    }

    #[test]
    fn hermitian_morse_levels_increase_and_stay_negative(
        v1 in 1.0..60.0f64, v2 in 1.0..60.0f64, alpha in 0.3..2.0f64,
    ) {
        let u = UnitSystem::default();
        let model = PotentialModel::morse_general(v1.into(), v2.into(), alpha).unwrap();
        for mode in [Mode::PaperLiteral, Mode::SelfConsistent] {
            let levels: Vec<f64> = spectra::analytic_spectrum(&model, mode, 0, 20, &u)
                .unwrap()
                .into_iter()
                .filter(|r| r.admissible)
                .map(|r| r.energy.re)
                .collect();
            prop_assert!(levels.iter().all(|&e| e < 0.0), "{:?}", levels);
            prop_assert!(levels.windows(2).all(|w| w[0] < w[1]), "{:?}", levels);
        }
    }

    #[test]
    fn zero_omega_is_rejected(d in -5.0..5.0f64, n in 0u32..5, l in 0u32..5) {
        prop_assert_eq!(
            spectra::energy_morse_pt2(d, 0.0, QuantumNumbers::new(n, l)),
            Err(Error::ZeroOmega)
        );
    }

    #[test]
    fn matching_ignores_input_order(
        energies in prop::collection::vec(-20.0..0.0f64, 1..8),
        noise in prop::collection::vec(-0.01..0.01f64, 8),
        seed in any::<u64>(),
    ) {
        let records: Vec<EnergyRecord> = energies
            .iter()
            .enumerate()
            .map(|(n, &e)| EnergyRecord {
                n: n as u32,
                l: 0,
                energy: e.into(),
                formula: Formula::SelfConsistentMorse,
                admissible: true,
            })
            .collect();
        let numeric: Vec<Complex64> =
            energies.iter().zip(&noise).map(|(e, d)| (e + d).into()).collect();
        let mut shuffled = records.clone();
        shuffled.shuffle(&mut StdRng::seed_from_u64(seed));
        let a = compare(&records, &numeric, 5e-3);
        let b = compare(&shuffled, &numeric, 5e-3);
        prop_assert_eq!(&a, &b);
        // every admissible level is accounted for exactly once
        prop_assert_eq!(a.pairs.len() + a.unmatched_analytic.len(), records.len());
    }

    #[test]
    fn fmt_f64_round_trips(bits in any::<u64>()) {
        let v = f64::from_bits(bits);
        prop_assume!(v.is_finite());
        let back: f64 = fmt_f64(v).parse().unwrap();
        prop_assert_eq!(back.to_bits(), v.to_bits());
    }

    #[test]
    fn unknown_keys_are_rejected(key in "[a-z][a-z_]{2,10}") {
        const KNOWN: &[&str] = &[
            "l", "mode", "include_inadmissible", "tol_abs", "tol_imag", "n_max", "l_max",
        ];
        prop_assume!(!KNOWN.contains(&key.as_str()) && !key.starts_with("param")
            && !key.starts_with("start") && !key.starts_with("step")
            && !key.starts_with("count"));
        let text = format!(
            "[model]\nfamily = morse_non_pt\nD = 9\nP = 1\n[run]\nl = 0\n{key} = 1\n"
        );
        let parsed = RunConfig::parse(&text);
        prop_assert!(
            matches!(parsed, Err(ConfigError::UnknownKey { key: ref k, .. }) if *k == key),
            "{:?}", parsed
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn box_error_ratio_is_four(n in 60usize..300) {
        let ground = |points: usize| {
            let g = Grid::new(0.0, std::f64::consts::PI, points).unwrap();
            let h = build_hamiltonian(&FnPotential(|_| 0.0.into()), &g, &UnitSystem::default())
                .unwrap();
            eigen_spectrum(&h, 1).unwrap().eigenvalues[0].re - 1.0
        };
        let g = Grid::new(0.0, std::f64::consts::PI, n).unwrap();
        let ratio = ground(n) / ground(g.refined().n_points());
        prop_assert!((ratio - 4.0).abs() < 0.02, "ratio {ratio}");
    }

    #[test]
    fn hermitian_spectra_are_real(
        v1 in 2.0..40.0f64, v2 in 2.0..40.0f64, alpha in 0.5..1.5f64,
    ) {
        let model = PotentialModel::morse_general(v1.into(), v2.into(), alpha).unwrap();
        let d = model.default_grid();
        let grid = Grid::new(d.x_min(), d.x_max(), 600).unwrap();
        let spec = bound_spectrum(&model, &grid, &UnitSystem::default()).unwrap();
        prop_assert!(spec.eigenvalues.iter().all(|e| e.im.abs() < 1e-10));
    }

    #[test]
    fn pt_spectra_pair_up(model in pt_model()) {
        // strong coupling against α² makes the discretization so non-normal that
        // roundoff splits near-degenerate real levels; keep to coupling/α² <= 10
        prop_assume!(coupling_ratio(&model) <= 10.0);
        let grid = Grid::symmetric(6.0 * model.length_scale(), 301).unwrap();
        let values = full_spectrum(&model, &grid, &UnitSystem::default()).unwrap();
        let radius = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let report = conjugate_pairing(&values, 1e-8 * radius);
        prop_assert!(report.holds(), "{report:?}");
    }

    #[test]
    fn admissible_records_obey_their_rule(
        lambda in 0.5..8.0f64, q in 0.2..3.0f64, alpha in 0.3..2.0f64,
    ) {
        let u = UnitSystem::default();
        let model =
            PotentialModel::morse_general_from_lambda(lambda.into(), q.into(), alpha, &u).unwrap();
        let params = spectra::spectrum_params(&model, Mode::PaperLiteral, &u).unwrap();
        let is_general = matches!(params, SpectrumParams::MorseGeneral { .. });
        prop_assert!(is_general);
        for r in spectra::analytic_spectrum(&model, Mode::PaperLiteral, 3, 10, &u).unwrap() {
            let bound = lambda * q - (2 * r.l + r.n + 1) as f64 / 2.0 > 0.0;
            prop_assert_eq!(r.admissible, bound);
        }
        let sol = SelfConsistent::for_model(&model, &u).unwrap();
        prop_assert!(sol.decay_at(0).re.is_finite());
    }
}

#[test]
fn bound_state_count_stable_under_refinement() {
    let model = PotentialModel::morse_general(25.0.into(), 50.0.into(), 1.0).unwrap();
    let grid = model.default_grid();
    let u = UnitSystem::default();
    let (coarse, fine) = rayon::join(
        || bound_spectrum(&model, &grid, &u).unwrap(),
        || bound_spectrum(&model, &grid.refined(), &u).unwrap(),
    );
    assert_eq!(coarse.eigenvalues.len(), fine.eigenvalues.len());
    assert_eq!(coarse.eigenvalues.len(), 5);
}
