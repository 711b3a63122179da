//! One line per acceptance criterion. Run with `--nocapture` to see them.

mod common;

use std::f64::consts::{PI, SQRT_2};
use std::time::{Duration, Instant};

use etur_core::catalog::standard_catalog;
use etur_core::decay::{
    fleming_tau0_time, fujiwara_times, half_life, mandelstam_tamm_check, modified_times, wigner_form_times,
    wigner_stay_time_fn, DecayTimes,
};
use etur_core::extremal::{gaussian_product, gaussian_product_at, schwartz_bound, solve_mu_uncached};
use etur_core::spectral::{equivalent_width_fn, luo_check};
use etur_core::speed::{
    luo_zhang_bound, luo_zhang_kernel_check, luo_zhang_via_margolus_levitin, margolus_levitin_bound,
    margolus_levitin_kernel_check, mt_orthogonality_bound, KERNEL_POINTS,
};
use etur_core::wigner::fock_relaxation;
use etur_core::{run_suite, BoundFilter, EnergyDistribution, GaussianWignerState, SurvivalAmplitude};
use num_complex::Complex64;

const MU_REFERENCE: f64 = 0.29505306;
const GAUSSIAN_UPPER: f64 = 0.30090;

/// Sub-check that reproduces a published closed form which the model does
/// not satisfy; it must stay red.
const KNOWN_RED: &[&str] = &["7e Fock T0 = 1/(2 gamma M)"];

struct Line {
    label: String,
    pass: bool,
    detail: String,
}

#[derive(Default)]
struct Sheet(Vec<Line>);

impl Sheet {
    fn check(&mut self, label: &str, pass: bool, detail: impl Into<String>) {
        self.0.push(Line { label: label.into(), pass, detail: detail.into() });
    }

    fn close(&mut self, label: &str, value: f64, target: f64, tol: f64) {
        let pass = (value - target).abs() <= tol;
        self.check(label, pass, format!("{value:.12} vs {target:.12} (tol {tol:e})"));
    }
}

fn amplitude(p: &EnergyDistribution) -> SurvivalAmplitude {
    SurvivalAmplitude::for_distribution(p).unwrap()
}

fn extremal_constant(s: &mut Sheet) -> f64 {
    let start = Instant::now();
    let mu = solve_mu_uncached().unwrap();
    let took = start.elapsed();
    s.close("1a mu", mu, MU_REFERENCE, 1e-7);
    s.check("1b mu runtime < 5 s", took < Duration::from_secs(5), format!("{took:?}"));
    mu
}

fn gaussian_frequency_time(s: &mut Sheet) {
    let exact = ((PI - 2.0) / (4.0 * PI)).sqrt();
    let (mean, spread) = gaussian_product().unwrap();
    s.close("2a Gaussian dt dw+", mean, exact, 1e-8);
    for sigma in [0.5, 1.0, 2.0] {
        s.close(&format!("2b Gaussian dt dw+ at sigma {sigma}"), gaussian_product_at(sigma).unwrap(), exact, 1e-8);
    }
    s.check("2c spread over sigma", spread <= 1e-8, format!("{spread:e}"));
}

fn schwartz_sandwich(s: &mut Sheet, mu: f64) {
    let lower = schwartz_bound();
    s.close("3a lower end is 1/sqrt(12)", lower, 1.0 / 12f64.sqrt(), 1e-15);
    s.check(
        "3b 1/sqrt(12) < mu < 0.30090",
        lower < mu && mu < GAUSSIAN_UPPER,
        format!("{lower:.8} < {mu:.8} < {GAUSSIAN_UPPER}"),
    );
}

fn gislason(s: &mut Sheet) {
    let cases = [
        ("truncated parabola", EnergyDistribution::truncated_parabola(1.0).unwrap(), 3.0 * PI / (5.0 * 5f64.sqrt())),
        ("Gaussian", EnergyDistribution::gaussian(0.0, 1.0).unwrap(), PI.sqrt() / 2.0),
        ("stepwise", EnergyDistribution::stepwise(1.0).unwrap(), PI / (2.0 * 3f64.sqrt())),
    ];
    let mut products = Vec::new();
    for (name, p, target) in &cases {
        let d = p.delta_e().finite().unwrap();
        let value = fleming_tau0_time(&amplitude(p)).unwrap() * d;
        s.close(&format!("4 tau0 dE {name}"), value, *target, 1e-6);
        products.push(value);
    }
    s.check(
        "4 strict ordering",
        products[0] < products[1] && products[1] < products[2],
        format!("{:.8} < {:.8} < {:.8}", products[0], products[1], products[2]),
    );
}

fn lorentzian(s: &mut Sheet) {
    let gamma = 1.0;
    let p = EnergyDistribution::lorentzian(0.0, gamma).unwrap();
    let q = amplitude(&p);
    s.close("5a tau Gamma", fleming_tau0_time(&q).unwrap() * gamma, 1.0, 1e-6);
    let m = modified_times(&p, &q).unwrap();
    s.close("5b tau* dE*", m.tau_star * m.delta_e_star, PI / 4.0, 1e-6);
    s.close("5c tau** dE**", m.tau_2star * m.delta_e_2star, PI / 2.0, 1e-6);
    let w = wigner_form_times(&p, &q).unwrap();
    s.close("5d tau~ eps", w.tau_tilde * w.epsilon, 1.0 / SQRT_2, 1e-6);
    let f = fujiwara_times(&q, &p).unwrap();
    s.close("5e tau1", f.tau1, 1.0 / gamma, 1e-6);
    s.close("5f delta1 t", f.delta1t, 1.0 / gamma, 1e-6);
    s.close("5g eps delta1 t", f.product.to_f64(), 0.5, 1e-6);
}

fn gaussian_decay(s: &mut Sheet) {
    let p = EnergyDistribution::gaussian(0.0, 1.0).unwrap();
    let q = amplitude(&p);
    let w = wigner_form_times(&p, &q).unwrap();
    s.close("6a Gaussian tau~ eps", w.tau_tilde * w.epsilon, 0.5, 1e-6);
    let f = fujiwara_times(&q, &p).unwrap();
    s.close("6b Gaussian eps delta1 t", f.product.to_f64(), 0.301, 1e-3);
    let b = EnergyDistribution::bhattacharyya(1.0).unwrap();
    let t_half = half_life(&amplitude(&b)).unwrap();
    s.close("6c Bhattacharyya T1/2 dE", t_half * b.delta_e().to_f64(), 1.5f64.sqrt(), 1e-6);
}

fn wigner_states(s: &mut Sheet) {
    let mut rng = common::rng(2024);
    let worst_pure = (0..50)
        .map(|_| (common::product(&common::random_pure_state(&mut rng)) - 1.0).abs())
        .fold(0.0, f64::max);
    s.check("7a 50 pure states 2(dE T0)^2 = 1", worst_pure <= 1e-9, format!("worst deviation {worst_pure:e}"));

    let mut held = 0;
    for i in 0..100 {
        let state = common::random_mixed_state(&mut rng, i % 4 == 0);
        if state.stationarity_bound_check().is_ok_and(|r| r.satisfied) {
            held += 1;
        }
    }
    s.check("7b 100 mixed states obey the bound", held == 100, format!("{held}/100"));

    let free = GaussianWignerState::free_packet(0.2, 0.5, 2.0, 1.5, 0.4, 1.0, 1.0).unwrap();
    let expected = free.purity().powi(-3);
    s.close("7c free packet equality", common::product(&free), expected, 1e-9 * expected);

    let mut worst = 0.0f64;
    for _ in 0..20 {
        let state = common::random_mixed_state(&mut rng, false);
        let closed = state.stationarity_time().to_f64();
        let oracle = state.wigner_t0_oracle().unwrap().to_f64();
        worst = worst.max((oracle - closed).abs() / closed);
    }
    s.check("7d phase-space oracle", worst <= 1e-5, format!("worst relative {worst:e}"));

    let (m, gamma) = (3, 0.5);
    let fock = fock_relaxation(m, gamma).unwrap();
    s.check("7e Fock product = 0", fock.product == 0.0, format!("{}", fock.product));
    s.close("7e Fock T0 = 1/(2 gamma M)", fock.t0, 1.0 / (2.0 * gamma * m as f64), 1e-12);
}

fn speed_limits(s: &mut Sheet) {
    let p = EnergyDistribution::two_point(0.0, 2.0, 0.5).unwrap();
    let q = amplitude(&p);
    let ml = margolus_levitin_bound(&p).unwrap();
    s.close("8a two-level <E> T_perp", ml.lhs, PI / 2.0, 1e-9);
    let mt = mt_orthogonality_bound(&q, p.delta_e().to_f64()).unwrap();
    s.close("8b two-level dE T_perp", mt.lhs, PI / 2.0, 1e-9);
    let kernel = margolus_levitin_kernel_check(KERNEL_POINTS).unwrap();
    s.check("8c ML kernel", kernel.holds(), format!("{}", kernel.worst));
    for exponent in [0.5, 1.0, 1.5, 2.0] {
        let k = luo_zhang_kernel_check(exponent, KERNEL_POINTS).unwrap();
        s.check(&format!("8c Luo-Zhang kernel p = {exponent}"), k.holds(), format!("{}", k.worst));
    }
    let mut worst = 0.0f64;
    for p in [
        EnergyDistribution::two_point(0.0, 2.0, 0.5).unwrap(),
        EnergyDistribution::stepwise(1.0).unwrap(),
        EnergyDistribution::truncated_parabola(1.0).unwrap(),
    ] {
        for alpha in [0.0, 0.25, 0.5] {
            let direct = luo_zhang_bound(&p, alpha, 1.0).unwrap().rhs;
            let routed = luo_zhang_via_margolus_levitin(&p, alpha).unwrap();
            worst = worst.max((direct - routed).abs());
        }
    }
    s.check("8d Luo-Zhang p = 1 routes", worst <= 1e-9, format!("worst {worst:e}"));
}

fn property_suites(s: &mut Sheet) {
    let laws = [
        EnergyDistribution::lorentzian(0.0, 1.0).unwrap(),
        EnergyDistribution::gaussian(0.0, 1.0).unwrap(),
        EnergyDistribution::truncated_parabola(1.0).unwrap(),
        EnergyDistribution::stepwise(1.0).unwrap(),
        EnergyDistribution::bhattacharyya(1.0).unwrap(),
        EnergyDistribution::two_point(0.0, 2.0, 0.5).unwrap(),
        EnergyDistribution::two_point(-1.0, 3.0, 0.2).unwrap(),
    ];
    let mut luo_ok = true;
    let mut cosine_ok = true;
    let mut consistency = 0.0f64;
    for p in &laws {
        let q = amplitude(p);
        luo_ok &= luo_check(&q).unwrap().holds();
        if let Some(d) = p.delta_e().finite() {
            cosine_ok &= mandelstam_tamm_check(&q, d).unwrap().cosine.holds();
        }
        if let Some((a, b)) = DecayTimes::compute(p, &q).unwrap().consistency(p.hbar) {
            consistency = consistency.max(a).max(b);
        }
    }
    s.check("9a Luo inequality for every catalog law", luo_ok, "");
    s.check("9b MT cosine for finite dE", cosine_ok, "");
    let exp = EnergyDistribution::lorentzian(0.0, 1.0).unwrap();
    let window = mandelstam_tamm_check(&amplitude(&exp), 1.0).unwrap().exponential_window.unwrap();
    s.check("9c exponential violation window", window.matches(), format!("{window:?}"));
    s.check("9d modified-time consistency", consistency <= 1e-6, format!("worst relative {consistency:e}"));

    let sigma = 0.7;
    let f = |x: f64| (-x * x / (2.0 * sigma * sigma)).exp();
    let ft = |k: f64| sigma * (2.0 * PI).sqrt() * (-sigma * sigma * k * k / 2.0).exp();
    let widths = equivalent_width_fn(f, sigma).unwrap() * equivalent_width_fn(ft, 1.0 / sigma).unwrap();
    s.close("9e equivalent widths", widths, 2.0 * PI, 1e-6);

    let start = Instant::now();
    let suite = run_suite(&standard_catalog().unwrap(), &BoundFilter::All).unwrap();
    let took = start.elapsed();
    s.check("9f full suite passes", suite.passed(), format!("{:?}", suite.summary));
    s.check("9g full suite < 60 s", took < Duration::from_secs(60), format!("{took:?}"));
}

fn stay_time(s: &mut Sheet) {
    let width = 1.0;
    let eta = |e: f64| Complex64::new(e * (-3.0 * e * e / (4.0 * width * width)).exp(), 0.0);
    let stay = wigner_stay_time_fn(eta, 0.0, 1.0, 12.0 * width, 4001).unwrap();
    s.close("10 eps_W tau_W", stay.product, 1.5, 1e-4);
}

#[test]
fn acceptance() {
    let mut s = Sheet::default();
    let mu = extremal_constant(&mut s);
    gaussian_frequency_time(&mut s);
    schwartz_sandwich(&mut s, mu);
    gislason(&mut s);
    lorentzian(&mut s);
    gaussian_decay(&mut s);
    wigner_states(&mut s);
    speed_limits(&mut s);
    property_suites(&mut s);
    stay_time(&mut s);

    let mut unexpected = Vec::new();
    for line in &s.0 {
        let red = KNOWN_RED.contains(&line.label.as_str());
        let tag = match (line.pass, red) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("{tag:<13} {:<42} {}", line.label, line.detail);
        if line.pass == red {
            unexpected.push(line.label.clone());
        }
    }
    assert!(unexpected.is_empty(), "unexpected outcome for {unexpected:?}");
}
