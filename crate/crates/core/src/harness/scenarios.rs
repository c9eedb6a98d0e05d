//! Named experiments with default parameters and verdicts.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::report::{ScenarioReport, Series, Verdict};
use super::{
    crouzeix_ratio, l1_induced_norm, power_growth, resolvent_constant, rk_matrix, spectral_check, verify_cfl,
    ResolventMode,
};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::numerical_range::{coercivity_constant, is_negative, max_real_part, numerical_radius, Symmetrizer};
use crate::operators::{
    centered_difference, finite_element_4th, finite_element_4th_symbol, forward_difference, fourier_grid,
    fourier_method, ibvp_onesided, jordan_block, lax_wendroff, variable_circulant, OperatorBundle, Stencil,
};
use crate::stability_polynomials::{
    region_grid, ssp_decomposition, ssp_expand, ssp_residual, taylor_coefficients, Bbox, StabilityPolynomial,
    BISECTION_TOL,
};

pub const SCENARIO_NAMES: [&str; 15] = [
    "fig1",
    "fig2",
    "jordan-growth",
    "fe-unstable",
    "fe-stable",
    "rk4-upwind",
    "rk3-centered",
    "lw",
    "fe4",
    "kreiss-ratio",
    "crouzeix-sweep",
    "fourier-h1",
    "ibvp",
    "variable-coeff",
    "ssp-identity",
];

/// Crouzeix-Palencia constant.
const K_CP: f64 = 1.0 + SQRT_2;
const ANGLES: usize = 720;
const REGION_TOL: f64 = 1e-12;

/// Default parameters of a scenario; these are also the valid override keys.
pub fn scenario_defaults(name: &str) -> Result<Vec<(&'static str, f64)>> {
    let d = match name {
        "fig1" | "fig2" => vec![("nx", 201.0), ("ny", 201.0)],
        "jordan-growth" => vec![("q", 0.5), ("n_max", 256.0), ("threshold", 1e6)],
        "fe-unstable" => vec![("a_lambda", 1.5), ("N", 64.0), ("n_max", 256.0), ("threshold", 1e6)],
        "fe-stable" => vec![("a_lambda", 0.5), ("N", 128.0), ("n_max", 512.0)],
        "rk4-upwind" | "fe4" => vec![("cfl", 2.61), ("N", 64.0), ("n_max", 1000.0)],
        "rk3-centered" => vec![("cfl3", 3f64.sqrt()), ("cfl4", 2.61), ("N", 64.0), ("n_max", 1000.0)],
        "lw" => vec![("a_lambda", 1.0), ("cfl", 2.61), ("N", 64.0), ("n_max", 1000.0)],
        "kreiss-ratio" => vec![("samples", 64.0)],
        "crouzeix-sweep" => vec![("count", 500.0), ("seed", 1.0), ("max_dim", 12.0), ("max_degree", 8.0)],
        "fourier-h1" => vec![("N", 8.0), ("cfl", 2.61), ("n_max", 200.0)],
        "ibvp" => vec![("N", 64.0), ("a", 1.0), ("cfl", 2.61), ("n_max", 1000.0)],
        "variable-coeff" => vec![("amp", 0.5), ("cfl", 2.61), ("N", 64.0), ("n_max", 1000.0)],
        "ssp-identity" => vec![("N", 32.0)],
        _ => {
            return Err(Error::UnknownScenario {
                name: name.to_string(),
                known: SCENARIO_NAMES.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    Ok(d)
}

struct Params(BTreeMap<String, f64>);

impl Params {
    fn f(&self, k: &str) -> f64 {
        self.0[k]
    }

    fn n(&self, k: &str) -> Result<usize> {
        let v = self.0[k];
        if v.fract() != 0.0 || v < 1.0 || v > 1e7 {
            return Err(Error::InvalidParameter(format!("{k} must be a positive integer, got {v}")));
        }
        Ok(v as usize)
    }
}

fn resolve(name: &str, overrides: &BTreeMap<String, f64>) -> Result<Params> {
    let defaults = scenario_defaults(name)?;
    let mut map: BTreeMap<String, f64> = defaults.iter().map(|&(k, v)| (k.to_string(), v)).collect();
    for (k, &v) in overrides {
        if !map.contains_key(k) {
            return Err(Error::InvalidOverride {
                key: k.clone(),
                valid: defaults.iter().map(|d| d.0.to_string()).collect(),
            });
        }
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("override {k} must be finite")));
        }
        map.insert(k.clone(), v);
    }
    Ok(Params(map))
}

/// Runs a named experiment. Overrides must use keys from [`scenario_defaults`].
pub fn run_scenario(name: &str, overrides: &BTreeMap<String, f64>) -> Result<ScenarioReport> {
    let p = resolve(name, overrides)?;
    let mut r = ScenarioReport::new(name, p.0.clone());
    match name {
        "fig1" => fig1(&p, &mut r)?,
        "fig2" => fig2(&p, &mut r)?,
        "jordan-growth" => jordan_growth(&p, &mut r)?,
        "fe-unstable" => fe_unstable(&p, &mut r)?,
        "fe-stable" => fe_stable(&p, &mut r)?,
        "rk4-upwind" => rk4_upwind(&p, &mut r)?,
        "rk3-centered" => rk3_centered(&p, &mut r)?,
        "lw" => lw(&p, &mut r)?,
        "fe4" => fe4(&p, &mut r)?,
        "kreiss-ratio" => kreiss_ratio(&p, &mut r)?,
        "crouzeix-sweep" => crouzeix_sweep(&p, &mut r)?,
        "fourier-h1" => fourier_h1(&p, &mut r)?,
        "ibvp" => ibvp(&p, &mut r)?,
        "variable-coeff" => variable_coeff(&p, &mut r)?,
        "ssp-identity" => ssp_identity(&p, &mut r)?,
        _ => unreachable!("resolve rejects unknown names"),
    }
    Ok(r)
}

fn rk(s: usize) -> StabilityPolynomial<f64> {
    StabilityPolynomial::taylor(s).expect("s >= 1")
}

fn radius(b: &OperatorBundle<f64>) -> Result<f64> {
    let scale = b.matrix().frobenius_norm() + 1.0;
    numerical_radius(b.matrix(), b.symmetrizer(), 1e-14 * scale)
}

/// Verifies the CFL inclusion for `P(dt L)` and checks the power bound
/// `(1 + sqrt 2) C_H` over `n_max` steps. Returns the norms.
fn theorem_run(
    r: &mut ScenarioReport,
    prefix: &str,
    p: &StabilityPolynomial<f64>,
    l: &OperatorBundle<f64>,
    dt: f64,
    n_max: usize,
) -> Result<Vec<f64>> {
    let cfl = verify_cfl(p, dt, l, ANGLES, REGION_TOL)?;
    r.stat(&format!("{prefix}dt_r"), cfl.radius_measured);
    r.push(Verdict::flag(&format!("{prefix}verify_cfl"), cfl.pass));
    let pm = rk_matrix(p, dt, l.matrix());
    let g = power_growth(&pm, n_max, l.symmetrizer(), 1e6)?;
    let bound = K_CP * l.symmetrizer().cond();
    r.push(Verdict::at_most(&format!("{prefix}sup_norm"), g.sup_norm, bound, 1e-6));
    Ok(g.norms)
}

fn fig1(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let bbox = Bbox::new(-5.0, 1.0, -3.5, 3.5)?;
    let targets = [0.0, 0.0, 3f64.sqrt(), 2.0 * SQRT_2];
    for s in 1..=4 {
        let poly = rk(s);
        let got = poly.imaginary_interval_radius(BISECTION_TOL);
        r.push(Verdict::close(&format!("R{s}"), got, targets[s - 1], 1e-6));
        r.grids.push((format!("rk{s}"), region_grid(&poly, bbox, p.n("nx")?, p.n("ny")?)?));
    }
    Ok(())
}

fn fig2(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let bbox = Bbox::new(-3.5, 0.5, -3.5, 3.5)?;
    for (s, target, tol) in [(3, 3f64.sqrt(), 1e-6), (4, 2.61, 0.01)] {
        let poly = rk(s);
        let c = poly.inscribed_semidisc(BISECTION_TOL)?.radius;
        let big_r = poly.imaginary_interval_radius(BISECTION_TOL);
        r.push(Verdict::close(&format!("CFL{s}"), c, target, tol));
        r.push(Verdict::at_most(&format!("CFL{s}_le_R{s}"), c, big_r, 0.0));
        r.stat(&format!("CFL{s}"), c);
        r.grids.push((format!("rk{s}"), region_grid(&poly, bbox, p.n("nx")?, p.n("ny")?)?));
    }
    Ok(())
}

fn jordan_growth(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let q = p.f("q");
    let n_max = p.n("n_max")?;
    let threshold = p.f("threshold");
    let small = jordan_block(32, q)?;
    let large = jordan_block(64, q)?;
    let gs = power_growth(small.matrix(), n_max.max(31), small.symmetrizer(), threshold)?;
    let gl = power_growth(large.matrix(), n_max.max(63), large.symmetrizer(), threshold)?;
    let at = |g: &super::GrowthReport<f64>, n: usize| g.norm(n).unwrap_or(super::DIVERGENCE_CUTOFF);
    let ratio = at(&gl, 63) / at(&gs, 31);
    r.stat("norm_N32_n31", at(&gs, 31));
    r.stat("norm_N64_n63", at(&gl, 63));
    r.push(Verdict::at_least("growth_factor_N64_over_N32", ratio, 10.0, 0.0));
    let first = gl.first_exceed.map(|n| n as f64).unwrap_or(f64::INFINITY);
    r.push(Verdict::at_most("first_exceed_N64", first, 256.0, 0.0));
    r.series = Series::from_norms(&gl.norms);
    Ok(())
}

fn fe_unstable(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let n = p.n("N")?;
    let dx = 1.0 / n as f64;
    let dt = p.f("a_lambda") * dx;
    let l = forward_difference(n, 1.0, dx)?;
    let rk1 = rk(1);
    let sc = spectral_check(&rk1, dt, l.matrix())?;
    r.push(Verdict::at_most("spectral_theta", sc.theta, 1.0, 1e-10));
    let g = power_growth(&rk_matrix(&rk1, dt, l.matrix()), p.n("n_max")?, l.symmetrizer(), p.f("threshold"))?;
    r.push(Verdict::flag("diverged", g.diverged));
    r.push(Verdict::at_most("power_bounded", g.sup_norm, p.f("threshold"), 0.0).expect_fail());
    r.series = Series::from_norms(&g.norms);
    Ok(())
}

fn fe_stable(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let n = p.n("N")?;
    let al = p.f("a_lambda");
    let dx = 1.0 / n as f64;
    let l = forward_difference(n, 1.0, dx)?;
    let rk1 = rk(1);
    let step = rk_matrix(&rk1, al * dx, l.matrix());
    let jq = jordan_block(n, al - 1.0)?;
    r.push(Verdict::at_most("step_equals_jordan", (&step - jq.matrix()).max_abs_entry(), 0.0, 1e-14));
    r.push(Verdict::at_most("l1_norm", l1_induced_norm(jq.matrix()), 1.0, 1e-14));
    let cfl = verify_cfl(&rk1, al * dx, &l, ANGLES, REGION_TOL)?;
    r.push(Verdict::flag("verify_cfl", cfl.pass));
    let g = power_growth(jq.matrix(), p.n("n_max")?, jq.symmetrizer(), 1e6)?;
    r.push(Verdict::at_most("sup_norm", g.sup_norm, 2.0, 1e-9));
    r.series = Series::from_norms(&g.norms);
    Ok(())
}

fn rk4_upwind(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let n = p.n("N")?;
    let l = forward_difference(n, 1.0, 1.0 / n as f64)?;
    let dt = p.f("cfl") / radius(&l)?;
    let norms = theorem_run(r, "", &rk(4), &l, dt, p.n("n_max")?)?;
    r.series = Series::from_norms(&norms);
    Ok(())
}

fn rk3_centered(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let n = p.n("N")?;
    let dx = 1.0 / n as f64;
    let rho = (PI / (n as f64 + 1.0)).cos();
    let l = centered_difference(n, 1.0, dx)?;
    let n_max = p.n("n_max")?;
    let norms = theorem_run(r, "rk3_", &rk(3), &l, p.f("cfl3") / rho * dx, n_max)?;
    theorem_run(r, "rk4_", &rk(4), &l, p.f("cfl4") / rho * dx, n_max)?;
    r.series = Series::from_norms(&norms);
    Ok(())
}

fn lw(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let n = p.n("N")?;
    let dx = 1.0 / n as f64;
    let lambda = p.f("a_lambda");
    let st = Stencil::lax_wendroff(1.0, lambda, dx)?;
    let dt_lw = lambda * dx;
    let worst = (0..4096)
        .map(|k| {
            let q = st.symbol(2.0 * PI * k as f64 / 4096.0).expect("constant stencil");
            (Complex::new(1.0, 0.0) + q * dt_lw).norm()
        })
        .fold(0.0, f64::max);
    r.push(Verdict::at_most("lw_amplification", worst, 1.0, 1e-12));
    let l = lax_wendroff(n, 1.0, lambda, dx)?;
    // The RK step is set independently of the stencil's lambda: 2 a dt / dx = cfl.
    let dt = p.f("cfl") * dx / 2.0;
    let norms = theorem_run(r, "", &rk(4), &l, dt, p.n("n_max")?)?;
    r.series = Series::from_norms(&norms);
    Ok(())
}

fn fe4(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let n = p.n("N")?;
    let dx = 1.0 / n as f64;
    let l = finite_element_4th(n, dx)?;
    let re_max = (0..4096)
        .map(|k| finite_element_4th_symbol(2.0 * PI * k as f64 / 4096.0, dx).re.abs())
        .fold(0.0, f64::max);
    r.push(Verdict::at_most("symbol_real_part", re_max, 0.0, 1e-12));
    r.push(Verdict::flag("negative", is_negative(l.matrix(), l.symmetrizer(), 1e-10)?));
    let dt = p.f("cfl") / radius(&l)?;
    let norms = theorem_run(r, "", &rk(4), &l, dt, p.n("n_max")?)?;
    r.series = Series::from_norms(&norms);
    Ok(())
}

/// Least-squares slope of `y / y[0]` against `x / x[0]`.
fn normalized_slope(x: &[f64], y: &[f64]) -> f64 {
    let xs: Vec<f64> = x.iter().map(|v| v / x[0]).collect();
    let ys: Vec<f64> = y.iter().map(|v| v / y[0]).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = xs.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

fn kreiss_ratio(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let samples = p.n("samples")?;
    let sizes = [8usize, 16, 32];
    let mut res_over_pow = Vec::new();
    let mut pow_over_res = Vec::new();
    for &n in &sizes {
        let m = jordan_block(n, 0.0)?.scaled(n as f64);
        let g = power_growth(m.matrix(), n, m.symmetrizer(), f64::MAX)?;
        let k = resolvent_constant(m.matrix(), ResolventMode::Standard, samples)?.constant;
        r.stat(&format!("sup_power_N{n}"), g.sup_norm);
        r.stat(&format!("resolvent_N{n}"), k);
        r.push(Verdict::at_most(&format!("resolvent_le_power_N{n}"), k, g.sup_norm, 1e-9 * g.sup_norm));
        res_over_pow.push(k / g.sup_norm);
        pow_over_res.push(g.sup_norm / k);
    }
    let x: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    r.push(Verdict::at_least("resolvent_over_power_slope", normalized_slope(&x, &res_over_pow), 0.5, 0.0));
    r.push(Verdict::at_least("power_over_resolvent_slope", normalized_slope(&x, &pow_over_res), 0.5, 0.0));
    r.series = Series {
        n: x,
        norm: pow_over_res,
    };
    Ok(())
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex<f64> {
    Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Random matrix, weight and polynomial for the Crouzeix sweep. Odd indices
/// use a non-trivial weight `B B* + I/2`.
pub(crate) fn random_crouzeix_case(
    rng: &mut ChaCha8Rng,
    index: usize,
    max_dim: usize,
    max_degree: usize,
) -> Result<(ComplexMatrix<f64>, Symmetrizer<f64>, StabilityPolynomial<f64>)> {
    let n = rng.random_range(2..=max_dim.max(2));
    let a = ComplexMatrix::from_fn(n, |_, _| random_complex(rng))?;
    let h = if index % 2 == 1 {
        let b = ComplexMatrix::from_fn(n, |_, _| random_complex(rng))?;
        Symmetrizer::new((&b * &b.adjoint()).shift(Complex::new(0.5, 0.0)))?
    } else {
        Symmetrizer::identity(n)
    };
    let d = rng.random_range(1..=max_degree.max(1));
    let mut coeffs: Vec<f64> = (0..=d).map(|_| rng.random_range(-1.0..1.0)).collect();
    if coeffs[d].abs() < 0.1 {
        coeffs[d] = if coeffs[d] < 0.0 { -0.5 } else { 0.5 };
    }
    let poly = StabilityPolynomial::new(coeffs, format!("random{index}"))?;
    Ok((a, h, poly))
}

fn crouzeix_sweep(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let count = p.n("count")?;
    let seed = p.f("seed");
    if seed < 0.0 || seed.fract() != 0.0 {
        return Err(Error::InvalidParameter("seed must be a nonnegative integer".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    let (max_dim, max_degree) = (p.n("max_dim")?, p.n("max_degree")?);
    let mut worst = 0.0f64;
    let mut above_two = 0usize;
    let mut ratios = Vec::with_capacity(count);
    for i in 0..count {
        let (a, h, poly) = random_crouzeix_case(&mut rng, i, max_dim, max_degree)?;
        let ratio = crouzeix_ratio(&a, &h, &poly, 256)?;
        worst = worst.max(ratio);
        if ratio > 2.0 {
            above_two += 1;
        }
        ratios.push(ratio);
    }
    r.push(Verdict::at_most("max_ratio", worst, K_CP, 1e-6));
    r.stat("max_ratio", worst);
    r.stat("ratios_above_2", above_two as f64);

    let j0 = jordan_block(4, 0.0)?;
    let z3 = StabilityPolynomial::new(vec![0.0, 0.0, 0.0, 1.0], "z^3")?;
    let jr = crouzeix_ratio(j0.matrix(), j0.symmetrizer(), &z3, 256)?;
    r.push(Verdict::close("jordan4_z3_ratio", jr, (PI / 5.0).cos().powi(-3), 1e-9));
    r.series = Series {
        n: (0..ratios.len()).map(|k| k as f64).collect(),
        norm: ratios,
    };
    Ok(())
}

fn fourier_h1(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let modes = p.n("N")?;
    let samples: Vec<f64> = fourier_grid::<f64>(modes).iter().map(|x| x.sin()).collect();
    let l = fourier_method(modes, &samples)?;
    let lam = 2.0 * max_real_part(l.matrix(), l.symmetrizer())?;
    r.push(Verdict::at_most("weighted_lambda_max", lam, 1.0, 1e-8));
    let dt = p.f("cfl") / modes as f64;
    let n_max = p.n("n_max")?;
    let g = power_growth(&rk_matrix(&rk(4), dt, l.matrix()), n_max, l.symmetrizer(), f64::MAX)?;
    let worst = g
        .norms
        .iter()
        .enumerate()
        .map(|(n, &v)| v / (K_CP * (n as f64 * dt / 2.0).exp()))
        .fold(0.0, f64::max);
    r.push(Verdict::at_most("h_norm_over_bound", worst, 1.0, 1e-12));
    r.series = Series::from_norms(&g.norms);
    Ok(())
}

fn ibvp(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let n = p.n("N")?;
    let a = p.f("a");
    let dx = 1.0 / n as f64;
    let l = ibvp_onesided(n, a, dx)?;
    let h = l.symmetrizer().matrix();
    let s = &(&l.matrix().transpose() * h) + &(h * l.matrix());
    let residual = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let expect = if i == 0 && j == 0 { -a / dx } else { 0.0 };
            (s.get(i, j) - Complex::new(expect, 0.0)).norm()
        })
        .fold(0.0, f64::max);
    r.push(Verdict::at_most("energy_identity_residual", residual, 0.0, 1e-14));
    r.push(Verdict::flag("negative", is_negative(l.matrix(), l.symmetrizer(), 1e-10)?));
    let rh = radius(&l)?;
    r.push(Verdict::at_most("weighted_radius_scaled", rh * dx / a, 2.0, 1e-9));
    let norms = theorem_run(r, "", &rk(4), &l, p.f("cfl") / rh, p.n("n_max")?)?;
    r.series = Series::from_norms(&norms);
    Ok(())
}

fn variable_upwind(n: usize, amp: f64) -> Result<(OperatorBundle<f64>, f64, f64)> {
    use std::sync::Arc;
    let speed = move |x: f64| 1.0 + amp * (2.0 * PI * x).sin();
    let dx = 1.0 / n as f64;
    let st = Stencil::variable(vec![(0, Arc::new(move |x| -speed(x))), (1, Arc::new(speed))], dx)?;
    let (b, loc) = variable_circulant(n, &st)?;
    let eta = max_real_part(b.matrix(), b.symmetrizer())?;
    Ok((b, loc, eta))
}

fn variable_coeff(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    let amp = p.f("amp");
    // Summation by parts bounds max Re W by max|a'| / 2.
    let garding = PI * amp;
    let mut per_dx = Vec::new();
    let mut locs = Vec::new();
    for n in [32usize, 64, 128] {
        let (_, loc, eta) = variable_upwind(n, amp)?;
        r.stat(&format!("locality_N{n}"), loc);
        r.stat(&format!("eta_N{n}"), eta);
        r.push(Verdict::at_most(&format!("garding_eta_N{n}"), eta, garding, 1e-9));
        per_dx.push(loc * n as f64);
        locs.push(loc);
    }
    r.push(Verdict::at_most("locality_bounded", locs[2], locs[0], 0.0));
    let spread = per_dx.iter().cloned().fold(0.0, f64::max) / per_dx.iter().cloned().fold(f64::MAX, f64::min);
    r.push(Verdict::at_most("locality_per_dx_ratio", spread, 1.1, 0.0));

    let n = p.n("N")?;
    let (l, _, eta) = variable_upwind(n, amp)?;
    let dt = p.f("cfl") / radius(&l)?;
    let g = power_growth(&rk_matrix(&rk(4), dt, l.matrix()), p.n("n_max")?, l.symmetrizer(), f64::MAX)?;
    let worst = g
        .norms
        .iter()
        .enumerate()
        .map(|(k, &v)| v / (K_CP * (eta.max(0.0) * k as f64 * dt).exp()))
        .fold(0.0, f64::max);
    r.push(Verdict::at_most("growth_over_garding_bound", worst, 1.0, 1e-9));
    r.series = Series::from_norms(&g.norms);
    Ok(())
}

fn ssp_identity(p: &Params, r: &mut ScenarioReport) -> Result<()> {
    use num_rational::Rational64;
    for s in 2..=4 {
        r.push(Verdict::at_most(&format!("residual_s{s}"), ssp_residual::<f64>(s)?, 0.0, 1e-13));
        let terms: Vec<(Rational64, usize)> = ssp_decomposition(s)?.iter().map(|t| (t.weight, t.power)).collect();
        r.push(Verdict::flag(
            &format!("exact_s{s}"),
            ssp_expand(&terms) == taylor_coefficients::<Rational64>(s),
        ));
    }
    let n = p.n("N")?;
    let l = forward_difference(n, 1.0, 1.0 / n as f64)?;
    let beta = coercivity_constant(l.matrix(), l.symmetrizer(), ANGLES)?;
    r.stat("beta", beta);
    let h = l.symmetrizer();
    let r1 = numerical_radius(&rk_matrix(&rk(1), beta, l.matrix()), h, 1e-14)?;
    r.push(Verdict::at_most("fe_radius", r1, 1.0, 1e-10));
    for s in 2..=4 {
        let rs = numerical_radius(&rk_matrix(&rk(s), beta, l.matrix()), h, 1e-14)?;
        r.push(Verdict::at_most(&format!("ssp_radius_s{s}"), rs, 1.0, 1e-10));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_names_and_keys() {
        assert!(matches!(
            run_scenario("nope", &BTreeMap::new()),
            Err(Error::UnknownScenario { .. })
        ));
        let bad: BTreeMap<String, f64> = [("bogus".to_string(), 1.0)].into_iter().collect();
        match run_scenario("fe-stable", &bad) {
            Err(Error::InvalidOverride { key, valid }) => {
                assert_eq!(key, "bogus");
                assert!(valid.contains(&"a_lambda".to_string()));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn slope_of_linear_data() {
        assert!((normalized_slope(&[8.0, 16.0, 32.0], &[1.0, 2.0, 4.0]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ssp_identity_passes() {
        let r = run_scenario("ssp-identity", &BTreeMap::new()).unwrap();
        assert!(r.pass(), "{:#?}", r.verdicts);
    }
}
