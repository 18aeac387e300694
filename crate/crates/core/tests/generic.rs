use kitten_core::filters::FilterProfile;
use kitten_core::overlaps::{gamma_analytic, gamma_quadrature, lo_coefficients, matched_lo_fwhm};
use kitten_core::supermodes::{SqueezingSpectrum, SupermodeBasis};
use kitten_core::units::default_grid;
use kitten_core::wigner::{fidelity_closed_form, HeraldedStateParams, TargetState};
use kitten_core::Real;

/// Negativity and fidelity of the heralded state in units where `τ_s = 1`.
fn pipeline<T: Real>(k: T, n: usize, filter_fwhm: Option<T>, lo_scale: T) -> (f64, f64) {
    let tau = T::one();
    let grid = default_grid(T::zero(), tau, n, filter_fwhm, 2049).unwrap();
    let basis = SupermodeBasis::build(tau, T::zero(), n, &grid).unwrap();
    let filter = match filter_fwhm {
        Some(w) => FilterProfile::rectangular(T::zero(), w).unwrap(),
        None => FilterProfile::identity(),
    };
    let gamma = gamma_analytic(tau, n, &filter).unwrap();
    let lo = lo_coefficients(&basis, lo_scale * matched_lo_fwhm(tau)).unwrap();
    let zeta0 = T::lit(0.345_387_763_949_107);
    let sq = SqueezingSpectrum::from_schmidt(k, zeta0, n).unwrap();
    let params = HeraldedStateParams::new(&gamma, &lo, &sq).unwrap();
    let target = TargetState::from_zeta(zeta0).unwrap();
    (
        params.negativity().as_f64(),
        fidelity_closed_form(&params, &target).as_f64(),
    )
}

#[test]
fn single_precision_reproduces_the_kitten() {
    let (ng, f) = pipeline(1.0_f32, 20, None, 1.0);
    assert!((ng - 0.213_061).abs() < 1e-4, "{ng}");
    assert!((f - 1.0).abs() < 1e-4, "{f}");
}

#[test]
fn single_and_double_precision_agree() {
    for (k, w, lo) in [
        (3.0, Some(1.5), 1.2),
        (5.0, None, 0.8),
        (2.0, Some(0.7), 1.0),
    ] {
        let (n32, f32_) = pipeline(k as f32, 40, w.map(|x| x as f32), lo as f32);
        let (n64, f64_) = pipeline(k, 40, w, lo);
        assert!((n32 - n64).abs() < 1e-3, "K={k}: {n32} vs {n64}");
        assert!((f32_ - f64_).abs() < 1e-3, "K={k}: {f32_} vs {f64_}");
    }
}

#[test]
fn single_precision_quadrature_matches_analytic() {
    let grid = default_grid(0.0_f32, 1.0, 20, Some(2.0), 2049).unwrap();
    let basis = SupermodeBasis::build(1.0, 0.0, 20, &grid).unwrap();
    for f in [
        FilterProfile::rectangular(0.0_f32, 2.0).unwrap(),
        FilterProfile::gaussian(0.0_f32, 2.0).unwrap(),
    ] {
        let d = gamma_analytic(1.0, 20, &f)
            .unwrap()
            .max_abs_diff(&gamma_quadrature(&basis, &f).unwrap());
        assert!(d < 1e-4, "{:?}: {d}", f.kind);
    }
}
