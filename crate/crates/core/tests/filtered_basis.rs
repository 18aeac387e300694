use kitten_core::experiments::{FilterSpec, Scenario, Setup};
use kitten_core::filtered_basis::*;
use kitten_core::filters::FilterProfile;
use kitten_core::supermodes::SupermodeBasis;
use nalgebra::DMatrix;

fn lab_basis(modes: usize) -> (Scenario, SupermodeBasis<f64>) {
    let scenario = Scenario {
        modes: Some(modes),
        ..Scenario::default()
    };
    let setup = Setup::new(&scenario, 9.0, FilterSpec::Rectangular { fwhm_nm: 5.0 }).unwrap();
    (scenario, setup.basis)
}

fn filter(
    scenario: &Scenario,
    basis: &SupermodeBasis<f64>,
    gaussian: bool,
    nm: f64,
) -> FilterProfile<f64> {
    let w = scenario.nm_to_angular(nm).unwrap();
    if gaussian {
        FilterProfile::gaussian(basis.center(), w).unwrap()
    } else {
        FilterProfile::rectangular(basis.center(), w).unwrap()
    }
}

fn gram_deviation(basis: &SupermodeBasis<f64>, set: &[Vec<f64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in set.iter().enumerate() {
        for (j, b) in set.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((basis.grid().inner(a, b) - target).abs());
        }
    }
    worst
}

fn is_even(v: &[f64]) -> bool {
    let n = v.len();
    (0..n).all(|i| (v[i] - v[n - 1 - i]).abs() <= 1e-12 * (1.0 + v[i].abs()))
}

fn is_odd(v: &[f64]) -> bool {
    let n = v.len();
    (0..n).all(|i| (v[i] + v[n - 1 - i]).abs() <= 1e-12 * (1.0 + v[i].abs()))
}

#[test]
fn first_parallel_mode_is_normalized_filtered_ground_mode() {
    let (sc, b) = lab_basis(40);
    for gaussian in [true, false] {
        let f = filter(&sc, &b, gaussian, 5.0);
        let par = build_parallel(&b, &f, 5).unwrap();
        let t: Vec<f64> = b
            .grid()
            .samples()
            .map(|w| f.transmission(w).unwrap())
            .collect();
        let raw: Vec<f64> = b.mode(0).iter().zip(&t).map(|(p, t)| p * t).collect();
        let norm = b.grid().inner(&raw, &raw).sqrt();
        let dev = raw
            .iter()
            .zip(&par[0])
            .map(|(r, p)| (r / norm - p).abs())
            .fold(0.0, f64::max);
        assert!(dev < 1e-10, "gaussian={gaussian}: {dev:e}");
    }
}

#[test]
fn gaussian_filter_modes_have_increasing_nodes_and_no_perp() {
    let (sc, b) = lab_basis(40);
    let f = filter(&sc, &b, true, 5.0);
    let fb = FilteredBasis::build(&b, &f, 6, 6).unwrap();
    assert!(fb.perp.is_empty());
    assert!(fb.q.iter().all(|row| row.is_empty()));
    for (n, mode) in fb.parallel.iter().enumerate() {
        assert_eq!(count_nodes(mode, 1e-8), n);
        assert!(if n % 2 == 0 {
            is_even(mode)
        } else {
            is_odd(mode)
        });
    }
    // ψ∥₀ is narrower than ψ₀
    let second_moment = |v: &[f64]| -> f64 {
        let x2: Vec<f64> = b.grid().offsets().map(|u| u * u).collect();
        let w: Vec<f64> = v.iter().zip(&x2).map(|(a, x)| a * x).collect();
        b.grid().inner(&w, v)
    };
    assert!(second_moment(&fb.parallel[0]) < second_moment(b.mode(0)));
}

#[test]
fn rectangular_filter_modes_live_on_disjoint_supports() {
    let (sc, b) = lab_basis(40);
    let f = filter(&sc, &b, false, 5.0);
    let fb = FilteredBasis::build(&b, &f, 10, 10).unwrap();
    assert_eq!(fb.parallel.len(), 10);
    assert_eq!(fb.perp.len(), 10);
    let t: Vec<f64> = b
        .grid()
        .samples()
        .map(|w| f.transmission(w).unwrap())
        .collect();
    let r: Vec<f64> = b
        .grid()
        .samples()
        .map(|w| f.reflection(w).unwrap())
        .collect();
    for (n, perp) in fb.perp.iter().enumerate() {
        assert_eq!(count_nodes(perp, 1e-8), n);
        assert!(if n % 2 == 0 {
            is_even(perp)
        } else {
            is_odd(perp)
        });
        let tpsi = perp
            .iter()
            .zip(&t)
            .map(|(p, t)| (p * t).abs())
            .fold(0.0, f64::max);
        assert!(tpsi < 1e-12);
        let rpsi = perp
            .iter()
            .zip(&r)
            .map(|(p, r)| (p * r - p).abs())
            .fold(0.0, f64::max);
        assert!(rpsi < 1e-12);
        for par in &fb.parallel {
            let prod = par
                .iter()
                .zip(perp)
                .map(|(a, b)| (a * b).abs())
                .fold(0.0, f64::max);
            assert!(prod < 1e-12);
        }
    }
    for (n, par) in fb.parallel.iter().enumerate() {
        assert_eq!(count_nodes(par, 1e-8), n);
    }
}

#[test]
fn combined_set_is_orthonormal() {
    let (sc, b) = lab_basis(40);
    for (gaussian, nm) in [(false, 5.0), (false, 1.0), (true, 5.0), (true, 1.0)] {
        let f = filter(&sc, &b, gaussian, nm);
        let fb = FilteredBasis::build(&b, &f, 40, 40).unwrap();
        let all: Vec<Vec<f64>> = fb.parallel.iter().chain(&fb.perp).cloned().collect();
        let dev = gram_deviation(&b, &all);
        assert!(dev < 1e-10, "gaussian={gaussian} {nm} nm: {dev:e}");
    }
}

#[test]
fn narrow_filters_drop_dependent_directions() {
    let (sc, b) = lab_basis(40);
    let f = filter(&sc, &b, false, 0.05);
    let par = build_parallel(&b, &f, 40).unwrap();
    assert!(par.len() < 40, "{}", par.len());
    assert!(gram_deviation(&b, &par) < 1e-10);
}

#[test]
fn supermodes_are_reconstructed_from_both_sets() {
    let (sc, b) = lab_basis(40);
    let f = filter(&sc, &b, false, 5.0);
    let (m, m_perp) = (12, 10);
    let fb = FilteredBasis::build(&b, &f, m, m_perp).unwrap();
    for k in 0..m.min(m_perp) {
        let rec = fb.reconstruct(k);
        let diff: Vec<f64> = rec.iter().zip(b.mode(k)).map(|(a, c)| a - c).collect();
        let res = b.grid().inner(&diff, &diff).sqrt();
        assert!(res < 1e-6, "{k}: {res:e}");
    }
    // Σ_n p_kn p_k'n + q_kn q_k'n = δ_kk' on the captured span
    for k in 0..m.min(m_perp) {
        for l in 0..m.min(m_perp) {
            let s: f64 = fb.p[k]
                .iter()
                .zip(&fb.p[l])
                .map(|(a, c)| a * c)
                .sum::<f64>()
                + fb.q[k]
                    .iter()
                    .zip(&fb.q[l])
                    .map(|(a, c)| a * c)
                    .sum::<f64>();
            let target = if k == l { 1.0 } else { 0.0 };
            assert!((s - target).abs() < 1e-6);
        }
    }
}

#[test]
fn column_relations_converge_with_the_mode_count() {
    // Σ_k p_{k n1} q_{k n2} vanishes only as the supermode sum becomes complete
    let mut previous = f64::INFINITY;
    for modes in [40, 80, 160] {
        let (sc, b) = lab_basis(modes);
        let f = filter(&sc, &b, false, 5.0);
        let fb = FilteredBasis::build(&b, &f, 4, 4).unwrap();
        let mut worst: f64 = 0.0;
        for a in 0..fb.parallel.len() {
            for c in 0..fb.perp.len() {
                let s: f64 = (0..modes).map(|k| fb.p[k][a] * fb.q[k][c]).sum();
                worst = worst.max(s.abs());
            }
        }
        assert!(worst < previous, "{modes}: {worst} !< {previous}");
        previous = worst;
    }
}

#[test]
fn identity_filter_change_of_basis_is_trivial() {
    let (_, b) = lab_basis(20);
    let fb = FilteredBasis::build(&b, &FilterProfile::identity(), 20, 20).unwrap();
    assert!(fb.perp.is_empty());
    for k in 0..20 {
        for n in 0..20 {
            let target = if k == n { 1.0 } else { 0.0 };
            assert!((fb.p[k][n] - target).abs() < 1e-8);
        }
    }
    for a in 0..20 {
        for c in 0..20 {
            let s: f64 = (0..20).map(|k| fb.p[k][a] * fb.p[k][c]).sum();
            assert!((s - if a == c { 1.0 } else { 0.0 }).abs() < 1e-6);
        }
    }
}

#[test]
fn transmission_matrices() {
    let (sc, b) = lab_basis(40);
    let rect = filter(&sc, &b, false, 5.0);
    let fb = FilteredBasis::build(&b, &rect, 12, 0).unwrap();
    for l in 0..12 {
        for k in 0..12 {
            let target = if l == k { 1.0 } else { 0.0 };
            assert!((fb.t_matrix[l][k] - target).abs() < 1e-8);
            assert!(fb.r_matrix[l][k].abs() < 1e-8);
        }
    }
    let gauss = filter(&sc, &b, true, 5.0);
    let fb = FilteredBasis::build(&b, &gauss, 12, 0).unwrap();
    let m = DMatrix::from_fn(12, 12, |i, j| fb.t_matrix[i][j]);
    assert!((m.clone() - m.transpose()).abs().max() < 1e-14);
    for ev in m.symmetric_eigenvalues().iter() {
        assert!(*ev > 0.0 && *ev <= 1.0 + 1e-12, "{ev}");
    }
}
