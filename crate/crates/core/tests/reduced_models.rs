mod oracles;

use std::f64::consts::TAU;

use num_complex::Complex64 as C;
use oracles::{bessel_k, cx, decaying_log_derivative, rng, Trig};
use rand::Rng;
use ttstar_core::reduced::{
    asymptotic_decay_check, b_limit_consistency, decaying_profile, laplace_map, laplace_profile, laplace_residual,
    mode_separate, pcf_operator, pcf_residual, solve_modes, su11_field_operator, su11_field_residual,
    symbol_ttstar_oracle, Annulus, BoundaryData, PhaseField, ReducedConnection, SymbolField,
};
use ttstar_core::{deformation_b, su11_element, symbol_reality_residual, CMatrix, Error, PlaneGrid};

fn phase(center: (f64, f64), h: f64, n: usize, m: usize, f: impl Fn(f64, f64, f64) -> f64 + Sync) -> PhaseField<f64> {
    PhaseField::from_fn(PlaneGrid::centered(center, h, n).unwrap(), m, f).unwrap()
}

fn abelian(alpha: f64) -> CMatrix<f64> {
    CMatrix::from_diag(&[C::from_polar(1.0, alpha), C::from_polar(1.0, -alpha)])
}

fn sigma3() -> CMatrix<f64> {
    CMatrix::from_diag(&[cx(1.0, 0.0), cx(-1.0, 0.0)])
}

// Laplace equation

#[test]
fn laplace_examples() {
    let lin = phase((0.4, 0.1), 0.1, 5, 16, |x, _, _| x);
    assert!(laplace_residual(&lin, (2, 2, 5)).unwrap().abs() < 1e-12);
    let quad = phase((0.4, 0.1), 0.1, 5, 16, |x, _, _| x * x);
    assert!((laplace_residual(&quad, (2, 2, 5)).unwrap() - 2.0).abs() < 1e-10);
    assert_eq!(laplace_residual(&quad, (4, 2, 0)), Err(Error::BoundaryNode(4, 2)));
    assert!(matches!(
        laplace_residual(&quad, (2, 2, 16)),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn harmonic_phase_converges_quadratically() {
    let res = |h: f64| {
        let phi = phase((0.2, -0.3), h, 5, 16, |x, _, th| (TAU * x).exp() * (TAU * th).cos());
        laplace_profile(&phi, (2, 2))
            .unwrap()
            .iter()
            .fold(0.0f64, |w, v| w.max(v.abs()))
    };
    let (a, b, c) = (res(0.04), res(0.02), res(0.01));
    for ratio in [a / b, b / c] {
        assert!((ratio - 4.0).abs() < 0.8, "ratio {ratio}");
    }
}

#[test]
fn laplace_map_covers_interior_in_order() {
    let phi = phase((0.0, 0.0), 0.1, 6, 8, |x, y, th| x * y + (TAU * th).sin());
    let map = laplace_map(&phi).unwrap();
    let nodes: Vec<_> = map.iter().map(|e| e.0).collect();
    assert_eq!(nodes, phi.grid().interior_nodes());
    for (_, p) in &map {
        assert!(p
            .iter()
            .zip(0..)
            .all(|(&v, m)| (v + TAU * TAU * (TAU * m as f64 / 8.0).sin()).abs() < 1e-9));
    }
}

#[test]
fn phase_symbols_satisfy_reality() {
    let mut r = rng(31);
    let p = Trig::real(&mut r, 4, 1.5);
    let phi = phase((1.0, 0.6), 0.1, 3, 32, |x, y, th| p.eval(th).re + 0.3 * x - y);
    let s = phi.model_a_symbol(1, 2).unwrap();
    let (x1, x2) = phi.grid().point(1, 2);
    let t = cx(x1, x2) / 2.0;
    assert!(symbol_reality_residual(&s, t, None).unwrap() < 1e-12);
    let origin = phase((0.0, 0.0), 0.1, 3, 8, |_, _, _| 0.0);
    assert_eq!(origin.model_a_symbol(1, 1).unwrap_err(), Error::ZeroCoupling);
}

// Truncated matrix residual against the scalar Laplace residual

#[test]
fn matrix_and_scalar_residuals_agree() {
    let cases: Vec<(&str, Box<dyn Fn(f64, f64, f64) -> f64 + Sync>)> = vec![
        ("zero", Box::new(|_, _, _| 0.0)),
        ("linear", Box::new(|x, y, _| 0.2 * x - 0.1 * y)),
        ("tilted", Box::new(|x, _, th| 1e-3 * x * (TAU * th).cos())),
        (
            "mix",
            Box::new(|x, y, th| 0.05 * (x - 4.0) * (y - 2.0) + 0.01 * (TAU * th).sin() + 0.02 * (x - 4.0).powi(2)),
        ),
    ];
    for (name, f) in cases {
        let phi = phase((4.0, 2.0), 2e-3, 3, 64, f);
        let rep = symbol_ttstar_oracle(&phi, (1, 1), 16).unwrap();
        assert!(rep.gap < 1e-6, "{name}: gap {:e}", rep.gap);
        if name == "tilted" {
            // T(cos 2πθ) carries 1/2 on its first off-diagonals
            assert!(rep.scalar_residual > 0.1 && (rep.matrix_residual / rep.scalar_residual - 0.5).abs() < 1e-6);
        }
        if name == "zero" || name == "linear" {
            assert!(rep.scalar_residual < 1e-9 && rep.matrix_residual < 1e-6);
        }
    }
}

// Mode separation and radial problems

fn k0_cos_field() -> PhaseField<f64> {
    let k0 = |r: f64| bessel_k(0.0, TAU * r.max(0.1));
    phase((0.0, 0.0), 0.01, 221, 8, move |x, y, th| {
        k0(x.hypot(y)) * (TAU * th).cos()
    })
}

#[test]
fn bessel_mode_separates() {
    let phi = k0_cos_field();
    let annulus = Annulus {
        r0: 0.5,
        r1: 1.0,
        radial_nodes: 26,
        angular_samples: 32,
    };
    let set = mode_separate(&phi, &annulus).unwrap();
    let mode = set.mode(1, 0).unwrap();
    assert!(set.ode_residual(mode) < 1e-6, "{:e}", set.ode_residual(mode));
    let expect = bessel_k(0.0, TAU * 0.5) / 2.0;
    assert!((mode.amplitudes[0].re - expect).abs() < 1e-8 * expect);
    let other = set.modes.iter().filter(|m| m.k.abs() != 1 || m.n != 0);
    assert!(other.flat_map(|m| m.amplitudes.iter()).all(|a| a.norm() < 1e-9));
}

#[test]
fn log_field_has_only_zero_mode() {
    let phi = phase((0.0, 0.0), 0.01, 221, 8, |x, y, _| x.hypot(y).max(0.1).ln());
    let annulus = Annulus {
        r0: 0.5,
        r1: 1.0,
        radial_nodes: 21,
        angular_samples: 16,
    };
    let set = mode_separate(&phi, &annulus).unwrap();
    for m in set.modes.iter().filter(|m| m.k != 0) {
        assert!(m.amplitudes.iter().all(|a| a.norm() < 1e-12));
    }
    let zero = set.mode(0, 0).unwrap();
    for (r, a) in set.radii.iter().zip(&zero.amplitudes) {
        assert!((a.re - r.ln()).abs() < 1e-7);
    }
    assert!(set.ode_residual(zero) < 1e-6);
}

#[test]
fn thin_annulus_rejected() {
    let phi = phase((0.0, 0.0), 0.05, 41, 4, |_, _, _| 1.0);
    let annulus = Annulus {
        r0: 0.5,
        r1: 0.8,
        radial_nodes: 7,
        angular_samples: 8,
    };
    assert_eq!(mode_separate(&phi, &annulus).unwrap_err(), Error::AnnulusTooThin(7));
}

fn radii(r0: f64, r1: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| r0 + (r1 - r0) * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn radial_profiles_match_bessel_k() {
    let r = radii(0.5, 2.0, 31);
    for (k, n) in [(1i64, 0i64), (1, 2), (2, 1), (3, 0)] {
        let p = decaying_profile(k, n, &r).unwrap();
        let z = TAU * k as f64;
        let base = bessel_k(n as f64, z * r[0]);
        for (&ri, &v) in r.iter().zip(&p.values) {
            let want = bessel_k(n as f64, z * ri) / base;
            // log-derivative error below 1e-6, integrated from r₀
            let tol = 1e-6 * (1.0 + z * (ri - r[0]));
            assert!((v - want).abs() < tol * want, "k={k} n={n} r={ri}: {v} vs {want}");
        }
        let oracle = decaying_log_derivative(k, n, r[r.len() - 1]);
        assert!((p.outer_log_derivative() - oracle).abs() < 1e-6 * oracle.abs());
    }
}

#[test]
fn zero_theta_mode_profiles_are_exact() {
    let r = radii(0.5, 3.0, 11);
    let flat = decaying_profile(0, 0, &r).unwrap();
    assert!(flat.values.iter().all(|&v| v == 1.0));
    let inverse = decaying_profile(0, 2, &r).unwrap();
    for (&ri, &v) in r.iter().zip(&inverse.values) {
        assert!((v - (0.5 / ri).powi(2)).abs() < 1e-14);
    }
}

#[test]
fn decay_check_examples() {
    let r = radii(0.5, 5.0, 41);
    let k1 = decaying_profile(1, 0, &r).unwrap();
    let d1 = asymptotic_decay_check(&r, &k1.values).unwrap();
    assert!((-TAU * 1.02..=-TAU * 0.98).contains(&d1), "{d1}");
    assert!((d1 - decaying_log_derivative(1, 0, 5.0)).abs() < 1e-3);

    let k2 = decaying_profile(2, 0, &r).unwrap();
    let d2 = asymptotic_decay_check(&r, &k2.values).unwrap();
    assert!((d2 / (-2.0 * TAU) - 1.0).abs() < 0.02, "{d2}");

    assert!(asymptotic_decay_check(&r, &vec![3.0; r.len()]).unwrap().abs() < 1e-12);
    let growing: Vec<f64> = r.iter().map(|x| (TAU * x).exp()).collect();
    assert_eq!(asymptotic_decay_check(&r, &growing), Err(Error::NonDecaying));
    assert!(matches!(
        asymptotic_decay_check(&r[..5], &k1.values[..5]),
        Err(Error::AnnulusTooThin(5))
    ));
}

#[test]
fn decay_rate_near_first_radius_matches_bessel_ratio() {
    // at r = 5/(2π) the decaying k = 1 solution is K₀(2πr) with h'/h = -2π K₁(5)/K₀(5)
    let r1 = 5.0 / TAU;
    let p = decaying_profile(1, 0, &radii(0.5, r1, 20)).unwrap();
    let bessel = -TAU * bessel_k(1.0, 5.0) / bessel_k(0.0, 5.0);
    assert!((p.outer_log_derivative() - bessel).abs() < 1e-6);
    assert!((p.outer_log_derivative() - decaying_log_derivative(1, 0, r1)).abs() < 1e-6);
}

fn boundary(r0: f64, na: usize, m: usize, f: impl Fn(f64, f64) -> f64) -> BoundaryData<f64> {
    let mut values = Vec::with_capacity(na * m);
    for a in 0..na {
        for j in 0..m {
            values.push(f(TAU * a as f64 / na as f64, j as f64 / m as f64));
        }
    }
    BoundaryData {
        r0,
        angular_samples: na,
        theta_samples: m,
        values,
    }
}

#[test]
fn solve_modes_reproduces_boundary_and_decays() {
    let data = boundary(0.5, 16, 8, |vt, th| {
        0.7 + 0.4 * (TAU * th).cos() + 0.1 * (TAU * th + 2.0 * vt).sin()
    });
    let sol = solve_modes(&data, 2.0, 61).unwrap();
    let keys: Vec<_> = sol.modes.iter().map(|m| (m.k, m.n)).collect();
    assert_eq!(keys, vec![(-1, -2), (-1, 0), (0, 0), (1, 0), (1, 2)]);
    for m in &sol.modes {
        let want = if m.k == 0 {
            0.0
        } else {
            decaying_log_derivative(m.k, m.n, 2.0)
        };
        assert!((m.decay_rate - want).abs() < 1e-6 * want.abs().max(1.0));
    }
    for (a, row) in data.values.chunks(8).enumerate() {
        let vt = TAU * a as f64 / 16.0;
        for (j, &v) in row.iter().enumerate() {
            let got = sol.evaluate(0.5 * vt.cos(), 0.5 * vt.sin(), j as f64 / 8.0).unwrap();
            assert!((got - v).abs() < 1e-12);
        }
    }
    assert!(sol.evaluate(3.0, 0.0, 0.0).is_none());

    let grid = PlaneGrid::centered((0.0, 0.0), 0.05, 81).unwrap();
    let (field, nodes) = sol.reconstruct(grid, 8).unwrap();
    assert!(!nodes.is_empty() && nodes.len() < grid.interior_nodes().len());
    assert!(nodes.iter().all(|&(i, j)| field.value(i, j, 0) != 0.0));

    // the reconstruction is harmonic, so the discrete Laplacian decays like h²
    for center in [(0.9, 0.3), (-0.4, -1.2), (0.0, 1.7)] {
        let res = |h: f64| {
            let (f, nodes) = sol.reconstruct(PlaneGrid::centered(center, h, 3).unwrap(), 8).unwrap();
            assert_eq!(nodes, vec![(1, 1)]);
            laplace_profile(&f, (1, 1))
                .unwrap()
                .iter()
                .fold(0.0f64, |w, v| w.max(v.abs()))
        };
        let ratio = res(0.02) / res(0.01);
        assert!((ratio - 4.0).abs() < 0.8, "{center:?}: ratio {ratio}");
    }
}

#[test]
fn solve_modes_errors() {
    let empty = BoundaryData {
        r0: 0.5,
        angular_samples: 8,
        theta_samples: 4,
        values: vec![],
    };
    assert!(matches!(solve_modes(&empty, 2.0, 20), Err(Error::InvalidInput(_))));
    let data = boundary(0.5, 8, 4, |_, _| 1.0);
    assert_eq!(solve_modes(&data, 2.0, 5).unwrap_err(), Error::AnnulusTooThin(5));
    let short = BoundaryData {
        values: vec![1.0; 7],
        ..data
    };
    assert!(matches!(solve_modes(&short, 2.0, 20), Err(Error::Shape(_))));
}

// Model B

fn symbol_field(
    center: (f64, f64),
    h: f64,
    m: usize,
    f: impl Fn(f64, f64, f64) -> CMatrix<f64> + Sync,
) -> SymbolField<f64> {
    SymbolField::from_fn(PlaneGrid::centered(center, h, 5).unwrap(), m, f).unwrap()
}

#[test]
fn identity_field_is_exactly_flat() {
    let f = symbol_field((0.3, 0.3), 0.1, 16, |_, _, _| CMatrix::identity(2));
    for gamma in [0.1, 1.0, 3.0] {
        let conn = ReducedConnection::for_gamma(f.clone(), gamma).unwrap();
        assert_eq!(su11_field_residual(&conn, (2, 2)).unwrap(), 0.0);
    }
    assert_eq!(pcf_residual(&f, (2, 2)).unwrap(), 0.0);
}

#[test]
fn diagonal_harmonic_field_converges_quadratically() {
    let res = |h: f64| {
        let f = symbol_field((0.1, 0.2), h, 16, |x, _, th| {
            abelian(0.3 * (TAU * x).exp() * (TAU * th).cos())
        });
        su11_field_residual(&ReducedConnection::for_gamma(f, 0.8).unwrap(), (2, 2)).unwrap()
    };
    let (a, b, c) = (res(0.04), res(0.02), res(0.01));
    for ratio in [a / b, b / c] {
        assert!((ratio - 4.0).abs() < 0.8, "ratio {ratio}");
    }
    let plane = symbol_field((0.1, 0.2), 0.05, 8, |x, y, _| abelian(x * x - y * y));
    assert!(su11_field_residual(&ReducedConnection::for_gamma(plane, 0.8).unwrap(), (2, 2)).unwrap() < 1e-9);
}

#[test]
fn abelian_sector_is_model_a() {
    let mut r = rng(41);
    for _ in 0..10 {
        let p = Trig::real(&mut r, 3, 0.4);
        let (a, b, c) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
        let alpha =
            move |x: f64, y: f64, th: f64| p.eval(th).re * (1.0 + 0.3 * x) + a * x * y + b * y * y + c * x.sin();
        let grid = PlaneGrid::centered((0.2, -0.4), 0.05, 5).unwrap();
        let phi = PhaseField::from_fn(grid, 64, &alpha).unwrap();
        let f = SymbolField::from_fn(grid, 64, |x, y, th| abelian(alpha(x, y, th))).unwrap();
        let conn = ReducedConnection::for_gamma(f, r.gen_range(0.1..2.0)).unwrap();
        let op = su11_field_operator(&conn, (2, 2)).unwrap();
        let lap = laplace_profile(&phi, (2, 2)).unwrap();
        let scale = lap.iter().fold(0.0f64, |w, v| w.max(v.abs()));
        for (mat, &l) in op.iter().zip(&lap) {
            let want = sigma3().scale(cx(0.0, -l));
            assert!(
                (mat - &want).max_norm() < 1e-10 * scale,
                "{:e}",
                (mat - &want).max_norm() / scale
            );
        }
    }
}

#[test]
fn pcf_examples() {
    let constant = symbol_field((0.0, 0.5), 0.1, 8, |_, _, _| su11_element(0.4, 0.3, -1.2));
    assert!(pcf_residual(&constant, (2, 2)).unwrap() < 1e-14);
    let harmonic = symbol_field((0.0, 0.5), 0.05, 8, |x, y, _| abelian(x * x - y * y));
    assert!(pcf_residual(&harmonic, (2, 2)).unwrap() < 1e-9);
    let quad = symbol_field((0.0, 0.5), 0.05, 8, |x, _, _| abelian(x * x));
    assert!((pcf_residual(&quad, (2, 2)).unwrap() - 2.0).abs() < 1e-9);
    let op = pcf_operator(&quad, (2, 2)).unwrap();
    assert!((&op[0] - &sigma3().scale(cx(0.0, -2.0))).max_norm() < 1e-9);
    assert_eq!(pcf_residual(&quad, (0, 2)).unwrap_err(), Error::BoundaryNode(0, 2));
}

#[test]
fn zero_deformation_is_principal_chiral() {
    // depends on x₁ and θ only, so the plane currents commute
    let f = symbol_field((0.2, 0.0), 0.05, 32, |x, _, th| {
        su11_element(
            0.4 + 0.2 * x + 0.1 * (TAU * th).cos(),
            0.5 * x + 0.2 * (TAU * th).cos(),
            0.3 * (TAU * th).sin(),
        )
    });
    let conn = ReducedConnection::new(f.clone(), 0.0).unwrap();
    let e62 = su11_field_operator(&conn, (2, 2)).unwrap();
    let pcf = pcf_operator(&f, (2, 2)).unwrap();
    // what remains is i[A₁, A₂] with A₂ = log(I + rounding) / h
    assert!(e62.iter().zip(&pcf).all(|(a, b)| (a - b).max_norm() < 1e-12));
    assert!(b_limit_consistency(&f, &[0.0]).unwrap()[0].gap < 1e-12);
}

#[test]
fn b_limit_gap_is_linear_in_b() {
    let f = symbol_field((0.2, 0.0), 0.05, 32, |x, _, th| {
        su11_element(
            0.4 + 0.2 * x + 0.1 * (TAU * th).cos(),
            0.5 * x + 0.2 * (TAU * th).cos(),
            0.3 * (TAU * th).sin(),
        )
    });
    let rows = b_limit_consistency(&f, &[0.5, 0.25, 0.125]).unwrap();
    for pair in rows.windows(2) {
        let slope = (pair[1].gap / pair[0].gap).ln() / (pair[1].b / pair[0].b).ln();
        assert!((slope - 1.0).abs() < 0.3, "slope {slope}");
    }
    for row in &rows {
        assert_eq!(row.b, deformation_b(row.gamma));
        assert!(row.gap > 0.0);
    }

    let diag = symbol_field((0.2, 0.0), 0.05, 16, |x, y, th| abelian(x * y + (TAU * th).sin()));
    assert!(b_limit_consistency(&diag, &[0.5, 0.25, 0.125])
        .unwrap()
        .iter()
        .all(|r| r.gap == 0.0));
}

#[test]
fn theta_current_product_rule() {
    let mut r = rng(43);
    let (p, q) = (Trig::real(&mut r, 2, 0.3), Trig::real(&mut r, 2, 0.3));
    let f = symbol_field((0.0, 0.0), 0.1, 64, |x, y, th| {
        su11_element(0.5 + p.eval(th).re, q.eval(th).re + x, 0.2 * y)
    });
    for (i, j) in [(1, 1), (2, 3)] {
        let a = f.theta_current(i, j).unwrap();
        let dg = f.symbol_at(i, j).unwrap().derivative(1);
        for m in 0..64 {
            let rhs = (&a[m] * f.at(i, j, m)).scale(cx(-1.0, 0.0));
            assert!((&dg.samples()[m] - &rhs).max_norm() < 1e-10);
        }
        assert!(a.iter().all(|m| (m[(0, 0)] + m[(1, 1)]).norm() < 1e-10));
    }
}
