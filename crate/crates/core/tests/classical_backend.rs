use krylov_qc_core::classical::l2_inner;
use krylov_qc_core::classical::{
    harper_map, oscillator_map, AreaPreservingMap, BackTrajectoryState, FieldSpace,
    GaussianDensity, PfSeries, PhaseDensity,
};
use krylov_qc_core::field::{PhaseSpaceField, PhaseSpaceGeometry};
use krylov_qc_core::krylov::{gram_schmidt_build, hessenberg_matrix, hop_evolve, KrylovOptions};
use krylov_qc_core::{torus_displacement, PhasePoint};
use proptest::prelude::*;

proptest! {
    #[test]
    fn oscillator_inverse_undoes_forward(q in -3.0f64..3.0, p in -3.0f64..3.0, tau in 0.01f64..1.0) {
        let m = oscillator_map(tau).unwrap();
        let x = PhasePoint::new(q, p);
        let y = m.inverse(m.forward(x));
        prop_assert!((y.q - q).abs() < 1e-12 && (y.p - p).abs() < 1e-12);
    }

    #[test]
    fn harper_inverse_undoes_forward_mod_one(q in 0.0f64..1.0, p in 0.0f64..1.0, k in -0.5f64..0.5) {
        let m = harper_map(k).unwrap();
        let x = PhasePoint::new(q, p);
        let d = torus_displacement(m.inverse(m.forward(x)), x);
        prop_assert!(d.norm() < 1e-12);
    }

    #[test]
    fn maps_preserve_area(q in 0.0f64..1.0, p in 0.0f64..1.0, k in -0.5f64..0.5) {
        let maps: [Box<dyn AreaPreservingMap>; 2] =
            [Box::new(harper_map(k).unwrap()), Box::new(oscillator_map(0.1 + k.abs()).unwrap())];
        let h = 1e-6;
        for m in &maps {
            let x = PhasePoint::new(q, p);
            let f = |dq: f64, dp: f64| m.forward(PhasePoint::new(q + dq, p + dp));
            let dq = torus_displacement(f(h, 0.0), f(-h, 0.0));
            let dp = torus_displacement(f(0.0, h), f(0.0, -h));
            let det = (dq.q * dp.p - dq.p * dp.q) / (4.0 * h * h);
            prop_assert!((det - 1.0).abs() < 1e-6, "{} at {:?}: {}", m.name(), x, det);
        }
    }
}

#[test]
fn oscillator_returns_after_one_period() {
    let m = oscillator_map(0.1).unwrap();
    let period = std::f64::consts::TAU / m.rotation_angle();
    assert!((period - 62.80).abs() < 0.01);
    let mut x = PhasePoint::new(1.0, 0.0);
    let mut closest = f64::INFINITY;
    let mut at = 0;
    for t in 1..=70 {
        x = m.forward(x);
        let d = ((x.q - 1.0).powi(2) + x.p.powi(2)).sqrt();
        if d < closest {
            closest = d;
            at = t;
        }
    }
    assert_eq!(at, 63);
    // The symplectic-Euler orbit is an ellipse sheared at O(τ).
    assert!(closest < 0.1);
}

#[test]
fn pullback_keeps_sup_norm() {
    let geom = PhaseSpaceGeometry::torus(128).unwrap();
    let rho = GaussianDensity::torus(PhasePoint::new(0.4, 0.5), 0.05).unwrap();
    let m = harper_map(0.05).unwrap();
    let fields: Vec<PhaseSpaceField> = PfSeries::new(geom, &m, &rho, 40).collect();
    let s0 = fields[0].max();
    // Nodes sample the pulled-back peak at shifting offsets, so the grid
    // maximum is bounded by the analytic peak and stays close to it.
    for f in &fields {
        assert!(f.max() <= rho.peak() * (1.0 + 1e-12));
        assert!((f.max() - s0).abs() < 0.1 * s0);
        assert!((f.integral() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn back_trajectory_is_exact_composition() {
    let geom = PhaseSpaceGeometry::torus(32).unwrap();
    let m = harper_map(0.05).unwrap();
    let mut state = BackTrajectoryState::new(geom);
    for _ in 0..25 {
        state.step(&m);
    }
    for (i, y) in state.points().iter().enumerate() {
        let mut x = geom.node(i / 32, i % 32);
        for _ in 0..25 {
            x = m.inverse(x);
        }
        assert!(torus_displacement(*y, x).norm() < 1e-12);
    }
}

#[test]
fn quadrature_converges_under_refinement() {
    let rho = GaussianDensity::torus(PhasePoint::new(0.4, 0.5), 0.025).unwrap();
    let self_overlap = |m: usize| {
        let g = PhaseSpaceGeometry::torus(m).unwrap();
        let f = PhaseSpaceField::from_fn(g, |x| rho.eval(x));
        l2_inner(&f, &f).unwrap()
    };
    let a = self_overlap(512);
    let b = self_overlap(1024);
    assert!(((a - b) / b).abs() < 1e-8);

    let plane = GaussianDensity::plane(PhasePoint::new(1.0, 0.0), 0.1).unwrap();
    let overlap = |m: usize| {
        let g = PhaseSpaceGeometry::square_window(1.8, m).unwrap();
        let f = PhaseSpaceField::from_fn(g, |x| plane.eval(x));
        l2_inner(&f, &f).unwrap()
    };
    assert!(((overlap(288) - overlap(576)) / overlap(576)).abs() < 1e-8);
}

/// Classical oscillator run with τ=0.1, x₀=(1,0), σ=0.1 on [-1.8, 1.8]²
/// with M=288 (Δ = σ/8).
#[test]
fn oscillator_krylov_run_structure() {
    let map = oscillator_map(0.1).unwrap();
    let rho = GaussianDensity::plane(PhasePoint::new(1.0, 0.0), 0.1).unwrap();
    let geom = PhaseSpaceGeometry::square_window(1.8, 288).unwrap();
    rho.check_grid(&geom).unwrap();
    let t_max = 250;
    let res = gram_schmidt_build(
        PfSeries::new(geom, &map, &rho, t_max),
        &FieldSpace,
        &KrylovOptions::new(t_max),
    )
    .unwrap();
    let k = res.dim();
    assert!(
        res.terminated_at.is_some(),
        "basis should close numerically"
    );
    assert!(res.max_imaginary() < 1e-10);

    // Orthonormality of the stored basis.
    let basis: Vec<PhaseSpaceField> = (0..k).map(|n| res.vector(n).unwrap()).collect();
    let mut err: f64 = 0.0;
    for i in 0..k {
        for j in 0..=i {
            let v = l2_inner(&basis[i], &basis[j]).unwrap();
            err = err.max((v - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    assert!(err < 1e-10, "orthonormality {err:e}");

    // Krylov states: nonnegative seed, sign-changing tail orthogonal to it.
    assert!(basis[0].min() >= 0.0);
    for (n, f) in basis.iter().enumerate().skip(1) {
        assert!(f.min() < 0.0 && f.max() > 0.0, "kappa_{n} keeps one sign");
    }

    // Hopping evolution reproduces the projected wavefunction: every single
    // step, and the whole trajectory up to closure of the basis.
    let beta = res.beta.as_ref().unwrap();
    let h = hessenberg_matrix(&res);
    let closed_at = res.terminated_at.unwrap();
    let mut one_step: f64 = 0.0;
    for t in 0..beta.ncols() - 1 {
        let next = hop_evolve(&beta.column(t).to_vec(), &h).unwrap();
        for n in 0..k {
            one_step = one_step.max((next[n] - beta[[n, t + 1]]).norm());
        }
    }
    let mut b: Vec<_> = beta.column(0).to_vec();
    let (mut before, mut after): (f64, f64) = (0.0, 0.0);
    for t in 1..beta.ncols() {
        b = hop_evolve(&b, &h).unwrap();
        let e = (0..k)
            .map(|n| (b[n] - beta[[n, t]]).norm())
            .fold(0.0, f64::max);
        if t <= closed_at {
            before = before.max(e)
        } else {
            after = after.max(e)
        }
    }
    eprintln!(
        "K = {k}, guarded rows {:?}, one-step {one_step:e}, trajectory {before:e} (closed), {after:e} (after)",
        h.guarded
    );
    assert!(one_step < 1e-8, "one-step hop error {one_step:e}");
    assert!(before < 1e-8, "trajectory hop error {before:e}");
}
