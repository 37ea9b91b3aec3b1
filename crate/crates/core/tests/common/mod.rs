//! Oracles shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vlasov_core::direct::{assemble_kernel_matrix, solve_coefficients};
use vlasov_core::field::gauss_legendre;
use vlasov_core::piecewise::NodeKind;
use vlasov_core::{
    sample_particles, BenchmarkCase, CaseKind, DirectInterpolant, Domain, KdTree, KernelSpec, ParticleEnsemble,
    PhasePoint, PiecewiseInterpolant, PoissonSolver, SplineSpace,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Composite 10-point Gauss-Legendre rule over `[a, b]`, split at `breaks`
/// and then into `pieces` equal parts per segment.
pub fn quadrature(f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64], pieces: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(10);
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&c| c > a && c < b).collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    let mut sum = 0.0;
    for w in cuts.windows(2) {
        let h = (w[1] - w[0]) / pieces as f64;
        for p in 0..pieces {
            let lo = w[0] + p as f64 * h;
            for (t, wt) in nodes.iter().zip(&weights) {
                sum += 0.5 * h * wt * f(lo + 0.5 * h * (t + 1.0));
            }
        }
    }
    sum
}

/// Jittered grid of `nx × nv` particles carrying random values in `[-1, 1)`.
pub fn jittered(nx: usize, nv: usize, domain: Domain, seed: u64) -> ParticleEnsemble {
    let mut rng = rng(seed);
    let (hx, hv) = (domain.length / nx as f64, 2.0 * domain.v_max / nv as f64);
    let mut pos = Vec::new();
    for i in 0..nx {
        for j in 0..nv {
            let x = (i as f64 + 0.5 + rng.random_range(-0.3..0.3)) * hx;
            let v = -domain.v_max + (j as f64 + 0.5 + rng.random_range(-0.3..0.3)) * hv;
            pos.push(PhasePoint::new(x, v));
        }
    }
    let values = (0..pos.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    ParticleEnsemble::new(pos, values, domain)
}

pub fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `|clipped integral - quadrature|` for one kernel and interval.
pub fn clipped_integral_error(order: u32, sigma_v: f64, center: f64, a: f64, b: f64) -> f64 {
    let spec = KernelSpec::new(order, 1.0, sigma_v).unwrap();
    let exact = spec.clipped_v_integral(center, a, b).unwrap();
    let oracle = quadrature(
        |v| spec.v_factor(v - center),
        a,
        b,
        &[center - sigma_v, center, center + sigma_v],
        1,
    );
    (exact - oracle).abs()
}

/// `|I(a, b) + I(b, c) - I(a, c)|` for sorted `a ≤ b ≤ c`.
pub fn additivity_defect(order: u32, sigma_v: f64, center: f64, a: f64, b: f64, c: f64) -> f64 {
    let spec = KernelSpec::new(order, 1.0, sigma_v).unwrap();
    let i = |lo, hi| spec.clipped_v_integral(center, lo, hi).unwrap();
    (i(a, b) + i(b, c) - i(a, c)).abs()
}

/// `|Λ - ∫ b(|v - c| / σ_v) dv|` with the integral taken over the support.
pub fn full_line_defect(order: u32, sigma_v: f64) -> f64 {
    let spec = KernelSpec::new(order, 1.0, sigma_v).unwrap();
    let oracle = quadrature(|v| spec.v_factor(v), -sigma_v, sigma_v, &[0.0], 1);
    (spec.full_line_integral() - oracle).abs()
}

/// Worst node mismatch of an unregularized fit, relative to `max |f_i|`.
pub fn node_reproduction_error(seed: u64, order: u32) -> f64 {
    let domain = Domain::new(4.0 * std::f64::consts::PI, 6.0);
    let ens = jittered(10, 8, domain, seed);
    let spec = KernelSpec::new(order, 2.5, 2.0).unwrap();
    let interp = DirectInterpolant::fit(&ens, spec, 0.0).unwrap();
    let worst = ens
        .positions()
        .iter()
        .zip(ens.values())
        .map(|(z, f)| (interp.evaluate(*z) - f).abs())
        .fold(0.0, f64::max);
    worst / max_abs(ens.values())
}

/// `‖K c - f + μ² c‖_∞ / ‖f‖_∞` for the regularized solve.
pub fn tikhonov_residual(seed: u64, mu: f64) -> f64 {
    let domain = Domain::new(6.0, 3.0);
    let ens = jittered(12, 12, domain, seed);
    let spec = KernelSpec::new(2, 1.0, 0.8).unwrap();
    let k = assemble_kernel_matrix(ens.positions(), &spec, domain).unwrap();
    let c = solve_coefficients(k.clone(), ens.values(), mu).unwrap();
    let cm = Mat::from_fn(c.len(), 1, |i, _| c[i]);
    let kc = &k * &cm;
    let residual: Vec<f64> = (0..c.len())
        .map(|i| kc[(i, 0)] - ens.values()[i] + mu * mu * c[i])
        .collect();
    max_abs(&residual) / max_abs(ens.values())
}

/// Largest difference between a one-box piecewise interpolant and the direct
/// interpolant at 10³ random points, relative to the largest coefficient.
pub fn single_box_deviation(seed: u64) -> f64 {
    let domain = Domain::new(5.0, 4.0);
    let ens = jittered(12, 12, domain, seed);
    let spec = KernelSpec::new(4, 1.5, 1.0).unwrap();
    let direct = DirectInterpolant::fit(&ens, spec, 1e-5).unwrap();
    let pw = PiecewiseInterpolant::build(&ens, 200, spec, 1e-5).unwrap();
    assert_eq!(pw.tree().leaf_count(), 1);
    let mut rng = rng(seed + 1);
    let worst = (0..1000)
        .map(|_| {
            let z = PhasePoint::new(rng.random_range(0.0..5.0), rng.random_range(-4.0..4.0));
            (pw.evaluate(z) - direct.evaluate(z)).abs()
        })
        .fold(0.0, f64::max);
    worst / max_abs(direct.coefficients())
}

/// Max error of `E` and `φ` against `ρ = 1 + a cos(qx + p)` with `q = m k`.
pub fn manufactured_poisson_error(cells: usize, k: f64, m: usize, a: f64, phase: f64) -> f64 {
    let length = std::f64::consts::TAU / k;
    let solver = PoissonSolver::new(SplineSpace::new(cells, length).unwrap());
    let q = m as f64 * k;
    let field = solver.solve_with(|x| 1.0 + a * (q * x + phase).cos()).unwrap();
    (0..97)
        .map(|j| {
            let x = j as f64 * length / 97.0;
            // -φ'' = a cos(qx + p)  =>  φ = a/q² cos(qx + p),  E = a/q sin(qx + p)
            let phi = a / (q * q) * (q * x + phase).cos();
            let e = a / q * (q * x + phase).sin();
            (field.potential(x) - phi)
                .abs()
                .max((field.electric_field(x) - e).abs())
        })
        .fold(0.0, f64::max)
}

/// Checks that the leaves partition the particles and the root box.
pub fn check_partition(tree: &KdTree, ens: &ParticleEnsemble, n_box: usize) -> Result<(), String> {
    let mut owner = vec![usize::MAX; ens.len()];
    let mut area = 0.0;
    for (l, leaf) in tree.leaves().enumerate() {
        let NodeKind::Leaf { particles, .. } = &leaf.kind else {
            return Err("non-leaf in leaf list".into());
        };
        if particles.len() > n_box {
            return Err(format!("leaf {l} holds {} > {n_box} particles", particles.len()));
        }
        let b = leaf.bounds;
        area += (b.x_hi - b.x_lo) * (b.v_hi - b.v_lo);
        for &i in particles {
            if owner[i] != usize::MAX {
                return Err(format!("particle {i} in two leaves"));
            }
            owner[i] = l;
            if !b.contains(ens.positions()[i]) {
                return Err(format!("particle {i} outside {b}"));
            }
            if tree.locate(ens.positions()[i]) != l {
                return Err(format!("particle {i} located in the wrong leaf"));
            }
        }
    }
    if let Some(i) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(format!("particle {i} in no leaf"));
    }
    let d = ens.domain();
    let total = d.length * 2.0 * d.v_max;
    if (area - total).abs() > 1e-9 * total {
        return Err(format!("leaves cover {area}, root box {total}"));
    }
    Ok(())
}

pub fn random_tree(seed: u64, n: usize) -> Result<usize, String> {
    let domain = Domain::new(4.0 * std::f64::consts::PI, 6.0);
    let mut rng = rng(seed);
    let pos: Vec<PhasePoint> = (0..n)
        .map(|_| PhasePoint::new(rng.random_range(0.0..domain.length), rng.random_range(-6.0..6.0)))
        .collect();
    let ens = ParticleEnsemble::new(pos, vec![0.0; n], domain);
    let tree = KdTree::build(&ens, 200);
    check_partition(&tree, &ens, 200)?;
    Ok(tree.leaf_count())
}

/// `(depth, leaves, smallest leaf, largest leaf)` for the 100 × 100 Landau grid.
pub fn grid_tree() -> Result<(usize, usize, usize, usize), String> {
    let ens = sample_particles(&BenchmarkCase::new(CaseKind::WeakLandau), 100, 100);
    let tree = KdTree::build(&ens, 200);
    check_partition(&tree, &ens, 200)?;
    let sizes: Vec<usize> = tree
        .leaves()
        .map(|l| match &l.kind {
            NodeKind::Leaf { particles, .. } => particles.len(),
            NodeKind::Split { .. } => 0,
        })
        .collect();
    Ok((
        tree.depth(),
        tree.leaf_count(),
        *sizes.iter().min().unwrap(),
        *sizes.iter().max().unwrap(),
    ))
}
