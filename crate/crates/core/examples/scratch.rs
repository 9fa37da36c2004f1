use mems_core::grid::{CylinderGrid, RadialGrid};
use mems_core::model::Params;
use mems_core::plate::{PlateField, PlateOperator};
use mems_core::spectrum::principal_eigenpair;
use mems_core::stationary::{continue_in_lambda, ContinuationOptions, Method};
use std::time::Instant;

fn main() {
    let p: Params<f64> = Params { beta: 1.0, tau: 0.0, sigma: 0.0, eps: 0.1, lambda: 0.0, kappa: 1.0 };

    // self-adjointness defect of the condensed operator in the quadrature inner product
    for n in [64usize, 128, 256] {
        let grid = RadialGrid::shared(n).unwrap();
        let op = PlateOperator::new(&Params { sigma: 0.3, tau: 0.7, ..p }, grid.clone()).unwrap();
        let f: Vec<f64> = grid.nodes().iter().map(|&r| -1.0 - 0.3 * (2.0 * r).cos()).collect();
        let g: Vec<f64> = grid.nodes().iter().map(|&r| -0.5 + r * r - 0.2 * (3.0 * r).sin()).collect();
        let u = op.solve(&f).unwrap();
        let w = op.solve(&g).unwrap();
        let mut au = op.apply_condensed(u.values()).unwrap(); au.push(0.0);
        let mut aw = op.apply_condensed(w.values()).unwrap(); aw.push(0.0);
        let lhs = grid.inner_product(&au, w.values()).unwrap();
        let rhs = grid.inner_product(u.values(), &aw).unwrap();
        let nu = grid.l2_norm(u.values()).unwrap();
        let nw = grid.l2_norm(w.values()).unwrap();
        println!("n={n}: selfadj defect {:.3e}, scaled {:.3e}", (lhs-rhs).abs(), (lhs-rhs).abs()/(nu*nw));
    }

    // mu1 across sigma
    for sigma in [-0.5, 0.0, 0.5, 1.0] {
        let grid = RadialGrid::shared(256).unwrap();
        let e = principal_eigenpair(&Params { sigma, ..p }, &grid).unwrap();
        println!("sigma={sigma}: mu1 = {:.6} residual {:.2e}", e.mu1, e.residual);
    }

    // small-gap fold timing + value
    let t0 = Instant::now();
    {
        let grid = RadialGrid::shared(64).unwrap();
        let prob = mems_core::smallgap::SmallGapProblem::new(grid, Params { eps: 0.0, ..p }).unwrap();
        let opts = ContinuationOptions { dlambda0: 0.1, ..Default::default() };
        let tr = prob.fold(&opts).unwrap();
        println!("smallgap fold: lambda* = {:.6} bracket ({:.6},{:.6}) records {} [{:?}]",
            tr.lambda_star, tr.bracket.0, tr.bracket.1, tr.records.len(), t0.elapsed());
        let total_iters: usize = tr.records.iter().map(|r| r.iterations).sum();
        println!("  total picard iterations {total_iters}, u_min last {:.4}", tr.records.last().unwrap().u_min);
    }

    // free-boundary fold at eps=0.1, n=m=48 with picard
    let t0 = Instant::now();
    {
        let cyl = CylinderGrid::shared(48, 48).unwrap();
        let opts = ContinuationOptions { dlambda0: 0.1, ..Default::default() };
        let tr = continue_in_lambda(&cyl, &Params { eps: 0.1, ..p }, &opts).unwrap();
        let total_iters: usize = tr.records.iter().map(|r| r.iterations).sum();
        println!("fb fold n=48: lambda* = {:.6} bracket width {:.2e} records {} iters {} [{:?}]",
            tr.lambda_star, tr.bracket.1 - tr.bracket.0, tr.records.len(), total_iters, t0.elapsed());
    }

    // potential solve timing at n=m=64
    {
        let cyl = CylinderGrid::shared(64, 64).unwrap();
        let u = PlateField::from_fn(cyl.radial().clone(), |r| -0.2 * (1.0 - r * r));
        let t0 = Instant::now();
        let mut count = 0;
        while t0.elapsed().as_millis() < 2000 {
            let phi = mems_core::potential::solve_potential(&cyl, &u, &Params { eps: 0.1, ..p }).unwrap();
            std::hint::black_box(&phi);
            count += 1;
        }
        println!("potential solve n=m=64: {:.1} ms", t0.elapsed().as_secs_f64() * 1000.0 / count as f64);
    }

    // newton iteration count check (stationary, after lambda fix)
    {
        let cyl = CylinderGrid::shared(32, 32).unwrap();
        let prob = mems_core::stationary::StationaryProblem::new(cyl.clone(), Params { eps: 0.1, lambda: 0.4, ..p }).unwrap();
        let u0 = PlateField::zeros(cyl.radial().clone());
        let rep = prob.solve(&u0, Method::Newton, 1e-11, 50).unwrap();
        println!("stationary newton: conv {} iters {}", rep.converged, rep.iterations);
    }
}
