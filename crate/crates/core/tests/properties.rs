use proptest::prelude::*;
use skyrmag::effective::stiff_field;
use skyrmag::mep::{arc_length_params, init_string, reparametrize};
use skyrmag::operators::skyrmion_number;
use skyrmag::snapshot;
use skyrmag::spline::spline_weights;
use skyrmag::stepper::apply_operator;
use skyrmag::{fill_ghosts, DimensionlessParams, DriveSpec, Dynamics, Grid, VectorField};

fn grid_strategy() -> impl Strategy<Value = Grid> {
    (1usize..5, 1usize..5, 1usize..3, 0.01f64..0.1)
        .prop_map(|(nx, ny, nz, h)| Grid::new([nx, ny, nz], [h, 1.1 * h, 0.9 * h], 80e-9).unwrap())
}

fn field_strategy() -> impl Strategy<Value = VectorField> {
    grid_strategy().prop_flat_map(|g| {
        prop::collection::vec(-1.0f64..1.0, 3 * g.cells())
            .prop_map(move |data| VectorField::from_data(g, data).unwrap())
    })
}

fn unit_field_strategy() -> impl Strategy<Value = VectorField> {
    field_strategy().prop_filter_map("degenerate cell", |f| f.project().ok())
}

fn pair_strategy() -> impl Strategy<Value = (VectorField, VectorField)> {
    grid_strategy().prop_flat_map(|g| {
        let v = prop::collection::vec(-1.0f64..1.0, 3 * g.cells());
        (v.clone(), v).prop_map(move |(a, b)| {
            (VectorField::from_data(g, a).unwrap(), VectorField::from_data(g, b).unwrap())
        })
    })
}

fn params(kappa_b: f64) -> DimensionlessParams {
    DimensionlessParams { eps: 0.0148, kappa: 0.213, kappa_b, q: 0.1, alpha: 0.6 }
}

proptest! {
    #[test]
    fn projection_is_idempotent(f in unit_field_strategy()) {
        prop_assert!(f.max_norm_defect() <= 1e-12);
        let again = f.project().unwrap();
        prop_assert!(again.max_abs_diff(&f) <= 1e-16);
    }

    #[test]
    fn ghosts_preserve_norms(f in field_strategy(), kb in -20.0f64..20.0) {
        let gf = fill_ghosts(&f, kb);
        let g = *f.grid();
        for k in 0..g.nz {
            for j in 0..g.ny {
                for i in 0..g.nx {
                    let n = skyrmag::field::norm(f.at(i, j, k));
                    for axis in 0..3 {
                        let idx = [i, j, k][axis];
                        let len = g.dims()[axis];
                        if idx == 0 {
                            let v = skyrmag::field::norm(gf.neighbor(i, j, k, axis, -1));
                            prop_assert!((v - n).abs() <= 1e-14);
                        }
                        if idx == len - 1 {
                            let v = skyrmag::field::norm(gf.neighbor(i, j, k, axis, 1));
                            prop_assert!((v - n).abs() <= 1e-14);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ghost_fill_is_linear((u, v) in pair_strategy(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let w = u.lincomb(a, &v, b);
        let (gu, gv, gw) = (fill_ghosts(&u, 7.2), fill_ghosts(&v, 7.2), fill_ghosts(&w, 7.2));
        let g = *u.grid();
        for k in 0..g.nz {
            for j in 0..g.ny {
                for axis in 0..3 {
                    for dir in [-1isize, 1] {
                        let i = if dir > 0 { g.nx - 1 } else { 0 };
                        let (x, y, z) = (gu.neighbor(i, j, k, axis, dir), gv.neighbor(i, j, k, axis, dir), gw.neighbor(i, j, k, axis, dir));
                        for c in 0..3 {
                            prop_assert!((z[c] - (a * x[c] + b * y[c])).abs() <= 1e-13);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zero_stiffness_is_neumann(f in field_strategy()) {
        let gf = fill_ghosts(&f, 0.0);
        let g = *f.grid();
        for k in 0..g.nz {
            for j in 0..g.ny {
                prop_assert_eq!(gf.neighbor(0, j, k, 0, -1), f.at(0, j, k));
                prop_assert_eq!(gf.neighbor(g.nx - 1, j, k, 0, 1), f.at(g.nx - 1, j, k));
            }
        }
    }

    #[test]
    fn implicit_operator_is_linear((x, y) in pair_strategy(), a in -2.0f64..2.0, b in -2.0f64..2.0, heat in any::<bool>()) {
        let m_hat = x.lincomb(0.5, &y, -0.25);
        let p = params(7.2);
        let dynamics = if heat { Dynamics::HeatFlow } else { Dynamics::LandauLifshitz };
        let dt = 0.07;
        let lhs = apply_operator(&x.lincomb(a, &y, b), &m_hat, &p, dt, dynamics);
        let rhs = apply_operator(&x, &m_hat, &p, dt, dynamics)
            .lincomb(a, &apply_operator(&y, &m_hat, &p, dt, dynamics), b);
        let scale = rhs.as_slice().iter().fold(1.0f64, |s, v| s.max(v.abs()));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale);
        prop_assert!(apply_operator(&VectorField::zeros(*x.grid()), &m_hat, &p, dt, dynamics).max_abs_diff(&VectorField::zeros(*x.grid())) == 0.0);
    }

    #[test]
    fn stiff_field_doubles(f in field_strategy()) {
        let p = params(7.2);
        let once = stiff_field(&f, &p);
        let mut twice_in = f.clone();
        twice_in.scale(2.0);
        let mut doubled = once.clone();
        doubled.scale(2.0);
        prop_assert_eq!(stiff_field(&twice_in, &p), doubled);
    }

    #[test]
    fn charge_is_odd(f in unit_field_strategy()) {
        let layer = f.grid().nz - 1;
        let neg = VectorField::from_data(*f.grid(), f.as_slice().iter().map(|v| -v).collect()).unwrap();
        prop_assert_eq!(skyrmion_number(&neg, layer), -skyrmion_number(&f, layer));
    }

    #[test]
    fn snapshot_roundtrip_is_bit_exact(f in field_strategy()) {
        let back = snapshot::decode(&snapshot::encode_vector(&f)).unwrap().into_vector().unwrap();
        prop_assert_eq!(back.grid(), f.grid());
        for (a, b) in f.as_slice().iter().zip(back.as_slice()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn spline_weights_partition_unity(
        gaps in prop::collection::vec(0.01f64..1.0, 2..8),
        t in 0.0f64..1.0,
    ) {
        let total: f64 = gaps.iter().sum();
        let mut knots = vec![0.0];
        for g in &gaps {
            knots.push(knots.last().unwrap() + g / total);
        }
        let w = spline_weights(&knots, &[t]).unwrap();
        let sum: f64 = w[0].iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn arc_length_is_increasing(
        seeds in prop::collection::vec(prop::array::uniform3(-1.0f64..1.0), 3..7),
    ) {
        let g = Grid::new([2, 2, 1], [0.1; 3], 1e-8).unwrap();
        let images: Vec<VectorField> = seeds
            .iter()
            .enumerate()
            .map(|(i, s)| VectorField::from_fn(g, |x| [s[0] + x[0], s[1] - x[1], s[2] + i as f64]))
            .collect();
        prop_assume!(images.windows(2).all(|w| w[0].l2_distance(&w[1]) > 1e-9));
        let n = images.len();
        let s = skyrmag::mep::PathString { images, params: vec![0.0; n], energies: vec![0.0; n] };
        let a = arc_length_params(&s).unwrap();
        prop_assert_eq!(a[0], 0.0);
        prop_assert_eq!(a[n - 1], 1.0);
        prop_assert!(a.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn reparametrize_keeps_endpoints(theta in 0.1f64..3.0, n in 2usize..6) {
        let g = Grid::new([2, 1, 1], [0.1; 3], 1e-8).unwrap();
        let a = VectorField::uniform(g, [0.0, 0.0, 1.0]).unwrap();
        let b = VectorField::uniform(g, [theta.sin(), 0.0, theta.cos()]).unwrap();
        let p = params(0.0);
        let mut s = init_string(&a, &b, n, &p, &DriveSpec::none()).unwrap();
        reparametrize(&mut s).unwrap();
        prop_assert_eq!(&s.images[0], &a);
        prop_assert_eq!(&s.images[n], &b);
        for img in &s.images {
            prop_assert!(img.max_norm_defect() <= 1e-12);
        }
    }
}
