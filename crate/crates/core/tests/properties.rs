use normgeom::geometry::{self, Geometry};
use normgeom::{LinearOperator, Matrix, Side, SpaceSpec};
use proptest::prelude::*;

fn hexagon() -> SpaceSpec {
    let v = (0..6)
        .map(|k| {
            let a = std::f64::consts::PI * k as f64 / 3.0;
            vec![a.cos(), a.sin()]
        })
        .collect();
    SpaceSpec::polyhedral(v).unwrap()
}

fn spaces() -> Vec<SpaceSpec> {
    vec![
        SpaceSpec::l1(3),
        SpaceSpec::l2(3),
        SpaceSpec::linf(3),
        SpaceSpec::lp(3, 4.0).unwrap(),
        SpaceSpec::lp(2, 1.5).unwrap(),
        hexagon(),
        SpaceSpec::stadium2(),
        SpaceSpec::cylcap3(),
    ]
}

fn coords(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, dim).prop_filter("nonzero", |v| v.iter().any(|a| a.abs() > 1e-3))
}

fn space_and_pair() -> impl Strategy<Value = (SpaceSpec, Vec<f64>, Vec<f64>)> {
    (0..spaces().len()).prop_flat_map(|i| {
        let s = spaces()[i].clone();
        let d = s.dim();
        (Just(s), coords(d), coords(d))
    })
}

fn norm(s: &SpaceSpec, v: &[f64]) -> f64 {
    s.norm_eval(v).unwrap()
}

fn shifted(x: &[f64], l: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a + l * b).collect()
}

/// x moved to its line minimizer along y, where x ⊥_B y.
fn orthogonalized(s: &SpaceSpec, x: &[f64], y: &[f64]) -> Vec<f64> {
    let (l, _) = geometry::line_min(s, x, y).unwrap();
    shifted(x, l, y)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn norm_is_homogeneous_and_subadditive((s, x, y) in space_and_pair(), c in -5.0f64..5.0) {
        let nx = norm(&s, &x);
        let cx: Vec<f64> = x.iter().map(|a| c * a).collect();
        prop_assert!((norm(&s, &cx) - c.abs() * nx).abs() <= 1e-12 * nx.max(1.0) * c.abs().max(1.0));
        let sum = shifted(&x, 1.0, &y);
        prop_assert!(norm(&s, &sum) <= (nx + norm(&s, &y)) * (1.0 + 1e-12));
    }

    #[test]
    fn norming_functional_pairs_to_the_norm((s, x, y) in space_and_pair()) {
        let f = s.norming_functional(&x).unwrap();
        let nx = norm(&s, &x);
        prop_assert!((f.apply(&x) - nx).abs() <= 1e-9 * nx);
        prop_assert!((s.dual_norm_eval(&f.coords).unwrap() - 1.0).abs() <= 1e-9);
        prop_assert!(f.apply(&y).abs() <= norm(&s, &y) * (1.0 + 1e-9));
    }

    #[test]
    fn one_sided_derivatives_are_ordered((s, x, y) in space_and_pair()) {
        let plus = s.dir_deriv(&x, &y, Side::Plus).unwrap();
        let minus = s.dir_deriv(&x, &y, Side::Minus).unwrap();
        let ny = norm(&s, &y);
        prop_assert!(minus.value <= plus.value + 1e-9 * ny);
        prop_assert!(plus.value.abs() <= ny * (1.0 + 1e-9));
        prop_assert!(minus.value.abs() <= ny * (1.0 + 1e-9));
        // a secant from the right over-estimates the right derivative
        let h = 1e-3;
        let secant = (norm(&s, &shifted(&x, h, &y)) - norm(&s, &x)) / h;
        prop_assert!(plus.value <= secant + 1e-9 * ny.max(1.0));
    }

    #[test]
    fn birkhoff_is_homogeneous((s, x, y) in space_and_pair(), a in 0.2f64..5.0, b in -5.0f64..5.0) {
        prop_assume!(b.abs() > 0.2);
        let x = orthogonalized(&s, &x, &y);
        prop_assume!(norm(&s, &x) > 1e-3);
        let v = geometry::is_birkhoff(&s, &x, &y).unwrap();
        prop_assert!(v.holds);
        let ax: Vec<f64> = x.iter().map(|t| -a * t).collect();
        let by: Vec<f64> = y.iter().map(|t| b * t).collect();
        let w = geometry::is_birkhoff(&s, &ax, &by).unwrap();
        prop_assert!(w.holds || w.marginal, "scaled pair lost orthogonality: {:?}", w);
    }

    #[test]
    fn parallelism_is_symmetric((s, x, y) in space_and_pair()) {
        let a = geometry::is_parallel(&s, &x, &y).unwrap();
        let b = geometry::is_parallel(&s, &y, &x).unwrap();
        prop_assert!((a.margin - b.margin).abs() <= 1e-12 * (norm(&s, &x) + norm(&s, &y)));
        prop_assert!(a.holds == b.holds || a.marginal || b.marginal);
    }

    #[test]
    fn strong_orthogonality_implies_orthogonality((s, x, y) in space_and_pair(), fix in any::<bool>()) {
        let x = if fix { orthogonalized(&s, &x, &y) } else { x };
        prop_assume!(norm(&s, &x) > 1e-3);
        let sb = geometry::is_strong_birkhoff(&s, &x, &y).unwrap();
        let b = geometry::is_birkhoff(&s, &x, &y).unwrap();
        prop_assert!(!sb.holds || b.holds);
    }

    #[test]
    fn approximate_relations_weaken_with_eps((s, x, y) in space_and_pair(), e1 in 0.0f64..0.9, de in 0.0f64..0.09) {
        let e2 = e1 + de;
        let g = Geometry::new(&s);
        if g.approx_birkhoff(&x, &y, e1).unwrap().holds {
            prop_assert!(g.approx_birkhoff(&x, &y, e2).unwrap().holds);
        }
        if g.approx_parallel(&x, &y, e1).unwrap().holds {
            prop_assert!(g.approx_parallel(&x, &y, e2).unwrap().holds);
        }
        // exact orthogonality is the ε = 0 case
        if g.birkhoff(&x, &y).unwrap().holds {
            prop_assert!(g.approx_birkhoff(&x, &y, 0.0).unwrap().holds);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_verify((s, x, y) in space_and_pair(), eps in 0.0f64..0.9, fix in any::<bool>()) {
        let x = if fix { orthogonalized(&s, &x, &y) } else { x };
        let nx = norm(&s, &x);
        prop_assume!(nx > 1e-3);
        let tol = 1e-9 * nx;
        let g = Geometry::new(&s);
        match g.orthogonality_certificate(&x, &y, eps).unwrap() {
            Some(f) => {
                prop_assert!(g.approx_birkhoff(&x, &y, eps).unwrap().holds);
                prop_assert!((s.dual_norm_eval(&f.coords).unwrap() - 1.0).abs() <= 1e-9);
                prop_assert!(f.apply(&y).abs() <= 1e-9 * norm(&s, &y));
                prop_assert!(f.apply(&x) >= (1.0 - eps * eps).sqrt() * nx - tol);
            }
            None => prop_assert!(!g.approx_birkhoff(&x, &y, eps).unwrap().holds),
        }
        match g.parallel_eps_certificate(&x, &y, eps).unwrap() {
            Some(f) => {
                let (_, d) = g.line_min(&x, &y).unwrap();
                prop_assert!(g.approx_parallel(&x, &y, eps).unwrap().holds);
                prop_assert!(f.apply(&y).abs() <= 1e-9 * norm(&s, &y));
                prop_assert!((f.apply(&x) - d).abs() <= tol);
            }
            None => prop_assert!(!g.approx_parallel(&x, &y, eps).unwrap().holds),
        }
    }

    #[test]
    fn constructed_functionals_imply_the_relations((s, z, w) in space_and_pair(), v in prop::collection::vec(-0.3f64..0.3, 3), mu in 0.5f64..4.0) {
        // f norms z and y = w − (f(w)/f(z)) z lies in its kernel
        let f = s.norming_functional(&z).unwrap();
        let fz = f.apply(&z);
        let y = shifted(&w, -f.apply(&w) / fz, &z);
        prop_assume!(norm(&s, &y) > 1e-3);
        let g = Geometry::new(&s);

        // f(x) ≥ √(1−ε²)‖x‖ with y ∈ ker f gives x ⊥_D^ε y
        let x = shifted(&z, 1.0, &v[..s.dim()]);
        let ratio = f.apply(&x) / norm(&s, &x);
        prop_assume!(ratio > 0.2);
        let eps = (1.0 - ratio * ratio).max(0.0).sqrt() + 1e-6;
        prop_assume!(eps < 1.0);
        prop_assert!(g.approx_birkhoff(&x, &y, eps).unwrap().holds);

        // x = z + μy has distance ‖z‖ = f(x) to the line, so x ∥^ε y once ε‖x‖ ≥ ‖z‖
        let x = shifted(&z, mu, &y);
        let eps = norm(&s, &z) / norm(&s, &x) + 1e-6;
        prop_assume!(eps < 1.0);
        prop_assert!(g.approx_parallel(&x, &y, eps).unwrap().holds);
        let (_, d) = g.line_min(&x, &y).unwrap();
        prop_assert!((d - fz).abs() <= 1e-9 * fz);
    }

    #[test]
    fn exposed_points_are_semi_rotund(i in 0usize..5, v in coords(3), k in 0usize..64) {
        let (s, x) = match i {
            0 => (SpaceSpec::l1(3), SpaceSpec::l1(3).extreme_points().unwrap()[k % 6].clone()),
            1 => (SpaceSpec::linf(3), SpaceSpec::linf(3).extreme_points().unwrap()[k % 8].clone()),
            2 => (hexagon(), hexagon().extreme_points().unwrap()[k % 6].clone()),
            3 => {
                let s = SpaceSpec::l2(3);
                let n = norm(&s, &v);
                (s, v.iter().map(|a| a / n).collect())
            }
            _ => {
                let s = SpaceSpec::lp(3, 4.0).unwrap();
                let n = norm(&s, &v);
                (s, v.iter().map(|a| a / n).collect())
            }
        };
        let ex = geometry::is_exposed_point(&s, &x).unwrap();
        prop_assert!(ex.holds);
        prop_assert!(geometry::is_semi_rotund_point(&s, &x, 2000).unwrap().holds);
    }

    #[test]
    fn operator_norm_is_submultiplicative(
        i in 0usize..3, j in 0usize..3, k in 0usize..3,
        a in prop::collection::vec(-1.0f64..1.0, 9),
        b in prop::collection::vec(-1.0f64..1.0, 9),
        c in -3.0f64..3.0,
    ) {
        let fam = [SpaceSpec::l1(3), SpaceSpec::l2(3), SpaceSpec::linf(3)];
        let t = LinearOperator::new(Matrix::new(3, 3, a).unwrap(), fam[i].clone(), fam[j].clone()).unwrap();
        let s = LinearOperator::new(Matrix::new(3, 3, b).unwrap(), fam[j].clone(), fam[k].clone()).unwrap();
        let (nt, ns) = (t.operator_norm().value, s.operator_norm().value);
        let st = s.compose(&t).unwrap().operator_norm().value;
        prop_assert!(st <= ns * nt * (1.0 + 1e-6) + 1e-12);
        // the operator norm is a norm on the operator space
        let u = LinearOperator::new(s.matrix().clone(), fam[i].clone(), fam[j].clone()).unwrap();
        let sum = t.axpy(1.0, &u).unwrap().operator_norm().value;
        prop_assert!(sum <= (nt + u.operator_norm().value) * (1.0 + 1e-6) + 1e-12);
        prop_assert!((t.scale(c).operator_norm().value - c.abs() * nt).abs() <= 1e-6 * nt * c.abs().max(1.0));
        // every computed maximizer is a unit vector achieving the value
        let r = t.operator_norm();
        prop_assert!((norm(t.domain(), &r.maximizer) - 1.0).abs() <= 1e-9);
        prop_assert!((norm(t.codomain(), &t.apply(&r.maximizer).unwrap()) - r.value).abs() <= 1e-6 * r.value.max(1e-12));
    }
}
