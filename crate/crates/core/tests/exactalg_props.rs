use loopkit::exactalg::{
    dual_lift, ffge_rank, int, rat, rf_arith, ArithOp, DualRat, Poly, Rat, RationalFunction,
};
use num_traits::Zero;
use proptest::prelude::*;

fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-6i64..=6, 0..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    small_poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn rational_function() -> impl Strategy<Value = RationalFunction> {
    (small_poly(2), nonzero_poly(2)).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=5).prop_map(|(p, q)| rat(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_laws(a in rational_function(), b in rational_function(), c in rational_function()) {
        let add = |x: &RationalFunction, y: &RationalFunction| rf_arith(x, y, ArithOp::Add).unwrap();
        let mul = |x: &RationalFunction, y: &RationalFunction| rf_arith(x, y, ArithOp::Mul).unwrap();
        prop_assert_eq!(add(&add(&a, &b), &c), add(&a, &add(&b, &c)));
        prop_assert_eq!(mul(&mul(&a, &b), &c), mul(&a, &mul(&b, &c)));
        prop_assert_eq!(mul(&a, &add(&b, &c)), add(&mul(&a, &b), &mul(&a, &c)));
        prop_assert_eq!(add(&a, &b), add(&b, &a));
        if !a.is_zero() {
            prop_assert!(rf_arith(&a, &a, ArithOp::Div).unwrap().is_one());
            prop_assert!(mul(&a, &a.recip().unwrap()).is_one());
        }
        prop_assert!(rf_arith(&a, &a, ArithOp::Sub).unwrap().is_zero());
    }
}

proptest! {
    #[test]
    fn normalization_is_idempotent(n in small_poly(4), d in nonzero_poly(4)) {
        let once = RationalFunction::new(n, d).unwrap();
        let twice = RationalFunction::new(once.num().clone(), once.den().clone()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.den().is_monic());
    }

    #[test]
    fn normalization_preserves_value(n in small_poly(3), d in nonzero_poly(3), z in small_rat()) {
        let raw_den = d.eval(&z);
        prop_assume!(!raw_den.is_zero());
        let f = RationalFunction::new(n.clone(), d).unwrap();
        prop_assert_eq!(f.eval(&z).unwrap(), n.eval(&z) / raw_den);
    }

    #[test]
    fn gcd_divides_both(a in nonzero_poly(4), b in nonzero_poly(4), common in nonzero_poly(2)) {
        let x = &a * &common;
        let y = &b * &common;
        let g = loopkit::exactalg::poly_gcd(&x, &y).unwrap();
        prop_assert!(g.is_monic());
        prop_assert!(x.div_rem(&g).unwrap().1.is_zero());
        prop_assert!(y.div_rem(&g).unwrap().1.is_zero());
        // the planted factor divides the gcd
        prop_assert!(g.div_rem(&common).unwrap().1.is_zero());
    }

    #[test]
    fn eval_commutes_with_arithmetic(
        a in rational_function(),
        b in rational_function(),
        z in small_rat(),
    ) {
        let (Ok(va), Ok(vb)) = (a.eval(&z), b.eval(&z)) else { return Ok(()); };
        for (op, expected) in [
            (ArithOp::Add, Some(&va + &vb)),
            (ArithOp::Sub, Some(&va - &vb)),
            (ArithOp::Mul, Some(&va * &vb)),
            (ArithOp::Div, (!vb.is_zero()).then(|| &va / &vb)),
        ] {
            let Some(expected) = expected else { continue };
            let Ok(result) = rf_arith(&a, &b, op) else { continue };
            // cancellation may remove a pole, never add one
            prop_assert_eq!(result.eval(&z).unwrap(), expected);
        }
    }

    /// A polynomial in two variables evaluated over duals has the gradient of
    /// its symbolic partial derivatives.
    #[test]
    fn dual_gradient_matches_symbolic(
        coeffs in prop::collection::vec(-5i64..=5, 9),
        x in small_rat(),
        y in small_rat(),
    ) {
        // f(x, y) = sum_{i,j<3} c_ij x^i y^j
        let vars = dual_lift(&[x.clone(), y.clone()]);
        let one = DualRat::constant(int(1), 2);
        let pow = |v: &DualRat, k: usize| (0..k).fold(one.clone(), |acc, _| &acc * v);
        let mut f = DualRat::constant(int(0), 2);
        let mut dfdx = Rat::zero();
        let mut dfdy = Rat::zero();
        let rpow = |v: &Rat, k: usize| (0..k).fold(int(1), |acc, _| acc * v);
        for i in 0..3 {
            for j in 0..3 {
                let c = int(coeffs[3 * i + j]);
                let term = &pow(&vars[0], i) * &pow(&vars[1], j);
                f = &f + &(&DualRat::constant(c.clone(), 2) * &term);
                if i > 0 {
                    dfdx += &c * int(i as i64) * rpow(&x, i - 1) * rpow(&y, j);
                }
                if j > 0 {
                    dfdy += &c * int(j as i64) * rpow(&x, i) * rpow(&y, j - 1);
                }
            }
        }
        prop_assert_eq!(f.derivs(), &[dfdx, dfdy][..]);
    }

    #[test]
    fn dual_reciprocal_matches_quotient_rule(a in small_rat(), b in small_rat()) {
        prop_assume!(!a.is_zero());
        let v = dual_lift(&[a.clone(), b.clone()]);
        // d/da (b/a) = -b/a², d/db (b/a) = 1/a
        let q = &v[1] * &v[0].recip().unwrap();
        prop_assert_eq!(q.derivs(), &[-(&b / (&a * &a)), a.recip()][..]);
    }
}

/// Determinant by cofactor expansion; the rank oracle below enumerates
/// minors with it.
fn det(m: &[Vec<Rat>]) -> Rat {
    match m.len() {
        0 => int(1),
        1 => m[0][0].clone(),
        n => (0..n)
            .map(|c| {
                let minor: Vec<Vec<Rat>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != c)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let sign = if c % 2 == 0 { int(1) } else { int(-1) };
                sign * &m[0][c] * det(&minor)
            })
            .fold(Rat::zero(), |acc, x| acc + x),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect()
}

fn rank_by_minors(m: &[Vec<Rat>]) -> usize {
    let rows = m.len();
    let cols = m[0].len();
    (1..=rows.min(cols))
        .rev()
        .find(|&k| {
            subsets(rows, k).iter().any(|rs| {
                subsets(cols, k).iter().any(|cs| {
                    let sub: Vec<Vec<Rat>> = rs
                        .iter()
                        .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                        .collect();
                    !det(&sub).is_zero()
                })
            })
        })
        .unwrap_or(0)
}

fn low_rank_matrix() -> impl Strategy<Value = Vec<Vec<Rat>>> {
    // random rows, some replaced by combinations of others so low ranks are common
    (1usize..=4, 1usize..=4)
        .prop_flat_map(|(r, c)| {
            (
                prop::collection::vec(prop::collection::vec(small_rat(), c), r),
                prop::collection::vec((0usize..4, 0usize..4, -2i64..=2), r),
            )
        })
        .prop_map(|(mut rows, mix)| {
            for (i, (a, b, s)) in mix.into_iter().enumerate() {
                if i >= 2 && s != 0 {
                    let (a, b) = (a % i, b % i);
                    rows[i] = rows[a]
                        .iter()
                        .zip(&rows[b])
                        .map(|(x, y)| x + y * int(s))
                        .collect();
                }
            }
            rows
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn ffge_rank_matches_minor_enumeration(m in low_rank_matrix()) {
        prop_assert_eq!(ffge_rank(&m), rank_by_minors(&m));
    }
}
