//! Property tests over randomly generated points, complexes and maps.

mod support;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use zretract::arith::rat;
use zretract::collapse::{find_collapse_sequence, CollapseOutcome};
use zretract::desingularize::{desingularize, find_multiple_on_edge};
use zretract::io;
use zretract::linalg::solve;
use zretract::regularity::{farey_mediant, is_regular_complex, is_strongly_regular};
use zretract::synthesis::perp_embed;
use zretract::zmap::{compose, extend_vertex_map, verify_retraction, ZMap};
use zretract::{Point, Rational, RationalComplex, Simplex};

use support::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn regular(seed: u64, max_dim: usize, max_den: i64) -> RationalComplex {
    let mut rng = StdRng::seed_from_u64(seed);
    regular_corpus(&mut rng, 1, max_dim, max_den).pop().unwrap()
}

/// A point of the simplex with random positive barycentric weights.
fn interior_point(rng: &mut StdRng, pts: &[Point]) -> Point {
    let w: Vec<Rational> = pts.iter().map(|_| rat(rng.gen_range(1..=5), 1)).collect();
    let total: Rational = w.iter().sum();
    let w: Vec<Rational> = w.iter().map(|x| x / &total).collect();
    let refs: Vec<&Point> = pts.iter().collect();
    Point::combination(&refs, &w)
}

/// Barycentric coordinates of `x` in the simplex, by an exact solve.
fn barycentric(pts: &[Point], x: &Point) -> Vec<Rational> {
    let n = x.dim();
    let a: Vec<Vec<Rational>> = (0..=n)
        .map(|r| {
            pts.iter()
                .map(|p| {
                    if r < n {
                        p.0[r].clone()
                    } else {
                        Rational::one()
                    }
                })
                .collect()
        })
        .collect();
    let mut b: Vec<Rational> = x.0.clone();
    b.push(Rational::one());
    solve(&a, &b).expect("x lies in the affine hull")
}

fn big(words: &[u64], negative: bool) -> BigInt {
    let digits: Vec<u32> = words
        .iter()
        .flat_map(|w| [*w as u32, (*w >> 32) as u32])
        .collect();
    BigInt::from_slice(if negative { Sign::Minus } else { Sign::Plus }, &digits)
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn homogeneous_correspondent_is_primitive(coords in prop::collection::vec((0i64..=50, 1i64..=50), 1..=4)) {
        let p = Point::new(coords.iter().map(|&(a, d)| rat(a.min(d), d)).collect());
        let h = p.homogeneous();
        let g = h.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        prop_assert!(g.is_one());
        prop_assert_eq!(h.last(), &p.denominator());
    }

    #[test]
    fn exact_arithmetic_round_trips(
        a in prop::collection::vec(any::<u64>(), 4), b in prop::collection::vec(any::<u64>(), 4),
        da in 1u64.., db in 1u64.., sa: bool, sb: bool,
    ) {
        let x = Rational::new(big(&a, sa), BigInt::from(da));
        let y = Rational::new(big(&b, sb), BigInt::from(db));
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if !y.is_zero() {
            prop_assert_eq!(&(&x * &y) / &y, x);
        }
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn blow_up_is_a_valid_subdivision(seed: u64) {
        let k = regular(seed, 3, 4);
        let mut rng = StdRng::seed_from_u64(seed ^ 1);
        let s = &k.simplexes()[rng.gen_range(0..k.simplexes().len())];
        let p = interior_point(&mut rng, &k.owned_points(s));
        let b = k.blow_up(&p).unwrap();
        prop_assert!(b.validate().is_ok());
        prop_assert!(b.is_subdivision_of(&k));
        prop_assert!(b.same_support(&k));
    }

    #[test]
    fn carrier_has_x_in_its_relative_interior(seed: u64) {
        let k = regular(seed, 3, 4);
        let mut rng = StdRng::seed_from_u64(seed ^ 2);
        let s = &k.simplexes()[rng.gen_range(0..k.simplexes().len())];
        let pts = k.owned_points(s);
        // Drop some vertices so the point may land on a proper face.
        let face: Vec<Point> = pts.iter().filter(|_| rng.gen_bool(0.7)).cloned().collect();
        let face = if face.is_empty() { vec![pts[0].clone()] } else { face };
        let x = interior_point(&mut rng, &face);
        let c = k.carrier(&x).unwrap();
        let cp = k.owned_points(&c);
        prop_assert!(barycentric(&cp, &x).iter().all(Signed::is_positive));
        let mut a = cp.clone();
        let mut b = face.clone();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn join_with_an_outside_apex_validates(seed: u64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = random_complex(&mut rng, 2, 4);
        // Lift into R^3 and cone from a point above the plane.
        let lifted = RationalComplex::from_simplices(
            3,
            &k.simplexes().iter().map(|s| k.owned_points(s).iter().map(|p| Point::new(vec![p.0[0].clone(), p.0[1].clone(), Rational::zero()])).collect()).collect::<Vec<_>>(),
        ).unwrap();
        let apex = Point::new(vec![rat(rng.gen_range(0..=3), 3), rat(rng.gen_range(0..=3), 3), Rational::one()]);
        let j = lifted.join(&apex).unwrap();
        prop_assert!(j.validate().is_ok());
        prop_assert_eq!(j.simplexes().len(), lifted.simplexes().len());
    }

    #[test]
    fn mediant_denominator_is_the_sum(seed: u64) {
        let k = regular(seed, 3, 6);
        let faces: Vec<Simplex> = k.all_faces().into_iter().collect();
        for f in faces.iter().take(30) {
            let pts = k.points(f);
            let m = farey_mediant(&pts).unwrap();
            let sum: BigInt = pts.iter().map(|p| p.denominator()).sum();
            prop_assert_eq!(m.denominator(), sum);
        }
    }

    #[test]
    fn desingularize_is_idempotent_and_keeps_support(seed: u64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let n = rng.gen_range(1..=2);
        let k = random_complex(&mut rng, n, 6);
        let d = desingularize(&k).unwrap();
        prop_assert!(is_regular_complex(&d).regular);
        prop_assert!(d.same_support(&k));
        prop_assert!(d.is_subdivision_of(&k));
        prop_assert!(desingularize(&d).unwrap().same_as(&d));
    }

    #[test]
    fn strong_regularity_matches_a_direct_gcd(seed: u64) {
        let k = regular(seed, 3, 6);
        let direct = k.simplexes().iter().all(|s| {
            k.owned_points(s).iter().fold(BigInt::zero(), |g, p| g.gcd(&p.denominator())).is_one()
        });
        prop_assert_eq!(is_strongly_regular(&k).strongly_regular, direct);
    }

    #[test]
    fn vertex_extension_is_unique(seed: u64) {
        let k = regular(seed, 2, 6);
        let mut rng = StdRng::seed_from_u64(seed ^ 3);
        let m = rng.gen_range(1..=2);
        // Targets with denominators dividing the source denominators.
        let targets: Vec<(Point, Point)> = k.vertices().iter().map(|v| {
            let d = v.denominator();
            let e = (1..=d.clone().try_into().unwrap_or(1i64)).rfind(|e| (&d % e).is_zero()).unwrap();
            let e = if rng.gen_bool(0.5) { 1 } else { e };
            (v.clone(), Point::new((0..m).map(|_| rat(rng.gen_range(0..=e), e)).collect()))
        }).collect();
        let lookup = |p: &Point| targets.iter().find(|(v, _)| v == p).unwrap().1.clone();
        let f = extend_vertex_map(&k, m, lookup).unwrap();
        let g = extend_vertex_map(&k, m, |v| f.eval(v).unwrap()).unwrap();
        prop_assert_eq!(f.pieces(), g.pieces());
        prop_assert_eq!(denominator_violations(&f, 8), 0);
    }

    #[test]
    fn relabelling_keeps_collapse_verdict(seed: u64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = regular(seed, 2, 4);
        let mut perm: Vec<usize> = (0..k.vertices().len()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let mut vertices = vec![Point::origin(k.ambient_dim()); perm.len()];
        for (old, &new) in perm.iter().enumerate() {
            vertices[new] = k.vertex(old).clone();
        }
        let simplexes: Vec<Vec<usize>> = k.simplexes().iter().rev().map(|s| s.vertices().iter().map(|&v| perm[v]).collect()).collect();
        let relabelled = RationalComplex::from_parts(k.ambient_dim(), vertices, simplexes).unwrap();
        let verdict = |c: &RationalComplex| matches!(find_collapse_sequence(c, 100_000), CollapseOutcome::Found(_));
        prop_assert_eq!(verdict(&k), verdict(&relabelled));
    }

    #[test]
    fn perp_embedding_round_trips(seed: u64) {
        let k = regular(seed, 2, 4);
        let e = perp_embed(&k).unwrap();
        for x in rationals_in_complex(&k, 6) {
            let y = e.forward.eval(&x).unwrap();
            prop_assert!(e.target.contains_point(&y));
            prop_assert_eq!(e.backward.eval(&y).unwrap(), x);
        }
    }

    #[test]
    fn json_round_trips(seed: u64) {
        let k = regular(seed, 3, 6);
        let j = io::complex_to_json(&k);
        let back = io::complex_from_json(&j).unwrap();
        prop_assert!(back.same_as(&k));
        prop_assert_eq!(io::complex_to_json(&back).to_string(), j.to_string());
        let f = ZMap::identity(k.clone());
        let fj = io::zmap_to_json(&f);
        prop_assert_eq!(io::zmap_to_json(&io::zmap_from_json(&fj).unwrap()).to_string(), fj.to_string());
    }
}

/// Random maps of the square into itself, linear on a blown-up Kuhn
/// triangulation, with vertex images of dividing denominator.
fn square_map(rng: &mut StdRng) -> ZMap {
    let k = RationalComplex::kuhn_cube(2)
        .blow_up(&Point::from_fracs(&[(1, 2), (1, 2)]))
        .unwrap();
    let corners = rationals_in_cube(2, 1);
    let choices: Vec<(Point, Point)> = k
        .vertices()
        .iter()
        .map(|v| {
            let w = if v.denominator() == BigInt::from(2) && rng.gen_bool(0.4) {
                v.clone()
            } else {
                corners[rng.gen_range(0..corners.len())].clone()
            };
            (v.clone(), w)
        })
        .collect();
    extend_vertex_map(&k, 2, |p| {
        choices.iter().find(|(v, _)| v == p).unwrap().1.clone()
    })
    .unwrap()
}

fn pointwise_idempotent(f: &ZMap, max_den: i64) -> bool {
    rationals_in_cube(2, max_den).iter().all(|x| {
        let y = f.eval(x).unwrap();
        f.eval(&y).unwrap() == y
    })
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn composition_is_associative(seed: u64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let (f, g, h) = (square_map(&mut rng), square_map(&mut rng), square_map(&mut rng));
        let left = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        let right = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        for x in rationals_in_cube(2, 6) {
            prop_assert_eq!(left.eval(&x).unwrap(), right.eval(&x).unwrap());
        }
    }

    #[test]
    fn verify_retraction_agrees_with_pointwise_idempotence(seed: u64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = square_map(&mut rng);
        prop_assert_eq!(verify_retraction(&f).is_retraction(), pointwise_idempotent(&f, 8));
    }
}

#[test]
fn multiples_on_regular_edges() {
    for a in 1..=7i64 {
        for b in 1..=7i64 {
            if a.gcd(&b) != 1 {
                continue;
            }
            // Farey neighbours p/a, q/b with |p b - q a| = 1.
            let Some((p, q)) = (0..=a)
                .flat_map(|p| (0..=b).map(move |q| (p, q)))
                .find(|&(p, q)| (p * b - q * a).abs() == 1 && p.gcd(&a) == 1 && q.gcd(&b) == 1)
            else {
                continue;
            };
            let (v, w) = (Point::new(vec![rat(p, a)]), Point::new(vec![rat(q, b)]));
            for m in 1..=12 {
                let z = find_multiple_on_edge(&v, &w, &BigInt::from(m)).unwrap();
                assert!(
                    (z.denominator() % BigInt::from(m)).is_zero(),
                    "{v} {w} m={m}: {z}"
                );
                let (lo, hi) = if v <= w { (&v, &w) } else { (&w, &v) };
                assert!(lo <= &z && &z <= hi, "{z} not between {v} and {w}");
            }
        }
    }
}

#[test]
fn blow_ups_of_unit_interval_triangulations_stay_regular() {
    // Every regular triangulation of [0,1] with denominators at most 8 is a
    // Farey subdivision; build them all by repeated mediant insertion.
    let mut frontier = vec![RationalComplex::kuhn_cube(1)];
    let mut seen = std::collections::BTreeSet::new();
    while let Some(k) = frontier.pop() {
        if !seen.insert(k.canonical()) {
            continue;
        }
        assert!(is_regular_complex(&k).regular);
        for s in k.simplexes() {
            let m = farey_mediant(&k.points(s)).unwrap();
            if m.denominator() <= BigInt::from(8) {
                let b = k.blow_up(&m).unwrap();
                assert!(is_regular_complex(&b).regular);
                frontier.push(b);
            }
        }
    }
    assert!(seen.len() > 100);
}
