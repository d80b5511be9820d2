use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_perfectoid::cohomology::{chamber_euler_sum, cohomology};
use toric_perfectoid::divisor::{
    cocycle_class_equal, divisor_polytope, divisor_to_cocycle, is_cartier, picard_group, principal_divisor,
    pullback_by_power_map, TDivisor,
};
use toric_perfectoid::fan::named::{named_fan, NAMES};
use toric_perfectoid::lattice_linalg::rational::Rational;
use toric_perfectoid::lattice_linalg::IntVector;
use toric_perfectoid::perfectoid::{d_l, PerfectoidBundle, PerfectoidContext};
use toric_perfectoid::Fan;

const SMOOTH: &[&str] = &["P1", "P2", "P3", "P1xP1", "F1", "F2", "F3"];
const SURFACES: &[&str] = &["P2", "P1xP1", "F1", "F2", "F3"];

fn divisor(fan: &Fan, rng: &mut ChaCha8Rng, spread: i64) -> TDivisor {
    let c: Vec<i64> = (0..fan.num_rays()).map(|_| rng.gen_range(-spread..=spread)).collect();
    TDivisor::from_i64(fan, &c).unwrap()
}

fn point(n: usize, rng: &mut ChaCha8Rng, spread: i64) -> IntVector {
    IntVector::from_i64(&(0..n).map(|_| rng.gen_range(-spread..=spread)).collect::<Vec<_>>())
}

fn bundle(ctx: &Arc<PerfectoidContext>, rng: &mut ChaCha8Rng) -> PerfectoidBundle {
    let d = divisor(ctx.fan(), rng, 6);
    ctx.from_divisor(&d, rng.gen_range(0..4)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn validation_ignores_ordering(name in prop::sample::select(NAMES.to_vec()), seed in any::<u64>()) {
        let fan = named_fan(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rays: Vec<usize> = (0..fan.num_rays()).collect();
        let mut cones: Vec<usize> = (0..fan.max_cones().len()).collect();
        rays.shuffle(&mut rng);
        cones.shuffle(&mut rng);
        let permuted = fan.permuted(&rays, &cones).unwrap();
        let (a, b) = (fan.validate(), permuted.validate());
        prop_assert_eq!((a.valid, a.smooth, a.complete, a.simplicial), (b.valid, b.smooth, b.complete, b.simplicial));
        prop_assert_eq!(
            picard_group(&fan).unwrap().describe(),
            picard_group(&permuted).unwrap().describe()
        );
    }

    #[test]
    fn polytope_translation_and_scaling(name in prop::sample::select(SURFACES.to_vec()), seed in any::<u64>()) {
        let fan = named_fan(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = divisor(&fan, &mut rng, 3);
        let m = point(fan.rank(), &mut rng, 5);
        let p = divisor_polytope(&fan, &d).unwrap();
        // P_{D + div(m)} = P_D - m
        let shifted = divisor_polytope(&fan, &d.add(&principal_divisor(&fan, &m).unwrap())).unwrap();
        prop_assert_eq!(p.dim(), shifted.dim());
        let moved: Vec<IntVector> = p.lattice_points(false).iter().map(|x| x.sub(&m)).collect();
        prop_assert_eq!(moved, shifted.lattice_points(false));
        // P_{tD} = t·P_D
        let t = rng.gen_range(1..4i64);
        let scaled = divisor_polytope(&fan, &d.scaled_i64(t)).unwrap();
        prop_assert_eq!(p.dim(), scaled.dim());
        let tq = Rational::from_integer(BigInt::from(t));
        let expected: Vec<Vec<Rational>> = p.vertices().iter().map(|v| v.iter().map(|x| x * &tq).collect()).collect();
        let mut expected = expected;
        expected.sort();
        prop_assert_eq!(expected, scaled.vertices().to_vec());
    }

    #[test]
    fn cocycles_are_cocycles(name in prop::sample::select(NAMES.to_vec()), seed in any::<u64>()) {
        let fan = named_fan(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = divisor(&fan, &mut rng, 5);
        if is_cartier(&fan, &d).is_some() {
            let c = divisor_to_cocycle(&fan, &d).unwrap();
            prop_assert!(c.check(&fan).is_ok());
            for t in [2i64, 3, 5] {
                let pulled = pullback_by_power_map(&c, &BigInt::from(t));
                prop_assert!(pulled.check(&fan).is_ok());
                let direct = divisor_to_cocycle(&fan, &d.scaled_i64(t)).unwrap();
                prop_assert!(cocycle_class_equal(&fan, &pulled, &direct));
            }
            // linear equivalence does not change the class
            let m = point(fan.rank(), &mut rng, 4);
            let e = divisor_to_cocycle(&fan, &d.add(&principal_divisor(&fan, &m).unwrap())).unwrap();
            prop_assert!(cocycle_class_equal(&fan, &c, &e));
        }
    }

    #[test]
    fn cohomology_euler_and_equivalence(name in prop::sample::select(SURFACES.to_vec()), seed in any::<u64>()) {
        let fan = named_fan(name).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = divisor(&fan, &mut rng, 3);
        let t = cohomology(&fan, &d, true).unwrap();
        prop_assert_eq!(t.euler_characteristic(), chamber_euler_sum(&fan, &d).unwrap());
        let graded = t.graded.as_ref().unwrap();
        for (i, dim) in &t.dims {
            let sum: u64 = graded.get(i).map_or(0, |v| v.iter().map(|(_, k)| k).sum());
            prop_assert_eq!(sum, *dim);
        }
        let m = point(fan.rank(), &mut rng, 4);
        let moved = cohomology(&fan, &d.add(&principal_divisor(&fan, &m).unwrap()), false).unwrap();
        prop_assert_eq!(moved.dims, t.dims);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn perfectoid_group_laws(name in prop::sample::select(SMOOTH.to_vec()), p in prop::sample::select(vec![2u64, 3, 5]), seed in any::<u64>()) {
        let ctx = PerfectoidContext::new(named_fan(name).unwrap(), p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (bundle(&ctx, &mut rng), bundle(&ctx, &mut rng), bundle(&ctx, &mut rng));
        let one = ctx.trivial();
        prop_assert_eq!(a.tensor(&b).unwrap().tensor(&c).unwrap(), a.tensor(&b.tensor(&c).unwrap()).unwrap());
        prop_assert_eq!(a.tensor(&b).unwrap(), b.tensor(&a).unwrap());
        prop_assert_eq!(a.tensor(&one).unwrap(), a.clone());
        prop_assert!(a.tensor(&a.inverse()).unwrap().is_trivial());
        prop_assert_eq!(
            a.tensor(&b).unwrap().frobenius_pullback(),
            a.frobenius_pullback().tensor(&b.frobenius_pullback()).unwrap()
        );
        prop_assert_eq!(a.pth_root().frobenius_pullback(), a.clone());
        prop_assert_eq!(a.frobenius_pullback().pth_root(), a.clone());
        // Q-coordinates are additive, so the reduced form is a faithful model
        let sum: Vec<Rational> = a.rational_coordinates().iter().zip(b.rational_coordinates()).map(|(x, y)| x + y).collect();
        prop_assert_eq!(a.tensor(&b).unwrap().rational_coordinates(), sum);
        // normalization: D at level k equals pD at level k + 1
        let d = divisor(ctx.fan(), &mut rng, 6);
        let k = rng.gen_range(0..3);
        let pd = d.scaled(&BigInt::from(p));
        prop_assert_eq!(ctx.from_divisor(&d, k).unwrap(), ctx.from_divisor(&pd, k + 1).unwrap());
    }

    #[test]
    fn d_l_is_well_defined(name in prop::sample::select(vec!["P2", "P1xP1", "F1", "F2"]), seed in any::<u64>()) {
        let fan = named_fan(name).unwrap();
        let ctx = PerfectoidContext::new(fan.clone(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = divisor(&fan, &mut rng, 3);
        let m = point(fan.rank(), &mut rng, 4);
        let base = divisor_polytope(&fan, &d).unwrap().dim();
        let l = ctx.from_divisor(&d, 1).unwrap();
        prop_assert_eq!(d_l(&l).unwrap(), base);
        let moved = d.add(&principal_divisor(&fan, &m).unwrap());
        prop_assert_eq!(d_l(&ctx.from_divisor(&moved, 1).unwrap()).unwrap(), base);
        prop_assert_eq!(d_l(&ctx.from_divisor(&d.scaled_i64(2), 2).unwrap()).unwrap(), base);
    }
}
