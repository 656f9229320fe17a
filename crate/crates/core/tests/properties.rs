use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quadcap::abelian::{smith_normal_form, FgAbelianGroup, GroupHom, IntMatrix};
use quadcap::biquad::{BiquadField, KIdeal};
use quadcap::cli::cache::Cache;
use quadcap::cohomology::{random_order_two_module, CyclicModule};
use quadcap::quadfield::{QuadIdeal, QuadraticField, SUnitLattice, Sigma, SigmaClassGroup, Splitting};

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

fn squarefree(m: i64) -> bool {
    m != 0 && m != 1 && (2..=m.unsigned_abs().isqrt() as i64).all(|p| m % (p * p) != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_ignores_row_and_column_order(rows in matrix(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut permuted = rows.clone();
        permuted.shuffle(&mut rng);
        let mut cols: Vec<usize> = (0..rows[0].len()).collect();
        cols.shuffle(&mut rng);
        let permuted: Vec<Vec<i64>> = permuted.iter().map(|r| cols.iter().map(|&j| r[j]).collect()).collect();
        let a = smith_normal_form(&IntMatrix::from_rows(&rows)).diagonal();
        let b = smith_normal_form(&IntMatrix::from_rows(&permuted)).diagonal();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn kernel_times_image_is_source(
        src in prop::collection::vec(1i64..=12, 1..3),
        tgt in prop::collection::vec(1i64..=12, 1..3),
        entries in prop::collection::vec(-12i64..=12, 9),
    ) {
        let src = FgAbelianGroup::from_cyclic_orders(&src);
        let tgt = FgAbelianGroup::from_cyclic_orders(&tgt);
        prop_assume!(src.ngens() > 0 && tgt.ngens() > 0);
        // column j is scaled so that d_j times it vanishes in the target
        let exp = tgt.torsion().last().cloned().unwrap();
        let mut m = IntMatrix::zeros(tgt.ngens(), src.ngens());
        for (j, d) in src.torsion().iter().enumerate() {
            let scale = &exp / num_integer::Integer::gcd(&exp, d);
            for i in 0..tgt.ngens() {
                m[(i, j)] = &scale * BigInt::from(entries[3 * i + j]);
            }
        }
        let h = GroupHom::new(src.clone(), tgt, m).unwrap();
        let ker = h.kernel().0.order_u64().unwrap();
        let img = h.image().order_u64().unwrap();
        prop_assert_eq!(ker * img, src.order_u64().unwrap());
        let zeros = src.elements().unwrap().filter(|x| h.target().is_zero_element(&h.apply(x))).count() as u64;
        prop_assert_eq!(zeros, ker);
    }

    #[test]
    fn order_two_modules(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_order_two_module(&mut rng, 256);
        let brute = m.h1_brute_force().unwrap();
        prop_assert!(brute.matches(&m.h1()));
        prop_assert_eq!(m.h1(), m.tate_h_minus1().group().clone());
        let seq = m.cool_sequence().unwrap();
        prop_assert!(seq.exact);
        for t in seq.terms() {
            prop_assert!(t.is_killed_by(2));
        }
        prop_assert!(m.tate_h0().group().is_killed_by(2));
        let fixed = m.fixed_subgroup();
        let norm = m.norm_endomorphism();
        for c in norm.matrix().columns() {
            prop_assert!(quadcap::abelian::group::contains(m.group(), fixed.reps(), &c));
        }
    }

    #[test]
    fn trivial_action_cohomology(orders in prop::collection::vec(1i64..=12, 0..3), rank in 0usize..2, n in 2u32..=4) {
        let mut g = FgAbelianGroup::from_cyclic_orders(&orders);
        g = g.direct_sum(&FgAbelianGroup::free(rank));
        let m = CyclicModule::trivial_action(g.clone(), n);
        let (h_minus1, h0) = (m.tate_h_minus1(), m.tate_h0());
        prop_assert_eq!(h_minus1.group(), &g.n_torsion(n as u64).0);
        prop_assert_eq!(h0.group(), &g.mod_n(n as u64).0);
    }

    #[test]
    fn ideal_norm_is_multiplicative(
        m in prop::sample::select(vec![-23i64, -5, -1, 2, 3, 5, 6, 10, 79]),
        x in prop::collection::vec(-9i64..=9, 4),
        y in prop::collection::vec(-9i64..=9, 4),
    ) {
        let f = QuadraticField::new(m).unwrap();
        let i = f.ideal(&[f.elem(x[0], x[1]), f.elem(x[2], x[3])]);
        let j = f.ideal(&[f.elem(y[0], y[1]), f.elem(y[2], y[3])]);
        let (i, j) = match (i, j) { (Ok(i), Ok(j)) => (i, j), _ => return Ok(()) };
        prop_assert_eq!(i.mul(&j).norm(), i.norm() * j.norm());
        prop_assert_eq!(i.mul(&i.conj()), QuadIdeal::rational(m, &i.norm()));
    }

    #[test]
    fn extension_to_k_is_multiplicative(
        x in prop::collection::vec(-6i64..=6, 4),
        y in prop::collection::vec(-6i64..=6, 4),
    ) {
        let k = BiquadField::new(-5, -1).unwrap();
        let f = QuadraticField::new(-5).unwrap();
        let i = f.ideal(&[f.elem(x[0], x[1]), f.elem(x[2], x[3])]);
        let j = f.ideal(&[f.elem(y[0], y[1]), f.elem(y[2], y[3])]);
        let (i, j) = match (i, j) { (Ok(i), Ok(j)) => (i, j), _ => return Ok(()) };
        let idx = k.subfield_index(-5).unwrap();
        let ei = KIdeal::extend(&k, idx, &i);
        let ej = KIdeal::extend(&k, idx, &j);
        prop_assert_eq!(ei.mul(&k, &ej), KIdeal::extend(&k, idx, &i.mul(&j)));
        prop_assert_eq!(ei.norm(), i.norm().pow(2));
        prop_assert_eq!(ei.relative_norm(&k, idx), i.pow(2));
    }

    #[test]
    fn kronecker_symbol_is_multiplicative(d in prop::sample::select(vec![-23i64, -20, -4, 5, 8, 12, 13, 40]), i in 0usize..8, j in 0usize..8) {
        const ODD: [u64; 8] = [3, 7, 11, 17, 19, 23, 29, 31];
        let (p, q) = (ODD[i], ODD[j]);
        prop_assume!(p != q && (d % p as i64) != 0 && (d % q as i64) != 0);
        let f = QuadraticField::from_discriminant(d).unwrap();
        let sym = |s: Splitting| if s == Splitting::Split { 1 } else { -1 };
        let lhs = sym(f.splitting(p).0) * sym(f.splitting(q).0);
        prop_assert_eq!(lhs, jacobi(d, p * q));
    }

    #[test]
    fn adding_primes_shrinks_sigma_class_group(m in prop::sample::select(vec![-65i64, -30, -26, -21, -14, -5, 10, 15, 79]), p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
        prop_assume!(squarefree(m));
        let f = QuadraticField::new(m).unwrap();
        let small = SigmaClassGroup::compute(&f, &Sigma::infinite());
        let big = SigmaClassGroup::compute(&f, &Sigma::above(&f, &[p]));
        let (a, b) = (small.group.order_u64().unwrap(), big.group.order_u64().unwrap());
        prop_assert_eq!(a % b, 0);
        // the natural map is onto: every class of the smaller group is hit
        let images: std::collections::HashSet<Vec<BigInt>> = small.classes().iter().map(|(_, i)| big.dlog(i)).collect();
        prop_assert_eq!(images.len() as u64, b);
    }

    #[test]
    fn s_unit_valuations_match_factorization(m in prop::sample::select(vec![-5i64, -1, -2, 2, 3, 5, 6, 7]), ps in prop::collection::btree_set(prop::sample::select(vec![2u64, 3, 5, 7]), 0..3)) {
        let f = QuadraticField::new(m).unwrap();
        let ps: Vec<u64> = ps.into_iter().collect();
        let sigma = Sigma::above(&f, &ps);
        let lattice = SUnitLattice::compute(&f, &sigma).unwrap();
        for (col, u) in lattice.free_generators.iter().enumerate() {
            // d·u is integral, and (d·u)·∏p^(-e) = (d)·∏p^(+e)
            let d = BigInt::from(2) * num_integer::Integer::lcm(u.a().denom(), u.b().denom());
            let principal = QuadIdeal::principal(&u.scale_int(&d)).unwrap();
            let mut rebuilt = QuadIdeal::rational(m, &d);
            let mut denom = QuadIdeal::unit(m);
            for (row, p) in lattice.primes.iter().enumerate() {
                let e = &lattice.valuation_matrix[(row, col)];
                let e: i64 = e.try_into().unwrap();
                let pi = &p.ideal;
                if e >= 0 { rebuilt = rebuilt.mul(&pi.pow(e as u32)) } else { denom = denom.mul(&pi.pow((-e) as u32)) }
            }
            prop_assert_eq!(principal.mul(&denom), rebuilt);
        }
    }

    #[test]
    fn cache_round_trip(key in "[a-z0-9:]{1,24}", n in any::<i64>(), s in "\\PC{0,40}") {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let value = serde_json::json!({ "n": n, "s": s });
        prop_assert!(cache.get(&key).is_none());
        cache.put(&key, &value).unwrap();
        prop_assert_eq!(cache.get(&key), Some(value));
        let other = format!("{key}!");
        prop_assert!(cache.get(&other).is_none());
    }
}

fn jacobi(a: i64, n: u64) -> i64 {
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 { t } else { 0 }
}
