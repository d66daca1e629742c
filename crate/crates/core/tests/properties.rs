use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qrlab::enumeration::all_subgroups;
use qrlab::groupring::{fox_boundary, fox_row, gr_multiply, Coefficients, GroupRingElement};
use qrlab::intlinalg::{
    column_smith, hermite_normal_form, lattice_quotient, lattice_quotient_sparse, mat_vec,
    smith_normal_form, ModRing,
};
use qrlab::presentation::reduce;
use qrlab::{parse_presentation, todd_coxeter, FiniteGroupTable, IntMatrix, Letter, Presentation, Word};

fn corpus() -> Vec<(String, Presentation, FiniteGroupTable)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus");
    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "pres"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let pres = parse_presentation(&std::fs::read_to_string(&p).unwrap()).unwrap();
            let tbl = todd_coxeter(&pres, 100_000).unwrap();
            (p.file_stem().unwrap().to_string_lossy().into_owned(), pres, tbl)
        })
        .collect()
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-12i64..=12, cols), rows)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors as quotients of successive gcds of `k x k` minors.
fn minors_oracle(a: &[Vec<i64>], cols: usize) -> Vec<BigInt> {
    let rows = a.len();
    let mut prev = BigInt::from(1);
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for r in subsets(rows, k) {
            for c in subsets(cols, k) {
                let sub: Vec<Vec<i64>> = r.iter().map(|&i| c.iter().map(|&j| a[i][j]).collect()).collect();
                g = g.gcd(&IntMatrix::from_rows(k, &sub).determinant());
            }
        }
        if g.is_zero() {
            out.resize(rows.min(cols), BigInt::zero());
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn words(arity: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..arity, any::<bool>()), 0..12)
        .prop_map(|ls| reduce(ls.into_iter().map(|(g, i)| Letter::new(g, i))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_matches_minors(a in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))) {
        let cols = a[0].len();
        let m = IntMatrix::from_rows(cols, &a);
        let s = smith_normal_form(&m);
        prop_assert_eq!(&s.u.mul(&m).mul(&s.v), &s.diagonal);
        prop_assert!(s.diagonal.is_diagonal());
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(cols));
        let inv = s.invariants();
        for w in inv.windows(2) {
            prop_assert!(w[0].is_zero() && w[1].is_zero() || (&w[1] % &w[0]).is_zero());
        }
        prop_assert!(inv.iter().all(|x| !x.is_negative()));
        prop_assert_eq!(inv, minors_oracle(&a, cols));
    }

    #[test]
    fn hermite_form_is_invariant_under_row_operations(
        a in matrix(3, 4),
        ops in prop::collection::vec((0usize..3, 0usize..3, -5i64..=5), 0..8),
    ) {
        let base = hermite_normal_form(&IntMatrix::from_rows(4, &a));
        let mut b = a.clone();
        for (i, j, k) in ops {
            if i == j {
                b.swap(i, (i + 1) % 3);
                b[i].iter_mut().for_each(|x| *x = -*x);
            } else {
                let src = b[j].clone();
                for (x, y) in b[i].iter_mut().zip(src) {
                    *x += k * y;
                }
            }
        }
        let other = hermite_normal_form(&IntMatrix::from_rows(4, &b));
        prop_assert_eq!(&base.basis, &other.basis);
        for row in &b {
            let v: Vec<BigInt> = row.iter().map(|&x| x.into()).collect();
            let c = base.coordinates(&v).unwrap();
            prop_assert_eq!(base.basis.left_apply(&c), v);
        }
    }

    #[test]
    fn sparse_and_dense_quotients_agree(a in matrix(5, 4)) {
        let dense: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        let sparse: Vec<Vec<(usize, i64)>> = a
            .iter()
            .map(|r| r.iter().enumerate().filter(|t| *t.1 != 0).map(|(i, &x)| (i, x)).collect())
            .collect();
        prop_assert_eq!(lattice_quotient(4, &dense), lattice_quotient_sparse(4, sparse));
    }

    #[test]
    fn word_laws_and_round_trip(u in words(3), v in words(3), w in words(3)) {
        prop_assert!(u.mul(&u.inverse()).is_empty());
        prop_assert_eq!(u.mul(&v).inverse(), v.inverse().mul(&u.inverse()));
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
        let uv = u.mul(&v);
        if !uv.is_empty() {
            let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
            let text = format!("gens: a, b, c; relators: {}; prime: 2;", uv.format(&names));
            let p = parse_presentation(&text).unwrap();
            prop_assert_eq!(&p.relators()[0], &uv);
            let again = parse_presentation(&p.to_string()).unwrap();
            prop_assert_eq!(again.relators(), p.relators());
        }
    }

    #[test]
    fn column_smith_describes_the_kernel(a in prop::collection::vec(prop::collection::vec(0u64..27, 2), 1..=3)) {
        let r = ModRing::new(3, 3).unwrap();
        let cs = column_smith(&r, &a, 2);
        let mut brute = BTreeSet::new();
        for x in 0..27 {
            for y in 0..27 {
                if mat_vec(&r, &a, &[x, y]).iter().all(|&z| z == 0) {
                    brute.insert(vec![x, y]);
                }
            }
        }
        let step = |e: u32| 3u64.pow(3 - e);
        let (e0, e1) = (cs.exponents[0], cs.exponents[1]);
        let mut from_q = BTreeSet::new();
        for i in 0..3u64.pow(e0) {
            for j in 0..3u64.pow(e1) {
                from_q.insert(mat_vec(&r, &cs.q, &[i * step(e0), j * step(e1)]));
            }
        }
        prop_assert_eq!(brute, from_q);
    }
}

fn random_word(rng: &mut ChaCha8Rng, arity: usize) -> Word {
    let len = rng.random_range(0..16);
    reduce((0..len).map(|_| Letter::new(rng.random_range(0..arity), rng.random())))
}

#[test]
fn word_image_is_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (id, pres, tbl) in corpus() {
        for r in pres.relators() {
            assert_eq!(tbl.word_image(r).unwrap(), 0, "{id}: relator not trivial");
        }
        if pres.arity() == 0 {
            continue;
        }
        for _ in 0..10_000 {
            let u = random_word(&mut rng, pres.arity());
            let v = random_word(&mut rng, pres.arity());
            let uv = tbl.word_image(&u.mul(&v)).unwrap();
            assert_eq!(uv, tbl.mul(tbl.word_image(&u).unwrap(), tbl.word_image(&v).unwrap()), "{id}");
        }
    }
}

#[test]
fn tables_satisfy_the_group_axioms() {
    for (id, _, tbl) in corpus() {
        tbl.verify_group_law(usize::MAX).unwrap_or_else(|e| panic!("{id}: {e}"));
    }
}

#[test]
fn subgroups_match_brute_force() {
    for (id, _, tbl) in corpus() {
        let n = tbl.order();
        if n > 16 {
            continue;
        }
        let mut brute = Vec::new();
        for mask in (1u32..(1 << n)).step_by(2) {
            let set: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if set.iter().all(|&a| set.iter().all(|&b| mask >> tbl.mul(a, b) & 1 == 1)) {
                brute.push(set);
            }
        }
        let mut found: Vec<Vec<usize>> =
            all_subgroups(&tbl, usize::MAX).unwrap().iter().map(|s| s.members().to_vec()).collect();
        brute.sort();
        found.sort();
        assert_eq!(found, brute, "{id}");
    }
}

#[test]
fn fox_fundamental_identity() {
    for (id, pres, tbl) in corpus() {
        for r in pres.relators() {
            let row = fox_row(&tbl, r).unwrap();
            assert!(fox_boundary(&tbl, &row).iter().all(|&x| x == 0), "{id}");
        }
    }
}

#[test]
fn group_ring_is_associative_with_multiplicative_augmentation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (id, _, tbl) in corpus() {
        for ring in [Coefficients::Integers, Coefficients::ModP(3)] {
            for _ in 0..5 {
                let mut random = || {
                    let c = (0..tbl.order()).map(|_| BigInt::from(rng.random_range(-4..=4))).collect();
                    GroupRingElement::from_coeffs(&tbl, ring, c).unwrap()
                };
                let (x, y, z) = (random(), random(), random());
                let xy = gr_multiply(&x, &y).unwrap();
                let xy_z = gr_multiply(&xy, &z).unwrap();
                let x_yz = gr_multiply(&x, &gr_multiply(&y, &z).unwrap()).unwrap();
                assert_eq!(xy_z.coeffs(), x_yz.coeffs(), "{id}");
                let want = x.augmentation() * y.augmentation();
                match ring {
                    Coefficients::Integers => assert_eq!(xy.augmentation(), want, "{id}"),
                    Coefficients::ModP(p) => {
                        assert_eq!(xy.augmentation(), want.mod_floor(&BigInt::from(p)), "{id}")
                    }
                }
            }
        }
    }
}

#[test]
fn reduction_keeps_permutation_matrices() {
    let pres = parse_presentation("gens: a; relators: a^4; prime: 2;").unwrap();
    let c4 = Arc::new(todd_coxeter(&pres, 100).unwrap());
    let r = ModRing::new(3, 5).unwrap();
    let m = qrlab::permrec::permutation_module(Arc::clone(&c4), r, &[c4.trivial_subgroup()]).unwrap();
    let low = m.reduce(2).unwrap();
    assert_eq!(low.ring().modulus(), 9);
    assert_eq!(low.generator_action(), m.generator_action());
}
