//! Property tests against brute-force references.

use std::collections::BTreeSet;

use cartankit::blockcalc::{free_case_cartan, kb_check_min};
use cartankit::embed::{block_orthogonal_embeddings, canonical_form, orthogonal_embeddings_with, EmbedOptions};
use cartankit::exactlin::{
    det, elementary_divisors, inverse, is_positive_definite, is_unimodular, kernel_basis, rank, snf, Matrix,
};
use cartankit::paction::{galois_model, invariant_transversal, orbits, ActionGroup};
use cartankit::qform::{congruent, minimum, theta_prefix, GramForm};
use cartankit::{Int, IntMatrix, Rat};
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

fn int(rows: &[Vec<i64>]) -> IntMatrix {
    Matrix::from_i64_rows(rows).unwrap()
}

fn matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r).prop_map(|rows| int(&rows))
    })
}

fn square(n: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, n), n).prop_map(|rows| int(&rows))
}

/// Half-widths `sqrt(g_min (G^-1)_ii)` of a box containing all minimal vectors.
fn box_bounds(g: &cartankit::RatMatrix) -> Vec<i64> {
    let inv = inverse(g).unwrap();
    let top = (0..g.rows()).map(|i| g[(i, i)].clone()).min().unwrap();
    (0..g.rows())
        .map(|i| (&top * &inv[(i, i)]).floor().to_integer().sqrt().to_i64().unwrap())
        .collect()
}

fn box_minimum(g: &cartankit::RatMatrix) -> Rat {
    let b = box_bounds(g);
    let n = b.len();
    let mut best: Option<Rat> = None;
    let mut x: Vec<i64> = b.iter().map(|v| -v).collect();
    loop {
        if x.iter().any(|&v| v != 0) {
            let v: Vec<Rat> = x.iter().map(|&t| Rat::from_integer(t.into())).collect();
            let q = g.quadratic(&v);
            if best.as_ref().is_none_or(|m| q < *m) {
                best = Some(q);
            }
        }
        let mut i = 0;
        while i < n && x[i] == b[i] {
            x[i] = -b[i];
            i += 1;
        }
        if i == n {
            return best.unwrap();
        }
        x[i] += 1;
    }
}

/// Positive-definite `B B^T` with a search box of at most `50_000` points.
fn small_form() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4)
        .prop_flat_map(|n| square(n, 3))
        .prop_map(|b| b.mul_transpose(&b).unwrap())
        .prop_filter("positive definite with a small box", |g| {
            let r = g.to_rational();
            is_positive_definite(&r) && box_bounds(&r).iter().map(|b| 2 * b + 1).product::<i64>() <= 50_000
        })
}

/// Product of elementary row operations, hence unimodular.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 0..8).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (i, j, k, swap) in ops {
            if swap {
                u.swap_rows(i, j);
            } else if i != j {
                let row_j: Vec<Int> = u.row(j).to_vec();
                for (a, b) in u.row_mut(i).iter_mut().zip(row_j) {
                    *a += b * k;
                }
            }
        }
        u
    })
}

fn brute_embeddings(c: &IntMatrix) -> BTreeSet<IntMatrix> {
    let n = c.rows();
    let t: Vec<i64> = c.as_slice().iter().map(|x| x.to_i64().unwrap()).collect();
    let bound: Vec<i64> = (0..n).map(|i| (t[i * n + i] as f64).sqrt() as i64).collect();
    let mut cands = Vec::new();
    let mut x: Vec<i64> = bound.iter().map(|b| -b).collect();
    loop {
        if x.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0) {
            cands.push(x.clone());
        }
        let mut i = 0;
        while i < n && x[i] == bound[i] {
            x[i] = -bound[i];
            i += 1;
        }
        if i == n {
            break;
        }
        x[i] += 1;
    }
    fn go(
        c: &[Vec<i64>],
        from: usize,
        t: &[i64],
        n: usize,
        g: &mut Vec<i64>,
        pick: &mut Vec<usize>,
        out: &mut BTreeSet<IntMatrix>,
    ) {
        if g.as_slice() == t {
            let rows: Vec<Vec<i64>> = pick.iter().map(|&i| c[i].clone()).collect();
            out.insert(canonical_form(&int(&rows)));
            return;
        }
        for k in from..c.len() {
            for i in 0..n {
                for j in 0..n {
                    g[i * n + j] += c[k][i] * c[k][j];
                }
            }
            let r = |i: usize, j: usize| t[i * n + j] - g[i * n + j];
            if (0..n).all(|i| r(i, i) >= 0 && (0..n).all(|j| r(i, j) * r(i, j) <= r(i, i) * r(j, j))) {
                pick.push(k);
                go(c, k, t, n, g, pick, out);
                pick.pop();
            }
            for i in 0..n {
                for j in 0..n {
                    g[i * n + j] -= c[k][i] * c[k][j];
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    go(&cands, 0, &t, n, &mut vec![0; n * n], &mut Vec::new(), &mut out);
    out
}

fn embed_target() -> impl Strategy<Value = IntMatrix> {
    (1usize..=3)
        .prop_flat_map(|n| (prop::collection::vec(1i64..=6, n), prop::collection::vec(-6i64..=6, 3)))
        .prop_map(|(d, o)| {
            let n = d.len();
            let mut rows = vec![vec![0; n]; n];
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            for ((i, j), &x) in pairs.zip(&o) {
                rows[i][j] = x;
                rows[j][i] = x;
            }
            for (i, &x) in d.iter().enumerate() {
                rows[i][i] = x;
            }
            int(&rows)
        })
        .prop_filter("positive definite", |c| is_positive_definite(&c.to_rational()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn snf_transforms_are_valid(a in matrix(4, 4, 20)) {
        let s = snf(&a);
        prop_assert!(is_unimodular(&s.left) && is_unimodular(&s.right));
        prop_assert_eq!(s.left.mul(&a).unwrap().mul(&s.right).unwrap(), s.diagonal_matrix(a.rows(), a.cols()));
        for w in s.diagonal.windows(2) {
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
        prop_assert!(s.diagonal.iter().all(|d| !d.is_negative()));
        prop_assert_eq!(s.rank(), rank(&a.to_rational()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernel_is_saturated(a in matrix(5, 3, 4)) {
        let k = kernel_basis(&a);
        prop_assert_eq!(k.rows(), a.rows() - rank(&a.to_rational()));
        if k.rows() > 0 {
            prop_assert!(k.mul(&a).unwrap().is_zero());
            prop_assert!(elementary_divisors(&k).iter().all(|d| *d == Int::from(1)));
        }
    }

    #[test]
    fn det_is_multiplicative(a in square(3, 5), b in square(3, 5)) {
        prop_assert_eq!(det(&a.mul(&b).unwrap()).unwrap(), det(&a).unwrap() * det(&b).unwrap());
    }

    #[test]
    fn minimum_matches_box_search(g in small_form(), halve in any::<bool>()) {
        let mut f = GramForm::from_int(&g).unwrap();
        if halve {
            f = f.scaled(&Rat::new(1.into(), 2.into())).unwrap();
        }
        let m = minimum(&f).unwrap();
        prop_assert_eq!(&m.value, &box_minimum(f.entries()));
        for v in &m.vectors {
            prop_assert_eq!(f.value(v), m.value.clone());
        }
    }

    #[test]
    fn congruence_detects_base_change(g in small_form(), u in unimodular(4)) {
        let n = g.rows();
        let idx: Vec<usize> = (0..n).collect();
        let s = u.submatrix(&idx, &idx);
        prop_assume!(is_unimodular(&s));
        let g1 = GramForm::from_int(&g).unwrap();
        let g2 = GramForm::from_int(&s.congruence(&g).unwrap()).unwrap();
        let c = congruent(&g1, &g2).unwrap();
        let w = c.witness().expect("congruent by construction");
        prop_assert_eq!(w.congruence(&g).unwrap(), g2.integral_matrix().unwrap());
        prop_assert_eq!(minimum(&g1).unwrap().value, minimum(&g2).unwrap().value);
        prop_assert_eq!(theta_prefix(&g1, &Int::from(6)).unwrap(), theta_prefix(&g2, &Int::from(6)).unwrap());
    }

    #[test]
    fn kb_check_is_a_congruence_invariant(g in small_form(), u in unimodular(4), d in 1u64..=16) {
        let n = g.rows();
        let idx: Vec<usize> = (0..n).collect();
        let s = u.submatrix(&idx, &idx);
        prop_assume!(is_unimodular(&s));
        let a = kb_check_min(&g, d, n as u64).unwrap();
        let b = kb_check_min(&s.congruence(&g).unwrap(), d, n as u64).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn embeddings_match_brute_force(c in embed_target()) {
        let ours: BTreeSet<IntMatrix> = orthogonal_embeddings_with(&c, &EmbedOptions::default())
            .unwrap()
            .into_iter()
            .map(|e| e.matrix().clone())
            .collect();
        prop_assert_eq!(ours, brute_embeddings(&c));
    }
}

fn block_pool() -> Vec<IntMatrix> {
    vec![
        int(&[vec![1]]),
        int(&[vec![2]]),
        int(&[vec![3]]),
        int(&[vec![4]]),
        int(&[vec![2, 1], vec![1, 2]]),
        int(&[vec![4, 2], vec![2, 4]]),
        int(&[vec![2, 0], vec![0, 3]]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn blockwise_search_matches_joint_search(i in 0usize..7, j in 0usize..7, rows in 2usize..=6) {
        let pool = block_pool();
        let (a, b) = (&pool[i], &pool[j]);
        let joint = IntMatrix::block_diagonal(&[a.clone(), b.clone()]);
        let opts = EmbedOptions {
            rows: Some(rows),
            column_blocks: vec![a.rows(), b.rows()],
            ..EmbedOptions::default()
        };
        let reference: Vec<IntMatrix> = orthogonal_embeddings_with(&joint, &opts).unwrap().into_iter().map(|e| e.matrix().clone()).collect();
        let ours: Vec<IntMatrix> = block_orthogonal_embeddings(&[a.clone(), b.clone()], rows, u64::MAX)
            .unwrap()
            .into_iter()
            .map(|e| e.matrix().clone())
            .collect();
        prop_assert_eq!(ours, reference);
    }

    #[test]
    fn free_case_divisors(zexp in 0u32..3, e in prop::sample::select(vec![1u64, 3, 5, 7, 15]), dexp in 2u32..7) {
        let m = 2u64.pow(dexp);
        prop_assume!((m - 1) % e == 0);
        let z = 2u64.pow(zexp);
        let c = free_case_cartan(z, m, e).unwrap();
        let mut expect = vec![Int::from(z); e as usize - 1];
        expect.push(Int::from(z * m));
        prop_assert_eq!(elementary_divisors(&c), expect);
    }
}

fn transversal_models() -> Vec<ActionGroup> {
    vec![
        galois_model(2, 2, &[1, 1], false).unwrap(),
        galois_model(2, 2, &[1, 1, 0], false).unwrap(),
        galois_model(2, 2, &[1, 1, 0], true).unwrap(),
        galois_model(3, 2, &[2, 1], false).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn transversal_is_equivariant(model in 0usize..4, x_seed in any::<u64>(), a_seed in any::<u64>()) {
        let a = &transversal_models()[model];
        let g = a.group();
        let tr = invariant_transversal(a).unwrap();
        let x = g.element((x_seed % g.order() as u64) as usize);
        let k = (a_seed % a.order() as u64) as usize;
        let (p, q) = tr.map(&x);
        let (pa, qa) = tr.map(&a.apply(k, &x));
        prop_assert_eq!(pa, a.apply(k, &p));
        prop_assert_eq!(qa, a.apply(k, &q));
        prop_assert_eq!(tr.inverse(&p, &q), x);
    }

    #[test]
    fn orbits_partition_the_group(model in 0usize..4) {
        let a = &transversal_models()[model];
        let os = orbits(a);
        prop_assert_eq!(os.iter().map(|o| o.size).sum::<usize>(), a.group().order());
        prop_assert!(os.iter().all(|o| o.size * o.stabilizer_order == a.order()));
    }
}
