use super::*;
use crate::gens::{all_symbols, eval, eval_on_vector, Letter, Symbol, Word};
use crate::group::{parse_group, FGroup};
use crate::matrix as mx;
use crate::ring::{El, FiniteRing, Ideal};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_word(g: &FGroup, len: usize, rng: &mut ChaCha8Rng) -> Word<El> {
    let syms: Vec<Symbol<El>> = all_symbols(g, &g.ring().elements().collect::<Vec<_>>());
    let mut w = Word::new();
    for _ in 0..len {
        let s = syms[rng.gen_range(0..syms.len())].clone();
        w.letters.push(Letter { sym: s, inv: rng.gen_bool(0.3) });
    }
    w
}

#[test]
fn certificates_and_cosets() {
    let r = FiniteRing::zmod(6).unwrap();
    let c = unimodular_certificate(&r, &[2, 3]).unwrap();
    assert!(c.check(&r));
    assert!(unimodular_certificate(&r, &[2, 4]).is_none());
    let i3 = Ideal::generated(&r, &[3]);
    let (i, u, e) = find_unit_in_coset(&r, 2, &i3).unwrap();
    assert_eq!((r.add(2, i), e), (r.mul(u, e), 1));
    assert!(r.is_unit(u));
    let zero = Ideal::generated(&r, &[0]);
    assert_eq!(find_unit_in_coset(&r, 5, &zero).unwrap(), (0, 5, 1));
}

#[test]
fn column_reduction_examples() {
    let g = parse_group("zmod:6:lambda=5/quad:3").unwrap();
    let (w, e) = column_reduce_semisimple(&g, &[0, 0, 1]).unwrap();
    assert!(w.is_empty());
    assert_eq!(e, 1);
    for (x, expect) in [([0, 2, 3], 1), ([0, 2, 4], 4)] {
        let (w, e) = column_reduce_semisimple(&g, &x).unwrap();
        assert_eq!(e, expect);
        let mut v = vec![0; 6];
        v[..3].copy_from_slice(&x);
        let out = eval_on_vector(&g, &w, &v).unwrap();
        assert_eq!(out, vec![0, 0, e, 0, 0, 0]);
    }
}

#[test]
fn torus_is_diagonal() {
    for spec in ["zmod:5/quad:3", "hyp:zmod:3/quad:3"] {
        let g = parse_group(spec).unwrap();
        let r = g.ring().clone();
        for u in r.elements().filter(|&u| r.is_unit(u)) {
            let m = eval(&g, &torus_word(&g, 0, 2, u).unwrap()).unwrap();
            assert!(mx::is_diagonal(g.alg.as_ref(), &m));
            assert_eq!((*m.get(0, 0), *m.get(2, 2)), (u, r.inv(u).unwrap()));
        }
    }
}

#[test]
fn vector_reduction_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for spec in [
        "zmod:5:lambda=4;gens=0,1,2,3,4/quad:3",
        "zmod:4:lambda=3;gens=0,1,2,3/quad:3",
        "zmod:4:lambda=3/herm:4:a=0",
        "zmod:6:lambda=5/quad:3",
        "hyp:zmod:2/quad:3",
        "zmod:8/herm:4:a=0",
        "zmod:4:lambda=3/herm:4:a=0,2",
    ] {
        let g = parse_group(spec).unwrap();
        let e = g.basis(g.dim() - 1);
        reduce_isotropic_unimodular(&g, &e).unwrap();
        for _ in 0..40 {
            let w0 = random_word(&g, 6, &mut rng);
            let v = eval_on_vector(&g, &w0, &e).unwrap();
            let res = reduce_isotropic_unimodular(&g, &v).unwrap_or_else(|err| panic!("{spec}: {v:?}: {err}"));
            assert_eq!(eval_on_vector(&g, &res.word, &v).unwrap(), e);
            let d = vector::direct(&g, &v).unwrap_or_else(|err| panic!("{spec}: direct steps failed on {v:?}: {err}"));
            assert_eq!(eval_on_vector(&g, &d, &v).unwrap(), e);
        }
    }
}

#[test]
fn vector_reduction_rejects_bad_vectors() {
    let g = parse_group("zmod:5:lambda=1/quad:3").unwrap();
    assert!(reduce_isotropic_unimodular(&g, &[0; 6]).is_err());
    // e_1 + e_4 has ⟨v, v⟩ ≠ 0
    assert!(reduce_isotropic_unimodular(&g, &[1, 0, 0, 1, 0, 0]).is_err());
}

fn congruent_word(g: &FGroup, ideal: &Ideal, len: usize, rng: &mut ChaCha8Rng) -> Word<El> {
    let pool: Vec<El> = ideal.elements();
    let syms: Vec<Symbol<El>> = all_symbols(g, &pool)
        .into_iter()
        .filter(|s| crate::gens::entries(g, s).iter().all(|(p, q, v)| p == q || ideal.contains(*v)))
        .collect();
    let mut w = Word::new();
    for _ in 0..len {
        w.push(syms[rng.gen_range(0..syms.len())].clone());
    }
    w
}

#[test]
fn diagonalization_mod_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for spec in ["zmod:8/herm:4:a=0", "zmod:8:lambda=7/herm:4:a=0", "zmod:8:lambda=7;gens=0,2,4,6/quad:3"] {
        let g = parse_group(spec).unwrap();
        let r = g.ring().clone();
        let ideal = Ideal::generated(&r, &[2]);
        let (mut only_right, mut total) = (0, 0);
        for _ in 0..40 {
            let w = congruent_word(&g, &ideal, 8, &mut rng);
            let beta = eval(&g, &w).unwrap();
            let res = diagonalize_mod_radical(&g, &beta, &ideal).unwrap_or_else(|e| panic!("{spec}: {e}\n{}", mx::show(g.alg.as_ref(), &beta)));
            let lhs = g.mul(&g.mul(&eval(&g, &res.left).unwrap(), &beta), &eval(&g, &res.right).unwrap());
            assert_eq!(lhs, res.d);
            total += 1;
            if res.left.is_empty() {
                only_right += 1;
            }
        }
        eprintln!("{spec}: {only_right}/{total} by column operations alone");
    }
}

#[test]
fn dilation_over_z6() {
    let g = parse_group("zmod:6:lambda=5/quad:3").unwrap();
    let slices = local_slices(&g).unwrap();
    assert_eq!(slices.len(), 2);
    for sl in &slices {
        let lpg = sl.group.over_poly();
        let w = Word::single(Symbol::scalar(crate::gens::Family::QE, 0, 1, lpg.alg.poly.x()));
        let d = dilate(&g, &sl.loc, &w, 16).unwrap();
        let pg = g.over_poly();
        let value = eval(&pg, &d.word).unwrap();
        let b = sl.loc.apply(d.b);
        let target = eval(&lpg, &crate::gens::substitute_word(&lpg, &w, &crate::ring::Subst::ScaleX(b))).unwrap();
        assert_eq!(localize_matrix(&pg, &sl.loc, &value), target);
        assert!(sl.loc.target.is_unit(b));
    }
}

#[test]
fn local_global_round_trip_z6() {
    let g = parse_group("zmod:6:lambda=5/quad:3").unwrap();
    let pg = g.over_poly();
    let pool = crate::sample::symbol_pool(&g);
    let mut rng = crate::sample::rng(4);
    for _ in 0..5 {
        let w = crate::sample::random_poly_word_trivial_at_zero(&pg, &pool, 3, 3, &mut rng);
        let rep = patch_word(&g, &w, 16).unwrap();
        assert_eq!(rep.status, PatchStatus::Success);
        assert_eq!(eval(&pg, &rep.word).unwrap(), eval(&pg, &w).unwrap());
    }
    let constant = Word::single(Symbol::scalar(crate::gens::Family::QE, 0, 1, crate::ring::MPoly::constant(1)));
    assert!(matches!(patch_word(&g, &constant, 16), Err(crate::Error::Precondition(_))));
}

#[test]
fn conjugation_into_e() {
    let mut rng = crate::sample::rng(2);
    for spec in ["zmod:5:lambda=4;gens=0,1,2,3,4/quad:3", "zmod:4:lambda=3/herm:4:a=0", "zmod:6:lambda=5/quad:3"] {
        let g = parse_group(spec).unwrap();
        let pool = crate::sample::symbol_pool(&g);
        for _ in 0..3 {
            let b = crate::sample::random_word(&pool, 4, &mut rng);
            let beta = eval(&g, &b).unwrap();
            let a = crate::sample::random_word(&pool, 2, &mut rng);
            let w = conjugate_into_e(&g, &beta, &a, 16).unwrap_or_else(|e| panic!("{spec}: {e}"));
            let expect = g.mul(&g.mul(&beta, &eval(&g, &a).unwrap()), &g.inverse(&beta));
            assert_eq!(eval(&g, &w).unwrap(), expect);
        }
    }
}

#[test]
fn symplectic_order_formula() {
    assert_eq!(symplectic_order(3, 2), 1_451_520);
    assert_eq!(symplectic_order(1, 3), 24);
}

#[test]
fn small_closures() {
    // E over F2 at 2n = 2 is SL(2, 2), order 6
    let g = crate::group::Group::quadratic_any(&std::sync::Arc::new(crate::form::FormRing::build(&crate::ring::FiniteRing::zmod(2).unwrap(), 1, &[1]).unwrap()), 1).unwrap();
    let o = bfs_closure(&g, BfsCaps::default());
    assert!(o.complete());
    assert_eq!(o.size() as u128, symplectic_order(1, 2));
    let mut rng = crate::sample::rng(1);
    assert!(o.spot_check_subgroup(20, &mut rng).unwrap());
    let capped = bfs_closure(&g, BfsCaps::elements(3));
    assert!(!capped.complete());
    assert_eq!(capped.size(), 3);
    let m = eval(&g, &Word::single(o.generators[0].clone())).unwrap();
    match o.contains(&m) {
        Answer::Yes(Some(w)) => assert_eq!(eval(&g, &w).unwrap(), m),
        other => panic!("{other:?}"),
    }
    let empty = bfs_with(&g, Vec::new(), BfsCaps::elements(10));
    assert_eq!(empty.size(), 1);
    assert!(empty.complete());
}

#[test]
fn gl_embedding_checks() {
    let base = crate::ring::FiniteRing::zmod(2).unwrap();
    let c = gl_correspondence(&base, 2).unwrap();
    assert!(c.passed(), "{c:?}");
    let cmp = gl_closure_comparison(&base, 2, BfsCaps::default()).unwrap();
    assert!(cmp.equal, "{cmp:?}");
    assert_eq!(cmp.gl_size, 20160);
}

#[test]
fn containment_spot_checks() {
    let g = parse_group("zmod:2;gens=0,1/quad:3").unwrap();
    let o = MembershipOracle::constructive(&g, 200);
    let mut rng = crate::sample::rng(9);
    let t = commutator_containment_check(&o, 1, &[1, 2], 5, &mut rng).unwrap();
    assert_eq!(t.len(), 2);
    assert!(t.iter().all(|x| x.fail == 0));
    let h = parse_group("zmod:6:lambda=5/quad:3").unwrap();
    let w = MembershipOracle::word_witness(&h);
    let t = commutator_containment_check(&w, 3, &[2], 5, &mut rng).unwrap();
    assert_eq!(t[0].pass, 5);
}

