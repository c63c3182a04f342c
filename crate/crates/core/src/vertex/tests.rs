use std::sync::Arc;

use super::*;
use crate::scalars::Scalar;
use crate::superspace::{BasisVector, Config, Kind};

fn setup() -> (Config, VertexAlgebra) {
    let cfg = Config::new(4, 3).unwrap();
    let table = LieTable::superalgebra(&cfg, &cfg.constants());
    (cfg, VertexAlgebra::new(Arc::new(table)))
}

fn g(va: &VertexAlgebra, kind: Kind, i: usize, j: usize) -> Gen {
    va.table().gen_of(&BasisVector { kind, i, j }).unwrap()
}

fn e1(va: &VertexAlgebra, i: usize, j: usize) -> State {
    State::generator(g(va, Kind::E, i, j), 1)
}

#[test]
fn act_mode_examples() {
    let (cfg, va) = setup();
    let e12 = g(&va, Kind::E, 1, 2);
    assert_eq!(va.act_mode(e12, 0, &e1(&va, 2, 3)), e1(&va, 1, 3));
    let r = va.act_mode(e12, 1, &e1(&va, 2, 1));
    assert_eq!(r, State::vacuum().scaled(&cfg.constants().alpha1));
    for a in 0..3 {
        assert!(va.act_mode(e12, a, &State::vacuum()).is_zero());
    }
}

#[test]
fn translate_examples() {
    let (_, va) = setup();
    let u = g(&va, Kind::E, 1, 2);
    let v = g(&va, Kind::E, 2, 3);
    assert!(va.translate(&State::vacuum()).is_zero());
    assert_eq!(
        va.translate(&State::generator(u, 1)),
        State::generator(u, 2)
    );
    let uv = va.order_word(&[Factor::new(u, 1), Factor::new(v, 1)]);
    let mut expect = va.order_word(&[Factor::new(u, 2), Factor::new(v, 1)]);
    expect.add_state(&va.order_word(&[Factor::new(u, 1), Factor::new(v, 2)]));
    assert_eq!(va.translate(&uv), expect);
}

#[test]
fn nth_product_examples() {
    let (_, va) = setup();
    assert_eq!(
        va.nth_product(&e1(&va, 1, 2), 0, &e1(&va, 2, 3)),
        e1(&va, 1, 3)
    );
    let a = va.order_word(&[
        Factor::new(g(&va, Kind::E, 1, 2), 1),
        Factor::new(g(&va, Kind::E, 5, 1), 2),
    ]);
    assert_eq!(va.nth_product(&a, -1, &State::vacuum()), a);
}

#[test]
fn ope_examples() {
    let (cfg, va) = setup();
    let t = va.ope_all(&e1(&va, 1, 2), &e1(&va, 2, 1));
    assert_eq!(t.len(), 2);
    assert_eq!(t[&0], e1(&va, 1, 1).sub(&e1(&va, 2, 2)));
    // κ̃(e_{1,2}, e_{2,1}) = α₁; the δ_{i,j}δ_{p,q} term is absent for i ≠ j
    assert_eq!(t[&1], State::vacuum().scaled(&cfg.constants().alpha1));
    assert!(va.ope_all(&State::vacuum(), &e1(&va, 1, 2)).is_empty());
    let t = va.ope_all(&e1(&va, 1, 1), &e1(&va, 1, 1));
    assert_eq!(
        t[&1],
        State::vacuum().scaled(&(&cfg.constants().alpha1 + &Scalar::one()))
    );
}

#[test]
fn odd_square_vanishes() {
    let (_, va) = setup();
    let p = g(&va, Kind::Psi, 5, 1);
    assert!(va
        .order_word(&[Factor::new(p, 1), Factor::new(p, 1)])
        .is_zero());
    let q = g(&va, Kind::Psi, 6, 2);
    let pq = va.order_word(&[Factor::new(p, 1), Factor::new(q, 1)]);
    let qp = va.order_word(&[Factor::new(q, 1), Factor::new(p, 1)]);
    assert_eq!(pq, qp.neg());
}

#[test]
fn sub_basis_counts() {
    let (_, va) = setup();
    // 𝔟 at (4,3): 16 + 9 of shift 0, 12 of shift 1
    let b1 = va.sub_basis(1);
    assert_eq!(b1.len(), 1 + 25);
    for m in va.sub_basis(2) {
        assert!(va.conformal_weight(&m) <= 2);
    }
}
