//! Tour of two-step nilpotent modules: bilinear cocycle construction, the
//! group law and its derived identities, and quadratic maps between modules.

use chevalley::nil::{NilElem, NilModule, QuadraticMap};
use chevalley::ring::make_ring;

fn main() {
    // Carrier M0 x M with product twisted by a bilinear cocycle c:
    // (u, v)(u', v') = (u + u' + c(v, v'), v + v').
    let z3 = make_ring("Z/3").unwrap();
    let skew = NilModule::from_structure_constants(
        &z3,
        1,
        2,
        &[vec![vec![0], vec![1]], vec![vec![-1], vec![0]]],
    )
    .unwrap();
    println!("skew cocycle module over Z/3: {} elements", skew.size());
    skew.verify_axioms().unwrap();

    // Commutators land in the central part and measure the cocycle skew.
    let a = NilElem { u: vec![0], v: vec![1, 0] };
    let b = NilElem { u: vec![0], v: vec![0, 1] };
    let c = skew.commutator(&a, &b);
    println!("[(0;1,0), (0;0,1)] = {}", skew.render(&c));
    assert_ne!(c, skew.zero());

    // The derived identities of the group law hold exhaustively.
    let rep = skew.verify_derived_identities();
    assert!(rep.pass, "witnesses: {:?}", rep.witnesses);
    println!("derived identities verified on all {} pairs", skew.size() * skew.size());

    // Quadratic maps: q(m + m') = q(m) + q(m') + b(m, m') with b bilinear
    // central, plus scalar compatibility.
    assert!(QuadraticMap::identity(&skew).check().pass);
    assert!(QuadraticMap::zero(&skew, &skew).check().pass);

    // Over Z/2 the square shift u -> u + v^2 is quadratic with vanishing
    // derived form.
    let z2 = make_ring("Z/2").unwrap();
    let m2 = NilModule::from_structure_constants(
        &z2,
        1,
        2,
        &[vec![vec![0], vec![1]], vec![vec![0], vec![0]]],
    )
    .unwrap();
    let ring = m2.ring.clone();
    let q = QuadraticMap::from_fn(&m2, &m2, move |e| NilElem {
        u: vec![ring.add(e.u[0], ring.mul(e.v[0], e.v[0]))],
        v: e.v.clone(),
    });
    let rep = q.check();
    assert!(rep.pass);
    println!("square shift on the Z/2 module is quadratic");

    // A non-bilinear cocycle is rejected at construction.
    let bad = NilModule::from_cocycle_fn(&z3, 1, 1, |v, w| vec![z3.mul(z3.mul(v[0], v[0]), w[0])]);
    println!("cubic cocycle rejected: {}", bad.err().unwrap());
}
