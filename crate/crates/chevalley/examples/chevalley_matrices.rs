//! Tour of the integral basis layer: structure constants, adjoint root
//! elements over a finite ring, torus and Weyl elements, and the torus
//! conjugation law.

use chevalley::chev::build_chevalley;
use chevalley::engine::{berkowitz_det, matrix_inverse};
use chevalley::ring::make_ring;
use chevalley::roots::build_root_system;

fn main() {
    let b2 = build_root_system("B2").unwrap();
    let data = build_chevalley(&b2).unwrap();
    println!(
        "B2 adjoint model: {} roots + rank {} = dimension {}",
        b2.len(),
        b2.ambient_rank(),
        data.dim()
    );

    // Root elements are unipotent integer matrices specialized to the ring;
    // their parameter is additive.
    let z5 = make_ring("Z/5").unwrap();
    let t2 = data.root_element(&z5, 0, z5.int(2));
    let t3 = data.root_element(&z5, 0, z5.int(3));
    let mut prod = vec![z5.zero(); data.dim() * data.dim()];
    for r in 0..data.dim() {
        for c in 0..data.dim() {
            let mut acc = z5.zero();
            for k in 0..data.dim() {
                acc = z5.add(acc, z5.mul(t2.matrix[r * data.dim() + k], t3.matrix[k * data.dim() + c]));
            }
            prod[r * data.dim() + c] = acc;
        }
    }
    assert_eq!(prod, data.root_element(&z5, 0, z5.int(0)).matrix);
    println!("t_a(2) t_a(3) = t_a(0) over Z/5: parameter additivity");

    // Every root element has determinant 1 and an exact inverse.
    let det = berkowitz_det(&z5, &t2.matrix, data.dim());
    assert_eq!(det, z5.one());
    let inv = matrix_inverse(&z5, &t2.matrix, data.dim()).unwrap();
    assert_eq!(inv, t2.inverse);
    println!("det t_a(2) = 1, inverse verified by exact elimination-free formula");

    // Weyl and torus elements exist for unit parameters only.
    let w = data.weyl_element(&z5, 0, z5.int(2)).unwrap();
    let h = data.torus_element(&z5, 0, z5.int(2)).unwrap();
    println!(
        "w_a(2) and h_a(2) built; torus elements are diagonal: {}",
        (0..data.dim() * data.dim())
            .all(|i| i / data.dim() == i % data.dim() || h.matrix[i] == z5.zero())
    );
    assert!(data.weyl_element(&z5, 0, z5.int(0)).is_err());
    let _ = w;

    // h_a(u) conjugates t_b(x) to t_b(u^<b,a*> x), exhaustively.
    let rep = data.verify_torus_conjugation(&z5).unwrap();
    assert!(rep.pass, "witnesses: {:?}", rep.witnesses);
    println!("torus conjugation law verified over Z/5 for all pairs and parameters");
}
