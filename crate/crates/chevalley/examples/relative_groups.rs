//! Tour of the relative (ideal-level) subgroups: the semidirect extension
//! ring, conjugated generators, the kernel certificate, ideal-sum
//! decompositions, and functorial transport along ring maps.

use chevalley::chev::build_chevalley;
use chevalley::engine::{
    certify_kernel, relative_elementary_closure, verify_decomposition, verify_product_splitting,
    verify_reduction_image, RelativeInstance,
};
use chevalley::ring::{make_ring, RingHom, Subalgebra};
use chevalley::roots::build_root_system;

fn main() {
    // The relative group at an ideal A of R lives inside the group over the
    // semidirect extension A x| R; it is enumerated from the conjugated
    // generators z_a(r, a).
    let a2 = build_root_system("A2").unwrap();
    let data = build_chevalley(&a2).unwrap();
    let z4 = make_ring("Z/4").unwrap();
    let ideal = Subalgebra::ideal(&z4, &[z4.int(2)]);
    let inst = RelativeInstance::new(&ideal).unwrap();
    println!(
        "extension ring of 2(Z/4) inside Z/4: size {}",
        inst.extension.size()
    );

    let kernel = relative_elementary_closure(&data, &inst, 100_000);
    println!("relative elementary group of (A2, Z/4, 2Z/4): order {}", kernel.order());
    assert!(kernel.complete);
    assert_eq!(kernel.order(), 256);

    // The certificate pins the closure down as the exact kernel of the
    // projection onto the base group: ring compatibility, triviality of the
    // projection, normality, generator membership, parameter splitting.
    let cert = certify_kernel(&data, &inst, &kernel);
    assert!(cert.pass());
    println!("kernel certificate: pass (projection-trivial, conjugation-invariant)");

    // Decomposition along an ideal sum: Z/6 = 3(Z/6) + 4(Z/6) makes the
    // relative group a product of the two factors.
    let z6 = make_ring("Z/6").unwrap();
    let whole = Subalgebra::full(&z6);
    let parts = [
        Subalgebra::ideal(&z6, &[z6.int(3)]),
        Subalgebra::ideal(&z6, &[z6.int(4)]),
    ];
    let rep = verify_decomposition(&data, &whole, &parts, 100_000).unwrap();
    println!(
        "E(A2, Z/6) decomposes: part orders {:?}, product order {}",
        rep.part_orders, rep.product_order
    );
    assert!(rep.pass());

    // Reduction Z/4 -> Z/2 transports generators onto generators, and the
    // image generates the target group.
    let hom = RingHom::modular_reduction(4, 2).unwrap();
    let rep = verify_reduction_image(&data, &hom, 100_000).unwrap();
    assert!(rep.pass);
    println!(
        "reduction Z/4 -> Z/2: image group order {:?}",
        rep.target_order
    );

    // Product rings split the group into component factors.
    let prod = make_ring("Z/2 x Z/3").unwrap();
    let rep = verify_product_splitting(&data, &prod, 100_000).unwrap();
    assert!(rep.pass);
    println!("E(A2, Z/2 x Z/3) splits componentwise: {}", rep.details.join("; "));
}
