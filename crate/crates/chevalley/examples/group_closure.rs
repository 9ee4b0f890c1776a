//! Tour of the closure engine: breadth-first enumeration of elementary
//! groups, caps and diameters, word width, group-law spot checks, and the
//! perfectness computation with its rank-2 exception.

use chevalley::chev::build_chevalley;
use chevalley::engine::{
    check_determinants, check_group_axioms, elementary_group, verify_perfectness, word_width,
    GeneratorFamily,
};
use chevalley::ring::make_ring;
use chevalley::roots::build_root_system;

fn main() {
    // Orders of small elementary groups in the adjoint model.
    for (sys_desc, ring_desc) in [
        ("A1", "Z/2"),
        ("A1", "Z/3"),
        ("A2", "Z/2"),
        ("A2", "Z/3"),
        ("B2", "Z/2"),
        ("G2", "Z/2"),
    ] {
        let sys = build_root_system(sys_desc).unwrap();
        let data = build_chevalley(&sys).unwrap();
        let ring = make_ring(ring_desc).unwrap();
        let group = elementary_group(&data, &ring, 100_000);
        println!(
            "E({sys_desc}, {ring_desc}): order {}, diameter {}, complete: {}",
            group.order(),
            group.diameter(),
            group.complete
        );
    }

    // The enumerated set satisfies the group laws and every element has
    // determinant 1; checked on a bounded prefix here, exhaustively in the
    // test suite.
    let a2 = build_root_system("A2").unwrap();
    let data = build_chevalley(&a2).unwrap();
    let z3 = make_ring("Z/3").unwrap();
    let group = elementary_group(&data, &z3, 100_000);
    assert!(check_group_axioms(&group, 500).pass);
    assert!(check_determinants(&group, group.order()).pass);

    // Word width: the longest element needs this many generators.
    let far = group.element(group.order() - 1);
    println!(
        "E(A2, Z/3): order {}, an element at word width {:?}",
        group.order(),
        word_width(&group, &far)
    );

    // Caps turn non-terminating enumerations into explicit partial results.
    let capped = elementary_group(&data, &z3, 100);
    println!("capped at 100: saw {} elements, complete: {}", capped.order(), capped.complete);
    assert!(!capped.complete);

    // Omitting one axis from the generators does not shrink the group in
    // rank >= 2.
    let omitted = GeneratorFamily::omitting_axis(&data, &z3, 0).closure(&data, 100_000);
    assert_eq!(omitted.order(), group.order());
    println!("omitting one axis of A2 over Z/3 leaves the order at {}", omitted.order());

    // Derived closure: perfect for A2, index 2 for B2 over the two-element
    // field.
    let rep = verify_perfectness(&data, &z3, 100_000);
    assert!(rep.perfect);
    let b2 = build_root_system("B2").unwrap();
    let data_b2 = build_chevalley(&b2).unwrap();
    let z2 = make_ring("Z/2").unwrap();
    let rep = verify_perfectness(&data_b2, &z2, 100_000);
    println!(
        "E(B2, Z/2): order {}, derived subgroup {} (index {})",
        rep.order, rep.derived_order, rep.index
    );
    assert_eq!(rep.index, 2);
}
