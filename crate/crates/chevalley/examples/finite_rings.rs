//! Tour of the finite-ring layer: descriptor grammar, homotopes, idempotent
//! powers, localization, colocalization towers, and idempotent cover sums.

use chevalley::ring::{
    check_cover_sum, check_power_idempotent, colocalization_tower, idempotent_power, localize,
    make_ring, HomotopeRing, Subalgebra,
};

fn main() {
    for desc in ["Z/6", "Z/2[x]/(x^2+x+1)", "Z/2 x Z/3", "Z/4[x]/(x^2+2)"] {
        let ring = make_ring(desc).unwrap();
        println!(
            "{desc}: size {}, units {}, idempotents {}",
            ring.size(),
            ring.units().len(),
            ring.elements().filter(|&e| ring.mul(e, e) == e).count()
        );
    }

    // The homotope twists multiplication to a*b*s; associativity survives.
    let z9 = make_ring("Z/9").unwrap();
    let h = HomotopeRing::new(Subalgebra::full(&z9), z9.int(3));
    h.verify().unwrap();
    println!("Z/9 twisted by 3: (2*2)*2 = {}", z9.render(h.product(h.product(2, 2), 2)));

    // Some power of any element is idempotent in a finite ring; that power
    // cuts out the localization at s.
    let z12 = make_ring("Z/12").unwrap();
    let e = idempotent_power(&z12, z12.int(2)).e;
    println!("idempotent power of 2 in Z/12: {}", z12.render(e));
    assert_eq!(e, z12.int(4));
    let loc = localize(&z12, z12.int(2));
    println!(
        "Z/12 localized at 2: carrier {:?}, 2 maps to an element with inverse {}",
        loc.carrier.iter().map(|&a| z12.render(a)).collect::<Vec<_>>(),
        z12.render(loc.image_inverse_of_s().unwrap())
    );

    // The colocalization tower multiplies by s until the image stabilizes;
    // the connecting map is a bijection on the stable part.
    let full = Subalgebra::full(&z12);
    let tower = colocalization_tower(&full, z12.int(2), 8);
    println!(
        "Z/12 tower at s=2: stabilizes at level {}, stable part {:?}",
        tower.stabilization,
        tower.stable.iter().map(|&a| z12.render(a)).collect::<Vec<_>>()
    );
    assert!(tower.stable_part_bijective());
    assert!(tower.noetherian_shadow().is_ok());

    // Stable parts are power idempotent: products x * y^k span additively.
    let rep = check_power_idempotent(&z12, &tower.stable, None, 3);
    assert!(rep.pass);
    println!("stable part is power idempotent up to k = 3");

    // 2 and 3 cover the unit of Z/6 (their idempotents join to 1), and the
    // stable part splits as the sum of the images.
    let z6 = make_ring("Z/6").unwrap();
    let cover = check_cover_sum(&Subalgebra::full(&z6), z6.int(1), &[z6.int(2), z6.int(3)]).unwrap();
    println!(
        "Z/6 covered by (2, 3): joint idempotent {}, sum identity pass: {}",
        z6.render(cover.e),
        cover.pass
    );
    assert!(cover.pass);
    // A single 2 is not a cover of the unit: precondition, not a failure.
    assert!(check_cover_sum(&Subalgebra::full(&z6), z6.int(1), &[z6.int(2)]).is_err());
}
