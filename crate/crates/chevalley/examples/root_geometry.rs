//! Tour of the root-system layer: construction from descriptors, neighbor
//! relations, the two-hyperplane covering obstruction, thick series, and
//! factor-morphisms.

use chevalley::roots::{
    apply_morphism, build_root_system, thick_series, verify_hyperplane_lemma, RootMorphism,
};

fn main() {
    for desc in ["A2", "B2", "G2", "BC2", "A1,A1"] {
        let sys = build_root_system(desc).unwrap();
        println!(
            "{desc}: {} roots in rank {}, irreducible: {}",
            sys.len(),
            sys.ambient_rank(),
            sys.is_irreducible()
        );
    }

    // Neighbors of a G2 short root: linearly independent, non-orthogonal,
    // with no root strictly inside the open positive cone.
    let g2 = build_root_system("G2").unwrap();
    let alpha = 0;
    let neighbors = g2.neighbors(alpha).unwrap();
    println!(
        "G2 root {:?} has {} neighbors",
        g2.root(alpha),
        neighbors.len()
    );

    // No irreducible system is covered by two root-spanned hyperplanes.
    for desc in ["A2", "B3", "G2", "BC3", "D4", "F4"] {
        let sys = build_root_system(desc).unwrap();
        let rep = verify_hyperplane_lemma(&sys).unwrap();
        assert!(rep.pass);
        println!(
            "{desc}: not covered by any 2 of its {} root-spanned hyperplanes",
            rep.hyperplane_count
        );
    }

    // Thick series through a B2 long root partition the complement of its
    // axis into two arcs of three roots each.
    let b2 = build_root_system("B2").unwrap();
    let max_norm = (0..b2.len()).map(|i| b2.norm(i)).max().unwrap();
    let long = (0..b2.len())
        .find(|&i| b2.norm(i) == max_norm)
        .expect("B2 has long roots");
    let series = thick_series(&b2, long).unwrap();
    println!(
        "B2 series through {:?}: sizes {:?}",
        b2.root(long),
        series.iter().map(|p| p.members.len()).collect::<Vec<_>>()
    );
    assert_eq!(series.len(), 2);

    // Collapsing B2 along (x, y) -> x + y lands onto the non-reduced BC1.
    let bc1 = build_root_system("BC1").unwrap();
    let f = RootMorphism::from_int_matrix(&b2, &bc1, &[vec![1, 1]]).unwrap();
    let rep = apply_morphism(&f).unwrap();
    println!(
        "B2 -> BC1 under (x,y) -> x+y: factor-morphism: {}, kernel components: {}",
        rep.is_factor,
        rep.kernel_components.len()
    );
    assert!(rep.is_factor);
}
