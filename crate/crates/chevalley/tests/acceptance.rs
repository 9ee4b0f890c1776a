//! End-to-end acceptance run. Ten numbered criteria cover the quantitative
//! witness, the exhaustive lemma shadows at desk scale, and report
//! determinism; each prints exactly one pass/fail line and the process exits
//! nonzero if any criterion fails. Budgets and caps are pinned as constants.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use chevalley::catalog::{cocycle_catalog, run_suite};
use chevalley::chev::{build_chevalley, ChevalleyData};
use chevalley::engine::{
    verify_axis_elimination, verify_coefficient_spans, verify_perfectness,
    verify_product_splitting, verify_reduction_image, verify_relative_characterizations,
    verify_series_regeneration,
};
use chevalley::report::render_json;
use chevalley::ring::{
    check_cover_sum, check_power_idempotent, colocalization_tower, idempotent_join, make_ring,
    Elem, FiniteRing, RingHom, Subalgebra,
};
use chevalley::roots::{
    build_root_system, classify_subset, thick_series, verify_hyperplane_lemma, RootSystem,
};

const WITNESS_BUDGET: Duration = Duration::from_secs(5);
const PERFECT_BUDGET: Duration = Duration::from_secs(120);
const RELATIVE_BUDGET: Duration = Duration::from_secs(600);
const PERFECT_CAP: usize = 100_000;
const RELATIVE_CAP: usize = 100_000;
const GENERATION_CAP: usize = 400_000;
const REDUCTION_CAP: usize = 50_000;

/// Every ring in the acceptance catalog with at most 64 elements.
const RING_CATALOG_64: &[&str] = &[
    "Z/2",
    "Z/3",
    "Z/4",
    "Z/5",
    "Z/6",
    "Z/7",
    "Z/8",
    "Z/9",
    "Z/12",
    "Z/16",
    "Z/24",
    "Z/27",
    "Z/30",
    "Z/32",
    "Z/36",
    "Z/48",
    "Z/60",
    "Z/64",
    "Z/2[x]/(x^2+x+1)",
    "Z/2[x]/(x^3+x+1)",
    "Z/3[x]/(x^2+1)",
    "Z/2[x]/(x^2)",
    "Z/3[x]/(x^2)",
    "Z/2[x]/(x^3)",
    "Z/4[x]/(x^2+2)",
    "Z/2 x Z/3",
    "Z/2 x Z/2",
    "Z/4 x Z/9",
    "Z/6 x Z/6",
    "Z/8 x Z/8",
    "Z/2 x Z/2 x Z/3",
];

fn ring(name: &str) -> FiniteRing {
    make_ring(name).unwrap_or_else(|e| panic!("ring {name}: {e}"))
}

fn system(name: &str) -> RootSystem {
    build_root_system(name).unwrap_or_else(|e| panic!("system {name}: {e}"))
}

fn chev_data(name: &str) -> ChevalleyData {
    build_chevalley(&system(name)).unwrap_or_else(|e| panic!("basis for {name}: {e}"))
}

/// Smallest proper ideal generated by a nonzero element, lowest generator
/// first; the full ring when none exists (fields).
fn default_ideal(r: &FiniteRing) -> Subalgebra {
    let mut best: Option<Subalgebra> = None;
    for g in r.elements() {
        if g == r.zero() {
            continue;
        }
        let i = Subalgebra::ideal(r, &[g]);
        if i.elems.len() < r.size() as usize
            && best.as_ref().is_none_or(|b| i.elems.len() < b.elems.len())
        {
            best = Some(i);
        }
    }
    best.unwrap_or_else(|| Subalgebra::full(r))
}

fn parallel(u: &[i64], v: &[i64]) -> bool {
    let d = u.len();
    (0..d).all(|i| (i + 1..d).all(|j| u[i] * v[j] == u[j] * v[i]))
}

fn criterion_1() -> String {
    let data = chev_data("B2");
    let f2 = ring("Z/2");
    let t0 = Instant::now();
    let rep = verify_perfectness(&data, &f2, 2_000);
    let dt = t0.elapsed();
    assert!(rep.complete, "closure hit the cap");
    assert_eq!(rep.order, 720, "full group order");
    assert_eq!(rep.derived_order, 360, "derived subgroup order");
    assert_eq!(rep.index, 2, "derived subgroup index");
    assert!(!rep.perfect);
    assert!(dt < WITNESS_BUDGET, "took {dt:.1?}, budget {WITNESS_BUDGET:?}");
    format!("B2 over Z/2 has derived subgroup of index exactly 2 (order 720, {dt:.1?})")
}

fn criterion_2() -> String {
    let cases: [(&str, &str, usize); 6] = [
        ("A2", "Z/2", 168),
        ("A2", "Z/3", 5616),
        ("A2", "Z/4", 43008),
        ("A2", "Z/2[x]/(x^2+x+1)", 20160),
        ("B2", "Z/3", 25920),
        ("A3", "Z/2", 20160),
    ];
    let t0 = Instant::now();
    for (sys, name, order) in cases {
        let data = chev_data(sys);
        let r = ring(name);
        let rep = verify_perfectness(&data, &r, PERFECT_CAP);
        assert!(rep.complete, "{sys}/{name}: closure hit the cap");
        assert_eq!(rep.order, order, "{sys}/{name}: group order");
        assert!(rep.perfect, "{sys}/{name}: derived subgroup is proper");
        assert_eq!(rep.index, 1, "{sys}/{name}: index");
    }
    let dt = t0.elapsed();
    assert!(dt < PERFECT_BUDGET, "took {dt:.1?}, budget {PERFECT_BUDGET:?}");
    format!("6 instances perfect with derived closure equal to the full group ({dt:.1?})")
}

fn criterion_3() -> String {
    let cases: [(&str, &str, Elem, usize); 3] = [
        ("A2", "Z/4", 2, 256),
        ("A2", "Z/6", 3, 168),
        ("B2", "Z/4", 2, 512),
    ];
    let t0 = Instant::now();
    for (sys, name, gen, kernel) in cases {
        let data = chev_data(sys);
        let r = ring(name);
        let ideal = Subalgebra::ideal(&r, &[gen]);
        let rep = verify_relative_characterizations(&data, &ideal, RELATIVE_CAP)
            .unwrap_or_else(|e| panic!("{sys}/{name}: {e}"));
        assert!(rep.complete, "{sys}/{name}: enumeration hit the cap");
        assert_eq!(rep.kernel_order, kernel, "{sys}/{name}: kernel order");
        assert!(rep.certificate.pass(), "{sys}/{name}: kernel certificate");
        assert!(rep.conjugate_generation, "{sys}/{name}: conjugate generation");
        assert!(rep.cone_images_contained, "{sys}/{name}: cone images");
        assert!(rep.base_conjugation_stable, "{sys}/{name}: base conjugation");
    }
    let dt = t0.elapsed();
    assert!(dt < RELATIVE_BUDGET, "took {dt:.1?}, budget {RELATIVE_BUDGET:?}");
    format!("relative kernels match both characterizations on 3 instances ({dt:.1?})")
}

fn criterion_4() -> String {
    let mut checks = 0;
    for sys in ["A2", "B2"] {
        let data = chev_data(sys);
        let table = data
            .derive_commutator_table()
            .unwrap_or_else(|e| panic!("{sys} table: {e}"));
        for name in ["Z/2", "Z/3", "Z/4"] {
            let r = ring(name);
            let ideal = default_ideal(&r);
            let abs = verify_axis_elimination(&data, &r, GENERATION_CAP)
                .unwrap_or_else(|e| panic!("{sys}/{name}: {e}"));
            assert!(
                abs.complete && abs.pass,
                "{sys}/{name}: axis elimination: {:?}",
                abs.witnesses
            );
            let rel = verify_series_regeneration(&data, &ideal, GENERATION_CAP)
                .unwrap_or_else(|e| panic!("{sys}/{name}: {e}"));
            assert!(
                rel.complete && rel.pass,
                "{sys}/{name}: series regeneration: {:?}",
                rel.witnesses
            );
            let spans = verify_coefficient_spans(&data, &table, &ideal)
                .unwrap_or_else(|e| panic!("{sys}/{name}: {e}"));
            assert!(
                spans.complete && spans.pass,
                "{sys}/{name}: coefficient spans: {:?}",
                spans.witnesses
            );
            checks += 3;
        }
    }
    format!("{checks} generation checks pass exhaustively on A2 and B2 over Z/2, Z/3, Z/4")
}

fn criterion_5() -> String {
    for sys in ["A2", "B2", "B3", "C3"] {
        chev_data(sys)
            .derive_commutator_table()
            .unwrap_or_else(|e| panic!("{sys} table: {e}"));
    }
    let g2 = system("G2");
    let data = build_chevalley(&g2).expect("G2 basis");
    let table = data.derive_commutator_table().expect("G2 table");
    let min_norm = (0..g2.len()).map(|i| g2.norm(i)).min().unwrap();
    let max_norm = (0..g2.len()).map(|i| g2.norm(i)).max().unwrap();
    let mut hits = 0;
    for ((a, b), terms) in &table.terms {
        if g2.norm(*a) != min_norm || g2.norm(*b) != min_norm {
            continue;
        }
        for t in terms {
            if t.i == 1 && t.j == 1 && g2.norm(t.root) == max_norm {
                assert!(
                    t.coeff != 0 && t.coeff % 3 == 0,
                    "pair ({a}, {b}): long (1,1) coefficient {}",
                    t.coeff
                );
                hits += 1;
            }
        }
    }
    assert!(hits > 0, "no short-short pair produced a long (1,1) term");
    format!("5 symbolic tables reassemble exactly; {hits} G2 short-short (1,1) coefficients divisible by 3")
}

fn criterion_6() -> String {
    let mut towers = 0u64;
    let mut covers = 0u64;
    for name in RING_CATALOG_64 {
        let r = ring(name);
        assert!(r.size() <= 64, "{name} exceeds the size bound");
        let full = Subalgebra::full(&r);
        let depth = r.size() + 2;
        for s in r.elements() {
            let t = colocalization_tower(&full, s, depth);
            assert!(!t.insufficient_depth, "{name}, s={}: tower too shallow", r.render(s));
            assert!(
                t.noetherian_shadow().is_ok(),
                "{name}, s={}: kernel does not vanish",
                r.render(s)
            );
            assert!(
                t.stable_part_bijective(),
                "{name}, s={}: stable connecting maps not bijective",
                r.render(s)
            );
            for twist in [None, Some(s)] {
                let rep = check_power_idempotent(&r, &t.stable, twist, 4);
                assert!(
                    rep.pass,
                    "{name}, s={}: power span fails: {:?}",
                    r.render(s),
                    rep.failure
                );
            }
            towers += 1;
        }
        let idems: Vec<Elem> = r.elements().filter(|&x| r.mul(x, x) == x).collect();
        let mut part_sets: Vec<Vec<Elem>> = Vec::new();
        if idems.len() <= 8 {
            for mask in 1u32..(1 << idems.len()) {
                part_sets.push(
                    idems
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| mask >> k & 1 == 1)
                        .map(|(_, &e)| e)
                        .collect(),
                );
            }
        } else {
            for (k, &a) in idems.iter().enumerate() {
                part_sets.push(vec![a]);
                for &b in &idems[k + 1..] {
                    part_sets.push(vec![a, b]);
                }
            }
            part_sets.push(idems.clone());
        }
        for parts in part_sets {
            let join = parts
                .iter()
                .fold(r.zero(), |acc, &e| idempotent_join(&r, acc, e));
            let rep = check_cover_sum(&full, join, &parts)
                .unwrap_or_else(|e| panic!("{name}: cover {parts:?}: {e}"));
            assert!(
                rep.pass,
                "{name}: stable part not the sum of the images for {parts:?}: {:?}",
                rep.witness
            );
            covers += 1;
        }
    }
    let z6 = ring("Z/6");
    let full6 = Subalgebra::full(&z6);
    let rep = check_cover_sum(&full6, 1, &[2, 3]).expect("(2, 3) covers Z/6");
    assert!(rep.pass && rep.e == 1 && rep.part_idempotents == vec![4, 3]);
    assert!(check_cover_sum(&full6, 1, &[2]).is_err(), "(2) alone is not a cover");
    format!("{towers} towers stabilize with bijective stable parts; {covers} idempotent covers sum exactly")
}

fn criterion_7() -> String {
    let candidates: &[&str] = &[
        "A1", "A2", "A3", "A4", "B1", "B2", "B3", "B4", "C1", "C2", "C3", "C4", "D2", "D3",
        "D4", "BC1", "BC2", "BC3", "BC4", "G2", "F4",
    ];
    let mut checked = 0;
    for name in candidates {
        let sys = system(name);
        if !sys.is_irreducible() {
            continue;
        }
        let rep = verify_hyperplane_lemma(&sys).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(rep.pass, "{name}: {:?}", rep.witness);
        checked += 1;
    }
    let small: &[&str] = &[
        "A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2", "BC1", "BC2", "BC3",
    ];
    let mut series = 0;
    for name in small {
        let sys = system(name);
        assert!(sys.len() <= 24, "{name} is not desk scale");
        for a in 0..sys.len() {
            let parts = thick_series(&sys, a).unwrap_or_else(|e| panic!("{name}, axis {a}: {e}"));
            let mut seen: BTreeSet<usize> = BTreeSet::new();
            for p in &parts {
                for &m in &p.members {
                    assert!(seen.insert(m), "{name}: root {m} lies in two series through {a}");
                }
                let cls = classify_subset(&sys, &p.members);
                assert!(
                    cls.saturated_special_closed,
                    "{name}: series through {a} not saturated special closed: {:?}",
                    cls.reason
                );
            }
            for m in 0..sys.len() {
                let on_axis = parallel(sys.root(m), sys.root(a));
                assert_eq!(
                    !on_axis,
                    seen.contains(&m),
                    "{name}: series through {a} miss or overcount root {m}"
                );
            }
            series += parts.len();
        }
    }
    format!("hyperplane covering excluded on {checked} irreducible systems; {series} thick series partition and classify")
}

fn criterion_8() -> String {
    for sys in ["A2", "B2"] {
        let data = chev_data(sys);
        for (n, m) in [(4u32, 2u32), (6, 2), (6, 3)] {
            let hom = RingHom::modular_reduction(n, m)
                .unwrap_or_else(|e| panic!("Z/{n} -> Z/{m}: {e}"));
            let rep = verify_reduction_image(&data, &hom, REDUCTION_CAP)
                .unwrap_or_else(|e| panic!("{sys}: Z/{n} -> Z/{m}: {e}"));
            assert!(
                rep.pass && rep.complete,
                "{sys}: Z/{n} -> Z/{m}: {:?}",
                rep.witnesses
            );
        }
    }
    let a2 = chev_data("A2");
    let prod = ring("Z/2 x Z/3");
    let rep = verify_product_splitting(&a2, &prod, PERFECT_CAP).expect("product splitting");
    assert!(rep.pass && rep.complete, "A2 over Z/2 x Z/3: {:?}", rep.witnesses);
    format!("6 reduction images onto quotient groups and the Z/2 x Z/3 splitting hold exactly")
}

fn criterion_9() -> String {
    let mut count = 0;
    for name in ["Z/2", "Z/3", "Z/4"] {
        let r = ring(name);
        for (label, module) in cocycle_catalog(&r).unwrap_or_else(|e| panic!("{name}: {e}")) {
            module
                .verify_axioms()
                .unwrap_or_else(|e| panic!("{label} over {name}: {e}"));
            let rep = module.verify_derived_identities();
            assert!(rep.pass, "{label} over {name}: {:?}", rep.witnesses);
            count += 1;
        }
    }
    assert!(count >= 6, "catalog too small: {count}");
    format!("{count} cocycle modules satisfy the axioms and all eight derived identities")
}

fn criterion_10() -> String {
    let first = render_json(&run_suite("quick", 1, false).expect("first run"));
    let second = render_json(&run_suite("quick", 1, false).expect("second run"));
    assert!(first == second, "reports differ between runs");
    format!("quick suite report is byte-identical across two runs ({} bytes)", first.len())
}

fn main() {
    let criteria: Vec<(usize, fn() -> String)> = vec![
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failures = 0;
    for (number, run) in criteria {
        match catch_unwind(AssertUnwindSafe(run)) {
            Ok(detail) => println!("criterion {number}: pass - {detail}"),
            Err(payload) => {
                failures += 1;
                let message = payload
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic without message".into());
                println!("criterion {number}: FAIL - {message}");
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} of 10 criteria failed");
        std::process::exit(1);
    }
}
