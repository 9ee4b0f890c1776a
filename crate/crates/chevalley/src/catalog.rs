//! Named verification jobs: one runner per lemma id, defaults for the
//! instance parameters a job leaves out, and the quick/full suite matrices
//! with their deterministic enumeration caps.

use std::time::Instant;

use rayon::prelude::*;

use crate::chev::{build_chevalley, ChevalleyData, CommutatorTable};
use crate::engine::{
    certify_kernel, relative_elementary_closure, verify_axis_elimination,
    verify_coefficient_spans, verify_decomposition, verify_normalization, verify_perfectness,
    verify_product_splitting, verify_reduction_image, verify_relative_characterizations,
    verify_series_regeneration, RelativeInstance, DEFAULT_CAP,
};
use crate::error::{Error, Result};
use crate::nil::{NilModule, QuadraticMap};
use crate::report::{Instance, LemmaReport, Status, SuiteReport, Timings};
use crate::ring::{
    all_ring_homs, check_cover_sum, check_power_idempotent, colocalization_tower,
    crossed_module_check, make_ring, Elem, FiniteRing, RingHom, Subalgebra,
};
use crate::roots::{build_root_system, verify_hyperplane_lemma, RootSystem};

/// Every lemma id the `verify` command accepts, in catalog order.
pub const LEMMA_IDS: [&str; 18] = [
    "root-sys-dec",
    "noeth-coloc",
    "power-idem",
    "cozariski",
    "nilmod-axioms",
    "quadratic",
    "commutator-table",
    "homogeneity",
    "rel-elem",
    "rel-expl",
    "z-sigma",
    "elim-rel",
    "elim-abs",
    "root-gen",
    "xmod-dec",
    "perfect",
    "normalization",
    "functoriality",
];

const WITNESS_CAP: usize = 8;

/// One verification job as requested on the command line or scheduled by a
/// suite profile.
#[derive(Clone, Debug)]
pub struct Job {
    pub lemma: String,
    pub system: Option<String>,
    pub ring: Option<String>,
    pub ideal: Option<String>,
    pub cap: usize,
    pub wall: bool,
}

impl Job {
    pub fn new(lemma: &str) -> Job {
        Job {
            lemma: lemma.to_string(),
            system: None,
            ring: None,
            ideal: None,
            cap: DEFAULT_CAP,
            wall: false,
        }
    }
}

fn status_of(pass: bool, complete: bool) -> Status {
    if !complete {
        Status::Capped
    } else if pass {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn push(w: &mut Vec<String>, msg: String) {
    if w.len() < WITNESS_CAP {
        w.push(msg);
    }
}

/// The smallest proper nonzero ideal when one exists (lowest generator wins
/// ties), the full ring otherwise. This is the ideal a relative job runs on
/// when `--ideal` is absent.
pub fn default_ideal(ring: &FiniteRing) -> Subalgebra {
    let mut best: Option<Subalgebra> = None;
    for a in ring.elements() {
        if a == ring.zero() {
            continue;
        }
        let sub = Subalgebra::ideal(ring, &[a]);
        if sub.elems.len() == ring.size() as usize {
            continue;
        }
        if best.as_ref().map_or(true, |b| sub.elems.len() < b.elems.len()) {
            best = Some(sub);
        }
    }
    best.unwrap_or_else(|| Subalgebra::full(ring))
}

/// Parses an `--ideal` argument: `full`, or a comma-separated list of
/// element codes (the labels `0..size` used in rendered output) generating
/// the ideal.
pub fn parse_ideal(ring: &FiniteRing, spec: &str) -> Result<Subalgebra> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("full") {
        return Ok(Subalgebra::full(ring));
    }
    let mut gens = Vec::new();
    for tok in spec.split(',') {
        let code: Elem = tok
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad ideal generator '{tok}'")))?;
        if code >= ring.size() {
            return Err(Error::Parse(format!(
                "ideal generator {code} out of range for a ring of size {}",
                ring.size()
            )));
        }
        gens.push(code);
    }
    Ok(Subalgebra::ideal(ring, &gens))
}

fn ideal_desc(ideal: &Subalgebra) -> String {
    if ideal.elems.len() == ideal.ring.size() as usize {
        return "full".into();
    }
    let body: Vec<String> = ideal.elems.iter().map(|&a| ideal.ring.render(a)).collect();
    format!("{{{}}}", body.join(", "))
}

/// Default decomposition checked by `xmod-dec`: split along a nontrivial
/// idempotent when one exists; otherwise repeat the default ideal, or fall
/// back to the single full part over rings without proper ideals.
pub fn default_decomposition(ring: &FiniteRing) -> (Subalgebra, Vec<Subalgebra>) {
    let (zero, one) = (ring.zero(), ring.one());
    if let Some(e) = ring
        .elements()
        .find(|&e| e != zero && e != one && ring.mul(e, e) == e)
    {
        let co = ring.sub(one, e);
        let parts = vec![Subalgebra::ideal(ring, &[e]), Subalgebra::ideal(ring, &[co])];
        return (Subalgebra::full(ring), parts);
    }
    let whole = default_ideal(ring);
    if whole.elems.len() < ring.size() as usize {
        let parts = vec![whole.clone(), whole.clone()];
        (whole, parts)
    } else {
        (whole.clone(), vec![whole])
    }
}

struct Body {
    status: Status,
    witnesses: Vec<String>,
    elements: u64,
    ideal: Option<String>,
}

impl Body {
    fn new(status: Status, witnesses: Vec<String>, elements: u64) -> Body {
        Body { status, witnesses, elements, ideal: None }
    }

    fn with_ideal(mut self, desc: String) -> Body {
        self.ideal = Some(desc);
        self
    }
}

fn need_system(job: &Job) -> Result<RootSystem> {
    let desc = job
        .system
        .as_deref()
        .ok_or_else(|| Error::Parse(format!("lemma {} requires --system", job.lemma)))?;
    build_root_system(desc)
}

fn need_ring(job: &Job) -> Result<FiniteRing> {
    let desc = job
        .ring
        .as_deref()
        .ok_or_else(|| Error::Parse(format!("lemma {} requires --ring", job.lemma)))?;
    make_ring(desc)
}

fn need_data(job: &Job) -> Result<ChevalleyData> {
    build_chevalley(&need_system(job)?)
}

fn need_table(data: &ChevalleyData) -> Result<CommutatorTable> {
    data.derive_commutator_table()
}

fn resolve_ideal(job: &Job, ring: &FiniteRing) -> Result<Subalgebra> {
    match job.ideal.as_deref() {
        Some(spec) => parse_ideal(ring, spec),
        None => Ok(default_ideal(ring)),
    }
}

/// Runs one lemma job and produces its report. `Err` is reserved for invalid
/// jobs (bad descriptors, missing parameters, out-of-domain instances);
/// mathematical failures and cap hits land in the report status.
pub fn run_job(job: &Job) -> Result<LemmaReport> {
    let started = Instant::now();
    let body = run_body(job)?;
    Ok(LemmaReport {
        lemma_id: job.lemma.clone(),
        instance: Instance {
            system: job.system.clone(),
            ring: job.ring.clone(),
            ideal: body.ideal,
        },
        status: body.status,
        witnesses: body.witnesses,
        timings: Timings {
            elements: body.elements,
            wall_ms: job.wall.then(|| started.elapsed().as_millis() as u64),
        },
    })
}

fn run_body(job: &Job) -> Result<Body> {
    match job.lemma.as_str() {
        "root-sys-dec" => root_sys_dec(job),
        "noeth-coloc" => noeth_coloc(job),
        "power-idem" => power_idem(job),
        "cozariski" => cozariski(job),
        "nilmod-axioms" => nilmod_axioms(job),
        "quadratic" => quadratic(job),
        "commutator-table" => commutator_table(job),
        "homogeneity" => homogeneity(job),
        "rel-elem" => rel_elem(job),
        "rel-expl" => rel_expl(job),
        "z-sigma" => z_sigma(job),
        "elim-rel" => elim_rel(job),
        "elim-abs" => elim_abs(job),
        "root-gen" => root_gen(job),
        "xmod-dec" => xmod_dec(job),
        "perfect" => perfect(job),
        "normalization" => normalization(job),
        "functoriality" => functoriality(job),
        other => Err(Error::Parse(format!("unknown lemma id '{other}'"))),
    }
}

fn root_sys_dec(job: &Job) -> Result<Body> {
    let system = need_system(job)?;
    let rep = verify_hyperplane_lemma(&system)?;
    let mut w = vec![format!("root-spanned hyperplanes: {}", rep.hyperplane_count)];
    if let Some(x) = rep.witness {
        push(&mut w, x);
    }
    Ok(Body::new(status_of(rep.pass, true), w, system.len() as u64))
}

fn noeth_coloc(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let full = Subalgebra::full(&ring);
    let depth = ring.size() + 2;
    let mut pass = true;
    let mut w = Vec::new();
    for s in ring.elements() {
        let t = colocalization_tower(&full, s, depth);
        if t.insufficient_depth {
            pass = false;
            push(&mut w, format!("tower at s={} needs more depth", ring.render(s)));
        }
        if let Err(x) = t.noetherian_shadow() {
            pass = false;
            push(
                &mut w,
                format!(
                    "chain at s={} keeps moving element {}",
                    ring.render(s),
                    ring.render(x)
                ),
            );
        }
        if !t.stable_part_bijective() {
            pass = false;
            push(
                &mut w,
                format!("connecting map not bijective on the stable part at s={}", ring.render(s)),
            );
        }
    }
    w.insert(0, format!("multiplier parameters checked: {}", ring.size()));
    Ok(Body::new(status_of(pass, true), w, u64::from(ring.size()) * u64::from(ring.size())))
}

fn power_idem(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let full = Subalgebra::full(&ring);
    let depth = ring.size() + 2;
    let mut pass = true;
    let mut w = Vec::new();
    for s in ring.elements() {
        let t = colocalization_tower(&full, s, depth);
        for twist in [None, Some(s)] {
            let rep = check_power_idempotent(&ring, &t.stable, twist, 4);
            if !rep.pass {
                pass = false;
                let tag = twist.map_or("plain".to_string(), |x| {
                    format!("twisted by {}", ring.render(x))
                });
                let detail = rep
                    .failure
                    .map(|(k, msg)| format!("power {k}: {msg}"))
                    .unwrap_or_default();
                push(
                    &mut w,
                    format!("span fails on the stable part of s={} ({tag}); {detail}", ring.render(s)),
                );
            }
        }
    }
    w.insert(0, format!("stable parts checked: {}", ring.size()));
    Ok(Body::new(status_of(pass, true), w, u64::from(ring.size()) * u64::from(ring.size())))
}

fn cozariski(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let full = Subalgebra::full(&ring);
    let mut pass = true;
    let mut w = Vec::new();
    let mut covers = 0u64;
    let elems: Vec<Elem> = ring.elements().collect();
    for &s in &elems {
        for (i, &p) in elems.iter().enumerate() {
            let mut parts: Vec<Vec<Elem>> = vec![vec![p]];
            parts.extend(elems[i..].iter().map(|&q| vec![p, q]));
            for part in parts {
                // A pair only counts as a cover when the part idempotents
                // divide the idempotent of s and join to it.
                let Ok(rep) = check_cover_sum(&full, s, &part) else { continue };
                covers += 1;
                if !rep.pass {
                    pass = false;
                    let names: Vec<String> =
                        part.iter().map(|&x| ring.render(x)).collect();
                    push(
                        &mut w,
                        format!(
                            "cover of s={} by [{}] misses: {}",
                            ring.render(s),
                            names.join(", "),
                            rep.witness.unwrap_or_default()
                        ),
                    );
                }
            }
        }
    }
    w.insert(0, format!("idempotent covers verified: {covers}"));
    Ok(Body::new(status_of(pass, true), w, covers))
}

/// Bilinear cocycle instances exercised over every ring: the labels name the
/// shape (central rank - module rank).
pub fn cocycle_catalog(ring: &FiniteRing) -> Result<Vec<(&'static str, NilModule)>> {
    let mut out = Vec::new();
    out.push(("abelian-1-1", NilModule::zero_cocycle(ring, 1, 1)?));
    out.push((
        "sym-1-1",
        NilModule::from_structure_constants(ring, 1, 1, &[vec![vec![2]]])?,
    ));
    out.push((
        "skew-1-2",
        NilModule::from_structure_constants(
            ring,
            1,
            2,
            &[vec![vec![0], vec![1]], vec![vec![-1], vec![0]]],
        )?,
    ));
    out.push((
        "dot-1-2",
        NilModule::from_structure_constants(
            ring,
            1,
            2,
            &[vec![vec![0], vec![1]], vec![vec![0], vec![0]]],
        )?,
    ));
    let size = u64::from(ring.size());
    if size.pow(4) <= 4096 {
        out.push((
            "diag-2-2",
            NilModule::from_structure_constants(
                ring,
                2,
                2,
                &[
                    vec![vec![1, 0], vec![0, 0]],
                    vec![vec![0, 0], vec![0, 1]],
                ],
            )?,
        ));
    }
    Ok(out)
}

fn nilmod_axioms(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let mut pass = true;
    let mut w = Vec::new();
    let mut total = 0u64;
    let catalog = cocycle_catalog(&ring)?;
    let count = catalog.len();
    for (name, module) in catalog {
        total += module.size() as u64;
        if let Err(msg) = module.verify_axioms() {
            pass = false;
            push(&mut w, format!("{name}: {msg}"));
        }
        let rep = module.verify_derived_identities();
        if !rep.pass {
            pass = false;
            for x in rep.witnesses {
                push(&mut w, format!("{name}: {x}"));
            }
        }
    }
    w.insert(0, format!("cocycle modules checked: {count}"));
    Ok(Body::new(status_of(pass, true), w, total))
}

fn quadratic(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let skew = NilModule::from_structure_constants(
        &ring,
        1,
        2,
        &[vec![vec![0], vec![1]], vec![vec![-1], vec![0]]],
    )?;
    let mut maps: Vec<(String, QuadraticMap)> = vec![
        ("identity".into(), QuadraticMap::identity(&skew)),
        ("zero".into(), QuadraticMap::zero(&skew, &skew)),
    ];
    // The square shift u -> u + v^2 is only scalar-compatible when every
    // scalar is idempotent.
    if ring.elements().all(|k| ring.mul(k, k) == k) {
        let r = ring.clone();
        maps.push((
            "square-shift".into(),
            QuadraticMap::from_fn(&skew, &skew, move |e| crate::nil::NilElem {
                u: vec![r.add(e.u[0], r.mul(e.v[0], e.v[0]))],
                v: e.v.clone(),
            }),
        ));
    }
    let mut pass = true;
    let mut w = Vec::new();
    let count = maps.len();
    for (name, q) in &maps {
        let rep = q.check();
        if !rep.pass {
            pass = false;
            for x in &rep.witnesses {
                push(&mut w, format!("{name}: {x}"));
            }
        }
    }
    w.insert(0, format!("quadratic maps checked: {count}"));
    Ok(Body::new(status_of(pass, true), w, count as u64 * skew.size() as u64))
}

fn commutator_table(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let data = need_data(job)?;
    let table = need_table(&data)?;
    let rep = data.verify_commutator_table(&table, &ring);
    let terms: usize = table.terms.values().map(Vec::len).sum();
    let pairs = table.terms.len();
    let mut w = vec![format!("pairs: {pairs}, table terms: {terms}")];
    w.extend(rep.witnesses);
    let n = u64::from(ring.size());
    Ok(Body::new(status_of(rep.pass, true), w, n * n * pairs as u64))
}

fn homogeneity(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let data = need_data(job)?;
    let table = need_table(&data)?;
    let rep = data.check_homogeneity(&table, &ring);
    let pairs = table.terms.len();
    let mut w = vec![format!("pairs rescaled: {pairs}")];
    w.extend(rep.witnesses);
    let n = u64::from(ring.size());
    Ok(Body::new(status_of(rep.pass, true), w, n * n * pairs as u64))
}

fn rel_elem(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let data = need_data(job)?;
    let ideal = resolve_ideal(job, &ring)?;
    let desc = ideal_desc(&ideal);
    let inst = RelativeInstance::new(&ideal)?;
    let kernel = relative_elementary_closure(&data, &inst, job.cap);
    if !kernel.complete {
        return Ok(Body::new(
            Status::Capped,
            vec![format!("kernel enumeration hit the cap at {}", kernel.order())],
            kernel.order() as u64,
        )
        .with_ideal(desc));
    }
    let cert = certify_kernel(&data, &inst, &kernel);
    let mut w = vec![format!("kernel order: {}", kernel.order())];
    for x in &cert.witnesses {
        push(&mut w, x.clone());
    }
    Ok(Body::new(status_of(cert.pass(), true), w, kernel.order() as u64).with_ideal(desc))
}

fn rel_expl(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let data = need_data(job)?;
    let ideal = resolve_ideal(job, &ring)?;
    let desc = ideal_desc(&ideal);
    let rep = verify_relative_characterizations(&data, &ideal, job.cap)?;
    let pass = rep.certificate.pass() && rep.conjugate_generation && rep.base_conjugation_stable;
    let mut w = vec![format!("kernel order: {}", rep.kernel_order)];
    for x in &rep.witnesses {
        push(&mut w, x.clone());
    }
    Ok(Body::new(status_of(pass, rep.complete), w, rep.kernel_order as u64).with_ideal(desc))
}

fn z_sigma(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let data = need_data(job)?;
    let ideal = resolve_ideal(job, &ring)?;
    let desc = ideal_desc(&ideal);
    let rep = verify_relative_characterizations(&data, &ideal, job.cap)?;
    let pass = rep.certificate.pass() && rep.cone_images_contained;
    let mut w = vec![format!(
        "kernel order: {}, special closed subsets: {}",
        rep.kernel_order, rep.cone_subsets
    )];
    for x in &rep.witnesses {
        push(&mut w, x.clone());
    }
    Ok(Body::new(status_of(pass, rep.complete), w, rep.kernel_order as u64).with_ideal(desc))
}

fn elim_rel(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let data = need_data(job)?;
    let ideal = resolve_ideal(job, &ring)?;
    let desc = ideal_desc(&ideal);
    let rep = verify_series_regeneration(&data, &ideal, job.cap)?;
    let mut w = vec![format!("axes regenerated: {}", rep.axes)];
    w.extend(rep.witnesses);
    Ok(Body::new(status_of(rep.pass, rep.complete), w, 0).with_ideal(desc))
}

fn elim_abs(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let data = need_data(job)?;
    let rep = verify_axis_elimination(&data, &ring, job.cap)?;
    let mut w = vec![format!("axes eliminated: {}", rep.axes)];
    w.extend(rep.witnesses);
    Ok(Body::new(status_of(rep.pass, rep.complete), w, 0))
}

fn root_gen(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let data = need_data(job)?;
    let table = need_table(&data)?;
    let ideal = resolve_ideal(job, &ring)?;
    let desc = ideal_desc(&ideal);
    let rep = verify_coefficient_spans(&data, &table, &ideal)?;
    let mut w = vec![format!("axes spanned: {}", rep.axes)];
    w.extend(rep.witnesses);
    Ok(Body::new(status_of(rep.pass, rep.complete), w, 0).with_ideal(desc))
}

fn xmod_dec(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let data = need_data(job)?;
    let (whole, parts) = match job.ideal.as_deref() {
        Some(spec) => {
            let whole = parse_ideal(&ring, spec)?;
            let parts = vec![whole.clone()];
            (whole, parts)
        }
        None => default_decomposition(&ring),
    };
    let desc = ideal_desc(&whole);
    let xmod = crossed_module_check(&whole, &whole.elems);
    let rep = verify_decomposition(&data, &whole, &parts, job.cap)?;
    let pass = xmod.pass && rep.pass();
    let mut w = vec![format!(
        "parts: {:?}, product order: {}",
        rep.part_orders, rep.product_order
    )];
    if let Some(k) = rep.kernel_order {
        push(&mut w, format!("kernel order: {k}"));
    }
    for x in xmod.witnesses.iter().chain(rep.witnesses.iter()) {
        push(&mut w, x.clone());
    }
    let elements = rep.part_orders.iter().map(|&n| n as u64).sum();
    Ok(Body::new(status_of(pass, rep.complete), w, elements).with_ideal(desc))
}

fn perfect(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let data = need_data(job)?;
    let rep = verify_perfectness(&data, &ring, job.cap);
    let mut w = vec![format!(
        "group order: {}, derived order: {}",
        rep.order, rep.derived_order
    )];
    w.extend(rep.witnesses);
    Ok(Body::new(
        status_of(rep.perfect, rep.complete),
        w,
        rep.order as u64 + rep.derived_order as u64,
    ))
}

fn normalization(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let data = need_data(job)?;
    let rep = verify_normalization(&data, &ring, job.cap);
    let mut w = vec![format!("conjugators applied: {}", rep.conjugators)];
    w.extend(rep.witnesses);
    Ok(Body::new(status_of(rep.pass, rep.complete), w, rep.conjugators as u64))
}

fn functoriality(job: &Job) -> Result<Body> {
    let ring = need_ring(job)?;
    let data = need_data(job)?;
    if ring.product_factors().is_some() {
        let rep = verify_product_splitting(&data, &ring, job.cap)?;
        let mut w = rep.details.clone();
        w.extend(rep.witnesses);
        let elements = rep.target_order.unwrap_or(0);
        return Ok(Body::new(status_of(rep.pass, rep.complete), w, elements));
    }
    let n = ring.size();
    let mut homs: Vec<RingHom> = Vec::new();
    for m in 2..n {
        if n % m == 0 {
            let target = FiniteRing::modular(m)?;
            homs.extend(all_ring_homs(&ring, &target));
        }
    }
    if homs.is_empty() {
        // No modular quotient: transport along the identity, which still
        // checks the generator correspondence and image group exactly.
        let identity: Vec<Elem> = ring.elements().collect();
        homs.push(RingHom::new(&ring, &ring, identity)?);
    }
    let mut pass = true;
    let mut complete = true;
    let mut w = Vec::new();
    let mut elements = 0u64;
    for hom in &homs {
        let rep = verify_reduction_image(&data, hom, job.cap)?;
        let tag = format!("target of size {}", hom.target.size());
        if !rep.complete {
            complete = false;
            push(&mut w, format!("{tag}: enumeration hit the cap"));
        }
        if !rep.pass {
            pass = false;
        }
        for x in rep.details.iter().chain(rep.witnesses.iter()) {
            push(&mut w, format!("{tag}: {x}"));
        }
        elements += rep.target_order.unwrap_or(0);
    }
    w.insert(0, format!("ring maps checked: {}", homs.len()));
    Ok(Body::new(status_of(pass, complete), w, elements))
}

// ---------------------------------------------------------------------------
// Suite profiles
// ---------------------------------------------------------------------------

/// Registered expected failures: over any ring mapping onto the two-element
/// field, the doubly-laced defect of B2 and G2 leaves a proper normal image,
/// so perfectness must fail there and the suite records it as expected.
fn expected_failure(lemma: &str, system: Option<&str>, ring: Option<&str>) -> bool {
    if lemma != "perfect" {
        return false;
    }
    if !matches!(system, Some("B2") | Some("G2")) {
        return false;
    }
    let Some(ring) = ring.and_then(|r| make_ring(r).ok()) else {
        return false;
    };
    let f2 = FiniteRing::modular(2).expect("two-element field");
    !all_ring_homs(&ring, &f2).is_empty()
}

const HEAVY_LEMMAS: [&str; 9] = [
    "rel-elem",
    "rel-expl",
    "z-sigma",
    "elim-rel",
    "elim-abs",
    "xmod-dec",
    "perfect",
    "normalization",
    "functoriality",
];

/// Per-entry enumeration cap. The quick profile trades completeness on the
/// largest groups for its runtime budget; capped entries are reported as
/// such, never as failures.
fn suite_cap(profile: &str, lemma: &str, system: &str, ring: &str) -> usize {
    let heavy = HEAVY_LEMMAS.contains(&lemma);
    match profile {
        "quick" => {
            if heavy && system == "B2" && ring == "Z/4" {
                10_000
            } else {
                50_000
            }
        }
        _ => {
            if system == "D4" {
                5_000
            } else {
                100_000
            }
        }
    }
}

/// The (system, ring) grid of a profile, in report order.
fn profile_grid(profile: &str) -> Result<Vec<(String, String)>> {
    let mut grid = Vec::new();
    let cross = |systems: &[&str], rings: &[&str], grid: &mut Vec<(String, String)>| {
        for s in systems {
            for r in rings {
                grid.push((s.to_string(), r.to_string()));
            }
        }
    };
    match profile {
        "quick" => cross(&["A2", "B2"], &["Z/2", "Z/3", "Z/4"], &mut grid),
        "full" => {
            cross(&["A2", "B2"], &["Z/2", "Z/3", "Z/4"], &mut grid);
            cross(
                &["A2", "B2"],
                &["Z/2[x]/(x^2+x+1)", "Z/6", "Z/2 x Z/3"],
                &mut grid,
            );
            cross(&["G2", "A3", "D4"], &["Z/2"], &mut grid);
        }
        "empty" => {}
        other => return Err(Error::Parse(format!("unknown suite profile '{other}'"))),
    }
    Ok(grid)
}

/// All jobs of a profile, grouped by instance and ordered by the catalog.
pub fn suite_jobs(profile: &str) -> Result<Vec<Job>> {
    let grid = profile_grid(profile)?;
    let mut jobs = Vec::new();
    for (system, ring) in &grid {
        for lemma in LEMMA_IDS {
            jobs.push(Job {
                lemma: lemma.to_string(),
                system: Some(system.clone()),
                ring: Some(ring.clone()),
                ideal: None,
                cap: suite_cap(profile, lemma, system, ring),
                wall: false,
            });
        }
    }
    Ok(jobs)
}

fn run_suite_job(job: &Job, wall: bool) -> Result<LemmaReport> {
    let mut rep = run_job(&Job { wall, ..job.clone() })?;
    if expected_failure(&job.lemma, job.system.as_deref(), job.ring.as_deref()) {
        rep.status = match rep.status {
            Status::Fail => Status::ExpectedFail,
            Status::Pass => {
                rep.witnesses
                    .push("registered expected failure passed unexpectedly".into());
                Status::Fail
            }
            other => other,
        };
    }
    Ok(rep)
}

/// Runs a whole profile. Entry order is the fixed grid order regardless of
/// the worker count, so single-worker runs are byte-reproducible.
pub fn run_suite(profile: &str, workers: usize, wall: bool) -> Result<SuiteReport> {
    let jobs = suite_jobs(profile)?;
    let entries: Result<Vec<LemmaReport>> = if workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Internal(e.to_string()))?;
        pool.install(|| jobs.par_iter().map(|j| run_suite_job(j, wall)).collect())
    } else {
        jobs.iter().map(|j| run_suite_job(j, wall)).collect()
    };
    Ok(SuiteReport::new(profile, entries?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_ideals_follow_the_convention() {
        let z4 = make_ring("Z/4").unwrap();
        assert_eq!(default_ideal(&z4).elems, vec![0, 2]);
        let z6 = make_ring("Z/6").unwrap();
        assert_eq!(default_ideal(&z6).elems, vec![0, 3]);
        let z3 = make_ring("Z/3").unwrap();
        assert_eq!(default_ideal(&z3).elems.len(), 3);
    }

    #[test]
    fn default_decomposition_follows_idempotents() {
        let z6 = make_ring("Z/6").unwrap();
        let (whole, parts) = default_decomposition(&z6);
        assert_eq!(whole.elems.len(), 6);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].elems, vec![0, 3]);
        assert_eq!(parts[1].elems, vec![0, 2, 4]);

        let z4 = make_ring("Z/4").unwrap();
        let (whole, parts) = default_decomposition(&z4);
        assert_eq!(whole.elems, vec![0, 2]);
        assert_eq!(parts.len(), 2);

        let z3 = make_ring("Z/3").unwrap();
        let (whole, parts) = default_decomposition(&z3);
        assert_eq!(whole.elems.len(), 3);
        assert_eq!(parts.len(), 1);
    }

    #[test]
    fn ideal_parsing_and_rendering() {
        let z6 = make_ring("Z/6").unwrap();
        assert_eq!(parse_ideal(&z6, "3").unwrap().elems, vec![0, 3]);
        assert_eq!(parse_ideal(&z6, "full").unwrap().elems.len(), 6);
        assert_eq!(parse_ideal(&z6, "0").unwrap().elems, vec![0]);
        assert!(parse_ideal(&z6, "7").is_err());
        assert!(parse_ideal(&z6, "x").is_err());
        assert_eq!(ideal_desc(&parse_ideal(&z6, "3").unwrap()), "{0, 3}");
        assert_eq!(ideal_desc(&parse_ideal(&z6, "1").unwrap()), "full");
    }

    #[test]
    fn ring_level_lemmas_pass_on_small_rings() {
        for desc in ["Z/2", "Z/3", "Z/4", "Z/6", "Z/2[x]/(x^2+x+1)", "Z/2 x Z/3"] {
            for lemma in ["noeth-coloc", "power-idem", "cozariski", "nilmod-axioms", "quadratic"] {
                let mut job = Job::new(lemma);
                job.ring = Some(desc.to_string());
                let rep = run_job(&job).unwrap();
                assert_eq!(rep.status, Status::Pass, "{lemma} on {desc}: {:?}", rep.witnesses);
            }
        }
    }

    #[test]
    fn expected_failure_registry_is_sharp() {
        assert!(expected_failure("perfect", Some("B2"), Some("Z/2")));
        assert!(expected_failure("perfect", Some("B2"), Some("Z/4")));
        assert!(expected_failure("perfect", Some("G2"), Some("Z/6")));
        assert!(!expected_failure("perfect", Some("B2"), Some("Z/3")));
        assert!(!expected_failure("perfect", Some("B2"), Some("Z/2[x]/(x^2+x+1)")));
        assert!(!expected_failure("perfect", Some("A2"), Some("Z/2")));
        assert!(!expected_failure("normalization", Some("B2"), Some("Z/2")));
    }

    #[test]
    fn single_jobs_produce_expected_statuses() {
        let mut job = Job::new("perfect");
        job.system = Some("B2".into());
        job.ring = Some("Z/2".into());
        let rep = run_job(&job).unwrap();
        assert_eq!(rep.status, Status::Fail);
        assert!(rep.witnesses.iter().any(|w| w.contains("index 2")), "{:?}", rep.witnesses);

        let mut job = Job::new("root-sys-dec");
        job.system = Some("G2".into());
        let rep = run_job(&job).unwrap();
        assert_eq!(rep.status, Status::Pass);

        let mut job = Job::new("rel-elem");
        job.system = Some("A2".into());
        job.ring = Some("Z/4".into());
        let rep = run_job(&job).unwrap();
        assert_eq!(rep.status, Status::Pass);
        assert_eq!(rep.instance.ideal.as_deref(), Some("{0, 2}"));
        assert!(rep.witnesses.iter().any(|w| w.contains("kernel order: 256")));

        let mut job = Job::new("rel-elem");
        job.system = Some("B2".into());
        job.ring = Some("Z/3".into());
        job.cap = 1000;
        let rep = run_job(&job).unwrap();
        assert_eq!(rep.status, Status::Capped);
        assert_eq!(rep.exit_code(), 3);

        let job = Job::new("perfect");
        assert!(run_job(&job).is_err());
        let mut job = Job::new("nope");
        job.system = Some("A2".into());
        assert!(run_job(&job).is_err());
    }

    #[test]
    fn suite_grids_have_the_advertised_shape() {
        let quick = suite_jobs("quick").unwrap();
        assert_eq!(quick.len(), 6 * 18);
        let full = suite_jobs("full").unwrap();
        assert_eq!(full.len(), (6 + 6 + 3) * 18);
        assert!(suite_jobs("empty").unwrap().is_empty());
        assert!(suite_jobs("bogus").is_err());
        let empty = run_suite("empty", 1, false).unwrap();
        assert_eq!(empty.summary.total, 0);
        assert_eq!(empty.exit_code(), 0);
    }
}
