//! Randomized law suites with a fixed seed: every theorem the library
//! relies on, exercised on generated instances. The CLI `selftest`
//! subcommand and the acceptance tests run these same functions, so a
//! seed fully determines the report.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::fgab::FgAbGroup;
use crate::gmodule::GModule;
use crate::group::SubgroupOfG;
use crate::localization::{LocalizationProblem, PlaceKind, PlaceSpec, Side, TailSpec};
use crate::matrix::{det_bareiss, smith_normal_form, IntMatrix};
use crate::presets;
use crate::random::{
    random_group, random_module, random_problem, random_radical, random_ses, random_subgroup,
    random_unimodular, ModuleOptions, ProblemOptions, Rng,
};
use crate::sixterm::{h1_killed_by_group_order, rationalization_kernel, torsion_coinvariants};

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: u32,
    pub failed: u32,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &'static str) -> Self {
        SuiteOutcome {
            name,
            passed: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(detail());
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Multiplies every iteration count; 1 reproduces the documented
    /// suite sizes.
    pub scale: u32,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig { seed: 42, scale: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteOutcome>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.suites.iter().all(|s| s.all_passed())
    }
}

pub fn run_all(cfg: &SelftestConfig) -> SelftestReport {
    let s = cfg.scale.max(1);
    let mut suites = Vec::new();
    suites.push(snf_substrate(&mut Rng::new(cfg.seed ^ 0x01), 500 * s));
    suites.push(presentation_invariance(&mut Rng::new(cfg.seed ^ 0x02), 100 * s));
    suites.push(norm_one_fixture());
    suites.push(semisimple_law(&mut Rng::new(cfg.seed ^ 0x03), 200 * s));
    suites.push(criterion_obstruction(&mut Rng::new(cfg.seed ^ 0x04), 200 * s));
    suites.push(conjugacy_invariance(&mut Rng::new(cfg.seed ^ 0x05), 100 * s));
    suites.push(v0_sufficiency_law(&mut Rng::new(cfg.seed ^ 0x06), 100 * s));
    suites.push(monotonicity_law(&mut Rng::new(cfg.seed ^ 0x07), 100 * s));
    suites.push(lambda_comparison(&mut Rng::new(cfg.seed ^ 0x0d), 100 * s));
    suites.push(sixterm_exactness(&mut Rng::new(cfg.seed ^ 0x08), 100 * s));
    suites.push(delta_determinism(&mut Rng::new(cfg.seed ^ 0x09), 50 * s));
    suites.push(tor_h1_oracles(&mut Rng::new(cfg.seed ^ 0x0a), 100 * s));
    suites.push(radical_chain(&mut Rng::new(cfg.seed ^ 0x0b), 100 * s));
    suites.push(functoriality_ladder(&mut Rng::new(cfg.seed ^ 0x0c), 25 * s));
    SelftestReport {
        seed: cfg.seed,
        suites,
    }
}

/// `U*A*V = D`, unimodular witnesses, divisibility chain; determinant
/// checked by the independent fraction-free route.
pub fn snf_substrate(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("snf_substrate");
    for _ in 0..iterations {
        let rows = 1 + rng.below(6);
        let cols = 1 + rng.below(6);
        let a = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.range_i64(-20, 20)));
        let snf = smith_normal_form(&a);
        let mut ok = snf.u.mul(&a).and_then(|x| x.mul(&snf.v)).map_or(false, |uav| uav == snf.d);
        ok = ok && det_bareiss(&snf.u).abs().is_one();
        ok = ok && det_bareiss(&snf.v).abs().is_one();
        let diag = snf.diagonal();
        ok = ok && diag.windows(2).all(|w| w[1].mod_floor(&w[0]).is_zero());
        ok = ok && diag.iter().all(|d| d.is_positive());
        for i in 0..rows {
            for j in 0..cols {
                if i != j {
                    ok = ok && snf.d[(i, j)].is_zero();
                }
            }
        }
        out.record(ok, || format!("snf contract violated on {:?}", a));
    }
    out
}

/// Canonical forms do not depend on the presentation.
pub fn presentation_invariance(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("presentation_invariance");
    for _ in 0..iterations {
        let n = 1 + rng.below(4);
        let cols = rng.below(5);
        let rel = IntMatrix::from_fn(n, cols, |_, _| BigInt::from(rng.range_i64(-6, 6)));
        let g1 = FgAbGroup::new(n, rel.clone());
        let u = random_unimodular(rng, n, 4);
        let mut rel2 = u.mul(&rel).expect("shape");
        // also shuffle columns
        if cols >= 2 {
            let a = rng.below(cols);
            let b = rng.below(cols);
            let mut cols_v: Vec<Vec<BigInt>> = rel2.columns().collect();
            cols_v.swap(a, b);
            rel2 = IntMatrix::from_columns(n, &cols_v);
        }
        let g2 = FgAbGroup::new(n, rel2);
        out.record(g1.canonical_form() == g2.canonical_form(), || {
            format!("{:?} vs {:?}", g1, g2)
        });
    }
    out
}

/// The three hand-derived verdicts of the norm-one fixture.
pub fn norm_one_fixture() -> SuiteOutcome {
    let mut out = SuiteOutcome::new("norm_one_fixture");
    let run = |complement_kind: &str| -> core::result::Result<bool, crate::Error> {
        let m = presets::norm_one_torus(2)?;
        let g = m.group().clone();
        let place = match complement_kind {
            "split" => PlaceSpec::new("v0", PlaceKind::Finite, SubgroupOfG::trivial(g.clone()))?,
            "inert" => PlaceSpec::new("v0", PlaceKind::Finite, SubgroupOfG::full(g.clone()))?,
            _ => PlaceSpec::new("v0", PlaceKind::Real, SubgroupOfG::full(g.clone()))?,
        };
        let problem = LocalizationProblem::new(
            m,
            vec![place],
            vec![],
            Some(TailSpec::all_cyclic(&g, Side::S)),
        )?;
        let v = problem.verdict()?;
        if complement_kind == "split" {
            Ok(!v.surjective
                && v.obstruction.canonical.invariant_factors == vec![BigInt::from(2)])
        } else {
            Ok(v.surjective && v.obstruction.is_trivial())
        }
    };
    for kind in ["split", "inert", "real"] {
        let ok = run(kind).unwrap_or(false);
        out.record(ok, || format!("norm-one fixture failed for {}", kind));
    }
    out
}

/// Finite carrier plus a finite place outside S forces surjectivity.
pub fn semisimple_law(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("semisimple_law");
    for _ in 0..iterations {
        let opts = ProblemOptions {
            module: ModuleOptions {
                finite_only: true,
                max_order: 16,
                max_blocks: 2,
            },
            finite_place_in_complement: true,
        };
        let problem = random_problem(rng, opts);
        debug_assert!(problem.semisimple_case_applies());
        let ok = problem.verdict().map_or(false, |v| v.surjective);
        out.record(ok, || format!("not surjective: {:?}", problem));
    }
    out
}

/// Surjective iff the obstruction group is trivial.
pub fn criterion_obstruction(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("criterion_obstruction");
    for _ in 0..iterations {
        let problem = random_problem(rng, ProblemOptions::default());
        match problem.verdict() {
            Ok(v) => out.record(v.surjective == v.obstruction.is_trivial(), || {
                format!(
                    "surjective={} but obstruction={:?}",
                    v.surjective, v.obstruction.canonical
                )
            }),
            Err(e) => out.record(false, || format!("verdict failed: {:?}", e)),
        }
    }
    out
}

/// The local image does not change when the decomposition subgroup is
/// conjugated.
pub fn conjugacy_invariance(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("conjugacy_invariance");
    for _ in 0..iterations {
        let group = random_group(rng);
        let module = random_module(rng, &group, ModuleOptions::default());
        let h = random_subgroup(rng, &group);
        let place = PlaceSpec::new("v", PlaceKind::Finite, h.clone()).expect("finite place");
        let problem =
            LocalizationProblem::new(module.clone(), vec![place], vec![], None).expect("valid");
        let base = problem
            .local_image(problem.place("v").expect("declared"))
            .expect("image");
        let mut ok = true;
        for g in group.elements() {
            let conj = PlaceSpec::new("v", PlaceKind::Finite, h.conjugate(g)).expect("finite");
            let p2 = LocalizationProblem::new(module.clone(), vec![conj], vec![], None)
                .expect("valid");
            let im = p2
                .local_image(p2.place("v").expect("declared"))
                .expect("image");
            ok = ok && im.same_subgroup(&base).unwrap_or(false);
        }
        out.record(ok, || format!("conjugation changed the image: {:?}", h));
    }
    out
}

/// If one complement place already covers the torsion coinvariants, the
/// verdict must be surjective.
pub fn v0_sufficiency_law(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("v0_sufficiency");
    for _ in 0..iterations {
        let opts = ProblemOptions {
            finite_place_in_complement: true,
            ..ProblemOptions::default()
        };
        let problem = random_problem(rng, opts);
        let complement_ids: Vec<String> = problem
            .places()
            .iter()
            .filter(|p| problem.side_of(&p.id) == Some(Side::Complement))
            .map(|p| p.id.clone())
            .collect();
        let mut ok = true;
        for id in complement_ids {
            if problem.v0_suffices(&id).unwrap_or(false) {
                ok = ok && problem.verdict().map_or(false, |v| v.surjective);
            }
        }
        out.record(ok, || "v0 sufficed but verdict was negative".into());
    }
    out
}

/// Growing S (shrinking the complement) can only break surjectivity, so a
/// surjective verdict for the larger S implies one for the smaller.
pub fn monotonicity_law(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("monotonicity");
    for _ in 0..iterations {
        let group = random_group(rng);
        let module = random_module(rng, &group, ModuleOptions::default());
        let mut places = Vec::new();
        for i in 0..3 {
            places.push(crate::random::random_place(rng, &module, format!("v{}", i)));
        }
        // S grows place by place
        let ids: Vec<String> = places.iter().map(|p| p.id.clone()).collect();
        let mut last_surjective: Option<bool> = None;
        let mut ok = true;
        for k in 0..=ids.len() {
            let s: Vec<String> = ids[..k].to_vec();
            let problem =
                LocalizationProblem::new(module.clone(), places.clone(), s, None).expect("valid");
            let surj = problem.verdict().map_or(false, |v| v.surjective);
            if let Some(prev) = last_surjective {
                // S_k contains S_{k-1}: surjective(S_k) implies
                // surjective(S_{k-1})
                if surj && !prev {
                    ok = false;
                }
            }
            last_surjective = Some(surj);
        }
        out.record(ok, || "surjectivity was not monotone in S".into());
    }
    out
}

/// Pointwise image comparison: if every `S`-side contribution lies inside
/// one complement place's image then the verdict is surjective; and with
/// `S` equal to everything except `v0`, surjectivity is equivalent to
/// that pointwise condition.
pub fn lambda_comparison(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("lambda_comparison");
    for _ in 0..iterations {
        let group = random_group(rng);
        let module = random_module(rng, &group, ModuleOptions::default());
        let mut places = Vec::new();
        for i in 0..3 {
            places.push(crate::random::random_place(rng, &module, format!("v{}", i)));
        }
        let v0_id = places[0].id.clone();

        // sufficient direction: random S not containing v0
        let mut s: Vec<String> = Vec::new();
        for p in &places[1..] {
            if rng.chance(1, 2) {
                s.push(p.id.clone());
            }
        }
        let check = || -> crate::Result<bool> {
            let problem = LocalizationProblem::new(module.clone(), places.clone(), s.clone(), None)?;
            let v0_image = problem.local_image(problem.place(&v0_id).expect("declared"))?;
            let mut pointwise = true;
            for p in problem.places() {
                if problem.side_of(&p.id) == Some(Side::S) {
                    pointwise = pointwise && v0_image.contains(&problem.local_image(p)?)?;
                }
            }
            if pointwise && !problem.verdict()?.surjective {
                return Ok(false);
            }

            // equivalence with S = everything except v0
            let others: Vec<String> = places[1..].iter().map(|p| p.id.clone()).collect();
            let full_s = LocalizationProblem::new(
                module.clone(),
                places.clone(),
                others,
                Some(TailSpec::all_cyclic(&group, Side::S)),
            )?;
            let v0_image = full_s.local_image(full_s.place(&v0_id).expect("declared"))?;
            let mut pointwise = true;
            for p in full_s.places() {
                if p.id != v0_id {
                    pointwise = pointwise && v0_image.contains(&full_s.local_image(p)?)?;
                }
            }
            for class in &full_s.tail().expect("tail present").classes {
                pointwise = pointwise && v0_image.contains(&full_s.tail_class_image(class)?)?;
            }
            Ok(pointwise == full_s.verdict()?.surjective)
        };
        out.record(check().unwrap_or(false), || {
            "pointwise comparison law failed".into()
        });
    }
    out
}

/// Randomized short exact sequences: the six-term sequence is exact at
/// all four interior nodes, and a corrupted connecting map is caught.
pub fn sixterm_exactness(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("sixterm_exactness");
    for _ in 0..iterations {
        let group = random_group(rng);
        let seq = random_ses(rng, &group);
        match seq.six_term() {
            Ok(st) => {
                let report = st.verify_exactness();
                out.record(report.all_exact(), || {
                    format!("inexact node: {:?}", report)
                });
            }
            Err(e) => out.record(false, || format!("six-term build failed: {:?}", e)),
        }
    }
    // negative control: zeroing delta on the swap fixture must be caught
    let control = || -> crate::Result<bool> {
        let c2 = crate::group::FiniteGroup::cyclic(2);
        let swap = IntMatrix::from_rows_i64(&[&[0, 1], &[1, 0]]);
        let b2 = GModule::new(
            c2,
            FgAbGroup::free(2),
            vec![IntMatrix::identity(2), swap],
        )?;
        let seq = crate::sixterm::ShortExactSequence::from_stable_subgroup(
            &b2,
            &[vec![BigInt::one(), BigInt::one()]],
        )?;
        let mut st = seq.six_term()?;
        st.delta = vec![st.tensors[0].zero()];
        let report = st.verify_exactness();
        let node = report.nodes.iter().find(|n| n.node == "torsion_b3");
        Ok(!report.all_exact() && node.map_or(false, |n| !n.exact && n.witness.is_some()))
    };
    out.record(control().unwrap_or(false), || {
        "corrupted delta was not detected".into()
    });
    out
}

/// The connecting value is independent of every choice made during its
/// derivation, and the swap fixture yields 1/2.
pub fn delta_determinism(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("delta_determinism");
    for _ in 0..iterations {
        let group = random_group(rng);
        let seq = random_ses(rng, &group);
        let st = match seq.six_term() {
            Ok(st) => st,
            Err(e) => {
                out.record(false, || format!("six-term build failed: {:?}", e));
                continue;
            }
        };
        let mut ok = true;
        for a in 0..st.torsion_generators[2].cols() {
            let gen = st.torsion_generators[2].column(a);
            for _ in 0..5 {
                match seq.connecting_value_randomized(&gen, rng) {
                    Ok(v) => ok = ok && v == st.delta[a],
                    Err(_) => ok = false,
                }
            }
        }
        // additivity on random torsion classes
        let k = st.torsion_generators[2].cols();
        if k > 0 {
            let [.., c3] = seq.coinvariant_groups();
            let combine = |rng: &mut Rng| {
                let mut acc = vec![BigInt::zero(); c3.ambient_rank()];
                for a in 0..k {
                    let c = BigInt::from(rng.range_i64(0, 3));
                    for (t, g) in acc.iter_mut().zip(st.torsion_generators[2].column(a)) {
                        *t += g * &c;
                    }
                }
                acc
            };
            for _ in 0..3 {
                let x = combine(rng);
                let y = combine(rng);
                let sum: Vec<BigInt> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                let additive = match (
                    seq.connecting_value(&x),
                    seq.connecting_value(&y),
                    seq.connecting_value(&sum),
                ) {
                    (Ok(dx), Ok(dy), Ok(ds)) => dx.add(&dy) == ds,
                    _ => false,
                };
                ok = ok && additive;
            }
        }
        out.record(ok, || "randomized derivations disagreed".into());
    }
    // frozen fixture value
    let fixture = || -> crate::Result<bool> {
        let c2 = crate::group::FiniteGroup::cyclic(2);
        let swap = IntMatrix::from_rows_i64(&[&[0, 1], &[1, 0]]);
        let b2 = GModule::new(
            c2,
            FgAbGroup::free(2),
            vec![IntMatrix::identity(2), swap],
        )?;
        let seq = crate::sixterm::ShortExactSequence::from_stable_subgroup(
            &b2,
            &[vec![BigInt::one(), BigInt::one()]],
        )?;
        let st = seq.six_term()?;
        let half = num_rational::BigRational::new(BigInt::one(), BigInt::from(2));
        Ok(st.delta.len() == 1 && st.delta[0].coords == vec![half])
    };
    out.record(fixture().unwrap_or(false), || {
        "swap fixture delta != 1/2".into()
    });
    out
}

/// Tor and H1 oracles: torsion coinvariants equal the rationalization
/// kernel, and H1 from the bar complex is killed by the group order.
pub fn tor_h1_oracles(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("tor_h1_oracles");
    for _ in 0..iterations {
        let group = random_group(rng);
        let module = random_module(rng, &group, ModuleOptions::default());
        let full = SubgroupOfG::full(group.clone());
        let h = random_subgroup(rng, &group);
        let check = || -> crate::Result<bool> {
            let direct = module.coinvariants(&full)?.torsion_part;
            let oracle = rationalization_kernel(&module)?;
            let same = direct.same_subgroup(&oracle)?;
            let tor = torsion_coinvariants(&module)?;
            let forms_match = tor.canonical_form() == &direct.canonical_form();
            let killed = h1_killed_by_group_order(&module)?;
            // the same bound holds over any subgroup
            let h1 = module.h1_bar_complex(&h)?;
            let h_order = BigInt::from(h.order() as i64);
            let cf = h1.canonical_form();
            let killed_h = cf.free_rank == 0
                && cf
                    .invariant_factors
                    .iter()
                    .all(|d| h_order.mod_floor(d).is_zero());
            Ok(same && forms_match && killed && killed_h)
        };
        out.record(check().unwrap_or(false), || {
            format!("oracle mismatch on {:?}", module)
        });
    }
    out
}

/// The radical chain: whenever the automorphism-image condition holds at
/// a finite complement place, the predictor fires and the direct verdict
/// is surjective; the prime-degree variant implies the general one.
pub fn radical_chain(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("radical_chain");
    let mut checked = 0u32;
    let mut attempts = 0u32;
    while checked < iterations && attempts < iterations * 20 {
        attempts += 1;
        let group = random_group(rng);
        let rad = random_radical(rng, &group);
        let h = random_subgroup(rng, &group);
        let place = PlaceSpec::new("v0", PlaceKind::Finite, h.clone()).expect("finite");
        let problem = LocalizationProblem::new(
            rad.module().clone(),
            vec![place],
            vec![],
            Some(TailSpec::all_cyclic(&group, Side::S)),
        )
        .expect("valid");
        if !rad.aut_images_match(&h).unwrap_or(false) {
            continue; // hypothesis does not hold; nothing to check
        }
        checked += 1;
        let ok = presets::radical_predicts_surjectivity(&rad, &problem, "v0").unwrap_or(false)
            && problem.verdict().map_or(false, |v| v.surjective);
        out.record(ok, || "radical hypothesis held but prediction failed".into());
        // ladder of the two six-term rows
        match presets::radical_ladder_check(&rad, &h) {
            Ok(check) => out.record(check.commutes && check.omega_bar_surjective, || {
                "ladder did not commute or omega-bar not onto".into()
            }),
            Err(e) => out.record(false, || format!("ladder build failed: {:?}", e)),
        }
    }
    out
}

/// A morphism of short exact sequences induces a commuting ladder of
/// six-term rows.
pub fn functoriality_ladder(rng: &mut Rng, iterations: u32) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("functoriality");
    for _ in 0..iterations {
        let group = random_group(rng);
        match functoriality_case(rng, &group) {
            Ok(ok) => out.record(ok, || "induced ladder did not commute".into()),
            Err(e) => out.record(false, || format!("case build failed: {:?}", e)),
        }
    }
    out
}

fn functoriality_case(
    rng: &mut Rng,
    group: &alloc::sync::Arc<crate::group::FiniteGroup>,
) -> crate::Result<bool> {
    use crate::matrix::{solve_with, smith_normal_form as snf};
    let b2 = random_module(rng, group, ModuleOptions::default());
    let n = b2.carrier().ambient_rank();
    if n == 0 {
        return Ok(true);
    }
    // source sequence from one orbit
    let v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.range_i64(-2, 2))).collect();
    let mut orbit: Vec<Vec<BigInt>> = Vec::new();
    for g in group.elements() {
        orbit.push(b2.action(g).mul_vec(&v));
    }
    let seq_a = crate::sixterm::ShortExactSequence::from_stable_subgroup(&b2, &orbit)?;

    // equivariant endomorphism from the center of the group algebra:
    // a scalar plus random multiples of conjugacy-class sums of the
    // action (these commute with every action matrix and preserve the
    // relation span)
    let order = group.order();
    let mut class_of = vec![usize::MAX; order];
    let mut n_classes = 0usize;
    for g in 0..order {
        if class_of[g] != usize::MAX {
            continue;
        }
        for x in 0..order {
            class_of[group.conjugate_element(x, g)] = n_classes;
        }
        n_classes += 1;
    }
    let coeffs: Vec<BigInt> = (0..n_classes)
        .map(|_| BigInt::from(rng.range_i64(-1, 1)))
        .collect();
    let mut t = IntMatrix::identity(n).scale(&BigInt::from(rng.range_i64(-1, 2)));
    for g in 0..order {
        t = t.add(&b2.action(g).scale(&coeffs[class_of[g]]))?;
    }

    // target sequence: sublattice enlarged by the image of the source one
    let mut orbit_b = orbit.clone();
    for w in &orbit {
        orbit_b.push(t.mul_vec(w));
    }
    let seq_b = crate::sixterm::ShortExactSequence::from_stable_subgroup(&b2, &orbit_b)?;

    // vertical maps: phi2 = t on the shared ambient; phi1 solves through
    // the target sublattice; phi3 = t on the quotient presentations
    let gens_a = seq_a.map_i().matrix().clone();
    let gens_b = seq_b.map_i().matrix().clone();
    let system = IntMatrix::hstack(&[&gens_b, b2.carrier().relations()]);
    let system_snf = snf(&system);
    let s_a = gens_a.cols();
    let s_b = gens_b.cols();
    let mut phi1_cols = Vec::with_capacity(s_a);
    for k in 0..s_a {
        let moved = t.mul_vec(&gens_a.column(k));
        let sol = solve_with(&system_snf, &moved)
            .ok_or_else(|| crate::Error::Internal("phi1 solve failed".into()))?;
        phi1_cols.push(sol[..s_b].to_vec());
    }
    let phi1 = IntMatrix::from_columns(s_b, &phi1_cols);

    let st_a = seq_a.six_term()?;
    let st_b = seq_b.six_term()?;

    // verticals in torsion coordinates
    let vert = |idx: usize, matrix: &IntMatrix| -> crate::Result<IntMatrix> {
        let gens = &st_a.torsion_generators[idx];
        let c_b = &st_b.coinvariants[idx];
        let mut cols = Vec::with_capacity(gens.cols());
        for a in 0..gens.cols() {
            let moved = matrix.mul_vec(&gens.column(a));
            let tc = c_b
                .torsion_coordinates(&moved)
                .ok_or_else(|| crate::Error::Internal("vertical not torsion".into()))?;
            cols.push(tc);
        }
        Ok(IntMatrix::from_columns(
            st_b.torsion_orders[idx].len(),
            &cols,
        ))
    };
    let v1 = vert(0, &phi1)?;
    let v2 = vert(1, &t)?;
    let v3 = vert(2, &t)?;

    let t2b = FgAbGroup::from_orders(&st_b.torsion_orders[1]);
    let t3b = FgAbGroup::from_orders(&st_b.torsion_orders[2]);
    let mut ok = true;

    let left = v2.mul(&st_a.map_i_torsion)?;
    let right = st_b.map_i_torsion.mul(&v1)?;
    for (a, b) in left.columns().zip(right.columns()) {
        ok = ok && t2b.element(a) == t2b.element(b);
    }
    let left = v3.mul(&st_a.map_j_torsion)?;
    let right = st_b.map_j_torsion.mul(&v2)?;
    for (a, b) in left.columns().zip(right.columns()) {
        ok = ok && t3b.element(a) == t3b.element(b);
    }
    // delta square: delta_b(v3(x)) = (tensor vertical) delta_a(x)
    let tensor_vert = st_b.tensors[0]
        .coordinate_matrix()
        .mul(&phi1)?
        .mul(st_a.tensors[0].basis_lifts())?;
    for a in 0..st_a.torsion_generators[2].cols() {
        let lhs = st_b.delta_value_of(&v3.column(a));
        let rhs = st_a.delta[a].apply(&tensor_vert);
        ok = ok && lhs == rhs;
    }
    // tensor squares
    let tensor_vert2 = st_b.tensors[1]
        .coordinate_matrix()
        .mul(&t)?
        .mul(st_a.tensors[1].basis_lifts())?;
    let tensor_vert3 = st_b.tensors[2]
        .coordinate_matrix()
        .mul(&t)?
        .mul(st_a.tensors[2].basis_lifts())?;
    // an integer matrix induces the zero map on (Q/Z)^r only when it is
    // the zero matrix, so commuting squares mean equal matrices here
    let left = tensor_vert2.mul(&st_a.map_i_tensor)?;
    let right = st_b.map_i_tensor.mul(&tensor_vert)?;
    ok = ok && left == right;
    let left = tensor_vert3.mul(&st_a.map_j_tensor)?;
    let right = st_b.map_j_tensor.mul(&tensor_vert2)?;
    ok = ok && left == right;
    Ok(ok)
}
