//! Deterministic instance generators for the randomized law suites.
//!
//! The generator is a SplitMix64 stream: tiny, portable, and stable across
//! platforms, which keeps seeded self-test reports byte-identical. The
//! builders assemble valid modules from permutation blocks (optionally
//! sheared by a unimodular conjugation), valid short exact sequences from
//! orbit sublattices, and valid localization problems from random place
//! data. Everything constructed here passes the library's own validation.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::fgab::FgAbGroup;
use crate::gmodule::GModule;
use crate::group::{FiniteGroup, SubgroupOfG};
use crate::localization::{LocalizationProblem, PlaceKind, PlaceSpec, Side, TailSpec};
use crate::matrix::IntMatrix;
use crate::presets::RadicalData;
use crate::sixterm::ShortExactSequence;

/// SplitMix64.
#[derive(Clone, Debug)]
pub struct Rng {
    state: u64,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` (bound > 0).
    pub fn below(&mut self, bound: usize) -> usize {
        assert!(bound > 0);
        (self.next_u64() % bound as u64) as usize
    }

    /// Uniform in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + (self.next_u64() % ((hi - lo + 1) as u64)) as i64
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        (self.next_u64() % den as u64) < num as u64
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

/// A random small group from a fixed pool (orders up to 8).
pub fn random_group(rng: &mut Rng) -> Arc<FiniteGroup> {
    match rng.below(8) {
        0 => FiniteGroup::cyclic(2),
        1 => FiniteGroup::cyclic(3),
        2 => FiniteGroup::cyclic(4),
        3 => FiniteGroup::cyclic(6),
        4 => FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
        5 => FiniteGroup::dihedral(3),
        6 => FiniteGroup::dihedral(4),
        7 => FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(4)),
        _ => unreachable!(),
    }
}

pub fn random_subgroup(rng: &mut Rng, group: &Arc<FiniteGroup>) -> SubgroupOfG {
    let n = group.order();
    let mut seeds = Vec::new();
    for _ in 0..rng.below(3) {
        seeds.push(rng.below(n));
    }
    SubgroupOfG::generated(group.clone(), &seeds).expect("closure of valid seeds")
}

/// A unimodular matrix assembled from a few elementary shears and swaps,
/// with small entries.
pub fn random_unimodular(rng: &mut Rng, n: usize, steps: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..steps {
        let i = rng.below(n);
        let mut j = rng.below(n);
        if i == j {
            j = (j + 1) % n;
        }
        let c = rng.range_i64(-2, 2);
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = BigInt::from(c);
        u = u.mul(&e).expect("square");
    }
    u
}

/// Options for [`random_module`].
#[derive(Clone, Copy, Debug)]
pub struct ModuleOptions {
    /// Force a finite carrier, with order at most this bound.
    pub finite_only: bool,
    pub max_order: u64,
    pub max_blocks: usize,
}

impl Default for ModuleOptions {
    fn default() -> Self {
        ModuleOptions {
            finite_only: false,
            max_order: 16,
            max_blocks: 2,
        }
    }
}

/// A random module built from permutation blocks `Z[G/H] / d` for random
/// subgroups `H` and small `d`, direct-summed and optionally conjugated by
/// a random unimodular change of basis (which preserves validity).
pub fn random_module(rng: &mut Rng, group: &Arc<FiniteGroup>, opts: ModuleOptions) -> GModule {
    let blocks = 1 + rng.below(opts.max_blocks);
    let mut module: Option<GModule> = None;
    for _ in 0..blocks {
        let block = random_permutation_block(rng, group, &opts);
        module = Some(match module {
            None => block,
            Some(m) => {
                let candidate = m.direct_sum(&block).expect("same group");
                if carrier_order_ok(&candidate, &opts) {
                    candidate
                } else {
                    m
                }
            }
        });
    }
    let m = module.expect("at least one block");
    // conjugate to hide the permutation structure
    if m.carrier().ambient_rank() >= 2 && rng.chance(1, 2) {
        conjugated_by_unimodular(rng, &m)
    } else {
        m
    }
}

fn carrier_order_ok(m: &GModule, opts: &ModuleOptions) -> bool {
    if !opts.finite_only {
        return m.carrier().ambient_rank() <= 6;
    }
    match m.carrier().order() {
        Some(o) => o <= BigInt::from(opts.max_order),
        None => false,
    }
}

/// One block: the coset permutation action of `G` on `Z[G/H]`, reduced
/// modulo a small integer (0 = free when infinite carriers are allowed).
fn random_permutation_block(
    rng: &mut Rng,
    group: &Arc<FiniteGroup>,
    opts: &ModuleOptions,
) -> GModule {
    let h = random_subgroup(rng, group);
    // cosets of h, represented by their sorted element sets
    let mut cosets: Vec<Vec<usize>> = Vec::new();
    for g in group.elements() {
        let mut coset: Vec<usize> = h.elements().iter().map(|&x| group.mul(g, x)).collect();
        coset.sort_unstable();
        if !cosets.contains(&coset) {
            cosets.push(coset);
        }
    }
    let k = cosets.len();
    let max_rank = 4usize;
    if k > max_rank {
        // fall back to a rank-1 module with a character-like action
        return random_rank_one(rng, group, opts);
    }
    let coset_of = |x: usize| -> usize {
        cosets
            .iter()
            .position(|c| c.binary_search(&x).is_ok())
            .expect("cosets partition the group")
    };
    let d: i64 = if opts.finite_only {
        // keep |M| = d^k within the bound
        let mut d = 2 + rng.range_i64(0, 2);
        while (d as u64).checked_pow(k as u32).map_or(true, |o| o > opts.max_order) && d > 1 {
            d -= 1;
        }
        d.max(1)
    } else if rng.chance(1, 2) {
        rng.range_i64(2, 4)
    } else {
        0
    };
    let rel = if d == 0 {
        IntMatrix::zero(k, 0)
    } else {
        IntMatrix::from_fn(k, k, |i, j| {
            if i == j {
                BigInt::from(d)
            } else {
                BigInt::from(0)
            }
        })
    };
    let carrier = FgAbGroup::new(k, rel);
    let action: Vec<IntMatrix> = group
        .elements()
        .map(|g| {
            IntMatrix::from_fn(k, k, |i, j| {
                // g sends coset j to coset of g * rep_j
                let target = coset_of(group.mul(g, cosets[j][0]));
                if i == target {
                    BigInt::from(1)
                } else {
                    BigInt::from(0)
                }
            })
        })
        .collect();
    GModule::new(group.clone(), carrier, action).expect("permutation action is valid")
}

/// Rank-1 module where elements act by a sign character (through any
/// index-2 pattern the group's element orders allow) or trivially.
fn random_rank_one(rng: &mut Rng, group: &Arc<FiniteGroup>, opts: &ModuleOptions) -> GModule {
    let d: i64 = if opts.finite_only {
        rng.range_i64(1, opts.max_order.min(8) as i64)
    } else if rng.chance(1, 2) {
        0
    } else {
        rng.range_i64(1, 6)
    };
    let rel = if d == 0 {
        IntMatrix::zero(1, 0)
    } else {
        IntMatrix::from_fn(1, 1, |_, _| BigInt::from(d))
    };
    let carrier = FgAbGroup::new(1, rel);
    // try the "sign of element order" character; fall back to trivial if
    // it is not a homomorphism for this group
    let signs: Vec<IntMatrix> = group
        .elements()
        .map(|g| {
            if group.element_order(g) == 2 && rng.chance(1, 1) {
                IntMatrix::from_rows_i64(&[&[-1]])
            } else {
                IntMatrix::identity(1)
            }
        })
        .collect();
    if let Ok(m) = GModule::new(group.clone(), carrier.clone(), signs) {
        return m;
    }
    GModule::with_trivial_action(group.clone(), carrier)
}

fn conjugated_by_unimodular(rng: &mut Rng, m: &GModule) -> GModule {
    let n = m.carrier().ambient_rank();
    let u = random_unimodular(rng, n, 3);
    // build the inverse by replaying the construction is awkward; instead
    // solve U * X = I exactly (U unimodular, so X is integral)
    let mut inv_cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = vec![BigInt::from(0); n];
        e[i] = BigInt::from(1);
        inv_cols.push(crate::matrix::solve(&u, &e).expect("unimodular"));
    }
    let u_inv = IntMatrix::from_columns(n, &inv_cols);
    let rel = u.mul(m.carrier().relations()).expect("shape");
    let carrier = FgAbGroup::new(n, rel);
    let action = m
        .group()
        .elements()
        .map(|g| {
            u.mul(m.action(g))
                .and_then(|x| x.mul(&u_inv))
                .expect("shape")
        })
        .collect();
    GModule::new(m.group().clone(), carrier, action).expect("conjugated action is valid")
}

/// A random place over the module's group. Real places are only emitted
/// when the group has an element of order 2.
pub fn random_place(rng: &mut Rng, m: &GModule, id: String) -> PlaceSpec {
    let group = m.group();
    let involutions: Vec<usize> = group
        .elements()
        .filter(|&g| group.element_order(g) == 2)
        .collect();
    let kind = match rng.below(5) {
        0 if !involutions.is_empty() => PlaceKind::Real,
        1 => PlaceKind::Complex,
        _ => PlaceKind::Finite,
    };
    let decomp = match kind {
        PlaceKind::Complex => SubgroupOfG::trivial(group.clone()),
        PlaceKind::Real => {
            let g = *rng.pick(&involutions);
            SubgroupOfG::cyclic_generated_by(group.clone(), g)
        }
        PlaceKind::Finite => random_subgroup(rng, group),
    };
    PlaceSpec::new(id, kind, decomp).expect("kind constraints satisfied by construction")
}

/// Options for [`random_problem`].
#[derive(Clone, Copy, Debug, Default)]
pub struct ProblemOptions {
    pub module: ModuleOptions,
    /// Force at least one finite place on the complement side.
    pub finite_place_in_complement: bool,
}

pub fn random_problem(rng: &mut Rng, opts: ProblemOptions) -> LocalizationProblem {
    let group = random_group(rng);
    let module = random_module(rng, &group, opts.module);
    let n_places = 1 + rng.below(4);
    let mut places = Vec::new();
    for i in 0..n_places {
        places.push(random_place(rng, &module, alloc::format!("v{}", i)));
    }
    if opts.finite_place_in_complement {
        places.push(
            PlaceSpec::new(
                "v_extra",
                PlaceKind::Finite,
                random_subgroup(rng, &group),
            )
            .expect("finite place"),
        );
    }
    let mut s_explicit = Vec::new();
    for p in &places {
        if p.id != "v_extra" && rng.chance(1, 2) {
            s_explicit.push(p.id.clone());
        }
    }
    let tail = match rng.below(3) {
        0 => None,
        1 => Some(TailSpec::all_cyclic(&group, Side::S)),
        _ => Some(TailSpec::all_cyclic(&group, Side::Complement)),
    };
    LocalizationProblem::new(module, places, s_explicit, tail).expect("assembled problem is valid")
}

/// A random short exact sequence: `B2` is a random module, `B1` the
/// subgroup generated by the orbits of a few random vectors, `B3` the
/// quotient. Both maps come out exact by construction.
pub fn random_ses(rng: &mut Rng, group: &Arc<FiniteGroup>) -> ShortExactSequence {
    let b2 = random_module(rng, group, ModuleOptions::default());
    let n = b2.carrier().ambient_rank();
    let mut vectors: Vec<Vec<BigInt>> = Vec::new();
    for _ in 0..1 + rng.below(2) {
        let v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.range_i64(-3, 3))).collect();
        for g in group.elements() {
            vectors.push(b2.action(g).mul_vec(&v));
        }
    }
    ShortExactSequence::from_stable_subgroup(&b2, &vectors).expect("orbit lattice is stable")
}

/// Random radical data: a module together with a full-rank stable
/// sublattice (so the quotient is finite).
pub fn random_radical(rng: &mut Rng, group: &Arc<FiniteGroup>) -> RadicalData {
    let m = random_module(rng, group, ModuleOptions::default());
    let n = m.carrier().ambient_rank();
    let d = BigInt::from(rng.range_i64(1, 3));
    let mut vectors: Vec<Vec<BigInt>> = Vec::new();
    // d * (ambient basis) guarantees full rank; extra orbits enrich it
    for i in 0..n {
        let mut v = vec![BigInt::from(0); n];
        v[i] = d.clone();
        vectors.push(v);
    }
    for _ in 0..rng.below(2) {
        let v: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.range_i64(-2, 2))).collect();
        for g in group.elements() {
            vectors.push(m.action(g).mul_vec(&v));
        }
    }
    RadicalData::new(m, &vectors).expect("full-rank stable sublattice")
}
