//! The surjectivity criterion.
//!
//! A problem consists of a module `M` over a finite group, one chosen
//! decomposition subgroup per declared place, and a partition of the
//! declared places into a set `S` and its complement. Each place
//! contributes a subgroup of the torsion coinvariants of `M`:
//!
//! * finite place: the image of the torsion part of `M_{G_w}`,
//! * real place: the image of Tate `H^{-1}(G_w, M)` (with `|G_w| = 2`),
//! * complex place: zero.
//!
//! Localization is surjective iff the join over `S` is contained in the
//! join over the complement, and the obstruction group is the quotient of
//! the `S`-side image by the intersection of the two sides.
//!
//! Infinitely many unlisted finite places are encoded by a symbolic tail:
//! a set of conjugacy classes of cyclic subgroups, each standing for the
//! infinitely many finite places having that decomposition class. The
//! default tail is every cyclic class, which by Chebotarev is what the
//! full set of unlisted places realizes. A conjugacy class is enough data
//! because conjugating the decomposition subgroup does not change its
//! image in the coinvariants (tested property).

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fgab::{CanonicalForm, Subgroup};
use crate::gmodule::{CoinvariantData, GModule};
use crate::group::{cyclic_subgroups_up_to_conjugacy, SubgroupOfG};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaceKind {
    Finite,
    Real,
    Complex,
}

/// One place: a label, its kind, and the chosen decomposition subgroup of
/// the acting group.
#[derive(Clone, Debug)]
pub struct PlaceSpec {
    pub id: String,
    pub kind: PlaceKind,
    pub decomp: SubgroupOfG,
}

impl PlaceSpec {
    pub fn new(id: impl Into<String>, kind: PlaceKind, decomp: SubgroupOfG) -> Result<Self> {
        let id = id.into();
        match kind {
            PlaceKind::Complex if !decomp.is_trivial() => Err(Error::InvalidPlace {
                id,
                reason: "complex places have trivial decomposition group".into(),
            }),
            PlaceKind::Real if decomp.order() != 2 => Err(Error::InvalidPlace {
                id,
                reason: "real places need a decomposition group of order 2".into(),
            }),
            _ => Ok(PlaceSpec { id, kind, decomp }),
        }
    }
}

/// Which side of the partition carries something.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    S,
    Complement,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::S => Side::Complement,
            Side::Complement => Side::S,
        }
    }
}

/// The symbolic stand-in for infinitely many unlisted finite places.
#[derive(Clone, Debug)]
pub struct TailSpec {
    pub side: Side,
    pub classes: Vec<SubgroupOfG>,
}

impl TailSpec {
    /// Every cyclic subgroup up to conjugacy: the default encoding of "all
    /// remaining places".
    pub fn all_cyclic(group: &alloc::sync::Arc<crate::group::FiniteGroup>, side: Side) -> Self {
        TailSpec {
            side,
            classes: cyclic_subgroups_up_to_conjugacy(group),
        }
    }
}

/// A validated problem instance. Construction computes the full-group
/// coinvariants once; verdicts and per-place images reuse them.
pub struct LocalizationProblem {
    module: GModule,
    places: Vec<PlaceSpec>,
    s_explicit: Vec<String>,
    tail: Option<TailSpec>,
    coin_full: CoinvariantData,
}

/// The answer: the criterion outcome, the obstruction group in canonical
/// form with generator lifts, and all intermediate images.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub surjective: bool,
    pub obstruction: Obstruction,
    pub im_sigma_s: Subgroup,
    pub im_sigma_comp: Subgroup,
    pub per_place: Vec<(String, Subgroup)>,
}

/// Canonical form of the obstruction group plus one ambient lift per
/// canonical generator (a certificate: the lifts generate the group
/// modulo the complement-side image).
#[derive(Clone, Debug)]
pub struct Obstruction {
    pub canonical: CanonicalForm,
    pub generator_lifts: Vec<Vec<BigInt>>,
}

impl Obstruction {
    pub fn is_trivial(&self) -> bool {
        self.canonical.is_trivial()
    }
}

impl LocalizationProblem {
    pub fn new(
        module: GModule,
        places: Vec<PlaceSpec>,
        s_explicit: Vec<String>,
        tail: Option<TailSpec>,
    ) -> Result<Self> {
        for p in &places {
            if p.decomp.group() != module.group() {
                return Err(Error::InvalidPlace {
                    id: p.id.clone(),
                    reason: "decomposition group belongs to a different group".into(),
                });
            }
        }
        for (i, p) in places.iter().enumerate() {
            if places[..i].iter().any(|q| q.id == p.id) {
                return Err(Error::InvalidPlaceSet(alloc::format!(
                    "duplicate place id `{}`",
                    p.id
                )));
            }
        }
        for id in &s_explicit {
            if !places.iter().any(|p| &p.id == id) {
                return Err(Error::InvalidPlaceSet(alloc::format!(
                    "S lists undeclared place `{}`",
                    id
                )));
            }
        }
        let mut sorted = s_explicit.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != s_explicit.len() {
            return Err(Error::InvalidPlaceSet("S lists a place twice".into()));
        }
        if let Some(t) = &tail {
            for c in &t.classes {
                if c.group() != module.group() {
                    return Err(Error::InvalidPlaceSet(
                        "tail class belongs to a different group".into(),
                    ));
                }
            }
        }
        let coin_full = module.coinvariants(&SubgroupOfG::full(module.group().clone()))?;
        Ok(LocalizationProblem {
            module,
            places,
            s_explicit,
            tail,
            coin_full,
        })
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn places(&self) -> &[PlaceSpec] {
        &self.places
    }

    pub fn tail(&self) -> Option<&TailSpec> {
        self.tail.as_ref()
    }

    /// The coinvariants of the full group, `M_G`.
    pub fn full_coinvariants(&self) -> &CoinvariantData {
        &self.coin_full
    }

    pub fn side_of(&self, id: &str) -> Option<Side> {
        if !self.places.iter().any(|p| p.id == id) {
            return None;
        }
        if self.s_explicit.iter().any(|x| x == id) {
            Some(Side::S)
        } else {
            Some(Side::Complement)
        }
    }

    pub fn place(&self, id: &str) -> Option<&PlaceSpec> {
        self.places.iter().find(|p| p.id == id)
    }

    /// The local contribution of one place, as a subgroup of `M_G` (it
    /// always lands inside the torsion subgroup).
    pub fn local_image(&self, place: &PlaceSpec) -> Result<Subgroup> {
        let full = SubgroupOfG::full(self.module.group().clone());
        match place.kind {
            PlaceKind::Complex => Ok(self.coin_full.quotient.trivial_subgroup()),
            PlaceKind::Finite => self
                .module
                .torsion_image_in_coinvariants(&place.decomp, &full),
            PlaceKind::Real => {
                let (_, embedding) = self.module.tate_h_minus_one(&place.decomp)?;
                // Re-read the generators of the embedded image as classes
                // in M_G; the ambient lattice is shared.
                let vectors: Vec<Vec<BigInt>> = embedding
                    .image()
                    .generators()
                    .iter()
                    .map(|g| g.coords().to_vec())
                    .collect();
                Ok(self.coin_full.quotient.subgroup_from_vectors(&vectors))
            }
        }
    }

    /// The contribution of one symbolic tail class, treated as a finite
    /// place with that decomposition subgroup.
    pub fn tail_class_image(&self, class: &SubgroupOfG) -> Result<Subgroup> {
        let full = SubgroupOfG::full(self.module.group().clone());
        self.module.torsion_image_in_coinvariants(class, &full)
    }

    /// Join of the local images over one side of the partition, including
    /// the symbolic tail when it sits on that side.
    pub fn side_image(&self, side: Side) -> Result<Subgroup> {
        let mut acc = self.coin_full.quotient.trivial_subgroup();
        for p in &self.places {
            if self.side_of(&p.id) == Some(side) {
                acc = acc.join(&self.local_image(p)?)?;
            }
        }
        if let Some(t) = &self.tail {
            if t.side == side {
                for class in &t.classes {
                    acc = acc.join(&self.tail_class_image(class)?)?;
                }
            }
        }
        Ok(acc)
    }

    /// Decides surjectivity and computes the obstruction group.
    pub fn verdict(&self) -> Result<Verdict> {
        let im_s = self.side_image(Side::S)?;
        let im_c = self.side_image(Side::Complement)?;
        let surjective = im_c.contains(&im_s)?;

        // obstruction = im_S / (im_S meet im_C), computed as the image of
        // im_S in M_G / im_C
        let (_quot, proj) = self.coin_full.quotient.quotient(&im_c)?;
        let image = proj.image_of(&im_s)?;
        let (abstract_group, _) = image.presented();
        let canonical = abstract_group.canonical_form().clone();
        debug_assert_eq!(canonical.free_rank, 0, "obstruction must be finite");

        // lift the canonical generators through the generator matrix of
        // the image subgroup back to ambient coordinates of M_G
        let gen_mat = im_s.generator_matrix();
        let lifts: Vec<Vec<BigInt>> = abstract_group
            .torsion_generator_matrix()
            .columns()
            .map(|t| {
                self.coin_full
                    .quotient
                    .element(gen_mat.mul_vec(&t))
                    .coords()
                    .to_vec()
            })
            .collect();
        let obstruction = Obstruction {
            canonical,
            generator_lifts: lifts,
        };
        debug_assert_eq!(surjective, obstruction.is_trivial());

        let mut per_place = Vec::new();
        for p in &self.places {
            per_place.push((p.id.clone(), self.local_image(p)?));
        }
        Ok(Verdict {
            surjective,
            obstruction,
            im_sigma_s: im_s,
            im_sigma_comp: im_c,
            per_place,
        })
    }

    /// Does the single place `v0` (which must lie outside `S`) already
    /// surject onto the full torsion coinvariants? When it does, the
    /// criterion is automatically satisfied.
    pub fn v0_suffices(&self, id: &str) -> Result<bool> {
        match self.side_of(id) {
            Some(Side::Complement) => {}
            Some(Side::S) => {
                return Err(Error::InvalidPlaceSet(alloc::format!(
                    "`{}` lies in S, not in the complement",
                    id
                )))
            }
            None => {
                return Err(Error::InvalidPlaceSet(alloc::format!(
                    "unknown place `{}`",
                    id
                )))
            }
        }
        let place = self.place(id).expect("checked above");
        let im = self.local_image(place)?;
        im.contains(&self.coin_full.torsion_part)
    }

    /// The finite-module shortcut: a finite carrier plus any finite place
    /// outside `S` forces surjectivity. Returns whether the hypotheses
    /// hold; the implication is a tested law.
    pub fn semisimple_case_applies(&self) -> bool {
        if !self.module.carrier().canonical_form().is_finite() {
            return false;
        }
        let explicit_finite = self.places.iter().any(|p| {
            p.kind == PlaceKind::Finite && self.side_of(&p.id) == Some(Side::Complement)
        });
        let tail_finite = self
            .tail
            .as_ref()
            .is_some_and(|t| t.side == Side::Complement && !t.classes.is_empty());
        explicit_finite || tail_finite
    }
}

impl core::fmt::Debug for LocalizationProblem {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "LocalizationProblem({} places, |S_explicit| = {}, tail: {})",
            self.places.len(),
            self.s_explicit.len(),
            self.tail.is_some()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgab::FgAbGroup;
    use crate::group::FiniteGroup;
    use crate::matrix::IntMatrix;
    use alloc::sync::Arc;
    use alloc::vec;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    /// The norm-one torus module: G = C2, M = Z, nontrivial element acts
    /// by -1.
    fn norm_one() -> GModule {
        let c2 = FiniteGroup::cyclic(2);
        GModule::new(
            c2,
            FgAbGroup::free(1),
            vec![IntMatrix::identity(1), IntMatrix::from_rows_i64(&[&[-1]])],
        )
        .unwrap()
    }

    fn split_place(m: &GModule, id: &str) -> PlaceSpec {
        PlaceSpec::new(
            id,
            PlaceKind::Finite,
            SubgroupOfG::trivial(m.group().clone()),
        )
        .unwrap()
    }

    fn inert_place(m: &GModule, id: &str) -> PlaceSpec {
        PlaceSpec::new(id, PlaceKind::Finite, SubgroupOfG::full(m.group().clone())).unwrap()
    }

    #[test]
    fn place_validation() {
        let m = norm_one();
        let g = m.group().clone();
        assert!(PlaceSpec::new("c", PlaceKind::Complex, SubgroupOfG::trivial(g.clone())).is_ok());
        assert!(PlaceSpec::new("c", PlaceKind::Complex, SubgroupOfG::full(g.clone())).is_err());
        assert!(PlaceSpec::new("r", PlaceKind::Real, SubgroupOfG::full(g.clone())).is_ok());
        assert!(PlaceSpec::new("r", PlaceKind::Real, SubgroupOfG::trivial(g)).is_err());
    }

    #[test]
    fn local_images_norm_one() {
        let m = norm_one();
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![
                inert_place(&m, "inert"),
                split_place(&m, "split"),
                PlaceSpec::new(
                    "cx",
                    PlaceKind::Complex,
                    SubgroupOfG::trivial(m.group().clone()),
                )
                .unwrap(),
            ],
            vec![],
            None,
        )
        .unwrap();
        // M_G = Z/2; the inert place sees all of it, the split place and
        // the complex place see nothing.
        let inert = problem.local_image(problem.place("inert").unwrap()).unwrap();
        assert_eq!(inert.canonical_form().invariant_factors, vec![bi(2)]);
        let split = problem.local_image(problem.place("split").unwrap()).unwrap();
        assert!(split.is_trivial());
        let cx = problem.local_image(problem.place("cx").unwrap()).unwrap();
        assert!(cx.is_trivial());
    }

    #[test]
    fn real_place_image() {
        let m = norm_one();
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![PlaceSpec::new(
                "real",
                PlaceKind::Real,
                SubgroupOfG::full(m.group().clone()),
            )
            .unwrap()],
            vec![],
            None,
        )
        .unwrap();
        // Tate H^{-1} = Z/2 maps onto the full torsion of M_G here.
        let im = problem.local_image(problem.place("real").unwrap()).unwrap();
        assert_eq!(im.canonical_form().invariant_factors, vec![bi(2)]);
    }

    #[test]
    fn side_images_and_tail() {
        let m = norm_one();
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![inert_place(&m, "inert"), split_place(&m, "split")],
            vec!["inert".into(), "split".into()],
            None,
        )
        .unwrap();
        let s = problem.side_image(Side::S).unwrap();
        assert_eq!(s.canonical_form().invariant_factors, vec![bi(2)]);
        // empty complement joins to the trivial subgroup
        assert!(problem.side_image(Side::Complement).unwrap().is_trivial());

        // symbolic tail carrying all cyclic classes contributes Z/2 via
        // the class of the full group
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![split_place(&m, "split")],
            vec![],
            Some(TailSpec::all_cyclic(m.group(), Side::S)),
        )
        .unwrap();
        let s = problem.side_image(Side::S).unwrap();
        assert_eq!(s.canonical_form().invariant_factors, vec![bi(2)]);
    }

    #[test]
    fn norm_one_verdicts() {
        let m = norm_one();
        // S = everything but the split place: not surjective, obstruction Z/2
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![split_place(&m, "split")],
            vec![],
            Some(TailSpec::all_cyclic(m.group(), Side::S)),
        )
        .unwrap();
        let v = problem.verdict().unwrap();
        assert!(!v.surjective);
        assert_eq!(v.obstruction.canonical.invariant_factors, vec![bi(2)]);
        assert_eq!(v.obstruction.generator_lifts.len(), 1);

        // S = everything but the inert place: surjective
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![inert_place(&m, "inert")],
            vec![],
            Some(TailSpec::all_cyclic(m.group(), Side::S)),
        )
        .unwrap();
        let v = problem.verdict().unwrap();
        assert!(v.surjective);
        assert!(v.obstruction.is_trivial());

        // real place with order-2 decomposition in the complement also
        // rescues surjectivity
        let real = PlaceSpec::new(
            "real",
            PlaceKind::Real,
            SubgroupOfG::full(m.group().clone()),
        )
        .unwrap();
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![real],
            vec![],
            Some(TailSpec::all_cyclic(m.group(), Side::S)),
        )
        .unwrap();
        let v = problem.verdict().unwrap();
        assert!(v.surjective);
    }

    #[test]
    fn trivial_action_always_surjective() {
        // M = Z with trivial action: M_G = Z is torsion free, every local
        // image is trivial, so every S works.
        let c2 = FiniteGroup::cyclic(2);
        let m = GModule::with_trivial_action(c2.clone(), FgAbGroup::free(1));
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![inert_place(&m, "v1"), split_place(&m, "v2")],
            vec!["v1".into()],
            None,
        )
        .unwrap();
        let v = problem.verdict().unwrap();
        assert!(v.surjective);
        assert!(v.obstruction.is_trivial());
        assert!(v.im_sigma_s.is_trivial());
    }

    #[test]
    fn v0_sufficiency() {
        // finite module with trivial action: any place at all surjects
        let c2 = FiniteGroup::cyclic(2);
        let m = GModule::with_trivial_action(c2.clone(), FgAbGroup::from_orders(&[bi(3)]));
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![split_place(&m, "v0")],
            vec![],
            None,
        )
        .unwrap();
        assert!(problem.v0_suffices("v0").unwrap());

        let m = norm_one();
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![split_place(&m, "split"), inert_place(&m, "inert")],
            vec![],
            None,
        )
        .unwrap();
        assert!(!problem.v0_suffices("split").unwrap());
        assert!(problem.v0_suffices("inert").unwrap());
        assert!(problem.v0_suffices("nope").is_err());

        // a place in S is rejected
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![split_place(&m, "split")],
            vec!["split".into()],
            None,
        )
        .unwrap();
        assert!(problem.v0_suffices("split").is_err());
    }

    #[test]
    fn semisimple_shortcut() {
        let c2 = FiniteGroup::cyclic(2);
        let m = GModule::new(
            c2.clone(),
            FgAbGroup::from_orders(&[bi(4)]),
            vec![IntMatrix::identity(1), IntMatrix::from_rows_i64(&[&[-1]])],
        )
        .unwrap();
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![split_place(&m, "v0")],
            vec![],
            Some(TailSpec::all_cyclic(m.group(), Side::S)),
        )
        .unwrap();
        assert!(problem.semisimple_case_applies());
        assert!(problem.verdict().unwrap().surjective);

        // infinite carrier: predicate not applicable
        let m = norm_one();
        let problem = LocalizationProblem::new(
            m.clone(),
            vec![split_place(&m, "v0")],
            vec![],
            None,
        )
        .unwrap();
        assert!(!problem.semisimple_case_applies());

        // only a real place in the complement: not applicable
        let m2 = GModule::new(
            FiniteGroup::cyclic(2),
            FgAbGroup::from_orders(&[bi(4)]),
            vec![IntMatrix::identity(1), IntMatrix::from_rows_i64(&[&[-1]])],
        )
        .unwrap();
        let real = PlaceSpec::new(
            "r",
            PlaceKind::Real,
            SubgroupOfG::full(m2.group().clone()),
        )
        .unwrap();
        let problem = LocalizationProblem::new(m2, vec![real], vec![], None).unwrap();
        assert!(!problem.semisimple_case_applies());
    }

    #[test]
    fn problem_validation_errors() {
        let m = norm_one();
        // duplicate ids
        assert!(LocalizationProblem::new(
            m.clone(),
            vec![split_place(&m, "v"), inert_place(&m, "v")],
            vec![],
            None,
        )
        .is_err());
        // S references unknown place
        assert!(LocalizationProblem::new(
            m.clone(),
            vec![split_place(&m, "v")],
            vec!["w".into()],
            None,
        )
        .is_err());
        // decomposition subgroup from a different group
        let other = FiniteGroup::cyclic(4);
        let bad = PlaceSpec::new("x", PlaceKind::Finite, SubgroupOfG::full(other)).unwrap();
        assert!(LocalizationProblem::new(m, vec![bad], vec![], None).is_err());
    }

    #[test]
    fn conjugation_invariance_smoke() {
        // S3 acting on Z^2 by signed permutations through its sign character
        let s3 = FiniteGroup::dihedral(3);
        let neg = IntMatrix::from_rows_i64(&[&[-1, 0], &[0, -1]]);
        let action: Vec<IntMatrix> = s3
            .elements()
            .map(|g| {
                if s3.element_order(g) == 2 {
                    neg.clone()
                } else {
                    IntMatrix::identity(2)
                }
            })
            .collect();
        let m = GModule::new(s3.clone(), FgAbGroup::free(2), action).unwrap();
        let refl = s3.elements().find(|&g| s3.element_order(g) == 2).unwrap();
        let h = SubgroupOfG::cyclic_generated_by(s3.clone(), refl);
        let place = PlaceSpec::new("v", PlaceKind::Finite, h.clone()).unwrap();
        let problem =
            LocalizationProblem::new(m.clone(), vec![place], vec![], None).unwrap();
        let base = problem
            .local_image(problem.place("v").unwrap())
            .unwrap();
        for g in s3.elements() {
            let conj = PlaceSpec::new("v", PlaceKind::Finite, h.conjugate(g)).unwrap();
            let p2 = LocalizationProblem::new(m.clone(), vec![conj], vec![], None).unwrap();
            let im = p2.local_image(p2.place("v").unwrap()).unwrap();
            assert!(im.same_subgroup(&base).unwrap());
        }
    }
}
