//! Finitely generated abelian groups as cokernel presentations.
//!
//! A group is `Z^n / colspan(relations)`. Nothing is ever enumerated:
//! elements are coset representatives reduced against the Hermite form of
//! the relation matrix, subgroups are generator lists with a canonical
//! saturated Hermite basis, and homomorphisms are integer matrices on the
//! ambient lattices checked to descend to the quotients. This uniform
//! treatment is what lets the same code handle `Z`, finite groups, and
//! mixed cases without special paths.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{
    column_hermite, kernel_basis, smith_normal_form, HermiteForm, IntMatrix, SmithNormalForm,
};

/// Invariant-factor description: `Z^free_rank + sum_i Z/d_i` with
/// `d_1 | d_2 | ...` and every `d_i >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl CanonicalForm {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.invariant_factors.iter().product())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<alloc::string::String> = Vec::new();
        for _ in 0..self.free_rank {
            parts.push("Z".into());
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{}", d));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

struct GroupData {
    ambient_rank: usize,
    relations: IntMatrix,
    hermite: HermiteForm,
    smith: SmithNormalForm,
    canonical: CanonicalForm,
    /// Row indices of `D` carrying a diagonal entry `> 1`.
    torsion_positions: Vec<usize>,
    /// Row indices of `D` past the rank (free directions).
    free_positions: Vec<usize>,
}

/// A finitely generated abelian group `Z^n / colspan(relations)`.
///
/// Cheap to clone (shared presentation data). Two values compare equal iff
/// they have the same ambient rank and the same relation span, i.e. they
/// are literally the same quotient, not merely isomorphic.
#[derive(Clone)]
pub struct FgAbGroup {
    data: Arc<GroupData>,
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.data.ambient_rank == other.data.ambient_rank
                && self.data.hermite == other.data.hermite)
    }
}

impl Eq for FgAbGroup {}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FgAbGroup(Z^{} / {} relations, {})",
            self.data.ambient_rank,
            self.data.relations.cols(),
            self.data.canonical
        )
    }
}

impl FgAbGroup {
    pub fn new(ambient_rank: usize, relations: IntMatrix) -> Self {
        assert_eq!(
            relations.rows(),
            ambient_rank,
            "relation matrix must have one row per ambient generator"
        );
        let hermite = column_hermite(&relations);
        let smith = smith_normal_form(&relations);
        let mut invariant_factors = Vec::new();
        let mut torsion_positions = Vec::new();
        for i in 0..smith.rank {
            let d = smith.d[(i, i)].clone();
            if !d.is_one() {
                invariant_factors.push(d);
                torsion_positions.push(i);
            }
        }
        let free_positions: Vec<usize> = (smith.rank..ambient_rank).collect();
        let canonical = CanonicalForm {
            free_rank: free_positions.len(),
            invariant_factors,
        };
        FgAbGroup {
            data: Arc::new(GroupData {
                ambient_rank,
                relations,
                hermite,
                smith,
                canonical,
                torsion_positions,
                free_positions,
            }),
        }
    }

    /// The free group `Z^n`.
    pub fn free(n: usize) -> Self {
        Self::new(n, IntMatrix::zero(n, 0))
    }

    /// The zero group.
    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `Z/d1 + Z/d2 + ...` presented on the obvious diagonal relations.
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let rel = IntMatrix::from_fn(n, n, |i, j| {
            if i == j {
                orders[i].clone()
            } else {
                BigInt::zero()
            }
        });
        Self::new(n, rel)
    }

    pub fn ambient_rank(&self) -> usize {
        self.data.ambient_rank
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.data.relations
    }

    pub fn relation_span(&self) -> &HermiteForm {
        &self.data.hermite
    }

    pub fn canonical_form(&self) -> &CanonicalForm {
        &self.data.canonical
    }

    pub fn order(&self) -> Option<BigInt> {
        self.data.canonical.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.data.canonical.is_trivial()
    }

    /// The retained change of basis: `u * relations * v` is diagonal, and
    /// `u_inv` carries canonical coordinates back to the ambient lattice.
    pub fn smith_witness(&self) -> &SmithNormalForm {
        &self.data.smith
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Element {
        assert_eq!(coords.len(), self.data.ambient_rank, "coordinate length");
        Element {
            parent: self.clone(),
            coords: self.data.hermite.reduce(&coords),
        }
    }

    pub fn element_i64(&self, coords: &[i64]) -> Element {
        self.element(coords.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(&self) -> Element {
        self.element(vec![BigInt::zero(); self.data.ambient_rank])
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut v = vec![BigInt::zero(); self.data.ambient_rank];
        v[i] = BigInt::one();
        self.element(v)
    }

    /// The order of the coset of `coords`, or `None` for infinite order.
    pub fn element_order(&self, coords: &[BigInt]) -> Option<BigInt> {
        let y = self.data.smith.u.mul_vec(coords);
        for &i in &self.data.free_positions {
            if !y[i].is_zero() {
                return None;
            }
        }
        let mut n = BigInt::one();
        for i in 0..self.data.smith.rank {
            let d = &self.data.smith.d[(i, i)];
            let g = d.gcd(&y[i]);
            n = n.lcm(&(d / g));
        }
        Some(n)
    }

    /// Coordinates of a torsion class with respect to the canonical torsion
    /// generators, reduced modulo the invariant factors. `None` when the
    /// class has infinite order.
    pub fn torsion_coordinates(&self, coords: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.data.smith.u.mul_vec(coords);
        for &i in &self.data.free_positions {
            if !y[i].is_zero() {
                return None;
            }
        }
        Some(
            self.data
                .torsion_positions
                .iter()
                .enumerate()
                .map(|(k, &i)| y[i].mod_floor(&self.data.canonical.invariant_factors[k]))
                .collect(),
        )
    }

    /// Ambient vectors generating the torsion subgroup, one per invariant
    /// factor, in chain order. Columns of the returned matrix.
    pub fn torsion_generator_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self
            .data
            .torsion_positions
            .iter()
            .map(|&i| self.data.smith.u_inv.column(i))
            .collect();
        IntMatrix::from_columns(self.data.ambient_rank, &cols)
    }

    pub fn torsion_subgroup(&self) -> Subgroup {
        let gens = self
            .torsion_generator_matrix()
            .columns()
            .map(|c| self.element(c))
            .collect();
        Subgroup::new(self.clone(), gens)
    }

    /// The torsion-free quotient together with the projection.
    pub fn tf_quotient(&self) -> (FgAbGroup, Homomorphism) {
        let tors = self.torsion_generator_matrix();
        let rel = IntMatrix::hstack(&[&self.data.relations, &tors]);
        let q = FgAbGroup::new(self.data.ambient_rank, rel);
        let proj = Homomorphism::new(
            self.clone(),
            q.clone(),
            IntMatrix::identity(self.data.ambient_rank),
        )
        .expect("projection is well defined");
        (q, proj)
    }

    pub fn tf_rank(&self) -> usize {
        self.data.canonical.free_rank
    }

    /// `r x n` matrix of torsion-free coordinates: the rows of `u` at the
    /// free positions. Kills torsion classes exactly.
    pub fn tf_coordinate_matrix(&self) -> IntMatrix {
        let rows: Vec<usize> = self.data.free_positions.clone();
        IntMatrix::from_fn(rows.len(), self.data.ambient_rank, |i, j| {
            self.data.smith.u[(rows[i], j)].clone()
        })
    }

    /// `n x r` matrix whose columns lift the torsion-free basis back to the
    /// ambient lattice; `tf_coordinate_matrix * tf_basis_lifts = identity`.
    pub fn tf_basis_lifts(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self
            .data
            .free_positions
            .iter()
            .map(|&i| self.data.smith.u_inv.column(i))
            .collect();
        IntMatrix::from_columns(self.data.ambient_rank, &cols)
    }

    pub fn subgroup_from_vectors(&self, vectors: &[Vec<BigInt>]) -> Subgroup {
        let gens = vectors.iter().map(|v| self.element(v.clone())).collect();
        Subgroup::new(self.clone(), gens)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::new(self.clone(), Vec::new())
    }

    pub fn full_subgroup(&self) -> Subgroup {
        let gens = (0..self.data.ambient_rank)
            .map(|i| self.basis_element(i))
            .collect();
        Subgroup::new(self.clone(), gens)
    }

    /// The quotient by a subgroup, with the projection. The subgroup's
    /// saturated basis becomes the relation matrix, so equal subgroups
    /// produce identical presentations.
    pub fn quotient(&self, sub: &Subgroup) -> Result<(FgAbGroup, Homomorphism)> {
        if sub.parent() != self {
            return Err(Error::MismatchedParents);
        }
        let q = FgAbGroup::new(self.data.ambient_rank, sub.saturated().h.clone());
        let proj = Homomorphism::new(
            self.clone(),
            q.clone(),
            IntMatrix::identity(self.data.ambient_rank),
        )?;
        Ok((q, proj))
    }
}

/// A coset representative, stored in canonical reduced form, tied to its
/// parent group.
#[derive(Clone)]
pub struct Element {
    parent: FgAbGroup,
    coords: Vec<BigInt>,
}

impl Element {
    pub fn parent(&self) -> &FgAbGroup {
        &self.parent
    }

    /// Canonical representative of the coset.
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        if self.parent != other.parent {
            return Err(Error::MismatchedParents);
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(self.parent.element(coords))
    }

    pub fn neg(&self) -> Element {
        self.parent
            .element(self.coords.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Element {
        self.parent
            .element(self.coords.iter().map(|x| x * c).collect())
    }

    pub fn order(&self) -> Option<BigInt> {
        self.parent.element_order(&self.coords)
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.coords == other.coords
    }
}

impl Eq for Element {}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    // Coordinate order; callers only ever collect elements of one parent.
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "]")
    }
}

/// A subgroup given by finitely many generators.
///
/// The canonical *saturated* basis is the Hermite form of
/// `[generators | parent relations]`; as a lattice it is the full preimage
/// of the subgroup in the ambient `Z^n`, so two generator lists describe
/// the same subgroup iff their saturated bases are identical.
#[derive(Clone)]
pub struct Subgroup {
    parent: FgAbGroup,
    generators: Vec<Element>,
    saturated: HermiteForm,
}

impl Subgroup {
    pub fn new(parent: FgAbGroup, generators: Vec<Element>) -> Self {
        for g in &generators {
            assert!(
                g.parent() == &parent,
                "generator does not belong to the parent group"
            );
        }
        let gen_cols: Vec<Vec<BigInt>> =
            generators.iter().map(|g| g.coords().to_vec()).collect();
        let gen_mat = IntMatrix::from_columns(parent.ambient_rank(), &gen_cols);
        let stacked = IntMatrix::hstack(&[&gen_mat, parent.relations()]);
        let saturated = column_hermite(&stacked);
        Subgroup {
            parent,
            generators,
            saturated,
        }
    }

    pub fn parent(&self) -> &FgAbGroup {
        &self.parent
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn generator_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self
            .generators
            .iter()
            .map(|g| g.coords().to_vec())
            .collect();
        IntMatrix::from_columns(self.parent.ambient_rank(), &cols)
    }

    pub fn saturated(&self) -> &HermiteForm {
        &self.saturated
    }

    pub fn contains_element(&self, el: &Element) -> Result<bool> {
        if el.parent() != &self.parent {
            return Err(Error::MismatchedParents);
        }
        Ok(self.saturated.contains(el.coords()))
    }

    /// Does this subgroup contain `other`?
    pub fn contains(&self, other: &Subgroup) -> Result<bool> {
        if self.parent != other.parent {
            return Err(Error::MismatchedParents);
        }
        Ok(other
            .generators
            .iter()
            .all(|g| self.saturated.contains(g.coords())))
    }

    pub fn same_subgroup(&self, other: &Subgroup) -> Result<bool> {
        if self.parent != other.parent {
            return Err(Error::MismatchedParents);
        }
        Ok(self.saturated == other.saturated)
    }

    pub fn is_trivial(&self) -> bool {
        self.saturated == *self.parent.relation_span()
    }

    pub fn is_full(&self) -> bool {
        (0..self.parent.ambient_rank()).all(|i| {
            let mut v = vec![BigInt::zero(); self.parent.ambient_rank()];
            v[i] = BigInt::one();
            self.saturated.contains(&v)
        })
    }

    pub fn join(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.parent != other.parent {
            return Err(Error::MismatchedParents);
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(Subgroup::new(self.parent.clone(), gens))
    }

    /// Lattice intersection via the kernel of the concatenated generator
    /// map.
    pub fn intersect(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.parent != other.parent {
            return Err(Error::MismatchedParents);
        }
        let a = &self.saturated.h;
        let b = &other.saturated.h;
        let stacked = IntMatrix::hstack(&[a, &b.neg()]);
        let ker = kernel_basis(&stacked);
        let mut gens = Vec::new();
        for col in ker.columns() {
            let x: Vec<BigInt> = col[..a.cols()].to_vec();
            gens.push(self.parent.element(a.mul_vec(&x)));
        }
        Ok(Subgroup::new(self.parent.clone(), gens))
    }

    /// An abstract presentation of this subgroup together with the
    /// inclusion-induced map back into the parent. The presentation has one
    /// ambient generator per stored generator.
    pub fn presented(&self) -> (FgAbGroup, Homomorphism) {
        let gen_mat = self.generator_matrix();
        let stacked = IntMatrix::hstack(&[&gen_mat, self.parent.relations()]);
        let ker = kernel_basis(&stacked);
        let s = gen_mat.cols();
        let rel_cols: Vec<Vec<BigInt>> = ker.columns().map(|c| c[..s].to_vec()).collect();
        let abstract_group = FgAbGroup::new(s, IntMatrix::from_columns(s, &rel_cols));
        let incl = Homomorphism::new(abstract_group.clone(), self.parent.clone(), gen_mat)
            .expect("inclusion is well defined by construction");
        (abstract_group, incl)
    }

    /// Canonical form of the subgroup as an abstract group.
    pub fn canonical_form(&self) -> CanonicalForm {
        self.presented().0.canonical_form().clone()
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subgroup({} generators of {:?})",
            self.generators.len(),
            self.parent
        )
    }
}

/// A homomorphism of presented groups, carried by a matrix on the ambient
/// lattices and validated to descend to the quotients.
#[derive(Clone)]
pub struct Homomorphism {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl Homomorphism {
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != target.ambient_rank() || matrix.cols() != source.ambient_rank() {
            return Err(Error::Dimension(format!(
                "homomorphism matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.ambient_rank(),
                source.ambient_rank()
            )));
        }
        for (j, col) in source.relations().columns().enumerate() {
            if !target.relation_span().contains(&matrix.mul_vec(&col)) {
                return Err(Error::NotWellDefined { column: j });
            }
        }
        Ok(Homomorphism {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        Homomorphism {
            source: g.clone(),
            target: g.clone(),
            matrix: IntMatrix::identity(g.ambient_rank()),
        }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, el: &Element) -> Result<Element> {
        if el.parent() != &self.source {
            return Err(Error::MismatchedParents);
        }
        Ok(self.target.element(self.matrix.mul_vec(el.coords())))
    }

    /// `self . other` (apply `other` first).
    pub fn compose(&self, other: &Homomorphism) -> Result<Homomorphism> {
        if other.target != self.source {
            return Err(Error::MismatchedParents);
        }
        Ok(Homomorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }

    pub fn image(&self) -> Subgroup {
        let gens = self
            .matrix
            .columns()
            .map(|c| self.target.element(c))
            .collect();
        Subgroup::new(self.target.clone(), gens)
    }

    /// The full preimage of zero: generators of `{ x : M x in relspan }`.
    pub fn kernel(&self) -> Subgroup {
        let stacked = IntMatrix::hstack(&[&self.matrix, self.target.relations()]);
        let ker = kernel_basis(&stacked);
        let n = self.source.ambient_rank();
        let gens: Vec<Element> = ker
            .columns()
            .map(|c| self.source.element(c[..n].to_vec()))
            .collect();
        Subgroup::new(self.source.clone(), gens)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.image().is_full()
    }

    /// Image of a subgroup of the source.
    pub fn image_of(&self, sub: &Subgroup) -> Result<Subgroup> {
        if sub.parent() != &self.source {
            return Err(Error::MismatchedParents);
        }
        let gens: Result<Vec<Element>> = sub.generators().iter().map(|g| self.apply(g)).collect();
        Ok(Subgroup::new(self.target.clone(), gens?))
    }
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Homomorphism({:?} -> {:?})", self.source, self.target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use proptest::prelude::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn cf(free: usize, factors: &[i64]) -> CanonicalForm {
        CanonicalForm {
            free_rank: free,
            invariant_factors: factors.iter().map(|&d| bi(d)).collect(),
        }
    }

    /// Brute-force coset enumeration by closure under the ambient basis
    /// vectors; independent of the Smith-form route.
    fn enumerate_by_closure(g: &FgAbGroup) -> BTreeSet<Vec<BigInt>> {
        let n = g.ambient_rank();
        let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        let mut stack = vec![g.zero().coords().to_vec()];
        while let Some(v) = stack.pop() {
            if !seen.insert(v.clone()) {
                continue;
            }
            assert!(seen.len() <= 4096, "group too large for enumeration");
            for i in 0..n {
                for delta in [1i64, -1] {
                    let mut w = v.clone();
                    w[i] += bi(delta);
                    stack.push(g.element(w).coords().to_vec());
                }
            }
        }
        seen
    }

    fn enumerate_subgroup(s: &Subgroup) -> BTreeSet<Vec<BigInt>> {
        let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        let mut stack = vec![s.parent().zero()];
        while let Some(v) = stack.pop() {
            if !seen.insert(v.coords().to_vec()) {
                continue;
            }
            assert!(seen.len() <= 4096, "subgroup too large for enumeration");
            for g in s.generators() {
                stack.push(v.add(g).unwrap());
                stack.push(v.add(&g.neg()).unwrap());
            }
        }
        seen
    }

    #[test]
    fn canonicalize_examples() {
        // Z^2 / <(2,0)>
        let g = FgAbGroup::new(2, IntMatrix::from_rows_i64(&[&[2], &[0]]));
        assert_eq!(g.canonical_form(), &cf(1, &[2]));
        // Z with no relations
        let g = FgAbGroup::free(1);
        assert_eq!(g.canonical_form(), &cf(1, &[]));
        // Z / <1> is trivial
        let g = FgAbGroup::new(1, IntMatrix::from_rows_i64(&[&[1]]));
        assert_eq!(g.canonical_form(), &cf(0, &[]));
        assert!(g.is_trivial());
    }

    #[test]
    fn torsion_and_tf_split() {
        // Z + Z/2
        let g = FgAbGroup::new(2, IntMatrix::from_rows_i64(&[&[0], &[2]]));
        let t = g.torsion_subgroup();
        assert_eq!(t.canonical_form(), cf(0, &[2]));
        let (tf, proj) = g.tf_quotient();
        assert_eq!(tf.canonical_form(), &cf(1, &[]));
        for gen in t.generators() {
            assert!(proj.apply(gen).unwrap().is_zero());
        }

        // finite group: torsion = everything, t.f. trivial
        let g = FgAbGroup::from_orders(&[bi(2), bi(4)]);
        assert!(g.torsion_subgroup().is_full());
        assert!(g.tf_quotient().0.is_trivial());

        // Z^2 / <2e1 - 2e2>: torsion Z/2 generated by e1 - e2, t.f. Z
        let g = FgAbGroup::new(2, IntMatrix::from_rows_i64(&[&[2], &[-2]]));
        assert_eq!(g.canonical_form(), &cf(1, &[2]));
        let t = g.torsion_subgroup();
        assert!(t.contains_element(&g.element_i64(&[1, -1])).unwrap());
        assert_eq!(t.canonical_form(), cf(0, &[2]));
        assert_eq!(g.tf_quotient().0.canonical_form(), &cf(1, &[]));
    }

    #[test]
    fn cyclic_lattice_arithmetic() {
        let z = FgAbGroup::free(1);
        let h = z.subgroup_from_vectors(&[vec![bi(2)]]);
        let k = z.subgroup_from_vectors(&[vec![bi(4)]]);
        assert!(h.contains(&k).unwrap());
        assert!(!k.contains(&h).unwrap());
        assert!(h.intersect(&k).unwrap().same_subgroup(&k).unwrap());
        assert!(h.join(&k).unwrap().same_subgroup(&h).unwrap());
    }

    #[test]
    fn subgroup_idempotence() {
        let g = FgAbGroup::from_orders(&[bi(4), bi(8)]);
        let h = g.subgroup_from_vectors(&[vec![bi(2), bi(2)]]);
        let k = g.subgroup_from_vectors(&[vec![bi(2), bi(2)], vec![bi(0), bi(8)]]);
        assert!(h.same_subgroup(&k).unwrap());
        assert!(h.contains(&k).unwrap() && k.contains(&h).unwrap());
        assert!(h.intersect(&h).unwrap().same_subgroup(&h).unwrap());
        assert!(h.join(&h).unwrap().same_subgroup(&h).unwrap());
    }

    #[test]
    fn klein_four_subgroups() {
        let g = FgAbGroup::from_orders(&[bi(2), bi(2)]);
        let h = g.subgroup_from_vectors(&[vec![bi(1), bi(0)]]);
        let k = g.subgroup_from_vectors(&[vec![bi(1), bi(1)]]);
        let meet = h.intersect(&k).unwrap();
        assert!(meet.is_trivial());
        let join = h.join(&k).unwrap();
        assert!(join.is_full());
        // cross-check with 4-element enumeration
        let eh = enumerate_subgroup(&h);
        let ek = enumerate_subgroup(&k);
        let inter: BTreeSet<_> = eh.intersection(&ek).cloned().collect();
        assert_eq!(inter.len(), 1);
        assert_eq!(enumerate_subgroup(&join).len(), 4);
    }

    #[test]
    fn mismatched_parents_rejected() {
        let a = FgAbGroup::free(1);
        let b = FgAbGroup::from_orders(&[bi(2)]);
        let ha = a.subgroup_from_vectors(&[vec![bi(2)]]);
        let hb = b.subgroup_from_vectors(&[vec![bi(1)]]);
        assert_eq!(ha.contains(&hb), Err(Error::MismatchedParents));
        assert!(ha.intersect(&hb).is_err());
        assert!(ha.join(&hb).is_err());
        assert!(a.quotient(&hb).is_err());
    }

    #[test]
    fn quotient_mod_torsion_is_torsion_free() {
        let g = FgAbGroup::new(3, IntMatrix::from_rows_i64(&[&[2, 0], &[0, 6], &[0, 0]]));
        let (q, _) = g.quotient(&g.torsion_subgroup()).unwrap();
        assert!(q.canonical_form().invariant_factors.is_empty());
        assert_eq!(q.tf_rank(), 1);
    }

    #[test]
    fn hom_validation_and_kernel_image() {
        let z = FgAbGroup::free(1);
        let z2 = FgAbGroup::from_orders(&[bi(2)]);
        // Z -> Z/2 reduction
        let red = Homomorphism::new(z.clone(), z2.clone(), IntMatrix::identity(1)).unwrap();
        assert!(red.is_surjective());
        assert!(!red.is_injective());
        let ker = red.kernel();
        assert!(ker.contains_element(&z.element_i64(&[2])).unwrap());
        assert!(!ker.contains_element(&z.element_i64(&[1])).unwrap());
        // Z/2 -> Z cannot be carried by the identity matrix: 2*e1 must land
        // in the (empty) relation span of Z.
        assert!(matches!(
            Homomorphism::new(z2, z, IntMatrix::identity(1)),
            Err(Error::NotWellDefined { column: 0 })
        ));
    }

    #[test]
    fn presented_subgroup_matches_enumeration() {
        let g = FgAbGroup::from_orders(&[bi(4), bi(4)]);
        let s = g.subgroup_from_vectors(&[vec![bi(2), bi(0)], vec![bi(0), bi(2)]]);
        let (abs, incl) = s.presented();
        assert_eq!(abs.canonical_form(), &cf(0, &[2, 2]));
        assert_eq!(enumerate_subgroup(&s).len(), 4);
        assert!(incl.is_injective());
    }

    fn arb_relations(n: usize, cols: usize, max_abs: i64) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-max_abs..=max_abs, n * cols)
            .prop_map(move |vals| IntMatrix::from_fn(n, cols, |i, j| bi(vals[i * cols + j])))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Presentation invariance: an ambient unimodular change of basis
        /// leaves the canonical form unchanged.
        #[test]
        fn canonical_form_is_presentation_invariant(
            rel in arb_relations(3, 3, 6),
            shears in proptest::collection::vec((0usize..3, 0usize..3, -2i64..=2), 4),
        ) {
            let g = FgAbGroup::new(3, rel.clone());
            let mut u = IntMatrix::identity(3);
            for (i, j, c) in &shears {
                if i != j {
                    let mut e = IntMatrix::identity(3);
                    e[(*i, *j)] = bi(*c);
                    u = u.mul(&e).unwrap();
                }
            }
            let rel2 = u.mul(&rel).unwrap();
            let g2 = FgAbGroup::new(3, rel2);
            prop_assert_eq!(g.canonical_form(), g2.canonical_form());
        }

        /// Mutual containment is exactly equality of saturated bases.
        #[test]
        fn containment_both_ways_is_equality(
            rel in arb_relations(3, 2, 4),
            va in proptest::collection::vec(-5i64..=5, 6),
            vb in proptest::collection::vec(-5i64..=5, 6),
        ) {
            let g = FgAbGroup::new(3, rel);
            let h = g.subgroup_from_vectors(&[
                va[0..3].iter().map(|&x| bi(x)).collect(),
                va[3..6].iter().map(|&x| bi(x)).collect(),
            ]);
            let k = g.subgroup_from_vectors(&[
                vb[0..3].iter().map(|&x| bi(x)).collect(),
                vb[3..6].iter().map(|&x| bi(x)).collect(),
            ]);
            let both = h.contains(&k).unwrap() && k.contains(&h).unwrap();
            prop_assert_eq!(both, h.same_subgroup(&k).unwrap());
        }

        /// |G| from invariant factors agrees with brute-force coset
        /// enumeration on small finite groups.
        #[test]
        fn order_matches_enumeration(diag in proptest::collection::vec(1i64..=4, 1..=3)) {
            let orders: Vec<BigInt> = diag.iter().map(|&d| bi(d)).collect();
            let g = FgAbGroup::from_orders(&orders);
            let expected: BigInt = orders.iter().product();
            if expected <= bi(64) {
                prop_assert_eq!(g.order().unwrap(), bi(enumerate_by_closure(&g).len() as i64));
            }
        }

        #[test]
        fn element_order_divides_group_order(
            diag in proptest::collection::vec(1i64..=6, 1..=3),
            v in proptest::collection::vec(-9i64..=9, 3),
        ) {
            let orders: Vec<BigInt> = diag.iter().map(|&d| bi(d)).collect();
            let g = FgAbGroup::from_orders(&orders);
            let el = g.element(v.iter().take(orders.len()).map(|&x| bi(x)).collect());
            let o = el.order().unwrap();
            let total: BigInt = orders.iter().product();
            prop_assert!(total.mod_floor(&o).is_zero());
            prop_assert!(el.scale(&o).is_zero());
        }
    }
}
