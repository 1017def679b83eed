//! Exact character tables. Irreducible characters are found by splitting the
//! common eigenspaces of the class-sum multiplication matrices over GF(p),
//! then lifted to exact cyclotomic values: for each class the value is the
//! eigenvalue multiset of a representing matrix, recovered by discrete
//! Fourier inversion over the power map of the class representative.

use std::sync::Arc;

use serde::Serialize;

use crate::cyclotomic;
use crate::error::{Error, Result};
use crate::group::{Group, Subgroup};
use crate::modp::{self, Fp, MatFp};

/// An exact class function: per conjugacy class an integer vector m with the
/// value Σⱼ m\[j\]·ζₑʲ (e the group exponent), plus its image in GF(p).
#[derive(Clone)]
pub struct ClassFunction {
    group: Arc<Group>,
    fp: Fp,
    root: u64,
    mult: Vec<Vec<i64>>,
    modular: Vec<u64>,
    degree: i64,
}

impl std::fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ClassFunction")
            .field("group", &self.group.name())
            .field("degree", &self.degree)
            .field("modular", &self.modular)
            .finish()
    }
}

impl PartialEq for ClassFunction {
    /// Equality of class functions is equality of modular images; the
    /// multiplicity basis is not independent, so vectors of non-irreducible
    /// values are not canonical.
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.group, &other.group)
            && self.fp == other.fp
            && self.modular == other.modular
    }
}
impl Eq for ClassFunction {}

impl ClassFunction {
    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_linear(&self) -> bool {
        self.degree == 1
    }

    pub fn field(&self) -> Fp {
        self.fp
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    /// Multiplicity vector at a class (length = group exponent).
    pub fn multiplicities(&self, class: usize) -> &[i64] {
        &self.mult[class]
    }

    pub fn modular_values(&self) -> &[u64] {
        &self.modular
    }

    pub fn modular_at_class(&self, class: usize) -> u64 {
        self.modular[class]
    }

    pub fn modular_at_element(&self, elem: usize) -> u64 {
        self.modular[self.group.class_of(elem)]
    }

    fn check_same_group(&self, other: &ClassFunction) -> Result<()> {
        if !Arc::ptr_eq(&self.group, &other.group) || self.fp != other.fp {
            return Err(Error::MismatchedGroups);
        }
        Ok(())
    }

    /// Inner product (1/|G|) Σ f(g)·conj(g(g)), computed in GF(p) and lifted
    /// to the least nonnegative residue. Exact for characters, whose true
    /// inner products lie below p.
    pub fn inner_product(&self, other: &ClassFunction) -> Result<u64> {
        self.check_same_group(other)?;
        let fp = self.fp;
        let g = &self.group;
        let mut acc = 0u64;
        for (c, cls) in g.classes().iter().enumerate() {
            let conj = other.modular[g.inverse_class(c)];
            acc = fp.add(acc, fp.mul(cls.size() as u64, fp.mul(self.modular[c], conj)));
        }
        Ok(fp.mul(acc, fp.inv(g.order() as u64)))
    }

    /// Complex conjugate: reflects every multiplicity vector (j ↦ −j mod e)
    /// and re-evaluates the modular images.
    pub fn conjugate(&self) -> ClassFunction {
        let mult: Vec<Vec<i64>> = self.mult.iter().map(|m| cyclotomic::reflect(m)).collect();
        let modular: Vec<u64> = mult
            .iter()
            .map(|m| cyclotomic::eval_mod(m, self.root, self.fp))
            .collect();
        ClassFunction {
            group: self.group.clone(),
            fp: self.fp,
            root: self.root,
            mult,
            modular,
            degree: self.degree,
        }
    }

    /// Pointwise product: cyclic convolution of multiplicity vectors and
    /// modular multiplication.
    pub fn product(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.check_same_group(other)?;
        let mult: Vec<Vec<i64>> = self
            .mult
            .iter()
            .zip(&other.mult)
            .map(|(a, b)| cyclotomic::convolve(a, b))
            .collect();
        let modular: Vec<u64> = self
            .modular
            .iter()
            .zip(&other.modular)
            .map(|(&a, &b)| self.fp.mul(a, b))
            .collect();
        Ok(ClassFunction {
            group: self.group.clone(),
            fp: self.fp,
            root: self.root,
            mult,
            modular,
            degree: self.degree * other.degree,
        })
    }

    /// Kernel {g : f(g) = f(1)}: the union of classes whose eigenvalue
    /// multiset is concentrated at 1. Valid for characters carried with
    /// canonical eigenvalue multisets (irreducibles and their products).
    pub fn kernel(&self) -> Subgroup {
        debug_assert!(self.mult.iter().all(|m| m.iter().all(|&x| x >= 0)));
        let g = &self.group;
        let mut indices = Vec::new();
        for (c, cls) in g.classes().iter().enumerate() {
            if self.mult[c][0] == self.degree {
                indices.extend(cls.members.iter().copied());
            }
        }
        let members = crate::group::ElemSet::from_indices(g.order(), indices);
        Subgroup::from_closed_members(g, members)
    }

    /// Consistency of the two representations: each multiplicity vector must
    /// re-evaluate to the stored modular image.
    pub fn lift_consistent(&self) -> bool {
        self.mult
            .iter()
            .zip(&self.modular)
            .all(|(m, &v)| cyclotomic::eval_mod(m, self.root, self.fp) == v)
    }
}

/// Decomposition of a character into distinct irreducible constituents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Pairs (index into the table, multiplicity ≥ 1), ascending by index.
    pub constituents: Vec<(usize, u64)>,
    /// Number of distinct constituents.
    pub eta: usize,
}

impl Decomposition {
    pub fn multiplicity_of(&self, index: usize) -> u64 {
        self.constituents
            .iter()
            .find(|&&(i, _)| i == index)
            .map(|&(_, a)| a)
            .unwrap_or(0)
    }

    pub fn contains(&self, index: usize) -> bool {
        self.multiplicity_of(index) > 0
    }
}

/// The full set of irreducible characters of a group, in canonical order:
/// ascending degree, ties broken lexicographically by modular images.
pub struct CharacterTable {
    group: Arc<Group>,
    fp: Fp,
    root: u64,
    irreducibles: Vec<ClassFunction>,
}

impl std::fmt::Debug for CharacterTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CharacterTable")
            .field("group", &self.group.name())
            .field("prime", &self.fp.p)
            .field("irreducibles", &self.irreducibles.len())
            .finish()
    }
}

impl CharacterTable {
    /// Computes the table in the smallest admissible field: p the least
    /// prime with p ≡ 1 (mod exponent) and p > 2|G|.
    pub fn build(group: &Arc<Group>) -> Result<CharacterTable> {
        let e = group.exponent();
        let mut floor = 2 * group.order() as u64;
        let mut last_err = None;
        for _ in 0..4 {
            let (p, z) = modp::find_field(e, floor);
            match Self::build_in_field(group, p, z) {
                Ok(table) => return Ok(table),
                Err(Error::Internal(msg)) => {
                    last_err = Some(Error::Internal(msg));
                    floor = p;
                }
                Err(other) => return Err(other),
            }
        }
        Err(last_err.unwrap_or_else(|| Error::Internal("no admissible prime worked".into())))
    }

    /// Computes the table over a caller-chosen field. `root` must have
    /// multiplicative order equal to the group exponent mod `prime`; this is
    /// how subgroup tables are kept consistent with a parent table's field.
    pub fn build_in_field(group: &Arc<Group>, prime: u64, root: u64) -> Result<CharacterTable> {
        let fp = Fp::new(prime);
        let e = group.exponent();
        let n = group.order() as u64;
        if prime <= 2 * n {
            return Err(Error::InvalidInput(format!(
                "prime {prime} is not above 2·|G| = {}",
                2 * n
            )));
        }
        let root_order = {
            let mut ord = 1usize;
            let mut acc = root % prime;
            while acc != 1 && ord <= e {
                acc = fp.mul(acc, root);
                ord += 1;
            }
            ord
        };
        if root_order != e {
            return Err(Error::InvalidInput(format!(
                "root {root} does not have order {e} mod {prime}"
            )));
        }

        let k = group.class_count();
        let eigvecs = split_eigenvectors(group, fp)?;
        debug_assert_eq!(eigvecs.len(), k);

        let class_sizes: Vec<u64> = group.classes().iter().map(|c| c.size() as u64).collect();
        let inv_class: Vec<usize> = (0..k).map(|c| group.inverse_class(c)).collect();

        let mut irreducibles = Vec::with_capacity(k);
        for mut w in eigvecs {
            // normalize at the identity class
            if w[0] == 0 {
                return Err(Error::Internal(
                    "eigenvector vanishes at the identity class".into(),
                ));
            }
            let winv = fp.inv(w[0]);
            for v in w.iter_mut() {
                *v = fp.mul(*v, winv);
            }
            // degree from first orthogonality: d² = |G| / Σ w_l w_{l'} / |C_l|
            let mut s = 0u64;
            for l in 0..k {
                let term = fp.mul(w[l], w[inv_class[l]]);
                s = fp.add(s, fp.mul(term, fp.inv(class_sizes[l])));
            }
            if s == 0 {
                return Err(Error::Internal("degenerate eigenvector norm".into()));
            }
            let d2 = fp.mul(n, fp.inv(s));
            let degree = (1..=(prime - 1) / 2)
                .find(|&d| fp.mul(d, d) == d2)
                .ok_or_else(|| Error::Internal("no square root for the degree".into()))?;
            // modular character values
            let values: Vec<u64> = (0..k)
                .map(|c| fp.mul(degree, fp.mul(w[c], fp.inv(class_sizes[c]))))
                .collect();
            let cf = lift_character(group, fp, root, degree, &values)?;
            irreducibles.push(cf);
        }

        irreducibles.sort_by(|a, b| {
            a.degree
                .cmp(&b.degree)
                .then_with(|| a.modular.cmp(&b.modular))
        });

        let table = CharacterTable {
            group: group.clone(),
            fp,
            root,
            irreducibles,
        };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        let n = self.group.order() as i64;
        let sum_sq: i64 = self.irreducibles.iter().map(|f| f.degree * f.degree).sum();
        if sum_sq != n {
            return Err(Error::Internal(format!(
                "degree sum of squares {sum_sq} does not match group order {n}"
            )));
        }
        for (i, a) in self.irreducibles.iter().enumerate() {
            for (j, b) in self.irreducibles.iter().enumerate() {
                let ip = a.inner_product(b)?;
                if ip != u64::from(i == j) {
                    return Err(Error::Internal(format!(
                        "row orthogonality fails at ({i}, {j}): got {ip}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn prime(&self) -> u64 {
        self.fp.p
    }

    pub fn field(&self) -> Fp {
        self.fp
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreducibles.is_empty()
    }

    pub fn character(&self, i: usize) -> &ClassFunction {
        &self.irreducibles[i]
    }

    /// Index of the principal character.
    pub fn principal_index(&self) -> usize {
        self.irreducibles
            .iter()
            .position(|f| f.degree == 1 && f.modular.iter().all(|&v| v == 1))
            .expect("every table contains the principal character")
    }

    /// Index of the complex conjugate of character `i`.
    pub fn conjugate_index(&self, i: usize) -> usize {
        let conj = self.irreducibles[i].conjugate();
        self.index_of(&conj)
            .expect("tables are closed under complex conjugation")
    }

    /// Index of a class function among the irreducibles, by modular image.
    pub fn index_of(&self, f: &ClassFunction) -> Option<usize> {
        self.irreducibles.iter().position(|g| g == f)
    }

    /// Decomposes a character into irreducible constituents, verifying the
    /// reconstruction exactly on modular images.
    pub fn decompose(&self, f: &ClassFunction) -> Result<Decomposition> {
        if !Arc::ptr_eq(&self.group, &f.group) || self.fp != f.fp {
            return Err(Error::MismatchedGroups);
        }
        let mut constituents = Vec::new();
        for (i, irr) in self.irreducibles.iter().enumerate() {
            let a = f.inner_product(irr)?;
            if a > 0 {
                constituents.push((i, a));
            }
        }
        // the lifted multiplicities must reproduce the degree as integers,
        // which rules out virtual characters wrapped around the prime
        let total: i64 = constituents
            .iter()
            .map(|&(i, a)| a as i64 * self.irreducibles[i].degree)
            .sum();
        if total != f.degree {
            return Err(Error::NotACharacter(format!(
                "constituent degrees sum to {total}, expected {}",
                f.degree
            )));
        }
        let k = self.group.class_count();
        for c in 0..k {
            let mut acc = 0u64;
            for &(i, a) in &constituents {
                acc = self.fp.add(acc, self.fp.mul(a, self.irreducibles[i].modular[c]));
            }
            if acc != f.modular[c] {
                return Err(Error::NotACharacter(format!(
                    "reconstruction mismatch at class {c}"
                )));
            }
        }
        let eta = constituents.len();
        Ok(Decomposition { constituents, eta })
    }

    /// Sum Σ aᵢ·irrᵢ as a class function.
    pub fn sum(&self, parts: &[(usize, u64)]) -> ClassFunction {
        let e = self.group.exponent();
        let k = self.group.class_count();
        let mut mult = vec![vec![0i64; e]; k];
        let mut modular = vec![0u64; k];
        let mut degree = 0i64;
        for &(i, a) in parts {
            let irr = &self.irreducibles[i];
            degree += a as i64 * irr.degree;
            for c in 0..k {
                for j in 0..e {
                    mult[c][j] += a as i64 * irr.mult[c][j];
                }
                modular[c] = self.fp.add(modular[c], self.fp.mul(a, irr.modular[c]));
            }
        }
        ClassFunction {
            group: self.group.clone(),
            fp: self.fp,
            root: self.root,
            mult,
            modular,
            degree,
        }
    }

    /// Kernel of the product character χψ: the intersection of the kernels
    /// of its irreducible constituents.
    pub fn kernel_of_product(&self, chi: &ClassFunction, psi: &ClassFunction) -> Result<Subgroup> {
        let prod = chi.product(psi)?;
        let dec = self.decompose(&prod)?;
        let mut kernel = self.group.whole_subgroup();
        for &(i, _) in &dec.constituents {
            kernel = kernel.intersection(&self.irreducibles[i].kernel());
        }
        Ok(kernel)
    }

    /// Transfers a character of the parent group to a re-closed subgroup:
    /// `sub_group`'s elements must all lie in this table's group. The result
    /// is a class function on `sub_group` over the same prime, with the
    /// multiplicity basis rescaled from the parent exponent to the subgroup
    /// exponent.
    pub fn restrict_to_group(&self, f: &ClassFunction, sub_group: &Arc<Group>) -> Result<ClassFunction> {
        let e_parent = self.group.exponent();
        let e_sub = sub_group.exponent();
        if !e_parent.is_multiple_of(e_sub) {
            return Err(Error::Internal("subgroup exponent does not divide".into()));
        }
        let step = e_parent / e_sub;
        let sub_root = self.fp.pow(self.root, step as u64);
        let mut mult = Vec::with_capacity(sub_group.class_count());
        let mut modular = Vec::with_capacity(sub_group.class_count());
        for cls in sub_group.classes() {
            let rep_perm = sub_group.element(cls.rep);
            let parent_idx = self
                .group
                .index_of(rep_perm)
                .ok_or_else(|| Error::Containment("subgroup element outside parent".into()))?;
            let parent_class = self.group.class_of(parent_idx);
            let src = &f.mult[parent_class];
            let mut v = vec![0i64; e_sub];
            for (j, &mj) in src.iter().enumerate() {
                if mj != 0 {
                    if j % step != 0 {
                        return Err(Error::Internal(
                            "eigenvalue outside the subgroup's root lattice".into(),
                        ));
                    }
                    v[j / step] += mj;
                }
            }
            modular.push(f.modular[parent_class]);
            mult.push(v);
        }
        Ok(ClassFunction {
            group: sub_group.clone(),
            fp: self.fp,
            root: sub_root,
            mult,
            modular,
            degree: f.degree,
        })
    }
}


/// Class-sum multiplication matrix for class j: entry (i, l) counts pairs
/// (x, y) ∈ C_j × C_i with xy equal to the fixed representative of C_l.
fn class_matrix(group: &Group, j: usize) -> MatFp {
    let k = group.class_count();
    let mut m = MatFp::zero(k, k);
    for l in 0..k {
        let rep = group.classes()[l].rep;
        for &x in &group.classes()[j].members {
            let y = group.mul(group.inverse_of(x), rep);
            let i = group.class_of(y);
            m[(i, l)] += 1;
        }
    }
    m
}

/// Splits GF(p)^k into the common one-dimensional eigenspaces of the class
/// matrices, processing classes in canonical (ascending size) order.
fn split_eigenvectors(group: &Group, fp: Fp) -> Result<Vec<Vec<u64>>> {
    let k = group.class_count();
    if k == 1 {
        return Ok(vec![vec![1]]);
    }
    let mut spaces: Vec<MatFp> = vec![MatFp::identity(k)];
    for j in 1..k {
        if spaces.iter().all(|s| s.cols == 1) {
            break;
        }
        let a = class_matrix(group, j).map_field(fp);
        let mut next = Vec::with_capacity(spaces.len());
        for basis in spaces {
            if basis.cols == 1 {
                next.push(basis);
                continue;
            }
            let image = a.mul(&basis, fp);
            let x = modp::restrict_to_span(&basis, &image, fp)?;
            let cp = modp::char_poly(&x, fp);
            let roots = modp::poly_roots(&cp, fp);
            let mut split_dim = 0;
            for lambda in roots {
                let mut shifted = x.clone();
                for i in 0..shifted.rows {
                    shifted[(i, i)] = fp.sub(shifted[(i, i)], lambda);
                }
                let ns = modp::null_space(&shifted, fp);
                if ns.is_empty() {
                    continue;
                }
                split_dim += ns.len();
                let coords = MatFp::from_columns(x.rows, &ns);
                next.push(basis.mul(&coords, fp));
            }
            if split_dim != basis.cols {
                return Err(Error::Internal(
                    "class matrix failed to act semisimply on a subspace".into(),
                ));
            }
        }
        spaces = next;
    }
    if spaces.iter().any(|s| s.cols != 1) {
        return Err(Error::Internal(
            "eigenspaces not fully split after exhausting class matrices".into(),
        ));
    }
    Ok(spaces.into_iter().map(|s| s.column(0)).collect())
}

impl MatFp {
    fn map_field(mut self, fp: Fp) -> MatFp {
        for v in self.data.iter_mut() {
            *v %= fp.p;
        }
        self
    }
}

/// Lifts modular character values to exact eigenvalue multiplicities: for a
/// class with representative x of order o, μ_s = (1/o) Σ_l χ(x^l)·z_o^{-sl}
/// recovers the number of eigenvalues ζ_o^s of a representing matrix.
fn lift_character(
    group: &Arc<Group>,
    fp: Fp,
    root: u64,
    degree: u64,
    values: &[u64],
) -> Result<ClassFunction> {
    let e = group.exponent();
    let k = group.class_count();
    let mut mult = vec![vec![0i64; e]; k];
    for c in 0..k {
        let rep = group.classes()[c].rep;
        let o = group.element_order(rep);
        let z_o = fp.pow(root, (e / o) as u64);
        let z_o_inv = fp.inv(z_o);
        // modular values along the cyclic subgroup generated by the rep
        let mut powers = Vec::with_capacity(o);
        let mut x = 0usize; // identity
        for _ in 0..o {
            powers.push(values[group.class_of(x)]);
            x = group.mul(x, rep);
        }
        let o_inv = fp.inv(o as u64);
        let mut total = 0u64;
        for (s, slot) in mult[c].iter_mut().step_by(e / o).enumerate() {
            let mut acc = 0u64;
            for (l, &val) in powers.iter().enumerate() {
                acc = fp.add(acc, fp.mul(val, fp.pow(z_o_inv, (s * l) as u64)));
            }
            let mu = fp.mul(acc, o_inv);
            if mu > degree {
                return Err(Error::Internal(format!(
                    "eigenvalue multiplicity {mu} exceeds the degree {degree}"
                )));
            }
            *slot = mu as i64;
            total += mu;
        }
        if total != degree {
            return Err(Error::Internal(format!(
                "eigenvalue multiplicities sum to {total}, expected {degree}"
            )));
        }
    }
    let cf = ClassFunction {
        group: group.clone(),
        fp,
        root,
        mult,
        modular: values.to_vec(),
        degree: degree as i64,
    };
    debug_assert!(cf.lift_consistent());
    Ok(cf)
}

/// Serializable dump of a character table.
#[derive(Debug, Serialize)]
pub struct TableDump {
    pub name: String,
    pub order: usize,
    pub exponent: usize,
    pub prime: u64,
    pub class_sizes: Vec<usize>,
    pub class_representatives: Vec<usize>,
    pub characters: Vec<CharacterDump>,
}

#[derive(Debug, Serialize)]
pub struct CharacterDump {
    pub degree: i64,
    pub multiplicities: Vec<Vec<i64>>,
}

impl TableDump {
    pub fn from_table(table: &CharacterTable) -> TableDump {
        let g = table.group();
        TableDump {
            name: g.name().to_string(),
            order: g.order(),
            exponent: g.exponent(),
            prime: table.prime(),
            class_sizes: g.classes().iter().map(|c| c.size()).collect(),
            class_representatives: g.classes().iter().map(|c| c.rep).collect(),
            characters: table
                .irreducibles()
                .iter()
                .map(|f| CharacterDump {
                    degree: f.degree(),
                    multiplicities: f.mult.clone(),
                })
                .collect(),
        }
    }
}
