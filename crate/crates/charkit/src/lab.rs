//! Product decomposition laboratory: common constituents over kernels,
//! extreme triples, descending chains of normal subgroups with the S_Δ
//! bookkeeping, and the theorem predicates recorded per constituent.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use serde::Serialize;

use crate::chartab::{CharacterTable, ClassFunction, Decomposition};
use crate::error::{Error, Result};
use crate::group::{derived_series, Classification, ElemSet, Group, Subgroup};

/// Which theorem predicates a verification run evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoremSet {
    /// Chain construction and its invariants (selector `A`).
    pub chains: bool,
    pub theorem_b: bool,
    pub supersolvable_bound: bool,
    /// Centralizer-section and S_Δ nonemptiness checks along chains.
    pub lemmas: bool,
    pub section4: bool,
}

impl TheoremSet {
    pub fn all() -> TheoremSet {
        TheoremSet {
            chains: true,
            theorem_b: true,
            supersolvable_bound: true,
            lemmas: true,
            section4: true,
        }
    }

    pub fn none() -> TheoremSet {
        TheoremSet {
            chains: false,
            theorem_b: false,
            supersolvable_bound: false,
            lemmas: false,
            section4: false,
        }
    }
}

/// Predicate outcomes for one (χ, ψ, α) row. `None` means not applicable or
/// not selected for the run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub theorem_b: Option<bool>,
    pub theorem_b_commutator: Option<bool>,
    pub supersolvable_bound: Option<bool>,
    pub chain_bounds: Option<bool>,
    pub centralizer_sections: Option<bool>,
    pub s_delta_nonempty: Option<bool>,
    pub section4: Option<bool>,
}

impl Predicates {
    pub fn all_hold(&self) -> bool {
        [
            self.theorem_b,
            self.theorem_b_commutator,
            self.supersolvable_bound,
            self.chain_bounds,
            self.centralizer_sections,
            self.s_delta_nonempty,
            self.section4,
        ]
        .iter()
        .all(|p| p.unwrap_or(true))
    }
}

/// One verification row: a constituent α of χψ with η, the derived length of
/// Ker α over Ker χψ, context flags and predicate outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationRecord {
    pub group: String,
    pub chi: usize,
    pub psi: usize,
    pub alpha: usize,
    pub eta: usize,
    pub dl: usize,
    pub coprime_degrees: bool,
    pub has_linear_constituent: bool,
    pub supersolvable: bool,
    pub predicates: Predicates,
}

/// An extreme triple (N, M, θ): θ stays irreducible on every normal subgroup
/// K with M ⊂ K ⊆ N but becomes reducible on M.
#[derive(Clone)]
pub struct ExtremeTriple {
    pub n: Subgroup,
    pub m: Subgroup,
    /// θ as a class function on the re-closed group of N.
    pub theta: ClassFunction,
}

impl std::fmt::Debug for ExtremeTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExtremeTriple")
            .field("n_order", &self.n.order())
            .field("m_order", &self.m.order())
            .field("theta_degree", &self.theta.degree())
            .finish()
    }
}

/// The descending chain K₀ ⊃ K₁ ⊃ … ⊃ K_r from a kernel down to a link with
/// a linear character, together with the extreme triples used on the way.
pub struct Chain {
    pub links: Vec<Subgroup>,
    /// ν_i as a class function on the re-closed group of the i-th link.
    pub characters: Vec<ClassFunction>,
    pub triples: Vec<ExtremeTriple>,
}

impl Chain {
    pub fn r(&self) -> usize {
        self.links.len() - 1
    }
}

/// Evaluation of the chain invariants against a fixed product decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct ChainEvaluation {
    pub r: usize,
    pub eta: usize,
    pub s_delta_sets: Vec<Vec<usize>>,
    pub r_below_eta: bool,
    pub s_delta_nonempty: bool,
    pub s_delta_disjoint: bool,
    pub alpha_excluded: bool,
    pub tail_abelian: bool,
}

impl ChainEvaluation {
    pub fn bounds_hold(&self) -> bool {
        self.r_below_eta
            && self.s_delta_disjoint
            && self.alpha_excluded
            && self.tail_abelian
            && self.s_delta_total() < self.eta
    }

    /// Σ |S_Δ(Kᵢ/Kᵢ₊₁)| over the chain, strictly below η when the sets are
    /// disjoint and α lies in none of them.
    pub fn s_delta_total(&self) -> usize {
        self.s_delta_sets.iter().map(|s| s.len()).sum()
    }
}

/// Outcome of the linear-constituent suite for one (χ, ψ) pair.
#[derive(Debug, Clone, Serialize)]
pub struct Section4Outcome {
    pub skipped: Option<String>,
    pub psi_is_alpha1_conj_chi: Option<bool>,
    pub multiset_matches: Option<bool>,
    pub a1_is_one: Option<bool>,
    pub another_multiplicity_one: Option<bool>,
    pub distinct_prime_bound: Option<bool>,
    pub prime_count_bound: Option<bool>,
}

impl Section4Outcome {
    fn skipped(reason: &str) -> Section4Outcome {
        Section4Outcome {
            skipped: Some(reason.to_string()),
            psi_is_alpha1_conj_chi: None,
            multiset_matches: None,
            a1_is_one: None,
            another_multiplicity_one: None,
            distinct_prime_bound: None,
            prime_count_bound: None,
        }
    }

    pub fn holds(&self) -> Option<bool> {
        if self.skipped.is_some() {
            return None;
        }
        Some(
            [
                self.psi_is_alpha1_conj_chi,
                self.multiset_matches,
                self.a1_is_one,
                self.another_multiplicity_one,
                self.distinct_prime_bound,
                self.prime_count_bound,
            ]
            .iter()
            .all(|p| p.unwrap_or(true)),
        )
    }
}

/// A subgroup re-closed as its own group, with its character table over the
/// parent's prime and a class map back to the parent.
pub struct SubContext {
    pub subgroup: Subgroup,
    pub group: Arc<Group>,
    pub table: CharacterTable,
    parent_to_sub: Vec<usize>,
}

impl SubContext {
    pub fn sub_index(&self, parent_elem: usize) -> usize {
        self.parent_to_sub[parent_elem]
    }
}

/// Data computed once per (χ, ψ) pair.
pub struct PairData {
    pub product: ClassFunction,
    pub decomposition: Decomposition,
    /// Kernel of the character χψ.
    pub kernel: Subgroup,
}

#[derive(Default)]
struct Caches {
    contexts: HashMap<ElemSet, Rc<SubContext>>,
    pairs: HashMap<(usize, usize), Rc<PairData>>,
    derived: HashMap<ElemSet, Vec<ElemSet>>,
    chains: HashMap<(ElemSet, usize), Rc<Chain>>,
    centralizer: HashMap<(ElemSet, ElemSet), bool>,
}

/// A group with its character table and all the per-group machinery the
/// verification run needs. Not shared across threads; parallel runs build
/// one per corpus entry.
pub struct Lab {
    group: Arc<Group>,
    table: CharacterTable,
    normals: Vec<Subgroup>,
    classification: Classification,
    kernels: Vec<Subgroup>,
    caches: RefCell<Caches>,
}

impl Lab {
    pub fn new(group: Arc<Group>) -> Result<Lab> {
        let table = CharacterTable::build(&group)?;
        let normals = group.normal_subgroups();
        let classification = group.classify();
        let kernels = table.irreducibles().iter().map(|f| f.kernel()).collect();
        Ok(Lab {
            group,
            table,
            normals,
            classification,
            kernels,
            caches: RefCell::new(Caches::default()),
        })
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.group
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn normal_subgroups(&self) -> &[Subgroup] {
        &self.normals
    }

    pub fn classification(&self) -> &Classification {
        &self.classification
    }

    pub fn kernel_of(&self, irr: usize) -> &Subgroup {
        &self.kernels[irr]
    }

    /// The re-closed context for a subgroup, cached by member set.
    pub fn context(&self, sub: &Subgroup) -> Result<Rc<SubContext>> {
        if let Some(ctx) = self.caches.borrow().contexts.get(sub.members()) {
            return Ok(ctx.clone());
        }
        let name = format!("{}|sub{}", self.group.name(), sub.order());
        let sub_group = sub.as_group(&name);
        let step = self.group.exponent() / sub_group.exponent();
        let sub_root = self.table.field().pow(self.table.root(), step as u64);
        let table = CharacterTable::build_in_field(&sub_group, self.table.prime(), sub_root)?;
        let mut parent_to_sub = vec![usize::MAX; self.group.order()];
        for (si, perm) in sub_group.elements().iter().enumerate() {
            let pi = self
                .group
                .index_of(perm)
                .ok_or_else(|| Error::Internal("subgroup element missing from parent".into()))?;
            parent_to_sub[pi] = si;
        }
        let ctx = Rc::new(SubContext {
            subgroup: sub.clone(),
            group: sub_group,
            table,
            parent_to_sub,
        });
        self.caches
            .borrow_mut()
            .contexts
            .insert(sub.members().clone(), ctx.clone());
        Ok(ctx)
    }

    /// Restriction of a class function of G to a subgroup, organized by the
    /// subgroup's own classes. Irreducibility is `norm == 1`.
    pub fn restrict(&self, f: &ClassFunction, sub: &Subgroup) -> Result<ClassFunction> {
        let ctx = self.context(sub)?;
        self.table.restrict_to_group(f, &ctx.group)
    }

    /// Product and decomposition of χψ, with the kernel of the product
    /// character (the intersection of its constituents' kernels).
    pub fn pair(&self, chi: usize, psi: usize) -> Result<Rc<PairData>> {
        if let Some(p) = self.caches.borrow().pairs.get(&(chi, psi)) {
            return Ok(p.clone());
        }
        let product = self.table.character(chi).product(self.table.character(psi))?;
        let decomposition = self.table.decompose(&product)?;
        let mut kernel = self.group.whole_subgroup();
        for &(i, _) in &decomposition.constituents {
            kernel = kernel.intersection(&self.kernels[i]);
        }
        let data = Rc::new(PairData {
            product,
            decomposition,
            kernel,
        });
        self.caches.borrow_mut().pairs.insert((chi, psi), data.clone());
        Ok(data)
    }

    /// Derived series of a subgroup, cached by member set.
    fn derived_sets(&self, sub: &Subgroup) -> Vec<ElemSet> {
        if let Some(s) = self.caches.borrow().derived.get(sub.members()) {
            return s.clone();
        }
        let series: Vec<ElemSet> = derived_series(sub)
            .into_iter()
            .map(|s| s.members().clone())
            .collect();
        self.caches
            .borrow_mut()
            .derived
            .insert(sub.members().clone(), series.clone());
        series
    }

    /// Least i with the i-th derived subgroup of `k` inside `n`.
    pub fn derived_length_over(&self, k: &Subgroup, n: &Subgroup) -> Result<usize> {
        if !n.members().is_subset_of(k.members()) {
            return Err(Error::Containment(
                "denominator not contained in numerator".into(),
            ));
        }
        let series = self.derived_sets(k);
        series
            .iter()
            .position(|d| d.is_subset_of(n.members()))
            .ok_or_else(|| Error::NotSolvable(format!("subgroup of order {}", k.order())))
    }

    /// The commutator subgroup of `k` as a member set.
    fn commutator_sets(&self, k: &Subgroup) -> ElemSet {
        let series = self.derived_sets(k);
        if series.len() >= 2 {
            series[1].clone()
        } else {
            series[0].clone()
        }
    }

    /// An irreducible character of K = Ker α lying under both χ and ψ̄,
    /// first in the canonical order of K's irreducibles.
    pub fn common_constituent(
        &self,
        chi: usize,
        psi: usize,
        alpha: usize,
    ) -> Result<(Rc<SubContext>, usize)> {
        let pair = self.pair(chi, psi)?;
        if !pair.decomposition.contains(alpha) {
            return Err(Error::Precondition(format!(
                "character {alpha} is not a constituent of the product"
            )));
        }
        let ctx = self.context(&self.kernels[alpha])?;
        let chi_k = self
            .table
            .restrict_to_group(self.table.character(chi), &ctx.group)?;
        let psi_bar_k = self
            .table
            .restrict_to_group(&self.table.character(psi).conjugate(), &ctx.group)?;
        let dec_chi = ctx.table.decompose(&chi_k)?;
        let dec_psi = ctx.table.decompose(&psi_bar_k)?;
        for &(i, _) in &dec_chi.constituents {
            if dec_psi.contains(i) {
                return Ok((ctx, i));
            }
        }
        Err(Error::Counterexample(format!(
            "no common constituent of χ and ψ̄ over the kernel of α = {alpha} in {}",
            self.group.name()
        )))
    }

    /// Norm of θ (a character on `ctx.group`) restricted to a subgroup given
    /// by parent element indices.
    fn restriction_norm(&self, ctx: &SubContext, theta: &ClassFunction, m: &Subgroup) -> u64 {
        let fp = theta.field();
        let mut acc = 0u64;
        for p_elem in m.members().iter() {
            let s = ctx.sub_index(p_elem);
            let s_inv = ctx.sub_index(self.group.inverse_of(p_elem));
            acc = fp.add(
                acc,
                fp.mul(theta.modular_at_element(s), theta.modular_at_element(s_inv)),
            );
        }
        fp.mul(acc, fp.inv(m.order() as u64))
    }

    /// Completes (N, ·, θ) to an extreme triple: M is an inclusion-maximal
    /// normal subgroup of G inside N on which θ goes reducible; ties broken
    /// by smallest order, then member set.
    pub fn find_extreme_triple(
        &self,
        n: &Subgroup,
        ctx: &SubContext,
        theta_idx: usize,
    ) -> Result<ExtremeTriple> {
        let theta = ctx.table.character(theta_idx);
        if theta.is_linear() {
            return Err(Error::Precondition(
                "extreme triples require a nonlinear character".into(),
            ));
        }
        let candidates: Vec<&Subgroup> = self
            .normals
            .iter()
            .filter(|m| {
                m.members().is_subset_of(n.members())
                    && m.order() < n.order()
                    && self.restriction_norm(ctx, theta, m) != 1
            })
            .collect();
        let maximal: Vec<&&Subgroup> = candidates
            .iter()
            .filter(|m| {
                !candidates
                    .iter()
                    .any(|other| m.order() < other.order() && m.members().is_subset_of(other.members()))
            })
            .collect();
        let m = maximal
            .into_iter()
            .min_by(|a, b| {
                a.order()
                    .cmp(&b.order())
                    .then_with(|| a.members().cmp(b.members()))
            })
            .ok_or_else(|| {
                Error::Internal("a nonlinear character restricts reducibly to the trivial subgroup".into())
            })?;
        Ok(ExtremeTriple {
            n: n.clone(),
            m: (*m).clone(),
            theta: theta.clone(),
        })
    }

    /// Exhaustive check of the extreme-triple property: θ irreducible on
    /// every normal K of G with M ⊂ K ⊆ N, reducible on M.
    pub fn verify_extreme_triple(&self, ctx: &SubContext, triple: &ExtremeTriple) -> bool {
        if self.restriction_norm(ctx, &triple.theta, &triple.m) == 1 {
            return false;
        }
        self.normals
            .iter()
            .filter(|k| {
                triple.m.members().is_subset_of(k.members())
                    && k.order() > triple.m.order()
                    && k.members().is_subset_of(triple.n.members())
            })
            .all(|k| self.restriction_norm(ctx, &triple.theta, k) == 1)
    }

    /// S_Δ(N/M): constituents α of Δ with M ⊆ Ker α and N ⊄ Ker α.
    pub fn s_delta(&self, dec: &Decomposition, n: &Subgroup, m: &Subgroup) -> Vec<usize> {
        dec.constituents
            .iter()
            .map(|&(i, _)| i)
            .filter(|&i| {
                let ker = self.kernels[i].members();
                m.members().is_subset_of(ker) && !n.members().is_subset_of(ker)
            })
            .collect()
    }

    /// Builds the chain K₀ = Ker α ⊃ K₁ ⊃ … ⊃ K_r with ν₀ the common
    /// constituent, descending through extreme triples until ν_r is linear.
    pub fn build_chain(&self, chi: usize, psi: usize, alpha: usize) -> Result<Rc<Chain>> {
        let (ctx0, nu0) = self.common_constituent(chi, psi, alpha)?;
        let key = (self.kernels[alpha].members().clone(), nu0);
        if let Some(chain) = self.caches.borrow().chains.get(&key) {
            return Ok(chain.clone());
        }

        let mut links = vec![self.kernels[alpha].clone()];
        let mut characters = vec![ctx0.table.character(nu0).clone()];
        let mut triples = Vec::new();
        let mut ctx = ctx0;
        let mut nu = nu0;
        while !ctx.table.character(nu).is_linear() {
            let link = links.last().unwrap().clone();
            let triple = self.find_extreme_triple(&link, &ctx, nu)?;
            let next_ctx = self.context(&triple.m)?;
            let restricted = ctx
                .table
                .restrict_to_group(ctx.table.character(nu), &next_ctx.group)?;
            let dec = next_ctx.table.decompose(&restricted)?;
            let &(next_nu, _) = dec
                .constituents
                .first()
                .ok_or_else(|| Error::Internal("restriction with no constituents".into()))?;
            links.push(triple.m.clone());
            characters.push(next_ctx.table.character(next_nu).clone());
            triples.push(triple);
            ctx = next_ctx;
            nu = next_nu;
        }
        let chain = Rc::new(Chain {
            links,
            characters,
            triples,
        });
        self.caches.borrow_mut().chains.insert(key, chain.clone());
        Ok(chain)
    }

    /// Chain invariants relative to the decomposition of Δ = χψ: r < η, the
    /// S_Δ(K_i/K_{i+1}) nonempty and pairwise disjoint with α in none, and
    /// the tail K_r abelian over Ker Δ.
    pub fn evaluate_chain(
        &self,
        chain: &Chain,
        pair: &PairData,
        alpha: usize,
    ) -> ChainEvaluation {
        let eta = pair.decomposition.eta;
        let r = chain.r();
        let s_delta_sets: Vec<Vec<usize>> = (0..r)
            .map(|i| self.s_delta(&pair.decomposition, &chain.links[i], &chain.links[i + 1]))
            .collect();
        let s_delta_nonempty = s_delta_sets.iter().all(|s| !s.is_empty());
        let mut seen = std::collections::BTreeSet::new();
        let mut disjoint = true;
        for s in &s_delta_sets {
            for &i in s {
                if !seen.insert(i) {
                    disjoint = false;
                }
            }
        }
        let alpha_excluded = s_delta_sets.iter().all(|s| !s.contains(&alpha));
        let tail = chain.links.last().unwrap();
        let tail_abelian = self
            .commutator_sets(tail)
            .is_subset_of(pair.kernel.members());
        ChainEvaluation {
            r,
            eta,
            s_delta_sets,
            r_below_eta: r < eta,
            s_delta_nonempty,
            s_delta_disjoint: disjoint,
            alpha_excluded,
            tail_abelian,
        }
    }

    /// The centralizer-section test: for M ⊂ L ⊆ N with L normal in G and
    /// L/M abelian, the centralizer of L/M in N/M is abelian.
    pub fn centralizer_section_abelian(&self, triple: &ExtremeTriple, l: &Subgroup) -> bool {
        let n = &triple.n;
        let m = &triple.m;
        let l_members: Vec<usize> = l.members().iter().collect();
        let mut centralizer = Vec::new();
        for x in n.members().iter() {
            if l_members
                .iter()
                .all(|&le| m.contains(self.group.commutator(x, le)))
            {
                centralizer.push(x);
            }
        }
        centralizer.iter().all(|&a| {
            centralizer
                .iter()
                .all(|&b| m.contains(self.group.commutator(a, b)))
        })
    }

    /// All normal L with M ⊂ L ⊆ N and L/M abelian.
    pub fn abelian_sections_over(&self, triple: &ExtremeTriple) -> Vec<&Subgroup> {
        self.normals
            .iter()
            .filter(|l| {
                triple.m.members().is_subset_of(l.members())
                    && l.order() > triple.m.order()
                    && l.members().is_subset_of(triple.n.members())
                    && self
                        .commutator_sets(l)
                        .is_subset_of(triple.m.members())
            })
            .collect()
    }

    /// Centralizer-section check over every admissible L of a triple, cached.
    fn centralizer_sections_for_triple(&self, triple: &ExtremeTriple) -> bool {
        let key = (triple.n.members().clone(), triple.m.members().clone());
        if let Some(&v) = self.caches.borrow().centralizer.get(&key) {
            return v;
        }
        let ok = self
            .abelian_sections_over(triple)
            .into_iter()
            .all(|l| self.centralizer_section_abelian(triple, l));
        self.caches.borrow_mut().centralizer.insert(key, ok);
        ok
    }

    /// Nonemptiness of S_Δ(N/M) for one chain link.
    pub fn s_delta_nonempty(&self, dec: &Decomposition, triple: &ExtremeTriple) -> bool {
        !self.s_delta(dec, &triple.n, &triple.m).is_empty()
    }

    /// The linear-constituent suite for a pair (χ, ψ).
    pub fn section4(&self, chi: usize, psi: usize) -> Result<Section4Outcome> {
        let pair = self.pair(chi, psi)?;
        let dec = &pair.decomposition;
        let linear: Vec<usize> = dec
            .constituents
            .iter()
            .map(|&(i, _)| i)
            .filter(|&i| self.table.character(i).is_linear())
            .collect();
        let Some(&alpha1) = linear.first() else {
            return Ok(Section4Outcome::skipped("no linear constituent"));
        };
        let chi_f = self.table.character(chi);
        let psi_f = self.table.character(psi);

        // ψ = α₁ · χ̄
        let alpha1_chibar = self.table.character(alpha1).product(&chi_f.conjugate())?;
        let psi_matches = &alpha1_chibar == psi_f;

        // constituents of χχ̄ are exactly ᾱ₁αᵢ with the same multiplicities
        let conj_alpha1 = self.table.character(alpha1).conjugate();
        let mut mapped: Vec<(usize, u64)> = Vec::new();
        let mut mapping_complete = true;
        for &(i, a) in &dec.constituents {
            let target = self.table.character(i).product(&conj_alpha1)?;
            match self.table.index_of(&target) {
                Some(idx) => mapped.push((idx, a)),
                None => mapping_complete = false,
            }
        }
        mapped.sort_unstable();
        let chi_chibar = chi_f.product(&chi_f.conjugate())?;
        let dec_cc = self.table.decompose(&chi_chibar)?;
        let multiset_matches = mapping_complete && mapped == dec_cc.constituents;

        let a1_is_one = dec.multiplicity_of(alpha1) == 1;

        let (another_multiplicity_one, distinct_prime_bound, prime_count_bound) =
            if chi_f.degree() > 1 && self.classification.solvable {
                let another = dec
                    .constituents
                    .iter()
                    .any(|&(i, a)| i != alpha1 && a == 1);
                let eta = dec.eta;
                let degree = chi_f.degree() as u64;
                let distinct_ok =
                    chi_f.degree() == psi_f.degree() && distinct_prime_count(degree) < eta;
                let omega_ok = if self.classification.supersolvable {
                    Some(prime_factor_count(degree) + 2 <= eta)
                } else {
                    None
                };
                (Some(another), Some(distinct_ok), omega_ok)
            } else {
                (None, None, None)
            };

        Ok(Section4Outcome {
            skipped: None,
            psi_is_alpha1_conj_chi: Some(psi_matches),
            multiset_matches: Some(multiset_matches),
            a1_is_one: Some(a1_is_one),
            another_multiplicity_one,
            distinct_prime_bound,
            prime_count_bound,
        })
    }

    /// Emits one record per constituent α of χψ, evaluating the selected
    /// theorem predicates.
    pub fn check_all(
        &self,
        chi: usize,
        psi: usize,
        theorems: TheoremSet,
    ) -> Result<Vec<VerificationRecord>> {
        let pair = self.pair(chi, psi)?;
        let chi_deg = self.table.character(chi).degree() as u64;
        let psi_deg = self.table.character(psi).degree() as u64;
        let coprime = gcd(chi_deg, psi_deg) == 1;
        let has_linear = pair
            .decomposition
            .constituents
            .iter()
            .any(|&(i, _)| self.table.character(i).is_linear());
        let supersolvable = self.classification.supersolvable;

        let section4 = if theorems.section4 {
            self.section4(chi, psi)?.holds()
        } else {
            None
        };

        let mut records = Vec::with_capacity(pair.decomposition.eta);
        for &(alpha, _) in &pair.decomposition.constituents {
            let dl = self.derived_length_over(&self.kernels[alpha], &pair.kernel)?;
            let eta = pair.decomposition.eta;

            let mut predicates = Predicates {
                section4,
                ..Predicates::default()
            };
            if theorems.theorem_b && coprime {
                predicates.theorem_b = Some(dl <= 1);
                // the structural form: [K,K] ⊆ Ker(χψ) ⊆ K for K = Ker α
                let commutator = self.commutator_sets(&self.kernels[alpha]);
                predicates.theorem_b_commutator = Some(
                    commutator.is_subset_of(pair.kernel.members())
                        && pair.kernel.members().is_subset_of(self.kernels[alpha].members()),
                );
            }
            if theorems.supersolvable_bound && supersolvable {
                predicates.supersolvable_bound = Some(dl < 2 * eta);
            }
            if theorems.chains || theorems.lemmas {
                let chain = self.build_chain(chi, psi, alpha)?;
                let eval = self.evaluate_chain(&chain, &pair, alpha);
                if theorems.chains {
                    predicates.chain_bounds = Some(eval.bounds_hold());
                }
                if theorems.lemmas {
                    predicates.s_delta_nonempty = Some(eval.s_delta_nonempty);
                    predicates.centralizer_sections =
                        Some(chain.triples.iter().all(|t| self.centralizer_sections_for_triple(t)));
                }
            }

            records.push(VerificationRecord {
                group: self.group.name().to_string(),
                chi,
                psi,
                alpha,
                eta,
                dl,
                coprime_degrees: coprime,
                has_linear_constituent: has_linear,
                supersolvable,
                predicates,
            });
        }
        Ok(records)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Number of distinct prime divisors.
pub fn distinct_prime_count(mut n: u64) -> usize {
    let mut count = 0;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            count += 1;
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        count += 1;
    }
    count
}

/// Number of prime divisors counted with multiplicity.
pub fn prime_factor_count(mut n: u64) -> usize {
    let mut count = 0;
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            count += 1;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        count += 1;
    }
    count
}
