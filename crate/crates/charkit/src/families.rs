//! Constructions of the named group families and the builtin corpus.
//! Extraspecial groups and the quaternion group are realized through their
//! regular representations; everything else gets a small faithful action.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{is_prime, Group};
use crate::perm::Permutation;

/// A recipe for a corpus group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Cyclic(usize),
    /// Dihedral group given by its order (2n).
    Dihedral(usize),
    Quaternion,
    /// Extraspecial group of order p³ for odd p; `exponent_p2` selects the
    /// exponent-p² isomorphism type.
    Extraspecial { p: usize, exponent_p2: bool },
    /// C_q ⋊ C_r with q prime and r dividing q − 1, acting faithfully.
    Semidirect { q: usize, r: usize },
    Symmetric4,
    SpecialLinear23,
    Product(Vec<FamilySpec>),
}

impl FamilySpec {
    pub fn expected_order(&self) -> usize {
        match self {
            FamilySpec::Cyclic(n) => *n,
            FamilySpec::Dihedral(order) => *order,
            FamilySpec::Quaternion => 8,
            FamilySpec::Extraspecial { p, .. } => p * p * p,
            FamilySpec::Semidirect { q, r } => q * r,
            FamilySpec::Symmetric4 => 24,
            FamilySpec::SpecialLinear23 => 24,
            FamilySpec::Product(parts) => parts.iter().map(|p| p.expected_order()).product(),
        }
    }
}

/// Parses a family name such as `cyclic-6`, `dihedral-8`, `extraspecial-27`,
/// `extraspecial-27-exp9`, `semidirect-7-3`, `s4`, `sl23`, `q8`, or a direct
/// product written with `x` between factor aliases (`d4xd4`, `c3xs3`).
pub fn parse_family(name: &str) -> Result<FamilySpec> {
    if let Some(spec) = parse_single(name) {
        return Ok(spec);
    }
    if name.contains('x') {
        let parts: Vec<&str> = name.split('x').collect();
        let specs: Option<Vec<FamilySpec>> = parts.iter().map(|p| parse_single(p)).collect();
        if let Some(specs) = specs {
            if specs.len() >= 2 {
                return Ok(FamilySpec::Product(specs));
            }
        }
    }
    Err(Error::InvalidInput(format!("unknown group family: {name}")))
}

fn parse_single(name: &str) -> Option<FamilySpec> {
    match name {
        "trivial" => return Some(FamilySpec::Cyclic(1)),
        "quaternion" | "q8" => return Some(FamilySpec::Quaternion),
        "s3" => return Some(FamilySpec::Dihedral(6)),
        "s4" => return Some(FamilySpec::Symmetric4),
        "sl23" => return Some(FamilySpec::SpecialLinear23),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("cyclic-") {
        let n: usize = rest.parse().ok()?;
        return (n >= 1).then_some(FamilySpec::Cyclic(n));
    }
    if let Some(rest) = name.strip_prefix('c') {
        let n: usize = rest.parse().ok()?;
        return (n >= 1).then_some(FamilySpec::Cyclic(n));
    }
    if let Some(rest) = name.strip_prefix("dihedral-") {
        let order: usize = rest.parse().ok()?;
        return (order >= 4 && order.is_multiple_of(2)).then_some(FamilySpec::Dihedral(order));
    }
    if let Some(rest) = name.strip_prefix('d') {
        let n: usize = rest.parse().ok()?;
        return (n >= 2).then_some(FamilySpec::Dihedral(2 * n));
    }
    if let Some(rest) = name.strip_prefix("extraspecial-") {
        let mut parts = rest.split('-');
        let order: usize = parts.next()?.parse().ok()?;
        let p = (2..=order).find(|p| p * p * p == order)?;
        if !is_prime(p as u64) || p == 2 {
            return None;
        }
        match parts.next() {
            None => return Some(FamilySpec::Extraspecial { p, exponent_p2: false }),
            Some(exp) => {
                let e: usize = exp.strip_prefix("exp")?.parse().ok()?;
                if parts.next().is_some() {
                    return None;
                }
                if e == p {
                    return Some(FamilySpec::Extraspecial { p, exponent_p2: false });
                }
                if e == p * p {
                    return Some(FamilySpec::Extraspecial { p, exponent_p2: true });
                }
                return None;
            }
        }
    }
    if let Some(rest) = name.strip_prefix("semidirect-") {
        let mut parts = rest.split('-');
        let q: usize = parts.next()?.parse().ok()?;
        let r: usize = parts.next()?.parse().ok()?;
        if parts.next().is_some() {
            return None;
        }
        return Some(FamilySpec::Semidirect { q, r });
    }
    None
}

/// Constructs the group for a family recipe. The construction fails if the
/// parameters are unsupported or the order cap is exceeded.
pub fn make_family(spec: &FamilySpec, name: &str, cap: usize) -> Result<Arc<Group>> {
    let (degree, generators) = family_generators(spec)?;
    let group = Group::closure(degree, generators, cap)?.with_name(name);
    if group.order() != spec.expected_order() {
        return Err(Error::Internal(format!(
            "family {name} constructed with order {} instead of {}",
            group.order(),
            spec.expected_order()
        )));
    }
    Ok(group)
}

/// Parses and constructs in one step, naming the group by its spec string.
pub fn group_from_name(name: &str, cap: usize) -> Result<Arc<Group>> {
    let spec = parse_family(name)?;
    make_family(&spec, name, cap)
}

fn family_generators(spec: &FamilySpec) -> Result<(usize, Vec<Permutation>)> {
    match spec {
        FamilySpec::Cyclic(n) => {
            let cycle: Vec<usize> = (0..*n).collect();
            Ok((*n, vec![Permutation::from_cycles(*n, &[&cycle])]))
        }
        FamilySpec::Dihedral(order) => {
            let n = order / 2;
            if n == 2 {
                // the Klein four-group on four points
                return Ok((
                    4,
                    vec![
                        Permutation::from_cycles(4, &[&[0, 1]]),
                        Permutation::from_cycles(4, &[&[2, 3]]),
                    ],
                ));
            }
            let rotation: Vec<usize> = (0..n).collect();
            let reflection: Vec<usize> = (0..n).map(|x| (n - x) % n).collect();
            Ok((
                n,
                vec![
                    Permutation::from_cycles(n, &[&rotation]),
                    Permutation::from_images(&reflection)?,
                ],
            ))
        }
        FamilySpec::Quaternion => Ok(quaternion_generators()),
        FamilySpec::Extraspecial { p, exponent_p2 } => {
            if *p == 2 || !is_prime(*p as u64) {
                return Err(Error::InvalidInput(
                    "extraspecial construction needs an odd prime".into(),
                ));
            }
            if *exponent_p2 {
                Ok(extraspecial_exponent_p2(*p))
            } else {
                Ok(heisenberg(*p))
            }
        }
        FamilySpec::Semidirect { q, r } => semidirect_generators(*q, *r),
        FamilySpec::Symmetric4 => Ok((
            4,
            vec![
                Permutation::from_cycles(4, &[&[0, 1, 2, 3]]),
                Permutation::from_cycles(4, &[&[0, 1]]),
            ],
        )),
        FamilySpec::SpecialLinear23 => Ok(sl23_generators()),
        FamilySpec::Product(parts) => {
            let built: Result<Vec<(usize, Vec<Permutation>)>> =
                parts.iter().map(family_generators).collect();
            let built = built?;
            let degree: usize = built.iter().map(|(d, _)| d).sum();
            let mut generators = Vec::new();
            let mut offset = 0usize;
            for (d, gens) in built {
                for g in gens {
                    let mut images: Vec<usize> = (0..degree).collect();
                    for (pt, im) in g.images().enumerate() {
                        images[offset + pt] = offset + im;
                    }
                    generators.push(Permutation::from_images(&images)?);
                }
                offset += d;
            }
            Ok((degree, generators))
        }
    }
}

/// Left regular representation of the unit quaternions {±1, ±i, ±j, ±k},
/// encoded as axis·2 + (sign < 0).
fn quaternion_generators() -> (usize, Vec<Permutation>) {
    fn qmul(a: usize, b: usize) -> usize {
        let (ax_a, neg_a) = (a / 2, a % 2 == 1);
        let (ax_b, neg_b) = (b / 2, b % 2 == 1);
        // axis multiplication table for {1, i, j, k}: value and sign
        const AXIS: [[(usize, bool); 4]; 4] = [
            [(0, false), (1, false), (2, false), (3, false)],
            [(1, false), (0, true), (3, false), (2, true)],
            [(2, false), (3, true), (0, true), (1, false)],
            [(3, false), (2, false), (1, true), (0, true)],
        ];
        let (ax, neg_ab) = AXIS[ax_a][ax_b];
        let neg = neg_a ^ neg_b ^ neg_ab;
        ax * 2 + usize::from(neg)
    }
    let gens = [2usize, 4usize] // i and j
        .iter()
        .map(|&g| {
            let images: Vec<usize> = (0..8).map(|h| qmul(g, h)).collect();
            Permutation::from_images(&images).expect("regular action is a bijection")
        })
        .collect();
    (8, gens)
}

/// Left regular representation of the Heisenberg group over Z_p: triples
/// (x, y, z) with (x₁,y₁,z₁)(x₂,y₂,z₂) = (x₁+x₂, y₁+y₂, z₁+z₂+x₁y₂).
fn heisenberg(p: usize) -> (usize, Vec<Permutation>) {
    let n = p * p * p;
    let idx = |x: usize, y: usize, z: usize| (x * p + y) * p + z;
    let unpack = |i: usize| (i / (p * p), (i / p) % p, i % p);
    let mul = |a: usize, b: usize| {
        let (x1, y1, z1) = unpack(a);
        let (x2, y2, z2) = unpack(b);
        idx((x1 + x2) % p, (y1 + y2) % p, (z1 + z2 + x1 * y2) % p)
    };
    let gens = [idx(1, 0, 0), idx(0, 1, 0)]
        .iter()
        .map(|&g| {
            let images: Vec<usize> = (0..n).map(|h| mul(g, h)).collect();
            Permutation::from_images(&images).expect("regular action is a bijection")
        })
        .collect();
    (n, gens)
}

/// Left regular representation of ⟨a, b | a^{p²} = b^p = 1, b⁻¹ab = a^{1+p}⟩,
/// the extraspecial group of order p³ and exponent p². Elements are pairs
/// (i, j) standing for aⁱbʲ.
fn extraspecial_exponent_p2(p: usize) -> (usize, Vec<Permutation>) {
    let p2 = p * p;
    let n = p2 * p;
    let idx = |i: usize, j: usize| i * p + j;
    let unpack = |e: usize| (e / p, e % p);
    // t = (1 + p)^{-1} mod p², so that bʲ aᵏ = a^{k·t^j} bʲ
    let t = {
        let mut t = 1usize;
        let inv = (1 + p2 - p) % p2; // (1+p)(1−p) ≡ 1 (mod p²)
        let mut acc = vec![0usize; p];
        for item in acc.iter_mut() {
            *item = t;
            t = t * inv % p2;
        }
        acc
    };
    let mul = move |a: usize, b: usize| {
        let (i, j) = unpack(a);
        let (k, l) = unpack(b);
        idx((i + k * t[j]) % p2, (j + l) % p)
    };
    let gens = [idx(1, 0), idx(0, 1)]
        .iter()
        .map(|&g| {
            let images: Vec<usize> = (0..n).map(|h| mul(g, h)).collect();
            Permutation::from_images(&images).expect("regular action is a bijection")
        })
        .collect();
    (n, gens)
}

/// C_q ⋊ C_r on q points: translations plus multiplication by an element of
/// order r in GF(q)*.
fn semidirect_generators(q: usize, r: usize) -> Result<(usize, Vec<Permutation>)> {
    if !is_prime(q as u64) || r < 2 || !(q - 1).is_multiple_of(r) {
        return Err(Error::InvalidInput(format!(
            "semidirect product needs a prime q and r | q − 1; got q = {q}, r = {r}"
        )));
    }
    let g = (2..q)
        .find(|&g| {
            // primitive root: order q − 1
            let mut acc = 1usize;
            for _ in 0..q - 2 {
                acc = acc * g % q;
                if acc == 1 {
                    return false;
                }
            }
            true
        })
        .expect("every prime has a primitive root");
    let m = {
        let mut acc = 1usize;
        for _ in 0..(q - 1) / r {
            acc = acc * g % q;
        }
        acc
    };
    let translation: Vec<usize> = (0..q).map(|x| (x + 1) % q).collect();
    let scaling: Vec<usize> = (0..q).map(|x| x * m % q).collect();
    Ok((
        q,
        vec![
            Permutation::from_images(&translation)?,
            Permutation::from_images(&scaling)?,
        ],
    ))
}

/// SL(2, 3) acting on the eight nonzero vectors of GF(3)².
fn sl23_generators() -> (usize, Vec<Permutation>) {
    let vectors: Vec<(usize, usize)> = (0..3usize)
        .flat_map(|x| (0..3usize).map(move |y| (x, y)))
        .filter(|&v| v != (0, 0))
        .collect();
    let index_of = |v: (usize, usize)| vectors.iter().position(|&w| w == v).unwrap();
    let apply = |m: [[usize; 2]; 2], v: (usize, usize)| {
        (
            (m[0][0] * v.0 + m[0][1] * v.1) % 3,
            (m[1][0] * v.0 + m[1][1] * v.1) % 3,
        )
    };
    let gens = [[[1, 1], [0, 1]], [[0, 2], [1, 0]]]
        .iter()
        .map(|&m| {
            let images: Vec<usize> = vectors.iter().map(|&v| index_of(apply(m, v))).collect();
            Permutation::from_images(&images).expect("invertible matrices act bijectively")
        })
        .collect();
    (8, gens)
}

/// An entry of the builtin corpus.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub spec: FamilySpec,
    pub expected_order: usize,
}

impl CorpusEntry {
    fn new(name: &str) -> CorpusEntry {
        let spec = parse_family(name).expect("builtin corpus names parse");
        CorpusEntry {
            name: name.to_string(),
            expected_order: spec.expected_order(),
            spec,
        }
    }

    pub fn build(&self, cap: usize) -> Result<Arc<Group>> {
        make_family(&self.spec, &self.name, cap)
    }
}

/// The builtin verification corpus: all cyclic groups to order 24, dihedral
/// groups to order 32, the quaternion group, both extraspecial types of
/// order 27 and the exponent-5 one of order 125, two nonabelian semidirect
/// products, S₃, S₄, SL(2,3), D₄×D₄ and C₃×S₃.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    let mut names: Vec<String> = Vec::new();
    for n in 1..=24 {
        names.push(format!("cyclic-{n}"));
    }
    for n in 2..=16 {
        names.push(format!("dihedral-{}", 2 * n));
    }
    names.push("quaternion".into());
    names.push("extraspecial-27".into());
    names.push("extraspecial-27-exp9".into());
    names.push("extraspecial-125".into());
    names.push("semidirect-7-3".into());
    names.push("semidirect-5-4".into());
    names.push("s3".into());
    names.push("s4".into());
    names.push("sl23".into());
    names.push("d4xd4".into());
    names.push("c3xs3".into());
    names.iter().map(|n| CorpusEntry::new(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_ORDER_CAP;

    #[test]
    fn parse_plain_families() {
        assert_eq!(parse_family("cyclic-6").unwrap(), FamilySpec::Cyclic(6));
        assert_eq!(parse_family("dihedral-8").unwrap(), FamilySpec::Dihedral(8));
        assert_eq!(parse_family("q8").unwrap(), FamilySpec::Quaternion);
        assert_eq!(
            parse_family("extraspecial-27").unwrap(),
            FamilySpec::Extraspecial { p: 3, exponent_p2: false }
        );
        assert_eq!(
            parse_family("extraspecial-27-exp9").unwrap(),
            FamilySpec::Extraspecial { p: 3, exponent_p2: true }
        );
        assert_eq!(
            parse_family("semidirect-7-3").unwrap(),
            FamilySpec::Semidirect { q: 7, r: 3 }
        );
        assert!(parse_family("extraspecial-16").is_err());
        assert!(parse_family("nonsense").is_err());
    }

    #[test]
    fn parse_products() {
        assert_eq!(
            parse_family("d4xd4").unwrap(),
            FamilySpec::Product(vec![FamilySpec::Dihedral(8), FamilySpec::Dihedral(8)])
        );
        assert_eq!(
            parse_family("c3xs3").unwrap(),
            FamilySpec::Product(vec![FamilySpec::Cyclic(3), FamilySpec::Dihedral(6)])
        );
    }

    #[test]
    fn cyclic_6_structure() {
        let g = group_from_name("cyclic-6", DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.class_count(), 6);
        assert_eq!(g.exponent(), 6);
    }

    #[test]
    fn quaternion_structure() {
        let g = group_from_name("quaternion", DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.class_count(), 5);
        assert_eq!(g.exponent(), 4);
        assert_eq!(g.normal_subgroups().len(), 6);
    }

    #[test]
    fn extraspecial_27_structure() {
        let g = group_from_name("extraspecial-27", DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 27);
        assert_eq!(g.class_count(), 11);
        assert_eq!(g.exponent(), 3);
        let derived = g.whole_subgroup().commutator_subgroup();
        assert_eq!(derived.order(), 3);
    }

    #[test]
    fn extraspecial_27_exp9_structure() {
        let g = group_from_name("extraspecial-27-exp9", DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 27);
        assert_eq!(g.class_count(), 11);
        assert_eq!(g.exponent(), 9);
        let derived = g.whole_subgroup().commutator_subgroup();
        assert_eq!(derived.order(), 3);
    }

    #[test]
    fn semidirect_21_structure() {
        let g = group_from_name("semidirect-7-3", DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 21);
        assert_eq!(g.class_count(), 5);
        let c = g.classify();
        assert!(c.solvable);
        assert!(c.supersolvable);
    }

    #[test]
    fn sl23_structure() {
        let g = group_from_name("sl23", DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.class_count(), 7);
        let c = g.classify();
        assert!(c.solvable);
        assert!(!c.supersolvable);
    }

    #[test]
    fn product_orders() {
        let g = group_from_name("d4xd4", DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 64);
        assert_eq!(g.class_count(), 25);
        let g = group_from_name("c3xs3", DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(g.order(), 18);
    }

    #[test]
    fn builtin_corpus_orders_verify() {
        for entry in builtin_corpus() {
            let g = entry.build(DEFAULT_ORDER_CAP).unwrap();
            assert_eq!(g.order(), entry.expected_order, "{}", entry.name);
        }
    }
}
