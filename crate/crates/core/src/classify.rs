//! Enumeration and classification of product tables on two and three letters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::CheckError;
use crate::laws::{f3_law_failure, is_weak_shuffle, pairs_of_total};
use crate::lincomb::WordComb;
use crate::product::Engine;
use crate::report::{CheckReport, Failure};
use crate::scalar::Scalar;
use crate::table::{table_from_tuple, tuple_len, F3Map, ProductRule, StuffleTable};
use crate::word::{words_of_length, Letter, Word};

/// One slot of a family template.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Zero,
    One,
    /// A free nonzero parameter `k`.
    K,
    /// A second free nonzero parameter `m`.
    M,
    /// A free parameter `α`.
    Alpha,
    /// `1 − α` for the same `α`.
    OneMinusAlpha,
}

use Slot::{Alpha as A, OneMinusAlpha as B, One as I, Zero as O, K, M};

/// The two-letter families, in tuple order
/// `(f1(a⊗b), f1(b⊗a), f1(a⊗a), f2(a⊗a), f1(b⊗b), f2(b⊗b))`.
pub const FAMILIES_2: [[Slot; 6]; 10] = [
    [O, O, O, O, O, O],
    [K, O, O, O, O, O],
    [I, O, I, I, O, O],
    [I, O, O, O, I, I],
    [O, O, I, I, O, O],
    [O, O, I, I, I, I],
    [I, O, A, B, O, O],
    [I, O, A, B, I, I],
    [I, O, I, I, I, I],
    [I, I, I, I, I, I],
];

/// The three-letter families, in tuple order
/// `(ab, ba, bc, cb, ac, ca, f1(aa), f2(aa), f1(bb), f2(bb), f1(cc), f2(cc))`.
pub const FAMILIES_3: [[Slot; 12]; 47] = [
    [O, O, O, O, O, O, O, O, O, O, O, O],
    [O, O, O, O, O, O, I, I, O, O, O, O],
    [O, O, O, O, O, O, I, I, I, I, O, O],
    [O, O, O, O, O, O, I, I, I, I, I, I],
    [K, O, O, O, O, O, O, O, O, O, O, O],
    [K, O, O, O, O, O, O, O, O, O, I, I],
    [I, O, O, O, O, O, I, I, O, O, O, O],
    [I, O, O, O, O, O, O, O, I, I, O, O],
    [I, O, O, O, O, O, I, I, I, I, O, O],
    [I, O, O, O, O, O, I, I, O, O, I, I],
    [I, O, O, O, O, O, O, O, I, I, I, I],
    [I, O, O, O, O, O, I, I, I, I, I, I],
    [I, I, O, O, O, O, I, I, I, I, O, O],
    [I, I, O, O, O, O, I, I, I, I, I, I],
    [K, O, O, M, O, O, O, O, O, O, O, O],
    [K, O, O, I, O, O, O, O, O, O, I, I],
    [I, O, O, I, O, O, O, O, I, I, O, O],
    [I, O, O, I, O, O, I, I, I, I, O, O],
    [I, O, O, I, O, O, I, I, O, O, I, I],
    [I, O, O, I, O, O, I, I, I, I, I, I],
    [K, O, O, O, M, O, O, O, O, O, O, O],
    [I, O, O, O, I, O, I, I, O, O, O, O],
    [I, O, O, O, I, O, A, B, O, O, O, O],
    [K, O, O, O, I, O, O, O, O, O, I, I],
    [I, O, O, O, I, O, I, I, I, I, O, O],
    [I, O, O, O, I, O, A, B, I, I, O, O],
    [I, O, O, O, I, O, O, O, I, I, I, I],
    [I, O, O, O, I, O, I, I, I, I, I, I],
    [I, O, O, O, I, O, A, B, I, I, I, I],
    [K, O, M, O, I, O, O, O, O, O, O, O],
    [I, O, K, O, I, O, I, I, O, O, O, O],
    [I, O, I, O, I, O, O, O, I, I, O, O],
    [K, O, I, O, I, O, O, O, O, O, I, I],
    [I, O, I, O, I, O, I, I, I, I, O, O],
    [I, O, I, O, I, O, I, I, O, O, I, I],
    [I, O, I, O, I, O, O, O, I, I, I, I],
    [I, O, I, O, I, O, I, I, I, I, I, I],
    [I, O, K, O, I, O, A, B, O, O, O, O],
    [I, O, I, O, I, O, A, B, I, I, O, O],
    [I, O, I, O, I, O, A, B, O, O, I, I],
    [I, O, I, O, I, O, A, B, I, I, I, I],
    [I, I, I, O, I, O, I, I, I, I, O, O],
    [I, I, I, O, I, O, I, I, I, I, I, I],
    [I, I, O, I, O, I, I, I, I, I, O, O],
    [I, I, O, I, O, I, I, I, I, I, I, I],
    [I, I, O, I, O, I, I, I, I, I, A, B],
    [I; 12],
];

/// The templates for an alphabet size.
pub fn family_templates(c: usize) -> Option<Vec<&'static [Slot]>> {
    match c {
        2 => Some(FAMILIES_2.iter().map(|f| &f[..]).collect()),
        3 => Some(FAMILIES_3.iter().map(|f| &f[..]).collect()),
        _ => None,
    }
}

/// A matched family with its parameter values.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyId<K> {
    pub alphabet: usize,
    /// 1-based family index.
    pub index: usize,
    /// Bound parameters, named `k`, `m` or `α`.
    pub bindings: Vec<(&'static str, K)>,
}

impl<K: Scalar> fmt::Display for FamilyId<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.index)?;
        if !self.bindings.is_empty() {
            let parts: Vec<String> = self.bindings.iter().map(|(n, v)| format!("{n}={v}")).collect();
            write!(f, "({})", parts.join(", "))?;
        }
        Ok(())
    }
}

fn bind<K: Scalar>(template: &[Slot], tuple: &[K]) -> Option<Vec<(&'static str, K)>> {
    let mut k = None;
    let mut m = None;
    let mut alpha = None;
    for (slot, v) in template.iter().zip(tuple) {
        match slot {
            Slot::Zero if !v.is_zero() => return None,
            Slot::One if !v.is_one() => return None,
            Slot::K | Slot::M if v.is_zero() => return None,
            Slot::K => k = Some(v.clone()),
            Slot::M => m = Some(v.clone()),
            Slot::Alpha => alpha = Some(v.clone()),
            _ => {}
        }
    }
    if let Some(a) = &alpha {
        let pos = template.iter().position(|s| *s == Slot::OneMinusAlpha)?;
        if tuple[pos] != K::one() - a.clone() {
            return None;
        }
    }
    let mut out = Vec::new();
    if let Some(v) = k {
        out.push(("k", v));
    }
    if let Some(v) = m {
        out.push(("m", v));
    }
    if let Some(v) = alpha {
        out.push(("α", v));
    }
    Some(out)
}

/// Every family whose template matches the table's tuple.
pub fn match_all<K: Scalar>(t: &StuffleTable<K>) -> Vec<FamilyId<K>> {
    let (Some(templates), Ok(tuple)) = (family_templates(t.size()), t.tuple()) else {
        return Vec::new();
    };
    if !t.is_shuffle_type() || tuple_is_inconsistent(t) {
        return Vec::new();
    }
    templates
        .iter()
        .enumerate()
        .filter_map(|(i, tpl)| bind(tpl, &tuple).map(|b| FamilyId { alphabet: t.size(), index: i + 1, bindings: b }))
        .collect()
}

/// The first family matching the table, if any.
pub fn match_family<K: Scalar>(t: &StuffleTable<K>) -> Option<FamilyId<K>> {
    match_all(t).into_iter().next()
}

// the printed tuples only cover tables with f2(a⊗b) = f1(b⊗a) off the diagonal
fn tuple_is_inconsistent<K: Scalar>(t: &StuffleTable<K>) -> bool {
    t.letters().any(|a| t.letters().any(|b| a != b && t.f2_at(a, b) != t.f1_at(b, a)))
}

/// A family template at `k = m = 1` and the given `α`.
pub fn instantiate<K: Scalar>(template: &[Slot], alpha: &K) -> Vec<K> {
    template
        .iter()
        .map(|s| match s {
            Slot::Zero => K::zero(),
            Slot::One | Slot::K | Slot::M => K::one(),
            Slot::Alpha => alpha.clone(),
            Slot::OneMinusAlpha => K::one() - alpha.clone(),
        })
        .collect()
}

/// All instantiations at `k = m = 1` and `α ∈ {0, 1}`, as `(index, α, table)`.
pub fn family_instances<K: Scalar>(c: usize) -> Vec<(usize, Option<K>, StuffleTable<K>)> {
    let mut out = Vec::new();
    for (i, tpl) in family_templates(c).expect("families exist for 2 or 3 letters").into_iter().enumerate() {
        let alphas: Vec<Option<K>> = if tpl.contains(&Slot::Alpha) {
            vec![Some(K::zero()), Some(K::one())]
        } else {
            vec![None]
        };
        for alpha in alphas {
            let tuple = instantiate(tpl, alpha.as_ref().unwrap_or(&K::zero()));
            let t = table_from_tuple(c, &tuple, F3Map::new()).expect("template length");
            out.push((i + 1, alpha, t));
        }
    }
    out
}

/// The `{0, 1}` grid.
pub fn grid_01<K: Scalar>() -> Vec<K> {
    vec![K::zero(), K::one()]
}

/// The extended grid `{0, 1, 2, 1/2}`.
pub fn grid_ext<K: Scalar>() -> Vec<K> {
    vec![K::zero(), K::one(), K::from_int(2), K::from_ratio(1, 2)]
}

fn tuple_at<K: Scalar>(grid: &[K], len: usize, mut idx: u64) -> Vec<K> {
    let g = grid.len() as u64;
    let mut out = vec![K::zero(); len];
    for slot in out.iter_mut().rev() {
        *slot = grid[(idx % g) as usize].clone();
        idx /= g;
    }
    out
}

/// Every tuple over `grid` for `c` letters, in odometer order (first slot most significant).
pub fn all_tuple_tables<K: Scalar>(c: usize, grid: &[K]) -> Vec<StuffleTable<K>> {
    let len = tuple_len(c).expect("tuples exist for 2 or 3 letters");
    let count = (grid.len() as u64).pow(len as u32);
    (0..count)
        .map(|i| table_from_tuple(c, &tuple_at(grid, len, i), F3Map::new()).expect("tuple length"))
        .collect()
}

/// Tables with tuple entries in `grid` that satisfy the characterization, in grid order.
pub fn enumerate_weak_shuffles<K: Scalar>(c: usize, grid: &[K]) -> Vec<StuffleTable<K>> {
    let len = tuple_len(c).expect("tuples exist for 2 or 3 letters");
    let count = (grid.len() as u64).pow(len as u32);
    (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let t = table_from_tuple(c, &tuple_at(grid, len, i), F3Map::new()).expect("tuple length");
            is_weak_shuffle(&t).then_some(t)
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// A letter-permutation class of tables.
#[derive(Clone, Debug)]
pub struct Orbit<K> {
    pub representative: StuffleTable<K>,
    pub family: Option<FamilyId<K>>,
    pub members: Vec<StuffleTable<K>>,
}

/// Groups tables into classes under relabelling of letters. The representative
/// is the member matching the lowest family index, else the first member.
/// Classes are listed in order of their first member in `tables`.
pub fn orbits<K: Scalar>(tables: &[StuffleTable<K>]) -> Vec<Orbit<K>> {
    let mut assigned = vec![false; tables.len()];
    let mut out = Vec::new();
    for i in 0..tables.len() {
        if assigned[i] {
            continue;
        }
        let images: Vec<StuffleTable<K>> =
            permutations(tables[i].size()).iter().map(|p| tables[i].permuted(p)).collect();
        let mut members = Vec::new();
        for j in i..tables.len() {
            if !assigned[j] && images.iter().any(|m| *m == tables[j]) {
                assigned[j] = true;
                members.push(tables[j].clone());
            }
        }
        let best = members
            .iter()
            .filter_map(|m| match_family(m).map(|f| (f, m)))
            .min_by_key(|(f, _)| f.index);
        let (representative, family) = match best {
            Some((f, m)) => (m.clone(), Some(f)),
            None => (members[0].clone(), None),
        };
        out.push(Orbit { representative, family, members });
    }
    out
}

/// Symmetric letter-valued maps with coefficients in `grid ∖ {0}` that are
/// commutative and associative on the letter span.
///
/// Candidates assign to each unordered pair either 0 or `k·g`; they are
/// scanned in odometer order over the pairs `(1,1), (1,2), …, (c,c)`.
pub fn enumerate_f3_tables<K: Scalar>(c: usize, grid: &[K]) -> Vec<F3Map<K>> {
    let coeffs: Vec<K> = grid.iter().filter(|k| !k.is_zero()).cloned().collect();
    let mut choices: Vec<Option<(K, Letter)>> = vec![None];
    for k in &coeffs {
        for g in 0..c {
            choices.push(Some((k.clone(), Letter::from_slot(g))));
        }
    }
    let pairs: Vec<(Letter, Letter)> = (0..c)
        .flat_map(|i| (i..c).map(move |j| (Letter::from_slot(i), Letter::from_slot(j))))
        .collect();
    let n = choices.len() as u64;
    let count = n.pow(pairs.len() as u32);
    (0..count)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut map = F3Map::new();
            let mut digits = vec![0usize; pairs.len()];
            for d in digits.iter_mut().rev() {
                *d = (idx % n) as usize;
                idx /= n;
            }
            for (&(a, b), &d) in pairs.iter().zip(&digits) {
                if let Some(v) = &choices[d] {
                    map.insert((a, b), v.clone());
                    map.insert((b, a), v.clone());
                }
            }
            let t = StuffleTable::<K>::classical(c).with_f3(map);
            f3_law_failure(&t).is_none().then(|| t.f3_map().clone())
        })
        .collect()
}

/// Diagonal maps `w ↦ s(w)·w` used as isomorphisms between table products.
#[derive(Clone, Debug, PartialEq)]
pub enum DiagonalMap<K> {
    Identity,
    /// `w ↦ w / n!` where `n` is the length of the leading run of `a`.
    Psi { a: Letter },
    /// `w ↦ w / kⁿ` when `w = aⁿ w'` with `w'` starting with `b`.
    Phi1 { a: Letter, b: Letter, k: K },
    /// `w ↦ w / k^(number of a)` when `w` is a block over `{a, c}` followed by a word starting with `b`.
    Phi2 { a: Letter, b: Letter, k: K },
}

impl<K: Scalar> DiagonalMap<K> {
    pub fn scalar(&self, w: &Word) -> K {
        match self {
            DiagonalMap::Identity => K::one(),
            DiagonalMap::Psi { a } => K::one() / K::factorial(w.leading_run(*a) as u32),
            DiagonalMap::Phi1 { a, b, k } => {
                let n = w.leading_run(*a);
                if w.letters().get(n) == Some(b) {
                    K::one() / k.powi(n as u32)
                } else {
                    K::one()
                }
            }
            DiagonalMap::Phi2 { a, b, k } => match w.letters().iter().position(|l| l == b) {
                Some(pos) => {
                    let n = w.letters()[..pos].iter().filter(|l| *l == a).count();
                    K::one() / k.powi(n as u32)
                }
                None => K::one(),
            },
        }
    }

    pub fn apply(&self, x: &WordComb<K>) -> WordComb<K> {
        x.scale_by(|w| self.scalar(w))
    }

    pub fn name(&self) -> &'static str {
        match self {
            DiagonalMap::Identity => "id",
            DiagonalMap::Psi { .. } => "psi",
            DiagonalMap::Phi1 { .. } => "phi1",
            DiagonalMap::Phi2 { .. } => "phi2",
        }
    }
}

/// The letter in the `f1(a⊗a) + f2(a⊗a) = 1` case of the characterization,
/// if the table has one.
pub fn psi_letter<K: Scalar>(t: &StuffleTable<K>) -> Option<Letter> {
    t.letters().find(|&a| {
        let (d1, d2) = (t.f1_at(a, a), t.f2_at(a, a));
        !(d1 == d2 && d1.is_boolean()) && d1.clone() + d2.clone() == K::one()
    })
}

/// `ψ` for the table's unique letter with `f1(a⊗a) + f2(a⊗a) = 1`, with the
/// normalized table (`f1(a⊗a) = f2(a⊗a) = 1`).
///
/// The identity holds as `ψ(u □' v) = ψ(u) □ ψ(v)`: from the normalized
/// product to the original one.
pub fn iso_psi<K: Scalar>(
    t: &StuffleTable<K>,
    a: Option<Letter>,
) -> Result<(DiagonalMap<K>, StuffleTable<K>), CheckError> {
    let found = psi_letter(t)
        .ok_or_else(|| CheckError::Precondition("no letter with f1(a⊗a) + f2(a⊗a) = 1 outside {0,1}".into()))?;
    if let Some(a) = a {
        if a != found {
            return Err(CheckError::Precondition(format!(
                "letter {} is not the letter with f1(a⊗a) + f2(a⊗a) = 1",
                t.names().format_word(&Word::letter(a))
            )));
        }
    }
    let mut target = t.clone();
    target.set_f1(found, found, K::one());
    target.set_f2(found, found, K::one());
    Ok((DiagonalMap::Psi { a: found }, target))
}

/// A match of the case list for a table with `f1(a⊗b) = k ∉ {0, 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ValzerounCase<K> {
    pub a: Letter,
    pub b: Letter,
    pub c: Option<Letter>,
    pub k: K,
    /// Case number, 1 to 10; 0 for the two-letter alphabet.
    pub case: usize,
    /// 1 for `φ1`, 2 for `φ2`.
    pub variant: u8,
}

/// Finds an ordered pair `(a, b)` with `f1(a⊗b) = k ∉ {0, 1}` and the other
/// base entries zero, and the case of the third letter.
pub fn valzeroun_case<K: Scalar>(t: &StuffleTable<K>) -> Option<ValzerounCase<K>> {
    if !t.is_shuffle_type() || !(2..=3).contains(&t.size()) || tuple_is_inconsistent(t) {
        return None;
    }
    let f1 = |x: Letter, y: Letter| t.f1_at(x, y).clone();
    let f2 = |x: Letter, y: Letter| t.f2_at(x, y).clone();
    for a in t.letters() {
        for b in t.letters().filter(|&b| b != a) {
            let k = f1(a, b);
            if k.is_boolean() {
                continue;
            }
            let base = [f1(b, a), f1(a, a), f2(a, a), f1(b, b), f2(b, b)];
            if !base.iter().all(|v| v.is_zero()) {
                continue;
            }
            let Some(c) = t.letters().find(|&c| c != a && c != b) else {
                return Some(ValzerounCase { a, b, c: None, k, case: 0, variant: 1 });
            };
            if let Some(case) = third_letter_case(
                [f1(a, c), f1(b, c), f1(c, a), f1(c, b)],
                (f1(c, c), f2(c, c)),
            ) {
                let variant = if (4..=8).contains(&case) { 2 } else { 1 };
                return Some(ValzerounCase { a, b, c: Some(c), k, case, variant });
            }
        }
    }
    None
}

fn third_letter_case<K: Scalar>(e: [K; 4], (d1, d2): (K, K)) -> Option<usize> {
    // Z: zero, I: one, P: any nonzero
    #[derive(Clone, Copy)]
    enum V {
        Z,
        I,
        P,
    }
    #[derive(Clone, Copy)]
    enum D {
        Bool,
        Zero,
        One,
        SumOne,
    }
    use V::{I as VI, P, Z};
    const CASES: [([V; 4], D); 10] = [
        ([Z, Z, Z, Z], D::Bool),
        ([VI, P, Z, Z], D::Zero),
        ([VI, VI, Z, Z], D::One),
        ([Z, Z, P, VI], D::Zero),
        ([Z, Z, VI, VI], D::One),
        ([Z, Z, VI, VI], D::SumOne),
        ([Z, Z, Z, P], D::Zero),
        ([Z, Z, Z, VI], D::One),
        ([P, Z, Z, Z], D::Zero),
        ([VI, Z, Z, Z], D::One),
    ];
    let fits = |v: V, x: &K| match v {
        V::Z => x.is_zero(),
        V::I => x.is_one(),
        V::P => !x.is_zero(),
    };
    let diag = |d: D| match d {
        D::Bool => d1 == d2 && d1.is_boolean(),
        D::Zero => d1.is_zero() && d2.is_zero(),
        D::One => d1.is_one() && d2.is_one(),
        D::SumOne => d1.clone() + d2.clone() == K::one() && !(d1 == d2 && d1.is_boolean()),
    };
    CASES
        .iter()
        .position(|(vs, d)| vs.iter().zip(&e).all(|(v, x)| fits(*v, x)) && diag(*d))
        .map(|i| i + 1)
}

/// `φ1` or `φ2` for the pair `(a, b)`, with the target table where
/// `f1(a⊗b) = f2(b⊗a) = 1`.
pub fn iso_phi<K: Scalar>(
    t: &StuffleTable<K>,
    pair: (Letter, Letter),
    k: K,
    variant: u8,
) -> Result<(DiagonalMap<K>, StuffleTable<K>), CheckError> {
    let (a, b) = pair;
    let found = valzeroun_case(t)
        .filter(|m| m.a == a && m.b == b)
        .ok_or_else(|| CheckError::Precondition("the table matches none of the listed cases for this pair".into()))?;
    if found.k != k {
        return Err(CheckError::Precondition(format!("f1(a⊗b) is {}, not {k}", found.k)));
    }
    let map = match variant {
        1 => DiagonalMap::Phi1 { a, b, k },
        2 => DiagonalMap::Phi2 { a, b, k },
        _ => return Err(CheckError::Precondition("variant must be 1 or 2".into())),
    };
    let mut target = t.clone();
    target.set_f1(a, b, K::one());
    target.set_f2(b, a, K::one());
    Ok((map, target))
}

/// `φ1` or `φ2` as chosen by the matched case.
pub fn iso_phi_auto<K: Scalar>(t: &StuffleTable<K>) -> Result<(DiagonalMap<K>, StuffleTable<K>), CheckError> {
    let m = valzeroun_case(t)
        .ok_or_else(|| CheckError::Precondition("the table matches none of the listed cases".into()))?;
    iso_phi(t, (m.a, m.b), m.k, m.variant)
}

/// `map(u □_source v) = map(u) □_target map(v)` on non-empty pairs up to total length `n`.
pub fn verify_morphism<K: Scalar>(
    map: &DiagonalMap<K>,
    source: &dyn ProductRule<K>,
    target: &dyn ProductRule<K>,
    n: usize,
) -> Result<CheckReport, CheckError> {
    let c = source.check_alphabet(n).min(target.check_alphabet(n));
    let names = source.names();
    let mut es = Engine::new(source);
    let mut et = Engine::new(target);
    for t in 2..=n {
        for (u, v) in pairs_of_total(t, c) {
            let l = map.apply(&*es.product(&u, &v)?);
            let r = et.product(&u, &v)?.scale(&(map.scalar(&u) * map.scalar(&v)));
            if l != r {
                let f = Failure::new(
                    format!("{0}(u□v) = {0}(u)□'{0}(v)", map.name()),
                    vec![u.clone(), v.clone()],
                    vec![names.format_word(&u), names.format_word(&v)],
                    l.render(names),
                    r.render(names),
                );
                return Ok(CheckReport::fail("morphism", Some(n), f));
            }
        }
    }
    Ok(CheckReport::pass("morphism", Some(n)))
}

/// Degree-`n` elements with vanishing square.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareZero {
    /// `Some(d)` when the elimination resolved the kernel to a linear span.
    pub dimension: Option<usize>,
    /// Spanning words when resolved, sorted.
    pub basis: Vec<Word>,
    /// Constraints left when unresolved, as text.
    pub remaining: Vec<String>,
}

impl SquareZero {
    pub fn describe(&self, names: &crate::word::LetterNames) -> String {
        match self.dimension {
            Some(0) => "dimension 0, {0}".into(),
            Some(d) => format!(
                "dimension {d}, Span({})",
                self.basis.iter().map(|w| names.format_word(w)).collect::<Vec<_>>().join(", ")
            ),
            None => format!("unresolved, {} constraints remain", self.remaining.len()),
        }
    }
}

/// Solves `(Σ λ_w w)² = 0` over words `w` of length `n` by repeated
/// elimination: a constraint reduced to a single square `c·λ_w²` forces
/// `λ_w = 0`.
pub fn square_zero_dim<K: Scalar>(rule: &dyn ProductRule<K>, n: usize) -> Result<SquareZero, CheckError> {
    let c = rule.alphabet_size();
    let words = words_of_length(n, c);
    let mut e = Engine::new(rule);
    // output word -> {(i, j) with i ≤ j -> coefficient of λ_i λ_j}
    let mut forms: BTreeMap<Word, BTreeMap<(usize, usize), K>> = BTreeMap::new();
    for i in 0..words.len() {
        for j in i..words.len() {
            let mut prod = (*e.product(&words[i], &words[j])?).clone();
            if i != j {
                prod = prod.add(&*e.product(&words[j], &words[i])?);
            }
            for (z, k) in &prod {
                let entry = forms.entry(z.clone()).or_default().entry((i, j)).or_insert_with(K::zero);
                *entry = entry.clone() + k.clone();
            }
        }
    }
    let mut constraints: Vec<BTreeMap<(usize, usize), K>> = forms
        .into_values()
        .map(|m| m.into_iter().filter(|(_, k)| !k.is_zero()).collect::<BTreeMap<_, _>>())
        .filter(|m| !m.is_empty())
        .collect();
    let mut dead: BTreeSet<usize> = BTreeSet::new();
    loop {
        let forced: BTreeSet<usize> = constraints
            .iter()
            .filter(|m| m.len() == 1)
            .filter_map(|m| m.keys().next().filter(|(i, j)| i == j).map(|(i, _)| *i))
            .collect();
        if forced.is_empty() {
            break;
        }
        dead.extend(forced);
        constraints = constraints
            .into_iter()
            .map(|m| m.into_iter().filter(|((i, j), _)| !dead.contains(i) && !dead.contains(j)).collect::<BTreeMap<_, _>>())
            .filter(|m| !m.is_empty())
            .collect();
    }
    if constraints.is_empty() {
        let mut basis: Vec<Word> = (0..words.len()).filter(|i| !dead.contains(i)).map(|i| words[i].clone()).collect();
        basis.sort();
        return Ok(SquareZero { dimension: Some(basis.len()), basis, remaining: Vec::new() });
    }
    let names = rule.names();
    let remaining = constraints
        .iter()
        .map(|m| {
            m.iter()
                .map(|((i, j), k)| format!("{k}*λ[{}]λ[{}]", names.format_word(&words[*i]), names.format_word(&words[*j])))
                .collect::<Vec<_>>()
                .join(" + ")
                + " = 0"
        })
        .collect();
    Ok(SquareZero { dimension: None, basis: Vec::new(), remaining })
}
