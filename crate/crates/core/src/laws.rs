//! Exhaustive checks of the product identities on bounded word lengths.
//!
//! Every scanning checker walks total lengths in ascending order and, inside a
//! level, tuples of words in lexicographic order, so a reported witness is the
//! smallest failing tuple.

use rayon::prelude::*;

use crate::error::CheckError;
use crate::lincomb::{TensorComb, WordComb};
use crate::product::{deconcat, deconcat_elem, Corner, Engine, Split};
use crate::report::{CheckReport, Failure};
use crate::scalar::Scalar;
use crate::table::{F3Map, ProductRule, StuffleTable};
use crate::word::{words_of_length, Letter, LetterNames, Word};

/// All ordered pairs of non-empty words over `c` letters with total length `t`, sorted.
pub fn pairs_of_total(t: usize, c: usize) -> Vec<(Word, Word)> {
    let mut out = Vec::new();
    for i in 1..t {
        let left = words_of_length(i, c);
        let right = words_of_length(t - i, c);
        for u in &left {
            for v in &right {
                out.push((u.clone(), v.clone()));
            }
        }
    }
    out.sort();
    out
}

/// All ordered triples of non-empty words over `c` letters with total length `t`, sorted.
pub fn triples_of_total(t: usize, c: usize) -> Vec<(Word, Word, Word)> {
    let mut out = Vec::new();
    for i in 1..t {
        for j in 1..(t - i) {
            let (a, b, d) = (words_of_length(i, c), words_of_length(j, c), words_of_length(t - i - j, c));
            for x in &a {
                for y in &b {
                    for z in &d {
                        out.push((x.clone(), y.clone(), z.clone()));
                    }
                }
            }
        }
    }
    out.sort();
    out
}

type Outcome = Result<Option<Failure>, CheckError>;

/// Runs `f` over each level in parallel, stopping at the first level with a
/// failure and returning the earliest failing item of that level.
fn scan<'r, K, T, F>(rule: &'r dyn ProductRule<K>, levels: impl IntoIterator<Item = Vec<T>>, f: F) -> Outcome
where
    K: Scalar,
    T: Sync,
    F: Fn(&mut Engine<'r, K>, &T) -> Outcome + Sync,
{
    for level in levels {
        let hit = level
            .par_iter()
            .map_init(|| Engine::new(rule), |e, item| f(e, item))
            .find_first(|r| !matches!(r, Ok(None)));
        if let Some(r) = hit {
            return r;
        }
    }
    Ok(None)
}

fn elem_failure<K: Scalar>(
    names: &LetterNames,
    identity: &str,
    witness: &[&Word],
    lhs: &WordComb<K>,
    rhs: &WordComb<K>,
) -> Failure {
    Failure::new(
        identity,
        witness.iter().map(|w| (*w).clone()).collect(),
        witness.iter().map(|w| names.format_word(w)).collect(),
        lhs.render(names),
        rhs.render(names),
    )
}

fn require(cond: bool, msg: &str) -> Result<(), CheckError> {
    if cond {
        Ok(())
    } else {
        Err(CheckError::Precondition(msg.into()))
    }
}

/// `u □ v = v □ u` for all non-empty pairs with total length at most `n`.
pub fn check_commutative<K: Scalar>(rule: &dyn ProductRule<K>, n: usize) -> Result<CheckReport, CheckError> {
    require(n >= 2, "the length bound must be at least 2")?;
    let c = rule.check_alphabet(n);
    let names = rule.names();
    let out = scan(rule, (2..=n).map(|t| pairs_of_total(t, c)), |e, (u, v)| {
        let l = e.product(u, v)?;
        let r = e.product(v, u)?;
        Ok((l != r).then(|| elem_failure(names, "u□v = v□u", &[u, v], &l, &r)))
    })?;
    Ok(CheckReport::from_outcome("comm", Some(n), out))
}

/// `(u □ v) □ w = u □ (v □ w)` for all non-empty triples with total length at most `n`.
pub fn check_associative<K: Scalar>(rule: &dyn ProductRule<K>, n: usize) -> Result<CheckReport, CheckError> {
    require(n >= 3, "the length bound must be at least 3")?;
    let c = rule.check_alphabet(n);
    let names = rule.names();
    let out = scan(rule, (3..=n).map(|t| triples_of_total(t, c)), |e, (u, v, w)| {
        let uv = e.product(u, v)?;
        let l = e.product_elem(&uv, &WordComb::basis(w.clone()))?;
        let vw = e.product(v, w)?;
        let r = e.product_elem(&WordComb::basis(u.clone()), &vw)?;
        Ok((l != r).then(|| elem_failure(names, "(u□v)□w = u□(v□w)", &[u, v, w], &l, &r)))
    })?;
    Ok(CheckReport::from_outcome("assoc", Some(n), out))
}

/// Commutativity and then associativity; the first failure wins.
pub fn check_weak_stuffle<K: Scalar>(rule: &dyn ProductRule<K>, n: usize) -> Result<CheckReport, CheckError> {
    let comm = check_commutative(rule, n)?;
    if !comm.passed() {
        return Ok(comm);
    }
    check_associative(rule, n)
}

fn letter_failure<K: Scalar>(names: &LetterNames, identity: String, letters: &[Letter], lhs: &K, rhs: &K) -> Failure {
    let words: Vec<Word> = letters.iter().map(|&l| Word::letter(l)).collect();
    Failure::new(
        identity,
        words.clone(),
        words.iter().map(|w| names.format_word(w)).collect(),
        lhs.to_string(),
        rhs.to_string(),
    )
}

/// Evaluates the characterization relations on the table entries.
pub fn check_characterization<K: Scalar>(t: &StuffleTable<K>) -> Result<CheckReport, CheckError> {
    require(t.is_shuffle_type(), "the characterization applies to tables with empty f3")?;
    Ok(CheckReport::from_outcome("char", None, characterization_failure(t)))
}

fn characterization_failure<K: Scalar>(t: &StuffleTable<K>) -> Option<Failure> {
    let names = t.names();
    let f1 = |a: Letter, b: Letter| t.f1_at(a, b).clone();
    let f2 = |a: Letter, b: Letter| t.f2_at(a, b).clone();
    let one = K::one();
    let zero = K::zero();
    let letters: Vec<Letter> = t.letters().collect();
    let distinct = |a: &Letter| {
        let a = *a;
        letters.iter().copied().filter(move |b| *b != a)
    };

    for &a in &letters {
        for b in distinct(&a) {
            if f1(a, b) != f2(b, a) {
                return Some(letter_failure(names, "item 1: f1(a⊗b) = f2(b⊗a)".into(), &[a, b], &f1(a, b), &f2(b, a)));
            }
        }
    }
    for &a in &letters {
        let (d1, d2) = (f1(a, a), f2(a, a));
        if d1 == d2 && d1.is_boolean() {
            for b in distinct(&a) {
                let checks = [
                    ("item 2(a)(i): f1(a⊗b)f1(b⊗a)[f1(a⊗a)−1] = 0", f1(a, b) * f1(b, a) * (d1.clone() - one.clone())),
                    ("item 2(a)(ii): f1(a⊗a)f1(a⊗b)[f1(a⊗b)−1] = 0", d1.clone() * f1(a, b) * (f1(a, b) - one.clone())),
                    ("item 2(a)(iii): f1(a⊗a)f1(b⊗a)[f1(b⊗a)−1] = 0", d1.clone() * f1(b, a) * (f1(b, a) - one.clone())),
                ];
                for (id, v) in checks {
                    if !v.is_zero() {
                        return Some(letter_failure(names, id.into(), &[a, b], &v, &zero));
                    }
                }
            }
        } else if d1.clone() + d2.clone() == one {
            for b in distinct(&a) {
                if !f1(a, b).is_one() {
                    return Some(letter_failure(names, "item 2(b)(i): f1(a⊗b) = 1".into(), &[a, b], &f1(a, b), &one));
                }
                if !f1(b, a).is_zero() {
                    return Some(letter_failure(names, "item 2(b)(ii): f1(b⊗a) = 0".into(), &[a, b], &f1(b, a), &zero));
                }
            }
        } else {
            return Some(letter_failure(
                names,
                "item 2: f1(a⊗a) = f2(a⊗a) ∈ {0,1} or f1(a⊗a) + f2(a⊗a) = 1".into(),
                &[a],
                &d1,
                &d2,
            ));
        }
    }
    for &a in &letters {
        for b in distinct(&a) {
            for c in distinct(&a).filter(|c| *c != b) {
                let v = f1(a, b) * f1(b, c) * (f1(a, c) - one.clone());
                if !v.is_zero() {
                    return Some(letter_failure(
                        names,
                        "item 3: f1(a⊗b)f1(b⊗c)[f1(a⊗c)−1] = 0".into(),
                        &[a, b, c],
                        &v,
                        &zero,
                    ));
                }
            }
        }
    }
    None
}

/// Whether the table entries satisfy the characterization (f3 must be empty).
pub fn is_weak_shuffle<K: Scalar>(t: &StuffleTable<K>) -> bool {
    t.is_shuffle_type() && characterization_failure(t).is_none()
}

fn split_check<'r, K: Scalar>(
    e: &mut Engine<'r, K>,
    names: &LetterNames,
    identity: &str,
    witness: &[&Word],
    lhs: &[(Split, Split, bool)],
    rhs: &[(Split, Split, bool)],
) -> Outcome {
    // each entry (outer, inner, inner_on_left): (x inner y) outer z, or x outer (y inner z)
    let (x, y, z) = (witness[0], witness[1], witness[2]);
    let mut sides = Vec::with_capacity(2);
    for side in [lhs, rhs] {
        let mut total = WordComb::zero();
        for &(outer, inner, left) in side {
            let part = if left {
                let xy = e.split_elem(inner, &WordComb::basis(x.clone()), &WordComb::basis(y.clone()))?;
                e.split_elem(outer, &xy, &WordComb::basis(z.clone()))?
            } else {
                let yz = e.split_elem(inner, &WordComb::basis(y.clone()), &WordComb::basis(z.clone()))?;
                e.split_elem(outer, &WordComb::basis(x.clone()), &yz)?
            };
            total = total.add(&part);
        }
        sides.push(total);
    }
    Ok((sides[0] != sides[1]).then(|| elem_failure(names, identity, witness, &sides[0], &sides[1])))
}

/// The three dendriform axioms for `≺`, `≻` on non-empty triples up to total length `n`.
pub fn check_dendriform<K: Scalar>(rule: &dyn ProductRule<K>, n: usize) -> Result<CheckReport, CheckError> {
    require(n >= 3, "the length bound must be at least 3")?;
    Engine::new(rule).dendriform_hypothesis()?;
    let c = rule.check_alphabet(n);
    let names = rule.names();
    use Split::{Left as L, Right as R};
    let out = scan(rule, (3..=n).map(|t| triples_of_total(t, c)), |e, (x, y, z)| {
        let wit = [x, y, z];
        if let Some(f) = split_check(e, names, "(x≺y)≺z = x≺(y≺z) + x≺(y≻z)", &wit, &[(L, L, true)], &[(L, L, false), (L, R, false)])? {
            return Ok(Some(f));
        }
        if let Some(f) = split_check(e, names, "(x≻y)≺z = x≻(y≺z)", &wit, &[(L, R, true)], &[(R, L, false)])? {
            return Ok(Some(f));
        }
        split_check(e, names, "(x≺y)≻z + (x≻y)≻z = x≻(y≻z)", &wit, &[(R, L, true), (R, R, true)], &[(R, R, false)])
    })?;
    Ok(CheckReport::from_outcome("dendriform", Some(n), out))
}

/// `≺ + ≻ = □` and `∧ + ∨ = □_E` on non-empty pairs up to total length `n`.
pub fn check_split_sums<K: Scalar>(rule: &dyn ProductRule<K>, n: usize) -> Result<CheckReport, CheckError> {
    Engine::new(rule).dendriform_hypothesis()?;
    let c = rule.check_alphabet(n);
    let names = rule.names();
    let out = scan(rule, (2..=n).map(|t| pairs_of_total(t, c)), |e, (u, v)| {
        let front = e.dendri_left(u, v)?.add(&e.dendri_right(u, v)?);
        let full = (*e.product(u, v)?).clone();
        if front != full {
            return Ok(Some(elem_failure(names, "x≺y + x≻y = x□y", &[u, v], &front, &full)));
        }
        let back = e.wedge(u, v)?.add(&e.vee(u, v)?);
        let end = (*e.end_product(u, v)?).clone();
        Ok((back != end).then(|| elem_failure(names, "x∧y + x∨y = x□_E y", &[u, v], &back, &end)))
    })?;
    Ok(CheckReport::from_outcome("split-sums", Some(n), out))
}

/// Quadri operations as sums of corners.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Quad {
    C(Corner),
    /// `≺ = ↖ + ↙`
    Left,
    /// `≻ = ↗ + ↘`
    Right,
    /// `∧ = ↗ + ↖`
    Wedge,
    /// `∨ = ↘ + ↙`
    Vee,
    Full,
}

impl Quad {
    fn corners(self) -> &'static [Corner] {
        use Corner::*;
        match self {
            Quad::C(NW) => &[NW],
            Quad::C(SW) => &[SW],
            Quad::C(NE) => &[NE],
            Quad::C(SE) => &[SE],
            Quad::Left => &[NW, SW],
            Quad::Right => &[NE, SE],
            Quad::Wedge => &[NE, NW],
            Quad::Vee => &[SE, SW],
            Quad::Full => &Corner::ALL,
        }
    }
}

fn quad_elem<K: Scalar>(e: &mut Engine<'_, K>, op: Quad, x: &WordComb<K>, y: &WordComb<K>) -> Result<WordComb<K>, CheckError> {
    let mut out = WordComb::zero();
    for &c in op.corners() {
        out = out.add(&e.split_elem(Split::Corner(c), x, y)?);
    }
    Ok(out)
}

/// `(lhs_outer, lhs_inner, rhs_outer, rhs_inner, name)`: `(x lhs_inner y) lhs_outer z = x rhs_outer (y rhs_inner z)`.
const QUADRI_AXIOMS: [(Quad, Quad, Quad, Quad, &str); 9] = {
    use Corner::*;
    use Quad::*;
    [
        (C(NW), C(NW), C(NW), Full, "(x↖y)↖z = x↖(y·z)"),
        (C(NW), C(NE), C(NE), Left, "(x↗y)↖z = x↗(y≺z)"),
        (C(NW), C(SW), C(SW), Wedge, "(x↙y)↖z = x↙(y∧z)"),
        (C(NW), C(SE), C(SE), C(NW), "(x↘y)↖z = x↘(y↖z)"),
        (C(SW), Left, C(SW), Vee, "(x≺y)↙z = x↙(y∨z)"),
        (C(SW), Right, C(SE), C(SW), "(x≻y)↙z = x↘(y↙z)"),
        (C(NE), Wedge, C(NE), Right, "(x∧y)↗z = x↗(y≻z)"),
        (C(NE), Vee, C(SE), C(NE), "(x∨y)↗z = x↘(y↗z)"),
        (C(SE), Full, C(SE), C(SE), "(x·y)↘z = x↘(y↘z)"),
    ]
};

/// Words over `c` letters whose lengths lie in `lengths`.
pub fn quadri_words(c: usize, lengths: &[usize]) -> Vec<Word> {
    let mut out: Vec<Word> = lengths.iter().flat_map(|&n| words_of_length(n, c)).collect();
    out.sort();
    out
}

/// Words with pairwise distinct letters, over `c` letters, with lengths in `lengths`.
pub fn distinct_letter_words(c: usize, lengths: &[usize]) -> Vec<Word> {
    quadri_words(c, lengths)
        .into_iter()
        .filter(|w| {
            let mut seen = vec![false; c];
            w.letters().iter().all(|l| !std::mem::replace(&mut seen[l.slot()], true))
        })
        .collect()
}

/// The nine quadri axioms for the corners built from `rule`, on triples drawn
/// from `words` with total length at most `max_total`.
///
/// With the classical shuffle every corner weight is 1; any other rule weights
/// the corners by its f1 and f2 values on the outer letters.
pub fn check_quadri_on<K: Scalar>(
    rule: &dyn ProductRule<K>,
    words: &[Word],
    max_total: usize,
) -> Result<CheckReport, CheckError> {
    require(!rule.has_contraction(), "quadri corners need an empty f3")?;
    require(words.iter().all(|w| w.len() >= 2), "quadri corners need words of length at least 2")?;
    let names = rule.names();
    let mut levels: Vec<Vec<(Word, Word, Word)>> = vec![Vec::new(); max_total + 1];
    for x in words {
        for y in words {
            for z in words {
                let t = x.len() + y.len() + z.len();
                if t <= max_total {
                    levels[t].push((x.clone(), y.clone(), z.clone()));
                }
            }
        }
    }
    for level in &mut levels {
        level.sort();
    }
    let out = scan(rule, levels, |e, (x, y, z)| {
        let (bx, by, bz) = (WordComb::basis(x.clone()), WordComb::basis(y.clone()), WordComb::basis(z.clone()));
        for &(lo, li, ro, ri, name) in &QUADRI_AXIOMS {
            let xy = quad_elem(e, li, &bx, &by)?;
            let l = quad_elem(e, lo, &xy, &bz)?;
            let yz = quad_elem(e, ri, &by, &bz)?;
            let r = quad_elem(e, ro, &bx, &yz)?;
            if l != r {
                return Ok(Some(elem_failure(names, name, &[x, y, z], &l, &r)));
            }
        }
        Ok(None)
    })?;
    Ok(CheckReport::from_outcome("quadri", Some(max_total), out))
}

/// The quadri axioms for the classical shuffle on `c` letters, word lengths in `[2, n−4]`, total at most `n`.
pub fn check_quadri<K: Scalar>(c: usize, n: usize) -> Result<CheckReport, CheckError> {
    require(n >= 6, "the length bound must be at least 6")?;
    let lengths: Vec<usize> = (2..=n - 4).collect();
    let t = StuffleTable::<K>::classical(c);
    check_quadri_on(&t, &quadri_words(c, &lengths), n)
}

/// Searches end tables with entries in `grid` whose end product agrees with
/// the front product of `t` on all pairs of total length at most `n`.
/// Candidates are scanned in odometer order over (f1 row-major, then f2),
/// and the first match is returned.
pub fn check_end_equality<K: Scalar>(
    t: &StuffleTable<K>,
    grid: &[K],
    n: usize,
) -> Result<Option<StuffleTable<K>>, CheckError> {
    require(t.is_shuffle_type(), "end products need an empty f3")?;
    let c = t.size();
    require(c <= 3, "the end-table search is limited to alphabets of at most 3 letters")?;
    require(!grid.is_empty(), "the grid must be non-empty")?;
    let mut e = Engine::new(t);
    let mut targets = Vec::new();
    for total in 2..=n {
        for (u, v) in pairs_of_total(total, c) {
            let r = (*e.product(&u, &v)?).clone();
            targets.push((u, v, r));
        }
    }
    let slots = 2 * c * c;
    let g = grid.len() as u64;
    let count = g.checked_pow(slots as u32).expect("search space too large");
    let found = (0..count).into_par_iter().find_first(|&idx| {
        let cand = end_candidate(c, grid, idx);
        let mut e = Engine::new(&cand);
        targets.iter().all(|(u, v, r)| e.end_product(u, v).map(|x| *x == *r).unwrap_or(false))
    });
    Ok(found.map(|idx| end_candidate(c, grid, idx).with_names(t.names().clone())))
}

fn end_candidate<K: Scalar>(c: usize, grid: &[K], mut idx: u64) -> StuffleTable<K> {
    let g = grid.len() as u64;
    let mut vals = Vec::with_capacity(2 * c * c);
    for _ in 0..2 * c * c {
        vals.push(grid[(idx % g) as usize].clone());
        idx /= g;
    }
    let (v1, v2) = vals.split_at(c * c);
    let rows = |v: &[K]| v.chunks(c).map(<[K]>::to_vec).collect::<Vec<_>>();
    StuffleTable::from_parts(c, rows(v1), rows(v2), F3Map::new())
}

/// `Δ(u □ v) = Δ(u) □ Δ(v)` on non-empty pairs up to total length `n`.
pub fn check_hopf_compat<K: Scalar>(rule: &dyn ProductRule<K>, n: usize) -> Result<CheckReport, CheckError> {
    require(n >= 2, "the length bound must be at least 2")?;
    let c = rule.check_alphabet(n);
    let names = rule.names();
    let out = scan(rule, (2..=n).map(|t| pairs_of_total(t, c)), |e, (u, v)| {
        let l: TensorComb<K> = deconcat_elem(&*e.product(u, v)?);
        let r = e.tensor_product(&deconcat(u), &deconcat(v))?;
        Ok((l != r).then(|| {
            Failure::new(
                "Δ(u□v) = Δ(u)□Δ(v)",
                vec![u.clone(), v.clone()],
                vec![names.format_word(u), names.format_word(v)],
                l.render(names),
                r.render(names),
            )
        }))
    })?;
    Ok(CheckReport::from_outcome("hopf", Some(n), out))
}

/// `f3` as a bilinear map on the letter span: `Some((k, g))` means `k·g`.
type F3Val<K> = Option<(K, Letter)>;

fn f3_compose<K: Scalar>(t: &StuffleTable<K>, x: &F3Val<K>, z: Letter, left: bool) -> F3Val<K> {
    let (k, g) = x.as_ref()?;
    let (k2, g2) = if left { t.f3_at(*g, z)? } else { t.f3_at(z, *g)? };
    Some((k.clone() * k2.clone(), *g2))
}

fn f3_text<K: Scalar>(names: &LetterNames, v: &F3Val<K>) -> String {
    match v {
        None => "0".into(),
        Some((k, g)) => WordComb::term(Word::letter(*g), k.clone()).render(names),
    }
}

/// Commutativity and associativity of `f3` on the letter span. `None` when both hold.
pub fn f3_law_failure<K: Scalar>(t: &StuffleTable<K>) -> Option<Failure> {
    let names = t.names();
    let val = |a: Letter, b: Letter| t.f3_at(a, b).cloned();
    let lw = |ls: &[Letter]| -> (Vec<Word>, Vec<String>) {
        let ws: Vec<Word> = ls.iter().map(|&l| Word::letter(l)).collect();
        let txt = ws.iter().map(|w| names.format_word(w)).collect();
        (ws, txt)
    };
    for a in t.letters() {
        for b in t.letters() {
            if val(a, b) != val(b, a) {
                let (ws, txt) = lw(&[a, b]);
                return Some(Failure::new("f3(a⊗b) = f3(b⊗a)", ws, txt, f3_text(names, &val(a, b)), f3_text(names, &val(b, a))));
            }
        }
    }
    for x in t.letters() {
        for y in t.letters() {
            for z in t.letters() {
                let l = f3_compose(t, &val(x, y), z, true);
                let r = f3_compose(t, &val(y, z), x, false);
                if l != r {
                    let (ws, txt) = lw(&[x, y, z]);
                    return Some(Failure::new("f3(f3(x⊗y)⊗z) = f3(x⊗f3(y⊗z))", ws, txt, f3_text(names, &l), f3_text(names, &r)));
                }
            }
        }
    }
    None
}

/// The necessary conditions on a weak stuffle table, evaluated on its entries.
///
/// Item 6(c)(ii) is checked in its printed squared form; the unsquared
/// variant `f1(x⊗a) = f1(x⊗b)` is evaluated too and reported as a note.
pub fn check_stuffle_relations<K: Scalar>(t: &StuffleTable<K>) -> CheckReport {
    let mut notes = Vec::new();
    let failure = stuffle_relations_failure(t, &mut notes);
    let mut report = CheckReport::from_outcome("stuffle-relations", None, failure);
    report.notes = notes;
    report
}

fn stuffle_relations_failure<K: Scalar>(t: &StuffleTable<K>, notes: &mut Vec<String>) -> Option<Failure> {
    let names = t.names();
    if let Some(mut f) = characterization_failure(&t.shuffle_part()) {
        f.identity = format!("item 1 (shuffle part): {}", f.identity);
        return Some(f);
    }
    if let Some(mut f) = f3_law_failure(t) {
        f.identity = format!("item 2: {}", f.identity);
        return Some(f);
    }
    let f1 = |a: Letter, b: Letter| t.f1_at(a, b).clone();
    let f2 = |a: Letter, b: Letter| t.f2_at(a, b).clone();
    let nz = |a: Letter, b: Letter| t.f3_at(a, b).is_some();
    let lands = |a: Letter, b: Letter, g: Letter| t.f3_at(a, b).is_some_and(|(_, h)| *h == g);
    let one = K::one();
    let zero = K::zero();
    let diag_ok = |a: Letter| f1(a, a) == f2(a, a) && f1(a, a).is_boolean();
    let letters: Vec<Letter> = t.letters().collect();
    let others = |ex: &[Letter]| letters.iter().copied().filter(|l| !ex.contains(l)).collect::<Vec<_>>();
    let fail = |id: &str, ls: &[Letter], l: K, r: K| Some(letter_failure(names, id.into(), ls, &l, &r));
    let mut unsquared_violations = 0usize;
    let mut unsquared_checked = 0usize;

    for &a in &letters {
        if nz(a, a) && !diag_ok(a) {
            return fail("item 3: f3(a⊗a) ≠ 0 ⇒ f1(a⊗a) = f2(a⊗a) ∈ {0,1}", &[a], f1(a, a), f2(a, a));
        }
        for b in others(&[a]) {
            if nz(a, b) {
                for x in [a, b] {
                    if !diag_ok(x) {
                        return fail("item 4: f3(a⊗b) ≠ 0 ⇒ f1(x⊗x) = f2(x⊗x) ∈ {0,1} for x = a, b", &[a, b, x], f1(x, x), f2(x, x));
                    }
                }
            }
        }
    }
    for &a in &letters {
        if lands(a, a, a) {
            for b in others(&[a]) {
                if !f1(b, a).is_boolean() {
                    return fail("item 5: f3(a⊗a) ∈ K*a ⇒ f1(b⊗a) ∈ {0,1}", &[a, b], f1(b, a), zero.clone());
                }
            }
        }
    }
    for &a in &letters {
        for b in others(&[a]) {
            if !lands(a, a, b) {
                continue;
            }
            let six = [f1(a, a), f2(a, a), f1(b, b), f2(b, b), f1(a, b), f1(b, a)];
            let all_equal = six.iter().all(|v| *v == six[0]) && six[0].is_boolean();
            let trigger = nz(a, b) || nz(b, b) || others(&[a, b]).into_iter().any(|x| nz(b, x));
            if trigger && !all_equal {
                return fail(
                    "item 6(a): f1(a⊗a)=f2(a⊗a)=f1(b⊗b)=f2(b⊗b)=f1(a⊗b)=f1(b⊗a) ∈ {0,1}",
                    &[a, b],
                    f1(a, b),
                    f1(b, a),
                );
            }
            if !nz(a, b) && !nz(b, b) {
                let second = f1(a, a).is_one()
                    && f2(a, a).is_one()
                    && f1(b, a).is_one()
                    && f1(b, b) + f2(b, b) == one
                    && f1(a, b).is_zero();
                if !all_equal && !second {
                    return fail("item 6(b): case (i) or case (ii) holds", &[a, b], f1(a, b), f1(b, a));
                }
            }
            for x in others(&[a, b]) {
                if f1(a, x) != f1(b, x) {
                    return fail("item 6(c)(i): f1(a⊗x) = f1(b⊗x)", &[a, b, x], f1(a, x), f1(b, x));
                }
                unsquared_checked += 1;
                if f1(x, a) != f1(x, b) {
                    unsquared_violations += 1;
                }
                let sq = f1(x, a) * f1(x, a);
                if sq != f1(x, b) {
                    return fail("item 6(c)(ii): f1(x⊗a)² = f1(x⊗b)", &[a, b, x], sq, f1(x, b));
                }
            }
        }
    }
    if unsquared_checked > 0 {
        notes.push(if unsquared_violations == 0 {
            format!("item 6(c)(ii) unsquared form f1(x⊗a) = f1(x⊗b) holds on all {unsquared_checked} instances")
        } else {
            format!("item 6(c)(ii) unsquared form f1(x⊗a) = f1(x⊗b) fails on {unsquared_violations} of {unsquared_checked} instances")
        });
    }
    for &a in &letters {
        for b in others(&[a]) {
            if !lands(a, b, a) {
                continue;
            }
            let (ba, aa, ab, bb) = (f1(b, a), f1(a, a), f1(a, b), f1(b, b));
            if ba != aa.clone() * ab.clone() {
                return fail("item 7(a): f1(b⊗a) = f1(a⊗a)f1(a⊗b)", &[a, b], ba, aa * ab);
            }
            if ba != ba.clone() * bb.clone() {
                return fail("item 7(a): f1(b⊗a) = f1(b⊗a)f1(b⊗b)", &[a, b], ba.clone(), ba * bb);
            }
            if ab != bb {
                return fail("item 7(b): f1(a⊗b) = f1(b⊗b)", &[a, b], ab, bb);
            }
            for x in others(&[a, b]) {
                if lands(b, x, x) {
                    if ba != f1(x, a) * f1(x, b) {
                        return fail("item 7(d)(i): f1(b⊗a) = f1(x⊗a)f1(x⊗b)", &[a, b, x], ba, f1(x, a) * f1(x, b));
                    }
                    if f1(b, x) != ab.clone() * f1(a, x) {
                        return fail("item 7(d)(ii): f1(b⊗x) = f1(a⊗b)f1(a⊗x)", &[a, b, x], f1(b, x), ab.clone() * f1(a, x));
                    }
                } else {
                    if f1(a, x) != f1(b, x) {
                        return fail("item 7(c)(i): f1(a⊗x) = f1(b⊗x)", &[a, b, x], f1(a, x), f1(b, x));
                    }
                    let v = f1(x, a) * (one.clone() - f1(x, b));
                    if !v.is_zero() {
                        return fail("item 7(c)(ii): f1(x⊗a)[1 − f1(x⊗b)] = 0", &[a, b, x], v, zero.clone());
                    }
                }
            }
        }
    }
    for &a in &letters {
        for b in others(&[a]) {
            for c in others(&[a, b]) {
                if !lands(a, b, c) {
                    continue;
                }
                if !diag_ok(c) {
                    return fail("item 8(a): f1(c⊗c) = f2(c⊗c) ∈ {0,1}", &[a, b, c], f1(c, c), f2(c, c));
                }
                if f1(b, a) != f1(c, a) || f1(c, a) != f1(a, a) {
                    return fail("item 8(b): f1(b⊗a) = f1(c⊗a) = f1(a⊗a)", &[a, b, c], f1(b, a), f1(c, a));
                }
                if f1(a, b) != f1(c, b) || f1(c, b) != f1(b, b) {
                    return fail("item 8(c): f1(a⊗b) = f1(c⊗b) = f1(b⊗b)", &[a, b, c], f1(a, b), f1(c, b));
                }
                let prod = f1(a, a) * f1(b, b);
                if f1(a, c) != prod || f1(b, c) != prod || f1(c, c) != prod {
                    return fail("item 8(d): f1(a⊗c) = f1(a⊗a)f1(b⊗b) = f1(b⊗c) = f1(c⊗c)", &[a, b, c], f1(a, c), prod);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Rational, SmallRational};
    use crate::table::{builtin_spec, table_from_tuple};
    use crate::word::w;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn tuple2(t: [i64; 6]) -> StuffleTable<Rational> {
        table_from_tuple(2, &t.map(q), F3Map::new()).unwrap()
    }

    #[test]
    fn level_generation() {
        let p = pairs_of_total(3, 2);
        assert_eq!(p.len(), 2 * 4 + 4 * 2);
        assert!(p.windows(2).all(|x| x[0] < x[1]));
        assert_eq!(triples_of_total(3, 2).len(), 8);
        assert_eq!(triples_of_total(4, 1).len(), 3);
    }

    #[test]
    fn commutativity() {
        assert!(check_commutative(&tuple2([1, 0, 1, 1, 1, 1]), 6).unwrap().passed());
        let sz = builtin_spec("sz", 0).unwrap();
        assert!(check_commutative::<Rational>(&sz, 6).unwrap().passed());

        let mut t = tuple2([1, 1, 0, 0, 0, 0]);
        assert!(check_commutative(&t, 4).unwrap().passed());
        t.set_f2(Letter::new(1), Letter::new(2), q(0));
        let r = check_commutative(&t, 4).unwrap();
        let f = r.failure.unwrap();
        assert_eq!(f.witness, vec![w("a"), w("b")]);
        assert_eq!((f.lhs.as_str(), f.rhs.as_str()), ("ab", "ab + ba"));
    }

    #[test]
    fn associativity() {
        let bz = builtin_spec("bz", 0).unwrap();
        assert!(check_associative::<Rational>(&bz, 6).unwrap().passed());
        let st = builtin_spec("stuffle", 12).unwrap();
        assert!(check_associative::<Rational>(&st, 6).unwrap().passed());
        let r = check_associative(&tuple2([1, 1, 0, 0, 0, 0]), 5).unwrap();
        assert!(!r.passed());
        assert_eq!(r.failure.unwrap().witness.iter().map(Word::len).sum::<usize>(), 3);
        assert!(check_associative(&tuple2([1, 0, 1, 1, 1, 1]), 2).is_err());
    }

    #[test]
    fn characterization() {
        assert!(check_characterization(&tuple2([1, 0, 1, 1, 1, 1])).unwrap().passed());
        assert!(check_characterization(&tuple2([1, 1, 1, 1, 1, 1])).unwrap().passed());
        let r = check_characterization(&tuple2([1, 1, 0, 0, 0, 0])).unwrap();
        assert!(r.failure.unwrap().identity.starts_with("item 2(a)(i)"));
        let half = Rational::from_ratio(1, 2);
        let c7 = table_from_tuple(2, &[q(1), q(0), half.clone(), half, q(0), q(0)], F3Map::new()).unwrap();
        assert!(is_weak_shuffle(&c7));
        let r = check_characterization(&tuple2([0, 0, 1, 0, 0, 0])).unwrap();
        assert!(r.failure.unwrap().identity.starts_with("item 2(b)(i)"));
        let st = builtin_spec("stuffle", 3).unwrap().induced_table::<Rational>();
        assert!(check_characterization(&st).is_err());
    }

    #[test]
    fn dendriform() {
        assert!(check_dendriform(&tuple2([1, 0, 1, 1, 1, 1]), 6).unwrap().passed());
        assert!(check_dendriform(&StuffleTable::<Rational>::classical(3), 5).unwrap().passed());
        assert!(check_split_sums(&tuple2([1, 0, 1, 0, 0, 0]), 5).unwrap().passed());
        let half = Rational::from_ratio(1, 2);
        let t = table_from_tuple(2, &[q(1), q(0), half.clone(), half, q(0), q(0)], F3Map::new()).unwrap();
        match check_dendriform(&t, 4) {
            Err(CheckError::Precondition(m)) => assert!(m.contains("f1(a⊗a)∈{0,1}")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quadri_classical_and_diagnostic() {
        assert!(check_quadri::<Rational>(2, 8).unwrap().passed());
        assert!(check_quadri_on(&StuffleTable::<SmallRational>::classical(4), &distinct_letter_words(4, &[2, 3]), 7)
            .unwrap()
            .passed());
        let c3 = tuple2([1, 0, 1, 1, 0, 0]);
        assert!(!check_quadri_on(&c3, &quadri_words(2, &[2, 3]), 9).unwrap().passed());
        assert_eq!(distinct_letter_words(3, &[2]).len(), 6);
    }

    #[test]
    fn end_equality() {
        let grid = [q(0), q(1)];
        let cl = StuffleTable::<Rational>::classical(2);
        assert_eq!(check_end_equality(&cl, &grid, 5).unwrap(), Some(cl.clone()));
        let null = StuffleTable::<Rational>::null(2);
        assert_eq!(check_end_equality(&null, &grid, 5).unwrap(), Some(null));
        assert_eq!(check_end_equality(&tuple2([1, 0, 1, 1, 0, 0]), &grid, 5).unwrap(), None);
    }

    #[test]
    fn hopf() {
        let st = builtin_spec("stuffle", 10).unwrap();
        assert!(check_hopf_compat::<Rational>(&st, 4).unwrap().passed());
        let r = check_hopf_compat(&StuffleTable::<Rational>::null(1), 2).unwrap();
        let f = r.failure.unwrap();
        assert_eq!(f.lhs, "0");
        assert!(f.rhs.contains("2*a⊗a"));
        let sz = builtin_spec("sz", 0).unwrap();
        assert!(!check_hopf_compat::<Rational>(&sz, 3).unwrap().passed());
    }

    #[test]
    fn stuffle_relations() {
        for name in ["sz", "bz"] {
            let t = builtin_spec(name, 0).unwrap().induced_table::<Rational>();
            let r = check_stuffle_relations(&t);
            assert!(r.passed(), "{name}: {r}");
        }
        let st = builtin_spec("stuffle", 8).unwrap().induced_table::<Rational>();
        assert!(check_stuffle_relations(&st).passed());

        let mut t = StuffleTable::<Rational>::classical(2);
        t.set_f2(Letter::new(1), Letter::new(1), q(0));
        t.set_f1(Letter::new(2), Letter::new(1), q(0));
        t.set_f2(Letter::new(1), Letter::new(2), q(0));
        t.set_f3(Letter::new(1), Letter::new(1), q(1), Letter::new(1));
        let r = check_stuffle_relations(&t);
        assert!(r.failure.unwrap().identity.starts_with("item 3"));

        let mut t = StuffleTable::<Rational>::classical(2);
        t.set_f3(Letter::new(1), Letter::new(2), q(1), Letter::new(1));
        let r = check_stuffle_relations(&t);
        assert!(r.failure.unwrap().identity.starts_with("item 2: f3(a⊗b) = f3(b⊗a)"));
    }

    #[test]
    fn f3_laws() {
        let mut t = StuffleTable::<Rational>::classical(2);
        let (a, b) = (Letter::new(1), Letter::new(2));
        t.set_f3(a, a, q(1), b);
        t.set_f3(a, b, q(1), a);
        t.set_f3(b, a, q(1), a);
        t.set_f3(b, b, q(1), b);
        assert!(f3_law_failure(&t).is_none());
        t.set_f3(b, b, q(2), b);
        assert!(f3_law_failure(&t).is_some());
    }
}
