//! Leading words of products on `{a, b}` and square-zero certificates.
//!
//! The product fixed here is the `C9` table
//! `(f1(a⊗b), f1(b⊗a), f1(a⊗a), f2(a⊗a), f1(b⊗b), f2(b⊗b)) = (1, 0, 1, 1, 1, 1)`.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::CheckError;
use crate::lincomb::WordComb;
use crate::product::Engine;
use crate::report::{CheckReport, Failure};
use crate::scalar::Scalar;
use crate::table::{table_from_tuple, F3Map, ProductRule, StuffleTable};
use crate::word::{words_of_length, Letter, LetterNames, Word};

const A: Letter = Letter::new(1);
const B: Letter = Letter::new(2);

/// The `C9` table on `{a, b}`.
pub fn c9_table<K: Scalar>() -> StuffleTable<K> {
    let t = [1, 0, 1, 1, 1, 1].map(K::from_int);
    table_from_tuple(2, &t, F3Map::new()).expect("six entries")
}

/// Words with nonzero coefficient in `u □ v`, ascending.
///
/// Follows the recursion on supports; when some table entry is negative the
/// engine support is used instead, since terms may cancel.
pub fn spectrum<K: Scalar>(rule: &dyn ProductRule<K>, u: &Word, v: &Word) -> Result<Vec<Word>, CheckError> {
    if rule.has_contraction() {
        return Err(CheckError::Precondition("spectrum needs an empty f3".into()));
    }
    let letters: BTreeSet<Letter> = u.letters().iter().chain(v.letters()).copied().collect();
    let negative = letters
        .iter()
        .any(|&a| letters.iter().any(|&b| rule.f1(a, b).is_negative() || rule.f2(a, b).is_negative()));
    if negative {
        return Ok(Engine::new(rule).product(u, v)?.support().cloned().collect());
    }
    let (u, v) = (u.letters(), v.letters());
    // table[i][j]: support of u[i..] □ v[j..]
    let mut table: Vec<Vec<BTreeSet<Vec<Letter>>>> = vec![vec![BTreeSet::new(); v.len() + 1]; u.len() + 1];
    for i in (0..=u.len()).rev() {
        for j in (0..=v.len()).rev() {
            let cell = if i == u.len() {
                BTreeSet::from([v[j..].to_vec()])
            } else if j == v.len() {
                BTreeSet::from([u[i..].to_vec()])
            } else {
                let (a, b) = (u[i], v[j]);
                let mut s = BTreeSet::new();
                if !rule.f1(a, b).is_zero() {
                    s.extend(table[i + 1][j].iter().map(|w| prefixed(a, w)));
                }
                if !rule.f2(a, b).is_zero() {
                    s.extend(table[i][j + 1].iter().map(|w| prefixed(b, w)));
                }
                s
            };
            table[i][j] = cell;
        }
    }
    Ok(std::mem::take(&mut table[0][0]).into_iter().map(Word::from_letters).collect())
}

fn prefixed(a: Letter, w: &[Letter]) -> Vec<Letter> {
    let mut out = Vec::with_capacity(w.len() + 1);
    out.push(a);
    out.extend_from_slice(w);
    out
}

fn check_ab(w: &Word) -> Result<(), CheckError> {
    match w.letters().iter().find(|l| l.index() > 2) {
        Some(l) => Err(CheckError::Precondition(format!("letter {} is outside {{a, b}}", l.index()))),
        None => Ok(()),
    }
}

/// The greatest word of `u □ v` for `C9`, by the case recursion on leading runs.
pub fn max_word_greedy(u: &Word, v: &Word) -> Result<Word, CheckError> {
    check_ab(u)?;
    check_ab(v)?;
    let mut memo = HashMap::new();
    Ok(Word::from_letters(greedy(u.letters(), v.letters(), &mut memo)))
}

fn run(s: &[Letter], l: Letter) -> usize {
    s.iter().take_while(|&&x| x == l).count()
}

type Memo = HashMap<(usize, usize), Vec<Letter>>;

fn greedy(u: &[Letter], v: &[Letter], memo: &mut Memo) -> Vec<Letter> {
    if u.is_empty() {
        return v.to_vec();
    }
    if v.is_empty() {
        return u.to_vec();
    }
    // every argument is a suffix of the original pair, so lengths identify it
    let key = (u.len(), v.len());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let out = match (u[0] == A, v[0] == A) {
        (true, true) => {
            let (al, be) = (run(u, A), run(v, A));
            let mut out = vec![A; al + be];
            out.extend(greedy(&u[al..], &v[be..], memo));
            out
        }
        (true, false) => {
            let al = run(u, A);
            let mut out = vec![A; al];
            out.extend(greedy(&u[al..], v, memo));
            out
        }
        (false, true) => {
            let be = run(v, A);
            let mut out = vec![A; be];
            out.extend(greedy(u, &v[be..], memo));
            out
        }
        (false, false) => {
            let (al, be) = (run(u, B), run(v, B));
            let (p, q) = (run(&u[al..], A), run(&v[be..], A));
            if p == 0 {
                [u, v].concat()
            } else if q == 0 {
                [v, u].concat()
            } else {
                let mut first = || {
                    let mut out = vec![B; al + be - 1];
                    out.extend(vec![A; q]);
                    out.extend(greedy(&u[al - 1..], &v[be + q..], memo));
                    out
                };
                let w1 = (q <= p).then(&mut first);
                let w2 = (p <= q).then(|| {
                    let mut out = vec![B; al + be - 1];
                    out.extend(vec![A; p]);
                    out.extend(greedy(&u[al + p..], &v[be - 1..], memo));
                    out
                });
                match (w1, w2) {
                    (Some(x), Some(y)) => x.max(y),
                    (Some(x), None) | (None, Some(x)) => x,
                    (None, None) => unreachable!(),
                }
            }
        }
    };
    memo.insert(key, out.clone());
    out
}

/// Walks the length-`n` words `W[1] < W[2] < …` and checks
/// `A_k < B_k` for `k ≥ 2`, where `B_k = max(W[k] □ W[k])` and
/// `A_k = max(max(w1 □ w2) : w1 < W[k], w2 ≤ W[k])`.
///
/// The program this mirrors seeds the walk at the sixth word, since the first
/// comparisons are immediate; starting at the second word checks the same
/// statement.
pub fn leading_statement(n: usize) -> CheckReport {
    leading_statement_with(n, |u, v| max_word_greedy(u, v).expect("words over {a, b}"))
}

/// [`leading_statement`] with a caller-supplied maximum.
pub fn leading_statement_with(n: usize, max: impl Fn(&Word, &Word) -> Word + Sync) -> CheckReport {
    assert!(n >= 1, "degree starts at 1");
    let words = words_of_length(n, 2);
    // per word: (best cross term with earlier words, square maximum)
    let rows: Vec<(Option<Word>, Word)> = (0..words.len())
        .into_par_iter()
        .map(|k| {
            let cross = (0..k).map(|i| max(&words[i], &words[k])).max();
            (cross, max(&words[k], &words[k]))
        })
        .collect();
    let names = LetterNames::default();
    let mut running: Option<Word> = None;
    let mut prev_square: Option<Word> = None;
    for (k, (cross, square)) in rows.into_iter().enumerate() {
        running = running.max(prev_square.take()).max(cross);
        if k >= 1 {
            let a = running.clone().expect("earlier words exist");
            if a >= square {
                let f = Failure::new(
                    "max(w1□w2) < max(w□w)",
                    vec![words[k].clone()],
                    vec![names.format_word(&words[k])],
                    names.format_word(&a),
                    names.format_word(&square),
                );
                return CheckReport::fail("leading-statement", Some(n), f);
            }
        }
        prev_square = Some(square);
    }
    CheckReport::pass("leading-statement", Some(n))
}

/// Coefficient of `z` in `u □ v`, for a rule with empty f3.
pub fn coefficient_of<K: Scalar>(rule: &dyn ProductRule<K>, u: &Word, v: &Word, z: &Word) -> K {
    let (u, v, z) = (u.letters(), v.letters(), z.letters());
    if z.len() != u.len() + v.len() {
        return K::zero();
    }
    let mut c = vec![vec![K::zero(); v.len() + 1]; u.len() + 1];
    for i in (0..=u.len()).rev() {
        for j in (0..=v.len()).rev() {
            let pos = i + j;
            c[i][j] = if i == u.len() {
                if v[j..] == z[pos..] { K::one() } else { K::zero() }
            } else if j == v.len() {
                if u[i..] == z[pos..] { K::one() } else { K::zero() }
            } else {
                let (a, b) = (u[i], v[j]);
                let mut acc = K::zero();
                if z[pos] == a {
                    acc = acc + rule.f1(a, b) * c[i + 1][j].clone();
                }
                if z[pos] == b {
                    acc = acc + rule.f2(a, b) * c[i][j + 1].clone();
                }
                acc
            };
        }
    }
    c[0][0].clone()
}

/// Outcome of [`square_zero_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    ProvenZero,
    Inconclusive(String),
}

impl Certificate {
    pub fn is_proven(&self) -> bool {
        matches!(self, Certificate::ProvenZero)
    }
}

/// Certifies that no nonzero degree-`n` element squares to zero under `C9`:
/// the leading-word statement holds and each `max(w □ w)` has a nonzero
/// coefficient in `w □ w`.
pub fn square_zero_certificate(n: usize) -> Certificate {
    let report = leading_statement(n);
    if let Some(f) = &report.failure {
        return Certificate::Inconclusive(format!("statement fails at {}", f.witness_text.join(", ")));
    }
    let c9 = c9_table::<crate::scalar::Rational>();
    let names = LetterNames::default();
    let bad = words_of_length(n, 2).into_par_iter().find_first(|w| {
        let top = max_word_greedy(w, w).expect("words over {a, b}");
        coefficient_of(&c9, w, w, &top).is_zero()
    });
    match bad {
        Some(w) => Certificate::Inconclusive(format!("max({0}□{0}) has coefficient 0", names.format_word(&w))),
        None => Certificate::ProvenZero,
    }
}

/// One closed-form power: `base^p` is `coeff·word`, or has leading word `word` when `exact` is false.
struct PowerForm {
    base: &'static str,
    exact: bool,
    coeff: fn(u32) -> i64,
    word: fn(u32) -> String,
}

fn fact(n: u32) -> i64 {
    (1..=n as i64).product()
}

fn rep(s: &str, p: u32) -> String {
    s.repeat(p as usize)
}

const POWER_FORMS: [PowerForm; 12] = [
    PowerForm { base: "aa", exact: true, coeff: |p| fact(2 * p) / 2i64.pow(p), word: |p| rep("aa", p) },
    PowerForm { base: "ab", exact: true, coeff: |p| fact(p) * fact(p), word: |p| rep("a", p) + &rep("b", p) },
    PowerForm { base: "ba", exact: true, coeff: fact, word: |p| rep("ba", p) },
    PowerForm { base: "bb", exact: true, coeff: |p| fact(2 * p) / 2i64.pow(p), word: |p| rep("bb", p) },
    PowerForm { base: "aaa", exact: true, coeff: |p| fact(3 * p) / 6i64.pow(p), word: |p| rep("aaa", p) },
    PowerForm {
        base: "aab",
        exact: true,
        coeff: |p| fact(2 * p) * fact(p) / 2i64.pow(p),
        word: |p| rep("aa", p) + &rep("b", p),
    },
    PowerForm { base: "aba", exact: true, coeff: |p| fact(p) * fact(p), word: |p| rep("a", p) + &rep("ba", p) },
    PowerForm {
        base: "abb",
        exact: true,
        coeff: |p| fact(2 * p) * fact(p) / 2i64.pow(p),
        word: |p| rep("a", p) + &rep("bb", p),
    },
    PowerForm { base: "baa", exact: true, coeff: fact, word: |p| rep("baa", p) },
    PowerForm { base: "bbb", exact: true, coeff: |p| fact(3 * p) / 6i64.pow(p), word: |p| rep("bbb", p) },
    PowerForm { base: "bab", exact: false, coeff: |_| 0, word: |p| rep("bab", p) },
    PowerForm { base: "bba", exact: false, coeff: |_| 0, word: |p| rep("b", p) + &rep("ba", p) },
];

/// Checks the closed forms of the `p`-th powers of the degree 2 and 3 words under `C9`,
/// and the leading word of `aa^k □ ab^l □ ba^m □ bb^n` for exponents up to `p`.
pub fn power_closed_form_check(p: u32) -> CheckReport {
    assert!(p >= 1, "powers start at 1");
    let c9 = c9_table::<crate::scalar::Rational>();
    let names = LetterNames::default();
    let mut e = Engine::new(&c9);
    let parse = |s: &str| names.parse_word(s).expect("ab word");
    let fail = |identity: String, base: &str, got: String, want: String| {
        let f = Failure::new(identity, vec![parse(base)], vec![base.to_string()], got, want);
        CheckReport::fail("power-closed-forms", Some(p as usize), f)
    };
    for form in &POWER_FORMS {
        let x = WordComb::basis(parse(form.base));
        let got = e.power(&x, p).expect("no contraction");
        let word = parse(&(form.word)(p));
        if form.exact {
            let want = WordComb::term(word, Scalar::from_int((form.coeff)(p)));
            if got != want {
                return fail(format!("{}^{p}", form.base), form.base, got.render(&names), want.render(&names));
            }
        } else if got.max_term() != Some(&word) || got.coeff(&word).is_zero() {
            let top = got.max_term().map(|w| names.format_word(w)).unwrap_or_else(|| "0".into());
            return fail(format!("max({}^{p})", form.base), form.base, top, names.format_word(&word));
        }
    }
    let bases = ["aa", "ab", "ba", "bb"].map(|b| WordComb::basis(parse(b)));
    let mut cache: HashMap<(usize, u32), WordComb<crate::scalar::Rational>> = HashMap::new();
    for exps in (0..4).map(|_| 0..=p).multi_cartesian() {
        if exps.iter().all(|&x| x == 0) {
            continue;
        }
        let mut acc = WordComb::basis(Word::empty());
        for (i, &x) in exps.iter().enumerate() {
            if x > 0 {
                let pw = cache.entry((i, x)).or_insert_with(|| e.power(&bases[i], x).expect("no contraction")).clone();
                acc = e.product_elem(&acc, &pw).expect("no contraction");
            }
        }
        let (k, l, m, n) = (exps[0], exps[1], exps[2], exps[3]);
        let want = parse(&(rep("a", 2 * k + l) + &rep("b", 2 * n + l) + &rep("ba", m)));
        if acc.max_term() != Some(&want) {
            let top = acc.max_term().map(|w| names.format_word(w)).unwrap_or_else(|| "0".into());
            let id = format!("max(aa^{k}□ab^{l}□ba^{m}□bb^{n})");
            return fail(id, "_", top, names.format_word(&want));
        }
    }
    CheckReport::pass("power-closed-forms", Some(p as usize))
}

trait MultiCartesian: Iterator + Sized {
    fn multi_cartesian(self) -> Vec<Vec<u32>>;
}

impl<I: Iterator<Item = std::ops::RangeInclusive<u32>>> MultiCartesian for I {
    fn multi_cartesian(self) -> Vec<Vec<u32>> {
        self.fold(vec![Vec::new()], |acc, r| {
            acc.into_iter()
                .flat_map(|prefix| {
                    r.clone().map(move |x| {
                        let mut next = prefix.clone();
                        next.push(x);
                        next
                    })
                })
                .collect()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::square_zero_dim;
    use crate::scalar::Rational;
    use crate::word::{w, words_up_to};
    use proptest::prelude::*;

    fn spectrum_max(u: &Word, v: &Word) -> Word {
        spectrum(&c9_table::<Rational>(), u, v).unwrap().pop().unwrap()
    }

    #[test]
    fn worked_maxima() {
        assert_eq!(max_word_greedy(&w("ab"), &w("abaa")).unwrap(), w("aabbaa"));
        assert_eq!(max_word_greedy(&w("bba"), &w("baa")).unwrap(), w("bbabaa"));
        assert_eq!(max_word_greedy(&w("bbbaaabba"), &w("bbaabbba")).unwrap(), w("bbbbaabbbabaaabba"));
        assert_eq!(max_word_greedy(&w("b"), &w("baa")).unwrap(), w("bbaa"));
        assert_eq!(max_word_greedy(&Word::empty(), &w("ba")).unwrap(), w("ba"));
        assert!(max_word_greedy(&w("c"), &w("a")).is_err());
    }

    #[test]
    fn spectra() {
        let c9 = c9_table::<Rational>();
        assert_eq!(spectrum(&c9, &w("a"), &w("b")).unwrap(), vec![w("ab")]);
        assert_eq!(spectrum(&c9, &w("b"), &w("baa")).unwrap(), vec![w("baab"), w("bbaa")]);
        let cl = StuffleTable::<Rational>::classical(2);
        assert_eq!(spectrum(&cl, &w("a"), &w("b")).unwrap(), vec![w("ab"), w("ba")]);
        let mut neg = c9.clone();
        neg.set_f1(A, A, Rational::from_int(-1));
        assert_eq!(spectrum(&neg, &w("a"), &w("a")).unwrap(), vec![]);
    }

    #[test]
    fn spectrum_is_support() {
        let tables = [c9_table::<Rational>(), StuffleTable::classical(2), {
            let t = [2, 0, 1, 1, 0, 0].map(Rational::from_int);
            table_from_tuple(2, &t, F3Map::new()).unwrap()
        }];
        let words: Vec<Word> = words_up_to(4, 2).concat();
        for t in &tables {
            let mut e = Engine::new(t);
            for u in &words {
                for v in words.iter().filter(|v| u.len() + v.len() <= 8) {
                    let support: Vec<Word> = e.product(u, v).unwrap().support().cloned().collect();
                    assert_eq!(spectrum(t, u, v).unwrap(), support);
                }
            }
        }
    }

    #[test]
    fn greedy_matches_spectrum_exhaustively() {
        let words: Vec<Word> = words_up_to(8, 2).concat();
        for u in &words {
            for v in words.iter().filter(|v| u.len() + v.len() <= 8) {
                assert_eq!(max_word_greedy(u, v).unwrap(), spectrum_max(u, v), "{u:?} {v:?}");
            }
        }
    }

    #[test]
    fn statement_small_degrees() {
        for n in 1..=4 {
            assert!(leading_statement(n).passed(), "n={n}");
            assert!(leading_statement_with(n, spectrum_max).passed(), "n={n}");
        }
        assert!(!leading_statement_with(2, |_, _| w("bbbb")).passed());
    }

    #[test]
    fn certificate_agrees_with_solver() {
        for n in 1..=3 {
            assert!(square_zero_certificate(n).is_proven());
            assert_eq!(square_zero_dim(&c9_table::<Rational>(), n).unwrap().dimension, Some(0));
        }
    }

    #[test]
    fn coefficients() {
        let c9 = c9_table::<Rational>();
        let mut e = Engine::new(&c9);
        for u in words_up_to(3, 2).concat() {
            for v in words_up_to(3, 2).concat() {
                let prod = e.product(&u, &v).unwrap();
                for z in words_of_length(u.len() + v.len(), 2) {
                    assert_eq!(coefficient_of(&c9, &u, &v, &z), prod.coeff(&z));
                }
            }
        }
    }

    #[test]
    fn closed_form_powers() {
        for p in 1..=3 {
            let r = power_closed_form_check(p);
            assert!(r.passed(), "{}", r.render_text());
        }
    }

    #[test]
    fn monotone_in_left_factor() {
        for n in 1..=4 {
            let words = words_of_length(n, 2);
            for (i, w1) in words.iter().enumerate() {
                for w2 in &words[i..] {
                    assert!(max_word_greedy(w1, w2).unwrap() <= max_word_greedy(w2, w2).unwrap(), "{w1:?} {w2:?}");
                }
            }
        }
    }

    fn ab_word() -> impl Strategy<Value = Word> {
        proptest::collection::vec(1u32..=2, 0..=6).prop_map(|v| Word::from_indices(&v))
    }

    proptest! {
        #[test]
        fn greedy_matches_spectrum(u in ab_word(), v in ab_word()) {
            prop_assert_eq!(max_word_greedy(&u, &v).unwrap(), spectrum_max(&u, &v));
        }

        #[test]
        fn greedy_is_symmetric(u in ab_word(), v in ab_word()) {
            prop_assert_eq!(max_word_greedy(&u, &v).unwrap(), max_word_greedy(&v, &u).unwrap());
        }
    }
}
