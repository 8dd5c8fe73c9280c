//! The weak stuffle recursion and the operations built on it.

use std::collections::HashMap;
use std::sync::Arc;


use crate::error::{CheckError, ProductError};
use crate::lincomb::{TensorComb, WordComb};
use crate::scalar::Scalar;
use crate::table::ProductRule;
use crate::word::{deconcat_splits, Letter, Word};

type Memo<K> = HashMap<(Word, Word), Arc<WordComb<K>>>;

/// Evaluates products for one rule, caching results per word pair.
///
/// The cache lives as long as the engine; create one per top-level
/// computation (or per worker thread) to bound memory.
pub struct Engine<'r, K: Scalar> {
    rule: &'r dyn ProductRule<K>,
    memoize: bool,
    front: Memo<K>,
    back: Memo<K>,
}

/// Which recursion: first letters or last letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Front,
    Back,
}

/// Corners of the quadri splitting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Corner {
    NW,
    SW,
    NE,
    SE,
}

impl Corner {
    pub const ALL: [Corner; 4] = [Corner::NW, Corner::SW, Corner::NE, Corner::SE];
}

fn prepend_into<K: Scalar>(out: &mut WordComb<K>, letter: Letter, k: &K, src: &WordComb<K>) {
    for (w, c) in src {
        out.add_term(w.prepend(letter), k.clone() * c.clone());
    }
}

fn append_into<K: Scalar>(out: &mut WordComb<K>, letter: Letter, k: &K, src: &WordComb<K>) {
    for (w, c) in src {
        out.add_term(w.append(letter), k.clone() * c.clone());
    }
}

fn wrap_into<K: Scalar>(out: &mut WordComb<K>, first: Letter, last: Letter, k: &K, src: &WordComb<K>) {
    for (w, c) in src {
        out.add_term(w.prepend(first).append(last), k.clone() * c.clone());
    }
}

impl<'r, K: Scalar> Engine<'r, K> {
    pub fn new(rule: &'r dyn ProductRule<K>) -> Self {
        Engine { rule, memoize: true, front: HashMap::new(), back: HashMap::new() }
    }

    /// An engine that recomputes every subproduct.
    pub fn without_memo(rule: &'r dyn ProductRule<K>) -> Self {
        Engine { memoize: false, ..Self::new(rule) }
    }

    pub fn rule(&self) -> &'r dyn ProductRule<K> {
        self.rule
    }

    pub fn clear(&mut self) {
        self.front.clear();
        self.back.clear();
    }

    fn check_letters(&self, w: &Word) -> Result<(), ProductError> {
        let c = self.rule.alphabet_size();
        match w.letters().iter().find(|l| l.slot() >= c) {
            Some(l) => Err(ProductError::LetterOutOfRange { letter: l.index(), alphabet: c }),
            None => Ok(()),
        }
    }

    /// `u □ v`.
    pub fn product(&mut self, u: &Word, v: &Word) -> Result<Arc<WordComb<K>>, ProductError> {
        self.check_letters(u)?;
        self.check_letters(v)?;
        self.rec(u, v, Side::Front)
    }

    /// The end product `u □_E v` (recursion on last letters, same table).
    pub fn end_product(&mut self, u: &Word, v: &Word) -> Result<Arc<WordComb<K>>, CheckError> {
        self.require_shuffle_type("end products")?;
        self.check_letters(u)?;
        self.check_letters(v)?;
        Ok(self.rec(u, v, Side::Back)?)
    }

    fn rec(&mut self, u: &Word, v: &Word, side: Side) -> Result<Arc<WordComb<K>>, ProductError> {
        if u.is_empty() {
            return Ok(Arc::new(WordComb::basis(v.clone())));
        }
        if v.is_empty() {
            return Ok(Arc::new(WordComb::basis(u.clone())));
        }
        let key = (u.clone(), v.clone());
        if self.memoize {
            let memo = match side {
                Side::Front => &self.front,
                Side::Back => &self.back,
            };
            if let Some(hit) = memo.get(&key) {
                return Ok(Arc::clone(hit));
            }
        }
        let out = match side {
            Side::Front => self.front_step(u, v)?,
            Side::Back => self.back_step(u, v)?,
        };
        let out = Arc::new(out);
        if self.memoize {
            match side {
                Side::Front => self.front.insert(key, Arc::clone(&out)),
                Side::Back => self.back.insert(key, Arc::clone(&out)),
            };
        }
        Ok(out)
    }

    fn front_step(&mut self, u: &Word, v: &Word) -> Result<WordComb<K>, ProductError> {
        let (a, b) = (u.letters()[0], v.letters()[0]);
        let tail_u = u.slice(1, u.len());
        let tail_v = v.slice(1, v.len());
        let mut out = WordComb::zero();
        let k1 = self.rule.f1(a, b);
        if !k1.is_zero() {
            let r = self.rec(&tail_u, v, Side::Front)?;
            prepend_into(&mut out, a, &k1, &r);
        }
        let k2 = self.rule.f2(a, b);
        if !k2.is_zero() {
            let r = self.rec(u, &tail_v, Side::Front)?;
            prepend_into(&mut out, b, &k2, &r);
        }
        if let Some((k3, g)) = self.rule.f3(a, b)? {
            if !k3.is_zero() {
                let r = self.rec(&tail_u, &tail_v, Side::Front)?;
                prepend_into(&mut out, g, &k3, &r);
            }
        }
        Ok(out)
    }

    fn back_step(&mut self, u: &Word, v: &Word) -> Result<WordComb<K>, ProductError> {
        let (a, b) = (u.last().unwrap(), v.last().unwrap());
        let head_u = u.slice(0, u.len() - 1);
        let head_v = v.slice(0, v.len() - 1);
        let mut out = WordComb::zero();
        let k1 = self.rule.f1(a, b);
        if !k1.is_zero() {
            let r = self.rec(&head_u, v, Side::Back)?;
            append_into(&mut out, a, &k1, &r);
        }
        let k2 = self.rule.f2(a, b);
        if !k2.is_zero() {
            let r = self.rec(u, &head_v, Side::Back)?;
            append_into(&mut out, b, &k2, &r);
        }
        Ok(out)
    }

    /// Bilinear extension of [`product`](Self::product).
    pub fn product_elem(&mut self, x: &WordComb<K>, y: &WordComb<K>) -> Result<WordComb<K>, ProductError> {
        let mut out = WordComb::zero();
        for (u, cu) in x {
            for (v, cv) in y {
                let r = self.product(u, v)?;
                out.add_scaled(&(cu.clone() * cv.clone()), &r);
            }
        }
        Ok(out)
    }

    /// Bilinear extension of [`end_product`](Self::end_product).
    pub fn end_product_elem(&mut self, x: &WordComb<K>, y: &WordComb<K>) -> Result<WordComb<K>, CheckError> {
        let mut out = WordComb::zero();
        for (u, cu) in x {
            for (v, cv) in y {
                let r = self.end_product(u, v)?;
                out.add_scaled(&(cu.clone() * cv.clone()), &r);
            }
        }
        Ok(out)
    }

    /// `x^p` bracketed left to right: `((x □ x) □ x) □ …`.
    pub fn power(&mut self, x: &WordComb<K>, p: u32) -> Result<WordComb<K>, ProductError> {
        assert!(p >= 1, "powers start at 1");
        let mut acc = x.clone();
        for _ in 1..p {
            acc = self.product_elem(&acc, x)?;
        }
        Ok(acc)
    }

    fn require_shuffle_type(&self, what: &str) -> Result<(), CheckError> {
        if self.rule.has_contraction() {
            return Err(CheckError::Precondition(format!("{what} need an empty f3")));
        }
        Ok(())
    }

    /// Checks the dendriform hypotheses: empty f3 and `f1(a⊗a) ∈ {0,1}`.
    pub fn dendriform_hypothesis(&self) -> Result<(), CheckError> {
        self.require_shuffle_type("dendriform splittings")?;
        for i in 0..self.rule.alphabet_size() {
            let a = Letter::from_slot(i);
            if !self.rule.f1(a, a).is_boolean() {
                return Err(CheckError::Precondition(format!(
                    "hypothesis f1(a⊗a)∈{{0,1}} fails at letter {}: f1 = {}",
                    self.rule.names().format_word(&Word::letter(a)),
                    self.rule.f1(a, a)
                )));
            }
        }
        Ok(())
    }

    fn nonempty(u: &Word, v: &Word) -> Result<(), CheckError> {
        if u.is_empty() || v.is_empty() {
            return Err(CheckError::Precondition("splittings need non-empty words".into()));
        }
        Ok(())
    }

    fn left_unchecked(&mut self, u: &Word, v: &Word) -> Result<WordComb<K>, CheckError> {
        let (a, b) = (u.letters()[0], v.letters()[0]);
        let mut out = WordComb::zero();
        let k = self.rule.f1(a, b);
        if !k.is_zero() {
            let r = self.product(&u.slice(1, u.len()), v)?;
            prepend_into(&mut out, a, &k, &r);
        }
        Ok(out)
    }

    fn right_unchecked(&mut self, u: &Word, v: &Word) -> Result<WordComb<K>, CheckError> {
        let (a, b) = (u.letters()[0], v.letters()[0]);
        let mut out = WordComb::zero();
        let k = self.rule.f2(a, b);
        if !k.is_zero() {
            let r = self.product(u, &v.slice(1, v.len()))?;
            prepend_into(&mut out, b, &k, &r);
        }
        Ok(out)
    }

    fn wedge_unchecked(&mut self, u: &Word, v: &Word) -> Result<WordComb<K>, CheckError> {
        let (a, b) = (u.last().unwrap(), v.last().unwrap());
        let mut out = WordComb::zero();
        let k = self.rule.f1(a, b);
        if !k.is_zero() {
            let r = self.end_product(&u.slice(0, u.len() - 1), v)?;
            append_into(&mut out, a, &k, &r);
        }
        Ok(out)
    }

    fn vee_unchecked(&mut self, u: &Word, v: &Word) -> Result<WordComb<K>, CheckError> {
        let (a, b) = (u.last().unwrap(), v.last().unwrap());
        let mut out = WordComb::zero();
        let k = self.rule.f2(a, b);
        if !k.is_zero() {
            let r = self.end_product(u, &v.slice(0, v.len() - 1))?;
            append_into(&mut out, b, &k, &r);
        }
        Ok(out)
    }

    /// `au ≺ bv = f1(a⊗b) a(u □ bv)`.
    pub fn dendri_left(&mut self, u: &Word, v: &Word) -> Result<WordComb<K>, CheckError> {
        self.dendriform_hypothesis()?;
        Self::nonempty(u, v)?;
        self.left_unchecked(u, v)
    }

    /// `au ≻ bv = f2(a⊗b) b(au □ v)`.
    pub fn dendri_right(&mut self, u: &Word, v: &Word) -> Result<WordComb<K>, CheckError> {
        self.dendriform_hypothesis()?;
        Self::nonempty(u, v)?;
        self.right_unchecked(u, v)
    }

    /// `ua ∧ vb = f1(a⊗b) (u □_E vb)a`.
    pub fn wedge(&mut self, u: &Word, v: &Word) -> Result<WordComb<K>, CheckError> {
        self.dendriform_hypothesis()?;
        Self::nonempty(u, v)?;
        self.wedge_unchecked(u, v)
    }

    /// `ua ∨ vb = f2(a⊗b) (ua □_E v)b`.
    pub fn vee(&mut self, u: &Word, v: &Word) -> Result<WordComb<K>, CheckError> {
        self.dendriform_hypothesis()?;
        Self::nonempty(u, v)?;
        self.vee_unchecked(u, v)
    }

    /// Bilinear extension of one of the splittings. Hypotheses are the caller's job.
    pub(crate) fn split_elem(
        &mut self,
        op: Split,
        x: &WordComb<K>,
        y: &WordComb<K>,
    ) -> Result<WordComb<K>, CheckError> {
        let mut out = WordComb::zero();
        for (u, cu) in x {
            for (v, cv) in y {
                Self::nonempty(u, v)?;
                let r = match op {
                    Split::Left => self.left_unchecked(u, v)?,
                    Split::Right => self.right_unchecked(u, v)?,
                    Split::Corner(c) => self.corner(u, v, c)?,
                };
                out.add_scaled(&(cu.clone() * cv.clone()), &r);
            }
        }
        Ok(out)
    }

    /// One quadri corner, `u = a m c` and `v = b n d`:
    /// `NW = a(m □ bnd)c`, `SW = a(mc □ bn)d`, `NE = b(am □ nd)c`, `SE = b(amc □ n)d`,
    /// each weighted by `f_i(a⊗b)·f_j(c⊗d)` (all 1 for the classical shuffle).
    pub fn corner(&mut self, u: &Word, v: &Word, corner: Corner) -> Result<WordComb<K>, CheckError> {
        if u.len() < 2 || v.len() < 2 {
            return Err(CheckError::Precondition("quadri corners need words of length at least 2".into()));
        }
        self.check_letters(u)?;
        self.check_letters(v)?;
        let (a, c) = (u.letters()[0], u.last().unwrap());
        let (b, d) = (v.letters()[0], v.last().unwrap());
        let m = u.slice(1, u.len() - 1);
        let n = v.slice(1, v.len() - 1);
        let (first, last, wf, wl, x, y) = match corner {
            Corner::NW => (a, c, self.rule.f1(a, b), self.rule.f1(c, d), m, v.clone()),
            Corner::SW => (a, d, self.rule.f1(a, b), self.rule.f2(c, d), u.slice(1, u.len()), v.slice(0, v.len() - 1)),
            Corner::NE => (b, c, self.rule.f2(a, b), self.rule.f1(c, d), u.slice(0, u.len() - 1), v.slice(1, v.len())),
            Corner::SE => (b, d, self.rule.f2(a, b), self.rule.f2(c, d), u.clone(), n),
        };
        let k = wf * wl;
        let mut out = WordComb::zero();
        if !k.is_zero() {
            let r = self.product(&x, &y)?;
            wrap_into(&mut out, first, last, &k, &r);
        }
        Ok(out)
    }

    /// `Σ (s₁ □ t₁) ⊗ (s₂ □ t₂)`.
    pub fn tensor_product(&mut self, s: &TensorComb<K>, t: &TensorComb<K>) -> Result<TensorComb<K>, ProductError> {
        let mut out = TensorComb::zero();
        for ((s1, s2), cs) in s {
            for ((t1, t2), ct) in t {
                let left = self.product(s1, t1)?;
                let right = self.product(s2, t2)?;
                let k = cs.clone() * ct.clone();
                for (l, cl) in left.iter() {
                    for (r, cr) in right.iter() {
                        out.add_term((l.clone(), r.clone()), k.clone() * cl.clone() * cr.clone());
                    }
                }
            }
        }
        Ok(out)
    }
}

/// The binary operations the checkers combine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Split {
    Left,
    Right,
    Corner(Corner),
}

/// `u □ v` with a fresh engine.
pub fn stuffle_product<K: Scalar>(rule: &dyn ProductRule<K>, u: &Word, v: &Word) -> Result<WordComb<K>, ProductError> {
    Ok((*Engine::new(rule).product(u, v)?).clone())
}

pub fn end_product<K: Scalar>(rule: &dyn ProductRule<K>, u: &Word, v: &Word) -> Result<WordComb<K>, CheckError> {
    Ok((*Engine::new(rule).end_product(u, v)?).clone())
}

pub fn product_elem<K: Scalar>(
    rule: &dyn ProductRule<K>,
    x: &WordComb<K>,
    y: &WordComb<K>,
) -> Result<WordComb<K>, ProductError> {
    Engine::new(rule).product_elem(x, y)
}

pub fn power<K: Scalar>(rule: &dyn ProductRule<K>, x: &WordComb<K>, p: u32) -> Result<WordComb<K>, ProductError> {
    Engine::new(rule).power(x, p)
}

/// The deconcatenation coproduct `Δ(w) = Σ_{uv=w} u⊗v`.
pub fn deconcat<K: Scalar>(w: &Word) -> TensorComb<K> {
    deconcat_splits(w).into_iter().map(|p| (p, K::one())).collect()
}

/// `Δ` extended linearly.
pub fn deconcat_elem<K: Scalar>(x: &WordComb<K>) -> TensorComb<K> {
    let mut out = TensorComb::zero();
    for (w, k) in x {
        out.add_scaled(k, &deconcat(w));
    }
    out
}

/// The quadri corner with the classical shuffle on the letters of `u` and `v`.
pub fn quadri<K: Scalar>(u: &Word, v: &Word, corner: Corner) -> Result<WordComb<K>, CheckError> {
    let c = u.max_index().max(v.max_index()).max(1) as usize;
    let t = crate::table::StuffleTable::<K>::classical(c);
    Engine::new(&t).corner(u, v, corner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::table::{builtin_spec, table_from_tuple, F3Map, StuffleTable};
    use crate::word::{w, words_of_length, LetterNames};
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn tuple2(t: [i64; 6]) -> StuffleTable<Rational> {
        table_from_tuple(2, &t.map(q), F3Map::new()).unwrap()
    }

    fn elem(terms: &[(&str, i64)]) -> WordComb<Rational> {
        terms.iter().map(|&(s, k)| (w(s), q(k))).collect()
    }

    /// Classical shuffle by counting interleavings, independent of the engine.
    fn shuffle_oracle(u: &Word, v: &Word) -> WordComb<Rational> {
        let n = u.len() + v.len();
        let mut out = WordComb::zero();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != u.len() {
                continue;
            }
            let (mut i, mut j) = (0, 0);
            let mut letters = Vec::with_capacity(n);
            for pos in 0..n {
                if mask & (1 << pos) != 0 {
                    letters.push(u.letters()[i]);
                    i += 1;
                } else {
                    letters.push(v.letters()[j]);
                    j += 1;
                }
            }
            out.add_term(Word::from_letters(letters), q(1));
        }
        out
    }

    #[test]
    fn stuffle_of_letters() {
        let st = builtin_spec("stuffle", 9).unwrap();
        let x = |i| Word::from_indices(&[i]);
        let r = stuffle_product::<Rational>(&st, &x(1), &x(2)).unwrap();
        let names = LetterNames::Indexed("x".into());
        assert_eq!(r.render(&names), "x1x2 + x2x1 + x3");
    }

    #[test]
    fn sz_square_of_p() {
        let sz = builtin_spec("sz", 0).unwrap();
        let p = sz.names().parse_word("p").unwrap();
        let r = stuffle_product::<Rational>(&sz, &p, &p).unwrap();
        assert_eq!(r.render(sz.names()), "2*pp + p");
    }

    #[test]
    fn small_families() {
        let c4 = tuple2([1, 0, 0, 0, 1, 1]);
        assert!(stuffle_product(&c4, &w("ab"), &w("ab")).unwrap().is_zero());
        let c9 = tuple2([1, 0, 1, 1, 1, 1]);
        assert_eq!(stuffle_product(&c9, &w("ab"), &w("ab")).unwrap(), elem(&[("aabb", 4)]));
        assert_eq!(stuffle_product(&c9, &w("_"), &w("ba")).unwrap(), elem(&[("ba", 1)]));
        assert_eq!(power(&c9, &elem(&[("aa", 1)]), 2).unwrap(), elem(&[("aaaa", 6)]));
        assert_eq!(power(&c9, &elem(&[("ba", 1)]), 2).unwrap(), elem(&[("baba", 2)]));
    }

    #[test]
    fn bilinear_stuffle() {
        let st = builtin_spec("stuffle", 9).unwrap();
        let x1 = Word::from_indices(&[1]);
        let x2 = Word::from_indices(&[2]);
        let x: WordComb<Rational> = [(x1.clone(), q(1)), (x2.clone(), q(1))].into_iter().collect();
        let y = WordComb::basis(x1.clone());
        let r = product_elem(&st, &x, &y).unwrap();
        let expected: WordComb<Rational> = [
            (Word::from_indices(&[1, 1]), q(2)),
            (x2.clone(), q(1)),
            (Word::from_indices(&[1, 2]), q(1)),
            (Word::from_indices(&[2, 1]), q(1)),
            (Word::from_indices(&[3]), q(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(r, expected);
    }

    #[test]
    fn overflow_is_reported() {
        let st = builtin_spec("stuffle", 3).unwrap();
        let x2 = Word::from_indices(&[2]);
        assert!(matches!(
            stuffle_product::<Rational>(&st, &x2, &x2),
            Err(ProductError::Overflow { letter: 4, .. })
        ));
        assert!(matches!(
            stuffle_product::<Rational>(&st, &Word::from_indices(&[4]), &x2),
            Err(ProductError::LetterOutOfRange { letter: 4, .. })
        ));
    }

    #[test]
    fn end_products() {
        let cl = StuffleTable::<Rational>::classical(3);
        assert_eq!(end_product(&cl, &w("a"), &w("b")).unwrap(), elem(&[("ab", 1), ("ba", 1)]));
        assert_eq!(
            end_product(&cl, &w("ab"), &w("c")).unwrap(),
            elem(&[("abc", 1), ("acb", 1), ("cab", 1)])
        );
        let null = StuffleTable::<Rational>::null(2);
        assert!(end_product(&null, &w("a"), &w("b")).unwrap().is_zero());
        let st = builtin_spec("stuffle", 4).unwrap();
        assert!(end_product::<Rational>(&st, &w("a"), &w("b")).is_err());
    }

    #[test]
    fn splittings() {
        let cl = StuffleTable::<Rational>::classical(2);
        let mut e = Engine::new(&cl);
        assert_eq!(e.dendri_left(&w("a"), &w("b")).unwrap(), elem(&[("ab", 1)]));
        assert_eq!(e.wedge(&w("a"), &w("b")).unwrap(), elem(&[("ba", 1)]));
        assert_eq!(e.vee(&w("a"), &w("b")).unwrap(), elem(&[("ab", 1)]));
        assert!(e.dendri_left(&w("_"), &w("b")).is_err());

        let c9 = tuple2([1, 0, 1, 1, 1, 1]);
        let mut e = Engine::new(&c9);
        assert!(e.dendri_left(&w("b"), &w("a")).unwrap().is_zero());

        let c7 = table_from_tuple(2, &[q(1), q(0), Rational::from_ratio(1, 2), Rational::from_ratio(1, 2), q(0), q(0)], F3Map::new()).unwrap();
        let mut e = Engine::new(&c7);
        assert!(matches!(e.dendri_left(&w("a"), &w("a")), Err(CheckError::Precondition(_))));
    }

    #[test]
    fn quadri_corners() {
        assert_eq!(quadri::<Rational>(&w("ab"), &w("cd"), Corner::NW).unwrap(), elem(&[("acdb", 1)]));
        assert_eq!(quadri::<Rational>(&w("ab"), &w("cd"), Corner::SE).unwrap(), elem(&[("cabd", 1)]));
        let total = Corner::ALL
            .iter()
            .map(|&c| quadri::<Rational>(&w("ab"), &w("cd"), c).unwrap())
            .fold(WordComb::zero(), |acc, x| acc.add(&x));
        assert_eq!(total.len(), 6);
        assert_eq!(total, shuffle_oracle(&w("ab"), &w("cd")));
        assert!(quadri::<Rational>(&w("a"), &w("cd"), Corner::NW).is_err());
    }

    #[test]
    fn coproduct() {
        let d = deconcat::<Rational>(&w("ab"));
        let expected: TensorComb<Rational> =
            [((w("ab"), w("_")), q(1)), ((w("a"), w("b")), q(1)), ((w("_"), w("ab")), q(1))].into_iter().collect();
        assert_eq!(d, expected);
        assert_eq!(deconcat::<Rational>(&Word::empty()).len(), 1);

        let cl = StuffleTable::<Rational>::classical(1);
        let da = deconcat::<Rational>(&w("a"));
        let r = Engine::new(&cl).tensor_product(&da, &da).unwrap();
        let expected: TensorComb<Rational> =
            [((w("aa"), w("_")), q(2)), ((w("a"), w("a")), q(2)), ((w("_"), w("aa")), q(2))].into_iter().collect();
        assert_eq!(r, expected);
    }

    #[test]
    fn classical_matches_interleavings() {
        let cl = StuffleTable::<Rational>::classical(2);
        let mut e = Engine::new(&cl);
        for n in 0..=3 {
            for m in 0..=3 {
                for u in words_of_length(n, 2) {
                    for v in words_of_length(m, 2) {
                        assert_eq!(*e.product(&u, &v).unwrap(), shuffle_oracle(&u, &v));
                    }
                }
            }
        }
    }

    #[test]
    fn memo_and_naive_agree() {
        let tables = [
            tuple2([1, 0, 1, 1, 1, 1]),
            tuple2([1, 0, 0, 0, 1, 1]),
            builtin_spec("sz", 0).unwrap().induced_table(),
            builtin_spec("stuffle", 10).unwrap().induced_table(),
        ];
        for t in &tables {
            let mut memo = Engine::new(t);
            let mut naive = Engine::without_memo(t);
            let c = t.size().min(2);
            for n in 1..=5 {
                for m in 1..=(10 - n).min(5) {
                    for u in words_of_length(n, c) {
                        for v in words_of_length(m, c) {
                            if n + m > 10 {
                                continue;
                            }
                            assert_eq!(memo.product(&u, &v).unwrap(), naive.product(&u, &v).unwrap());
                        }
                    }
                }
            }
        }
    }

    fn arb_word(c: u32, max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(1..=c, 0..=max).prop_map(|v| Word::from_indices(&v))
    }

    proptest! {
        #[test]
        fn grading(u in arb_word(2, 4), v in arb_word(2, 4)) {
            let c9 = tuple2([1, 0, 1, 1, 1, 1]);
            let r = stuffle_product(&c9, &u, &v).unwrap();
            prop_assert!(r.support().all(|x| x.len() == u.len() + v.len()));

            let sz = builtin_spec("sz", 0).unwrap();
            let r = stuffle_product::<Rational>(&sz, &u, &v).unwrap();
            let lo = u.len().max(v.len());
            prop_assert!(r.support().all(|x| x.len() >= lo && x.len() <= u.len() + v.len()));
        }

        #[test]
        fn classical_front_equals_back(u in arb_word(3, 4), v in arb_word(3, 3)) {
            let cl = StuffleTable::<Rational>::classical(3);
            let mut e = Engine::new(&cl);
            prop_assert_eq!((*e.product(&u, &v).unwrap()).clone(), (*e.end_product(&u, &v).unwrap()).clone());
        }

        #[test]
        fn end_product_is_reversed_front(u in arb_word(2, 4), v in arb_word(2, 3), idx in 0usize..64) {
            let t = tuple2([
                (idx & 1) as i64, ((idx >> 1) & 1) as i64, ((idx >> 2) & 1) as i64,
                ((idx >> 3) & 1) as i64, ((idx >> 4) & 1) as i64, ((idx >> 5) & 1) as i64,
            ]);
            let mut e = Engine::new(&t);
            let back = (*e.end_product(&u, &v).unwrap()).clone();
            let front = e.product(&u.reversed(), &v.reversed()).unwrap().map_basis(Word::reversed);
            prop_assert_eq!(back, front);
        }

        #[test]
        fn deconcat_is_coassociative(u in arb_word(3, 6)) {
            let d = deconcat::<Rational>(&u);
            let mut left = std::collections::BTreeMap::new();
            let mut right = std::collections::BTreeMap::new();
            for ((x, y), _) in &d {
                for ((x1, x2), _) in &deconcat::<Rational>(x) {
                    *left.entry((x1.clone(), x2.clone(), y.clone())).or_insert(0) += 1;
                }
                for ((y1, y2), _) in &deconcat::<Rational>(y) {
                    *right.entry((x.clone(), y1.clone(), y2.clone())).or_insert(0) += 1;
                }
            }
            prop_assert_eq!(left, right);
            let counit_left: WordComb<Rational> = d.iter().filter(|((x, _), _)| x.is_empty()).map(|((_, y), k)| (y.clone(), k.clone())).collect();
            prop_assert_eq!(counit_left, WordComb::basis(u.clone()));
        }
    }
}
