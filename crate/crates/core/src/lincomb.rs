//! Finite formal linear combinations.

use std::collections::btree_map::{self, BTreeMap};

use serde::{Serialize, Serializer};

use crate::scalar::Scalar;
use crate::word::{LetterNames, Word};

/// A finite map from basis elements to nonzero coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LinComb<T: Ord, K> {
    terms: BTreeMap<T, K>,
}

pub type WordComb<K> = LinComb<Word, K>;
pub type TensorComb<K> = LinComb<(Word, Word), K>;

impl<T: Ord, K> Default for LinComb<T, K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<T: Ord + Clone, K: Scalar> LinComb<T, K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(t: T) -> Self {
        Self::term(t, K::one())
    }

    pub fn term(t: T, k: K) -> Self {
        let mut out = Self::zero();
        out.add_term(t, k);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `t`, zero when absent.
    pub fn coeff(&self, t: &T) -> K {
        self.terms.get(t).cloned().unwrap_or_else(K::zero)
    }

    pub fn contains(&self, t: &T) -> bool {
        self.terms.contains_key(t)
    }

    pub fn add_term(&mut self, t: T, k: K) {
        if k.is_zero() {
            return;
        }
        match self.terms.entry(t) {
            btree_map::Entry::Vacant(e) => {
                e.insert(k);
            }
            btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + k;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, k: &K, other: &Self) {
        if k.is_zero() {
            return;
        }
        for (t, c) in &other.terms {
            self.add_term(t.clone(), k.clone() * c.clone());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&K::one(), other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(&-K::one(), other);
        out
    }

    pub fn scale(&self, k: &K) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.clone(), c.clone() * k.clone()))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-K::one())
    }

    /// Applies `f` to every basis element and collects the results.
    pub fn map_basis<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> LinComb<U, K> {
        let mut out = LinComb::zero();
        for (t, c) in &self.terms {
            out.add_term(f(t), c.clone());
        }
        out
    }

    /// Multiplies each coefficient by a basis-dependent scalar.
    pub fn scale_by(&self, mut f: impl FnMut(&T) -> K) -> Self {
        let mut out = Self::zero();
        for (t, c) in &self.terms {
            out.add_term(t.clone(), c.clone() * f(t));
        }
        out
    }
}

impl<T: Ord, K> LinComb<T, K> {
    pub fn iter(&self) -> btree_map::Iter<'_, T, K> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.terms.keys()
    }

    pub fn max_term(&self) -> Option<&T> {
        self.terms.keys().next_back()
    }
}

impl<T: Ord, K> IntoIterator for LinComb<T, K> {
    type Item = (T, K);
    type IntoIter = btree_map::IntoIter<T, K>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.into_iter()
    }
}

impl<'a, T: Ord, K> IntoIterator for &'a LinComb<T, K> {
    type Item = (&'a T, &'a K);
    type IntoIter = btree_map::Iter<'a, T, K>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<T: Ord + Clone, K: Scalar> FromIterator<(T, K)> for LinComb<T, K> {
    fn from_iter<I: IntoIterator<Item = (T, K)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (t, k) in iter {
            out.add_term(t, k);
        }
        out
    }
}

fn push_term<K: Scalar>(out: &mut String, k: &K, body: &str) {
    let negative = k.is_negative();
    let magnitude = if negative { -k.clone() } else { k.clone() };
    if out.is_empty() {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    if !magnitude.is_one() {
        out.push_str(&format!("{magnitude}*"));
    }
    out.push_str(body);
}

impl<K: Scalar> WordComb<K> {
    /// Terms in display order: longer words first, then lexicographic.
    pub fn display_order(&self) -> Vec<(&Word, &K)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(u, _), (v, _)| v.len().cmp(&u.len()).then_with(|| u.cmp(v)));
        terms
    }

    pub fn render(&self, names: &LetterNames) -> String {
        let mut out = String::new();
        for (w, k) in self.display_order() {
            push_term(&mut out, k, &names.format_word(w));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// `(word, coefficient)` text pairs in display order.
    pub fn render_terms(&self, names: &LetterNames) -> Vec<(String, String)> {
        self.display_order()
            .into_iter()
            .map(|(w, k)| (names.format_word(w), k.to_string()))
            .collect()
    }

    /// Words of maximal length in the support.
    pub fn top_degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn homogeneous_part(&self, degree: usize) -> Self {
        LinComb {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == degree)
                .map(|(w, k)| (w.clone(), k.clone()))
                .collect(),
        }
    }
}

impl<K: Scalar> TensorComb<K> {
    pub fn render(&self, names: &LetterNames) -> String {
        let mut out = String::new();
        for ((u, v), k) in &self.terms {
            let body = format!("{}⊗{}", names.format_word(u), names.format_word(v));
            push_term(&mut out, k, &body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl<K: Scalar> std::fmt::Display for WordComb<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render(&LetterNames::Latin))
    }
}

impl<K: Scalar> std::fmt::Display for TensorComb<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render(&LetterNames::Latin))
    }
}

impl<K: Scalar> Serialize for WordComb<K> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            word: String,
            coeff: String,
        }
        let terms: Vec<Term> = self
            .render_terms(&LetterNames::Latin)
            .into_iter()
            .map(|(word, coeff)| Term { word, coeff })
            .collect();
        terms.serialize(serializer)
    }
}
