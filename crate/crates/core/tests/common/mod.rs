//! Independent oracles for the two-letter product formulas.
//!
//! Words are byte strings over `a = 1`, `b = 2`; products are maps from words to
//! exact rationals with zero terms removed.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use stuffle_core::{Scalar, Word, WordComb};

pub type Q = BigRational;
pub type Terms = BTreeMap<Vec<u8>, Q>;

pub const A: u8 = 1;
pub const B: u8 = 2;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn binom(n: i64, k: i64) -> Q {
    if k < 0 || n < k {
        return Q::zero();
    }
    (0..k).fold(Q::one(), |acc, i| acc * q(n - i) / q(i + 1))
}

pub fn single(w: Vec<u8>, c: Q) -> Terms {
    let mut t = Terms::new();
    if !c.is_zero() {
        t.insert(w, c);
    }
    t
}

pub fn add_into(acc: &mut Terms, other: Terms, scale: &Q) {
    for (w, c) in other {
        let e = acc.entry(w).or_insert_with(Q::zero);
        *e += c * scale;
    }
    acc.retain(|_, c| !c.is_zero());
}

pub fn prefix(p: &[u8], t: Terms) -> Terms {
    t.into_iter().map(|(w, c)| ([p, &w[..]].concat(), c)).collect()
}

pub fn run(w: &[u8], l: u8) -> usize {
    w.iter().take_while(|&&x| x == l).count()
}

pub fn rep(l: u8, n: usize) -> Vec<u8> {
    vec![l; n]
}

pub fn from_comb<K: Scalar>(x: &WordComb<K>) -> Terms {
    x.iter()
        .map(|(w, c)| {
            let letters = w.letters().iter().map(|l| l.index() as u8).collect();
            (letters, parse_q(&c.to_string()))
        })
        .collect()
}

fn parse_q(s: &str) -> Q {
    match s.split_once('/') {
        Some((n, d)) => Q::new(n.parse().unwrap(), d.parse().unwrap()),
        None => Q::from_integer(s.parse().unwrap()),
    }
}

pub fn to_word(w: &[u8]) -> Word {
    Word::from_indices(&w.iter().map(|&x| x as u32).collect::<Vec<_>>())
}

pub fn all_words(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<u8>| [A, B].map(|l| [&w[..], &[l]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Which two-letter family a formula describes.
#[derive(Clone, Debug)]
pub enum Family {
    C2(Q),
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
}

fn pure(w: &[u8], l: u8) -> bool {
    !w.is_empty() && w.iter().all(|&x| x == l)
}

/// `u □ v` by the printed case formulas, for non-empty `u` and `v`.
pub fn closed_form(f: &Family, u: &[u8], v: &[u8]) -> Terms {
    match f {
        Family::C2(k) => {
            if pure(u, A) && v[0] == B {
                single([u, v].concat(), num_traits::pow(k.clone(), u.len()))
            } else if pure(v, A) && u[0] == B {
                single([v, u].concat(), num_traits::pow(k.clone(), v.len()))
            } else {
                Terms::new()
            }
        }
        Family::C3 | Family::C7 => {
            let binomial = matches!(f, Family::C3);
            if pure(u, A) && v[0] == B {
                single([u, v].concat(), q(1))
            } else if pure(v, A) && u[0] == B {
                single([v, u].concat(), q(1))
            } else if let Some((k, l, w)) = pure_and_block(u, v, A) {
                let c = if binomial { binom((k + l) as i64, k as i64) } else { q(1) };
                single([rep(A, k + l), w].concat(), c)
            } else {
                Terms::new()
            }
        }
        Family::C5 | Family::C6 => {
            let letters: &[u8] = if matches!(f, Family::C5) { &[A] } else { &[A, B] };
            for &x in letters {
                if pure(u, x) && pure(v, x) {
                    return single(rep(x, u.len() + v.len()), binom((u.len() + v.len()) as i64, u.len() as i64));
                }
                if let Some((k, l, w)) = pure_and_block(u, v, x) {
                    if !w.is_empty() {
                        return single([rep(x, k + l), w].concat(), binom((k + l - 1) as i64, k as i64));
                    }
                }
            }
            Terms::new()
        }
        Family::C4 | Family::C8 | Family::C9 => block_recursion(f, u, v),
    }
}

// (k, l, w) when one side is x^k and the other x^l w with w not starting with x
fn pure_and_block(u: &[u8], v: &[u8], x: u8) -> Option<(usize, usize, Vec<u8>)> {
    if pure(u, x) && v[0] == x {
        let l = run(v, x);
        return Some((u.len(), l, v[l..].to_vec()));
    }
    if pure(v, x) && u[0] == x {
        let l = run(u, x);
        return Some((v.len(), l, u[l..].to_vec()));
    }
    None
}

fn block_recursion(f: &Family, u: &[u8], v: &[u8]) -> Terms {
    if u.is_empty() {
        return single(v.to_vec(), q(1));
    }
    if v.is_empty() {
        return single(u.to_vec(), q(1));
    }
    let (ua, va) = (run(u, A), run(v, A));
    if ua > 0 && va == 0 {
        return prefix(&rep(A, ua), block_recursion(f, &u[ua..], v));
    }
    if va > 0 && ua == 0 {
        return prefix(&rep(A, va), block_recursion(f, u, &v[va..]));
    }
    if ua > 0 && va > 0 {
        let c = match f {
            Family::C4 => return Terms::new(),
            Family::C8 => q(1),
            _ => binom((ua + va) as i64, ua as i64),
        };
        let mut t = Terms::new();
        add_into(&mut t, prefix(&rep(A, ua + va), block_recursion(f, &u[ua..], &v[va..])), &c);
        return t;
    }
    let (m1, m2) = (run(u, B), run(v, B));
    let (ur, vr) = (&u[m1..], &v[m2..]);
    let mut t = Terms::new();
    for k in 0..m2 {
        let rest = [rep(B, m2 - k), vr.to_vec()].concat();
        let c = binom((m1 + k - 1) as i64, k as i64);
        add_into(&mut t, prefix(&rep(B, m1 + k), block_recursion(f, ur, &rest)), &c);
    }
    for k in 0..m1 {
        let rest = [rep(B, m1 - k), ur.to_vec()].concat();
        let c = binom((m2 + k - 1) as i64, k as i64);
        add_into(&mut t, prefix(&rep(B, m2 + k), block_recursion(f, &rest, vr)), &c);
    }
    t
}

/// `b^m a^s □ b^p a^r` for the tables with `f1(a⊗b) = 1`, `f1(b⊗a) = 0`, `f1(b⊗b) = f2(b⊗b) = 1`.
pub fn two_block_formula(m: usize, s: usize, p: usize, r: usize) -> Terms {
    let mut t = Terms::new();
    for k in 0..p {
        let w = [rep(B, m + k), rep(A, s), rep(B, p - k), rep(A, r)].concat();
        add_into(&mut t, single(w, q(1)), &binom((m + k - 1) as i64, k as i64));
    }
    for k in 0..m {
        let w = [rep(B, p + k), rep(A, r), rep(B, m - k), rep(A, s)].concat();
        add_into(&mut t, single(w, q(1)), &binom((p + k - 1) as i64, k as i64));
    }
    t
}

/// `b^m a^s □ b^p a^r b^t` for `m ≥ 2`, same tables.
pub fn three_block_formula(m: usize, s: usize, p: usize, r: usize, tt: usize) -> Terms {
    let mut t = Terms::new();
    for k in 0..p {
        let w = [rep(B, m + k), rep(A, s), rep(B, p - k), rep(A, r), rep(B, tt)].concat();
        add_into(&mut t, single(w, q(1)), &binom((m + k - 1) as i64, k as i64));
    }
    for k in 0..=tt {
        let w = [rep(B, p), rep(A, r), rep(B, m + k), rep(A, s), rep(B, tt - k)].concat();
        add_into(&mut t, single(w, q(1)), &binom((m + k - 1) as i64, k as i64));
    }
    for f in 1..m {
        let g = m - f;
        for k in 0..=tt {
            let w = [rep(B, p + f), rep(A, r), rep(B, g + k), rep(A, s), rep(B, tt - k)].concat();
            let c = binom((f + p - 1) as i64, f as i64) * binom((g + k - 1) as i64, k as i64);
            add_into(&mut t, single(w, q(1)), &c);
        }
    }
    t
}

/// `x_n x_p ⋆ x_m` and `x_n ⋆ x_m` expanded by hand, as index strings.
pub fn mzv_two(n: u32, m: u32) -> BTreeMap<Vec<u32>, i64> {
    let mut t = BTreeMap::new();
    for w in [vec![n, m], vec![m, n], vec![n + m]] {
        *t.entry(w).or_insert(0) += 1;
    }
    t
}

pub fn mzv_five(n: u32, p: u32, m: u32) -> BTreeMap<Vec<u32>, i64> {
    let mut t = BTreeMap::new();
    for w in [vec![n, p, m], vec![n, m, p], vec![m, n, p], vec![n + m, p], vec![n, p + m]] {
        *t.entry(w).or_insert(0) += 1;
    }
    t
}
