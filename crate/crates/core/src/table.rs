//! Product specifications: finite tables, rule-based built-ins and their
//! text formats.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{ProductError, SpecError};
use crate::report::{CheckReport, Failure};
use crate::scalar::{parse_rational, rational_to, Rational, Scalar};
use crate::word::{Letter, LetterNames, Word};

/// Contraction map: `(a, b) ↦ (k, g)` means `f3(a⊗b) = k·g`. Absent pairs map to zero.
pub type F3Map<K> = BTreeMap<(Letter, Letter), (K, Letter)>;

/// Anything that can drive the product recursion.
pub trait ProductRule<K: Scalar>: Sync {
    fn alphabet_size(&self) -> usize;

    fn f1(&self, a: Letter, b: Letter) -> K;

    fn f2(&self, a: Letter, b: Letter) -> K;

    fn f3(&self, a: Letter, b: Letter) -> Result<Option<(K, Letter)>, ProductError>;

    fn has_contraction(&self) -> bool;

    fn names(&self) -> &LetterNames;

    /// Letters used by exhaustive checks with total word length `max_len`.
    fn check_alphabet(&self, _max_len: usize) -> usize {
        self.alphabet_size()
    }
}

/// f1, f2 and f3 on a finite alphabet `1..=c`.
#[derive(Clone, Debug, PartialEq)]
pub struct StuffleTable<K> {
    size: usize,
    f1: Vec<K>,
    f2: Vec<K>,
    f3: F3Map<K>,
    names: LetterNames,
}

impl<K: Scalar> StuffleTable<K> {
    /// The null product on `c` letters.
    pub fn null(c: usize) -> Self {
        Self::from_fn(c, |_, _| K::zero(), |_, _| K::zero())
    }

    /// The classical shuffle on `c` letters.
    pub fn classical(c: usize) -> Self {
        Self::from_fn(c, |_, _| K::one(), |_, _| K::one())
    }

    pub fn from_fn(c: usize, f1: impl Fn(Letter, Letter) -> K, f2: impl Fn(Letter, Letter) -> K) -> Self {
        assert!(c >= 1, "alphabet must be non-empty");
        let mut t1 = Vec::with_capacity(c * c);
        let mut t2 = Vec::with_capacity(c * c);
        for i in 0..c {
            for j in 0..c {
                t1.push(f1(Letter::from_slot(i), Letter::from_slot(j)));
                t2.push(f2(Letter::from_slot(i), Letter::from_slot(j)));
            }
        }
        StuffleTable { size: c, f1: t1, f2: t2, f3: F3Map::new(), names: LetterNames::Latin }
    }

    /// Builds a table from row-major matrices without any validation.
    pub fn from_parts(size: usize, f1: Vec<Vec<K>>, f2: Vec<Vec<K>>, f3: F3Map<K>) -> Self {
        StuffleTable {
            size,
            f1: f1.into_iter().flatten().collect(),
            f2: f2.into_iter().flatten().collect(),
            f3,
            names: LetterNames::Latin,
        }
    }

    /// Like [`from_parts`](Self::from_parts) but rejects tables that fail [`validate_table`].
    pub fn new(size: usize, f1: Vec<Vec<K>>, f2: Vec<Vec<K>>, f3: F3Map<K>) -> Result<Self, SpecError> {
        let shape_ok = f1.len() == size
            && f2.len() == size
            && f1.iter().chain(f2.iter()).all(|row| row.len() == size);
        let t = Self::from_parts(size, f1, f2, f3);
        if !shape_ok {
            return Err(SpecError::Invalid("matrix dimensions do not match the alphabet".into()));
        }
        match validate_table(&t).failure {
            None => Ok(t),
            Some(f) => Err(SpecError::Invalid(f.identity)),
        }
    }

    pub fn with_names(mut self, names: LetterNames) -> Self {
        self.names = names;
        self
    }

    pub fn names(&self) -> &LetterNames {
        &self.names
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.size).map(Letter::from_slot)
    }

    fn idx(&self, a: Letter, b: Letter) -> usize {
        a.slot() * self.size + b.slot()
    }

    pub fn f1_at(&self, a: Letter, b: Letter) -> &K {
        &self.f1[self.idx(a, b)]
    }

    pub fn f2_at(&self, a: Letter, b: Letter) -> &K {
        &self.f2[self.idx(a, b)]
    }

    pub fn set_f1(&mut self, a: Letter, b: Letter, k: K) {
        let i = self.idx(a, b);
        self.f1[i] = k;
    }

    pub fn set_f2(&mut self, a: Letter, b: Letter, k: K) {
        let i = self.idx(a, b);
        self.f2[i] = k;
    }

    /// Sets `f3(a⊗b) = k·g`, or clears it when `k` is zero.
    pub fn set_f3(&mut self, a: Letter, b: Letter, k: K, g: Letter) {
        if k.is_zero() {
            self.f3.remove(&(a, b));
        } else {
            self.f3.insert((a, b), (k, g));
        }
    }

    /// Stores `f3` exactly as given, zero coefficients included.
    pub fn set_f3_raw(&mut self, a: Letter, b: Letter, k: K, g: Letter) {
        self.f3.insert((a, b), (k, g));
    }

    pub fn f3_map(&self) -> &F3Map<K> {
        &self.f3
    }

    pub fn f3_at(&self, a: Letter, b: Letter) -> Option<&(K, Letter)> {
        self.f3.get(&(a, b))
    }

    pub fn with_f3(mut self, f3: F3Map<K>) -> Self {
        self.f3 = f3;
        self
    }

    /// The same f1 and f2 with f3 dropped.
    pub fn shuffle_part(&self) -> Self {
        let mut t = self.clone();
        t.f3.clear();
        t
    }

    pub fn is_shuffle_type(&self) -> bool {
        self.f3.is_empty()
    }

    /// Relabels letters: the entry at `(a, b)` moves to `(σ(a), σ(b))`.
    /// `perm[i]` is the image of letter `i + 1`, as a 0-based slot.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.size);
        let s = |l: Letter| Letter::from_slot(perm[l.slot()]);
        let mut out = self.clone();
        for a in self.letters() {
            for b in self.letters() {
                out.set_f1(s(a), s(b), self.f1_at(a, b).clone());
                out.set_f2(s(a), s(b), self.f2_at(a, b).clone());
            }
        }
        out.f3 = self.f3.iter().map(|(&(a, b), (k, g))| ((s(a), s(b)), (k.clone(), s(*g)))).collect();
        out
    }

    /// The printed tuple (c = 2 or 3).
    pub fn tuple(&self) -> Result<Vec<K>, SpecError> {
        let slots = tuple_slots(self.size)?;
        Ok(slots
            .iter()
            .map(|&(i, j, second)| {
                let (a, b) = (Letter::new(i), Letter::new(j));
                if second { self.f2_at(a, b).clone() } else { self.f1_at(a, b).clone() }
            })
            .collect())
    }

    pub fn tuple_text(&self) -> String {
        match self.tuple() {
            Ok(t) => format!("({})", t.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")),
            Err(_) => "(-)".into(),
        }
    }

    pub fn map_scalars<L: Scalar>(&self, f: impl Fn(&K) -> L) -> StuffleTable<L> {
        StuffleTable {
            size: self.size,
            f1: self.f1.iter().map(&f).collect(),
            f2: self.f2.iter().map(&f).collect(),
            f3: self.f3.iter().map(|(&p, (k, g))| (p, (f(k), *g))).collect(),
            names: self.names.clone(),
        }
    }

    /// Whether every f1 and f2 entry is 1.
    pub fn is_classical_part(&self) -> bool {
        self.f1.iter().chain(self.f2.iter()).all(|k| k.is_one())
    }

    pub fn is_null_part(&self) -> bool {
        self.f1.iter().chain(self.f2.iter()).all(|k| k.is_zero())
    }
}

impl<K: Scalar> ProductRule<K> for StuffleTable<K> {
    fn alphabet_size(&self) -> usize {
        self.size
    }

    fn f1(&self, a: Letter, b: Letter) -> K {
        self.f1_at(a, b).clone()
    }

    fn f2(&self, a: Letter, b: Letter) -> K {
        self.f2_at(a, b).clone()
    }

    fn f3(&self, a: Letter, b: Letter) -> Result<Option<(K, Letter)>, ProductError> {
        Ok(self.f3.get(&(a, b)).cloned())
    }

    fn has_contraction(&self) -> bool {
        !self.f3.is_empty()
    }

    fn names(&self) -> &LetterNames {
        &self.names
    }
}

// (row, column, is_f2) in printed order
const SLOTS_2: [(u32, u32, bool); 6] =
    [(1, 2, false), (2, 1, false), (1, 1, false), (1, 1, true), (2, 2, false), (2, 2, true)];

const SLOTS_3: [(u32, u32, bool); 12] = [
    (1, 2, false),
    (2, 1, false),
    (2, 3, false),
    (3, 2, false),
    (1, 3, false),
    (3, 1, false),
    (1, 1, false),
    (1, 1, true),
    (2, 2, false),
    (2, 2, true),
    (3, 3, false),
    (3, 3, true),
];

fn tuple_slots(c: usize) -> Result<&'static [(u32, u32, bool)], SpecError> {
    match c {
        2 => Ok(&SLOTS_2),
        3 => Ok(&SLOTS_3),
        _ => Err(SpecError::TupleAlphabet(c)),
    }
}

pub fn tuple_len(c: usize) -> Result<usize, SpecError> {
    tuple_slots(c).map(<[_]>::len)
}

/// Builds a table from a printed tuple. Off-diagonal f2 is filled with
/// `f2(a⊗b) = f1(b⊗a)`.
pub fn table_from_tuple<K: Scalar>(c: usize, tuple: &[K], f3: F3Map<K>) -> Result<StuffleTable<K>, SpecError> {
    let slots = tuple_slots(c)?;
    if tuple.len() != slots.len() {
        return Err(SpecError::TupleLength { expected: slots.len(), got: tuple.len() });
    }
    let mut t = StuffleTable::null(c);
    for (&(i, j, second), k) in slots.iter().zip(tuple) {
        let (a, b) = (Letter::new(i), Letter::new(j));
        if second {
            t.set_f2(a, b, k.clone());
        } else {
            t.set_f1(a, b, k.clone());
            if i != j {
                t.set_f2(b, a, k.clone());
            }
        }
    }
    Ok(t.with_f3(f3))
}

/// Shape and range validation.
pub fn validate_table<K: Scalar>(t: &StuffleTable<K>) -> CheckReport {
    let c = t.size;
    let fail = |identity: String| {
        CheckReport::fail("validate", None, Failure::new(identity, vec![], vec![], "", ""))
    };
    if c == 0 {
        return fail("empty alphabet".into());
    }
    if t.f1.len() != c * c || t.f2.len() != c * c {
        return fail("matrix dimensions do not match the alphabet".into());
    }
    for (&(a, b), (k, g)) in &t.f3 {
        if a.slot() >= c || b.slot() >= c || g.slot() >= c {
            return fail(format!(
                "letter out of range: f3({}⊗{}) uses letter {} on an alphabet of size {c}",
                a.index(),
                b.index(),
                g.index().max(a.index()).max(b.index())
            ));
        }
        if k.is_zero() {
            return fail(format!("zero f3 coefficient at ({}, {})", a.index(), b.index()));
        }
    }
    CheckReport::pass("validate", None)
}

/// Built-in products on countable or fixed alphabets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    Shuffle,
    Stuffle,
    HoffmanIhara,
    Sz,
    Bz,
    Null,
}

impl Builtin {
    pub const ALL: [Builtin; 6] =
        [Builtin::Shuffle, Builtin::Stuffle, Builtin::HoffmanIhara, Builtin::Sz, Builtin::Bz, Builtin::Null];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Shuffle => "shuffle",
            Builtin::Stuffle => "stuffle",
            Builtin::HoffmanIhara => "hoffman_ihara",
            Builtin::Sz => "sz",
            Builtin::Bz => "bz",
            Builtin::Null => "null",
        }
    }

    pub fn from_name(name: &str) -> Result<Self, SpecError> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| SpecError::UnknownBuiltin(name.to_string()))
    }
}

/// A built-in rule truncated at a maximal letter index.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleSpec {
    builtin: Builtin,
    max_index: u32,
    names: LetterNames,
}

const Y: u32 = 1;
const P: u32 = 2;
const PBAR: u32 = 3;

/// Looks up a built-in product. For `sz` and `bz` the alphabet is fixed and
/// `max_index` is ignored.
pub fn builtin_spec(name: &str, max_index: u32) -> Result<RuleSpec, SpecError> {
    let builtin = Builtin::from_name(name)?;
    Ok(RuleSpec::new(builtin, max_index))
}

impl RuleSpec {
    pub fn new(builtin: Builtin, max_index: u32) -> Self {
        let (max_index, names) = match builtin {
            Builtin::Sz => (2, LetterNames::named(&["y", "p"])),
            Builtin::Bz => (3, LetterNames::named(&["y", "p", "pbar"])),
            _ => (max_index.max(1), LetterNames::Indexed("x".into())),
        };
        RuleSpec { builtin, max_index, names }
    }

    pub fn builtin(&self) -> Builtin {
        self.builtin
    }

    pub fn max_index(&self) -> u32 {
        self.max_index
    }

    pub fn with_names(mut self, names: LetterNames) -> Self {
        self.names = names;
        self
    }

    pub fn names(&self) -> &LetterNames {
        &self.names
    }

    fn weights(&self, a: u32, b: u32) -> (i64, i64) {
        match self.builtin {
            Builtin::Shuffle | Builtin::Stuffle | Builtin::HoffmanIhara => (1, 1),
            Builtin::Null => (0, 0),
            Builtin::Sz | Builtin::Bz => {
                if a == Y {
                    (1, 0)
                } else if b == Y {
                    (0, 1)
                } else {
                    (1, 1)
                }
            }
        }
    }

    fn contraction(&self, a: u32, b: u32) -> Option<(i64, u32)> {
        match self.builtin {
            Builtin::Stuffle => Some((1, a + b)),
            Builtin::HoffmanIhara => Some((-1, a + b)),
            Builtin::Sz => (a == P && b == P).then_some((1, P)),
            Builtin::Bz => match (a, b) {
                (P, P) => Some((1, P)),
                (PBAR, PBAR) => Some((-1, PBAR)),
                _ => None,
            },
            Builtin::Shuffle | Builtin::Null => None,
        }
    }

    /// The finite table on letters `1..=M`. Contractions beyond `M` are
    /// dropped, which is the quotient by the ideal of words containing a
    /// letter above `M`.
    pub fn induced_table<K: Scalar>(&self) -> StuffleTable<K> {
        let m = self.max_index as usize;
        let mut t = StuffleTable::from_fn(
            m,
            |a, b| K::from_int(self.weights(a.index(), b.index()).0),
            |a, b| K::from_int(self.weights(a.index(), b.index()).1),
        )
        .with_names(self.names.clone());
        for a in 1..=self.max_index {
            for b in 1..=self.max_index {
                if let Some((k, g)) = self.contraction(a, b) {
                    if g <= self.max_index {
                        t.set_f3(Letter::new(a), Letter::new(b), K::from_int(k), Letter::new(g));
                    }
                }
            }
        }
        t
    }
}

impl<K: Scalar> ProductRule<K> for RuleSpec {
    fn alphabet_size(&self) -> usize {
        self.max_index as usize
    }

    fn f1(&self, a: Letter, b: Letter) -> K {
        K::from_int(self.weights(a.index(), b.index()).0)
    }

    fn f2(&self, a: Letter, b: Letter) -> K {
        K::from_int(self.weights(a.index(), b.index()).1)
    }

    fn f3(&self, a: Letter, b: Letter) -> Result<Option<(K, Letter)>, ProductError> {
        match self.contraction(a.index(), b.index()) {
            None => Ok(None),
            Some((_, g)) if g > self.max_index => Err(ProductError::Overflow {
                a: a.index(),
                b: b.index(),
                letter: g,
                max: self.max_index,
            }),
            Some((k, g)) => Ok(Some((K::from_int(k), Letter::new(g)))),
        }
    }

    fn has_contraction(&self) -> bool {
        !matches!(self.builtin, Builtin::Shuffle | Builtin::Null)
    }

    fn names(&self) -> &LetterNames {
        &self.names
    }

    /// Index-additive contractions stay within `M` when all letters are at most `M / N`.
    fn check_alphabet(&self, max_len: usize) -> usize {
        match self.builtin {
            Builtin::Stuffle | Builtin::HoffmanIhara => (self.max_index as usize / max_len.max(1)).max(1),
            _ => self.max_index as usize,
        }
    }
}

/// A parsed spec file: either an explicit table or a built-in reference.
#[derive(Clone, Debug, PartialEq)]
pub enum Spec {
    Table(StuffleTable<Rational>),
    Rule(RuleSpec),
}

impl Spec {
    pub fn as_rule(&self) -> &dyn ProductRule<Rational> {
        match self {
            Spec::Table(t) => t,
            Spec::Rule(r) => r,
        }
    }

    /// The finite table behind the spec (induced table for built-ins).
    pub fn to_table(&self) -> StuffleTable<Rational> {
        match self {
            Spec::Table(t) => t.clone(),
            Spec::Rule(r) => r.induced_table(),
        }
    }

    pub fn names(&self) -> &LetterNames {
        self.as_rule().names()
    }
}

#[derive(Serialize, Deserialize)]
struct F3Entry {
    i: u32,
    j: u32,
    coeff: String,
    letter: u32,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    alphabet: usize,
    f1: Vec<Vec<String>>,
    f2: Vec<Vec<String>>,
    #[serde(default)]
    f3: Vec<F3Entry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct BuiltinFile {
    builtin: String,
    #[serde(default)]
    max_index: Option<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SpecFile {
    Builtin(BuiltinFile),
    Table(TableFile),
}

/// Default truncation bound for built-ins when none is given.
pub const DEFAULT_MAX_INDEX: u32 = 9;

pub fn parse_spec(text: &str) -> Result<Spec, SpecError> {
    let file: SpecFile = serde_json::from_str(text).map_err(|e| SpecError::Format(e.to_string()))?;
    match file {
        SpecFile::Builtin(b) => Ok(Spec::Rule(builtin_spec(&b.builtin, b.max_index.unwrap_or(DEFAULT_MAX_INDEX))?)),
        SpecFile::Table(t) => table_from_file(t).map(Spec::Table),
    }
}

fn parse_q(s: &str) -> Result<Rational, SpecError> {
    parse_rational(s).ok_or_else(|| SpecError::Rational(s.to_string()))
}

fn parse_matrix(rows: &[Vec<String>]) -> Result<Vec<Vec<Rational>>, SpecError> {
    rows.iter().map(|row| row.iter().map(|s| parse_q(s)).collect()).collect()
}

fn table_from_file(file: TableFile) -> Result<StuffleTable<Rational>, SpecError> {
    let mut f3 = F3Map::new();
    for e in &file.f3 {
        let (a, b, g) = match (Letter::try_new(e.i), Letter::try_new(e.j), Letter::try_new(e.letter)) {
            (Some(a), Some(b), Some(g)) => (a, b, g),
            _ => return Err(SpecError::Invalid("letter indices start at 1".into())),
        };
        f3.insert((a, b), (parse_q(&e.coeff)?, g));
    }
    let t = StuffleTable::new(file.alphabet, parse_matrix(&file.f1)?, parse_matrix(&file.f2)?, f3)?;
    Ok(match file.names {
        Some(names) => {
            if names.len() != file.alphabet {
                return Err(SpecError::Invalid("one name per letter is required".into()));
            }
            t.with_names(LetterNames::Named(names))
        }
        None => t,
    })
}

pub fn table_from_json(text: &str) -> Result<StuffleTable<Rational>, SpecError> {
    match parse_spec(text)? {
        Spec::Table(t) => Ok(t),
        Spec::Rule(_) => Err(SpecError::Format("expected an explicit table".into())),
    }
}

pub fn table_to_json<K: Scalar>(t: &StuffleTable<K>) -> String {
    let matrix = |f: &dyn Fn(Letter, Letter) -> String| -> Vec<Vec<String>> {
        t.letters().map(|a| t.letters().map(|b| f(a, b)).collect()).collect()
    };
    let file = TableFile {
        alphabet: t.size,
        f1: matrix(&|a, b| t.f1_at(a, b).to_string()),
        f2: matrix(&|a, b| t.f2_at(a, b).to_string()),
        f3: t
            .f3
            .iter()
            .map(|(&(a, b), (k, g))| F3Entry { i: a.index(), j: b.index(), coeff: k.to_string(), letter: g.index() })
            .collect(),
        names: match &t.names {
            LetterNames::Named(n) => Some(n.clone()),
            _ => None,
        },
    };
    serde_json::to_string(&file).expect("table serializes")
}

pub fn builtin_to_json(r: &RuleSpec) -> String {
    serde_json::to_string(&BuiltinFile { builtin: r.builtin.name().into(), max_index: Some(r.max_index) })
        .expect("spec serializes")
}

/// Converts a rational table to another coefficient field.
pub fn convert_table<K: Scalar>(t: &StuffleTable<Rational>) -> StuffleTable<K> {
    t.map_scalars(rational_to::<K>)
}

/// Renders a word in the rule's letter names.
pub fn fmt_word<K: Scalar>(rule: &dyn ProductRule<K>, w: &Word) -> String {
    rule.names().format_word(w)
}
