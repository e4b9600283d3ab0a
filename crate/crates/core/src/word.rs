//! Free-group words, cyclic words and chains.
//!
//! Generators are written `a`..`z`, their inverses `A`..`Z`. Words are always
//! kept freely reduced; cyclic words are cyclically reduced and compare equal
//! when they are rotations of each other.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ParseError, WordError};

pub const MAX_RANK: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    generator: u8,
    inverted: bool,
}

impl Letter {
    pub fn new(generator: usize, inverted: bool) -> Self {
        assert!(
            generator < MAX_RANK,
            "generator index {generator} out of range"
        );
        Letter {
            generator: generator as u8,
            inverted,
        }
    }

    pub fn generator(self) -> usize {
        self.generator as usize
    }

    pub fn is_inverted(self) -> bool {
        self.inverted
    }

    pub fn inverse(self) -> Self {
        Letter {
            generator: self.generator,
            inverted: !self.inverted,
        }
    }

    /// `+1` for a generator, `-1` for an inverse.
    pub fn sign(self) -> i64 {
        if self.inverted {
            -1
        } else {
            1
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(Letter::new(c as usize - 'a' as usize, false)),
            'A'..='Z' => Some(Letter::new(c as usize - 'A' as usize, true)),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.inverted { b'A' } else { b'a' };
        (base + self.generator) as char
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

fn push_reduced(buf: &mut Vec<Letter>, x: Letter) {
    if buf.last() == Some(&x.inverse()) {
        buf.pop();
    } else {
        buf.push(x);
    }
}

impl Word {
    /// Builds the free reduction of `letters`.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut buf = Vec::new();
        for x in letters {
            push_reduced(&mut buf, x);
        }
        Word { letters: buf }
    }

    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letter(x: Letter) -> Self {
        Word { letters: vec![x] }
    }

    /// The `i`-th generator as a one-letter word.
    pub fn generator(i: usize) -> Self {
        Word::letter(Letter::new(i, false))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word {
            letters: self.letters.iter().rev().map(|x| x.inverse()).collect(),
        }
    }

    pub fn mul(&self, other: &Word) -> Self {
        let mut buf = self.letters.clone();
        for &x in &other.letters {
            push_reduced(&mut buf, x);
        }
        Word { letters: buf }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Word::identity(), |acc, _| acc.mul(self))
    }

    /// `g · self · g⁻¹`.
    pub fn conjugate_by(&self, g: &Word) -> Self {
        g.mul(self).mul(&g.inverse())
    }

    /// Moves the first `k` letters to the end (no reduction beyond free
    /// reduction is performed).
    pub fn rotate(&self, k: usize) -> Self {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        Word::new(self.letters[k..].iter().chain(&self.letters[..k]).copied())
    }

    /// Applies the homomorphism sending each letter `x` to `image(x)`.
    pub fn substitute(&self, mut image: impl FnMut(Letter) -> Word) -> Self {
        let mut buf = Vec::new();
        for &x in &self.letters {
            for &y in image(x).letters() {
                push_reduced(&mut buf, y);
            }
        }
        Word { letters: buf }
    }

    /// One more than the largest generator index used; 0 for the identity.
    pub fn rank_used(&self) -> usize {
        self.letters
            .iter()
            .map(|x| x.generator() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn exponent_sums(&self) -> [i64; MAX_RANK] {
        let mut sums = [0i64; MAX_RANK];
        for x in &self.letters {
            sums[x.generator()] += x.sign();
        }
        sums
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.letters {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_word(s, MAX_RANK)
    }
}

/// `u v u⁻¹ v⁻¹`, freely reduced.
pub fn commutator(u: &Word, v: &Word) -> Word {
    u.mul(v).mul(&u.inverse()).mul(&v.inverse())
}

/// The reduced product of `[uᵢ, vᵢ]` over all pairs.
pub fn product_of_commutators(pairs: &[(Word, Word)]) -> Word {
    pairs
        .iter()
        .fold(Word::identity(), |acc, (u, v)| acc.mul(&commutator(u, v)))
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    rank: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, rank: usize) -> Self {
        Parser {
            chars: src
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            pos: 0,
            rank,
            _src: src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or_else(|| self.chars.last().map(|&(i, _)| i + 1).unwrap_or(0))
    }

    fn word(&mut self) -> Result<Word, ParseError> {
        let mut acc = Word::identity();
        let mut factors = 0;
        while let Some(c) = self.peek() {
            if c == ',' || c == ']' || c == ')' {
                break;
            }
            acc = acc.mul(&self.factor()?);
            factors += 1;
        }
        if factors == 0 {
            return match self.peek() {
                None => Err(ParseError::Empty),
                Some(ch) => Err(ParseError::BadCharacter {
                    ch,
                    offset: self.offset(),
                }),
            };
        }
        Ok(acc)
    }

    fn expect(&mut self, want: char, open_offset: usize) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            None => Err(ParseError::UnbalancedBrackets {
                offset: open_offset,
            }),
            Some(ch) => Err(ParseError::BadCharacter {
                ch,
                offset: self.offset(),
            }),
        }
    }

    fn factor(&mut self) -> Result<Word, ParseError> {
        let offset = self.offset();
        let mut base = match self.peek() {
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(',', offset)?;
                let v = self.word()?;
                self.expect(']', offset)?;
                commutator(&u, &v)
            }
            Some('(') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(')', offset)?;
                u
            }
            Some(c) => match Letter::from_char(c) {
                Some(x) if x.generator() < self.rank => {
                    self.pos += 1;
                    Word::letter(x)
                }
                Some(_) => {
                    return Err(ParseError::LetterOutOfRank {
                        letter: c,
                        rank: self.rank,
                    })
                }
                None => return Err(ParseError::BadCharacter { ch: c, offset }),
            },
            None => return Err(ParseError::Empty),
        };
        while self.peek() == Some('^') {
            self.pos += 1;
            let k = self.exponent()?;
            base = base.pow(k);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        let mut text = String::new();
        if self.peek() == Some('-') || self.peek() == Some('+') {
            text.push(self.peek().unwrap());
            self.pos += 1;
        }
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            text.push(c);
            self.pos += 1;
        }
        match text.parse::<i64>() {
            Ok(k) if k >= 1 && k <= u32::MAX as i64 => Ok(k as u32),
            _ => Err(ParseError::BadExponent(text)),
        }
    }
}

/// Parses a word in the `a`/`A` notation with `[u,v]` commutators, `( )`
/// grouping and `^k` powers, returning its free reduction.
pub fn parse_word(text: &str, rank: usize) -> Result<Word, ParseError> {
    if rank == 0 || rank > MAX_RANK {
        return Err(ParseError::BadRank(rank));
    }
    let mut p = Parser::new(text, rank);
    let w = p.word()?;
    match p.peek() {
        None => Ok(w),
        Some(']') | Some(')') => Err(ParseError::UnbalancedBrackets { offset: p.offset() }),
        Some(ch) => Err(ParseError::BadCharacter {
            ch,
            offset: p.offset(),
        }),
    }
}

/// A nonempty cyclically reduced word, up to rotation.
#[derive(Clone, Debug)]
pub struct CyclicWord {
    letters: Vec<Letter>,
    canonical: Vec<Letter>,
}

fn minimal_rotation(letters: &[Letter]) -> Vec<Letter> {
    let n = letters.len();
    (0..n)
        .map(|k| {
            letters[k..]
                .iter()
                .chain(&letters[..k])
                .copied()
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

impl CyclicWord {
    /// Wraps letters that are already cyclically reduced.
    pub fn new(letters: Vec<Letter>) -> Result<Self, WordError> {
        if letters.is_empty() {
            return Err(WordError::TrivialWord);
        }
        let n = letters.len();
        for i in 0..n {
            if letters[i].inverse() == letters[(i + 1) % n] && n > 1 {
                return Err(WordError::InvalidParameter(format!(
                    "not cyclically reduced at position {i}"
                )));
            }
        }
        let canonical = minimal_rotation(&letters);
        Ok(CyclicWord { letters, canonical })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// The lexicographically minimal rotation.
    pub fn canonical(&self) -> &[Letter] {
        &self.canonical
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn to_word(&self) -> Word {
        Word {
            letters: self.letters.clone(),
        }
    }

    pub fn inverse(&self) -> Self {
        CyclicWord::new(self.letters.iter().rev().map(|x| x.inverse()).collect())
            .expect("inverse of a cyclically reduced word is cyclically reduced")
    }

    pub fn rotate(&self, k: usize) -> Self {
        let k = k % self.letters.len();
        let letters = self.letters[k..]
            .iter()
            .chain(&self.letters[..k])
            .copied()
            .collect();
        CyclicWord {
            letters,
            canonical: self.canonical.clone(),
        }
    }

    pub fn at(&self, i: usize) -> Letter {
        self.letters[i % self.letters.len()]
    }
}

impl PartialEq for CyclicWord {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for CyclicWord {}

impl Hash for CyclicWord {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical.hash(state)
    }
}

impl PartialOrd for CyclicWord {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CyclicWord {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.canonical.cmp(&other.canonical)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.letters {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Splits `w` as `conjugator · core · conjugator⁻¹` with `core` cyclically
/// reduced.
pub fn cyclic_reduce(w: &Word) -> Result<(CyclicWord, Word), WordError> {
    let l = w.letters();
    if l.is_empty() {
        return Err(WordError::TrivialWord);
    }
    let (mut i, mut j) = (0, l.len() - 1);
    while i < j && l[i] == l[j].inverse() {
        i += 1;
        j -= 1;
    }
    let core = l[i..=j].to_vec();
    let conjugator = Word {
        letters: l[..i].to_vec(),
    };
    Ok((CyclicWord::new(core)?, conjugator))
}

/// Returns `(root, k)` with `k ≥ 2` maximal such that `w` is the `k`-th power
/// of `root`, or `None` if `w` is not a proper power.
pub fn is_proper_power(w: &CyclicWord) -> Option<(CyclicWord, usize)> {
    let l = w.letters();
    let n = l.len();
    // smallest period wins, giving the largest exponent
    (1..n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (0..n).all(|i| l[i] == l[(i + d) % n]))
        .map(|d| {
            let root = CyclicWord::new(l[..d].to_vec())
                .expect("root of a cyclic word is cyclically reduced");
            (root, n / d)
        })
}

/// A uniformly random freely reduced word of length `n` drawn by the
/// non-backtracking walk: the first letter is uniform over all `2·rank`
/// symbols, each later letter uniform over the `2·rank − 1` symbols that do
/// not cancel.
pub fn random_reduced_word(n: usize, rank: usize, seed: u64) -> Word {
    assert!((1..=MAX_RANK).contains(&rank), "rank out of range");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbols = 2 * rank;
    let mut letters: Vec<Letter> = Vec::with_capacity(n);
    let decode = |s: usize| Letter::new(s / 2, s % 2 == 1);
    for _ in 0..n {
        let next = match letters.last() {
            None => decode(rng.gen_range(0..symbols)),
            Some(&prev) => {
                let forbidden = prev.inverse();
                let forbidden_code = 2 * forbidden.generator() + forbidden.is_inverted() as usize;
                let mut s = rng.gen_range(0..symbols - 1);
                if s >= forbidden_code {
                    s += 1;
                }
                decode(s)
            }
        };
        letters.push(next);
    }
    Word { letters }
}

/// A chain: a formal sum of cyclic words with positive integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    terms: Vec<(CyclicWord, u32)>,
}

impl Chain {
    pub fn new(terms: Vec<(CyclicWord, u32)>) -> Self {
        assert!(
            terms.iter().all(|(_, c)| *c > 0),
            "coefficients must be positive"
        );
        Chain { terms }
    }

    pub fn single(w: CyclicWord) -> Self {
        Chain::new(vec![(w, 1)])
    }

    /// The chain `1·w` after cyclic reduction of `w`.
    pub fn from_word(w: &Word) -> Result<Self, WordError> {
        Ok(Chain::single(cyclic_reduce(w)?.0))
    }

    pub fn terms(&self) -> &[(CyclicWord, u32)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Σ coefficient · length.
    pub fn weighted_length(&self) -> usize {
        self.terms.iter().map(|(w, c)| w.len() * *c as usize).sum()
    }

    /// Number of letter positions, ignoring coefficients.
    pub fn total_length(&self) -> usize {
        self.terms.iter().map(|(w, _)| w.len()).sum()
    }

    pub fn rank_used(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|(w, _)| w.letters())
            .map(|x| x.generator() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn map_terms(&self, mut f: impl FnMut(&CyclicWord) -> CyclicWord) -> Chain {
        Chain::new(self.terms.iter().map(|(w, c)| (f(w), *c)).collect())
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if *c != 1 {
                write!(f, "{c}*")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// True iff every generator's coefficient-weighted exponent sum vanishes.
pub fn is_homologically_trivial(c: &Chain) -> bool {
    let mut sums = [0i64; MAX_RANK];
    for (w, coeff) in c.terms() {
        for x in w.letters() {
            sums[x.generator()] += x.sign() * *coeff as i64;
        }
    }
    sums.iter().all(|&s| s == 0)
}

/// Parses `term (+ term)*` where `term := (int *)? word`. Each term is
/// cyclically reduced.
pub fn parse_chain(text: &str, rank: usize) -> Result<Chain, ParseError> {
    let mut terms = Vec::new();
    for raw in text.split('+') {
        let raw = raw.trim();
        let (coeff, body) = match raw.split_once('*') {
            Some((c, body)) => {
                let c = c.trim();
                let k: u32 = c
                    .parse()
                    .ok()
                    .filter(|&k| k > 0)
                    .ok_or_else(|| ParseError::BadCoefficient(c.to_string()))?;
                (k, body)
            }
            None => (1, raw),
        };
        let w = parse_word(body, rank)?;
        let (cw, _) =
            cyclic_reduce(&w).map_err(|_| ParseError::TrivialTerm(body.trim().to_string()))?;
        terms.push((cw, coeff));
    }
    Ok(Chain::new(terms))
}

/// `v = ∏ g_i ([a,b]^{±N}) g_i⁻¹`, together with its proper-power status.
#[derive(Clone, Debug)]
pub struct SeifertWord {
    pub word: Word,
    pub proper_power: Option<(CyclicWord, usize)>,
}

pub fn seifert_family_word(
    n: u32,
    signs: &[i32],
    conjugators: &[Word],
) -> Result<SeifertWord, WordError> {
    if n < 2 {
        return Err(WordError::InvalidParameter(format!(
            "N must be at least 2, got {n}"
        )));
    }
    if signs.len() != conjugators.len() {
        return Err(WordError::ArityMismatch {
            expected: signs.len(),
            got: conjugators.len(),
        });
    }
    if signs.len() < 2 {
        return Err(WordError::InvalidParameter(
            "need at least two factors".into(),
        ));
    }
    if let Some(s) = signs.iter().find(|s| s.abs() != 1) {
        return Err(WordError::InvalidParameter(format!("sign {s} is not ±1")));
    }
    if signs.iter().sum::<i32>() != 0 {
        return Err(WordError::UnbalancedSigns);
    }
    if conjugators.iter().any(|g| g.rank_used() > 2) {
        return Err(WordError::InvalidParameter(
            "conjugators must be words in a, b".into(),
        ));
    }
    let comm = commutator(&Word::generator(0), &Word::generator(1));
    let up = comm.pow(n);
    let down = up.inverse();
    let word = signs
        .iter()
        .zip(conjugators)
        .fold(Word::identity(), |acc, (s, g)| {
            let base = if *s > 0 { &up } else { &down };
            acc.mul(&base.conjugate_by(g))
        });
    let proper_power = cyclic_reduce(&word)
        .ok()
        .and_then(|(cw, _)| is_proper_power(&cw));
    Ok(SeifertWord { word, proper_power })
}
