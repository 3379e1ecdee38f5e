//! Operator words over bigraded objects and their rewriting calculus.
//!
//! A word is a finite composite of operator letters acting on an object with a
//! cosimplicial level and a simplicial level (a [`Bidegree`]). Four kinds of
//! letter exist: simplicial faces `d_i` and degeneracies `s_j`, and
//! cosimplicial cofaces `D^i` and codegeneracies `s^j`. Words compose with the
//! rightmost letter applied first, so the word `d_0 d_1 s^0 s^1` acts by `s^1`
//! first and `d_0` last.
//!
//! Two normal forms are provided:
//!
//! * [`OpWord::normalize`] rewrites a mixed face/codegeneracy word into its
//!   unique canonical factorization `d_{i_1}..d_{i_m} s^{j_1}..s^{j_n}` with
//!   both index lists strictly increasing;
//! * [`OpWord::simp_normalize`] rewrites a purely simplicial word (faces and
//!   degeneracies) into the Eilenberg-Zilber form, degeneracies then faces.
//!
//! Ground truth for word equality is [`OpWord::delta_oracle`]: every letter
//! denotes a monotone map between finite ordinals, one composite per grading
//! direction, and two words are equal as operators iff their oracle pairs are
//! equal. The oracle is independent of the rewrite engine and is used by the
//! test suites to certify it.

use serde::{Deserialize, Serialize};
use std::fmt;

/// The four letter kinds of the bigraded calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LetterKind {
    /// `d_i`: lowers the simplicial level by one.
    SimpFace,
    /// `s_j`: raises the simplicial level by one.
    SimpDegen,
    /// `s^j`: lowers the cosimplicial level by one.
    CosimpCodegen,
    /// `D^i`: raises the cosimplicial level by one.
    CosimpCoface,
}

impl LetterKind {
    /// Letters acting on the simplicial grading.
    pub fn is_simplicial(self) -> bool {
        matches!(self, LetterKind::SimpFace | LetterKind::SimpDegen)
    }

    /// Letters acting on the cosimplicial grading.
    pub fn is_cosimplicial(self) -> bool {
        !self.is_simplicial()
    }
}

/// A single operator letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub kind: LetterKind,
    pub index: u32,
}

impl Letter {
    pub fn face(index: u32) -> Self {
        Letter { kind: LetterKind::SimpFace, index }
    }
    pub fn degen(index: u32) -> Self {
        Letter { kind: LetterKind::SimpDegen, index }
    }
    pub fn codegen(index: u32) -> Self {
        Letter { kind: LetterKind::CosimpCodegen, index }
    }
    pub fn coface(index: u32) -> Self {
        Letter { kind: LetterKind::CosimpCoface, index }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LetterKind::SimpFace => write!(f, "d_{}", self.index),
            LetterKind::SimpDegen => write!(f, "s_{}", self.index),
            LetterKind::CosimpCodegen => write!(f, "s^{}", self.index),
            LetterKind::CosimpCoface => write!(f, "D^{}", self.index),
        }
    }
}

impl Serialize for Letter {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let k = match self.kind {
            LetterKind::SimpFace => "d",
            LetterKind::SimpDegen => "s",
            LetterKind::CosimpCodegen => "S",
            LetterKind::CosimpCoface => "D",
        };
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Letter", 2)?;
        st.serialize_field("k", k)?;
        st.serialize_field("i", &self.index)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Letter {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            k: String,
            i: u32,
        }
        let raw = Raw::deserialize(deserializer)?;
        let kind = match raw.k.as_str() {
            "d" => LetterKind::SimpFace,
            "s" => LetterKind::SimpDegen,
            "S" => LetterKind::CosimpCodegen,
            "D" => LetterKind::CosimpCoface,
            other => {
                return Err(serde::de::Error::custom(format!("unknown letter kind {other:?}")))
            }
        };
        Ok(Letter { kind, index: raw.i })
    }
}

/// Cosimplicial and simplicial level of a bigraded object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bidegree {
    pub cosimp: u32,
    pub simp: u32,
}

impl Bidegree {
    pub fn new(cosimp: u32, simp: u32) -> Self {
        Bidegree { cosimp, simp }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.cosimp, self.simp)
    }
}

/// Errors raised by word validation, parsing, and rewriting.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("letter {letter} illegal at bidegree {at} (position {pos})")]
    IndexOutOfRange { pos: usize, letter: Letter, at: Bidegree },
    #[error("no rewrite rule applies at position {pos}")]
    NoRuleApplies { pos: usize },
    #[error("letter {letter} at position {pos} is outside this calculus")]
    UnsupportedLetter { pos: usize, letter: Letter },
    #[error("cannot parse token {token:?} as an operator letter")]
    BadToken { token: String },
}

/// Applies a single letter to a bidegree, enforcing the legal index ranges:
/// `d_i` needs `0 <= i <= simp` (and `simp >= 1`), `s_j` needs `0 <= j <= simp`,
/// `s^j` needs `0 <= j <= cosimp-1`, and `D^i` needs `0 <= i <= cosimp+1`.
pub fn apply_letter(letter: Letter, at: Bidegree) -> Result<Bidegree, WordError> {
    let bad = || WordError::IndexOutOfRange { pos: 0, letter, at };
    match letter.kind {
        LetterKind::SimpFace => {
            if at.simp >= 1 && letter.index <= at.simp {
                Ok(Bidegree::new(at.cosimp, at.simp - 1))
            } else {
                Err(bad())
            }
        }
        LetterKind::SimpDegen => {
            if letter.index <= at.simp {
                Ok(Bidegree::new(at.cosimp, at.simp + 1))
            } else {
                Err(bad())
            }
        }
        LetterKind::CosimpCodegen => {
            if at.cosimp >= 1 && letter.index + 1 <= at.cosimp {
                Ok(Bidegree::new(at.cosimp - 1, at.simp))
            } else {
                Err(bad())
            }
        }
        LetterKind::CosimpCoface => {
            if letter.index <= at.cosimp + 1 {
                Ok(Bidegree::new(at.cosimp + 1, at.simp))
            } else {
                Err(bad())
            }
        }
    }
}

/// An operator word: an ordered list of letters with a source bidegree.
/// The rightmost letter applies first. Words are immutable values; rewriting
/// returns fresh words.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OpWord {
    pub source: Bidegree,
    pub letters: Vec<Letter>,
}

impl OpWord {
    pub fn new(source: Bidegree, letters: Vec<Letter>) -> Self {
        OpWord { source, letters }
    }

    pub fn identity(source: Bidegree) -> Self {
        OpWord { source, letters: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Checks every intermediate application and returns the target bidegree.
    pub fn validate(&self) -> Result<Bidegree, WordError> {
        let mut at = self.source;
        for pos in (0..self.letters.len()).rev() {
            let letter = self.letters[pos];
            at = apply_letter(letter, at).map_err(|_| WordError::IndexOutOfRange {
                pos,
                letter,
                at,
            })?;
        }
        Ok(at)
    }

    /// Intermediate bidegrees: `stages[i]` is the bidegree to the left of
    /// `letters[i]`, i.e. after applying `letters[i..]`; `stages[len]` is the
    /// source and `stages[0]` the target.
    pub fn stages(&self) -> Result<Vec<Bidegree>, WordError> {
        let n = self.letters.len();
        let mut stages = vec![self.source; n + 1];
        for pos in (0..n).rev() {
            let letter = self.letters[pos];
            let at = stages[pos + 1];
            stages[pos] = apply_letter(letter, at).map_err(|_| WordError::IndexOutOfRange {
                pos,
                letter,
                at,
            })?;
        }
        Ok(stages)
    }

    /// Applies one commutation rule to the adjacent pair at `pos`
    /// (`letters[pos]` composes after `letters[pos+1]`). The three rule kinds:
    ///
    /// * face/face: `d_i d_j = d_{j-1} d_i` for `i < j`, in either direction;
    /// * codegeneracy/codegeneracy: `s^j s^i = s^{i-1} s^j` for `i > j`, in
    ///   either direction;
    /// * face/codegeneracy in either order: swap with indices unchanged, the
    ///   two letters acting on independent gradings.
    ///
    /// The result is equal as a composite map and validates to the same
    /// target. Any other pair kind yields [`WordError::NoRuleApplies`].
    pub fn rewrite_step(&self, pos: usize) -> Result<OpWord, WordError> {
        self.validate()?;
        if pos + 1 >= self.letters.len() {
            return Err(WordError::NoRuleApplies { pos });
        }
        let x = self.letters[pos];
        let y = self.letters[pos + 1];
        use LetterKind::*;
        let (nx, ny) = match (x.kind, y.kind) {
            (SimpFace, SimpFace) => {
                if x.index < y.index {
                    (Letter::face(y.index - 1), Letter::face(x.index))
                } else {
                    (Letter::face(y.index), Letter::face(x.index + 1))
                }
            }
            (CosimpCodegen, CosimpCodegen) => {
                if y.index > x.index {
                    (Letter::codegen(y.index - 1), Letter::codegen(x.index))
                } else {
                    (Letter::codegen(y.index), Letter::codegen(x.index + 1))
                }
            }
            (SimpFace, CosimpCodegen) | (CosimpCodegen, SimpFace) => (y, x),
            _ => return Err(WordError::NoRuleApplies { pos }),
        };
        let mut letters = self.letters.clone();
        letters[pos] = nx;
        letters[pos + 1] = ny;
        Ok(OpWord { source: self.source, letters })
    }

    /// Rewrites a face/codegeneracy word to its canonical factorization.
    ///
    /// All rewriting happens through [`OpWord::rewrite_step`]: cross swaps
    /// move every face left of every codegeneracy, then each index list is
    /// put in strictly increasing order by insertion. Idempotent, and
    /// oracle-equal to the input.
    pub fn normalize(&self) -> Result<CanonicalForm, WordError> {
        self.validate()?;
        for (pos, letter) in self.letters.iter().enumerate() {
            if !matches!(letter.kind, LetterKind::SimpFace | LetterKind::CosimpCodegen) {
                return Err(WordError::UnsupportedLetter { pos, letter: *letter });
            }
        }
        let mut w = self.clone();
        // Cross phase: bubble codegeneracies right past faces.
        loop {
            let pos = (0..w.letters.len().saturating_sub(1)).find(|&p| {
                w.letters[p].kind == LetterKind::CosimpCodegen
                    && w.letters[p + 1].kind == LetterKind::SimpFace
            });
            match pos {
                Some(p) => w = w.rewrite_step(p)?,
                None => break,
            }
        }
        let m = w.letters.iter().filter(|l| l.kind == LetterKind::SimpFace).count();
        let n = w.letters.len() - m;
        w = insertion_sort_range(w, 0, m)?;
        w = insertion_sort_range(w, m, m + n)?;
        let faces = w.letters[..m].iter().map(|l| l.index).collect::<Vec<_>>();
        let codegens = w.letters[m..].iter().map(|l| l.index).collect::<Vec<_>>();
        debug_assert!(faces.windows(2).all(|p| p[0] < p[1]));
        debug_assert!(codegens.windows(2).all(|p| p[0] < p[1]));
        Ok(CanonicalForm { source: self.source, faces, codegens })
    }

    /// Rewrites a purely simplicial word (faces `d_i` and degeneracies `s_j`)
    /// into the Eilenberg-Zilber normal form: degeneracies with strictly
    /// decreasing indices, then faces with strictly increasing indices.
    ///
    /// Uses the mixed identities `d_i s_j = s_{j-1} d_i` (`i < j`), `= id`
    /// (`i ∈ {j, j+1}`), `= s_j d_{i-1}` (`i > j+1`), plus `d_i d_j = d_{j-1} d_i`
    /// (`i < j`) and `s_i s_j = s_{j+1} s_i` (`i <= j`).
    pub fn simp_normalize(&self) -> Result<OpWord, WordError> {
        self.validate()?;
        for (pos, letter) in self.letters.iter().enumerate() {
            if !letter.kind.is_simplicial() {
                return Err(WordError::UnsupportedLetter { pos, letter: *letter });
            }
        }
        let mut letters = self.letters.clone();
        // Mixed phase: eliminate every (d_i, s_j) pair, leftmost first.
        loop {
            let pos = (0..letters.len().saturating_sub(1)).find(|&p| {
                letters[p].kind == LetterKind::SimpFace
                    && letters[p + 1].kind == LetterKind::SimpDegen
            });
            let Some(p) = pos else { break };
            let i = letters[p].index;
            let j = letters[p + 1].index;
            if i < j {
                letters[p] = Letter::degen(j - 1);
                letters[p + 1] = Letter::face(i);
            } else if i == j || i == j + 1 {
                letters.drain(p..p + 2);
            } else {
                letters[p] = Letter::degen(j);
                letters[p + 1] = Letter::face(i - 1);
            }
        }
        let p = letters.iter().filter(|l| l.kind == LetterKind::SimpDegen).count();
        // Degeneracy phase: s_a s_b = s_{b+1} s_a for a <= b, rewriting to a
        // strictly decreasing word.
        for start in (0..p).rev() {
            let mut q = start;
            while q + 1 < p && letters[q].index <= letters[q + 1].index {
                let (a, b) = (letters[q].index, letters[q + 1].index);
                letters[q] = Letter::degen(b + 1);
                letters[q + 1] = Letter::degen(a);
                q += 1;
            }
        }
        let out = OpWord { source: self.source, letters };
        let out = insertion_sort_range(out, p, usize::MAX)?;
        debug_assert_eq!(out.validate(), self.validate());
        Ok(out)
    }

    /// The pair of composed monotone maps a word denotes, one per grading
    /// direction. Two words with the same source are equal as operators iff
    /// their oracle pairs are equal.
    pub fn delta_oracle(&self) -> Result<DeltaOracle, WordError> {
        let stages = self.stages()?;
        let target = stages[0];
        // Simplicial direction: contravariant, so the composite runs from the
        // target ordinal back to the source ordinal, leftmost letter first.
        let mut simp = MonotoneMap::identity(target.simp as usize + 1);
        for (i, letter) in self.letters.iter().enumerate() {
            let level = stages[i + 1].simp as usize;
            match letter.kind {
                LetterKind::SimpFace => {
                    simp = MonotoneMap::coface(letter.index as usize, level).after(&simp);
                }
                LetterKind::SimpDegen => {
                    simp = MonotoneMap::cosurjection(letter.index as usize, level).after(&simp);
                }
                _ => {}
            }
        }
        // Cosimplicial direction: covariant, rightmost letter first.
        let mut cosimp = MonotoneMap::identity(self.source.cosimp as usize + 1);
        for (i, letter) in self.letters.iter().enumerate().rev() {
            let level = stages[i + 1].cosimp as usize;
            match letter.kind {
                LetterKind::CosimpCodegen => {
                    cosimp = MonotoneMap::surjection(letter.index as usize, level).after(&cosimp);
                }
                LetterKind::CosimpCoface => {
                    cosimp = MonotoneMap::injection(letter.index as usize, level).after(&cosimp);
                }
                _ => {}
            }
        }
        Ok(DeltaOracle { simp, cosimp })
    }

    /// Parses the compact text syntax: whitespace-separated tokens `d<i>` or
    /// `d_<i>` (face), `s_<j>` (degeneracy), `s^<j>` (codegeneracy), `D^<i>`
    /// or `D<i>` (coface). Leftmost token applies last. `id` denotes the
    /// empty word.
    pub fn parse(text: &str, source: Bidegree) -> Result<OpWord, WordError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "id" {
                continue;
            }
            letters.push(parse_letter(token)?);
        }
        Ok(OpWord { source, letters })
    }

    /// Letter counts per direction `(faces, degens, codegens, cofaces)`.
    pub fn kind_counts(&self) -> (usize, usize, usize, usize) {
        let mut c = (0, 0, 0, 0);
        for l in &self.letters {
            match l.kind {
                LetterKind::SimpFace => c.0 += 1,
                LetterKind::SimpDegen => c.1 += 1,
                LetterKind::CosimpCodegen => c.2 += 1,
                LetterKind::CosimpCoface => c.3 += 1,
            }
        }
        c
    }
}

impl fmt::Display for OpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn parse_letter(token: &str) -> Result<Letter, WordError> {
    let bad = || WordError::BadToken { token: token.to_string() };
    let (head, rest) = token.split_at(1);
    let parse_idx = |s: &str| s.parse::<u32>().map_err(|_| bad());
    match head {
        "d" => {
            let idx = parse_idx(rest.strip_prefix('_').unwrap_or(rest))?;
            Ok(Letter::face(idx))
        }
        "D" => {
            let idx = parse_idx(rest.strip_prefix('^').unwrap_or(rest))?;
            Ok(Letter::coface(idx))
        }
        "s" => {
            if let Some(r) = rest.strip_prefix('_') {
                Ok(Letter::degen(parse_idx(r)?))
            } else if let Some(r) = rest.strip_prefix('^') {
                Ok(Letter::codegen(parse_idx(r)?))
            } else {
                Err(bad())
            }
        }
        _ => Err(bad()),
    }
}

/// Sorts `letters[lo..hi]` (all of one rewriteable kind) into strictly
/// increasing index order by insertion, each step a `rewrite_step`.
fn insertion_sort_range(mut w: OpWord, lo: usize, hi: usize) -> Result<OpWord, WordError> {
    let hi = hi.min(w.letters.len());
    if lo >= hi {
        return Ok(w);
    }
    for start in (lo..hi).rev() {
        let mut q = start;
        while q + 1 < hi && w.letters[q].index >= w.letters[q + 1].index {
            w = w.rewrite_step(q)?;
            q += 1;
        }
    }
    Ok(w)
}

/// The canonical factorization of a face/codegeneracy word: faces
/// `d_{i_1}..d_{i_m}` with `i_1 < .. < i_m`, then codegeneracies
/// `s^{j_1}..s^{j_n}` with `j_1 < .. < j_n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub source: Bidegree,
    pub faces: Vec<u32>,
    pub codegens: Vec<u32>,
}

impl CanonicalForm {
    /// Expands back into an operator word.
    pub fn to_word(&self) -> OpWord {
        let mut letters: Vec<Letter> = self.faces.iter().map(|&i| Letter::face(i)).collect();
        letters.extend(self.codegens.iter().map(|&j| Letter::codegen(j)));
        OpWord { source: self.source, letters }
    }

    pub fn target(&self) -> Result<Bidegree, WordError> {
        self.to_word().validate()
    }

    /// Number of codegeneracy letters.
    pub fn n_codegens(&self) -> usize {
        self.codegens.len()
    }

    /// Number of face letters.
    pub fn m_faces(&self) -> usize {
        self.faces.len()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_word())
    }
}

/// A monotone map between the finite ordinals `[domain-1]` and
/// `[codomain-1]`, stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotoneMap {
    pub domain: usize,
    pub codomain: usize,
    pub images: Vec<usize>,
}

impl MonotoneMap {
    pub fn identity(size: usize) -> Self {
        MonotoneMap { domain: size, codomain: size, images: (0..size).collect() }
    }

    /// The injection `[k-1] -> [k]` missing `i` (the map a face `d_i` at
    /// simplicial level `k` denotes).
    pub fn coface(i: usize, k: usize) -> Self {
        let images = (0..k).map(|x| if x < i { x } else { x + 1 }).collect();
        MonotoneMap { domain: k, codomain: k + 1, images }
    }

    /// The surjection `[k+1] -> [k]` doubling `j` (the map a degeneracy `s_j`
    /// at simplicial level `k` denotes).
    pub fn cosurjection(j: usize, k: usize) -> Self {
        let images = (0..=k + 1).map(|x| if x <= j { x } else { x - 1 }).collect();
        MonotoneMap { domain: k + 2, codomain: k + 1, images }
    }

    /// The surjection `[c] -> [c-1]` doubling `j` (a codegeneracy `s^j` at
    /// cosimplicial level `c`).
    pub fn surjection(j: usize, c: usize) -> Self {
        let images = (0..=c).map(|x| if x <= j { x } else { x - 1 }).collect();
        MonotoneMap { domain: c + 1, codomain: c, images }
    }

    /// The injection `[c] -> [c+1]` missing `i` (a coface `D^i` at
    /// cosimplicial level `c`).
    pub fn injection(i: usize, c: usize) -> Self {
        let images = (0..=c).map(|x| if x < i { x } else { x + 1 }).collect();
        MonotoneMap { domain: c + 1, codomain: c + 2, images }
    }

    /// Post-composition `self ∘ earlier`.
    pub fn after(&self, earlier: &MonotoneMap) -> MonotoneMap {
        debug_assert_eq!(earlier.codomain, self.domain);
        MonotoneMap {
            domain: earlier.domain,
            codomain: self.codomain,
            images: earlier.images.iter().map(|&x| self.images[x]).collect(),
        }
    }
}

/// Composite oracle value of a word: the simplicial-direction composite runs
/// `[target.simp] -> [source.simp]` and the cosimplicial-direction composite
/// `[source.cosimp] -> [target.cosimp]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeltaOracle {
    pub simp: MonotoneMap,
    pub cosimp: MonotoneMap,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bd(c: u32, s: u32) -> Bidegree {
        Bidegree::new(c, s)
    }

    fn w(text: &str, source: Bidegree) -> OpWord {
        OpWord::parse(text, source).unwrap()
    }

    #[test]
    fn apply_letter_ranges() {
        assert_eq!(apply_letter(Letter::face(0), bd(2, 2)).unwrap(), bd(2, 1));
        assert_eq!(apply_letter(Letter::codegen(1), bd(2, 2)).unwrap(), bd(1, 2));
        assert!(apply_letter(Letter::face(3), bd(2, 2)).is_err());
        assert!(apply_letter(Letter::face(0), bd(2, 0)).is_err());
        assert!(apply_letter(Letter::codegen(0), bd(0, 2)).is_err());
        assert_eq!(apply_letter(Letter::degen(2), bd(0, 2)).unwrap(), bd(0, 3));
        assert_eq!(apply_letter(Letter::coface(3), bd(2, 0)).unwrap(), bd(3, 0));
        assert!(apply_letter(Letter::coface(4), bd(2, 0)).is_err());
    }

    #[test]
    fn validate_examples() {
        assert_eq!(w("d_0 d_1 s^0 s^1", bd(2, 2)).validate().unwrap(), bd(0, 0));
        assert_eq!(OpWord::identity(bd(3, 5)).validate().unwrap(), bd(3, 5));
        assert_eq!(w("d_0 d_1 d_2 s^0", bd(1, 3)).validate().unwrap(), bd(0, 0));
        let err = w("d_0 d_3 s^0 s^1", bd(2, 2)).validate().unwrap_err();
        assert_eq!(err, WordError::IndexOutOfRange {
            pos: 1,
            letter: Letter::face(3),
            at: bd(0, 2),
        });
    }

    #[test]
    fn rewrite_step_examples() {
        let dd = w("d_0 d_0", bd(0, 2));
        assert_eq!(dd.rewrite_step(0).unwrap(), w("d_0 d_1", bd(0, 2)));
        let ss = w("s^0 s^0", bd(2, 0));
        assert_eq!(ss.rewrite_step(0).unwrap(), w("s^0 s^1", bd(2, 0)));
        let ds = w("d_0 s^0", bd(1, 1));
        assert_eq!(ds.rewrite_step(0).unwrap(), w("s^0 d_0", bd(1, 1)));
        let mixed = w("d_0 s_0", bd(0, 1));
        assert_eq!(mixed.rewrite_step(0).unwrap_err(), WordError::NoRuleApplies { pos: 0 });
    }

    #[test]
    fn rewrite_preserves_target_and_oracle() {
        let word = w("s^0 d_0 s^1 d_1", bd(2, 2));
        for pos in 0..3 {
            let r = word.rewrite_step(pos).unwrap();
            assert_eq!(r.validate().unwrap(), word.validate().unwrap());
            assert_eq!(r.delta_oracle().unwrap(), word.delta_oracle().unwrap());
        }
    }

    #[test]
    fn normalize_examples() {
        let c = w("s^0 d_0 s^1 d_1", bd(2, 2)).normalize().unwrap();
        assert_eq!(c.faces, vec![0, 1]);
        assert_eq!(c.codegens, vec![0, 1]);
        assert_eq!(c.to_string(), "d_0 d_1 s^0 s^1");

        let c = w("d_0 d_0", bd(0, 2)).normalize().unwrap();
        assert_eq!(c.faces, vec![0, 1]);

        let canon = w("d_0 d_1 s^0 s^1", bd(2, 2));
        let c = canon.normalize().unwrap();
        assert_eq!(c.to_word(), canon);
        // Idempotence through the expansion.
        assert_eq!(c.to_word().normalize().unwrap(), c);
    }

    #[test]
    fn oracle_examples() {
        let o = w("d_0 d_1", bd(0, 2)).delta_oracle().unwrap();
        assert_eq!(o.simp.images, vec![2]);
        assert_eq!(o.simp.domain, 1);
        assert_eq!(o.simp.codomain, 3);

        let empty = OpWord::identity(bd(2, 3)).delta_oracle().unwrap();
        assert_eq!(empty.simp, MonotoneMap::identity(4));
        assert_eq!(empty.cosimp, MonotoneMap::identity(3));

        let a = w("d_0 d_0", bd(0, 2)).delta_oracle().unwrap();
        let b = w("d_0 d_1", bd(0, 2)).delta_oracle().unwrap();
        assert_eq!(a, b);

        let a = w("s^0 s^0", bd(2, 0)).delta_oracle().unwrap();
        let b = w("s^0 s^1", bd(2, 0)).delta_oracle().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn simp_normalize_examples() {
        let e = w("d_0 s_0", bd(0, 1)).simp_normalize().unwrap();
        assert!(e.is_empty());
        let e = w("d_2 s_0", bd(0, 2)).simp_normalize().unwrap();
        assert_eq!(e, w("s_0 d_1", bd(0, 2)));
        let e = w("d_0 s_1", bd(0, 2)).simp_normalize().unwrap();
        assert_eq!(e, w("s_0 d_0", bd(0, 2)));
    }

    #[test]
    fn simp_normalize_degen_convention() {
        // s_0 s_0 = s_1 s_0: the canonical word is strictly decreasing.
        let e = w("s_0 s_0", bd(0, 1)).simp_normalize().unwrap();
        assert_eq!(e, w("s_1 s_0", bd(0, 1)));
        assert_eq!(
            w("s_0 s_0", bd(0, 1)).delta_oracle().unwrap(),
            w("s_1 s_0", bd(0, 1)).delta_oracle().unwrap()
        );
    }

    #[test]
    fn parse_display_round_trip() {
        let word = w("d0 d_1 s^0 s_2 D^1", bd(1, 3));
        assert_eq!(word.to_string(), "d_0 d_1 s^0 s_2 D^1");
        assert_eq!(OpWord::parse(&word.to_string(), bd(1, 3)).unwrap(), word);
        assert!(OpWord::parse("s0", bd(1, 1)).is_err());
        assert_eq!(OpWord::parse("id", bd(1, 1)).unwrap(), OpWord::identity(bd(1, 1)));
    }

    #[test]
    fn word_json_round_trip() {
        let word = w("d_0 s^1", bd(2, 1));
        let json = serde_json::to_string(&word).unwrap();
        assert_eq!(
            json,
            r#"{"source":{"cosimp":2,"simp":1},"letters":[{"k":"d","i":0},{"k":"S","i":1}]}"#
        );
        let back: OpWord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, word);
    }

    /// Random valid face/codegeneracy word from a random source bidegree.
    fn arb_fc_word(max_len: usize) -> impl Strategy<Value = OpWord> {
        (0u32..=4, 0u32..=4, proptest::collection::vec(any::<(bool, u32)>(), 0..=max_len))
            .prop_map(|(c, s, choices)| {
                let source = Bidegree::new(c, s);
                let mut at = source;
                let mut letters = Vec::new();
                for (is_face, raw) in choices {
                    let letter = if is_face && at.simp >= 1 {
                        Letter::face(raw % (at.simp + 1))
                    } else if !is_face && at.cosimp >= 1 {
                        Letter::codegen(raw % at.cosimp)
                    } else {
                        continue;
                    };
                    at = apply_letter(letter, at).unwrap();
                    letters.push(letter);
                }
                letters.reverse();
                OpWord::new(source, letters)
            })
    }

    proptest! {
        #[test]
        fn prop_rewrite_preserves_oracle(word in arb_fc_word(8), pos in 0usize..8) {
            let oracle = word.delta_oracle().unwrap();
            if let Ok(r) = word.rewrite_step(pos) {
                prop_assert_eq!(r.delta_oracle().unwrap(), oracle);
                prop_assert_eq!(r.kind_counts(), word.kind_counts());
            }
        }

        #[test]
        fn prop_normalize_oracle_equal_and_idempotent(word in arb_fc_word(8)) {
            let c = word.normalize().unwrap();
            let expanded = c.to_word();
            prop_assert_eq!(expanded.delta_oracle().unwrap(), word.delta_oracle().unwrap());
            prop_assert_eq!(expanded.normalize().unwrap(), c);
        }
    }

    /// Exhaustive rewrite closure reaches exactly one word of canonical shape.
    #[test]
    fn confluence_on_short_words() {
        use std::collections::BTreeSet;
        let seeds = [
            w("s^0 d_0 s^1 d_1", bd(2, 2)),
            w("d_0 d_0 d_0", bd(0, 3)),
            w("s^0 s^0 s^0", bd(3, 0)),
            w("d_1 s^0 d_0 s^1 d_2", bd(2, 3)),
        ];
        for seed in seeds {
            let mut seen = BTreeSet::new();
            let mut frontier = vec![seed.clone()];
            seen.insert(seed.clone());
            while let Some(word) = frontier.pop() {
                for pos in 0..word.len().saturating_sub(1) {
                    if let Ok(next) = word.rewrite_step(pos) {
                        if seen.insert(next.clone()) {
                            frontier.push(next);
                        }
                    }
                }
            }
            let canonical_shaped: Vec<_> = seen
                .iter()
                .filter(|word| {
                    let m = word
                        .letters
                        .iter()
                        .take_while(|l| l.kind == LetterKind::SimpFace)
                        .count();
                    word.letters[m..].iter().all(|l| l.kind == LetterKind::CosimpCodegen)
                        && word.letters[..m].windows(2).all(|p| p[0].index < p[1].index)
                        && word.letters[m..].windows(2).all(|p| p[0].index < p[1].index)
                })
                .collect();
            assert_eq!(canonical_shaped.len(), 1, "word {seed} has a unique canonical shape");
            assert_eq!(*canonical_shaped[0], seed.normalize().unwrap().to_word());
        }
    }
}
