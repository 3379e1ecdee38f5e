//! Index calculus for CW bases of simplicial objects.
//!
//! A CW basis assigns to each simplicial level a graded set of generators;
//! the full level then decomposes as one degeneracy copy `s_I<g>` per
//! strictly increasing multi-index `I` and basis generator `g` of the
//! complementary level. The same index sets govern the levels of a
//! cross-term basis in the cosimplicial direction. Latching and matching
//! data are tracked at the same formal level: latching as counted copies
//! with their degeneracy identifications, matching as a compatibility
//! predicate on tuples of formal group words checked through the simplicial
//! normal form.
//!
//! [`tau_normalize`] implements the correction recursion that multiplies a
//! formal generator by degeneracy-of-face factors until all faces above the
//! zeroth vanish, certifying membership in the chains subobject symbolically
//! and reporting failure rather than guessing.

use crate::word::{Bidegree, Letter, LetterKind, OpWord, WordError};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CwError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("cannot certify reduction: {0}")]
    NonReducible(String),
    #[error("malformed matching tuple: {0}")]
    MalformedTuple(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
}

/// A strictly increasing sequence `0 <= i_1 < .. < i_lambda < level` indexing
/// one iterated degeneracy `s_I`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiIndex {
    pub entries: Vec<u32>,
    pub level: u32,
}

impl MultiIndex {
    pub fn lambda(&self) -> usize {
        self.entries.len()
    }

    /// Renders `(i_1,..,i_lambda)`; the empty index is `()`.
    pub fn tag(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(|i| i.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// All multi-indices of length `lambda` below `level`; there are
/// `C(level, lambda)` of them, and the single empty index when `lambda = 0`.
pub fn enumerate_multi_indices(lambda: u32, level: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    fn rec(start: u32, remaining: u32, level: u32, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if remaining == 0 {
            out.push(MultiIndex { entries: current.clone(), level });
            return;
        }
        for i in start..level {
            if level - i < remaining {
                break;
            }
            current.push(i);
            rec(i + 1, remaining - 1, level, current, out);
            current.pop();
        }
    }
    rec(0, lambda, level, &mut current, &mut out);
    out
}

/// A finitely supported graded set of named generators, keyed by degree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedSetSpec {
    generators: BTreeMap<u32, Vec<String>>,
}

impl GradedSetSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, degree: u32, name: impl Into<String>) {
        self.generators.entry(degree).or_default().push(name.into());
    }

    pub fn count(&self, degree: u32) -> usize {
        self.generators.get(&degree).map_or(0, |v| v.len())
    }

    pub fn total(&self) -> usize {
        self.generators.values().map(|v| v.len()).sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.generators.keys().copied()
    }

    pub fn names(&self, degree: u32) -> &[String] {
        self.generators.get(&degree).map_or(&[], |v| v.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &str)> + '_ {
        self.generators.iter().flat_map(|(&d, names)| names.iter().map(move |n| (d, n.as_str())))
    }

    pub fn is_empty(&self) -> bool {
        self.generators.values().all(|v| v.is_empty())
    }

    /// Degreewise disjoint union.
    pub fn merged(&self, other: &GradedSetSpec) -> GradedSetSpec {
        let mut out = self.clone();
        for (d, name) in other.iter() {
            out.add(d, name);
        }
        out
    }
}

/// A CW basis: one graded set per simplicial level.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CwBasisSpec {
    pub per_level: Vec<GradedSetSpec>,
}

impl CwBasisSpec {
    pub fn level(&self, level: u32) -> GradedSetSpec {
        self.per_level.get(level as usize).cloned().unwrap_or_default()
    }
}

/// A cross-term basis: a graded set per bidegree `(n >= 1, r >= 1)`; the
/// entries at `n = 0` or `r = 0` are forced to vanish.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrossTermSpec {
    per_bidegree: BTreeMap<(u32, u32), GradedSetSpec>,
}

impl CrossTermSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, n: u32, r: u32, spec: GradedSetSpec) -> Result<(), CwError> {
        if n == 0 || r == 0 {
            return Err(CwError::InvalidSpec(format!(
                "cross-term bases vanish at n = 0 or r = 0, got ({n},{r})"
            )));
        }
        self.per_bidegree.insert((n, r), spec);
        Ok(())
    }

    pub fn at(&self, n: u32, r: u32) -> GradedSetSpec {
        self.per_bidegree.get(&(n, r)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &GradedSetSpec)> {
        self.per_bidegree.iter()
    }
}

/// The level-`n` inventory of a CW basis: one generator `s_I<g>` per
/// `I` of length `lambda` and basis generator `g` at level `n - lambda`,
/// in the same degree as `g`.
pub fn cw_decompose(level: u32, basis: &CwBasisSpec) -> GradedSetSpec {
    let mut out = GradedSetSpec::new();
    for lambda in 0..=level {
        let base = basis.level(level - lambda);
        for index in enumerate_multi_indices(lambda, level) {
            for (degree, name) in base.iter() {
                if lambda == 0 {
                    out.add(degree, name);
                } else {
                    out.add(degree, format!("s_{}<{}>", index.tag(), name));
                }
            }
        }
    }
    out
}

/// The level-`(n, r)` inventory of a cross-term basis: one copy of the
/// `(n - lambda, r)` cross-term generators per multi-index of length
/// `lambda`. Empty whenever `r = 0`.
pub fn cross_term_level(n: u32, r: u32, spec: &CrossTermSpec) -> GradedSetSpec {
    let mut out = GradedSetSpec::new();
    if r == 0 {
        return out;
    }
    for lambda in 0..=n {
        let base = spec.at(n - lambda, r);
        for index in enumerate_multi_indices(lambda, n) {
            for (degree, name) in base.iter() {
                if lambda == 0 {
                    out.add(degree, name);
                } else {
                    out.add(degree, format!("[{}]_{}", name, index.tag()));
                }
            }
        }
    }
    out
}

/// The latching data at level `n`: `n` copies of the level below, glued
/// along the degeneracy identifications `s_j x` in copy `i` with
/// `s_i x` in copy `j+1`, indexed by `0 <= i <= j <= n-2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatchingStructure {
    pub copies: u32,
    pub identifications: Vec<(u32, u32)>,
}

pub fn latching_copies(level: u32) -> LatchingStructure {
    let mut identifications = Vec::new();
    if level >= 2 {
        for j in 0..=level - 2 {
            for i in 0..=j {
                identifications.push((i, j));
            }
        }
    }
    LatchingStructure { copies: level, identifications }
}

/// A formal generator of a free simplicial object: a named base with a
/// canonical face tag (the strictly increasing indices of faces already
/// applied) and the simplicial level it lives in.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FormalGen {
    pub base: String,
    pub faces: Vec<u32>,
    pub level: u32,
}

impl FormalGen {
    pub fn atom(base: impl Into<String>, level: u32) -> Self {
        FormalGen { base: base.into(), faces: Vec::new(), level }
    }
}

impl fmt::Display for FormalGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.faces.is_empty() {
            write!(f, "{}", self.base)
        } else {
            let parts: Vec<String> = self.faces.iter().map(|i| i.to_string()).collect();
            write!(f, "d[{}]({})", parts.join(","), self.base)
        }
    }
}

/// One factor of a formal group word: a sign, a normalized simplicial
/// prefix (degeneracies with strictly decreasing indices, then faces with
/// strictly increasing indices), and the generator it applies to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Factor {
    pub sign: i8,
    /// Degeneracy indices in word order (strictly decreasing).
    pub degens: Vec<u32>,
    /// Face indices in word order (strictly increasing).
    pub faces: Vec<u32>,
    pub gen: FormalGen,
}

impl Factor {
    fn prefix_letters(&self) -> Vec<Letter> {
        let mut letters: Vec<Letter> = self.degens.iter().map(|&j| Letter::degen(j)).collect();
        letters.extend(self.faces.iter().map(|&i| Letter::face(i)));
        letters
    }

    /// Simplicial level of the decorated generator.
    pub fn level(&self) -> u32 {
        self.gen.level - self.faces.len() as u32 + self.degens.len() as u32
    }

    fn inverse(&self) -> Factor {
        Factor { sign: -self.sign, ..self.clone() }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut body = String::new();
        for &j in &self.degens {
            body.push_str(&format!("s_{j} "));
        }
        for &i in &self.faces {
            body.push_str(&format!("d_{i} "));
        }
        body.push_str(&self.gen.to_string());
        if self.sign < 0 {
            write!(f, "({body})^-1")
        } else {
            write!(f, "{body}")
        }
    }
}

/// A formal product of signed, operator-decorated generators; the identity
/// is the empty word. Always kept freely reduced.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormalGroupWord {
    factors: Vec<Factor>,
}

impl FormalGroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(gen: FormalGen) -> Self {
        FormalGroupWord {
            factors: vec![Factor { sign: 1, degens: Vec::new(), faces: Vec::new(), gen }],
        }
    }

    pub fn from_factors(factors: Vec<Factor>) -> Self {
        let mut w = FormalGroupWord { factors };
        w.reduce();
        w
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Common simplicial level of the factors, when there are any.
    pub fn level(&self) -> Option<u32> {
        self.factors.first().map(|f| f.level())
    }

    pub fn inverse(&self) -> FormalGroupWord {
        FormalGroupWord { factors: self.factors.iter().rev().map(|f| f.inverse()).collect() }
    }

    pub fn times(&self, other: &FormalGroupWord) -> FormalGroupWord {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        FormalGroupWord::from_factors(factors)
    }

    fn reduce(&mut self) {
        let mut stack: Vec<Factor> = Vec::with_capacity(self.factors.len());
        for f in self.factors.drain(..) {
            let cancels = stack.last().is_some_and(|top| {
                top.sign == -f.sign
                    && top.degens == f.degens
                    && top.faces == f.faces
                    && top.gen == f.gen
            });
            if cancels {
                stack.pop();
            } else {
                stack.push(f);
            }
        }
        self.factors = stack;
    }
}

impl fmt::Display for FormalGroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" . "))
    }
}

/// Face images of formal generators: an explicit table with a fallback for
/// generators outside it.
#[derive(Debug, Clone)]
pub struct FaceImages {
    table: BTreeMap<(FormalGen, u32), FormalGroupWord>,
    fallback: FaceFallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceFallback {
    /// Fail on any face not present in the table.
    Error,
    /// Every missing face is the fresh generator tagged by the canonical
    /// composite face multi-index, so all simplicial relations among the
    /// images hold by construction.
    FreeMonomial,
}

impl FaceImages {
    pub fn new(fallback: FaceFallback) -> Self {
        FaceImages { table: BTreeMap::new(), fallback }
    }

    /// A generator whose faces all vanish.
    pub fn zero_faces(gen: &FormalGen) -> Self {
        let mut images = FaceImages::new(FaceFallback::Error);
        for i in 0..=gen.level {
            images.set(gen.clone(), i, FormalGroupWord::identity());
        }
        images
    }

    pub fn set(&mut self, gen: FormalGen, index: u32, image: FormalGroupWord) {
        self.table.insert((gen, index), image);
    }

    /// The value of `d_index` on `gen`.
    pub fn face(&self, gen: &FormalGen, index: u32) -> Result<FormalGroupWord, CwError> {
        if let Some(image) = self.table.get(&(gen.clone(), index)) {
            return Ok(image.clone());
        }
        match self.fallback {
            FaceFallback::Error => Err(CwError::NonReducible(format!(
                "no face image for d_{index} on {gen}"
            ))),
            FaceFallback::FreeMonomial => {
                // Push d_index through the existing canonical face tag.
                let level_of_base = gen.level + gen.faces.len() as u32;
                let mut letters = vec![Letter::face(index)];
                letters.extend(gen.faces.iter().map(|&i| Letter::face(i)));
                let word = OpWord::new(Bidegree::new(0, level_of_base), letters);
                let normal = word.simp_normalize()?;
                let faces: Vec<u32> = normal.letters.iter().map(|l| l.index).collect();
                Ok(FormalGroupWord::generator(FormalGen {
                    base: gen.base.clone(),
                    faces,
                    level: gen.level - 1,
                }))
            }
        }
    }
}

/// Applies a simplicial operator word (leftmost letter applied last) to a
/// formal group word, factor by factor. With `images` present, faces
/// reaching a generator are substituted by their declared values; without
/// it they remain in the factor prefix.
pub fn apply_simp_op(
    op: &[Letter],
    word: &FormalGroupWord,
    images: Option<&FaceImages>,
) -> Result<FormalGroupWord, CwError> {
    let mut out: Vec<Factor> = Vec::new();
    for factor in &word.factors {
        let mut letters = op.to_vec();
        letters.extend(factor.prefix_letters());
        let combined = OpWord::new(Bidegree::new(0, factor.gen.level), letters);
        let normal = combined.simp_normalize()?;
        let degens: Vec<u32> = normal
            .letters
            .iter()
            .filter(|l| l.kind == LetterKind::SimpDegen)
            .map(|l| l.index)
            .collect();
        let faces: Vec<u32> = normal
            .letters
            .iter()
            .filter(|l| l.kind == LetterKind::SimpFace)
            .map(|l| l.index)
            .collect();
        let resolved = resolve_factor(factor.sign, degens, faces, &factor.gen, images)?;
        out.extend(resolved.factors);
    }
    Ok(FormalGroupWord::from_factors(out))
}

fn resolve_factor(
    sign: i8,
    degens: Vec<u32>,
    faces: Vec<u32>,
    gen: &FormalGen,
    images: Option<&FaceImages>,
) -> Result<FormalGroupWord, CwError> {
    let Some(images_table) = images else {
        return Ok(FormalGroupWord::from_factors(vec![Factor {
            sign,
            degens,
            faces,
            gen: gen.clone(),
        }]));
    };
    if faces.is_empty() {
        return Ok(FormalGroupWord::from_factors(vec![Factor {
            sign,
            degens,
            faces,
            gen: gen.clone(),
        }]));
    }
    // The rightmost face is applied first; substitute it and push the rest
    // of the operator through the image.
    let innermost = *faces.last().unwrap();
    let image = images_table.face(gen, innermost)?;
    let mut remaining: Vec<Letter> = degens.iter().map(|&j| Letter::degen(j)).collect();
    remaining.extend(faces[..faces.len() - 1].iter().map(|&i| Letter::face(i)));
    let pushed = apply_simp_op(&remaining, &image, images)?;
    Ok(if sign < 0 { pushed.inverse() } else { pushed })
}

/// A candidate point of the matching object: components `(x_k,..,x_n)` at
/// level `n-1`, compatible when `d_i x_j = d_{j-1} x_i` for all
/// `k <= i < j <= n`.
#[derive(Debug, Clone)]
pub struct MatchingTuple {
    pub k: u32,
    pub n: u32,
    pub components: Vec<FormalGroupWord>,
}

/// Checks the matching compatibility symbolically: both sides of every
/// relation are pushed through the simplicial normal form and compared as
/// reduced words. Faces are kept formal, so no face images are needed.
pub fn check_matching_tuple(tuple: &MatchingTuple) -> Result<bool, CwError> {
    let expected = (tuple.n - tuple.k + 1) as usize;
    if tuple.components.len() != expected {
        return Err(CwError::MalformedTuple(format!(
            "expected {expected} components (x_{}..x_{}), got {}",
            tuple.k,
            tuple.n,
            tuple.components.len()
        )));
    }
    if tuple.n == 0 {
        return Err(CwError::MalformedTuple("matching tuples need n >= 1".into()));
    }
    let level = tuple.n - 1;
    for (idx, c) in tuple.components.iter().enumerate() {
        if let Some(l) = c.level() {
            if l != level {
                return Err(CwError::MalformedTuple(format!(
                    "component {idx} lives at level {l}, expected {level}"
                )));
            }
        }
    }
    if level == 0 {
        // No face maps below level one: the condition is vacuous.
        return Ok(true);
    }
    for i in tuple.k..tuple.n {
        for j in i + 1..=tuple.n {
            let xj = &tuple.components[(j - tuple.k) as usize];
            let xi = &tuple.components[(i - tuple.k) as usize];
            let lhs = apply_simp_op(&[Letter::face(i)], xj, None)?;
            let rhs = apply_simp_op(&[Letter::face(j - 1)], xi, None)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Result of the normalization recursion: the corrected word and the
/// correction factor introduced at each step.
#[derive(Debug, Clone)]
pub struct TauNormalization {
    pub word: FormalGroupWord,
    pub corrections: Vec<FormalGroupWord>,
}

/// Pushes the formal generator `tau` at level `n` into the chains subobject:
/// starting from `tau_0 = tau`, each step multiplies by the inverse of a
/// degeneracy of a face, `tau_{i+1} = tau_i . (s_{n-i-1} d_{n-i} tau_i)^-1`.
///
/// The returned word is certified symbolically: every face `d_i` with
/// `1 <= i <= n` of it must reduce to the empty word, otherwise
/// [`CwError::NonReducible`] is reported.
pub fn tau_normalize(
    tau: &FormalGen,
    n: u32,
    images: &FaceImages,
) -> Result<TauNormalization, CwError> {
    if tau.level != n {
        return Err(CwError::InvalidSpec(format!(
            "generator {tau} lives at level {}, expected {n}",
            tau.level
        )));
    }
    if n == 0 {
        return Err(CwError::InvalidSpec("normalization needs level n >= 1".into()));
    }
    let mut current = FormalGroupWord::generator(tau.clone());
    let mut corrections = Vec::new();
    for i in 0..n {
        let op = [Letter::degen(n - i - 1), Letter::face(n - i)];
        let correction = apply_simp_op(&op, &current, Some(images))?;
        current = current.times(&correction.inverse());
        corrections.push(correction);
    }
    for i in 1..=n {
        let face = apply_simp_op(&[Letter::face(i)], &current, Some(images))?;
        if !face.is_identity() {
            return Err(CwError::NonReducible(format!(
                "d_{i} of the normalized word does not vanish: {face}"
            )));
        }
    }
    Ok(TauNormalization { word: current, corrections })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum CountOrNames {
    Count(u64),
    Names(Vec<String>),
}

#[derive(Debug, Clone, Deserialize)]
struct RawSpec {
    #[serde(default)]
    cw: BTreeMap<String, BTreeMap<String, CountOrNames>>,
    #[serde(default)]
    cross: BTreeMap<String, BTreeMap<String, CountOrNames>>,
}

/// Loads basis and cross-term specs from the JSON/TOML document layout
/// `{"cw": {"0": {"7": 1}}, "cross": {"1,1": {"13": 1}, "2,2": {"19": 1}}}`.
/// Degree entries give either a generator count or explicit names.
pub fn load_spec(text: &str) -> Result<(CwBasisSpec, CrossTermSpec), CwError> {
    let raw: RawSpec = if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| CwError::InvalidSpec(e.to_string()))?
    } else {
        toml::from_str(text).map_err(|e| CwError::InvalidSpec(e.to_string()))?
    };
    let parse_u32 = |s: &str| -> Result<u32, CwError> {
        s.trim().parse::<u32>().map_err(|_| CwError::InvalidSpec(format!("bad integer {s:?}")))
    };
    let build = |entries: &BTreeMap<String, CountOrNames>, prefix: &str| -> Result<GradedSetSpec, CwError> {
        let mut set = GradedSetSpec::new();
        for (degree_text, value) in entries {
            let degree = parse_u32(degree_text)?;
            if degree == 0 {
                return Err(CwError::InvalidSpec("generator degrees start at 1".into()));
            }
            match value {
                CountOrNames::Count(k) => {
                    for idx in 0..*k {
                        set.add(degree, format!("{prefix}_{degree}_{idx}"));
                    }
                }
                CountOrNames::Names(names) => {
                    for name in names {
                        set.add(degree, name.clone());
                    }
                }
            }
        }
        Ok(set)
    };
    let mut cw = CwBasisSpec::default();
    for (level_text, entries) in &raw.cw {
        let level = parse_u32(level_text)? as usize;
        if cw.per_level.len() <= level {
            cw.per_level.resize(level + 1, GradedSetSpec::new());
        }
        cw.per_level[level] = build(entries, &format!("g{level}"))?;
    }
    let mut cross = CrossTermSpec::new();
    for (key, entries) in &raw.cross {
        let parts: Vec<&str> = key.split(',').collect();
        if parts.len() != 2 {
            return Err(CwError::InvalidSpec(format!("cross-term key {key:?} is not \"n,r\"")));
        }
        let n = parse_u32(parts[0])?;
        let r = parse_u32(parts[1])?;
        cross.insert(n, r, build(entries, &format!("c{n}_{r}"))?)?;
    }
    Ok((cw, cross))
}
