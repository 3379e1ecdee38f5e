//! Factorizations of composite face-codegeneracy maps.
//!
//! A target map `psi` is given by its canonical factorization
//! `d_{i_1}..d_{i_m} s^{j_1}..s^{j_n}` from a source bidegree. Its
//! factorization set is the set of all words of single letters composing to
//! `psi`; the set is in bijection with the vertices of the `(n+m)`-
//! permutohedron, built recursively from the canonical word at the identity
//! vertex by letting each adjacent transposition act through one commutation
//! rewrite. Passing to the face-codegeneracy quotient merges factorizations
//! that differ only in how a run of face letters is decomposed, which labels
//! the vertices of the quotient polyhedron by factorization classes.
//!
//! Allowable subcomposites are the consecutive subwords whose two cut points
//! do not split a pair of adjacent face letters; the boundary scheme pairs
//! every boundary facet of the quotient polyhedron with the tuple of
//! allowable maps whose labeled polyhedra form its product decomposition.

use crate::polytope::{
    fc_polytope_with_limit, CellComplex, Permutation, PolytopeError, DEFAULT_MAX_N,
};
use crate::word::{Bidegree, CanonicalForm, LetterKind, OpWord, WordError};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorizationError {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("{0}")]
    InvalidTarget(String),
}

/// A composite face-codegeneracy map, stored by its canonical factorization.
///
/// With source `E^{n+k}_{m+l}`, the `n` codegeneracies land in `E^k_{m+l}`
/// and the `m` faces in `E^k_l`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TargetMap {
    canonical: CanonicalForm,
}

impl TargetMap {
    pub fn new(canonical: CanonicalForm) -> Result<Self, FactorizationError> {
        let word = canonical.to_word();
        word.validate()?;
        let strictly_increasing = |v: &[u32]| v.windows(2).all(|p| p[0] < p[1]);
        if !strictly_increasing(&canonical.faces) || !strictly_increasing(&canonical.codegens) {
            return Err(FactorizationError::InvalidTarget(format!(
                "{canonical} is not a canonical factorization"
            )));
        }
        Ok(TargetMap { canonical })
    }

    /// Normalizes an arbitrary face/codegeneracy word into a target map.
    pub fn from_word(word: &OpWord) -> Result<Self, FactorizationError> {
        Ok(TargetMap { canonical: word.normalize()? })
    }

    pub fn canonical(&self) -> &CanonicalForm {
        &self.canonical
    }

    pub fn source(&self) -> Bidegree {
        self.canonical.source
    }

    /// Codegeneracy letter count `n`.
    pub fn n(&self) -> usize {
        self.canonical.n_codegens()
    }

    /// Face letter count `m`.
    pub fn m(&self) -> usize {
        self.canonical.m_faces()
    }

    /// Residual cosimplicial level `k` of the target.
    pub fn k(&self) -> u32 {
        self.canonical.source.cosimp - self.n() as u32
    }

    /// Residual simplicial level `l` of the target.
    pub fn l(&self) -> u32 {
        self.canonical.source.simp - self.m() as u32
    }
}

impl std::fmt::Display for TargetMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.canonical)
    }
}

/// The factorization set of a target map, with the recorded correspondence
/// between permutohedron vertices and words. Entries are sorted by
/// permutation.
#[derive(Debug, Clone)]
pub struct Factorizations {
    pub target: TargetMap,
    pub entries: Vec<(Permutation, OpWord)>,
}

impl Factorizations {
    pub fn word_of(&self, perm: &Permutation) -> Option<&OpWord> {
        self.entries
            .binary_search_by(|(p, _)| p.cmp(perm))
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn words(&self) -> impl Iterator<Item = &OpWord> {
        self.entries.iter().map(|(_, w)| w)
    }
}

/// Enumerates every factorization of `psi` into single letters.
///
/// Breadth-first closure from the canonical word at the identity arrangement:
/// swapping the letters at adjacent composition positions is one commutation
/// rewrite of the word. The closure visits all `(n+m)!` arrangements; a
/// revisited arrangement must carry the same word, and all words are
/// pairwise distinct.
pub fn enumerate_factorizations(psi: &TargetMap) -> Result<Factorizations, FactorizationError> {
    enumerate_factorizations_with_limit(psi, DEFAULT_MAX_N)
}

pub fn enumerate_factorizations_with_limit(
    psi: &TargetMap,
    max_n: u32,
) -> Result<Factorizations, FactorizationError> {
    let total = psi.n() + psi.m();
    if total as u32 > max_n {
        return Err(PolytopeError::SizeLimit { n: total as u32, max: max_n }.into());
    }
    if total == 0 {
        return Ok(Factorizations {
            target: psi.clone(),
            entries: vec![(
                Permutation::new(Vec::new()).expect("empty permutation"),
                psi.canonical().to_word(),
            )],
        });
    }
    // Arrangement position p (0-based, applied first) holds word letter
    // index total-1-p; the canonical word sits at the identity.
    let identity: Vec<u8> = (1..=total as u8).collect();
    let mut table: BTreeMap<Vec<u8>, OpWord> = BTreeMap::new();
    table.insert(identity.clone(), psi.canonical().to_word());
    let mut frontier = vec![identity];
    while let Some(arrangement) = frontier.pop() {
        let word = table[&arrangement].clone();
        for p in 0..total - 1 {
            let mut swapped = arrangement.clone();
            swapped.swap(p, p + 1);
            let rewritten = word.rewrite_step(total - 2 - p)?;
            match table.get(&swapped) {
                Some(existing) => {
                    if *existing != rewritten {
                        return Err(FactorizationError::InvalidTarget(format!(
                            "inconsistent correspondence at {swapped:?}: {existing} vs {rewritten}"
                        )));
                    }
                }
                None => {
                    table.insert(swapped.clone(), rewritten);
                    frontier.push(swapped);
                }
            }
        }
    }
    let entries: Vec<(Permutation, OpWord)> = table
        .into_iter()
        .map(|(v, w)| (Permutation::new(v).expect("bijection"), w))
        .collect();
    let mut words: Vec<&OpWord> = entries.iter().map(|(_, w)| w).collect();
    words.sort();
    words.dedup();
    if words.len() != entries.len() {
        return Err(FactorizationError::InvalidTarget(
            "factorization words are not pairwise distinct".into(),
        ));
    }
    Ok(Factorizations { target: psi.clone(), entries })
}

/// A class of factorizations differing only by face-face rewrites, labelling
/// one vertex of the quotient polyhedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorClass {
    /// Lexicographically least member word.
    pub repr: OpWord,
    pub members: Vec<OpWord>,
}

/// The face-codegeneracy polyhedron of a target map with its vertex classes
/// labelled by factorization classes. `labels[i]` labels `complex.classes[i]`.
#[derive(Debug, Clone)]
pub struct LabeledPolytope {
    pub target: TargetMap,
    pub complex: CellComplex,
    pub labels: Vec<FactorClass>,
    pub factorizations: Factorizations,
}

impl LabeledPolytope {
    /// Edges of the labeled 1-skeleton as sorted pairs of label indices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.complex.skeleton_edges()
    }
}

/// Labels the quotient polyhedron `P^{n+m}_n` of `psi` with factorization
/// classes: the class of a vertex is the set of words at its member
/// arrangements.
pub fn label_polytope(psi: &TargetMap) -> Result<LabeledPolytope, FactorizationError> {
    label_polytope_with_limit(psi, DEFAULT_MAX_N)
}

pub fn label_polytope_with_limit(
    psi: &TargetMap,
    max_n: u32,
) -> Result<LabeledPolytope, FactorizationError> {
    let factorizations = enumerate_factorizations_with_limit(psi, max_n)?;
    let total = (psi.n() + psi.m()) as u32;
    if total == 0 {
        return Err(FactorizationError::InvalidTarget(
            "the empty composite has no polyhedron to label".into(),
        ));
    }
    if psi.n() as u32 == total {
        return Err(FactorizationError::InvalidTarget(
            "need at least one face letter so that n < N".into(),
        ));
    }
    let complex = fc_polytope_with_limit(total, psi.n() as u32, max_n)?;
    let labels: Vec<FactorClass> = complex
        .classes
        .iter()
        .map(|class| {
            let mut members: Vec<OpWord> = class
                .members
                .iter()
                .map(|perm| factorizations.word_of(perm).expect("table covers all").clone())
                .collect();
            members.sort();
            members.dedup();
            debug_assert_eq!(members.len(), class.members.len());
            FactorClass { repr: members[0].clone(), members }
        })
        .collect();
    Ok(LabeledPolytope { target: psi.clone(), complex, labels, factorizations })
}

/// The set of allowable subcomposites of `psi`: consecutive subwords of its
/// factorizations whose two cut points do not split a pair of adjacent face
/// letters, deduplicated as maps (canonical form plus bidegree frame).
/// `psi` itself is always a member.
pub fn allowable_subcomposites(psi: &TargetMap) -> Result<Vec<TargetMap>, FactorizationError> {
    allowable_subcomposites_with_limit(psi, DEFAULT_MAX_N)
}

pub fn allowable_subcomposites_with_limit(
    psi: &TargetMap,
    max_n: u32,
) -> Result<Vec<TargetMap>, FactorizationError> {
    let factorizations = enumerate_factorizations_with_limit(psi, max_n)?;
    let mut out: Vec<TargetMap> = Vec::new();
    for word in factorizations.words() {
        let stages = word.stages()?;
        let len = word.len();
        for lo in 0..len {
            for hi in lo + 1..=len {
                let face = |i: usize| word.letters[i].kind == LetterKind::SimpFace;
                if lo > 0 && face(lo - 1) && face(lo) {
                    continue;
                }
                if hi < len && face(hi - 1) && face(hi) {
                    continue;
                }
                let sub = OpWord::new(stages[hi], word.letters[lo..hi].to_vec());
                let target = TargetMap::from_word(&sub)?;
                if !out.contains(&target) {
                    out.push(target);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// One boundary facet of the labeled polyhedron together with the ordered
/// tuple of allowable maps whose labeled polyhedra form its product
/// decomposition. The tuple is listed outermost first, so concatenating the
/// canonical words in order recomposes `psi`.
#[derive(Debug, Clone)]
pub struct FacetScheme {
    /// Index of the facet cell in the complex of [`LabeledPolytope`].
    pub cell: usize,
    /// Decomposition label of the facet, innermost block first.
    pub blocks: Vec<(u32, u32)>,
    /// Factor maps, outermost (applied last) first.
    pub scheme: Vec<TargetMap>,
}

/// Pairs every boundary facet of the quotient polyhedron of `psi` with its
/// scheme tuple. Requires at least one codegeneracy letter.
pub fn boundary_scheme(psi: &TargetMap) -> Result<Vec<FacetScheme>, FactorizationError> {
    boundary_scheme_with_limit(psi, DEFAULT_MAX_N)
}

pub fn boundary_scheme_with_limit(
    psi: &TargetMap,
    max_n: u32,
) -> Result<Vec<FacetScheme>, FactorizationError> {
    if psi.n() == 0 {
        return Err(FactorizationError::InvalidTarget(
            "boundary scheme needs n >= 1 codegeneracies".into(),
        ));
    }
    let labeled = label_polytope_with_limit(psi, max_n)?;
    let total = psi.n() + psi.m();
    let top_dim = labeled.complex.dim();
    let mut out = Vec::new();
    for cell_id in labeled.complex.cells_of_dim(top_dim.saturating_sub(1)) {
        let cell = &labeled.complex.cells[cell_id];
        // A member arrangement realizing the facet's blocks in consecutive
        // positions: blocks in order, letters ascending inside each.
        let mut arrangement: Vec<u8> = Vec::with_capacity(total);
        for block in &cell.letters {
            arrangement.extend_from_slice(block);
        }
        let perm = Permutation::new(arrangement).expect("blocks partition the letters");
        let word = labeled
            .factorizations
            .word_of(&perm)
            .ok_or_else(|| {
                FactorizationError::InvalidTarget(format!("no word at arrangement {perm}"))
            })?
            .clone();
        let stages = word.stages()?;
        // Block i occupies positions a..b (1-based, applied first at low
        // positions), i.e. word letter indices total-b..total-a.
        let mut scheme = Vec::new();
        let mut hi_position = total;
        let mut sizes: Vec<usize> = cell.letters.iter().map(|b| b.len()).collect();
        sizes.reverse();
        for size in sizes {
            let lo_position = hi_position - size;
            let lo = total - hi_position;
            let hi = total - lo_position;
            let sub = OpWord::new(stages[hi], word.letters[lo..hi].to_vec());
            scheme.push(TargetMap::from_word(&sub)?);
            hi_position = lo_position;
        }
        out.push(FacetScheme { cell: cell_id, blocks: cell.blocks.clone(), scheme });
    }
    Ok(out)
}

#[derive(Serialize)]
struct ClassJson {
    repr: String,
    members: Vec<String>,
}

#[derive(Serialize)]
struct FacetJson {
    blocks: Vec<(u32, u32)>,
    scheme: Vec<String>,
}

#[derive(Serialize)]
struct LabeledJson {
    format_version: u32,
    psi: String,
    source: Bidegree,
    classes: Vec<ClassJson>,
    edges: Vec<(usize, usize)>,
    facets: Vec<FacetJson>,
}

/// JSON document for a labeled polyhedron: classes sorted by representative
/// word, edges as index pairs into that order, and the boundary facet
/// schemes. Byte-stable for golden-file comparison.
pub fn labeled_polytope_json(psi: &TargetMap) -> Result<String, FactorizationError> {
    let labeled = label_polytope(psi)?;
    let schemes = boundary_scheme(psi)?;
    // Order classes by representative word text.
    let mut order: Vec<usize> = (0..labeled.labels.len()).collect();
    order.sort_by_key(|&i| labeled.labels[i].repr.to_string());
    let mut rank = vec![0usize; order.len()];
    for (new_rank, &old) in order.iter().enumerate() {
        rank[old] = new_rank;
    }
    let classes: Vec<ClassJson> = order
        .iter()
        .map(|&i| ClassJson {
            repr: labeled.labels[i].repr.to_string(),
            members: labeled.labels[i].members.iter().map(|w| w.to_string()).collect(),
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = labeled
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (rank[a], rank[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    let mut facets: Vec<FacetJson> = schemes
        .iter()
        .map(|f| FacetJson {
            blocks: f.blocks.clone(),
            scheme: f.scheme.iter().map(|t| t.to_string()).collect(),
        })
        .collect();
    facets.sort_by(|a, b| (&a.blocks, &a.scheme).cmp(&(&b.blocks, &b.scheme)));
    let doc = LabeledJson {
        format_version: 1,
        psi: psi.to_string(),
        source: psi.source(),
        classes,
        edges,
        facets,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    Ok(s)
}
