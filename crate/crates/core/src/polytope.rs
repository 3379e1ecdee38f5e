//! Permutohedra and face-codegeneracy polyhedra as finite cell complexes.
//!
//! The `N`-permutohedron is modelled combinatorially: a vertex is an
//! arrangement of the letters `1..=N` in `N` consecutive positions, and a face
//! is an ordered set partition of the letters into consecutive position
//! blocks. The face-codegeneracy polyhedron is the quotient identifying two
//! arrangements that differ by swapping adjacent positions both holding
//! letters `> n` (the "face" letters; letters `<= n` are the "codegeneracy"
//! letters). Vertices become orbit classes, and cells of the permutohedron
//! are merged when their class images coincide, with degenerate cells (those
//! whose image drops dimension) removed from their grade.
//!
//! Every cell carries a product decomposition label `[(l_1,c_1),..]`
//! recording that the cell is a product of smaller face-codegeneracy
//! polyhedra, one factor per block, where `c_i` counts the codegeneracy
//! letters in block `i`.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Default bound on the number of letters for exhaustive enumeration.
pub const DEFAULT_MAX_N: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolytopeError {
    #[error("N = {n} exceeds the enumeration bound {max}")]
    SizeLimit { n: u32, max: u32 },
    #[error("invalid quotient: {0}")]
    InvalidQuotient(String),
    #[error("boundary sphere check requires n >= 1")]
    NotASphereCandidate,
    #[error("OFF export requires a 3-dimensional complex, got dimension {dim}")]
    UnsupportedDim { dim: usize },
    #[error("{0}")]
    InvalidInput(String),
}

/// A permutation of `{1..N}` in one-line notation: `images[p]` is the letter
/// occupying position `p`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn new(images: Vec<u8>) -> Result<Self, PolytopeError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v as usize > n || seen[v as usize] {
                return Err(PolytopeError::InvalidInput(format!(
                    "{images:?} is not a bijection on 1..={n}"
                )));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: u32) -> Self {
        Permutation { images: (1..=n as u8).collect() }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.images {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// An orbit of vertices under adjacent transposition of two face letters,
/// named by its lexicographically least member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexClass {
    pub repr: Permutation,
    pub members: Vec<Permutation>,
}

/// A cell of the (quotient) complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub dim: usize,
    /// Sorted ids of the vertex classes lying in the cell.
    pub vertices: Vec<usize>,
    /// Product decomposition `[(l_i, c_i)]`: block size and codegeneracy
    /// count per consecutive block.
    pub blocks: Vec<(u32, u32)>,
    /// Letters per block, each sorted; face-only blocks are maximal.
    pub letters: Vec<Vec<u8>>,
}

/// A finite graded face complex: either the `N`-permutohedron or its
/// face-codegeneracy quotient.
#[derive(Debug, Clone)]
pub struct CellComplex {
    /// Number of letters.
    pub n_letters: u32,
    /// Number of codegeneracy letters (letters `<= n` are codegeneracies).
    pub n_codegens: u32,
    pub classes: Vec<VertexClass>,
    /// Sorted by (dim, vertices).
    pub cells: Vec<Cell>,
    /// Index of the unique top cell.
    pub top: usize,
}

impl CellComplex {
    /// Dimension of the complex (dimension of the top cell).
    pub fn dim(&self) -> usize {
        self.cells[self.top].dim
    }

    /// Ids of cells of the given dimension.
    pub fn cells_of_dim(&self, dim: usize) -> Vec<usize> {
        (0..self.cells.len()).filter(|&i| self.cells[i].dim == dim).collect()
    }

    /// Facets of a cell: the cells one dimension lower whose vertex set is
    /// contained in it.
    pub fn facets_of(&self, cell: usize) -> Vec<usize> {
        let c = &self.cells[cell];
        if c.dim == 0 {
            return Vec::new();
        }
        (0..self.cells.len())
            .filter(|&i| {
                self.cells[i].dim + 1 == c.dim && is_subset(&self.cells[i].vertices, &c.vertices)
            })
            .collect()
    }

    /// Class id of the orbit containing `perm`.
    pub fn class_of(&self, perm: &Permutation) -> Option<usize> {
        let repr = orbit_repr(perm.images(), self.n_codegens);
        self.classes.binary_search_by(|c| c.repr.images.as_slice().cmp(&repr)).ok()
    }

    /// Edges of the 1-skeleton as sorted pairs of class ids.
    pub fn skeleton_edges(&self) -> Vec<(usize, usize)> {
        self.cells
            .iter()
            .filter(|c| c.dim == 1)
            .map(|c| (c.vertices[0], c.vertices[1]))
            .collect()
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|v| big.binary_search(v).is_ok())
}

/// Canonical orbit representative: sort letters ascending inside every
/// maximal run of positions holding letters `> n`.
fn orbit_repr(images: &[u8], n: u32) -> Vec<u8> {
    let mut out = images.to_vec();
    let len = out.len();
    let mut p = 0;
    while p < len {
        if out[p] as u32 > n {
            let mut q = p;
            while q < len && out[q] as u32 > n {
                q += 1;
            }
            out[p..q].sort_unstable();
            p = q;
        } else {
            p += 1;
        }
    }
    out
}

fn orbit_members(repr: &[u8], n: u32) -> Vec<Permutation> {
    // Expand each maximal face run independently.
    let len = repr.len();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut p = 0;
    while p < len {
        if repr[p] as u32 > n {
            let mut q = p;
            while q < len && repr[q] as u32 > n {
                q += 1;
            }
            runs.push((p, q));
            p = q;
        } else {
            p += 1;
        }
    }
    let mut members = vec![repr.to_vec()];
    for &(a, b) in &runs {
        let perms = permutations_of(&repr[a..b]);
        let mut next = Vec::with_capacity(members.len() * perms.len());
        for m in &members {
            for arrangement in &perms {
                let mut v = m.clone();
                v[a..b].copy_from_slice(arrangement);
                next.push(v);
            }
        }
        members = next;
    }
    members.sort_unstable();
    members.into_iter().map(|v| Permutation { images: v }).collect()
}

fn permutations_of(items: &[u8]) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current = items.to_vec();
    current.sort_unstable();
    loop {
        out.push(current.clone());
        if !next_permutation(&mut current) {
            break;
        }
    }
    out
}

pub(crate) fn next_permutation(v: &mut [u8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn for_each_ordered_partition(letters: &[u8], f: &mut impl FnMut(&[Vec<u8>])) {
    fn rec(remaining: &[u8], acc: &mut Vec<Vec<u8>>, f: &mut impl FnMut(&[Vec<u8>])) {
        if remaining.is_empty() {
            f(acc);
            return;
        }
        let k = remaining.len();
        // Nonempty subsets of `remaining` as bitmasks; blocks stay sorted
        // because `remaining` is sorted.
        for mask in 1u32..(1 << k) {
            let mut block = Vec::new();
            let mut rest = Vec::new();
            for (i, &letter) in remaining.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    block.push(letter);
                } else {
                    rest.push(letter);
                }
            }
            acc.push(block);
            rec(&rest, acc, f);
            acc.pop();
        }
    }
    rec(letters, &mut Vec::new(), f);
}

fn check_bounds(n_letters: u32, max_n: u32) -> Result<(), PolytopeError> {
    if n_letters == 0 {
        return Err(PolytopeError::InvalidInput("N must be at least 1".into()));
    }
    if n_letters > max_n {
        return Err(PolytopeError::SizeLimit { n: n_letters, max: max_n });
    }
    Ok(())
}

/// The `N`-permutohedron: vertices are the `N!` arrangements, faces are the
/// ordered set partitions of `{1..N}`, graded by `dim = sum(l_i - 1)`.
///
/// Built directly from the partition lattice, independently of the quotient
/// construction in [`fc_polytope`].
pub fn permutohedron(n_letters: u32) -> Result<CellComplex, PolytopeError> {
    permutohedron_with_limit(n_letters, DEFAULT_MAX_N)
}

pub fn permutohedron_with_limit(n_letters: u32, max_n: u32) -> Result<CellComplex, PolytopeError> {
    check_bounds(n_letters, max_n)?;
    let letters: Vec<u8> = (1..=n_letters as u8).collect();
    let all_vertices = permutations_of(&letters);
    let classes: Vec<VertexClass> = all_vertices
        .iter()
        .map(|v| VertexClass {
            repr: Permutation { images: v.clone() },
            members: vec![Permutation { images: v.clone() }],
        })
        .collect();
    let index: BTreeMap<Vec<u8>, usize> =
        all_vertices.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();

    let codegens = n_letters - 1; // the permutohedron is its own quotient at n = N-1
    let mut cells: Vec<Cell> = Vec::new();
    for_each_ordered_partition(&letters, &mut |blocks| {
        let dim: usize = blocks.iter().map(|b| b.len() - 1).sum();
        let mut vertices = Vec::new();
        collect_arrangements(blocks, &mut |arr| {
            vertices.push(index[arr]);
        });
        vertices.sort_unstable();
        let labels = blocks
            .iter()
            .map(|b| {
                let c = b.iter().filter(|&&v| v as u32 <= codegens).count() as u32;
                (b.len() as u32, c)
            })
            .collect();
        cells.push(Cell { dim, vertices, blocks: labels, letters: blocks.to_vec() });
    });
    finish_complex(n_letters, codegens, classes, cells)
}

fn collect_arrangements(blocks: &[Vec<u8>], f: &mut impl FnMut(&[u8])) {
    let per_block: Vec<Vec<Vec<u8>>> = blocks.iter().map(|b| permutations_of(b)).collect();
    fn rec(per_block: &[Vec<Vec<u8>>], i: usize, arr: &mut Vec<u8>, f: &mut impl FnMut(&[u8])) {
        if i == per_block.len() {
            f(arr);
            return;
        }
        for choice in &per_block[i] {
            let mark = arr.len();
            arr.extend_from_slice(choice);
            rec(per_block, i + 1, arr, f);
            arr.truncate(mark);
        }
    }
    let mut arr: Vec<u8> = Vec::with_capacity(blocks.iter().map(|b| b.len()).sum());
    rec(&per_block, 0, &mut arr, f);
}

fn finish_complex(
    n_letters: u32,
    n_codegens: u32,
    classes: Vec<VertexClass>,
    mut cells: Vec<Cell>,
) -> Result<CellComplex, PolytopeError> {
    cells.sort_by(|a, b| (a.dim, &a.vertices).cmp(&(b.dim, &b.vertices)));
    let max_dim = cells.iter().map(|c| c.dim).max().unwrap_or(0);
    let tops: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].dim == max_dim).collect();
    if tops.len() != 1 {
        return Err(PolytopeError::InvalidQuotient(format!(
            "expected a unique top cell, found {} of dimension {max_dim}",
            tops.len()
        )));
    }
    Ok(CellComplex { n_letters, n_codegens, classes, cells, top: tops[0] })
}

/// The face-codegeneracy polyhedron: the quotient of the `N`-permutohedron
/// identifying vertices that differ by an adjacent transposition of two
/// letters `> n`.
///
/// Cells are images of permutohedron cells: a cell is degenerate (and removed
/// from its grade) when some block of two or more letters contains no
/// codegeneracy letter, and cells with identical vertex-class images are
/// merged. Merged cells must agree on their decomposition labels, otherwise
/// [`PolytopeError::InvalidQuotient`] is raised.
pub fn fc_polytope(n_letters: u32, n_codegens: u32) -> Result<CellComplex, PolytopeError> {
    fc_polytope_with_limit(n_letters, n_codegens, DEFAULT_MAX_N)
}

pub fn fc_polytope_with_limit(
    n_letters: u32,
    n_codegens: u32,
    max_n: u32,
) -> Result<CellComplex, PolytopeError> {
    check_bounds(n_letters, max_n)?;
    if n_codegens >= n_letters {
        return Err(PolytopeError::InvalidInput(format!(
            "need 0 <= n < N, got n = {n_codegens}, N = {n_letters}"
        )));
    }
    let letters: Vec<u8> = (1..=n_letters as u8).collect();

    // Vertex classes: orbits keyed by canonical representative.
    let mut reprs: Vec<Vec<u8>> = Vec::new();
    {
        let mut current = letters.clone();
        loop {
            let repr = orbit_repr(&current, n_codegens);
            if repr == current {
                reprs.push(repr);
            }
            if !next_permutation(&mut current) {
                break;
            }
        }
    }
    reprs.sort_unstable();
    let class_index: BTreeMap<Vec<u8>, usize> =
        reprs.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();
    let classes: Vec<VertexClass> = reprs
        .iter()
        .map(|r| VertexClass {
            repr: Permutation { images: r.clone() },
            members: orbit_members(r, n_codegens),
        })
        .collect();

    // Quotient cells, grouped by vertex-class image.
    struct Draft {
        dim: usize,
        blocks: Vec<(u32, u32)>,
        letters: Vec<Vec<u8>>,
    }
    let mut groups: BTreeMap<Vec<usize>, Draft> = BTreeMap::new();
    let mut conflict: Option<String> = None;
    for_each_ordered_partition(&letters, &mut |blocks| {
        if conflict.is_some() {
            return;
        }
        let orig_dim: usize = blocks.iter().map(|b| b.len() - 1).sum();
        let image_dim: usize = blocks
            .iter()
            .map(|b| if b.iter().any(|&v| v as u32 <= n_codegens) { b.len() - 1 } else { 0 })
            .sum();
        if image_dim < orig_dim {
            return; // degenerate: removed from its original grade
        }
        let mut vertices = Vec::new();
        collect_arrangements(blocks, &mut |arr| {
            vertices.push(class_index[&orbit_repr(arr, n_codegens)]);
        });
        vertices.sort_unstable();
        vertices.dedup();
        let merged = merge_face_blocks(blocks, n_codegens);
        let labels: Vec<(u32, u32)> = merged
            .iter()
            .map(|b| {
                let c = b.iter().filter(|&&v| v as u32 <= n_codegens).count() as u32;
                (b.len() as u32, c)
            })
            .collect();
        match groups.get(&vertices) {
            None => {
                groups.insert(vertices, Draft { dim: image_dim, blocks: labels, letters: merged });
            }
            Some(existing) => {
                if existing.dim != image_dim
                    || existing.blocks != labels
                    || existing.letters != merged
                {
                    conflict = Some(format!(
                        "cells with image {vertices:?} disagree: {:?} vs {merged:?}",
                        existing.letters
                    ));
                }
            }
        }
    });
    if let Some(msg) = conflict {
        return Err(PolytopeError::InvalidQuotient(msg));
    }
    let cells: Vec<Cell> = groups
        .into_iter()
        .map(|(vertices, d)| Cell { dim: d.dim, vertices, blocks: d.blocks, letters: d.letters })
        .collect();
    finish_complex(n_letters, n_codegens, classes, cells)
}

/// Merges maximal runs of consecutive face-only blocks into single blocks;
/// the quotient cannot tell apart the orderings inside such a run.
fn merge_face_blocks(blocks: &[Vec<u8>], n_codegens: u32) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = Vec::with_capacity(blocks.len());
    let mut prev_face_only = false;
    for b in blocks {
        let face_only = b.iter().all(|&v| v as u32 > n_codegens);
        if face_only && prev_face_only {
            let last = out.last_mut().unwrap();
            last.extend_from_slice(b);
            last.sort_unstable();
        } else {
            out.push(b.clone());
        }
        prev_face_only = face_only;
    }
    out
}

/// A face of the quotient polyhedron described locally at a vertex: a
/// partition of the positions `1..=N` into consecutive blocks, admissible
/// when no cut falls between two positions both holding face letters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalCell {
    /// Consecutive block sizes, summing to `N`.
    pub block_sizes: Vec<u32>,
    /// Product decomposition `(l_i, c_i)` per block.
    pub blocks: Vec<(u32, u32)>,
    /// Letters per block, sorted.
    pub letters: Vec<Vec<u8>>,
}

impl LocalCell {
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|&(l, c)| if c >= 1 { (l - 1) as usize } else { 0 }).sum()
    }
}

/// All faces of the quotient polyhedron containing the vertex class of
/// `perm` and witnessed by `perm` itself, each described by its
/// consecutive-block partition at that vertex.
///
/// A cut is admissible only if at least one of the two blocks it separates
/// contains a codegeneracy letter; up to reordering letters inside blocks
/// (which does not move the vertex class), this is the condition that the
/// two letters flanking the cut are not both face letters. Inadmissible cuts
/// would split a face run that the quotient has merged, describing the same
/// cell twice. Faces through the class that `perm` does not witness appear
/// at the other members of its class instead.
pub fn facets_at_vertex(
    perm: &Permutation,
    n_codegens: u32,
) -> Result<Vec<LocalCell>, PolytopeError> {
    let n_letters = perm.len() as u32;
    if n_codegens >= n_letters {
        return Err(PolytopeError::InvalidInput(format!(
            "need 0 <= n < N, got n = {n_codegens}, N = {n_letters}"
        )));
    }
    let images = perm.images();
    let len = perm.len();
    let mut out = Vec::new();
    // Cut sets as bitmasks: bit p set means a cut between positions p+1 and p+2.
    'mask: for mask in 0u32..(1 << (len - 1)) {
        let mut letters: Vec<Vec<u8>> = Vec::new();
        let mut current = vec![images[0]];
        for p in 1..len {
            if mask & (1 << (p - 1)) != 0 {
                letters.push(std::mem::take(&mut current));
            }
            current.push(images[p]);
        }
        letters.push(current);
        for pair in letters.windows(2) {
            let face_only =
                |b: &Vec<u8>| b.iter().all(|&v| v as u32 > n_codegens);
            if face_only(&pair[0]) && face_only(&pair[1]) {
                continue 'mask;
            }
        }
        let block_sizes: Vec<u32> = letters.iter().map(|b| b.len() as u32).collect();
        let blocks: Vec<(u32, u32)> = letters
            .iter()
            .map(|b| {
                let c = b.iter().filter(|&&v| v as u32 <= n_codegens).count() as u32;
                (b.len() as u32, c)
            })
            .collect();
        let mut letters_sorted = letters;
        for b in &mut letters_sorted {
            b.sort_unstable();
        }
        out.push(LocalCell { block_sizes, blocks, letters: letters_sorted });
    }
    out.sort_by(|a, b| (a.dim(), &a.letters).cmp(&(b.dim(), &b.letters)));
    Ok(out)
}

/// Cell counts per dimension. With `include_top == false` the top cell is
/// excluded, giving the boundary f-vector.
pub fn f_vector(complex: &CellComplex, include_top: bool) -> Vec<usize> {
    let mut counts = vec![0usize; complex.dim() + 1];
    for (i, cell) in complex.cells.iter().enumerate() {
        if !include_top && i == complex.top {
            continue;
        }
        counts[cell.dim] += 1;
    }
    while counts.len() > 1 && *counts.last().unwrap() == 0 {
        counts.pop();
    }
    counts
}

/// Euler characteristic of the boundary complex. For `n >= 1` the boundary
/// is a combinatorial `(N-2)`-sphere, so the value must be `1 + (-1)^N`.
pub fn euler_boundary(complex: &CellComplex) -> Result<i64, PolytopeError> {
    if complex.n_codegens == 0 {
        return Err(PolytopeError::NotASphereCandidate);
    }
    let f = f_vector(complex, false);
    Ok(f.iter()
        .enumerate()
        .map(|(k, &count)| if k % 2 == 0 { count as i64 } else { -(count as i64) })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
    Off,
}

/// Serializes a complex in the requested format. JSON carries the full
/// poset, DOT the 1-skeleton with class representatives as node ids, and OFF
/// a geometric realization for 3-dimensional complexes.
pub fn export_complex(
    complex: &CellComplex,
    format: ExportFormat,
) -> Result<String, PolytopeError> {
    match format {
        ExportFormat::Json => Ok(complex_json(complex)),
        ExportFormat::Dot => Ok(complex_dot(complex)),
        ExportFormat::Off => complex_off(complex),
    }
}

#[derive(Serialize)]
struct ClassJson {
    repr: String,
    members: Vec<String>,
}

#[derive(Serialize)]
struct CellJson {
    dim: usize,
    vertices: Vec<usize>,
    blocks: Vec<(u32, u32)>,
}

#[derive(Serialize)]
struct ComplexJson {
    format_version: u32,
    #[serde(rename = "N")]
    n_letters: u32,
    n: u32,
    classes: Vec<ClassJson>,
    cells: Vec<CellJson>,
}

fn complex_json(complex: &CellComplex) -> String {
    let doc = ComplexJson {
        format_version: 1,
        n_letters: complex.n_letters,
        n: complex.n_codegens,
        classes: complex
            .classes
            .iter()
            .map(|c| ClassJson {
                repr: c.repr.to_string(),
                members: c.members.iter().map(|m| m.to_string()).collect(),
            })
            .collect(),
        cells: complex
            .cells
            .iter()
            .map(|c| CellJson {
                dim: c.dim,
                vertices: c.vertices.clone(),
                blocks: c.blocks.clone(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
    s.push('\n');
    s
}

fn complex_dot(complex: &CellComplex) -> String {
    let mut out = String::from("// format-version: 1\ngraph skeleton {\n");
    for class in &complex.classes {
        out.push_str(&format!("  \"{}\";\n", class.repr));
    }
    for (a, b) in complex.skeleton_edges() {
        out.push_str(&format!(
            "  \"{}\" -- \"{}\";\n",
            complex.classes[a].repr, complex.classes[b].repr
        ));
    }
    out.push_str("}\n");
    out
}

/// Barycentric coordinates of the vertex classes, projected from the
/// sum-hyperplane of `R^N` onto its first three orthonormal axes.
pub fn class_coordinates_3d(complex: &CellComplex) -> Vec<[f64; 3]> {
    let n = complex.n_letters as usize;
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for k in 1..n.min(4) {
        // (1,..,1,-k,0,..)/sqrt(k(k+1)) with k ones.
        let mut v = vec![0.0; n];
        let norm = (k as f64 * (k as f64 + 1.0)).sqrt();
        for item in v.iter_mut().take(k) {
            *item = 1.0 / norm;
        }
        v[k] = -(k as f64) / norm;
        basis.push(v);
    }
    complex
        .classes
        .iter()
        .map(|class| {
            let mut point = vec![0.0; n];
            for m in &class.members {
                for (p, &letter) in m.images().iter().enumerate() {
                    point[p] += letter as f64;
                }
            }
            for x in &mut point {
                *x /= class.members.len() as f64;
            }
            let mut proj = [0.0; 3];
            for (axis, b) in basis.iter().enumerate() {
                proj[axis] = point.iter().zip(b).map(|(x, y)| x * y).sum();
            }
            proj
        })
        .collect()
}

fn complex_off(complex: &CellComplex) -> Result<String, PolytopeError> {
    if complex.dim() != 3 {
        return Err(PolytopeError::UnsupportedDim { dim: complex.dim() });
    }
    let coords = class_coordinates_3d(complex);
    let faces2: Vec<usize> = complex.cells_of_dim(2);
    let edges: Vec<(usize, usize)> = complex.skeleton_edges();
    let mut out = String::from("OFF\n# format-version: 1\n");
    out.push_str(&format!("{} {} {}\n", coords.len(), faces2.len(), edges.len()));
    for c in &coords {
        out.push_str(&format!("{:.6} {:.6} {:.6}\n", c[0], c[1], c[2]));
    }
    for &f in &faces2 {
        let cycle = polygon_cycle(complex, f)?;
        out.push_str(&cycle.len().to_string());
        for v in cycle {
            out.push_str(&format!(" {v}"));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Orders the vertices of a 2-cell along its boundary cycle.
fn polygon_cycle(complex: &CellComplex, cell: usize) -> Result<Vec<usize>, PolytopeError> {
    let c = &complex.cells[cell];
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in complex.facets_of(cell) {
        let ev = &complex.cells[e].vertices;
        adj.entry(ev[0]).or_default().push(ev[1]);
        adj.entry(ev[1]).or_default().push(ev[0]);
    }
    let bad = || {
        PolytopeError::InvalidQuotient(format!("2-cell {cell} boundary is not a single cycle"))
    };
    if adj.len() != c.vertices.len() || adj.values().any(|n| n.len() != 2) {
        return Err(bad());
    }
    let start = c.vertices[0];
    let mut cycle = vec![start];
    let mut prev = start;
    let mut here = *adj[&start].iter().min().unwrap();
    while here != start {
        cycle.push(here);
        let next = adj[&here].iter().copied().find(|&v| v != prev).ok_or_else(bad)?;
        prev = here;
        here = next;
    }
    if cycle.len() != c.vertices.len() {
        return Err(bad());
    }
    Ok(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutohedron_small() {
        let p2 = permutohedron(2).unwrap();
        assert_eq!(f_vector(&p2, true), vec![2, 1]);

        let p3 = permutohedron(3).unwrap();
        assert_eq!(f_vector(&p3, false), vec![6, 6]);
        assert_eq!(f_vector(&p3, true), vec![6, 6, 1]);

        let p4 = permutohedron(4).unwrap();
        assert_eq!(f_vector(&p4, true), vec![24, 36, 14, 1]);
    }

    #[test]
    fn size_limit() {
        assert!(matches!(permutohedron(9), Err(PolytopeError::SizeLimit { n: 9, max: 8 })));
        assert!(permutohedron_with_limit(4, 3).is_err());
    }

    #[test]
    fn quotient_vertex_counts() {
        assert_eq!(fc_polytope(4, 2).unwrap().classes.len(), 18);
        assert_eq!(fc_polytope(4, 1).unwrap().classes.len(), 8);
        let point = fc_polytope(5, 0).unwrap();
        assert_eq!(point.classes.len(), 1);
        assert_eq!(point.cells.len(), 1);
        assert_eq!(point.dim(), 0);
    }

    #[test]
    fn quotient_class_sizes_sum_to_factorial() {
        for n_letters in 2..=5u32 {
            let factorial: usize = (1..=n_letters as usize).product();
            for n in 0..n_letters {
                let c = fc_polytope(n_letters, n).unwrap();
                let total: usize = c.classes.iter().map(|cl| cl.members.len()).sum();
                assert_eq!(total, factorial, "N={n_letters} n={n}");
            }
        }
    }

    #[test]
    fn cube_f_vector() {
        let c = fc_polytope(4, 1).unwrap();
        assert_eq!(f_vector(&c, false), vec![8, 12, 6]);
        assert_eq!(fc_polytope(2, 1).map(|c| f_vector(&c, true)).unwrap(), vec![2, 1]);
    }

    #[test]
    fn euler_examples() {
        assert_eq!(euler_boundary(&fc_polytope(4, 2).unwrap()).unwrap(), 2);
        assert_eq!(euler_boundary(&fc_polytope(3, 1).unwrap()).unwrap(), 0);
        assert_eq!(euler_boundary(&fc_polytope(2, 1).unwrap()).unwrap(), 2);
        assert!(matches!(
            euler_boundary(&fc_polytope(3, 0).unwrap()),
            Err(PolytopeError::NotASphereCandidate)
        ));
    }

    #[test]
    fn facets_at_vertex_examples() {
        // Identity vertex of the quotient at N=4, n=2: the two-block
        // partition <1,2 | 3,4> is admissible and is an edge.
        let id = Permutation::identity(4);
        let local = facets_at_vertex(&id, 2).unwrap();
        let edge = local
            .iter()
            .find(|f| f.block_sizes == vec![2, 2] && f.letters == vec![vec![1, 2], vec![3, 4]])
            .expect("segment x point cell present");
        assert_eq!(edge.blocks, vec![(2, 2), (2, 0)]);
        assert_eq!(edge.dim(), 1);

        // N=4, n=1: <1 | 2,3,4> is admitted because the first letter is a
        // codegeneracy, and it is vertex-grade.
        let local = facets_at_vertex(&id, 1).unwrap();
        let v = local.iter().find(|f| f.block_sizes == vec![1, 3]).expect("1|234 admitted");
        assert_eq!(v.dim(), 0);
        // The all-singleton partition is not admissible at the identity (two
        // adjacent face letters), but the one-block partition always is.
        assert!(!local.iter().any(|f| f.block_sizes == vec![1, 1, 1, 1]));
        assert!(local.iter().any(|f| f.block_sizes == vec![4]));
    }

    #[test]
    fn facets_at_vertex_agree_with_complex() {
        // Per permutation: every local cell is a complex cell above its
        // class, matching letters, labels, and dimension. Per class: the
        // local cells of the members together cover the whole subposet above
        // the class.
        for (n_letters, n) in [(3u32, 1u32), (4, 1), (4, 2), (5, 2)] {
            let complex = fc_polytope(n_letters, n).unwrap();
            for (id, class) in complex.classes.iter().enumerate() {
                let above: Vec<&Cell> = complex
                    .cells
                    .iter()
                    .filter(|c| c.vertices.binary_search(&id).is_ok())
                    .collect();
                let mut covered: Vec<&Vec<Vec<u8>>> = Vec::new();
                for member in &class.members {
                    let local = facets_at_vertex(member, n).unwrap();
                    for f in &local {
                        let cell = above
                            .iter()
                            .find(|c| c.letters == f.letters)
                            .unwrap_or_else(|| panic!("local cell {f:?} missing above {member}"));
                        assert_eq!(cell.dim, f.dim());
                        assert_eq!(cell.blocks, f.blocks);
                        covered.push(&cell.letters);
                    }
                }
                for c in &above {
                    assert!(
                        covered.contains(&&c.letters),
                        "cell {:?} above class {id} not witnessed by any member",
                        c.letters
                    );
                }
            }
        }
    }

    #[test]
    fn vertex_degree_rule() {
        // Each member permutation has one skeleton edge per non-degenerate
        // adjacent pair, i.e. N-1 minus the degenerate pairs; together the
        // members' swaps account for every edge at the class.
        for (n_letters, n) in [(3u32, 1u32), (4, 1), (4, 2), (5, 3)] {
            let complex = fc_polytope(n_letters, n).unwrap();
            let edges = complex.skeleton_edges();
            for (id, class) in complex.classes.iter().enumerate() {
                let mut seen: Vec<(usize, usize)> = Vec::new();
                for member in &class.members {
                    let images = member.images();
                    let mut swaps = 0;
                    for p in 0..images.len() - 1 {
                        if images[p] as u32 > n && images[p + 1] as u32 > n {
                            continue; // degenerate pair: edge collapsed
                        }
                        swaps += 1;
                        let mut v = images.to_vec();
                        v.swap(p, p + 1);
                        let other = complex.class_of(&Permutation::new(v).unwrap()).unwrap();
                        let key = (id.min(other), id.max(other));
                        assert!(edges.contains(&key), "swap at {p} of {member} is an edge");
                        seen.push(key);
                    }
                    let degenerate_pairs = (0..images.len() - 1)
                        .filter(|&p| images[p] as u32 > n && images[p + 1] as u32 > n)
                        .count();
                    assert_eq!(swaps, n_letters as usize - 1 - degenerate_pairs);
                }
                for e in edges.iter().filter(|&&(a, b)| a == id || b == id) {
                    assert!(seen.contains(e), "edge {e:?} reached by some member swap");
                }
            }
        }
    }

    #[test]
    fn quotient_at_max_codegens_is_permutohedron() {
        for n_letters in 2..=5u32 {
            let p = permutohedron(n_letters).unwrap();
            let q = fc_polytope(n_letters, n_letters - 1).unwrap();
            assert_eq!(p.classes.len(), q.classes.len());
            let sig = |c: &CellComplex| -> Vec<(usize, Vec<String>)> {
                let mut v: Vec<(usize, Vec<String>)> = c
                    .cells
                    .iter()
                    .map(|cell| {
                        (
                            cell.dim,
                            cell.vertices.iter().map(|&i| c.classes[i].repr.to_string()).collect(),
                        )
                    })
                    .collect();
                v.sort();
                v
            };
            assert_eq!(sig(&p), sig(&q));
        }
    }

    #[test]
    fn cells_are_unions_of_their_facets() {
        for (n_letters, n) in [(3u32, 1u32), (4, 1), (4, 2), (4, 3)] {
            let complex = fc_polytope(n_letters, n).unwrap();
            for (i, cell) in complex.cells.iter().enumerate() {
                if cell.dim == 0 {
                    continue;
                }
                let facets = complex.facets_of(i);
                assert!(!facets.is_empty(), "cell {i} of dim {} has facets", cell.dim);
                let mut union: Vec<usize> =
                    facets.iter().flat_map(|&f| complex.cells[f].vertices.clone()).collect();
                union.sort_unstable();
                union.dedup();
                assert_eq!(union, cell.vertices);
            }
        }
    }

    #[test]
    fn decomposition_labels_reexpand() {
        // Every cell label re-expands to the right vertex count: the product
        // of the factors' class counts.
        for (n_letters, n) in [(4u32, 1u32), (4, 2), (5, 2)] {
            let complex = fc_polytope(n_letters, n).unwrap();
            for cell in &complex.cells {
                let expected: usize = cell
                    .blocks
                    .iter()
                    .map(|&(l, c)| {
                        if c >= l {
                            permutohedron(l).unwrap().classes.len()
                        } else {
                            fc_polytope(l, c).unwrap().classes.len()
                        }
                    })
                    .product();
                assert_eq!(cell.vertices.len(), expected, "cell {:?}", cell.letters);
            }
        }
    }

    #[test]
    fn export_examples() {
        let dot = export_complex(&fc_polytope(4, 1).unwrap(), ExportFormat::Dot).unwrap();
        let nodes = dot
            .lines()
            .filter(|l| l.trim_end().ends_with("\";") && !l.contains("--"))
            .count();
        let edges = dot.lines().filter(|l| l.contains("--")).count();
        assert_eq!(nodes, 8);
        assert_eq!(edges, 12);

        let json = export_complex(&fc_polytope(4, 2).unwrap(), ExportFormat::Json).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["classes"].as_array().unwrap().len(), 18);

        assert!(matches!(
            export_complex(&permutohedron(2).unwrap(), ExportFormat::Off),
            Err(PolytopeError::UnsupportedDim { dim: 1 })
        ));
        let off = export_complex(&fc_polytope(4, 1).unwrap(), ExportFormat::Off).unwrap();
        assert!(off.starts_with("OFF\n"));
        assert!(off.contains("8 6 12"));
    }
}
