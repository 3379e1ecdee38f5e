//! Formal graded Whitehead brackets over operator-decorated generators.
//!
//! Expressions are integer combinations of binary bracket trees whose leaves
//! are generators decorated by operator prefixes (cofaces, codegeneracies,
//! simplicial letters); decorations never change the degree. A bracket of
//! degrees `p` and `q` has degree `p + q - 1`, and every expression is kept
//! homogeneous.
//!
//! The normal form uses the rational sign conventions: graded antisymmetry
//! `[a,b] = (-1)^{pq} [b,a]` orients every bracket node along a fixed total
//! order on trees, and a square `[a,a]` in odd degree is torsion and is
//! dropped. The graded Jacobi identity is available as a verifiable relation
//! ([`is_jacobi_instance`]), not as a rewrite rule.

use crate::cw::{cross_term_level, CrossTermSpec, GradedSetSpec};
use crate::factorization::{label_polytope, FactorizationError, TargetMap};
use crate::word::{Bidegree, CanonicalForm, Letter, OpWord};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BracketError {
    #[error("operand is not homogeneous")]
    InhomogeneousOperand,
    #[error("image of {name} has degree {got}, expected {expected}")]
    DegreeMismatch { name: String, expected: u32, got: u32 },
    #[error("no image for generator {0}")]
    MissingImage(String),
    #[error(transparent)]
    Factorization(#[from] FactorizationError),
}

/// A generator of homotopy degree `degree`, living in cosimplicial factor
/// `copy`, decorated by an operator prefix applied to it. Decorations
/// preserve the degree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub copy: u32,
    pub ops: Vec<Letter>,
}

impl Generator {
    pub fn plain(name: impl Into<String>, degree: u32) -> Self {
        Generator { name: name.into(), degree, copy: 0, ops: Vec::new() }
    }

    pub fn in_copy(name: impl Into<String>, degree: u32, copy: u32) -> Self {
        Generator { name: name.into(), degree, copy, ops: Vec::new() }
    }

    pub fn decorated(name: impl Into<String>, degree: u32, ops: Vec<Letter>) -> Self {
        Generator { name: name.into(), degree, copy: 0, ops }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in &self.ops {
            write!(f, "{letter} ")?;
        }
        write!(f, "{}", self.name)?;
        if self.copy != 0 {
            write!(f, "({})", self.copy)?;
        }
        Ok(())
    }
}

/// A binary bracket tree over generators; `Comp` is an opaque unary
/// composition decoration carrying only its declared degree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum BracketTree {
    Leaf(Generator),
    Bracket(Box<BracketTree>, Box<BracketTree>),
    Comp { label: String, degree: u32, arg: Box<BracketTree> },
}

impl BracketTree {
    pub fn leaf(gen: Generator) -> Self {
        BracketTree::Leaf(gen)
    }

    pub fn bracket(left: BracketTree, right: BracketTree) -> Self {
        BracketTree::Bracket(Box::new(left), Box::new(right))
    }

    /// Degree: a bracket node adds degrees and subtracts one.
    pub fn degree(&self) -> u32 {
        match self {
            BracketTree::Leaf(g) => g.degree,
            BracketTree::Bracket(l, r) => l.degree() + r.degree() - 1,
            BracketTree::Comp { degree, .. } => *degree,
        }
    }
}

impl fmt::Display for BracketTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketTree::Leaf(g) => write!(f, "{g}"),
            BracketTree::Bracket(l, r) => write!(f, "[{l}, {r}]"),
            BracketTree::Comp { label, arg, .. } => write!(f, "{label}#({arg})"),
        }
    }
}

/// An integer combination of bracket trees; all terms of one expression
/// share a degree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BracketExpr {
    pub terms: Vec<(i64, BracketTree)>,
}

impl BracketExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_tree(tree: BracketTree) -> Self {
        BracketExpr { terms: vec![(1, tree)] }
    }

    pub fn generator(gen: Generator) -> Self {
        Self::from_tree(BracketTree::Leaf(gen))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common degree of the terms, or an error when mixed; `None` for zero.
    pub fn degree(&self) -> Result<Option<u32>, BracketError> {
        let mut degree = None;
        for (_, tree) in &self.terms {
            let d = tree.degree();
            match degree {
                None => degree = Some(d),
                Some(e) if e != d => return Err(BracketError::InhomogeneousOperand),
                _ => {}
            }
        }
        Ok(degree)
    }

    pub fn negated(&self) -> BracketExpr {
        BracketExpr { terms: self.terms.iter().map(|(c, t)| (-c, t.clone())).collect() }
    }

    pub fn plus(&self, other: &BracketExpr) -> BracketExpr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        BracketExpr { terms }
    }

    pub fn scaled(&self, k: i64) -> BracketExpr {
        BracketExpr { terms: self.terms.iter().map(|(c, t)| (c * k, t.clone())).collect() }
    }
}

impl fmt::Display for BracketExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, t)) in self.terms.iter().enumerate() {
            if i == 0 {
                match *c {
                    1 => write!(f, "{t}")?,
                    -1 => write!(f, "-{t}")?,
                    c => write!(f, "{c} {t}")?,
                }
            } else if *c < 0 {
                if *c == -1 {
                    write!(f, " - {t}")?;
                } else {
                    write!(f, " - {} {t}", -c)?;
                }
            } else if *c == 1 {
                write!(f, " + {t}")?;
            } else {
                write!(f, " + {c} {t}")?;
            }
        }
        Ok(())
    }
}

/// Bilinear bracket of two homogeneous expressions; the result is
/// homogeneous of degree `|a| + |b| - 1` and is returned normalized.
pub fn bracket(a: &BracketExpr, b: &BracketExpr) -> Result<BracketExpr, BracketError> {
    a.degree()?;
    b.degree()?;
    let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
    for (ca, ta) in &a.terms {
        for (cb, tb) in &b.terms {
            terms.push((ca * cb, BracketTree::bracket(ta.clone(), tb.clone())));
        }
    }
    normalize_expr(&BracketExpr { terms })
}

/// Rewrites every bracket node to the canonical operand order using graded
/// antisymmetry, drops odd-degree squares, merges like terms, and sorts.
/// Idempotent.
pub fn normalize_expr(e: &BracketExpr) -> Result<BracketExpr, BracketError> {
    e.degree()?;
    let mut collected: BTreeMap<BracketTree, i64> = BTreeMap::new();
    for (coeff, tree) in &e.terms {
        let (sign, normal) = normalize_tree(tree);
        if sign == 0 {
            continue;
        }
        *collected.entry(normal).or_insert(0) += coeff * sign;
    }
    let terms: Vec<(i64, BracketTree)> = collected
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(t, c)| (c, t))
        .collect();
    Ok(BracketExpr { terms })
}

fn normalize_tree(tree: &BracketTree) -> (i64, BracketTree) {
    match tree {
        BracketTree::Leaf(_) => (1, tree.clone()),
        BracketTree::Comp { label, degree, arg } => {
            let (sign, arg) = normalize_tree(arg);
            (sign, BracketTree::Comp { label: label.clone(), degree: *degree, arg: Box::new(arg) })
        }
        BracketTree::Bracket(l, r) => {
            let (sl, l) = normalize_tree(l);
            let (sr, r) = normalize_tree(r);
            let mut sign = sl * sr;
            if sign == 0 {
                return (0, tree.clone());
            }
            let (p, q) = (l.degree(), r.degree());
            if l == r {
                // [a,a] = (-1)^{p^2} [a,a]: torsion in odd degree, dropped
                // in the rational normal form.
                if p % 2 == 1 {
                    return (0, tree.clone());
                }
                return (sign, BracketTree::Bracket(Box::new(l), Box::new(r)));
            }
            if l > r {
                if (p * q) % 2 == 1 {
                    sign = -sign;
                }
                (sign, BracketTree::Bracket(Box::new(r), Box::new(l)))
            } else {
                (sign, BracketTree::Bracket(Box::new(l), Box::new(r)))
            }
        }
    }
}

/// Applies a morphism given on generators, extending over brackets and
/// coefficients. Every leaf must have an image of its own degree; an image
/// may be zero, killing the terms through bilinearity.
pub fn apply_morphism(
    e: &BracketExpr,
    images: &BTreeMap<Generator, BracketExpr>,
) -> Result<BracketExpr, BracketError> {
    e.degree()?;
    let mut out = BracketExpr::zero();
    for (coeff, tree) in &e.terms {
        let image = apply_tree(tree, images)?;
        out = out.plus(&image.scaled(*coeff));
    }
    normalize_expr(&out)
}

fn apply_tree(
    tree: &BracketTree,
    images: &BTreeMap<Generator, BracketExpr>,
) -> Result<BracketExpr, BracketError> {
    match tree {
        BracketTree::Leaf(g) => {
            let image = images
                .get(g)
                .ok_or_else(|| BracketError::MissingImage(g.to_string()))?;
            if let Some(got) = image.degree()? {
                if got != g.degree {
                    return Err(BracketError::DegreeMismatch {
                        name: g.to_string(),
                        expected: g.degree,
                        got,
                    });
                }
            }
            Ok(image.clone())
        }
        BracketTree::Bracket(l, r) => {
            let li = apply_tree(l, images)?;
            let ri = apply_tree(r, images)?;
            // Expand bilinearly without re-orienting: normalization happens
            // once at the top.
            let mut terms = Vec::new();
            for (cl, tl) in &li.terms {
                for (cr, tr) in &ri.terms {
                    terms.push((cl * cr, BracketTree::bracket(tl.clone(), tr.clone())));
                }
            }
            Ok(BracketExpr { terms })
        }
        BracketTree::Comp { label, degree, arg } => {
            let inner = apply_tree(arg, images)?;
            Ok(BracketExpr {
                terms: inner
                    .terms
                    .into_iter()
                    .map(|(c, t)| {
                        (c, BracketTree::Comp {
                            label: label.clone(),
                            degree: *degree,
                            arg: Box::new(t),
                        })
                    })
                    .collect(),
            })
        }
    }
}

/// The identity morphism on the leaves of an expression.
pub fn identity_images(e: &BracketExpr) -> BTreeMap<Generator, BracketExpr> {
    let mut images = BTreeMap::new();
    collect_leaves(e, &mut |g| {
        images.entry(g.clone()).or_insert_with(|| BracketExpr::generator(g.clone()));
    });
    images
}

fn collect_leaves(e: &BracketExpr, f: &mut impl FnMut(&Generator)) {
    fn rec(t: &BracketTree, f: &mut impl FnMut(&Generator)) {
        match t {
            BracketTree::Leaf(g) => f(g),
            BracketTree::Bracket(l, r) => {
                rec(l, f);
                rec(r, f);
            }
            BracketTree::Comp { arg, .. } => rec(arg, f),
        }
    }
    for (_, t) in &e.terms {
        rec(t, f);
    }
}

/// The graded Jacobi combination
/// `(-1)^{pr} [[a,b],c] + (-1)^{qp} [[b,c],a] + (-1)^{rq} [[c,a],b]`,
/// which the bracket conventions make vanish rationally.
pub fn jacobi_expression(a: &BracketTree, b: &BracketTree, c: &BracketTree) -> BracketExpr {
    let (p, q, r) = (a.degree() as i64, b.degree() as i64, c.degree() as i64);
    let sign = |x: i64| if x % 2 == 1 { -1 } else { 1 };
    let term = |x: &BracketTree, y: &BracketTree, z: &BracketTree| {
        BracketTree::bracket(BracketTree::bracket(x.clone(), y.clone()), z.clone())
    };
    BracketExpr {
        terms: vec![
            (sign(p * r), term(a, b, c)),
            (sign(q * p), term(b, c, a)),
            (sign(r * q), term(c, a, b)),
        ],
    }
}

/// Checks whether an expression is an integer multiple of a graded Jacobi
/// combination of three subtrees drawn from its own terms.
pub fn is_jacobi_instance(e: &BracketExpr) -> Result<bool, BracketError> {
    let normal = normalize_expr(e)?;
    if normal.is_zero() {
        return Ok(true);
    }
    // Candidate (a,b,c) triples from terms of shape [[a,b],c].
    let mut candidates = Vec::new();
    for (_, t) in &e.terms {
        if let BracketTree::Bracket(l, r) = t {
            if let BracketTree::Bracket(a, b) = l.as_ref() {
                candidates.push((a.as_ref().clone(), b.as_ref().clone(), r.as_ref().clone()));
            }
            if let BracketTree::Bracket(b, c) = r.as_ref() {
                candidates.push((b.as_ref().clone(), c.as_ref().clone(), l.as_ref().clone()));
            }
        }
    }
    for (a, b, c) in candidates {
        let jac = normalize_expr(&jacobi_expression(&a, &b, &c))?;
        if jac.is_zero() {
            continue;
        }
        let scale_e = normal.terms[0].0;
        let scale_j = jac.terms[0].0;
        if normalize_expr(&normal.scaled(scale_j))? == normalize_expr(&jac.scaled(scale_e))? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One cross-term generator per pair of basis generators in the two factors,
/// of degree `p + q - 1`, with attaching expression the bracket of the two
/// inclusions.
pub fn cross_term_c21(
    basis0: &GradedSetSpec,
    basis1: &GradedSetSpec,
) -> Vec<(Generator, BracketExpr)> {
    let mut out = Vec::new();
    for (p, x) in basis0.iter() {
        for (q, y) in basis1.iter() {
            let degree = p + q - 1;
            let gen = Generator::plain(format!("S{degree}_({x},{y})"), degree);
            let attach = BracketExpr {
                terms: vec![(
                    1,
                    BracketTree::bracket(
                        BracketTree::leaf(Generator::in_copy(x, p, 0)),
                        BracketTree::leaf(Generator::in_copy(y, q, 1)),
                    ),
                )],
            };
            out.push((gen, attach));
        }
    }
    out
}

/// Bookkeeping report for the classifying computation on the 7-sphere: the
/// cross-term basis in dimensions below 24, the two attaching expressions,
/// the derived level inventories, and the three candidate third-order
/// operation targets with their labeled polyhedra sizes.
#[derive(Debug, Clone)]
pub struct S7Report {
    /// Cross-term basis: one degree-13 generator at (1,1), one degree-19
    /// generator at (2,2), nothing else below dimension 24.
    pub cross_terms: CrossTermSpec,
    /// Degree-13 cross-term generator with attaching bracket.
    pub c11: (Generator, BracketExpr),
    /// Degree-19 cross-term generator with its three-term alternating
    /// attaching expression.
    pub c22: (Generator, BracketExpr),
    /// Level inventory `E^2_1`: two degree-13 generators.
    pub e21: GradedSetSpec,
    /// The three candidate composites with class count and doubled-class
    /// count of their labeled polyhedra.
    pub candidates: Vec<(TargetMap, usize, usize)>,
}

impl S7Report {
    /// Sign pattern of the degree-19 attaching expression in term order.
    pub fn c22_signs(&self) -> Vec<i64> {
        self.c22.1.terms.iter().map(|(c, _)| c.signum()).collect()
    }
}

/// Builds the 7-sphere bookkeeping: `[i7, i7]` in degree 13 attaching the
/// first cross-term, the alternating three-term boundary of the degree-19
/// cross-term, vanishing cross-terms elsewhere below dimension 24, and the
/// three candidate composites `d_0 d_1 s^0 s^1`, `d_0 d_2 s^0 s^1`,
/// `d_1 d_2 s^0 s^1` with their labeled polyhedra.
pub fn s7_example() -> Result<S7Report, BracketError> {
    // Degree check 13 = 7 + 7 - 1 through the bracket itself.
    let d0_i7 = Generator::decorated("i7", 7, vec![Letter::coface(0)]);
    let d1_i7 = Generator::decorated("i7", 7, vec![Letter::coface(1)]);
    let c11_attach = bracket(
        &BracketExpr::generator(d0_i7.clone()),
        &BracketExpr::generator(d1_i7.clone()),
    )?;
    debug_assert_eq!(c11_attach.degree()?, Some(13));
    let c11_gen = Generator::plain("i13", 13);

    // The three-term boundary of the degree-19 generator.
    let leaf = |name: &str, degree: u32, ops: Vec<Letter>| {
        BracketTree::leaf(Generator::decorated(name, degree, ops))
    };
    let term = |i13_ops: Vec<Letter>, i7_ops: Vec<Letter>| {
        BracketTree::bracket(leaf("i13", 13, i13_ops), leaf("i7", 7, i7_ops))
    };
    let c22_attach = BracketExpr {
        terms: vec![
            (
                1,
                term(
                    vec![Letter::coface(0)],
                    vec![Letter::degen(0), Letter::coface(2), Letter::coface(1)],
                ),
            ),
            (
                -1,
                term(
                    vec![Letter::coface(1)],
                    vec![Letter::degen(0), Letter::coface(2), Letter::coface(0)],
                ),
            ),
            (
                1,
                term(
                    vec![Letter::coface(2)],
                    vec![Letter::degen(0), Letter::coface(1), Letter::coface(0)],
                ),
            ),
        ],
    };
    let c22_degree = c22_attach.degree()?;
    debug_assert_eq!(c22_degree, Some(19));
    let c22_gen = Generator::plain("i19", 19);

    // Cross-term inventory in dimensions < 24.
    let mut cross_terms = CrossTermSpec::new();
    let mut c11_set = GradedSetSpec::new();
    c11_set.add(13, c11_gen.name.clone());
    let mut c22_set = GradedSetSpec::new();
    c22_set.add(19, c22_gen.name.clone());
    cross_terms
        .insert(1, 1, c11_set)
        .and_then(|()| cross_terms.insert(2, 2, c22_set))
        .expect("nonzero bidegrees");
    let e21 = cross_term_level(2, 1, &cross_terms);

    // Candidate third-order composites and their labeled polyhedra.
    let source = Bidegree::new(2, 2);
    let mut candidates = Vec::new();
    for faces in [vec![0, 1], vec![0, 2], vec![1, 2]] {
        let psi =
            TargetMap::new(CanonicalForm { source, faces, codegens: vec![0, 1] })?;
        let labeled = label_polytope(&psi)?;
        let doubled = labeled.labels.iter().filter(|c| c.members.len() == 2).count();
        candidates.push((psi, labeled.labels.len(), doubled));
    }

    Ok(S7Report {
        cross_terms,
        c11: (c11_gen, c11_attach),
        c22: (c22_gen, c22_attach),
        e21,
        candidates,
    })
}

/// JSON tree for an expression: `[{"c": coeff, "t": tree}, ..]` with
/// `tree = {"g": name, "deg": k, "copy": i, "ops": word}` at the leaves,
/// `["br", tree, tree]` at bracket nodes, and
/// `["cp", label, degree, tree]` at composition nodes.
pub fn expr_to_json(e: &BracketExpr) -> Value {
    fn tree(t: &BracketTree) -> Value {
        match t {
            BracketTree::Leaf(g) => {
                let ops = OpWord::new(Bidegree::new(0, 0), g.ops.clone());
                json!({"g": g.name, "deg": g.degree, "copy": g.copy, "ops": ops.to_string()})
            }
            BracketTree::Bracket(l, r) => json!(["br", tree(l), tree(r)]),
            BracketTree::Comp { label, degree, arg } => json!(["cp", label, degree, tree(arg)]),
        }
    }
    Value::Array(e.terms.iter().map(|(c, t)| json!({"c": c, "t": tree(t)})).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(name: &str, degree: u32) -> BracketExpr {
        BracketExpr::generator(Generator::plain(name, degree))
    }

    #[test]
    fn bracket_degrees() {
        let b = bracket(&gen("a", 7), &gen("b", 7)).unwrap();
        assert_eq!(b.degree().unwrap(), Some(13));
        let b = bracket(&gen("a", 13), &gen("b", 7)).unwrap();
        assert_eq!(b.degree().unwrap(), Some(19));
        let z = bracket(&BracketExpr::zero(), &gen("a", 5)).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn bracket_rejects_inhomogeneous() {
        let mixed = gen("a", 3).plus(&gen("b", 4));
        assert_eq!(bracket(&mixed, &gen("c", 2)), Err(BracketError::InhomogeneousOperand));
    }

    #[test]
    fn antisymmetry_normal_form() {
        let (a, b) = (gen("a", 3), gen("b", 4));
        let ab = bracket(&a, &b).unwrap();
        let ba = bracket(&b, &a).unwrap();
        // [a,b] = (-1)^{3*4} [b,a] = [b,a] after normalization.
        assert_eq!(ab, ba);
        // [a,b] + (-1)^{pq+1} [b,a] = 0.
        let combo = ab.plus(&ba.negated());
        assert!(normalize_expr(&combo).unwrap().is_zero());

        let (c, d) = (gen("c", 3), gen("d", 5));
        let cd = bracket(&c, &d).unwrap();
        let dc = bracket(&d, &c).unwrap();
        // Odd-odd degrees: [c,d] = -[d,c].
        assert_eq!(cd, dc.negated());
        assert!(normalize_expr(&cd.plus(&dc)).unwrap().is_zero());
    }

    #[test]
    fn coefficient_merge_and_idempotence() {
        let ab = bracket(&gen("a", 3), &gen("b", 4)).unwrap();
        let twice = ab.scaled(2).plus(&ab.negated());
        let merged = normalize_expr(&twice).unwrap();
        assert_eq!(merged, ab);
        assert_eq!(normalize_expr(&merged).unwrap(), merged);
    }

    #[test]
    fn odd_squares_vanish_rationally() {
        let aa = bracket(&gen("a", 7), &gen("a", 7)).unwrap();
        assert!(aa.is_zero());
        let even = bracket(&gen("b", 4), &gen("b", 4)).unwrap();
        assert!(!even.is_zero());
    }

    #[test]
    fn morphism_identity_and_zero() {
        let e = bracket(&gen("a", 3), &gen("b", 4)).unwrap();
        let ids = identity_images(&e);
        assert_eq!(apply_morphism(&e, &ids).unwrap(), e);

        let mut images = ids.clone();
        images.insert(Generator::plain("a", 3), BracketExpr::zero());
        assert!(apply_morphism(&e, &images).unwrap().is_zero());

        let mut bad = ids;
        bad.insert(Generator::plain("a", 3), gen("c", 5));
        assert!(matches!(
            apply_morphism(&e, &bad),
            Err(BracketError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn morphism_commutes_with_bracket() {
        let (a, b) = (gen("a", 3), gen("b", 4));
        let e = bracket(&a, &b).unwrap();
        let mut images = identity_images(&e);
        images.insert(Generator::plain("a", 3), gen("x", 3).plus(&gen("y", 3).scaled(2)));
        images.insert(Generator::plain("b", 4), gen("z", 4));
        let lhs = apply_morphism(&e, &images).unwrap();
        let rhs = bracket(
            &apply_morphism(&a, &images).unwrap(),
            &apply_morphism(&b, &images).unwrap(),
        )
        .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_checker() {
        let a = BracketTree::leaf(Generator::plain("a", 3));
        let b = BracketTree::leaf(Generator::plain("b", 4));
        let c = BracketTree::leaf(Generator::plain("c", 5));
        let jac = jacobi_expression(&a, &b, &c);
        assert!(is_jacobi_instance(&jac).unwrap());
        assert!(is_jacobi_instance(&jac.scaled(-3)).unwrap());
        // A plain two-term expression is not a Jacobi instance.
        let e = bracket(&gen("a", 3), &gen("b", 4)).unwrap();
        let not_jac = e.plus(&bracket(&gen("a", 3), &gen("c", 4)).unwrap());
        assert!(!is_jacobi_instance(&bracket(&not_jac, &gen("d", 2)).unwrap()).unwrap());
    }

    #[test]
    fn cross_term_pairs() {
        let mut b0 = GradedSetSpec::new();
        b0.add(7, "x");
        let mut b1 = GradedSetSpec::new();
        b1.add(7, "y");
        let out = cross_term_c21(&b0, &b1);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0.degree, 13);
        assert_eq!(out[0].1.to_string(), "[x, y(1)]");

        assert!(cross_term_c21(&GradedSetSpec::new(), &b1).is_empty());

        let mut b0 = GradedSetSpec::new();
        b0.add(3, "u");
        b0.add(5, "v");
        let mut b1 = GradedSetSpec::new();
        b1.add(3, "w");
        let degrees: Vec<u32> = cross_term_c21(&b0, &b1).iter().map(|(g, _)| g.degree).collect();
        assert_eq!(degrees, vec![5, 7]);
    }

    #[test]
    fn cross_term_count_is_product() {
        let mut b0 = GradedSetSpec::new();
        b0.add(3, "p");
        b0.add(3, "q");
        b0.add(6, "r");
        let mut b1 = GradedSetSpec::new();
        b1.add(2, "s");
        b1.add(9, "t");
        assert_eq!(cross_term_c21(&b0, &b1).len(), b0.total() * b1.total());
    }

    #[test]
    fn s7_report() {
        let report = s7_example().unwrap();
        assert_eq!(report.c11.0.degree, 13);
        assert_eq!(report.c11.1.degree().unwrap(), Some(13));
        assert_eq!(report.c22.0.degree, 19);
        assert_eq!(report.c22.1.degree().unwrap(), Some(19));
        assert_eq!(report.c22_signs(), vec![1, -1, 1]);
        assert_eq!(report.e21.count(13), 2);
        assert_eq!(report.candidates.len(), 3);
        for (_, classes, doubled) in &report.candidates {
            assert_eq!((*classes, *doubled), (18, 6));
        }
        // Below dimension 24 only the two listed cross-terms are nonzero.
        for n in 1..=4u32 {
            for r in 1..=4u32 {
                let inventory = report.cross_terms.at(n, r);
                if (n, r) == (1, 1) || (n, r) == (2, 2) {
                    assert_eq!(inventory.total(), 1);
                } else {
                    assert!(inventory.is_empty());
                }
            }
        }
    }

    #[test]
    fn s7_c22_homogeneous_under_codegeneracy_pushforward() {
        // The codegeneracy rule sends the cross-term leaves to zero; the
        // image of the attaching expression collapses accordingly.
        let report = s7_example().unwrap();
        let mut images = identity_images(&report.c22.1);
        for (g, img) in images.iter_mut() {
            if g.name == "i13" {
                *img = BracketExpr::zero();
            }
        }
        let pushed = apply_morphism(&report.c22.1, &images).unwrap();
        assert!(pushed.is_zero());
    }

    #[test]
    fn expr_json_shape() {
        let e = bracket(&gen("a", 3), &gen("b", 4)).unwrap();
        let v = expr_to_json(&e);
        assert_eq!(v[0]["c"], 1);
        assert_eq!(v[0]["t"][0], "br");
        assert_eq!(v[0]["t"][1]["g"], "a");
        assert_eq!(v[0]["t"][1]["deg"], 3);
    }
}

#[cfg(test)]
mod proptest_homogeneity {
    use super::*;
    use proptest::prelude::*;

    fn arb_tree(depth: u32) -> BoxedStrategy<BracketTree> {
        if depth == 0 {
            (0..4u32, 1..8u32)
                .prop_map(|(i, d)| BracketTree::leaf(Generator::plain(format!("g{i}"), d)))
                .boxed()
        } else {
            prop_oneof![
                2 => (0..4u32, 1..8u32)
                    .prop_map(|(i, d)| BracketTree::leaf(Generator::plain(format!("g{i}"), d))),
                1 => (arb_tree(depth - 1), arb_tree(depth - 1))
                    .prop_map(|(l, r)| BracketTree::bracket(l, r)),
            ]
            .boxed()
        }
    }

    proptest! {
        #[test]
        fn normalize_preserves_degree(tree in arb_tree(2), coeff in -3i64..=3) {
            let e = BracketExpr { terms: vec![(coeff, tree)] };
            let d = e.degree().unwrap();
            let n = normalize_expr(&e).unwrap();
            if !n.is_zero() {
                prop_assert_eq!(n.degree().unwrap(), d);
            }
            prop_assert_eq!(normalize_expr(&n).unwrap(), n);
        }

        #[test]
        fn bracket_degree_rule(l in arb_tree(1), r in arb_tree(1)) {
            let a = BracketExpr::from_tree(l.clone());
            let b = BracketExpr::from_tree(r.clone());
            let br = bracket(&a, &b).unwrap();
            if !br.is_zero() {
                prop_assert_eq!(
                    br.degree().unwrap(),
                    Some(l.degree() + r.degree() - 1)
                );
            }
            // Sign consistency: [a,b] and (-1)^{pq}[b,a] normalize identically.
            let ba = bracket(&b, &a).unwrap();
            let sign = if (l.degree() * r.degree()) % 2 == 1 { -1 } else { 1 };
            prop_assert_eq!(br, ba.scaled(sign));
        }
    }
}
