//! Berkovich trees for Puiseux-parametrized Newton families.
//!
//! A family is given by d pairwise-distinct truncated Puiseux roots. The
//! type II point `xi_{c,q}` is the closed ball of center c and radius
//! `|t|^q`; the convex hull of the roots and infinity is a finite tree
//! whose branch vertices are exactly the pairwise merge points
//! `xi_{r_i, v(r_i - r_j)}`. Subalgebraic reduction at `xi_{c,q}` sends a
//! root r to the coefficient of `t^q` in `r - c` when `v(r - c) >= q` and
//! to infinity otherwise; classifying the reductions over the hull
//! produces the semistable locus (a unique stable vertex, or a connected
//! strictly semistable region), the marked tree of spheres, the induced
//! stable curve, and the composite map kappa onto GIT classes.
//!
//! Every valuation and residue used here is certified against the
//! truncation orders of the inputs; a family that is too coarsely
//! truncated to decide something fails with an explicit error.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::moduli::{git_class, GitClassDescriptor};
use crate::newton::{NewtonMap, RootDivisor};
use crate::projective::{MoebiusMap, P1Point};
use crate::puiseux::{Exponent, PuiseuxSeries, Valuation};
use crate::stability::{classify_newton, StabilityVerdict, VerdictKind};

/// The type II point `xi_{center, q}`: the closed ball of radius `|t|^q`.
#[derive(Clone, Debug)]
pub struct TypeIIPoint {
    center: PuiseuxSeries,
    exponent: Exponent,
}

impl TypeIIPoint {
    pub fn new(center: PuiseuxSeries, exponent: Exponent) -> Self {
        TypeIIPoint { center, exponent }
    }

    /// The Gauss point `xi_{0, 0}`.
    pub fn gauss() -> Self {
        TypeIIPoint {
            center: PuiseuxSeries::zero(),
            exponent: Exponent::from_integer(0),
        }
    }

    pub fn center(&self) -> &PuiseuxSeries {
        &self.center
    }

    pub fn exponent(&self) -> Exponent {
        self.exponent
    }

    /// Equality of balls: same radius and centers within it.
    pub fn same_point(&self, other: &TypeIIPoint) -> Result<bool> {
        if self.exponent != other.exponent {
            return Ok(false);
        }
        self.center
            .sub(&other.center)
            .valuation_at_least(self.exponent)
    }

    /// Label `xi(center, q)` used in reports and DOT output.
    pub fn label(&self) -> String {
        format!(
            "xi({}, {})",
            series_terms_string(&self.center),
            self.exponent
        )
    }
}

impl fmt::Display for TypeIIPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

fn series_terms_string(s: &PuiseuxSeries) -> String {
    let mut out = String::new();
    for (k, (e, c)) in s.terms().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        let e_zero = e.numer() == &0;
        if e_zero {
            out.push_str(&c.to_string());
            continue;
        }
        if !c.is_one() {
            out.push_str(&format!("({c})*"));
        }
        if *e == Exponent::from_integer(1) {
            out.push('t');
        } else {
            out.push_str(&format!("t^({e})"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// The convex hull of a family's roots and infinity, as a vertex tree.
///
/// Vertices are branch points; edges carry the length `|q - q'|`; each
/// root records the vertex it attaches to (the smallest ball of the hull
/// containing it). The top vertex is the largest ball, where the infinity
/// end attaches.
pub struct BerkTree {
    vertices: Vec<TypeIIPoint>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    attach: Vec<usize>,
    top: usize,
    degree: u32,
}

impl BerkTree {
    pub fn vertices(&self) -> &[TypeIIPoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &TypeIIPoint {
        &self.vertices[i]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn parent_of(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children_of(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Vertex each root attaches to, indexed like the input roots.
    pub fn attachment(&self, root: usize) -> usize {
        self.attach[root]
    }

    /// Edges as `(child, parent, length)`.
    pub fn edges(&self) -> Vec<(usize, usize, Exponent)> {
        let mut out = Vec::new();
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                let len = self.vertices[v].exponent - self.vertices[*p].exponent;
                out.push((v, *p, len));
            }
        }
        out
    }

    /// Find a vertex equal (as a ball) to the given point.
    pub fn find_vertex(&self, p: &TypeIIPoint) -> Result<Option<usize>> {
        for (i, v) in self.vertices.iter().enumerate() {
            if v.same_point(p)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Root indices attached at or below `v`.
    pub fn subtree_roots(&self, v: usize) -> Vec<usize> {
        let mut verts = vec![v];
        let mut i = 0;
        while i < verts.len() {
            verts.extend(self.children[verts[i]].iter().copied());
            i += 1;
        }
        self.attach
            .iter()
            .enumerate()
            .filter(|(_, a)| verts.contains(a))
            .map(|(r, _)| r)
            .collect()
    }

    /// DOT rendering of the vertex tree.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph berkovich_hull {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("  v{i} [label=\"{}\"];\n", v.label()));
        }
        for (child, parent, len) in self.edges() {
            out.push_str(&format!("  v{child} -- v{parent} [label=\"{len}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

fn certified_merge_exponent(
    a: &PuiseuxSeries,
    b: &PuiseuxSeries,
    i: usize,
    j: usize,
) -> Result<Exponent> {
    match a.sub(b).valuation() {
        Ok(Valuation::Finite(e)) => Ok(e),
        Ok(Valuation::PlusInfinity) => Err(Error::IndistinguishableRoots(i, j)),
        Err(_) => Err(Error::IndistinguishableRoots(i, j)),
    }
}

/// Compute the hull of `{r_1, ..., r_d, infinity}` as a branch-vertex tree.
pub fn hull_vertices(roots: &[PuiseuxSeries]) -> Result<BerkTree> {
    let d = roots.len();
    if d < 2 {
        return Err(Error::InvalidDivisor(format!(
            "a family needs degree >= 2, got {d} roots"
        )));
    }
    // merge points of all pairs
    let mut vertices: Vec<TypeIIPoint> = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            let q = certified_merge_exponent(&roots[i], &roots[j], i, j)?;
            let cand = TypeIIPoint::new(roots[i].clone(), q);
            let mut dup = false;
            for v in &vertices {
                if v.same_point(&cand)? {
                    dup = true;
                    break;
                }
            }
            if !dup {
                vertices.push(cand);
            }
        }
    }

    // ball containment: u inside v
    let inside = |u: &TypeIIPoint, v: &TypeIIPoint| -> Result<bool> {
        if u.exponent < v.exponent {
            return Ok(false);
        }
        u.center.sub(&v.center).valuation_at_least(v.exponent)
    };

    let nv = vertices.len();
    let mut parent: Vec<Option<usize>> = vec![None; nv];
    for u in 0..nv {
        let mut best: Option<usize> = None;
        for v in 0..nv {
            if u == v || vertices[u].exponent == vertices[v].exponent {
                continue;
            }
            if inside(&vertices[u], &vertices[v])? {
                best = match best {
                    None => Some(v),
                    Some(b) if vertices[v].exponent > vertices[b].exponent => Some(v),
                    Some(b) => Some(b),
                };
            }
        }
        parent[u] = best;
    }
    let tops: Vec<usize> = (0..nv).filter(|&v| parent[v].is_none()).collect();
    if tops.len() != 1 {
        return Err(Error::Internal(format!(
            "hull has {} maximal balls, expected 1",
            tops.len()
        )));
    }
    let top = tops[0];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(v);
        }
    }

    // attach each root to the deepest ball containing it
    let mut attach = Vec::with_capacity(d);
    for r in roots {
        let mut best: Option<usize> = None;
        for v in 0..nv {
            let contains = r
                .sub(&vertices[v].center)
                .valuation_at_least(vertices[v].exponent)?;
            if contains {
                best = match best {
                    None => Some(v),
                    Some(b) if vertices[v].exponent > vertices[b].exponent => Some(v),
                    Some(b) => Some(b),
                };
            }
        }
        match best {
            Some(v) => attach.push(v),
            None => return Err(Error::Internal("root outside every hull ball".into())),
        }
    }

    let tree = BerkTree {
        vertices,
        parent,
        children,
        attach,
        top,
        degree: d as u32,
    };
    // every vertex of the hull is a genuine branch point
    for v in 0..nv {
        let mut dirs = tree.children[v].len() + 1; // +1 for parent or infinity
        dirs += tree.attach.iter().filter(|&&a| a == v).count();
        if dirs < 3 {
            return Err(Error::Internal(format!(
                "vertex {} is not a branch point",
                tree.vertices[v].label()
            )));
        }
    }
    Ok(tree)
}

/// Subalgebraic reduction of the family at a type II point: the degree-d
/// divisor of root reductions (constant term of `(r - c)/t^q`, or
/// infinity for roots outside the ball).
pub fn reduction_at(roots: &[PuiseuxSeries], xi: &TypeIIPoint) -> Result<RootDivisor> {
    let mut entries: Vec<(P1Point, u32)> = Vec::new();
    for r in roots {
        let delta = r.sub(xi.center());
        let in_ball = delta.valuation_at_least(xi.exponent()).map_err(|_| {
            Error::UncertifiedReduction(format!("cannot place root {r} relative to {}", xi.label()))
        })?;
        let p = if in_ball {
            P1Point::Finite(delta.coefficient_at(xi.exponent())?)
        } else {
            P1Point::Infinity
        };
        entries.push((p, 1));
    }
    RootDivisor::new(entries)
}

/// The semistable-reduction locus of a family over its hull.
#[derive(Clone, Debug)]
pub enum SemistableLocus {
    /// A single vertex with stable reduction; nothing else on the hull is
    /// even semistable.
    UniqueStableVertex(usize),
    /// The connected region of strictly semistable reduction: vertices and
    /// closed edges `(child, parent)` of the hull.
    SemistableRegion {
        vertices: Vec<usize>,
        edges: Vec<(usize, usize)>,
    },
}

/// Hull, per-vertex verdicts and the semistable locus of a family.
pub struct LocusReport {
    pub tree: BerkTree,
    pub vertex_divisors: Vec<RootDivisor>,
    pub vertex_verdicts: Vec<StabilityVerdict>,
    pub locus: SemistableLocus,
}

/// Classify the reduction over every vertex and edge of the hull and
/// assemble the semistable locus, validating existence, exclusivity and
/// connectedness along the way.
pub fn semistable_locus(roots: &[PuiseuxSeries]) -> Result<LocusReport> {
    let tree = hull_vertices(roots)?;
    let d = tree.degree();
    let mut vertex_divisors = Vec::with_capacity(tree.vertices().len());
    let mut vertex_verdicts = Vec::with_capacity(tree.vertices().len());
    for v in tree.vertices() {
        let divisor = reduction_at(roots, v)?;
        let verdict = classify_newton(&NewtonMap::from_divisor(divisor.clone())?);
        vertex_divisors.push(divisor);
        vertex_verdicts.push(verdict);
    }

    // edge interiors: every point of an open edge reduces to the two-point
    // divisor {0 : k, inf : d - k} with k the mass on the bounded side
    let mut edge_semistable: Vec<(usize, usize)> = Vec::new();
    for (child, parent, _) in tree.edges() {
        let k = tree.subtree_roots(child).len() as u32;
        let mut entries = vec![(P1Point::finite(crate::scalar::ExactScalar::zero()), k)];
        if d > k {
            entries.push((P1Point::Infinity, d - k));
        }
        let divisor = RootDivisor::new(entries)?;
        let verdict = classify_newton(&NewtonMap::from_divisor(divisor)?);
        match verdict.kind {
            VerdictKind::StrictlySemistable => edge_semistable.push((child, parent)),
            VerdictKind::Stable => {
                return Err(Error::Internal(
                    "an edge interior classified stable; the two-hole rule forbids this".into(),
                ))
            }
            VerdictKind::Unstable => {}
        }
    }

    let stable: Vec<usize> = vertex_verdicts
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind == VerdictKind::Stable)
        .map(|(i, _)| i)
        .collect();
    let semi: Vec<usize> = vertex_verdicts
        .iter()
        .enumerate()
        .filter(|(_, v)| v.kind == VerdictKind::StrictlySemistable)
        .map(|(i, _)| i)
        .collect();

    let locus = if let Some(&unique) = stable.first() {
        if stable.len() > 1 || !semi.is_empty() || !edge_semistable.is_empty() {
            return Err(Error::Internal(
                "a stable vertex must exclude all other semistable points".into(),
            ));
        }
        SemistableLocus::UniqueStableVertex(unique)
    } else {
        if semi.is_empty() {
            return Err(Error::Internal(
                "no semistable reduction on the hull".into(),
            ));
        }
        // closed-edge endpoints must themselves be semistable
        for (c, p) in &edge_semistable {
            if !semi.contains(c) || !semi.contains(p) {
                return Err(Error::Internal(
                    "semistable edge with non-semistable endpoint".into(),
                ));
            }
        }
        // connectedness of the region
        let mut reach: BTreeSet<usize> = BTreeSet::new();
        let mut queue = vec![semi[0]];
        while let Some(v) = queue.pop() {
            if !reach.insert(v) {
                continue;
            }
            for (c, p) in &edge_semistable {
                if *c == v && !reach.contains(p) {
                    queue.push(*p);
                }
                if *p == v && !reach.contains(c) {
                    queue.push(*c);
                }
            }
        }
        if reach.len() != semi.len() {
            return Err(Error::Internal("semistable region is disconnected".into()));
        }
        SemistableLocus::SemistableRegion {
            vertices: semi,
            edges: edge_semistable,
        }
    };

    Ok(LocusReport {
        tree,
        vertex_divisors,
        vertex_verdicts,
        locus,
    })
}

/// Labels of marked ends.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum MarkLabel {
    Root(usize),
    Inf,
}

impl fmt::Display for MarkLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MarkLabel::Root(i) => write!(f, "r{}", i + 1),
            MarkLabel::Inf => write!(f, "inf"),
        }
    }
}

/// The marked projective line attached to one hull vertex.
#[derive(Clone, Debug)]
pub struct Sphere {
    pub vertex: usize,
    /// Marked ends attaching directly at this vertex, with their positions.
    pub marks: Vec<(MarkLabel, P1Point)>,
    /// Nodes toward neighboring vertices, with their positions.
    pub nodes: Vec<(usize, P1Point)>,
}

impl Sphere {
    pub fn special_points(&self) -> usize {
        self.marks.len() + self.nodes.len()
    }
}

/// The marked tree of spheres of a family.
pub struct MarkedTreeOfSpheres {
    pub tree: BerkTree,
    pub spheres: Vec<Sphere>,
}

impl MarkedTreeOfSpheres {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tree_of_spheres {\n");
        for s in &self.spheres {
            let marks: Vec<String> = s.marks.iter().map(|(l, p)| format!("{l}@{p}")).collect();
            out.push_str(&format!(
                "  v{} [label=\"{}\\n{}\"];\n",
                s.vertex,
                self.tree.vertex(s.vertex).label(),
                marks.join(", ")
            ));
        }
        for (child, parent, len) in self.tree.edges() {
            out.push_str(&format!("  v{child} -- v{parent} [label=\"{len}\"];\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Build the marked tree of spheres: per vertex, the positions of the
/// marked ends and nodes in the tangent directions.
pub fn marked_tree(roots: &[PuiseuxSeries]) -> Result<MarkedTreeOfSpheres> {
    let tree = hull_vertices(roots)?;
    let mut spheres = Vec::with_capacity(tree.vertices().len());
    for v in 0..tree.vertices().len() {
        let xi = tree.vertex(v).clone();
        let mut marks: Vec<(MarkLabel, P1Point)> = Vec::new();
        let mut nodes: Vec<(usize, P1Point)> = Vec::new();
        for (r, attach_at) in tree.attach.iter().enumerate() {
            if *attach_at == v {
                let delta = roots[r].sub(xi.center());
                let pos = P1Point::Finite(delta.coefficient_at(xi.exponent())?);
                marks.push((MarkLabel::Root(r), pos));
            }
        }
        for &child in tree.children_of(v) {
            let delta = tree.vertex(child).center().sub(xi.center());
            let pos = P1Point::Finite(delta.coefficient_at(xi.exponent())?);
            nodes.push((child, pos));
        }
        if let Some(p) = tree.parent_of(v) {
            nodes.push((p, P1Point::Infinity));
        } else {
            marks.push((MarkLabel::Inf, P1Point::Infinity));
        }
        // distinct tangent directions give distinct points
        let mut seen: Vec<&P1Point> = Vec::new();
        for p in marks
            .iter()
            .map(|(_, p)| p)
            .chain(nodes.iter().map(|(_, p)| p))
        {
            if seen.contains(&p) {
                return Err(Error::Internal(format!(
                    "coincident special points on the sphere at {}",
                    xi.label()
                )));
            }
            seen.push(p);
        }
        spheres.push(Sphere {
            vertex: v,
            marks,
            nodes,
        });
    }
    Ok(MarkedTreeOfSpheres { tree, spheres })
}

/// A stable genus-zero curve: the components of the tree of spheres glued
/// along nodes, with edge lengths forgotten.
pub struct StableCurve {
    pub components: Vec<Sphere>,
    /// Gluing data: `(child vertex, parent vertex)` per node.
    pub gluing: Vec<(usize, usize)>,
    pub mark_count: usize,
    pub node_count: usize,
}

/// Forget edge lengths and glue the spheres at their nodes.
pub fn stable_curve(t: &MarkedTreeOfSpheres) -> Result<StableCurve> {
    for s in &t.spheres {
        if s.special_points() < 3 {
            return Err(Error::Internal(format!(
                "component at {} has fewer than 3 special points",
                t.tree.vertex(s.vertex).label()
            )));
        }
    }
    let gluing: Vec<(usize, usize)> = t.tree.edges().into_iter().map(|(c, p, _)| (c, p)).collect();
    let mark_count = t.spheres.iter().map(|s| s.marks.len()).sum();
    Ok(StableCurve {
        components: t.spheres.clone(),
        gluing,
        mark_count,
        node_count: t.tree.edges().len(),
    })
}

type Block = BTreeSet<MarkLabel>;
type ComponentSignature = (BTreeSet<Block>, Vec<(Block, P1Point)>);

/// For each component, the partition of all labels by tangent direction
/// together with the position of each block.
fn component_signatures(t: &MarkedTreeOfSpheres) -> Vec<ComponentSignature> {
    let d = t.tree.degree() as usize;
    let all_roots: BTreeSet<MarkLabel> = (0..d).map(MarkLabel::Root).collect();
    let mut out = Vec::with_capacity(t.spheres.len());
    for s in &t.spheres {
        let mut blocks: Vec<(Block, P1Point)> = Vec::new();
        for (label, pos) in &s.marks {
            let mut b = Block::new();
            b.insert(*label);
            blocks.push((b, pos.clone()));
        }
        for (neighbor, pos) in &s.nodes {
            let block: Block = if Some(*neighbor) == t.tree.parent_of(s.vertex) {
                // parent direction: everything not at or below this vertex
                let below: BTreeSet<MarkLabel> = t
                    .tree
                    .subtree_roots(s.vertex)
                    .into_iter()
                    .map(MarkLabel::Root)
                    .collect();
                let mut b: Block = all_roots.difference(&below).copied().collect();
                b.insert(MarkLabel::Inf);
                b
            } else {
                t.tree
                    .subtree_roots(*neighbor)
                    .into_iter()
                    .map(MarkLabel::Root)
                    .collect()
            };
            blocks.push((block, pos.clone()));
        }
        blocks.sort_by(|(a, _), (b, _)| a.cmp(b));
        let partition: BTreeSet<Block> = blocks.iter().map(|(b, _)| b.clone()).collect();
        out.push((partition, blocks));
    }
    out
}

/// Equivalence of marked trees of spheres: the induced noded curves agree,
/// i.e. components match by their label partitions and each matched pair
/// of spheres carries the same cross-ratio data (compared exactly after
/// sending the first three special points to 0, 1, infinity).
pub fn tree_equivalent(t1: &MarkedTreeOfSpheres, t2: &MarkedTreeOfSpheres) -> Result<bool> {
    if t1.tree.degree() != t2.tree.degree() {
        return Ok(false);
    }
    let sig1 = component_signatures(t1);
    let sig2 = component_signatures(t2);
    if sig1.len() != sig2.len() {
        return Ok(false);
    }
    let map1: BTreeMap<_, _> = sig1.into_iter().collect();
    let map2: BTreeMap<_, _> = sig2.into_iter().collect();
    if map1.keys().collect::<Vec<_>>() != map2.keys().collect::<Vec<_>>() {
        return Ok(false);
    }
    for (partition, blocks1) in &map1 {
        let blocks2 = &map2[partition];
        debug_assert_eq!(blocks1.len(), blocks2.len());
        if blocks1.len() > 3 {
            let m1 = MoebiusMap::to_standard_triple(&blocks1[0].1, &blocks1[1].1, &blocks1[2].1)?;
            let m2 = MoebiusMap::to_standard_triple(&blocks2[0].1, &blocks2[1].1, &blocks2[2].1)?;
            for ((b1, p1), (b2, p2)) in blocks1.iter().zip(blocks2.iter()) {
                debug_assert_eq!(b1, b2);
                if m1.apply(p1) != m2.apply(p2) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The composite map onto the GIT compactification: the class of the
/// reduction at any semistable point of the hull, checked for consistency
/// across all of them.
pub fn kappa(roots: &[PuiseuxSeries]) -> Result<GitClassDescriptor> {
    let report = semistable_locus(roots)?;
    let vertices: Vec<usize> = match &report.locus {
        SemistableLocus::UniqueStableVertex(v) => vec![*v],
        SemistableLocus::SemistableRegion { vertices, .. } => vertices.clone(),
    };
    let mut class: Option<GitClassDescriptor> = None;
    for v in vertices {
        let n = NewtonMap::from_divisor(report.vertex_divisors[v].clone())?;
        let c = git_class(&n)?;
        match &class {
            None => class = Some(c),
            Some(existing) if *existing != c => {
                return Err(Error::Internal(
                    "kappa is not constant over the semistable locus".into(),
                ))
            }
            Some(_) => {}
        }
    }
    class.ok_or_else(|| Error::Internal("empty semistable locus".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_series;

    fn roots(list: &[&str]) -> Vec<PuiseuxSeries> {
        list.iter()
            .map(|s| parse_series(s, None).unwrap())
            .collect()
    }

    fn xi(center: &str, q_num: i64, q_den: i64) -> TypeIIPoint {
        TypeIIPoint::new(
            parse_series(center, None).unwrap(),
            Exponent::new(q_num, q_den),
        )
    }

    #[test]
    fn cubic_family_hull() {
        let r = roots(&["0", "1", "t"]);
        let tree = hull_vertices(&r).unwrap();
        assert_eq!(tree.vertices().len(), 2);
        assert!(tree.find_vertex(&TypeIIPoint::gauss()).unwrap().is_some());
        assert!(tree.find_vertex(&xi("0", 1, 1)).unwrap().is_some());
    }

    #[test]
    fn quartic_family_hull() {
        let r = roots(&["0", "1", "t^(-1)", "2*t^(-1)"]);
        let tree = hull_vertices(&r).unwrap();
        assert_eq!(tree.vertices().len(), 2);
        assert!(tree.find_vertex(&TypeIIPoint::gauss()).unwrap().is_some());
        assert!(tree.find_vertex(&xi("0", -1, 1)).unwrap().is_some());
    }

    #[test]
    fn quintic_family_hull() {
        let r = roots(&["t", "2*t", "1+t", "1+2*t", "t^(-1)"]);
        let tree = hull_vertices(&r).unwrap();
        assert_eq!(tree.vertices().len(), 4);
        for point in [
            TypeIIPoint::gauss(),
            xi("0", 1, 1),
            xi("1", 1, 1),
            xi("0", -1, 1),
        ] {
            assert!(
                tree.find_vertex(&point).unwrap().is_some(),
                "missing {}",
                point.label()
            );
        }
    }

    #[test]
    fn indistinguishable_roots_detected() {
        let r = roots(&["t", "t"]);
        assert!(matches!(
            hull_vertices(&r),
            Err(Error::IndistinguishableRoots(0, 1))
        ));
    }

    #[test]
    fn quartic_reduction_at_top() {
        let r = roots(&["0", "1", "t^(-1)", "2*t^(-1)"]);
        let div = reduction_at(&r, &xi("0", -1, 1)).unwrap();
        assert_eq!(div.to_string(), "{0:2, 1:1, 2:1}");
    }

    #[test]
    fn sextic_reduction_at_top() {
        let r = roots(&["0", "1", "5", "t^(-1)", "2*t^(-1)", "3*t^(-1)"]);
        let div = reduction_at(&r, &xi("0", -1, 1)).unwrap();
        assert_eq!(div.to_string(), "{0:3, 1:1, 2:1, 3:1}");
    }

    #[test]
    fn constant_roots_reduce_to_themselves() {
        let r = roots(&["0", "1", "3"]);
        let div = reduction_at(&r, &TypeIIPoint::gauss()).unwrap();
        assert_eq!(div.to_string(), "{0:1, 1:1, 3:1}");
    }

    #[test]
    fn reduction_beyond_truncation_fails() {
        // t - t is zero only up to the truncation order, so a ball deeper
        // than it cannot certify membership
        let r = roots(&["0", "1", "t"]);
        let err = reduction_at(&r, &xi("t", 99, 1)).unwrap_err();
        assert_eq!(err.code(), "uncertified-reduction");
    }

    #[test]
    fn cubic_locus_is_full_segment() {
        let r = roots(&["0", "1", "t"]);
        let report = semistable_locus(&r).unwrap();
        match &report.locus {
            SemistableLocus::SemistableRegion { vertices, edges } => {
                assert_eq!(vertices.len(), 2);
                assert_eq!(edges.len(), 1);
            }
            other => panic!("expected a region, got {other:?}"),
        }
        for v in &report.vertex_verdicts {
            assert_eq!(v.kind, VerdictKind::StrictlySemistable);
        }
    }

    #[test]
    fn quartic_locus_is_unique_stable_vertex() {
        let r = roots(&["0", "1", "t^(-1)", "2*t^(-1)"]);
        let report = semistable_locus(&r).unwrap();
        match &report.locus {
            SemistableLocus::UniqueStableVertex(v) => {
                let expected = xi("0", -1, 1);
                assert!(report.tree.vertex(*v).same_point(&expected).unwrap());
            }
            other => panic!("expected unique stable vertex, got {other:?}"),
        }
    }

    #[test]
    fn quintic_locus_follows_the_depth_criterion() {
        // reduction at the Gauss point is {0:2, 1:2, inf:1}, whose depths
        // are all 1 <= (5-3)/2, i.e. stable by the hole-depth criterion
        let r = roots(&["t", "2*t", "1+t", "1+2*t", "t^(-1)"]);
        let report = semistable_locus(&r).unwrap();
        match &report.locus {
            SemistableLocus::UniqueStableVertex(v) => {
                assert!(report
                    .tree
                    .vertex(*v)
                    .same_point(&TypeIIPoint::gauss())
                    .unwrap());
                assert_eq!(report.vertex_verdicts[*v].kind, VerdictKind::Stable);
            }
            other => panic!("expected unique stable vertex, got {other:?}"),
        }
    }

    #[test]
    fn cubic_tree_of_spheres() {
        let r = roots(&["0", "1", "t"]);
        let t = marked_tree(&r).unwrap();
        assert_eq!(t.spheres.len(), 2);
        let curve = stable_curve(&t).unwrap();
        assert_eq!(curve.components.len(), 2);
        assert_eq!(curve.mark_count, 4);
        assert_eq!(curve.node_count, 1);
        // the sphere at xi(0,1) marks the colliding roots at 0 and 1
        let idx = t.tree.find_vertex(&xi("0", 1, 1)).unwrap().unwrap();
        let sphere = t.spheres.iter().find(|s| s.vertex == idx).unwrap();
        let mut positions: Vec<String> = sphere.marks.iter().map(|(_, p)| p.to_string()).collect();
        positions.sort();
        assert_eq!(positions, vec!["0", "1"]);
    }

    #[test]
    fn trivial_tree_single_sphere() {
        let r = roots(&["0", "1", "5"]);
        let t = marked_tree(&r).unwrap();
        assert_eq!(t.spheres.len(), 1);
        assert_eq!(t.spheres[0].marks.len(), 4); // three roots and infinity
        assert!(t.spheres[0].nodes.is_empty());
    }

    #[test]
    fn equivalent_trees_with_same_shape() {
        // {0, 3t^2, 3t^2 + t^3} and {0, 3, 3+t} produce the same noded curve
        let t1 = marked_tree(&roots(&["0", "3*t^2", "3*t^2 + t^3"])).unwrap();
        let t2 = marked_tree(&roots(&["0", "3", "3 + t"])).unwrap();
        assert!(tree_equivalent(&t1, &t2).unwrap());
    }

    #[test]
    fn inequivalent_when_cross_ratios_differ() {
        let t1 = marked_tree(&roots(&["0", "1", "2", "4"])).unwrap();
        let t2 = marked_tree(&roots(&["0", "1", "2", "5"])).unwrap();
        assert!(!tree_equivalent(&t1, &t2).unwrap());
        // affine images are equivalent
        let t3 = marked_tree(&roots(&["1", "3", "5", "9"])).unwrap();
        assert!(tree_equivalent(&t1, &t3).unwrap());
    }

    #[test]
    fn relabeling_breaks_equivalence_unless_cross_ratios_agree() {
        // swapping the last two marks of {0,1,2,4} changes the labeled
        // moduli point
        let t1 = marked_tree(&roots(&["0", "1", "2", "4"])).unwrap();
        let t2 = marked_tree(&roots(&["0", "1", "4", "2"])).unwrap();
        assert!(!tree_equivalent(&t1, &t2).unwrap());
        // but {0,1,c} in any labeling with matching cross-ratio data agrees
        let s1 = marked_tree(&roots(&["0", "1", "t"])).unwrap();
        let s2 = marked_tree(&roots(&["5", "6", "5 + 2*t"])).unwrap();
        assert!(tree_equivalent(&s1, &s2).unwrap());
    }

    #[test]
    fn kappa_of_cubic_family_is_the_boundary_class() {
        let r = roots(&["0", "1", "t"]);
        assert_eq!(
            kappa(&r).unwrap(),
            GitClassDescriptor::StrictlySemistable { degree: 3 }
        );
    }

    #[test]
    fn kappa_collapses_sextic_parameters() {
        let base = kappa(&roots(&["0", "1", "2", "t^(-1)", "2*t^(-1)", "3*t^(-1)"])).unwrap();
        for c in ["5", "1/3"] {
            let r = roots(&["0", "1", c, "t^(-1)", "2*t^(-1)", "3*t^(-1)"]);
            assert_eq!(kappa(&r).unwrap(), base);
        }
        // and it equals the class of the direct divisor {0:3,1:1,2:1,3:1}
        let direct = NewtonMap::from_divisor(
            RootDivisor::new(vec![
                (P1Point::from_int(0), 3),
                (P1Point::from_int(1), 1),
                (P1Point::from_int(2), 1),
                (P1Point::from_int(3), 1),
            ])
            .unwrap(),
        )
        .unwrap();
        assert_eq!(base, git_class(&direct).unwrap());
    }

    #[test]
    fn edge_interiors_match_direct_midpoint_reduction() {
        // the two-hole rule used by semistable_locus against a direct
        // reduction at an interior point of each edge
        let families = [
            vec!["0", "1", "t"],
            vec!["0", "1", "t^(-1)", "2*t^(-1)"],
            vec!["t", "2*t", "1+t", "1+2*t", "t^(-1)"],
            vec!["0", "1", "5", "t^(-1)", "2*t^(-1)", "3*t^(-1)"],
            vec!["0", "t", "2*t", "1", "1+t^2"],
        ];
        for list in families {
            let r = roots(&list);
            let report = semistable_locus(&r).unwrap();
            for (child, parent, _) in report.tree.edges() {
                let qc = report.tree.vertex(child).exponent();
                let qp = report.tree.vertex(parent).exponent();
                let mid = (qc + qp) / 2;
                let xi_mid = TypeIIPoint::new(report.tree.vertex(child).center().clone(), mid);
                let direct = reduction_at(&r, &xi_mid).unwrap();
                let direct_verdict =
                    classify_newton(&NewtonMap::from_divisor(direct).unwrap()).kind;
                let k = report.tree.subtree_roots(child).len() as u32;
                let d = report.tree.degree();
                let mut entries = vec![(P1Point::finite(crate::scalar::ExactScalar::zero()), k)];
                if d > k {
                    entries.push((P1Point::Infinity, d - k));
                }
                let collapsed = RootDivisor::new(entries).unwrap();
                let collapsed_verdict =
                    classify_newton(&NewtonMap::from_divisor(collapsed).unwrap()).kind;
                assert_eq!(direct_verdict, collapsed_verdict, "family {list:?}");
            }
        }
    }

    #[test]
    fn relabeling_with_matching_cross_ratios_is_equivalent() {
        // z -> 3 - z realizes the label reversal of {0, 1, 2, 3}
        let t1 = marked_tree(&roots(&["0", "1", "2", "3"])).unwrap();
        let t2 = marked_tree(&roots(&["3", "2", "1", "0"])).unwrap();
        assert!(tree_equivalent(&t1, &t2).unwrap());
    }

    #[test]
    fn kappa_agrees_on_equivalent_trees() {
        let pairs = [
            (vec!["0", "1", "t"], vec!["5", "6", "5 + 2*t"]),
            (vec!["0", "1", "2", "4"], vec!["1", "3", "5", "9"]),
        ];
        for (a, b) in pairs {
            let (ra, rb) = (roots(&a), roots(&b));
            let ta = marked_tree(&ra).unwrap();
            let tb = marked_tree(&rb).unwrap();
            assert!(tree_equivalent(&ta, &tb).unwrap());
            assert_eq!(kappa(&ra).unwrap(), kappa(&rb).unwrap());
        }
    }

    #[test]
    fn kappa_of_trivial_family() {
        let r = roots(&["0", "1", "3"]);
        let k = kappa(&r).unwrap();
        match k {
            GitClassDescriptor::Stable { degree, .. } => assert_eq!(degree, 3),
            other => panic!("expected stable class, got {other}"),
        }
    }

    #[test]
    fn dot_output_mentions_labels() {
        let r = roots(&["0", "1", "t"]);
        let tree = hull_vertices(&r).unwrap();
        let dot = tree.to_dot();
        assert!(dot.contains("xi(0, 0)") || dot.contains("xi(0, 1)"));
        let t = marked_tree(&r).unwrap();
        assert!(t.to_dot().contains("r3"));
    }
}
