//! 2-tangle diagrams: parsing, complete resolutions, the cube of resolutions
//! with classified saddles, and the two planar closures.
//!
//! A crossing record lists its four edge labels counterclockwise, starting
//! at an under-strand edge. Slots `0, 2` are the under-strand and `1, 3` the
//! over-strand. Boundary positions `0, 1, 2, 3` are the points `1, i, -1, -i`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Label = u32;

/// Slot pairs joined by the 0- and 1-resolutions of a crossing. The
/// 0-resolution is the one where the overcrossing strand turns left.
pub const ZERO_SMOOTHING: [(usize, usize); 2] = [(0, 1), (2, 3)];
pub const ONE_SMOOTHING: [(usize, usize); 2] = [(0, 3), (1, 2)];

#[derive(Debug, Error)]
pub enum TangleError {
    #[error("malformed diagram: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed diagram: {0}")]
    Format(String),
    #[error("edge label {label} occurs {count} times")]
    LabelCount { label: Label, count: usize },
    #[error("diagram is not planar (component containing edge {edge}: V - E + F = {euler})")]
    NonPlanar { edge: Label, euler: i64 },
    #[error("inconsistent orientation: {0}")]
    Orientation(String),
    #[error("diagram has no orientation; only relative gradings are available")]
    Unoriented,
    #[error("state has length {got}, diagram has {expected} crossings")]
    StateLength { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, TangleError>;

/// One end of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Boundary(usize),
    Slot(usize, usize),
}

impl Node {
    fn to_triple(self, label: Label) -> (Label, i64, usize) {
        match self {
            Node::Boundary(p) => (label, -1, p),
            Node::Slot(c, s) => (label, c as i64, s),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DiagramFile {
    endpoints: Vec<Label>,
    crossings: Vec<[Label; 4]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    loops: Vec<Label>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    orientation: Option<Vec<(Label, i64, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basepoint: Option<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangleDiagram {
    endpoints: Vec<Label>,
    crossings: Vec<[Label; 4]>,
    loops: Vec<Label>,
    ends: BTreeMap<Label, [Node; 2]>,
    heads: Option<BTreeMap<Label, Node>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkDiagram {
    pub diagram: TangleDiagram,
    pub basepoint: Label,
}

fn validate_loops(loops: &[Label], used: &BTreeMap<Label, usize>) -> Result<()> {
    let mut seen = BTreeSet::new();
    for &l in loops {
        if used.contains_key(&l) || !seen.insert(l) {
            return Err(TangleError::LabelCount { label: l, count: used.get(&l).copied().unwrap_or(1) + 1 });
        }
    }
    Ok(())
}

impl TangleDiagram {
    /// Validates and builds a diagram. `seeds` lists directed edges as
    /// `(label, node, slot)` meaning the edge runs into `slot` of crossing
    /// `node`, or into boundary position `slot` when `node` is `-1`. Seeds
    /// are propagated through crossings, so one per component suffices.
    pub fn new(
        endpoints: Vec<Label>,
        crossings: Vec<[Label; 4]>,
        loops: Vec<Label>,
        seeds: Option<Vec<(Label, i64, usize)>>,
    ) -> Result<Self> {
        if !(endpoints.is_empty() || endpoints.len() == 4) {
            return Err(TangleError::Format(format!("expected 4 or 0 endpoints, got {}", endpoints.len())));
        }
        let mut occ: BTreeMap<Label, Vec<Node>> = BTreeMap::new();
        for (p, &e) in endpoints.iter().enumerate() {
            occ.entry(e).or_default().push(Node::Boundary(p));
        }
        for (c, rec) in crossings.iter().enumerate() {
            for (s, &e) in rec.iter().enumerate() {
                occ.entry(e).or_default().push(Node::Slot(c, s));
            }
        }
        let counts: BTreeMap<Label, usize> = occ.iter().map(|(l, v)| (*l, v.len())).collect();
        for (&label, &count) in &counts {
            if count != 2 {
                return Err(TangleError::LabelCount { label, count });
            }
        }
        validate_loops(&loops, &counts)?;
        let ends = occ.into_iter().map(|(l, v)| (l, [v[0], v[1]])).collect();
        let mut d = Self { endpoints, crossings, loops, ends, heads: None };
        d.check_planar()?;
        if let Some(seeds) = seeds {
            let seeds = seeds
                .into_iter()
                .map(|(l, node, slot)| d.seed_node(l, node, slot))
                .collect::<Result<Vec<_>>>()?;
            d.heads = Some(d.propagate(&seeds)?);
        }
        Ok(d)
    }

    fn seed_node(&self, label: Label, node: i64, slot: usize) -> Result<(Label, Node)> {
        let n = if node < 0 { Node::Boundary(slot) } else { Node::Slot(node as usize, slot) };
        match self.ends.get(&label) {
            Some(e) if e.contains(&n) => Ok((label, n)),
            Some(_) => Err(TangleError::Orientation(format!("edge {label} does not end at {n:?}"))),
            None => Err(TangleError::Orientation(format!("unknown edge {label}"))),
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn endpoints(&self) -> &[Label] {
        &self.endpoints
    }

    pub fn crossings(&self) -> &[[Label; 4]] {
        &self.crossings
    }

    pub fn loops(&self) -> &[Label] {
        &self.loops
    }

    pub fn is_oriented(&self) -> bool {
        self.heads.is_some()
    }

    /// Both ends of every non-loop edge.
    pub fn edge_ends(&self) -> &BTreeMap<Label, [Node; 2]> {
        &self.ends
    }

    /// Head of each edge, when oriented.
    pub fn heads(&self) -> Option<&BTreeMap<Label, Node>> {
        self.heads.as_ref()
    }

    pub fn without_orientation(&self) -> Self {
        Self { heads: None, ..self.clone() }
    }

    fn other_end(&self, label: Label, n: Node) -> Node {
        let e = self.ends[&label];
        if e[0] == n {
            e[1]
        } else {
            e[0]
        }
    }

    fn propagate(&self, seeds: &[(Label, Node)]) -> Result<BTreeMap<Label, Node>> {
        let mut heads: BTreeMap<Label, Node> = BTreeMap::new();
        let mut stack: Vec<(Label, Node)> = seeds.to_vec();
        while let Some((label, head)) = stack.pop() {
            match heads.get(&label) {
                Some(&h) if h == head => continue,
                Some(_) => {
                    return Err(TangleError::Orientation(format!("edge {label} is given both directions")))
                }
                None => {}
            }
            heads.insert(label, head);
            if let Node::Slot(c, s) = head {
                let out = self.crossings[c][(s + 2) % 4];
                stack.push((out, self.other_end(out, Node::Slot(c, (s + 2) % 4))));
            }
            if let Node::Slot(c, s) = self.other_end(label, head) {
                let inc = self.crossings[c][(s + 2) % 4];
                stack.push((inc, Node::Slot(c, (s + 2) % 4)));
            }
        }
        if let Some(missing) = self.ends.keys().find(|l| !heads.contains_key(l)) {
            return Err(TangleError::Orientation(format!("no direction given for the component of edge {missing}")));
        }
        Ok(heads)
    }

    /// Euler characteristic check of the ribbon graph, one component at a
    /// time. The boundary circle is a vertex at infinity, so its rotation
    /// runs clockwise around the disk.
    fn check_planar(&self) -> Result<()> {
        let n = self.crossings.len();
        let nb = self.endpoints.len();
        let dart = |node: Node| match node {
            Node::Slot(c, s) => 4 * c + s,
            Node::Boundary(p) => 4 * n + p,
        };
        let total = 4 * n + nb;
        let mut alpha = vec![0; total];
        for e in self.ends.values() {
            alpha[dart(e[0])] = dart(e[1]);
            alpha[dart(e[1])] = dart(e[0]);
        }
        let sigma = |d: usize| if d < 4 * n { 4 * (d / 4) + (d % 4 + 1) % 4 } else { 4 * n + (d - 4 * n + 3) % 4 };
        // vertices: crossings 0..n, boundary n
        let vertex = |d: usize| d / 4;
        let nv = n + usize::from(nb > 0);
        let mut uf = UnionFind::new(nv);
        for d in 0..total {
            uf.union(vertex(d), vertex(alpha[d]));
        }
        let mut seen = vec![false; total];
        let mut faces: HashMap<usize, i64> = HashMap::new();
        for start in 0..total {
            if seen[start] {
                continue;
            }
            let mut d = start;
            while !seen[d] {
                seen[d] = true;
                d = sigma(alpha[d]);
            }
            *faces.entry(uf.find(vertex(start))).or_insert(0) += 1;
        }
        let mut verts: HashMap<usize, i64> = HashMap::new();
        for v in 0..nv {
            *verts.entry(uf.find(v)).or_insert(0) += 1;
        }
        let mut edges: HashMap<usize, (i64, Label)> = HashMap::new();
        for (l, e) in &self.ends {
            let r = uf.find(vertex(dart(e[0])));
            let entry = edges.entry(r).or_insert((0, *l));
            entry.0 += 1;
        }
        for (root, v) in verts {
            let (e, label) = edges.get(&root).copied().unwrap_or((0, 0));
            let euler = v - e + faces.get(&root).copied().unwrap_or(0);
            if euler != 2 {
                return Err(TangleError::NonPlanar { edge: label, euler });
            }
        }
        Ok(())
    }

    fn to_file(&self, basepoint: Option<Label>) -> DiagramFile {
        DiagramFile {
            endpoints: self.endpoints.clone(),
            crossings: self.crossings.clone(),
            loops: self.loops.clone(),
            orientation: self.heads.as_ref().map(|h| h.iter().map(|(l, n)| n.to_triple(*l)).collect()),
            basepoint,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file(None)).expect("serializable")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_file(None)).expect("serializable")
    }

    /// Sign of each crossing: under-strand direction times over-strand
    /// direction, with slots `0, 1, 2, 3` pointing south, east, north, west.
    pub fn crossing_signs(&self) -> Result<Vec<i8>> {
        let heads = self.heads.as_ref().ok_or(TangleError::Unoriented)?;
        Ok((0..self.crossings.len())
            .map(|c| {
                let under_up = heads[&self.crossings[c][0]] == Node::Slot(c, 0);
                let over_east = heads[&self.crossings[c][3]] == Node::Slot(c, 3);
                if under_up == over_east {
                    1
                } else {
                    -1
                }
            })
            .collect())
    }

    /// Orients every component: the earring arc enters at boundary point
    /// `1`, the other arc so that the closure `k` is oriented, closed
    /// components from their smallest edge label.
    pub fn oriented_for_closure(&self, k: u8) -> Result<Self> {
        let mut d = self.without_orientation();
        let mut seeds: Vec<(Label, Node)> = Vec::new();
        if !d.endpoints.is_empty() {
            let e0 = d.endpoints[0];
            seeds.push((e0, d.other_end(e0, Node::Boundary(0))));
            let partner = d.arc_partner(0);
            // the closure k pairs each boundary point with one neighbour
            let join = |p: usize| if k == 0 { 3 - p } else { p ^ 1 };
            // walk: enter at 0, leave at partner, closure takes us to join(partner)
            let q = join(partner);
            if q != 0 {
                let eq = d.endpoints[q];
                seeds.push((eq, d.other_end(eq, Node::Boundary(q))));
            } else {
                // the earring closes on itself; enter the other arc at the
                // first remaining point
                let p = (1..4).find(|p| *p != partner).unwrap();
                let ep = d.endpoints[p];
                seeds.push((ep, d.other_end(ep, Node::Boundary(p))));
            }
        }
        let heads = d.propagate_partial(&seeds);
        let mut seeds: Vec<(Label, Node)> = heads.into_iter().collect();
        loop {
            let known: BTreeSet<Label> = d.propagate_partial(&seeds).into_keys().collect();
            match d.ends.iter().find(|(l, _)| !known.contains(l)) {
                Some((l, e)) => seeds.push((*l, e[1])),
                None => break,
            }
        }
        d.heads = Some(d.propagate(&seeds)?);
        Ok(d)
    }

    fn propagate_partial(&self, seeds: &[(Label, Node)]) -> BTreeMap<Label, Node> {
        let mut heads = BTreeMap::new();
        let mut stack = seeds.to_vec();
        while let Some((label, head)) = stack.pop() {
            if heads.contains_key(&label) {
                continue;
            }
            heads.insert(label, head);
            if let Node::Slot(c, s) = head {
                let out = self.crossings[c][(s + 2) % 4];
                stack.push((out, self.other_end(out, Node::Slot(c, (s + 2) % 4))));
            }
            if let Node::Slot(c, s) = self.other_end(label, head) {
                let inc = self.crossings[c][(s + 2) % 4];
                stack.push((inc, Node::Slot(c, (s + 2) % 4)));
            }
        }
        heads
    }

    /// Boundary position joined to `p` by a strand of the diagram.
    pub fn arc_partner(&self, p: usize) -> usize {
        let mut label = self.endpoints[p];
        let mut node = Node::Boundary(p);
        loop {
            match self.other_end(label, node) {
                Node::Boundary(q) => return q,
                Node::Slot(c, s) => {
                    node = Node::Slot(c, (s + 2) % 4);
                    label = self.crossings[c][(s + 2) % 4];
                }
            }
        }
    }
}

pub fn parse_tangle(text: &str) -> Result<TangleDiagram> {
    let f: DiagramFile = serde_json::from_str(text)?;
    if f.endpoints.len() != 4 {
        return Err(TangleError::Format(format!("a 2-tangle has 4 endpoints, got {}", f.endpoints.len())));
    }
    TangleDiagram::new(f.endpoints, f.crossings, f.loops, f.orientation)
}

pub fn parse_link(text: &str) -> Result<LinkDiagram> {
    let f: DiagramFile = serde_json::from_str(text)?;
    if !f.endpoints.is_empty() {
        return Err(TangleError::Format("a closed diagram has no endpoints".into()));
    }
    let basepoint = f.basepoint.ok_or_else(|| TangleError::Format("missing basepoint".into()))?;
    let diagram = TangleDiagram::new(f.endpoints, f.crossings, f.loops, f.orientation)?;
    if !diagram.ends.contains_key(&basepoint) && !diagram.loops.contains(&basepoint) {
        return Err(TangleError::Format(format!("basepoint {basepoint} is not an edge")));
    }
    Ok(LinkDiagram { diagram, basepoint })
}

impl LinkDiagram {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.diagram.to_file(Some(self.basepoint))).expect("serializable")
    }
}

pub fn writhe_counts(d: &TangleDiagram) -> Result<(usize, usize)> {
    let signs = d.crossing_signs()?;
    let pos = signs.iter().filter(|s| **s > 0).count();
    Ok((pos, signs.len() - pos))
}

// ---------------------------------------------------------------------------
// Resolutions

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.parent[a.max(b)] = a.min(b);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanarTangle {
    /// 0: arcs `{1, -i}`, `{i, -1}`; 1: arcs `{1, i}`, `{-1, -i}`.
    pub ell: u8,
    /// Circle identifiers (smallest edge label) in canonical order.
    pub circles: Vec<Label>,
    pub earring_arc: Vec<Label>,
    pub plain_arc: Vec<Label>,
    #[serde(skip)]
    circle_edges: Vec<Vec<Label>>,
}

/// Which component of a resolution an edge lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Earring,
    Plain,
    Circle(usize),
}

struct Resolution {
    planar: PlanarTangle,
    part: HashMap<Label, Part>,
}

impl PlanarTangle {
    pub fn m(&self) -> usize {
        self.circles.len()
    }

    pub fn circle_edges(&self, i: usize) -> &[Label] {
        &self.circle_edges[i]
    }

    /// A crossingless diagram of this planar tangle.
    pub fn to_diagram(&self) -> TangleDiagram {
        let e = self.earring_arc[0];
        let p = self.plain_arc[0];
        let endpoints = if self.ell == 0 { vec![e, p, p, e] } else { vec![e, e, p, p] };
        TangleDiagram::new(endpoints, vec![], self.circles.clone(), None).expect("planar")
    }
}

fn resolve_full(d: &TangleDiagram, state: u64) -> Resolution {
    let labels: Vec<Label> = d.ends.keys().copied().collect();
    let index: HashMap<Label, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut uf = UnionFind::new(labels.len());
    for (c, rec) in d.crossings.iter().enumerate() {
        let pairs = if state >> c & 1 == 0 { ZERO_SMOOTHING } else { ONE_SMOOTHING };
        for (a, b) in pairs {
            uf.union(index[&rec[a]], index[&rec[b]]);
        }
    }
    let mut classes: BTreeMap<usize, Vec<Label>> = BTreeMap::new();
    for (i, l) in labels.iter().enumerate() {
        classes.entry(uf.find(i)).or_default().push(*l);
    }
    let mut part = HashMap::new();
    let (mut ell, mut earring_arc, mut plain_arc) = (0, vec![], vec![]);
    let mut circles: Vec<Vec<Label>> = Vec::new();
    let boundary: Vec<usize> = d.endpoints.iter().map(|e| uf.find(index[e])).collect();
    for (root, mut edges) in classes {
        edges.sort_unstable();
        if boundary.first() == Some(&root) {
            ell = if boundary[1] == root { 1 } else { 0 };
            for e in &edges {
                part.insert(*e, Part::Earring);
            }
            earring_arc = edges;
        } else if boundary.contains(&root) {
            for e in &edges {
                part.insert(*e, Part::Plain);
            }
            plain_arc = edges;
        } else {
            circles.push(edges);
        }
    }
    for l in &d.loops {
        circles.push(vec![*l]);
    }
    circles.sort_by_key(|c| c[0]);
    for (i, c) in circles.iter().enumerate() {
        for e in c {
            part.insert(*e, Part::Circle(i));
        }
    }
    let planar = PlanarTangle {
        ell,
        circles: circles.iter().map(|c| c[0]).collect(),
        earring_arc,
        plain_arc,
        circle_edges: circles,
    };
    Resolution { planar, part }
}

fn state_of(d: &TangleDiagram, bits: &[u8]) -> Result<u64> {
    if bits.len() != d.crossing_count() {
        return Err(TangleError::StateLength { expected: d.crossing_count(), got: bits.len() });
    }
    Ok(bits.iter().enumerate().fold(0, |acc, (c, b)| acc | (u64::from(*b & 1) << c)))
}

/// Complete resolution at the state `bits` (one entry per crossing).
pub fn resolve(d: &TangleDiagram, bits: &[u8]) -> Result<PlanarTangle> {
    if d.endpoints.is_empty() {
        return Err(TangleError::Format("resolve expects a 2-tangle".into()));
    }
    Ok(resolve_full(d, state_of(d, bits)?).planar)
}

// ---------------------------------------------------------------------------
// Cube

/// Saddle kinds, named after the components the saddle band touches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SaddleKind {
    ArcArc,
    EarringArcCircleMerge,
    EarringArcCircleSplit,
    PlainArcCircleMerge,
    PlainArcCircleSplit,
    CircleCircleMerge,
    CircleSplit,
}

impl SaddleKind {
    /// Circles consumed and produced by the template map.
    pub fn arity(self) -> (usize, usize) {
        match self {
            SaddleKind::ArcArc => (0, 0),
            SaddleKind::EarringArcCircleMerge | SaddleKind::PlainArcCircleMerge => (1, 0),
            SaddleKind::EarringArcCircleSplit | SaddleKind::PlainArcCircleSplit => (0, 1),
            SaddleKind::CircleCircleMerge => (2, 1),
            SaddleKind::CircleSplit => (1, 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeEdge {
    pub source: usize,
    pub target: usize,
    pub crossing: usize,
    pub kind: SaddleKind,
    /// Positions of the consumed circles in the source's canonical order.
    pub affected: Vec<usize>,
    /// Source circle `k` goes to template input position `perm_in[k]`.
    pub perm_in: Vec<usize>,
    /// Template output position `t` goes to target circle `perm_out[t]`.
    pub perm_out: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionCube {
    pub n: usize,
    /// Indexed by state; bit `c` of the index is the resolution of crossing `c`.
    pub vertices: Vec<PlanarTangle>,
    pub h: Vec<i32>,
    pub edges: Vec<CubeEdge>,
    pub oriented: bool,
    pub counts: (usize, usize),
}

fn classify(d: &TangleDiagram, src: &Resolution, tgt: &Resolution, s: usize, t: usize, c: usize) -> CubeEdge {
    let rec = d.crossings[c];
    let (pa, pb) = (src.part[&rec[0]], src.part[&rec[2]]);
    use Part::*;
    use SaddleKind::*;
    let (kind, affected): (SaddleKind, Vec<usize>) = if pa == pb {
        match pa {
            Earring => (EarringArcCircleSplit, vec![]),
            Plain => (PlainArcCircleSplit, vec![]),
            Circle(i) => (CircleSplit, vec![i]),
        }
    } else {
        match (pa, pb) {
            (Earring, Plain) | (Plain, Earring) => (ArcArc, vec![]),
            (Earring, Circle(i)) | (Circle(i), Earring) => (EarringArcCircleMerge, vec![i]),
            (Plain, Circle(i)) | (Circle(i), Plain) => (PlainArcCircleMerge, vec![i]),
            (Circle(i), Circle(j)) => (CircleCircleMerge, vec![i.min(j), i.max(j)]),
            _ => unreachable!(),
        }
    };
    let ms = src.planar.m();
    let kept: Vec<usize> = (0..ms).filter(|i| !affected.contains(i)).collect();
    let mut perm_in = vec![0; ms];
    for (pos, &i) in kept.iter().chain(affected.iter()).enumerate() {
        perm_in[i] = pos;
    }
    let tgt_pos: HashMap<Label, usize> = tgt.planar.circles.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let kept_ids: BTreeSet<Label> = kept.iter().map(|i| src.planar.circles[*i]).collect();
    let mut perm_out: Vec<usize> = kept.iter().map(|i| tgt_pos[&src.planar.circles[*i]]).collect();
    perm_out.extend((0..tgt.planar.m()).filter(|j| !kept_ids.contains(&tgt.planar.circles[*j])));
    CubeEdge { source: s, target: t, crossing: c, kind, affected, perm_in, perm_out }
}

/// The cube of resolutions. With an orientation, `h(i)` is the number of
/// ones minus `n⁻`; without one it is the number of ones.
pub fn build_cube(d: &TangleDiagram) -> ResolutionCube {
    let n = d.crossing_count();
    assert!(n < 32, "too many crossings");
    let counts = writhe_counts(d).unwrap_or((0, 0));
    let res: Vec<Resolution> = (0..1u64 << n).into_par_iter().map(|s| resolve_full(d, s)).collect();
    let edges: Vec<CubeEdge> = (0..1usize << n)
        .into_par_iter()
        .flat_map_iter(|s| {
            let res = &res;
            (0..n).filter(move |c| s >> c & 1 == 0).map(move |c| {
                let t = s | 1 << c;
                classify(d, &res[s], &res[t], s, t, c)
            })
        })
        .collect();
    let h = (0..1usize << n).map(|s| s.count_ones() as i32 - counts.1 as i32).collect();
    ResolutionCube {
        n,
        vertices: res.into_iter().map(|r| r.planar).collect(),
        h,
        edges,
        oriented: d.is_oriented(),
        counts,
    }
}

// ---------------------------------------------------------------------------
// Closures

/// Boundary positions joined by the closure `k`.
pub fn closure_pairs(k: u8) -> [(usize, usize); 2] {
    if k == 0 {
        [(0, 3), (1, 2)]
    } else {
        [(0, 1), (2, 3)]
    }
}

/// Whether the orientation of `d` extends over the closing arcs of `k`.
pub fn orientation_extends(d: &TangleDiagram, k: u8) -> bool {
    let Some(heads) = d.heads.as_ref() else { return false };
    closure_pairs(k).iter().all(|&(p, q)| {
        let exits = |p: usize| heads[&d.endpoints[p]] == Node::Boundary(p);
        exits(p) != exits(q)
    })
}

/// The closure `k` as a closed diagram. The orientation is kept only when it
/// extends; the basepoint is the component through boundary point `1`.
pub fn close(d: &TangleDiagram, k: u8) -> LinkDiagram {
    let labels: Vec<Label> = d.ends.keys().copied().collect();
    let index: HashMap<Label, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut uf = UnionFind::new(labels.len());
    for (p, q) in closure_pairs(k) {
        uf.union(index[&d.endpoints[p]], index[&d.endpoints[q]]);
    }
    let rep = |uf: &mut UnionFind, l: Label| labels[uf.find(index[&l])];
    let crossings: Vec<[Label; 4]> = d.crossings.iter().map(|rec| rec.map(|l| rep(&mut uf, l))).collect();
    let used: BTreeSet<Label> = crossings.iter().flatten().copied().collect();
    let mut loops = d.loops.clone();
    let mut seen = BTreeSet::new();
    for &l in &labels {
        let r = rep(&mut uf, l);
        if !used.contains(&r) && seen.insert(r) {
            loops.push(r);
        }
    }
    let basepoint = rep(&mut uf, d.endpoints[0]);
    let seeds = if orientation_extends(d, k) {
        let heads = d.heads.as_ref().unwrap();
        let mut seeds = Vec::new();
        for (c, rec) in d.crossings.iter().enumerate() {
            for (s, l) in rec.iter().enumerate() {
                if heads[l] == Node::Slot(c, s) {
                    seeds.push((rep(&mut uf, *l), c as i64, s));
                }
            }
        }
        Some(seeds)
    } else {
        None
    };
    let diagram = TangleDiagram::new(vec![], crossings, loops, seeds).expect("closure of a valid tangle");
    LinkDiagram { diagram, basepoint }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn t_cross() -> TangleDiagram {
        // a = east, b = north, c = west, d = south; under-strand north-south
        parse_tangle(r#"{"endpoints":[1,2,3,4],"crossings":[[2,3,4,1]],"orientation":[[2,0,0],[1,0,3]]}"#).unwrap()
    }

    #[test]
    fn parse_planar_tangles() {
        let t0 = parse_tangle(r#"{"endpoints":[1,2,2,1],"crossings":[]}"#).unwrap();
        assert_eq!(t0.crossing_count(), 0);
        assert_eq!(resolve(&t0, &[]).unwrap().ell, 0);
        let t1 = parse_tangle(r#"{"endpoints":[1,1,2,2],"crossings":[]}"#).unwrap();
        assert_eq!(resolve(&t1, &[]).unwrap().ell, 1);
        let with_circle = parse_tangle(r#"{"endpoints":[1,2,2,1],"crossings":[],"loops":[7]}"#).unwrap();
        let p = resolve(&with_circle, &[]).unwrap();
        assert_eq!((p.ell, p.m()), (0, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_tangle(r#"{"endpoints":[1,2,3,4],"crossings":[[2,3,4,1],[1,5,5,6]]}"#),
            Err(TangleError::LabelCount { .. })
        ));
        assert!(matches!(
            parse_tangle(r#"{"endpoints":[1,2,1,2],"crossings":[]}"#),
            Err(TangleError::NonPlanar { .. })
        ));
        assert!(matches!(parse_tangle(r#"{"endpoints":[1,2,3,4],"crossings":[[2,3,4,9]]}"#), Err(TangleError::LabelCount { .. })));
        assert!(matches!(parse_tangle("{"), Err(TangleError::Json(_))));
        // a crossing drawn with the wrong rotation is not planar
        assert!(parse_tangle(r#"{"endpoints":[1,2,3,4],"crossings":[[2,1,4,3]]}"#).is_err());
    }

    #[test]
    fn crossing_tangle() {
        let d = t_cross();
        assert_eq!(d.crossing_count(), 1);
        assert_eq!(resolve(&d, &[0]).unwrap().ell, 0);
        assert_eq!(resolve(&d, &[1]).unwrap().ell, 1);
        assert_eq!(writhe_counts(&d).unwrap(), (1, 0));
        assert!(orientation_extends(&d, 0));
        assert!(!orientation_extends(&d, 1));
        let cube = build_cube(&d);
        assert_eq!(cube.vertices.len(), 2);
        assert_eq!(cube.h, vec![0, 1]);
        assert_eq!(cube.edges.len(), 1);
        assert_eq!(cube.edges[0].kind, SaddleKind::ArcArc);
    }

    #[test]
    fn orientation_is_propagated_and_checked() {
        let d = t_cross();
        assert_eq!(d.heads().unwrap().len(), 4);
        // both directions for one edge
        let bad = parse_tangle(r#"{"endpoints":[1,2,3,4],"crossings":[[2,3,4,1]],"orientation":[[2,0,0],[4,0,2]]}"#);
        assert!(matches!(bad, Err(TangleError::Orientation(_))));
        let partial = parse_tangle(r#"{"endpoints":[1,2,3,4],"crossings":[[2,3,4,1]],"orientation":[[2,0,0]]}"#);
        assert!(matches!(partial, Err(TangleError::Orientation(_))));
        assert!(matches!(writhe_counts(&d.without_orientation()), Err(TangleError::Unoriented)));
    }

    #[test]
    fn closures_of_planar_tangles() {
        let t0 = parse_tangle(r#"{"endpoints":[1,2,2,1],"crossings":[]}"#).unwrap();
        let t1 = parse_tangle(r#"{"endpoints":[1,1,2,2],"crossings":[]}"#).unwrap();
        assert_eq!(close(&t0, 0).diagram.loops().len(), 2);
        assert_eq!(close(&t1, 0).diagram.loops().len(), 1);
        assert_eq!(close(&t0, 1).diagram.loops().len(), 1);
        assert_eq!(close(&t1, 1).diagram.loops().len(), 2);
    }

    #[test]
    fn serialization_round_trip() {
        let d = t_cross();
        let back = parse_tangle(&d.to_json()).unwrap();
        assert_eq!(back, d);
        let p = resolve(&d, &[1]).unwrap();
        let again = resolve(&parse_tangle(&p.to_diagram().to_json()).unwrap(), &[]).unwrap();
        assert_eq!((again.ell, &again.circles), (p.ell, &p.circles));
        let link = close(&d, 0);
        assert_eq!(parse_link(&link.to_json()).unwrap(), link);
    }

    #[test]
    fn state_length_checked() {
        assert!(matches!(resolve(&t_cross(), &[0, 1]), Err(TangleError::StateLength { .. })));
    }
}
