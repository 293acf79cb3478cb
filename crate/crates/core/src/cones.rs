//! Cones with respect to a finite vertex set, canonical codes of truncated
//! cones, and the cone-type classification feeding automaton synthesis.
//!
//! A cone at level `n` is a component of `X ∖ B(F, n)`; its boundary is the set
//! of its vertices at distance `n + 1`. Full cone isomorphism is not
//! computable, so cones are compared through depth-`k` truncations (vertices up
//! to `k` levels past the boundary). The classifier certifies the resulting
//! partition only when it is stable under deepening and forms a bisimulation
//! under ball growth.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{LabelledGraph, VertexId};
use crate::words::Letter;

const NOT_IN_LEVEL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Out(Letter),
    In(Letter),
}

/// One component of `X ∖ B(F, level)` inside the explored region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub level: usize,
    /// Sorted vertex ids, possibly truncated (see [`Cone::partial`]).
    pub vertices: Vec<VertexId>,
    /// Sorted vertices at distance `level + 1`.
    pub boundary: Vec<VertexId>,
    /// The listed vertices do not exhaust the component.
    pub partial: bool,
}

/// Canonical code of a depth-`k` truncation.
///
/// The truncation may split into several pieces; each piece gets the minimum
/// breadth-first code over its boundary vertices, and the pieces are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ConeCode {
    pub depth: usize,
    pub parts: Vec<Vec<u32>>,
}

/// Distances and move structure shared by all cone computations on one graph.
pub struct ConeAnalyzer<'g> {
    g: &'g LabelledGraph,
    centers: Vec<VertexId>,
    dist: Vec<Option<usize>>,
    moves: Vec<Move>,
    /// Smallest distance of a vertex whose neighbourhood is not fully explored.
    incomplete_from: Option<(usize, VertexId)>,
}

/// All cones of one level with a vertex → cone index map.
struct Level {
    cones: Vec<Cone>,
    comp_of: Vec<u32>,
}

impl<'g> ConeAnalyzer<'g> {
    /// Requires a deterministic graph; non-symmetric graphs must also be
    /// co-deterministic so that ingoing moves are well defined.
    pub fn new(g: &'g LabelledGraph, centers: &[VertexId]) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::Unsupported("the centre set F must be nonempty".into()));
        }
        let structure = g.check_structure();
        if !structure.deterministic {
            let v = g
                .vertices()
                .find(|&v| g.out_edges(v).windows(2).any(|p| p[0].0 == p[1].0))
                .unwrap();
            return Err(Error::NotDeterministic(g.name(v).to_string()));
        }
        let mut moves: Vec<Move> = g.alphabet().letters().map(Move::Out).collect();
        if !structure.symmetric {
            if let Some(v) = g.vertices().find(|&v| g.in_edges(v).windows(2).any(|p| p[0].0 == p[1].0)) {
                return Err(Error::NotDeterministic(g.name(v).to_string()));
            }
            moves.extend(g.alphabet().letters().map(Move::In));
        }
        let dist = g.distances_from(centers);
        let k = g.alphabet().len();
        let mut incomplete_from: Option<(usize, VertexId)> = None;
        for v in g.vertices() {
            let Some(d) = dist[v.index()] else { continue };
            let complete = !g.is_frontier(v) && (structure.symmetric || g.in_edges(v).len() == k);
            if !complete && incomplete_from.is_none_or(|(best, _)| d < best) {
                incomplete_from = Some((d, v));
            }
        }
        Ok(ConeAnalyzer { g, centers: centers.to_vec(), dist, moves, incomplete_from })
    }

    pub fn graph(&self) -> &LabelledGraph {
        self.g
    }

    pub fn centers(&self) -> &[VertexId] {
        &self.centers
    }

    pub fn distance(&self, v: VertexId) -> Option<usize> {
        self.dist[v.index()]
    }

    pub fn distances(&self) -> &[Option<usize>] {
        &self.dist
    }

    /// Largest `r` such that every vertex at distance `≤ r` is fully explored.
    pub fn exact_radius(&self) -> Option<usize> {
        match self.incomplete_from {
            None => Some(usize::MAX),
            Some((0, _)) => None,
            Some((d, _)) => Some(d - 1),
        }
    }

    fn require_complete(&self, r: usize) -> Result<()> {
        match self.incomplete_from {
            Some((d, v)) if d <= r => Err(Error::FrontierEscape(self.g.name(v).to_string())),
            _ => Ok(()),
        }
    }

    fn target(&self, v: VertexId, m: Move) -> Option<VertexId> {
        match m {
            Move::Out(a) => self.g.successor(v, a),
            Move::In(a) => self.g.predecessor(v, a),
        }
    }

    /// Components of `X ∖ B(F, n)` in the explored region, truncated at
    /// distance `n + horizon`.
    pub fn cones(&self, n: usize, horizon: usize) -> Result<Vec<Cone>> {
        self.require_complete((n + horizon).saturating_sub(1))?;
        let limit = n + horizon;
        let level = self.level(n);
        Ok(level
            .cones
            .into_iter()
            .map(|mut c| {
                let before = c.vertices.len();
                c.vertices.retain(|v| self.dist[v.index()].unwrap() <= limit);
                c.partial = c.vertices.len() < before
                    || c.vertices.iter().any(|&v| self.g.is_frontier(v));
                c
            })
            .collect())
    }

    fn level(&self, n: usize) -> Level {
        let mut comp_of = vec![NOT_IN_LEVEL; self.g.vertex_count()];
        let mut cones = Vec::new();
        for start in self.g.vertices() {
            if comp_of[start.index()] != NOT_IN_LEVEL || !self.dist[start.index()].is_some_and(|d| d > n) {
                continue;
            }
            let id = cones.len() as u32;
            comp_of[start.index()] = id;
            let mut vertices = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for u in self.g.neighbours(v) {
                    if comp_of[u.index()] == NOT_IN_LEVEL && self.dist[u.index()].is_some_and(|d| d > n) {
                        comp_of[u.index()] = id;
                        vertices.push(u);
                        queue.push_back(u);
                    }
                }
            }
            vertices.sort_unstable();
            let boundary: Vec<VertexId> =
                vertices.iter().copied().filter(|v| self.dist[v.index()] == Some(n + 1)).collect();
            let partial = vertices.iter().any(|&v| self.g.is_frontier(v));
            cones.push(Cone { level: n, vertices, boundary, partial });
        }
        // Explored regions can contain components whose boundary lies outside
        // the region's exact part; those have no boundary vertex and are kept
        // only if they have one.
        let mut order: Vec<usize> = (0..cones.len()).filter(|&i| !cones[i].boundary.is_empty()).collect();
        order.sort_by_key(|&i| cones[i].boundary[0]);
        let mut remap = vec![NOT_IN_LEVEL; cones.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new as u32;
        }
        for c in comp_of.iter_mut() {
            if *c != NOT_IN_LEVEL {
                *c = remap[*c as usize];
            }
        }
        let mut slots: Vec<Option<Cone>> = cones.into_iter().map(Some).collect();
        let cones = order.iter().map(|&i| slots[i].take().unwrap()).collect();
        Level { cones, comp_of }
    }

    /// Canonical code of the depth-`k` truncation of `cone`, and the canonical
    /// vertex order that positions are taken from.
    pub fn code(&self, cone: &Cone, k: usize) -> Result<(ConeCode, Vec<VertexId>)> {
        let n = cone.level;
        let top = n + 1 + k;
        if let Some((d, _)) = self.incomplete_from {
            if d <= top {
                return Err(Error::InsufficientDepth { needed: top, available: d.saturating_sub(1) });
            }
        }
        let in_trunc = |v: VertexId| self.dist[v.index()].is_some_and(|d| d > n && d <= top);
        let mut piece_of: HashMap<VertexId, usize> = HashMap::new();
        let mut pieces: Vec<Vec<VertexId>> = Vec::new();
        for &b in &cone.boundary {
            if piece_of.contains_key(&b) {
                continue;
            }
            let id = pieces.len();
            let mut bases = vec![b];
            piece_of.insert(b, id);
            let mut queue = VecDeque::from([b]);
            while let Some(v) = queue.pop_front() {
                for u in self.g.neighbours(v) {
                    if in_trunc(u) && !piece_of.contains_key(&u) {
                        piece_of.insert(u, id);
                        if self.dist[u.index()] == Some(n + 1) {
                            bases.push(u);
                        }
                        queue.push_back(u);
                    }
                }
            }
            bases.sort_unstable();
            pieces.push(bases);
        }
        let mut coded: Vec<(Vec<u32>, VertexId, Vec<VertexId>)> = Vec::with_capacity(pieces.len());
        for bases in pieces {
            let mut best: Option<(Vec<u32>, Vec<VertexId>)> = None;
            for &b in &bases {
                if let Some(found) = self.bfs_code(b, n, k, best.as_ref().map(|x| x.0.as_slice())) {
                    best = Some(found);
                }
            }
            let (code, order) = best.unwrap();
            let min = *order.iter().min().unwrap();
            coded.push((code, min, order));
        }
        coded.sort_by(|x, y| (&x.0, x.1).cmp(&(&y.0, y.1)));
        let mut order = Vec::new();
        let mut parts = Vec::with_capacity(coded.len());
        for (code, _, o) in coded {
            parts.push(code);
            order.extend(o);
        }
        Ok((ConeCode { depth: k, parts }, order))
    }

    /// Breadth-first code from `base`; `None` if it is not strictly smaller
    /// than `bound`.
    fn bfs_code(&self, base: VertexId, n: usize, k: usize, bound: Option<&[u32]>) -> Option<(Vec<u32>, Vec<VertexId>)> {
        let top = n + 1 + k;
        let mut number: HashMap<VertexId, u32> = HashMap::from([(base, 0)]);
        let mut order = vec![base];
        let mut code: Vec<u32> = Vec::new();
        let mut tied = bound.is_some();
        let push = |code: &mut Vec<u32>, t: u32, tied: &mut bool| -> bool {
            if *tied {
                let b = bound.unwrap();
                match b.get(code.len()) {
                    None => return false,
                    Some(&x) if t > x => return false,
                    Some(&x) if t < x => *tied = false,
                    _ => {}
                }
            }
            code.push(t);
            true
        };
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            let flag = u32::from(self.dist[v.index()] == Some(n + 1));
            if !push(&mut code, flag, &mut tied) {
                return None;
            }
            for &m in &self.moves {
                let t = match self.target(v, m) {
                    None => 0,
                    Some(u) => match self.dist[u.index()] {
                        Some(d) if d <= n => 1,
                        Some(d) if d > top => 2,
                        _ => {
                            let next = order.len() as u32;
                            let id = *number.entry(u).or_insert_with(|| {
                                order.push(u);
                                next
                            });
                            3 + id
                        }
                    },
                };
                if !push(&mut code, t, &mut tied) {
                    return None;
                }
            }
            i += 1;
        }
        if tied && bound.is_some_and(|b| b.len() == code.len()) {
            return None;
        }
        Some((code, order))
    }
}

/// Components of `X ∖ B(F, n)` truncated at `n + horizon`.
pub fn cones(g: &LabelledGraph, centers: &[VertexId], n: usize, horizon: usize) -> Result<Vec<Cone>> {
    ConeAnalyzer::new(g, centers)?.cones(n, horizon)
}

/// Canonical depth-`k` code of a cone computed with respect to `centers`.
pub fn cone_code(g: &LabelledGraph, centers: &[VertexId], cone: &Cone, k: usize) -> Result<ConeCode> {
    Ok(ConeAnalyzer::new(g, centers)?.code(cone, k)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    Certified { depth: usize },
    Unstable { max_radius: usize, reason: String },
}

/// Second-order type `t_{from,to}^{index}` (index counted from 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Tau {
    pub from: usize,
    pub to: usize,
    pub index: usize,
}

/// A successor cone of a representative, with the boundary pairing onto the
/// representative of its own type.
#[derive(Clone, Debug, Serialize)]
pub struct SuccessorSlot {
    pub class: usize,
    /// `k` in `t_{i,class}^k`, from 1.
    pub index: usize,
    pub boundary: Vec<VertexId>,
    /// Position in the canonical boundary of representative `class`, aligned with `boundary`.
    pub image: Vec<usize>,
}

impl SuccessorSlot {
    pub fn image_of(&self, v: VertexId) -> Option<usize> {
        self.boundary.iter().position(|&b| b == v).map(|i| self.image[i])
    }

    pub fn preimage_of(&self, pos: usize) -> Option<VertexId> {
        self.image.iter().position(|&p| p == pos).map(|i| self.boundary[i])
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Representative {
    pub class: usize,
    pub level: usize,
    /// Boundary in canonical order; positions index into this list.
    pub boundary: Vec<VertexId>,
    pub code: ConeCode,
    pub successors: Vec<SuccessorSlot>,
}

/// Finite description of the cone structure.
///
/// Classes are numbered from 1; class 0 is the whole graph with boundary `F`.
#[derive(Clone, Debug, Serialize)]
pub struct ConeTypeTable {
    pub status: Certificate,
    pub centers: Vec<VertexId>,
    pub max_radius: usize,
    pub depth: usize,
    /// Number of cones at each level `0..=max_radius + 1`.
    pub cones_per_level: Vec<usize>,
    /// Distinct classes seen at levels `≤ n`, for each `n`.
    pub growth: Vec<usize>,
    pub representatives: Vec<Representative>,
    /// Successors of the whole graph: the level-0 cones.
    pub root_successors: Vec<SuccessorSlot>,
    /// `φ(x)` as (class, boundary position) for classified vertices; `F` maps to class 0.
    pub phi: BTreeMap<VertexId, (usize, usize)>,
    /// `τ(y)` for classified vertices outside `F`.
    pub tau: BTreeMap<VertexId, Tau>,
    /// Distance to `F` in the explored region.
    pub distance: Vec<Option<usize>>,
}

impl ConeTypeTable {
    pub fn is_certified(&self) -> bool {
        matches!(self.status, Certificate::Certified { .. })
    }

    /// Number `r` of cone types.
    pub fn type_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn representative(&self, class: usize) -> &Representative {
        &self.representatives[class - 1]
    }

    /// Successor slots of class `i` (0 = whole graph).
    pub fn successors(&self, i: usize) -> &[SuccessorSlot] {
        if i == 0 {
            &self.root_successors
        } else {
            &self.representative(i).successors
        }
    }

    pub fn slot(&self, tau: Tau) -> &SuccessorSlot {
        self.successors(tau.from).iter().find(|s| s.class == tau.to && s.index == tau.index).unwrap()
    }

    /// `d_{i,j}`.
    pub fn d(&self, i: usize, j: usize) -> usize {
        self.successors(i).iter().filter(|s| s.class == j).count()
    }

    /// All second-order type symbols `t_{i,j}^k`.
    pub fn taus(&self) -> Vec<Tau> {
        (0..=self.type_count())
            .flat_map(|i| self.successors(i).iter().map(move |s| Tau { from: i, to: s.class, index: s.index }))
            .collect()
    }

    /// Line-oriented dump: status, representatives, `d_{i,j}` and successor pairings.
    pub fn to_text(&self, g: &LabelledGraph) -> String {
        let mut s = String::new();
        match &self.status {
            Certificate::Certified { depth } => {
                let _ = writeln!(s, "status certified depth {depth}");
            }
            Certificate::Unstable { max_radius, reason } => {
                let _ = writeln!(s, "status unstable radius {max_radius} reason {reason}");
            }
        }
        let names: Vec<&str> = self.centers.iter().map(|&v| g.name(v)).collect();
        let _ = writeln!(s, "centers {}", names.join(" "));
        let growth: Vec<String> = self.growth.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "growth {}", growth.join(" "));
        for r in &self.representatives {
            let b: Vec<&str> = r.boundary.iter().map(|&v| g.name(v)).collect();
            let _ = writeln!(s, "type {} level {} boundary {}", r.class, r.level, b.join(" "));
        }
        for i in 0..=self.type_count() {
            for j in 1..=self.type_count() {
                let d = self.d(i, j);
                if d > 0 {
                    let _ = writeln!(s, "d {i} {j} {d}");
                }
            }
        }
        for i in 0..=self.type_count() {
            for slot in self.successors(i) {
                let pairs: Vec<String> =
                    slot.boundary.iter().zip(&slot.image).map(|(&v, p)| format!("{}={p}", g.name(v))).collect();
                let _ = writeln!(s, "t {i} {} {} {}", slot.class, slot.index, pairs.join(" "));
            }
        }
        for (v, t) in &self.tau {
            let _ = writeln!(s, "tau {} {} {} {}", g.name(*v), t.from, t.to, t.index);
        }
        s
    }
}

/// Classifies cones at levels `0..=max_radius + 1` by depth-`depth` codes.
///
/// Certified when
/// 1. codes at `depth` and `depth + 1` induce the same partition,
/// 2. all cones of a class (levels `≤ max_radius`) have the same multiset of
///    successor classes,
/// 3. every class met at level `max_radius + 1` already occurs at a lower level,
/// 4. boundary pairings transported along predecessor chains agree with the
///    canonical pairings.
///
/// Needs every vertex up to distance `max_radius + depth + 3` fully explored.
pub fn classify_cone_types(
    g: &LabelledGraph,
    centers: &[VertexId],
    max_radius: usize,
    depth: usize,
) -> Result<ConeTypeTable> {
    if depth == 0 {
        return Err(Error::InsufficientDepth { needed: 1, available: 0 });
    }
    let an = ConeAnalyzer::new(g, centers)?;
    an.require_complete(max_radius + depth + 3)?;
    let top = max_radius + 1;
    let levels: Vec<Level> = (0..=top).map(|n| an.level(n)).collect();

    struct Info {
        class: usize,
        order: Vec<VertexId>,
    }
    let mut classes: HashMap<ConeCode, usize> = HashMap::new();
    let mut deeper: HashMap<usize, ConeCode> = HashMap::new();
    let mut first_of_class: Vec<(usize, usize)> = Vec::new();
    let mut info: Vec<Vec<Info>> = Vec::with_capacity(levels.len());
    let mut growth = Vec::with_capacity(levels.len());
    let mut failure: Option<String> = None;
    for (n, level) in levels.iter().enumerate() {
        let mut row = Vec::with_capacity(level.cones.len());
        for (c, cone) in level.cones.iter().enumerate() {
            let (code, order) = an.code(cone, depth)?;
            let (code_next, _) = an.code(cone, depth + 1)?;
            let next_id = classes.len() + 1;
            let class = *classes.entry(code).or_insert(next_id);
            if class == next_id {
                first_of_class.push((n, c));
            }
            match deeper.get(&class) {
                Some(existing) if *existing != code_next && failure.is_none() => {
                    failure = Some(format!("type {class} splits at depth {}", depth + 1));
                }
                Some(_) => {}
                None => {
                    deeper.insert(class, code_next);
                }
            }
            row.push(Info { class, order });
        }
        info.push(row);
        growth.push(classes.len());
    }
    if failure.is_none() {
        let mut seen = HashMap::new();
        for (class, code) in &deeper {
            if let Some(other) = seen.insert(code.clone(), *class) {
                failure = Some(format!("types {other} and {class} merge at depth {}", depth + 1));
                break;
            }
        }
    }

    // successors of cone (n, c) for n ≤ max_radius
    let successors_of = |n: usize, c: usize| -> Vec<usize> {
        levels[n + 1]
            .cones
            .iter()
            .enumerate()
            .filter(|(_, d)| levels[n].comp_of[d.boundary[0].index()] == c as u32)
            .map(|(i, _)| i)
            .collect()
    };
    let mut succ_profile: HashMap<usize, Vec<usize>> = HashMap::new();
    for n in 0..=max_radius {
        for c in 0..levels[n].cones.len() {
            let mut profile: Vec<usize> = successors_of(n, c).iter().map(|&d| info[n + 1][d].class).collect();
            profile.sort_unstable();
            let class = info[n][c].class;
            match succ_profile.get(&class) {
                Some(p) if *p != profile && failure.is_none() => {
                    failure = Some(format!("cones of type {class} have different successor types"));
                }
                Some(_) => {}
                None => {
                    succ_profile.insert(class, profile);
                }
            }
        }
    }
    if failure.is_none() {
        if let Some(&(_, c)) = first_of_class.iter().find(|&&(n, _)| n == top) {
            failure = Some(format!(
                "type {} first appears at level {top}; the types have not closed up",
                info[top][c].class
            ));
        }
    }

    let cones_per_level: Vec<usize> = levels.iter().map(|l| l.cones.len()).collect();
    let unstable = |reason: String| ConeTypeTable {
        status: Certificate::Unstable { max_radius, reason },
        centers: centers.to_vec(),
        max_radius,
        depth,
        cones_per_level: cones_per_level.clone(),
        growth: growth.clone(),
        representatives: Vec::new(),
        root_successors: Vec::new(),
        phi: BTreeMap::new(),
        tau: BTreeMap::new(),
        distance: an.distances().to_vec(),
    };
    if let Some(reason) = failure {
        return Ok(unstable(reason));
    }

    // Representatives and their numbered successors.
    let boundary_order = |n: usize, c: usize| -> Vec<VertexId> {
        info[n][c].order.iter().copied().filter(|&v| an.distance(v) == Some(n + 1)).collect()
    };
    let rep_boundary: Vec<Vec<VertexId>> = first_of_class.iter().map(|&(n, c)| boundary_order(n, c)).collect();
    let pair_with_rep = |n: usize, c: usize| -> (Vec<VertexId>, Vec<usize>) {
        let b = boundary_order(n, c);
        let image = (0..b.len()).collect();
        (b, image)
    };
    let mut root_successors = Vec::new();
    {
        let mut slots: Vec<(usize, VertexId, usize)> =
            (0..levels[0].cones.len()).map(|c| (info[0][c].class, levels[0].cones[c].boundary[0], c)).collect();
        slots.sort_unstable();
        let mut counter: HashMap<usize, usize> = HashMap::new();
        for (class, _, c) in slots {
            let k = counter.entry(class).or_default();
            *k += 1;
            let (boundary, image) = pair_with_rep(0, c);
            root_successors.push((c, SuccessorSlot { class, index: *k, boundary, image }));
        }
    }
    let mut representatives = Vec::with_capacity(first_of_class.len());
    for (j, &(n, c)) in first_of_class.iter().enumerate() {
        let position: HashMap<VertexId, usize> =
            info[n][c].order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut slots: Vec<(usize, usize, usize)> = successors_of(n, c)
            .into_iter()
            .map(|d| {
                let key = levels[n + 1].cones[d].boundary.iter().map(|v| position[v]).min().unwrap();
                (info[n + 1][d].class, key, d)
            })
            .collect();
        slots.sort_unstable();
        let mut counter: HashMap<usize, usize> = HashMap::new();
        let mut successors = Vec::with_capacity(slots.len());
        for (class, _, d) in slots {
            let k = counter.entry(class).or_default();
            *k += 1;
            let (boundary, image) = pair_with_rep(n + 1, d);
            successors.push(SuccessorSlot { class, index: *k, boundary, image });
        }
        let (code, _) = an.code(&levels[n].cones[c], depth)?;
        representatives.push(Representative {
            class: j + 1,
            level: n,
            boundary: rep_boundary[j].clone(),
            code,
            successors,
        });
    }

    // Transport check: φ_C = ι ∘ φ_P on every boundary up to level max_radius + 1.
    let mut phi: BTreeMap<VertexId, (usize, usize)> = BTreeMap::new();
    let mut tau: BTreeMap<VertexId, Tau> = BTreeMap::new();
    for &x in centers {
        phi.insert(x, (0, 0));
    }
    for (c, slot) in &root_successors {
        let canonical = boundary_order(0, *c);
        for (p, &v) in canonical.iter().enumerate() {
            phi.insert(v, (slot.class, p));
            tau.insert(v, Tau { from: 0, to: slot.class, index: slot.index });
        }
    }
    for n in 1..=top {
        for (c, cone) in levels[n].cones.iter().enumerate() {
            let parent = levels[n - 1].comp_of[cone.boundary[0].index()] as usize;
            let i = info[n - 1][parent].class;
            let j = info[n][c].class;
            let parent_order = &info[n - 1][parent].order;
            let (rn, rc) = first_of_class[i - 1];
            let rep_order = &info[rn][rc].order;
            // positional pairing of the parent's truncation with its representative's
            let image_in_rep: HashMap<VertexId, VertexId> =
                parent_order.iter().zip(rep_order.iter()).map(|(&a, &b)| (a, b)).collect();
            let rep = &representatives[i - 1];
            let mut matched: Option<&SuccessorSlot> = None;
            let canonical = boundary_order(n, c);
            let mut consistent = true;
            for (p, v) in canonical.iter().enumerate() {
                let Some(&w) = image_in_rep.get(v) else {
                    consistent = false;
                    break;
                };
                let Some(slot) = rep.successors.iter().find(|s| s.boundary.contains(&w)) else {
                    consistent = false;
                    break;
                };
                if matched.is_some_and(|m| !std::ptr::eq(m, slot)) || slot.class != j || slot.image_of(w) != Some(p) {
                    consistent = false;
                    break;
                }
                matched = Some(slot);
            }
            let matched = matched.filter(|m| consistent && m.boundary.len() == canonical.len());
            let Some(slot) = matched else {
                return Ok(unstable(format!(
                    "boundary pairing of a level-{n} cone of type {j} is not transported consistently from type {i}"
                )));
            };
            for (p, &v) in canonical.iter().enumerate() {
                phi.insert(v, (j, p));
                tau.insert(v, Tau { from: i, to: j, index: slot.index });
            }
        }
    }

    Ok(ConeTypeTable {
        status: Certificate::Certified { depth },
        centers: centers.to_vec(),
        max_radius,
        depth,
        cones_per_level,
        growth,
        representatives,
        root_successors: root_successors.into_iter().map(|(_, s)| s).collect(),
        phi,
        tau,
        distance: an.distances().to_vec(),
    })
}

/// `diam(∂C_i) ≤ bound` for every representative, measured in the explored graph.
pub fn boundary_diameter_check(table: &ConeTypeTable, g: &LabelledGraph, bound: usize) -> Result<bool> {
    if !table.is_certified() {
        return Err(Error::NotCertified("boundary diameters need a certified table".into()));
    }
    for rep in &table.representatives {
        for &x in &rep.boundary {
            let d = g.distances_from(&[x]);
            for &y in &rep.boundary {
                match d[y.index()] {
                    Some(dd) if dd <= bound => {}
                    _ => return Ok(false),
                }
            }
        }
    }
    Ok(true)
}
