//! Normalized lengths, clusterings and admissible systems of slits for finite
//! point sets, with a constructive upper bound on the cluster diameter.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::Piece;
use crate::error::{Error, Result};

type C = Complex64;

const DEGENERATE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: C,
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: C,
    pub b: C,
}

impl Circle {
    pub fn piece(&self) -> Piece {
        Piece::Arc { center: self.center, radius: self.radius, start: 0.0, sweep: 2.0 * PI }
    }

    fn contains_circle(&self, o: &Circle) -> bool {
        (self.center - o.center).norm() < self.radius - o.radius
    }

    fn contains_point(&self, p: C) -> bool {
        (p - self.center).norm() < self.radius
    }
}

impl Segment {
    pub fn piece(&self) -> Piece {
        Piece::Segment { a: self.a, b: self.b }
    }

    fn length(&self) -> f64 {
        (self.b - self.a).norm()
    }
}

fn distance_to_set(piece: &Piece, t: &[C]) -> f64 {
    t.iter().map(|&p| piece.distance(p)).fold(f64::INFINITY, f64::min)
}

/// `|γ|/(2π·dist(γ,T))` for arcs, `|γ|/dist(γ,T)` for segments.
pub fn normalized_length(arc: &Piece, t: &[C]) -> Result<f64> {
    let d = distance_to_set(arc, t);
    let scale = arc.length().max(arc.start().norm()).max(1.0);
    if d <= DEGENERATE * scale {
        return Err(Error::InvalidInput("arc meets the point set".into()));
    }
    Ok(match arc {
        Piece::Arc { .. } => arc.length() / (2.0 * PI * d),
        Piece::Segment { .. } => arc.length() / d,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Boundary {
    Circle { id: usize },
    Point { at: C },
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum RegionKind {
    /// `faces` simply connected pieces (more than one when segments close cycles).
    SimplyConnected {
        faces: usize,
    },
    Annulus {
        outer: Boundary,
        inner: Boundary,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub id: usize,
    /// Innermost circle containing the region; `None` for the exterior.
    pub container: Option<usize>,
    /// Circles immediately inside the container.
    pub children: Vec<usize>,
    pub segments: Vec<usize>,
    pub kind: RegionKind,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlitSystem {
    pub points: Vec<C>,
    pub circles: Vec<Circle>,
    pub segments: Vec<Segment>,
    pub regions: Vec<Region>,
}

impl SlitSystem {
    pub fn normalized_length(&self) -> Result<f64> {
        let mut total = 0.0;
        for c in &self.circles {
            total += normalized_length(&c.piece(), &self.points)?;
        }
        for s in &self.segments {
            total += normalized_length(&s.piece(), &self.points)?;
        }
        Ok(total)
    }

    /// Normalized length of every circle, in order.
    pub fn circle_lengths(&self) -> Result<Vec<f64>> {
        self.circles.iter().map(|c| normalized_length(&c.piece(), &self.points)).collect()
    }
}

fn scale_of(t: &[C], circles: &[Circle]) -> f64 {
    t.iter().map(|p| p.norm()).chain(circles.iter().map(|c| c.center.norm() + c.radius)).fold(1.0, f64::max)
}

/// Parameters `s ∈ (0,1)` where the segment meets the circle.
fn segment_circle_hits(s: &Segment, c: &Circle) -> Vec<f64> {
    let d = s.b - s.a;
    let f = s.a - c.center;
    let a = d.norm_sqr();
    let b = 2.0 * (f * d.conj()).re;
    let cc = f.norm_sqr() - c.radius * c.radius;
    let disc = b * b - 4.0 * a * cc;
    if disc < 0.0 || a == 0.0 {
        return Vec::new();
    }
    let q = disc.sqrt();
    vec![(-b - q) / (2.0 * a), (-b + q) / (2.0 * a)]
}

fn on_circle(p: C, c: &Circle, tol: f64) -> bool {
    ((p - c.center).norm() - c.radius).abs() <= tol
}

fn cross(a: C, b: C) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Whether two segments meet anywhere other than a shared endpoint.
fn segments_meet(s: &Segment, o: &Segment, tol: f64) -> bool {
    let shared = [(s.a, o.a), (s.a, o.b), (s.b, o.a), (s.b, o.b)].iter().any(|(p, q)| (p - q).norm() <= tol);
    let d1 = s.b - s.a;
    let d2 = o.b - o.a;
    let den = cross(d1, d2);
    if den.abs() <= f64::EPSILON * d1.norm() * d2.norm() {
        // parallel: overlapping only if collinear and intervals intersect
        if cross(d1, o.a - s.a).abs() > tol * d1.norm() {
            return false;
        }
        let l = d1.norm_sqr();
        let t0 = ((o.a - s.a) * d1.conj()).re / l;
        let t1 = ((o.b - s.a) * d1.conj()).re / l;
        let (lo, hi) = (t0.min(t1), t0.max(t1));
        let overlap = hi.min(1.0) - lo.max(0.0);
        return overlap > tol / d1.norm() || (!shared && overlap >= 0.0);
    }
    let u = cross(o.a - s.a, d2) / den;
    let v = cross(o.a - s.a, d1) / den;
    let eps = tol / d1.norm().max(d2.norm());
    if u < -eps || u > 1.0 + eps || v < -eps || v > 1.0 + eps {
        return false;
    }
    let at = s.a + d1 * u;
    !(shared && [s.a, s.b].iter().any(|p| (p - at).norm() <= tol * 10.0))
}

/// Region structure of the complement of circles and segments, from the
/// nesting forest and segment adjacency. `Err` carries the reason the system
/// is not admissible.
pub fn classify(t: &[C], circles: &[Circle], segments: &[Segment]) -> std::result::Result<Vec<Region>, String> {
    let tol = DEGENERATE * scale_of(t, circles);
    for (i, c) in circles.iter().enumerate() {
        if c.radius <= tol {
            return Err(format!("circle {i} has nonpositive radius"));
        }
        if t.iter().any(|&p| ((p - c.center).norm() - c.radius).abs() <= tol) {
            return Err(format!("circle {i} passes through a point of T"));
        }
    }
    for i in 0..circles.len() {
        for j in 0..i {
            let (a, b) = (&circles[i], &circles[j]);
            let d = (a.center - b.center).norm();
            let separated = d > a.radius + b.radius + tol;
            let nested = d < (a.radius - b.radius).abs() - tol;
            if !separated && !nested {
                return Err(format!("circles {j} and {i} intersect"));
            }
        }
    }
    // container of a point / circle = innermost circle containing it
    let innermost = |pred: &dyn Fn(&Circle) -> bool| -> Option<usize> {
        circles.iter().enumerate().filter(|(_, c)| pred(c)).min_by(|a, b| a.1.radius.total_cmp(&b.1.radius)).map(|(i, _)| i)
    };
    let parent: Vec<Option<usize>> = circles.iter().map(|c| innermost(&|o: &Circle| o.contains_circle(c))).collect();
    let mut seg_region = Vec::with_capacity(segments.len());
    let mut seg_ends = Vec::with_capacity(segments.len());
    for (k, s) in segments.iter().enumerate() {
        if s.length() <= tol {
            return Err(format!("segment {k} is degenerate"));
        }
        if t.iter().any(|&p| s.piece().distance(p) <= tol) {
            return Err(format!("segment {k} passes through a point of T"));
        }
        let end_circle = |p: C| circles.iter().position(|c| on_circle(p, c, tol * 1e3));
        let (Some(ea), Some(eb)) = (end_circle(s.a), end_circle(s.b)) else {
            return Err(format!("segment {k} does not end on circles"));
        };
        for (i, c) in circles.iter().enumerate() {
            let margin = tol * 1e3 / s.length();
            if segment_circle_hits(s, c).iter().any(|&u| u > margin && u < 1.0 - margin) {
                return Err(format!("segment {k} crosses circle {i}"));
            }
        }
        for (j, o) in segments.iter().enumerate().take(k) {
            if segments_meet(s, o, tol * 1e3) {
                return Err(format!("segments {j} and {k} meet"));
            }
        }
        let mid = (s.a + s.b) * 0.5;
        let region = innermost(&|c: &Circle| c.contains_point(mid));
        let boundary_of = |e: usize| Some(e) == region || parent[e] == region;
        if !boundary_of(ea) || !boundary_of(eb) {
            return Err(format!("segment {k} joins circles that do not bound one region"));
        }
        seg_region.push(region);
        seg_ends.push((ea, eb));
    }

    let mut nodes: Vec<Option<usize>> = vec![None];
    nodes.extend((0..circles.len()).map(Some));
    let mut regions = Vec::new();
    for node in nodes {
        let children: Vec<usize> = (0..circles.len()).filter(|&i| parent[i] == node).collect();
        let segs: Vec<usize> = (0..segments.len()).filter(|&k| seg_region[k] == node).collect();
        let punctures: Vec<C> = t.iter().copied().filter(|&p| innermost(&|c: &Circle| c.contains_point(p)) == node).collect();
        let verts: Vec<usize> = node.into_iter().chain(children.iter().copied()).collect();
        let mut label: Vec<usize> = (0..verts.len()).collect();
        let find = |label: &Vec<usize>, mut x: usize| {
            while label[x] != x {
                x = label[x];
            }
            x
        };
        for &k in &segs {
            let (a, b) = seg_ends[k];
            let ia = verts.iter().position(|&v| v == a).unwrap();
            let ib = verts.iter().position(|&v| v == b).unwrap();
            let (ra, rb) = (find(&label, ia), find(&label, ib));
            label[ra] = rb;
        }
        let components = (0..verts.len()).filter(|&i| find(&label, i) == i).count();
        let cycles = segs.len() + components - verts.len();
        let holes = components + punctures.len() + usize::from(node.is_none());
        let kind = match (holes, node) {
            (1, Some(_)) => RegionKind::SimplyConnected { faces: 1 + cycles },
            (2, _) if segs.is_empty() => {
                let mut ends: Vec<Boundary> = verts.iter().map(|&id| Boundary::Circle { id }).collect();
                ends.extend(punctures.iter().map(|&at| Boundary::Point { at }));
                if node.is_none() {
                    ends.insert(0, Boundary::Infinity);
                }
                RegionKind::Annulus { outer: ends[0].clone(), inner: ends[1].clone() }
            }
            (0, _) => continue,
            _ => {
                let name = node.map(|i| format!("inside circle {i}")).unwrap_or_else(|| "exterior".into());
                return Err(format!("region {name} has {holes} boundary components"));
            }
        };
        regions.push(Region { id: regions.len(), container: node, children, segments: segs, kind });
    }
    Ok(regions)
}

pub fn is_admissible(s: &SlitSystem) -> bool {
    classify(&s.points, &s.circles, &s.segments).is_ok()
}

#[derive(Clone, Debug)]
pub struct SlitConfig {
    /// A group `G` forms a cluster when `diam G < θ·dist(G, rest)`.
    pub theta: f64,
    /// Child circle radius as a fraction of its separation.
    pub radius_fraction: f64,
    /// Directions tried for each connecting segment.
    pub directions: usize,
}

impl Default for SlitConfig {
    fn default() -> Self {
        SlitConfig { theta: 0.1, radius_fraction: 1.0 / 3.0, directions: 64 }
    }
}

fn centroid(pts: &[C]) -> C {
    pts.iter().sum::<C>() / pts.len() as f64
}

fn diameter(pts: &[C]) -> f64 {
    let mut d: f64 = 0.0;
    for i in 0..pts.len() {
        for j in 0..i {
            d = d.max((pts[i] - pts[j]).norm());
        }
    }
    d
}

fn set_distance(a: &[C], b: &[C]) -> f64 {
    a.iter().flat_map(|p| b.iter().map(move |q| (p - q).norm())).fold(f64::INFINITY, f64::min)
}

/// Maximal proper subsets `G`, `|G| ≥ 2`, with `diam G < θ·dist(G, S∖G)`.
/// Every such set is a single-linkage component, so only those are tested.
fn clusters(s: &[C], theta: f64) -> Vec<Vec<usize>> {
    let n = s.len();
    let mut cand: Vec<Vec<usize>> = Vec::new();
    let mut dists: Vec<f64> = Vec::new();
    for i in 0..n {
        for j in 0..i {
            dists.push((s[i] - s[j]).norm());
        }
    }
    dists.sort_by(f64::total_cmp);
    dists.dedup();
    for &h in &dists {
        // components of the graph with edges of length <= h
        let mut label: Vec<usize> = (0..n).collect();
        for i in 0..n {
            for j in 0..i {
                if (s[i] - s[j]).norm() <= h {
                    let (a, b) = (label[i], label[j]);
                    if a != b {
                        for l in label.iter_mut() {
                            if *l == a {
                                *l = b;
                            }
                        }
                    }
                }
            }
        }
        for root in 0..n {
            let g: Vec<usize> = (0..n).filter(|&i| label[i] == label[root]).collect();
            if g[0] != root || g.len() < 2 || g.len() == n || cand.contains(&g) {
                continue;
            }
            let inside: Vec<C> = g.iter().map(|&i| s[i]).collect();
            let rest: Vec<C> = (0..n).filter(|i| !g.contains(i)).map(|i| s[i]).collect();
            if diameter(&inside) < theta * set_distance(&inside, &rest) {
                cand.push(g);
            }
        }
    }
    let maximal: Vec<Vec<usize>> =
        cand.iter().filter(|g| !cand.iter().any(|h| h.len() > g.len() && g.iter().all(|x| h.contains(x)))).cloned().collect();
    maximal
}

/// The hierarchical construction: an outer circle, circles around single
/// points, and for each scale separated cluster a separation circle with a
/// concentric inner circle enclosing the cluster at its own scale. Every
/// circle except inner ones gets a segment to the circle containing it.
pub fn build_slits(t: &[C], cfg: &SlitConfig) -> Result<SlitSystem> {
    if t.is_empty() {
        return Err(Error::InvalidInput("empty point set".into()));
    }
    for i in 0..t.len() {
        for j in 0..i {
            if (t[i] - t[j]).norm() <= DEGENERATE * scale_of(t, &[]) {
                return Err(Error::InvalidInput("points are not distinct".into()));
            }
        }
    }
    let c0 = centroid(t);
    let r0 = if t.len() == 1 { 1.0 } else { t.iter().map(|p| (p - c0).norm()).fold(0.0, f64::max) + diameter(t) };
    let mut circles = vec![Circle { center: c0, radius: r0 }];
    let mut tree: Vec<(usize, usize)> = Vec::new();
    let all: Vec<usize> = (0..t.len()).collect();
    subdivide(t, &all, 0, cfg, &mut circles, &mut tree);
    let mut segments = Vec::new();
    for parent in 0..circles.len() {
        let kids: Vec<usize> = tree.iter().filter(|e| e.0 == parent).map(|e| e.1).collect();
        for &k in &kids {
            if let Some(s) = connect(t, &circles, parent, k, &kids, &segments, cfg) {
                segments.push(s);
            }
        }
    }
    let regions = classify(t, &circles, &segments).map_err(|e| Error::Unsupported(format!("construction failed: {e}")))?;
    Ok(SlitSystem { points: t.to_vec(), circles, segments, regions })
}

fn subdivide(t: &[C], idx: &[usize], parent: usize, cfg: &SlitConfig, circles: &mut Vec<Circle>, tree: &mut Vec<(usize, usize)>) {
    let pts: Vec<C> = idx.iter().map(|&i| t[i]).collect();
    let groups = clusters(&pts, cfg.theta);
    let grouped: Vec<usize> = groups.iter().flatten().copied().collect();
    let mut children: Vec<(Circle, Option<Vec<usize>>)> = Vec::new();
    for (i, &p) in pts.iter().enumerate() {
        if grouped.contains(&i) {
            continue;
        }
        let others: Vec<C> = pts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &q)| q).collect();
        let sep =
            if others.is_empty() { circles[parent].radius - (p - circles[parent].center).norm() } else { set_distance(&[p], &others) };
        children.push((Circle { center: p, radius: cfg.radius_fraction * sep }, None));
    }
    for g in &groups {
        let inside: Vec<C> = g.iter().map(|&i| pts[i]).collect();
        let rest: Vec<C> = (0..pts.len()).filter(|i| !g.contains(i)).map(|i| pts[i]).collect();
        let c = centroid(&inside);
        let m = inside.iter().map(|p| (p - c).norm()).fold(0.0, f64::max);
        let sep = set_distance(&inside, &rest);
        children.push((Circle { center: c, radius: m + cfg.radius_fraction * sep }, Some(g.iter().map(|&i| idx[i]).collect())));
    }
    // shrink cluster margins until siblings are disjoint
    for _ in 0..60 {
        let mut clash = false;
        for i in 0..children.len() {
            for j in 0..i {
                let (a, b) = (children[i].0, children[j].0);
                if (a.center - b.center).norm() <= (a.radius + b.radius) * (1.0 + 1e-9) {
                    clash = true;
                    for k in [i, j] {
                        if children[k].1.is_some() {
                            let c = children[k].0.center;
                            let m = children[k].1.as_ref().unwrap().iter().map(|&q| (t[q] - c).norm()).fold(0.0, f64::max);
                            children[k].0.radius = m + 0.8 * (children[k].0.radius - m);
                        }
                    }
                }
            }
        }
        if !clash {
            break;
        }
    }
    for (circle, group) in children {
        circles.push(circle);
        let id = circles.len() - 1;
        tree.push((parent, id));
        if let Some(g) = group {
            // inner circle at the scale of the cluster itself, bounding an
            // unslit annulus with the separation circle
            let inside: Vec<C> = g.iter().map(|&i| t[i]).collect();
            let m = inside.iter().map(|p| (p - circle.center).norm()).fold(0.0, f64::max);
            circles.push(Circle { center: circle.center, radius: m + diameter(&inside) });
            let inner = circles.len() - 1;
            subdivide(t, &g, inner, cfg, circles, tree);
        }
    }
}

/// Radial-ish segments from `child` out to `parent` over `cfg.directions`
/// directions, by increasing normalized length.
fn candidates(t: &[C], p: &Circle, c: &Circle, cfg: &SlitConfig) -> Vec<(f64, Segment)> {
    let v = c.center - p.center;
    let base = if v.norm() > DEGENERATE * p.radius { v.arg() } else { 0.0 };
    let tol = DEGENERATE * scale_of(t, &[*p]);
    let mut out = Vec::new();
    for k in 0..cfg.directions {
        let phi = base + k as f64 * 2.0 * PI / cfg.directions as f64;
        let u = C::from_polar(1.0, phi);
        let a = c.center + u * c.radius;
        // exit through the container: |a + s·u − p.center| = p.radius
        let f = a - p.center;
        let bq = (f * u.conj()).re;
        let disc = bq * bq - (f.norm_sqr() - p.radius * p.radius);
        if disc < 0.0 {
            continue;
        }
        let s_exit = -bq + disc.sqrt();
        if s_exit <= tol {
            continue;
        }
        let seg = Segment { a, b: a + u * s_exit };
        if let Ok(len) = normalized_length(&seg.piece(), t) {
            out.push((len, seg));
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

fn clear_of(seg: &Segment, circles: &[Circle], others: impl Iterator<Item = usize>, placed: &[Segment], tol: f64) -> bool {
    others.into_iter().all(|j| seg.piece().distance(circles[j].center) > circles[j].radius * (1.0 + 1e-9))
        && !placed.iter().any(|o| segments_meet(seg, o, tol))
}

/// Segment from circle `child` to its container minimizing normalized length
/// among directions that avoid the siblings and the segments already placed.
fn connect(
    t: &[C],
    circles: &[Circle],
    parent: usize,
    child: usize,
    siblings: &[usize],
    placed: &[Segment],
    cfg: &SlitConfig,
) -> Option<Segment> {
    let tol = DEGENERATE * scale_of(t, circles) * 1e3;
    candidates(t, &circles[parent], &circles[child], cfg)
        .into_iter()
        .map(|(_, s)| s)
        .find(|s| clear_of(s, circles, siblings.iter().copied().filter(|&j| j != child), placed, tol))
}

/// Total normalized length of [`build_slits`]; an upper bound for the cluster
/// diameter with at most `c_max` circles.
pub fn cluster_diameter_upper(t: &[C], c_max: usize, cfg: &SlitConfig) -> Result<f64> {
    if c_max < 3 * t.len() {
        return Err(Error::Unsupported(format!("c_max = {c_max} is below 3·|T| = {}", 3 * t.len())));
    }
    let s = build_slits(t, cfg)?;
    if s.circles.len() > c_max {
        return Err(Error::Unsupported(format!("construction used {} circles", s.circles.len())));
    }
    s.normalized_length()
}

/// Grid resolution for the brute force search: `2^level + 1` samples per
/// coordinate; refining the level refines every grid.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub level: u32,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { level: 3 }
    }
}

/// Smallest normalized length over admissible systems with at most `c`
/// circles whose circles come from a grid: one circle per point centred at
/// it, plus an outer circle joined to each of them when `|T| ≥ 2`. Returns
/// `+∞` when no such system exists.
pub fn brute_force_cluster_diameter(t: &[C], c: usize, grid: GridSpec) -> Result<f64> {
    if t.len() > 3 || c > 4 {
        return Err(Error::Unsupported("brute force is limited to |T| <= 3 and c <= 4".into()));
    }
    if t.is_empty() {
        return Ok(0.0);
    }
    if c < t.len() || (t.len() >= 2 && c < t.len() + 1) {
        return Ok(f64::INFINITY);
    }
    if t.len() == 1 {
        // any circle centred at the point; normalized length 1
        let circ = Circle { center: t[0], radius: 1.0 };
        return normalized_length(&circ.piece(), t);
    }
    let n = 1usize << grid.level;
    let diam = diameter(t);
    let nn: Vec<f64> = t
        .iter()
        .enumerate()
        .map(|(i, p)| t.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| (p - q).norm()).fold(f64::INFINITY, f64::min))
        .collect();
    let fractions: Vec<f64> = (1..=n).map(|j| 0.49 * j as f64 / n as f64).collect();
    let c0 = centroid(t);
    let centers: Vec<C> = (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (i, j)))
        .map(|(i, j)| c0 + C::new(-1.0 + 2.0 * i as f64 / n as f64, -1.0 + 2.0 * j as f64 / n as f64) * diam)
        .collect();
    let radii: Vec<f64> = (0..=n).map(|j| diam * 0.5 * 8f64.powf(j as f64 / n as f64)).collect();
    let leaf_choices: Vec<Vec<usize>> = {
        let mut v = vec![Vec::new()];
        for _ in 0..t.len() {
            v = v.into_iter().flat_map(|p| (0..fractions.len()).map(move |f| [p.clone(), vec![f]].concat())).collect();
        }
        v
    };
    let cfg = SlitConfig::default();
    let tol = DEGENERATE * scale_of(t, &[]) * 1e3;
    let best = centers
        .par_iter()
        .map(|&oc| {
            let mut best: (f64, Option<(Vec<Circle>, Vec<Segment>)>) = (f64::INFINITY, None);
            for &or in &radii {
                let outer = Circle { center: oc, radius: or };
                // per point and radius: the leaf, its candidates, or None if it sticks out
                let leaves: Vec<Vec<Option<(Circle, Vec<(f64, Segment)>)>>> = t
                    .iter()
                    .zip(&nn)
                    .map(|(&p, &d)| {
                        fractions
                            .iter()
                            .map(|&f| {
                                let leaf = Circle { center: p, radius: f * d };
                                outer.contains_circle(&leaf).then(|| (leaf, candidates(t, &outer, &leaf, &cfg)))
                            })
                            .collect()
                    })
                    .collect();
                let outer_len = match normalized_length(&outer.piece(), t) {
                    Ok(v) => v,
                    Err(_) => continue,
                };
                'combo: for lc in &leaf_choices {
                    let mut circles = vec![outer];
                    for (i, &f) in lc.iter().enumerate() {
                        match &leaves[i][f] {
                            Some((leaf, _)) => circles.push(*leaf),
                            None => continue 'combo,
                        }
                    }
                    // every leaf is centred at its point, so has normalized length 1
                    let mut total = outer_len + t.len() as f64;
                    let mut segs = Vec::with_capacity(t.len());
                    for (i, &f) in lc.iter().enumerate() {
                        if total >= best.0 {
                            continue 'combo;
                        }
                        let cands = &leaves[i][f].as_ref().unwrap().1;
                        let others = (1..circles.len()).filter(|&j| j != i + 1);
                        let Some((len, seg)) = cands.iter().find(|(_, s)| clear_of(s, &circles, others.clone(), &segs, tol)) else {
                            continue 'combo;
                        };
                        total += len;
                        segs.push(*seg);
                    }
                    if total < best.0 {
                        best = (total, Some((circles, segs)));
                    }
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, None), |a, b| if b.0 < a.0 { b } else { a });
    if let (_, Some((circles, segs))) = &best {
        debug_assert!(classify(t, circles, segs).is_ok());
    }
    Ok(best.0)
}

/// SVG 1.1 drawing of the slit system, scaled to fit `size` pixels.
pub fn to_svg(s: &SlitSystem, size: f64) -> String {
    let (mut lo, mut hi) = (C::new(f64::INFINITY, f64::INFINITY), C::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for c in &s.circles {
        lo = C::new(lo.re.min(c.center.re - c.radius), lo.im.min(c.center.im - c.radius));
        hi = C::new(hi.re.max(c.center.re + c.radius), hi.im.max(c.center.im + c.radius));
    }
    for p in &s.points {
        lo = C::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = C::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(f64::MIN_POSITIVE) * 1.1;
    let mid = (lo + hi) * 0.5;
    let k = size / span;
    let x = |p: C| (p.re - mid.re) * k + size / 2.0;
    let y = |p: C| size / 2.0 - (p.im - mid.im) * k;
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size:.0}" height="{size:.0}" viewBox="0 0 {size:.0} {size:.0}">"#
    );
    for (i, c) in s.circles.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"  <circle id="c{i}" cx="{:.4}" cy="{:.4}" r="{:.4}" fill="none" stroke="black" stroke-width="1"/>"#,
            x(c.center),
            y(c.center),
            c.radius * k
        );
    }
    for (i, g) in s.segments.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"  <line id="s{i}" x1="{:.4}" y1="{:.4}" x2="{:.4}" y2="{:.4}" stroke="blue" stroke-width="1"/>"#,
            x(g.a),
            y(g.a),
            x(g.b),
            y(g.b)
        );
    }
    for p in &s.points {
        let _ = writeln!(out, r#"  <circle cx="{:.4}" cy="{:.4}" r="2.5" fill="red"/>"#, x(*p), y(*p));
    }
    for r in &s.regions {
        let (tag, at) = match (&r.kind, r.container) {
            (RegionKind::SimplyConnected { .. }, Some(c)) => ("S", s.circles[c].center),
            (RegionKind::Annulus { .. }, Some(c)) => ("A", s.circles[c].center),
            (RegionKind::SimplyConnected { .. }, None) => ("S", lo),
            (RegionKind::Annulus { .. }, None) => ("A", lo),
        };
        let label_at = match r.container {
            Some(c) => at + C::new(0.0, 0.85 * s.circles[c].radius),
            None => at,
        };
        let _ = writeln!(
            out,
            r#"  <text x="{:.4}" y="{:.4}" font-size="10" fill="gray">{tag}{}</text>"#,
            x(label_at),
            y(label_at) + 10.0,
            r.id
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Counterclockwise boundary of a simply connected region whose segments each
/// join the container to a distinct child circle: arcs of the container
/// between segment feet, and for each segment a detour in, around the child
/// clockwise, and back out.
pub fn region_boundary(s: &SlitSystem, region: &Region) -> Result<crate::analytic::ContourPath> {
    use crate::analytic::ContourPath;
    if !matches!(region.kind, RegionKind::SimplyConnected { faces: 1 }) {
        return Err(Error::Unsupported("boundary tracing needs a single simply connected face".into()));
    }
    let x = region.container.ok_or_else(|| Error::Unsupported("exterior region is not simply connected".into()))?;
    let outer = s.circles[x];
    if region.children.is_empty() {
        return Ok(ContourPath::circle(outer.center, outer.radius));
    }
    let tol = 1e-9 * scale_of(&s.points, &s.circles);
    // (angle of the foot on the container, foot, point on the child, child)
    let mut feet = Vec::new();
    for &k in &region.segments {
        let g = s.segments[k];
        let (foot, other) = if on_circle(g.a, &outer, tol) { (g.a, g.b) } else { (g.b, g.a) };
        let child = region
            .children
            .iter()
            .copied()
            .find(|&c| on_circle(other, &s.circles[c], tol))
            .ok_or_else(|| Error::Unsupported("segment does not join the container to a child".into()))?;
        feet.push(((foot - outer.center).arg(), foot, other, child));
    }
    let mut used: Vec<usize> = feet.iter().map(|f| f.3).collect();
    used.sort();
    used.dedup();
    if used.len() != feet.len() || used.len() != region.children.len() {
        return Err(Error::Unsupported("each child needs exactly one segment to the container".into()));
    }
    feet.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut pieces = Vec::new();
    let m = feet.len();
    for i in 0..m {
        let (theta, foot, end, child) = feet[i];
        let ch = s.circles[child];
        pieces.push(Piece::Segment { a: foot, b: end });
        pieces.push(Piece::Arc { center: ch.center, radius: ch.radius, start: (end - ch.center).arg(), sweep: -2.0 * PI });
        pieces.push(Piece::Segment { a: end, b: foot });
        let next = if i + 1 < m { feet[i + 1].0 } else { feet[0].0 + 2.0 * PI };
        pieces.push(Piece::Arc { center: outer.center, radius: outer.radius, start: theta, sweep: next - theta });
    }
    ContourPath::new(pieces)
}
