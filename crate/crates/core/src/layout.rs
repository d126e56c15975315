//! Planar layouts of coupling graphs and two-dimensional accessibility.
//!
//! A qubit is accessible when a straight wire can leave its position and reach
//! infinity without crossing a coupling segment.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// One edge per unordered qubit pair sharing a two-qubit gate, as `(lo, hi)`.
pub fn connectivity_graph(c: &Circuit) -> BTreeSet<(usize, usize)> {
    c.connectivity()
}

/// Straight-line embedding of a coupling graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout<T: Real> {
    positions: Vec<[T; 2]>,
    edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AccessibilityReport {
    pub total: usize,
    pub inaccessible: Vec<usize>,
    pub accessible: usize,
}

impl<T: Real> Layout<T> {
    /// Checks indices, distinct positions and planarity of the embedding.
    pub fn new(
        positions: Vec<[T; 2]>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = positions.len();
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for q in [a, b] {
                if q >= n {
                    return Err(Error::QubitOutOfRange { index: q, n });
                }
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop on qubit {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        for i in 0..n {
            for j in i + 1..n {
                if dist2(positions[i], positions[j]) <= T::GEOM_EPS * T::GEOM_EPS {
                    return Err(Error::InvalidArgument(format!(
                        "qubits {i} and {j} share a position"
                    )));
                }
            }
        }
        let l = Layout {
            positions,
            edges: set.into_iter().collect(),
        };
        l.check_planar()?;
        Ok(l)
    }

    /// Layout of a circuit's connectivity at the circuit's stored positions.
    pub fn from_circuit(c: &Circuit) -> Result<Self> {
        let pos = c
            .positions()
            .ok_or_else(|| Error::InvalidArgument("circuit has no qubit positions".into()))?;
        let pos = pos.iter().map(|p| [T::lit(p[0]), T::lit(p[1])]).collect();
        Self::new(pos, connectivity_graph(c))
    }

    pub fn num_qubits(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[[T; 2]] {
        &self.positions
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Applies `p -> scale * R(angle) p + shift` to every position.
    pub fn transformed(&self, angle: T, scale: T, shift: [T; 2]) -> Self {
        let (s, c) = angle.sin_cos();
        let positions = self
            .positions
            .iter()
            .map(|p| {
                [
                    scale * (c * p[0] - s * p[1]) + shift[0],
                    scale * (s * p[0] + c * p[1]) + shift[1],
                ]
            })
            .collect();
        Layout {
            positions,
            edges: self.edges.clone(),
        }
    }

    fn segment(&self, e: (usize, usize)) -> ([T; 2], [T; 2]) {
        (self.positions[e.0], self.positions[e.1])
    }

    fn check_planar(&self) -> Result<()> {
        let eps = T::GEOM_EPS;
        for (i, &e) in self.edges.iter().enumerate() {
            let (a, b) = self.segment(e);
            for &f in &self.edges[i + 1..] {
                let (c, d) = self.segment(f);
                let shared = e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1;
                let bad = if shared {
                    // Only an overlap along a common line is a crossing here.
                    let (p, q, r) = if e.0 == f.0 || e.0 == f.1 {
                        (a, b, if e.0 == f.0 { d } else { c })
                    } else {
                        (b, a, if e.1 == f.0 { d } else { c })
                    };
                    let u = sub(q, p);
                    let v = sub(r, p);
                    cross(u, v).abs() <= eps * norm(u) * norm(v) && dot(u, v) > T::zero()
                } else {
                    segments_touch(a, b, c, d, eps)
                };
                if bad {
                    return Err(Error::NonPlanar(e, f));
                }
            }
            for (q, &p) in self.positions.iter().enumerate() {
                if q != e.0 && q != e.1 && point_on_segment(p, a, b, eps) {
                    return Err(Error::NonPlanar(e, (q, q)));
                }
            }
        }
        Ok(())
    }

    fn ray_blocked(&self, q: usize, dir: [T; 2]) -> bool {
        let p = self.positions[q];
        let eps = T::GEOM_EPS;
        self.edges.iter().any(|&e| {
            let (a, b) = self.segment(e);
            if e.0 == q || e.1 == q {
                let other = if e.0 == q { b } else { a };
                let v = sub(other, p);
                return cross(dir, v).abs() <= eps * norm(v) && dot(dir, v) > T::zero();
            }
            ray_hits_segment(p, dir, a, b, eps)
        })
    }

    /// Candidate escape directions: 360 whole degrees plus, for every segment
    /// endpoint, the exact direction towards it nudged by `±1e-6` rad.
    fn candidate_angles(&self, q: usize) -> Vec<T> {
        let mut out: Vec<T> = (0..360).map(|k| T::lit(k as f64).to_radians()).collect();
        let p = self.positions[q];
        let nudge = T::lit(1e-6);
        for (k, &r) in self.positions.iter().enumerate() {
            if k == q {
                continue;
            }
            let v = sub(r, p);
            let a = v[1].atan2(v[0]);
            out.extend([a, a - nudge, a + nudge]);
        }
        out
    }

    pub fn is_accessible(&self, q: usize) -> bool {
        self.candidate_angles(q).into_iter().any(|a| {
            let (s, c) = a.sin_cos();
            !self.ray_blocked(q, [c, s])
        })
    }

    pub fn accessibility(&self) -> AccessibilityReport {
        let inaccessible: Vec<usize> = (0..self.num_qubits())
            .filter(|&q| !self.is_accessible(q))
            .collect();
        AccessibilityReport {
            total: self.num_qubits(),
            accessible: self.num_qubits() - inaccessible.len(),
            inaccessible,
        }
    }

    /// SVG drawing: couplings as lines, qubits as labelled circles, enclosed
    /// qubits filled red.
    pub fn to_svg(&self, report: &AccessibilityReport) -> String {
        let unit = 60.0;
        let pts: Vec<[f64; 2]> = self
            .positions
            .iter()
            .map(|p| [p[0].as_f64(), -p[1].as_f64()])
            .collect();
        let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        if let Some(first) = pts.first() {
            (x0, y0, x1, y1) = (first[0], first[1], first[0], first[1]);
        }
        for p in &pts {
            x0 = x0.min(p[0]);
            y0 = y0.min(p[1]);
            x1 = x1.max(p[0]);
            y1 = y1.max(p[1]);
        }
        let pad = 1.0;
        let tx = |x: f64| (x - x0 + pad) * unit;
        let ty = |y: f64| (y - y0 + pad) * unit;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}">"#,
            (x1 - x0 + 2.0 * pad) * unit,
            (y1 - y0 + 2.0 * pad) * unit
        );
        for &(a, b) in &self.edges {
            let _ = writeln!(
                s,
                r#"  <line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#,
                tx(pts[a][0]),
                ty(pts[a][1]),
                tx(pts[b][0]),
                ty(pts[b][1])
            );
        }
        for (q, p) in pts.iter().enumerate() {
            let fill = if report.inaccessible.contains(&q) {
                "#e04040"
            } else {
                "white"
            };
            let _ = writeln!(
                s,
                r#"  <circle cx="{:.2}" cy="{:.2}" r="14" fill="{fill}" stroke="black"/>"#,
                tx(p[0]),
                ty(p[1])
            );
            let _ = writeln!(
                s,
                r#"  <text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle" dominant-baseline="central">{q}</text>"#,
                tx(p[0]),
                ty(p[1])
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Inaccessible-qubit counts of the distance-`d` standard surface code before
/// and after the CNOT+SWAP transformation: `((2d-3)^2, (2d-3)(2d-5))`.
pub fn formula_counts(d: usize) -> Result<(usize, usize)> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "distance must be odd and at least 3, got {d}"
        )));
    }
    Ok(((2 * d - 3) * (2 * d - 3), (2 * d - 3) * (2 * d - 5)))
}

fn dedges(f: &[usize; 4]) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..4).map(move |k| (f[k], f[(k + 1) % 4]))
}

fn sub<T: Real>(a: [T; 2], b: [T; 2]) -> [T; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn cross<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[1] - a[1] * b[0]
}

fn dot<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    a[0] * b[0] + a[1] * b[1]
}

fn norm<T: Real>(a: [T; 2]) -> T {
    dot(a, a).sqrt()
}

fn dist2<T: Real>(a: [T; 2], b: [T; 2]) -> T {
    let d = sub(a, b);
    dot(d, d)
}

fn point_on_segment<T: Real>(p: [T; 2], a: [T; 2], b: [T; 2], eps: T) -> bool {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len = norm(ab);
    if cross(ab, ap).abs() > eps * len {
        return false;
    }
    let t = dot(ap, ab) / (len * len);
    t >= -eps && t <= T::one() + eps
}

fn segments_touch<T: Real>(a: [T; 2], b: [T; 2], c: [T; 2], d: [T; 2], eps: T) -> bool {
    let r = sub(b, a);
    let s = sub(d, c);
    let den = cross(r, s);
    let ac = sub(c, a);
    if den.abs() <= eps * norm(r) * norm(s) {
        return point_on_segment(c, a, b, eps)
            || point_on_segment(d, a, b, eps)
            || point_on_segment(a, c, d, eps)
            || point_on_segment(b, c, d, eps);
    }
    let t = cross(ac, s) / den;
    let u = cross(ac, r) / den;
    let lo = -eps;
    let hi = T::one() + eps;
    t >= lo && t <= hi && u >= lo && u <= hi
}

/// Whether the ray `p + t dir`, `t > 0`, meets the closed segment `ab`.
fn ray_hits_segment<T: Real>(p: [T; 2], dir: [T; 2], a: [T; 2], b: [T; 2], eps: T) -> bool {
    let s = sub(b, a);
    let den = cross(dir, s);
    let pa = sub(a, p);
    if den.abs() <= eps * norm(s) {
        if cross(dir, pa).abs() > eps {
            return false;
        }
        return dot(pa, dir) > T::zero() || dot(sub(b, p), dir) > T::zero();
    }
    let t = cross(pa, s) / den;
    let u = cross(pa, dir) / den;
    t > eps && u >= -eps && u <= T::one() + eps
}

/// Unit-grid coordinates for a graph made of glued quadrilaterals.
///
/// Every 4-cycle is taken as a square face; faces are oriented coherently and
/// unit edge vectors are propagated face by face (each turn is a left turn).
/// Vertices on no face are hung half a unit from their neighbour, bisecting
/// the widest free angle.
pub fn develop_quad_mesh(n: usize, edges: &[(usize, usize)]) -> Result<Vec<[f64; 2]>> {
    let mut adj = vec![BTreeSet::new(); n];
    for &(a, b) in edges {
        if a >= n || b >= n {
            return Err(Error::QubitOutOfRange { index: a.max(b), n });
        }
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let mut faces: BTreeMap<[usize; 4], [usize; 4]> = BTreeMap::new();
    for u in 0..n {
        let nb: Vec<usize> = adj[u].iter().copied().collect();
        for (i, &v) in nb.iter().enumerate() {
            for &w in &nb[i + 1..] {
                for &x in adj[v].intersection(&adj[w]) {
                    if x == u {
                        continue;
                    }
                    let mut key = [u, v, x, w];
                    key.sort_unstable();
                    faces.entry(key).or_insert([u, v, x, w]);
                }
            }
        }
    }
    let faces: Vec<[usize; 4]> = faces.into_values().collect();
    let bad = |msg: &str| Error::InvalidArgument(format!("quad mesh development failed: {msg}"));
    if faces.is_empty() {
        return Err(bad("no 4-cycles"));
    }
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut edge_faces: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for (a, b) in dedges(f) {
            edge_faces.entry(key(a, b)).or_default().push(i);
        }
    }
    if edge_faces.values().any(|v| v.len() > 2) {
        return Err(bad("edge shared by more than two 4-cycles"));
    }

    let mut orient: Vec<Option<[usize; 4]>> = vec![None; faces.len()];
    orient[0] = Some(faces[0]);
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        let f = orient[i].expect("oriented");
        for (a, b) in dedges(&f) {
            for &j in &edge_faces[&key(a, b)] {
                if j == i {
                    continue;
                }
                match orient[j] {
                    None => {
                        let mut g = faces[j];
                        if dedges(&g).any(|e| e == (a, b)) {
                            g.reverse();
                        }
                        orient[j] = Some(g);
                        stack.push(j);
                    }
                    Some(g) => {
                        if dedges(&g).any(|e| e == (a, b)) {
                            return Err(bad("faces cannot be oriented coherently"));
                        }
                    }
                }
            }
        }
    }
    let orient: Vec<[usize; 4]> = orient
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| bad("4-cycles are not connected"))?;

    let mut vec: HashMap<(usize, usize), (i64, i64)> = HashMap::new();
    let (a0, b0) = (orient[0][0], orient[0][1]);
    vec.insert((a0, b0), (1, 0));
    vec.insert((b0, a0), (-1, 0));
    let mut changed = true;
    while changed {
        changed = false;
        for f in &orient {
            let Some(k) = (0..4).find(|&k| vec.contains_key(&(f[k], f[(k + 1) % 4]))) else {
                continue;
            };
            let mut v = vec[&(f[k], f[(k + 1) % 4])];
            for j in 0..4 {
                let (s, t) = (f[(k + j) % 4], f[(k + j + 1) % 4]);
                match vec.get(&(s, t)) {
                    Some(&w) if w != v => return Err(bad("inconsistent edge directions")),
                    Some(_) => {}
                    None => {
                        vec.insert((s, t), v);
                        vec.insert((t, s), (-v.0, -v.1));
                        changed = true;
                    }
                }
                v = (-v.1, v.0);
            }
        }
    }

    let mut pos: Vec<Option<[f64; 2]>> = vec![None; n];
    pos[a0] = Some([0.0, 0.0]);
    let mut queue = VecDeque::from([a0]);
    while let Some(u) = queue.pop_front() {
        let pu = pos[u].expect("placed");
        for &v in &adj[u] {
            if let (Some(&(dx, dy)), None) = (vec.get(&(u, v)), pos[v]) {
                pos[v] = Some([pu[0] + dx as f64, pu[1] + dy as f64]);
                queue.push_back(v);
            }
        }
    }

    loop {
        let next = (0..n).find_map(|v| {
            if pos[v].is_some() {
                return None;
            }
            adj[v].iter().find(|&&u| pos[u].is_some()).map(|&u| (v, u))
        });
        let Some((v, u)) = next else { break };
        let pu = pos[u].expect("placed");
        let mut angles: Vec<f64> = adj[u]
            .iter()
            .filter_map(|&w| pos[w].map(|pw| (pw[1] - pu[1]).atan2(pw[0] - pu[0])))
            .collect();
        angles.sort_by(f64::total_cmp);
        let dir = if angles.is_empty() {
            0.0
        } else {
            let mut best = (
                angles[0] + 2.0 * std::f64::consts::PI - angles[angles.len() - 1],
                angles[angles.len() - 1],
            );
            for w in angles.windows(2) {
                if w[1] - w[0] > best.0 {
                    best = (w[1] - w[0], w[0]);
                }
            }
            best.1 + best.0 / 2.0
        };
        pos[v] = Some([pu[0] + 0.5 * dir.cos(), pu[1] + 0.5 * dir.sin()]);
    }
    Ok(pos
        .into_iter()
        .enumerate()
        .map(|(q, p)| p.unwrap_or([-2.0 - q as f64, -2.0]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_with_centre() -> Layout<f64> {
        let pos = vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0], [1.0, 1.0]];
        Layout::new(pos, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn enclosed_centre() {
        let r = square_with_centre().accessibility();
        assert_eq!(r.inaccessible, vec![4]);
        assert_eq!(r.accessible + r.inaccessible.len(), r.total);
    }

    #[test]
    fn a_row_is_accessible() {
        let pos = (0..5).map(|i| [i as f64, 0.0]).collect();
        let l = Layout::new(pos, (0..4).map(|i| (i, i + 1))).unwrap();
        assert!(l.accessibility().inaccessible.is_empty());
    }

    #[test]
    fn crossing_is_rejected() {
        let pos = vec![[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]];
        assert!(matches!(
            Layout::<f64>::new(pos, [(0, 1), (2, 3)]),
            Err(Error::NonPlanar(..))
        ));
        let pos = vec![[0.0, 0.0], [2.0, 0.0], [1.0, 0.0]];
        assert!(Layout::<f64>::new(pos, [(0, 1)]).is_err());
    }

    #[test]
    fn gap_in_a_ring_gives_access() {
        let pos = vec![[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0], [1.0, 1.0]];
        let l = Layout::<f64>::new(pos, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(l.accessibility().inaccessible.is_empty());
    }

    #[test]
    fn formula() {
        assert_eq!(formula_counts(3).unwrap(), (9, 3));
        assert_eq!(formula_counts(5).unwrap(), (49, 35));
        assert_eq!(formula_counts(7).unwrap(), (121, 99));
        assert!(formula_counts(4).is_err());
    }

    #[test]
    fn develops_a_grid() {
        let mut edges = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                let q = 3 * r + c;
                if c < 2 {
                    edges.push((q, q + 1));
                }
                if r < 2 {
                    edges.push((q, q + 3));
                }
            }
        }
        edges.push((8, 9));
        let pos = develop_quad_mesh(10, &edges).unwrap();
        let l = Layout::<f64>::new(pos, edges).unwrap();
        assert_eq!(l.accessibility().inaccessible, vec![4]);
    }
}
