//! Bounded faces of a straight-line plane drawing.
//!
//! Incident pipes are sorted by angle around every node, giving a rotation
//! system. Walking each directed pipe and always leaving a node by the
//! pipe immediately clockwise of the one we arrived on traces every face
//! counter-clockwise, except the unbounded face of each connected piece,
//! which comes out with non-positive signed area and is dropped.

use thiserror::Error;

use super::{EdgeId, Network, NodeId};

#[derive(Debug, Error, PartialEq)]
pub enum FaceError {
    #[error("network has no node coordinates")]
    MissingCoords,
    #[error("pipes `{0}` and `{1}` cross in the drawing")]
    Crossing(String, String),
    #[error("node `{node}` lies on pipe `{edge}`")]
    NodeOnPipe { node: String, edge: String },
}

const EPS: f64 = 1e-12;

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn on_segment(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> bool {
    orient(a, b, p).abs() <= EPS
        && p[0] >= a[0].min(b[0]) - EPS
        && p[0] <= a[0].max(b[0]) + EPS
        && p[1] >= a[1].min(b[1]) - EPS
        && p[1] <= a[1].max(b[1]) + EPS
}

fn check_plane(net: &Network, xy: &[[f64; 2]]) -> Result<(), FaceError> {
    let edges = net.edges();
    for (i, ei) in edges.iter().enumerate() {
        let (a, b) = (xy[ei.ends[0].index()], xy[ei.ends[1].index()]);
        for n in net.nodes() {
            if ei.ends.contains(&n) || net.degree(n) == 0 {
                continue;
            }
            if on_segment(xy[n.index()], a, b) {
                return Err(FaceError::NodeOnPipe {
                    node: net.node_label(n).to_string(),
                    edge: ei.label.clone(),
                });
            }
        }
        for ej in &edges[i + 1..] {
            let shared = ei.ends.iter().find(|n| ej.ends.contains(n));
            let (c, d) = (xy[ej.ends[0].index()], xy[ej.ends[1].index()]);
            let crossing = match shared {
                // Pipes sharing a node only overlap when they leave it in
                // the same direction.
                Some(&s) => {
                    let p = xy[s.index()];
                    let u = xy[ei.other(s).index()];
                    let v = xy[ej.other(s).index()];
                    orient(p, u, v).abs() <= EPS
                        && (u[0] - p[0]) * (v[0] - p[0]) + (u[1] - p[1]) * (v[1] - p[1]) > 0.0
                }
                None => {
                    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
                    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
                    (o1 > EPS && o2 < -EPS || o1 < -EPS && o2 > EPS)
                        && (o3 > EPS && o4 < -EPS || o3 < -EPS && o4 > EPS)
                }
            };
            if crossing {
                return Err(FaceError::Crossing(ei.label.clone(), ej.label.clone()));
            }
        }
    }
    Ok(())
}

/// Boundary walks of all bounded faces, each rotated and oriented to its
/// lexicographically smallest form.
pub fn compute_faces(net: &Network) -> Result<Vec<Vec<NodeId>>, FaceError> {
    let xy = net.coords().ok_or(FaceError::MissingCoords)?;
    check_plane(net, xy)?;

    // rotation[n]: incident pipes sorted counter-clockwise by angle
    let rotation: Vec<Vec<EdgeId>> = net
        .nodes()
        .map(|n| {
            let p = xy[n.index()];
            let mut inc: Vec<(f64, EdgeId)> = net
                .incident(n)
                .iter()
                .map(|&e| {
                    let q = xy[net.edge(e).other(n).index()];
                    ((q[1] - p[1]).atan2(q[0] - p[0]), e)
                })
                .collect();
            inc.sort_by(|x, y| x.0.total_cmp(&y.0));
            inc.into_iter().map(|(_, e)| e).collect()
        })
        .collect();

    // dart (e, side): traverse e leaving ends[side]
    let mut used = vec![false; net.slot_count()];
    let mut faces = Vec::new();
    for start in 0..net.slot_count() {
        if used[start] {
            continue;
        }
        let mut walk = Vec::new();
        let mut dart = start;
        while !used[dart] {
            used[dart] = true;
            let e = EdgeId((dart / 2) as u32);
            let from = net.edge(e).ends[dart % 2];
            let to = net.edge(e).other(from);
            walk.push(from);
            let rot = &rotation[to.index()];
            let pos = rot.iter().position(|&x| x == e).unwrap();
            let next = rot[(pos + rot.len() - 1) % rot.len()];
            let side = net.slot_at(next, to).unwrap().side();
            dart = next.slot(side).index();
        }
        let area: f64 = (0..walk.len())
            .map(|i| {
                let p = xy[walk[i].index()];
                let q = xy[walk[(i + 1) % walk.len()].index()];
                p[0] * q[1] - q[0] * p[1]
            })
            .sum();
        if area > EPS {
            faces.push(canonical(walk));
        }
    }
    faces.sort();
    Ok(faces)
}

fn canonical(walk: Vec<NodeId>) -> Vec<NodeId> {
    let k = walk.len();
    let mut reversed = walk.clone();
    reversed.reverse();
    let mut best = walk.clone();
    for seq in [&walk, &reversed] {
        for r in 0..k {
            let cand: Vec<NodeId> = (0..k).map(|i| seq[(i + r) % k]).collect();
            if cand < best {
                best = cand;
            }
        }
    }
    best
}
