//! Embedded graphs on the torus and the two refinement systems: dyadic
//! lattices and iterated barycentric subdivision.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::torus::{wrap, Curve, TorusPoint, POINT_TOL};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub curve: Curve,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: Vec<TorusPoint>,
    pub edges: Vec<Edge>,
    pub level: usize,
}

impl Graph {
    /// Number of edges `|Gamma|`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dim(&self) -> usize {
        self.vertices.first().map_or(1, |v| v.dim())
    }

    /// Checks that every edge runs from its tail vertex to its head vertex.
    pub fn validate(&self) -> Result<()> {
        for (i, e) in self.edges.iter().enumerate() {
            let (Some(t), Some(h)) = (self.vertices.get(e.tail), self.vertices.get(e.head)) else {
                return Err(Error::InvalidArgument(format!("edge {i} has a dangling vertex")));
            };
            if !e.curve.start().approx_eq(t, POINT_TOL) || !e.curve.end().approx_eq(h, POINT_TOL)
            {
                return Err(Error::InvalidArgument(format!(
                    "edge {i} does not join its tail and head vertices"
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: Graph = serde_json::from_str(s)?;
        g.validate()?;
        Ok(g)
    }
}

/// A directed system of graphs with explicit refinement data:
/// `refinement[n][e]` lists the edges of `graphs[n + 1]` whose composition, in
/// order, traverses edge `e` of `graphs[n]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphSystem {
    pub graphs: Vec<Graph>,
    pub refinement: Vec<Vec<Vec<usize>>>,
}

impl GraphSystem {
    pub fn levels(&self) -> usize {
        self.graphs.len()
    }

    /// Graph at a 1-based refinement level.
    pub fn level(&self, level: usize) -> &Graph {
        &self.graphs[level - 1]
    }

    /// Children of `edge` at `level` (1-based) in the next level.
    pub fn children(&self, level: usize, edge: usize) -> Result<&[usize]> {
        self.refinement
            .get(level.wrapping_sub(1))
            .and_then(|r| r.get(edge))
            .map(Vec::as_slice)
            .ok_or(Error::NoRefinement(level))
    }

    /// Maximum pointwise distance between each parent curve and the
    /// concatenation of its children, sampled at `samples` points per child.
    pub fn refinement_defect(&self, samples: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for (n, rmap) in self.refinement.iter().enumerate() {
            let (coarse, fine) = (&self.graphs[n], &self.graphs[n + 1]);
            for (e, kids) in rmap.iter().enumerate() {
                let parent = &coarse.edges[e].curve;
                let m = kids.len() as f64;
                for (ci, &c) in kids.iter().enumerate() {
                    let child = &fine.edges[c].curve;
                    for s in 0..=samples {
                        let t = s as f64 / samples as f64;
                        let p = parent.point_at((ci as f64 + t) / m);
                        worst = worst.max(p.distance(&child.point_at(t)));
                    }
                }
            }
        }
        worst
    }

    /// Whether every vertex of level `n` reappears at level `n + 1`.
    pub fn vertices_nested(&self) -> bool {
        self.graphs.windows(2).all(|w| {
            w[0].vertices
                .iter()
                .all(|v| w[1].vertices.iter().any(|u| u.approx_eq(v, 1e-12)))
        })
    }
}

/// Dyadic lattice system: level `n` is the `2^n`-per-side axis-aligned lattice.
pub fn lattice_system(dim: usize, levels: usize) -> Result<GraphSystem> {
    if !(dim == 1 || dim == 2) || levels == 0 {
        return Err(Error::InvalidArgument(format!(
            "lattice system needs dim in {{1, 2}} and levels >= 1 (got {dim}, {levels})"
        )));
    }
    let graphs: Vec<Graph> = (1..=levels).map(|n| lattice_graph(dim, n)).collect();
    let refinement = (1..levels)
        .map(|n| {
            let s = 1usize << n;
            let count = if dim == 1 { s } else { 2 * s * s };
            (0..count)
                .map(|e| lattice_children(dim, s, e))
                .collect::<Vec<_>>()
        })
        .collect();
    Ok(GraphSystem { graphs, refinement })
}

/// Edge index of the lattice edge leaving `(i, j)` along `axis` with `s` vertices per side.
pub fn lattice_edge_index(dim: usize, s: usize, axis: usize, i: usize, j: usize) -> usize {
    if dim == 1 {
        i
    } else {
        axis * s * s + j * s + i
    }
}

/// Inverse of [`lattice_edge_index`]: `(axis, i, j)`.
pub fn lattice_edge_coords(dim: usize, s: usize, e: usize) -> (usize, usize, usize) {
    if dim == 1 {
        (0, e, 0)
    } else {
        let axis = e / (s * s);
        let r = e % (s * s);
        (axis, r % s, r / s)
    }
}

fn lattice_graph(dim: usize, level: usize) -> Graph {
    let s = 1usize << level;
    let h = 1.0 / s as f64;
    let vertex = |i: usize, j: usize| -> usize {
        if dim == 1 {
            i % s
        } else {
            (j % s) * s + (i % s)
        }
    };
    let vertices: Vec<TorusPoint> = if dim == 1 {
        (0..s).map(|i| TorusPoint::d1(i as f64 * h)).collect()
    } else {
        (0..s * s)
            .map(|k| TorusPoint::d2((k % s) as f64 * h, (k / s) as f64 * h))
            .collect()
    };
    let mut edges = Vec::new();
    let axes = if dim == 1 { 1 } else { 2 };
    for axis in 0..axes {
        let rows = if dim == 1 { 1 } else { s };
        for j in 0..rows {
            for i in 0..s {
                let tail = vertex(i, j);
                let (hi, hj) = if axis == 0 { (i + 1, j) } else { (i, j + 1) };
                let mut disp = vec![0.0; dim];
                disp[axis] = h;
                edges.push(Edge {
                    tail,
                    head: vertex(hi, hj),
                    curve: Curve::geodesic(vertices[tail], &disp),
                });
            }
        }
    }
    Graph {
        vertices,
        edges,
        level,
    }
}

fn lattice_children(dim: usize, s: usize, e: usize) -> Vec<usize> {
    let (axis, i, j) = lattice_edge_coords(dim, s, e);
    let fine = 2 * s;
    let (i2, j2) = (2 * i, 2 * j);
    let next = if axis == 0 { (i2 + 1, j2) } else { (i2, j2 + 1) };
    vec![
        lattice_edge_index(dim, fine, axis, i2, j2),
        lattice_edge_index(dim, fine, axis, next.0, next.1),
    ]
}

/// Hash key of a point of `T^2`, robust to the representation of `1 == 0`.
fn point_key(x: f64, y: f64) -> (i64, i64) {
    const Q: f64 = 1e9;
    let k = |v: f64| ((wrap(v) * Q).round() as i64).rem_euclid(Q as i64);
    (k(x), k(y))
}

type Lifted = [f64; 2];

struct MeshBuilder {
    vertices: Vec<TorusPoint>,
    vertex_keys: HashMap<(i64, i64), usize>,
    edges: Vec<Edge>,
    edge_keys: HashMap<(i64, i64), usize>,
}

impl MeshBuilder {
    fn new() -> Self {
        MeshBuilder {
            vertices: Vec::new(),
            vertex_keys: HashMap::new(),
            edges: Vec::new(),
            edge_keys: HashMap::new(),
        }
    }

    fn vertex(&mut self, p: Lifted) -> usize {
        let key = point_key(p[0], p[1]);
        if let Some(&i) = self.vertex_keys.get(&key) {
            return i;
        }
        self.vertices.push(TorusPoint::d2(p[0], p[1]));
        self.vertex_keys.insert(key, self.vertices.len() - 1);
        self.vertices.len() - 1
    }

    /// Registers the segment `from -> to` (lifted) with that orientation, or
    /// returns the index of an already registered copy.
    fn oriented_edge(&mut self, from: Lifted, to: Lifted) -> usize {
        let key = point_key(0.5 * (from[0] + to[0]), 0.5 * (from[1] + to[1]));
        if let Some(&i) = self.edge_keys.get(&key) {
            return i;
        }
        let tail = self.vertex(from);
        let head = self.vertex(to);
        let start = self.vertices[tail];
        self.edges.push(Edge {
            tail,
            head,
            curve: Curve::geodesic(start, &[to[0] - from[0], to[1] - from[1]]),
        });
        self.edge_keys.insert(key, self.edges.len() - 1);
        self.edges.len() - 1
    }

    /// Registers a segment oriented from the lexicographically smaller endpoint.
    fn lex_edge(&mut self, a: Lifted, b: Lifted) -> usize {
        let ka = (wrap(a[0]), wrap(a[1]));
        let kb = (wrap(b[0]), wrap(b[1]));
        if ka <= kb {
            self.oriented_edge(a, b)
        } else {
            self.oriented_edge(b, a)
        }
    }
}

fn mid(a: Lifted, b: Lifted) -> Lifted {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

/// Triangulation system of `T^2`: level 1 splits each of the 2x2 squares along
/// its diagonal (8 triangles); level `n + 1` is the `n`-fold barycentric
/// subdivision. Halves of a subdivided edge inherit its orientation; new
/// interior edges are oriented lexicographically.
pub fn triangulation_system(levels: usize) -> Result<GraphSystem> {
    if levels == 0 {
        return Err(Error::InvalidArgument("levels must be >= 1".into()));
    }
    let mut triangles: Vec<[Lifted; 3]> = Vec::new();
    let mut b = MeshBuilder::new();
    for j in 0..2 {
        for i in 0..2 {
            let (x0, y0) = (i as f64 * 0.5, j as f64 * 0.5);
            let p00 = [x0, y0];
            let p10 = [x0 + 0.5, y0];
            let p11 = [x0 + 0.5, y0 + 0.5];
            let p01 = [x0, y0 + 0.5];
            for p in [p00, p10, p11, p01] {
                b.vertex(p);
            }
            triangles.push([p00, p10, p11]);
            triangles.push([p00, p11, p01]);
        }
    }
    for t in &triangles {
        b.lex_edge(t[0], t[1]);
        b.lex_edge(t[1], t[2]);
        b.lex_edge(t[2], t[0]);
    }
    let mut graphs = vec![Graph {
        vertices: b.vertices.clone(),
        edges: b.edges.clone(),
        level: 1,
    }];
    let mut refinement = Vec::new();
    let mut current = b;

    for level in 2..=levels {
        let mut next = MeshBuilder::new();
        for v in &current.vertices {
            let c = v.coords();
            next.vertex([c[0], c[1]]);
        }
        let mut rmap = Vec::with_capacity(current.edges.len());
        for e in &current.edges {
            let (p, d) = e.curve.lifted_at(0.0);
            let q = [p[0] + d[0], p[1] + d[1]];
            let m = mid(p, q);
            let first = next.oriented_edge(p, m);
            let second = next.oriented_edge(m, q);
            rmap.push(vec![first, second]);
        }
        let mut refined = Vec::with_capacity(triangles.len() * 6);
        for t in &triangles {
            let [a, bb, c] = *t;
            let g = [(a[0] + bb[0] + c[0]) / 3.0, (a[1] + bb[1] + c[1]) / 3.0];
            let (mab, mbc, mca) = (mid(a, bb), mid(bb, c), mid(c, a));
            for p in [a, bb, c, mab, mbc, mca] {
                next.lex_edge(g, p);
            }
            refined.extend_from_slice(&[
                [a, mab, g],
                [mab, bb, g],
                [bb, mbc, g],
                [mbc, c, g],
                [c, mca, g],
                [mca, a, g],
            ]);
        }
        triangles = refined;
        graphs.push(Graph {
            vertices: next.vertices.clone(),
            edges: next.edges.clone(),
            level,
        });
        refinement.push(rmap);
        current = next;
    }
    Ok(GraphSystem { graphs, refinement })
}

/// Triangle count of the triangulation at a 1-based level.
pub fn triangulation_triangle_count(level: usize) -> usize {
    8 * 6usize.pow(level as u32 - 1)
}
