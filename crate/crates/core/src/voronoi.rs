//! Rectangle-clipped Voronoi cells of the disk centers, and the combinatorics
//! of the net they induce on the rectangle.
//!
//! Cells are computed independently (in parallel under the `parallel` feature)
//! by clipping the rectangle against the bisector half-plane of every other
//! site. [`net_stats`] then assembles the cells into one planar net: vertices
//! within [`VERTEX_MERGE_TOL`] are identified, a vertex lying in the interior
//! of another cell's edge splits that edge, spurious collinear degree-2
//! vertices are fused away (rectangle corners stay), and the result must pass
//! the Euler check `v - e + cells = 1` plus the structural bounds
//! `e <= 3*cells + 1` and `sum of cell sides < 2e` — violations are reported
//! as [`Error::Topology`], not papered over.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::map_range;
use crate::geom::{ConvexPolygon, Covering, Point, Rect, VERTEX_MERGE_TOL};

#[derive(Clone, Debug)]
pub struct VoronoiCell {
    /// Index of the disk this cell belongs to.
    pub site: usize,
    pub polygon: ConvexPolygon,
    /// Side count of the clipped polygon itself (before net-level edge splitting).
    pub sides: usize,
    /// Polygon area.
    pub area: f64,
    /// Whether the polygon has an edge on the rectangle boundary.
    pub on_boundary: bool,
    /// Lengths of the polygon's own edges that lie on the rectangle boundary,
    /// in vertex order.
    pub boundary_side_lengths: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct VoronoiDiagram {
    pub rect: Rect,
    /// Non-empty cells, in site order.
    pub cells: Vec<VoronoiCell>,
    /// Sites whose cell does not meet the rectangle (e.g. parked disks).
    pub empty_sites: Vec<usize>,
}

/// Statistics of the net the cells cut out of the rectangle.
#[derive(Clone, Debug, Serialize)]
pub struct NetStats {
    /// Distinct net vertices.
    pub v: u64,
    /// Distinct net edges (after splitting/fusion).
    pub e: u64,
    /// Non-empty cells.
    pub n: u64,
    /// Mean number of net edges per cell.
    pub avg_sides: f64,
    /// Cell count by number of net edges.
    pub side_histogram: BTreeMap<usize, usize>,
    /// Total side count over all cells (each interior edge counts twice).
    pub sum_sides: u64,
    /// Cells with at least one edge on the rectangle boundary.
    pub boundary_cells: u64,
    /// Net edges lying on the rectangle boundary.
    pub boundary_edge_count: u64,
    /// Lengths of the boundary edges, in net edge order.
    pub boundary_edge_lengths: Vec<f64>,
    /// Length of the longest boundary edge.
    pub boundary_edge_max_len: f64,
}

/// Clip the Voronoi cells of all disk centers to the rectangle.
pub fn voronoi_cells(c: &Covering) -> Result<VoronoiDiagram> {
    voronoi_inner(c, true)
}

/// Sequential twin of [`voronoi_cells`]; identical output, one thread.
pub fn voronoi_cells_seq(c: &Covering) -> Result<VoronoiDiagram> {
    voronoi_inner(c, false)
}

fn voronoi_inner(c: &Covering, parallel: bool) -> Result<VoronoiDiagram> {
    let n = c.n();
    for i in 0..n {
        for j in (i + 1)..n {
            if c.disks[i].center.dist(c.disks[j].center) <= 1e-12 {
                return Err(Error::DegenerateSites(i, j));
            }
        }
    }
    let polys = map_range(n, parallel, |i| clip_cell(c, i));
    let mut cells = Vec::new();
    let mut empty_sites = Vec::new();
    for (site, poly) in polys.into_iter().enumerate() {
        match poly {
            Some(polygon) => {
                let boundary_side_lengths = boundary_sides(&polygon, &c.rect);
                cells.push(VoronoiCell {
                    site,
                    sides: polygon.sides(),
                    area: polygon.area(),
                    on_boundary: !boundary_side_lengths.is_empty(),
                    boundary_side_lengths,
                    polygon,
                });
            }
            None => empty_sites.push(site),
        }
    }
    Ok(VoronoiDiagram {
        rect: c.rect,
        cells,
        empty_sites,
    })
}

fn clip_cell(c: &Covering, i: usize) -> Option<ConvexPolygon> {
    let pi = c.disks[i].center;
    let mut poly: Vec<Point> = c.rect.corners().to_vec();
    for (j, dj) in c.disks.iter().enumerate() {
        if j == i {
            continue;
        }
        let pj = dj.center;
        let mid = Point::new(0.5 * (pi.x + pj.x), 0.5 * (pi.y + pj.y));
        let dir = (pj.x - pi.x, pj.y - pi.y);
        poly = clip_halfplane(&poly, mid, dir);
        if poly.len() < 3 {
            return None;
        }
    }
    ConvexPolygon::new(poly).ok()
}

/// Keep the part of `poly` with `(q - mid) . dir <= 0` (Sutherland–Hodgman).
fn clip_halfplane(poly: &[Point], mid: Point, dir: (f64, f64)) -> Vec<Point> {
    let side = |q: Point| (q.x - mid.x) * dir.0 + (q.y - mid.y) * dir.1;
    let mut out = Vec::with_capacity(poly.len() + 2);
    for k in 0..poly.len() {
        let a = poly[k];
        let b = poly[(k + 1) % poly.len()];
        let (sa, sb) = (side(a), side(b));
        if sa <= 0.0 {
            out.push(a);
        }
        if (sa <= 0.0) != (sb <= 0.0) {
            let t = sa / (sa - sb);
            out.push(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    }
    out
}

fn boundary_sides(p: &ConvexPolygon, rect: &Rect) -> Vec<f64> {
    let vs = p.vertices();
    (0..vs.len())
        .filter_map(|k| {
            let a = vs[k];
            let b = vs[(k + 1) % vs.len()];
            same_rect_side(a, b, rect).map(|_| a.dist(b))
        })
        .collect()
}

/// The rectangle side (0 bottom, 1 right, 2 top, 3 left) that carries both
/// endpoints, if any.
fn same_rect_side(a: Point, b: Point, rect: &Rect) -> Option<u8> {
    let tol = VERTEX_MERGE_TOL;
    if a.y.abs() <= tol && b.y.abs() <= tol {
        Some(0)
    } else if (a.x - rect.width).abs() <= tol && (b.x - rect.width).abs() <= tol {
        Some(1)
    } else if (a.y - rect.height).abs() <= tol && (b.y - rect.height).abs() <= tol {
        Some(2)
    } else if a.x.abs() <= tol && b.x.abs() <= tol {
        Some(3)
    } else {
        None
    }
}

/// Pool of net vertices with spatial merging at [`VERTEX_MERGE_TOL`].
struct VertexPool {
    pts: Vec<Point>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl VertexPool {
    fn new() -> Self {
        VertexPool {
            pts: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    fn key(p: Point) -> (i64, i64) {
        (
            (p.x / VERTEX_MERGE_TOL).floor() as i64,
            (p.y / VERTEX_MERGE_TOL).floor() as i64,
        )
    }

    fn id_for(&mut self, p: Point) -> usize {
        let (kx, ky) = Self::key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.buckets.get(&(kx + dx, ky + dy)) {
                    for &id in ids {
                        if self.pts[id].dist(p) <= VERTEX_MERGE_TOL {
                            return id;
                        }
                    }
                }
            }
        }
        let id = self.pts.len();
        self.pts.push(p);
        self.buckets.entry((kx, ky)).or_default().push(id);
        id
    }
}

fn dist_point_segment(p: Point, a: Point, b: Point) -> (f64, f64) {
    let (ux, uy) = (b.x - a.x, b.y - a.y);
    let len2 = ux * ux + uy * uy;
    let t = if len2 > 0.0 {
        ((p.x - a.x) * ux + (p.y - a.y) * uy) / len2
    } else {
        0.0
    };
    let tc = t.clamp(0.0, 1.0);
    let q = Point::new(a.x + tc * ux, a.y + tc * uy);
    (p.dist(q), t)
}

/// Assemble the cells into one planar net and compute its statistics.
pub fn net_stats(d: &VoronoiDiagram) -> Result<NetStats> {
    if d.cells.is_empty() {
        return Err(Error::Topology("no cells to assemble".into()));
    }
    let mut pool = VertexPool::new();
    let mut cycles: Vec<Vec<usize>> = Vec::with_capacity(d.cells.len());
    for cell in &d.cells {
        let mut cyc: Vec<usize> = Vec::new();
        for &p in cell.polygon.vertices() {
            let id = pool.id_for(p);
            if cyc.last() != Some(&id) {
                cyc.push(id);
            }
        }
        while cyc.len() > 1 && cyc.first() == cyc.last() {
            cyc.pop();
        }
        if cyc.len() < 3 {
            return Err(Error::Topology(format!(
                "cell of site {} degenerates after vertex merging",
                cell.site
            )));
        }
        cycles.push(cyc);
    }

    // Split edges at net vertices lying in their interior (T-junctions).
    let all_ids: Vec<usize> = (0..pool.pts.len()).collect();
    for cyc in cycles.iter_mut() {
        let mut refined: Vec<usize> = Vec::with_capacity(cyc.len());
        let m = cyc.len();
        for k in 0..m {
            let a = cyc[k];
            let b = cyc[(k + 1) % m];
            let (pa, pb) = (pool.pts[a], pool.pts[b]);
            let len = pa.dist(pb);
            let mut inner: Vec<(f64, usize)> = Vec::new();
            for &vid in &all_ids {
                if vid == a || vid == b {
                    continue;
                }
                let (dist, t) = dist_point_segment(pool.pts[vid], pa, pb);
                if dist <= VERTEX_MERGE_TOL && t * len > VERTEX_MERGE_TOL && (1.0 - t) * len > VERTEX_MERGE_TOL {
                    inner.push((t, vid));
                }
            }
            inner.sort_by(|x, y| x.0.total_cmp(&y.0));
            refined.push(a);
            refined.extend(inner.into_iter().map(|(_, vid)| vid));
        }
        *cyc = refined;
    }

    // Fuse spurious degree-2 vertices with collinear edges (never rectangle corners).
    let corners = Rect {
        width: d.rect.width,
        height: d.rect.height,
    }
    .corners();
    let is_corner = |p: Point| corners.iter().any(|&c| c.dist(p) <= VERTEX_MERGE_TOL);
    loop {
        let mut neighbors: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for cyc in &cycles {
            let m = cyc.len();
            for k in 0..m {
                let (a, b) = (cyc[k], cyc[(k + 1) % m]);
                if a != b {
                    neighbors.entry(a).or_default().insert(b);
                    neighbors.entry(b).or_default().insert(a);
                }
            }
        }
        let mut fused = None;
        for (&vid, nb) in &neighbors {
            if nb.len() != 2 || is_corner(pool.pts[vid]) {
                continue;
            }
            let mut it = nb.iter();
            let (&u, &w) = (it.next().unwrap(), it.next().unwrap());
            let (pu, pv, pw) = (pool.pts[u], pool.pts[vid], pool.pts[w]);
            let cross = (pv.x - pu.x) * (pw.y - pv.y) - (pv.y - pu.y) * (pw.x - pv.x);
            if cross.abs() <= 1e-9 * pu.dist(pv).max(1e-300) * pv.dist(pw).max(1e-300) {
                fused = Some(vid);
                break;
            }
            return Err(Error::Topology(format!(
                "vertex ({}, {}) has degree 2 but its edges bend",
                pv.x, pv.y
            )));
        }
        match fused {
            Some(vid) => {
                for cyc in cycles.iter_mut() {
                    cyc.retain(|&id| id != vid);
                }
            }
            None => break,
        }
    }

    // Gather the net.
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut used_ids: BTreeSet<usize> = BTreeSet::new();
    for cyc in &cycles {
        let m = cyc.len();
        if m < 3 {
            return Err(Error::Topology("cell degenerates after fusion".into()));
        }
        for k in 0..m {
            let (a, b) = (cyc[k], cyc[(k + 1) % m]);
            used_ids.insert(a);
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let v = used_ids.len() as u64;
    let e = edges.len() as u64;
    let n = cycles.len() as u64;

    // Euler characteristic of a connected subdivision of the rectangle.
    if v as i64 - e as i64 + n as i64 != 1 {
        return Err(Error::Topology(format!(
            "Euler check failed: v = {v}, e = {e}, cells = {n}"
        )));
    }
    if e > 3 * n + 1 {
        return Err(Error::Topology(format!(
            "edge bound failed: e = {e} > 3n + 1 = {}",
            3 * n + 1
        )));
    }
    let side_sum: u64 = cycles.iter().map(|c| c.len() as u64).sum();
    if side_sum >= 2 * e {
        return Err(Error::Topology(format!(
            "side-sum bound failed: {side_sum} >= 2e = {}",
            2 * e
        )));
    }

    let mut side_histogram: BTreeMap<usize, usize> = BTreeMap::new();
    for cyc in &cycles {
        *side_histogram.entry(cyc.len()).or_default() += 1;
    }

    let mut boundary_edge_lengths: Vec<f64> = Vec::new();
    let mut boundary_edge_max_len: f64 = 0.0;
    for &(a, b) in &edges {
        let (pa, pb) = (pool.pts[a], pool.pts[b]);
        if same_rect_side(pa, pb, &d.rect).is_some() {
            let len = pa.dist(pb);
            boundary_edge_max_len = boundary_edge_max_len.max(len);
            boundary_edge_lengths.push(len);
        }
    }
    let boundary_cells = cycles
        .iter()
        .filter(|cyc| {
            let m = cyc.len();
            (0..m).any(|k| {
                same_rect_side(
                    pool.pts[cyc[k]],
                    pool.pts[cyc[(k + 1) % m]],
                    &d.rect,
                )
                .is_some()
            })
        })
        .count() as u64;

    Ok(NetStats {
        v,
        e,
        n,
        avg_sides: side_sum as f64 / n as f64,
        side_histogram,
        sum_sides: side_sum,
        boundary_cells,
        boundary_edge_count: boundary_edge_lengths.len() as u64,
        boundary_edge_lengths,
        boundary_edge_max_len,
    })
}

/// The covering-size correction `2*sqrt(2/n) - 2/n` entering the mean-sides bound.
pub fn size_correction(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("size correction needs n >= 1".into()));
    }
    let nf = n as f64;
    Ok(2.0 * (2.0 / nf).sqrt() - 2.0 / nf)
}

/// Upper bound `6 - 2*sqrt(2/n) + 2/n` on the mean number of cell sides in a
/// maximal covering net with `n` effective cells.
pub fn mean_sides_bound(n: usize) -> Result<f64> {
    Ok(6.0 - size_correction(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{hex_for_n, hex_lattice, square_chain};
    use crate::geom::{Covering, Disk};
    use approx::assert_abs_diff_eq;

    fn rect(w: f64, h: f64) -> Rect {
        Rect::new(w, h).unwrap()
    }

    #[test]
    fn single_disk_owns_the_whole_rectangle() {
        let c = Covering::new(rect(1.4, 1.4), vec![Disk::new(Point::new(0.7, 0.7))]).unwrap();
        let d = voronoi_cells(&c).unwrap();
        assert_eq!(d.cells.len(), 1);
        assert!(d.empty_sites.is_empty());
        assert_abs_diff_eq!(d.cells[0].area, 1.4 * 1.4, epsilon = 1e-12);
        assert_eq!(d.cells[0].boundary_side_lengths.len(), 4);
        for &len in &d.cells[0].boundary_side_lengths {
            assert_abs_diff_eq!(len, 1.4, epsilon = 1e-12);
        }
        let s = net_stats(&d).unwrap();
        assert_eq!((s.v, s.e, s.n), (4, 4, 1));
        assert_eq!(s.side_histogram, BTreeMap::from([(4, 1)]));
        assert_eq!(s.sum_sides, 4);
        assert_eq!(s.boundary_cells, 1);
        assert_eq!(s.boundary_edge_count, 4);
        assert_eq!(s.boundary_edge_lengths.len(), 4);
        assert_abs_diff_eq!(s.avg_sides, 4.0);
    }

    #[test]
    fn two_disk_chain_counts_by_hand() {
        let c = square_chain(2).unwrap().covering;
        let d = voronoi_cells(&c).unwrap();
        assert_eq!(d.cells.len(), 2);
        let s = net_stats(&d).unwrap();
        // Two side-by-side squares: 6 vertices, 7 edges, side counts 4 + 4.
        assert_eq!((s.v, s.e, s.n), (6, 7, 2));
        assert_abs_diff_eq!(s.avg_sides, 4.0);
        assert_eq!(s.side_histogram, BTreeMap::from([(4, 2)]));
        assert_eq!(s.sum_sides, 8);
        assert_eq!(s.boundary_cells, 2);
        assert_eq!(s.boundary_edge_count, 6);
        // Every boundary edge of the two-square net is one square side long.
        assert_eq!(s.boundary_edge_lengths.len(), 6);
        for &len in &s.boundary_edge_lengths {
            assert_abs_diff_eq!(len, std::f64::consts::SQRT_2, epsilon = 1e-9);
        }
        assert!(s.boundary_edge_max_len <= std::f64::consts::SQRT_2 + 1e-12);
    }

    #[test]
    fn cocircular_sites_share_a_degree_four_vertex() {
        let sites = [(0.5, 0.5), (1.5, 0.5), (1.5, 1.5), (0.5, 1.5)];
        let disks = sites
            .iter()
            .map(|&(x, y)| Disk::new(Point::new(x, y)))
            .collect();
        let c = Covering::new(rect(2.0, 2.0), disks).unwrap();
        let d = voronoi_cells(&c).unwrap();
        let s = net_stats(&d).unwrap();
        assert_eq!((s.v, s.e, s.n), (9, 12, 4));
        assert_eq!(s.side_histogram, BTreeMap::from([(4, 4)]));
    }

    #[test]
    fn duplicate_sites_are_rejected() {
        let disks = vec![
            Disk::new(Point::new(0.5, 0.5)),
            Disk::new(Point::new(0.5, 0.5)),
        ];
        let c = Covering::new(rect(1.0, 1.0), disks).unwrap();
        assert!(matches!(
            voronoi_cells(&c),
            Err(Error::DegenerateSites(0, 1))
        ));
    }

    #[test]
    fn parked_disks_get_empty_cells() {
        let c = hex_for_n(5).unwrap().covering;
        let d = voronoi_cells(&c).unwrap();
        assert_eq!(d.cells.len(), 4);
        assert_eq!(d.empty_sites, vec![4]);
        // The four lattice cells partition the rectangle.
        let total: f64 = d.cells.iter().map(|c| c.area).sum();
        assert_abs_diff_eq!(total, c.rect.area(), epsilon = 1e-9);
    }

    #[test]
    fn sequential_twin_agrees_exactly() {
        let c = hex_lattice(3).unwrap().covering;
        let a = voronoi_cells(&c).unwrap();
        let b = voronoi_cells_seq(&c).unwrap();
        assert_eq!(a.cells.len(), b.cells.len());
        for (x, y) in a.cells.iter().zip(b.cells.iter()) {
            assert_eq!(x.site, y.site);
            assert_eq!(x.polygon.vertices(), y.polygon.vertices());
        }
    }

    #[test]
    fn cells_partition_the_rectangle() {
        for cov in [
            square_chain(4).unwrap().covering,
            hex_lattice(3).unwrap().covering,
        ] {
            let d = voronoi_cells(&cov).unwrap();
            let total: f64 = d.cells.iter().map(|c| c.polygon.area()).sum();
            assert_abs_diff_eq!(total, cov.rect.area(), epsilon = 1e-9);
            // Each cell contains its own site.
            for cell in &d.cells {
                let site = cov.disks[cell.site].center;
                assert!(cell.polygon.contains(site, 1e-9));
            }
        }
    }

    #[test]
    fn net_identities_hold_on_lattices() {
        for k in 1..=4usize {
            let c = hex_lattice(k).unwrap().covering;
            let d = voronoi_cells(&c).unwrap();
            let s = net_stats(&d).unwrap();
            let n = (k * k) as u64;
            assert_eq!(s.n, n, "k = {k}");
            assert!(s.e <= 3 * n + 1);
            assert!(s.sum_sides < 2 * s.e);
            assert_abs_diff_eq!(s.avg_sides, s.sum_sides as f64 / s.n as f64);
            assert!(s.avg_sides <= mean_sides_bound(k * k).unwrap() + 1e-12);
        }
    }

    #[test]
    fn covering_nets_keep_boundary_edges_short() {
        // In a genuine covering every boundary edge is a chord of its cell's
        // unit disk, so no longer than 2; and every net vertex of a cell is
        // within 1 of the cell's own site.
        for cov in [
            square_chain(5).unwrap().covering,
            hex_lattice(2).unwrap().covering,
            hex_lattice(4).unwrap().covering,
        ] {
            let d = voronoi_cells(&cov).unwrap();
            let s = net_stats(&d).unwrap();
            assert!(s.boundary_edge_max_len <= 2.0 + 1e-9);
            assert!(s.boundary_edge_lengths.iter().all(|&l| l <= 2.0 + 1e-9));
            for cell in &d.cells {
                let site = cov.disks[cell.site].center;
                for &v in cell.polygon.vertices() {
                    assert!(site.dist(v) <= 1.0 + 1e-9);
                }
                for &len in &cell.boundary_side_lengths {
                    assert!(len <= 2.0 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn size_correction_spot_values() {
        assert_abs_diff_eq!(
            size_correction(1).unwrap(),
            0.828_427_124_746_190_1,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(size_correction(2).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(size_correction(8).unwrap(), 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(mean_sides_bound(2).unwrap(), 5.0, epsilon = 1e-15);
        assert_abs_diff_eq!(mean_sides_bound(8).unwrap(), 5.25, epsilon = 1e-15);
        assert!(size_correction(0).is_err());
        // The correction vanishes as coverings grow.
        assert!(size_correction(1_000_000).unwrap() < 3e-3);
    }
}
