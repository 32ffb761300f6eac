//! Exact planar geometry for the pricing oracle.
//!
//! Power diagrams are built one cell at a time: the cell of a site is a large
//! box clipped by its bisector half-planes. Cells are closed here, and ties go
//! to the smaller index wherever a single owner is needed ([`locate_index`]).
//! Identical `(point, weight)` pairs collapse onto their smallest index before
//! anything is built.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{BarycenterInstance, IndexTuple};
use crate::numeric::{denominator_lcm, int, Rational, Vec2};
use crate::par::{self, Parallelism};

/// The line `a . y = b`. The open side `a . y < b` is "below".
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: Vec2,
    pub b: Rational,
}

impl Line {
    pub fn new(a: Vec2, b: Rational) -> Self {
        debug_assert!(!a.is_zero(), "line with zero normal");
        Line { a, b }
    }

    /// `a . y - b`: negative below, zero on the line, positive above.
    pub fn eval(&self, y: &Vec2) -> Rational {
        self.a.dot(y) - &self.b
    }

    /// Same point set, scaled so the first non-zero normal component is 1.
    pub fn canonical(&self) -> Line {
        let s = if self.a.x.is_zero() {
            self.a.y.recip()
        } else {
            self.a.x.recip()
        };
        Line {
            a: self.a.scale(&s),
            b: &self.b * &s,
        }
    }

    pub fn flipped(&self) -> Line {
        Line {
            a: -&self.a,
            b: -&self.b,
        }
    }

    /// Intersection point, `None` for parallel lines.
    pub fn intersect(&self, other: &Line) -> Option<Vec2> {
        let det = self.a.cross(&other.a);
        if det.is_zero() {
            return None;
        }
        let x = (&self.b * &other.a.y - &other.b * &self.a.y) / &det;
        let y = (&self.a.x * &other.b - &other.a.x * &self.b) / &det;
        Some(Vec2::new(x, y))
    }

    /// Point of the line closest to the origin.
    pub fn closest_to_origin(&self) -> Vec2 {
        self.a.scale(&(&self.b / self.a.norm_sq()))
    }

    /// Rational lower bound on the Euclidean distance from `y` to the line.
    fn distance_lower_bound(&self, y: &Vec2) -> Rational {
        self.eval(y).abs() / (self.a.x.abs() + self.a.y.abs())
    }
}

/// `||x - y||^2 - w`.
pub fn power_distance(site: &Vec2, weight: &Rational, y: &Vec2) -> Rational {
    (site - y).norm_sq() - weight
}

/// The line where the power distances to `(x, w)` and `(x2, w2)` agree:
/// `2 (x2 - x) . y = |x2|^2 - |x|^2 + w - w2`. The site `x` is on the below
/// side.
pub fn bisector(x: &Vec2, w: &Rational, x2: &Vec2, w2: &Rational) -> Result<Line> {
    if x == x2 {
        return Err(Error::CoincidentSites);
    }
    let a = (x2 - x).scale(&int(2));
    let b = x2.norm_sq() - x.norm_sq() + w - w2;
    Ok(Line::new(a, b))
}

/// Axis-aligned box, closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundingBox {
    pub min: Vec2,
    pub max: Vec2,
}

impl BoundingBox {
    pub fn of_points<'a>(points: impl IntoIterator<Item = &'a Vec2>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut bb = BoundingBox {
            min: first.clone(),
            max: first.clone(),
        };
        for p in it {
            if p.x < bb.min.x {
                bb.min.x = p.x.clone();
            }
            if p.y < bb.min.y {
                bb.min.y = p.y.clone();
            }
            if p.x > bb.max.x {
                bb.max.x = p.x.clone();
            }
            if p.y > bb.max.y {
                bb.max.y = p.y.clone();
            }
        }
        Some(bb)
    }

    /// Whether the interiors can meet. Boxes touching along an edge do not
    /// count; their intersection has no area.
    pub fn overlaps(&self, other: &BoundingBox) -> bool {
        self.min.x < other.max.x
            && other.min.x < self.max.x
            && self.min.y < other.max.y
            && other.min.y < self.max.y
    }
}

/// Convex polygon in counter-clockwise order. Edge `i` runs from vertex `i`
/// to vertex `i + 1` and carries a caller-defined tag naming its supporting
/// half-plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPolygon {
    pub vertices: Vec<Vec2>,
    pub tags: Vec<usize>,
}

impl ConvexPolygon {
    /// The square `[-m, m]^2`, edges tagged `0..4` as in [`box_halfplanes`].
    pub fn square(m: &Rational) -> Self {
        let n = -m;
        ConvexPolygon {
            vertices: vec![
                Vec2::new(n.clone(), n.clone()),
                Vec2::new(m.clone(), n.clone()),
                Vec2::new(m.clone(), m.clone()),
                Vec2::new(n, m.clone()),
            ],
            // bottom edge lies on -y <= m, right on x <= m, top on y <= m, left on -x <= m
            tags: vec![3, 0, 2, 1],
        }
    }

    /// Twice the signed area.
    pub fn twice_area(&self) -> Rational {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].cross(&self.vertices[(i + 1) % n]))
            .sum()
    }

    pub fn bbox(&self) -> BoundingBox {
        BoundingBox::of_points(&self.vertices).expect("polygon has vertices")
    }

    /// Keeps the part with `a . y <= b`; the new edge along the line gets
    /// `tag`. Returns `None` when the remainder has no area.
    pub fn clip(&self, halfplane: &Line, tag: usize) -> Option<ConvexPolygon> {
        let n = self.vertices.len();
        let s: Vec<Rational> = self.vertices.iter().map(|v| halfplane.eval(v)).collect();
        if s.iter().all(|v| !v.is_positive()) {
            return Some(self.clone());
        }
        if s.iter().all(|v| !v.is_negative()) {
            return None;
        }
        let mut vertices = Vec::with_capacity(n + 1);
        let mut tags = Vec::with_capacity(n + 1);
        for i in 0..n {
            let j = (i + 1) % n;
            let (si, sj) = (&s[i], &s[j]);
            if si.is_negative() {
                vertices.push(self.vertices[i].clone());
                tags.push(self.tags[i]);
                if sj.is_positive() {
                    vertices.push(edge_crossing(&self.vertices[i], &self.vertices[j], si, sj));
                    tags.push(tag);
                }
            } else if si.is_zero() {
                vertices.push(self.vertices[i].clone());
                tags.push(if sj.is_positive() { tag } else { self.tags[i] });
            } else if sj.is_negative() {
                vertices.push(edge_crossing(&self.vertices[i], &self.vertices[j], si, sj));
                tags.push(self.tags[i]);
            }
        }
        let poly = ConvexPolygon { vertices, tags };
        (poly.vertices.len() >= 3 && poly.twice_area().is_positive()).then_some(poly)
    }

    /// Intersection with another convex polygon whose edge tags index
    /// `halfplanes`.
    pub fn intersect(&self, other: &ConvexPolygon, halfplanes: &[Line]) -> Option<ConvexPolygon> {
        let mut poly = self.clone();
        for &tag in &other.tags {
            poly = poly.clip(&halfplanes[tag], tag)?;
        }
        Some(poly)
    }

    /// A point in the interior: the average of three non-collinear vertices.
    pub fn interior_point(&self) -> Vec2 {
        let n = self.vertices.len();
        let v0 = &self.vertices[0];
        for i in 1..n {
            for j in i + 1..n {
                let (v1, v2) = (&self.vertices[i], &self.vertices[j]);
                if !(v1 - v0).cross(&(v2 - v0)).is_zero() {
                    let sum = &(v0 + v1) + v2;
                    return sum.scale(&Rational::new(BigInt::one(), BigInt::from(3)));
                }
            }
        }
        v0.clone()
    }
}

fn edge_crossing(p: &Vec2, q: &Vec2, sp: &Rational, sq: &Rational) -> Vec2 {
    let t = sp / (sp - sq);
    p + &(q - p).scale(&t)
}

/// Half-planes bounding `[-m, m]^2`: `x <= m`, `-x <= m`, `y <= m`, `-y <= m`.
pub fn box_halfplanes(m: &Rational) -> Vec<Line> {
    vec![
        Line::new(Vec2::from_ints(1, 0), m.clone()),
        Line::new(Vec2::from_ints(-1, 0), m.clone()),
        Line::new(Vec2::from_ints(0, 1), m.clone()),
        Line::new(Vec2::from_ints(0, -1), m.clone()),
    ]
}

/// Half-width of a square that strictly contains every site, every crossing
/// of two bisector lines, and the origin-closest point of every bisector, for
/// all of the given `(sites, weights)` families at once.
///
/// Bisector normals are `2 (x' - x)`, so with `D` the common denominator of all
/// site coordinates a non-zero determinant of two normals is at least
/// `4 / D^2` in magnitude; Cramer's rule then bounds every crossing by
/// `4 C Q D^2`, with `C` the largest coordinate and `Q` the largest
/// `| |x|^2 - w |`.
pub fn enclosing_half_width<'a>(
    families: impl IntoIterator<Item = (&'a [Vec2], &'a [Rational])>,
) -> Rational {
    let mut coord = Rational::zero();
    let mut q = Rational::zero();
    let mut coords = Vec::new();
    for (sites, weights) in families {
        for (s, w) in sites.iter().zip(weights) {
            let c = s.max_abs();
            if c > coord {
                coord = c;
            }
            let v = (s.norm_sq() - w).abs();
            if v > q {
                q = v;
            }
            coords.push(s.x.clone());
            coords.push(s.y.clone());
        }
    }
    let d = Rational::from_integer(denominator_lcm(&coords));
    let crossing = int(4) * &coord * &q * &d * &d;
    let m = if crossing > coord { crossing } else { coord };
    Rational::from_integer(m.ceil().to_integer() + 1)
}

/// One side of a bisector, as stored in [`PowerDiagram::halfplanes`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfplaneSource {
    /// The site whose cell lies on the kept side.
    pub owner: usize,
    /// The competing site, `None` for the four box sides.
    pub neighbor: Option<usize>,
}

/// Power diagram clipped to `[-m, m]^2`.
#[derive(Clone, Debug)]
pub struct PowerDiagram {
    pub sites: Vec<Vec2>,
    pub site_weights: Vec<Rational>,
    /// Distinct lines carrying an edge of positive length.
    pub facet_lines: Vec<Line>,
    /// For each site, indices into `facet_lines` of the lines bounding its
    /// cell (empty for empty cells).
    pub survivor_map: Vec<Vec<usize>>,
    /// Closed cell of each site inside the box, `None` if it has no area.
    pub cells: Vec<Option<ConvexPolygon>>,
    /// Half-planes `a . y <= b` referenced by the cells' edge tags. Entries
    /// `0..4` are the box.
    pub halfplanes: Vec<Line>,
    pub halfplane_sources: Vec<HalfplaneSource>,
    /// Smallest index with the same `(point, weight)` pair.
    pub representative: Vec<usize>,
    pub half_width: Rational,
}

/// Power diagram of `sites`, clipped to a box large enough to contain all of
/// its vertices.
pub fn power_diagram(sites: &[Vec2], site_weights: &[Rational]) -> Result<PowerDiagram> {
    if sites.len() != site_weights.len() {
        return Err(Error::LengthMismatch {
            left: sites.len(),
            right: site_weights.len(),
        });
    }
    let m = enclosing_half_width([(sites, site_weights)]);
    Ok(power_diagram_in_box(sites, site_weights, &m))
}

/// Power diagram clipped to `[-m, m]^2`. Facet detection is only complete if
/// the box contains every vertex of the diagram (see [`enclosing_half_width`]).
pub fn power_diagram_in_box(sites: &[Vec2], site_weights: &[Rational], m: &Rational) -> PowerDiagram {
    let n = sites.len();
    let mut representative: Vec<usize> = (0..n).collect();
    let mut first_seen: BTreeMap<(&Vec2, &Rational), usize> = BTreeMap::new();
    for j in 0..n {
        representative[j] = *first_seen.entry((&sites[j], &site_weights[j])).or_insert(j);
    }
    // A site sharing its point with a heavier site has an empty cell.
    let mut heaviest: BTreeMap<&Vec2, usize> = BTreeMap::new();
    for j in 0..n {
        let e = heaviest.entry(&sites[j]).or_insert(j);
        if site_weights[j] > site_weights[*e] {
            *e = j;
        }
    }
    let alive: Vec<bool> = (0..n)
        .map(|j| representative[j] == j && representative[heaviest[&sites[j]]] == j)
        .collect();

    let mut halfplanes = box_halfplanes(m);
    let mut halfplane_sources: Vec<HalfplaneSource> = (0..4)
        .map(|_| HalfplaneSource {
            owner: usize::MAX,
            neighbor: None,
        })
        .collect();
    let square = ConvexPolygon::square(m);
    let mut cells = vec![None; n];
    for j in (0..n).filter(|&j| alive[j]) {
        // Nearest competitors first: they cut the cell down fastest.
        let mut others: Vec<usize> = (0..n).filter(|&o| o != j && alive[o]).collect();
        others.sort_by_cached_key(|&o| (&sites[o] - &sites[j]).norm_sq());
        let mut poly = Some(square.clone());
        for o in others {
            let Some(p) = poly.as_ref() else { break };
            let line = bisector(&sites[j], &site_weights[j], &sites[o], &site_weights[o])
                .expect("alive sites are distinct points");
            let tag = halfplanes.len();
            let clipped = p.clip(&line, tag);
            if clipped.as_ref().is_some_and(|c| c.tags.contains(&tag)) {
                halfplanes.push(line);
                halfplane_sources.push(HalfplaneSource {
                    owner: j,
                    neighbor: Some(o),
                });
                poly = clipped;
            } else if clipped.is_none() {
                poly = None;
            }
            // Otherwise the half-plane was redundant and the tag is unused.
        }
        cells[j] = poly;
    }

    let mut facet_index: BTreeMap<Line, usize> = BTreeMap::new();
    let mut facet_lines = Vec::new();
    let mut survivor_map = vec![Vec::new(); n];
    for (j, cell) in cells.iter().enumerate() {
        let Some(poly) = cell else { continue };
        let len = poly.vertices.len();
        for (e, &tag) in poly.tags.iter().enumerate() {
            if halfplane_sources[tag].neighbor.is_none() {
                continue;
            }
            if poly.vertices[e] == poly.vertices[(e + 1) % len] {
                continue;
            }
            let canon = halfplanes[tag].canonical();
            let idx = *facet_index.entry(canon.clone()).or_insert_with(|| {
                facet_lines.push(canon);
                facet_lines.len() - 1
            });
            if !survivor_map[j].contains(&idx) {
                survivor_map[j].push(idx);
            }
        }
    }

    PowerDiagram {
        sites: sites.to_vec(),
        site_weights: site_weights.to_vec(),
        facet_lines,
        survivor_map,
        cells,
        halfplanes,
        halfplane_sources,
        representative,
        half_width: m.clone(),
    }
}

/// Index of the site minimizing the power distance to `y`; ties go to the
/// smallest index.
pub fn locate_index(y: &Vec2, sites: &[Vec2], weights: &[Rational]) -> usize {
    let mut best = 0;
    let mut best_val = power_distance(&sites[0], &weights[0], y);
    for j in 1..sites.len() {
        let v = power_distance(&sites[j], &weights[j], y);
        if v < best_val {
            best = j;
            best_val = v;
        }
    }
    best
}

/// For each marginal, the lexicographically smallest index minimizing
/// `||x_{i,j} - y||^2 - [w_i]_j`.
pub fn locate_tuple(y: &Vec2, inst: &BarycenterInstance, w: &[Vec<Rational>]) -> IndexTuple {
    let indices = (0..inst.k())
        .map(|i| {
            let sites: Vec<Vec2> = (0..inst.measure(i).len()).map(|j| inst.atom2(i, j)).collect();
            locate_index(y, &sites, &w[i])
        })
        .collect();
    IndexTuple::new(indices)
}

/// One interior point for every 2-cell of the arrangement of `lines`.
///
/// The arrangement is boxed by `[-M, M]^2`, with `M` exceeding every site in
/// `sites_hint`, every pairwise crossing and every line's origin-closest
/// point. Every cell of the boxed arrangement is then a bounded convex
/// polygon, and some vertex of it has an interior angle of at least 60
/// degrees. Stepping a short distance from each vertex along the eight
/// compass directions therefore lands inside every cell. Candidates are
/// deduplicated by their sign vector against `lines` and returned sorted by
/// it.
pub fn enumerate_arrangement_cells(lines: &[Line], sites_hint: &[Vec2]) -> Vec<Vec2> {
    enumerate_arrangement_cells_with(lines, sites_hint, Parallelism::default())
}

pub fn enumerate_arrangement_cells_with(
    lines: &[Line],
    sites_hint: &[Vec2],
    mode: Parallelism,
) -> Vec<Vec2> {
    let lines: Vec<Line> = lines.iter().map(Line::canonical).collect::<BTreeSet<_>>().into_iter().collect();
    if lines.is_empty() {
        return vec![Vec2::zero()];
    }

    let mut m = Rational::zero();
    let mut bump = |v: &Vec2| {
        let c = v.max_abs();
        if c > m {
            m = c;
        }
    };
    sites_hint.iter().for_each(&mut bump);
    for (i, l) in lines.iter().enumerate() {
        bump(&l.closest_to_origin());
        for l2 in &lines[i + 1..] {
            if let Some(p) = l.intersect(l2) {
                bump(&p);
            }
        }
    }
    let m = m + Rational::one();

    let mut augmented = lines.clone();
    augmented.extend(box_halfplanes(&m));
    let mut vertices: BTreeSet<Vec2> = BTreeSet::new();
    for (i, l) in augmented.iter().enumerate() {
        for l2 in &augmented[i + 1..] {
            if let Some(p) = l.intersect(l2) {
                if p.x.abs() <= m && p.y.abs() <= m {
                    vertices.insert(p);
                }
            }
        }
    }
    let vertices: Vec<Vec2> = vertices.into_iter().collect();

    let nearest: Vec<Option<Rational>> = par::map(mode, &vertices, |v| {
        augmented
            .iter()
            .map(|l| l.distance_lower_bound(v))
            .filter(Signed::is_positive)
            .min()
    });
    let delta = nearest.into_iter().flatten().min().unwrap_or_else(Rational::one) / int(4);

    let directions = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];
    let mut candidates = vec![Vec2::zero()];
    for v in &vertices {
        for (dx, dy) in directions {
            candidates.push(Vec2::new(&v.x + &delta * int(dx), &v.y + &delta * int(dy)));
        }
    }

    let classified: Vec<Option<(Vec<bool>, Vec2)>> = par::map(mode, &candidates, |c| {
        if c.x.abs() >= m || c.y.abs() >= m {
            return None;
        }
        let mut signs = Vec::with_capacity(lines.len());
        for l in &lines {
            let s = l.eval(c);
            if s.is_zero() {
                return None;
            }
            signs.push(s.is_positive());
        }
        Some((signs, c.clone()))
    });
    let mut cells: BTreeMap<Vec<bool>, Vec2> = BTreeMap::new();
    for (signs, point) in classified.into_iter().flatten() {
        cells.entry(signs).or_insert(point);
    }
    cells.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(x: i64, y: i64) -> Vec2 {
        Vec2::from_ints(x, y)
    }

    fn rand_rat(rng: &mut impl Rng, span: i64, den: i64) -> Rational {
        ratio(rng.random_range(-span * den..=span * den), rng.random_range(1..=den))
    }

    fn rand_vec(rng: &mut impl Rng, span: i64, den: i64) -> Vec2 {
        Vec2::new(rand_rat(rng, span, den), rand_rat(rng, span, den))
    }

    #[test]
    fn unweighted_bisector_is_perpendicular_midline() {
        let l = bisector(&v(0, 0), &int(0), &v(2, 0), &int(0)).unwrap().canonical();
        assert_eq!(l, Line::new(v(1, 0), int(1)));
    }

    #[test]
    fn weighted_bisector_moves_toward_lighter_site() {
        let x = v(0, 0);
        let x2 = v(2, 0);
        let l = bisector(&x, &int(3), &x2, &int(1)).unwrap();
        assert_eq!(l.canonical(), Line::new(v(1, 0), ratio(3, 2)));
        for t in [-3, 0, 1, 7] {
            let y = Vec2::new(ratio(3, 2), int(t));
            let expected = int(t * t) - ratio(3, 4);
            assert_eq!(power_distance(&x, &int(3), &y), expected);
            assert_eq!(power_distance(&x2, &int(1), &y), expected);
        }
    }

    #[test]
    fn coincident_sites_have_no_bisector() {
        assert!(matches!(
            bisector(&v(0, 0), &int(0), &v(0, 0), &int(0)),
            Err(Error::CoincidentSites)
        ));
    }

    #[test]
    fn bisector_equalizes_power_distances() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let (x, x2) = (rand_vec(&mut rng, 5, 8), rand_vec(&mut rng, 5, 8));
            if x == x2 {
                continue;
            }
            let (w, w2) = (rand_rat(&mut rng, 5, 8), rand_rat(&mut rng, 5, 8));
            let line = bisector(&x, &w, &x2, &w2).unwrap();
            // A point on the line, shifted along its direction.
            let dir = Vec2::new(-&line.a.y, line.a.x.clone());
            let on = &line.closest_to_origin() + &dir.scale(&rand_rat(&mut rng, 3, 8));
            assert_eq!(power_distance(&x, &w, &on), power_distance(&x2, &w2, &on));
            let off = rand_vec(&mut rng, 10, 8);
            let s = line.eval(&off);
            let diff = power_distance(&x, &w, &off) - power_distance(&x2, &w2, &off);
            assert_eq!(s.signum(), diff.signum());
        }
    }

    #[test]
    fn clipping_tracks_edge_tags() {
        let sq = ConvexPolygon::square(&int(2));
        let half = sq.clip(&Line::new(v(1, 0), int(0)), 9).unwrap();
        assert_eq!(half.twice_area(), int(16));
        assert_eq!(half.tags.iter().filter(|&&t| t == 9).count(), 1);
        assert!(sq.clip(&Line::new(v(1, 0), int(-5)), 9).is_none());
        assert_eq!(sq.clip(&Line::new(v(1, 0), int(5)), 9).unwrap(), sq);
        // Touching a single corner leaves no area.
        assert!(sq.clip(&Line::new(v(1, 1), int(-4)), 9).is_none());
    }

    #[test]
    fn diagram_of_two_sites_has_one_facet() {
        let d = power_diagram(&[v(0, 0), v(2, 0)], &[int(0), int(0)]).unwrap();
        assert_eq!(d.facet_lines, vec![Line::new(v(1, 0), int(1))]);
        assert_eq!(d.survivor_map, vec![vec![0], vec![0]]);
    }

    #[test]
    fn collinear_sites_skip_the_outer_bisector() {
        // Cells are the half-planes x < 1, 1 < x < 3, x > 3; the outer pair's
        // bisector x = 2 only runs through the middle cell.
        let d = power_diagram(&[v(0, 0), v(2, 0), v(4, 0)], &[int(0), int(0), int(0)]).unwrap();
        let mut lines = d.facet_lines.clone();
        lines.sort();
        assert_eq!(lines, vec![Line::new(v(1, 0), int(1)), Line::new(v(1, 0), int(3))]);
        assert_eq!(d.survivor_map[1].len(), 2);
    }

    #[test]
    fn single_site_owns_the_plane() {
        let d = power_diagram(&[v(3, 4)], &[int(7)]).unwrap();
        assert!(d.facet_lines.is_empty());
        assert!(d.cells[0].is_some());
    }

    #[test]
    fn duplicates_and_dominated_sites_have_empty_cells() {
        let d = power_diagram(
            &[v(0, 0), v(0, 0), v(2, 0), v(2, 0)],
            &[int(1), int(1), int(0), int(5)],
        )
        .unwrap();
        assert_eq!(d.representative, vec![0, 0, 2, 3]);
        assert!(d.cells[0].is_some());
        assert!(d.cells[1].is_none());
        assert!(d.cells[2].is_none());
        assert!(d.cells[3].is_some());
        assert_eq!(d.facet_lines.len(), 1);
    }

    #[test]
    fn facets_separate_their_two_cells() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rng.random_range(2..7);
            let sites: Vec<Vec2> = (0..n).map(|_| rand_vec(&mut rng, 3, 4)).collect();
            let weights: Vec<Rational> = (0..n).map(|_| rand_rat(&mut rng, 2, 4)).collect();
            let d = power_diagram(&sites, &weights).unwrap();
            let live = d.cells.iter().filter(|c| c.is_some()).count();
            if live > 1 {
                assert!(!d.facet_lines.is_empty());
            }
            assert!(d.facet_lines.len() <= 3 * n);
            for (j, cell) in d.cells.iter().enumerate() {
                let Some(poly) = cell else { continue };
                let len = poly.vertices.len();
                for (e, &tag) in poly.tags.iter().enumerate() {
                    let Some(o) = d.halfplane_sources[tag].neighbor else { continue };
                    let (p, q) = (&poly.vertices[e], &poly.vertices[(e + 1) % len]);
                    if p == q {
                        continue;
                    }
                    let line = &d.halfplanes[tag];
                    assert_eq!(line, &bisector(&sites[j], &weights[j], &sites[o], &weights[o]).unwrap());
                    assert!(d.facet_lines.contains(&line.canonical()));
                    let mid = (p + q).scale(&ratio(1, 2));
                    let eps = ratio(1, 1_000_000);
                    let inside = &mid - &line.a.scale(&eps);
                    let outside = &mid + &line.a.scale(&eps);
                    assert_eq!(d.representative[locate_index(&inside, &sites, &weights)], j);
                    assert_eq!(d.representative[locate_index(&outside, &sites, &weights)], o);
                }
            }
        }
    }

    #[test]
    fn empty_arrangement_has_one_cell() {
        assert_eq!(enumerate_arrangement_cells(&[], &[]).len(), 1);
    }

    #[test]
    fn two_crossing_lines_have_four_quadrants() {
        let lines = [Line::new(v(1, 0), int(0)), Line::new(v(0, 1), int(0))];
        let reps = enumerate_arrangement_cells(&lines, &[]);
        assert_eq!(reps.len(), 4);
        let quadrants: BTreeSet<(bool, bool)> =
            reps.iter().map(|p| (p.x.is_positive(), p.y.is_positive())).collect();
        assert_eq!(quadrants.len(), 4);
        assert!(reps.iter().all(|p| !p.x.is_zero() && !p.y.is_zero()));
    }

    /// Sign vectors hit by a fine grid plus points nudged off every vertex.
    fn grid_sign_vectors(lines: &[Line]) -> BTreeSet<Vec<bool>> {
        let mut points = Vec::new();
        for i in -60..=60 {
            for j in -60..=60 {
                points.push(Vec2::new(ratio(i, 4) + ratio(1, 997), ratio(j, 4) + ratio(1, 991)));
            }
        }
        let nudges = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1), (2, 1), (1, 2), (-2, 1), (-1, 2), (2, -1), (1, -2), (-2, -1), (-1, -2)];
        for (a, l) in lines.iter().enumerate() {
            for l2 in &lines[a + 1..] {
                if let Some(p) = l.intersect(l2) {
                    for (dx, dy) in nudges {
                        points.push(Vec2::new(&p.x + ratio(dx, 100_000), &p.y + ratio(dy, 100_000)));
                    }
                }
            }
        }
        points
            .iter()
            .filter_map(|p| {
                lines
                    .iter()
                    .map(|l| {
                        let s = l.eval(p);
                        (!s.is_zero()).then(|| s.is_positive())
                    })
                    .collect::<Option<Vec<bool>>>()
            })
            .collect()
    }

    fn rep_sign_vectors(lines: &[Line], reps: &[Vec2]) -> BTreeSet<Vec<bool>> {
        reps.iter()
            .map(|p| lines.iter().map(|l| l.eval(p).is_positive()).collect())
            .collect()
    }

    #[test]
    fn five_general_lines_have_sixteen_cells() {
        let lines = vec![
            Line::new(v(1, 0), int(0)),
            Line::new(v(0, 1), int(1)),
            Line::new(v(1, 1), int(3)),
            Line::new(v(1, -1), int(2)),
            Line::new(v(1, 2), int(-2)),
        ];
        let reps = enumerate_arrangement_cells(&lines, &[]);
        assert_eq!(reps.len(), 16);
        assert_eq!(rep_sign_vectors(&lines, &reps), grid_sign_vectors(&lines));
    }

    #[test]
    fn arrangement_matches_sampling_on_random_lines() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for trial in 0..25 {
            let n = rng.random_range(1..=6);
            let mut lines = Vec::new();
            while lines.len() < n {
                let a = Vec2::from_ints(rng.random_range(-3..=3), rng.random_range(-3..=3));
                if a.is_zero() {
                    continue;
                }
                lines.push(Line::new(a, int(rng.random_range(-4..=4))));
            }
            if trial % 5 == 0 {
                // Force a parallel pair and a repeated line.
                lines.push(Line::new(lines[0].a.clone(), &lines[0].b + int(1)));
                lines.push(lines[0].clone());
            }
            let reps = enumerate_arrangement_cells(&lines, &[]);
            let n_distinct = lines.iter().map(Line::canonical).collect::<BTreeSet<_>>().len();
            assert!(reps.len() <= 1 + n_distinct + n_distinct * (n_distinct - 1) / 2);
            assert_eq!(rep_sign_vectors(&lines, &reps), grid_sign_vectors(&lines), "trial {trial}");
        }
    }

    #[test]
    fn concurrent_lines_with_thin_wedges() {
        // Six lines through the origin, some only 1/50 radian apart.
        let lines: Vec<Line> = [(1, 0), (50, 1), (0, 1), (1, 50), (1, 1), (1, -1)]
            .iter()
            .map(|&(a, b)| Line::new(v(a, b), int(0)))
            .collect();
        let reps = enumerate_arrangement_cells(&lines, &[]);
        assert_eq!(reps.len(), 12);
    }

    #[test]
    fn locate_breaks_ties_toward_smaller_index() {
        let sites = [v(0, 0), v(2, 0)];
        let zero = [int(0), int(0)];
        assert_eq!(locate_index(&Vec2::new(ratio(2, 5), int(0)), &sites, &zero), 0);
        assert_eq!(locate_index(&v(1, 0), &sites, &zero), 0);
        assert_eq!(locate_index(&Vec2::new(ratio(5, 4), int(0)), &sites, &[int(3), int(1)]), 0);
        assert_eq!(locate_index(&Vec2::new(ratio(7, 4), int(0)), &sites, &[int(3), int(1)]), 1);
    }

    #[test]
    fn enclosing_box_contains_all_bisector_crossings() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let sites: Vec<Vec2> = (0..5).map(|_| rand_vec(&mut rng, 2, 7)).collect();
            let weights: Vec<Rational> = (0..5).map(|_| rand_rat(&mut rng, 3, 5)).collect();
            let m = enclosing_half_width([(&sites[..], &weights[..])]);
            let mut lines = Vec::new();
            for a in 0..5 {
                for b in a + 1..5 {
                    if let Ok(l) = bisector(&sites[a], &weights[a], &sites[b], &weights[b]) {
                        lines.push(l);
                    }
                }
            }
            for (i, l) in lines.iter().enumerate() {
                assert!(l.closest_to_origin().max_abs() < m);
                for l2 in &lines[i + 1..] {
                    if let Some(p) = l.intersect(l2) {
                        assert!(p.max_abs() < m);
                    }
                }
            }
        }
    }
}
