//! Exhaustive orbit censuses of quartics, lines and points, and the table
//! checks built on them.
//!
//! Orbits are computed by closure under the three generators of `PGL2(q)`:
//! generator images are computed in parallel, then merged by a
//! single-threaded union-find in which every root is the least index of its
//! class. Nothing here trusts the invariants; labels are compared against
//! the closure.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field_tower::{FieldCtx, FieldElem, Fq};
use crate::klein::{g_bracket, wedge2, Branch, Line, LineLabel, NongenericLabel, Point3};
use crate::projective::{generators, pgl2_elements, Pgl2};
use crate::quartic::{
    degenerate_orbit_size, j_plus_sets, j_sets, CubicLabel, JSets, QuarticForm, QuarticLabel,
};

/// Default upper bound on `q` for the line census.
pub const LINE_CENSUS_BOUND: u64 = 31;

/// Union-find whose roots are the least element of each class.
struct MinUnionFind {
    parent: Vec<u32>,
}

impl MinUnionFind {
    fn new(n: usize) -> Self {
        MinUnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra < rb {
            self.parent[rb as usize] = ra;
        } else if rb < ra {
            self.parent[ra as usize] = rb;
        }
    }

    fn roots(mut self) -> Vec<u32> {
        (0..self.parent.len() as u32).map(|x| self.find(x)).collect()
    }
}

/// Orbit partition of `0..images.len()` given the generator images.
fn partition(images: &[Vec<u32>]) -> Vec<u32> {
    let mut uf = MinUnionFind::new(images.len());
    for (i, im) in images.iter().enumerate() {
        for &j in im {
            uf.union(i as u32, j);
        }
    }
    uf.roots()
}

/// Which finite `G`-set a census covers.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GroundSet {
    Quartics,
    Lines,
    Points,
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroundSet::Quartics => "quartics",
            GroundSet::Lines => "lines",
            GroundSet::Points => "points",
        })
    }
}

/// Label attached to an orbit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrbitLabel {
    Quartic(QuarticLabel),
    Line(LineLabel),
    Point(CubicLabel),
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::Quartic(l) => write!(f, "{l}"),
            OrbitLabel::Line(l) => write!(f, "{l}"),
            OrbitLabel::Point(l) => write!(f, "point{}", *l as u8),
        }
    }
}

/// One orbit of a census.
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub label: OrbitLabel,
    pub size: u64,
    pub stabilizer_order: u64,
    /// Index of the least element in the ground-set enumeration.
    pub rep_index: u64,
    /// Coordinates of the least element, as encodings.
    pub representative: Vec<u32>,
    /// `j` of the associated quartic, absent on the discriminant locus.
    pub j: Option<u32>,
}

/// A partition of a ground set into orbits.
#[derive(Clone, Debug)]
pub struct OrbitCensus {
    pub ground: GroundSet,
    pub q: u64,
    pub orbits: Vec<OrbitRecord>,
    pub total: u64,
    /// Elements whose own label differs from their orbit's label.
    pub label_mismatches: u64,
    /// Orbits whose scanned stabilizer order differs from `|G| / size`.
    pub stabilizer_mismatches: u64,
    /// Lines whose polar does not land in the partner orbit.
    pub polarity_mismatches: u64,
}

impl OrbitCensus {
    pub fn group_order(&self) -> u64 {
        self.q * self.q * self.q - self.q
    }

    pub fn ground_size(&self) -> u64 {
        let q = self.q;
        match self.ground {
            GroundSet::Quartics => QuarticForm::count(q),
            GroundSet::Lines => Line::count(q),
            GroundSet::Points => q * q * q + q * q + q + 1,
        }
    }
}

fn stabilizer_scan(group: &[Pgl2<Fq<'_>>], fixes: impl Fn(&Pgl2<Fq<'_>>) -> bool + Sync) -> u64 {
    group.par_iter().filter(|g| fixes(g)).count() as u64
}

/// Census of all projective binary quartics.
pub fn census_quartics(f: &FieldCtx) -> Result<OrbitCensus> {
    f.require_classifiable()?;
    let q = f.q();
    let sample = f.zero();
    let n = QuarticForm::count(q);
    let gens = generators(f);
    let images: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let form = QuarticForm::from_index(sample, i);
            gens.iter().map(|g| form.act(g).index() as u32).collect()
        })
        .collect();
    let roots = partition(&images);
    drop(images);

    let mut sizes: BTreeMap<u32, u64> = BTreeMap::new();
    for &r in &roots {
        *sizes.entry(r).or_default() += 1;
    }
    let group = pgl2_elements(f);
    let g_order = q * q * q - q;
    let mut orbits = Vec::with_capacity(sizes.len());
    let mut labels: HashMap<u32, QuarticLabel> = HashMap::new();
    let mut stab_bad = 0;
    for (&r, &size) in &sizes {
        let rep = QuarticForm::from_index(sample, r as u64);
        let (_, label) = rep.orbit_label()?;
        let stab = stabilizer_scan(&group, |g| rep.act(g) == rep);
        if stab * size != g_order {
            stab_bad += 1;
        }
        labels.insert(r, label);
        orbits.push(OrbitRecord {
            label: OrbitLabel::Quartic(label),
            size,
            stabilizer_order: stab,
            rep_index: r as u64,
            representative: rep.z().iter().map(|x| x.value()).collect(),
            j: rep.j_invariant().ok().map(|j| j.value()),
        });
    }
    let mismatches = (0..n)
        .into_par_iter()
        .filter(|&i| {
            let form = QuarticForm::from_index(sample, i);
            let want = labels[&roots[i as usize]];
            form.orbit_label().map(|(_, l)| l != want).unwrap_or(true)
        })
        .count() as u64;
    Ok(OrbitCensus {
        ground: GroundSet::Quartics,
        q,
        orbits,
        total: n,
        label_mismatches: mismatches,
        stabilizer_mismatches: stab_bad,
        polarity_mismatches: 0,
    })
}

/// Label of a line up to the duality branch, computed pointwise.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum LineBase {
    Nongeneric(NongenericLabel),
    Generic(QuarticLabel),
}

fn line_base(l: &Line<'_>) -> Result<LineBase> {
    if l.is_generic() {
        Ok(LineBase::Generic(l.pi().orbit_label()?.1))
    } else {
        match l.classify()?.label {
            LineLabel::Nongeneric(n) => Ok(LineBase::Nongeneric(n)),
            LineLabel::Generic(..) => unreachable!("discriminant zero"),
        }
    }
}

/// Census of all lines of `PG(3,q)`.
pub fn census_lines(f: &FieldCtx) -> Result<OrbitCensus> {
    f.require_classifiable()?;
    let q = f.q();
    let all = Line::all(f);
    let keys: Vec<u64> = all.iter().map(|l| l.key()).collect();
    let index = |l: &Line<'_>| keys.binary_search(&l.key()).expect("every line is enumerated") as u32;
    let gens: Vec<_> = generators(f)
        .iter()
        .map(|g| wedge2(&g_bracket(3, g.entries())))
        .collect();
    let images: Vec<Vec<u32>> = all
        .par_iter()
        .map(|l| gens.iter().map(|w| index(&l.act_with(w))).collect())
        .collect();
    let roots = partition(&images);
    drop(images);
    let stars: Vec<u32> = all.par_iter().map(|l| index(&l.hodge_star())).collect();

    let mut sizes: BTreeMap<u32, u64> = BTreeMap::new();
    for &r in &roots {
        *sizes.entry(r).or_default() += 1;
    }
    let group = pgl2_elements(f);
    let g_order = q * q * q - q;
    let mut bases: HashMap<u32, LineBase> = HashMap::new();
    let mut partner: HashMap<u32, u32> = HashMap::new();
    let mut orbits = Vec::with_capacity(sizes.len());
    let mut stab_bad = 0;
    for (&r, &size) in &sizes {
        let rep = all[r as usize];
        let base = line_base(&rep)?;
        let other = roots[stars[r as usize] as usize];
        partner.insert(r, other);
        bases.insert(r, base);
        let label = match base {
            LineBase::Nongeneric(n) => LineLabel::Nongeneric(n),
            LineBase::Generic(ql) => {
                let branch = if other == r {
                    Branch::SelfDual
                } else if r < other {
                    Branch::Plus
                } else {
                    Branch::Minus
                };
                LineLabel::Generic(ql, branch)
            }
        };
        let stab = stabilizer_scan(&group, |g| rep.act(g) == rep);
        if stab * size != g_order {
            stab_bad += 1;
        }
        orbits.push(OrbitRecord {
            label: OrbitLabel::Line(label),
            size,
            stabilizer_order: stab,
            rep_index: r as u64,
            representative: rep.plucker().iter().map(|x| x.value()).collect(),
            j: rep.pi().j_invariant().ok().map(|j| j.value()),
        });
    }
    let mismatches = all
        .par_iter()
        .enumerate()
        .filter(|(i, l)| line_base(l).map(|b| b != bases[&roots[*i]]).unwrap_or(true))
        .count() as u64;
    let polarity = (0..all.len())
        .into_par_iter()
        .filter(|&i| roots[stars[i] as usize] != partner[&roots[i]])
        .count() as u64;
    Ok(OrbitCensus {
        ground: GroundSet::Lines,
        q,
        orbits,
        total: all.len() as u64,
        label_mismatches: mismatches,
        stabilizer_mismatches: stab_bad,
        polarity_mismatches: polarity,
    })
}

fn act_point<'a>(m: &[Vec<Fq<'a>>], p: &Point3<'a>) -> Point3<'a> {
    let c = p.coords();
    let z = c[0].zero_like();
    let v: [Fq<'a>; 4] = std::array::from_fn(|i| (0..4).fold(z, |acc, j| acc + m[i][j] * c[j]));
    Point3::new(v).expect("invertible action")
}

/// Census of the points of `PG(3,q)`, labelled through the binary cubics
/// they pair with.
pub fn census_points(f: &FieldCtx) -> Result<OrbitCensus> {
    f.require_classifiable()?;
    let q = f.q();
    let els: Vec<Fq<'_>> = f.elements().collect();
    let (z, o) = (f.zero(), f.one());
    let mut pts = Vec::new();
    for a in &els {
        for b in &els {
            for c in &els {
                pts.push(Point3::new([o, *a, *b, *c])?);
            }
        }
    }
    for a in &els {
        for b in &els {
            pts.push(Point3::new([z, o, *a, *b])?);
        }
    }
    for a in &els {
        pts.push(Point3::new([z, z, o, *a])?);
    }
    pts.push(Point3::new([z, z, z, o])?);
    pts.sort_by_key(|p| p.coords().map(|x| x.value()));
    let pos: HashMap<Point3<'_>, u32> = pts.iter().enumerate().map(|(i, p)| (*p, i as u32)).collect();
    let mats: Vec<Vec<Vec<Fq<'_>>>> = generators(f).iter().map(|g| g_bracket(3, g.entries())).collect();
    let images: Vec<Vec<u32>> = pts
        .iter()
        .map(|p| mats.iter().map(|m| pos[&act_point(m, p)]).collect())
        .collect();
    let roots = partition(&images);
    let mut sizes: BTreeMap<u32, u64> = BTreeMap::new();
    for &r in &roots {
        *sizes.entry(r).or_default() += 1;
    }
    let g_order = q * q * q - q;
    let mut labels = HashMap::new();
    let orbits: Vec<OrbitRecord> = sizes
        .iter()
        .map(|(&r, &size)| {
            let rep = pts[r as usize];
            labels.insert(r, rep.orbit());
            OrbitRecord {
                label: OrbitLabel::Point(rep.orbit()),
                size,
                stabilizer_order: g_order / size,
                rep_index: r as u64,
                representative: rep.coords().iter().map(|x| x.value()).collect(),
                j: None,
            }
        })
        .collect();
    let mismatches = pts
        .iter()
        .enumerate()
        .filter(|(i, p)| p.orbit() != labels[&roots[*i]])
        .count() as u64;
    Ok(OrbitCensus {
        ground: GroundSet::Points,
        q,
        orbits,
        total: pts.len() as u64,
        label_mismatches: mismatches,
        stabilizer_mismatches: 0,
        polarity_mismatches: 0,
    })
}

// ---------------------------------------------------------------------------
// Table checks.

/// One expected-vs-actual count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub table: &'static str,
    pub row: String,
    pub col: String,
    pub expected: i64,
    pub actual: i64,
}

impl Cell {
    pub fn pass(&self) -> bool {
        self.expected == self.actual
    }
}

/// A named boolean check with a short detail string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

/// Column names for orbit sizes `|G| / d`.
fn size_col(g: u64, size: u64) -> String {
    if g % size == 0 {
        match g / size {
            1 => "G".to_string(),
            d => format!("G/{d}"),
        }
    } else {
        format!("size{size}")
    }
}

fn j_row(r: u32, q: u64, sets: &JSets, plus: bool) -> String {
    let k1728 = (1728 % q) as u32;
    if r == 0 {
        "j=0".into()
    } else if r == k1728 {
        "j=1728".into()
    } else {
        match sets.class_of(r) {
            Some(i) if plus => format!("J{i}+"),
            Some(i) => format!("J{i}"),
            None => "outside".into(),
        }
    }
}

fn tally(cells: &mut Vec<Cell>, table: &'static str, expected: &[(&str, &str, i64)], actual: &BTreeMap<(String, String), i64>) {
    let mut seen = std::collections::BTreeSet::new();
    for (row, col, e) in expected {
        let key = (row.to_string(), col.to_string());
        cells.push(Cell {
            table,
            row: key.0.clone(),
            col: key.1.clone(),
            expected: *e,
            actual: actual.get(&key).copied().unwrap_or(0),
        });
        seen.insert(key);
    }
    for (key, a) in actual {
        if !seen.contains(key) {
            cells.push(Cell {
                table,
                row: key.0.clone(),
                col: key.1.clone(),
                expected: 0,
                actual: *a,
            });
        }
    }
}

/// `(mu, |J1|, |J2|, |J4|)` from the closed forms.
fn j_set_sizes(q: u64) -> (i64, i64, i64, i64) {
    let q = q as i64;
    let mu = if q % 3 == 1 { 1 } else { -1 };
    (mu, (q - mu) / 3, (q - 2 + mu) / 2, (q - 6 - mu) / 6)
}

/// `(|J1+|, |J2+|, |J4+|)` from the closed forms.
fn j_plus_sizes(q: u64) -> (i64, i64, i64) {
    let (mu, ..) = j_set_sizes(q);
    let q = q as i64;
    let l = match q % 12 {
        1 => 13,
        r => r,
    };
    let j2 = match q % 12 {
        1 => (q - 1) / 4,
        5 => (q - 5) / 4,
        _ => (q - 3) / 4,
    };
    ((q - mu) / 6, j2, (q - l) / 12)
}

/// Size checks for `J_i` and `J_i^+`.
pub fn j_set_checks(f: &FieldCtx) -> Result<Vec<Check>> {
    let q = f.q();
    let j = j_sets(f)?;
    let jp = j_plus_sets(f)?;
    let (_, e1, e2, e4) = j_set_sizes(q);
    let (p1, p2, p4) = j_plus_sizes(q);
    let mut out = Vec::new();
    for (name, got, want) in [
        ("|J1|", j.j1.len(), e1),
        ("|J2|", j.j2.len(), e2),
        ("|J4|", j.j4.len(), e4),
        ("|J1+|", jp.j1.len(), p1),
        ("|J2+|", jp.j2.len(), p2),
        ("|J4+|", jp.j4.len(), p4),
    ] {
        out.push(check(
            format!("jset {name}"),
            got as i64 == want,
            format!("expected={want} actual={got}"),
        ));
    }
    Ok(out)
}

/// Cells of the quartic table and the discriminant-zero orbits.
pub fn quartic_cells(census: &OrbitCensus, f: &FieldCtx) -> Result<(Vec<Cell>, Vec<Check>)> {
    let q = census.q;
    let g = census.group_order();
    let sets = j_sets(f)?;
    let (mu, j1, j2, j4) = j_set_sizes(q);
    let mut actual = BTreeMap::new();
    let mut degenerate = BTreeMap::new();
    for o in &census.orbits {
        match (o.label, o.j) {
            (OrbitLabel::Quartic(QuarticLabel::Degenerate(n)), _) => {
                *degenerate.entry((format!("F0.{n}"), format!("size{}", o.size))).or_insert(0) += 1;
            }
            (_, Some(r)) => {
                *actual.entry((j_row(r, q, &sets, false), size_col(g, o.size))).or_insert(0) += 1;
            }
            _ => {
                *actual.entry(("no-j".into(), size_col(g, o.size))).or_insert(0) += 1;
            }
        }
    }
    let mut cells = Vec::new();
    let expected = [
        ("J4", "G/4", 4 * j4),
        ("J2", "G/2", 2 * j2),
        ("J1", "G", j1),
        ("j=1728", "G/4", 3),
        ("j=1728", "G/8", 2),
        ("j=0", "G/2", 1 - mu),
        ("j=0", "G/3", 1 + mu),
        ("j=0", "G/4", (1 + mu) / 2),
        ("j=0", "G/12", (1 + mu) / 2),
    ];
    tally(&mut cells, "quartic", &expected, &actual);
    let deg: Vec<(String, String, i64)> = (1..=6u8)
        .map(|n| (format!("F0.{n}"), format!("size{}", degenerate_orbit_size(n, q)), 1))
        .collect();
    let deg_ref: Vec<(&str, &str, i64)> = deg.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), *c)).collect();
    tally(&mut cells, "discriminant-zero", &deg_ref, &degenerate);

    let generic = census.orbits.iter().filter(|o| o.j.is_some()).count() as i64;
    let generic_size: u64 = census.orbits.iter().filter(|o| o.j.is_some()).map(|o| o.size).sum();
    let checks = vec![
        check(
            "quartic orbit count",
            generic == 2 * q as i64 + 2 + mu,
            format!("expected={} actual={generic}", 2 * q as i64 + 2 + mu),
        ),
        check(
            "quartic nonzero-discriminant total",
            generic_size == q.pow(4) - q * q,
            format!("expected={} actual={generic_size}", q.pow(4) - q * q),
        ),
    ];
    Ok((cells, checks))
}

/// Cells of the generic line table and the non-generic line orbits.
pub fn line_cells(census: &OrbitCensus, f: &FieldCtx) -> Result<(Vec<Cell>, Vec<Check>)> {
    let q = census.q;
    let g = census.group_order();
    let plus = j_plus_sets(f)?;
    let (mu, ..) = j_set_sizes(q);
    let (p1, p2, p4) = j_plus_sizes(q);
    let pm1 = q % 12 == 1 || q % 12 == 11;
    let mut actual = BTreeMap::new();
    let mut totals = BTreeMap::new();
    let mut nongeneric = BTreeMap::new();
    let mut self_dual = BTreeMap::new();
    for o in &census.orbits {
        let OrbitLabel::Line(label) = o.label else {
            continue;
        };
        match label {
            LineLabel::Nongeneric(n) => {
                *nongeneric.entry((n.to_string(), format!("size{}", o.size))).or_insert(0) += 1;
            }
            LineLabel::Generic(_, branch) => {
                let r = o.j.expect("generic lines have a j-invariant");
                let row = j_row(r, q, &plus, true);
                let col = size_col(g, o.size);
                *actual.entry((row.clone(), col.clone())).or_insert(0) += 1;
                *totals.entry(("total".to_string(), col.clone())).or_insert(0) += 1;
                let sd = branch == Branch::SelfDual;
                *self_dual.entry((row, format!("{col} {}", if sd { "sd" } else { "pair" }))).or_insert(0) += 1;
            }
        }
    }
    let mut cells = Vec::new();
    let (c1728_2, c1728_4) = if pm1 { (0, 4) } else { (2, 0) };
    let expected = [
        ("J4+", "G/4", 8 * p4),
        ("J2+", "G/2", 4 * p2),
        ("J1+", "G", 2 * p1),
        ("j=1728", "G/2", c1728_2),
        ("j=1728", "G/4", c1728_4),
        ("j=0", "G/2", 1 - mu),
        ("j=0", "G/3", 1 + mu),
        ("j=0", "G/4", (1 + mu) / 2),
        ("j=0", "G/12", (1 + mu) / 2),
    ];
    tally(&mut cells, "line", &expected, &actual);

    // row totals in closed form
    let qi = q as i64;
    let conj = if mu == 1 {
        [(qi - 1) / 3, qi - 1, 2, (2 * qi - 11) / 3, 1]
    } else {
        [(qi + 1) / 3, qi - 1, 0, (2 * qi - 10) / 3, 0]
    };
    let cols = ["G", "G/2", "G/3", "G/4", "G/12"];
    let exp_tot: Vec<(&str, &str, i64)> = cols.iter().zip(conj).map(|(c, e)| ("total", *c, e)).collect();
    tally(&mut cells, "line-total", &exp_tot, &totals);

    let mut sd_exp = vec![
        ("J4+", "G/4 pair", 8 * p4),
        ("J2+", "G/2 pair", 4 * p2),
        ("J1+", "G pair", 2 * p1),
        ("j=0", "G/2 sd", 1 - mu),
        ("j=0", "G/3 sd", 1 + mu),
        ("j=0", "G/4 sd", (1 + mu) / 2),
        ("j=0", "G/12 sd", (1 + mu) / 2),
    ];
    if pm1 {
        sd_exp.push(("j=1728", "G/4 sd", 2));
        sd_exp.push(("j=1728", "G/4 pair", 2));
    } else {
        sd_exp.push(("j=1728", "G/2 sd", 2));
    }
    tally(&mut cells, "line-duality", &sd_exp, &self_dual);

    let ng: Vec<(String, String, i64)> = NongenericLabel::ALL
        .iter()
        .map(|n| (n.to_string(), format!("size{}", n.orbit_size(q)), 1))
        .collect();
    let ng_ref: Vec<(&str, &str, i64)> = ng.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), *c)).collect();
    tally(&mut cells, "nongeneric", &ng_ref, &nongeneric);

    let generic = census.orbits.iter().filter(|o| o.j.is_some()).count() as i64;
    let want = if mu == 1 { 2 * qi - 2 } else { 2 * qi - 4 };
    // a second closed form for the G/4 total, with the mu terms merged
    let printed = (2 * qi - 10 - (1 + mu) / 2) / 3;
    let checks = vec![
        check(
            "generic line orbit count",
            generic == want,
            format!("expected={want} actual={generic}"),
        ),
        check(
            "G/4 total closed forms agree",
            printed == conj[3],
            format!("merged={printed} split={}", conj[3]),
        ),
    ];
    Ok((cells, checks))
}

/// Partition, orbit-stabilizer and label-consistency checks of a census.
pub fn census_checks(c: &OrbitCensus) -> Vec<Check> {
    let sum: u64 = c.orbits.iter().map(|o| o.size).sum();
    let g = c.group_order();
    let orbit_stab = c.orbits.iter().all(|o| o.size * o.stabilizer_order == g);
    vec![
        check(
            format!("{} partition total", c.ground),
            sum == c.ground_size() && c.total == c.ground_size(),
            format!("expected={} actual={sum}", c.ground_size()),
        ),
        check(
            format!("{} orbit-stabilizer", c.ground),
            orbit_stab && c.stabilizer_mismatches == 0,
            format!("scan mismatches={}", c.stabilizer_mismatches),
        ),
        check(
            format!("{} labels constant on orbits", c.ground),
            c.label_mismatches == 0,
            format!("mismatches={}", c.label_mismatches),
        ),
    ]
}

fn point_checks(c: &OrbitCensus) -> Vec<Check> {
    let q = c.q;
    let mut out = census_checks(c);
    let mut by_label: BTreeMap<u8, (u64, u64)> = BTreeMap::new();
    for o in &c.orbits {
        if let OrbitLabel::Point(l) = o.label {
            let e = by_label.entry(l as u8).or_default();
            e.0 += 1;
            e.1 = o.size;
        }
    }
    let labels = [
        CubicLabel::Triple,
        CubicLabel::DoubleSimple,
        CubicLabel::ThreeRational,
        CubicLabel::OneRational,
        CubicLabel::Irreducible,
    ];
    for l in labels {
        let got = by_label.get(&(l as u8)).copied().unwrap_or((0, 0));
        out.push(check(
            format!("point orbit {}", l as u8),
            got == (1, l.orbit_size(q)),
            format!("orbits={} size={} expected size={}", got.0, got.1, l.orbit_size(q)),
        ));
    }
    out.push(check(
        "point orbit count",
        c.orbits.len() == 5,
        format!("actual={}", c.orbits.len()),
    ));
    out
}

/// Options for [`verify_tables`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Largest `q` for which the line census runs.
    pub line_bound: u64,
    /// Include per-orbit records in the report.
    pub records: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            line_bound: LINE_CENSUS_BOUND,
            records: true,
        }
    }
}

/// Field parameters recorded in every report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldHeader {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    pub modulus: String,
    pub gamma: u32,
    pub epsilon: Option<u32>,
    pub omega: Option<u32>,
}

impl FieldHeader {
    pub fn of(f: &FieldCtx) -> Self {
        FieldHeader {
            p: f.p(),
            k: f.k(),
            q: f.q(),
            modulus: f.modulus_string(),
            gamma: f.generator().value(),
            epsilon: f.epsilon().map(|e| e.value()),
            omega: f.omega().map(|w| w.value()),
        }
    }
}

/// Outcome of checking every table at one `q`.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub q: u64,
    pub field: Option<FieldHeader>,
    /// Set when the field could not be built or is unsupported.
    pub error: Option<Error>,
    pub cells: Vec<Cell>,
    pub checks: Vec<Check>,
    pub censuses: Vec<OrbitCensus>,
    pub records: bool,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.error.is_none() && self.failures().is_empty()
    }

    /// Descriptions of every failing cell and check.
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .cells
            .iter()
            .filter(|c| !c.pass())
            .map(|c| format!("{} {} {}: expected {} got {}", c.table, c.row, c.col, c.expected, c.actual))
            .collect();
        out.extend(self.checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)));
        out
    }

    fn error_report(q: u64, field: Option<FieldHeader>, e: Error) -> Self {
        VerificationReport {
            q,
            field,
            error: Some(e),
            cells: Vec::new(),
            checks: Vec::new(),
            censuses: Vec::new(),
            records: false,
        }
    }

    pub fn census(&self, ground: GroundSet) -> Option<&OrbitCensus> {
        self.censuses.iter().find(|c| c.ground == ground)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        writeln!(s, "report q={}", self.q)?;
        if let Some(h) = &self.field {
            let opt = |x: Option<u32>| x.map_or("none".to_string(), |v| v.to_string());
            writeln!(
                s,
                "field p={} k={} q={} modulus={} gamma={} epsilon={} omega={}",
                h.p,
                h.k,
                h.q,
                h.modulus,
                h.gamma,
                opt(h.epsilon),
                opt(h.omega)
            )?;
        }
        if let Some(e) = &self.error {
            writeln!(s, "status error code={} message={}", e.code(), e)?;
            return f.write_str(&s);
        }
        writeln!(s, "status {}", if self.pass() { "pass" } else { "fail" })?;
        writeln!(s, "[cells]")?;
        for c in &self.cells {
            writeln!(
                s,
                "{} row={} col={} expected={} actual={} {}",
                c.table,
                c.row,
                c.col,
                c.expected,
                c.actual,
                if c.pass() { "pass" } else { "FAIL" }
            )?;
        }
        writeln!(s, "[checks]")?;
        for c in &self.checks {
            writeln!(s, "{} {}: {}", if c.pass { "pass" } else { "FAIL" }, c.name, c.detail)?;
        }
        if self.records {
            for c in &self.censuses {
                write!(s, "{}", CensusRecords(c))?;
            }
        }
        f.write_str(&s)
    }
}

/// Per-orbit records of a census, one line each.
pub struct CensusRecords<'c>(pub &'c OrbitCensus);

impl fmt::Display for CensusRecords<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        writeln!(f, "[orbits {} q={} count={} total={}]", c.ground, c.q, c.orbits.len(), c.total)?;
        for o in &c.orbits {
            let rep: Vec<String> = o.representative.iter().map(|v| v.to_string()).collect();
            writeln!(
                f,
                "label={} size={} stabilizer={} j={} rep={}",
                o.label,
                o.size,
                o.stabilizer_order,
                o.j.map_or("none".to_string(), |j| j.to_string()),
                rep.join(",")
            )?;
        }
        Ok(())
    }
}

/// Runs every census and table check available at this field.
pub fn verify_tables(f: &FieldCtx, opts: VerifyOptions) -> VerificationReport {
    let header = FieldHeader::of(f);
    let q = f.q();
    match verify_inner(f, opts) {
        Ok((cells, checks, censuses)) => VerificationReport {
            q,
            field: Some(header),
            error: None,
            cells,
            checks,
            censuses,
            records: opts.records,
        },
        Err(e) => VerificationReport::error_report(q, Some(header), e),
    }
}

type Parts = (Vec<Cell>, Vec<Check>, Vec<OrbitCensus>);

fn verify_inner(f: &FieldCtx, opts: VerifyOptions) -> Result<Parts> {
    f.require_classifiable()?;
    let mut cells = Vec::new();
    let mut checks = j_set_checks(f)?;

    let points = census_points(f)?;
    checks.extend(point_checks(&points));

    let quartics = census_quartics(f)?;
    checks.extend(census_checks(&quartics));
    let (c, k) = quartic_cells(&quartics, f)?;
    cells.extend(c);
    checks.extend(k);

    let mut censuses = vec![points, quartics];
    if f.q() <= opts.line_bound {
        let lines = census_lines(f)?;
        checks.extend(census_checks(&lines));
        checks.push(check(
            "lines polarity maps orbits to partners",
            lines.polarity_mismatches == 0,
            format!("mismatches={}", lines.polarity_mismatches),
        ));
        let (c, k) = line_cells(&lines, f)?;
        cells.extend(c);
        checks.extend(k);
        censuses.push(lines);
    } else {
        checks.push(check(
            "line census skipped",
            true,
            format!("q above bound {}", opts.line_bound),
        ));
    }
    Ok((cells, checks, censuses))
}

/// Splits `q` as `p^k` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut r = q;
    let mut k = 0;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// Verifies each `q` and writes `report-q<q>.txt` into `out_dir`. Work
/// runs on a pool of `jobs` threads; report bytes do not depend on it.
pub fn sweep(q_list: &[u64], jobs: usize, out_dir: &Path, opts: VerifyOptions) -> Result<Vec<(PathBuf, VerificationReport)>> {
    fs::create_dir_all(out_dir).map_err(|e| Error::Io(e.to_string()))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    let mut out = Vec::new();
    for &q in q_list {
        let report = pool.install(|| match prime_power(q) {
            None => VerificationReport::error_report(q, None, Error::NotPrimePower(q)),
            Some((p, k)) => match crate::field_tower::make_field(p, k) {
                Ok(f) => verify_tables(&f, opts),
                Err(e) => VerificationReport::error_report(q, None, e),
            },
        });
        let path = out_dir.join(format!("report-q{q}.txt"));
        fs::write(&path, report.to_string()).map_err(|e| Error::Io(e.to_string()))?;
        out.push((path, report));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_tower::make_field;

    #[test]
    fn union_find_roots_are_minima() {
        let images = vec![vec![3], vec![1], vec![0], vec![2]];
        assert_eq!(partition(&images), vec![0, 1, 0, 0]);
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(25), Some((5, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn closed_form_set_sizes() {
        assert_eq!(j_set_sizes(7), (1, 2, 3, 0));
        assert_eq!(j_set_sizes(13), (1, 4, 6, 1));
        assert_eq!(j_plus_sizes(13), (2, 3, 0));
    }

    #[test]
    fn point_census_small() {
        let f = make_field(5, 1).unwrap();
        let c = census_points(&f).unwrap();
        assert!(point_checks(&c).iter().all(|c| c.pass));
    }
}
