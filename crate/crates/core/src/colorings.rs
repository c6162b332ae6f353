//! Colorings, templates and the rainbow 3-AP hypergraph.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::numbers::{count_3aps_interval, list_3aps, ApTriple, Structure};

pub type Color = u8;

/// An `r`-coloring of a structure's support. Colors are `1..=r`; `colors[i]`
/// is the color of `structure.support()[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    structure: Structure,
    r: usize,
    colors: Vec<Color>,
}

impl Coloring {
    pub fn new(structure: Structure, r: usize, colors: Vec<Color>) -> Result<Self> {
        if r == 0 || r > Color::MAX as usize {
            return Err(Error::InvalidParameter(format!("color count {r} out of range")));
        }
        if colors.len() != structure.len() {
            return Err(Error::InvalidParameter(format!(
                "coloring has {} entries for a support of size {}",
                colors.len(),
                structure.len()
            )));
        }
        if let Some(&bad) = colors.iter().find(|&&c| c == 0 || c as usize > r) {
            return Err(Error::InvalidParameter(format!("color {bad} not in [1, {r}]")));
        }
        Ok(Coloring { structure, r, colors })
    }

    /// Builds a coloring from a function of the element.
    pub fn from_fn(structure: Structure, r: usize, f: impl Fn(usize) -> Color) -> Result<Self> {
        let colors = structure.support().iter().map(|&x| f(x)).collect();
        Self::new(structure, r, colors)
    }

    pub(crate) fn from_parts_unchecked(structure: Structure, r: usize, colors: Vec<Color>) -> Self {
        Coloring { structure, r, colors }
    }

    pub(crate) fn colors_mut(&mut self) -> &mut [Color] {
        &mut self.colors
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color_of(&self, x: usize) -> Option<Color> {
        self.structure.index_of(x).map(|i| self.colors[i])
    }

    /// Number of distinct colors actually used.
    pub fn colors_used(&self) -> usize {
        let mut seen = 0u64;
        for &c in &self.colors {
            seen |= 1 << (c - 1);
        }
        seen.count_ones() as usize
    }

    /// Uses all `r` colors.
    pub fn is_exact(&self) -> bool {
        self.colors_used() == self.r
    }

    /// How many elements carry color `c`.
    pub fn multiplicity(&self, c: Color) -> usize {
        self.colors.iter().filter(|&&x| x == c).count()
    }

    pub fn to_template(&self) -> Template {
        let mut palettes = vec![Palette::EMPTY; self.structure.n() + 1];
        for (&x, &c) in self.structure.support().iter().zip(&self.colors) {
            palettes[x] = Palette::single(c);
        }
        Template { structure: self.structure.clone(), r: self.r, palettes }
    }
}

/// Returns a rainbow 3-AP of `c`, if there is one.
pub fn has_rainbow_3ap(c: &Coloring) -> Option<ApTriple> {
    let s = c.structure();
    list_3aps(s).into_iter().find(|t| {
        let [x, y, z] = t.elements().map(|e| c.color_of(e).expect("progression inside support"));
        x != y && x != z && y != z
    })
}

/// Returns a rainbow k-AP (all k colors distinct), if there is one.
pub fn has_rainbow_kap(c: &Coloring, k: usize) -> Option<Vec<usize>> {
    crate::numbers::list_kaps(c.structure(), k).into_iter().map(|p| p.elements).find(|elems| {
        let mut mask = 0u64;
        for &e in elems {
            mask |= 1 << (c.color_of(e).expect("progression inside support") - 1);
        }
        mask.count_ones() as usize == elems.len()
    })
}

/// A set of colors out of `[r]`, `r <= 64`. Bit `c-1` stands for color `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Palette(pub u64);

impl Palette {
    pub const EMPTY: Palette = Palette(0);

    pub fn single(c: Color) -> Self {
        Palette(1 << (c - 1))
    }

    pub fn full(r: usize) -> Self {
        if r >= 64 {
            Palette(u64::MAX)
        } else {
            Palette((1u64 << r) - 1)
        }
    }

    pub fn from_colors(colors: &[Color]) -> Self {
        Palette(colors.iter().fold(0, |m, &c| m | (1 << (c - 1))))
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, c: Color) -> bool {
        (1..=64).contains(&c) && self.0 & (1 << (c - 1)) != 0
    }

    pub fn is_subset(self, other: Palette) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn colors(self) -> impl Iterator<Item = Color> {
        (1..=64u8).filter(move |&c| self.contains(c))
    }
}

impl std::ops::BitAnd for Palette {
    type Output = Palette;
    fn bitand(self, rhs: Palette) -> Palette {
        Palette(self.0 & rhs.0)
    }
}

/// An `r`-template: a palette for every element of the ambient range.
/// `palettes` is indexed by element value (index 0 unused for intervals).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    structure: Structure,
    r: usize,
    palettes: Vec<Palette>,
}

impl Template {
    /// Builds a template from `(element, palette)` pairs; unlisted elements
    /// get the empty palette.
    pub fn new(structure: Structure, r: usize, entries: &[(usize, Palette)]) -> Result<Self> {
        if r == 0 || r > 64 {
            return Err(Error::InvalidParameter(format!("template color count {r} out of range")));
        }
        let mut palettes = vec![Palette::EMPTY; structure.n() + 1];
        let ambient = structure.ambient();
        for &(x, p) in entries {
            if ambient.binary_search(&x).is_err() {
                return Err(Error::InvalidParameter(format!("element {x} outside the ambient range")));
            }
            if !p.is_subset(Palette::full(r)) {
                return Err(Error::InvalidParameter(format!("palette at {x} uses colors beyond {r}")));
            }
            palettes[x] = p;
        }
        Ok(Template { structure, r, palettes })
    }

    /// `P(x) = [r]` on the whole support.
    pub fn full(structure: Structure, r: usize) -> Result<Self> {
        let entries: Vec<(usize, Palette)> =
            structure.support().iter().map(|&x| (x, Palette::full(r))).collect();
        Self::new(structure, r, &entries)
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn palette(&self, x: usize) -> Palette {
        self.palettes.get(x).copied().unwrap_or_default()
    }

    pub fn set_palette(&mut self, x: usize, p: Palette) -> Result<()> {
        if self.structure.ambient().binary_search(&x).is_err() {
            return Err(Error::InvalidParameter(format!("element {x} outside the ambient range")));
        }
        if !p.is_subset(Palette::full(self.r)) {
            return Err(Error::InvalidParameter(format!("palette at {x} uses colors beyond {}", self.r)));
        }
        self.palettes[x] = p;
        Ok(())
    }
}

/// Pointwise palette inclusion.
pub fn is_subtemplate(p1: &Template, p2: &Template) -> Result<bool> {
    if p1.structure != p2.structure || p1.r != p2.r {
        return Err(Error::DimensionMismatch(format!(
            "{} with r={} vs {} with r={}",
            p1.structure, p1.r, p2.structure, p2.r
        )));
    }
    Ok(p1.palettes.iter().zip(&p2.palettes).all(|(a, b)| a.is_subset(*b)))
}

/// Number of ways to pick pairwise distinct colors from three palettes,
/// one per palette.
pub fn distinct_choices(a: Palette, b: Palette, c: Palette) -> u64 {
    let (na, nb, nc) = (a.len() as u64, b.len() as u64, c.len() as u64);
    let ab = (a & b).len() as u64;
    let ac = (a & c).len() as u64;
    let bc = (b & c).len() as u64;
    let abc = (a & b & c).len() as u64;
    na * nb * nc + 2 * abc - ab * nc - ac * nb - bc * na
}

/// `R(P)`: the number of subtemplates of `P` that are rainbow 3-APs. Only
/// progressions lying entirely in the template's support are counted.
pub fn count_rainbow_subtemplates(p: &Template) -> u128 {
    list_3aps(&p.structure)
        .iter()
        .map(|t| distinct_choices(p.palette(t.a), p.palette(t.b), p.palette(t.c)) as u128)
        .sum()
}

/// Degree statistics of the 3-uniform hypergraph on `[n] x [r]` whose edges
/// are the rainbow-colored 3-APs of `[n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergraphStats {
    pub n: usize,
    pub r: usize,
    pub vertex_count: u64,
    pub edge_count: u128,
    /// Maximum co-degree over vertex pairs.
    pub max_codegree_2: u64,
    /// Maximum co-degree over vertex triples.
    pub max_codegree_3: u64,
    /// `3|E| / |V|`.
    pub average_degree: Ratio<u128>,
}

/// Number of 3-APs of `[n]` that contain both `x < y`.
pub fn interval_pair_ap_count(n: usize, x: usize, y: usize) -> u64 {
    debug_assert!(x < y);
    let mut count = 0;
    if 2 * x > y {
        count += 1; // (2x - y, x, y)
    }
    if 2 * y - x <= n {
        count += 1; // (x, y, 2y - x)
    }
    if (x + y).is_multiple_of(2) {
        count += 1; // (x, (x+y)/2, y)
    }
    count
}

/// Computed without materialising the hypergraph: `|E|` in closed form, the
/// pair co-degree by probing every element pair once.
pub fn rainbow_hypergraph_stats(n: usize, r: usize) -> Result<HypergraphStats> {
    if n < 3 || r < 3 {
        return Err(Error::InvalidParameter(format!("need n >= 3 and r >= 3, got n={n}, r={r}")));
    }
    let f = count_3aps_interval(n as u64) as u128;
    let rainbow_per_ap = (r * (r - 1) * (r - 2)) as u128;
    let edge_count = rainbow_per_ap * f;
    let vertex_count = (n * r) as u64;

    // A pair of vertices (x,i), (y,j) with x != y and i != j lies in one edge
    // per 3-AP through {x,y} and per third color; equal colors or equal
    // elements give co-degree zero.
    let mut max_pair_aps = 0;
    for x in 1..=n {
        for y in x + 1..=n {
            max_pair_aps = max_pair_aps.max(interval_pair_ap_count(n, x, y));
        }
    }
    let max_codegree_2 = max_pair_aps * (r as u64 - 2);
    // A rainbow triple of vertices is an edge of its own and of nothing else.
    let max_codegree_3 = u64::from(edge_count > 0);

    Ok(HypergraphStats {
        n,
        r,
        vertex_count,
        edge_count,
        max_codegree_2,
        max_codegree_3,
        average_degree: Ratio::new(3 * edge_count, vertex_count as u128),
    })
}
