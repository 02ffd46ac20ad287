use std::fmt;
use std::str::FromStr;

use serde::Serialize;

pub type Site = (i32, i32);

/// Largest coordination number of any supported lattice.
pub const MAX_DEGREE: usize = 6;

/// Default half-width of the bounding box on infinite lattices (a 512 x 512
/// grid with the walk started at its centre).
pub const DEFAULT_BOX_HALF_WIDTH: i32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corner {
    /// `(1, 1)`, three neighbours.
    Wide,
    /// `(0, 0)`, two neighbours.
    Narrow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sublattice {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "start")]
pub enum TopologyKind {
    SquareLadderOneSided,
    /// One-sided square ladder with both sites of the column `x = -1`
    /// permanently occupied.
    SquareLadderOneSidedWall,
    SquareLadderTwoSided,
    TriangularLadderOneSided(Corner),
    TriangularLadderTwoSided,
    InfiniteSquare,
    InfiniteTriangular,
    InfiniteHoneycomb(Sublattice),
}

/// Neighbour structure of a walk substrate.
///
/// Square ladders use sites `(x, y)` with `y` in `{0, 1}`. Triangular
/// ladders use `(a, b)` with `b` in `{0, 1}` and `a + b` even; the
/// neighbours of `(a, b)` are `(a +- 2, b)` and `(a +- 1, 1 - b)`. The
/// infinite triangular lattice is a sheared square grid with the extra
/// diagonal `(1, -1)`, and the honeycomb is a brick wall whose vertical
/// bond from `(x, y)` goes up when `x + y` is even and down otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeTopology {
    pub kind: TopologyKind,
    pub box_half_width: i32,
}

impl LatticeTopology {
    pub fn new(kind: TopologyKind) -> Self {
        Self {
            kind,
            box_half_width: DEFAULT_BOX_HALF_WIDTH,
        }
    }

    pub fn with_box_half_width(kind: TopologyKind, h: i32) -> Self {
        Self {
            kind,
            box_half_width: h,
        }
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }

    pub fn is_ladder(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_infinite(&self) -> bool {
        matches!(
            self.kind,
            TopologyKind::InfiniteSquare
                | TopologyKind::InfiniteTriangular
                | TopologyKind::InfiniteHoneycomb(_)
        )
    }

    pub fn start(&self) -> Site {
        match self.kind {
            TopologyKind::TriangularLadderOneSided(Corner::Wide) => (1, 1),
            TopologyKind::InfiniteHoneycomb(Sublattice::B) => (1, 0),
            _ => (0, 0),
        }
    }

    /// Sites occupied before the first step that are not part of the walk.
    pub fn phantoms(&self) -> &'static [Site] {
        match self.kind {
            TopologyKind::SquareLadderOneSidedWall => &[(-1, 0), (-1, 1)],
            _ => &[],
        }
    }

    /// Whether `s` is a site of the lattice (phantoms included).
    pub fn contains(&self, s: Site) -> bool {
        let (x, y) = s;
        match self.kind {
            TopologyKind::SquareLadderOneSided => x >= 0 && (0..=1).contains(&y),
            TopologyKind::SquareLadderOneSidedWall => x >= -1 && (0..=1).contains(&y),
            TopologyKind::SquareLadderTwoSided => (0..=1).contains(&y),
            TopologyKind::TriangularLadderOneSided(_) => {
                x >= 0 && (0..=1).contains(&y) && (x + y).rem_euclid(2) == 0
            }
            TopologyKind::TriangularLadderTwoSided => {
                (0..=1).contains(&y) && (x + y).rem_euclid(2) == 0
            }
            _ => true,
        }
    }

    /// Writes the lattice neighbours of `s` into `out`, returning how many.
    #[inline]
    pub fn neighbors(&self, s: Site, out: &mut [Site; MAX_DEGREE]) -> usize {
        let (x, y) = s;
        let mut n = 0;
        let mut push = |t: Site, out: &mut [Site; MAX_DEGREE]| {
            if self.contains(t) {
                out[n] = t;
                n += 1;
            }
        };
        match self.kind {
            TopologyKind::SquareLadderOneSided
            | TopologyKind::SquareLadderOneSidedWall
            | TopologyKind::SquareLadderTwoSided => {
                push((x + 1, y), out);
                push((x - 1, y), out);
                push((x, 1 - y), out);
            }
            TopologyKind::TriangularLadderOneSided(_) | TopologyKind::TriangularLadderTwoSided => {
                push((x + 2, y), out);
                push((x - 2, y), out);
                push((x + 1, 1 - y), out);
                push((x - 1, 1 - y), out);
            }
            TopologyKind::InfiniteSquare => {
                for d in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                    push((x + d.0, y + d.1), out);
                }
            }
            TopologyKind::InfiniteTriangular => {
                for d in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)] {
                    push((x + d.0, y + d.1), out);
                }
            }
            TopologyKind::InfiniteHoneycomb(_) => {
                push((x + 1, y), out);
                push((x - 1, y), out);
                let dy = if (x + y).rem_euclid(2) == 0 { 1 } else { -1 };
                push((x, y + dy), out);
            }
        }
        n
    }

    /// Whether `s` lies on or beyond the bounding box of an infinite lattice.
    #[inline]
    pub fn at_wall(&self, s: Site) -> bool {
        self.is_infinite() && (s.0.abs() >= self.box_half_width || s.1.abs() >= self.box_half_width)
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TopologyKind::SquareLadderOneSided => "square-ladder-one-sided",
            TopologyKind::SquareLadderOneSidedWall => "square-ladder-one-sided-wall",
            TopologyKind::SquareLadderTwoSided => "square-ladder-two-sided",
            TopologyKind::TriangularLadderOneSided(Corner::Wide) => "triangular-ladder-wide",
            TopologyKind::TriangularLadderOneSided(Corner::Narrow) => "triangular-ladder-narrow",
            TopologyKind::TriangularLadderTwoSided => "triangular-ladder-two-sided",
            TopologyKind::InfiniteSquare => "infinite-square",
            TopologyKind::InfiniteTriangular => "infinite-triangular",
            TopologyKind::InfiniteHoneycomb(Sublattice::A) => "infinite-honeycomb",
            TopologyKind::InfiniteHoneycomb(Sublattice::B) => "infinite-honeycomb-b",
        })
    }
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 10] = [
        TopologyKind::SquareLadderOneSided,
        TopologyKind::SquareLadderOneSidedWall,
        TopologyKind::SquareLadderTwoSided,
        TopologyKind::TriangularLadderOneSided(Corner::Wide),
        TopologyKind::TriangularLadderOneSided(Corner::Narrow),
        TopologyKind::TriangularLadderTwoSided,
        TopologyKind::InfiniteSquare,
        TopologyKind::InfiniteTriangular,
        TopologyKind::InfiniteHoneycomb(Sublattice::A),
        TopologyKind::InfiniteHoneycomb(Sublattice::B),
    ];
}

impl FromStr for TopologyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        TopologyKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| {
                let names: Vec<String> = TopologyKind::ALL.iter().map(|k| k.to_string()).collect();
                format!("unknown lattice {s:?}; expected one of {}", names.join(", "))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn degree(t: &LatticeTopology, s: Site) -> usize {
        let mut buf = [(0, 0); MAX_DEGREE];
        t.neighbors(s, &mut buf)
    }

    #[test]
    fn coordination_numbers() {
        let sq = LatticeTopology::new(TopologyKind::InfiniteSquare);
        let tri = LatticeTopology::new(TopologyKind::InfiniteTriangular);
        for s in [(0, 0), (3, -7), (-12, 5)] {
            assert_eq!(degree(&sq, s), 4);
            assert_eq!(degree(&tri, s), 6);
        }
        for sub in [Sublattice::A, Sublattice::B] {
            let hc = LatticeTopology::new(TopologyKind::InfiniteHoneycomb(sub));
            for x in -3..3 {
                for y in -3..3 {
                    assert_eq!(degree(&hc, (x, y)), 3);
                }
            }
        }
    }

    #[test]
    fn honeycomb_bonds_are_symmetric() {
        let hc = LatticeTopology::new(TopologyKind::InfiniteHoneycomb(Sublattice::A));
        let mut a = [(0, 0); MAX_DEGREE];
        let mut b = [(0, 0); MAX_DEGREE];
        for x in -4..4 {
            for y in -4..4 {
                let n = hc.neighbors((x, y), &mut a);
                for &t in &a[..n] {
                    let m = hc.neighbors(t, &mut b);
                    assert!(b[..m].contains(&(x, y)));
                }
            }
        }
    }

    #[test]
    fn triangular_ladder_corners() {
        let wide = LatticeTopology::new(TopologyKind::TriangularLadderOneSided(Corner::Wide));
        let narrow = LatticeTopology::new(TopologyKind::TriangularLadderOneSided(Corner::Narrow));
        assert_eq!(degree(&wide, wide.start()), 3);
        assert_eq!(degree(&narrow, narrow.start()), 2);
        let two = LatticeTopology::new(TopologyKind::TriangularLadderTwoSided);
        assert_eq!(degree(&two, (4, 0)), 4);
        assert!(!two.contains((1, 0)));
    }

    #[test]
    fn names_round_trip() {
        for k in TopologyKind::ALL {
            assert_eq!(k.to_string().parse::<TopologyKind>().unwrap(), k);
        }
        assert!("cubic".parse::<TopologyKind>().is_err());
    }
}
