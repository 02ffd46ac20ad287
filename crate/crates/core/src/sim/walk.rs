use rand::Rng;

use super::topology::{LatticeTopology, Site, MAX_DEGREE};
use crate::arith::{to_f64, BigRational};

/// Occupancy grid with generation stamps, so that starting a new walk is
/// O(1). Grows on demand in both directions.
#[derive(Clone, Debug)]
struct Occupancy {
    stamp: u32,
    cells: Vec<u32>,
    x0: i32,
    y0: i32,
    w: i32,
    h: i32,
}

impl Occupancy {
    fn new(x0: i32, y0: i32, w: i32, h: i32) -> Self {
        Self {
            stamp: 1,
            cells: vec![0; (w as usize) * (h as usize)],
            x0,
            y0,
            w,
            h,
        }
    }

    #[inline]
    fn index(&self, (x, y): Site) -> Option<usize> {
        let i = x - self.x0;
        let j = y - self.y0;
        if i < 0 || j < 0 || i >= self.w || j >= self.h {
            None
        } else {
            Some((j as usize) * (self.w as usize) + i as usize)
        }
    }

    #[inline]
    fn contains(&self, s: Site) -> bool {
        self.index(s).is_some_and(|k| self.cells[k] == self.stamp)
    }

    fn insert(&mut self, s: Site) {
        loop {
            if let Some(k) = self.index(s) {
                self.cells[k] = self.stamp;
                return;
            }
            self.grow(s);
        }
    }

    fn grow(&mut self, s: Site) {
        let (nx0, nw) = if s.0 < self.x0 || s.0 >= self.x0 + self.w {
            (self.x0 - self.w, self.w * 3)
        } else {
            (self.x0, self.w)
        };
        let (ny0, nh) = if s.1 < self.y0 || s.1 >= self.y0 + self.h {
            (self.y0 - self.h, self.h * 3)
        } else {
            (self.y0, self.h)
        };
        let mut next = Occupancy::new(nx0, ny0, nw, nh);
        next.stamp = self.stamp;
        for j in 0..self.h {
            for i in 0..self.w {
                let k = (j as usize) * (self.w as usize) + i as usize;
                if self.cells[k] == self.stamp {
                    let t = (self.x0 + i, self.y0 + j);
                    let nk = next.index(t).unwrap();
                    next.cells[nk] = self.stamp;
                }
            }
        }
        *self = next;
    }

    fn clear(&mut self) {
        if self.stamp == u32::MAX {
            self.cells.iter_mut().for_each(|c| *c = 0);
            self.stamp = 1;
        } else {
            self.stamp += 1;
        }
    }
}

/// Self-attraction weights `C^k`, `k = 0..=MAX_DEGREE`, as floats.
#[derive(Clone, Debug)]
pub struct Bias {
    powers: [f64; MAX_DEGREE + 1],
    uniform: bool,
}

impl Bias {
    pub fn new(c: &BigRational) -> Self {
        let cf = to_f64(c);
        let mut powers = [1.0; MAX_DEGREE + 1];
        for k in 1..=MAX_DEGREE {
            powers[k] = powers[k - 1] * cf;
        }
        Self {
            powers,
            uniform: c == &BigRational::from_integer(1.into()),
        }
    }

    pub fn unbiased() -> Self {
        Self {
            powers: [1.0; MAX_DEGREE + 1],
            uniform: true,
        }
    }

    #[inline]
    pub fn weight(&self, k: usize) -> f64 {
        self.powers[k]
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Continued,
    /// Every neighbour of the head is occupied.
    Trapped,
    /// The head reached the bounding box of an infinite lattice.
    HitWall,
}

/// A walk in progress: occupied sites, head, step count and the x-extent
/// of the visited sites.
#[derive(Clone, Debug)]
pub struct WalkState {
    occupied: Occupancy,
    head: Site,
    steps: usize,
    min_x: i32,
    max_x: i32,
}

impl WalkState {
    pub fn new(topology: &LatticeTopology) -> Self {
        let occupied = if topology.is_infinite() {
            let h = topology.box_half_width + 1;
            Occupancy::new(-h, -h, 2 * h + 1, 2 * h + 1)
        } else {
            Occupancy::new(-64, 0, 128, 2)
        };
        let mut s = Self {
            occupied,
            head: (0, 0),
            steps: 0,
            min_x: 0,
            max_x: 0,
        };
        s.reset(topology);
        s
    }

    /// Starts a fresh walk at the topology's start site.
    pub fn reset(&mut self, topology: &LatticeTopology) {
        self.occupied.clear();
        for &p in topology.phantoms() {
            self.occupied.insert(p);
        }
        let start = topology.start();
        self.occupied.insert(start);
        self.head = start;
        self.steps = 0;
        self.min_x = start.0;
        self.max_x = start.0;
    }

    pub fn head(&self) -> Site {
        self.head
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn width(&self) -> usize {
        (self.max_x - self.min_x) as usize
    }

    pub fn is_occupied(&self, s: Site) -> bool {
        self.occupied.contains(s)
    }

    /// Moves the head to `to`, which must be an unoccupied neighbour.
    pub fn advance(&mut self, to: Site) {
        debug_assert!(!self.occupied.contains(to), "walk revisited {to:?}");
        self.occupied.insert(to);
        self.head = to;
        self.steps += 1;
        self.min_x = self.min_x.min(to.0);
        self.max_x = self.max_x.max(to.0);
    }

    /// Unoccupied neighbours of the head with their occupied-neighbour
    /// counts (the head itself not counted).
    pub fn candidates(&self, topology: &LatticeTopology, out: &mut [(Site, usize); MAX_DEGREE]) -> usize {
        self.collect_candidates(topology, true, out)
    }

    fn collect_candidates(
        &self,
        topology: &LatticeTopology,
        with_counts: bool,
        out: &mut [(Site, usize); MAX_DEGREE],
    ) -> usize {
        let mut nb = [(0, 0); MAX_DEGREE];
        let mut nb2 = [(0, 0); MAX_DEGREE];
        let d = topology.neighbors(self.head, &mut nb);
        let mut m = 0;
        for &w in &nb[..d] {
            if self.occupied.contains(w) {
                continue;
            }
            if !with_counts {
                out[m] = (w, 0);
                m += 1;
                continue;
            }
            let d2 = topology.neighbors(w, &mut nb2);
            let k = nb2[..d2]
                .iter()
                .filter(|&&v| v != self.head && self.occupied.contains(v))
                .count();
            out[m] = (w, k);
            m += 1;
        }
        m
    }
}

/// One growth step. Candidates are chosen with probability proportional
/// to `C^k`, `k` being the number of occupied neighbours other than the head.
pub fn step<R: Rng + ?Sized>(
    state: &mut WalkState,
    topology: &LatticeTopology,
    bias: &Bias,
    rng: &mut R,
) -> StepOutcome {
    let mut cand = [((0, 0), 0usize); MAX_DEGREE];
    let m = state.collect_candidates(topology, !bias.is_uniform(), &mut cand);
    if m == 0 {
        return StepOutcome::Trapped;
    }
    let pick = if m == 1 {
        0
    } else if bias.is_uniform() || cand[..m].iter().all(|c| c.1 == cand[0].1) {
        rng.random_range(0..m)
    } else {
        let total: f64 = cand[..m].iter().map(|c| bias.weight(c.1)).sum();
        let mut u = rng.random::<f64>() * total;
        let mut i = 0;
        while i + 1 < m {
            u -= bias.weight(cand[i].1);
            if u < 0.0 {
                break;
            }
            i += 1;
        }
        i
    };
    let to = cand[pick].0;
    state.advance(to);
    if topology.at_wall(to) {
        StepOutcome::HitWall
    } else {
        StepOutcome::Continued
    }
}

/// Grows one walk to completion.
pub fn run_one<R: Rng + ?Sized>(
    state: &mut WalkState,
    topology: &LatticeTopology,
    bias: &Bias,
    rng: &mut R,
) -> StepOutcome {
    state.reset(topology);
    loop {
        match step(state, topology, bias, rng) {
            StepOutcome::Continued => {}
            done => return done,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::sim::topology::TopologyKind;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn occupancy_grows_and_keeps_sites() {
        let mut o = Occupancy::new(0, 0, 4, 2);
        o.insert((1, 1));
        o.insert((9, 0));
        o.insert((-7, 1));
        assert!(o.contains((1, 1)) && o.contains((9, 0)) && o.contains((-7, 1)));
        assert!(!o.contains((2, 1)));
        o.clear();
        assert!(!o.contains((1, 1)));
    }

    #[test]
    fn trapped_walks_have_no_free_neighbours() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in [
            TopologyKind::SquareLadderTwoSided,
            TopologyKind::SquareLadderOneSidedWall,
            TopologyKind::TriangularLadderTwoSided,
        ] {
            let t = LatticeTopology::new(kind);
            let mut s = WalkState::new(&t);
            for _ in 0..500 {
                assert_eq!(run_one(&mut s, &t, &Bias::new(&int(2)), &mut rng), StepOutcome::Trapped);
                let mut nb = [(0, 0); MAX_DEGREE];
                let d = t.neighbors(s.head(), &mut nb);
                assert!(nb[..d].iter().all(|&v| s.is_occupied(v)));
            }
        }
    }

    #[test]
    fn wall_variant_first_step_energies() {
        let t = LatticeTopology::new(TopologyKind::SquareLadderOneSidedWall);
        let s = WalkState::new(&t);
        let mut c = [((0, 0), 0); MAX_DEGREE];
        let m = s.candidates(&t, &mut c);
        let mut got: Vec<_> = c[..m].to_vec();
        got.sort();
        // north has the phantom as a neighbour, east has none
        assert_eq!(got, vec![((0, 1), 1), ((1, 0), 0)]);
    }

    #[test]
    fn infinite_walk_hits_small_box() {
        let t = LatticeTopology::with_box_half_width(TopologyKind::InfiniteSquare, 3);
        let mut s = WalkState::new(&t);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let hits = (0..200)
            .filter(|_| run_one(&mut s, &t, &Bias::unbiased(), &mut rng) == StepOutcome::HitWall)
            .count();
        assert!(hits > 0);
    }
}
