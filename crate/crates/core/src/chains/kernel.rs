//! Exact transition rows of the three chains, in rational arithmetic.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{SubsetSpace, UnionFind};
use crate::measures::Params;
use crate::rational::{int, Powers, Rational};

/// One sparse row: `(target mask, probability)` in increasing mask order.
pub type Row = Vec<(u64, Rational)>;

fn q_power(q: &Rational, diff: i64) -> Rational {
    match diff {
        0 => Rational::one(),
        d if d > 0 => crate::rational::pow(q, d as usize),
        d => crate::rational::pow(&q.recip(), (-d) as usize),
    }
}

/// π_RC(z ⊕ {e}) / π_RC(z) from the local change in κ alone.
pub fn rc_ratio(space: &SubsetSpace, params: &Params, z: u64, e: usize) -> Rational {
    let p = params.p_rc();
    let odds = p / (Rational::one() - p);
    let flipped = z ^ (1 << e);
    let diff = space.kappa(flipped) as i64 - space.kappa(z) as i64;
    let base = if z >> e & 1 == 0 { odds } else { odds.recip() };
    base * q_power(params.q(), diff)
}

fn metropolis(m: usize, ratio: Rational) -> Rational {
    let accept = if ratio > Rational::one() {
        Rational::one()
    } else {
        ratio
    };
    accept / int(2 * m as i64)
}

/// P_RC(z, z ⊕ {e}) = (1/2m) min{1, π(z⊕{e})/π(z)}.
pub fn rc_flip_probability(space: &SubsetSpace, params: &Params, z: u64, e: usize) -> Rational {
    metropolis(space.edge_count(), rc_ratio(space, params, z, e))
}

fn with_loop(z: u64, mut moves: Vec<(u64, Rational)>) -> Row {
    let out: Rational = moves.iter().map(|(_, p)| p).sum();
    moves.push((z, Rational::one() - out));
    moves.retain(|(_, p)| !p.is_zero());
    moves.sort_by_key(|(t, _)| *t);
    moves
}

pub fn rc_row(space: &SubsetSpace, params: &Params, z: u64) -> Result<Row> {
    params.require_open_rc()?;
    let moves = (0..space.edge_count())
        .map(|e| (z ^ (1 << e), rc_flip_probability(space, params, z, e)))
        .collect();
    Ok(with_loop(z, moves))
}

/// w_worm(w ⊕ {e}) / w_worm(w), or `None` when the flip leaves Ω_worm.
pub fn worm_ratio(space: &SubsetSpace, params: &Params, w: u64, e: usize) -> Option<Rational> {
    let to = w ^ (1 << e);
    if !space.is_worm(to) {
        return None;
    }
    let p = params.p_even();
    let odds = p / (Rational::one() - p);
    let mut ratio = if w >> e & 1 == 0 { odds } else { odds.recip() };
    match (space.is_even(w), space.is_even(to)) {
        (true, false) => ratio *= params.worm_penalty(),
        (false, true) => ratio /= params.worm_penalty(),
        _ => {}
    }
    Some(ratio)
}

pub fn worm_row(space: &SubsetSpace, params: &Params, w: u64) -> Result<Row> {
    if !space.is_worm(w) {
        return Err(Error::OutsideWormSpace(space.odd_count(w)));
    }
    let m = space.edge_count();
    let moves = (0..m)
        .filter_map(|e| worm_ratio(space, params, w, e).map(|r| (w ^ (1 << e), metropolis(m, r))))
        .collect();
    Ok(with_loop(w, moves))
}

/// One Swendsen-Wang update from `z`: recolor components, then keep each
/// monochromatic edge with probability p_rc.
pub fn sw_row(space: &SubsetSpace, params: &Params, z: u64) -> Result<Row> {
    params.require_q2()?;
    params.require_open_rc()?;
    let g = space.graph();
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut uf = UnionFind::new(n);
    for e in (0..m).filter(|e| z >> e & 1 == 1) {
        let (u, v) = g.edge(e);
        uf.union(u, v);
    }
    let mut label = vec![usize::MAX; n];
    let mut comps = 0;
    for v in 0..n {
        let r = uf.find(v);
        if label[r] == usize::MAX {
            label[r] = comps;
            comps += 1;
        }
        label[v] = label[r];
    }
    let mut by_mono: BTreeMap<u64, u64> = BTreeMap::new();
    for coloring in 0u64..1 << comps {
        let color = |v: usize| coloring >> label[v] & 1;
        let mono: u64 = (0..m)
            .filter(|&e| {
                let (u, v) = g.edge(e);
                color(u) == color(v)
            })
            .map(|e| 1u64 << e)
            .sum();
        *by_mono.entry(mono).or_default() += 1;
    }
    let p = params.p_rc();
    let ps = Powers::new(p, m);
    let qs = Powers::new(&(Rational::one() - p), m);
    let colorings = Rational::from_integer(BigInt::one() << comps);
    let mut row: BTreeMap<u64, Rational> = BTreeMap::new();
    for (mono, count) in by_mono {
        let share = int(count as i64) / &colorings;
        let size = mono.count_ones() as usize;
        for y in crate::graph::submasks(mono) {
            let k = y.count_ones() as usize;
            *row.entry(y).or_insert_with(Rational::zero) += &share * ps.get(k) * qs.get(size - k);
        }
    }
    Ok(row.into_iter().filter(|(_, p)| !p.is_zero()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use crate::guards::Guards;
    use crate::measures::RcWeights;
    use crate::rational::rat;

    #[test]
    fn single_edge_rc_ratios() {
        let g = families::single_edge();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let params = Params::from_p_rc(rat(1, 2), 2).unwrap();
        assert_eq!(rc_ratio(&space, &params, 0, 0), rat(1, 2));
        assert_eq!(rc_ratio(&space, &params, 1, 0), int(2));
        assert_eq!(
            rc_row(&space, &params, 0).unwrap(),
            vec![(0, rat(3, 4)), (1, rat(1, 4))]
        );
        assert_eq!(
            rc_row(&space, &params, 1).unwrap(),
            vec![(0, rat(1, 2)), (1, rat(1, 2))]
        );
    }

    #[test]
    fn local_ratio_matches_global() {
        let g = families::complete_minus_edge(4);
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        for q in [int(2), rat(3, 2)] {
            let params = Params::from_p_rc(rat(2, 5), 4).unwrap().with_q(q.clone()).unwrap();
            let weights = RcWeights::new(&space, params.p_rc(), &q);
            for z in space.masks() {
                for e in 0..g.edge_count() {
                    let global = weights.weight(&space, z ^ (1 << e)) / weights.weight(&space, z);
                    assert_eq!(rc_ratio(&space, &params, z, e), global);
                }
            }
        }
    }

    #[test]
    fn cycle_closing_edge_has_plain_odds() {
        let g = families::triangle();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let params = Params::from_p_rc(rat(1, 5), 3).unwrap();
        assert_eq!(rc_ratio(&space, &params, 0b011, 2), rat(1, 4));
    }

    #[test]
    fn triangle_worm_ratios() {
        let g = families::triangle();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let params = Params::from_p_even(rat(1, 4), 3).unwrap();
        assert_eq!(worm_ratio(&space, &params, 0, 0), Some(rat(1, 27)));
        assert_eq!(worm_ratio(&space, &params, 1, 0), Some(int(27)));
        assert_eq!(worm_ratio(&space, &params, 1, 1), Some(rat(1, 3)));
        assert!(worm_row(&space, &params, 0).is_ok());
    }

    #[test]
    fn worm_row_rejects_outside_states() {
        let g = families::path(4);
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let params = Params::from_p_even(rat(1, 4), 4).unwrap();
        assert!(space.odd_count(0b101) == 4);
        assert!(worm_row(&space, &params, 0b101).is_err());
        // From {e0} (holes 0,1), adding e2 would create four odd vertices.
        assert!(worm_ratio(&space, &params, 0b001, 2).is_none());
    }

    #[test]
    fn sw_rows() {
        let g = families::single_edge();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let params = Params::from_p_rc(rat(1, 2), 2).unwrap();
        // From ∅: colors agree with probability 1/2, then the edge is kept with 1/2.
        assert_eq!(
            sw_row(&space, &params, 0).unwrap(),
            vec![(0, rat(3, 4)), (1, rat(1, 4))]
        );
        assert_eq!(
            sw_row(&space, &params, 1).unwrap(),
            vec![(0, rat(1, 2)), (1, rat(1, 2))]
        );
        let empty = families::edgeless(3);
        let space = SubsetSpace::new(&empty, &Guards::default()).unwrap();
        assert_eq!(sw_row(&space, &params, 0).unwrap(), vec![(0, int(1))]);
    }
}
