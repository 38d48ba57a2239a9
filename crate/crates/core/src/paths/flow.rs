use num_traits::{One, Zero};

use super::{DeltaKernel, LiftStep, LiftedFlowSpec, TrafficTable, WormFamily};
use crate::error::Result;
use crate::graph::submasks;
use crate::guards::Guards;
use crate::measures::rc_measure;
use crate::rational::{int, Rational};

/// Exact laws of the lifted trajectories, accumulated over the whole family.
#[derive(Clone, Debug)]
pub struct FlowTables {
    m: usize,
    /// `pair[x · 2^m + y]`: Σ over trajectories from x to y of their weight.
    pub pair: Vec<Rational>,
    pub traffic: TrafficTable,
    /// Paths whose step marginals differ from δ(w_k, ·).
    pub marginal_errors: Vec<String>,
}

impl FlowTables {
    fn new(m: usize) -> Self {
        let states = 1usize << m;
        FlowTables {
            m,
            pair: vec![Rational::zero(); states * states],
            traffic: TrafficTable::zeros(m),
            marginal_errors: Vec::new(),
        }
    }

    pub fn pair(&self, x: u64, y: u64) -> &Rational {
        &self.pair[((x as usize) << self.m) + y as usize]
    }

    fn record(&mut self, from: u64, to: u64, mass: &Rational) {
        if from == to {
            *self.traffic.stay_mut(from) += mass;
        } else {
            *self.traffic.flip_mut(from, (from ^ to).trailing_zeros() as usize) += mass;
        }
    }
}

/// Successor states of one lifted step with their probabilities.
fn branches(step: LiftStep, z: u64, p1: &Rational, q1: &Rational) -> Vec<(u64, Rational)> {
    let e = step.edge();
    let bit = 1u64 << e;
    let out = match step {
        LiftStep::Insert(_) => vec![(z | bit, Rational::one())],
        LiftStep::Delete(_) | LiftStep::Rerandomize(_) => vec![(z | bit, p1.clone()), (z & !bit, q1.clone())],
    };
    out.into_iter().filter(|(_, pr)| !pr.is_zero()).collect()
}

fn specs<'a>(family: &'a WormFamily, tail: bool) -> impl Iterator<Item = LiftedFlowSpec> + 'a {
    let m = family.space().edge_count();
    family.paths().map(move |path| {
        if tail {
            LiftedFlowSpec::new(path, m)
        } else {
            LiftedFlowSpec::truncated(path, m)
        }
    })
}

/// Propagate the state distribution of every lifted path step by step from
/// every start state, giving the pair table, the traffic, and a check of the
/// step marginals.
pub fn propagate(family: &WormFamily, kernel: &DeltaKernel, tail: bool, guards: &Guards) -> Result<FlowTables> {
    let space = family.space();
    guards.check_trajectories(space.graph())?;
    let m = space.edge_count();
    let states = space.state_count();
    let full = space.full_mask();
    let p1 = kernel.p_prime().clone();
    let q1 = Rational::one() - &p1;
    let mut tables = FlowTables::new(m);
    for spec in specs(family, tail) {
        let wt = spec.path().weight().clone();
        if wt.is_zero() {
            continue;
        }
        let start = spec.path().initial();
        let mut marginals = vec![vec![Rational::zero(); states]; spec.len() + 1];
        for extra in submasks(full & !start) {
            let z0 = start | extra;
            let d0 = kernel.get(start, z0).expect("start ⊆ z0");
            if d0.is_zero() {
                continue;
            }
            let mut dist = vec![Rational::zero(); states];
            dist[z0 as usize] = Rational::one();
            for (k, &step) in spec.steps().iter().enumerate() {
                let mut next = vec![Rational::zero(); states];
                for z in 0..states as u64 {
                    let mass = &dist[z as usize];
                    if mass.is_zero() {
                        continue;
                    }
                    marginals[k][z as usize] += &d0 * mass;
                    for (to, pr) in branches(step, z, &p1, &q1) {
                        let flow = mass * &pr;
                        tables.record(z, to, &(&wt * &d0 * &flow));
                        next[to as usize] += flow;
                    }
                }
                dist = next;
            }
            for (y, mass) in dist.iter().enumerate() {
                if mass.is_zero() {
                    continue;
                }
                marginals[spec.len()][y] += &d0 * mass;
                tables.pair[((z0 as usize) << m) + y] += &wt * &d0 * mass;
            }
        }
        for (k, law) in marginals.iter().enumerate() {
            let w = spec.worm_state(k);
            let ok = (0..states as u64).all(|z| law[z as usize] == kernel.get(w, z).unwrap_or_else(Rational::zero));
            if !ok {
                tables.marginal_errors.push(format!(
                    "path {:#b} -> {:#b}, step {k}",
                    spec.path().initial(),
                    spec.path().terminal()
                ));
            }
        }
    }
    Ok(tables)
}

/// Enumerate every lifted trajectory (path, start state, coin outcomes)
/// explicitly and accumulate its weight. Returns the pair table and traffic
/// together with the number of trajectories.
pub fn brute_force(family: &WormFamily, kernel: &DeltaKernel, guards: &Guards) -> Result<(FlowTables, usize)> {
    let space = family.space();
    guards.check_brute_force(space.graph())?;
    let m = space.edge_count();
    let full = space.full_mask();
    let p1 = kernel.p_prime().clone();
    let q1 = Rational::one() - &p1;
    let mut tables = FlowTables::new(m);
    let mut count = 0;
    for spec in specs(family, true) {
        let start = spec.path().initial();
        for extra in submasks(full & !start) {
            let z0 = start | extra;
            let d0 = kernel.get(start, z0).expect("start ⊆ z0");
            let weight = spec.path().weight() * d0;
            if weight.is_zero() {
                continue;
            }
            let mut trajectory = vec![z0];
            walk(&spec, &p1, &q1, &mut trajectory, weight, &mut |states, wt| {
                count += 1;
                for pair in states.windows(2) {
                    tables.record(pair[0], pair[1], wt);
                }
                let (x, y) = (states[0], *states.last().unwrap());
                tables.pair[((x as usize) << m) + y as usize] += wt;
            });
        }
    }
    Ok((tables, count))
}

fn walk(
    spec: &LiftedFlowSpec,
    p1: &Rational,
    q1: &Rational,
    trajectory: &mut Vec<u64>,
    weight: Rational,
    emit: &mut impl FnMut(&[u64], &Rational),
) {
    let k = trajectory.len() - 1;
    if k == spec.len() {
        emit(trajectory, &weight);
        return;
    }
    let z = trajectory[k];
    for (to, pr) in branches(spec.steps()[k], z, p1, q1) {
        trajectory.push(to);
        walk(spec, p1, q1, trajectory, &weight * pr, emit);
        trajectory.pop();
    }
}

/// The product property of the lifted flow, with and without the tail.
#[derive(Clone, Debug)]
pub struct FlowValidityReport {
    pub pairs: usize,
    /// Pairs (x, y) where the lifted flow does not carry π_RC(x)π_RC(y).
    pub mismatches: Vec<(u64, u64)>,
    pub marginal_errors: Vec<String>,
    /// The same comparison for the flow without its tail.
    pub truncated_mismatches: Vec<(u64, u64)>,
}

impl FlowValidityReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty() && self.marginal_errors.is_empty()
    }

    /// Whether dropping the tail breaks the product property here.
    pub fn tail_needed(&self) -> bool {
        !self.truncated_mismatches.is_empty()
    }
}

pub fn flow_validity(family: &WormFamily, kernel: &DeltaKernel, guards: &Guards) -> Result<FlowValidityReport> {
    let space = family.space();
    let rc = rc_measure(space, &(family.p() * int(2)), &int(2));
    let full = propagate(family, kernel, true, guards)?;
    let cut = propagate(family, kernel, false, guards)?;
    let mut mismatches = Vec::new();
    let mut truncated_mismatches = Vec::new();
    for x in space.masks() {
        let px = rc.prob(x);
        for y in space.masks() {
            let target = &px * rc.prob(y);
            if *full.pair(x, y) != target {
                mismatches.push((x, y));
            }
            if *cut.pair(x, y) != target {
                truncated_mismatches.push((x, y));
            }
        }
    }
    Ok(FlowValidityReport {
        pairs: space.state_count() * space.state_count(),
        mismatches,
        marginal_errors: full.marginal_errors,
        truncated_mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{families, SubsetSpace};
    use crate::paths::lifted_traffic;
    use crate::rational::rat;

    fn kernel_for(m: usize, p: &Rational) -> DeltaKernel {
        DeltaKernel::new(m, &(p / (Rational::one() - p)))
    }

    #[test]
    fn single_edge_pair_table() {
        let g = families::single_edge();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let fam = WormFamily::new(&space, &rat(1, 4), &Guards::default()).unwrap();
        let tables = propagate(&fam, &kernel_for(1, &rat(1, 4)), true, &Guards::default()).unwrap();
        assert_eq!(tables.pair(0, 0), &rat(4, 9));
        assert_eq!(tables.pair(0, 1), &rat(2, 9));
        assert_eq!(tables.pair(1, 1), &rat(1, 9));
        let r = flow_validity(&fam, &kernel_for(1, &rat(1, 4)), &Guards::default()).unwrap();
        assert!(r.pass());
        assert!(r.tail_needed());
    }

    #[test]
    fn triangle_needs_tail() {
        let g = families::triangle();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let p = rat(1, 4);
        let fam = WormFamily::new(&space, &p, &Guards::default()).unwrap();
        let r = flow_validity(&fam, &kernel_for(3, &p), &Guards::default()).unwrap();
        assert!(r.pass(), "{:?}", r.mismatches);
        assert!(r.tail_needed());
    }

    #[test]
    fn three_routes_agree_on_small_graphs() {
        let p = rat(2, 5);
        for g in [
            families::single_edge(),
            families::parallel_pair(),
            families::triangle(),
            families::cycle(4),
        ] {
            let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
            let fam = WormFamily::new(&space, &p, &Guards::default()).unwrap();
            let kernel = kernel_for(g.edge_count(), &p);
            let closed = lifted_traffic(&fam, &kernel);
            let dp = propagate(&fam, &kernel, true, &Guards::default()).unwrap();
            let (brute, count) = brute_force(&fam, &kernel, &Guards::default()).unwrap();
            assert!(count > 0);
            assert_eq!(closed, dp.traffic);
            assert_eq!(closed, brute.traffic);
            assert_eq!(dp.pair, brute.pair);
        }
    }
}
