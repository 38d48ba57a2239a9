use num_bigint::BigInt;
use num_traits::Zero;

use super::{TrafficTable, WormFamily};
use crate::chains::kernel::rc_row;
use crate::error::{Error, Result};
use crate::measures::Params;
use crate::rational::{int, Rational};

/// One transition's contribution to ρ.
#[derive(Clone, Debug)]
pub struct CongestionRow {
    pub from: u64,
    pub to: u64,
    pub traffic: Rational,
    pub probability: Rational,
    /// L · traffic / (π(z) P(z,z')).
    pub congestion: Rational,
}

/// ρ(Γ_RC) over every transition of the single-bond chain.
#[derive(Clone, Debug)]
pub struct CongestionReport {
    pub max_congestion: Rational,
    /// 8 m² n⁴.
    pub bound: Rational,
    pub witness: (u64, u64),
    /// The longest lifted path, used as L.
    pub length: usize,
    pub rows: Vec<CongestionRow>,
    /// Transitions carrying flow that the chain cannot make.
    pub unsupported: Vec<(u64, u64)>,
}

impl CongestionReport {
    pub fn pass(&self) -> bool {
        self.unsupported.is_empty() && self.max_congestion <= self.bound
    }
}

pub fn rc_congestion(family: &WormFamily, params: &Params, table: &TrafficTable) -> Result<CongestionReport> {
    params.require_q2()?;
    params.require_open_rc()?;
    if params.p_even() != family.p() {
        return Err(Error::Parameter {
            name: "p_even",
            value: crate::rational::fraction_string(params.p_even()),
            expected: "the parameter the path family was built with",
        });
    }
    let space = family.space();
    let m = space.edge_count();
    let n = space.vertex_count();
    let length = family.max_lifted_len();
    assert!(length <= 2 * m, "lifted path of length {length} exceeds 2m");
    let pi = params.rc_measure(space);
    let l = int(length as i64);
    let mut rows = Vec::new();
    let mut unsupported = Vec::new();
    let mut max_congestion = Rational::zero();
    let mut witness = (0, 0);
    for z in space.masks() {
        let row = rc_row(space, params, z)?;
        let targets: Vec<u64> = row.iter().map(|(t, _)| *t).collect();
        let pz = pi.prob(z);
        for (to, probability) in row {
            let traffic = table.get(z, to);
            let congestion = if traffic.is_zero() {
                Rational::zero()
            } else {
                &l * &traffic / (&pz * &probability)
            };
            if congestion > max_congestion {
                max_congestion = congestion.clone();
                witness = (z, to);
            }
            rows.push(CongestionRow {
                from: z,
                to,
                traffic,
                probability,
                congestion,
            });
        }
        for e in 0..m {
            let to = z ^ (1 << e);
            if !table.flip(z, e).is_zero() && !targets.contains(&to) {
                unsupported.push((z, to));
            }
        }
        if !table.stay(z).is_zero() && !targets.contains(&z) {
            unsupported.push((z, z));
        }
    }
    let bound = Rational::from_integer(BigInt::from(8 * m * m * n.pow(4)));
    Ok(CongestionReport {
        max_congestion,
        bound,
        witness,
        length,
        rows,
        unsupported,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{families, SubsetSpace};
    use crate::guards::Guards;
    use crate::paths::{lifted_traffic, DeltaKernel};
    use crate::rational::rat;

    fn rho(g: &crate::graph::Graph, p_even: Rational) -> CongestionReport {
        let space = SubsetSpace::new(g, &Guards::default()).unwrap();
        let params = Params::from_p_even(p_even, g.vertex_count()).unwrap();
        let fam = WormFamily::new(&space, params.p_even(), &Guards::default()).unwrap();
        let kernel = DeltaKernel::new(g.edge_count(), &params.lift_probability());
        let table = lifted_traffic(&fam, &kernel);
        rc_congestion(&fam, &params, &table).unwrap()
    }

    #[test]
    fn single_edge_congestion_by_hand() {
        let r = rho(&families::single_edge(), rat(1, 4));
        assert_eq!(r.max_congestion, rat(4, 3));
        assert_eq!(r.bound, int(128));
        assert_eq!(r.length, 1);
        assert!(r.pass());
    }

    #[test]
    fn triangle_congestion_is_bounded() {
        for p in [rat(1, 10), rat(1, 4), rat(2, 5)] {
            let r = rho(&families::triangle(), p);
            assert!(r.pass());
            assert_eq!(r.bound, int(5832));
        }
    }
}
