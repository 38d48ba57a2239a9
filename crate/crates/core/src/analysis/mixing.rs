use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{spectral_gap, TransitionMatrix};
use crate::error::{Error, Result};
use crate::measures::{Mode, FLOAT_TOLERANCE};
use crate::rational::{to_f64, Rational};

/// Denominator size at which exact powering hands over to floating point.
pub const DEFAULT_CEILING_BITS: u64 = 2048;

/// First times at which each start comes within each ε of stationarity.
#[derive(Clone, Debug)]
pub struct TauProfile {
    pub eps: Vec<Rational>,
    /// `per_start[k][i]`: τ for `eps[k]` from state `i`, or `None` past the cap.
    pub per_start: Vec<Vec<Option<u64>>>,
    pub mode: Mode,
    pub cap: u64,
}

impl TauProfile {
    /// max over starts and the start attaining it; `None` if any start hit
    /// the cap.
    pub fn worst(&self, k: usize) -> Option<(u64, usize)> {
        let mut best = (0, 0);
        for (i, t) in self.per_start[k].iter().enumerate() {
            let t = (*t)?;
            if t > best.0 {
                best = (t, i);
            }
        }
        Some(best)
    }
}

/// The matrix scaled to integers: `P = A / d`.
struct IntegerMatrix {
    rows: Vec<Vec<(usize, BigInt)>>,
    d: BigInt,
}

impl IntegerMatrix {
    fn new(mat: &TransitionMatrix) -> Self {
        let mut d = BigInt::one();
        for i in 0..mat.len() {
            for (_, p) in mat.row(i) {
                d = d.lcm(p.denom());
            }
        }
        let rows = (0..mat.len())
            .map(|i| {
                mat.row(i)
                    .iter()
                    .map(|(j, p)| (*j, p.numer() * (&d / p.denom())))
                    .collect()
            })
            .collect();
        IntegerMatrix { rows, d }
    }
}

/// Exact first-passage times below each ε, for every start state.
///
/// Each start's distribution is pushed forward one step at a time. While
/// the common denominator stays below `ceiling_bits` bits the comparison
/// ½Σ|P^t(x,·) - π| ≤ ε is decided exactly; past that the start continues in
/// floating point and only counts as mixed once the distance is below ε by
/// at least the float tolerance.
pub fn tau_profile(mat: &TransitionMatrix, eps: &[Rational], cap: u64, ceiling_bits: u64) -> Result<TauProfile> {
    for e in eps {
        if *e <= Rational::zero() || *e > Rational::one() {
            return Err(Error::Parameter {
                name: "eps",
                value: crate::rational::fraction_string(e),
                expected: "0 < eps <= 1",
            });
        }
    }
    let n = mat.len();
    let ints = IntegerMatrix::new(mat);
    let pi = mat.stationary();
    let d_pi = pi.iter().fold(BigInt::one(), |acc, p| acc.lcm(p.denom()));
    let pi_num: Vec<BigInt> = pi.iter().map(|p| p.numer() * (&d_pi / p.denom())).collect();
    let pi_f: Vec<f64> = pi.iter().map(to_f64).collect();
    let float_rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| mat.row(i).iter().map(|(j, p)| (*j, to_f64(p))).collect())
        .collect();
    let eps_f: Vec<f64> = eps.iter().map(to_f64).collect();

    let mut per_start = vec![vec![None; n]; eps.len()];
    let mut mode = Mode::Rational;
    for x in 0..n {
        let mut open: Vec<usize> = (0..eps.len()).collect();
        let mut v = vec![BigInt::zero(); n];
        v[x] = BigInt::one();
        let mut scale = BigInt::one();
        let mut t = 0u64;
        let mut float_state: Option<Vec<f64>> = None;
        loop {
            match &float_state {
                None => {
                    // 2 · TV · scale · d_pi
                    let gap: BigInt = (0..n).map(|i| (&v[i] * &d_pi - &pi_num[i] * &scale).abs()).sum();
                    open.retain(|&k| {
                        let (en, ed) = (eps[k].numer(), eps[k].denom());
                        let mixed = ed * &gap <= int_times(en, &scale, &d_pi);
                        if mixed {
                            per_start[k][x] = Some(t);
                        }
                        !mixed
                    });
                }
                Some(f) => {
                    let tv = f.iter().zip(&pi_f).map(|(a, b)| (a - b).abs()).sum::<f64>() / 2.0;
                    open.retain(|&k| {
                        let mixed = tv + FLOAT_TOLERANCE <= eps_f[k];
                        if mixed {
                            per_start[k][x] = Some(t);
                        }
                        !mixed
                    });
                }
            }
            if open.is_empty() || t >= cap {
                break;
            }
            t += 1;
            match &mut float_state {
                None => {
                    let mut next = vec![BigInt::zero(); n];
                    for (i, vi) in v.iter().enumerate() {
                        if vi.is_zero() {
                            continue;
                        }
                        for (j, a) in &ints.rows[i] {
                            next[*j] += vi * a;
                        }
                    }
                    v = next;
                    scale *= &ints.d;
                    if scale.bits() > ceiling_bits {
                        mode = Mode::Float;
                        float_state = Some(
                            v.iter()
                                .map(|vi| to_f64(&Rational::new(vi.clone(), scale.clone())))
                                .collect(),
                        );
                    }
                }
                Some(f) => {
                    let mut next = vec![0.0; n];
                    for (i, fi) in f.iter().enumerate() {
                        if *fi == 0.0 {
                            continue;
                        }
                        for (j, p) in &float_rows[i] {
                            next[*j] += fi * p;
                        }
                    }
                    *f = next;
                }
            }
        }
    }
    Ok(TauProfile {
        eps: eps.to_vec(),
        per_start,
        mode,
        cap,
    })
}

fn int_times(en: &BigInt, scale: &BigInt, d_pi: &BigInt) -> BigInt {
    en * scale * d_pi * 2
}

/// 8 n⁴ m² (m ln(1-p)⁻¹ + ln ε⁻¹).
pub fn path_bound(n: usize, m: usize, p_rc: f64, eps: f64) -> f64 {
    let n4 = (n as f64).powi(4);
    let m2 = (m as f64).powi(2);
    8.0 * n4 * m2 * log_term(m, p_rc, eps)
}

/// ρ (m ln(1-p)⁻¹ + ln ε⁻¹), with x_0 = ∅.
pub fn congestion_bound(rho: f64, m: usize, p_rc: f64, eps: f64) -> f64 {
    rho * log_term(m, p_rc, eps)
}

fn log_term(m: usize, p_rc: f64, eps: f64) -> f64 {
    m as f64 * (1.0 / (1.0 - p_rc)).ln() + (1.0 / eps).ln()
}

/// Exact mixing time next to the two upper bounds.
#[derive(Clone, Debug)]
pub struct MixingReport {
    pub eps: Rational,
    /// Worst start over all states.
    pub tau: Option<u64>,
    pub worst_start: Option<u64>,
    /// From the empty configuration.
    pub tau_from_empty: Option<u64>,
    pub gap: Option<f64>,
    pub path_bound: f64,
    pub congestion_bound: Option<f64>,
    pub mode: Mode,
    pub cap: u64,
}

impl MixingReport {
    pub fn within_path_bound(&self) -> bool {
        self.tau.is_some_and(|t| t as f64 <= self.path_bound)
    }

    pub fn within_congestion_bound(&self) -> bool {
        match self.congestion_bound {
            None => true,
            Some(b) => self.tau_from_empty.is_some_and(|t| t as f64 <= b),
        }
    }

    pub fn pass(&self) -> bool {
        self.within_path_bound() && self.within_congestion_bound()
    }
}

/// Mixing reports for several ε from a single pass over the chain.
///
/// `n`, `m` and `p_rc` enter the bounds; `rho` is the measured congestion of
/// the lifted flow, if available.
pub fn mixing_reports(
    mat: &TransitionMatrix,
    n: usize,
    m: usize,
    p_rc: &Rational,
    eps: &[Rational],
    rho: Option<&Rational>,
) -> Result<Vec<MixingReport>> {
    let p = to_f64(p_rc);
    let bounds: Vec<f64> = eps.iter().map(|e| path_bound(n, m, p, to_f64(e))).collect();
    let cap = bounds.iter().fold(0.0f64, |a, &b| a.max(b)).ceil() as u64 + 1;
    let profile = tau_profile(mat, eps, cap, DEFAULT_CEILING_BITS)?;
    let gap = spectral_gap(mat).ok().map(|s| s.gap);
    let empty = mat.index_of(0);
    Ok(eps
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let worst = profile.worst(k);
            MixingReport {
                eps: e.clone(),
                tau: worst.map(|w| w.0),
                worst_start: worst.map(|w| mat.states()[w.1]),
                tau_from_empty: empty.and_then(|i| profile.per_start[k][i]),
                gap,
                path_bound: bounds[k],
                congestion_bound: rho.map(|r| congestion_bound(to_f64(r), m, p, to_f64(e))),
                mode: profile.mode,
                cap,
            }
        })
        .collect())
}

/// Single-ε form of [`mixing_reports`].
pub fn mixing_time(
    mat: &TransitionMatrix,
    n: usize,
    m: usize,
    p_rc: &Rational,
    eps: &Rational,
    rho: Option<&Rational>,
) -> Result<MixingReport> {
    Ok(mixing_reports(mat, n, m, p_rc, std::slice::from_ref(eps), rho)?.remove(0))
}

/// Largest t with d(t) > ε for a two-state chain, as a cross-check helper in
/// tests: d(t) = d(0) λᵗ.
#[cfg(test)]
fn two_state_tau(d0: f64, lambda: f64, eps: f64) -> u64 {
    let mut t = 0;
    let mut d = d0;
    while d > eps {
        d *= lambda;
        t += 1;
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::build_matrix;
    use crate::chains::ChainKind;
    use crate::graph::{families, SubsetSpace};
    use crate::guards::Guards;
    use crate::measures::Params;
    use crate::rational::rat;

    #[test]
    fn single_edge_mixing() {
        let g = families::single_edge();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let params = Params::from_p_rc(rat(1, 2), 2).unwrap();
        let mat = build_matrix(&space, &params, ChainKind::Rc, &Guards::default()).unwrap();
        let r = mixing_time(&mat, 2, 1, params.p_rc(), &rat(1, 4), None).unwrap();
        assert_eq!(r.tau, Some(1));
        assert_eq!(r.mode, Mode::Rational);
        assert!((r.path_bound - 128.0 * (2f64.ln() + 4f64.ln())).abs() < 1e-9);
        assert!(r.pass());
        assert!((r.gap.unwrap() - 0.75).abs() < 1e-9);
        // Eigenvalue 1/4; the worst start is {e} at distance 2/3.
        let r = mixing_time(&mat, 2, 1, params.p_rc(), &rat(1, 10), None).unwrap();
        assert_eq!(r.tau, Some(two_state_tau(2.0 / 3.0, 0.25, 0.1)));
        assert_eq!(r.worst_start, Some(1));
    }

    #[test]
    fn eps_one_is_immediate_and_tau_is_monotone() {
        let g = families::triangle();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let params = Params::from_p_rc(rat(1, 2), 3).unwrap();
        let mat = build_matrix(&space, &params, ChainKind::Rc, &Guards::default()).unwrap();
        let rs = mixing_reports(&mat, 3, 3, params.p_rc(), &[rat(1, 1), rat(1, 4), rat(1, 8)], None).unwrap();
        assert_eq!(rs[0].tau, Some(0));
        assert!(rs[2].tau >= rs[1].tau);
        assert!(rs[1].tau_from_empty <= rs[1].tau);
        assert!(tau_profile(&mat, &[rat(0, 1)], 10, 64).is_err());
    }

    #[test]
    fn float_fallback_agrees() {
        let g = families::triangle();
        let space = SubsetSpace::new(&g, &Guards::default()).unwrap();
        let params = Params::from_p_rc(rat(4, 5), 3).unwrap();
        let mat = build_matrix(&space, &params, ChainKind::Rc, &Guards::default()).unwrap();
        let eps = [rat(1, 4), rat(1, 10)];
        let exact = tau_profile(&mat, &eps, 10_000, 1 << 20).unwrap();
        let float = tau_profile(&mat, &eps, 10_000, 16).unwrap();
        assert_eq!(exact.mode, Mode::Rational);
        assert_eq!(float.mode, Mode::Float);
        assert_eq!(exact.per_start, float.per_start);
    }
}
