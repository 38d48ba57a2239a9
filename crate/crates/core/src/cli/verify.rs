//! `rcmix verify`: the whole exact suite on one graph.

use serde_json::{json, Value};

use super::{Format, Loaded, Output, VerifyArgs};
use crate::analysis::{build_matrix, mixing_reports, TransitionMatrix};
use crate::chains::{lift_distribution, ChainKind};
use crate::error::{Error, Result};
use crate::graph::SubsetSpace;
use crate::measures::{
    empty_state_check, even_count_check, even_measure, hat_pi, hole_bounds, rc_measure, verify_equivalence,
};
use crate::paths::{
    brute_force, flow_validity, lifted_bounds, lifted_traffic, rc_congestion, worm_report, DeltaKernel, TrafficTable,
    WormFamily,
};
use crate::rational::{choose2, int, parse_rational, rat, Rational};
use crate::report::{exact, float, lines, mode_name, params as params_json, record};

/// Collects one record per check.
struct Suite {
    graph: String,
    params: Value,
    records: Vec<Value>,
    failed: bool,
}

impl Suite {
    fn push(&mut self, check: &str, pass: bool, body: Value) {
        let mut body = body;
        body["status"] = json!(if pass { "pass" } else { "fail" });
        body["pass"] = json!(pass);
        body["params"] = self.params.clone();
        self.failed |= !pass;
        self.records.push(record(check, &self.graph, body));
    }

    fn skip(&mut self, check: &str, reason: String) {
        let body = json!({ "status": "skipped", "reason": reason, "params": self.params.clone() });
        self.records.push(record(check, &self.graph, body));
    }

    /// Record a check, turning guard and parameter-range refusals into skips.
    fn run(&mut self, check: &str, f: impl FnOnce() -> Result<(bool, Value)>) -> Result<()> {
        match f() {
            Ok((pass, body)) => self.push(check, pass, body),
            Err(e @ (Error::GuardExceeded { .. } | Error::Parameter { .. })) => self.skip(check, e.to_string()),
            Err(e) => return Err(e),
        }
        Ok(())
    }
}

fn max_ratio<'a>(pairs: impl Iterator<Item = (&'a Rational, &'a Rational)>) -> Rational {
    pairs
        .filter(|(_, b)| !num_traits::Zero::is_zero(*b))
        .map(|(a, b)| a / b)
        .max()
        .unwrap_or_else(|| int(0))
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Output> {
    let loaded = args.spec.load()?;
    loaded.params.require_q2()?;
    let eps = args.eps.iter().map(|e| parse_rational(e)).collect::<Result<Vec<_>>>()?;
    for e in &eps {
        if *e <= int(0) || *e >= int(1) {
            return Err(Error::Parameter {
                name: "eps",
                value: crate::rational::fraction_string(e),
                expected: "0 < eps < 1",
            });
        }
    }
    let suite = run_suite(&loaded, &eps)?;
    let pass = !suite.failed;
    let text = match args.spec.format {
        Format::Json => {
            let mut records = suite.records;
            records.sort_by(|a, b| a["check"].as_str().cmp(&b["check"].as_str()));
            lines(&records)
        }
        Format::Csv => {
            let mut out = String::from("check,graph,status\n");
            for r in &suite.records {
                out.push_str(&format!(
                    "{},{},{}\n",
                    r["check"].as_str().unwrap_or(""),
                    suite.graph,
                    r["status"].as_str().unwrap_or("")
                ));
            }
            out
        }
    };
    Ok(Output { text, pass })
}

fn run_suite(loaded: &Loaded, eps: &[Rational]) -> Result<Suite> {
    let Loaded {
        name,
        graph,
        params,
        guards,
    } = loaded;
    let n = graph.vertex_count();
    let m = graph.edge_count();
    let space = SubsetSpace::new(graph, guards)?;
    let mut suite = Suite {
        graph: name.clone(),
        params: params_json(params),
        records: Vec::new(),
        failed: false,
    };
    let p = params.p_even().clone();

    match params.beta() {
        Some(beta) => suite.run("equivalence", || {
            let r = verify_equivalence(&space, beta, guards)?;
            Ok((
                r.pass(),
                json!({
                    "lhs": exact(&r.z_ising),
                    "rhs": exact(&r.rc_side),
                    "even_side": exact(&r.even_side),
                }),
            ))
        })?,
        None => suite.skip("equivalence", "no finite beta at p_rc = 1".into()),
    }

    suite.run("even_count", || {
        let r = even_count_check(&space);
        Ok((
            r.pass(),
            json!({
                "lhs": exact(&int(r.even_count as i64)),
                "rhs": exact(&int(r.expected as i64)),
                "subgraphs_checked": r.subgraphs_checked,
                "mismatches": r.mismatches.len(),
            }),
        ))
    })?;

    suite.run("empty_state", || {
        let r = empty_state_check(&space, params)?;
        Ok((
            r.pass(),
            json!({ "lhs": exact(&r.pi_empty), "rhs": exact(&r.lower_bound), "relation": ">=" }),
        ))
    })?;

    suite.run("coupling", || {
        guards.check_matrix(graph)?;
        let lifted = lift_distribution(&space, params, &even_measure(&space, &p));
        let target = rc_measure(&space, params.p_rc(), &int(2));
        let tv: Rational = space
            .masks()
            .map(|s| {
                let d = lifted.prob(s) - target.prob(s);
                if d < int(0) {
                    -d
                } else {
                    d
                }
            })
            .sum::<Rational>()
            / int(2);
        Ok((
            tv == int(0),
            json!({ "lhs": exact(&tv), "rhs": exact(&int(0)), "quantity": "tv_distance" }),
        ))
    })?;

    suite.run("distortion", || {
        let r = hat_pi(&space, params)?;
        Ok((
            r.pass(),
            json!({
                "lhs": exact(&r.max_ratio),
                "rhs": exact(&rat(3, 2)),
                "witness": r.witness,
                "routes_agree": r.routes_agree,
                "profile_consistent": r.profile_consistent,
            }),
        ))
    })?;

    suite.run("holes", || {
        let r = hole_bounds(&space, &p);
        let max_hole = r.max_hole().map(|h| h.2.clone()).unwrap_or_else(|| int(0));
        Ok((
            r.pass(n),
            json!({
                "lhs": exact(&max_hole),
                "rhs": exact(&r.z0),
                "z2": exact(&r.z2),
                "z2_bound": exact(&(int(choose2(n) as i64) * &r.z0)),
                "z_worm": exact(&r.z_worm),
                "z_worm_bound": exact(&(rat(3, 2) * &r.z0)),
                "holes_ok": r.holes_ok(),
                "z2_ok": r.z2_ok(n),
                "worm_ok": r.worm_ok(),
                "consistent": r.consistent(),
            }),
        ))
    })?;

    let family = match WormFamily::new(&space, &p, guards) {
        Ok(f) => Some(f),
        Err(e) if e.is_guard() => {
            for check in [
                "worm_paths",
                "encoding",
                "lifted_traffic",
                "flow_validity",
                "traffic_oracle",
                "congestion",
            ] {
                suite.skip(check, e.to_string());
            }
            None
        }
        Err(e) => return Err(e),
    };

    let mut rho = None;
    if let Some(family) = &family {
        suite.run("worm_paths", || {
            let r = worm_report(family);
            Ok((
                r.pass(),
                json!({
                    "lhs": exact(&r.max_ratio),
                    "rhs": exact(&int(1)),
                    "quantity": "max traffic / bound",
                    "pairs": r.pairs,
                    "transitions": r.transitions,
                    "max_len": r.max_len,
                    "legality_errors": r.legality_errors.len(),
                    "failures": r.failures.len(),
                }),
            ))
        })?;

        suite.run("encoding", || {
            let mut checked = 0usize;
            let mut failures = 0usize;
            for path in family.paths() {
                let (i, f) = (path.initial(), path.terminal());
                for (w, e) in path.transitions() {
                    checked += 1;
                    let u = family.encode(i, f, w, e)?;
                    if family.decode(w, w ^ (1 << e), u).ok() != Some((i, f)) {
                        failures += 1;
                    }
                }
            }
            Ok((
                failures == 0,
                json!({ "transitions_checked": checked, "failures": failures }),
            ))
        })?;

        let kernel = DeltaKernel::new(m, &params.lift_probability());
        let table = lifted_traffic(family, &kernel);

        suite.run("lifted_traffic", || {
            let reports = lifted_bounds(&space, &p, &table);
            let failures = reports.iter().filter(|r| !r.pass()).count();
            let ratio = max_ratio(reports.iter().map(|r| (&r.traffic, &r.bound)));
            Ok((
                failures == 0,
                json!({
                    "lhs": exact(&ratio),
                    "rhs": exact(&int(1)),
                    "quantity": "max traffic / bound",
                    "transitions": reports.len(),
                    "failures": failures,
                }),
            ))
        })?;

        suite.run("flow_validity", || {
            let r = flow_validity(family, &kernel, guards)?;
            Ok((
                r.pass(),
                json!({
                    "pairs": r.pairs,
                    "mismatches": r.mismatches.len(),
                    "marginal_errors": r.marginal_errors.len(),
                    "truncated_mismatches": r.truncated_mismatches.len(),
                    "tail_needed": r.tail_needed(),
                }),
            ))
        })?;

        suite.run("traffic_oracle", || {
            let (tables, trajectories) = brute_force(family, &kernel, guards)?;
            Ok((
                traffic_equal(&tables.traffic, &table),
                json!({ "trajectories": trajectories }),
            ))
        })?;

        suite.run("congestion", || {
            let r = rc_congestion(family, params, &table)?;
            rho = Some(r.max_congestion.clone());
            Ok((
                r.pass(),
                json!({
                    "lhs": exact(&r.max_congestion),
                    "rhs": exact(&r.bound),
                    "witness_transition": [r.witness.0, r.witness.1],
                    "max_length": r.length,
                    "unsupported": r.unsupported.len(),
                }),
            ))
        })?;
    }

    let mut rc_matrix = None;
    for kind in [ChainKind::Rc, ChainKind::Worm, ChainKind::Sw] {
        let check = format!("{}_chain", kind.name());
        suite.run(&check, || {
            let mat = build_matrix(&space, params, kind, guards)?;
            let body = chain_body(&mat);
            let pass = mat.stochasticity_violations().is_empty()
                && mat.stationarity_violations().is_empty()
                && match kind {
                    ChainKind::Sw => true,
                    _ => mat.is_lazy() && mat.reversibility_violations().is_empty(),
                };
            if kind == ChainKind::Rc {
                rc_matrix = Some(mat);
            }
            Ok((pass, body))
        })?;
    }

    match &rc_matrix {
        Some(mat) => {
            for report in mixing_reports(mat, n, m, params.p_rc(), eps, rho.as_ref())? {
                let pass = report.pass();
                suite.push(
                    "mixing",
                    pass,
                    json!({
                        "kind": "rc",
                        "eps": exact(&report.eps),
                        "tau_exact": report.tau,
                        "worst_start": report.worst_start,
                        "tau_from_empty": report.tau_from_empty,
                        "bound_thm43": float(report.path_bound),
                        "bound_thm21": report.congestion_bound.map(float),
                        "gap": report.gap.map(float),
                        "mode": mode_name(report.mode),
                        "cap": report.cap,
                    }),
                );
            }
        }
        None => suite.skip("mixing", "no single-bond transition matrix for these inputs".into()),
    }
    Ok(suite)
}

fn traffic_equal(a: &TrafficTable, b: &TrafficTable) -> bool {
    a.flips == b.flips && a.loops == b.loops
}

fn chain_body(mat: &TransitionMatrix) -> Value {
    json!({
        "states": mat.len(),
        "stochasticity_violations": mat.stochasticity_violations().len(),
        "stationarity_violations": mat.stationarity_violations().len(),
        "reversibility_violations": mat.reversibility_violations().len(),
        "min_diagonal": exact(&mat.min_diagonal()),
        "lazy": mat.is_lazy(),
    })
}
