//! Checks every bundled fixture and every construction at desk scale.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::constructions::{
    build_k5_special, build_kc, build_kp, imbalance_witness, kc_parameters, kp_parameters,
    path_pair_census, WitnessVerdict, DEFAULT_MAX_BLOCKS,
};
use crate::design::{is_symmetric, verify_bibd, verify_t_design, Verdict};
use crate::exploded::check_kp_equals_exploded_kc;
use crate::io::fixtures;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, outcome: Result<String, String>) -> CheckResult {
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CheckResult {
        name: name.into(),
        passed,
        detail,
    }
}

fn fixture_checks(out: &mut Vec<CheckResult>) {
    for f in fixtures() {
        let d = f.design();
        let outcome = (|| {
            let report = verify_bibd(&d).map_err(|e| e.to_string())?;
            if !report.is_balanced() {
                return Err(format!("not balanced: {report}"));
            }
            let params = report.params.clone().expect("balanced reports carry params");
            if let Some(want) = &f.params {
                if &params != want {
                    return Err(format!("got {params}, want {want}"));
                }
            }
            if is_symmetric(&params) != f.symmetric {
                return Err(format!("symmetric should be {}", f.symmetric));
            }
            let t2 = verify_t_design(&d, 2).map_err(|e| e.to_string())?;
            if t2.lambda_t().map(Into::into) != Some(params.lambda.clone()) {
                return Err(format!("t=2 count {t2} disagrees with lambda"));
            }
            let mut detail = format!("{params} symmetric={}", f.symmetric);
            if let Some((t, lambda_t)) = f.t_design {
                let rep = verify_t_design(&d, t).map_err(|e| e.to_string())?;
                if rep.lambda_t() != Some(lambda_t) {
                    return Err(format!("want t={t} lambda_t={lambda_t}, got {rep}"));
                }
                detail.push_str(&format!(" {rep}"));
            }
            Ok(detail)
        })();
        out.push(check(format!("fixture {}", f.name), outcome));
    }
}

fn construction_checks(out: &mut Vec<CheckResult>) {
    let k5 = (|| {
        let d = build_k5_special();
        if d.block_count() != 30 {
            return Err(format!("{} blocks", d.block_count()));
        }
        let rep = verify_t_design(&d, 3).map_err(|e| e.to_string())?;
        match rep.lambda_t() {
            Some(1) => Ok(format!("30 blocks {rep}")),
            _ => Err(rep.to_string()),
        }
    })();
    out.push(check("K5 fan/rectangle/triangle 3-design", k5));

    for khat in 2..=4 {
        let outcome = (|| {
            let d = build_kp(khat, DEFAULT_MAX_BLOCKS).map_err(|e| e.to_string())?;
            let report = verify_bibd(&d).map_err(|e| e.to_string())?;
            let want = kp_parameters(khat).map_err(|e| e.to_string())?;
            if report.is_balanced() && report.params.as_ref() == Some(&want) {
                Ok(want.to_string())
            } else {
                Err(format!("{report} want {want}"))
            }
        })();
        out.push(check(format!("KP khat={khat}"), outcome));
    }

    for khat in 3..=5 {
        let outcome = (|| {
            let d = build_kc(khat, DEFAULT_MAX_BLOCKS).map_err(|e| e.to_string())?;
            let report = verify_bibd(&d).map_err(|e| e.to_string())?;
            let want = kc_parameters(khat).map_err(|e| e.to_string())?;
            let verdict = if khat == 3 { Verdict::Complete } else { Verdict::Balanced };
            if report.verdict == verdict && report.params.as_ref() == Some(&want) {
                Ok(format!("{verdict} {want}"))
            } else {
                Err(format!("{report} want {verdict} {want}"))
            }
        })();
        out.push(check(format!("KC khat={khat}"), outcome));
    }

    for khat in 2..=4 {
        let outcome = match check_kp_equals_exploded_kc(khat, DEFAULT_MAX_BLOCKS) {
            Ok(true) => Ok("multisets equal, multiplicity 1".to_string()),
            Ok(false) => Err("multisets differ".to_string()),
            Err(e) => Err(e.to_string()),
        };
        out.push(check(format!("KP({khat}) = {khat}-exploded KC({})", khat + 1), outcome));
    }
}

fn witness_checks(out: &mut Vec<CheckResult>) {
    for n in 4..=8u32 {
        for khat in 3..n {
            let outcome = (|| {
                let w = imbalance_witness(n.into(), khat.into()).map_err(|e| e.to_string())?;
                let census = path_pair_census(n, khat).map_err(|e| e.to_string())?;
                let one = |x: &num_bigint::BigUint| -> BTreeSet<u64> {
                    u64::try_from(x).into_iter().collect()
                };
                if census.adjacent != one(&w.lambda_adj) || census.nonadjacent != one(&w.lambda_non) {
                    return Err(format!("census {census:?} vs closed form {w}"));
                }
                let want = match n.cmp(&(2 * khat - 1)) {
                    Ordering::Less => WitnessVerdict::AdjacentFewer,
                    Ordering::Equal => WitnessVerdict::Balanced,
                    Ordering::Greater => WitnessVerdict::AdjacentMore,
                };
                if w.verdict() != want {
                    return Err(format!("{w}, want {want}"));
                }
                Ok(w.to_string())
            })();
            out.push(check(format!("witness n={n} khat={khat}"), outcome));
        }
    }
}

/// Runs every check; callers decide how to report.
pub fn run() -> Vec<CheckResult> {
    let mut out = Vec::new();
    fixture_checks(&mut out);
    construction_checks(&mut out);
    witness_checks(&mut out);
    out
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_passes() {
        let results = super::run();
        let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(results.len() >= 3 + 1 + 3 + 3 + 3);
    }
}
