//! Default parameter grids: values inside each case's proven region,
//! boundaries included.

use tracelab_core::funclass::ScalarFunctionSpec;
use tracelab_core::ineq::CaseId;

pub fn default_grid(case: CaseId) -> Vec<f64> {
    match case {
        CaseId::Mccarthy => vec![0.5, 1.0, 2.0, 3.0],
        CaseId::GoldenThompson => vec![0.5, 1.0],
        CaseId::CorAbq => vec![-1.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0],
        CaseId::CorPmean => vec![1.0, 2.0, 3.0],
        CaseId::CorFaltq => vec![-3.0, 0.5, 1.5, 2.5, 3.0],
        CaseId::CorAbq3 => vec![-3.0, 0.5, 1.5, 2.5],
        CaseId::NormCompression => vec![0.5, 1.5, 2.0, 2.5, 3.0],
        CaseId::Alt => vec![-1.0, 1.0, 3.0],
        CaseId::PropQ4 => vec![4.0],
        CaseId::MainTrace | CaseId::TraceSubadd => vec![],
    }
}

/// One or two representatives per class the case covers.
pub fn default_functions(case: CaseId) -> Vec<ScalarFunctionSpec> {
    let power = |q| ScalarFunctionSpec::power(q).expect("finite exponent");
    let mut fs = vec![
        ScalarFunctionSpec::exp_kernel(1.0, 1).expect("valid kernel"),
        ScalarFunctionSpec::exp_kernel(1.0, -1).expect("valid kernel"),
        power(0.5),
        power(1.5),
        power(2.5),
    ];
    match case {
        CaseId::MainTrace => {
            fs.push(power(-1.0));
            fs.push(ScalarFunctionSpec::quadratic(1.0, 1.0, 1.0).expect("finite coefficients"));
            fs.push(ScalarFunctionSpec::bfk_discrete(2, vec![0.5, 2.0], vec![1.0, 0.5]).expect("valid measure"));
        }
        CaseId::TraceSubadd => {
            fs.push(power(3.5));
            fs.push(ScalarFunctionSpec::bfk_discrete(3, vec![0.5, 2.0], vec![1.0, 0.5]).expect("valid measure"));
        }
        _ => fs.clear(),
    }
    fs
}

#[cfg(test)]
mod tests {
    use super::*;
    use tracelab_core::explorer::Target;

    #[test]
    fn defaults_are_valid_targets_with_verdicts() {
        for case in CaseId::ALL {
            let grid = default_grid(case);
            let fns = default_functions(case);
            assert!(!grid.is_empty() || !fns.is_empty(), "{case}");
            for q in grid {
                let o = Target::new(case, q).unwrap().orientation().unwrap();
                assert!(!o.conjecture, "{case} {q}");
            }
            for g in fns {
                Target::with_function(case, g).unwrap();
            }
        }
    }
}
