//! Interval certificates of cooperativity (vector fields) and Jacobian
//! nonnegativity (maps) over a box, with adaptive bisection.
//!
//! Certification compares outward-rounded interval enclosures of the
//! symbolic partials against zero; refutation requires a plain point
//! evaluation below `-1e-12`, so rounding noise can never manufacture a
//! refutation. Anything the subdivision cannot resolve within the depth
//! budget is reported inconclusive.

use crate::expr::{interval_eval, Expr, IntervalBox, SystemDef, SystemKind};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

/// Point evaluations must fall below this to count as a refutation.
pub const REFUTATION_THRESHOLD: f64 = -1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("system `{name}` is not a {expected}")]
    WrongKind { name: String, expected: &'static str },
    #[error("box dimension {got} does not match system dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

/// Which derivative family the certificate checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckedForm {
    /// Off-diagonal partials of the full right-hand side of a field.
    OffDiagonalRhs,
    /// Every Jacobian entry of a map, diagonal included.
    FullJacobian,
}

/// A point where some checked partial is provably negative.
#[derive(Debug, Clone, PartialEq)]
pub struct RefutationWitness {
    pub point: Vec<f64>,
    /// Coordinate function index i of the partial d f_i / d x_j.
    pub coord: usize,
    /// Differentiation variable index j.
    pub wrt: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub verdict: Verdict,
    pub region: IntervalBox,
    pub witness: Option<RefutationWitness>,
    pub subdivisions: usize,
    pub depth_limit: u32,
    pub checked_form: CheckedForm,
    pub reason: Option<String>,
}

impl Certificate {
    /// Re-evaluates the stored partial at the stored witness point and
    /// checks that it is still below the refutation threshold.
    pub fn replay_witness(&self, sys: &SystemDef) -> bool {
        match &self.witness {
            None => false,
            Some(w) => sys
                .partial(w.coord, w.wrt)
                .eval(&w.point)
                .map(|v| v < REFUTATION_THRESHOLD && v == w.value)
                .unwrap_or(false),
        }
    }

    pub fn to_json_string(&self) -> String {
        let witness = self.witness.as_ref().map(|w| WitnessJson {
            point: w.point.iter().map(|v| format!("{v:.16e}")).collect(),
            coord: w.coord,
            wrt: w.wrt,
            value: format!("{:.16e}", w.value),
        });
        let file = CertificateJson {
            verdict: self.verdict,
            region: self
                .region
                .axes()
                .iter()
                .map(|iv| (iv.lo, iv.hi))
                .collect(),
            witness,
            subdivisions: self.subdivisions,
            depth_limit: self.depth_limit,
            checked_form: self.checked_form,
            reason: self.reason.clone(),
        };
        serde_json::to_string_pretty(&file).expect("certificate serialization cannot fail")
    }

    pub fn from_json_str(text: &str) -> Result<Certificate, serde_json::Error> {
        let file: CertificateJson = serde_json::from_str(text)?;
        let witness = file.witness.map(|w| RefutationWitness {
            point: w
                .point
                .iter()
                .map(|s| s.parse::<f64>().expect("witness coordinates are decimal"))
                .collect(),
            coord: w.coord,
            wrt: w.wrt,
            value: w.value.parse::<f64>().expect("witness value is decimal"),
        });
        Ok(Certificate {
            verdict: file.verdict,
            region: IntervalBox::from_bounds(&file.region),
            witness,
            subdivisions: file.subdivisions,
            depth_limit: file.depth_limit,
            checked_form: file.checked_form,
            reason: file.reason,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    verdict: Verdict,
    region: Vec<(f64, f64)>,
    witness: Option<WitnessJson>,
    subdivisions: usize,
    depth_limit: u32,
    checked_form: CheckedForm,
    reason: Option<String>,
}

/// Witness coordinates are decimal strings with 17 significant digits so
/// the exact f64 bits survive serialization.
#[derive(Serialize, Deserialize)]
struct WitnessJson {
    point: Vec<String>,
    coord: usize,
    wrt: usize,
    value: String,
}

/// Certifies that a vector field is cooperative on `region`: every
/// off-diagonal partial of the right-hand side is nonnegative. The check
/// applies to the full right-hand side f_i (for ecology-style systems
/// f_i = x_i G_i, whose off-diagonal partials share the sign of those of
/// G_i on the open positive orthant); the certificate records this form.
pub fn verify_cooperative_field(
    sys: &SystemDef,
    region: &IntervalBox,
    depth_limit: u32,
) -> Result<Certificate, CertifyError> {
    if sys.kind() != SystemKind::VectorField {
        return Err(CertifyError::WrongKind {
            name: sys.name().to_string(),
            expected: "vector-field",
        });
    }
    let n = sys.dimension();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    verify_partials(sys, region, depth_limit, &pairs, CheckedForm::OffDiagonalRhs)
}

/// Certifies that a discrete map has a nonnegative Jacobian on `region`:
/// every partial, diagonal included.
pub fn verify_monotone_map(
    sys: &SystemDef,
    region: &IntervalBox,
    depth_limit: u32,
) -> Result<Certificate, CertifyError> {
    if sys.kind() != SystemKind::DiscreteMap {
        return Err(CertifyError::WrongKind {
            name: sys.name().to_string(),
            expected: "discrete-map",
        });
    }
    let n = sys.dimension();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .collect();
    verify_partials(sys, region, depth_limit, &pairs, CheckedForm::FullJacobian)
}

fn verify_partials(
    sys: &SystemDef,
    region: &IntervalBox,
    depth_limit: u32,
    pairs: &[(usize, usize)],
    checked_form: CheckedForm,
) -> Result<Certificate, CertifyError> {
    let n = sys.dimension();
    if region.dim() != n {
        return Err(CertifyError::DimensionMismatch {
            expected: n,
            got: region.dim(),
        });
    }
    let partials: Vec<((usize, usize), Expr)> = pairs
        .iter()
        .map(|&(i, j)| ((i, j), sys.partial(i, j)))
        .collect();

    let done = |verdict, witness, subdivisions, reason| {
        Ok(Certificate {
            verdict,
            region: region.clone(),
            witness,
            subdivisions,
            depth_limit,
            checked_form,
            reason,
        })
    };

    if pairs.is_empty() {
        // One-dimensional fields have no off-diagonal condition.
        return done(Verdict::Certified, None, 0, None);
    }

    let mut queue: VecDeque<(IntervalBox, Vec<u32>)> = VecDeque::new();
    queue.push_back((region.clone(), vec![0; n]));
    let mut subdivisions = 0usize;
    let mut unresolved_reason: Option<String> = None;

    while let Some((leaf, splits)) = queue.pop_front() {
        let mut straddling = Vec::new();
        let mut leaf_reason = None;
        for ((i, j), partial) in &partials {
            match interval_eval(partial, &leaf) {
                Ok(range) => {
                    if range.lo < 0.0 {
                        straddling.push((*i, *j, partial));
                    }
                }
                Err(err) => {
                    leaf_reason = Some(format!(
                        "partial d f_{i} / d x_{j} not evaluable on sub-box: {err}"
                    ));
                    break;
                }
            }
        }
        if let Some(reason) = leaf_reason {
            unresolved_reason.get_or_insert(reason);
            continue;
        }
        if straddling.is_empty() {
            continue; // leaf certified
        }
        // Try to refute from point samples before spending depth budget.
        let mut samples = vec![leaf.midpoint()];
        if n <= 12 {
            samples.extend(leaf.corners());
        }
        for point in &samples {
            for (i, j, partial) in &straddling {
                if let Ok(v) = partial.eval(point) {
                    if v < REFUTATION_THRESHOLD {
                        return done(
                            Verdict::Refuted,
                            Some(RefutationWitness {
                                point: point.clone(),
                                coord: *i,
                                wrt: *j,
                                value: v,
                            }),
                            subdivisions,
                            None,
                        );
                    }
                }
            }
        }
        // Bisect the widest axis that still has depth budget.
        let mut axes: Vec<usize> = (0..n).collect();
        axes.sort_by(|&a, &b| {
            leaf.axis(b)
                .width()
                .partial_cmp(&leaf.axis(a).width())
                .expect("box widths are finite")
        });
        match axes.into_iter().find(|&a| splits[a] < depth_limit) {
            Some(axis) => {
                let (left, right) = leaf.bisect(axis);
                let mut child_splits = splits.clone();
                child_splits[axis] += 1;
                subdivisions += 1;
                queue.push_back((left, child_splits.clone()));
                queue.push_back((right, child_splits));
            }
            None => {
                unresolved_reason.get_or_insert_with(|| {
                    format!("depth limit {depth_limit} reached with sign still unresolved")
                });
            }
        }
    }

    match unresolved_reason {
        Some(reason) => done(Verdict::Inconclusive, None, subdivisions, Some(reason)),
        None => done(Verdict::Certified, None, subdivisions, None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::builtin;
    use std::collections::BTreeMap;

    fn competitive_lv() -> SystemDef {
        SystemDef::new(
            "competitive-lv",
            SystemKind::VectorField,
            &["x", "y"],
            BTreeMap::new(),
            &["x*(1 - x - 0.5*y)", "y*(1 - y - 0.5*x)"],
        )
        .unwrap()
    }

    #[test]
    fn cooperative_lv_certified_at_shallow_depth() {
        let sys = builtin("coop-lv-2d").unwrap();
        let bx = IntervalBox::cube(0.0, 5.0, 2);
        let cert = verify_cooperative_field(&sys, &bx, 2).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified, "reason: {:?}", cert.reason);
    }

    #[test]
    fn lorenz_field_refuted_with_replayable_witness() {
        let sys = builtin("lorenz-classical").unwrap();
        let bx = IntervalBox::cube(-20.0, 20.0, 3);
        let cert = verify_cooperative_field(&sys, &bx, 6).unwrap();
        assert_eq!(cert.verdict, Verdict::Refuted);
        assert!(cert.replay_witness(&sys));
    }

    #[test]
    fn competitive_lv_refuted() {
        let cert =
            verify_cooperative_field(&competitive_lv(), &IntervalBox::cube(0.0, 5.0, 2), 4)
                .unwrap();
        assert_eq!(cert.verdict, Verdict::Refuted);
        let w = cert.witness.as_ref().unwrap();
        assert!(w.value < REFUTATION_THRESHOLD);
    }

    #[test]
    fn constant_nonnegative_jacobian_map_certified() {
        let sys = SystemDef::new(
            "shear",
            SystemKind::DiscreteMap,
            &["x", "y"],
            BTreeMap::new(),
            &["x + 0.1*y", "0.1*x + y"],
        )
        .unwrap();
        let cert = verify_monotone_map(&sys, &IntervalBox::cube(0.0, 1.0, 2), 2).unwrap();
        assert_eq!(cert.verdict, Verdict::Certified);
        assert_eq!(cert.checked_form, CheckedForm::FullJacobian);
    }

    #[test]
    fn reflection_map_refuted() {
        let sys = SystemDef::new(
            "reflect",
            SystemKind::DiscreteMap,
            &["x"],
            BTreeMap::new(),
            &["1 - x"],
        )
        .unwrap();
        let cert = verify_monotone_map(&sys, &IntervalBox::cube(0.0, 1.0, 1), 2).unwrap();
        assert_eq!(cert.verdict, Verdict::Refuted);
    }

    #[test]
    fn product_map_verdict_depends_on_box() {
        let sys = SystemDef::new(
            "prod",
            SystemKind::DiscreteMap,
            &["x", "y"],
            BTreeMap::new(),
            &["x*y", "x + y"],
        )
        .unwrap();
        let on_pos = verify_monotone_map(&sys, &IntervalBox::cube(0.0, 2.0, 2), 3).unwrap();
        assert_eq!(on_pos.verdict, Verdict::Certified);
        let on_mixed = verify_monotone_map(&sys, &IntervalBox::cube(-2.0, 2.0, 2), 3).unwrap();
        assert_eq!(on_mixed.verdict, Verdict::Refuted);
        assert!(on_mixed.replay_witness(&sys));
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let sys = builtin("lorenz-classical").unwrap();
        assert!(matches!(
            verify_monotone_map(&sys, &IntervalBox::cube(0.0, 1.0, 3), 2),
            Err(CertifyError::WrongKind { .. })
        ));
    }

    #[test]
    fn expanded_square_derivative_stays_inconclusive() {
        // T' = x^2 - 4x + 4 = (x-2)^2 >= 0, but the expanded form keeps a
        // zero-straddling enclosure near x = 2 at every depth: never
        // refuted (it is truly nonnegative), never certified.
        let sys = SystemDef::new(
            "flat-tangent",
            SystemKind::DiscreteMap,
            &["x"],
            BTreeMap::new(),
            &["x^3/3 - 2*x^2 + 4*x"],
        )
        .unwrap();
        let bx = IntervalBox::cube(1.0, 3.0, 1);
        for depth in [0, 1, 2, 4] {
            let cert = verify_monotone_map(&sys, &bx, depth).unwrap();
            assert_eq!(cert.verdict, Verdict::Inconclusive, "depth {depth}");
        }
    }

    #[test]
    fn deeper_limits_never_flip_resolved_verdicts() {
        let coop = builtin("coop-lv-2d").unwrap();
        let lorenz = builtin("lorenz-classical").unwrap();
        let coop_box = IntervalBox::cube(0.0, 5.0, 2);
        let lorenz_box = IntervalBox::cube(-20.0, 20.0, 3);
        let mut prev_coop = None;
        let mut prev_lorenz = None;
        for depth in 0..=5 {
            let c = verify_cooperative_field(&coop, &coop_box, depth).unwrap().verdict;
            let l = verify_cooperative_field(&lorenz, &lorenz_box, depth)
                .unwrap()
                .verdict;
            if let Some(p) = prev_coop {
                if p != Verdict::Inconclusive {
                    assert_eq!(c, p);
                }
            }
            if let Some(p) = prev_lorenz {
                if p != Verdict::Inconclusive {
                    assert_eq!(l, p);
                }
            }
            prev_coop = Some(c);
            prev_lorenz = Some(l);
        }
    }

    #[test]
    fn certificate_json_round_trip_is_bit_exact() {
        let sys = builtin("lorenz-classical").unwrap();
        let cert =
            verify_cooperative_field(&sys, &IntervalBox::cube(-20.0, 20.0, 3), 4).unwrap();
        let text = cert.to_json_string();
        let back = Certificate::from_json_str(&text).unwrap();
        assert_eq!(back.verdict, cert.verdict);
        let (w0, w1) = (cert.witness.unwrap(), back.witness.unwrap());
        assert_eq!(w0.point, w1.point);
        assert_eq!(w0.value.to_bits(), w1.value.to_bits());
    }

    #[test]
    fn domain_error_inside_box_is_inconclusive_with_reason() {
        let sys = SystemDef::new(
            "logmap",
            SystemKind::DiscreteMap,
            &["x"],
            BTreeMap::new(),
            &["log(x)"],
        )
        .unwrap();
        // d log(x)/dx = 1/x, not evaluable on an interval straddling zero.
        let cert = verify_monotone_map(&sys, &IntervalBox::cube(-1.0, 1.0, 1), 3).unwrap();
        assert_eq!(cert.verdict, Verdict::Inconclusive);
        assert!(cert.reason.is_some());
    }
}
