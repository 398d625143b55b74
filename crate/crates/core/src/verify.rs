//! Verification suites and report generation.
//!
//! Each check produces one [`CheckReport`] (the SES check produces one per
//! `ℓ`). A failing report carries the expected and computed values of the
//! first failing cell. Reports are deterministic: timings are only recorded
//! when asked for.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::finsetcat::{enumerate_hom, hom_dimension, HomClass};
use crate::fsfilt::{
    analyze_theta, augmentation_trivial_check, closure_check, coker_theta_decompose, expected_coker,
    fi_stability_holds, fs_class, lambda_bar_dimension, lambda_bar_rep, level_dims, level_is_stable, nesting_holds,
    primitives, primitives_class, ses_check, sgn_vanishing_check, subquotient_decompose, theta_is_equivariant,
    theta_is_inversion, CellComparison,
};
use crate::partitions::{factorial, partitions_of, Partition};
use crate::repdecomp::{
    biconvolution_right, convolution_class, decompose, derham_check, induction_product, inversion_check, pieri_e,
    pieri_h, BiSchurClass, CharacterTable, RepError, SchurClass,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot serialize report: {0}")]
    Serialize(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    /// Number of cells or instances examined.
    pub cells: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub computed: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    fn new(id: &str, params: BTreeMap<String, Value>) -> Self {
        Self {
            id: id.to_string(),
            params,
            status: Status::Vacuous,
            cells: 0,
            expected: None,
            computed: None,
            detail: None,
            elapsed_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    fn fail(mut self, detail: String, expected: Option<Value>, computed: Option<Value>) -> Self {
        self.status = Status::Fail;
        self.detail = Some(detail);
        self.expected = expected;
        self.computed = computed;
        self
    }

    /// Pass iff every cell holds; vacuous when there are none.
    fn from_cells(id: &str, params: BTreeMap<String, Value>, cells: Result<Vec<CellComparison>, RepError>) -> Self {
        let report = Self::new(id, params);
        let cells = match cells {
            Ok(cells) => cells,
            Err(e) => return report.fail(e.to_string(), None, None),
        };
        let mut report = Self {
            cells: cells.len(),
            ..report
        };
        if let Some(bad) = cells.iter().find(|c| !c.holds()) {
            let (key, e, c) = bad
                .expected
                .first_difference(&bad.computed)
                .map(|((l, r), e, c)| (format!("({l},{r})"), e, c))
                .expect("cells that differ have a differing coefficient");
            let at = match bad.ell {
                Some(ell) => format!("(b,a,ℓ)=({},{},{ell})", bad.b, bad.a),
                None => format!("(b,a)=({},{})", bad.b, bad.a),
            };
            let detail = format!("{at}: coefficient of {key} expected {e}, computed {c}");
            return report.fail(detail, Some(json!(bad.expected)), Some(json!(bad.computed)));
        }
        report.status = if cells.is_empty() {
            Status::Vacuous
        } else {
            Status::Pass
        };
        report
    }

    /// Pass iff every labelled instance is `Ok(true)`.
    fn from_instances(
        id: &str,
        params: BTreeMap<String, Value>,
        instances: impl IntoIterator<Item = (String, Result<bool, RepError>)>,
    ) -> Self {
        let mut report = Self::new(id, params);
        for (label, outcome) in instances {
            report.cells += 1;
            match outcome {
                Ok(true) => {}
                Ok(false) => return report.fail(format!("fails at {label}"), None, None),
                Err(e) => return report.fail(format!("{label}: {e}"), None, None),
            }
        }
        report.status = if report.cells == 0 {
            Status::Vacuous
        } else {
            Status::Pass
        };
        report
    }
}

fn params(pairs: &[(&str, Value)]) -> BTreeMap<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn cells_up_to(bound: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=bound).flat_map(|b| (0..=b).map(move |a| (b, a)))
}

fn sign(k: usize) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------------
// Class-level formulas

/// `[kFS⁰(b,a)] + [b>a] (-1)^{b-a} (sgn_a ⊠ sgn_b)` against
/// `Σ_t (-1)^t [kFS(b-t,a)] ⊙ sgn_t`.
pub fn primfs_cells(bound: usize) -> Result<Vec<CellComparison>, RepError> {
    cells_up_to(bound)
        .map(|(b, a)| {
            let mut computed = primitives_class(b, a)?;
            if b > a {
                computed.add_term((Partition::column(a), Partition::column(b)), sign(b - a));
            }
            let mut expected = BiSchurClass::zero();
            for t in 0..=b - a {
                let term = biconvolution_right(&fs_class(b - t, a)?, &SchurClass::single(Partition::column(t)));
                expected += &term.scaled(sign(t));
            }
            Ok(CellComparison {
                b,
                a,
                ell: None,
                expected,
                computed,
            })
        })
        .collect()
}

pub fn primfs_formula(bound: usize) -> CheckReport {
    CheckReport::from_cells("primfs", params(&[("bound", json!(bound))]), primfs_cells(bound))
}

/// `Σ_ℓ [kFS⁰(b-ℓ,a)] ⊙ triv_ℓ` against `[kFS(b,a)] + [b>a] sgn_a ⊠ S_{(b-a,1^a)}`.
pub fn kring_fs_cells(bound: usize) -> Result<Vec<CellComparison>, RepError> {
    cells_up_to(bound)
        .map(|(b, a)| {
            let mut computed = BiSchurClass::zero();
            for ell in 0..=b - a {
                computed +=
                    &biconvolution_right(&primitives_class(b - ell, a)?, &SchurClass::single(Partition::row(ell)));
            }
            let mut expected = fs_class(b, a)?;
            if b > a {
                expected.add_term((Partition::column(a), Partition::hook(b - a, a)), 1);
            }
            Ok(CellComparison {
                b,
                a,
                ell: None,
                expected,
                computed,
            })
        })
        .collect()
}

pub fn kring_fs_check(bound: usize) -> CheckReport {
    CheckReport::from_cells("kring_fs", params(&[("bound", json!(bound))]), kring_fs_cells(bound))
}

/// The closed form for `[kFS^{ℓ/(ℓ-1)}(b,a)]`, `ℓ ≥ 1`, `a + ℓ ≤ b`.
pub fn subquotient_expected(ell: usize, b: usize, a: usize) -> Result<BiSchurClass, RepError> {
    let c = b - ell;
    let triv = SchurClass::single(Partition::row(ell));
    let mut out = BiSchurClass::zero();
    for t in 0..=c - a {
        let factor = convolution_class(&triv, &SchurClass::single(Partition::column(t)));
        out += &biconvolution_right(&fs_class(c - t, a)?, &factor).scaled(sign(t));
    }
    if c > a {
        let correction = biconvolution_right(&BiSchurClass::pair(Partition::column(a), Partition::column(c)), &triv);
        out -= &correction.scaled(sign(c - a));
    }
    if b == a + ell {
        out.add_term((Partition::column(a), Partition::hook(ell, a)), -1);
    }
    Ok(out)
}

pub fn subquotient_cells(bound: usize) -> Result<Vec<CellComparison>, RepError> {
    let mut cells = Vec::new();
    for ell in 1..=bound {
        for b in ell..=bound {
            for a in 0..=b - ell {
                cells.push(CellComparison {
                    b,
                    a,
                    ell: Some(ell),
                    expected: subquotient_expected(ell, b, a)?,
                    computed: subquotient_decompose(ell, b, a)?,
                });
            }
        }
    }
    Ok(cells)
}

/// Levels above `b - a` add nothing: those cells are checked to be zero
/// and otherwise not counted.
pub fn subquotient_formula(bound: usize) -> CheckReport {
    let p = params(&[("bound", json!(bound))]);
    let beyond = cells_up_to(bound)
        .flat_map(|(b, a)| ((b - a + 1)..=b).map(move |ell| (b, a, ell)))
        .map(|(b, a, ell)| {
            let outcome = subquotient_decompose(ell, b, a).map(|c| c.is_zero());
            (format!("(b,a,ℓ)=({b},{a},{ell})"), outcome)
        });
    let vanishing = CheckReport::from_instances("subquotients", p.clone(), beyond);
    if !vanishing.passed() {
        return vanishing;
    }
    CheckReport::from_cells("subquotients", p, subquotient_cells(bound))
}

// ---------------------------------------------------------------------------
// Suites

pub fn dims_check(bound: usize) -> CheckReport {
    let instances = cells_up_to(bound).flat_map(|(b, a)| {
        [
            (HomClass::Surjection, b, a),
            (HomClass::Injection, a, b),
            (HomClass::All, b, a),
            (HomClass::Bijection, b, a),
        ]
        .into_iter()
        .map(|(flavor, s, t)| {
            let closed = hom_dimension(flavor, s, t) as usize;
            let listed = enumerate_hom(flavor, s, t).len();
            (
                format!("{}({s},{t}): closed form {closed}, enumerated {listed}", flavor.name()),
                Ok(closed == listed),
            )
        })
    });
    CheckReport::from_instances("dims", params(&[("bound", json!(bound))]), instances)
}

pub fn orthogonality_check(max_n: usize) -> CheckReport {
    let instances = (0..=max_n).map(|n| (format!("n={n}"), Ok(CharacterTable::of(n).satisfies_orthogonality())));
    CheckReport::from_instances("orthogonality", params(&[("max_n", json!(max_n))]), instances)
}

/// Pieri fast paths against induced-character products.
pub fn pieri_check(max_weight: usize, max_strip: usize) -> CheckReport {
    let instances = (0..=max_weight).flat_map(partitions_of).flat_map(|lambda| {
        (0..=max_strip).map(move |n| {
            let ok = pieri_h(&lambda, n) == induction_product(&lambda, &Partition::row(n))
                && pieri_e(&lambda, n) == induction_product(&lambda, &Partition::column(n));
            (format!("λ={lambda}, n={n}"), Ok(ok))
        })
    });
    CheckReport::from_instances(
        "pieri",
        params(&[("max_weight", json!(max_weight)), ("max_strip", json!(max_strip))]),
        instances,
    )
}

pub fn derham_suite(max_n: usize) -> CheckReport {
    let instances = (1..=max_n).map(|n| (format!("n={n}"), Ok(derham_check(n))));
    CheckReport::from_instances("derham", params(&[("max_n", json!(max_n))]), instances)
}

pub fn inversion_suite(max_weight: usize) -> CheckReport {
    let instances = (0..=max_weight)
        .flat_map(partitions_of)
        .map(|lambda| (format!("λ={lambda}"), Ok(inversion_check(&SchurClass::single(lambda)))));
    CheckReport::from_instances("inversion", params(&[("max_weight", json!(max_weight))]), instances)
}

pub fn theta_inverse_check(bound: usize) -> CheckReport {
    let instances = (0..=bound).map(|a| (format!("a={a}"), Ok(theta_is_inversion(a))));
    CheckReport::from_instances("theta_inverse", params(&[("bound", json!(bound))]), instances)
}

pub fn theta_equivariance_check(bound: usize) -> CheckReport {
    let instances = cells_up_to(bound).map(|(b, a)| (format!("(a,b)=({a},{b})"), Ok(theta_is_equivariant(a, b))));
    CheckReport::from_instances("theta_equivariance", params(&[("bound", json!(bound))]), instances)
}

/// `ker Θ_a(b) = M^{b-a-1}(b,a)`. The pairs where `Θ_a(b)` is not injective
/// are listed in the detail.
pub fn theta_kernel_check(bound: usize) -> CheckReport {
    let mut non_injective = Vec::new();
    let instances: Vec<_> = cells_up_to(bound)
        .map(|(b, a)| {
            let outcome = analyze_theta(a, b).map(|t| {
                if !t.injective() {
                    non_injective.push(format!("({a},{b}):{}", t.domain_dim - t.rank));
                }
                t.kernel_is_level
            });
            (format!("(a,b)=({a},{b})"), outcome)
        })
        .collect();
    let mut report = CheckReport::from_instances("theta_kernel", params(&[("bound", json!(bound))]), instances);
    if report.passed() && !non_injective.is_empty() {
        report.detail = Some(format!(
            "not injective, as (a,b):kernel dimension: {}",
            non_injective.join(" ")
        ));
    }
    report
}

pub fn coker_theta_check(bound: usize) -> CheckReport {
    let cells = cells_up_to(bound)
        .map(|(b, a)| {
            Ok(CellComparison {
                b,
                a,
                ell: None,
                expected: expected_coker(a, b),
                computed: coker_theta_decompose(a, b)?,
            })
        })
        .collect();
    CheckReport::from_cells("coker_theta", params(&[("bound", json!(bound))]), cells)
}

pub fn lambda_bar_check(bound: usize) -> CheckReport {
    let instances = cells_up_to(bound).map(|(b, t)| {
        let outcome = lambda_bar_rep(t, b).and_then(|rep| {
            let expected = if b > t {
                SchurClass::single(Partition::hook(b - t, t))
            } else {
                SchurClass::zero()
            };
            Ok(rep.dim() as u64 == lambda_bar_dimension(t, b) && decompose(&rep)? == expected)
        });
        (format!("(t,b)=({t},{b})"), outcome)
    });
    CheckReport::from_instances("lambda_bar", params(&[("bound", json!(bound))]), instances)
}

/// `M^{-1} = 0`, nesting, exhaustion, stability under both group actions
/// and under restriction along injections, for every level.
pub fn filtration_check(bound: usize) -> CheckReport {
    let instances = cells_up_to(bound).map(|(b, a)| {
        let ok =
            nesting_holds(b, a) && (-1..=b as i64).all(|t| level_is_stable(b, a, t) && fi_stability_holds(b, a, t));
        (format!("(b,a)=({b},{a})"), Ok(ok))
    });
    CheckReport::from_instances("filtration", params(&[("bound", json!(bound))]), instances)
}

/// `kFS⁰(a,a) = kAut(a)` and closure under composition.
pub fn closure_suite(bound: usize) -> CheckReport {
    let blocks = (0..=bound).map(|a| {
        (
            format!("kFS⁰({a},{a}) = kAut({a})"),
            Ok(primitives(a, a).dim() == factorial(a) as usize),
        )
    });
    let triples = (0..=bound).flat_map(|b| {
        (0..=b).flat_map(move |x| (0..=x).map(move |y| (format!("(b,x,y)=({b},{x},{y})"), Ok(closure_check(b, x, y)))))
    });
    CheckReport::from_instances("closure", params(&[("bound", json!(bound))]), blocks.chain(triples))
}

pub fn sgn_vanishing_suite(bound: usize) -> CheckReport {
    let instances = (0..=bound)
        .flat_map(|a| (0..a).map(move |c| (a, c)))
        .map(|(a, c)| (format!("(a,c)=({a},{c})"), sgn_vanishing_check(a, c)));
    CheckReport::from_instances("sgn_vanishing", params(&[("bound", json!(bound))]), instances)
}

pub fn ses_suite(ell: usize, bound: usize) -> CheckReport {
    CheckReport::from_cells(
        "ses",
        params(&[("bound", json!(bound)), ("ell", json!(ell))]),
        ses_check(ell, bound),
    )
}

pub fn augmentation_suite(bound: usize) -> CheckReport {
    let instances = cells_up_to(bound).map(|(b, a)| (format!("(a,b)=({a},{b})"), Ok(augmentation_trivial_check(a, b))));
    CheckReport::from_instances("augmentation", params(&[("bound", json!(bound))]), instances)
}

/// Check ids in execution order.
pub const CHECK_IDS: &[&str] = &[
    "dims",
    "orthogonality",
    "pieri",
    "derham",
    "inversion",
    "theta_inverse",
    "theta_equivariance",
    "theta_kernel",
    "coker_theta",
    "lambda_bar",
    "filtration",
    "closure",
    "sgn_vanishing",
    "ses",
    "augmentation",
    "primfs",
    "kring_fs",
    "subquotients",
];

/// Bounds for one run. `bound` is the largest finite set; the class
/// formulas for the corollaries and the augmentation check use
/// `formula_bound`, capped at `bound`.
#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub bound: usize,
    pub formula_bound: usize,
    pub timings: bool,
}

impl RunOptions {
    pub fn new(bound: usize) -> Self {
        Self {
            bound,
            formula_bound: bound.min(5),
            timings: false,
        }
    }
}

type Job = Box<dyn FnOnce() -> CheckReport>;

fn job(f: impl FnOnce() -> CheckReport + 'static) -> Vec<Job> {
    vec![Box::new(f)]
}

fn run_one(id: &str, opts: &RunOptions) -> Result<Vec<Job>, VerifyError> {
    let n = opts.bound;
    let f = opts.formula_bound.min(n);
    Ok(match id {
        "dims" => job(move || dims_check(n + 1)),
        "orthogonality" => job(move || orthogonality_check(n.max(7))),
        "pieri" => job(move || pieri_check(5, 3)),
        "derham" => job(move || derham_suite(10)),
        "inversion" => job(move || inversion_suite(5)),
        "theta_inverse" => job(move || theta_inverse_check(n)),
        "theta_equivariance" => job(move || theta_equivariance_check(n)),
        "theta_kernel" => job(move || theta_kernel_check(n)),
        "coker_theta" => job(move || coker_theta_check(n)),
        "lambda_bar" => job(move || lambda_bar_check(n + 1)),
        "filtration" => job(move || filtration_check(n)),
        "closure" => job(move || closure_suite(n)),
        "sgn_vanishing" => job(move || sgn_vanishing_suite(n)),
        "ses" => (1..=n.max(1))
            .map(|ell| -> Job { Box::new(move || ses_suite(ell, n)) })
            .collect(),
        "augmentation" => job(move || augmentation_suite(f)),
        "primfs" => job(move || primfs_formula(n)),
        "kring_fs" => job(move || kring_fs_check(f)),
        "subquotients" => job(move || subquotient_formula(f)),
        other => return Err(VerifyError::UnknownCheck(other.to_string())),
    })
}

/// Runs one check (or `all`, in canonical order).
pub fn run_checks(which: &str, opts: &RunOptions) -> Result<Vec<CheckReport>, VerifyError> {
    let ids: Vec<&str> = if which == "all" {
        CHECK_IDS.to_vec()
    } else {
        vec![which]
    };
    let mut reports = Vec::new();
    for id in ids {
        for run in run_one(id, opts)? {
            let start = Instant::now();
            let mut r = run();
            if opts.timings {
                r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
            }
            reports.push(r);
        }
    }
    Ok(reports)
}

pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::passed)
}

pub fn reports_json(reports: &[CheckReport]) -> Result<String, VerifyError> {
    Ok(serde_json::to_string_pretty(reports)? + "\n")
}

/// CSV of `b, a, dim kFS, dim kFS⁰, dim kFS^0, ..., dim kFS^bound`; levels
/// above `b - a` are left empty (they equal the whole space).
pub fn dims_csv(bound: usize) -> String {
    let mut out = String::from("b,a,dim_fs,dim_fs0");
    for t in 0..=bound {
        let _ = write!(out, ",dim_level_{t}");
    }
    out.push('\n');
    for (b, a) in cells_up_to(bound) {
        let (total, levels) = level_dims(b, a);
        let _ = write!(out, "{b},{a},{total},{}", levels.first().copied().unwrap_or(0));
        for t in 0..=bound {
            match levels.get(t) {
                Some(d) => {
                    let _ = write!(out, ",{d}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), VerifyError> {
    std::fs::write(path, contents).map_err(|source| VerifyError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Runs every check and writes the JSON report to `out`.
pub fn run_all(bound: usize, out: &Path) -> Result<bool, VerifyError> {
    let reports = run_checks("all", &RunOptions::new(bound))?;
    write_file(out, &reports_json(&reports)?)?;
    Ok(all_passed(&reports))
}
