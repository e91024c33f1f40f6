use num_complex::Complex64;
use serde::Serialize;

use super::{
    eigenvalues, frobenius_deviation, imprimitivity_index, match_multisets, roots_of_rho,
    SpectralReport, PERIPHERAL_TOL,
};
use crate::compound::{second_compound, PairIndexer};
use crate::error::{Error, Result};
use crate::matrix::{is_irreducible, Matrix, Permutation};
use crate::relation::{is_transitive, permutation_from_w, w_hat, RelationSet};
use crate::signsym::{detect_weak, SignPartition, ZeroBand};

/// A simple eigenvalue must be separated from the rest of the spectrum by
/// this multiple of the largest eigenpair residual.
pub const SIMPLICITY_FACTOR: f64 = 1e3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    TwoPositiveLeading,
    TridentH3,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub peripheral_tol: f64,
    pub matrix_band: ZeroBand,
    pub compound_band: ZeroBand,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            peripheral_tol: PERIPHERAL_TOL,
            matrix_band: ZeroBand::Exact,
            compound_band: ZeroBand::COMPUTED,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Classification {
    pub case: Case,
    pub lambda1: Option<f64>,
    pub lambda2: Option<f64>,
    pub h_a: Option<usize>,
    pub h_compound: Option<usize>,
    pub sign_partition: Option<SignPartition>,
    pub compound_partition: Option<SignPartition>,
    pub relation: Option<RelationSet>,
    pub transitive: Option<bool>,
    /// Ordering of the indices when the relation is a linear order.
    pub order: Option<Permutation>,
    pub irreducible_a: Option<bool>,
    pub irreducible_compound: Option<bool>,
    pub peripheral: Vec<Complex64>,
    /// Eigenvalues of modulus `λ2`, when the compound is imprimitive.
    pub ring: Vec<Complex64>,
    pub inapplicable: Option<String>,
    pub witness: Vec<String>,
    pub checks: Vec<Check>,
    pub verified: bool,
}

impl Classification {
    fn new() -> Self {
        Classification {
            case: Case::Inapplicable,
            lambda1: None,
            lambda2: None,
            h_a: None,
            h_compound: None,
            sign_partition: None,
            compound_partition: None,
            relation: None,
            transitive: None,
            order: None,
            irreducible_a: None,
            irreducible_compound: None,
            peripheral: Vec::new(),
            ring: Vec::new(),
            inapplicable: None,
            witness: Vec::new(),
            checks: Vec::new(),
            verified: false,
        }
    }

    fn note(&mut self, line: impl Into<String>) {
        self.witness.push(line.into());
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    fn stop(mut self, reason: impl Into<String>) -> Self {
        let reason = reason.into();
        self.note(format!("inapplicable: {reason}"));
        self.inapplicable = Some(reason);
        self.finish()
    }

    fn finish(mut self) -> Self {
        self.verified = self.checks.iter().all(|c| c.passed);
        self
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn show(h: Option<usize>) -> String {
    h.map_or_else(|| "unavailable".to_string(), |h| h.to_string())
}

fn one_based(members: &[usize]) -> Vec<usize> {
    members.iter().map(|m| m + 1).collect()
}

/// Sign-symmetry failures end the analysis; anything else is a real error.
fn soft_detect(a: &Matrix, band: ZeroBand) -> Result<std::result::Result<SignPartition, Error>> {
    match detect_weak(a, band) {
        Ok(j) => Ok(Ok(j)),
        Err(e @ (Error::SignConflict { .. } | Error::NegativeDiagonal { .. })) => Ok(Err(e)),
        Err(e) => Err(e),
    }
}

pub fn classify(a: &Matrix) -> Result<Classification> {
    classify_with(a, &ClassifyOptions::default())
}

pub fn classify_with(a: &Matrix, opts: &ClassifyOptions) -> Result<Classification> {
    let mut c = Classification::new();
    let n = a.n();
    if n < 2 {
        return Ok(c.stop("a second compound needs n >= 2"));
    }
    let j = match soft_detect(a, opts.matrix_band)? {
        Ok(j) => j,
        Err(e) => return Ok(c.stop(format!("A is not weakly sign-symmetric ({e})"))),
    };
    c.note(format!("A weakly sign-symmetric with J = {:?}", one_based(j.members())));

    let compound = second_compound(a)?;
    let j_tilde = match soft_detect(&compound, opts.compound_band)? {
        Ok(j) => j,
        Err(e) => return Ok(c.stop(format!("A^(2) is not weakly sign-symmetric ({e})"))),
    };
    c.note(format!(
        "A^(2) weakly sign-symmetric with J~ = {:?}",
        one_based(j_tilde.members())
    ));

    let idx = PairIndexer::new(n);
    let w = w_hat(&j, &j_tilde, &idx)?;
    let transitive = is_transitive(&w);
    c.note(format!(
        "relation built from J and J~ is {}",
        if transitive { "transitive" } else { "not transitive" }
    ));

    let zero_a = opts.matrix_band.threshold(a);
    let zero_c = opts.compound_band.threshold(&compound);
    let irr_a = is_irreducible(a, zero_a);
    let irr_c = is_irreducible(&compound, zero_c);
    let tol = opts.peripheral_tol;
    let spec_a = eigenvalues(a, tol)?;
    let spec_c = eigenvalues(&compound, tol)?;

    c.sign_partition = Some(j);
    c.compound_partition = Some(j_tilde);
    c.transitive = Some(transitive);
    c.irreducible_a = Some(irr_a);
    c.irreducible_compound = Some(irr_c);
    c.peripheral = spec_a.peripheral.clone();
    if transitive {
        c.order = Some(permutation_from_w(&w)?);
    }
    c.relation = Some(w);

    if transitive {
        leading_pair_nonnegative(&mut c, &spec_a, tol);
    }
    if !(irr_a && irr_c) {
        let failed = match (irr_a, irr_c) {
            (false, false) => "A and A^(2) are reducible",
            (false, true) => "A is reducible",
            _ => "A^(2) is reducible",
        };
        return Ok(c.stop(failed));
    }

    let h_a = record_index(&mut c, "h(A)", a, &spec_a, zero_a);
    let h_c = record_index(&mut c, "h(A^(2))", &compound, &spec_c, zero_c);
    c.h_a = h_a;
    c.h_compound = h_c;

    if transitive {
        two_positive(&mut c, &spec_a, &spec_c, h_a, h_c, tol);
    } else {
        trident(&mut c, &spec_a, h_a, h_c, tol);
    }
    Ok(c.finish())
}

fn record_index(
    c: &mut Classification,
    label: &str,
    m: &Matrix,
    report: &SpectralReport,
    zero_tol: f64,
) -> Option<usize> {
    match imprimitivity_index(m, report, zero_tol) {
        Ok(h) => {
            c.note(format!("{label} = {h} by peripheral count and cycle gcd"));
            Some(h)
        }
        Err(e) => {
            c.check(&format!("{label} computable"), false, e.to_string());
            None
        }
    }
}

fn leading_pair_nonnegative(c: &mut Classification, spec: &SpectralReport, tol: f64) {
    let scale = tol * spec.rho.max(f64::MIN_POSITIVE);
    let top: Vec<Complex64> = spec.eigenvalues.iter().take(2).copied().collect();
    let ok = top.iter().all(|z| z.im.abs() <= scale && z.re >= -scale);
    c.check(
        "two largest-modulus eigenvalues are real and nonnegative",
        ok,
        format!("{top:?}"),
    );
}

fn is_simple(spec: &SpectralReport, z: Complex64) -> (bool, f64) {
    match spec.nearest(z) {
        Some(k) => {
            let gap = spec.gap(k);
            (gap > 0.0 && gap > SIMPLICITY_FACTOR * spec.residual_bound, gap)
        }
        None => (false, 0.0),
    }
}

fn two_positive(
    c: &mut Classification,
    spec_a: &SpectralReport,
    spec_c: &SpectralReport,
    h_a: Option<usize>,
    h_c: Option<usize>,
    tol: f64,
) {
    c.case = Case::TwoPositiveLeading;
    c.note("linear order: two positive simple leading eigenvalues expected");
    let rho = spec_a.rho;
    let scale = tol * rho;
    let lambda1 = rho;
    let lambda2 = if rho > 0.0 { spec_c.rho / rho } else { 0.0 };
    c.lambda1 = Some(lambda1);
    c.lambda2 = Some(lambda2);

    let l1 = Complex64::new(lambda1, 0.0);
    let dist1 = spec_a.nearest(l1).map_or(f64::INFINITY, |k| (spec_a.eigenvalues[k] - l1).norm());
    c.check("lambda1 = rho(A) is an eigenvalue", rho > 0.0 && dist1 <= scale, format!("distance {dist1:e}"));
    let (simple1, gap1) = is_simple(spec_a, l1);
    c.check("lambda1 simple", simple1, format!("gap {gap1:e}"));

    let l2 = Complex64::new(lambda2, 0.0);
    let dist2 = spec_a.nearest(l2).map_or(f64::INFINITY, |k| (spec_a.eigenvalues[k] - l2).norm());
    c.check(
        "lambda2 = rho(A^(2))/rho(A) is an eigenvalue",
        dist2 <= scale,
        format!("distance {dist2:e}"),
    );
    let second = spec_a.eigenvalues.get(1).map_or(0.0, |z| z.norm());
    c.check(
        "lambda2 is the second modulus of the sorted spectrum",
        (second - lambda2).abs() <= scale,
        format!("sorted |lambda_2| = {second}"),
    );
    let (simple2, gap2) = is_simple(spec_a, l2);
    c.check("lambda2 simple", simple2, format!("gap {gap2:e}"));
    c.check(
        "lambda1 > lambda2 > 0",
        lambda1 > lambda2 && lambda2 > 0.0,
        format!("{lambda1} > {lambda2}"),
    );
    c.check("h(A) = 1", h_a == Some(1), show(h_a));

    let ring = spec_a.on_circle(lambda2, tol);
    match h_c {
        Some(k) if k > 1 => {
            c.note(format!("A^(2) imprimitive with index {k}: ring of modulus lambda2"));
            let dev = match_multisets(&ring, &roots_of_rho(lambda2, k)).map_or(f64::INFINITY, |d| d);
            c.check(
                "ring equals the h(A^(2))-th roots of lambda2^h",
                dev <= scale,
                format!("{} eigenvalues, deviation {dev:e}", ring.len()),
            );
            let all_simple = ring.iter().all(|&z| is_simple(spec_a, z).0);
            c.check("ring eigenvalues simple", all_simple, "");
            c.ring = ring;
        }
        _ => {
            c.check(
                "lambda2 differs in modulus from the rest",
                ring.len() == 1,
                format!("{} eigenvalues of modulus lambda2", ring.len()),
            );
        }
    }
}

fn trident(
    c: &mut Classification,
    spec_a: &SpectralReport,
    h_a: Option<usize>,
    h_c: Option<usize>,
    tol: f64,
) {
    c.case = Case::TridentH3;
    c.note("relation not transitive: three peripheral eigenvalues expected");
    let rho = spec_a.rho;
    c.lambda1 = Some(rho);
    c.check("h(A) = 3", h_a == Some(3), show(h_a));
    c.check("h(A^(2)) = 3", h_c == Some(3), show(h_c));
    let dev = frobenius_deviation(spec_a, 3);
    c.check(
        "peripheral spectrum equals the cube roots of rho^3",
        spec_a.peripheral.len() == 3 && dev.roots <= tol,
        format!("{} peripheral, deviation {:e}", spec_a.peripheral.len(), dev.roots),
    );
    c.check(
        "spectrum invariant under rotation by 2pi/3",
        dev.rotation <= tol.max(1e-6),
        format!("deviation {:e}", dev.rotation),
    );
    let all_simple = spec_a.peripheral.iter().all(|&z| is_simple(spec_a, z).0);
    c.check("peripheral eigenvalues simple", all_simple, "");
}
