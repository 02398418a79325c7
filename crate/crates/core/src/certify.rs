//! The full hypothesis-and-certificate pipeline and its JSON report.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::analytic::{
    apery_limit, constant_catalog, gate_check, match_constant, quadratic_smallest_root, radius_estimate, AperyLimit,
    ConstantMatch, GateResult, QuadraticRoot,
};
use crate::arith::{denom_split_certificate, SplitCertificate};
use crate::error::{Error, Result};
use crate::frobenius::{frobenius_denominator_certificate, frobenius_solutions, FrobeniusCertificate};
use crate::laurent::{constant_term_powers, parse_laurent, LaurentPoly, RationalSequence};
use crate::ode::{fit_operator, operator_to_recurrence, solve_recurrence, DeltaOperator, StructuralReport};
use crate::polytope::{polytope_report, quasi_effectivity_check, MoriData, PolytopeReport, QuasiEffectivity};

pub const SCHEMA: &str = "apery-forge/1";

/// How `b_1` is seeded through the right-hand side `Q₀ λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeedPolicy {
    Unit,
    Explicit(BigRational),
}

impl SeedPolicy {
    pub fn q0(&self) -> BigRational {
        match self {
            SeedPolicy::Unit => BigRational::one(),
            SeedPolicy::Explicit(q) => q.clone(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "unit" {
            return Ok(SeedPolicy::Unit);
        }
        let q: BigRational = s.parse().map_err(|_| Error::Invalid(format!("bad seed {:?}", s)))?;
        if q.is_zero() {
            return Err(Error::Invalid("seed Q0 must be nonzero".into()));
        }
        Ok(SeedPolicy::Explicit(q))
    }
}

impl std::fmt::Display for SeedPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SeedPolicy::Unit => write!(f, "unit"),
            SeedPolicy::Explicit(q) => write!(f, "{}", q),
        }
    }
}

impl Serialize for SeedPolicy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SeedPolicy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        SeedPolicy::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Which hypotheses enter the verdict. All on by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Toggles {
    pub reflexive: bool,
    pub unique_interior: bool,
    pub positivity: bool,
    pub tempered: bool,
    pub operator_integral: bool,
    pub mum: bool,
    pub delta_phi: bool,
    pub linear_g: bool,
    pub involutive: bool,
    pub gate: bool,
    pub facile: bool,
}

impl Default for Toggles {
    fn default() -> Self {
        Toggles {
            reflexive: true,
            unique_interior: true,
            positivity: true,
            tempered: true,
            operator_integral: true,
            mum: true,
            delta_phi: true,
            linear_g: true,
            involutive: true,
            gate: true,
            facile: true,
        }
    }
}

impl Toggles {
    fn get(&self, name: &str) -> bool {
        match name {
            "reflexive" => self.reflexive,
            "unique_interior" => self.unique_interior,
            "positivity" => self.positivity,
            "tempered" => self.tempered,
            "operator_integral" => self.operator_integral,
            "mum" => self.mum,
            "delta_phi" => self.delta_phi,
            "linear_g" => self.linear_g,
            "involutive" => self.involutive,
            "gate" => self.gate,
            "facile" => self.facile,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifyConfig {
    pub schema: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub phi: LaurentPoly,
    pub n: usize,
    /// Sequences run over `0..=terms`.
    pub terms: usize,
    /// Terms computed as constant terms; the rest come from the fitted
    /// recurrence.
    pub ct_terms: usize,
    pub r: u64,
    /// Signed involution constant: `t -> sign(C)/(|C| t)`.
    #[serde(rename = "C")]
    pub c: i64,
    pub q0: SeedPolicy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mori: Option<MoriData>,
    pub precision: u32,
    pub max_order: usize,
    pub max_degree: usize,
    pub max_denominator: u64,
    pub toggles: Toggles,
}

#[derive(Deserialize)]
struct ConfigJson {
    #[serde(default)]
    schema: Option<String>,
    #[serde(default)]
    name: Option<String>,
    phi: serde_json::Value,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default)]
    terms: Option<usize>,
    #[serde(default)]
    ct_terms: Option<usize>,
    #[serde(default)]
    r: Option<u64>,
    #[serde(default, rename = "C")]
    c: Option<i64>,
    #[serde(default)]
    q0: Option<SeedPolicy>,
    #[serde(default)]
    mori: Option<MoriData>,
    #[serde(default)]
    precision: Option<u32>,
    #[serde(default)]
    max_order: Option<usize>,
    #[serde(default)]
    max_degree: Option<usize>,
    #[serde(default)]
    max_denominator: Option<u64>,
    #[serde(default)]
    toggles: Option<Toggles>,
}

impl CertifyConfig {
    pub fn new(phi: LaurentPoly) -> Self {
        let n = phi.n();
        CertifyConfig {
            schema: SCHEMA.into(),
            name: None,
            phi,
            n,
            terms: 200,
            ct_terms: 50,
            r: 1,
            c: 1,
            q0: SeedPolicy::Unit,
            mori: None,
            precision: 256,
            max_order: 4,
            max_degree: 6,
            max_denominator: 1000,
            toggles: Toggles::default(),
        }
    }

    /// `phi` may be an expression string (with `n` given) or the polynomial
    /// JSON object.
    pub fn from_json(text: &str) -> Result<Self> {
        let j: ConfigJson = serde_json::from_str(text)?;
        if let Some(s) = &j.schema {
            if s != SCHEMA {
                return Err(Error::Invalid(format!("unsupported schema {:?}", s)));
            }
        }
        let phi = match &j.phi {
            serde_json::Value::String(s) => {
                let n = j.n.ok_or_else(|| Error::Invalid("an expression for phi needs n".into()))?;
                parse_laurent(s, n)?
            }
            v => serde_json::from_value::<LaurentPoly>(v.clone())?,
        };
        let mut c = CertifyConfig::new(phi);
        if let Some(n) = j.n {
            c.n = n;
        }
        c.name = j.name;
        c.terms = j.terms.unwrap_or(c.terms);
        c.ct_terms = j.ct_terms.unwrap_or(c.ct_terms);
        c.r = j.r.unwrap_or(c.r);
        c.c = j.c.unwrap_or(c.c);
        c.q0 = j.q0.unwrap_or(c.q0);
        c.mori = j.mori;
        c.precision = j.precision.unwrap_or(c.precision);
        c.max_order = j.max_order.unwrap_or(c.max_order);
        c.max_degree = j.max_degree.unwrap_or(c.max_degree);
        c.max_denominator = j.max_denominator.unwrap_or(c.max_denominator);
        c.toggles = j.toggles.unwrap_or_default();
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.phi.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: self.phi.n() });
        }
        if self.terms < 40 {
            return Err(Error::Invalid(format!("terms must be at least 40, got {}", self.terms)));
        }
        if self.ct_terms == 0 {
            return Err(Error::Invalid("ct_terms must be positive".into()));
        }
        if self.r < 1 {
            return Err(Error::Invalid("cover degree r must be at least 1".into()));
        }
        if self.c == 0 {
            return Err(Error::Invalid("C must be nonzero".into()));
        }
        if self.precision < 64 {
            return Err(Error::Invalid(format!("precision must be at least 64 bits, got {}", self.precision)));
        }
        Ok(())
    }
}

/// How a flag was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Grade {
    Exact,
    /// A sufficient-condition screen, not a proof of the property.
    Screened,
    /// Decided by an interval enclosure.
    Interval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flag {
    pub name: String,
    /// `None` when the stage did not run or could not decide.
    pub value: Option<bool>,
    pub grade: Grade,
    pub toggled: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageError {
    pub stage: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reasons")]
pub enum Verdict {
    #[serde(rename = "CERTIFIED-AT-DESK-SCALE")]
    Certified,
    #[serde(rename = "HYPOTHESIS-FAILED")]
    HypothesisFailed(Vec<String>),
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive(Vec<String>),
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Certified => 0,
            Verdict::HypothesisFailed(_) => 2,
            Verdict::Inconclusive(_) => 3,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Certified => write!(f, "CERTIFIED-AT-DESK-SCALE"),
            Verdict::HypothesisFailed(v) => write!(f, "HYPOTHESIS-FAILED({})", v.join(", ")),
            Verdict::Inconclusive(v) => write!(f, "INCONCLUSIVE({})", v.join(", ")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Involution {
    #[serde(rename = "C")]
    pub c: i64,
    pub sign: i8,
    pub symmetric: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Estimate<T> {
    pub certified: bool,
    pub value: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub schema: String,
    pub config: CertifyConfig,
    pub verdict: Verdict,
    pub flags: Vec<Flag>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polytope: Option<PolytopeReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quasi_effectivity: Option<QuasiEffectivity>,
    /// Number of leading `a_m` computed as constant terms.
    pub a_constant_terms: usize,
    #[serde(serialize_with = "crate::serde_util::ser_rationals")]
    pub a_prefix: Vec<BigRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<DeltaOperator>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structural: Option<StructuralReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub involution: Option<Involution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_phi: Option<QuadraticRoot>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_estimate: Option<Estimate<crate::analytic::BigReal>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<GateResult>,
    #[serde(serialize_with = "crate::serde_util::ser_rational")]
    pub q0: BigRational,
    #[serde(serialize_with = "crate::serde_util::ser_rationals")]
    pub b_prefix: Vec<BigRational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_b: Option<SplitCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frobenius_eps: Option<FrobeniusCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v0: Option<AperyLimit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<ConstantMatch>,
    pub errors: Vec<StageError>,
    /// Full sequences, kept out of the JSON.
    #[serde(skip)]
    pub a: Option<RationalSequence>,
    #[serde(skip)]
    pub b: Option<RationalSequence>,
}

impl CertificateReport {
    pub fn to_json(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(self).expect("report serializes")
        } else {
            serde_json::to_string(self).expect("report serializes")
        }
    }

    pub fn flag(&self, name: &str) -> Option<bool> {
        self.flags.iter().find(|f| f.name == name).and_then(|f| f.value)
    }
}

const PREFIX: usize = 10;

/// `true` iff every coefficient of `φ(-x)` is positive.
pub fn positivity_check(phi: &LaurentPoly) -> bool {
    crate::polytope::positivity_check(phi)
}

/// `a_0..=a_M`: constant terms up to `ct`, then the homogeneous recurrence of
/// `d`, checked against every computed constant term.
fn extend_sequence(ct: &RationalSequence, d: &DeltaOperator, m: usize) -> Result<RationalSequence> {
    if ct.len() > m {
        return Ok(RationalSequence::new(0, ct.values[..=m].to_vec()));
    }
    let rec = operator_to_recurrence(d, &[]);
    let a = solve_recurrence(&rec, &ct.values[..1], m)?;
    if a.values[..ct.len()] != ct.values[..] {
        return Err(Error::Invalid("fitted recurrence disagrees with the constant terms".into()));
    }
    Ok(a)
}

struct Run {
    flags: Vec<Flag>,
    errors: Vec<StageError>,
    toggles: Toggles,
}

impl Run {
    fn flag(&mut self, name: &str, value: Option<bool>, grade: Grade) {
        self.flags.push(Flag { name: name.into(), value, grade, toggled: self.toggles.get(name) });
    }

    fn error(&mut self, stage: &str, e: &Error) {
        self.errors.push(StageError { stage: stage.into(), message: e.to_string() });
    }
}

pub fn run_certificate(config: &CertifyConfig) -> CertificateReport {
    let mut run = Run { flags: Vec::new(), errors: Vec::new(), toggles: config.toggles };
    let prec = config.precision;
    let m = config.terms;
    let n = config.n;
    let q0 = config.q0.q0();
    let mut report = CertificateReport {
        schema: SCHEMA.into(),
        config: config.clone(),
        verdict: Verdict::Inconclusive(vec![]),
        flags: vec![],
        polytope: None,
        quasi_effectivity: None,
        a_constant_terms: 0,
        a_prefix: vec![],
        operator: None,
        structural: None,
        involution: None,
        r_phi: None,
        radius_estimate: None,
        gate: None,
        q0: q0.clone(),
        b_prefix: vec![],
        eps_b: None,
        frobenius_eps: None,
        v0: None,
        constant: None,
        errors: vec![],
        a: None,
        b: None,
    };
    if let Err(e) = config.validate() {
        run.error("config", &e);
        return finish(report, run);
    }

    let poly = polytope_report(&config.phi);
    run.flag("reflexive", Some(poly.reflexive), Grade::Exact);
    run.flag("unique_interior", Some(poly.unique_interior_point), Grade::Exact);
    run.flag("positivity", Some(poly.positive_at_minus_x), Grade::Exact);
    // a screen can confirm temperedness but never refute it
    let screened = poly.faces.iter().all(|f| matches!(f.classification.as_str(), "cyclotomic" | "CyclotomicProduct" | "SteinbergCatalog"));
    let tempered = if screened { Some(true) } else { None };
    run.flag("tempered", tempered, Grade::Screened);
    report.polytope = Some(poly);
    if let Some(mori) = &config.mori {
        match quasi_effectivity_check(mori, 6, None) {
            Ok(q) => {
                run.flag("facile", Some(!matches!(q.verdict, crate::polytope::QuasiVerdict::Fails(_))), Grade::Screened);
                report.quasi_effectivity = Some(q);
            }
            Err(e) => {
                run.flag("facile", None, Grade::Screened);
                run.error("quasi_effectivity", &e);
            }
        }
    }

    let ct = constant_term_powers(&config.phi, config.ct_terms.min(m));
    report.a_constant_terms = ct.len();
    let d = match fit_operator(&ct, config.max_order, config.max_degree) {
        Ok(d) => d,
        Err(e) => {
            run.error("fit_operator", &e);
            report.a_prefix = ct.values.iter().take(PREFIX).cloned().collect();
            return finish(report, run);
        }
    };
    report.operator = Some(d.clone());

    let st = d.structural_checks(n);
    run.flag("operator_integral", Some(st.integral), Grade::Exact);
    run.flag("mum", Some(st.mum), Grade::Exact);
    run.flag("delta_phi", Some(st.delta_phi_ok()), Grade::Exact);
    run.flag("linear_g", Some(st.conifold_shape), Grade::Exact);
    let delta_ok = st.delta_phi_ok();
    report.structural = Some(st);

    let a = match extend_sequence(&ct, &d, m) {
        Ok(a) => a,
        Err(e) => {
            run.error("extend_sequence", &e);
            ct.clone()
        }
    };
    report.a_prefix = a.values.iter().take(PREFIX).cloned().collect();
    report.a = Some(a.clone());

    let sign: i8 = if config.c < 0 { -1 } else { 1 };
    match d.involutive_symmetry_check(config.c.abs(), sign) {
        Ok(s) => {
            run.flag("involutive", Some(s), Grade::Exact);
            report.involution = Some(Involution { c: config.c, sign, symmetric: s });
        }
        Err(e) => {
            run.flag("involutive", None, Grade::Exact);
            run.error("involutive_symmetry_check", &e);
        }
    }

    if !delta_ok {
        // the conifold radius needs a quadratic P
        return finish(report, run);
    }

    if a.len() >= 30 {
        if let Ok(r) = radius_estimate(&a) {
            report.radius_estimate = Some(Estimate { certified: false, value: r });
        }
    }
    match quadratic_smallest_root(&d.leading(), prec) {
        Ok(root) => {
            let g = gate_check(&root.value, n as u32, config.c);
            let value = if g.pass {
                Some(true)
            } else if g.product.lo() < BigRational::one() {
                None
            } else {
                Some(false)
            };
            run.flag("gate", value, Grade::Interval);
            report.gate = Some(g);
            report.r_phi = Some(root);
        }
        Err(e) => {
            run.flag("gate", None, Grade::Interval);
            run.error("quadratic_smallest_root", &e);
        }
    }

    let rec = operator_to_recurrence(&d, &[BigRational::zero(), q0]);
    let b = match solve_recurrence(&rec, &[BigRational::zero()], m) {
        Ok(b) => b,
        Err(e) => {
            run.error("solve_recurrence", &e);
            return finish(report, run);
        }
    };
    report.b_prefix = b.values.iter().take(PREFIX).cloned().collect();
    report.b = Some(b.clone());

    match denom_split_certificate(&b, n as u32, config.r, m as u64) {
        Ok(c) => report.eps_b = Some(c),
        Err(e) => run.error("denom_split_certificate", &e),
    }
    match frobenius_solutions(&d, m + 1).and_then(|basis| {
        if basis.f[0] != a.values {
            return Err(Error::Invalid("holomorphic Frobenius solution differs from the period sequence".into()));
        }
        frobenius_denominator_certificate(&basis, m)
    }) {
        Ok(c) => report.frobenius_eps = Some(c),
        Err(e) => run.error("frobenius", &e),
    }

    match apery_limit(&a, &b, prec) {
        Ok(v) => {
            report.constant = match_constant(&v.value, &constant_catalog(prec), config.max_denominator);
            report.v0 = Some(v);
        }
        Err(e) => run.error("apery_limit", &e),
    }
    finish(report, run)
}

fn finish(mut report: CertificateReport, run: Run) -> CertificateReport {
    let failed: Vec<String> = run.flags.iter().filter(|f| f.toggled && f.value == Some(false)).map(|f| f.name.clone()).collect();
    report.verdict = if !failed.is_empty() {
        Verdict::HypothesisFailed(failed)
    } else {
        let mut open: Vec<String> = run.flags.iter().filter(|f| f.toggled && f.value.is_none()).map(|f| f.name.clone()).collect();
        open.extend(run.errors.iter().map(|e| e.stage.clone()));
        let reached = report.operator.is_some() && report.b.is_some();
        if reached {
            if report.eps_b.as_ref().and_then(SplitCertificate::eps).is_none() {
                open.push("eps_b".into());
            }
            if report.frobenius_eps.as_ref().and_then(FrobeniusCertificate::eps).is_none() {
                open.push("frobenius_eps".into());
            }
            if report.constant.is_none() {
                open.push("constant_match".into());
            }
            if report.gate.is_none() {
                open.push("gate".into());
            }
        }
        open.dedup();
        if open.is_empty() && reached {
            Verdict::Certified
        } else {
            if open.is_empty() {
                open.push("pipeline".into());
            }
            Verdict::Inconclusive(open)
        }
    };
    report.flags = run.flags;
    report.errors = run.errors;
    report
}
