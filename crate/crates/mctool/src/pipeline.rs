//! Declarative pipelines of tuple operations, built-in scenarios,
//! persistence and reporting.
//!
//! A pipeline is a JSON document with named objects (tuples or rank-one
//! scalar tuples), a sequence of operation steps, and a list of checks that
//! are evaluated against the computed objects. Check failures are report
//! entries, never panics; operation failures abort with the step name.

use crate::convolution::{convolve_rank_one, entry_jordan, mc, ConvError};
use crate::cyclo::{euler_phi, parse_scalar, CycNum, CycloError};
use crate::linalg::{
    algebra_closure_dim, invariant_bilinear_forms, simultaneous_conjugator, JordanData,
    LinalgError, Mat,
};
use crate::recognition::{
    entry_class, g2_certificate, irreducibility_criterion, jordan_report, EntryClass,
};
use crate::tuples::{MonodromyTuple, RankOneTuple, TupleError, TupleFile};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("undefined name '{0}'")]
    UndefinedName(String),
    #[error("duplicate name '{0}'")]
    DuplicateName(String),
    #[error("object '{0}' is not of the kind required here")]
    WrongKind(String),
    #[error("bad scenario parameters: {0}")]
    BadParameters(String),
    #[error("step '{step}' failed: {message}")]
    StepFailed { step: String, message: String },
    #[error("stored infinity entry does not match the product relation")]
    ProductRelationViolated,
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Tuple(#[from] TupleError),
    #[error(transparent)]
    Conv(#[from] ConvError),
}

pub type Result<T> = std::result::Result<T, PipelineError>;

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ObjectSpec {
    /// Finite scalars of a rank-one tuple; the infinity scalar is derived.
    RankOne { scalars: Vec<String> },
    /// Finite matrix entries; the infinity entry is derived.
    Tuple { entries: Vec<Vec<Vec<String>>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum StepSpec {
    Mc {
        input: String,
        lambda: String,
        output: String,
    },
    ConvolveRankOne {
        input: String,
        scalars: Vec<String>,
        output: String,
    },
    Tensor {
        left: String,
        right: String,
        output: String,
    },
    Twist {
        input: String,
        scalars: Vec<String>,
        output: String,
    },
    Dual {
        input: String,
        output: String,
    },
}

impl StepSpec {
    pub fn output(&self) -> &str {
        match self {
            StepSpec::Mc { output, .. }
            | StepSpec::ConvolveRankOne { output, .. }
            | StepSpec::Tensor { output, .. }
            | StepSpec::Twist { output, .. }
            | StepSpec::Dual { output, .. } => output,
        }
    }

    pub fn op_name(&self) -> &'static str {
        match self {
            StepSpec::Mc { .. } => "mc",
            StepSpec::ConvolveRankOne { .. } => "convolve_rank_one",
            StepSpec::Tensor { .. } => "tensor",
            StepSpec::Twist { .. } => "twist",
            StepSpec::Dual { .. } => "dual",
        }
    }

    fn inputs(&self) -> Vec<&str> {
        match self {
            StepSpec::Mc { input, .. }
            | StepSpec::ConvolveRankOne { input, .. }
            | StepSpec::Twist { input, .. }
            | StepSpec::Dual { input, .. } => vec![input],
            StepSpec::Tensor { left, right, .. } => vec![left, right],
        }
    }
}

/// Jordan data in the serializable form: a list of [eigenvalue, length]
/// pairs per entry.
pub type JordanSpec = Vec<(String, usize)>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckSpec {
    Rank {
        name: String,
        object: String,
        equals: usize,
    },
    /// Jordan report of every entry (infinity last).
    Jordan {
        name: String,
        object: String,
        expect: Vec<JordanSpec>,
    },
    /// Jordan data of one entry (0-based; the infinity entry is index r).
    JordanEntry {
        name: String,
        object: String,
        entry: usize,
        expect: JordanSpec,
    },
    /// Full G2-style certificate comparison.
    Certificate {
        name: String,
        object: String,
        orthogonal: bool,
        lambda3_fixed_dim: usize,
        abs_irreducible: bool,
    },
    /// An invariant nondegenerate symmetric form exists.
    Orthogonal { name: String, object: String },
    RigidityPositive { name: String, object: String },
    /// Simultaneous conjugacy with a fixture tuple given by its finite entries.
    ConjugateTo {
        name: String,
        object: String,
        entries: Vec<Vec<Vec<String>>>,
    },
    /// A specific entry is a homology of the given order.
    Homology {
        name: String,
        object: String,
        entry: usize,
        order: u64,
    },
    /// Determinants of all finite entries are roots of unity of order
    /// dividing the bound.
    DeterminantOrdersDivide {
        name: String,
        object: String,
        divides: u64,
    },
    /// The numerical irreducibility criterion for convolving the object with
    /// the given scalars holds.
    IrreducibleCriterion {
        name: String,
        object: String,
        scalars: Vec<String>,
    },
    /// Burnside: the entries generate the full matrix algebra.
    ClosureFull { name: String, object: String },
    /// Entry i + offset has the Jordan data of entry i with the Galois
    /// automorphism zeta -> zeta^automorphism applied to eigenvalues.
    GaloisPairs {
        name: String,
        object: String,
        automorphism: u64,
        offset: usize,
    },
}

impl CheckSpec {
    pub fn name(&self) -> &str {
        match self {
            CheckSpec::Rank { name, .. }
            | CheckSpec::Jordan { name, .. }
            | CheckSpec::JordanEntry { name, .. }
            | CheckSpec::Certificate { name, .. }
            | CheckSpec::Orthogonal { name, .. }
            | CheckSpec::RigidityPositive { name, .. }
            | CheckSpec::ConjugateTo { name, .. }
            | CheckSpec::Homology { name, .. }
            | CheckSpec::DeterminantOrdersDivide { name, .. }
            | CheckSpec::IrreducibleCriterion { name, .. }
            | CheckSpec::ClosureFull { name, .. }
            | CheckSpec::GaloisPairs { name, .. } => name,
        }
    }

    fn object(&self) -> &str {
        match self {
            CheckSpec::Rank { object, .. }
            | CheckSpec::Jordan { object, .. }
            | CheckSpec::JordanEntry { object, .. }
            | CheckSpec::Certificate { object, .. }
            | CheckSpec::Orthogonal { object, .. }
            | CheckSpec::RigidityPositive { object, .. }
            | CheckSpec::ConjugateTo { object, .. }
            | CheckSpec::Homology { object, .. }
            | CheckSpec::DeterminantOrdersDivide { object, .. }
            | CheckSpec::IrreducibleCriterion { object, .. }
            | CheckSpec::ClosureFull { object, .. }
            | CheckSpec::GaloisPairs { object, .. } => object,
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineSpec {
    pub cyclotomic_order: u64,
    /// Genericity of puncture positions is an assumption, not a computation;
    /// it is echoed in the report.
    #[serde(default = "default_true")]
    pub generic: bool,
    #[serde(default)]
    pub objects: BTreeMap<String, ObjectSpec>,
    #[serde(default)]
    pub steps: Vec<StepSpec>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
}

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepReport {
    pub output: String,
    pub op: String,
    pub rank: usize,
    pub punctures: usize,
    /// Jordan report per entry, infinity last; absent when eigenvalues fall
    /// outside the default candidates.
    pub jordan: Option<Vec<JordanSpec>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub field_order: u64,
    pub generic_assumed: bool,
    pub wall_time_ms: u64,
    pub steps: Vec<StepReport>,
    pub checks: Vec<CheckReport>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn jordan_to_spec(jd: &JordanData) -> JordanSpec {
    jd.blocks()
        .iter()
        .map(|(ev, l)| (ev.to_string(), *l))
        .collect()
}

fn jordan_from_spec(spec: &JordanSpec, order: u64) -> Result<JordanData> {
    let blocks = spec
        .iter()
        .map(|(s, l)| Ok((parse_scalar(s, order)?, *l)))
        .collect::<Result<Vec<_>>>()?;
    Ok(JordanData::new(blocks))
}

// ---------------------------------------------------------------------------
// Parsing and validation
// ---------------------------------------------------------------------------

pub fn parse_pipeline(text: &str) -> Result<PipelineSpec> {
    let spec: PipelineSpec =
        serde_json::from_str(text).map_err(|e| PipelineError::SchemaError(e.to_string()))?;
    validate_pipeline(&spec)?;
    Ok(spec)
}

pub fn validate_pipeline(spec: &PipelineSpec) -> Result<()> {
    let n = spec.cyclotomic_order;
    let mut defined: Vec<&str> = Vec::new();
    for (name, obj) in &spec.objects {
        defined.push(name);
        match obj {
            ObjectSpec::RankOne { scalars } => {
                for s in scalars {
                    parse_scalar(s, n)?;
                }
            }
            ObjectSpec::Tuple { entries } => {
                for rows in entries {
                    for row in rows {
                        for s in row {
                            parse_scalar(s, n)?;
                        }
                    }
                }
            }
        }
    }
    for step in &spec.steps {
        for input in step.inputs() {
            if !defined.contains(&input) {
                return Err(PipelineError::UndefinedName(input.to_string()));
            }
        }
        let out = step.output();
        if defined.contains(&out) {
            return Err(PipelineError::DuplicateName(out.to_string()));
        }
        defined.push(out);
        match step {
            StepSpec::Mc { lambda, .. } => {
                parse_scalar(lambda, n)?;
            }
            StepSpec::ConvolveRankOne { scalars, .. } | StepSpec::Twist { scalars, .. } => {
                for s in scalars {
                    parse_scalar(s, n)?;
                }
            }
            _ => {}
        }
    }
    for check in &spec.checks {
        if !defined.contains(&check.object()) {
            return Err(PipelineError::UndefinedName(check.object().to_string()));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

#[derive(Clone)]
enum Value {
    Tuple(MonodromyTuple),
    RankOne(RankOneTuple),
}

impl Value {
    fn as_tuple(&self) -> Result<MonodromyTuple> {
        match self {
            Value::Tuple(t) => Ok(t.clone()),
            Value::RankOne(r) => Ok(r.as_tuple()?),
        }
    }
}

struct Env {
    order: u64,
    values: BTreeMap<String, Value>,
}

impl Env {
    fn get(&self, name: &str) -> Result<&Value> {
        self.values
            .get(name)
            .ok_or_else(|| PipelineError::UndefinedName(name.to_string()))
    }

    fn tuple(&self, name: &str) -> Result<MonodromyTuple> {
        self.get(name)?.as_tuple()
    }

    fn rank_one_from(&self, scalars: &[String]) -> Result<RankOneTuple> {
        let parsed = scalars
            .iter()
            .map(|s| parse_scalar(s, self.order))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(RankOneTuple::new(parsed)?)
    }
}

fn step_err<E: std::fmt::Display>(step: &str) -> impl Fn(E) -> PipelineError + '_ {
    move |e| PipelineError::StepFailed {
        step: step.to_string(),
        message: e.to_string(),
    }
}

pub fn run(spec: &PipelineSpec) -> Result<Report> {
    validate_pipeline(spec)?;
    let start = std::time::Instant::now();
    let order = spec.cyclotomic_order;
    let mut env = Env {
        order,
        values: BTreeMap::new(),
    };
    for (name, obj) in &spec.objects {
        let v = match obj {
            ObjectSpec::RankOne { scalars } => Value::RankOne(env.rank_one_from(scalars)?),
            ObjectSpec::Tuple { entries } => {
                let mats = entries
                    .iter()
                    .map(|rows| Mat::parse(rows, order))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                Value::Tuple(MonodromyTuple::new(mats)?)
            }
        };
        env.values.insert(name.clone(), v);
    }

    let mut steps = Vec::new();
    for step in &spec.steps {
        let out_name = step.output().to_string();
        let result: Value = match step {
            StepSpec::Mc { input, lambda, .. } => {
                let t = env.tuple(input)?;
                let lam = parse_scalar(lambda, order)?;
                Value::Tuple(mc(&t, &lam).map_err(step_err(&out_name))?)
            }
            StepSpec::ConvolveRankOne { input, scalars, .. } => {
                let t = env.tuple(input)?;
                let r = env.rank_one_from(scalars)?;
                Value::Tuple(convolve_rank_one(&t, &r).map_err(step_err(&out_name))?)
            }
            StepSpec::Tensor { left, right, .. } => {
                let a = env.tuple(left)?;
                let b = env.tuple(right)?;
                Value::Tuple(a.tensor_same_base(&b).map_err(step_err(&out_name))?)
            }
            StepSpec::Twist { input, scalars, .. } => {
                let t = env.tuple(input)?;
                let r = env.rank_one_from(scalars)?;
                Value::Tuple(t.twist(&r).map_err(step_err(&out_name))?)
            }
            StepSpec::Dual { input, .. } => {
                let t = env.tuple(input)?;
                Value::Tuple(t.dual().map_err(step_err(&out_name))?)
            }
        };
        let t = result.as_tuple()?;
        steps.push(StepReport {
            output: out_name.clone(),
            op: step.op_name().to_string(),
            rank: t.rank(),
            punctures: t.puncture_count(),
            jordan: jordan_report(&t)
                .ok()
                .map(|r| r.iter().map(jordan_to_spec).collect()),
        });
        env.values.insert(out_name, result);
    }

    let mut checks = Vec::new();
    for check in &spec.checks {
        let (pass, detail) = match evaluate_check(&env, check) {
            Ok(pd) => pd,
            Err(e) => (false, format!("check errored: {}", e)),
        };
        checks.push(CheckReport {
            name: check.name().to_string(),
            pass,
            detail,
        });
    }

    Ok(Report {
        field_order: order,
        generic_assumed: spec.generic,
        wall_time_ms: start.elapsed().as_millis() as u64,
        steps,
        checks,
    })
}

fn evaluate_check(env: &Env, check: &CheckSpec) -> Result<(bool, String)> {
    let order = env.order;
    Ok(match check {
        CheckSpec::Rank { object, equals, .. } => {
            let r = env.tuple(object)?.rank();
            (r == *equals, format!("rank {} (expected {})", r, equals))
        }
        CheckSpec::Jordan { object, expect, .. } => {
            let t = env.tuple(object)?;
            let got = jordan_report(&t)?;
            let want = expect
                .iter()
                .map(|s| jordan_from_spec(s, order))
                .collect::<Result<Vec<_>>>()?;
            let pass = got == want;
            let detail = got
                .iter()
                .map(|j| j.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            (pass, detail)
        }
        CheckSpec::JordanEntry {
            object,
            entry,
            expect,
            ..
        } => {
            let t = env.tuple(object)?;
            let all = t.all_entries();
            let got = entry_jordan(&all[*entry])?;
            let want = jordan_from_spec(expect, order)?;
            (got == want, got.to_string())
        }
        CheckSpec::Certificate {
            object,
            orthogonal,
            lambda3_fixed_dim,
            abs_irreducible,
            ..
        } => {
            let cert = g2_certificate(&env.tuple(object)?)?;
            let pass = cert.orthogonal == *orthogonal
                && cert.lambda3_fixed_dim == *lambda3_fixed_dim
                && cert.abs_irreducible == *abs_irreducible;
            (pass, format!("{:?}", cert))
        }
        CheckSpec::Orthogonal { object, .. } => {
            let t = env.tuple(object)?;
            let forms = invariant_bilinear_forms(&t.all_entries())?;
            let pass = forms.symmetric_nondegenerate.is_some();
            (
                pass,
                format!(
                    "invariant form space dim {}, symmetric nondegenerate: {}",
                    forms.space.dim(),
                    pass
                ),
            )
        }
        CheckSpec::RigidityPositive { object, .. } => {
            let idx = env.tuple(object)?.rigidity_index()?;
            (idx > 0, format!("rigidity index {}", idx))
        }
        CheckSpec::ConjugateTo {
            object, entries, ..
        } => {
            let t = env.tuple(object)?;
            let mats = entries
                .iter()
                .map(|rows| Mat::parse(rows, order))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let fixture = MonodromyTuple::new(mats)?;
            let x = simultaneous_conjugator(&t.all_entries(), &fixture.all_entries())?;
            (
                x.is_some(),
                if x.is_some() {
                    "invertible simultaneous conjugator found".to_string()
                } else {
                    "no simultaneous conjugator".to_string()
                },
            )
        }
        CheckSpec::Homology {
            object,
            entry,
            order: hom_order,
            ..
        } => {
            let t = env.tuple(object)?;
            let all = t.all_entries();
            let class = entry_class(&all[*entry])?;
            let pass = class == EntryClass::Homology(*hom_order);
            (pass, format!("{:?}", class))
        }
        CheckSpec::DeterminantOrdersDivide {
            object, divides, ..
        } => {
            let t = env.tuple(object)?;
            let mut pass = true;
            let mut orders = Vec::new();
            for e in t.entries() {
                let d = e.det()?;
                match d.mult_order() {
                    Some(o) if divides % o == 0 => orders.push(o),
                    other => {
                        pass = false;
                        orders.push(other.unwrap_or(0));
                    }
                }
            }
            (pass, format!("determinant orders {:?}", orders))
        }
        CheckSpec::IrreducibleCriterion {
            object, scalars, ..
        } => {
            let t = env.tuple(object)?;
            let r = env.rank_one_from(scalars)?;
            let pass = irreducibility_criterion(&t, &r)?;
            (pass, format!("criterion positive: {}", pass))
        }
        CheckSpec::ClosureFull { object, .. } => {
            let t = env.tuple(object)?;
            let n = t.rank();
            let dim = algebra_closure_dim(t.entries())?;
            (dim == n * n, format!("algebra closure dim {}", dim))
        }
        CheckSpec::GaloisPairs {
            object,
            automorphism,
            offset,
            ..
        } => {
            let t = env.tuple(object)?;
            let entries = t.entries();
            if entries.len() < 2 * offset {
                return Ok((false, "not enough entries for the pairing".to_string()));
            }
            let mut pass = true;
            for i in 0..*offset {
                let a = entry_jordan(&entries[i])?;
                let b = entry_jordan(&entries[i + offset])?;
                let conj = JordanData::new(
                    a.blocks()
                        .iter()
                        .map(|(ev, l)| Ok((ev.embed(order)?.galois(*automorphism)?, *l)))
                        .collect::<Result<Vec<_>>>()?,
                );
                if conj != b {
                    pass = false;
                }
            }
            (
                pass,
                format!("Galois pairing under z -> z^{}", automorphism),
            )
        }
    })
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

pub fn save_tuple(t: &MonodromyTuple, path: &std::path::Path) -> Result<()> {
    let file = TupleFile::from_tuple(t);
    let text = serde_json::to_string_pretty(&file)
        .map_err(|e| PipelineError::SchemaError(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load_tuple(path: &std::path::Path) -> Result<MonodromyTuple> {
    let text = std::fs::read_to_string(path)?;
    let file: TupleFile =
        serde_json::from_str(&text).map_err(|e| PipelineError::SchemaError(e.to_string()))?;
    file.into_tuple()
        .map_err(|_| PipelineError::ProductRelationViolated)
}

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

fn named_rank_one(scalars: &[&str]) -> ObjectSpec {
    ObjectSpec::RankOne {
        scalars: scalars.iter().map(|s| s.to_string()).collect(),
    }
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Reference matrices of the rank-7 output tuple over Q(zeta_3); the fourth
/// entry is derived from the product relation.
pub fn table1_entries() -> Vec<Vec<Vec<String>>> {
    let h1 = vec![
        strs(&["1", "-3", "z - 1", "0", "z - 4", "0", "2*z + 4"]),
        strs(&["0", "3*z + 1", "2*z + 1", "0", "2*z + 1", "-2*z - 1", "0"]),
        strs(&["0", "-3*z", "-2*z", "0", "-2*z - 1", "2*z + 1", "0"]),
        strs(&["0", "3*z + 3", "z + 2", "1", "z + 2", "-z - 2", "0"]),
        strs(&["0", "3*z + 6", "3", "0", "4", "-3", "0"]),
        strs(&["0", "3*z + 3", "z + 2", "0", "z + 2", "-z - 1", "0"]),
        strs(&["0", "6", "-2*z + 2", "0", "-2*z + 2", "2*z - 2", "1"]),
    ];
    let h2 = vec![
        strs(&["1", "0", "0", "0", "0", "0", "0"]),
        strs(&["z - 1", "1", "0", "2*z + 1", "0", "0", "0"]),
        strs(&["3", "0", "1", "-2*z - 1", "-3", "0", "2*z + 4"]),
        strs(&["0", "0", "0", "1", "0", "0", "0"]),
        strs(&["0", "0", "0", "0", "1", "0", "0"]),
        strs(&["0", "0", "0", "0", "0", "1", "0"]),
        strs(&["0", "0", "0", "0", "0", "0", "1"]),
    ];
    let h3 = vec![
        strs(&["z", "0", "0", "0", "0", "0", "0"]),
        strs(&["0", "z", "0", "0", "0", "0", "0"]),
        strs(&["0", "0", "z", "0", "0", "0", "0"]),
        strs(&["z + 2", "0", "0", "-z - 1", "0", "0", "0"]),
        strs(&["0", "z + 2", "0", "0", "-z - 1", "0", "0"]),
        strs(&["0", "3*z + 3", "z + 2", "0", "0", "-z - 1", "0"]),
        strs(&["0", "0", "0", "0", "z - 1", "0", "1"]),
    ];
    vec![h1, h2, h3]
}

pub fn table1_tuple() -> Result<MonodromyTuple> {
    let mats = table1_entries()
        .iter()
        .map(|rows| Mat::parse(rows, 3))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(MonodromyTuple::new(mats)?)
}

/// Jordan report of the rank-7 output: unipotent (2,2,1,1,1) twice, the
/// semisimple diag(1, z x3, z^-1 x3), and unipotent (3,3,1) at infinity.
fn rank7_jordan_expect(zeta3: &str, zeta3_inv: &str) -> Vec<JordanSpec> {
    let u22111: JordanSpec = vec![
        ("1".into(), 2),
        ("1".into(), 2),
        ("1".into(), 1),
        ("1".into(), 1),
        ("1".into(), 1),
    ];
    let semisimple: JordanSpec = vec![
        ("1".into(), 1),
        (zeta3.into(), 1),
        (zeta3.into(), 1),
        (zeta3.into(), 1),
        (zeta3_inv.into(), 1),
        (zeta3_inv.into(), 1),
        (zeta3_inv.into(), 1),
    ];
    let u331: JordanSpec = vec![("1".into(), 3), ("1".into(), 3), ("1".into(), 1)];
    vec![u22111.clone(), u22111, semisimple, u331]
}

/// The chain of three middle convolutions and tensor twists producing the
/// rank-7 tuple with monodromy inside G2, together with its certificates and
/// the comparison against the reference matrices.
pub fn scenario_g2() -> PipelineSpec {
    let mut objects = BTreeMap::new();
    objects.insert("L1".to_string(), named_rank_one(&["z", "1", "z"]));
    objects.insert("L2".to_string(), named_rank_one(&["1", "z", "z"]));
    objects.insert("L3".to_string(), named_rank_one(&["1", "1", "z"]));
    let steps = vec![
        StepSpec::Mc {
            input: "L1".into(),
            lambda: "z^2".into(),
            output: "M1".into(),
        },
        StepSpec::Mc {
            input: "L2".into(),
            lambda: "z^2".into(),
            output: "M2".into(),
        },
        StepSpec::Tensor {
            left: "M1".into(),
            right: "M2".into(),
            output: "T4".into(),
        },
        StepSpec::Mc {
            input: "T4".into(),
            lambda: "z^2".into(),
            output: "M3".into(),
        },
        StepSpec::Twist {
            input: "M3".into(),
            scalars: strs(&["1", "1", "z"]),
            output: "T5".into(),
        },
        StepSpec::Mc {
            input: "T5".into(),
            lambda: "z".into(),
            output: "M4".into(),
        },
        StepSpec::Twist {
            input: "M4".into(),
            scalars: strs(&["1", "1", "z^2"]),
            output: "H".into(),
        },
    ];
    let checks = vec![
        CheckSpec::Rank {
            name: "first_mc_rank".into(),
            object: "M1".into(),
            equals: 2,
        },
        CheckSpec::Orthogonal {
            name: "tensor_is_orthogonal".into(),
            object: "T4".into(),
        },
        CheckSpec::Rank {
            name: "final_rank".into(),
            object: "H".into(),
            equals: 7,
        },
        CheckSpec::Jordan {
            name: "local_monodromy".into(),
            object: "H".into(),
            expect: rank7_jordan_expect("z", "z^2"),
        },
        CheckSpec::Certificate {
            name: "g2_certificate".into(),
            object: "H".into(),
            orthogonal: true,
            lambda3_fixed_dim: 1,
            abs_irreducible: true,
        },
        CheckSpec::RigidityPositive {
            name: "not_rigid".into(),
            object: "H".into(),
        },
        CheckSpec::ConjugateTo {
            name: "matches_reference_matrices".into(),
            object: "H".into(),
            entries: table1_entries(),
        },
    ];
    PipelineSpec {
        cyclotomic_order: 3,
        generic: true,
        objects,
        steps,
        checks,
    }
}

/// The same pipeline shape over Q(zeta_6): identical local monodromy but no
/// fixed line on the third exterior power, consistent with monodromy dense in
/// SO6 rather than G2.
pub fn scenario_so6() -> PipelineSpec {
    let mut objects = BTreeMap::new();
    objects.insert("L1".to_string(), named_rank_one(&["z", "1", "z"]));
    objects.insert("L2".to_string(), named_rank_one(&["1", "z", "z"]));
    objects.insert("L3".to_string(), named_rank_one(&["1", "1", "z"]));
    let steps = vec![
        StepSpec::Mc {
            input: "L1".into(),
            lambda: "z^5".into(),
            output: "M1".into(),
        },
        StepSpec::Mc {
            input: "L2".into(),
            lambda: "z^5".into(),
            output: "M2".into(),
        },
        StepSpec::Tensor {
            left: "M1".into(),
            right: "M2".into(),
            output: "T4".into(),
        },
        StepSpec::Mc {
            input: "T4".into(),
            lambda: "z^4".into(),
            output: "M3".into(),
        },
        StepSpec::Twist {
            input: "M3".into(),
            scalars: strs(&["1", "1", "z^2"]),
            output: "T5".into(),
        },
        StepSpec::Mc {
            input: "T5".into(),
            lambda: "z^2".into(),
            output: "M4".into(),
        },
        StepSpec::Twist {
            input: "M4".into(),
            scalars: strs(&["1", "1", "z^4"]),
            output: "H".into(),
        },
    ];
    let checks = vec![
        CheckSpec::Rank {
            name: "final_rank".into(),
            object: "H".into(),
            equals: 7,
        },
        CheckSpec::Jordan {
            name: "local_monodromy_matches_g2_case".into(),
            object: "H".into(),
            expect: rank7_jordan_expect("z^2", "z^4"),
        },
        CheckSpec::Certificate {
            name: "so6_certificate".into(),
            object: "H".into(),
            orthogonal: true,
            lambda3_fixed_dim: 0,
            abs_irreducible: true,
        },
    ];
    PipelineSpec {
        cyclotomic_order: 6,
        generic: true,
        objects,
        steps,
        checks,
    }
}

/// Smallest t with zeta_4 -> zeta_4^{-1} and zeta_m fixed, coprime to 4m.
fn sl_galois_automorphism(m: u64) -> u64 {
    let n = 4 * m;
    (1..n)
        .find(|t| {
            num::integer::gcd(*t, n) == 1 && t % 4 == 3 && t % m == 1
        })
        .expect("CRT solution exists for odd m")
}

/// The dihedral-to-SL construction: a rank-2 dihedral tuple with r punctures
/// over Q(zeta_4m), convolved with Kummer(-1), twisted, then convolved with
/// the two-puncture rank-one tuple (i, -i), producing a rank 4r-7 tuple whose
/// finite entries have determinants in <zeta_4>.
pub fn scenario_sl(m: u64, r: usize) -> Result<PipelineSpec> {
    if m < 3 || m % 2 == 0 {
        return Err(PipelineError::BadParameters(format!(
            "m must be odd and >= 3, got {}",
            m
        )));
    }
    let phi = euler_phi(m) as usize;
    if r < 3 + phi {
        return Err(PipelineError::BadParameters(format!(
            "r must be at least 3 + phi(m) = {}, got {}",
            3 + phi,
            r
        )));
    }
    let order = 4 * m;
    // F1 entries: A1 = antidiag(1,1); A_3.. = diag(zeta_m^t, zeta_m^-t) over
    // primitive residues t ascending; trailing entries -1; A2 chosen so the
    // infinity entry is -1.
    let one = CycNum::one(order);
    let a1 = Mat::from_rows(vec![
        vec![CycNum::zero(order), one.clone()],
        vec![one.clone(), CycNum::zero(order)],
    ])?;
    let mut later: Vec<Mat> = Vec::new();
    for t in 1..m {
        if num::integer::gcd(t, m) != 1 {
            continue;
        }
        let z = CycNum::root_of_unity(order, (4 * t) as i64)?;
        let zi = z.inv()?;
        later.push(Mat::from_rows(vec![
            vec![z, CycNum::zero(order)],
            vec![CycNum::zero(order), zi],
        ])?);
    }
    let minus_one = Mat::scalar(2, &CycNum::from_integer(-1)).embed(order)?;
    for _ in 0..r - 2 - phi {
        later.push(minus_one.clone());
    }
    // A2 = A1^{-1} (A3...Ar (-1))^{-1}
    let mut prod = Mat::identity(2, order);
    for l in &later {
        prod = prod.mul(l)?;
    }
    prod = prod.mul(&minus_one)?;
    let a2 = a1.inverse()?.mul(&prod.inverse()?)?;
    let mut entries = vec![a1, a2];
    entries.extend(later);
    let f1 = MonodromyTuple::new(entries)?;

    let mut objects = BTreeMap::new();
    objects.insert(
        "F1".to_string(),
        ObjectSpec::Tuple {
            entries: f1.entries().iter().map(|e| e.to_strings()).collect(),
        },
    );
    let mut twist_scalars = vec!["-1".to_string()];
    twist_scalars.extend(std::iter::repeat("1".to_string()).take(r - 1));
    let i_str = format!("z^{}", m);
    let minus_i_str = format!("-z^{}", m);
    let steps = vec![
        StepSpec::Mc {
            input: "F1".into(),
            lambda: "-1".into(),
            output: "G1".into(),
        },
        StepSpec::Twist {
            input: "G1".into(),
            scalars: twist_scalars,
            output: "G2".into(),
        },
        StepSpec::ConvolveRankOne {
            input: "G2".into(),
            scalars: vec![i_str.clone(), minus_i_str.clone()],
            output: "SL".into(),
        },
    ];
    // C1 = J(-i, 2) + J(-i, 1)^{2r-6} + J(1,1)^{2r-3}
    let mut c1_expect: JordanSpec = vec![(minus_i_str.clone(), 2)];
    for _ in 0..2 * r - 6 {
        c1_expect.push((minus_i_str.clone(), 1));
    }
    for _ in 0..2 * r - 3 {
        c1_expect.push(("1".to_string(), 1));
    }
    let checks = vec![
        CheckSpec::Rank {
            name: "intermediate_rank".into(),
            object: "G1".into(),
            equals: 2 * r - 4,
        },
        CheckSpec::IrreducibleCriterion {
            name: "criterion_at_last_convolution".into(),
            object: "G2".into(),
            scalars: vec![i_str, minus_i_str],
        },
        CheckSpec::Rank {
            name: "final_rank".into(),
            object: "SL".into(),
            equals: 4 * r - 7,
        },
        CheckSpec::JordanEntry {
            name: "c1_jordan".into(),
            object: "SL".into(),
            entry: 0,
            expect: c1_expect,
        },
        CheckSpec::Homology {
            name: "c2_homology_of_order_4".into(),
            object: "SL".into(),
            entry: 1,
            order: 4,
        },
        CheckSpec::DeterminantOrdersDivide {
            name: "determinants_in_zeta4".into(),
            object: "SL".into(),
            divides: 4,
        },
        CheckSpec::ClosureFull {
            name: "absolutely_irreducible".into(),
            object: "SL".into(),
        },
        CheckSpec::GaloisPairs {
            name: "second_half_is_galois_conjugate".into(),
            object: "SL".into(),
            automorphism: sl_galois_automorphism(m),
            offset: r,
        },
    ];
    Ok(PipelineSpec {
        cyclotomic_order: order,
        generic: true,
        objects,
        steps,
        checks,
    })
}
