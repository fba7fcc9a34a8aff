//! Batch driver: curated suites and scenario files are turned into jobs,
//! screened for tameness, run in parallel and merged into a canonical report
//! (checks sorted by name, instances in job order).

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::{zeta_coefficients, MotivicClass};
use crate::error::{Error, Result};
use crate::ffcount::{
    Ambient, CountingSequence, ExplicitVariety, FieldSpec, GroupAction, Piece, PrimePower,
    Representation, DEFAULT_BUDGET,
};
use crate::identities::{self, ComponentScenario, IdentityCheck, Instance};
use crate::perm::PermGroup;
use crate::polydiag::{self, TowerSpace};

pub const SCHEMA_VERSION: &str = "1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_TAME: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

/// Process exit status for an error that aborted a run.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NotTame(_) => EXIT_NOT_TAME,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::NonIntegralBurnside { .. } | Error::Overflow(_) | Error::Inconsistent(_) => {
            EXIT_INTERNAL
        }
        _ => EXIT_USAGE,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Quotients,
    Strata,
    Polydiagonal,
    Zeta,
    Oracle,
}

impl Suite {
    pub const CONCRETE: [Suite; 5] = [
        Suite::Quotients,
        Suite::Strata,
        Suite::Polydiagonal,
        Suite::Zeta,
        Suite::Oracle,
    ];

    fn default_q(self) -> &'static [u64] {
        match self {
            Suite::Quotients | Suite::Strata | Suite::All => &[3, 5, 7, 13],
            Suite::Polydiagonal => &[2, 3, 5, 7],
            Suite::Zeta => &[2, 3, 4, 5, 7, 9],
            Suite::Oracle => &[],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "all" => Suite::All,
            "quotients" => Suite::Quotients,
            "strata" => Suite::Strata,
            "polydiagonal" => Suite::Polydiagonal,
            "zeta" => Suite::Zeta,
            "oracle" => Suite::Oracle,
            other => return Err(Error::Parse(format!("unknown suite `{other}`"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::All => "all",
            Suite::Quotients => "quotients",
            Suite::Strata => "strata",
            Suite::Polydiagonal => "polydiagonal",
            Suite::Zeta => "zeta",
            Suite::Oracle => "oracle",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Parse(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub suites: Vec<Suite>,
    /// Empty means each suite's default grid.
    pub q_list: Vec<u64>,
    pub scenario_paths: Vec<PathBuf>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub budget: u64,
    pub oracle_instances: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suites: Vec::new(),
            q_list: Vec::new(),
            scenario_paths: Vec::new(),
            format: Format::Text,
            out: None,
            seed: 0,
            budget: DEFAULT_BUDGET,
            oracle_instances: 20,
        }
    }
}

/// What a single job verifies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Planned {
    Component(ComponentScenario),
    Torsor(Representation),
    VbProjectivization(Representation),
    PvCongruence(Representation),
    LineBundle(Representation),
    TorusStrata(Representation),
    Blowup(GroupAction),
    SymmetricPower(MotivicClass, usize),
    ZeroSum {
        r: u32,
        d: usize,
    },
    Totaro {
        y: CountingSequence,
        d: usize,
    },
    ZeroSumBundle {
        r: u32,
        d: usize,
        m: usize,
        x: CountingSequence,
    },
    Polydiagonal {
        space: TowerSpace,
        n: usize,
    },
    Oracle(ExplicitVariety),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub planned: Planned,
    pub qs: Vec<u64>,
}

impl Planned {
    /// Actions whose tameness decides whether a `q` may be used.
    fn actions(&self) -> Result<Vec<GroupAction>> {
        let lin = |rep: &Representation| vec![GroupAction::linear(rep.clone(), Ambient::Affine)];
        Ok(match self {
            Planned::Component(s) => vec![s.base.clone()],
            Planned::Torsor(r)
            | Planned::VbProjectivization(r)
            | Planned::PvCongruence(r)
            | Planned::LineBundle(r)
            | Planned::TorusStrata(r) => lin(r),
            Planned::Blowup(a) => vec![a.clone()],
            Planned::Oracle(v) => v.burnside_action().into_iter().collect(),
            _ => Vec::new(),
        })
    }

    /// Rejects `q` unless every action involved is tame there.
    pub fn screen(&self, q: u64) -> Result<()> {
        PrimePower::new(q)?;
        for a in self.actions()? {
            a.validate(q)?;
        }
        if let Planned::Oracle(ExplicitVariety::Polydiagonal { n: 3, .. }) = self {
            if q.is_multiple_of(3) {
                return Err(Error::NotTame(format!(
                    "the explicit model of X<3> needs characteristic != 3, got q = {q}"
                )));
            }
        }
        Ok(())
    }

    pub fn run(&self, qs: &[u64], budget: u64) -> Result<IdentityCheck> {
        let each = |r: &Representation| -> Vec<(Representation, u64)> {
            qs.iter().map(|&q| (r.clone(), q)).collect()
        };
        match self {
            Planned::Component(s) => identities::check_component_reduction(
                &qs.iter().map(|&q| (s.clone(), q)).collect::<Vec<_>>(),
            ),
            Planned::Torsor(r) => identities::check_torsor(&each(r)),
            Planned::VbProjectivization(r) => identities::check_vb_projectivization(&each(r)),
            Planned::PvCongruence(r) => identities::check_pv_congruence(&each(r)),
            Planned::LineBundle(r) => identities::check_line_bundle(&each(r)),
            Planned::TorusStrata(r) => identities::check_torus_strata(&each(r)),
            Planned::Blowup(a) => identities::check_equivariant_blowup(
                &qs.iter().map(|&q| (a.clone(), q)).collect::<Vec<_>>(),
            ),
            Planned::SymmetricPower(c, n) => identities::check_symmetric_powers(
                &qs.iter().map(|&q| (c.clone(), *n, q)).collect::<Vec<_>>(),
            ),
            Planned::ZeroSum { r, d } => {
                polydiag::check_zero_sum(&qs.iter().map(|&q| (*r, *d, q)).collect::<Vec<_>>())
            }
            Planned::Totaro { y, d } => polydiag::totaro_factor_check(y, *d, qs),
            Planned::ZeroSumBundle { r, d, m, x } => {
                polydiag::zero_sum_bundle_fiber_congruence(*r, *d, *m, x, qs)
            }
            Planned::Polydiagonal { space, n } => polydiag::verify_polydiagonal(space, *n, qs),
            Planned::Oracle(v) => identities::check_oracle_agreement(
                &qs.iter().map(|&q| (v.clone(), q)).collect::<Vec<_>>(),
                budget,
            ),
        }
    }
}

/// Keeps the tame `q` of a curated job; `None` if none is left.
fn tame_job(planned: Planned, qs: &[u64]) -> Option<Job> {
    let qs: Vec<u64> = qs
        .iter()
        .copied()
        .filter(|&q| planned.screen(q).is_ok())
        .collect();
    (!qs.is_empty()).then_some(Job { planned, qs })
}

fn grid(config: &RunConfig, suite: Suite) -> Vec<u64> {
    if config.q_list.is_empty() {
        suite.default_q().to_vec()
    } else {
        config.q_list.clone()
    }
}

pub fn quotient_jobs(qs: &[u64]) -> Vec<Job> {
    let mut planned: Vec<Planned> = identities::component_battery()
        .into_iter()
        .map(Planned::Component)
        .collect();
    for rep in identities::linear_battery() {
        planned.push(Planned::Torsor(rep.clone()));
        planned.push(Planned::VbProjectivization(rep.clone()));
        planned.push(Planned::PvCongruence(rep.clone()));
        planned.push(Planned::LineBundle(rep));
    }
    planned
        .into_iter()
        .filter_map(|p| tame_job(p, qs))
        .collect()
}

pub fn strata_jobs(qs: &[u64]) -> Vec<Job> {
    let mut planned: Vec<Planned> = identities::diagonal_battery()
        .into_iter()
        .map(Planned::TorusStrata)
        .collect();
    planned.extend(
        identities::blowup_battery()
            .into_iter()
            .map(Planned::Blowup),
    );
    for r in 0..=3 {
        for d in 1..=4 {
            planned.push(Planned::ZeroSum { r, d });
        }
    }
    for y in [
        CountingSequence::point(),
        CountingSequence::projective(1),
        CountingSequence::affine(1),
    ] {
        for d in 1..=3 {
            planned.push(Planned::Totaro { y: y.clone(), d });
        }
    }
    for (r, d, m) in [(1, 2, 1), (1, 2, 2), (2, 2, 2), (1, 3, 2), (2, 3, 1)] {
        planned.push(Planned::ZeroSumBundle {
            r,
            d,
            m,
            x: CountingSequence::affine(1),
        });
    }
    planned
        .into_iter()
        .filter_map(|p| tame_job(p, qs))
        .collect()
}

/// The six `(X, n)` of the headline congruence.
pub fn polydiagonal_cases() -> Vec<(TowerSpace, usize)> {
    vec![
        (TowerSpace::projective(1), 2),
        (TowerSpace::projective(2), 2),
        (TowerSpace::affine(2), 2),
        (TowerSpace::projective(1), 3),
        (TowerSpace::affine(1), 3),
        (TowerSpace::affine(2), 3),
    ]
}

pub fn polydiagonal_jobs(qs: &[u64]) -> Vec<Job> {
    polydiagonal_cases()
        .into_iter()
        .filter_map(|(space, n)| tame_job(Planned::Polydiagonal { space, n }, qs))
        .collect()
}

pub fn zeta_jobs(qs: &[u64]) -> Vec<Job> {
    let class = |s: &str| s.parse::<MotivicClass>().expect("literal class");
    let mut planned: Vec<Planned> = (0..=6)
        .map(|n| Planned::SymmetricPower(class("1 + L"), n))
        .collect();
    for (c, top) in [("L", 4), ("1 + L + L^2", 4), ("1 + 2*L", 3), ("1 + L^2", 3)] {
        for n in 2..=top {
            planned.push(Planned::SymmetricPower(class(c), n));
        }
    }
    planned
        .into_iter()
        .filter_map(|p| tame_job(p, qs))
        .collect()
}

fn pick<T: Clone>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs[rng.random_range(0..xs.len())].clone()
}

/// One small random variety with a group action and a `q` at which it is
/// tame and within the default oracle budget.
fn random_oracle_instance(rng: &mut ChaCha8Rng) -> (ExplicitVariety, u64) {
    let small_q = [2u64, 3, 4, 5];
    match rng.random_range(0..6) {
        0 => {
            let factor = pick(
                rng,
                &[
                    vec![Piece::Affine(1)],
                    vec![Piece::Projective(1)],
                    vec![Piece::Torus(1)],
                    vec![Piece::Affine(1), Piece::Torus(1)],
                ],
            );
            let n = rng.random_range(2..=3);
            let group = if rng.random_bool(0.5) {
                PermGroup::symmetric(n)
            } else {
                PermGroup::cyclic(n)
            }
            .expect("small group");
            (ExplicitVariety::Power { factor, group }, pick(rng, &[2, 3]))
        }
        1 => {
            let k = rng.random_range(2..=4u32);
            let dim = rng.random_range(1..=2);
            let weights = (0..dim).map(|_| rng.random_range(0..k)).collect();
            let rep = Representation::diagonal(weights, k).expect("k >= 2");
            let ambient = pick(
                rng,
                &[
                    Ambient::Affine,
                    Ambient::Punctured,
                    Ambient::Projective,
                    Ambient::Torus,
                    Ambient::BlownUpOrigin,
                ],
            );
            let q = pick(
                rng,
                &[5u64, 7, 9, 13]
                    .iter()
                    .copied()
                    .filter(|q| (q - 1) % k as u64 == 0)
                    .collect::<Vec<_>>(),
            );
            (ExplicitVariety::Linear { rep, ambient }, q)
        }
        2 => {
            let n = rng.random_range(2..=3);
            let group = PermGroup::symmetric(n).expect("small group");
            let rep = if rng.random_bool(0.5) {
                Representation::permutation(group)
            } else {
                Representation::zero_sum(group)
            };
            let mut ambients = vec![Ambient::Affine, Ambient::Punctured, Ambient::Projective];
            if matches!(
                rep,
                Representation::Permutation {
                    zero_sum: false,
                    ..
                }
            ) {
                ambients.push(Ambient::Torus);
            }
            (
                ExplicitVariety::Linear {
                    rep,
                    ambient: pick(rng, &ambients),
                },
                pick(rng, &small_q),
            )
        }
        3 => {
            let copies = if rng.random_bool(0.5) {
                PermGroup::cyclic(2)
            } else {
                PermGroup::symmetric(3)
            }
            .expect("small group");
            let inner = ExplicitVariety::Power {
                factor: vec![pick(rng, &[Piece::Affine(1), Piece::Projective(1)])],
                group: PermGroup::symmetric(2).expect("S_2"),
            };
            (
                ExplicitVariety::Copies {
                    copies,
                    inner: Box::new(inner),
                },
                pick(rng, &[2, 3]),
            )
        }
        4 => {
            let (rank, parts, factors) = pick(
                rng,
                &[(1, 2, 1), (1, 3, 1), (2, 2, 1), (1, 2, 2), (2, 3, 1)],
            );
            let base_dim = if factors == 1 {
                rng.random_range(0..=1)
            } else {
                0
            };
            let variety = ExplicitVariety::ZeroSumWreath {
                rank,
                parts,
                factors,
                base_dim,
            };
            (variety, pick(rng, &[2, 3, 5]))
        }
        _ => {
            let (dim, n) = pick(rng, &[(1, 2), (2, 2), (1, 3), (2, 3)]);
            let q = if n == 3 {
                pick(rng, &[2, 4])
            } else {
                pick(rng, &[2, 3])
            };
            (ExplicitVariety::Polydiagonal { dim, n }, q)
        }
    }
}

pub fn random_oracle_instances(seed: u64, count: usize) -> Vec<(ExplicitVariety, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_oracle_instance(&mut rng))
        .collect()
}

pub fn oracle_jobs(seed: u64, count: usize, qs: &[u64]) -> Vec<Job> {
    random_oracle_instances(seed, count)
        .into_iter()
        .filter(|(_, q)| qs.is_empty() || qs.contains(q))
        .map(|(v, q)| Job {
            planned: Planned::Oracle(v),
            qs: vec![q],
        })
        .collect()
}

pub fn suite_jobs(suite: Suite, config: &RunConfig) -> Vec<Job> {
    let qs = grid(config, suite);
    match suite {
        Suite::All => Suite::CONCRETE
            .iter()
            .flat_map(|&s| suite_jobs(s, config))
            .collect(),
        Suite::Quotients => quotient_jobs(&qs),
        Suite::Strata => strata_jobs(&qs),
        Suite::Polydiagonal => polydiagonal_jobs(&qs),
        Suite::Zeta => zeta_jobs(&qs),
        Suite::Oracle => oracle_jobs(config.seed, config.oracle_instances, &config.q_list),
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepSpec {
    pub dim: Option<u32>,
    pub weights: Option<Vec<u32>>,
    pub k: Option<u32>,
    pub permutation: Option<usize>,
    pub zero_sum: Option<usize>,
    /// `symmetric` (default), `cyclic` or `trivial`.
    pub group: Option<String>,
    #[serde(default)]
    pub trivial: u32,
}

fn named_group(name: Option<&str>, degree: usize) -> Result<PermGroup> {
    match name.unwrap_or("symmetric") {
        "symmetric" => PermGroup::symmetric(degree),
        "cyclic" => PermGroup::cyclic(degree),
        "trivial" => Ok(PermGroup::trivial(degree)),
        other => Err(Error::InvalidScenario(format!("unknown group `{other}`"))),
    }
}

impl RepSpec {
    pub fn build(&self) -> Result<Representation> {
        let mut rep = match (&self.weights, self.permutation, self.zero_sum) {
            (Some(w), None, None) => Representation::diagonal(w.clone(), self.k.unwrap_or(1))?,
            (None, Some(n), None) => {
                Representation::permutation(named_group(self.group.as_deref(), n)?)
            }
            (None, None, Some(n)) => {
                Representation::zero_sum(named_group(self.group.as_deref(), n)?)
            }
            (None, None, None) => match self.dim {
                Some(d) => Representation::diagonal(vec![0; d as usize], 1)?,
                None => {
                    return Err(Error::InvalidScenario(
                        "representation needs weights, permutation, zero_sum or dim".into(),
                    ))
                }
            },
            _ => {
                return Err(Error::InvalidScenario(
                    "give exactly one of weights, permutation, zero_sum".into(),
                ))
            }
        };
        for _ in 0..self.trivial {
            rep = rep.with_trivial_summand();
        }
        if let Some(d) = self.dim {
            if d != rep.dim() {
                return Err(Error::InvalidScenario(format!(
                    "declared dim {d} but the representation has dim {}",
                    rep.dim()
                )));
            }
        }
        Ok(rep)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub q: u64,
    #[serde(rename = "N")]
    pub n: Vec<i128>,
}

/// `{"kind":"projective","dim":2}`, `{"class":"1 + 2*L","dim":1}` or
/// `{"table":{"q":5,"N":[...]},"dim":1}`.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub kind: Option<String>,
    pub dim: Option<u32>,
    pub class: Option<String>,
    pub table: Option<TableSpec>,
}

impl SpaceSpec {
    pub fn sequence(&self) -> Result<CountingSequence> {
        let dim = self.dim.unwrap_or(0);
        match (&self.kind, &self.class, &self.table) {
            (Some(kind), None, None) => match kind.as_str() {
                "point" => Ok(CountingSequence::point()),
                "affine" => Ok(CountingSequence::affine(dim)),
                "projective" => Ok(CountingSequence::projective(dim)),
                "torus" => Ok(CountingSequence::torus(dim)),
                other => Err(Error::InvalidScenario(format!(
                    "unknown variety kind `{other}`"
                ))),
            },
            (None, Some(c), None) => CountingSequence::polynomial(c.parse()?),
            (None, None, Some(t)) => CountingSequence::table(t.q, t.n.clone()),
            _ => Err(Error::InvalidScenario(
                "variety needs exactly one of kind, class, table".into(),
            )),
        }
    }

    pub fn tower_space(&self) -> Result<TowerSpace> {
        let dim = self.dim.ok_or_else(|| {
            Error::InvalidScenario("polydiagonal scenarios need the dimension of X".into())
        })?;
        TowerSpace::new(self.sequence()?, dim)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowupSpec {
    /// Origin of a linear representation.
    pub origin: Option<RepSpec>,
    /// Diagonal of `X × X` under the swap.
    pub diagonal: Option<SpaceSpec>,
    /// A point of `X`, trivial group.
    pub point: Option<SpaceSpec>,
}

impl BlowupSpec {
    pub fn build(&self) -> Result<GroupAction> {
        match (&self.origin, &self.diagonal, &self.point) {
            (Some(r), None, None) => {
                let rep = r.build()?;
                if rep.dim() == 0 {
                    return Err(Error::InvalidScenario(
                        "cannot blow up the origin of a zero space".into(),
                    ));
                }
                Ok(GroupAction::Blowup {
                    codim: rep.dim(),
                    center: Box::new(GroupAction::trivial(
                        CountingSequence::point(),
                        rep.group_order(),
                    )),
                    ambient: Box::new(GroupAction::linear(rep, Ambient::Affine)),
                })
            }
            (None, Some(x), None) => {
                let dim = x.dim.filter(|&d| d > 0).ok_or_else(|| {
                    Error::InvalidScenario("diagonal blowups need X of positive dimension".into())
                })?;
                let base = x.sequence()?;
                Ok(GroupAction::Blowup {
                    ambient: Box::new(GroupAction::power(base.clone(), PermGroup::symmetric(2)?)),
                    center: Box::new(GroupAction::trivial(base, 2)),
                    codim: dim,
                })
            }
            (None, None, Some(x)) => {
                let dim = x.dim.filter(|&d| d > 0).ok_or_else(|| {
                    Error::InvalidScenario("point blowups need X of positive dimension".into())
                })?;
                Ok(GroupAction::Blowup {
                    ambient: Box::new(GroupAction::power(x.sequence()?, PermGroup::trivial(1))),
                    center: Box::new(GroupAction::power(
                        CountingSequence::point(),
                        PermGroup::trivial(1),
                    )),
                    codim: dim,
                })
            }
            _ => Err(Error::InvalidScenario(
                "blowup needs exactly one of origin, diagonal, point".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceSpec {
    Affine(u32),
    Projective(u32),
    Torus(u32),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSpec {
    pub factor: Vec<PieceSpec>,
    pub n: usize,
    pub group: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearSpec {
    #[serde(rename = "V")]
    pub v: RepSpec,
    pub ambient: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WreathSpec {
    pub r: u32,
    pub d: usize,
    #[serde(default = "one")]
    pub m: usize,
    #[serde(default)]
    pub s: u32,
}

fn one() -> usize {
    1
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolydiagonalSpec {
    pub dim: u32,
    pub n: usize,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarietySpec {
    Power(PowerSpec),
    Linear(LinearSpec),
    ZeroSum(WreathSpec),
    Polydiagonal(PolydiagonalSpec),
}

pub fn parse_ambient(s: &str) -> Result<Ambient> {
    Ok(match s {
        "affine" => Ambient::Affine,
        "punctured" => Ambient::Punctured,
        "projective" => Ambient::Projective,
        "torus" => Ambient::Torus,
        "blown_up_origin" => Ambient::BlownUpOrigin,
        other => return Err(Error::InvalidScenario(format!("unknown ambient `{other}`"))),
    })
}

impl VarietySpec {
    pub fn build(&self) -> Result<ExplicitVariety> {
        Ok(match self {
            VarietySpec::Power(p) => ExplicitVariety::Power {
                factor: p
                    .factor
                    .iter()
                    .map(|f| match *f {
                        PieceSpec::Affine(d) => Piece::Affine(d),
                        PieceSpec::Projective(d) => Piece::Projective(d),
                        PieceSpec::Torus(d) => Piece::Torus(d),
                    })
                    .collect(),
                group: named_group(p.group.as_deref(), p.n)?,
            },
            VarietySpec::Linear(l) => ExplicitVariety::Linear {
                rep: l.v.build()?,
                ambient: parse_ambient(&l.ambient)?,
            },
            VarietySpec::ZeroSum(w) => ExplicitVariety::ZeroSumWreath {
                rank: w.r,
                parts: w.d,
                factors: w.m,
                base_dim: w.s,
            },
            VarietySpec::Polydiagonal(p) => ExplicitVariety::Polydiagonal { dim: p.dim, n: p.n },
        })
    }
}

/// One entry of a scenario file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub check: String,
    #[serde(default)]
    pub q: Vec<u64>,
    #[serde(rename = "V")]
    pub v: Option<RepSpec>,
    #[serde(rename = "X")]
    pub x: Option<SpaceSpec>,
    #[serde(rename = "Y")]
    pub y: Option<SpaceSpec>,
    #[serde(rename = "Z")]
    pub z: Option<SpaceSpec>,
    pub copies: Option<usize>,
    pub group: Option<String>,
    pub class: Option<String>,
    pub n: Option<usize>,
    pub r: Option<u32>,
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub blowup: Option<BlowupSpec>,
    pub variety: Option<VarietySpec>,
}

fn need<T: Clone>(field: &Option<T>, name: &str, check: &str) -> Result<T> {
    field
        .clone()
        .ok_or_else(|| Error::InvalidScenario(format!("`{check}` scenarios need `{name}`")))
}

impl ScenarioSpec {
    pub fn plan(&self) -> Result<Planned> {
        let c = self.check.as_str();
        if identities::describe(c).is_none() {
            return Err(Error::UnknownCheck(c.to_string()));
        }
        let rep = || need(&self.v, "V", c)?.build();
        Ok(match c {
            "component-reduction" => {
                let z = need(&self.z, "Z", c)?.sequence()?;
                let copies = named_group(
                    self.group.as_deref().or(Some("cyclic")),
                    need(&self.copies, "copies", c)?,
                )?;
                Planned::Component(ComponentScenario {
                    base: GroupAction::power(z, PermGroup::trivial(1)),
                    copies,
                })
            }
            "torsor" => Planned::Torsor(rep()?),
            "vb-projectivization" => Planned::VbProjectivization(rep()?),
            "pv-congruence" => Planned::PvCongruence(rep()?),
            "line-bundle" => Planned::LineBundle(rep()?),
            "torus-strata" => {
                let r = rep()?;
                if !matches!(r, Representation::Diagonal { .. }) {
                    return Err(Error::InvalidScenario(
                        "torus strata need a diagonal action".into(),
                    ));
                }
                Planned::TorusStrata(r)
            }
            "equivariant-blowup" => Planned::Blowup(need(&self.blowup, "blowup", c)?.build()?),
            "symmetric-powers" => {
                let class = match (&self.class, &self.x) {
                    (Some(s), None) => s.parse()?,
                    (None, Some(x)) => x.sequence()?.class().cloned().ok_or_else(|| {
                        Error::InvalidScenario("symmetric powers need a polynomial class".into())
                    })?,
                    _ => {
                        return Err(Error::InvalidScenario(
                            "give exactly one of `class`, `X`".into(),
                        ))
                    }
                };
                Planned::SymmetricPower(class, need(&self.n, "n", c)?)
            }
            "zero-sum" => Planned::ZeroSum {
                r: need(&self.r, "r", c)?,
                d: need(&self.d, "d", c)?,
            },
            "totaro" => Planned::Totaro {
                y: need(&self.y, "Y", c)?.sequence()?,
                d: need(&self.d, "d", c)?,
            },
            "zero-sum-bundle" => Planned::ZeroSumBundle {
                r: need(&self.r, "r", c)?,
                d: need(&self.d, "d", c)?,
                m: need(&self.m, "m", c)?,
                x: need(&self.x, "X", c)?.sequence()?,
            },
            "polydiagonal" => {
                let n = need(&self.n, "n", c)?;
                if !(2..=3).contains(&n) {
                    return Err(Error::Unsupported(format!(
                        "polydiagonal counts need n in 2..=3, got {n}"
                    )));
                }
                Planned::Polydiagonal {
                    space: need(&self.x, "X", c)?.tower_space()?,
                    n,
                }
            }
            "oracle-agreement" => Planned::Oracle(need(&self.variety, "variety", c)?.build()?),
            _ => unreachable!("catalog lookup succeeded"),
        })
    }
}

/// Accepts `{"schema":"1","scenarios":[...]}`, a bare list, or one scenario.
pub fn parse_scenarios(text: &str) -> Result<Vec<ScenarioSpec>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let list = match value {
        serde_json::Value::Object(mut map) if map.contains_key("scenarios") => {
            if let Some(schema) = map.get("schema") {
                if schema != SCHEMA_VERSION {
                    return Err(Error::Parse(format!(
                        "unsupported scenario schema {schema}"
                    )));
                }
            }
            map.remove("scenarios").expect("checked")
        }
        v @ serde_json::Value::Array(_) => v,
        v => serde_json::Value::Array(vec![v]),
    };
    serde_json::from_value(list).map_err(|e| Error::Parse(e.to_string()))
}

/// Plans scenario entries and screens every `(scenario, q)` pair up front.
pub fn scenario_jobs(specs: &[ScenarioSpec], default_q: &[u64]) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    for spec in specs {
        let planned = spec.plan()?;
        let qs = if spec.q.is_empty() {
            default_q.to_vec()
        } else {
            spec.q.clone()
        };
        if qs.is_empty() {
            return Err(Error::InvalidScenario(format!(
                "`{}` scenario has no q",
                spec.check
            )));
        }
        for &q in &qs {
            planned.screen(q)?;
        }
        jobs.push(Job { planned, qs });
    }
    Ok(jobs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportConfig {
    pub suites: Vec<Suite>,
    pub q: Vec<u64>,
    pub scenarios: Vec<String>,
    pub seed: u64,
    pub budget: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub instances: usize,
    pub failed_instances: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub schema: String,
    pub tool: String,
    pub version: String,
    pub config: ReportConfig,
    pub checks: Vec<IdentityCheck>,
    pub summary: Summary,
    pub pass: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Runs jobs in parallel and merges checks by name.
pub fn run_jobs(jobs: &[Job], budget: u64) -> Result<Vec<IdentityCheck>> {
    let results: Vec<IdentityCheck> = jobs
        .par_iter()
        .map(|j| j.planned.run(&j.qs, budget))
        .collect::<Result<Vec<_>>>()?;
    let mut merged: BTreeMap<String, Vec<Instance>> = BTreeMap::new();
    for c in results {
        merged
            .entry(c.name.clone())
            .or_default()
            .extend(c.instances);
    }
    Ok(merged
        .into_iter()
        .map(|(name, instances)| IdentityCheck::new(&name, instances))
        .collect())
}

pub fn run(config: &RunConfig) -> Result<Report> {
    if config.suites.is_empty() && config.scenario_paths.is_empty() {
        return Err(Error::InvalidScenario(
            "no suite or scenario selected".into(),
        ));
    }
    for &q in &config.q_list {
        PrimePower::new(q)?;
    }
    let mut jobs = Vec::new();
    for path in &config.scenario_paths {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        jobs.extend(scenario_jobs(&parse_scenarios(&text)?, &config.q_list)?);
    }
    let mut suites = config.suites.clone();
    suites.sort();
    suites.dedup();
    if suites.contains(&Suite::All) {
        suites = vec![Suite::All];
    }
    for &s in &suites {
        jobs.extend(suite_jobs(s, config));
    }
    let checks = run_jobs(&jobs, config.budget)?;
    let instances = checks.iter().map(|c| c.instances.len()).sum();
    let failed_instances = checks.iter().map(|c| c.failures().count()).sum();
    Ok(Report {
        schema: SCHEMA_VERSION.into(),
        tool: "k0count".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: ReportConfig {
            suites,
            q: config.q_list.clone(),
            scenarios: config
                .scenario_paths
                .iter()
                .map(|p| p.display().to_string())
                .collect(),
            seed: config.seed,
            budget: config.budget,
        },
        pass: !checks.is_empty() && checks.iter().all(|c| c.pass),
        summary: Summary {
            checks: checks.len(),
            instances,
            failed_instances,
        },
        checks,
    })
}

fn modulus(f: &FieldSpec) -> String {
    format!(
        "F_{}^{} = F_{}[x]/({})",
        f.p,
        f.e * f.m,
        f.p,
        f.modulus_string()
    )
}

pub fn render_text(report: &Report) -> String {
    let mut s = String::new();
    for c in &report.checks {
        let ok = c.instances.iter().filter(|i| i.pass).count();
        let _ = writeln!(
            s,
            "[{}] {}  {}  ({ok}/{} instances)",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.anchor,
            c.instances.len()
        );
        for i in &c.instances {
            let _ = write!(
                s,
                "  {} q={:<3} {} {} {}   {}",
                if i.pass { "ok  " } else { "FAIL" },
                i.q,
                i.lhs,
                i.relation,
                i.rhs,
                i.scenario
            );
            if let Some(sym) = &i.symbolic {
                let _ = write!(s, "   [{} {} {}]", sym.lhs, sym.relation, sym.rhs);
                if !sym.holds || !sym.coherent {
                    let _ = write!(
                        s,
                        " symbolic mismatch: {} / {} at L = q",
                        sym.lhs_at_q, sym.rhs_at_q
                    );
                }
            }
            for cond in i.conditions.iter().filter(|c| !c.holds) {
                let _ = write!(s, "   violated: {}", cond.label);
            }
            if !i.pass {
                let _ = write!(s, "   field {}", modulus(&i.field));
            }
            s.push('\n');
        }
    }
    let _ = writeln!(
        s,
        "{}: {} checks, {} instances, {} failed",
        if report.pass { "PASS" } else { "FAIL" },
        report.summary.checks,
        report.summary.instances,
        report.summary.failed_instances
    );
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_csv(report: &Report) -> String {
    let mut s = String::from(
        "check,scenario,q,lhs,rhs,relation,pass,symbolic_lhs,symbolic_rhs,coherent,field\n",
    );
    for c in &report.checks {
        for i in &c.instances {
            let (sl, sr, coh) = match &i.symbolic {
                Some(sym) => (
                    sym.lhs.to_string(),
                    sym.rhs.to_string(),
                    (sym.holds && sym.coherent).to_string(),
                ),
                None => (String::new(), String::new(), String::new()),
            };
            let row = [
                c.name.clone(),
                i.scenario.clone(),
                i.q.to_string(),
                i.lhs.to_string(),
                i.rhs.to_string(),
                match i.relation {
                    identities::Relation::Equal => "equal".into(),
                    identities::Relation::CongruentModQ => "congruent_mod_q".into(),
                },
                i.pass.to_string(),
                sl,
                sr,
                coh,
                modulus(&i.field),
            ];
            let row: Vec<String> = row.iter().map(|f| csv_field(f)).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
    }
    s
}

pub fn render_json(report: &Report) -> Result<String> {
    serde_json::to_string_pretty(report).map_err(|e| Error::Inconsistent(e.to_string()))
}

pub fn render(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Text => Ok(render_text(report)),
        Format::Json => render_json(report).map(|s| s + "\n"),
        Format::Csv => Ok(render_csv(report)),
    }
}

/// `[Sym^n Z]` for `n ≤ N` with counts at each `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaRow {
    pub n: usize,
    pub class: MotivicClass,
    pub counts: Vec<(u64, i128)>,
}

pub fn zeta_table(class: &MotivicClass, n_max: usize, qs: &[u64]) -> Result<Vec<ZetaRow>> {
    for &q in qs {
        PrimePower::new(q)?;
    }
    let series = zeta_coefficients(class, n_max)?;
    series
        .coefficients
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            let counts = qs
                .iter()
                .map(|&q| c.evaluate_pure(q as i128).map(|v| (q, v)))
                .collect::<Result<Vec<_>>>()?;
            Ok(ZetaRow {
                n,
                class: c,
                counts,
            })
        })
        .collect()
}
