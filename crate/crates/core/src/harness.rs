//! Running the checkers side by side: single checks with per-algorithm
//! deadlines, and benchmark sweeps over the generator families.

use std::io;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::charform::{subtype_cf_sub_within, subtype_cf_sup_within};
use crate::exec::{map_cells_deep, Execution};
use crate::generator::{gen_norec, gen_random, gen_super, gen_unfolded_pair, GenParams};
use crate::gh::subtype_gh_within;
use crate::kps::subtype_kps_within;
use crate::types::{print_type, ChoiceKind, SessionType, SizeMetrics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Gh,
    Kps,
    CfSub,
    CfSup,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Gh, Algorithm::Kps, Algorithm::CfSub, Algorithm::CfSup];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Gh => "gh",
            Algorithm::Kps => "kps",
            Algorithm::CfSub => "cf-sub",
            Algorithm::CfSup => "cf-sup",
        }
    }

    pub fn from_id(id: &str) -> Option<Algorithm> {
        Algorithm::ALL.into_iter().find(|a| a.id() == id)
    }

    pub fn decide(self, t: &SessionType, u: &SessionType) -> bool {
        self.decide_within(t, u, &mut Budget::unlimited())
            .expect("unlimited budget")
    }

    pub fn decide_within(
        self,
        t: &SessionType,
        u: &SessionType,
        budget: &mut Budget,
    ) -> Result<bool, BudgetExceeded> {
        match self {
            Algorithm::Gh => subtype_gh_within(t, u, budget),
            Algorithm::Kps => subtype_kps_within(t, u, budget),
            Algorithm::CfSub => subtype_cf_sub_within(t, u, false, budget),
            Algorithm::CfSup => subtype_cf_sup_within(t, u, false, budget),
        }
    }
}

/// A verdict, or the note that the deadline passed first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Done(bool),
    Timeout,
}

impl Verdict {
    pub fn value(self) -> Option<bool> {
        match self {
            Verdict::Done(b) => Some(b),
            Verdict::Timeout => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Done(true) => "true",
            Verdict::Done(false) => "false",
            Verdict::Timeout => "timeout",
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Verdict::Done(b) => s.serialize_bool(*b),
            Verdict::Timeout => s.serialize_str("timeout"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub algorithm: &'static str,
    pub lhs: String,
    pub rhs: String,
    pub verdict: Verdict,
    pub wall_nanos: u64,
    pub lhs_metrics: SizeMetrics,
    pub rhs_metrics: SizeMetrics,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("algorithms disagree on {lhs} <= {rhs}: {verdicts}")]
    Disagreement {
        lhs: String,
        rhs: String,
        verdicts: String,
    },
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
}

fn timed(algo: Algorithm, t: &SessionType, u: &SessionType, timeout: Option<Duration>) -> (Verdict, u64) {
    let mut budget = Budget::unlimited().with_timeout(timeout);
    let start = Instant::now();
    let res = algo.decide_within(t, u, &mut budget);
    let nanos = (start.elapsed().as_nanos() as u64).max(1);
    match res {
        Ok(b) => (Verdict::Done(b), nanos),
        Err(_) => (Verdict::Timeout, nanos),
    }
}

fn check_agreement<'a, I>(t: &SessionType, u: &SessionType, results: I) -> Result<(), HarnessError>
where
    I: IntoIterator<Item = (&'a str, Verdict)>,
{
    let results: Vec<_> = results.into_iter().collect();
    let done: Vec<bool> = results.iter().filter_map(|(_, v)| v.value()).collect();
    if done.windows(2).any(|w| w[0] != w[1]) {
        let verdicts = results
            .iter()
            .map(|(a, v)| format!("{a}={}", v.as_str()))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(HarnessError::Disagreement {
            lhs: print_type(t),
            rhs: print_type(u),
            verdicts,
        });
    }
    Ok(())
}

/// Runs each algorithm on `t <= u` under its own deadline. Completed
/// verdicts must agree.
pub fn run_check(
    t: &SessionType,
    u: &SessionType,
    algos: &[Algorithm],
    timeout: Option<Duration>,
    exec: Execution,
) -> Result<Vec<CheckReport>, HarnessError> {
    let cells = map_cells_deep(algos, exec, |&a| timed(a, t, u, timeout));
    check_agreement(t, u, algos.iter().zip(&cells).map(|(a, (v, _))| (a.id(), *v)))?;
    let (lhs, rhs) = (print_type(t), print_type(u));
    let (lm, rm) = (SizeMetrics::of(t), SizeMetrics::of(u));
    Ok(algos
        .iter()
        .zip(cells)
        .map(|(a, (verdict, wall_nanos))| CheckReport {
            algorithm: a.id(),
            lhs: lhs.clone(),
            rhs: rhs.clone(),
            verdict,
            wall_nanos,
            lhs_metrics: lm,
            rhs_metrics: rm,
        })
        .collect())
}

/// Benchmark families. `param` is the message budget, or `k` for the
/// super-recursive ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Random,
    Norec,
    SuperSend,
    SuperRecv,
    Unfolded,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Random,
        Family::Norec,
        Family::SuperSend,
        Family::SuperRecv,
        Family::Unfolded,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Norec => "norec",
            Family::SuperSend => "super-send",
            Family::SuperRecv => "super-recv",
            Family::Unfolded => "unfolded",
        }
    }

    pub fn from_id(id: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.id() == id)
    }

    /// The pair checked for parameter `param`: a type against itself, or an
    /// unfolded pair.
    pub fn instance(self, param: usize, seed: u64) -> (SessionType, SessionType) {
        let p = GenParams::sized(param, seed);
        let selfie = |t: SessionType| (t.clone(), t);
        match self {
            Family::Random => selfie(gen_random(&p)),
            Family::Norec => selfie(gen_norec(&p)),
            Family::SuperSend => selfie(gen_super(param.max(1), ChoiceKind::Internal)),
            Family::SuperRecv => selfie(gen_super(param.max(1), ChoiceKind::External)),
            Family::Unfolded => gen_unfolded_pair(&p),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub families: Vec<Family>,
    pub params: Vec<usize>,
    pub algos: Vec<Algorithm>,
    pub timeout: Option<Duration>,
    pub repetitions: usize,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            families: vec![Family::SuperSend],
            params: vec![2, 4],
            algos: Algorithm::ALL.to_vec(),
            timeout: Some(Duration::from_secs(10)),
            repetitions: 3,
            seed: 0,
            exec: Execution::available(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub family: &'static str,
    pub param: usize,
    pub algorithm: &'static str,
    pub nummsg_lhs: u64,
    pub unfold_lhs: u128,
    pub nummsg_rhs: u64,
    pub unfold_rhs: u128,
    pub verdict: Option<bool>,
    pub timeout: bool,
    pub wall_nanos: u64,
}

pub const CSV_HEADER: [&str; 10] = [
    "family",
    "param",
    "algorithm",
    "nummsg_lhs",
    "unfold_lhs",
    "nummsg_rhs",
    "unfold_rhs",
    "verdict",
    "timeout",
    "wall_nanos",
];

fn median(mut xs: Vec<u64>) -> u64 {
    xs.sort_unstable();
    xs[(xs.len() - 1) / 2]
}

/// One row per family instance and algorithm, ordered by family id,
/// parameter and algorithm id. Times are medians over the repetitions; a
/// cell stops repeating once it times out.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, HarnessError> {
    let mut instances = Vec::new();
    for &f in &cfg.families {
        for &param in &cfg.params {
            let (t, u) = f.instance(param, cfg.seed);
            instances.push((f, param, t, u));
        }
    }
    let cells: Vec<(usize, Algorithm)> = (0..instances.len())
        .flat_map(|i| cfg.algos.iter().map(move |&a| (i, a)))
        .collect();
    let reps = cfg.repetitions.max(1);
    let results = map_cells_deep(&cells, cfg.exec, |&(i, a)| {
        let (_, _, t, u) = &instances[i];
        let mut times = Vec::with_capacity(reps);
        let mut verdict = Verdict::Timeout;
        for _ in 0..reps {
            let (v, nanos) = timed(a, t, u, cfg.timeout);
            times.push(nanos);
            verdict = v;
            if v == Verdict::Timeout {
                break;
            }
        }
        (verdict, median(times))
    });
    for (i, (_, _, t, u)) in instances.iter().enumerate() {
        let per: Vec<_> = cells
            .iter()
            .zip(&results)
            .filter(|((j, _), _)| *j == i)
            .map(|((_, a), (v, _))| (a.id(), *v))
            .collect();
        check_agreement(t, u, per)?;
    }
    let mut rows: Vec<BenchRow> = cells
        .iter()
        .zip(results)
        .map(|(&(i, a), (verdict, wall_nanos))| {
            let (f, param, t, u) = &instances[i];
            let (lm, rm) = (SizeMetrics::of(t), SizeMetrics::of(u));
            BenchRow {
                family: f.id(),
                param: *param,
                algorithm: a.id(),
                nummsg_lhs: lm.nummsg,
                unfold_lhs: lm.unfold,
                nummsg_rhs: rm.nummsg,
                unfold_rhs: rm.unfold,
                verdict: verdict.value(),
                timeout: verdict == Verdict::Timeout,
                wall_nanos,
            }
        })
        .collect();
    rows.sort_by(|a, b| (a.family, a.param, a.algorithm).cmp(&(b.family, b.param, b.algorithm)));
    Ok(rows)
}

/// Writes the header and one record per row. `verdict` is `true`, `false`
/// or `timeout`.
pub fn write_csv<W: io::Write>(rows: &[BenchRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        let verdict = match r.verdict {
            Some(true) => "true",
            Some(false) => "false",
            None => "timeout",
        };
        w.write_record([
            r.family.to_string(),
            r.param.to_string(),
            r.algorithm.to_string(),
            r.nummsg_lhs.to_string(),
            r.unfold_lhs.to_string(),
            r.nummsg_rhs.to_string(),
            r.unfold_rhs.to_string(),
            verdict.to_string(),
            r.timeout.to_string(),
            r.wall_nanos.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(rows: &[BenchRow], path: &std::path::Path) -> Result<(), HarnessError> {
    let io_err = |source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    write_csv(rows, file).map_err(|e| io_err(e.into()))
}

/// One JSON object per report, one per line.
pub fn emit_json<W: io::Write>(reports: &[CheckReport], mut out: W) -> io::Result<()> {
    for r in reports {
        serde_json::to_writer(&mut out, r)?;
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::parse_type;

    #[test]
    fn request_reply_pair_all_true() {
        let t = parse_type("?request . !ok . end").unwrap();
        let u = parse_type("rec x . ?request . +{ !ok . end , !ko . x }").unwrap();
        let reports = run_check(&t, &u, &Algorithm::ALL, None, Execution::Sequential).unwrap();
        assert_eq!(reports.len(), 4);
        assert!(reports.iter().all(|r| r.verdict == Verdict::Done(true) && r.wall_nanos > 0));
    }

    #[test]
    fn json_verdicts() {
        let v = serde_json::to_string(&[Verdict::Done(true), Verdict::Done(false), Verdict::Timeout]).unwrap();
        assert_eq!(v, r#"[true,false,"timeout"]"#);
    }

    #[test]
    fn csv_shapes() {
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "family,param,algorithm,nummsg_lhs,unfold_lhs,nummsg_rhs,unfold_rhs,verdict,timeout,wall_nanos\n"
        );
        let row = BenchRow {
            family: "norec",
            param: 10,
            algorithm: "gh",
            nummsg_lhs: 10,
            unfold_lhs: 10,
            nummsg_rhs: 10,
            unfold_rhs: 10,
            verdict: Some(true),
            timeout: false,
            wall_nanos: 5,
        };
        let mut buf = Vec::new();
        write_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1), Some("norec,10,gh,10,10,10,10,true,false,5"));
    }

    #[test]
    fn bench_rows_are_ordered() {
        let cfg = BenchConfig {
            families: vec![Family::SuperSend],
            params: vec![1, 2, 3],
            algos: vec![Algorithm::Kps, Algorithm::CfSub, Algorithm::CfSup, Algorithm::Gh],
            repetitions: 1,
            ..BenchConfig::default()
        };
        let rows = run_bench(&cfg).unwrap();
        assert_eq!(rows.len(), 12);
        let keys: Vec<_> = rows.iter().map(|r| (r.param, r.algorithm)).collect();
        assert_eq!(&keys[..4], &[(1, "cf-sub"), (1, "cf-sup"), (1, "gh"), (1, "kps")]);
        assert_eq!(median(vec![5, 1, 3]), 3);
    }
}
