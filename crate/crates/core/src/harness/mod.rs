//! Move scripts, seeded random diagrams, verification suites and the
//! reports they produce.

pub mod cli;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chain::ChainElement;
use crate::combined::{build_commutation, commutation_identities, commute_rows, MoveKind};
use crate::cover::{build_cover, differential4, differential4_elem, h_xi, h_xi_elem};
use crate::error::{Error, Result};
use crate::grid::{differential, differential_elem, enumerate_states, GridDiagram, Theory};
use crate::homology::{
    compare_modules, default_window, grid_complex, homology_table, vpromotion_compare, HomologyTable, Route, Window,
};
use crate::stab::{cone_of_splitting, cone_promoted, destabilize_at, stabilization_identities, stabilize_xsw};
use crate::verify::{check_identity, check_zero, Witness};

/// One Cromwell move.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Move {
    CommuteCols { i: usize },
    CommuteRows { i: usize },
    SwitchCols { i: usize },
    Stabilize {
        #[serde(rename = "type")]
        kind: String,
        col: usize,
    },
    Destabilize { col: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveScript {
    pub moves: Vec<Move>,
}

impl MoveScript {
    /// Accepts either a bare array of moves or `{"moves": [...]}`.
    pub fn from_json(text: &str) -> Result<MoveScript> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Bare(Vec<Move>),
            Wrapped(MoveScript),
        }
        match serde_json::from_str::<Either>(text) {
            Ok(Either::Bare(moves)) => Ok(MoveScript { moves }),
            Ok(Either::Wrapped(s)) => Ok(s),
            Err(e) => Err(Error::MalformedInput(format!("move script: {e}"))),
        }
    }
}

/// Applies one move; legality is checked against the current diagram.
pub fn apply_move(g: &GridDiagram, mv: &Move) -> Result<GridDiagram> {
    match mv {
        Move::CommuteCols { i } => Ok(build_commutation(g, *i, MoveKind::Commutation)?.gp().clone()),
        Move::SwitchCols { i } => Ok(build_commutation(g, *i, MoveKind::Switch)?.gp().clone()),
        Move::CommuteRows { i } => commute_rows(g, *i, MoveKind::Commutation),
        Move::Stabilize { kind, col } => {
            if kind != "X:SW" {
                return Err(Error::InvalidMove(format!("stabilization type {kind:?} is not supported; use X:SW")));
            }
            Ok(stabilize_xsw(g, *col)?.0)
        }
        Move::Destabilize { col } => destabilize_at(g, *col),
    }
}

/// Every diagram along the script, starting with `g`.
pub fn run_script(g: &GridDiagram, script: &MoveScript) -> Result<Vec<GridDiagram>> {
    let mut out = vec![g.clone()];
    for (step, mv) in script.moves.iter().enumerate() {
        let next = apply_move(out.last().expect("nonempty"), mv).map_err(|e| match e {
            Error::IllegalCommutation(m) => Error::IllegalCommutation(format!("move {step}: {m}")),
            Error::InvalidMove(m) => Error::InvalidMove(format!("move {step}: {m}")),
            Error::InvalidColumn(m) => Error::InvalidColumn(format!("move {step}: {m}")),
            other => other,
        })?;
        out.push(next);
    }
    Ok(out)
}

/// A random knot diagram of grid number `n`.
pub fn random_knot(n: usize, rng: &mut ChaCha8Rng) -> GridDiagram {
    loop {
        let mut o: Vec<usize> = (0..n).collect();
        let mut x: Vec<usize> = (0..n).collect();
        o.shuffle(rng);
        x.shuffle(rng);
        if let Ok(g) = GridDiagram::new(o, x) {
            return g;
        }
    }
}

/// `count` diagrams with grid numbers cycling through `sizes`, from `seed`.
pub fn random_knots(count: usize, sizes: &[usize], seed: u64) -> Vec<GridDiagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_knot(sizes[i % sizes.len()], &mut rng)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl Check {
    pub fn from_result(name: impl Into<String>, w: Option<Witness>) -> Check {
        Check { name: name.into(), passed: w.is_none(), witness: w }
    }
}

/// Output of a subcommand: ordered checks plus command-specific data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub data: Value,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report { command: command.into(), seed: None, checks: Vec::new(), data: Value::Null }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v["passed"] = json!(self.passed());
        serde_json::to_string_pretty(&v).expect("report serializes") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("check,passed,source,target,monomial\n");
        for c in &self.checks {
            let (src, tgt, mono) = match &c.witness {
                Some(w) => (w.source.as_str(), w.target.as_str(), w.monomial.as_str()),
                None => ("", "", ""),
            };
            s += &format!("{},{},{},{},{}\n", csv_field(&c.name), c.passed, csv_field(src), csv_field(tgt), csv_field(mono));
        }
        s
    }

    pub fn to_human(&self) -> String {
        let mut s = format!("{}\n", self.command);
        if let Some(seed) = self.seed {
            s += &format!("seed {seed}\n");
        }
        for c in &self.checks {
            match &c.witness {
                None => s += &format!("  ok    {}\n", c.name),
                Some(w) => s += &format!("  FAIL  {}: {w}\n", c.name),
            }
        }
        s += if self.passed() { "all checks passed\n" } else { "verification failed\n" };
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `∂⁻∘∂⁻`, `∂•∘∂•` on the torus and `∂₄•∘∂₄•` on the cover vanish.
pub fn suite_d2(g: &GridDiagram) -> Vec<Check> {
    let states = enumerate_states(g);
    let cg = build_cover(g);
    let mut out = Vec::new();
    for theory in [Theory::Minus, Theory::Bullet] {
        let name = format!("d{}^2 = 0", if theory == Theory::Minus { "-" } else { "*" });
        let w = check_zero(&name, &states, |x| differential_elem(g, theory, &differential(g, theory, x)));
        out.push(Check::from_result(name, w));
    }
    let name = "d4*^2 = 0";
    out.push(Check::from_result(name, check_zero(name, &states, |x| differential4_elem(&cg, &differential4(&cg, x)))));
    out
}

/// `∂₄• H_{X_i} + H_{X_i} ∂₄• = V_i + V_j` for every consecutive pair.
pub fn suite_vhomotopy(g: &GridDiagram) -> Vec<Check> {
    let states = enumerate_states(g);
    let cg = build_cover(g);
    let n = g.n();
    (0..n)
        .map(|i| {
            let (a, b) = g.consecutive_pair(i);
            let name = format!("d H_X{i} + H_X{i} d = V{a} + V{b}");
            let w = check_identity(
                &name,
                &states,
                |x| differential4_elem(&cg, &h_xi(&cg, i, x)).add(&h_xi_elem(&cg, i, &differential4(&cg, x))),
                |x| ChainElement::generator(x.clone(), n).times_sum_of_vars(a, b),
            );
            Check::from_result(name, w)
        })
        .collect()
}

pub fn suite_commute(g: &GridDiagram, col: usize, kind: MoveKind) -> Result<Vec<Check>> {
    let cd = build_commutation(g, col, kind)?;
    Ok(commutation_identities(&cd).into_iter().map(|(n, w)| Check::from_result(n, w)).collect())
}

/// Component identities of the stabilization map and agreement of the two
/// cone tables with `GH•(G)` on the hull of their default windows.
pub fn suite_stabilize(g: &GridDiagram, col: usize) -> Result<(Vec<Check>, Value)> {
    let (gp, labels) = stabilize_xsw(g, col)?;
    let mut checks: Vec<Check> =
        stabilization_identities(g, &gp, &labels).into_iter().map(|(n, w)| Check::from_result(n, w)).collect();
    let cone_n = cone_of_splitting(&gp, &build_cover(&gp), &labels)?;
    let cone_p = cone_promoted(g, &labels)?;
    let window = default_window(&cone_n).hull(&default_window(&cone_p));
    let tn = homology_table(&cone_n, window, Route::Collapsed);
    let tp = homology_table(&cone_p, window, Route::Collapsed);
    let tg = homology_table(&grid_complex(g, Theory::Bullet), window, Route::Collapsed);
    for (name, a, b) in [("cone tables agree", &tn, &tp), ("cone table equals GH*(G)", &tn, &tg)] {
        let verdict = compare_modules(a, b)?;
        let witness = verdict.first_discrepancy.map(|d| Witness {
            identity: name.into(),
            source: format!("(d, s) = ({}, {})", d.d, d.s),
            target: d.kind.clone(),
            monomial: format!("{} vs {}{}", d.left, d.right, d.power.map(|p| format!(" at power {p}")).unwrap_or_default()),
        });
        checks.push(Check::from_result(name, witness));
    }
    let data = json!({ "stabilized": serde_json::from_str::<Value>(&gp.to_json()).expect("valid json"), "window": window });
    Ok((checks, data))
}

/// Homology table of `GH⁻` or `GH•`; the default window when `window` is `None`.
pub fn homology_report(g: &GridDiagram, theory: Theory, window: Option<Window>, route: Route) -> HomologyTable {
    let c = grid_complex(g, theory);
    let w = window.unwrap_or_else(|| default_window(&c));
    homology_table(&c, w, route)
}

pub fn vpromotion_report(g: &GridDiagram, window: Option<Window>, route: Route) -> (Check, Value) {
    let w = window.unwrap_or_else(|| default_window(&grid_complex(g, Theory::Bullet)));
    let r = vpromotion_compare(g, w, route);
    let name = "GH-(K)[v] = GH*(K)";
    let witness = r.verdict.first_discrepancy.as_ref().map(|d| Witness {
        identity: name.into(),
        source: format!("(d, s) = ({}, {})", d.d, d.s),
        target: d.kind.clone(),
        monomial: format!("{} vs {}", d.left, d.right),
    });
    (Check::from_result(name, witness), r.to_json())
}

/// Runs the script and compares the homology of the two endpoint diagrams,
/// for both theories, on the hull of their default windows.
pub fn invariance_report(g: &GridDiagram, script: &MoveScript, route: Route) -> Result<(Vec<Check>, Value)> {
    let path = run_script(g, script)?;
    let last = path.last().expect("nonempty");
    let mut checks = Vec::new();
    let mut tables = Vec::new();
    for theory in [Theory::Minus, Theory::Bullet] {
        let (a, b) = (grid_complex(g, theory), grid_complex(last, theory));
        let window = default_window(&a).hull(&default_window(&b));
        let (ta, tb) = (homology_table(&a, window, route), homology_table(&b, window, route));
        let verdict = compare_modules(&ta, &tb)?;
        let name = format!("GH{}(start) = GH{}(end)", theory_mark(theory), theory_mark(theory));
        let witness = verdict.first_discrepancy.map(|d| Witness {
            identity: name.clone(),
            source: format!("(d, s) = ({}, {})", d.d, d.s),
            target: d.kind.clone(),
            monomial: format!("{} vs {}", d.left, d.right),
        });
        checks.push(Check::from_result(name, witness));
        tables.push(json!({ "theory": theory.name(), "start": ta.to_json(), "end": tb.to_json() }));
    }
    let diagrams: Vec<Value> =
        path.iter().map(|d| serde_json::from_str::<Value>(&d.to_json()).expect("valid json")).collect();
    Ok((checks, json!({ "diagrams": diagrams, "tables": tables })))
}

fn theory_mark(t: Theory) -> &'static str {
    match t {
        Theory::Minus => "-",
        Theory::Bullet => "*",
    }
}

/// `d2` and `vhomotopy` on seeded random diagrams.
pub fn suite_fuzz(count: usize, sizes: &[usize], seed: u64) -> (Vec<Check>, Value) {
    let mut checks = Vec::new();
    let mut diagrams = Vec::new();
    for (k, g) in random_knots(count, sizes, seed).iter().enumerate() {
        for mut c in suite_d2(g).into_iter().chain(suite_vhomotopy(g)) {
            c.name = format!("diagram {k}: {}", c.name);
            checks.push(c);
        }
        diagrams.push(serde_json::from_str::<Value>(&g.to_json()).expect("valid json"));
    }
    (checks, json!({ "diagrams": diagrams }))
}
