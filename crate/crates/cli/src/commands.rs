use gsaw_core::arith::BigRational;
use gsaw_core::catalog::{
    bias_sweep, decay_rate, exact_distribution, exact_moments, CatalogError, LadderModel, Lattice,
    Observable,
};
use gsaw_core::errata::{errata_report, ErrataError, SimSettings};
use gsaw_core::oracle::{self, Axis, OracleError};
use gsaw_core::recurrence::{builtin_spec, corrected_spec, eval_recursion, LadderKind, RecursionSpec};
use gsaw_core::sim::{self, LatticeTopology, SimError, TopologyKind};
use num_traits::{ToPrimitive, Zero};

use crate::output::{Cell, Record, Section};
use crate::{
    CliError, CompareArgs, EnumerateArgs, ErrataArgs, ExactArgs, RecurArgs, SimulateArgs, SweepArgs, Variant,
};

type Result<T> = std::result::Result<T, CliError>;

impl From<CatalogError> for CliError {
    fn from(e: CatalogError) -> Self {
        match e {
            CatalogError::InvalidModel(_)
            | CatalogError::UnsupportedBias(_)
            | CatalogError::UnsupportedObservable { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ErrataError> for CliError {
    fn from(e: ErrataError) -> Self {
        match e {
            ErrataError::Oracle(e) => e.into(),
            ErrataError::Sim(e) => e.into(),
            e => CliError::Failed(e.to_string()),
        }
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

fn model(name: &str, c: &BigRational) -> Result<LadderModel> {
    Ok(LadderModel::parse(name, c.clone())?)
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Printed => "printed",
        Variant::Corrected => "corrected",
    }
}

fn recursion(which: LadderKind, variant: Variant) -> RecursionSpec {
    match variant {
        Variant::Printed => builtin_spec(which),
        Variant::Corrected => corrected_spec(which),
    }
}

/// The recursion describing `model`, if one exists.
fn recursion_for(model: &LadderModel) -> Option<LadderKind> {
    if !model.is_unbiased() || model.is_wall() {
        return None;
    }
    match model.lattice() {
        Lattice::SquareTwoSided => Some(LadderKind::Square),
        Lattice::TriangularTwoSided => Some(LadderKind::Triangular),
        _ => None,
    }
}

fn probability_section(name: &'static str, values: &[BigRational]) -> Section {
    let mut s = Section::new(name, &["n", "probability", "probability_float"]);
    for (n, p) in values.iter().enumerate() {
        s.push(vec![n.into(), Cell::fraction(p), Cell::float_of(p)]);
    }
    s
}

pub fn exact(a: &ExactArgs) -> Result<Record> {
    let m = model(&a.model, &a.c)?;
    let d = exact_distribution(&m, a.n_max)?;
    let mut r = Record::new("exact")
        .param("model", m.name())
        .param("C", Cell::fraction(m.bias()))
        .param("n_max", a.n_max);
    r.section(probability_section("distribution", &d.dense()));
    let mut res = Section::new("residual", &["residual_mass", "residual_mass_float"]);
    res.push(vec![Cell::fraction(&d.residual_mass), Cell::float_of(&d.residual_mass)]);
    r.section(res);

    let mut moments = Section::new(
        "moments",
        &["observable", "mean", "mean_float", "variance", "variance_float"],
    );
    let mut printed = Section::new("printed", &["observable", "source", "mean", "variance"]);
    let observables: &[Observable] = if m.lattice().is_square() {
        &[Observable::Length, Observable::Width]
    } else {
        &[Observable::Length]
    };
    for &o in observables {
        let rep = exact_moments(&m, o)?;
        moments.push(vec![
            o.to_string().into(),
            Cell::fraction(&rep.mean),
            Cell::float_of(&rep.mean),
            Cell::fraction(&rep.variance),
            Cell::float_of(&rep.variance),
        ]);
        for p in &rep.printed {
            printed.push(vec![
                o.to_string().into(),
                p.source.into(),
                Cell::fraction(&p.mean),
                Cell::fraction(&p.variance),
            ]);
        }
    }
    r.section(moments);
    r.section(printed);
    let mut decay = Section::new("decay", &["decay_rate"]);
    decay.push(vec![decay_rate(&m).map_err(failed)?.into()]);
    r.section(decay);
    Ok(r)
}

fn topology(name: &str, box_half_width: i32) -> Result<LatticeTopology> {
    let kind: TopologyKind = name.parse().map_err(CliError::Usage)?;
    Ok(LatticeTopology::with_box_half_width(kind, box_half_width))
}

pub fn simulate(a: &SimulateArgs) -> Result<Record> {
    let t = topology(&a.lattice, a.box_half_width)?;
    let s = sim::run_walks_with(&t, &a.c, a.walks, a.seed, a.streams, a.execution.into())?;
    let mut r = Record::new("simulate")
        .param("lattice", t.name())
        .param("C", Cell::fraction(&a.c))
        .param("walks", a.walks)
        .param("seed", a.seed)
        .param("streams", a.streams)
        .param("box_half_width", if t.is_infinite() { Some(a.box_half_width as u64) } else { None });
    let mut summary = Section::new(
        "summary",
        &[
            "trapped",
            "wall_hits",
            "mean",
            "variance",
            "stddev",
            "width_mean",
            "width_variance",
            "bias_extrapolated",
        ],
    );
    summary.push(vec![
        s.length.count.into(),
        s.wall_hits.into(),
        s.length.mean.into(),
        s.length.variance.into(),
        s.length.stddev.into(),
        s.width.mean.into(),
        s.width.variance.into(),
        s.bias_extrapolated.into(),
    ]);
    r.section(summary);
    for (name, key, hist) in [("length", "n", &s.histogram_length), ("width", "w", &s.histogram_width)] {
        let mut sec = Section::new(name, &[key, "count", "frequency"]);
        for (&k, &v) in hist {
            sec.push(vec![k.into(), v.into(), (v as f64 / s.walks as f64).into()]);
        }
        r.section(sec);
    }
    let mut parity = Section::new("parity", &["modulus", "residue", "count", "mass"]);
    for modulus in [2, 4] {
        let p = sim::parity_profile(&s.histogram_length, modulus, 0, usize::MAX);
        for res in 0..modulus {
            parity.push(vec![modulus.into(), res.into(), p.counts[res].into(), p.mass[res].into()]);
        }
    }
    r.section(parity);
    Ok(r)
}

pub fn enumerate(a: &EnumerateArgs) -> Result<Record> {
    let m = model(&a.model, &a.c)?;
    let t = oracle::model_topology(&m);
    let e = oracle::enumerate_from(&t, t.start(), m.bias(), a.n_max, a.execution.into())?;
    let mut r = Record::new("enumerate")
        .param("model", m.name())
        .param("C", Cell::fraction(m.bias()))
        .param("n_max", a.n_max);
    let mut joint = Section::new("trapped", &["n", "w", "probability", "probability_float"]);
    for (&(n, w), p) in &e.trapped {
        joint.push(vec![n.into(), w.into(), Cell::fraction(p), Cell::float_of(p)]);
    }
    r.section(joint);
    r.section(probability_section("length", &e.length_probabilities(a.n_max)));
    let mut width = Section::new("width", &["w", "probability", "probability_float"]);
    for (w, p) in e.marginal(Axis::Width) {
        width.push(vec![w.into(), Cell::fraction(&p), Cell::float_of(&p)]);
    }
    r.section(width);
    let mut summary = Section::new("summary", &["alive_mass", "alive_mass_float", "nodes_explored"]);
    summary.push(vec![
        Cell::fraction(&e.alive_mass),
        Cell::float_of(&e.alive_mass),
        e.nodes_explored.into(),
    ]);
    r.section(summary);
    Ok(r)
}

pub fn recur(a: &RecurArgs) -> Result<Record> {
    let which: LadderKind = a.which.parse().map_err(|e: gsaw_core::recurrence::RecurrenceError| {
        CliError::Usage(e.to_string())
    })?;
    let spec = recursion(which, a.variant);
    let values = eval_recursion(&spec, a.n_max).map_err(failed)?;
    let mut r = Record::new("recur")
        .param("which", which.to_string())
        .param("variant", variant_name(a.variant))
        .param("n_max", a.n_max);
    r.section(probability_section("recursion", &values));
    Ok(r)
}

fn delta(a: Option<&BigRational>, b: Option<&BigRational>) -> Cell {
    match (a, b) {
        (Some(a), Some(b)) => Cell::fraction(&(a - b)),
        _ => Cell::Empty,
    }
}

pub fn compare(a: &CompareArgs) -> Result<Record> {
    let m = model(&a.model, &a.c)?;
    let gf = match exact_distribution(&m, a.n_max) {
        Ok(d) => Some(d.dense()),
        Err(CatalogError::UnsupportedBias(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let rec = match recursion_for(&m) {
        Some(k) => Some(eval_recursion(&recursion(k, a.variant), a.n_max).map_err(failed)?),
        None => None,
    };
    let t = oracle::model_topology(&m);
    let orc = oracle::enumerate_from(&t, t.start(), m.bias(), a.n_max, a.execution.into())?
        .length_probabilities(a.n_max);

    let mut r = Record::new("compare")
        .param("model", m.name())
        .param("C", Cell::fraction(m.bias()))
        .param("n_max", a.n_max)
        .param("variant", variant_name(a.variant));
    let mut rows = Section::new(
        "deltas",
        &[
            "n",
            "gf",
            "recursion",
            "oracle",
            "gf_minus_oracle",
            "recursion_minus_oracle",
            "gf_minus_recursion",
        ],
    );
    let mut disagreements = 0u64;
    let mut first = None;
    for n in 0..=a.n_max {
        let g = gf.as_ref().map(|v| &v[n]);
        let q = rec.as_ref().map(|v| &v[n]);
        let o = &orc[n];
        let bad = g.is_some_and(|g| g != o) || q.is_some_and(|q| q != o);
        if bad {
            disagreements += 1;
            first.get_or_insert(n);
        }
        rows.push(vec![
            n.into(),
            g.map(Cell::fraction).unwrap_or(Cell::Empty),
            q.map(Cell::fraction).unwrap_or(Cell::Empty),
            Cell::fraction(o),
            delta(g, Some(o)),
            delta(q, Some(o)),
            delta(g, q),
        ]);
    }
    r.section(rows);
    let mut summary = Section::new(
        "summary",
        &["routes", "agree", "disagreements", "first_disagreement"],
    );
    let mut routes = Vec::new();
    if gf.is_some() {
        routes.push("gf");
    }
    if rec.is_some() {
        routes.push("recursion");
    }
    routes.push("oracle");
    summary.push(vec![
        routes.join("+").into(),
        (disagreements == 0).into(),
        disagreements.into(),
        first.into(),
    ]);
    r.section(summary);
    Ok(r)
}

pub fn sweep_bias(a: &SweepArgs) -> Result<Record> {
    let zero = BigRational::zero();
    if a.step <= zero || a.from <= zero || a.to < a.from {
        return Err(CliError::Usage(format!(
            "need 0 < from <= to and step > 0 (got from {}, to {}, step {})",
            a.from, a.to, a.step
        )));
    }
    let m = model(&a.model, &BigRational::from_integer(1.into()))?;
    if !m.lattice().is_square() {
        return Err(CatalogError::UnsupportedBias(m.lattice()).into());
    }
    let steps = ((&a.to - &a.from) / &a.step)
        .floor()
        .to_integer()
        .to_usize()
        .ok_or_else(|| CliError::Usage("sweep range too long".into()))?;
    let cs: Vec<BigRational> = (0..=steps)
        .map(|k| &a.from + &a.step * BigRational::from_integer(k.into()))
        .collect();
    let rows = bias_sweep(&m, &cs).map_err(failed)?;
    let mut r = Record::new("sweep-bias")
        .param("model", m.name())
        .param("from", Cell::fraction(&a.from))
        .param("to", Cell::fraction(&a.to))
        .param("step", Cell::fraction(&a.step));
    let cols = ["C", "C_float", "mean", "mean_float", "decay_rate"];
    let mut sweep = Section::new("sweep", &cols);
    let row = |x: &gsaw_core::catalog::SweepRow| -> Vec<Cell> {
        vec![
            Cell::fraction(&x.c),
            Cell::float_of(&x.c),
            Cell::fraction(&x.mean),
            Cell::float_of(&x.mean),
            x.decay.into(),
        ]
    };
    for x in &rows {
        sweep.push(row(x));
    }
    r.section(sweep);
    let mut best = Section::new("argmin", &cols);
    if let Some(b) = rows.iter().min_by(|p, q| p.mean.cmp(&q.mean)) {
        best.push(row(b));
    }
    r.section(best);
    Ok(r)
}

pub fn errata(a: &ErrataArgs) -> Result<Record> {
    let settings = SimSettings {
        walks: a.walks,
        seed: a.seed,
        streams: a.streams,
    };
    let rep = errata_report(a.n_max, settings, a.execution.into())?;
    let mut r = Record::new("errata")
        .param("n_max", a.n_max)
        .param("walks", a.walks)
        .param("seed", a.seed)
        .param("streams", a.streams);
    let mut items = Section::new("items", &["id", "subject", "validated", "resolved"]);
    let mut cands = Section::new(
        "candidates",
        &["id", "candidate", "agrees_with_oracle", "mismatch_n", "mismatch_w", "oracle_value", "candidate_value"],
    );
    let mut simul = Section::new(
        "simulation",
        &["id", "candidate", "sample_variance", "standard_error", "z_score"],
    );
    for e in &rep.items {
        items.push(vec![
            e.id.into(),
            e.subject.into(),
            e.validated.clone().into(),
            e.resolved().into(),
        ]);
        for c in &e.candidates {
            let m = c.first_mismatch.as_ref();
            cands.push(vec![
                e.id.into(),
                c.label.clone().into(),
                c.agrees_with_oracle.into(),
                m.map(|m| m.n).into(),
                m.and_then(|m| m.w).into(),
                m.map(|m| m.oracle.clone()).into(),
                m.map(|m| m.candidate.clone()).into(),
            ]);
        }
        if let Some(s) = &e.simulation {
            for (label, z) in &s.z_scores {
                simul.push(vec![
                    e.id.into(),
                    label.clone().into(),
                    s.sample_variance.into(),
                    s.standard_error.into(),
                    (*z).into(),
                ]);
            }
        }
    }
    r.section(items);
    r.section(cands);
    r.section(simul);
    let mut recs = Section::new("recursion", &["ladder", "checked_through", "first_failure", "n", "ratio"]);
    for f in &rep.recursions {
        for (n, ratio) in &f.inhomogeneous_ratios {
            recs.push(vec![
                f.ladder.to_string().into(),
                f.checked_through.into(),
                f.first_failure.into(),
                (*n).into(),
                ratio.clone().into(),
            ]);
        }
    }
    r.section(recs);
    Ok(r)
}
