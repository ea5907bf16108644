use serde::Serialize;
use snl_core::lattice_polygons::{min_area_convex_kgon, min_interior_symmetric, DEFAULT_BUDGET};
use snl_core::multiplicity::{multiplicity_profile, verify_sharpness, MultiplicityProfile};
use snl_core::norms::{enumerate_classes, NormSpec};
use snl_core::periodic_metric::{canyon_for_norm, convergence_study, spectrum, stable_norm_sample, CanyonSetup};
use snl_core::toral_graph::{build_graph_for_norm, compute_zeta_epsilon_theta, EpsilonOptions, DEFAULT_NODE_BUDGET};
use snl_core::{format_ratio, Error, IntegralClass, Result};

use crate::output::{num, Report, Table};
use crate::scenario::Params;

const DEFAULT_GRID: usize = 64;
const DEFAULT_TIE: f64 = 1e-9;

fn class_cells(h: IntegralClass) -> [String; 2] {
    [h.a.to_string(), h.b.to_string()]
}

fn epsilon_options(p: &Params) -> EpsilonOptions<f64> {
    EpsilonOptions {
        node_budget: p.node_budget.unwrap_or(DEFAULT_NODE_BUDGET),
        theta_cap: p.theta_cap,
    }
}

#[derive(Serialize)]
struct ClassRow {
    class: IntegralClass,
    length: f64,
}

pub fn norm_enumerate(p: &Params) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        norm: NormSpec<f64>,
        radius: i64,
        flat_tie_warning: bool,
        entries: Vec<ClassRow>,
    }
    let norm = p.norm()?;
    let en = enumerate_classes(&norm, p.budget.unwrap_or(20))?;
    let mut t = Table::new(&["position", "a", "b", "length"]);
    for (i, e) in en.entries.iter().enumerate() {
        let [a, b] = class_cells(e.class);
        t.push(vec![i.to_string(), a, b, num(e.length)]);
    }
    let out = Out {
        norm,
        radius: en.radius,
        flat_tie_warning: en.flat_tie_warning,
        entries: en.entries.iter().map(|e| ClassRow { class: e.class, length: e.length }).collect(),
    };
    Ok(Report::new(&out, t))
}

pub fn graph_build(p: &Params) -> Result<Report> {
    let k = p.k()?;
    let (graph, lk) = build_graph_for_norm(&p.norm()?, k)?;
    graph.check_invariants()?;
    let mut t = Table::new(&["edge", "tail", "head", "class", "a", "b", "q", "length"]);
    for (i, e) in graph.edges.iter().enumerate() {
        let [a, b] = class_cells(graph.classes[e.class].class);
        t.push(vec![
            i.to_string(),
            e.tail.to_string(),
            e.head.to_string(),
            e.class.to_string(),
            a,
            b,
            format_ratio(&e.q),
            num(e.length),
        ]);
    }
    let value = serde_json::json!({ "k": k, "lk": lk, "graph": graph });
    Ok(Report {
        json: value,
        table: t,
    })
}

pub fn graph_epsilon(p: &Params) -> Result<Report> {
    let norm = p.norm()?;
    let k = p.k()?;
    let (graph, lk) = build_graph_for_norm(&norm, k)?;
    let r = compute_zeta_epsilon_theta(&graph, &norm, lk, epsilon_options(p))?;
    let mut t = Table::new(&["k", "lk", "zeta", "edge_bound", "epsilon", "theta", "theta_capped", "witness_a", "witness_b"]);
    let (wa, wb) = match &r.witness {
        Some(w) => (w.class.a.to_string(), w.class.b.to_string()),
        None => (String::new(), String::new()),
    };
    t.push(vec![
        k.to_string(),
        num(lk),
        num(r.zeta),
        r.edge_bound.to_string(),
        r.epsilon.map(num).unwrap_or_default(),
        num(r.theta),
        r.theta_capped.to_string(),
        wa,
        wb,
    ]);
    let mut value = serde_json::to_value(&r).expect("report serializes");
    value["k"] = k.into();
    value["lk"] = lk.into();
    Ok(Report {
        json: value,
        table: t,
    })
}

fn canyon(p: &Params) -> Result<CanyonSetup<f64>> {
    canyon_for_norm(&p.norm()?, p.k()?, p.grid.unwrap_or(DEFAULT_GRID), p.background, epsilon_options(p))
}

#[derive(Serialize)]
struct CanyonSummary {
    k: usize,
    lk: f64,
    grid: usize,
    background: f64,
    theta: f64,
    epsilon: Option<f64>,
    node_count: usize,
}

fn summary(s: &CanyonSetup<f64>) -> CanyonSummary {
    CanyonSummary {
        k: s.k,
        lk: s.lk,
        grid: s.resolution,
        background: s.background,
        theta: s.epsilon.theta,
        epsilon: s.epsilon.epsilon,
        node_count: s.canyon.node_count(),
    }
}

#[derive(Serialize)]
struct GroupOut {
    length: f64,
    m: usize,
    n: usize,
    classes: Vec<IntegralClass>,
    f_of_m: Option<i64>,
    bound_holds: Option<bool>,
}

#[derive(Serialize)]
struct ProfileOut {
    tie_tolerance: f64,
    last_group_truncated: bool,
    coarse_tolerance_warning: bool,
    groups: Vec<GroupOut>,
}

fn profile_out(p: &MultiplicityProfile<f64>) -> ProfileOut {
    ProfileOut {
        tie_tolerance: p.tie_tolerance,
        last_group_truncated: p.last_group_truncated,
        coarse_tolerance_warning: p.coarse_tolerance_warning,
        groups: p
            .groups
            .iter()
            .map(|g| GroupOut {
                length: g.length,
                m: g.m,
                n: g.n,
                classes: g.classes.clone(),
                f_of_m: g.f_of_m,
                bound_holds: g.bound_holds,
            })
            .collect(),
    }
}

fn profile_table(p: &MultiplicityProfile<f64>) -> Table {
    let mut t = Table::new(&["position", "a", "b", "length", "group", "m", "n"]);
    let mut pos = 0;
    for (gi, g) in p.groups.iter().enumerate() {
        for c in &g.classes {
            let [a, b] = class_cells(*c);
            t.push(vec![pos.to_string(), a, b, num(g.length), gi.to_string(), g.m.to_string(), g.n.to_string()]);
            pos += 1;
        }
    }
    t
}

pub fn canyon_spectrum(p: &Params) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        canyon: CanyonSummary,
        bound: f64,
        entries: Vec<ClassRow>,
        profile: ProfileOut,
    }
    let tie = p
        .tie_tolerance
        .ok_or_else(|| Error::Validation("--tie-tolerance is required for graph spectra".into()))?;
    let setup = canyon(p)?;
    let bound = p.bound.unwrap_or(1.5 * setup.lk);
    let s = spectrum(&setup.canyon, bound, p.window, tie)?;
    let out = Out {
        canyon: summary(&setup),
        bound,
        entries: s.entries.iter().map(|e| ClassRow { class: e.class, length: e.length }).collect(),
        profile: profile_out(&s.profile),
    };
    Ok(Report::new(&out, profile_table(&s.profile)))
}

pub fn stable_norm(p: &Params) -> Result<Report> {
    #[derive(Serialize)]
    struct Estimate {
        class: IntegralClass,
        ratios: Vec<f64>,
        estimate: f64,
        attained_at: usize,
        stable: bool,
    }
    #[derive(Serialize)]
    struct Out {
        canyon: CanyonSummary,
        radius: i64,
        n_max: usize,
        estimates: Vec<Estimate>,
        gauge_vertices: Vec<[f64; 2]>,
    }
    let setup = canyon(p)?;
    let radius = p.radius.unwrap_or(2);
    let n_max = p.n_max.unwrap_or(2);
    let sample = stable_norm_sample(&setup.canyon, radius, n_max)?;
    let mut t = Table::new(&["a", "b", "estimate", "attained_at", "stable"]);
    for e in &sample.estimates {
        let [a, b] = class_cells(e.class);
        t.push(vec![a, b, num(e.estimate), e.attained_at.to_string(), e.stable.to_string()]);
    }
    let out = Out {
        canyon: summary(&setup),
        radius,
        n_max,
        estimates: sample
            .estimates
            .iter()
            .map(|e| Estimate {
                class: e.class,
                ratios: e.ratios.clone(),
                estimate: e.estimate,
                attained_at: e.attained_at,
                stable: e.stable,
            })
            .collect(),
        gauge_vertices: sample.gauge.vertices.clone(),
    };
    Ok(Report::new(&out, t))
}

pub fn polygon_min_area(p: &Params) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        k: usize,
        area: String,
        witness: Vec<[i64; 2]>,
        certified: bool,
    }
    let r = min_area_convex_kgon(p.k()?, p.node_budget.unwrap_or(DEFAULT_BUDGET))?;
    let area = format_ratio(&r.area);
    let mut t = Table::new(&["k", "area", "certified", "vertex", "x", "y"]);
    for (i, v) in r.witness.vertices().iter().enumerate() {
        t.push(vec![
            r.k.to_string(),
            area.clone(),
            r.certified.to_string(),
            i.to_string(),
            v[0].to_string(),
            v[1].to_string(),
        ]);
    }
    let out = Out {
        k: r.k,
        area,
        witness: r.witness.vertices().to_vec(),
        certified: r.certified,
    };
    Ok(Report::new(&out, t))
}

pub fn polygon_symm(p: &Params) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        m: usize,
        two_m: usize,
        interior: i64,
        f: i64,
        witness: Vec<[i64; 2]>,
        certified: bool,
    }
    let m = p.m()?;
    let r = min_interior_symmetric(2 * m, p.node_budget.unwrap_or(DEFAULT_BUDGET))?;
    let out = Out {
        m,
        two_m: r.two_m,
        interior: r.interior,
        f: (r.interior + 1) / 2,
        witness: r.witness.vertices(),
        certified: r.certified,
    };
    let mut t = Table::new(&["m", "interior", "f", "certified", "vertex", "x", "y"]);
    for (i, v) in out.witness.iter().enumerate() {
        t.push(vec![
            m.to_string(),
            out.interior.to_string(),
            out.f.to_string(),
            out.certified.to_string(),
            i.to_string(),
            v[0].to_string(),
            v[1].to_string(),
        ]);
    }
    Ok(Report::new(&out, t))
}

pub fn multiplicity(p: &Params) -> Result<Report> {
    #[derive(Serialize)]
    struct Out {
        norm: NormSpec<f64>,
        budget: usize,
        #[serde(flatten)]
        profile: ProfileOut,
    }
    let norm = p.norm()?;
    let budget = p.budget.unwrap_or(20);
    let profile = multiplicity_profile(&norm, budget, p.tie_tolerance.unwrap_or(DEFAULT_TIE))?;
    let out = Out {
        norm,
        budget,
        profile: profile_out(&profile),
    };
    Ok(Report::new(&out, profile_table(&profile)))
}

pub fn sharpness(p: &Params) -> Result<Report> {
    let r = verify_sharpness::<f64>(p.m()?)?;
    let mut t = Table::new(&["m", "f_of_m", "group_m", "group_n", "strictly_convex", "level_points", "passed"]);
    t.push(vec![
        r.m.to_string(),
        r.f_of_m.to_string(),
        r.group.m.to_string(),
        r.group.n.to_string(),
        r.strictly_convex.to_string(),
        r.level_points.to_string(),
        r.passed.to_string(),
    ]);
    Ok(Report::new(&r, t))
}

pub fn convergence(p: &Params) -> Result<Report> {
    let study = convergence_study(
        &p.norm()?,
        p.k()?,
        p.grid.unwrap_or(DEFAULT_GRID),
        p.radius.unwrap_or(2),
        p.n_max.unwrap_or(2),
        p.directions.unwrap_or(64),
        epsilon_options(p),
    )?;
    let mut t = Table::new(&["k", "pinned_deviation", "circle_deviation"]);
    for (i, k) in study.ks.iter().enumerate() {
        t.push(vec![k.to_string(), num(study.pinned_deviation[i]), num(study.circle_deviation[i])]);
    }
    Ok(Report::new(&study, t))
}
