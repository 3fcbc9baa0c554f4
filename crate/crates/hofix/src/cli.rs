//! Command dispatch: resolve a parsed document into typed models, run one
//! of the commands against it, and render canonical text or the versioned
//! structured format. Identical input and configuration produce identical
//! bytes.

use crate::algebra::{Generators, Poly, Q};
use crate::cdga::{BasisLabel, FiniteAlgebra, FreeCdga};
use crate::dsl::{BaseDecl, BorelDecl, Diagnostic, Expr, ModelDocument, Span};
use crate::elliptic::{
    certify_component_elliptic, check_elliptic, EllipticityVerdict, WitnessConfig,
    WitnessDifferential,
};
use crate::equivariant::{
    lemma_aux_basis, localize_check, indecomposables, is_t_minimal, never_equivalence_check,
    pi_k_injective_check, BorelModel, EquivariantError, EquivariantPair, KModel,
};
use crate::section::{
    enumerate_retractions, identify_catalog, simplify_presentation, ComponentModel, RelCtx,
    RelPoly, RelativeSullivan, Retraction, SectionModel,
};
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::sync::Arc;

pub const SCHEMA: &str = "hofix/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SectionModel,
    Components,
    Cohomology,
    Elliptic,
    KModel,
    Indecomposables,
    LocalizeCheck,
    Identify,
    CertifyElliptic,
}

impl Command {
    pub fn from_name(name: &str) -> Option<Command> {
        match name {
            "section-model" => Some(Command::SectionModel),
            "components" => Some(Command::Components),
            "cohomology" => Some(Command::Cohomology),
            "elliptic" => Some(Command::Elliptic),
            "k-model" => Some(Command::KModel),
            "indecomposables" => Some(Command::Indecomposables),
            "localize-check" => Some(Command::LocalizeCheck),
            "identify" => Some(Command::Identify),
            "certify-elliptic" => Some(Command::CertifyElliptic),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub format: OutputFormat,
    pub strict: bool,
    pub pointed: bool,
    pub max_degree: i64,
    pub n_cap: u32,
    pub pure: bool,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            format: OutputFormat::Text,
            strict: false,
            pointed: false,
            max_degree: 8,
            n_cap: 16,
            pure: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub stdout: String,
    pub exit_code: i32,
}

fn top_span() -> Span {
    Span { line: 0, col: 0 }
}

fn fail(span: Span, message: impl Into<String>) -> Vec<Diagnostic> {
    vec![Diagnostic::error(span, message)]
}

/// Run one command against a parsed document.
pub fn run(
    command: Command,
    doc: &ModelDocument,
    config: &Config,
) -> Result<RunOutput, Vec<Diagnostic>> {
    match command {
        Command::SectionModel => cmd_section_model(doc, config),
        Command::Components => cmd_components(doc, config),
        Command::Cohomology => cmd_cohomology(doc, config),
        Command::Elliptic => cmd_elliptic(doc, config),
        Command::KModel => cmd_k_model(doc, config),
        Command::Indecomposables => cmd_indecomposables(doc, config),
        Command::LocalizeCheck => cmd_localize(doc, config),
        Command::Identify => cmd_identify(doc, config),
        Command::CertifyElliptic => cmd_certify(doc, config),
    }
}

// ---------------------------------------------------------------------------
// Document resolution

struct Names {
    fiber: Arc<Generators>,
    base_vars: BTreeMap<String, usize>,
    base_elems: BTreeMap<String, usize>,
}

fn resolve_base(doc: &ModelDocument) -> Result<Option<Arc<FiniteAlgebra>>, Vec<Diagnostic>> {
    match &doc.base {
        None => Ok(None),
        Some(BaseDecl::Poly {
            vars,
            truncate,
            span,
        }) => {
            let mut seen = std::collections::BTreeSet::new();
            for (name, degree) in vars {
                if *degree <= 0 || degree % 2 != 0 {
                    return Err(fail(
                        *span,
                        format!("base variable `{name}` must have even positive degree"),
                    ));
                }
                if !seen.insert(name.clone()) {
                    return Err(fail(*span, format!("duplicate base variable `{name}`")));
                }
            }
            if *truncate < 0 {
                return Err(fail(*span, "truncation must be non-negative"));
            }
            Ok(Some(Arc::new(FiniteAlgebra::truncated_polynomial(
                vars.clone(),
                *truncate,
            ))))
        }
        Some(BaseDecl::Table {
            elems,
            unit,
            products,
            diffs,
            span,
        }) => {
            let n = elems.len();
            let index: BTreeMap<&str, usize> = elems
                .iter()
                .enumerate()
                .map(|(i, (name, _))| (name.as_str(), i))
                .collect();
            if index.len() != n {
                return Err(fail(*span, "duplicate base element names"));
            }
            let unit_idx = match unit {
                Some(u) => *index
                    .get(u.as_str())
                    .ok_or_else(|| fail(*span, format!("unknown unit element `{u}`")))?,
                None => elems
                    .iter()
                    .position(|(_, d)| *d == 0)
                    .ok_or_else(|| fail(*span, "no degree-zero element for the unit"))?,
            };
            let degrees: Vec<i64> = elems.iter().map(|(_, d)| *d).collect();
            let mut table = vec![vec![vec![Q::zero(); n]; n]; n];
            for i in 0..n {
                table[unit_idx][i][i] = crate::algebra::q(1);
                if i != unit_idx {
                    table[i][unit_idx][i] = crate::algebra::q(1);
                }
            }
            let mut stated: Vec<(usize, usize)> = Vec::new();
            for (a, b, expr, pspan) in products {
                let (Some(&ia), Some(&ib)) = (index.get(a.as_str()), index.get(b.as_str()))
                else {
                    return Err(fail(*pspan, "unknown element in product"));
                };
                let value = eval_linear_in(expr, &index, n, *pspan)?;
                table[ia][ib] = value;
                stated.push((ia, ib));
            }
            // Fill unstated transposes with the graded-commutative value.
            for &(ia, ib) in &stated {
                if ia != ib && !stated.contains(&(ib, ia)) {
                    let sign = if degrees[ia] % 2 == 1 && degrees[ib] % 2 == 1 {
                        -crate::algebra::q(1)
                    } else {
                        crate::algebra::q(1)
                    };
                    table[ib][ia] = table[ia][ib].iter().map(|c| c * &sign).collect();
                }
            }
            let diff = if diffs.is_empty() {
                None
            } else {
                let mut d = vec![vec![Q::zero(); n]; n];
                for (g, expr, dspan) in diffs {
                    let Some(&ig) = index.get(g.as_str()) else {
                        return Err(fail(*dspan, format!("unknown element `{g}`")));
                    };
                    d[ig] = eval_linear_in(expr, &index, n, *dspan)?;
                }
                Some(d)
            };
            let labels = elems
                .iter()
                .map(|(name, _)| BasisLabel::Named(name.clone()))
                .collect();
            FiniteAlgebra::new(Vec::new(), labels, degrees, unit_idx, table, diff)
                .map(|a| Some(Arc::new(a)))
                .map_err(|e| fail(*span, e.to_string()))
        }
    }
}

fn eval_linear_in(
    expr: &Expr,
    index: &BTreeMap<&str, usize>,
    n: usize,
    span: Span,
) -> Result<Vec<Q>, Vec<Diagnostic>> {
    let mut out = vec![Q::zero(); n];
    for term in &expr.terms {
        match term.factors.as_slice() {
            [(name, 1)] => {
                let Some(&i) = index.get(name.as_str()) else {
                    return Err(fail(span, format!("unknown element `{name}`")));
                };
                out[i] = &out[i] + &term.coeff;
            }
            [] => {
                return Err(fail(span, "constants are not basis elements here"));
            }
            _ => {
                return Err(fail(
                    span,
                    "expected a linear combination of basis elements",
                ));
            }
        }
    }
    Ok(out)
}

fn fiber_generators(doc: &ModelDocument) -> Result<Arc<Generators>, Vec<Diagnostic>> {
    if doc.gens.is_empty() {
        return Err(fail(top_span(), "document declares no generators"));
    }
    let mut seen = std::collections::BTreeSet::new();
    for (name, _, span) in &doc.gens {
        if !seen.insert(name.clone()) {
            return Err(fail(*span, format!("duplicate generator `{name}`")));
        }
    }
    Ok(Generators::new(
        doc.gens
            .iter()
            .map(|(n, d, _)| (n.clone(), *d))
            .collect::<Vec<_>>(),
    ))
}

fn eval_rel(
    expr: &Expr,
    ctx: &Arc<RelCtx>,
    names: &Names,
    span: Span,
) -> Result<RelPoly, Vec<Diagnostic>> {
    let base = ctx.base();
    let mut out = RelPoly::zero(ctx);
    for term in &expr.terms {
        let mut acc = RelPoly::one(ctx).scale(&term.coeff);
        for (name, exp) in &term.factors {
            let factor = if let Some(v) = names.fiber.index_of(name) {
                RelPoly::fiber_gen(ctx, v)
            } else if let Some(&var) = names.base_vars.get(name) {
                let mut exps = vec![0u32; base.vars().len()];
                exps[var] = 1;
                match base.monomial_index(&exps) {
                    Some(i) => RelPoly::base_elem(ctx, i),
                    None => RelPoly::zero(ctx),
                }
            } else if let Some(&elem) = names.base_elems.get(name) {
                RelPoly::base_elem(ctx, elem)
            } else {
                return Err(fail(span, format!("unknown name `{name}`"))
                    .into_iter()
                    .map(|d| {
                        d.with_suggestion("declare it with `gen`, a base block, or `fixed gen`")
                    })
                    .collect());
            };
            for _ in 0..*exp {
                acc = acc.mul(&factor);
            }
        }
        out = out.add(&acc);
    }
    Ok(out)
}

fn names_for(base: &Arc<FiniteAlgebra>, fiber: &Arc<Generators>) -> Names {
    let base_vars: BTreeMap<String, usize> = base
        .vars()
        .iter()
        .enumerate()
        .map(|(i, (n, _))| (n.clone(), i))
        .collect();
    let base_elems: BTreeMap<String, usize> = (0..base.dim())
        .filter_map(|i| match base.label(i) {
            BasisLabel::Named(n) => Some((n.clone(), i)),
            BasisLabel::Monomial(_) => None,
        })
        .collect();
    Names {
        fiber: fiber.clone(),
        base_vars,
        base_elems,
    }
}

/// Build the document's fibration: a builder invocation, or base + fiber
/// declarations.
fn resolve_fibration(doc: &ModelDocument) -> Result<RelativeSullivan, Vec<Diagnostic>> {
    if let Some(borel) = &doc.borel {
        return resolve_borel(borel).map(|b| b.rel().clone());
    }
    let base = resolve_base(doc)?
        .ok_or_else(|| fail(top_span(), "document declares no base or builder"))?;
    let fiber = fiber_generators(doc)?;
    let ctx = RelCtx::new(base.clone(), fiber.clone());
    let names = names_for(&base, &fiber);
    let mut diff = vec![RelPoly::zero(&ctx); fiber.len()];
    let mut seen = std::collections::BTreeSet::new();
    for (name, expr, span) in &doc.diffs {
        let Some(v) = fiber.index_of(name) else {
            return Err(fail(*span, format!("unknown generator `{name}`")));
        };
        if !seen.insert(v) {
            return Err(fail(*span, format!("duplicate differential for `{name}`")));
        }
        diff[v] = eval_rel(expr, &ctx, &names, *span)?;
    }
    RelativeSullivan::new(base, fiber, diff).map_err(|e| fail(top_span(), e.to_string()))
}

fn resolve_borel(decl: &BorelDecl) -> Result<BorelModel, Vec<Diagnostic>> {
    let to_diag = |e: EquivariantError| fail(decl.span, e.to_string());
    match decl.family.as_str() {
        "odd_sphere" => BorelModel::odd_sphere(decl.n, decl.torus, decl.truncate).map_err(to_diag),
        "even_sphere" => {
            let lambda = match decl.lambdas.as_slice() {
                [] => Q::zero(),
                [l] => l.clone(),
                _ => {
                    return Err(fail(
                        decl.span,
                        "even_sphere takes a single lambda",
                    ))
                }
            };
            BorelModel::even_sphere(decl.n, lambda, decl.truncate).map_err(to_diag)
        }
        "cp" => {
            let mut lambdas = decl.lambdas.clone();
            lambdas.resize(decl.n.max(0) as usize, Q::zero());
            BorelModel::complex_projective(decl.n, lambdas, decl.truncate).map_err(to_diag)
        }
        other => Err(fail(decl.span, format!("unknown family `{other}`"))),
    }
}

/// The plain CDGA of a document: the fiber model of its fibration when a
/// base or builder is present, the declared generators otherwise.
fn resolve_cdga(doc: &ModelDocument) -> Result<FreeCdga, Vec<Diagnostic>> {
    if doc.borel.is_some() || doc.base.is_some() {
        return Ok(resolve_fibration(doc)?.fiber_model().clone());
    }
    let fiber = fiber_generators(doc)?;
    let dummy_base = Arc::new(FiniteAlgebra::truncated_polynomial(Vec::new(), 0));
    let ctx = RelCtx::new(dummy_base.clone(), fiber.clone());
    let names = names_for(&dummy_base, &fiber);
    let mut diff = vec![Poly::zero(&fiber); fiber.len()];
    for (name, expr, span) in &doc.diffs {
        let Some(v) = fiber.index_of(name) else {
            return Err(fail(*span, format!("unknown generator `{name}`")));
        };
        diff[v] = eval_rel(expr, &ctx, &names, *span)?.fiber_projection();
    }
    FreeCdga::new(fiber, diff).map_err(|e| fail(top_span(), e.to_string()))
}

fn resolve_retraction(
    doc: &ModelDocument,
    rel: &RelativeSullivan,
) -> Result<Option<Retraction>, Vec<Diagnostic>> {
    if doc.retracts.is_empty() {
        return Ok(None);
    }
    let base = rel.base();
    let fiber = rel.fiber();
    let names = names_for(base, fiber);
    let mut values = vec![vec![Q::zero(); base.dim()]; fiber.len()];
    let mut seen = std::collections::BTreeSet::new();
    for (name, expr, span) in &doc.retracts {
        let Some(v) = fiber.index_of(name) else {
            return Err(fail(*span, format!("unknown generator `{name}`")));
        };
        if !seen.insert(v) {
            return Err(fail(*span, format!("duplicate retraction value for `{name}`")));
        }
        let value = eval_rel(expr, rel.ctx(), &names, *span)?;
        let fiber_part = value.terms().any(|(_, m, _)| !m.is_one());
        if fiber_part {
            return Err(fail(*span, "retraction values must lie in the base"));
        }
        values[v] = value.base_part();
    }
    Retraction::new(rel, values)
        .map(Some)
        .map_err(|e| fail(doc.retracts[0].2, e.to_string()))
}

fn resolve_pair(doc: &ModelDocument) -> Result<EquivariantPair, Vec<Diagnostic>> {
    if let Some(borel) = &doc.borel {
        if let Some(j) = borel.fixed {
            if borel.family == "odd_sphere" {
                return EquivariantPair::odd_sphere(borel.n, j, borel.truncate)
                    .map_err(|e| fail(borel.span, e.to_string()));
            }
            return Err(fail(
                borel.span,
                "fixed=<j> builders exist for odd_sphere only; declare the fixed side explicitly",
            ));
        }
    }
    let total = resolve_fibration(doc)?;
    if doc.fixed_gens.is_empty() {
        return Err(fail(
            top_span(),
            "equivariant commands need a fixed side: `fixed gen ...` and `psi ...`",
        ));
    }
    let mut seen = std::collections::BTreeSet::new();
    for (name, _, span) in &doc.fixed_gens {
        if !seen.insert(name.clone()) {
            return Err(fail(*span, format!("duplicate fixed generator `{name}`")));
        }
    }
    let base = total.base().clone();
    let z_fiber = Generators::new(
        doc.fixed_gens
            .iter()
            .map(|(n, d, _)| (n.clone(), *d))
            .collect::<Vec<_>>(),
    );
    // The fixed side is trivial over the base: its differentials are plain
    // fiber polynomials.
    let dummy = Arc::new(FiniteAlgebra::truncated_polynomial(Vec::new(), 0));
    let dummy_ctx = RelCtx::new(dummy.clone(), z_fiber.clone());
    let dummy_names = names_for(&dummy, &z_fiber);
    let mut z_diff = vec![Poly::zero(&z_fiber); z_fiber.len()];
    for (name, expr, span) in &doc.fixed_diffs {
        let Some(z) = z_fiber.index_of(name) else {
            return Err(fail(*span, format!("unknown fixed generator `{name}`")));
        };
        z_diff[z] = eval_rel(expr, &dummy_ctx, &dummy_names, *span)?.fiber_projection();
    }
    let z_model =
        FreeCdga::new(z_fiber.clone(), z_diff).map_err(|e| fail(top_span(), e.to_string()))?;
    let fixed = RelativeSullivan::trivial(base.clone(), &z_model)
        .map_err(|e| fail(top_span(), e.to_string()))?;

    let names = names_for(&base, &z_fiber);
    let mut psi = vec![RelPoly::zero(fixed.ctx()); total.fiber().len()];
    for (name, expr, span) in &doc.psi {
        let Some(v) = total.fiber().index_of(name) else {
            return Err(fail(*span, format!("unknown generator `{name}` in psi")));
        };
        psi[v] = eval_rel(expr, fixed.ctx(), &names, *span)?;
    }
    EquivariantPair::new(total, fixed, psi).map_err(|e| fail(top_span(), e.to_string()))
}

// ---------------------------------------------------------------------------
// Rendering helpers

fn poly_json(p: &Poly) -> Value {
    let ctx = p.ctx();
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let mono: Vec<Value> = m
                .factors()
                .iter()
                .map(|&(g, e)| json!([ctx.name(g as usize), e]))
                .collect();
            json!({ "coeff": c.to_string(), "monomial": mono })
        })
        .collect();
    json!(terms)
}

fn cdga_text(cdga: &FreeCdga, out: &mut String) {
    use std::fmt::Write;
    for (i, g) in cdga.ctx().iter() {
        let _ = writeln!(out, "gen {} : {}", g.name, g.degree);
        let _ = i;
    }
    let mut any = false;
    for (i, _) in cdga.ctx().iter() {
        if !cdga.d_gen(i).is_zero() {
            let _ = writeln!(out, "d {} = {}", cdga.ctx().name(i), cdga.d_gen(i));
            any = true;
        }
    }
    if !any {
        out.push_str("# zero differential\n");
    }
}

fn cdga_json(cdga: &FreeCdga) -> Value {
    let gens: Vec<Value> = cdga
        .ctx()
        .iter()
        .map(|(_, g)| json!({ "name": g.name, "degree": g.degree }))
        .collect();
    let diffs: Vec<Value> = cdga
        .ctx()
        .iter()
        .filter(|(i, _)| !cdga.d_gen(*i).is_zero())
        .map(|(i, g)| json!({ "gen": g.name, "value": poly_json(cdga.d_gen(i)) }))
        .collect();
    json!({ "generators": gens, "differentials": diffs })
}

fn retraction_text(phi: &Retraction, rel: &RelativeSullivan) -> String {
    let parts: Vec<String> = phi
        .describe(rel)
        .into_iter()
        .map(|(g, v)| format!("{} = {}", g, v))
        .collect();
    if parts.is_empty() {
        "trivial".to_string()
    } else {
        parts.join(", ")
    }
}

fn output(config: &Config, text: String, value: Value, exit_code: i32) -> RunOutput {
    match config.format {
        OutputFormat::Text => RunOutput {
            stdout: text,
            exit_code,
        },
        OutputFormat::Structured => RunOutput {
            stdout: format!("{}\n", value),
            exit_code,
        },
    }
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_section_model(doc: &ModelDocument, config: &Config) -> Result<RunOutput, Vec<Diagnostic>> {
    let rel = resolve_fibration(doc)?;
    let model = SectionModel::build(&rel, config.pointed)
        .map_err(|e| fail(top_span(), e.to_string()))?;
    // The header is a comment so the output is itself a parseable document.
    let mut text = format!(
        "# section model ({}) with {} generators\n",
        if config.pointed { "pointed" } else { "unpointed" },
        model.cdga().ctx().len()
    );
    cdga_text(model.cdga(), &mut text);
    let value = json!({
        "schema": SCHEMA,
        "command": "section-model",
        "pointed": config.pointed,
        "model": cdga_json(model.cdga()),
    });
    Ok(output(config, text, value, 0))
}

fn components_of(
    doc: &ModelDocument,
) -> Result<(RelativeSullivan, SectionModel, Vec<Retraction>), Vec<Diagnostic>> {
    let rel = resolve_fibration(doc)?;
    let model =
        SectionModel::build(&rel, false).map_err(|e| fail(top_span(), e.to_string()))?;
    let retractions = match resolve_retraction(doc, &rel)? {
        Some(phi) => vec![phi],
        None => enumerate_retractions(&rel).map_err(|e| {
            fail(top_span(), e.to_string())
                .into_iter()
                .map(|d| d.with_suggestion("supply `retract <gen> = <value>` lines"))
                .collect::<Vec<_>>()
        })?,
    };
    Ok((rel, model, retractions))
}

fn cmd_components(doc: &ModelDocument, config: &Config) -> Result<RunOutput, Vec<Diagnostic>> {
    let (rel, model, retractions) = components_of(doc)?;
    use std::fmt::Write;
    let mut text = format!("components: {}\n", retractions.len());
    let mut comps = Vec::new();
    for (i, phi) in retractions.iter().enumerate() {
        let component = ComponentModel::compute(&model, phi)
            .map_err(|e| fail(top_span(), e.to_string()))?;
        let reduced = simplify_presentation(component.cdga());
        let identified = identify_catalog(&reduced);
        let _ = writeln!(text, "component {}", i + 1);
        let _ = writeln!(text, "  retraction: {}", retraction_text(phi, &rel));
        let gens: Vec<String> = component
            .cdga()
            .ctx()
            .iter()
            .map(|(_, g)| format!("{}:{}", g.name, g.degree))
            .collect();
        let _ = writeln!(text, "  generators: {}", gens.join(" "));
        for (g, _) in component.cdga().ctx().iter() {
            if !component.cdga().d_gen(g).is_zero() {
                let _ = writeln!(
                    text,
                    "  d {} = {}",
                    component.cdga().ctx().name(g),
                    component.cdga().d_gen(g)
                );
            }
        }
        let rgens: Vec<String> = reduced
            .ctx()
            .iter()
            .map(|(_, g)| format!("{}:{}", g.name, g.degree))
            .collect();
        let _ = writeln!(text, "  reduced: {}", rgens.join(" "));
        for (g, _) in reduced.ctx().iter() {
            if !reduced.d_gen(g).is_zero() {
                let _ = writeln!(
                    text,
                    "  reduced d {} = {}",
                    reduced.ctx().name(g),
                    reduced.d_gen(g)
                );
            }
        }
        let _ = writeln!(text, "  identified: {}", identified);
        comps.push(json!({
            "retraction": phi.describe(&rel).into_iter()
                .map(|(g, v)| json!({ "gen": g, "value": v }))
                .collect::<Vec<_>>(),
            "model": cdga_json(component.cdga()),
            "reduced": cdga_json(&reduced),
            "identified": identified.to_string(),
        }));
    }
    let value = json!({
        "schema": SCHEMA,
        "command": "components",
        "count": retractions.len(),
        "components": comps,
    });
    Ok(output(config, text, value, 0))
}

fn cmd_cohomology(doc: &ModelDocument, config: &Config) -> Result<RunOutput, Vec<Diagnostic>> {
    let cdga = resolve_cdga(doc)?;
    let h = cdga
        .cohomology(config.max_degree)
        .map_err(|e| fail(top_span(), e.to_string()))?;
    use std::fmt::Write;
    let mut text = format!("cohomology up to degree {}\n", config.max_degree);
    let mut rows = Vec::new();
    for c in &h {
        if c.dim == 0 {
            let _ = writeln!(text, "H^{}: dim 0", c.degree);
        } else {
            let reps: Vec<String> = c.representatives.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(text, "H^{}: dim {}, classes: {}", c.degree, c.dim, reps.join("; "));
        }
        rows.push(json!({
            "degree": c.degree,
            "dim": c.dim,
            "representatives": c.representatives.iter().map(poly_json).collect::<Vec<_>>(),
        }));
    }
    let value = json!({
        "schema": SCHEMA,
        "command": "cohomology",
        "max_degree": config.max_degree,
        "table": rows,
    });
    Ok(output(config, text, value, 0))
}

fn cmd_elliptic(doc: &ModelDocument, config: &Config) -> Result<RunOutput, Vec<Diagnostic>> {
    let cdga = resolve_cdga(doc)?;
    let which = if config.pure {
        WitnessDifferential::Pure
    } else {
        WitnessDifferential::Full
    };
    let witness_config = WitnessConfig {
        n_cap: config.n_cap,
        ..WitnessConfig::default()
    };
    let verdict = check_elliptic(&cdga, which, &witness_config)
        .map_err(|e| fail(top_span(), e.to_string()))?;
    use std::fmt::Write;
    let mut text = String::new();
    let differential = if config.pure { "pure" } else { "full" };
    let mut exit = 0;
    match &verdict {
        EllipticityVerdict::Elliptic(ws) => {
            let _ = writeln!(
                text,
                "elliptic: yes ({} differential, N_cap {})",
                differential, config.n_cap
            );
            for w in ws {
                let _ = writeln!(
                    text,
                    "witness {}: N={}, psi = {}, theta = {}",
                    cdga.ctx().name(w.generator),
                    w.exponent,
                    w.psi,
                    w.theta
                );
            }
        }
        EllipticityVerdict::Inconclusive { witnesses, failed } => {
            let _ = writeln!(
                text,
                "elliptic: inconclusive ({} differential, N_cap {})",
                differential, config.n_cap
            );
            for w in witnesses {
                let _ = writeln!(
                    text,
                    "witness {}: N={}, psi = {}, theta = {}",
                    cdga.ctx().name(w.generator),
                    w.exponent,
                    w.psi,
                    w.theta
                );
            }
            let names: Vec<&str> = failed.iter().map(|&g| cdga.ctx().name(g)).collect();
            let _ = writeln!(text, "no witness up to cap: {}", names.join(", "));
            if config.strict {
                exit = 2;
            }
        }
    }
    let value = json!({
        "schema": SCHEMA,
        "command": "elliptic",
        "differential": differential,
        "n_cap": config.n_cap,
        "elliptic": verdict.is_elliptic(),
        "witnesses": verdict.witnesses().iter().map(|w| json!({
            "generator": cdga.ctx().name(w.generator),
            "exponent": w.exponent,
            "psi": poly_json(&w.psi),
            "theta": poly_json(&w.theta),
        })).collect::<Vec<_>>(),
    });
    Ok(output(config, text, value, exit))
}

fn cmd_k_model(doc: &ModelDocument, config: &Config) -> Result<RunOutput, Vec<Diagnostic>> {
    let pair = resolve_pair(doc)?;
    for flag in pair.validity_flags() {
        // Input-validity warnings, not failures.
        eprintln_flag(&flag);
    }
    let model = KModel::build(&pair).map_err(|e| fail(top_span(), e.to_string()))?;
    use std::fmt::Write;
    let mut text = String::from("model of the fixed-point inclusion\n");
    let sec_ctx = model.section().cdga().ctx();
    let mut images = Vec::new();
    for (s, _) in sec_ctx.iter() {
        let _ = writeln!(text, "k({}) = {}", sec_ctx.name(s), model.k_image(s));
        images.push(json!({
            "gen": sec_ctx.name(s),
            "value": poly_json(model.k_image(s)),
        }));
    }
    let report = pi_k_injective_check(&model);
    let _ = writeln!(
        text,
        "injective on rational homotopy: {}",
        if report.injective { "yes" } else { "no" }
    );
    for (d, dim, rank) in &report.per_degree {
        let _ = writeln!(text, "degree {}: fixed dim {}, rank {}", d, dim, rank);
    }
    let never = never_equivalence_check(&pair, true);
    match &never {
        Ok(n) => {
            let _ = writeln!(
                text,
                "never a rational homotopy equivalence: element {} of degree {} maps to zero",
                n.element, n.degree
            );
        }
        Err(e) => {
            let _ = writeln!(text, "never-equivalence check skipped: {}", e);
        }
    }
    let value = json!({
        "schema": SCHEMA,
        "command": "k-model",
        "images": images,
        "injective": report.injective,
        "per_degree": report.per_degree.iter()
            .map(|(d, dim, rank)| json!({ "degree": d, "dim": dim, "rank": rank }))
            .collect::<Vec<_>>(),
        "never_equivalence": match &never {
            Ok(n) => json!({ "verdict": "not_equivalence", "element": n.element.to_string(), "degree": n.degree }),
            Err(e) => json!({ "verdict": "skipped", "reason": e.to_string() }),
        },
    });
    Ok(output(config, text, value, 0))
}

fn eprintln_flag(flag: &str) {
    eprintln!("warning: {}", flag);
}

fn cmd_indecomposables(
    doc: &ModelDocument,
    config: &Config,
) -> Result<RunOutput, Vec<Diagnostic>> {
    let rel = resolve_fibration(doc)?;
    let phi = resolve_retraction(doc, &rel)?;
    let indec = indecomposables(&rel, phi.as_ref())
        .map_err(|e| fail(top_span(), e.to_string()))?;
    use std::fmt::Write;
    let vars: Vec<String> = indec
        .vars()
        .iter()
        .map(|(_, g)| g.name.clone())
        .collect();
    let mut text = format!("indecomposables over Q[{}]\n", vars.join(", "));
    let fiber = indec.fiber().clone();
    let mut entries = Vec::new();
    for w in 0..fiber.len() {
        for v in 0..fiber.len() {
            let e = indec.d1().get(w, v);
            if !e.is_zero() {
                let _ = writeln!(
                    text,
                    "D1[{}][{}] = {}",
                    fiber.name(w),
                    fiber.name(v),
                    e
                );
                entries.push(json!({
                    "row": fiber.name(w),
                    "col": fiber.name(v),
                    "value": poly_json(e),
                }));
            }
        }
    }
    let minimal = is_t_minimal(&indec);
    let _ = writeln!(text, "T-minimal: {}", if minimal { "yes" } else { "no" });
    let value = json!({
        "schema": SCHEMA,
        "command": "indecomposables",
        "variables": vars,
        "entries": entries,
        "t_minimal": minimal,
    });
    Ok(output(config, text, value, 0))
}

fn cmd_localize(doc: &ModelDocument, config: &Config) -> Result<RunOutput, Vec<Diagnostic>> {
    let pair = resolve_pair(doc)?;
    let report = localize_check(&pair).map_err(|e| fail(top_span(), e.to_string()))?;
    // The auxiliary triples double as a readable summary for circle pairs.
    let triples = lemma_aux_basis(&pair).ok();
    use std::fmt::Write;
    let mut text = String::from("borel localization check\n");
    let _ = writeln!(
        text,
        "indecomposable K-homology: even {}, odd {}",
        report.indec_even, report.indec_odd
    );
    let _ = writeln!(
        text,
        "fixed-side generators: even {}, odd {}",
        report.z_even, report.z_odd
    );
    let _ = writeln!(
        text,
        "quasi-isomorphism: {}",
        if report.quasi_iso { "yes" } else { "no" }
    );
    if let (Some(e), Some(o)) = (report.full_even, report.full_odd) {
        let _ = writeln!(text, "full K-cohomology rank: even {}, odd {}", e, o);
    }
    if let Some(ts) = &triples {
        for t in ts {
            let _ = writeln!(
                text,
                "psi({}) = a^{} {} + decomposables",
                t.w,
                t.exponent,
                pair.fixed().fiber().name(t.z)
            );
        }
    }
    let value = json!({
        "schema": SCHEMA,
        "command": "localize-check",
        "indecomposable_rank": { "even": report.indec_even, "odd": report.indec_odd },
        "fixed_side": { "even": report.z_even, "odd": report.z_odd },
        "quasi_iso": report.quasi_iso,
        "full_rank": match (report.full_even, report.full_odd) {
            (Some(e), Some(o)) => json!({ "even": e, "odd": o }),
            _ => Value::Null,
        },
        "triples": triples.map(|ts| ts.iter().map(|t| json!({
            "w": t.w.to_string(),
            "z": pair.fixed().fiber().name(t.z),
            "exponent": t.exponent,
        })).collect::<Vec<_>>()).unwrap_or_default(),
    });
    Ok(output(config, text, value, 0))
}

fn cmd_identify(doc: &ModelDocument, config: &Config) -> Result<RunOutput, Vec<Diagnostic>> {
    let cdga = resolve_cdga(doc)?;
    let reduced = simplify_presentation(&cdga);
    let identified = identify_catalog(&reduced);
    use std::fmt::Write;
    let mut text = String::new();
    let gens: Vec<String> = reduced
        .ctx()
        .iter()
        .map(|(_, g)| format!("{}:{}", g.name, g.degree))
        .collect();
    let _ = writeln!(text, "reduced: {}", gens.join(" "));
    for (g, _) in reduced.ctx().iter() {
        if !reduced.d_gen(g).is_zero() {
            let _ = writeln!(text, "d {} = {}", reduced.ctx().name(g), reduced.d_gen(g));
        }
    }
    let _ = writeln!(text, "identified: {}", identified);
    let value = json!({
        "schema": SCHEMA,
        "command": "identify",
        "reduced": cdga_json(&reduced),
        "identified": identified.to_string(),
    });
    Ok(output(config, text, value, 0))
}

fn cmd_certify(doc: &ModelDocument, config: &Config) -> Result<RunOutput, Vec<Diagnostic>> {
    let (rel, model, retractions) = components_of(doc)?;
    let witness_config = WitnessConfig {
        n_cap: config.n_cap,
        ..WitnessConfig::default()
    };
    let fiber_verdict = check_elliptic(
        rel.fiber_model(),
        WitnessDifferential::Pure,
        &witness_config,
    )
    .map_err(|e| fail(top_span(), e.to_string()))?;
    use std::fmt::Write;
    let mut text = String::new();
    if !fiber_verdict.is_elliptic() {
        let _ = writeln!(text, "fiber: inconclusive up to N_cap {}", config.n_cap);
        let exit = if config.strict { 2 } else { 0 };
        let value = json!({
            "schema": SCHEMA,
            "command": "certify-elliptic",
            "fiber_elliptic": false,
        });
        return Ok(output(config, text, value, exit));
    }
    let _ = writeln!(
        text,
        "fiber: elliptic (pure differential, N_cap {})",
        config.n_cap
    );
    let mut comps = Vec::new();
    for (i, phi) in retractions.iter().enumerate() {
        let component = ComponentModel::compute(&model, phi)
            .map_err(|e| fail(top_span(), e.to_string()))?;
        let lifts = certify_component_elliptic(&component, fiber_verdict.witnesses())
            .map_err(|e| fail(top_span(), e.to_string()))?;
        let _ = writeln!(
            text,
            "component {} (retraction: {}): elliptic via {} lifted witness{}",
            i + 1,
            retraction_text(phi, &rel),
            lifts.len(),
            if lifts.len() == 1 { "" } else { "es" }
        );
        let mut lift_json = Vec::new();
        for l in &lifts {
            let _ = writeln!(
                text,
                "  lift {}: N={}, eta = {}, remainder = {}",
                component.cdga().ctx().name(l.target),
                l.exponent,
                l.eta,
                l.remainder
            );
            lift_json.push(json!({
                "target": component.cdga().ctx().name(l.target),
                "exponent": l.exponent,
                "eta": poly_json(&l.eta),
                "remainder": poly_json(&l.remainder),
            }));
        }
        comps.push(json!({
            "retraction": phi.describe(&rel).into_iter()
                .map(|(g, v)| json!({ "gen": g, "value": v }))
                .collect::<Vec<_>>(),
            "elliptic": true,
            "lifts": lift_json,
        }));
    }
    let value = json!({
        "schema": SCHEMA,
        "command": "certify-elliptic",
        "fiber_elliptic": true,
        "components": comps,
    });
    Ok(output(config, text, value, 0))
}
