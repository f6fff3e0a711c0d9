//! Command orchestration. Each section appends tables, checks and sign
//! tables; errors inside a section become a failed entry named after it.

use std::cell::OnceCell;
use std::collections::BTreeMap;
use std::sync::Arc;

use clap::ValueEnum;
use poisson_workbench::bv::{Bv, BvError};
use poisson_workbench::calculus::{self, exterior, polynomial, CalculusError, PoissonStructure};
use poisson_workbench::checks::Check;
use poisson_workbench::graded::{CarrierKind, Element};
use poisson_workbench::gravity::{epsilon_ij, GravityError, NegativeCyclic};
use poisson_workbench::homology::{Complex, Duality, EngineError};
use poisson_workbench::identities::{self, CapIdentity};
use poisson_workbench::koszul::{self, KoszulError, KoszulSquare, SignTable};
use poisson_workbench::rational::{self, Rational};
use poisson_workbench::spectral::{self, ModularSpectrum};
use thiserror::Error;

use crate::report::{CheckEntry, ModularSection, Report, Row, SignCell, SignEntry, Status, StructureSection, Table, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Check,
    Modular,
    Cohomology,
    Homology,
    Duality,
    Mixed,
    Bv,
    Gravity,
    Koszul,
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Modular => "modular",
            Command::Cohomology => "cohomology",
            Command::Homology => "homology",
            Command::Duality => "duality",
            Command::Mixed => "mixed",
            Command::Bv => "bv",
            Command::Gravity => "gravity",
            Command::Koszul => "koszul",
            Command::All => "all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    pub window: i64,
    pub arity: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config { window: 4, arity: 4 }
    }
}

#[derive(Debug, Error)]
enum SectionError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Bv(#[from] BvError),
    #[error(transparent)]
    Gravity(#[from] GravityError),
    #[error(transparent)]
    Koszul(#[from] KoszulError),
}

type Section = Result<(), SectionError>;

#[derive(Default)]
struct Builder {
    tables: Vec<Table>,
    checks: Vec<CheckEntry>,
    signs: Vec<SignEntry>,
}

impl Builder {
    fn check(&mut self, c: Check) {
        self.checks.push(c.into());
    }

    fn labelled(&mut self, mut c: Check, label: &str) {
        c.name = format!("{} [{label}]", c.name);
        self.check(c);
    }

    fn section(&mut self, name: &str, f: impl FnOnce(&mut Builder) -> Section) {
        if let Err(e) = f(self) {
            self.checks.push(CheckEntry::failed(name, e.to_string()));
        }
    }
}

fn modular_vector(pi: &PoissonStructure) -> Result<Element, CalculusError> {
    match pi.kind() {
        CarrierKind::Polynomial => polynomial::modular_vector(pi),
        CarrierKind::Exterior => exterior::modular_vector(pi),
    }
}

struct Context {
    input: PoissonStructure,
    input_nu: Element,
    spectrum: ModularSpectrum,
    /// The input, rewritten in eigencoordinates when its modular vector is
    /// semisimple but not diagonal.
    work: PoissonStructure,
    nu: Element,
    eigenvalues: Option<Vec<Rational>>,
    jacobi: Result<(), Element>,
    config: Config,
    duality: OnceCell<Arc<Duality>>,
}

impl Context {
    fn new(input: &PoissonStructure, config: Config) -> Result<Self, CalculusError> {
        let input_nu = modular_vector(input)?;
        let spectrum = spectral::analyze_modular(&input_nu);
        let (work, nu, eigenvalues) = if !spectrum.is_semisimple() {
            (input.clone(), input_nu.clone(), None)
        } else if let Some(d) = spectral::diagonalize(input, &spectrum)? {
            let nu = modular_vector(&d)?;
            let eigenvalues = spectral::analyze_modular(&nu).eigenvalues;
            (d, nu, Some(eigenvalues))
        } else {
            (input.clone(), input_nu.clone(), Some(spectrum.eigenvalues.clone()))
        };
        Ok(Context {
            input: input.clone(),
            input_nu,
            jacobi: input.jacobi_check(),
            spectrum,
            work,
            nu,
            eigenvalues,
            config,
            duality: OnceCell::new(),
        })
    }

    fn duality(&self) -> Result<Arc<Duality>, EngineError> {
        if let Some(d) = self.duality.get() {
            return Ok(Arc::clone(d));
        }
        let d = Arc::new(Duality::new(&self.work, &self.nu, self.eigenvalues.clone(), self.config.window)?);
        Ok(Arc::clone(self.duality.get_or_init(|| d)))
    }

    fn semisimple_gate(&self) -> Option<String> {
        (!self.spectrum.is_semisimple())
            .then(|| format!("precondition: modular vector is {}", self.spectrum.verdict.label()))
    }

    fn modular_section(&self) -> ModularSection {
        let s = &self.spectrum;
        let matrix = s.matrix.as_ref().map(|m| {
            (0..m.rows())
                .map(|i| m.row(i).iter().map(rational::format).collect())
                .collect()
        });
        ModularSection {
            nu: self.input_nu.to_string(),
            verdict: s.verdict.label().to_string(),
            eigenvalues: s.eigenvalues.iter().map(rational::format).collect(),
            matrix,
            diagonalized: s.change_of_coordinates.as_ref().map(|_| self.work.bivector().to_string()),
        }
    }
}

pub fn run(command: Command, pi: &PoissonStructure, config: Config) -> Report {
    let mut b = Builder::default();
    let ctx = match Context::new(pi, config) {
        Ok(ctx) => ctx,
        Err(e) => {
            b.checks.push(CheckEntry::failed("modular vector", e.to_string()));
            return assemble(command, pi, config, None, Status::Skipped, b);
        }
    };
    let jacobi = jacobi_entry(&ctx);
    let jacobi_status = jacobi.status;
    b.checks.push(jacobi);

    use Command::*;
    let sections = match command {
        All => vec![Modular, Cohomology, Homology, Duality, Mixed, Bv, Gravity, Koszul],
        Check => Vec::new(),
        other => vec![other],
    };
    for section in sections {
        if section != Modular && ctx.jacobi.is_err() {
            b.checks.push(CheckEntry::skipped(section.name(), "precondition: Jacobi identity fails"));
            continue;
        }
        match section {
            Modular => b.section("modular", |b| modular(&ctx, b)),
            Cohomology => b.section("cohomology", |b| cohomology(&ctx, b)),
            Homology => b.section("homology", |b| homology(&ctx, b)),
            Duality => b.section("duality", |b| duality(&ctx, b)),
            Mixed => gated(&ctx, &mut b, "mixed complex", mixed),
            Bv => gated(&ctx, &mut b, "BV suite", bv),
            Gravity => gated(&ctx, &mut b, "gravity suite", gravity),
            _ => b.section("Koszul duality", |b| koszul_section(&ctx, b, command == Koszul)),
        }
    }
    let modular = ctx.modular_section();
    assemble(command, pi, config, Some(modular), jacobi_status, b)
}

fn gated(ctx: &Context, b: &mut Builder, name: &str, f: fn(&Context, &mut Builder) -> Section) {
    match ctx.semisimple_gate() {
        Some(reason) => b.checks.push(CheckEntry::skipped(name, reason)),
        None => b.section(name, |b| f(ctx, b)),
    }
}

fn assemble(
    command: Command,
    pi: &PoissonStructure,
    config: Config,
    modular: Option<ModularSection>,
    jacobi: Status,
    b: Builder,
) -> Report {
    let structure = StructureSection {
        n: pi.n(),
        variables: pi.carrier().coordinate_names().to_vec(),
        parity: match pi.kind() {
            CarrierKind::Polynomial => "even",
            CarrierKind::Exterior => "odd",
        }
        .to_string(),
        bivector: pi.bivector().to_string(),
        quadratic: pi.quadratic_constants().is_some(),
        jacobi,
    };
    Report {
        command: command.name().to_string(),
        window: config.window,
        arity: config.arity,
        structure,
        modular,
        verdict: Verdict::of(&b.checks),
        tables: b.tables,
        checks: b.checks,
        signs: b.signs,
    }
}

fn jacobi_entry(ctx: &Context) -> CheckEntry {
    let mut check = Check::new("Jacobi identity [pi, pi] = 0");
    check.record(ctx.jacobi.is_ok(), || match &ctx.jacobi {
        Err(e) => format!("[pi, pi] = {e}"),
        Ok(()) => unreachable!(),
    });
    check.into()
}

fn parity(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn sign_label(s: i64) -> String {
    match s {
        1 => "+".into(),
        -1 => "-".into(),
        0 => "0".into(),
        _ => "mixed".into(),
    }
}

fn sign_entry(name: impl Into<String>, table: &SignTable) -> SignEntry {
    SignEntry {
        name: name.into(),
        signs: table
            .0
            .iter()
            .map(|(p, s)| SignCell {
                key: p.to_string(),
                sign: sign_label(*s),
            })
            .collect(),
    }
}

fn modular(ctx: &Context, b: &mut Builder) -> Section {
    let mut check = Check::new("[nu, pi] = 0");
    let bracket = calculus::schouten(&ctx.input_nu, ctx.input.bivector())?;
    check.record(bracket.is_zero(), || format!("[nu, pi] = {bracket}"));
    b.check(check);
    Ok(())
}

fn cohomology(ctx: &Context, b: &mut Builder) -> Section {
    let d = ctx.duality()?;
    let mut rows = Vec::new();
    for a in d.cochain.addresses()? {
        rows.push(Row::at(&a, vec![d.cochain.homology(&a)?.dim(), d.cochain.basis(&a)?.len()]));
    }
    b.tables.push(Table {
        name: "cohomology".into(),
        columns: vec!["H".into(), "cochains".into()],
        rows,
    });
    b.check(identities::check_square_zero(&d.cochain)?);
    Ok(())
}

fn homology(ctx: &Context, b: &mut Builder) -> Section {
    let d = ctx.duality()?;
    let mut rows = Vec::new();
    for a in d.chain.addresses()? {
        rows.push(Row::at(&a, vec![d.chain.homology(&a)?.dim(), d.chain.basis(&a)?.len()]));
    }
    b.tables.push(Table {
        name: "twisted homology".into(),
        columns: vec!["H".into(), "chains".into()],
        rows,
    });
    let mut twisted = identities::check_square_zero(&d.chain)?;
    twisted.name = format!("twisted {}", twisted.name);
    b.check(twisted);
    let plain = Complex::new(&ctx.work, d.chain.variant(), None, ctx.eigenvalues.clone(), ctx.config.window)?;
    let mut untwisted = identities::check_square_zero(&plain)?;
    untwisted.name = format!("untwisted {}", untwisted.name);
    b.check(untwisted);
    Ok(())
}

fn duality(ctx: &Context, b: &mut Builder) -> Section {
    let d = ctx.duality()?;
    let mut rows = Vec::new();
    let mut chain_map = Check::new("duality map is a chain map up to one sign per degree");
    let mut signs: BTreeMap<i64, i64> = BTreeMap::new();
    for a in d.cochain.addresses()? {
        let pair = d.dual_address(&a);
        let rank = d.map_matrix(&a)?.rank();
        rows.push(Row::paired(&a, &pair, vec![d.cochain.homology(&a)?.dim(), d.chain.homology(&pair)?.dim(), rank]));
        match d.chain_map_sign(&a) {
            Ok(0) => chain_map.record(true, String::new),
            Ok(s) => {
                let entry = signs.entry(a.degree).or_insert(s);
                let consistent = *entry == s;
                chain_map.record(consistent, || format!("sign {s} at {a} against {} elsewhere in degree {}", entry, a.degree));
            }
            Err(EngineError::NotChainMap(at)) => chain_map.record(false, || format!("no sign at {at}")),
            Err(e) => return Err(e.into()),
        }
    }
    b.tables.push(Table {
        name: "duality".into(),
        columns: vec!["H^p".into(), "H_{n-p}".into(), "map rank".into()],
        rows,
    });
    b.check(identities::check_cap_identity(&d, &ctx.nu, CapIdentity::Literal)?);
    b.check(identities::check_cap_identity(&d, &ctx.nu, CapIdentity::Uniform)?);
    b.check(identities::check_duality(&d)?);
    b.check(chain_map);
    b.signs.push(sign_entry("duality chain-map sign", &SignTable(signs)));
    Ok(())
}

fn mixed(ctx: &Context, b: &mut Builder) -> Section {
    let d = ctx.duality()?;
    let mc = spectral::weight_zero_subcomplex(Arc::clone(&d))?;
    let mut axioms = Check::new("mixed complex axioms b^2 = B^2 = bB + Bb = 0");
    match mc.check_axioms() {
        Ok(slices) => axioms.checked = slices,
        Err(w) => axioms.fail(w),
    }
    b.check(axioms);

    let mut homotopy = Check::new("bB + Bb = lambda Id");
    let mut projection = Check::new("(1/lambda)(bB + Bb) = Id on lambda != 0 slices");
    for a in d.chain.addresses()? {
        homotopy.record(spectral::homotopy_identity_check(&d, &a)?, || format!("at {a}"));
        if a.lambda != rational::zero() && d.chain.weight_shift() == 0 {
            projection.record(spectral::projection_homotopy_check(&d, &a)?, || format!("at {a}"));
        }
    }
    b.check(homotopy);
    b.check(projection);

    let mut quasi = Check::new("weight-0 subcomplex is quasi-isomorphic");
    let mut rows = Vec::new();
    for r in spectral::quasi_isomorphism_table(&d)? {
        quasi.record(r.full == r.weight_zero, || format!("at p={}, w={}: {} vs {}", r.degree, r.weight, r.full, r.weight_zero));
        rows.push(Row::at(&mc.address(r.degree, r.weight), vec![r.full, r.weight_zero]));
    }
    b.tables.push(Table {
        name: "weight-0 quasi-isomorphism".into(),
        columns: vec!["H(CP)".into(), "H(CP^0)".into()],
        rows,
    });
    b.check(quasi);
    Ok(())
}

fn bv_side(b: &mut Builder, duality: Arc<Duality>, label: &str) -> Section {
    let bv = Bv::new(duality);
    let basis = bv.basis()?;
    b.labelled(bv.check_delta_unit()?, label);
    b.labelled(bv.check_delta_squared(&basis)?, label);
    b.labelled(bv.check_seven_term(&basis)?, label);
    b.labelled(bv.check_antisymmetry(&basis)?, label);
    b.labelled(bv.check_cup(&basis)?, label);
    b.labelled(bv.check_bracket_against_schouten(&basis, 1)?, label);
    let cells = bv
        .bracket_sign_table(&basis)?
        .into_iter()
        .map(|((p, q), s)| SignCell {
            key: format!("{p},{q}"),
            sign: s.map_or_else(|| "mixed".into(), sign_label),
        })
        .collect();
    b.signs.push(SignEntry {
        name: format!("generated bracket / Schouten bracket [{label}]"),
        signs: cells,
    });
    Ok(())
}

fn bv(ctx: &Context, b: &mut Builder) -> Section {
    bv_side(b, ctx.duality()?, "primal")?;
    if ctx.work.kind() == CarrierKind::Exterior {
        return Ok(());
    }
    match koszul::koszul_dual(&ctx.work) {
        Ok(pair) => {
            let nu = exterior::modular_vector(&pair.dual)?;
            let dual = Duality::new(&pair.dual, &nu, ctx.eigenvalues.clone(), ctx.config.window)?;
            bv_side(b, Arc::new(dual), "Koszul dual")
        }
        Err(e) => {
            b.checks.push(CheckEntry::skipped("BV suite [Koszul dual]", format!("precondition: {e}")));
            Ok(())
        }
    }
}

fn gravity(ctx: &Context, b: &mut Builder) -> Section {
    let d = ctx.duality()?;
    let nc = NegativeCyclic::new(spectral::weight_zero_subcomplex(Arc::clone(&d))?);
    let n = ctx.work.n() as i64;
    let mut rows = Vec::new();
    for m in 0..=n {
        for w in nc.weights() {
            let a = nc.mixed().address(m, w);
            rows.push(Row::at(&a, vec![nc.homology(m, w)?.dim(), d.chain.homology(&a)?.dim()]));
        }
    }
    b.tables.push(Table {
        name: "negative cyclic homology".into(),
        columns: vec!["HC^-".into(), "HH".into()],
        rows,
    });
    b.check(nc.check_total_square(-1..=n + 1)?);
    b.check(nc.check_short_exact(-1..=n)?);
    b.check(nc.check_long_exact(-1..=n)?);
    let basis = nc.window_basis()?;
    b.check(nc.check_skew_symmetry(&basis)?);
    for c in nc.check_relations(&basis, ctx.config.arity)? {
        b.check(c);
    }

    // eps_ij for classes of degree 0, as displayed and as applied in the relations
    let (mut displayed, mut applied) = (Vec::new(), Vec::new());
    for k in 2..=ctx.config.arity {
        let degrees = vec![0; k];
        for i in 1..=k {
            for j in i + 1..=k {
                let eps = epsilon_ij(&degrees, i, j);
                let key = format!("n={k} ({i},{j})");
                displayed.push(SignCell {
                    key: key.clone(),
                    sign: sign_label(parity(eps)),
                });
                let total = eps + (i + j) as i64 - 3 + k as i64 - 2;
                applied.push(SignCell {
                    key,
                    sign: sign_label(parity(total)),
                });
            }
        }
    }
    b.signs.push(SignEntry {
        name: "eps_ij displayed, |x| = 0".into(),
        signs: displayed,
    });
    b.signs.push(SignEntry {
        name: "eps_ij applied, |x| = 0".into(),
        signs: applied,
    });
    Ok(())
}

fn koszul_section(ctx: &Context, b: &mut Builder, explicit: bool) -> Section {
    let pair = match koszul::koszul_dual(&ctx.work) {
        Ok(pair) => pair,
        Err(e) if explicit => {
            b.checks.push(CheckEntry::failed("Koszul dual", format!("rejected: {e}")));
            return Ok(());
        }
        Err(e) => {
            b.checks.push(CheckEntry::skipped("Koszul duality", format!("precondition: {e}")));
            return Ok(());
        }
    };
    let mut jacobi = Check::new("Jacobi identity holds for pi and pi^!");
    jacobi.record(pair.primal_jacobi && pair.dual_jacobi, || {
        format!("pi: {}, pi^!: {}", pair.primal_jacobi, pair.dual_jacobi)
    });
    b.check(jacobi);
    b.check(koszul::check_generators(&pair));
    b.check(koszul::modular_correspondence_check(&pair)?);

    let square = KoszulSquare::new(pair, ctx.config.window)?;
    b.check(square.check_bijective()?);
    for (name, (check, table)) in [
        ("psi chain-map sign", square.psi_chain_map()?),
        ("phi chain-map sign", square.phi_chain_map()?),
        ("duality square sign", square.square_check()?),
    ] {
        b.check(check);
        b.signs.push(sign_entry(name, &table));
    }
    let mut rows = Vec::new();
    for r in square.dimension_table()? {
        rows.push(Row::paired(
            &r.address,
            &r.chain_address,
            vec![r.cohomology, r.dual_cohomology, r.homology, r.dual_homology],
        ));
    }
    b.tables.push(Table {
        name: "Koszul dimensions".into(),
        columns: vec!["HP".into(), "HP^!".into(), "H".into(), "H^!".into()],
        rows,
    });
    b.check(square.check_dimensions()?);

    let nu_dual = exterior::modular_vector(&square.pair.dual)?;
    b.check(identities::check_square_zero(&square.dual.cochain)?);
    b.check(identities::check_square_zero(&square.dual.chain)?);
    b.check(identities::check_cap_identity(&square.dual, &nu_dual, CapIdentity::Literal)?);
    b.check(identities::check_duality(&square.dual)?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::input::parse_input;

    const LOG_PLANE: &str = r#"{"variables":["x1","x2"],"parity":"even","bivector":[{"coeff":"1","monomial":{"x1":1,"x2":1},"frame":[1,2]}]}"#;

    #[test]
    fn check_command() {
        let report = run(Command::Check, &parse_input(LOG_PLANE).unwrap(), Config::default());
        assert_eq!(report.checks.len(), 1);
        assert_eq!(report.verdict.status, Status::Pass);
        assert_eq!(report.modular.unwrap().eigenvalues, ["1", "-1"]);
    }

    #[test]
    fn failing_jacobi_gates_the_rest() {
        let doc = r#"{"variables":["x1","x2","x3"],"parity":"even","bivector":[
            {"coeff":"1","monomial":{"x1":1,"x2":1},"frame":[1,2]},
            {"coeff":"1","monomial":{"x1":1,"x3":1},"frame":[2,3]}]}"#;
        let report = run(Command::Cohomology, &parse_input(doc).unwrap(), Config::default());
        assert_eq!(report.checks[0].status, Status::Fail);
        assert_eq!(report.checks[1].status, Status::Skipped);
        assert_eq!(report.exit_code(false), 1);
    }

    #[test]
    fn epsilon_tables_are_reported() {
        let config = Config { window: 1, arity: 3 };
        let report = run(Command::Gravity, &parse_input(LOG_PLANE).unwrap(), config);
        let names: Vec<&str> = report.signs.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["eps_ij displayed, |x| = 0", "eps_ij applied, |x| = 0"]);
        let applied: Vec<&str> = report.signs[1].signs.iter().map(|c| c.sign.as_str()).collect();
        assert_eq!(applied, ["+", "-", "-", "-"]);
    }
}
