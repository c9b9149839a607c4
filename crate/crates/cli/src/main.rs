//! Command line front-end: field inspection, Wedderburn decompositions,
//! local Schur indices, criticality verdicts and the critical-group tables.
//!
//! Exit codes: 0 success, 2 usage/parse error, 1 domain error.

use excomp::abfield::AbelianNumberField;
use excomp::critical::{
    cyclotomic_specialization, enumerate_critical, is_critical, CriticalReport,
};
use excomp::groupzoo::GroupSpec;
use excomp::schur::{classify_exceptional, local_profile, ExceptionalKind};
use excomp::wedderburn::{decompose, SimpleComponent};
use std::process::ExitCode;

mod render;

use render::{Cell, OutputMode, Table};

const USAGE: &str = "excomp - Wedderburn decompositions and F-critical groups

USAGE:
    excomp <COMMAND> [ARGS] [--json | --csv]

COMMANDS:
    field <field> [p1 p2 ...]       describe a field and the splitting of primes
    decompose <group> <field>       Wedderburn decomposition of FG
    indices <group> <field>         local Schur index profiles per component
    critical <group> <field>        decide F-criticality
    enumerate <field> <max-order>   all F-critical groups up to an order bound
    table q200                      the rational critical table up to order 200

GRAMMAR:
    groups:  C12, 'C5 : C8 (k=4)', 'C5:C8(k=4,r=2)', Q8, 'SL(2,3)', 'SL(2,5)',
             'O*', 'C7 x SL(2,3)', 'C11 x (C3 : C4 (k=2))'
    fields:  Q, CF(8), 'NF(20,[ 1, 9 ])', GaussianRationals
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut mode = OutputMode::Table;
    let mut rest: Vec<String> = Vec::new();
    let mut iter = args.into_iter();
    while let Some(a) = iter.next() {
        match a.as_str() {
            "--json" => mode = OutputMode::Json,
            "--csv" => mode = OutputMode::Csv,
            "--help" | "-h" => {
                print!("{USAGE}");
                return ExitCode::SUCCESS;
            }
            // flag spellings of the positional arguments; appended in the
            // order the commands expect them
            "--field" | "--max-order" => match iter.next() {
                Some(v) => rest.push(v),
                None => {
                    eprintln!("error: {a} needs a value");
                    return ExitCode::from(2);
                }
            },
            _ => rest.push(a),
        }
    }
    let Some(command) = rest.first().cloned() else {
        eprint!("{USAGE}");
        return ExitCode::from(2);
    };
    let result = match command.as_str() {
        "field" => cmd_field(&rest[1..], mode),
        "decompose" => cmd_decompose(&rest[1..], mode),
        "indices" => cmd_indices(&rest[1..], mode),
        "critical" => cmd_critical(&rest[1..], mode),
        "enumerate" => cmd_enumerate(&rest[1..], mode),
        "table" => cmd_table(&rest[1..], mode),
        _ => {
            eprintln!("unknown command: {command}");
            eprint!("{USAGE}");
            return ExitCode::from(2);
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

enum CliError {
    Usage(String),
    Domain(String),
}

fn parse_field(s: &str) -> Result<AbelianNumberField, CliError> {
    AbelianNumberField::parse(s).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_group(s: &str) -> Result<GroupSpec, CliError> {
    GroupSpec::parse(s).map_err(|e| {
        CliError::Usage(format!(
            "unsupported group: {e}; the grammar is Cn | Cm:Cn(k=K[,r=R]) | Q4k | SL(2,3) | SL(2,5) | O* | Cp x <group>"
        ))
    })
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn cmd_field(args: &[String], mode: OutputMode) -> Result<(), CliError> {
    let Some(notation) = args.first() else {
        return Err(CliError::Usage("field <field> [primes...]".into()));
    };
    let f = parse_field(notation)?;
    let mut table = Table::new("field", &["property", "value"]);
    table.row(vec![Cell::s("notation"), Cell::s(&f.notation())]);
    table.row(vec![Cell::s("conductor"), Cell::u(f.conductor())]);
    let fixer = f
        .fixer()
        .elements()
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    table.row(vec![Cell::s("fixer"), Cell::s(&fixer)]);
    table.row(vec![Cell::s("degree"), Cell::u(f.degree())]);
    table.row(vec![
        Cell::s("reality"),
        Cell::s(if f.is_totally_real() { "totally real" } else { "totally imaginary" }),
    ]);
    table.print(mode);

    if args.len() > 1 {
        let mut split = Table::new("splitting", &["p", "e", "f", "g"]);
        for a in &args[1..] {
            let p: u64 = a.parse().map_err(|_| CliError::Usage(format!("bad prime: {a}")))?;
            let s = f.splitting_data(p).map_err(domain)?;
            split.row(vec![Cell::u(p), Cell::u(s.e), Cell::u(s.f), Cell::u(s.g)]);
        }
        split.print(mode);
    }
    Ok(())
}

fn component_rows(
    comps: &[SimpleComponent],
    field: &AbelianNumberField,
    with_indices: bool,
) -> Result<Table, CliError> {
    let header: &[&str] = if with_indices {
        &["size", "algebra", "center", "mult", "F-dim", "schur index", "local indices"]
    } else {
        &["size", "algebra", "center", "mult", "F-dim"]
    };
    let mut table = Table::new("components", header);
    for c in comps {
        let dim = c.dimension_over(field).map_err(domain)?;
        let mut row = vec![
            Cell::u(c.matrix_size),
            Cell::s(&c.algebra.describe()),
            Cell::s(&c.center().notation()),
            Cell::u(c.multiplicity),
            Cell::u(dim * c.multiplicity),
        ];
        if with_indices {
            match local_profile(&c.algebra) {
                Ok(profile) => {
                    row.push(Cell::u(profile.global_index()));
                    row.push(Cell::s(&profile.notation()));
                }
                Err(e) => {
                    row.push(Cell::s("?"));
                    row.push(Cell::s(&format!("unsupported: {e}")));
                }
            }
        }
        table.row(row);
    }
    Ok(table)
}

fn cmd_decompose(args: &[String], mode: OutputMode) -> Result<(), CliError> {
    let [group, field] = args else {
        return Err(CliError::Usage("decompose <group> <field>".into()));
    };
    let g = parse_group(group)?;
    let f = parse_field(field)?;
    let comps = decompose(&g, &f).map_err(domain)?;
    let table = component_rows(&comps, &f, false)?;
    table.print(mode);
    Ok(())
}

fn cmd_indices(args: &[String], mode: OutputMode) -> Result<(), CliError> {
    let [group, field] = args else {
        return Err(CliError::Usage("indices <group> <field>".into()));
    };
    let g = parse_group(group)?;
    let f = parse_field(field)?;
    let comps = decompose(&g, &f).map_err(domain)?;
    let table = component_rows(&comps, &f, true)?;
    table.print(mode);
    Ok(())
}

fn report_table(reports: &[CriticalReport]) -> Table {
    let mut table = Table::new(
        "critical",
        &["ID", "Structure", "Center", "Schur index", "Local index"],
    );
    for r in reports {
        let id = r
            .small_group_id()
            .map(|i| format!("[{}, {}]", r.group.order(), i))
            .unwrap_or_else(|| format!("[{}, ?]", r.group.order()));
        table.row(vec![
            Cell::s(&id),
            Cell::s(&r.group.structure()),
            Cell::s(&r.witness.as_ref().map(|w| w.center().notation()).unwrap_or_default()),
            Cell::u(r.schur_index.unwrap_or(1)),
            Cell::s(&r.local_indices.as_ref().map(|p| p.notation()).unwrap_or_default()),
        ]);
    }
    table
}

fn cmd_critical(args: &[String], mode: OutputMode) -> Result<(), CliError> {
    let [group, field] = args else {
        return Err(CliError::Usage("critical <group> <field>".into()));
    };
    let g = parse_group(group)?;
    let f = parse_field(field)?;
    let report = if let Some(m) = cyclotomic_conductor_of(&f) {
        // consistency: the cyclotomic specialization must agree; use the
        // general engine for the report either way
        let special = cyclotomic_specialization(&g, m).map_err(domain)?;
        let general = is_critical(&g, &f).map_err(domain)?;
        if special.verdict != general.verdict {
            return Err(CliError::Domain(format!(
                "internal disagreement between the cyclotomic specialization ({}) and the general criterion ({})",
                special.verdict, general.verdict
            )));
        }
        general
    } else {
        is_critical(&g, &f).map_err(domain)?
    };
    let mut table = Table::new("critical", &["property", "value"]);
    table.row(vec![Cell::s("group"), Cell::s(&report.group.structure())]);
    table.row(vec![Cell::s("field"), Cell::s(&report.field.notation())]);
    table.row(vec![Cell::s("critical"), Cell::s(if report.verdict { "yes" } else { "no" })]);
    if let Some(w) = &report.witness {
        table.row(vec![Cell::s("component"), Cell::s(&w.describe())]);
        table.row(vec![Cell::s("center"), Cell::s(&w.center().notation())]);
        table.row(vec![Cell::s("schur index"), Cell::u(report.schur_index.unwrap_or(1))]);
        table.row(vec![
            Cell::s("local index"),
            Cell::s(&report.local_indices.as_ref().unwrap().notation()),
        ]);
        let verdict = classify_exceptional(w).map_err(domain)?;
        debug_assert_eq!(verdict.kind, ExceptionalKind::Type1);
    }
    if let Some(reason) = &report.failed_condition {
        table.row(vec![Cell::s("failed condition"), Cell::s(reason)]);
    }
    for d in &report.diagnostics {
        table.row(vec![Cell::s("note"), Cell::s(d)]);
    }
    table.print(mode);
    Ok(())
}

fn cyclotomic_conductor_of(f: &AbelianNumberField) -> Option<u64> {
    let m = f.conductor();
    (m >= 3 && f.fixer().order() == 1).then_some(m)
}

fn cmd_enumerate(args: &[String], mode: OutputMode) -> Result<(), CliError> {
    let [field, max_order] = args else {
        return Err(CliError::Usage("enumerate <field> <max-order>".into()));
    };
    let f = parse_field(field)?;
    let bound: u64 =
        max_order.parse().map_err(|_| CliError::Usage(format!("bad order bound: {max_order}")))?;
    let reports = enumerate_critical(&f, bound).map_err(domain)?;
    report_table(&reports).print(mode);
    Ok(())
}

fn cmd_table(args: &[String], mode: OutputMode) -> Result<(), CliError> {
    match args.first().map(String::as_str) {
        Some("q200") => {}
        _ => return Err(CliError::Usage("table q200".into())),
    }
    let q = AbelianNumberField::rationals();
    let reports = enumerate_critical(&q, 200).map_err(domain)?;
    if reports.len() != 13 || reports.iter().any(|r| r.small_group_id().is_none()) {
        return Err(CliError::Domain(format!(
            "expected the 13 annotated rational rows, found {}",
            reports.len()
        )));
    }
    report_table(&reports).print(mode);
    Ok(())
}
