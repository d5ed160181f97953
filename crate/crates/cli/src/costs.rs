//! Resource tables for every gadget and copy count.

use std::io::Write;

use purify_core::permgroup::{cost_model, CostReport, GadgetName};

pub const CSV_HEADER: [&str; 9] = [
    "gadget",
    "M",
    "ancilla_qubits",
    "cswap_count",
    "superposition_gates",
    "output_count",
    "group",
    "ancilla_class",
    "cswap_class",
];

/// One report per gadget per `M`; power-of-two-only gadgets skip other `M`.
pub fn cost_table(ms: &[usize]) -> Vec<CostReport> {
    let mut rows = Vec::new();
    for &m in ms {
        for g in GadgetName::ALL {
            if let Ok(r) = cost_model(g, m) {
                rows.push(r);
            }
        }
    }
    rows
}

fn record(r: &CostReport) -> [String; 9] {
    [
        r.gadget.to_string(),
        r.copies.to_string(),
        r.ancilla_qubits.to_string(),
        r.cswap_count.to_string(),
        r.superposition_gates.to_string(),
        r.output_count.to_string(),
        r.group.map(|g| g.to_string()).unwrap_or_else(|| "SWAP_TREE".into()),
        r.ancilla_class.to_string(),
        r.cswap_class.to_string(),
    ]
}

pub fn write_csv<W: Write>(rows: &[CostReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record(record(r))?;
    }
    w.flush()?;
    Ok(())
}

/// Column-aligned plain-text table.
pub fn render_text(rows: &[CostReport]) -> String {
    let records: Vec<[String; 9]> = rows.iter().map(record).collect();
    let mut widths = CSV_HEADER.map(str::len);
    for rec in &records {
        for (w, cell) in widths.iter_mut().zip(rec) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect::<Vec<_>>().join("  ").trim_end().to_string()
    };
    let mut out = line(CSV_HEADER.to_vec());
    out.push('\n');
    for rec in &records {
        out.push_str(&line(rec.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}
