use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::Context;
use clap::ValueEnum;
use hurwitz_core::oracle::{Discrepancy, OracleRow};
use hurwitz_core::rational::to_exact_string;
use hurwitz_core::{HurwitzRecord, Partition, TruncatedSeries, VerificationReport};
use serde::Serialize;

use crate::OutputArgs;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

pub struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    pub fn open(args: &OutputArgs) -> anyhow::Result<Self> {
        let out: Box<dyn Write> = match &args.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Self { out })
    }

    fn json<T: Serialize + ?Sized>(&mut self, value: &T) -> anyhow::Result<()> {
        serde_json::to_writer_pretty(&mut self.out, value)?;
        writeln!(self.out)?;
        self.out.flush()?;
        Ok(())
    }

    fn csv(&mut self, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(&mut self.out);
        w.write_record(header)?;
        for row in rows {
            w.write_record(&row)?;
        }
        w.flush()?;
        drop(w);
        self.out.flush()?;
        Ok(())
    }

    fn text(&mut self, s: &str) -> anyhow::Result<()> {
        self.out.write_all(s.as_bytes())?;
        self.out.flush()?;
        Ok(())
    }

    pub fn records(&mut self, format: Format, records: &[HurwitzRecord]) -> anyhow::Result<()> {
        match format {
            Format::Json => self.json(records),
            Format::Csv => self.csv(
                &["d", "b", "mu", "nu", "value", "genus", "connected"],
                records.iter().map(|r| {
                    vec![
                        r.d.to_string(),
                        r.b.to_string(),
                        r.mu.to_string(),
                        r.nu.to_string(),
                        to_exact_string(&r.value),
                        r.genus.to_string(),
                        r.connected.to_string(),
                    ]
                }),
            ),
            Format::Human => {
                let mut s = String::new();
                for r in records {
                    let kind = if r.connected { "Hur" } else { "Cov" };
                    s += &format!(
                        "{kind}_{{{},{}}}(({}), ({})) = {}    genus {}\n",
                        r.d,
                        r.b,
                        r.mu,
                        r.nu,
                        to_exact_string(&r.value),
                        r.genus
                    );
                }
                self.text(&s)
            }
        }
    }

    pub fn report(&mut self, format: Format, report: &VerificationReport) -> anyhow::Result<()> {
        match format {
            Format::Json => self.json(report),
            Format::Csv => self.csv(
                &["identity", "d_max", "b_max", "pass", "first_failure", "residual_terms"],
                [vec![
                    report.identity.clone(),
                    report.orders.d_max.to_string(),
                    report.orders.b_max.to_string(),
                    report.pass().to_string(),
                    report.first_failure().map(|k| k.to_string()).unwrap_or_default(),
                    report.residual.len().to_string(),
                ]],
            ),
            Format::Human => {
                let mut s = format!(
                    "{}: {} at (d_max, b_max) = ({}, {})\n",
                    report.identity,
                    if report.pass() { "PASS" } else { "FAIL" },
                    report.orders.d_max,
                    report.orders.b_max
                );
                if let Some((k, v)) = report.residual.first_term() {
                    s += &format!(
                        "  first offending monomial: {k} (coefficient {}); {} nonzero terms\n",
                        to_exact_string(v),
                        report.residual.len()
                    );
                }
                for note in &report.notes {
                    s += &format!("  {note}\n");
                }
                self.text(&s)
            }
        }
    }

    pub fn discrepancies(
        &mut self,
        format: Format,
        found: &[Discrepancy],
        d_max: u32,
        b_max: u32,
    ) -> anyhow::Result<()> {
        match format {
            Format::Json => self.json(found),
            _ => {
                let mut s = if found.is_empty() {
                    format!("agreement for all d <= {d_max}, b <= {b_max}\n")
                } else {
                    format!("{} discrepancies\n", found.len())
                };
                for d in found {
                    s += &format!("  {d}\n");
                }
                self.text(&s)
            }
        }
    }

    pub fn oracle_csv(&mut self, rows: &[OracleRow]) -> anyhow::Result<()> {
        self.csv(
            &["d", "b", "mu", "nu", "disconnected_count", "connected_count"],
            rows.iter().map(|r| {
                vec![
                    r.d.to_string(),
                    r.b.to_string(),
                    r.mu.to_string(),
                    r.nu.to_string(),
                    to_exact_string(&r.disconnected),
                    to_exact_string(&r.connected),
                ]
            }),
        )
    }

    pub fn chartable(&mut self, format: Format, classes: &[Partition], rows: &[Vec<i64>]) -> anyhow::Result<()> {
        #[derive(Serialize)]
        struct Table<'a> {
            classes: &'a [Partition],
            characters: Vec<Row<'a>>,
        }
        #[derive(Serialize)]
        struct Row<'a> {
            lambda: &'a Partition,
            values: &'a [i64],
        }
        match format {
            Format::Json => self.json(&Table {
                classes,
                characters: classes.iter().zip(rows).map(|(lambda, values)| Row { lambda, values }).collect(),
            }),
            Format::Csv => {
                let mut header = vec!["lambda".to_string()];
                header.extend(classes.iter().map(|c| c.to_string()));
                let header: Vec<&str> = header.iter().map(String::as_str).collect();
                self.csv(
                    &header,
                    classes.iter().zip(rows).map(|(l, row)| {
                        std::iter::once(l.to_string()).chain(row.iter().map(|v| v.to_string())).collect()
                    }),
                )
            }
            Format::Human => {
                let width = classes.iter().map(|c| c.to_string().len()).max().unwrap_or(1).max(4);
                let mut s = format!("{:>width$} |", "");
                for c in classes {
                    s += &format!(" {:>width$}", c.to_string());
                }
                s.push('\n');
                for (l, row) in classes.iter().zip(rows) {
                    s += &format!("{:>width$} |", l.to_string());
                    for v in row {
                        s += &format!(" {v:>width$}");
                    }
                    s.push('\n');
                }
                self.text(&s)
            }
        }
    }

    pub fn series(&mut self, format: Format, series: &TruncatedSeries) -> anyhow::Result<()> {
        match format {
            Format::Json => self.json(&series.records()),
            Format::Csv => self.csv(
                &["dq", "b", "mu", "nu", "z", "s", "s_prime", "numerator", "denominator"],
                series.records().into_iter().map(|r| {
                    let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
                    vec![
                        r.dq.to_string(),
                        r.b.to_string(),
                        r.mu.to_string(),
                        r.nu.to_string(),
                        r.aux.z.to_string(),
                        join(&r.aux.s),
                        join(&r.aux.s_prime),
                        r.numerator,
                        r.denominator,
                    ]
                }),
            ),
            Format::Human => self.text(&format!("{series}\n")),
        }
    }
}
