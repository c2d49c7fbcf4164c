use std::io::{Read, Write};

use super::{ExperimentRow, HarnessError};

pub const CSV_HEADER: [&str; 7] = [
    "experiment",
    "nodes",
    "divisor",
    "max_depth",
    "max_uniform_depth",
    "solved",
    "step",
];

/// At most six significant digits, trailing zeros and a bare point removed.
pub fn format_float(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    if magnitude >= 6 {
        let scale = 10f64.powi(magnitude - 5);
        return format!("{}", (x / scale).round() * scale);
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Write `rows` as CSV with the standard header.
pub fn emit_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment_number.to_string(),
            r.nodes_searched.to_string(),
            format_float(r.divisor),
            r.max_depth_attained.to_string(),
            r.max_uniform_depth.to_string(),
            u8::from(r.solved).to_string(),
            format_float(r.step_size),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Read rows written by [`emit_csv`].
pub fn parse_csv<R: Read>(input: R) -> Result<Vec<ExperimentRow>, HarnessError> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(HarnessError::CsvRow {
            row: 0,
            message: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec?;
            let row = i + 1;
            let bad = |field: &str| HarnessError::CsvRow {
                row,
                message: format!(
                    "bad {field} `{}`",
                    rec.get(CSV_HEADER.iter().position(|h| *h == field).unwrap())
                        .unwrap_or("")
                ),
            };
            let field = |k: usize| rec.get(k).unwrap_or("");
            Ok(ExperimentRow {
                experiment_number: field(0).parse().map_err(|_| bad("experiment"))?,
                nodes_searched: field(1).parse().map_err(|_| bad("nodes"))?,
                divisor: field(2).parse().map_err(|_| bad("divisor"))?,
                max_depth_attained: field(3).parse().map_err(|_| bad("max_depth"))?,
                max_uniform_depth: field(4).parse().map_err(|_| bad("max_uniform_depth"))?,
                solved: match field(5) {
                    "1" => true,
                    "0" => false,
                    _ => return Err(bad("solved")),
                },
                step_size: field(6).parse().map_err(|_| bad("step"))?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row1() -> ExperimentRow {
        ExperimentRow {
            experiment_number: 1,
            nodes_searched: 20827,
            divisor: 1.0,
            max_depth_attained: 17,
            max_uniform_depth: 16,
            solved: true,
            step_size: 6.0,
        }
    }

    #[test]
    fn table_row_one() {
        let mut out = Vec::new();
        emit_csv(&[row1()], &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "experiment,nodes,divisor,max_depth,max_uniform_depth,solved,step\n1,20827,1,17,16,1,6\n"
        );
    }

    #[test]
    fn header_only() {
        let mut out = Vec::new();
        emit_csv(&[], &mut out).unwrap();
        assert_eq!(
            out,
            b"experiment,nodes,divisor,max_depth,max_uniform_depth,solved,step\n"
        );
        assert!(parse_csv(&out[..]).unwrap().is_empty());
    }

    #[test]
    fn floats() {
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(1.25), "1.25");
        assert_eq!(format_float(6.0), "6");
        assert_eq!(format_float(0.1), "0.1");
        assert_eq!(format_float(1.0 / 3.0), "0.333333");
        assert_eq!(format_float(123456.7), "123457");
        assert_eq!(format_float(-2.5), "-2.5");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(12345678.0), "12345700");
    }

    #[test]
    fn round_trip() {
        let mut r2 = row1();
        r2.experiment_number = 2;
        r2.divisor = 1.25;
        r2.solved = false;
        let rows = vec![row1(), r2];
        let mut out = Vec::new();
        emit_csv(&rows, &mut out).unwrap();
        assert_eq!(parse_csv(&out[..]).unwrap(), rows);
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_csv(&b"a,b\n1,2\n"[..]).is_err());
        let bad =
            b"experiment,nodes,divisor,max_depth,max_uniform_depth,solved,step\n1,2,1,1,1,yes,6\n";
        assert!(matches!(
            parse_csv(&bad[..]),
            Err(HarnessError::CsvRow { row: 1, .. })
        ));
    }
}
