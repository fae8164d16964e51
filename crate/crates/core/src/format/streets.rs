//! Street input files: one tab-separated record per line,
//! `street_id name region type zone x1,y1;x2,y2;...`, with `#` comments.

use std::fmt::Write as _;

use crate::density::StreetAttributes;
use crate::error::{DensityError, ParseError};
use crate::extract::StreetPolyline;
use crate::format::fmt_num;
use crate::geometry::Point;

pub fn parse_streets(text: &str) -> Result<Vec<StreetPolyline>, ParseError> {
    let mut streets: Vec<StreetPolyline> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [id, name, region, stype, zone, coords] = fields[..] else {
            return Err(ParseError::new(
                line_no,
                format!("expected 6 tab-separated fields, got {}", fields.len()),
            ));
        };
        let id: u32 = id
            .trim()
            .parse()
            .map_err(|_| ParseError::new(line_no, format!("invalid street id '{id}'")))?;
        if streets.iter().any(|s| s.id == id) {
            return Err(ParseError::new(line_no, format!("duplicate street id {id}")));
        }
        let attr_err = |e: DensityError| ParseError::new(line_no, e.to_string());
        let attributes = StreetAttributes::new(
            region.trim().parse().map_err(attr_err)?,
            stype.trim().parse().map_err(attr_err)?,
            zone.trim().parse().map_err(attr_err)?,
        );
        let points = coords
            .trim()
            .split(';')
            .map(|pair| {
                let (x, y) = pair
                    .split_once(',')
                    .ok_or_else(|| ParseError::new(line_no, format!("invalid coordinate '{pair}'")))?;
                let parse = |v: &str| {
                    v.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|f| f.is_finite())
                        .ok_or_else(|| ParseError::new(line_no, format!("invalid coordinate '{pair}'")))
                };
                Ok(Point::new(parse(x)?, parse(y)?))
            })
            .collect::<Result<Vec<_>, ParseError>>()?;
        let street = StreetPolyline::new(id, name, attributes, points)
            .map_err(|e| ParseError::new(line_no, e.to_string()))?;
        streets.push(street);
    }
    Ok(streets)
}

pub fn serialize_streets(streets: &[StreetPolyline]) -> String {
    let mut out = String::from("# street_id\tname\tregion\ttype\tzone\tpoints\n");
    for s in streets {
        let points: Vec<String> = s
            .points()
            .iter()
            .map(|p| format!("{},{}", fmt_num(p.x), fmt_num(p.y)))
            .collect();
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            s.id,
            s.name,
            s.attributes.region,
            s.attributes.stype,
            s.attributes.zone,
            points.join(";")
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{Region, StreetType, Zone};

    #[test]
    fn parses_records_and_skips_comments() {
        let text = "# header\n\n1\tRua XV\tcentral\tavenue\tmixed\t0,0;100,0;100,50\n";
        let streets = parse_streets(text).unwrap();
        assert_eq!(streets.len(), 1);
        let s = &streets[0];
        assert_eq!(s.id, 1);
        assert_eq!(s.name, "Rua XV");
        assert_eq!(
            s.attributes,
            StreetAttributes::new(Region::Central, StreetType::Avenue, Zone::Mixed)
        );
        assert_eq!(s.length(), 150.0);
        assert_eq!(parse_streets(&serialize_streets(&streets)).unwrap(), streets);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_streets("# c\n1\tA\tcentral\tboulevard\tmixed\t0,0;1,0\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(err.message.contains("type"));
        let err = parse_streets("1\tA\tcentral\tavenue\tmixed\t0,0\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_streets("1\tA\tcentral\tavenue\tmixed\t0,0;x,1\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_streets("1\tA\tcentral\tavenue\n").unwrap_err();
        assert_eq!(err.line, 1);
    }
}
