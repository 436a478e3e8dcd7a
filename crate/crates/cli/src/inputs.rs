//! Matrix and positive-map files.

use std::fs;
use std::path::Path;

use fkineq::suite::MapChoice;
use fkineq::textio::{parse_matrix, parse_matrix_lines};
use fkineq::{Error, HermitianMatrix, PositiveMapSpec, UnitaryMixture};

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn read_hermitian(path: &Path) -> Result<HermitianMatrix, Error> {
    let m = parse_matrix(&read(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    HermitianMatrix::new(m)
}

/// Unitary mixture file: blocks of `w <weight>` followed by a matrix.
/// Lines starting with `#` are ignored.
pub fn parse_mixture(text: &str) -> Result<UnitaryMixture, Error> {
    let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#'));
    let mut terms = Vec::new();
    while let Some(line) = lines.next() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let w = line
            .strip_prefix('w')
            .ok_or_else(|| Error::Parse(format!("expected `w <weight>`, found `{line}`")))?
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad weight in `{line}`")))?;
        let u = parse_matrix_lines(&mut lines)?;
        terms.push((u, w));
    }
    UnitaryMixture::new(terms)
}

pub fn parse_map(text: &str, n: usize) -> Result<MapChoice, Error> {
    match text {
        "pinch" => Ok(MapChoice::Pinch),
        "trace" => Ok(MapChoice::Trace),
        _ => {
            if let Some(k) = text.strip_prefix("haar:") {
                let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad term count in `{text}`")))?;
                if k == 0 {
                    return Err(Error::MapSpec("a mixture needs at least one term".into()));
                }
                return Ok(MapChoice::HaarMix(k));
            }
            let path = text
                .strip_prefix("mix:")
                .ok_or_else(|| Error::Parse(format!("unknown map `{text}`")))?;
            let mix = parse_mixture(&read(Path::new(path))?)?;
            if mix.dim() != n {
                return Err(Error::Shape(format!("mixture acts on {0}x{0}, expected n = {n}", mix.dim())));
            }
            Ok(MapChoice::Explicit(PositiveMapSpec::UnitaryMixing(mix)))
        }
    }
}
