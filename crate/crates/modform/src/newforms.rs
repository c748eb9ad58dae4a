//! Newform coefficient records: computation from modular symbols,
//! serialization, and a fixture/cache loading chain.

use crate::qexp::QExpansion;
use crate::spaces::{decomposition, sturm_bound};
use crate::ModformError;
use chabauty_arith::numfield::{NfElem, NumberField};
use chabauty_arith::padic::Padic;
use chabauty_arith::primes::factor_u64;
use chabauty_modsym::oms::plus_symbol_sum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::sync::Arc;

/// Exact coefficient data of one Galois orbit of weight-two newforms.
#[derive(Clone)]
pub struct NewformRecord {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    /// Hecke eigenvalue field `E_f = Q(nu)`.
    pub field: Arc<NumberField>,
    /// `an[n]` is the eigenvalue `a_n`; index 0 is a zero filler.
    pub an: Vec<NfElem>,
    /// Fricke eigenvalue `w_N`.
    pub fricke: i64,
    /// Atkin-Lehner eigenvalue per exact prime-power divisor of the level.
    pub al_signs: Vec<(u64, i64)>,
    /// Whether `L(f, 1)` is nonzero.
    pub analytic_rank_zero: bool,
}

impl NewformRecord {
    /// Number of known coefficients `a_1 ... a_terms`.
    pub fn terms(&self) -> usize {
        self.an.len() - 1
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn a(&self, n: usize) -> &NfElem {
        &self.an[n]
    }

    /// The coordinate q-expansion of the orbit along power-basis index
    /// `i`, known to `order`.
    pub fn coordinate_series(&self, i: usize, order: usize) -> Result<QExpansion, ModformError> {
        if order > self.terms() {
            return Err(ModformError::InsufficientCoefficients {
                have: self.terms(),
                need: order,
            });
        }
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
            *c = self.an[n].coords()[i].clone();
        }
        Ok(QExpansion::new(self.level, 2, coeffs))
    }

    /// Roots of the Hecke-field minimal polynomial in `Z_p`, each paired
    /// with the image of `a_p` under the corresponding embedding and the
    /// ordinarity verdict (`a_p` a p-adic unit).
    pub fn ordinarity(&self, p: u64, abs_prec: i64) -> Vec<(Padic, Padic, bool)> {
        assert!(self.terms() >= p as usize, "need a_p to test ordinarity");
        let ap = &self.an[p as usize];
        self.field
            .padic_roots(p, abs_prec)
            .into_iter()
            .map(|root| {
                let image = ap.embed_padic(&root);
                let ordinary = image.valuation() == 0;
                (root, image, ordinary)
            })
            .collect()
    }
}

/// Bijective lowercase orbit code: 0 -> "a", 25 -> "z", 26 -> "ba".
pub fn letter_code(mut k: usize) -> String {
    let mut digits = vec![k % 26];
    k /= 26;
    while k > 0 {
        digits.push(k % 26);
        k /= 26;
    }
    digits
        .into_iter()
        .rev()
        .map(|d| (b'a' + d as u8) as char)
        .collect()
}

fn letter_index(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_lowercase()) {
        return None;
    }
    let mut k = 0usize;
    for b in s.bytes() {
        k = k * 26 + (b - b'a') as usize;
    }
    Some(k)
}

/// Parses `N.k.a.x` into level, weight, and orbit index.
pub fn parse_label(label: &str) -> Result<(u64, u32, usize), ModformError> {
    let bad = || ModformError::BadLabel(label.to_string());
    let parts: Vec<&str> = label.split('.').collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    let level: u64 = parts[0].parse().map_err(|_| bad())?;
    let weight: u32 = parts[1].parse().map_err(|_| bad())?;
    if weight != 2 || parts[2] != "a" {
        return Err(ModformError::UnsupportedLabel(label.to_string()));
    }
    let orbit = letter_index(parts[3]).ok_or_else(bad)?;
    Ok((level, weight, orbit))
}

/// Computes a record directly from the modular-symbol decomposition.
pub fn compute_newform(
    level: u64,
    orbit: usize,
    terms: usize,
) -> Result<NewformRecord, ModformError> {
    let label = format!("{}.2.a.{}", level, letter_code(orbit));
    let dec = decomposition(level);
    if orbit >= dec.num_newforms() {
        return Err(ModformError::NoSuchOrbit(
            label,
            orbit,
            level,
            dec.num_newforms(),
        ));
    }
    let mut sym = dec
        .eigensymbol(orbit)
        .map_err(|e| ModformError::BadRecord(e.to_string()))?;
    let field = sym.field().clone();
    let mut an = Vec::with_capacity(terms + 1);
    an.push(NfElem::zero(&field));
    for n in 1..=terms as u64 {
        an.push(sym.a_n(n));
    }
    let mut al_signs = Vec::new();
    for (p, e) in factor_u64(level) {
        al_signs.push((p.pow(e), sym.atkin_lehner(p.pow(e))));
    }
    let fricke = sym.atkin_lehner(level);
    assert_eq!(
        fricke,
        al_signs.iter().map(|&(_, s)| s).product::<i64>(),
        "Fricke sign must be the product of the Atkin-Lehner signs"
    );
    let analytic_rank_zero = !plus_symbol_sum(&sym, 1).is_zero();
    Ok(NewformRecord {
        label,
        level,
        weight: 2,
        field,
        an,
        fricke,
        al_signs,
        analytic_rank_zero,
    })
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    label: String,
    level: u64,
    weight: u32,
    /// Low-order coefficients of the monic minimal polynomial of the
    /// field generator; length equals the field degree.
    field_minpoly: Vec<String>,
    /// `coefficients[n]` holds the power-basis coordinates of `a_{n+1}`.
    coefficients: Vec<Vec<String>>,
    fricke_sign: i64,
    al_signs: Vec<(u64, i64)>,
    analytic_rank_zero: bool,
}

fn record_to_json(record: &NewformRecord) -> RecordJson {
    RecordJson {
        label: record.label.clone(),
        level: record.level,
        weight: record.weight,
        field_minpoly: record.field.minpoly().iter().map(|c| c.to_string()).collect(),
        coefficients: record.an[1..]
            .iter()
            .map(|a| a.coords().iter().map(|c| c.to_string()).collect())
            .collect(),
        fricke_sign: record.fricke,
        al_signs: record.al_signs.clone(),
        analytic_rank_zero: record.analytic_rank_zero,
    }
}

fn record_from_json(json: RecordJson) -> Result<NewformRecord, ModformError> {
    let bad = |msg: &str| ModformError::BadRecord(msg.to_string());
    let minpoly: Vec<BigInt> = json
        .field_minpoly
        .iter()
        .map(|s| s.parse().map_err(|_| bad("unreadable minimal polynomial")))
        .collect::<Result<_, _>>()?;
    let field = if minpoly.len() == 1 && minpoly[0].is_zero() {
        NumberField::rationals()
    } else {
        NumberField::new(&format!("hecke-{}", json.label), minpoly)
    };
    let degree = field.degree();
    let mut an = vec![NfElem::zero(&field)];
    for (n, coords) in json.coefficients.iter().enumerate() {
        if coords.len() != degree {
            return Err(bad(&format!(
                "coefficient a_{} has {} coordinates for a degree-{} field",
                n + 1,
                coords.len(),
                degree
            )));
        }
        let coords: Vec<BigRational> = coords
            .iter()
            .map(|s| s.parse().map_err(|_| bad("unreadable coordinate")))
            .collect::<Result<_, _>>()?;
        an.push(NfElem::from_coords(&field, coords));
    }
    if an.len() < 2 || !an[1].is_rational() || !an[1].rational_part().is_one() {
        return Err(bad("records must be normalized with a_1 = 1"));
    }
    let (level, weight, _) = parse_label(&json.label)?;
    if level != json.level || weight != json.weight {
        return Err(bad("label does not match the stored level and weight"));
    }
    Ok(NewformRecord {
        label: json.label,
        level: json.level,
        weight: json.weight,
        field,
        an,
        fricke: json.fricke_sign,
        al_signs: json.al_signs,
        analytic_rank_zero: json.analytic_rank_zero,
    })
}

/// Serializes a record to pretty JSON.
pub fn record_to_string(record: &NewformRecord) -> String {
    serde_json::to_string_pretty(&record_to_json(record)).expect("record serializes")
}

/// Parses a record from JSON text.
pub fn record_from_str(text: &str) -> Result<NewformRecord, ModformError> {
    record_from_json(serde_json::from_str(text)?)
}

/// Controls for [`load_newform`].
#[derive(Clone, Default)]
pub struct LoadOptions {
    /// Cache directory override; falls back to `CHABAUTY_CACHE_DIR`,
    /// then to a directory under the system temp dir.
    pub cache_dir: Option<PathBuf>,
    /// Accepted for interface stability. Loading never touches the
    /// network: records come from bundled fixtures, the on-disk cache,
    /// or a local modular-symbol computation.
    pub offline: bool,
    /// Minimum number of coefficients; 0 requests the default of ten
    /// times the weight-two Sturm bound.
    pub min_terms: usize,
}

/// Directory of fixture records bundled with the crate.
pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn cache_dir(opts: &LoadOptions) -> PathBuf {
    if let Some(dir) = &opts.cache_dir {
        return dir.clone();
    }
    if let Ok(dir) = std::env::var("CHABAUTY_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    std::env::temp_dir().join("chabauty-cache")
}

fn read_record_file(path: &Path) -> Result<NewformRecord, ModformError> {
    record_from_str(&std::fs::read_to_string(path)?)
}

/// Loads a newform record by label or explicit JSON path.
///
/// Lookup order for labels: bundled fixtures, then the cache directory,
/// then a fresh modular-symbol computation whose result is written back
/// to the cache. Records found with fewer coefficients than requested
/// are recomputed rather than returned short.
pub fn load_newform(spec: &str, opts: &LoadOptions) -> Result<NewformRecord, ModformError> {
    if spec.ends_with(".json") || spec.contains('/') {
        let record = read_record_file(Path::new(spec))?;
        if opts.min_terms > 0 && record.terms() < opts.min_terms {
            return Err(ModformError::InsufficientCoefficients {
                have: record.terms(),
                need: opts.min_terms,
            });
        }
        return Ok(record);
    }
    let (level, _, orbit) = parse_label(spec)?;
    let needed = if opts.min_terms > 0 {
        opts.min_terms
    } else {
        10 * sturm_bound(level, 2)
    };
    let fixture = fixtures_dir().join(format!("{}.json", spec));
    if fixture.is_file() {
        let record = read_record_file(&fixture)?;
        if record.terms() >= needed {
            return Ok(record);
        }
    }
    let cached = cache_dir(opts).join(format!("{}.json", spec));
    if cached.is_file() {
        if let Ok(record) = read_record_file(&cached) {
            if record.terms() >= needed {
                return Ok(record);
            }
        }
    }
    let record = compute_newform(level, orbit, needed)?;
    let dir = cache_dir(opts);
    if std::fs::create_dir_all(&dir).is_ok() {
        let tmp = dir.join(format!(".{}.json.tmp-{}", spec, std::process::id()));
        if std::fs::write(&tmp, record_to_string(&record)).is_ok() {
            let _ = std::fs::rename(&tmp, &cached);
        }
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letter_codes_round_trip() {
        assert_eq!(letter_code(0), "a");
        assert_eq!(letter_code(25), "z");
        assert_eq!(letter_code(26), "ba");
        assert_eq!(letter_code(27), "bb");
        for k in 0..100 {
            assert_eq!(letter_index(&letter_code(k)), Some(k));
        }
    }

    #[test]
    fn label_parsing() {
        assert_eq!(parse_label("37.2.a.a").unwrap(), (37, 2, 0));
        assert_eq!(parse_label("169.2.a.b").unwrap(), (169, 2, 1));
        assert!(parse_label("37.4.a.a").is_err());
        assert!(parse_label("37.2.b.a").is_err());
        assert!(parse_label("37.2.a").is_err());
        assert!(parse_label("x.2.a.a").is_err());
    }
}
