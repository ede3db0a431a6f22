//! Grouping of solutions by CCZ fingerprint and comparison with known APN
//! permutations.

use std::sync::OnceLock;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::MAX_N;
use crate::vbf::{
    butterfly, butterfly_alpha, fingerprint, monomial_lut, CczFingerprint, FiniteField, Lut,
    FINGERPRINT_SCHEMA,
    N5_MONOMIAL_EXPONENTS, N7_MONOMIAL_EXPONENTS,
};

pub const GROUPS_SCHEMA: u32 = 1;

/// A labelled reference function and its fingerprint.
#[derive(Clone, Debug)]
pub struct KnownFixture {
    pub label: String,
    pub lut: Lut,
    pub fingerprint: CczFingerprint,
}

impl KnownFixture {
    pub fn new(label: impl Into<String>, lut: Lut) -> Self {
        let fingerprint = fingerprint(&lut);
        KnownFixture {
            label: label.into(),
            lut,
            fingerprint,
        }
    }
}

const KNOWN_FINGERPRINTS_JSON: &str = include_str!("../assets/known_fingerprints.json");

#[derive(Deserialize)]
struct CachedFixture {
    label: String,
    lut: String,
    fingerprint: CczFingerprint,
}

#[derive(Deserialize)]
struct CachedFixtures {
    fingerprint_schema: u32,
    fixtures: Vec<CachedFixture>,
}

/// Bundled fingerprints of the fixtures below; an entry is used only if its
/// label and table match the constructed fixture.
fn cached(label: &str, lut: &Lut) -> Option<CczFingerprint> {
    static CACHE: OnceLock<Vec<CachedFixture>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        let file: CachedFixtures = serde_json::from_str(KNOWN_FINGERPRINTS_JSON).expect("bundled fingerprints parse");
        if file.fingerprint_schema == FINGERPRINT_SCHEMA {
            file.fixtures
        } else {
            Vec::new()
        }
    });
    all.iter()
        .find(|c| c.label == label && c.lut == lut.to_hex_line())
        .map(|c| c.fingerprint.clone())
}

/// Builds the fixture list, computing every fingerprint when `fresh`.
pub fn build_known(n: usize, fresh: bool) -> Vec<KnownFixture> {
    let make = |label: String, lut: Lut| match (fresh, cached(&label, &lut)) {
        (false, Some(fingerprint)) => KnownFixture { label, lut, fingerprint },
        _ => KnownFixture::new(label, lut),
    };
    let monomials = |exps: &[u64]| {
        let field = FiniteField::with_default_modulus(n).expect("supported dimension");
        exps.iter()
            .map(|&d| make(format!("x^{d} n={n}"), monomial_lut(&field, d)))
            .collect()
    };
    match n {
        3 => monomials(&[3]),
        5 => monomials(&N5_MONOMIAL_EXPONENTS),
        6 => vec![make(
            "Dillon n=6".into(),
            butterfly(butterfly_alpha(), 1).expect("valid butterfly parameters"),
        )],
        7 => monomials(&N7_MONOMIAL_EXPONENTS),
        _ => Vec::new(),
    }
}

/// Known APN permutations of dimension `n` (cached).
pub fn known_fixtures(n: usize) -> &'static [KnownFixture] {
    static CACHE: [OnceLock<Vec<KnownFixture>>; MAX_N + 1] = [const { OnceLock::new() }; MAX_N + 1];
    match CACHE.get(n) {
        Some(cell) => cell.get_or_init(|| build_known(n, false)),
        None => &[],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupStatus {
    /// Same fingerprint as a known function; equivalence is not claimed.
    MatchesFingerprintOf,
    /// Fingerprint differs from every known one, which proves inequivalence.
    InequivalentToAllKnown,
}

#[derive(Clone, Debug)]
pub struct SolutionGroup {
    pub fingerprint: CczFingerprint,
    pub members: Vec<Lut>,
    /// Labels of every known fixture sharing the fingerprint, joined by `" / "`.
    pub known_match: Option<String>,
}

impl SolutionGroup {
    pub fn status(&self) -> GroupStatus {
        if self.known_match.is_some() {
            GroupStatus::MatchesFingerprintOf
        } else {
            GroupStatus::InequivalentToAllKnown
        }
    }
}

fn parallel_fingerprints(luts: &[Lut]) -> Vec<CczFingerprint> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(luts.len().max(1));
    let chunk = luts.len().div_ceil(workers).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = luts
            .chunks(chunk)
            .map(|c| s.spawn(move || c.iter().map(fingerprint).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("fingerprint worker panicked"))
            .collect()
    })
}

/// Partitions `solutions` by fingerprint, in order of first appearance, and
/// labels groups whose fingerprint equals that of a fixture in `known`.
pub fn group(solutions: &[Lut], known: &[KnownFixture]) -> Result<Vec<SolutionGroup>> {
    if let Some(first) = solutions.first() {
        if let Some(bad) = solutions.iter().find(|s| s.n() != first.n()) {
            return Err(Error::DimensionMismatch {
                expected: first.n(),
                got: bad.n(),
            });
        }
    }
    let fps = parallel_fingerprints(solutions);
    let mut groups: Vec<SolutionGroup> = Vec::new();
    for (lut, fp) in solutions.iter().zip(fps) {
        match groups.iter_mut().find(|g| g.fingerprint == fp) {
            Some(g) => g.members.push(lut.clone()),
            None => {
                let labels: Vec<&str> = known
                    .iter()
                    .filter(|k| k.fingerprint == fp)
                    .map(|k| k.label.as_str())
                    .collect();
                groups.push(SolutionGroup {
                    fingerprint: fp,
                    members: vec![lut.clone()],
                    known_match: (!labels.is_empty()).then(|| labels.join(" / ")),
                });
            }
        }
    }
    Ok(groups)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub digest: String,
    pub status: GroupStatus,
    pub known_match: Option<String>,
    pub member_count: usize,
    pub fingerprint: CczFingerprint,
    /// Members in the LUT wire format.
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupsFile {
    pub schema: u32,
    pub n: usize,
    pub groups: Vec<GroupRecord>,
}

impl GroupsFile {
    pub fn new(n: usize, groups: &[SolutionGroup]) -> Self {
        GroupsFile {
            schema: GROUPS_SCHEMA,
            n,
            groups: groups
                .iter()
                .map(|g| GroupRecord {
                    digest: g.fingerprint.digest(),
                    status: g.status(),
                    known_match: g.known_match.clone(),
                    member_count: g.members.len(),
                    fingerprint: g.fingerprint.clone(),
                    members: g.members.iter().map(Lut::to_hex_line).collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::Gf2Matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> Gf2Matrix {
        loop {
            let rows: Vec<u16> = (0..n).map(|_| rng.gen_range(0..1u16 << n)).collect();
            let m = Gf2Matrix::from_rows(n, &rows).unwrap();
            if m.is_invertible() {
                return m;
            }
        }
    }

    #[test]
    fn bundled_fingerprints_match_fresh_ones_up_to_n6() {
        for n in [3, 5, 6] {
            let fresh = build_known(n, true);
            let bundled = known_fixtures(n);
            assert_eq!(fresh.len(), bundled.len());
            for (f, b) in fresh.iter().zip(bundled) {
                assert_eq!(f.fingerprint, b.fingerprint, "{}", f.label);
            }
        }
    }

    #[test]
    fn empty_input_gives_no_groups() {
        assert!(group(&[], known_fixtures(5)).unwrap().is_empty());
    }

    #[test]
    fn n5_monomials_are_labelled() {
        let known = known_fixtures(5);
        let luts: Vec<Lut> = known.iter().map(|k| k.lut.clone()).collect();
        let groups = group(&luts, known).unwrap();
        assert!(groups.iter().all(|g| g.status() == GroupStatus::MatchesFingerprintOf));
        assert_eq!(groups.iter().map(|g| g.members.len()).sum::<usize>(), 5);
    }

    #[test]
    fn affine_images_stay_in_one_group() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let field = FiniteField::with_default_modulus(5).unwrap();
        let f = monomial_lut(&field, 3);
        let mut luts = vec![f.clone()];
        for _ in 0..4 {
            let (a, b) = (random_invertible(5, &mut rng), random_invertible(5, &mut rng));
            let (c, d) = (rng.gen_range(0..32), rng.gen_range(0..32));
            luts.push(f.affine_transform(&a, c, &b, d).unwrap());
        }
        let groups = group(&luts, &[]).unwrap();
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].members.len(), 5);
        assert_eq!(groups[0].status(), GroupStatus::InequivalentToAllKnown);
    }

    #[test]
    fn mixed_dimensions_are_rejected() {
        assert!(group(&[Lut::identity(3), Lut::identity(4)], &[]).is_err());
    }

    #[test]
    fn groups_file_serializes_with_kebab_status() {
        let known = known_fixtures(3);
        let groups = group(&[known[0].lut.clone()], known).unwrap();
        let json = serde_json::to_string(&GroupsFile::new(3, &groups)).unwrap();
        assert!(json.contains("\"matches-fingerprint-of\""));
        assert!(json.contains("\"x^3 n=3\""));
    }
}
