//! Exhaustive census of abelian regular subgroups of `Aff(GF(p)^d)` for tiny
//! `p` and `d`, from the algebra side and from the group side, and their
//! classification up to isomorphism (equivalently, `GL(V)`-conjugacy).

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::affine::{full_affine_group, AffineElement, SubgroupElements};
use crate::algebra::{pair_count, AbelianType, Algebra};
use crate::correspondence::{conjugate_elements, find_isomorphism, ring_to_subgroup};
use crate::error::{Error, Result};
use crate::field::{Fp, RowVector};
use crate::format::{emit_algebra, parse_algebra};
use crate::gl::{general_linear_group, gl_order};

/// Search limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Structure tables tried by [`enumerate_algebras`].
    pub max_candidates: u128,
    /// `|Aff(V)|` allowed for [`enumerate_subgroups`].
    pub max_affine_order: u128,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_candidates: 1 << 24,
            max_affine_order: 10_000,
        }
    }
}

/// Environment variable that overrides [`Bounds::max_candidates`].
pub const MAX_CANDIDATES_VAR: &str = "RADAFF_MAX_CANDIDATES";

impl Bounds {
    /// Defaults, with `RADAFF_MAX_CANDIDATES` applied when set.
    pub fn from_env() -> Result<Self> {
        let mut b = Bounds::default();
        if let Ok(v) = std::env::var(MAX_CANDIDATES_VAR) {
            b.max_candidates = v.trim().parse().map_err(|_| {
                Error::InvalidParameters(format!("{MAX_CANDIDATES_VAR}={v} is not an integer"))
            })?;
        }
        Ok(b)
    }
}

/// All nilpotent commutative associative algebra structures on `GF(p)^d`.
/// The free parameters are the products `e_i e_j`, `i <= j`; the search is
/// split into shards by the value of `e_1 e_1`.
pub fn enumerate_algebras(p: Fp, d: usize, bounds: &Bounds) -> Result<Vec<Algebra>> {
    if d == 0 {
        return Err(Error::InvalidParameters("dimension must be positive".into()));
    }
    let entries = pair_count(d) * d;
    let q = p.p() as u128;
    let candidates = q.checked_pow(entries as u32).unwrap_or(u128::MAX);
    if candidates > bounds.max_candidates {
        return Err(Error::BoundExceeded {
            what: "structure-constant candidates",
            needed: candidates,
            bound: bounds.max_candidates,
        });
    }
    let shards = q.pow(d as u32) as u64;
    let per_shard = (candidates / shards as u128) as u64;
    let mut found: Vec<Algebra> = (0..shards)
        .into_par_iter()
        .flat_map_iter(|shard| {
            let mut table = vec![0u32; entries];
            digits(shard, p, &mut table[..d]);
            (0..per_shard).filter_map(move |rest| {
                let mut table = table.clone();
                digits(rest, p, &mut table[d..]);
                let a = Algebra::from_packed_unchecked(p, d, table).expect("well-formed");
                (a.is_associative() && a.is_nilpotent()).then_some(a)
            })
        })
        .collect();
    found.sort();
    Ok(found)
}

/// Writes `n` in base `p`, least significant digit first.
fn digits(mut n: u64, p: Fp, out: &mut [u32]) {
    let q = p.p() as u64;
    for o in out {
        *o = (n % q) as u32;
        n /= q;
    }
}

/// All abelian regular subgroups of `Aff(GF(p)^d)`, found on the group side
/// without reference to algebras.
///
/// The search assigns to each point `x`, smallest index first, an element
/// with `0`-image `x`, and closes the chosen elements under composition. A
/// branch dies when two elements fail to commute or two distinct elements
/// land on the same point. Every surviving branch fills all of `V` and is an
/// abelian regular subgroup; distinct branches differ at their first choice,
/// so each subgroup appears once.
pub fn enumerate_subgroups(p: Fp, d: usize, bounds: &Bounds) -> Result<Vec<SubgroupElements>> {
    let points = p.checked_order(d).ok_or(Error::InvalidParameters("V too large".into()))?;
    let gl_size = gl_order(p, d).unwrap_or(u128::MAX);
    let aff = gl_size.saturating_mul(points as u128);
    if aff > bounds.max_affine_order {
        return Err(Error::BoundExceeded {
            what: "affine group order",
            needed: aff,
            bound: bounds.max_affine_order,
        });
    }
    let gl = general_linear_group(p, d, gl_size as usize)?;
    let mut slots: Vec<Option<AffineElement>> = vec![None; points as usize];
    slots[0] = Some(AffineElement::identity(p, d));
    let mut out = Vec::new();
    search_subgroups(p, d, &gl, slots, &mut out);
    let mut groups: Vec<SubgroupElements> = out
        .into_iter()
        .map(|els| SubgroupElements::from_unchecked(p, d, els))
        .collect();
    groups.sort_by(|a, b| a.elements().cmp(b.elements()));
    Ok(groups)
}

fn search_subgroups(
    p: Fp,
    d: usize,
    gl: &[crate::field::Matrix],
    slots: Vec<Option<AffineElement>>,
    out: &mut Vec<Vec<AffineElement>>,
) {
    let Some(x) = slots.iter().position(Option::is_none) else {
        out.push(slots.into_iter().map(|s| s.expect("filled")).collect());
        return;
    };
    let shift = RowVector::from_index(p, d, x as u64);
    for a in gl {
        let g = AffineElement::new_unchecked(a.clone(), shift.clone());
        let mut trial = slots.clone();
        if close_with(&mut trial, g) {
            search_subgroups(p, d, gl, trial, out);
        }
    }
}

/// Adds `g` and everything it generates together with the elements already
/// present. Returns false on a collision or a non-commuting pair.
fn close_with(slots: &mut [Option<AffineElement>], g: AffineElement) -> bool {
    let zero = RowVector::zero(g.modulus(), g.dim());
    let mut queue = vec![g];
    while let Some(h) = queue.pop() {
        let pos = h.apply(&zero).index() as usize;
        match &slots[pos] {
            Some(existing) if *existing == h => continue,
            Some(_) => return false,
            None => {}
        }
        let present: Vec<AffineElement> = slots.iter().flatten().cloned().collect();
        slots[pos] = Some(h.clone());
        for k in present.iter().chain(std::iter::once(&h)) {
            let hk = crate::affine::compose(&h, k).expect("same space");
            if hk != crate::affine::compose(k, &h).expect("same space") {
                return false;
            }
            queue.push(hk);
        }
    }
    true
}

/// Invariants of an isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub abelian_type: AbelianType,
    pub annihilator_dim: usize,
    pub nilpotency_class: usize,
    pub triple_products_vanish: bool,
}

impl Fingerprint {
    pub fn of(a: &Algebra) -> Result<Self> {
        Ok(Fingerprint {
            abelian_type: a.abelian_type()?,
            annihilator_dim: a.annihilator().len(),
            nilpotency_class: a.nilpotency_class().ok_or(Error::NotNilpotent)?,
            triple_products_vanish: a.triple_products_vanish(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusClass {
    /// Least member in the algebra ordering.
    pub representative: Algebra,
    /// Positions in [`CensusResult::algebras`].
    pub members: Vec<usize>,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusResult {
    pub p: Fp,
    pub d: usize,
    /// Sorted.
    pub algebras: Vec<Algebra>,
    /// Sorted by representative.
    pub classes: Vec<CensusClass>,
    /// Whether `GL(V)`-conjugacy of the subgroups was checked directly in both
    /// directions, not only through the isomorphism witnesses.
    pub conjugacy_exhausted: bool,
}

impl CensusResult {
    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.members.len()).collect()
    }
}

/// Largest `|GL(V)| * classes^2` for which non-conjugacy of distinct classes
/// is checked by trying every `phi`.
const CONJUGACY_EXHAUSTION_BOUND: u128 = 1 << 20;

/// Partitions `algebras` into isomorphism classes and checks that the
/// classes are exactly the `GL(V)`-conjugacy classes of their subgroups.
pub fn classify(p: Fp, d: usize, algebras: &[Algebra]) -> Result<CensusResult> {
    let mut sorted = algebras.to_vec();
    sorted.sort();
    sorted.dedup();
    for a in &sorted {
        if a.modulus() != p || a.dim() != d {
            return Err(Error::Incompatible("census algebras must share p and d".into()));
        }
    }
    let mut classes: Vec<CensusClass> = Vec::new();
    let mut witnesses = Vec::with_capacity(sorted.len());
    for (idx, a) in sorted.iter().enumerate() {
        let mut placed = false;
        for class in classes.iter_mut() {
            if let Some(phi) = find_isomorphism(&class.representative, a)? {
                class.members.push(idx);
                witnesses.push(Some(phi));
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(CensusClass {
                representative: a.clone(),
                members: vec![idx],
                fingerprint: Fingerprint::of(a)?,
            });
            witnesses.push(None);
        }
    }

    let subgroups: Vec<Option<SubgroupElements>> = sorted
        .iter()
        .map(|a| ring_to_subgroup(a).ok().and_then(|t| t.to_subgroup().ok()))
        .collect();

    for class in &classes {
        let rep = &class.representative;
        let rep_sub = subgroups[class.members[0]].as_ref();
        for &m in &class.members {
            assert_eq!(
                Fingerprint::of(&sorted[m])?,
                class.fingerprint,
                "fingerprint differs inside a class"
            );
            if let (Some(phi), Some(s1), Some(s2)) = (&witnesses[m], rep_sub, &subgroups[m]) {
                assert_eq!(&conjugate_elements(s1, phi)?, s2, "witness does not conjugate");
                debug_assert!(crate::correspondence::is_isomorphism(rep, &sorted[m], phi)?);
            }
        }
    }

    let gl_size = gl_order(p, d).unwrap_or(u128::MAX);
    let k = classes.len() as u128;
    let conjugacy_exhausted = subgroups.iter().all(Option::is_some)
        && gl_size.saturating_mul(k * k) <= CONJUGACY_EXHAUSTION_BOUND;
    if conjugacy_exhausted {
        let gl = general_linear_group(p, d, gl_size as usize)?;
        for (i, ci) in classes.iter().enumerate() {
            let si = subgroups[ci.members[0]].as_ref().expect("checked");
            for cj in &classes[i + 1..] {
                let sj = subgroups[cj.members[0]].as_ref().expect("checked");
                for phi in &gl {
                    assert_ne!(
                        &conjugate_elements(si, phi)?,
                        sj,
                        "non-isomorphic algebras with conjugate subgroups"
                    );
                }
            }
        }
    }

    Ok(CensusResult {
        p,
        d,
        algebras: sorted,
        classes,
        conjugacy_exhausted,
    })
}

fn header(p: Fp, d: usize, algebras: usize, classes: usize) -> String {
    format!("census p={p} d={d} algebras={algebras} classes={classes}")
}

fn class_line(size: usize, f: &Fingerprint) -> String {
    format!(
        "class size={} type={} dimU={} nilclass={} normalized_by_N={}",
        size,
        f.abelian_type,
        f.annihilator_dim,
        f.nilpotency_class,
        u8::from(f.triple_products_vanish)
    )
}

/// One header line, then per class a `class ...` record followed by its
/// representative in the algebra text format.
pub fn census_report(r: &CensusResult) -> String {
    let mut s = header(r.p, r.d, r.algebras.len(), r.classes.len());
    s.push('\n');
    for c in &r.classes {
        writeln!(s, "{}", class_line(c.members.len(), &c.fingerprint)).unwrap();
        s.push_str(&emit_algebra(&c.representative));
    }
    s
}

/// A census report read back from text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedReport {
    pub p: Fp,
    pub d: usize,
    pub algebras: usize,
    pub classes: Vec<(usize, Fingerprint, Algebra)>,
}

fn fields(line: &str, n: usize) -> Result<HashMap<&str, &str>> {
    let mut out = HashMap::new();
    for tok in line.split_whitespace().skip(1) {
        let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse {
            line: n,
            msg: format!("expected key=value, found `{tok}`"),
        })?;
        out.insert(k, v);
    }
    Ok(out)
}

fn field<T: std::str::FromStr>(map: &HashMap<&str, &str>, key: &str, n: usize) -> Result<T> {
    map.get(key)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Parse {
            line: n,
            msg: format!("missing or malformed `{key}`"),
        })
}

pub fn parse_census_report(text: &str) -> Result<ParsedReport> {
    let lines: Vec<&str> = text.lines().collect();
    let first = lines.first().ok_or(Error::Parse {
        line: 1,
        msg: "empty report".into(),
    })?;
    if !first.starts_with("census ") {
        return Err(Error::Parse {
            line: 1,
            msg: "expected `census` header".into(),
        });
    }
    let h = fields(first, 1)?;
    let p = Fp::new(field(&h, "p", 1)?)?;
    let d: usize = field(&h, "d", 1)?;
    let algebras: usize = field(&h, "algebras", 1)?;
    let n_classes: usize = field(&h, "classes", 1)?;

    let mut classes = Vec::new();
    let mut i = 1;
    while i < lines.len() {
        let n = i + 1;
        if !lines[i].starts_with("class ") {
            return Err(Error::Parse {
                line: n,
                msg: "expected `class` record".into(),
            });
        }
        let c = fields(lines[i], n)?;
        let orders: Vec<u64> = c
            .get("type")
            .ok_or(Error::Parse {
                line: n,
                msg: "missing `type`".into(),
            })?
            .split(',')
            .map(|o| {
                o.parse().map_err(|_| Error::Parse {
                    line: n,
                    msg: format!("bad cyclic order `{o}`"),
                })
            })
            .collect::<Result<_>>()?;
        let fingerprint = Fingerprint {
            abelian_type: AbelianType::new(p, orders)?,
            annihilator_dim: field(&c, "dimU", n)?,
            nilpotency_class: field(&c, "nilclass", n)?,
            triple_products_vanish: field::<u8>(&c, "normalized_by_N", n)? == 1,
        };
        let size: usize = field(&c, "size", n)?;
        let mut j = i + 1;
        while j < lines.len() && !lines[j].starts_with("class ") {
            j += 1;
        }
        let body = lines[i + 1..j].join("\n");
        let rep = parse_algebra(&body).map_err(|e| match e {
            Error::Parse { line, msg } => Error::Parse {
                line: line + i + 1,
                msg,
            },
            other => other,
        })?;
        classes.push((size, fingerprint, rep));
        i = j;
    }
    if classes.len() != n_classes {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header says {n_classes} classes, found {}", classes.len()),
        });
    }
    Ok(ParsedReport {
        p,
        d,
        algebras,
        classes,
    })
}

/// Both routes for one `(p, d)`.
pub fn run_census(p: Fp, d: usize, bounds: &Bounds) -> Result<CensusResult> {
    let algebras = enumerate_algebras(p, d, bounds)?;
    classify(p, d, &algebras)
}

/// Whether the image of the algebra-side census under `ring_to_subgroup`
/// equals the group-side census as a set.
pub fn routes_agree(p: Fp, d: usize, bounds: &Bounds) -> Result<bool> {
    let algebras = enumerate_algebras(p, d, bounds)?;
    let mut from_rings: Vec<SubgroupElements> = algebras
        .iter()
        .map(|a| ring_to_subgroup(a)?.to_subgroup())
        .collect::<Result<_>>()?;
    from_rings.sort_by(|a, b| a.elements().cmp(b.elements()));
    let direct = enumerate_subgroups(p, d, bounds)?;
    Ok(from_rings == direct)
}

/// Exposed for callers that want the ambient group.
pub fn affine_group(p: Fp, d: usize, bounds: &Bounds) -> Result<SubgroupElements> {
    full_affine_group(p, d, bounds.max_affine_order.min(usize::MAX as u128) as usize)
}
