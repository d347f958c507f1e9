//! Generic tempered representations of `GL_m(E)` described by Zelevinsky
//! segments, their conductors and unramified parts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{approx_eq, cmp_cnum, CNum, ToleranceCfg};

/// Multiset of Satake parameters over the residue cardinality `base`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatakeSet {
    params: Vec<CNum>,
    base: u64,
}

impl SatakeSet {
    pub fn new(params: Vec<CNum>, base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidArgument(format!("residue cardinality {base} < 2")));
        }
        if let Some(z) = params.iter().find(|z| !z.is_finite() || z.norm() == 0.0) {
            return Err(Error::InvalidArgument(format!("Satake parameter {z} must be finite and nonzero")));
        }
        Ok(Self { params, base })
    }

    pub fn params(&self) -> &[CNum] {
        &self.params
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn rank(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn is_tempered(&self, tol: f64) -> bool {
        self.params.iter().all(|z| (z.norm() - 1.0).abs() < tol)
    }

    pub fn conj(&self) -> Self {
        Self { params: self.params.iter().map(|z| z.conj()).collect(), base: self.base }
    }

    pub fn inverse(&self) -> Self {
        Self { params: self.params.iter().map(|z| z.inv()).collect(), base: self.base }
    }

    pub fn central(&self) -> CNum {
        self.params.iter().product()
    }
}

/// Cuspidal support of a segment.
#[derive(Clone, Debug, PartialEq)]
pub enum CuspSupport {
    /// Unramified character `χ` of `E^×` with `χ(ϖ) = α`.
    UnramChar { alpha: CNum },
    /// Ramified supercuspidal of `GL_l(E)` with conductor `a ≥ 1`.
    RamCusp { dim: u32, cond: u32, label: Option<String> },
}

impl CuspSupport {
    pub fn dim(&self) -> u32 {
        match self {
            CuspSupport::UnramChar { .. } => 1,
            CuspSupport::RamCusp { dim, .. } => *dim,
        }
    }

    pub fn conductor(&self) -> u32 {
        match self {
            CuspSupport::UnramChar { .. } => 0,
            CuspSupport::RamCusp { cond, .. } => *cond,
        }
    }

    pub fn is_unramified(&self) -> bool {
        matches!(self, CuspSupport::UnramChar { .. })
    }
}

/// The segment `[ν^{−(k−1)}ρ, ρ]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SegmentWire", into = "SegmentWire")]
pub struct Segment {
    pub base: CuspSupport,
    pub k: u32,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum SegmentWire {
    Unram {
        alpha: [f64; 2],
        #[serde(default = "one")]
        k: u32,
    },
    Ram {
        dim: u32,
        cond: u32,
        #[serde(default = "one")]
        k: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
}

fn one() -> u32 {
    1
}

impl TryFrom<SegmentWire> for Segment {
    type Error = Error;
    fn try_from(w: SegmentWire) -> Result<Self> {
        match w {
            SegmentWire::Unram { alpha, k } => {
                Segment::new(CuspSupport::UnramChar { alpha: CNum::new(alpha[0], alpha[1]) }, k)
            }
            SegmentWire::Ram { dim, cond, k, label } => {
                Segment::new(CuspSupport::RamCusp { dim, cond, label }, k)
            }
        }
    }
}

impl From<Segment> for SegmentWire {
    fn from(s: Segment) -> Self {
        match s.base {
            CuspSupport::UnramChar { alpha } => SegmentWire::Unram { alpha: [alpha.re, alpha.im], k: s.k },
            CuspSupport::RamCusp { dim, cond, label } => SegmentWire::Ram { dim, cond, k: s.k, label },
        }
    }
}

impl Segment {
    pub fn new(base: CuspSupport, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("segment length must be >= 1".into()));
        }
        match &base {
            CuspSupport::UnramChar { alpha } if !alpha.is_finite() || alpha.norm() == 0.0 => {
                return Err(Error::InvalidArgument("unramified character needs a nonzero parameter".into()));
            }
            CuspSupport::RamCusp { dim, cond, .. } if *dim == 0 || *cond == 0 => {
                return Err(Error::InvalidArgument("ramified cuspidal support needs dim >= 1 and conductor >= 1".into()));
            }
            _ => {}
        }
        Ok(Self { base, k })
    }

    pub fn unram(alpha: CNum, k: u32) -> Result<Self> {
        Self::new(CuspSupport::UnramChar { alpha }, k)
    }

    pub fn ram(dim: u32, cond: u32, k: u32) -> Result<Self> {
        Self::new(CuspSupport::RamCusp { dim, cond, label: None }, k)
    }

    pub fn rank(&self) -> usize {
        (self.k * self.base.dim()) as usize
    }

    /// Weil–Deligne conductor `k·a(ρ) + (k−1)·dim ρ^I`.
    pub fn conductor(&self) -> u32 {
        let inertia = u32::from(self.base.is_unramified());
        self.k * self.base.conductor() + (self.k - 1) * inertia
    }
}

/// A generic representation given as a product of segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RepWire", into = "RepWire")]
pub struct GenericRep {
    segments: Vec<Segment>,
}

#[derive(Clone, Serialize, Deserialize)]
struct RepWire {
    segments: Vec<Segment>,
}

impl TryFrom<RepWire> for GenericRep {
    type Error = Error;
    fn try_from(w: RepWire) -> Result<Self> {
        GenericRep::new(w.segments)
    }
}

impl From<GenericRep> for RepWire {
    fn from(r: GenericRep) -> Self {
        RepWire { segments: r.segments }
    }
}

impl GenericRep {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument("a representation needs at least one segment".into()));
        }
        Ok(Self { segments })
    }

    /// The unramified principal series with the given Satake parameters.
    pub fn unramified(alpha: &[CNum]) -> Result<Self> {
        Self::new(alpha.iter().map(|&a| Segment::unram(a, 1)).collect::<Result<_>>()?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("representation serializes")
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn rank(&self) -> usize {
        self.segments.iter().map(Segment::rank).sum()
    }

    pub fn is_tempered(&self, tol: f64) -> bool {
        self.segments.iter().all(|s| match s.base {
            CuspSupport::UnramChar { alpha } => (alpha.norm() - 1.0).abs() < tol,
            CuspSupport::RamCusp { .. } => true,
        })
    }

    pub fn is_unramified(&self) -> bool {
        self.conductor() == 0
    }
}

pub fn conductor(rep: &GenericRep) -> u32 {
    rep.segments.iter().map(Segment::conductor).sum()
}

impl GenericRep {
    pub fn conductor(&self) -> u32 {
        conductor(self)
    }
}

/// Number `r` of unramified cuspidal supports and their parameters, ordered by
/// increasing modulus (decreasing `Re t` for `α = q^{−t}`).
pub fn unramified_part(rep: &GenericRep, q_e: u64) -> Result<(usize, SatakeSet)> {
    let mut params: Vec<CNum> = rep
        .segments
        .iter()
        .filter_map(|s| match s.base {
            CuspSupport::UnramChar { alpha } => Some(alpha),
            CuspSupport::RamCusp { .. } => None,
        })
        .collect();
    params.sort_by(cmp_cnum);
    Ok((params.len(), SatakeSet::new(params, q_e)?))
}

/// Whether the multiset equals its multiset of inverses, via a maximum
/// bipartite matching under `cfg`.
pub fn is_conjugate_selfdual(s: &SatakeSet, cfg: ToleranceCfg) -> bool {
    let a = s.params();
    let inv: Vec<CNum> = a.iter().map(|z| z.inv()).collect();
    let adj: Vec<Vec<usize>> =
        a.iter().map(|&x| (0..inv.len()).filter(|&j| approx_eq(x, inv[j], cfg)).collect()).collect();
    perfect_matching(&adj, a.len())
}

fn perfect_matching(adj: &[Vec<usize>], right: usize) -> bool {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; right];
    (0..adj.len()).all(|u| augment(u, adj, &mut vec![false; right], &mut owner))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceCfg {
        ToleranceCfg::new(1e-9, 1e-9).unwrap()
    }

    #[test]
    fn conductor_examples() {
        let unr = GenericRep::unramified(&[CNum::new(1.0, 0.0), CNum::new(0.0, 1.0)]).unwrap();
        assert_eq!(unr.conductor(), 0);
        let st = GenericRep::new(vec![Segment::unram(CNum::new(1.0, 0.0), 2).unwrap()]).unwrap();
        assert_eq!(st.conductor(), 1);
        assert_eq!(st.rank(), 2);
        for k in 1..5 {
            let r = GenericRep::new(vec![Segment::ram(2, 3, k).unwrap()]).unwrap();
            assert_eq!(r.conductor(), 3 * k);
            assert_eq!(r.rank(), 2 * k as usize);
        }
    }

    #[test]
    fn unramified_part_examples() {
        let r = GenericRep::new(vec![Segment::ram(1, 2, 1).unwrap(), Segment::ram(1, 1, 1).unwrap()]).unwrap();
        let (rk, s) = unramified_part(&r, 9).unwrap();
        assert_eq!(rk, 0);
        assert!(s.is_empty());

        let a = CNum::from_polar(1.0, 0.7);
        let r = GenericRep::new(vec![Segment::ram(1, 1, 1).unwrap(), Segment::unram(a, 1).unwrap()]).unwrap();
        assert_eq!(unramified_part(&r, 9).unwrap().1.params(), &[a]);

        let big = CNum::new(2.0, 0.0);
        let small = CNum::new(0.5, 0.0);
        let r = GenericRep::new(vec![
            Segment::unram(big, 1).unwrap(),
            Segment::ram(1, 1, 1).unwrap(),
            Segment::unram(small, 1).unwrap(),
        ])
        .unwrap();
        let (rk, s) = unramified_part(&r, 9).unwrap();
        assert_eq!(rk, 2);
        assert_eq!(s.params(), &[small, big]);
    }

    #[test]
    fn selfdual_examples() {
        let t = 0.9;
        let pair = SatakeSet::new(vec![CNum::from_polar(1.0, t), CNum::from_polar(1.0, -t)], 9).unwrap();
        assert!(is_conjugate_selfdual(&pair, tol()));
        let pm = SatakeSet::new(vec![CNum::new(1.0, 0.0), CNum::new(-1.0, 0.0)], 9).unwrap();
        assert!(is_conjugate_selfdual(&pm, tol()));
        let two = SatakeSet::new(vec![CNum::new(2.0, 0.0)], 9).unwrap();
        assert!(!is_conjugate_selfdual(&two, tol()));
        // A greedy pairing would fail here; multiplicities matter.
        let i = CNum::new(0.0, 1.0);
        let s = SatakeSet::new(vec![i, -i, i, -i], 9).unwrap();
        assert!(is_conjugate_selfdual(&s, tol()));
        let s = SatakeSet::new(vec![i, -i, i, i], 9).unwrap();
        assert!(!is_conjugate_selfdual(&s, tol()));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"segments":[{"type":"unram","alpha":[0.0,1.0],"k":1},{"type":"ram","dim":1,"cond":2,"k":1}]}"#;
        let r = GenericRep::from_json(text).unwrap();
        assert_eq!(r.rank(), 2);
        assert_eq!(r.conductor(), 2);
        assert_eq!(GenericRep::from_json(&r.to_json()).unwrap(), r);
        assert!(GenericRep::from_json(r#"{"segments":[]}"#).is_err());
        assert!(GenericRep::from_json(r#"{"segments":[{"type":"ram","dim":1,"cond":0,"k":1}]}"#).is_err());
    }

    #[test]
    fn rejects_zero_parameters() {
        assert!(SatakeSet::new(vec![CNum::new(0.0, 0.0)], 9).is_err());
        assert!(Segment::unram(CNum::new(0.0, 0.0), 1).is_err());
        assert!(Segment::ram(1, 1, 0).is_err());
    }
}
