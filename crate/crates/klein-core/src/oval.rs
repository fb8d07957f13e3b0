//! Abstract ovals over small prime fields.
//!
//! The conic `xz = y²` in `PG(2, p)` is parametrised by `t ↦ (1, t, t²)` for
//! `t ∈ GF(p)` and `∞ ↦ (0, 0, 1)`; element `t` of the oval has index `t` and
//! `∞` has index `p`. Permutations are stored as image tables and compose
//! left to right, like motions.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::verify::{run_oval_sample_suite, Report, TrialConfig};
use crate::{Error, Result};

/// Arithmetic modulo an odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField> {
        if p < 3 || p % 2 == 0 || (3..).step_by(2).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            return Err(Error::Domain(format!("{p} is not an odd prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        (a % self.p != 0).then(|| self.pow(a, self.p - 2))
    }
}

pub type Perm = Vec<usize>;

fn compose(a: &[usize], b: &[usize]) -> Perm {
    a.iter().map(|&x| b[x]).collect()
}

fn is_identity(a: &[usize]) -> bool {
    a.iter().enumerate().all(|(i, &x)| i == x)
}

fn is_permutation(a: &[usize], n: usize) -> bool {
    if a.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    a.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// A finite set `{0, …, n−1}` with a family of involutory permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AbstractOval {
    pub size: usize,
    pub involutions: Vec<Perm>,
}

/// The conic oval together with the off-conic point inducing each involution.
#[derive(Clone, Debug)]
pub struct ConicOval {
    pub field: PrimeField,
    pub oval: AbstractOval,
    pub centers: Vec<[u64; 3]>,
    pub conic: Vec<[u64; 3]>,
}

/// Points of `PG(2, p)`, scaled so the first nonzero coordinate is 1.
fn projective_points(f: &PrimeField) -> Vec<[u64; 3]> {
    let p = f.modulus();
    let mut pts = Vec::with_capacity((p * p + p + 1) as usize);
    for y in 0..p {
        for z in 0..p {
            pts.push([1, y, z]);
        }
    }
    for z in 0..p {
        pts.push([0, 1, z]);
    }
    pts.push([0, 0, 1]);
    pts
}

fn normalise(f: &PrimeField, v: [u64; 3]) -> Option<[u64; 3]> {
    let lead = v.iter().copied().find(|&c| c != 0)?;
    let k = f.inv(lead)?;
    Some(v.map(|c| f.mul(c, k)))
}

/// `Q(v) = xz − y²`.
fn quad_form(f: &PrimeField, v: &[u64; 3]) -> u64 {
    f.sub(f.mul(v[0], v[2]), f.mul(v[1], v[1]))
}

/// Twice the polar form of `Q`.
fn polar2(f: &PrimeField, u: &[u64; 3], v: &[u64; 3]) -> u64 {
    let s = f.add(f.mul(u[0], v[2]), f.mul(u[2], v[0]));
    f.sub(s, f.mul(2, f.mul(u[1], v[1])))
}

fn conic_point(f: &PrimeField, t: usize) -> [u64; 3] {
    let p = f.modulus() as usize;
    if t == p {
        [0, 0, 1]
    } else {
        let t = t as u64;
        [1, t, f.mul(t, t)]
    }
}

fn conic_index(f: &PrimeField, v: [u64; 3]) -> usize {
    if v[0] == 0 {
        f.modulus() as usize
    } else {
        f.mul(v[1], f.inv(v[0]).expect("nonzero")) as usize
    }
}

/// The involution of the conic induced by an off-conic point `c`.
fn induced_involution(f: &PrimeField, c: &[u64; 3]) -> Perm {
    let n = f.modulus() as usize + 1;
    let qc = quad_form(f, c);
    (0..n)
        .map(|i| {
            let x = conic_point(f, i);
            let b = polar2(f, &x, c);
            if b == 0 {
                return i;
            }
            // X' = Q(C)·X − B(X, C)·C
            let img = [0, 1, 2].map(|k| f.sub(f.mul(qc, x[k]), f.mul(b, c[k])));
            conic_index(f, img)
        })
        .collect()
}

/// The abstract oval of the conic `xz = y²` over `GF(p)`.
pub fn conic_oval(p: u64) -> Result<ConicOval> {
    let f = PrimeField::new(p)?;
    let n = p as usize + 1;
    let conic: Vec<[u64; 3]> = (0..n).map(|t| conic_point(&f, t)).collect();
    let centers: Vec<[u64; 3]> =
        projective_points(&f).into_iter().filter(|v| quad_form(&f, v) != 0).collect();
    let involutions: Vec<Perm> = centers.iter().map(|c| induced_involution(&f, c)).collect();
    assert!(involutions.iter().all(|s| !is_identity(s)), "an off-conic point induced the identity");
    Ok(ConicOval { field: f, oval: AbstractOval { size: n, involutions }, centers, conic })
}

impl ConicOval {
    /// Number of fixed points of each involution: 0 for internal centers, 2 for external ones.
    pub fn fixed_point_counts(&self) -> Vec<usize> {
        self.oval.involutions.iter().map(|s| s.iter().enumerate().filter(|&(i, &x)| i == x).count()).collect()
    }
}

impl AbstractOval {
    /// Involutority plus sharp transitivity on all admissible quadruples.
    pub fn verify(&self) -> bool {
        let n = self.size;
        if n < 3 {
            return false;
        }
        for s in &self.involutions {
            if !is_permutation(s, n) || !is_identity(&compose(s, s)) {
                return false;
            }
        }
        let idx = |a: usize, b: usize, c: usize, d: usize| ((a * n + b) * n + c) * n + d;
        let mut count = vec![0u32; n * n * n * n];
        for s in &self.involutions {
            for a1 in 0..n {
                let a2 = s[a1];
                for b1 in 0..n {
                    if b1 == a1 || b1 == a2 {
                        continue;
                    }
                    count[idx(a1, a2, b1, s[b1])] += 1;
                }
            }
        }
        for a1 in 0..n {
            for a2 in 0..n {
                for b1 in 0..n {
                    for b2 in 0..n {
                        if [b1, b2].iter().any(|b| *b == a1 || *b == a2) {
                            continue;
                        }
                        if count[idx(a1, a2, b1, b2)] != 1 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn require_valid(&self) -> Result<()> {
        if self.verify() {
            Ok(())
        } else {
            Err(Error::Precondition("not an abstract oval".into()))
        }
    }

    fn members(&self) -> HashSet<&[usize]> {
        self.involutions.iter().map(Vec::as_slice).collect()
    }

    /// Involutions mapping `a` to `b`.
    pub fn on_line(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.involutions.len()).filter(|&i| self.involutions[i][a] == b).collect()
    }

    /// Every triple product of involutions on a common secant lies in the family.
    pub fn secants_pascalian(&self) -> Result<bool> {
        self.require_valid()?;
        let members = self.members();
        let n = self.size;
        for a in 0..n {
            for b in a + 1..n {
                let line = self.on_line(a, b);
                for &i in &line {
                    for &j in &line {
                        let ij = compose(&self.involutions[i], &self.involutions[j]);
                        for &k in &line {
                            let ijk = compose(&ij, &self.involutions[k]);
                            if ijk[a] != b || !members.contains(ijk.as_slice()) {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// Closure of the family under conjugation by its own members.
    pub fn is_regular(&self) -> Result<bool> {
        self.require_valid()?;
        let members = self.members();
        for s in &self.involutions {
            for t in &self.involutions {
                let tst = compose(&compose(t, s), t);
                if !members.contains(tst.as_slice()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Points are the oval elements followed by the involutions; one line per
    /// unordered pair `{A, B}`, tangent when `A = B`.
    pub fn build_incidence(&self) -> Result<OvalIncidence> {
        self.require_valid()?;
        let n = self.size;
        let mut lines = Vec::new();
        for a in 0..n {
            for b in a..n {
                lines.push(OvalLine {
                    a,
                    b,
                    involutions: self.on_line(a, b).into_iter().map(|i| n + i).collect(),
                });
            }
        }
        Ok(OvalIncidence { points: n + self.involutions.len(), lines })
    }
}

pub fn verify_abstract_oval(b: &AbstractOval) -> bool {
    b.verify()
}

pub fn secants_pascalian(b: &AbstractOval) -> Result<bool> {
    b.secants_pascalian()
}

pub fn is_regular(b: &AbstractOval) -> Result<bool> {
    b.is_regular()
}

pub fn build_incidence(b: &AbstractOval) -> Result<OvalIncidence> {
    b.build_incidence()
}

#[derive(Clone, Debug, Serialize)]
pub struct OvalLine {
    pub a: usize,
    pub b: usize,
    /// Point indices (offset by the oval size) of the involutions on the line.
    pub involutions: Vec<usize>,
}

impl OvalLine {
    pub fn is_tangent(&self) -> bool {
        self.a == self.b
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OvalIncidence {
    pub points: usize,
    pub lines: Vec<OvalLine>,
}

impl OvalIncidence {
    pub fn secant_count(&self) -> usize {
        self.lines.iter().filter(|l| !l.is_tangent()).count()
    }

    pub fn tangent_count(&self) -> usize {
        self.lines.iter().filter(|l| l.is_tangent()).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutionModelReport {
    pub p: u64,
    pub fixed_point_free: usize,
    pub two_fixed_points: usize,
    pub internal_points: usize,
    pub secant_lines: usize,
    pub incidences: usize,
    pub isomorphic: bool,
}

/// Action of `[[a, b], [c, d]]` on the projective line: `t ↦ (a t + b)/(c t + d)`.
fn mobius_perm(f: &PrimeField, m: [u64; 4]) -> Perm {
    let p = f.modulus() as usize;
    let [a, b, c, d] = m;
    let image = |x: u64, y: u64| {
        let (u, v) = (f.add(f.mul(a, x), f.mul(b, y)), f.add(f.mul(c, x), f.mul(d, y)));
        match f.inv(v) {
            Some(iv) => f.mul(u, iv) as usize,
            None => p,
        }
    };
    (0..=p).map(|t| if t == p { image(1, 0) } else { image(t as u64, 1) }).collect()
}

fn pgl2_involutions(f: &PrimeField) -> Vec<Perm> {
    let p = f.modulus();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    if f.sub(f.mul(a, d), f.mul(b, c)) == 0 {
                        continue;
                    }
                    let g = mobius_perm(f, [a, b, c, d]);
                    if is_identity(&g) || !is_identity(&compose(&g, &g)) {
                        continue;
                    }
                    if seen.insert(g.clone()) {
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

fn commute(a: &[usize], b: &[usize]) -> bool {
    compose(a, b) == compose(b, a)
}

/// Random instances in the disk: half-turns and reflections acting on rimpoints
/// realise the swap and fix actions of an oval, and products of three
/// involutions on one secant close up.
pub fn sample_hyperbolic_oval(cfg: &TrialConfig) -> Report {
    run_oval_sample_suite(cfg)
}

/// Match internal points and secant lines of `PG(2, p)` with the fixed-point-free
/// and two-point-fixing involutions of `PGL(2, p)`, incidence against commuting.
pub fn involution_model(p: u64) -> Result<InvolutionModelReport> {
    let conic = conic_oval(p)?;
    let f = conic.field;
    let involutions = pgl2_involutions(&f);
    let fixed = |g: &Perm| g.iter().enumerate().filter(|&(i, &x)| i == x).count();
    let t0: Vec<&Perm> = involutions.iter().filter(|g| fixed(g) == 0).collect();
    let t2: Vec<&Perm> = involutions.iter().filter(|g| fixed(g) == 2).collect();
    let t0_index: HashMap<&Perm, usize> = t0.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let t2_index: HashMap<&Perm, usize> = t2.iter().enumerate().map(|(i, g)| (*g, i)).collect();

    let counts = conic.fixed_point_counts();
    let internal: Vec<usize> = (0..counts.len()).filter(|&i| counts[i] == 0).collect();
    let n = conic.oval.size;
    // secant through conic points a, b: line coefficients as the cross product
    let mut secants = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let (u, v) = (conic.conic[a], conic.conic[b]);
            let l = [
                f.sub(f.mul(u[1], v[2]), f.mul(u[2], v[1])),
                f.sub(f.mul(u[2], v[0]), f.mul(u[0], v[2])),
                f.sub(f.mul(u[0], v[1]), f.mul(u[1], v[0])),
            ];
            let half = f.inv(2).expect("odd prime");
            let pole = normalise(&f, [l[2], f.neg(f.mul(l[1], half)), l[0]]).expect("nonzero line");
            secants.push((l, pole));
        }
    }

    let mut isomorphic = true;
    let mut point_map = Vec::with_capacity(internal.len());
    for &i in &internal {
        match t0_index.get(&conic.oval.involutions[i]) {
            Some(&k) => point_map.push(k),
            None => isomorphic = false,
        }
    }
    let mut line_map = Vec::with_capacity(secants.len());
    let mut pole_perms = Vec::with_capacity(secants.len());
    for (_, pole) in &secants {
        let g = induced_involution(&f, pole);
        match t2_index.get(&g) {
            Some(&k) => line_map.push(k),
            None => isomorphic = false,
        }
        pole_perms.push(g);
    }
    let bijective = |m: &[usize], size: usize| {
        let s: HashSet<_> = m.iter().collect();
        s.len() == m.len() && m.len() == size
    };
    isomorphic &= bijective(&point_map, t0.len()) && bijective(&line_map, t2.len());

    let mut incidences = 0;
    for &i in &internal {
        let c = conic.centers[i];
        let s = &conic.oval.involutions[i];
        for ((l, _), g) in secants.iter().zip(&pole_perms) {
            let on = (0..3).fold(0, |acc, k| f.add(acc, f.mul(l[k], c[k]))) == 0;
            incidences += on as usize;
            if on != commute(s, g) {
                isomorphic = false;
            }
        }
    }
    Ok(InvolutionModelReport {
        p,
        fixed_point_free: t0.len(),
        two_fixed_points: t2.len(),
        internal_points: internal.len(),
        secant_lines: secants.len(),
        incidences,
        isomorphic,
    })
}
