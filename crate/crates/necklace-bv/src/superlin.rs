//! Exact super linear algebra: graded vector spaces per vertex, the iota
//! endomorphisms, supermatrices over the rationals, supertrace, the
//! operator B_iota, intertwiner-space bases by exact row reduction, the
//! supertrace pairing, and the inverse propagator in closed form and by
//! Gram inversion.

use crate::grading::Parity;
use crate::quiver::{DArrow, DoubledQuiver, VertexId};
use crate::rat::{parse_rat, rat, Rat};
use num_traits::Zero;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum SuperlinError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("vertex {0:?} needs equal even and odd dimensions for p=0")]
    UnbalancedVertex(String),
    #[error("iota at vertex `{0}` is not invertible")]
    IotaSingular(String),
    #[error("iota at vertex `{0}` is not homogeneous of degree p+1")]
    IotaWrongDegree(String),
    #[error("iota squares to different scalars across vertices")]
    IotaLambdaMismatch,
    #[error("iota at vertex `{0}` does not square to a scalar")]
    IotaNotScalarSquare(String),
    #[error("Gram matrix is singular for arrow `{0}` (iota violates the hypotheses)")]
    SingularGram(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("iota file line {line}: {msg}")]
    IotaParse { line: usize, msg: String },
    #[error("zero dimension at vertex `{0}`: iota cannot be invertible")]
    ZeroDimension(String),
}

/// Per-vertex graded dimensions, basis ordered even block then odd block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperSpace {
    dims: Vec<(usize, usize)>,
}

/// Parse a `--dims` style spec `v=n|m,w=n|m` against a quiver; absent
/// vertices keep the default `1|1`.
pub fn parse_dims_spec(
    quiver: &crate::quiver::Quiver,
    spec: Option<&str>,
) -> Result<SuperSpace, SuperlinError> {
    let mut dims = vec![(1usize, 1usize); quiver.vertex_count()];
    if let Some(spec) = spec {
        for part in spec.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (vname, nm) = part.split_once('=').ok_or_else(|| {
                SuperlinError::Dimension(format!("dims entry `{part}` needs `v=n|m`"))
            })?;
            let v = quiver.vertex_id(vname.trim()).ok_or_else(|| {
                SuperlinError::Dimension(format!("unknown vertex `{vname}` in dims"))
            })?;
            let (n, m) = nm.split_once('|').ok_or_else(|| {
                SuperlinError::Dimension(format!("dims entry `{part}` needs `n|m`"))
            })?;
            let n: usize = n.trim().parse().map_err(|_| {
                SuperlinError::Dimension(format!("invalid even dimension `{n}`"))
            })?;
            let m: usize = m.trim().parse().map_err(|_| {
                SuperlinError::Dimension(format!("invalid odd dimension `{m}`"))
            })?;
            if n > 64 || m > 64 {
                return Err(SuperlinError::Dimension(format!(
                    "dimension {n}|{m} too large"
                )));
            }
            dims[v.0] = (n, m);
        }
    }
    Ok(SuperSpace::new(dims))
}

impl SuperSpace {
    pub fn new(dims: Vec<(usize, usize)>) -> Self {
        SuperSpace { dims }
    }

    pub fn uniform(vertices: usize, even: usize, odd: usize) -> Self {
        SuperSpace {
            dims: vec![(even, odd); vertices],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.dims.len()
    }

    pub fn even_dim(&self, v: VertexId) -> usize {
        self.dims[v.0].0
    }

    pub fn odd_dim(&self, v: VertexId) -> usize {
        self.dims[v.0].1
    }

    pub fn dim(&self, v: VertexId) -> usize {
        self.dims[v.0].0 + self.dims[v.0].1
    }

    /// Parity of the `mu`-th basis vector of `V_v`.
    pub fn basis_parity(&self, v: VertexId, mu: usize) -> Parity {
        Parity(mu >= self.dims[v.0].0)
    }
}

/// A homogeneous linear map `V_src -> V_tgt` in basis components:
/// `entries[mu][nu]` is the coefficient of the `nu`-th target basis
/// vector in the image of the `mu`-th source basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperMatrix {
    pub src: VertexId,
    pub tgt: VertexId,
    pub degree: Parity,
    pub entries: Vec<Vec<Rat>>,
}

impl SuperMatrix {
    pub fn zero(space: &SuperSpace, src: VertexId, tgt: VertexId, degree: Parity) -> Self {
        SuperMatrix {
            src,
            tgt,
            degree,
            entries: vec![vec![rat(0); space.dim(tgt)]; space.dim(src)],
        }
    }

    /// The basis map `h^{mu}_{nu}`: sends the `mu`-th basis vector of the
    /// source to the `nu`-th basis vector of the target.
    pub fn basis(space: &SuperSpace, src: VertexId, tgt: VertexId, mu: usize, nu: usize) -> Self {
        let degree = space.basis_parity(src, mu) + space.basis_parity(tgt, nu);
        let mut m = SuperMatrix::zero(space, src, tgt, degree);
        m.entries[mu][nu] = rat(1);
        m
    }

    pub fn identity(space: &SuperSpace, v: VertexId) -> Self {
        let mut m = SuperMatrix::zero(space, v, v, Parity::EVEN);
        for i in 0..space.dim(v) {
            m.entries[i][i] = rat(1);
        }
        m
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = self.clone();
        for row in &mut out.entries {
            for e in row {
                *e *= c;
            }
        }
        out
    }

    pub fn add(&self, other: &SuperMatrix) -> SuperMatrix {
        assert_eq!((self.src, self.tgt, self.degree), (other.src, other.tgt, other.degree));
        let mut out = self.clone();
        for (r, row) in other.entries.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                out.entries[r][c] += e;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(|e| e.is_zero()))
    }

    /// Composition `self` then `g` (apply `self` first).
    pub fn then(&self, g: &SuperMatrix) -> SuperMatrix {
        assert_eq!(self.tgt, g.src, "composition vertex mismatch");
        let rows = self.entries.len();
        let mid = g.entries.len();
        let cols = if mid == 0 { 0 } else { g.entries[0].len() };
        let mut entries = vec![vec![rat(0); cols]; rows];
        for (r, row) in self.entries.iter().enumerate() {
            for (k, e) in row.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                for c in 0..cols {
                    if !g.entries[k][c].is_zero() {
                        entries[r][c] += e * &g.entries[k][c];
                    }
                }
            }
        }
        SuperMatrix {
            src: self.src,
            tgt: g.tgt,
            degree: self.degree + g.degree,
            entries,
        }
    }

    /// Flatten to a coefficient vector in row-major entry order.
    pub fn flatten(&self) -> Vec<Rat> {
        self.entries.iter().flatten().cloned().collect()
    }
}

/// Supertrace: even-block diagonal minus odd-block diagonal. Zero for
/// homogeneous odd maps since their diagonal blocks vanish.
pub fn supertrace(space: &SuperSpace, f: &SuperMatrix) -> Result<Rat, SuperlinError> {
    if f.src != f.tgt {
        return Err(SuperlinError::NotSquare);
    }
    let mut out = rat(0);
    for mu in 0..space.dim(f.src) {
        let s = space.basis_parity(f.src, mu).sign();
        out += s * &f.entries[mu][mu];
    }
    Ok(out)
}

/// The per-vertex invertible maps iota with a common square `lambda id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IotaData {
    pub maps: Vec<SuperMatrix>,
    pub inverses: Vec<SuperMatrix>,
    pub lambda: Rat,
    pub degree: Parity,
}

impl IotaData {
    /// Validate homogeneity of degree p+1, invertibility, and the common
    /// scalar square, then build the data.
    pub fn new(
        space: &SuperSpace,
        quiver_vertex_name: impl Fn(VertexId) -> String,
        p: Parity,
        maps: Vec<SuperMatrix>,
    ) -> Result<Self, SuperlinError> {
        let degree = p + Parity::ODD;
        let mut lambda: Option<Rat> = None;
        let mut inverses = Vec::with_capacity(maps.len());
        for (i, m) in maps.iter().enumerate() {
            let v = VertexId(i);
            let name = quiver_vertex_name(v);
            if space.dim(v) == 0 {
                return Err(SuperlinError::ZeroDimension(name));
            }
            if m.src != v || m.tgt != v || m.degree != degree {
                return Err(SuperlinError::IotaWrongDegree(name));
            }
            for mu in 0..space.dim(v) {
                for nu in 0..space.dim(v) {
                    let pat = space.basis_parity(v, mu) + space.basis_parity(v, nu);
                    if pat != degree && !m.entries[mu][nu].is_zero() {
                        return Err(SuperlinError::IotaWrongDegree(name));
                    }
                }
            }
            let sq = m.then(m);
            let l = sq.entries[0][0].clone();
            let mut scalar = SuperMatrix::identity(space, v).scale(&l);
            scalar.degree = sq.degree;
            if sq != scalar {
                return Err(SuperlinError::IotaNotScalarSquare(name));
            }
            match &lambda {
                None => lambda = Some(l.clone()),
                Some(prev) if *prev == l => {}
                Some(_) => return Err(SuperlinError::IotaLambdaMismatch),
            }
            if l.is_zero() {
                return Err(SuperlinError::IotaSingular(name));
            }
            // iota^2 = lambda id gives the inverse directly
            inverses.push(m.scale(&(rat(1) / &l)));
        }
        Ok(IotaData {
            maps,
            inverses,
            lambda: lambda.unwrap_or_else(|| rat(1)),
            degree,
        })
    }

    /// The default odd iota for p = 0 on balanced dimensions: even basis
    /// vector k maps to odd basis vector k, odd k to `lambda` times even
    /// k. Requires no square roots for any rational lambda.
    pub fn default_p0(
        space: &SuperSpace,
        vertex_name: impl Fn(VertexId) -> String,
        lambda: Rat,
    ) -> Result<Self, SuperlinError> {
        let mut maps = Vec::new();
        for i in 0..space.vertex_count() {
            let v = VertexId(i);
            let (n, m) = (space.even_dim(v), space.odd_dim(v));
            if n != m {
                return Err(SuperlinError::UnbalancedVertex(vertex_name(v)));
            }
            let mut mat = SuperMatrix::zero(space, v, v, Parity::ODD);
            for k in 0..n {
                mat.entries[k][n + k] = rat(1);
                mat.entries[n + k][k] = lambda.clone();
            }
            maps.push(mat);
        }
        IotaData::new(space, vertex_name, Parity::EVEN, maps)
    }

    /// The default even iota for p = 1: the scalar map `c id` with
    /// `c = hbar^{-1/2}`, so `lambda = c^2 = 1/hbar`.
    pub fn default_p1(
        space: &SuperSpace,
        vertex_name: impl Fn(VertexId) -> String,
        scalar: Rat,
    ) -> Result<Self, SuperlinError> {
        let maps = (0..space.vertex_count())
            .map(|i| SuperMatrix::identity(space, VertexId(i)).scale(&scalar))
            .collect();
        IotaData::new(space, vertex_name, Parity::ODD, maps)
    }

    /// Parse the exact-rational iota file format: per vertex a line
    /// `iota <vertex>` followed by `dim(v)` rows of `dim(v)` rationals.
    /// `#` starts a comment. Every vertex must be covered.
    pub fn parse_file(
        text: &str,
        quiver: &DoubledQuiver,
        space: &SuperSpace,
        p: Parity,
    ) -> Result<Self, SuperlinError> {
        let names: Vec<String> = (0..quiver.vertex_count())
            .map(|i| quiver.base().vertex_name(VertexId(i)).to_owned())
            .collect();
        let mut maps: Vec<Option<SuperMatrix>> = vec![None; quiver.vertex_count()];
        let mut lines = text.lines().enumerate().peekable();
        while let Some((idx, raw)) = lines.next() {
            let line = idx + 1;
            let cleaned = raw.split('#').next().unwrap_or("").trim();
            if cleaned.is_empty() {
                continue;
            }
            let Some(rest) = cleaned.strip_prefix("iota ") else {
                return Err(SuperlinError::IotaParse {
                    line,
                    msg: format!("expected `iota <vertex>`, got `{cleaned}`"),
                });
            };
            let vname = rest.trim();
            let v = quiver
                .base()
                .vertex_id(vname)
                .ok_or_else(|| SuperlinError::IotaParse {
                    line,
                    msg: format!("unknown vertex `{vname}`"),
                })?;
            let d = space.dim(v);
            let mut mat = SuperMatrix::zero(space, v, v, p + Parity::ODD);
            for r in 0..d {
                let (ridx, row) = lines.next().ok_or_else(|| SuperlinError::IotaParse {
                    line,
                    msg: format!("expected {d} matrix rows for vertex `{vname}`"),
                })?;
                let row = row.split('#').next().unwrap_or("").trim();
                let vals: Vec<&str> = row.split_whitespace().collect();
                if vals.len() != d {
                    return Err(SuperlinError::IotaParse {
                        line: ridx + 1,
                        msg: format!("expected {d} entries, got {}", vals.len()),
                    });
                }
                for (c, vtxt) in vals.iter().enumerate() {
                    mat.entries[r][c] =
                        parse_rat(vtxt).map_err(|msg| SuperlinError::IotaParse {
                            line: ridx + 1,
                            msg,
                        })?;
                }
            }
            maps[v.0] = Some(mat);
        }
        let maps: Vec<SuperMatrix> = maps
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| SuperlinError::IotaParse {
                    line: 0,
                    msg: format!("missing iota for vertex `{}`", names[i]),
                })
            })
            .collect::<Result<_, _>>()?;
        IotaData::new(space, |v| names[v.0].clone(), p, maps)
    }
}

/// `B_iota(f) = iota . f + (-1)^{|iota||f| + |iota|} f . iota`, with the
/// endpoint-appropriate iota on each side.
pub fn b_iota(iota: &IotaData, f: &SuperMatrix) -> SuperMatrix {
    b_with(&iota.maps, iota.degree, f)
}

/// Same with `iota^{-1}` in place of `iota`.
pub fn b_iota_inv(iota: &IotaData, f: &SuperMatrix) -> SuperMatrix {
    b_with(&iota.inverses, iota.degree, f)
}

fn b_with(maps: &[SuperMatrix], degree: Parity, f: &SuperMatrix) -> SuperMatrix {
    let left = f.then(&maps[f.tgt.0]);
    let right = maps[f.src.0].then(f);
    let sign = degree * f.degree + degree;
    left.add(&right.scale(&sign.sign()))
}

/// The graded commutator `[iota, f] = iota . f - (-1)^{|iota||f|} f . iota`.
pub fn iota_commutator(iota: &IotaData, f: &SuperMatrix) -> SuperMatrix {
    let left = f.then(&iota.maps[f.tgt.0]);
    let right = iota.maps[f.src.0].then(f);
    let sign = (iota.degree * f.degree + Parity::ODD).sign();
    left.add(&right.scale(&sign))
}

// ---------------------------------------------------------------------
// Exact Gaussian elimination
// ---------------------------------------------------------------------

/// Reduced row echelon form in place; returns pivot column per pivot row.
pub fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = rat(1) / m[r][c].clone();
        for x in &mut m[r] {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Basis of the nullspace of `m` (columns are unknowns). Each basis
/// vector has value 1 at its own free column and 0 at the other free
/// columns; vectors are returned with their free column, ordered by it.
pub fn nullspace(mut m: Vec<Vec<Rat>>, cols: usize) -> Vec<(usize, Vec<Rat>)> {
    for row in &m {
        debug_assert_eq!(row.len(), cols);
    }
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    let mut pivot_of_col = vec![None; cols];
    for (r, &c) in pivots.iter().enumerate() {
        pivot_of_col[c] = Some(r);
    }
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![rat(0); cols];
        v[free] = rat(1);
        for (c, p) in pivot_of_col.iter().enumerate() {
            if let Some(r) = p {
                v[c] = -m[*r][free].clone();
            }
        }
        basis.push((free, v));
    }
    basis
}

/// Exact inverse of a square matrix, if invertible.
pub fn invert(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            debug_assert_eq!(row.len(), n);
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { rat(1) } else { rat(0) }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// An ordered homogeneous basis of the intertwiner space `H^a_iota`,
/// together with the free entry positions that dual-coordinate readout
/// uses.
#[derive(Clone, Debug)]
pub struct IntertwinerBasis {
    pub arrow: DArrow,
    pub vectors: Vec<SuperMatrix>,
    /// row-major `(mu, nu)` entry positions; `vectors[k]` has entry 1 at
    /// `free_positions[k]` and entry 0 at the other free positions.
    pub free_positions: Vec<(usize, usize)>,
}

impl IntertwinerBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Coordinates of an intertwiner in this basis (readout at the free
    /// positions).
    pub fn coordinates(&self, f: &SuperMatrix) -> Vec<Rat> {
        self.free_positions
            .iter()
            .map(|&(mu, nu)| f.entries[mu][nu].clone())
            .collect()
    }
}

/// Solve `[iota, f] = 0` for homogeneous `f: V_{s(a)} -> V_{t(a)}` of
/// each parity by exact row reduction, with unknowns in row-major entry
/// order; the merged basis is ordered by free entry position.
pub fn intertwiner_basis(
    quiver: &DoubledQuiver,
    space: &SuperSpace,
    iota: &IotaData,
    arrow: DArrow,
) -> IntertwinerBasis {
    let s = quiver.source(arrow);
    let t = quiver.target(arrow);
    let (ds, dt) = (space.dim(s), space.dim(t));
    let mut found: Vec<((usize, usize), SuperMatrix)> = Vec::new();
    for par in [Parity::EVEN, Parity::ODD] {
        // unknown entry positions with this parity pattern, row-major
        let unknowns: Vec<(usize, usize)> = (0..ds)
            .flat_map(|mu| (0..dt).map(move |nu| (mu, nu)))
            .filter(|&(mu, nu)| space.basis_parity(s, mu) + space.basis_parity(t, nu) == par)
            .collect();
        if unknowns.is_empty() {
            continue;
        }
        let col_of = |mu: usize, nu: usize| unknowns.iter().position(|&u| u == (mu, nu));
        // [iota, f] entry (mu, sigma):
        //   sum_nu f[mu][nu] iota_t[nu][sigma]
        //   - (-1)^{|iota| par} sum_rho iota_s[mu][rho] f[rho][sigma]
        let sign = (iota.degree * par + Parity::ODD).sign();
        let mut rows = Vec::new();
        for mu in 0..ds {
            for sigma in 0..dt {
                let mut row = vec![rat(0); unknowns.len()];
                let mut nonzero = false;
                for nu in 0..dt {
                    if let Some(c) = col_of(mu, nu) {
                        let coeff = iota.maps[t.0].entries[nu][sigma].clone();
                        if !coeff.is_zero() {
                            row[c] += coeff;
                            nonzero = true;
                        }
                    }
                }
                for rho in 0..ds {
                    if let Some(c) = col_of(rho, sigma) {
                        let coeff = &iota.maps[s.0].entries[mu][rho] * &sign;
                        if !coeff.is_zero() {
                            row[c] += coeff;
                            nonzero = true;
                        }
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
        for (free_col, vec) in nullspace(rows, unknowns.len()) {
            let mut m = SuperMatrix::zero(space, s, t, par);
            for (k, &(mu, nu)) in unknowns.iter().enumerate() {
                m.entries[mu][nu] = vec[k].clone();
            }
            found.push((unknowns[free_col], m));
        }
    }
    found.sort_by_key(|&((mu, nu), _)| (mu, nu));
    IntertwinerBasis {
        arrow,
        vectors: found.iter().map(|(_, m)| m.clone()).collect(),
        free_positions: found.iter().map(|(p, _)| *p).collect(),
    }
}

/// The supertrace pairing `str(iota . phi . psi)` of `phi: H^a`,
/// `psi: H^{bar a}` (composition applies `psi` first).
pub fn pairing(
    space: &SuperSpace,
    iota: &IotaData,
    phi: &SuperMatrix,
    psi: &SuperMatrix,
) -> Result<Rat, SuperlinError> {
    if psi.tgt != phi.src || phi.tgt != psi.src {
        return Err(SuperlinError::Dimension(
            "pairing expects maps along an arrow and its reverse".into(),
        ));
    }
    supertrace(space, &psi.then(phi).then(&iota.maps[phi.tgt.0]))
}

/// Gram matrix `G[l][n] = pairing(basis_a[l], basis_abar[n])`.
pub fn gram_matrix(
    space: &SuperSpace,
    iota: &IotaData,
    basis_a: &IntertwinerBasis,
    basis_abar: &IntertwinerBasis,
) -> Result<Vec<Vec<Rat>>, SuperlinError> {
    basis_a
        .vectors
        .iter()
        .map(|f| {
            basis_abar
                .vectors
                .iter()
                .map(|g| pairing(space, iota, f, g))
                .collect()
        })
        .collect()
}

/// The 4-index inverse-pairing components for a doubled arrow `a`:
/// `t[alpha][beta][gamma][delta]` with `alpha, delta` indexing
/// `V_{t(a)}` and `beta, gamma` indexing `V_{s(a)}`, i.e. the expansion
/// of the tensor in `H^{bar a} (x) H^a`.
pub type TTensor = Vec<Vec<Vec<Vec<Rat>>>>;

/// Closed form: `t^{beta delta}_{alpha gamma} = 1/2 (-1)^alpha [
/// (iota_t^{ -1})_alpha^delta delta_gamma^beta + (-1)^{|iota|(alpha +
/// beta + 1)} delta_alpha^delta (iota_s^{-1})_gamma^beta ]`.
pub fn t_closed_form(
    quiver: &DoubledQuiver,
    space: &SuperSpace,
    iota: &IotaData,
    arrow: DArrow,
) -> TTensor {
    let s = quiver.source(arrow);
    let t = quiver.target(arrow);
    let (ds, dt) = (space.dim(s), space.dim(t));
    let half = crate::rat::frac(1, 2);
    let inv_t = &iota.inverses[t.0];
    let inv_s = &iota.inverses[s.0];
    let mut out = vec![vec![vec![vec![rat(0); dt]; ds]; ds]; dt];
    for alpha in 0..dt {
        let pa = space.basis_parity(t, alpha);
        for beta in 0..ds {
            let pb = space.basis_parity(s, beta);
            for gamma in 0..ds {
                for delta in 0..dt {
                    let mut val = rat(0);
                    if gamma == beta {
                        val += inv_t.entries[alpha][delta].clone();
                    }
                    if alpha == delta {
                        let tw = iota.degree * (pa + pb + Parity::ODD);
                        val += tw.sign() * &inv_s.entries[gamma][beta];
                    }
                    out[alpha][beta][gamma][delta] = &half * pa.sign() * val;
                }
            }
        }
    }
    out
}

/// Oracle route: invert the exact Gram matrix of the pairing over the
/// intertwiner bases and re-expand to coordinate components. Must agree
/// with the closed form entrywise.
pub fn t_from_inversion(
    quiver: &DoubledQuiver,
    space: &SuperSpace,
    iota: &IotaData,
    basis_a: &IntertwinerBasis,
    basis_abar: &IntertwinerBasis,
) -> Result<TTensor, SuperlinError> {
    let arrow = basis_a.arrow;
    let s = quiver.source(arrow);
    let t = quiver.target(arrow);
    let (ds, dt) = (space.dim(s), space.dim(t));
    let gram = gram_matrix(space, iota, basis_a, basis_abar)?;
    let u = invert(&gram).ok_or_else(|| {
        SuperlinError::SingularGram(quiver.darrow_name(arrow))
    })?;
    let mut out = vec![vec![vec![vec![rat(0); dt]; ds]; ds]; dt];
    for (m, fm) in basis_abar.vectors.iter().enumerate() {
        for (l, fl) in basis_a.vectors.iter().enumerate() {
            let coeff = &u[m][l];
            if coeff.is_zero() {
                continue;
            }
            for alpha in 0..dt {
                for beta in 0..ds {
                    let left = &fm.entries[alpha][beta];
                    if left.is_zero() {
                        continue;
                    }
                    for gamma in 0..ds {
                        for delta in 0..dt {
                            let right = &fl.entries[gamma][delta];
                            if !right.is_zero() {
                                out[alpha][beta][gamma][delta] += coeff * left * right;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The snake contraction: `psi -> sum t[alpha][beta][gamma][delta]
/// str(iota . h^{gamma}_{delta} . psi) h^{alpha}_{beta}` on
/// `H^{bar a}_iota`; the inverse property says this is the identity.
pub fn snake_apply(
    quiver: &DoubledQuiver,
    space: &SuperSpace,
    iota: &IotaData,
    arrow: DArrow,
    t_tensor: &TTensor,
    psi: &SuperMatrix,
) -> Result<SuperMatrix, SuperlinError> {
    let s = quiver.source(arrow);
    let t = quiver.target(arrow);
    let (ds, dt) = (space.dim(s), space.dim(t));
    let mut out = SuperMatrix::zero(space, t, s, psi.degree);
    for gamma in 0..ds {
        for delta in 0..dt {
            let h = SuperMatrix::basis(space, s, t, gamma, delta);
            let val = pairing(space, iota, &h, psi)?;
            if val.is_zero() {
                continue;
            }
            for alpha in 0..dt {
                for beta in 0..ds {
                    let c = &t_tensor[alpha][beta][gamma][delta];
                    if !c.is_zero() {
                        out.entries[alpha][beta] += c * &val;
                    }
                }
            }
        }
    }
    Ok(out)
}
