"""Polynomial differential forms on R^2 and exact-degree quadrature.

Forms are represented with dense bivariate polynomial components.  The
basis conventions (with the Euclidean metric and volume form dx ^ dy):

    star 1    = dx ^ dy        star dx = dy
    star (dx ^ dy) = 1         star dy = -dx

so star star = (-1)^(k (2-k)) on k-forms (i.e. -1 on 1-forms).  The
codifferential is

    delta = (-1)^k  star^{-1} d star      on k-forms,

which works out to

    delta (P dx + Q dy)  = -(P_x + Q_y)
    delta (R dx ^ dy)    =  R_y dx - R_x dy ,

and the Hodge Laplacian is  L = d delta + delta d  (undefined halves
dropped at k = 0 and k = 2).  On functions this is the *negative* of the
classical Laplacian:  L p = -(p_xx + p_yy).

Polynomial coefficients are stored and combined in extended precision
(``np.longdouble``):  the manufactured solutions below expand into
monomial coefficients of magnitude ~1e10 that cancel down to O(1) values,
and double-precision Horner evaluation would leave ~1e-8 absolute noise —
far above the 1e-10-scale identities the discrete operators are tested
against.  Evaluation returns float64.

Quadrature: Gauss-Legendre on [0, 1] for line integrals, and a collapsed
tensor-product (Duffy) rule on the reference triangle
{(x, y) : x, y >= 0, x + y <= 1} that is exact for any requested total
degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complex import SimplicialComplex
from .dual import DualComplex

__all__ = [
    "Poly2",
    "PolyForm",
    "QuadratureRule",
    "exterior_derivative",
    "hodge_star",
    "hodge_star_inverse",
    "codifferential",
    "hodge_laplacian",
    "manufactured_solution",
    "gauss_legendre_unit",
    "triangle_rule",
    "integrate_over_simplex",
    "de_rham",
    "de_rham_dual",
]


class Poly2:
    """Bivariate polynomial sum_{i,j} c[i, j] x^i y^j.

    Coefficients are kept in ``np.longdouble``; see the module docstring
    for why.  Instances are immutable by convention (operations return new
    polynomials) and trailing all-zero coefficient rows/columns are
    trimmed on construction.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_2d(np.asarray(coeffs, dtype=np.longdouble)).copy()
        if c.ndim != 2:
            raise ValueError("coefficients must form a 2-d array")
        while c.shape[0] > 1 and not c[-1].any():
            c = c[:-1]
        while c.shape[1] > 1 and not c[:, -1].any():
            c = c[:, :-1]
        self.coeffs = c

    @classmethod
    def constant(cls, value) -> "Poly2":
        return cls(np.array([[value]], dtype=np.longdouble))

    @classmethod
    def zero(cls) -> "Poly2":
        return cls.constant(0.0)

    @classmethod
    def monomial(cls, i: int, j: int, coeff=1.0) -> "Poly2":
        c = np.zeros((i + 1, j + 1), dtype=np.longdouble)
        c[i, j] = coeff
        return cls(c)

    @property
    def degree(self) -> int:
        """Total degree (0 for the zero polynomial)."""
        nz = np.nonzero(self.coeffs)
        if len(nz[0]) == 0:
            return 0
        return int((nz[0] + nz[1]).max())

    def max_abs(self) -> float:
        return float(np.abs(self.coeffs).max())

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs() <= tol

    def coefficient(self, i: int, j: int) -> float:
        n, m = self.coeffs.shape
        if i >= n or j >= m:
            return 0.0
        return float(self.coeffs[i, j])

    def __add__(self, other) -> "Poly2":
        other = _as_poly(other)
        n = max(self.coeffs.shape[0], other.coeffs.shape[0])
        m = max(self.coeffs.shape[1], other.coeffs.shape[1])
        out = np.zeros((n, m), dtype=np.longdouble)
        out[: self.coeffs.shape[0], : self.coeffs.shape[1]] = self.coeffs
        out[: other.coeffs.shape[0], : other.coeffs.shape[1]] += other.coeffs
        return Poly2(out)

    def __radd__(self, other) -> "Poly2":
        return self.__add__(other)

    def __neg__(self) -> "Poly2":
        return Poly2(-self.coeffs)

    def __sub__(self, other) -> "Poly2":
        return self.__add__(-_as_poly(other))

    def __rsub__(self, other) -> "Poly2":
        return (-self).__add__(other)

    def __mul__(self, other) -> "Poly2":
        if np.isscalar(other) or isinstance(other, (int, float, np.floating)):
            return Poly2(self.coeffs * np.longdouble(other))
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        out = np.zeros(
            (a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1),
            dtype=np.longdouble,
        )
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                if a[i, j] != 0:
                    out[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
        return Poly2(out)

    def __rmul__(self, other) -> "Poly2":
        return self.__mul__(other)

    def __pow__(self, n: int) -> "Poly2":
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        out = Poly2.constant(1.0)
        base = self
        e = int(n)
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def deriv(self, axis: int) -> "Poly2":
        """Partial derivative: axis 0 -> d/dx, axis 1 -> d/dy."""
        c = self.coeffs
        if axis == 0:
            if c.shape[0] == 1:
                return Poly2.zero()
            i = np.arange(1, c.shape[0], dtype=np.longdouble)
            return Poly2(c[1:] * i[:, None])
        if axis == 1:
            if c.shape[1] == 1:
                return Poly2.zero()
            j = np.arange(1, c.shape[1], dtype=np.longdouble)
            return Poly2(c[:, 1:] * j[None, :])
        raise ValueError("axis must be 0 (x) or 1 (y)")

    def __call__(self, x, y):
        """Evaluate at points; Horner in extended precision, float64 out."""
        xl = np.asarray(x, dtype=np.longdouble)
        yl = np.asarray(y, dtype=np.longdouble)
        shape = np.broadcast(xl, yl).shape
        c = self.coeffs
        acc = np.zeros(shape, dtype=np.longdouble)
        for i in range(c.shape[0] - 1, -1, -1):
            row = np.full(shape, c[i, -1], dtype=np.longdouble)
            for j in range(c.shape[1] - 2, -1, -1):
                row = row * yl + c[i, j]
            acc = acc * xl + row
        out = np.asarray(acc, dtype=np.float64)
        if np.isscalar(x) and np.isscalar(y):
            return float(out)
        return out

    def __repr__(self) -> str:
        return f"Poly2(degree={self.degree}, shape={self.coeffs.shape})"


def _as_poly(value) -> Poly2:
    if isinstance(value, Poly2):
        return value
    if np.isscalar(value) or isinstance(value, (int, float, np.floating)):
        return Poly2.constant(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a polynomial")


@dataclass(frozen=True)
class PolyForm:
    """A polynomial k-form on R^2.

    components: (p,) for k = 0; (P, Q) meaning P dx + Q dy for k = 1;
    (R,) meaning R dx ^ dy for k = 2.
    """

    degree: int
    components: tuple[Poly2, ...]

    def __post_init__(self):
        expected = {0: 1, 1: 2, 2: 1}
        if self.degree not in expected:
            raise ValueError(f"no {self.degree}-forms in the plane")
        if len(self.components) != expected[self.degree]:
            raise ValueError(
                f"a {self.degree}-form needs {expected[self.degree]} "
                f"component(s), got {len(self.components)}"
            )

    @property
    def poly_degree(self) -> int:
        return max(c.degree for c in self.components)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(c.is_zero(tol) for c in self.components)


def exterior_derivative(form: PolyForm) -> PolyForm:
    """d: k-forms -> (k+1)-forms.  Undefined for 2-forms in the plane."""
    if form.degree == 0:
        (p,) = form.components
        return PolyForm(1, (p.deriv(0), p.deriv(1)))
    if form.degree == 1:
        p, q = form.components
        return PolyForm(2, (q.deriv(0) - p.deriv(1),))
    raise ValueError("no exterior derivative of a 2-form in the plane")


def hodge_star(form: PolyForm) -> PolyForm:
    if form.degree == 0:
        return PolyForm(2, form.components)
    if form.degree == 1:
        p, q = form.components
        return PolyForm(1, (-q, p))
    return PolyForm(0, form.components)


def hodge_star_inverse(form: PolyForm) -> PolyForm:
    """Inverse of the star mapping onto `form`'s degree.

    star^{-1} on k-forms equals (-1)^(k (2-k)) star, i.e. -star on
    1-forms and star itself on 0- and 2-forms.
    """
    starred = hodge_star(form)
    if form.degree == 1:
        return PolyForm(1, tuple(-c for c in starred.components))
    return starred


def codifferential(form: PolyForm) -> PolyForm:
    """delta = (-1)^k star^{-1} d star: k-forms -> (k-1)-forms (k >= 1)."""
    if form.degree == 0:
        raise ValueError("no codifferential of a 0-form")
    sign = (-1) ** form.degree
    out = hodge_star_inverse(exterior_derivative(hodge_star(form)))
    return PolyForm(out.degree, tuple(sign * c for c in out.components))


def hodge_laplacian(form: PolyForm) -> PolyForm:
    """L = d delta + delta d, dropping the undefined half at k = 0, 2."""
    k = form.degree
    if k == 0:
        return codifferential(exterior_derivative(form))
    if k == 2:
        return exterior_derivative(codifferential(form))
    a = exterior_derivative(codifferential(form))
    b = codifferential(exterior_derivative(form))
    return PolyForm(1, tuple(x + y for x, y in zip(a.components, b.components)))


def manufactured_solution(k: int) -> tuple[PolyForm, PolyForm]:
    """Reference problem on the unit equilateral triangle.

    The scalar field is a scaled fifth power of the barycentric bubble,

        p = 1e8 (l1 l2 l3)^5 ,     degree 15,

    whose value and first four derivative orders vanish on the domain
    boundary, so p (as a k-form: p, p dx + p dy, or p dx ^ dy) satisfies
    both natural and essential boundary conditions of the Hodge
    Laplacian.  Returns (u, f) with f = L u (degree 13).
    """
    if k not in (0, 1, 2):
        raise ValueError(f"no {k}-forms in the plane")
    inv_sqrt3 = np.longdouble(1.0) / np.sqrt(np.longdouble(3.0))
    x = Poly2.monomial(1, 0)
    y = Poly2.monomial(0, 1)
    lam1 = 1.0 - x - inv_sqrt3 * y
    lam2 = x - inv_sqrt3 * y
    lam3 = (2.0 * inv_sqrt3) * y
    p = (lam1 * lam2 * lam3) ** 5 * 1.0e8
    if k == 0:
        u = PolyForm(0, (p,))
    elif k == 1:
        u = PolyForm(1, (p, p))
    else:
        u = PolyForm(2, (p,))
    return u, hodge_laplacian(u)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights on a reference domain, with tracked exactness.

    points: (m,) parameters on [0, 1] for line rules, (m, 2) coordinates
    in the reference triangle for area rules.
    """

    points: np.ndarray
    weights: np.ndarray
    exactness: int


def gauss_legendre_unit(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [0, 1]; exact through degree 2n - 1."""
    if n < 1:
        raise ValueError("need at least one quadrature point")
    x, w = np.polynomial.legendre.leggauss(n)
    return QuadratureRule(0.5 * (x + 1.0), 0.5 * w, 2 * n - 1)


def triangle_rule(degree: int) -> QuadratureRule:
    """Quadrature on the reference triangle, exact for total degree <= degree.

    Collapsed tensor product: x = u (1 - v), y = v with Jacobian (1 - v),
    so a monomial x^a y^b becomes u^a (1-v)^(a+1) v^b — degree <= `degree`
    in u and <= degree + 1 in v, which fixes the two Gauss sizes.  Weights
    are positive and sum to 1/2.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    nu = degree // 2 + 1
    nv = (degree + 1) // 2 + 1
    ru = gauss_legendre_unit(nu)
    rv = gauss_legendre_unit(nv)
    u = np.repeat(ru.points, nv)
    v = np.tile(rv.points, nu)
    w = np.repeat(ru.weights, nv) * np.tile(rv.weights, nu) * (1.0 - v)
    pts = np.stack([u * (1.0 - v), v], axis=1)
    return QuadratureRule(pts, w, degree)


def integrate_over_simplex(
    form: PolyForm, simplex: np.ndarray, rule: QuadratureRule | None = None
) -> float:
    """Integral of the trace of a k-form over one oriented k-simplex.

    simplex: (k+1, 2) coordinates; the given vertex order is the
    orientation.  k = 0 is point evaluation, k = 1 the line integral of
    (P, Q) . t ds, k = 2 the area integral of R signed by the vertex
    order.  A supplied rule must be exact for the form's degree.
    """
    pts = np.asarray(simplex, dtype=np.float64)
    k = form.degree
    if pts.shape != (k + 1, 2):
        raise ValueError(f"a {k}-simplex needs {k + 1} points in the plane")
    if rule is not None and rule.exactness < form.poly_degree:
        raise ValueError(
            f"rule exact to degree {rule.exactness} cannot integrate a "
            f"degree-{form.poly_degree} form"
        )
    if k == 0:
        return float(form.components[0](pts[0, 0], pts[0, 1]))
    if k == 1:
        if rule is None:
            rule = gauss_legendre_unit(max(10, form.poly_degree // 2 + 1))
        t, w = rule.points, rule.weights
        tang = pts[1] - pts[0]
        q = pts[0][None, :] + t[:, None] * tang[None, :]
        px = form.components[0](q[:, 0], q[:, 1])
        qy = form.components[1](q[:, 0], q[:, 1])
        return float((px * tang[0] + qy * tang[1]) @ w)
    if rule is None:
        rule = triangle_rule(max(form.poly_degree, 2))
    xi, w = rule.points, rule.weights
    e1, e2 = pts[1] - pts[0], pts[2] - pts[0]
    det = e1[0] * e2[1] - e1[1] * e2[0]
    q = pts[0][None, :] + xi[:, 0, None] * e1[None, :] + xi[:, 1, None] * e2[None, :]
    vals = form.components[0](q[:, 0], q[:, 1])
    return float(det * (vals @ w))


# ---------------------------------------------------------------------------
# de Rham maps
# ---------------------------------------------------------------------------


def de_rham(
    K: SimplicialComplex, form: PolyForm, rule_degree: int | None = None
) -> np.ndarray:
    """Integrate a k-form over every oriented k-simplex of the complex.

    Vertices get point values; edges get line integrals along the
    ascending-vertex tangent; triangles get area integrals signed by the
    orientation of the ascending vertex tuple.  Quadrature is sized to the
    polynomial degree (or ``rule_degree`` if given), so values are exact
    up to roundoff.
    """
    k = form.degree
    d = form.poly_degree if rule_degree is None else rule_degree
    if k == 0:
        return form.components[0](K.vertices[:, 0], K.vertices[:, 1])
    if k == 1:
        rule = gauss_legendre_unit(max(10, d // 2 + 1))
        t, w = rule.points, rule.weights
        edges = K.simplices(1)
        a = K.vertices[edges[:, 0]]
        tang = K.vertices[edges[:, 1]] - a
        pts = a[:, None, :] + t[None, :, None] * tang[:, None, :]
        px = form.components[0](pts[..., 0], pts[..., 1])
        qy = form.components[1](pts[..., 0], pts[..., 1])
        return (px * tang[:, None, 0] + qy * tang[:, None, 1]) @ w
    rule = triangle_rule(max(d, 2))
    xi, w = rule.points, rule.weights
    tris = K.simplices(2)
    p0 = K.vertices[tris[:, 0]]
    e1 = K.vertices[tris[:, 1]] - p0
    e2 = K.vertices[tris[:, 2]] - p0
    det = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]
    pts = (
        p0[:, None, :]
        + xi[None, :, 0, None] * e1[:, None, :]
        + xi[None, :, 1, None] * e2[:, None, :]
    )
    vals = form.components[0](pts[..., 0], pts[..., 1])
    return det * (vals @ w)


def de_rham_dual(
    K: SimplicialComplex, dual: DualComplex, form: PolyForm
) -> np.ndarray:
    """Integrate an m-form over the dual cells of the (2 - m)-simplices.

    Orientation conventions (the ones under which constant forms make the
    dual-averaging and primal de Rham maps agree exactly):

      * dual 0-cells (m = 0): the circumcenter of T carries the sign of
        T's ascending vertex orientation;
      * dual 1-cells (m = 1): each piece [c(e), c(T)] is run in the
        direction that is the +90-degree rotation of e's ascending
        tangent;
      * dual 2-cells (m = 2): positively oriented (plain area integrals
        over the flag triangles).
    """
    m = form.degree
    if m == 0:
        c = dual.centers[2]
        return dual.tri_orientation * form.components[0](c[:, 0], c[:, 1])
    if m == 1:
        rule = gauss_legendre_unit(max(10, form.poly_degree // 2 + 1))
        t, w = rule.points, rule.weights
        e_idx = dual.flag_edge[::2]
        t_idx = dual.flag_tri[::2]
        a = dual.centers[1][e_idx]
        seg = dual.centers[2][t_idx] - a
        edges = K.simplices(1)
        tang = K.vertices[edges[e_idx, 1]] - K.vertices[edges[e_idx, 0]]
        rot = np.stack([-tang[:, 1], tang[:, 0]], axis=1)
        sign = np.where(np.einsum("ij,ij->i", seg, rot) >= 0.0, 1.0, -1.0)
        pts = a[:, None, :] + t[None, :, None] * seg[:, None, :]
        px = form.components[0](pts[..., 0], pts[..., 1])
        qy = form.components[1](pts[..., 0], pts[..., 1])
        vals = sign * ((px * seg[:, None, 0] + qy * seg[:, None, 1]) @ w)
        out = np.zeros(K.n_simplices(1))
        np.add.at(out, e_idx, vals)
        return out
    rule = triangle_rule(max(form.poly_degree, 2))
    xi, w = rule.points, rule.weights
    q = dual.flag_coords
    p0 = q[:, 0]
    e1 = q[:, 1] - p0
    e2 = q[:, 2] - p0
    adet = np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    pts = (
        p0[:, None, :]
        + xi[None, :, 0, None] * e1[:, None, :]
        + xi[None, :, 1, None] * e2[:, None, :]
    )
    vals = form.components[0](pts[..., 0], pts[..., 1])
    out = np.zeros(K.n_simplices(0))
    np.add.at(out, dual.flag_vertex, adet * (vals @ w))
    return out
