#include "kokomesh/bipoly.hpp"

#include <algorithm>
#include <cmath>

#include "kokomesh/errors.hpp"
#include "kokomesh/projective.hpp"
#include "kokomesh/rng.hpp"

namespace koko {

BiPoly BiPoly::constant(cplx c) {
    BiPoly p;
    p.setCoeff(0, 0, c);
    p.trim();
    return p;
}

BiPoly BiPoly::monomial(int dx, int dy, cplx c) {
    BiPoly p;
    p.setCoeff(dx, dy, c);
    p.trim();
    return p;
}

std::pair<int, int> BiPoly::bidegree() const {
    if (isZero()) throw ZeroPolynomialError("bidegree of zero polynomial");
    return {degX(), degY()};
}

cplx BiPoly::coeff(int i, int j) const {
    if (i < 0 || j < 0) return 0.0;
    if (i >= static_cast<int>(c_.size())) return 0.0;
    if (j >= static_cast<int>(c_[i].size())) return 0.0;
    return c_[i][j];
}

void BiPoly::ensure(int i, int j) {
    if (static_cast<int>(c_.size()) <= i) c_.resize(i + 1);
    std::size_t cols = std::max(c_.empty() ? 0 : c_[0].size(), static_cast<std::size_t>(j + 1));
    for (auto& row : c_) row.resize(std::max(row.size(), cols), cplx(0.0));
}

void BiPoly::setCoeff(int i, int j, cplx v) {
    ensure(i, j);
    c_[i][j] = v;
}

double BiPoly::maxAbsCoeff() const {
    double m = 0.0;
    for (const auto& row : c_)
        for (cplx v : row) m = std::max(m, std::abs(v));
    return m;
}

BiPoly& BiPoly::trim(double relTol) {
    double scale = maxAbsCoeff();
    if (scale == 0.0) {
        c_.clear();
        return *this;
    }
    double thr = relTol * scale;
    for (auto& row : c_)
        for (cplx& v : row)
            if (std::abs(v) <= thr) v = 0.0;
    // drop zero trailing rows
    while (!c_.empty()) {
        bool zero = std::all_of(c_.back().begin(), c_.back().end(),
                                [](cplx v) { return v == cplx(0.0); });
        if (!zero) break;
        c_.pop_back();
    }
    if (c_.empty()) return *this;
    // drop zero trailing columns
    std::size_t keep = 0;
    for (const auto& row : c_)
        for (std::size_t j = 0; j < row.size(); ++j)
            if (row[j] != cplx(0.0)) keep = std::max(keep, j + 1);
    for (auto& row : c_) row.resize(keep);
    if (keep == 0) c_.clear();
    return *this;
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
    BiPoly r = *this;
    for (int i = 0; i <= o.degX(); ++i)
        for (int j = 0; j <= o.degY(); ++j)
            if (o.coeff(i, j) != cplx(0.0)) r.setCoeff(i, j, r.coeff(i, j) + o.coeff(i, j));
    r.trim();
    return r;
}

BiPoly BiPoly::operator-(const BiPoly& o) const { return *this + (-o); }

BiPoly BiPoly::operator-() const {
    BiPoly r = *this;
    for (auto& row : r.c_)
        for (cplx& v : row) v = -v;
    return r;
}

BiPoly BiPoly::operator*(const BiPoly& o) const {
    if (isZero() || o.isZero()) return {};
    BiPoly r;
    r.ensure(degX() + o.degX(), degY() + o.degY());
    for (int i = 0; i <= degX(); ++i)
        for (int j = 0; j <= degY(); ++j) {
            cplx a = coeff(i, j);
            if (a == cplx(0.0)) continue;
            for (int k = 0; k <= o.degX(); ++k)
                for (int l = 0; l <= o.degY(); ++l) {
                    cplx b = o.coeff(k, l);
                    if (b == cplx(0.0)) continue;
                    r.c_[i + k][j + l] += a * b;
                }
        }
    r.trim();
    return r;
}

BiPoly BiPoly::operator*(cplx k) const {
    BiPoly r = *this;
    for (auto& row : r.c_)
        for (cplx& v : row) v *= k;
    r.trim();
    return r;
}

cplx BiPoly::eval(cplx x, cplx y) const {
    cplx acc = 0.0;
    for (int i = degX(); i >= 0; --i) {
        // Horner in y for row i
        cplx row = 0.0;
        for (int j = degY(); j >= 0; --j) row = row * y + coeff(i, j);
        acc = acc * x + row;
    }
    return acc;
}

std::vector<cplx> BiPoly::coeffsInYAt(cplx x0) const {
    std::vector<cplx> out(static_cast<std::size_t>(std::max(degY() + 1, 0)), cplx(0.0));
    for (int j = 0; j <= degY(); ++j) {
        cplx acc = 0.0;
        for (int i = degX(); i >= 0; --i) acc = acc * x0 + coeff(i, j);
        out[j] = acc;
    }
    return out;
}

std::vector<cplx> BiPoly::coeffsInXAt(cplx y0) const {
    std::vector<cplx> out(static_cast<std::size_t>(std::max(degX() + 1, 0)), cplx(0.0));
    for (int i = 0; i <= degX(); ++i) {
        cplx acc = 0.0;
        for (int j = degY(); j >= 0; --j) acc = acc * y0 + coeff(i, j);
        out[i] = acc;
    }
    return out;
}

std::vector<cplx> BiPoly::rowPoly(int i) const {
    std::vector<cplx> out;
    for (int j = 0; j <= degY(); ++j) out.push_back(coeff(i, j));
    return out;
}

std::vector<cplx> BiPoly::colPoly(int j) const {
    std::vector<cplx> out;
    for (int i = 0; i <= degX(); ++i) out.push_back(coeff(i, j));
    return out;
}

BiPoly BiPoly::swapped() const {
    BiPoly r;
    for (int i = 0; i <= degX(); ++i)
        for (int j = 0; j <= degY(); ++j)
            if (coeff(i, j) != cplx(0.0)) r.setCoeff(j, i, coeff(i, j));
    r.trim();
    return r;
}

namespace {

// determinant of a small matrix of polynomials by cofactor expansion
BiPoly detPoly(std::vector<std::vector<BiPoly>>& m) {
    std::size_t n = m.size();
    if (n == 1) return m[0][0];
    BiPoly acc;
    int sign = 1;
    for (std::size_t r = 0; r < n; ++r) {
        if (!m[r][0].isZero()) {
            std::vector<std::vector<BiPoly>> minor;
            minor.reserve(n - 1);
            for (std::size_t rr = 0; rr < n; ++rr) {
                if (rr == r) continue;
                std::vector<BiPoly> row(m[rr].begin() + 1, m[rr].end());
                minor.push_back(std::move(row));
            }
            BiPoly term = m[r][0] * detPoly(minor);
            acc = (sign > 0) ? acc + term : acc - term;
        }
        sign = -sign;
    }
    return acc;
}

} // namespace

BiPoly resultant(const BiPoly& p, const BiPoly& q) {
    // p in (x, y): eliminate y, its y-coefficients are polynomials in x.
    // q in (y, z): its first variable is the eliminated one.
    int n = p.degY();
    int m = q.degX();
    if (n < 1 || m < 1)
        throw DegenerateLeadingCoefficientError("resultant needs positive degree in the middle variable");
    int N = n + m;
    // entries as polynomials in (x, z)
    std::vector<std::vector<BiPoly>> syl(static_cast<std::size_t>(N),
                                         std::vector<BiPoly>(static_cast<std::size_t>(N)));
    // q rows first: n of them, descending coefficients of q in its first variable
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) {
            BiPoly entry;
            for (int j = 0; j <= q.degY(); ++j)
                if (q.coeff(m - k, j) != cplx(0.0)) entry.setCoeff(0, j, q.coeff(m - k, j));
            entry.trim();
            syl[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + k)] = std::move(entry);
        }
    // p rows: m of them
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) {
            BiPoly entry;
            for (int i = 0; i <= p.degX(); ++i)
                if (p.coeff(i, n - k) != cplx(0.0)) entry.setCoeff(i, 0, p.coeff(i, n - k));
            entry.trim();
            syl[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + k)] = std::move(entry);
        }
    BiPoly det = detPoly(syl);
    det.trim();
    return det;
}

BiPoly discriminantIn(const BiPoly& p, Var v) {
    const BiPoly q = (v == Var::Y) ? p : p.swapped();
    if (q.degY() != 2) throw NotQuadraticError("discriminant needs degree exactly 2");
    BiPoly a, b, c;
    for (int i = 0; i <= q.degX(); ++i) {
        if (q.coeff(i, 2) != cplx(0.0)) a.setCoeff(i, 0, q.coeff(i, 2));
        if (q.coeff(i, 1) != cplx(0.0)) b.setCoeff(i, 0, q.coeff(i, 1));
        if (q.coeff(i, 0) != cplx(0.0)) c.setCoeff(i, 0, q.coeff(i, 0));
    }
    a.trim();
    b.trim();
    c.trim();
    BiPoly d = b * b - a * c * cplx(4.0);
    d.trim();
    return d;
}

std::vector<cplx> polyRoots(const std::vector<cplx>& coeffs) {
    std::vector<cplx> c = coeffs;
    double scale = 0.0;
    for (cplx v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return {};
    while (!c.empty() && std::abs(c.back()) <= 1e-12 * scale) c.pop_back();
    if (c.size() <= 1) return {};
    int n = static_cast<int>(c.size()) - 1;
    cplx lead = c.back();
    for (cplx& v : c) v /= lead;
    if (n == 1) return {-c[0]};
    if (n == 2) {
        cplx b = c[1], a = c[0];
        cplx d = std::sqrt(b * b - 4.0 * a);
        cplx q = (std::abs(b + d) > std::abs(b - d)) ? -(b + d) / 2.0 : -(b - d) / 2.0;
        if (std::abs(q) == 0.0) return {cplx(0.0), cplx(0.0)};
        return {q, a / q};
    }
    // Durand-Kerner
    std::vector<cplx> r(static_cast<std::size_t>(n));
    cplx seedPt(0.4, 0.9);
    r[0] = seedPt;
    for (int i = 1; i < n; ++i) r[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i - 1)] * seedPt;
    auto evalp = [&](cplx x) {
        cplx acc = 1.0;
        for (int i = n - 1; i >= 0; --i) acc = acc * x + c[static_cast<std::size_t>(i)];
        return acc;
    };
    for (int iter = 0; iter < 500; ++iter) {
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx num = evalp(r[static_cast<std::size_t>(i)]);
            cplx den = 1.0;
            for (int k = 0; k < n; ++k)
                if (k != i) den *= (r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(k)]);
            cplx step = num / den;
            r[static_cast<std::size_t>(i)] -= step;
            worst = std::max(worst, std::abs(step));
        }
        if (worst < 1e-14) break;
    }
    return r;
}

namespace {

// divide a univariate polynomial (ascending) by (t - root); remainder dropped
std::vector<cplx> deflate(const std::vector<cplx>& c, cplx root) {
    int n = static_cast<int>(c.size()) - 1;
    std::vector<cplx> q(static_cast<std::size_t>(n), cplx(0.0));
    cplx acc = c[static_cast<std::size_t>(n)];
    for (int i = n - 1; i >= 0; --i) {
        q[static_cast<std::size_t>(i)] = acc;
        acc = c[static_cast<std::size_t>(i)] + acc * root;
    }
    return q;
}

double polyNorm(const std::vector<cplx>& c) {
    double s = 0.0;
    for (cplx v : c) s = std::max(s, std::abs(v));
    return s;
}

cplx evalUni(const std::vector<cplx>& c, cplx x) {
    cplx acc = 0.0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) acc = acc * x + c[static_cast<std::size_t>(i)];
    return acc;
}

cplx evalUniDeriv(const std::vector<cplx>& c, cplx x) {
    cplx acc = 0.0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 1; --i)
        acc = acc * x + c[static_cast<std::size_t>(i)] * static_cast<double>(i);
    return acc;
}

// Newton polish adapted to an m-fold root
cplx polishRoot(const std::vector<cplx>& c, cplx z0, int mult) {
    cplx z = z0;
    for (int it = 0; it < 20; ++it) {
        cplx f = evalUni(c, z);
        cplx d = evalUniDeriv(c, z);
        if (std::abs(d) < 1e-300) break;
        cplx step = static_cast<double>(mult) * f / d;
        z -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    return z;
}

// roots (with multiplicity) in the second variable dividing every row of p
std::vector<cplx> detectCommonRootsY(const BiPoly& p, double tol) {
    std::vector<cplx> found;
    BiPoly cur = p;
    for (;;) {
        if (cur.isZero() || cur.degY() < 1) return found;
        int ref = 0;
        double best = -1.0;
        for (int i = 0; i <= cur.degX(); ++i) {
            double n = polyNorm(cur.rowPoly(i));
            if (n > best) {
                best = n;
                ref = i;
            }
        }
        if (best <= 0.0) return found;
        std::vector<cplx> refRow = cur.rowPoly(ref);
        std::vector<cplx> cand = polyRoots(refRow);
        bool removed = false;
        for (cplx z0 : cand) {
            int mult = 0;
            for (cplx w : cand)
                if (std::abs(w - z0) < 1e-4 * std::max(1.0, std::abs(z0))) ++mult;
            cplx z = polishRoot(refRow, z0, std::max(1, mult));
            double zscale = std::max(1.0, std::abs(z));
            bool common = true;
            for (int i = 0; i <= cur.degX() && common; ++i) {
                std::vector<cplx> row = cur.rowPoly(i);
                double nrm = polyNorm(row);
                if (nrm == 0.0) continue;
                double powz = std::pow(zscale, static_cast<double>(row.size() - 1));
                if (std::abs(evalUni(row, z)) > tol * nrm * powz) common = false;
            }
            if (!common) continue;
            found.push_back(z);
            BiPoly next;
            for (int i = 0; i <= cur.degX(); ++i) {
                std::vector<cplx> row = cur.rowPoly(i);
                if (polyNorm(row) == 0.0) continue;
                std::vector<cplx> q = deflate(row, z);
                for (std::size_t j = 0; j < q.size(); ++j)
                    if (q[j] != cplx(0.0)) next.setCoeff(i, static_cast<int>(j), q[j]);
            }
            next.trim();
            if (next.isZero()) {
                found.pop_back();
                return found;
            }
            cur = next;
            removed = true;
            break;
        }
        if (!removed) return found;
    }
}

} // namespace

BiPoly stripUnivariateFactors(const BiPoly& p, double tol) {
    if (p.isZero()) return p;
    std::vector<cplx> xRoots = detectCommonRootsY(p.swapped(), tol);
    std::vector<cplx> zRoots = detectCommonRootsY(p, tol);
    if (xRoots.empty() && zRoots.empty()) return p;
    // Reconstruct the quotient by evaluation and interpolation; dividing
    // pointwise avoids the error accumulation of repeated deflation.
    int nx = p.degX() - static_cast<int>(xRoots.size()) + 1;
    int nz = p.degY() - static_cast<int>(zRoots.size()) + 1;
    if (nx < 1 || nz < 1) return p;
    auto radiusAway = [](const std::vector<cplx>& roots) {
        double r = 1.0;
        for (int tries = 0; tries < 32; ++tries) {
            bool ok = true;
            for (cplx z : roots)
                if (std::abs(std::abs(z) - r) < 5e-2) ok = false;
            if (ok) return r;
            r *= 1.17;
        }
        return r;
    };
    double rx = radiusAway(xRoots);
    double rz = radiusAway(zRoots);
    const double twoPi = 6.283185307179586476925;
    std::vector<std::vector<cplx>> vals(static_cast<std::size_t>(nx),
                                        std::vector<cplx>(static_cast<std::size_t>(nz)));
    for (int j = 0; j < nx; ++j) {
        cplx xj = std::polar(rx, twoPi * j / nx);
        cplx ux = 1.0;
        for (cplx r : xRoots) ux *= (xj - r);
        for (int k = 0; k < nz; ++k) {
            cplx zk = std::polar(rz, twoPi * k / nz);
            cplx vz = 1.0;
            for (cplx r : zRoots) vz *= (zk - r);
            vals[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = p.eval(xj, zk) / (ux * vz);
        }
    }
    BiPoly q;
    for (int a = 0; a < nx; ++a)
        for (int b = 0; b < nz; ++b) {
            cplx acc = 0.0;
            for (int j = 0; j < nx; ++j)
                for (int k = 0; k < nz; ++k) {
                    cplx w = std::polar(1.0, -twoPi * (static_cast<double>(j) * a / nx +
                                                       static_cast<double>(k) * b / nz));
                    acc += vals[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] * w;
                }
            acc /= static_cast<double>(nx) * static_cast<double>(nz);
            acc /= std::pow(rx, a) * std::pow(rz, b);
            q.setCoeff(a, b, acc);
        }
    q.trim();
    return q;
}

CommonFactorReport commonFactorHeuristic(const BiPoly& r1, const BiPoly& r3, int samples,
                                         double tol, std::uint64_t seed) {
    CommonFactorReport rep;
    if (r1.isZero() || r3.isZero()) return rep;
    Rng rng(seed);
    double scale1 = r1.maxAbsCoeff();
    double scale3 = r3.maxAbsCoeff();
    int hit = 0;
    for (int k = 0; k < samples; ++k) {
        double rad = rng.uniform(0.3, 2.0);
        double ang = rng.uniform(0.0, 6.283185307179586);
        cplx x0 = std::polar(rad, ang);
        std::vector<cplx> u1 = r1.coeffsInYAt(x0);
        std::vector<cplx> u3 = r3.coeffsInYAt(x0);
        // inconclusive when the top coefficient collapses relative to the slice
        auto collapsed = [](const std::vector<cplx>& c, double polyScale) {
            if (c.size() <= 1) return true;
            return std::abs(c.back()) <= 1e-8 * std::max(polyNorm(c), 1e-3 * polyScale);
        };
        if (collapsed(u1, scale1) || collapsed(u3, scale3)) {
            ++rep.skipped;
            continue;
        }
        ++rep.usable;
        std::vector<cplx> roots1 = polyRoots(u1);
        std::vector<cplx> roots3 = polyRoots(u3);
        bool found = false;
        for (cplx a : roots1) {
            for (cplx b : roots3) {
                if (chordal(ProjPoint(a), ProjPoint(b)) <= tol) {
                    found = true;
                    if (rep.witnesses.size() < 8) rep.witnesses.emplace_back(x0, a);
                    break;
                }
            }
            if (found) break;
        }
        if (found) ++hit;
    }
    if (rep.usable == 0) return rep;
    rep.fraction = static_cast<double>(hit) / static_cast<double>(rep.usable);
    rep.shared = rep.fraction >= 0.95;
    return rep;
}

} // namespace koko
