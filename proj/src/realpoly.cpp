#include "hslab/realpoly.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hslab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double max_abs(const std::vector<double>& c) {
    double m = 0.0;
    for (double x : c) m = std::max(m, std::fabs(x));
    return m;
}

// Compensated Horner evaluation (error-free transformations via fma).
// Returns the corrected value plus the absolute-value profile
// sum(|c_i| |x|^i), which bounds how large the rounding noise in the
// coefficients themselves can show up at x.
struct EvalResult {
    double value;
    double abs_profile;
};

EvalResult eval_compensated(const std::vector<double>& c, double x) {
    if (c.empty()) return {0.0, 0.0};
    const double ax = std::fabs(x);
    double s = c.back();
    double e = 0.0;
    double b = std::fabs(c.back());
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        const double p = s * x;
        const double pe = std::fma(s, x, -p);  // exact product error
        const double t = p + c[i];
        const double z = t - p;
        const double te = (p - (t - z)) + (c[i] - z);  // exact sum error
        s = t;
        e = e * x + (pe + te);
        b = b * ax + std::fabs(c[i]);
    }
    return {s + e, b};
}

// Sign of p(x) with a zero band: values below a small multiple of the
// coefficient-noise profile count as zero.
int sign_at(const std::vector<double>& c, double x) {
    const auto ev = eval_compensated(c, x);
    const double tau = 4.0 * static_cast<double>(c.size()) * kEps * ev.abs_profile;
    if (std::fabs(ev.value) <= tau) return 0;
    return ev.value > 0.0 ? 1 : -1;
}

double cauchy_bound(const std::vector<double>& c) {
    const double lead = std::fabs(c.back());
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::fabs(c[i]));
    return 1.0 + m / lead;
}

double cluster_radius(double tol, double spread) {
    return std::max(tol, 1e-9 * (1.0 + spread));
}

// Merge sorted roots whose consecutive gaps are below `radius` into a
// multiple root at the cluster mean.
void cluster_in_place(std::vector<double>& roots, double radius) {
    std::size_t i = 0;
    while (i < roots.size()) {
        std::size_t j = i + 1;
        while (j < roots.size() && roots[j] - roots[j - 1] <= radius) ++j;
        if (j - i > 1) {
            double mean = 0.0;
            for (std::size_t k = i; k < j; ++k) mean += roots[k];
            mean /= static_cast<double>(j - i);
            for (std::size_t k = i; k < j; ++k) roots[k] = mean;
        }
        i = j;
    }
}

// Bisection on a bracket with opposite signs, then one guarded Newton
// polish kept inside the bracket.  Inside a confirmed bracket the raw
// sign of the compensated value is used: the classification zero band
// would otherwise stop refinement as soon as the midpoint enters it,
// wasting accuracy on ill-conditioned simple roots.
double refine_root(const std::vector<double>& c, const std::vector<double>& dc,
                   double a, double b, int sa, double tol) {
    for (int it = 0; it < 200 && (b - a) > tol; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;  // bracket at rounding resolution
        const double vm = eval_compensated(c, m).value;
        if (vm == 0.0) return m;
        const int sm = vm > 0.0 ? 1 : -1;
        if (sm == sa) a = m; else b = m;
    }
    double x = 0.5 * (a + b);
    const double fx = eval_compensated(c, x).value;
    const double dfx = eval_compensated(dc, x).value;
    if (dfx != 0.0) {
        const double step = fx / dfx;
        const double y = x - step;
        if (y >= a - tol && y <= b + tol &&
            std::fabs(eval_compensated(c, y).value) <= std::fabs(fx)) {
            x = y;
        }
    }
    return x;
}

std::vector<double> roots_recursive(const std::vector<double>& c, double tol);

// Quadratic base case with a numerically stable formula; the
// discriminant zero-band absorbs cancellation noise so exact double
// roots never fall on the complex side by rounding alone.
std::vector<double> roots_quadratic(const std::vector<double>& c) {
    const double c0 = c[0], c1 = c[1], c2 = c[2];
    const double disc = c1 * c1 - 4.0 * c2 * c0;
    const double tau = 8.0 * kEps * (c1 * c1 + std::fabs(4.0 * c2 * c0));
    if (disc < -tau) {
        throw NotHyperbolicError("quadratic has a complex conjugate root pair");
    }
    if (disc <= tau) {
        const double r = -c1 / (2.0 * c2);
        return {r, r};
    }
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (c1 + (c1 >= 0.0 ? sq : -sq));
    double r1 = q / c2;
    double r2 = (q != 0.0) ? c0 / q : -c1 / c2 - r1;
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2};
}

std::vector<double> roots_recursive(const std::vector<double>& c, double tol) {
    const int n = static_cast<int>(c.size()) - 1;
    if (n <= 0) return {};
    if (n == 1) return {-c[0] / c[1]};
    if (n == 2) return roots_quadratic(c);

    std::vector<double> dc(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) dc[i - 1] = c[i] * static_cast<double>(i);
    std::vector<double> crit = roots_recursive(dc, tol);  // sorted, clustered

    // Distinct critical points with multiplicities.  For a hyperbolic
    // polynomial every multiple critical point must itself be a root,
    // and between consecutive distinct critical points the polynomial
    // is strictly monotone, so each open gap holds at most one simple
    // root detectable by a sign change.
    std::vector<double> ecrit;
    std::vector<int> emult;
    for (double e : crit) {
        if (!ecrit.empty() && e == ecrit.back()) {
            ++emult.back();
        } else {
            ecrit.push_back(e);
            emult.push_back(1);
        }
    }

    const double bound = cauchy_bound(c);
    std::vector<double> pts;
    pts.push_back(std::min(-bound, ecrit.front() - 1.0));
    for (double e : ecrit) pts.push_back(e);
    pts.push_back(std::max(bound, ecrit.back() + 1.0));

    std::vector<int> signs(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) signs[i] = sign_at(c, pts[i]);

    std::vector<double> roots;
    std::vector<std::size_t> nonzero_crit;  // candidates for the rescue pass
    for (std::size_t i = 0; i < ecrit.size(); ++i) {
        if (signs[i + 1] != 0) {
            nonzero_crit.push_back(i);
            continue;
        }
        // A maximal run of critical sites sitting inside the zero band is
        // one multiple root split by noise: distinct multiple roots always
        // have an interior extremum with a nonzero value between them, so
        // counting each site separately would overshoot.  Count the run
        // once, at the multiplicity-weighted mean.
        std::size_t j = i;
        long total = 0;
        double weighted = 0.0;
        while (j < ecrit.size() && signs[j + 1] == 0) {
            total += emult[j];
            weighted += ecrit[j] * static_cast<double>(emult[j]);
            ++j;
        }
        roots.insert(roots.end(), static_cast<std::size_t>(total) + 1,
                     weighted / static_cast<double>(total));
        i = j - 1;
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (signs[i] != 0 && signs[i + 1] != 0 && signs[i] != signs[i + 1]) {
            roots.push_back(refine_root(c, dc, pts[i], pts[i + 1], signs[i], tol));
        }
    }

    // Rescue pass: a critical value that just misses the zero band may
    // still hide a root cluster within the clustering radius (the roots
    // are real-or-complex below resolution).  A critical point of
    // multiplicity m can absorb up to m + 1 polynomial roots; with no
    // sign change across the site the hidden count is even.  Promote the
    // best candidates rather than reporting a hyperbolicity failure.
    if (static_cast<int>(roots.size()) < n && !nonzero_crit.empty()) {
        const double spread = ecrit.back() - ecrit.front();
        const double radius = cluster_radius(tol, spread);
        std::vector<double> ddc(dc.size() - 1);
        for (std::size_t i = 1; i < dc.size(); ++i) ddc[i - 1] = dc[i] * static_cast<double>(i);
        std::vector<std::tuple<double, double, int>> candidates;  // (|p(e)|, e, capacity)
        for (std::size_t i : nonzero_crit) {
            const double e = ecrit[i];
            const auto pv = eval_compensated(c, e);
            const double curv = std::fabs(eval_compensated(ddc, e).value);
            const double allowance =
                0.5 * curv * radius * radius + 8.0 * static_cast<double>(c.size()) * kEps * pv.abs_profile;
            if (std::fabs(pv.value) <= allowance)
                candidates.emplace_back(std::fabs(pv.value), e, emult[i] + 1);
        }
        std::sort(candidates.begin(), candidates.end());
        for (const auto& [pval, e, capacity] : candidates) {
            const int deficit = n - static_cast<int>(roots.size());
            if (deficit < 2) break;
            const int k = std::min(capacity, deficit) & ~1;
            roots.insert(roots.end(), static_cast<std::size_t>(k), e);
        }
    }

    if (static_cast<int>(roots.size()) != n) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "certified only %zu real roots of a degree-%d polynomial", roots.size(), n);
        throw NotHyperbolicError(msg);
    }
    std::sort(roots.begin(), roots.end());
    cluster_in_place(roots, cluster_radius(tol, roots.back() - roots.front()));
    return roots;
}

}  // namespace

RealPolynomial::RealPolynomial(std::initializer_list<double> coeffs)
    : RealPolynomial(std::vector<double>(coeffs)) {}

RealPolynomial::RealPolynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    const double m = max_abs(coeffs_);
    if (m == 0.0) {
        coeffs_.clear();
        return;
    }
    while (!coeffs_.empty() && std::fabs(coeffs_.back()) < kCoeffTrimRel * m) coeffs_.pop_back();
}

double RealPolynomial::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return 0.0;
    return coeffs_[static_cast<std::size_t>(i)];
}

double RealPolynomial::operator()(double x) const {
    if (coeffs_.empty()) return 0.0;
    double s = coeffs_.back();
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;) s = s * x + coeffs_[i];
    return s;
}

std::string RealPolynomial::str() const {
    if (coeffs_.empty()) return "0";
    std::string out;
    char buf[48];
    for (std::size_t i = coeffs_.size(); i-- > 0;) {
        if (coeffs_[i] == 0.0 && coeffs_.size() > 1) continue;
        std::snprintf(buf, sizeof(buf), "%.6g", coeffs_[i]);
        if (!out.empty()) out += coeffs_[i] < 0.0 ? " - " : " + ";
        std::string mag = coeffs_[i] < 0.0 && !out.empty() ? buf + 1 : buf;
        if (out.empty() && coeffs_[i] < 0.0) mag = buf;  // keep leading minus
        out += mag;
        if (i == 1) out += "*z";
        else if (i > 1) { out += "*z^"; out += std::to_string(i); }
    }
    return out;
}

const char* to_string(PositionKind k) {
    switch (k) {
        case PositionKind::FllG: return "F_LL_G";
        case PositionKind::GllF: return "G_LL_F";
        case PositionKind::Proportional: return "PROPORTIONAL";
        case PositionKind::None: return "NONE";
    }
    return "?";
}

double evaluate(const RealPolynomial& p, double x) { return p(x); }

RealPolynomial derivative(const RealPolynomial& p) {
    if (p.degree() < 1) return RealPolynomial();
    std::vector<double> d(p.coeffs().size() - 1);
    for (std::size_t i = 1; i < p.coeffs().size(); ++i)
        d[i - 1] = p.coeffs()[i] * static_cast<double>(i);
    return RealPolynomial(std::move(d));
}

RealPolynomial add(const RealPolynomial& p, const RealPolynomial& q) {
    std::vector<double> c(std::max(p.coeffs().size(), q.coeffs().size()), 0.0);
    for (std::size_t i = 0; i < p.coeffs().size(); ++i) c[i] += p.coeffs()[i];
    for (std::size_t i = 0; i < q.coeffs().size(); ++i) c[i] += q.coeffs()[i];
    return RealPolynomial(std::move(c));
}

RealPolynomial subtract(const RealPolynomial& p, const RealPolynomial& q) {
    return add(p, scale(q, -1.0));
}

RealPolynomial multiply(const RealPolynomial& p, const RealPolynomial& q) {
    if (p.is_zero() || q.is_zero()) return RealPolynomial();
    std::vector<double> c(p.coeffs().size() + q.coeffs().size() - 1, 0.0);
    for (std::size_t i = 0; i < p.coeffs().size(); ++i)
        for (std::size_t j = 0; j < q.coeffs().size(); ++j)
            c[i + j] += p.coeffs()[i] * q.coeffs()[j];
    return RealPolynomial(std::move(c));
}

RealPolynomial scale(const RealPolynomial& p, double s) {
    std::vector<double> c = p.coeffs();
    for (auto& ci : c) ci *= s;
    return RealPolynomial(std::move(c));
}

RealPolynomial monic(const RealPolynomial& p) {
    if (p.is_zero()) throw ZeroPolynomialError("monic of the zero polynomial");
    return scale(p, 1.0 / p.leading());
}

RealPolynomial from_roots(const std::vector<double>& roots, double leading) {
    std::vector<double> c{leading};
    for (double r : roots) {
        c.push_back(0.0);
        for (std::size_t i = c.size() - 1; i-- > 0;) {
            c[i + 1] += c[i];
            c[i] *= -r;
        }
    }
    return RealPolynomial(std::move(c));
}

RootList real_roots(const RealPolynomial& p, double tol) {
    if (p.is_zero()) throw ZeroPolynomialError("real_roots of the zero polynomial");
    RootList rl;
    rl.leading = p.leading();
    rl.roots = roots_recursive(p.coeffs(), tol);
    return rl;
}

RootInterval root_interval(const RealPolynomial& p, double tol) {
    auto rl = real_roots(p, tol);
    if (rl.roots.empty())
        throw ZeroPolynomialError("root_interval requires a polynomial of degree >= 1");
    return RootInterval{rl.roots.front(), rl.roots.back()};
}

namespace {

// Interleaving chain with slack, used on computed root vectors where
// shared roots carry rounding noise.
bool chain_with_slack(const std::vector<double>& x, const std::vector<double>& y, double slack) {
    if (y.size() == x.size()) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] > y[i] + slack) return false;
            if (i + 1 < x.size() && y[i] > x[i + 1] + slack) return false;
        }
        return true;
    }
    if (y.size() == x.size() + 1) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (y[i] > x[i] + slack) return false;
            if (x[i] > y[i + 1] + slack) return false;
        }
        return true;
    }
    return false;
}

}  // namespace

PositionKind proper_position(const RealPolynomial& f, const RealPolynomial& g, double tol) {
    if (f.is_zero() || g.is_zero()) return PositionKind::Proportional;

    const RealPolynomial leftpart = multiply(derivative(f), g);
    const RealPolynomial rightpart = multiply(f, derivative(g));
    const RealPolynomial w = subtract(leftpart, rightpart);
    const double wscale = max_abs(leftpart.coeffs()) + max_abs(rightpart.coeffs());
    if (w.is_zero() || max_abs(w.coeffs()) <= tol * wscale) return PositionKind::Proportional;

    const auto rf = real_roots(f, std::min(tol, kDefaultRootTol));
    const auto rg = real_roots(g, std::min(tol, kDefaultRootTol));

    std::vector<double> merged = rf.roots;
    merged.insert(merged.end(), rg.roots.begin(), rg.roots.end());
    std::sort(merged.begin(), merged.end());
    const double spread = merged.empty() ? 0.0 : merged.back() - merged.front();
    const double slack = tol * (1.0 + spread);

    bool interlaced;
    if (f.degree() <= 1 && g.degree() <= 1) {
        interlaced = true;
    } else if (rf.roots.size() == rg.roots.size()) {
        interlaced = chain_with_slack(rf.roots, rg.roots, slack) ||
                     chain_with_slack(rg.roots, rf.roots, slack);
    } else if (rg.roots.size() == rf.roots.size() + 1) {
        interlaced = chain_with_slack(rf.roots, rg.roots, slack);
    } else if (rf.roots.size() == rg.roots.size() + 1) {
        interlaced = chain_with_slack(rg.roots, rf.roots, slack);
    } else {
        interlaced = false;
    }
    if (!interlaced) return PositionKind::None;

    // Wronskian sign sweep: all roots, gap midpoints, one point past each
    // extreme.  An interlacing pair has a one-signed Wronskian, so this
    // finite sample is decisive up to tolerance.
    std::vector<double> pts;
    if (merged.empty()) {
        pts = {-1.0, 0.0, 1.0};
    } else {
        pts.push_back(merged.front() - (1.0 + 0.5 * spread));
        for (std::size_t i = 0; i < merged.size(); ++i) {
            pts.push_back(merged[i]);
            if (i + 1 < merged.size() && merged[i + 1] > merged[i])
                pts.push_back(0.5 * (merged[i] + merged[i + 1]));
        }
        pts.push_back(merged.back() + (1.0 + 0.5 * spread));
    }

    bool le = true, ge = true;
    for (double x : pts) {
        const auto ev = eval_compensated(w.coeffs(), x);
        const double band = tol * (1.0 + ev.abs_profile);
        if (ev.value > band) le = false;
        if (ev.value < -band) ge = false;
    }
    if (le) return PositionKind::FllG;
    if (ge) return PositionKind::GllF;
    return PositionKind::None;
}

bool vector_proper_position(const std::vector<double>& x, const std::vector<double>& y) {
    if (y.size() != x.size() && y.size() != x.size() + 1) {
        char msg[120];
        std::snprintf(msg, sizeof(msg),
                      "vector_proper_position needs len(y) in {len(x), len(x)+1}, got %zu and %zu",
                      x.size(), y.size());
        throw LengthMismatchError(msg);
    }
    return chain_with_slack(x, y, 0.0);
}

}  // namespace hslab
