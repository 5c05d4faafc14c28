#include "hslab/hpop.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace hslab {

namespace {

double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double out = 1.0;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

double factorial(int n) {
    double out = 1.0;
    for (int i = 2; i <= n; ++i) out *= i;
    return out;
}

RealPolynomial nth_derivative(RealPolynomial p, int n) {
    for (int i = 0; i < n && !p.is_zero(); ++i) p = derivative(p);
    return p;
}

std::complex<double> eval_complex(const RealPolynomial& p, std::complex<double> z) {
    std::complex<double> acc(0.0, 0.0);
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

// sum |c_i| |x|^i, the backward-stability magnitude profile of Horner.
double abs_profile(const RealPolynomial& p, double x) {
    double ax = std::fabs(x), pw = 1.0, acc = 0.0;
    for (double c : p.coeffs()) {
        acc += std::fabs(c) * pw;
        pw *= ax;
    }
    return acc;
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& m,
                          const char* name, int s) {
    if (int(m.size()) != s)
        throw std::invalid_argument(std::string("matrix '") + name +
                                    "' has a different size than 'a'");
    Eigen::MatrixXd out(s, s);
    for (int i = 0; i < s; ++i) {
        if (int(m[i].size()) != s)
            throw std::invalid_argument(std::string("matrix '") + name +
                                        "' is not square");
        for (int j = 0; j < s; ++j) out(i, j) = m[i][j];
    }
    double scale = 1.0 + out.cwiseAbs().maxCoeff();
    for (int i = 0; i < s; ++i)
        for (int j = i + 1; j < s; ++j)
            if (std::fabs(out(i, j) - out(j, i)) > 1e-9 * scale)
                throw std::invalid_argument(std::string("matrix '") + name +
                                            "' is not symmetric");
    return out;
}

}  // namespace

DifferentialOperator::DifferentialOperator(std::map<int, RealPolynomial> terms)
    : terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (it->first < 0)
            throw std::invalid_argument("derivative orders must be non-negative");
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }
    if (terms_.empty())
        throw std::invalid_argument("operator needs at least one nonzero coefficient");
}

int DifferentialOperator::fuchs_index() const {
    int r = terms_.begin()->second.degree() - terms_.begin()->first;
    for (const auto& [k, q] : terms_) r = std::max(r, q.degree() - k);
    return r;
}

const RealPolynomial& DifferentialOperator::coefficient(int k) const {
    static const RealPolynomial kZero;
    auto it = terms_.find(k);
    return it == terms_.end() ? kZero : it->second;
}

RealPolynomial apply(const DifferentialOperator& t, const RealPolynomial& f) {
    RealPolynomial out;
    for (const auto& [k, q] : t.terms()) {
        RealPolynomial fk = nth_derivative(f, k);
        if (!fk.is_zero()) out = add(out, multiply(q, fk));
    }
    return out;
}

double lambda_n(const DifferentialOperator& t, int n) {
    if (n < 0) throw std::invalid_argument("lambda_n needs n >= 0");
    const int r = t.fuchs_index();
    double acc = 0.0;
    for (const auto& [i, q] : t.terms()) {
        if (r + i < 0) continue;
        acc += factorial(i) * q.coeff(r + i) * binom(n, i);
    }
    return acc;
}

DifferentialOperator classical_operator(const std::vector<double>& alphas,
                                        const std::vector<double>& gammas) {
    if (alphas.size() < 2)
        throw BadClassicalInputError("need at least two interpolation nodes");
    if (alphas.size() != gammas.size())
        throw BadClassicalInputError("node and weight lists differ in length");
    for (size_t j = 0; j + 1 < alphas.size(); ++j)
        if (!(alphas[j] < alphas[j + 1]))
            throw BadClassicalInputError("nodes must be strictly increasing");
    for (double g : gammas)
        if (!(g > 0.0)) throw BadClassicalInputError("weights must be positive");

    RealPolynomial q2 = from_roots(alphas);
    RealPolynomial q1;
    for (size_t j = 0; j < alphas.size(); ++j) {
        std::vector<double> rest;
        rest.reserve(alphas.size() - 1);
        for (size_t i = 0; i < alphas.size(); ++i)
            if (i != j) rest.push_back(alphas[i]);
        q1 = add(q1, scale(from_roots(rest), gammas[j]));
    }
    return DifferentialOperator({{2, std::move(q2)}, {1, std::move(q1)}});
}

DifferentialOperator sandwich_operator(const RealPolynomial& p, int m_in, int n_out) {
    if (m_in < 0 || n_out < m_in)
        throw std::invalid_argument("need 0 <= inner order <= outer order");
    if (p.is_zero()) throw ZeroPolynomialError("envelope polynomial is zero");

    // Hyperbolicity check doubles as the multiplicity census.
    RootList rl = real_roots(p);
    const int budget = n_out - m_in;
    size_t i = 0;
    while (i < rl.roots.size()) {
        size_t j = i;
        while (j < rl.roots.size() && rl.roots[j] == rl.roots[i]) ++j;
        if (int(j - i) > budget) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "envelope zero %.17g has multiplicity %zu > %d",
                          rl.roots[i], j - i, budget);
            throw MultiplicityTooHighError(buf);
        }
        i = j;
    }

    std::map<int, RealPolynomial> terms;
    for (int k = m_in; k <= n_out; ++k) {
        RealPolynomial q = nth_derivative(p, n_out - k);
        if (q.is_zero()) continue;
        terms.emplace(k, scale(q, binom(budget, k - m_in)));
    }
    return DifferentialOperator(std::move(terms));
}

DifferentialOperator pencil_operator(const std::vector<std::vector<double>>& a,
                                     const std::vector<std::vector<double>>& b,
                                     const std::vector<std::vector<double>>& c) {
    const int s = int(a.size());
    if (s == 0) throw std::invalid_argument("matrix 'a' is empty");
    Eigen::MatrixXd am = to_matrix(a, "a", s);
    Eigen::MatrixXd bm = to_matrix(b, "b", s);
    Eigen::MatrixXd cm = to_matrix(c, "c", s);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> esa(am), esb(bm), esc(cm);
    const double norm_a = esa.eigenvalues().cwiseAbs().maxCoeff();
    const double norm_b = esb.eigenvalues().cwiseAbs().maxCoeff();
    const double norm_c = esc.eigenvalues().cwiseAbs().maxCoeff();
    if (!(esa.eigenvalues().minCoeff() > 1e-10 * norm_a))
        throw NotPosDefError("matrix 'a' is not positive definite");
    if (esb.eigenvalues().minCoeff() < -1e-10 * norm_b)
        throw NotPsdError("matrix 'b' is not positive semi-definite");
    int r = 0;
    for (int i = 0; i < s; ++i)
        if (std::fabs(esb.eigenvalues()[i]) <= 1e-10 * norm_b) ++r;
    const int order = s - r;

    // det(zA + wB + C) has degree <= s in each variable; recover its
    // coefficient table through one shared Chebyshev-node Vandermonde.
    const double radius = 1.0 + norm_a + norm_b + norm_c;
    const int m = s + 1;
    Eigen::VectorXd nodes(m);
    for (int i = 0; i < m; ++i)
        nodes[i] = radius * std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * m));
    Eigen::MatrixXd vand(m, m);
    for (int i = 0; i < m; ++i) {
        double pw = 1.0;
        for (int j = 0; j < m; ++j) {
            vand(i, j) = pw;
            pw *= nodes[i];
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(vand);

    Eigen::MatrixXd dets(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            dets(i, j) = (nodes[i] * am + nodes[j] * bm + cm).determinant();

    // Row i -> coefficients in w at z = nodes[i]; then transpose the
    // problem to pull out z-coefficients of every w-power.
    Eigen::MatrixXd wcoef(m, m);
    for (int i = 0; i < m; ++i)
        wcoef.row(i) = lu.solve(dets.row(i).transpose()).transpose();
    Eigen::MatrixXd table(m, m);  // table(mw, iz): z^iz coefficient of w^mw
    for (int mw = 0; mw < m; ++mw)
        table.row(mw) = lu.solve(wcoef.col(mw)).transpose();

    const double gmax = table.cwiseAbs().maxCoeff();
    std::map<int, RealPolynomial> terms;
    for (int mw = 0; mw < m; ++mw) {
        std::vector<double> coef(m);
        for (int iz = 0; iz < m; ++iz) {
            double v = table(mw, iz);
            coef[iz] = std::fabs(v) < 1e-10 * gmax ? 0.0 : v;
        }
        RealPolynomial q(coef);
        if (q.is_zero()) continue;
        if (mw > order)
            throw DegenerateSymbolError("symbol degree in w exceeds the rank of 'b'");
        terms.emplace(order - mw, std::move(q));
    }

    if (terms.find(order) == terms.end() || terms.at(order).degree() != s)
        throw DegenerateSymbolError("top coefficient does not reach degree s");
    if (terms.find(0) == terms.end())
        throw DegenerateSymbolError("constant-order coefficient vanished");
    DifferentialOperator t(std::move(terms));
    if (t.fuchs_index() != r)
        throw DegenerateSymbolError("symbol index disagrees with the nullity of 'b'");
    return t;
}

HpDiagnostics diagnose(const DifferentialOperator& t, std::uint64_t seed, int samples) {
    HpDiagnostics d;
    const int n_ord = t.max_order();
    const int m_ord = t.min_order();
    const int r = t.fuchs_index();
    d.fuchs_index = r;
    d.nondegenerate = r >= 0 && t.coefficient(n_ord).degree() == n_ord + r;

    const int r_top = t.coefficient(n_ord).degree() - n_ord;
    d.degree_bounds_ok = true;
    for (const auto& [k, q] : t.terms())
        if (q.degree() - k > r_top) d.degree_bounds_ok = false;

    // Top-degree profile: a_i = [z^(r+i)] Q_i, collected into sum a_i z^i.
    std::vector<double> lead(size_t(n_ord) + 1, 0.0);
    for (const auto& [k, q] : t.terms())
        if (r + k >= 0) lead[size_t(k)] = q.coeff(r + k);
    int sign = 0;
    bool mixed = false;
    for (double v : lead) {
        if (v == 0.0) continue;
        int sv = v > 0.0 ? 1 : -1;
        if (sign == 0) sign = sv;
        else if (sign != sv) mixed = true;
    }
    d.leading_sign = mixed ? 0 : sign;
    d.leading_poly = RealPolynomial(lead);
    d.leading_poly_ok = false;
    if (!d.leading_poly.is_zero()) {
        try {
            RootList lr = real_roots(d.leading_poly);
            d.leading_poly_ok = true;
            for (double x : lr.roots)
                if (x > 1e-9 * (1.0 + std::fabs(x))) d.leading_poly_ok = false;
        } catch (const NotHyperbolicError&) {
        }
    }

    d.coefficient_chain_ok = true;
    for (int j = m_ord; j < n_ord; ++j) {
        try {
            PositionKind kind = proper_position(t.coefficient(j), t.coefficient(j + 1));
            if (kind != PositionKind::FllG && kind != PositionKind::Proportional)
                d.coefficient_chain_ok = false;
        } catch (const NotHyperbolicError&) {
            d.coefficient_chain_ok = false;
        }
    }

    // Randomized stability probe: at a fixed upper-half-plane z the symbol,
    // read as a polynomial in w, must keep all its roots out of the open
    // upper half plane.
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> ure(-3.0, 3.0), uim(0.0, 3.0);
    const int wdeg = n_ord - m_ord;
    for (int it = 0; it < samples && !d.witness; ++it) {
        ++d.samples_used;
        const std::complex<double> z0(ure(gen), 3.0 - uim(gen));
        std::vector<std::complex<double>> wc(size_t(wdeg) + 1);
        double cmax = 0.0;
        for (int k = m_ord; k <= n_ord; ++k) {
            wc[size_t(n_ord - k)] = eval_complex(t.coefficient(k), z0);
            cmax = std::max(cmax, std::abs(wc[size_t(n_ord - k)]));
        }
        if (cmax == 0.0) continue;
        int deg = wdeg;
        while (deg > 0 && std::abs(wc[size_t(deg)]) <= 1e-14 * cmax) --deg;
        if (deg == 0) continue;

        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
        for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -wc[size_t(i)] / wc[size_t(deg)];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        for (int i = 0; i < deg && !d.witness; ++i) {
            const std::complex<double> w = es.eigenvalues()[i];
            if (!(w.imag() > 1e-9)) continue;
            // Re-evaluate the full symbol before trusting the eigenvalue.
            std::complex<double> g(0.0, 0.0);
            double scale = 1e-300;
            for (int k = m_ord; k <= n_ord; ++k) {
                std::complex<double> qk = eval_complex(t.coefficient(k), z0);
                std::complex<double> wp(1.0, 0.0);
                for (int e = 0; e < n_ord - k; ++e) wp *= w;
                g += qk * wp;
                scale += std::abs(qk) * std::pow(std::abs(w), double(n_ord - k));
            }
            if (std::abs(g) <= 1e-8 * scale)
                d.witness = StabilityWitness{z0.real(), z0.imag(), w.real(), w.imag()};
        }
    }
    return d;
}

std::optional<double> common_real_zero(const DifferentialOperator& t, int kmin, int kmax) {
    if (kmin < 0 || kmax < kmin)
        throw std::invalid_argument("need 0 <= kmin <= kmax");
    const RealPolynomial* base = nullptr;
    for (int k = kmin; k <= kmax && !base; ++k)
        if (!t.coefficient(k).is_zero()) base = &t.coefficient(k);
    if (!base) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "all coefficients of orders %d..%d are identically zero",
                      kmin, kmax);
        throw AllZeroRangeError(buf);
    }

    RootList rl = real_roots(*base);
    double prev = std::nan("");
    for (double theta : rl.roots) {
        if (theta == prev) continue;
        prev = theta;
        bool shared = true;
        for (int k = kmin; k <= kmax && shared; ++k) {
            const RealPolynomial& q = t.coefficient(k);
            if (q.is_zero()) continue;
            if (std::fabs(q(theta)) > 1e-9 * abs_profile(q, theta)) shared = false;
        }
        if (shared) return theta;
    }
    return std::nullopt;
}

}  // namespace hslab
