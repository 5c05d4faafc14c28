#include "hslab/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace hslab {

namespace {

long long binom_ll(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long out = 1;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

RealPolynomial monomial(int n) {
    std::vector<double> c(size_t(n) + 1, 0.0);
    c[size_t(n)] = 1.0;
    return RealPolynomial(c);
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

void validate_problem(const DifferentialOperator& t, int n) {
    if (t.fuchs_index() < 0) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "operator has negative index %d",
                      t.fuchs_index());
        throw NegativeFuchsIndexError(buf);
    }
    if (n < 1) throw std::invalid_argument("degree n must be at least 1");
    if (n < t.min_order()) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "degree %d inputs vanish under the lowest order %d", n,
                      t.min_order());
        throw DegreeBelowMError(buf);
    }
    if (apply(t, monomial(n)).is_zero()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "operator maps z^%d to zero", n);
        throw TZnIdenticallyZeroError(buf);
    }
}

// Hull of the zeros of the pivot coefficient Q_e, e = min(n, N).
RootInterval pivot_interval(const DifferentialOperator& t, int n) {
    const int e = std::min(n, t.max_order());
    const RealPolynomial& qe = t.coefficient(e);
    if (qe.degree() < 1) {
        char buf[96];
        std::snprintf(buf, sizeof buf,
                      "coefficient of order %d has no zeros to anchor the start at", e);
        throw ZeroCoefficientQeError(buf);
    }
    return root_interval(qe);
}

}  // namespace

RealPolynomial initial_poly(const DifferentialOperator& t, int n, bool at_largest) {
    RootInterval iv = pivot_interval(t, n);
    return from_roots(std::vector<double>(size_t(n), at_largest ? iv.hi : iv.lo));
}

FactorStep iterate_once(const DifferentialOperator& t, const ZeroPattern& pattern,
                        const RealPolynomial& f) {
    if (pattern.r() != t.fuchs_index())
        throw std::invalid_argument("pattern width disagrees with the operator index");
    if (f.degree() != pattern.n())
        throw std::invalid_argument("iterate degree disagrees with the pattern");

    RealPolynomial g = apply(t, f);
    if (g.degree() != pattern.total) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "image degree %d instead of %d", g.degree(),
                      pattern.total);
        throw DegreeDropError(buf);
    }
    RootList rl = real_roots(g);

    FactorStep st;
    st.v_roots = select(rl.roots, pattern.a);
    st.f_roots = select(rl.roots, pattern.b);
    st.v = from_roots(st.v_roots, rl.leading);
    st.f = from_roots(st.f_roots);
    return st;
}

double residual(const DifferentialOperator& t, const RealPolynomial& v,
                const RealPolynomial& f) {
    RealPolynomial g = apply(t, f);
    RealPolynomial d = subtract(g, multiply(v, f));
    return max_abs(d.coeffs()) / std::max(1e-300, max_abs(g.coeffs()));
}

StieltjesPair solve_pair(const DifferentialOperator& t, const ZeroPattern& pattern,
                         const SolveOptions& opts,
                         const std::optional<RealPolynomial>& seed) {
    validate_problem(t, pattern.n());
    const int n = pattern.n();
    if (pattern.r() != t.fuchs_index() || pattern.total != n + pattern.r())
        throw std::invalid_argument("pattern does not partition [n + r]");

    RootInterval iv = pivot_interval(t, n);
    const double widen = 0.1 * iv.width() + 1e-6;

    std::vector<double> prev;
    RealPolynomial f;
    if (seed) {
        if (seed->degree() != n)
            throw std::invalid_argument("seed polynomial has the wrong degree");
        f = *seed;
        prev = real_roots(f).roots;
    } else {
        prev.assign(size_t(n), opts.start_at_largest ? iv.hi : iv.lo);
        f = from_roots(prev);
    }

    StieltjesPair pair;
    pair.pattern = pattern;
    int direction = 0;
    bool monotone = true;
    bool pending = false;   // one sub-tolerance step seen, confirm with another
    bool converged = false;
    std::vector<std::vector<double>> window{prev};

    FactorStep st;
    int iter = 0;
    while (iter < opts.max_iter) {
        ++iter;
        try {
            st = iterate_once(t, pattern, f);
        } catch (const NotHyperbolicError& e) {
            // The image lost full root certification mid-iteration; report
            // it as a convergence failure of this pattern, not a usage error.
            pair.f = f;
            pair.f_roots = prev;
            pair.iterations = iter;
            pair.monotone = monotone;
            char buf[192];
            std::snprintf(buf, sizeof buf, "pattern {%s} at iteration %d: %s",
                          pattern_to_string(pattern.a).c_str(), iter, e.what());
            throw NoConvergenceError(buf, std::move(pair));
        }

        double delta = 0.0;
        const double mslack = opts.monotonicity_slack * (1.0 + max_abs(st.f_roots));
        bool up = true, down = true;
        for (size_t j = 0; j < prev.size(); ++j) {
            double d = st.f_roots[j] - prev[j];
            delta = std::max(delta, std::fabs(d));
            if (d < -mslack) up = false;
            if (d > mslack) down = false;
        }
        if (direction == 0) {
            if (up != down) direction = up ? 1 : -1;
            else if (!up) monotone = false;   // moved both ways at once
        } else if ((direction > 0 && !up) || (direction < 0 && !down)) {
            monotone = false;
        }

        pair.delta_tail.push_back(delta);
        if (pair.delta_tail.size() > 8) pair.delta_tail.erase(pair.delta_tail.begin());
        prev = st.f_roots;
        f = st.f;

        if (delta <= opts.tol) {
            if (pending) {
                converged = true;
                break;
            }
            pending = true;
            continue;
        }
        pending = false;

        window.push_back(prev);
        if (opts.aitken && window.size() == 3) {
            // Componentwise Delta-squared extrapolation, clamped to the
            // (widened) pivot hull so a bad jump cannot escape.  Only a
            // clearly contracting component is extrapolated: roots still
            // parked on a plateau take noise-sized steps, and squaring
            // those amplifies the noise into spurious root collisions.
            constexpr double eps = std::numeric_limits<double>::epsilon();
            std::vector<double> y(prev.size());
            for (size_t j = 0; j < prev.size(); ++j) {
                const double x0 = window[0][j], x1 = window[1][j], x2 = window[2][j];
                const double d0 = x1 - x0, d1 = x2 - x1;
                const bool contracting = std::fabs(d0) > 64.0 * eps * (1.0 + std::fabs(x2)) &&
                                         std::fabs(d1) < 0.75 * std::fabs(d0);
                y[j] = contracting ? x2 - d1 * d1 / (d1 - d0) : x2;
                y[j] = std::clamp(y[j], iv.lo - widen, iv.hi + widen);
            }
            std::sort(y.begin(), y.end());
            prev = y;
            f = from_roots(y);
            window.clear();
            direction = 0;  // the jump voids the current trend
        }
        if (window.size() > 3) window.erase(window.begin());
    }

    pair.v = st.v;
    pair.f = st.f;
    pair.v_roots = st.v_roots;
    pair.f_roots = st.f_roots;
    pair.iterations = iter;
    pair.monotone = monotone;

    if (!converged) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "pattern {%s} still moving %.3e after %d iterations",
                      pattern_to_string(pattern.a).c_str(),
                      pair.delta_tail.empty() ? 0.0 : pair.delta_tail.back(), iter);
        throw NoConvergenceError(buf, std::move(pair));
    }

    pair.residual = residual(t, pair.v, pair.f);
    return pair;
}

SolveReport solve_all(const DifferentialOperator& t, int n, const SolveOptions& opts) {
    validate_problem(t, n);
    SolveReport rep;
    rep.n = n;
    rep.r = t.fuchs_index();

    try {
        if (auto theta = common_real_zero(t, 0, n)) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "coefficients of orders 0..%d share the real zero %.17g; "
                          "pair count and uniqueness are not guaranteed",
                          n, *theta);
            rep.hypothesis_warning = buf;
        }
    } catch (const Error&) {
        // Unverifiable hypothesis (e.g. a non-hyperbolic coefficient) is
        // not this sweep's problem; diagnostics report it separately.
    }

    const std::vector<ZeroPattern> patterns = enumerate_patterns(n, rep.r);
    std::vector<std::optional<StieltjesPair>> ok(patterns.size());
    std::vector<std::optional<SolveFailure>> bad(patterns.size());
    auto work = [&](size_t i) {
        try {
            ok[i] = solve_pair(t, patterns[i], opts);
        } catch (const Error& e) {
            bad[i] = SolveFailure{patterns[i], e.what()};
        }
    };

    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || patterns.size() < 2) {
        for (size_t i = 0; i < patterns.size(); ++i) work(i);
    } else {
        std::atomic<size_t> next{0};
        auto drain = [&] {
            for (size_t i = next.fetch_add(1); i < patterns.size();
                 i = next.fetch_add(1))
                work(i);
        };
        std::vector<std::thread> pool;
        for (int j = 0; j < std::min<int>(jobs, int(patterns.size())); ++j)
            pool.emplace_back(drain);
        for (std::thread& th : pool) th.join();
    }

    for (size_t i = 0; i < patterns.size(); ++i) {
        if (ok[i]) rep.pairs.push_back(std::move(*ok[i]));
        if (bad[i]) rep.failures.push_back(std::move(*bad[i]));
    }
    return rep;
}

OracleResult brute_force_oracle(const DifferentialOperator& t, int n,
                                std::uint64_t seed) {
    validate_problem(t, n);
    const int r = t.fuchs_index();
    OracleResult out;
    out.expected = int(binom_ll(n + r, r));
    const double lam = lambda_n(t, n);
    const int dim = n + r;

    RootInterval iv = pivot_interval(t, n);
    double lo = iv.lo, hi = iv.hi;
    if (hi - lo < 1e-9) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.1 * (hi - lo);
    lo -= pad;
    hi += pad;

    const int grid = 6;
    std::vector<double> nodes(grid);
    for (int i = 0; i < grid; ++i)
        nodes[i] = lo + (hi - lo) * (i + 0.5) / grid;

    // All multisets of `count` grid nodes, as sorted index vectors.
    auto multisets = [&](int count) {
        std::vector<std::vector<int>> sets;
        std::vector<int> cur(size_t(std::max(count, 0)), 0);
        if (count == 0) {
            sets.push_back({});
            return sets;
        }
        while (true) {
            sets.push_back(cur);
            int k = count - 1;
            while (k >= 0 && cur[size_t(k)] == grid - 1) --k;
            if (k < 0) break;
            int v = ++cur[size_t(k)];
            for (int j = k + 1; j < count; ++j) cur[size_t(j)] = v;
        }
        return sets;
    };

    // Residual coefficients of T(f) - v f; the top coefficient cancels by
    // the choice of the leading coefficient of v.
    auto eval_system = [&](const Eigen::VectorXd& x, Eigen::VectorXd& fx,
                           double& scale) {
        std::vector<double> fc(size_t(n) + 1);
        for (int i = 0; i < n; ++i) fc[size_t(i)] = x[i];
        fc[size_t(n)] = 1.0;
        std::vector<double> vc(size_t(r) + 1);
        for (int i = 0; i < r; ++i) vc[size_t(i)] = x[n + i];
        vc[size_t(r)] = lam;
        RealPolynomial f(fc), v(vc);
        RealPolynomial g = apply(t, f);
        RealPolynomial d = subtract(g, multiply(v, f));
        for (int i = 0; i < dim; ++i) fx[i] = d.coeff(i);
        scale = 1.0 + max_abs(g.coeffs());
    };

    auto try_store = [&](const Eigen::VectorXd& x) {
        std::vector<double> fc(size_t(n) + 1);
        for (int i = 0; i < n; ++i) fc[size_t(i)] = x[i];
        fc[size_t(n)] = 1.0;
        std::vector<double> vc(size_t(r) + 1);
        for (int i = 0; i < r; ++i) vc[size_t(i)] = x[n + i];
        vc[size_t(r)] = lam;
        RealPolynomial f(fc), v(vc);
        try {
            real_roots(f);
            if (v.degree() > 0) real_roots(v);
        } catch (const Error&) {
            return;  // non-hyperbolic solution branch
        }
        for (const OraclePair& have : out.pairs) {
            double dist = 0.0;
            for (int i = 0; i <= n; ++i)
                dist = std::max(dist, std::fabs(have.f.coeff(i) - f.coeff(i)));
            for (int i = 0; i <= r; ++i)
                dist = std::max(dist, std::fabs(have.v.coeff(i) - v.coeff(i)));
            if (dist <= 1e-7 * (1.0 + max_abs(f.coeffs()) + max_abs(v.coeffs())))
                return;
        }
        out.pairs.push_back(OraclePair{std::move(v), std::move(f)});
    };

    const auto fsets = multisets(n);
    const auto vsets = multisets(r);
    Eigen::VectorXd fx(dim), fx2(dim), fxt(dim);
    size_t start_idx = 0;
    for (const auto& fs : fsets) {
        for (const auto& vs : vsets) {
            if (int(out.pairs.size()) >= out.expected) break;
            ++start_idx;
            std::mt19937_64 gen(seed * 1000003ULL + start_idx);
            std::uniform_real_distribution<double> jit(-1e-3, 1e-3);

            std::vector<double> fr, vr;
            for (int ix : fs) fr.push_back(nodes[size_t(ix)]);
            for (int ix : vs) vr.push_back(nodes[size_t(ix)]);
            RealPolynomial f0 = from_roots(fr);
            RealPolynomial v0 = from_roots(vr, lam);
            Eigen::VectorXd x(dim);
            for (int i = 0; i < n; ++i)
                x[i] = f0.coeff(i) + jit(gen) * (1.0 + std::fabs(f0.coeff(i)));
            for (int i = 0; i < r; ++i)
                x[n + i] = v0.coeff(i) + jit(gen) * (1.0 + std::fabs(v0.coeff(i)));

            double scale = 1.0;
            eval_system(x, fx, scale);
            double phi = fx.lpNorm<Eigen::Infinity>();
            for (int it = 0; it < 60; ++it) {
                if (phi <= 1e-12 * scale) {
                    try_store(x);
                    break;
                }
                Eigen::MatrixXd jac(dim, dim);
                for (int j = 0; j < dim; ++j) {
                    const double dlt = 1e-7 * (1.0 + std::fabs(x[j]));
                    Eigen::VectorXd xp = x;
                    xp[j] += dlt;
                    double s2;
                    eval_system(xp, fx2, s2);
                    jac.col(j) = (fx2 - fx) / dlt;
                }
                Eigen::VectorXd h = jac.partialPivLu().solve(-fx);
                if (!h.allFinite()) break;
                double step = 1.0;
                bool accepted = false;
                while (step > 1.0 / 4096.0) {
                    Eigen::VectorXd xt = x + step * h;
                    double st;
                    eval_system(xt, fxt, st);
                    double pt = fxt.lpNorm<Eigen::Infinity>();
                    if (pt <= (1.0 - 0.25 * step) * phi) {
                        x = xt;
                        fx = fxt;
                        phi = pt;
                        scale = st;
                        accepted = true;
                        break;
                    }
                    step *= 0.5;
                }
                if (!accepted) break;
            }
        }
        if (int(out.pairs.size()) >= out.expected) break;
    }

    std::sort(out.pairs.begin(), out.pairs.end(),
              [](const OraclePair& a, const OraclePair& b) {
                  return a.f.coeffs() < b.f.coeffs();
              });
    out.complete = int(out.pairs.size()) == out.expected;
    return out;
}

}  // namespace hslab
