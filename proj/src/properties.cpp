#include "hslab/properties.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <vector>

#include <json.hpp>

namespace hslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string strf(const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::int64_t acc = 1;
    for (int i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
}

// Smallest slack in the interleaving chain between sorted root vectors;
// negative when the chain is violated, +inf when nothing constrains it.
// Sizes must be equal (x1 <= y1 <= x2 <= ...) or |y| = |x| + 1
// (y1 <= x1 <= y2 <= ...).
double chain_margin(const std::vector<double>& x, const std::vector<double>& y) {
    double worst = kInf;
    if (x.size() == y.size()) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            worst = std::min(worst, y[i] - x[i]);
            if (i + 1 < x.size()) worst = std::min(worst, x[i + 1] - y[i]);
        }
    } else if (y.size() == x.size() + 1) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            worst = std::min(worst, x[i] - y[i]);
            worst = std::min(worst, y[i + 1] - x[i]);
        }
    } else {
        throw LengthMismatchError("chain margin needs equal sizes or |y| = |x| + 1");
    }
    return worst;
}

// Does the no-common-real-zero hypothesis hold for orders kmin..kmax?
struct Hypothesis {
    bool holds = false;
    std::string note;  // empty when it holds
};

Hypothesis check_hypothesis(const DifferentialOperator& t, int kmin, int kmax) {
    try {
        if (auto theta = common_real_zero(t, kmin, kmax))
            return {false, strf("orders %d..%d share the real zero %.6g", kmin,
                                kmax, *theta)};
        return {true, ""};
    } catch (const AllZeroRangeError&) {
        return {false, strf("orders %d..%d are identically zero", kmin, kmax)};
    } catch (const Error& e) {
        return {false, strf("hypothesis not verifiable: %s", e.what())};
    }
}

// Acceptable position for an interlacing claim.  Without the hypothesis
// only the non-strict statement is asserted, and a fully tied pair
// (proportional) is its boundary case; a reversed or absent position is
// a violation in either regime.
bool position_ok(PositionKind kind, const Hypothesis& hyp) {
    return kind == PositionKind::FllG ||
           (!hyp.holds && kind == PositionKind::Proportional);
}

std::string skipped_note(const SolveReport& report) {
    if (report.failures.empty()) return "";
    return strf("; %zu pattern(s) skipped (first: %s)", report.failures.size(),
                report.failures.front().message.c_str());
}

const StieltjesPair* find_by_a(const SolveReport& report, const std::vector<int>& a) {
    for (const StieltjesPair& p : report.pairs)
        if (p.pattern.a == a) return &p;
    return nullptr;
}

void require_consecutive(const SolveReport& lower, const SolveReport& upper) {
    if (upper.n != lower.n + 1 || upper.r != lower.r)
        throw std::invalid_argument("reports must cover degrees n and n + 1 of one operator");
}

}  // namespace

bool VerificationReport::overall() const {
    for (const CheckEntry& e : checks)
        if (!e.pass) return false;
    return true;
}

std::string VerificationReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const CheckEntry& e : checks) {
        arr.push_back({{"check", e.name},
                       {"pass", e.pass},
                       {"margin", e.margin},
                       {"details", e.details}});
    }
    return arr.dump();
}

CheckEntry verify_count(const SolveReport& report) {
    CheckEntry e;
    e.name = "count";
    const std::int64_t expected = binomial(report.n + report.r, report.r);
    const std::int64_t found = static_cast<std::int64_t>(report.pairs.size());
    const std::int64_t failed = static_cast<std::int64_t>(report.failures.size());
    e.pass = found == expected && failed == 0;
    e.margin = static_cast<double>(found - expected - failed);
    e.details = strf("%lld of %lld patterns converged",
                     static_cast<long long>(found), static_cast<long long>(expected));
    if (failed > 0)
        e.details += strf("; %lld failed (first: %s)", static_cast<long long>(failed),
                          report.failures.front().message.c_str());
    if (report.hypothesis_warning)
        e.details += "; warning: " + *report.hypothesis_warning;
    return e;
}

CheckEntry verify_location(const SolveReport& report, const DifferentialOperator& t) {
    CheckEntry e;
    e.name = "location";
    const int piv = std::min(report.n, t.max_order());
    const RealPolynomial& qe = t.coefficient(piv);

    std::vector<double> roots;
    for (const StieltjesPair& p : report.pairs) {
        roots.insert(roots.end(), p.v_roots.begin(), p.v_roots.end());
        roots.insert(roots.end(), p.f_roots.begin(), p.f_roots.end());
    }

    if (qe.degree() < 1) {
        e.pass = roots.empty();
        e.margin = 0.0;
        e.details = strf("pivot Q_%d has no zeros; %zu roots to place", piv, roots.size());
        return e;
    }

    RootInterval hull;
    try {
        hull = root_interval(qe);
    } catch (const Error& err) {
        e.pass = false;
        e.margin = 0.0;
        e.details = strf("could not isolate the hull of Q_%d: %s", piv, err.what());
        return e;
    }

    e.margin = kInf;
    for (double x : roots)
        e.margin = std::min(e.margin, std::min(x - hull.lo, hull.hi - x));
    if (roots.empty()) e.margin = 0.0;

    const Hypothesis hyp = check_hypothesis(t, 1, report.n);
    const std::string base = strf("%zu roots against the hull of Q_%d", roots.size(), piv);
    if (hyp.holds) {
        e.pass = e.margin > 0.0;
        e.details = base + "; strict interior required" + skipped_note(report);
    } else {
        e.pass = e.margin >= -kLocationSlack;
        e.details = base + strf("; hull widened by %.0e (%s)", kLocationSlack,
                                hyp.note.c_str()) +
                    skipped_note(report);
    }
    return e;
}

CheckEntry verify_simple_coprime(const SolveReport& report, double tol) {
    CheckEntry e;
    e.name = "simple-coprime";
    double worst = kInf;
    for (const StieltjesPair& p : report.pairs) {
        std::vector<double> merged = p.v_roots;
        merged.insert(merged.end(), p.f_roots.begin(), p.f_roots.end());
        std::sort(merged.begin(), merged.end());
        for (std::size_t i = 1; i < merged.size(); ++i)
            worst = std::min(worst, merged[i] - merged[i - 1]);
    }
    if (worst == kInf) {
        e.pass = true;
        e.margin = 0.0;
        e.details = "no root pairs to separate" + skipped_note(report);
        return e;
    }
    e.margin = worst - tol;
    e.pass = e.margin > 0.0;
    e.details = strf("%zu pairs; smallest merged root gap %.6g", report.pairs.size(), worst);
    if (report.hypothesis_warning)
        e.details += "; warning: " + *report.hypothesis_warning;
    e.details += skipped_note(report);
    return e;
}

CheckEntry verify_simple_coprime(const DifferentialOperator& t, const SolveReport& report,
                                 double tol) {
    CheckEntry e = verify_simple_coprime(report, tol);
    const Hypothesis hyp = check_hypothesis(t, 1, report.n);
    if (!hyp.holds) {
        // Shared zeros of the coefficients admit genuinely multiple roots
        // (a pair like v = 4z - 3, f = (z+1)^3 solves exactly), so
        // simplicity carries no claim here.
        e.pass = true;
        e.details += "; strictness waived: " + hyp.note;
    }
    return e;
}

CheckEntry verify_interlacing_same_degree(const DifferentialOperator& t,
                                          const SolveReport& report) {
    CheckEntry e;
    e.name = "interlacing-same-degree";
    const Hypothesis hyp = check_hypothesis(t, 1, report.n);
    int checked = 0;
    int reflexive = 0;
    double worst = kInf;
    std::string failnote;
    for (const StieltjesPair& pb : report.pairs) {
        for (const StieltjesPair& pc : report.pairs) {
            if (!arrow_same(pb.pattern.b, pc.pattern.b)) continue;
            ++checked;
            if (pb.pattern.a == pc.pattern.a) {
                ++reflexive;  // identical pair, PROPORTIONAL by construction
                continue;
            }
            const PositionKind kind = proper_position(pb.f, pc.f, kPositionTol);
            if (!position_ok(kind, hyp) && failnote.empty()) {
                failnote = strf("; f(%s) vs f(%s) came out %s",
                                pattern_to_string(pb.pattern.b).c_str(),
                                pattern_to_string(pc.pattern.b).c_str(), to_string(kind));
                e.pass = false;
            }
            worst = std::min(worst, chain_margin(pb.f_roots, pc.f_roots));
        }
    }
    e.margin = worst == kInf ? 0.0 : worst;
    e.details = strf("%d arrow pairs (%d reflexive) at degree %d", checked, reflexive,
                     report.n);
    if (checked > reflexive && hyp.holds) {
        e.pass = e.pass && e.margin > kStrictSeparationTol;
        e.details += "; strict separation enforced";
    } else if (!hyp.holds) {
        e.details += "; strictness waived: " + hyp.note;
    }
    e.details += failnote + skipped_note(report);
    return e;
}

CheckEntry verify_interlacing_consecutive(const DifferentialOperator& t,
                                          const SolveReport& lower,
                                          const SolveReport& upper) {
    require_consecutive(lower, upper);
    CheckEntry e;
    e.name = "interlacing-consecutive";
    const Hypothesis hyp = check_hypothesis(t, 1, upper.n);
    int checked = 0;
    double worst = kInf;
    std::string failnote;
    for (const StieltjesPair& pb : lower.pairs) {
        for (const StieltjesPair& pc : upper.pairs) {
            if (!arrow_consecutive(pb.pattern.b, pc.pattern.b)) continue;
            ++checked;
            const PositionKind kind = proper_position(pb.f, pc.f, kPositionTol);
            if (!position_ok(kind, hyp) && failnote.empty()) {
                failnote = strf("; f(%s) vs f(%s) came out %s",
                                pattern_to_string(pb.pattern.b).c_str(),
                                pattern_to_string(pc.pattern.b).c_str(), to_string(kind));
                e.pass = false;
            }
            worst = std::min(worst, chain_margin(pb.f_roots, pc.f_roots));
        }
    }
    e.margin = worst == kInf ? 0.0 : worst;
    e.details = strf("%d arrow pairs from degree %d to %d", checked, lower.n, upper.n);
    if (checked > 0 && hyp.holds) {
        e.pass = e.pass && e.margin > kStrictSeparationTol;
        e.details += "; strict separation enforced";
    } else if (!hyp.holds) {
        e.details += "; strictness waived: " + hyp.note;
    }
    e.details += failnote + skipped_note(lower) + skipped_note(upper);
    return e;
}

CheckEntry verify_vanvleck_shift(const DifferentialOperator& t, const SolveReport& report) {
    CheckEntry e;
    e.name = "vanvleck-shift";
    if (report.r == 0) {
        e.details = "vacuous: Fuchs index 0 has no Van Vleck labels";
        return e;
    }
    const Hypothesis hyp = check_hypothesis(t, 1, report.n);
    int checked = 0;
    double worst = kInf;
    std::string failnote;
    for (const StieltjesPair& p : report.pairs) {
        if (p.pattern.a.back() + 1 > report.n + report.r) continue;
        const StieltjesPair* up = find_by_a(report, shift(p.pattern.a, report.n + report.r));
        if (!up) continue;  // shifted pattern failed to converge; counted below
        ++checked;
        const PositionKind kind = proper_position(p.v, up->v, kPositionTol);
        if (!position_ok(kind, hyp) && failnote.empty()) {
            failnote = strf("; v(%s) vs v(%s) came out %s",
                            pattern_to_string(p.pattern.a).c_str(),
                            pattern_to_string(up->pattern.a).c_str(), to_string(kind));
            e.pass = false;
        }
        worst = std::min(worst, chain_margin(p.v_roots, up->v_roots));
    }
    e.margin = worst == kInf ? 0.0 : worst;
    e.details = strf("%d shift pairs at degree %d", checked, report.n);
    if (checked > 0 && hyp.holds) {
        e.pass = e.pass && e.margin > kStrictSeparationTol;
        e.details += "; strict separation enforced";
    } else if (!hyp.holds) {
        e.details += "; strictness waived: " + hyp.note;
    }
    e.details += failnote + skipped_note(report);
    return e;
}

CheckEntry verify_vanvleck_consecutive(const DifferentialOperator& t,
                                       const SolveReport& lower,
                                       const SolveReport& upper) {
    require_consecutive(lower, upper);
    CheckEntry e;
    e.name = "vanvleck-consecutive";
    if (lower.r == 0) {
        e.details = "vacuous: Fuchs index 0 has no Van Vleck labels";
        return e;
    }
    const Hypothesis hyp = check_hypothesis(t, 1, upper.n);
    int checked = 0;
    double worst = kInf;
    std::string failnote;
    for (const StieltjesPair& p : lower.pairs) {
        const StieltjesPair* same = find_by_a(upper, p.pattern.a);
        const StieltjesPair* shifted =
            find_by_a(upper, shift(p.pattern.a, upper.n + upper.r));
        if (!same || !shifted) continue;
        ++checked;
        const PositionKind before = proper_position(same->v, p.v, kPositionTol);
        const PositionKind after = proper_position(p.v, shifted->v, kPositionTol);
        if ((!position_ok(before, hyp) || !position_ok(after, hyp)) &&
            failnote.empty()) {
            failnote = strf("; chain at A = %s came out %s / %s",
                            pattern_to_string(p.pattern.a).c_str(), to_string(before),
                            to_string(after));
            e.pass = false;
        }
        worst = std::min(worst, chain_margin(same->v_roots, p.v_roots));
        worst = std::min(worst, chain_margin(p.v_roots, shifted->v_roots));
    }
    e.margin = worst == kInf ? 0.0 : worst;
    e.details = strf("%d label sets from degree %d to %d", checked, lower.n, upper.n);
    if (checked > 0 && hyp.holds) {
        e.pass = e.pass && e.margin > kStrictSeparationTol;
        e.details += "; strict separation enforced";
    } else if (!hyp.holds) {
        e.details += "; strictness waived: " + hyp.note;
    }
    e.details += failnote + skipped_note(lower) + skipped_note(upper);
    return e;
}

CheckEntry verify_interlacing_same_degree(const DifferentialOperator& t, int n,
                                          const SolveOptions& opts) {
    return verify_interlacing_same_degree(t, solve_all(t, n, opts));
}

CheckEntry verify_interlacing_consecutive(const DifferentialOperator& t, int n,
                                          const SolveOptions& opts) {
    return verify_interlacing_consecutive(t, solve_all(t, n, opts),
                                          solve_all(t, n + 1, opts));
}

CheckEntry verify_vanvleck_shift(const DifferentialOperator& t, int n,
                                 const SolveOptions& opts) {
    return verify_vanvleck_shift(t, solve_all(t, n, opts));
}

CheckEntry verify_vanvleck_consecutive(const DifferentialOperator& t, int n,
                                       const SolveOptions& opts) {
    return verify_vanvleck_consecutive(t, solve_all(t, n, opts),
                                       solve_all(t, n + 1, opts));
}

SpectralPolynomial spectral_polynomial(const DifferentialOperator& t,
                                       const SolveReport& report) {
    if (t.fuchs_index() != 1)
        throw FuchsIndexNotOneError(
            strf("spectral polynomial requires Fuchs index 1, got %d", t.fuchs_index()));
    const std::size_t expected = static_cast<std::size_t>(report.n) + 1;
    if (report.pairs.size() != expected || !report.failures.empty())
        throw Error(strf("spectral polynomial needs all %zu pairs at degree %d; "
                         "have %zu converged, %zu failed",
                         expected, report.n, report.pairs.size(),
                         report.failures.size()));
    std::vector<double> mu;
    for (const StieltjesPair& p : report.pairs) {
        if (p.v_roots.size() != 1)
            throw Error("a Van Vleck polynomial did not have exactly one root");
        mu.push_back(p.v_roots.front());
    }
    std::sort(mu.begin(), mu.end());

    SpectralPolynomial sp;
    sp.n = report.n;
    sp.p = from_roots(mu);
    sp.hypothesis_m_to_n = check_hypothesis(t, t.min_order(), report.n).holds;
    sp.hypothesis_1_to_n = check_hypothesis(t, 1, report.n).holds;
    return sp;
}

SpectralPolynomial spectral_polynomial(const DifferentialOperator& t, int n,
                                       const SolveOptions& opts) {
    if (t.fuchs_index() != 1)
        throw FuchsIndexNotOneError(
            strf("spectral polynomial requires Fuchs index 1, got %d", t.fuchs_index()));
    return spectral_polynomial(t, solve_all(t, n, opts));
}

CheckEntry verify_spectral_interlacing(const SpectralPolynomial& lower,
                                       const SpectralPolynomial& upper) {
    if (upper.n != lower.n + 1)
        throw std::invalid_argument("spectral polynomials must have consecutive indices");
    CheckEntry e;
    e.name = "spectral-interlacing";
    const PositionKind kind = proper_position(lower.p, upper.p, kPositionTol);
    const double worst =
        chain_margin(real_roots(lower.p).roots, real_roots(upper.p).roots);
    e.margin = worst == kInf ? 0.0 : worst;
    // Strict separation is a claim of the M..n no-common-zero hypothesis;
    // without it the non-strict position still has to hold.
    e.pass = kind != PositionKind::None &&
             (!lower.hypothesis_m_to_n || e.margin > kStrictSeparationTol);
    e.details = strf("p_%d vs p_%d: %s; no-common-zero hypothesis M..n %s, 1..n %s",
                     lower.n, upper.n, to_string(kind),
                     lower.hypothesis_m_to_n ? "holds" : "fails",
                     lower.hypothesis_1_to_n ? "holds" : "fails");
    return e;
}

CheckEntry verify_spectral_interlacing(const DifferentialOperator& t, int n,
                                       const SolveOptions& opts) {
    return verify_spectral_interlacing(spectral_polynomial(t, n, opts),
                                       spectral_polynomial(t, n + 1, opts));
}

VerificationReport verify_all(const DifferentialOperator& t, int n,
                              const SolveOptions& opts) {
    return verify_all(t, solve_all(t, n, opts), solve_all(t, n + 1, opts));
}

VerificationReport verify_all(const DifferentialOperator& t, const SolveReport& lower,
                              const SolveReport& upper) {
    require_consecutive(lower, upper);
    VerificationReport rep;
    rep.checks.push_back(verify_count(lower));
    rep.checks.push_back(verify_location(lower, t));
    rep.checks.push_back(verify_simple_coprime(t, lower));
    rep.checks.push_back(verify_interlacing_same_degree(t, lower));
    rep.checks.push_back(verify_interlacing_consecutive(t, lower, upper));
    rep.checks.push_back(verify_vanvleck_shift(t, lower));
    rep.checks.push_back(verify_vanvleck_consecutive(t, lower, upper));
    if (t.fuchs_index() == 1) {
        try {
            rep.checks.push_back(verify_spectral_interlacing(
                spectral_polynomial(t, lower), spectral_polynomial(t, upper)));
        } catch (const Error& err) {
            rep.checks.push_back(
                {"spectral-interlacing", false, 0.0, strf("not computed: %s", err.what())});
        }
    }
    return rep;
}

}  // namespace hslab
