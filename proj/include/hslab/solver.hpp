#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hslab/hpop.hpp"
#include "hslab/patterns.hpp"

namespace hslab {

// The eigenvalue problem needs index r >= 0 so the factor degrees add up.
struct NegativeFuchsIndexError : Error {
    using Error::Error;
};
// Inputs of degree below the lowest derivative order are annihilated.
struct DegreeBelowMError : Error {
    using Error::Error;
};
// The pivot coefficient Q_e, e = min(n, N), has no zeros, so there is no
// interval to anchor the start polynomial in.
struct ZeroCoefficientQeError : Error {
    using Error::Error;
};
struct TZnIdenticallyZeroError : Error {
    using Error::Error;
};
// An image T(f) came out with degree below n + r and cannot be factored
// by an [n + r] pattern.
struct DegreeDropError : Error {
    using Error::Error;
};

struct SolveOptions {
    double tol = 1e-11;               // sup-norm stop on the root vector
    int max_iter = 5000;
    double residual_tol = 1e-9;       // advisory bound recorded per pair
    double monotonicity_slack = 1e-9; // tolerated violation per coordinate
    bool aitken = false;              // Delta-squared extrapolation every 3 steps
    bool start_at_largest = false;    // anchor at the largest zero of Q_e
    int jobs = 1;                     // worker threads in solve_all
};

struct StieltjesPair {
    ZeroPattern pattern;
    RealPolynomial v, f;
    std::vector<double> v_roots, f_roots;
    int iterations = 0;
    double residual = 0.0;
    bool monotone = true;
    std::vector<double> delta_tail;  // the last few sup-norm step sizes
};

struct NoConvergenceError : Error {
    NoConvergenceError(const std::string& msg, StieltjesPair last_iterate)
        : Error(msg), last(std::move(last_iterate)) {}
    StieltjesPair last;
};

struct SolveFailure {
    ZeroPattern pattern;
    std::string message;
};

struct SolveReport {
    int n = 0;
    int r = 0;
    std::vector<StieltjesPair> pairs;
    std::vector<SolveFailure> failures;
    // Set when the coefficients of orders 0..n share a real zero, which
    // voids the count/uniqueness guarantees (solutions are still found).
    std::optional<std::string> hypothesis_warning;
};

// (z - a)^n with a an extreme zero of Q_e, e = min(n, N).
RealPolynomial initial_poly(const DifferentialOperator& t, int n,
                            bool at_largest = false);

// One exact step: factor T(f) = v g by the pattern, g monic of degree n.
struct FactorStep {
    RealPolynomial v, f;
    std::vector<double> v_roots, f_roots;
};
FactorStep iterate_once(const DifferentialOperator& t, const ZeroPattern& pattern,
                        const RealPolynomial& f);

// max |coeff(T(f) - v f)| / max |coeff(T(f))|.
double residual(const DifferentialOperator& t, const RealPolynomial& v,
                const RealPolynomial& f);

// Runs the factorization iteration for one pattern until the root vector
// moves less than opts.tol, starting from initial_poly (or `seed` when
// given).  Throws NoConvergenceError with the last iterate attached when
// the budget runs out.
StieltjesPair solve_pair(const DifferentialOperator& t, const ZeroPattern& pattern,
                         const SolveOptions& opts = {},
                         const std::optional<RealPolynomial>& seed = std::nullopt);

// Every pattern of [n + r] in enumeration order; per-pattern errors are
// collected as failures instead of aborting the sweep.
SolveReport solve_all(const DifferentialOperator& t, int n,
                      const SolveOptions& opts = {});

// Multistart Newton on the coefficient system T(f) - v f = 0, independent
// of the factorization iteration.  Returns the hyperbolic solutions found
// (deduplicated, sorted by root vector); `complete` reports whether the
// count reached binomial(n + r, r).  Intended for small n.
struct OraclePair {
    RealPolynomial v, f;
};
struct OracleResult {
    std::vector<OraclePair> pairs;
    int expected = 0;
    bool complete = false;
};
OracleResult brute_force_oracle(const DifferentialOperator& t, int n,
                                std::uint64_t seed = 0);

}  // namespace hslab
