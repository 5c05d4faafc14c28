#pragma once

#include <string>
#include <vector>

#include "hslab/solver.hpp"

namespace hslab {

// Spectral polynomials are only defined for operators with Fuchs index 1
// (each Van Vleck polynomial contributes exactly one root).
struct FuchsIndexNotOneError : Error {
    using Error::Error;
};

// Roots closer than this count as coinciding when simplicity, co-primality
// or strict interlacing is asserted.  Five orders of magnitude above the
// solver tolerance, so convergence noise cannot fake a coincidence.
inline constexpr double kStrictSeparationTol = 1e-6;

// How far outside the closed root hull a root may sit before the location
// check fails (absorbs root-finder noise on hull endpoints).
inline constexpr double kLocationSlack = 1e-9;

// Roots obtained from two independently converged runs agree only to the
// iteration's convergence scale; position comparisons treat smaller
// disagreements as ties so that an exact tie broken the wrong way by
// noise is not reported as a violation.
inline constexpr double kPositionTol = 1e-9;

// One verified claim.  `margin` is the signed slack of the tightest
// inequality behind the claim (negative = violated); it is reported even
// when the entry passes.  Entries never throw: failed patterns and voided
// hypotheses are described in `details` instead.
struct CheckEntry {
    std::string name;
    bool pass = true;
    double margin = 0.0;
    std::string details;
};

struct VerificationReport {
    std::vector<CheckEntry> checks;
    bool overall() const;
    // JSON array of {"check", "pass", "margin", "details"} objects.
    std::string to_json() const;
};

// --- checks over existing solve reports (read-only, deterministic) ---

// Number of converged pairs == binomial(n + r, r) and no failures.
CheckEntry verify_count(const SolveReport& report);

// Every root of every v and f lies in the convex hull of the zeros of
// Q_e, e = min(n, N).  When the coefficients of orders 1..n have no
// common real zero the roots must sit strictly inside; otherwise the
// hull is widened by kLocationSlack and the relaxation is recorded.
// Margin: min distance from any root to the unwidened hull boundary.
CheckEntry verify_location(const SolveReport& report, const DifferentialOperator& t);

// Within each pair, the merged roots of v and f are pairwise separated
// by more than `tol` (simple zeros and no common factor).  Margin:
// smallest merged gap minus `tol`.
CheckEntry verify_simple_coprime(const SolveReport& report,
                                 double tol = kStrictSeparationTol);

// Operator-aware variant: when the coefficients of orders 1..n share a
// real zero, simplicity is not asserted (pairs may legitimately carry
// multiple roots at such a point) and the check records the waiver
// instead of failing.
CheckEntry verify_simple_coprime(const DifferentialOperator& t, const SolveReport& report,
                                 double tol = kStrictSeparationTol);

// For every ordered pair of Stieltjes label sets with arrow_same(B, C):
// proper_position(f_B, f_C) must be FllG (Proportional only for B == C).
// Margin: min interleaving-chain slack over the non-reflexive pairs.
CheckEntry verify_interlacing_same_degree(const DifferentialOperator& t,
                                          const SolveReport& report);

// For every (B, C) with arrow_consecutive(B, C), B at degree n and C at
// degree n + 1: proper_position(f_B, f_C) must be FllG.
CheckEntry verify_interlacing_consecutive(const DifferentialOperator& t,
                                          const SolveReport& lower,
                                          const SolveReport& upper);

// v_A comes before its shifted sibling: for every Van Vleck label set A
// inside [n + r - 1], proper_position(v_A, v_{A+1}) must be FllG.
// Vacuous pass when r == 0.
CheckEntry verify_vanvleck_shift(const DifferentialOperator& t,
                                 const SolveReport& report);

// Van Vleck chain across consecutive degrees: for every A inside [n + r],
// v_{A,n+1} << v_{A,n} << v_{A+1,n+1}.  Vacuous pass when r == 0.
CheckEntry verify_vanvleck_consecutive(const DifferentialOperator& t,
                                       const SolveReport& lower,
                                       const SolveReport& upper);

// --- convenience overloads that run the solves internally ---

CheckEntry verify_interlacing_same_degree(const DifferentialOperator& t, int n,
                                          const SolveOptions& opts = {});
CheckEntry verify_interlacing_consecutive(const DifferentialOperator& t, int n,
                                          const SolveOptions& opts = {});
CheckEntry verify_vanvleck_shift(const DifferentialOperator& t, int n,
                                 const SolveOptions& opts = {});
CheckEntry verify_vanvleck_consecutive(const DifferentialOperator& t, int n,
                                       const SolveOptions& opts = {});

// Monic polynomial of degree n + 1 whose roots are the roots of all
// n + 1 degree-one Van Vleck polynomials at Stieltjes degree n.  The two
// no-common-real-zero hypotheses under which the literature states its
// properties use different coefficient ranges; both are recorded.
struct SpectralPolynomial {
    int n = 0;
    RealPolynomial p;
    bool hypothesis_m_to_n = false;  // orders M..n share no real zero
    bool hypothesis_1_to_n = false;  // orders 1..n share no real zero
};

// Requires r == 1 (FuchsIndexNotOneError otherwise) and a complete report.
SpectralPolynomial spectral_polynomial(const DifferentialOperator& t,
                                       const SolveReport& report);
SpectralPolynomial spectral_polynomial(const DifferentialOperator& t, int n,
                                       const SolveOptions& opts = {});

// p_n and p_{n+1} interlace with no root pair closer than
// kStrictSeparationTol.  Margin: min interleaving-chain slack.
CheckEntry verify_spectral_interlacing(const SpectralPolynomial& lower,
                                       const SpectralPolynomial& upper);
CheckEntry verify_spectral_interlacing(const DifferentialOperator& t, int n,
                                       const SolveOptions& opts = {});

// Solves at degrees n and n + 1 and runs every applicable check (the
// spectral one only when r == 1).  Two calls with the same arguments
// produce identical reports.
VerificationReport verify_all(const DifferentialOperator& t, int n,
                              const SolveOptions& opts = {});
// Same bundle over solves the caller already has (lower at n, upper at n + 1).
VerificationReport verify_all(const DifferentialOperator& t, const SolveReport& lower,
                              const SolveReport& upper);

}  // namespace hslab
