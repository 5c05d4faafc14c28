#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hslab/errors.hpp"
#include "hslab/realpoly.hpp"

namespace hslab {

// classical_operator input is malformed (sizes, ordering, signs).
struct BadClassicalInputError : Error {
    using Error::Error;
};

// sandwich_operator: a zero of the envelope exceeds the allowed multiplicity.
struct MultiplicityTooHighError : Error {
    using Error::Error;
};

// pencil_operator matrix requirements.
struct NotPosDefError : Error {
    using Error::Error;
};
struct NotPsdError : Error {
    using Error::Error;
};
struct DegenerateSymbolError : Error {
    using Error::Error;
};

// common_real_zero: every coefficient in the requested range vanishes
// identically, so "common zero" is meaningless.
struct AllZeroRangeError : Error {
    using Error::Error;
};

// Linear differential operator sum_k Q_k(z) D^k held sparsely as a map
// from derivative order to coefficient polynomial.  Identically zero
// coefficients are dropped on construction; at least one term must
// remain.  min_order/max_order/fuchs_index are always derived from the
// current terms.
class DifferentialOperator {
  public:
    explicit DifferentialOperator(std::map<int, RealPolynomial> terms);

    const std::map<int, RealPolynomial>& terms() const { return terms_; }
    int min_order() const { return terms_.begin()->first; }
    int max_order() const { return terms_.rbegin()->first; }
    // max over terms of deg Q_k - k; may be negative.
    int fuchs_index() const;
    // Q_k, the zero polynomial when the order is absent.
    const RealPolynomial& coefficient(int k) const;

  private:
    std::map<int, RealPolynomial> terms_;
};

// sum_k Q_k f^(k); returns the zero polynomial when every term dies.
RealPolynomial apply(const DifferentialOperator& t, const RealPolynomial& f);

// Leading coefficient of T(z^n + ...) for monic degree-n input:
// sum_i i! * a_i * C(n, i) with a_i the coefficient of z^(r+i) in Q_i.
double lambda_n(const DifferentialOperator& t, int n);

// Degree-lowering second-order operator from node/weight data:
// Q_2 = prod_j (z - alpha_j), Q_1 = sum_j gamma_j prod_{i != j} (z - alpha_i).
// Requires at least two strictly increasing alphas and matching strictly
// positive gammas.
DifferentialOperator classical_operator(const std::vector<double>& alphas,
                                        const std::vector<double>& gammas);

// T(f) = D^(n_out - m_in) (P * D^(m_in) f), expanded by the Leibniz rule
// into sum_k C(n_out - m_in, k - m_in) P^(n_out - k) D^k.  P must be
// hyperbolic with no zero of multiplicity above n_out - m_in.
DifferentialOperator sandwich_operator(const RealPolynomial& p, int m_in, int n_out);

// Operator whose symbol is det(z A + w B + C) for symmetric s x s
// matrices (row-major, 2d vectors), A positive definite and B positive
// semi-definite (eigenvalues >= -1e-10 * norm).  The bivariate
// determinant is recovered by nested univariate interpolation on an
// (s+1)^2 grid of Chebyshev-spaced nodes scaled by 1 + matrix norms.
// The operator order is s minus the multiplicity of eigenvalue 0 of B,
// which is also the resulting Fuchs index.
DifferentialOperator pencil_operator(const std::vector<std::vector<double>>& a,
                                     const std::vector<std::vector<double>>& b,
                                     const std::vector<std::vector<double>>& c);

// A point where the symbol sum_k Q_k(z) w^(N-k) vanishes with both
// imaginary parts positive: a certificate that the operator cannot
// preserve hyperbolicity.
struct StabilityWitness {
    double z_re = 0.0, z_im = 0.0;
    double w_re = 0.0, w_im = 0.0;
};

// Necessary structural conditions plus a randomized stability falsifier.
struct HpDiagnostics {
    int fuchs_index = 0;
    bool nondegenerate = false;       // deg Q_N == N + r
    bool degree_bounds_ok = false;    // deg Q_k <= r + k for every term
    RealPolynomial leading_poly;      // sum_i a_i z^i
    bool leading_poly_ok = false;     // hyperbolic with all roots <= 0
    bool coefficient_chain_ok = false;  // Q_j << Q_{j+1} along the order range
    int leading_sign = 0;             // common sign of the nonzero a_i, 0 if mixed
    std::optional<StabilityWitness> witness;
    int samples_used = 0;

    bool structural_ok() const {
        return nondegenerate && degree_bounds_ok && leading_poly_ok && coefficient_chain_ok;
    }
};

// Runs every structural check and samples `samples` random points z with
// Im z in (0, 3], |Re z| <= 3, looking for a w-root of the symbol with
// Im w > 1e-9.  Deterministic for a fixed seed.
HpDiagnostics diagnose(const DifferentialOperator& t, std::uint64_t seed = 0,
                       int samples = 1000);

// First real theta (ascending) at which every Q_k, kmin <= k <= kmax,
// vanishes within 1e-9 relative to its local magnitude profile.  Orders
// absent from the operator are identically zero and never obstruct.
// Throws AllZeroRangeError when no nonzero coefficient exists in range.
std::optional<double> common_real_zero(const DifferentialOperator& t, int kmin, int kmax);

}  // namespace hslab
