#pragma once

#include <initializer_list>
#include <string>
#include <vector>

#include "hslab/errors.hpp"

namespace hslab {

// Default absolute tolerance on root brackets.
inline constexpr double kDefaultRootTol = 1e-12;

// Trailing coefficients smaller than this (relative to the largest
// coefficient magnitude) are dropped when the degree is computed.
inline constexpr double kCoeffTrimRel = 1e-13;

// Dense univariate polynomial with real coefficients stored in ascending
// order: coeffs()[i] multiplies z^i.  The zero polynomial has an empty
// coefficient vector and degree -1.  Construction normalizes: trailing
// coefficients below kCoeffTrimRel * max|c| are treated as zero.
class RealPolynomial {
  public:
    RealPolynomial() = default;
    RealPolynomial(std::initializer_list<double> coeffs);
    explicit RealPolynomial(std::vector<double> coeffs);

    static RealPolynomial constant(double c) { return RealPolynomial({c}); }

    const std::vector<double>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
    // Coefficient of z^i, 0 outside the stored range.
    double coeff(int i) const;

    double operator()(double x) const;

    std::string str() const;  // human-readable, for messages and logs

  private:
    std::vector<double> coeffs_;
};

// Roots in ascending order, multiple roots repeated; `leading` is the
// leading coefficient of the polynomial they came from, so that
// leading * prod(z - roots[i]) reconstructs it.
struct RootList {
    std::vector<double> roots;
    double leading = 0.0;
};

// Convex hull [lo, hi] of a root set.
struct RootInterval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    bool contains(double x, double slack = 0.0) const {
        return x >= lo - slack && x <= hi + slack;
    }
};

// Outcome of the proper-position test for an ordered pair (f, g).
// FllG: zeros interlace and the Wronskian f'g - fg' is <= 0 on the line.
// GllF: the reverse inequality.  Proportional: the Wronskian vanishes
// identically (covers proportional pairs and pairs involving the zero
// polynomial).  None: the pair is not in proper position either way.
enum class PositionKind { FllG, GllF, Proportional, None };

const char* to_string(PositionKind k);

double evaluate(const RealPolynomial& p, double x);
RealPolynomial derivative(const RealPolynomial& p);
RealPolynomial add(const RealPolynomial& p, const RealPolynomial& q);
RealPolynomial subtract(const RealPolynomial& p, const RealPolynomial& q);
RealPolynomial multiply(const RealPolynomial& p, const RealPolynomial& q);
RealPolynomial scale(const RealPolynomial& p, double s);
// Divides by the leading coefficient.  Throws ZeroPolynomialError on the
// zero polynomial.
RealPolynomial monic(const RealPolynomial& p);
// leading * prod(z - roots[i]); an empty root list gives the constant
// `leading`.
RealPolynomial from_roots(const std::vector<double>& roots, double leading = 1.0);

inline RealPolynomial operator+(const RealPolynomial& p, const RealPolynomial& q) { return add(p, q); }
inline RealPolynomial operator-(const RealPolynomial& p, const RealPolynomial& q) { return subtract(p, q); }
inline RealPolynomial operator*(const RealPolynomial& p, const RealPolynomial& q) { return multiply(p, q); }
inline RealPolynomial operator*(double s, const RealPolynomial& p) { return scale(p, s); }

// All real roots of p, ascending, with multiplicity.  Isolation brackets
// come from the recursive derivative sequence (between consecutive
// critical points the polynomial is strictly monotone); each bracket is
// narrowed by bisection to width `tol` and polished with one guarded
// Newton step.  Roots closer than max(tol, 1e-9 * (1 + spread)) are
// merged into a multiple root at their mean.  Throws NotHyperbolicError
// when fewer than degree(p) real roots can be certified, and
// ZeroPolynomialError on the zero polynomial.
RootList real_roots(const RealPolynomial& p, double tol = kDefaultRootTol);

// Convex hull of the real roots; requires degree >= 1.
RootInterval root_interval(const RealPolynomial& p, double tol = kDefaultRootTol);

// Classifies the ordered pair (f, g): interlacing of zeros is tested on
// the computed root vectors (with slack tol * (1 + spread)) and the sign
// of the Wronskian W[f,g] = f'g - fg' is sampled at every root, at the
// midpoints of consecutive root gaps, and at one point beyond each
// extreme root.  |W| below tol * scale counts as zero.
PositionKind proper_position(const RealPolynomial& f, const RealPolynomial& g,
                             double tol = kDefaultRootTol);

// Interleaving chains on sorted vectors (exact comparisons).  For equal
// lengths: x1 <= y1 <= x2 <= ... <= xk <= yk.  For len(y) == len(x) + 1:
// y1 <= x1 <= y2 <= ... <= xk <= y_{k+1}.  Throws LengthMismatchError for
// any other length combination.
bool vector_proper_position(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hslab
